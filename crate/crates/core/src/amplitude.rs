//! Spin-summed squared amplitude for e⁻e⁻ → e⁻e⁻.
//!
//! `A`, `B` and `C` are the direct, exchange and interference trace products.
//! They can be taken from the closed forms or evaluated by brute force
//! from the gamma matrices; the propagator factors carry the Podolsky mass.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::clifford::{dirac_numerator, trace_product, trace_reduce, GammaFactor, GammaRep};
use crate::error::{domain, pole, Result};
use crate::kinematics::{cm_kinematics, CmMomenta, MandelstamSet, HBAR_C_MEV_FM};

/// Electron mass in MeV.
pub const ELECTRON_MASS_MEV: f64 = 0.510;
/// Fine-structure constant.
pub const ALPHA_QED: f64 = 1.0 / 137.0;
/// Podolsky mass corresponding to a 3 fm length scale, rounded as quoted.
pub const MP_LATTICE_MEV: f64 = 65.77;

/// Where `A`, `B`, `C` come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceSource {
    ClosedForm,
    BruteForce,
}

impl TraceSource {
    pub fn as_str(&self) -> &'static str {
        match self {
            TraceSource::ClosedForm => "closed_form",
            TraceSource::BruteForce => "brute_force",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceTriple {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub source: TraceSource,
    /// Largest `|Im|/|Re|` of `A` and `B`; zero for closed forms.
    pub imag_residue: f64,
    /// Imaginary part of the single interference trace. It is parity odd
    /// (proportional to `m ε(p, q, p′)`) and cancels against the conjugate
    /// interference term, so only the real part enters `C`.
    pub c_imag: f64,
}

impl TraceTriple {
    pub fn max_relative_deviation(&self, other: &TraceTriple) -> f64 {
        [(self.a, other.a), (self.b, other.b), (self.c, other.c)]
            .iter()
            .map(|&(x, y)| relative_deviation(x, y))
            .fold(0.0, f64::max)
    }
}

/// `|x - y| / |y|`, falling back to the absolute difference when `y = 0`.
pub fn relative_deviation(x: f64, y: f64) -> f64 {
    let d = (x - y).abs();
    if y == 0.0 {
        d
    } else {
        d / y.abs()
    }
}

/// Physical constants that enter every cross-section formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    /// Electron mass in MeV.
    pub m_e: f64,
    pub alpha: f64,
    /// Podolsky mass in MeV; `f64::INFINITY` gives the Maxwell limit.
    pub m_p: f64,
    /// ħc in MeV·fm.
    pub hbar_c: f64,
}

impl Default for PhysicalParams {
    fn default() -> Self {
        PhysicalParams {
            m_e: ELECTRON_MASS_MEV,
            alpha: ALPHA_QED,
            m_p: MP_LATTICE_MEV,
            hbar_c: HBAR_C_MEV_FM,
        }
    }
}

impl PhysicalParams {
    pub fn new(m_e: f64, alpha: f64, m_p: f64) -> Result<Self> {
        let params = PhysicalParams { m_e, alpha, m_p, hbar_c: HBAR_C_MEV_FM };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.m_e > 0.0 && self.m_e.is_finite()) {
            return Err(domain(format!("electron mass must be positive, got {}", self.m_e)));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(domain(format!("alpha must be positive, got {}", self.alpha)));
        }
        if !(self.m_p > 0.0) || self.m_p.is_nan() {
            return Err(domain(format!("Podolsky mass must be positive, got {}", self.m_p)));
        }
        Ok(())
    }

    pub fn with_alpha(self, alpha: f64) -> Self {
        PhysicalParams { alpha, ..self }
    }

    pub fn with_mp(self, m_p: f64) -> Self {
        PhysicalParams { m_p, ..self }
    }

    /// Classical electron radius `α/m` in natural units.
    pub fn electron_radius(&self) -> f64 {
        self.alpha / self.m_e
    }

    /// Same parameters in the Maxwell limit.
    pub fn maxwell(self) -> Self {
        self.with_mp(f64::INFINITY)
    }
}

/// `Σ_{λν} Tr[γ_λ X γ_ν Y] Tr[γ^λ Z γ^ν W]`
fn contracted_pair(rep: &GammaRep, x: [crate::clifford::ComplexMat2; 4]) -> Complex64 {
    let [np, nx, nq, ny] = x;
    let mut sum = Complex64::new(0.0, 0.0);
    for l in 0..3 {
        for n in 0..3 {
            let first = trace_product(&[rep.lower(l), np, rep.lower(n), nx]);
            let second = trace_product(&[rep.upper(l), nq, rep.upper(n), ny]);
            sum += first * second;
        }
    }
    sum
}

fn imag_ratio(z: Complex64) -> f64 {
    if z.re == 0.0 {
        z.im.abs()
    } else {
        (z.im / z.re).abs()
    }
}

/// `A`, `B`, `C` by explicit 2×2 matrix products.
///
/// The spin-sum numerators are `iγ·k - m` for all four electrons, exactly as
/// they enter the squared amplitude; no factor `i` multiplies the second trace.
/// `C` is `-2 Re Tr[...]`; the imaginary part is kept in `c_imag`.
pub fn trace_triple_bruteforce(rep: &GammaRep, momenta: &CmMomenta, m: f64) -> Result<TraceTriple> {
    momenta.validate(m)?;
    let np = dirac_numerator(rep, &momenta.p, m);
    let nq = dirac_numerator(rep, &momenta.q, m);
    let npo = dirac_numerator(rep, &momenta.p_out, m);
    let nqo = dirac_numerator(rep, &momenta.q_out, m);

    let a = contracted_pair(rep, [np, npo, nq, nqo]);
    let b = contracted_pair(rep, [np, nqo, nq, npo]);
    let mut c = Complex64::new(0.0, 0.0);
    for l in 0..3 {
        for n in 0..3 {
            c += trace_product(&[
                rep.lower(l),
                np,
                rep.lower(n),
                nqo,
                rep.upper(l),
                nq,
                rep.upper(n),
                npo,
            ]);
        }
    }
    c *= -2.0;

    Ok(TraceTriple {
        a: a.re,
        b: b.re,
        c: c.re,
        source: TraceSource::BruteForce,
        imag_residue: imag_ratio(a).max(imag_ratio(b)),
        c_imag: c.im,
    })
}

/// `A`, `B`, `C` through [`trace_reduce`]; independent of the matrix route.
pub fn trace_triple_reduced(rep: &GammaRep, momenta: &CmMomenta, m: f64) -> Result<TraceTriple> {
    momenta.validate(m)?;
    let d = |k| GammaFactor::dirac(k, m);
    let (p, q, po, qo) = (momenta.p, momenta.q, momenta.p_out, momenta.q_out);
    use GammaFactor::{Lower, Upper};

    let mut a = Complex64::new(0.0, 0.0);
    let mut b = Complex64::new(0.0, 0.0);
    let mut c = Complex64::new(0.0, 0.0);
    for l in 0..3 {
        for n in 0..3 {
            a += trace_reduce(rep, &[Lower(l), d(p), Lower(n), d(po)])?
                * trace_reduce(rep, &[Upper(l), d(q), Upper(n), d(qo)])?;
            b += trace_reduce(rep, &[Lower(l), d(p), Lower(n), d(qo)])?
                * trace_reduce(rep, &[Upper(l), d(q), Upper(n), d(po)])?;
            c += trace_reduce(
                rep,
                &[Lower(l), d(p), Lower(n), d(qo), Upper(l), d(q), Upper(n), d(po)],
            )?;
        }
    }
    c *= -2.0;
    Ok(TraceTriple {
        a: a.re,
        b: b.re,
        c: c.re,
        source: TraceSource::BruteForce,
        imag_residue: imag_ratio(a).max(imag_ratio(b)),
        c_imag: c.im,
    })
}

/// `2(s² + u² - t²/2) + 16m²(s + u - t/2) + 48m⁴`
pub fn closed_a(s: f64, t: f64, u: f64, m: f64) -> f64 {
    let m2 = m * m;
    2.0 * (s * s + u * u - t * t / 2.0) + 16.0 * m2 * (s + u - t / 2.0) + 48.0 * m2 * m2
}

/// `2(s² + t² - u²/2) + 16m²(s + t - u/2) + 48m⁴`
pub fn closed_b(s: f64, t: f64, u: f64, m: f64) -> f64 {
    let m2 = m * m;
    2.0 * (s * s + t * t - u * u / 2.0) + 16.0 * m2 * (s + t - u / 2.0) + 48.0 * m2 * m2
}

/// `(5s² - u² - t²) + 8m²(5s - u - t) + 36m⁴`
pub fn closed_c(s: f64, t: f64, u: f64, m: f64) -> f64 {
    let m2 = m * m;
    (5.0 * s * s - u * u - t * t) + 8.0 * m2 * (5.0 * s - u - t) + 36.0 * m2 * m2
}

pub fn closed_triple(ms: &MandelstamSet) -> TraceTriple {
    let MandelstamSet { s, t, u, m } = *ms;
    TraceTriple {
        a: closed_a(s, t, u, m),
        b: closed_b(s, t, u, m),
        c: closed_c(s, t, u, m),
        source: TraceSource::ClosedForm,
        imag_residue: 0.0,
        c_imag: 0.0,
    }
}

/// `A`, `B`, `C` at the given invariants from the chosen source. The brute-force
/// route reconstructs centre-of-mass momenta first.
pub fn trace_triple(rep: &GammaRep, ms: &MandelstamSet, source: TraceSource) -> Result<TraceTriple> {
    match source {
        TraceSource::ClosedForm => Ok(closed_triple(ms)),
        TraceSource::BruteForce => {
            let state = ms.to_cm_state()?;
            trace_triple_bruteforce(rep, &cm_kinematics(&state), ms.m)
        }
    }
}

/// Photon propagator with the Podolsky term, `1/(k²(1 + k²/m_P²))`.
///
/// Equal to `1/k² - 1/(k² + m_P²)`: a Maxwell photon minus a massive one.
pub fn podolsky_factor(k2: f64, m_p: f64) -> Result<f64> {
    if !(m_p > 0.0) {
        return Err(domain(format!("Podolsky mass must be positive, got {m_p}")));
    }
    if k2 == 0.0 {
        return Err(pole("forward Coulomb pole at k² = 0"));
    }
    let mp2 = m_p * m_p;
    let shift = 1.0 + k2 / mp2;
    if shift.abs() <= 1e-12 {
        return Err(pole(format!("massive Podolsky pole at k² = -m_P² = {}", -mp2)));
    }
    Ok(1.0 / (k2 * shift))
}

/// `A/(t²(1+t/m_P²)²) + B/(u²(1+u/m_P²)²) + C/(ut(1+t/m_P²)(1+u/m_P²))`
pub fn bracket_from_triple(ms: &MandelstamSet, m_p: f64, triple: &TraceTriple) -> Result<f64> {
    let ft = podolsky_factor(ms.t, m_p)?;
    let fu = podolsky_factor(ms.u, m_p)?;
    Ok(triple.a * ft * ft + triple.b * fu * fu + triple.c * ft * fu)
}

fn check_channels(ms: &MandelstamSet) -> Result<()> {
    if ms.t == 0.0 || ms.u == 0.0 {
        return Err(pole(format!("t = {}, u = {}: forward/backward Coulomb pole", ms.t, ms.u)));
    }
    if ms.t < 0.0 || ms.u < 0.0 {
        return Err(domain(format!("t = {}, u = {} must be positive", ms.t, ms.u)));
    }
    Ok(())
}

/// The three-term bracket of the invariant cross section.
pub fn msq_bracket(
    rep: &GammaRep,
    ms: &MandelstamSet,
    params: &PhysicalParams,
    source: TraceSource,
) -> Result<f64> {
    check_channels(ms)?;
    let triple = trace_triple(rep, ms, source)?;
    bracket_from_triple(ms, params.m_p, &triple)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::gamma_rep;
    use crate::kinematics::{mandelstam, CmState, LorentzVec3};

    #[test]
    fn closed_form_hand_values() {
        assert_eq!(closed_a(-4.0, 2.0, 2.0, 0.0), 36.0);
        assert_eq!(closed_a(-16.0, 0.0, 12.0, 1.0), 784.0);
        for (s, t, u, m) in [(-16.0, 6.0, 6.0, 1.0), (-9.0, 1.5, 3.5, 1.0), (-30.0, 20.0, 6.0, 0.7)] {
            assert_eq!(closed_c(s, t, u, m), closed_c(s, u, t, m));
            assert_eq!(closed_a(s, t, u, m), closed_b(s, u, t, m));
        }
    }

    #[test]
    fn podolsky_factor_examples() {
        let mp = 3.0;
        assert!((podolsky_factor(mp * mp, mp).unwrap() - 1.0 / (2.0 * mp * mp)).abs() < 1e-16);
        assert_eq!(podolsky_factor(1.0, 1.0).unwrap(), 0.5);
        assert_eq!(podolsky_factor(2.5, f64::INFINITY).unwrap(), 1.0 / 2.5);
        assert!((podolsky_factor(2.5, 1e9).unwrap() * 2.5 - 1.0).abs() < 1e-17 + 1e-17);
        assert!(matches!(podolsky_factor(0.0, 1.0), Err(crate::Error::Pole(_))));
        assert!(matches!(podolsky_factor(-4.0, 2.0), Err(crate::Error::Pole(_))));
    }

    #[test]
    fn bruteforce_forward_point_is_real() {
        let rep = gamma_rep();
        let k = cm_kinematics(&CmState::new(2.0, 0.0, 1.0).unwrap());
        let bf = trace_triple_bruteforce(&rep, &k, 1.0).unwrap();
        assert!(bf.imag_residue < 1e-8);
        assert!(bf.a.is_finite() && bf.b.is_finite() && bf.c.is_finite());
        assert_eq!(bf.a, 784.0);
    }

    #[test]
    fn interference_imaginary_part_is_parity_odd() {
        use crate::clifford::epsilon_contract;
        let rep = gamma_rep();
        for (e, th, m) in [(2.0, 1.0, 1.0), (5.0, 0.3, 0.51), (2.2, 2.9, 2.0)] {
            let k = cm_kinematics(&CmState::new(e, th, m).unwrap());
            let bf = trace_triple_bruteforce(&rep, &k, m).unwrap();
            let expected = 48.0 * rep.epsilon_sign * m * epsilon_contract(&k.p, &k.q, &k.p_out);
            assert!((bf.c_imag - expected).abs() < 1e-10 * expected.abs(), "{} vs {expected}", bf.c_imag);
            // mirror image flips the sign, the real parts are unchanged
            let mirror = |v: LorentzVec3| LorentzVec3::new(v.e, v.px, -v.py);
            let km = CmMomenta { p: mirror(k.p), q: mirror(k.q), p_out: mirror(k.p_out), q_out: mirror(k.q_out) };
            let bm = trace_triple_bruteforce(&rep, &km, m).unwrap();
            assert!((bm.c_imag + bf.c_imag).abs() < 1e-10 * expected.abs());
            assert!(bm.max_relative_deviation(&bf) < 1e-12);
        }
    }

    #[test]
    fn exchange_maps_a_to_b() {
        let rep = gamma_rep();
        let k = cm_kinematics(&CmState::new(1.9, 0.83, 0.51).unwrap());
        let x = trace_triple_bruteforce(&rep, &k, 0.51).unwrap();
        let y = trace_triple_bruteforce(&rep, &k.exchanged(), 0.51).unwrap();
        assert_eq!(x.a, y.b);
        assert_eq!(x.b, y.a);
    }

    #[test]
    fn bruteforce_is_rotation_invariant() {
        let rep = gamma_rep();
        let k = cm_kinematics(&CmState::new(3.1, 1.2, 1.0).unwrap());
        let x = trace_triple_bruteforce(&rep, &k, 1.0).unwrap();
        let y = trace_triple_bruteforce(&rep, &k.rotated(0.77), 1.0).unwrap();
        assert!(x.max_relative_deviation(&y) < 1e-10);
    }

    #[test]
    fn reduced_matches_bruteforce() {
        let rep = gamma_rep();
        let k = cm_kinematics(&CmState::new(2.4, 2.1, 1.0).unwrap());
        let x = trace_triple_bruteforce(&rep, &k, 1.0).unwrap();
        let y = trace_triple_reduced(&rep, &k, 1.0).unwrap();
        assert!(x.max_relative_deviation(&y) < 1e-10);
    }

    #[test]
    fn bracket_examples() {
        let rep = gamma_rep();
        let ms = MandelstamSet::new(-16.0, 6.0, 6.0, 1.0).unwrap();
        let params = PhysicalParams::new(1.0, 1.0, 1e6).unwrap();
        let a = closed_a(-16.0, 6.0, 6.0, 1.0);
        let b = closed_b(-16.0, 6.0, 6.0, 1.0);
        let c = closed_c(-16.0, 6.0, 6.0, 1.0);
        let bracket = msq_bracket(&rep, &ms, &params, TraceSource::ClosedForm).unwrap();
        assert!(((a + b) / 36.0 + c / 36.0 - bracket).abs() < 1e-9 * bracket.abs());

        let inf = params.maxwell();
        let ms = MandelstamSet::new(-9.0, 1.5, 3.5, 1.0).unwrap();
        let exact = msq_bracket(&rep, &ms, &inf, TraceSource::ClosedForm).unwrap();
        let t = closed_triple(&ms);
        let pure = t.a / (1.5 * 1.5) + t.b / (3.5 * 3.5) + t.c / (1.5 * 3.5);
        assert!((exact - pure).abs() < 1e-14 * pure.abs());

        let swapped = msq_bracket(&rep, &ms.swapped(), &params, TraceSource::ClosedForm).unwrap();
        let direct = msq_bracket(&rep, &ms, &params, TraceSource::ClosedForm).unwrap();
        assert!((swapped - direct).abs() < 1e-14 * direct.abs());

        let forward = MandelstamSet::from_raw(-16.0, 0.0, 12.0, 1.0);
        assert!(matches!(
            msq_bracket(&rep, &forward, &params, TraceSource::ClosedForm),
            Err(crate::Error::Pole(_))
        ));
    }

    #[test]
    fn bruteforce_bracket_from_invariants() {
        let rep = gamma_rep();
        let state = CmState::new(2.0, 1.0, 1.0).unwrap();
        let k = cm_kinematics(&state);
        let ms = mandelstam(&k, 1.0).unwrap();
        let direct = trace_triple_bruteforce(&rep, &k, 1.0).unwrap();
        let via = trace_triple(&rep, &ms, TraceSource::BruteForce).unwrap();
        assert!(direct.max_relative_deviation(&via) < 1e-10);
    }

    #[test]
    fn params_validation() {
        assert!(PhysicalParams::new(0.0, 1.0, 1.0).is_err());
        assert!(PhysicalParams::new(1.0, -1.0, 1.0).is_err());
        assert!(PhysicalParams::new(1.0, 1.0, 0.0).is_err());
        assert!(PhysicalParams::new(1.0, 1.0, f64::INFINITY).is_ok());
        let p = PhysicalParams::default();
        assert_eq!((p.m_e, p.m_p), (0.510, 65.77));
    }
}
