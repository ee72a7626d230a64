//! Relativistic kinematics in 2+1 dimensions.
//!
//! Vectors carry an upper-index energy component and two spatial components.
//! The metric has signature (-, +, +), so an on-shell momentum satisfies
//! `p·p = -m²` and the Mandelstam invariant `s` is negative.

use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{domain, validation, Result};

/// ħc in MeV·fm.
pub const HBAR_C_MEV_FM: f64 = 197.326_980_4;

/// Relative tolerance used when validating on-shell and conservation constraints.
pub const ON_SHELL_TOL: f64 = 1e-8;

/// Relative tolerance for the `s + t + u = -4m²` identity.
pub const MANDELSTAM_SUM_TOL: f64 = 1e-10;

/// Energy-momentum vector `(e, px, py)` in MeV.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct LorentzVec3 {
    pub e: f64,
    pub px: f64,
    pub py: f64,
}

impl LorentzVec3 {
    pub const ZERO: LorentzVec3 = LorentzVec3 { e: 0.0, px: 0.0, py: 0.0 };

    pub const fn new(e: f64, px: f64, py: f64) -> Self {
        LorentzVec3 { e, px, py }
    }

    /// Upper-index components `[e, px, py]`.
    pub fn components(&self) -> [f64; 3] {
        [self.e, self.px, self.py]
    }

    pub fn from_components(c: [f64; 3]) -> Self {
        LorentzVec3::new(c[0], c[1], c[2])
    }

    pub fn dot(&self, other: &LorentzVec3) -> f64 {
        minkowski_dot(self, other)
    }

    pub fn norm2(&self) -> f64 {
        minkowski_dot(self, self)
    }

    pub fn spatial_norm(&self) -> f64 {
        self.px.hypot(self.py)
    }

    /// The same vector with the energy component reversed.
    pub fn energy_reflected(&self) -> Self {
        LorentzVec3::new(-self.e, self.px, self.py)
    }

    /// Rotates the spatial part by `phi` radians.
    pub fn rotated(&self, phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        LorentzVec3::new(self.e, c * self.px - s * self.py, s * self.px + c * self.py)
    }

    pub fn is_finite(&self) -> bool {
        self.e.is_finite() && self.px.is_finite() && self.py.is_finite()
    }

    fn max_abs(&self) -> f64 {
        self.e.abs().max(self.px.abs()).max(self.py.abs())
    }
}

impl Add for LorentzVec3 {
    type Output = LorentzVec3;
    fn add(self, rhs: LorentzVec3) -> LorentzVec3 {
        LorentzVec3::new(self.e + rhs.e, self.px + rhs.px, self.py + rhs.py)
    }
}

impl Sub for LorentzVec3 {
    type Output = LorentzVec3;
    fn sub(self, rhs: LorentzVec3) -> LorentzVec3 {
        LorentzVec3::new(self.e - rhs.e, self.px - rhs.px, self.py - rhs.py)
    }
}

impl Neg for LorentzVec3 {
    type Output = LorentzVec3;
    fn neg(self) -> LorentzVec3 {
        LorentzVec3::new(-self.e, -self.px, -self.py)
    }
}

impl Mul<LorentzVec3> for f64 {
    type Output = LorentzVec3;
    fn mul(self, rhs: LorentzVec3) -> LorentzVec3 {
        LorentzVec3::new(self * rhs.e, self * rhs.px, self * rhs.py)
    }
}

/// `-a.e·b.e + a.px·b.px + a.py·b.py`
pub fn minkowski_dot(a: &LorentzVec3, b: &LorentzVec3) -> f64 {
    -a.e * b.e + a.px * b.px + a.py * b.py
}

/// Positive-energy on-shell momentum with the given spatial components.
pub fn on_shell_momentum(m: f64, px: f64, py: f64) -> Result<LorentzVec3> {
    if !(m >= 0.0) {
        return Err(domain(format!("mass must be non-negative, got {m}")));
    }
    let e = (m * m + px * px + py * py).sqrt();
    Ok(LorentzVec3::new(e, px, py))
}

/// Checks `p·p = -m²` to [`ON_SHELL_TOL`] relative to `E²`.
pub fn check_on_shell(p: &LorentzVec3, m: f64, label: &str) -> Result<()> {
    if !p.is_finite() {
        return Err(validation(format!("{label} has non-finite components")));
    }
    let scale = (p.e * p.e).max(m * m).max(f64::MIN_POSITIVE);
    let residual = p.norm2() + m * m;
    if residual.abs() > ON_SHELL_TOL * scale {
        return Err(validation(format!(
            "{label} is off-shell: p·p + m² = {residual:e} for m = {m}"
        )));
    }
    if p.e < 0.0 {
        return Err(validation(format!("{label} has negative energy")));
    }
    Ok(())
}

/// Invariants `(s, t, u)` in MeV² together with the mass they refer to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MandelstamSet {
    pub s: f64,
    pub t: f64,
    pub u: f64,
    pub m: f64,
}

impl MandelstamSet {
    /// Validated constructor: enforces `s + t + u = -4m²` and the physical
    /// region `t, u ≥ 0`, `s ≤ -4m²` up to round-off.
    pub fn new(s: f64, t: f64, u: f64, m: f64) -> Result<Self> {
        let ms = MandelstamSet { s, t, u, m };
        ms.validate()?;
        Ok(ms)
    }

    /// Unchecked constructor for formula evaluation at arbitrary points.
    pub const fn from_raw(s: f64, t: f64, u: f64, m: f64) -> Self {
        MandelstamSet { s, t, u, m }
    }

    pub fn scale(&self) -> f64 {
        self.s.abs().max(self.t.abs()).max(self.u.abs()).max(4.0 * self.m * self.m)
    }

    /// `s + t + u + 4m²`
    pub fn sum_residual(&self) -> f64 {
        self.s + self.t + self.u + 4.0 * self.m * self.m
    }

    pub fn validate(&self) -> Result<()> {
        let Self { s, t, u, m } = *self;
        if ![s, t, u, m].iter().all(|x| x.is_finite()) {
            return Err(validation("Mandelstam invariants must be finite"));
        }
        if m < 0.0 {
            return Err(validation(format!("mass must be non-negative, got {m}")));
        }
        let tol = MANDELSTAM_SUM_TOL * self.scale();
        if self.sum_residual().abs() > tol {
            return Err(validation(format!(
                "s + t + u = {} differs from -4m² = {}",
                s + t + u,
                -4.0 * m * m
            )));
        }
        if t < -tol || u < -tol {
            return Err(validation(format!("t = {t}, u = {u} must be non-negative")));
        }
        if s > -4.0 * m * m + tol {
            return Err(validation(format!("s = {s} is above threshold -4m²")));
        }
        Ok(())
    }

    /// `t ↔ u`
    pub fn swapped(&self) -> Self {
        MandelstamSet { s: self.s, t: self.u, u: self.t, m: self.m }
    }

    /// `p·q` reconstructed from `s = -2m² + 2 p·q`.
    pub fn p_dot_q(&self) -> f64 {
        (self.s + 2.0 * self.m * self.m) / 2.0
    }

    /// Centre-of-mass state reproducing these invariants.
    pub fn to_cm_state(&self) -> Result<CmState> {
        let energy = (-self.s).max(0.0).sqrt() / 2.0;
        let p2 = energy * energy - self.m * self.m;
        if !(p2 > 0.0) {
            return Err(domain("no scattering angle at threshold"));
        }
        // t = 4 p² sin²(θ/2); use both t and u for a well-conditioned angle.
        let theta = 2.0 * self.t.max(0.0).sqrt().atan2(self.u.max(0.0).sqrt());
        CmState::new(energy, theta, self.m)
    }
}

/// Centre-of-mass configuration: beam energy, scattering angle, mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CmState {
    pub energy: f64,
    pub theta: f64,
    pub m: f64,
}

impl CmState {
    /// Accepts `E ≥ m ≥ 0` and `θ ∈ [0, π]`. The angular endpoints are regular
    /// kinematically; cross-section routines reject them separately.
    pub fn new(energy: f64, theta: f64, m: f64) -> Result<Self> {
        if !(m >= 0.0) || !m.is_finite() {
            return Err(domain(format!("mass must be non-negative, got {m}")));
        }
        if !energy.is_finite() || energy < m {
            return Err(domain(format!("beam energy {energy} is below the mass {m}")));
        }
        if !(0.0..=std::f64::consts::PI).contains(&theta) {
            return Err(domain(format!("scattering angle {theta} outside [0, π]")));
        }
        Ok(CmState { energy, theta, m })
    }

    /// `|p|²`
    pub fn p2(&self) -> f64 {
        (self.energy - self.m) * (self.energy + self.m)
    }

    /// `|p|`
    pub fn p_mag(&self) -> f64 {
        self.p2().max(0.0).sqrt()
    }
}

/// Incoming `p, q` and outgoing `p′, q′` in the centre-of-mass frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CmMomenta {
    pub p: LorentzVec3,
    pub q: LorentzVec3,
    pub p_out: LorentzVec3,
    pub q_out: LorentzVec3,
}

impl CmMomenta {
    /// Exchanges the two outgoing momenta, which maps `t ↔ u`.
    pub fn exchanged(&self) -> Self {
        CmMomenta { p_out: self.q_out, q_out: self.p_out, ..*self }
    }

    pub fn rotated(&self, phi: f64) -> Self {
        CmMomenta {
            p: self.p.rotated(phi),
            q: self.q.rotated(phi),
            p_out: self.p_out.rotated(phi),
            q_out: self.q_out.rotated(phi),
        }
    }

    /// Checks on-shell and momentum conservation constraints.
    pub fn validate(&self, m: f64) -> Result<()> {
        check_on_shell(&self.p, m, "p")?;
        check_on_shell(&self.q, m, "q")?;
        check_on_shell(&self.p_out, m, "p′")?;
        check_on_shell(&self.q_out, m, "q′")?;
        let balance = (self.p + self.q) - (self.p_out + self.q_out);
        let scale = [self.p, self.q, self.p_out, self.q_out]
            .iter()
            .map(LorentzVec3::max_abs)
            .fold(m, f64::max)
            .max(f64::MIN_POSITIVE);
        if balance.max_abs() > ON_SHELL_TOL * scale {
            return Err(validation(format!(
                "energy-momentum not conserved: p + q - p′ - q′ = ({:e}, {:e}, {:e})",
                balance.e, balance.px, balance.py
            )));
        }
        Ok(())
    }
}

/// CM momenta with `p` along the +x axis and the outgoing pair rotated by θ.
pub fn cm_kinematics(state: &CmState) -> CmMomenta {
    let e = state.energy;
    let k = state.p_mag();
    let (sin, cos) = state.theta.sin_cos();
    CmMomenta {
        p: LorentzVec3::new(e, k, 0.0),
        q: LorentzVec3::new(e, -k, 0.0),
        p_out: LorentzVec3::new(e, k * cos, k * sin),
        q_out: LorentzVec3::new(e, -k * cos, -k * sin),
    }
}

/// Mandelstam invariants from four external momenta.
pub fn mandelstam(momenta: &CmMomenta, m: f64) -> Result<MandelstamSet> {
    momenta.validate(m)?;
    let CmMomenta { p, q, p_out, q_out: _ } = *momenta;
    let m2 = m * m;
    let s = -2.0 * m2 + 2.0 * p.dot(&q);
    let t = -2.0 * m2 - 2.0 * p.dot(&p_out);
    let u = -2.0 * m2 - 2.0 * p_out.dot(&q);
    Ok(MandelstamSet::from_raw(s, t, u, m))
}

/// Closed-form CM invariants: `s = -4E²`, `t = 4p² sin²(θ/2)`, `u = 4p² cos²(θ/2)`.
pub fn mandelstam_cm(state: &CmState) -> MandelstamSet {
    let p2 = state.p2();
    let half = state.theta / 2.0;
    let (sh, ch) = half.sin_cos();
    MandelstamSet::from_raw(
        -4.0 * state.energy * state.energy,
        4.0 * p2 * sh * sh,
        4.0 * p2 * ch * ch,
        state.m,
    )
}

/// Invariant relative velocity `√((p·q)² - m⁴) / (E_p E_q)`.
pub fn relative_velocity(p: &LorentzVec3, q: &LorentzVec3, m: f64) -> Result<f64> {
    check_on_shell(p, m, "p")?;
    check_on_shell(q, m, "q")?;
    let pq = p.dot(q);
    let m4 = m * m * m * m;
    let d = pq * pq - m4;
    if d < -ON_SHELL_TOL * m4 {
        return Err(domain(format!("(p·q)² = {} is below m⁴ = {m4}", pq * pq)));
    }
    if p.e == 0.0 || q.e == 0.0 {
        return Err(domain("relative velocity needs non-zero energies"));
    }
    Ok(d.max(0.0).sqrt() / (p.e * q.e))
}

/// Podolsky mass `ħc / a` in MeV for a length scale `a` in fm.
pub fn podolsky_mass_from_length(a_fm: f64) -> Result<f64> {
    if !(a_fm > 0.0) || !a_fm.is_finite() {
        return Err(domain(format!("length must be positive, got {a_fm}")));
    }
    Ok(HBAR_C_MEV_FM / a_fm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn dot_examples() {
        let p = on_shell_momentum(1.0, 0.3, -0.7).unwrap();
        assert!(close(p.norm2(), -1.0, 1e-14));
        let a = LorentzVec3::new(0.0, 1.0, 0.0);
        let b = LorentzVec3::new(0.0, 0.0, 1.0);
        assert_eq!(minkowski_dot(&a, &b), 0.0);
        let p = LorentzVec3::new(2.0, 3f64.sqrt(), 0.0);
        let q = LorentzVec3::new(1.0, 0.0, 0.0);
        assert_eq!(minkowski_dot(&p, &q), -2.0);
    }

    #[test]
    fn on_shell_examples() {
        let p = on_shell_momentum(1.0, 3f64.sqrt(), 0.0).unwrap();
        assert!(close(p.e, 2.0, 1e-15));
        assert_eq!(on_shell_momentum(0.0, 1.0, 0.0).unwrap(), LorentzVec3::new(1.0, 1.0, 0.0));
        assert_eq!(on_shell_momentum(0.510, 0.0, 0.0).unwrap(), LorentzVec3::new(0.510, 0.0, 0.0));
        assert!(matches!(on_shell_momentum(-1.0, 0.0, 0.0), Err(crate::Error::Domain(_))));
    }

    #[test]
    fn cm_examples() {
        let k = cm_kinematics(&CmState::new(2.0, FRAC_PI_2, 1.0).unwrap());
        let r3 = 3f64.sqrt();
        assert!(close(k.p.px, r3, 1e-15) && k.p.e == 2.0);
        assert!(k.p_out.px.abs() < 1e-15 && close(k.p_out.py, r3, 1e-15));

        let k = cm_kinematics(&CmState::new(1.0, 0.7, 1.0).unwrap());
        for v in [k.p, k.q, k.p_out, k.q_out] {
            assert_eq!((v.px, v.py), (0.0, 0.0));
        }

        let k = cm_kinematics(&CmState::new(2.0, PI, 1.0).unwrap());
        assert!(close(k.p_out.px, -r3, 1e-15) && k.p_out.py.abs() < 1e-15);

        assert!(CmState::new(0.9, 1.0, 1.0).is_err());
    }

    #[test]
    fn mandelstam_examples() {
        let state = CmState::new(2.0, FRAC_PI_2, 1.0).unwrap();
        let ms = mandelstam(&cm_kinematics(&state), 1.0).unwrap();
        assert!(close(ms.s, -16.0, 1e-14));
        assert!(close(ms.t, 6.0, 1e-14));
        assert!(close(ms.u, 6.0, 1e-14));

        let forward = mandelstam(&cm_kinematics(&CmState::new(2.0, 0.0, 1.0).unwrap()), 1.0).unwrap();
        assert!(forward.t.abs() < 1e-14);
    }

    #[test]
    fn mandelstam_alternative_expressions_agree() {
        let state = CmState::new(3.7, 1.1, 0.51).unwrap();
        let k = cm_kinematics(&state);
        let ms = mandelstam(&k, 0.51).unwrap();
        let s2 = (k.p + k.q).norm2();
        let s3 = (k.p_out + k.q_out).norm2();
        let t2 = (k.p - k.p_out).norm2();
        let t3 = (k.q - k.q_out).norm2();
        let u2 = (k.p_out - k.q).norm2();
        let u3 = (k.p - k.q_out).norm2();
        for (a, b) in [(ms.s, s2), (ms.s, s3), (ms.t, t2), (ms.t, t3), (ms.u, u2), (ms.u, u3)] {
            assert!((a - b).abs() <= 1e-10 * ms.scale(), "{a} vs {b}");
        }
    }

    #[test]
    fn mandelstam_rejects_bad_inputs() {
        let mut k = cm_kinematics(&CmState::new(2.0, 1.0, 1.0).unwrap());
        k.p.e = 2.5;
        let err = mandelstam(&k, 1.0).unwrap_err();
        assert!(err.to_string().contains("off-shell"), "{err}");

        let mut k = cm_kinematics(&CmState::new(2.0, 1.0, 1.0).unwrap());
        k.q_out = k.q_out.rotated(0.2);
        let err = mandelstam(&k, 1.0).unwrap_err();
        assert!(err.to_string().contains("conserved"), "{err}");
    }

    #[test]
    fn mandelstam_cm_examples() {
        let ms = mandelstam_cm(&CmState::new(2.0, FRAC_PI_2, 1.0).unwrap());
        assert!(close(ms.s, -16.0, 1e-15) && close(ms.t, 6.0, 1e-15) && close(ms.u, 6.0, 1e-15));
        let ms = mandelstam_cm(&CmState::new(2.0, 0.0, 1.0).unwrap());
        assert_eq!(ms.t, 0.0);
        assert!(close(ms.u, 12.0, 1e-15));
        let ms = mandelstam_cm(&CmState::new(1.0, FRAC_PI_2, 1.0).unwrap());
        assert_eq!((ms.s, ms.t, ms.u), (-4.0, 0.0, 0.0));
    }

    #[test]
    fn cm_state_round_trip() {
        let state = CmState::new(3.0, 0.8, 1.0).unwrap();
        let back = mandelstam_cm(&state).to_cm_state().unwrap();
        assert!(close(back.energy, 3.0, 1e-14));
        assert!(close(back.theta, 0.8, 1e-13));
    }

    #[test]
    fn relative_velocity_examples() {
        let p = LorentzVec3::new(2.0, 3f64.sqrt(), 0.0);
        let q = LorentzVec3::new(1.0, 0.0, 0.0);
        let v = relative_velocity(&p, &q, 1.0).unwrap();
        assert!(close(v, 3f64.sqrt() / 2.0, 1e-15));
        // rest-frame form |p| / E_p
        assert!(close(v, p.spatial_norm() / p.e, 1e-15));
        assert_eq!(relative_velocity(&q, &q, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn podolsky_mass_examples() {
        let mp = podolsky_mass_from_length(3.0).unwrap();
        assert!((mp - 65.776).abs() < 1e-3);
        assert!(close(podolsky_mass_from_length(1.0).unwrap(), 197.326_980_4, 1e-15));
        assert!(close(podolsky_mass_from_length(HBAR_C_MEV_FM).unwrap(), 1.0, 1e-15));
        assert!(podolsky_mass_from_length(0.0).is_err());
        assert!(podolsky_mass_from_length(-2.0).is_err());
    }

    #[test]
    fn mandelstam_set_validation() {
        assert!(MandelstamSet::new(-16.0, 6.0, 6.0, 1.0).is_ok());
        assert!(MandelstamSet::new(-16.0, 6.0, 7.0, 1.0).is_err());
        assert!(MandelstamSet::new(-2.0, -1.0, -1.0, 0.0).is_err());
    }
}
