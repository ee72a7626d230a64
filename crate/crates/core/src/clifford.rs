//! Dirac algebra in 2+1 dimensions over 2×2 complex matrices.
//!
//! The representation is `γ^0 = iσ³`, `γ^1 = σ¹`, `γ^2 = σ²` with metric
//! `diag(-1, +1, +1)`. Two independent trace evaluators are provided:
//! [`trace_product`] multiplies matrices, [`trace_reduce`] reduces a string of
//! slashed vectors using only the Clifford relations.

use num_complex::Complex64;
use serde::Serialize;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::kinematics::{check_on_shell, LorentzVec3};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Longest gamma string accepted by [`trace_reduce`].
pub const MAX_REDUCE_LEN: usize = 12;

/// Row-major 2×2 complex matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexMat2(pub [Complex64; 4]);

impl ComplexMat2 {
    pub const ZERO: ComplexMat2 = ComplexMat2([ZERO; 4]);
    pub const IDENTITY: ComplexMat2 = ComplexMat2([ONE, ZERO, ZERO, ONE]);

    pub const fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        ComplexMat2([a, b, c, d])
    }

    pub fn sigma1() -> Self {
        ComplexMat2::new(ZERO, ONE, ONE, ZERO)
    }

    pub fn sigma2() -> Self {
        ComplexMat2::new(ZERO, -I, I, ZERO)
    }

    pub fn sigma3() -> Self {
        ComplexMat2::new(ONE, ZERO, ZERO, -ONE)
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[2 * row + col]
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0] + self.0[3]
    }

    pub fn det(&self) -> Complex64 {
        self.0[0] * self.0[3] - self.0[1] * self.0[2]
    }

    pub fn scale(&self, k: Complex64) -> Self {
        ComplexMat2(self.0.map(|z| z * k))
    }

    pub fn scale_re(&self, k: f64) -> Self {
        ComplexMat2(self.0.map(|z| z * k))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let [a, b, c, d] = self.0;
        ComplexMat2::new(a.conj(), c.conj(), b.conj(), d.conj())
    }

    pub fn commutator(&self, other: &Self) -> Self {
        *self * *other - *other * *self
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        *self * *other + *other * *self
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Add for ComplexMat2 {
    type Output = ComplexMat2;
    fn add(self, rhs: Self) -> Self {
        let mut out = self.0;
        out.iter_mut().zip(rhs.0).for_each(|(a, b)| *a += b);
        ComplexMat2(out)
    }
}

impl Sub for ComplexMat2 {
    type Output = ComplexMat2;
    fn sub(self, rhs: Self) -> Self {
        let mut out = self.0;
        out.iter_mut().zip(rhs.0).for_each(|(a, b)| *a -= b);
        ComplexMat2(out)
    }
}

impl Neg for ComplexMat2 {
    type Output = ComplexMat2;
    fn neg(self) -> Self {
        ComplexMat2(self.0.map(|z| -z))
    }
}

impl Mul for ComplexMat2 {
    type Output = ComplexMat2;
    fn mul(self, rhs: Self) -> Self {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = rhs.0;
        ComplexMat2::new(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
    }
}

/// Levi-Civita symbol with `ε_{012} = +1`.
pub fn levi_civita(mu: usize, nu: usize, lambda: usize) -> f64 {
    match (mu, nu, lambda) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// Gamma matrices together with the metric and the measured orientation of
/// the product rule `γ_μ γ_ν = g_{μν} 𝟙 + epsilon_sign · ε_{μνλ} γ^λ`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaRep {
    /// Upper-index matrices `γ^μ`.
    pub gamma: [ComplexMat2; 3],
    /// Diagonal of `g_{μν}`.
    pub metric: [f64; 3],
    /// Measured as `Tr[γ_0 γ_1 γ_2] / 2`.
    pub epsilon_sign: f64,
}

/// The representation `γ^μ = (iσ³, σ¹, σ²)`.
pub fn gamma_rep() -> GammaRep {
    let gamma = [ComplexMat2::sigma3().scale(I), ComplexMat2::sigma1(), ComplexMat2::sigma2()];
    let metric = [-1.0, 1.0, 1.0];
    let lowered: Vec<ComplexMat2> = (0..3).map(|mu| gamma[mu].scale_re(metric[mu])).collect();
    let triple = (lowered[0] * lowered[1] * lowered[2]).trace() / 2.0;
    let epsilon_sign = triple.re.signum();
    GammaRep { gamma, metric, epsilon_sign }
}

impl GammaRep {
    pub fn upper(&self, mu: usize) -> ComplexMat2 {
        self.gamma[mu]
    }

    pub fn lower(&self, mu: usize) -> ComplexMat2 {
        self.gamma[mu].scale_re(self.metric[mu])
    }

    /// Largest entrywise violation of `{γ_μ, γ_ν} = 2 g_{μν} 𝟙` over all pairs.
    pub fn anticommutator_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for mu in 0..3 {
            for nu in 0..3 {
                let lhs = self.lower(mu).anticommutator(&self.lower(nu));
                let g = if mu == nu { self.metric[mu] } else { 0.0 };
                let rhs = ComplexMat2::IDENTITY.scale_re(2.0 * g);
                worst = worst.max(lhs.max_abs_diff(&rhs));
            }
        }
        worst
    }

    /// Largest entrywise violation of `[γ_μ, γ_ν] = 2·epsilon_sign·ε_{μνλ} γ^λ`.
    pub fn commutator_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for mu in 0..3 {
            for nu in 0..3 {
                let lhs = self.lower(mu).commutator(&self.lower(nu));
                let rhs = (0..3).fold(ComplexMat2::ZERO, |acc, l| {
                    acc + self.upper(l).scale_re(2.0 * self.epsilon_sign * levi_civita(mu, nu, l))
                });
                worst = worst.max(lhs.max_abs_diff(&rhs));
            }
        }
        worst
    }

    /// Euclidean continuation `Γ = (γ^1, γ^2, iγ^0)` obtained from `x₃ = i x₀`.
    ///
    /// With these, `Γ·p⁺` for `p⁺ = (p, iE)` is the same matrix as the real
    /// signature `γ_μ p^μ`.
    pub fn euclidean(&self) -> [ComplexMat2; 3] {
        [self.gamma[1], self.gamma[2], self.gamma[0].scale(I)]
    }

    /// Sign `s` for which `[Γ_a, Γ_b] = -2i·s·ε_{abc} Γ_c` holds in the
    /// Euclidean continuation (the form with an explicit `-2i`).
    pub fn euclidean_epsilon_sign(&self) -> f64 {
        let e = self.euclidean();
        // [Γ_1, Γ_2] = -2i s Γ_3  =>  s = i Tr([Γ_1, Γ_2] Γ_3) / 4
        let c = (e[0].commutator(&e[1]) * e[2]).trace() * I / 4.0;
        c.re.signum()
    }

    /// Largest entrywise violation of `[Γ_a, Γ_b] = -2i·s·ε_{abc} Γ_c` with
    /// the given sign, over all nine index pairs.
    pub fn euclidean_commutator_residual(&self, sign: f64) -> f64 {
        let e = self.euclidean();
        let mut worst: f64 = 0.0;
        for a in 0..3 {
            for b in 0..3 {
                let lhs = e[a].commutator(&e[b]);
                let rhs = (0..3).fold(ComplexMat2::ZERO, |acc, c| {
                    acc + e[c].scale(-2.0 * I * sign * levi_civita(a, b, c))
                });
                worst = worst.max(lhs.max_abs_diff(&rhs));
            }
        }
        worst
    }

    /// Largest violation of `{Γ_a, Γ_b} = 2δ_{ab}` in the Euclidean continuation.
    pub fn euclidean_anticommutator_residual(&self) -> f64 {
        let e = self.euclidean();
        let mut worst: f64 = 0.0;
        for a in 0..3 {
            for b in 0..3 {
                let lhs = e[a].anticommutator(&e[b]);
                let rhs = ComplexMat2::IDENTITY.scale_re(if a == b { 2.0 } else { 0.0 });
                worst = worst.max(lhs.max_abs_diff(&rhs));
            }
        }
        worst
    }
}

/// `γ_μ p^μ = -p.e γ^0 + px γ^1 + py γ^2`
pub fn slash(rep: &GammaRep, p: &LorentzVec3) -> ComplexMat2 {
    p.components()
        .iter()
        .enumerate()
        .fold(ComplexMat2::ZERO, |acc, (mu, &c)| acc + rep.lower(mu).scale_re(c))
}

/// `i γ·p - m`, the numerator appearing in every spin sum.
pub fn dirac_numerator(rep: &GammaRep, p: &LorentzVec3, m: f64) -> ComplexMat2 {
    slash(rep, p).scale(I) - ComplexMat2::IDENTITY.scale_re(m)
}

/// Trace of the ordered product, by direct multiplication.
pub fn trace_product(factors: &[ComplexMat2]) -> Complex64 {
    factors
        .iter()
        .fold(ComplexMat2::IDENTITY, |acc, f| acc * *f)
        .trace()
}

/// One factor of a symbolic gamma string.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GammaFactor {
    /// `γ_μ a^μ` for a real vector.
    Slash(LorentzVec3),
    /// Lower-index basis matrix `γ_μ`.
    Lower(usize),
    /// Upper-index basis matrix `γ^μ`.
    Upper(usize),
    /// Scalar multiple of the identity (mass insertion).
    Scalar(Complex64),
    /// `coeff · γ·p + shift`, e.g. `i γ·p - m`.
    Affine { coeff: Complex64, p: LorentzVec3, shift: Complex64 },
}

impl GammaFactor {
    /// `i γ·p - m`
    pub fn dirac(p: LorentzVec3, m: f64) -> Self {
        GammaFactor::Affine { coeff: I, p, shift: Complex64::new(-m, 0.0) }
    }

    /// Matrix form, used by the product oracle.
    pub fn to_matrix(&self, rep: &GammaRep) -> ComplexMat2 {
        match *self {
            GammaFactor::Slash(a) => slash(rep, &a),
            GammaFactor::Lower(mu) => rep.lower(mu),
            GammaFactor::Upper(mu) => rep.upper(mu),
            GammaFactor::Scalar(c) => ComplexMat2::IDENTITY.scale(c),
            GammaFactor::Affine { coeff, p, shift } => {
                slash(rep, &p).scale(coeff) + ComplexMat2::IDENTITY.scale(shift)
            }
        }
    }
}

/// Algebra element `c·𝟙 + γ_μ w^μ` with complex upper components `w`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct CliffordElement {
    scalar: Complex64,
    vector: [Complex64; 3],
}

/// Reduction rules: metric and ε orientation only, no matrices.
struct Rules {
    metric: [f64; 3],
    epsilon_sign: f64,
}

impl Rules {
    fn dot(&self, a: &[Complex64; 3], b: &[Complex64; 3]) -> Complex64 {
        (0..3).map(|mu| a[mu] * b[mu] * self.metric[mu]).sum()
    }

    /// `w^ρ = g^{ρλ} ε_{μνλ} a^μ b^ν`
    fn cross(&self, a: &[Complex64; 3], b: &[Complex64; 3]) -> [Complex64; 3] {
        let lower = [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ];
        // the metric is diagonal with entries ±1, so it is its own inverse
        [lower[0] * self.metric[0], lower[1] * self.metric[1], lower[2] * self.metric[2]]
    }

    /// `(c + w̸) · a̸ = (w·a) + c a̸ + κ (w × a)̸`
    fn times_slash(&self, x: CliffordElement, a: &[Complex64; 3]) -> CliffordElement {
        let cross = self.cross(&x.vector, a);
        let mut vector = [ZERO; 3];
        for mu in 0..3 {
            vector[mu] = x.scalar * a[mu] + cross[mu] * self.epsilon_sign;
        }
        CliffordElement { scalar: self.dot(&x.vector, a), vector }
    }

    fn basis(&self, mu: usize, upper: bool) -> [Complex64; 3] {
        // γ_μ = γ_ν e_μ^ν; γ^μ = g^{μμ} γ_μ
        let mut v = [ZERO; 3];
        v[mu] = Complex64::new(if upper { self.metric[mu] } else { 1.0 }, 0.0);
        v
    }

    fn reduce(&self, acc: CliffordElement, rest: &[GammaFactor]) -> Complex64 {
        let Some((head, tail)) = rest.split_first() else {
            // Tr 𝟙 = 2, Tr γ_μ = 0
            return acc.scalar * 2.0;
        };
        let real = |v: &LorentzVec3| v.components().map(|c| Complex64::new(c, 0.0));
        match *head {
            GammaFactor::Scalar(c) => self.reduce(scale(acc, c), tail),
            GammaFactor::Slash(a) => self.reduce(self.times_slash(acc, &real(&a)), tail),
            GammaFactor::Lower(mu) => self.reduce(self.times_slash(acc, &self.basis(mu, false)), tail),
            GammaFactor::Upper(mu) => self.reduce(self.times_slash(acc, &self.basis(mu, true)), tail),
            GammaFactor::Affine { coeff, p, shift } => {
                let slashed = scale(self.times_slash(acc, &real(&p)), coeff);
                self.reduce(slashed, tail) + self.reduce(scale(acc, shift), tail)
            }
        }
    }
}

fn scale(x: CliffordElement, c: Complex64) -> CliffordElement {
    CliffordElement { scalar: x.scalar * c, vector: x.vector.map(|w| w * c) }
}

/// Trace of a gamma string by recursive reduction with
/// `γ_μ γ_ν = g_{μν} + epsilon_sign·ε_{μνλ} γ^λ`, `Tr 𝟙 = 2` and `Tr γ_μ = 0`.
///
/// Only `rep.metric` and `rep.epsilon_sign` are read; the matrices are not.
pub fn trace_reduce(rep: &GammaRep, factors: &[GammaFactor]) -> Result<Complex64> {
    if factors.len() > MAX_REDUCE_LEN {
        return Err(Error::Capacity { len: factors.len(), max: MAX_REDUCE_LEN });
    }
    let rules = Rules { metric: rep.metric, epsilon_sign: rep.epsilon_sign };
    let unit = CliffordElement { scalar: ONE, vector: [ZERO; 3] };
    Ok(rules.reduce(unit, factors))
}

/// `Tr[γ·a γ·b γ·c]` expressed through the ε-tensor: `2·epsilon_sign·ε(a, b, c)`.
pub fn epsilon_contract(a: &LorentzVec3, b: &LorentzVec3, c: &LorentzVec3) -> f64 {
    let (a, b, c) = (a.components(), b.components(), c.components());
    a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ChargeBranch {
    Particle,
    Antiparticle,
}

/// Spin-sum matrix for one external line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinProjector {
    pub matrix: ComplexMat2,
    pub energy: f64,
    pub mass: f64,
    pub branch: ChargeBranch,
}

impl SpinProjector {
    /// The momentum entering the numerator: `p` or its energy reflection.
    pub fn numerator_momentum(&self, p: &LorentzVec3) -> LorentzVec3 {
        match self.branch {
            ChargeBranch::Particle => *p,
            ChargeBranch::Antiparticle => p.energy_reflected(),
        }
    }
}

/// `(iγ·p - m)/2E` for particles, `-(iγ·p⁻ - m)/2E` for antiparticles where
/// `p⁻` has its energy reversed.
pub fn projector(rep: &GammaRep, p: &LorentzVec3, m: f64, branch: ChargeBranch) -> Result<SpinProjector> {
    check_on_shell(p, m, "p")?;
    if p.e <= 0.0 {
        return Err(crate::error::validation("projector needs positive energy"));
    }
    let inv = 1.0 / (2.0 * p.e);
    let matrix = match branch {
        ChargeBranch::Particle => dirac_numerator(rep, p, m).scale_re(inv),
        ChargeBranch::Antiparticle => {
            dirac_numerator(rep, &p.energy_reflected(), m).scale_re(-inv)
        }
    };
    Ok(SpinProjector { matrix, energy: p.e, mass: m, branch })
}

/// Two-component spinor.
pub type Spinor = [Complex64; 2];

/// Hermitian matrix `β` used in the Dirac adjoint `ū = u† β`, namely
/// `β = -iγ^0 = σ³`. The literal `u† γ^0` differs from this by the phase `i`.
pub fn adjoint_beta(rep: &GammaRep) -> ComplexMat2 {
    rep.upper(0).scale(-I)
}

/// Row vector `ū = u† β`.
pub fn dirac_adjoint(rep: &GammaRep, u: &Spinor) -> Spinor {
    let beta = adjoint_beta(rep);
    let (a, b) = (u[0].conj(), u[1].conj());
    [a * beta.get(0, 0) + b * beta.get(1, 0), a * beta.get(0, 1) + b * beta.get(1, 1)]
}

/// `u ū` as a matrix.
pub fn outer(u: &Spinor, ubar: &Spinor) -> ComplexMat2 {
    ComplexMat2::new(u[0] * ubar[0], u[0] * ubar[1], u[1] * ubar[0], u[1] * ubar[1])
}

/// Positive-energy spinor with `u ū` equal to the particle projector.
/// The phase is fixed so the first non-zero component is real and positive.
pub fn spinor_u(rep: &GammaRep, p: &LorentzVec3, m: f64) -> Result<Spinor> {
    if !(m > 0.0) {
        return Err(Error::Domain("massless spinors are not supported".into()));
    }
    let proj = projector(rep, p, m, ChargeBranch::Particle)?;
    // u u† = P β⁻¹ is Hermitian, rank one, unit trace
    let beta_inv = inverse(&adjoint_beta(rep));
    let n = proj.matrix * beta_inv;
    let col = if n.get(0, 0).re >= n.get(1, 1).re { 0 } else { 1 };
    let norm = n.get(col, col).re.sqrt();
    let mut u = [n.get(0, col) / norm, n.get(1, col) / norm];
    let lead = if u[0].norm() > 1e-14 * norm.max(1.0) { u[0] } else { u[1] };
    let phase = lead.conj() / lead.norm();
    u = u.map(|z| z * phase);
    Ok(u)
}

fn inverse(m: &ComplexMat2) -> ComplexMat2 {
    let d = m.det();
    ComplexMat2::new(m.get(1, 1), -m.get(0, 1), -m.get(1, 0), m.get(0, 0)).scale(ONE / d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::on_shell_momentum;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn representation_identities() {
        let rep = gamma_rep();
        assert_eq!(rep.upper(0) * rep.upper(0), -ComplexMat2::IDENTITY);
        assert_eq!(rep.upper(1) * rep.upper(2) + rep.upper(2) * rep.upper(1), ComplexMat2::ZERO);
        for mu in 0..3 {
            assert_eq!(rep.upper(mu).trace(), ZERO);
        }
        assert!(rep.anticommutator_residual() <= 1e-14);
        assert!(rep.commutator_residual() <= 1e-14);
        assert_eq!(rep.epsilon_sign, 1.0);
    }

    #[test]
    fn euclidean_form_has_the_minus_2i_commutator() {
        let rep = gamma_rep();
        let s = rep.euclidean_epsilon_sign();
        assert_eq!(s, 1.0);
        assert!(rep.euclidean_commutator_residual(s) <= 1e-14);
        assert!(rep.euclidean_commutator_residual(-s) > 1.0);
        assert!(rep.euclidean_anticommutator_residual() <= 1e-14);
    }

    #[test]
    fn euclidean_slash_matches_real_signature() {
        let rep = gamma_rep();
        let p = LorentzVec3::new(1.7, 0.4, -0.9);
        let e = rep.euclidean();
        // Γ·p⁺ with p⁺ = (px, py, iE)
        let euclid = e[0].scale_re(p.px) + e[1].scale_re(p.py) + e[2].scale(I * p.e);
        assert!(euclid.max_abs_diff(&slash(&rep, &p)) < 1e-15);
    }

    #[test]
    fn slash_examples() {
        let rep = gamma_rep();
        let p = on_shell_momentum(1.0, 0.6, -1.3).unwrap();
        let ip = slash(&rep, &p).scale(I);
        assert!((ip * ip).max_abs_diff(&ComplexMat2::IDENTITY) < 1e-12);
        assert_eq!(slash(&rep, &LorentzVec3::ZERO), ComplexMat2::ZERO);
        let t = slash(&rep, &LorentzVec3::new(1.0, 0.0, 0.0));
        assert_eq!(t * t, -ComplexMat2::IDENTITY);
        let v = LorentzVec3::new(0.3, 2.0, -1.1);
        let sq = slash(&rep, &v) * slash(&rep, &v);
        assert!(sq.max_abs_diff(&ComplexMat2::IDENTITY.scale_re(v.norm2())) < 1e-12 * v.norm2().abs());
    }

    #[test]
    fn trace_product_examples() {
        let rep = gamma_rep();
        for mu in 0..3 {
            for nu in 0..3 {
                let tr = trace_product(&[rep.lower(mu), rep.lower(nu)]);
                let g = if mu == nu { rep.metric[mu] } else { 0.0 };
                assert_eq!(tr, c(2.0 * g));
            }
        }
        // odd traces survive in three dimensions
        let tr = trace_product(&[rep.lower(0), rep.lower(1), rep.lower(2)]);
        assert_eq!(tr, c(2.0 * rep.epsilon_sign));
        assert_eq!(trace_product(&[rep.upper(0), rep.upper(1), rep.upper(2)]), c(-2.0));
        assert_eq!(trace_product(&[ComplexMat2::IDENTITY]), c(2.0));
    }

    #[test]
    fn trace_reduce_examples() {
        let rep = gamma_rep();
        let a = LorentzVec3::new(1.3, -0.2, 0.7);
        let b = LorentzVec3::new(0.4, 1.1, -2.0);
        let cc = LorentzVec3::new(-0.9, 0.5, 0.25);
        let two = trace_reduce(&rep, &[GammaFactor::Slash(a), GammaFactor::Slash(b)]).unwrap();
        assert!((two - c(2.0 * a.dot(&b))).norm() < 1e-14);
        assert_eq!(trace_reduce(&rep, &[GammaFactor::Slash(a)]).unwrap(), ZERO);
        let string = [GammaFactor::Slash(a), GammaFactor::Slash(b), GammaFactor::Slash(cc)];
        let three = trace_reduce(&rep, &string).unwrap();
        let expected = 2.0 * rep.epsilon_sign * epsilon_contract(&a, &b, &cc);
        assert!((three - c(expected)).norm() < 1e-13);
        let mats: Vec<_> = string.iter().map(|f| f.to_matrix(&rep)).collect();
        assert!((three - trace_product(&mats)).norm() < 1e-13);
    }

    #[test]
    fn trace_reduce_capacity() {
        let rep = gamma_rep();
        let long = vec![GammaFactor::Lower(1); MAX_REDUCE_LEN + 1];
        assert_eq!(
            trace_reduce(&rep, &long),
            Err(Error::Capacity { len: MAX_REDUCE_LEN + 1, max: MAX_REDUCE_LEN })
        );
        let ok = vec![GammaFactor::Lower(1); MAX_REDUCE_LEN];
        assert_eq!(trace_reduce(&rep, &ok).unwrap(), c(2.0));
    }

    #[test]
    fn projector_examples() {
        let rep = gamma_rep();
        let rest = LorentzVec3::new(1.0, 0.0, 0.0);
        let proj = projector(&rep, &rest, 1.0, ChargeBranch::Particle).unwrap();
        assert!((proj.matrix.trace() - c(-1.0)).norm() < 1e-15);

        let p = on_shell_momentum(0.51, 1.2, -0.4).unwrap();
        let minus = dirac_numerator(&rep, &p, 0.51);
        let plus = minus + ComplexMat2::IDENTITY.scale_re(2.0 * 0.51);
        assert!((minus * plus).max_abs() < 1e-12);
        let proj = projector(&rep, &p, 0.51, ChargeBranch::Particle).unwrap();
        assert!(proj.matrix.det().norm() < 1e-12);
        assert!((proj.matrix.trace() - c(-0.51 / p.e)).norm() < 1e-14);

        let anti = projector(&rep, &p, 0.51, ChargeBranch::Antiparticle).unwrap();
        let pm = anti.numerator_momentum(&p);
        let annihilator = dirac_numerator(&rep, &pm, 0.51) + ComplexMat2::IDENTITY.scale_re(2.0 * 0.51);
        assert!((anti.matrix * annihilator).max_abs() < 1e-12);
        assert!(anti.matrix.det().norm() < 1e-12);

        let off = LorentzVec3::new(2.0, 0.0, 0.0);
        assert!(projector(&rep, &off, 1.0, ChargeBranch::Particle).is_err());
    }

    #[test]
    fn projector_square() {
        let rep = gamma_rep();
        let m = 1.3;
        let p = on_shell_momentum(m, -2.0, 0.8).unwrap();
        let x = dirac_numerator(&rep, &p, m);
        assert!((x * x).max_abs_diff(&x.scale_re(-2.0 * m)) < 1e-10 * x.max_abs());
    }

    #[test]
    fn spinor_examples() {
        let rep = gamma_rep();
        let m = 1.0;
        let rest = LorentzVec3::new(m, 0.0, 0.0);
        let u = spinor_u(&rep, &rest, m).unwrap();
        // i γ·p u = -m u at rest
        let ip = slash(&rep, &rest).scale(I);
        let lhs = [ip.get(0, 0) * u[0] + ip.get(0, 1) * u[1], ip.get(1, 0) * u[0] + ip.get(1, 1) * u[1]];
        assert!((lhs[0] + u[0] * m).norm() < 1e-15 && (lhs[1] + u[1] * m).norm() < 1e-15);

        let p = on_shell_momentum(m, 2.3, -1.7).unwrap();
        let u = spinor_u(&rep, &p, m).unwrap();
        let proj = projector(&rep, &p, m, ChargeBranch::Particle).unwrap();
        assert!(outer(&u, &dirac_adjoint(&rep, &u)).max_abs_diff(&proj.matrix) < 1e-10);
        let d = dirac_numerator(&rep, &p, m) + ComplexMat2::IDENTITY.scale_re(2.0 * m);
        let du = [d.get(0, 0) * u[0] + d.get(0, 1) * u[1], d.get(1, 0) * u[0] + d.get(1, 1) * u[1]];
        assert!(du[0].norm() < 1e-10 && du[1].norm() < 1e-10);
        let lead = if u[0].norm() > 0.0 { u[0] } else { u[1] };
        assert!(lead.im.abs() < 1e-15 && lead.re > 0.0);

        assert!(spinor_u(&rep, &LorentzVec3::new(1.0, 1.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn literal_adjoint_differs_by_phase() {
        let rep = gamma_rep();
        let p = on_shell_momentum(1.0, 0.5, 0.5).unwrap();
        let u = spinor_u(&rep, &p, 1.0).unwrap();
        let g0 = rep.upper(0);
        let (a, b) = (u[0].conj(), u[1].conj());
        let literal = [a * g0.get(0, 0) + b * g0.get(1, 0), a * g0.get(0, 1) + b * g0.get(1, 1)];
        let proj = projector(&rep, &p, 1.0, ChargeBranch::Particle).unwrap();
        assert!(outer(&u, &literal).max_abs_diff(&proj.matrix.scale(I)) < 1e-12);
    }
}
