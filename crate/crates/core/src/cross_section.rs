//! Differential cross sections.
//!
//! Every formula is kept as its own function and tagged with a [`FormulaId`];
//! none is rewritten in terms of another or reconciled with the rest
//! here. Cross-formula comparisons live in [`crate::report`].
//!
//! `dσ/dt` formulas return MeV⁻³, `dσ/dθ` formulas MeV⁻¹·rad⁻¹.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::amplitude::{msq_bracket, PhysicalParams, TraceSource};
use crate::clifford::GammaRep;
use crate::error::{domain, pole, Error, Result};
use crate::kinematics::{mandelstam_cm, CmState, MandelstamSet};
use crate::quadrature::{integrate, QuadOptions};

/// Which formula produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FormulaId {
    /// Invariant `dσ/dt` with full trace bracket and phase-space factor.
    #[serde(rename = "canonical")]
    Canonical,
    /// `dσ/dt` in the high-energy form.
    #[serde(rename = "high_energy")]
    HighEnergy,
    /// High-energy `dσ/dt` expanded to first order in `1/m_P²`.
    #[serde(rename = "leading_mP")]
    LeadingMp,
    /// CM `dσ/dθ`.
    #[serde(rename = "cm")]
    Cm,
    /// CM `dσ/dθ` expanded for small angles.
    #[serde(rename = "cm_small_angle")]
    CmSmallAngle,
    /// Nonrelativistic CM `dσ/dθ`.
    #[serde(rename = "nonrel")]
    Nonrel,
}

impl FormulaId {
    pub const ALL: [FormulaId; 6] = [
        FormulaId::Canonical,
        FormulaId::HighEnergy,
        FormulaId::LeadingMp,
        FormulaId::Cm,
        FormulaId::CmSmallAngle,
        FormulaId::Nonrel,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            FormulaId::Canonical => "canonical",
            FormulaId::HighEnergy => "high_energy",
            FormulaId::LeadingMp => "leading_mP",
            FormulaId::Cm => "cm",
            FormulaId::CmSmallAngle => "cm_small_angle",
            FormulaId::Nonrel => "nonrel",
        }
    }

    /// True for the `dσ/dt` formulas.
    pub fn is_invariant(&self) -> bool {
        matches!(self, FormulaId::Canonical | FormulaId::HighEnergy | FormulaId::LeadingMp)
    }

    pub fn unit(&self) -> &'static str {
        if self.is_invariant() {
            "MeV^-3"
        } else {
            "MeV^-1 rad^-1"
        }
    }
}

impl fmt::Display for FormulaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FormulaId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FormulaId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| domain(format!("unknown formula `{s}`")))
    }
}

/// One evaluated cross-section point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct XsecSample {
    pub formula: FormulaId,
    pub energy: f64,
    pub theta: f64,
    pub params: PhysicalParams,
    pub value: f64,
}

impl XsecSample {
    pub fn unit(&self) -> &'static str {
        self.formula.unit()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeTag {
    Nonrelativistic,
    Intermediate,
    PodolskyWindow,
    BeyondCutoff,
}

impl RegimeTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            RegimeTag::Nonrelativistic => "nonrelativistic",
            RegimeTag::Intermediate => "intermediate",
            RegimeTag::PodolskyWindow => "podolsky_window",
            RegimeTag::BeyondCutoff => "beyond_cutoff",
        }
    }
}

fn check_open_angle(theta: f64) -> Result<()> {
    if theta.is_nan() || theta <= 0.0 || theta >= PI {
        return Err(pole(format!("θ = {theta} is outside the open interval (0, π)")));
    }
    Ok(())
}

fn check_channels(ms: &MandelstamSet) -> Result<()> {
    if !(ms.s < 0.0) {
        return Err(domain(format!("s = {} must be negative", ms.s)));
    }
    if ms.t == 0.0 || ms.u == 0.0 {
        return Err(pole(format!("t = {}, u = {}: Coulomb pole", ms.t, ms.u)));
    }
    if ms.t < 0.0 || ms.u < 0.0 {
        return Err(domain(format!("t = {}, u = {} must be positive", ms.t, ms.u)));
    }
    Ok(())
}

fn check_mp(m_p: f64) -> Result<()> {
    if !(m_p > 0.0) {
        return Err(domain(format!("Podolsky mass must be positive, got {m_p}")));
    }
    Ok(())
}

/// `1/(1 + k²/m_P²)`; returns a pole error at `k² = -m_P²`.
fn podolsky_damping(k2: f64, m_p: f64) -> Result<f64> {
    let shift = 1.0 + k2 / (m_p * m_p);
    if shift.abs() <= 1e-12 {
        return Err(pole(format!("Podolsky pole at k² = {k2}")));
    }
    Ok(1.0 / shift)
}

/// Lorentz-invariant phase-space factor `2m²/(√(-s) √(tu)) Θ(t) Θ(u)`.
pub fn phase_space_i(ms: &MandelstamSet) -> Result<f64> {
    if !(ms.s < 0.0) {
        return Err(domain(format!("s = {} must be negative", ms.s)));
    }
    if ms.t > 0.0 && ms.u > 0.0 {
        Ok(2.0 * ms.m * ms.m / ((-ms.s).sqrt() * (ms.t * ms.u).sqrt()))
    } else {
        Ok(0.0)
    }
}

/// Invariant `dσ/dt = r₀²/(32 √((p·q)² - m⁴)) · bracket · I` with `r₀ = α/m`.
///
/// The mass is taken from the invariants; `params` supplies `α` and `m_P`.
pub fn dsigma_dt(
    rep: &GammaRep,
    ms: &MandelstamSet,
    params: &PhysicalParams,
    source: TraceSource,
) -> Result<f64> {
    let m = ms.m;
    if !(ms.s < -4.0 * m * m) {
        return Err(domain(format!("s = {} is not below threshold -4m² = {}", ms.s, -4.0 * m * m)));
    }
    check_channels(ms)?;
    let bracket = msq_bracket(rep, ms, params, source)?;
    let pq = ms.p_dot_q();
    let flux = (pq * pq - m.powi(4)).sqrt();
    let r0 = params.alpha / m;
    Ok(r0 * r0 / (32.0 * flux) * bracket * phase_space_i(ms)?)
}

fn high_energy_prefactor(ms: &MandelstamSet, alpha: f64) -> f64 {
    alpha * alpha / (2.0 * (-ms.s).sqrt()).powi(3) / (ms.t * ms.u).sqrt()
}

/// High-energy `dσ/dt`:
/// `α²/(2√-s)³ /√(tu) [ (s²+u²-t²/2)/(t²(1+t/m_P²)²) + (s²+t²-u²/2)/(u²(1+u/m_P²)²)
///  + (5s²-u²-t²)/(ut(1+t/m_P²)(1+u/m_P²)) ]`.
pub fn dsigma_dt_highenergy(ms: &MandelstamSet, params: &PhysicalParams) -> Result<f64> {
    check_channels(ms)?;
    check_mp(params.m_p)?;
    let MandelstamSet { s, t, u, .. } = *ms;
    let dt = podolsky_damping(t, params.m_p)?;
    let du = podolsky_damping(u, params.m_p)?;
    let bracket = (s * s + u * u - t * t / 2.0) / (t * t) * dt * dt
        + (s * s + t * t - u * u / 2.0) / (u * u) * du * du
        + (5.0 * s * s - u * u - t * t) / (u * t) * dt * du;
    Ok(high_energy_prefactor(ms, params.alpha) * bracket)
}

/// High-energy `dσ/dt` with the Podolsky correction expanded to first order:
/// QED₃ bracket minus `(3/m_P²)[(3s²+u²-t²)/t + (3s²+t²-u²)/u]`.
pub fn dsigma_dt_leading_mp(ms: &MandelstamSet, params: &PhysicalParams) -> Result<f64> {
    check_channels(ms)?;
    check_mp(params.m_p)?;
    let MandelstamSet { s, t, u, .. } = *ms;
    let mp2 = params.m_p * params.m_p;
    if t >= mp2 || u >= mp2 {
        return Err(domain(format!("expansion needs t, u < m_P² = {mp2}; got t = {t}, u = {u}")));
    }
    let qed = (s * s + u * u - t * t / 2.0) / (t * t)
        + (s * s + t * t - u * u / 2.0) / (u * u)
        + (5.0 * s * s - u * u - t * t) / (u * t);
    let correction = 3.0 / mp2 * ((3.0 * s * s + u * u - t * t) / t + (3.0 * s * s + t * t - u * u) / u);
    Ok(high_energy_prefactor(ms, params.alpha) * (qed - correction))
}

/// CM terms per unit `α²`: `(QED₃ part, Podolsky correction)`.
fn cm_parts_per_alpha2(energy: f64, theta: f64, m_p: f64) -> Result<(f64, f64)> {
    check_open_angle(theta)?;
    if !(energy > 0.0) || !energy.is_finite() {
        return Err(domain(format!("energy must be positive, got {energy}")));
    }
    check_mp(m_p)?;
    let c2 = (2.0 * theta).cos();
    let s4 = theta.sin().powi(4);
    let qed = (7.0 + c2).powi(2) / (32.0 * energy.powi(3) * s4);
    let correction = 3.0 * (7.0 - 6.0 * c2 + c2 * c2) / (8.0 * energy * m_p * m_p * s4);
    Ok((qed, correction))
}

/// The two terms of the CM formula: `(QED₃ part, Podolsky correction)` with
/// `dσ/dθ = qed - correction`.
pub fn dsigma_dtheta_cm_parts(energy: f64, theta: f64, params: &PhysicalParams) -> Result<(f64, f64)> {
    let (qed, correction) = cm_parts_per_alpha2(energy, theta, params.m_p)?;
    let a2 = params.alpha * params.alpha;
    Ok((a2 * qed, a2 * correction))
}

/// CM `dσ/dθ = α²/(32E³)(7+cos2θ)²/sin⁴θ - (α²/m_P²)(3/(8E))(7-6cos2θ+cos²2θ)/sin⁴θ`.
pub fn dsigma_dtheta_cm(energy: f64, theta: f64, params: &PhysicalParams) -> Result<f64> {
    let (qed, correction) = dsigma_dtheta_cm_parts(energy, theta, params)?;
    Ok(qed - correction)
}

/// Relative deviation `(dσ/dθ)_GQED₃ / (dσ/dθ)_QED₃ - 1` of the CM formula.
///
/// Evaluated as `-correction/qed`, which is the same ratio without the
/// cancellation in `x/y - 1`. `α²` cancels before any arithmetic.
pub fn delta_deviation(energy: f64, theta: f64, params: &PhysicalParams) -> Result<f64> {
    let (qed, correction) = cm_parts_per_alpha2(energy, theta, params.m_p)?;
    if qed == 0.0 {
        return Err(Error::Degenerate("QED₃ cross section vanishes".into()));
    }
    Ok(-correction / qed)
}

/// Small-angle deviation `δ = -(s/m_P²)(3/4)θ²`.
pub fn delta_small_angle(s: f64, theta: f64, m_p: f64) -> Result<f64> {
    check_mp(m_p)?;
    Ok(-(s / (m_p * m_p)) * 0.75 * theta * theta)
}

/// Small-angle `dσ/dθ = α²/(8E³θ⁴)[1 - (1/2 + E²/m_P²)θ²]`.
pub fn dsigma_dtheta_small_angle(energy: f64, theta: f64, params: &PhysicalParams) -> Result<f64> {
    if !(theta > 0.0) {
        return Err(domain(format!("small-angle form needs θ > 0, got {theta}")));
    }
    if !(energy > 0.0) {
        return Err(domain(format!("energy must be positive, got {energy}")));
    }
    check_mp(params.m_p)?;
    let lead = params.alpha * params.alpha / (8.0 * energy.powi(3) * theta.powi(4));
    let e2 = energy * energy / (params.m_p * params.m_p);
    Ok(lead * (1.0 - (0.5 + e2) * theta * theta))
}

/// Nonrelativistic CM `dσ/dθ`:
/// `(r₀²/16)(m³/p⁴)[(4/c⁴ + 4/s⁴ - 11/(c²s²)) + (3p²/m_P²)(1/c² + 1/s²)]`
/// with `c = cos(θ/2)`, `s = sin(θ/2)`.
pub fn dsigma_dtheta_nonrel(p_mag: f64, theta: f64, params: &PhysicalParams) -> Result<f64> {
    check_open_angle(theta)?;
    if !(p_mag > 0.0) {
        return Err(domain(format!("momentum must be positive, got {p_mag}")));
    }
    check_mp(params.m_p)?;
    let (s, c) = (theta / 2.0).sin_cos();
    let (s2, c2) = (s * s, c * c);
    let coulomb = 4.0 / (c2 * c2) + 4.0 / (s2 * s2) - 11.0 / (c2 * s2);
    let yukawa = 3.0 * p_mag * p_mag / (params.m_p * params.m_p) * (1.0 / c2 + 1.0 / s2);
    let m = params.m_e;
    let r0 = params.electron_radius();
    Ok(r0 * r0 / 16.0 * m.powi(3) / p_mag.powi(4) * (coulomb + yukawa))
}

/// `dt/dθ = 2|p|² sinθ` from `t = 4|p|² sin²(θ/2)`.
pub fn jacobian_dt_dtheta(p2: f64, theta: f64) -> f64 {
    2.0 * p2 * theta.sin()
}

/// Evaluates one formula at CM beam energy `energy` and angle `theta`.
///
/// Every formula requires `E ≥ m_e`. `dσ/dt` formulas use the CM invariants
/// for `params.m_e`; the nonrelativistic formula uses `|p| = √(E² - m²)`.
pub fn evaluate(
    rep: &GammaRep,
    formula: FormulaId,
    energy: f64,
    theta: f64,
    params: &PhysicalParams,
) -> Result<XsecSample> {
    params.validate()?;
    let state = CmState::new(energy, theta, params.m_e)?;
    let value = match formula {
        FormulaId::Cm => dsigma_dtheta_cm(energy, theta, params)?,
        FormulaId::CmSmallAngle => dsigma_dtheta_small_angle(energy, theta, params)?,
        FormulaId::Nonrel => {
            dsigma_dtheta_nonrel(state.p_mag(), theta, params)?
        }
        FormulaId::Canonical | FormulaId::HighEnergy | FormulaId::LeadingMp => {
            check_open_angle(theta)?;
            let ms = mandelstam_cm(&state);
            match formula {
                FormulaId::Canonical => dsigma_dt(rep, &ms, params, TraceSource::BruteForce)?,
                FormulaId::HighEnergy => dsigma_dt_highenergy(&ms, params)?,
                _ => dsigma_dt_leading_mp(&ms, params)?,
            }
        }
    };
    if !value.is_finite() {
        return Err(domain(format!("{formula} is not finite at E = {energy}, θ = {theta}")));
    }
    Ok(XsecSample { formula, energy, theta, params: *params, value })
}

/// Angular density of any formula: `dσ/dθ` directly, or `dσ/dt · dt/dθ`.
pub fn angular_density(
    rep: &GammaRep,
    formula: FormulaId,
    energy: f64,
    theta: f64,
    params: &PhysicalParams,
) -> Result<f64> {
    let sample = evaluate(rep, formula, energy, theta, params)?;
    if formula.is_invariant() {
        let p2 = CmState::new(energy, theta, params.m_e)?.p2();
        Ok(sample.value * jacobian_dt_dtheta(p2, theta))
    } else {
        Ok(sample.value)
    }
}

/// `∫ dσ/dθ dθ` over `[theta_min, theta_max] ⊂ (0, π)` to relative tolerance 1e-8.
pub fn integrate_dsigma(
    rep: &GammaRep,
    formula: FormulaId,
    energy: f64,
    theta_min: f64,
    theta_max: f64,
    params: &PhysicalParams,
) -> Result<f64> {
    if !(theta_min > 0.0 && theta_max < PI && theta_min <= theta_max) {
        return Err(domain(format!(
            "integration range [{theta_min}, {theta_max}] must satisfy 0 < min ≤ max < π"
        )));
    }
    integrate(
        |theta| angular_density(rep, formula, energy, theta, params),
        theta_min,
        theta_max,
        QuadOptions::default(),
    )
}

/// Places invariants relative to the electron mass and the Podolsky cutoff.
pub fn classify_regime(ms: &MandelstamSet, params: &PhysicalParams) -> RegimeTag {
    let m2 = ms.m * ms.m;
    let mp2 = params.m_p * params.m_p;
    let abs_s = ms.s.abs();
    let lo = abs_s.min(ms.t).min(ms.u);
    let hi = abs_s.max(ms.t).max(ms.u);
    if hi >= mp2 {
        RegimeTag::BeyondCutoff
    } else if lo >= m2 {
        RegimeTag::PodolskyWindow
    } else if abs_s - 4.0 * m2 < m2 {
        RegimeTag::Nonrelativistic
    } else {
        RegimeTag::Intermediate
    }
}
