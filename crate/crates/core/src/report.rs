//! Consistency audits and reproduction tables.
//!
//! Consistency records compare pairs of routes to the same quantity over a
//! kinematic grid and classify the disagreement. Scenario rows evaluate the
//! deviation `δ` at the quoted benchmark points. Disagreement is data: the
//! report functions succeed whenever their inputs are valid.

use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;
use std::io::Write;

use crate::amplitude::{
    closed_triple, relative_deviation, trace_triple_bruteforce, trace_triple_reduced,
    PhysicalParams, TraceSource, TraceTriple, ELECTRON_MASS_MEV, MP_LATTICE_MEV,
};
use crate::clifford::{epsilon_contract, GammaRep};
use crate::cross_section::{
    delta_deviation, delta_small_angle, dsigma_dt, dsigma_dt_highenergy, dsigma_dtheta_cm,
    dsigma_dtheta_nonrel, jacobian_dt_dtheta,
};
use crate::error::{validation, Error, Result};
use crate::kinematics::{cm_kinematics, mandelstam_cm, CmState};

/// Agreement threshold for [`Verdict::Agrees`].
pub const AGREEMENT_TOL: f64 = 1e-8;
/// Agreement threshold for the two trace oracles.
pub const DUAL_ORACLE_TOL: f64 = 1e-10;
/// Spread of `x/y` across the grid below which a constant factor is reported.
pub const CONSTANT_RATIO_TOL: f64 = 1e-6;
/// Ultrarelativistic comparisons use grid points with `E ≥ 100 m`.
pub const ULTRARELATIVISTIC_RATIO: f64 = 100.0;
/// Small-angle comparisons use grid angles up to this value (rad).
pub const SMALL_ANGLE_MAX: f64 = 0.2;

/// Outcome of one comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Maximum relative deviation within the record's tolerance.
    Agrees,
    /// The ratio of the two routes is constant across the grid.
    SystematicFactor,
    /// The ratio varies across the grid.
    ThetaDependent,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Agrees => "agrees",
            Verdict::SystematicFactor => "systematic_factor",
            Verdict::ThetaDependent => "theta_dependent",
        }
    }
}

/// Kinematic point, enough to re-run a comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridPoint {
    pub energy: f64,
    pub theta: f64,
}

/// Kinematic grid for [`consistency_report`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSpec {
    pub name: String,
    pub params: PhysicalParams,
    /// Beam energies in MeV.
    pub energies: Vec<f64>,
    /// Scattering angles in rad, strictly inside `(0, π)`.
    pub angles: Vec<f64>,
}

impl GridSpec {
    /// 100 log-spaced energies from 1.05 m to 2000 m times 100 angles
    /// in `[0.01, π - 0.01]`: 10⁴ points.
    pub fn default_grid() -> Self {
        let params = PhysicalParams::default();
        GridSpec::log_energy_grid("default", params, 1.05, 2000.0, 100, 0.01, 100)
    }

    /// A 12 × 12 grid for quick checks.
    pub fn small_grid() -> Self {
        let params = PhysicalParams::default();
        GridSpec::log_energy_grid("small", params, 1.05, 2000.0, 12, 0.05, 12)
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "default" => Ok(GridSpec::default_grid()),
            "small" => Ok(GridSpec::small_grid()),
            other => Err(validation(format!("unknown grid `{other}` (expected default or small)"))),
        }
    }

    /// Energies `E/m` log-spaced in `[lo, hi]`, angles evenly spaced in
    /// `[margin, π - margin]`.
    pub fn log_energy_grid(
        name: &str,
        params: PhysicalParams,
        lo: f64,
        hi: f64,
        n_energy: usize,
        margin: f64,
        n_angle: usize,
    ) -> Self {
        let energies = log_space(lo, hi, n_energy).into_iter().map(|r| r * params.m_e).collect();
        let angles = lin_space(margin, PI - margin, n_angle);
        GridSpec { name: name.to_string(), params, energies, angles }
    }

    pub fn with_params(mut self, params: PhysicalParams) -> Self {
        let scale = params.m_e / self.params.m_e;
        self.energies.iter_mut().for_each(|e| *e *= scale);
        self.params = params;
        self
    }

    pub fn len(&self) -> usize {
        self.energies.len() * self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.is_empty() {
            return Err(validation("consistency grid is empty"));
        }
        if let Some(e) = self.energies.iter().find(|&&e| !(e > self.params.m_e) || !e.is_finite()) {
            return Err(validation(format!("grid energy {e} must exceed the electron mass")));
        }
        if let Some(t) = self.angles.iter().find(|&&t| !(t > 0.0 && t < PI)) {
            return Err(validation(format!("grid angle {t} must lie in (0, π)")));
        }
        Ok(())
    }

    fn points(&self) -> Vec<GridPoint> {
        self.energies
            .iter()
            .flat_map(|&energy| self.angles.iter().map(move |&theta| GridPoint { energy, theta }))
            .collect()
    }

    pub fn describe(&self) -> String {
        let (emin, emax) = min_max(&self.energies);
        let (tmin, tmax) = min_max(&self.angles);
        format!(
            "{}: {}x{} E=[{emin},{emax}] MeV theta=[{tmin},{tmax}] rad m_e={} m_P={} alpha={}",
            self.name,
            self.energies.len(),
            self.angles.len(),
            self.params.m_e,
            self.params.m_p,
            self.params.alpha
        )
    }
}

fn min_max(v: &[f64]) -> (f64, f64) {
    v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)))
}

/// `n` points evenly spaced over `[lo, hi]`, endpoints included.
pub fn lin_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// `n` points log-spaced over `[lo, hi]`, endpoints included.
pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    lin_space(lo.ln(), hi.ln(), n).into_iter().map(f64::exp).collect()
}

/// The quantities compared by the consistency report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    TraceA,
    TraceB,
    TraceC,
    TraceCImaginary,
    CmVsCanonical,
    CmVsHighEnergy,
    HighEnergyVsCanonical,
    SmallAngleDelta,
    EpsilonConvention,
    DualOracle,
    TuSymmetry,
}

impl Comparison {
    pub const ALL: [Comparison; 11] = [
        Comparison::TraceA,
        Comparison::TraceB,
        Comparison::TraceC,
        Comparison::TraceCImaginary,
        Comparison::CmVsCanonical,
        Comparison::CmVsHighEnergy,
        Comparison::HighEnergyVsCanonical,
        Comparison::SmallAngleDelta,
        Comparison::EpsilonConvention,
        Comparison::DualOracle,
        Comparison::TuSymmetry,
    ];

    pub fn id(&self) -> &'static str {
        match self {
            Comparison::TraceA => "trace_A_closed_vs_bruteforce",
            Comparison::TraceB => "trace_B_closed_vs_bruteforce",
            Comparison::TraceC => "trace_C_closed_vs_bruteforce",
            Comparison::TraceCImaginary => "trace_C_imaginary_vs_parity_odd_term",
            Comparison::CmVsCanonical => "cm_vs_jacobian_times_canonical",
            Comparison::CmVsHighEnergy => "cm_vs_jacobian_times_high_energy",
            Comparison::HighEnergyVsCanonical => "high_energy_vs_canonical_closed",
            Comparison::SmallAngleDelta => "small_angle_delta_vs_full_delta",
            Comparison::EpsilonConvention => "commutator_sign_measured_vs_expected",
            Comparison::DualOracle => "trace_product_vs_trace_reduce",
            Comparison::TuSymmetry => "canonical_t_u_symmetry",
        }
    }

    /// Which of the five audited relations the record belongs to; 0 for
    /// supporting audits.
    pub fn group(&self) -> u8 {
        match self {
            Comparison::TraceA | Comparison::TraceB | Comparison::TraceC | Comparison::TraceCImaginary => 1,
            Comparison::CmVsCanonical | Comparison::CmVsHighEnergy => 2,
            Comparison::HighEnergyVsCanonical => 3,
            Comparison::SmallAngleDelta => 4,
            Comparison::EpsilonConvention => 5,
            Comparison::DualOracle | Comparison::TuSymmetry => 0,
        }
    }

    fn tolerance(&self) -> f64 {
        match self {
            Comparison::DualOracle => DUAL_ORACLE_TOL,
            _ => AGREEMENT_TOL,
        }
    }

    fn description(&self) -> &'static str {
        match self {
            Comparison::TraceA => "closed form A vs brute-force 2x2 trace",
            Comparison::TraceB => "closed form B vs brute-force 2x2 trace",
            Comparison::TraceC => "closed form C vs -2 Re of brute-force interference trace",
            Comparison::TraceCImaginary => "Im of brute-force interference trace vs 48*eps_sign*m*eps(p,q,p')",
            Comparison::CmVsCanonical => "CM dsigma/dtheta vs (dt/dtheta) x canonical dsigma/dt (brute-force traces), E >= 100 m",
            Comparison::CmVsHighEnergy => "CM dsigma/dtheta vs (dt/dtheta) x high-energy dsigma/dt, E >= 100 m",
            Comparison::HighEnergyVsCanonical => "high-energy dsigma/dt vs canonical dsigma/dt with closed-form traces, E >= 100 m",
            Comparison::SmallAngleDelta => "small-angle delta vs delta from the CM formula, theta <= 0.2",
            Comparison::EpsilonConvention => "measured sign s in [G_a,G_b] = -2i s eps G_c (Euclidean continuation) vs expected s = +1",
            Comparison::DualOracle => "A, B, C by matrix products vs by Clifford reduction",
            Comparison::TuSymmetry => "canonical dsigma/dt(s,t,u) vs dsigma/dt(s,u,t)",
        }
    }

    fn restricts_to_ultrarelativistic(&self) -> bool {
        matches!(
            self,
            Comparison::CmVsCanonical | Comparison::CmVsHighEnergy | Comparison::HighEnergyVsCanonical
        )
    }

    /// Expansions in `1/m_P²` are meaningless at `E ≥ 100 m` for the quoted
    /// cutoffs, so the ultrarelativistic comparisons run at `m_P → ∞`.
    fn uses_maxwell_limit(&self) -> bool {
        self.restricts_to_ultrarelativistic()
    }

    fn restricts_to_small_angles(&self) -> bool {
        matches!(self, Comparison::SmallAngleDelta)
    }
}

/// One audited relation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConsistencyRecord {
    pub comparison_id: &'static str,
    pub group: u8,
    pub description: &'static str,
    pub grid: String,
    pub n_points: usize,
    pub max_relative_deviation: f64,
    pub location: GridPoint,
    pub params: PhysicalParams,
    /// Mean of `x/y` over the grid.
    pub mean_ratio: f64,
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// Mean of `x - y` over the grid.
    pub mean_offset: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub note: String,
}

/// `(x, y)` for one comparison at one point; `x` is the shortcut or tested
/// route, `y` the reference.
pub fn compare_at(
    rep: &GammaRep,
    comparison: Comparison,
    point: GridPoint,
    params: &PhysicalParams,
) -> Result<(f64, f64)> {
    let m = params.m_e;
    let state = CmState::new(point.energy, point.theta, m)?;
    let ms = mandelstam_cm(&state);
    let momenta = || cm_kinematics(&state);
    let bf = || trace_triple_bruteforce(rep, &momenta(), m);
    let pair = match comparison {
        Comparison::TraceA => (closed_triple(&ms).a, bf()?.a),
        Comparison::TraceB => (closed_triple(&ms).b, bf()?.b),
        Comparison::TraceC => (closed_triple(&ms).c, bf()?.c),
        Comparison::TraceCImaginary => {
            let k = momenta();
            let odd = 48.0 * rep.epsilon_sign * m * epsilon_contract(&k.p, &k.q, &k.p_out);
            (bf()?.c_imag, odd)
        }
        Comparison::CmVsCanonical => {
            let cm = dsigma_dtheta_cm(point.energy, point.theta, params)?;
            let canonical = dsigma_dt(rep, &ms, params, TraceSource::BruteForce)?;
            (cm, canonical * jacobian_dt_dtheta(state.p2(), point.theta))
        }
        Comparison::CmVsHighEnergy => {
            let cm = dsigma_dtheta_cm(point.energy, point.theta, params)?;
            let he = dsigma_dt_highenergy(&ms, params)?;
            (cm, he * jacobian_dt_dtheta(state.p2(), point.theta))
        }
        Comparison::HighEnergyVsCanonical => (
            dsigma_dt_highenergy(&ms, params)?,
            dsigma_dt(rep, &ms, params, TraceSource::ClosedForm)?,
        ),
        Comparison::SmallAngleDelta => (
            delta_small_angle(ms.s, point.theta, params.m_p)?,
            delta_deviation(point.energy, point.theta, params)?,
        ),
        Comparison::EpsilonConvention => (rep.euclidean_epsilon_sign(), 1.0),
        Comparison::DualOracle => {
            let x = bf()?;
            let y = trace_triple_reduced(rep, &momenta(), m)?;
            (worst_component_pair(&x, &y).0, worst_component_pair(&x, &y).1)
        }
        Comparison::TuSymmetry => (
            dsigma_dt(rep, &ms, params, TraceSource::BruteForce)?,
            dsigma_dt(rep, &ms.swapped(), params, TraceSource::BruteForce)?,
        ),
    };
    Ok(pair)
}

fn worst_component_pair(x: &TraceTriple, y: &TraceTriple) -> (f64, f64) {
    [(x.a, y.a), (x.b, y.b), (x.c, y.c), (x.c_imag, y.c_imag)]
        .into_iter()
        .max_by(|p, q| relative_deviation(p.0, p.1).total_cmp(&relative_deviation(q.0, q.1)))
        .unwrap_or((0.0, 0.0))
}

/// Recomputes the relative deviation a record reports at its location.
pub fn reevaluate(rep: &GammaRep, record: &ConsistencyRecord) -> Result<f64> {
    let comparison = Comparison::ALL
        .into_iter()
        .find(|c| c.id() == record.comparison_id)
        .ok_or_else(|| validation(format!("unknown comparison `{}`", record.comparison_id)))?;
    let (x, y) = compare_at(rep, comparison, record.location, &record.params)?;
    Ok(relative_deviation(x, y))
}

fn grid_points_for(grid: &GridSpec, comparison: Comparison) -> Vec<GridPoint> {
    let m = grid.params.m_e;
    grid.points()
        .into_iter()
        .filter(|p| !comparison.restricts_to_ultrarelativistic() || p.energy >= ULTRARELATIVISTIC_RATIO * m)
        .filter(|p| !comparison.restricts_to_small_angles() || p.theta <= SMALL_ANGLE_MAX)
        .collect()
}

fn build_record(rep: &GammaRep, grid: &GridSpec, comparison: Comparison) -> Result<ConsistencyRecord> {
    let points = if comparison == Comparison::EpsilonConvention {
        vec![GridPoint { energy: grid.energies[0], theta: grid.angles[0] }]
    } else {
        grid_points_for(grid, comparison)
    };
    if points.is_empty() {
        return Err(validation(format!(
            "grid `{}` has no points for {}",
            grid.name,
            comparison.id()
        )));
    }
    let params = if comparison.uses_maxwell_limit() { grid.params.maxwell() } else { grid.params };
    let pairs: Vec<(f64, f64)> = points
        .par_iter()
        .map(|&p| compare_at(rep, comparison, p, &params))
        .collect::<Result<_>>()?;

    let mut worst = (0.0, points[0]);
    let (mut rmin, mut rmax, mut rsum, mut osum) = (f64::INFINITY, f64::NEG_INFINITY, 0.0, 0.0);
    for (&(x, y), &p) in pairs.iter().zip(&points) {
        if !x.is_finite() || !y.is_finite() {
            return Err(Error::Domain(format!("{} is not finite at {p:?}", comparison.id())));
        }
        let dev = relative_deviation(x, y);
        if dev > worst.0 {
            worst = (dev, p);
        }
        let ratio = if y == 0.0 { if x == 0.0 { 1.0 } else { f64::INFINITY } } else { x / y };
        rmin = rmin.min(ratio);
        rmax = rmax.max(ratio);
        rsum += ratio;
        osum += x - y;
    }
    let n = pairs.len() as f64;
    let mean_ratio = rsum / n;
    let mean_offset = osum / n;
    let tolerance = comparison.tolerance();
    let verdict = if worst.0 <= tolerance {
        Verdict::Agrees
    } else if mean_ratio.is_finite() && (rmax - rmin).abs() <= CONSTANT_RATIO_TOL * mean_ratio.abs() {
        Verdict::SystematicFactor
    } else {
        Verdict::ThetaDependent
    };

    let note = match (comparison, verdict) {
        (Comparison::EpsilonConvention, _) => format!(
            "measured s = {:+}; real-signature rule [g_mu,g_nu] = 2*k*eps*g^lambda with k = {:+}",
            rep.euclidean_epsilon_sign(),
            rep.epsilon_sign
        ),
        (Comparison::TraceCImaginary, _) => {
            "interference enters |M|^2 as 2 Re; C uses the real part".to_string()
        }
        (_, Verdict::SystematicFactor) => format!("constant ratio {mean_ratio}"),
        (Comparison::SmallAngleDelta, _) => {
            let scaled = pairs.iter().zip(&points).map(|(&(x, y), p)| x / y / (p.theta * p.theta));
            let (lo, hi) = scaled.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), r| (a.min(r), b.max(r)));
            format!("(x/y)/theta^2 ranges over [{lo}, {hi}]")
        }
        (Comparison::TraceC, Verdict::ThetaDependent) => {
            let m4 = params.m_e.powi(4);
            let spread = pairs.iter().map(|&(x, y)| x - y).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), d| (a.min(d), b.max(d)));
            format!(
                "x - y ranges over [{}, {}] m^4 (mean {} m^4)",
                spread.0 / m4,
                spread.1 / m4,
                mean_offset / m4
            )
        }
        _ => String::new(),
    };
    let note = if comparison.uses_maxwell_limit() {
        let e_top = points.iter().map(|p| p.energy).fold(f64::NEG_INFINITY, f64::max);
        let (lo, hi) = pairs
            .iter()
            .zip(&points)
            .filter(|(_, p)| p.energy == e_top)
            .map(|(&(x, y), _)| x / y)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), r| (a.min(r), b.max(r)));
        let sep = if note.is_empty() { "" } else { "; " };
        format!("evaluated at m_P = inf; x/y in [{lo}, {hi}] at E = {e_top} MeV{sep}{note}")
    } else {
        note
    };

    Ok(ConsistencyRecord {
        comparison_id: comparison.id(),
        group: comparison.group(),
        description: comparison.description(),
        grid: grid.describe(),
        n_points: points.len(),
        max_relative_deviation: worst.0,
        location: worst.1,
        params,
        mean_ratio,
        min_ratio: rmin,
        max_ratio: rmax,
        mean_offset,
        tolerance,
        verdict,
        note,
    })
}

/// Runs every comparison in [`Comparison::ALL`] over the grid.
pub fn consistency_report(rep: &GammaRep, grid: &GridSpec) -> Result<Vec<ConsistencyRecord>> {
    grid.validate()?;
    Comparison::ALL.iter().map(|&c| build_record(rep, grid, c)).collect()
}

/// One row of the benchmark-scenario table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioRow {
    pub scenario: String,
    /// Where the quoted bound comes from.
    pub citation: String,
    /// Where the cutoff comes from.
    pub cutoff_source: String,
    pub energy_mev: f64,
    pub theta_rad: f64,
    pub theta_deg: f64,
    pub m_p_mev: f64,
    pub alpha: f64,
    pub delta_full: f64,
    pub delta_full_percent: f64,
    pub delta_small_angle: f64,
    pub delta_small_angle_percent: f64,
    pub bound_percent: f64,
    pub within_bound_full: bool,
    pub within_bound_small_angle: bool,
    /// `|δ| / bound`; above 1 means the bound is missed by that factor.
    pub miss_factor_full: f64,
    pub miss_factor_small_angle: f64,
}

/// Overrides for [`scenario_table`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScenarioOverrides {
    pub alpha: Option<f64>,
    pub m_e: Option<f64>,
    /// Additional cutoffs evaluated against every bound, with a label.
    pub extra_cutoffs: Vec<(String, f64)>,
}

/// Scattering angle of all quoted scenarios.
pub const SCENARIO_THETA_DEG: f64 = 10.0;

/// Quoted cutoffs: `(label, m_P in MeV)`.
pub fn quoted_cutoffs() -> Vec<(String, f64)> {
    vec![
        ("hydrogen ground state (4D), m_P >= 35.51 MeV".to_string(), 35.51),
        ("lattice spacing a <= 3 fm, m_P >= 65.77 MeV".to_string(), MP_LATTICE_MEV),
        ("anomalous magnetic moment (4D), m_P >= 37.59 GeV".to_string(), 37_590.0),
    ]
}

struct Bound {
    scenario: &'static str,
    citation: &'static str,
    energy: f64,
    percent: f64,
    /// `None`: the bound names no cutoff, evaluate all of them.
    cutoff: Option<f64>,
}

const BOUNDS: [Bound; 3] = [
    Bound {
        scenario: "moller_energy_limit",
        citation: "E < 100 MeV Moller regime, theta = 10 deg: |delta| <= 2e-6 %",
        energy: 100.0,
        percent: 2e-6,
        cutoff: None,
    },
    Bound {
        scenario: "cold_atoms",
        citation: "cold-atom e-e at E = 1.530 MeV, theta = 10 deg: |delta| <= 1e-9 %",
        energy: 1.530,
        percent: 1e-9,
        cutoff: None,
    },
    Bound {
        scenario: "cold_atoms_lattice_cutoff",
        citation: "cold atoms with m_P >= 65.77 MeV, theta = 10 deg: |delta| <= 0.0001 %",
        energy: 1.530,
        percent: 1e-4,
        cutoff: Some(MP_LATTICE_MEV),
    },
];

/// δ at every quoted scenario, by the full CM ratio and the small-angle form.
pub fn scenario_table(overrides: &ScenarioOverrides) -> Result<Vec<ScenarioRow>> {
    let base = PhysicalParams::default();
    let params = PhysicalParams {
        alpha: overrides.alpha.unwrap_or(base.alpha),
        m_e: overrides.m_e.unwrap_or(ELECTRON_MASS_MEV),
        ..base
    };
    params.validate()?;
    let theta = SCENARIO_THETA_DEG.to_radians();
    let mut cutoffs = quoted_cutoffs();
    cutoffs.extend(overrides.extra_cutoffs.iter().cloned());

    let mut rows = Vec::new();
    for bound in &BOUNDS {
        let selected: Vec<&(String, f64)> = match bound.cutoff {
            Some(mp) => cutoffs.iter().filter(|(_, c)| *c == mp).collect(),
            None => cutoffs.iter().collect(),
        };
        for (label, m_p) in selected {
            let p = params.with_mp(*m_p);
            let full = delta_deviation(bound.energy, theta, &p)?;
            let s = -4.0 * bound.energy * bound.energy;
            let small = delta_small_angle(s, theta, *m_p)?;
            let (full_pct, small_pct) = (100.0 * full, 100.0 * small);
            rows.push(ScenarioRow {
                scenario: bound.scenario.to_string(),
                citation: bound.citation.to_string(),
                cutoff_source: label.clone(),
                energy_mev: bound.energy,
                theta_rad: theta,
                theta_deg: SCENARIO_THETA_DEG,
                m_p_mev: *m_p,
                alpha: p.alpha,
                delta_full: full,
                delta_full_percent: full_pct,
                delta_small_angle: small,
                delta_small_angle_percent: small_pct,
                bound_percent: bound.percent,
                within_bound_full: full_pct.abs() <= bound.percent,
                within_bound_small_angle: small_pct.abs() <= bound.percent,
                miss_factor_full: full_pct.abs() / bound.percent,
                miss_factor_small_angle: small_pct.abs() / bound.percent,
            });
        }
    }
    Ok(rows)
}

/// Sampled nonrelativistic `dσ/dθ` curves for several couplings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Figure1Dataset {
    pub p_mag: f64,
    pub m_e: f64,
    pub m_p: f64,
    pub thetas: Vec<f64>,
    pub curves: Vec<Figure1Curve>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Figure1Curve {
    pub alpha: f64,
    pub values: Vec<f64>,
}

/// Couplings of the two published curves.
pub const FIGURE1_ALPHAS: [f64; 2] = [2.3, 2.5];

pub fn figure1_dataset(
    alphas: &[f64],
    p_mag: f64,
    params: &PhysicalParams,
    thetas: &[f64],
) -> Result<Figure1Dataset> {
    if thetas.is_empty() {
        return Err(validation("figure grid is empty"));
    }
    if let Some(t) = thetas.iter().find(|&&t| !(t > 0.0 && t < PI)) {
        return Err(validation(format!("figure angle {t} touches or leaves (0, π)")));
    }
    let curves = alphas
        .iter()
        .map(|&alpha| {
            let p = params.with_alpha(alpha);
            let values = thetas
                .iter()
                .map(|&t| dsigma_dtheta_nonrel(p_mag, t, &p))
                .collect::<Result<Vec<f64>>>()?;
            Ok(Figure1Curve { alpha, values })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Figure1Dataset { p_mag, m_e: params.m_e, m_p: params.m_p, thetas: thetas.to_vec(), curves })
}

#[derive(Serialize)]
struct ConsistencyCsvRow<'a> {
    comparison_id: &'a str,
    group: u8,
    verdict: &'a str,
    max_relative_deviation: f64,
    location_energy_mev: f64,
    location_theta_rad: f64,
    m_e_mev: f64,
    m_p_mev: f64,
    alpha: f64,
    n_points: usize,
    mean_ratio: f64,
    min_ratio: f64,
    max_ratio: f64,
    mean_offset: f64,
    tolerance: f64,
    grid: &'a str,
    description: &'a str,
    note: &'a str,
}

/// One sample of [`Figure1Dataset`] in long form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FigureRow {
    pub alpha: f64,
    pub p_mev: f64,
    pub m_e_mev: f64,
    pub m_p_mev: f64,
    pub theta_rad: f64,
    pub value: f64,
    pub unit: &'static str,
}

impl Figure1Dataset {
    /// Curves in order, angles ascending within each.
    pub fn rows(&self) -> Vec<FigureRow> {
        self.curves
            .iter()
            .flat_map(|curve| {
                self.thetas.iter().zip(&curve.values).map(move |(&theta, &value)| FigureRow {
                    alpha: curve.alpha,
                    p_mev: self.p_mag,
                    m_e_mev: self.m_e,
                    m_p_mev: self.m_p,
                    theta_rad: theta,
                    value,
                    unit: "MeV^-1 rad^-1",
                })
            })
            .collect()
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Domain(format!("csv output failed: {e}"))
}

fn io_error(e: std::io::Error) -> Error {
    Error::Domain(format!("output failed: {e}"))
}

pub fn write_consistency_csv<W: Write>(out: W, records: &[ConsistencyRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(ConsistencyCsvRow {
            comparison_id: r.comparison_id,
            group: r.group,
            verdict: r.verdict.as_str(),
            max_relative_deviation: r.max_relative_deviation,
            location_energy_mev: r.location.energy,
            location_theta_rad: r.location.theta,
            m_e_mev: r.params.m_e,
            m_p_mev: r.params.m_p,
            alpha: r.params.alpha,
            n_points: r.n_points,
            mean_ratio: r.mean_ratio,
            min_ratio: r.min_ratio,
            max_ratio: r.max_ratio,
            mean_offset: r.mean_offset,
            tolerance: r.tolerance,
            grid: &r.grid,
            description: r.description,
            note: &r.note,
        })
        .map_err(csv_error)?;
    }
    w.flush().map_err(io_error)
}

pub fn write_scenarios_csv<W: Write>(out: W, rows: &[ScenarioRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(csv_error)?;
    }
    w.flush().map_err(io_error)
}

pub fn write_figure1_csv<W: Write>(out: W, data: &Figure1Dataset) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in data.rows() {
        w.serialize(row).map_err(csv_error)?;
    }
    w.flush().map_err(io_error)
}

/// Writes `{"records": [...]}` followed by a newline.
pub fn write_records_json<W: Write, T: Serialize>(mut out: W, records: &[T]) -> Result<()> {
    #[derive(Serialize)]
    struct Wrapper<'a, T> {
        records: &'a [T],
    }
    serde_json::to_writer_pretty(&mut out, &Wrapper { records })
        .map_err(|e| Error::Domain(format!("json output failed: {e}")))?;
    writeln!(out).map_err(io_error)
}
