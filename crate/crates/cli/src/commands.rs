use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

use moller_core::amplitude::{ALPHA_QED, ELECTRON_MASS_MEV, MP_LATTICE_MEV};
use moller_core::cross_section::{delta_deviation, delta_small_angle, dsigma_dtheta_nonrel, evaluate};
use moller_core::report::{
    consistency_report, figure1_dataset, lin_space, scenario_table, write_consistency_csv, ScenarioOverrides,
};
use moller_core::verify::{all_hard_pass, run_all, VerifyOptions};
use moller_core::{gamma_rep, FormulaId, GridSpec, PhysicalParams};

use crate::output::{echo_prefix, emit, render};
use crate::scan::ScanSpec;
use crate::settings::{Format, Settings};
use crate::{CliError, ReportArgs};

#[derive(Debug, Clone, Serialize)]
struct XsecRow {
    formula: FormulaId,
    #[serde(rename = "E_MeV")]
    energy: f64,
    theta_rad: f64,
    #[serde(rename = "mP_MeV")]
    m_p: f64,
    alpha: f64,
    value: f64,
    unit: &'static str,
}

#[derive(Debug, Clone, Serialize)]
struct DeviationRow {
    #[serde(rename = "E_MeV")]
    energy: f64,
    theta_rad: f64,
    #[serde(rename = "mP_MeV")]
    m_p: f64,
    alpha: f64,
    delta: f64,
    delta_percent: f64,
    delta_small_angle: f64,
    delta_small_angle_percent: f64,
}

fn single_or_scan(
    name: &str,
    fixed: Option<f64>,
    scan: Option<ScanSpec>,
    default: Option<f64>,
) -> Result<Vec<f64>, CliError> {
    match (fixed, scan) {
        (Some(_), Some(_)) => Err(CliError::Usage(format!("give either --{name} or --scan-{name}, not both"))),
        (Some(v), None) => Ok(vec![v]),
        (None, Some(s)) => Ok(s.values()),
        (None, None) => default
            .map(|v| vec![v])
            .ok_or_else(|| CliError::Usage(format!("--{name} or --scan-{name} is required"))),
    }
}

fn angle_values(s: &Settings, default: Option<Vec<f64>>) -> Result<Vec<f64>, CliError> {
    let given = [s.theta.is_some(), s.theta_deg.is_some(), s.scan_theta.is_some(), s.scan_theta_deg.is_some()];
    let thetas = match given.iter().filter(|&&g| g).count() {
        0 => default.ok_or_else(|| {
            CliError::Usage("an angle is required: --theta, --theta-deg, --scan-theta or --scan-theta-deg".into())
        })?,
        1 => {
            if let Some(t) = s.theta {
                vec![t]
            } else if let Some(d) = s.theta_deg {
                vec![d.to_radians()]
            } else if let Some(scan) = s.scan_theta {
                scan.values()
            } else {
                s.scan_theta_deg.map(|d| d.values().into_iter().map(f64::to_radians).collect()).unwrap_or_default()
            }
        }
        _ => return Err(CliError::Usage("give exactly one of --theta, --theta-deg, --scan-theta, --scan-theta-deg".into())),
    };
    for &t in &thetas {
        if t == 0.0 || t == PI {
            return Err(CliError::Domain(format!(
                "theta = {t} rad is a pole: the cross section diverges at theta = 0 and pi (Coulomb singularity)"
            )));
        }
        if !(t > 0.0 && t < PI) {
            return Err(CliError::Domain(format!("theta = {t} rad must lie strictly inside (0, pi)")));
        }
    }
    Ok(thetas)
}

fn mass(s: &Settings) -> f64 {
    s.me.unwrap_or(ELECTRON_MASS_MEV)
}

struct Point {
    energy: f64,
    m_p: f64,
    alpha: f64,
    theta: f64,
}

/// Cartesian product in the order energy, m_P, alpha, theta (innermost).
fn points(energies: &[f64], mps: &[f64], alphas: &[f64], thetas: &[f64]) -> Vec<Point> {
    let mut out = Vec::with_capacity(energies.len() * mps.len() * alphas.len() * thetas.len());
    for &energy in energies {
        for &m_p in mps {
            for &alpha in alphas {
                for &theta in thetas {
                    out.push(Point { energy, m_p, alpha, theta });
                }
            }
        }
    }
    out
}

/// Evaluates in parallel; the first failure in input order wins.
fn evaluate_all<T: Send>(
    pts: &[Point],
    f: impl Fn(&Point) -> Result<T, CliError> + Sync + Send,
) -> Result<Vec<T>, CliError> {
    let results: Vec<Result<T, CliError>> = pts.par_iter().map(f).collect();
    results.into_iter().collect()
}

fn finite(value: f64, what: &str, p: &Point) -> Result<f64, CliError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(CliError::Domain(format!(
            "{what} is not finite at E = {} MeV, theta = {} rad, m_P = {} MeV",
            p.energy, p.theta, p.m_p
        )))
    }
}

pub fn xsec(s: &Settings) -> Result<(), CliError> {
    let formula = s.formula.ok_or_else(|| CliError::Usage("--formula is required".into()))?;
    let thetas = angle_values(s, None)?;
    let m = mass(s);
    let by_momentum = s.p.is_some();
    if by_momentum && formula != FormulaId::Nonrel {
        return Err(CliError::Usage("--p applies to the nonrel formula only; use --energy".into()));
    }
    if by_momentum && (s.energy.is_some() || s.scan_energy.is_some()) {
        return Err(CliError::Usage("give either --p or --energy, not both".into()));
    }
    let energies = match s.p {
        Some(p) => vec![p],
        None => single_or_scan("energy", s.energy, s.scan_energy, None)?,
    };
    let mps = single_or_scan("mp", s.mp, s.scan_mp, Some(MP_LATTICE_MEV))?;
    let alphas = single_or_scan("alpha", s.alpha, s.scan_alpha, Some(ALPHA_QED))?;
    let rep = gamma_rep();
    let pts = points(&energies, &mps, &alphas, &thetas);
    let rows = evaluate_all(&pts, |p| {
        let params = PhysicalParams::new(m, p.alpha, p.m_p)?;
        let (energy, value) = if by_momentum {
            (p.energy.hypot(m), dsigma_dtheta_nonrel(p.energy, p.theta, &params)?)
        } else {
            (p.energy, evaluate(&rep, formula, p.energy, p.theta, &params)?.value)
        };
        Ok(XsecRow {
            formula,
            energy,
            theta_rad: p.theta,
            m_p: p.m_p,
            alpha: p.alpha,
            value: finite(value, "cross section", p)?,
            unit: formula.unit(),
        })
    })?;
    emit(s, &render("xsec", s, &rows)?)
}

pub fn deviation(s: &Settings) -> Result<(), CliError> {
    if s.p.is_some() {
        return Err(CliError::Usage("deviation takes --energy, not --p".into()));
    }
    let thetas = angle_values(s, None)?;
    let m = mass(s);
    let energies = single_or_scan("energy", s.energy, s.scan_energy, None)?;
    let mps = single_or_scan("mp", s.mp, s.scan_mp, Some(MP_LATTICE_MEV))?;
    let alphas = single_or_scan("alpha", s.alpha, s.scan_alpha, Some(ALPHA_QED))?;
    let pts = points(&energies, &mps, &alphas, &thetas);
    let rows = evaluate_all(&pts, |p| {
        let params = PhysicalParams::new(m, p.alpha, p.m_p)?;
        if !(p.energy >= m) {
            return Err(CliError::Domain(format!("energy {} MeV is below the electron mass {m} MeV", p.energy)));
        }
        let delta = finite(delta_deviation(p.energy, p.theta, &params)?, "delta", p)?;
        let small = finite(delta_small_angle(-4.0 * p.energy * p.energy, p.theta, p.m_p)?, "delta", p)?;
        Ok(DeviationRow {
            energy: p.energy,
            theta_rad: p.theta,
            m_p: p.m_p,
            alpha: p.alpha,
            delta,
            delta_percent: 100.0 * delta,
            delta_small_angle: small,
            delta_small_angle_percent: 100.0 * small,
        })
    })?;
    emit(s, &render("deviation", s, &rows)?)
}

pub fn verify(s: &Settings) -> Result<(), CliError> {
    let results = run_all(&VerifyOptions::default());
    let rep = gamma_rep();
    let mut text = format!(
        "epsilon_sign = {:+} (Euclidean [G_a,G_b] = -2i s eps_abc G_c); real-signature k = {:+}\n",
        rep.euclidean_epsilon_sign(),
        rep.epsilon_sign
    );
    for r in &results {
        text.push_str(&r.line());
        text.push('\n');
    }
    let hard = results.iter().filter(|r| r.hard).count();
    let failed = results.iter().filter(|r| r.hard && !r.passed).count();
    text.push_str(&format!("{} of {hard} hard invariants passed\n", hard - failed));
    print!("{text}");
    if s.out.is_some() {
        emit(s, &render("verify", s, &results)?)?;
    }
    if all_hard_pass(&results) {
        Ok(())
    } else {
        Err(CliError::Verification(format!("{failed} hard invariant(s) failed")))
    }
}

fn params_from(s: &Settings) -> Result<PhysicalParams, CliError> {
    if s.scan_mp.is_some() || s.scan_alpha.is_some() || s.scan_energy.is_some() {
        return Err(CliError::Usage("reports do not take --scan-energy, --scan-mp or --scan-alpha".into()));
    }
    Ok(PhysicalParams::new(
        mass(s),
        s.alpha.unwrap_or(ALPHA_QED),
        s.mp.unwrap_or(MP_LATTICE_MEV),
    )?)
}

pub fn report(args: &ReportArgs, s: &Settings) -> Result<(), CliError> {
    let params = params_from(s)?;
    if args.consistency {
        let grid = GridSpec::by_name(&args.grid)
            .map_err(|e| CliError::Usage(e.to_string()))?
            .with_params(params);
        let records = consistency_report(&gamma_rep(), &grid)?;
        let bytes = match s.format() {
            Format::Json => render("report --consistency", s, &records)?,
            Format::Csv => {
                let mut buf = echo_prefix("report --consistency", s);
                write_consistency_csv(&mut buf, &records)?;
                buf
            }
        };
        emit(s, &bytes)
    } else if args.scenarios {
        let mut extra: Vec<(String, f64)> =
            args.extra_mp.iter().map(|&m| (format!("user-supplied m_P = {m} MeV"), m)).collect();
        if let Some(m) = s.mp {
            extra.push((format!("user-supplied m_P = {m} MeV"), m));
        }
        let overrides = ScenarioOverrides { alpha: s.alpha, m_e: s.me, extra_cutoffs: extra };
        let rows = scenario_table(&overrides)?;
        emit(s, &render("report --scenarios", s, &rows)?)
    } else {
        let p = s.p.ok_or_else(|| CliError::Usage("--figure1 needs --p (CM momentum, MeV)".into()))?;
        if args.theta_steps == 0 {
            return Err(CliError::Usage("--theta-steps must be at least 1".into()));
        }
        let thetas = angle_values(s, Some(lin_space(0.05, PI - 0.05, args.theta_steps)))?;
        let data = figure1_dataset(&args.alphas, p, &params, &thetas)?;
        emit(s, &render("report --figure1", s, &data.rows())?)
    }
}
