//! Named invariant suite.
//!
//! Hard checks are identities the implementation must satisfy; a failure is a
//! bug. Informational checks audit closed-form shortcuts and never fail the suite.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI};

use crate::amplitude::{
    closed_a, closed_b, closed_triple, podolsky_factor, relative_deviation, trace_triple_bruteforce,
    trace_triple_reduced, PhysicalParams, TraceSource,
};
use crate::clifford::{
    dirac_adjoint, dirac_numerator, gamma_rep, outer, projector, slash, spinor_u, trace_product,
    trace_reduce, ChargeBranch, ComplexMat2, GammaFactor, GammaRep,
};
use crate::cross_section::{
    delta_deviation, dsigma_dt, dsigma_dt_highenergy, dsigma_dtheta_cm, evaluate, phase_space_i,
    FormulaId,
};
use crate::amplitude::msq_bracket;
use crate::kinematics::{
    cm_kinematics, mandelstam, mandelstam_cm, on_shell_momentum, podolsky_mass_from_length, CmState,
    LorentzVec3, MandelstamSet,
};

/// Sample counts for the randomized checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub gamma_strings: usize,
    pub on_shell_momenta: usize,
    pub cm_states: usize,
    pub propagator_points: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 0x6d6f6c6c6572,
            gamma_strings: 10_000,
            on_shell_momenta: 1_000,
            cm_states: 100_000,
            propagator_points: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    /// Hard checks decide the suite's outcome.
    pub hard: bool,
    pub passed: bool,
    /// Worst measured error, or the measured quantity.
    pub measured: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl CheckResult {
    fn hard(name: &'static str, measured: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        CheckResult {
            name,
            hard: true,
            passed: measured <= tolerance,
            measured,
            tolerance,
            detail: detail.into(),
        }
    }

    fn info(name: &'static str, measured: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        CheckResult {
            name,
            hard: false,
            passed: measured <= tolerance,
            measured,
            tolerance,
            detail: detail.into(),
        }
    }

    /// One line: `PASS|FAIL|INFO name measured=… tol=… detail`.
    pub fn line(&self) -> String {
        let status = match (self.hard, self.passed) {
            (true, true) => "PASS",
            (true, false) => "FAIL",
            (false, true) => "INFO ok",
            (false, false) => "INFO differs",
        };
        format!(
            "{status} {} measured={:e} tol={:e} {}",
            self.name, self.measured, self.tolerance, self.detail
        )
    }
}

/// `true` when every hard check passed.
pub fn all_hard_pass(results: &[CheckResult]) -> bool {
    results.iter().filter(|r| r.hard).all(|r| r.passed)
}

fn rel(x: f64, y: f64) -> f64 {
    relative_deviation(x, y)
}

fn crel(x: Complex64, y: Complex64, scale: f64) -> f64 {
    (x - y).norm() / y.norm().max(scale).max(f64::MIN_POSITIVE)
}

pub fn check_gamma_anticommutator(rep: &GammaRep) -> CheckResult {
    CheckResult::hard(
        "gamma_anticommutator",
        rep.anticommutator_residual(),
        1e-14,
        "{g_mu,g_nu} = 2 g_munu, all index pairs",
    )
}

pub fn check_gamma_commutator(rep: &GammaRep) -> CheckResult {
    CheckResult::hard(
        "gamma_commutator_real",
        rep.commutator_residual(),
        1e-14,
        format!("[g_mu,g_nu] = 2 k eps_munulambda g^lambda with measured k = {:+}", rep.epsilon_sign),
    )
}

pub fn check_gamma_commutator_euclidean(rep: &GammaRep) -> CheckResult {
    let s = rep.euclidean_epsilon_sign();
    let residual = rep.euclidean_commutator_residual(s).max(rep.euclidean_anticommutator_residual());
    CheckResult::hard(
        "gamma_commutator_euclidean",
        residual,
        1e-14,
        format!("[G_a,G_b] = -2i s eps_abc G_c with G = (g1, g2, i g0): epsilon_sign s = {s:+}"),
    )
}

pub fn check_three_gamma_trace(rep: &GammaRep) -> CheckResult {
    let t = trace_product(&[rep.lower(0), rep.lower(1), rep.lower(2)]);
    let r = trace_reduce(rep, &[GammaFactor::Lower(0), GammaFactor::Lower(1), GammaFactor::Lower(2)])
        .unwrap_or(Complex64::new(f64::NAN, 0.0));
    let expected = Complex64::new(2.0 * rep.epsilon_sign, 0.0);
    let err = (t - expected).norm().max((r - expected).norm());
    CheckResult::hard("odd_trace", if err.is_nan() { f64::INFINITY } else { err }, 1e-14, "Tr[g_0 g_1 g_2] = 2k by both oracles")
}

fn random_vec(rng: &mut ChaCha8Rng, scale: f64) -> LorentzVec3 {
    LorentzVec3::new(
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
    )
}

fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0))
}

/// A random factor for the dual-oracle check.
pub fn random_factor(rng: &mut ChaCha8Rng) -> GammaFactor {
    match rng.gen_range(0..5) {
        0 => GammaFactor::Slash(random_vec(rng, 5.0)),
        1 => GammaFactor::Lower(rng.gen_range(0..3)),
        2 => GammaFactor::Upper(rng.gen_range(0..3)),
        3 => GammaFactor::Scalar(random_complex(rng)),
        _ => GammaFactor::Affine {
            coeff: random_complex(rng),
            p: random_vec(rng, 5.0),
            shift: random_complex(rng),
        },
    }
}

/// Relative disagreement of the two trace oracles on one string. Traces that
/// cancel far below the natural size of the string (product of factor sizes)
/// are judged against a thousandth of that size instead.
pub fn dual_oracle_error(rep: &GammaRep, factors: &[GammaFactor]) -> f64 {
    let mats: Vec<ComplexMat2> = factors.iter().map(|f| f.to_matrix(rep)).collect();
    let scale = 2.0 * mats.iter().map(|m| 2.0 * m.max_abs()).product::<f64>();
    let a = trace_product(&mats);
    match trace_reduce(rep, factors) {
        Ok(b) => crel(b, a, 1e-3 * scale),
        Err(_) => f64::INFINITY,
    }
}

pub fn check_dual_oracle(rep: &GammaRep, opts: &VerifyOptions) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut worst: f64 = 0.0;
    for _ in 0..opts.gamma_strings {
        let len = rng.gen_range(1..=8);
        let factors: Vec<GammaFactor> = (0..len).map(|_| random_factor(&mut rng)).collect();
        worst = worst.max(dual_oracle_error(rep, &factors));
    }
    CheckResult::hard(
        "dual_oracle_traces",
        worst,
        1e-10,
        format!("{} random strings of length 1..=8, matrix product vs Clifford reduction", opts.gamma_strings),
    )
}

fn random_on_shell(rng: &mut ChaCha8Rng) -> (LorentzVec3, f64) {
    let m = rng.gen_range(0.1..10.0);
    let p = on_shell_momentum(m, rng.gen_range(-50.0..50.0), rng.gen_range(-50.0..50.0))
        .expect("positive mass and finite momentum");
    (p, m)
}

pub fn check_projector(rep: &GammaRep, opts: &VerifyOptions) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 1);
    let mut worst: f64 = 0.0;
    for _ in 0..opts.on_shell_momenta {
        let (p, m) = random_on_shell(&mut rng);
        let scale = p.e * p.e;
        let minus = dirac_numerator(rep, &p, m);
        let plus = slash(rep, &p).scale(Complex64::i()) + ComplexMat2::IDENTITY.scale_re(m);
        worst = worst.max((minus * plus).max_abs() / scale);
        let proj = match projector(rep, &p, m, ChargeBranch::Particle) {
            Ok(x) => x.matrix,
            Err(_) => return CheckResult::hard("projector_contracts", f64::INFINITY, 1e-10, "projector failed"),
        };
        // rank one: det = 0; idempotent up to its trace: P² = Tr(P) P
        worst = worst.max(proj.det().norm());
        let tr = proj.trace();
        worst = worst.max((proj * proj - proj.scale(tr)).max_abs() / proj.max_abs());
    }
    CheckResult::hard(
        "projector_contracts",
        worst,
        1e-10,
        format!("(ig.p - m)(ig.p + m) = 0, det P = 0, P^2 = Tr(P) P over {} on-shell momenta", opts.on_shell_momenta),
    )
}

pub fn check_spinor_outer(rep: &GammaRep, opts: &VerifyOptions) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 2);
    let mut worst: f64 = 0.0;
    for _ in 0..opts.on_shell_momenta {
        let (p, m) = random_on_shell(&mut rng);
        let err = spinor_u(rep, &p, m).and_then(|u| {
            let proj = projector(rep, &p, m, ChargeBranch::Particle)?.matrix;
            Ok(outer(&u, &dirac_adjoint(rep, &u)).max_abs_diff(&proj) / proj.max_abs())
        });
        worst = worst.max(err.unwrap_or(f64::INFINITY));
    }
    CheckResult::hard(
        "spinor_outer_product",
        worst,
        1e-10,
        "u ubar = (ig.p - m)/2E with ubar = u^dagger sigma3",
    )
}

fn random_cm_state(rng: &mut ChaCha8Rng) -> CmState {
    let m = rng.gen_range(0.1..10.0);
    let energy = m * (1.0 + 10f64.powf(rng.gen_range(-3.0..3.0)));
    let theta = rng.gen_range(1e-3..PI - 1e-3);
    CmState::new(energy, theta, m).expect("sampled inside the physical region")
}

pub fn check_mandelstam(opts: &VerifyOptions) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 3);
    let (mut sum_worst, mut frame_worst): (f64, f64) = (0.0, 0.0);
    for _ in 0..opts.cm_states {
        let state = random_cm_state(&mut rng);
        let ms = mandelstam_cm(&state);
        sum_worst = sum_worst.max(ms.sum_residual().abs() / ms.scale());
        let scale = ms.s.abs();
        let from_momenta = mandelstam(&cm_kinematics(&state), state.m);
        let err = match from_momenta {
            Ok(k) => ((k.s - ms.s).abs().max((k.t - ms.t).abs()).max((k.u - ms.u).abs())) / scale,
            Err(_) => f64::INFINITY,
        };
        frame_worst = frame_worst.max(err);
    }
    vec![
        CheckResult::hard(
            "mandelstam_sum",
            sum_worst,
            1e-10,
            format!("s + t + u = -4m^2 relative, {} CM states", opts.cm_states),
        ),
        CheckResult::hard(
            "mandelstam_frame",
            frame_worst,
            1e-12,
            "invariants from CM momenta = closed CM invariants (s = -4E^2), relative to |s|",
        ),
    ]
}

pub fn check_partial_fraction(opts: &VerifyOptions) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 4);
    let mut worst: f64 = 0.0;
    let mut n = 0usize;
    while n < opts.propagator_points {
        let m_p = 10f64.powf(rng.gen_range(-2.0..4.0));
        let x = 10f64.powf(rng.gen_range(-3.0..3.0)) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        if (1.0 + x).abs() < 1e-3 {
            continue;
        }
        n += 1;
        let k2 = x * m_p * m_p;
        let lhs = podolsky_factor(k2, m_p).unwrap_or(f64::NAN);
        let rhs = 1.0 / k2 - 1.0 / (k2 + m_p * m_p);
        let err = rel(rhs, lhs);
        worst = worst.max(if err.is_nan() { f64::INFINITY } else { err });
    }
    CheckResult::hard(
        "podolsky_partial_fraction",
        worst,
        1e-12,
        format!("1/(k^2(1+k^2/mP^2)) = 1/k^2 - 1/(k^2+mP^2), {} points, |k^2/mP^2| in [1e-3,1e3]", opts.propagator_points),
    )
}

pub fn check_maxwell_limit() -> CheckResult {
    let mut worst: f64 = 0.0;
    for &k2 in &[1e-6, 0.3, 1.0, 7.5, 1e4, -2.0] {
        let v = podolsky_factor(k2, f64::INFINITY).unwrap_or(f64::NAN);
        worst = worst.max(rel(v, 1.0 / k2));
    }
    let params = PhysicalParams::default();
    for &energy in &[0.6, 1.53, 100.0, 1e4] {
        for &theta in &[0.01, 0.5, FRAC_PI_2, 3.0] {
            let d = delta_deviation(energy, theta, &params.with_mp(1e10 * energy)).unwrap_or(f64::NAN);
            worst = worst.max(d.abs());
        }
    }
    CheckResult::hard(
        "maxwell_limit",
        if worst.is_nan() { f64::INFINITY } else { worst },
        1e-12,
        "mP -> inf gives 1/k^2; |delta| at mP = 1e10 E",
    )
}

pub fn check_theta_symmetry(params: &PhysicalParams) -> CheckResult {
    let mut worst: f64 = 0.0;
    for i in 1..60 {
        let theta = PI * i as f64 / 60.0;
        for &energy in &[0.6, 1.53, 100.0] {
            let a = dsigma_dtheta_cm(energy, theta, params);
            let b = dsigma_dtheta_cm(energy, PI - theta, params);
            worst = worst.max(match (a, b) {
                (Ok(a), Ok(b)) => rel(a, b),
                _ => f64::INFINITY,
            });
        }
        for &p in &[0.1, 1.0, 10.0] {
            let a = crate::cross_section::dsigma_dtheta_nonrel(p, theta, params);
            let b = crate::cross_section::dsigma_dtheta_nonrel(p, PI - theta, params);
            worst = worst.max(match (a, b) {
                (Ok(a), Ok(b)) => rel(a, b),
                _ => f64::INFINITY,
            });
        }
    }
    CheckResult::hard("theta_reflection_symmetry", worst, 1e-12, "CM and nonrelativistic forms at theta and pi - theta")
}

pub fn check_alpha_scaling(rep: &GammaRep, params: &PhysicalParams) -> CheckResult {
    let mut worst: f64 = 0.0;
    let a1 = params.with_alpha(1.0 / 137.0);
    let a2 = params.with_alpha(2.3);
    let k = (2.3f64 * 137.0).powi(2);
    for formula in FormulaId::ALL {
        for &energy in &[0.6, 1.53, 20.0] {
            for &theta in &[0.05, 0.7, 2.0] {
                let x = evaluate(rep, formula, energy, theta, &a1);
                let y = evaluate(rep, formula, energy, theta, &a2);
                worst = worst.max(match (x, y) {
                    (Ok(x), Ok(y)) => rel(y.value, k * x.value),
                    (Err(_), Err(_)) => 0.0,
                    _ => f64::INFINITY,
                });
            }
        }
    }
    CheckResult::hard("alpha_squared_scaling", worst, 1e-12, "every formula scales as alpha^2 (1/137 vs 2.3)")
}

pub fn check_tu_symmetry(rep: &GammaRep, params: &PhysicalParams) -> CheckResult {
    let mut worst: f64 = 0.0;
    for &energy in &[0.6, 1.53, 100.0] {
        for &theta in &[0.2, 0.9, 1.4, 2.5] {
            let Ok(state) = CmState::new(energy, theta, params.m_e) else {
                return CheckResult::hard("t_u_symmetry", f64::INFINITY, 1e-12, "bad state");
            };
            let ms = mandelstam_cm(&state);
            let sw = ms.swapped();
            for source in [TraceSource::ClosedForm, TraceSource::BruteForce] {
                let a = msq_bracket(rep, &ms, params, source);
                let b = msq_bracket(rep, &sw, params, source);
                worst = worst.max(match (a, b) {
                    (Ok(a), Ok(b)) => rel(a, b),
                    _ => f64::INFINITY,
                });
            }
            let a = dsigma_dt_highenergy(&ms, params);
            let b = dsigma_dt_highenergy(&sw, params);
            worst = worst.max(match (a, b) {
                (Ok(a), Ok(b)) => rel(a, b),
                _ => f64::INFINITY,
            });
        }
    }
    CheckResult::hard("t_u_symmetry", worst, 1e-12, "canonical and high-energy brackets under t <-> u")
}

pub fn check_hand_values() -> CheckResult {
    let unit = PhysicalParams { m_e: 1.0, alpha: 1.0, m_p: 1e9, hbar_c: crate::kinematics::HBAR_C_MEV_FM };
    let cm = dsigma_dtheta_cm(1.0, FRAC_PI_2, &unit).unwrap_or(f64::NAN);
    let ps = phase_space_i(&MandelstamSet::from_raw(-16.0, 6.0, 6.0, 1.0)).unwrap_or(f64::NAN);
    let a = closed_a(-16.0, 0.0, 12.0, 1.0);
    let worst = rel(cm, 1.125).max(rel(ps, 1.0 / 12.0)).max(rel(a, 784.0));
    CheckResult::hard(
        "hand_values",
        if worst.is_nan() { f64::INFINITY } else { worst },
        1e-12,
        format!("cm(E=1, pi/2, alpha=1) = {cm}, I(-16,6,6,1) = {ps}, A(-16,0,12,1) = {a}"),
    )
}

pub fn check_cutoff_from_length() -> CheckResult {
    let m_p = podolsky_mass_from_length(3.0).unwrap_or(f64::NAN);
    let r = rel(m_p, 65.77);
    CheckResult::hard(
        "cutoff_from_length",
        if r.is_nan() { f64::INFINITY } else { r },
        5e-4,
        format!("hbar c / 3 fm = {m_p} MeV vs 65.77 MeV"),
    )
}

pub fn check_rotation_invariance(rep: &GammaRep) -> CheckResult {
    let mut worst: f64 = 0.0;
    let state = CmState::new(1.7, 1.1, 0.51).expect("valid state");
    let k = cm_kinematics(&state);
    let base = trace_triple_bruteforce(rep, &k, 0.51);
    for &phi in &[0.3, 1.9, 4.0] {
        let r = trace_triple_bruteforce(rep, &k.rotated(phi), 0.51);
        worst = worst.max(match (&base, r) {
            (Ok(a), Ok(b)) => a.max_relative_deviation(&b),
            _ => f64::INFINITY,
        });
    }
    CheckResult::hard("rotation_invariance", worst, 1e-10, "brute-force A, B, Re C under spatial rotation")
}

/// Audits of the closed forms against the brute-force traces.
pub fn closed_form_audits(rep: &GammaRep) -> Vec<CheckResult> {
    let (mut a_worst, mut b_worst, mut c_worst, mut c_offset): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    let m = 0.51;
    for &energy in &[0.6, 1.53, 5.0, 50.0] {
        for &theta in &[0.3, 1.0, 2.2] {
            let state = CmState::new(energy, theta, m).expect("valid state");
            let ms = mandelstam_cm(&state);
            let Ok(bf) = trace_triple_bruteforce(rep, &cm_kinematics(&state), m) else { continue };
            let closed = closed_triple(&ms);
            a_worst = a_worst.max(rel(closed.a, bf.a));
            b_worst = b_worst.max(rel(closed_b(ms.s, ms.t, ms.u, m), bf.b));
            c_worst = c_worst.max(rel(closed.c, bf.c));
            c_offset = c_offset.max(((bf.c - closed.c) / m.powi(4)).abs());
        }
    }
    vec![
        CheckResult::info("closed_A_vs_bruteforce", a_worst, 1e-8, "closed-form A vs 2x2 trace"),
        CheckResult::info("closed_B_vs_bruteforce", b_worst, 1e-8, "closed-form B vs 2x2 trace"),
        CheckResult::info(
            "closed_C_vs_bruteforce",
            c_worst,
            1e-8,
            format!("closed-form C vs -2 Re Tr; max |difference| = {c_offset} m^4"),
        ),
    ]
}

/// Reduced-trace A, B, C against brute force at one point, for callers that
/// want a single-number smoke test.
pub fn triple_oracle_agreement(rep: &GammaRep) -> f64 {
    let state = CmState::new(2.3, 0.8, 1.0).expect("valid state");
    let k = cm_kinematics(&state);
    match (trace_triple_bruteforce(rep, &k, 1.0), trace_triple_reduced(rep, &k, 1.0)) {
        (Ok(a), Ok(b)) => a.max_relative_deviation(&b),
        _ => f64::INFINITY,
    }
}

/// Runs every check in a fixed order.
pub fn run_all(opts: &VerifyOptions) -> Vec<CheckResult> {
    let rep = gamma_rep();
    let params = PhysicalParams::default();
    let mut out = vec![
        check_gamma_anticommutator(&rep),
        check_gamma_commutator(&rep),
        check_gamma_commutator_euclidean(&rep),
        check_three_gamma_trace(&rep),
        check_dual_oracle(&rep, opts),
        check_projector(&rep, opts),
        check_spinor_outer(&rep, opts),
    ];
    out.extend(check_mandelstam(opts));
    out.extend([
        check_partial_fraction(opts),
        check_maxwell_limit(),
        check_theta_symmetry(&params),
        check_alpha_scaling(&rep, &params),
        check_tu_symmetry(&rep, &params),
        check_rotation_invariance(&rep),
        check_hand_values(),
        check_cutoff_from_length(),
    ]);
    out.extend(closed_form_audits(&rep));
    // keeps the invariant-cross-section route exercised by the suite
    let unit = PhysicalParams { m_e: 1.0, alpha: 1.0, m_p: f64::INFINITY, hbar_c: crate::kinematics::HBAR_C_MEV_FM };
    let ms = MandelstamSet::from_raw(-16.0, 6.0, 6.0, 1.0);
    let canonical = dsigma_dt(&rep, &ms, &unit, TraceSource::BruteForce).unwrap_or(f64::NAN);
    out.push(CheckResult::info(
        "canonical_finite",
        if canonical.is_finite() { 0.0 } else { f64::INFINITY },
        0.0,
        format!("dsigma/dt(-16, 6, 6; m = 1, alpha = 1) = {canonical}"),
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> VerifyOptions {
        VerifyOptions { gamma_strings: 500, on_shell_momenta: 200, cm_states: 2000, propagator_points: 20_000, ..Default::default() }
    }

    #[test]
    fn quick_suite_passes() {
        let results = run_all(&quick());
        assert!(results.iter().filter(|r| r.hard).count() >= 12);
        for r in &results {
            assert!(!r.hard || r.passed, "{}", r.line());
        }
        assert!(all_hard_pass(&results));
        assert!(results.iter().any(|r| r.detail.contains("epsilon_sign s = +1")));
    }

    #[test]
    fn reduced_triple_matches() {
        assert!(triple_oracle_agreement(&gamma_rep()) < 1e-10);
    }

    #[test]
    fn failing_check_is_reported() {
        let r = CheckResult::hard("x", 1.0, 0.5, "");
        assert!(!r.passed && r.line().starts_with("FAIL x"));
        assert!(!all_hard_pass(&[r]));
        assert!(all_hard_pass(&[CheckResult::info("y", 1.0, 0.5, "")]));
    }
}
