use moller_core::amplitude::{
    bracket_from_triple, closed_triple, msq_bracket, podolsky_factor, trace_triple_bruteforce,
    trace_triple_reduced,
};
use moller_core::clifford::{
    dirac_adjoint, outer, projector, spinor_u, trace_product, trace_reduce, ChargeBranch,
};
use moller_core::cross_section::{
    delta_deviation, dsigma_dt, dsigma_dtheta_cm, dsigma_dtheta_nonrel, evaluate, jacobian_dt_dtheta,
};
use moller_core::kinematics::{cm_kinematics, mandelstam, mandelstam_cm, on_shell_momentum};
use moller_core::{gamma_rep, CmState, FormulaId, GammaFactor, LorentzVec3, PhysicalParams, TraceSource};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs().max(a.abs())
    }
}

fn state() -> impl Strategy<Value = CmState> {
    (0.1f64..5.0, 1e-3f64..3.0, 0.02f64..PI - 0.02)
        .prop_map(|(m, lg, theta)| CmState::new(m * (1.0 + 10f64.powf(lg - 1.5)), theta, m).unwrap())
}

fn vector() -> impl Strategy<Value = LorentzVec3> {
    (-4.0f64..4.0, -4.0f64..4.0, -4.0f64..4.0).prop_map(|(e, x, y)| LorentzVec3::new(e, x, y))
}

fn factor() -> impl Strategy<Value = GammaFactor> {
    prop_oneof![
        vector().prop_map(GammaFactor::Slash),
        (0usize..3).prop_map(GammaFactor::Lower),
        (0usize..3).prop_map(GammaFactor::Upper),
        (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(a, b)| GammaFactor::Scalar(Complex64::new(a, b))),
        (vector(), 0.1f64..3.0).prop_map(|(p, m)| GammaFactor::dirac(p, m)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn trace_oracles_agree(factors in prop::collection::vec(factor(), 1..=8)) {
        let rep = gamma_rep();
        let mats: Vec<_> = factors.iter().map(|f| f.to_matrix(&rep)).collect();
        let scale = 2.0 * mats.iter().map(|m| 2.0 * m.max_abs()).product::<f64>();
        let a = trace_product(&mats);
        let b = trace_reduce(&rep, &factors).unwrap();
        prop_assert!((a - b).norm() <= 1e-10 * a.norm().max(1e-3 * scale));
    }

    #[test]
    fn trace_is_cyclic(factors in prop::collection::vec(factor(), 2..=6)) {
        let rep = gamma_rep();
        let mut rotated = factors.clone();
        rotated.rotate_left(1);
        let a = trace_reduce(&rep, &factors).unwrap();
        let b = trace_reduce(&rep, &rotated).unwrap();
        let scale = factors.iter().map(|f| 2.0 * f.to_matrix(&rep).max_abs()).product::<f64>();
        prop_assert!((a - b).norm() <= 1e-11 * scale.max(1.0));
    }

    #[test]
    fn mandelstam_identities(st in state()) {
        let ms = mandelstam_cm(&st);
        prop_assert!(ms.sum_residual().abs() <= 1e-12 * ms.scale());
        let k = mandelstam(&cm_kinematics(&st), st.m).unwrap();
        prop_assert!((k.s - ms.s).abs() <= 1e-12 * ms.s.abs());
        prop_assert!((k.t - ms.t).abs() <= 1e-12 * ms.s.abs());
        prop_assert!(ms.t >= 0.0 && ms.u >= 0.0 && ms.s <= -4.0 * st.m * st.m);
        let back = ms.to_cm_state().unwrap();
        prop_assert!((back.theta - st.theta).abs() <= 1e-6);
    }

    #[test]
    fn momenta_conserve_and_stay_on_shell(st in state(), phi in 0.0f64..6.3) {
        let k = cm_kinematics(&st).rotated(phi);
        prop_assert!(k.validate(st.m).is_ok());
    }

    #[test]
    fn bruteforce_traces_are_frame_independent(st in state(), phi in 0.0f64..6.3) {
        let rep = gamma_rep();
        let k = cm_kinematics(&st);
        let a = trace_triple_bruteforce(&rep, &k, st.m).unwrap();
        let b = trace_triple_bruteforce(&rep, &k.rotated(phi), st.m).unwrap();
        let scale = a.a.abs().max(a.b.abs()).max(a.c.abs());
        prop_assert!((a.a - b.a).abs() <= 1e-10 * scale);
        prop_assert!((a.b - b.b).abs() <= 1e-10 * scale);
        prop_assert!((a.c - b.c).abs() <= 1e-10 * scale);
    }

    #[test]
    fn reduced_and_product_triples_agree(st in state()) {
        let rep = gamma_rep();
        let k = cm_kinematics(&st);
        let a = trace_triple_bruteforce(&rep, &k, st.m).unwrap();
        let b = trace_triple_reduced(&rep, &k, st.m).unwrap();
        let scale = a.a.abs().max(a.b.abs()).max(a.c.abs());
        prop_assert!((a.a - b.a).abs() <= 1e-10 * scale);
        prop_assert!((a.c - b.c).abs() <= 1e-10 * scale);
        prop_assert!((a.c_imag - b.c_imag).abs() <= 1e-10 * scale);
    }

    #[test]
    fn closed_a_b_match_bruteforce(st in state()) {
        let rep = gamma_rep();
        let bf = trace_triple_bruteforce(&rep, &cm_kinematics(&st), st.m).unwrap();
        let closed = closed_triple(&mandelstam_cm(&st));
        let scale = bf.a.abs().max(bf.b.abs());
        prop_assert!((closed.a - bf.a).abs() <= 1e-9 * scale);
        prop_assert!((closed.b - bf.b).abs() <= 1e-9 * scale);
        // the closed-form C is offset by a constant 12 m⁴
        let m4 = st.m.powi(4);
        prop_assert!((bf.c - closed.c - 12.0 * m4).abs() <= 1e-9 * scale.max(m4));
    }

    #[test]
    fn projector_and_spinor(px in -30.0f64..30.0, py in -30.0f64..30.0, m in 0.1f64..5.0) {
        let rep = gamma_rep();
        let p = on_shell_momentum(m, px, py).unwrap();
        let proj = projector(&rep, &p, m, ChargeBranch::Particle).unwrap().matrix;
        prop_assert!(proj.det().norm() <= 1e-12);
        let u = spinor_u(&rep, &p, m).unwrap();
        prop_assert!(outer(&u, &dirac_adjoint(&rep, &u)).max_abs_diff(&proj) <= 1e-12 * proj.max_abs().max(1.0));
    }

    #[test]
    fn partial_fractions(k2 in 1e-3f64..1e4, m_p in 0.05f64..100.0) {
        let lhs = podolsky_factor(k2, m_p).unwrap();
        let rhs = 1.0 / k2 - 1.0 / (k2 + m_p * m_p);
        prop_assert!(rel(lhs, rhs) <= 1e-9);
    }

    #[test]
    fn brackets_are_t_u_symmetric(st in state(), m_p in 0.5f64..1e4) {
        let rep = gamma_rep();
        let params = PhysicalParams::new(st.m, 0.1, m_p).unwrap();
        let ms = mandelstam_cm(&st);
        for source in [TraceSource::ClosedForm, TraceSource::BruteForce] {
            let a = msq_bracket(&rep, &ms, &params, source).unwrap();
            let b = msq_bracket(&rep, &ms.swapped(), &params, source).unwrap();
            prop_assert!(rel(a, b) <= 1e-11);
        }
    }

    #[test]
    fn cross_sections_scale_as_alpha_squared(
        energy in 0.6f64..50.0,
        theta in 0.05f64..3.0,
        alpha in 1e-3f64..3.0,
    ) {
        let rep = gamma_rep();
        let base = PhysicalParams::new(0.51, alpha, 65.77).unwrap();
        let doubled = base.with_alpha(2.0 * alpha);
        for formula in FormulaId::ALL {
            match (evaluate(&rep, formula, energy, theta, &base), evaluate(&rep, formula, energy, theta, &doubled)) {
                (Ok(a), Ok(b)) => prop_assert!(rel(b.value, 4.0 * a.value) <= 1e-14, "{formula}"),
                (Err(_), Err(_)) => {}
                _ => prop_assert!(false, "{formula}: one coupling failed"),
            }
        }
        prop_assert_eq!(delta_deviation(energy, theta, &base).unwrap(), delta_deviation(energy, theta, &doubled).unwrap());
    }

    #[test]
    fn reflection_symmetry(energy in 0.6f64..50.0, theta in 0.02f64..PI - 0.02, p in 0.01f64..10.0) {
        let params = PhysicalParams::default();
        prop_assert!(rel(
            dsigma_dtheta_cm(energy, theta, &params).unwrap(),
            dsigma_dtheta_cm(energy, PI - theta, &params).unwrap()
        ) <= 1e-12);
        prop_assert!(rel(
            dsigma_dtheta_nonrel(p, theta, &params).unwrap(),
            dsigma_dtheta_nonrel(p, PI - theta, &params).unwrap()
        ) <= 1e-12);
    }

    #[test]
    fn decoupling(energy in 0.6f64..1e3, theta in 0.02f64..PI - 0.02) {
        let params = PhysicalParams::default().with_mp(1e10 * energy);
        prop_assert!(delta_deviation(energy, theta, &params).unwrap().abs() < 1e-12);
    }

    #[test]
    fn bracket_reassembles_from_triple(st in state(), m_p in 0.5f64..1e3) {
        let rep = gamma_rep();
        let params = PhysicalParams::new(st.m, 1.0, m_p).unwrap();
        let ms = mandelstam_cm(&st);
        let direct = msq_bracket(&rep, &ms, &params, TraceSource::ClosedForm).unwrap();
        let rebuilt = bracket_from_triple(&ms, m_p, &closed_triple(&ms)).unwrap();
        prop_assert_eq!(direct, rebuilt);
    }

    #[test]
    fn invariant_and_angular_forms_are_positive(st in state()) {
        let rep = gamma_rep();
        let params = PhysicalParams::new(st.m, 0.1, f64::INFINITY).unwrap();
        let ms = mandelstam_cm(&st);
        let v = dsigma_dt(&rep, &ms, &params, TraceSource::BruteForce).unwrap();
        prop_assert!(v > 0.0 && v.is_finite());
        prop_assert!(jacobian_dt_dtheta(st.p2(), st.theta) > 0.0);
    }
}
