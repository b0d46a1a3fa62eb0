use proptest::prelude::*;

use rectiflow::operator::{
    build_liouvillian, dissipator_apply, steady_state, Complex64, ComplexMatrix,
};

fn matrix(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-1.0_f64..1.0, -1.0_f64..1.0), dim * dim).prop_map(move |v| {
        ComplexMatrix::from_row_major(v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect()).unwrap()
    })
}

fn hermitian(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    matrix(dim).prop_map(|m| (&m + &m.adjoint()).scale_real(0.5))
}

fn density(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    matrix(dim).prop_map(|m| {
        let p = &m * &m.adjoint();
        let tr = p.trace().re;
        p.scale_real(1.0 / tr)
    })
}

fn model(dim: usize) -> impl Strategy<Value = (ComplexMatrix, Vec<(f64, ComplexMatrix)>)> {
    (
        hermitian(dim),
        prop::collection::vec((0.0_f64..2.0, matrix(dim)), 1..4),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generator_is_trace_preserving_and_hermiticity_preserving(
        (h, jumps) in model(3),
        rho in density(3),
    ) {
        let l = build_liouvillian(&h, &jumps).unwrap();
        prop_assert!(l.trace_residual() < 1e-12);
        let drho = l.apply(&rho).unwrap();
        prop_assert!(drho.trace().norm() < 1e-12);
        prop_assert!(drho.hermitian_deviation() < 1e-12);
        // one explicit Euler step keeps the trace
        let next = &rho + &drho.scale_real(1e-3);
        prop_assert!((next.trace() - 1.0).norm() < 1e-12);
    }

    #[test]
    fn dissipator_is_linear_in_the_state(
        x in matrix(4),
        a in density(4),
        b in density(4),
        s in -2.0_f64..2.0,
    ) {
        let lhs = dissipator_apply(&x, &(&a + &b.scale_real(s))).unwrap();
        let rhs = &dissipator_apply(&x, &a).unwrap() + &dissipator_apply(&x, &b).unwrap().scale_real(s);
        prop_assert!((&lhs - &rhs).max_abs() < 1e-12);
    }

    #[test]
    fn superoperator_matches_direct_application((h, jumps) in model(4), rho in density(4)) {
        let l = build_liouvillian(&h, &jumps).unwrap();
        let direct = jumps.iter().fold(
            h.commutator(&rho).scale(Complex64::new(0.0, -1.0)),
            |acc, (rate, x)| &acc + &dissipator_apply(x, &rho).unwrap().scale_real(*rate),
        );
        prop_assert!((&l.apply(&rho).unwrap() - &direct).max_abs() < 1e-12);
    }

    #[test]
    fn generic_steady_states_are_physical((h, jumps) in model(3)) {
        let l = build_liouvillian(&h, &jumps).unwrap();
        // generic random models are ergodic; rare degenerate draws are skipped
        if let Ok(ss) = steady_state(&l) {
            let rho = ss.rho.matrix();
            prop_assert!((rho.trace() - 1.0).norm() < 1e-12);
            prop_assert!(rho.hermitian_deviation() < 1e-12);
            prop_assert!(ss.rho.min_eigenvalue() >= -1e-10);
            prop_assert!(l.apply(rho).unwrap().max_abs() < 1e-9 * (1.0 + l.matrix().max_abs()));
        }
    }
}
