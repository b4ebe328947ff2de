use hqm::characters::{f_mn, f_phi, f_residue, CharQuery};
use hqm::exactq::{int, q_trunc, rat, QSeries, Rational};
use hqm::linsolve::IncrementalSolver;
use hqm::partitions::Partition;
use hqm::phipoly::{build_phi_symbolic, YPoly};
use hqm::quasimod::{fit_qm, qm_basis, qm_eval, QMPoly};
use num_traits::One;
use proptest::prelude::*;

const TRUNC: i64 = 24 * 6;

fn small_rat() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

/// Sparse series with exponents in `[lo, TRUNC)`, in units of 1/24.
fn series(lo: i64) -> impl Strategy<Value = QSeries> {
    prop::collection::vec((lo..TRUNC, small_rat()), 0..8)
        .prop_map(|terms| QSeries::from_terms(terms, TRUNC))
}

fn partition() -> impl Strategy<Value = Partition> {
    prop::collection::vec(1usize..=5, 0..5).prop_map(|mut p| {
        p.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(p).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn series_ring_axioms(a in series(0), b in series(0), c in series(0)) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &QSeries::one(TRUNC), a.clone());
    }

    #[test]
    fn d_is_a_derivation(a in series(0), b in series(0)) {
        let lhs = (&a * &b).d_operator();
        let rhs = &(&a.d_operator() * &b) + &(&a * &b.d_operator());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn truncation_commutes_with_product(a in series(0), b in series(0), t in 0i64..TRUNC) {
        let lhs = (&a * &b).truncate(t);
        let rhs = (&a.truncate(t) * &b.truncate(t)).truncate(t);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn exp_log_inverse(f in series(1)) {
        let e = f.exp_series().unwrap();
        prop_assert_eq!(e.log_series().unwrap(), f.clone());
        let g = &QSeries::one(TRUNC) + &f;
        prop_assert_eq!(g.log_series().unwrap().exp_series().unwrap(), g);
    }

    #[test]
    fn exp_is_a_homomorphism(a in series(1), b in series(1)) {
        let lhs = (&a + &b).exp_series().unwrap();
        let rhs = &a.exp_series().unwrap() * &b.exp_series().unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn solver_recovers_planted_solution(
        n in 1usize..6,
        entries in prop::collection::vec(-5i64..=5, 36 + 60),
        xs in prop::collection::vec(small_rat(), 6),
    ) {
        let x = &xs[..n];
        let mut solver = IncrementalSolver::new(n);
        let mut rows = entries.chunks(n).take(12 + n);
        let mut fed = 0;
        for chunk in rows.by_ref() {
            let row: Vec<Rational> = chunk.iter().map(|&v| int(v)).collect();
            let rhs: Rational = row.iter().zip(x).map(|(a, b)| a * b).sum();
            prop_assert!(solver.push(&row, &rhs).is_ok());
            fed += 1;
        }
        if solver.is_full_rank() {
            prop_assert_eq!(solver.solution().unwrap(), x.to_vec());
            prop_assert_eq!(solver.verified() + solver.full_rank_after().unwrap(), fed);
        } else {
            prop_assert!(solver.solution().is_none());
        }
    }

    #[test]
    fn solver_rejects_inconsistent_row(a in 1i64..9, b in 1i64..9) {
        let mut solver = IncrementalSolver::new(2);
        solver.push(&[int(a), int(b)], &int(1)).unwrap();
        prop_assert!(solver.push(&[int(2 * a), int(2 * b)], &int(3)).is_err());
    }

    #[test]
    fn conjugation_involution(lambda in partition()) {
        let mu = lambda.conjugate();
        prop_assert_eq!(mu.size(), lambda.size());
        prop_assert_eq!(mu.conjugate(), lambda.clone());
        prop_assert_eq!(mu.content_sum(), -lambda.content_sum());
        prop_assert_eq!(mu.hook_dim(), lambda.hook_dim());
    }

    #[test]
    fn power_sums_agree_with_frobenius(lambda in partition(), k in 1u32..6) {
        prop_assert_eq!(lambda.pk(k), lambda.pk_via_frobenius(k));
        prop_assert_eq!(lambda.pk_padded(k, lambda.len() + 3), lambda.pk(k));
        let sign = if k % 2 == 0 { int(-1) } else { Rational::one() };
        prop_assert_eq!(lambda.conjugate().pk(k), sign * lambda.pk(k));
    }

    #[test]
    fn character_routes_agree(lambda in partition(), m in 2usize..=5) {
        prop_assume!(lambda.size() >= m);
        let q = CharQuery::new(lambda, m).unwrap();
        let phi = build_phi_symbolic(m).unwrap();
        let mn = f_mn(&q);
        prop_assert_eq!(f_residue(&q).unwrap(), mn.clone());
        prop_assert_eq!(f_phi(&q, &phi).unwrap(), mn);
    }

    #[test]
    fn ypoly_eval_is_a_ring_map(
        ca in prop::collection::vec(small_rat(), 4),
        cb in prop::collection::vec(small_rat(), 4),
        ys in prop::collection::vec(small_rat(), 3),
    ) {
        let monos = [vec![0, 0, 0], vec![1, 0, 0], vec![0, 2, 0], vec![1, 0, 1]];
        let a = YPoly::from_terms(3, monos.iter().cloned().zip(ca));
        let b = YPoly::from_terms(3, monos.iter().cloned().zip(cb));
        prop_assert_eq!(a.mul(&b).eval(&ys), a.eval(&ys) * b.eval(&ys));
        prop_assert_eq!(a.add(&b).eval(&ys), a.eval(&ys) + b.eval(&ys));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fit_recovers_planted_quasimodular_form(coeffs in prop::collection::vec(small_rat(), 7)) {
        let wmax = 8;
        let basis = qm_basis(wmax);
        let poly = QMPoly::from_terms(basis.iter().copied().zip(coeffs));
        let f = qm_eval(&poly, 30);
        prop_assert_eq!(f.trunc(), q_trunc(30));
        let fit = fit_qm(&f, wmax, 8).unwrap();
        prop_assert_eq!(fit.poly, poly);
        prop_assert!(fit.surplus_verified >= 8);
    }
}
