use std::collections::BTreeSet;
use std::sync::OnceLock;

use coxkit_core::verify::{self, beta_trace, default_radius, verify_ball, verify_finite, verify_outward, verify_speyer};
use coxkit_core::{catalog, CoxeterSystem, Matrix, Word};
use proptest::prelude::*;

/// Irreducible finite systems with their Coxeter numbers.
fn finite_suite() -> &'static [(CoxeterSystem, usize)] {
    static SUITE: OnceLock<Vec<(CoxeterSystem, usize)>> = OnceLock::new();
    SUITE.get_or_init(|| {
        vec![
            (catalog::a(2), 3),
            (catalog::a(3), 4),
            (catalog::a(4), 5),
            (catalog::b(2), 4),
            (catalog::b(3), 6),
            (catalog::b(4), 8),
            (catalog::d4(), 6),
            (catalog::h3(), 10),
            (catalog::f4(), 12),
            (catalog::i2(5), 5),
            (catalog::i2(6), 6),
            (catalog::i2(7), 7),
            (catalog::i2(8), 8),
        ]
    })
}

fn infinite_suite() -> &'static [CoxeterSystem] {
    static SUITE: OnceLock<Vec<CoxeterSystem>> = OnceLock::new();
    SUITE.get_or_init(|| {
        vec![
            catalog::affine_a1(),
            catalog::affine_a2(),
            catalog::affine_c2(),
            catalog::affine_g2(),
            catalog::affine_d4(),
            catalog::triangle(3, 3, 4),
        ]
    })
}

#[test]
fn finite_centralizers_of_standard_coxeter_elements() {
    for (sys, h) in finite_suite() {
        let rep = verify_finite(sys, &sys.standard_coxeter_element()).unwrap();
        assert!(rep.is_consistent());
        assert_eq!(rep.coxeter_order, Some(*h));
        assert_eq!(rep.centralizing.len(), *h);
        let powers: BTreeSet<i64> = rep.centralizing.iter().map(|g| g.power.unwrap()).collect();
        assert_eq!(powers, (0..*h as i64).collect());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(39))]
    #[test]
    fn finite_centralizers_for_any_ordering(idx in 0usize..13, seed in prop::collection::vec(0usize..1000, 4)) {
        let (sys, h) = &finite_suite()[idx];
        let mut perm: Vec<usize> = (0..sys.rank()).collect();
        for (k, r) in seed.iter().enumerate().take(sys.rank()) {
            let j = k + r % (sys.rank() - k);
            perm.swap(k, j);
        }
        let c = sys.coxeter_element(&perm).unwrap();
        let rep = verify_finite(sys, &c).unwrap();
        prop_assert!(rep.is_consistent());
        prop_assert_eq!(rep.centralizing.len(), *h);
    }

    #[test]
    fn conjugation_covariance(idx in 1usize..4, pick in 0usize..1000) {
        let sys = &infinite_suite()[idx];
        let r = 8;
        let c = sys.standard_coxeter_element();
        let small = sys.ball(3).unwrap();
        let x = &small.members()[pick % small.len()];
        let lx = sys.length(x);
        let big = sys.ball(r).unwrap();
        let xinv = sys.inverse(x).unwrap();
        let expected: BTreeSet<Matrix> = big
            .members()
            .iter()
            .filter(|g| sys.centralizes(g, &c))
            .map(|g| sys.multiply(&sys.multiply(x, g).unwrap(), &xinv).unwrap())
            .filter(|h| sys.length(h) <= r - 2 * lx)
            .map(|h| h.matrix().clone())
            .collect();
        let d = sys.conjugate(x, &c);
        let direct: BTreeSet<Matrix> = big
            .members()
            .iter()
            .filter(|g| sys.length(g) <= r - 2 * lx && sys.centralizes(g, &d))
            .map(|g| g.matrix().clone())
            .collect();
        prop_assert_eq!(expected, direct);
    }
}

#[test]
fn ball_sweeps_at_default_radius() {
    for sys in infinite_suite() {
        let r = default_radius(sys.rank());
        let c = sys.standard_coxeter_element();
        let rep = verify_ball(sys, &c, r, 1).unwrap();
        assert!(rep.is_consistent(), "rank {}", sys.rank());
        for g in &rep.centralizing {
            let k = g.power.unwrap();
            assert_eq!(sys.power(&c, k), sys.element(&g.word).unwrap());
        }
    }
}

#[test]
fn affine_a1_centralizer() {
    let sys = catalog::affine_a1();
    let rep = verify_ball(&sys, &sys.standard_coxeter_element(), 10, 1).unwrap();
    let powers: BTreeSet<i64> = rep.centralizing.iter().map(|g| g.power.unwrap()).collect();
    assert_eq!(powers, (-5..=5).collect());
}

#[test]
fn beta_traces_are_constant() {
    for sys in infinite_suite() {
        let c = sys.standard_coxeter_element();
        let rep = verify_ball(sys, &c, default_radius(sys.rank()), 1).unwrap();
        for g in &rep.centralizing {
            let ge = sys.element(&g.word).unwrap();
            let trace = beta_trace(sys, &ge, &c, 10).unwrap();
            assert!(trace.reflection_identity);
            let k = trace.constant_power().unwrap();
            assert_eq!(Some(k), g.power);
            assert!(trace.entries.iter().enumerate().all(|(i, e)| *e == Some((k, i))));
            assert!(verify::is_power(sys, &ge, &c, k));
        }
    }
    let sys = catalog::affine_a1();
    let c = sys.standard_coxeter_element();
    let trace = beta_trace(&sys, &sys.power(&c, 2), &c, 10).unwrap();
    assert_eq!(trace.entries, vec![Some((2, 0)), Some((2, 1))]);
    let s1 = sys.generator(0).unwrap();
    assert!(beta_trace(&sys, &s1, &c, 10).is_err());
}

#[test]
fn trace_outside_window_is_reported() {
    let sys = catalog::affine_a2();
    let c = sys.standard_coxeter_element();
    let trace = beta_trace(&sys, &sys.power(&c, 6), &c, 4).unwrap();
    assert!(!trace.is_complete());
    assert_eq!(trace.constant_power(), None);
}

#[test]
fn straightness() {
    for sys in infinite_suite() {
        let rep = verify_speyer(sys, &sys.standard_coxeter_element(), 10).unwrap();
        assert!(rep.straight);
        let n = sys.rank();
        assert_eq!(rep.lengths, (1..=10).map(|m| m * n).collect::<Vec<_>>());
        assert_eq!(rep.inversion_counts, rep.lengths);
    }
    assert!(verify_speyer(&catalog::a(3), &catalog::a(3).standard_coxeter_element(), 3).is_err());
}

#[test]
fn outward_counts() {
    for sys in infinite_suite() {
        let c = sys.standard_coxeter_element();
        let reps = verify_outward(sys, &c, 10, 10).unwrap();
        assert_eq!(reps.len(), sys.rank());
        assert_eq!(reps, sys.beta_sequence(&c));
    }
}

#[test]
fn example_regression() {
    let rep = verify::verify_example_d4tilde().unwrap();
    assert!(rep.passed());
    assert_eq!(rep.clauses.iter().map(|c| c.label).collect::<String>(), "abcde");
}

#[test]
fn reducible_and_non_coxeter_inputs_are_rejected() {
    let sys = catalog::affine_a2();
    let not_c = sys.element(&Word::from_one_based(&[1, 2])).unwrap();
    assert!(verify_ball(&sys, &not_c, 4, 1).is_err());
    assert!(verify_outward(&catalog::a1_a1(), &catalog::a1_a1().standard_coxeter_element(), 5, 5).is_err());
}
