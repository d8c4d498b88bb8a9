use std::collections::BTreeSet;

use coxkit_core::matrix;
use coxkit_core::refl::{generated_group, hurwitz_move, hurwitz_orbit, reflections_in_ball, Direction};
use coxkit_core::{catalog, CoxeterSystem, FiniteScope, GenSet, GroupElement, Reflection, ReflectionFactorization, Word};

/// `n - dim Fix(w)`, the rank of `w - 1`.
fn codim_fixed(sys: &CoxeterSystem, w: &GroupElement) -> usize {
    let f = sys.field();
    let cols: Vec<_> = (0..sys.rank())
        .map(|j| {
            let mut c = w.matrix().column(j);
            c[j] = f.sub(&c[j], &f.one());
            c
        })
        .collect();
    matrix::rank(f, &cols)
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

fn matrices(f: &ReflectionFactorization) -> Vec<coxkit_core::Matrix> {
    f.elements().iter().map(|e| e.matrix().clone()).collect()
}

#[test]
fn reflection_counts() {
    for (sys, n) in [(catalog::a(3), 6), (catalog::b(3), 9), (catalog::h3(), 15), (catalog::d4(), 12)] {
        let scope = FiniteScope::full(&sys).unwrap();
        assert_eq!(scope.reflections().unwrap().len(), n);
    }
}

#[test]
fn reflection_length_is_codimension_of_fixed_space() {
    for sys in [catalog::a(3), catalog::b(3), catalog::i2(5), catalog::a1_a1()] {
        let scope = FiniteScope::full(&sys).unwrap();
        for w in scope.elements().unwrap().members() {
            assert_eq!(scope.reflection_length(w).unwrap(), codim_fixed(&sys, w), "{}", w.word());
        }
    }
}

#[test]
fn coxeter_factorization_counts_and_transitivity() {
    // |Red_T(c)| = h^n n! / |W|
    for (sys, h) in [(catalog::a(2), 3usize), (catalog::a(3), 4), (catalog::b(2), 4), (catalog::b(3), 6)] {
        let scope = FiniteScope::full(&sys).unwrap();
        let n = sys.rank();
        let order = scope.order().unwrap();
        let c = sys.standard_coxeter_element();
        let red = scope.reduced_factorizations(&c).unwrap();
        assert_eq!(red.len(), h.pow(n as u32) * factorial(n) / order);
        let all: BTreeSet<_> = red.iter().map(matrices).collect();
        assert_eq!(all.len(), red.len());
        for f in &red {
            assert_eq!(f.len(), n);
            assert_eq!(f.product(&sys), c);
            let orbit = hurwitz_orbit(&sys, f, 10_000).unwrap();
            let orbit: BTreeSet<_> = orbit.iter().map(matrices).collect();
            assert_eq!(orbit, all);
            assert_eq!(generated_group(&sys, f, 10_000).unwrap().len(), order);
        }
    }
}

#[test]
fn hurwitz_moves_preserve_product_and_invert() {
    let sys = catalog::b(3);
    let scope = FiniteScope::full(&sys).unwrap();
    let ts = scope.reflections().unwrap();
    for a in ts {
        for b in ts.iter().take(5) {
            for c in ts.iter().skip(4) {
                let f = ReflectionFactorization::new(vec![a.clone(), b.clone(), c.clone()]);
                for i in 0..2 {
                    let g = hurwitz_move(&sys, &f, i, Direction::Forward).unwrap();
                    assert_eq!(g.product(&sys), f.product(&sys));
                    let back = hurwitz_move(&sys, &g, i, Direction::Backward).unwrap();
                    assert_eq!(matrices(&back), matrices(&f));
                }
            }
        }
    }
    assert!(hurwitz_move(&sys, &ReflectionFactorization::new(vec![ts[0].clone()]), 0, Direction::Forward).is_err());
}

#[test]
fn parabolic_factorizations_stay_in_the_parabolic() {
    // affine D4, W' = <s2..s5>: a reflection t with t^-1 w a reflection must lie in W'
    let sys = catalog::affine_d4();
    let sub = GenSet::from_indices([1, 2, 3, 4]);
    let scope = FiniteScope::new(&sys, sub).unwrap();
    let ts = reflections_in_ball(&sys, 7).unwrap();
    let mut checked = 0;
    for w in scope.elements().unwrap().members().iter().filter(|w| sys.length(w) <= 4) {
        if scope.reflection_length(w).unwrap() != 2 {
            continue;
        }
        for t in &ts {
            let rest = sys.multiply(t.element(), w).unwrap();
            if sys.reflection_root(&rest).is_some() {
                assert!(scope.contains(t.element()).unwrap(), "{} splits {} outside W'", t, w.word());
                checked += 1;
            }
        }
    }
    assert!(checked > 0);
}

#[test]
fn coxeter_check_on_coxeter_elements() {
    let sys = catalog::a(3);
    let scope = FiniteScope::full(&sys).unwrap();
    let c = sys.coxeter_element(&[1, 0, 2]).unwrap();
    assert!(scope.parabolic_coxeter_check(&c).unwrap().holds);
    let s1 = sys.generator(0).unwrap();
    assert!(scope.parabolic_coxeter_check(&s1).unwrap().holds);
    // w0 of A3 has l_T = 2 and length 6: not a parabolic Coxeter element
    let w0 = sys.element(&Word::from_one_based(&[1, 2, 1, 3, 2, 1])).unwrap();
    let check = scope.parabolic_coxeter_check(&w0).unwrap();
    assert_eq!(check.reflection_length, 2);
    assert!(!check.holds);
}

#[test]
fn reflections_round_trip() {
    let sys = catalog::affine_g2();
    for t in reflections_in_ball(&sys, 7).unwrap() {
        let r = Reflection::from_element(&sys, t.element()).unwrap();
        assert_eq!(r.root(), t.root());
        assert_eq!(Reflection::from_root(&sys, t.root()).unwrap().element(), t.element());
        let m = t.left_apply(&sys, sys.generator(1).unwrap().matrix());
        assert_eq!(&m, sys.multiply(t.element(), &sys.generator(1).unwrap()).unwrap().matrix());
    }
}
