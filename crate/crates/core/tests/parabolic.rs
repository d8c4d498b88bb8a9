use std::collections::BTreeSet;

use coxkit_core::parabolic::parabolic_closure_finite;
use coxkit_core::{catalog, CoxeterSystem, Essentiality, FiniteScope, GenSet, GroupElement, Matrix, Word};

fn all_subsets(n: usize) -> Vec<GenSet> {
    (0..1u64 << n).map(GenSet).collect()
}

/// The elements of `W_I` as a set of matrices, by closure.
fn standard_parabolic(sys: &CoxeterSystem, i: GenSet) -> BTreeSet<Matrix> {
    sys.ball_in(i, None, 100_000).unwrap().members().iter().map(|w| w.matrix().clone()).collect()
}

/// `x W x⁻¹` for the subgroup with the given members.
fn conjugate_set(sys: &CoxeterSystem, x: &GroupElement, members: &[GroupElement]) -> BTreeSet<Matrix> {
    let xinv = sys.inverse(x).unwrap();
    members
        .iter()
        .map(|g| sys.multiply(&sys.multiply(x, g).unwrap(), &xinv).unwrap().matrix().clone())
        .collect()
}

#[test]
fn edges_map_simple_roots_to_simple_roots() {
    for sys in [catalog::a(4), catalog::b(3), catalog::affine_c2(), catalog::affine_d4()] {
        let g = sys.conjugacy_graph().unwrap();
        for e in g.edges() {
            let nuinv = sys.inverse(&e.witness).unwrap();
            let image: BTreeSet<_> = e.from.iter().map(|s| sys.act(&nuinv, &sys.simple_root(s))).collect();
            let target: BTreeSet<_> = e.to.iter().map(|s| sys.simple_root(s)).collect();
            assert_eq!(image, target, "{e}");
            assert_eq!(e.from.len(), e.to.len());
        }
    }
}

#[test]
fn graph_conjugacy_matches_brute_force() {
    for sys in [catalog::a(3), catalog::b(3), catalog::a1_a1(), catalog::i2(6)] {
        let g = sys.conjugacy_graph().unwrap();
        let all = sys.enumerate(sys.all_generators(), 100_000).unwrap();
        let subsets = all_subsets(sys.rank());
        let groups: Vec<_> = subsets.iter().map(|&i| standard_parabolic(&sys, i)).collect();
        for (a, &i) in subsets.iter().enumerate() {
            let members: Vec<GroupElement> = all.members().iter().filter(|w| groups[a].contains(w.matrix())).cloned().collect();
            for (b, &j) in subsets.iter().enumerate() {
                let brute = all.members().iter().any(|x| conjugate_set(&sys, x, &members) == groups[b]);
                let fast = g.standard_conjugate(&sys, j, i).unwrap();
                assert_eq!(fast.is_some(), brute, "{i} vs {j}");
                if let Some(x) = fast {
                    assert_eq!(conjugate_set(&sys, &x, &members), groups[b]);
                }
            }
        }
    }
}

#[test]
fn maximal_subsets_are_isolated() {
    for sys in [catalog::affine_d4(), catalog::triangle(3, 3, 4), catalog::affine_a2(), catalog::affine_g2()] {
        let g = sys.conjugacy_graph().unwrap();
        let full = sys.all_generators();
        let maximal: Vec<GenSet> = (0..sys.rank()).map(|s| full.without(s)).collect();
        for &i in &maximal {
            assert!(g.is_isolated(i), "{i}");
            for &j in &maximal {
                assert_eq!(g.standard_conjugate(&sys, i, j).unwrap().is_some(), i == j);
            }
        }
        assert!(g.is_isolated(full));
    }
}

#[test]
fn normalizers_of_maximal_subsets_in_a_ball() {
    for sys in [catalog::affine_d4(), catalog::triangle(3, 3, 4)] {
        let ball = sys.ball(4).unwrap();
        let full = sys.all_generators();
        for s in 0..sys.rank() {
            let i = full.without(s);
            let g = sys.conjugacy_graph().unwrap();
            assert!(g.normalizer_generators(&sys, i).unwrap().lambdas.is_empty());
            for w in ball.members() {
                assert_eq!(sys.normalizes(w, i), sys.in_standard_parabolic(w, i), "{} and {i}", w.word());
            }
        }
    }
}

#[test]
fn normalizer_generators_generate_the_normalizer() {
    for (sys, i) in [(catalog::a(3), GenSet::from_indices([0])), (catalog::b(3), GenSet::from_indices([1])), (catalog::a(4), GenSet::from_indices([0, 1]))] {
        let g = sys.conjugacy_graph().unwrap();
        let gens = g.normalizer_generators(&sys, i).unwrap().all();
        let generated = sys.generated_group(&gens, 100_000).unwrap();
        let all = sys.enumerate(sys.all_generators(), 100_000).unwrap();
        let brute: BTreeSet<Matrix> = all.members().iter().filter(|w| sys.normalizes(w, i)).map(|w| w.matrix().clone()).collect();
        let fast: BTreeSet<Matrix> = generated.members().iter().map(|w| w.matrix().clone()).collect();
        assert_eq!(fast, brute);
    }
}

#[test]
fn closure_is_the_smallest_parabolic_containing_the_element() {
    for sys in [catalog::a(3), catalog::b(3)] {
        let scope = FiniteScope::full(&sys).unwrap();
        let all = scope.elements().unwrap().members().to_vec();
        let mut parabolics: BTreeSet<BTreeSet<Matrix>> = BTreeSet::new();
        for i in all_subsets(sys.rank()) {
            let group = standard_parabolic(&sys, i);
            let members: Vec<GroupElement> = all.iter().filter(|w| group.contains(w.matrix())).cloned().collect();
            for x in &all {
                parabolics.insert(conjugate_set(&sys, x, &members));
            }
        }
        for w in &all {
            let brute = parabolics.iter().filter(|p| p.contains(w.matrix())).min_by_key(|p| p.len()).unwrap();
            let pc = parabolic_closure_finite(&scope, std::slice::from_ref(w)).unwrap();
            let fast: BTreeSet<Matrix> = pc.group.members().iter().map(|g| g.matrix().clone()).collect();
            assert_eq!(&fast, brute, "{}", w.word());
            assert_eq!(pc.standard.len(), pc.rank);
            assert_eq!(standard_parabolic(&sys, pc.standard).len(), fast.len());
        }
    }
}

#[test]
fn essentiality() {
    let sys = catalog::affine_d4();
    let x = sys.element(&Word::from_one_based(&[5, 4])).unwrap();
    assert!(matches!(sys.essentiality_refute(&x, 0).unwrap(), Essentiality::Refuted { .. }));
    let c = sys.standard_coxeter_element();
    assert!(matches!(sys.essentiality_refute(&c, 2).unwrap(), Essentiality::NoWitnessFound { .. }));
}
