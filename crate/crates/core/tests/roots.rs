use std::collections::BTreeSet;
use std::sync::OnceLock;

use coxkit_core::{catalog, CoxeterSystem, Root, Word};
use proptest::prelude::*;

/// All roots, as the orbit of the simple roots under the generators.
fn root_orbit(sys: &CoxeterSystem) -> BTreeSet<Root> {
    let gens: Vec<_> = (0..sys.rank()).map(|s| sys.generator(s).unwrap()).collect();
    let mut seen: BTreeSet<Root> = (0..sys.rank()).map(|s| sys.simple_root(s)).collect();
    let mut todo: Vec<Root> = seen.iter().cloned().collect();
    while let Some(r) = todo.pop() {
        for g in &gens {
            let next = sys.act(g, &r);
            if seen.insert(next.clone()) {
                todo.push(next);
            }
        }
    }
    seen
}

fn finite_systems() -> Vec<(CoxeterSystem, usize)> {
    vec![
        (catalog::a(3), 6),
        (catalog::b(3), 9),
        (catalog::h3(), 15),
        (catalog::d4(), 12),
        (catalog::f4(), 24),
        (catalog::i2(5), 5),
    ]
}

fn cached(slot: &'static OnceLock<Vec<CoxeterSystem>>, make: fn() -> Vec<CoxeterSystem>) -> &'static [CoxeterSystem] {
    slot.get_or_init(make)
}

fn word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..rank, 0..=max_len).prop_map(move |v| Word(v.into_iter().map(|s| s % rank).collect()))
}

#[test]
fn root_counts() {
    for (sys, positive) in finite_systems() {
        let all = root_orbit(&sys);
        assert_eq!(all.len(), 2 * positive);
        assert_eq!(all.iter().filter(|r| r.is_positive()).count(), positive);
        assert!(all.iter().all(|r| sys.bilinear(r.coords(), r.coords()).is_one()));
        assert!(all.iter().all(|r| all.contains(&r.neg())));
    }
}

#[test]
fn crystallographic_roots_are_rational() {
    for sys in [catalog::a(3), catalog::d4()] {
        assert!(root_orbit(&sys).iter().all(Root::is_rational));
    }
    assert!(!root_orbit(&catalog::h3()).iter().all(Root::is_rational));
}

#[test]
fn inversion_sets_match_brute_force() {
    for (sys, _) in finite_systems() {
        let positive: Vec<Root> = root_orbit(&sys).into_iter().filter(Root::is_positive).collect();
        for w in sys.ball(5).unwrap().members() {
            let fast: BTreeSet<Root> = sys.inversion_set(w).unwrap().into_iter().collect();
            let slow: BTreeSet<Root> = positive.iter().filter(|a| !sys.act(w, a).is_positive()).cloned().collect();
            assert_eq!(fast, slow);
            assert_eq!(fast.len(), sys.length(w));
        }
    }
}

proptest! {
    #[test]
    fn action_preserves_form(idx in 0usize..4, w in word(5, 12), a in 0usize..5, b in 0usize..5) {
        static S: OnceLock<Vec<CoxeterSystem>> = OnceLock::new();
        let sys = &cached(&S, || vec![catalog::affine_a2(), catalog::affine_g2(), catalog::triangle(3, 3, 4), catalog::affine_d4()])[idx];
        let n = sys.rank();
        let w = sys.element(&Word(w.letters().iter().map(|&s| s % n).collect())).unwrap();
        let (x, y) = (sys.simple_root(a % n), sys.simple_root(b % n));
        let (wx, wy) = (sys.act(&w, &x), sys.act(&w, &y));
        prop_assert_eq!(sys.bilinear(wx.coords(), wy.coords()), sys.bilinear(x.coords(), y.coords()));
        // every root is positive or negative
        prop_assert!(wx.is_positive() || wx.neg().is_positive());
    }

    #[test]
    fn inversions_and_betas(idx in 0usize..4, w in word(5, 12)) {
        static S: OnceLock<Vec<CoxeterSystem>> = OnceLock::new();
        let sys = &cached(&S, || vec![catalog::affine_a1(), catalog::affine_c2(), catalog::triangle(3, 3, 4), catalog::affine_d4()])[idx];
        let n = sys.rank();
        let w = sys.element(&Word(w.letters().iter().map(|&s| s % n).collect())).unwrap();
        let inv = sys.inversion_set(&w).unwrap();
        prop_assert_eq!(inv.len(), sys.length(&w));
        for a in &inv {
            prop_assert!(a.is_positive());
            prop_assert!(!sys.act(&w, a).is_positive());
        }
        let betas: BTreeSet<Root> = sys.beta_sequence(&w).into_iter().collect();
        let winv: BTreeSet<Root> = sys.inversion_set(&sys.inverse(&w).unwrap()).unwrap().into_iter().collect();
        prop_assert_eq!(betas, winv);
    }

    #[test]
    fn reflections_of_roots(idx in 0usize..3, w in word(5, 10), s in 0usize..5) {
        static S: OnceLock<Vec<CoxeterSystem>> = OnceLock::new();
        let sys = &cached(&S, || vec![catalog::affine_a2(), catalog::triangle(3, 3, 4), catalog::h3()])[idx];
        let n = sys.rank();
        let w = sys.element(&Word(w.letters().iter().map(|&s| s % n).collect())).unwrap();
        let alpha = sys.act(&w, &sys.simple_root(s % n)).positive();
        let t = sys.reflection_of_root(&alpha).unwrap();
        // independent: t = w s w^-1
        let conj = sys.conjugate(&w, &sys.generator(s % n).unwrap());
        prop_assert_eq!(&t, &conj);
        prop_assert!(sys.multiply(&t, &t).unwrap().is_identity());
        prop_assert_eq!(sys.act(&t, &alpha), alpha.neg());
        prop_assert_eq!(sys.reflection_root(&t), Some(alpha));
        prop_assert_eq!(sys.length(&t) % 2, 1);
    }
}

#[test]
fn non_reflections_have_no_root() {
    let sys = catalog::affine_a2();
    for w in sys.ball(4).unwrap().members() {
        if sys.length(w) % 2 == 0 {
            assert_eq!(sys.reflection_root(w), None);
        }
    }
}
