//! Reflections, reflection length, reduced reflection factorizations and
//! the Hurwitz action.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::ToString;
use alloc::vec::Vec;
use core::cell::OnceCell;
use core::fmt;

use thiserror::Error;

use crate::diagram::{Classification, CoxeterSystem, GenSet};
use crate::field::FieldElement;
use crate::group::{Ball, ElementSet, GroupElement, GroupError, DEFAULT_BALL_CAP};
use crate::matrix::Matrix;
use crate::roots::{Root, RootError};

/// Largest reflection length for which [`FiniteScope::reduced_factorizations`]
/// enumerates.
pub const MAX_FACTORIZATION_LENGTH: usize = 6;

/// Default cap for orbits and generated subgroups.
pub const DEFAULT_ORBIT_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReflError {
    #[error("scope {0} does not generate a finite group")]
    InfiniteScope(GenSet),
    #[error("reflection length {0} exceeds the enumeration limit of {MAX_FACTORIZATION_LENGTH}")]
    TooLong(usize),
    #[error("position {index} out of range for a factorization of length {len}")]
    PositionOutOfRange { index: usize, len: usize },
    #[error("element is not in the scope")]
    NotInScope,
    #[error("element is not a reflection")]
    NotAReflection,
    #[error("cap of {0} exceeded")]
    CapExceeded(usize),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Root(#[from] RootError),
}

/// A reflection together with its positive root `α` and the vector `Bα`,
/// so that `t v = v - 2 (Bα · v) α`.
#[derive(Clone, Debug)]
pub struct Reflection {
    element: GroupElement,
    root: Root,
    b_root: Vec<FieldElement>,
}

impl PartialEq for Reflection {
    fn eq(&self, other: &Reflection) -> bool {
        self.element == other.element
    }
}

impl Eq for Reflection {}

impl Reflection {
    /// The reflection of a root, with a reduced witness word.
    pub fn from_root(sys: &CoxeterSystem, root: &Root) -> Result<Reflection, RootError> {
        let root = root.positive();
        let element = sys.reflection_of_root(&root)?;
        let b_root = sys.gram().mul_vec(sys.field(), root.coords());
        Ok(Reflection { element, root, b_root })
    }

    /// Recognizes `t` as a reflection.
    pub fn from_element(sys: &CoxeterSystem, t: &GroupElement) -> Result<Reflection, ReflError> {
        let root = sys.reflection_root(t).ok_or(ReflError::NotAReflection)?;
        Ok(Reflection::from_root(sys, &root)?)
    }

    pub fn element(&self) -> &GroupElement {
        &self.element
    }

    pub fn root(&self) -> &Root {
        &self.root
    }

    /// `t · m` as a rank-one update.
    pub fn left_apply(&self, sys: &CoxeterSystem, m: &Matrix) -> Matrix {
        let f = sys.field();
        let n = m.dim();
        let two = f.from_i64(2);
        // r_j = 2 (Bα)ᵀ m e_j
        let r: Vec<FieldElement> = (0..n)
            .map(|j| {
                let mut acc = f.zero();
                for k in 0..n {
                    let (a, b) = (&self.b_root[k], m.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = f.add(&acc, &f.mul(a, b));
                    }
                }
                f.mul(&two, &acc)
            })
            .collect();
        let alpha = self.root.coords();
        Matrix::from_fn(n, |i, j| {
            if alpha[i].is_zero() || r[j].is_zero() {
                m.get(i, j).clone()
            } else {
                f.sub(m.get(i, j), &f.mul(&alpha[i], &r[j]))
            }
        })
    }

    /// `a t a` for another reflection `a`.
    pub fn conjugated_by(&self, sys: &CoxeterSystem, a: &Reflection) -> Reflection {
        let m = a.left_apply(sys, &self.element.matrix().mul(sys.field(), a.element.matrix()));
        let root = sys.act(&a.element, &self.root).positive();
        let word = a.element.word().concat(self.element.word()).concat(a.element.word());
        let element = sys.reduced(&sys.wrap(m, word));
        let b_root = sys.gram().mul_vec(sys.field(), root.coords());
        Reflection { element, root, b_root }
    }
}

impl fmt::Display for Reflection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.element.word())
    }
}

/// An ordered tuple of reflections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReflectionFactorization {
    factors: Vec<Reflection>,
}

impl ReflectionFactorization {
    pub fn new(factors: Vec<Reflection>) -> ReflectionFactorization {
        ReflectionFactorization { factors }
    }

    pub fn factors(&self) -> &[Reflection] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn product(&self, sys: &CoxeterSystem) -> GroupElement {
        self.factors.iter().fold(sys.identity(), |acc, t| sys.mul(&acc, &t.element))
    }

    pub fn elements(&self) -> Vec<GroupElement> {
        self.factors.iter().map(|t| t.element.clone()).collect()
    }

    fn key(&self) -> Vec<Matrix> {
        self.factors.iter().map(|t| t.element.matrix().clone()).collect()
    }
}

impl fmt::Display for ReflectionFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("e");
        }
        for (i, t) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// Hurwitz move at positions `i, i+1` (0-based). Forward sends
/// `(a, b)` to `(aba, a)`; backward sends `(a, b)` to `(b, bab)`.
pub fn hurwitz_move(
    sys: &CoxeterSystem,
    f: &ReflectionFactorization,
    i: usize,
    dir: Direction,
) -> Result<ReflectionFactorization, ReflError> {
    if i + 1 >= f.len() {
        return Err(ReflError::PositionOutOfRange { index: i, len: f.len() });
    }
    let (a, b) = (&f.factors[i], &f.factors[i + 1]);
    let (x, y) = match dir {
        Direction::Forward => (b.conjugated_by(sys, a), a.clone()),
        Direction::Backward => (b.clone(), a.conjugated_by(sys, b)),
    };
    let mut factors = f.factors.clone();
    factors[i] = x;
    factors[i + 1] = y;
    Ok(ReflectionFactorization { factors })
}

/// Closure of `f` under all Hurwitz moves, in discovery order.
pub fn hurwitz_orbit(
    sys: &CoxeterSystem,
    f: &ReflectionFactorization,
    cap: usize,
) -> Result<Vec<ReflectionFactorization>, ReflError> {
    let mut seen = BTreeSet::new();
    seen.insert(f.key());
    let mut orbit = alloc::vec![f.clone()];
    let mut head = 0;
    while head < orbit.len() {
        let cur = orbit[head].clone();
        head += 1;
        for i in 0..cur.len().saturating_sub(1) {
            for dir in [Direction::Forward, Direction::Backward] {
                let next = hurwitz_move(sys, &cur, i, dir)?;
                if seen.insert(next.key()) {
                    if orbit.len() >= cap {
                        return Err(ReflError::CapExceeded(cap));
                    }
                    orbit.push(next);
                }
            }
        }
    }
    Ok(orbit)
}

/// The subgroup generated by the factors.
pub fn generated_group(
    sys: &CoxeterSystem,
    f: &ReflectionFactorization,
    cap: usize,
) -> Result<ElementSet, ReflError> {
    Ok(sys.generated_group(&f.elements(), cap)?)
}

/// Reflections of length at most `radius`, in ball order.
pub fn reflections_in_ball(sys: &CoxeterSystem, radius: usize) -> Result<Vec<Reflection>, ReflError> {
    let ball = sys.ball(radius)?;
    let mut out = Vec::new();
    for (i, w) in ball.members().iter().enumerate() {
        if ball.length_of(i) % 2 == 1 && sys.mul(w, w).is_identity() {
            if let Some(root) = sys.reflection_root(w) {
                out.push(Reflection::from_root(sys, &root)?);
            }
        }
    }
    Ok(out)
}

/// Outcome of the Coxeter-element test on a finite scope: both facts are
/// reported and `holds` is their conjunction.
#[derive(Clone, Debug)]
pub struct ParabolicCoxeterCheck {
    pub reflection_length: usize,
    pub length: usize,
    /// A subset `J` and an ordering of it whose Coxeter element is
    /// conjugate to the input within the scope.
    pub conjugate_to: Option<(GenSet, Vec<usize>)>,
    pub holds: bool,
}

/// A standard parabolic subgroup `W_I` of finite type, with its elements,
/// reflections and reflection lengths computed on demand.
pub struct FiniteScope<'a> {
    sys: &'a CoxeterSystem,
    gens: GenSet,
    cap: usize,
    elements: OnceCell<Ball>,
    reflections: OnceCell<(Vec<Reflection>, BTreeMap<Matrix, usize>)>,
    lengths: OnceCell<BTreeMap<Matrix, usize>>,
}

impl<'a> FiniteScope<'a> {
    pub fn new(sys: &'a CoxeterSystem, gens: GenSet) -> Result<FiniteScope<'a>, ReflError> {
        for s in gens.iter() {
            if s >= sys.rank() {
                return Err(GroupError::GeneratorOutOfRange { gen: s, rank: sys.rank() }.into());
            }
        }
        let sub = sys.subsystem(gens).map_err(|_| ReflError::InfiniteScope(gens))?;
        if sub.classification() != Classification::Finite {
            return Err(ReflError::InfiniteScope(gens));
        }
        Ok(FiniteScope {
            sys,
            gens,
            cap: DEFAULT_BALL_CAP,
            elements: OnceCell::new(),
            reflections: OnceCell::new(),
            lengths: OnceCell::new(),
        })
    }

    /// The whole group; fails unless it is finite.
    pub fn full(sys: &'a CoxeterSystem) -> Result<FiniteScope<'a>, ReflError> {
        FiniteScope::new(sys, sys.all_generators())
    }

    pub fn system(&self) -> &'a CoxeterSystem {
        self.sys
    }

    pub fn gens(&self) -> GenSet {
        self.gens
    }

    pub fn elements(&self) -> Result<&Ball, ReflError> {
        if let Some(b) = self.elements.get() {
            return Ok(b);
        }
        let b = self.sys.enumerate(self.gens, self.cap)?;
        Ok(self.elements.get_or_init(|| b))
    }

    pub fn order(&self) -> Result<usize, ReflError> {
        Ok(self.elements()?.len())
    }

    pub fn contains(&self, w: &GroupElement) -> Result<bool, ReflError> {
        Ok(self.elements()?.contains(w))
    }

    /// One reflection per positive root of the scope, sorted by the printed
    /// form of the root.
    pub fn reflections(&self) -> Result<&[Reflection], ReflError> {
        if let Some((r, _)) = self.reflections.get() {
            return Ok(r);
        }
        let ball = self.elements()?;
        let mut roots = BTreeSet::new();
        for w in ball.members() {
            for s in self.gens.iter() {
                let r = self.sys.act(w, &self.sys.simple_root(s));
                if r.is_positive() {
                    roots.insert(r);
                }
            }
        }
        let mut keyed: Vec<_> = roots.into_iter().map(|r| (r.to_string(), r)).collect();
        keyed.sort();
        let mut list = Vec::with_capacity(keyed.len());
        let mut index = BTreeMap::new();
        for (_, r) in keyed {
            let t = Reflection::from_root(self.sys, &r)?;
            index.insert(t.element.matrix().clone(), list.len());
            list.push(t);
        }
        Ok(&self.reflections.get_or_init(|| (list, index)).0)
    }

    pub fn reflection_for(&self, w: &GroupElement) -> Result<Option<&Reflection>, ReflError> {
        self.reflections()?;
        let (list, index) = self.reflections.get().expect("initialized above");
        Ok(index.get(w.matrix()).map(|&i| &list[i]))
    }

    fn length_table(&self) -> Result<&BTreeMap<Matrix, usize>, ReflError> {
        if let Some(t) = self.lengths.get() {
            return Ok(t);
        }
        let refl = self.reflections()?;
        let id = self.sys.identity().matrix().clone();
        let mut table = BTreeMap::new();
        table.insert(id.clone(), 0usize);
        let mut frontier = alloc::vec![id];
        let mut k = 0;
        while !frontier.is_empty() {
            k += 1;
            let mut next = Vec::new();
            for m in &frontier {
                for t in refl {
                    let p = t.left_apply(self.sys, m);
                    if !table.contains_key(&p) {
                        table.insert(p.clone(), k);
                        next.push(p);
                    }
                }
            }
            frontier = next;
        }
        Ok(self.lengths.get_or_init(|| table))
    }

    /// `ℓ_T(w)` with respect to the reflections of the scope.
    pub fn reflection_length(&self, w: &GroupElement) -> Result<usize, ReflError> {
        self.length_table()?.get(w.matrix()).copied().ok_or(ReflError::NotInScope)
    }

    /// `Red_T(w)`, in lexicographic order of the reflection list.
    pub fn reduced_factorizations(&self, w: &GroupElement) -> Result<Vec<ReflectionFactorization>, ReflError> {
        let k = self.reflection_length(w)?;
        if k > MAX_FACTORIZATION_LENGTH {
            return Err(ReflError::TooLong(k));
        }
        let table = self.length_table()?;
        let refl = self.reflections()?;
        let mut out = Vec::new();
        let mut stack = Vec::with_capacity(k);
        self.factor_dfs(w.matrix(), k, refl, table, &mut stack, &mut out);
        Ok(out)
    }

    fn factor_dfs(
        &self,
        target: &Matrix,
        remaining: usize,
        refl: &[Reflection],
        table: &BTreeMap<Matrix, usize>,
        stack: &mut Vec<usize>,
        out: &mut Vec<ReflectionFactorization>,
    ) {
        if remaining == 0 {
            let factors = stack.iter().map(|&i| refl[i].clone()).collect();
            out.push(ReflectionFactorization { factors });
            return;
        }
        for (i, t) in refl.iter().enumerate() {
            let rest = t.left_apply(self.sys, target);
            if table.get(&rest) == Some(&(remaining - 1)) {
                stack.push(i);
                self.factor_dfs(&rest, remaining - 1, refl, table, stack, out);
                stack.pop();
            }
        }
    }

    /// `{x w x⁻¹ : x ∈ W_I}`.
    pub fn conjugacy_class(&self, w: &GroupElement) -> Result<ElementSet, ReflError> {
        let mut class = ElementSet::new();
        for x in self.elements()?.members() {
            class.insert(self.sys.conjugate(x, w));
        }
        Ok(class)
    }

    /// Whether `ℓ_T(w) = ℓ(w)` and `w` is conjugate within the scope to a
    /// standard Coxeter element of a standard parabolic subgroup of it.
    pub fn parabolic_coxeter_check(&self, w: &GroupElement) -> Result<ParabolicCoxeterCheck, ReflError> {
        if !self.contains(w)? {
            return Err(ReflError::NotInScope);
        }
        let lt = self.reflection_length(w)?;
        let l = self.sys.length(w);
        let class = self.conjugacy_class(w)?;
        let mut found = None;
        'outer: for j in subsets_of_size(self.gens, lt) {
            let mut perm = j.to_vec();
            loop {
                let c = self.sys.element(&crate::group::Word(perm.clone()))?;
                if class.contains(&c) {
                    found = Some((j, perm));
                    break 'outer;
                }
                if !next_permutation(&mut perm) {
                    break;
                }
            }
        }
        Ok(ParabolicCoxeterCheck { reflection_length: lt, length: l, holds: lt == l && found.is_some(), conjugate_to: found })
    }
}

/// Subsets of `set` with `k` elements, in increasing bitmask order.
pub fn subsets_of_size(set: GenSet, k: usize) -> Vec<GenSet> {
    let elems = set.to_vec();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << elems.len()) {
        if mask.count_ones() as usize == k {
            out.push(GenSet::from_indices(
                elems.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &s)| s),
            ));
        }
    }
    out.sort();
    out
}

/// Rearranges into the next permutation in lexicographic order; returns
/// false after the last one.
pub fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::group::Word;
    use alloc::vec;

    fn w(letters: &[usize]) -> Word {
        Word::from_one_based(letters)
    }

    #[test]
    fn reflection_counts() {
        let a2 = catalog::a(2);
        assert_eq!(FiniteScope::full(&a2).unwrap().reflections().unwrap().len(), 3);
        let d = catalog::affine_d4();
        let scope = FiniteScope::new(&d, GenSet::from_indices([1, 2, 3, 4])).unwrap();
        assert_eq!(scope.reflections().unwrap().len(), 12);
        assert!(matches!(FiniteScope::full(&d), Err(ReflError::InfiniteScope(_))));
        assert_eq!(reflections_in_ball(&catalog::affine_a1(), 5).unwrap().len(), 6);
    }

    #[test]
    fn reflection_lengths() {
        let a2 = catalog::a(2);
        let scope = FiniteScope::full(&a2).unwrap();
        assert_eq!(scope.reflection_length(&a2.identity()).unwrap(), 0);
        assert_eq!(scope.reflection_length(&a2.standard_coxeter_element()).unwrap(), 2);
        let d = catalog::affine_d4();
        let scope = FiniteScope::new(&d, GenSet::from_indices([1, 2, 3, 4])).unwrap();
        let v = d.element(&w(&[4, 3, 4, 5, 3, 2])).unwrap();
        assert_eq!(scope.order().unwrap(), 192);
        assert_eq!(scope.reflection_length(&v).unwrap(), 4);
    }

    #[test]
    fn factorization_counts() {
        let a2 = catalog::a(2);
        let scope = FiniteScope::full(&a2).unwrap();
        let c = a2.standard_coxeter_element();
        let red = scope.reduced_factorizations(&c).unwrap();
        assert_eq!(red.len(), 3);
        for f in &red {
            assert_eq!(f.product(&a2), c);
        }
        let t = a2.generator(0).unwrap();
        assert_eq!(scope.reduced_factorizations(&t).unwrap().len(), 1);
        let a3 = catalog::a(3);
        let scope = FiniteScope::full(&a3).unwrap();
        assert_eq!(scope.reduced_factorizations(&a3.standard_coxeter_element()).unwrap().len(), 16);
    }

    #[test]
    fn hurwitz_moves() {
        let a2 = catalog::a(2);
        let s1 = Reflection::from_element(&a2, &a2.generator(0).unwrap()).unwrap();
        let s2 = Reflection::from_element(&a2, &a2.generator(1).unwrap()).unwrap();
        let f = ReflectionFactorization::new(vec![s1.clone(), s2]);
        let g = hurwitz_move(&a2, &f, 0, Direction::Forward).unwrap();
        assert_eq!(g.factors()[0].element(), &a2.element(&w(&[1, 2, 1])).unwrap());
        assert_eq!(g.factors()[1], s1);
        assert_eq!(hurwitz_move(&a2, &g, 0, Direction::Backward).unwrap(), f);
        assert_eq!(g.product(&a2), f.product(&a2));
        assert!(hurwitz_move(&a2, &f, 1, Direction::Forward).is_err());
        assert_eq!(hurwitz_orbit(&a2, &f, 100).unwrap().len(), 3);
        assert_eq!(generated_group(&a2, &f, 100).unwrap().len(), 6);
        let single = ReflectionFactorization::new(vec![s1]);
        assert_eq!(hurwitz_orbit(&a2, &single, 10).unwrap().len(), 1);
        assert_eq!(generated_group(&a2, &single, 10).unwrap().len(), 2);
        assert_eq!(alloc::format!("{g}"), "1 2 1; 1");
    }

    #[test]
    fn coxeter_check() {
        let a2 = catalog::a(2);
        let scope = FiniteScope::full(&a2).unwrap();
        assert!(scope.parabolic_coxeter_check(&a2.standard_coxeter_element()).unwrap().holds);
        assert!(scope.parabolic_coxeter_check(&a2.identity()).unwrap().holds);
        let d = catalog::affine_d4();
        let scope = FiniteScope::new(&d, GenSet::from_indices([1, 2, 3, 4])).unwrap();
        let v = d.element(&w(&[4, 3, 4, 5, 3, 2])).unwrap();
        let check = scope.parabolic_coxeter_check(&v).unwrap();
        assert!(!check.holds);
        assert_eq!(check.conjugate_to, None);
    }

    #[test]
    fn permutations_and_subsets() {
        let mut p = vec![0, 1, 2];
        let mut n = 1;
        while next_permutation(&mut p) {
            n += 1;
        }
        assert_eq!(n, 6);
        assert_eq!(subsets_of_size(GenSet::full(4), 2).len(), 6);
        assert_eq!(subsets_of_size(GenSet::full(4), 0), vec![GenSet::EMPTY]);
    }
}
