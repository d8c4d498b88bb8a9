//! Group elements in the natural (Tits) representation.
//!
//! An element is its matrix in the simple basis together with a witness
//! word. Equality is matrix equality; the word is kept only for display and
//! for computing inverses.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

use crate::diagram::{CoxeterSystem, GenSet, SystemId};
use crate::field::Sign;
use crate::matrix::Matrix;

/// Default cap on the number of elements a ball or closure may hold.
pub const DEFAULT_BALL_CAP: usize = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("generator {gen} out of range for rank {rank}")]
    GeneratorOutOfRange { gen: usize, rank: usize },
    #[error("operands belong to different Coxeter systems")]
    MixedSystems,
    #[error("not a permutation of 1..{0}")]
    NotAPermutation(usize),
    #[error("element cap of {0} exceeded")]
    CapExceeded(usize),
    #[error("cannot parse word: {0}")]
    BadWord(alloc::string::String),
}

/// A sequence of generators, 0-based. Displayed 1-based and space
/// separated; the empty word displays as `e`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn from_one_based(letters: &[usize]) -> Word {
        Word(letters.iter().map(|&s| s - 1).collect())
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|&s| s + 1).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Generators occurring in the word.
    pub fn support(&self) -> GenSet {
        GenSet::from_indices(self.0.iter().copied())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}", s + 1)?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = GroupError;

    /// Parses `e`, the empty string, or 1-based indices separated by
    /// whitespace or commas.
    fn from_str(s: &str) -> Result<Word, GroupError> {
        let t = s.trim();
        if t.is_empty() || t == "e" {
            return Ok(Word::empty());
        }
        t.split(|c: char| c.is_whitespace() || c == ',')
            .filter(|p| !p.is_empty())
            .map(|p| match p.parse::<usize>() {
                Ok(k) if k >= 1 => Ok(k - 1),
                _ => Err(GroupError::BadWord(alloc::format!("'{p}' is not a generator index"))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }
}

#[derive(Clone, Debug)]
pub struct GroupElement {
    system: SystemId,
    matrix: Matrix,
    word: Word,
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &GroupElement) -> bool {
        self.system == other.system && self.matrix == other.matrix
    }
}

impl Eq for GroupElement {}

impl GroupElement {
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// Witness word; evaluates to this element but need not be reduced.
    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn system(&self) -> SystemId {
        self.system
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity()
    }

    pub(crate) fn with_word(mut self, word: Word) -> GroupElement {
        self.word = word;
        self
    }
}

/// Result of a bounded order search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Finite(usize),
    Exceeds(usize),
}

impl CoxeterSystem {
    pub(crate) fn check_element(&self, w: &GroupElement) -> Result<(), GroupError> {
        if w.system != self.id() || w.matrix.dim() != self.rank() {
            return Err(GroupError::MixedSystems);
        }
        Ok(())
    }

    fn check_gen(&self, s: usize) -> Result<(), GroupError> {
        if s >= self.rank() {
            return Err(GroupError::GeneratorOutOfRange { gen: s, rank: self.rank() });
        }
        Ok(())
    }

    pub(crate) fn wrap(&self, matrix: Matrix, word: Word) -> GroupElement {
        GroupElement { system: self.id(), matrix, word }
    }

    pub fn identity(&self) -> GroupElement {
        self.wrap(Matrix::identity(self.field(), self.rank()), Word::empty())
    }

    /// The reflection `v ↦ v - 2B(e_s, v) e_s`.
    pub fn generator(&self, s: usize) -> Result<GroupElement, GroupError> {
        self.check_gen(s)?;
        Ok(self.mul_gen(&self.identity(), s))
    }

    pub fn element(&self, word: &Word) -> Result<GroupElement, GroupError> {
        for &s in word.letters() {
            self.check_gen(s)?;
        }
        let mut m = self.identity().matrix;
        for &s in word.letters() {
            self.right_mul_gen_in_place(&mut m, s);
        }
        Ok(self.wrap(m, word.clone()))
    }

    fn right_mul_gen_in_place(&self, m: &mut Matrix, s: usize) {
        let f = self.field();
        let n = self.rank();
        // column t += c_st * column s, then column s is negated
        for &(t, ref c) in self.mirror(s) {
            for i in 0..n {
                let ws = m.get(i, s);
                if ws.is_zero() {
                    continue;
                }
                let v = f.add(m.get(i, t), &f.mul(ws, c));
                m.set(i, t, v);
            }
        }
        for i in 0..n {
            let v = m.get(i, s).neg();
            m.set(i, s, v);
        }
    }

    fn left_mul_gen_in_place(&self, m: &mut Matrix, s: usize) {
        let f = self.field();
        let n = self.rank();
        for j in 0..n {
            let mut acc = m.get(s, j).neg();
            for &(t, ref c) in self.mirror(s) {
                let wt = m.get(t, j);
                if !wt.is_zero() {
                    acc = f.add(&acc, &f.mul(c, wt));
                }
            }
            m.set(s, j, acc);
        }
    }

    /// `w · s`. Panics if `s` is out of range.
    pub fn mul_gen(&self, w: &GroupElement, s: usize) -> GroupElement {
        let mut m = w.matrix.clone();
        self.right_mul_gen_in_place(&mut m, s);
        let mut word = w.word.clone();
        word.0.push(s);
        self.wrap(m, word)
    }

    /// `s · w`. Panics if `s` is out of range.
    pub fn gen_mul(&self, s: usize, w: &GroupElement) -> GroupElement {
        let mut m = w.matrix.clone();
        self.left_mul_gen_in_place(&mut m, s);
        let mut word = vec![s];
        word.extend_from_slice(w.word.letters());
        self.wrap(m, Word(word))
    }

    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check_element(a)?;
        self.check_element(b)?;
        Ok(self.mul(a, b))
    }

    pub(crate) fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let word = a.word.concat(&b.word);
        if b.word.len() <= 2 * self.rank() {
            let mut m = a.matrix.clone();
            for &s in b.word.letters() {
                self.right_mul_gen_in_place(&mut m, s);
            }
            self.wrap(m, word)
        } else {
            self.wrap(a.matrix.mul(self.field(), &b.matrix), word)
        }
    }

    /// Inverse, as the product of the witness word reversed.
    pub fn inverse(&self, a: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check_element(a)?;
        Ok(self.inv(a))
    }

    pub(crate) fn inv(&self, a: &GroupElement) -> GroupElement {
        self.element(&a.word.reversed()).expect("witness words are valid")
    }

    pub fn equal(&self, a: &GroupElement, b: &GroupElement) -> Result<bool, GroupError> {
        self.check_element(a)?;
        self.check_element(b)?;
        Ok(a.matrix == b.matrix)
    }

    /// `x w x⁻¹`.
    pub fn conjugate(&self, x: &GroupElement, w: &GroupElement) -> GroupElement {
        self.mul(&self.mul(x, w), &self.inv(x))
    }

    pub fn commute(&self, a: &GroupElement, b: &GroupElement) -> bool {
        self.mul(a, b).matrix == self.mul(b, a).matrix
    }

    /// `w^k` for any integer `k`.
    pub fn power(&self, w: &GroupElement, k: i64) -> GroupElement {
        let base = if k < 0 { self.inv(w) } else { w.clone() };
        let mut acc = self.identity();
        for _ in 0..k.unsigned_abs() {
            acc = self.mul(&acc, &base);
        }
        acc
    }

    /// Whether `w(e_s)` is a negative root, i.e. `ℓ(ws) < ℓ(w)`. A root has
    /// all coordinates of one sign, so the first nonzero one decides.
    pub fn is_right_descent(&self, w: &GroupElement, s: usize) -> bool {
        self.column_is_negative(&w.matrix, s)
    }

    fn column_is_negative(&self, m: &Matrix, s: usize) -> bool {
        (0..self.rank())
            .map(|i| m.get(i, s))
            .find(|x| !x.is_zero())
            .is_some_and(|x| self.field().sign(x) == Sign::Negative)
    }

    /// Length and a reduced word, by stripping the smallest right descent
    /// until none is left.
    pub fn length_and_reduced(&self, w: &GroupElement) -> (usize, Word) {
        let mut m = w.matrix.clone();
        let mut stripped = Vec::new();
        while let Some(s) = (0..self.rank()).find(|&s| self.column_is_negative(&m, s)) {
            self.right_mul_gen_in_place(&mut m, s);
            stripped.push(s);
        }
        debug_assert!(m.is_identity());
        stripped.reverse();
        (stripped.len(), Word(stripped))
    }

    pub fn length(&self, w: &GroupElement) -> usize {
        self.length_and_reduced(w).0
    }

    /// Like [`Self::length_and_reduced`] but gives up after `max_steps`
    /// strips or if the matrix does not reduce to the identity; used for
    /// matrices not yet known to lie in the group.
    pub(crate) fn try_reduce(&self, m: &Matrix, max_steps: usize) -> Option<Word> {
        let mut m = m.clone();
        let mut stripped = Vec::new();
        while let Some(s) = (0..self.rank()).find(|&s| self.column_is_negative(&m, s)) {
            if stripped.len() >= max_steps {
                return None;
            }
            self.right_mul_gen_in_place(&mut m, s);
            stripped.push(s);
        }
        if !m.is_identity() {
            return None;
        }
        stripped.reverse();
        Some(Word(stripped))
    }

    /// The element with its word replaced by the deterministic reduced one.
    pub fn reduced(&self, w: &GroupElement) -> GroupElement {
        let (_, word) = self.length_and_reduced(w);
        w.clone().with_word(word)
    }

    /// `s_{π(1)} ⋯ s_{π(n)}` for a permutation of the 0-based generators.
    pub fn coxeter_element(&self, perm: &[usize]) -> Result<GroupElement, GroupError> {
        let n = self.rank();
        let mut seen = vec![false; n];
        if perm.len() != n {
            return Err(GroupError::NotAPermutation(n));
        }
        for &s in perm {
            if s >= n || seen[s] {
                return Err(GroupError::NotAPermutation(n));
            }
            seen[s] = true;
        }
        self.element(&Word(perm.to_vec()))
    }

    /// The standard Coxeter element `s_1 s_2 ⋯ s_n`.
    pub fn standard_coxeter_element(&self) -> GroupElement {
        let perm: Vec<usize> = (0..self.rank()).collect();
        self.coxeter_element(&perm).expect("identity permutation")
    }

    /// All elements of length at most `radius`.
    pub fn ball(&self, radius: usize) -> Result<Ball, GroupError> {
        self.ball_in(self.all_generators(), Some(radius), DEFAULT_BALL_CAP)
    }

    /// Breadth-first closure of the identity under right multiplication by
    /// the generators in `gens`, up to `radius` (unbounded if `None`).
    pub fn ball_in(&self, gens: GenSet, radius: Option<usize>, cap: usize) -> Result<Ball, GroupError> {
        for s in gens.iter() {
            self.check_gen(s)?;
        }
        let mut ball = Ball {
            radius: 0,
            members: vec![self.identity()],
            lengths: vec![0],
            parents: vec![None],
            index: BTreeMap::new(),
            exhausted: false,
        };
        ball.index.insert(ball.members[0].matrix.clone(), 0);
        let mut frontier = vec![0usize];
        let mut r = 0;
        while radius.map_or(true, |rad| r < rad) {
            let mut next = Vec::new();
            for &idx in &frontier {
                for s in gens.iter() {
                    let cand = self.mul_gen(&ball.members[idx], s);
                    if ball.index.contains_key(&cand.matrix) {
                        continue;
                    }
                    if ball.members.len() >= cap {
                        return Err(GroupError::CapExceeded(cap));
                    }
                    let id = ball.members.len();
                    ball.index.insert(cand.matrix.clone(), id);
                    ball.members.push(cand);
                    ball.lengths.push(r + 1);
                    ball.parents.push(Some((idx, s)));
                    next.push(id);
                }
            }
            if next.is_empty() {
                ball.exhausted = true;
                break;
            }
            r += 1;
            frontier = next;
        }
        ball.radius = radius.unwrap_or(r);
        Ok(ball)
    }

    /// Every element of the standard parabolic subgroup `W_I`; fails with
    /// [`GroupError::CapExceeded`] when it is infinite or too large.
    pub fn enumerate(&self, gens: GenSet, cap: usize) -> Result<Ball, GroupError> {
        self.ball_in(gens, None, cap)
    }

    /// Whether `ℓ(w^m) = m ℓ(w)` for `1 <= m <= max`.
    pub fn is_straight_upto(&self, w: &GroupElement, max: usize) -> bool {
        let l = self.length(w);
        let mut p = w.clone();
        for m in 1..=max {
            if self.length(&p) != m * l {
                return false;
            }
            p = self.mul(&p, w);
        }
        true
    }

    pub fn order_upto(&self, w: &GroupElement, max: usize) -> Order {
        let mut p = w.clone();
        for k in 1..=max {
            if p.is_identity() {
                return Order::Finite(k);
            }
            p = self.mul(&p, w);
        }
        Order::Exceeds(max)
    }
}

/// Elements of length at most `radius`, each with a reduced witness word
/// and a parent link `(parent index, generator)`.
#[derive(Clone, Debug)]
pub struct Ball {
    radius: usize,
    members: Vec<GroupElement>,
    lengths: Vec<usize>,
    parents: Vec<Option<(usize, usize)>>,
    index: BTreeMap<Matrix, usize>,
    exhausted: bool,
}

impl Ball {
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[GroupElement] {
        &self.members
    }

    pub fn length_of(&self, idx: usize) -> usize {
        self.lengths[idx]
    }

    pub fn parent(&self, idx: usize) -> Option<(usize, usize)> {
        self.parents[idx]
    }

    pub fn index_of(&self, w: &GroupElement) -> Option<usize> {
        self.index.get(&w.matrix).copied()
    }

    pub fn index_of_matrix(&self, m: &Matrix) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn contains(&self, w: &GroupElement) -> bool {
        self.index.contains_key(&w.matrix)
    }

    /// True when the breadth-first search ran out of new elements, i.e. the
    /// whole (finite) group is present.
    pub fn is_exhausted(&self) -> bool {
        self.exhausted
    }

    /// Reduced word of a member, recovered from parent links.
    pub fn path(&self, mut idx: usize) -> Word {
        let mut letters = Vec::new();
        while let Some((p, s)) = self.parents[idx] {
            letters.push(s);
            idx = p;
        }
        letters.reverse();
        Word(letters)
    }

    /// Number of members of each length `0..=radius`.
    pub fn sphere_sizes(&self) -> Vec<usize> {
        let top = self.lengths.iter().copied().max().unwrap_or(0);
        let mut out = vec![0; top + 1];
        for &l in &self.lengths {
            out[l] += 1;
        }
        out
    }
}

/// A finite set of group elements keyed by matrix.
#[derive(Clone, Debug, Default)]
pub struct ElementSet {
    members: Vec<GroupElement>,
    index: BTreeMap<Matrix, usize>,
}

impl ElementSet {
    pub fn new() -> ElementSet {
        ElementSet::default()
    }

    /// Inserts and returns whether the element was new.
    pub fn insert(&mut self, w: GroupElement) -> bool {
        if self.index.contains_key(&w.matrix) {
            return false;
        }
        self.index.insert(w.matrix.clone(), self.members.len());
        self.members.push(w);
        true
    }

    pub fn contains(&self, w: &GroupElement) -> bool {
        self.index.contains_key(&w.matrix)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[GroupElement] {
        &self.members
    }

    pub fn same_set(&self, other: &ElementSet) -> bool {
        self.len() == other.len() && self.members.iter().all(|w| other.contains(w))
    }
}

impl CoxeterSystem {
    /// Closure of `gens` under multiplication; fails past `cap` elements.
    pub fn generated_group(&self, gens: &[GroupElement], cap: usize) -> Result<ElementSet, GroupError> {
        for g in gens {
            self.check_element(g)?;
        }
        let mut set = ElementSet::new();
        set.insert(self.identity());
        let mut frontier = vec![0usize];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &idx in &frontier {
                for g in gens {
                    let cand = self.mul(&set.members[idx], g);
                    if set.contains(&cand) {
                        continue;
                    }
                    if set.len() >= cap {
                        return Err(GroupError::CapExceeded(cap));
                    }
                    next.push(set.len());
                    set.insert(cand);
                }
            }
            frontier = next;
        }
        Ok(set)
    }
}
