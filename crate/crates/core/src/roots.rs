//! Roots in the simple basis, inversion sets, the β-sequence of a reduced
//! word, reflections of roots, and outward-root certification.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::diagram::CoxeterSystem;
use crate::field::{FieldElement, Sign};
use crate::group::{GroupElement, Word};
use crate::matrix::Matrix;

/// Strip budget when recovering a word for the reflection of a root.
pub const REFLECTION_WORD_CAP: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("vector is not a root of the system")]
    NotARoot,
    #[error("wrong number of coordinates: expected {expected}, found {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("element is not straight up to power {0}")]
    NotStraight(usize),
    #[error("representative {index} fails the outward sign test at power {power}")]
    NotOutward { index: usize, power: i64 },
    #[error("orbits of representatives {0} and {1} meet")]
    OrbitCollision(usize, usize),
    #[error("internal consistency failure: {0}")]
    Inconsistent(&'static str),
}

/// A root `Σ a_s e_s` with its sign.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Root {
    coords: Vec<FieldElement>,
    sign: Sign,
}

impl Root {
    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn is_positive(&self) -> bool {
        self.sign == Sign::Positive
    }

    pub fn neg(&self) -> Root {
        let sign = match self.sign {
            Sign::Positive => Sign::Negative,
            _ => Sign::Positive,
        };
        Root { coords: self.coords.iter().map(FieldElement::neg).collect(), sign }
    }

    /// The positive root among `±self`.
    pub fn positive(&self) -> Root {
        if self.is_positive() {
            self.clone()
        } else {
            self.neg()
        }
    }

    pub fn is_rational(&self) -> bool {
        self.coords.iter().all(FieldElement::is_rational)
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// A linear functional on `V`, stored by its values on the simple roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualPoint {
    values: Vec<FieldElement>,
}

impl DualPoint {
    pub fn new(values: Vec<FieldElement>) -> DualPoint {
        DualPoint { values }
    }

    /// The functional with `x(e_s) = 1` for every `s`, an interior point of
    /// the fundamental chamber.
    pub fn all_ones(sys: &CoxeterSystem) -> DualPoint {
        DualPoint { values: (0..sys.rank()).map(|_| sys.field().one()).collect() }
    }

    pub fn values(&self) -> &[FieldElement] {
        &self.values
    }

    pub fn eval(&self, sys: &CoxeterSystem, v: &[FieldElement]) -> FieldElement {
        let f = sys.field();
        self.values
            .iter()
            .zip(v)
            .filter(|(_, b)| !b.is_zero())
            .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
    }
}

/// Windows for bounded outward certification: straightness is probed up
/// to `straight_depth`, the sign test runs over `1 <= |m| <= window`, and
/// orbits `{w^k β : |k| <= orbit_radius}` are compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OutwardConfig {
    pub straight_depth: usize,
    pub window: usize,
    pub orbit_radius: usize,
}

impl Default for OutwardConfig {
    fn default() -> OutwardConfig {
        OutwardConfig { straight_depth: 10, window: 10, orbit_radius: 10 }
    }
}

impl CoxeterSystem {
    pub fn simple_root(&self, s: usize) -> Root {
        let f = self.field();
        let coords = (0..self.rank()).map(|t| if t == s { f.one() } else { f.zero() }).collect();
        Root { coords, sign: Sign::Positive }
    }

    /// Builds a root from coordinates, checking that they are nonzero and of
    /// one sign. This does not prove the vector is a root.
    pub fn root_from_coords(&self, coords: Vec<FieldElement>) -> Result<Root, RootError> {
        if coords.len() != self.rank() {
            return Err(RootError::WrongLength { expected: self.rank(), found: coords.len() });
        }
        let mut seen = Sign::Zero;
        for c in &coords {
            match (self.field().sign(c), seen) {
                (Sign::Zero, _) => {}
                (s, Sign::Zero) => seen = s,
                (s, prev) if s != prev => return Err(RootError::NotARoot),
                _ => {}
            }
        }
        if seen == Sign::Zero {
            return Err(RootError::NotARoot);
        }
        Ok(Root { coords, sign: seen })
    }

    /// Wraps an image of a root. Roots are sign-coherent, so the first
    /// nonzero coordinate decides.
    pub(crate) fn root_unchecked(&self, coords: Vec<FieldElement>) -> Root {
        let sign = coords
            .iter()
            .find(|c| !c.is_zero())
            .map(|c| self.field().sign(c))
            .expect("roots are nonzero");
        debug_assert!(coords.iter().all(|c| {
            let s = self.field().sign(c);
            s == Sign::Zero || s == sign
        }));
        Root { coords, sign }
    }

    pub fn act(&self, w: &GroupElement, alpha: &Root) -> Root {
        self.root_unchecked(w.matrix().mul_vec(self.field(), &alpha.coords))
    }

    fn act_vec(&self, m: &Matrix, v: &[FieldElement]) -> Vec<FieldElement> {
        m.mul_vec(self.field(), v)
    }

    /// `Φ⁺(w)`: for a reduced word `s_{j_1} ⋯ s_{j_k}` of `w`, the roots
    /// `s_{j_k} ⋯ s_{j_{i+1}}(e_{j_i})`, each checked to be sent negative.
    pub fn inversion_set(&self, w: &GroupElement) -> Result<Vec<Root>, RootError> {
        let (_, word) = self.length_and_reduced(w);
        let k = word.len();
        let mut out = Vec::with_capacity(k);
        let mut suffix = self.identity();
        for i in (0..k).rev() {
            let j = word.letters()[i];
            let beta = self.root_unchecked(suffix.matrix().column(j));
            if !beta.is_positive() || self.act(w, &beta).is_positive() {
                return Err(RootError::Inconsistent("inversion root not sent negative"));
            }
            out.push(beta);
            suffix = self.mul_gen(&suffix, j);
        }
        out.reverse();
        let mut sorted = out.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != k {
            return Err(RootError::Inconsistent("inversion roots not distinct"));
        }
        Ok(out)
    }

    /// `β_i = s_{j_1} ⋯ s_{j_{i-1}}(e_{j_i})` for the deterministic reduced
    /// word of `w`. As a set this is `Φ⁺(w⁻¹)`.
    pub fn beta_sequence(&self, w: &GroupElement) -> Vec<Root> {
        let (_, word) = self.length_and_reduced(w);
        self.beta_sequence_of_word(&word)
    }

    /// β-sequence of a given word, which should be reduced.
    pub fn beta_sequence_of_word(&self, word: &Word) -> Vec<Root> {
        let mut prefix = self.identity();
        let mut out = Vec::with_capacity(word.len());
        for &j in word.letters() {
            out.push(self.root_unchecked(prefix.matrix().column(j)));
            prefix = self.mul_gen(&prefix, j);
        }
        out
    }

    /// The reflection `v ↦ v - 2B(α, v)α`. The vector is rejected unless
    /// `B(α, α) = 1` and the matrix reduces to the identity by descent
    /// stripping, which also yields its witness word.
    pub fn reflection_of_root(&self, alpha: &Root) -> Result<GroupElement, RootError> {
        let f = self.field();
        let n = self.rank();
        if alpha.coords.len() != n {
            return Err(RootError::WrongLength { expected: n, found: alpha.coords.len() });
        }
        if !self.bilinear(&alpha.coords, &alpha.coords).is_one() {
            return Err(RootError::NotARoot);
        }
        let b_alpha = self.gram().mul_vec(f, &alpha.coords);
        let two = f.from_i64(2);
        let m = Matrix::from_fn(n, |i, j| {
            let delta = if i == j { f.one() } else { f.zero() };
            if alpha.coords[i].is_zero() || b_alpha[j].is_zero() {
                return delta;
            }
            f.sub(&delta, &f.mul(&two, &f.mul(&alpha.coords[i], &b_alpha[j])))
        });
        let word = self.try_reduce(&m, REFLECTION_WORD_CAP).ok_or(RootError::NotARoot)?;
        Ok(self.wrap(m, word))
    }

    /// The positive root of a reflection `t`, found in its inversion set;
    /// `None` if `t` is not a reflection.
    pub fn reflection_root(&self, t: &GroupElement) -> Option<Root> {
        let inv = self.inversion_set(t).ok()?;
        let beta = inv.into_iter().find(|b| self.act(t, b) == b.neg())?;
        let r = self.reflection_of_root(&beta).ok()?;
        (r.matrix() == t.matrix()).then_some(beta)
    }

    /// Whether `m · x(w^{-m} α) < 0` for all `m0 <= |m| <= max`.
    pub fn is_outward_upto(&self, w: &GroupElement, alpha: &Root, x: &DualPoint, m0: usize, max: usize) -> bool {
        let winv = self.inv(w);
        let mut fwd = alpha.coords.clone();
        let mut back = alpha.coords.clone();
        for m in 1..=max {
            back = self.act_vec(winv.matrix(), &back);
            fwd = self.act_vec(w.matrix(), &fwd);
            if m < m0 {
                continue;
            }
            if self.field().sign(&x.eval(self, &back)) != Sign::Negative {
                return false;
            }
            if self.field().sign(&x.eval(self, &fwd)) != Sign::Positive {
                return false;
            }
        }
        true
    }

    /// Representatives of the `⟨w⟩`-orbits of outward roots of a straight
    /// element: the β-sequence of `w`. Each representative is checked
    /// against the sign test and the truncated orbits are checked to be
    /// pairwise disjoint.
    pub fn outward_representatives(
        &self,
        w: &GroupElement,
        x: &DualPoint,
        cfg: &OutwardConfig,
    ) -> Result<Vec<Root>, RootError> {
        if !self.is_straight_upto(w, cfg.straight_depth) {
            return Err(RootError::NotStraight(cfg.straight_depth));
        }
        let betas = self.beta_sequence(w);
        for (i, b) in betas.iter().enumerate() {
            if !self.is_outward_upto(w, b, x, 1, cfg.window) {
                let power = self.first_outward_failure(w, b, x, cfg.window);
                return Err(RootError::NotOutward { index: i, power });
            }
        }
        let winv = self.inv(w);
        let mut owner: BTreeMap<Vec<FieldElement>, usize> = BTreeMap::new();
        for (i, b) in betas.iter().enumerate() {
            let mut orbit = Vec::with_capacity(2 * cfg.orbit_radius + 1);
            orbit.push(b.coords.clone());
            let (mut fwd, mut back) = (b.coords.clone(), b.coords.clone());
            for _ in 0..cfg.orbit_radius {
                fwd = self.act_vec(w.matrix(), &fwd);
                back = self.act_vec(winv.matrix(), &back);
                orbit.push(fwd.clone());
                orbit.push(back.clone());
            }
            for v in orbit {
                if let Some(&j) = owner.get(&v) {
                    if j != i {
                        return Err(RootError::OrbitCollision(j, i));
                    }
                }
                owner.insert(v, i);
            }
        }
        Ok(betas)
    }

    fn first_outward_failure(&self, w: &GroupElement, alpha: &Root, x: &DualPoint, max: usize) -> i64 {
        (1..=max)
            .find(|&m| !self.is_outward_upto(w, alpha, x, 1, m))
            .map_or(0, |m| m as i64)
    }
}
