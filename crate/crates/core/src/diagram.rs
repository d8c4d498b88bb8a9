//! Coxeter matrices, their bilinear forms and classification.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use thiserror::Error;

use crate::field::{Field, FieldElement, FieldError, Sign};
use crate::matrix::{self, Matrix};

/// Largest rank supported; generator subsets are 64-bit masks.
pub const MAX_RANK: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("rank {0} exceeds the supported maximum of 64")]
    RankTooLarge(usize),
    #[error("generator index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("pair ({0}, {1}) declared more than once")]
    DuplicateEdge(usize, usize),
    #[error("matrix is not symmetric at ({0}, {1})")]
    Asymmetric(usize, usize),
    #[error("diagonal entry at {0} must be 1")]
    BadDiagonal(usize),
    #[error("label at ({0}, {1}) must be at least 2")]
    LabelTooSmall(usize, usize),
    #[error("matrix rows have inconsistent lengths")]
    NotSquare,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// An entry `m_st` of a Coxeter matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Finite(u32),
    Infinite,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Finite(m) => write!(f, "{m}"),
            Label::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Classification {
    Finite,
    Affine,
    Indefinite,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Finite => "finite",
            Classification::Affine => "affine",
            Classification::Indefinite => "indefinite",
        })
    }
}

/// Fingerprint of a Coxeter matrix; elements carry it so operations can
/// reject operands built from another system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SystemId(pub u64);

/// A set of generators, stored as a bit mask (bit `i` = generator `i`,
/// 0-based). Displays 1-based, e.g. `{1,3}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GenSet(pub u64);

impl GenSet {
    pub const EMPTY: GenSet = GenSet(0);

    pub fn full(rank: usize) -> GenSet {
        if rank >= 64 {
            GenSet(u64::MAX)
        } else {
            GenSet((1u64 << rank) - 1)
        }
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> GenSet {
        GenSet(indices.into_iter().fold(0, |m, i| m | (1u64 << i)))
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> GenSet {
        GenSet(self.0 | 1u64 << i)
    }

    pub fn without(self, i: usize) -> GenSet {
        GenSet(self.0 & !(1u64 << i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: GenSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.contains(i))
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Display for GenSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        write!(f, "}}")
    }
}

/// A validated Coxeter system together with its bilinear form over the
/// joint field ℚ(2cos(π/N)), N the lcm of all finite labels.
#[derive(Clone, Debug)]
pub struct CoxeterSystem {
    id: SystemId,
    rank: usize,
    labels: Vec<Label>,
    names: Vec<String>,
    field: Field,
    gram: Matrix,
    /// For each `s`: the pairs `(t, -2B(e_s, e_t))` with `t != s` and a
    /// nonzero coefficient. Row `s` of the generator matrix, sparsely.
    mirror: Vec<Vec<(usize, FieldElement)>>,
    classification: Classification,
    components: Vec<GenSet>,
    provenance: Vec<usize>,
}

impl CoxeterSystem {
    /// Builds a system from a list of 0-based pairs `(i, j, m_ij)`; pairs
    /// not listed default to 2.
    pub fn new(rank: usize, edges: &[(usize, usize, Label)]) -> Result<CoxeterSystem, DiagramError> {
        if rank > MAX_RANK {
            return Err(DiagramError::RankTooLarge(rank));
        }
        let mut labels = vec![Label::Finite(2); rank * rank];
        for i in 0..rank {
            labels[i * rank + i] = Label::Finite(1);
        }
        let mut seen = alloc::collections::BTreeSet::new();
        for &(i, j, m) in edges {
            for index in [i, j] {
                if index >= rank {
                    return Err(DiagramError::IndexOutOfRange { index, rank });
                }
            }
            if i == j {
                return Err(DiagramError::BadDiagonal(i));
            }
            let key = (i.min(j), i.max(j));
            if !seen.insert(key) {
                return Err(DiagramError::DuplicateEdge(key.0, key.1));
            }
            if let Label::Finite(k) = m {
                if k < 2 {
                    return Err(DiagramError::LabelTooSmall(key.0, key.1));
                }
            }
            labels[i * rank + j] = m;
            labels[j * rank + i] = m;
        }
        Self::build(rank, labels, default_names(rank), (0..rank).collect())
    }

    /// Builds a system from a full Coxeter matrix.
    pub fn from_matrix(rows: &[Vec<Label>]) -> Result<CoxeterSystem, DiagramError> {
        let rank = rows.len();
        if rank > MAX_RANK {
            return Err(DiagramError::RankTooLarge(rank));
        }
        if rows.iter().any(|r| r.len() != rank) {
            return Err(DiagramError::NotSquare);
        }
        for i in 0..rank {
            if rows[i][i] != Label::Finite(1) {
                return Err(DiagramError::BadDiagonal(i));
            }
            for j in 0..rank {
                if rows[i][j] != rows[j][i] {
                    return Err(DiagramError::Asymmetric(i, j));
                }
                if i != j && matches!(rows[i][j], Label::Finite(k) if k < 2) {
                    return Err(DiagramError::LabelTooSmall(i.min(j), i.max(j)));
                }
            }
        }
        let labels = rows.iter().flatten().copied().collect();
        Self::build(rank, labels, default_names(rank), (0..rank).collect())
    }

    fn build(
        rank: usize,
        labels: Vec<Label>,
        names: Vec<String>,
        provenance: Vec<usize>,
    ) -> Result<CoxeterSystem, DiagramError> {
        let n = labels
            .iter()
            .filter_map(|l| match l {
                Label::Finite(m) => Some(*m),
                Label::Infinite => None,
            })
            .fold(1u32, |acc, m| acc.lcm(&m));
        let field = Field::new(n)?;
        let mut gram = Matrix::identity(&field, rank);
        let mut mirror = vec![Vec::new(); rank];
        for s in 0..rank {
            for t in 0..rank {
                if s == t {
                    continue;
                }
                // -2B(e_s, e_t) = 2cos(π/m), or 2 when m = ∞
                let twice = match labels[s * rank + t] {
                    Label::Finite(m) => field.two_cos_pi_over(m)?,
                    Label::Infinite => field.from_i64(2),
                };
                let half = field.from_rational(&num_rational::BigRational::new((-1).into(), 2.into()));
                gram.set(s, t, field.mul(&twice, &half));
                if !twice.is_zero() {
                    mirror[s].push((t, twice));
                }
            }
        }
        let id = fingerprint(rank, &labels);
        let components = connected_components(rank, &labels);
        let mut sys = CoxeterSystem {
            id,
            rank,
            labels,
            names,
            field,
            gram,
            mirror,
            classification: Classification::Indefinite,
            components,
            provenance,
        };
        sys.classification = sys.compute_classification();
        Ok(sys)
    }

    pub fn id(&self) -> SystemId {
        self.id
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn label(&self, s: usize, t: usize) -> Label {
        self.labels[s * self.rank + t]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn with_names(mut self, names: Vec<String>) -> CoxeterSystem {
        assert_eq!(names.len(), self.rank);
        self.names = names;
        self
    }

    /// The matrix `B(e_s, e_t)`.
    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub(crate) fn mirror(&self, s: usize) -> &[(usize, FieldElement)] {
        &self.mirror[s]
    }

    pub fn all_generators(&self) -> GenSet {
        GenSet::full(self.rank)
    }

    /// `B(a, b)` for coordinate vectors in the simple basis.
    pub fn bilinear(&self, a: &[FieldElement], b: &[FieldElement]) -> FieldElement {
        let f = &self.field;
        let mut acc = f.zero();
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let g = self.gram.get(i, j);
                if !y.is_zero() && !g.is_zero() {
                    acc = f.add(&acc, &f.mul(&f.mul(x, g), y));
                }
            }
        }
        acc
    }

    pub fn classification(&self) -> Classification {
        self.classification
    }

    pub fn components(&self) -> &[GenSet] {
        &self.components
    }

    /// Connected Coxeter graph (edges where `m_st > 2`). The rank-0 system
    /// has no components and is not irreducible.
    pub fn is_irreducible(&self) -> bool {
        self.components.len() == 1
    }

    /// Index of each generator in the system this one was restricted from.
    pub fn provenance(&self) -> &[usize] {
        &self.provenance
    }

    /// The standard parabolic system on `subset`, re-indexed in increasing
    /// order. Provenance is expressed relative to `self`.
    pub fn subsystem(&self, subset: GenSet) -> Result<CoxeterSystem, DiagramError> {
        let idx = subset.to_vec();
        if let Some(&index) = idx.iter().find(|&&i| i >= self.rank) {
            return Err(DiagramError::IndexOutOfRange { index, rank: self.rank });
        }
        let r = idx.len();
        let mut labels = Vec::with_capacity(r * r);
        for &i in &idx {
            for &j in &idx {
                labels.push(self.label(i, j));
            }
        }
        let names = idx.iter().map(|&i| self.names[i].clone()).collect();
        Self::build(r, labels, names, idx)
    }

    /// Connected component of the Coxeter graph restricted to `within`
    /// that contains `s`.
    pub fn component_containing(&self, within: GenSet, s: usize) -> GenSet {
        let mut comp = GenSet::EMPTY.with(s);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for v in within.iter() {
                if !comp.contains(v) && self.is_edge(u, v) {
                    comp = comp.with(v);
                    queue.push_back(v);
                }
            }
        }
        comp
    }

    fn is_edge(&self, s: usize, t: usize) -> bool {
        s != t && !matches!(self.label(s, t), Label::Finite(m) if m <= 2)
    }

    fn compute_classification(&self) -> Classification {
        let f = &self.field;
        let leading = matrix::leading_minor_signs(f, &self.gram);
        if leading.iter().all(|&s| s == Sign::Positive) {
            return Classification::Finite;
        }
        // positive semidefinite iff every principal minor is nonnegative
        let n = self.rank;
        for mask in 1u64..(1u64 << n) {
            let idx = GenSet(mask).to_vec();
            if f.sign(&self.gram.principal(&idx).determinant(f)) == Sign::Negative {
                return Classification::Indefinite;
            }
        }
        let columns: Vec<Vec<FieldElement>> = (0..n).map(|j| self.gram.column(j)).collect();
        if self.is_irreducible() && matrix::rank(f, &columns) + 1 == n {
            Classification::Affine
        } else {
            Classification::Indefinite
        }
    }
}

fn default_names(rank: usize) -> Vec<String> {
    (1..=rank).map(|i| format!("s{i}")).collect()
}

fn fingerprint(rank: usize, labels: &[Label]) -> SystemId {
    // FNV-1a
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut eat = |x: u64| {
        for b in x.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    };
    eat(rank as u64);
    for l in labels {
        eat(match l {
            Label::Finite(m) => *m as u64,
            Label::Infinite => u64::MAX,
        });
    }
    SystemId(h)
}

fn connected_components(rank: usize, labels: &[Label]) -> Vec<GenSet> {
    let mut seen = GenSet::EMPTY;
    let mut out = Vec::new();
    for start in 0..rank {
        if seen.contains(start) {
            continue;
        }
        let mut comp = GenSet::EMPTY.with(start);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for v in 0..rank {
                let edge = u != v && !matches!(labels[u * rank + v], Label::Finite(m) if m <= 2);
                if edge && !comp.contains(v) {
                    comp = comp.with(v);
                    queue.push_back(v);
                }
            }
        }
        seen = GenSet(seen.0 | comp.0);
        out.push(comp);
    }
    out
}
