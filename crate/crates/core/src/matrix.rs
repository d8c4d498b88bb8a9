//! Square matrices over a [`Field`], row-major.

use alloc::vec::Vec;

use crate::field::{Field, FieldElement, Sign};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Matrix {
    n: usize,
    entries: Vec<FieldElement>,
}

impl Matrix {
    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(if i == j { field.one() } else { field.zero() });
            }
        }
        Matrix { n, entries }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> FieldElement) -> Matrix {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        Matrix { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElement {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.entries[i * self.n + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<FieldElement> {
        (0..self.n).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.entries
    }

    pub fn mul(&self, field: &Field, rhs: &Matrix) -> Matrix {
        let n = self.n;
        Matrix::from_fn(n, |i, j| {
            let mut acc = field.zero();
            for k in 0..n {
                let a = self.get(i, k);
                let b = rhs.get(k, j);
                if !a.is_zero() && !b.is_zero() {
                    acc = field.add(&acc, &field.mul(a, b));
                }
            }
            acc
        })
    }

    pub fn mul_vec(&self, field: &Field, v: &[FieldElement]) -> Vec<FieldElement> {
        (0..self.n)
            .map(|i| {
                let mut acc = field.zero();
                for (k, x) in v.iter().enumerate() {
                    let a = self.get(i, k);
                    if !a.is_zero() && !x.is_zero() {
                        acc = field.add(&acc, &field.mul(a, x));
                    }
                }
                acc
            })
            .collect()
    }

    /// Whether the matrix is the identity.
    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| {
            (0..self.n).all(|j| {
                let e = self.get(i, j);
                if i == j {
                    e.is_one()
                } else {
                    e.is_zero()
                }
            })
        })
    }

    /// Principal submatrix on the given (sorted) index set.
    pub fn principal(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(idx.len(), |i, j| self.get(idx[i], idx[j]).clone())
    }

    pub fn determinant(&self, field: &Field) -> FieldElement {
        let rows: Vec<Vec<FieldElement>> = (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        eliminate(field, rows, self.n).1
    }
}

/// Gaussian elimination on a list of rows with `cols` columns.
/// Returns `(rank, determinant)`; the determinant is meaningful only for
/// square input.
fn eliminate(field: &Field, mut rows: Vec<Vec<FieldElement>>, cols: usize) -> (usize, FieldElement) {
    let mut det = field.one();
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            det = field.zero();
            continue;
        };
        if p != rank {
            rows.swap(p, rank);
            det = det.neg();
        }
        let pivot = rows[rank][col].clone();
        det = field.mul(&det, &pivot);
        let inv = field.inv(&pivot).expect("pivot is nonzero");
        for r in rank + 1..rows.len() {
            if rows[r][col].is_zero() {
                continue;
            }
            let f = field.mul(&rows[r][col], &inv);
            for c in col..cols {
                let sub = field.mul(&f, &rows[rank][c]);
                rows[r][c] = field.sub(&rows[r][c], &sub);
            }
        }
        rank += 1;
    }
    if rank < rows.len().min(cols) || rows.len() != cols {
        det = field.zero();
    }
    (rank, det)
}

/// Rank of the span of the given vectors.
pub fn rank(field: &Field, vectors: &[Vec<FieldElement>]) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    eliminate(field, vectors.to_vec(), first.len()).0
}

/// Whether `v` lies in the span of `basis`.
pub fn in_span(field: &Field, basis: &[Vec<FieldElement>], v: &[FieldElement]) -> bool {
    let r = rank(field, basis);
    let mut ext = basis.to_vec();
    ext.push(v.to_vec());
    rank(field, &ext) == r
}

/// Exact signs of the leading principal minors.
pub fn leading_minor_signs(field: &Field, m: &Matrix) -> Vec<Sign> {
    (1..=m.dim())
        .map(|k| {
            let idx: Vec<usize> = (0..k).collect();
            field.sign(&m.principal(&idx).determinant(field))
        })
        .collect()
}
