//! Constructors for the Coxeter systems used throughout the test corpus.
//!
//! Generators are 0-based here. The affine D4 diagram is the star with
//! centre index 2 (s3 in 1-based notation) and leaves 0, 1, 3, 4.

use alloc::vec::Vec;

use crate::diagram::{CoxeterSystem, Label};

fn build(rank: usize, edges: &[(usize, usize, u32)]) -> CoxeterSystem {
    let edges: Vec<_> = edges
        .iter()
        .map(|&(i, j, m)| (i, j, if m == 0 { Label::Infinite } else { Label::Finite(m) }))
        .collect();
    CoxeterSystem::new(rank, &edges).expect("catalog diagrams are valid")
}

fn path(rank: usize, first: u32) -> CoxeterSystem {
    let edges: Vec<_> = (1..rank).map(|i| (i - 1, i, if i == 1 { first } else { 3 })).collect();
    build(rank, &edges)
}

/// Type A_n: a path with all labels 3.
pub fn a(n: usize) -> CoxeterSystem {
    path(n, 3)
}

/// Type B_n with the label 4 on the first edge.
pub fn b(n: usize) -> CoxeterSystem {
    path(n, 4)
}

/// Type D_4 with centre index 1.
pub fn d4() -> CoxeterSystem {
    build(4, &[(0, 1, 3), (1, 2, 3), (1, 3, 3)])
}

pub fn h3() -> CoxeterSystem {
    build(3, &[(0, 1, 5), (1, 2, 3)])
}

pub fn f4() -> CoxeterSystem {
    build(4, &[(0, 1, 3), (1, 2, 4), (2, 3, 3)])
}

/// Dihedral group of order 2m.
pub fn i2(m: u32) -> CoxeterSystem {
    build(2, &[(0, 1, m)])
}

pub fn affine_a1() -> CoxeterSystem {
    build(2, &[(0, 1, 0)])
}

pub fn affine_a2() -> CoxeterSystem {
    build(3, &[(0, 1, 3), (1, 2, 3), (0, 2, 3)])
}

pub fn affine_c2() -> CoxeterSystem {
    build(3, &[(0, 1, 4), (1, 2, 4)])
}

pub fn affine_g2() -> CoxeterSystem {
    build(3, &[(0, 1, 3), (1, 2, 6)])
}

pub fn affine_d4() -> CoxeterSystem {
    build(5, &[(0, 2, 3), (1, 2, 3), (2, 3, 3), (2, 4, 3)])
}

/// The triangle diagram with labels `m_12 = p`, `m_13 = q`, `m_23 = r`.
pub fn triangle(p: u32, q: u32, r: u32) -> CoxeterSystem {
    build(3, &[(0, 1, p), (0, 2, q), (1, 2, r)])
}

/// Two commuting generators.
pub fn a1_a1() -> CoxeterSystem {
    build(2, &[])
}
