//! Exact computation in Coxeter groups.
//!
//! Coefficients live in the real cyclotomic field `Q(2cos(π/N))`, so every
//! length, descent and root sign is decided exactly. The crate is `no_std`
//! and needs only `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod catalog;
pub mod diagram;
pub mod field;
pub mod group;
pub mod matrix;
mod poly;
pub mod parabolic;
pub mod refl;
pub mod roots;
pub mod verify;

pub use diagram::{Classification, CoxeterSystem, DiagramError, GenSet, Label, SystemId};
pub use field::{Field, FieldElement, FieldError, Sign};
pub use group::{Ball, ElementSet, GroupElement, GroupError, Order, Word};
pub use matrix::Matrix;
pub use parabolic::{ConjGraph, Essentiality, NuEdge, ParabolicError};
pub use refl::{FiniteScope, ReflError, Reflection, ReflectionFactorization};
pub use roots::{DualPoint, OutwardConfig, Root, RootError};
pub use verify::{BetaTrace, CentralizerReport, Conclusion, ExampleReport, VerifyError};
