//! Checks of `C_W(c) = ⟨c⟩`: exhaustive for finite groups, over a Cayley
//! ball otherwise. Also the root trace from the main argument, the
//! straightness and outward-root certifications, and the affine D4 example.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::catalog;
use crate::diagram::{Classification, CoxeterSystem, GenSet, SystemId};
use crate::field::FieldElement;
use crate::group::{Ball, GroupElement, GroupError, Order, Word};
use crate::matrix::Matrix;
use crate::parabolic::{Essentiality, ParabolicError};
use crate::refl::{generated_group, FiniteScope, ReflError, DEFAULT_ORBIT_CAP};
use crate::roots::{DualPoint, OutwardConfig, Root, RootError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("hypothesis not met: {0}")]
    Hypothesis(&'static str),
    #[error("element does not centralize the Coxeter element")]
    NotCentralizing,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Refl(#[from] ReflError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error(transparent)]
    Parabolic(#[from] ParabolicError),
}

/// Ball radius used when none is given.
pub fn default_radius(rank: usize) -> usize {
    match rank {
        0..=2 => 10,
        3 => 8,
        4 => 7,
        5 => 6,
        _ => 5,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    FiniteExhaustive,
    Ball,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Centralizing {
    /// Reduced word.
    pub word: Word,
    /// `k` with `g = c^k`, if found within the power bound.
    pub power: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Conclusion {
    TheoremConsistent,
    Counterexample(Word),
}

#[derive(Clone, Debug)]
pub struct CentralizerReport {
    pub system: SystemId,
    pub coxeter_word: Word,
    pub mode: Mode,
    pub radius: Option<usize>,
    pub power_bound: usize,
    /// Order of `c` when finite.
    pub coxeter_order: Option<usize>,
    /// Sorted by reduced word length, then word.
    pub centralizing: Vec<Centralizing>,
    pub conclusion: Conclusion,
    pub searched: usize,
}

impl CentralizerReport {
    pub fn is_consistent(&self) -> bool {
        self.conclusion == Conclusion::TheoremConsistent
    }
}

impl CoxeterSystem {
    /// `gc = cg`, compared column by column so that most non-centralizing
    /// elements are rejected after one matrix-vector product.
    pub fn centralizes(&self, g: &GroupElement, c: &GroupElement) -> bool {
        let f = self.field();
        (0..self.rank()).all(|j| {
            let gc = g.matrix().mul_vec(f, &c.matrix().column(j));
            let cg = c.matrix().mul_vec(f, &g.matrix().column(j));
            gc == cg
        })
    }
}

fn check_coxeter_element(sys: &CoxeterSystem, c: &GroupElement) -> Result<(), VerifyError> {
    sys.check_element(c)?;
    let (l, word) = sys.length_and_reduced(c);
    if l != sys.rank() || word.support() != sys.all_generators() {
        return Err(VerifyError::Hypothesis("not a standard Coxeter element"));
    }
    Ok(())
}

/// `C_W(c)` by enumerating all of a finite irreducible `W`.
pub fn verify_finite(sys: &CoxeterSystem, c: &GroupElement) -> Result<CentralizerReport, VerifyError> {
    if sys.classification() != Classification::Finite {
        return Err(VerifyError::Hypothesis("group is not finite"));
    }
    if !sys.is_irreducible() {
        return Err(VerifyError::Hypothesis("system is reducible"));
    }
    check_coxeter_element(sys, c)?;
    let scope = FiniteScope::full(sys)?;
    let ball = scope.elements()?;
    let found: Vec<usize> = (0..ball.len()).filter(|&i| sys.centralizes(&ball.members()[i], c)).collect();
    let h = match sys.order_upto(c, ball.len()) {
        Order::Finite(h) => h,
        Order::Exceeds(_) => return Err(VerifyError::Hypothesis("Coxeter element of infinite order")),
    };
    let mut powers = BTreeMap::new();
    let mut p = sys.identity();
    for k in 0..h {
        powers.insert(p.matrix().clone(), k as i64);
        p = sys.mul(&p, c);
    }
    let mut report = assemble(sys, c, ball, &found, &powers, Mode::FiniteExhaustive, None, h);
    report.coxeter_order = Some(h);
    if report.is_consistent() && report.centralizing.len() != h {
        return Err(VerifyError::Hypothesis("powers of c missing from the centralizer"));
    }
    Ok(report)
}

/// Power bound actually used for a ball of radius `r`.
pub fn effective_power_bound(c_length: usize, r: usize, p: usize) -> usize {
    p.max(r.div_ceil(c_length.max(1)) + 1)
}

/// Checks the hypotheses of [`verify_ball`] and builds the ball.
pub fn prepare_ball(sys: &CoxeterSystem, c: &GroupElement, r: usize, cap: usize) -> Result<Ball, VerifyError> {
    if sys.classification() == Classification::Finite {
        return Err(VerifyError::Hypothesis("group is finite"));
    }
    if !sys.is_irreducible() {
        return Err(VerifyError::Hypothesis("system is reducible"));
    }
    if r == 0 {
        return Err(VerifyError::Hypothesis("radius must be at least 1"));
    }
    check_coxeter_element(sys, c)?;
    Ok(sys.ball_in(sys.all_generators(), Some(r), cap)?)
}

/// Builds the report for an infinite group from the indices of the ball
/// members found to centralize `c`.
pub fn ball_report(sys: &CoxeterSystem, c: &GroupElement, ball: &Ball, found: &[usize], p: usize) -> CentralizerReport {
    let bound = effective_power_bound(sys.length(c), ball.radius(), p);
    let mut powers = BTreeMap::new();
    let cinv = sys.inv(c);
    let (mut up, mut down) = (sys.identity(), sys.identity());
    powers.insert(up.matrix().clone(), 0);
    for k in 1..=bound as i64 {
        up = sys.mul(&up, c);
        down = sys.mul(&down, &cinv);
        powers.insert(up.matrix().clone(), k);
        powers.insert(down.matrix().clone(), -k);
    }
    assemble(sys, c, ball, found, &powers, Mode::Ball, Some(ball.radius()), bound)
}

/// Centralizer of `c` within the ball of radius `r`.
pub fn verify_ball(sys: &CoxeterSystem, c: &GroupElement, r: usize, p: usize) -> Result<CentralizerReport, VerifyError> {
    let ball = prepare_ball(sys, c, r, crate::group::DEFAULT_BALL_CAP)?;
    let found: Vec<usize> = (0..ball.len()).filter(|&i| sys.centralizes(&ball.members()[i], c)).collect();
    Ok(ball_report(sys, c, &ball, &found, p))
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    sys: &CoxeterSystem,
    c: &GroupElement,
    ball: &Ball,
    found: &[usize],
    powers: &BTreeMap<Matrix, i64>,
    mode: Mode,
    radius: Option<usize>,
    bound: usize,
) -> CentralizerReport {
    let mut centralizing: Vec<(usize, Centralizing)> = found
        .iter()
        .map(|&i| {
            let g = &ball.members()[i];
            let word = ball.path(i);
            (word.len(), Centralizing { word, power: powers.get(g.matrix()).copied() })
        })
        .collect();
    centralizing.sort_by(|a, b| (a.0, &a.1.word).cmp(&(b.0, &b.1.word)));
    let centralizing: Vec<Centralizing> = centralizing.into_iter().map(|(_, x)| x).collect();
    let conclusion = match centralizing.iter().find(|x| x.power.is_none()) {
        Some(x) => Conclusion::Counterexample(x.word.clone()),
        None => Conclusion::TheoremConsistent,
    };
    CentralizerReport {
        system: sys.id(),
        coxeter_word: display_word(sys, c),
        mode,
        radius,
        power_bound: bound,
        coxeter_order: None,
        centralizing,
        conclusion,
        searched: ball.len(),
    }
}

/// For each `β_i` of `c`, the pair `(m_i, j)` with `g β_i = c^{m_i} β_j`
/// found in the window, and whether `s_{β_i} = c · s_n ⋯ ŝ_i ⋯ s_1` holds
/// for every `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaTrace {
    pub entries: Vec<Option<(i64, usize)>>,
    pub reflection_identity: bool,
    pub window: usize,
}

impl BetaTrace {
    /// The common `m_i` if every entry was found and they agree.
    pub fn constant_power(&self) -> Option<i64> {
        let first = self.entries.first()?.as_ref()?.0;
        self.entries.iter().all(|e| matches!(e, Some((m, _)) if *m == first)).then_some(first)
    }

    pub fn is_complete(&self) -> bool {
        self.entries.iter().all(Option::is_some)
    }
}

pub fn beta_trace(sys: &CoxeterSystem, g: &GroupElement, c: &GroupElement, window: usize) -> Result<BetaTrace, VerifyError> {
    sys.check_element(g)?;
    check_coxeter_element(sys, c)?;
    if !sys.centralizes(g, c) {
        return Err(VerifyError::NotCentralizing);
    }
    let f = sys.field();
    let word = sys.length_and_reduced(c).1;
    let betas = sys.beta_sequence_of_word(&word);
    let cinv = sys.inv(c);
    let mut table: BTreeMap<Vec<FieldElement>, (i64, usize)> = BTreeMap::new();
    for (j, b) in betas.iter().enumerate() {
        table.insert(b.coords().to_vec(), (0, j));
        let (mut up, mut down) = (b.coords().to_vec(), b.coords().to_vec());
        for m in 1..=window as i64 {
            up = c.matrix().mul_vec(f, &up);
            down = cinv.matrix().mul_vec(f, &down);
            table.entry(up.clone()).or_insert((m, j));
            table.entry(down.clone()).or_insert((-m, j));
        }
    }
    let entries = betas.iter().map(|b| table.get(sys.act(g, b).coords()).copied()).collect();
    let n = word.len();
    let reflection_identity = betas.iter().enumerate().all(|(i, b)| {
        let rest: Vec<usize> = (0..n).rev().filter(|&k| k != i).map(|k| word.letters()[k]).collect();
        let rhs = sys.mul(c, &sys.element(&Word(rest)).expect("letters of c are valid"));
        sys.reflection_of_root(b).map(|t| t == rhs).unwrap_or(false)
    });
    Ok(BetaTrace { entries, reflection_identity, window })
}

/// Whether `g = c^k`.
pub fn is_power(sys: &CoxeterSystem, g: &GroupElement, c: &GroupElement, k: i64) -> bool {
    sys.power(c, k) == *g
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub label: char,
    pub statement: String,
    pub ok: bool,
    pub detail: String,
}

/// Clauses of the affine D4 example, in order, stopping at the first
/// failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExampleReport {
    pub clauses: Vec<Clause>,
}

impl ExampleReport {
    pub fn passed(&self) -> bool {
        self.clauses.len() == 5 && self.clauses.iter().all(|c| c.ok)
    }
}

/// In affine D4 with `W' = ⟨s2, s3, s4, s5⟩` and `v = s4 s3 s4 s5 s3 s2`:
/// (a) `|W'| = 192`; (b) `ℓ_T(v) = 4`, some reduced reflection
/// factorization of `v` generates `W'`, and `v` is not conjugate in `W'`
/// to a Coxeter element of `W'`; (c) `s5 s4` centralizes `v` but is not a
/// power of it; (d) `s5 s4` commutes with `w = v s1`; (e) `s5 s4` lies in a
/// proper standard parabolic subgroup.
pub fn verify_example_d4tilde() -> Result<ExampleReport, VerifyError> {
    let sys = catalog::affine_d4();
    let word = |v: &[usize]| Word::from_one_based(v);
    let sub = GenSet::from_indices([1, 2, 3, 4]);
    let scope = FiniteScope::new(&sys, sub)?;
    let v = sys.element(&word(&[4, 3, 4, 5, 3, 2]))?;
    let x = sys.element(&word(&[5, 4]))?;
    let mut clauses = Vec::new();
    let mut push = |label, statement: &str, ok, detail: String| {
        clauses.push(Clause { label, statement: statement.into(), ok, detail });
        ok
    };

    let order = scope.order()?;
    if !push('a', "|W'| = 192", order == 192, format!("|W'|={order}")) {
        return Ok(ExampleReport { clauses });
    }

    let lt = scope.reflection_length(&v)?;
    let red = scope.reduced_factorizations(&v)?;
    let mut generating = None;
    for (k, f) in red.iter().enumerate() {
        if generated_group(&sys, f, DEFAULT_ORBIT_CAP)?.len() == order {
            generating = Some(k);
            break;
        }
    }
    let check = scope.parabolic_coxeter_check(&v)?;
    let ok = lt == 4 && generating.is_some() && check.conjugate_to.is_none();
    let detail = match generating {
        Some(k) => format!("l_T(v)={lt} |Red_T(v)|={} generating=({}) coxeter-conjugate=no", red.len(), red[k]),
        None => format!("l_T(v)={lt} |Red_T(v)|={} generating=none", red.len()),
    };
    if !push('b', "v is quasi-Coxeter but not a Coxeter element of W'", ok, detail) {
        return Ok(ExampleReport { clauses });
    }

    let v_order = match sys.order_upto(&v, order) {
        Order::Finite(k) => k,
        Order::Exceeds(_) => return Err(VerifyError::Hypothesis("v has infinite order")),
    };
    let in_cyclic = (0..v_order as i64).any(|k| is_power(&sys, &x, &v, k));
    let ok = sys.centralizes(&x, &v) && !in_cyclic;
    if !push('c', "s5 s4 centralizes v and is not in <v>", ok, format!("order(v)={v_order}")) {
        return Ok(ExampleReport { clauses });
    }

    let w = sys.mul_gen(&v, 0);
    let comm = sys.mul(&sys.mul(&x, &w), &sys.mul(&sys.inv(&x), &sys.inv(&w)));
    if !push('d', "s5 s4 commutes with w = v s1", comm.is_identity(), format!("w={}", sys.length_and_reduced(&w).1)) {
        return Ok(ExampleReport { clauses });
    }

    let ess = sys.essentiality_refute(&x, 0)?;
    let (ok, detail) = match &ess {
        Essentiality::Refuted { support, .. } => (true, format!("support={support}")),
        Essentiality::NoWitnessFound { .. } => (false, String::from("no proper support")),
    };
    push('e', "s5 s4 lies in a proper standard parabolic subgroup", ok, detail);
    Ok(ExampleReport { clauses })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpeyerReport {
    /// `ℓ(c^m)` for `m = 1..=max`.
    pub lengths: Vec<usize>,
    /// `|Φ⁺(c^m)|` for `m = 1..=max`.
    pub inversion_counts: Vec<usize>,
    pub straight: bool,
}

/// `ℓ(c^m) = m n` for `1 <= m <= max`, by reduced words and by inversion
/// sets.
pub fn verify_speyer(sys: &CoxeterSystem, c: &GroupElement, max: usize) -> Result<SpeyerReport, VerifyError> {
    if sys.classification() == Classification::Finite || !sys.is_irreducible() {
        return Err(VerifyError::Hypothesis("system must be infinite and irreducible"));
    }
    check_coxeter_element(sys, c)?;
    let n = sys.rank();
    let mut lengths = Vec::with_capacity(max);
    let mut inversion_counts = Vec::with_capacity(max);
    let mut p = sys.identity();
    for _ in 0..max {
        p = sys.mul(&p, c);
        lengths.push(sys.length(&p));
        inversion_counts.push(sys.inversion_set(&p)?.len());
    }
    let straight = (1..=max).all(|m| lengths[m - 1] == m * n && inversion_counts[m - 1] == m * n);
    Ok(SpeyerReport { lengths, inversion_counts, straight })
}

/// Outward representatives of `c` with windows `max` and `orbit_radius`;
/// there must be exactly `n` of them.
pub fn verify_outward(sys: &CoxeterSystem, c: &GroupElement, max: usize, orbit_radius: usize) -> Result<Vec<Root>, VerifyError> {
    if sys.classification() == Classification::Finite || !sys.is_irreducible() {
        return Err(VerifyError::Hypothesis("system must be infinite and irreducible"));
    }
    check_coxeter_element(sys, c)?;
    let cfg = OutwardConfig { straight_depth: max, window: max, orbit_radius };
    let reps = sys.outward_representatives(c, &DualPoint::all_ones(sys), &cfg)?;
    if reps.len() != sys.rank() {
        return Err(VerifyError::Root(RootError::Inconsistent("representative count differs from the rank")));
    }
    Ok(reps)
}

/// The stored word of `w` when it is reduced, otherwise a reduced word.
pub fn display_word(sys: &CoxeterSystem, w: &GroupElement) -> Word {
    let (l, reduced) = sys.length_and_reduced(w);
    if w.word().len() == l {
        w.word().clone()
    } else {
        reduced
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finite_small() {
        let a2 = catalog::a(2);
        let r = verify_finite(&a2, &a2.standard_coxeter_element()).unwrap();
        assert!(r.is_consistent());
        assert_eq!(r.centralizing.len(), 3);
        assert_eq!(r.coxeter_order, Some(3));
        let b3 = catalog::b(3);
        assert_eq!(verify_finite(&b3, &b3.standard_coxeter_element()).unwrap().centralizing.len(), 6);
        let a1t = catalog::affine_a1();
        assert!(verify_finite(&a1t, &a1t.standard_coxeter_element()).is_err());
        let red = catalog::a1_a1();
        assert!(verify_finite(&red, &red.standard_coxeter_element()).is_err());
    }

    #[test]
    fn affine_a1_ball() {
        let s = catalog::affine_a1();
        let c = s.standard_coxeter_element();
        let r = verify_ball(&s, &c, 8, 1).unwrap();
        assert!(r.is_consistent());
        let mut ks: Vec<i64> = r.centralizing.iter().map(|x| x.power.unwrap()).collect();
        ks.sort();
        assert_eq!(ks, [-4, -3, -2, -1, 0, 1, 2, 3, 4]);
        assert_eq!(r.power_bound, 5);
    }

    #[test]
    fn traces() {
        let s = catalog::affine_a1();
        let c = s.standard_coxeter_element();
        let t = beta_trace(&s, &s.identity(), &c, 5).unwrap();
        assert_eq!(t.entries, [Some((0, 0)), Some((0, 1))]);
        assert!(t.reflection_identity);
        assert_eq!(beta_trace(&s, &c, &c, 5).unwrap().constant_power(), Some(1));
        let c2 = s.power(&c, 2);
        assert_eq!(beta_trace(&s, &c2, &c, 5).unwrap().entries, [Some((2, 0)), Some((2, 1))]);
        assert_eq!(beta_trace(&s, &s.generator(0).unwrap(), &c, 5).unwrap_err(), VerifyError::NotCentralizing);
    }

    #[test]
    fn speyer_and_outward() {
        let s = catalog::affine_a1();
        let c = s.standard_coxeter_element();
        let r = verify_speyer(&s, &c, 10).unwrap();
        assert!(r.straight);
        assert_eq!(r.lengths[9], 20);
        assert_eq!(verify_outward(&s, &c, 10, 10).unwrap().len(), 2);
    }

    #[test]
    fn radii() {
        assert_eq!(default_radius(2), 10);
        assert_eq!(default_radius(3), 8);
        assert_eq!(default_radius(5), 6);
        assert_eq!(effective_power_bound(2, 10, 1), 6);
    }
}
