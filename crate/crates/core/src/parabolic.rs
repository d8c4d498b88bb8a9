//! Standard parabolic subgroups: longest elements, the elements `ν(I, s)`,
//! the conjugacy graph of subsets, normalizers, parabolic closures in
//! finite scopes, and a bounded search refuting essentiality.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::diagram::{Classification, CoxeterSystem, GenSet};
use crate::field::FieldElement;
use crate::group::{ElementSet, GroupElement, GroupError, Word};
use crate::matrix;
use crate::refl::{FiniteScope, ReflError, Reflection, DEFAULT_ORBIT_CAP};
use crate::roots::Root;

/// Largest rank for which the conjugacy graph is built.
pub const MAX_GRAPH_RANK: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParabolicError {
    #[error("subset {0} is not of spherical type")]
    NotSpherical(GenSet),
    #[error("generator {0} already lies in the subset")]
    GeneratorInSubset(usize),
    #[error("subset {0} is not contained in the generators")]
    BadSubset(GenSet),
    #[error("rank {0} exceeds the conjugacy graph limit of {MAX_GRAPH_RANK}")]
    RankTooLarge(usize),
    #[error("internal consistency failure: {0}")]
    Inconsistent(&'static str),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Refl(#[from] ReflError),
}

impl CoxeterSystem {
    fn check_subset(&self, i: GenSet) -> Result<(), ParabolicError> {
        if !i.is_subset(self.all_generators()) {
            return Err(ParabolicError::BadSubset(i));
        }
        Ok(())
    }

    /// Whether `W_I` is finite.
    pub fn is_spherical(&self, i: GenSet) -> bool {
        self.subsystem(i).map(|s| s.classification() == Classification::Finite).unwrap_or(false)
    }

    /// Positive roots of a spherical `W_I`, found by raising simple roots.
    pub fn positive_roots(&self, i: GenSet) -> Result<Vec<Root>, ParabolicError> {
        self.check_subset(i)?;
        if !self.is_spherical(i) {
            return Err(ParabolicError::NotSpherical(i));
        }
        let mut seen: BTreeSet<Root> = i.iter().map(|s| self.simple_root(s)).collect();
        let mut queue: VecDeque<Root> = seen.iter().cloned().collect();
        while let Some(r) = queue.pop_front() {
            for s in i.iter() {
                let img = self.act(&self.generator(s)?, &r);
                if img.is_positive() && !seen.contains(&img) {
                    seen.insert(img.clone());
                    queue.push_back(img);
                }
            }
        }
        Ok(seen.into_iter().collect())
    }

    /// The longest element `w_I`, by multiplying on the right by ascents
    /// until none is left.
    pub fn longest_element(&self, i: GenSet) -> Result<GroupElement, ParabolicError> {
        let bound = self.positive_roots(i)?.len();
        let mut w = self.identity();
        while let Some(s) = i.iter().find(|&s| !self.is_right_descent(&w, s)) {
            if w.word().len() >= bound {
                return Err(ParabolicError::Inconsistent("ascent longer than the number of positive roots"));
            }
            w = self.mul_gen(&w, s);
        }
        if w.word().len() != bound {
            return Err(ParabolicError::Inconsistent("longest element has the wrong length"));
        }
        Ok(w)
    }

    /// Index set `J` with `{w(e_j) : j ∈ I} = {e_k : k ∈ J}`, if `w` maps
    /// `Δ_I` onto a set of simple roots.
    pub fn image_of_simple_roots(&self, w: &GroupElement, i: GenSet) -> Option<GenSet> {
        let mut j = GenSet::EMPTY;
        for s in i.iter() {
            let col = w.matrix().column(s);
            let nz: Vec<usize> = (0..self.rank()).filter(|&k| !col[k].is_zero()).collect();
            if nz.len() != 1 || !col[nz[0]].is_one() {
                return None;
            }
            j = j.with(nz[0]);
        }
        (j.len() == i.len()).then_some(j)
    }

    /// `ν(I, s) = w_{K∖s} w_K` with its target `J`, or `None` when the
    /// component `K` of `I ∪ {s}` containing `s` is not spherical.
    pub fn nu(&self, i: GenSet, s: usize) -> Result<Option<NuEdge>, ParabolicError> {
        self.check_subset(i)?;
        if i.contains(s) {
            return Err(ParabolicError::GeneratorInSubset(s));
        }
        if s >= self.rank() {
            return Err(GroupError::GeneratorOutOfRange { gen: s, rank: self.rank() }.into());
        }
        let k = self.component_containing(i.with(s), s);
        if !self.is_spherical(k) {
            return Ok(None);
        }
        let nu = self.mul(&self.longest_element(k.without(s))?, &self.longest_element(k)?);
        self.finish_edge(i, s, nu).map(Some)
    }

    fn finish_edge(&self, i: GenSet, s: usize, nu: GroupElement) -> Result<NuEdge, ParabolicError> {
        let nu = self.reduced(&nu);
        let to = self
            .image_of_simple_roots(&self.inv(&nu), i)
            .ok_or(ParabolicError::Inconsistent("ν⁻¹ does not map Δ_I to simple roots"))?;
        Ok(NuEdge { from: i, gen: s, to, witness: nu })
    }

    /// Krammer's graph on all subsets of `S`.
    pub fn conjugacy_graph(&self) -> Result<ConjGraph, ParabolicError> {
        let n = self.rank();
        if n > MAX_GRAPH_RANK {
            return Err(ParabolicError::RankTooLarge(n));
        }
        let mut spherical: BTreeMap<GenSet, bool> = BTreeMap::new();
        let mut longest: BTreeMap<GenSet, GroupElement> = BTreeMap::new();
        let mut edges = Vec::new();
        for mask in 0u64..(1u64 << n) {
            let i = GenSet(mask);
            for s in (0..n).filter(|&s| !i.contains(s)) {
                let k = self.component_containing(i.with(s), s);
                let sph = *spherical.entry(k).or_insert_with(|| self.is_spherical(k));
                if !sph {
                    continue;
                }
                for part in [k, k.without(s)] {
                    if let alloc::collections::btree_map::Entry::Vacant(e) = longest.entry(part) {
                        e.insert(self.longest_element(part)?);
                    }
                }
                let nu = self.mul(&longest[&k.without(s)], &longest[&k]);
                edges.push(self.finish_edge(i, s, nu)?);
            }
        }
        Ok(ConjGraph::from_edges(n, edges))
    }

    /// `{x α : α ∈ Δ_J}` compared with `Δ_I`.
    fn maps_simple_roots(&self, x: &GroupElement, j: GenSet, i: GenSet) -> bool {
        self.image_of_simple_roots(x, j) == Some(i)
    }

    /// Whether `g W_I g⁻¹ = W_I`, testing generator conjugates by the
    /// support of their reduced words.
    pub fn normalizes(&self, g: &GroupElement, i: GenSet) -> bool {
        let ginv = self.inv(g);
        i.iter().all(|s| {
            let t = self.generator(s).expect("valid generator");
            let a = self.mul(&self.mul(g, &t), &ginv);
            let b = self.mul(&self.mul(&ginv, &t), g);
            self.length_and_reduced(&a).1.support().is_subset(i)
                && self.length_and_reduced(&b).1.support().is_subset(i)
        })
    }

    /// Whether `w ∈ W_I`.
    pub fn in_standard_parabolic(&self, w: &GroupElement, i: GenSet) -> bool {
        self.length_and_reduced(w).1.support().is_subset(i)
    }

    /// Searches ball members `x` for which `x⁻¹ w x` lies in a proper
    /// standard parabolic subgroup. A miss proves nothing.
    pub fn essentiality_refute(&self, w: &GroupElement, radius: usize) -> Result<Essentiality, ParabolicError> {
        let ball = self.ball(radius)?;
        let full = self.all_generators();
        for x in ball.members() {
            let y = self.mul(&self.mul(&self.inv(x), w), x);
            let (_, word) = self.length_and_reduced(&y);
            let support = word.support();
            if support != full {
                return Ok(Essentiality::Refuted { conjugator: x.word().clone(), support, reduced: word });
            }
        }
        Ok(Essentiality::NoWitnessFound { radius, searched: ball.len() })
    }
}

/// A labelled edge `I -s-> J` of the conjugacy graph.
#[derive(Clone, Debug)]
pub struct NuEdge {
    pub from: GenSet,
    pub gen: usize,
    pub to: GenSet,
    /// `ν(I, s)`, with a reduced word.
    pub witness: GroupElement,
}

impl fmt::Display for NuEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -{}-> {} : {}", self.from, self.gen + 1, self.to, self.witness.word())
    }
}

#[derive(Clone, Debug)]
pub struct ConjGraph {
    rank: usize,
    edges: Vec<NuEdge>,
    /// Outgoing edge indices per vertex, by generator.
    out: Vec<Vec<usize>>,
    component: Vec<usize>,
}

impl ConjGraph {
    fn from_edges(rank: usize, edges: Vec<NuEdge>) -> ConjGraph {
        let nv = 1usize << rank;
        let mut out = alloc::vec![Vec::new(); nv];
        let mut parent: Vec<usize> = (0..nv).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (k, e) in edges.iter().enumerate() {
            out[e.from.0 as usize].push(k);
            let (a, b) = (find(&mut parent, e.from.0 as usize), find(&mut parent, e.to.0 as usize));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let component = (0..nv).map(|v| find(&mut parent, v)).collect();
        ConjGraph { rank, edges, out, component }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn edges(&self) -> &[NuEdge] {
        &self.edges
    }

    pub fn edges_from(&self, i: GenSet) -> impl Iterator<Item = &NuEdge> {
        self.out[i.0 as usize].iter().map(move |&k| &self.edges[k])
    }

    /// Representative (smallest mask) of the component containing `i`.
    pub fn component_of(&self, i: GenSet) -> GenSet {
        GenSet(self.component[i.0 as usize] as u64)
    }

    pub fn component_members(&self, i: GenSet) -> Vec<GenSet> {
        let c = self.component[i.0 as usize];
        (0..self.component.len()).filter(|&v| self.component[v] == c).map(|v| GenSet(v as u64)).collect()
    }

    /// Whether `i` has no edges other than loops.
    pub fn is_isolated(&self, i: GenSet) -> bool {
        self.component_members(i).len() == 1
    }

    /// Breadth-first spanning tree of the component of `root`, taking
    /// outgoing edges in generator order. Maps each vertex to its tree
    /// edge (none for the root).
    fn spanning_tree(&self, root: GenSet) -> (Vec<GenSet>, BTreeMap<GenSet, Option<usize>>) {
        let mut tree = BTreeMap::new();
        tree.insert(root, None);
        let mut order = alloc::vec![root];
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for &k in &self.out[v.0 as usize] {
                let to = self.edges[k].to;
                if let alloc::collections::btree_map::Entry::Vacant(e) = tree.entry(to) {
                    e.insert(Some(k));
                    order.push(to);
                }
            }
        }
        (order, tree)
    }

    /// `μ(J)` for every `J` in the component of `root`: the product of the
    /// `ν` along the tree path from `root`, so that `μ(J) Δ_J = Δ_root`.
    fn mu_table(&self, sys: &CoxeterSystem, root: GenSet) -> (BTreeMap<GenSet, Option<usize>>, BTreeMap<GenSet, GroupElement>) {
        let (order, tree) = self.spanning_tree(root);
        let mut mu = BTreeMap::new();
        mu.insert(root, sys.identity());
        for v in order.into_iter().skip(1) {
            let e = &self.edges[tree[&v].expect("non-root vertices have a tree edge")];
            let m = sys.reduced(&sys.mul(&mu[&e.from], &e.witness));
            mu.insert(v, m);
        }
        (tree, mu)
    }

    /// If `W_I` and `W_J` are conjugate, an `x` with `x Δ_J = Δ_I`, hence
    /// `x W_J x⁻¹ = W_I`, checked exactly.
    pub fn standard_conjugate(&self, sys: &CoxeterSystem, i: GenSet, j: GenSet) -> Result<Option<GroupElement>, ParabolicError> {
        if self.component_of(i) != self.component_of(j) {
            return Ok(None);
        }
        let (_, mu) = self.mu_table(sys, i);
        let x = mu.get(&j).cloned().ok_or(ParabolicError::Inconsistent("vertex missing from spanning tree"))?;
        if !sys.maps_simple_roots(&x, j, i) {
            return Err(ParabolicError::Inconsistent("conjugating witness fails on simple roots"));
        }
        Ok(Some(x))
    }

    /// Generators of `N_W(W_I) = W_I ⋊ N_I`: the simple reflections of `I`
    /// and the elements `λ(e) = μ(J₁) ν(J₁, s) μ(J₂)⁻¹` over edges outside
    /// the spanning tree, each checked to satisfy `λ Δ_I = Δ_I`.
    pub fn normalizer_generators(&self, sys: &CoxeterSystem, i: GenSet) -> Result<NormalizerGenerators, ParabolicError> {
        let (tree, mu) = self.mu_table(sys, i);
        let tree_edges: BTreeSet<usize> = tree.values().flatten().copied().collect();
        let mut lambdas = Vec::new();
        let mut seen = ElementSet::new();
        seen.insert(sys.identity());
        for v in tree.keys() {
            for &k in &self.out[v.0 as usize] {
                if tree_edges.contains(&k) {
                    continue;
                }
                let e = &self.edges[k];
                let lambda = sys.mul(&sys.mul(&mu[&e.from], &e.witness), &sys.inv(&mu[&e.to]));
                let lambda = sys.reduced(&lambda);
                if !sys.maps_simple_roots(&lambda, i, i) {
                    return Err(ParabolicError::Inconsistent("λ(e) does not fix Δ_I"));
                }
                if seen.insert(lambda.clone()) {
                    lambdas.push((k, lambda));
                }
            }
        }
        let parabolic = i.iter().map(|s| sys.generator(s)).collect::<Result<_, _>>()?;
        Ok(NormalizerGenerators { subset: i, parabolic, lambdas })
    }
}

#[derive(Clone, Debug)]
pub struct NormalizerGenerators {
    pub subset: GenSet,
    pub parabolic: Vec<GroupElement>,
    /// Nontrivial distinct `λ(e)`, tagged with the index of the edge `e`.
    pub lambdas: Vec<(usize, GroupElement)>,
}

impl NormalizerGenerators {
    pub fn all(&self) -> Vec<GroupElement> {
        self.parabolic.iter().cloned().chain(self.lambdas.iter().map(|(_, l)| l.clone())).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Essentiality {
    /// `x⁻¹ w x` has the reduced word `reduced` with proper `support`,
    /// where `x` is given by `conjugator`.
    Refuted { conjugator: Word, support: GenSet, reduced: Word },
    NoWitnessFound { radius: usize, searched: usize },
}

/// The parabolic closure of a set in a finite scope.
#[derive(Clone, Debug)]
pub struct ParabolicClosure {
    /// Reflections of the scope whose roots lie in the moved space of `X`.
    pub reflections: Vec<Reflection>,
    pub group: ElementSet,
    /// Dimension of the moved space.
    pub rank: usize,
    /// `x` and `J` with `x⁻¹ Pc(X) x = W_J`.
    pub conjugator: GroupElement,
    pub standard: GenSet,
}

/// `Pc(X)` in a finite scope: the pointwise stabilizer of the common fixed
/// space of `X`, generated by the reflections whose roots lie in the span
/// of the images `(x - 1)V`.
pub fn parabolic_closure_finite(scope: &FiniteScope<'_>, xs: &[GroupElement]) -> Result<ParabolicClosure, ParabolicError> {
    let sys = scope.system();
    let f = sys.field();
    let n = sys.rank();
    for x in xs {
        if !scope.contains(x)? {
            return Err(ReflError::NotInScope.into());
        }
    }
    let mut moved: Vec<Vec<FieldElement>> = Vec::new();
    for x in xs {
        for j in 0..n {
            let mut col = x.matrix().column(j);
            col[j] = f.sub(&col[j], &f.one());
            if col.iter().any(|c| !c.is_zero()) {
                moved.push(col);
            }
        }
    }
    let rank = matrix::rank(f, &moved);
    let basis = moved;
    let reflections: Vec<Reflection> = scope
        .reflections()?
        .iter()
        .filter(|t| rank > 0 && matrix::in_span(f, &basis, t.root().coords()))
        .cloned()
        .collect();
    let gens: Vec<GroupElement> = reflections.iter().map(|t| t.element().clone()).collect();
    let group = sys.generated_group(&gens, DEFAULT_ORBIT_CAP)?;
    if !xs.iter().all(|x| group.contains(x)) {
        return Err(ParabolicError::Inconsistent("closure does not contain the input"));
    }
    let (conjugator, standard) = standardize(sys, scope, &reflections, rank)?;
    Ok(ParabolicClosure { reflections, group, rank, conjugator, standard })
}

/// Finds `x` in the scope and `J` with `|J| = rank` such that every root
/// `x⁻¹ α` is supported in `J`.
fn standardize(
    sys: &CoxeterSystem,
    scope: &FiniteScope<'_>,
    reflections: &[Reflection],
    rank: usize,
) -> Result<(GroupElement, GenSet), ParabolicError> {
    for x in scope.elements()?.members() {
        let xinv = sys.inv(x);
        let mut support = GenSet::EMPTY;
        for t in reflections {
            let r = sys.act(&xinv, t.root());
            for (k, c) in r.coords().iter().enumerate() {
                if !c.is_zero() {
                    support = support.with(k);
                }
            }
            if support.len() > rank {
                break;
            }
        }
        if support.len() == rank {
            return Ok((x.clone(), support));
        }
    }
    Err(ParabolicError::Inconsistent("closure is not conjugate to a standard parabolic"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn w(letters: &[usize]) -> Word {
        Word::from_one_based(letters)
    }

    fn set(one_based: &[usize]) -> GenSet {
        GenSet::from_indices(one_based.iter().map(|&i| i - 1))
    }

    #[test]
    fn spherical_subsets() {
        let d = catalog::affine_d4();
        assert!(!d.is_spherical(d.all_generators()));
        assert!(d.is_spherical(set(&[2, 3, 4, 5])));
        assert!(d.is_spherical(GenSet::EMPTY));
    }

    #[test]
    fn longest_elements() {
        let a2 = catalog::a(2);
        let w0 = a2.longest_element(a2.all_generators()).unwrap();
        assert_eq!(w0, a2.element(&w(&[1, 2, 1])).unwrap());
        assert_eq!(a2.length(&w0), 3);
        assert_eq!(a2.longest_element(set(&[2])).unwrap(), a2.generator(1).unwrap());
        let d = catalog::affine_d4();
        assert_eq!(d.length(&d.longest_element(set(&[2, 3, 4, 5])).unwrap()), 12);
        assert_eq!(d.longest_element(d.all_generators()).unwrap_err(), ParabolicError::NotSpherical(d.all_generators()));
    }

    #[test]
    fn nu_examples() {
        let a3 = catalog::a(3);
        let e = a3.nu(set(&[2, 3]), 0).unwrap().unwrap();
        assert_eq!(e.to, set(&[1, 2]));
        let d = catalog::affine_d4();
        assert!(d.nu(set(&[1, 2, 3, 4]), 4).unwrap().is_none());
        let a1a1 = catalog::a1_a1();
        let e = a1a1.nu(set(&[1]), 1).unwrap().unwrap();
        assert_eq!(e.witness, a1a1.generator(1).unwrap());
        assert_eq!(e.to, set(&[1]));
        assert_eq!(a3.nu(set(&[1]), 0).unwrap_err(), ParabolicError::GeneratorInSubset(0));
    }

    #[test]
    fn graph_of_a2() {
        let a2 = catalog::a(2);
        let g = a2.conjugacy_graph().unwrap();
        assert_eq!(g.component_of(set(&[1])), g.component_of(set(&[2])));
        let x = g.standard_conjugate(&a2, set(&[1]), set(&[2])).unwrap().unwrap();
        let s2 = a2.generator(1).unwrap();
        assert_eq!(a2.conjugate(&x, &s2), a2.generator(0).unwrap());
        assert!(g.standard_conjugate(&a2, set(&[1]), set(&[1])).unwrap().unwrap().is_identity());
        assert!(g.standard_conjugate(&a2, set(&[1]), GenSet::EMPTY).unwrap().is_none());
        assert_eq!(alloc::format!("{}", g.edges_from(GenSet::EMPTY).next().unwrap()), "{} -1-> {} : 1");
    }

    #[test]
    fn maximal_subsets_of_affine_d4_are_isolated() {
        let d = catalog::affine_d4();
        let g = d.conjugacy_graph().unwrap();
        for s in 0..5 {
            let i = d.all_generators().without(s);
            assert!(g.is_isolated(i));
            let norm = g.normalizer_generators(&d, i).unwrap();
            assert!(norm.lambdas.is_empty());
        }
    }

    #[test]
    fn normalizer_of_a1_in_a1xa1() {
        let s = catalog::a1_a1();
        let g = s.conjugacy_graph().unwrap();
        let norm = g.normalizer_generators(&s, set(&[1])).unwrap();
        assert_eq!(norm.lambdas.len(), 1);
        assert_eq!(norm.lambdas[0].1, s.generator(1).unwrap());
    }

    #[test]
    fn closures() {
        let a2 = catalog::a(2);
        let scope = FiniteScope::full(&a2).unwrap();
        let pc = parabolic_closure_finite(&scope, &[a2.identity()]).unwrap();
        assert_eq!(pc.group.len(), 1);
        let pc = parabolic_closure_finite(&scope, &[a2.standard_coxeter_element()]).unwrap();
        assert_eq!(pc.group.len(), 6);
        let t = a2.element(&w(&[1, 2, 1])).unwrap();
        let pc = parabolic_closure_finite(&scope, core::slice::from_ref(&t)).unwrap();
        assert_eq!(pc.group.len(), 2);
        assert_eq!(pc.standard.len(), 1);
        let x = &pc.conjugator;
        let conj = a2.mul(&a2.mul(&a2.inv(x), &t), x);
        assert!(a2.in_standard_parabolic(&conj, pc.standard));
    }

    #[test]
    fn essentiality() {
        let d = catalog::affine_d4();
        let x = d.element(&w(&[5, 4])).unwrap();
        assert!(matches!(d.essentiality_refute(&x, 0).unwrap(), Essentiality::Refuted { .. }));
        let a1t = catalog::affine_a1();
        let c = a1t.standard_coxeter_element();
        assert!(matches!(a1t.essentiality_refute(&c, 6).unwrap(), Essentiality::NoWitnessFound { .. }));
        let s = a1t.generator(0).unwrap();
        assert!(matches!(a1t.essentiality_refute(&s, 0).unwrap(), Essentiality::Refuted { .. }));
    }
}
