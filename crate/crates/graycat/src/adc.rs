//! Augmented directed complexes with a distinguished basis.
//!
//! An `Adc` is a non-negatively graded chain complex of free abelian groups
//! with a chosen basis in every degree, a differential, and an augmentation
//! in degree zero. The basis induces sign splits `∂ = ∂⁺ − ∂⁻`, which is all
//! the directedness this model needs; `∂⁺`/`∂⁻` are always derived from the
//! stored differential rather than stored separately.
//!
//! Everything here is exact integer arithmetic; all operations are pure and
//! all outputs are canonically ordered (degree, then label).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::chain::Chain;
use crate::label::Label;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Adc {
    basis: BTreeMap<Label, usize>,
    diff: BTreeMap<Label, Chain>,
    aug: BTreeMap<Label, i64>,
    endpoints: Option<(Label, Label)>,
}

/// Outcome of [`Adc::validate`]: violations are reported, never thrown.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Outcome of [`Adc::check_basis_conditions`].
///
/// Two acyclicity variants are computed side by side: `loop_free` uses the
/// precedence relation `a ≺ b when a ∈ supp(∂⁻b) or b ∈ supp(∂⁺a)`, and
/// `strongly_loop_free` uses the relation induced by full atom tables.
/// Neither is silently preferred; callers asking for "the" condition read
/// `loop_free`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisConditions {
    pub unital: bool,
    pub atomic: bool,
    pub loop_free: bool,
    pub strongly_loop_free: bool,
}

impl BasisConditions {
    pub fn all_true(&self) -> bool {
        self.unital && self.atomic && self.loop_free
    }
}

/// The atom table of a basis element: iterated sign-split boundaries.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct AtomTable {
    /// `levels[i] = (x_i^-, x_i^+)`, with the top level `(b, b)`.
    pub levels: Vec<(Chain, Chain)>,
}

impl Adc {
    pub fn new(
        elements: Vec<(Label, usize)>,
        differentials: Vec<(Label, Chain)>,
        augmentations: Vec<(Label, i64)>,
    ) -> Result<Adc> {
        let mut basis = BTreeMap::new();
        for (label, degree) in elements {
            if basis.insert(label.clone(), degree).is_some() {
                return Err(Error::InvalidAdc(format!("duplicate basis id {label}")));
            }
        }
        let mut adc = Adc { basis, diff: BTreeMap::new(), aug: BTreeMap::new(), endpoints: None };
        for (label, degree) in adc.basis.clone() {
            if degree >= 1 {
                adc.diff.insert(label, Chain::zero(degree - 1));
            } else {
                adc.aug.insert(label, 0);
            }
        }
        for (label, chain) in differentials {
            let degree = *adc.basis.get(&label).ok_or_else(|| {
                Error::InvalidAdc(format!("differential given for unknown id {label}"))
            })?;
            if degree == 0 {
                return Err(Error::InvalidAdc(format!(
                    "differential given for degree-0 id {label}"
                )));
            }
            if chain.degree() != degree - 1 {
                return Err(Error::InvalidAdc(format!(
                    "differential of {label} has degree {} (expected {})",
                    chain.degree(),
                    degree - 1
                )));
            }
            for l in chain.support() {
                match adc.basis.get(l) {
                    Some(d) if *d == degree - 1 => {}
                    Some(d) => {
                        return Err(Error::InvalidAdc(format!(
                            "differential of {label} references {l} of degree {d}"
                        )))
                    }
                    None => {
                        return Err(Error::InvalidAdc(format!(
                            "differential of {label} references unknown id {l}"
                        )))
                    }
                }
            }
            adc.diff.insert(label, chain);
        }
        for (label, value) in augmentations {
            match adc.basis.get(&label) {
                Some(0) => {
                    adc.aug.insert(label, value);
                }
                Some(d) => {
                    return Err(Error::InvalidAdc(format!(
                        "augmentation given for id {label} of degree {d}"
                    )))
                }
                None => {
                    return Err(Error::InvalidAdc(format!(
                        "augmentation given for unknown id {label}"
                    )))
                }
            }
        }
        Ok(adc)
    }

    /// The complex with a single vertex of augmentation 1.
    pub fn point() -> Adc {
        let v = Label::name("*");
        let mut adc = Adc::new(vec![(v.clone(), 0)], vec![], vec![(v.clone(), 1)]).unwrap();
        adc.endpoints = Some((v.clone(), v));
        adc
    }

    /// The path complex `[n]`: vertices `0..=n`, edges `e0..e(n-1)` with
    /// `∂e_i = {i+1} − {i}`, all augmentations 1.
    pub fn path(n: usize) -> Adc {
        let mut elements = Vec::new();
        let mut diffs = Vec::new();
        let mut augs = Vec::new();
        for i in 0..=n {
            elements.push((Self::path_vertex(i), 0));
            augs.push((Self::path_vertex(i), 1));
        }
        for i in 0..n {
            elements.push((Self::path_edge(i), 1));
            diffs.push((
                Self::path_edge(i),
                Chain::from_terms(0, [(Self::path_vertex(i + 1), 1), (Self::path_vertex(i), -1)]),
            ));
        }
        let mut adc = Adc::new(elements, diffs, augs).unwrap();
        adc.endpoints = Some((Self::path_vertex(0), Self::path_vertex(n)));
        adc
    }

    /// `n` isolated vertices `k0..k(n-1)`, all of augmentation 1.
    pub fn discrete(n: usize) -> Adc {
        let mut elements = Vec::new();
        let mut augs = Vec::new();
        for i in 0..n {
            let v = Label::name(format!("k{i}"));
            elements.push((v.clone(), 0));
            augs.push((v, 1));
        }
        Adc::new(elements, vec![], augs).unwrap()
    }

    pub fn path_vertex(i: usize) -> Label {
        Label::name(format!("{i}"))
    }

    pub fn path_edge(i: usize) -> Label {
        Label::name(format!("e{i}"))
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn degree_of(&self, label: &Label) -> Option<usize> {
        self.basis.get(label).copied()
    }

    pub fn contains(&self, label: &Label) -> bool {
        self.basis.contains_key(label)
    }

    pub fn top_degree(&self) -> usize {
        self.basis.values().copied().max().unwrap_or(0)
    }

    /// Basis of one degree in canonical (label) order.
    pub fn basis_of_degree(&self, degree: usize) -> Vec<Label> {
        self.basis
            .iter()
            .filter(|(_, d)| **d == degree)
            .map(|(l, _)| l.clone())
            .collect()
    }

    /// All basis elements in canonical (degree, label) order.
    pub fn basis(&self) -> Vec<(Label, usize)> {
        let mut out: Vec<(Label, usize)> =
            self.basis.iter().map(|(l, d)| (l.clone(), *d)).collect();
        out.sort_by(|a, b| (a.1, &a.0).cmp(&(b.1, &b.0)));
        out
    }

    pub fn basis_sizes_by_degree(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.top_degree() + 1];
        for d in self.basis.values() {
            sizes[*d] += 1;
        }
        if self.basis.is_empty() {
            sizes.clear();
        }
        sizes
    }

    pub fn diff_of(&self, label: &Label) -> &Chain {
        self.diff.get(label).expect("diff_of: degree-0 or unknown id")
    }

    pub fn aug_of(&self, label: &Label) -> i64 {
        *self.aug.get(label).expect("aug_of: unknown or positive-degree id")
    }

    pub fn endpoints(&self) -> Option<(&Label, &Label)> {
        self.endpoints.as_ref().map(|(a, b)| (a, b))
    }

    pub fn with_endpoints(mut self, start: Label, end: Label) -> Result<Adc> {
        for l in [&start, &end] {
            match self.degree_of(l) {
                Some(0) => {}
                _ => {
                    return Err(Error::MissingEndpoints(format!(
                        "{l} is not a degree-0 basis element"
                    )))
                }
            }
        }
        self.endpoints = Some((start, end));
        Ok(self)
    }

    pub fn without_endpoints(mut self) -> Adc {
        self.endpoints = None;
        self
    }

    /// Linear extension of the differential.
    pub fn boundary(&self, chain: &Chain) -> Chain {
        assert!(chain.degree() >= 1, "boundary of a degree-0 chain");
        let mut out = Chain::zero(chain.degree() - 1);
        for (l, k) in chain.iter() {
            out = out.add(&self.diff_of(l).scale(k));
        }
        out
    }

    /// Linear extension of the augmentation.
    pub fn augmentation(&self, chain: &Chain) -> i64 {
        assert_eq!(chain.degree(), 0, "augmentation of a positive-degree chain");
        chain.iter().map(|(l, k)| self.aug_of(l) * k).sum()
    }

    /// Check `∂∘∂ = 0` and `ε∘∂ = 0` on every basis element.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        for (label, degree) in self.basis() {
            if degree >= 2 {
                let dd = self.boundary(self.diff_of(&label));
                if !dd.is_zero() {
                    report
                        .violations
                        .push(format!("∂∂ {label} = {dd} (expected 0)"));
                }
            } else if degree == 1 {
                let e = self.augmentation(self.diff_of(&label));
                if e != 0 {
                    report.violations.push(format!("ε∂ {label} = {e} (expected 0)"));
                }
            }
        }
        report
    }

    /// Gray tensor product of complexes: basis pairs with the Leibniz
    /// differential `∂(b⊗c) = ∂b⊗c + (−1)^{|b|} b⊗∂c` and multiplicative
    /// augmentation.
    pub fn tensor(&self, other: &Adc) -> Adc {
        let mut elements = Vec::new();
        let mut diffs = Vec::new();
        let mut augs = Vec::new();
        for (b, db) in self.basis() {
            for (c, dc) in other.basis() {
                let label = Label::tensor(b.clone(), c.clone());
                let degree = db + dc;
                elements.push((label.clone(), degree));
                if degree == 0 {
                    augs.push((label, self.aug_of(&b) * other.aug_of(&c)));
                } else {
                    let mut chain = Chain::zero(degree - 1);
                    if db >= 1 {
                        for (l, k) in self.diff_of(&b).iter() {
                            chain.add_term(Label::tensor(l.clone(), c.clone()), k);
                        }
                    }
                    if dc >= 1 {
                        let sign = if db % 2 == 0 { 1 } else { -1 };
                        for (l, k) in other.diff_of(&c).iter() {
                            chain.add_term(Label::tensor(b.clone(), l.clone()), k * sign);
                        }
                    }
                    diffs.push((label, chain));
                }
            }
        }
        Adc::new(elements, diffs, augs).expect("tensor of well-formed complexes")
    }

    /// Duality: negate the differential of every basis element whose degree
    /// lies in `dims`. Involutive by construction.
    pub fn dualize(&self, dims: &BTreeSet<usize>) -> Adc {
        let mut out = self.clone();
        for (label, degree) in self.basis() {
            if degree >= 1 && dims.contains(&degree) {
                out.diff.insert(label.clone(), self.diff_of(&label).neg());
            }
        }
        out
    }

    /// Odd duality `op` truncated to this complex's degrees.
    pub fn op_dims(&self) -> BTreeSet<usize> {
        (1..=self.top_degree().max(1)).filter(|d| d % 2 == 1).collect()
    }

    /// Even duality `co` truncated to this complex's degrees.
    pub fn co_dims(&self) -> BTreeSet<usize> {
        (1..=self.top_degree().max(1)).filter(|d| d % 2 == 0).collect()
    }

    /// Full duality `°` truncated to this complex's degrees.
    pub fn full_dims(&self) -> BTreeSet<usize> {
        (1..=self.top_degree().max(1)).collect()
    }

    /// Suspension `[K, 1]`: two fresh endpoint vertices and a degree shift.
    ///
    /// Every degree-0 element of the input must have augmentation 1; the two
    /// new vertices become the designated endpoints.
    pub fn suspend(&self) -> Result<Adc> {
        let p0 = Label::name("p0");
        let p1 = Label::name("p1");
        let mut elements = vec![(p0.clone(), 0), (p1.clone(), 0)];
        let mut diffs = Vec::new();
        let augs = vec![(p0.clone(), 1), (p1.clone(), 1)];
        for (b, degree) in self.basis() {
            let label = Label::susp(b.clone());
            elements.push((label.clone(), degree + 1));
            if degree == 0 {
                if self.aug_of(&b) != 1 {
                    return Err(Error::Precondition(format!(
                        "suspension requires augmentation 1 on degree-0 elements; ε({b}) = {}",
                        self.aug_of(&b)
                    )));
                }
                diffs.push((
                    label,
                    Chain::from_terms(0, [(p1.clone(), 1), (p0.clone(), -1)]),
                ));
            } else {
                // [∂b, 1]: suspend each term, one degree up.
                let suspended = Chain::from_terms(
                    degree,
                    self.diff_of(&b).iter().map(|(l, k)| (Label::susp(l.clone()), k)),
                );
                diffs.push((label, suspended));
            }
        }
        let adc = Adc::new(elements, diffs, augs)?;
        adc.with_endpoints(p0, p1)
    }

    /// Wedge: glue `other`'s start vertex onto `self`'s end vertex.
    ///
    /// `self` keeps its labels; elements of `other` keep theirs when free and
    /// are pushed into a fresh segment otherwise. Returns the glued complex
    /// together with the label map applied to `other`.
    pub fn wedge(&self, other: &Adc) -> Result<(Adc, BTreeMap<Label, Label>)> {
        let (self_start, self_end) = self
            .endpoints
            .clone()
            .ok_or_else(|| Error::MissingEndpoints("left wedge operand".into()))?;
        let (other_start, other_end) = other
            .endpoints
            .clone()
            .ok_or_else(|| Error::MissingEndpoints("right wedge operand".into()))?;

        let mut used: BTreeSet<Label> = self.basis.keys().cloned().collect();
        let mut rename: BTreeMap<Label, Label> = BTreeMap::new();
        rename.insert(other_start.clone(), self_end.clone());
        for (label, _) in other.basis() {
            if label == other_start {
                continue;
            }
            let fresh = fresh_label(&label, &used);
            used.insert(fresh.clone());
            rename.insert(label, fresh);
        }

        let mut elements: Vec<(Label, usize)> =
            self.basis.iter().map(|(l, d)| (l.clone(), *d)).collect();
        let mut diffs: Vec<(Label, Chain)> =
            self.diff.iter().map(|(l, c)| (l.clone(), c.clone())).collect();
        let mut augs: Vec<(Label, i64)> =
            self.aug.iter().map(|(l, v)| (l.clone(), *v)).collect();

        for (label, degree) in other.basis() {
            if label == other_start {
                continue;
            }
            let new_label = rename[&label].clone();
            elements.push((new_label.clone(), degree));
            if degree == 0 {
                augs.push((new_label, other.aug_of(&label)));
            } else {
                diffs.push((new_label, other.diff_of(&label).map_labels(|l| rename[l].clone())));
            }
        }
        let adc = Adc::new(elements, diffs, augs)?;
        let adc = adc.with_endpoints(self_start, rename[&other_end].clone())?;
        Ok((adc, rename))
    }

    /// Atom table of a basis element: top level `(b, b)`, then iterated
    /// negative/positive boundary parts downwards.
    pub fn atom_table(&self, label: &Label) -> AtomTable {
        let degree = self.degree_of(label).expect("atom_table: unknown id");
        let top = Chain::single(label.clone(), degree);
        let mut levels = vec![(top.clone(), top)];
        for d in (0..degree).rev() {
            let (above_minus, above_plus) = levels.last().unwrap();
            let minus = self.boundary(above_minus).negative_part();
            let plus = self.boundary(above_plus).positive_part();
            debug_assert_eq!(minus.degree(), d);
            levels.push((minus, plus));
        }
        levels.reverse();
        AtomTable { levels }
    }

    /// Steiner basis conditions; see [`BasisConditions`].
    pub fn check_basis_conditions(&self) -> BasisConditions {
        let mut unital = true;
        let mut atomic = true;
        for (label, _) in self.basis() {
            let table = self.atom_table(&label);
            for (minus, plus) in &table.levels[..table.levels.len()] {
                if minus.degree() == 0
                    && (self.augmentation(minus) != 1 || self.augmentation(plus) != 1) {
                        unital = false;
                    }
            }
            // Atomicity: the two boundary routes of the table must agree,
            // which makes the table a genuine cell.
            for i in 1..table.levels.len() {
                let (minus, plus) = &table.levels[i];
                if self.boundary(minus) != self.boundary(plus) {
                    atomic = false;
                }
            }
        }
        let loop_free = is_acyclic(&self.precedence_edges());
        let strongly_loop_free = is_acyclic(&self.atom_precedence_edges());
        BasisConditions { unital, atomic, loop_free, strongly_loop_free }
    }

    /// Edges of the precedence relation: `a → b` when `a ∈ supp(∂⁻b)` or
    /// `b → c` when `c ∈ supp(∂⁺b)`.
    pub fn precedence_edges(&self) -> BTreeSet<(Label, Label)> {
        let mut edges = BTreeSet::new();
        for (b, degree) in self.basis() {
            if degree == 0 {
                continue;
            }
            let d = self.diff_of(&b);
            for a in d.negative_part().support() {
                edges.insert((a.clone(), b.clone()));
            }
            for c in d.positive_part().support() {
                edges.insert((b.clone(), c.clone()));
            }
        }
        edges
    }

    /// Edges of the atom-table precedence relation (the "strong" variant):
    /// `a → b` when `a` occurs in a negative level of `⟨b⟩` below the top, or
    /// `b` occurs in a positive level of `⟨a⟩` below the top.
    pub fn atom_precedence_edges(&self) -> BTreeSet<(Label, Label)> {
        let mut edges = BTreeSet::new();
        for (b, degree) in self.basis() {
            if degree == 0 {
                continue;
            }
            let table = self.atom_table(&b);
            for (minus, plus) in &table.levels[..degree] {
                for a in minus.support() {
                    edges.insert((a.clone(), b.clone()));
                }
                for c in plus.support() {
                    edges.insert((b.clone(), c.clone()));
                }
            }
        }
        edges
    }

    /// Rename every basis element through an injective map.
    pub fn relabel(&self, map: &BTreeMap<Label, Label>) -> Result<Adc> {
        let get = |l: &Label| -> Result<Label> {
            map.get(l)
                .cloned()
                .ok_or_else(|| Error::InvalidAdc(format!("relabel map misses {l}")))
        };
        let mut elements = Vec::new();
        let mut diffs = Vec::new();
        let mut augs = Vec::new();
        for (l, d) in self.basis() {
            let nl = get(&l)?;
            elements.push((nl.clone(), d));
            if d == 0 {
                augs.push((nl, self.aug_of(&l)));
            } else {
                let mut chain = Chain::zero(d - 1);
                for (s, k) in self.diff_of(&l).iter() {
                    chain.add_term(get(s)?, k);
                }
                diffs.push((nl, chain));
            }
        }
        let mut out = Adc::new(elements, diffs, augs)?;
        if let Some((s, e)) = &self.endpoints {
            out = out.with_endpoints(get(s)?, get(e)?)?;
        }
        Ok(out)
    }
}

/// Pick a fresh variant of `label`: the label itself when unused, otherwise
/// `j:core` for the smallest free segment index, where `core` strips any
/// existing segment tag.
pub(crate) fn fresh_label(label: &Label, used: &BTreeSet<Label>) -> Label {
    if !used.contains(label) {
        return label.clone();
    }
    let core = match label {
        Label::Seg(_, inner) => (**inner).clone(),
        other => other.clone(),
    };
    for j in 1.. {
        let candidate = Label::seg(j, core.clone());
        if !used.contains(&candidate) {
            return candidate;
        }
    }
    unreachable!()
}

fn is_acyclic(edges: &BTreeSet<(Label, Label)>) -> bool {
    let mut adjacency: BTreeMap<&Label, Vec<&Label>> = BTreeMap::new();
    for (a, b) in edges {
        adjacency.entry(a).or_default().push(b);
    }
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Open,
        Done,
    }
    let mut marks: BTreeMap<&Label, Mark> = BTreeMap::new();
    for start in adjacency.keys().copied().collect::<Vec<_>>() {
        if marks.contains_key(start) {
            continue;
        }
        // Iterative DFS with an explicit stack.
        let mut stack: Vec<(&Label, usize)> = vec![(start, 0)];
        marks.insert(start, Mark::Open);
        while let Some((node, idx)) = stack.pop() {
            let next = adjacency.get(node).map(|v| v.as_slice()).unwrap_or(&[]);
            if idx < next.len() {
                stack.push((node, idx + 1));
                let child = next[idx];
                match marks.get(child) {
                    None => {
                        marks.insert(child, Mark::Open);
                        stack.push((child, 0));
                    }
                    Some(Mark::Open) => return false,
                    Some(Mark::Done) => {}
                }
            } else {
                marks.insert(node, Mark::Done);
            }
        }
    }
    true
}

impl fmt::Display for Adc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "basis by degree: {:?}", self.basis_sizes_by_degree())?;
        for (l, d) in self.basis() {
            if d == 0 {
                writeln!(f, "  {l}  (deg 0, ε = {})", self.aug_of(&l))?;
            } else {
                writeln!(f, "  {l}  (deg {d}, ∂ = {})", self.diff_of(&l))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn interval() -> Adc {
        crate::corpus::interval()
    }

    #[test]
    fn interval_is_valid() {
        assert!(interval().validate().is_valid());
    }

    #[test]
    fn broken_square_is_reported_at_the_offending_element() {
        let v0 = Label::name("v0");
        let v1 = Label::name("v1");
        let e1 = Label::name("e1");
        let e2 = Label::name("e2");
        let adc = Adc::new(
            vec![(v0.clone(), 0), (v1.clone(), 0), (e1.clone(), 1), (e2.clone(), 2)],
            vec![
                (e1.clone(), Chain::from_terms(0, [(v1.clone(), 1), (v0.clone(), -1)])),
                (e2.clone(), Chain::single(e1.clone(), 1)),
            ],
            vec![(v0, 1), (v1, 1)],
        )
        .unwrap();
        let report = adc.validate();
        assert_eq!(report.violations.len(), 1);
        assert!(report.violations[0].contains("e2"));
    }

    #[test]
    fn dualize_flips_the_requested_degrees_only() {
        let adc = interval();
        let dims: BTreeSet<usize> = [1].into_iter().collect();
        let dual = adc.dualize(&dims);
        let expected =
            Chain::from_terms(0, [(Label::name("v0"), 1), (Label::name("v1"), -1)]);
        assert_eq!(*dual.diff_of(&Label::name("e")), expected);
        assert_eq!(adc.dualize(&BTreeSet::new()), adc);
        assert_eq!(dual.dualize(&dims), adc);
    }

    #[test]
    fn suspension_of_the_interval_is_the_globe() {
        let d2 = interval().suspend().unwrap();
        assert_eq!(d2.basis_sizes_by_degree(), vec![2, 2, 1]);
        let top = Label::susp(Label::name("e"));
        assert_eq!(
            *d2.diff_of(&top),
            Chain::from_terms(
                1,
                [(Label::susp(Label::name("v1")), 1), (Label::susp(Label::name("v0")), -1)]
            )
        );
        // Suspension requires augmentation 1 in degree 0.
        let bad = Adc::new(
            vec![(Label::name("w"), 0)],
            vec![],
            vec![(Label::name("w"), 2)],
        )
        .unwrap();
        assert!(bad.suspend().is_err());
    }

    #[test]
    fn wedge_unit_and_gluing() {
        let k = interval();
        let (glued, _) = k.wedge(&Adc::point()).unwrap();
        assert_eq!(glued, k);
        let (path2, rename) = k.wedge(&k).unwrap();
        assert_eq!(path2.basis_sizes_by_degree(), vec![3, 2]);
        assert_eq!(rename[&Label::name("v0")], Label::name("v1"));
        assert_eq!(rename[&Label::name("e")], Label::seg(1, Label::name("e")));
        assert!(k.clone().without_endpoints().wedge(&k).is_err());
    }

    #[test]
    fn tensor_differential_follows_the_sign_rule() {
        let k = interval();
        let t = k.tensor(&k);
        let e = Label::name("e");
        let v0 = Label::name("v0");
        let v1 = Label::name("v1");
        let expected = Chain::from_terms(
            1,
            [
                (Label::tensor(v1.clone(), e.clone()), 1),
                (Label::tensor(e.clone(), v0.clone()), 1),
                (Label::tensor(v0.clone(), e.clone()), -1),
                (Label::tensor(e.clone(), v1.clone()), -1),
            ],
        );
        assert_eq!(*t.diff_of(&Label::tensor(e.clone(), e)), expected);
        assert!(t.validate().is_valid());
        assert!(t.check_basis_conditions().all_true());
    }

    #[test]
    fn loop_detection() {
        // Two degree-1 elements feeding each other's boundary splits.
        let a = Label::name("a");
        let b = Label::name("b");
        let x = Label::name("x");
        let y = Label::name("y");
        let adc = Adc::new(
            vec![(x.clone(), 0), (y.clone(), 0), (a.clone(), 1), (b.clone(), 1)],
            vec![
                (a.clone(), Chain::from_terms(0, [(y.clone(), 1), (x.clone(), -1)])),
                (b.clone(), Chain::from_terms(0, [(x.clone(), 1), (y.clone(), -1)])),
            ],
            vec![(x, 1), (y, 1)],
        )
        .unwrap();
        assert!(adc.validate().is_valid());
        let conditions = adc.check_basis_conditions();
        assert!(!conditions.loop_free);
        assert!(!conditions.strongly_loop_free);
    }
}
