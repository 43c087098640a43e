//! Finite strict (1,1)-double categories with optional markings.
//!
//! A square is drawn as
//!
//! ```text
//!        top
//!     a ────→ b
//! left│   α   │right
//!     ↓       ↓
//!     c ────→ d
//!       bottom
//! ```
//!
//! with horizontal 1-cells on top/bottom and vertical 1-cells on the sides.
//! Vertical composition stacks squares (this is composition in the category
//! D₁, whose objects are horizontal cells); horizontal composition pastes
//! them side by side. Companions, bicartesian squares, the companionship
//! marking and the two-sided-fibration lifting conditions are all checked by
//! brute force over the stored tables.

use std::collections::{BTreeMap, BTreeSet};

use crate::strictcat::FiniteStrictNCat;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeData {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareData {
    pub name: String,
    pub top: usize,
    pub bottom: usize,
    pub left: usize,
    pub right: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Marking {
    pub vcells: BTreeSet<usize>,
    pub squares: BTreeSet<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteDoubleCat {
    pub objects: Vec<String>,
    pub vcells: Vec<EdgeData>,
    pub vcomp: BTreeMap<(usize, usize), usize>,
    pub vid: Vec<usize>,
    pub hcells: Vec<EdgeData>,
    pub hcomp: BTreeMap<(usize, usize), usize>,
    pub hid: Vec<usize>,
    pub squares: Vec<SquareData>,
    pub sq_vcomp: BTreeMap<(usize, usize), usize>,
    pub sq_hcomp: BTreeMap<(usize, usize), usize>,
    /// Identity square of a horizontal cell (unit of D₁).
    pub sq_vid: Vec<usize>,
    /// Horizontal unit square of a vertical cell.
    pub sq_hid: Vec<usize>,
    pub marking: Option<Marking>,
}

/// A companion: horizontal cell with unit and counit squares satisfying both
/// triangle identities on the nose.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CompanionTriple {
    pub companion: usize,
    pub unit: usize,
    pub counit: usize,
}

#[derive(Clone, Debug, Default)]
pub struct DoubleReport {
    pub violations: Vec<String>,
}

impl DoubleReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl FiniteDoubleCat {
    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_vcells(&self) -> usize {
        self.vcells.len()
    }

    pub fn num_hcells(&self) -> usize {
        self.hcells.len()
    }

    pub fn num_squares(&self) -> usize {
        self.squares.len()
    }

    /// `f then g` for vertical cells.
    pub fn v_then(&self, f: usize, g: usize) -> Result<usize> {
        if self.vcells[f].tgt != self.vcells[g].src {
            return Err(Error::NotComposable(0));
        }
        self.vcomp
            .get(&(f, g))
            .copied()
            .ok_or_else(|| Error::InvalidDouble("missing vertical composite".into()))
    }

    /// `u then v` for horizontal cells.
    pub fn h_then(&self, u: usize, v: usize) -> Result<usize> {
        if self.hcells[u].tgt != self.hcells[v].src {
            return Err(Error::NotComposable(0));
        }
        self.hcomp
            .get(&(u, v))
            .copied()
            .ok_or_else(|| Error::InvalidDouble("missing horizontal composite".into()))
    }

    /// Stack `α` on top of `β` (vertical composition in D₁).
    pub fn sq_then_v(&self, a: usize, b: usize) -> Result<usize> {
        if self.squares[a].bottom != self.squares[b].top {
            return Err(Error::NotComposable(1));
        }
        self.sq_vcomp
            .get(&(a, b))
            .copied()
            .ok_or_else(|| Error::InvalidDouble("missing vertical square composite".into()))
    }

    /// Paste `α` to the left of `β` (horizontal composition).
    pub fn sq_then_h(&self, a: usize, b: usize) -> Result<usize> {
        if self.squares[a].right != self.squares[b].left {
            return Err(Error::NotComposable(0));
        }
        self.sq_hcomp
            .get(&(a, b))
            .copied()
            .ok_or_else(|| Error::InvalidDouble("missing horizontal square composite".into()))
    }

    pub fn is_marked_vcell(&self, f: usize) -> bool {
        self.marking.as_ref().map(|m| m.vcells.contains(&f)).unwrap_or(false)
    }

    pub fn is_marked_square(&self, s: usize) -> bool {
        self.marking.as_ref().map(|m| m.squares.contains(&s)).unwrap_or(false)
    }

    pub fn forget_marking(&self) -> FiniteDoubleCat {
        let mut d = self.clone();
        d.marking = None;
        d
    }

    pub fn validate(&self) -> DoubleReport {
        let mut report = DoubleReport::default();

        for (i, e) in self.vcells.iter().enumerate() {
            if e.src >= self.objects.len() || e.tgt >= self.objects.len() {
                report.violations.push(format!("vcell {i} has out-of-range endpoints"));
            }
        }
        for (i, e) in self.hcells.iter().enumerate() {
            if e.src >= self.objects.len() || e.tgt >= self.objects.len() {
                report.violations.push(format!("hcell {i} has out-of-range endpoints"));
            }
        }
        // Square boundary compatibility.
        for (i, s) in self.squares.iter().enumerate() {
            let top = &self.hcells[s.top];
            let bottom = &self.hcells[s.bottom];
            let left = &self.vcells[s.left];
            let right = &self.vcells[s.right];
            if top.src != left.src
                || top.tgt != right.src
                || bottom.src != left.tgt
                || bottom.tgt != right.tgt
            {
                report
                    .violations
                    .push(format!("square {} has incompatible boundary", self.squares[i].name));
            }
        }
        // Vertical and horizontal 1-cell categories.
        self.check_edge_category(&self.vcells, &self.vcomp, &self.vid, "vertical", &mut report);
        self.check_edge_category(&self.hcells, &self.hcomp, &self.hid, "horizontal", &mut report);

        // Identity squares.
        for (u, s) in self.sq_vid.iter().enumerate() {
            let sq = &self.squares[*s];
            let e = &self.hcells[u];
            if sq.top != u
                || sq.bottom != u
                || sq.left != self.vid[e.src]
                || sq.right != self.vid[e.tgt]
            {
                report
                    .violations
                    .push(format!("vertical identity square of hcell {u} malformed"));
            }
        }
        for (f, s) in self.sq_hid.iter().enumerate() {
            let sq = &self.squares[*s];
            let e = &self.vcells[f];
            if sq.left != f
                || sq.right != f
                || sq.top != self.hid[e.src]
                || sq.bottom != self.hid[e.tgt]
            {
                report
                    .violations
                    .push(format!("horizontal unit square of vcell {f} malformed"));
            }
        }
        for a in 0..self.objects.len() {
            if self.sq_vid[self.hid[a]] != self.sq_hid[self.vid[a]] {
                report.violations.push(format!("unit squares disagree at object {a}"));
            }
        }

        // Square compositions: totality, boundaries, units, associativity.
        for a in 0..self.squares.len() {
            for b in 0..self.squares.len() {
                let stackable = self.squares[a].bottom == self.squares[b].top;
                match (stackable, self.sq_vcomp.get(&(a, b))) {
                    (true, None) => report
                        .violations
                        .push(format!("missing vertical composite ({a}, {b})")),
                    (false, Some(_)) => report
                        .violations
                        .push(format!("spurious vertical composite ({a}, {b})")),
                    (true, Some(z)) => {
                        let za = &self.squares[a];
                        let zb = &self.squares[b];
                        let z = &self.squares[*z];
                        let left = self.vcomp.get(&(za.left, zb.left));
                        let right = self.vcomp.get(&(za.right, zb.right));
                        if z.top != za.top
                            || z.bottom != zb.bottom
                            || Some(&z.left) != left
                            || Some(&z.right) != right
                        {
                            report.violations.push(format!(
                                "vertical composite ({a}, {b}) has wrong boundary"
                            ));
                        }
                    }
                    (false, None) => {}
                }
                let pasteable = self.squares[a].right == self.squares[b].left;
                match (pasteable, self.sq_hcomp.get(&(a, b))) {
                    (true, None) => report
                        .violations
                        .push(format!("missing horizontal composite ({a}, {b})")),
                    (false, Some(_)) => report
                        .violations
                        .push(format!("spurious horizontal composite ({a}, {b})")),
                    (true, Some(z)) => {
                        let za = &self.squares[a];
                        let zb = &self.squares[b];
                        let z = &self.squares[*z];
                        let top = self.hcomp.get(&(za.top, zb.top));
                        let bottom = self.hcomp.get(&(za.bottom, zb.bottom));
                        if Some(&z.top) != top
                            || Some(&z.bottom) != bottom
                            || z.left != za.left
                            || z.right != zb.right
                        {
                            report.violations.push(format!(
                                "horizontal composite ({a}, {b}) has wrong boundary"
                            ));
                        }
                    }
                    (false, None) => {}
                }
            }
        }
        for (s, sq) in self.squares.iter().enumerate() {
            if self.sq_vcomp.get(&(self.sq_vid[sq.top], s)) != Some(&s)
                || self.sq_vcomp.get(&(s, self.sq_vid[sq.bottom])) != Some(&s)
            {
                report
                    .violations
                    .push(format!("vertical unit law fails at square {}", sq.name));
            }
            if self.sq_hcomp.get(&(self.sq_hid[sq.left], s)) != Some(&s)
                || self.sq_hcomp.get(&(s, self.sq_hid[sq.right])) != Some(&s)
            {
                report
                    .violations
                    .push(format!("horizontal unit law fails at square {}", sq.name));
            }
        }
        for comp in [&self.sq_vcomp, &self.sq_hcomp] {
            for ((a, b), ab) in comp.iter() {
                for c in 0..self.squares.len() {
                    let bc = comp.get(&(*b, c));
                    let left = comp.get(&(*ab, c));
                    let right = bc.and_then(|bc| comp.get(&(*a, *bc)));
                    if bc.is_some() && left != right {
                        report
                            .violations
                            .push(format!("square associativity fails at ({a}, {b}, {c})"));
                    }
                }
            }
        }
        // Interchange: horizontal composition is functorial for vertical.
        for ((a, b), ab) in self.sq_hcomp.iter() {
            for ((c, d), cd) in self.sq_hcomp.iter() {
                if self.squares[*a].bottom != self.squares[*c].top
                    || self.squares[*b].bottom != self.squares[*d].top
                {
                    continue;
                }
                let ac = self.sq_vcomp.get(&(*a, *c));
                let bd = self.sq_vcomp.get(&(*b, *d));
                let lhs = self.sq_vcomp.get(&(*ab, *cd));
                let rhs = ac.zip(bd).and_then(|(ac, bd)| self.sq_hcomp.get(&(*ac, *bd)));
                if lhs.is_some() && lhs != rhs {
                    report
                        .violations
                        .push(format!("interchange fails at squares ({a}, {b}; {c}, {d})"));
                }
            }
        }
        // Units are functorial.
        for ((u, v), uv) in self.hcomp.iter() {
            let lhs = self.sq_hcomp.get(&(self.sq_vid[*u], self.sq_vid[*v]));
            if lhs != Some(&self.sq_vid[*uv]) {
                report
                    .violations
                    .push(format!("identity squares not functorial for hcomp at ({u}, {v})"));
            }
        }
        for ((f, g), fg) in self.vcomp.iter() {
            let lhs = self.sq_vcomp.get(&(self.sq_hid[*f], self.sq_hid[*g]));
            if lhs != Some(&self.sq_hid[*fg]) {
                report
                    .violations
                    .push(format!("unit squares not functorial for vcomp at ({f}, {g})"));
            }
        }
        // Marking closure.
        if let Some(marking) = &self.marking {
            for f in &self.vid {
                if !marking.vcells.contains(f) {
                    report.violations.push(format!("identity vcell {f} not marked"));
                }
            }
            for s in &self.sq_vid {
                if !marking.squares.contains(s) {
                    report.violations.push(format!("identity square {s} not marked"));
                }
            }
            for f in &marking.vcells {
                if !marking.squares.contains(&self.sq_hid[*f]) {
                    report
                        .violations
                        .push(format!("unit square of marked vcell {f} not marked"));
                }
            }
            for ((f, g), fg) in self.vcomp.iter() {
                if marking.vcells.contains(f)
                    && marking.vcells.contains(g)
                    && !marking.vcells.contains(fg)
                {
                    report.violations.push(format!(
                        "marked vcells not closed under composition at ({f}, {g})"
                    ));
                }
            }
            for comp in [&self.sq_vcomp, &self.sq_hcomp] {
                for ((a, b), ab) in comp.iter() {
                    if marking.squares.contains(a)
                        && marking.squares.contains(b)
                        && !marking.squares.contains(ab)
                    {
                        report.violations.push(format!(
                            "marked squares not closed under composition at ({a}, {b})"
                        ));
                    }
                }
            }
        }
        report
    }

    fn check_edge_category(
        &self,
        edges: &[EdgeData],
        comp: &BTreeMap<(usize, usize), usize>,
        ids: &[usize],
        kind: &str,
        report: &mut DoubleReport,
    ) {
        if ids.len() != self.objects.len() {
            report.violations.push(format!("{kind} identities have wrong length"));
            return;
        }
        for (a, id) in ids.iter().enumerate() {
            if edges[*id].src != a || edges[*id].tgt != a {
                report.violations.push(format!("{kind} identity of object {a} malformed"));
            }
        }
        for x in 0..edges.len() {
            for y in 0..edges.len() {
                let composable = edges[x].tgt == edges[y].src;
                match (composable, comp.get(&(x, y))) {
                    (true, None) => report
                        .violations
                        .push(format!("missing {kind} composite ({x}, {y})")),
                    (false, Some(_)) => report
                        .violations
                        .push(format!("spurious {kind} composite ({x}, {y})")),
                    (true, Some(z)) => {
                        if edges[*z].src != edges[x].src || edges[*z].tgt != edges[y].tgt {
                            report.violations.push(format!(
                                "{kind} composite ({x}, {y}) has wrong endpoints"
                            ));
                        }
                    }
                    (false, None) => {}
                }
            }
        }
        for (x, e) in edges.iter().enumerate() {
            if comp.get(&(ids[e.src], x)) != Some(&x) || comp.get(&(x, ids[e.tgt])) != Some(&x) {
                report.violations.push(format!("{kind} unit law fails at {x}"));
            }
        }
        for ((x, y), xy) in comp.iter() {
            for z in 0..edges.len() {
                if edges[*y].tgt != edges[z].src {
                    continue;
                }
                let yz = comp[&(*y, z)];
                if comp.get(&(*xy, z)) != comp.get(&(*x, yz)) {
                    report
                        .violations
                        .push(format!("{kind} associativity fails at ({x}, {y}, {z})"));
                }
            }
        }
    }

    /// All companion triples for a vertical cell, in deterministic order.
    pub fn find_companions(&self, f: usize) -> Vec<CompanionTriple> {
        let a = self.vcells[f].src;
        let b = self.vcells[f].tgt;
        let mut out = Vec::new();
        for (u, h) in self.hcells.iter().enumerate() {
            if h.src != a || h.tgt != b {
                continue;
            }
            for (psi, sq) in self.squares.iter().enumerate() {
                if sq.top != self.hid[a]
                    || sq.bottom != u
                    || sq.left != self.vid[a]
                    || sq.right != f
                {
                    continue;
                }
                for (phi, sq2) in self.squares.iter().enumerate() {
                    if sq2.top != u
                        || sq2.bottom != self.hid[b]
                        || sq2.left != f
                        || sq2.right != self.vid[b]
                    {
                        continue;
                    }
                    let horizontal = self.sq_hcomp.get(&(psi, phi));
                    let vertical = self.sq_vcomp.get(&(psi, phi));
                    if horizontal == Some(&self.sq_vid[u]) && vertical == Some(&self.sq_hid[f]) {
                        out.push(CompanionTriple { companion: u, unit: psi, counit: phi });
                    }
                }
            }
        }
        out
    }

    pub fn is_accompanied(&self) -> bool {
        (0..self.vcells.len()).all(|f| !self.find_companions(f).is_empty())
    }

    /// Companion data for `f then g` built from the displayed pastings, with
    /// the triangle identities re-verified before returning.
    pub fn companion_of_composite(
        &self,
        f: usize,
        fdata: &CompanionTriple,
        g: usize,
        gdata: &CompanionTriple,
    ) -> Result<CompanionTriple> {
        let fg = self.v_then(f, g)?;
        let companion = self.h_then(fdata.companion, gdata.companion)?;
        // ψ: stack ψ_f on top of (I^v_{f̄} | ψ_g).
        let tau = self.sq_then_h(self.sq_vid[fdata.companion], gdata.unit)?;
        let unit = self.sq_then_v(fdata.unit, tau)?;
        // φ: stack (φ_f | I^v_{ḡ}) on top of φ_g.
        let upsilon = self.sq_then_h(fdata.counit, self.sq_vid[gdata.companion])?;
        let counit = self.sq_then_v(upsilon, gdata.counit)?;
        let triple = CompanionTriple { companion, unit, counit };
        if self.sq_hcomp.get(&(unit, counit)) != Some(&self.sq_vid[companion])
            || self.sq_vcomp.get(&(unit, counit)) != Some(&self.sq_hid[fg])
        {
            return Err(Error::VerificationFailed(
                "composite companion fails the triangle identities".into(),
            ));
        }
        Ok(triple)
    }

    /// All cocartesian and cartesian lifts, over every horizontal cell and
    /// every companion triple of a matching vertical cell.
    pub fn all_lifts(&self) -> BTreeSet<usize> {
        let triples: Vec<Vec<CompanionTriple>> =
            (0..self.vcells.len()).map(|f| self.find_companions(f)).collect();
        let mut out = BTreeSet::new();
        for u in 0..self.hcells.len() {
            for (t, data) in triples.iter().enumerate() {
                for triple in data {
                    if self.vcells[t].src == self.hcells[u].tgt {
                        if let Ok(lift) = self.cocartesian_lift(u, triple) {
                            out.insert(lift);
                        }
                    }
                    if self.vcells[t].tgt == self.hcells[u].src {
                        if let Ok(lift) = self.cartesian_lift(u, triple) {
                            out.insert(lift);
                        }
                    }
                }
            }
        }
        out
    }

    /// Bicartesian squares: the closure of the cocartesian and cartesian
    /// lifts under vertical composition. (Horizontal unit squares of
    /// companionable cells show up as `ψ` stacked on `φ`.)
    pub fn bicartesian_set(&self) -> BTreeSet<usize> {
        let mut set = self.all_lifts();
        loop {
            let mut grew = false;
            let current: Vec<usize> = set.iter().copied().collect();
            for a in &current {
                for b in &current {
                    if let Some(z) = self.sq_vcomp.get(&(*a, *b)) {
                        if set.insert(*z) {
                            grew = true;
                        }
                    }
                }
            }
            if !grew {
                break;
            }
        }
        set
    }

    pub fn is_bicartesian(&self, alpha: usize) -> bool {
        self.bicartesian_set().contains(&alpha)
    }

    /// The literal one-row reading of the bicartesian shape: a single
    /// horizontal pasting `φ_s | I^v_u | ψ_t`. Narrower than the lift
    /// closure at the strict level (it cannot express horizontal units);
    /// kept so divergence between the two readings can be reported.
    pub fn single_pasting_bicartesian_set(&self) -> BTreeSet<usize> {
        let triples: Vec<Vec<CompanionTriple>> =
            (0..self.vcells.len()).map(|f| self.find_companions(f)).collect();
        let mut out = BTreeSet::new();
        for (alpha, sq) in self.squares.iter().enumerate() {
            let s_triples = &triples[sq.left];
            let t_triples = &triples[sq.right];
            'outer: for (u, h) in self.hcells.iter().enumerate() {
                if h.src != self.vcells[sq.left].tgt || h.tgt != self.vcells[sq.right].src {
                    continue;
                }
                for sdata in s_triples {
                    for tdata in t_triples {
                        let Ok(left) = self.sq_then_h(sdata.counit, self.sq_vid[u]) else {
                            continue;
                        };
                        let Ok(whole) = self.sq_then_h(left, tdata.unit) else { continue };
                        if whole == alpha {
                            out.insert(alpha);
                            break 'outer;
                        }
                    }
                }
            }
        }
        out
    }

    /// Squares on which the two bicartesian readings differ.
    pub fn bicartesian_reading_divergence(&self) -> Vec<usize> {
        let closure = self.bicartesian_set();
        let single = self.single_pasting_bicartesian_set();
        closure.symmetric_difference(&single).copied().collect()
    }

    /// The companionship marking: companionable vertical cells and
    /// bicartesian squares. Closure is verified.
    pub fn companion_marking(&self) -> Result<FiniteDoubleCat> {
        let vcells: BTreeSet<usize> =
            (0..self.vcells.len()).filter(|f| !self.find_companions(*f).is_empty()).collect();
        let squares = self.bicartesian_set();
        let mut out = self.clone();
        out.marking = Some(Marking { vcells, squares });
        let report = out.validate();
        if !report.is_valid() {
            return Err(Error::VerificationFailed(format!(
                "companion marking is not closed: {}",
                report.violations.join("; ")
            )));
        }
        Ok(out)
    }

    /// Cocartesian lift of `(u, id, t)`: the pasting `I^v_u | ψ_t`.
    pub fn cocartesian_lift(&self, u: usize, tdata: &CompanionTriple) -> Result<usize> {
        self.sq_then_h(self.sq_vid[u], tdata.unit)
    }

    /// Cartesian lift of `(u, s, id)`: the pasting `φ_s | I^v_u`.
    pub fn cartesian_lift(&self, u: usize, sdata: &CompanionTriple) -> Result<usize> {
        self.sq_then_h(sdata.counit, self.sq_vid[u])
    }

    /// Globular squares (identity vertical boundaries) between two hcells.
    pub fn globular_squares(&self, u: usize, v: usize) -> Vec<usize> {
        (0..self.squares.len())
            .filter(|s| {
                let sq = &self.squares[*s];
                sq.top == u
                    && sq.bottom == v
                    && sq.left == self.vid[self.hcells[u].src]
                    && sq.right == self.vid[self.hcells[u].tgt]
            })
            .collect()
    }

    /// Is a globular square invertible under vertical composition?
    pub fn is_invertible_globular(&self, s: usize) -> bool {
        let sq = &self.squares[s];
        self.globular_squares(sq.bottom, sq.top).iter().any(|t| {
            self.sq_vcomp.get(&(s, *t)) == Some(&self.sq_vid[sq.top])
                && self.sq_vcomp.get(&(*t, s)) == Some(&self.sq_vid[sq.bottom])
        })
    }
}

/// Unique-lift report for the two-sided-fibration conditions.
#[derive(Clone, Debug, Default)]
pub struct FibrationReport {
    pub failures: Vec<String>,
}

impl FibrationReport {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Check the finite lifting conditions making the marked span
/// `D₁ → D₀ × D₀` a two-sided fibration:
///
/// 1. every horizontal cell has a unique marked square out of it (resp. into
///    it) over a marked vertical cell on one side and an identity on the
///    other;
/// 2. every square extends uniquely by such a marked square on either end.
///
/// Requires a marking with every vertical cell marked.
pub fn check_two_sided_fibration(d: &FiniteDoubleCat) -> FibrationReport {
    let mut report = FibrationReport::default();
    let Some(marking) = &d.marking else {
        report.failures.push("no marking present".into());
        return report;
    };
    if marking.vcells.len() != d.vcells.len() {
        report.failures.push("D0 is not fully marked".into());
        return report;
    }
    let marked_squares: Vec<usize> = marking.squares.iter().copied().collect();

    let unique_lift = |from_top: bool,
                       u: usize,
                       left: usize,
                       right: usize|
     -> std::result::Result<usize, String> {
        let hits: Vec<usize> = marked_squares
            .iter()
            .copied()
            .filter(|s| {
                let sq = &d.squares[*s];
                let anchor = if from_top { sq.top } else { sq.bottom };
                anchor == u && sq.left == left && sq.right == right
            })
            .collect();
        match hits.len() {
            1 => Ok(hits[0]),
            0 => Err("no marked lift".into()),
            n => Err(format!("{n} marked lifts")),
        }
    };

    for (u, h) in d.hcells.iter().enumerate() {
        // (1a) cocartesian direction: identity on the source side.
        for t in 0..d.vcells.len() {
            if d.vcells[t].src != h.tgt {
                continue;
            }
            if let Err(e) = unique_lift(true, u, d.vid[h.src], t) {
                report
                    .failures
                    .push(format!("condition (1a) fails at hcell {u}, vcell {t}: {e}"));
            }
        }
        // (1b) cartesian direction: identity on the target side.
        for s in 0..d.vcells.len() {
            if d.vcells[s].tgt != h.src {
                continue;
            }
            if let Err(e) = unique_lift(false, u, s, d.vid[h.tgt]) {
                report
                    .failures
                    .push(format!("condition (1b) fails at hcell {u}, vcell {s}: {e}"));
            }
        }
    }
    // (2) extension problems along arbitrary squares.
    for (alpha, sq) in d.squares.iter().enumerate() {
        let bottom = &d.hcells[sq.bottom];
        for t in 0..d.vcells.len() {
            if d.vcells[t].src != bottom.tgt {
                continue;
            }
            if let Err(e) = unique_lift(true, sq.bottom, d.vid[bottom.src], t) {
                report
                    .failures
                    .push(format!("condition (2a) fails at square {alpha}, vcell {t}: {e}"));
            }
        }
        let top = &d.hcells[sq.top];
        for s in 0..d.vcells.len() {
            if d.vcells[s].tgt != top.src {
                continue;
            }
            if let Err(e) = unique_lift(false, sq.top, s, d.vid[top.tgt]) {
                report
                    .failures
                    .push(format!("condition (2b) fails at square {alpha}, vcell {s}: {e}"));
            }
        }
    }
    report
}

/// Extract companion triples from a marked instance passing the fibration
/// check: for every vertical cell, a marked unit/counit pair composing to
/// its unit square and satisfying the triangles.
pub fn companions_from_fibration(d: &FiniteDoubleCat) -> Result<Vec<(usize, CompanionTriple)>> {
    let Some(marking) = &d.marking else {
        return Err(Error::Precondition("no marking present".into()));
    };
    let mut out = Vec::new();
    for f in 0..d.vcells.len() {
        let a = d.vcells[f].src;
        let b = d.vcells[f].tgt;
        let mut found = None;
        'search: for psi in marking.squares.iter().copied() {
            let sp = &d.squares[psi];
            if sp.top != d.hid[a] || sp.left != d.vid[a] || sp.right != f {
                continue;
            }
            let u = sp.bottom;
            for phi in marking.squares.iter().copied() {
                let sq = &d.squares[phi];
                if sq.top != u || sq.bottom != d.hid[b] || sq.left != f || sq.right != d.vid[b] {
                    continue;
                }
                if d.sq_vcomp.get(&(psi, phi)) == Some(&d.sq_hid[f])
                    && d.sq_hcomp.get(&(psi, phi)) == Some(&d.sq_vid[u])
                {
                    found = Some(CompanionTriple { companion: u, unit: psi, counit: phi });
                    break 'search;
                }
            }
        }
        match found {
            Some(triple) => out.push((f, triple)),
            None => {
                return Err(Error::VerificationFailed(format!(
                    "no companion extracted for vcell {f}"
                )))
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Default)]
pub struct UniquenessReport {
    pub violations: Vec<String>,
}

impl UniquenessReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Desk form of contractibility of companionship data: any two triples for
/// `f` are related by a unique pair of mutually inverse globular squares
/// compatible with the units and counits.
pub fn companion_uniqueness_check(d: &FiniteDoubleCat, f: usize) -> UniquenessReport {
    let mut report = UniquenessReport::default();
    let triples = d.find_companions(f);
    for (i, t1) in triples.iter().enumerate() {
        for (j, t2) in triples.iter().enumerate() {
            if i == j {
                continue;
            }
            // Mediating square t1.companion ⇒ t2.companion.
            let theta12 = d.sq_hcomp.get(&(t2.unit, t1.counit)).copied();
            let theta21 = d.sq_hcomp.get(&(t1.unit, t2.counit)).copied();
            let (Some(theta12), Some(theta21)) = (theta12, theta21) else {
                report
                    .violations
                    .push(format!("mediating pastings undefined for triples {i}, {j}"));
                continue;
            };
            let ok = d.sq_vcomp.get(&(theta12, theta21)) == Some(&d.sq_vid[t1.companion])
                && d.sq_vcomp.get(&(theta21, theta12)) == Some(&d.sq_vid[t2.companion]);
            if !ok {
                report
                    .violations
                    .push(format!("mediating squares for triples {i}, {j} are not inverse"));
            }
            if d.sq_vcomp.get(&(t1.unit, theta12)) != Some(&t2.unit) {
                report
                    .violations
                    .push(format!("mediating square for {i}, {j} does not carry ψ₁ to ψ₂"));
            }
            if d.sq_vcomp.get(&(theta12, t2.counit)) != Some(&t1.counit) {
                report
                    .violations
                    .push(format!("mediating square for {i}, {j} does not carry φ₂ to φ₁"));
            }
            // Uniqueness among globular squares with the ψ-compatibility.
            let candidates: Vec<usize> = d
                .globular_squares(t1.companion, t2.companion)
                .into_iter()
                .filter(|s| d.sq_vcomp.get(&(t1.unit, *s)) == Some(&t2.unit))
                .collect();
            if candidates != vec![theta12] {
                report.violations.push(format!(
                    "mediating square for {i}, {j} is not unique ({} candidates)",
                    candidates.len()
                ));
            }
        }
    }
    report
}

/// Strict completeness surrogate:
/// (a) distinct vertical cells never share a companion;
/// (b) every mutually-inverse horizontal pair with invertible mediating
///     squares is an identity pair up to an invertible globular square.
pub fn is_complete(d: &FiniteDoubleCat) -> bool {
    // (a) injectivity of the companion assignment.
    let companions: Vec<BTreeSet<usize>> = (0..d.vcells.len())
        .map(|f| d.find_companions(f).into_iter().map(|t| t.companion).collect())
        .collect();
    for f in 0..d.vcells.len() {
        for g in (f + 1)..d.vcells.len() {
            if companions[f].intersection(&companions[g]).next().is_some() {
                return false;
            }
        }
    }
    // (b) internal equivalences are trivial.
    for (u, hu) in d.hcells.iter().enumerate() {
        for (v, hv) in d.hcells.iter().enumerate() {
            if hu.tgt != hv.src || hv.tgt != hu.src {
                continue;
            }
            let Ok(uv) = d.h_then(u, v) else { continue };
            let Ok(vu) = d.h_then(v, u) else { continue };
            let alpha_ok = d
                .globular_squares(uv, d.hid[hu.src])
                .into_iter()
                .any(|s| d.is_invertible_globular(s));
            let beta_ok = d
                .globular_squares(vu, d.hid[hv.src])
                .into_iter()
                .any(|s| d.is_invertible_globular(s));
            if alpha_ok && beta_ok {
                // (u, v) is an internal equivalence pair.
                let trivial = hu.src == hu.tgt
                    && d.globular_squares(u, d.hid[hu.src])
                        .into_iter()
                        .any(|s| d.is_invertible_globular(s));
                if !trivial {
                    return false;
                }
            }
        }
    }
    true
}

/// Is every horizontal cell the companion of some vertical cell?
pub fn every_horizontal_is_companion(d: &FiniteDoubleCat) -> bool {
    let mut companions: BTreeSet<usize> = BTreeSet::new();
    for f in 0..d.vcells.len() {
        companions.extend(d.find_companions(f).into_iter().map(|t| t.companion));
    }
    (0..d.hcells.len()).all(|u| companions.contains(&u))
}

/// The double category of commutative squares of a 1-category: vertical and
/// horizontal cells are the arrows, squares are boundary quadruples whose two
/// composites agree.
pub fn commutative_squares(cat: &FiniteStrictNCat) -> Result<FiniteDoubleCat> {
    if cat.max_dim() != 1 {
        return Err(Error::Precondition("commutative_squares needs a 1-category".into()));
    }
    let objects: Vec<String> = cat.cells(0).map(|o| cat.name(o).to_string()).collect();
    let edges: Vec<EdgeData> = cat
        .cells(1)
        .map(|u| EdgeData {
            name: cat.name(u).to_string(),
            src: cat.src(u).idx,
            tgt: cat.tgt(u).idx,
        })
        .collect();
    let mut comp = BTreeMap::new();
    for (i, dim, x, y, z) in cat.comp_entries() {
        if i == 0 && dim == 1 {
            comp.insert((x, y), z);
        }
    }
    let ids: Vec<usize> = cat.cells(0).map(|o| cat.identity(o).idx).collect();

    let mut squares = Vec::new();
    let mut square_index = BTreeMap::new();
    for (top, te) in edges.iter().enumerate() {
        for (left, le) in edges.iter().enumerate() {
            if le.src != te.src {
                continue;
            }
            for (right, re) in edges.iter().enumerate() {
                if re.src != te.tgt {
                    continue;
                }
                for (bottom, be) in edges.iter().enumerate() {
                    if be.src != le.tgt || be.tgt != re.tgt {
                        continue;
                    }
                    let via_top = comp[&(top, right)];
                    let via_left = comp[&(left, bottom)];
                    if via_top == via_left {
                        square_index.insert((top, bottom, left, right), squares.len());
                        squares.push(SquareData {
                            name: format!("<{top},{bottom};{left},{right}>"),
                            top,
                            bottom,
                            left,
                            right,
                        });
                    }
                }
            }
        }
    }
    let mut sq_vcomp = BTreeMap::new();
    let mut sq_hcomp = BTreeMap::new();
    for (a, sa) in squares.iter().enumerate() {
        for (b, sb) in squares.iter().enumerate() {
            if sa.bottom == sb.top {
                let left = comp[&(sa.left, sb.left)];
                let right = comp[&(sa.right, sb.right)];
                sq_vcomp.insert((a, b), square_index[&(sa.top, sb.bottom, left, right)]);
            }
            if sa.right == sb.left {
                let top = comp[&(sa.top, sb.top)];
                let bottom = comp[&(sa.bottom, sb.bottom)];
                sq_hcomp.insert((a, b), square_index[&(top, bottom, sa.left, sb.right)]);
            }
        }
    }
    let sq_vid: Vec<usize> = edges
        .iter()
        .enumerate()
        .map(|(u, e)| square_index[&(u, u, ids[e.src], ids[e.tgt])])
        .collect();
    let sq_hid: Vec<usize> = edges
        .iter()
        .enumerate()
        .map(|(f, e)| square_index[&(ids[e.src], ids[e.tgt], f, f)])
        .collect();
    Ok(FiniteDoubleCat {
        objects,
        vcells: edges.clone(),
        vcomp: comp.clone(),
        vid: ids.clone(),
        hcells: edges,
        hcomp: comp,
        hid: ids,
        squares,
        sq_vcomp,
        sq_hcomp,
        sq_vid,
        sq_hid,
        marking: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strictcat::poset_path;

    fn poset_squares() -> FiniteDoubleCat {
        commutative_squares(&poset_path(2)).unwrap()
    }

    #[test]
    fn commutative_squares_of_a_poset_are_valid() {
        let d = poset_squares();
        assert!(d.validate().is_valid(), "{:?}", d.validate().violations);
    }

    #[test]
    fn identity_vcell_has_the_unit_companion() {
        let d = poset_squares();
        for a in 0..d.num_objects() {
            let f = d.vid[a];
            let triples = d.find_companions(f);
            assert!(triples.iter().any(|t| t.companion == d.hid[a]
                && t.unit == d.sq_vid[d.hid[a]]
                && t.counit == d.sq_vid[d.hid[a]]));
        }
    }

    #[test]
    fn poset_squares_are_accompanied_and_complete() {
        let d = poset_squares();
        assert!(d.is_accompanied());
        assert!(is_complete(&d));
        assert!(every_horizontal_is_companion(&d));
    }

    #[test]
    fn composite_companions_match_brute_force() {
        let d = poset_squares();
        for f in 0..d.num_vcells() {
            for g in 0..d.num_vcells() {
                if d.vcells[f].tgt != d.vcells[g].src {
                    continue;
                }
                let fg = d.v_then(f, g).unwrap();
                let ft = &d.find_companions(f)[0];
                let gt = &d.find_companions(g)[0];
                let composite = d.companion_of_composite(f, ft, g, gt).unwrap();
                assert!(d.find_companions(fg).contains(&composite));
            }
        }
    }

    #[test]
    fn bicartesian_squares_and_lifts() {
        let d = poset_squares();
        let bicartesian = d.bicartesian_set();
        for f in 0..d.num_vcells() {
            assert!(bicartesian.contains(&d.sq_hid[f]));
        }
        for u in 0..d.num_hcells() {
            for t in 0..d.num_vcells() {
                if d.vcells[t].src != d.hcells[u].tgt {
                    continue;
                }
                let tdata = &d.find_companions(t)[0];
                let lift = d.cocartesian_lift(u, tdata).unwrap();
                assert!(bicartesian.contains(&lift));
                let same_boundary: Vec<usize> = (0..d.num_squares())
                    .filter(|s| {
                        let sq = &d.squares[*s];
                        sq.top == d.squares[lift].top
                            && sq.bottom == d.squares[lift].bottom
                            && sq.left == d.squares[lift].left
                            && sq.right == d.squares[lift].right
                            && bicartesian.contains(s)
                    })
                    .collect();
                assert_eq!(same_boundary, vec![lift]);
            }
        }
    }

    #[test]
    fn companion_marking_passes_fibration_check() {
        let d = poset_squares();
        let marked = d.companion_marking().unwrap();
        let report = check_two_sided_fibration(&marked);
        assert!(report.passes(), "{:?}", report.failures);
        let extracted = companions_from_fibration(&marked).unwrap();
        assert_eq!(extracted.len(), d.num_vcells());
        assert!(marked.forget_marking().is_accompanied());
    }

    #[test]
    fn trivially_marked_instance_fails_lifting() {
        let d = poset_squares();
        let mut marked = d.clone();
        // All vcells marked but only identity squares: lifts along
        // non-identity vcells are missing.
        marked.marking = Some(Marking {
            vcells: (0..d.num_vcells()).collect(),
            squares: d.sq_vid.iter().copied().collect(),
        });
        let report = check_two_sided_fibration(&marked);
        assert!(!report.passes());
    }

    #[test]
    fn vertical_only_double_category_has_no_companions() {
        let objects = vec!["a".to_string(), "b".to_string()];
        let vcells = vec![
            EdgeData { name: "ida".into(), src: 0, tgt: 0 },
            EdgeData { name: "idb".into(), src: 1, tgt: 1 },
            EdgeData { name: "w".into(), src: 0, tgt: 1 },
        ];
        let mut vcomp = BTreeMap::new();
        for (x, y, z) in [(0, 0, 0), (1, 1, 1), (0, 2, 2), (2, 1, 2)] {
            vcomp.insert((x, y), z);
        }
        let hcells = vec![
            EdgeData { name: "Ia".into(), src: 0, tgt: 0 },
            EdgeData { name: "Ib".into(), src: 1, tgt: 1 },
        ];
        let mut hcomp = BTreeMap::new();
        hcomp.insert((0, 0), 0);
        hcomp.insert((1, 1), 1);
        let squares = vec![
            SquareData { name: "I(Ia)".into(), top: 0, bottom: 0, left: 0, right: 0 },
            SquareData { name: "I(Ib)".into(), top: 1, bottom: 1, left: 1, right: 1 },
            SquareData { name: "I(w)".into(), top: 0, bottom: 1, left: 2, right: 2 },
        ];
        let mut sq_vcomp = BTreeMap::new();
        for (a, b, z) in [(0, 0, 0), (1, 1, 1), (0, 2, 2), (2, 1, 2)] {
            sq_vcomp.insert((a, b), z);
        }
        let mut sq_hcomp = BTreeMap::new();
        for (a, b, z) in [(0, 0, 0), (1, 1, 1), (2, 2, 2)] {
            sq_hcomp.insert((a, b), z);
        }
        let d = FiniteDoubleCat {
            objects,
            vcells,
            vcomp,
            vid: vec![0, 1],
            hcells,
            hcomp,
            hid: vec![0, 1],
            squares,
            sq_vcomp,
            sq_hcomp,
            sq_vid: vec![0, 1],
            sq_hid: vec![0, 1, 2],
            marking: None,
        };
        assert!(d.validate().is_valid(), "{:?}", d.validate().violations);
        assert!(d.find_companions(2).is_empty());
        assert!(!d.is_accompanied());
    }

    #[test]
    fn uniqueness_report_passes_on_poset_squares() {
        let d = poset_squares();
        for f in 0..d.num_vcells() {
            let report = companion_uniqueness_check(&d, f);
            assert!(report.passes(), "{:?}", report.violations);
        }
    }
}

#[cfg(test)]
mod more_tests {
    use super::*;
    use crate::strictcat::CatBuilder;

    #[test]
    fn composite_companions_associate_on_triples() {
        let d = commutative_squares(&crate::strictcat::poset_path(2)).unwrap();
        for f in 0..d.num_vcells() {
            for g in 0..d.num_vcells() {
                if d.vcells[f].tgt != d.vcells[g].src {
                    continue;
                }
                for h in 0..d.num_vcells() {
                    if d.vcells[g].tgt != d.vcells[h].src {
                        continue;
                    }
                    let tf = d.find_companions(f)[0];
                    let tg = d.find_companions(g)[0];
                    let th = d.find_companions(h)[0];
                    let fg = d.companion_of_composite(f, &tf, g, &tg).unwrap();
                    let gh = d.companion_of_composite(g, &tg, h, &th).unwrap();
                    let left = d
                        .companion_of_composite(d.v_then(f, g).unwrap(), &fg, h, &th)
                        .unwrap();
                    let right = d
                        .companion_of_composite(f, &tf, d.v_then(g, h).unwrap(), &gh)
                        .unwrap();
                    assert_eq!(left.companion, right.companion);
                }
            }
        }
    }

    #[test]
    fn fully_marked_codiscrete_double_category_is_a_fibration() {
        // The codiscrete 1-category on two objects: a unique arrow between
        // any ordered pair.
        let mut b = CatBuilder::new(1).unwrap();
        b.add_object("x");
        b.add_object("y");
        let mut arrows = std::collections::BTreeMap::new();
        for s in 0..2 {
            for t in 0..2 {
                arrows.insert((s, t), b.add_cell(1, format!("{s}->{t}"), s, t));
            }
        }
        for o in 0..2 {
            b.set_identity(0, o, arrows[&(o, o)]);
        }
        for s in 0..2 {
            for m in 0..2 {
                for t in 0..2 {
                    b.set_comp(0, 1, arrows[&(s, m)], arrows[&(m, t)], arrows[&(s, t)]);
                }
            }
        }
        let codiscrete = b.finish().unwrap();
        assert!(codiscrete.validate().is_valid());
        let mut d = commutative_squares(&codiscrete).unwrap();
        assert!(d.validate().is_valid());
        d.marking = Some(Marking {
            vcells: (0..d.num_vcells()).collect(),
            squares: (0..d.num_squares()).collect(),
        });
        assert!(d.validate().is_valid());
        let report = check_two_sided_fibration(&d);
        assert!(report.passes(), "{:?}", report.failures);
    }
}

#[cfg(test)]
mod corruption_tests {
    use super::*;

    #[test]
    fn broken_square_table_is_reported() {
        let mut d =
            commutative_squares(&crate::strictcat::poset_path(2)).unwrap();
        let key = *d
            .sq_hcomp
            .keys()
            .find(|(a, b)| a != b && !d.sq_vid.contains(a) && !d.sq_vid.contains(b))
            .unwrap();
        let z = d.sq_hcomp[&key];
        let other = (0..d.num_squares()).find(|s| *s != z).unwrap();
        d.sq_hcomp.insert(key, other);
        assert!(!d.validate().is_valid());
    }
}
