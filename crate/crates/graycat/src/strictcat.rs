//! Finite strict n-categories (n ≤ 3) with full composition tables.
//!
//! Cells are indexed per dimension; sources, targets and identities are
//! stored one level at a time, and `comp` holds every same-dimension
//! `∘_i`-composite. Mixed-dimension composition goes through identity
//! raising. `validate` checks the whole axiom list exhaustively —
//! globularity, units, associativity, interchange, boundary/identity
//! functoriality — and reports violations instead of failing.

use std::collections::BTreeMap;

use crate::adc::Adc;
use crate::nu::{nu_cells, nu_compose, NuCell, NuConfig};
use crate::{Error, Result};

pub const MAX_SUPPORTED_DIM: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub dim: usize,
    pub idx: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteStrictNCat {
    max_dim: usize,
    names: Vec<Vec<String>>,
    src: Vec<Vec<usize>>,
    tgt: Vec<Vec<usize>>,
    ident: Vec<Vec<usize>>,
    comp: BTreeMap<(usize, usize, usize, usize), usize>,
    /// For each positive-dimension cell: the lower cell it is the identity of.
    id_origin: Vec<Vec<Option<usize>>>,
}

#[derive(Clone, Debug, Default)]
pub struct CatReport {
    pub violations: Vec<String>,
}

impl CatReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub struct CatBuilder {
    max_dim: usize,
    names: Vec<Vec<String>>,
    src: Vec<Vec<usize>>,
    tgt: Vec<Vec<usize>>,
    ident: Vec<Vec<Option<usize>>>,
    comp: BTreeMap<(usize, usize, usize, usize), usize>,
}

impl CatBuilder {
    pub fn new(max_dim: usize) -> Result<CatBuilder> {
        if max_dim > MAX_SUPPORTED_DIM {
            return Err(Error::DimensionTooHigh(max_dim, MAX_SUPPORTED_DIM));
        }
        Ok(CatBuilder {
            max_dim,
            names: vec![Vec::new(); max_dim + 1],
            src: vec![Vec::new(); max_dim + 1],
            tgt: vec![Vec::new(); max_dim + 1],
            ident: vec![Vec::new(); max_dim + 1],
            comp: BTreeMap::new(),
        })
    }

    pub fn add_object(&mut self, name: impl Into<String>) -> usize {
        self.names[0].push(name.into());
        self.ident[0].push(None);
        self.names[0].len() - 1
    }

    pub fn add_cell(
        &mut self,
        dim: usize,
        name: impl Into<String>,
        src: usize,
        tgt: usize,
    ) -> usize {
        assert!(dim >= 1 && dim <= self.max_dim);
        self.names[dim].push(name.into());
        self.src[dim].push(src);
        self.tgt[dim].push(tgt);
        self.ident[dim].push(None);
        self.names[dim].len() - 1
    }

    pub fn set_identity(&mut self, dim: usize, idx: usize, id_idx: usize) {
        self.ident[dim][idx] = Some(id_idx);
    }

    pub fn set_comp(&mut self, i: usize, dim: usize, x: usize, y: usize, z: usize) {
        self.comp.insert((i, dim, x, y), z);
    }

    pub fn finish(self) -> Result<FiniteStrictNCat> {
        let mut ident = Vec::with_capacity(self.max_dim + 1);
        for d in 0..=self.max_dim {
            if d < self.max_dim {
                let mut level = Vec::with_capacity(self.names[d].len());
                for (i, entry) in self.ident[d].iter().enumerate() {
                    let id_idx = entry.ok_or_else(|| {
                        Error::InvalidCategory(format!(
                            "missing identity for {}-cell {}",
                            d, self.names[d][i]
                        ))
                    })?;
                    level.push(id_idx);
                }
                ident.push(level);
            } else {
                ident.push(Vec::new());
            }
        }
        let mut id_origin: Vec<Vec<Option<usize>>> =
            self.names.iter().map(|level| vec![None; level.len()]).collect();
        for d in 0..self.max_dim {
            for (low, up) in ident[d].iter().enumerate() {
                if *up >= self.names[d + 1].len() {
                    return Err(Error::InvalidCategory(format!(
                        "identity index out of range at dimension {d}"
                    )));
                }
                id_origin[d + 1][*up] = Some(low);
            }
        }
        for d in 1..=self.max_dim {
            for idx in 0..self.names[d].len() {
                if self.src[d][idx] >= self.names[d - 1].len()
                    || self.tgt[d][idx] >= self.names[d - 1].len()
                {
                    return Err(Error::InvalidCategory(format!(
                        "boundary index out of range for {}-cell {}",
                        d, self.names[d][idx]
                    )));
                }
            }
        }
        Ok(FiniteStrictNCat {
            max_dim: self.max_dim,
            names: self.names,
            src: self.src,
            tgt: self.tgt,
            ident,
            comp: self.comp,
            id_origin,
        })
    }
}

impl FiniteStrictNCat {
    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn num_cells(&self, dim: usize) -> usize {
        if dim <= self.max_dim {
            self.names[dim].len()
        } else {
            0
        }
    }

    pub fn total_cells(&self) -> usize {
        self.names.iter().map(|l| l.len()).sum()
    }

    pub fn cells(&self, dim: usize) -> impl Iterator<Item = Cell> + '_ {
        (0..self.num_cells(dim)).map(move |idx| Cell { dim, idx })
    }

    pub fn name(&self, cell: Cell) -> &str {
        &self.names[cell.dim][cell.idx]
    }

    pub fn find_by_name(&self, dim: usize, name: &str) -> Option<Cell> {
        self.names[dim].iter().position(|n| n == name).map(|idx| Cell { dim, idx })
    }

    pub fn src(&self, cell: Cell) -> Cell {
        assert!(cell.dim >= 1);
        Cell { dim: cell.dim - 1, idx: self.src[cell.dim][cell.idx] }
    }

    pub fn tgt(&self, cell: Cell) -> Cell {
        assert!(cell.dim >= 1);
        Cell { dim: cell.dim - 1, idx: self.tgt[cell.dim][cell.idx] }
    }

    pub fn src_k(&self, cell: Cell, k: usize) -> Cell {
        let mut c = cell;
        while c.dim > k {
            c = self.src(c);
        }
        c
    }

    pub fn tgt_k(&self, cell: Cell, k: usize) -> Cell {
        let mut c = cell;
        while c.dim > k {
            c = self.tgt(c);
        }
        c
    }

    pub fn identity(&self, cell: Cell) -> Cell {
        assert!(cell.dim < self.max_dim);
        Cell { dim: cell.dim + 1, idx: self.ident[cell.dim][cell.idx] }
    }

    pub fn raise(&self, cell: Cell, dim: usize) -> Cell {
        let mut c = cell;
        while c.dim < dim {
            c = self.identity(c);
        }
        c
    }

    pub fn id_origin(&self, cell: Cell) -> Option<Cell> {
        if cell.dim == 0 {
            return None;
        }
        self.id_origin[cell.dim][cell.idx].map(|idx| Cell { dim: cell.dim - 1, idx })
    }

    pub fn is_identity(&self, cell: Cell) -> bool {
        self.id_origin(cell).is_some()
    }

    /// Lowest cell this one is an iterated identity of.
    pub fn degenerate_origin(&self, cell: Cell) -> Cell {
        let mut c = cell;
        while let Some(lower) = self.id_origin(c) {
            c = lower;
        }
        c
    }

    pub fn composable(&self, i: usize, x: Cell, y: Cell) -> bool {
        let dim = x.dim.max(y.dim);
        i < dim && self.tgt_k(x, i) == self.src_k(y, i)
    }

    /// `x ∘_i y` in diagrammatic order (`x` then `y`).
    pub fn compose(&self, i: usize, x: Cell, y: Cell) -> Result<Cell> {
        let dim = x.dim.max(y.dim);
        if !self.composable(i, x, y) {
            return Err(Error::NotComposable(i));
        }
        let xr = self.raise(x, dim);
        let yr = self.raise(y, dim);
        self.comp
            .get(&(i, dim, xr.idx, yr.idx))
            .map(|z| Cell { dim, idx: *z })
            .ok_or_else(|| {
                Error::InvalidCategory(format!(
                    "missing composite {} ∘_{i} {}",
                    self.name(xr),
                    self.name(yr)
                ))
            })
    }

    pub fn comp_entries(&self) -> impl Iterator<Item = (usize, usize, usize, usize, usize)> + '_ {
        self.comp.iter().map(|((i, d, x, y), z)| (*i, *d, *x, *y, *z))
    }

    /// Strict invertibility along `∘_{dim−1}`.
    pub fn is_invertible(&self, cell: Cell) -> bool {
        self.inverse_of(cell).is_some()
    }

    pub fn inverse_of(&self, cell: Cell) -> Option<Cell> {
        if cell.dim == 0 {
            return None;
        }
        let i = cell.dim - 1;
        let s = self.src(cell);
        let t = self.tgt(cell);
        let id_s = Cell { dim: cell.dim, idx: self.ident[s.dim][s.idx] };
        let id_t = Cell { dim: cell.dim, idx: self.ident[t.dim][t.idx] };
        for cand in self.cells(cell.dim) {
            if self.src(cand) != t || self.tgt(cand) != s {
                continue;
            }
            let fwd = self.compose(i, cell, cand).ok();
            let bwd = self.compose(i, cand, cell).ok();
            if fwd == Some(id_s) && bwd == Some(id_t) {
                return Some(cand);
            }
        }
        None
    }

    /// Is there a strictly invertible `(d+1)`-cell from `x` to `y`?
    pub fn iso_cells(&self, x: Cell, y: Cell) -> bool {
        if x == y {
            return true;
        }
        if x.dim != y.dim || x.dim >= self.max_dim {
            return false;
        }
        self.cells(x.dim + 1)
            .any(|u| self.src(u) == x && self.tgt(u) == y && self.is_invertible(u))
    }

    fn iso_or_equal(&self, x: Cell, y: Cell) -> bool {
        if x.dim >= self.max_dim() {
            x == y
        } else {
            self.iso_cells(x, y)
        }
    }

    pub fn validate(&self) -> CatReport {
        let mut report = CatReport::default();

        // Globularity.
        for d in 2..=self.max_dim {
            for x in self.cells(d) {
                if self.src(self.src(x)) != self.src(self.tgt(x))
                    || self.tgt(self.src(x)) != self.tgt(self.tgt(x))
                {
                    report.violations.push(format!("globularity fails at {}", self.name(x)));
                }
            }
        }
        // Identity boundaries.
        for d in 0..self.max_dim {
            for x in self.cells(d) {
                let id = self.identity(x);
                if self.src(id) != x || self.tgt(id) != x {
                    report
                        .violations
                        .push(format!("identity of {} has wrong boundary", self.name(x)));
                }
            }
        }
        // Composition tables: totality, boundaries, units, associativity.
        for d in 1..=self.max_dim {
            for i in 0..d {
                for x in self.cells(d) {
                    for y in self.cells(d) {
                        let composable = self.tgt_k(x, i) == self.src_k(y, i);
                        let entry = self.comp.get(&(i, d, x.idx, y.idx));
                        match (composable, entry) {
                            (true, None) => report.violations.push(format!(
                                "missing ∘_{i} entry for ({}, {})",
                                self.name(x),
                                self.name(y)
                            )),
                            (false, Some(_)) => report.violations.push(format!(
                                "spurious ∘_{i} entry for non-composable ({}, {})",
                                self.name(x),
                                self.name(y)
                            )),
                            (true, Some(z)) => {
                                let z = Cell { dim: d, idx: *z };
                                let expected = if i == d - 1 {
                                    Some((self.src(x), self.tgt(y)))
                                } else {
                                    let zs = self.compose(i, self.src(x), self.src(y)).ok();
                                    let zt = self.compose(i, self.tgt(x), self.tgt(y)).ok();
                                    zs.zip(zt)
                                };
                                if expected != Some((self.src(z), self.tgt(z))) {
                                    report.violations.push(format!(
                                        "composite {} ∘_{i} {} has wrong boundary",
                                        self.name(x),
                                        self.name(y)
                                    ));
                                }
                            }
                            (false, None) => {}
                        }
                    }
                }
                for x in self.cells(d) {
                    let left = self.raise(self.src_k(x, i), d);
                    let right = self.raise(self.tgt_k(x, i), d);
                    if self.compose(i, left, x).ok() != Some(x) {
                        report
                            .violations
                            .push(format!("left unit law fails for {} at ∘_{i}", self.name(x)));
                    }
                    if self.compose(i, x, right).ok() != Some(x) {
                        report
                            .violations
                            .push(format!("right unit law fails for {} at ∘_{i}", self.name(x)));
                    }
                }
                for x in self.cells(d) {
                    for y in self.cells(d) {
                        if self.tgt_k(x, i) != self.src_k(y, i) {
                            continue;
                        }
                        let xy = self.compose(i, x, y).ok();
                        for z in self.cells(d) {
                            if self.tgt_k(y, i) != self.src_k(z, i) {
                                continue;
                            }
                            let yz = self.compose(i, y, z).ok();
                            let left = xy.and_then(|xy| self.compose(i, xy, z).ok());
                            let right = yz.and_then(|yz| self.compose(i, x, yz).ok());
                            if left != right {
                                report.violations.push(format!(
                                    "associativity fails at ({}, {}, {}) for ∘_{i}",
                                    self.name(x),
                                    self.name(y),
                                    self.name(z)
                                ));
                            }
                        }
                    }
                }
            }
        }
        // Interchange.
        for d in 2..=self.max_dim {
            for i in 0..d {
                for j in (i + 1)..d {
                    for a in self.cells(d) {
                        for b in self.cells(d) {
                            if self.tgt_k(a, i) != self.src_k(b, i) {
                                continue;
                            }
                            for c in self.cells(d) {
                                if self.tgt_k(a, j) != self.src_k(c, j) {
                                    continue;
                                }
                                for e in self.cells(d) {
                                    if self.tgt_k(b, j) != self.src_k(e, j)
                                        || self.tgt_k(c, i) != self.src_k(e, i)
                                    {
                                        continue;
                                    }
                                    let lhs = self
                                        .compose(i, a, b)
                                        .and_then(|ab| {
                                            let ce = self.compose(i, c, e)?;
                                            self.compose(j, ab, ce)
                                        })
                                        .ok();
                                    let rhs = self
                                        .compose(j, a, c)
                                        .and_then(|ac| {
                                            let be = self.compose(j, b, e)?;
                                            self.compose(i, ac, be)
                                        })
                                        .ok();
                                    if let (Some(l), Some(r)) = (lhs, rhs) {
                                        if l != r {
                                            report.violations.push(format!(
                                                "interchange fails at ({}, {}, {}, {})",
                                                self.name(a),
                                                self.name(b),
                                                self.name(c),
                                                self.name(e)
                                            ));
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        // Identities are functorial for composition.
        for d in 1..self.max_dim {
            let entries: Vec<_> = self
                .comp
                .iter()
                .filter(|((_, dim, _, _), _)| *dim == d)
                .map(|((i, _, x, y), z)| (*i, *x, *y, *z))
                .collect();
            for (i, x, y, z) in entries {
                let idx = self.ident[d][x];
                let idy = self.ident[d][y];
                let idz = self.ident[d][z];
                if self.comp.get(&(i, d + 1, idx, idy)) != Some(&idz) {
                    report
                        .violations
                        .push(format!("identities not functorial at ∘_{i} of dimension {d}"));
                }
            }
        }
        report
    }

    /// The terminal category, padded to `max_dim`.
    pub fn terminal(max_dim: usize) -> FiniteStrictNCat {
        let mut b = CatBuilder::new(max_dim).unwrap();
        b.add_object("*");
        for d in 1..=max_dim {
            b.add_cell(d, format!("1^{d}(*)"), 0, 0);
        }
        for d in 0..max_dim {
            b.set_identity(d, 0, 0);
        }
        for d in 1..=max_dim {
            for i in 0..d {
                b.set_comp(i, d, 0, 0, 0);
            }
        }
        b.finish().unwrap()
    }

    /// View a category as one of higher dimension by adding identity cells.
    pub fn as_dim(&self, m: usize) -> Result<FiniteStrictNCat> {
        if m > MAX_SUPPORTED_DIM {
            return Err(Error::DimensionTooHigh(m, MAX_SUPPORTED_DIM));
        }
        if m < self.max_dim {
            return Err(Error::Precondition(
                "as_dim cannot lower the dimension; use truncate".into(),
            ));
        }
        let mut cat = self.clone();
        while cat.max_dim < m {
            let d = cat.max_dim;
            let count = cat.names[d].len();
            cat.names.push((0..count).map(|i| format!("1({})", cat.names[d][i])).collect());
            cat.src.push((0..count).collect());
            cat.tgt.push((0..count).collect());
            cat.ident[d] = (0..count).collect();
            cat.ident.push(Vec::new());
            cat.id_origin.push((0..count).map(Some).collect());
            let lower: Vec<_> = cat
                .comp
                .iter()
                .filter(|((_, dim, _, _), _)| *dim == d)
                .map(|((i, _, x, y), z)| (*i, *x, *y, *z))
                .collect();
            for (i, x, y, z) in lower {
                cat.comp.insert((i, d + 1, x, y), z);
            }
            for x in 0..count {
                cat.comp.insert((d, d + 1, x, x), x);
            }
            cat.max_dim += 1;
        }
        Ok(cat)
    }

    /// Forget all cells above dimension `k`.
    pub fn truncate(&self, k: usize) -> FiniteStrictNCat {
        let k = k.min(self.max_dim);
        let mut cat = self.clone();
        cat.max_dim = k;
        cat.names.truncate(k + 1);
        cat.src.truncate(k + 1);
        cat.tgt.truncate(k + 1);
        cat.ident.truncate(k + 1);
        if k < self.max_dim {
            cat.ident[k] = Vec::new();
        }
        cat.id_origin.truncate(k + 1);
        cat.comp.retain(|(_, dim, _, _), _| *dim <= k);
        cat
    }

    fn top_congruence(&self, k: usize) -> (Vec<usize>, Vec<usize>) {
        let n = self.num_cells(k);
        let mut uf: Vec<usize> = (0..n).collect();
        fn root(uf: &mut [usize], mut i: usize) -> usize {
            while uf[i] != i {
                uf[i] = uf[uf[i]];
                i = uf[i];
            }
            i
        }
        for u in self.cells(k + 1) {
            let a = root(&mut uf, self.src(u).idx);
            let b = root(&mut uf, self.tgt(u).idx);
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            uf[hi] = lo;
        }
        let mut reps: Vec<usize> = Vec::new();
        for i in 0..n {
            if root(&mut uf, i) == i {
                reps.push(i);
            }
        }
        let mut class_of = vec![0usize; n];
        for (i, entry) in class_of.iter_mut().enumerate() {
            let r = root(&mut uf, i);
            *entry = reps.iter().position(|rep| *rep == r).unwrap();
        }
        (class_of, reps)
    }

    /// Intelligent truncation: quotient `k`-cells by the zig-zag congruence
    /// generated by `(k+1)`-cells; compositions must descend (checked).
    pub fn itruncate(&self, k: usize) -> Result<FiniteStrictNCat> {
        if k >= self.max_dim {
            return Err(Error::Precondition("itruncate needs k < max_dim".into()));
        }
        let n = self.num_cells(k);
        let (class_of, reps) = self.top_congruence(k);
        // Members of a class are parallel (zig-zags preserve boundaries).
        for i in 0..n {
            let rep = reps[class_of[i]];
            if k >= 1 {
                let ci = Cell { dim: k, idx: i };
                let cr = Cell { dim: k, idx: rep };
                if self.src(ci) != self.src(cr) || self.tgt(ci) != self.tgt(cr) {
                    return Err(Error::InvalidCategory(
                        "itruncate congruence identifies non-parallel cells".into(),
                    ));
                }
            }
        }
        let truncated = self.truncate(k);
        let mut cat = truncated.clone();
        cat.names[k] = reps.iter().map(|r| truncated.names[k][*r].clone()).collect();
        if k >= 1 {
            cat.src[k] = reps.iter().map(|r| truncated.src[k][*r]).collect();
            cat.tgt[k] = reps.iter().map(|r| truncated.tgt[k][*r]).collect();
            cat.ident[k - 1] =
                truncated.ident[k - 1].iter().map(|up| class_of[*up]).collect();
        }
        cat.id_origin[k] = reps
            .iter()
            .enumerate()
            .map(|(cls, _)| {
                (0..n)
                    .filter(|i| class_of[*i] == cls)
                    .find_map(|i| truncated.id_origin[k][i])
            })
            .collect();
        let mut new_comp: BTreeMap<(usize, usize, usize, usize), usize> = BTreeMap::new();
        for ((i, dim, x, y), z) in truncated.comp.iter() {
            if *dim < k {
                new_comp.insert((*i, *dim, *x, *y), *z);
                continue;
            }
            let key = (*i, k, class_of[*x], class_of[*y]);
            let val = class_of[*z];
            if let Some(prev) = new_comp.insert(key, val) {
                if prev != val {
                    return Err(Error::InvalidCategory(
                        "itruncate congruence does not respect composition".into(),
                    ));
                }
            }
        }
        cat.comp = new_comp;
        Ok(cat)
    }

    /// The canonical quotient functor `truncate(k) → itruncate(k)`.
    pub fn itruncate_unit(&self, k: usize) -> Result<(FiniteStrictNCat, CatFunctor)> {
        let quotient = self.itruncate(k)?;
        let truncated = self.truncate(k);
        let (class_of, _) = self.top_congruence(k);
        let mut maps: Vec<Vec<usize>> = Vec::new();
        for d in 0..k {
            maps.push((0..truncated.num_cells(d)).collect());
        }
        maps.push(class_of);
        let functor = CatFunctor { maps };
        functor.validate(&truncated, &quotient)?;
        Ok((quotient, functor))
    }
}

/// Build a finite strict n-category out of the cells of ν(K).
pub struct NuCategory {
    pub cat: FiniteStrictNCat,
    pub cells: Vec<Vec<NuCell>>,
}

pub fn from_nu(adc: &Adc, max_dim: usize, config: &NuConfig) -> Result<NuCategory> {
    if max_dim > MAX_SUPPORTED_DIM {
        return Err(Error::DimensionTooHigh(max_dim, MAX_SUPPORTED_DIM));
    }
    let all = nu_cells(adc, max_dim, config)?;
    let mut cells: Vec<Vec<NuCell>> = vec![Vec::new(); max_dim + 1];
    for cell in all {
        cells[cell.dim()].push(cell);
    }
    let index: Vec<BTreeMap<&NuCell, usize>> = cells
        .iter()
        .map(|level| level.iter().enumerate().map(|(i, c)| (c, i)).collect())
        .collect();

    let mut builder = CatBuilder::new(max_dim)?;
    for i in 0..cells[0].len() {
        builder.add_object(format!("c0_{i}"));
    }
    for d in 1..=max_dim {
        for (i, cell) in cells[d].iter().enumerate() {
            let s = index[d - 1][&cell.source(d - 1)];
            let t = index[d - 1][&cell.target(d - 1)];
            builder.add_cell(d, format!("c{d}_{i}"), s, t);
        }
    }
    for d in 0..max_dim {
        for (i, cell) in cells[d].iter().enumerate() {
            let up = cell.identity(adc);
            let idx = *index[d + 1].get(&&up).ok_or_else(|| {
                Error::InvalidCategory("identity cell missing from enumeration".into())
            })?;
            builder.set_identity(d, i, idx);
        }
    }
    for d in 1..=max_dim {
        for i in 0..d {
            for (xi, x) in cells[d].iter().enumerate() {
                for (yi, y) in cells[d].iter().enumerate() {
                    let composable = (0..i).all(|j| x.level(j) == y.level(j))
                        && x.level(i).1 == y.level(i).0;
                    if !composable {
                        continue;
                    }
                    let z = nu_compose(adc, x, y, i)?;
                    let zi = *index[d].get(&&z).ok_or_else(|| {
                        Error::BudgetExceeded(
                            "composite escapes the enumerated cell set (raise the coefficient cap)"
                                .into(),
                        )
                    })?;
                    builder.set_comp(i, d, xi, yi, zi);
                }
            }
        }
    }
    Ok(NuCategory { cat: builder.finish()?, cells })
}

/// A cellwise functor, stored as per-dimension index maps.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CatFunctor {
    pub maps: Vec<Vec<usize>>,
}

impl CatFunctor {
    pub fn identity(c: &FiniteStrictNCat) -> CatFunctor {
        CatFunctor {
            maps: (0..=c.max_dim()).map(|d| (0..c.num_cells(d)).collect()).collect(),
        }
    }

    pub fn apply(&self, cell: Cell) -> Cell {
        Cell { dim: cell.dim, idx: self.maps[cell.dim][cell.idx] }
    }

    /// `self` then `other`.
    pub fn then(&self, other: &CatFunctor) -> CatFunctor {
        CatFunctor {
            maps: self
                .maps
                .iter()
                .enumerate()
                .map(|(d, level)| level.iter().map(|i| other.maps[d][*i]).collect())
                .collect(),
        }
    }

    /// Full functor-axiom check: boundaries, identities, all composites.
    pub fn validate(&self, c: &FiniteStrictNCat, d: &FiniteStrictNCat) -> Result<()> {
        if self.maps.len() != c.max_dim() + 1 {
            return Err(Error::InvalidCategory("functor has wrong depth".into()));
        }
        if c.max_dim() != d.max_dim() {
            return Err(Error::Precondition(
                "functor endpoints must share a dimension; pad with as_dim".into(),
            ));
        }
        for dim in 0..=c.max_dim() {
            if self.maps[dim].len() != c.num_cells(dim) {
                return Err(Error::InvalidCategory(format!(
                    "functor map at dimension {dim} has wrong length"
                )));
            }
            for x in c.cells(dim) {
                let fx = self.apply(x);
                if fx.idx >= d.num_cells(dim) {
                    return Err(Error::InvalidCategory("functor image out of range".into()));
                }
                if dim >= 1
                    && (d.src(fx) != self.apply(c.src(x)) || d.tgt(fx) != self.apply(c.tgt(x)))
                {
                    return Err(Error::InvalidCategory(format!(
                        "functor breaks boundaries at {}",
                        c.name(x)
                    )));
                }
                if dim < c.max_dim() && d.identity(fx) != self.apply(c.identity(x)) {
                    return Err(Error::InvalidCategory(format!(
                        "functor breaks identities at {}",
                        c.name(x)
                    )));
                }
            }
        }
        for (i, dim, x, y, z) in c.comp_entries() {
            let fx = self.apply(Cell { dim, idx: x });
            let fy = self.apply(Cell { dim, idx: y });
            let fz = self.apply(Cell { dim, idx: z });
            match d.compose(i, fx, fy) {
                Ok(got) if got == fz => {}
                _ => {
                    return Err(Error::InvalidCategory(format!(
                        "functor breaks ∘_{i} at dimension {dim}"
                    )))
                }
            }
        }
        Ok(())
    }
}

/// Cells that cannot be written as a composite of two cells that are not
/// `i`-degenerate (and differ from the cell itself). Identities excluded;
/// every object counts as a generator.
pub fn generators(c: &FiniteStrictNCat) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for d in 0..=c.max_dim() {
        let mut level = Vec::new();
        for x in c.cells(d) {
            if d == 0 {
                level.push(x.idx);
                continue;
            }
            if c.is_identity(x) {
                continue;
            }
            if decomposition_of(c, x).is_none() {
                level.push(x.idx);
            }
        }
        out.push(level);
    }
    out
}

type Decomposition = Option<(usize, Cell, Cell)>;

/// A non-trivial decomposition `x = u ∘_i v`, if one exists.
fn decomposition_of(c: &FiniteStrictNCat, x: Cell) -> Decomposition {
    for (i, dim, u, v, z) in c.comp_entries() {
        if dim != x.dim || z != x.idx {
            continue;
        }
        let u = Cell { dim, idx: u };
        let v = Cell { dim, idx: v };
        if u == x || v == x {
            continue;
        }
        if c.degenerate_origin(u).dim <= i || c.degenerate_origin(v).dim <= i {
            continue;
        }
        return Some((i, u, v));
    }
    None
}

/// All functors `c → d`, by backtracking over generator images with
/// propagation through identities and decompositions, followed by a full
/// axiom check. Deterministic order.
pub fn enumerate_functors(c: &FiniteStrictNCat, d: &FiniteStrictNCat) -> Result<Vec<CatFunctor>> {
    if c.max_dim() != d.max_dim() {
        return Err(Error::Precondition(
            "enumerate_functors needs equal dimensions; pad with as_dim".into(),
        ));
    }
    let decompositions: Vec<Vec<Decomposition>> = (0..=c.max_dim())
        .map(|dim| {
            c.cells(dim)
                .map(|x| if dim == 0 { None } else { decomposition_of(c, x) })
                .collect()
        })
        .collect();

    let mut assignment: Vec<Vec<Option<usize>>> =
        (0..=c.max_dim()).map(|dim| vec![None; c.num_cells(dim)]).collect();
    let mut out = Vec::new();
    search_functors(c, d, &decompositions, &mut assignment, &mut out);
    Ok(out)
}

fn boundary_ok(
    c: &FiniteStrictNCat,
    d: &FiniteStrictNCat,
    assignment: &[Vec<Option<usize>>],
    x: Cell,
    fx: Cell,
) -> bool {
    if x.dim == 0 {
        return true;
    }
    let s = c.src(x);
    let t = c.tgt(x);
    let fs = assignment[s.dim][s.idx].expect("lower dimensions assigned");
    let ft = assignment[t.dim][t.idx].expect("lower dimensions assigned");
    d.src(fx).idx == fs && d.tgt(fx).idx == ft
}

fn search_functors(
    c: &FiniteStrictNCat,
    d: &FiniteStrictNCat,
    decompositions: &[Vec<Decomposition>],
    assignment: &mut Vec<Vec<Option<usize>>>,
    out: &mut Vec<CatFunctor>,
) {
    // Find the next unassigned cell, lowest dimension first; handle forced
    // cells (identities, decompositions with assigned parts) immediately.
    let mut branch_cell: Option<Cell> = None;
    for dim in 0..=c.max_dim() {
        for x in c.cells(dim) {
            if assignment[dim][x.idx].is_some() {
                continue;
            }
            if let Some(origin) = c.id_origin(x) {
                if let Some(fo) = assignment[origin.dim][origin.idx] {
                    let fx = d.identity(Cell { dim: origin.dim, idx: fo });
                    assignment[dim][x.idx] = Some(fx.idx);
                    search_functors(c, d, decompositions, assignment, out);
                    assignment[dim][x.idx] = None;
                    return;
                }
            }
            if let Some((i, u, v)) = &decompositions[dim][x.idx] {
                if let (Some(fu), Some(fv)) = (assignment[u.dim][u.idx], assignment[v.dim][v.idx])
                {
                    let fu = Cell { dim: u.dim, idx: fu };
                    let fv = Cell { dim: v.dim, idx: fv };
                    match d.compose(*i, fu, fv) {
                        Ok(fx) if boundary_ok(c, d, assignment, x, fx) => {
                            assignment[dim][x.idx] = Some(fx.idx);
                            search_functors(c, d, decompositions, assignment, out);
                            assignment[dim][x.idx] = None;
                        }
                        _ => {}
                    }
                    return;
                }
            }
            if branch_cell.is_none() {
                branch_cell = Some(x);
            }
        }
        if branch_cell.is_some() {
            break;
        }
    }
    match branch_cell {
        None => {
            let functor = CatFunctor {
                maps: assignment
                    .iter()
                    .map(|level| level.iter().map(|v| v.unwrap()).collect())
                    .collect(),
            };
            if functor.validate(c, d).is_ok() {
                out.push(functor);
            }
        }
        Some(x) => {
            for fx in d.cells(x.dim) {
                if !boundary_ok(c, d, assignment, x, fx) {
                    continue;
                }
                assignment[x.dim][x.idx] = Some(fx.idx);
                search_functors(c, d, decompositions, assignment, out);
                assignment[x.dim][x.idx] = None;
            }
        }
    }
}

/// The walking isomorphism: two objects with mutually inverse arrows.
pub fn walking_iso() -> FiniteStrictNCat {
    let mut b = CatBuilder::new(1).unwrap();
    let o0 = b.add_object("0");
    let o1 = b.add_object("1");
    let i0 = b.add_cell(1, "id0", o0, o0);
    let i1 = b.add_cell(1, "id1", o1, o1);
    let u = b.add_cell(1, "u", o0, o1);
    let v = b.add_cell(1, "v", o1, o0);
    b.set_identity(0, o0, i0);
    b.set_identity(0, o1, i1);
    for (x, y, z) in [
        (i0, i0, i0),
        (i1, i1, i1),
        (i0, u, u),
        (u, i1, u),
        (i1, v, v),
        (v, i0, v),
        (u, v, i0),
        (v, u, i1),
    ] {
        b.set_comp(0, 1, x, y, z);
    }
    b.finish().unwrap()
}

/// The poset `[n]` as a 1-category.
pub fn poset_path(n: usize) -> FiniteStrictNCat {
    let mut b = CatBuilder::new(1).unwrap();
    for i in 0..=n {
        b.add_object(format!("{i}"));
    }
    let mut arrows = BTreeMap::new();
    for i in 0..=n {
        for j in i..=n {
            let idx = b.add_cell(1, format!("{i}->{j}"), i, j);
            arrows.insert((i, j), idx);
        }
    }
    for i in 0..=n {
        b.set_identity(0, i, arrows[&(i, i)]);
    }
    for i in 0..=n {
        for j in i..=n {
            for k in j..=n {
                b.set_comp(0, 1, arrows[&(i, j)], arrows[&(j, k)], arrows[&(i, k)]);
            }
        }
    }
    b.finish().unwrap()
}

// ---------------------------------------------------------------------------
// Surjectivity / fully-faithfulness calculus
// ---------------------------------------------------------------------------

/// Extract the hom-category between two objects, together with the lists of
/// ambient cell indices it keeps (per hom dimension).
pub fn hom_cat(
    c: &FiniteStrictNCat,
    a: usize,
    b: usize,
) -> Result<(FiniteStrictNCat, Vec<Vec<usize>>)> {
    if c.max_dim() == 0 {
        return Err(Error::Precondition("hom of a 0-category".into()));
    }
    let mut keep: Vec<Vec<usize>> = Vec::new();
    let mut reindex: Vec<BTreeMap<usize, usize>> = Vec::new();
    for d in 1..=c.max_dim() {
        let mut level = Vec::new();
        let mut map = BTreeMap::new();
        for x in c.cells(d) {
            if c.src_k(x, 0).idx == a && c.tgt_k(x, 0).idx == b {
                map.insert(x.idx, level.len());
                level.push(x.idx);
            }
        }
        keep.push(level);
        reindex.push(map);
    }
    let mut builder = CatBuilder::new(c.max_dim() - 1)?;
    for old in &keep[0] {
        builder.add_object(c.names[1][*old].clone());
    }
    for d in 2..=c.max_dim() {
        for old in &keep[d - 1] {
            let cell = Cell { dim: d, idx: *old };
            let s = reindex[d - 2][&c.src(cell).idx];
            let t = reindex[d - 2][&c.tgt(cell).idx];
            builder.add_cell(d - 1, c.names[d][*old].clone(), s, t);
        }
    }
    for d in 1..c.max_dim() {
        for old in &keep[d - 1] {
            let cell = Cell { dim: d, idx: *old };
            let up = c.identity(cell);
            builder.set_identity(d - 1, reindex[d - 1][old], reindex[d][&up.idx]);
        }
    }
    for (i, dim, x, y, z) in c.comp_entries() {
        if i == 0 || dim == 0 {
            continue;
        }
        let (Some(nx), Some(ny), Some(nz)) = (
            reindex[dim - 1].get(&x),
            reindex[dim - 1].get(&y),
            reindex[dim - 1].get(&z),
        ) else {
            continue;
        };
        builder.set_comp(i - 1, dim - 1, *nx, *ny, *nz);
    }
    Ok((builder.finish()?, keep))
}

/// Restrict a functor to homs: `hom_c(a, b) → hom_d(f a, f b)`.
pub fn hom_functor(
    c: &FiniteStrictNCat,
    d: &FiniteStrictNCat,
    f: &CatFunctor,
    a: usize,
    b: usize,
) -> Result<(FiniteStrictNCat, FiniteStrictNCat, CatFunctor)> {
    let (hc, keep_c) = hom_cat(c, a, b)?;
    let fa = f.maps[0][a];
    let fb = f.maps[0][b];
    let (hd, keep_d) = hom_cat(d, fa, fb)?;
    let reindex_d: Vec<BTreeMap<usize, usize>> = keep_d
        .iter()
        .map(|level| level.iter().enumerate().map(|(new, old)| (*old, new)).collect())
        .collect();
    let maps = keep_c
        .iter()
        .enumerate()
        .map(|(dm1, level)| {
            level.iter().map(|old| reindex_d[dm1][&f.maps[dm1 + 1][*old]]).collect()
        })
        .collect();
    Ok((hc, hd, CatFunctor { maps }))
}

/// Essential surjectivity on objects through strictly invertible 1-cells.
pub fn essentially_surjective(
    c: &FiniteStrictNCat,
    d: &FiniteStrictNCat,
    f: &CatFunctor,
) -> bool {
    d.cells(0).all(|y| {
        c.cells(0).any(|x| {
            let fx = f.apply(x);
            if d.max_dim() == 0 {
                fx == y
            } else {
                d.iso_cells(fx, y)
            }
        })
    })
}

/// n-surjectivity by the local recursion: essentially surjective on objects
/// and locally (n−1)-surjective.
pub fn is_n_surjective(
    c: &FiniteStrictNCat,
    d: &FiniteStrictNCat,
    f: &CatFunctor,
    n: usize,
) -> bool {
    if !essentially_surjective(c, d, f) {
        return false;
    }
    if n == 0 || c.max_dim() == 0 {
        return true;
    }
    for a in 0..c.num_cells(0) {
        for b in 0..c.num_cells(0) {
            let (hc, hd, hf) = hom_functor(c, d, f, a, b).expect("hom of positive dimension");
            if !is_n_surjective(&hc, &hd, &hf, n - 1) {
                return false;
            }
        }
    }
    true
}

/// n-fully-faithfulness: 0-fully-faithful means strict equivalence; the
/// inductive step passes to homs. For discrete categories a positive index
/// degenerates to injectivity.
pub fn is_n_fully_faithful(
    c: &FiniteStrictNCat,
    d: &FiniteStrictNCat,
    f: &CatFunctor,
    n: usize,
) -> bool {
    if n == 0 {
        return is_strict_equivalence(c, d, f);
    }
    if c.max_dim() == 0 {
        let mut seen = std::collections::BTreeSet::new();
        return f.maps[0].iter().all(|i| seen.insert(*i));
    }
    for a in 0..c.num_cells(0) {
        for b in 0..c.num_cells(0) {
            let (hc, hd, hf) = hom_functor(c, d, f, a, b).expect("hom of positive dimension");
            if !is_n_fully_faithful(&hc, &hd, &hf, n - 1) {
                return false;
            }
        }
    }
    true
}

/// Strict equivalence: essential surjectivity plus hom-wise recursion;
/// bijectivity for 0-categories.
pub fn is_strict_equivalence(
    c: &FiniteStrictNCat,
    d: &FiniteStrictNCat,
    f: &CatFunctor,
) -> bool {
    if c.max_dim() == 0 {
        let mut seen = std::collections::BTreeSet::new();
        return f.maps[0].iter().all(|i| seen.insert(*i)) && seen.len() == d.num_cells(0);
    }
    if !essentially_surjective(c, d, f) {
        return false;
    }
    for a in 0..c.num_cells(0) {
        for b in 0..c.num_cells(0) {
            let (hc, hd, hf) = hom_functor(c, d, f, a, b).expect("hom of positive dimension");
            if !is_strict_equivalence(&hc, &hd, &hf) {
                return false;
            }
        }
    }
    true
}

/// Independent lifting-style oracle for n-surjectivity: for every `k ≤ n`,
/// every parallel pair in the source and every filler downstairs admits a
/// filler upstairs, up to a strictly invertible cell (equality at the top
/// dimension). No hom-categories are constructed.
pub fn lifting_oracle_n_surjective(
    c: &FiniteStrictNCat,
    d: &FiniteStrictNCat,
    f: &CatFunctor,
    n: usize,
) -> bool {
    for k in 0..=n.min(c.max_dim()) {
        if k == 0 {
            if !d.cells(0).all(|y| c.cells(0).any(|x| d.iso_or_equal(f.apply(x), y))) {
                return false;
            }
            continue;
        }
        for s in c.cells(k - 1) {
            for t in c.cells(k - 1) {
                if k >= 2 && (c.src(s) != c.src(t) || c.tgt(s) != c.tgt(t)) {
                    continue;
                }
                let fs = f.apply(s);
                let ft = f.apply(t);
                for w in d.cells(k) {
                    if d.src(w) != fs || d.tgt(w) != ft {
                        continue;
                    }
                    let found = c
                        .cells(k)
                        .any(|u| c.src(u) == s && c.tgt(u) == t && d.iso_or_equal(f.apply(u), w));
                    if !found {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// The (n-surjection, (n+1)-fully-faithful) factorization.
pub struct Factorization {
    pub middle: FiniteStrictNCat,
    pub first: CatFunctor,
    pub second: CatFunctor,
}

/// Middle cells above level `n` are triples (source, target, filler), where
/// the filler is a cell downstairs between the projected boundaries; when
/// `n ≥ max_dim` the middle instead quotients top cells by the kernel of `f`
/// on parallel pairs.
pub fn factorize(
    c: &FiniteStrictNCat,
    d: &FiniteStrictNCat,
    f: &CatFunctor,
    n: usize,
) -> Result<Factorization> {
    f.validate(c, d)?;
    let m = c.max_dim();
    if n >= m {
        return factorize_top_quotient(c, d, f);
    }

    let mut builder = CatBuilder::new(m)?;
    for x in c.cells(0) {
        builder.add_object(c.name(x).to_string());
    }
    for dim in 1..=n {
        for x in c.cells(dim) {
            builder.add_cell(dim, c.name(x).to_string(), c.src(x).idx, c.tgt(x).idx);
        }
    }
    // tuples[k - (n+1)][idx] = (src_idx, tgt_idx, filler_idx)
    let mut tuples: Vec<Vec<(usize, usize, usize)>> = Vec::new();
    // proj[k][idx] = image cell index in d at dimension k.
    let mut proj: Vec<Vec<usize>> = (0..=n).map(|dim| f.maps[dim].clone()).collect();
    for dim in (n + 1)..=m {
        let lower_count =
            if dim == n + 1 { c.num_cells(n) } else { tuples[dim - n - 2].len() };
        let lower_parallel_ok = |s: usize, t: usize| -> bool {
            if dim == n + 1 {
                if n == 0 {
                    true
                } else {
                    let cs = Cell { dim: n, idx: s };
                    let ct = Cell { dim: n, idx: t };
                    c.src(cs) == c.src(ct) && c.tgt(cs) == c.tgt(ct)
                }
            } else {
                let (ss, st, _) = tuples[dim - n - 2][s];
                let (ts, tt, _) = tuples[dim - n - 2][t];
                ss == ts && st == tt
            }
        };
        let mut level = Vec::new();
        for s in 0..lower_count {
            for t in 0..lower_count {
                if !lower_parallel_ok(s, t) {
                    continue;
                }
                let ps = proj[dim - 1][s];
                let pt = proj[dim - 1][t];
                for w in d.cells(dim) {
                    if d.src(w).idx == ps && d.tgt(w).idx == pt {
                        level.push((s, t, w.idx));
                    }
                }
            }
        }
        let mut level_proj = Vec::new();
        for (idx, (s, t, w)) in level.iter().enumerate() {
            builder.add_cell(dim, format!("<{s},{t};{w}>@{dim}#{idx}"), *s, *t);
            level_proj.push(*w);
        }
        tuples.push(level);
        proj.push(level_proj);
    }

    let tuple_index: Vec<BTreeMap<(usize, usize, usize), usize>> = tuples
        .iter()
        .map(|level| level.iter().enumerate().map(|(i, t)| (*t, i)).collect())
        .collect();
    let find_tuple = |dim: usize, s: usize, t: usize, w: usize| -> Result<usize> {
        tuple_index[dim - n - 1]
            .get(&(s, t, w))
            .copied()
            .ok_or_else(|| Error::InvalidCategory("factorization tuple missing".into()))
    };

    // Identities.
    for dim in 0..m {
        let count = if dim <= n { c.num_cells(dim) } else { tuples[dim - n - 1].len() };
        #[allow(clippy::needless_range_loop)]
        for idx in 0..count {
            if dim < n {
                builder.set_identity(dim, idx, c.identity(Cell { dim, idx }).idx);
            } else {
                let image = proj[dim][idx];
                let w_id = d.identity(Cell { dim, idx: image }).idx;
                let up = find_tuple(dim + 1, idx, idx, w_id)?;
                builder.set_identity(dim, idx, up);
            }
        }
    }

    // Compositions: low dimensions copy c; tuples compose componentwise.
    for (i, dim, x, y, z) in c.comp_entries() {
        if dim <= n {
            builder.set_comp(i, dim, x, y, z);
        }
    }
    let mut lower_comp: BTreeMap<(usize, usize, usize, usize), usize> = c
        .comp_entries()
        .filter(|(_, dim, _, _, _)| *dim <= n)
        .map(|(i, dim, x, y, z)| ((i, dim, x, y), z))
        .collect();
    for dim in (n + 1)..=m {
        let level = tuples[dim - n - 1].clone();
        for i in 0..dim {
            for (xi, (xs, xt, xw)) in level.iter().enumerate() {
                for (yi, (ys, yt, yw)) in level.iter().enumerate() {
                    let composable = if i == dim - 1 {
                        *xt == *ys
                    } else {
                        middle_bnd(n, &tuples, c, Cell { dim, idx: xi }, i, false)
                            == middle_bnd(n, &tuples, c, Cell { dim, idx: yi }, i, true)
                    };
                    if !composable {
                        continue;
                    }
                    let zw =
                        d.compose(i, Cell { dim, idx: *xw }, Cell { dim, idx: *yw })?.idx;
                    let (zs, zt) = if i == dim - 1 {
                        (*xs, *yt)
                    } else {
                        let zs = lower_comp[&(i, dim - 1, *xs, *ys)];
                        let zt = lower_comp[&(i, dim - 1, *xt, *yt)];
                        (zs, zt)
                    };
                    let zi = find_tuple(dim, zs, zt, zw)?;
                    builder.set_comp(i, dim, xi, yi, zi);
                    lower_comp.insert((i, dim, xi, yi), zi);
                }
            }
        }
    }

    let middle = builder.finish()?;
    let mut first = CatFunctor {
        maps: (0..=m)
            .map(|dim| if dim <= n { (0..c.num_cells(dim)).collect() } else { Vec::new() })
            .collect(),
    };
    for dim in (n + 1)..=m {
        let mut level = Vec::with_capacity(c.num_cells(dim));
        for x in c.cells(dim) {
            let s = if dim - 1 <= n {
                c.src(x).idx
            } else {
                first.maps[dim - 1][c.src(x).idx]
            };
            let t = if dim - 1 <= n {
                c.tgt(x).idx
            } else {
                first.maps[dim - 1][c.tgt(x).idx]
            };
            let w = f.maps[dim][x.idx];
            level.push(find_tuple(dim, s, t, w)?);
        }
        first.maps[dim] = level;
    }
    let second = CatFunctor {
        maps: (0..=m)
            .map(|dim| if dim <= n { f.maps[dim].clone() } else { proj[dim].clone() })
            .collect(),
    };
    first.validate(c, &middle)?;
    second.validate(&middle, d)?;
    Ok(Factorization { middle, first, second })
}

/// Boundary of a middle tuple cell at level `i` (index in the middle's
/// dimension-`i` cell list). `take_src` picks source, else target.
fn middle_bnd(
    n: usize,
    tuples: &[Vec<(usize, usize, usize)>],
    c: &FiniteStrictNCat,
    cell: Cell,
    i: usize,
    take_src: bool,
) -> usize {
    let mut dim = cell.dim;
    let mut idx = cell.idx;
    while dim > i {
        if dim > n {
            let (s, t, _) = tuples[dim - n - 1][idx];
            idx = if take_src { s } else { t };
        } else {
            let cc = Cell { dim, idx };
            idx = if take_src { c.src(cc).idx } else { c.tgt(cc).idx };
        }
        dim -= 1;
    }
    idx
}

/// Degenerate factorization for `n ≥ max_dim`: quotient top cells by the
/// kernel of `f` on parallel pairs.
fn factorize_top_quotient(
    c: &FiniteStrictNCat,
    d: &FiniteStrictNCat,
    f: &CatFunctor,
) -> Result<Factorization> {
    let m = c.max_dim();
    if m == 0 {
        let mut image: Vec<usize> = f.maps[0].clone();
        image.sort_unstable();
        image.dedup();
        let mut builder = CatBuilder::new(0)?;
        for w in &image {
            builder.add_object(d.name(Cell { dim: 0, idx: *w }).to_string());
        }
        let middle = builder.finish()?;
        let pos = |w: usize| image.iter().position(|v| *v == w).unwrap();
        let first = CatFunctor { maps: vec![f.maps[0].iter().map(|w| pos(*w)).collect()] };
        let second = CatFunctor { maps: vec![image.clone()] };
        return Ok(Factorization { middle, first, second });
    }
    let mut classes: Vec<(usize, usize, usize)> = Vec::new();
    let mut class_of: Vec<usize> = Vec::new();
    for x in c.cells(m) {
        let key = (c.src(x).idx, c.tgt(x).idx, f.maps[m][x.idx]);
        let idx = classes.iter().position(|k| *k == key).unwrap_or_else(|| {
            classes.push(key);
            classes.len() - 1
        });
        class_of.push(idx);
    }
    let mut builder = CatBuilder::new(m)?;
    for x in c.cells(0) {
        builder.add_object(c.name(x).to_string());
    }
    for dim in 1..m {
        for x in c.cells(dim) {
            builder.add_cell(dim, c.name(x).to_string(), c.src(x).idx, c.tgt(x).idx);
        }
    }
    for (idx, (s, t, w)) in classes.iter().enumerate() {
        builder.add_cell(m, format!("[{s},{t};{w}]#{idx}"), *s, *t);
    }
    for dim in 0..m {
        for x in c.cells(dim) {
            let up = c.identity(x);
            let target = if dim + 1 == m { class_of[up.idx] } else { up.idx };
            builder.set_identity(dim, x.idx, target);
        }
    }
    for (i, dim, x, y, z) in c.comp_entries() {
        if dim < m {
            builder.set_comp(i, dim, x, y, z);
        } else {
            builder.set_comp(i, dim, class_of[x], class_of[y], class_of[z]);
        }
    }
    let middle = builder.finish()?;
    let mut first_maps: Vec<Vec<usize>> =
        (0..m).map(|dim| (0..c.num_cells(dim)).collect()).collect();
    first_maps.push(class_of.clone());
    let first = CatFunctor { maps: first_maps };
    let mut second_maps: Vec<Vec<usize>> = (0..m).map(|dim| f.maps[dim].clone()).collect();
    second_maps.push(classes.iter().map(|(_, _, w)| *w).collect());
    let second = CatFunctor { maps: second_maps };
    first.validate(c, &middle)?;
    second.validate(&middle, d)?;
    Ok(Factorization { middle, first, second })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_cat() -> FiniteStrictNCat {
        let adc = Adc::path(1).tensor(&Adc::path(1));
        from_nu(&adc, 2, &NuConfig::default()).unwrap().cat
    }

    fn walking_2cell() -> FiniteStrictNCat {
        let adc = crate::theta::to_adc(&crate::theta::GlobularSum::globe(2));
        from_nu(&adc, 2, &NuConfig::default()).unwrap().cat
    }

    #[test]
    fn poset_path_is_valid() {
        let c = poset_path(2);
        assert!(c.validate().is_valid());
        assert_eq!(c.num_cells(1), 6);
    }

    #[test]
    fn walking_iso_is_valid_and_invertible() {
        let w = walking_iso();
        assert!(w.validate().is_valid());
        let u = w.find_by_name(1, "u").unwrap();
        assert!(w.is_invertible(u));
    }

    #[test]
    fn from_nu_grid_counts() {
        let cat = grid_cat();
        assert!(cat.validate().is_valid());
        assert_eq!(cat.num_cells(0), 4);
        assert_eq!(cat.num_cells(1), 10); // 6 arrows + 4 identities
        assert_eq!(cat.num_cells(2), 11); // 1 square + 10 identities
    }

    #[test]
    fn from_nu_globe2_is_the_walking_2cell() {
        let cat = walking_2cell();
        assert!(cat.validate().is_valid());
        assert_eq!(cat.num_cells(0), 2);
        assert_eq!(cat.num_cells(1), 4);
        assert_eq!(cat.num_cells(2), 5);
    }

    #[test]
    fn from_nu_path_is_the_poset() {
        let adc = crate::theta::to_adc(&crate::theta::GlobularSum::linear(2));
        let cat = from_nu(&adc, 1, &NuConfig::default()).unwrap().cat;
        assert!(cat.validate().is_valid());
        assert_eq!(cat.num_cells(0), 3);
        assert_eq!(cat.num_cells(1), 6);
        let poset = poset_path(2);
        let functors = enumerate_functors(&cat, &poset).unwrap();
        assert!(functors.iter().any(|f| is_strict_equivalence(&cat, &poset, f)));
    }

    #[test]
    fn corrupted_table_is_reported() {
        let mut cat = grid_cat();
        let key = *cat
            .comp
            .keys()
            .find(|(i, dim, x, _)| {
                *i == 0 && *dim == 2 && !cat.is_identity(Cell { dim: 2, idx: *x })
            })
            .unwrap();
        let z = cat.comp[&key];
        let other = (0..cat.num_cells(2)).find(|i| *i != z).unwrap();
        cat.comp.insert(key, other);
        assert!(!cat.validate().is_valid());
    }

    #[test]
    fn hom_of_walking_2cell_is_walking_arrow() {
        let cat = walking_2cell();
        let (hom, _) = hom_cat(&cat, 0, 1).unwrap();
        assert!(hom.validate().is_valid());
        assert_eq!(hom.num_cells(0), 2);
        assert_eq!(hom.num_cells(1), 3);
    }

    #[test]
    fn hom_of_grid_between_opposite_corners() {
        let cat = grid_cat();
        let mut found = false;
        for a in 0..cat.num_cells(0) {
            for b in 0..cat.num_cells(0) {
                let (hom, _) = hom_cat(&cat, a, b).unwrap();
                if hom.num_cells(0) == 2 && hom.num_cells(1) == 3 {
                    found = true;
                }
            }
        }
        assert!(found, "no corner pair with two paths and one connecting cell");
    }

    #[test]
    fn hom_of_poset_loop_is_terminal() {
        let p = poset_path(2);
        let (hom, _) = hom_cat(&p, 1, 1).unwrap();
        assert_eq!(hom.num_cells(0), 1);
    }

    #[test]
    fn truncate_and_itruncate_walking_2cell() {
        let cat = walking_2cell();
        let t = cat.truncate(1);
        assert!(t.validate().is_valid());
        assert_eq!(t.num_cells(1), 4);
        let (q, unit) = cat.itruncate_unit(1).unwrap();
        assert!(q.validate().is_valid());
        assert_eq!(q.num_cells(1), 3);
        unit.validate(&t, &q).unwrap();
    }

    #[test]
    fn itruncate_poset_changes_nothing() {
        let c = poset_path(2).as_dim(2).unwrap();
        let q = c.itruncate(1).unwrap();
        assert_eq!(q.num_cells(1), c.num_cells(1));
    }

    #[test]
    fn functor_counts_frozen() {
        let p1 = poset_path(1);
        assert_eq!(enumerate_functors(&p1, &p1).unwrap().len(), 3);
        let terminal = FiniteStrictNCat::terminal(1);
        assert_eq!(enumerate_functors(&p1, &terminal).unwrap().len(), 1);
        // Functors from the lax square to the walking arrow = up-sets of the
        // 2×2 grid poset.
        let grid = grid_cat();
        let p1_2 = p1.as_dim(2).unwrap();
        assert_eq!(enumerate_functors(&grid, &p1_2).unwrap().len(), 6);
    }

    #[test]
    fn functor_count_matches_upper_set_oracle() {
        // Independent count: up-sets of the 2×2 grid poset.
        let corners = [(0usize, 0usize), (0, 1), (1, 0), (1, 1)];
        let leq = |a: (usize, usize), b: (usize, usize)| a.0 <= b.0 && a.1 <= b.1;
        let mut count = 0;
        for mask in 0..16u32 {
            let chosen: Vec<(usize, usize)> = corners
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, c)| *c)
                .collect();
            let is_upper = corners.iter().all(|a| {
                !chosen.contains(a)
                    || corners.iter().filter(|b| leq(*a, **b)).all(|b| chosen.contains(b))
            });
            if is_upper {
                count += 1;
            }
        }
        assert_eq!(count, 6);
    }

    #[test]
    fn surjectivity_of_the_parallel_pair_collapse() {
        let cat = walking_2cell();
        let t = cat.truncate(1);
        let (q, unit) = cat.itruncate_unit(1).unwrap();
        assert!(is_n_surjective(&t, &q, &unit, 0));
        assert!(is_n_surjective(&t, &q, &unit, 1));
        assert!(lifting_oracle_n_surjective(&t, &q, &unit, 1));
        let t2 = t.as_dim(2).unwrap();
        let q2 = q.as_dim(2).unwrap();
        let unit2 = CatFunctor {
            maps: vec![unit.maps[0].clone(), unit.maps[1].clone(), unit.maps[1].clone()],
        };
        unit2.validate(&t2, &q2).unwrap();
        assert!(!is_n_fully_faithful(&t2, &q2, &unit2, 2));
    }

    #[test]
    fn identity_functor_is_everything() {
        let cat = walking_2cell();
        let id = CatFunctor::identity(&cat);
        for n in 0..=3 {
            assert!(is_n_surjective(&cat, &cat, &id, n));
            assert!(is_n_fully_faithful(&cat, &cat, &id, n));
            assert!(lifting_oracle_n_surjective(&cat, &cat, &id, n));
        }
        assert!(is_strict_equivalence(&cat, &cat, &id));
    }

    #[test]
    fn non_full_inclusion_fails_fully_faithful() {
        let p1 = poset_path(1);
        let mut b = CatBuilder::new(1).unwrap();
        b.add_object("0");
        b.add_object("1");
        let i0 = b.add_cell(1, "id0", 0, 0);
        let i1 = b.add_cell(1, "id1", 1, 1);
        b.set_identity(0, 0, i0);
        b.set_identity(0, 1, i1);
        b.set_comp(0, 1, i0, i0, i0);
        b.set_comp(0, 1, i1, i1, i1);
        let discrete = b.finish().unwrap();
        // In `poset_path(1)` the arrows are 0->0, 0->1, 1->1 in that order.
        let incl = CatFunctor { maps: vec![vec![0, 1], vec![0, 2]] };
        incl.validate(&discrete, &p1).unwrap();
        assert!(!is_n_fully_faithful(&discrete, &p1, &incl, 1));
    }

    #[test]
    fn factorization_properties() {
        let cat = walking_2cell();
        let t = cat.truncate(1).as_dim(2).unwrap();
        let q0 = cat.itruncate(1).unwrap();
        let (_, unit) = cat.itruncate_unit(1).unwrap();
        let q = q0.as_dim(2).unwrap();
        let f = CatFunctor {
            maps: vec![unit.maps[0].clone(), unit.maps[1].clone(), unit.maps[1].clone()],
        };
        f.validate(&t, &q).unwrap();
        for n in 0..=2 {
            let fac = factorize(&t, &q, &f, n).unwrap();
            assert!(is_n_surjective(&t, &fac.middle, &fac.first, n));
            assert!(is_n_fully_faithful(&fac.middle, &q, &fac.second, n + 1));
            assert_eq!(fac.first.then(&fac.second), f);
        }
    }

    #[test]
    fn factorize_already_surjective_gives_equivalence_second_factor() {
        let cat = walking_2cell();
        let id = CatFunctor::identity(&cat);
        for n in 0..=2 {
            let fac = factorize(&cat, &cat, &id, n).unwrap();
            assert!(is_strict_equivalence(&fac.middle, &cat, &fac.second));
        }
    }

    #[test]
    fn generators_of_the_grid() {
        let grid = grid_cat();
        let gens = generators(&grid);
        assert_eq!(gens[0].len(), 4);
        assert_eq!(gens[1].len(), 4); // the four outer edges
        assert_eq!(gens[2].len(), 1); // the square
    }
}
