//! Cells of the strict ω-category ν(K) attached to a complex with basis.
//!
//! An n-cell is a table of non-negative chains `(x_0^-, x_0^+ | … | x_n, x_n)`
//! with `∂x_i^ε = x_{i-1}^+ − x_{i-1}^-` and `ε(x_0^±) = 1`. Identities append
//! a zero top level; composition along dimension `i` is tablewise
//! `x + y − w`, where `w` is the degenerate table of the shared `i`-boundary
//! (so it only contributes at and below level `i`).

use std::collections::{BTreeMap, BTreeSet};

use crate::adc::Adc;
use crate::chain::Chain;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct NuCell {
    /// `levels[i] = (x_i^-, x_i^+)`; the top pair is equal.
    levels: Vec<(Chain, Chain)>,
}

/// Budget and coefficient cap for the bounded cell search.
#[derive(Clone, Copy, Debug)]
pub struct NuConfig {
    pub coeff_cap: i64,
    pub node_budget: u64,
}

impl Default for NuConfig {
    fn default() -> Self {
        NuConfig { coeff_cap: 1, node_budget: 5_000_000 }
    }
}

impl NuCell {
    pub fn from_levels(levels: Vec<(Chain, Chain)>) -> NuCell {
        NuCell { levels }
    }

    pub fn dim(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, i: usize) -> &(Chain, Chain) {
        &self.levels[i]
    }

    pub fn levels(&self) -> &[(Chain, Chain)] {
        &self.levels
    }

    pub fn top(&self) -> &Chain {
        &self.levels.last().unwrap().0
    }

    /// An identity cell: zero top chain (never true in dimension 0).
    pub fn is_degenerate(&self) -> bool {
        self.dim() >= 1 && self.top().is_zero()
    }

    /// The `k`-source of the cell, `k ≤ dim`.
    pub fn source(&self, k: usize) -> NuCell {
        let mut levels: Vec<(Chain, Chain)> = self.levels[..k].to_vec();
        levels.push((self.levels[k].0.clone(), self.levels[k].0.clone()));
        NuCell { levels }
    }

    /// The `k`-target of the cell, `k ≤ dim`.
    pub fn target(&self, k: usize) -> NuCell {
        let mut levels: Vec<(Chain, Chain)> = self.levels[..k].to_vec();
        levels.push((self.levels[k].1.clone(), self.levels[k].1.clone()));
        NuCell { levels }
    }

    /// The identity on this cell, one dimension up.
    pub fn identity(&self, adc: &Adc) -> NuCell {
        let mut levels = self.levels.clone();
        let d = self.dim() + 1;
        let zero = zero_chain_of_degree(adc, d);
        levels.push((zero.clone(), zero));
        NuCell { levels }
    }

    /// Raise to dimension `d` by appending identities.
    pub fn raise_to(&self, adc: &Adc, d: usize) -> NuCell {
        let mut cell = self.clone();
        while cell.dim() < d {
            cell = cell.identity(adc);
        }
        cell
    }

    /// Check the cell table against the complex.
    pub fn validate(&self, adc: &Adc) -> Result<()> {
        for (i, (minus, plus)) in self.levels.iter().enumerate() {
            if minus.degree() != i || plus.degree() != i {
                return Err(Error::InvalidCell(format!("level {i} has wrong degree")));
            }
            if !minus.is_nonnegative() || !plus.is_nonnegative() {
                return Err(Error::InvalidCell(format!("level {i} has negative coefficients")));
            }
            if i == 0 {
                if adc.augmentation(minus) != 1 || adc.augmentation(plus) != 1 {
                    return Err(Error::InvalidCell("level 0 augmentation is not 1".into()));
                }
            } else {
                let gap = self.levels[i - 1].1.sub(&self.levels[i - 1].0);
                if adc.boundary(minus) != gap || adc.boundary(plus) != gap {
                    return Err(Error::InvalidCell(format!(
                        "level {i} boundaries do not match the level-{} gap",
                        i - 1
                    )));
                }
            }
        }
        let (top_minus, top_plus) = self.levels.last().unwrap();
        if top_minus != top_plus {
            return Err(Error::InvalidCell("top level is not a matched pair".into()));
        }
        Ok(())
    }
}

fn zero_chain_of_degree(_adc: &Adc, d: usize) -> Chain {
    Chain::zero(d)
}

/// Composition `x ∘_i y` (diagrammatic: `x` then `y`): requires equal levels
/// below `i` and `x_i^+ = y_i^-`. Tablewise `x + y − w` with `w` the
/// degenerate table on the shared `i`-boundary.
pub fn nu_compose(adc: &Adc, x: &NuCell, y: &NuCell, i: usize) -> Result<NuCell> {
    if x.dim() != y.dim() {
        return Err(Error::NotComposable(i));
    }
    if i >= x.dim() {
        return Err(Error::NotComposable(i));
    }
    for j in 0..i {
        if x.levels[j] != y.levels[j] {
            return Err(Error::NotComposable(i));
        }
    }
    if x.levels[i].1 != y.levels[i].0 {
        return Err(Error::NotComposable(i));
    }
    let mut levels = Vec::with_capacity(x.levels.len());
    for j in 0..x.levels.len() {
        if j < i {
            levels.push(x.levels[j].clone());
        } else if j == i {
            levels.push((x.levels[j].0.clone(), y.levels[j].1.clone()));
        } else {
            levels.push((
                x.levels[j].0.add(&y.levels[j].0),
                x.levels[j].1.add(&y.levels[j].1),
            ));
        }
    }
    let cell = NuCell { levels };
    debug_assert!(cell.validate(adc).is_ok());
    Ok(cell)
}

/// All cells of dimension ≤ `max_dim` with coefficients ≤ `config.coeff_cap`,
/// in canonical order. Degenerate cells (identities) are included.
pub fn nu_cells(adc: &Adc, max_dim: usize, config: &NuConfig) -> Result<Vec<NuCell>> {
    let conditions = adc.check_basis_conditions();
    if !conditions.all_true() {
        return Err(Error::Precondition(
            "nu_cells requires a unital, atomic, loop-free basis".into(),
        ));
    }
    if config.coeff_cap < 1 {
        return Err(Error::Precondition("coeff_cap must be at least 1".into()));
    }
    let mut search = Search::new(adc, config.coeff_cap, config.node_budget);
    let mut out = BTreeSet::new();
    // Partial tables with an open top gap; extended one level at a time.
    let mut frontier: Vec<Vec<(Chain, Chain)>> = Vec::new();
    let zero_gap = Chain::zero(0);
    let vertices = search.solve(0, &zero_gap)?;
    for minus in &vertices {
        for plus in &vertices {
            frontier.push(vec![(minus.clone(), plus.clone())]);
            if minus == plus {
                out.insert(NuCell { levels: vec![(minus.clone(), plus.clone())] });
            }
        }
    }
    for dim in 1..=max_dim {
        let mut next_frontier = Vec::new();
        for partial in &frontier {
            let (prev_minus, prev_plus) = partial.last().unwrap();
            let gap = prev_plus.sub(prev_minus);
            let fillers = search.solve(dim, &gap)?;
            for minus in &fillers {
                for plus in &fillers {
                    if minus == plus {
                        let mut levels = partial.clone();
                        levels.push((minus.clone(), plus.clone()));
                        out.insert(NuCell { levels });
                    }
                    if dim < max_dim {
                        let mut levels = partial.clone();
                        levels.push((minus.clone(), plus.clone()));
                        next_frontier.push(levels);
                    }
                }
            }
        }
        frontier = next_frontier;
    }
    Ok(out.into_iter().collect())
}

/// Count non-degenerate cells per dimension.
pub fn nondegenerate_counts(cells: &[NuCell], max_dim: usize) -> Vec<usize> {
    let mut counts = vec![0usize; max_dim + 1];
    for cell in cells {
        if !cell.is_degenerate() {
            counts[cell.dim()] += 1;
        }
    }
    counts
}

struct Search<'a> {
    adc: &'a Adc,
    cap: i64,
    budget: u64,
    nodes: u64,
    solutions: BTreeMap<(usize, Chain), Vec<Chain>>,
    /// Per degree: `suffix_weight[d][idx][ℓ]` bounds how much the elements
    /// from position `idx` onwards can still contribute to coefficient `ℓ`
    /// of the boundary (∂-weights) or to the augmentation (degree 0).
    suffix_weight: BTreeMap<usize, Vec<BTreeMap<crate::label::Label, i64>>>,
    suffix_eps: BTreeMap<usize, Vec<i64>>,
}

impl<'a> Search<'a> {
    fn new(adc: &'a Adc, cap: i64, budget: u64) -> Search<'a> {
        Search {
            adc,
            cap,
            budget,
            nodes: 0,
            solutions: BTreeMap::new(),
            suffix_weight: BTreeMap::new(),
            suffix_eps: BTreeMap::new(),
        }
    }

    fn weights_for(&mut self, d: usize) -> &Vec<BTreeMap<crate::label::Label, i64>> {
        let adc = self.adc;
        let cap = self.cap;
        self.suffix_weight.entry(d).or_insert_with(|| {
            let basis = adc.basis_of_degree(d);
            let mut out = vec![BTreeMap::new(); basis.len() + 1];
            for idx in (0..basis.len()).rev() {
                let mut acc = out[idx + 1].clone();
                if d >= 1 {
                    for (l, k) in adc.diff_of(&basis[idx]).iter() {
                        *acc.entry(l.clone()).or_insert(0) += k.abs() * cap;
                    }
                }
                out[idx] = acc;
            }
            out
        })
    }

    fn eps_for(&mut self, d: usize) -> &Vec<i64> {
        let adc = self.adc;
        let cap = self.cap;
        self.suffix_eps.entry(d).or_insert_with(|| {
            let basis = adc.basis_of_degree(d);
            let mut out = vec![0i64; basis.len() + 1];
            for idx in (0..basis.len()).rev() {
                let eps = if d == 0 { adc.aug_of(&basis[idx]).abs() } else { 0 };
                out[idx] = out[idx + 1] + eps * cap;
            }
            out
        })
    }

    /// All non-negative chains `ξ` of degree `d` with coefficients ≤ cap and
    /// `∂ξ = gap`; for `d = 0` the constraint is `ε(ξ) = 1` instead.
    fn solve(&mut self, d: usize, gap: &Chain) -> Result<Vec<Chain>> {
        let key = (d, gap.clone());
        if let Some(sols) = self.solutions.get(&key) {
            return Ok(sols.clone());
        }
        let basis = self.adc.basis_of_degree(d);
        self.weights_for(d);
        self.eps_for(d);
        let mut sols = Vec::new();
        let mut current = Chain::zero(d);
        let mut residual = gap.clone();
        let mut eps_residual = if d == 0 { 1i64 } else { 0 };
        self.enumerate(d, &basis, 0, &mut current, &mut residual, &mut eps_residual, &mut sols)?;
        sols.sort();
        self.solutions.insert(key, sols.clone());
        Ok(sols)
    }

    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded(format!(
                "cell search exceeded {} nodes",
                self.budget
            )));
        }
        Ok(())
    }

    /// Feasibility bound: remaining elements cannot move any residual
    /// coefficient (or the augmentation target) by more than the suffix
    /// weights allow.
    fn feasible(&self, d: usize, idx: usize, residual: &Chain, eps_residual: i64) -> bool {
        if d == 0 {
            return eps_residual.abs() <= self.suffix_eps[&d][idx];
        }
        let weights = &self.suffix_weight[&d][idx];
        residual
            .iter()
            .all(|(l, k)| k.abs() <= weights.get(l).copied().unwrap_or(0))
    }

    #[allow(clippy::too_many_arguments)]
    fn enumerate(
        &mut self,
        d: usize,
        basis: &[crate::label::Label],
        idx: usize,
        current: &mut Chain,
        residual: &mut Chain,
        eps_residual: &mut i64,
        sols: &mut Vec<Chain>,
    ) -> Result<()> {
        self.tick()?;
        if idx == basis.len() {
            if residual.is_zero() && *eps_residual == 0 {
                sols.push(current.clone());
            }
            return Ok(());
        }
        if !self.feasible(d, idx, residual, *eps_residual) {
            return Ok(());
        }
        let d_elem = if d >= 1 { self.adc.diff_of(&basis[idx]).clone() } else { Chain::zero(0) };
        let eps = if d == 0 { self.adc.aug_of(&basis[idx]) } else { 0 };
        for k in 0..=self.cap {
            if k > 0 {
                current.add_term(basis[idx].clone(), 1);
                if d >= 1 {
                    *residual = residual.sub(&d_elem);
                } else {
                    *eps_residual -= eps;
                }
            }
            self.enumerate(d, basis, idx + 1, current, residual, eps_residual, sols)?;
            if k == self.cap {
                current.add_term(basis[idx].clone(), -k);
                if d >= 1 {
                    *residual = residual.add(&d_elem.scale(k));
                } else {
                    *eps_residual += eps * k;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adc::Adc;

    fn grid() -> Adc {
        Adc::path(1).tensor(&Adc::path(1))
    }

    #[test]
    fn grid_cell_counts_match_frozen_values() {
        // Independent hand count for [1]⊗[1]: 4 vertices, 6 directed paths
        // (4 edges + 2 two-step corners), 1 filling square.
        let adc = grid();
        let cells = nu_cells(&adc, 2, &NuConfig::default()).unwrap();
        assert_eq!(nondegenerate_counts(&cells, 2), vec![4, 6, 1]);
    }

    #[test]
    fn point_has_one_cell_per_dimension() {
        let adc = Adc::point();
        let cells = nu_cells(&adc, 4, &NuConfig::default()).unwrap();
        for d in 0..=4 {
            assert_eq!(cells.iter().filter(|c| c.dim() == d).count(), 1);
        }
    }

    #[test]
    fn compose_edges_of_the_grid_along_a_corner() {
        let adc = grid();
        let cells = nu_cells(&adc, 1, &NuConfig::default()).unwrap();
        let corner_path_expected = {
            // v1⊗e + e⊗v0 rendered in path labels: 1⊗e0 + e0⊗0.
            use crate::label::Label;
            Chain::from_terms(
                1,
                [
                    (Label::tensor(Label::name("1"), Label::name("e0")), 1),
                    (Label::tensor(Label::name("e0"), Label::name("0")), 1),
                ],
            )
        };
        let edges: Vec<&NuCell> = cells.iter().filter(|c| !c.is_degenerate()).collect();
        let mut found = false;
        for x in &edges {
            for y in &edges {
                if let Ok(z) = nu_compose(&adc, x, y, 0) {
                    if *z.top() == corner_path_expected {
                        found = true;
                    }
                }
            }
        }
        assert!(found, "composite along the corner not found");
    }

    #[test]
    fn compose_with_identity_is_identity_law() {
        let adc = grid();
        let cells = nu_cells(&adc, 2, &NuConfig::default()).unwrap();
        for cell in cells.iter().filter(|c| c.dim() == 1) {
            let left = cell.source(0).raise_to(&adc, 1);
            let right = cell.target(0).raise_to(&adc, 1);
            assert_eq!(nu_compose(&adc, &left, cell, 0).unwrap(), *cell);
            assert_eq!(nu_compose(&adc, cell, &right, 0).unwrap(), *cell);
        }
    }

    #[test]
    fn whisker_decomposition_of_zero_composites() {
        // For 0-composable 2-cells x, y, the composite equals both whisker
        // decompositions through the intermediate 1-boundaries.
        let globe2 = crate::theta::GlobularSum::globe(2);
        let adc = crate::theta::to_adc(&globe2).tensor(&Adc::path(1));
        let cells = nu_cells(&adc, 2, &NuConfig::default()).unwrap();
        let two: Vec<&NuCell> = cells.iter().filter(|c| c.dim() == 2).collect();
        let mut checked = 0usize;
        for x in &two {
            for y in &two {
                let Ok(direct) = nu_compose(&adc, x, y, 0) else { continue };
                let a1 = nu_compose(&adc, &x.source(1).raise_to(&adc, 2), y, 0).unwrap();
                let a2 = nu_compose(&adc, x, &y.target(1).raise_to(&adc, 2), 0).unwrap();
                assert_eq!(nu_compose(&adc, &a1, &a2, 1).unwrap(), direct);
                let b1 = nu_compose(&adc, x, &y.source(1).raise_to(&adc, 2), 0).unwrap();
                let b2 = nu_compose(&adc, &x.target(1).raise_to(&adc, 2), y, 0).unwrap();
                assert_eq!(nu_compose(&adc, &b1, &b2, 1).unwrap(), direct);
                checked += 1;
            }
        }
        assert!(checked > 0);
    }

    #[test]
    fn loop_complexes_are_rejected() {
        use crate::label::Label;
        let x = Label::name("x");
        let y = Label::name("y");
        let a = Label::name("a");
        let b = Label::name("b");
        let adc = Adc::new(
            vec![(x.clone(), 0), (y.clone(), 0), (a.clone(), 1), (b.clone(), 1)],
            vec![
                (a, Chain::from_terms(0, [(y.clone(), 1), (x.clone(), -1)])),
                (b, Chain::from_terms(0, [(x.clone(), 1), (y.clone(), -1)])),
            ],
            vec![(x, 1), (y, 1)],
        )
        .unwrap();
        assert!(matches!(
            nu_cells(&adc, 1, &NuConfig::default()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn budget_error_is_reported() {
        let adc = grid();
        let config = NuConfig { coeff_cap: 1, node_budget: 3 };
        match nu_cells(&adc, 2, &config) {
            Err(Error::BudgetExceeded(_)) => {}
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn interchange_probe_on_globe_times_interval() {
        // (a ∘0 b) ∘1 (c ∘0 d) = (a ∘1 c) ∘0 (b ∘1 d) wherever defined.
        let globe2 = crate::theta::GlobularSum::globe(2);
        let adc = crate::theta::to_adc(&globe2).tensor(&Adc::path(1));
        let cells = nu_cells(&adc, 2, &NuConfig::default()).unwrap();
        let two: Vec<&NuCell> = cells.iter().filter(|c| c.dim() == 2).collect();
        let mut checked = 0usize;
        for a in &two {
            for b in &two {
                let Ok(ab) = nu_compose(&adc, a, b, 0) else { continue };
                for c in &two {
                    let Ok(ac) = nu_compose(&adc, a, c, 1) else { continue };
                    for d in &two {
                        let (Ok(cd), Ok(bd)) =
                            (nu_compose(&adc, c, d, 0), nu_compose(&adc, b, d, 1))
                        else {
                            continue;
                        };
                        let lhs = nu_compose(&adc, &ab, &cd, 1);
                        let rhs = nu_compose(&adc, &ac, &bd, 0);
                        if let (Ok(lhs), Ok(rhs)) = (lhs, rhs) {
                            assert_eq!(lhs, rhs);
                            checked += 1;
                        }
                    }
                }
            }
        }
        assert!(checked > 0, "no interchange instances were defined");
    }
}
