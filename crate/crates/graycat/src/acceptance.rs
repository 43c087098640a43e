//! The verification suite: ten exact-arithmetic criteria over the built-in
//! corpus, each with a pinned wall-clock budget. Every check is exact
//! integer equality; a criterion passes only if all its checks hold and it
//! finishes inside its budget.

use std::time::Instant;

use crate::adc::Adc;
use crate::chain::Chain;
use crate::corpus;
use crate::doublecat::{
    check_two_sided_fibration, companion_uniqueness_check, companions_from_fibration,
};
use crate::graymaps::{
    duality_tensor_check, p_s_nm, verify_cosuspension, verify_susp_colimit,
    verify_susp_tensor_decomposition,
};
use crate::nu::{nondegenerate_counts, nu_cells, NuConfig};
use crate::rng::SplitMix64;
use crate::squarecech::{
    cech_segal_iso, cube_level, sq2, sq_pair, verify_sq_fully_faithful, verify_sq_image,
    zero_surjectivity_tensor_probe, Filtration2,
};
use crate::strictcat::{
    enumerate_functors, factorize, is_n_fully_faithful, is_n_surjective,
    lifting_oracle_n_surjective, CatFunctor, FiniteStrictNCat,
};
use crate::theta::to_adc;

#[derive(Clone, Copy, Debug)]
pub struct AcceptanceConfig {
    pub nu: NuConfig,
    pub seed: u64,
}

impl Default for AcceptanceConfig {
    fn default() -> Self {
        AcceptanceConfig { nu: NuConfig::default(), seed: 1 }
    }
}

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub details: String,
    pub millis: u128,
    pub budget_millis: u128,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] criterion {:2} {:<28} {:>6} ms (budget {:>6} ms)  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.millis,
            self.budget_millis,
            self.details
        )
    }
}

type CriterionFn = fn(&AcceptanceConfig) -> Result<String, String>;

const CRITERIA: &[(usize, &str, u128, CriterionFn)] = &[
    (1, "adc-validity-and-tensor", 10_000, c1_tensor_validity),
    (2, "nu-cell-counts", 1_000, c2_nu_counts),
    (3, "section-identities", 5_000, c3_sections),
    (4, "decompositions", 30_000, c4_decompositions),
    (5, "dualities", 5_000, c5_dualities),
    (6, "companion-calculus", 20_000, c6_companions),
    (7, "fibration-lifting", 30_000, c7_fibration),
    (8, "square-image-fidelity", 60_000, c8_square_functors),
    (9, "surjectivity-calculus", 30_000, c9_surjectivity),
    (10, "cech-segal-levels", 10_000, c10_cech),
];

pub fn criterion_ids() -> Vec<usize> {
    CRITERIA.iter().map(|(id, _, _, _)| *id).collect()
}

pub fn run_criterion(id: usize, config: &AcceptanceConfig) -> CriterionResult {
    let (_, name, budget, f) = CRITERIA
        .iter()
        .find(|(cid, _, _, _)| *cid == id)
        .expect("unknown criterion id");
    let start = Instant::now();
    let outcome = f(config);
    let millis = start.elapsed().as_millis();
    let (mut passed, details) = match outcome {
        Ok(details) => (true, details),
        Err(details) => (false, details),
    };
    let mut details = details;
    if millis > *budget {
        passed = false;
        details = format!("{details}; exceeded time budget");
    }
    CriterionResult { id, name, passed, details, millis, budget_millis: *budget }
}

pub fn run_all(config: &AcceptanceConfig) -> Vec<CriterionResult> {
    criterion_ids().into_iter().map(|id| run_criterion(id, config)).collect()
}

fn corpus_adc_pairs(max_total_dim: usize) -> Vec<(String, Adc, Adc)> {
    let sums = corpus::corpus_sums();
    let mut out = Vec::new();
    for (na, a) in &sums {
        for (nb, b) in &sums {
            if a.dimension() + b.dimension() <= max_total_dim {
                out.push((format!("{na}⊗{nb}"), to_adc(a), to_adc(b)));
            }
        }
    }
    out
}

fn c1_tensor_validity(_config: &AcceptanceConfig) -> Result<String, String> {
    let pairs = corpus_adc_pairs(4);
    let count = pairs.len();
    for (name, a, b) in pairs {
        let t = a.tensor(&b);
        let report = t.validate();
        if !report.is_valid() {
            return Err(format!("{name}: {}", report.violations.join("; ")));
        }
        let conditions = t.check_basis_conditions();
        if !conditions.all_true() {
            return Err(format!("{name}: basis conditions {conditions:?}"));
        }
    }
    Ok(format!("{count} tensor pairs valid with unital/atomic/loop-free bases"))
}

/// Independent brute-force table enumerator: no boundary-equation solver, no
/// memoization — raw products of all bounded non-negative chains, filtered by
/// the cell conditions.
fn oracle_cell_counts(adc: &Adc, max_dim: usize, cap: i64) -> Vec<usize> {
    fn all_chains(adc: &Adc, degree: usize, cap: i64) -> Vec<Chain> {
        let basis = adc.basis_of_degree(degree);
        let mut out = vec![Chain::zero(degree)];
        for label in basis {
            let mut next = Vec::new();
            for chain in &out {
                for k in 0..=cap {
                    let mut c = chain.clone();
                    c.add_term(label.clone(), k);
                    next.push(c);
                }
            }
            out = next;
        }
        out
    }
    let chains: Vec<Vec<Chain>> = (0..=max_dim).map(|d| all_chains(adc, d, cap)).collect();
    let mut counts = Vec::new();
    // Dimension 0 cells.
    let level0: Vec<(Chain, Chain)> = chains[0]
        .iter()
        .filter(|c| adc.augmentation(c) == 1)
        .map(|c| (c.clone(), c.clone()))
        .collect();
    counts.push(level0.len());
    // Open tables of height 0: pairs of level-0 chains.
    let mut open: Vec<Vec<(Chain, Chain)>> = Vec::new();
    for a in chains[0].iter().filter(|c| adc.augmentation(c) == 1) {
        for b in chains[0].iter().filter(|c| adc.augmentation(c) == 1) {
            open.push(vec![(a.clone(), b.clone())]);
        }
    }
    for level in chains.iter().take(max_dim + 1).skip(1) {
        let mut nondeg = 0usize;
        let mut next_open = Vec::new();
        for table in &open {
            let (prev_minus, prev_plus) = table.last().unwrap();
            let gap = prev_plus.sub(prev_minus);
            for a in level {
                if adc.boundary(a) != gap {
                    continue;
                }
                if !a.is_zero() {
                    // A closed table at this level is a cell; count the
                    // non-degenerate ones.
                    nondeg += 1;
                }
                for b in level {
                    if adc.boundary(b) != gap {
                        continue;
                    }
                    let mut t = table.clone();
                    t.push((a.clone(), b.clone()));
                    next_open.push(t);
                }
            }
        }
        counts.push(nondeg);
        open = next_open;
    }
    counts
}

fn c2_nu_counts(config: &AcceptanceConfig) -> Result<String, String> {
    let grid = corpus::interval().tensor(&corpus::interval());
    let cells = nu_cells(&grid, 2, &config.nu).map_err(|e| e.to_string())?;
    let counts = nondegenerate_counts(&cells, 2);
    if counts != vec![4, 6, 1] {
        return Err(format!("search found {counts:?}, expected [4, 6, 1]"));
    }
    let oracle = oracle_cell_counts(&grid, 2, config.nu.coeff_cap);
    if oracle != vec![4, 6, 1] {
        return Err(format!("oracle found {oracle:?}, expected [4, 6, 1]"));
    }
    // The cap-1 enumeration is complete here: cap 2 finds nothing new.
    let cap2 = NuConfig { coeff_cap: 2, ..config.nu };
    let cells2 = nu_cells(&grid, 2, &cap2).map_err(|e| e.to_string())?;
    if cells2.len() != cells.len() {
        return Err(format!(
            "coefficient cap 1 is incomplete: {} cells at cap 1, {} at cap 2",
            cells.len(),
            cells2.len()
        ));
    }
    Ok("search = oracle = (4, 6, 1) non-degenerate cells; cap 1 complete".into())
}

fn c3_sections(_config: &AcceptanceConfig) -> Result<String, String> {
    let globe2 = to_adc(&crate::theta::GlobularSum::globe(2));
    let mut checked = 0usize;
    for a in [Adc::point(), corpus::interval(), globe2] {
        for n in 1..=3 {
            p_s_nm(&a, n, 1).map_err(|e| format!("(n={n}, m=1): {e}"))?;
            checked += 1;
        }
    }
    for c in [Adc::point(), corpus::interval()] {
        for (n, m) in [(1, 2), (2, 2)] {
            p_s_nm(&c, n, m).map_err(|e| format!("(n={n}, m={m}): {e}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} section identities hold on every basis element"))
}

fn c4_decompositions(_config: &AcceptanceConfig) -> Result<String, String> {
    let pairs = corpus_adc_pairs(2);
    let mut count = 0usize;
    for (name, a, b) in &pairs {
        verify_susp_tensor_decomposition(a, b).map_err(|e| format!("{name}: {e}"))?;
        count += 1;
    }
    let edge = to_adc(&crate::theta::GlobularSum::globe(1));
    let simplex = to_adc(&crate::theta::GlobularSum::linear(2));
    let globe2 = to_adc(&crate::theta::GlobularSum::globe(2));
    let susp_cases: Vec<(&str, &Adc, usize)> = vec![
        ("point,1", &edge, 1),
        ("edge,1", &edge, 1),
        ("edge,2", &edge, 2),
        ("simplex2,1", &simplex, 1),
        ("globe2,1", &globe2, 1),
    ];
    for (name, c, n) in &susp_cases {
        verify_susp_colimit(c, *n).map_err(|e| format!("susp {name}: {e}"))?;
        verify_cosuspension(c, *n).map_err(|e| format!("cosusp {name}: {e}"))?;
        count += 2;
    }
    Ok(format!("{count} decomposition witnesses verified as basis bijections"))
}

fn c5_dualities(_config: &AcceptanceConfig) -> Result<String, String> {
    let pairs = corpus_adc_pairs(4);
    let count = pairs.len();
    for (name, a, b) in pairs {
        let report = duality_tensor_check(&a, &b);
        if !report.all_hold() {
            return Err(format!("{name}: {:?}", report.failures));
        }
    }
    Ok(format!("op/co/full duality identities and involutivity on {count} pairs"))
}

fn c6_companions(config: &AcceptanceConfig) -> Result<String, String> {
    let cats = corpus::corpus_2cats(&config.nu).map_err(|e| e.to_string())?;
    let mut vcells_checked = 0usize;
    for (name, c) in &cats {
        let d = sq2(c).map_err(|e| format!("{name}: {e}"))?;
        for f in 0..d.num_vcells() {
            let triples = d.find_companions(f);
            if triples.is_empty() {
                return Err(format!("{name}: vcell {f} has no companion"));
            }
            let report = companion_uniqueness_check(&d, f);
            if !report.passes() {
                return Err(format!("{name}: uniqueness fails at vcell {f}: {:?}", report.violations));
            }
            vcells_checked += 1;
        }
        for f in 0..d.num_vcells() {
            for g in 0..d.num_vcells() {
                if d.vcells[f].tgt != d.vcells[g].src {
                    continue;
                }
                let fg = d.v_then(f, g).map_err(|e| e.to_string())?;
                let ft = d.find_companions(f)[0];
                let gt = d.find_companions(g)[0];
                let composite = d
                    .companion_of_composite(f, &ft, g, &gt)
                    .map_err(|e| format!("{name}: {e}"))?;
                if !d.find_companions(fg).contains(&composite) {
                    return Err(format!(
                        "{name}: composite companion of ({f}, {g}) not found by brute force"
                    ));
                }
            }
        }
    }
    Ok(format!(
        "every vertical cell companioned in sq2 of {} corpus 2-categories ({vcells_checked} cells)",
        cats.len()
    ))
}

fn c7_fibration(config: &AcceptanceConfig) -> Result<String, String> {
    let cats = corpus::corpus_2cats(&config.nu).map_err(|e| e.to_string())?;
    for (name, c) in &cats {
        let d = sq2(c).map_err(|e| format!("{name}: {e}"))?;
        let marked = d.companion_marking().map_err(|e| format!("{name}: {e}"))?;
        let report = check_two_sided_fibration(&marked);
        if !report.passes() {
            return Err(format!("{name}: {:?}", report.failures));
        }
        let extracted = companions_from_fibration(&marked).map_err(|e| format!("{name}: {e}"))?;
        if extracted.len() != d.num_vcells() {
            return Err(format!("{name}: companion extraction incomplete"));
        }
        if !marked.forget_marking().is_accompanied() {
            return Err(format!("{name}: unmarked instance is not accompanied"));
        }
        // Lift uniqueness among bicartesian squares with the given boundary
        // data.
        let bicartesian = d.bicartesian_set();
        for u in 0..d.num_hcells() {
            for t in 0..d.num_vcells() {
                if d.vcells[t].src != d.hcells[u].tgt {
                    continue;
                }
                let tdata = d.find_companions(t)[0];
                let lift = d.cocartesian_lift(u, &tdata).map_err(|e| e.to_string())?;
                let hits: Vec<usize> = bicartesian
                    .iter()
                    .copied()
                    .filter(|s| {
                        let sq = &d.squares[*s];
                        sq.top == u && sq.left == d.vid[d.hcells[u].src] && sq.right == t
                    })
                    .collect();
                if hits != vec![lift] {
                    return Err(format!(
                        "{name}: cocartesian lift not unique at hcell {u}, vcell {t}"
                    ));
                }
            }
            for s in 0..d.num_vcells() {
                if d.vcells[s].tgt != d.hcells[u].src {
                    continue;
                }
                let sdata = d.find_companions(s)[0];
                let lift = d.cartesian_lift(u, &sdata).map_err(|e| e.to_string())?;
                let hits: Vec<usize> = bicartesian
                    .iter()
                    .copied()
                    .filter(|sq_idx| {
                        let sq = &d.squares[*sq_idx];
                        sq.bottom == u && sq.left == s && sq.right == d.vid[d.hcells[u].tgt]
                    })
                    .collect();
                if hits != vec![lift] {
                    return Err(format!(
                        "{name}: cartesian lift not unique at hcell {u}, vcell {s}"
                    ));
                }
            }
        }
    }
    Ok(format!(
        "fibration lifting, companion extraction and lift uniqueness on {} corpus instances",
        cats.len()
    ))
}

fn c8_square_functors(config: &AcceptanceConfig) -> Result<String, String> {
    let cats = corpus::corpus_2cats(&config.nu).map_err(|e| e.to_string())?;
    for (name, c) in &cats {
        let report = verify_sq_image(c).map_err(|e| format!("{name}: {e}"))?;
        if !report.passes() {
            return Err(format!(
                "{name}: image characterization fails (accompanied={}, complete={}, companions={})",
                report.accompanied, report.complete, report.every_horizontal_companion
            ));
        }
    }
    let tiny = corpus::tiny_2cats(&config.nu).map_err(|e| e.to_string())?;
    let mut pair_count = 0usize;
    for (na, a) in &tiny {
        for (nb, b) in &tiny {
            let report =
                verify_sq_fully_faithful(a, b, 1 << 24).map_err(|e| format!("{na}→{nb}: {e}"))?;
            if !report.bijective {
                return Err(format!(
                    "{na}→{nb}: {} functors vs {} double functors",
                    report.functor_count, report.double_functor_count
                ));
            }
            pair_count += 1;
        }
    }
    let arrow = corpus::named_2cat("arrow", &config.nu)
        .map_err(|e| e.to_string())?
        .unwrap();
    let level = cube_level(&arrow, 1, 1, &config.nu).map_err(|e| e.to_string())?;
    if level != 6 {
        return Err(format!("cube level (1,1) of the walking arrow is {level}, expected 6"));
    }
    if !zero_surjectivity_tensor_probe(&config.nu).map_err(|e| e.to_string())? {
        return Err("0-surjectivity is not preserved by ⊗[1] on the probe instance".into());
    }
    Ok(format!(
        "image holds on {} corpus categories; {pair_count} fully-faithful bijections; cube(1,1)=6",
        cats.len()
    ))
}

fn c9_surjectivity(config: &AcceptanceConfig) -> Result<String, String> {
    let pool: Vec<(&str, FiniteStrictNCat)> = {
        let mut out = Vec::new();
        for name in ["arrow", "simplex2", "walking2cell", "vpair2", "terminal"] {
            out.push((
                name,
                corpus::named_2cat(name, &config.nu)
                    .map_err(|e| e.to_string())?
                    .unwrap(),
            ));
        }
        out
    };
    let mut functor_cache: Vec<Vec<Option<Vec<CatFunctor>>>> =
        vec![vec![None; pool.len()]; pool.len()];
    let mut rng = SplitMix64::new(config.seed);
    let mut checked = 0usize;
    while checked < 50 {
        let ci = rng.below(pool.len());
        let di = rng.below(pool.len());
        if functor_cache[ci][di].is_none() {
            let fs = enumerate_functors(&pool[ci].1, &pool[di].1).map_err(|e| e.to_string())?;
            functor_cache[ci][di] = Some(fs);
        }
        let fs = functor_cache[ci][di].as_ref().unwrap();
        if fs.is_empty() {
            continue;
        }
        let f = &fs[rng.below(fs.len())];
        let c = &pool[ci].1;
        let d = &pool[di].1;
        for n in 0..=2 {
            let recursive = is_n_surjective(c, d, f, n);
            let oracle = lifting_oracle_n_surjective(c, d, f, n);
            if recursive != oracle {
                return Err(format!(
                    "{}→{}: recursion {recursive} vs lifting oracle {oracle} at n={n}",
                    pool[ci].0, pool[di].0
                ));
            }
            // n-surjective and (n+1)-fully-faithful together force a strict
            // equivalence.
            if recursive
                && is_n_fully_faithful(c, d, f, n + 1)
                && !crate::strictcat::is_strict_equivalence(c, d, f)
            {
                return Err(format!(
                    "{}→{}: n-surjective and (n+1)-fully-faithful but not an equivalence",
                    pool[ci].0, pool[di].0
                ));
            }
            let fac = factorize(c, d, f, n)
                .map_err(|e| format!("{}→{}: factorize n={n}: {e}", pool[ci].0, pool[di].0))?;
            if !is_n_surjective(c, &fac.middle, &fac.first, n) {
                return Err(format!("first factor not {n}-surjective"));
            }
            if !is_n_fully_faithful(&fac.middle, d, &fac.second, n + 1) {
                return Err(format!("second factor not {}-fully-faithful", n + 1));
            }
            if fac.first.then(&fac.second) != *f {
                return Err("factorization does not compose to the input".into());
            }
        }
        checked += 1;
    }
    Ok(format!("{checked} seeded functors agree with the lifting oracle and factor correctly"))
}

fn c10_cech(config: &AcceptanceConfig) -> Result<String, String> {
    let mut filtrations: Vec<(String, Filtration2)> = Vec::new();
    for name in ["arrow", "simplex2", "walking2cell"] {
        let c = corpus::named_2cat(name, &config.nu)
            .map_err(|e| e.to_string())?
            .unwrap();
        filtrations.push((
            format!("canonical({name})"),
            Filtration2::canonical(&c).map_err(|e| e.to_string())?,
        ));
    }
    // A filtration with discrete vertical part.
    {
        let a1 = corpus::named_2cat("arrow", &config.nu)
            .map_err(|e| e.to_string())?
            .unwrap();
        let mut b = crate::strictcat::CatBuilder::new(1).map_err(|e| e.to_string())?;
        b.add_object("0");
        b.add_object("1");
        let i0 = b.add_cell(1, "id0", 0, 0);
        let i1 = b.add_cell(1, "id1", 1, 1);
        b.set_identity(0, 0, i0);
        b.set_identity(0, 1, i1);
        b.set_comp(0, 1, i0, i0, i0);
        b.set_comp(0, 1, i1, i1, i1);
        let a0 = b.finish().map_err(|e| e.to_string())?;
        let map = CatFunctor { maps: vec![vec![0, 1], vec![0, 2]] };
        filtrations.push((
            "discrete⊂arrow".into(),
            Filtration2::new(a0, a1, map).map_err(|e| e.to_string())?,
        ));
    }
    let mut segal_count = 0usize;
    for (name, filt) in &filtrations {
        for m in 2..=3 {
            if !cech_segal_iso(filt, m).map_err(|e| format!("{name}: {e}"))? {
                return Err(format!("{name}: Segal comparison fails at level {m}"));
            }
            segal_count += 1;
        }
    }
    // sq2 agrees with sq_pair over the canonical truncation pair.
    let cats = corpus::corpus_2cats(&config.nu).map_err(|e| e.to_string())?;
    for (name, c) in &cats {
        let direct = sq2(c).map_err(|e| format!("{name}: {e}"))?;
        let filt = Filtration2::canonical(c).map_err(|e| e.to_string())?;
        let paired = sq_pair(&filt).map_err(|e| format!("{name}: {e}"))?;
        if direct != paired {
            return Err(format!("{name}: sq2 differs from sq_pair on the canonical filtration"));
        }
    }
    Ok(format!(
        "{segal_count} Segal isomorphisms verified; sq2 = sq_pair on {} categories",
        cats.len()
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_counts_on_the_globe() {
        let globe2 = to_adc(&crate::theta::GlobularSum::globe(2));
        assert_eq!(oracle_cell_counts(&globe2, 2, 1), vec![2, 2, 1]);
    }
}
