//! Square, pair-square and cube functors at desk scale, plus the Čech-nerve
//! levels of finite strict 2-filtrations.
//!
//! A square of `sq2(c)` is a boundary quadruple of 1-cells together with a
//! 2-cell filling it laxly: with `u` on top, `v` on the bottom, `f` on the
//! left and `g` on the right, the filler runs `g∘u ⇒ v∘f` (top-then-right to
//! left-then-bottom). This orientation is pinned by the bijection between
//! squares and 2-functors out of the lax square (the ν-category of
//! `[1]⊗[1]`), which the tests assert first.

use std::collections::BTreeMap;

use crate::adc::Adc;
use crate::doublecat::{EdgeData, FiniteDoubleCat, SquareData};
use crate::nu::NuConfig;
use crate::strictcat::{
    enumerate_functors, from_nu, is_n_surjective, CatFunctor, Cell, FiniteStrictNCat,
};
use crate::{Error, Result};

/// A finite strict 2-filtration: a 1-category mapping into a 2-category.
#[derive(Clone, Debug)]
pub struct Filtration2 {
    pub a0: FiniteStrictNCat,
    pub a1: FiniteStrictNCat,
    /// Cell maps for dimensions 0 and 1.
    pub map: CatFunctor,
}

impl Filtration2 {
    pub fn new(a0: FiniteStrictNCat, a1: FiniteStrictNCat, map: CatFunctor) -> Result<Filtration2> {
        if a0.max_dim() != 1 || a1.max_dim() != 2 {
            return Err(Error::Precondition(
                "a filtration needs a 1-category mapping into a 2-category".into(),
            ));
        }
        if map.maps.len() != 2 {
            return Err(Error::Precondition("filtration map needs levels 0 and 1".into()));
        }
        let filt = Filtration2 { a0, a1, map };
        filt.check_functor()?;
        Ok(filt)
    }

    fn check_functor(&self) -> Result<()> {
        for dim in 0..=1 {
            if self.map.maps[dim].len() != self.a0.num_cells(dim) {
                return Err(Error::InvalidCategory("filtration map has wrong length".into()));
            }
            for idx in self.map.maps[dim].iter() {
                if *idx >= self.a1.num_cells(dim) {
                    return Err(Error::InvalidCategory("filtration map out of range".into()));
                }
            }
        }
        for x in self.a0.cells(1) {
            let fx = Cell { dim: 1, idx: self.map.maps[1][x.idx] };
            if self.a1.src(fx).idx != self.map.maps[0][self.a0.src(x).idx]
                || self.a1.tgt(fx).idx != self.map.maps[0][self.a0.tgt(x).idx]
            {
                return Err(Error::InvalidCategory("filtration map breaks boundaries".into()));
            }
        }
        for x in self.a0.cells(0) {
            let fx = Cell { dim: 0, idx: self.map.maps[0][x.idx] };
            if self.a1.identity(fx).idx != self.map.maps[1][self.a0.identity(x).idx] {
                return Err(Error::InvalidCategory("filtration map breaks identities".into()));
            }
        }
        for (i, dim, x, y, z) in self.a0.comp_entries() {
            if i != 0 || dim != 1 {
                continue;
            }
            let fx = Cell { dim: 1, idx: self.map.maps[1][x] };
            let fy = Cell { dim: 1, idx: self.map.maps[1][y] };
            let fz = self.map.maps[1][z];
            match self.a1.compose(0, fx, fy) {
                Ok(got) if got.idx == fz => {}
                _ => {
                    return Err(Error::InvalidCategory(
                        "filtration map breaks composition".into(),
                    ))
                }
            }
        }
        Ok(())
    }

    /// The canonical filtration `truncate(c, 1) → c`.
    pub fn canonical(c: &FiniteStrictNCat) -> Result<Filtration2> {
        if c.max_dim() != 2 {
            return Err(Error::Precondition("canonical filtration needs a 2-category".into()));
        }
        let a0 = c.truncate(1);
        let map = CatFunctor {
            maps: vec![(0..c.num_cells(0)).collect(), (0..c.num_cells(1)).collect()],
        };
        Filtration2::new(a0, c.clone(), map)
    }

    /// Pair condition: the map is injective on cells of dimension ≤ 1.
    pub fn is_pair(&self) -> bool {
        for dim in 0..=1 {
            let mut seen = std::collections::BTreeSet::new();
            if !self.map.maps[dim].iter().all(|i| seen.insert(*i)) {
                return false;
            }
        }
        true
    }
}

/// Shared construction behind `sq2` and `sq_pair`: the double category of
/// lax squares of `a1` whose vertical boundaries come from `a0`.
fn lax_square_double_cat(filt: &Filtration2) -> Result<FiniteDoubleCat> {
    let a0 = &filt.a0;
    let a1 = &filt.a1;
    let fmap = &filt.map;
    let objects: Vec<String> = a0.cells(0).map(|o| a0.name(o).to_string()).collect();
    let vcells: Vec<EdgeData> = a0
        .cells(1)
        .map(|x| EdgeData {
            name: a0.name(x).to_string(),
            src: a0.src(x).idx,
            tgt: a0.tgt(x).idx,
        })
        .collect();
    let mut vcomp = BTreeMap::new();
    for (i, dim, x, y, z) in a0.comp_entries() {
        if i == 0 && dim == 1 {
            vcomp.insert((x, y), z);
        }
    }
    let vid: Vec<usize> = a0.cells(0).map(|o| a0.identity(o).idx).collect();

    // Horizontal cells: 1-cells of a1 with both endpoints in the image of a0
    // (unique preimages by the injectivity built into the use sites).
    let obj_image: Vec<usize> = fmap.maps[0].clone();
    let preimage_of = |a1_obj: usize| -> Option<usize> {
        obj_image.iter().position(|w| *w == a1_obj)
    };
    let mut hcells: Vec<EdgeData> = Vec::new();
    let mut hcell_of_a1: BTreeMap<usize, usize> = BTreeMap::new();
    for x in a1.cells(1) {
        let (Some(s), Some(t)) = (preimage_of(a1.src(x).idx), preimage_of(a1.tgt(x).idx))
        else {
            continue;
        };
        hcell_of_a1.insert(x.idx, hcells.len());
        hcells.push(EdgeData { name: a1.name(x).to_string(), src: s, tgt: t });
    }
    let mut hcomp = BTreeMap::new();
    for (i, dim, x, y, z) in a1.comp_entries() {
        if i != 0 || dim != 1 {
            continue;
        }
        let (Some(nx), Some(ny), Some(nz)) =
            (hcell_of_a1.get(&x), hcell_of_a1.get(&y), hcell_of_a1.get(&z))
        else {
            continue;
        };
        hcomp.insert((*nx, *ny), *nz);
    }
    let hid: Vec<usize> = obj_image
        .iter()
        .map(|w| hcell_of_a1[&a1.identity(Cell { dim: 0, idx: *w }).idx])
        .collect();

    // Squares: (top u, bottom v, left f, right g, filler α: g∘u ⇒ v∘f).
    let f1 = |f: usize| Cell { dim: 1, idx: fmap.maps[1][f] };
    // Reverse map: hcell index -> a1 cell index.
    let mut a1_cell_of_hcell = vec![0usize; hcells.len()];
    for (a1_idx, h_idx) in &hcell_of_a1 {
        a1_cell_of_hcell[*h_idx] = *a1_idx;
    }
    let mut squares: Vec<SquareData> = Vec::new();
    let mut square_index: BTreeMap<(usize, usize, usize, usize, usize), usize> = BTreeMap::new();
    for (u, hu) in hcells.iter().enumerate() {
        for (v, hv) in hcells.iter().enumerate() {
            for (f, vf) in vcells.iter().enumerate() {
                if vf.src != hu.src || vf.tgt != hv.src {
                    continue;
                }
                for (g, vg) in vcells.iter().enumerate() {
                    if vg.src != hu.tgt || vg.tgt != hv.tgt {
                        continue;
                    }
                    let ucell = Cell { dim: 1, idx: a1_cell_of_hcell[u] };
                    let vcell = Cell { dim: 1, idx: a1_cell_of_hcell[v] };
                    let lax_src = a1.compose(0, ucell, f1(g))?;
                    let lax_tgt = a1.compose(0, f1(f), vcell)?;
                    for alpha in a1.cells(2) {
                        if a1.src(alpha) != lax_src || a1.tgt(alpha) != lax_tgt {
                            continue;
                        }
                        let key = (u, v, f, g, alpha.idx);
                        square_index.insert(key, squares.len());
                        squares.push(SquareData {
                            name: format!("[{u},{v};{f},{g};{}]", alpha.idx),
                            top: u,
                            bottom: v,
                            left: f,
                            right: g,
                        });
                    }
                }
            }
        }
    }
    // Keep the component tuple of every square alongside its index.
    let mut fillers = vec![(0usize, 0usize, 0usize, 0usize, 0usize); squares.len()];
    for (k, v) in &square_index {
        fillers[*v] = *k;
    }

    let raise2 = |x: Cell| -> Cell { a1.raise(x, 2) };
    let mut sq_vcomp = BTreeMap::new();
    let mut sq_hcomp = BTreeMap::new();
    for (ai, &(u, v, f, g, alpha)) in fillers.iter().enumerate() {
        for (bi, &(u2, v2, f2, g2, beta)) in fillers.iter().enumerate() {
            // Vertical stacking: bottom of a = top of b.
            if v == u2 {
                let zf = vcomp[&(f, f2)];
                let zg = vcomp[&(g, g2)];
                let alpha_c = Cell { dim: 2, idx: alpha };
                let beta_c = Cell { dim: 2, idx: beta };
                let step1 = a1.compose(0, alpha_c, raise2(f1(g2)))?;
                let step2 = a1.compose(0, raise2(f1(f)), beta_c)?;
                let gamma = a1.compose(1, step1, step2)?;
                let key = (u, v2, zf, zg, gamma.idx);
                let z = *square_index.get(&key).ok_or_else(|| {
                    Error::InvalidDouble("vertical square composite missing".into())
                })?;
                sq_vcomp.insert((ai, bi), z);
            }
            // Horizontal pasting: right of a = left of b.
            if g == f2 {
                let (Some(&zu), Some(&zv)) = (hcomp.get(&(u, u2)), hcomp.get(&(v, v2)))
                else {
                    continue;
                };
                let alpha_c = Cell { dim: 2, idx: alpha };
                let beta_c = Cell { dim: 2, idx: beta };
                let ucell = Cell { dim: 1, idx: a1_cell_of_hcell[u] };
                let v2cell = Cell { dim: 1, idx: a1_cell_of_hcell[v2] };
                let step1 = a1.compose(0, raise2(ucell), beta_c)?;
                let step2 = a1.compose(0, alpha_c, raise2(v2cell))?;
                let delta = a1.compose(1, step1, step2)?;
                let key = (zu, zv, f, g2, delta.idx);
                let z = *square_index.get(&key).ok_or_else(|| {
                    Error::InvalidDouble("horizontal square composite missing".into())
                })?;
                sq_hcomp.insert((ai, bi), z);
            }
        }
    }
    let mut sq_vid = vec![0usize; hcells.len()];
    for (u, hu) in hcells.iter().enumerate() {
        let ucell = Cell { dim: 1, idx: a1_cell_of_hcell[u] };
        let filler = a1.raise(ucell, 2);
        let key = (u, u, vid[hu.src], vid[hu.tgt], filler.idx);
        sq_vid[u] = *square_index
            .get(&key)
            .ok_or_else(|| Error::InvalidDouble("identity square missing".into()))?;
    }
    let mut sq_hid = vec![0usize; vcells.len()];
    for (f, vf) in vcells.iter().enumerate() {
        let filler = a1.raise(f1(f), 2);
        let key = (hid[vf.src], hid[vf.tgt], f, f, filler.idx);
        sq_hid[f] = *square_index
            .get(&key)
            .ok_or_else(|| Error::InvalidDouble("unit square missing".into()))?;
    }
    Ok(FiniteDoubleCat {
        objects,
        vcells,
        vcomp,
        vid,
        hcells,
        hcomp,
        hid,
        squares,
        sq_vcomp,
        sq_hcomp,
        sq_vid,
        sq_hid,
        marking: None,
    })
}

/// The square functor: lax squares of a 2-category.
pub fn sq2(c: &FiniteStrictNCat) -> Result<FiniteDoubleCat> {
    lax_square_double_cat(&Filtration2::canonical(c)?)
}

/// The pair-square functor: lax squares of `a1` with vertical boundaries from
/// `a0`, for filtrations injective up to dimension 1.
pub fn sq_pair(filt: &Filtration2) -> Result<FiniteDoubleCat> {
    if !filt.is_pair() {
        return Err(Error::Precondition(
            "sq_pair needs the pair condition (injective on cells of dimension ≤ 1)".into(),
        ));
    }
    lax_square_double_cat(filt)
}

/// One čech level with its tuple bookkeeping.
#[derive(Clone, Debug)]
pub struct CechLevel {
    pub cat: FiniteStrictNCat,
    pub objects: Vec<CechObject>,
    pub morphisms: Vec<CechMorphism>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CechObject {
    pub points: Vec<usize>,
    pub hcells: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CechMorphism {
    pub src: usize,
    pub tgt: usize,
    pub vcells: Vec<usize>,
    pub fillers: Vec<usize>,
}

/// Level `m` of the Čech nerve of a filtration: objects are chains of `m`
/// horizontal cells of `a1` between images of `a0`-objects; morphisms are
/// tuples of `a0`-cells with lax fillers.
pub fn cech_level(filt: &Filtration2, m: usize) -> Result<CechLevel> {
    let a0 = &filt.a0;
    let a1 = &filt.a1;
    if m == 0 {
        let objects = a0
            .cells(0)
            .map(|o| CechObject { points: vec![o.idx], hcells: vec![] })
            .collect();
        let morphisms = a0
            .cells(1)
            .map(|x| CechMorphism {
                src: a0.src(x).idx,
                tgt: a0.tgt(x).idx,
                vcells: vec![x.idx],
                fillers: vec![],
            })
            .collect();
        return Ok(CechLevel { cat: a0.clone(), objects, morphisms });
    }
    let f0 = |x: usize| fmapped(filt, 0, x);
    let f1 = |x: usize| Cell { dim: 1, idx: fmapped(filt, 1, x) };

    // Objects: (x_0..x_m, u_1..u_m) with u_i : F(x_{i-1}) → F(x_i).
    let mut objects: Vec<CechObject> = Vec::new();
    let mut stack: Vec<(Vec<usize>, Vec<usize>)> =
        a0.cells(0).map(|o| (vec![o.idx], vec![])).collect();
    for _ in 0..m {
        let mut next = Vec::new();
        for (points, hcells) in &stack {
            let last = *points.last().unwrap();
            for y in a0.cells(0) {
                for u in a1.cells(1) {
                    if a1.src(u).idx == f0(last) && a1.tgt(u).idx == f0(y.idx) {
                        let mut p = points.clone();
                        p.push(y.idx);
                        let mut h = hcells.clone();
                        h.push(u.idx);
                        next.push((p, h));
                    }
                }
            }
        }
        stack = next;
    }
    for (points, hcells) in stack {
        objects.push(CechObject { points, hcells });
    }

    // Morphisms: (f_0..f_m, α_1..α_m), α_i : F(f_i)∘u_i ⇒ v_i∘F(f_{i-1}).
    let mut morphisms: Vec<CechMorphism> = Vec::new();
    let mut morphism_index: BTreeMap<(usize, usize, Vec<usize>, Vec<usize>), usize> =
        BTreeMap::new();
    for (si, source) in objects.iter().enumerate() {
        for (ti, target) in objects.iter().enumerate() {
            // Choices of f_i : x_i → y_i.
            let mut partial: Vec<(Vec<usize>, Vec<usize>)> = vec![(vec![], vec![])];
            for i in 0..=m {
                let mut next = Vec::new();
                for (fs, als) in &partial {
                    for f in a0.cells(1) {
                        if a0.src(f).idx != source.points[i] || a0.tgt(f).idx != target.points[i]
                        {
                            continue;
                        }
                        if i == 0 {
                            next.push((vec![f.idx], als.clone()));
                            continue;
                        }
                        let u = Cell { dim: 1, idx: source.hcells[i - 1] };
                        let v = Cell { dim: 1, idx: target.hcells[i - 1] };
                        let lax_src = a1.compose(0, u, f1(f.idx))?;
                        let lax_tgt = a1.compose(0, f1(fs[i - 1]), v)?;
                        for alpha in a1.cells(2) {
                            if a1.src(alpha) == lax_src && a1.tgt(alpha) == lax_tgt {
                                let mut nf = fs.clone();
                                nf.push(f.idx);
                                let mut na = als.clone();
                                na.push(alpha.idx);
                                next.push((nf, na));
                            }
                        }
                    }
                }
                partial = next;
            }
            for (fs, als) in partial {
                morphism_index.insert((si, ti, fs.clone(), als.clone()), morphisms.len());
                morphisms.push(CechMorphism { src: si, tgt: ti, vcells: fs, fillers: als });
            }
        }
    }

    // Assemble the 1-category.
    let mut builder = crate::strictcat::CatBuilder::new(1)?;
    for (i, o) in objects.iter().enumerate() {
        builder.add_object(format!("{:?}|{:?}#{i}", o.points, o.hcells));
    }
    for (i, mo) in morphisms.iter().enumerate() {
        builder.add_cell(1, format!("m{i}"), mo.src, mo.tgt);
    }
    for (i, o) in objects.iter().enumerate() {
        let fs: Vec<usize> =
            o.points.iter().map(|x| a0.identity(Cell { dim: 0, idx: *x }).idx).collect();
        let als: Vec<usize> = o
            .hcells
            .iter()
            .map(|u| a1.raise(Cell { dim: 1, idx: *u }, 2).idx)
            .collect();
        let id = morphism_index
            .get(&(i, i, fs, als))
            .copied()
            .ok_or_else(|| Error::InvalidCategory("missing identity čech morphism".into()))?;
        builder.set_identity(0, i, id);
    }
    for (ai, ma) in morphisms.iter().enumerate() {
        for (bi, mb) in morphisms.iter().enumerate() {
            if ma.tgt != mb.src {
                continue;
            }
            let mut fs = Vec::with_capacity(m + 1);
            for i in 0..=m {
                let left = Cell { dim: 1, idx: ma.vcells[i] };
                let right = Cell { dim: 1, idx: mb.vcells[i] };
                fs.push(a0.compose(0, left, right)?.idx);
            }
            let mut als = Vec::with_capacity(m);
            for i in 0..m {
                // Same pasting as vertical composition of lax squares.
                let alpha = Cell { dim: 2, idx: ma.fillers[i] };
                let beta = Cell { dim: 2, idx: mb.fillers[i] };
                let g2 = f1(mb.vcells[i + 1]);
                let f_low = f1(ma.vcells[i]);
                let step1 = a1.compose(0, alpha, a1.raise(g2, 2))?;
                let step2 = a1.compose(0, a1.raise(f_low, 2), beta)?;
                als.push(a1.compose(1, step1, step2)?.idx);
            }
            let z = morphism_index
                .get(&(ma.src, mb.tgt, fs, als))
                .copied()
                .ok_or_else(|| Error::InvalidCategory("missing composite čech morphism".into()))?;
            builder.set_comp(0, 1, ai, bi, z);
        }
    }
    Ok(CechLevel { cat: builder.finish()?, objects, morphisms })
}

fn fmapped(filt: &Filtration2, dim: usize, idx: usize) -> usize {
    filt.map.maps[dim][idx]
}

/// Exact Segal comparison: level `m` against the `m`-fold fiber product of
/// level 1 over level 0. Checks the canonical projection is a bijection on
/// objects and morphisms and respects identities and composition.
pub fn cech_segal_iso(filt: &Filtration2, m: usize) -> Result<bool> {
    if m < 2 {
        return Ok(true);
    }
    let level_m = cech_level(filt, m)?;
    let level_1 = cech_level(filt, 1)?;
    let obj_index_1: BTreeMap<(usize, usize, usize), usize> = level_1
        .objects
        .iter()
        .enumerate()
        .map(|(i, o)| ((o.points[0], o.points[1], o.hcells[0]), i))
        .collect();
    let mor_index_1: BTreeMap<(usize, usize, usize, usize, usize), usize> = level_1
        .morphisms
        .iter()
        .enumerate()
        .map(|(i, mo)| {
            let s = &level_1.objects[mo.src];
            let t = &level_1.objects[mo.tgt];
            ((obj_index_1[&(s.points[0], s.points[1], s.hcells[0])],
              obj_index_1[&(t.points[0], t.points[1], t.hcells[0])],
              mo.vcells[0], mo.vcells[1], mo.fillers[0]), i)
        })
        .collect();

    // Objects of the fiber product: m-tuples of level-1 objects with matching
    // endpoint points.
    let mut pb_objects: Vec<Vec<usize>> = vec![vec![]];
    for step in 0..m {
        let mut next = Vec::new();
        for tuple in &pb_objects {
            for (i, o) in level_1.objects.iter().enumerate() {
                if step > 0 {
                    let prev = &level_1.objects[*tuple.last().unwrap()];
                    if prev.points[1] != o.points[0] {
                        continue;
                    }
                }
                let mut t = tuple.clone();
                t.push(i);
                next.push(t);
            }
        }
        pb_objects = next;
    }
    // The canonical map on objects.
    let project_obj = |o: &CechObject| -> Vec<usize> {
        (0..m)
            .map(|i| obj_index_1[&(o.points[i], o.points[i + 1], o.hcells[i])])
            .collect()
    };
    let mut seen = std::collections::BTreeSet::new();
    for o in &level_m.objects {
        if !seen.insert(project_obj(o)) {
            return Ok(false);
        }
    }
    let pb_set: std::collections::BTreeSet<Vec<usize>> = pb_objects.iter().cloned().collect();
    if seen != pb_set {
        return Ok(false);
    }
    // Morphisms: project and compare against tuples of level-1 morphisms
    // sharing their middle a0-cells.
    let mut seen_mor = std::collections::BTreeSet::new();
    for mo in &level_m.morphisms {
        let src = project_obj(&level_m.objects[mo.src]);
        let tgt = project_obj(&level_m.objects[mo.tgt]);
        let parts: Vec<usize> = (0..m)
            .map(|i| {
                mor_index_1[&(src[i], tgt[i], mo.vcells[i], mo.vcells[i + 1], mo.fillers[i])]
            })
            .collect();
        if !seen_mor.insert(parts) {
            return Ok(false);
        }
    }
    // Enumerate fiber-product morphisms directly.
    let mut pb_mor = std::collections::BTreeSet::new();
    for (i1, _m1) in level_1.morphisms.iter().enumerate() {
        let mut partial: Vec<Vec<usize>> = vec![vec![i1]];
        for _ in 1..m {
            let mut next = Vec::new();
            for tuple in &partial {
                let prev = &level_1.morphisms[*tuple.last().unwrap()];
                for (j, mj) in level_1.morphisms.iter().enumerate() {
                    // Shared middle a0-cell and matching gluing object.
                    let prev_tgt_obj = &level_1.objects[prev.tgt];
                    let j_src_obj = &level_1.objects[mj.src];
                    let prev_src_obj = &level_1.objects[prev.src];
                    let j_tgt_obj = &level_1.objects[mj.tgt];
                    if prev.vcells[1] != mj.vcells[0]
                        || prev_src_obj.points[1] != j_src_obj.points[0]
                        || prev_tgt_obj.points[1] != j_tgt_obj.points[0]
                    {
                        continue;
                    }
                    let mut t = tuple.clone();
                    t.push(j);
                    next.push(t);
                }
            }
            partial = next;
        }
        for t in partial {
            pb_mor.insert(t);
        }
    }
    if seen_mor != pb_mor {
        return Ok(false);
    }
    // Functoriality of the comparison: composing upstairs and projecting
    // agrees with componentwise composition in level 1.
    let project_mor = |mo: &CechMorphism| -> Vec<usize> {
        let src = project_obj(&level_m.objects[mo.src]);
        let tgt = project_obj(&level_m.objects[mo.tgt]);
        (0..m)
            .map(|i| mor_index_1[&(src[i], tgt[i], mo.vcells[i], mo.vcells[i + 1], mo.fillers[i])])
            .collect()
    };
    for (ai, ma) in level_m.morphisms.iter().enumerate() {
        for (bi, mb) in level_m.morphisms.iter().enumerate() {
            if ma.tgt != mb.src {
                continue;
            }
            let a_cell = Cell { dim: 1, idx: ai };
            let b_cell = Cell { dim: 1, idx: bi };
            let Ok(z) = level_m.cat.compose(0, a_cell, b_cell) else { return Ok(false) };
            let z_parts = project_mor(&level_m.morphisms[z.idx]);
            let a_parts = project_mor(ma);
            let b_parts = project_mor(mb);
            for i in 0..m {
                let pa = Cell { dim: 1, idx: a_parts[i] };
                let pb = Cell { dim: 1, idx: b_parts[i] };
                let Ok(pz) = level_1.cat.compose(0, pa, pb) else { return Ok(false) };
                if pz.idx != z_parts[i] {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// A map of double categories, stored as index maps.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct DoubleFunctor {
    pub objects: Vec<usize>,
    pub vcells: Vec<usize>,
    pub hcells: Vec<usize>,
    pub squares: Vec<usize>,
}

impl DoubleFunctor {
    pub fn validate(&self, d: &FiniteDoubleCat, e: &FiniteDoubleCat) -> Result<()> {
        let object_ok = self.objects.len() == d.num_objects()
            && self.objects.iter().all(|o| *o < e.num_objects());
        if !object_ok {
            return Err(Error::InvalidDouble("object map malformed".into()));
        }
        let check_edges = |maps: &[usize],
                           src_edges: &Vec<EdgeData>,
                           tgt_edges: &Vec<EdgeData>|
         -> Result<()> {
            if maps.len() != src_edges.len() {
                return Err(Error::InvalidDouble("edge map malformed".into()));
            }
            for (i, e1) in src_edges.iter().enumerate() {
                let img = &tgt_edges[maps[i]];
                if img.src != self.objects[e1.src] || img.tgt != self.objects[e1.tgt] {
                    return Err(Error::InvalidDouble("edge map breaks endpoints".into()));
                }
            }
            Ok(())
        };
        check_edges(&self.vcells, &d.vcells, &e.vcells)?;
        check_edges(&self.hcells, &d.hcells, &e.hcells)?;
        for (i, s) in d.squares.iter().enumerate() {
            let img = &e.squares[self.squares[i]];
            if img.top != self.hcells[s.top]
                || img.bottom != self.hcells[s.bottom]
                || img.left != self.vcells[s.left]
                || img.right != self.vcells[s.right]
            {
                return Err(Error::InvalidDouble("square map breaks boundaries".into()));
            }
        }
        for (a, id) in d.vid.iter().enumerate() {
            if self.vcells[*id] != e.vid[self.objects[a]] {
                return Err(Error::InvalidDouble("vertical identities broken".into()));
            }
        }
        for (a, id) in d.hid.iter().enumerate() {
            if self.hcells[*id] != e.hid[self.objects[a]] {
                return Err(Error::InvalidDouble("horizontal identities broken".into()));
            }
        }
        for (u, s) in d.sq_vid.iter().enumerate() {
            if self.squares[*s] != e.sq_vid[self.hcells[u]] {
                return Err(Error::InvalidDouble("identity squares broken".into()));
            }
        }
        for (f, s) in d.sq_hid.iter().enumerate() {
            if self.squares[*s] != e.sq_hid[self.vcells[f]] {
                return Err(Error::InvalidDouble("unit squares broken".into()));
            }
        }
        for ((x, y), z) in d.vcomp.iter() {
            if e.vcomp.get(&(self.vcells[*x], self.vcells[*y])) != Some(&self.vcells[*z]) {
                return Err(Error::InvalidDouble("vertical composition broken".into()));
            }
        }
        for ((x, y), z) in d.hcomp.iter() {
            if e.hcomp.get(&(self.hcells[*x], self.hcells[*y])) != Some(&self.hcells[*z]) {
                return Err(Error::InvalidDouble("horizontal composition broken".into()));
            }
        }
        for ((x, y), z) in d.sq_vcomp.iter() {
            if e.sq_vcomp.get(&(self.squares[*x], self.squares[*y])) != Some(&self.squares[*z]) {
                return Err(Error::InvalidDouble("square vertical composition broken".into()));
            }
        }
        for ((x, y), z) in d.sq_hcomp.iter() {
            if e.sq_hcomp.get(&(self.squares[*x], self.squares[*y])) != Some(&self.squares[*z]) {
                return Err(Error::InvalidDouble("square horizontal composition broken".into()));
            }
        }
        Ok(())
    }
}

/// Enumerate all double functors by backtracking with boundary pruning and a
/// node budget; deterministic order.
pub fn double_functor_enumerate(
    d: &FiniteDoubleCat,
    e: &FiniteDoubleCat,
    budget: u64,
) -> Result<Vec<DoubleFunctor>> {
    struct Search<'a> {
        d: &'a FiniteDoubleCat,
        e: &'a FiniteDoubleCat,
        budget: u64,
        nodes: u64,
        out: Vec<DoubleFunctor>,
    }
    #[derive(Clone)]
    struct State {
        objects: Vec<Option<usize>>,
        vcells: Vec<Option<usize>>,
        hcells: Vec<Option<usize>>,
        squares: Vec<Option<usize>>,
    }
    impl<'a> Search<'a> {
        fn tick(&mut self) -> Result<()> {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::BudgetExceeded(format!(
                    "double functor search exceeded {} nodes",
                    self.budget
                )));
            }
            Ok(())
        }

        fn go(&mut self, state: &mut State) -> Result<()> {
            self.tick()?;
            // Next unassigned slot: objects, then vcells, hcells, squares.
            if let Some(i) = state.objects.iter().position(|v| v.is_none()) {
                for cand in 0..self.e.num_objects() {
                    state.objects[i] = Some(cand);
                    // Force identities eagerly.
                    let old_v = state.vcells[self.d.vid[i]];
                    let old_h = state.hcells[self.d.hid[i]];
                    state.vcells[self.d.vid[i]] = Some(self.e.vid[cand]);
                    state.hcells[self.d.hid[i]] = Some(self.e.hid[cand]);
                    self.go(state)?;
                    state.vcells[self.d.vid[i]] = old_v;
                    state.hcells[self.d.hid[i]] = old_h;
                    state.objects[i] = None;
                }
                return Ok(());
            }
            let edge_candidates =
                |edges: &Vec<EdgeData>, target: &Vec<EdgeData>, i: usize, st: &State| {
                    let src = st.objects[edges[i].src].unwrap();
                    let tgt = st.objects[edges[i].tgt].unwrap();
                    target
                        .iter()
                        .enumerate()
                        .filter(|(_, e)| e.src == src && e.tgt == tgt)
                        .map(|(j, _)| j)
                        .collect::<Vec<usize>>()
                };
            if let Some(i) = state.vcells.iter().position(|v| v.is_none()) {
                for cand in edge_candidates(&self.d.vcells, &self.e.vcells, i, state) {
                    state.vcells[i] = Some(cand);
                    self.go(state)?;
                    state.vcells[i] = None;
                }
                return Ok(());
            }
            if let Some(i) = state.hcells.iter().position(|v| v.is_none()) {
                for cand in edge_candidates(&self.d.hcells, &self.e.hcells, i, state) {
                    state.hcells[i] = Some(cand);
                    self.go(state)?;
                    state.hcells[i] = None;
                }
                return Ok(());
            }
            // Check 1-cell composition tables before branching on squares.
            for ((x, y), z) in self.d.vcomp.iter() {
                let fx = state.vcells[*x].unwrap();
                let fy = state.vcells[*y].unwrap();
                if self.e.vcomp.get(&(fx, fy)) != Some(&state.vcells[*z].unwrap()) {
                    return Ok(());
                }
            }
            for ((x, y), z) in self.d.hcomp.iter() {
                let fx = state.hcells[*x].unwrap();
                let fy = state.hcells[*y].unwrap();
                if self.e.hcomp.get(&(fx, fy)) != Some(&state.hcells[*z].unwrap()) {
                    return Ok(());
                }
            }
            if let Some(i) = state.squares.iter().position(|v| v.is_none()) {
                // Forced identity squares.
                let sq = &self.d.squares[i];
                let forced = self
                    .d
                    .sq_vid
                    .iter()
                    .position(|s| *s == i)
                    .map(|u| self.e.sq_vid[state.hcells[u].unwrap()])
                    .or_else(|| {
                        self.d
                            .sq_hid
                            .iter()
                            .position(|s| *s == i)
                            .map(|f| self.e.sq_hid[state.vcells[f].unwrap()])
                    });
                let candidates: Vec<usize> = match forced {
                    Some(c) => vec![c],
                    None => {
                        let top = state.hcells[sq.top].unwrap();
                        let bottom = state.hcells[sq.bottom].unwrap();
                        let left = state.vcells[sq.left].unwrap();
                        let right = state.vcells[sq.right].unwrap();
                        self.e
                            .squares
                            .iter()
                            .enumerate()
                            .filter(|(_, s)| {
                                s.top == top
                                    && s.bottom == bottom
                                    && s.left == left
                                    && s.right == right
                            })
                            .map(|(j, _)| j)
                            .collect()
                    }
                };
                for cand in candidates {
                    state.squares[i] = Some(cand);
                    self.go(state)?;
                    state.squares[i] = None;
                }
                return Ok(());
            }
            let functor = DoubleFunctor {
                objects: state.objects.iter().map(|v| v.unwrap()).collect(),
                vcells: state.vcells.iter().map(|v| v.unwrap()).collect(),
                hcells: state.hcells.iter().map(|v| v.unwrap()).collect(),
                squares: state.squares.iter().map(|v| v.unwrap()).collect(),
            };
            if functor.validate(self.d, self.e).is_ok() {
                self.out.push(functor);
            }
            Ok(())
        }
    }
    let mut search = Search { d, e, budget, nodes: 0, out: Vec::new() };
    let mut state = State {
        objects: vec![None; d.num_objects()],
        vcells: vec![None; d.num_vcells()],
        hcells: vec![None; d.num_hcells()],
        squares: vec![None; d.num_squares()],
    };
    search.go(&mut state)?;
    Ok(search.out)
}

/// The double functor induced on lax squares by a 2-functor.
pub fn sq2_of_functor(
    f: &CatFunctor,
    sq_c: &FiniteDoubleCat,
    sq_d: &FiniteDoubleCat,
) -> Result<DoubleFunctor> {
    // Square indices on both sides are recoverable from their names; rebuild
    // instead by recomputing keys.
    let key_of = |dcat: &FiniteDoubleCat, idx: usize| -> (usize, usize, usize, usize, usize) {
        // Names are "[u,v;f,g;alpha]".
        let name = &dcat.squares[idx].name;
        let inner = &name[1..name.len() - 1];
        let parts: Vec<usize> = inner
            .split([',', ';'])
            .map(|p| p.parse().expect("square name component"))
            .collect();
        (parts[0], parts[1], parts[2], parts[3], parts[4])
    };
    let mut index_d: BTreeMap<(usize, usize, usize, usize, usize), usize> = BTreeMap::new();
    for i in 0..sq_d.num_squares() {
        index_d.insert(key_of(sq_d, i), i);
    }
    let mut squares = Vec::with_capacity(sq_c.num_squares());
    for i in 0..sq_c.num_squares() {
        let (u, v, fl, g, alpha) = key_of(sq_c, i);
        let key = (
            f.maps[1][u],
            f.maps[1][v],
            f.maps[1][fl],
            f.maps[1][g],
            f.maps[2][alpha],
        );
        let img = index_d.get(&key).ok_or_else(|| {
            Error::InvalidDouble("functor image square missing".into())
        })?;
        squares.push(*img);
    }
    let functor = DoubleFunctor {
        objects: f.maps[0].clone(),
        vcells: f.maps[1].clone(),
        hcells: f.maps[1].clone(),
        squares,
    };
    functor.validate(sq_c, sq_d)?;
    Ok(functor)
}

#[derive(Clone, Debug)]
pub struct FfReport {
    pub functor_count: usize,
    pub double_functor_count: usize,
    pub bijective: bool,
    pub unmatched: Vec<usize>,
}

/// Fully-faithfulness of the square functor on a pair of 2-categories:
/// sq2 of the functor set must hit every double functor exactly once.
pub fn verify_sq_fully_faithful(
    c: &FiniteStrictNCat,
    d: &FiniteStrictNCat,
    budget: u64,
) -> Result<FfReport> {
    let sq_c = sq2(c)?;
    let sq_d = sq2(d)?;
    let functors = enumerate_functors(c, d)?;
    let doubles = double_functor_enumerate(&sq_c, &sq_d, budget)?;
    let mut images = Vec::new();
    for f in &functors {
        images.push(sq2_of_functor(f, &sq_c, &sq_d)?);
    }
    images.sort();
    let distinct = images.windows(2).all(|w| w[0] != w[1]);
    let mut unmatched = Vec::new();
    for (i, df) in doubles.iter().enumerate() {
        if !images.contains(df) {
            unmatched.push(i);
        }
    }
    Ok(FfReport {
        functor_count: functors.len(),
        double_functor_count: doubles.len(),
        bijective: distinct && unmatched.is_empty() && images.len() == doubles.len(),
        unmatched,
    })
}

#[derive(Clone, Debug)]
pub struct ImageReport {
    pub accompanied: bool,
    pub complete: bool,
    pub every_horizontal_companion: bool,
}

impl ImageReport {
    pub fn passes(&self) -> bool {
        self.accompanied && self.complete && self.every_horizontal_companion
    }
}

/// The image characterization of the square functor on a 2-category.
pub fn verify_sq_image(c: &FiniteStrictNCat) -> Result<ImageReport> {
    let d = sq2(c)?;
    Ok(ImageReport {
        accompanied: d.is_accompanied(),
        complete: crate::doublecat::is_complete(&d),
        every_horizontal_companion: crate::doublecat::every_horizontal_is_companion(&d),
    })
}

/// Level (k1, k2) of the cube functor: 2-functors from the ν-category of
/// `[k1]⊗[k2]` into `c`.
pub fn cube_level(
    c: &FiniteStrictNCat,
    k1: usize,
    k2: usize,
    config: &NuConfig,
) -> Result<usize> {
    if k1 > 2 || k2 > 2 {
        return Err(Error::DimensionTooHigh(k1.max(k2), 2));
    }
    let adc = Adc::path(k1).tensor(&Adc::path(k2));
    let shape = from_nu(&adc, 2, config)?.cat;
    let functors = enumerate_functors(&shape, c)?;
    Ok(functors.len())
}

/// Desk probe that tensoring with an interval preserves 0-surjectivity: a
/// positive chain map inducing a 0-surjective functor between ν-categories
/// stays 0-surjective after `⊗ [1]`.
pub fn zero_surjectivity_tensor_probe(config: &NuConfig) -> Result<bool> {
    use crate::chain::Chain;
    use crate::chainmap::ChainMap;
    use crate::label::Label;
    use crate::theta::{to_adc, GlobularSum};

    let path2 = to_adc(&GlobularSum::linear(2));
    let path1 = to_adc(&GlobularSum::linear(1));
    // Fold [2] → [1]: collapse the second edge.
    let p1 = Label::name("p1");
    let fold = ChainMap::from_fn(path2.clone(), path1.clone(), |label, degree| {
        match label {
            Label::Name(n) if n == "p0" => Chain::single(Label::name("p0"), degree),
            Label::Name(n) if n == "p1" => Chain::single(p1.clone(), degree),
            Label::Seg(1, inner) if matches!(**inner, Label::Name(_)) => {
                Chain::single(p1.clone(), degree)
            }
            Label::Susp(_) => Chain::single(Label::susp(Label::name("*")), degree),
            Label::Seg(1, _) => Chain::zero(degree),
            other => panic!("unexpected label {other}"),
        }
    })?;
    let base_ok = {
        let (fc, fd, ff) = nu_functor_from_chain_map(&fold, 1, config)?;
        is_n_surjective(&fc, &fd, &ff, 0)
    };
    let interval = Adc::path(1);
    let tensored = tensor_chain_map(&fold, &interval)?;
    let tensored_ok = {
        let (fc, fd, ff) = nu_functor_from_chain_map(&tensored, 2, config)?;
        is_n_surjective(&fc, &fd, &ff, 0)
    };
    Ok(base_ok && tensored_ok)
}

/// `φ ⊗ id_K` on tensor complexes.
pub fn tensor_chain_map(
    phi: &crate::chainmap::ChainMap,
    k: &Adc,
) -> Result<crate::chainmap::ChainMap> {
    use crate::chain::Chain;
    use crate::label::Label;
    let source = phi.source().tensor(k);
    let target = phi.target().tensor(k);
    crate::chainmap::ChainMap::from_fn(source, target, |label, degree| {
        let Label::Tensor(x, y) = label else { panic!("unexpected label {label}") };
        let image = phi.image_of(x);
        let mut out = Chain::zero(degree);
        for (l, coef) in image.iter() {
            out.add_term(Label::tensor(l.clone(), (**y).clone()), coef);
        }
        out
    })
}

/// ν of a chain map whose images are non-negative: the induced functor
/// between the ν-categories, found by mapping tables through the chain map.
pub fn nu_functor_from_chain_map(
    phi: &crate::chainmap::ChainMap,
    max_dim: usize,
    config: &NuConfig,
) -> Result<(FiniteStrictNCat, FiniteStrictNCat, CatFunctor)> {
    let source = from_nu(phi.source(), max_dim, config)?;
    let target = from_nu(phi.target(), max_dim, config)?;
    let mut maps = Vec::new();
    for dim in 0..=max_dim {
        let index: BTreeMap<&crate::nu::NuCell, usize> =
            target.cells[dim].iter().enumerate().map(|(i, c)| (c, i)).collect();
        let mut level = Vec::new();
        for cell in &source.cells[dim] {
            let levels: Vec<(crate::chain::Chain, crate::chain::Chain)> = cell
                .levels()
                .iter()
                .map(|(a, b)| (phi.apply(a), phi.apply(b)))
                .collect();
            let mapped = crate::nu::NuCell::from_levels(levels);
            mapped.validate(phi.target())?;
            let idx = index.get(&&mapped).ok_or_else(|| {
                Error::BudgetExceeded("mapped cell outside the enumerated set".into())
            })?;
            level.push(*idx);
        }
        maps.push(level);
    }
    let functor = CatFunctor { maps };
    functor.validate(&source.cat, &target.cat)?;
    Ok((source.cat, target.cat, functor))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::doublecat::{
        check_two_sided_fibration, companion_uniqueness_check, every_horizontal_is_companion,
        is_complete,
    };
    use crate::strictcat::{poset_path, CatBuilder};

    fn walking_2cell() -> FiniteStrictNCat {
        let adc = crate::theta::to_adc(&crate::theta::GlobularSum::globe(2));
        from_nu(&adc, 2, &NuConfig::default()).unwrap().cat
    }

    fn poset1_as_2cat() -> FiniteStrictNCat {
        poset_path(1).as_dim(2).unwrap()
    }

    /// Two objects, two parallel arrows connected by an invertible 2-cell.
    pub fn walking_invertible_2cell() -> FiniteStrictNCat {
        let mut b = CatBuilder::new(2).unwrap();
        let o0 = b.add_object("0");
        let o1 = b.add_object("1");
        let i0 = b.add_cell(1, "id0", o0, o0);
        let i1 = b.add_cell(1, "id1", o1, o1);
        let f = b.add_cell(1, "f", o0, o1);
        let g = b.add_cell(1, "g", o0, o1);
        b.set_identity(0, o0, i0);
        b.set_identity(0, o1, i1);
        for (x, y, z) in [(i0, i0, i0), (i1, i1, i1), (i0, f, f), (f, i1, f), (i0, g, g), (g, i1, g)]
        {
            b.set_comp(0, 1, x, y, z);
        }
        let u0 = b.add_cell(2, "1id0", i0, i0);
        let u1 = b.add_cell(2, "1id1", i1, i1);
        let uf = b.add_cell(2, "1f", f, f);
        let ug = b.add_cell(2, "1g", g, g);
        let al = b.add_cell(2, "al", f, g);
        let be = b.add_cell(2, "be", g, f);
        b.set_identity(1, i0, u0);
        b.set_identity(1, i1, u1);
        b.set_identity(1, f, uf);
        b.set_identity(1, g, ug);
        // Whiskering along objects.
        for w in [uf, ug, al, be] {
            b.set_comp(0, 2, u0, w, w);
            b.set_comp(0, 2, w, u1, w);
        }
        b.set_comp(0, 2, u0, u0, u0);
        b.set_comp(0, 2, u1, u1, u1);
        // Vertical composition in hom(0,1).
        for (x, y, z) in [
            (uf, uf, uf),
            (ug, ug, ug),
            (uf, al, al),
            (al, ug, al),
            (ug, be, be),
            (be, uf, be),
            (al, be, uf),
            (be, al, ug),
        ] {
            b.set_comp(1, 2, x, y, z);
        }
        b.set_comp(1, 2, u0, u0, u0);
        b.set_comp(1, 2, u1, u1, u1);
        let cat = b.finish().unwrap();
        assert!(cat.validate().is_valid(), "{:?}", cat.validate().violations);
        cat
    }

    #[test]
    fn sq2_squares_biject_canonically_with_shape_functors() {
        // The canonical map: a 2-functor out of the lax-square shape hits the
        // square whose boundary is the image of the four generating edges and
        // whose filler is the image of the generating 2-cell. This pins the
        // orientation, not just the counts.
        use crate::adc::Adc;
        use crate::label::Label;
        let grid_adc = Adc::path(1).tensor(&Adc::path(1));
        let shape = from_nu(&grid_adc, 2, &NuConfig::default()).unwrap();
        let one_cell_with_top = |label: Label| -> usize {
            shape.cells[1]
                .iter()
                .position(|c| *c.top() == crate::chain::Chain::single(label.clone(), 1))
                .unwrap()
        };
        // First tensor factor is the vertical direction.
        let left = one_cell_with_top(Label::tensor(Adc::path_edge(0), Adc::path_vertex(0)));
        let right = one_cell_with_top(Label::tensor(Adc::path_edge(0), Adc::path_vertex(1)));
        let top = one_cell_with_top(Label::tensor(Adc::path_vertex(0), Adc::path_edge(0)));
        let bottom = one_cell_with_top(Label::tensor(Adc::path_vertex(1), Adc::path_edge(0)));
        let filler = shape.cells[2].iter().position(|c| !c.is_degenerate()).unwrap();
        for c in [poset1_as_2cat(), walking_2cell()] {
            let d = sq2(&c).unwrap();
            let functors = enumerate_functors(&shape.cat, &c).unwrap();
            let mut hit = std::collections::BTreeSet::new();
            for f in &functors {
                let key = (
                    f.maps[1][top],
                    f.maps[1][bottom],
                    f.maps[1][left],
                    f.maps[1][right],
                    f.maps[2][filler],
                );
                // Exactly one square carries this boundary-and-filler data.
                let square = d
                    .squares
                    .iter()
                    .position(|s| {
                        s.name
                            == format!(
                                "[{},{};{},{};{}]",
                                key.0, key.1, key.2, key.3, key.4
                            )
                    })
                    .expect("functor image is a square");
                assert!(hit.insert(square), "two functors hit one square");
            }
            assert_eq!(hit.len(), d.num_squares(), "bijection is not onto");
        }
    }

    #[test]
    fn walking_2cell_squares_have_unique_nonidentity_fillers_per_boundary() {
        let c = walking_2cell();
        let d = sq2(&c).unwrap();
        let mut by_boundary: std::collections::BTreeMap<(usize, usize, usize, usize), usize> =
            std::collections::BTreeMap::new();
        for (i, s) in d.squares.iter().enumerate() {
            // Fillers are encoded in the name; identity fillers correspond to
            // identity 2-cells of the walking 2-cell.
            let filler: usize = s.name[1..s.name.len() - 1]
                .split([',', ';'])
                .nth(4)
                .unwrap()
                .parse()
                .unwrap();
            let is_identity_filler =
                c.is_identity(crate::strictcat::Cell { dim: 2, idx: filler });
            if !is_identity_filler {
                let prev =
                    by_boundary.insert((s.top, s.bottom, s.left, s.right), i);
                assert!(prev.is_none(), "two non-identity fillers share a boundary");
            }
        }
        assert!(!by_boundary.is_empty());
    }

    #[test]
    fn sq2_square_count_matches_functor_count() {
        // This pins the lax-square orientation: squares of sq2(c) correspond
        // to 2-functors out of the ν-category of [1]⊗[1].
        let grid = from_nu(&Adc::path(1).tensor(&Adc::path(1)), 2, &NuConfig::default())
            .unwrap()
            .cat;
        for c in [poset1_as_2cat(), walking_2cell()] {
            let d = sq2(&c).unwrap();
            assert!(d.validate().is_valid(), "{:?}", d.validate().violations);
            let functors = enumerate_functors(&grid, &c).unwrap();
            assert_eq!(d.num_squares(), functors.len());
        }
    }

    #[test]
    fn sq2_of_poset1_level_count() {
        // |Hom([1]⊗[1], [1])| = 6: the level-(1,1) elements of Sq².
        let d = sq2(&poset1_as_2cat()).unwrap();
        assert_eq!(d.num_squares(), 6);
    }

    #[test]
    fn sq2_equals_sq_pair_on_the_canonical_filtration() {
        for c in [poset1_as_2cat(), walking_2cell()] {
            let direct = sq2(&c).unwrap();
            let paired = sq_pair(&Filtration2::canonical(&c).unwrap()).unwrap();
            assert_eq!(direct, paired);
        }
    }

    #[test]
    fn sq_pair_with_discrete_vertical_part() {
        // a0 = identity-only subcategory on both objects of [1].
        let a1 = poset1_as_2cat();
        let mut b = CatBuilder::new(1).unwrap();
        b.add_object("0");
        b.add_object("1");
        let i0 = b.add_cell(1, "id0", 0, 0);
        let i1 = b.add_cell(1, "id1", 1, 1);
        b.set_identity(0, 0, i0);
        b.set_identity(0, 1, i1);
        b.set_comp(0, 1, i0, i0, i0);
        b.set_comp(0, 1, i1, i1, i1);
        let a0 = b.finish().unwrap();
        let map = CatFunctor { maps: vec![vec![0, 1], vec![0, 2]] };
        let filt = Filtration2::new(a0, a1, map).unwrap();
        let d = sq_pair(&filt).unwrap();
        assert!(d.validate().is_valid());
        // Vertical category is discrete; all squares are lax cylinders with
        // identity vertical boundaries.
        assert_eq!(d.num_vcells(), 2);
        assert!(d.squares.iter().all(|s| s.left == d.vid[0]
            || s.left == d.vid[1]));
        // The non-identity hcell is not a companion of anything.
        assert!(is_complete(&d));
        assert!(!every_horizontal_is_companion(&d));
    }

    #[test]
    fn cech_level_zero_is_a0() {
        let filt = Filtration2::canonical(&walking_2cell()).unwrap();
        let level = cech_level(&filt, 0).unwrap();
        assert_eq!(level.cat, filt.a0);
    }

    #[test]
    fn cech_level_one_objects_are_directed_pullback_points() {
        let a1 = poset1_as_2cat();
        let mut b = CatBuilder::new(1).unwrap();
        b.add_object("0");
        b.add_object("1");
        let i0 = b.add_cell(1, "id0", 0, 0);
        let i1 = b.add_cell(1, "id1", 1, 1);
        b.set_identity(0, 0, i0);
        b.set_identity(0, 1, i1);
        b.set_comp(0, 1, i0, i0, i0);
        b.set_comp(0, 1, i1, i1, i1);
        let a0 = b.finish().unwrap();
        let map = CatFunctor { maps: vec![vec![0, 1], vec![0, 2]] };
        let filt = Filtration2::new(a0, a1, map).unwrap();
        let level = cech_level(&filt, 1).unwrap();
        // Pairs (x, y) with a 1-cell F(x) → F(y) in [1]: (0,0), (0,1), (1,1).
        assert_eq!(level.objects.len(), 3);
        assert!(level.cat.validate().is_valid());
    }

    #[test]
    fn cech_segal_isomorphism_small() {
        for c in [poset1_as_2cat(), walking_2cell()] {
            let filt = Filtration2::canonical(&c).unwrap();
            for m in 2..=3 {
                assert!(cech_segal_iso(&filt, m).unwrap(), "segal fails at m={m}");
            }
        }
    }

    #[test]
    fn double_functor_counts() {
        let d = sq2(&poset1_as_2cat()).unwrap();
        let terminal = sq2(&FiniteStrictNCat::terminal(2)).unwrap();
        assert_eq!(double_functor_enumerate(&d, &terminal, 1 << 20).unwrap().len(), 1);
        let endos = double_functor_enumerate(&d, &d, 1 << 20).unwrap();
        assert_eq!(endos.len(), 3);
    }

    #[test]
    fn sq_fully_faithful_small_pairs() {
        let p1 = poset1_as_2cat();
        let report = verify_sq_fully_faithful(&p1, &p1, 1 << 22).unwrap();
        assert!(report.bijective);
        assert_eq!(report.functor_count, 3);
        let terminal = FiniteStrictNCat::terminal(2);
        let report = verify_sq_fully_faithful(&p1, &terminal, 1 << 22).unwrap();
        assert!(report.bijective);
        assert_eq!(report.functor_count, 1);
    }

    #[test]
    fn sq_image_characterization_holds_on_corpus() {
        for c in [poset1_as_2cat(), poset_path(2).as_dim(2).unwrap(), walking_2cell()] {
            let report = verify_sq_image(&c).unwrap();
            assert!(report.passes());
        }
    }

    #[test]
    fn sq2_companions_and_fibration() {
        for c in [poset1_as_2cat(), walking_2cell()] {
            let d = sq2(&c).unwrap();
            assert!(d.is_accompanied());
            let marked = d.companion_marking().unwrap();
            let report = check_two_sided_fibration(&marked);
            assert!(report.passes(), "{:?}", report.failures);
            for f in 0..d.num_vcells() {
                assert!(companion_uniqueness_check(&d, f).passes());
            }
        }
    }

    #[test]
    fn distinct_isomorphic_companions_are_mediated() {
        let c = walking_invertible_2cell();
        let d = sq2(&c).unwrap();
        assert!(d.validate().is_valid());
        // The vertical cell f has both f and g as companions.
        let f = 2; // index order: id0, id1, f, g
        let triples = d.find_companions(f);
        let companions: std::collections::BTreeSet<usize> =
            triples.iter().map(|t| t.companion).collect();
        assert!(companions.len() >= 2);
        let report = companion_uniqueness_check(&d, f);
        assert!(report.passes(), "{:?}", report.violations);
        // And completeness fails here: f and g share companions.
        assert!(!is_complete(&d));
    }

    #[test]
    fn cube_levels_frozen() {
        let config = NuConfig::default();
        let p1 = poset1_as_2cat();
        // Levels over the walking arrow count order ideals of the grid
        // poset [k1+1]×[k2+1], i.e. binomial(k1+k2+2, k1+1).
        assert_eq!(cube_level(&p1, 1, 1, &config).unwrap(), 6);
        assert_eq!(cube_level(&p1, 2, 1, &config).unwrap(), 10);
        assert_eq!(cube_level(&p1, 2, 2, &config).unwrap(), 20);
        assert_eq!(cube_level(&p1, 0, 0, &config).unwrap(), 2);
        let terminal = FiniteStrictNCat::terminal(2);
        assert_eq!(cube_level(&terminal, 1, 1, &config).unwrap(), 1);
        assert_eq!(cube_level(&terminal, 2, 1, &config).unwrap(), 1);
    }

    #[test]
    fn zero_surjectivity_probe() {
        assert!(zero_surjectivity_tensor_probe(&NuConfig::default()).unwrap());
    }

    #[test]
    fn one_surjectivity_is_preserved_by_tensor_on_a_tiny_instance() {
        use crate::chain::Chain;
        use crate::chainmap::ChainMap;
        use crate::label::Label;
        use crate::theta::{to_adc, GlobularSum};
        // Collapse the walking 2-cell onto the walking arrow: the filler
        // dies, the parallel edges fold together. The induced functor is
        // 1-surjective, and stays 1-surjective after ⊗ [1].
        let d2 = to_adc(&GlobularSum::globe(2));
        let d1 = to_adc(&GlobularSum::globe(1));
        let collapse = ChainMap::from_fn(d2.clone(), d1.clone(), |label, degree| match label {
            Label::Name(_) => Chain::single(label.clone(), degree),
            Label::Susp(inner) => match &**inner {
                Label::Name(_) => Chain::single(Label::susp(Label::name("*")), degree),
                _ => Chain::zero(degree),
            },
            other => panic!("unexpected {other}"),
        })
        .unwrap();
        let config = NuConfig::default();
        let (c, d, f) = nu_functor_from_chain_map(&collapse, 2, &config).unwrap();
        assert!(is_n_surjective(&c, &d, &f, 1));
        let tensored = tensor_chain_map(&collapse, &Adc::path(1)).unwrap();
        let (c2, d2c, f2) = nu_functor_from_chain_map(&tensored, 2, &config).unwrap();
        assert!(is_n_surjective(&c2, &d2c, &f2, 1));
    }

    #[test]
    fn bicartesian_readings_diverge_exactly_on_units_here() {
        // The one-row pasting cannot express horizontal unit squares of
        // non-invertible cells; the lift closure can. The divergence is
        // reported, never silently resolved.
        let d = sq2(&poset1_as_2cat()).unwrap();
        let divergence = d.bicartesian_reading_divergence();
        assert!(!divergence.is_empty());
        let single = d.single_pasting_bicartesian_set();
        let closure = d.bicartesian_set();
        assert!(single.is_subset(&closure));
        for s in divergence {
            assert!(closure.contains(&s) && !single.contains(&s));
        }
    }
}
