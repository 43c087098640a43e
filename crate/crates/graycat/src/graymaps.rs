//! Explicit comparison maps for the Gray tensor product, with verifiers.
//!
//! Everything in here is a constructed `ChainMap` — construction already
//! checks ∂-commutation and augmentation preservation on every basis element
//! — plus decomposition witnesses obtained by computing the relevant colimit
//! through pushouts and exhibiting the comparison as a basis bijection.
//!
//! Display formulas for these maps list all candidate terms; only the
//! degree-homogeneous ones survive in a degree-preserving map, so clauses
//! like `[x,1] + [y,1]` are read per matching degree. The chain-map check at
//! construction time pins this reading down.

use std::collections::BTreeMap;

use crate::adc::Adc;
use crate::chain::Chain;
use crate::chainmap::{pushout_adc, ChainMap};
use crate::label::Label;
use crate::{Error, Result};

/// `[C, m]` with bookkeeping: the chain of suspension vertices and, per
/// segment, the label map from `suspend(C)` into the glued complex.
#[derive(Clone, Debug)]
pub struct IteratedSuspension {
    pub object: Adc,
    pub vertices: Vec<Label>,
    pub segments: Vec<BTreeMap<Label, Label>>,
}

/// Build `[C, m]` as an endpoint-glued chain of `m` suspensions (m ≥ 1).
pub fn suspend_m(base: &Adc, m: usize) -> Result<IteratedSuspension> {
    if m == 0 {
        return Err(Error::Precondition("suspend_m needs m ≥ 1".into()));
    }
    let s = base.suspend()?;
    let p0 = Label::name("p0");
    let p1 = Label::name("p1");
    let identity: BTreeMap<Label, Label> =
        s.basis().into_iter().map(|(l, _)| (l.clone(), l)).collect();
    let mut object = s.clone();
    let mut vertices = vec![p0, p1.clone()];
    let mut segments = vec![identity];
    for _ in 1..m {
        let (next, rename) = object.wedge(&s)?;
        object = next;
        vertices.push(rename[&p1].clone());
        segments.push(rename);
    }
    Ok(IteratedSuspension { object, vertices, segments })
}

/// Where a label of `[C, m]` came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SuspElem {
    Vertex(usize),
    /// Segment index and the base-complex element suspended there.
    Seg(usize, Label),
}

impl IteratedSuspension {
    pub fn classify(&self) -> BTreeMap<Label, SuspElem> {
        let mut out = BTreeMap::new();
        for (j, v) in self.vertices.iter().enumerate() {
            out.insert(v.clone(), SuspElem::Vertex(j));
        }
        for (k, seg) in self.segments.iter().enumerate() {
            for (s_lab, obj_lab) in seg {
                if let Label::Susp(inner) = s_lab {
                    out.insert(obj_lab.clone(), SuspElem::Seg(k, (**inner).clone()));
                }
            }
        }
        out
    }

    pub fn seg_label(&self, k: usize, base_elem: &Label) -> Label {
        self.segments[k][&Label::susp(base_elem.clone())].clone()
    }
}

/// A wedge `[A,1] ∨ [B,1]` with its three vertices and two segment maps.
#[derive(Clone, Debug)]
pub struct SuspWedge {
    pub object: Adc,
    pub q: [Label; 3],
    pub first: BTreeMap<Label, Label>,
    pub second: BTreeMap<Label, Label>,
}

pub fn susp_wedge(a: &Adc, b: &Adc) -> Result<SuspWedge> {
    let sa = a.suspend()?;
    let sb = b.suspend()?;
    let p0 = Label::name("p0");
    let p1 = Label::name("p1");
    let first: BTreeMap<Label, Label> =
        sa.basis().into_iter().map(|(l, _)| (l.clone(), l)).collect();
    let (object, second) = sa.wedge(&sb)?;
    let q = [p0.clone(), p1.clone(), second[&p1].clone()];
    Ok(SuspWedge { object, q, first, second })
}

impl SuspWedge {
    fn first_seg(&self, base_elem: &Label) -> Label {
        self.first[&Label::susp(base_elem.clone())].clone()
    }

    fn second_seg(&self, base_elem: &Label) -> Label {
        self.second[&Label::susp(base_elem.clone())].clone()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WedgeSide {
    /// `[K,1] ∨ [L,1]`
    Left,
    /// `[L,1] ∨ [K,1]`
    Right,
}

/// The comparison `∇ : [K⊗L, 1] → [K,1] ∨ [L,1]` (or its swapped variant):
/// endpoints to the outer wedge vertices, `[x⊗y, 1]` to the suspended factor
/// of matching degree when the other factor is a vertex, zero otherwise.
pub fn nabla(k: &Adc, l: &Adc, side: WedgeSide) -> Result<ChainMap> {
    let source = k.tensor(l).suspend()?;
    let wedge = match side {
        WedgeSide::Left => susp_wedge(k, l)?,
        WedgeSide::Right => susp_wedge(l, k)?,
    };
    let p0 = Label::name("p0");
    let p1 = Label::name("p1");
    let target = wedge.object.clone();
    let map = ChainMap::from_fn(source, target, |label, degree| {
        if *label == p0 {
            return Chain::single(wedge.q[0].clone(), 0);
        }
        if *label == p1 {
            return Chain::single(wedge.q[2].clone(), 0);
        }
        let Label::Susp(inner) = label else { panic!("unexpected suspension label {label}") };
        let Label::Tensor(x, y) = &**inner else { panic!("unexpected tensor label {label}") };
        let dx = k.degree_of(x).expect("left factor");
        let dy = l.degree_of(y).expect("right factor");
        let (x_seg, y_seg): (Label, Label) = match side {
            WedgeSide::Left => (wedge.first_seg(x), wedge.second_seg(y)),
            WedgeSide::Right => (wedge.second_seg(x), wedge.first_seg(y)),
        };
        match (dx, dy) {
            (0, 0) => Chain::from_terms(degree, [(x_seg, 1), (y_seg, 1)]),
            (0, _) => Chain::single(y_seg, degree),
            (_, 0) => Chain::single(x_seg, degree),
            _ => Chain::zero(degree),
        }
    })?;
    Ok(map)
}

/// The cone map `f : [K⊗[1]⊗L, 1] → [K,1] ⊗ [L,1]`.
///
/// `[x⊗e⊗y,1] ↦ [x,1]⊗[y,1]`; over the cylinder ends the image is the
/// matching-degree part of `[x,1]⊗{1−k} + {k}⊗[y,1]`.
pub fn decomposition_cone(k: &Adc, l: &Adc) -> Result<ChainMap> {
    let interval = Adc::path(1);
    let source = k.tensor(&interval).tensor(l).suspend()?;
    let sk = k.suspend()?;
    let sl = l.suspend()?;
    let target = sk.tensor(&sl);
    let p0 = Label::name("p0");
    let p1 = Label::name("p1");
    let v0 = Adc::path_vertex(0);
    let e0 = Adc::path_edge(0);
    let map = ChainMap::from_fn(source, target, |label, degree| {
        if *label == p0 {
            return Chain::single(Label::tensor(p0.clone(), p0.clone()), 0);
        }
        if *label == p1 {
            return Chain::single(Label::tensor(p1.clone(), p1.clone()), 0);
        }
        let Label::Susp(inner) = label else { panic!("unexpected label {label}") };
        let Label::Tensor(xm, y) = &**inner else { panic!("unexpected label {label}") };
        let Label::Tensor(x, mid) = &**xm else { panic!("unexpected label {label}") };
        let dx = k.degree_of(x).expect("left factor");
        let dy = l.degree_of(y).expect("right factor");
        let susp_x = Label::susp((**x).clone());
        let susp_y = Label::susp((**y).clone());
        if **mid == e0 {
            return Chain::single(Label::tensor(susp_x, susp_y), degree);
        }
        // Cylinder ends: {0} pairs with the far corner, {1} with the near one.
        let (kx_end, ky_end) = if **mid == v0 {
            (p1.clone(), p0.clone())
        } else {
            (p0.clone(), p1.clone())
        };
        match (dx, dy) {
            (0, 0) => Chain::from_terms(
                degree,
                [
                    (Label::tensor(susp_x, kx_end), 1),
                    (Label::tensor(ky_end, susp_y), 1),
                ],
            ),
            (_, 0) => Chain::single(Label::tensor(susp_x, kx_end), degree),
            (0, _) => Chain::single(Label::tensor(ky_end, susp_y), degree),
            _ => Chain::zero(degree),
        }
    })?;
    Ok(map)
}

/// The block reindexing `[n·m] → [n]` used to assemble `p^{n,m}`: collapse
/// everything before block `k`, shift block `k` to `[0, n]`, collapse after.
pub fn block_reindex(n: usize, k: usize, vertex: usize) -> usize {
    vertex.saturating_sub(k * n).min(n)
}

/// `p^{n,m} : [C,m] ⊗ [n·m] → [C⊗[n], m]`, defined segmentwise by
/// `[c,1]_k ⊗ e_l ↦ [c ⊗ e_{n−i−1}, 1]_k` on block-`k` edges (`i = l − kn`),
/// `[c,1]_k ⊗ {l} ↦ [c ⊗ {n − r_k(l)}, 1]_k`, vertices of `[C,m]` to the
/// matching vertices, and everything else to zero.
pub fn p_nm(c: &Adc, n: usize, m: usize) -> Result<ChainMap> {
    let tc = suspend_m(c, m)?;
    let source = tc.object.tensor(&Adc::path(n * m));
    let base2 = c.tensor(&Adc::path(n));
    let td = suspend_m(&base2, m)?;
    let target = td.object.clone();
    let classify = tc.classify();
    let map = ChainMap::from_fn(source, target, |label, degree| {
        let Label::Tensor(a, y) = label else { panic!("unexpected label {label}") };
        match &classify[&**a] {
            SuspElem::Vertex(j) => {
                if path_edge_index(y, n * m).is_some() {
                    Chain::zero(degree)
                } else {
                    Chain::single(td.vertices[*j].clone(), degree)
                }
            }
            SuspElem::Seg(k, cl) => {
                if let Some(l) = path_edge_index(y, n * m) {
                    if k * n <= l && l < (k + 1) * n {
                        let i = l - k * n;
                        let t = Label::tensor(cl.clone(), Adc::path_edge(n - i - 1));
                        Chain::single(td.seg_label(*k, &t), degree)
                    } else {
                        Chain::zero(degree)
                    }
                } else {
                    let l = path_vertex_index(y).expect("path label");
                    let r = block_reindex(n, *k, l);
                    let t = Label::tensor(cl.clone(), Adc::path_vertex(n - r));
                    Chain::single(td.seg_label(*k, &t), degree)
                }
            }
        }
    })?;
    Ok(map)
}

/// The section `s^{n,m} : [C⊗[n], m] → [C,m] ⊗ [n·m]`.
///
/// Blockwise reversal of `p^{n,m}`; over degree-0 elements of `C` the vertex
/// clause carries the path correction `{1}⊗e_{n−j,n} + {0}⊗e_{0,n−j}`
/// shifted into block `k` (with `e_{i,j} = Σ_{i≤l<j} e_l`).
pub fn s_nm(c: &Adc, n: usize, m: usize) -> Result<ChainMap> {
    let tc = suspend_m(c, m)?;
    let target = tc.object.tensor(&Adc::path(n * m));
    let base2 = c.tensor(&Adc::path(n));
    let td = suspend_m(&base2, m)?;
    let source = td.object.clone();
    let classify = td.classify();
    let map = ChainMap::from_fn(source, target, |label, degree| {
        match &classify[label] {
            SuspElem::Vertex(j) => Chain::single(
                Label::tensor(tc.vertices[*j].clone(), Adc::path_vertex(j * n)),
                degree,
            ),
            SuspElem::Seg(k, t) => {
                let Label::Tensor(cl, y) = t else { panic!("unexpected base label {t}") };
                let edge_block = |i: usize| Adc::path_edge(k * n + i);
                let cseg = tc.seg_label(*k, cl);
                if let Some(i) = path_edge_index(y, n) {
                    Chain::single(Label::tensor(cseg.clone(), edge_block(n - i - 1)), degree)
                } else {
                    let j = path_vertex_index(y).expect("path label");
                    let mut chain = Chain::single(
                        Label::tensor(cseg.clone(), Adc::path_vertex(k * n + n - j)),
                        degree,
                    );
                    if c.degree_of(cl) == Some(0) {
                        for l in (n - j)..n {
                            chain.add_term(
                                Label::tensor(tc.vertices[k + 1].clone(), edge_block(l)),
                                1,
                            );
                        }
                        for l in 0..(n - j) {
                            chain.add_term(
                                Label::tensor(tc.vertices[*k].clone(), edge_block(l)),
                                1,
                            );
                        }
                    }
                    chain
                }
            }
        }
    })?;
    Ok(map)
}

/// The lemma pair `p^{n,1}` / `s^{n,1}`.
pub fn p_map(a: &Adc, n: usize) -> Result<ChainMap> {
    p_nm(a, n, 1)
}

pub fn s_map(a: &Adc, n: usize) -> Result<ChainMap> {
    s_nm(a, n, 1)
}

/// Both maps, with the section identity verified.
pub fn p_s_nm(c: &Adc, n: usize, m: usize) -> Result<(ChainMap, ChainMap)> {
    let p = p_nm(c, n, m)?;
    let s = s_nm(c, n, m)?;
    let ps = s.then(&p)?;
    if !ps.is_identity_on_basis() {
        return Err(Error::VerificationFailed(format!(
            "p^{{{n},{m}}} ∘ s^{{{n},{m}}} is not the identity"
        )));
    }
    Ok((p, s))
}

fn path_vertex_index(label: &Label) -> Option<usize> {
    if let Label::Name(s) = label {
        s.parse::<usize>().ok()
    } else {
        None
    }
}

fn path_edge_index(label: &Label, n_edges: usize) -> Option<usize> {
    if let Label::Name(s) = label {
        let i = s.strip_prefix('e')?.parse::<usize>().ok()?;
        if i < n_edges {
            return Some(i);
        }
        None
    } else {
        None
    }
}

/// A verified decomposition: the computed colimit, the comparison into the
/// target, its inverse, and the colimit legs.
#[derive(Clone, Debug)]
pub struct DecompositionWitness {
    pub colimit: Adc,
    pub comparison: ChainMap,
    pub inverse: ChainMap,
    pub legs: Vec<ChainMap>,
}

impl DecompositionWitness {
    pub fn verify(&self) -> Result<()> {
        if !self.comparison.then(&self.inverse)?.is_identity_on_basis() {
            return Err(Error::VerificationFailed(
                "inverse ∘ comparison is not the identity".into(),
            ));
        }
        if !self.inverse.then(&self.comparison)?.is_identity_on_basis() {
            return Err(Error::VerificationFailed(
                "comparison ∘ inverse is not the identity".into(),
            ));
        }
        Ok(())
    }
}

fn single_vertex(name: &str) -> Adc {
    let v = Label::name(name);
    Adc::new(vec![(v.clone(), 0)], vec![], vec![(v, 1)]).unwrap()
}

fn bijection_witness(
    colimit: Adc,
    comparison: ChainMap,
    legs: Vec<ChainMap>,
) -> Result<DecompositionWitness> {
    if comparison.as_basis_bijection().is_none() {
        return Err(Error::VerificationFailed(
            "comparison is not a basis bijection".into(),
        ));
    }
    let inverse = comparison.inverse_of_bijection()?;
    let witness = DecompositionWitness { colimit, comparison, inverse, legs };
    witness.verify()?;
    Ok(witness)
}

/// Verify the suspension-tensor decomposition: the colimit of
///
/// `[K,1]∨[L,1] ← [K⊗{1}⊗L,1] → [K⊗[1]⊗L,1] ← [K⊗{0}⊗L,1] → [L,1]∨[K,1]`
///
/// maps isomorphically onto `[K,1] ⊗ [L,1]`.
pub fn verify_susp_tensor_decomposition(k: &Adc, l: &Adc) -> Result<DecompositionWitness> {
    let interval = Adc::path(1);
    let mid = k.tensor(&interval).tensor(l).suspend()?;
    let m1 = k.tensor(&single_vertex("1")).tensor(l).suspend()?;
    let m0 = k.tensor(&single_vertex("0")).tensor(l).suspend()?;
    let w1 = susp_wedge(k, l)?;
    let w2 = susp_wedge(l, k)?;
    let sk = k.suspend()?;
    let sl = l.suspend()?;
    let tensor_target = sk.tensor(&sl);

    // End inclusions of the cylinder are label-preserving.
    let include_end = |end: &Adc| -> Result<ChainMap> {
        let map: BTreeMap<Label, Label> =
            end.basis().into_iter().map(|(lab, _)| (lab.clone(), lab)).collect();
        ChainMap::from_label_map(end.clone(), mid.clone(), &map)
    };
    let g2 = include_end(&m1)?;
    let g3_incl = include_end(&m0)?;

    // Wedge-comparison legs out of the cylinder ends.
    let end_to_wedge = |end: &Adc, wedge: &SuspWedge, swap: bool| -> Result<ChainMap> {
        let p0 = Label::name("p0");
        let p1 = Label::name("p1");
        ChainMap::from_fn(end.clone(), wedge.object.clone(), |label, degree| {
            if *label == p0 {
                return Chain::single(wedge.q[0].clone(), 0);
            }
            if *label == p1 {
                return Chain::single(wedge.q[2].clone(), 0);
            }
            let Label::Susp(inner) = label else { panic!("unexpected label {label}") };
            let Label::Tensor(xm, y) = &**inner else { panic!("unexpected label {label}") };
            let Label::Tensor(x, _) = &**xm else { panic!("unexpected label {label}") };
            let dx = k.degree_of(x).expect("left factor");
            let dy = l.degree_of(y).expect("right factor");
            let (x_seg, y_seg) = if swap {
                (wedge.second_seg(x), wedge.first_seg(y))
            } else {
                (wedge.first_seg(x), wedge.second_seg(y))
            };
            match (dx, dy) {
                (0, 0) => Chain::from_terms(degree, [(x_seg, 1), (y_seg, 1)]),
                (0, _) => Chain::single(y_seg, degree),
                (_, 0) => Chain::single(x_seg, degree),
                _ => Chain::zero(degree),
            }
        })
    };
    let g1 = end_to_wedge(&m1, &w1, false)?;
    let g4 = end_to_wedge(&m0, &w2, true)?;

    let pushout1 = pushout_adc(&g2, &g1)?;
    let g3 = g3_incl.then(&pushout1.left_leg)?;
    let pushout2 = pushout_adc(&g3, &g4)?;

    // Cocone into the tensor target.
    let cone_mid = decomposition_cone(k, l)?;
    let p0 = Label::name("p0");
    let p1 = Label::name("p1");
    let incl_w1 = {
        let classify: BTreeMap<Label, (usize, Label)> = wedge_classify(&w1);
        ChainMap::from_fn(w1.object.clone(), tensor_target.clone(), |label, degree| {
            if *label == w1.q[0] {
                Chain::single(Label::tensor(p0.clone(), p0.clone()), degree)
            } else if *label == w1.q[1] {
                Chain::single(Label::tensor(p1.clone(), p0.clone()), degree)
            } else if *label == w1.q[2] {
                Chain::single(Label::tensor(p1.clone(), p1.clone()), degree)
            } else {
                let (seg, inner) = &classify[label];
                let susp = Label::susp(inner.clone());
                if *seg == 0 {
                    Chain::single(Label::tensor(susp, p0.clone()), degree)
                } else {
                    Chain::single(Label::tensor(p1.clone(), susp), degree)
                }
            }
        })?
    };
    let incl_w2 = {
        let classify: BTreeMap<Label, (usize, Label)> = wedge_classify(&w2);
        ChainMap::from_fn(w2.object.clone(), tensor_target.clone(), |label, degree| {
            if *label == w2.q[0] {
                Chain::single(Label::tensor(p0.clone(), p0.clone()), degree)
            } else if *label == w2.q[1] {
                Chain::single(Label::tensor(p0.clone(), p1.clone()), degree)
            } else if *label == w2.q[2] {
                Chain::single(Label::tensor(p1.clone(), p1.clone()), degree)
            } else {
                let (seg, inner) = &classify[label];
                let susp = Label::susp(inner.clone());
                if *seg == 0 {
                    Chain::single(Label::tensor(p0.clone(), susp), degree)
                } else {
                    Chain::single(Label::tensor(susp, p1.clone()), degree)
                }
            }
        })?
    };

    // Cone compatibility over both cylinder ends, then the mediating maps.
    if g2.then(&cone_mid)? != g1.then(&incl_w1)? {
        return Err(Error::VerificationFailed(
            "cone legs disagree over the {1} end".into(),
        ));
    }
    let comparison1 = pushout1.induced(&cone_mid, &incl_w1)?;
    if g3.then(&comparison1)? != g4.then(&incl_w2)? {
        return Err(Error::VerificationFailed(
            "cone legs disagree over the {0} end".into(),
        ));
    }
    let comparison = pushout2.induced(&comparison1, &incl_w2)?;

    let legs = vec![
        pushout1.right_leg.then(&pushout2.left_leg)?,
        pushout1.left_leg.then(&pushout2.left_leg)?,
        pushout2.right_leg.clone(),
    ];
    bijection_witness(pushout2.object.clone(), comparison, legs)
}

fn wedge_classify(w: &SuspWedge) -> BTreeMap<Label, (usize, Label)> {
    let mut out = BTreeMap::new();
    for (seg_idx, seg) in [(0usize, &w.first), (1usize, &w.second)] {
        for (s_lab, obj_lab) in seg {
            if let Label::Susp(inner) = s_lab {
                out.insert(obj_lab.clone(), (seg_idx, (**inner).clone()));
            }
        }
    }
    out
}

/// Verify that the colimit of `⊔_k {k} ← C⊗⊔_k {k} → C⊗[n]` is `[C, n]`.
pub fn verify_susp_colimit(c: &Adc, n: usize) -> Result<DecompositionWitness> {
    if n == 0 {
        return Err(Error::Precondition("verify_susp_colimit needs n ≥ 1".into()));
    }
    let verts = path_vertices_only(n);
    let a = c.tensor(&verts);
    let b = c.tensor(&Adc::path(n));
    let f = {
        let map: BTreeMap<Label, Label> =
            a.basis().into_iter().map(|(lab, _)| (lab.clone(), lab)).collect();
        ChainMap::from_label_map(a.clone(), b.clone(), &map)?
    };
    let g = ChainMap::from_fn(a.clone(), verts.clone(), |label, degree| {
        let Label::Tensor(x, v) = label else { panic!("unexpected label {label}") };
        if c.degree_of(x) == Some(0) {
            Chain::single((**v).clone(), degree).scale(c.aug_of(x))
        } else {
            Chain::zero(degree)
        }
    })?;
    let po = pushout_adc(&f, &g)?;

    let ts = suspend_m(c, n)?;
    let mut action: BTreeMap<Label, Chain> = BTreeMap::new();
    for j in 0..=n {
        let p_label = po
            .right_leg
            .image_of(&Adc::path_vertex(j))
            .support()
            .next()
            .expect("vertex leg is a basis inclusion")
            .clone();
        action.insert(p_label, Chain::single(ts.vertices[j].clone(), 0));
    }
    for (lab, d) in b.basis() {
        let Label::Tensor(x, y) = &lab else { panic!("unexpected label {lab}") };
        if let Some(i) = path_edge_index(y, n) {
            let img = po.left_leg.image_of(&lab);
            let p_label = img.support().next().expect("edge survives").clone();
            action.insert(p_label, Chain::single(ts.seg_label(i, x), d));
        }
    }
    let comparison = ChainMap::new(po.object.clone(), ts.object.clone(), action)?;
    bijection_witness(po.object.clone(), comparison, vec![po.left_leg, po.right_leg])
}

/// Verify that the colimit of `⊔_k {k}⊗[0] ← ⊔_k {k}⊗C° → [n]⊗C°` is `[C, n]`.
pub fn verify_cosuspension(c: &Adc, n: usize) -> Result<DecompositionWitness> {
    if n == 0 {
        return Err(Error::Precondition("verify_cosuspension needs n ≥ 1".into()));
    }
    let cdual = c.dualize(&c.full_dims());
    let verts = path_vertices_only(n);
    let a = verts.tensor(&cdual);
    let b = Adc::path(n).tensor(&cdual);
    let f = {
        let map: BTreeMap<Label, Label> =
            a.basis().into_iter().map(|(lab, _)| (lab.clone(), lab)).collect();
        ChainMap::from_label_map(a.clone(), b.clone(), &map)?
    };
    let g = ChainMap::from_fn(a.clone(), verts.clone(), |label, degree| {
        let Label::Tensor(v, x) = label else { panic!("unexpected label {label}") };
        if cdual.degree_of(x) == Some(0) {
            Chain::single((**v).clone(), degree).scale(cdual.aug_of(x))
        } else {
            Chain::zero(degree)
        }
    })?;
    let po = pushout_adc(&f, &g)?;

    let ts = suspend_m(c, n)?;
    let mut action: BTreeMap<Label, Chain> = BTreeMap::new();
    for j in 0..=n {
        let p_label = po
            .right_leg
            .image_of(&Adc::path_vertex(j))
            .support()
            .next()
            .expect("vertex leg is a basis inclusion")
            .clone();
        action.insert(p_label, Chain::single(ts.vertices[j].clone(), 0));
    }
    for (lab, d) in b.basis() {
        let Label::Tensor(y, x) = &lab else { panic!("unexpected label {lab}") };
        if let Some(i) = path_edge_index(y, n) {
            let img = po.left_leg.image_of(&lab);
            let p_label = img.support().next().expect("edge survives").clone();
            action.insert(p_label, Chain::single(ts.seg_label(i, x), d));
        }
    }
    let comparison = ChainMap::new(po.object.clone(), ts.object.clone(), action)?;
    bijection_witness(po.object.clone(), comparison, vec![po.left_leg, po.right_leg])
}

fn path_vertices_only(n: usize) -> Adc {
    let mut elements = Vec::new();
    let mut augs = Vec::new();
    for j in 0..=n {
        elements.push((Adc::path_vertex(j), 0));
        augs.push((Adc::path_vertex(j), 1));
    }
    Adc::new(elements, vec![], augs).unwrap()
}

/// Report for the three tensor–duality identities and involutivity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityReport {
    pub op_holds: bool,
    pub co_holds: bool,
    pub full_holds: bool,
    pub involutive: bool,
    pub failures: Vec<String>,
}

impl DualityReport {
    pub fn all_hold(&self) -> bool {
        self.op_holds && self.co_holds && self.full_holds && self.involutive
    }
}

/// Check `(K⊗L)^op ≅ L^op⊗K^op`, `(K⊗L)^co ≅ L^co⊗K^co`, and
/// `(K⊗L)^∘ = K^∘⊗L^∘`, each through its explicit comparison map (the swap
/// for op/co, the identity for the full duality), plus involutivity.
pub fn duality_tensor_check(k: &Adc, l: &Adc) -> DualityReport {
    let t = k.tensor(l);
    let mut failures = Vec::new();

    let swap_check = |dims_of: fn(&Adc) -> std::collections::BTreeSet<usize>,
                          name: &str,
                          failures: &mut Vec<String>|
     -> bool {
        let lhs = t.dualize(&dims_of(&t));
        let rhs = l.dualize(&dims_of(l)).tensor(&k.dualize(&dims_of(k)));
        let built = ChainMap::from_fn(lhs.clone(), rhs.clone(), |label, degree| {
            let Label::Tensor(x, y) = label else { panic!("unexpected label {label}") };
            Chain::single(Label::tensor((**y).clone(), (**x).clone()), degree)
        });
        match built {
            Ok(map) if map.as_basis_bijection().is_some() => true,
            Ok(_) => {
                failures.push(format!("{name}: swap is not a bijection"));
                false
            }
            Err(e) => {
                failures.push(format!("{name}: swap is not a chain map ({e})"));
                false
            }
        }
    };

    let op_holds = swap_check(Adc::op_dims, "op", &mut failures);
    let co_holds = swap_check(Adc::co_dims, "co", &mut failures);

    let full_holds = {
        let lhs = t.dualize(&t.full_dims());
        let rhs = k.dualize(&k.full_dims()).tensor(&l.dualize(&l.full_dims()));
        if lhs == rhs {
            true
        } else {
            failures.push("full duality: (K⊗L)° differs from K°⊗L°".into());
            false
        }
    };

    let mut involutive = true;
    for dims in [t.op_dims(), t.co_dims(), t.full_dims()] {
        if t.dualize(&dims).dualize(&dims) != t {
            involutive = false;
            failures.push(format!("dualize not involutive on dims {dims:?}"));
        }
    }

    DualityReport { op_holds, co_holds, full_holds, involutive, failures }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::are_isomorphic;
    use crate::theta::{to_adc, GlobularSum};

    fn interval_like() -> Adc {
        Adc::path(1)
    }

    #[test]
    fn nabla_on_the_square_kills_the_top_cell() {
        let k = interval_like();
        let map = nabla(&k, &k, WedgeSide::Left).unwrap();
        let top = Label::susp(Label::tensor(Adc::path_edge(0), Adc::path_edge(0)));
        assert!(map.image_of(&top).is_zero());
    }

    #[test]
    fn nabla_keeps_the_degree_matching_wedge_factor() {
        let k = interval_like();
        let l = Adc::point();
        let map = nabla(&k, &l, WedgeSide::Left).unwrap();
        let lab = Label::susp(Label::tensor(Adc::path_edge(0), Label::name("*")));
        let expected = Chain::single(Label::susp(Adc::path_edge(0)), 2);
        assert_eq!(*map.image_of(&lab), expected);
    }

    #[test]
    fn cone_formulas_frozen() {
        let k = interval_like();
        let f = decomposition_cone(&k, &k).unwrap();
        let p0 = Label::name("p0");
        let p1 = Label::name("p1");
        let v0 = Adc::path_vertex(0);
        let e0 = Adc::path_edge(0);
        // f([v0 ⊗ {0} ⊗ v0, 1]) = [v0,1]⊗{1} + {0}⊗[v0,1]
        let lab = Label::susp(Label::tensor(
            Label::tensor(v0.clone(), v0.clone()),
            v0.clone(),
        ));
        let expected = Chain::from_terms(
            1,
            [
                (Label::tensor(Label::susp(v0.clone()), p1.clone()), 1),
                (Label::tensor(p0.clone(), Label::susp(v0.clone())), 1),
            ],
        );
        assert_eq!(*f.image_of(&lab), expected);
        // f([e ⊗ {0} ⊗ e, 1]) = 0
        let lab = Label::susp(Label::tensor(
            Label::tensor(e0.clone(), v0.clone()),
            e0.clone(),
        ));
        assert!(f.image_of(&lab).is_zero());
        // f([e ⊗ [1] ⊗ v0, 1]) = [e,1]⊗[v0,1]
        let lab = Label::susp(Label::tensor(
            Label::tensor(e0.clone(), e0.clone()),
            v0.clone(),
        ));
        let expected = Chain::single(
            Label::tensor(Label::susp(e0.clone()), Label::susp(v0.clone())),
            3,
        );
        assert_eq!(*f.image_of(&lab), expected);
    }

    #[test]
    fn p_map_frozen_clauses() {
        let a = interval_like();
        let p = p_map(&a, 1).unwrap();
        let tc = suspend_m(&a, 1).unwrap();
        // p([e,1] ⊗ e_0) = [e ⊗ e_0, 1]
        let src = Label::tensor(Label::susp(Adc::path_edge(0)), Adc::path_edge(0));
        let base2 = a.tensor(&Adc::path(1));
        let td = suspend_m(&base2, 1).unwrap();
        let expected = td.seg_label(0, &Label::tensor(Adc::path_edge(0), Adc::path_edge(0)));
        assert_eq!(*p.image_of(&src), Chain::single(expected, 3));
        // p({i} ⊗ e_0) = 0
        for v in [&tc.vertices[0], &tc.vertices[1]] {
            let src = Label::tensor((*v).clone(), Adc::path_edge(0));
            assert!(p.image_of(&src).is_zero());
        }
    }

    #[test]
    fn sections_hold_for_small_complexes() {
        let globe2 = to_adc(&GlobularSum::globe(2));
        for a in [Adc::point(), interval_like(), globe2] {
            for n in 1..=3 {
                let (p, s) = p_s_nm(&a, n, 1).unwrap();
                assert!(s.then(&p).unwrap().is_identity_on_basis());
                // s ∘ p is idempotent.
                let sp = p.then(&s).unwrap();
                assert_eq!(sp.then(&sp).unwrap(), sp);
            }
        }
    }

    #[test]
    fn sections_hold_for_double_suspensions() {
        for c in [Adc::point(), interval_like()] {
            for (n, m) in [(1, 2), (2, 2)] {
                let (p, s) = p_s_nm(&c, n, m).unwrap();
                assert!(s.then(&p).unwrap().is_identity_on_basis());
            }
        }
    }

    #[test]
    fn block_reindex_frozen_example() {
        // n = 2, k = 1: vertex 3 lands on 1.
        assert_eq!(block_reindex(2, 1, 3), 1);
        assert_eq!(block_reindex(2, 1, 1), 0);
        assert_eq!(block_reindex(2, 1, 5), 2);
    }

    #[test]
    fn susp_tensor_decomposition_point_point() {
        let w = verify_susp_tensor_decomposition(&Adc::point(), &Adc::point()).unwrap();
        let grid = Adc::path(1).tensor(&Adc::path(1));
        assert!(are_isomorphic(&w.colimit, &grid));
    }

    #[test]
    fn susp_tensor_decomposition_interval_cases() {
        let pt = Adc::point();
        let edge = to_adc(&GlobularSum::globe(1));
        for (k, l) in [(&pt, &edge), (&edge, &pt), (&edge, &edge)] {
            let w = verify_susp_tensor_decomposition(k, l).unwrap();
            w.verify().unwrap();
        }
    }

    #[test]
    fn susp_colimit_witnesses() {
        let w = verify_susp_colimit(&Adc::point(), 1).unwrap();
        assert!(are_isomorphic(&w.colimit, &to_adc(&GlobularSum::linear(1))));
        let edge = to_adc(&GlobularSum::globe(1));
        let w = verify_susp_colimit(&edge, 1).unwrap();
        assert!(are_isomorphic(&w.colimit, &to_adc(&GlobularSum::globe(2))));
        let w = verify_susp_colimit(&edge, 2).unwrap();
        let expected = to_adc(&GlobularSum::node(vec![
            GlobularSum::globe(1),
            GlobularSum::globe(1),
        ]));
        assert!(are_isomorphic(&w.colimit, &expected));
    }

    #[test]
    fn cosuspension_witnesses() {
        let w = verify_cosuspension(&Adc::point(), 1).unwrap();
        w.verify().unwrap();
        let edge = to_adc(&GlobularSum::globe(1));
        let w = verify_cosuspension(&edge, 1).unwrap();
        w.verify().unwrap();
        let w = verify_cosuspension(&edge, 2).unwrap();
        w.verify().unwrap();
    }

    #[test]
    fn duality_identities_on_small_pairs() {
        let pt = Adc::point();
        let edge = to_adc(&GlobularSum::globe(1));
        let globe2 = to_adc(&GlobularSum::globe(2));
        for (k, l) in [(&edge, &edge), (&globe2, &edge), (&pt, &globe2)] {
            let report = duality_tensor_check(k, l);
            assert!(report.all_hold(), "failures: {:?}", report.failures);
        }
    }
}

#[cfg(test)]
mod nabla_tests {
    use super::*;

    #[test]
    fn swapped_nabla_lands_in_the_reversed_wedge() {
        let k = Adc::path(1);
        let l = Adc::point();
        // Both orientations must be valid chain maps; construction checks it.
        nabla(&k, &l, WedgeSide::Left).unwrap();
        let right = nabla(&k, &l, WedgeSide::Right).unwrap();
        // In [L,1] ∨ [K,1] the interval edge sits in the second segment.
        let wedge = susp_wedge(&l, &k).unwrap();
        let lab = Label::susp(Label::tensor(Adc::path_edge(0), Label::name("*")));
        let image = right.image_of(&lab);
        assert_eq!(image.support_size(), 1);
        assert_eq!(
            image.support().next().unwrap(),
            &wedge.second[&Label::susp(Adc::path_edge(0))]
        );
    }
}
