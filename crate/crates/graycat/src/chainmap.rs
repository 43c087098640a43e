//! Maps of augmented directed complexes, and the pushouts the decomposition
//! theorems are computed with.

use std::collections::{BTreeMap, BTreeSet};

use crate::adc::Adc;
use crate::chain::Chain;
use crate::label::Label;
use crate::{Error, Result};

/// A degree-preserving linear map commuting with differentials and
/// augmentations. Construction verifies both conditions on every basis
/// element; a `ChainMap` value is therefore always a valid map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    source: Adc,
    target: Adc,
    action: BTreeMap<Label, Chain>,
}

impl ChainMap {
    pub fn new(source: Adc, target: Adc, action: BTreeMap<Label, Chain>) -> Result<ChainMap> {
        for (label, degree) in source.basis() {
            let image = action.get(&label).ok_or_else(|| {
                Error::NotChainMap(format!("no image given for basis element {label}"))
            })?;
            if image.degree() != degree {
                return Err(Error::NotChainMap(format!(
                    "image of {label} has degree {} (expected {degree})",
                    image.degree()
                )));
            }
            for l in image.support() {
                match target.degree_of(l) {
                    Some(d) if d == degree => {}
                    _ => {
                        return Err(Error::NotChainMap(format!(
                            "image of {label} references {l}, not a degree-{degree} target basis element"
                        )))
                    }
                }
            }
        }
        let map = ChainMap { source, target, action };
        for (label, degree) in map.source.basis() {
            if degree == 0 {
                let e_src = map.source.aug_of(&label);
                let e_tgt = map.target.augmentation(&map.action[&label]);
                if e_src != e_tgt {
                    return Err(Error::NotChainMap(format!(
                        "augmentation not preserved at {label}: {e_src} vs {e_tgt}"
                    )));
                }
            } else {
                let lhs = map.target.boundary(&map.action[&label]);
                let rhs = map.apply(map.source.diff_of(&label));
                if lhs != rhs {
                    return Err(Error::NotChainMap(format!(
                        "∂-commutation fails at {label}: ∂f({label}) = {lhs}, f(∂{label}) = {rhs}"
                    )));
                }
            }
        }
        Ok(map)
    }

    /// Build from a function on basis labels.
    pub fn from_fn(
        source: Adc,
        target: Adc,
        mut f: impl FnMut(&Label, usize) -> Chain,
    ) -> Result<ChainMap> {
        let action = source
            .basis()
            .into_iter()
            .map(|(l, d)| {
                let img = f(&l, d);
                (l, img)
            })
            .collect();
        ChainMap::new(source, target, action)
    }

    /// Build from a label-to-label assignment.
    pub fn from_label_map(
        source: Adc,
        target: Adc,
        map: &BTreeMap<Label, Label>,
    ) -> Result<ChainMap> {
        let action = source
            .basis()
            .into_iter()
            .map(|(l, d)| {
                let img = map
                    .get(&l)
                    .map(|t| Chain::single(t.clone(), d))
                    .unwrap_or_else(|| Chain::zero(d));
                (l, img)
            })
            .collect();
        ChainMap::new(source, target, action)
    }

    pub fn identity(adc: &Adc) -> ChainMap {
        let action = adc
            .basis()
            .into_iter()
            .map(|(l, d)| (l.clone(), Chain::single(l, d)))
            .collect();
        ChainMap { source: adc.clone(), target: adc.clone(), action }
    }

    pub fn source(&self) -> &Adc {
        &self.source
    }

    pub fn target(&self) -> &Adc {
        &self.target
    }

    pub fn image_of(&self, label: &Label) -> &Chain {
        &self.action[label]
    }

    pub fn apply(&self, chain: &Chain) -> Chain {
        let mut out = Chain::zero(chain.degree());
        for (l, k) in chain.iter() {
            out = out.add(&self.action[l].scale(k));
        }
        out
    }

    /// `other ∘ self` (apply `self` first). The intermediate complexes must
    /// be equal.
    pub fn then(&self, other: &ChainMap) -> Result<ChainMap> {
        if self.target != other.source {
            return Err(Error::NotChainMap(
                "composition: middle complexes differ".into(),
            ));
        }
        let action = self
            .source
            .basis()
            .into_iter()
            .map(|(l, _)| {
                let img = other.apply(&self.action[&l]);
                (l, img)
            })
            .collect();
        ChainMap::new(self.source.clone(), other.target.clone(), action)
    }

    pub fn is_identity_on_basis(&self) -> bool {
        self.source == self.target
            && self.source.basis().into_iter().all(|(l, d)| {
                self.action[&l] == Chain::single(l.clone(), d)
            })
    }

    /// When every basis element maps to a single basis element with
    /// coefficient 1 and the assignment is a bijection, return it.
    pub fn as_basis_bijection(&self) -> Option<BTreeMap<Label, Label>> {
        let mut map = BTreeMap::new();
        let mut seen = BTreeSet::new();
        for (l, _) in self.source.basis() {
            let img = &self.action[&l];
            if img.support_size() != 1 {
                return None;
            }
            let (t, k) = img.iter().next().unwrap();
            if k != 1 || !seen.insert(t.clone()) {
                return None;
            }
            map.insert(l, t.clone());
        }
        if seen.len() == self.target.len() {
            Some(map)
        } else {
            None
        }
    }

    /// Invert a basis bijection.
    pub fn inverse_of_bijection(&self) -> Result<ChainMap> {
        let bij = self.as_basis_bijection().ok_or_else(|| {
            Error::NotChainMap("map is not a basis bijection; no inverse taken".into())
        })?;
        let inv: BTreeMap<Label, Label> = bij.into_iter().map(|(a, b)| (b, a)).collect();
        ChainMap::from_label_map(self.target.clone(), self.source.clone(), &inv)
    }

    /// Does every basis element map to a single basis element or to zero?
    pub fn is_basis_to_basis_or_zero(&self) -> bool {
        self.action.values().all(|c| {
            c.is_zero() || (c.support_size() == 1 && c.iter().next().unwrap().1 == 1)
        })
    }

    /// Injective on basis: basis-to-basis with distinct images.
    pub fn is_injective_on_basis(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.action.values().all(|c| {
            c.support_size() == 1
                && c.iter().next().unwrap().1 == 1
                && seen.insert(c.support().next().unwrap().clone())
        })
    }
}

/// A computed pushout: the object and its two legs.
///
/// For a span `B ←f− A −g→ C`, `left_leg : B → P` and `right_leg : C → P`.
#[derive(Clone, Debug)]
pub struct Pushout {
    pub object: Adc,
    pub left_leg: ChainMap,
    pub right_leg: ChainMap,
}

/// Pushout of a span of complexes.
///
/// Requires at least one leg to be injective on basis (basis elements to
/// distinct basis elements); the other leg may be any chain map. The pushout
/// is then again free with an explicit basis: the non-injective side's target
/// plus the uncollapsed remainder of the injective side's target, with every
/// identified element rewritten through the span.
pub fn pushout_adc(f: &ChainMap, g: &ChainMap) -> Result<Pushout> {
    if f.source() != g.source() {
        return Err(Error::PushoutSpan("span legs have different sources".into()));
    }
    if f.is_injective_on_basis() {
        let po = pushout_along(f, g)?;
        Ok(Pushout { object: po.object, left_leg: po.left_leg, right_leg: po.right_leg })
    } else if g.is_injective_on_basis() {
        let po = pushout_along(g, f)?;
        Ok(Pushout { object: po.object, left_leg: po.right_leg, right_leg: po.left_leg })
    } else {
        Err(Error::PushoutSpan(
            "neither span leg is injective on basis".into(),
        ))
    }
}

/// `inj : A → B` injective on basis, `other : A → C` arbitrary.
fn pushout_along(inj: &ChainMap, other: &ChainMap) -> Result<Pushout> {
    let b = inj.target();
    let c = other.target();
    let mut image_of: BTreeMap<Label, Chain> = BTreeMap::new(); // B-label -> chain over P labels
    let mut identified: BTreeMap<Label, Chain> = BTreeMap::new(); // f(a) -> g(a)
    for (a, _) in inj.source().basis() {
        let fa = inj.image_of(&a).support().next().expect("injective leg").clone();
        identified.insert(fa, other.image_of(&a).clone());
    }

    let mut used: BTreeSet<Label> = c.basis().into_iter().map(|(l, _)| l).collect();
    let mut elements: Vec<(Label, usize)> = c.basis();
    let mut renamed_remainder: Vec<(Label, Label, usize)> = Vec::new(); // (b-label, p-label, degree)
    for (bl, d) in b.basis() {
        if let Some(gc) = identified.get(&bl) {
            image_of.insert(bl, gc.clone());
        } else {
            let fresh = crate::adc::fresh_label(&bl, &used);
            used.insert(fresh.clone());
            elements.push((fresh.clone(), d));
            image_of.insert(bl.clone(), Chain::single(fresh.clone(), d));
            renamed_remainder.push((bl, fresh, d));
        }
    }

    let rewrite = |chain: &Chain| -> Chain {
        let mut out = Chain::zero(chain.degree());
        for (l, k) in chain.iter() {
            out = out.add(&image_of[l].scale(k));
        }
        out
    };

    let mut diffs: Vec<(Label, Chain)> = Vec::new();
    let mut augs: Vec<(Label, i64)> = Vec::new();
    for (l, d) in c.basis() {
        if d == 0 {
            augs.push((l.clone(), c.aug_of(&l)));
        } else {
            diffs.push((l.clone(), c.diff_of(&l).clone()));
        }
    }
    for (bl, pl, d) in &renamed_remainder {
        if *d == 0 {
            augs.push((pl.clone(), b.aug_of(bl)));
        } else {
            diffs.push((pl.clone(), rewrite(b.diff_of(bl))));
        }
    }
    let object = Adc::new(elements, diffs, augs)?;

    let left_leg = ChainMap::new(b.clone(), object.clone(), {
        b.basis().into_iter().map(|(l, _)| (l.clone(), image_of[&l].clone())).collect()
    })?;
    let right_leg = ChainMap::from_fn(c.clone(), object.clone(), |l, d| Chain::single(l.clone(), d))?;

    // The square commutes by construction; keep a cheap defensive check.
    for (a, _) in inj.source().basis() {
        let via_b = left_leg.apply(inj.image_of(&a));
        let via_c = right_leg.apply(other.image_of(&a));
        if via_b != via_c {
            return Err(Error::PushoutSpan(format!("pushout square does not commute at {a}")));
        }
    }
    Ok(Pushout { object, left_leg, right_leg })
}

impl Pushout {
    /// Mediating map to a cocone `(u : B → Q, v : C → Q)` with `u∘f = v∘g`.
    /// The map is unique since the pushout basis comes from `B ⊔ C`; its
    /// construction is verified against both cocone legs before returning.
    pub fn induced(&self, u: &ChainMap, v: &ChainMap) -> Result<ChainMap> {
        if u.target() != v.target() {
            return Err(Error::PushoutSpan("cocone legs have different targets".into()));
        }
        if u.source() != self.left_leg.source() || v.source() != self.right_leg.source() {
            return Err(Error::PushoutSpan("cocone legs do not match the span targets".into()));
        }
        let mut action: BTreeMap<Label, Chain> = BTreeMap::new();
        for (leg, cocone) in [(&self.left_leg, u), (&self.right_leg, v)] {
            for (l, _) in leg.source().basis() {
                let img = leg.image_of(&l);
                if img.support_size() == 1 && img.iter().next().unwrap().1 == 1 {
                    let p = img.support().next().unwrap().clone();
                    // When both legs hit the same pushout element the cocone
                    // condition makes the two candidate images equal.
                    action.insert(p, cocone.image_of(&l).clone());
                }
            }
        }
        for (p, _) in self.object.basis() {
            if !action.contains_key(&p) {
                return Err(Error::PushoutSpan(format!(
                    "pushout element {p} not reached by either leg"
                )));
            }
        }
        let mediating = ChainMap::new(self.object.clone(), u.target().clone(), action)?;
        if self.left_leg.then(&mediating)? != *u || self.right_leg.then(&mediating)? != *v {
            return Err(Error::PushoutSpan(
                "mediating map does not factor the cocone".into(),
            ));
        }
        Ok(mediating)
    }
}
