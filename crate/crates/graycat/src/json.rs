//! JSON documents for the domain values.
//!
//! The complex schema is
//! `{"basis": [{"id", "degree"}], "differential": {id: [{"id", "coeff"}]},
//! "augmentation": {id: int}}` with exact integers only; categories, double
//! categories and functors use name-based tables. All maps are ordered, so
//! re-serialization of a parsed document is deterministic.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::adc::Adc;
use crate::chain::Chain;
use crate::doublecat::{EdgeData, FiniteDoubleCat, Marking, SquareData};
use crate::label::Label;
use crate::strictcat::{CatBuilder, CatFunctor, Cell, FiniteStrictNCat};
use crate::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct AdcDoc {
    pub basis: Vec<BasisElementDoc>,
    pub differential: BTreeMap<String, Vec<TermDoc>>,
    pub augmentation: BTreeMap<String, i64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub endpoints: Option<(String, String)>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct BasisElementDoc {
    pub id: String,
    pub degree: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TermDoc {
    pub id: String,
    pub coeff: i64,
}

impl AdcDoc {
    pub fn from_adc(adc: &Adc) -> AdcDoc {
        let basis = adc
            .basis()
            .into_iter()
            .map(|(l, d)| BasisElementDoc { id: l.to_string(), degree: d })
            .collect();
        let mut differential = BTreeMap::new();
        let mut augmentation = BTreeMap::new();
        for (l, d) in adc.basis() {
            if d == 0 {
                augmentation.insert(l.to_string(), adc.aug_of(&l));
            } else {
                let terms = adc
                    .diff_of(&l)
                    .iter()
                    .map(|(t, k)| TermDoc { id: t.to_string(), coeff: k })
                    .collect();
                differential.insert(l.to_string(), terms);
            }
        }
        AdcDoc {
            basis,
            differential,
            augmentation,
            endpoints: adc.endpoints().map(|(s, e)| (s.to_string(), e.to_string())),
        }
    }

    pub fn into_adc(self) -> Result<Adc> {
        let mut elements = Vec::new();
        let mut degrees: BTreeMap<String, usize> = BTreeMap::new();
        for b in &self.basis {
            let label = Label::parse(&b.id)?;
            degrees.insert(b.id.clone(), b.degree);
            elements.push((label, b.degree));
        }
        let mut diffs = Vec::new();
        for (id, terms) in &self.differential {
            let degree = *degrees
                .get(id)
                .ok_or_else(|| Error::InvalidAdc(format!("differential for unknown id {id}")))?;
            if degree == 0 {
                return Err(Error::InvalidAdc(format!("differential for degree-0 id {id}")));
            }
            let mut chain = Chain::zero(degree - 1);
            for t in terms {
                chain.add_term(Label::parse(&t.id)?, t.coeff);
            }
            diffs.push((Label::parse(id)?, chain));
        }
        let mut augs = Vec::new();
        for (id, value) in &self.augmentation {
            augs.push((Label::parse(id)?, *value));
        }
        let adc = Adc::new(elements, diffs, augs)?;
        match self.endpoints {
            Some((s, e)) => adc.with_endpoints(Label::parse(&s)?, Label::parse(&e)?),
            None => Ok(adc),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CatDoc {
    pub max_dim: usize,
    pub cells: Vec<Vec<String>>,
    /// Per dimension ≥ 1: cell name → boundary cell name.
    pub src: Vec<BTreeMap<String, String>>,
    pub tgt: Vec<BTreeMap<String, String>>,
    /// Per dimension < max_dim: cell name → identity cell name.
    pub identities: Vec<BTreeMap<String, String>>,
    pub compositions: Vec<CompDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CompDoc {
    pub i: usize,
    pub dim: usize,
    pub lhs: String,
    pub rhs: String,
    pub eq: String,
}

impl CatDoc {
    pub fn from_cat(cat: &FiniteStrictNCat) -> CatDoc {
        let cells: Vec<Vec<String>> = (0..=cat.max_dim())
            .map(|d| cat.cells(d).map(|x| cat.name(x).to_string()).collect())
            .collect();
        let mut src = Vec::new();
        let mut tgt = Vec::new();
        for d in 1..=cat.max_dim() {
            let mut s = BTreeMap::new();
            let mut t = BTreeMap::new();
            for x in cat.cells(d) {
                s.insert(cat.name(x).to_string(), cat.name(cat.src(x)).to_string());
                t.insert(cat.name(x).to_string(), cat.name(cat.tgt(x)).to_string());
            }
            src.push(s);
            tgt.push(t);
        }
        let mut identities = Vec::new();
        for d in 0..cat.max_dim() {
            let mut ids = BTreeMap::new();
            for x in cat.cells(d) {
                ids.insert(cat.name(x).to_string(), cat.name(cat.identity(x)).to_string());
            }
            identities.push(ids);
        }
        let compositions = cat
            .comp_entries()
            .map(|(i, dim, x, y, z)| CompDoc {
                i,
                dim,
                lhs: cat.name(Cell { dim, idx: x }).to_string(),
                rhs: cat.name(Cell { dim, idx: y }).to_string(),
                eq: cat.name(Cell { dim, idx: z }).to_string(),
            })
            .collect();
        CatDoc { max_dim: cat.max_dim(), cells, src, tgt, identities, compositions }
    }

    pub fn into_cat(self) -> Result<FiniteStrictNCat> {
        let mut builder = CatBuilder::new(self.max_dim)?;
        let mut index: Vec<BTreeMap<String, usize>> = Vec::new();
        for (d, level) in self.cells.iter().enumerate() {
            let mut map = BTreeMap::new();
            for name in level {
                let idx = if d == 0 {
                    builder.add_object(name.clone())
                } else {
                    let s = *index[d - 1].get(&self.src[d - 1][name]).ok_or_else(|| {
                        Error::InvalidCategory(format!("unknown source for {name}"))
                    })?;
                    let t = *index[d - 1].get(&self.tgt[d - 1][name]).ok_or_else(|| {
                        Error::InvalidCategory(format!("unknown target for {name}"))
                    })?;
                    builder.add_cell(d, name.clone(), s, t)
                };
                map.insert(name.clone(), idx);
            }
            index.push(map);
        }
        for (d, ids) in self.identities.iter().enumerate() {
            for (name, id_name) in ids {
                let low = index[d][name];
                let up = *index[d + 1]
                    .get(id_name)
                    .ok_or_else(|| Error::InvalidCategory(format!("unknown identity {id_name}")))?;
                builder.set_identity(d, low, up);
            }
        }
        for c in &self.compositions {
            let x = index[c.dim][&c.lhs];
            let y = index[c.dim][&c.rhs];
            let z = index[c.dim][&c.eq];
            builder.set_comp(c.i, c.dim, x, y, z);
        }
        builder.finish()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FunctorDoc {
    /// Per dimension: source cell name → target cell name.
    pub maps: Vec<BTreeMap<String, String>>,
}

impl FunctorDoc {
    pub fn from_functor(
        f: &CatFunctor,
        source: &FiniteStrictNCat,
        target: &FiniteStrictNCat,
    ) -> FunctorDoc {
        let maps = f
            .maps
            .iter()
            .enumerate()
            .map(|(d, level)| {
                level
                    .iter()
                    .enumerate()
                    .map(|(i, j)| {
                        (
                            source.name(Cell { dim: d, idx: i }).to_string(),
                            target.name(Cell { dim: d, idx: *j }).to_string(),
                        )
                    })
                    .collect()
            })
            .collect();
        FunctorDoc { maps }
    }

    pub fn into_functor(
        self,
        source: &FiniteStrictNCat,
        target: &FiniteStrictNCat,
    ) -> Result<CatFunctor> {
        let mut maps = Vec::new();
        for (d, level) in self.maps.iter().enumerate() {
            let mut out = vec![0usize; source.num_cells(d)];
            if level.len() != source.num_cells(d) {
                return Err(Error::InvalidCategory(format!(
                    "functor level {d} has {} entries, expected {}",
                    level.len(),
                    source.num_cells(d)
                )));
            }
            for (name, image) in level {
                let x = source
                    .find_by_name(d, name)
                    .ok_or_else(|| Error::InvalidCategory(format!("unknown cell {name}")))?;
                let y = target
                    .find_by_name(d, image)
                    .ok_or_else(|| Error::InvalidCategory(format!("unknown image {image}")))?;
                out[x.idx] = y.idx;
            }
            maps.push(out);
        }
        let functor = CatFunctor { maps };
        functor.validate(source, target)?;
        Ok(functor)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct DoubleDoc {
    pub objects: Vec<String>,
    pub vcells: Vec<EdgeDoc>,
    pub vcomp: Vec<PairDoc>,
    pub hcells: Vec<EdgeDoc>,
    pub hcomp: Vec<PairDoc>,
    pub squares: Vec<SquareDoc>,
    pub sq_vcomp: Vec<PairDoc>,
    pub sq_hcomp: Vec<PairDoc>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub marking: Option<MarkingDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct EdgeDoc {
    pub name: String,
    pub src: String,
    pub tgt: String,
    #[serde(default)]
    pub identity_of: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SquareDoc {
    pub name: String,
    pub top: String,
    pub bottom: String,
    pub left: String,
    pub right: String,
    #[serde(default)]
    pub v_identity_of: Option<String>,
    #[serde(default)]
    pub h_unit_of: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PairDoc {
    pub lhs: String,
    pub rhs: String,
    pub eq: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MarkingDoc {
    pub vcells: Vec<String>,
    pub squares: Vec<String>,
}

impl DoubleDoc {
    pub fn from_double(d: &FiniteDoubleCat) -> DoubleDoc {
        let objects = d.objects.clone();
        let edge_docs = |edges: &Vec<EdgeData>, ids: &Vec<usize>| -> Vec<EdgeDoc> {
            edges
                .iter()
                .enumerate()
                .map(|(i, e)| EdgeDoc {
                    name: e.name.clone(),
                    src: d.objects[e.src].clone(),
                    tgt: d.objects[e.tgt].clone(),
                    identity_of: ids
                        .iter()
                        .position(|id| *id == i)
                        .map(|o| d.objects[o].clone()),
                })
                .collect()
        };
        let pair_docs = |comp: &std::collections::BTreeMap<(usize, usize), usize>,
                         names: &dyn Fn(usize) -> String| {
            comp.iter()
                .map(|((x, y), z)| PairDoc { lhs: names(*x), rhs: names(*y), eq: names(*z) })
                .collect::<Vec<_>>()
        };
        let vname = |i: usize| d.vcells[i].name.clone();
        let hname = |i: usize| d.hcells[i].name.clone();
        let sname = |i: usize| d.squares[i].name.clone();
        DoubleDoc {
            objects,
            vcells: edge_docs(&d.vcells, &d.vid),
            vcomp: pair_docs(&d.vcomp, &vname),
            hcells: edge_docs(&d.hcells, &d.hid),
            hcomp: pair_docs(&d.hcomp, &hname),
            squares: d
                .squares
                .iter()
                .enumerate()
                .map(|(i, s)| SquareDoc {
                    name: s.name.clone(),
                    top: d.hcells[s.top].name.clone(),
                    bottom: d.hcells[s.bottom].name.clone(),
                    left: d.vcells[s.left].name.clone(),
                    right: d.vcells[s.right].name.clone(),
                    v_identity_of: d
                        .sq_vid
                        .iter()
                        .position(|sq| *sq == i)
                        .map(|u| d.hcells[u].name.clone()),
                    h_unit_of: d
                        .sq_hid
                        .iter()
                        .position(|sq| *sq == i)
                        .map(|f| d.vcells[f].name.clone()),
                })
                .collect(),
            sq_vcomp: pair_docs(&d.sq_vcomp, &sname),
            sq_hcomp: pair_docs(&d.sq_hcomp, &sname),
            marking: d.marking.as_ref().map(|m| MarkingDoc {
                vcells: m.vcells.iter().map(|f| d.vcells[*f].name.clone()).collect(),
                squares: m.squares.iter().map(|s| d.squares[*s].name.clone()).collect(),
            }),
        }
    }

    pub fn into_double(self) -> Result<FiniteDoubleCat> {
        let obj_index: BTreeMap<&str, usize> =
            self.objects.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let find_obj = |n: &str| -> Result<usize> {
            obj_index
                .get(n)
                .copied()
                .ok_or_else(|| Error::InvalidDouble(format!("unknown object {n}")))
        };
        let build_edges = |docs: &Vec<EdgeDoc>| -> Result<(Vec<EdgeData>, Vec<usize>)> {
            let mut edges = Vec::new();
            let mut ids = vec![usize::MAX; self.objects.len()];
            for (i, e) in docs.iter().enumerate() {
                edges.push(EdgeData {
                    name: e.name.clone(),
                    src: find_obj(&e.src)?,
                    tgt: find_obj(&e.tgt)?,
                });
                if let Some(obj) = &e.identity_of {
                    ids[find_obj(obj)?] = i;
                }
            }
            if ids.contains(&usize::MAX) {
                return Err(Error::InvalidDouble("missing identity edges".into()));
            }
            Ok((edges, ids))
        };
        let (vcells, vid) = build_edges(&self.vcells)?;
        let (hcells, hid) = build_edges(&self.hcells)?;
        let v_index: BTreeMap<&str, usize> =
            self.vcells.iter().enumerate().map(|(i, e)| (e.name.as_str(), i)).collect();
        let h_index: BTreeMap<&str, usize> =
            self.hcells.iter().enumerate().map(|(i, e)| (e.name.as_str(), i)).collect();
        let find = |index: &BTreeMap<&str, usize>, n: &str| -> Result<usize> {
            index
                .get(n)
                .copied()
                .ok_or_else(|| Error::InvalidDouble(format!("unknown cell {n}")))
        };
        let mut squares = Vec::new();
        let mut sq_vid = vec![usize::MAX; hcells.len()];
        let mut sq_hid = vec![usize::MAX; vcells.len()];
        let s_index: BTreeMap<&str, usize> =
            self.squares.iter().enumerate().map(|(i, s)| (s.name.as_str(), i)).collect();
        for (i, s) in self.squares.iter().enumerate() {
            squares.push(SquareData {
                name: s.name.clone(),
                top: find(&h_index, &s.top)?,
                bottom: find(&h_index, &s.bottom)?,
                left: find(&v_index, &s.left)?,
                right: find(&v_index, &s.right)?,
            });
            if let Some(u) = &s.v_identity_of {
                sq_vid[find(&h_index, u)?] = i;
            }
            if let Some(f) = &s.h_unit_of {
                sq_hid[find(&v_index, f)?] = i;
            }
        }
        if sq_vid.contains(&usize::MAX) || sq_hid.contains(&usize::MAX) {
            return Err(Error::InvalidDouble("missing identity squares".into()));
        }
        let pairs = |docs: &Vec<PairDoc>, index: &BTreeMap<&str, usize>| -> Result<_> {
            let mut out = BTreeMap::new();
            for p in docs {
                out.insert((find(index, &p.lhs)?, find(index, &p.rhs)?), find(index, &p.eq)?);
            }
            Ok(out)
        };
        let marking = match &self.marking {
            None => None,
            Some(m) => Some(Marking {
                vcells: m
                    .vcells
                    .iter()
                    .map(|n| find(&v_index, n))
                    .collect::<Result<_>>()?,
                squares: m
                    .squares
                    .iter()
                    .map(|n| find(&s_index, n))
                    .collect::<Result<_>>()?,
            }),
        };
        Ok(FiniteDoubleCat {
            objects: self.objects.clone(),
            vcomp: pairs(&self.vcomp, &v_index)?,
            hcomp: pairs(&self.hcomp, &h_index)?,
            sq_vcomp: pairs(&self.sq_vcomp, &s_index)?,
            sq_hcomp: pairs(&self.sq_hcomp, &s_index)?,
            vcells,
            vid,
            hcells,
            hid,
            squares,
            sq_vid,
            sq_hid,
            marking,
        })
    }
}
