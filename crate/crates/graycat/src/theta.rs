//! Globular sums: the tree combinatorics of Θ.
//!
//! A globular sum is either the point `[0]` or a node `[a, n]` with a
//! non-empty list of globular sums as hom entries. Dimension, wedge,
//! suspension, globes, spines, truncation and dualities are all tree
//! operations; `to_adc` interprets a sum as a complex by iterated
//! suspension and endpoint gluing.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::adc::Adc;
use crate::Result;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GlobularSum {
    Point,
    Node(Vec<GlobularSum>),
}

impl GlobularSum {
    pub fn node(children: Vec<GlobularSum>) -> GlobularSum {
        assert!(!children.is_empty(), "a node needs at least one hom entry");
        GlobularSum::Node(children)
    }

    /// The n-globe: n-fold suspension of the point.
    pub fn globe(n: usize) -> GlobularSum {
        let mut g = GlobularSum::Point;
        for _ in 0..n {
            g = GlobularSum::node(vec![g]);
        }
        g
    }

    /// The linear sum `[n]` (only valid for n ≥ 1; `[0]` is `Point`).
    pub fn linear(n: usize) -> GlobularSum {
        if n == 0 {
            GlobularSum::Point
        } else {
            GlobularSum::node(vec![GlobularSum::Point; n])
        }
    }

    pub fn suspend(self) -> GlobularSum {
        GlobularSum::node(vec![self])
    }

    pub fn dimension(&self) -> usize {
        match self {
            GlobularSum::Point => 0,
            GlobularSum::Node(children) => {
                1 + children.iter().map(|c| c.dimension()).max().unwrap()
            }
        }
    }

    pub fn children(&self) -> &[GlobularSum] {
        match self {
            GlobularSum::Point => &[],
            GlobularSum::Node(children) => children,
        }
    }

    /// Render in the `[a, n]` notation, with `[n]` and `D_n` shorthands.
    pub fn render(&self) -> String {
        match self {
            GlobularSum::Point => "[0]".to_string(),
            GlobularSum::Node(children) => {
                if children.iter().all(|c| *c == GlobularSum::Point) {
                    return format!("[{}]", children.len());
                }
                if children.len() == 1 {
                    if let Some(n) = self.globe_dimension() {
                        return format!("D_{n}");
                    }
                }
                let inner: Vec<String> = children.iter().map(|c| c.render()).collect();
                format!("[{{{}}}, {}]", inner.join(", "), children.len())
            }
        }
    }

    fn globe_dimension(&self) -> Option<usize> {
        match self {
            GlobularSum::Point => Some(0),
            GlobularSum::Node(children) if children.len() == 1 => {
                children[0].globe_dimension().map(|n| n + 1)
            }
            _ => None,
        }
    }
}

/// Wedge: concatenation of hom entries, with the point as unit.
pub fn wedge(a: &GlobularSum, b: &GlobularSum) -> GlobularSum {
    match (a, b) {
        (GlobularSum::Point, _) => b.clone(),
        (_, GlobularSum::Point) => a.clone(),
        (GlobularSum::Node(x), GlobularSum::Node(y)) => {
            let mut children = x.clone();
            children.extend(y.iter().cloned());
            GlobularSum::Node(children)
        }
    }
}

/// A spine presented as a linear chain of globes glued along lower globes:
/// `globes[i+1]` is glued onto `globes[i]` along a globe of dimension
/// `gluings[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpinePresentation {
    pub globes: Vec<usize>,
    pub gluings: Vec<usize>,
}

impl SpinePresentation {
    fn single(n: usize) -> SpinePresentation {
        SpinePresentation { globes: vec![n], gluings: vec![] }
    }

    fn suspend(&self) -> SpinePresentation {
        SpinePresentation {
            globes: self.globes.iter().map(|g| g + 1).collect(),
            gluings: self.gluings.iter().map(|g| g + 1).collect(),
        }
    }

    fn concat(parts: Vec<SpinePresentation>) -> SpinePresentation {
        let mut globes = Vec::new();
        let mut gluings = Vec::new();
        for (i, part) in parts.into_iter().enumerate() {
            if i > 0 {
                gluings.push(0);
            }
            globes.extend(part.globes);
            gluings.extend(part.gluings);
        }
        SpinePresentation { globes, gluings }
    }

    pub fn is_well_formed(&self) -> bool {
        self.gluings.len() + 1 == self.globes.len()
            && self
                .gluings
                .iter()
                .zip(self.globes.windows(2))
                .all(|(g, w)| *g < w[0] && *g < w[1])
    }
}

/// The recursive spine presentation of a globular sum.
pub fn spine(a: &GlobularSum) -> SpinePresentation {
    match a {
        GlobularSum::Point => SpinePresentation::single(0),
        GlobularSum::Node(children) => {
            let parts = children.iter().map(|c| spine(c).suspend()).collect();
            SpinePresentation::concat(parts)
        }
    }
}

/// Interpret a globular sum as a complex: the point for `[0]`, and the
/// endpoint-glued chain of suspensions for `[a, n]`.
pub fn to_adc(a: &GlobularSum) -> Adc {
    fn go(a: &GlobularSum) -> Result<Adc> {
        match a {
            GlobularSum::Point => Ok(Adc::point()),
            GlobularSum::Node(children) => {
                let mut acc: Option<Adc> = None;
                for child in children {
                    let part = go(child)?.suspend()?;
                    acc = Some(match acc {
                        None => part,
                        Some(done) => done.wedge(&part)?.0,
                    });
                }
                Ok(acc.unwrap())
            }
        }
    }
    go(a).expect("globular sums always interpret as complexes")
}

/// Collapse every subtree above dimension `k` to points at depth `k`.
pub fn truncate_sum(a: &GlobularSum, k: usize) -> GlobularSum {
    match a {
        GlobularSum::Point => GlobularSum::Point,
        GlobularSum::Node(_) if k == 0 => GlobularSum::Point,
        GlobularSum::Node(children) => {
            GlobularSum::Node(children.iter().map(|c| truncate_sum(c, k - 1)).collect())
        }
    }
}

/// Reverse hom-entry order at every depth `d` with `d + 1 ∈ dims`.
pub fn dual_sum(a: &GlobularSum, dims: &BTreeSet<usize>) -> GlobularSum {
    fn go(a: &GlobularSum, dims: &BTreeSet<usize>, depth: usize) -> GlobularSum {
        match a {
            GlobularSum::Point => GlobularSum::Point,
            GlobularSum::Node(children) => {
                let mut out: Vec<GlobularSum> =
                    children.iter().map(|c| go(c, dims, depth + 1)).collect();
                if dims.contains(&(depth + 1)) {
                    out.reverse();
                }
                GlobularSum::Node(out)
            }
        }
    }
    go(a, dims, 0)
}

impl fmt::Display for GlobularSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

// JSON form: nested arrays, `[]` is the point.
impl Serialize for GlobularSum {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            GlobularSum::Point => serializer.collect_seq(std::iter::empty::<GlobularSum>()),
            GlobularSum::Node(children) => serializer.collect_seq(children.iter()),
        }
    }
}

impl<'de> Deserialize<'de> for GlobularSum {
    fn deserialize<D: Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<GlobularSum, D::Error> {
        let children = Vec::<GlobularSum>::deserialize(deserializer)?;
        if children.is_empty() {
            Ok(GlobularSum::Point)
        } else {
            Ok(GlobularSum::Node(children))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn globe_dimensions() {
        for n in 0..=6 {
            assert_eq!(GlobularSum::globe(n).dimension(), n);
        }
    }

    #[test]
    fn wedge_laws_on_trees() {
        let a = GlobularSum::linear(2);
        let b = GlobularSum::globe(2);
        let c = GlobularSum::node(vec![GlobularSum::globe(1), GlobularSum::Point]);
        assert_eq!(wedge(&a, &GlobularSum::Point), a);
        assert_eq!(wedge(&GlobularSum::Point, &a), a);
        assert_eq!(wedge(&wedge(&a, &b), &c), wedge(&a, &wedge(&b, &c)));
        assert_eq!(
            wedge(&a, &b).dimension(),
            a.dimension().max(b.dimension())
        );
    }

    #[test]
    fn spine_of_linear_sum_is_a_path_of_edges() {
        let s = spine(&GlobularSum::linear(3));
        assert_eq!(s.globes, vec![1, 1, 1]);
        assert_eq!(s.gluings, vec![0, 0]);
        assert!(s.is_well_formed());
    }

    #[test]
    fn spine_of_a_globe_is_itself() {
        for n in 0..4 {
            let s = spine(&GlobularSum::globe(n));
            assert_eq!(s.globes, vec![n]);
            assert!(s.gluings.is_empty());
        }
    }

    #[test]
    fn spine_of_double_suspension_sum() {
        // [{D_1, D_1}, 2]: two suspended hom entries, each spine a single
        // 2-globe, glued over a point.
        let d1 = GlobularSum::globe(1);
        let a = GlobularSum::node(vec![d1.clone(), d1]);
        let s = spine(&a);
        assert_eq!(s.globes, vec![2, 2]);
        assert_eq!(s.gluings, vec![0]);
    }

    #[test]
    fn to_adc_of_small_sums() {
        let interval = to_adc(&GlobularSum::linear(1));
        assert_eq!(interval.basis_sizes_by_degree(), vec![2, 1]);
        let path2 = to_adc(&GlobularSum::linear(2));
        assert_eq!(path2.basis_sizes_by_degree(), vec![3, 2]);
        let globe2 = to_adc(&GlobularSum::globe(2));
        assert_eq!(globe2.basis_sizes_by_degree(), vec![2, 2, 1]);
        assert!(globe2.validate().is_valid());
        assert!(globe2.check_basis_conditions().all_true());
    }

    #[test]
    fn to_adc_commutes_with_suspension_and_wedge() {
        let a = GlobularSum::linear(1);
        let b = GlobularSum::globe(2);
        assert_eq!(to_adc(&a.clone().suspend()), to_adc(&a).suspend().unwrap());
        let w = wedge(&a, &b);
        let (direct, _) = to_adc(&a).wedge(&to_adc(&b)).unwrap();
        assert_eq!(to_adc(&w), direct);
    }

    #[test]
    fn truncation_collapses_high_subtrees() {
        assert_eq!(truncate_sum(&GlobularSum::globe(2), 1), GlobularSum::globe(1));
        assert_eq!(truncate_sum(&GlobularSum::linear(2), 1), GlobularSum::linear(2));
        let a = GlobularSum::node(vec![GlobularSum::globe(2), GlobularSum::globe(1)]);
        assert_eq!(truncate_sum(&a, 1), GlobularSum::linear(2));
    }

    #[test]
    fn duality_on_trees() {
        let dims: BTreeSet<usize> = [1].into_iter().collect();
        for n in 0..4 {
            let g = GlobularSum::globe(n);
            assert_eq!(dual_sum(&g, &dims), g);
        }
        let a = GlobularSum::node(vec![GlobularSum::globe(1), GlobularSum::Point]);
        let rev = GlobularSum::node(vec![GlobularSum::Point, GlobularSum::globe(1)]);
        assert_eq!(dual_sum(&a, &dims), rev);
        assert_eq!(dual_sum(&dual_sum(&a, &dims), &dims), a);
    }

    #[test]
    fn json_roundtrip() {
        let a = GlobularSum::node(vec![GlobularSum::globe(2), GlobularSum::Point]);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, "[[[[]]],[]]");
        let back: GlobularSum = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
    }
}
