//! Built-in named test objects, so verification runs need no external files.

use crate::adc::Adc;
use crate::chain::Chain;
use crate::label::Label;
use crate::nu::NuConfig;
use crate::strictcat::{from_nu, poset_path, FiniteStrictNCat};
use crate::theta::{to_adc, GlobularSum};
use crate::Result;

/// The classic interval complex: vertices `v0`, `v1` and an edge `e` with
/// `∂e = v1 − v0`.
pub fn interval() -> Adc {
    let v0 = Label::name("v0");
    let v1 = Label::name("v1");
    let e = Label::name("e");
    Adc::new(
        vec![(v0.clone(), 0), (v1.clone(), 0), (e.clone(), 1)],
        vec![(e, Chain::from_terms(0, [(v1.clone(), 1), (v0.clone(), -1)]))],
        vec![(v0.clone(), 1), (v1.clone(), 1)],
    )
    .unwrap()
    .with_endpoints(v0, v1)
    .unwrap()
}

pub fn adc_names() -> Vec<&'static str> {
    vec![
        "interval",
        "globe0",
        "globe1",
        "globe2",
        "globe3",
        "simplex2",
        "gridsquare",
        "hpair2",
        "vpair2",
    ]
}

pub fn named_adc(name: &str) -> Option<Adc> {
    match name {
        "interval" => Some(interval()),
        "globe0" => Some(to_adc(&GlobularSum::globe(0))),
        "globe1" => Some(to_adc(&GlobularSum::globe(1))),
        "globe2" => Some(to_adc(&GlobularSum::globe(2))),
        "globe3" => Some(to_adc(&GlobularSum::globe(3))),
        "simplex2" => Some(to_adc(&GlobularSum::linear(2))),
        "gridsquare" => Some(interval().tensor(&interval())),
        "hpair2" => Some(to_adc(&hpair_sum())),
        "vpair2" => Some(to_adc(&vpair_sum())),
        _ => None,
    }
}

pub fn sum_names() -> Vec<&'static str> {
    vec![
        "point", "line1", "line2", "line3", "globe1", "globe2", "globe3", "hpair2", "vpair2",
    ]
}

pub fn named_sum(name: &str) -> Option<GlobularSum> {
    match name {
        "point" => Some(GlobularSum::Point),
        "line1" => Some(GlobularSum::linear(1)),
        "line2" => Some(GlobularSum::linear(2)),
        "line3" => Some(GlobularSum::linear(3)),
        "globe1" => Some(GlobularSum::globe(1)),
        "globe2" => Some(GlobularSum::globe(2)),
        "globe3" => Some(GlobularSum::globe(3)),
        "hpair2" => Some(hpair_sum()),
        "vpair2" => Some(vpair_sum()),
        _ => None,
    }
}

/// `[{D₁, D₁}, 2]`: two horizontally composable 2-cells.
pub fn hpair_sum() -> GlobularSum {
    GlobularSum::node(vec![GlobularSum::globe(1), GlobularSum::globe(1)])
}

/// `[[2], 1]`: two vertically composable 2-cells.
pub fn vpair_sum() -> GlobularSum {
    GlobularSum::node(vec![GlobularSum::linear(2)])
}

/// Globular sums used by the tensor/duality/decomposition criteria.
pub fn corpus_sums() -> Vec<(&'static str, GlobularSum)> {
    vec![
        ("point", GlobularSum::Point),
        ("line1", GlobularSum::linear(1)),
        ("line2", GlobularSum::linear(2)),
        ("line3", GlobularSum::linear(3)),
        ("globe2", GlobularSum::globe(2)),
        ("globe3", GlobularSum::globe(3)),
        ("hpair2", hpair_sum()),
        ("vpair2", vpair_sum()),
    ]
}

pub fn twocat_names() -> Vec<&'static str> {
    vec!["arrow", "simplex2", "walking2cell", "gridsquare", "hpair2", "vpair2", "terminal"]
}

/// The 2-categories used by the companion/fibration/square criteria.
pub fn named_2cat(name: &str, config: &NuConfig) -> Result<Option<FiniteStrictNCat>> {
    let cat = match name {
        "arrow" => Some(poset_path(1).as_dim(2)?),
        "simplex2" => Some(poset_path(2).as_dim(2)?),
        "walking2cell" => Some(from_nu(&to_adc(&GlobularSum::globe(2)), 2, config)?.cat),
        "gridsquare" => Some(from_nu(&interval().tensor(&interval()), 2, config)?.cat),
        "hpair2" => Some(from_nu(&to_adc(&hpair_sum()), 2, config)?.cat),
        "vpair2" => Some(from_nu(&to_adc(&vpair_sum()), 2, config)?.cat),
        "terminal" => Some(FiniteStrictNCat::terminal(2)),
        _ => None,
    };
    Ok(cat)
}

pub fn corpus_2cats(config: &NuConfig) -> Result<Vec<(&'static str, FiniteStrictNCat)>> {
    let mut out = Vec::new();
    for name in ["arrow", "simplex2", "walking2cell", "gridsquare", "hpair2"] {
        out.push((name, named_2cat(name, config)?.unwrap()));
    }
    Ok(out)
}

/// Small 2-categories for the fully-faithfulness bijection checks.
pub fn tiny_2cats(config: &NuConfig) -> Result<Vec<(&'static str, FiniteStrictNCat)>> {
    let mut out = Vec::new();
    for name in ["terminal", "arrow", "walking2cell"] {
        out.push((name, named_2cat(name, config)?.unwrap()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_objects_resolve() {
        for name in adc_names() {
            let adc = named_adc(name).unwrap();
            assert!(adc.validate().is_valid(), "{name}");
        }
        for name in sum_names() {
            assert!(named_sum(name).is_some());
        }
        let config = NuConfig::default();
        for name in twocat_names() {
            let cat = named_2cat(name, &config).unwrap().unwrap();
            assert!(cat.validate().is_valid(), "{name}");
        }
    }

    #[test]
    fn tensor_of_intervals_has_the_expected_sizes() {
        let t = named_adc("gridsquare").unwrap();
        assert_eq!(t.basis_sizes_by_degree(), vec![4, 4, 1]);
    }

    #[test]
    fn corpus_basis_conditions_hold() {
        for (name, sum) in corpus_sums() {
            let adc = to_adc(&sum);
            assert!(adc.check_basis_conditions().all_true(), "{name}");
        }
    }
}
