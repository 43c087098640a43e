//! Property tests over randomly generated globular sums and labels.

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use graycat::adc::Adc;
use graycat::chain::Chain;
use graycat::chainmap::ChainMap;
use graycat::label::Label;
use graycat::nu::{nu_cells, nu_compose, NuConfig};
use graycat::theta::{self, GlobularSum};

fn sum_strategy(depth: u32) -> impl Strategy<Value = GlobularSum> {
    let leaf = Just(GlobularSum::Point);
    leaf.prop_recursive(depth, 6, 3, |inner| {
        prop::collection::vec(inner, 1..=3).prop_map(GlobularSum::node)
    })
}

fn label_strategy() -> impl Strategy<Value = Label> {
    let leaf = "[a-z][a-z0-9_]{0,4}".prop_map(Label::name);
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Label::susp),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Label::tensor(a, b)),
            (0u32..5, inner).prop_map(|(k, a)| Label::seg(k, a)),
        ]
    })
}

/// Explicit re-bracketing map ((a⊗b)⊗c) ↦ (a⊗(b⊗c)).
fn rebracket(lhs: &Adc, rhs: &Adc) -> ChainMap {
    ChainMap::from_fn(lhs.clone(), rhs.clone(), |label, degree| {
        let Label::Tensor(ab, c) = label else { panic!("unexpected label") };
        let Label::Tensor(a, b) = &**ab else { panic!("unexpected label") };
        Chain::single(
            Label::tensor((**a).clone(), Label::tensor((**b).clone(), (**c).clone())),
            degree,
        )
    })
    .expect("re-bracketing is a chain map")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn labels_roundtrip_through_display(label in label_strategy()) {
        let shown = label.to_string();
        prop_assert_eq!(Label::parse(&shown).unwrap(), label);
    }

    #[test]
    fn interpreted_sums_are_valid_steiner_complexes(sum in sum_strategy(2)) {
        let adc = theta::to_adc(&sum);
        prop_assert!(adc.validate().is_valid());
        prop_assert!(adc.check_basis_conditions().all_true());
        prop_assert_eq!(adc.top_degree(), sum.dimension());
    }

    #[test]
    fn wedge_is_associative_with_point_unit(
        a in sum_strategy(2),
        b in sum_strategy(2),
        c in sum_strategy(2),
    ) {
        prop_assert_eq!(theta::wedge(&a, &GlobularSum::Point), a.clone());
        prop_assert_eq!(theta::wedge(&GlobularSum::Point, &a), a.clone());
        prop_assert_eq!(
            theta::wedge(&theta::wedge(&a, &b), &c),
            theta::wedge(&a, &theta::wedge(&b, &c))
        );
    }

    #[test]
    fn spines_are_well_formed(sum in sum_strategy(3)) {
        prop_assert!(theta::spine(&sum).is_well_formed());
    }

    #[test]
    fn spine_predicts_the_complex_size(sum in sum_strategy(3)) {
        // A globe complex of dimension d has 2d+1 basis elements; gluing two
        // spine globes along a degree-g globe identifies 2g+1 of them. The
        // spine therefore predicts the total basis size of the interpreted
        // complex.
        let spine = theta::spine(&sum);
        let from_spine: i64 = spine.globes.iter().map(|d| 2 * *d as i64 + 1).sum::<i64>()
            - spine.gluings.iter().map(|g| 2 * *g as i64 + 1).sum::<i64>();
        let adc = theta::to_adc(&sum);
        prop_assert_eq!(adc.len() as i64, from_spine);
    }

    #[test]
    fn sums_roundtrip_through_json(sum in sum_strategy(3)) {
        let text = serde_json::to_string(&sum).unwrap();
        prop_assert_eq!(serde_json::from_str::<GlobularSum>(&text).unwrap(), sum);
    }

    #[test]
    fn tensor_is_associative_up_to_rebracketing(
        a in sum_strategy(1),
        b in sum_strategy(1),
        c in sum_strategy(1),
    ) {
        prop_assume!(a.dimension() + b.dimension() + c.dimension() <= 3);
        let (ka, kb, kc) = (theta::to_adc(&a), theta::to_adc(&b), theta::to_adc(&c));
        let lhs = ka.tensor(&kb).tensor(&kc);
        let rhs = ka.tensor(&kb.tensor(&kc));
        let iso = rebracket(&lhs, &rhs);
        prop_assert!(iso.as_basis_bijection().is_some());
    }

    #[test]
    fn tensor_unit_is_the_point(sum in sum_strategy(2)) {
        let k = theta::to_adc(&sum);
        let unit = Adc::point();
        let t = unit.tensor(&k);
        let iso = ChainMap::from_fn(t.clone(), k.clone(), |label, degree| {
            let Label::Tensor(_, b) = label else { panic!("unexpected label") };
            Chain::single((**b).clone(), degree)
        }).unwrap();
        prop_assert!(iso.as_basis_bijection().is_some());
    }

    #[test]
    fn dualize_is_involutive(sum in sum_strategy(2), dims in prop::collection::btree_set(1usize..4, 0..3)) {
        let k = theta::to_adc(&sum);
        let dims: BTreeSet<usize> = dims;
        prop_assert_eq!(k.dualize(&dims).dualize(&dims), k);
    }

    #[test]
    fn duality_swaps_hold_on_random_pairs(a in sum_strategy(1), b in sum_strategy(1)) {
        prop_assume!(a.dimension() + b.dimension() <= 3);
        let report = graycat::graymaps::duality_tensor_check(&theta::to_adc(&a), &theta::to_adc(&b));
        prop_assert!(report.all_hold(), "{:?}", report.failures);
    }
}

proptest! {
    // Heavier searches get fewer cases.
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn cells_are_closed_under_composition(a in sum_strategy(1), b in sum_strategy(1)) {
        prop_assume!(a.dimension() + b.dimension() <= 2);
        let adc = theta::to_adc(&a).tensor(&theta::to_adc(&b));
        let config = NuConfig::default();
        let cells = nu_cells(&adc, 2, &config).unwrap();
        let index: BTreeMap<_, usize> = cells.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        for x in &cells {
            for y in &cells {
                if x.dim() != y.dim() {
                    continue;
                }
                for i in 0..x.dim() {
                    if let Ok(z) = nu_compose(&adc, x, y, i) {
                        let top = z.top();
                        if top.max_coeff() <= config.coeff_cap {
                            prop_assert!(index.contains_key(&z));
                            prop_assert!(z.validate(&adc).is_ok());
                        }
                    }
                }
            }
        }
    }
}
