//! Isomorphism search for complexes with basis.
//!
//! An isomorphism sends basis elements to basis elements (the directed cones
//! must match, so coefficients are preserved exactly). The search assigns
//! elements degree by degree; once every lower degree is fixed the
//! differential of a candidate is determined, which prunes hard enough for
//! corpus-size complexes (≤ ~60 elements).

use std::collections::BTreeMap;

use crate::adc::Adc;
use crate::chain::Chain;
use crate::chainmap::ChainMap;
use crate::label::Label;

/// Find a basis isomorphism, if any.
pub fn find_iso(a: &Adc, b: &Adc) -> Option<BTreeMap<Label, Label>> {
    if a.basis_sizes_by_degree() != b.basis_sizes_by_degree() {
        return None;
    }
    // basis() sorts by degree, so whenever an element comes up, everything
    // of lower degree is already assigned and its image differential forced.
    let sources = a.basis();
    let mut assignment: BTreeMap<Label, Label> = BTreeMap::new();
    let mut taken: BTreeMap<Label, ()> = BTreeMap::new();
    if extend(a, b, &sources, 0, &mut assignment, &mut taken) {
        Some(assignment)
    } else {
        None
    }
}

/// Package a found isomorphism as a chain map (verifying it).
pub fn iso_as_chain_map(a: &Adc, b: &Adc) -> Option<ChainMap> {
    let map = find_iso(a, b)?;
    ChainMap::from_label_map(a.clone(), b.clone(), &map).ok()
}

pub fn are_isomorphic(a: &Adc, b: &Adc) -> bool {
    find_iso(a, b).is_some()
}

fn extend(
    a: &Adc,
    b: &Adc,
    sources: &[(Label, usize)],
    idx: usize,
    assignment: &mut BTreeMap<Label, Label>,
    taken: &mut BTreeMap<Label, ()>,
) -> bool {
    if idx == sources.len() {
        return true;
    }
    let (source, degree) = &sources[idx];
    for target in b.basis_of_degree(*degree) {
        if taken.contains_key(&target) {
            continue;
        }
        if !compatible(a, b, *degree, source, &target, assignment) {
            continue;
        }
        assignment.insert(source.clone(), target.clone());
        taken.insert(target.clone(), ());
        if extend(a, b, sources, idx + 1, assignment, taken) {
            return true;
        }
        assignment.remove(source);
        taken.remove(&target);
    }
    false
}

fn compatible(
    a: &Adc,
    b: &Adc,
    degree: usize,
    source: &Label,
    target: &Label,
    assignment: &BTreeMap<Label, Label>,
) -> bool {
    if degree == 0 {
        return a.aug_of(source) == b.aug_of(target);
    }
    // Lower degrees are fully assigned, so the image differential is forced.
    let mapped: Chain = a
        .diff_of(source)
        .map_labels(|l| assignment.get(l).expect("lower degree assigned").clone());
    mapped == *b.diff_of(target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::{dual_sum, to_adc, GlobularSum};
    use std::collections::BTreeSet;

    #[test]
    fn path_is_isomorphic_to_itself_relabelled() {
        let a = Adc::path(2);
        let map: BTreeMap<Label, Label> = a
            .basis()
            .into_iter()
            .map(|(l, _)| (l.clone(), Label::seg(9, l)))
            .collect();
        let b = a.relabel(&map).unwrap();
        assert!(are_isomorphic(&a, &b));
    }

    #[test]
    fn different_shapes_are_not_isomorphic() {
        let path2 = Adc::path(2);
        let mut fork_elements = vec![];
        let mut fork_diffs = vec![];
        let mut fork_augs = vec![];
        for v in ["x", "y", "z"] {
            fork_elements.push((Label::name(v), 0));
            fork_augs.push((Label::name(v), 1));
        }
        for (e, s, t) in [("a", "x", "y"), ("b", "x", "z")] {
            fork_elements.push((Label::name(e), 1));
            fork_diffs.push((
                Label::name(e),
                Chain::from_terms(0, [(Label::name(t), 1), (Label::name(s), -1)]),
            ));
        }
        let fork = Adc::new(fork_elements, fork_diffs, fork_augs).unwrap();
        assert!(!are_isomorphic(&path2, &fork));
    }

    #[test]
    fn tree_duality_matches_complex_duality() {
        let sums = vec![
            GlobularSum::linear(2),
            GlobularSum::globe(2),
            GlobularSum::node(vec![GlobularSum::globe(1), GlobularSum::Point]),
            GlobularSum::node(vec![GlobularSum::globe(1), GlobularSum::globe(1)]),
        ];
        for a in &sums {
            for dims_raw in [vec![1], vec![2], vec![1, 2]] {
                let dims: BTreeSet<usize> = dims_raw.into_iter().collect();
                let lhs = to_adc(a).dualize(&dims);
                let rhs = to_adc(&dual_sum(a, &dims));
                assert!(
                    are_isomorphic(&lhs, &rhs),
                    "duality mismatch on {} with dims {dims:?}",
                    a.render()
                );
            }
        }
    }
}
