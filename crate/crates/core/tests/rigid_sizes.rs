use std::collections::BTreeMap;

use hicat_core::{is_maximal_rigid, maximal_rigid, CategoryModel, RigidSet};

fn sizes(model: &CategoryModel) -> BTreeMap<usize, usize> {
    let mut out = BTreeMap::new();
    for t in maximal_rigid(model) {
        *out.entry(t.len()).or_default() += 1;
    }
    out
}

#[test]
fn sizes_are_uniform_up_to_degree_two() {
    for d in 1..=2 {
        for n in 1..=4 {
            let ap = sizes(&CategoryModel::almost_positive(d, n).unwrap());
            assert_eq!(ap.len(), 1, "almost-positive({d},{n}) {ap:?}");
        }
    }
}

#[test]
fn sizes_vary_in_degree_three() {
    let ap = sizes(&CategoryModel::almost_positive(3, 2).unwrap());
    assert_eq!(ap, BTreeMap::from([(3, 3), (4, 9)]));
    let small: RigidSet = RigidSet::new(["1,3,6,8", "2,4,6,9", "3,5,7,9"].map(|s| s.parse().unwrap()));
    assert!(is_maximal_rigid(&CategoryModel::almost_positive(3, 2).unwrap(), &small).unwrap());

    let ap = sizes(&CategoryModel::almost_positive(3, 3).unwrap());
    assert_eq!(ap, BTreeMap::from([(6, 10), (7, 30), (8, 80), (9, 50), (10, 102)]));
}
