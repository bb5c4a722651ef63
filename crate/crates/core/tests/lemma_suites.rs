use rhombus::lemmas::{check_cuts_exhaustive, check_cuts_sampled, CutKind};
use rhombus::space::{enumerate_space, enumerate_space_partial};

#[test]
fn same_bundle_cut_on_three_bundles() {
    for s in ["2,2,2", "3,2,2"] {
        let sp = enumerate_space(&s.parse().unwrap(), 10_000).unwrap();
        let r = check_cuts_exhaustive(&sp, CutKind::SameBundle);
        assert!(r.cuts > 0 && r.holds(), "{s}: {:?}", r.examples);
        assert_eq!(r.pairs, sp.len() * (sp.len() - 1));
    }
}

#[test]
fn fourth_bundle_cut_on_four_bundles() {
    let sp = enumerate_space(&"2,2,1,1".parse().unwrap(), 10_000).unwrap();
    let r = check_cuts_exhaustive(&sp, CutKind::FourthBundle);
    assert!(r.cuts > 0 && r.holds(), "{:?}", r.examples);
}

#[test]
fn fourth_bundle_cut_sampled_on_a_larger_space() {
    let sp = enumerate_space_partial(&"2,2,2,2".parse().unwrap(), 10_000_000);
    assert!(sp.is_complete());
    let r = check_cuts_sampled(&sp, CutKind::FourthBundle, 5_000, 1);
    assert!(r.cuts > 0 && r.holds(), "{:?}", r.examples);
    let r = check_cuts_sampled(&sp, CutKind::SameBundle, 5_000, 2);
    assert!(r.cuts > 0 && r.holds(), "{:?}", r.examples);
}
