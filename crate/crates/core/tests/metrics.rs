use proptest::prelude::*;

use rhombus::space::{
    deficiency_certificate, enumerate_space, flip_distance, greedy_reduce, hamming_distance, inverted_triangles,
    replay, search_deficient_pairs, Method, SearchBudget, SearchMode, TilingSpace,
};

fn space(s: &str) -> TilingSpace {
    enumerate_space(&s.parse().unwrap(), 100_000).unwrap()
}

const MATRIX: [&str; 6] = ["2,2,2", "3,2,2", "2,2,1,1", "2,1,1,1,1", "1,1,1,1,1", "1,1,1,1,1,1"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn distance_invariants(k in 0usize..MATRIX.len(), i in any::<usize>(), j in any::<usize>()) {
        let sp = space(MATRIX[k]);
        let (a, b) = (sp.tiling(i % sp.len()), sp.tiling(j % sp.len()));
        let h = hamming_distance(&a, &b).unwrap();
        let r = flip_distance(&a, &b, Method::AStar, 1_000_000).unwrap();
        prop_assert_eq!(r.hamming, h);
        prop_assert!(r.flip >= h);
        prop_assert_eq!((r.flip - h) % 2, 0);
        let path = r.path.clone().unwrap();
        prop_assert_eq!(path.len(), r.flip);
        prop_assert_eq!(replay(&a, &path).unwrap(), b.clone());
        let bfs = flip_distance(&a, &b, Method::Bfs, 1_000_000).unwrap();
        prop_assert_eq!(bfs.flip, r.flip);
        let mut ab = inverted_triangles(&a, &b).unwrap();
        let mut ba = inverted_triangles(&b, &a).unwrap();
        ab.sort();
        ba.sort();
        prop_assert_eq!(&ab, &ba);
        prop_assert_eq!(ab.len(), h);
        if h > 0 {
            if let Some(cert) = deficiency_certificate(&a, &b).unwrap() {
                prop_assert!(r.flip >= cert.flip_lower_bound());
            }
        }
    }

    #[test]
    fn greedy_matches_distance_when_it_reaches(k in 0usize..MATRIX.len(), i in any::<usize>(), j in any::<usize>()) {
        let sp = space(MATRIX[k]);
        let (a, b) = (sp.tiling(i % sp.len()), sp.tiling(j % sp.len()));
        let g = greedy_reduce(&a, &b).unwrap();
        let h = hamming_distance(&a, &b).unwrap();
        if g.reached {
            prop_assert_eq!(g.steps, h);
        }
    }
}

#[test]
fn greedy_reaches_every_pair_of_a_four_bundle_family() {
    let sp = space("2,2,1,1");
    for i in 0..sp.len() {
        for j in 0..sp.len() {
            let (a, b) = (sp.tiling(i), sp.tiling(j));
            let g = greedy_reduce(&a, &b).unwrap();
            assert!(g.reached);
            assert_eq!(g.steps, hamming_distance(&a, &b).unwrap());
        }
    }
}

#[test]
fn census_pairs_stall_greedy_and_carry_certificates() {
    let pairs = search_deficient_pairs(
        &"1,1,1,1,1,1".parse().unwrap(),
        SearchMode::Exhaustive,
        SearchBudget::default(),
    )
    .unwrap();
    assert!(!pairs.is_empty());
    for p in &pairs {
        let cert = deficiency_certificate(&p.first, &p.second).unwrap().expect("certified");
        let stalled = match cert.side {
            rhombus::space::PairSide::First => greedy_reduce(&p.first, &p.second).unwrap(),
            rhombus::space::PairSide::Second => greedy_reduce(&p.second, &p.first).unwrap(),
        };
        assert!(!stalled.reached);
        assert_eq!(stalled.steps, 0);
        assert!(p.flip >= cert.flip_lower_bound());
        assert!(cert
            .minimal
            .iter()
            .all(|t| p.first.sign_of(t).unwrap() == p.second.sign_of(t).unwrap()));
    }
}

#[test]
fn bidirectional_agrees_with_bfs_on_five_unit_bundles() {
    let sp = space("1,1,1,1,1");
    for i in (0..sp.len()).step_by(5) {
        for j in (0..sp.len()).step_by(3) {
            let (a, b) = (sp.tiling(i), sp.tiling(j));
            let x = flip_distance(&a, &b, Method::Bfs, 100_000).unwrap().flip;
            let y = flip_distance(&a, &b, Method::Bidirectional, 100_000).unwrap();
            assert_eq!(x, y.flip);
            assert_eq!(replay(&a, y.path.as_ref().unwrap()).unwrap(), b);
        }
    }
}
