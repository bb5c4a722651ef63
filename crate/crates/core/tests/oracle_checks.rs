//! The library against a placement-based enumerator that shares no code
//! with it.

mod common;

use std::collections::{BTreeSet, HashMap, VecDeque};

use common::oracle::{enumerate, flippable_hexagons, hexagon_count, OracleTiling, Tile};
use rhombus::space::{enumerate_space, isometry_classes, search_deficient_pairs, SearchBudget, SearchMode};
use rhombus::{Tiling, ZonotopeSpec};

fn spec(s: &str) -> ZonotopeSpec {
    s.parse().unwrap()
}

fn sizes(s: &str) -> Vec<u32> {
    s.split(',').map(|x| x.parse().unwrap()).collect()
}

fn as_oracle(t: &Tiling) -> OracleTiling {
    t.placements()
        .into_iter()
        .map(|p| Tile {
            lines: ((p.pair.0.bundle, p.pair.0.rank), (p.pair.1.bundle, p.pair.1.rank)),
            coords: p.coords,
        })
        .collect()
}

#[test]
fn hexagon_formula_agrees_with_sweep() {
    for (a, b, c) in [(1, 1, 1), (2, 2, 2), (3, 2, 2), (3, 3, 2)] {
        let n = enumerate(&[a, b, c], usize::MAX).len() as u128;
        assert_eq!(n, hexagon_count(a, b, c), "{a},{b},{c}");
    }
}

#[test]
fn counts_match_the_oracle() {
    for s in [
        "1,1,1",
        "1,1,1,1",
        "1,1,1,1,1",
        "2,2,2",
        "3,2,2",
        "2,2,1,1",
        "2,1,1,1,1",
        "1,1,1,1,1,1",
    ] {
        let expected = enumerate(&sizes(s), usize::MAX).len();
        assert_eq!(enumerate_space(&spec(s), 1_000_000).unwrap().len(), expected, "{s}");
    }
    assert_eq!(enumerate(&[1; 6], usize::MAX).len().pow(2), 824_464);
}

#[test]
fn placement_sets_match_the_oracle() {
    for s in ["2,2,2", "1,1,1,1,1", "2,2,1,1", "2,1,1,1,1"] {
        let oracle: BTreeSet<OracleTiling> = enumerate(&sizes(s), usize::MAX).into_iter().collect();
        let space = enumerate_space(&spec(s), 100_000).unwrap();
        let ours: BTreeSet<OracleTiling> = (0..space.len()).map(|i| as_oracle(&space.tiling(i))).collect();
        assert_eq!(ours, oracle, "{s}");
    }
}

#[test]
fn minimal_triangles_are_the_flippable_hexagons() {
    for s in ["2,2,2", "3,2,2", "2,2,1,1", "1,1,1,1,1"] {
        let space = enumerate_space(&spec(s), 100_000).unwrap();
        for i in 0..space.len() {
            let t = space.tiling(i);
            assert_eq!(
                t.inclusion_minimal_triangles().len(),
                flippable_hexagons(&as_oracle(&t)),
                "{s} #{i}"
            );
        }
    }
}

/// Triangles `(P, Q, R)` with `R` in the highest bundle, read from the
/// coordinates of tile `PQ` along the bundle of `R`.
type Coords = HashMap<((u8, u32), (u8, u32)), Vec<u32>>;

fn oracle_hamming(a: &Coords, b: &Coords, sizes: &[u32]) -> usize {
    let mut h = 0;
    for (pair, ca) in a {
        let cb = &b[pair];
        let top = (pair.1).0 as usize;
        for k in top..sizes.len() {
            for c in 1..=sizes[k] {
                if (ca[k] >= c) != (cb[k] >= c) {
                    h += 1;
                }
            }
        }
    }
    h
}

#[test]
fn six_bundle_census_matches_an_independent_flip_graph() {
    let sz = [1u32; 6];
    let tilings: Vec<HashMap<_, _>> = enumerate(&sz, usize::MAX)
        .into_iter()
        .map(|t| t.into_iter().map(|tile| (tile.lines, tile.coords)).collect())
        .collect();
    let n = tilings.len();
    // a flip moves exactly the three tiles of one hexagon
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| tilings[i].iter().filter(|(k, v)| tilings[j][*k] != **v).count() == 3)
                .collect()
        })
        .collect();
    let mut deficient = Vec::new();
    for s in 0..n {
        let mut dist = vec![usize::MAX; n];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        for t in 0..n {
            let h = oracle_hamming(&tilings[s], &tilings[t], &sz);
            assert!(dist[t] >= h);
            if dist[t] != h {
                deficient.push((h, dist[t]));
            }
        }
    }

    let ours = search_deficient_pairs(&spec("1,1,1,1,1,1"), SearchMode::Exhaustive, SearchBudget::default()).unwrap();
    let mut a: Vec<(usize, usize)> = ours.iter().map(|p| (p.hamming, p.flip)).collect();
    a.sort_unstable();
    deficient.sort_unstable();
    assert_eq!(a, deficient);
    assert!(!a.is_empty() && a.iter().all(|&(h, f)| f == h + 2));
    let classes = isometry_classes(&ours).unwrap();
    assert_eq!(classes.iter().max().map(|m| m + 1), Some(2));
}
