//! Computer search for proofs that every pair of distinct tilings admits a
//! flip towards the other, over whole families of zonotopes with a fixed
//! number of bundles.

mod config;
mod format;
mod realize;
mod search;

pub use config::{Block, Closest, Configuration, Label, Profile};
pub use format::{read_proof, validate_proof, write_proof, ProofStats};
pub use realize::{realize_candidate, Realization};
pub use search::{search, NodeKind, Outcome, Proof, ProofNode, ProofSearch, SearchOptions, SearchResult, Weights};

use crate::symmetry::isometries;
use crate::tiling::{Sign, Zonotope};
use crate::ZonotopeSpec;

/// Bundle permutation of a symmetry: optional reversal, then `rotation`
/// cyclic shifts.
fn bundle_map(n: usize, reflect: bool, rotation: usize, b: usize) -> usize {
    let b = if reflect { n - 1 - b } else { b };
    (b + rotation) % n
}

/// One inverted triangle per orbit of (bundle triple, sign) under the
/// symmetries preserving the profile caps, as root configurations.
pub fn root_configurations(profile: &Profile) -> Vec<(Configuration, [usize; 3])> {
    let n = profile.bundles();
    let sizes: Vec<u32> = profile.caps.iter().map(|c| c.map_or(0, u32::from)).collect();
    let zono = Zonotope::new(ZonotopeSpec::new(&vec![1; n]).expect("n >= 3"));
    let seed = crate::Tiling::seed(&zono);
    let table = zono.table();
    let group: Vec<_> = isometries(&sizes)
        .into_iter()
        .map(|g| (g, g.apply(&seed).expect("isometry of a valid tiling")))
        .collect();
    let mut reps = Vec::new();
    for k in 2..n {
        for j in 1..k {
            for i in 0..j {
                for positive in [false, true] {
                    let image = |(g, img): &(crate::symmetry::Isometry, crate::Tiling)| {
                        let mut t = [i, j, k].map(|b| bundle_map(n, g.reflect, g.rotation, b));
                        t.sort_unstable();
                        let before = seed.sign(table.triangle_index(i, j, k)) == Sign::Positive;
                        let after = img.sign(table.triangle_index(t[0], t[1], t[2])) == Sign::Positive;
                        (t, positive ^ before ^ after)
                    };
                    let rep = group.iter().map(image).min().expect("identity");
                    if rep == ([i, j, k], positive) {
                        reps.push(rep);
                    }
                }
            }
        }
    }
    reps.into_iter()
        .map(|(t, positive)| {
            let bundles = t.map(|b| b as u8);
            (Configuration::root(bundles, positive), [0, 1, 2])
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symmetry::Isometry;
    use crate::Tiling;

    #[test]
    fn symmetry_sign_change_is_tiling_independent() {
        for n in [4usize, 5] {
            let zono = Zonotope::new(ZonotopeSpec::new(&vec![1; n]).unwrap());
            let table = zono.table();
            let mut all = vec![Tiling::seed(&zono)];
            let mut i = 0;
            while i < all.len() {
                for t in all[i].neighbors() {
                    if !all.contains(&t) {
                        all.push(t);
                    }
                }
                i += 1;
            }
            for g in isometries(&vec![1; n]) {
                let Isometry { reflect, rotation } = g;
                for tri in 0..table.triangle_count() {
                    let [a, b, c] = table.triangle_lines(tri).map(|x| x as usize);
                    let mut t = [a, b, c].map(|x| bundle_map(n, reflect, rotation, x));
                    t.sort_unstable();
                    let image_tri = table.triangle_index(t[0], t[1], t[2]);
                    let flips: Vec<bool> = all
                        .iter()
                        .map(|s| s.sign(tri) != g.apply(s).unwrap().sign(image_tri))
                        .collect();
                    assert!(flips.iter().all(|&f| f == flips[0]), "{n} {g:?} {tri}");
                }
            }
        }
    }

    #[test]
    fn root_counts() {
        assert_eq!(root_configurations(&Profile::unbounded(4)).len(), 1);
        let three = root_configurations(&Profile::unbounded(3));
        assert!(three.len() <= 2);
        let capped: Profile = "*,*,*,*,1".parse().unwrap();
        assert!(root_configurations(&capped).len() >= root_configurations(&Profile::unbounded(5)).len());
    }
}
