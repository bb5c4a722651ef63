//! Matching candidate configurations against concrete tiling pairs.

use super::config::{Configuration, Label};
use crate::error::{Error, Result};
use crate::space::{deficiency_certificate, DeficiencyCertificate, TilingSpace};
use crate::tiling::{bit, Tiling};

#[derive(Clone, Debug)]
pub struct Realization {
    pub first: Tiling,
    pub second: Tiling,
    /// Line ids of the zonotope assigned to the configuration's lines.
    pub lines: Vec<usize>,
    /// Present when the pair really has no flip towards the other side.
    pub certificate: Option<DeficiencyCertificate>,
}

impl Realization {
    pub fn is_deficient(&self) -> bool {
        self.certificate.is_some()
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    for first in 0..=n - k {
        for mut rest in combinations(n - first - 1, k - 1) {
            for r in rest.iter_mut() {
                *r += first + 1;
            }
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Looks for a pair `(t1, t2)` in `space` and an order-preserving placement
/// of the configuration's lines (bundle `b` onto bundle `b`) such that `t1`
/// restricts to the configuration and the triangles inverted between `t1`
/// and `t2` are exactly the images of those labelled inverted; unknown
/// labels are free.
pub fn realize_candidate(candidate: &Configuration, space: &TilingSpace) -> Result<Option<Realization>> {
    let zono = space.zonotope();
    let table = zono.table();
    let k = candidate.line_count();
    if (0..k).any(|i| candidate.bundle_of(i) >= table.bundle_count()) {
        return Err(Error::SpecMismatch(
            format!("{} bundles", table.bundle_count()),
            "a configuration with more bundles".into(),
        ));
    }
    // lines of each bundle in rank order
    let mut per_bundle: Vec<Vec<usize>> = vec![Vec::new(); table.bundle_count()];
    for i in 0..k {
        per_bundle[candidate.bundle_of(i)].push(i);
    }
    for lines in per_bundle.iter_mut() {
        lines.sort_by_key(|&i| candidate.rank_of(i));
    }
    let choices: Vec<Vec<Vec<usize>>> = per_bundle
        .iter()
        .enumerate()
        .map(|(b, lines)| combinations(table.bundle_size(b) as usize, lines.len()))
        .collect();
    let words = zono.words();
    let triangles: Vec<[usize; 3]> = candidate.triangles().collect();
    let mut pick = vec![0usize; choices.len()];
    loop {
        if choices.iter().any(Vec::is_empty) {
            return Ok(None);
        }
        let mut lines = vec![0usize; k];
        for (b, ids) in per_bundle.iter().enumerate() {
            for (i, &line) in ids.iter().enumerate() {
                lines[line] = table.bundle_offset(b) + choices[b][pick[b]][i];
            }
        }
        let mut sign_mask = vec![0u64; words];
        let mut sign_val = vec![0u64; words];
        let mut free = vec![0u64; words];
        let mut inverted = vec![0u64; words];
        for &t in &triangles {
            let [a, b, c] = t.map(|i| lines[i]);
            let idx = table.triangle_of(a, b, c).expect("distinct bundles");
            sign_mask[idx / 64] |= 1 << (idx % 64);
            if candidate.sign(t) {
                sign_val[idx / 64] |= 1 << (idx % 64);
            }
            match candidate.label(t) {
                Label::Inverted => inverted[idx / 64] |= 1 << (idx % 64),
                Label::Unknown => free[idx / 64] |= 1 << (idx % 64),
                Label::NonInverted => {}
            }
        }
        for s1 in space.iter() {
            if (0..words).any(|w| s1[w] & sign_mask[w] != sign_val[w]) {
                continue;
            }
            let found = space
                .iter()
                .find(|s2| (0..words).all(|w| (s1[w] ^ s2[w]) & !free[w] == inverted[w]));
            if let Some(s2) = found {
                let first = Tiling::from_words(zono, s1)?;
                let second = Tiling::from_words(zono, s2)?;
                debug_assert!(triangles.iter().all(|&t| {
                    let [a, b, c] = t.map(|i| lines[i]);
                    let idx = table.triangle_of(a, b, c).unwrap();
                    bit(s1, idx) == candidate.sign(t)
                }));
                let certificate = if first == second {
                    None
                } else {
                    deficiency_certificate(&first, &second)?
                };
                return Ok(Some(Realization {
                    first,
                    second,
                    lines,
                    certificate,
                }));
            }
        }
        // next placement, odometer style
        let mut b = 0;
        loop {
            if b == pick.len() {
                return Ok(None);
            }
            pick[b] += 1;
            if pick[b] < choices[b].len() {
                break;
            }
            pick[b] = 0;
            b += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::config::{Closest, Profile};
    use crate::space::enumerate_space;

    #[test]
    fn combinations_are_sorted_subsets() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(2, 3).len(), 0);
        assert!(combinations(5, 3).iter().all(|c| c.windows(2).all(|w| w[0] < w[1])));
    }

    #[test]
    fn all_non_inverted_candidate_is_not_deficient() {
        let root = Configuration::root([0, 1, 2], false);
        let mut c = root
            .insertions([0, 1, 2], &Profile::unbounded(4), Closest::default())
            .remove(0);
        for t in c.triangles().collect::<Vec<_>>() {
            c.set_label(t, Label::NonInverted);
        }
        let space = enumerate_space(&"1,1,1,1".parse().unwrap(), 1000).unwrap();
        let r = realize_candidate(&c, &space).unwrap().expect("realizable");
        assert_eq!(r.first, r.second);
        assert!(!r.is_deficient());
    }
}
