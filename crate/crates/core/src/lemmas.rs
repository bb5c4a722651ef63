//! Exhaustive and sampled checks of the two cut implications.
//!
//! Let `(X, Y, Z)` be a triangle inverted between two tilings and let `D`
//! separate the vertex `X∩Y` from the other two vertices in the first
//! tiling.
//!
//! * same bundle: if `D` is parallel to `Z`, then `(X, Y, D)` is inverted;
//! * fourth bundle: otherwise `(X, Y, D)` is inverted, or both `(X, Z, D)`
//!   and `(Y, Z, D)` are.

use crate::arrangement::{PseudolineRef, TriangleRef};
use crate::space::{PairSampler, TilingSpace};
use crate::tiling::{bit, ones, Zonotope};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CutKind {
    SameBundle,
    FourthBundle,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutViolation {
    pub triangle: TriangleRef,
    pub vertex: (PseudolineRef, PseudolineRef),
    pub cutter: PseudolineRef,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CutReport {
    pub pairs: usize,
    pub cuts: usize,
    pub violations: usize,
    /// First few violations, with the pair ids.
    pub examples: Vec<(usize, usize, CutViolation)>,
}

impl CutReport {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

/// Cuts of the given kind in `s1` of triangles inverted between `s1` and
/// `s2`, calling `violation` for each one whose conclusion fails. Returns
/// the number of cuts examined.
pub(crate) fn check_pair(
    zono: &Zonotope,
    s1: &[u64],
    s2: &[u64],
    kind: CutKind,
    mut violation: impl FnMut(usize, [usize; 3], usize),
) -> usize {
    let table = zono.table();
    let diff: Vec<u64> = s1.iter().zip(s2).map(|(a, b)| a ^ b).collect();
    let inverted = |a: usize, b: usize, c: usize| {
        let t = table.triangle_of(a, b, c).expect("distinct bundles");
        bit(&diff, t)
    };
    let mut cuts = 0;
    for tri in ones(&diff) {
        let [p, q, r] = table.triangle_lines(tri).map(|x| x as usize);
        for (u, v, w) in [(p, q, r), (p, r, q), (q, r, p)] {
            let (bu, bv, bw) = (table.bundle_of(u), table.bundle_of(v), table.bundle_of(w));
            for d in 0..table.line_count() {
                let bd = table.bundle_of(d);
                let wanted = match kind {
                    CutKind::SameBundle => bd == bw && d != w,
                    CutKind::FourthBundle => bd != bu && bd != bv && bd != bw,
                };
                if !wanted {
                    continue;
                }
                let a = zono.side_plus(s1, u, v, d);
                let separates = a != zono.side_plus(s1, u, w, d) && a != zono.side_plus(s1, v, w, d);
                if !separates {
                    continue;
                }
                cuts += 1;
                let holds = match kind {
                    CutKind::SameBundle => inverted(u, v, d),
                    CutKind::FourthBundle => inverted(u, v, d) || (inverted(u, w, d) && inverted(v, w, d)),
                };
                if !holds {
                    violation(tri, [u, v, w], d);
                }
            }
        }
    }
    cuts
}

fn record(space: &TilingSpace, report: &mut CutReport, i: usize, j: usize, uvw: [usize; 3], d: usize, tri: usize) {
    report.violations += 1;
    if report.examples.len() < 8 {
        let table = space.zonotope().table();
        report.examples.push((
            i,
            j,
            CutViolation {
                triangle: table.triangle_ref(tri).expect("valid index"),
                vertex: (table.line_ref(uvw[0]), table.line_ref(uvw[1])),
                cutter: table.line_ref(d),
            },
        ));
    }
}

/// Every ordered pair of distinct tilings.
pub fn check_cuts_exhaustive(space: &TilingSpace, kind: CutKind) -> CutReport {
    let zono = space.zonotope();
    let mut report = CutReport::default();
    for i in 0..space.len() {
        for j in 0..space.len() {
            if i == j {
                continue;
            }
            report.pairs += 1;
            let mut hits = Vec::new();
            report.cuts += check_pair(zono, space.signs(i), space.signs(j), kind, |t, uvw, d| {
                hits.push((t, uvw, d))
            });
            for (t, uvw, d) in hits {
                record(space, &mut report, i, j, uvw, d, t);
            }
        }
    }
    report
}

/// `pairs` random pairs drawn by [`PairSampler`]; pair ids in the report are
/// the draw index.
pub fn check_cuts_sampled(space: &TilingSpace, kind: CutKind, pairs: usize, seed: u64) -> CutReport {
    let zono = space.zonotope();
    let mut sampler = PairSampler::new(space, seed, 0);
    let mut report = CutReport::default();
    for k in 0..pairs {
        let (a, b) = sampler.next_pair();
        report.pairs += 1;
        let mut hits = Vec::new();
        report.cuts += check_pair(zono, &a, &b, kind, |t, uvw, d| hits.push((t, uvw, d)));
        for (t, uvw, d) in hits {
            record(space, &mut report, k, k, uvw, d, t);
        }
    }
    report
}
