//! Dihedral symmetries of a zonotope acting on its tilings.
//!
//! The `2n` edge vectors `±v_1..±v_n` of a zonotope are permuted by a
//! dihedral group of order `4n`, generated by
//!
//! * the rotation `v_k -> v_{k+1}` for `k < n`, `v_n -> -v_1`, which maps the
//!   zonotope `(a_1..a_n)` onto `(a_n, a_1, .., a_{n-1})`; its `n`-th power is
//!   the central inversion;
//! * the reflection `v_k -> v_{n+1-k}`, mapping `(a_1..a_n)` onto the
//!   reversed sizes.
//!
//! Only elements mapping the sizes onto themselves act on a tiling space.
//! Elements act on tile placements; the image is converted back to a sign
//! vector.

use crate::arrangement::{PseudolineRef, ZonotopeSpec};
use crate::error::Result;
use crate::tiling::{signs_from_placements, TilePlacement, Tiling};

/// Reflect (optionally), then apply the rotation generator `rotation` times,
/// `rotation < 2n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Isometry {
    pub reflect: bool,
    pub rotation: usize,
}

impl Isometry {
    pub const IDENTITY: Isometry = Isometry {
        reflect: false,
        rotation: 0,
    };

    /// Sizes of the image zonotope.
    pub fn map_sizes(&self, sizes: &[u32]) -> Vec<u32> {
        let mut a = sizes.to_vec();
        if self.reflect {
            a.reverse();
        }
        for _ in 0..self.rotation % a.len().max(1) {
            a.rotate_right(1);
        }
        a
    }

    pub fn map_placements(&self, sizes: &[u32], placements: &[TilePlacement]) -> Vec<TilePlacement> {
        let mut sizes = sizes.to_vec();
        let mut out = placements.to_vec();
        if self.reflect {
            out = out.iter().map(|p| reflect(&sizes, p)).collect();
            sizes.reverse();
        }
        for _ in 0..self.rotation {
            out = out.iter().map(|p| rotate(&sizes, p)).collect();
            sizes.rotate_right(1);
        }
        out
    }

    pub fn apply(&self, tiling: &Tiling) -> Result<Tiling> {
        let sizes = tiling.spec().sizes();
        let spec = ZonotopeSpec::new(&self.map_sizes(sizes))?;
        signs_from_placements(&spec, &self.map_placements(sizes, &tiling.placements()))
    }
}

fn ordered(a: PseudolineRef, b: PseudolineRef) -> (PseudolineRef, PseudolineRef) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn reflect(sizes: &[u32], p: &TilePlacement) -> TilePlacement {
    let n = sizes.len() as u8;
    let mirror = |l: PseudolineRef| PseudolineRef::new(n + 1 - l.bundle, l.rank);
    let mut coords = p.coords.clone();
    coords.reverse();
    TilePlacement {
        pair: ordered(mirror(p.pair.0), mirror(p.pair.1)),
        coords,
    }
}

fn rotate(sizes: &[u32], p: &TilePlacement) -> TilePlacement {
    let n = sizes.len();
    let last = sizes[n - 1];
    let turn = |l: PseudolineRef| {
        if l.bundle as usize == n {
            PseudolineRef::new(1, last + 1 - l.rank)
        } else {
            PseudolineRef::new(l.bundle + 1, l.rank)
        }
    };
    let mut coords = Vec::with_capacity(n);
    // the image of an edge along v_n points along -v_1
    let shift = u32::from(p.pair.1.bundle as usize == n);
    coords.push(last - p.coords[n - 1] - shift);
    coords.extend_from_slice(&p.coords[..n - 1]);
    TilePlacement {
        pair: ordered(turn(p.pair.0), turn(p.pair.1)),
        coords,
    }
}

/// All elements of the dihedral group preserving `sizes`, identity first.
pub fn isometries(sizes: &[u32]) -> Vec<Isometry> {
    let n = sizes.len();
    let mut out = Vec::new();
    for reflect in [false, true] {
        for rotation in 0..2 * n {
            let g = Isometry { reflect, rotation };
            if g.map_sizes(sizes) == sizes {
                out.push(g);
            }
        }
    }
    out
}
