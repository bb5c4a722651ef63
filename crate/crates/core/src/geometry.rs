//! Exact planar predicates: the straight-line multigrid behind the seed
//! tiling and interior-disjointness of rhombi.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arrangement::{TriangleTable, Vec2, ZonotopeSpec};

/// Bundle `k` realized as the lines `<x, d_k> = (2c - 1) * scale^k`,
/// `c = 1..=a_k`.
///
/// Every line of bundle `k` has normal `d_k`, so the dual tiling uses the
/// spec directions as edges. The plus side of a line is `<x, d_k> > offset`.
pub(crate) struct Multigrid {
    dirs: Vec<Vec2>,
    offsets: Vec<Vec<BigInt>>,
}

impl Multigrid {
    /// Offsets grow geometrically from bundle to bundle. `scale` starts above
    /// `2 C (2A - 1)`, with `C` the largest direction cross product and `A` the
    /// largest bundle size; it is doubled until no three lines meet.
    pub(crate) fn new(spec: &ZonotopeSpec, table: &TriangleTable) -> Self {
        let dirs = spec.directions().to_vec();
        let max_cross = (0..dirs.len())
            .flat_map(|i| (0..dirs.len()).map(move |j| (i, j)))
            .map(|(i, j)| dirs[i].cross(dirs[j]).abs())
            .max()
            .unwrap_or(1)
            .max(1);
        let max_size = spec.sizes().iter().copied().max().unwrap_or(1) as i64;
        let mut scale = BigInt::from(2 * max_cross * (2 * max_size - 1) + 1);
        loop {
            let grid = Self::with_scale(spec, &dirs, &scale);
            if grid.is_simple(table) {
                return grid;
            }
            scale *= 2;
        }
    }

    fn with_scale(spec: &ZonotopeSpec, dirs: &[Vec2], scale: &BigInt) -> Self {
        let mut power = BigInt::from(1);
        let mut offsets = Vec::with_capacity(dirs.len());
        for &a in spec.sizes() {
            offsets.push((1..=a as i64).map(|c| BigInt::from(2 * c - 1) * &power).collect());
            power *= scale;
        }
        Multigrid {
            dirs: dirs.to_vec(),
            offsets,
        }
    }

    fn is_simple(&self, table: &TriangleTable) -> bool {
        (0..table.triangle_count()).all(|t| {
            let [p, q, r] = table.triangle_lines(t);
            !self.concurrency(table, p as usize, q as usize, r as usize).is_zero()
        })
    }

    fn line(&self, table: &TriangleTable, id: usize) -> (Vec2, &BigInt) {
        let b = table.bundle_of(id);
        (self.dirs[b], &self.offsets[b][table.rank0_of(id) as usize])
    }

    /// `(d_b x d_s) o_a + (d_s x d_a) o_b + (d_a x d_b) o_s`, zero iff the
    /// three lines meet.
    fn concurrency(&self, table: &TriangleTable, a: usize, b: usize, s: usize) -> BigInt {
        let (da, oa) = self.line(table, a);
        let (db, ob) = self.line(table, b);
        let (ds, os) = self.line(table, s);
        BigInt::from(db.cross(ds)) * oa + BigInt::from(ds.cross(da)) * ob + BigInt::from(da.cross(db)) * os
    }

    /// Whether the crossing of lines `a` and `b` (distinct bundles) lies
    /// strictly on the plus side of line `s`. `None` on a triple point.
    pub(crate) fn crossing_on_plus_side(&self, table: &TriangleTable, a: usize, b: usize, s: usize) -> Option<bool> {
        // <x, d_s> - o_s = -D / (d_a x d_b) at x = a ∩ b
        let d = self.concurrency(table, a, b, s);
        if d.is_zero() {
            return None;
        }
        let denom = self.line(table, a).0.cross(self.line(table, b).0);
        Some(d.is_negative() == (denom > 0))
    }
}

/// Translated unit rhombus spanned by two edge vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rhombus {
    pub anchor: Vec2,
    pub e1: Vec2,
    pub e2: Vec2,
}

impl Rhombus {
    pub fn corners(&self) -> [Vec2; 4] {
        let a = self.anchor;
        [a, a + self.e1, a + self.e1 + self.e2, a + self.e2]
    }

    pub fn area(&self) -> i64 {
        self.e1.cross(self.e2).abs()
    }

    fn project(&self, axis: Vec2) -> (i64, i64) {
        let c = self.corners();
        let mut lo = axis.dot(c[0]);
        let mut hi = lo;
        for p in &c[1..] {
            let v = axis.dot(*p);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        (lo, hi)
    }

    /// Exact separating-axis test on the four edge normals.
    pub fn interiors_overlap(&self, other: &Rhombus) -> bool {
        for axis in [self.e1.perp(), self.e2.perp(), other.e1.perp(), other.e2.perp()] {
            let (a0, a1) = self.project(axis);
            let (b0, b1) = other.project(axis);
            if a1 <= b0 || b1 <= a0 {
                return false;
            }
        }
        true
    }
}

/// Area of the zonotope, `sum_{i<j} ai aj |d_i x d_j|`.
pub fn zonotope_area(spec: &ZonotopeSpec) -> i64 {
    let (a, d) = (spec.sizes(), spec.directions());
    let mut area = 0;
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            area += a[i] as i64 * a[j] as i64 * d[i].cross(d[j]).abs();
        }
    }
    area
}
