//! Bundles, pseudolines, tiles and triangles of a zonotopal domain.
//!
//! A zonotope `(a1,...,an)` carries `ak` pseudolines in bundle `k`. Pseudolines
//! are numbered globally in `(bundle, rank)` order; tiles are the crossings of
//! two pseudolines from distinct bundles and triangles are triples from three
//! distinct bundles. Both get dense indices in lexicographic order of their
//! pseudoline ids.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest supported number of bundles.
pub const MAX_BUNDLES: usize = 16;
/// Largest supported number of triangles.
pub const MAX_TRIANGLES: u64 = 1 << 31;

/// Exact planar integer vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Vec2 {
    pub x: i64,
    pub y: i64,
}

impl Vec2 {
    pub const fn new(x: i64, y: i64) -> Self {
        Vec2 { x, y }
    }

    pub fn cross(self, other: Vec2) -> i64 {
        self.x * other.y - self.y * other.x
    }

    pub fn dot(self, other: Vec2) -> i64 {
        self.x * other.x + self.y * other.y
    }

    /// Counter-clockwise quarter turn.
    pub fn perp(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    pub fn scale(self, k: i64) -> Vec2 {
        Vec2::new(self.x * k, self.y * k)
    }
}

impl std::ops::Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl std::ops::Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

/// `n` integer directions with strictly increasing slopes in the right
/// half-plane: `(n, 2k - n + 1)` for `k = 0..n`.
///
/// All combinatorial decisions use these. [`render_directions`] gives the
/// regular `k*pi/n` star used for drawing.
pub fn default_directions(n: usize) -> Vec<Vec2> {
    let n = n as i64;
    (0..n).map(|k| Vec2::new(n.max(1), 2 * k - n + 1)).collect()
}

/// Unit vectors at angles `k*pi/n`, rendering only.
pub fn render_directions(n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|k| {
            let a = std::f64::consts::PI * k as f64 / n as f64;
            (a.cos(), a.sin())
        })
        .collect()
}

/// The domain `(a1,...,an)` together with its edge directions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZonotopeSpec {
    sizes: Vec<u32>,
    directions: Vec<Vec2>,
}

impl ZonotopeSpec {
    pub fn new(sizes: &[u32]) -> Result<Self> {
        Self::with_directions(sizes, default_directions(sizes.len()))
    }

    /// Directions must be pairwise non-collinear and sorted by angle inside
    /// an open half-plane, i.e. every `d[i] x d[j]` with `i < j` is positive.
    pub fn with_directions(sizes: &[u32], directions: Vec<Vec2>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::InvalidSpec("no bundles".into()));
        }
        if sizes.len() > MAX_BUNDLES {
            return Err(Error::InvalidSpec(format!(
                "{} bundles, at most {MAX_BUNDLES} supported",
                sizes.len()
            )));
        }
        if let Some(k) = sizes.iter().position(|&a| a == 0) {
            return Err(Error::InvalidSpec(format!("bundle {} is empty", k + 1)));
        }
        if directions.len() != sizes.len() {
            return Err(Error::InvalidSpec(format!(
                "{} directions for {} bundles",
                directions.len(),
                sizes.len()
            )));
        }
        for i in 0..directions.len() {
            for j in i + 1..directions.len() {
                if directions[i].cross(directions[j]) <= 0 {
                    return Err(Error::InvalidSpec(format!(
                        "directions {} and {} are collinear or out of angular order",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let spec = ZonotopeSpec {
            sizes: sizes.to_vec(),
            directions,
        };
        if total_triangles(&spec) > MAX_TRIANGLES {
            return Err(Error::InvalidSpec(format!(
                "{} triangles exceed the supported {MAX_TRIANGLES}",
                total_triangles(&spec)
            )));
        }
        Ok(spec)
    }

    pub fn sizes(&self) -> &[u32] {
        &self.sizes
    }

    pub fn bundle_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn directions(&self) -> &[Vec2] {
        &self.directions
    }

    pub fn line_count(&self) -> usize {
        self.sizes.iter().map(|&a| a as usize).sum()
    }
}

impl FromStr for ZonotopeSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let sizes = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad bundle size {p:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        ZonotopeSpec::new(&sizes)
    }
}

impl fmt::Display for ZonotopeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, a) in self.sizes.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

fn elementary_symmetric(sizes: &[u32], degree: usize) -> u64 {
    // e[d] accumulates the degree-d elementary symmetric polynomial.
    let mut e = vec![0u64; degree + 1];
    e[0] = 1;
    for &a in sizes {
        for d in (1..=degree).rev() {
            e[d] += e[d - 1] * a as u64;
        }
    }
    e[degree]
}

/// Number of triangles, `sum_{i<j<k} ai aj ak`.
pub fn total_triangles(spec: &ZonotopeSpec) -> u64 {
    elementary_symmetric(&spec.sizes, 3)
}

/// Number of tiles, `sum_{i<j} ai aj`.
pub fn total_tiles(spec: &ZonotopeSpec) -> u64 {
    elementary_symmetric(&spec.sizes, 2)
}

/// Pseudoline `rank` (1-based) of bundle `bundle` (1-based). Ordered by
/// bundle, then rank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PseudolineRef {
    pub bundle: u8,
    pub rank: u32,
}

impl PseudolineRef {
    pub const fn new(bundle: u8, rank: u32) -> Self {
        PseudolineRef { bundle, rank }
    }
}

impl fmt::Display for PseudolineRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.bundle, self.rank)
    }
}

impl FromStr for PseudolineRef {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad pseudoline {s:?}, expected bundle.rank"));
        let (b, r) = s.split_once('.').ok_or_else(bad)?;
        Ok(PseudolineRef {
            bundle: b.parse().map_err(|_| bad())?,
            rank: r.parse().map_err(|_| bad())?,
        })
    }
}

/// Three pairwise crossing pseudolines, bundles strictly increasing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriangleRef(pub [PseudolineRef; 3]);

impl TriangleRef {
    pub fn new(a: PseudolineRef, b: PseudolineRef, c: PseudolineRef) -> Result<Self> {
        if !(a.bundle < b.bundle && b.bundle < c.bundle) {
            return Err(Error::OutOfRange(format!(
                "triangle ({a},{b},{c}) needs strictly increasing bundles"
            )));
        }
        Ok(TriangleRef([a, b, c]))
    }

    pub fn lines(&self) -> [PseudolineRef; 3] {
        self.0
    }
}

impl fmt::Display for TriangleRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

/// Dense indexing of pseudolines, tiles and triangles for one spec.
///
/// Pseudoline ids are `0..N` in `(bundle, rank)` order. A tile is a pair of
/// ids `p < q` from distinct bundles, a triangle a triple `p < q < r` from
/// three distinct bundles; both are numbered lexicographically.
#[derive(Clone, Debug)]
pub struct TriangleTable {
    sizes: Vec<u32>,
    offsets: Vec<usize>,
    line_bundle: Vec<u8>,
    line_rank0: Vec<u32>,
    tile_first: Vec<usize>,
    tiles: Vec<[u32; 2]>,
    tri_first: Vec<usize>,
    triangles: Vec<[u32; 3]>,
}

impl TriangleTable {
    pub fn new(spec: &ZonotopeSpec) -> Self {
        let sizes = spec.sizes().to_vec();
        let mut offsets = vec![0usize];
        for &a in &sizes {
            offsets.push(offsets.last().unwrap() + a as usize);
        }
        let lines = *offsets.last().unwrap();
        let mut line_bundle = Vec::with_capacity(lines);
        let mut line_rank0 = Vec::with_capacity(lines);
        for (k, &a) in sizes.iter().enumerate() {
            for r in 0..a {
                line_bundle.push(k as u8);
                line_rank0.push(r);
            }
        }
        // lines of later bundles start at offsets[bundle + 1]
        let after = |p: usize| offsets[line_bundle[p] as usize + 1];

        let mut tile_first = Vec::with_capacity(lines);
        let mut tiles = Vec::new();
        for p in 0..lines {
            tile_first.push(tiles.len());
            for q in after(p)..lines {
                tiles.push([p as u32, q as u32]);
            }
        }
        let mut tri_first = Vec::with_capacity(tiles.len());
        let mut triangles = Vec::new();
        for &[p, q] in &tiles {
            tri_first.push(triangles.len());
            for r in after(q as usize)..lines {
                triangles.push([p, q, r as u32]);
            }
        }
        TriangleTable {
            sizes,
            offsets,
            line_bundle,
            line_rank0,
            tile_first,
            tiles,
            tri_first,
            triangles,
        }
    }

    pub fn bundle_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn bundle_size(&self, bundle: usize) -> u32 {
        self.sizes[bundle]
    }

    pub fn line_count(&self) -> usize {
        self.line_bundle.len()
    }

    pub fn tile_count(&self) -> usize {
        self.tiles.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    /// Id of the first pseudoline of a 0-based bundle.
    pub fn bundle_offset(&self, bundle: usize) -> usize {
        self.offsets[bundle]
    }

    /// 0-based bundle of a pseudoline id.
    #[inline]
    pub fn bundle_of(&self, line: usize) -> usize {
        self.line_bundle[line] as usize
    }

    /// 0-based rank of a pseudoline id inside its bundle.
    #[inline]
    pub fn rank0_of(&self, line: usize) -> u32 {
        self.line_rank0[line]
    }

    pub fn line_id(&self, line: PseudolineRef) -> Result<usize> {
        let b = line.bundle as usize;
        if b == 0 || b > self.sizes.len() || line.rank == 0 || line.rank > self.sizes[b - 1] {
            return Err(Error::OutOfRange(format!("pseudoline {line}")));
        }
        Ok(self.offsets[b - 1] + line.rank as usize - 1)
    }

    pub fn line_ref(&self, line: usize) -> PseudolineRef {
        PseudolineRef::new(self.line_bundle[line] + 1, self.line_rank0[line] + 1)
    }

    /// Tile index of ids `p < q` from distinct bundles (unchecked).
    #[inline]
    pub fn tile_index(&self, p: usize, q: usize) -> usize {
        self.tile_first[p] + (q - self.offsets[self.line_bundle[p] as usize + 1])
    }

    /// Tile index for two ids in either order; `None` for a same-bundle pair.
    pub fn tile_of(&self, a: usize, b: usize) -> Option<usize> {
        let (p, q) = if a < b { (a, b) } else { (b, a) };
        (self.line_bundle[p] != self.line_bundle[q]).then(|| self.tile_index(p, q))
    }

    pub fn tile_lines(&self, tile: usize) -> [u32; 2] {
        self.tiles[tile]
    }

    /// Triangle index of ids `p < q < r` from distinct bundles (unchecked).
    #[inline]
    pub fn triangle_index(&self, p: usize, q: usize, r: usize) -> usize {
        self.tri_first[self.tile_index(p, q)] + (r - self.offsets[self.line_bundle[q] as usize + 1])
    }

    /// Triangle index of three ids in any order; `None` unless the bundles
    /// are pairwise distinct.
    pub fn triangle_of(&self, a: usize, b: usize, c: usize) -> Option<usize> {
        let mut t = [a, b, c];
        t.sort_unstable();
        let [p, q, r] = t;
        let (bp, bq, br) = (self.line_bundle[p], self.line_bundle[q], self.line_bundle[r]);
        (bp < bq && bq < br).then(|| self.triangle_index(p, q, r))
    }

    pub fn triangle_lines(&self, tri: usize) -> [u32; 3] {
        self.triangles[tri]
    }

    pub fn index_of(&self, tri: &TriangleRef) -> Result<usize> {
        let [a, b, c] = tri.0;
        let (p, q, r) = (self.line_id(a)?, self.line_id(b)?, self.line_id(c)?);
        self.triangle_of(p, q, r)
            .ok_or_else(|| Error::OutOfRange(format!("triangle {tri}")))
    }

    pub fn triangle_ref(&self, tri: usize) -> Result<TriangleRef> {
        let [p, q, r] = *self
            .triangles
            .get(tri)
            .ok_or_else(|| Error::OutOfRange(format!("triangle index {tri}")))?;
        Ok(TriangleRef([
            self.line_ref(p as usize),
            self.line_ref(q as usize),
            self.line_ref(r as usize),
        ]))
    }
}
