//! Tilings as sign vectors over the triangles of a zonotope.
//!
//! A tiling is identified with the string of its triangle signs. Everything
//! else (sides of crossings, inclusion-minimality, tile coordinates, the
//! rhombi themselves) is recovered from that vector and the per-spec
//! [`Zonotope`] context.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use crate::arrangement::{total_tiles, PseudolineRef, TriangleRef, TriangleTable, ZonotopeSpec};
use crate::error::{Error, Result};
use crate::geometry::{zonotope_area, Multigrid, Rhombus};

/// Sign of a triangle `(P,Q,R)`: positive iff `P ∩ Q` lies on the plus side
/// of `R`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn from_bit(bit: bool) -> Sign {
        if bit {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Positive => '+',
            Sign::Negative => '-',
        }
    }
}

/// Side of a pseudoline `s`: plus is `{s + λ d_s, λ > 0}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    fn from_plus(plus: bool) -> Side {
        if plus {
            Side::Plus
        } else {
            Side::Minus
        }
    }
}

/// For each bundle triple `i < j < k`, whether "vertex lies on the plus side
/// of the opposite pseudoline" equals the triangle sign, per opposite role
/// `P`, `Q`, `R`. The `R` entry is true by definition of the sign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolarityTable {
    n: usize,
    roles: Vec<[bool; 3]>,
}

impl PolarityTable {
    /// 0-based bundles, `i < j < k`.
    pub fn get(&self, i: usize, j: usize, k: usize) -> [bool; 3] {
        self.roles[(i * self.n + j) * self.n + k]
    }
}

pub(crate) fn bit(words: &[u64], i: usize) -> bool {
    words[i >> 6] >> (i & 63) & 1 == 1
}

pub(crate) fn toggle(words: &mut [u64], i: usize) {
    words[i >> 6] ^= 1 << (i & 63);
}

pub(crate) fn word_count(bits: usize) -> usize {
    bits.div_ceil(64).max(1)
}

#[derive(Clone, Copy, Debug)]
struct CoordSlot {
    shift: u8,
    invert: bool,
    start: u32,
    len: u32,
}

#[derive(Clone, Copy, Debug)]
struct TriInfo {
    // tiles PQ, PR, QR
    tiles: [u32; 3],
    other_mask: u64,
    shift: [u8; 3],
    rank0: [u8; 3],
}

/// Per-spec context shared by all tilings of one zonotope: triangle table,
/// polarity, seed signs and the lookup tables behind fast flip detection.
#[derive(Debug)]
pub struct Zonotope {
    spec: ZonotopeSpec,
    table: TriangleTable,
    polarity: PolarityTable,
    seed: Box<[u64]>,
    words: usize,
    slots: Vec<CoordSlot>,
    tile_slots: Vec<u32>,
    terms: Vec<u32>,
    own_code: Vec<u64>,
    tri_info: Vec<TriInfo>,
    packed: bool,
}

impl Zonotope {
    pub fn new(spec: ZonotopeSpec) -> Arc<Zonotope> {
        let table = TriangleTable::new(&spec);
        let n = spec.bundle_count();
        let grid = Multigrid::new(&spec, &table);
        let plus = |a: usize, b: usize, s: usize| {
            grid.crossing_on_plus_side(&table, a, b, s)
                .expect("multigrid has no triple points")
        };

        let words = word_count(table.triangle_count());
        let mut seed = vec![0u64; words].into_boxed_slice();
        let mut roles = vec![[true; 3]; n * n * n];
        let mut seen = vec![false; n * n * n];
        for t in 0..table.triangle_count() {
            let [p, q, r] = table.triangle_lines(t).map(|x| x as usize);
            let sign = plus(p, q, r);
            if sign {
                toggle(&mut seed, t);
            }
            let rel = [plus(q, r, p) == sign, plus(p, r, q) == sign, true];
            let key = (table.bundle_of(p) * n + table.bundle_of(q)) * n + table.bundle_of(r);
            if seen[key] {
                assert_eq!(roles[key], rel, "polarity differs inside one bundle triple");
            } else {
                roles[key] = rel;
                seen[key] = true;
            }
        }
        let polarity = PolarityTable { n, roles };

        let mut zono = Zonotope {
            packed: n <= 16 && spec.sizes().iter().all(|&a| a <= 15),
            spec,
            table,
            polarity,
            seed,
            words,
            slots: Vec::new(),
            tile_slots: Vec::new(),
            terms: Vec::new(),
            own_code: Vec::new(),
            tri_info: Vec::new(),
        };
        zono.build_coordinate_tables();
        Arc::new(zono)
    }

    fn build_coordinate_tables(&mut self) {
        let table = &self.table;
        let n = table.bundle_count();
        let lines = table.line_count();
        self.tile_slots.push(0);
        for tile in 0..table.tile_count() {
            let [p, q] = table.tile_lines(tile).map(|x| x as usize);
            let (i, j) = (table.bundle_of(p), table.bundle_of(q));
            let mut own = 0u64;
            if self.packed {
                own |= (table.rank0_of(p) as u64) << (4 * i);
                own |= (table.rank0_of(q) as u64) << (4 * j);
            }
            self.own_code.push(own);
            for l in (0..n).filter(|&l| l != i && l != j) {
                let (role, key) = if l < i {
                    (0, (l, i, j))
                } else if l < j {
                    (1, (i, l, j))
                } else {
                    (2, (i, j, l))
                };
                let pol = self.polarity.get(key.0, key.1, key.2)[role];
                let start = self.terms.len() as u32;
                for s in table.bundle_offset(l)..table.bundle_offset(l) + table.bundle_size(l) as usize {
                    let t = table.triangle_of(p, q, s).expect("distinct bundles");
                    self.terms.push(t as u32);
                }
                self.slots.push(CoordSlot {
                    shift: (4 * l) as u8,
                    invert: !pol,
                    start,
                    len: table.bundle_size(l),
                });
            }
            self.tile_slots.push(self.slots.len() as u32);
        }
        let full = if n == 16 { u64::MAX } else { (1u64 << (4 * n)) - 1 };
        for t in 0..table.triangle_count() {
            let [p, q, r] = table.triangle_lines(t).map(|x| x as usize);
            let b = [p, q, r].map(|x| table.bundle_of(x));
            let own = b.iter().fold(0u64, |m, &x| m | (15u64 << (4 * x)));
            self.tri_info.push(TriInfo {
                tiles: [
                    table.tile_index(p, q) as u32,
                    table.tile_index(p, r) as u32,
                    table.tile_index(q, r) as u32,
                ],
                other_mask: full & !own,
                shift: b.map(|x| (4 * x) as u8),
                rank0: [p, q, r].map(|x| table.rank0_of(x).min(255) as u8),
            });
        }
        let _ = lines;
    }

    pub fn spec(&self) -> &ZonotopeSpec {
        &self.spec
    }

    pub fn table(&self) -> &TriangleTable {
        &self.table
    }

    pub fn polarity(&self) -> &PolarityTable {
        &self.polarity
    }

    pub fn triangle_count(&self) -> usize {
        self.table.triangle_count()
    }

    pub fn tile_count(&self) -> usize {
        self.table.tile_count()
    }

    /// Number of `u64` words in a sign vector.
    pub fn words(&self) -> usize {
        self.words
    }

    pub fn seed_signs(&self) -> &[u64] {
        &self.seed
    }

    /// Whether the crossing of ids `a`, `b` (distinct bundles) lies on the
    /// plus side of id `s`, which must differ from both.
    pub(crate) fn side_plus(&self, signs: &[u64], a: usize, b: usize, s: usize) -> bool {
        let t = &self.table;
        let bs = t.bundle_of(s);
        if bs == t.bundle_of(a) {
            return t.rank0_of(s) < t.rank0_of(a);
        }
        if bs == t.bundle_of(b) {
            return t.rank0_of(s) < t.rank0_of(b);
        }
        let mut ids = [a, b, s];
        ids.sort_unstable();
        let role = ids.iter().position(|&x| x == s).unwrap();
        let tri = t.triangle_index(ids[0], ids[1], ids[2]);
        let pol = self
            .polarity
            .get(t.bundle_of(ids[0]), t.bundle_of(ids[1]), t.bundle_of(ids[2]))[role];
        bit(signs, tri) == pol
    }

    /// Inclusion-minimality straight from the definition: no other
    /// pseudoline separates the three vertices.
    pub(crate) fn is_minimal_direct(&self, signs: &[u64], tri: usize) -> bool {
        let [p, q, r] = self.table.triangle_lines(tri).map(|x| x as usize);
        (0..self.table.line_count())
            .filter(|&s| s != p && s != q && s != r)
            .all(|s| {
                let a = self.side_plus(signs, p, q, s);
                a == self.side_plus(signs, p, r, s) && a == self.side_plus(signs, q, r, s)
            })
    }

    /// Lifted coordinate of a tile along one other bundle.
    fn slot_value(&self, signs: &[u64], slot: &CoordSlot) -> u64 {
        let terms = &self.terms[slot.start as usize..(slot.start + slot.len) as usize];
        let ones = terms.iter().filter(|&&t| bit(signs, t as usize)).count() as u64;
        if slot.invert {
            slot.len as u64 - ones
        } else {
            ones
        }
    }

    /// Lifted coordinates `m_1..m_n` of the anchor of every tile.
    pub(crate) fn tile_coords(&self, signs: &[u64]) -> Vec<Vec<u32>> {
        let n = self.table.bundle_count();
        (0..self.tile_count())
            .map(|tile| {
                let [p, q] = self.table.tile_lines(tile).map(|x| x as usize);
                let mut m = vec![0u32; n];
                m[self.table.bundle_of(p)] = self.table.rank0_of(p);
                m[self.table.bundle_of(q)] = self.table.rank0_of(q);
                for slot in &self.slots[self.tile_slots[tile] as usize..self.tile_slots[tile + 1] as usize] {
                    m[slot.shift as usize / 4] = self.slot_value(signs, slot) as u32;
                }
                m
            })
            .collect()
    }

    /// Marks the inclusion-minimal triangles of a valid sign vector in `out`.
    ///
    /// Uses nibble-packed tile coordinates: a triangle is minimal iff its
    /// three tiles agree on every foreign bundle and each own coordinate is
    /// within one of the opposite pseudoline's rank.
    pub fn minimal_mask(&self, signs: &[u64], scratch: &mut Vec<u64>, out: &mut [u64]) {
        out.iter_mut().for_each(|w| *w = 0);
        if !self.packed {
            for t in 0..self.triangle_count() {
                if self.is_minimal_direct(signs, t) {
                    toggle(out, t);
                }
            }
            return;
        }
        scratch.clear();
        for tile in 0..self.tile_count() {
            let mut code = self.own_code[tile];
            for slot in &self.slots[self.tile_slots[tile] as usize..self.tile_slots[tile + 1] as usize] {
                code |= self.slot_value(signs, slot) << slot.shift;
            }
            scratch.push(code);
        }
        for (t, info) in self.tri_info.iter().enumerate() {
            let a = scratch[info.tiles[0] as usize];
            let b = scratch[info.tiles[1] as usize];
            let c = scratch[info.tiles[2] as usize];
            if ((a ^ b) | (a ^ c)) & info.other_mask != 0 {
                continue;
            }
            let near = |code: u64, k: usize| ((code >> info.shift[k]) & 15).wrapping_sub(info.rank0[k] as u64) <= 1;
            if near(c, 0) && near(b, 1) && near(a, 2) {
                out[t >> 6] |= 1 << (t & 63);
            }
        }
    }

    /// Indices of the inclusion-minimal triangles of a valid sign vector.
    pub fn minimal_triangles(&self, signs: &[u64]) -> Vec<usize> {
        let mut out = vec![0u64; self.words];
        self.minimal_mask(signs, &mut Vec::new(), &mut out);
        ones(&out).collect()
    }
}

/// Indices of set bits.
pub(crate) fn ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(w, &x)| {
        let mut x = x;
        std::iter::from_fn(move || {
            (x != 0).then(|| {
                let b = x.trailing_zeros() as usize;
                x &= x - 1;
                w * 64 + b
            })
        })
    })
}

/// A rhombus tiling: a zonotope plus the sign of every triangle.
#[derive(Clone)]
pub struct Tiling {
    zono: Arc<Zonotope>,
    signs: Box<[u64]>,
}

impl Tiling {
    /// The tiling dual to the straight-line multigrid of the spec.
    pub fn seed(zono: &Arc<Zonotope>) -> Tiling {
        Tiling {
            zono: zono.clone(),
            signs: zono.seed.clone(),
        }
    }

    /// Wraps raw sign words; bits past the triangle count must be zero.
    pub fn from_words(zono: &Arc<Zonotope>, words: &[u64]) -> Result<Tiling> {
        let t = zono.triangle_count();
        if words.len() != zono.words() || ones(words).any(|i| i >= t) {
            return Err(Error::OutOfRange(format!("sign vector does not fit {} triangles", t)));
        }
        Ok(Tiling {
            zono: zono.clone(),
            signs: words.into(),
        })
    }

    /// Parses a `+`/`-` string of length `T`.
    pub fn from_sign_string(zono: &Arc<Zonotope>, s: &str) -> Result<Tiling> {
        let t = zono.triangle_count();
        if s.len() != t {
            return Err(Error::Parse(format!(
                "sign string has length {}, expected {t}",
                s.len()
            )));
        }
        let mut signs = vec![0u64; zono.words()].into_boxed_slice();
        for (i, c) in s.bytes().enumerate() {
            match c {
                b'+' => toggle(&mut signs, i),
                b'-' => {}
                _ => return Err(Error::Parse(format!("bad sign character {:?}", c as char))),
            }
        }
        Ok(Tiling {
            zono: zono.clone(),
            signs,
        })
    }

    pub fn zonotope(&self) -> &Arc<Zonotope> {
        &self.zono
    }

    pub fn spec(&self) -> &ZonotopeSpec {
        &self.zono.spec
    }

    pub fn words(&self) -> &[u64] {
        &self.signs
    }

    pub fn triangle_count(&self) -> usize {
        self.zono.triangle_count()
    }

    pub fn sign(&self, tri: usize) -> Sign {
        Sign::from_bit(bit(&self.signs, tri))
    }

    pub fn sign_of(&self, tri: &TriangleRef) -> Result<Sign> {
        Ok(self.sign(self.zono.table.index_of(tri)?))
    }

    pub fn sign_string(&self) -> String {
        (0..self.triangle_count()).map(|t| self.sign(t).as_char()).collect()
    }

    pub fn same_spec(&self, other: &Tiling) -> Result<()> {
        if self.spec() != other.spec() {
            return Err(Error::SpecMismatch(self.spec().to_string(), other.spec().to_string()));
        }
        Ok(())
    }

    /// Side of pseudoline `s` on which the crossing `P ∩ Q` lies.
    ///
    /// A pseudoline of the same bundle as `P` never crosses it, so the whole
    /// of `P` lies on the plus side of `s` exactly when `s` has lower rank.
    pub fn side_of(&self, crossing: (PseudolineRef, PseudolineRef), s: PseudolineRef) -> Result<Side> {
        let t = &self.zono.table;
        let (a, b, s_id) = (t.line_id(crossing.0)?, t.line_id(crossing.1)?, t.line_id(s)?);
        if t.bundle_of(a) == t.bundle_of(b) {
            return Err(Error::OutOfRange(format!(
                "{} and {} share a bundle and never cross",
                crossing.0, crossing.1
            )));
        }
        if s_id == a || s_id == b {
            return Err(Error::DegenerateSide(s.to_string()));
        }
        Ok(Side::from_plus(self.zono.side_plus(&self.signs, a, b, s_id)))
    }

    /// No pseudoline outside the triangle separates its three vertices.
    pub fn is_inclusion_minimal(&self, tri: &TriangleRef) -> Result<bool> {
        let idx = self.zono.table.index_of(tri)?;
        Ok(self.zono.is_minimal_direct(&self.signs, idx))
    }

    /// Indices of all inclusion-minimal (flippable) triangles.
    pub fn inclusion_minimal_triangles(&self) -> Vec<usize> {
        self.zono.minimal_triangles(&self.signs)
    }

    /// Inverts an inclusion-minimal triangle.
    pub fn flip(&self, tri: &TriangleRef) -> Result<Tiling> {
        let idx = self.zono.table.index_of(tri)?;
        self.flip_index(idx)
    }

    pub fn flip_index(&self, tri: usize) -> Result<Tiling> {
        if tri >= self.triangle_count() {
            return Err(Error::OutOfRange(format!("triangle index {tri}")));
        }
        if !self.zono.is_minimal_direct(&self.signs, tri) {
            let name = self.zono.table.triangle_ref(tri)?;
            return Err(Error::NotFlippable(name.to_string()));
        }
        let mut signs = self.signs.clone();
        toggle(&mut signs, tri);
        Ok(Tiling {
            zono: self.zono.clone(),
            signs,
        })
    }

    /// All tilings one flip away, in triangle order.
    pub fn neighbors(&self) -> Vec<Tiling> {
        self.inclusion_minimal_triangles()
            .into_iter()
            .map(|t| {
                let mut signs = self.signs.clone();
                toggle(&mut signs, t);
                Tiling {
                    zono: self.zono.clone(),
                    signs,
                }
            })
            .collect()
    }

    /// One placement per crossing, in tile order. Coordinate `m_k` counts the
    /// pseudolines of bundle `k` whose plus side contains the crossing.
    pub fn placements(&self) -> Vec<TilePlacement> {
        let table = &self.zono.table;
        self.zono
            .tile_coords(&self.signs)
            .into_iter()
            .enumerate()
            .map(|(tile, coords)| {
                let [p, q] = table.tile_lines(tile).map(|x| x as usize);
                TilePlacement {
                    pair: (table.line_ref(p), table.line_ref(q)),
                    coords,
                }
            })
            .collect()
    }

    /// Whether the sign vector describes a genuine tiling: its placements are
    /// in bounds, pairwise interior-disjoint and of the right total area.
    pub fn validate(&self) -> bool {
        check_placements(self.spec(), &self.zono.table, &self.placements()).is_ok()
    }

    /// Every sub-arrangement of four pseudolines is a valid tiling of its own
    /// small zonotope.
    pub fn is_locally_consistent(&self) -> bool {
        let t = &self.zono.table;
        let lines = t.line_count();
        let patterns = four_line_patterns();
        for a in 0..lines {
            for b in a + 1..lines {
                for c in b + 1..lines {
                    for d in c + 1..lines {
                        let ids = [a, b, c, d];
                        let bundles = ids.map(|x| t.bundle_of(x));
                        let Some(kind) = QuadKind::classify(bundles) else {
                            continue;
                        };
                        let pattern = kind.triples().iter().enumerate().fold(0u8, |acc, (k, tr)| {
                            let tri = t.triangle_index(ids[tr[0]], ids[tr[1]], ids[tr[2]]);
                            acc | (bit(&self.signs, tri) as u8) << k
                        });
                        if !patterns.allows(kind, pattern) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// Two-line text form: `zonotope: a1,...,an` then the sign string.
    pub fn to_file_string(&self) -> String {
        format!("zonotope: {}\n{}\n", self.spec(), self.sign_string())
    }

    pub fn parse_file(text: &str) -> Result<Tiling> {
        let mut lines = text.lines();
        let spec = parse_header(lines.next())?;
        let zono = Zonotope::new(spec);
        let signs = lines.next().unwrap_or("");
        if let Some(extra) = lines.find(|l| !l.trim().is_empty()) {
            return Err(Error::Parse(format!("unexpected line {extra:?}")));
        }
        Tiling::from_sign_string(&zono, signs.trim_end_matches('\r'))
    }
}

pub(crate) fn parse_header(line: Option<&str>) -> Result<ZonotopeSpec> {
    let line = line.ok_or_else(|| Error::Parse("empty input".into()))?;
    let rest = line
        .strip_prefix("zonotope:")
        .ok_or_else(|| Error::Parse(format!("expected 'zonotope: a1,...,an', got {line:?}")))?;
    rest.trim().parse()
}

impl PartialEq for Tiling {
    fn eq(&self, other: &Tiling) -> bool {
        self.signs == other.signs && self.spec() == other.spec()
    }
}

impl Eq for Tiling {}

impl Hash for Tiling {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.signs.hash(state);
    }
}

impl fmt::Debug for Tiling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tiling({}: {})", self.spec(), self.sign_string())
    }
}

/// The tiling dual to the straight-line multigrid of `spec`.
pub fn seed_tiling(spec: &ZonotopeSpec) -> Tiling {
    Tiling::seed(&Zonotope::new(spec.clone()))
}

/// One rhombus of a tiling: the crossing it is dual to and the lifted
/// coordinates of its anchor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TilePlacement {
    pub pair: (PseudolineRef, PseudolineRef),
    pub coords: Vec<u32>,
}

impl TilePlacement {
    pub fn rhombus(&self, spec: &ZonotopeSpec) -> Rhombus {
        let d = spec.directions();
        let anchor = self
            .coords
            .iter()
            .zip(d)
            .fold(crate::arrangement::Vec2::new(0, 0), |acc, (&m, &v)| {
                acc + v.scale(m as i64)
            });
        Rhombus {
            anchor,
            e1: d[self.pair.0.bundle as usize - 1],
            e2: d[self.pair.1.bundle as usize - 1],
        }
    }
}

impl fmt::Display for TilePlacement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} :", self.pair.0, self.pair.1)?;
        for m in &self.coords {
            write!(f, " {m}")?;
        }
        Ok(())
    }
}

impl FromStr for TilePlacement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, tail) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("bad placement {s:?}")))?;
        let mut refs = head.split_whitespace();
        let (Some(a), Some(b), None) = (refs.next(), refs.next(), refs.next()) else {
            return Err(Error::Parse(format!("bad placement {s:?}")));
        };
        let coords = tail
            .split_whitespace()
            .map(|m| m.parse().map_err(|_| Error::Parse(format!("bad coordinate {m:?}"))))
            .collect::<Result<_>>()?;
        Ok(TilePlacement {
            pair: (a.parse()?, b.parse()?),
            coords,
        })
    }
}

/// Text form of a placement list: header line then one tile per line.
pub fn placements_to_string(spec: &ZonotopeSpec, placements: &[TilePlacement]) -> String {
    let mut out = format!("zonotope: {spec}\n");
    for p in placements {
        out.push_str(&p.to_string());
        out.push('\n');
    }
    out
}

pub fn parse_placements(text: &str) -> Result<(ZonotopeSpec, Vec<TilePlacement>)> {
    let mut lines = text.lines();
    let spec = parse_header(lines.next())?;
    let placements = lines
        .filter(|l| !l.trim().is_empty())
        .map(str::parse)
        .collect::<Result<_>>()?;
    Ok((spec, placements))
}

fn check_placements(spec: &ZonotopeSpec, table: &TriangleTable, placements: &[TilePlacement]) -> Result<()> {
    let n = spec.bundle_count();
    if placements.len() as u64 != total_tiles(spec) {
        return Err(Error::NotATiling(format!(
            "{} tiles, expected {}",
            placements.len(),
            total_tiles(spec)
        )));
    }
    let mut seen = vec![false; table.tile_count()];
    let mut rhombi = Vec::with_capacity(placements.len());
    for pl in placements {
        let (a, b) = (table.line_id(pl.pair.0)?, table.line_id(pl.pair.1)?);
        let tile = table
            .tile_of(a, b)
            .ok_or_else(|| Error::NotATiling(format!("{} {} do not cross", pl.pair.0, pl.pair.1)))?;
        if std::mem::replace(&mut seen[tile], true) {
            return Err(Error::NotATiling(format!(
                "crossing {} {} placed twice",
                pl.pair.0, pl.pair.1
            )));
        }
        if pl.coords.len() != n {
            return Err(Error::NotATiling(format!(
                "tile {pl} has {} coordinates",
                pl.coords.len()
            )));
        }
        if pl.coords.iter().zip(spec.sizes()).any(|(&m, &a)| m > a) {
            return Err(Error::NotATiling(format!("tile {pl} out of bounds")));
        }
        for line in [pl.pair.0, pl.pair.1] {
            if pl.coords[line.bundle as usize - 1] != line.rank - 1 {
                return Err(Error::NotATiling(format!("tile {pl} is off its own ribbon")));
            }
        }
        rhombi.push(pl.rhombus(spec));
    }
    let area: i64 = rhombi.iter().map(Rhombus::area).sum();
    if area != zonotope_area(spec) {
        return Err(Error::NotATiling(format!(
            "tile area {area} differs from the zonotope's"
        )));
    }
    for i in 0..rhombi.len() {
        for j in i + 1..rhombi.len() {
            if rhombi[i].interiors_overlap(&rhombi[j]) {
                return Err(Error::NotATiling(format!(
                    "tiles {} and {} overlap",
                    placements[i], placements[j]
                )));
            }
        }
    }
    Ok(())
}

/// Rebuilds the sign vector of a placement list, which must form a tiling.
/// The triangle `(P,Q,R)` is positive iff tile `PQ` has `m_k >= rank(R)`.
pub fn signs_from_placements(spec: &ZonotopeSpec, placements: &[TilePlacement]) -> Result<Tiling> {
    let zono = Zonotope::new(spec.clone());
    let table = &zono.table;
    check_placements(spec, table, placements)?;
    let mut coords = vec![None; table.tile_count()];
    for pl in placements {
        let tile = table
            .tile_of(table.line_id(pl.pair.0)?, table.line_id(pl.pair.1)?)
            .expect("checked");
        coords[tile] = Some(&pl.coords);
    }
    let mut signs = vec![0u64; zono.words()].into_boxed_slice();
    for t in 0..table.triangle_count() {
        let [p, q, r] = table.triangle_lines(t).map(|x| x as usize);
        let m = coords[table.tile_index(p, q)].expect("all tiles present");
        if m[table.bundle_of(r)] > table.rank0_of(r) {
            toggle(&mut signs, t);
        }
    }
    let tiling = Tiling {
        zono: zono.clone(),
        signs,
    };
    let mut back = tiling.placements();
    let mut given = placements.to_vec();
    back.sort();
    given.sort();
    if back != given {
        return Err(Error::NotATiling("coordinates are not those of any sign vector".into()));
    }
    Ok(tiling)
}

/// Bundle pattern of four pseudolines sorted by id that span at least three
/// bundles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum QuadKind {
    /// Four distinct bundles: triangles abc, abd, acd, bcd.
    Distinct,
    /// Three bundles; the payload is which of them holds two pseudolines.
    Doubled(u8),
}

impl QuadKind {
    pub(crate) fn classify(b: [usize; 4]) -> Option<QuadKind> {
        match (b[0] == b[1], b[1] == b[2], b[2] == b[3]) {
            (false, false, false) => Some(QuadKind::Distinct),
            (true, false, false) => Some(QuadKind::Doubled(0)),
            (false, true, false) => Some(QuadKind::Doubled(1)),
            (false, false, true) => Some(QuadKind::Doubled(2)),
            _ => None,
        }
    }

    /// Positions (within the sorted quadruple) of the triangles, in
    /// lexicographic order.
    pub(crate) fn triples(self) -> &'static [[usize; 3]] {
        match self {
            QuadKind::Distinct => &[[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]],
            QuadKind::Doubled(0) => &[[0, 2, 3], [1, 2, 3]],
            QuadKind::Doubled(1) => &[[0, 1, 3], [0, 2, 3]],
            QuadKind::Doubled(_) => &[[0, 1, 2], [0, 1, 3]],
        }
    }
}

/// Valid sign patterns of four-pseudoline sub-arrangements, computed once by
/// geometric validation of every sign vector of `(1,1,1,1)`, `(2,1,1)`,
/// `(1,2,1)` and `(1,1,2)`.
pub(crate) struct FourLinePatterns {
    distinct: u16,
    doubled: [u8; 3],
}

impl FourLinePatterns {
    pub(crate) fn allows(&self, kind: QuadKind, pattern: u8) -> bool {
        match kind {
            QuadKind::Distinct => self.distinct >> pattern & 1 == 1,
            QuadKind::Doubled(k) => self.doubled[k as usize] >> pattern & 1 == 1,
        }
    }
}

fn valid_pattern_mask(sizes: &[u32]) -> u16 {
    let zono = Zonotope::new(ZonotopeSpec::new(sizes).expect("fixed small spec"));
    let t = zono.triangle_count();
    (0..1u64 << t)
        .filter(|&v| Tiling::from_words(&zono, &[v]).expect("fits").validate())
        .fold(0u16, |m, v| m | 1 << v)
}

pub(crate) fn four_line_patterns() -> &'static FourLinePatterns {
    static PATTERNS: OnceLock<FourLinePatterns> = OnceLock::new();
    PATTERNS.get_or_init(|| FourLinePatterns {
        distinct: valid_pattern_mask(&[1, 1, 1, 1]),
        doubled: [
            valid_pattern_mask(&[2, 1, 1]) as u8,
            valid_pattern_mask(&[1, 2, 1]) as u8,
            valid_pattern_mask(&[1, 1, 2]) as u8,
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Multigrid;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn zono(s: &str) -> Arc<Zonotope> {
        Zonotope::new(s.parse().unwrap())
    }

    fn pl(b: u8, r: u32) -> PseudolineRef {
        PseudolineRef::new(b, r)
    }

    #[test]
    fn unit_hexagon() {
        let z = zono("1,1,1");
        let seed = Tiling::seed(&z);
        assert!(seed.validate());
        assert_eq!(seed.inclusion_minimal_triangles(), vec![0]);
        let tri = z.table().triangle_ref(0).unwrap();
        assert!(seed.is_inclusion_minimal(&tri).unwrap());
        let other = seed.flip(&tri).unwrap();
        assert_ne!(other, seed);
        assert!(other.validate());
        assert!(other.is_inclusion_minimal(&tri).unwrap());
        assert_eq!(other.flip(&tri).unwrap(), seed);
        let placements = seed.placements();
        assert_eq!(placements.len(), 3);
        for p in &placements {
            assert!(p.coords.iter().all(|&m| m <= 1));
        }
        // three rhombi around one interior vertex: 7 distinct corners
        let mut corners: Vec<_> = placements
            .iter()
            .flat_map(|p| p.rhombus(seed.spec()).corners())
            .map(|v| (v.x, v.y))
            .collect();
        corners.sort();
        corners.dedup();
        assert_eq!(corners.len(), 7);
    }

    #[test]
    fn seed_is_all_negative_and_valid() {
        for s in [
            "1,1,1",
            "2,2,2",
            "3,2,2",
            "1,1,1,1",
            "2,2,1,1",
            "1,1,1,1,1,1",
            "2,2,2,2,2",
            "3,2,2,2,2",
        ] {
            let t = Tiling::seed(&zono(s));
            assert!(t.validate(), "{s}");
            assert!(t.sign_string().chars().all(|c| c == '-'), "{s}");
        }
    }

    #[test]
    fn polarity_matches_straight_line_geometry() {
        // For increasing directions: P-role agrees with the sign, Q-role
        // disagrees.
        for s in ["1,1,1", "2,1,3,1", "1,1,1,1,1,1"] {
            let z = zono(s);
            let n = z.spec().bundle_count();
            for i in 0..n {
                for j in i + 1..n {
                    for k in j + 1..n {
                        assert_eq!(z.polarity().get(i, j, k), [true, false, true]);
                    }
                }
            }
        }
    }

    #[test]
    fn side_of_agrees_with_seed_geometry() {
        for s in ["2,2,2", "2,1,2,1", "1,1,1,1,1"] {
            let z = zono(s);
            let t = Tiling::seed(&z);
            let table = z.table();
            let grid = Multigrid::new(z.spec(), table);
            for a in 0..table.line_count() {
                for b in 0..table.line_count() {
                    if table.bundle_of(a) == table.bundle_of(b) {
                        continue;
                    }
                    for x in (0..table.line_count()).filter(|&x| x != a && x != b) {
                        let side = t
                            .side_of((table.line_ref(a), table.line_ref(b)), table.line_ref(x))
                            .unwrap();
                        let geo = grid.crossing_on_plus_side(table, a, b, x).unwrap();
                        assert_eq!(side == Side::Plus, geo);
                    }
                }
            }
        }
    }

    #[test]
    fn side_of_same_bundle_example() {
        let t = Tiling::seed(&zono("2,2,2"));
        assert_eq!(t.side_of((pl(1, 2), pl(2, 1)), pl(1, 1)).unwrap(), Side::Plus);
        assert_eq!(t.side_of((pl(1, 1), pl(2, 1)), pl(1, 2)).unwrap(), Side::Minus);
        assert!(matches!(
            t.side_of((pl(1, 2), pl(2, 1)), pl(1, 2)),
            Err(Error::DegenerateSide(_))
        ));
        assert!(t.side_of((pl(1, 1), pl(1, 2)), pl(2, 1)).is_err());
    }

    #[test]
    fn flip_rejects_non_minimal_triangle() {
        let z = zono("2,2,2");
        let t = Tiling::seed(&z);
        let minimal = t.inclusion_minimal_triangles();
        let bad = (0..z.triangle_count()).find(|x| !minimal.contains(x)).unwrap();
        assert!(matches!(t.flip_index(bad), Err(Error::NotFlippable(_))));
    }

    #[test]
    fn random_walk_stays_valid() {
        let z = zono("2,2,2,2");
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut t = Tiling::seed(&z);
        for _ in 0..1000 {
            let m = t.inclusion_minimal_triangles();
            assert!(!m.is_empty());
            let direct: Vec<usize> = (0..z.triangle_count())
                .filter(|&x| z.is_minimal_direct(t.words(), x))
                .collect();
            assert_eq!(m, direct);
            let tri = m[rng.gen_range(0..m.len())];
            let next = t.flip_index(tri).unwrap();
            assert_eq!(
                next.words()
                    .iter()
                    .zip(t.words())
                    .map(|(a, b)| (a ^ b).count_ones())
                    .sum::<u32>(),
                1
            );
            assert!(next.validate());
            t = next;
        }
    }

    #[test]
    fn file_round_trip_and_errors() {
        let z = zono("1,1,1,1");
        let t = Tiling::seed(&z).neighbors().remove(0);
        let text = t.to_file_string();
        assert_eq!(text, format!("zonotope: 1,1,1,1\n{}\n", t.sign_string()));
        assert_eq!(Tiling::parse_file(&text).unwrap(), t);
        assert_eq!(Tiling::parse_file(text.trim_end()).unwrap(), t);
        assert!(Tiling::parse_file("zonotope: 1,1,1\n++\n").is_err());
        assert!(Tiling::parse_file("zonotope: 1,1,1\nx\n").is_err());
        assert!(Tiling::parse_file("1,1,1\n+\n").is_err());
        assert!(Tiling::parse_file("zonotope: 1,1\n").unwrap().triangle_count() == 0);
    }

    #[test]
    fn placement_text_round_trip() {
        let t = Tiling::seed(&zono("2,1,2"));
        let text = placements_to_string(t.spec(), &t.placements());
        let (spec, back) = parse_placements(&text).unwrap();
        assert_eq!(&spec, t.spec());
        assert_eq!(back, t.placements());
        assert!(text.lines().nth(1).unwrap().contains(" : "));
    }

    #[test]
    fn signs_from_placements_rejects_broken_lists() {
        let t = Tiling::seed(&zono("2,2,2"));
        let mut p = t.placements();
        assert_eq!(signs_from_placements(t.spec(), &p).unwrap(), t);
        let mut missing = p.clone();
        missing.pop();
        assert!(matches!(
            signs_from_placements(t.spec(), &missing),
            Err(Error::NotATiling(_))
        ));
        // move one tile onto another of the same type
        let (i, j) = (0..p.len())
            .flat_map(|i| (0..p.len()).map(move |j| (i, j)))
            .find(|&(i, j)| {
                i != j && p[i].pair.0.bundle == p[j].pair.0.bundle && p[i].pair.1.bundle == p[j].pair.1.bundle
            })
            .unwrap();
        p[i].coords = p[j].coords.clone();
        assert!(signs_from_placements(t.spec(), &p).is_err());
    }

    #[test]
    fn four_line_pattern_counts() {
        let p = four_line_patterns();
        assert_eq!(p.distinct.count_ones(), 8);
        for d in p.doubled {
            assert_eq!(d.count_ones(), 3);
        }
    }

    #[test]
    fn toggled_non_minimal_triangle_is_invalid() {
        let z = zono("2,2,2");
        let t = Tiling::seed(&z);
        let minimal = t.inclusion_minimal_triangles();
        for tri in (0..z.triangle_count()).filter(|x| !minimal.contains(x)) {
            let mut w = t.words().to_vec();
            toggle(&mut w, tri);
            let bad = Tiling::from_words(&z, &w).unwrap();
            assert!(!bad.validate());
            assert!(!bad.is_locally_consistent());
        }
    }
}
