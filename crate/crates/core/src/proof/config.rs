//! Labelled abstract pseudoline configurations.
//!
//! Lines get ids in insertion order and keep them. A triple of ids
//! `a < b < c` owns the slot `C(c,3) + C(b,2) + a`, so adding a line only
//! appends slots. Only triples from three distinct bundles are triangles;
//! their sign follows the tiling convention (bundle-sorted `(P,Q,R)`,
//! positive iff `P ∩ Q` is on the plus side of `R`).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::tiling::{four_line_patterns, QuadKind, Sign, Tiling};

/// Whether a vertex `Q∩R` / `P∩R` / `P∩Q` lies on the plus side of the
/// opposite line agrees with the triangle sign; holds for every bundle
/// triple when directions increase in angle.
const POLARITY: [bool; 3] = [true, false, true];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    Inverted,
    NonInverted,
    Unknown,
}

impl Label {
    fn as_char(self) -> char {
        match self {
            Label::Inverted => 'I',
            Label::NonInverted => 'N',
            Label::Unknown => '?',
        }
    }
}

/// No pseudoline of `bundle` crosses `line` between its crossings with
/// `from` and `to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block {
    pub line: u8,
    pub from: u8,
    pub to: u8,
    pub bundle: u8,
}

/// Which extremal line of its bundle an inserted line is assumed to be,
/// among those cutting the same two sides of the distinguished triangle.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Closest {
    /// Nearest to the vertex it cuts off.
    Inner,
    /// Farthest from that vertex, except for lines parallel to the third
    /// side, which are always taken nearest.
    Outer,
    /// Farthest when cutting the root triangle, nearest afterwards.
    #[default]
    RootOuter,
}

impl fmt::Display for Closest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Closest::Inner => "inner",
            Closest::Outer => "outer",
            Closest::RootOuter => "root-outer",
        })
    }
}

impl FromStr for Closest {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inner" => Ok(Closest::Inner),
            "outer" => Ok(Closest::Outer),
            "root-outer" => Ok(Closest::RootOuter),
            _ => Err(Error::Parse(format!("bad closest-line rule {s:?}"))),
        }
    }
}

/// Per-bundle line caps of a proof-search run; `None` is unbounded.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Profile {
    pub caps: Vec<Option<u8>>,
}

impl Profile {
    pub fn unbounded(bundles: usize) -> Profile {
        Profile {
            caps: vec![None; bundles],
        }
    }

    pub fn bundles(&self) -> usize {
        self.caps.len()
    }

    fn allows(&self, bundle: usize, count: usize) -> bool {
        self.caps[bundle].is_none_or(|c| count < c as usize)
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let caps: Vec<String> = self
            .caps
            .iter()
            .map(|c| c.map_or("*".to_string(), |c| c.to_string()))
            .collect();
        write!(f, "{}", caps.join(","))
    }
}

impl FromStr for Profile {
    type Err = Error;

    /// `4` for four unbounded bundles, or one cap per bundle such as
    /// `*,*,*,*,1`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad profile {s:?}"));
        if !s.contains(',') {
            let n: usize = s.trim().parse().map_err(|_| bad())?;
            if !(3..=8).contains(&n) {
                return Err(Error::InvalidSpec(format!("{n} bundles, expected 3 to 8")));
            }
            return Ok(Profile::unbounded(n));
        }
        let caps = s
            .split(',')
            .map(|c| match c.trim() {
                "*" => Ok(None),
                c => match c.parse::<u8>() {
                    Ok(v) if v > 0 => Ok(Some(v)),
                    _ => Err(bad()),
                },
            })
            .collect::<Result<Vec<_>>>()?;
        if !(3..=8).contains(&caps.len()) {
            return Err(bad());
        }
        Ok(Profile { caps })
    }
}

pub(crate) fn slot(mut ids: [usize; 3]) -> usize {
    ids.sort_unstable();
    let [a, b, c] = ids;
    c * (c - 1) * (c - 2) / 6 + b * (b.max(1) - 1) / 2 + a
}

fn slots_for(lines: usize) -> usize {
    lines * lines.saturating_sub(1) * lines.saturating_sub(2) / 6
}

/// Which of the two tilings a side query refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Arr {
    First,
    Second,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Configuration {
    bundles: Vec<u8>,
    ranks: Vec<u8>,
    signs: Vec<bool>,
    labels: Vec<Label>,
    blocks: Vec<Block>,
}

impl Configuration {
    /// One triangle on three lines of the given bundles, labelled inverted.
    pub fn root(bundles: [u8; 3], positive: bool) -> Configuration {
        assert!(bundles[0] < bundles[1] && bundles[1] < bundles[2]);
        Configuration {
            bundles: bundles.to_vec(),
            ranks: vec![0; 3],
            signs: vec![positive],
            labels: vec![Label::Inverted],
            blocks: Vec::new(),
        }
    }

    /// The restriction of a tiling pair to the zonotope lines `order`, in
    /// that order, labelled by which triangles the pair inverts. The first
    /// three lines must form a triangle.
    pub fn from_pair(first: &Tiling, second: &Tiling, order: &[usize]) -> Result<Configuration> {
        first.same_spec(second)?;
        let table = first.zonotope().table();
        if order.len() < 3 || order.len() > u8::MAX as usize || order.iter().any(|&l| l >= table.line_count()) {
            return Err(Error::OutOfRange(format!("line order {order:?}")));
        }
        let mut sorted = order.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::OutOfRange(format!("repeated line in {order:?}")));
        }
        let bundles: Vec<u8> = order.iter().map(|&l| table.bundle_of(l) as u8).collect();
        let ranks: Vec<u8> = order
            .iter()
            .map(|&l| {
                order
                    .iter()
                    .filter(|&&m| table.bundle_of(m) == table.bundle_of(l) && m < l)
                    .count() as u8
            })
            .collect();
        let n = slots_for(order.len());
        let mut c = Configuration {
            bundles,
            ranks,
            signs: vec![false; n],
            labels: vec![Label::Unknown; n],
            blocks: Vec::new(),
        };
        if !c.is_triangle([0, 1, 2]) {
            return Err(Error::OutOfRange("the first three lines are not a triangle".into()));
        }
        for t in c.triangles().collect::<Vec<_>>() {
            let idx = table
                .triangle_of(order[t[0]], order[t[1]], order[t[2]])
                .expect("distinct bundles");
            let (a, b) = (first.sign(idx), second.sign(idx));
            c.signs[slot(t)] = a == Sign::Positive;
            c.labels[slot(t)] = if a == b { Label::NonInverted } else { Label::Inverted };
        }
        Ok(c)
    }

    pub fn line_count(&self) -> usize {
        self.bundles.len()
    }

    pub fn bundle_of(&self, id: usize) -> usize {
        self.bundles[id] as usize
    }

    pub fn rank_of(&self, id: usize) -> usize {
        self.ranks[id] as usize
    }

    pub fn lines_in_bundle(&self, bundle: usize) -> usize {
        self.bundles.iter().filter(|&&b| b as usize == bundle).count()
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn is_triangle(&self, ids: [usize; 3]) -> bool {
        let [a, b, c] = ids.map(|i| self.bundles[i]);
        a != b && b != c && a != c
    }

    /// Triangles as sorted id triples, in slot order.
    pub fn triangles(&self) -> impl Iterator<Item = [usize; 3]> + '_ {
        let k = self.line_count();
        (2..k)
            .flat_map(move |c| (1..c).flat_map(move |b| (0..b).map(move |a| [a, b, c])))
            .filter(|&t| self.is_triangle(t))
    }

    pub fn sign(&self, ids: [usize; 3]) -> bool {
        self.signs[slot(ids)]
    }

    pub fn label(&self, ids: [usize; 3]) -> Label {
        self.labels[slot(ids)]
    }

    pub fn set_label(&mut self, ids: [usize; 3], label: Label) {
        let s = slot(ids);
        self.labels[s] = label;
    }

    fn sign_in(&self, arr: Arr, ids: [usize; 3]) -> Option<bool> {
        let s = slot(ids);
        match arr {
            Arr::First => Some(self.signs[s]),
            Arr::Second => match self.labels[s] {
                Label::Inverted => Some(!self.signs[s]),
                Label::NonInverted => Some(self.signs[s]),
                Label::Unknown => None,
            },
        }
    }

    /// Whether `u ∩ v` lies on the plus side of `s`; `None` when it depends
    /// on an unknown label of the second arrangement.
    fn side_in(&self, arr: Arr, u: usize, v: usize, s: usize) -> Option<bool> {
        let bs = self.bundles[s];
        if bs == self.bundles[u] {
            return Some(self.ranks[s] < self.ranks[u]);
        }
        if bs == self.bundles[v] {
            return Some(self.ranks[s] < self.ranks[v]);
        }
        let mut ids = [u, v, s];
        ids.sort_unstable_by_key(|&i| self.bundles[i]);
        let role = ids.iter().position(|&i| i == s).unwrap();
        self.sign_in(arr, ids).map(|sign| sign == POLARITY[role])
    }

    pub fn side_plus(&self, u: usize, v: usize, s: usize) -> bool {
        self.side_in(Arr::First, u, v, s).expect("first arrangement is known")
    }

    /// `s` separates vertex `u∩v` from the other two vertices of `(u,v,w)`.
    fn separates(&self, arr: Arr, u: usize, v: usize, w: usize, s: usize) -> Option<bool> {
        let a = self.side_in(arr, u, v, s)?;
        let b = self.side_in(arr, u, w, s)?;
        let c = self.side_in(arr, v, w, s)?;
        Some(a != b && b == c)
    }

    /// Vertex `u∩v` lies in the closed triangle of `tri`.
    fn vertex_inside(&self, u: usize, v: usize, tri: [usize; 3]) -> bool {
        let [p, q, r] = tri;
        [(p, q, r), (p, r, q), (q, r, p)]
            .iter()
            .all(|&(a, b, s)| u == s || v == s || self.side_plus(u, v, s) == self.side_plus(a, b, s))
    }

    /// Lines 0, 1, 2 always form the root triangle, taken inclusion-minimal
    /// among the inverted ones: everything inside it is non-inverted.
    fn inside_root(&self, tri: [usize; 3]) -> bool {
        let [p, q, r] = tri;
        self.vertex_inside(p, q, [0, 1, 2])
            && self.vertex_inside(p, r, [0, 1, 2])
            && self.vertex_inside(q, r, [0, 1, 2])
    }

    /// No other line separates the three vertices.
    pub fn is_minimal(&self, tri: [usize; 3]) -> bool {
        let [p, q, r] = tri;
        (0..self.line_count()).filter(|s| !tri.contains(s)).all(|s| {
            let a = self.side_plus(p, q, s);
            a == self.side_plus(p, r, s) && a == self.side_plus(q, r, s)
        })
    }

    fn quad_ok(&self, ids: [usize; 4]) -> bool {
        let mut ids = ids;
        ids.sort_unstable_by_key(|&i| (self.bundles[i], self.ranks[i]));
        let Some(kind) = QuadKind::classify(ids.map(|i| self.bundles[i] as usize)) else {
            return true;
        };
        let pattern = kind.triples().iter().enumerate().fold(0u8, |acc, (k, t)| {
            acc | (self.sign([ids[t[0]], ids[t[1]], ids[t[2]]]) as u8) << k
        });
        four_line_patterns().allows(kind, pattern)
    }

    /// Every four-line sub-configuration is realizable.
    pub fn is_consistent_arrangement(&self) -> bool {
        let k = self.line_count();
        (0..k).all(|d| (0..d).all(|c| (0..c).all(|b| (0..b).all(|a| self.quad_ok([a, b, c, d])))))
    }

    /// Clauses `¬T ∨ A ∨ (B ∧ C)` of the two cut lemmas, split into
    /// `(T, [A, B])`, `(T, [A, C])` (or `(T, [A])` for the same-bundle
    /// cut), for every cut visible in either arrangement.
    fn clauses(&self, out: &mut Vec<(usize, [usize; 2], usize)>) {
        out.clear();
        let k = self.line_count();
        for tri in self.triangles() {
            let [p, q, r] = tri;
            let t = slot(tri);
            for (u, v, w) in [(p, q, r), (p, r, q), (q, r, p)] {
                for d in (0..k).filter(|d| !tri.contains(d)) {
                    let bd = self.bundles[d];
                    if bd == self.bundles[u] || bd == self.bundles[v] {
                        continue;
                    }
                    let cut = [Arr::First, Arr::Second]
                        .iter()
                        .any(|&arr| self.separates(arr, u, v, w, d) == Some(true));
                    if !cut {
                        continue;
                    }
                    let a = slot([u, v, d]);
                    if bd == self.bundles[w] {
                        out.push((t, [a, a], 1));
                    } else {
                        out.push((t, [a, slot([u, w, d])], 2));
                        out.push((t, [a, slot([v, w, d])], 2));
                    }
                }
            }
        }
    }

    /// Unit propagation of the cut lemmas to a fixpoint. Returns `false` on a
    /// violated implication.
    pub fn propagate(&mut self) -> bool {
        for tri in self.triangles().collect::<Vec<_>>() {
            if tri != [0, 1, 2] && self.inside_root(tri) {
                match self.label(tri) {
                    Label::Inverted => return false,
                    Label::Unknown => self.set_label(tri, Label::NonInverted),
                    Label::NonInverted => {}
                }
            }
        }
        let mut clauses = Vec::new();
        loop {
            self.clauses(&mut clauses);
            let mut changed = false;
            for &(t, rhs, len) in &clauses {
                let rhs = &rhs[..len];
                let lt = self.labels[t];
                if lt == Label::NonInverted || rhs.iter().any(|&x| self.labels[x] == Label::Inverted) {
                    continue;
                }
                let open: Vec<usize> = rhs
                    .iter()
                    .copied()
                    .filter(|&x| self.labels[x] == Label::Unknown)
                    .collect();
                match (lt, open.len()) {
                    (Label::Inverted, 0) => return false,
                    (Label::Inverted, 1) => {
                        self.labels[open[0]] = Label::Inverted;
                        changed = true;
                    }
                    (Label::Unknown, 0) => {
                        self.labels[t] = Label::NonInverted;
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    /// The lemma implications admit this labelling (after propagation).
    pub fn relaxed_consistency(&self) -> bool {
        self.clone().propagate()
    }

    /// Lines ranked above `position` in `bundle` move up; the new line gets
    /// the next id, all its triangles negative and unknown.
    fn with_new_line(&self, bundle: u8, position: u8) -> Configuration {
        let mut c = self.clone();
        for (b, r) in c.bundles.iter().zip(c.ranks.iter_mut()) {
            if *b == bundle && *r >= position {
                *r += 1;
            }
        }
        c.bundles.push(bundle);
        c.ranks.push(position);
        let n = slots_for(c.line_count());
        c.signs.resize(n, false);
        c.labels.resize(n, Label::Unknown);
        for s in slots_for(self.line_count())..n {
            c.labels[s] = Label::Unknown;
        }
        c
    }

    /// One-line extensions cutting `tri` that respect every block and the
    /// profile caps: for each separated vertex `u∩v`, each admissible bundle
    /// and rank position, and each realizable set of new signs. The new
    /// line is extremal within its bundle as chosen by `closest`, which
    /// blocks two sections for that bundle. New inclusion-minimal triangles are
    /// labelled both ways; other new labels come from propagation only.
    pub fn insertions(&self, tri: [usize; 3], profile: &Profile, closest: Closest) -> Vec<Configuration> {
        let mut out = Vec::new();
        let [p, q, r] = tri;
        for (u, v, w) in [(p, q, r), (p, r, q), (q, r, p)] {
            for b in 0..profile.bundles() {
                if b == self.bundle_of(u) || b == self.bundle_of(v) {
                    continue;
                }
                let count = self.lines_in_bundle(b);
                if !profile.allows(b, count) {
                    continue;
                }
                for pos in 0..=count {
                    let base = self.with_new_line(b as u8, pos as u8);
                    for mut ext in base.sign_extensions(u, v, w) {
                        let l = ext.line_count() - 1;
                        let outer = match closest {
                            Closest::Inner => false,
                            Closest::Outer => b != self.bundle_of(w),
                            Closest::RootOuter => self.line_count() == 3,
                        };
                        let blocks = if outer {
                            ext.outer_blocks(u, v, w, l)
                        } else {
                            ext.inner_blocks(u, v, l)
                        };
                        ext.blocks.extend(blocks);
                        ext.blocks.sort_unstable();
                        out.extend(ext.labellings());
                    }
                }
            }
        }
        out
    }

    /// `l` is the line of its bundle closest to `u∩v` among those separating
    /// it: no line of that bundle cuts `(u, v, l)`.
    fn inner_blocks(&self, u: usize, v: usize, l: usize) -> [Block; 2] {
        let b = self.bundles[l];
        [
            Block {
                line: u as u8,
                from: v as u8,
                to: l as u8,
                bundle: b,
            },
            Block {
                line: v as u8,
                from: u as u8,
                to: l as u8,
                bundle: b,
            },
        ]
    }

    /// `l` is the line of its bundle farthest from `u∩v` among those
    /// separating it. It meets `w` beyond one end of the `w`-side, and no
    /// line of its bundle cuts the triangle it forms there with `w` and the
    /// line through that end.
    fn outer_blocks(&self, u: usize, v: usize, w: usize, l: usize) -> [Block; 2] {
        let b = self.bundles[l];
        let x = if self.side_plus(w, l, u) != self.side_plus(v, w, u) {
            u
        } else {
            v
        };
        [
            Block {
                line: x as u8,
                from: l as u8,
                to: w as u8,
                bundle: b,
            },
            Block {
                line: w as u8,
                from: x as u8,
                to: l as u8,
                bundle: b,
            },
        ]
    }

    /// All sign vectors for the last line's triangles such that the
    /// arrangement stays consistent, the line separates `u∩v` in `(u,v,w)`
    /// and it crosses no blocked section of its bundle.
    fn sign_extensions(&self, u: usize, v: usize, w: usize) -> Vec<Configuration> {
        let l = self.line_count() - 1;
        let bl = self.bundles[l];
        let new: Vec<usize> = self.triangles().filter(|t| t[2] == l).map(slot).collect();
        let mut order = vec![usize::MAX; self.signs.len()];
        for (i, &s) in new.iter().enumerate() {
            order[s] = i;
        }
        // each check fires once its last new slot is assigned
        let mut checks: Vec<Vec<Check>> = vec![Vec::new(); new.len() + 1];
        let trigger = |tris: &[[usize; 3]]| -> usize {
            tris.iter()
                .filter(|t| self.is_triangle(**t))
                .map(|&t| order[slot(t)])
                .filter(|&o| o != usize::MAX)
                .map(|o| o + 1)
                .max()
                .unwrap_or(0)
        };
        checks[trigger(&[[u, v, l], [u, w, l], [v, w, l]])].push(Check::Cut);
        for (i, blk) in self.blocks.iter().enumerate() {
            if blk.bundle == bl {
                let (x, a, b) = (blk.line as usize, blk.from as usize, blk.to as usize);
                checks[trigger(&[[x, a, l], [x, b, l]])].push(Check::Block(i));
            }
        }
        for c in 2..l {
            for b in 1..c {
                for a in 0..b {
                    let quad = [a, b, c, l];
                    let tris = [[a, b, l], [a, c, l], [b, c, l]];
                    checks[trigger(&tris)].push(Check::Quad(quad));
                }
            }
        }
        let mut out = Vec::new();
        let mut work = self.clone();
        if work.passes(&checks[0], u, v, w) {
            work.extend_signs(&new, 0, &checks, (u, v, w), &mut out);
        }
        out
    }

    fn passes(&self, checks: &[Check], u: usize, v: usize, w: usize) -> bool {
        let l = self.line_count() - 1;
        checks.iter().all(|c| match *c {
            Check::Cut => self.separates(Arr::First, u, v, w, l) == Some(true),
            Check::Block(i) => {
                let blk = self.blocks[i];
                let x = blk.line as usize;
                self.side_plus(x, blk.from as usize, l) == self.side_plus(x, blk.to as usize, l)
            }
            Check::Quad(q) => self.quad_ok(q),
        })
    }

    fn extend_signs(
        &mut self,
        new: &[usize],
        i: usize,
        checks: &[Vec<Check>],
        uvw: (usize, usize, usize),
        out: &mut Vec<Configuration>,
    ) {
        if i == new.len() {
            out.push(self.clone());
            return;
        }
        for value in [false, true] {
            self.signs[new[i]] = value;
            if self.passes(&checks[i + 1], uvw.0, uvw.1, uvw.2) {
                self.extend_signs(new, i + 1, checks, uvw, out);
            }
        }
        self.signs[new[i]] = false;
    }

    /// Both labels on each new inclusion-minimal triangle, then propagation.
    fn labellings(&self) -> Vec<Configuration> {
        let l = self.line_count() - 1;
        let minimal: Vec<[usize; 3]> = self.triangles().filter(|t| t[2] == l && self.is_minimal(*t)).collect();
        let mut out = Vec::new();
        for mask in 0..1u32 << minimal.len() {
            let mut c = self.clone();
            for (i, &t) in minimal.iter().enumerate() {
                let label = if mask >> i & 1 == 1 {
                    Label::Inverted
                } else {
                    Label::NonInverted
                };
                c.set_label(t, label);
            }
            if c.propagate() {
                out.push(c);
            }
        }
        out
    }

    /// Inverted inclusion-minimal triangles through the last inserted line.
    pub fn new_inverted_minimal(&self) -> Vec<[usize; 3]> {
        let l = self.line_count() - 1;
        self.triangles()
            .filter(|t| t[2] == l && self.label(*t) == Label::Inverted && self.is_minimal(*t))
            .collect()
    }

    pub fn unknown_labels(&self) -> usize {
        self.triangles().filter(|t| self.label(*t) == Label::Unknown).count()
    }

    /// Share of (line, other bundle) pairs carrying at least one block.
    pub fn blocked_fraction(&self, bundles: usize) -> f64 {
        let k = self.line_count();
        let total = k * (bundles - 1);
        let mut marked: Vec<(u8, u8)> = self.blocks.iter().map(|b| (b.line, b.bundle)).collect();
        marked.sort_unstable();
        marked.dedup();
        marked.len() as f64 / total.max(1) as f64
    }
}

#[derive(Clone, Copy, Debug)]
enum Check {
    Cut,
    Block(usize),
    Quad([usize; 4]),
}

impl fmt::Display for Configuration {
    /// `lines=b.r,... signs=+-. labels=IN?. blocks=line/from/to/bundle,...`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lines: Vec<String> = self
            .bundles
            .iter()
            .zip(&self.ranks)
            .map(|(b, r)| format!("{b}.{r}"))
            .collect();
        let k = self.line_count();
        let mut signs = String::new();
        let mut labels = String::new();
        for c in 2..k {
            for b in 1..c {
                for a in 0..b {
                    let t = [a, b, c];
                    if self.is_triangle(t) {
                        signs.push(if self.sign(t) { '+' } else { '-' });
                        labels.push(self.label(t).as_char());
                    } else {
                        signs.push('.');
                        labels.push('.');
                    }
                }
            }
        }
        let blocks: Vec<String> = self
            .blocks
            .iter()
            .map(|b| format!("{}/{}/{}/{}", b.line, b.from, b.to, b.bundle))
            .collect();
        write!(
            f,
            "lines={} signs={} labels={} blocks={}",
            lines.join(","),
            signs,
            labels,
            if blocks.is_empty() {
                "-".to_string()
            } else {
                blocks.join(",")
            }
        )
    }
}

impl FromStr for Configuration {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("bad configuration {what}: {s:?}"));
        let mut fields = std::collections::HashMap::new();
        for part in s.split_whitespace() {
            let (k, v) = part.split_once('=').ok_or_else(|| bad("field"))?;
            fields.insert(k, v);
        }
        let get = |k: &str| fields.get(k).copied().ok_or_else(|| bad(k));
        let mut bundles = Vec::new();
        let mut ranks = Vec::new();
        for l in get("lines")?.split(',') {
            let (b, r) = l.split_once('.').ok_or_else(|| bad("line"))?;
            bundles.push(b.parse::<u8>().map_err(|_| bad("line"))?);
            ranks.push(r.parse::<u8>().map_err(|_| bad("line"))?);
        }
        let n = slots_for(bundles.len());
        let (sg, lb) = (get("signs")?, get("labels")?);
        if sg.len() != n || lb.len() != n {
            return Err(bad("slot count"));
        }
        let signs = sg.chars().map(|c| c == '+').collect();
        let labels = lb
            .chars()
            .map(|c| match c {
                'I' => Ok(Label::Inverted),
                'N' => Ok(Label::NonInverted),
                '?' | '.' => Ok(Label::Unknown),
                _ => Err(bad("label")),
            })
            .collect::<Result<_>>()?;
        let mut blocks = Vec::new();
        let bl = get("blocks")?;
        if bl != "-" {
            for b in bl.split(',') {
                let v: Vec<u8> = b
                    .split('/')
                    .map(|x| x.parse().map_err(|_| bad("block")))
                    .collect::<Result<_>>()?;
                let [line, from, to, bundle] = v[..] else {
                    return Err(bad("block"));
                };
                blocks.push(Block { line, from, to, bundle });
            }
        }
        Ok(Configuration {
            bundles,
            ranks,
            signs,
            labels,
            blocks,
        })
    }
}
