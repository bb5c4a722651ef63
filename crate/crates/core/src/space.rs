//! Tiling spaces: enumeration, the flip graph, flip- and Hamming-distances,
//! greedy reduction and deficiency certificates.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, VecDeque};
use std::fmt;
use std::io::{BufRead, Write};
use std::sync::Arc;

use hashbrown::HashTable;

use crate::arrangement::{TriangleRef, ZonotopeSpec};
use crate::error::{Error, Result};
use crate::tiling::{bit, ones, parse_header, toggle, Tiling, Zonotope};

fn hash_words(words: &[u64]) -> u64 {
    let mut h = 0x243f_6a88_85a3_08d3u64;
    for &w in words {
        h = (h ^ w).wrapping_mul(0x9e37_79b9_7f4a_7c15);
        h ^= h >> 29;
    }
    h
}

/// Flat, append-only set of sign vectors with insertion-order ids.
#[derive(Clone, Default)]
pub(crate) struct SignStore {
    words: usize,
    data: Vec<u64>,
    index: HashTable<u32>,
}

impl SignStore {
    pub(crate) fn new(words: usize) -> Self {
        SignStore {
            words,
            data: Vec::new(),
            index: HashTable::new(),
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.data.len() / self.words
    }

    pub(crate) fn get(&self, id: usize) -> &[u64] {
        &self.data[id * self.words..(id + 1) * self.words]
    }

    pub(crate) fn find(&self, signs: &[u64]) -> Option<usize> {
        let w = self.words;
        let data = &self.data;
        self.index
            .find(hash_words(signs), |&id| {
                &data[id as usize * w..(id as usize + 1) * w] == signs
            })
            .map(|&id| id as usize)
    }

    /// Returns the id of `signs` and whether it was new.
    pub(crate) fn insert(&mut self, signs: &[u64]) -> (usize, bool) {
        let w = self.words;
        let h = hash_words(signs);
        let data = &self.data;
        if let Some(&id) = self
            .index
            .find(h, |&id| &data[id as usize * w..(id as usize + 1) * w] == signs)
        {
            return (id as usize, false);
        }
        let id = self.len();
        assert!(id < u32::MAX as usize, "sign store is full");
        self.data.extend_from_slice(signs);
        let data = &self.data;
        self.index.insert_unique(h, id as u32, |&id| {
            hash_words(&data[id as usize * w..(id as usize + 1) * w])
        });
        (id, true)
    }
}

/// All tilings reachable by flips from the seed, in breadth-first order.
pub struct TilingSpace {
    zono: Arc<Zonotope>,
    store: SignStore,
    complete: bool,
}

/// Breadth-first closure under flips from the seed tiling. Fails with
/// [`Error::BudgetExceeded`] when the space has more than `node_limit`
/// tilings.
pub fn enumerate_space(spec: &ZonotopeSpec, node_limit: usize) -> Result<TilingSpace> {
    let space = enumerate_space_partial(spec, node_limit);
    if !space.complete {
        return Err(Error::BudgetExceeded(format!(
            "more than {node_limit} tilings of {spec}"
        )));
    }
    Ok(space)
}

/// Like [`enumerate_space`] but returns what was found so far when the limit
/// is hit; [`TilingSpace::is_complete`] tells the two cases apart.
pub fn enumerate_space_partial(spec: &ZonotopeSpec, node_limit: usize) -> TilingSpace {
    let zono = Zonotope::new(spec.clone());
    let w = zono.words();
    let mut store = SignStore::new(w);
    store.insert(zono.seed_signs());
    let mut scratch = Vec::new();
    let mut mask = vec![0u64; w];
    let mut next = vec![0u64; w];
    let mut head = 0;
    let mut complete = true;
    'bfs: while head < store.len() {
        let cur: Vec<u64> = store.get(head).to_vec();
        zono.minimal_mask(&cur, &mut scratch, &mut mask);
        for t in ones(&mask) {
            next.copy_from_slice(&cur);
            toggle(&mut next, t);
            if store.find(&next).is_none() {
                if store.len() >= node_limit {
                    complete = false;
                    break 'bfs;
                }
                store.insert(&next);
            }
        }
        head += 1;
    }
    TilingSpace { zono, store, complete }
}

/// Compressed adjacency of the flip graph; `flips[e]` is the triangle
/// toggled along edge `e`.
pub struct FlipGraph {
    offsets: Vec<u32>,
    targets: Vec<u32>,
    flips: Vec<u32>,
}

impl FlipGraph {
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        let r = self.offsets[v] as usize..self.offsets[v + 1] as usize;
        self.targets[r.clone()]
            .iter()
            .zip(&self.flips[r])
            .map(|(&t, &f)| (t as usize, f as usize))
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    /// Breadth-first distances from `src`; `u32::MAX` for unreachable nodes.
    pub fn distances_from(&self, src: usize) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.node_count()];
        let mut queue = VecDeque::from([src]);
        dist[src] = 0;
        while let Some(v) = queue.pop_front() {
            for (u, _) in self.neighbors(v) {
                if dist[u] == u32::MAX {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        dist
    }
}

impl TilingSpace {
    pub fn len(&self) -> usize {
        self.store.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn zonotope(&self) -> &Arc<Zonotope> {
        &self.zono
    }

    pub fn spec(&self) -> &ZonotopeSpec {
        self.zono.spec()
    }

    pub fn signs(&self, id: usize) -> &[u64] {
        self.store.get(id)
    }

    pub fn tiling(&self, id: usize) -> Tiling {
        Tiling::from_words(&self.zono, self.signs(id)).expect("stored vectors fit")
    }

    pub fn index_of(&self, tiling: &Tiling) -> Option<usize> {
        if tiling.spec() != self.spec() {
            return None;
        }
        self.store.find(tiling.words())
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u64]> + '_ {
        (0..self.len()).map(|i| self.signs(i))
    }

    pub fn flip_graph(&self) -> FlipGraph {
        let w = self.zono.words();
        let mut offsets = vec![0u32];
        let (mut targets, mut flips) = (Vec::new(), Vec::new());
        let (mut scratch, mut mask, mut next) = (Vec::new(), vec![0u64; w], vec![0u64; w]);
        for v in 0..self.len() {
            let cur = self.signs(v);
            self.zono.minimal_mask(cur, &mut scratch, &mut mask);
            for t in ones(&mask) {
                next.copy_from_slice(cur);
                toggle(&mut next, t);
                if let Some(u) = self.store.find(&next) {
                    targets.push(u as u32);
                    flips.push(t as u32);
                }
            }
            offsets.push(targets.len() as u32);
        }
        FlipGraph {
            offsets,
            targets,
            flips,
        }
    }

    /// Space dump: header line then one sign string per tiling.
    pub fn write_dump<W: Write>(&self, out: &mut W) -> Result<()> {
        writeln!(out, "zonotope: {}", self.spec())?;
        for id in 0..self.len() {
            writeln!(out, "{}", self.tiling(id).sign_string())?;
        }
        Ok(())
    }
}

/// Reads a space dump back as a list of tilings.
pub fn read_dump<R: BufRead>(input: R) -> Result<Vec<Tiling>> {
    let mut lines = input.lines();
    let header = lines.next().transpose()?;
    let zono = Zonotope::new(parse_header(header.as_deref())?);
    let mut out = Vec::new();
    for line in lines {
        let line = line?;
        if !line.trim().is_empty() {
            out.push(Tiling::from_sign_string(&zono, line.trim_end())?);
        }
    }
    Ok(out)
}

pub(crate) fn hamming_words(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x ^ y).count_ones() as usize).sum()
}

/// Number of triangles with different signs.
pub fn hamming_distance(t1: &Tiling, t2: &Tiling) -> Result<usize> {
    t1.same_spec(t2)?;
    Ok(hamming_words(t1.words(), t2.words()))
}

/// Triangles with different signs, in index order.
pub fn inverted_triangles(t1: &Tiling, t2: &Tiling) -> Result<Vec<TriangleRef>> {
    t1.same_spec(t2)?;
    let diff: Vec<u64> = t1.words().iter().zip(t2.words()).map(|(a, b)| a ^ b).collect();
    let table = t1.zonotope().table();
    ones(&diff).map(|t| table.triangle_ref(t)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    AStar,
    Bfs,
    Bidirectional,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "astar" => Ok(Method::AStar),
            "bfs" => Ok(Method::Bfs),
            "bidirectional" => Ok(Method::Bidirectional),
            _ => Err(Error::Parse(format!(
                "unknown method {s:?} (astar, bfs, bidirectional)"
            ))),
        }
    }
}

/// Both distances between two tilings, with a shortest flip sequence.
#[derive(Clone, Debug)]
pub struct DistanceReport {
    pub first: Tiling,
    pub second: Tiling,
    pub hamming: usize,
    pub flip: usize,
    pub path: Option<Vec<TriangleRef>>,
    /// Tilings stored by the search.
    pub visited: usize,
}

impl fmt::Display for DistanceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "hamming: {}", self.hamming)?;
        writeln!(f, "flip: {}", self.flip)?;
        writeln!(
            f,
            "parity: {}",
            if (self.flip - self.hamming).is_multiple_of(2) {
                "ok"
            } else {
                "MISMATCH"
            }
        )?;
        if let Some(path) = &self.path {
            write!(f, "path:")?;
            for t in path {
                write!(f, " {t}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Search tree over sign vectors: node `i` came from `parent[i]` by
/// toggling `via[i]`.
struct Tree {
    store: SignStore,
    parent: Vec<u32>,
    via: Vec<u32>,
}

impl Tree {
    fn new(root: &[u64]) -> Tree {
        let mut store = SignStore::new(root.len());
        store.insert(root);
        Tree {
            store,
            parent: vec![u32::MAX],
            via: vec![u32::MAX],
        }
    }

    fn add(&mut self, signs: &[u64], parent: usize, via: usize) -> Option<usize> {
        let (id, new) = self.store.insert(signs);
        if !new {
            return None;
        }
        self.parent.push(parent as u32);
        self.via.push(via as u32);
        Some(id)
    }

    /// Flips from the root down to `id`.
    fn path_to(&self, mut id: usize) -> Vec<usize> {
        let mut path = Vec::new();
        while self.parent[id] != u32::MAX {
            path.push(self.via[id] as usize);
            id = self.parent[id] as usize;
        }
        path.reverse();
        path
    }
}

struct Expander {
    zono: Arc<Zonotope>,
    scratch: Vec<u64>,
    mask: Vec<u64>,
}

impl Expander {
    fn new(zono: &Arc<Zonotope>) -> Self {
        Expander {
            zono: zono.clone(),
            scratch: Vec::new(),
            mask: vec![0; zono.words()],
        }
    }

    fn flips(&mut self, signs: &[u64]) -> Vec<usize> {
        self.zono.minimal_mask(signs, &mut self.scratch, &mut self.mask);
        ones(&self.mask).collect()
    }
}

fn budget_error(budget: usize) -> Error {
    Error::BudgetExceeded(format!("search stored more than {budget} tilings"))
}

fn astar(zono: &Arc<Zonotope>, a: &[u64], b: &[u64], budget: usize) -> Result<(Vec<usize>, usize)> {
    let mut tree = Tree::new(a);
    let mut exp = Expander::new(zono);
    let mut g = vec![0u32];
    let mut closed = vec![false];
    // (f, larger g first, creation order)
    let mut open = BinaryHeap::new();
    open.push(Reverse((hamming_words(a, b), Reverse(0u32), 0usize)));
    let mut next = vec![0u64; a.len()];
    while let Some(Reverse((_, Reverse(gv), id))) = open.pop() {
        if closed[id] || gv != g[id] {
            continue;
        }
        let cur = tree.store.get(id).to_vec();
        if cur == b {
            return Ok((tree.path_to(id), tree.store.len()));
        }
        closed[id] = true;
        for t in exp.flips(&cur) {
            next.copy_from_slice(&cur);
            toggle(&mut next, t);
            let ng = gv + 1;
            match tree.store.find(&next) {
                Some(u) => {
                    if !closed[u] && ng < g[u] {
                        g[u] = ng;
                        tree.parent[u] = id as u32;
                        tree.via[u] = t as u32;
                        open.push(Reverse((ng as usize + hamming_words(&next, b), Reverse(ng), u)));
                    }
                }
                None => {
                    if tree.store.len() >= budget {
                        return Err(budget_error(budget));
                    }
                    let u = tree.add(&next, id, t).expect("new");
                    g.push(ng);
                    closed.push(false);
                    open.push(Reverse((ng as usize + hamming_words(&next, b), Reverse(ng), u)));
                }
            }
        }
    }
    Err(Error::NotATiling("target is not reachable by flips".into()))
}

fn bfs(zono: &Arc<Zonotope>, a: &[u64], b: &[u64], budget: usize) -> Result<(Vec<usize>, usize)> {
    let mut tree = Tree::new(a);
    let mut exp = Expander::new(zono);
    let mut next = vec![0u64; a.len()];
    let mut head = 0;
    if a == b {
        return Ok((Vec::new(), 1));
    }
    while head < tree.store.len() {
        let cur = tree.store.get(head).to_vec();
        for t in exp.flips(&cur) {
            next.copy_from_slice(&cur);
            toggle(&mut next, t);
            if tree.store.find(&next).is_some() {
                continue;
            }
            if tree.store.len() >= budget {
                return Err(budget_error(budget));
            }
            let u = tree.add(&next, head, t).expect("new");
            if next == b {
                return Ok((tree.path_to(u), tree.store.len()));
            }
        }
        head += 1;
    }
    Err(Error::NotATiling("target is not reachable by flips".into()))
}

fn bidirectional(zono: &Arc<Zonotope>, a: &[u64], b: &[u64], budget: usize) -> Result<(Vec<usize>, usize)> {
    if a == b {
        return Ok((Vec::new(), 1));
    }
    let mut sides = [Tree::new(a), Tree::new(b)];
    let mut frontier = [vec![0usize], vec![0usize]];
    let mut exp = Expander::new(zono);
    let mut next = vec![0u64; a.len()];
    loop {
        let s = usize::from(frontier[1].len() < frontier[0].len());
        if frontier[s].is_empty() {
            return Err(Error::NotATiling("target is not reachable by flips".into()));
        }
        let mut layer = Vec::new();
        // best meeting: (other-side id, this-side id)
        let mut meet: Option<(usize, usize)> = None;
        for &v in &frontier[s] {
            let cur = sides[s].store.get(v).to_vec();
            for t in exp.flips(&cur) {
                next.copy_from_slice(&cur);
                toggle(&mut next, t);
                if sides[s].store.find(&next).is_some() {
                    continue;
                }
                if sides[0].store.len() + sides[1].store.len() >= budget {
                    return Err(budget_error(budget));
                }
                let u = sides[s].add(&next, v, t).expect("new");
                layer.push(u);
                if let Some(o) = sides[1 - s].store.find(&next) {
                    let better =
                        meet.is_none_or(|(mo, _)| sides[1 - s].path_to(o).len() < sides[1 - s].path_to(mo).len());
                    if better {
                        meet = Some((o, u));
                    }
                }
            }
        }
        if let Some((o, u)) = meet {
            let (fwd, bwd) = if s == 0 {
                (sides[0].path_to(u), sides[1].path_to(o))
            } else {
                (sides[0].path_to(o), sides[1].path_to(u))
            };
            let mut path = fwd;
            path.extend(bwd.into_iter().rev());
            return Ok((path, sides[0].store.len() + sides[1].store.len()));
        }
        frontier[s] = layer;
    }
}

/// Exact flip-distance with a witness path. `budget` caps the number of
/// tilings the search may store.
pub fn flip_distance(t1: &Tiling, t2: &Tiling, method: Method, budget: usize) -> Result<DistanceReport> {
    t1.same_spec(t2)?;
    let zono = t1.zonotope();
    let (a, b) = (t1.words(), t2.words());
    let (path, visited) = match method {
        Method::AStar => astar(zono, a, b, budget)?,
        Method::Bfs => bfs(zono, a, b, budget)?,
        Method::Bidirectional => bidirectional(zono, a, b, budget)?,
    };
    let table = zono.table();
    Ok(DistanceReport {
        first: t1.clone(),
        second: t2.clone(),
        hamming: hamming_words(a, b),
        flip: path.len(),
        path: Some(path.into_iter().map(|t| table.triangle_ref(t)).collect::<Result<_>>()?),
        visited,
    })
}

/// Applies a flip sequence, checking that every flip is legal.
pub fn replay(start: &Tiling, path: &[TriangleRef]) -> Result<Tiling> {
    path.iter().try_fold(start.clone(), |t, tri| t.flip(tri))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GreedyOutcome {
    pub steps: usize,
    pub reached: bool,
}

/// Flips in `a` the lowest-index inverted inclusion-minimal triangle until
/// none is left; returns the number of flips and whether `a` became `b`.
pub(crate) fn greedy_words(
    zono: &Zonotope,
    a: &mut [u64],
    b: &[u64],
    scratch: &mut Vec<u64>,
    mask: &mut [u64],
) -> GreedyOutcome {
    let mut steps = 0;
    loop {
        zono.minimal_mask(a, scratch, mask);
        let pick = mask
            .iter()
            .zip(a.iter().zip(b))
            .enumerate()
            .find_map(|(w, (m, (x, y)))| {
                let hit = m & (x ^ y);
                (hit != 0).then(|| w * 64 + hit.trailing_zeros() as usize)
            });
        match pick {
            Some(t) => {
                toggle(a, t);
                steps += 1;
            }
            None => return GreedyOutcome { steps, reached: a == b },
        }
    }
}

pub fn greedy_reduce(t1: &Tiling, t2: &Tiling) -> Result<GreedyOutcome> {
    t1.same_spec(t2)?;
    let mut a = t1.words().to_vec();
    let mut mask = vec![0u64; a.len()];
    Ok(greedy_words(
        t1.zonotope(),
        &mut a,
        t2.words(),
        &mut Vec::new(),
        &mut mask,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairSide {
    First,
    Second,
}

impl fmt::Display for PairSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairSide::First => "first",
            PairSide::Second => "second",
        })
    }
}

/// One tiling of a pair has no inverted inclusion-minimal triangle, so any
/// flip sequence starts by toggling a non-inverted triangle.
#[derive(Clone, Debug)]
pub struct DeficiencyCertificate {
    pub side: PairSide,
    pub hamming: usize,
    /// Inclusion-minimal triangles of the certified side, all with equal
    /// signs in both tilings.
    pub minimal: Vec<TriangleRef>,
}

impl DeficiencyCertificate {
    /// Lower bound on the flip-distance.
    pub fn flip_lower_bound(&self) -> usize {
        self.hamming + 2
    }
}

fn has_inverted_minimal(zono: &Zonotope, a: &[u64], b: &[u64], scratch: &mut Vec<u64>, mask: &mut [u64]) -> bool {
    zono.minimal_mask(a, scratch, mask);
    mask.iter().zip(a.iter().zip(b)).any(|(m, (x, y))| m & (x ^ y) != 0)
}

pub fn deficiency_certificate(t1: &Tiling, t2: &Tiling) -> Result<Option<DeficiencyCertificate>> {
    t1.same_spec(t2)?;
    let hamming = hamming_words(t1.words(), t2.words());
    if hamming == 0 {
        return Err(Error::IdenticalTilings);
    }
    let zono = t1.zonotope();
    let mut mask = vec![0u64; zono.words()];
    let mut scratch = Vec::new();
    for (side, a, b) in [(PairSide::First, t1, t2), (PairSide::Second, t2, t1)] {
        if !has_inverted_minimal(zono, a.words(), b.words(), &mut scratch, &mut mask) {
            let minimal = ones(&mask)
                .map(|t| zono.table().triangle_ref(t))
                .collect::<Result<_>>()?;
            return Ok(Some(DeficiencyCertificate { side, hamming, minimal }));
        }
    }
    Ok(None)
}

/// A pair whose flip-distance exceeds its Hamming-distance.
#[derive(Clone, Debug)]
pub struct DeficientPair {
    pub first: Tiling,
    pub second: Tiling,
    pub hamming: usize,
    pub flip: usize,
    pub certified: Option<PairSide>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    /// Every ordered pair of the enumerated space.
    Exhaustive,
    /// Random pairs; uniform over the space when it is enumerable, otherwise
    /// endpoints of independent random flip walks of `walk` steps.
    Sample { pairs: usize, seed: u64, walk: usize },
}

/// Limits for [`search_deficient_pairs`].
#[derive(Clone, Copy, Debug)]
pub struct SearchBudget {
    pub tilings: usize,
    pub search_nodes: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            tilings: 20_000_000,
            search_nodes: 5_000_000,
        }
    }
}

/// Spaces at most this large get all-pairs breadth-first distances.
pub const ALL_PAIRS_LIMIT: usize = 100_000;

fn certified_side(zono: &Zonotope, a: &[u64], b: &[u64]) -> Option<PairSide> {
    let mut mask = vec![0u64; zono.words()];
    let mut scratch = Vec::new();
    if !has_inverted_minimal(zono, a, b, &mut scratch, &mut mask) {
        Some(PairSide::First)
    } else if !has_inverted_minimal(zono, b, a, &mut scratch, &mut mask) {
        Some(PairSide::Second)
    } else {
        None
    }
}

pub fn search_deficient_pairs(
    spec: &ZonotopeSpec,
    mode: SearchMode,
    budget: SearchBudget,
) -> Result<Vec<DeficientPair>> {
    match mode {
        SearchMode::Exhaustive => {
            let space = enumerate_space(spec, budget.tilings)?;
            exhaustive_deficient(&space, budget)
        }
        SearchMode::Sample { pairs, seed, walk } => {
            let space = enumerate_space_partial(spec, budget.tilings.min(ALL_PAIRS_LIMIT * 10));
            let mut sampler = PairSampler::new(&space, seed, walk);
            let zono = space.zonotope().clone();
            let mut found = Vec::new();
            for _ in 0..pairs {
                let (a, b) = sampler.next_pair();
                if a == b {
                    continue;
                }
                let Some(side) = certified_side(&zono, &a, &b) else {
                    continue;
                };
                let (t1, t2) = (Tiling::from_words(&zono, &a)?, Tiling::from_words(&zono, &b)?);
                let report = flip_distance(&t1, &t2, Method::AStar, budget.search_nodes)?;
                found.push(DeficientPair {
                    first: t1,
                    second: t2,
                    hamming: report.hamming,
                    flip: report.flip,
                    certified: Some(side),
                });
            }
            Ok(found)
        }
    }
}

fn exhaustive_deficient(space: &TilingSpace, budget: SearchBudget) -> Result<Vec<DeficientPair>> {
    let zono = space.zonotope();
    let mut found = Vec::new();
    let n = space.len();
    if n <= ALL_PAIRS_LIMIT {
        let graph = space.flip_graph();
        for a in 0..n {
            let dist = graph.distances_from(a);
            for (b, &d) in dist.iter().enumerate() {
                let h = hamming_words(space.signs(a), space.signs(b));
                if d as usize != h {
                    found.push(DeficientPair {
                        first: space.tiling(a),
                        second: space.tiling(b),
                        hamming: h,
                        flip: d as usize,
                        certified: certified_side(zono, space.signs(a), space.signs(b)),
                    });
                }
            }
        }
        return Ok(found);
    }
    // greedy success proves equality; everything else goes to A*
    let mut scratch = Vec::new();
    let mut mask = vec![0u64; zono.words()];
    let mut a = vec![0u64; zono.words()];
    for i in 0..n {
        for j in 0..n {
            a.copy_from_slice(space.signs(i));
            if greedy_words(zono, &mut a, space.signs(j), &mut scratch, &mut mask).reached {
                continue;
            }
            let (t1, t2) = (space.tiling(i), space.tiling(j));
            let report = flip_distance(&t1, &t2, Method::AStar, budget.search_nodes)?;
            found.push(DeficientPair {
                certified: certified_side(zono, t1.words(), t2.words()),
                first: t1,
                second: t2,
                hamming: report.hamming,
                flip: report.flip,
            });
        }
    }
    Ok(found)
}

/// Class index of each pair under the size-preserving isometries combined
/// with swapping the two tilings, numbered by first appearance.
pub fn isometry_classes(pairs: &[DeficientPair]) -> Result<Vec<usize>> {
    let Some(first) = pairs.first() else {
        return Ok(Vec::new());
    };
    let group = crate::symmetry::isometries(first.first.spec().sizes());
    let mut seen: HashMap<(Vec<u64>, Vec<u64>), usize> = HashMap::new();
    let mut out = Vec::with_capacity(pairs.len());
    for p in pairs {
        let mut key: Option<(Vec<u64>, Vec<u64>)> = None;
        for g in &group {
            let (a, b) = (g.apply(&p.first)?, g.apply(&p.second)?);
            for k in [
                (a.words().to_vec(), b.words().to_vec()),
                (b.words().to_vec(), a.words().to_vec()),
            ] {
                if key.as_ref().is_none_or(|cur| k < *cur) {
                    key = Some(k);
                }
            }
        }
        let next = seen.len();
        out.push(*seen.entry(key.expect("group has the identity")).or_insert(next));
    }
    Ok(out)
}

/// Deterministic source of tiling pairs.
pub struct PairSampler<'a> {
    space: &'a TilingSpace,
    rng: rand_chacha::ChaCha8Rng,
    walk: usize,
    expander: Expander,
}

impl<'a> PairSampler<'a> {
    /// Uniform pairs if `space` is complete, random-walk endpoints otherwise.
    pub fn new(space: &'a TilingSpace, seed: u64, walk: usize) -> Self {
        use rand::SeedableRng;
        PairSampler {
            space,
            rng: rand_chacha::ChaCha8Rng::seed_from_u64(seed),
            walk,
            expander: Expander::new(space.zonotope()),
        }
    }

    fn one(&mut self) -> Vec<u64> {
        use rand::Rng;
        if self.space.is_complete() {
            let i = self.rng.gen_range(0..self.space.len());
            return self.space.signs(i).to_vec();
        }
        let mut cur = self.space.zonotope().seed_signs().to_vec();
        for _ in 0..self.walk {
            let flips = self.expander.flips(&cur);
            if flips.is_empty() {
                break;
            }
            let t = flips[self.rng.gen_range(0..flips.len())];
            toggle(&mut cur, t);
        }
        cur
    }

    pub fn next_pair(&mut self) -> (Vec<u64>, Vec<u64>) {
        (self.one(), self.one())
    }
}

/// Whether equality of the two distances is predicted for the
/// given bundle sizes: at most four bundles, or five with a singleton bundle
/// or all sizes two.
pub fn equality_predicted(sizes: &[u32]) -> bool {
    match sizes.len() {
        0..=4 => true,
        5 => sizes.contains(&1) || sizes.iter().all(|&a| a == 2),
        _ => false,
    }
}

#[derive(Clone, Debug)]
pub struct EqualityReport {
    pub spec: ZonotopeSpec,
    pub predicted: bool,
    pub tilings: usize,
    pub pairs_checked: u64,
    /// Ordered pairs whose first tiling has no inverted minimal triangle.
    pub stuck_pairs: u64,
    pub exhaustive: bool,
}

impl EqualityReport {
    pub fn equality_holds(&self) -> bool {
        self.stuck_pairs == 0
    }

    pub fn agrees_with_prediction(&self) -> bool {
        self.equality_holds() == self.predicted
    }
}

/// Exhaustive equality check. Equality holds on the whole space iff every
/// ordered pair of distinct tilings has an inverted inclusion-minimal
/// triangle in the first one: then greedy reduction succeeds everywhere,
/// otherwise the stuck pair needs at least two extra flips.
///
/// Tilings are stored column-wise (one bitset per triangle), and for each
/// tiling the columns of its minimal triangles are intersected.
pub fn check_equality_exhaustive(space: &TilingSpace) -> EqualityReport {
    let zono = space.zonotope();
    let n = space.len();
    let t = zono.triangle_count();
    let blocks = n.div_ceil(64);
    let mut columns = vec![0u64; t * blocks];
    for id in 0..n {
        for tri in ones(space.signs(id)) {
            columns[tri * blocks + id / 64] |= 1 << (id % 64);
        }
    }
    let tail = if n.is_multiple_of(64) {
        u64::MAX
    } else {
        (1u64 << (n % 64)) - 1
    };
    let mut scratch = Vec::new();
    let mut mask = vec![0u64; zono.words()];
    let mut stuck = 0u64;
    let mut live: Vec<(usize, u64)> = Vec::with_capacity(blocks);
    for id in 0..n {
        let signs = space.signs(id);
        zono.minimal_mask(signs, &mut scratch, &mut mask);
        live.clear();
        live.extend((0..blocks).map(|b| (b, if b + 1 == blocks { tail } else { u64::MAX })));
        for tri in ones(&mask) {
            let col = &columns[tri * blocks..(tri + 1) * blocks];
            let flip = if bit(signs, tri) { 0 } else { u64::MAX };
            live.retain_mut(|(b, w)| {
                *w &= col[*b] ^ flip;
                *w != 0
            });
            if live.len() == 1 && live[0].1.count_ones() == 1 {
                break;
            }
        }
        let agreeing: u64 = live.iter().map(|(_, w)| w.count_ones() as u64).sum();
        stuck += agreeing - 1;
    }
    EqualityReport {
        spec: space.spec().clone(),
        predicted: equality_predicted(space.spec().sizes()),
        tilings: n,
        pairs_checked: (n as u64) * (n as u64),
        stuck_pairs: stuck,
        exhaustive: true,
    }
}

/// Equality on sampled pairs: greedy reduction must reach the target in
/// exactly Hamming-distance steps.
pub fn check_equality_sampled(space: &TilingSpace, pairs: usize, seed: u64) -> EqualityReport {
    let zono = space.zonotope();
    let mut sampler = PairSampler::new(space, seed, 4 * zono.triangle_count());
    let mut scratch = Vec::new();
    let mut mask = vec![0u64; zono.words()];
    let mut stuck = 0;
    for _ in 0..pairs {
        let (mut a, b) = sampler.next_pair();
        let h = hamming_words(&a, &b);
        let out = greedy_words(zono, &mut a, &b, &mut scratch, &mut mask);
        if !out.reached || out.steps != h {
            stuck += 1;
        }
    }
    EqualityReport {
        spec: space.spec().clone(),
        predicted: equality_predicted(space.spec().sizes()),
        tilings: space.len(),
        pairs_checked: pairs as u64,
        stuck_pairs: stuck,
        exhaustive: false,
    }
}

/// Exhaustive check when the space fits `node_limit`, sampled otherwise.
pub fn verify_equality(
    spec: &ZonotopeSpec,
    node_limit: usize,
    sample_pairs: usize,
    seed: u64,
) -> Result<EqualityReport> {
    let space = enumerate_space(spec, node_limit)?;
    if (space.len() as u64).pow(2) <= 1 << 40 {
        Ok(check_equality_exhaustive(&space))
    } else {
        Ok(check_equality_sampled(&space, sample_pairs, seed))
    }
}
