//! Reference enumeration of rhombus tilings that shares no code with the
//! library: tiles are stacked on a monotone boundary path starting from the
//! lower boundary `v_1^a_1 .. v_n^a_n`. At every step the leftmost ascent
//! that is not forbidden either receives its rhombus or becomes forbidden
//! until one of its two edges changes, so each tiling is produced once.

use std::collections::{BTreeSet, HashMap};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tile {
    /// `(bundle, rank)` of both lines, 1-based, lower bundle first.
    pub lines: ((u8, u32), (u8, u32)),
    /// Lattice coordinates of the anchor corner.
    pub coords: Vec<u32>,
}

pub type OracleTiling = BTreeSet<Tile>;

struct Sweep {
    n: usize,
    path: Vec<(u8, u32)>,
    forbidden: Vec<bool>,
    placed: Vec<Tile>,
    out: Vec<OracleTiling>,
    limit: usize,
}

impl Sweep {
    fn ascent(&self, p: usize) -> bool {
        self.path[p].0 < self.path[p + 1].0
    }

    fn run(&mut self) {
        if self.out.len() >= self.limit {
            return;
        }
        let len = self.path.len();
        let Some(p) = (0..len.saturating_sub(1)).find(|&p| self.ascent(p) && !self.forbidden[p]) else {
            if (0..len.saturating_sub(1)).all(|p| !self.ascent(p)) {
                self.out.push(self.placed.iter().cloned().collect());
            }
            return;
        };
        // place the rhombus at p
        let mut coords = vec![0u32; self.n];
        for e in &self.path[..p] {
            coords[e.0 as usize - 1] += 1;
        }
        let saved: Vec<bool> = self.forbidden.clone();
        self.placed.push(Tile {
            lines: (self.path[p], self.path[p + 1]),
            coords,
        });
        self.path.swap(p, p + 1);
        for q in p.saturating_sub(1)..=(p + 1).min(len - 2) {
            self.forbidden[q] = false;
        }
        self.run();
        self.path.swap(p, p + 1);
        self.placed.pop();
        self.forbidden = saved;
        // or leave it for good
        self.forbidden[p] = true;
        self.run();
        self.forbidden[p] = false;
    }
}

pub fn enumerate(sizes: &[u32], limit: usize) -> Vec<OracleTiling> {
    let mut path = Vec::new();
    for (b, &a) in sizes.iter().enumerate() {
        for r in 1..=a {
            path.push((b as u8 + 1, r));
        }
    }
    let len = path.len();
    let mut s = Sweep {
        n: sizes.len(),
        path,
        forbidden: vec![false; len.max(1)],
        placed: Vec::new(),
        out: Vec::new(),
        limit,
    };
    s.run();
    s.out
}

/// Interior vertices where exactly three tiles meet.
pub fn flippable_hexagons(tiling: &OracleTiling) -> usize {
    let mut tiles_at: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut edges: BTreeSet<(Vec<u32>, Vec<u32>)> = BTreeSet::new();
    for t in tiling {
        let (i, j) = ((t.lines.0).0 as usize - 1, (t.lines.1).0 as usize - 1);
        let a = t.coords.clone();
        let mut b = a.clone();
        b[i] += 1;
        let mut c = a.clone();
        c[j] += 1;
        let mut d = b.clone();
        d[j] += 1;
        for v in [&a, &b, &c, &d] {
            *tiles_at.entry(v.clone()).or_default() += 1;
        }
        for (x, y) in [(&a, &b), (&a, &c), (&b, &d), (&c, &d)] {
            edges.insert((x.clone(), y.clone()));
        }
    }
    let mut degree: HashMap<Vec<u32>, usize> = HashMap::new();
    for (x, y) in &edges {
        *degree.entry(x.clone()).or_default() += 1;
        *degree.entry(y.clone()).or_default() += 1;
    }
    tiles_at
        .iter()
        .filter(|(v, &k)| k == 3 && degree.get(*v) == Some(&3))
        .count()
}

/// MacMahon's box formula, the number of tilings of the hexagon `(a,b,c)`.
pub fn hexagon_count(a: u32, b: u32, c: u32) -> u128 {
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 1..=a {
        for j in 1..=b {
            for k in 1..=c {
                num *= (i + j + k - 1) as u128;
                den *= (i + j + k - 2) as u128;
                let g = gcd(num, den);
                num /= g;
                den /= g;
            }
        }
    }
    num / den
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
