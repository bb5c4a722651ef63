//! Acceptance run: one `[PASS]`/`[FAIL]` line per criterion.
//!
//! Criterion 3 is known to fail (see `KNOWN_RED`) and criterion 10 is
//! report-only; any other failure makes the binary exit non-zero.

mod common;

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::oracle;
use rhombus::lemmas::{check_cuts_exhaustive, check_cuts_sampled, CutKind};
use rhombus::proof::{search, validate_proof, write_proof, Outcome, Profile, SearchOptions};
use rhombus::space::{
    check_equality_exhaustive, check_equality_sampled, deficiency_certificate, enumerate_space, flip_distance,
    isometry_classes, replay, search_deficient_pairs, Method, SearchBudget, SearchMode, TilingSpace,
};
use rhombus::{signs_from_placements, total_triangles, Tiling, ZonotopeSpec};

const KNOWN_RED: [u32; 1] = [3];

// pinned budgets
const BIG_COUNT: usize = 16_832_230;
const BIG_TIME: Duration = Duration::from_secs(30 * 60);
const BIG_MEMORY_KB: u64 = 4 * 1024 * 1024;
const CENSUS_TIME: Duration = Duration::from_secs(5 * 60);
const EQUALITY_TIME: Duration = Duration::from_secs(10 * 60);
const PROOF_TIME: Duration = Duration::from_secs(10 * 60);
const SAMPLED_EQUALITY_PAIRS: usize = 1_000_000;
const LEMMA_SAMPLES: usize = 100_000;
const METRIC_PAIRS: usize = 100_000;
const ROUND_TRIP_LIMIT: usize = 1000;
const PROOF_NODE_CAP: usize = 720;
const SEED: u64 = 0;

struct Report {
    failed_gated: Vec<u32>,
    failed_known: Vec<u32>,
}

impl Report {
    fn line(&mut self, id: u32, pass: bool, what: &str, detail: String) {
        println!("[{}] {id}. {what}: {detail}", if pass { "PASS" } else { "FAIL" });
        if !pass {
            if KNOWN_RED.contains(&id) {
                self.failed_known.push(id);
            } else {
                self.failed_gated.push(id);
            }
        }
    }
}

fn spec(s: &str) -> ZonotopeSpec {
    s.parse().unwrap()
}

fn space(s: &str) -> TilingSpace {
    enumerate_space(&spec(s), 10_000_000).unwrap()
}

fn peak_rss_kb() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}

fn counts(r: &mut Report) -> TilingSpace {
    let mut ok = true;
    let mut detail = Vec::new();
    for s in ["1,1,1", "1,1,1,1", "1,1,1,1,1", "2,2,2", "1,1,1,1,1,1"] {
        let sizes: Vec<u32> = s.split(',').map(|x| x.parse().unwrap()).collect();
        let lib = space(s).len();
        let reference = oracle::enumerate(&sizes, usize::MAX).len();
        ok &= lib == reference;
        detail.push(format!("({s})={lib}/{reference}"));
    }
    let six = space("1,1,1,1,1,1").len();
    ok &= six * six == 824_464;
    let start = Instant::now();
    let big = enumerate_space(&spec("2,2,2,2,2"), 20_000_000).unwrap();
    let took = start.elapsed();
    let rss = peak_rss_kb();
    ok &= big.len() == BIG_COUNT && took < BIG_TIME && rss.is_none_or(|kb| kb < BIG_MEMORY_KB);
    detail.push(format!(
        "(2,2,2,2,2)={} in {:.1}s, peak {} MB",
        big.len(),
        took.as_secs_f64(),
        rss.map_or("?".into(), |kb| (kb / 1024).to_string())
    ));
    r.line(1, ok, "tiling counts (library/oracle)", detail.join(", "));
    big
}

fn census(r: &mut Report) {
    let start = Instant::now();
    let pairs = search_deficient_pairs(&spec("1,1,1,1,1,1"), SearchMode::Exhaustive, SearchBudget::default()).unwrap();
    let took = start.elapsed();
    let classes = isometry_classes(&pairs).unwrap();
    let class_count = classes.iter().max().map_or(0, |m| m + 1);
    let mut dist: HashMap<(usize, usize), usize> = HashMap::new();
    for p in &pairs {
        *dist.entry((p.hamming, p.flip)).or_default() += 1;
    }
    let all_certified = pairs.iter().all(|p| p.certified.is_some());
    let ok = pairs.len() == 16
        && pairs.iter().all(|p| p.flip == 12 && p.hamming == 10)
        && class_count == 2
        && took < CENSUS_TIME;
    r.line(
        3,
        ok,
        "six-bundle deficiency census",
        format!(
            "{} ordered pairs ({} unordered), (hamming, flip) counts {:?}, {} isometry classes, all certified: {}, {:.1}s; expected 16 ordered pairs at hamming 10 / flip 12 in 2 classes",
            pairs.len(),
            pairs.len() / 2,
            dist,
            class_count,
            all_certified,
            took.as_secs_f64()
        ),
    );
}

fn exhaustive_equality(r: &mut Report) {
    let start = Instant::now();
    let mut ok = true;
    let mut detail = Vec::new();
    for s in ["2,2,2", "3,2,2", "1,1,1,1", "2,2,1,1", "1,1,1,1,1", "2,2,2,2,1"] {
        let rep = check_equality_exhaustive(&space(s));
        ok &= rep.equality_holds();
        detail.push(format!("({s}) {} tilings, {} stuck", rep.tilings, rep.stuck_pairs));
    }
    let took = start.elapsed();
    ok &= took < EQUALITY_TIME;
    r.line(
        4,
        ok,
        "exhaustive flip = hamming",
        format!("{}, {:.1}s", detail.join(", "), took.as_secs_f64()),
    );
}

fn sampled_equality(r: &mut Report, big: &TilingSpace) {
    let start = Instant::now();
    let rep = check_equality_sampled(big, SAMPLED_EQUALITY_PAIRS, SEED);
    r.line(
        5,
        rep.equality_holds() && rep.pairs_checked == SAMPLED_EQUALITY_PAIRS as u64,
        "sampled flip = hamming on (2,2,2,2,2)",
        format!(
            "{} uniform pairs, {} where greedy missed, {:.1}s",
            rep.pairs_checked,
            rep.stuck_pairs,
            start.elapsed().as_secs_f64()
        ),
    );
}

fn lemmas(r: &mut Report) {
    let mut ok = true;
    let mut detail = Vec::new();
    for s in ["2,2,2", "3,3,2"] {
        let rep = check_cuts_exhaustive(&space(s), CutKind::SameBundle);
        ok &= rep.holds() && rep.cuts > 0;
        detail.push(format!(
            "same-bundle ({s}) {} cuts {} violations",
            rep.cuts, rep.violations
        ));
    }
    let rep = check_cuts_exhaustive(&space("2,2,1,1"), CutKind::FourthBundle);
    ok &= rep.holds() && rep.cuts > 0;
    detail.push(format!(
        "fourth-bundle (2,2,1,1) {} cuts {} violations",
        rep.cuts, rep.violations
    ));
    let rep = check_cuts_sampled(&space("2,2,2,2"), CutKind::FourthBundle, LEMMA_SAMPLES, SEED);
    ok &= rep.holds() && rep.cuts > 0 && rep.pairs == LEMMA_SAMPLES;
    detail.push(format!(
        "fourth-bundle (2,2,2,2) {} sampled pairs {} cuts {} violations",
        rep.pairs, rep.cuts, rep.violations
    ));
    r.line(6, ok, "cut implications", detail.join(", "));
}

fn metrics(r: &mut Report) {
    let matrix = [
        "2,2,2",
        "3,2,2",
        "2,2,1,1",
        "2,1,1,1",
        "1,1,1,1,1",
        "2,1,1,1,1",
        "1,1,1,1,1,1",
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut bad = Vec::new();
    let (mut certified, mut deficient) = (0, 0);
    for (k, s) in matrix.iter().enumerate() {
        let sp = space(s);
        let graph = sp.flip_graph();
        let share = METRIC_PAIRS / matrix.len() + usize::from(k < METRIC_PAIRS % matrix.len());
        let mut pairs: Vec<(usize, usize)> = (0..share)
            .map(|_| (rng.gen_range(0..sp.len()), rng.gen_range(0..sp.len())))
            .collect();
        pairs.sort_unstable();
        let mut bfs: Option<(usize, Vec<u32>)> = None;
        for (i, j) in pairs {
            if bfs.as_ref().is_none_or(|(src, _)| *src != i) {
                bfs = Some((i, graph.distances_from(i)));
            }
            let by_bfs = bfs.as_ref().unwrap().1[j] as usize;
            let (a, b) = (sp.tiling(i), sp.tiling(j));
            let rep = flip_distance(&a, &b, Method::AStar, 10_000_000).unwrap();
            let h = rep.hamming;
            let replayed = rep
                .path
                .as_ref()
                .is_some_and(|p| p.len() == rep.flip && replay(&a, p).ok() == Some(b.clone()));
            let mut good = rep.flip >= h && (rep.flip - h).is_multiple_of(2) && rep.flip == by_bfs && replayed;
            if rep.flip > h {
                deficient += 1;
            }
            if h > 0 {
                if let Some(cert) = deficiency_certificate(&a, &b).unwrap() {
                    certified += 1;
                    good &= rep.flip >= cert.flip_lower_bound();
                }
            }
            if !good && bad.len() < 5 {
                bad.push(format!("({s}) #{i}-#{j}"));
            }
        }
    }
    r.line(
        7,
        bad.is_empty(),
        "metric invariants",
        format!(
            "{METRIC_PAIRS} pairs over {} spaces, {deficient} deficient, {certified} certified, failures {:?}",
            matrix.len(),
            bad
        ),
    );
}

fn round_trips(r: &mut Report) {
    let mut specs = Vec::new();
    for n in 3..=6usize {
        let max = match n {
            3 => 4,
            4 => 3,
            5 => 2,
            _ => 1,
        };
        let mut sizes = vec![1u32; n];
        loop {
            specs.push(sizes.clone());
            let Some(k) = (0..n).find(|&k| sizes[k] < max) else {
                break;
            };
            sizes[k] += 1;
            for x in &mut sizes[..k] {
                *x = 1;
            }
        }
    }
    let (mut checked_specs, mut checked_tilings, mut mismatches) = (0, 0, 0);
    for sizes in specs {
        let Ok(sp) = enumerate_space(&ZonotopeSpec::new(&sizes).unwrap(), ROUND_TRIP_LIMIT) else {
            continue;
        };
        checked_specs += 1;
        for i in 0..sp.len() {
            let t = sp.tiling(i);
            checked_tilings += 1;
            if signs_from_placements(t.spec(), &t.placements()).ok() != Some(t) {
                mismatches += 1;
            }
        }
    }
    let four = space("1,1,1,1");
    let zono = four.zonotope().clone();
    let mut valid = 0;
    let mut agree = true;
    for bits in 0..16u64 {
        let t = Tiling::from_words(&zono, &[bits]).unwrap();
        let reachable = four.index_of(&t).is_some();
        valid += usize::from(t.validate());
        agree &= t.validate() == reachable;
    }
    r.line(
        8,
        mismatches == 0 && agree && valid == 8,
        "round trips",
        format!(
            "{checked_tilings} tilings over {checked_specs} specs, {mismatches} mismatches; (1,1,1,1) {valid}/16 valid, matches reachability: {agree}"
        ),
    );
}

fn proof(r: &mut Report) {
    let start = Instant::now();
    let res = search(SearchOptions::new(Profile::unbounded(4)));
    let took = start.elapsed();
    let (ok, detail) = match (&res.outcome, &res.proof) {
        (Outcome::Proved, Some(p)) => match validate_proof(&write_proof(p)) {
            Ok(st) => (
                st.nodes <= PROOF_NODE_CAP && took < PROOF_TIME,
                format!(
                    "proved, validated: {} nodes, {} leaves, depth {}, {} expansions, {:.2}s",
                    st.nodes,
                    st.leaves,
                    st.depth,
                    res.expansions,
                    took.as_secs_f64()
                ),
            ),
            Err(e) => (false, format!("validator rejected the proof: {e}")),
        },
        (o, _) => (false, format!("{o:?} after {} expansions", res.expansions)),
    };
    r.line(9, ok, "four-bundle proof search", detail);
}

fn stretch() {
    for (profile, budget) in [("*,*,*,*,1", 100_000), ("2,2,2,2,2", 100_000)] {
        let mut opts = SearchOptions::new(profile.parse().unwrap());
        opts.node_limit = budget;
        let start = Instant::now();
        let res = search(opts);
        let pass = res.outcome == Outcome::Proved;
        println!(
            "[{}] 10a. (stretch, not gated) proof search {profile}: {:?} after {} expansions, {} nodes, {:.1}s",
            if pass { "PASS" } else { "FAIL" },
            res.outcome,
            res.expansions,
            res.nodes,
            start.elapsed().as_secs_f64()
        );
    }
    let start = Instant::now();
    let mode = SearchMode::Sample {
        pairs: 20_000,
        seed: SEED,
        walk: 400,
    };
    let budget = SearchBudget {
        tilings: 200_000,
        search_nodes: 200_000,
    };
    let found = search_deficient_pairs(&spec("3,2,2,2,2"), mode, budget);
    let (pass, detail) = match found {
        Ok(pairs) => {
            let hit = pairs.iter().find(|p| {
                p.hamming == 32
                    && p.flip == 34
                    && deficiency_certificate(&p.first, &p.second)
                        .ok()
                        .flatten()
                        .is_some_and(|c| c.minimal.len() == 10)
            });
            let mut shapes: Vec<(usize, usize)> = pairs.iter().map(|p| (p.hamming, p.flip)).collect();
            shapes.sort_unstable();
            shapes.dedup();
            (
                hit.is_some(),
                format!("{} deficient pairs, (hamming, flip) seen {:?}", pairs.len(), shapes),
            )
        }
        Err(e) => (false, e.to_string()),
    };
    println!(
        "[{}] 10b. (stretch, not gated) random search on (3,2,2,2,2): {detail}, {:.1}s",
        if pass { "PASS" } else { "FAIL" },
        start.elapsed().as_secs_f64()
    );
}

fn main() -> ExitCode {
    let mut r = Report {
        failed_gated: Vec::new(),
        failed_known: Vec::new(),
    };
    let big = counts(&mut r);
    let tri = total_triangles(&spec("2,2,2,2,2"));
    r.line(2, tri == 80, "triangles of (2,2,2,2,2)", tri.to_string());
    census(&mut r);
    exhaustive_equality(&mut r);
    sampled_equality(&mut r, &big);
    drop(big);
    lemmas(&mut r);
    metrics(&mut r);
    round_trips(&mut r);
    proof(&mut r);
    stretch();
    println!(
        "summary: gated failures {:?}, known failures {:?}",
        r.failed_gated, r.failed_known
    );
    if r.failed_gated.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
