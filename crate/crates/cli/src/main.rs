use std::fs;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use rhombus::proof::{self, Closest, Outcome, Profile, SearchOptions, Weights};
use rhombus::render::{render_svg, RenderOptions};
use rhombus::space::{
    self, deficiency_certificate, enumerate_space, flip_distance, isometry_classes, search_deficient_pairs, Method,
    SearchBudget, SearchMode,
};
use rhombus::{parse_placements, placements_to_string, signs_from_placements, Error, Tiling, ZonotopeSpec};

/// Rhombus tilings of zonotopes: counting, distances, deficiency search and
/// proof search.
#[derive(Parser, Debug)]
#[command(name = "rhombus", version)]
struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Maximum number of worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Number of tilings of a zonotope, e.g. `count 2,2,2`.
    Count(SpaceArgs),
    /// Writes every tiling as a space dump.
    Enum {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Hamming- and flip-distance between two tiling files.
    Dist {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::Astar)]
        method: MethodArg,
        /// Tilings the search may store.
        #[arg(long, default_value_t = 5_000_000)]
        budget: usize,
        /// One CSV row instead of the text report.
        #[arg(long)]
        csv: bool,
        /// Print the flip sequence.
        #[arg(long)]
        witness: bool,
    },
    /// Checks whether one tiling of a pair has no inverted flippable triangle.
    Certify { first: PathBuf, second: PathBuf },
    /// Looks for deficient pairs and writes the census.
    Search {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
        mode: ModeArg,
        /// Pairs drawn in sample mode.
        #[arg(long, default_value_t = 100_000)]
        pairs: usize,
        /// Random-walk length per endpoint when the space is not enumerated.
        #[arg(long, default_value_t = 0)]
        walk: usize,
        /// Node budget of each distance search.
        #[arg(long, default_value_t = 5_000_000)]
        search_nodes: usize,
        /// Directory receiving census.csv and the pair files.
        #[arg(short, long, default_value = "census")]
        out_dir: PathBuf,
    },
    /// AND/OR proof search; writes the proof subtree and validates it.
    Prove {
        /// Number of unbounded bundles.
        #[arg(long, conflicts_with = "profile")]
        bundles: Option<usize>,
        /// Per-bundle caps such as `*,*,*,*,1`.
        #[arg(long)]
        profile: Option<String>,
        /// Maximum number of tree nodes.
        #[arg(long, default_value_t = 200_000)]
        budget: usize,
        #[arg(long, default_value_t = 12)]
        max_lines: usize,
        #[arg(long, default_value_t = Closest::default())]
        closest: Closest,
        #[arg(long)]
        w_blocked: Option<f64>,
        #[arg(long)]
        w_unknown: Option<f64>,
        #[arg(long)]
        w_depth: Option<f64>,
        #[arg(short, long, default_value = "proof.txt")]
        out: PathBuf,
    },
    /// Draws a tiling as SVG.
    Render {
        /// Tiling file or space dump.
        input: PathBuf,
        out: PathBuf,
        /// Tiling to draw when the input is a dump.
        #[arg(long, default_value_t = 0)]
        index: usize,
        #[arg(long, default_value_t = 40.0)]
        scale: f64,
        /// Draw the pseudolines.
        #[arg(long)]
        lines: bool,
        /// Omit the tiles.
        #[arg(long)]
        no_tiles: bool,
    },
    /// Checks a tiling file, space dump, placement file or proof file.
    Validate { input: PathBuf },
    /// Converts between placement files and sign files.
    Convert {
        input: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct SpaceArgs {
    /// Bundle sizes, e.g. `1,1,1,1,1,1`.
    spec: String,
    /// Maximum number of tilings to store.
    #[arg(long, default_value_t = 20_000_000)]
    budget: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Astar,
    Bfs,
    Bidirectional,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Astar => Method::AStar,
            MethodArg::Bfs => Method::Bfs,
            MethodArg::Bidirectional => Method::Bidirectional,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Sample,
}

/// Exit status of a command that ran to completion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Ok,
    Negative,
    Budget,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Negative) => ExitCode::from(1),
        Ok(Status::Budget) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(error_code(&e))
        }
    }
}

fn error_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::BudgetExceeded(_)) => 3,
        _ => 2,
    }
}

fn parse_spec(s: &str) -> Result<ZonotopeSpec> {
    Ok(s.parse::<ZonotopeSpec>()?)
}

fn read_tiling(path: &Path) -> Result<Tiling> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(Tiling::parse_file(&text)?)
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            fs::File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<Status> {
    if cli.threads == 0 {
        return Err(Error::OutOfRange("--threads must be positive".into()).into());
    }
    match cli.command {
        Command::Count(args) => {
            let space = enumerate_space(&parse_spec(&args.spec)?, args.budget)?;
            println!("{}", space.len());
            Ok(Status::Ok)
        }
        Command::Enum { space: args, out } => {
            let space = enumerate_space(&parse_spec(&args.spec)?, args.budget)?;
            let mut w = output(out.as_deref())?;
            space.write_dump(&mut w)?;
            w.flush()?;
            Ok(Status::Ok)
        }
        Command::Dist {
            first,
            second,
            method,
            budget,
            csv,
            witness,
        } => {
            let (a, b) = (read_tiling(&first)?, read_tiling(&second)?);
            let mut report = flip_distance(&a, &b, method.into(), budget)?;
            if !witness {
                report.path = None;
            }
            if csv {
                println!("hamming,flip,parity_ok");
                println!(
                    "{},{},{}",
                    report.hamming,
                    report.flip,
                    (report.flip - report.hamming) % 2 == 0
                );
            } else {
                print!("{report}");
            }
            Ok(Status::Ok)
        }
        Command::Certify { first, second } => certify(&read_tiling(&first)?, &read_tiling(&second)?),
        Command::Search {
            space: args,
            mode,
            pairs,
            walk,
            search_nodes,
            out_dir,
        } => {
            let mode = match mode {
                ModeArg::Exhaustive => SearchMode::Exhaustive,
                ModeArg::Sample => SearchMode::Sample {
                    pairs,
                    seed: cli.seed,
                    walk,
                },
            };
            let budget = SearchBudget {
                tilings: args.budget,
                search_nodes,
            };
            let found = search_deficient_pairs(&parse_spec(&args.spec)?, mode, budget)?;
            write_census(&out_dir, &found)?;
            println!(
                "{} deficient ordered pairs, census in {}",
                found.len(),
                out_dir.display()
            );
            Ok(Status::Ok)
        }
        Command::Prove {
            bundles,
            profile,
            budget,
            max_lines,
            closest,
            w_blocked,
            w_unknown,
            w_depth,
            out,
        } => {
            let profile = match (bundles, profile) {
                (Some(n), None) => Profile::unbounded(n),
                (None, Some(p)) => p.parse()?,
                _ => return Err(Error::Parse("give --bundles or --profile".into()).into()),
            };
            if !(3..=8).contains(&profile.bundles()) {
                return Err(Error::InvalidSpec(format!("{} bundles, expected 3 to 8", profile.bundles())).into());
            }
            let d = Weights::default();
            let options = SearchOptions {
                node_limit: budget,
                max_lines,
                closest,
                weights: Weights {
                    blocked: w_blocked.unwrap_or(d.blocked),
                    unknown: w_unknown.unwrap_or(d.unknown),
                    depth: w_depth.unwrap_or(d.depth),
                },
                ..SearchOptions::new(profile)
            };
            prove(options, &out)
        }
        Command::Render {
            input,
            out,
            index,
            scale,
            lines,
            no_tiles,
        } => {
            let text = fs::read_to_string(&input).with_context(|| format!("reading {}", input.display()))?;
            let tilings = space::read_dump(text.as_bytes())?;
            let tiling = tilings
                .get(index)
                .ok_or_else(|| Error::OutOfRange(format!("index {index} of {} tilings", tilings.len())))?;
            let opts = RenderOptions {
                scale,
                tiles: !no_tiles,
                pseudolines: lines,
            };
            fs::write(&out, render_svg(tiling, &opts)).with_context(|| format!("writing {}", out.display()))?;
            Ok(Status::Ok)
        }
        Command::Validate { input } => validate(&input),
        Command::Convert { input, out } => {
            let text = fs::read_to_string(&input).with_context(|| format!("reading {}", input.display()))?;
            let converted = match Tiling::parse_file(&text) {
                Ok(t) => placements_to_string(t.spec(), &t.placements()),
                Err(_) => {
                    let (spec, placements) = parse_placements(&text)?;
                    signs_from_placements(&spec, &placements)?.to_file_string()
                }
            };
            let mut w = output(out.as_deref())?;
            w.write_all(converted.as_bytes())?;
            w.flush()?;
            Ok(Status::Ok)
        }
    }
}

fn certify(a: &Tiling, b: &Tiling) -> Result<Status> {
    let cert = match deficiency_certificate(a, b) {
        Err(Error::IdenticalTilings) => {
            println!("no certificate: tilings are identical");
            return Ok(Status::Negative);
        }
        other => other?,
    };
    let Some(cert) = cert else {
        println!("no certificate: both tilings have an inverted flippable triangle");
        return Ok(Status::Negative);
    };
    let (own, other) = match cert.side {
        space::PairSide::First => (a, b),
        space::PairSide::Second => (b, a),
    };
    println!("certified side: {}", cert.side);
    println!("hamming: {}", cert.hamming);
    println!("flip lower bound: {}", cert.flip_lower_bound());
    println!("flippable triangles of the {} tiling:", cert.side);
    println!("{:<24} {:>4} {:>5}", "triangle", "own", "other");
    for t in &cert.minimal {
        println!(
            "{:<24} {:>4} {:>5}",
            t.to_string(),
            own.sign_of(t)?.as_char(),
            other.sign_of(t)?.as_char()
        );
    }
    Ok(Status::Ok)
}

fn write_census(dir: &Path, pairs: &[space::DeficientPair]) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let classes = isometry_classes(pairs)?;
    let mut csv = BufWriter::new(fs::File::create(dir.join("census.csv"))?);
    writeln!(
        csv,
        "pair_id,tiling_a_file,tiling_b_file,hamming,flip,certified_side,isometry_class"
    )?;
    for (id, (p, class)) in pairs.iter().zip(&classes).enumerate() {
        let fa = format!("pair{id:04}_a.tiling");
        let fb = format!("pair{id:04}_b.tiling");
        fs::write(dir.join(&fa), p.first.to_file_string())?;
        fs::write(dir.join(&fb), p.second.to_file_string())?;
        let side = p.certified.map_or("none".to_string(), |s| s.to_string());
        writeln!(csv, "{id},{fa},{fb},{},{},{side},{class}", p.hamming, p.flip)?;
    }
    csv.flush()?;
    Ok(())
}

fn prove(options: SearchOptions, out: &Path) -> Result<Status> {
    let profile = options.profile.clone();
    let result = proof::search(options);
    println!("profile: {profile}");
    println!("expansions: {}", result.expansions);
    println!("tree nodes: {}", result.nodes);
    match result.outcome {
        Outcome::Proved => {
            let text = proof::write_proof(result.proof.as_ref().expect("proved runs carry a proof"));
            fs::write(out, &text).with_context(|| format!("writing {}", out.display()))?;
            let stats = proof::validate_proof(&text)?;
            println!(
                "proved: {} nodes, {} leaves, depth {}, written to {}",
                stats.nodes,
                stats.leaves,
                stats.depth,
                out.display()
            );
            Ok(Status::Ok)
        }
        Outcome::Refuted => {
            println!("refuted: {} candidate configurations", result.candidates.len());
            for c in result.candidates.iter().take(5) {
                println!("  {c}");
            }
            Ok(Status::Negative)
        }
        Outcome::Open => {
            println!("open: budget exhausted");
            Ok(Status::Budget)
        }
    }
}

fn validate(path: &Path) -> Result<Status> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if text.starts_with("rhombus-proof") {
        return Ok(match proof::validate_proof(&text) {
            Ok(stats) => {
                println!(
                    "valid proof: {} nodes, {} leaves, depth {}",
                    stats.nodes, stats.leaves, stats.depth
                );
                Status::Ok
            }
            Err(e) => {
                println!("invalid: {e}");
                Status::Negative
            }
        });
    }
    let tilings = match space::read_dump(BufReader::new(text.as_bytes())) {
        Ok(t) => t,
        Err(_) => {
            let (spec, placements) = parse_placements(&text)?;
            return Ok(match signs_from_placements(&spec, &placements) {
                Ok(_) => {
                    println!("valid placement file");
                    Status::Ok
                }
                Err(e) => {
                    println!("invalid: {e}");
                    Status::Negative
                }
            });
        }
    };
    let bad: Vec<usize> = (0..tilings.len()).filter(|&i| !tilings[i].validate()).collect();
    if bad.is_empty() {
        println!("valid: {} tiling(s)", tilings.len());
        Ok(Status::Ok)
    } else {
        println!(
            "invalid: {} of {} tiling(s), first at line {}",
            bad.len(),
            tilings.len(),
            bad[0] + 2
        );
        Ok(Status::Negative)
    }
}
