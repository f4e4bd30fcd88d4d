use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use tropical_om::arrangement::{arrangement_tom, random_generic_arrangement};
use tropical_om::axioms::{check_axioms, elimination_witnesses};
use tropical_om::cayley::{embed_and_render, verify_transition_rules};
use tropical_om::json::{
    arrangement_from_str, arrangement_to_string, collection_from_str, collection_to_string,
    collection_to_value, type_set_from_str, type_set_to_string,
};
use tropical_om::structure::{
    contract, delete, reconstruct_from_topes, refinement_closure, topes, vertices,
};
use tropical_om::subdivision::{
    check_subdivision, conjecture_probe, enumerate_triangulations, tom_to_subdivision,
    triangulation_types,
};
use tropical_om::{dual, Error};

#[derive(Parser)]
#[command(
    name = "tropom",
    version,
    about = "Tropical oriented matroids: axioms, arrangements, subdivisions"
)]
struct Cli {
    /// Seed for every randomized generator.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for parallel work (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Group,
}

#[derive(Subcommand)]
enum Group {
    /// Operations on type sets.
    #[command(subcommand)]
    Tom(TomCmd),
    /// Subdivisions of products of simplices.
    #[command(subcommand)]
    Subdiv(SubdivCmd),
    /// Test the triangulation to type-set map exhaustively.
    #[command(subcommand)]
    Conjecture(ConjectureCmd),
    /// Mixed subdivisions of nΔ₂.
    #[command(subcommand)]
    Cayley(CayleyCmd),
}

#[derive(Subcommand)]
enum TomCmd {
    /// Check the four axioms; exit 1 on any violation.
    Check {
        file: Option<PathBuf>,
    },
    /// Type set of an arrangement given by its apexes.
    FromArrangement {
        file: Option<PathBuf>,
    },
    Topes {
        file: Option<PathBuf>,
    },
    Vertices {
        file: Option<PathBuf>,
    },
    /// Rebuild a type set from its topes.
    ReconstructTopes {
        file: Option<PathBuf>,
    },
    /// Refinement closure of the given types.
    ClosureVertices {
        file: Option<PathBuf>,
    },
    Delete {
        #[arg(long)]
        i: usize,
        file: Option<PathBuf>,
    },
    Contract {
        #[arg(long)]
        j: usize,
        file: Option<PathBuf>,
    },
    Dual {
        file: Option<PathBuf>,
    },
    /// Elimination witnesses for two members given by 1-based index in canonical order.
    Eliminate {
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        pos: usize,
        file: Option<PathBuf>,
    },
    /// A random generic arrangement with integer apexes in [-bound, bound].
    RandomArrangement {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 1000)]
        bound: i64,
    },
}

#[derive(Subcommand)]
enum SubdivCmd {
    /// Check the cell conditions; exit 1 on any violation.
    Check {
        /// Require every cell to be a spanning tree.
        #[arg(long)]
        triangulation: bool,
        file: Option<PathBuf>,
    },
    /// Cells given by the vertices of a type set.
    FromTom { file: Option<PathBuf> },
    /// All face types of a triangulation.
    ToTom { file: Option<PathBuf> },
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// Print only the number of triangulations.
        #[arg(long)]
        count: bool,
    },
}

#[derive(Subcommand)]
enum ConjectureCmd {
    /// Check every triangulation's type set against the axioms; exit 1 on any failure.
    Probe {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
    },
}

#[derive(Subcommand)]
enum CayleyCmd {
    /// SVG drawing of a d=3 triangulation.
    Render { file: Option<PathBuf> },
    /// Check every facet crossing against the transition rules.
    VerifyTransitions { file: Option<PathBuf> },
}

/// Standard output plus whether the mathematical check passed.
struct Outcome {
    output: String,
    ok: bool,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Outcome { output, ok: true }
    }

    fn report(value: &impl serde::Serialize, ok: bool) -> Self {
        Outcome {
            output: serde_json::to_string_pretty(value).expect("reports serialize"),
            ok,
        }
    }
}

fn read_input(file: &Option<PathBuf>) -> anyhow::Result<String> {
    match file {
        Some(path) => {
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
        }
        None => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .context("reading standard input")?;
            Ok(s)
        }
    }
}

fn tom_command(cmd: TomCmd, seed: u64) -> anyhow::Result<Outcome> {
    let load = |file: &Option<PathBuf>| -> anyhow::Result<_> {
        Ok(type_set_from_str(&read_input(file)?)?)
    };
    Ok(match cmd {
        TomCmd::Check { file } => {
            let report = check_axioms(&load(&file)?)?;
            let ok = report.ok;
            Outcome::report(&report, ok)
        }
        TomCmd::FromArrangement { file } => {
            let arr = arrangement_from_str(&read_input(&file)?)?;
            let realized = arrangement_tom(&arr)?;
            if realized.degenerate {
                eprintln!("warning: the arrangement is not generic");
            }
            Outcome::ok(type_set_to_string(&realized.tom))
        }
        TomCmd::Topes { file } => Outcome::ok(type_set_to_string(&topes(&load(&file)?))),
        TomCmd::Vertices { file } => Outcome::ok(type_set_to_string(&vertices(&load(&file)?))),
        TomCmd::ReconstructTopes { file } => {
            Outcome::ok(type_set_to_string(&reconstruct_from_topes(&load(&file)?)?))
        }
        TomCmd::ClosureVertices { file } => {
            Outcome::ok(type_set_to_string(&refinement_closure(&load(&file)?)))
        }
        TomCmd::Delete { i, file } => Outcome::ok(type_set_to_string(&delete(&load(&file)?, i)?)),
        TomCmd::Contract { j, file } => {
            Outcome::ok(type_set_to_string(&contract(&load(&file)?, j)?.tom))
        }
        TomCmd::Dual { file } => Outcome::ok(type_set_to_string(&dual(&load(&file)?))),
        TomCmd::Eliminate { a, b, pos, file } => {
            let m = load(&file)?;
            let types = m.to_vec();
            let pick = |k: usize| {
                types.get(k.wrapping_sub(1)).ok_or(Error::IndexOutOfRange {
                    index: k,
                    max: types.len(),
                })
            };
            let (ta, tb) = (pick(a)?, pick(b)?);
            if pos == 0 || pos > m.n() {
                return Err(Error::IndexOutOfRange {
                    index: pos,
                    max: m.n(),
                }
                .into());
            }
            let witnesses = elimination_witnesses(&m, ta, tb, pos);
            let ok = !witnesses.is_empty();
            let lists: Vec<_> = witnesses.iter().map(|t| t.to_lists()).collect();
            let value = json!({
                "a": ta.to_lists(),
                "b": tb.to_lists(),
                "position": pos,
                "witnesses": lists,
            });
            Outcome::report(&value, ok)
        }
        TomCmd::RandomArrangement { n, d, bound } => {
            if bound < 1 {
                return Err(anyhow!("--bound must be positive"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Outcome::ok(arrangement_to_string(&random_generic_arrangement(
                &mut rng, n, d, bound,
            )?))
        }
    })
}

fn subdiv_command(cmd: SubdivCmd) -> anyhow::Result<Outcome> {
    Ok(match cmd {
        SubdivCmd::Check {
            triangulation,
            file,
        } => {
            let c = collection_from_str(&read_input(&file)?)?;
            let report = check_subdivision(&c, triangulation)?;
            let ok = report.ok;
            Outcome::report(&report, ok)
        }
        SubdivCmd::FromTom { file } => {
            let m = type_set_from_str(&read_input(&file)?)?;
            Outcome::ok(collection_to_string(&tom_to_subdivision(&m)))
        }
        SubdivCmd::ToTom { file } => {
            let c = collection_from_str(&read_input(&file)?)?;
            Outcome::ok(type_set_to_string(&triangulation_types(&c)?))
        }
        SubdivCmd::Enumerate { n, d, count } => {
            let all = enumerate_triangulations(n, d)?;
            if count {
                Outcome::ok(all.len().to_string())
            } else {
                let values: Vec<Value> = all.iter().map(collection_to_value).collect();
                Outcome::report(&values, true)
            }
        }
    })
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    match cli.command {
        Group::Tom(cmd) => tom_command(cmd, cli.seed),
        Group::Subdiv(cmd) => subdiv_command(cmd),
        Group::Conjecture(ConjectureCmd::Probe { n, d }) => {
            let report = conjecture_probe(n, d)?;
            let ok = report.ok;
            Ok(Outcome::report(&report, ok))
        }
        Group::Cayley(CayleyCmd::Render { file }) => {
            let c = collection_from_str(&read_input(&file)?)?;
            Ok(Outcome::ok(embed_and_render(&c)?))
        }
        Group::Cayley(CayleyCmd::VerifyTransitions { file }) => {
            let c = collection_from_str(&read_input(&file)?)?;
            let report = verify_transition_rules(&c)?;
            let ok = report.ok;
            Ok(Outcome::report(&report, ok))
        }
    }
}

/// Library errors that describe a failed mathematical check rather than bad input.
fn is_verification_failure(err: &anyhow::Error) -> bool {
    matches!(
        err.downcast_ref::<Error>(),
        Some(
            Error::NotATriangulation(_) | Error::NotAFineCell(_) | Error::EmbeddingInconsistent(_)
        )
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(outcome) => {
            println!("{}", outcome.output.trim_end());
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(if is_verification_failure(&err) { 1 } else { 2 })
        }
    }
}
