//! Command-line front end: scenario dispatch, the bar-resolution Ext
//! oracle, and the symmetric-function utilities.
//!
//! Exit codes: 0 success, 2 usage error, 3 precondition violation,
//! 4 internal invariant breach.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use rsss_core::coeff::CoeffRing;
use rsss_core::error::Error;
use rsss_core::ext::{
    dual_exterior_hopf, ext_via_bar, trivial_module, z2_group_ring, FiniteModule,
};
use rsss_core::render::{self, OutputFormat};
use rsss_core::scenario::{execute, ScenarioKind, ScenarioSpec};
use rsss_core::ss::Bounds;
use rsss_core::symmetric::{
    alternative_sign_disagrees, sigma_difference, split_primes, vex, IntPolynomial,
};

#[derive(Parser)]
#[command(name = "rsss", version, about = "Trigraded spectral-sequence engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named computation and print the final page.
    Scenario {
        #[command(subcommand)]
        which: ScenarioCommand,
    },
    /// Independent Ext computations via the bar resolution.
    Ext {
        #[command(subcommand)]
        which: ExtCommand,
    },
    /// Approximate extension of a weight vector: quotient, remainder, and
    /// elementary symmetric data.
    Vex {
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        u: Vec<i64>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        v: Vec<i64>,
    },
    /// Odd primes below a bound modulo which a monic polynomial splits.
    SplitPrimes {
        /// Coefficients, constant term first.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        q: Vec<i64>,
        #[arg(long, default_value_t = 1000)]
        max: u64,
    },
}

#[derive(Args)]
struct CommonScenarioArgs {
    /// Coefficient ring: z, q, zmod:<m>, or zloc:<p1,p2,...>.
    #[arg(long, default_value = "z")]
    coeff: String,
    /// Declare a square root of -1 (matters only in characteristic 2).
    #[arg(long)]
    sqrt_minus_one: bool,
    /// Override the filtration bound of the truncation window.
    #[arg(long)]
    max_filt: Option<i64>,
    /// Override the degree and weight bound of the truncation window.
    #[arg(long)]
    max_deg: Option<i64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum ScenarioCommand {
    /// Trivial action on projective (n-1)-space.
    Projective {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        common: CommonScenarioArgs,
    },
    /// Scaling action on n-space minus the origin.
    TorusPunctured {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        common: CommonScenarioArgs,
    },
    /// Maximal torus acting on GL_n by left translation.
    TorusGln {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        common: CommonScenarioArgs,
    },
    /// Rank-one torus acting on GL_n through a weight vector.
    WeightedGln {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        w: Vec<i64>,
        #[command(flatten)]
        common: CommonScenarioArgs,
    },
    /// The projective linear group as a quotient by scalars.
    Pgl {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        common: CommonScenarioArgs,
    },
    /// Two-sided weighted action on GL_n.
    LeftRight {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        u: Vec<i64>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        v: Vec<i64>,
        #[command(flatten)]
        common: CommonScenarioArgs,
    },
    /// Weighted action on the Stiefel variety of n x m frames.
    Stiefel {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        u: Vec<i64>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        v: Vec<i64>,
        #[command(flatten)]
        common: CommonScenarioArgs,
    },
    /// Compare the Stiefel differential coefficients with a run over a
    /// splitting prime.
    Crosscheck {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        u: Vec<i64>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        v: Vec<i64>,
        #[arg(long)]
        prime: u64,
        #[command(flatten)]
        common: CommonScenarioArgs,
    },
}

#[derive(Subcommand)]
enum ExtCommand {
    /// Ext of the trivial module over a preset or user-supplied algebra.
    Bar {
        /// lambda1, z2-group, or custom:<file> (JSON module description).
        #[arg(long)]
        preset: String,
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
        #[arg(long, default_value = "z")]
        coeff: String,
    },
}

/// Usage-level failures: malformed ring spellings and the like.
struct UsageError(String);

fn parse_ring(s: &str) -> Result<CoeffRing, UsageError> {
    CoeffRing::parse(s).map_err(|e| UsageError(e.to_string()))
}

fn run_scenario(kind: ScenarioKind, common: &CommonScenarioArgs) -> Result<String, Error> {
    let coeff = match parse_ring(&common.coeff) {
        Ok(r) => r,
        Err(UsageError(msg)) => return Err(Error::InvalidRing(format!("usage: {msg}"))),
    };
    let bounds = match (common.max_filt, common.max_deg) {
        (None, None) => None,
        (s, d) => {
            let n = match &kind {
                ScenarioKind::ProjectiveSpace { n }
                | ScenarioKind::TorusPunctured { n }
                | ScenarioKind::TorusOnGln { n }
                | ScenarioKind::WeightedGln { n, .. }
                | ScenarioKind::Pgl { n }
                | ScenarioKind::LeftRight { n, .. }
                | ScenarioKind::Stiefel { n, .. }
                | ScenarioKind::StiefelCrossCheck { n, .. } => *n,
            };
            let default = Bounds::for_rank(n.max(1));
            let deg = d.unwrap_or(default.max_p);
            Some(Bounds::new(s.unwrap_or(default.max_s), deg, deg))
        }
    };
    let outcome = execute(&ScenarioSpec {
        kind,
        coeff,
        sqrt_minus_one: common.sqrt_minus_one,
        bounds,
    })?;
    let format = match common.format {
        Format::Json => OutputFormat::Json,
        Format::Text => OutputFormat::Text,
    };
    Ok(render::render(&outcome, format))
}

fn load_custom_module(path: &str) -> Result<FiniteModule, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Precondition(format!("cannot read {path}: {e}")))?;
    let module: FiniteModule = serde_json::from_str(&text)
        .map_err(|e| Error::Precondition(format!("malformed module file {path}: {e}")))?;
    module.validate()?;
    Ok(module)
}

fn run_ext_bar(preset: &str, max_degree: usize, coeff: &str) -> Result<String, Error> {
    let ring = match parse_ring(coeff) {
        Ok(r) => r,
        Err(UsageError(msg)) => return Err(Error::InvalidRing(format!("usage: {msg}"))),
    };
    let module = match preset {
        "lambda1" => {
            let alg = dual_exterior_hopf(&ring, &[("t".to_string(), (1, 1))])?;
            trivial_module(&alg)
        }
        "z2-group" => trivial_module(&z2_group_ring(&ring)),
        other => match other.strip_prefix("custom:") {
            Some(path) => load_custom_module(path)?,
            None => {
                return Err(Error::InvalidRing(format!(
                    "usage: unknown preset {other:?} (expected lambda1, z2-group, or custom:<file>)"
                )))
            }
        },
    };
    let shapes = ext_via_bar(&module, max_degree, None)?;
    let entries: Vec<serde_json::Value> = shapes
        .iter()
        .map(|(t, shape)| {
            json!({
                "tridegree": [t.s, t.p, t.w],
                "rank": shape.rank,
                "torsion": shape.torsion.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
            })
        })
        .collect();
    let doc = json!({
        "schema_version": render::SCHEMA_VERSION,
        "preset": preset,
        "coefficients": ring.to_string(),
        "max_degree": max_degree,
        "entries": entries,
    });
    Ok(format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()))
}

fn run_vex(u: &[i64], v: &[i64]) -> Result<String, Error> {
    let result = vex(u, v)?;
    let n = u.len();
    let ints = |p: &IntPolynomial| -> Vec<String> {
        p.coeffs().iter().map(|c| c.to_string()).collect()
    };
    let mut differences = Vec::new();
    for i in 1..=n {
        let d = sigma_difference(u, v, i)?;
        differences.push(json!({
            "i": i,
            "value": d.to_string(),
            "alternative_sign_disagrees": alternative_sign_disagrees(n, i, &d),
        }));
    }
    let doc = json!({
        "schema_version": render::SCHEMA_VERSION,
        "u": u,
        "v": v,
        "f_u": ints(&result.f_u),
        "f_v": ints(&result.f_v),
        "q": ints(&result.q),
        "r": ints(&result.r),
        "sigma_vex": result.sigma_vex.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "sigma_differences": differences,
    });
    Ok(format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()))
}

fn run_split_primes(q: &[i64], max: u64) -> Result<String, Error> {
    let poly = IntPolynomial::from_i64(q);
    let found = split_primes(&poly, max)?;
    let list: Vec<serde_json::Value> = found
        .iter()
        .map(|(p, roots)| json!({"prime": p, "roots": roots}))
        .collect();
    let doc = json!({
        "schema_version": render::SCHEMA_VERSION,
        "q": q,
        "max": max,
        "split_primes": list,
    });
    Ok(format!("{}\n", serde_json::to_string_pretty(&doc).unwrap()))
}

fn dispatch(cli: Cli) -> Result<String, Error> {
    match cli.command {
        Command::Scenario { which } => match which {
            ScenarioCommand::Projective { n, common } => {
                run_scenario(ScenarioKind::ProjectiveSpace { n }, &common)
            }
            ScenarioCommand::TorusPunctured { n, common } => {
                run_scenario(ScenarioKind::TorusPunctured { n }, &common)
            }
            ScenarioCommand::TorusGln { n, common } => {
                run_scenario(ScenarioKind::TorusOnGln { n }, &common)
            }
            ScenarioCommand::WeightedGln { n, w, common } => {
                run_scenario(ScenarioKind::WeightedGln { n, weights: w }, &common)
            }
            ScenarioCommand::Pgl { n, common } => run_scenario(ScenarioKind::Pgl { n }, &common),
            ScenarioCommand::LeftRight { n, u, v, common } => {
                run_scenario(ScenarioKind::LeftRight { n, u, v }, &common)
            }
            ScenarioCommand::Stiefel { n, m, u, v, common } => {
                run_scenario(ScenarioKind::Stiefel { n, m, u, v }, &common)
            }
            ScenarioCommand::Crosscheck {
                n,
                m,
                u,
                v,
                prime,
                common,
            } => run_scenario(
                ScenarioKind::StiefelCrossCheck { n, m, u, v, prime },
                &common,
            ),
        },
        Command::Ext { which } => match which {
            ExtCommand::Bar {
                preset,
                max_degree,
                coeff,
            } => run_ext_bar(&preset, max_degree, &coeff),
        },
        Command::Vex { u, v } => run_vex(&u, &v),
        Command::SplitPrimes { q, max } => run_split_primes(&q, max),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(output) => {
            print!("{output}");
            ExitCode::from(0)
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = match &e {
                Error::Internal(_) => 4,
                Error::InvalidRing(msg) if msg.starts_with("usage:") => 2,
                _ => 3,
            };
            ExitCode::from(code)
        }
    }
}
