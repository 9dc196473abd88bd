use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use obstruct_core::arith::{OddPrime, RationalNZ};
use obstruct_core::localclass::Place;
use obstruct_core::obstruct::{self, Delta3LocalResult};
use obstruct_core::verify::{SuiteOptions, SuiteReport};
use obstruct_core::{cohomology, nilpotent, Error};

/// The 2- and 3-nilpotent obstructions for points (b, a) of the
/// Jacobian of P¹ minus three points.
#[derive(Parser)]
#[command(name = "obstruct", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Global δ2 (mod 2 and in K2(Q)) with witness symbols and local invariants.
    Delta2 {
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(long)]
        json: bool,
    },
    /// Local δ3 mod 2 with the case trace at each relevant place.
    Delta3 {
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[arg(allow_hyphen_values = true)]
        a: String,
        /// An odd prime or R. Defaults to every relevant place.
        #[arg(long)]
        place: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// The full obstruction report.
    Report {
        #[arg(allow_hyphen_values = true)]
        b: String,
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(long)]
        json: bool,
    },
    /// Results for the points (-p³, p).
    Family {
        #[command(subcommand)]
        which: FamilyCommand,
    },
    /// Run the cochain and nilpotent oracle suites.
    Verify {
        #[arg(long, default_value_t = 8)]
        max_group_order: usize,
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
}

#[derive(Subcommand)]
enum FamilyCommand {
    /// δ3 components for the lift c0 = 3·C(p,2); needs p ≡ 1 mod 4.
    SpecificLift { p: String },
    /// Global δ3 mod 2; needs p ≡ 5 mod 8.
    Global { p: String },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Cochain,
    Nilpotent,
    All,
}

fn parse_point(b: &str, a: &str) -> Result<(RationalNZ, RationalNZ), Error> {
    Ok((b.parse()?, a.parse()?))
}

fn parse_prime(p: &str) -> Result<OddPrime, Error> {
    let n = p.parse().map_err(|_| Error::Parse(format!("expected a prime, got {p:?}")))?;
    OddPrime::new(n)
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Delta2 { b, a, json } => {
            let (b, a) = parse_point(&b, &a)?;
            let report = obstruct::report(&b, &a);
            if json {
                let full = report.to_json();
                print_json(&json!({"point": full["point"], "delta2": full["delta2"]}));
            } else {
                let zero = |z: bool| if z { "zero" } else { "nonzero" };
                println!("delta2 mod 2: {}", zero(report.delta2_mod2_zero));
                for (v, w) in report.delta2_mod2_witnesses() {
                    println!("  witness ({w})_{v}");
                }
                println!("delta2 in K2(Q): {}", zero(report.delta2_global.zero));
                for w in &report.delta2_global.witnesses {
                    println!("  witness {w}");
                }
                for (v, inv) in &report.delta2_local {
                    println!("local invariant at {v}: {inv}");
                }
            }
        }
        Command::Delta3 { b, a, place, json } => {
            let (b, a) = parse_point(&b, &a)?;
            let places = match place {
                Some(s) => vec![s.parse::<Place>()?],
                None => obstruct::relevant_places(&b, &a),
            };
            let results: Vec<Delta3LocalResult> =
                places.iter().map(|v| obstruct::delta3_local(&b, &a, v)).collect();
            if json {
                print_json(&json!({
                    "point": {"b": b.to_string(), "a": a.to_string()},
                    "delta3_mod2": {"local": results.iter().map(Delta3LocalResult::to_json).collect::<Vec<_>>()},
                }));
            } else {
                for r in &results {
                    println!("{r}");
                }
            }
        }
        Command::Report { b, a, json } => {
            let (b, a) = parse_point(&b, &a)?;
            let report = obstruct::report(&b, &a);
            if json {
                print_json(&report.to_json());
            } else {
                print!("{report}");
            }
        }
        Command::Family { which: FamilyCommand::SpecificLift { p } } => {
            println!("{}", obstruct::delta3_specific_lift_family(&parse_prime(&p)?)?);
        }
        Command::Family { which: FamilyCommand::Global { p } } => {
            println!("{}", obstruct::delta3_global_family(&parse_prime(&p)?)?);
        }
        Command::Verify { max_group_order, exhaustive, seed, suite } => {
            let opts = SuiteOptions { max_group_order, exhaustive, seed, ..SuiteOptions::default() };
            let mut reports: Vec<SuiteReport> = Vec::new();
            if suite != Suite::Cochain {
                reports.push(nilpotent::nilpotent_suite(&opts));
            }
            if suite != Suite::Nilpotent {
                reports.extend(cohomology::run_cochain_suites(&opts)?);
            }
            for r in &reports {
                print!("{r}");
            }
            let cases: u64 = reports.iter().map(SuiteReport::total_cases).sum();
            let failures: u64 = reports.iter().map(SuiteReport::total_failures).sum();
            println!("{} subjects, {cases} cases, {failures} failures", reports.len());
            return Ok(failures == 0);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if matches!(e, Error::Internal(_)) { 1 } else { 2 })
        }
    }
}
