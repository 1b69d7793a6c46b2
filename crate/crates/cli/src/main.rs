use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use vopcert::certifier::{certify, efficiency_check, Status, Verdict};
use vopcert::exactlp::rational::{parse_rational_or_decimal, Rational};
use vopcert::gap::gap_necessary_check;
use vopcert::geometry::Truth;
use vopcert::instance::{parse_instance, Problem};
use vopcert::oracle::{radius_estimate, robust_oracle, Outcome, DEFAULT_BUDGET, DEFAULT_SEED};
use vopcert::report::{describe, render_describe, verify_report, ReportDocument};
use vopcert::Error;

const EXIT_ROBUST: u8 = 0;
const EXIT_NOT_ROBUST: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_INPUT: u8 = 65;
const EXIT_CAPABILITY: u8 = 70;

/// Certify or refute norm-based robust efficiency of a candidate point.
#[derive(Parser)]
#[command(name = "vopcert", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide robustness from the cone conditions at the candidate.
    Certify {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Search for a perturbation that destroys efficiency.
    Oracle {
        file: PathBuf,
        /// Radius of the Frobenius ball; decimals are converted exactly.
        #[arg(long)]
        radius: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Bracket the robustness radius by bisection with the oracle.
    Radius {
        file: PathBuf,
        #[arg(long)]
        max: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Test the gap-function necessary condition.
    Gap {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Print the cones and subdifferentials at the candidate.
    Describe {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Re-validate every witness of a JSON report against its instance.
    VerifyReport { file: PathBuf, report: PathBuf },
}

fn exit_for_error(e: &Error) -> u8 {
    if e.is_input_error() || matches!(e, Error::Io(_)) {
        EXIT_INPUT
    } else {
        EXIT_CAPABILITY
    }
}

fn exit_for_status(s: Status) -> u8 {
    match s {
        Status::RobustCertified => EXIT_ROBUST,
        Status::NotRobustCertified => EXIT_NOT_ROBUST,
        Status::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn radius_arg(s: &str) -> Result<Rational, Error> {
    parse_rational_or_decimal(s)
}

fn truth(t: Truth) -> &'static str {
    match t {
        Truth::True => "true",
        Truth::False => "false",
        Truth::Unknown => "unknown",
    }
}

fn print_verdict(v: &Verdict) {
    println!("status: {:?}", v.status);
    println!("rule: {}", v.rule);
    for c in &v.conditions {
        let mut line = format!("{}: {}", c.id.code(), truth(c.holds));
        if !c.exact {
            line.push_str(" (approximate)");
        }
        if c.applicable != Truth::True {
            line.push_str(&format!(" [hypotheses {}]", truth(c.applicable)));
        }
        if let Some(d) = c.direction() {
            line.push_str(&format!(" witness d = {d}"));
        }
        println!("{line}");
        if let Some(n) = &c.note {
            println!("    {n}");
        }
    }
    let h = &v.hypotheses;
    println!(
        "hypotheses: omega convex {}, f K-convex {}, CQ1 {}",
        truth(h.omega_convex),
        truth(h.f_k_convex),
        truth(h.cq1)
    );
    if let Some(g) = h.g_q_convex {
        println!("constraint map Q-convex: {}", truth(g));
    }
    if v.discretization_dependent {
        println!("verdict depends on the discretization grid");
    }
    if v.oracle_referral {
        println!("referred to the perturbation oracle");
    }
}

fn run(cmd: Command) -> Result<u8, Error> {
    match cmd {
        Command::Certify { file, json } => {
            let p = parse_instance(&file)?;
            let mut doc = ReportDocument::new("certify");
            let verdict = doc.timed("certify", || certify(&p.instance, &p.candidate))?;
            let eff = doc.timed("efficiency", || efficiency_check(&p.instance, &p.candidate))?;
            let code = exit_for_status(verdict.status);
            if json {
                doc.verdict = Some(verdict);
                doc.efficiency = Some(eff);
                println!("{}", doc.to_json());
            } else {
                print_verdict(&verdict);
                match (&eff.witness, eff.exact) {
                    (Some(y), _) => println!("candidate is dominated by y = {y}"),
                    (None, true) => println!("candidate is efficient"),
                    (None, false) => println!("no dominating point found on the search grid"),
                }
            }
            Ok(code)
        }
        Command::Oracle {
            file,
            radius,
            samples,
            seed,
            json,
        } => {
            let r = radius_arg(&radius)?;
            let p = parse_instance(&file)?;
            let mut doc = ReportDocument::new("oracle");
            doc.seed = Some(seed);
            let rep = doc.timed("oracle", || robust_oracle(&p.instance, &p.candidate, &r, samples, seed))?;
            let code = if rep.is_refuted() {
                EXIT_NOT_ROBUST
            } else {
                EXIT_INCONCLUSIVE
            };
            if json {
                doc.oracle = Some(rep);
                println!("{}", doc.to_json());
            } else {
                match &rep.outcome {
                    Outcome::RefutedWithWitness {
                        perturbation,
                        y,
                        source,
                    } => {
                        println!("refuted at radius {r} by {source:?}");
                        println!("C = {}", perturbation.c);
                        println!("‖C‖² = {}", perturbation.frobenius_sq);
                        println!("dominating point y = {y}");
                    }
                    Outcome::NoCounterexampleFound { budget, seed } => {
                        println!(
                            "no counterexample at radius {r} ({} patterns, {budget} samples, seed {seed})",
                            rep.patterns_tried
                        );
                        if !rep.exact {
                            println!("per-sample checks were grid searches; the outcome is only suggestive");
                        }
                    }
                }
            }
            Ok(code)
        }
        Command::Radius {
            file,
            max,
            samples,
            seed,
            json,
        } => {
            let r_max = radius_arg(&max)?;
            let p = parse_instance(&file)?;
            let mut doc = ReportDocument::new("radius");
            doc.seed = Some(seed);
            let est = doc.timed("radius", || {
                radius_estimate(&p.instance, &p.candidate, &r_max, samples, seed)
            })?;
            let code = if est.refuted_at.is_some() {
                EXIT_NOT_ROBUST
            } else {
                EXIT_INCONCLUSIVE
            };
            if json {
                doc.radius = Some(est);
                println!("{}", doc.to_json());
            } else {
                for probe in &est.trace {
                    let tag = if probe.refuted { "refuted" } else { "clean" };
                    println!("r = {}: {tag}", probe.radius);
                }
                println!("clean below: {}", est.clean_below);
                match &est.refuted_at {
                    Some(r) => println!("refuted at: {r}"),
                    None => println!("refuted at: none"),
                }
            }
            Ok(code)
        }
        Command::Gap { file, json } => {
            let p = parse_instance(&file)?;
            let mut doc = ReportDocument::new("gap");
            let rep = doc.timed("gap", || gap_necessary_check(&p.instance, &p.candidate))?;
            let code = if rep.holds == Truth::False && rep.applicable == Truth::True {
                EXIT_NOT_ROBUST
            } else {
                EXIT_INCONCLUSIVE
            };
            if json {
                doc.gap = Some(rep);
                println!("{}", doc.to_json());
            } else {
                println!(
                    "gap condition: {} [hypotheses {}]",
                    truth(rep.holds),
                    truth(rep.applicable)
                );
                if let Some(vopcert::certifier::Witness::Gap { xi, ybar }) = &rep.witness {
                    println!("xi = {xi}");
                    println!("ybar = {ybar}");
                }
                if let Some(n) = &rep.note {
                    println!("    {n}");
                }
            }
            Ok(code)
        }
        Command::Describe { file, json } => {
            let p = parse_instance(&file)?;
            let d = describe(&p)?;
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&d).expect("describe data serializes")
                );
            } else {
                print!("{}", render_describe(&d));
            }
            Ok(0)
        }
        Command::VerifyReport { file, report } => {
            let p: Problem = parse_instance(&file)?;
            let text = std::fs::read_to_string(&report)?;
            let value: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| Error::Parse(format!("report: {e}")))?;
            let checks = verify_report(&p, &value)?;
            let mut ok = true;
            for c in &checks {
                println!(
                    "{} {}: {}",
                    c.location,
                    c.kind,
                    if c.valid { "valid" } else { "INVALID" }
                );
                ok &= c.valid;
            }
            if checks.is_empty() {
                println!("no witnesses in the report");
            }
            Ok(if ok { 0 } else { EXIT_NOT_ROBUST })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for_error(&e))
        }
    }
}
