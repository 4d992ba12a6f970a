//! Command-line front door for the qlocc toolkit.
//!
//! Every number printed here comes straight from a library call; the binary
//! only parses arguments, loads files, and formats reports.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qlocc::catalog::SweepTarget;
use qlocc::sim::ProtocolTree;
use qlocc::{
    complementarity_check, dense_coding_bound, fmt_sig12, holevo_chi, locc_bound, run_protocol,
    von_neumann_entropy, BoundReport, Ensemble, Error,
};

#[derive(Parser)]
#[command(
    name = "qlocc",
    version,
    about = "Bounds on locally accessible information for multipartite ensembles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    /// Three tripartite states with a sign pair (2-D sweep over a and c)
    E1,
    /// Six tripartite states (1-D sweep over a)
    E2,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the locally-accessible-information bound for an ensemble file
    Bound {
        /// Ensemble document (JSON)
        ensemble: PathBuf,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        report: ReportFormat,
    },
    /// Summarize an ensemble: Holevo information, entropies, complementarity
    Info {
        /// Ensemble document (JSON)
        ensemble: PathBuf,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        report: ReportFormat,
    },
    /// Emit sweep data (CSV) for a built-in ensemble family
    Sweep {
        family: Family,
        /// Grid points per axis (defaults: e1 101, e2 1001)
        #[arg(long)]
        grid: Option<usize>,
        /// Write the CSV here instead of standard output
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Locate the e2 parameter thresholds where the bound undercuts
    /// the carried information
    Crossings {
        /// Abscissa tolerance of the bisection
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Run an adaptive local-measurement protocol over an ensemble
    Simulate {
        /// Ensemble document (JSON)
        ensemble: PathBuf,
        /// Protocol tree document (JSON; `null` is the empty protocol)
        protocol: PathBuf,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        report: ReportFormat,
    },
    /// Bound the capacity of distributed dense coding over a shared state
    Densecode {
        /// Shared base state: an ensemble document with a single member
        state: PathBuf,
        /// Weighted encoding unitaries (JSON)
        encodings: PathBuf,
        /// Receiver parties, 1-based, comma separated (senders are the rest)
        #[arg(long, value_delimiter = ',', required = true)]
        receivers: Vec<usize>,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        report: ReportFormat,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

/// 0 success, 1 validation, 2 numerical, 3 I/O.
fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Io(_) => 3,
        Error::NoConvergence(_) | Error::RootFinding(_) => 2,
        _ => 1,
    }
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Bound { ensemble, report } => {
            let e = Ensemble::load(ensemble)?;
            let bound = locc_bound(&e)?;
            match report {
                ReportFormat::Json => println!("{}", bound.to_json()),
                ReportFormat::Text => print_bound_report(&e, &bound),
            }
        }
        Command::Info { ensemble, report } => {
            let e = Ensemble::load(ensemble)?;
            print_info_report(&e, report)?;
        }
        Command::Sweep { family, grid, out } => {
            let (target, default_grid) = match family {
                Family::E1 => (SweepTarget::E1, 101),
                Family::E2 => (SweepTarget::E2, 1001),
            };
            let rows = qlocc::sweep(target, grid.unwrap_or(default_grid))?;
            let csv = qlocc::sweep_csv(&rows);
            match out {
                Some(path) => std::fs::write(path, csv)?,
                None => print!("{csv}"),
            }
        }
        Command::Crossings { tol } => {
            let (low, high) = qlocc::find_e2_crossings(tol)?;
            println!("lower crossing: a = {}", fmt_sig12(low));
            println!("upper crossing: a = {}", fmt_sig12(high));
            println!(
                "the bound sits below the carried information on ({}, {})",
                fmt_sig12(low),
                fmt_sig12(high)
            );
        }
        Command::Simulate {
            ensemble,
            protocol,
            report,
        } => {
            let e = Ensemble::load(ensemble)?;
            let tree = ProtocolTree::load(protocol)?;
            let run = run_protocol(&e, &tree)?;
            let bound = locc_bound(&e)?;
            match report {
                ReportFormat::Json => {
                    let doc = serde_json::json!({
                        "extracted_info_bits": run.extracted_info.0,
                        "bound_bits": bound.bound_bits.0,
                        "protocol_depth": tree.depth(),
                        "transcripts": run.transcripts.rows.len(),
                    });
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&doc).expect("report serializes")
                    );
                }
                ReportFormat::Text => {
                    println!("protocol depth: {}", tree.depth());
                    println!("transcript rows: {}", run.transcripts.rows.len());
                    println!(
                        "extracted information: {} bits",
                        fmt_sig12(run.extracted_info.0)
                    );
                    println!(
                        "locally accessible information bound: {} bits",
                        fmt_sig12(bound.bound_bits.0)
                    );
                }
            }
        }
        Command::Densecode {
            state,
            encodings,
            receivers,
            report,
        } => {
            let base_doc = Ensemble::load(state)?;
            if base_doc.len() != 1 {
                return Err(Error::Arity(format!(
                    "the shared state file must hold exactly one member, got {}",
                    base_doc.len()
                )));
            }
            let base = base_doc.members()[0].state.clone();
            let encodings = qlocc::bounds::load_encodings(encodings)?;
            let post = qlocc::build_encoding_ensemble(&base, &encodings)?;
            let layout = post.layout();
            let sender_dims: Vec<usize> = layout
                .parties()
                .filter(|party| !receivers.contains(party))
                .map(|party| layout.dims()[party - 1])
                .collect();
            let capacity = dense_coding_bound(&post, &sender_dims, &receivers)?;
            match report {
                ReportFormat::Json => {
                    let doc = serde_json::json!({
                        "sender_dims": sender_dims,
                        "receivers": receivers,
                        "capacity_bound_bits": capacity.0,
                    });
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&doc).expect("report serializes")
                    );
                }
                ReportFormat::Text => {
                    println!("sender dimensions: {sender_dims:?}");
                    println!("receiver parties: {receivers:?}");
                    println!(
                        "dense-coding capacity bound: {} bits",
                        fmt_sig12(capacity.0)
                    );
                }
            }
        }
    }
    Ok(())
}

fn print_bound_report(e: &Ensemble, report: &BoundReport) {
    let dims: Vec<String> = e.layout().dims().iter().map(|d| d.to_string()).collect();
    println!(
        "parties: {} (dims {})",
        e.layout().num_parties(),
        dims.join("x")
    );
    println!("members: {}", e.len());
    for (i, s) in report.party_entropies.iter().enumerate() {
        println!("S(rho^B{}) = {} bits", i + 1, fmt_sig12(s.0));
    }
    for (i, s) in report.avg_member_entropy_per_party.iter().enumerate() {
        println!(
            "avg member entropy, party {} = {} bits",
            i + 1,
            fmt_sig12(s.0)
        );
    }
    println!("argmax party: {}", report.argmax_party);
    println!(
        "locally accessible information bound: {} bits",
        fmt_sig12(report.bound_bits.0)
    );
    println!("Holevo information: {} bits", fmt_sig12(report.chi_bits.0));
    println!("verdict: {}", report.verdict);
}

fn print_info_report(e: &Ensemble, format: ReportFormat) -> Result<(), Error> {
    let chi = holevo_chi(e)?;
    let mixture_entropy = von_neumann_entropy(&e.average_state())?;
    let all_pure = e.members().iter().all(|m| m.state.is_pure());
    let complementarity = if all_pure {
        Some(complementarity_check(e)?)
    } else {
        None
    };

    match format {
        ReportFormat::Json => {
            let doc = serde_json::json!({
                "dims": e.layout().dims(),
                "members": e.len(),
                "probabilities": e.probabilities(),
                "all_pure": all_pure,
                "holevo_chi_bits": chi.0,
                "average_state_entropy_bits": mixture_entropy.0,
                "complementarity": complementarity,
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&doc).expect("report serializes")
            );
        }
        ReportFormat::Text => {
            let dims: Vec<String> = e.layout().dims().iter().map(|d| d.to_string()).collect();
            println!(
                "parties: {} (dims {})",
                e.layout().num_parties(),
                dims.join("x")
            );
            println!(
                "members: {} ({})",
                e.len(),
                if all_pure { "all pure" } else { "mixed" }
            );
            println!("Holevo information: {} bits", fmt_sig12(chi.0));
            println!(
                "average-state entropy: {} bits",
                fmt_sig12(mixture_entropy.0)
            );
            if let Some(c) = complementarity {
                println!(
                    "complementarity (distillable key replaced by its E_sq/N surrogate): {} <= {} : {}",
                    fmt_sig12(c.lhs_bits.0),
                    fmt_sig12(c.capacity_bits.0),
                    if c.holds { "holds" } else { "violated" }
                );
            }
        }
    }
    Ok(())
}
