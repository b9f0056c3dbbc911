//! `orbital`: Springer homology, toric cohomology, finite-field enumeration,
//! endoscopic strata and the weighted endoscopic identity from the command line.

mod input;

use std::fs;
use std::io::{ErrorKind, Write};
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use orbital_core::bruteforce::enumerate_truncated_fiber;
use orbital_core::cox::CoxRing;
use orbital_core::endoscopy::strata;
use orbital_core::fan::Fan;
use orbital_core::finite_field::GaloisField;
use orbital_core::orbital::{fundamental_lemma_check, small_field_flag};
use orbital_core::springer::SpringerModule;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "orbital", version, about = "Truncated affine Springer fibers and weighted orbital integrals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Also write the main table of the result as CSV to this path.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GroupArgs {
    /// Root datum JSON file.
    #[arg(long)]
    group: PathBuf,
    /// `T`, `G`, or 1-based simple root indices of the Levi.
    #[arg(long, default_value = "T")]
    levi: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Betti numbers of the truncated fiber from the GKM presentation.
    Betti {
        #[command(flatten)]
        group: GroupArgs,
        /// A valuation for every positive root, or one value for all.
        #[arg(long)]
        profile: String,
        /// Divisor as JSON keyed by ray labels, an array in ray order, or `@file`.
        #[arg(long)]
        divisor: String,
        /// Write the JSON document here instead of standard output.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// `H^•(Y, O(D))` on the toric variety of the fan.
    ToricCohomology {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        divisor: String,
    },
    /// Exhaustive count of 𝔽_q-points for products of SL(2).
    Enumerate {
        #[command(flatten)]
        group: GroupArgs,
        /// Per factor `d` or `d:c`, for `γ = diag(c ε^d, −c ε^d)`.
        #[arg(long)]
        gamma: String,
        #[arg(long)]
        divisor: String,
        /// Odd prime power.
        #[arg(long)]
        q: u32,
    },
    /// Endoscopic stratum of a finite-order point of the dual torus.
    Strata {
        #[command(flatten)]
        group: GroupArgs,
        /// Values of `s` on the coordinate cocharacters, as rationals mod 1.
        #[arg(long)]
        s: String,
        /// Profile used for the reported `d_I`.
        #[arg(long, default_value = "1")]
        profile: String,
    },
    /// Both sides of the weighted endoscopic identity for a divisor family.
    FlCheck {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        profile: String,
        /// The point `s` defining `κ`, as for `strata`.
        #[arg(long)]
        kappa: String,
        /// JSON array of divisors, or `@file`.
        #[arg(long)]
        divisor_family: String,
        /// Also count both sides over 𝔽_q.
        #[arg(long)]
        brute_force_q: Option<u32>,
    },
}

/// A command's JSON document and a flat table for CSV export.
struct Output {
    document: Value,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

fn fan_of(group: &GroupArgs) -> Result<Fan> {
    let datum = input::read_group(&group.group)?;
    let levi = input::parse_levi(&datum, &group.levi)?;
    Ok(Fan::new(&datum, &levi))
}

fn run(command: &Command) -> Result<Output> {
    match command {
        Command::Betti { group, profile, divisor, .. } => {
            let fan = fan_of(group)?;
            let profile = input::parse_profile(fan.datum(), profile)?;
            let divisor = input::parse_divisor(&fan, divisor)?;
            let roots: Vec<usize> = fan.datum().positive_roots().collect();
            let table = SpringerModule::new(&fan, &divisor, &profile, &roots)?.ordinary_homology()?;
            Ok(Output {
                header: vec!["degree".into(), "betti".into(), "trace".into()],
                rows: table
                    .betti
                    .iter()
                    .zip(&table.trace_poly)
                    .enumerate()
                    .map(|(n, (b, t))| vec![(2 * n).to_string(), b.to_string(), t.to_string()])
                    .collect(),
                document: json!({
                    "betti": table.betti,
                    "trace_poly": table.trace_poly,
                    "count_polynomial": table.count_polynomial().to_string(),
                    "assumptions": table.assumptions,
                }),
            })
        }
        Command::ToricCohomology { group, divisor } => {
            let fan = fan_of(group)?;
            let divisor = input::parse_divisor(&fan, divisor)?;
            let table = CoxRing::new(&fan).sheaf_cohomology(&divisor)?;
            Ok(Output {
                header: vec!["degree".into(), "dim".into()],
                rows: table.dims.iter().enumerate().map(|(i, d)| vec![i.to_string(), d.to_string()]).collect(),
                document: json!({
                    "dims": table.dims,
                    "euler_characteristic": table.euler_characteristic(),
                    "weights": table.weights,
                    "assumptions": Vec::<String>::new(),
                }),
            })
        }
        Command::Enumerate { group, gamma, divisor, q } => {
            let fan = fan_of(group)?;
            let divisor = input::parse_divisor(&fan, divisor)?;
            let gamma = input::parse_gamma(gamma)?;
            let field = GaloisField::new(*q)?;
            let e = enumerate_truncated_fiber(&fan, &gamma, &divisor, &field)?;
            let mut assumptions = vec!["split γ with unit eigenvalue coefficients in 𝔽_q".to_string()];
            assumptions.extend(small_field_flag(*q));
            let mut rows = Vec::new();
            let mut per_cell = serde_json::Map::new();
            for (i, f) in e.factors.iter().enumerate() {
                for (cell, count) in &f.per_cell {
                    rows.push(vec![i.to_string(), cell.to_string(), count.to_string()]);
                    let key = if e.factors.len() == 1 { cell.to_string() } else { format!("{i}:{cell}") };
                    per_cell.insert(key, json!(count));
                }
            }
            Ok(Output {
                header: vec!["factor".into(), "cell".into(), "count".into()],
                rows,
                document: json!({
                    "q": q,
                    "count": e.count().to_string(),
                    "per_cell": per_cell,
                    "assumptions": assumptions,
                }),
            })
        }
        Command::Strata { group, s, profile } => {
            let fan = fan_of(group)?;
            let s = input::parse_torus_point(fan.datum(), s)?;
            let profile = input::parse_profile(fan.datum(), profile)?;
            let report = strata(&fan, &s)?.report(fan.datum(), &profile);
            let rows = report
                .systems
                .iter()
                .enumerate()
                .map(|(i, sys)| vec![(i + 1).to_string(), format!("{sys:?}"), report.tau_action[i].to_string()])
                .collect();
            let mut document = serde_json::to_value(&report)?;
            document["assumptions"] = json!(["Φ_+ is the positive system of the reference Borel"]);
            Ok(Output {
                header: vec!["index".into(), "positive_coroots".into(), "tau_image".into()],
                rows,
                document,
            })
        }
        Command::FlCheck {
            group,
            profile,
            kappa,
            divisor_family,
            brute_force_q,
        } => {
            let fan = fan_of(group)?;
            let profile = input::parse_profile(fan.datum(), profile)?;
            let s = input::parse_torus_point(fan.datum(), kappa)?;
            let family = input::parse_divisor_family(&fan, divisor_family)?;
            let report = fundamental_lemma_check(&fan, &profile, &s, &family, *brute_force_q)?;
            let rows = report
                .checks
                .iter()
                .map(|c| {
                    vec![
                        format!("{:?}", c.divisor),
                        c.lhs.join(" "),
                        c.rhs.join(" "),
                        c.equal.to_string(),
                        c.degreewise_vanishes.to_string(),
                    ]
                })
                .collect();
            Ok(Output {
                header: ["divisor", "lhs", "rhs", "equal", "degreewise_vanishes"].map(String::from).to_vec(),
                rows,
                document: serde_json::to_value(&report)?,
            })
        }
    }
}

fn write_csv(path: &PathBuf, out: &Output) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    w.write_record(&out.header)?;
    for row in &out.rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let out = run(&cli.command)?;
    if let Some(path) = &cli.csv {
        write_csv(path, &out)?;
    }
    let text = serde_json::to_string_pretty(&out.document)?;
    match &cli.command {
        Command::Betti { json: Some(path), .. } => fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?,
        _ => {
            if let Err(e) = writeln!(std::io::stdout().lock(), "{text}") {
                if e.kind() != ErrorKind::BrokenPipe {
                    return Err(e.into());
                }
            }
        }
    }
    Ok(())
}
