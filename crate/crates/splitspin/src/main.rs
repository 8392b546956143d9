use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use splitspin::criteria::{CriteriaEngine, CriterionId};
use splitspin::error::{Error, Result};
use splitspin::shots::{self, PlanarCriterion};
use splitspin::split::{split_binomial, split_exact, SectorMixture};
use splitspin::states::{product_dicke, PolarizationAxis, SymmetricState};
use splitspin::sweep::{criterion_table, sweep_one_axis, verify_oracle_equivalence, SweepSplit, TableKind};

#[derive(Parser)]
#[command(
    name = "splitspin",
    about = "Split collective-spin states: moments, steering/entanglement criteria, shot pipeline",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Args)]
struct StateArgs {
    /// dicke | polarized-x | polarized-y | polarized-z | ghz | twisted | product-dicke
    #[arg(long)]
    state: String,
    /// Total particle number
    #[arg(long)]
    n: u32,
    /// Twisting strength for --state twisted
    #[arg(long)]
    mu: Option<f64>,
    /// exact | exact:K | binomial
    #[arg(long, default_value = "binomial")]
    split: String,
    /// Discarded probability of the binomial sector truncation
    #[arg(long, default_value_t = splitspin::split::DEFAULT_TAIL_MASS)]
    tail_mass: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Reproduce the large-N criterion tables
    Table {
        /// steering-table1 | entanglement-table2
        #[arg(long)]
        which: String,
        #[arg(long)]
        n: u32,
        /// exact | binomial
        #[arg(long, default_value = "binomial")]
        split: String,
        #[arg(long, default_value_t = splitspin::split::DEFAULT_TAIL_MASS)]
        tail_mass: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Criterion ratio curves over a twisting-strength grid
    Sweep {
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 0.0)]
        mu_min: f64,
        #[arg(long)]
        mu_max: f64,
        #[arg(long, default_value_t = 60)]
        mu_steps: usize,
        /// exact | binomial
        #[arg(long, default_value = "exact")]
        split: String,
        #[arg(long, default_value_t = splitspin::split::DEFAULT_TAIL_MASS)]
        tail_mass: f64,
        /// Comma-separated criterion ids
        #[arg(
            long,
            default_value = "steering-normalized,reid,entanglement-normalized,giovannetti"
        )]
        criteria: String,
        /// csv | json
        #[arg(long, default_value = "csv")]
        format: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate criteria on one state, emitting a JSON report bundle
    Eval {
        #[command(flatten)]
        state: StateArgs,
        /// Comma-separated criterion ids, or "all"
        #[arg(long, default_value = "all")]
        criteria: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw synthetic measurement shots and write the CSV record file
    Sample {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value_t = 1000)]
        shots_z: usize,
        #[arg(long, default_value_t = 1000)]
        shots_planar: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Validate a shot CSV file and summarize its contents
    Ingest {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate planar-protocol moments from a shot CSV and evaluate both
    /// estimator-level criteria with bootstrap intervals
    Estimate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1000)]
        bootstrap: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the symmetric-subspace moments against the 2^N oracle
    Verify {
        /// Even register sizes, comma separated
        #[arg(long, default_value = "4,6,8")]
        n: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

fn parse_split(s: &str, n: u32, tail_mass: f64) -> Result<SweepSplit> {
    if s == "binomial" {
        return Ok(SweepSplit::Binomial(tail_mass));
    }
    if s == "exact" {
        return Ok(SweepSplit::ExactHalf);
    }
    if let Some(k) = s.strip_prefix("exact:") {
        let n_a: u32 = k
            .parse()
            .map_err(|_| Error::invalid(format!("bad split spec '{s}'")))?;
        if n_a > n {
            return Err(Error::invalid(format!("split {n_a} exceeds n = {n}")));
        }
        return Ok(SweepSplit::ExactAt(n_a));
    }
    Err(Error::invalid(format!(
        "unknown split '{s}', expected exact, exact:K or binomial"
    )))
}

fn build_mixture(args: &StateArgs) -> Result<SectorMixture> {
    if args.state == "product-dicke" {
        return Ok(SectorMixture::single(product_dicke(args.n)?));
    }
    let symmetric = match args.state.as_str() {
        "dicke" => SymmetricState::dicke(args.n)?,
        "polarized-x" => SymmetricState::polarized(args.n, PolarizationAxis::X)?,
        "polarized-y" => SymmetricState::polarized(args.n, PolarizationAxis::Y)?,
        "polarized-z" => SymmetricState::polarized(args.n, PolarizationAxis::Z)?,
        "ghz" => SymmetricState::ghz(args.n)?,
        "twisted" => {
            let mu = args
                .mu
                .ok_or_else(|| Error::invalid("--state twisted needs --mu"))?;
            SymmetricState::one_axis_twisted(args.n, mu)?
        }
        other => return Err(Error::invalid(format!("unknown state '{other}'"))),
    };
    if args.split == "binomial" {
        return split_binomial(&symmetric, args.tail_mass);
    }
    let n_a = if args.split == "exact" {
        args.n / 2
    } else if let Some(k) = args.split.strip_prefix("exact:") {
        k.parse()
            .map_err(|_| Error::invalid(format!("bad split spec '{}'", args.split)))?
    } else {
        return Err(Error::invalid(format!(
            "unknown split '{}', expected exact, exact:K or binomial",
            args.split
        )));
    };
    Ok(SectorMixture::single(split_exact(&symmetric, n_a)?))
}

fn parse_criteria(spec: &str, mix: &SectorMixture) -> Result<Vec<CriterionId>> {
    if spec == "all" {
        return Ok(CriterionId::applicable_to(mix));
    }
    spec.split(',')
        .map(|s| CriterionId::from_str(s.trim()))
        .collect()
}

fn emit(text: String, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => println!("{text}"),
    }
    Ok(())
}

fn run() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Table {
            which,
            n,
            split,
            tail_mass,
            out,
        } => {
            let kind = TableKind::parse(&which)?;
            let split = parse_split(&split, n, tail_mass)?;
            let rows = criterion_table(kind, n, split)?;
            let doc = json!({
                "table": kind.label(),
                "n": n,
                "split": split.label(),
                "columns": kind.column_names(),
                "rows": rows,
            });
            emit(serde_json::to_string_pretty(&doc)?, out.as_ref())?;
        }
        Command::Sweep {
            n,
            mu_min,
            mu_max,
            mu_steps,
            split,
            tail_mass,
            criteria,
            format,
            out,
        } => {
            if mu_steps < 2 || mu_max <= mu_min {
                return Err(Error::invalid("need mu_max > mu_min and at least 2 steps"));
            }
            let ids: Vec<CriterionId> = criteria
                .split(',')
                .map(|s| CriterionId::from_str(s.trim()))
                .collect::<Result<_>>()?;
            let grid: Vec<f64> = (0..mu_steps)
                .map(|i| mu_min + (mu_max - mu_min) * i as f64 / (mu_steps - 1) as f64)
                .collect();
            let split = parse_split(&split, n, tail_mass)?;
            let result = sweep_one_axis(n, &grid, split, &ids)?;
            let text = match format.as_str() {
                "csv" => result.to_csv(),
                "json" => serde_json::to_string_pretty(&result)?,
                other => return Err(Error::invalid(format!("unknown format '{other}'"))),
            };
            emit(text, out.as_ref())?;
        }
        Command::Eval {
            state,
            criteria,
            out,
        } => {
            let mix = build_mixture(&state)?;
            let ids = parse_criteria(&criteria, &mix)?;
            let engine = CriteriaEngine::new(&mix)
                .with_description(format!("{} n={}", state.state, state.n));
            let reports = engine.evaluate_many(&ids)?;
            let doc = json!({
                "state": {
                    "name": state.state,
                    "n": state.n,
                    "mu": state.mu,
                    "split": mix.mode().label(),
                },
                "moments": engine.moments(),
                "reports": reports,
            });
            emit(serde_json::to_string_pretty(&doc)?, out.as_ref())?;
        }
        Command::Sample {
            state,
            shots_z,
            shots_planar,
            seed,
            out,
        } => {
            let mix = build_mixture(&state)?;
            let records = shots::sample_shots(&mix, shots_z, shots_planar, seed)?;
            shots::write_csv_path(&records, &out)?;
            eprintln!("wrote {} shots to {}", records.len(), out.display());
        }
        Command::Ingest { input, out } => {
            let records = shots::read_csv_path(&input)?;
            let n_z = records
                .iter()
                .filter(|r| r.setting == shots::Setting::Z)
                .count();
            let doc = json!({
                "records": records.len(),
                "z_shots": n_z,
                "planar_shots": records.len() - n_z,
                "valid": true,
            });
            emit(serde_json::to_string_pretty(&doc)?, out.as_ref())?;
        }
        Command::Estimate {
            input,
            bootstrap,
            seed,
            out,
        } => {
            let records = shots::read_csv_path(&input)?;
            let est = shots::estimate(&records, bootstrap as usize, seed)?;
            let mut reports = Vec::new();
            for criterion in [PlanarCriterion::Entanglement, PlanarCriterion::Steering] {
                match shots::evaluate_from_estimates(&est, criterion) {
                    Ok((report, intervals)) => reports.push(json!({
                        "report": report,
                        "intervals": intervals,
                    })),
                    Err(Error::InvalidArgument(msg)) => reports.push(json!({
                        "skipped": msg,
                    })),
                    Err(e) => return Err(e),
                }
            }
            let doc = json!({
                "estimates": {
                    "var_jz": est.var_jz,
                    "planar_var_diff": est.planar_var_diff,
                    "planar_second_sum": est.planar_second_sum,
                    "planar_second_a": est.planar_second_a,
                    "count_z": est.count_z,
                    "count_planar": est.count_planar,
                    "mean_total_n": est.mean_total_n,
                },
                "reports": reports,
            });
            emit(serde_json::to_string_pretty(&doc)?, out.as_ref())?;
        }
        Command::Verify { n, tol } => {
            let ns: Vec<u32> = n
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<u32>()
                        .map_err(|_| Error::invalid(format!("bad register size '{s}'")))
                })
                .collect::<Result<_>>()?;
            let lines = verify_oracle_equivalence(&ns, tol)?;
            let mut all_pass = true;
            for line in &lines {
                println!(
                    "{} {:<18} max deviation {:.3e}",
                    if line.pass { "PASS" } else { "FAIL" },
                    line.label,
                    line.max_deviation
                );
                all_pass &= line.pass;
            }
            if !all_pass {
                return Err(Error::invalid("oracle equivalence check failed"));
            }
        }
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
