//! Batch verifier, exporter, and sampler for convolution-system
//! descriptions.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::json;

use convlim::convsys::ConvolutionSystem;
use convlim::cpps::{build_cpps, build_flow};
use convlim::describe;
use convlim::finprob::rat_to_string;
use convlim::l2::{koopman, theta, Operator};
use convlim::suites::{run_all, suite, SuiteInput};

#[derive(Parser)]
#[command(
    name = "convlim",
    about = "Verify convolution systems of finite probability spaces with exact arithmetic"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites against a system description.
    Verify {
        /// Description file (JSON).
        file: PathBuf,
        /// Suite name; omit to run every applicable suite.
        #[arg(long)]
        suite: Option<String>,
        /// Also write the reports as JSON to this path.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Export matrices or law tables derived from a description.
    Export {
        /// Description file (JSON).
        file: PathBuf,
        /// What to export: koopman, theta, cpps-spaces, flow-laws.
        #[arg(long)]
        what: String,
        /// Time labels "r,s,t" for a Koopman export.
        #[arg(long)]
        triple: Option<String>,
        /// Time labels "s,t" for a theta export.
        #[arg(long)]
        pair: Option<String>,
        /// Output path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Sample full-grid threads with all increments, as CSV.
    Sample {
        /// Description file (JSON).
        file: PathBuf,
        /// Left endpoint label of the summarized increment.
        #[arg(long)]
        from: String,
        /// Right endpoint label of the summarized increment.
        #[arg(long)]
        to: String,
        /// Number of draws.
        #[arg(short)]
        n: u64,
        /// Generator seed.
        #[arg(long)]
        seed: u64,
        /// Output path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the refinement-tower consistency suite.
    Tower {
        /// Description file (JSON) with a tower block.
        file: PathBuf,
    },
}

fn load(file: &PathBuf) -> Result<(Arc<ConvolutionSystem>, SuiteInput)> {
    let desc = describe::parse_file(file)?;
    let system = desc.to_system()?;
    let tower = desc.to_tower()?;
    let input = SuiteInput {
        system: Arc::clone(&system),
        tower,
    };
    Ok((system, input))
}

fn time_index(sys: &ConvolutionSystem, label: &str) -> Result<usize> {
    sys.times()
        .index_of(label)
        .with_context(|| format!("unknown time label {label:?}"))
}

fn operator_json(op: &Operator) -> serde_json::Value {
    let rows = op.out_space.len();
    let cols = op.in_space.len();
    let entries: Vec<String> = (0..rows)
        .flat_map(|i| (0..cols).map(move |j| (i, j)))
        .map(|(i, j)| rat_to_string(op.matrix.at(i, j)))
        .collect();
    json!({
        "rows": rows,
        "cols": cols,
        "row_labels": op.out_space.outcomes(),
        "col_labels": op.in_space.outcomes(),
        "entries": entries,
    })
}

fn cmd_verify(file: PathBuf, suite_name: Option<String>, json_out: Option<PathBuf>) -> Result<bool> {
    let (_, input) = load(&file)?;
    let reports = match suite_name {
        Some(name) => vec![suite(&name)?.run(&input)?],
        None => run_all(&input)?,
    };
    let mut ok = true;
    for report in &reports {
        print!("{}", report.human_summary());
        ok &= report.all_pass();
    }
    if let Some(path) = json_out {
        std::fs::write(&path, serde_json::to_string_pretty(&reports)?)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(ok)
}

fn cmd_export(
    file: PathBuf,
    what: String,
    triple: Option<String>,
    pair: Option<String>,
    out: PathBuf,
) -> Result<()> {
    let (system, _) = load(&file)?;
    let value = match what.as_str() {
        "koopman" => {
            let triple = triple.context("koopman export needs --triple r,s,t")?;
            let labels: Vec<&str> = triple.split(',').collect();
            if labels.len() != 3 {
                bail!("--triple must be three comma-separated time labels");
            }
            let r = time_index(&system, labels[0])?;
            let s = time_index(&system, labels[1])?;
            let t = time_index(&system, labels[2])?;
            if !(r < s && s < t) {
                bail!("--triple labels must be strictly increasing");
            }
            let op = koopman(system.mult(r, s, t))?;
            json!({ "what": "koopman", "triple": [labels[0], labels[1], labels[2]], "operator": operator_json(&op) })
        }
        "theta" => {
            let pair = pair.context("theta export needs --pair s,t")?;
            let labels: Vec<&str> = pair.split(',').collect();
            if labels.len() != 2 {
                bail!("--pair must be two comma-separated time labels");
            }
            let s = time_index(&system, labels[0])?;
            let t = time_index(&system, labels[1])?;
            if s >= t {
                bail!("--pair labels must be strictly increasing");
            }
            let op = theta(&system, s, t)?;
            json!({ "what": "theta", "pair": [labels[0], labels[1]], "operator": operator_json(&op) })
        }
        "cpps-spaces" => {
            let c = build_cpps(&system)?;
            let spaces: serde_json::Map<String, serde_json::Value> = c
                .flat
                .spaces()
                .iter()
                .map(|(&(s, t), space)| {
                    let key = format!(
                        "{},{}",
                        system.times().label(s),
                        system.times().label(t)
                    );
                    let weights: Vec<String> =
                        space.weights().iter().map(rat_to_string).collect();
                    (key, json!({ "outcomes": space.outcomes(), "weights": weights }))
                })
                .collect();
            json!({ "what": "cpps-spaces", "spaces": spaces })
        }
        "flow-laws" => {
            let flow = build_flow(&system)?;
            let laws: serde_json::Map<String, serde_json::Value> = flow
                .increments
                .iter()
                .map(|(&(s, t), inc)| {
                    let key = format!(
                        "{},{}",
                        system.times().label(s),
                        system.times().label(t)
                    );
                    let law = convlim::finprob::pushforward(
                        inc.map(),
                        &flow.base,
                        inc.codomain().len(),
                    );
                    let table: Vec<serde_json::Value> = inc
                        .codomain()
                        .outcomes()
                        .iter()
                        .zip(&law)
                        .map(|(o, w)| json!([o, rat_to_string(w)]))
                        .collect();
                    (key, json!(table))
                })
                .collect();
            json!({ "what": "flow-laws", "laws": laws })
        }
        other => bail!("unknown export {other:?} (expected koopman, theta, cpps-spaces, flow-laws)"),
    };
    std::fs::write(&out, serde_json::to_string_pretty(&value)?)
        .with_context(|| format!("writing {}", out.display()))?;
    Ok(())
}

fn cmd_sample(
    file: PathBuf,
    from: String,
    to: String,
    n: u64,
    seed: u64,
    out: PathBuf,
) -> Result<()> {
    let (system, _) = load(&file)?;
    let s = time_index(&system, &from)?;
    let t = time_index(&system, &to)?;
    let run = convlim::sample::sample_trajectories(&system, s, t, n, seed)?;
    std::fs::write(&out, run.csv).with_context(|| format!("writing {}", out.display()))?;
    for (i, o) in run.summary.outcomes.iter().enumerate() {
        println!(
            "X({},{}) = {o}: {} of {n} (exact {})",
            run.summary.from,
            run.summary.to,
            run.summary.counts[i],
            rat_to_string(&run.summary.exact[i])
        );
    }
    Ok(())
}

fn cmd_tower(file: PathBuf) -> Result<bool> {
    let (_, input) = load(&file)?;
    let report = suite("tower")?.run(&input)?;
    print!("{}", report.human_summary());
    Ok(report.all_pass())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify { file, suite, json } => cmd_verify(file, suite, json),
        Command::Export {
            file,
            what,
            triple,
            pair,
            out,
        } => cmd_export(file, what, triple, pair, out).map(|()| true),
        Command::Sample {
            file,
            from,
            to,
            n,
            seed,
            out,
        } => cmd_sample(file, from, to, n, seed, out).map(|()| true),
        Command::Tower { file } => cmd_tower(file),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
