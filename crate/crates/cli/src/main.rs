//! Command-line front end: analyze -> design -> simulate -> learn, plus
//! case-study reproduction and PTG export.

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};
use gatenoise::cases::CaseStudy;
use gatenoise::design::{plan_relative, plan_simple};
use gatenoise::estimate::{assemble, build_report, EstimatorMode};
use gatenoise::learn::{reduced_spaces, LearnabilityReport};
use gatenoise::model::{model_from_map, model_to_map, Embedding, NoiseModel};
use gatenoise::ptg::build_ptg;
use gatenoise::schema;
use gatenoise::sim::run_plan;
use gatenoise::{Error, DEFAULT_N_MAX};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Gate set Pauli noise analysis.
///
/// Exit codes: 0 success; 2 input or parse error; 3 brute-force cap
/// exceeded (raise --n-max); 4 mode refused for this configuration
/// (e.g. relative-precision design outside fully-local 2-qubit gate sets);
/// 5 case-study verification mismatch.
#[derive(Parser)]
#[command(name = "gatenoise", version, about, long_about = None)]
struct Cli {
    /// Brute-force enumeration cap; overrides the GATENOISE_N_MAX
    /// environment variable (default 6).
    #[arg(long, global = true)]
    n_max: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute learnable/gauge dimensions and bases for a gate set and ansatz.
    Analyze {
        #[arg(long)]
        gateset: PathBuf,
        #[arg(long)]
        ansatz: PathBuf,
        /// Write the full JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit an experiment plan for the learnable space.
    Design {
        #[arg(long)]
        gateset: PathBuf,
        #[arg(long)]
        ansatz: PathBuf,
        /// "simple" (one gate per experiment) or "relative" (germ families).
        #[arg(long, default_value = "simple")]
        mode: String,
        /// Comma-separated germ powers for relative mode.
        #[arg(long, default_value = "0,8")]
        m_values: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a plan against a noise model (exact or sampled).
    Simulate {
        #[arg(long)]
        gateset: PathBuf,
        #[arg(long)]
        ansatz: PathBuf,
        #[arg(long)]
        plan: PathBuf,
        /// Ground-truth model JSON; omit to draw one from --model-seed.
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        model_seed: u64,
        #[arg(long, default_value_t = 0.01)]
        model_scale: f64,
        /// Write the generated model here (when --model is omitted).
        #[arg(long)]
        dump_model: Option<PathBuf>,
        /// 0 = exact expectations.
        #[arg(long, default_value_t = 0)]
        shots: u64,
        /// Required whenever shots > 0.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recover learnable values (and a gauge-fixed model) from results.
    Learn {
        #[arg(long)]
        gateset: PathBuf,
        #[arg(long)]
        ansatz: PathBuf,
        #[arg(long)]
        plan: PathBuf,
        #[arg(long)]
        results: PathBuf,
        /// Ground-truth model for error columns.
        #[arg(long)]
        model: Option<PathBuf>,
        /// "two-point" or "log-fit".
        #[arg(long, default_value = "two-point")]
        mode: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a CSV summary.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run a built-in configuration end to end and diff against its
    /// stored expectations.
    Casestudy {
        /// cz-single | cz-ring-fully-local | cz-ring-nn | cz-ring-covariant
        name: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Write the pattern transfer graph in GraphViz DOT format.
    ExportDot {
        #[arg(long)]
        gateset: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let n_max = cli
        .n_max
        .or_else(|| std::env::var("GATENOISE_N_MAX").ok().and_then(|v| v.parse().ok()))
        .unwrap_or(DEFAULT_N_MAX);
    match run(cli.command, n_max) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(classify(&err))
        }
    }
}

fn classify(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::CapExceeded { .. }) => 3,
        Some(Error::NotFullyLocalTwoQubit) | Some(Error::HypothesesNotMet(_)) => 4,
        Some(_) => 2,
        None => 2,
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_out(path: &Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match path {
        Some(p) => {
            std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn load_embedding(gateset: &Path, ansatz: &Path, n_max: usize) -> anyhow::Result<Embedding> {
    let gs_file: schema::GateSetFile = read_json(gateset)?;
    let gs = schema::gate_set_from_file(&gs_file)?;
    let an_file: schema::AnsatzFile = read_json(ansatz)?;
    let ansatz = schema::ansatz_from_file(&an_file, &gs)?;
    Ok(Embedding::new(gs, ansatz, n_max)?)
}

fn dims_table(report: &LearnabilityReport) -> String {
    let lg = report
        .dim_l_r_gate
        .map(|v| v.to_string())
        .unwrap_or_else(|| "unavailable".to_string());
    format!(
        "dim(X_R) dim(L_R) dim(X_R^G) dim(L_R^G)\n{} {} {} {}\n(method: {}, dim(T_R) = {})\n",
        report.dim_x_r,
        report.dim_l_r,
        report.dim_x_r_gate,
        lg,
        report.method.as_str(),
        report.dim_t_r
    )
}

fn run(command: Command, n_max: usize) -> anyhow::Result<ExitCode> {
    match command {
        Command::Analyze { gateset, ansatz, out } => {
            let emb = load_embedding(&gateset, &ansatz, n_max)?;
            let report = reduced_spaces(&emb, n_max)?;
            print!("{}", dims_table(&report));
            if out.is_some() {
                let file = schema::learnability_to_file(&emb, &report);
                write_out(&out, &format!("{}\n", serde_json::to_string_pretty(&file)?))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Design { gateset, ansatz, mode, m_values, out } => {
            let emb = load_embedding(&gateset, &ansatz, n_max)?;
            let plan = match mode.as_str() {
                "simple" => plan_simple(&emb, n_max)?,
                "relative" => {
                    let ms: Vec<u32> = m_values
                        .split(',')
                        .map(|s| s.trim().parse::<u32>())
                        .collect::<std::result::Result<_, _>>()
                        .map_err(|e| anyhow!("bad --m-values: {e}"))?;
                    plan_relative(&emb, &ms, n_max)?
                }
                other => return Err(anyhow!(Error::Parse(format!("unknown mode {other:?}")))),
            };
            eprintln!("{} experiments over {} targets", plan.specs.len(), plan.targets.len());
            let file = schema::plan_to_file(&emb, &plan);
            write_out(&out, &format!("{}\n", serde_json::to_string_pretty(&file)?))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Simulate {
            gateset,
            ansatz,
            plan,
            model,
            model_seed,
            model_scale,
            dump_model,
            shots,
            seed,
            out,
        } => {
            let emb = load_embedding(&gateset, &ansatz, n_max)?;
            let plan_file: schema::PlanFile = read_json(&plan)?;
            let plan = schema::plan_from_file(&emb, &plan_file)?;
            let model = match model {
                Some(path) => {
                    let map: std::collections::BTreeMap<String, f64> = read_json(&path)?;
                    model_from_map(&emb, &map)?
                }
                None => {
                    let m = NoiseModel::random(&emb, model_seed, model_scale);
                    if let Some(p) = &dump_model {
                        let map = model_to_map(&emb, &m);
                        std::fs::write(p, serde_json::to_string_pretty(&map)?)?;
                    }
                    m
                }
            };
            let seed = match (shots, seed) {
                (0, s) => s.unwrap_or(0),
                (_, Some(s)) => s,
                (_, None) => {
                    return Err(anyhow!(Error::Parse(
                        "--seed is required when shots > 0".into()
                    )))
                }
            };
            let results = run_plan(&emb, &model, &plan, shots, seed)?;
            write_out(&out, &schema::results_to_jsonl(&results))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Learn { gateset, ansatz, plan, results, model, mode, out, csv } => {
            let emb = load_embedding(&gateset, &ansatz, n_max)?;
            let plan_file: schema::PlanFile = read_json(&plan)?;
            let plan = schema::plan_from_file(&emb, &plan_file)?;
            let text = std::fs::read_to_string(&results)
                .with_context(|| format!("reading {}", results.display()))?;
            let results = schema::results_from_jsonl(&text)?;
            let truth = match model {
                Some(path) => {
                    let map: std::collections::BTreeMap<String, f64> = read_json(&path)?;
                    Some(model_from_map(&emb, &map)?)
                }
                None => None,
            };
            let mode = match mode.as_str() {
                "two-point" => EstimatorMode::TwoPoint,
                "log-fit" => EstimatorMode::LogFit,
                other => return Err(anyhow!(Error::Parse(format!("unknown mode {other:?}")))),
            };
            let (shots, seed) = results.first().map(|r| (r.shots, r.seed)).unwrap_or((0, 0));
            let estimates = assemble(&plan, &results, mode)?;
            let report = build_report(&emb, &plan, &estimates, truth.as_ref(), shots, seed)?;
            if let Some(p) = &csv {
                std::fs::write(p, schema::estimation_to_csv(&report))?;
            }
            let file = schema::estimation_to_file(&emb, &report);
            write_out(&out, &format!("{}\n", serde_json::to_string_pretty(&file)?))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Casestudy { name, n, seed } => {
            let case = CaseStudy::from_name(&name)
                .ok_or_else(|| anyhow!(Error::Parse(format!("unknown case study {name:?}"))))?;
            let n = n.unwrap_or_else(|| case.default_n());
            run_case_study(case, n, seed, n_max)
        }
        Command::ExportDot { gateset, out } => {
            let gs_file: schema::GateSetFile = read_json(&gateset)?;
            let gs = schema::gate_set_from_file(&gs_file)?;
            let ptg = build_ptg(&gs, n_max)?;
            write_out(&out, &ptg.to_dot())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run_case_study(
    case: CaseStudy,
    n: usize,
    seed: u64,
    n_max: usize,
) -> anyhow::Result<ExitCode> {
    let mut pass = true;
    let check = |pass: &mut bool, name: &str, ok: bool, detail: String| {
        println!("[{}] {name}: {detail}", if ok { "PASS" } else { "FAIL" });
        *pass &= ok;
    };

    let emb = case.build(n, n_max)?;
    let report = reduced_spaces(&emb, n_max)?;
    let (x_r, l_r, x_r_gate, l_r_gate) = case.expected_dims(n);
    let got_lg = report
        .dim_l_r_gate
        .map(|v| v.to_string())
        .unwrap_or_else(|| "unavailable".to_string());
    let dims_ok = report.dim_x_r == x_r
        && report.dim_l_r == l_r
        && report.dim_x_r_gate == x_r_gate
        && l_r_gate.is_none_or(|e| report.dim_l_r_gate == Some(e));
    check(
        &mut pass,
        "dims",
        dims_ok,
        format!(
            "{} {} {} {} (expected {} {} {} {})",
            report.dim_x_r,
            report.dim_l_r,
            report.dim_x_r_gate,
            got_lg,
            x_r,
            l_r,
            x_r_gate,
            l_r_gate.map(|v| v.to_string()).unwrap_or_else(|| "brute-force".into()),
        ),
    );

    // Exact-data learning closes the loop: every target recovered.
    let plan = plan_simple(&emb, n_max)?;
    let model = NoiseModel::random(&emb, seed, 0.02);
    let results = run_plan(&emb, &model, &plan, 0, seed)?;
    let estimates = assemble(&plan, &results, EstimatorMode::TwoPoint)?;
    let max_err = estimates
        .iter()
        .map(|e| {
            let truth = model.covector_value(&plan.targets[e.target].covector);
            (e.f_hat.value - truth).abs()
        })
        .fold(0.0f64, f64::max);
    check(
        &mut pass,
        "exact-data learning",
        max_err <= 1e-9,
        format!("max |error| = {max_err:.2e} over {} targets", plan.targets.len()),
    );

    // Gauge invariance: identical estimates after shifting along every
    // gauge basis direction.
    let mut max_shift = 0.0f64;
    for d in &report.gauge_basis {
        let shifted = gatenoise::model::gauge_transform_reduced(&model, d, 0.1);
        let results2 = run_plan(&emb, &shifted, &plan, 0, seed)?;
        let estimates2 = assemble(&plan, &results2, EstimatorMode::TwoPoint)?;
        for (a, b) in estimates.iter().zip(estimates2.iter()) {
            max_shift = max_shift.max((a.f_hat.value - b.f_hat.value).abs());
        }
    }
    check(
        &mut pass,
        "gauge invariance",
        max_shift <= 1e-9,
        format!("max |shift| = {max_shift:.2e} over {} directions", report.gauge_basis.len()),
    );

    if pass {
        println!("PASS {}", case.name());
        Ok(ExitCode::SUCCESS)
    } else {
        println!("FAIL {}", case.name());
        Ok(ExitCode::from(5))
    }
}
