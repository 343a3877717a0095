//! Verification driver.
//!
//! Runs the check suites from `sasaki-core` over the explicit model
//! manifolds and renders one report. Suites always execute in the fixed
//! order structure, curvature, cs, lemmas, diff; within a suite the work
//! splits by sample point across the worker pool (honoring
//! `RAYON_NUM_THREADS`) and results are merged back in point order, so a
//! given configuration and seed always produces byte-identical JSON.
//!
//! Exit status: 0 when every non-control check passes, 1 when any fails,
//! 2 for unusable configurations. Controls are expected to exhibit large
//! residuals and never affect the exit status.

use anyhow::{bail, Result};
use clap::{Parser, ValueEnum};
use rayon::prelude::*;
use sasaki_core::cs_form::{
    diff_integrand_records, pullback_checks, shape_constant_record, sign_consistency_record,
    CsIntegrand,
};
use sasaki_core::lemmas;
use sasaki_core::models::Model;
use sasaki_core::report::{apply_overrides, CheckRecord, RunConfig, SuiteReport, VerificationReport};
use sasaki_core::sasakian::{
    deformation_checks_at_rho, deformation_grade_checks, deformed_fd_checks, StructureAtPoint,
};
use sasaki_core::models::space_form::space_form_checks;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

const SUITE_ORDER: [&str; 5] = ["structure", "curvature", "cs", "lemmas", "diff"];

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelChoice {
    Sphere,
    Heisenberg,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Markdown,
}

/// Checks curvature identities, Chern-Simons integrand structure, and
/// antisymmetrization lemmas on explicit Sasakian model manifolds.
#[derive(Parser)]
#[command(name = "sasaki-verify", version)]
struct Args {
    /// Model manifold to verify.
    #[arg(long, value_enum, default_value_t = ModelChoice::All)]
    model: ModelChoice,

    /// Contact parameter; the manifolds have dimension 4k+1.
    #[arg(long, default_value_t = 1)]
    k: usize,

    /// Deformation grid, comma separated rho values.
    #[arg(
        long,
        value_delimiter = ',',
        default_values_t = [0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0]
    )]
    rho: Vec<f64>,

    /// Seed for the deterministic point sampler.
    #[arg(long, default_value_t = 42)]
    seed: u64,

    /// Sample points per model; the first is always the axis point.
    #[arg(long, default_value_t = 5)]
    samples: usize,

    /// Suites to run, comma separated. An empty value gives a header-only
    /// report; order of mention never matters.
    #[arg(long, value_delimiter = ',', default_value = "structure,curvature,cs,lemmas,diff")]
    suites: Vec<String>,

    /// Override one check bound, repeatable: --tolerance <check-id>=<value>.
    #[arg(long = "tolerance", value_name = "ID=VALUE")]
    tolerance: Vec<String>,

    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,

    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Run the expensive permutation sums; required for k >= 2.
    #[arg(long)]
    slow: bool,

    /// Finite-difference step for chart derivatives.
    #[arg(long, default_value_t = 1e-3)]
    step: f64,
}

fn parse_overrides(raw: &[String]) -> Result<Vec<(String, f64)>> {
    let mut out = Vec::new();
    for item in raw {
        let Some((id, value)) = item.split_once('=') else {
            bail!("tolerance override `{item}` is not of the form <check-id>=<value>");
        };
        let value: f64 = value
            .parse()
            .map_err(|_| anyhow::anyhow!("tolerance override `{item}` has a non-numeric value"))?;
        if !(value.is_finite() && value > 0.0) {
            bail!("tolerance override `{item}` must be a positive finite bound");
        }
        out.push((id.trim().to_string(), value));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

fn validate(args: &Args) -> Result<RunConfig> {
    if args.k == 0 {
        bail!("--k must be at least 1");
    }
    if args.k >= 2 && !args.slow {
        bail!(
            "k = {} runs factorial-size permutation sums in dimension {}; pass --slow to confirm",
            args.k,
            4 * args.k + 1
        );
    }
    if args.samples == 0 {
        bail!("--samples must be at least 1");
    }
    if !(args.step.is_finite() && args.step > 0.0) {
        bail!("--step must be a positive finite number");
    }
    if args.rho.iter().any(|r| !r.is_finite()) {
        bail!("--rho values must be finite");
    }

    let mut suites: Vec<String> = Vec::new();
    for name in args.suites.iter().filter(|s| !s.is_empty()) {
        if !SUITE_ORDER.contains(&name.as_str()) {
            bail!(
                "unknown suite `{name}`; expected a subset of {}",
                SUITE_ORDER.join(", ")
            );
        }
        if !suites.contains(name) {
            suites.push(name.clone());
        }
    }
    suites.sort_by_key(|s| SUITE_ORDER.iter().position(|o| o == s));

    if suites.iter().any(|s| s == "cs" || s == "diff") && args.rho.is_empty() {
        bail!("suites cs and diff need a nonempty --rho grid");
    }

    let models = match args.model {
        ModelChoice::Sphere => vec!["sphere".to_string()],
        ModelChoice::Heisenberg => vec!["heisenberg".to_string()],
        ModelChoice::All => Model::names().iter().map(|s| s.to_string()).collect(),
    };

    Ok(RunConfig {
        models,
        k: args.k,
        suites,
        rho_grid: args.rho.clone(),
        samples: args.samples,
        seed: args.seed,
        step: args.step,
        slow: args.slow,
        overrides: parse_overrides(&args.tolerance)?,
    })
}

struct ModelRun {
    model: Model,
    structures: Vec<StructureAtPoint>,
}

fn prepare(config: &RunConfig) -> Vec<ModelRun> {
    config
        .models
        .iter()
        .map(|name| {
            let model = Model::by_name(name, config.k).expect("model names are validated");
            let points = model.sample_points(config.samples, config.seed);
            let structures: Vec<StructureAtPoint> = points
                .par_iter()
                .map(|x| StructureAtPoint::compute(&model, x, config.step))
                .collect();
            ModelRun { model, structures }
        })
        .collect()
}

/// Runs one suite over every model and sample point, merging records in
/// model order then point order.
fn run_suite(name: &str, runs: &[ModelRun], config: &RunConfig, progress: bool) -> Vec<CheckRecord> {
    let mut records = Vec::new();
    for run in runs {
        let c = run.model.space_form_constant;
        let done = AtomicUsize::new(0);
        let total = run.structures.len();
        let tick = |point: usize| {
            if progress {
                let n = done.fetch_add(1, Ordering::Relaxed) + 1;
                eprintln!(
                    "  [{name}/{}] point {point} done ({n}/{total})",
                    run.model.name
                );
            }
        };
        let mut integrands: Vec<CsIntegrand> = Vec::new();
        let mut shape_constants: Vec<f64> = Vec::new();

        let per_point: Vec<Vec<CheckRecord>> = match name {
            "structure" => run
                .structures
                .par_iter()
                .enumerate()
                .map(|(i, sp)| {
                    let recs = sp.axiom_checks(i);
                    tick(i);
                    recs
                })
                .collect(),
            "curvature" => run
                .structures
                .par_iter()
                .enumerate()
                .map(|(i, sp)| {
                    let mut recs = space_form_checks(sp, c, i);
                    recs.extend(deformation_grade_checks(sp, i));
                    for rho in &config.rho_grid {
                        recs.extend(deformation_checks_at_rho(sp, *rho, i));
                        recs.extend(deformed_fd_checks(sp, *rho, config.step, i));
                    }
                    tick(i);
                    recs
                })
                .collect(),
            "cs" => {
                let results: Vec<(CsIntegrand, Vec<CheckRecord>)> = run
                    .structures
                    .par_iter()
                    .enumerate()
                    .map(|(i, sp)| {
                        let out = pullback_checks(sp, &config.rho_grid, i, true);
                        tick(i);
                        out
                    })
                    .collect();
                let mut recs = Vec::new();
                for (integrand, r) in results {
                    integrands.push(integrand);
                    recs.push(r);
                }
                recs
            }
            "lemmas" => run
                .structures
                .par_iter()
                .enumerate()
                .map(|(i, sp)| {
                    let mut recs = lemmas::check_component_bianchi(sp, c, i);
                    recs.extend(lemmas::check_quartic_products(sp, c, i));
                    recs.extend(lemmas::check_quadratic_split_products(sp, c, i));
                    recs.extend(lemmas::check_b_collapse(sp, config.slow, i));
                    recs.extend(lemmas::check_sphere_r1_lemma(sp, c, i));
                    recs.extend(lemmas::check_space_form_s_lemma(sp, c, i));
                    recs.extend(lemmas::check_contact_lemmas(sp, i));
                    tick(i);
                    recs
                })
                .collect(),
            "diff" => {
                let results: Vec<(Vec<CheckRecord>, Option<f64>)> = run
                    .structures
                    .par_iter()
                    .enumerate()
                    .map(|(i, sp)| {
                        let out = diff_integrand_records(sp, i, true);
                        tick(i);
                        out
                    })
                    .collect();
                let mut recs = Vec::new();
                for (r, constant) in results {
                    shape_constants.extend(constant);
                    recs.push(r);
                }
                recs
            }
            other => unreachable!("suite `{other}` is validated before dispatch"),
        };
        records.extend(per_point.into_iter().flatten());

        if name == "cs" {
            records.extend(sign_consistency_record(&integrands));
        }
        if name == "diff" {
            records.extend(shape_constant_record(run.model.name, &shape_constants));
        }
    }
    records
}

fn main() -> ExitCode {
    let args = Args::parse();
    let config = match validate(&args) {
        Ok(config) => config,
        Err(err) => {
            eprintln!("error: {err}");
            return ExitCode::from(2);
        }
    };

    let progress = config.slow;
    let t0 = Instant::now();
    let runs = prepare(&config);
    if progress {
        eprintln!(
            "prepared {} model(s) x {} point(s) in {:.2}s",
            runs.len(),
            config.samples,
            t0.elapsed().as_secs_f64()
        );
    }

    let mut suites = Vec::new();
    for suite in config.suites.clone() {
        let t = Instant::now();
        if progress {
            eprintln!("suite {suite} ...");
        }
        let mut checks = run_suite(&suite, &runs, &config, progress);
        apply_overrides(&mut checks, &config.overrides);
        eprintln!(
            "suite {suite}: {} record(s) in {:.2}s",
            checks.len(),
            t.elapsed().as_secs_f64()
        );
        suites.push(SuiteReport { suite, checks });
    }

    let report = VerificationReport::new(config, suites);
    let rendered = match args.format {
        Format::Json => report.to_json(),
        Format::Markdown => report.to_markdown(),
    };
    if let Some(path) = &args.output {
        if let Err(err) = std::fs::write(path, rendered) {
            eprintln!("error: cannot write {}: {err}", path.display());
            return ExitCode::from(2);
        }
    } else {
        println!("{rendered}");
    }

    if report.all_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
