use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::Context;
use friendrec::dataset::Dataset;
use friendrec::eval::{build_test_cohorts, run_benchmark, sweep_weights, write_report, write_sweep_table};
use friendrec::synth::generate_dataset;
use friendrec::{suggest_with, Approach, Snapshot, Timestamp, UserId};

use crate::config::RunConfig;
use crate::{Cli, Command, GlobalOpts};

/// Exit status 1 for usage and configuration problems, 2 for data problems.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(anyhow::Error),
}

impl CliError {
    pub fn status(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Data(e) => write!(f, "{e:#}"),
        }
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Data(e)
    }
}

impl From<friendrec::Error> for CliError {
    fn from(e: friendrec::Error) -> Self {
        match e {
            friendrec::Error::InvalidParams(_) | friendrec::Error::EmptyGrid(_) => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Data(other.into()),
        }
    }
}

type CliResult<T = ()> = Result<T, CliError>;

fn resolve_config(g: &GlobalOpts) -> CliResult<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &g.config {
        cfg.apply_file(path).map_err(CliError::Usage)?;
    }
    for o in &g.overrides {
        cfg.apply_override(o).map_err(CliError::Usage)?;
    }
    if let Some(seed) = g.seed {
        cfg.seed = seed;
        cfg.synth.seed = seed;
    }
    if let Some(b) = g.boundary {
        cfg.split_boundary = Some(b);
    }
    cfg.validate().map_err(CliError::Usage)?;
    Ok(cfg)
}

fn init_threads(threads: Option<usize>) -> CliResult {
    if let Some(n) = threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot size worker pool: {e}")))?;
    }
    Ok(())
}

fn parse_approaches(names: &[String]) -> CliResult<Vec<Approach>> {
    if names.is_empty() {
        return Ok(Approach::ALL.to_vec());
    }
    names
        .iter()
        .map(|n| n.trim().parse::<Approach>().map_err(CliError::Usage))
        .collect()
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)
            .with_context(|| format!("cannot create {}", dir.display()))?;
    }
    let f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn boundary_for(cfg: &RunConfig, data: &Dataset) -> CliResult<Timestamp> {
    if let Some(b) = cfg.split_boundary {
        return Ok(b);
    }
    data.meta_boundary()?.ok_or_else(|| {
        CliError::Usage(
            "no split boundary: pass --boundary, set split_boundary, or use a dataset with meta"
                .into(),
        )
    })
}

pub fn run(cli: Cli) -> CliResult {
    let cfg = resolve_config(&cli.global)?;
    init_threads(cli.global.threads)?;
    match cli.command {
        Command::Generate { out } => generate(&cfg, &out),
        Command::Suggest {
            data,
            users,
            approach,
            top,
        } => suggest(&cfg, &data, &users, &approach, top),
        Command::Benchmark {
            data,
            out,
            approaches,
        } => benchmark(&cfg, &data, &out, &approaches),
        Command::Sweep { data, out, step } => sweep(&cfg, &data, &out, step),
        Command::Validate { data } => validate(&data),
    }
}

fn generate(cfg: &RunConfig, out: &Path) -> CliResult {
    cfg.synth.validate()?;
    let s = generate_dataset(&cfg.synth, out)?;
    println!(
        "wrote {}: users={} edges={} future_edges={} attributes={} interactions={}",
        out.display(),
        s.users,
        s.edges,
        s.future_edges,
        s.attributes,
        s.interactions
    );
    Ok(())
}

fn suggest(cfg: &RunConfig, dir: &Path, users: &[u32], approach: &str, top: usize) -> CliResult {
    let approach: Approach = approach.parse().map_err(CliError::Usage)?;
    let data = Dataset::open(dir)?;
    let snapshot: Snapshot = data.snapshot(cfg.split_boundary)?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    for &u in users {
        let list = suggest_with(&snapshot, UserId(u), approach, &cfg.params, &cfg.current)?;
        list.truncated(top)
            .write_tsv(&mut out)
            .context("cannot write suggestions")?;
    }
    out.flush().context("cannot write suggestions")?;
    Ok(())
}

fn benchmark(cfg: &RunConfig, dir: &Path, out: &Path, approaches: &[String]) -> CliResult {
    let approaches = parse_approaches(approaches)?;
    let data = Dataset::open(dir)?;
    let boundary = boundary_for(cfg, &data)?;
    let x = data.experiment(boundary, cfg.min_new)?;
    log::info!(
        "snapshot: {} users, {} edges; {} eligible; {} new friendships",
        x.snapshot.user_count(),
        x.snapshot.edge_count(),
        x.eligible.len(),
        x.new_edges.len()
    );
    let cohorts = build_test_cohorts(&x.snapshot, &x.new_edges, &cfg.cohorts, cfg.seed)?;
    let reports = run_benchmark(&x.snapshot, &cohorts, &approaches, &cfg.params, &cfg.current)?;
    write_report(create(out)?, &reports)
        .with_context(|| format!("cannot write {}", out.display()))?;
    println!("cohort,approach,mean_auc,users_evaluated,auc_skipped,p_at_10");
    for r in &reports {
        println!(
            "{},{},{:.6},{},{},{:.6}",
            r.cohort,
            r.approach,
            r.mean_auc,
            r.users_evaluated,
            r.auc_skipped,
            r.precision_curve[9]
        );
    }
    Ok(())
}

fn sweep(cfg: &RunConfig, dir: &Path, out: &Path, step: Option<f64>) -> CliResult {
    let step = step.unwrap_or(cfg.sweep_step);
    let data = Dataset::open(dir)?;
    let boundary = boundary_for(cfg, &data)?;
    let x = data.experiment(boundary, cfg.min_new)?;
    let cohorts = build_test_cohorts(
        &x.snapshot,
        &x.new_edges,
        std::slice::from_ref(&cfg.sweep_cohort),
        cfg.seed,
    )?;
    let result = sweep_weights(&x.snapshot, &cohorts[0], step, &cfg.params)?;
    write_sweep_table(create(out)?, &result.rows)
        .with_context(|| format!("cannot write {}", out.display()))?;
    let [a, b, c] = result.best_row.weights;
    println!(
        "best w_friends={a:.2} w_schools={b:.2} w_groups={c:.2} mean_p10={:.6} ({} users)",
        result.best_row.mean_p10,
        cohorts[0].users.len()
    );
    Ok(())
}

fn validate(dir: &Path) -> CliResult {
    let report = Dataset::validate(dir)?;
    println!(
        "records={} users={} edges={} errors={} violations={}",
        report.records_read,
        report.users,
        report.edges,
        report.errors.len(),
        report.violations.len()
    );
    for e in &report.errors {
        println!("error: {e}");
    }
    for v in &report.violations {
        println!("violation: {v}");
    }
    if report.is_clean() {
        Ok(())
    } else {
        Err(CliError::Data(anyhow::anyhow!("{} invalid", dir.display())))
    }
}
