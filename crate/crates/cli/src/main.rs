use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use periodic_radiation::decayfit::log_grid;
use periodic_radiation::harness::{
    emit_report, overall, run_campaign, write_report, Campaign, CampaignKind, Report, ReportFormat,
    Verdict,
};

/// Verification campaigns for radiation conditions of periodic surface scattering.
///
/// Exit status: 0 when every check passes, 1 when any check fails (or the run could not
/// start), 2 when nothing fails but some check is indeterminate.
#[derive(Parser, Debug)]
#[command(name = "prad", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Decay exponents of the model oscillatory integrals.
    VerifyIntegrals,
    /// Boundedness of scaled mode fields and radiation residuals.
    VerifyRadiation,
    /// Decay of cell norms along the surface.
    VerifyPartA,
    /// Floquet-Bloch round trip, quasi-periodicity and Parseval.
    VerifyFb,
    /// Kernel asymptotics, the angle-gap bound, Green's representation, layer radiation.
    VerifyKernels,
    /// Flattening map and transformed coefficients of perturbed surfaces.
    VerifyPerturb,
    /// Fresnel, Hankel and generalized Fresnel functions against oracles.
    VerifySpecfun,
    /// Every campaign with default settings.
    All,
}

impl Command {
    fn kind(self) -> Option<CampaignKind> {
        Some(match self {
            Command::VerifyIntegrals => CampaignKind::IntegralTable,
            Command::VerifyRadiation => CampaignKind::Radiation,
            Command::VerifyPartA => CampaignKind::PartA,
            Command::VerifyFb => CampaignKind::Fb,
            Command::VerifyKernels => CampaignKind::Kernels,
            Command::VerifyPerturb => CampaignKind::Perturb,
            Command::VerifySpecfun => CampaignKind::Specfun,
            Command::All => return None,
        })
    }
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Format {
    Json,
    Csv,
}

impl From<Format> for ReportFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => ReportFormat::Json,
            Format::Csv => ReportFormat::Csv,
        }
    }
}

#[derive(Args, Debug)]
struct Opts {
    /// Campaign JSON (same fields as the report's campaign); its kind must match the subcommand.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Report destination; a directory for `all`. Without it the report goes to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Replaces the r grid by `--r-points` log-spaced values in `[--r-min, --r-max]`.
    #[arg(long, global = true)]
    r_min: Option<f64>,
    #[arg(long, global = true)]
    r_max: Option<f64>,
    #[arg(long, global = true)]
    r_points: Option<usize>,
    /// Worker threads; defaults to one per core.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

impl Opts {
    fn apply(&self, c: &mut Campaign) -> Result<()> {
        if let Some(seed) = self.seed {
            c.seed = seed;
        }
        if self.r_min.is_some() || self.r_max.is_some() || self.r_points.is_some() {
            if !c.kind.sweeps_r() {
                bail!("campaign {} has no r grid", c.kind.name());
            }
            let current = c.r_grid();
            let lo = self.r_min.unwrap_or(current[0]);
            let hi = self.r_max.unwrap_or(current[current.len() - 1]);
            let n = self.r_points.unwrap_or(current.len());
            if !(lo > 0.0 && hi > lo) || n < 3 {
                bail!("need 0 < r-min < r-max and at least 3 r-points");
            }
            c.r_grid = Some(log_grid(lo, hi, n));
        }
        c.validate()?;
        Ok(())
    }

    fn extension(&self) -> &'static str {
        match self.format {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

fn campaigns(cmd: Command, opts: &Opts) -> Result<Vec<Campaign>> {
    let mut list = match (cmd.kind(), &opts.config) {
        (None, Some(_)) => bail!("`all` runs the default campaigns and takes no --config"),
        (None, None) => CampaignKind::ALL
            .iter()
            .map(|&k| Campaign::new(k))
            .collect(),
        (Some(kind), None) => vec![Campaign::new(kind)],
        (Some(kind), Some(path)) => {
            let c = Campaign::from_json_file(path)?;
            if c.kind != kind {
                bail!(
                    "{} describes a {} campaign, not {}",
                    path.display(),
                    c.kind.name(),
                    kind.name()
                );
            }
            vec![c]
        }
    };
    for c in &mut list {
        opts.apply(c)?;
    }
    Ok(list)
}

fn summarize(rep: &Report) {
    eprintln!(
        "{}: {} checks, {} pass, {} fail, {} indeterminate",
        rep.campaign,
        rep.checks.len(),
        rep.count(Verdict::Pass),
        rep.count(Verdict::Fail),
        rep.count(Verdict::Indeterminate)
    );
    for c in rep.checks.iter().filter(|c| c.verdict != Verdict::Pass) {
        let measured = c
            .measured
            .map_or_else(|| "-".to_string(), |m| m.to_string());
        eprintln!(
            "  {:?} {} (measured {measured}) {}",
            c.verdict, c.id, c.note
        );
    }
}

fn emit(rep: &Report, opts: &Opts, dest: Option<&Path>) -> Result<()> {
    match dest {
        Some(path) => emit_report(rep, opts.format.into(), path)?,
        None => {
            let stdout = std::io::stdout();
            write_report(
                rep,
                opts.format.into(),
                stdout.lock(),
                Path::new("<stdout>"),
            )?;
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<Verdict> {
    let list = campaigns(cli.command, &cli.opts)?;
    let all = cli.command.kind().is_none();
    if all {
        if let Some(dir) = &cli.opts.out {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        }
    }
    let mut verdicts = Vec::new();
    for c in &list {
        let rep = run_campaign(c)?;
        summarize(&rep);
        let dest = cli.opts.out.as_ref().map(|p| {
            if all {
                p.join(format!("{}.{}", c.name, cli.opts.extension()))
            } else {
                p.clone()
            }
        });
        emit(&rep, &cli.opts, dest.as_deref())?;
        verdicts.push(rep.verdict());
    }
    Ok(overall(verdicts))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.opts.jobs.unwrap_or(0))
        .build();
    let outcome = match pool {
        Ok(pool) => pool.install(|| run(&cli)),
        Err(e) => Err(e.into()),
    };
    match outcome {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(Verdict::Indeterminate) => ExitCode::from(2),
        Ok(Verdict::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
