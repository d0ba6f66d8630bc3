//! Run configuration: built-in defaults, then `AVGDIFF_OUTPUT_DIR`, then an
//! optional TOML file, then command-line flags.

use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use avgdiff::{HamiltonianDensity, MeanModePolicy, SchemeKind, SolverConfig};
use clap::Args;
use serde::Deserialize;

pub const OUTPUT_DIR_ENV: &str = "AVGDIFF_OUTPUT_DIR";

#[derive(Debug, Clone, PartialEq)]
pub enum InitialCondition {
    Step,
    Sine(i64),
    File(PathBuf),
    /// Zero-mean random datum with `‖u‖∞ = 1`, drawn from `seed`.
    Random,
}

impl std::str::FromStr for InitialCondition {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "step" {
            return Ok(Self::Step);
        }
        if s == "random" {
            return Ok(Self::Random);
        }
        if let Some(n) = s.strip_prefix("sine:") {
            let n: i64 = n.trim().parse().map_err(|e| format!("bad mode in '{s}': {e}"))?;
            if n == 0 {
                return Err("sine mode must be nonzero".into());
            }
            return Ok(Self::Sine(n));
        }
        if let Some(p) = s.strip_prefix("file:") {
            return Ok(Self::File(PathBuf::from(p)));
        }
        Err(format!("unknown initial condition '{s}' (expected step, sine:n, file:path or random)"))
    }
}

impl fmt::Display for InitialCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Step => f.write_str("step"),
            Self::Sine(n) => write!(f, "sine:{n}"),
            Self::File(p) => write!(f, "file:{}", p.display()),
            Self::Random => f.write_str("random"),
        }
    }
}

/// Flags of `avgdiff run`. Every flag is optional so the file and defaults
/// can fill in the rest.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// Scheme: cd, ps or ad.
    #[arg(long)]
    pub scheme: Option<SchemeKind>,
    /// Number of grid points (odd).
    #[arg(long = "K", alias = "k")]
    pub points: Option<usize>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Energy density, "poly:c0,c1,...,cP".
    #[arg(long)]
    pub density: Option<String>,
    /// step, sine:n, file:path or random.
    #[arg(long)]
    pub init: Option<InitialCondition>,
    /// Comma-separated snapshot times (multiples of dt).
    #[arg(long, value_delimiter = ',')]
    pub snapshot_times: Option<Vec<f64>>,
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
    /// Truncation of the exact series solution.
    #[arg(long)]
    pub exact_truncation: Option<u64>,
    /// project-zero, preserve or reject.
    #[arg(long)]
    pub mean_mode_policy: Option<MeanModePolicy>,
    #[arg(long)]
    pub fp_tol: Option<f64>,
    #[arg(long)]
    pub fp_max_iter: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Also write a gnuplot script next to the CSV files.
    #[arg(long)]
    pub gnuplot: bool,
    /// TOML file with the same keys as the flags (kebab-case).
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
struct FileConfig {
    scheme: Option<String>,
    #[serde(rename = "K", alias = "k")]
    points: Option<usize>,
    dt: Option<f64>,
    t_end: Option<f64>,
    density: Option<String>,
    init: Option<String>,
    snapshot_times: Option<Vec<f64>>,
    output_dir: Option<PathBuf>,
    exact_truncation: Option<u64>,
    mean_mode_policy: Option<String>,
    fp_tol: Option<f64>,
    fp_max_iter: Option<usize>,
    seed: Option<u64>,
    gnuplot: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scheme: SchemeKind,
    pub points: usize,
    pub dt: f64,
    pub t_end: f64,
    pub density: HamiltonianDensity,
    pub init: InitialCondition,
    pub snapshot_times: Vec<f64>,
    pub output_dir: PathBuf,
    pub exact_truncation: u64,
    pub solver: SolverConfig,
    pub seed: u64,
    pub gnuplot: bool,
    pub steps: usize,
    /// Step indices matching `snapshot_times`.
    pub snapshot_steps: Vec<usize>,
}

fn parse_field<T: std::str::FromStr<Err = String>>(name: &str, v: Option<String>) -> Result<Option<T>> {
    v.map(|s| s.parse::<T>().map_err(|e| anyhow::anyhow!("{name}: {e}"))).transpose()
}

/// Integer `n` with `value / dt = n` up to a few ulps.
fn step_count(value: f64, dt: f64, what: &str) -> Result<usize> {
    let ratio = value / dt;
    let n = ratio.round();
    if !(ratio.is_finite() && n >= 0.0) || (ratio - n).abs() > 4.0 * f64::EPSILON * n.max(1.0) {
        bail!("{what} = {value} is not an integer multiple of dt = {dt}");
    }
    Ok(n as usize)
}

impl RunConfig {
    pub fn resolve(args: RunArgs) -> Result<Self> {
        let file = match &args.config {
            Some(path) => read_file(path)?,
            None => FileConfig::default(),
        };
        let env_dir = std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from);

        let scheme = args.scheme.or(parse_field("scheme", file.scheme)?).unwrap_or(SchemeKind::AverageDiff);
        let points = args.points.or(file.points).unwrap_or(129);
        let dt = args.dt.or(file.dt).unwrap_or(0.01);
        let t_end = args.t_end.or(file.t_end).unwrap_or(50.0);
        let density = args.density.or(file.density).unwrap_or_else(|| "poly:0,0,0.5".into());
        let density: HamiltonianDensity = density.parse().context("density")?;
        let init = args.init.or(parse_field("init", file.init)?).unwrap_or(InitialCondition::Step);
        let output_dir = args.output_dir.or(file.output_dir).or(env_dir).unwrap_or_else(|| PathBuf::from("out"));
        let exact_truncation = args.exact_truncation.or(file.exact_truncation).unwrap_or(100_000);
        let defaults = SolverConfig::default();
        let solver = SolverConfig {
            fp_tol: args.fp_tol.or(file.fp_tol).unwrap_or(defaults.fp_tol),
            fp_max_iter: args.fp_max_iter.or(file.fp_max_iter).unwrap_or(defaults.fp_max_iter),
            mean_mode_policy: args
                .mean_mode_policy
                .or(parse_field("mean-mode-policy", file.mean_mode_policy)?)
                .unwrap_or(defaults.mean_mode_policy),
        };
        let seed = args.seed.or(file.seed).unwrap_or(0);
        let gnuplot = args.gnuplot || file.gnuplot.unwrap_or(false);

        if !(dt.is_finite() && dt > 0.0) {
            bail!("dt = {dt} must be positive");
        }
        if !(t_end.is_finite() && t_end >= 0.0) {
            bail!("t-end = {t_end} must be non-negative");
        }
        if exact_truncation == 0 {
            bail!("exact-truncation must be at least 1");
        }
        solver.validate()?;
        let steps = step_count(t_end, dt, "t-end")?;

        let mut snapshot_times = args.snapshot_times.or(file.snapshot_times).unwrap_or_else(|| vec![0.0, t_end]);
        let mut snapshot_steps = snapshot_times
            .iter()
            .map(|&t| {
                let m = step_count(t, dt, "snapshot time")?;
                if m > steps {
                    bail!("snapshot time {t} is after t-end = {t_end}");
                }
                Ok(m)
            })
            .collect::<Result<Vec<_>>>()?;
        snapshot_steps.sort_unstable();
        snapshot_steps.dedup();
        snapshot_times = snapshot_steps.iter().map(|&m| m as f64 * dt).collect();

        Ok(Self {
            scheme,
            points,
            dt,
            t_end,
            density,
            init,
            snapshot_times,
            output_dir,
            exact_truncation,
            solver,
            seed,
            gnuplot,
            steps,
            snapshot_steps,
        })
    }

    /// One-line echo of the full configuration for CSV comment headers.
    pub fn describe(&self) -> String {
        let times: Vec<String> = self.snapshot_times.iter().map(|t| t.to_string()).collect();
        format!(
            "scheme={} K={} dt={} t-end={} steps={} density={} init={} snapshot-times={} exact-truncation={} \
             mean-mode-policy={} fp-tol={:e} fp-max-iter={} seed={}",
            self.scheme,
            self.points,
            self.dt,
            self.t_end,
            self.steps,
            self.density,
            self.init,
            times.join(";"),
            self.exact_truncation,
            self.solver.mean_mode_policy,
            self.solver.fp_tol,
            self.solver.fp_max_iter,
            self.seed,
        )
    }
}

fn read_file(path: &Path) -> Result<FileConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}
