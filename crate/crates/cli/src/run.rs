use std::collections::BTreeSet;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use avgdiff::analysis::{
    exact_linear_solution_with_rate, l2_error, step_exact_solution_with_rate, step_initial, FourierData,
};
use avgdiff::{
    discrete_energy, run_recording, Error as SchemeError, GridFunction, PeriodicGrid, SchemeInstance, Trajectory,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{InitialCondition, RunConfig};

/// Failure of `run`, split by exit code.
#[derive(Debug)]
pub enum RunFailure {
    Config(anyhow::Error),
    Solver { step: usize, source: SchemeError },
}

impl From<anyhow::Error> for RunFailure {
    fn from(e: anyhow::Error) -> Self {
        RunFailure::Config(e)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub final_error: Option<f64>,
    pub max_energy_drift: f64,
    pub solver_iterations: usize,
}

pub fn initial_condition(cfg: &RunConfig, grid: PeriodicGrid) -> Result<GridFunction> {
    Ok(match &cfg.init {
        InitialCondition::Step => step_initial(&grid)?,
        InitialCondition::Sine(n) => {
            let kappa = grid.wavenumber(*n);
            GridFunction::from_fn(grid, |x| (kappa * x).sin())
        }
        InitialCondition::File(path) => read_values(path, grid)?,
        InitialCondition::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let u = GridFunction::new(grid, (0..grid.points()).map(|_| rng.gen_range(-1.0..1.0)).collect())?;
            let u = u.without_mean();
            let m = u.max_abs();
            u.scale(1.0 / m)
        }
    })
}

/// Whitespace- or comma-separated values at `x = 0, Δx, …`; `#` starts a comment.
fn read_values(path: &Path, grid: PeriodicGrid) -> Result<GridFunction> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let values = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(|l| l.split(|c: char| c == ',' || c.is_whitespace()))
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().with_context(|| format!("bad value '{t}' in {}", path.display())))
        .collect::<Result<Vec<_>>>()?;
    Ok(GridFunction::new(grid, values)?)
}

/// Exact reference solution, available for quadratic densities with step or
/// sine data.
fn exact_reference(cfg: &RunConfig, grid: PeriodicGrid) -> Option<impl Fn(f64) -> Result<GridFunction> + '_> {
    let rate = 2.0 * cfg.density.quadratic_only()?;
    let sine = match cfg.init {
        InitialCondition::Step => None,
        InitialCondition::Sine(n) => {
            let mut data = FourierData::new();
            data.insert_real_pair(n, Complex64::new(0.0, -0.5));
            Some(data)
        }
        _ => return None,
    };
    Some(move |t: f64| match &sine {
        None => Ok(step_exact_solution_with_rate(t, &grid, cfg.exact_truncation, rate)?),
        Some(data) => Ok(exact_linear_solution_with_rate(data, t, &grid, rate)),
    })
}

fn csv_writer(dir: &Path, name: &str, cfg: &RunConfig, header: &str) -> Result<BufWriter<File>> {
    let path = dir.join(name);
    let mut w = BufWriter::new(File::create(&path).with_context(|| format!("creating {}", path.display()))?);
    writeln!(w, "# {}", cfg.describe())?;
    writeln!(w, "{header}")?;
    Ok(w)
}

pub fn cmd_run(cfg: &RunConfig) -> std::result::Result<RunSummary, RunFailure> {
    let grid = PeriodicGrid::with_points(cfg.points).context("grid")?;
    let u0 = initial_condition(cfg, grid)?;
    let scheme = SchemeInstance::new(cfg.scheme, grid, cfg.density.clone(), cfg.dt, cfg.solver).context("scheme")?;

    let traj = if cfg.steps == 0 {
        Trajectory {
            dt: cfg.dt,
            snapshots: vec![(0, u0.clone())],
            energies: vec![avgdiff::DiscreteEnergy { time_index: 0, value: discrete_energy(&u0, &cfg.density) }],
            iterations: Vec::new(),
        }
    } else {
        let keep: BTreeSet<usize> = cfg.snapshot_steps.iter().copied().collect();
        run_recording(&scheme, &u0, cfg.steps, |m| keep.contains(&m)).map_err(|e| match e {
            SchemeError::StepFailed { step, source } => RunFailure::Solver { step, source: *source },
            other => RunFailure::Config(other.into()),
        })?
    };
    write_outputs(cfg, grid, &traj).map_err(RunFailure::Config)
}

fn write_outputs(cfg: &RunConfig, grid: PeriodicGrid, traj: &Trajectory) -> Result<RunSummary> {
    std::fs::create_dir_all(&cfg.output_dir).with_context(|| format!("creating {}", cfg.output_dir.display()))?;
    let dir = cfg.output_dir.as_path();
    let requested: BTreeSet<usize> = cfg.snapshot_steps.iter().copied().collect();
    let snapshots: Vec<_> = traj.snapshots.iter().filter(|(m, _)| requested.contains(m)).collect();

    let mut w = csv_writer(dir, "snapshots.csv", cfg, "t,x,u")?;
    for (m, u) in &snapshots {
        let t = *m as f64 * cfg.dt;
        for (i, v) in u.values().iter().enumerate() {
            writeln!(w, "{t},{},{v}", grid.x(i))?;
        }
    }
    w.flush()?;

    let h0 = traj.energies[0].value;
    let mut w = csv_writer(dir, "energy.csv", cfg, "t,H_d,drift")?;
    for e in &traj.energies {
        writeln!(w, "{},{},{}", e.time_index as f64 * cfg.dt, e.value, e.value - h0)?;
    }
    w.flush()?;

    let mut final_error = None;
    if let Some(exact) = exact_reference(cfg, grid) {
        let mut w = csv_writer(dir, "error.csv", cfg, "t,l2_error")?;
        for (m, u) in &snapshots {
            let t = *m as f64 * cfg.dt;
            let err = l2_error(u, &exact(t)?)?;
            writeln!(w, "{t},{err}")?;
            final_error = Some(err);
        }
        w.flush()?;
    }

    if cfg.gnuplot {
        write_run_gnuplot(cfg, dir)?;
    }

    Ok(RunSummary {
        final_error,
        max_energy_drift: traj.max_relative_drift(),
        solver_iterations: traj.total_iterations(),
    })
}

fn write_run_gnuplot(cfg: &RunConfig, dir: &Path) -> Result<()> {
    let times: Vec<String> = cfg.snapshot_times.iter().map(|t| t.to_string()).collect();
    let script = format!(
        "# {desc}\n\
         set datafile separator ','\n\
         set terminal pngcairo size 900,600\n\
         set output 'snapshots.png'\n\
         set xlabel 'x'\nset ylabel 'u'\n\
         times = \"{times}\"\n\
         plot for [t in times] 'snapshots.csv' using 2:($1 == t + 0 ? $3 : 1/0) with lines title 't = '.t\n\
         set output 'energy.png'\n\
         set xlabel 't'\nset ylabel 'H_d - H_d(0)'\n\
         plot 'energy.csv' using 1:3 with lines notitle\n",
        desc = cfg.describe(),
        times = times.join(" "),
    );
    std::fs::write(dir.join("plot.gp"), script)?;
    Ok(())
}

pub fn summary_line(cfg: &RunConfig, s: &RunSummary) -> String {
    let err = s.final_error.map_or_else(|| "n/a".to_string(), |e| format!("{e:.6}"));
    format!(
        "scheme={} K={} dt={} t={} final_error={} max_energy_drift={:.3e} solver_iterations={}",
        cfg.scheme, cfg.points, cfg.dt, cfg.t_end, err, s.max_energy_drift, s.solver_iterations
    )
}

pub fn check_output_dir(dir: &Path) -> Result<()> {
    if dir.exists() && !dir.is_dir() {
        bail!("{} exists and is not a directory", dir.display());
    }
    Ok(())
}
