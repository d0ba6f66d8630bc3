use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use avgdiff::analysis::PhaseSpeedTable;
use avgdiff::PeriodicGrid;

/// Writes `phase_speeds.csv` (and `phase_speeds.gp` when asked) into `dir`.
pub fn cmd_phase_speeds(points: usize, n_max: i64, dir: &Path, gnuplot: bool) -> Result<PhaseSpeedTable> {
    let grid = PeriodicGrid::with_points(points)?;
    let table = PhaseSpeedTable::new(grid, n_max)?;
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join("phase_speeds.csv");
    let mut w = BufWriter::new(File::create(&path).with_context(|| format!("creating {}", path.display()))?);
    writeln!(w, "# phase speeds of u_tx = u semi-discretizations K={points} L={} n-max={n_max}", grid.period())?;
    writeln!(w, "n,c_cd,c_ps,c_ad,c_exact")?;
    for r in &table.rows {
        writeln!(w, "{},{},{},{},{}", r.n, r.c_cd, r.c_ps, r.c_ad, r.c_exact)?;
    }
    w.flush()?;
    if gnuplot {
        let script = "set datafile separator ','\n\
                      set terminal pngcairo size 900,600\n\
                      set output 'phase_speeds.png'\n\
                      set xlabel 'n'\nset ylabel 'c_n'\n\
                      plot 'phase_speeds.csv' using 1:4 with points pt 6 title 'average-difference', \\\n\
                      \x20    '' using 1:3 with points pt 2 title 'spectral', \\\n\
                      \x20    '' using 1:2 with points pt 8 title 'central difference'\n";
        std::fs::write(dir.join("phase_speeds.gp"), script)?;
    }
    Ok(table)
}
