//! Experiment drivers behind the command line: each one reads a
//! [`RunConfig`], runs solves and writes CSV, text and SVG files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::config::{RunConfig, SweepAxis};
use crate::error::{Error, Result};
use crate::fas::{solve, SolverReport};
use crate::grid::StaggeredGrid;
use crate::operator::{Discretization, MixedDimVector};
use crate::plot::{plot_histories, plot_table, HistorySeries, SweepTable};
use crate::verify::{standard_checks, Check};

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    Ok(())
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => Error::Io(e),
        other => Error::Input(format!("csv: {other:?}")),
    }
}

/// Shortest text that parses back to `v`.
fn num(v: f64) -> String {
    let plain = format!("{v}");
    let sci = format!("{v:e}");
    if sci.len() < plain.len() {
        sci
    } else {
        plain
    }
}

fn write_csv(
    path: &Path,
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// `fields_matrix.csv`: one row per matrix cell, with the pressure and the
/// fluxes through its east and north edges. Subdomains are numbered 1, 2.
pub fn write_matrix_fields(path: &Path, grid: &StaggeredGrid, x: &MixedDimVector) -> Result<()> {
    let n = grid.cells_per_subdomain();
    let rows = (0..2).flat_map(|k| {
        (0..n).flat_map(move |j| {
            (0..n).map(move |i| {
                vec![
                    (k + 1).to_string(),
                    i.to_string(),
                    j.to_string(),
                    num(grid.x_center(k, i)),
                    num(grid.y_center(j)),
                    num(x[grid.p(k, i, j)]),
                    num(x[grid.u(k, i + 1, j)]),
                    num(x[grid.v(k, i, j + 1)]),
                ]
            })
        })
    });
    write_csv(
        path,
        &["subdomain", "i", "j", "x", "y", "p", "u_east", "v_north"],
        rows,
    )
}

/// `fields_fracture.csv`: one row per fracture segment.
pub fn write_fracture_fields(path: &Path, grid: &StaggeredGrid, x: &MixedDimVector) -> Result<()> {
    let rows = (0..grid.cells_per_subdomain()).map(|j| {
        vec![
            j.to_string(),
            num(grid.y_center(j)),
            num(x[grid.pg(j)]),
            num(x[grid.ug(j + 1)]),
        ]
    });
    write_csv(path, &["j", "y", "p_gamma", "u_gamma_north"], rows)
}

/// `history.csv`: residual norm per cycle and its reduction factor.
pub fn write_history(path: &Path, history: &[f64]) -> Result<()> {
    let rows = history.iter().enumerate().map(|(c, &r)| {
        let factor = if c == 0 {
            String::new()
        } else {
            num(r / history[c - 1])
        };
        vec![c.to_string(), num(r), factor]
    });
    write_csv(path, &["cycle", "residual_norm", "reduction_factor"], rows)
}

pub fn read_history(path: &Path) -> Result<Vec<(usize, f64)>> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    let header = r.headers().map_err(csv_err)?.clone();
    if header.get(0) != Some("cycle") || header.get(1) != Some("residual_norm") {
        return Err(Error::Input(format!(
            "{}: not a residual history",
            path.display()
        )));
    }
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(csv_err)?;
        let bad = || Error::Input(format!("{}: malformed row {:?}", path.display(), rec));
        let c = rec.get(0).and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        let v: f64 = rec.get(1).and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        out.push((c, v));
    }
    if out.is_empty() {
        return Err(Error::Input(format!("{}: no rows", path.display())));
    }
    Ok(out)
}

pub fn write_table(path: &Path, table: &SweepTable) -> Result<()> {
    let mut header = vec![table.parameter.clone()];
    header.extend(table.h_list.iter().map(|h| h.to_string()));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows = table.values.iter().zip(&table.counts).map(|(v, row)| {
        let mut rec = vec![num(*v)];
        rec.extend(
            row.iter()
                .map(|c| c.map_or_else(|| "FAIL".to_string(), |c| c.to_string())),
        );
        rec
    });
    write_csv(path, &header, rows)
}

pub fn read_table(path: &Path) -> Result<SweepTable> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    let header = r.headers().map_err(csv_err)?.clone();
    let bad = |what: &str| Error::Input(format!("{}: {what}", path.display()));
    let parameter = header
        .get(0)
        .filter(|s| !s.is_empty())
        .ok_or_else(|| bad("empty header"))?;
    let h_list = header
        .iter()
        .skip(1)
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| bad("column headers must be grid sizes"))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut values = Vec::new();
    let mut counts = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(csv_err)?;
        values.push(
            rec[0]
                .parse::<f64>()
                .map_err(|_| bad("parameter values must be numbers"))?,
        );
        counts.push(
            rec.iter()
                .skip(1)
                .map(|s| match s {
                    "FAIL" => Ok(None),
                    s => s
                        .parse()
                        .map(Some)
                        .map_err(|_| bad("entries must be counts or FAIL")),
                })
                .collect::<Result<Vec<_>>>()?,
        );
    }
    if values.is_empty() || h_list.is_empty() {
        return Err(bad("empty table"));
    }
    Ok(SweepTable {
        parameter: parameter.to_string(),
        values,
        h_list,
        counts,
    })
}

fn report_text(cfg: &RunConfig, grid: &StaggeredGrid, rep: &SolverReport, mass: f64) -> String {
    let p = &cfg.problem;
    let c = cfg.cycle_config();
    let mut s = String::new();
    let _ = writeln!(s, "cells_per_subdomain = {}", grid.cells_per_subdomain());
    let _ = writeln!(s, "unknowns = {}", grid.len());
    let _ = writeln!(s, "kf = {}", num(p.kf));
    let _ = writeln!(s, "beta = {}", num(p.beta));
    let _ = writeln!(s, "xi = {}", num(p.xi));
    let _ = writeln!(
        s,
        "cycle = {:?}({},{})",
        c.cycle_type, c.pre_smoothing, c.post_smoothing
    );
    let _ = writeln!(s, "tol = {}", num(c.tol));
    let _ = writeln!(s, "converged = {}", rep.converged);
    let _ = writeln!(s, "cycles = {}", rep.iterations);
    let _ = writeln!(s, "initial_residual = {:e}", rep.history[0]);
    let _ = writeln!(
        s,
        "final_relative_residual = {:e}",
        rep.final_relative_residual()
    );
    let _ = writeln!(s, "mean_reduction = {:.4}", rep.mean_reduction());
    let _ = writeln!(s, "non_monotone_steps = {}", rep.non_monotone_steps);
    let _ = writeln!(s, "mass_balance_defect = {mass:e}");
    let _ = writeln!(s, "wall_time_s = {:.3}", rep.wall_time.as_secs_f64());
    s
}

/// Solves the configured problem and writes `fields_matrix.csv`,
/// `fields_fracture.csv`, `history.csv` and `report.txt` into `out`.
/// Non-convergence is reported through `converged`, not as an error.
pub fn run_solve(cfg: &RunConfig, out: &Path) -> Result<SolverReport> {
    cfg.validate()?;
    let spec = cfg.spec()?;
    let grid = cfg.build_grid(cfg.grid.cells_per_subdomain)?;
    let rep = solve(&spec, &grid, &cfg.cycle_config())?;
    let mass = Discretization::new(&spec, &grid)?
        .mass_balance(&spec, &rep.solution)
        .relative_defect();
    create_dir(out)?;
    write_matrix_fields(&out.join("fields_matrix.csv"), &grid, &rep.solution)?;
    write_fracture_fields(&out.join("fields_fracture.csv"), &grid, &rep.solution)?;
    write_history(&out.join("history.csv"), &rep.history)?;
    std::fs::write(out.join("report.txt"), report_text(cfg, &grid, &rep, mass))?;
    Ok(rep)
}

/// Cycle count of one sweep cell, `None` if the solve failed or stalled.
pub fn sweep_cell(cfg: &RunConfig, axis: SweepAxis, value: f64, cells: usize) -> Option<usize> {
    let mut c = cfg.clone();
    match axis {
        SweepAxis::Kf => c.problem.kf = value,
        SweepAxis::Beta => c.problem.beta = value,
    }
    let spec = c.spec().ok()?;
    let grid = c.build_grid(cells).ok()?;
    let rep = solve(&spec, &grid, &c.cycle_config()).ok()?;
    rep.converged.then_some(rep.iterations)
}

/// Cycle counts for every parameter value of `axis` and every grid of
/// `experiment.h_list`. Cells run in parallel.
pub fn sweep(cfg: &RunConfig, axis: SweepAxis) -> Result<SweepTable> {
    cfg.validate()?;
    let values = match axis {
        SweepAxis::Kf => cfg.experiment.kf_list.clone(),
        SweepAxis::Beta => cfg.experiment.beta_list.clone(),
    };
    if values.is_empty() {
        return Err(Error::Config {
            key: match axis {
                SweepAxis::Kf => "experiment.kf_list".into(),
                SweepAxis::Beta => "experiment.beta_list".into(),
            },
            message: "must not be empty".into(),
        });
    }
    let h_list = cfg.experiment.h_list.clone();
    let jobs: Vec<(usize, usize)> = (0..values.len())
        .flat_map(|a| (0..h_list.len()).map(move |b| (a, b)))
        .collect();
    // largest grids first so the pool stays busy
    let mut order: Vec<usize> = (0..jobs.len()).collect();
    order.sort_by_key(|&j| std::cmp::Reverse(h_list[jobs[j].1]));
    let results: Vec<(usize, Option<usize>)> = order
        .par_iter()
        .map(|&j| {
            let (a, b) = jobs[j];
            (j, sweep_cell(cfg, axis, values[a], h_list[b]))
        })
        .collect();
    let mut counts = vec![vec![None; h_list.len()]; values.len()];
    for (j, c) in results {
        let (a, b) = jobs[j];
        counts[a][b] = c;
    }
    Ok(SweepTable {
        parameter: match axis {
            SweepAxis::Kf => "kf".into(),
            SweepAxis::Beta => "beta".into(),
        },
        values,
        h_list,
        counts,
    })
}

/// Runs [`sweep`] and writes `table.csv` into `out`.
pub fn run_sweep(cfg: &RunConfig, axis: SweepAxis, out: &Path) -> Result<SweepTable> {
    let table = sweep(cfg, axis)?;
    create_dir(out)?;
    write_table(&out.join("table.csv"), &table)?;
    Ok(table)
}

/// Solves on every grid of `experiment.h_list` down to
/// `experiment.convergence_tol`, writing `history_h<n>.csv` per grid,
/// `convergence.csv` with the cycle counts and `convergence.svg`.
pub fn run_convergence(cfg: &RunConfig, out: &Path) -> Result<Vec<(usize, SolverReport)>> {
    cfg.validate()?;
    let mut c = cfg.clone();
    c.cycle.tol = cfg.experiment.convergence_tol;
    let spec = c.spec()?;
    let cycle = c.cycle_config();
    let reports = cfg
        .experiment
        .h_list
        .par_iter()
        .map(|&h| {
            let grid = c.build_grid(h)?;
            Ok((h, solve(&spec, &grid, &cycle)?))
        })
        .collect::<Result<Vec<_>>>()?;
    create_dir(out)?;
    for (h, rep) in &reports {
        write_history(&out.join(format!("history_h{h}.csv")), &rep.history)?;
    }
    write_csv(
        &out.join("convergence.csv"),
        &["h_inv", "cycles", "converged", "mean_reduction"],
        reports.iter().map(|(h, r)| {
            vec![
                h.to_string(),
                r.iterations.to_string(),
                r.converged.to_string(),
                format!("{:.4}", r.mean_reduction()),
            ]
        }),
    )?;
    let series: Vec<HistorySeries> = reports
        .iter()
        .map(|(h, r)| HistorySeries {
            label: format!("h = 1/{h}"),
            points: r.history.iter().copied().enumerate().collect(),
        })
        .collect();
    plot_histories(&series, &out.join("convergence.svg"))?;
    Ok(reports)
}

/// The verification suite on the `experiment.verify_cells` grid.
pub fn run_verify(cfg: &RunConfig) -> Result<Vec<Check>> {
    cfg.validate()?;
    let spec = cfg.spec()?;
    let n = cfg.experiment.verify_cells;
    let grid = cfg.build_grid(n).map_err(|e| match e {
        Error::Config { message, .. } => Error::Config {
            key: "experiment.verify_cells".into(),
            message,
        },
        e => e,
    })?;
    standard_checks(&spec, &grid, &cfg.cycle_config())
}

/// Draws residual histories (several files overlay into one chart) or a
/// sweep table (a single file) into `output`.
pub fn run_plot(inputs: &[PathBuf], output: &Path) -> Result<()> {
    if inputs.is_empty() {
        return Err(Error::Input("no input files".into()));
    }
    let first = std::fs::read_to_string(&inputs[0])
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", inputs[0].display())))?;
    let header = first.lines().next().unwrap_or("").trim();
    if header.is_empty() {
        return Err(Error::Input(format!("{}: empty file", inputs[0].display())));
    }
    if let Some(dir) = output.parent().filter(|d| !d.as_os_str().is_empty()) {
        create_dir(dir)?;
    }
    if header.starts_with("cycle,") {
        let series = inputs
            .iter()
            .map(|p| {
                Ok(HistorySeries {
                    label: p
                        .file_stem()
                        .map(|s| s.to_string_lossy().into_owned())
                        .unwrap_or_default(),
                    points: read_history(p)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        plot_histories(&series, output)
    } else {
        if inputs.len() > 1 {
            return Err(Error::Input(
                "sweep tables are plotted one at a time".into(),
            ));
        }
        plot_table(&read_table(&inputs[0])?, output)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format_round_trips() {
        for v in [0.0, 1e-6, 0.0625, 1e6, 123.456, -2.5e-300] {
            assert_eq!(num(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(num(1e-6), "1e-6");
        assert_eq!(num(10.0), "10");
    }

    #[test]
    fn history_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("h.csv");
        write_history(&p, &[2.0, 0.5, 0.1]).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        assert_eq!(
            text,
            "cycle,residual_norm,reduction_factor\n0,2,\n1,0.5,0.25\n2,0.1,0.2\n"
        );
        assert_eq!(
            read_history(&p).unwrap(),
            vec![(0, 2.0), (1, 0.5), (2, 0.1)]
        );
    }

    #[test]
    fn table_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.csv");
        let t = SweepTable {
            parameter: "kf".into(),
            values: vec![1e-6, 1.0],
            h_list: vec![8, 16],
            counts: vec![vec![Some(7), None], vec![Some(9), Some(10)]],
        };
        write_table(&p, &t).unwrap();
        assert_eq!(
            std::fs::read_to_string(&p).unwrap(),
            "kf,8,16\n1e-6,7,FAIL\n1,9,10\n"
        );
        assert_eq!(read_table(&p).unwrap(), t);
    }

    #[test]
    fn malformed_plot_input() {
        let dir = tempfile::tempdir().unwrap();
        let empty = dir.path().join("e.csv");
        std::fs::write(&empty, "").unwrap();
        let out = dir.path().join("o.svg");
        assert!(matches!(run_plot(&[empty], &out), Err(Error::Input(_))));
        let bad = dir.path().join("b.csv");
        std::fs::write(&bad, "cycle,residual_norm,reduction_factor\n0,abc,\n").unwrap();
        assert!(matches!(run_plot(&[bad], &out), Err(Error::Input(_))));
    }
}
