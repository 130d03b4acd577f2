//! Static SVG charts of convergence histories and sweep tables.

use std::path::Path;

use plotters::prelude::*;

use crate::error::{Error, Result};

/// One residual history: `(cycle, residual norm)` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct HistorySeries {
    pub label: String,
    pub points: Vec<(usize, f64)>,
}

/// Cycle counts of a sweep; `None` marks a failed cell.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    /// Name of the swept parameter.
    pub parameter: String,
    pub values: Vec<f64>,
    pub h_list: Vec<usize>,
    pub counts: Vec<Vec<Option<usize>>>,
}

const COLORS: [RGBColor; 6] = [
    RGBColor(31, 119, 180),
    RGBColor(255, 127, 14),
    RGBColor(44, 160, 44),
    RGBColor(214, 39, 40),
    RGBColor(148, 103, 189),
    RGBColor(140, 86, 75),
];

fn draw_err<E: std::fmt::Debug>(e: E) -> Error {
    Error::Input(format!("plotting failed: {e:?}"))
}

/// Residual norm relative to the first entry against the cycle number,
/// log scale on the vertical axis.
pub fn plot_histories(series: &[HistorySeries], path: &Path) -> Result<()> {
    if series.is_empty() || series.iter().all(|s| s.points.is_empty()) {
        return Err(Error::Input("no residual history to plot".into()));
    }
    let rel: Vec<Vec<(usize, f64)>> = series
        .iter()
        .map(|s| {
            let r0 = s
                .points
                .first()
                .map(|p| p.1)
                .filter(|&r| r > 0.0)
                .unwrap_or(1.0);
            s.points
                .iter()
                .filter(|p| p.1 > 0.0)
                .map(|&(c, r)| (c, r / r0))
                .collect()
        })
        .collect();
    let max_cycle = rel.iter().flatten().map(|p| p.0).max().unwrap_or(1).max(1);
    let y_min = rel
        .iter()
        .flatten()
        .map(|p| p.1)
        .fold(1.0f64, f64::min)
        .max(1e-300);
    let y_max = rel.iter().flatten().map(|p| p.1).fold(1.0f64, f64::max);

    let root = SVGBackend::new(path, (720, 480)).into_drawing_area();
    root.fill(&WHITE).map_err(draw_err)?;
    let mut chart = ChartBuilder::on(&root)
        .margin(16)
        .x_label_area_size(40)
        .y_label_area_size(70)
        .build_cartesian_2d(0..max_cycle, (y_min / 2.0..y_max * 2.0).log_scale())
        .map_err(draw_err)?;
    chart
        .configure_mesh()
        .x_desc("cycle")
        .y_desc("relative residual")
        .y_label_formatter(&|v| format!("{v:.0e}"))
        .draw()
        .map_err(draw_err)?;
    for (k, (s, pts)) in series.iter().zip(&rel).enumerate() {
        let color = COLORS[k % COLORS.len()];
        chart
            .draw_series(LineSeries::new(pts.iter().copied(), color.stroke_width(2)))
            .map_err(draw_err)?
            .label(s.label.clone())
            .legend(move |(x, y)| {
                PathElement::new(vec![(x, y), (x + 16, y)], color.stroke_width(2))
            });
        chart
            .draw_series(pts.iter().map(|&p| Circle::new(p, 3, color.filled())))
            .map_err(draw_err)?;
    }
    chart
        .configure_series_labels()
        .background_style(WHITE.mix(0.8))
        .border_style(BLACK)
        .draw()
        .map_err(draw_err)?;
    root.present().map_err(draw_err)?;
    Ok(())
}

/// Cycle count against `1/h`, one line per parameter value.
pub fn plot_table(table: &SweepTable, path: &Path) -> Result<()> {
    if table.values.is_empty() || table.h_list.is_empty() {
        return Err(Error::Input("empty sweep table".into()));
    }
    let max_count = table
        .counts
        .iter()
        .flatten()
        .flatten()
        .copied()
        .max()
        .unwrap_or(1);
    let root = SVGBackend::new(path, (720, 480)).into_drawing_area();
    root.fill(&WHITE).map_err(draw_err)?;
    let columns = table.h_list.len();
    let mut chart = ChartBuilder::on(&root)
        .margin(16)
        .x_label_area_size(40)
        .y_label_area_size(50)
        .build_cartesian_2d(-0.5f64..columns as f64 - 0.5, 0usize..max_count + 2)
        .map_err(draw_err)?;
    let h_list = table.h_list.clone();
    chart
        .configure_mesh()
        .x_desc("1/h")
        .y_desc("cycles")
        .x_labels(columns)
        .x_label_formatter(&|x| {
            let i = x.round();
            if (x - i).abs() < 1e-9 && i >= 0.0 && (i as usize) < h_list.len() {
                h_list[i as usize].to_string()
            } else {
                String::new()
            }
        })
        .draw()
        .map_err(draw_err)?;
    for (k, (value, row)) in table.values.iter().zip(&table.counts).enumerate() {
        let color = COLORS[k % COLORS.len()];
        let pts: Vec<(f64, usize)> = row
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.map(|c| (i as f64, c)))
            .collect();
        chart
            .draw_series(LineSeries::new(pts.iter().copied(), color.stroke_width(2)))
            .map_err(draw_err)?
            .label(format!("{} = {value:e}", table.parameter))
            .legend(move |(x, y)| {
                PathElement::new(vec![(x, y), (x + 16, y)], color.stroke_width(2))
            });
        chart
            .draw_series(pts.iter().map(|&p| Circle::new(p, 3, color.filled())))
            .map_err(draw_err)?;
    }
    chart
        .configure_series_labels()
        .background_style(WHITE.mix(0.8))
        .border_style(BLACK)
        .draw()
        .map_err(draw_err)?;
    root.present().map_err(draw_err)?;
    Ok(())
}
