//! Quarterly summaries and CSV output.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{ExportError, ModelError};
use crate::evaluation::LossReport;
use crate::scenario::{Trajectory, TrajectoryRow};

pub const QUARTER_DAYS: u32 = 90;

/// Cumulative epidemic totals at the end of one 90-day quarter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuarterRow {
    pub quarter: u32,
    pub day: u32,
    pub mild_infections: f64,
    pub severe_infections: f64,
    pub recoveries: f64,
    /// Recoveries out of the mild and severe compartments.
    pub observed_recoveries: f64,
    pub deaths: f64,
    /// Deaths over deaths plus observed recoveries, in percent.
    pub case_fatality_pct: f64,
    /// Everyone ever infected as a share of the starting population, in percent.
    pub herd_immunity_pct: f64,
}

impl QuarterRow {
    pub fn from_row(quarter: u32, r: &TrajectoryRow, population: f64) -> Self {
        let resolved = r.deaths + r.symptomatic_recoveries;
        Self {
            quarter,
            day: r.day,
            mild_infections: r.mild_entries,
            severe_infections: r.severe_entries,
            recoveries: r.recovered(),
            observed_recoveries: r.symptomatic_recoveries,
            deaths: r.deaths,
            case_fatality_pct: if resolved > 0.0 {
                100.0 * r.deaths / resolved
            } else {
                0.0
            },
            herd_immunity_pct: 100.0 * r.asymptomatic_entries / population,
        }
    }
}

pub fn quarterly_table(traj: &Trajectory) -> Result<Vec<QuarterRow>, ModelError> {
    let last_day = traj.last().map_or(0, |r| r.day);
    if last_day < QUARTER_DAYS {
        return Err(ModelError::TooShortForQuarters { last_day });
    }
    Ok((1..=last_day / QUARTER_DAYS)
        .filter_map(|q| {
            traj.at(q * QUARTER_DAYS)
                .map(|r| QuarterRow::from_row(q, r, traj.population))
        })
        .collect())
}

/// Plain-text rendering of the quarterly table.
pub fn format_quarterly(rows: &[QuarterRow]) -> String {
    let mut out = format!(
        "{:>3} {:>5} {:>14} {:>14} {:>14} {:>12} {:>7} {:>7}\n",
        "Q", "day", "mild", "severe", "recovered", "deaths", "CFR%", "herd%"
    );
    for r in rows {
        out.push_str(&format!(
            "{:>3} {:>5} {:>14.0} {:>14.0} {:>14.0} {:>12.0} {:>7.3} {:>7.2}\n",
            r.quarter,
            r.day,
            r.mild_infections,
            r.severe_infections,
            r.recoveries,
            r.deaths,
            r.case_fatality_pct,
            r.herd_immunity_pct
        ));
    }
    out
}

fn create(path: &Path) -> Result<File, ExportError> {
    File::create(path).map_err(|source| ExportError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> ExportError + '_ {
    move |source| ExportError::Csv {
        path: path.to_path_buf(),
        source,
    }
}

/// Header row followed by one row per day. Floats use shortest round-trip
/// formatting, so a re-parse reproduces every value exactly.
pub fn write_trajectory<W: Write>(traj: &Trajectory, out: W) -> Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(TrajectoryRow::COLUMNS)?;
    for r in &traj.rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_trajectory_rows<R: Read>(input: R) -> Result<Vec<TrajectoryRow>, csv::Error> {
    csv::Reader::from_reader(input).deserialize().collect()
}

pub fn export_trajectory_csv(traj: &Trajectory, path: &Path) -> Result<(), ExportError> {
    write_trajectory(traj, create(path)?).map_err(csv_err(path))
}

#[derive(Debug, Serialize)]
struct LossCsvRow<'a> {
    regime: String,
    theta0: f64,
    mu: f64,
    psi: Option<f64>,
    psi_ybar_days: Option<f64>,
    terminal_deaths: f64,
    min_output_ratio: f64,
    mean_output_gap: f64,
    argmin: bool,
    error: &'a str,
}

pub const LOSS_COLUMNS: [&str; 10] = [
    "regime",
    "theta0",
    "mu",
    "psi",
    "psi_ybar_days",
    "terminal_deaths",
    "min_output_ratio",
    "mean_output_gap",
    "argmin",
    "error",
];

/// One row per grid cell; the minimizing cell has `argmin = true`.
pub fn write_loss_report<W: Write>(report: &LossReport, out: W) -> Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(LOSS_COLUMNS)?;
    for (i, c) in report.cells.iter().enumerate() {
        w.serialize(LossCsvRow {
            regime: c.regime.to_string(),
            theta0: c.theta0,
            mu: c.mu,
            psi: c.psi(),
            psi_ybar_days: c.loss.map(|l| l.psi_ybar_days),
            terminal_deaths: c.terminal_deaths,
            min_output_ratio: c.min_output_ratio,
            mean_output_gap: c.mean_output_gap,
            argmin: report.argmin == Some(i),
            error: c.error.as_deref().unwrap_or(""),
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn export_loss_csv(report: &LossReport, path: &Path) -> Result<(), ExportError> {
    write_loss_report(report, create(path)?).map_err(csv_err(path))
}

pub fn write_quarterly<W: Write>(rows: &[QuarterRow], out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn export_quarterly_csv(rows: &[QuarterRow], path: &Path) -> Result<(), ExportError> {
    write_quarterly(rows, create(path)?).map_err(csv_err(path))
}

/// Long-format `(day, series, value)` rows for external plotting tools.
pub fn write_plot_data<W: Write>(traj: &Trajectory, out: W) -> Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(["day", "series", "value"])?;
    for r in &traj.rows {
        let series: [(&str, f64); 10] = [
            ("asymptomatic", r.asymptomatic()),
            ("mild", r.mild()),
            ("severe", r.severe()),
            ("recovered", r.recovered()),
            ("deaths", r.deaths),
            ("theta", r.theta),
            ("alpha_m", r.alpha_m),
            ("alpha_c", r.alpha_c),
            ("output", r.output),
            ("output_gap", r.output_gap),
        ];
        for (name, value) in series {
            w.serialize((r.day, name, value))?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn export_plot_csv(traj: &Trajectory, path: &Path) -> Result<(), ExportError> {
    write_plot_data(traj, create(path)?).map_err(csv_err(path))
}
