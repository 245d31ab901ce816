//! Scaling experiments over instance families.

use std::fmt;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hull::{
    classical_upper_hull, monotone_chain_full, monotone_chain_upper, quantum_jarvis_full_with, quantum_upper_hull_with,
    HullError,
};
use crate::instances::{generate, GenError, GenSpec};
use crate::maxima::{classical_maxima, maxima_of_sorted, quantum_maxima_with, MaximaError};
use crate::oracle::SortedPointSet;
use crate::qsim::{CostLedger, SimMode};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("experiment grid is empty")]
    EmptyGrid,
    #[error("no algorithms selected")]
    NoAlgorithms,
    #[error("unknown algorithm {0:?}")]
    UnknownAlgo(String),
    #[error("unknown field {0:?}")]
    UnknownField(String),
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Hull(#[from] HullError),
    #[error(transparent)]
    Maxima(#[from] MaximaError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algo {
    /// Combine-and-conquer upper hull.
    Qcc,
    ClassicalDc,
    /// Whole-set Jarvis march with simulated max finding.
    JarvisQ,
    Monotone,
    QccMaxima,
    ClassicalMaxima,
}

impl Algo {
    pub const ALL: [Algo; 6] = [
        Algo::Qcc,
        Algo::ClassicalDc,
        Algo::JarvisQ,
        Algo::Monotone,
        Algo::QccMaxima,
        Algo::ClassicalMaxima,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Algo::Qcc => "qcc",
            Algo::ClassicalDc => "classical-dc",
            Algo::JarvisQ => "jarvis-q",
            Algo::Monotone => "monotone",
            Algo::QccMaxima => "qcc-maxima",
            Algo::ClassicalMaxima => "classical-maxima",
        }
    }

    pub fn is_quantum(&self) -> bool {
        matches!(self, Algo::Qcc | Algo::JarvisQ | Algo::QccMaxima)
    }

    /// Column to fit when comparing scaling: charged units for the simulated
    /// algorithms, oracle reads for the classical ones.
    pub fn cost_field(&self) -> Field {
        if self.is_quantum() {
            Field::Metric
        } else {
            Field::ClassicalQueries
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algo {
    type Err = BenchError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algo::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| BenchError::UnknownAlgo(s.to_string()))
    }
}

/// One (instance, algorithm, repetition) measurement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunRecord {
    pub kind: String,
    pub n: u64,
    pub h_true: u64,
    pub h_final_guess: u64,
    pub algo: String,
    pub sqrt_units: u64,
    pub polylog_units: u64,
    pub mc_units: u64,
    pub classical_queries: u64,
    pub qmax_calls: u64,
    pub qlp_calls: u64,
    pub wall_time_ms: u64,
    pub correct: bool,
}

impl RunRecord {
    /// Headline cost: Grover units plus LP units.
    pub fn metric(&self) -> u64 {
        self.sqrt_units + self.polylog_units
    }

    pub fn field(&self, f: Field) -> f64 {
        let v = match f {
            Field::N => self.n,
            Field::HTrue => self.h_true,
            Field::HFinalGuess => self.h_final_guess,
            Field::SqrtUnits => self.sqrt_units,
            Field::PolylogUnits => self.polylog_units,
            Field::McUnits => self.mc_units,
            Field::ClassicalQueries => self.classical_queries,
            Field::QmaxCalls => self.qmax_calls,
            Field::QlpCalls => self.qlp_calls,
            Field::WallTimeMs => self.wall_time_ms,
            Field::Metric => self.metric(),
        };
        v as f64
    }
}

/// Numeric columns usable as fit axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    N,
    HTrue,
    HFinalGuess,
    SqrtUnits,
    PolylogUnits,
    McUnits,
    ClassicalQueries,
    QmaxCalls,
    QlpCalls,
    WallTimeMs,
    Metric,
}

impl Field {
    pub fn name(&self) -> &'static str {
        match self {
            Field::N => "n",
            Field::HTrue => "h_true",
            Field::HFinalGuess => "h_final_guess",
            Field::SqrtUnits => "sqrt_units",
            Field::PolylogUnits => "polylog_units",
            Field::McUnits => "mc_units",
            Field::ClassicalQueries => "classical_queries",
            Field::QmaxCalls => "qmax_calls",
            Field::QlpCalls => "qlp_calls",
            Field::WallTimeMs => "wall_time_ms",
            Field::Metric => "metric",
        }
    }
}

impl FromStr for Field {
    type Err = BenchError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            Field::N,
            Field::HTrue,
            Field::HFinalGuess,
            Field::SqrtUnits,
            Field::PolylogUnits,
            Field::McUnits,
            Field::ClassicalQueries,
            Field::QmaxCalls,
            Field::QlpCalls,
            Field::WallTimeMs,
            Field::Metric,
        ]
        .into_iter()
        .find(|f| f.name() == s)
        .ok_or_else(|| BenchError::UnknownField(s.to_string()))
    }
}

fn ledger_for(mode: SimMode, rep_seed: u64) -> CostLedger {
    match mode {
        SimMode::Analytic => CostLedger::new(SimMode::Analytic),
        SimMode::MonteCarlo(seed) => CostLedger::new(SimMode::MonteCarlo(seed ^ rep_seed)),
    }
}

/// Runs one algorithm on one instance and checks its output against the
/// matching classical oracle.
pub fn run_one(spec: &GenSpec, algo: Algo, mode: SimMode) -> Result<RunRecord, BenchError> {
    let points = generate(spec)?;
    let upper_oracle = monotone_chain_upper(&points);
    let o = SortedPointSet::load(points, true).map_err(GenError::from)?;
    let start = Instant::now();
    let ledger = ledger_for(mode, spec.seed);
    let (ledger, h_true, correct) = match algo {
        Algo::Qcc => {
            let run = quantum_upper_hull_with(&o, ledger)?;
            (run.ledger, upper_oracle.len(), run.chain == upper_oracle)
        }
        Algo::ClassicalDc => {
            let chain = classical_upper_hull(&o)?;
            let mut l = CostLedger::new(mode);
            l.classical_queries = o.queries();
            (l, upper_oracle.len(), chain == upper_oracle)
        }
        Algo::JarvisQ => {
            let run = quantum_jarvis_full_with(&o, ledger)?;
            let full = monotone_chain_full(o.points_uncounted());
            (run.ledger, full.len(), run.polygon == full)
        }
        Algo::Monotone => {
            let chain = monotone_chain_upper(&o.query_all());
            let mut l = CostLedger::new(mode);
            l.classical_queries = o.queries();
            (l, upper_oracle.len(), chain == upper_oracle)
        }
        Algo::QccMaxima => {
            let run = quantum_maxima_with(&o, ledger)?;
            let oracle = maxima_of_sorted(o.points_uncounted());
            (run.ledger, oracle.len(), run.maxima.0 == oracle)
        }
        Algo::ClassicalMaxima => {
            let got = classical_maxima(&o)?;
            let oracle = maxima_of_sorted(o.points_uncounted());
            let mut l = CostLedger::new(mode);
            l.classical_queries = o.queries();
            (l, oracle.len(), got.0 == oracle)
        }
    };
    let wall_time_ms = start.elapsed().as_millis() as u64;
    Ok(RunRecord {
        kind: spec.kind.to_string(),
        n: spec.n as u64,
        h_true: h_true as u64,
        h_final_guess: ledger.final_guess().unwrap_or(0) as u64,
        algo: algo.to_string(),
        sqrt_units: ledger.sqrt_units,
        polylog_units: ledger.polylog_units,
        mc_units: ledger.mc_units,
        classical_queries: ledger.classical_queries,
        qmax_calls: ledger.qmax_calls,
        qlp_calls: ledger.qlp_calls,
        wall_time_ms,
        correct,
    })
}

/// One record per (grid entry, algorithm, repetition), in that nesting order.
///
/// Repetition `r` regenerates the instance with seed `spec.seed + r`.
pub fn run_experiment(
    grid: &[GenSpec],
    algos: &[Algo],
    reps: usize,
    mode: SimMode,
) -> Result<Vec<RunRecord>, BenchError> {
    if grid.is_empty() {
        return Err(BenchError::EmptyGrid);
    }
    if algos.is_empty() {
        return Err(BenchError::NoAlgorithms);
    }
    for spec in grid {
        spec.validate()?;
    }
    let jobs: Vec<(GenSpec, Algo)> = grid
        .iter()
        .flat_map(|spec| {
            algos
                .iter()
                .flat_map(move |&algo| (0..reps).map(move |r| (spec.with_seed(spec.seed.wrapping_add(r as u64)), algo)))
        })
        .collect();
    jobs.par_iter().map(|(spec, algo)| run_one(spec, *algo, mode)).collect()
}

/// Least-squares slope of `log2(y)` against `log2(x)`.
pub fn fit_exponent(records: &[RunRecord], x_field: Field, y_field: Field) -> Result<f64, BenchError> {
    let pairs: Vec<(f64, f64)> = records.iter().map(|r| (r.field(x_field), r.field(y_field))).collect();
    fit_loglog(&pairs)
}

pub fn fit_loglog(pairs: &[(f64, f64)]) -> Result<f64, BenchError> {
    if let Some(&(x, y)) = pairs.iter().find(|(x, y)| *x <= 0.0 || *y <= 0.0) {
        return Err(BenchError::DegenerateFit(format!("non-positive sample ({x}, {y})")));
    }
    let mut xs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    if xs.len() < 3 {
        return Err(BenchError::DegenerateFit(format!(
            "{} distinct x values, need 3",
            xs.len()
        )));
    }
    let logs: Vec<(f64, f64)> = pairs.iter().map(|&(x, y)| (x.log2(), y.log2())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

fn intercept(pairs: &[(f64, f64)], slope: f64) -> f64 {
    let k = pairs.len() as f64;
    let mx = pairs.iter().map(|p| p.0.log2()).sum::<f64>() / k;
    let my = pairs.iter().map(|p| p.1.log2()).sum::<f64>() / k;
    my - slope * mx
}

pub fn write_csv<W: std::io::Write>(records: &[RunRecord], w: W) -> Result<(), BenchError> {
    let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    wtr.write_record(CSV_HEADER)?;
    for r in records {
        wtr.serialize(r)?;
    }
    wtr.flush()?;
    Ok(())
}

pub const CSV_HEADER: [&str; 13] = [
    "kind",
    "n",
    "h_true",
    "h_final_guess",
    "algo",
    "sqrt_units",
    "polylog_units",
    "mc_units",
    "classical_queries",
    "qmax_calls",
    "qlp_calls",
    "wall_time_ms",
    "correct",
];

pub fn emit_csv(records: &[RunRecord], path: &Path) -> Result<(), BenchError> {
    let file = std::fs::File::create(path)?;
    write_csv(records, std::io::BufWriter::new(file))
}

pub fn read_csv(path: &Path) -> Result<Vec<RunRecord>, BenchError> {
    let mut rdr = csv::Reader::from_path(path)?;
    let mut out = Vec::new();
    for rec in rdr.deserialize() {
        out.push(rec?);
    }
    Ok(out)
}

/// Log-log scatter of two record fields with the fitted line and its slope.
pub fn render_svg_scatter(records: &[RunRecord], x_field: Field, y_field: Field) -> String {
    const W: f64 = 640.0;
    const H: f64 = 480.0;
    const PAD: f64 = 60.0;
    let pts: Vec<(f64, f64)> = records
        .iter()
        .map(|r| (r.field(x_field), r.field(y_field)))
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .collect();
    let logs: Vec<(f64, f64)> = pts.iter().map(|&(x, y)| (x.log2(), y.log2())).collect();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in &logs {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if logs.is_empty() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 - x0 < 1e-9 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 < 1e-9 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<line x1="{PAD}" y1="{b}" x2="{r}" y2="{b}" stroke="black"/><line x1="{PAD}" y1="{PAD}" x2="{PAD}" y2="{b}" stroke="black"/>"#,
        b = H - PAD,
        r = W - PAD
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="14">log2 {}</text>"#,
        W / 2.0,
        H - 15.0,
        x_field.name()
    );
    let _ = writeln!(
        svg,
        r#"<text x="15" y="{}" font-size="14" transform="rotate(-90 15 {})" text-anchor="middle">log2 {}</text>"#,
        H / 2.0,
        H / 2.0,
        y_field.name()
    );
    for &(x, y) in &logs {
        let _ = writeln!(
            svg,
            r#"<circle class="marker" cx="{:.2}" cy="{:.2}" r="4" fill="steelblue"/>"#,
            sx(x),
            sy(y)
        );
    }
    if let Ok(slope) = fit_loglog(&pts) {
        let c = intercept(&pts, slope);
        let _ = writeln!(
            svg,
            r#"<line class="fit" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="crimson" stroke-width="2"/>"#,
            sx(x0),
            sy(c + slope * x0),
            sx(x1),
            sy(c + slope * x1)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-size="16" fill="crimson">slope = {slope:.3}</text>"#,
            PAD + 10.0,
            PAD
        );
    }
    svg.push_str("</svg>\n");
    svg
}

pub fn emit_svg_scatter(records: &[RunRecord], x_field: Field, y_field: Field, path: &Path) -> Result<(), BenchError> {
    std::fs::write(path, render_svg_scatter(records, x_field, y_field))?;
    Ok(())
}
