use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use super::{format_opt, format_sig};
use crate::coulomb::QuantumNumbers;
use crate::oracle::{solve_eigenvalue, OracleConfig};
use crate::perturbation::{total_energy, CorrectionOrder, EnergyBreakdown};
use crate::potential::PhysicalParams;
use crate::wavefunction::{GroundStateWavefunction, WavefunctionSample};
use crate::{Error, Result};

/// |e_pert − e_oracle| above which a comparison row is flagged.
pub const DEFAULT_FLAG_THRESHOLD: f64 = 1e-5;

fn lf_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

fn parse_number(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::Parse(format!("{what}: `{}` is not a finite number", s.trim())))
}

/// Comma-separated δ values, e.g. `0.02,0.04,0.06`.
pub fn parse_delta_list(s: &str) -> Result<Vec<f64>> {
    if s.trim().is_empty() {
        return Err(Error::Parse("empty δ list".into()));
    }
    s.split(',')
        .map(|part| {
            let v = parse_number(part, "δ")?;
            if v < 0.0 {
                return Err(Error::Parse(format!("δ must be non-negative, got {v}")));
            }
            Ok(v)
        })
        .collect()
}

/// Inclusive arithmetic progression `start:stop:step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl DeltaRange {
    /// Progressions longer than this are rejected.
    pub const MAX_POINTS: usize = 1_000_000;

    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        let range = Self { start, stop, step };
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(Error::Parse("δ range bounds must be finite".into()));
        }
        if !(step > 0.0) {
            return Err(Error::Parse(format!("δ step must be positive, got {step}")));
        }
        if start < 0.0 {
            return Err(Error::Parse(format!("δ range must start at δ >= 0, got {start}")));
        }
        if range.len() > Self::MAX_POINTS {
            return Err(Error::Parse(format!(
                "δ range has more than {} points",
                Self::MAX_POINTS
            )));
        }
        Ok(range)
    }

    pub fn len(&self) -> usize {
        if self.stop < self.start {
            return 0;
        }
        // the small slack keeps `0:0.1:0.01` at 11 points despite rounding
        let span = (self.stop - self.start) / self.step;
        if span > Self::MAX_POINTS as f64 {
            return usize::MAX;
        }
        (span + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| tidy(self.start + i as f64 * self.step))
            .collect()
    }
}

/// Drop the representation noise of `i·step` (0.1·3 → 0.3).
fn tidy(x: f64) -> f64 {
    format!("{x:.12e}").parse().unwrap_or(x)
}

impl FromStr for DeltaRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, c] = parts[..] else {
            return Err(Error::Parse(format!("δ range must be start:stop:step, got `{s}`")));
        };
        Self::new(
            parse_number(a, "start")?,
            parse_number(b, "stop")?,
            parse_number(c, "step")?,
        )
    }
}

/// Uniform radial grid `start:stop:count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl RadialGrid {
    pub const MAX_POINTS: usize = 10_000_000;

    pub fn new(start: f64, stop: f64, count: usize) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite()) || start < 0.0 || stop < start {
            return Err(Error::Parse(format!(
                "radial grid needs 0 <= start <= stop (got {start}..{stop})"
            )));
        }
        if count == 0 || count > Self::MAX_POINTS {
            return Err(Error::Parse(format!(
                "radial grid needs 1..={} points",
                Self::MAX_POINTS
            )));
        }
        Ok(Self { start, stop, count })
    }

    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let h = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count).map(|i| self.start + i as f64 * h).collect()
    }
}

impl FromStr for RadialGrid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, c] = parts[..] else {
            return Err(Error::Parse(format!("radial grid must be start:stop:count, got `{s}`")));
        };
        let count = c
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("grid count `{}` is not an integer", c.trim())))?;
        Self::new(parse_number(a, "start")?, parse_number(b, "stop")?, count)
    }
}

fn oracle_energy(
    params: &PhysicalParams,
    qn: QuantumNumbers,
    points: Option<usize>,
) -> Result<std::result::Result<f64, String>> {
    let mut config = OracleConfig::for_state(params, qn);
    if let Some(p) = points {
        config = config.with_points(p);
    }
    match solve_eigenvalue(params, qn, &config) {
        Ok(res) => Ok(Ok(res.energy)),
        Err(Error::NoBoundState { reason, .. }) => Ok(Err(reason)),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareRow {
    pub delta: f64,
    pub e_pert: f64,
    pub e_oracle: Option<f64>,
    /// e_pert − e_oracle.
    pub difference: Option<f64>,
    pub flagged: bool,
}

/// Perturbative and Numerov energies of one state over a list of δ.
/// Returns the rows (in input order) and any no-bound-state warnings.
pub fn compare(
    base: &PhysicalParams,
    qn: QuantumNumbers,
    deltas: &[f64],
    order: CorrectionOrder,
    oracle_points: Option<usize>,
    threshold: f64,
) -> Result<(Vec<CompareRow>, Vec<String>)> {
    let results: Vec<Result<(CompareRow, Option<String>)>> = deltas
        .par_iter()
        .map(|&delta| {
            let params = base.with_delta(delta);
            let e_pert = total_energy(&params, qn, order)?.total;
            let (e_oracle, warning) = match oracle_energy(&params, qn, oracle_points)? {
                Ok(e) => (Some(e), None),
                Err(reason) => (None, Some(format!("{qn} at δ = {delta}: no bound state ({reason})"))),
            };
            let difference = e_oracle.map(|o| e_pert - o);
            let row = CompareRow {
                delta,
                e_pert,
                e_oracle,
                difference,
                flagged: difference.is_some_and(|d| d.abs() > threshold),
            };
            Ok((row, warning))
        })
        .collect();
    let mut rows = Vec::with_capacity(results.len());
    let mut warnings = Vec::new();
    for r in results {
        let (row, w) = r?;
        rows.push(row);
        warnings.extend(w);
    }
    Ok((rows, warnings))
}

pub fn write_compare_csv<W: Write>(rows: &[CompareRow], out: W) -> Result<()> {
    let mut w = lf_writer(out);
    w.write_record(["delta", "e_pert", "e_oracle", "difference", "flag"])?;
    for row in rows {
        w.write_record([
            format_sig(row.delta),
            format_sig(row.e_pert),
            format_opt(row.e_oracle),
            format_opt(row.difference),
            if row.flagged { "deviation" } else { "" }.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub delta: f64,
    pub breakdown: EnergyBreakdown,
    pub e_oracle: Option<f64>,
}

/// Energy breakdown (and optionally the Numerov level) across a δ range.
pub fn scan(
    base: &PhysicalParams,
    qn: QuantumNumbers,
    range: &DeltaRange,
    order: CorrectionOrder,
    oracle_points: Option<Option<usize>>,
) -> Result<(Vec<ScanRow>, Vec<String>)> {
    let results: Vec<Result<(ScanRow, Option<String>)>> = range
        .values()
        .into_par_iter()
        .map(|delta| {
            let params = base.with_delta(delta);
            let breakdown = total_energy(&params, qn, order)?;
            let (e_oracle, warning) = match oracle_points {
                None => (None, None),
                Some(points) => match oracle_energy(&params, qn, points)? {
                    Ok(e) => (Some(e), None),
                    Err(reason) => (None, Some(format!("{qn} at δ = {delta}: no bound state ({reason})"))),
                },
            };
            Ok((
                ScanRow {
                    delta,
                    breakdown,
                    e_oracle,
                },
                warning,
            ))
        })
        .collect();
    let mut rows = Vec::with_capacity(results.len());
    let mut warnings = Vec::new();
    for r in results {
        let (row, w) = r?;
        rows.push(row);
        warnings.extend(w);
    }
    Ok((rows, warnings))
}

pub fn write_scan_csv<W: Write>(rows: &[ScanRow], out: W) -> Result<()> {
    let mut w = lf_writer(out);
    w.write_record(["delta", "e0", "shift", "e1", "e2", "total", "binding", "e_oracle"])?;
    for row in rows {
        let b = &row.breakdown;
        w.write_record([
            format_sig(row.delta),
            format_sig(b.e0),
            format_sig(b.shift),
            format_sig(b.e1),
            format_sig(b.e2),
            format_sig(b.total),
            format_sig(b.binding()),
            format_opt(row.e_oracle),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct WavefunctionTable {
    pub l: u32,
    pub r_valid: f64,
    pub samples: Vec<WavefunctionSample>,
    /// Requested radii dropped for lying beyond `r_valid`.
    pub clipped: usize,
}

/// Sample χ, u and ψ for the n = 0 state on `grid`, keeping r ≤ r_valid.
pub fn sample_wavefunction(params: &PhysicalParams, l: u32, grid: &RadialGrid) -> Result<WavefunctionTable> {
    let wf = GroundStateWavefunction::new(params, l)?;
    if grid.start > wf.r_valid {
        return Err(Error::Domain {
            quantity: "r",
            value: grid.start,
            reason: "radial grid starts beyond the validity radius",
        });
    }
    let points = grid.points();
    let kept: Vec<f64> = points.iter().copied().filter(|&r| r <= wf.r_valid).collect();
    let clipped = points.len() - kept.len();
    let samples = kept.into_iter().map(|r| wf.sample(r)).collect::<Result<Vec<_>>>()?;
    Ok(WavefunctionTable {
        l,
        r_valid: wf.r_valid,
        samples,
        clipped,
    })
}

pub fn write_wavefunction_csv<W: Write>(table: &WavefunctionTable, mut out: W) -> Result<()> {
    writeln!(out, "# r_valid={}", format_sig(table.r_valid))?;
    let mut w = lf_writer(out);
    w.write_record(["r", "chi", "u", "psi"])?;
    for s in &table.samples {
        w.write_record([format_sig(s.r), format_sig(s.chi), format_sig(s.u), format_sig(s.psi)])?;
    }
    w.flush()?;
    Ok(())
}
