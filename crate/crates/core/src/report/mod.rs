//! Table reproduction, CSV rows and δ sweeps.
//!
//! Every CSV written here is comma separated with a header row and LF line
//! endings; floats carry 10 significant digits (see [`format_sig`]) so that
//! `emit(parse(emit(rows)))` is byte-identical.

pub mod reference;
mod sweep;

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

use crate::coulomb::QuantumNumbers;
use crate::oracle::{solve_eigenvalue, OracleConfig};
use crate::perturbation::{total_energy, CorrectionOrder};
use crate::potential::PhysicalParams;
use crate::{Error, Result};

pub use reference::{ReferenceDataset, ReferenceEntry, PRIMARY_COLUMN};
pub use sweep::{
    compare, parse_delta_list, sample_wavefunction, scan, write_compare_csv, write_scan_csv, write_wavefunction_csv,
    CompareRow, DeltaRange, RadialGrid, ScanRow, WavefunctionTable, DEFAULT_FLAG_THRESHOLD,
};

/// Significant digits of every float written to CSV.
pub const SIGNIFICANT_DIGITS: usize = 10;

/// Format `x` with 10 significant digits: fixed notation for moderate
/// magnitudes, scientific otherwise. Stable under parse → format.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let exp: i32 = sci.rsplit_once('e').and_then(|(_, e)| e.parse().ok()).unwrap_or(0);
    if (-5..10).contains(&exp) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

fn format_opt(x: Option<f64>) -> String {
    x.map(format_sig).unwrap_or_default()
}

fn parse_f64(field: &str, name: &str) -> Result<f64> {
    field
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::Parse(format!("{name}: `{field}` is not a finite number")))
}

fn parse_opt(field: &str, name: &str) -> Result<Option<f64>> {
    if field.is_empty() {
        Ok(None)
    } else {
        parse_f64(field, name).map(Some)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TableId {
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
}

impl TableId {
    pub const ALL: [TableId; 6] = [
        TableId::T1,
        TableId::T2,
        TableId::T3,
        TableId::T4,
        TableId::T5,
        TableId::T6,
    ];

    pub fn number(self) -> u8 {
        self as u8 + 1
    }

    /// Largest accepted |e_pert − e_reference|.
    pub fn tolerance(self) -> f64 {
        match self {
            TableId::T6 => 5e-6,
            _ => 5e-7,
        }
    }

    /// Tables 1–4 are in atomic units and get an oracle column.
    pub fn runs_oracle(self) -> bool {
        matches!(self, TableId::T1 | TableId::T2 | TableId::T3 | TableId::T4)
    }

    /// Independent literature column carried alongside the reference.
    pub fn literature_column(self) -> Option<&'static str> {
        match self {
            TableId::T1 | TableId::T2 => Some("dynamical"),
            TableId::T3 | TableId::T4 => Some("pade_10_10"),
            TableId::T5 | TableId::T6 => None,
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

impl FromStr for TableId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let digits = t.strip_prefix(['T', 't']).unwrap_or(t);
        match digits {
            "1" => Ok(TableId::T1),
            "2" => Ok(TableId::T2),
            "3" => Ok(TableId::T3),
            "4" => Ok(TableId::T4),
            "5" => Ok(TableId::T5),
            "6" => Ok(TableId::T6),
            _ => Err(Error::Parse(format!("table id must be 1..6, got `{s}`"))),
        }
    }
}

/// One reproduced table entry.
#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub table_id: TableId,
    /// Row number within the source table.
    pub row: u32,
    pub state_label: String,
    pub params: PhysicalParams,
    pub qn: QuantumNumbers,
    pub e_pert: f64,
    pub e_oracle: Option<f64>,
    pub e_reference: Option<f64>,
    pub e_literature: Option<f64>,
    pub abs_dev_pert_ref: Option<f64>,
    pub abs_dev_pert_oracle: Option<f64>,
}

impl TableRow {
    pub fn binding(&self) -> f64 {
        -self.e_pert
    }

    pub fn within_tolerance(&self) -> bool {
        self.abs_dev_pert_ref.is_none_or(|d| d <= self.table_id.tolerance())
    }
}

pub const TABLE_HEADER: [&str; 17] = [
    "table",
    "row",
    "state",
    "n",
    "l",
    "A",
    "delta",
    "g",
    "hbar",
    "mass",
    "e_pert",
    "binding",
    "e_oracle",
    "e_reference",
    "e_literature",
    "abs_dev_pert_ref",
    "abs_dev_pert_oracle",
];

pub fn write_table_csv<W: Write>(rows: &[TableRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(TABLE_HEADER)?;
    for row in rows {
        let p = &row.params;
        w.write_record([
            row.table_id.to_string(),
            row.row.to_string(),
            row.state_label.clone(),
            row.qn.n.to_string(),
            row.qn.l.to_string(),
            format_sig(p.strength_a),
            format_sig(p.screening_delta),
            format_sig(p.cosine_g),
            format_sig(p.hbar),
            format_sig(p.mass),
            format_sig(row.e_pert),
            format_sig(row.binding()),
            format_opt(row.e_oracle),
            format_opt(row.e_reference),
            format_opt(row.e_literature),
            format_opt(row.abs_dev_pert_ref),
            format_opt(row.abs_dev_pert_oracle),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn table_csv_string(rows: &[TableRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_table_csv(rows, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::Parse(e.to_string()))
}

pub fn parse_table_csv(text: &str) -> Result<Vec<TableRow>> {
    let mut reader = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    if headers.iter().ne(TABLE_HEADER.iter().copied()) {
        return Err(Error::Parse(format!("unexpected table header: {headers:?}")));
    }
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let f = |i: usize| record.get(i).unwrap_or("");
        let table_id: TableId = f(0).parse()?;
        let row = f(1)
            .parse()
            .map_err(|_| Error::Parse(format!("row: `{}` is not an integer", f(1))))?;
        let state_label = f(2).to_string();
        let n: u32 = f(3).parse().map_err(|_| Error::Parse(format!("n: `{}`", f(3))))?;
        let l: u32 = f(4).parse().map_err(|_| Error::Parse(format!("l: `{}`", f(4))))?;
        let qn = QuantumNumbers::new(n, l);
        let label: QuantumNumbers = state_label.parse()?;
        if label != qn {
            return Err(Error::Parse(format!(
                "state `{state_label}` disagrees with n={n}, l={l}"
            )));
        }
        let params = PhysicalParams::new(
            parse_f64(f(5), "A")?,
            parse_f64(f(6), "delta")?,
            parse_f64(f(7), "g")?,
            parse_f64(f(8), "hbar")?,
            parse_f64(f(9), "mass")?,
        )?;
        let e_pert = parse_f64(f(10), "e_pert")?;
        let binding = parse_f64(f(11), "binding")?;
        if binding != -e_pert {
            return Err(Error::Parse(format!("binding {binding} is not -e_pert ({e_pert})")));
        }
        rows.push(TableRow {
            table_id,
            row,
            state_label,
            params,
            qn,
            e_pert,
            e_oracle: parse_opt(f(12), "e_oracle")?,
            e_reference: parse_opt(f(13), "e_reference")?,
            e_literature: parse_opt(f(14), "e_literature")?,
            abs_dev_pert_ref: parse_opt(f(15), "abs_dev_pert_ref")?,
            abs_dev_pert_oracle: parse_opt(f(16), "abs_dev_pert_oracle")?,
        });
    }
    Ok(rows)
}

/// How a table is rebuilt.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableOptions {
    pub order: CorrectionOrder,
    /// Run the Numerov solver on tables that support it.
    pub oracle: bool,
    /// Override of [`OracleConfig::DEFAULT_POINTS`].
    pub oracle_points: Option<usize>,
}

impl Default for TableOptions {
    fn default() -> Self {
        Self {
            order: CorrectionOrder::Second,
            oracle: true,
            oracle_points: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableReport {
    pub table_id: TableId,
    pub rows: Vec<TableRow>,
    pub warnings: Vec<String>,
}

impl TableReport {
    pub fn max_reference_deviation(&self) -> f64 {
        self.rows.iter().filter_map(|r| r.abs_dev_pert_ref).fold(0.0, f64::max)
    }

    pub fn max_oracle_deviation(&self) -> Option<f64> {
        self.rows.iter().filter_map(|r| r.abs_dev_pert_oracle).reduce(f64::max)
    }

    pub fn failures(&self) -> Vec<&TableRow> {
        self.rows.iter().filter(|r| !r.within_tolerance()).collect()
    }

    /// Pure function of the reference comparisons.
    pub fn passed(&self) -> bool {
        self.rows.iter().all(TableRow::within_tolerance)
    }

    pub fn summary(&self) -> String {
        let mut s = format!(
            "table {}: {} rows, max |e_pert - e_reference| = {:.3e} (tolerance {:.0e}), {} outside tolerance",
            self.table_id,
            self.rows.len(),
            self.max_reference_deviation(),
            self.table_id.tolerance(),
            self.failures().len()
        );
        if let Some(d) = self.max_oracle_deviation() {
            s.push_str(&format!(", max |e_pert - e_oracle| = {d:.3e}"));
        }
        s
    }
}

/// Recompute one published table from the embedded reference dataset.
pub fn build_table(table_id: TableId, options: &TableOptions) -> Result<TableReport> {
    build_table_from(&ReferenceDataset::embedded(), table_id, options)
}

pub fn build_table_from(dataset: &ReferenceDataset, table_id: TableId, options: &TableOptions) -> Result<TableReport> {
    let entries: Vec<&ReferenceEntry> = dataset.column(table_id, PRIMARY_COLUMN).collect();
    let run_oracle = options.oracle && table_id.runs_oracle();
    let computed: Vec<Result<(TableRow, Option<String>)>> = entries
        .par_iter()
        .map(|entry| build_row(dataset, entry, options, run_oracle))
        .collect();
    let mut rows = Vec::with_capacity(computed.len());
    let mut warnings = Vec::new();
    for item in computed {
        let (row, warning) = item?;
        rows.push(row);
        warnings.extend(warning);
    }
    Ok(TableReport {
        table_id,
        rows,
        warnings,
    })
}

fn build_row(
    dataset: &ReferenceDataset,
    entry: &ReferenceEntry,
    options: &TableOptions,
    run_oracle: bool,
) -> Result<(TableRow, Option<String>)> {
    let params = entry.params();
    let qn = entry.qn;
    let e_pert = total_energy(&params, qn, options.order)?.total;
    let e_reference = Some(entry.energy());
    let e_literature = entry
        .table
        .literature_column()
        .and_then(|c| dataset.companion(entry, c))
        .map(ReferenceEntry::energy);

    let mut warning = None;
    let e_oracle = if run_oracle {
        let mut config = OracleConfig::for_state(&params, qn);
        if let Some(points) = options.oracle_points {
            config = config.with_points(points);
        }
        match solve_eigenvalue(&params, qn, &config) {
            Ok(res) => Some(res.energy),
            Err(Error::NoBoundState { reason, .. }) => {
                warning = Some(format!(
                    "table {} row {} {}: no bound state ({reason})",
                    entry.table, entry.row, qn
                ));
                None
            }
            Err(e) => return Err(e),
        }
    } else {
        None
    };

    let row = TableRow {
        table_id: entry.table,
        row: entry.row,
        state_label: qn.to_string(),
        params,
        qn,
        e_pert,
        e_oracle,
        e_reference,
        e_literature,
        abs_dev_pert_ref: e_reference.map(|r| (e_pert - r).abs()),
        abs_dev_pert_oracle: e_oracle.map(|o| (e_pert - o).abs()),
    };
    Ok((row, warning))
}
