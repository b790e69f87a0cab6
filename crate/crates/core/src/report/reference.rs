//! Transcribed reference energies with (table, row, column) provenance.

use std::str::FromStr;

use crate::coulomb::QuantumNumbers;
use crate::potential::{PhysicalParams, UnitPreset};
use crate::report::TableId;
use crate::{Error, Result};

/// The checked-in dataset, verbatim.
pub const REFERENCE_CSV: &str = include_str!("../../data/reference_tables.csv");

/// Column holding the second-order superpotential results.
pub const PRIMARY_COLUMN: &str = "superpotential";

/// Sign convention of a stored value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Energy,
    Binding,
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "E" => Ok(Quantity::Energy),
            "binding" => Ok(Quantity::Binding),
            other => Err(Error::Parse(format!("unknown quantity `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceEntry {
    pub table: TableId,
    pub row: u32,
    pub column: String,
    pub units: UnitPreset,
    /// Coupling A when the table varies it; otherwise the preset default.
    pub strength_a: Option<f64>,
    /// δ, or G (δ = G·A) for the `table5` units.
    pub screening: f64,
    pub qn: QuantumNumbers,
    pub quantity: Quantity,
    /// The value exactly as printed.
    pub printed: String,
}

impl ReferenceEntry {
    pub fn printed_value(&self) -> f64 {
        // validated at parse time
        self.printed.parse().unwrap_or(f64::NAN)
    }

    /// The stored value converted to an energy E.
    pub fn energy(&self) -> f64 {
        match self.quantity {
            Quantity::Energy => self.printed_value(),
            Quantity::Binding => -self.printed_value(),
        }
    }

    pub fn params(&self) -> PhysicalParams {
        match self.units {
            UnitPreset::Table5 => PhysicalParams::table5(self.screening),
            UnitPreset::Hbar2m1 => PhysicalParams::hbar2m1(self.strength_a.unwrap_or(1.0), self.screening),
            UnitPreset::Atomic | UnitPreset::Custom => PhysicalParams {
                strength_a: self.strength_a.unwrap_or(1.0),
                ..PhysicalParams::atomic(self.screening)
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReferenceDataset {
    pub entries: Vec<ReferenceEntry>,
}

const HEADER: [&str; 11] = [
    "table",
    "row",
    "column",
    "units",
    "strength_a",
    "screening",
    "state",
    "n",
    "l",
    "quantity",
    "printed",
];

impl ReferenceDataset {
    pub fn embedded() -> Self {
        // the embedded file is covered by tests; failure here is a build defect
        Self::parse(REFERENCE_CSV).expect("embedded reference dataset is well formed")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let headers = reader.headers()?.clone();
        if headers.iter().ne(HEADER.iter().copied()) {
            return Err(Error::Parse(format!("unexpected reference header: {headers:?}")));
        }
        let mut entries = Vec::new();
        for (index, record) in reader.records().enumerate() {
            let record = record?;
            let line = index + 1;
            let field = |i: usize| record.get(i).unwrap_or("");
            let err = |what: &str| Error::Parse(format!("reference record {line}: {what}"));

            let table: TableId = field(0).parse()?;
            let row: u32 = field(1).parse().map_err(|_| err("row is not an integer"))?;
            let column = field(2).to_string();
            if column.is_empty() {
                return Err(err("empty column name"));
            }
            let units: UnitPreset = field(3).parse()?;
            let strength_a = match field(4) {
                "" => None,
                s => Some(parse_positive(s).ok_or_else(|| err("strength_a must be a positive number"))?),
            };
            let screening: f64 = field(5).parse().map_err(|_| err("screening is not a number"))?;
            if !(screening.is_finite() && screening >= 0.0) {
                return Err(err("screening must be finite and non-negative"));
            }
            let qn: QuantumNumbers = field(6).parse()?;
            let n: u32 = field(7).parse().map_err(|_| err("n is not an integer"))?;
            let l: u32 = field(8).parse().map_err(|_| err("l is not an integer"))?;
            if qn != QuantumNumbers::new(n, l) {
                return Err(err("state label disagrees with (n, l)"));
            }
            let quantity: Quantity = field(9).parse()?;
            let printed = field(10).to_string();
            if !printed.parse::<f64>().is_ok_and(f64::is_finite) {
                return Err(err("printed value is not a finite number"));
            }
            entries.push(ReferenceEntry {
                table,
                row,
                column,
                units,
                strength_a,
                screening,
                qn,
                quantity,
                printed,
            });
        }
        Ok(Self { entries })
    }

    pub fn column<'a>(&'a self, table: TableId, column: &'a str) -> impl Iterator<Item = &'a ReferenceEntry> + 'a {
        self.entries
            .iter()
            .filter(move |e| e.table == table && e.column == column)
    }

    /// Entry in `column` that shares table, row and state with `entry`.
    pub fn companion(&self, entry: &ReferenceEntry, column: &str) -> Option<&ReferenceEntry> {
        self.entries
            .iter()
            .find(|e| e.table == entry.table && e.row == entry.row && e.qn == entry.qn && e.column == column)
    }
}

fn parse_positive(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|v| v.is_finite() && *v > 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_dataset_shape() {
        let ds = ReferenceDataset::embedded();
        let counts: Vec<usize> = TableId::ALL
            .iter()
            .map(|&t| ds.column(t, PRIMARY_COLUMN).count())
            .collect();
        assert_eq!(counts, vec![10, 10, 10, 12, 30, 17]);
        assert_eq!(ds.entries.len(), 223);
    }

    #[test]
    fn sign_conventions() {
        let ds = ReferenceDataset::embedded();
        let t5 = ds
            .column(TableId::T5, PRIMARY_COLUMN)
            .find(|e| e.row == 6 && e.qn == QuantumNumbers::new(0, 0))
            .unwrap();
        assert_eq!(t5.printed, "0.9002344");
        assert_eq!(t5.energy(), -0.9002344);
        let t1 = ds.column(TableId::T1, PRIMARY_COLUMN).next().unwrap();
        assert_eq!(t1.energy(), -0.4900009);
        assert_eq!(ds.companion(t1, "dynamical").unwrap().printed, "-0.4900010");
    }

    #[test]
    fn rejects_malformed_records() {
        let header = HEADER.join(",");
        let bad = [
            "1,1,x,atomic,1,0.01,1s,0,1,E,-0.5",
            "1,1,x,atomic,1,0.01,1s,0,0,E,abc",
            "9,1,x,atomic,1,0.01,1s,0,0,E,-0.5",
            "1,1,x,lightyears,1,0.01,1s,0,0,E,-0.5",
            "1,1,x,atomic,-1,0.01,1s,0,0,E,-0.5",
            "1,1,x,atomic,1,-0.01,1s,0,0,E,-0.5",
            "1,1,,atomic,1,0.01,1s,0,0,E,-0.5",
            "1,1,x,atomic,1,0.01,1s,0,0,Q,-0.5",
            "1,1,x,atomic,1,0.01,1s,0,0,E",
        ];
        for line in bad {
            assert!(
                ReferenceDataset::parse(&format!("{header}\n{line}\n")).is_err(),
                "{line}"
            );
        }
        assert!(ReferenceDataset::parse("a,b\n1,2\n").is_err());
        let ok = ReferenceDataset::parse(&format!("{header}\n1,1,x,atomic,,0.01,1s,0,0,E,-0.5\n")).unwrap();
        assert_eq!(ok.entries[0].strength_a, None);
    }
}
