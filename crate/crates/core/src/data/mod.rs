//! Embedded reference tables and record I/O.

mod csv_io;
mod tables;

use serde::Serialize;

use crate::{Error, Result};

pub use csv_io::{emit_csv, ingest_csv, ingest_xy_csv, TRIAL_COLUMNS};
pub use tables::{
    load_table, load_table_by_name, table_to_dataset, Cell, Column, ColumnKind, ColumnRoles,
    PaperTable, TABLE_CHECKSUMS, TABLE_IDS,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DataRecord {
    pub x: f64,
    pub t: f64,
    pub label: String,
}

/// Non-empty `(x, t)` observations with non-negative times.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dataset {
    records: Vec<DataRecord>,
}

impl Dataset {
    pub fn new(records: Vec<DataRecord>) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::Dataset("no observations selected".into()));
        }
        if let Some(bad) = records
            .iter()
            .find(|r| !(r.x.is_finite() && r.t.is_finite() && r.t >= 0.0))
        {
            return Err(Error::Dataset(format!(
                "invalid observation x = {}, t = {} ({})",
                bad.x, bad.t, bad.label
            )));
        }
        Ok(Dataset { records })
    }

    pub fn records(&self) -> &[DataRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn xs(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.x).collect()
    }

    pub fn ts(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.t).collect()
    }
}
