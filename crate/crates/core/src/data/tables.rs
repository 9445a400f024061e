use std::fmt::Write as _;
use std::sync::OnceLock;

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::{DataRecord, Dataset};
use crate::{Error, Result};

pub const TABLE_IDS: [u8; 6] = [1, 2, 3, 4, 5, 6];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ColumnKind {
    Integer,
    Seconds,
    Real,
    Text,
    IntegerList,
    SecondsList,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Column {
    pub name: &'static str,
    pub kind: ColumnKind,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(&'static str),
    Ints(Vec<i64>),
    Nums(Vec<f64>),
}

impl Cell {
    fn fits(&self, kind: ColumnKind) -> bool {
        matches!(
            (self, kind),
            (Cell::Int(_), ColumnKind::Integer)
                | (Cell::Num(_), ColumnKind::Seconds | ColumnKind::Real)
                | (Cell::Text(_), ColumnKind::Text)
                | (Cell::Ints(_), ColumnKind::IntegerList)
                | (Cell::Nums(_), ColumnKind::SecondsList)
        )
    }

    /// Numeric values held by the cell; `None` for text.
    pub fn numbers(&self) -> Option<Vec<f64>> {
        match self {
            Cell::Int(v) => Some(vec![*v as f64]),
            Cell::Num(v) => Some(vec![*v]),
            Cell::Ints(v) => Some(v.iter().map(|x| *x as f64).collect()),
            Cell::Nums(v) => Some(v.clone()),
            Cell::Text(_) => None,
        }
    }

    pub fn as_text(&self) -> String {
        fn join<T: ToString>(v: &[T]) -> String {
            v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
        }
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Num(v) => v.to_string(),
            Cell::Text(s) => (*s).to_string(),
            Cell::Ints(v) => join(v),
            Cell::Nums(v) => join(v),
        }
    }
}

/// A published results table, held in source.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PaperTable {
    pub table_id: u8,
    pub caption: &'static str,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
    pub provenance: &'static str,
    /// Summary statistics only; the raw samples were never published.
    pub non_replicable: bool,
}

impl PaperTable {
    pub fn new(
        table_id: u8,
        caption: &'static str,
        columns: Vec<Column>,
        rows: Vec<Vec<Cell>>,
        provenance: &'static str,
    ) -> Result<Self> {
        for (r, row) in rows.iter().enumerate() {
            if row.len() != columns.len() {
                return Err(Error::Dataset(format!(
                    "table {table_id} row {}: {} cells for {} columns",
                    r + 1,
                    row.len(),
                    columns.len()
                )));
            }
            if let Some((cell, col)) = row.iter().zip(&columns).find(|(c, col)| !c.fits(col.kind)) {
                return Err(Error::Dataset(format!(
                    "table {table_id} row {}: {cell:?} does not fit column {} ({:?})",
                    r + 1,
                    col.name,
                    col.kind
                )));
            }
        }
        Ok(PaperTable {
            table_id,
            caption,
            columns,
            rows,
            provenance,
            non_replicable: false,
        })
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.columns
            .iter()
            .position(|c| c.name == name)
            .ok_or_else(|| {
                Error::Dataset(format!("table {} has no column {name:?}", self.table_id))
            })
    }

    pub fn cell(&self, row: usize, column: &str) -> Result<&Cell> {
        let c = self.column_index(column)?;
        self.rows.get(row).map(|r| &r[c]).ok_or_else(|| {
            Error::Dataset(format!("table {} has no row {}", self.table_id, row + 1))
        })
    }

    /// Line-oriented text form used for checksums.
    pub fn canonical_text(&self) -> String {
        let mut out = format!("table {}\n{}\n", self.table_id, self.caption);
        let header: Vec<String> = self
            .columns
            .iter()
            .map(|c| format!("{}:{:?}", c.name, c.kind))
            .collect();
        out.push_str(&header.join("|"));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::as_text).collect();
            out.push_str(&cells.join("|"));
            out.push('\n');
        }
        out
    }

    pub fn checksum(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_text().as_bytes()))
    }

    /// Table as CSV; list cells are comma-joined inside quotes.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::Dataset(e.to_string());
        w.write_record(self.columns.iter().map(|c| c.name))
            .map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::as_text))
                .map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Dataset(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Dataset(e.to_string()))
    }

    /// Plain-text rendering for reports.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "Table {}: {}", self.table_id, self.caption);
        let cols: Vec<&str> = self.columns.iter().map(|c| c.name).collect();
        let _ = writeln!(out, "{}", cols.join("\t"));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::as_text).collect();
            let _ = writeln!(out, "{}", cells.join("\t"));
        }
        out
    }
}

fn col(name: &'static str, kind: ColumnKind) -> Column {
    Column { name, kind }
}

use Cell::{Int, Num, Text};
use ColumnKind::{Integer, IntegerList, Real, Seconds, SecondsList};

fn table1() -> PaperTable {
    let rows = [
        ("RRRR", "U", 345.7, 9, "< 0.01"),
        ("RRRR", "I", 36.3, 9, "< 0.01"),
        ("LLLL", "U", 508.0, 9, "< 0.01"),
        ("LLLL", "I", 37.3, 9, "< 0.01"),
        ("LRRL", "U", 118.7, 7, "< 0.01"),
        ("LRRL", "I", 16.6, 7, "< 0.01"),
        ("RRRR", "U", 565.9, 7, "< 0.01"),
        ("RRRR", "I", 16.3, 7, "< 0.01"),
    ]
    .into_iter()
    .map(|(seq, group, mean, n, p)| vec![Text(seq), Text(group), Num(mean), Int(n), Text(p)])
    .collect();
    let mut t = PaperTable::new(
        1,
        "Search duration for the trough by uninformed (U) and informed (I) F. pratensis foragers",
        vec![
            col("sequence", ColumnKind::Text),
            col("group", ColumnKind::Text),
            col("mean_s", Seconds),
            col("n", Integer),
            col("p", ColumnKind::Text),
        ],
        rows,
        "Published Table 1 (binary tree, informed vs naive control)",
    )
    .expect("table 1 well formed");
    t.non_replicable = true;
    t
}

fn table2() -> PaperTable {
    let rows = [
        (1, "LL", 72.0, 18),
        (2, "RRR", 75.0, 15),
        (3, "LLLL", 84.0, 9),
        (4, "RRRRR", 78.0, 10),
        (5, "LLLLLL", 90.0, 8),
        (6, "RRRRRR", 88.0, 5),
        (7, "LRLRLR", 130.0, 4),
        (8, "RLRLRL", 135.0, 8),
        (9, "LLR", 69.0, 12),
        (10, "LRLL", 100.0, 10),
        (11, "RLLR", 120.0, 6),
        (12, "RRLRL", 150.0, 8),
        (13, "RLRRRL", 180.0, 6),
        (14, "RRLRRR", 220.0, 7),
        (15, "LRLLRL", 200.0, 5),
    ]
    .into_iter()
    .map(|(no, seq, mean, n)| vec![Int(no), Text(seq), Num(mean), Int(n)])
    .collect();
    PaperTable::new(
        2,
        "Mean contact duration for F. sanguinea scouts by turn sequence (1-8 regular, 9-15 random)",
        vec![
            col("no", Integer),
            col("sequence", ColumnKind::Text),
            col("mean_s", Seconds),
            col("n", Integer),
        ],
        rows,
        "Published Table 2 (binary tree, sequence complexity)",
    )
    .expect("table 2 well formed")
}

fn table3() -> PaperTable {
    let rows = [
        (1, 10, 42.0, "I"),
        (2, 10, 40.0, "II"),
        (3, 10, 45.0, "III"),
        (4, 40, 300.0, "II"),
        (5, 40, 280.0, "IX"),
        (6, 13, 90.0, "II"),
        (7, 13, 98.0, "I"),
        (8, 28, 110.0, "III"),
        (9, 28, 120.0, "X"),
        (10, 20, 120.0, "X"),
        (11, 20, 110.0, "III"),
        (12, 35, 260.0, "III"),
        (13, 35, 250.0, "X"),
        (14, 30, 160.0, "I"),
        (15, 30, 170.0, "III"),
    ]
    .into_iter()
    .map(|(no, branch, secs, scout)| vec![Int(no), Int(branch), Num(secs), Text(scout)])
    .collect();
    PaperTable::new(
        3,
        "Contact duration by baited branch on vertical trunk 1, F. polyctena",
        vec![
            col("no", Integer),
            col("branch", Integer),
            col("contact_s", Seconds),
            col("scout", ColumnKind::Text),
        ],
        rows,
        "Published Table 3 (counting maze, vertical trunk 1)",
    )
    .expect("table 3 well formed")
}

fn table4() -> PaperTable {
    let rows = [
        ("Vert.1", 15, 40, 0.93, 7.3, -28.9),
        ("Vert.2", 16, 60, 0.99, 5.88, -17.11),
        ("Horiz.1", 30, 25, 0.91, 8.54, -22.2),
        ("Horiz.2", 21, 25, 0.88, 4.92, -18.94),
        ("Circle", 38, 25, 0.98, 8.62, -24.4),
    ]
    .into_iter()
    .map(|(setup, n, branches, r, a, b)| {
        vec![Text(setup), Int(n), Int(branches), Num(r), Num(a), Num(b)]
    })
    .collect();
    PaperTable::new(
        4,
        "Correlation r and regression t = a i + b per counting-maze set-up, F. polyctena",
        vec![
            col("setup", ColumnKind::Text),
            col("sample_size", Integer),
            col("branches", Integer),
            col("r", Real),
            col("a", Real),
            col("b", Real),
        ],
        rows,
        "Published Table 4 (counting maze fits)",
    )
    .expect("table 4 well formed")
}

fn table5() -> PaperTable {
    let rows: [(i64, i64, &[f64]); 17] = [
        (26, 6, &[35.0, 30.0]),
        (30, 10, &[70.0, 65.0]),
        (27, 7, &[65.0, 72.0]),
        (24, 4, &[58.0, 60.0, 62.0]),
        (8, 2, &[22.0, 20.0, 25.0]),
        (16, 4, &[25.0, 8.0, 25.0]),
        (16, 4, &[25.0]),
        (22, 2, &[15.0, 18.0]),
        (18, 2, &[20.0, 25.0, 18.0, 20.0]),
        (15, 5, &[30.0, 28.0, 35.0, 30.0]),
        (20, 0, &[10.0, 12.0, 10.0]),
        (6, 4, &[25.0, 28.0]),
        (16, 4, &[30.0, 25.0]),
        (15, 5, &[20.0, 25.0, 20.0]),
        (14, 4, &[25.0, 28.0, 30.0, 26.0]),
        (17, 3, &[17.0, 15.0]),
        (11, 1, &[10.0, 12.0]),
    ];
    PaperTable::new(
        5,
        "Third-stage contact time against distance to the nearest special branch (10 and 20)",
        vec![
            col("branch", Integer),
            col("distance", Integer),
            col("times_s", SecondsList),
        ],
        rows.into_iter()
            .map(|(branch, d, ts)| vec![Int(branch), Int(d), Cell::Nums(ts.to_vec())])
            .collect(),
        "Published Table 5 (three-stage frequency experiment, one year)",
    )
    .expect("table 5 well formed")
}

fn table6() -> PaperTable {
    let rows: [(i64, &[i64], f64, f64); 3] = [
        (150, &[10, 20], 0.95, 0.80),
        (92, &[10, 19], 0.96, 0.91),
        (99, &[15], 0.99, 0.82),
    ];
    PaperTable::new(
        6,
        "Correlation coefficients in the first and third stages for different special branches",
        vec![
            col("sample_size", Integer),
            col("anchors", IntegerList),
            col("r_stage1", Real),
            col("r_stage3", Real),
        ],
        rows.into_iter()
            .map(|(n, anchors, r1, r3)| {
                vec![Int(n), Cell::Ints(anchors.to_vec()), Num(r1), Num(r3)]
            })
            .collect(),
        "Published Table 6 (three-stage frequency experiment)",
    )
    .expect("table 6 well formed")
}

fn all_tables() -> &'static [PaperTable; 6] {
    static TABLES: OnceLock<[PaperTable; 6]> = OnceLock::new();
    TABLES.get_or_init(|| [table1(), table2(), table3(), table4(), table5(), table6()])
}

/// SHA-256 of each table's [`PaperTable::canonical_text`], in `TABLE_IDS` order.
pub const TABLE_CHECKSUMS: [&str; 6] = [
    "c6beace55d98a4e989c48835fa4757aaeab7f16c3955aadb4082b9f8c28907d7",
    "02b61d4a9b83abad3446b51cfc9856cbf149f43e997a57f295f203f6f9fa59b4",
    "daebdc4b4f2f7be316b40c334a5a8d21ee38c370974a8847650b03c613cdb549",
    "e79ecc27ea71199ec8b5b440b66111f01a649b2284565c9ec7b073d1d5d5c64b",
    "f58b145ed79d70d86d559f49abb029efb32151a7f47503b0350db5a0f801a5a2",
    "2b47bc7c42fa8b7bd4ee4582df032f69daee569214b4fbeed22a0185dbf6af36",
];

/// Returns the embedded table, refusing it if its contents no longer match
/// the recorded checksum.
pub fn load_table(table_id: u8) -> Result<&'static PaperTable> {
    let pos = TABLE_IDS
        .iter()
        .position(|&id| id == table_id)
        .ok_or_else(|| Error::UnknownTable(table_id.to_string()))?;
    let table = &all_tables()[pos];
    let got = table.checksum();
    if got != TABLE_CHECKSUMS[pos] {
        return Err(Error::Dataset(format!(
            "table {table_id} checksum mismatch: expected {}, got {got}",
            TABLE_CHECKSUMS[pos]
        )));
    }
    Ok(table)
}

/// Accepts `3`, `table3` or `Table 3`.
pub fn load_table_by_name(name: &str) -> Result<&'static PaperTable> {
    let digits = name
        .trim()
        .trim_start_matches(|c: char| c.is_alphabetic())
        .trim();
    digits
        .parse::<u8>()
        .map_err(|_| Error::UnknownTable(name.to_string()))
        .and_then(load_table)
        .map_err(|_| Error::UnknownTable(name.to_string()))
}

/// Which columns feed a [`Dataset`].
#[derive(Debug, Clone, Copy)]
pub struct ColumnRoles<'a> {
    pub x: &'a str,
    pub t: &'a str,
    pub label: Option<&'a str>,
}

/// One record per observation; multi-value time cells are split so each
/// listed time becomes its own record.
pub fn table_to_dataset(table: &PaperTable, roles: ColumnRoles<'_>) -> Result<Dataset> {
    let xi = table.column_index(roles.x)?;
    let ti = table.column_index(roles.t)?;
    let li = roles.label.map(|l| table.column_index(l)).transpose()?;
    let mut records = Vec::new();
    for (r, row) in table.rows.iter().enumerate() {
        let numeric = |i: usize, role: &str| {
            row[i].numbers().ok_or_else(|| {
                Error::Dataset(format!(
                    "table {} row {}: column {} is not numeric but has role {role}",
                    table.table_id,
                    r + 1,
                    table.columns[i].name
                ))
            })
        };
        let xs = numeric(xi, "x")?;
        let [x] = xs[..] else {
            return Err(Error::Dataset(format!(
                "table {} row {}: x cell holds {} values",
                table.table_id,
                r + 1,
                xs.len()
            )));
        };
        let label = li.map(|i| row[i].as_text()).unwrap_or_default();
        for t in numeric(ti, "t")? {
            records.push(DataRecord {
                x,
                t,
                label: label.clone(),
            });
        }
    }
    Dataset::new(records)
}
