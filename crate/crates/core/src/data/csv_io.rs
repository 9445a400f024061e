use std::collections::HashSet;
use std::io::{Read, Write};
use std::str::FromStr;

use super::{DataRecord, Dataset};
use crate::simulation::TrialRecord;
use crate::{Error, Result};

/// Column order of `trials.csv`.
pub const TRIAL_COLUMNS: [&str; 8] = [
    "trial_id",
    "stage",
    "goal",
    "code_length",
    "contact_duration_s",
    "decoded_goal",
    "success",
    "search_time_s",
];

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Csv {
            line,
            message: format!("{other:?}"),
        },
    }
}

/// Writes records in [`TRIAL_COLUMNS`] order. Floats use the shortest form
/// that parses back to the same value.
pub fn emit_csv<W: Write>(records: &[TrialRecord], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(TRIAL_COLUMNS).map_err(csv_error)?;
    for r in records {
        w.write_record([
            r.trial_id.to_string(),
            r.stage.to_string(),
            r.goal.to_string(),
            r.code_length.to_string(),
            r.contact_duration_s.to_string(),
            r.decoded_goal.to_string(),
            r.success.to_string(),
            r.search_time_s.to_string(),
        ])
        .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

struct Header {
    positions: Vec<usize>,
}

impl Header {
    fn locate(headers: &csv::StringRecord, wanted: &[&str]) -> Result<Self> {
        let positions = wanted
            .iter()
            .map(|name| {
                headers
                    .iter()
                    .position(|h| h.trim() == *name)
                    .ok_or_else(|| Error::Csv {
                        line: 1,
                        message: format!("missing column {name:?}"),
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Header { positions })
    }
}

fn field<T: FromStr>(record: &csv::StringRecord, index: usize, name: &str, line: u64) -> Result<T> {
    let raw = record.get(index).unwrap_or("").trim();
    raw.parse().map_err(|_| Error::Csv {
        line,
        message: format!("column {name}: cannot parse {raw:?}"),
    })
}

fn line_of(record: &csv::StringRecord) -> u64 {
    record.position().map(|p| p.line()).unwrap_or(0)
}

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(input)
}

/// Parses `trials.csv`. Columns are found by header name; every cell must
/// parse as its declared type and trial ids must be unique.
pub fn ingest_csv<R: Read>(input: R) -> Result<Vec<TrialRecord>> {
    let mut rdr = reader(input);
    let header = Header::locate(rdr.headers().map_err(csv_error)?, &TRIAL_COLUMNS)?;
    let p = &header.positions;
    let mut seen = HashSet::new();
    let mut records = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(csv_error)?;
        let line = line_of(&row);
        let rec = TrialRecord {
            trial_id: field(&row, p[0], TRIAL_COLUMNS[0], line)?,
            stage: field(&row, p[1], TRIAL_COLUMNS[1], line)?,
            goal: field(&row, p[2], TRIAL_COLUMNS[2], line)?,
            code_length: field(&row, p[3], TRIAL_COLUMNS[3], line)?,
            contact_duration_s: field(&row, p[4], TRIAL_COLUMNS[4], line)?,
            decoded_goal: field(&row, p[5], TRIAL_COLUMNS[5], line)?,
            success: field(&row, p[6], TRIAL_COLUMNS[6], line)?,
            search_time_s: field(&row, p[7], TRIAL_COLUMNS[7], line)?,
        };
        if !seen.insert(rec.trial_id) {
            return Err(Error::Csv {
                line,
                message: format!("duplicate trial_id {}", rec.trial_id),
            });
        }
        records.push(rec);
    }
    Ok(records)
}

/// Reads two numeric columns from any headed CSV.
pub fn ingest_xy_csv<R: Read>(input: R, x_col: &str, y_col: &str) -> Result<Dataset> {
    let mut rdr = reader(input);
    let header = Header::locate(rdr.headers().map_err(csv_error)?, &[x_col, y_col])?;
    let mut records = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(csv_error)?;
        let line = line_of(&row);
        let x: f64 = field(&row, header.positions[0], x_col, line)?;
        let t: f64 = field(&row, header.positions[1], y_col, line)?;
        if !(x.is_finite() && t.is_finite() && t >= 0.0) {
            return Err(Error::Csv {
                line,
                message: format!("values ({x}, {t}) must be finite with {y_col} >= 0"),
            });
        }
        records.push(DataRecord {
            x,
            t,
            label: format!("line {line}"),
        });
    }
    Dataset::new(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Vec<TrialRecord> {
        vec![
            TrialRecord {
                trial_id: 0,
                stage: 1,
                goal: 10,
                code_length: 10.0,
                contact_duration_s: 44.099999999999994,
                decoded_goal: 10,
                success: true,
                search_time_s: 20.0,
            },
            TrialRecord {
                trial_id: 1,
                stage: 2,
                goal: 26,
                code_length: 7.0,
                contact_duration_s: 1.0,
                decoded_goal: 3,
                success: false,
                search_time_s: 1800.0,
            },
        ]
    }

    #[test]
    fn round_trip() {
        let mut buf = Vec::new();
        emit_csv(&sample(), &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(
            "trial_id,stage,goal,code_length,contact_duration_s,decoded_goal,success,search_time_s\n"
        ));
        assert_eq!(ingest_csv(&buf[..]).unwrap(), sample());
    }

    #[test]
    fn crlf_accepted() {
        let mut buf = Vec::new();
        emit_csv(&sample(), &mut buf).unwrap();
        let crlf = String::from_utf8(buf).unwrap().replace('\n', "\r\n");
        assert_eq!(ingest_csv(crlf.as_bytes()).unwrap(), sample());
    }

    #[test]
    fn bad_cell_names_line() {
        let text = "trial_id,stage,goal,code_length,contact_duration_s,decoded_goal,success,search_time_s\n\
                    0,1,10,10,44.1,10,true,20\n\
                    1,1,10,10,abc,10,true,20\n";
        let err = ingest_csv(text.as_bytes()).unwrap_err();
        match err {
            Error::Csv { line, message } => {
                assert_eq!(line, 3);
                assert!(message.contains("contact_duration_s"));
                assert!(message.contains("abc"));
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn missing_column_and_duplicates() {
        let missing = "trial_id,stage,goal\n0,1,2\n";
        assert!(matches!(
            ingest_csv(missing.as_bytes()),
            Err(Error::Csv { line: 1, .. })
        ));
        let dup = "trial_id,stage,goal,code_length,contact_duration_s,decoded_goal,success,search_time_s\n\
                   4,1,10,10,44.1,10,true,20\n\
                   4,1,10,10,44.1,10,true,20\n";
        let err = ingest_csv(dup.as_bytes()).unwrap_err();
        assert!(err.to_string().contains("duplicate trial_id 4"));
        assert!(err.to_string().contains("line 3"));
    }

    #[test]
    fn xy_columns() {
        let text = "depth,time\r\n2,150\r\n3,210\r\n";
        let ds = ingest_xy_csv(text.as_bytes(), "depth", "time").unwrap();
        assert_eq!(ds.xs(), vec![2.0, 3.0]);
        assert_eq!(ds.ts(), vec![150.0, 210.0]);
        assert!(ingest_xy_csv("depth,time\n".as_bytes(), "depth", "time").is_err());
        assert!(ingest_xy_csv(text.as_bytes(), "depth", "other").is_err());
        let bad = "depth,time\n2,x\n";
        assert!(matches!(
            ingest_xy_csv(bad.as_bytes(), "depth", "time"),
            Err(Error::Csv { line: 2, .. })
        ));
    }
}
