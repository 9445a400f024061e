use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs::File;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;
use serde_json::json;

use super::{
    create_dir, load_config, resolve_seed, to_json_bytes, write_file, write_manifest, CliError,
    ReplicationReport, RunManifest,
};
use crate::coding::complexity_class;
use crate::data::{
    emit_csv, ingest_csv, ingest_xy_csv, load_table, load_table_by_name, table_to_dataset, Cell,
    ColumnRoles, Dataset, TABLE_CHECKSUMS, TABLE_IDS,
};
use crate::maze::Route;
use crate::simulation::{run_experiment, TrialRecord};
use crate::stats::{distance_to_nearest_anchor, linear_fit, FitResult};
use crate::Error;

#[derive(Debug, Clone)]
pub struct SimulateArgs {
    pub config: PathBuf,
    /// `--seed`; wins over the config file.
    pub seed: Option<u64>,
    /// Raw `FORMICODE_SEED`; used only when neither flag nor config sets a seed.
    pub env_seed: Option<String>,
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageSummary {
    pub stage: u32,
    pub trials: usize,
    pub mean_code_length: f64,
    pub mean_contact_s: f64,
    pub success_rate: f64,
    pub mean_search_time_s: f64,
    /// Contact time on code length; `None` when every code has the same length.
    pub fit_time_vs_code_length: Option<FitResult>,
    /// Contact time on goal index, `r(t, i)`.
    pub fit_time_vs_goal: Option<FitResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulateOutcome {
    pub seed: u64,
    pub trials: usize,
    pub stages: Vec<StageSummary>,
    pub manifest: RunManifest,
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        f64::NAN
    } else {
        sum / n as f64
    }
}

/// Per-stage means, success rates and fits.
pub fn summarize(records: &[TrialRecord]) -> Vec<StageSummary> {
    let mut by_stage: BTreeMap<u32, Vec<&TrialRecord>> = BTreeMap::new();
    for r in records {
        by_stage.entry(r.stage).or_default().push(r);
    }
    by_stage
        .into_iter()
        .map(|(stage, rs)| {
            let ts: Vec<f64> = rs.iter().map(|r| r.contact_duration_s).collect();
            let ls: Vec<f64> = rs.iter().map(|r| r.code_length).collect();
            let gs: Vec<f64> = rs.iter().map(|r| r.goal as f64).collect();
            StageSummary {
                stage,
                trials: rs.len(),
                mean_code_length: mean(ls.iter().copied()),
                mean_contact_s: mean(ts.iter().copied()),
                success_rate: mean(rs.iter().map(|r| f64::from(u8::from(r.success)))),
                mean_search_time_s: mean(rs.iter().map(|r| r.search_time_s)),
                fit_time_vs_code_length: linear_fit(&ls, &ts).ok(),
                fit_time_vs_goal: linear_fit(&gs, &ts).ok(),
            }
        })
        .collect()
}

/// Runs the configured experiment and writes `trials.csv`, `summary.json`
/// and `manifest.json` into `args.out`.
pub fn cmd_simulate(args: &SimulateArgs) -> Result<SimulateOutcome, CliError> {
    let (file, raw) = load_config(&args.config)?;
    let seed = resolve_seed(args.seed, file.seed, args.env_seed.as_deref())?;
    let config = file.to_experiment(seed)?;
    let records = run_experiment(&config)?;

    let mut csv = Vec::new();
    emit_csv(&records, &mut csv)?;
    let stages = summarize(&records);

    create_dir(&args.out)?;
    write_file(&args.out, "trials.csv", &csv)?;
    write_file(
        &args.out,
        "summary.json",
        &to_json_bytes(&json!({ "seed": seed, "stages": stages })),
    )?;
    let manifest = RunManifest::new(
        "simulate",
        &raw,
        seed,
        vec!["trials.csv".into(), "summary.json".into()],
    );
    write_manifest(&args.out, &manifest)?;
    Ok(SimulateOutcome {
        seed,
        trials: records.len(),
        stages,
        manifest,
    })
}

/// Writes `replication_report.json` (and a manifest) when `out` is given.
pub fn cmd_replicate(selector: &str, out: Option<&Path>) -> Result<ReplicationReport, CliError> {
    let report = super::replicate(selector)?;
    if let Some(dir) = out {
        create_dir(dir)?;
        write_file(dir, "replication_report.json", &to_json_bytes(&report))?;
        let inputs = json!({ "selector": selector, "tables": TABLE_CHECKSUMS });
        let manifest = RunManifest::new(
            "replicate",
            &inputs,
            0,
            vec!["replication_report.json".into()],
        );
        write_manifest(dir, &manifest)?;
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FitSource {
    Csv(PathBuf),
    /// Embedded table, e.g. `table3`.
    Table(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitOutcome {
    pub x: String,
    pub y: String,
    pub fit: FitResult,
    /// `60 / a`, reported when x is a length in bits.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bits_per_minute: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

impl FitOutcome {
    pub fn render(&self) -> String {
        let f = &self.fit;
        let mut s = format!(
            "{} = {:.6} * {} + {:.6}\nr = {:.6}, n = {}\n",
            self.y, f.a, self.x, f.b, f.r, f.n
        );
        if let Some(rate) = self.bits_per_minute {
            let _ = writeln!(s, "transmission rate = {rate:.6} bits/min");
        }
        for w in &self.warnings {
            let _ = writeln!(s, "warning: {w}");
        }
        s
    }
}

fn open(path: &Path) -> Result<File, CliError> {
    File::open(path).map_err(|e| CliError::io(path, e))
}

fn located(path: &Path, e: Error) -> CliError {
    let mut err = CliError::from(e);
    err.message = format!("{}: {}", path.display(), err.message);
    err
}

/// Least-squares fit of `y_col` on `x_col`. A constant `y` column is reported
/// as a warning, not a failure.
pub fn cmd_fit(
    source: &FitSource,
    x_col: &str,
    y_col: &str,
    x_in_bits: bool,
) -> Result<FitOutcome, CliError> {
    let ds: Dataset = match source {
        FitSource::Csv(path) => {
            ingest_xy_csv(open(path)?, x_col, y_col).map_err(|e| located(path, e))?
        }
        FitSource::Table(name) => table_to_dataset(
            load_table_by_name(name)?,
            ColumnRoles {
                x: x_col,
                t: y_col,
                label: None,
            },
        )?,
    };
    let fit = linear_fit(&ds.xs(), &ds.ts())?;
    let mut warnings = Vec::new();
    if fit.degenerate {
        warnings.push(format!(
            "degenerate fit: {y_col} is constant, r reported as 0"
        ));
    }
    let bits_per_minute = if !x_in_bits {
        None
    } else if fit.a > 0.0 {
        Some(60.0 / fit.a)
    } else {
        warnings.push(format!("slope {} gives no transmission rate", fit.a));
        None
    };
    Ok(FitOutcome {
        x: x_col.into(),
        y: y_col.into(),
        fit,
        bits_per_minute,
        warnings,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PlotKind {
    TimeVsIndex,
    TimeVsDistance,
    ComplexityVsTime,
}

impl PlotKind {
    pub fn name(self) -> &'static str {
        match self {
            PlotKind::TimeVsIndex => "time_vs_index",
            PlotKind::TimeVsDistance => "time_vs_distance",
            PlotKind::ComplexityVsTime => "complexity_vs_time",
        }
    }
}

impl FromStr for PlotKind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        [PlotKind::TimeVsIndex, PlotKind::TimeVsDistance, PlotKind::ComplexityVsTime]
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                CliError::usage(format!(
                    "unknown plot kind {s:?}; expected time_vs_index, time_vs_distance or complexity_vs_time"
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlotSource {
    Trials(PathBuf),
    Table(String),
}

/// One labelled `(x, y)` series.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Series {
    pub label: String,
    pub x_label: String,
    pub y_label: String,
    pub points: Vec<(f64, f64)>,
}

impl Series {
    /// Gnuplot-style block; blocks are separated by two blank lines so
    /// `index N` selects one series.
    pub fn render_all(series: &[Series]) -> String {
        let mut out = String::new();
        for (k, s) in series.iter().enumerate() {
            if k > 0 {
                out.push_str("\n\n");
            }
            let _ = writeln!(out, "# {}\n# {} {}", s.label, s.x_label, s.y_label);
            for (x, y) in &s.points {
                let _ = writeln!(out, "{x} {y}");
            }
        }
        out
    }
}

/// Per-stage means of contact time grouped by `key`.
fn grouped_means(
    records: &[TrialRecord],
    key: impl Fn(&TrialRecord) -> u64,
) -> BTreeMap<u32, Vec<(f64, f64)>> {
    let mut acc: BTreeMap<u32, BTreeMap<u64, (f64, usize)>> = BTreeMap::new();
    for r in records {
        let slot = acc.entry(r.stage).or_default().entry(key(r)).or_default();
        slot.0 += r.contact_duration_s;
        slot.1 += 1;
    }
    acc.into_iter()
        .map(|(stage, m)| {
            let pts = m
                .into_iter()
                .map(|(k, (s, n))| (k as f64, s / n as f64))
                .collect();
            (stage, pts)
        })
        .collect()
}

fn stage_series(means: BTreeMap<u32, Vec<(f64, f64)>>, x_label: &str) -> Vec<Series> {
    means
        .into_iter()
        .map(|(stage, points)| Series {
            label: format!("stage {stage}"),
            x_label: x_label.into(),
            y_label: "mean_contact_s".into(),
            points,
        })
        .collect()
}

fn table_series(name: &str, x: &str, t: &str, x_label: &str) -> Result<Vec<Series>, CliError> {
    let table = load_table_by_name(name)?;
    let ds = table_to_dataset(table, ColumnRoles { x, t, label: None })?;
    Ok(vec![Series {
        label: format!("table {}", table.table_id),
        x_label: x_label.into(),
        y_label: t.into(),
        points: ds.xs().into_iter().zip(ds.ts()).collect(),
    }])
}

fn unsupported(kind: PlotKind, what: &str) -> CliError {
    CliError::usage(format!(
        "plot kind {} is not available for {what}",
        kind.name()
    ))
}

/// Builds plot series; writes `<kind>.dat` and a manifest into `out` when given.
pub fn cmd_plotdata(
    source: &PlotSource,
    kind: PlotKind,
    anchors: &[u32],
    out: Option<&Path>,
) -> Result<Vec<Series>, CliError> {
    let series = match source {
        PlotSource::Trials(path) => {
            let records = ingest_csv(open(path)?).map_err(|e| located(path, e))?;
            match kind {
                PlotKind::TimeVsIndex => stage_series(grouped_means(&records, |r| r.goal), "goal"),
                PlotKind::TimeVsDistance => {
                    if anchors.is_empty() {
                        return Err(CliError::usage("time_vs_distance needs --anchors"));
                    }
                    let mut distance = BTreeMap::new();
                    for r in &records {
                        let g = u32::try_from(r.goal)
                            .map_err(|_| CliError::usage(format!("goal {} too large", r.goal)))?;
                        distance.insert(r.goal, u64::from(distance_to_nearest_anchor(g, anchors)?));
                    }
                    let means = grouped_means(&records, |r| distance[&r.goal]);
                    stage_series(means, "distance")
                }
                PlotKind::ComplexityVsTime => return Err(unsupported(kind, "trial records")),
            }
        }
        PlotSource::Table(name) => {
            let id = load_table_by_name(name)?.table_id;
            match (kind, id) {
                (PlotKind::TimeVsIndex, 3) => table_series(name, "branch", "contact_s", "branch")?,
                (PlotKind::TimeVsIndex, 5) => table_series(name, "branch", "times_s", "branch")?,
                (PlotKind::TimeVsDistance, 5) => {
                    table_series(name, "distance", "times_s", "distance")?
                }
                (PlotKind::ComplexityVsTime, 2) => {
                    let t2 = load_table(2)?;
                    let (sc, mc) = (t2.column_index("sequence")?, t2.column_index("mean_s")?);
                    let mut points = Vec::with_capacity(t2.rows.len());
                    for row in &t2.rows {
                        if let (Cell::Text(seq), Cell::Num(mean)) = (&row[sc], &row[mc]) {
                            points.push((complexity_class(&seq.parse::<Route>()?), *mean));
                        }
                    }
                    vec![Series {
                        label: "table 2".into(),
                        x_label: "complexity".into(),
                        y_label: "mean_s".into(),
                        points,
                    }]
                }
                _ => return Err(unsupported(kind, &format!("table {id}"))),
            }
        }
    };
    if let Some(dir) = out {
        create_dir(dir)?;
        let name = format!("{}.dat", kind.name());
        write_file(dir, &name, Series::render_all(&series).as_bytes())?;
        let source_json = match source {
            PlotSource::Trials(p) => json!({ "trials": p.display().to_string() }),
            PlotSource::Table(t) => json!({ "table": t }),
        };
        let inputs = json!({ "source": source_json, "kind": kind.name(), "anchors": anchors });
        write_manifest(dir, &RunManifest::new("plotdata", &inputs, 0, vec![name]))?;
    }
    Ok(series)
}

/// Writes `tableN.csv` for one table (or `all`) plus a manifest.
pub fn cmd_export(table: &str, out: &Path) -> Result<Vec<PathBuf>, CliError> {
    let ids: Vec<u8> = if table == "all" {
        TABLE_IDS.to_vec()
    } else {
        vec![load_table_by_name(table)?.table_id]
    };
    create_dir(out)?;
    let mut written = Vec::new();
    let mut names = Vec::new();
    for id in ids {
        let name = format!("table{id}.csv");
        written.push(write_file(
            out,
            &name,
            load_table(id)?.to_csv()?.as_bytes(),
        )?);
        names.push(name);
    }
    let inputs = json!({ "table": table, "tables": TABLE_CHECKSUMS });
    write_manifest(out, &RunManifest::new("export", &inputs, 0, names))?;
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::{EXIT_IO, EXIT_USAGE};
    use std::fs;

    #[test]
    fn fit_on_table_three() {
        let out = cmd_fit(
            &FitSource::Table("table3".into()),
            "branch",
            "contact_s",
            false,
        )
        .unwrap();
        assert!((out.fit.r - 0.93465).abs() < 1e-4);
        assert!(out.bits_per_minute.is_none());
        assert!(out.render().contains("r = 0.93"));
    }

    #[test]
    fn fit_csv_cases() {
        let dir = tempfile::tempdir().unwrap();
        let exact = dir.path().join("exact.csv");
        fs::write(&exact, "bits,t\n2,150\n4,270\n").unwrap();
        let out = cmd_fit(&FitSource::Csv(exact), "bits", "t", true).unwrap();
        assert!((out.fit.r - 1.0).abs() < 1e-12);
        assert!((out.bits_per_minute.unwrap() - 1.0).abs() < 1e-12);

        let flat = dir.path().join("flat.csv");
        fs::write(&flat, "x,t\n1,5\n2,5\n3,5\n").unwrap();
        let out = cmd_fit(&FitSource::Csv(flat), "x", "t", false).unwrap();
        assert!(out.fit.degenerate);
        assert_eq!(out.warnings.len(), 1);

        let bad = dir.path().join("bad.csv");
        fs::write(&bad, "x,t\n1,5\n2,abc\n").unwrap();
        let err = cmd_fit(&FitSource::Csv(bad), "x", "t", false).unwrap_err();
        assert_eq!(err.code, EXIT_USAGE);
        assert!(err.message.contains("line 3"), "{}", err.message);

        let missing = dir.path().join("none.csv");
        assert_eq!(
            cmd_fit(&FitSource::Csv(missing), "x", "t", false)
                .unwrap_err()
                .code,
            EXIT_IO
        );
    }

    #[test]
    fn plot_tables() {
        let s = cmd_plotdata(
            &PlotSource::Table("table5".into()),
            PlotKind::TimeVsDistance,
            &[],
            None,
        )
        .unwrap();
        assert_eq!(s[0].points.len(), 44);
        let s = cmd_plotdata(
            &PlotSource::Table("table2".into()),
            PlotKind::ComplexityVsTime,
            &[],
            None,
        )
        .unwrap();
        assert_eq!(s[0].points.len(), 15);
        assert_eq!(s[0].points[0], (2.0, 72.0));
        assert!(cmd_plotdata(
            &PlotSource::Table("table4".into()),
            PlotKind::TimeVsIndex,
            &[],
            None
        )
        .is_err());
        assert_eq!("scatter".parse::<PlotKind>().unwrap_err().code, EXIT_USAGE);
    }

    #[test]
    fn render_blocks() {
        let s = vec![
            Series {
                label: "a".into(),
                x_label: "x".into(),
                y_label: "y".into(),
                points: vec![(1.0, 2.5)],
            },
            Series {
                label: "b".into(),
                x_label: "x".into(),
                y_label: "y".into(),
                points: vec![(3.0, 4.0)],
            },
        ];
        assert_eq!(
            Series::render_all(&s),
            "# a\n# x y\n1 2.5\n\n\n# b\n# x y\n3 4\n"
        );
    }

    #[test]
    fn export_all_tables() {
        let dir = tempfile::tempdir().unwrap();
        let files = cmd_export("all", dir.path()).unwrap();
        assert_eq!(files.len(), 6);
        let t3 = fs::read_to_string(dir.path().join("table3.csv")).unwrap();
        assert!(t3.starts_with("no,branch,contact_s,scout\n1,10,42,I\n"));
        assert!(dir.path().join("manifest.json").exists());
        assert!(cmd_export("table8", dir.path()).is_err());
    }
}
