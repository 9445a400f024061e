//! Recomputes published values from the embedded tables and compares them
//! against fixed tolerances.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::coding::{complexity_class, compress_route};
use crate::data::{load_table, table_to_dataset, Cell, ColumnRoles};
use crate::maze::{total_routes, Route};
use crate::stats::{
    binomial_tail, binomial_tail_exact, distance_to_nearest_anchor, groups_strictly_ordered,
    linear_fit, permutation_order_test,
};
use crate::{Error, Result};

/// Accepted selectors; `all` runs the rest in this order.
pub const SELECTORS: [&str; 6] = [
    "all",
    "routes_126",
    "table2_ordering",
    "binomial_152_117",
    "table3_fit",
    "table5_correlation",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicationCheck {
    pub selector: &'static str,
    pub quantity: String,
    /// Value as printed in the source publication.
    pub published_value: String,
    pub recomputed: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recomputed_exact: Option<String>,
    pub tolerance: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicationReport {
    pub selector: String,
    pub checks: Vec<ReplicationCheck>,
    pub all_pass: bool,
}

struct Builder {
    selector: &'static str,
    checks: Vec<ReplicationCheck>,
}

impl Builder {
    fn new(selector: &'static str) -> Self {
        Builder {
            selector,
            checks: Vec::new(),
        }
    }

    fn check(
        &mut self,
        quantity: &str,
        published: &str,
        value: f64,
        tolerance: &str,
        pass: bool,
    ) -> &mut Self {
        self.checks.push(ReplicationCheck {
            selector: self.selector,
            quantity: quantity.into(),
            published_value: published.into(),
            recomputed: value,
            recomputed_exact: None,
            tolerance: tolerance.into(),
            pass,
        });
        self
    }

    fn exact(&mut self, text: String) -> &mut Self {
        if let Some(last) = self.checks.last_mut() {
            last.recomputed_exact = Some(text);
        }
        self
    }
}

fn routes_126() -> Result<Vec<ReplicationCheck>> {
    let mut b = Builder::new("routes_126");
    let n = total_routes(6)?;
    b.check(
        "routes in trees of depth 1..=6",
        "126",
        n as f64,
        "exact",
        n == 126,
    )
    .exact(n.to_string());
    Ok(b.checks)
}

fn table2_ordering() -> Result<Vec<ReplicationCheck>> {
    let mut b = Builder::new("table2_ordering");
    let p = permutation_order_test(&[2, 2, 3])?;
    let expected = BigRational::new(1.into(), 210.into());
    b.check(
        "chance of the observed three-group ordering",
        "1/210",
        p.to_f64().unwrap_or(f64::NAN),
        "exact",
        p == expected,
    )
    .exact(p.to_string());

    for (text, want) in [("LLLLLLLL", "8L"), ("LRLRLRLR", "4LR")] {
        let route: Route = text.parse()?;
        let word = compress_route(&route);
        b.check(
            &format!("compressed form of {text}"),
            want,
            word.length(),
            "exact text",
            word.to_string() == want,
        )
        .exact(word.to_string());
    }

    let t2 = load_table(2)?;
    let groups: [&[&str]; 3] = [
        &["LLLLLL", "RRRRRR"],
        &["LRLRLR", "RLRLRL"],
        &["RLRRRL", "RRLRRR", "LRLLRL"],
    ];
    let seq_col = t2.column_index("sequence")?;
    let mean_col = t2.column_index("mean_s")?;
    let mut proxies = Vec::new();
    let mut means = Vec::new();
    for group in groups {
        let mut g_proxy = Vec::new();
        let mut g_mean = Vec::new();
        for seq in group {
            let row = t2
                .rows
                .iter()
                .find(|r| r[seq_col] == Cell::Text(seq))
                .ok_or_else(|| Error::Dataset(format!("table 2 has no sequence {seq}")))?;
            g_proxy.push(complexity_class(&seq.parse::<Route>()?));
            g_mean.extend(row[mean_col].numbers().unwrap_or_default());
        }
        proxies.push(g_proxy);
        means.push(g_mean);
    }
    b.check(
        "complexity proxy ranks regular < alternating < random",
        "ordered",
        proxies.iter().flatten().count() as f64,
        "strict group order",
        groups_strictly_ordered(&proxies),
    )
    .exact(format!("{proxies:?}"));
    b.check(
        "table 2 mean durations follow the same groups",
        "88-90 < 130-135 < 180-220 s",
        means.iter().flatten().count() as f64,
        "strict group order",
        groups_strictly_ordered(&means),
    )
    .exact(format!("{means:?}"));
    Ok(b.checks)
}

fn binomial_152_117() -> Result<Vec<ReplicationCheck>> {
    let mut b = Builder::new("binomial_152_117");
    let tail = binomial_tail(152, 117, 1.0 / 25.0)?;
    b.check(
        "P(X >= 117), X ~ Binomial(152, 1/25)",
        "< 1e-10",
        tail,
        "< 1e-10",
        tail < 1e-10,
    );
    let approx = binomial_tail(30, 20, 1.0 / 25.0)?;
    let exact = binomial_tail_exact(30, 20, &BigRational::new(1.into(), 25.into()))?;
    let exact_f = exact.to_f64().unwrap_or(f64::NAN);
    let rel = ((approx - exact_f) / exact_f).abs();
    b.check(
        "log-space vs exact tail at (30, 20, 1/25)",
        "agreement",
        rel,
        "relative error < 1e-12",
        rel < 1e-12,
    );
    Ok(b.checks)
}

fn table3_fit() -> Result<Vec<ReplicationCheck>> {
    let mut b = Builder::new("table3_fit");
    let ds = table_to_dataset(
        load_table(3)?,
        ColumnRoles {
            x: "branch",
            t: "contact_s",
            label: None,
        },
    )?;
    let fit = linear_fit(&ds.xs(), &ds.ts())?;
    b.check(
        "r",
        "0.93",
        fit.r,
        "[0.92, 0.94]",
        (0.92..=0.94).contains(&fit.r),
    );
    b.check(
        "slope a (s per branch)",
        "7.3",
        fit.a,
        "[6.8, 8.0]",
        (6.8..=8.0).contains(&fit.a),
    );
    b.check(
        "intercept b (s)",
        "-28.9",
        fit.b,
        "[-40, -20]",
        (-40.0..=-20.0).contains(&fit.b),
    );
    Ok(b.checks)
}

fn table5_correlation() -> Result<Vec<ReplicationCheck>> {
    let mut b = Builder::new("table5_correlation");
    let t5 = load_table(5)?;
    let ds = table_to_dataset(
        t5,
        ColumnRoles {
            x: "distance",
            t: "times_s",
            label: None,
        },
    )?;
    b.check(
        "observations",
        "44",
        ds.len() as f64,
        "exact",
        ds.len() == 44,
    );

    let (bc, dc) = (t5.column_index("branch")?, t5.column_index("distance")?);
    let mut consistent = true;
    for row in &t5.rows {
        if let (Cell::Int(branch), Cell::Int(d)) = (&row[bc], &row[dc]) {
            consistent &= i64::from(distance_to_nearest_anchor(*branch as u32, &[10, 20])?) == *d;
        }
    }
    b.check(
        "printed distances match anchors {10, 20}",
        "consistent",
        t5.rows.len() as f64,
        "every row",
        consistent,
    );

    let fit = linear_fit(&ds.xs(), &ds.ts())?;
    b.check(
        "r(time, distance to nearest anchor)",
        "0.80-0.91 on the full third-stage data",
        fit.r,
        ">= 0.7",
        fit.r >= 0.7,
    );
    Ok(b.checks)
}

/// Runs the checks for `selector` (one of [`SELECTORS`]).
pub fn replicate(selector: &str) -> Result<ReplicationReport> {
    let run = |name: &str| -> Result<Vec<ReplicationCheck>> {
        match name {
            "routes_126" => routes_126(),
            "table2_ordering" => table2_ordering(),
            "binomial_152_117" => binomial_152_117(),
            "table3_fit" => table3_fit(),
            "table5_correlation" => table5_correlation(),
            other => Err(Error::InvalidInput(format!(
                "unknown selector {other:?}; expected one of {}",
                SELECTORS.join(", ")
            ))),
        }
    };
    let checks = if selector == "all" {
        let mut all = Vec::new();
        for name in &SELECTORS[1..] {
            all.extend(run(name)?);
        }
        all
    } else {
        run(selector)?
    };
    Ok(ReplicationReport {
        selector: selector.to_string(),
        all_pass: checks.iter().all(|c| c.pass),
        checks,
    })
}
