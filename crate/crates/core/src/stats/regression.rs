use serde::Serialize;

use crate::{Error, Result};

/// Least-squares line `t = a * x + b` with Pearson correlation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitResult {
    pub a: f64,
    pub b: f64,
    pub r: f64,
    pub n: usize,
    /// Set when one variable has zero variance and `r` is reported as 0.
    pub degenerate: bool,
}

impl FitResult {
    pub fn predict(&self, x: f64) -> f64 {
        self.a * x + self.b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReferenceRate {
    pub species: &'static str,
    pub bits_per_minute: f64,
}

/// Published transmission rates from binary-tree experiments.
pub const REFERENCE_RATES: [ReferenceRate; 2] = [
    ReferenceRate {
        species: "Formica sanguinea",
        bits_per_minute: 0.738,
    },
    ReferenceRate {
        species: "Formica polyctena",
        bits_per_minute: 1.094,
    },
];

struct Moments {
    n: usize,
    mean_x: f64,
    mean_y: f64,
    sxx: f64,
    syy: f64,
    sxy: f64,
}

fn moments(xs: &[f64], ys: &[f64]) -> Result<Moments> {
    if xs.len() != ys.len() {
        return Err(Error::InvalidInput(format!(
            "{} x values but {} y values",
            xs.len(),
            ys.len()
        )));
    }
    if xs.len() < 2 {
        return Err(Error::InvalidInput(
            "a fit needs at least two points".into(),
        ));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("fit inputs must be finite".into()));
    }
    let n = xs.len();
    let mean_x = xs.iter().sum::<f64>() / n as f64;
    let mean_y = ys.iter().sum::<f64>() / n as f64;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mean_x, y - mean_y);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    Ok(Moments {
        n,
        mean_x,
        mean_y,
        sxx,
        syy,
        sxy,
    })
}

/// Ordinary least squares of `ys` on `xs`.
///
/// Constant `xs` is an error. Constant `ys` gives the flat line through the
/// mean with `r = 0` and the degenerate flag set.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<FitResult> {
    let m = moments(xs, ys)?;
    if m.sxx == 0.0 {
        return Err(Error::DegenerateFit("all x values are equal".into()));
    }
    if m.syy == 0.0 {
        return Ok(FitResult {
            a: 0.0,
            b: m.mean_y,
            r: 0.0,
            n: m.n,
            degenerate: true,
        });
    }
    let a = m.sxy / m.sxx;
    Ok(FitResult {
        a,
        b: m.mean_y - a * m.mean_x,
        r: (m.sxy / (m.sxx * m.syy).sqrt()).clamp(-1.0, 1.0),
        n: m.n,
        degenerate: false,
    })
}

/// Bits per minute from contact times (seconds) against route depths (bits):
/// `60 / a` for the fitted slope `a`.
pub fn transmission_rate(depths: &[f64], times: &[f64]) -> Result<f64> {
    let fit = linear_fit(depths, times)?;
    if fit.a <= 0.0 {
        return Err(Error::DegenerateFit(format!(
            "slope {} s/bit gives no physical rate",
            fit.a
        )));
    }
    Ok(60.0 / fit.a)
}

pub fn distance_to_nearest_anchor(i: u32, anchors: &[u32]) -> Result<u32> {
    anchors
        .iter()
        .map(|a| a.abs_diff(i))
        .min()
        .ok_or_else(|| Error::InvalidInput("no anchors".into()))
}

/// Fit of contact time on distance to the nearest anchor, skipping branches
/// numbered `exclude_below` or lower.
///
/// Constant distances or constant times yield a degenerate result with
/// `r = 0` rather than an error.
pub fn anchor_distance_correlation(
    records: &[(u32, f64)],
    anchors: &[u32],
    exclude_below: u32,
) -> Result<FitResult> {
    let mut xs = Vec::with_capacity(records.len());
    let mut ys = Vec::with_capacity(records.len());
    for &(branch, t) in records.iter().filter(|(b, _)| *b > exclude_below) {
        xs.push(f64::from(distance_to_nearest_anchor(branch, anchors)?));
        ys.push(t);
    }
    if xs.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "{} records left after excluding branches <= {exclude_below}; need 3",
            xs.len()
        )));
    }
    match linear_fit(&xs, &ys) {
        Err(Error::DegenerateFit(_)) => Ok(FitResult {
            a: 0.0,
            b: ys.iter().sum::<f64>() / ys.len() as f64,
            r: 0.0,
            n: xs.len(),
            degenerate: true,
        }),
        other => other,
    }
}
