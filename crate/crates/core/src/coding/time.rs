use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;

use super::CodeWord;
use crate::{Error, Result};

/// Floor applied to sampled contact durations.
pub const MIN_CONTACT_SECONDS: f64 = 1.0;

/// Contact duration `t = a * length + b`, optionally with Gaussian noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeModel {
    /// Seconds per code symbol.
    a: f64,
    /// Fixed overhead in seconds.
    b: f64,
    noise_sd: f64,
}

impl TimeModel {
    pub fn new(a: f64, b: f64, noise_sd: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidTimeModel(format!(
                "slope a = {a} must be positive"
            )));
        }
        if !b.is_finite() {
            return Err(Error::InvalidTimeModel(format!(
                "intercept b = {b} is not finite"
            )));
        }
        if !(noise_sd.is_finite() && noise_sd >= 0.0) {
            return Err(Error::InvalidTimeModel(format!(
                "noise sd {noise_sd} must be non-negative"
            )));
        }
        Ok(TimeModel { a, b, noise_sd })
    }

    pub fn noiseless(a: f64, b: f64) -> Result<Self> {
        Self::new(a, b, 0.0)
    }

    /// Model whose slope transmits `bits_per_minute` when length is in bits.
    pub fn from_rate(bits_per_minute: f64, b: f64, noise_sd: f64) -> Result<Self> {
        Self::new(60.0 / bits_per_minute, b, noise_sd)
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn noise_sd(&self) -> f64 {
        self.noise_sd
    }

    pub fn predict(&self, length: f64) -> f64 {
        self.a * length + self.b
    }

    /// Predicted times must be non-negative for lengths in `[min, max]`.
    pub fn check_operating_range(&self, min_length: f64, max_length: f64) -> Result<()> {
        let worst = self.predict(min_length).min(self.predict(max_length));
        if worst < 0.0 {
            return Err(Error::InvalidTimeModel(format!(
                "predicted time {worst:.3} s is negative for code lengths in [{min_length}, {max_length}]"
            )));
        }
        Ok(())
    }
}

/// Deterministic contact time for `word`.
pub fn transmission_time(word: &CodeWord, model: &TimeModel) -> f64 {
    model.predict(word.length())
}

/// Contact time with Gaussian noise, clamped to [`MIN_CONTACT_SECONDS`].
pub fn sample_transmission_time<R: Rng + ?Sized>(
    word: &CodeWord,
    model: &TimeModel,
    rng: &mut R,
) -> f64 {
    let mean = transmission_time(word, model);
    let t = if model.noise_sd > 0.0 {
        Normal::new(mean, model.noise_sd)
            .expect("validated sd")
            .sample(rng)
    } else {
        mean
    };
    t.max(MIN_CONTACT_SECONDS)
}
