use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Serialize};

use super::{MetricsError, SampleMetrics};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct BootstrapConfig {
    pub resamples: usize,
    pub seed: u64,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        BootstrapConfig { resamples: 10_000, seed: 42 }
    }
}

/// Two-sided paired bootstrap p-value for the difference in mean exact F1.
///
/// Samples must be aligned by image id. Each resample draws `n` indices with
/// replacement and recomputes the mean of the per-image differences. The
/// p-value is twice the smaller tail mass at zero, capped at 1.
pub fn paired_bootstrap(
    a: &[SampleMetrics],
    b: &[SampleMetrics],
    config: BootstrapConfig,
) -> Result<f64, MetricsError> {
    if a.len() != b.len() {
        return Err(MetricsError::LengthMismatch(a.len(), b.len()));
    }
    if a.is_empty() {
        return Err(MetricsError::NoSamples);
    }
    if config.resamples == 0 {
        return Err(MetricsError::NoResamples);
    }
    for (index, (x, y)) in a.iter().zip(b).enumerate() {
        if x.image_id != y.image_id {
            return Err(MetricsError::Misaligned { index, left: x.image_id.clone(), right: y.image_id.clone() });
        }
    }

    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x.f1 - y.f1).collect();
    let n = diffs.len();
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(config.seed);
    let (mut le, mut ge) = (0usize, 0usize);
    for _ in 0..config.resamples {
        let mut sum = 0.0;
        for _ in 0..n {
            sum += diffs[rng.random_range(0..n)];
        }
        let stat = sum / n as f64;
        if stat <= 0.0 {
            le += 1;
        }
        if stat >= 0.0 {
            ge += 1;
        }
    }
    let tail = le.min(ge) as f64 / config.resamples as f64;
    Ok((2.0 * tail).min(1.0))
}
