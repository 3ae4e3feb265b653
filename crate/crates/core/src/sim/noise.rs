use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{ConfigError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseKind {
    #[default]
    None,
    /// Uniform on `[-amplitude, amplitude]`.
    Uniform,
    /// Normal with standard deviation `amplitude`.
    Gaussian,
}

/// Additive zero-mean measurement noise.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSpec {
    #[serde(default)]
    pub kind: NoiseKind,
    #[serde(default)]
    pub amplitude: f64,
    #[serde(default)]
    pub seed: u64,
}

impl NoiseSpec {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn uniform(amplitude: f64, seed: u64) -> Self {
        Self {
            kind: NoiseKind::Uniform,
            amplitude,
            seed,
        }
    }

    pub fn gaussian(amplitude: f64, seed: u64) -> Self {
        Self {
            kind: NoiseKind::Gaussian,
            amplitude,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.amplitude.is_finite() && self.amplitude >= 0.0) {
            return Err(ConfigError::invalid(
                "noise.amplitude",
                format!("must be finite and >= 0, got {}", self.amplitude),
            ));
        }
        Ok(())
    }
}

/// Seeded noise generator; the same spec always yields the same sequence.
#[derive(Debug, Clone)]
pub struct NoiseSource {
    spec: NoiseSpec,
    rng: ChaCha8Rng,
    normal: Option<Normal<f64>>,
}

impl NoiseSource {
    pub fn new(spec: NoiseSpec) -> Result<Self> {
        spec.validate()?;
        let normal = match spec.kind {
            NoiseKind::Gaussian if spec.amplitude > 0.0 => Some(
                Normal::new(0.0, spec.amplitude).map_err(|e| ConfigError::invalid("noise.amplitude", e.to_string()))?,
            ),
            _ => None,
        };
        Ok(Self {
            spec,
            rng: ChaCha8Rng::seed_from_u64(spec.seed),
            normal,
        })
    }

    pub fn sample(&mut self) -> f64 {
        let a = self.spec.amplitude;
        match self.spec.kind {
            NoiseKind::None => 0.0,
            _ if a == 0.0 => 0.0,
            NoiseKind::Uniform => self.rng.random_range(-a..=a),
            NoiseKind::Gaussian => self.normal.map_or(0.0, |n| n.sample(&mut self.rng)),
        }
    }
}
