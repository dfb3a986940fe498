use serde::{Deserialize, Serialize};

use crate::error::ReconError;

/// Knobs of one reconstruction run. `k` and `delta` are the promised
/// treelength and maximum-degree bounds of the hidden graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionConfig {
    pub k: u32,
    pub delta: u32,
    /// Replaces the default betweenness sample constant `delta^k + 2`.
    pub sample_constant: Option<f64>,
    /// Replaces the default leaf size `max(2, floor(log2 n))`.
    pub base_threshold: Option<usize>,
    /// Separator attempts per node before falling back to brute force.
    pub max_retries_per_node: u32,
    pub seed: u64,
    /// Compute child boundary layers through an additional
    /// `(S ∪ R¹) x R^{≤3k}` batch instead of reading them off the node batch.
    #[serde(default)]
    pub boundary_batch: bool,
    /// Replaces the balance factor `alpha(delta, k)`. Meant for experiments
    /// and for forcing the fallback path in tests.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub balance_override: Option<f64>,
}

impl ReconstructionConfig {
    pub const DEFAULT_MAX_RETRIES: u32 = 20;

    pub fn new(k: u32, delta: u32, seed: u64) -> Self {
        ReconstructionConfig {
            k,
            delta,
            sample_constant: None,
            base_threshold: None,
            max_retries_per_node: Self::DEFAULT_MAX_RETRIES,
            seed,
            boundary_batch: false,
            balance_override: None,
        }
    }

    pub fn validate(&self) -> Result<(), ReconError> {
        if self.k < 1 {
            return Err(ReconError::Config("k must be at least 1".into()));
        }
        if self.delta < 2 {
            return Err(ReconError::Config("delta must be at least 2".into()));
        }
        if self.max_retries_per_node < 1 {
            return Err(ReconError::Config("max_retries_per_node must be at least 1".into()));
        }
        if let Some(c) = self.sample_constant {
            if !(c.is_finite() && c > 0.0) {
                return Err(ReconError::Config(format!("sample constant must be positive (got {c})")));
            }
        }
        if let Some(b) = self.balance_override {
            if !(0.0..=1.0).contains(&b) {
                return Err(ReconError::Config(format!("balance override must lie in [0, 1] (got {b})")));
            }
        }
        Ok(())
    }

    /// Sample constant in effect for this run.
    pub fn effective_sample_constant(&self) -> Result<f64, ReconError> {
        match self.sample_constant {
            Some(c) => Ok(c),
            None => sample_constant(self.delta, self.k),
        }
    }

    /// Balance factor in effect for this run.
    pub fn effective_alpha(&self) -> Result<f64, ReconError> {
        match self.balance_override {
            Some(b) => Ok(b),
            None => alpha(self.delta, self.k),
        }
    }

    /// Separator radius `floor(3k/2)`.
    pub fn separator_radius(&self) -> u32 {
        3 * self.k / 2
    }

    /// Number of boundary layers kept per node, `3k`.
    pub fn layer_count(&self) -> usize {
        3 * self.k as usize
    }
}

fn delta_pow_k(delta: u32, k: u32, what: &'static str) -> Result<u64, ReconError> {
    (delta as u64)
        .checked_pow(k)
        .filter(|&p| p < (1u64 << 52))
        .ok_or(ReconError::ParameterOverflow { what, delta, k })
}

/// Default number of sampled pairs per `log2(n_A + r)`: `delta^k + 2`.
///
/// Any constant at least `1/(2p)` suffices, and the betweenness lower bound
/// `p >= 1/(2(delta^k + 1))` makes `delta^k + 2` always large enough.
pub fn sample_constant(delta: u32, k: u32) -> Result<f64, ReconError> {
    Ok((delta_pow_k(delta, k, "sample constant")? + 2) as f64)
}

/// Balance factor `sqrt(1 - 1/(4(delta^k + 1)))` met by the separator of a
/// high-betweenness vertex.
pub fn alpha(delta: u32, k: u32) -> Result<f64, ReconError> {
    let p = delta_pow_k(delta, k, "alpha")? as f64;
    Ok((1.0 - 1.0 / (4.0 * (p + 1.0))).sqrt())
}

/// Components of at most this many vertices are reconstructed by asking for
/// all their pairwise distances.
pub fn base_threshold(n0: usize, override_value: Option<usize>) -> usize {
    override_value.unwrap_or_else(|| {
        let log = if n0 == 0 { 0 } else { n0.ilog2() as usize };
        log.max(2)
    })
}
