//! Discrete joint probability distributions and Shannon entropy in bits.
//!
//! A [`JointDistribution`] is a dense n-dimensional probability table over
//! named categorical variables. Entropies use base-2 logarithms with the
//! convention `0 * log2(0) = 0`, so zero-probability cells contribute
//! nothing. The redundancy of a system is `R = 1 - H_system / H_max`,
//! the fraction of the maximum entropy not used by the observed system.

use thiserror::Error;

/// Probability tables must sum to one within this absolute tolerance.
pub const PROB_SUM_TOLERANCE: f64 = 1e-12;

/// Slack allowed on entropy comparisons before they count as violations.
pub const ENTROPY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProbError {
    #[error("AllZeroCounts: every cell of the count table is zero")]
    AllZeroCounts,
    #[error("ShapeMismatch: count table has {actual} cells but the alphabets imply {expected}")]
    ShapeMismatch { expected: usize, actual: usize },
    #[error("UnknownVariable: no variable named {0:?}")]
    UnknownVariable(String),
    #[error("EmptySubset: the list of variables to keep is empty")]
    EmptySubset,
    #[error("NonPositiveStates: the number of states must be at least 1")]
    NonPositiveStates,
    #[error("LengthMismatch: {states} states but {meanings} meaning entries")]
    LengthMismatch { states: usize, meanings: usize },
    #[error("MeaningCountBelowOne: meanings[{index}] = {value}, expected m >= 1")]
    MeaningCountBelowOne { index: usize, value: f64 },
    #[error("ZeroMaxEntropy: redundancy is undefined when the maximum entropy is 0")]
    ZeroMaxEntropy,
    #[error("SystemExceedsMax: system entropy {system} exceeds maximum entropy {max}")]
    SystemExceedsMax { system: f64, max: f64 },
    #[error("NoVariables: a distribution needs at least one variable")]
    NoVariables,
    #[error("DuplicateVariable: variable {0:?} appears more than once")]
    DuplicateVariable(String),
    #[error("DuplicateCategory: variable {variable:?} lists category {value:?} twice")]
    DuplicateCategory { variable: String, value: String },
    #[error("InvalidSmoothing: pseudo-count {0} must be finite and non-negative")]
    InvalidSmoothing(f64),
}

pub type Result<T> = std::result::Result<T, ProbError>;

/// An entropy measured in bits. Always non-negative.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EntropyValue {
    bits: f64,
}

impl EntropyValue {
    pub fn new(bits: f64) -> Self {
        debug_assert!(bits >= 0.0, "entropy must be non-negative, got {bits}");
        EntropyValue { bits }
    }

    pub fn bits(&self) -> f64 {
        self.bits
    }
}

/// A dense joint probability table over named categorical variables.
///
/// Cells are stored row-major with the last variable's axis fastest.
/// Probabilities are non-negative and sum to one within
/// [`PROB_SUM_TOLERANCE`].
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution {
    variables: Vec<String>,
    alphabets: Vec<Vec<String>>,
    probs: Vec<f64>,
}

impl JointDistribution {
    /// Normalizes a table of event counts into a probability table.
    ///
    /// `counts` is row-major over the given alphabets (last axis fastest)
    /// and must contain at least one non-zero cell.
    pub fn from_counts(
        variables: &[String],
        alphabets: &[Vec<String>],
        counts: &[u64],
    ) -> Result<Self> {
        Self::from_counts_smoothed(variables, alphabets, counts, 0.0)
    }

    /// Like [`Self::from_counts`] but adds the pseudo-count `alpha` to every
    /// cell before normalizing. With `alpha > 0` every cell gets positive
    /// probability even when its count is zero.
    pub fn from_counts_smoothed(
        variables: &[String],
        alphabets: &[Vec<String>],
        counts: &[u64],
        alpha: f64,
    ) -> Result<Self> {
        check_layout(variables, alphabets)?;
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(ProbError::InvalidSmoothing(alpha));
        }
        let cells: usize = alphabets.iter().map(Vec::len).product();
        if counts.len() != cells {
            return Err(ProbError::ShapeMismatch {
                expected: cells,
                actual: counts.len(),
            });
        }
        let raw_total: u64 = counts.iter().sum();
        if raw_total == 0 && alpha == 0.0 {
            return Err(ProbError::AllZeroCounts);
        }
        let total = raw_total as f64 + alpha * cells as f64;
        let probs = counts
            .iter()
            .map(|&c| (c as f64 + alpha) / total)
            .collect();
        Ok(JointDistribution {
            variables: variables.to_vec(),
            alphabets: alphabets.to_vec(),
            probs,
        })
    }

    /// Builds a distribution directly from probabilities, validating shape,
    /// non-negativity, and the unit-sum tolerance.
    pub fn from_probs(
        variables: &[String],
        alphabets: &[Vec<String>],
        probs: &[f64],
    ) -> Result<Self> {
        check_layout(variables, alphabets)?;
        let cells: usize = alphabets.iter().map(Vec::len).product();
        if probs.len() != cells {
            return Err(ProbError::ShapeMismatch {
                expected: cells,
                actual: probs.len(),
            });
        }
        if probs.iter().all(|&p| p == 0.0) {
            return Err(ProbError::AllZeroCounts);
        }
        let sum = compensated_sum(probs);
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0)
            || (sum - 1.0).abs() > PROB_SUM_TOLERANCE
        {
            return Err(ProbError::ShapeMismatch {
                expected: cells,
                actual: probs.len(),
            });
        }
        Ok(JointDistribution {
            variables: variables.to_vec(),
            alphabets: alphabets.to_vec(),
            probs: probs.to_vec(),
        })
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn variable_count(&self) -> usize {
        self.variables.len()
    }

    pub fn alphabets(&self) -> &[Vec<String>] {
        &self.alphabets
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn shape(&self) -> Vec<usize> {
        self.alphabets.iter().map(Vec::len).collect()
    }

    /// Sums out every variable not listed in `keep`. The kept variables
    /// retain their original relative order; `keep` is treated as a set.
    pub fn marginalize(&self, keep: &[&str]) -> Result<JointDistribution> {
        if keep.is_empty() {
            return Err(ProbError::EmptySubset);
        }
        let mut keep_mask = vec![false; self.variables.len()];
        for name in keep {
            let idx = self
                .variables
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| ProbError::UnknownVariable(name.to_string()))?;
            keep_mask[idx] = true;
        }
        let kept: Vec<usize> = (0..self.variables.len()).filter(|&i| keep_mask[i]).collect();
        let shape = self.shape();
        let strides = row_major_strides(&shape);
        let out_shape: Vec<usize> = kept.iter().map(|&i| shape[i]).collect();
        let out_strides = row_major_strides(&out_shape);
        let mut out = vec![0.0; out_shape.iter().product()];
        for (idx, &p) in self.probs.iter().enumerate() {
            let mut out_idx = 0;
            for (k, &axis) in kept.iter().enumerate() {
                let coord = (idx / strides[axis]) % shape[axis];
                out_idx += coord * out_strides[k];
            }
            out[out_idx] += p;
        }
        Ok(JointDistribution {
            variables: kept.iter().map(|&i| self.variables[i].clone()).collect(),
            alphabets: kept.iter().map(|&i| self.alphabets[i].clone()).collect(),
            probs: out,
        })
    }

    /// Shannon entropy `H = -sum p_i log2(p_i)` in bits. Zero-probability
    /// cells are skipped per the `0 * log2(0) = 0` convention.
    pub fn entropy(&self) -> EntropyValue {
        let bits = self
            .probs
            .iter()
            .filter(|&&p| p > 0.0)
            .map(|&p| -p * p.log2())
            .sum();
        EntropyValue::new(bits)
    }
}

fn check_layout(variables: &[String], alphabets: &[Vec<String>]) -> Result<()> {
    if variables.is_empty() {
        return Err(ProbError::NoVariables);
    }
    if variables.len() != alphabets.len() {
        return Err(ProbError::ShapeMismatch {
            expected: variables.len(),
            actual: alphabets.len(),
        });
    }
    for (i, v) in variables.iter().enumerate() {
        if variables[..i].contains(v) {
            return Err(ProbError::DuplicateVariable(v.clone()));
        }
    }
    for (variable, alphabet) in variables.iter().zip(alphabets) {
        if alphabet.is_empty() {
            return Err(ProbError::NonPositiveStates);
        }
        for (i, value) in alphabet.iter().enumerate() {
            if alphabet[..i].contains(value) {
                return Err(ProbError::DuplicateCategory {
                    variable: variable.clone(),
                    value: value.clone(),
                });
            }
        }
    }
    Ok(())
}

pub(crate) fn row_major_strides(shape: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; shape.len()];
    for i in (0..shape.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * shape[i + 1];
    }
    strides
}

/// Neumaier-compensated sum, used where plain accumulation could drift
/// past [`PROB_SUM_TOLERANCE`] on large tables.
pub(crate) fn compensated_sum(values: &[f64]) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for &v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Maximum entropy of a system with `n_states` equally probable states:
/// `log2(n_states)` bits.
pub fn max_entropy(n_states: usize) -> Result<EntropyValue> {
    if n_states == 0 {
        return Err(ProbError::NonPositiveStates);
    }
    Ok(EntropyValue::new((n_states as f64).log2()))
}

/// Maximum entropy after expanding each state into its possible meanings:
/// `log2(M * N)` bits where `M` is the total meaning count.
///
/// Each entry of `meanings` is a real-valued weight `m_i >= 1`, one per
/// state, so a system that conveys meaning has more capacity than its bare
/// state count suggests.
pub fn expanded_max_entropy(n_states: usize, meanings: &[f64]) -> Result<EntropyValue> {
    if n_states == 0 {
        return Err(ProbError::NonPositiveStates);
    }
    if meanings.len() != n_states {
        return Err(ProbError::LengthMismatch {
            states: n_states,
            meanings: meanings.len(),
        });
    }
    for (index, &value) in meanings.iter().enumerate() {
        if !(value >= 1.0) || !value.is_finite() {
            return Err(ProbError::MeaningCountBelowOne { index, value });
        }
    }
    let total: f64 = meanings.iter().sum();
    Ok(EntropyValue::new((total * n_states as f64).log2()))
}

/// Redundancy `R = 1 - h_system / h_max`, the unused fraction of the
/// maximum entropy. Clamped into `[0, 1]`; a system entropy more than
/// [`ENTROPY_TOLERANCE`] above the maximum is rejected.
pub fn redundancy(h_system: EntropyValue, h_max: EntropyValue) -> Result<f64> {
    let system = h_system.bits();
    let max = h_max.bits();
    if max == 0.0 {
        return Err(ProbError::ZeroMaxEntropy);
    }
    if system > max + ENTROPY_TOLERANCE {
        return Err(ProbError::SystemExceedsMax { system, max });
    }
    Ok((1.0 - system / max).clamp(0.0, 1.0))
}
