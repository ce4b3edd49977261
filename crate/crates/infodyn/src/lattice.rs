//! Joint entropies over every non-empty variable subset, multivariate
//! mutual information, total correlation, and the mutual-redundancy
//! decomposition.
//!
//! Subsets are bitmasks over the distribution's variable order (bit `i`
//! is variable `i`). Multivariate mutual information follows the signed
//! inclusion-exclusion sum
//!
//! ```text
//! T(S) = sum over non-empty U subset of S of (-1)^(|U|+1) * H(U)
//! ```
//!
//! whose sign alternates with dimensionality: pairwise values are
//! non-negative, while a three-way value can be negative (synergy) or
//! positive (shared history). Mutual redundancy flips the sign so the
//! reading is stable: `R_n = (-1)^(1+n) * T(1..n)`, negative when the
//! interaction term cannot compensate the total correlation.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::prob::{row_major_strides, JointDistribution};

/// Default limit on the number of variables a lattice will accept; the
/// lattice holds `2^n - 1` entries, so growth is exponential.
pub const DEFAULT_VARIABLE_CAP: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("TooManyVariables: {count} variables exceed the cap of {cap}")]
    TooManyVariables { count: usize, cap: usize },
    #[error("SubsetTooSmall: need at least 2 variables, got {len}")]
    SubsetTooSmall { len: usize },
    #[error("EmptySubset: the empty subset has no entropy entry")]
    EmptySubset,
    #[error("UnknownVariable: no variable named {0:?}")]
    UnknownVariable(String),
    #[error("SubsetOutOfRange: mask {bits:#b} addresses variables outside the lattice")]
    SubsetOutOfRange { bits: u32 },
    #[error("WrongArity: expected exactly {expected} variables, got {actual}")]
    WrongArity { expected: usize, actual: usize },
}

pub type Result<T> = std::result::Result<T, LatticeError>;

/// A set of variables encoded as a bitmask over the lattice's variable
/// order. Ordered by (size, mask) so iteration proceeds small sets first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Subset(u32);

impl Subset {
    pub fn from_bits(bits: u32) -> Self {
        Subset(bits)
    }

    pub fn singleton(var: usize) -> Self {
        Subset(1 << var)
    }

    pub fn full(n: usize) -> Self {
        debug_assert!(n >= 1 && n <= 31);
        Subset((1u32 << n) - 1)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, var: usize) -> bool {
        var < 32 && self.0 & (1 << var) != 0
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    /// Variable indices in ascending order.
    pub fn indices(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32usize).filter(move |i| bits & (1 << i) != 0)
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.len(), self.0).cmp(&(other.len(), other.0))
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Joint entropy of every non-empty subset of a distribution's variables:
/// `2^n - 1` entries, monotone under inclusion and subadditive.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyLattice {
    variables: Vec<String>,
    entries: Vec<f64>,
}

/// Builds the full entropy lattice with the default variable cap.
pub fn entropy_lattice(dist: &JointDistribution) -> Result<EntropyLattice> {
    entropy_lattice_with_cap(dist, DEFAULT_VARIABLE_CAP)
}

/// Builds the full entropy lattice, refusing more than `cap` variables.
///
/// Marginal tables are reused: each subset's table is summed out of a
/// one-larger parent, layer by layer, instead of re-marginalizing the
/// full table for all `2^n - 1` subsets.
pub fn entropy_lattice_with_cap(dist: &JointDistribution, cap: usize) -> Result<EntropyLattice> {
    let n = dist.variable_count();
    let cap = cap.min(31);
    if n > cap {
        return Err(LatticeError::TooManyVariables { count: n, cap });
    }
    let full = Subset::full(n).bits();
    let full_shape = dist.shape();
    let mut entries = vec![0.0; 1usize << n];
    let mut layer: HashMap<u32, Vec<f64>> = HashMap::new();
    entries[full as usize] = table_entropy(dist.probs());
    layer.insert(full, dist.probs().to_vec());
    for _size in (1..n).rev() {
        let mut next: HashMap<u32, Vec<f64>> = HashMap::new();
        for (&mask, table) in &layer {
            let shape = mask_shape(&full_shape, mask);
            for (pos, v) in Subset::from_bits(mask).indices().enumerate() {
                let child = mask & !(1u32 << v);
                if child == 0 || canonical_parent(child, full) != mask {
                    continue;
                }
                let child_table = sum_out(table, &shape, pos);
                entries[child as usize] = table_entropy(&child_table);
                next.insert(child, child_table);
            }
        }
        layer = next;
    }
    Ok(EntropyLattice {
        variables: dist.variables().to_vec(),
        entries,
    })
}

/// The parent every child table is derived from: the child plus the
/// lowest missing variable. Fixing the parent keeps construction
/// deterministic whatever order the layer map iterates in.
fn canonical_parent(child: u32, full: u32) -> u32 {
    let missing = full & !child;
    child | (missing & missing.wrapping_neg())
}

fn mask_shape(full_shape: &[usize], mask: u32) -> Vec<usize> {
    Subset::from_bits(mask)
        .indices()
        .map(|i| full_shape[i])
        .collect()
}

fn sum_out(table: &[f64], shape: &[usize], axis: usize) -> Vec<f64> {
    let strides = row_major_strides(shape);
    let inner = strides[axis];
    let block = inner * shape[axis];
    let mut out = vec![0.0; table.len() / shape[axis]];
    for (idx, &p) in table.iter().enumerate() {
        out[(idx / block) * inner + (idx % inner)] += p;
    }
    out
}

fn table_entropy(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

impl EntropyLattice {
    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn variable_count(&self) -> usize {
        self.variables.len()
    }

    pub fn full_set(&self) -> Subset {
        Subset::full(self.variables.len())
    }

    /// Joint entropy of `subset` in bits.
    pub fn entropy_of(&self, subset: Subset) -> Result<f64> {
        self.check(subset)?;
        Ok(self.entries[subset.bits() as usize])
    }

    /// All non-empty subsets, smallest first, ties by mask.
    pub fn subsets(&self) -> Vec<Subset> {
        let mut all: Vec<Subset> = (1..=self.full_set().bits()).map(Subset::from_bits).collect();
        all.sort();
        all
    }

    /// Resolves variable names into a subset mask.
    pub fn subset_of(&self, names: &[&str]) -> Result<Subset> {
        if names.is_empty() {
            return Err(LatticeError::EmptySubset);
        }
        let mut bits = 0u32;
        for name in names {
            let idx = self
                .variables
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| LatticeError::UnknownVariable(name.to_string()))?;
            bits |= 1 << idx;
        }
        Ok(Subset::from_bits(bits))
    }

    /// Variable names of a subset, in variable order.
    pub fn subset_names(&self, subset: Subset) -> Vec<&str> {
        subset
            .indices()
            .filter(|&i| i < self.variables.len())
            .map(|i| self.variables[i].as_str())
            .collect()
    }

    /// Multivariate mutual information of `subset`: the signed
    /// inclusion-exclusion sum of joint entropies over its non-empty
    /// subsets. For a pair this is `H1 + H2 - H12 >= 0`; for larger sets
    /// the sign may alternate.
    pub fn mutual_information(&self, subset: Subset) -> Result<f64> {
        self.check(subset)?;
        if subset.len() < 2 {
            return Err(LatticeError::SubsetTooSmall { len: subset.len() });
        }
        let mask = subset.bits();
        let mut t = 0.0;
        let mut u = mask;
        while u > 0 {
            let h = self.entries[u as usize];
            if u.count_ones() % 2 == 1 {
                t += h;
            } else {
                t -= h;
            }
            u = (u - 1) & mask;
        }
        Ok(t)
    }

    /// Total correlation: `sum H(x_i) - H(x_1..x_n)`, always >= 0.
    pub fn total_correlation(&self) -> Result<f64> {
        let n = self.variable_count();
        if n < 2 {
            return Err(LatticeError::SubsetTooSmall { len: n });
        }
        let singles: f64 = (0..n)
            .map(|i| self.entries[Subset::singleton(i).bits() as usize])
            .sum();
        Ok(singles - self.entries[self.full_set().bits() as usize])
    }

    /// Mutual redundancy of the whole system, decomposed into a
    /// necessarily non-positive term (the negated total correlation) and
    /// an interaction term built from the mutual information of every
    /// proper subset of size 2 to n-1 with alternating signs:
    ///
    /// ```text
    /// R_n = -(sum H(x_i) - H(joint))
    ///       + (sum T_ij - sum T_ijk + ... +- sum T over (n-1)-subsets)
    /// ```
    ///
    /// which equals `(-1)^(1+n) * T(1..n)`. A negative balance means the
    /// subsystem interactions cannot compensate the total correlation;
    /// a positive balance means redundant, historically grown structure.
    pub fn mutual_redundancy(&self) -> Result<SynergyReport> {
        let n = self.variable_count();
        if n < 2 {
            return Err(LatticeError::SubsetTooSmall { len: n });
        }
        let full = self.full_set();
        let mut t_values = BTreeMap::new();
        for bits in 1..=full.bits() {
            let s = Subset::from_bits(bits);
            if s.len() >= 2 {
                t_values.insert(s, self.mutual_information(s)?);
            }
        }
        let total_correlation = self.total_correlation()?;
        let term_negative = -total_correlation;
        let mut term_interaction = 0.0;
        for (&s, &t) in &t_values {
            let k = s.len();
            if k < n {
                if k % 2 == 0 {
                    term_interaction += t;
                } else {
                    term_interaction -= t;
                }
            }
        }
        Ok(SynergyReport {
            t_values,
            total_correlation,
            term_negative,
            term_interaction,
            mutual_redundancy: term_negative + term_interaction,
        })
    }

    fn check(&self, subset: Subset) -> Result<()> {
        if subset.is_empty() {
            return Err(LatticeError::EmptySubset);
        }
        if !subset.is_subset_of(self.full_set()) {
            return Err(LatticeError::SubsetOutOfRange {
                bits: subset.bits(),
            });
        }
        Ok(())
    }
}

/// Mutual redundancy and everything needed to audit it: the mutual
/// information of every subset of size >= 2 plus the two terms of the
/// decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct SynergyReport {
    /// Mutual information per subset, smallest subsets first.
    pub t_values: BTreeMap<Subset, f64>,
    /// `sum H(x_i) - H(joint)`, always >= 0.
    pub total_correlation: f64,
    /// Negated total correlation; never positive.
    pub term_negative: f64,
    /// Alternating-sign sum of subset mutual informations (sizes 2..n-1).
    pub term_interaction: f64,
    /// `term_negative + term_interaction`.
    pub mutual_redundancy: f64,
}

/// Independent check for three-variable mutual information: computes
/// `I(X1;X2) - I(X1;X2|X3)` straight from the probability table, without
/// touching the entropy lattice or its subset sums. Agrees with
/// [`EntropyLattice::mutual_information`] over the full triple.
pub fn interaction_information_oracle(dist: &JointDistribution) -> Result<f64> {
    let n = dist.variable_count();
    if n != 3 {
        return Err(LatticeError::WrongArity {
            expected: 3,
            actual: n,
        });
    }
    let shape = dist.shape();
    let (n1, n2, n3) = (shape[0], shape[1], shape[2]);
    let p = dist.probs();
    let at = |i: usize, j: usize, k: usize| p[(i * n2 + j) * n3 + k];
    let mut p1 = vec![0.0; n1];
    let mut p2 = vec![0.0; n2];
    let mut p3 = vec![0.0; n3];
    let mut p12 = vec![0.0; n1 * n2];
    let mut p13 = vec![0.0; n1 * n3];
    let mut p23 = vec![0.0; n2 * n3];
    for i in 0..n1 {
        for j in 0..n2 {
            for k in 0..n3 {
                let v = at(i, j, k);
                p1[i] += v;
                p2[j] += v;
                p3[k] += v;
                p12[i * n2 + j] += v;
                p13[i * n3 + k] += v;
                p23[j * n3 + k] += v;
            }
        }
    }
    let mut i12 = 0.0;
    for i in 0..n1 {
        for j in 0..n2 {
            let pij = p12[i * n2 + j];
            if pij > 0.0 {
                i12 += pij * (pij / (p1[i] * p2[j])).log2();
            }
        }
    }
    let mut i12_given_3 = 0.0;
    for i in 0..n1 {
        for j in 0..n2 {
            for k in 0..n3 {
                let pijk = at(i, j, k);
                if pijk > 0.0 {
                    i12_given_3 +=
                        pijk * (p3[k] * pijk / (p13[i * n3 + k] * p23[j * n3 + k])).log2();
                }
            }
        }
    }
    Ok(i12 - i12_given_3)
}

/// The balance between realized constraint and residual freedom in a
/// two-variable system. `constraint + flexibility = H(X,Y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiBalance {
    /// Realized mutual constraint `T(X;Y) = H(X) + H(Y) - H(X,Y)` in bits.
    pub constraint: f64,
    /// Residual freedom `H(X|Y) + H(Y|X)` in bits.
    pub flexibility: f64,
    /// Net balance: `constraint - flexibility`.
    pub phi: f64,
}

/// Computes the constraint/flexibility balance of a two-variable system.
pub fn phi_balance(dist: &JointDistribution) -> Result<PhiBalance> {
    let n = dist.variable_count();
    if n != 2 {
        return Err(LatticeError::WrongArity {
            expected: 2,
            actual: n,
        });
    }
    let vars = dist.variables();
    let h1 = dist
        .marginalize(&[vars[0].as_str()])
        .expect("first variable exists")
        .entropy()
        .bits();
    let h2 = dist
        .marginalize(&[vars[1].as_str()])
        .expect("second variable exists")
        .entropy()
        .bits();
    let h12 = dist.entropy().bits();
    let constraint = h1 + h2 - h12;
    let flexibility = (h12 - h2) + (h12 - h1);
    Ok(PhiBalance {
        constraint,
        flexibility,
        phi: constraint - flexibility,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn names(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    fn binary_alphabets(n: usize) -> Vec<Vec<String>> {
        (0..n).map(|_| names(&["0", "1"])).collect()
    }

    fn dist(n: usize, counts: &[u64]) -> JointDistribution {
        let vars: Vec<String> = (1..=n).map(|i| format!("X{i}")).collect();
        JointDistribution::from_counts(&vars, &binary_alphabets(n), counts).unwrap()
    }

    /// Third variable is the XOR of the first two: pure synergy.
    fn xor_triple() -> JointDistribution {
        dist(3, &[1, 0, 0, 1, 0, 1, 1, 0])
    }

    /// All three variables are copies of one fair coin: pure redundancy.
    fn copy_triple() -> JointDistribution {
        dist(3, &[1, 0, 0, 0, 0, 0, 0, 1])
    }

    fn independent_pair() -> JointDistribution {
        dist(2, &[1, 1, 1, 1])
    }

    #[test]
    fn subset_ordering_is_size_then_mask() {
        let mut subs = vec![
            Subset::from_bits(0b111),
            Subset::from_bits(0b100),
            Subset::from_bits(0b011),
            Subset::from_bits(0b101),
        ];
        subs.sort();
        let bits: Vec<u32> = subs.iter().map(|s| s.bits()).collect();
        assert_eq!(bits, vec![0b100, 0b011, 0b101, 0b111]);
    }

    #[test]
    fn lattice_has_all_nonempty_subsets() {
        let lat = entropy_lattice(&xor_triple()).unwrap();
        assert_eq!(lat.subsets().len(), 7);
    }

    #[test]
    fn lattice_of_single_coin() {
        let d = JointDistribution::from_counts(&names(&["X"]), &binary_alphabets(1), &[1, 1])
            .unwrap();
        let lat = entropy_lattice(&d).unwrap();
        assert_eq!(lat.entropy_of(Subset::singleton(0)).unwrap(), 1.0);
    }

    #[test]
    fn xor_lattice_entropies() {
        let lat = entropy_lattice(&xor_triple()).unwrap();
        for i in 0..3 {
            assert_eq!(lat.entropy_of(Subset::singleton(i)).unwrap(), 1.0);
        }
        for bits in [0b011u32, 0b101, 0b110] {
            assert_eq!(lat.entropy_of(Subset::from_bits(bits)).unwrap(), 2.0);
        }
        assert_eq!(lat.entropy_of(lat.full_set()).unwrap(), 2.0);
    }

    #[test]
    fn variable_cap_is_enforced() {
        let d = xor_triple();
        let err = entropy_lattice_with_cap(&d, 2).unwrap_err();
        assert_eq!(err, LatticeError::TooManyVariables { count: 3, cap: 2 });
    }

    #[test]
    fn pair_mutual_information_examples() {
        let lat = entropy_lattice(&independent_pair()).unwrap();
        assert_eq!(lat.mutual_information(lat.full_set()).unwrap(), 0.0);
        let copy_pair = dist(2, &[1, 0, 0, 1]);
        let lat = entropy_lattice(&copy_pair).unwrap();
        assert_eq!(lat.mutual_information(lat.full_set()).unwrap(), 1.0);
    }

    #[test]
    fn triple_mutual_information_signs() {
        let lat = entropy_lattice(&xor_triple()).unwrap();
        assert_relative_eq!(
            lat.mutual_information(lat.full_set()).unwrap(),
            -1.0,
            epsilon = 1e-12
        );
        let lat = entropy_lattice(&copy_triple()).unwrap();
        assert_relative_eq!(
            lat.mutual_information(lat.full_set()).unwrap(),
            1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn mutual_information_rejects_singletons() {
        let lat = entropy_lattice(&xor_triple()).unwrap();
        assert_eq!(
            lat.mutual_information(Subset::singleton(0)).unwrap_err(),
            LatticeError::SubsetTooSmall { len: 1 }
        );
    }

    #[test]
    fn total_correlation_examples() {
        let lat = entropy_lattice(&independent_pair()).unwrap();
        assert_eq!(lat.total_correlation().unwrap(), 0.0);
        let lat = entropy_lattice(&copy_triple()).unwrap();
        assert_eq!(lat.total_correlation().unwrap(), 2.0);
        let lat = entropy_lattice(&xor_triple()).unwrap();
        assert_eq!(lat.total_correlation().unwrap(), 1.0);
    }

    #[test]
    fn synergy_report_for_xor_triple() {
        let lat = entropy_lattice(&xor_triple()).unwrap();
        let report = lat.mutual_redundancy().unwrap();
        assert_eq!(report.t_values.len(), 4);
        for (&s, &t) in &report.t_values {
            if s.len() == 2 {
                assert_relative_eq!(t, 0.0, epsilon = 1e-12);
            }
        }
        assert_relative_eq!(report.term_negative, -1.0, epsilon = 1e-12);
        assert_relative_eq!(report.term_interaction, 0.0, epsilon = 1e-12);
        assert_relative_eq!(report.mutual_redundancy, -1.0, epsilon = 1e-12);
    }

    #[test]
    fn synergy_report_for_copy_triple() {
        let lat = entropy_lattice(&copy_triple()).unwrap();
        let report = lat.mutual_redundancy().unwrap();
        assert_relative_eq!(report.term_negative, -2.0, epsilon = 1e-12);
        assert_relative_eq!(report.term_interaction, 3.0, epsilon = 1e-12);
        assert_relative_eq!(report.mutual_redundancy, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn pair_redundancy_is_negated_mutual_information() {
        let lat = entropy_lattice(&independent_pair()).unwrap();
        let report = lat.mutual_redundancy().unwrap();
        assert_eq!(report.term_interaction, 0.0);
        assert_eq!(
            report.mutual_redundancy,
            -lat.mutual_information(lat.full_set()).unwrap()
        );
    }

    #[test]
    fn decomposition_matches_signed_full_set_value() {
        for d in [xor_triple(), copy_triple()] {
            let lat = entropy_lattice(&d).unwrap();
            let report = lat.mutual_redundancy().unwrap();
            let n = lat.variable_count();
            let t_full = report.t_values[&lat.full_set()];
            let sign = if (1 + n) % 2 == 0 { 1.0 } else { -1.0 };
            assert_relative_eq!(report.mutual_redundancy, sign * t_full, epsilon = 1e-9);
        }
    }

    #[test]
    fn oracle_agrees_on_canonical_fixtures() {
        assert_relative_eq!(
            interaction_information_oracle(&xor_triple()).unwrap(),
            -1.0,
            epsilon = 1e-12
        );
        assert_relative_eq!(
            interaction_information_oracle(&copy_triple()).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        let independent = dist(3, &[1; 8]);
        assert_relative_eq!(
            interaction_information_oracle(&independent).unwrap(),
            0.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn oracle_requires_three_variables() {
        let err = interaction_information_oracle(&independent_pair()).unwrap_err();
        assert_eq!(
            err,
            LatticeError::WrongArity {
                expected: 3,
                actual: 2
            }
        );
    }

    #[test]
    fn phi_balance_of_copy_pair() {
        let copy_pair = dist(2, &[1, 0, 0, 1]);
        let b = phi_balance(&copy_pair).unwrap();
        assert_eq!((b.constraint, b.flexibility, b.phi), (1.0, 0.0, 1.0));
    }

    #[test]
    fn phi_balance_of_independent_pair() {
        let b = phi_balance(&independent_pair()).unwrap();
        assert_eq!((b.constraint, b.flexibility, b.phi), (0.0, 2.0, -2.0));
    }

    #[test]
    fn phi_balance_of_point_mass() {
        let point = dist(2, &[1, 0, 0, 0]);
        let b = phi_balance(&point).unwrap();
        assert_eq!((b.constraint, b.flexibility, b.phi), (0.0, 0.0, 0.0));
        let err = phi_balance(&xor_triple()).unwrap_err();
        assert_eq!(
            err,
            LatticeError::WrongArity {
                expected: 2,
                actual: 3
            }
        );
    }

    #[test]
    fn constraint_and_flexibility_partition_joint_entropy() {
        let skewed = dist(2, &[3, 1, 1, 3]);
        let b = phi_balance(&skewed).unwrap();
        let h12 = skewed.entropy().bits();
        assert_relative_eq!(b.constraint + b.flexibility, h12, epsilon = 1e-12);
    }
}
