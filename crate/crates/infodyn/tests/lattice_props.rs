use infodyn::lattice::{
    entropy_lattice, interaction_information_oracle, phi_balance, EntropyLattice,
};
use infodyn::prob::JointDistribution;
use proptest::prelude::*;

fn distribution(n_vars: usize) -> impl Strategy<Value = JointDistribution> {
    prop::collection::vec(2usize..=3, n_vars).prop_flat_map(|shape| {
        let cells: usize = shape.iter().product();
        prop::collection::vec(0u64..20, cells)
            .prop_filter("at least one count", |c| c.iter().any(|&x| x > 0))
            .prop_map(move |counts| {
                let variables: Vec<String> =
                    (0..shape.len()).map(|i| format!("v{i}")).collect();
                let alphabets: Vec<Vec<String>> = shape
                    .iter()
                    .map(|&k| (0..k).map(|s| format!("s{s}")).collect())
                    .collect();
                JointDistribution::from_counts(&variables, &alphabets, &counts).unwrap()
            })
    })
}

fn any_distribution() -> impl Strategy<Value = JointDistribution> {
    (2usize..=3).prop_flat_map(distribution)
}

/// Entropy of a subset computed the slow way: marginalize the full
/// joint down to the named variables and measure that table directly.
fn marginal_entropy(dist: &JointDistribution, lattice: &EntropyLattice, bits: u32) -> f64 {
    let names = lattice.subset_names(infodyn::lattice::Subset::from_bits(bits));
    dist.marginalize(&names).unwrap().entropy().bits()
}

proptest! {
    #[test]
    fn lattice_matches_direct_marginalization(dist in any_distribution()) {
        let lattice = entropy_lattice(&dist).unwrap();
        for subset in lattice.subsets() {
            let fast = lattice.entropy_of(subset).unwrap();
            let slow = marginal_entropy(&dist, &lattice, subset.bits());
            prop_assert!((fast - slow).abs() < 1e-9, "subset {:?}: {fast} vs {slow}", subset);
        }
    }

    #[test]
    fn entropy_is_monotone_over_subsets(dist in any_distribution()) {
        let lattice = entropy_lattice(&dist).unwrap();
        let subsets = lattice.subsets();
        for &s in &subsets {
            for &t in &subsets {
                if s.is_subset_of(t) {
                    let hs = lattice.entropy_of(s).unwrap();
                    let ht = lattice.entropy_of(t).unwrap();
                    prop_assert!(hs <= ht + 1e-9);
                }
            }
        }
    }

    #[test]
    fn entropy_is_subadditive_over_disjoint_splits(dist in any_distribution()) {
        let lattice = entropy_lattice(&dist).unwrap();
        let full = lattice.full_set().bits();
        let mut a = full;
        while a > 0 {
            let b = full & !a;
            if b != 0 {
                let ha = lattice.entropy_of(infodyn::lattice::Subset::from_bits(a)).unwrap();
                let hb = lattice.entropy_of(infodyn::lattice::Subset::from_bits(b)).unwrap();
                let hab = lattice.entropy_of(lattice.full_set()).unwrap();
                prop_assert!(hab <= ha + hb + 1e-9);
            }
            a = (a - 1) & full;
        }
    }

    #[test]
    fn pairwise_information_is_never_negative(dist in any_distribution()) {
        let lattice = entropy_lattice(&dist).unwrap();
        for subset in lattice.subsets() {
            if subset.len() == 2 {
                prop_assert!(lattice.mutual_information(subset).unwrap() >= -1e-9);
            }
        }
    }

    #[test]
    fn total_correlation_is_never_negative(dist in any_distribution()) {
        let lattice = entropy_lattice(&dist).unwrap();
        prop_assert!(lattice.total_correlation().unwrap() >= -1e-9);
    }

    #[test]
    fn redundancy_decomposition_reproduces_the_top_information(dist in any_distribution()) {
        let lattice = entropy_lattice(&dist).unwrap();
        let report = lattice.mutual_redundancy().unwrap();
        let n = lattice.variable_count();
        let t_full = lattice.mutual_information(lattice.full_set()).unwrap();
        let sign = if n % 2 == 0 { -1.0 } else { 1.0 };
        prop_assert!((report.mutual_redundancy - sign * t_full).abs() < 1e-9);
        prop_assert!(
            (report.term_negative + report.term_interaction - report.mutual_redundancy).abs()
                < 1e-12
        );
        prop_assert!(report.term_negative <= 1e-12);
        prop_assert!((report.term_negative + report.total_correlation).abs() < 1e-12);
    }

    #[test]
    fn triple_information_matches_the_conditional_oracle(dist in distribution(3)) {
        let lattice = entropy_lattice(&dist).unwrap();
        let t = lattice.mutual_information(lattice.full_set()).unwrap();
        let oracle = interaction_information_oracle(&dist).unwrap();
        prop_assert!((t - oracle).abs() < 1e-9, "lattice {t} vs oracle {oracle}");
    }

    #[test]
    fn phi_terms_partition_the_joint_entropy(dist in distribution(2)) {
        let balance = phi_balance(&dist).unwrap();
        let lattice = entropy_lattice(&dist).unwrap();
        let h_joint = lattice.entropy_of(lattice.full_set()).unwrap();
        prop_assert!((balance.constraint + balance.flexibility - h_joint).abs() < 1e-9);
        prop_assert!(
            (balance.phi - (balance.constraint - balance.flexibility)).abs() < 1e-12
        );
        prop_assert!(balance.constraint >= -1e-9);
    }
}
