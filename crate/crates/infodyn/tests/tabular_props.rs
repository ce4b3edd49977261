use infodyn::tabular::{
    bin_column, contingency, BinMethod, BinningSpec, DataTable, MissingPolicy,
};
use proptest::prelude::*;

fn numeric_table(values: &[f64]) -> DataTable {
    DataTable {
        headers: vec!["v".to_string()],
        rows: values
            .iter()
            .map(|v| vec![Some(format!("{v}"))])
            .collect(),
    }
}

fn bin_index(label: &str) -> usize {
    label.strip_prefix('b').unwrap().parse().unwrap()
}

fn distinct_values() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::btree_set(-1000i32..1000, 4..40).prop_map(|set| {
        set.into_iter().map(|v| v as f64 / 8.0).collect()
    })
}

proptest! {
    #[test]
    fn equal_width_bins_are_ordered_and_span_the_range(
        values in distinct_values(),
        bins in 2usize..=4,
    ) {
        prop_assume!(values.len() >= bins);
        let mut table = numeric_table(&values);
        bin_column(&mut table, &BinningSpec {
            column: "v".to_string(),
            method: BinMethod::EqualWidth,
            bins,
        }).unwrap();
        let labels: Vec<usize> = table
            .rows
            .iter()
            .map(|r| bin_index(r[0].as_deref().unwrap()))
            .collect();
        prop_assert!(labels.iter().all(|&b| b < bins));
        // values arrive sorted, so bin indices must be non-decreasing
        prop_assert!(labels.windows(2).all(|w| w[0] <= w[1]));
        prop_assert_eq!(labels[0], 0);
        prop_assert_eq!(*labels.last().unwrap(), bins - 1);
    }

    #[test]
    fn equal_frequency_bins_are_all_inhabited(
        values in distinct_values(),
        bins in 2usize..=4,
    ) {
        prop_assume!(values.len() >= bins);
        let mut table = numeric_table(&values);
        bin_column(&mut table, &BinningSpec {
            column: "v".to_string(),
            method: BinMethod::EqualFrequency,
            bins,
        }).unwrap();
        let labels: Vec<usize> = table
            .rows
            .iter()
            .map(|r| bin_index(r[0].as_deref().unwrap()))
            .collect();
        prop_assert!(labels.windows(2).all(|w| w[0] <= w[1]));
        let mut seen = vec![false; bins];
        for &b in &labels {
            seen[b] = true;
        }
        prop_assert!(seen.iter().all(|&s| s), "bins {:?} not all inhabited", labels);
        // with all-distinct inputs the shares differ by at most one when
        // the sample splits evenly
        let mut sizes = vec![0usize; bins];
        for &b in &labels {
            sizes[b] += 1;
        }
        if values.len() % bins == 0 {
            let share = values.len() / bins;
            prop_assert!(sizes.iter().all(|&s| s == share), "sizes {:?}", sizes);
        }
    }

    #[test]
    fn contingency_counts_every_surviving_row(
        cells in prop::collection::vec(
            (prop::option::weighted(0.8, "x|y|z"), prop::option::weighted(0.8, "0|1")),
            1..60,
        ),
    ) {
        let table = DataTable {
            headers: vec!["a".to_string(), "b".to_string()],
            rows: cells
                .iter()
                .map(|(a, b)| vec![a.clone(), b.clone()])
                .collect(),
        };
        let labeled = contingency(&table, &["a", "b"], MissingPolicy::Label).unwrap();
        prop_assert_eq!(labeled.total(), cells.len() as u64);

        let complete = cells.iter().filter(|(a, b)| a.is_some() && b.is_some()).count();
        let dropped = contingency(&table, &["a", "b"], MissingPolicy::DropRows);
        match dropped {
            Ok(ct) => prop_assert_eq!(ct.total(), complete as u64),
            Err(_) => prop_assert_eq!(complete, 0),
        }
    }

    #[test]
    fn contingency_bridges_to_a_normalized_distribution(
        cells in prop::collection::vec(("p|q", "0|1"), 1..60),
    ) {
        let table = DataTable {
            headers: vec!["a".to_string(), "b".to_string()],
            rows: cells
                .iter()
                .map(|(a, b)| vec![Some(a.clone()), Some(b.clone())])
                .collect(),
        };
        let ct = contingency(&table, &["a", "b"], MissingPolicy::Label).unwrap();
        let dist = ct.to_distribution().unwrap();
        let total: f64 = dist.probs().iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        prop_assert_eq!(dist.variables(), ct.variables.as_slice());
    }
}
