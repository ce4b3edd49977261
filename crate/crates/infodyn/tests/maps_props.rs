use infodyn::maps::{
    bifurcation_scan, detect_period, fixed_points_hyper, step_hyper, step_incursive,
    steady_state_incursive, trajectory, Branch, BranchPolicy, MapKind, MapSpec, Periodicity,
    ScanConfig,
};
use proptest::prelude::*;

proptest! {
    #[test]
    fn recursive_orbits_stay_in_the_unit_interval(
        a in 0.01f64..=4.0,
        x0 in 0.0f64..=1.0,
    ) {
        let spec = MapSpec::new(MapKind::Recursive, a, x0, None).unwrap();
        let traj = trajectory(&spec, 200).unwrap();
        prop_assert!(traj.states.iter().all(|&x| (0.0..=1.0).contains(&x)));
    }

    #[test]
    fn incursive_error_shrinks_monotonically(
        a in 1.1f64..=20.0,
        x0 in 0.001f64..=1.0,
    ) {
        let spec = MapSpec::new(MapKind::Incursive, a, x0, None).unwrap();
        let target = steady_state_incursive(a).unwrap();
        let traj = trajectory(&spec, 300).unwrap();
        let mut prev = (traj.states[0] - target).abs();
        for &x in &traj.states[1..] {
            let err = (x - target).abs();
            prop_assert!(err <= prev + 1e-15);
            if prev > 1e-12 {
                prop_assert!(err < prev);
            }
            prev = err;
        }
        prop_assert!(prev < 1e-6);
    }

    #[test]
    fn hyper_branches_sum_to_one_bit_exactly(
        a in 4.0f64..=40.0,
        x in 0.0f64..=1.0,
    ) {
        let plus = step_hyper(x, a, Branch::Plus).unwrap();
        let minus = step_hyper(x, a, Branch::Minus).unwrap();
        prop_assert_eq!(plus + minus, 1.0);
        prop_assert!(plus >= 0.5);
        prop_assert!(minus <= 0.5);
    }

    #[test]
    fn hyper_outputs_are_roots_of_the_inverted_step(
        a in 4.0f64..=40.0,
        x in 0.0f64..=1.0,
    ) {
        for branch in [Branch::Plus, Branch::Minus] {
            let y = step_hyper(x, a, branch).unwrap();
            let residual = y * y - y + x / a;
            prop_assert!(residual.abs() < 1e-12, "residual {residual}");
        }
    }

    #[test]
    fn hyper_fixed_point_is_held_by_the_plus_branch(a in 4.0f64..=20.0) {
        let [zero, upper] = fixed_points_hyper(a).unwrap();
        prop_assert_eq!(zero, 0.0);
        let mut x = upper;
        for _ in 0..50 {
            x = step_hyper(x, a, Branch::Plus).unwrap();
        }
        prop_assert!((x - upper).abs() < 1e-9);
    }

    #[test]
    fn incursive_step_is_increasing_and_bounded(
        a in 0.1f64..=20.0,
        x in 0.0f64..=1.0,
        y in 0.0f64..=1.0,
    ) {
        let fx = step_incursive(x, a).unwrap();
        let fy = step_incursive(y, a).unwrap();
        prop_assert!(fx < 1.0);
        if x < y {
            prop_assert!(fx <= fy);
        }
    }

    #[test]
    fn settled_low_parameter_orbits_have_period_one(a in 2.5f64..=2.9) {
        let spec = MapSpec::new(MapKind::Recursive, a, 0.3, None).unwrap();
        let traj = trajectory(&spec, 2048).unwrap();
        prop_assert_eq!(detect_period(&traj, 1e-6).unwrap(), Periodicity::Periodic(1));
    }

    #[test]
    fn random_branch_trajectories_are_seed_deterministic(
        seed in any::<u64>(),
        p_plus in 0.0f64..=1.0,
    ) {
        let spec = MapSpec::new(
            MapKind::HyperIncursive,
            6.0,
            0.5,
            Some(BranchPolicy::Random { seed, p_plus }),
        )
        .unwrap();
        let a = trajectory(&spec, 64).unwrap();
        let b = trajectory(&spec, 64).unwrap();
        prop_assert_eq!(&a.states, &b.states);
        prop_assert!(a.states.iter().all(|&x| (0.0..=1.0).contains(&x)));
    }

    #[test]
    fn scans_cover_the_grid_in_order(
        seed in any::<u64>(),
        steps in 2usize..=12,
        samples in 1usize..=20,
    ) {
        let cfg = ScanConfig {
            kind: MapKind::HyperIncursive,
            a_min: 4.0,
            a_max: 9.0,
            a_steps: steps,
            x0: 0.4,
            transient: 50,
            samples,
            policy: Some(BranchPolicy::Random { seed, p_plus: 0.5 }),
        };
        let scan = bifurcation_scan(&cfg).unwrap();
        prop_assert_eq!(scan.points.len(), steps * samples);
        prop_assert_eq!(scan.points[0].0, 4.0);
        prop_assert_eq!(scan.points.last().unwrap().0, 9.0);
        let grid: Vec<f64> = scan.points.iter().map(|p| p.0).collect();
        prop_assert!(grid.windows(2).all(|w| w[0] <= w[1]));
        let in_range = scan
            .points
            .iter()
            .all(|&(a, x)| (4.0..=9.0).contains(&a) && (0.0..=1.0).contains(&x));
        prop_assert!(in_range);
    }
}
