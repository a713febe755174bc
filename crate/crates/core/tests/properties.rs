use hyperball::graph::{gnm_random, ring_lattice, watts_strogatz, Graph};
use hyperball::metrics::{average_path_length, small_world_coefficient, SmallWorldConfig};
use hyperball::oracle::{bfs_balls, distances_from, exact_average_path_length, OracleConfig};
use hyperball::{run_hyperball, HyperBallConfig, Mode};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arb_graph() -> impl Strategy<Value = Graph> {
    (1usize..60, any::<bool>()).prop_flat_map(|(n, directed)| {
        let max_arcs = n * (n - 1);
        prop::collection::vec((0..n as u32, 0..n as u32), 0..=max_arcs.min(150))
            .prop_map(move |arcs| Graph::from_arcs(n, arcs, directed).unwrap())
    })
}

fn eccentricity_bound(g: &Graph) -> usize {
    (0..g.num_nodes()).flat_map(|s| distances_from(g, s)).flatten().max().unwrap_or(0) as usize
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_mode_matches_bfs(g in arb_graph()) {
        let table = run_hyperball(&g, &HyperBallConfig::exact(usize::MAX)).unwrap();
        let oracle = bfs_balls(&g, &OracleConfig::sequential(usize::MAX)).unwrap();
        prop_assert_eq!(table.num_radii(), oracle.num_radii());
        for v in 0..g.num_nodes() {
            let exact: Vec<f64> = oracle.row(v).iter().map(|&s| s as f64).collect();
            prop_assert_eq!(table.row(v), &exact[..]);
        }
        match (average_path_length(&table), exact_average_path_length(&g)) {
            (Ok(a), Ok(b)) => prop_assert!((a - b).abs() < 1e-9),
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a, b),
        }
    }

    #[test]
    fn exact_run_ends_at_largest_eccentricity(g in arb_graph()) {
        let table = run_hyperball(&g, &HyperBallConfig::exact(usize::MAX)).unwrap();
        prop_assert!(table.converged());
        prop_assert_eq!(table.max_radius(), eccentricity_bound(&g));
    }

    #[test]
    fn depth_cap_truncates(g in arb_graph(), cap in 1usize..4) {
        let full = run_hyperball(&g, &HyperBallConfig::exact(usize::MAX)).unwrap();
        let capped = run_hyperball(&g, &HyperBallConfig::exact(cap)).unwrap();
        prop_assert!(capped.max_radius() <= cap);
        for v in 0..g.num_nodes() {
            prop_assert_eq!(capped.row(v), &full.row(v)[..capped.num_radii()]);
        }
    }
}

#[test]
fn omega_is_invariant_under_relabelling() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for seed in 0..3 {
        let g = watts_strogatz(120, 6, 0.2, seed).unwrap();
        let mut perm: Vec<u32> = (0..120).collect();
        perm.shuffle(&mut rng);
        let h = g.permuted(&perm).unwrap();
        let config = SmallWorldConfig { mode: Mode::Exact, hyperball: HyperBallConfig::exact(200), ..Default::default() };
        let a = small_world_coefficient(&g, &config).unwrap();
        let b = small_world_coefficient(&h, &config).unwrap();
        assert_eq!(a.apl_input, b.apl_input);
        assert_eq!(a.apl_random, b.apl_random);
        assert!((a.omega - b.omega).abs() < 1e-12, "{} vs {}", a.omega, b.omega);
    }
}

#[test]
fn omega_orders_lattice_small_world_random() {
    let config = SmallWorldConfig { mode: Mode::Oracle, ..Default::default() };
    let lattice = small_world_coefficient(&ring_lattice(300, 8).unwrap(), &config).unwrap();
    let small = small_world_coefficient(&watts_strogatz(300, 8, 0.1, 5).unwrap(), &config).unwrap();
    let random = small_world_coefficient(&gnm_random(300, 1200, 5).unwrap(), &config).unwrap();
    assert!(lattice.omega < -0.5, "{lattice:?}");
    assert!(small.omega.abs() < 0.5, "{small:?}");
    assert!(random.omega > 0.5, "{random:?}");
    assert!(lattice.omega < small.omega && small.omega < random.omega);
}

#[test]
fn estimate_tracks_oracle_on_small_world_graph() {
    let g = watts_strogatz(500, 10, 0.1, 3).unwrap();
    let oracle = bfs_balls(&g, &OracleConfig::sequential(usize::MAX)).unwrap().to_ball_table(true);
    let estimate = run_hyperball(&g, &HyperBallConfig { max_depth: 50, ..Default::default() }).unwrap();
    let exact = exact_average_path_length(&g).unwrap();
    let approx = average_path_length(&estimate).unwrap();
    assert!((approx - exact).abs() / exact < 0.05, "{approx} vs {exact}");
    for (a, b) in estimate.aggregate().iter().zip(oracle.aggregate()) {
        assert!((a - b).abs() / b < 0.1, "{a} vs {b}");
    }
}
