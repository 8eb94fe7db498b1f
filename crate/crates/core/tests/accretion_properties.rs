use graphcon::centralized::{
    center_stability, density_grid, run_accretion, AccretionConfig, DensityGrid,
};
use graphcon::distributions::DistributionSpec;
use proptest::prelude::*;

fn normal(mu: f64, sigma: f64) -> DistributionSpec {
    DistributionSpec::normal(mu, sigma).unwrap()
}

#[test]
fn normal_cloud_center_is_within_six_standard_errors() {
    let cfg = AccretionConfig::new(normal(10.0, 2.0), normal(7.5, 2.0), 11);
    let snaps = run_accretion(&cfg).unwrap();
    let last = snaps.last().unwrap();
    assert_eq!(last.state.points.len(), 20_100);
    let se = 2.0 / (20_100f64).sqrt();
    let (cx, cy) = last.state.center;
    assert!((cx - 10.0).abs() < 6.0 * se && (cy - 7.5).abs() < 6.0 * se);
}

#[test]
fn exponential_cloud_center_near_one() {
    let e = DistributionSpec::exponential(1.0).unwrap();
    let snaps = run_accretion(&AccretionConfig::new(e, e, 4)).unwrap();
    let (cx, cy) = snaps.last().unwrap().state.center;
    let se = 1.0 / (20_100f64).sqrt();
    assert!((cx - 1.0).abs() < 6.0 * se && (cy - 1.0).abs() < 6.0 * se);
}

#[test]
fn center_error_shrinks_like_inverse_square_root() {
    // root-mean-square center error after 1 and after 16 batches, over 30 seeds
    let cfg = |seed| AccretionConfig {
        initial_count: 100,
        batch_size: 400,
        iterations: 16,
        snapshots: vec![1, 16],
        ..AccretionConfig::new(normal(0.0, 1.0), normal(0.0, 1.0), seed)
    };
    let (mut early, mut late) = (0.0, 0.0);
    for seed in 0..30 {
        let snaps = run_accretion(&cfg(seed)).unwrap();
        let sq = |c: (f64, f64)| c.0 * c.0 + c.1 * c.1;
        early += sq(snaps[0].state.center);
        late += sq(snaps[1].state.center);
    }
    let ratio = (early / late).sqrt();
    let expected = (6500.0f64 / 500.0).sqrt();
    assert!(ratio > expected / 2.0 && ratio < expected * 2.0, "ratio {ratio}");
}

#[test]
fn averaged_drift_decreases() {
    let mut total = vec![0.0; 4];
    for seed in 0..30 {
        let snaps =
            run_accretion(&AccretionConfig::new(normal(10.0, 2.0), normal(7.5, 2.0), seed))
                .unwrap();
        for (t, d) in total.iter_mut().zip(center_stability(&snaps).unwrap()) {
            *t += d;
        }
    }
    assert!(total.windows(2).all(|w| w[0] > w[1]), "{total:?}");
    assert_eq!(total[3], 0.0);
}

#[test]
fn constant_cloud_has_no_drift() {
    let c = DistributionSpec::uniform(1.0, 1.0 + 1e-15).unwrap();
    let snaps = run_accretion(&AccretionConfig::new(c, c, 0)).unwrap();
    for d in center_stability(&snaps).unwrap() {
        assert!(d < 1e-12);
    }
}

#[test]
fn uniform_square_cells_fit_the_multinomial_model() {
    let u = DistributionSpec::uniform(2.0, 25.0).unwrap();
    let cfg = AccretionConfig {
        initial_count: 0,
        batch_size: 100_000,
        iterations: 1,
        snapshots: vec![1],
        bins: 10,
        ..AccretionConfig::new(u, u, 8)
    };
    // an empty starting cloud is rejected
    assert!(run_accretion(&cfg).is_err());
    let cfg = AccretionConfig { initial_count: 1, ..cfg };
    let snap = &run_accretion(&cfg).unwrap()[0];
    let grid =
        DensityGrid::with_bounds(&snap.state.points, (2.0, 25.0), (2.0, 25.0), 10).unwrap();
    let n = snap.state.points.len() as f64;
    let p = 0.01;
    let sd = (n * p * (1.0 - p)).sqrt();
    for &c in grid.counts.iter().flatten() {
        assert!((c as f64 - n * p).abs() < 5.0 * sd, "cell count {c}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn state_invariants(seed in any::<u64>(), init in 1usize..50, batch in 1usize..200, iters in 1usize..8, bins in 1usize..12) {
        let cfg = AccretionConfig {
            initial_count: init,
            batch_size: batch,
            iterations: iters,
            snapshots: (1..=iters).collect(),
            bins,
            ..AccretionConfig::new(normal(-3.0, 5.0), DistributionSpec::poisson(4.0).unwrap(), seed)
        };
        let snaps = run_accretion(&cfg).unwrap();
        prop_assert_eq!(snaps.len(), iters);
        for s in &snaps {
            let pts = &s.state.points;
            prop_assert_eq!(pts.len(), init + s.iteration * batch);
            let n = pts.len() as f64;
            let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
            let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
            prop_assert!((s.state.center.0 - mx).abs() < 1e-9);
            prop_assert!((s.state.center.1 - my).abs() < 1e-9);
            prop_assert_eq!(s.grid.total() as usize, pts.len());
            prop_assert_eq!(s.grid.counts.len(), bins);
            prop_assert!(s.grid.x_edges.windows(2).all(|w| w[0] < w[1]));
            prop_assert!(s.grid.y_edges.windows(2).all(|w| w[0] < w[1]));
        }
        // earlier snapshots are prefixes of later ones
        for w in snaps.windows(2) {
            prop_assert!(w[1].state.points.starts_with(&w[0].state.points));
        }
        prop_assert_eq!(run_accretion(&cfg).unwrap(), snaps);
    }

    #[test]
    fn grid_counts_everything_inside(points in proptest::collection::vec((-50.0f64..50.0, -50.0f64..50.0), 1..300), bins in 1usize..20) {
        let g = density_grid(&points, bins).unwrap();
        prop_assert_eq!(g.total() as usize, points.len());
        let inner = DensityGrid::with_bounds(&points, (-10.0, 10.0), (-10.0, 10.0), bins).unwrap();
        let inside = points
            .iter()
            .filter(|p| (-10.0..=10.0).contains(&p.0) && (-10.0..=10.0).contains(&p.1))
            .count();
        prop_assert_eq!(inner.total() as usize, inside);
    }
}
