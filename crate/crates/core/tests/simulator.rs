use parisian_hybrid::simulator::{
    self, HistogramSpec, McEstimate, PathOutcome, SimConfig, T0Request,
};
use parisian_hybrid::{HybridScheme, LevyModel};

const N: u64 = 200_000;
const PASS_Z: f64 = 3.29;

fn bm() -> LevyModel {
    LevyModel::brownian(1.0, 1.0).unwrap()
}

fn cl() -> LevyModel {
    LevyModel::cramer_lundberg(2.0, 1.0, 1.0).unwrap()
}

fn cfg(m: LevyModel, x0: f64) -> SimConfig {
    SimConfig::new(m, x0).paths(N).seed(11)
}

fn agrees(e: &McEstimate, value: f64) -> bool {
    (e.mean - value).abs() <= PASS_Z * e.std_error
}

#[test]
fn same_seed_same_estimate() {
    for m in [bm(), cl()] {
        let c = cfg(m, 0.5).upper(2.0).paths(20_000);
        let a = simulator::simulate_two_sided(&c, 0.3).unwrap();
        let b = simulator::simulate_two_sided(&c, 0.3).unwrap();
        assert_eq!(a, b);
        let other = simulator::simulate_two_sided(&c.seed(12), 0.3).unwrap();
        assert_ne!(a.exit_laplace.mean, other.exit_laplace.mean);
    }
}

#[test]
fn standard_error_halves_with_four_times_the_paths() {
    for m in [bm(), cl()] {
        let small = simulator::simulate_hybrid(&cfg(m, 0.0).paths(50_000), 0.0).unwrap().ruin;
        let large = simulator::simulate_hybrid(&cfg(m, 0.0).paths(200_000), 0.0).unwrap().ruin;
        let ratio = large.std_error / small.std_error;
        assert!((ratio - 0.5).abs() <= 0.1, "{ratio}");
    }
}

#[test]
fn recovery_barrier_shifts_space() {
    for m in [bm(), cl()] {
        let base = simulator::simulate_hybrid(&cfg(m, 0.0), 0.0).unwrap().ruin;
        let shifted = simulator::simulate_hybrid(&cfg(m, 1.0).recovery(1.0).seed(99), 0.0).unwrap().ruin;
        let se = base.std_error.hypot(shifted.std_error);
        assert!((base.mean - shifted.mean).abs() <= 3.0 * se);
    }
}

#[test]
fn negative_drift_is_ruined() {
    for m in [LevyModel::brownian(-0.5, 1.0).unwrap(), LevyModel::cramer_lundberg(0.5, 1.0, 1.0).unwrap()] {
        let c = cfg(m, 1.0).paths(20_000);
        let e = simulator::simulate_hybrid(&c, 0.0).unwrap().ruin;
        assert_eq!(e.mean + e.truncated_fraction, 1.0);
        let k = simulator::simulate_classical_parisian(&c).unwrap();
        assert_eq!(k.mean + k.truncated_fraction, 1.0);
    }
}

#[test]
fn start_at_the_upper_barrier() {
    for m in [bm(), cl()] {
        let c = cfg(m, 2.0).upper(2.0).paths(1000);
        let e = simulator::simulate_two_sided(&c, 0.5).unwrap();
        assert_eq!(e.exit.mean, 1.0);
        assert_eq!(e.exit_laplace.mean, 1.0);
        assert_eq!(e.ruin_laplace.mean, 0.0);
        let t = simulator::simulate_t0_functionals(&c, &T0Request { p: 1.0, ..T0Request::new(0.5) }).unwrap();
        for f in [&t.ruin_laplace, &t.w_functional, &t.lambda_functional, &t.lambda_q_functional] {
            assert_eq!(f.mean, 0.0);
        }
    }
}

#[test]
fn truncation_is_rare_for_positive_drift() {
    for m in [bm(), cl()] {
        let e = simulator::simulate_hybrid(&cfg(m, 0.0), 0.5).unwrap();
        assert!(e.ruin.truncated_fraction < 1e-3);
        let k = simulator::simulate_classical_parisian(&cfg(m, 1.0)).unwrap();
        assert!(k.truncated_fraction < 1e-3);
    }
}

#[test]
fn path_outcomes_match_the_estimate() {
    let c = cfg(cl(), 0.0).paths(20_000);
    let paths = simulator::hybrid_paths(&c).unwrap();
    let ruined = paths.iter().filter(|p| matches!(p, PathOutcome::Ruin { .. })).count();
    let e = simulator::simulate_hybrid(&c, 0.0).unwrap().ruin;
    assert_eq!(ruined as f64 / paths.len() as f64, e.mean);
}

#[test]
fn formula_pairings() {
    for m in [bm(), cl()] {
        let h = HybridScheme::new(m, 1.0, 1.0).unwrap();
        let two = simulator::simulate_two_sided(&cfg(m, 1.0).upper(2.0), 0.0).unwrap();
        assert!(agrees(&two.ruin_laplace, h.ruin_before_exit_laplace(0.0, 1.0, 2.0).unwrap()));
        assert!(agrees(&two.exit, h.exit_before_ruin_laplace(0.0, 1.0, 2.0).unwrap()));

        let k = simulator::simulate_classical_parisian(&cfg(m, 1.0)).unwrap();
        assert!(agrees(&k, h.classical_parisian_prob(1.0).unwrap()));

        let req = T0Request { p: 1.0, ..T0Request::new(0.5) };
        let t = simulator::simulate_t0_functionals(&cfg(m, 1.0).upper(2.0), &req).unwrap();
        assert!(agrees(&t.w_functional, h.lemma_w_at_t0(1.0, 0.5, 1.0, Some(2.0), 1.0).unwrap()));
        let (l1, l2) = h.lemma_lambda_at_t0(0.5, 1.0, 2.0).unwrap();
        assert!(agrees(&t.lambda_functional, l1));
        assert!(agrees(&t.lambda_q_functional, l2));
    }
}

#[test]
fn histogram_integrates_to_the_mass() {
    for m in [bm(), cl()] {
        let req = T0Request {
            histogram: Some(HistogramSpec { lower: -30.0, bins: 60 }),
            ..T0Request::new(0.0)
        };
        let c = cfg(m, 1.0).upper(2.0);
        let t = simulator::simulate_t0_functionals(&c, &req).unwrap();
        let hist = t.histogram.unwrap();
        let width = 0.5;
        let inside: f64 = hist.density.iter().map(|d| d.mean * width).sum();
        assert!((inside - t.ruin_laplace.mean).abs() < 1e-12);

        let h = HybridScheme::new(m, 1.0, 1.0).unwrap();
        for (k, d) in hist.density.iter().enumerate() {
            let (lo, hi) = (hist.edges[k], hist.edges[k + 1]);
            let mid = 0.5 * (lo + hi);
            // Simpson's rule over the bin, averaged.
            let f = |y: f64| h.gerber_shiu_density(0.0, 1.0, Some(2.0), y).unwrap();
            let avg = (f(lo) + 4.0 * f(mid) + f(hi.min(-1e-12))) / 6.0;
            // A few paths in a bin is the resolution floor for sparsely hit bins.
            let floor = 4.0 / (N as f64 * width);
            assert!((d.mean - avg).abs() <= 4.0 * d.std_error + 1e-3 * avg + floor, "bin {k}: {} vs {avg}", d.mean);
        }
    }
}

#[test]
fn classical_parisian_decreases_in_grace() {
    let v: Vec<f64> = [0.5, 1.0, 5.0, 20.0]
        .iter()
        .map(|&r| simulator::simulate_classical_parisian(&cfg(bm(), 1.0).grace(r)).unwrap().mean)
        .collect();
    assert!(v.windows(2).all(|w| w[1] < w[0]), "{v:?}");
}

#[test]
fn invalid_configurations() {
    assert!(simulator::simulate_two_sided(&cfg(bm(), 3.0).upper(2.0), 0.0).is_err());
    assert!(simulator::simulate_hybrid(&cfg(bm(), 0.0).paths(0), 0.0).is_err());
    assert!(simulator::simulate_hybrid(&cfg(bm(), 0.0).grace(0.0), 0.0).is_err());
    assert!(simulator::simulate_hybrid(&cfg(bm(), 0.0).streams(0), 0.0).is_err());
    assert!(simulator::simulate_classical_exit(&cfg(bm(), 1.0).upper(2.0), 0.0, 1.0, 0.0, 1.0).is_err());
}
