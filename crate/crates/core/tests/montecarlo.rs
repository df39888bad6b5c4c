//! Path simulation against closed-form laws: the Cauchy CDF, characteristic
//! functions, Gaussian moments and the explicit Euler recursion.

use std::f64::consts::PI;

use levyfp_core::montecarlo::{
    binned_l1_distance, binned_masses, cms_sample, cms_transform, empirical_density, ks_statistic,
    simulate_terminal, PathConfig,
};
use levyfp_core::{AuxCondition, DensityField, DriftKind, Grid, LevyParams, StabilityIndex};
use rand::SeedableRng;

fn cfg(alpha: f64, eps: f64, d: f64) -> PathConfig {
    PathConfig {
        params: LevyParams::new(alpha, eps, d).unwrap(),
        drift: DriftKind::Zero,
        x0: 0.0,
        t_end: 1.0,
        dt: 1.0,
        n_paths: 100_000,
        seed: 2024,
        guard_radius: 1e12,
    }
}

/// One unit step with unit noise: the terminal law is standard stable.
fn standard_samples(alpha: f64, n: usize) -> Vec<f64> {
    simulate_terminal(&PathConfig {
        n_paths: n,
        ..cfg(alpha, 1.0, 0.0)
    })
    .unwrap()
    .samples
}

fn median(mut s: Vec<f64>) -> f64 {
    s.sort_by(f64::total_cmp);
    0.5 * (s[s.len() / 2 - 1] + s[s.len() / 2])
}

fn mean_cos(s: &[f64], xi: f64) -> f64 {
    s.iter().map(|x| (xi * x).cos()).sum::<f64>() / s.len() as f64
}

fn cauchy(x: f64) -> f64 {
    1.0 / (PI * (1.0 + x * x))
}

#[test]
fn unit_cauchy_passes_ks() {
    let s = standard_samples(1.0, 100_000);
    let d = ks_statistic(&s, |x| 0.5 + x.atan() / PI);
    assert!(d < 0.01, "KS distance {d}");
}

#[test]
fn symmetric_laws_have_zero_median() {
    for alpha in [0.5, 1.5] {
        let m = median(standard_samples(alpha, 100_000));
        assert!(m.abs() < 0.02, "alpha = {alpha}: median {m}");
    }
}

#[test]
fn characteristic_function_of_stable_samples() {
    for alpha in [0.5, 1.2, 1.8] {
        let s = standard_samples(alpha, 200_000);
        for xi in [0.3, 1.0, 2.0] {
            let (got, want) = (mean_cos(&s, xi), (-f64::powf(xi, alpha)).exp());
            assert!(
                (got - want).abs() < 0.01,
                "alpha {alpha}, xi {xi}: {got} vs {want}"
            );
        }
    }
}

#[test]
fn many_steps_compose_to_the_levy_exponent() {
    // exp(-eps t |xi|^alpha - d t xi^2 / 2)
    let c = PathConfig {
        t_end: 0.8,
        dt: 0.05,
        n_paths: 100_000,
        ..cfg(1.3, 0.7, 0.5)
    };
    let s = simulate_terminal(&c).unwrap().samples;
    for xi in [0.5, 1.0, 1.5] {
        let want = (-0.7 * 0.8 * f64::powf(xi, 1.3) - 0.5 * 0.8 * xi * xi / 2.0).exp();
        let got = mean_cos(&s, xi);
        assert!((got - want).abs() < 0.01, "xi {xi}: {got} vs {want}");
    }
}

#[test]
fn gaussian_only_variance() {
    let c = PathConfig {
        t_end: 2.0,
        dt: 0.1,
        ..cfg(1.0, 0.0, 0.5)
    };
    let s = simulate_terminal(&c).unwrap().samples;
    let n = s.len() as f64;
    let mean = s.iter().sum::<f64>() / n;
    let var = s.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    assert!(mean.abs() < 0.01, "{mean}");
    assert!((var - 1.0).abs() < 0.02, "{var}");
}

#[test]
fn noiseless_ou_follows_euler_recursion() {
    let c = PathConfig {
        drift: DriftKind::OrnsteinUhlenbeck,
        x0: 1.0,
        dt: 1e-3,
        n_paths: 4,
        ..cfg(1.0, 0.0, 0.0)
    };
    let e = simulate_terminal(&c).unwrap();
    let euler = (1.0f64 - 1e-3).powi(1000);
    for x in &e.samples {
        assert!((x - euler).abs() < 1e-12, "{x}");
        assert!((x - (-1.0f64).exp()).abs() < 5e-4);
    }
    assert_eq!(e.n_exited(), 0);
}

#[test]
fn last_step_lands_on_t_end() {
    // 0.25 = 2 * 0.1 + 0.05
    let c = PathConfig {
        drift: DriftKind::OrnsteinUhlenbeck,
        x0: 1.0,
        t_end: 0.25,
        dt: 0.1,
        n_paths: 1,
        ..cfg(1.0, 0.0, 0.0)
    };
    let x = simulate_terminal(&c).unwrap().samples[0];
    assert!((x - 0.9 * 0.9 * 0.95).abs() < 1e-15, "{x}");
}

#[test]
fn ensembles_are_reproducible_and_prefix_stable() {
    let c = PathConfig {
        t_end: 0.5,
        dt: 0.01,
        n_paths: 500,
        ..cfg(1.4, 1.0, 0.1)
    };
    let a = simulate_terminal(&c).unwrap();
    assert_eq!(a, simulate_terminal(&c).unwrap());
    let short = simulate_terminal(&PathConfig { n_paths: 50, ..c }).unwrap();
    assert_eq!(short.samples[..], a.samples[..50]);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let serial = pool.install(|| simulate_terminal(&c).unwrap());
    assert_eq!(serial.samples, a.samples);
    assert_ne!(
        simulate_terminal(&PathConfig { seed: 1, ..c })
            .unwrap()
            .samples,
        a.samples
    );
}

#[test]
fn guard_radius_flags_escapes() {
    let c = PathConfig {
        dt: 0.1,
        n_paths: 2000,
        guard_radius: 2.0,
        ..cfg(0.5, 1.0, 0.0)
    };
    let e = simulate_terminal(&c).unwrap();
    let n_out = e.n_exited();
    assert!(n_out > 100 && n_out < 2000, "{n_out}");
    for (x, out) in e.samples.iter().zip(&e.exited) {
        assert_eq!(*out, x.abs() > 2.0);
    }
    assert_eq!(e.retained().count(), 2000 - n_out);
}

#[test]
fn rejects_bad_configs() {
    let c = cfg(1.0, 1.0, 0.0);
    assert!(simulate_terminal(&PathConfig { t_end: 0.0, ..c }).is_err());
    assert!(simulate_terminal(&PathConfig { dt: -1.0, ..c }).is_err());
    assert!(simulate_terminal(&PathConfig { dt: f64::NAN, ..c }).is_err());
    assert!(simulate_terminal(&PathConfig {
        guard_radius: 0.0,
        ..c
    })
    .is_err());
    assert!(simulate_terminal(&PathConfig {
        drift: DriftKind::Tabulated,
        ..c
    })
    .is_err());
}

#[test]
fn cms_transform_special_cases() {
    assert_eq!(cms_transform(1.0, 0.3, 5.0), 0.3f64.tan());
    // alpha = 2 reduces to 2 sqrt(w) sin(u)
    let (u, w) = (0.4, 1.7);
    assert!((cms_transform(2.0, u, w) - 2.0 * w.sqrt() * u.sin()).abs() < 1e-12);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
    let a = StabilityIndex::new(0.1).unwrap();
    assert!((0..10_000).all(|_| cms_sample(a, &mut rng).is_finite()));
}

fn cauchy_field(half_width: f64, h: f64) -> DensityField {
    let g = Grid::new(AuxCondition::Natural { half_width }, h).unwrap();
    let v = g.nodes().into_iter().map(cauchy).collect();
    DensityField::new(g, v, 1.0).unwrap()
}

#[test]
fn binned_masses_match_cauchy() {
    let ens = simulate_terminal(&cfg(1.0, 1.0, 0.0)).unwrap();
    let p = cauchy_field(20.0, 0.01);
    let bins = binned_masses(&ens, &p, -10.0, 10.0, 0.5).unwrap();
    assert_eq!(bins.len(), 40);
    assert_eq!((bins[0].lo, bins[39].hi), (-10.0, 10.0));
    let inside = 2.0 * 10.0f64.atan() / PI;
    let solver: f64 = bins.iter().map(|b| b.solver).sum();
    assert!((solver - inside).abs() < 1e-5, "{solver}");
    let empirical: f64 = bins.iter().map(|b| b.empirical).sum();
    assert!((empirical - inside).abs() < 0.005, "{empirical}");
    for b in &bins {
        let exact = ((b.hi).atan() - (b.lo).atan()) / PI;
        assert!((b.solver - exact).abs() < 1e-5);
    }
    let l1 = binned_l1_distance(&ens, &p, -10.0, 10.0, 0.5).unwrap();
    assert!(l1 < 0.02, "{l1}");
}

#[test]
fn binned_masses_validate_layout() {
    let ens = simulate_terminal(&PathConfig {
        n_paths: 10,
        ..cfg(1.0, 1.0, 0.0)
    })
    .unwrap();
    let p = cauchy_field(5.0, 0.1);
    assert!(
        binned_masses(&ens, &p, -5.0, 5.0, 0.25).is_err(),
        "width not a multiple of h"
    );
    assert!(
        binned_masses(&ens, &p, -4.05, 4.95, 0.5).is_err(),
        "edge off the grid"
    );
    assert!(
        binned_masses(&ens, &p, -6.0, 6.0, 0.5).is_err(),
        "beyond the grid"
    );
    assert!(
        binned_masses(&ens, &p, -1.0, 1.0, 0.3).is_err(),
        "width does not tile"
    );
    assert!(binned_masses(&ens, &p, 1.0, -1.0, 0.5).is_err());
    assert!(binned_masses(&ens, &p, -4.5, 4.5, 0.5).is_ok());
}

#[test]
fn empirical_density_approximates_cauchy() {
    let ens = simulate_terminal(&cfg(1.0, 1.0, 0.0)).unwrap();
    let g = Grid::new(AuxCondition::Natural { half_width: 10.0 }, 0.1).unwrap();
    let p = empirical_density(&ens, &g).unwrap();
    let mass: f64 = p.values().iter().sum::<f64>() * g.h();
    let inside = 2.0 * 10.05f64.atan() / PI;
    assert!((mass - inside).abs() < 0.005, "{mass}");
    let near: f64 = g
        .nodes()
        .iter()
        .zip(p.values())
        .filter(|(x, _)| x.abs() <= 2.0)
        .map(|(x, v)| (v - cauchy(*x)).abs())
        .fold(0.0, f64::max);
    assert!(near < 0.03, "{near}");
}
