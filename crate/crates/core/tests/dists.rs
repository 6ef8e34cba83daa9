use proptest::prelude::*;
use sogas_core::dists::{build_oracle, sample_classical, DiscretizedDistribution, PerformanceDistribution};
use sogas_core::qcore::{Circuit, Gate, QubitLayout, RegisterName, StateVector};
use sogas_core::rng::rng_from_seed;
use sogas_core::Error;

/// Composite Simpson rule with `n` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

fn density(d: &PerformanceDistribution) -> Box<dyn Fn(f64) -> f64> {
    match *d {
        PerformanceDistribution::TruncatedGaussian { center, sd } => {
            Box::new(move |y| (-(y - center) * (y - center) / (2.0 * sd * sd)).exp())
        }
        PerformanceDistribution::Uniform { lo, hi } => Box::new(move |y| if y >= lo && y <= hi { 1.0 } else { 0.0 }),
        PerformanceDistribution::TruncatedExponential { rate } => Box::new(move |y| (-rate * y).exp()),
        PerformanceDistribution::Bernoulli { .. } => unreachable!(),
    }
}

/// Cell masses on 2^k cells by quadrature, normalized.
fn oracle_probs(d: &PerformanceDistribution, k: usize) -> Vec<f64> {
    let f = density(d);
    let n = 1 << k;
    let masses: Vec<f64> =
        (0..n).map(|j| simpson(&f, j as f64 / n as f64, (j + 1) as f64 / n as f64, 2000)).collect();
    let total: f64 = masses.iter().sum();
    masses.iter().map(|m| m / total).collect()
}

fn oracle_true_mean(d: &PerformanceDistribution) -> f64 {
    let f = density(d);
    simpson(|y| y * f(y), 0.0, 1.0, 20_000) / simpson(&f, 0.0, 1.0, 20_000)
}

fn continuous_cases() -> Vec<PerformanceDistribution> {
    vec![
        PerformanceDistribution::TruncatedGaussian { center: 0.62, sd: 0.08 },
        PerformanceDistribution::TruncatedGaussian { center: 0.95, sd: 0.3 },
        PerformanceDistribution::TruncatedExponential { rate: 2.5 },
        PerformanceDistribution::TruncatedExponential { rate: -4.0 },
        PerformanceDistribution::Uniform { lo: 0.0, hi: 1.0 },
    ]
}

#[test]
fn cell_masses_match_quadrature() {
    for d in continuous_cases() {
        for k in 1..=4 {
            let t = d.discretize(k).unwrap();
            for (p, q) in t.probs().iter().zip(oracle_probs(&d, k)) {
                assert!((p - q).abs() < 1e-9, "{d:?} k={k}: {p} vs {q}");
            }
        }
    }
}

#[test]
fn discretized_mean_within_one_cell_of_true_mean() {
    for d in continuous_cases() {
        for k in 1..=6 {
            let t = d.discretize(k).unwrap();
            let truth = oracle_true_mean(&d);
            assert!((t.exact_mean() - truth).abs() <= 2f64.powi(-(k as i32)), "{d:?} k={k}");
        }
    }
}

#[test]
fn wide_gaussian_is_nearly_flat() {
    let t = PerformanceDistribution::TruncatedGaussian { center: 0.5, sd: 5.0 }.discretize(3).unwrap();
    let worst = t.probs().iter().map(|p| (p - 0.125).abs()).fold(0.0, f64::max);
    assert!(worst <= 0.01, "{worst}");
}

#[test]
fn bernoulli_and_uniform_tables() {
    let b = PerformanceDistribution::Bernoulli { p: 0.8 }.discretize(3).unwrap();
    assert_eq!(b.points()[0], 0.0);
    assert_eq!(b.points()[7], 1.0);
    assert!((b.probs()[0] - 0.2).abs() < 1e-15 && (b.probs()[7] - 0.8).abs() < 1e-15);
    assert!((b.exact_mean() - 0.8).abs() < 1e-12);

    let u = PerformanceDistribution::Uniform { lo: 0.0, hi: 1.0 }.discretize(3).unwrap();
    for (j, (&y, &p)) in u.points().iter().zip(u.probs()).enumerate() {
        assert!((y - (2 * j + 1) as f64 / 16.0).abs() < 1e-15);
        assert!((p - 0.125).abs() < 1e-12);
    }
    assert!((u.exact_mean() - 0.5).abs() < 1e-12);
}

#[test]
fn invalid_distributions_rejected() {
    let bad = [
        PerformanceDistribution::Bernoulli { p: 1.2 },
        PerformanceDistribution::TruncatedGaussian { center: 0.5, sd: 0.0 },
        PerformanceDistribution::Uniform { lo: 1.5, hi: 2.0 },
        PerformanceDistribution::Uniform { lo: 0.6, hi: 0.2 },
    ];
    for d in bad {
        assert!(matches!(d.discretize(3), Err(Error::InvalidDistribution(_))), "{d:?}");
    }
    assert!(matches!(
        PerformanceDistribution::TruncatedGaussian { center: 40.0, sd: 0.01 }.discretize(3),
        Err(Error::InvalidDistribution(_))
    ));
    assert!(PerformanceDistribution::Bernoulli { p: 0.5 }.discretize(7).is_err());
    assert!(DiscretizedDistribution::from_table(vec![0.0, 1.0, 0.5], vec![0.3, 0.3, 0.4]).is_err());
    assert!(DiscretizedDistribution::from_table(vec![0.0, 1.0], vec![0.3, 0.3]).is_err());
}

#[test]
fn classical_sampling_means() {
    let mut rng = rng_from_seed(21);
    let b = PerformanceDistribution::Bernoulli { p: 0.8 }.discretize(1).unwrap();
    let m: f64 = (0..50_000).map(|_| sample_classical(&b, &mut rng)).sum::<f64>() / 50_000.0;
    assert!((0.79..=0.81).contains(&m), "{m}");

    let u = PerformanceDistribution::Uniform { lo: 0.0, hi: 1.0 }.discretize(3).unwrap();
    let m: f64 = (0..50_000).map(|_| sample_classical(&u, &mut rng)).sum::<f64>() / 50_000.0;
    assert!((0.49..=0.51).contains(&m), "{m}");

    let one = DiscretizedDistribution::point_mass_one();
    assert!((0..1000).all(|_| sample_classical(&one, &mut rng) == 1.0));
}

#[test]
fn multinomial_counts_match_table() {
    let t = PerformanceDistribution::TruncatedGaussian { center: 0.6, sd: 0.2 }.discretize(3).unwrap();
    let n = 200_000u64;
    let counts = t.sample_counts(n, &mut rng_from_seed(5));
    assert_eq!(counts.iter().sum::<u64>(), n);
    for (c, p) in counts.iter().zip(t.probs()) {
        let sd = (n as f64 * p * (1.0 - p)).sqrt();
        assert!((*c as f64 - n as f64 * p).abs() <= 5.0 * sd + 1.0);
    }
}

#[test]
fn oracle_objective_probability_is_exact_mean() {
    let cases = [
        PerformanceDistribution::Bernoulli { p: 0.8 }.discretize(1).unwrap(),
        PerformanceDistribution::Uniform { lo: 0.0, hi: 1.0 }.discretize(3).unwrap(),
        DiscretizedDistribution::point_mass_one(),
        PerformanceDistribution::TruncatedExponential { rate: -2.5 }.discretize(3).unwrap(),
    ];
    for t in cases {
        let o = build_oracle(&t).unwrap();
        let s = o.prepared_state().unwrap();
        let p = s.subspace_probability(RegisterName::Y, |v| v == 1).unwrap();
        assert!((p - t.exact_mean()).abs() < 1e-10);
        let noise = s.register_distribution(RegisterName::Xi).unwrap();
        for (a, b) in noise.iter().zip(t.probs()) {
            assert!((a - b).abs() < 1e-10);
        }
    }
}

#[test]
fn oracle_placed_inside_larger_layout() {
    let t = PerformanceDistribution::TruncatedGaussian { center: 0.7, sd: 0.1 }.discretize(2).unwrap();
    let o = build_oracle(&t).unwrap();
    let l = QubitLayout::new(&[(RegisterName::Anc, 1), (RegisterName::Xi, 2), (RegisterName::Y, 1)]).unwrap();
    let mut c = Circuit::new();
    c.push(Gate::X(0));
    c.extend(o.prep_on(&[1, 2], 3).unwrap());
    let mut s = StateVector::zero(l);
    c.apply(&mut s).unwrap();
    assert!((s.subspace_probability(RegisterName::Y, |v| v == 1).unwrap() - t.exact_mean()).abs() < 1e-10);
}

#[test]
fn measured_objective_frequency_within_four_sigma() {
    let families = [
        PerformanceDistribution::Bernoulli { p: 0.3 },
        PerformanceDistribution::TruncatedGaussian { center: 0.55, sd: 0.1 },
        PerformanceDistribution::Uniform { lo: 0.2, hi: 0.9 },
        PerformanceDistribution::TruncatedExponential { rate: 2.5 },
    ];
    let mut rng = rng_from_seed(8);
    for d in families {
        for k in 1..=3 {
            let t = d.discretize(k).unwrap();
            let o = build_oracle(&t).unwrap();
            let s = o.prepared_state().unwrap();
            let y = o.objective_qubit();
            let n = 20_000;
            let hits = (0..n).filter(|_| (s.sample_index(&mut rng) >> y) & 1 == 1).count() as f64;
            let p = t.exact_mean();
            let sd = (p * (1.0 - p) / n as f64).sqrt();
            assert!((hits / n as f64 - p).abs() <= 4.0 * sd + 1e-12, "{d:?} k={k}");
        }
    }
}

proptest! {
    #[test]
    fn tables_are_normalized(center in -0.5f64..1.5, sd in 0.05f64..2.0, rate in -30.0f64..30.0, k in 1usize..=6) {
        for d in [
            PerformanceDistribution::TruncatedGaussian { center, sd },
            PerformanceDistribution::TruncatedExponential { rate },
        ] {
            if let Ok(t) = d.discretize(k) {
                prop_assert!((t.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
                prop_assert!(t.probs().iter().all(|&p| p >= 0.0));
                prop_assert!(t.points().iter().all(|&y| (0.0..=1.0).contains(&y)));
                let inner: f64 = t.points().iter().zip(t.probs()).map(|(y, p)| y * p).sum();
                prop_assert!((inner - t.exact_mean()).abs() < 1e-12);
            }
        }
    }
}
