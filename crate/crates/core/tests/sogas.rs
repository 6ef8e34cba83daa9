use proptest::prelude::*;
use sogas_core::dists::{build_oracle, DiscretizedDistribution, PerformanceDistribution};
use sogas_core::qsub::QueryLedger;
use sogas_core::rng::{derive_seed, rng_from_seed};
use sogas_core::sogas::{
    coherent_flag_demo, final_flag_params, flag_oracle, iteration_bound, optimal_region, region_search, sogas_run,
    Branch, FlagParams, ProblemInstance, Region, RegionClass, SogasConfig,
};
use sogas_core::Error;

fn bernoulli(p: f64) -> DiscretizedDistribution {
    PerformanceDistribution::Bernoulli { p }.discretize(1).unwrap()
}

fn instance_from_means(means: &[f64], eps: f64, delta: f64) -> ProblemInstance {
    let sols = means.iter().enumerate().map(|(i, &p)| (format!("s{i}"), bernoulli(p))).collect();
    ProblemInstance::new(sols, eps, delta).unwrap()
}

/// Means evenly spaced over [lo, hi].
fn spaced(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn binomial_slack(p: f64, n: usize) -> f64 {
    3.0 * (p * (1.0 - p) / n as f64).sqrt()
}

#[test]
fn first_step_branches_from_unit_interval() {
    for (r, want) in [(1.0, Region { a: 0.5, b: 1.0 }), (0.0, Region { a: 0.0, b: 0.625 })] {
        let mut first = None;
        region_search(0.1, 0.05, 10, |t, p, _| {
            if t == 0 {
                assert_eq!((p.eta, p.ell, p.m), (0.25, 0.5, 3));
                first = Some(r);
                Ok(r)
            } else {
                Ok(0.0)
            }
        })
        .map(|out| {
            let s = out.trace[0];
            assert!((s.after.a - want.a).abs() < 1e-15 && (s.after.b - want.b).abs() < 1e-15, "{}", s.after);
            assert!(s.after.width() <= 11.0 / 16.0);
        })
        .unwrap();
        assert!(first.is_some());
    }
}

#[test]
fn tie_at_threshold_takes_lower_branch() {
    let threshold = 3.0 / 22.0;
    let out = region_search(0.1, 0.05, 10, |_, _, _| Ok(threshold)).unwrap();
    assert!(out.trace.iter().all(|s| s.branch == Branch::Lower));
}

#[test]
fn only_auxiliary_flagged_sends_search_down() {
    let inst = instance_from_means(&[0.1; 10], 0.1, 0.05);
    let cfg = SogasConfig::contract(1.0);
    let mut rng = rng_from_seed(17);
    let out = optimal_region(&inst, 0.1, 0.025, &cfg, &mut QueryLedger::new(), &mut rng).unwrap();
    let s = out.trace[0];
    assert!(s.r < 3.0 / 22.0, "{}", s.r);
    assert_eq!(s.branch, Branch::Lower);
}

#[test]
fn iteration_bound_for_tenth() {
    assert_eq!(iteration_bound(0.1), 8);
}

#[test]
fn region_containment_and_pac_on_contract_backend() {
    let inst = instance_from_means(&spaced(8, 0.3, 0.9), 0.1, 0.05);
    let best = inst.best_mean();
    let cfg = SogasConfig::contract(1.0);
    let reps = 200;
    let (mut contained, mut correct) = (0, 0);
    for i in 0..reps {
        let mut rng = rng_from_seed(derive_seed(5, "sogas/contract", i));
        let run = sogas_run(&inst, &cfg, &mut rng).unwrap();
        assert!(run.final_region.width() < 0.05);
        assert!(run.region_trace.len() as u32 <= iteration_bound(0.1));
        for s in &run.region_trace {
            assert!(s.after.width() <= s.before.width() * 11.0 / 16.0 + 1e-15);
        }
        contained += run.final_region.contains(best) as usize;
        correct += run.correct as usize;
    }
    let n = reps as usize;
    assert!(contained as f64 / n as f64 >= 0.975 - binomial_slack(0.975, n), "{contained}");
    assert!(correct as f64 / n as f64 >= 0.95 - binomial_slack(0.95, n), "{correct}");
}

#[test]
fn hybrid_runs_are_pac() {
    let inst = instance_from_means(&spaced(5, 0.4, 0.85), 0.1, 0.05);
    let cfg = SogasConfig::statevector_hybrid();
    let reps = 40;
    let correct = (0..reps)
        .filter(|&i| {
            let mut rng = rng_from_seed(derive_seed(6, "sogas/hybrid", i));
            sogas_run(&inst, &cfg, &mut rng).unwrap().correct
        })
        .count();
    assert!(correct as f64 >= 0.95 * reps as f64 - 3.0 * (reps as f64 * 0.05 * 0.95).sqrt(), "{correct}");
}

#[test]
fn deterministic_two_solution_instance() {
    let zero = PerformanceDistribution::Bernoulli { p: 0.0 }.discretize(1).unwrap();
    let inst = ProblemInstance::new(
        vec![("low".into(), zero), ("high".into(), DiscretizedDistribution::point_mass_one())],
        0.1,
        0.05,
    )
    .unwrap();
    let cfg = SogasConfig::contract(1.0);
    let hits = (0..200u64)
        .filter(|&i| {
            let mut rng = rng_from_seed(derive_seed(7, "two", i));
            sogas_run(&inst, &cfg, &mut rng).unwrap().selected == Some(1)
        })
        .count();
    assert!(hits >= 190, "{hits}");
}

#[test]
fn identical_means_are_always_correct() {
    let inst = instance_from_means(&[0.6; 6], 0.1, 0.05);
    let cfg = SogasConfig::contract(1.0);
    for i in 0..50 {
        let run = sogas_run(&inst, &cfg, &mut rng_from_seed(i)).unwrap();
        assert!(run.correct && run.selected.is_some());
    }
}

#[test]
fn flagged_set_is_eps_optimal_when_region_is_good() {
    let inst = instance_from_means(&spaced(12, 0.5, 0.95), 0.1, 0.05);
    let best = inst.best_mean();
    let cfg = SogasConfig::contract(1.0);
    for i in 0..100 {
        let run = sogas_run(&inst, &cfg, &mut rng_from_seed(derive_seed(8, "flagset", i))).unwrap();
        if !(run.final_region.contains(best) && run.final_region.width() < 0.05) {
            continue;
        }
        let p = final_flag_params(run.final_region, 0.1, 0.05, inst.len()).unwrap();
        for m in inst.means() {
            if m >= p.lower_threshold() {
                assert!(m > best - 0.1, "mean {m} above {} but best {best}", p.lower_threshold());
            }
        }
    }
}

#[test]
fn flag_examples() {
    let p = FlagParams::new(0.3, 0.1, 0.01, 4).unwrap();
    assert_eq!(p.m, 5);
    assert!((p.lower_threshold() - (0.4 - 0.0625)).abs() < 1e-15);
    assert!((p.upper_threshold() - (0.4 - 0.03125)).abs() < 1e-15);
    assert!((p.midpoint() - (0.4 - 0.046875)).abs() < 1e-15);

    let a = FlagParams::new(0.5, 0.25, 0.00125, 11).unwrap();
    assert!((a.alpha - 0.00125f64.powi(2) / 5324.0).abs() < 1e-22);
    assert!((a.alpha - 2.935e-10).abs() < 1e-12);

    let aux = build_oracle(&DiscretizedDistribution::point_mass_one()).unwrap();
    let low = build_oracle(&bernoulli(0.05)).unwrap();
    let cfg = SogasConfig::contract(1.0);
    let params = FlagParams::new(0.5, 0.25, 0.01, 2).unwrap();
    for seed in 0..200 {
        let f = flag_oracle(&[&low, &aux], &params, &cfg, &mut QueryLedger::new(), &mut rng_from_seed(seed)).unwrap();
        assert!(f.flags[1]);
        assert_eq!(f.classes, vec![RegionClass::S2, RegionClass::S1]);
        assert_eq!(f.mislabeled(), 0);
    }
}

#[test]
fn flag_oracle_hybrid_never_mislabels_clear_cases() {
    let oracles: Vec<_> = [0.1, 0.2, 0.9, 1.0].iter().map(|&p| build_oracle(&bernoulli(p)).unwrap()).collect();
    let refs: Vec<_> = oracles.iter().collect();
    let params = FlagParams::new(0.5, 0.25, 0.05, 4).unwrap();
    let cfg = SogasConfig::statevector_hybrid();
    for seed in 0..20 {
        let mut l = QueryLedger::new();
        let f = flag_oracle(&refs, &params, &cfg, &mut l, &mut rng_from_seed(seed)).unwrap();
        assert_eq!(f.flags, vec![false, false, true, true]);
        assert_eq!(f.queries, l.total());
    }
}

#[test]
fn coherent_mode_rejects_statevector_backend() {
    let mut cfg = SogasConfig::statevector_hybrid();
    cfg.flag_mode = sogas_core::sogas::FlagMode::Coherent;
    assert!(matches!(cfg.validate(), Err(Error::InvalidParameter(_))));
}

fn demo(means: &[f64], kappa: f64) -> sogas_core::sogas::CoherentFlagDemo {
    let oracles: Vec<_> = means.iter().map(|&p| build_oracle(&bernoulli(p)).unwrap()).collect();
    let refs: Vec<_> = oracles.iter().collect();
    let params = FlagParams::new(0.5, 0.25, kappa, means.len()).unwrap();
    coherent_flag_demo(&refs, &params).unwrap()
}

#[test]
fn coherent_demo_examples() {
    let kappa = 0.05;
    let d = demo(&[1.0, 0.0], kappa);
    assert!((d.p_label - 0.5).abs() <= 2.0 * kappa / 2.0, "{}", d.p_label);
    assert!(d.within_bound());

    let d = demo(&[1.0, 1.0], kappa);
    assert!((d.p_label - 1.0).abs() <= 2.0 * kappa / 2.0);
    assert!(d.within_bound());

    let d = demo(&[0.0, 0.0, 1.0, 1.0], kappa);
    assert!((d.p_label - 0.5).abs() <= 2.0 * kappa / 4.0, "{}", d.p_label);
    assert!(d.within_bound());
    assert!((d.state.norm_sqr() - 1.0).abs() < 1e-10);
}

#[test]
fn coherent_demo_size_limits() {
    let oracles: Vec<_> = (0..5).map(|_| build_oracle(&bernoulli(0.5)).unwrap()).collect();
    let refs: Vec<_> = oracles.iter().collect();
    let params = FlagParams::new(0.5, 0.25, 0.05, 5).unwrap();
    assert!(coherent_flag_demo(&refs, &params).is_err());
}

#[test]
fn instance_validation() {
    assert!(ProblemInstance::new(vec![("a".into(), bernoulli(0.5))], 0.1, 0.05).is_err());
    let two = || vec![("a".into(), bernoulli(0.5)), ("b".into(), bernoulli(0.6))];
    assert!(ProblemInstance::new(two(), 0.0, 0.05).is_err());
    assert!(ProblemInstance::new(two(), 0.1, 1.0).is_err());
    let inst = ProblemInstance::new(two(), 0.1, 0.05).unwrap();
    assert!(inst.is_eps_optimal(0) && inst.is_eps_optimal(1));
    assert!(!inst.with_eps(0.05).unwrap().is_eps_optimal(0));
}

/// Least-squares slope of ln y on ln x.
fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

#[test]
fn hybrid_queries_grow_about_linearly_in_size() {
    let sizes = [4usize, 8, 16, 32, 64];
    let cfg = SogasConfig::statevector_hybrid();
    let reps = 4;
    let mut ys = Vec::new();
    for &n in &sizes {
        let inst = instance_from_means(&spaced(n, 0.78, 0.85), 0.1, 0.05);
        let total: u64 = (0..reps)
            .map(|i| sogas_run(&inst, &cfg, &mut rng_from_seed(derive_seed(9, "hybrid-size", i))).unwrap().total_queries())
            .sum();
        ys.push(total as f64 / reps as f64);
    }
    let xs: Vec<f64> = sizes.iter().map(|&n| n as f64).collect();
    let s = slope(&xs, &ys);
    assert!((0.8..=1.2).contains(&s), "slope {s}, means {ys:?}");
}

proptest! {
    #[test]
    fn every_step_shrinks(rs in prop::collection::vec(0.0f64..1.0, 32), n in 2usize..200, eps in 0.01f64..0.9) {
        let out = region_search(eps, 0.05, n, |t, _, _| Ok(rs[t as usize % rs.len()])).unwrap();
        prop_assert!(out.region.width() < eps / 2.0);
        prop_assert!(out.trace.len() as u32 <= iteration_bound(eps));
        for s in &out.trace {
            prop_assert!(s.after.width() <= s.before.width() * 11.0 / 16.0 * (1.0 + 1e-12));
            prop_assert!(s.after.a >= s.before.a - 1e-15 && s.after.b <= s.before.b + 1e-15);
            prop_assert!(s.after.a <= s.after.b);
        }
    }

    #[test]
    fn grid_is_sandwiched(eta in 1e-4f64..1.0, ell in -1.0f64..2.0, n in 1usize..500) {
        let p = FlagParams::new(ell, eta, 0.01, n).unwrap();
        prop_assert!(p.grid() >= eta / 4.0 - 1e-15 && p.grid() <= eta / 2.0 + 1e-15);
        prop_assert!(2.0 * p.grid() <= eta + 1e-15);
        prop_assert!(p.lower_threshold() < p.upper_threshold());
    }

    #[test]
    fn classes_partition(eta in 0.01f64..1.0, ell in 0.0f64..1.0, y in 0.0f64..1.0) {
        let p = FlagParams::new(ell, eta, 0.01, 3).unwrap();
        let c = p.classify(y);
        let want = if y >= p.upper_threshold() {
            RegionClass::S1
        } else if y < p.lower_threshold() {
            RegionClass::S2
        } else {
            RegionClass::S3
        };
        prop_assert_eq!(c, want);
    }
}
