//! Qualitative behaviors of the experiment harness at reduced scale: the
//! accuracy curve over the seed fraction is monotone up to noise, the
//! pipeline dominates the baselines once seeding suffices, and the optimal
//! slice exponent beats the alternatives at a fixed seed budget.

use pld_core::bench::{median, run_benchmark, RunConfig};
use pld_core::gen::{self, ModelParams};
use pld_core::matchers::{filter_low_degree_seeds, match_first_slice};
use pld_core::slicing::{derive_constants, PldParams};

fn medians(rows: &[pld_core::bench::RunRow], algo: &str) -> Vec<(f64, f64)> {
    let mut points: Vec<f64> = rows.iter().map(|r| r.sweep_value).collect();
    points.sort_by(f64::total_cmp);
    points.dedup();
    points
        .into_iter()
        .map(|x| {
            let accs: Vec<f64> = rows
                .iter()
                .filter(|r| r.algorithm == algo && r.sweep_value == x)
                .map(|r| r.accuracy.unwrap())
                .collect();
            (x, median(&accs))
        })
        .collect()
}

#[test]
fn sweep_is_monotone_and_dominates_baselines() {
    let cfg = RunConfig::from_json(
        r#"{
            "model": {"n": 4000, "beta": 2.5, "wbar": 10.0, "s": 0.8, "theta": 0.01},
            "algo": {"d_hops": 3, "gamma": 0.5},
            "sweep": [{"param": "theta", "values": [0.0, 0.0025, 0.005, 0.01, 0.02]}],
            "repetitions": 5,
            "master_seed": 3,
            "algorithms": ["pld", "one_hop", "pgm"]
        }"#,
    )
    .unwrap();
    let rows = run_benchmark(&cfg, None).unwrap();
    let pld_curve = medians(&rows, "pld");
    assert_eq!(pld_curve[0].1, 0.0, "no seeds, no output");

    // Nondecreasing in theta, allowing one noise inversion of at most 0.02.
    let mut inversions = 0;
    for w in pld_curve.windows(2) {
        if w[1].1 < w[0].1 {
            assert!(w[0].1 - w[1].1 <= 0.02, "large inversion: {pld_curve:?}");
            inversions += 1;
        }
    }
    assert!(inversions <= 1, "curve too noisy: {pld_curve:?}");

    let one_hop = medians(&rows, "one_hop");
    let pgm = medians(&rows, "pgm");
    for i in 2..pld_curve.len() {
        assert!(
            pld_curve[i].1 > one_hop[i].1 && pld_curve[i].1 > pgm[i].1,
            "pipeline should dominate baselines from theta={}: pld {pld_curve:?} \
             one_hop {one_hop:?} pgm {pgm:?}",
            pld_curve[i].0
        );
    }

    // Precision stays high wherever something was matched.
    for r in rows.iter().filter(|r| r.algorithm == "pld" && r.sweep_value >= 0.005) {
        assert!(r.precision.unwrap() >= 0.95, "precision dropped: {r:?}");
    }
}

#[test]
fn optimal_gamma_beats_alternatives_at_fixed_seed_budget() {
    let mut by_gamma = Vec::new();
    for gamma in [0.35, 0.5, 0.65] {
        let cfg = RunConfig::from_json(&format!(
            r#"{{
                "model": {{"n": 10000, "beta": 2.5, "wbar": 10.0, "s": 0.8, "theta": 0.004}},
                "algo": {{"d_hops": 3, "gamma": {gamma}}},
                "repetitions": 5,
                "master_seed": 3,
                "algorithms": ["pld"]
            }}"#
        ))
        .unwrap();
        let rows = run_benchmark(&cfg, None).unwrap();
        let accs: Vec<f64> = rows.iter().map(|r| r.accuracy.unwrap()).collect();
        by_gamma.push((gamma, median(&accs)));
    }
    let (_, at_035) = by_gamma[0];
    let (_, at_050) = by_gamma[1];
    let (_, at_065) = by_gamma[2];
    assert!(
        at_050 >= at_035 && at_050 >= at_065,
        "gamma = 0.5 should dominate at theta = 0.004: {by_gamma:?}"
    );
}

#[test]
fn first_slice_stays_clean_under_full_information() {
    // With s = 1 and every pair revealed, the first slice must recover every
    // true pair in its band without a single fake.
    let model = ModelParams::new(2000, 2.5, 10.0).with_s(1.0).with_theta(1.0);
    let inst = gen::generate_instance(&model, 29).unwrap();
    let p = PldParams::new(3, 2000, 2.5, 10.0, 1.0, 1.0).with_gamma(0.5);
    let d = derive_constants(&p).unwrap();
    let truth: std::collections::HashMap<u32, u32> = inst.truth.iter().copied().collect();

    let seeds_hat = filter_low_degree_seeds(&inst.seeds, &inst.g1, &inst.g2, p.n);
    let (g1c, _) = inst.g1.induced_by_degree_cap(d.intermediate_cap());
    let (g2c, _) = inst.g2.induced_by_degree_cap(d.intermediate_cap());
    let r1 = match_first_slice(&inst.g1, &inst.g2, &g1c, &g2c, &seeds_hat, &d, &p);
    for e in r1.iter() {
        assert_eq!(truth.get(&e.u), Some(&e.v), "fake pair ({}, {})", e.u, e.v);
    }
    let matched = r1.to_map();
    for (&u, &v) in &truth {
        if d.slice_membership(inst.g1.degree(u), 1) && d.slice_membership(inst.g2.degree(v), 1) {
            assert_eq!(matched.get(&u), Some(&v), "missed true pair ({u}, {v})");
        }
    }
}
