use pld_core::bench::{median, run_benchmark, RunConfig};
use std::time::Instant;

fn grid(algos: &str, values: &str, gamma: f64, d: u32) -> Vec<pld_core::bench::RunRow> {
    let cfg = RunConfig::from_json(&format!(
        r#"{{
        "model": {{"n": 10000, "beta": 2.5, "wbar": 10.0, "s": 0.8, "theta": 0.01}},
        "algo": {{"d_hops": {d}, "gamma": {gamma}}},
        "sweep": [{{"param": "theta", "values": {values}}}],
        "repetitions": 10,
        "master_seed": 1,
        "algorithms": {algos}
    }}"#
    ))
    .unwrap();
    run_benchmark(&cfg, None).unwrap()
}

fn meds(rows: &[pld_core::bench::RunRow], algo: &str) -> Vec<(f64, f64)> {
    let mut points: Vec<f64> = rows.iter().map(|r| r.sweep_value).collect();
    points.sort_by(f64::total_cmp);
    points.dedup();
    points
        .into_iter()
        .map(|x| {
            let acc: Vec<f64> = rows
                .iter()
                .filter(|r| r.algorithm == algo && r.sweep_value == x)
                .map(|r| r.accuracy.unwrap())
                .collect();
            (x, median(&acc))
        })
        .collect()
}

fn main() {
    let t0 = Instant::now();
    let rows = grid(r#"["pld", "one_hop", "pgm"]"#, "[0.005, 0.01, 0.02, 0.03]", 0.5, 3);
    println!("== C1/C2/C5 ({:.0}s) ==", t0.elapsed().as_secs_f64());
    for algo in ["pld", "one_hop", "pgm"] {
        println!("{algo}: {:?}", meds(&rows, algo).iter().map(|(x, a)| format!("{x}:{a:.3}")).collect::<Vec<_>>());
    }
    let p01: Vec<f64> = rows
        .iter()
        .filter(|r| r.algorithm == "pld" && r.sweep_value == 0.01)
        .map(|r| r.precision.unwrap())
        .collect();
    println!("pld precision@0.01: {:?}", p01.iter().map(|p| (p * 1e4).round() / 1e4).collect::<Vec<_>>());

    for gamma in [0.35, 0.5, 0.65] {
        let rows = grid(r#"["pld"]"#, "[0.001,0.002,0.003,0.004,0.005,0.006,0.007,0.008,0.009,0.01]", gamma, 3);
        println!("gamma {gamma}: {:?}", meds(&rows, "pld").iter().map(|(x, a)| format!("{x}:{a:.2}")).collect::<Vec<_>>());
    }
    for (d, gamma) in [(2u32, 0.6666666666666666), (3, 0.5), (4, 0.4)] {
        let rows = grid(r#"["pld"]"#, "[0.001,0.002,0.003,0.004,0.005,0.006,0.007,0.008,0.009,0.01]", gamma, d);
        println!("D {d} (gamma {gamma:.3}): {:?}", meds(&rows, "pld").iter().map(|(x, a)| format!("{x}:{a:.2}")).collect::<Vec<_>>());
    }
    println!("total {:.0}s", t0.elapsed().as_secs_f64());
}
