//! Scratch timing probe for the central-spin family.

use std::time::Instant;

use symsim_core::{
    central_spin_instance, coupling_pattern, decide, decompose, lie_closure, oracle_verdict,
    CouplingCase, EngineOptions, RankMode, RankOptions,
};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let n: usize = args.get(1).map(|s| s.parse().unwrap()).unwrap_or(3);
    let case = match args.get(2).map(|s| s.as_str()) {
        Some("b") => CouplingCase::B,
        _ => CouplingCase::A,
    };
    let mode = match args.get(3).map(|s| s.as_str()) {
        Some("exact") => RankMode::Exact,
        Some("modular") => RankMode::Modular,
        _ => RankMode::Auto,
    };
    let skip_oracle = args.get(4).map(|s| s == "nooracle").unwrap_or(false);

    let inst = central_spin_instance(n, &coupling_pattern(case, n)).unwrap();
    println!("n = {n}, case {case:?}, dim = {}", inst.dim());

    let t = Instant::now();
    let opts = EngineOptions {
        rank: RankOptions {
            mode,
            seed: Some(7),
            ..Default::default()
        },
        force_condition_b: false,
    };
    let report = decide(&inst, &opts).unwrap();
    println!(
        "decide: verdict {:?}, quad dims ({}, {}), lin dims ({}, {}), B {:?} center {:?} ranks ({:?}, {:?}), modular {}, {:?}",
        report.verdict,
        report.condition_a.dim_ts_p,
        report.condition_a.dim_ts_union,
        report.linear_dim_p,
        report.linear_dim_union,
        report.condition_b.status,
        report.condition_b.center_dim,
        report.condition_b.rank_restricted.map(|r| r.rank),
        report.condition_b.rank_full.map(|r| r.rank),
        report.used_modular,
        t.elapsed()
    );

    if !skip_oracle {
        let t = Instant::now();
        let closed = lie_closure(inst.p_set(), None).unwrap();
        println!("closure: dim {} in {:?}", closed.dim, t.elapsed());
        let t = Instant::now();
        let dec = decompose(&closed).unwrap();
        println!(
            "decompose: semisimple {}, center {} in {:?}",
            dec.semisimple_dim,
            dec.center_dim,
            t.elapsed()
        );
        let t = Instant::now();
        let report = oracle_verdict(&inst, None).unwrap();
        println!(
            "oracle: simulable {}, dims ({}, {}) in {:?}",
            report.simulable, report.closure_dim_p, report.closure_dim_union,
            t.elapsed()
        );
    }
}
