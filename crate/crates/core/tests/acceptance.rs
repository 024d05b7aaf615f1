//! Acceptance criteria. Runs without the libtest harness so that every
//! criterion prints one `PASS`/`FAIL` line; exits nonzero if any fails.

use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use hardy_lab::asymptotics::{
    default_extraction_grid, diagnose_toeplitz, extract_symbol, hankel_step, zero_rule,
    DiagnoseOptions, TestVectorFamily, Topology, SYMBOL_TOL,
};
use hardy_lab::constants::{
    ALPHA_I_HANKEL_CUT, ALPHA_I_HANKEL_TAIL_FLOOR, ALPHA_I_HANKEL_WINDOW, CESARO_UNIFORM_FLOOR,
    CESARO_UNIFORM_MAX_N, CESARO_UNIFORM_WINDOW, REGRESSION_TOL,
};
use hardy_lab::essential::{
    compactness_probe, default_cut_grid, defect, sg_hankel_lower_bound, CompactnessVerdict,
    DefectKind,
};
use hardy_lab::harness::{run_suite, to_json, verify, RunConfig};
use hardy_lab::operators::{sg, volterra};
use hardy_lab::sections::{op_norm, Operand};
use hardy_lab::series::SymbolSpec;
use hardy_lab::Rule64;

fn report(id: u32, ok: bool, detail: String) {
    println!(
        "criterion {id}: {} ({detail})",
        if ok { "PASS" } else { "FAIL" }
    );
    if !ok {
        FAILED.store(true, Ordering::Relaxed);
    }
}

static FAILED: AtomicBool = AtomicBool::new(false);

fn named(name: &str) -> SymbolSpec {
    SymbolSpec::named(name).unwrap()
}

fn c1_exact_identity_suites() {
    let suites = [
        "commutator",
        "decomposition",
        "esstoep_identity",
        "esshank_identity",
        "esshank_expansion",
        "toeplitz_product",
        "hankel_step_zero",
    ];
    let config = RunConfig {
        symbols: ["z", "z2", "cesaro", "one_plus_half_z"].map(named).to_vec(),
        window: Some(64),
        ..Default::default()
    };
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut cases = 0;
    for name in suites {
        let r = run_suite(name, &config).unwrap();
        for c in &r.cases {
            cases += 1;
            let exact_ok = !c.exact_path_used || c.residual == Some(0.0);
            if !c.pass || !exact_ok || !c.float_relative_residual.is_some_and(|r| r < 1e-12) {
                failures.push(format!("{name}/{}", c.label));
            }
        }
        if !r.pass {
            failures.push(name.to_string());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let ok = failures.is_empty() && secs < 60.0;
    report(
        1,
        ok,
        format!("{cases} cases at window 64 in {secs:.1} s, failures {failures:?}"),
    );
}

fn c2_cesaro_volterra_strong_rate() {
    let rule = volterra::<f64>(&named("cesaro")).unwrap();
    let grid: Vec<usize> = (4..=8).map(|p| 1 << p).collect();
    let mut rates = Vec::new();
    for l in 0..8 {
        let fam = TestVectorFamily::monomials(l..l + 1);
        let r = diagnose_toeplitz(
            &rule,
            &fam,
            &grid,
            Some(&zero_rule()),
            &DiagnoseOptions::default(),
        )
        .unwrap();
        rates.push(r.fitted_rate[&Topology::Strong].unwrap_or(f64::NAN));
    }
    let ok = rates.iter().all(|r| (r + 1.0).abs() <= 0.1);
    report(
        2,
        ok,
        format!("strong rates for e_0..e_7 over n in [16, 256]: {rates:.3?}, required -1 ± 0.1"),
    );
}

fn c3_cesaro_volterra_uniform_floor() {
    let rule = volterra::<f64>(&named("cesaro")).unwrap();
    let w = CESARO_UNIFORM_WINDOW;
    let metrics: Vec<(usize, f64)> = (0..)
        .map(|p| 1usize << p)
        .take_while(|&n| n <= CESARO_UNIFORM_MAX_N)
        .map(|n| {
            (
                n,
                op_norm(&hardy_lab::asymptotics::toeplitz_step(&rule, n, w, w)),
            )
        })
        .collect();
    let floor = CESARO_UNIFORM_FLOOR * (1.0 - REGRESSION_TOL);
    let above = metrics.iter().all(|&(_, v)| v >= floor);
    let last = metrics.last().unwrap().1;
    let pinned = (last - CESARO_UNIFORM_FLOOR).abs() <= REGRESSION_TOL * CESARO_UNIFORM_FLOOR;
    report(
        3,
        above && pinned,
        format!("window {w}: {metrics:.4?} vs c* = {CESARO_UNIFORM_FLOOR:.6} ± 2%"),
    );
}

fn c4_sg_symbol_extraction() {
    let mut worst_finite: f64 = 0.0;
    let mut worst_limit: f64 = 0.0;
    let mut ok = true;
    for name in ["one_plus_half_z", "cesaro_trunc16"] {
        let g = named(name);
        let exact = g.compile::<f64>().unwrap();
        let rule = sg::<f64>(&g).unwrap();
        let grid = default_extraction_grid();
        for &n in &grid {
            for d in 0..=8usize {
                let entry = rule.entry(n + d, n);
                let predicted = d as f64 / (n + d) as f64 * exact.coeff(d).norm();
                let dev = (entry - exact.coeff(d)).norm();
                worst_finite = worst_finite.max(dev - predicted);
                ok &= dev <= predicted + 1e-14;
            }
        }
        let x = extract_symbol(&rule, -8..=8, &grid, SYMBOL_TOL);
        for d in -8i64..=8 {
            let want = if d >= 0 {
                exact.coeff(d as usize)
            } else {
                Default::default()
            };
            let err = (x.coeffs.get(d) - want).norm();
            worst_limit = worst_limit.max(err);
            ok &= err <= SYMBOL_TOL;
        }
    }
    report(
        4,
        ok,
        format!("excess over predicted deviation {worst_finite:.2e}, extrapolation error {worst_limit:.2e} (tol {SYMBOL_TOL:e})"),
    );
}

fn c5_hankel_steps_vanish() {
    let mut rules: Vec<(String, Rule64)> = Vec::new();
    for (name, g) in SymbolSpec::registry() {
        rules.push((format!("volterra({name})"), volterra::<f64>(&g).unwrap()));
        rules.push((format!("sg({name})"), sg::<f64>(&g).unwrap()));
    }
    let mut nonzero = Vec::new();
    for (label, rule) in &rules {
        for n in 0..=64 {
            let h = hankel_step(rule, n, n + 1, 96);
            if h.entries().iter().any(|z| z.re != 0.0 || z.im != 0.0) {
                nonzero.push(format!("{label} n={n}"));
            }
        }
    }
    report(
        5,
        nonzero.is_empty(),
        format!(
            "{} rules, n = 0..=64, nonzero steps {nonzero:?}",
            rules.len()
        ),
    );
}

fn c6a_cesaro_hankel_defect_is_compact() {
    let w = 512;
    let rule = volterra::<f64>(&named("cesaro")).unwrap();
    let d = defect(Operand::Rule(&rule), DefectKind::HankelDefect, w, w).unwrap();
    let est = compactness_probe(
        Operand::Section(&d),
        w,
        &default_cut_grid(w),
        &Default::default(),
    )
    .unwrap();
    let at_128 = *est.tail_norms.last().unwrap();
    let ok = est.verdict == CompactnessVerdict::CompactLike && at_128 < 1e-3;
    report(
        6,
        ok,
        format!(
            "6a: verdict {:?}, tails {:?} at cuts {:?}, required < 1e-3 by 128",
            est.verdict, est.tail_norms, est.cut_grid
        ),
    );
}

fn c6b_alpha_i_hankel_defect_is_not_compact() {
    let w = ALPHA_I_HANKEL_WINDOW;
    let rule = volterra::<f64>(&named("log_alpha_i")).unwrap();
    let d = defect(Operand::Rule(&rule), DefectKind::HankelDefect, w, w).unwrap();
    let est = compactness_probe(
        Operand::Section(&d),
        w,
        &default_cut_grid(w),
        &Default::default(),
    )
    .unwrap();
    let idx = est
        .cut_grid
        .iter()
        .position(|&c| c == ALPHA_I_HANKEL_CUT)
        .unwrap();
    let tail = est.tail_norms[idx];
    let floor = ALPHA_I_HANKEL_TAIL_FLOOR * (1.0 - REGRESSION_TOL);
    let ok = est.verdict == CompactnessVerdict::NoncompactLike && tail >= floor;
    report(
        6,
        ok,
        format!(
            "6b: verdict {:?}, tail at {ALPHA_I_HANKEL_CUT} = {tail:.6}, floor {floor:.6}",
            est.verdict
        ),
    );
}

fn c6c_sg_hankel_defect_lower_bound() {
    let mut lines = Vec::new();
    let mut ok = true;
    for name in ["one", "z", "z2", "one_plus_half_z", "cesaro_trunc16"] {
        let lb = sg_hankel_lower_bound(&named(name), 100, 200).unwrap();
        let bound = 0.98 * lb.a_k0_abs;
        ok &= lb.min_norm >= bound;
        lines.push(format!("{name}: {:.4} >= {bound:.4}", lb.min_norm));
    }
    report(
        6,
        ok,
        format!("6c: min over n in [100, 200]: {}", lines.join(", ")),
    );
}

fn c7_left_commutators_are_compact() {
    let w = 512;
    let cuts = default_cut_grid(w);
    let mut worst: f64 = f64::NEG_INFINITY;
    let mut bad = Vec::new();
    for (name, g) in SymbolSpec::registry() {
        for (label, rule) in [
            ("volterra", volterra::<f64>(&g).unwrap()),
            ("sg", sg::<f64>(&g).unwrap()),
        ] {
            let d = defect(Operand::Rule(&rule), DefectKind::LeftCommutator, w, w).unwrap();
            let est =
                compactness_probe(Operand::Section(&d), w, &cuts, &Default::default()).unwrap();
            let vanished = *est.tail_norms.last().unwrap() == 0.0;
            let rate = est.tail_rate.unwrap_or(f64::NEG_INFINITY);
            if !vanished {
                worst = worst.max(rate);
            }
            if est.verdict != CompactnessVerdict::CompactLike || !(vanished || rate <= -0.8) {
                bad.push(format!("{label}({name}): {:?} rate {rate:.3}", est.verdict));
            }
        }
    }
    report(
        7,
        bad.is_empty(),
        format!("slowest tail rate {worst:.3}, required <= -0.8, failures {bad:?}"),
    );
}

fn c8_verify_is_deterministic() {
    let config = RunConfig {
        seed: 17,
        ..Default::default()
    };
    let names = vec!["all".to_string()];
    let a = to_json(&verify(&names, &config).unwrap()).unwrap();
    let b = to_json(&verify(&names, &config).unwrap()).unwrap();
    report(
        8,
        a == b,
        format!(
            "two runs with seed 17: {} bytes each, identical = {}",
            a.len(),
            a == b
        ),
    );
}

fn main() {
    let criteria: [(&str, fn()); 10] = [
        ("c1_exact_identity_suites", c1_exact_identity_suites),
        (
            "c2_cesaro_volterra_strong_rate",
            c2_cesaro_volterra_strong_rate,
        ),
        (
            "c3_cesaro_volterra_uniform_floor",
            c3_cesaro_volterra_uniform_floor,
        ),
        ("c4_sg_symbol_extraction", c4_sg_symbol_extraction),
        ("c5_hankel_steps_vanish", c5_hankel_steps_vanish),
        (
            "c6a_cesaro_hankel_defect_is_compact",
            c6a_cesaro_hankel_defect_is_compact,
        ),
        (
            "c6b_alpha_i_hankel_defect_is_not_compact",
            c6b_alpha_i_hankel_defect_is_not_compact,
        ),
        (
            "c6c_sg_hankel_defect_lower_bound",
            c6c_sg_hankel_defect_lower_bound,
        ),
        (
            "c7_left_commutators_are_compact",
            c7_left_commutators_are_compact,
        ),
        ("c8_verify_is_deterministic", c8_verify_is_deterministic),
    ];
    let filter = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    for (name, run) in criteria {
        if filter.as_deref().is_none_or(|f| name.contains(f)) {
            run();
        }
    }
    if FAILED.load(Ordering::Relaxed) {
        std::process::exit(1);
    }
}
