//! Acceptance battery: one test per criterion, each printing a single
//! pass/fail line. Tolerances are part of the contract, not tuned to
//! the implementation.

use hyperoct::hyperfun::continuation::hyp2f1_neg;
use hyperoct::hyperfun::euler::lauricella_fa_integral;
use hyperoct::hyperfun::relations::{fa_adjacent_residual, fa_partial, Lemma2Params};
use hyperoct::hyperfun::series::lauricella_fa_series;
use hyperoct::hyperfun::{lauricella_fa, ln_gamma, pochhammer, EvalOptions, FAParams};
use hyperoct::verify::{
    check_energy_identity, check_fundamental_solution, check_lemma1_limit,
    check_lemma1_limit_drift, check_lemma2_numeric, check_neumann_end_to_end, CheckReport,
    Lemma2Method,
};
use hyperoct::DomainSpec;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn report(criterion: usize, label: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("criterion {criterion} [{label}]: {verdict} — {detail}");
    assert!(pass, "criterion {criterion} [{label}] failed: {detail}");
}

fn all_passed(reports: &[CheckReport]) -> (bool, String) {
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed)
        .map(|r| format!("{} (obs {:e}, exp {:e})", r.name, r.observed, r.expected))
        .collect();
    if failed.is_empty() {
        (true, format!("{} sub-checks passed", reports.len()))
    } else {
        (false, failed.join("; "))
    }
}

#[test]
fn criterion_1_fa_correctness() {
    let opts = EvalOptions::default();
    // n = 1 reduction: F_A^(1)(a, b; c; x) = 2F1(a, b; c; x)
    let params = FAParams::new(0.75, vec![0.25], vec![0.6]).unwrap();
    let mut worst = 0.0f64;
    for j in 1..=50 {
        let x = -0.1 * j as f64;
        let fa = lauricella_fa(&params, &[x], &opts).unwrap().value;
        let f21 = hyp2f1_neg(0.75, 0.25, 0.6, x).unwrap();
        worst = worst.max((fa - f21).abs() / f21.abs());
    }
    let reduction_ok = worst <= 1e-12;

    // series vs Euler integral on random all-negative vectors, n <= 4
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_si = 0.0f64;
    for trial in 0..100 {
        let n = 1 + trial % 4;
        let a = rng.gen_range(0.5..2.5);
        let b: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..0.6)).collect();
        let c: Vec<f64> = b.iter().map(|&v| v + rng.gen_range(0.2..0.8)).collect();
        let params = FAParams::new(a, b, c).unwrap();
        // keep sum |x| < 1 so both paths are admissible
        let x: Vec<f64> = (0..n)
            .map(|_| -rng.gen_range(0.01..0.9 / n as f64))
            .collect();
        let s = lauricella_fa_series(&params, &x, &opts).unwrap().value;
        let i = lauricella_fa_integral(&params, &x, &opts).unwrap().value;
        worst_si = worst_si.max((s - i).abs() / s.abs());
    }
    let agree_ok = worst_si <= 1e-8;
    report(
        1,
        "F_A correctness",
        reduction_ok && agree_ok,
        &format!("2F1 reduction rel err {worst:.2e} (<= 1e-12), series-vs-integral rel err {worst_si:.2e} (<= 1e-8)"),
    );
}

#[test]
fn criterion_2_identity_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let opts = EvalOptions::default();

    // Legendre duplication: ln G(2z) = ln G(z) + ln G(z+1/2) + (2z-1) ln 2 - ln(pi)/2
    let mut worst_dup = 0.0f64;
    for _ in 0..200 {
        let z: f64 = rng.gen_range(0.05..10.0);
        let lhs = ln_gamma(2.0 * z).unwrap().ln_abs;
        let rhs = ln_gamma(z).unwrap().ln_abs + ln_gamma(z + 0.5).unwrap().ln_abs
            + (2.0 * z - 1.0) * 2.0f64.ln()
            - 0.5 * std::f64::consts::PI.ln();
        worst_dup = worst_dup.max((lhs - rhs).abs() / lhs.abs().max(1.0));
    }

    // Pochhammer doubling: (a)_{2k} = 4^k (a/2)_k ((a+1)/2)_k
    let mut worst_poch = 0.0f64;
    for _ in 0..200 {
        let a: f64 = rng.gen_range(0.1..4.0);
        let k: usize = rng.gen_range(0..12);
        let lhs = pochhammer(a, 2 * k);
        let rhs = 4.0f64.powi(k as i32) * pochhammer(a / 2.0, k) * pochhammer((a + 1.0) / 2.0, k);
        worst_poch = worst_poch.max((lhs - rhs).abs() / lhs.abs().max(1.0));
    }

    // differentiation formula vs central differences; adjacent relation
    let mut worst_diff = 0.0f64;
    let mut worst_adj = 0.0f64;
    for trial in 0..200 {
        let n = 1 + trial % 3;
        let a = rng.gen_range(0.5..2.0);
        let b: Vec<f64> = (0..n).map(|_| rng.gen_range(0.2..0.6)).collect();
        let c: Vec<f64> = b.iter().map(|&v| v + rng.gen_range(0.3..0.9)).collect();
        let params = FAParams::new(a, b, c).unwrap();
        let x: Vec<f64> = (0..n)
            .map(|_| {
                let v: f64 = rng.gen_range(0.05..0.25 / n as f64);
                if rng.gen_bool(0.5) {
                    v
                } else {
                    -v
                }
            })
            .collect();
        let k = rng.gen_range(0..n);
        let exact = fa_partial(&params, &x, k, &opts).unwrap();
        let h = 1e-5;
        let mut xp = x.clone();
        let mut xm = x.clone();
        xp[k] += h;
        xm[k] -= h;
        let fd = (lauricella_fa(&params, &xp, &opts).unwrap().value
            - lauricella_fa(&params, &xm, &opts).unwrap().value)
            / (2.0 * h);
        worst_diff = worst_diff.max((exact - fd).abs() / exact.abs().max(1.0));
        worst_adj = worst_adj.max(fa_adjacent_residual(&params, &x, &opts).unwrap());
    }
    let pass =
        worst_dup <= 1e-10 && worst_poch <= 1e-10 && worst_diff <= 1e-6 && worst_adj <= 1e-10;
    report(
        2,
        "identity suite",
        pass,
        &format!(
            "duplication {worst_dup:.2e}, Pochhammer doubling {worst_poch:.2e}, \
             differentiation vs FD {worst_diff:.2e} (<= 1e-6), adjacent residual {worst_adj:.2e} (<= 1e-10)"
        ),
    );
}

#[test]
fn criterion_3_lemma2() {
    let anchor_half = Lemma2Params {
        p: vec![1.0],
        q: vec![2.0],
        r: vec![1.0],
        s: 1.0,
        t: 0.0,
    };
    let anchor_quarter = Lemma2Params {
        p: vec![1.0, 1.0],
        q: vec![2.0, 2.0],
        r: vec![1.0, 1.0],
        s: 2.0,
        t: 0.0,
    };
    let r1 = check_lemma2_numeric(&anchor_half, Lemma2Method::Nested, 2_000_000).unwrap();
    let r2 = check_lemma2_numeric(&anchor_quarter, Lemma2Method::Nested, 20_000_000).unwrap();
    let t_nonzero = Lemma2Params {
        p: vec![1.5],
        q: vec![2.0],
        r: vec![2.0],
        s: 1.5,
        t: 0.25,
    };
    let r3 = check_lemma2_numeric(&t_nonzero, Lemma2Method::Qmc, 2_000_000).unwrap();
    let n3 = Lemma2Params {
        p: vec![1.0, 1.5, 2.0],
        q: vec![2.0, 3.0, 4.0],
        r: vec![1.0, 1.5, 0.8],
        s: 2.0,
        t: 0.0,
    };
    let r4 = check_lemma2_numeric(&n3, Lemma2Method::Qmc, 2_000_000).unwrap();

    let e1 = (r1.observed - r1.expected).abs();
    let e2 = (r2.observed - r2.expected).abs();
    let e3 = (r3.observed - r3.expected).abs() / r3.expected.abs();
    let e4 = (r4.observed - r4.expected).abs() / r4.expected.abs();
    let anchors = (r1.expected - std::f64::consts::FRAC_PI_2).abs() < 1e-12
        && (r2.expected - std::f64::consts::FRAC_PI_4).abs() < 1e-12;
    let pass = e1 <= 1e-6 && e2 <= 1e-6 && e3 <= 1e-3 && e4 <= 1e-3 && anchors;
    report(
        3,
        "Lemma 2",
        pass,
        &format!(
            "nested n=1 err {e1:.2e}, nested n=2 err {e2:.2e} (<= 1e-6); \
             QMC t=0.25 rel {e3:.2e}, QMC n=3 rel {e4:.2e} (<= 1e-3); pi/2 and pi/4 anchors {anchors}"
        ),
    );
}

#[test]
fn criterion_4_lemma1() {
    let eps = [1e-3, 2.5e-4, 6.25e-5, 1.5625e-5];
    let mut reports = Vec::new();
    let sets: [(f64, Vec<f64>, Vec<f64>, Vec<f64>); 9] = [
        (2.0, vec![0.5], vec![1.0], vec![1.0]),
        (1.5, vec![0.25], vec![0.5], vec![2.0]),
        (3.0, vec![0.4], vec![1.2], vec![0.5]),
        (2.5, vec![0.3, 0.4], vec![0.6, 0.8], vec![1.0, 1.5]),
        (3.0, vec![0.5, 0.5], vec![1.0, 1.0], vec![0.7, 2.0]),
        (4.0, vec![0.25, 0.3], vec![0.5, 0.6], vec![1.2, 0.9]),
        (3.5, vec![0.3, 0.3, 0.3], vec![0.6, 0.6, 0.6], vec![1.0, 1.0, 1.0]),
        (4.0, vec![0.2, 0.4, 0.6], vec![0.4, 0.8, 1.2], vec![0.8, 1.1, 1.6]),
        (5.0, vec![0.5, 0.4, 0.3], vec![1.0, 0.8, 0.6], vec![2.0, 1.0, 0.5]),
    ];
    for (a, b, c, z0) in &sets {
        reports.push(check_lemma1_limit(*a, b, c, z0, &eps).unwrap());
    }
    // epsilon-dependent arguments z_k(eps) = z0_k + drift * eps
    reports.push(check_lemma1_limit_drift(2.0, &[0.5], &[1.0], &[1.0], 0.7, &eps).unwrap());
    reports.push(
        check_lemma1_limit_drift(3.0, &[0.3, 0.4], &[0.6, 0.8], &[1.0, 1.5], -0.4, &eps).unwrap(),
    );
    let (pass, detail) = all_passed(&reports);
    report(
        4,
        "Lemma 1",
        pass && reports.len() >= 10,
        &format!("{detail} ({} parameter sets, tol 1e-3)", reports.len()),
    );
}

#[test]
fn criterion_5_fundamental_solution() {
    let m3n1 = DomainSpec::new(3, 1, vec![0.25]).unwrap();
    let m4n2 = DomainSpec::new(4, 2, vec![0.25, 0.3]).unwrap();
    let r1 = check_fundamental_solution(&m3n1, 3, 42).unwrap();
    let r2 = check_fundamental_solution(&m4n2, 2, 43).unwrap();
    let (pass, detail) = all_passed(&[r1, r2]);
    report(
        5,
        "fundamental solution",
        pass,
        &format!("h-ratio, residual scale, symmetry, face derivative — {detail}"),
    );
}

#[test]
fn criterion_6_neumann_end_to_end() {
    let reports = check_neumann_end_to_end("m3n1-gaussian");
    let names: Vec<&str> = reports.iter().map(|r| r.name.as_str()).collect();
    assert!(names.iter().any(|n| n.contains("flux_recovery")));
    assert!(names.iter().any(|n| n.contains("pde_residual")));
    assert!(names.iter().any(|n| n.contains("decay")));
    let (pass, detail) = all_passed(&reports);
    report(6, "Neumann end-to-end m3n1", pass, &detail);
}

#[test]
fn criterion_7_off_face_flux() {
    let reports = check_neumann_end_to_end("m4n2-algebraic");
    let off: Vec<CheckReport> = reports
        .into_iter()
        .filter(|r| r.name.contains("offface"))
        .collect();
    assert_eq!(off.len(), 2, "expected limit and rate sub-checks");
    let (pass, detail) = all_passed(&off);
    report(
        7,
        "off-face weighted flux",
        pass,
        &format!("extrapolated limit and xi^(1+2 alpha) rate — {detail}"),
    );
}

#[test]
fn criterion_8_energy_identity() {
    let r = check_energy_identity("m3n1-gaussian", 8.0).unwrap();
    report(
        8,
        "energy identity",
        r.passed,
        &format!(
            "lhs {:.6} vs rhs {:.6}, rel diff {:.2e} (<= 5e-2, two grid resolutions)",
            r.observed,
            r.expected,
            (r.observed - r.expected).abs() / r.expected.abs()
        ),
    );
}

#[test]
fn criterion_9_determinism() {
    let bin = env!("CARGO_BIN_EXE_hyperoct");
    let run = || {
        std::process::Command::new(bin)
            .args(["verify", "--suite", "default", "--seed", "42"])
            .output()
            .expect("binary runs")
    };
    let a = run();
    let b = run();
    let identical = a.stdout == b.stdout;
    let clean = a.status.code() == Some(0) && b.status.code() == Some(0);
    report(
        9,
        "determinism",
        identical && clean,
        &format!(
            "two `verify --suite default --seed 42` runs: byte-identical={identical}, exit0={clean} ({} bytes)",
            a.stdout.len()
        ),
    );
}
