//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use juhl_core::cli::{operator_from_json, operator_to_json};
use juhl_core::juhl::build_en;
use juhl_core::verify::knapp_stein::{check_j1_gaussian, check_hs_fourier_pairings, sampled_ks, KsOptions};
use juhl_core::verify::{ambient, covariance, geometry, symbolic, CheckReport};

const SEED: u64 = 20_240_611;

struct Outcome {
    passed: bool,
    detail: String,
}

fn from_reports(reports: &[CheckReport]) -> Outcome {
    let passed = reports.iter().all(|r| r.passed);
    let detail = reports
        .iter()
        .map(|r| {
            let mut s = format!("{} n={} err={:.2e} tol={:.0e}", r.name, r.samples, r.max_rel_err, r.tolerance);
            if !r.passed {
                s.push_str(&format!(" worst: {}", r.diagnostics));
            }
            s
        })
        .collect::<Vec<_>>()
        .join("; ");
    Outcome { passed, detail }
}

fn ok_or_fail(name: &str, tol: f64, r: juhl_core::Result<CheckReport>) -> CheckReport {
    r.unwrap_or_else(|e| CheckReport::failed(name, tol, &e))
}

fn timed(budget: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut o = f();
    let elapsed = start.elapsed();
    if let Some(b) = budget {
        o.detail.push_str(&format!("; {:.2}s of {:.0}s", elapsed.as_secs_f64(), b.as_secs_f64()));
        if elapsed > b {
            o.passed = false;
        }
    }
    o
}

fn cli(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_juhl")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn criterion_cli() -> Outcome {
    let mut notes = Vec::new();
    let (code, _) = cli(&["verify", "--suite", "all"]);
    notes.push(format!("verify all exit {code}"));
    let mut passed = code == 0;

    let mut round_trips = 0;
    for (n, order) in [(1, 3), (2, 1), (2, 2), (3, 4), (4, 3), (6, 2)] {
        let (c, out) = cli(&["operator", "--n", &n.to_string(), "--N", &order.to_string(), "--format", "json"]);
        let parsed = serde_json::from_slice(&out).ok().and_then(|v| operator_from_json(&v).ok());
        let lossless = c == 0 && parsed.as_ref() == Some(&build_en(n, order));
        let reemitted = parsed.map(|op| operator_to_json(&op, order));
        let same = reemitted == serde_json::from_slice(&out).ok();
        if lossless && same {
            round_trips += 1;
        } else {
            passed = false;
        }
    }
    notes.push(format!("operator round trips {round_trips}/6"));

    let args = ["verify", "--suite", "numeric", "--seed", "7"];
    let (c1, a) = cli(&args);
    let (c2, b) = cli(&args);
    let identical = c1 == 0 && c2 == 0 && a == b && !a.is_empty();
    notes.push(format!("seed 7 byte-identical {identical}"));
    Outcome { passed: passed && identical, detail: notes.join("; ") }
}

fn main() {
    let mut results: Vec<(&str, Outcome)> = Vec::new();

    results.push((
        "exact symbol identity for M∘J_λ, n = 1..8",
        timed(Some(Duration::from_secs(1)), || from_reports(&[symbolic::check_mi_range(1..=8)])),
    ));

    let start = Instant::now();
    let [a0, top, structure] = symbolic::check_family(2..=6, 10);
    let family_time = start.elapsed();
    let budget = Duration::from_secs(30);
    let with_time = |r: CheckReport| {
        let mut o = from_reports(&[r]);
        o.detail.push_str(&format!("; family built in {:.2}s of 30s", family_time.as_secs_f64()));
        o.passed &= family_time <= budget;
        o
    };
    results.push(("a_0 closed form, n = 2..6, N = 1..10", with_time(a0)));
    results.push(("E_{λ,N} ξ_n^N = N! a_0, same range", with_time(top)));
    results.push(("tangential decomposition has zero residual, same range", with_time(structure)));

    results.push((
        "E_μ ξ_n^k = k(2μ−n+1+k) ξ_n^{k−1}, k ≤ 10",
        timed(None, || from_reports(&[symbolic::check_power_rule(1..=8, 10)])),
    ));

    results.push((
        "covariance of E_λ, n ∈ {2,3}, 50 samples each",
        timed(Some(Duration::from_secs(10)), || {
            from_reports(&[ok_or_fail("covariance_E", 1e-9, covariance::sampled_covariance_e(&[2, 3], 50, SEED, 1e-9))])
        }),
    ));

    results.push((
        "restricted covariance of E_N(λ), N ∈ {1,2,3}, n ∈ {2,3}, 20 samples",
        timed(None, || {
            from_reports(&[ok_or_fail(
                "covariance_EN",
                1e-8,
                covariance::sampled_covariance_en(&[2, 3], &[1, 2, 3], 20, SEED, 1e-8),
            )])
        }),
    ));

    results.push((
        "Knapp–Stein intertwining by quadrature and J_1 of a Gaussian",
        timed(None, || {
            let opts = KsOptions { quad_tol: 1e-6, radius_scale: 1.0 };
            from_reports(&[
                ok_or_fail("knapp_stein", 1e-5, sampled_ks(&[1, 2], 5, SEED, &opts, 1e-5)),
                ok_or_fail("j1_gaussian", 1e-8, check_j1_gaussian(&[-1.5, -0.3, 0.0, 0.7, 2.0], &opts, 1e-8)),
            ])
        }),
    ));

    results.push((
        "Fourier transform of h_s, weak pairing",
        timed(None, || {
            from_reports(&[ok_or_fail(
                "hs_pairing",
                1e-8,
                check_hs_fourier_pairings(&[(1, -0.5), (2, -1.0), (3, -1.5)], 1e-8),
            )])
        }),
    ));

    results.push((
        "J_λ J_{n−λ} at symbol level, 20 λ per n = 1..4",
        timed(None, || {
            from_reports(&[ok_or_fail("inverse_j", 1e-10, symbolic::check_inverse_j_range(1..=4, 20, SEED, 1e-10))])
        }),
    ));

    results.push((
        "ambient identities: B_μ through the chart, |x_n|^μ conjugation of B_μ, Δ_S 1, extension independence",
        timed(None, || {
            let d = [2, 3, 4];
            from_reports(&[
                ok_or_fail("ambient_noncompact", 1e-9, ambient::sampled_ambient_noncompact(&d, 30, SEED, 1e-9)),
                ok_or_fail("b_mu_conjugation", 1e-9, ambient::sampled_b_mu_conjugation(&d, 30, SEED, 1e-9)),
                ok_or_fail("yamabe_constant", 1e-10, ambient::sampled_yamabe_constant(&d, 20, SEED, 1e-10)),
                ok_or_fail(
                    "extension_independence",
                    1e-9,
                    ambient::sampled_extension_independence(&d, 30, SEED, 1e-9),
                ),
                ok_or_fail("ambient_compact", 1e-8, ambient::sampled_ambient_compact(&d, 20, SEED, 1e-8)),
                ok_or_fail("euler", 1e-10, ambient::sampled_euler(&d, 10, SEED, 1e-10)),
            ])
        }),
    ));

    results.push((
        "geometric identities, 100 samples each",
        timed(None, || {
            let tol = 1e-10;
            from_reports(&[
                ok_or_fail("cocycle", tol, geometry::check_cocycle(100, 1, 4, SEED, tol)),
                ok_or_fail("conformal_factor_jet", tol, geometry::check_conformal_factor(100, 1, 4, SEED, tol)),
                ok_or_fail("hyperplane_factor", tol, geometry::check_hyperplane_factor(100, 1, 4, SEED, tol)),
                ok_or_fail("chart_conformality", tol, geometry::check_chart_conformality(100, 1, 4, SEED, tol)),
                ok_or_fail("chart_distance", tol, geometry::check_chart_distance(100, 1, 4, SEED, tol)),
            ])
        }),
    ));

    results.push(("CLI contract", timed(None, criterion_cli)));

    let mut failures = 0;
    for (k, (name, o)) in results.iter().enumerate() {
        let tag = if o.passed { "PASS" } else { "FAIL" };
        if !o.passed {
            failures += 1;
        }
        println!("{tag} [{:>2}] {name} ({})", k + 1, o.detail);
    }
    println!("acceptance: {} of {} criteria passed", results.len() - failures, results.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
