//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
//!
//! Run with `cargo test -p econe --test acceptance`. Set `ECONE_SLOW=1` to add
//! the optional census at n = 4, q = 2.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use econe_core::bipartitions::enumerate_bipartitions;
use econe_core::enhanced_cone::{
    classify_all, identify_orbit, orbit_dimension, random_invertible, representative, DEFAULT_CENSUS_BUDGET,
};
use econe_core::ff_linalg::Elem;
use econe_core::pi::{closure_pairs, field_independence_check, pi_degree_bound, pi_table, FitConfig};
use econe_core::resolution::{job_seed, resolution_datum, total_space_dimension, validate_resolution, ValidateOptions};
use econe_core::slice::{certify_slice, slice_data};
use econe_core::{Bipartition, Field};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const SEED: u64 = 0xC0FFEE;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn field(q: u64) -> Field {
    Field::of_order(q).expect("supported field")
}

fn b(s: &str) -> Bipartition {
    s.parse().expect("bipartition label")
}

fn upto(n: usize) -> Vec<Bipartition> {
    (1..=n).flat_map(enumerate_bipartitions).collect()
}

fn slice_certification() -> Outcome {
    let all = upto(6);
    let failed: Vec<String> = all
        .par_iter()
        .filter_map(|bp| match certify_slice(bp) {
            Ok(c) => {
                let t = &c.transversality;
                let ok = c.passed
                    && t.trace_pairing_is_identity
                    && t.vector_complement
                    && t.full_complement
                    && c.contraction.t_positive
                    && c.contraction.u_positive;
                (!ok).then(|| bp.to_string())
            }
            Err(e) => Some(format!("{bp}: {e}")),
        })
        .collect();
    outcome(failed.is_empty(), format!("{} bi-partitions with 1 ≤ n ≤ 6, failures {failed:?}", all.len()))
}

fn round_trip() -> Outcome {
    let mut failures = Vec::new();
    let mut checked = 0;
    for q in [2, 3] {
        let f = field(q);
        for bp in (0..=6).flat_map(enumerate_bipartitions) {
            checked += 1;
            let (pt, _) = representative(&bp, &f);
            if identify_orbit(&pt).ok() != Some(bp.clone()) {
                failures.push(format!("{bp} over F_{q}"));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(job_seed(SEED, "acceptance/invariance"));
    let fields = [field(2), field(3), field(4), field(5)];
    let mut samples = 0;
    for n in 1..=4 {
        let all = enumerate_bipartitions(n);
        for k in 0..20 {
            let bp = &all[rng.gen_range(0..all.len())];
            let f = &fields[rng.gen_range(0..fields.len())];
            let (pt, _) = representative(bp, f);
            let (g, g_inv) = random_invertible(n, f, &mut rng);
            let conj = pt.conjugate(&g, &g_inv).expect("conjugate");
            let t = rng.gen_range(1..f.q()) as Elem;
            samples += 2;
            if identify_orbit(&conj).ok() != Some(bp.clone()) {
                failures.push(format!("conjugate sample {k} of {bp}"));
            }
            if identify_orbit(&pt.scale(t)).ok() != Some(bp.clone()) {
                failures.push(format!("scaled sample {k} of {bp}"));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!("{checked} representatives over F_2, F_3 and {samples} seeded conjugation/scaling samples, failures {failures:?}"),
    )
}

fn census_totals() -> Outcome {
    let mut pairs = vec![(2usize, 2u64), (2, 3), (3, 2), (3, 3)];
    if std::env::var_os("ECONE_SLOW").is_some() {
        pairs.push((4, 2));
    }
    let mut failures = Vec::new();
    for &(n, q) in &pairs {
        match classify_all(n, &field(q), DEFAULT_CENSUS_BUDGET) {
            Ok(c) if c.total() == q.pow((n * n) as u32) => {}
            Ok(c) => failures.push(format!("n={n} q={q} total {}", c.total())),
            Err(e) => failures.push(format!("n={n} q={q}: {e}")),
        }
    }
    let c = classify_all(2, &field(2), DEFAULT_CENSUS_BUDGET).expect("census");
    let sizes: Vec<u64> = ["2|", "1|1", "1,1|", "|2", "|1,1"].iter().map(|s| c.count(&b(s))).collect();
    if sizes != [6, 3, 3, 3, 1] {
        failures.push(format!("n=2 q=2 sizes {sizes:?}"));
    }
    outcome(failures.is_empty(), format!("(n,q) ∈ {pairs:?}, n=2 q=2 sizes {sizes:?}, failures {failures:?}"))
}

fn resolution_validation() -> Outcome {
    let fields = [field(2), field(3), field(5)];
    let opts = ValidateOptions { seed: SEED, conjugates: 5, ..Default::default() };
    let all = upto(4);
    let reports: Vec<_> = all.par_iter().map(|bp| (bp.clone(), validate_resolution(bp, &fields, &opts))).collect();
    let mut failures = Vec::new();
    let mut sums = Vec::new();
    for (bp, r) in &reports {
        match r {
            Ok(r) if r.passed => {
                if bp == &b("2|") || bp == &b("1|1") {
                    sums.push(format!("{bp}: {}", r.fields[0].stratified_sum));
                }
            }
            Ok(r) => failures.push(format!("{bp}: {:?}", r.failures)),
            Err(e) => failures.push(format!("{bp}: {e}")),
        }
    }
    let examples_ok = sums == ["1|1: 12", "2|: 24"];
    outcome(
        failures.is_empty() && examples_ok,
        format!("{} sources, q ∈ {{2,3,5}}, clauses (a)-(d), q=2 sums [{}], failures {failures:?}", all.len(), sums.join(", ")),
    )
}

fn pi_tables() -> Outcome {
    let cfg = FitConfig { seed: SEED, ..Default::default() };
    let mut failures = Vec::new();
    let mut entries = 0;
    let mut special = Vec::new();
    for n in 1..=3 {
        let table = match pi_table(n, &cfg) {
            Ok(t) => t,
            Err(e) => {
                failures.push(format!("n={n}: {e}"));
                continue;
            }
        };
        entries += table.entries.len();
        for e in &table.entries {
            let c = &e.certificate;
            if !(c.passed && c.natural_coefficients && c.holdout_exact && c.degree_within_bound) {
                failures.push(format!("{} over {}", e.source, e.target));
            }
            if e.source == e.target && e.coeffs.coeffs() != [1] {
                failures.push(format!("diagonal {} = {}", e.source, e.coeffs));
            }
            if c.fit_q.iter().any(|q| ![2, 3, 5, 7, 11, 13].contains(q)) || c.holdout_q != [17, 4, 9] {
                failures.push(format!("{} over {} sampled {:?} / {:?}", e.source, e.target, c.fit_q, c.holdout_q));
            }
        }
        if n == 2 {
            special.push(table.get(&b("1|1"), &b("|1,1")).to_string());
            special.push(table.get(&b("1|1"), &b("|2")).to_string());
        }
    }
    let special_ok = special == ["t+1", "1"];
    outcome(
        failures.is_empty() && special_ok,
        format!("{entries} certified entries for n ≤ 3, Π(1|1 → |1,1) = {}, Π(1|1 → |2) = {}, failures {failures:?}",
            special.first().map_or("?", String::as_str), special.get(1).map_or("?", String::as_str)),
    )
}

fn field_independence() -> Outcome {
    let cfg = FitConfig { seed: SEED, ..Default::default() };
    let small: (&[u64], &[u64]) = (&[2, 3, 5], &[7, 11, 13]);
    let large: (&[u64], &[u64]) = (&[2, 3, 5, 7, 11, 13], &[17, 19, 23, 29, 31, 37]);
    let pairs: Vec<_> = (1..=3).flat_map(closure_pairs).collect();
    let results: Vec<(String, bool, bool)> = pairs
        .par_iter()
        .map(|(s, t)| {
            let low = pi_degree_bound(s, t) <= 2;
            let (a, bset) = if low { small } else { large };
            let ok = field_independence_check(s, t, a, bset, &cfg).map(|r| r.identical).unwrap_or(false);
            (format!("{s} over {t}"), low, ok)
        })
        .collect();
    let failures: Vec<&str> = results.iter().filter(|r| !r.2).map(|r| r.0.as_str()).collect();
    let low = results.iter().filter(|r| r.1).count();
    outcome(
        failures.is_empty(),
        format!("{} pairs: {low} on {{2,3,5}} vs {{7,11,13}}, {} on disjoint six-prime sets, failures {failures:?}",
            results.len(), results.len() - low),
    )
}

fn dimension_coherence() -> Outcome {
    let all = upto(6);
    let failures: Vec<String> = all
        .iter()
        .filter(|bp| {
            let n = bp.n();
            let dim = orbit_dimension(bp);
            let s = slice_data(bp);
            total_space_dimension(&resolution_datum(bp)) != dim || s.t_basis.len() + s.u_basis.len() + dim != n * n + n
        })
        .map(ToString::to_string)
        .collect();
    outcome(failures.is_empty(), format!("{} bi-partitions with 1 ≤ n ≤ 6, failures {failures:?}", all.len()))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().expect("tempdir");
    let run = |name: &str| -> Option<Vec<u8>> {
        let out = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_econe"))
            .args(["verify-all", "--quiet", "--seed", "0xC0FFEE", "--out"])
            .arg(&out)
            .env("ECONE_CACHE_DIR", dir.path().join("cache"))
            .status()
            .ok()?;
        status.success().then(|| std::fs::read(out).ok()).flatten()
    };
    match (run("first.json"), run("second.json")) {
        (Some(a), Some(b)) => outcome(a == b, format!("two verify-all runs, {} and {} bytes, identical: {}", a.len(), b.len(), a == b)),
        _ => outcome(false, "verify-all did not complete successfully"),
    }
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome, Duration);
    let criteria: [Criterion; 8] = [
        ("slice certification", slice_certification, Duration::from_secs(120)),
        ("round-trip classification", round_trip, Duration::from_secs(60)),
        ("census totals", census_totals, Duration::from_secs(60)),
        ("resolution validation", resolution_validation, Duration::from_secs(600)),
        ("fibre-count polynomial tables", pi_tables, Duration::from_secs(900)),
        ("field independence", field_independence, Duration::from_secs(900)),
        ("dimension coherence", dimension_coherence, Duration::from_secs(60)),
        ("determinism of verify-all", determinism, Duration::from_secs(600)),
    ];
    let mut failed = BTreeSet::new();
    for (k, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let elapsed = start.elapsed();
        let ok = o.ok && elapsed <= *limit;
        if !ok {
            failed.insert(k + 1);
        }
        println!(
            "{} criterion {}: {name} ({:.2}s, limit {}s): {}",
            if ok { "PASS" } else { "FAIL" },
            k + 1,
            elapsed.as_secs_f64(),
            limit.as_secs(),
            o.detail
        );
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", criteria.len());
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
