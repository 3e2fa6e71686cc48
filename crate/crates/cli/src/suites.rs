//! The suites run by `verify-all`.
//!
//! Each suite records how many checks it ran, every failure (prefixed with the
//! operation at fault) and the operations it exercised. The summary asserts
//! that the union of exercised operations covers [`ALL_OPS`].

use std::collections::BTreeSet;

use econe_core::bipartitions::{enumerate_bipartitions, Partition};
use econe_core::enhanced_cone::{
    classify_all, classify_all_by_jordan_type, classify_all_exhaustive, cyclic_space, identify_orbit, jordan_type,
    orbit_dimension, random_invertible, representative, EnhancedPoint,
};
use econe_core::ff_linalg::{
    enumerate_between, gaussian_binomial, kernel, preimage, rational, rref, Elem, Field, Matrix, SubspaceBasis,
};
use econe_core::pi::{
    closure_pairs, field_independence_check, fit_pi, global_identity_check, interpolate, pi_degree_bound, pi_table,
};
use econe_core::resolution::{
    fibre_points, job_seed, resolution_datum, total_space_count, total_space_dimension, validate_resolution,
};
use econe_core::slice::{centralizer_basis, certify_slice, slice_data, trace_pairing, u_basis};
use econe_core::Bipartition;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::commands::{cmd_enumerate, cmd_probe_paving};
use crate::config::RunConfig;
use crate::logging::Logger;
use crate::CliError;

/// Every operation `verify-all` must exercise.
pub const ALL_OPS: &[&str] = &[
    "transpose",
    "add",
    "enumerate_bipartitions",
    "interleave",
    "closure_leq",
    "rref",
    "kernel",
    "preimage",
    "enumerate_between",
    "gaussian_binomial",
    "representative",
    "jordan_type",
    "cyclic_space",
    "identify_orbit",
    "classify_all",
    "orbit_dimension",
    "centralizer_basis",
    "u_basis",
    "trace_pairing",
    "verify_transversality",
    "verify_contraction",
    "resolution_datum",
    "fibre_points",
    "total_space_count",
    "validate_resolution",
    "total_space_dimension",
    "interpolate",
    "fit_pi",
    "pi_table",
    "field_independence_check",
    "global_identity_check",
    "cmd_enumerate",
    "cmd_verify_all",
    "cmd_probe_paving",
];

const MAX_LISTED_FAILURES: usize = 100;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub checks: u64,
    pub failure_count: usize,
    /// At most the first 100 failures.
    pub failures: Vec<String>,
    pub operations: Vec<String>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coverage {
    pub exercised: Vec<String>,
    pub missing: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub seed: u64,
    pub config: RunConfig,
    pub suites: Vec<SuiteReport>,
    pub coverage: Coverage,
    pub passed: bool,
}

impl VerifySummary {
    pub fn suite(&self, name: &str) -> Option<&SuiteReport> {
        self.suites.iter().find(|s| s.name == name)
    }
}

struct Suite {
    name: &'static str,
    checks: u64,
    failures: Vec<String>,
    ops: BTreeSet<&'static str>,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Self { name, checks: 0, failures: Vec::new(), ops: BTreeSet::new() }
    }

    fn ops(&mut self, ops: &[&'static str]) {
        self.ops.extend(ops);
    }

    fn check(&mut self, ok: bool, failure: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(failure());
        }
    }

    fn finish(self) -> SuiteReport {
        let failure_count = self.failures.len();
        SuiteReport {
            name: self.name.to_string(),
            checks: self.checks,
            failure_count,
            failures: self.failures.into_iter().take(MAX_LISTED_FAILURES).collect(),
            operations: self.ops.iter().map(ToString::to_string).collect(),
            passed: failure_count == 0,
        }
    }
}

fn field(q: u64) -> Result<Field, CliError> {
    Ok(Field::of_order(q)?)
}

/// Partition numbers by the pentagonal-number recurrence.
fn partition_numbers(max: usize) -> Vec<u64> {
    let mut p = vec![0i64; max + 1];
    p[0] = 1;
    for n in 1..=max {
        let mut acc = 0i64;
        for k in 1.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > n {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc += sign * p[n - g1];
            let g2 = k * (3 * k + 1) / 2;
            if g2 <= n {
                acc += sign * p[n - g2];
            }
        }
        p[n] = acc;
    }
    p.into_iter().map(|x| x as u64).collect()
}

fn bipartitions_suite(cfg: &RunConfig) -> Result<Suite, CliError> {
    let mut s = Suite::new("bipartitions");
    s.ops(&["enumerate_bipartitions", "transpose", "add", "interleave", "closure_leq"]);
    let p = partition_numbers(cfg.bipartitions_n);
    for n in 0..=cfg.bipartitions_n {
        let all = enumerate_bipartitions(n);
        let expected: u64 = (0..=n).map(|k| p[k] * p[n - k]).sum();
        s.check(all.len() as u64 == expected, || format!("enumerate_bipartitions: n={n} gave {} ≠ {expected}", all.len()));
        let distinct: BTreeSet<_> = all.iter().collect();
        s.check(distinct.len() == all.len(), || format!("enumerate_bipartitions: n={n} has repeats"));
        for b in &all {
            let l = b.lambda();
            s.check(b.n() == n && l == b.mu.add(&b.nu) && l.size() == n, || format!("add: {b}"));
            for part in [&b.mu, &b.nu, &l] {
                let t = part.transpose();
                s.check(t.transpose() == *part && t.size() == part.size(), || format!("transpose: {part}"));
            }
            let inter = b.interleave();
            s.check(inter.0.iter().sum::<usize>() == n, || format!("interleave: {b}"));
            s.check(b.closure_leq(b)?, || format!("closure_leq: {b} not reflexive"));
        }
        for a in &all {
            for b in &all {
                if a != b && a.closure_leq(b)? && b.closure_leq(a)? {
                    s.check(false, || format!("closure_leq: {a} and {b} not antisymmetric"));
                }
            }
        }
        if n <= 5 {
            let leq: Vec<Vec<bool>> =
                all.iter().map(|a| all.iter().map(|b| a.closure_leq(b).unwrap_or(false)).collect()).collect();
            let k = all.len();
            let transitive = (0..k).all(|i| (0..k).all(|j| !leq[i][j] || (0..k).all(|l| !leq[j][l] || leq[i][l])));
            s.check(transitive, || format!("closure_leq: not transitive at n={n}"));
        }
        if n >= 1 {
            let top = Bipartition::new(Partition::new(vec![n])?, Partition::empty());
            let bottom = Bipartition::new(Partition::empty(), Partition::new(vec![1; n])?);
            for b in &all {
                s.check(b.closure_leq(&top)? && bottom.closure_leq(b)?, || format!("closure_leq: {b} outside [{bottom}, {top}]"));
            }
        }
    }
    Ok(s)
}

fn random_matrix(rows: usize, cols: usize, f: &Field, rng: &mut impl Rng) -> Matrix {
    let q = f.q();
    let data = (0..rows * cols).map(|_| rng.gen_range(0..q) as Elem).collect();
    Matrix::from_vec(rows, cols, data).expect("shape")
}

fn random_vectors(count: usize, len: usize, f: &Field, rng: &mut impl Rng) -> Vec<Vec<Elem>> {
    (0..count).map(|_| (0..len).map(|_| rng.gen_range(0..f.q()) as Elem).collect()).collect()
}

fn ff_linalg_suite(cfg: &RunConfig) -> Result<Suite, CliError> {
    let mut s = Suite::new("ff_linalg");
    s.ops(&["rref", "kernel", "preimage", "enumerate_between", "gaussian_binomial"]);
    let mut rng = ChaCha8Rng::seed_from_u64(job_seed(cfg.seed, "suite/ff_linalg"));
    let fields = [2u64, 3, 4, 5, 9].map(Field::of_order).into_iter().collect::<Result<Vec<_>, _>>()?;
    for k in 0..cfg.linalg_samples {
        let f = &fields[k % fields.len()];
        let (rows, cols) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let m = random_matrix(rows, cols, f, &mut rng);
        let r = rref(&m, f);
        s.check(r.dim() == m.rank(f) && rref(&r.to_matrix(), f) == r, || format!("rref: sample {k}"));
        s.check((0..rows).all(|i| r.contains_vector(m.row(i), f)), || format!("rref: sample {k} loses rows"));
        let ker = kernel(&m, f);
        s.check(ker.dim() + r.dim() == cols, || format!("kernel: sample {k} violates rank-nullity"));
        let annihilated = ker.vectors().iter().all(|v| m.mul_vec(v, f).map(|w| w.iter().all(|&e| e == 0)).unwrap_or(false));
        s.check(annihilated, || format!("kernel: sample {k} not annihilated"));

        let target = SubspaceBasis::from_vectors(rows, random_vectors(rng.gen_range(0..=rows), rows, f, &mut rng), f);
        let pre = preimage(&m, &target, f)?;
        let image = SubspaceBasis::from_vectors(rows, m.transpose().row_vecs(), f);
        let meet = target.dim() + image.dim() - target.sum(&image, f).dim();
        s.check(pre.dim() == ker.dim() + meet && pre.contains(&ker, f), || format!("preimage: sample {k} wrong dimension"));
        let maps_in = pre.vectors().iter().all(|v| m.mul_vec(v, f).map(|w| target.contains_vector(&w, f)).unwrap_or(false));
        s.check(maps_in, || format!("preimage: sample {k} leaves target"));

        if f.q() <= 5 {
            let ambient = rng.gen_range(1..=4);
            let lower = SubspaceBasis::from_vectors(ambient, random_vectors(rng.gen_range(0..=1), ambient, f, &mut rng), f);
            let upper = lower.extended(&random_vectors(rng.gen_range(0..=ambient), ambient, f, &mut rng), f);
            for d in lower.dim()..=upper.dim() {
                let found: Vec<SubspaceBasis> = enumerate_between(&lower, &upper, d, f)?.collect();
                let expected = gaussian_binomial((upper.dim() - lower.dim()) as u64, (d - lower.dim()) as u64, f.q() as u64)?;
                let distinct: BTreeSet<_> = found.iter().collect();
                let nested = found.iter().all(|w| w.dim() == d && w.contains(&lower, f) && upper.contains(w, f));
                s.check(found.len() as u128 == expected && distinct.len() == found.len() && nested, || {
                    format!("enumerate_between: sample {k} d={d} found {} expected {expected}", found.len())
                });
            }
        }
    }
    for q in [2u64, 3, 4, 5] {
        // q-Pascal: [n, k] = [n−1, k−1] + q^k [n−1, k]
        let mut row = vec![1u128];
        for n in 1..=6u64 {
            let mut next = vec![1u128; n as usize + 1];
            for k in 1..n as usize {
                next[k] = row[k - 1] + (q as u128).pow(k as u32) * row[k];
            }
            for (k, &e) in next.iter().enumerate() {
                s.check(gaussian_binomial(n, k as u64, q)? == e, || format!("gaussian_binomial: [{n},{k}]_{q}"));
            }
            row = next;
        }
    }
    Ok(s)
}

/// Tangent space dimension at the integral representative, computed over `Q`
/// as the rank of `g ↦ (g v, g x − x g)`.
fn tangent_rank(b: &Bipartition) -> Result<usize, CliError> {
    let n = b.n();
    let (pt, _) = representative(b, &field(2)?);
    let v: Vec<i64> = pt.v.iter().map(|&e| e as i64).collect();
    let x: Vec<Vec<i64>> = (0..n).map(|r| (0..n).map(|c| pt.x.get(r, c) as i64).collect()).collect();
    let mut columns = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            // g = E_ij: g v = v_j e_i; [g, x] = E_ij x − x E_ij.
            let mut col = vec![0i64; n + n * n];
            col[i] += v[j];
            for c in 0..n {
                col[n + i * n + c] += x[j][c];
            }
            for r in 0..n {
                col[n + r * n + j] -= x[r][i];
            }
            columns.push(col);
        }
    }
    Ok(rational::rank(&columns))
}

fn enhanced_cone_suite(cfg: &RunConfig) -> Result<Suite, CliError> {
    let mut s = Suite::new("enhanced_cone");
    s.ops(&["representative", "jordan_type", "cyclic_space", "identify_orbit", "classify_all", "orbit_dimension"]);
    let small = [field(2)?, field(3)?];
    for n in 0..=cfg.roundtrip_n {
        let all = enumerate_bipartitions(n);
        for f in &small {
            for b in &all {
                let (pt, _) = representative(b, f);
                s.check(identify_orbit(&pt)? == *b, || format!("identify_orbit: {b} over F_{}", f.q()));
                s.check(jordan_type(&pt.x, f)? == b.lambda(), || format!("jordan_type: {b} over F_{}", f.q()));
                s.check(cyclic_space(&pt.x, &pt.v, f)?.dim() == b.mu.first(), || format!("cyclic_space: {b}"));
            }
        }
        let dims: Vec<(Bipartition, bool)> = all
            .par_iter()
            .map(|b| Ok((b.clone(), tangent_rank(b)? == orbit_dimension(b))))
            .collect::<Result<_, CliError>>()?;
        for (b, ok) in dims {
            s.check(ok, || format!("orbit_dimension: {b} disagrees with the tangent rank"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(job_seed(cfg.seed, "suite/enhanced_cone"));
    let sample_fields = [field(2)?, field(3)?, field(4)?, field(5)?];
    for n in 1..=cfg.invariance_n {
        let all = enumerate_bipartitions(n);
        for k in 0..cfg.invariance_samples {
            let b = &all[rng.gen_range(0..all.len())];
            let f = &sample_fields[rng.gen_range(0..sample_fields.len())];
            let (pt, _) = representative(b, f);
            let (g, g_inv) = random_invertible(n, f, &mut rng);
            let conj = pt.conjugate(&g, &g_inv)?;
            s.check(identify_orbit(&conj)? == *b, || format!("identify_orbit: conjugate {k} of {b} over F_{}", f.q()));
            let t = rng.gen_range(1..f.q()) as Elem;
            let scaled = EnhancedPoint::new(conj.v.clone(), conj.x.clone(), f.clone())?.scale(t);
            s.check(identify_orbit(&scaled)? == *b, || format!("identify_orbit: scaled sample {k} of {b} over F_{}", f.q()));
        }
    }
    for &(n, q) in &cfg.census {
        let f = field(q)?;
        let census = classify_all(n, &f, cfg.census_budget)?;
        let expected = q.checked_pow((n * n) as u32);
        s.check(Some(census.total()) == expected, || format!("classify_all: n={n} q={q} total {}", census.total()));
        let jordan = classify_all_by_jordan_type(n, &f, cfg.census_budget)?;
        if let Ok(exhaustive) = classify_all_exhaustive(n, &f, cfg.census_budget) {
            s.check(exhaustive.counts == jordan.counts, || format!("classify_all: methods disagree at n={n} q={q}"));
        }
        if (n, q) == (2, 2) {
            let mut sizes: Vec<u64> = census.counts.values().copied().collect();
            sizes.sort_unstable_by(|a, b| b.cmp(a));
            s.check(sizes == [6, 3, 3, 3, 1], || format!("classify_all: n=2 q=2 sizes {sizes:?}"));
        }
    }
    Ok(s)
}

fn slice_suite(cfg: &RunConfig) -> Result<Suite, CliError> {
    let mut s = Suite::new("slice");
    s.ops(&["centralizer_basis", "u_basis", "trace_pairing", "verify_transversality", "verify_contraction"]);
    for n in 1..=cfg.slice_n {
        let all = enumerate_bipartitions(n);
        let results: Vec<(Bipartition, bool, bool, bool)> = all
            .par_iter()
            .map(|b| {
                let ys = centralizer_basis(&b.lambda());
                let zs = u_basis(&b.mu, &b.nu);
                let pairing = trace_pairing(&ys, &zs)?;
                let identity = pairing.len() == zs.len()
                    && pairing.iter().enumerate().all(|(i, row)| row.iter().enumerate().all(|(j, &e)| e == (i == j) as i64));
                let cert = certify_slice(b)?;
                Ok((b.clone(), identity, cert.transversality.passed, cert.contraction.passed))
            })
            .collect::<Result<_, CliError>>()?;
        for (b, identity, transversal, contracting) in results {
            s.check(identity, || format!("trace_pairing: {b} not the identity"));
            s.check(transversal, || format!("verify_transversality: {b}"));
            s.check(contracting, || format!("verify_contraction: {b}"));
        }
    }
    Ok(s)
}

fn resolution_suite(cfg: &RunConfig) -> Result<Suite, CliError> {
    let mut s = Suite::new("resolution");
    s.ops(&["resolution_datum", "fibre_points", "total_space_count", "validate_resolution", "total_space_dimension"]);
    let fields = cfg.resolution_q.iter().map(|&q| field(q)).collect::<Result<Vec<_>, _>>()?;
    let opts = cfg.validate_options();
    for n in 1..=cfg.resolution_n {
        let all = enumerate_bipartitions(n);
        for b in &all {
            let d = resolution_datum(b);
            let mut c = d.increments();
            c.sort_unstable_by(|x, y| y.cmp(x));
            let shape_ok = c == b.lambda().transpose().parts()
                && d.dims[d.v_step] == b.mu.size()
                && d.len() == b.mu.first() + b.nu.first();
            s.check(shape_ok, || format!("resolution_datum: {b} has dims {:?} m={}", d.dims, d.v_step));
        }
        let reports = all
            .par_iter()
            .map(|b| validate_resolution(b, &fields, &opts))
            .collect::<Result<Vec<_>, _>>()?;
        for r in reports {
            for fv in &r.fields {
                for (clause, ok) in [("a", fv.clause_a), ("b", fv.clause_b), ("c", fv.clause_c), ("d", fv.clause_d)] {
                    s.check(ok, || format!("validate_resolution: {} q={} clause ({clause})", r.source, fv.q));
                }
            }
        }
    }
    let examples = [("2|", 2u64, 24u64), ("1|1", 2, 12), ("|1,1", 7, 1)];
    for (label, q, expected) in examples {
        let b: Bipartition = label.parse()?;
        let got = total_space_count(&resolution_datum(&b), q)?;
        s.check(got == expected, || format!("total_space_count: {b} q={q} gave {got}"));
    }
    let f = field(2)?;
    for n in 1..=cfg.resolution_n.min(2) {
        for src in enumerate_bipartitions(n) {
            for tgt in enumerate_bipartitions(n) {
                let (pt, _) = representative(&tgt, &f);
                let d = resolution_datum(&src);
                let listed = fibre_points(&d, &pt, true, cfg.node_budget)?;
                let counted = fibre_points(&d, &pt, false, cfg.node_budget)?;
                let n_flags = listed.flags.as_ref().map_or(0, Vec::len) as u64;
                s.check(n_flags == counted.count && listed.count == counted.count, || format!("fibre_points: {src} over {tgt}"));
            }
        }
    }
    Ok(s)
}

fn pi_suite(cfg: &RunConfig) -> Result<Suite, CliError> {
    let mut s = Suite::new("pi");
    s.ops(&["interpolate", "fit_pi", "pi_table", "field_independence_check", "global_identity_check"]);
    let examples: [(&[(u64, u64)], &[i64]); 3] = [
        (&[(2, 3), (3, 4), (5, 6)], &[1, 1]),
        (&[(2, 1), (3, 1), (5, 1)], &[1]),
        (&[(2, 7), (3, 13), (5, 31)], &[1, 1, 1]),
    ];
    for (samples, coeffs) in examples {
        s.check(interpolate(samples)?.coeffs() == coeffs, || format!("interpolate: {samples:?}"));
    }
    let fit = cfg.fit_config();
    for n in 1..=cfg.pi_n {
        let table = pi_table(n, &fit)?;
        for e in &table.entries {
            let c = &e.certificate;
            s.check(c.passed, || format!("pi_table: {} over {} certificate {c:?}", e.source, e.target));
            if e.source == e.target {
                s.check(e.coeffs.coeffs() == [1], || format!("pi_table: diagonal {} is {}", e.source, e.coeffs));
            }
        }
        for src in enumerate_bipartitions(n) {
            for &q in &[2u64, 3, 5] {
                let g = global_identity_check(&src, q, &table)?;
                s.check(g.holds, || format!("global_identity_check: {src} q={q}: {} ≠ {}", g.stratified_sum, g.total_space_count));
            }
        }
        for (src, tgt) in closure_pairs(n) {
            let (a, b) = if pi_degree_bound(&src, &tgt) <= 2 { &cfg.independence_small } else { &cfg.independence_large };
            let r = field_independence_check(&src, &tgt, a, b, &fit)?;
            s.check(r.identical, || format!("field_independence_check: {src} over {tgt}: {} vs {}", r.fit_a, r.fit_b));
        }
    }
    if cfg.pi_n >= 2 {
        for (src, tgt, coeffs) in [("1|1", "|1,1", &[1i64, 1][..]), ("1|1", "|2", &[1][..])] {
            let p = fit_pi(&src.parse()?, &tgt.parse()?, &fit)?;
            s.check(p.coeffs.coeffs() == coeffs && p.certificate.passed, || format!("fit_pi: {src} over {tgt} gave {}", p.coeffs));
        }
    }
    Ok(s)
}

fn dimension_suite(cfg: &RunConfig) -> Result<Suite, CliError> {
    let mut s = Suite::new("dimension_coherence");
    s.ops(&["total_space_dimension", "orbit_dimension"]);
    for n in 1..=cfg.slice_n {
        for b in enumerate_bipartitions(n) {
            let dim = orbit_dimension(&b);
            let z = total_space_dimension(&resolution_datum(&b));
            s.check(z == dim, || format!("total_space_dimension: {b} gives {z}, orbit has {dim}"));
            let data = slice_data(&b);
            let slice_dim = data.t_basis.len() + data.u_basis.len();
            s.check(slice_dim + dim == n * n + n, || format!("orbit_dimension: {b} slice {slice_dim} + orbit {dim} ≠ {}", n * n + n));
        }
    }
    Ok(s)
}

fn harness_suite(cfg: &RunConfig) -> Result<Suite, CliError> {
    let mut s = Suite::new("harness");
    s.ops(&["cmd_enumerate", "cmd_probe_paving"]);
    for (n, rows) in [(0, 1), (1, 2), (2, 5), (3, 10)] {
        let got = cmd_enumerate(n).count;
        s.check(got == rows, || format!("cmd_enumerate: n={n} gave {got} rows"));
    }
    let probe = cmd_probe_paving(cfg.probe_n, &cfg.fit_primes, cfg)?;
    for e in probe.entries.iter().filter(|e| e.finding.is_some()) {
        s.check(false, || format!("cmd_probe_paving: {} over {}: {}", e.source, e.target, e.finding.as_deref().unwrap_or("")));
    }
    s.checks += probe.entries.len() as u64;
    if cfg.probe_n >= 2 {
        let two = cmd_probe_paving(2, &cfg.fit_primes, cfg)?;
        let ok = two.entries.iter().all(|e| e.pi.as_ref().is_some_and(|p| p.is_zero() || p.coeffs() == [1]));
        s.check(ok, || "cmd_probe_paving: n=2 values outside {0, 1}".into());
    }
    s.check(cmd_probe_paving(cfg.probe_n, &[], cfg)?.entries.is_empty(), || "cmd_probe_paving: empty field list".into());
    Ok(s)
}

type SuiteFn = fn(&RunConfig) -> Result<Suite, CliError>;

/// Runs every suite and the coverage assertion.
pub fn verify_all(cfg: &RunConfig, log: &Logger) -> Result<VerifySummary, CliError> {
    cfg.validate()?;
    let suites: [(&str, SuiteFn); 8] = [
        ("bipartitions", bipartitions_suite),
        ("ff_linalg", ff_linalg_suite),
        ("enhanced_cone", enhanced_cone_suite),
        ("slice", slice_suite),
        ("resolution", resolution_suite),
        ("pi", pi_suite),
        ("dimension_coherence", dimension_suite),
        ("harness", harness_suite),
    ];
    let mut reports = Vec::new();
    let mut exercised: BTreeSet<&str> = BTreeSet::from(["cmd_verify_all"]);
    for (name, run) in suites {
        log.event("suite_start", json!({ "suite": name }));
        let report = match run(cfg) {
            Ok(suite) => {
                exercised.extend(suite.ops.iter().copied());
                suite.finish()
            }
            Err(CliError::Core(econe_core::Error::BudgetExceeded { budget })) => {
                return Err(CliError::Core(econe_core::Error::BudgetExceeded { budget }))
            }
            Err(e) => {
                let mut failed = Suite::new(name);
                failed.check(false, || format!("{name}: {e}"));
                failed.finish()
            }
        };
        log.event(
            "suite_done",
            json!({ "suite": name, "checks": report.checks, "failures": report.failure_count, "passed": report.passed }),
        );
        reports.push(report);
    }
    let missing: Vec<String> = ALL_OPS.iter().filter(|op| !exercised.contains(*op)).map(ToString::to_string).collect();
    let passed = reports.iter().all(|r| r.passed) && missing.is_empty();
    Ok(VerifySummary {
        seed: cfg.seed,
        config: cfg.clone(),
        suites: reports,
        coverage: Coverage { exercised: exercised.iter().map(ToString::to_string).collect(), missing },
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_number_oracle() {
        assert_eq!(partition_numbers(10), vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
    }

    #[test]
    fn tangent_rank_small() {
        assert_eq!(tangent_rank(&"1|1".parse().unwrap()).unwrap(), 3);
        assert_eq!(tangent_rank(&"|1,1".parse().unwrap()).unwrap(), 0);
    }

    #[test]
    fn smoke_config_passes_with_full_coverage() {
        let summary = verify_all(&RunConfig::default().capped(2), &Logger::new(false)).unwrap();
        assert!(summary.passed, "{:#?}", summary.suites.iter().filter(|s| !s.passed).collect::<Vec<_>>());
        assert!(summary.coverage.missing.is_empty());
        assert_eq!(summary.suites.len(), 8);
    }
}
