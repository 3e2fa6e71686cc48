//! Resolutions of orbit closures and their fibres over finite fields.
//!
//! For `(μ;ν)` the datum has increments `c = (μᵗ₁, …, μᵗ_{μ₁}, νᵗ₁, …, νᵗ_{ν₁})`,
//! dimensions `d_j = c₁ + … + c_j` and `v`-step `m = μ₁`. The total space is
//!
//! ```text
//! Z = {(v, x, W) : 0 = W₀ ⊆ W₁ ⊆ … ⊆ W_L = V, dim W_j = d_j, x W_j ⊆ W_{j−1}, v ∈ W_m}
//! ```
//!
//! and the fibre over `(v, x)` is the set of flags `W` with `(v, x, W) ∈ Z`.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bipartitions::{as_label, enumerate_bipartitions, Bipartition};
use crate::enhanced_cone::{
    classify_all_by_jordan_type, identify_orbit, random_invertible, representative, EnhancedPoint,
    DEFAULT_CENSUS_BUDGET,
};
use crate::error::{Error, Result};
use crate::ff_linalg::{enumerate_between, gaussian_binomial, preimage, Elem, Field, Matrix, SubspaceBasis};

/// Default cap on subspaces visited by one fibre enumeration.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolutionDatum {
    #[serde(with = "as_label")]
    pub source: Bipartition,
    /// `0 = d₀ ≤ d₁ ≤ … ≤ d_L = n`.
    pub dims: Vec<usize>,
    /// Index `m` with `v ∈ W_m`.
    pub v_step: usize,
}

/// Deliberate corruption of a datum, used to check that validation localizes faults.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DatumFault {
    /// `m ↦ m − 1`, wrapping `0 ↦ L`.
    ShiftVStep,
}

impl ResolutionDatum {
    pub fn n(&self) -> usize {
        *self.dims.last().unwrap_or(&0)
    }

    /// Number of steps `L`.
    pub fn len(&self) -> usize {
        self.dims.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `c_j = d_j − d_{j−1}`.
    pub fn increments(&self) -> Vec<usize> {
        self.dims.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn with_fault(mut self, fault: Option<DatumFault>) -> Self {
        if let Some(DatumFault::ShiftVStep) = fault {
            self.v_step = if self.v_step == 0 { self.len() } else { self.v_step - 1 };
        }
        self
    }

    /// `e₂(c) = Σ_{j<j'} c_j c_{j'}`.
    pub fn flag_variety_dimension(&self) -> usize {
        let c = self.increments();
        let total: usize = c.iter().sum();
        (total * total - c.iter().map(|x| x * x).sum::<usize>()) / 2
    }

    /// `Σ_j d_{j−1} c_j`, the dimension of the space of `x` compatible with a fixed flag.
    fn x_space_dimension(&self) -> usize {
        self.dims.windows(2).map(|w| w[0] * (w[1] - w[0])).sum()
    }
}

pub fn resolution_datum(b: &Bipartition) -> ResolutionDatum {
    let increments: Vec<usize> = b.mu.transpose().parts().iter().chain(b.nu.transpose().parts()).copied().collect();
    let mut dims = vec![0];
    for c in increments {
        dims.push(dims.last().unwrap() + c);
    }
    ResolutionDatum { source: b.clone(), dims, v_step: b.mu.first() }
}

/// `dim Z = e₂(c) + Σ_j d_{j−1} c_j + d_m`.
pub fn total_space_dimension(d: &ResolutionDatum) -> usize {
    d.flag_variety_dimension() + d.x_space_dimension() + d.dims[d.v_step]
}

/// `|Z(F_q)|`: the number of flags times `q^{Σ d_{j−1} c_j + d_m}`.
pub fn total_space_count(d: &ResolutionDatum, q: u64) -> Result<u64> {
    Field::of_order(q)?;
    let mut acc: u128 = 1;
    for w in d.dims.windows(2) {
        acc = acc.checked_mul(gaussian_binomial(w[1] as u64, w[0] as u64, q)?).ok_or(Error::Overflow("flag count"))?;
    }
    let e = (d.x_space_dimension() + d.dims[d.v_step]) as u32;
    let power = (q as u128).checked_pow(e).ok_or(Error::Overflow("total space count"))?;
    let total = acc.checked_mul(power).ok_or(Error::Overflow("total space count"))?;
    u64::try_from(total).map_err(|_| Error::Overflow("total space count"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FibreReport {
    pub datum: ResolutionDatum,
    /// Orbit of the point the fibre lies over.
    #[serde(with = "as_label")]
    pub target: Bipartition,
    pub q: u32,
    pub count: u64,
    pub nodes_visited: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flags: Option<Vec<Vec<SubspaceBasis>>>,
}

struct FibreSearch<'a> {
    f: &'a Field,
    x: &'a Matrix,
    dims: &'a [usize],
    /// Subspace every `W_j` must contain regardless of `W_{j−1}`:
    /// `im x^{L−j}` and, for `j ≤ m`, `x^{m−j} v`.
    forced: Vec<SubspaceBasis>,
    budget: u64,
    nodes: u64,
    flags: Option<Vec<Vec<SubspaceBasis>>>,
}

impl FibreSearch<'_> {
    fn visit(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded { budget: self.budget });
        }
        Ok(())
    }

    fn step(&mut self, j: usize, prev: &SubspaceBasis, path: &mut Vec<SubspaceBasis>) -> Result<u64> {
        let f = self.f;
        let last = self.dims.len() - 1;
        let d = self.dims[j];
        let upper = preimage(self.x, prev, f)?;
        let lower = prev.sum(&self.forced[j], f);
        if lower.dim() > d || upper.dim() < d || !upper.contains(&lower, f) {
            return Ok(0);
        }
        // Below the top step im x ⊆ lower, so W_L = V is automatic and the choices at
        // step L−1 are counted in closed form.
        if self.flags.is_none() && j + 1 == last {
            self.visit()?;
            let count = gaussian_binomial((upper.dim() - lower.dim()) as u64, (d - lower.dim()) as u64, f.q() as u64)?;
            return u64::try_from(count).map_err(|_| Error::Overflow("fibre count"));
        }
        let mut total = 0u64;
        for w in enumerate_between(&lower, &upper, d, f)? {
            self.visit()?;
            path.push(w.clone());
            if j == last {
                if let Some(flags) = self.flags.as_mut() {
                    flags.push(path.clone());
                }
                total += 1;
            } else {
                total += self.step(j + 1, &w, path)?;
            }
            path.pop();
        }
        Ok(total)
    }
}

fn column_space(m: &Matrix, f: &Field) -> SubspaceBasis {
    SubspaceBasis::from_vectors(m.rows(), m.transpose().row_vecs(), f)
}

/// Counts (and optionally lists) the flags in the fibre of `d` over `pt`.
pub fn fibre_points(d: &ResolutionDatum, pt: &EnhancedPoint, list: bool, budget: u64) -> Result<FibreReport> {
    let n = d.n();
    if pt.n() != n {
        return Err(Error::DimensionMismatch { expected: n, found: pt.n() });
    }
    let f = &pt.field;
    let target = identify_orbit(pt)?;
    let steps = d.len();
    let m = d.v_step;
    let mut forced = Vec::with_capacity(steps + 1);
    let mut x_power = Matrix::identity(n);
    let mut images = vec![SubspaceBasis::full(n)];
    for _ in 0..steps {
        x_power = x_power.mul(&pt.x, f)?;
        images.push(column_space(&x_power, f));
    }
    let mut v_orbit: Vec<Vec<Elem>> = vec![pt.v.clone()];
    for _ in 0..m {
        let next = pt.x.mul_vec(v_orbit.last().unwrap(), f)?;
        v_orbit.push(next);
    }
    for j in 0..=steps {
        let mut w = images[steps - j].clone();
        if j <= m {
            w = w.extended(&v_orbit[m - j..m - j + 1], f);
        }
        forced.push(w);
    }

    let mut search = FibreSearch {
        f,
        x: &pt.x,
        dims: &d.dims,
        forced,
        budget,
        nodes: 0,
        flags: list.then(Vec::new),
    };
    let zero = SubspaceBasis::zero(n);
    let count = if search.forced[0].dim() > 0 {
        0
    } else if steps == 0 {
        if let Some(flags) = search.flags.as_mut() {
            flags.push(vec![zero.clone()]);
        }
        1
    } else {
        let mut path = vec![zero.clone()];
        search.step(1, &zero, &mut path)?
    };
    Ok(FibreReport { datum: d.clone(), target, q: f.q(), count, nodes_visited: search.nodes, flags: search.flags })
}

/// Deterministic per-job seed derived from a run seed and a job label (FNV-1a, then splitmix64).
pub fn job_seed(seed: u64, label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in label.bytes() {
        h ^= byte as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    let mut z = seed ^ h;
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Fibre counts at `k` seeded random conjugates of `pt`.
pub fn conjugate_counts(d: &ResolutionDatum, pt: &EnhancedPoint, k: usize, seed: u64, budget: u64) -> Result<Vec<u64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..k)
        .map(|_| {
            let (g, g_inv) = random_invertible(pt.n(), &pt.field, &mut rng);
            Ok(fibre_points(d, &pt.conjugate(&g, &g_inv)?, false, budget)?.count)
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct ValidateOptions {
    pub seed: u64,
    pub conjugates: usize,
    pub node_budget: u64,
    pub census_budget: u64,
    pub fault: Option<DatumFault>,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        Self {
            seed: 0xC0FFEE,
            conjugates: 5,
            node_budget: DEFAULT_NODE_BUDGET,
            census_budget: DEFAULT_CENSUS_BUDGET,
            fault: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FieldValidation {
    pub q: u32,
    /// Fibre count over each orbit representative, keyed by `"mu|nu"`.
    pub fibre_counts: BTreeMap<String, u64>,
    pub own_count: u64,
    pub support: Vec<String>,
    pub closure_lower_set: Vec<String>,
    /// Targets whose conjugates gave a different count.
    pub conjugate_mismatches: Vec<String>,
    pub stratified_sum: u64,
    pub total_space_count: u64,
    /// Fibre over the own representative is a single point.
    pub clause_a: bool,
    /// Support of the fibre counts is the closure lower set.
    pub clause_b: bool,
    /// Counts are constant on sampled conjugates.
    pub clause_c: bool,
    /// `Σ census · fibre = |Z(F_q)|`.
    pub clause_d: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolutionReport {
    #[serde(with = "as_label")]
    pub source: Bipartition,
    pub datum: ResolutionDatum,
    pub seed: u64,
    pub fields: Vec<FieldValidation>,
    /// Failing clauses as `"q=<q>:<clause>"`.
    pub failures: Vec<String>,
    pub passed: bool,
}

pub fn validate_resolution(b: &Bipartition, fields: &[Field], opts: &ValidateOptions) -> Result<ResolutionReport> {
    let n = b.n();
    let datum = resolution_datum(b).with_fault(opts.fault);
    let targets = enumerate_bipartitions(n);
    let mut out = Vec::new();
    let mut failures = Vec::new();
    for f in fields {
        let q = f.q() as u64;
        let census = classify_all_by_jordan_type(n, f, opts.census_budget)?;
        let rows: Vec<(Bipartition, u64, bool)> = targets
            .par_iter()
            .map(|t| {
                let (pt, _) = representative(t, f);
                let count = fibre_points(&datum, &pt, false, opts.node_budget)?.count;
                let seed = job_seed(opts.seed, &format!("validate/{b}/{q}/{t}"));
                let conj = conjugate_counts(&datum, &pt, opts.conjugates, seed, opts.node_budget)?;
                Ok((t.clone(), count, conj.iter().all(|&c| c == count)))
            })
            .collect::<Result<_>>()?;
        let mut stratified: u64 = 0;
        for (t, count, _) in &rows {
            stratified = census
                .count(t)
                .checked_mul(*count)
                .and_then(|s| s.checked_add(stratified))
                .ok_or(Error::Overflow("stratified count"))?;
        }
        let support: Vec<String> = rows.iter().filter(|r| r.1 > 0).map(|r| r.0.to_string()).collect();
        let lower: Vec<String> = targets
            .iter()
            .filter(|t| t.closure_leq(b).unwrap_or(false))
            .map(ToString::to_string)
            .collect();
        let own_count = rows.iter().find(|r| &r.0 == b).map_or(0, |r| r.1);
        let total = total_space_count(&datum, q)?;
        let fv = FieldValidation {
            q: f.q(),
            fibre_counts: rows.iter().map(|r| (r.0.to_string(), r.1)).collect(),
            own_count,
            clause_a: own_count == 1,
            clause_b: support == lower,
            clause_c: rows.iter().all(|r| r.2),
            clause_d: stratified == total,
            conjugate_mismatches: rows.iter().filter(|r| !r.2).map(|r| r.0.to_string()).collect(),
            support,
            closure_lower_set: lower,
            stratified_sum: stratified,
            total_space_count: total,
        };
        for (name, ok) in [("a", fv.clause_a), ("b", fv.clause_b), ("c", fv.clause_c), ("d", fv.clause_d)] {
            if !ok {
                failures.push(format!("q={q}:{name}"));
            }
        }
        out.push(fv);
    }
    Ok(ResolutionReport {
        source: b.clone(),
        datum,
        seed: opts.seed,
        fields: out,
        passed: failures.is_empty(),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enhanced_cone::orbit_dimension;

    fn b(mu: &[usize], nu: &[usize]) -> Bipartition {
        Bipartition::from_parts(mu, nu).unwrap()
    }

    fn f(q: u64) -> Field {
        Field::of_order(q).unwrap()
    }

    #[test]
    fn datum_examples() {
        let d = resolution_datum(&b(&[1], &[1]));
        assert_eq!((d.dims.clone(), d.v_step), (vec![0, 1, 2], 1));
        let d = resolution_datum(&b(&[], &[1, 1]));
        assert_eq!((d.dims.clone(), d.v_step), (vec![0, 2], 0));
        let d = resolution_datum(&b(&[2], &[]));
        assert_eq!((d.dims.clone(), d.v_step), (vec![0, 1, 2], 2));
    }

    #[test]
    fn datum_invariants() {
        for n in 0..=6 {
            for bp in enumerate_bipartitions(n) {
                let d = resolution_datum(&bp);
                let mut c = d.increments();
                c.sort_unstable_by(|a, b| b.cmp(a));
                assert_eq!(c, bp.lambda().transpose().parts());
                assert_eq!(d.dims[d.v_step], bp.mu.size());
                assert_eq!(d.len(), bp.mu.first() + bp.nu.first());
                assert_eq!(total_space_dimension(&d), orbit_dimension(&bp), "{bp}");
            }
        }
    }

    #[test]
    fn fibre_examples() {
        let d = resolution_datum(&b(&[1], &[1]));
        let origin = EnhancedPoint::new(vec![0, 0], Matrix::zeros(2, 2), f(2)).unwrap();
        assert_eq!(fibre_points(&d, &origin, false, DEFAULT_NODE_BUDGET).unwrap().count, 3);
        for q in [2, 3, 5, 4] {
            let (pt, _) = representative(&b(&[1], &[1]), &f(q));
            assert_eq!(fibre_points(&d, &pt, false, DEFAULT_NODE_BUDGET).unwrap().count, 1);
        }
        let d = resolution_datum(&b(&[2], &[]));
        let (pt, _) = representative(&b(&[1, 1], &[]), &f(2));
        assert_eq!(fibre_points(&d, &pt, false, DEFAULT_NODE_BUDGET).unwrap().count, 3);
    }

    #[test]
    fn fibre_errors() {
        let d = resolution_datum(&b(&[1], &[1]));
        let (pt, _) = representative(&b(&[1], &[]), &f(2));
        assert!(matches!(fibre_points(&d, &pt, false, 10), Err(Error::DimensionMismatch { .. })));
        let d = resolution_datum(&b(&[], &[3]));
        let (pt, _) = representative(&b(&[], &[1, 1, 1]), &f(3));
        assert_eq!(fibre_points(&d, &pt, false, DEFAULT_NODE_BUDGET).unwrap().count, 52);
        assert_eq!(fibre_points(&d, &pt, true, 2), Err(Error::BudgetExceeded { budget: 2 }));
    }

    #[test]
    fn listing_matches_count_and_incidences() {
        for q in [2, 3] {
            let fld = f(q);
            for src in enumerate_bipartitions(3) {
                let d = resolution_datum(&src);
                for tgt in enumerate_bipartitions(3) {
                    let (pt, _) = representative(&tgt, &fld);
                    let counted = fibre_points(&d, &pt, false, DEFAULT_NODE_BUDGET).unwrap();
                    let listed = fibre_points(&d, &pt, true, DEFAULT_NODE_BUDGET).unwrap();
                    let flags = listed.flags.unwrap();
                    assert_eq!(flags.len() as u64, counted.count);
                    assert_eq!(listed.count, counted.count);
                    let distinct: std::collections::HashSet<_> = flags.iter().collect();
                    assert_eq!(distinct.len(), flags.len());
                    for flag in &flags {
                        assert_eq!(flag.len(), d.dims.len());
                        for (j, w) in flag.iter().enumerate() {
                            assert_eq!(w.dim(), d.dims[j]);
                            if j > 0 {
                                assert!(w.contains(&flag[j - 1], &fld));
                                for u in w.vectors() {
                                    assert!(flag[j - 1].contains_vector(&pt.x.mul_vec(u, &fld).unwrap(), &fld));
                                }
                            }
                        }
                        assert!(flag[d.v_step].contains_vector(&pt.v, &fld));
                    }
                }
            }
        }
    }

    #[test]
    fn total_space_examples() {
        assert_eq!(total_space_count(&resolution_datum(&b(&[], &[1, 1])), 7).unwrap(), 1);
        assert_eq!(total_space_count(&resolution_datum(&b(&[2], &[])), 2).unwrap(), 24);
        assert_eq!(total_space_count(&resolution_datum(&b(&[1], &[1])), 2).unwrap(), 12);
        assert!(total_space_count(&resolution_datum(&b(&[1], &[1])), 6).is_err());
        assert_eq!(total_space_dimension(&resolution_datum(&b(&[], &[1, 1]))), 0);
        assert_eq!(total_space_dimension(&resolution_datum(&b(&[2], &[]))), 4);
        assert_eq!(total_space_dimension(&resolution_datum(&b(&[1], &[1]))), 3);
    }

    /// |Z(F_q)| by enumerating every (v, x) and counting fibres.
    #[test]
    fn total_space_count_matches_enumeration() {
        for q in [2u64, 3] {
            let fld = f(q);
            for src in enumerate_bipartitions(2) {
                let d = resolution_datum(&src);
                let mut total = 0;
                for idx in 0..q.pow(6) {
                    let mut rest = idx;
                    let mut digits = (0..6).map(|_| { let e = (rest % q) as Elem; rest /= q; e });
                    let v: Vec<Elem> = digits.by_ref().take(2).collect();
                    let x = Matrix::from_vec(2, 2, digits.collect()).unwrap();
                    if crate::enhanced_cone::jordan_type(&x, &fld).is_err() {
                        continue;
                    }
                    let pt = EnhancedPoint::new(v, x, fld.clone()).unwrap();
                    total += fibre_points(&d, &pt, false, DEFAULT_NODE_BUDGET).unwrap().count;
                }
                assert_eq!(total, total_space_count(&d, q).unwrap(), "{src} q={q}");
            }
        }
    }

    #[test]
    fn validation_examples() {
        let opts = ValidateOptions::default();
        let r = validate_resolution(&b(&[2], &[]), &[f(2)], &opts).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.fields[0].stratified_sum, 24);
        let r = validate_resolution(&b(&[1], &[1]), &[f(2)], &opts).unwrap();
        assert!(r.passed);
        let expected: Vec<String> = ["1,1|", "1|1", "|2", "|1,1"].iter().map(|s| s.parse::<Bipartition>().unwrap().to_string()).collect();
        let mut support = r.fields[0].support.clone();
        support.sort();
        let mut expected_sorted = expected;
        expected_sorted.sort();
        assert_eq!(support, expected_sorted);
        assert_eq!(r.fields[0].stratified_sum, 12);
        let r = validate_resolution(&b(&[], &[1, 1]), &[f(2), f(3)], &opts).unwrap();
        assert!(r.passed);
        assert_eq!(r.fields[0].support, vec!["|1,1".to_string()]);
    }

    #[test]
    fn validation_up_to_three() {
        let fields = [f(2), f(3)];
        for n in 1..=3 {
            for bp in enumerate_bipartitions(n) {
                let r = validate_resolution(&bp, &fields, &ValidateOptions::default()).unwrap();
                assert!(r.passed, "{bp}: {:?}", r.failures);
            }
        }
    }

    #[test]
    fn shifted_v_step_is_caught() {
        let opts = ValidateOptions { fault: Some(DatumFault::ShiftVStep), ..Default::default() };
        let r = validate_resolution(&b(&[1], &[1]), &[f(2)], &opts).unwrap();
        assert!(!r.passed);
        assert!(r.failures.contains(&"q=2:b".to_string()));
    }

    #[test]
    fn scaling_invariance() {
        for q in [3u64, 5] {
            let fld = f(q);
            for src in enumerate_bipartitions(3) {
                let d = resolution_datum(&src);
                for tgt in enumerate_bipartitions(3) {
                    let (pt, _) = representative(&tgt, &fld);
                    let base = fibre_points(&d, &pt, false, DEFAULT_NODE_BUDGET).unwrap().count;
                    for t in fld.units() {
                        assert_eq!(fibre_points(&d, &pt.scale(t), false, DEFAULT_NODE_BUDGET).unwrap().count, base);
                    }
                }
            }
        }
    }

    #[test]
    fn job_seeds_differ() {
        assert_ne!(job_seed(1, "a"), job_seed(1, "b"));
        assert_eq!(job_seed(7, "x"), job_seed(7, "x"));
    }
}
