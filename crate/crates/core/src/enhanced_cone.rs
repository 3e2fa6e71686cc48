//! Orbits of `GL(V)` on the enhanced nilpotent cone `V × N`.
//!
//! Orbits are labelled by bi-partitions `(μ;ν)`. A point of `O_{μ;ν}` has a
//! normal basis `{v_ij}` with `x v_ij = v_{i,j-1}` and `v = Σ_i v_{i,μ_i}`, where
//! `λ = μ + ν` is the Jordan type of `x`.
//!
//! Identification is by invariants: `λ`, the cyclic space `W = F[x]v`, and the
//! Jordan type `κ` of `x` on `V/W`, which equals `(μ₂, μ₃, …) + ν`.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::bipartitions::{enumerate_bipartitions, Bipartition, Partition};
use crate::error::{Error, Result};
use crate::ff_linalg::{kernel, Elem, Field, Matrix, MatrixDoc, SubspaceBasis};

/// Default cap on the number of points a census may visit.
pub const DEFAULT_CENSUS_BUDGET: u64 = 100_000_000;

/// Coordinates of a normal basis: `(i, j) ↦ index` with rows `i = 1..ℓ(λ)` outer
/// and `j = 1..λ_i` inner, both 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalFrame {
    lambda: Partition,
    offsets: Vec<usize>,
}

impl NormalFrame {
    pub fn new(lambda: Partition) -> Self {
        let offsets = lambda
            .parts()
            .iter()
            .scan(0, |acc, &p| {
                let start = *acc;
                *acc += p;
                Some(start)
            })
            .collect();
        Self { lambda, offsets }
    }

    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }

    pub fn dim(&self) -> usize {
        self.lambda.size()
    }

    /// Index of `v_ij` (1-based `i`, `j`).
    pub fn index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i >= 1 && j >= 1 && j <= self.lambda.part(i - 1));
        self.offsets[i - 1] + j - 1
    }

    /// All `(i, j)` in frame order.
    pub fn coords(&self) -> Vec<(usize, usize)> {
        self.lambda
            .parts()
            .iter()
            .enumerate()
            .flat_map(|(i, &len)| (1..=len).map(move |j| (i + 1, j)))
            .collect()
    }

    /// The shift `v_ij ↦ v_{i,j-1}` as a 0/1 matrix.
    pub fn nilpotent(&self) -> Matrix {
        let mut x = Matrix::zeros(self.dim(), self.dim());
        for (i, j) in self.coords() {
            if j > 1 {
                x.set(self.index(i, j - 1), self.index(i, j), 1);
            }
        }
        x
    }
}

/// A point `(v, x)` of `V × N` over a finite field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnhancedPoint {
    pub v: Vec<Elem>,
    pub x: Matrix,
    pub field: Field,
}

impl EnhancedPoint {
    pub fn new(v: Vec<Elem>, x: Matrix, field: Field) -> Result<Self> {
        if !x.is_square() || x.rows() != v.len() {
            return Err(Error::DimensionMismatch { expected: v.len(), found: x.rows() });
        }
        if v.iter().any(|&e| e as u32 >= field.q()) {
            return Err(Error::InvalidArgument("vector entry outside the field".into()));
        }
        Ok(Self { v, x, field })
    }

    pub fn n(&self) -> usize {
        self.v.len()
    }

    /// `(g v, g x g⁻¹)`.
    pub fn conjugate(&self, g: &Matrix, g_inv: &Matrix) -> Result<Self> {
        let f = &self.field;
        Ok(Self { v: g.mul_vec(&self.v, f)?, x: g.mul(&self.x, f)?.mul(g_inv, f)?, field: f.clone() })
    }

    /// `(t v, t x)`.
    pub fn scale(&self, t: Elem) -> Self {
        let f = &self.field;
        Self { v: self.v.iter().map(|&e| f.mul(t, e)).collect(), x: self.x.scale(t, f), field: f.clone() }
    }

    pub fn to_doc(&self) -> PointDoc {
        PointDoc { q: self.field.q(), v: self.v.iter().map(|&e| e as u32).collect(), x: self.x.to_doc(&self.field) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct PointDoc {
    pub q: u32,
    pub v: Vec<u32>,
    pub x: MatrixDoc,
}

impl PointDoc {
    pub fn into_point(self) -> Result<EnhancedPoint> {
        let (field, x) = self.x.into_matrix()?;
        if field.q() != self.q {
            return Err(Error::InvalidField(format!("point declares q={} but its matrix is over q={}", self.q, field.q())));
        }
        let v = self
            .v
            .iter()
            .map(|&e| if e < field.q() { Ok(e as Elem) } else { Err(Error::InvalidField(format!("{e} is not an element of F_{}", field.q()))) })
            .collect::<Result<Vec<_>>>()?;
        EnhancedPoint::new(v, x, field)
    }
}

/// Normal-form representative of `O_b` and its frame. The same 0/1 data is used over every field.
pub fn representative(b: &Bipartition, field: &Field) -> (EnhancedPoint, NormalFrame) {
    let frame = NormalFrame::new(b.lambda());
    let mut v = vec![0; frame.dim()];
    for (i, &m) in b.mu.parts().iter().enumerate() {
        v[frame.index(i + 1, m)] = 1;
    }
    let x = frame.nilpotent();
    (EnhancedPoint { v, x, field: field.clone() }, frame)
}

/// Jordan type of a nilpotent matrix from the kernel dimensions of its powers.
pub fn jordan_type(x: &Matrix, f: &Field) -> Result<Partition> {
    if !x.is_square() {
        return Err(Error::DimensionMismatch { expected: x.rows(), found: x.cols() });
    }
    let n = x.rows();
    let mut power = Matrix::identity(n);
    let mut prev = 0;
    let mut columns = Vec::new();
    for _ in 0..n {
        power = power.mul(x, f)?;
        let d = kernel(&power, f).dim();
        if d == prev {
            break;
        }
        columns.push(d - prev);
        prev = d;
    }
    if prev != n {
        return Err(Error::NotNilpotent);
    }
    Ok(Partition::new(columns)?.transpose())
}

/// `span{v, xv, x²v, …}`.
pub fn cyclic_space(x: &Matrix, v: &[Elem], f: &Field) -> Result<SubspaceBasis> {
    let n = v.len();
    let mut gens = Vec::new();
    let mut cur = v.to_vec();
    while cur.iter().any(|&e| e != 0) && gens.len() < n {
        gens.push(cur.clone());
        cur = x.mul_vec(&cur, f)?;
    }
    Ok(SubspaceBasis::from_vectors(n, gens, f))
}

/// Matrix of the endomorphism induced by `x` on `V/W`, in the basis of
/// coordinate vectors at the non-pivot columns of `W`.
pub fn induced_on_quotient(x: &Matrix, w: &SubspaceBasis, f: &Field) -> Matrix {
    let free: Vec<usize> = (0..x.cols()).filter(|c| !w.pivots().contains(c)).collect();
    let mut out = Matrix::zeros(free.len(), free.len());
    for (col, &c) in free.iter().enumerate() {
        let image = w.reduce(&x.column(c), f);
        for (row, &r) in free.iter().enumerate() {
            out.set(row, col, image[r]);
        }
    }
    out
}

fn classify_with_lambda(lambda: &Partition, x: &Matrix, v: &[Elem], f: &Field) -> Result<Bipartition> {
    let w = cyclic_space(x, v, f)?;
    let kappa = jordan_type(&induced_on_quotient(x, &w, f), f)?;
    let len = lambda.len();
    let mut mu = vec![0usize; len];
    let mut acc: i64 = 0;
    for i in (0..len).rev() {
        acc += lambda.part(i) as i64 - kappa.part(i) as i64;
        if acc < 0 {
            return Err(Error::Classification(format!("negative μ part from λ={lambda}, κ={kappa}")));
        }
        mu[i] = acc as usize;
    }
    if kappa.len() > len {
        return Err(Error::Classification(format!("κ={kappa} longer than λ={lambda}")));
    }
    let mu = Partition::new(mu).map_err(|e| Error::Classification(e.to_string()))?;
    if mu.first() != w.dim() {
        return Err(Error::Classification(format!("μ₁={} but dim F[x]v={}", mu.first(), w.dim())));
    }
    let nu: Vec<i64> = (0..len).map(|i| lambda.part(i) as i64 - mu.part(i) as i64).collect();
    if nu.iter().any(|&p| p < 0) {
        return Err(Error::Classification(format!("ν negative for λ={lambda}, μ={mu}")));
    }
    let nu = Partition::new(nu.into_iter().map(|p| p as usize).collect())
        .map_err(|e| Error::Classification(e.to_string()))?;
    Ok(Bipartition::new(mu, nu))
}

/// The bi-partition labelling the orbit of `pt`.
pub fn identify_orbit(pt: &EnhancedPoint) -> Result<Bipartition> {
    let lambda = jordan_type(&pt.x, &pt.field)?;
    classify_with_lambda(&lambda, &pt.x, &pt.v, &pt.field)
}

/// `Σ_{i,j} min(λ_i, λ_j)`, the dimension of the centralizer of a nilpotent of type `λ`.
pub fn centralizer_dimension(lambda: &Partition) -> usize {
    let p = lambda.parts();
    p.iter().map(|&a| p.iter().map(|&b| a.min(b)).sum::<usize>()).sum()
}

/// `dim O_b = n² + n − dim E^x − |ν|`.
pub fn orbit_dimension(b: &Bipartition) -> usize {
    let n = b.n();
    n * n + n - centralizer_dimension(&b.lambda()) - b.nu.size()
}

fn checked_pow(q: u64, e: usize) -> Result<u64> {
    q.checked_pow(e as u32).ok_or(Error::Overflow("power of q"))
}

/// `|GL_n(F_q)|`.
pub fn gl_order(n: usize, q: u64) -> Result<u64> {
    let qn = checked_pow(q, n)?;
    (0..n).try_fold(1u64, |acc, i| acc.checked_mul(qn - checked_pow(q, i)?).ok_or(Error::Overflow("|GL_n|")))
}

/// Order of the centralizer in `GL_n(F_q)` of a nilpotent of Jordan type `λ`:
/// `q^{Σ (λᵗ_i)² − Σ m_i²} · Π |GL_{m_i}(F_q)|` with `m_i` the part multiplicities.
pub fn centralizer_order(lambda: &Partition, q: u64) -> Result<u64> {
    let sq: usize = lambda.transpose().parts().iter().map(|c| c * c).sum();
    let mults = lambda.multiplicities();
    let msq: usize = mults.iter().map(|(_, m)| m * m).sum();
    mults.iter().try_fold(checked_pow(q, sq - msq)?, |acc, &(_, m)| {
        acc.checked_mul(gl_order(m, q)?).ok_or(Error::Overflow("centralizer order"))
    })
}

/// Point counts of every orbit in `V × N` over one field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitCensus {
    pub n: usize,
    pub q: u64,
    pub method: CensusMethod,
    pub counts: BTreeMap<Bipartition, u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CensusMethod {
    /// Every matrix, keeping the nilpotent ones.
    Exhaustive,
    /// One nilpotent per Jordan type, weighted by conjugacy class size.
    ByJordanType,
}

impl OrbitCensus {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn count(&self, b: &Bipartition) -> u64 {
        self.counts.get(b).copied().unwrap_or(0)
    }

    /// Census with every bi-partition of `n` present, in enumeration order.
    fn complete(n: usize, q: u64, method: CensusMethod, found: BTreeMap<Bipartition, u64>) -> Self {
        let mut counts: BTreeMap<Bipartition, u64> = enumerate_bipartitions(n).into_iter().map(|b| (b, 0)).collect();
        for (b, c) in found {
            *counts.entry(b).or_default() += c;
        }
        Self { n, q, method, counts }
    }
}

impl Serialize for OrbitCensus {
    /// Counts are keyed by `"mu|nu"` strings.
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let keyed: BTreeMap<String, u64> = self.counts.iter().map(|(b, &c)| (b.to_string(), c)).collect();
        let mut s = serializer.serialize_struct("OrbitCensus", 5)?;
        s.serialize_field("n", &self.n)?;
        s.serialize_field("q", &self.q)?;
        s.serialize_field("method", &self.method)?;
        s.serialize_field("total", &self.total())?;
        s.serialize_field("counts", &keyed)?;
        s.end()
    }
}

/// Counts of `v ∈ V` by orbit of `(v, x)` for a fixed nilpotent `x` of type `lambda`.
fn classify_vectors(lambda: &Partition, x: &Matrix, f: &Field) -> Result<BTreeMap<Bipartition, u64>> {
    let n = x.rows();
    let q = f.q() as u64;
    let total = checked_pow(q, n)?;
    let mut counts = BTreeMap::new();
    let mut v = vec![0 as Elem; n];
    for idx in 0..total {
        let mut rest = idx;
        for e in v.iter_mut() {
            *e = (rest % q) as Elem;
            rest /= q;
        }
        *counts.entry(classify_with_lambda(lambda, x, &v, f)?).or_insert(0u64) += 1;
    }
    Ok(counts)
}

/// Census over all `q^{n²}` matrices. Fails when `q^{n²}` exceeds `budget`.
pub fn classify_all_exhaustive(n: usize, f: &Field, budget: u64) -> Result<OrbitCensus> {
    let q = f.q() as u64;
    let matrices = q.checked_pow((n * n) as u32).filter(|&m| m <= budget).ok_or(Error::BudgetExceeded { budget })?;
    let counts = (0..matrices)
        .into_par_iter()
        .try_fold(BTreeMap::<Partition, Vec<Matrix>>::new, |mut acc, idx| -> Result<_> {
            let mut rest = idx;
            let data = (0..n * n)
                .map(|_| {
                    let e = (rest % q) as Elem;
                    rest /= q;
                    e
                })
                .collect();
            let x = Matrix::from_vec(n, n, data)?;
            match jordan_type(&x, f) {
                Ok(lambda) => acc.entry(lambda).or_default().push(x),
                Err(Error::NotNilpotent) => {}
                Err(e) => return Err(e),
            }
            Ok(acc)
        })
        .map(|part| -> Result<BTreeMap<Bipartition, u64>> {
            let mut out = BTreeMap::new();
            for (lambda, xs) in part? {
                for x in xs {
                    for (b, c) in classify_vectors(&lambda, &x, f)? {
                        *out.entry(b).or_insert(0) += c;
                    }
                }
            }
            Ok(out)
        })
        .try_reduce(BTreeMap::new, |mut a, b| {
            for (k, c) in b {
                *a.entry(k).or_insert(0) += c;
            }
            Ok(a)
        })?;
    Ok(OrbitCensus::complete(n, q, CensusMethod::Exhaustive, counts))
}

/// Census through one nilpotent per Jordan type, scaled by `|GL_n| / |Z(x)|`.
pub fn classify_all_by_jordan_type(n: usize, f: &Field, budget: u64) -> Result<OrbitCensus> {
    let q = f.q() as u64;
    let types = Partition::all_of(n);
    let work = checked_pow(q, n)?.checked_mul(types.len() as u64).ok_or(Error::Overflow("census work"))?;
    if work > budget {
        return Err(Error::BudgetExceeded { budget });
    }
    let gl = gl_order(n, q)?;
    let parts: Vec<BTreeMap<Bipartition, u64>> = types
        .par_iter()
        .map(|lambda| {
            let x = NormalFrame::new(lambda.clone()).nilpotent();
            let class_size = gl / centralizer_order(lambda, q)?;
            classify_vectors(lambda, &x, f)?
                .into_iter()
                .map(|(b, c)| Ok((b, c.checked_mul(class_size).ok_or(Error::Overflow("census count"))?)))
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut counts = BTreeMap::new();
    for part in parts {
        for (b, c) in part {
            *counts.entry(b).or_insert(0u64) += c;
        }
    }
    Ok(OrbitCensus::complete(n, q, CensusMethod::ByJordanType, counts))
}

/// Exhaustive census when `q^{n²} ≤ budget`, otherwise the Jordan-type census.
pub fn classify_all(n: usize, f: &Field, budget: u64) -> Result<OrbitCensus> {
    let exhaustive_fits = (f.q() as u64).checked_pow((n * n) as u32).is_some_and(|m| m <= budget);
    if exhaustive_fits {
        classify_all_exhaustive(n, f, budget)
    } else {
        classify_all_by_jordan_type(n, f, budget)
    }
}

/// A uniformly random element of `GL_n(F_q)` and its inverse.
pub fn random_invertible(n: usize, f: &Field, rng: &mut impl Rng) -> (Matrix, Matrix) {
    loop {
        let data = (0..n * n).map(|_| rng.gen_range(0..f.q()) as Elem).collect();
        let g = Matrix::from_vec(n, n, data).expect("n×n data");
        if let Some(inv) = g.inverse(f) {
            return (g, inv);
        }
    }
}
