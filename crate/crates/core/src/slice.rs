//! Transverse slices to orbits in `V × N` and their contracting cocharacters.
//!
//! Everything here is over the integers/rationals: the matrices involved have
//! 0/1 entries in the normal frame and weights are tracked as integer exponents
//! of `t`, never by substituting field elements.
//!
//! For `(v, x)` the normal-form representative of `O_{ρ;σ}` with `λ = ρ + σ`:
//!
//! - `E^x` has basis `y_{i₁,i₂,s}` with `y v_{i₁,j} = v_{i₂,j−s}` for `s < j ≤ λ_{i₁}`;
//! - `U` has basis `z_{i₁,i₂,s}` with `z v_{i₂,1} = v_{i₁,s+1}`, dual to `y` under the trace form;
//! - `T = span{v_ij : i ≤ ℓ(σ), ρ_i < j ≤ ρ_i + σ_i}` complements `E^x v`;
//! - `φ(t) = (φ′(t), t)` with `φ′(t) v_ij = t^{j−ρ_i−1} v_ij` fixes `(v, x)` and has
//!   positive weights on `T` and `U`.

use serde::Serialize;

use crate::bipartitions::{Bipartition, Partition};
use crate::enhanced_cone::{orbit_dimension, NormalFrame};
use crate::error::{Error, Result};
use crate::ff_linalg::rational;

/// Square integer matrix acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, e: i64) {
        self.data[r * self.n + c] = e;
    }

    pub fn entries(&self) -> &[i64] {
        &self.data
    }

    /// Nonzero entries as `(row, col, value)`.
    pub fn support(&self) -> Vec<(usize, usize, i64)> {
        (0..self.n)
            .flat_map(|r| (0..self.n).map(move |c| (r, c)))
            .filter_map(|(r, c)| Some((r, c, self.get(r, c))).filter(|t| t.2 != 0))
            .collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        let n = self.n;
        let mut out = IntMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a != 0 {
                    for j in 0..n {
                        out.data[i * n + j] += a * other.get(k, j);
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        IntMatrix { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect() }
    }

    /// `self·other − other·self`.
    pub fn commutator(&self, other: &IntMatrix) -> IntMatrix {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn trace(&self) -> i64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        (0..self.n).map(|r| (0..self.n).map(|c| self.get(r, c) * v[c]).sum()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&e| e == 0)
    }
}

/// One basis matrix labelled by `(i₁, i₂, s)` (1-based rows, shift `s`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexedMatrix {
    pub i1: usize,
    pub i2: usize,
    pub s: usize,
    pub matrix: IntMatrix,
}

/// The index set `{(i₁, i₂, s) : max(0, λ_{i₁} − λ_{i₂}) ≤ s ≤ λ_{i₁} − 1}`.
pub fn shift_indices(lambda: &Partition) -> Vec<(usize, usize, usize)> {
    let len = lambda.len();
    let mut out = Vec::new();
    for i1 in 1..=len {
        for i2 in 1..=len {
            let (l1, l2) = (lambda.part(i1 - 1), lambda.part(i2 - 1));
            for s in l1.saturating_sub(l2)..l1 {
                out.push((i1, i2, s));
            }
        }
    }
    out
}

/// Basis `{y_{i₁,i₂,s}}` of the centralizer of the normal-form nilpotent of type `λ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralizerBasis {
    pub lambda: Partition,
    pub elements: Vec<IndexedMatrix>,
}

pub fn centralizer_basis(lambda: &Partition) -> CentralizerBasis {
    let frame = NormalFrame::new(lambda.clone());
    let n = frame.dim();
    let elements = shift_indices(lambda)
        .into_iter()
        .map(|(i1, i2, s)| {
            let mut m = IntMatrix::zeros(n);
            for j in (s + 1)..=lambda.part(i1 - 1) {
                m.set(frame.index(i2, j - s), frame.index(i1, j), 1);
            }
            IndexedMatrix { i1, i2, s, matrix: m }
        })
        .collect();
    CentralizerBasis { lambda: lambda.clone(), elements }
}

/// Basis `{z_{i₁,i₂,s}}` of the complement `U` to `[gl(V), x]`, same index set as the centralizer.
pub fn u_basis(rho: &Partition, sigma: &Partition) -> Vec<IndexedMatrix> {
    let lambda = rho.add(sigma);
    let frame = NormalFrame::new(lambda.clone());
    let n = frame.dim();
    shift_indices(&lambda)
        .into_iter()
        .map(|(i1, i2, s)| {
            let mut m = IntMatrix::zeros(n);
            m.set(frame.index(i1, s + 1), frame.index(i2, 1), 1);
            IndexedMatrix { i1, i2, s, matrix: m }
        })
        .collect()
}

/// `tr(y_a z_b)` for all pairs.
pub fn trace_pairing(ys: &CentralizerBasis, zs: &[IndexedMatrix]) -> Result<Vec<Vec<i64>>> {
    if ys.elements.len() != zs.len()
        || ys.elements.iter().zip(zs).any(|(y, z)| (y.i1, y.i2, y.s) != (z.i1, z.i2, z.s))
    {
        return Err(Error::InvalidArgument("centralizer and U bases have different index sets".into()));
    }
    Ok(ys.elements.iter().map(|y| zs.iter().map(|z| y.matrix.mul(&z.matrix).trace()).collect()).collect())
}

fn is_identity(m: &[Vec<i64>]) -> bool {
    m.iter().enumerate().all(|(i, row)| row.iter().enumerate().all(|(j, &e)| e == i64::from(i == j)))
}

/// The linear data of the slice at the representative of `(ρ;σ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SliceData {
    pub rho: Partition,
    pub sigma: Partition,
    /// Frame coordinates `(i, j)` spanning `T`.
    pub t_basis: Vec<(usize, usize)>,
    /// Labels `(i₁, i₂, s)` of the `U` basis.
    pub u_basis: Vec<(usize, usize, usize)>,
    /// `j − ρ_i − 1` for every frame coordinate, in frame order.
    pub phi_vector_weights: Vec<i64>,
    /// `ρ_{i₂} − ρ_{i₁} + s + 1` for every `U` basis element.
    pub phi_total_weights_on_u: Vec<i64>,
}

pub fn slice_data(b: &Bipartition) -> SliceData {
    let (rho, sigma) = (&b.mu, &b.nu);
    let frame = NormalFrame::new(b.lambda());
    let t_basis = (1..=sigma.len())
        .flat_map(|i| ((rho.part(i - 1) + 1)..=(rho.part(i - 1) + sigma.part(i - 1))).map(move |j| (i, j)))
        .collect();
    let phi_vector_weights = frame.coords().iter().map(|&(i, j)| j as i64 - rho.part(i - 1) as i64 - 1).collect();
    let u_labels = shift_indices(&b.lambda());
    let phi_total_weights_on_u = u_labels
        .iter()
        .map(|&(i1, i2, s)| rho.part(i2 - 1) as i64 - rho.part(i1 - 1) as i64 + s as i64 + 1)
        .collect();
    SliceData {
        rho: rho.clone(),
        sigma: sigma.clone(),
        t_basis,
        u_basis: u_labels,
        phi_vector_weights,
        phi_total_weights_on_u,
    }
}

fn representative_int(b: &Bipartition) -> (Vec<i64>, IntMatrix, NormalFrame) {
    let frame = NormalFrame::new(b.lambda());
    let n = frame.dim();
    let mut x = IntMatrix::zeros(n);
    for (i, j) in frame.coords() {
        if j > 1 {
            x.set(frame.index(i, j - 1), frame.index(i, j), 1);
        }
    }
    let mut v = vec![0; n];
    for (i, &m) in b.mu.parts().iter().enumerate() {
        v[frame.index(i + 1, m)] = 1;
    }
    (v, x, frame)
}

/// Every rank computed while certifying transversality at the representative of `b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransversalityCertificate {
    pub bipartition: String,
    pub n: usize,
    /// `Σ min(λ_i, λ_j)`.
    pub expected_centralizer_dim: usize,
    pub centralizer_elements: usize,
    pub centralizer_commutes: bool,
    pub centralizer_span_rank: usize,
    /// `n² − rank(y ↦ [y, x])`, solved independently of the explicit basis.
    pub commutant_dim: usize,
    pub trace_pairing_is_identity: bool,
    pub dim_t: usize,
    pub dim_exv: usize,
    pub rank_t_plus_exv: usize,
    pub dim_u: usize,
    pub dim_tangent: usize,
    pub orbit_dimension: usize,
    pub rank_slice_plus_tangent: usize,
    pub ambient_dim: usize,
    /// `T ⊕ E^x v = V`.
    pub vector_complement: bool,
    /// `(T ⊕ U) ⊕ tangent = V ⊕ gl(V)`.
    pub full_complement: bool,
    pub passed: bool,
}

pub fn verify_transversality(b: &Bipartition) -> Result<TransversalityCertificate> {
    let n = b.n();
    if n == 0 {
        return Err(Error::InvalidArgument("transversality needs n ≥ 1".into()));
    }
    let lambda = b.lambda();
    let (v, x, frame) = representative_int(b);
    let ys = centralizer_basis(&lambda);
    let zs = u_basis(&b.mu, &b.nu);
    let data = slice_data(b);

    let centralizer_commutes = ys.elements.iter().all(|y| y.matrix.commutator(&x).is_zero());
    let centralizer_span_rank = rational::rank(&ys.elements.iter().map(|y| y.matrix.entries().to_vec()).collect::<Vec<_>>());
    let elementary = |a: usize, c: usize| {
        let mut e = IntMatrix::zeros(n);
        e.set(a, c, 1);
        e
    };
    let ad_rows: Vec<Vec<i64>> =
        (0..n).flat_map(|a| (0..n).map(move |c| (a, c))).map(|(a, c)| elementary(a, c).commutator(&x).entries().to_vec()).collect();
    let commutant_dim = n * n - rational::rank(&ad_rows);
    let trace_pairing_is_identity = is_identity(&trace_pairing(&ys, &zs)?);

    let t_vectors: Vec<Vec<i64>> = data
        .t_basis
        .iter()
        .map(|&(i, j)| {
            let mut e = vec![0; n];
            e[frame.index(i, j)] = 1;
            e
        })
        .collect();
    let exv: Vec<Vec<i64>> = ys.elements.iter().map(|y| y.matrix.mul_vec(&v)).collect();
    let dim_t = rational::rank(&t_vectors);
    let dim_exv = rational::rank(&exv);
    let rank_t_plus_exv = rational::rank(&[t_vectors.clone(), exv].concat());

    // V ⊕ gl(V), gl(V) flattened row-major after the n vector coordinates.
    let ambient_dim = n + n * n;
    let tangent: Vec<Vec<i64>> = (0..n)
        .flat_map(|a| (0..n).map(move |c| (a, c)))
        .map(|(a, c)| {
            let y = elementary(a, c);
            let mut row = y.mul_vec(&v);
            row.extend_from_slice(y.commutator(&x).entries());
            row
        })
        .collect();
    let slice_rows: Vec<Vec<i64>> = t_vectors
        .iter()
        .map(|t| {
            let mut row = t.clone();
            row.resize(ambient_dim, 0);
            row
        })
        .chain(zs.iter().map(|z| {
            let mut row = vec![0; n];
            row.extend_from_slice(z.matrix.entries());
            row
        }))
        .collect();
    let dim_u = rational::rank(&slice_rows[t_vectors.len()..]);
    let dim_tangent = rational::rank(&tangent);
    let rank_slice_plus_tangent = rational::rank(&[slice_rows, tangent].concat());

    let expected_centralizer_dim = crate::enhanced_cone::centralizer_dimension(&lambda);
    let vector_complement = rank_t_plus_exv == n && dim_t + dim_exv == n && dim_t == b.nu.size();
    let full_complement = rank_slice_plus_tangent == ambient_dim && dim_t + dim_u + dim_tangent == ambient_dim;
    let orbit_dim = orbit_dimension(b);
    let passed = centralizer_commutes
        && ys.elements.len() == expected_centralizer_dim
        && centralizer_span_rank == expected_centralizer_dim
        && commutant_dim == expected_centralizer_dim
        && trace_pairing_is_identity
        && vector_complement
        && full_complement
        && dim_u == expected_centralizer_dim
        && dim_tangent == orbit_dim;
    Ok(TransversalityCertificate {
        bipartition: b.to_string(),
        n,
        expected_centralizer_dim,
        centralizer_elements: ys.elements.len(),
        centralizer_commutes,
        centralizer_span_rank,
        commutant_dim,
        trace_pairing_is_identity,
        dim_t,
        dim_exv,
        rank_t_plus_exv,
        dim_u,
        dim_tangent,
        orbit_dimension: orbit_dim,
        rank_slice_plus_tangent,
        ambient_dim,
        vector_complement,
        full_complement,
        passed,
    })
}

/// Weights of `φ(t) = (φ′(t), t)` acting by `(g, t)·(v, x) = (t g v, t g x g⁻¹)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ContractionCertificate {
    pub bipartition: String,
    /// Combined weight on each nonzero coordinate of `v`; all must be 0.
    pub v_weights: Vec<i64>,
    /// Combined weight on each nonzero entry of `x`; all must be 0.
    pub x_weights: Vec<i64>,
    /// Combined weight `j − ρ_i` on each `T` coordinate; all must be ≥ 1.
    pub t_weights: Vec<i64>,
    /// Combined weight on each `z`, read off its matrix entry.
    pub u_weights: Vec<i64>,
    /// The weights agree with `ρ_{i₂} − ρ_{i₁} + s + 1`.
    pub u_weights_match_formula: bool,
    pub v_fixed: bool,
    pub x_fixed: bool,
    pub t_positive: bool,
    pub u_positive: bool,
    pub passed: bool,
}

pub fn verify_contraction(b: &Bipartition) -> Result<ContractionCertificate> {
    if b.n() == 0 {
        return Err(Error::InvalidArgument("contraction needs n ≥ 1".into()));
    }
    let (v, x, frame) = representative_int(b);
    let data = slice_data(b);
    let w = &data.phi_vector_weights;
    // A vector coordinate of weight a gains +1 from scaling; a matrix entry (r, c)
    // has weight w_r − w_c under conjugation, +1 from scaling.
    let v_weights: Vec<i64> = v.iter().enumerate().filter(|(_, &e)| e != 0).map(|(k, _)| w[k] + 1).collect();
    let x_weights: Vec<i64> = x.support().iter().map(|&(r, c, _)| w[r] - w[c] + 1).collect();
    let t_weights: Vec<i64> = data.t_basis.iter().map(|&(i, j)| w[frame.index(i, j)] + 1).collect();
    let zs = u_basis(&b.mu, &b.nu);
    let u_weights: Vec<i64> = zs
        .iter()
        .map(|z| {
            let entries = z.matrix.support();
            debug_assert_eq!(entries.len(), 1);
            let (r, c, _) = entries[0];
            w[r] - w[c] + 1
        })
        .collect();
    let u_weights_match_formula = u_weights == data.phi_total_weights_on_u;
    let v_fixed = v_weights.iter().all(|&a| a == 0);
    let x_fixed = x_weights.iter().all(|&a| a == 0);
    let t_positive = t_weights.iter().all(|&a| a >= 1);
    let u_positive = u_weights.iter().all(|&a| a >= 1);
    Ok(ContractionCertificate {
        bipartition: b.to_string(),
        v_weights,
        x_weights,
        t_weights,
        u_weights,
        u_weights_match_formula,
        v_fixed,
        x_fixed,
        t_positive,
        u_positive,
        passed: u_weights_match_formula && v_fixed && x_fixed && t_positive && u_positive,
    })
}

/// Both certificates for one bi-partition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SliceCertificate {
    pub bipartition: Bipartition,
    pub slice: SliceData,
    pub transversality: TransversalityCertificate,
    pub contraction: ContractionCertificate,
    pub passed: bool,
}

pub fn certify_slice(b: &Bipartition) -> Result<SliceCertificate> {
    let transversality = verify_transversality(b)?;
    let contraction = verify_contraction(b)?;
    Ok(SliceCertificate {
        bipartition: b.clone(),
        slice: slice_data(b),
        passed: transversality.passed && contraction.passed,
        transversality,
        contraction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipartitions::enumerate_bipartitions;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn b(mu: &[usize], nu: &[usize]) -> Bipartition {
        Bipartition::from_parts(mu, nu).unwrap()
    }

    fn jordan_block(lambda: &Partition) -> IntMatrix {
        representative_int(&Bipartition::new(Partition::empty(), lambda.clone())).1
    }

    /// Dimension of `{y : [y, x] = 0}` by solving the n² × n² system directly.
    fn commutant_dim_oracle(x: &IntMatrix) -> usize {
        let n = x.n();
        // coefficient of y_{kl} in ([y,x])_{ij} = Σ_m y_im x_mj − x_im y_mj
        let mut rows = vec![vec![0i64; n * n]; n * n];
        for i in 0..n {
            for j in 0..n {
                for m in 0..n {
                    rows[i * n + j][i * n + m] += x.get(m, j);
                    rows[i * n + j][m * n + j] -= x.get(i, m);
                }
            }
        }
        n * n - rational::rank(&rows)
    }

    #[test]
    fn centralizer_examples() {
        let lam = p(&[2]);
        let ys = centralizer_basis(&lam);
        assert_eq!(ys.elements.len(), 2);
        assert_eq!(ys.elements[0].matrix, IntMatrix::identity(2));
        assert_eq!(ys.elements[1].matrix, jordan_block(&lam));
        assert_eq!(centralizer_basis(&p(&[2, 1])).elements.len(), 5);
        let ones = centralizer_basis(&p(&[1, 1, 1]));
        assert_eq!(ones.elements.len(), 9);
        let rows: Vec<_> = ones.elements.iter().map(|y| y.matrix.entries().to_vec()).collect();
        assert_eq!(rational::rank(&rows), 9);
    }

    #[test]
    fn centralizer_commutes_and_spans() {
        for n in 1..=8 {
            for lambda in Partition::all_of(n) {
                let x = jordan_block(&lambda);
                let ys = centralizer_basis(&lambda);
                assert!(ys.elements.iter().all(|y| y.matrix.commutator(&x).is_zero()), "λ={lambda}");
                if n <= 6 {
                    let rows: Vec<_> = ys.elements.iter().map(|y| y.matrix.entries().to_vec()).collect();
                    let expected = crate::enhanced_cone::centralizer_dimension(&lambda);
                    assert_eq!(ys.elements.len(), expected);
                    assert_eq!(rational::rank(&rows), expected);
                    assert_eq!(commutant_dim_oracle(&x), expected, "λ={lambda}");
                }
            }
        }
    }

    #[test]
    fn u_basis_examples() {
        let zs = u_basis(&p(&[1]), &p(&[1]));
        assert_eq!(zs.len(), 2);
        assert_eq!(zs[0].matrix.support(), vec![(0, 0, 1)]);
        assert_eq!(zs[1].matrix.support(), vec![(1, 0, 1)]);
        let single = u_basis(&p(&[1]), &p(&[]));
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].matrix, IntMatrix::identity(1));
        let zs = u_basis(&p(&[2]), &p(&[1]));
        assert_eq!(u_basis(&p(&[1, 1]), &p(&[1])).len(), 5);
        assert!(zs.iter().all(|z| z.matrix.support().len() == 1));
    }

    #[test]
    fn trace_pairing_is_identity() {
        for lam in [p(&[2]), p(&[2, 1]), p(&[3, 2, 1])] {
            let tp = trace_pairing(&centralizer_basis(&lam), &u_basis(&lam, &Partition::empty())).unwrap();
            assert_eq!(tp.len(), crate::enhanced_cone::centralizer_dimension(&lam));
            assert!(is_identity(&tp));
        }
        assert_eq!(trace_pairing(&centralizer_basis(&p(&[3, 2, 1])), &u_basis(&p(&[3, 2, 1]), &p(&[]))).unwrap().len(), 14);
        for n in 1..=8 {
            for lam in Partition::all_of(n) {
                let tp = trace_pairing(&centralizer_basis(&lam), &u_basis(&lam, &Partition::empty())).unwrap();
                assert!(is_identity(&tp), "λ={lam}");
            }
        }
        assert!(trace_pairing(&centralizer_basis(&p(&[2])), &u_basis(&p(&[1]), &p(&[]))).is_err());
    }

    #[test]
    fn transversality_examples() {
        let c = verify_transversality(&b(&[], &[1])).unwrap();
        assert!(c.passed);
        assert_eq!((c.dim_tangent, c.dim_t + c.dim_u), (0, 2));
        let c = verify_transversality(&b(&[1], &[1])).unwrap();
        assert!(c.passed);
        assert_eq!((c.dim_t, c.dim_u, c.dim_tangent, c.ambient_dim), (1, 2, 3, 6));
        assert!(verify_transversality(&b(&[], &[])).is_err());
    }

    #[test]
    fn contraction_examples() {
        let c = verify_contraction(&b(&[1], &[1])).unwrap();
        assert!(c.passed);
        assert_eq!(c.u_weights, vec![1, 2]);
        assert_eq!(c.t_weights, vec![1]);
        assert_eq!(slice_data(&b(&[1], &[1])).t_basis, vec![(1, 2)]);
    }

    #[test]
    fn certificates_pass_up_to_five() {
        for n in 1..=5 {
            for bp in enumerate_bipartitions(n) {
                let cert = certify_slice(&bp).unwrap();
                assert!(cert.passed, "{bp}: {cert:?}");
                assert_eq!(cert.transversality.dim_t + cert.transversality.dim_u + orbit_dimension(&bp), n * n + n);
            }
        }
    }
}
