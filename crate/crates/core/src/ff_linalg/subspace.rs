use serde::{Deserialize, Serialize};

use super::field::{Elem, Field};
use super::matrix::{rref_rows, Matrix};
use crate::error::{Error, Result};

/// A subspace of `F^n` in reduced row echelon form.
///
/// The representation is canonical, so two values are equal exactly when they
/// span the same subspace.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubspaceBasis {
    ambient: usize,
    pivots: Vec<usize>,
    rows: Vec<Vec<Elem>>,
}

impl SubspaceBasis {
    pub fn zero(ambient: usize) -> Self {
        Self { ambient, pivots: Vec::new(), rows: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        let rows = (0..ambient)
            .map(|i| {
                let mut r = vec![0; ambient];
                r[i] = 1;
                r
            })
            .collect();
        Self { ambient, pivots: (0..ambient).collect(), rows }
    }

    /// Span of `vectors`, each of length `ambient`.
    pub fn from_vectors(ambient: usize, mut vectors: Vec<Vec<Elem>>, f: &Field) -> Self {
        debug_assert!(vectors.iter().all(|v| v.len() == ambient));
        let pivots = rref_rows(&mut vectors, ambient, f);
        Self { ambient, pivots, rows: vectors }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// The echelon basis vectors.
    pub fn vectors(&self) -> &[Vec<Elem>] {
        &self.rows
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_rows(&self.rows, self.ambient).expect("rows have ambient length")
    }

    /// `v` minus its component along the pivots; zero iff `v` lies in the subspace.
    pub fn reduce(&self, v: &[Elem], f: &Field) -> Vec<Elem> {
        let mut out = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = out[pc];
            if c != 0 {
                let nc = f.neg(c);
                for (o, &r) in out.iter_mut().zip(row) {
                    *o = f.add(*o, f.mul(nc, r));
                }
            }
        }
        out
    }

    pub fn contains_vector(&self, v: &[Elem], f: &Field) -> bool {
        self.reduce(v, f).iter().all(|&e| e == 0)
    }

    pub fn contains(&self, other: &SubspaceBasis, f: &Field) -> bool {
        other.rows.iter().all(|v| self.contains_vector(v, f))
    }

    pub fn sum(&self, other: &SubspaceBasis, f: &Field) -> SubspaceBasis {
        let mut vs = self.rows.clone();
        vs.extend(other.rows.iter().cloned());
        Self::from_vectors(self.ambient, vs, f)
    }

    /// The subspace spanned by this one and `extra`.
    pub fn extended(&self, extra: &[Vec<Elem>], f: &Field) -> SubspaceBasis {
        let mut vs = self.rows.clone();
        vs.extend(extra.iter().cloned());
        Self::from_vectors(self.ambient, vs, f)
    }
}

/// Number of `k`-dimensional subspaces of `F_q^n`.
pub fn gaussian_binomial(n: u64, k: u64, q: u64) -> Result<u128> {
    if k > n {
        return Err(Error::InvalidArgument(format!("gaussian binomial needs k ≤ n, got k={k}, n={n}")));
    }
    if q < 2 {
        return Err(Error::InvalidArgument(format!("gaussian binomial needs q ≥ 2, got {q}")));
    }
    let q = q as u128;
    let pow = |e: u64| -> Result<u128> { q.checked_pow(e as u32).ok_or(Error::Overflow("gaussian binomial")) };
    let mut acc: u128 = 1;
    // After step i, acc = [n choose i+1]_q, always an integer.
    for i in 0..k {
        let num = pow(n - i)? - 1;
        let den = pow(i + 1)? - 1;
        acc = acc.checked_mul(num).ok_or(Error::Overflow("gaussian binomial"))? / den;
    }
    Ok(acc)
}

/// Iterator over all `W` with `A ⊆ W ⊆ B` and `dim W = d`, each exactly once.
///
/// Works in the quotient `B/A`: it enumerates reduced echelon forms of
/// `(d - dim A)`-dimensional subspaces of `F_q^{dim B - dim A}` and lifts them.
pub struct Between<'f> {
    field: &'f Field,
    lower: SubspaceBasis,
    lifts: Vec<Vec<Elem>>,
    k: usize,
    pivot_sets: Vec<Vec<usize>>,
    set_index: usize,
    free: Vec<(usize, usize)>,
    counter: Vec<Elem>,
    exhausted: bool,
}

impl<'f> Between<'f> {
    fn load_set(&mut self) {
        let pivots = &self.pivot_sets[self.set_index];
        self.free = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &pc)| ((pc + 1)..self.k).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
            .collect();
        self.counter = vec![0; self.free.len()];
    }

    fn current(&self) -> SubspaceBasis {
        let pivots = &self.pivot_sets[self.set_index];
        let f = self.field;
        let ambient = self.lower.ambient();
        let extra: Vec<Vec<Elem>> = pivots
            .iter()
            .enumerate()
            .map(|(r, &pc)| {
                let mut v = self.lifts[pc].clone();
                for (slot, &(fr, fc)) in self.free.iter().enumerate() {
                    let coeff = self.counter[slot];
                    if fr == r && coeff != 0 {
                        for (o, &l) in v.iter_mut().zip(&self.lifts[fc]) {
                            *o = f.add(*o, f.mul(coeff, l));
                        }
                    }
                }
                v
            })
            .collect();
        debug_assert_eq!(extra.first().map_or(ambient, Vec::len), ambient);
        self.lower.extended(&extra, f)
    }

    /// Advances the odometer; returns false once every pivot set is done.
    fn advance(&mut self) -> bool {
        let q = self.field.q();
        for slot in self.counter.iter_mut() {
            if (*slot as u32) + 1 < q {
                *slot += 1;
                return true;
            }
            *slot = 0;
        }
        self.set_index += 1;
        if self.set_index < self.pivot_sets.len() {
            self.load_set();
            true
        } else {
            false
        }
    }
}

impl Iterator for Between<'_> {
    type Item = SubspaceBasis;

    fn next(&mut self) -> Option<SubspaceBasis> {
        if self.exhausted {
            return None;
        }
        let out = self.current();
        self.exhausted = !self.advance();
        Some(out)
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Every subspace `W` with `lower ⊆ W ⊆ upper` and `dim W = d`, exactly once.
pub fn enumerate_between<'f>(
    lower: &SubspaceBasis,
    upper: &SubspaceBasis,
    d: usize,
    f: &'f Field,
) -> Result<Between<'f>> {
    if lower.ambient() != upper.ambient() {
        return Err(Error::DimensionMismatch { expected: lower.ambient(), found: upper.ambient() });
    }
    if !upper.contains(lower, f) {
        return Err(Error::NotContained);
    }
    if d < lower.dim() || d > upper.dim() {
        return Err(Error::InfeasibleDimension { d, lower: lower.dim(), upper: upper.dim() });
    }
    // Lifts of a basis of upper/lower, reduced against lower's pivots.
    let reduced: Vec<Vec<Elem>> = upper.vectors().iter().map(|v| lower.reduce(v, f)).collect();
    let lifts = SubspaceBasis::from_vectors(lower.ambient(), reduced, f).vectors().to_vec();
    let k = lifts.len();
    let mut it = Between {
        field: f,
        lower: lower.clone(),
        lifts,
        k,
        pivot_sets: combinations(k, d - lower.dim()),
        set_index: 0,
        free: Vec::new(),
        counter: Vec::new(),
        exhausted: false,
    };
    it.load_set();
    Ok(it)
}
