use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Field element. Prime fields use `0..p`; for `GF(p^k)` the coefficients of the
/// polynomial representative are packed little-endian in base `p`.
pub type Elem = u8;

/// Largest supported field order; elements must fit in a byte.
pub const MAX_ORDER: u32 = 255;

/// Description of a finite field `F_p[x]/(modulus)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub k: u32,
    /// Monic modulus, little-endian coefficients; empty when `k = 1`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub modulus: Vec<u32>,
}

struct Tables {
    spec: FieldSpec,
    q: u32,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
}

/// A finite field with precomputed operation tables. Cloning is cheap.
#[derive(Clone)]
pub struct Field(Arc<Tables>);

pub fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

impl Field {
    pub fn prime(p: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if p > MAX_ORDER {
            return Err(Error::UnsupportedField(p as u64));
        }
        Ok(Self::build(FieldSpec { p, k: 1, modulus: Vec::new() }))
    }

    /// `F_p[x]/(modulus)` for a monic modulus of degree 2 or 3, checked for irreducibility.
    pub fn extension(p: u32, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        let k = modulus.len().saturating_sub(1) as u32;
        if !(2..=3).contains(&k) || modulus[k as usize] != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField(format!("modulus {modulus:?} must be monic of degree 2 or 3 over F_{p}")));
        }
        let order = (p as u64).pow(k);
        if order > MAX_ORDER as u64 {
            return Err(Error::UnsupportedField(order));
        }
        // A cubic or quadratic is irreducible iff it has no root.
        let has_root = (0..p).any(|a| {
            modulus.iter().rev().fold(0u64, |acc, &c| (acc * a as u64 + c as u64) % p as u64) == 0
        });
        if has_root {
            return Err(Error::InvalidField(format!("modulus {modulus:?} is reducible over F_{p}")));
        }
        Ok(Self::build(FieldSpec { p, k, modulus }))
    }

    /// The field of order `q`: any prime below 256, or GF(4), GF(8), GF(9) with fixed moduli
    /// `x²+x+1`, `x³+x+1` and `x²+1`.
    pub fn of_order(q: u64) -> Result<Self> {
        match q {
            4 => Self::extension(2, vec![1, 1, 1]),
            8 => Self::extension(2, vec![1, 1, 0, 1]),
            9 => Self::extension(3, vec![1, 0, 1]),
            q if is_prime(q) && q <= MAX_ORDER as u64 => Self::prime(q as u32),
            q => Err(Error::UnsupportedField(q)),
        }
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Self> {
        if spec.k <= 1 {
            Self::prime(spec.p)
        } else {
            let f = Self::extension(spec.p, spec.modulus.clone())?;
            if f.spec().k != spec.k {
                return Err(Error::InvalidField(format!("degree {} does not match modulus", spec.k)));
            }
            Ok(f)
        }
    }

    fn build(spec: FieldSpec) -> Self {
        let p = spec.p;
        let k = spec.k;
        let q = p.pow(k);
        let unpack = |e: u32| -> Vec<u32> { (0..k).map(|i| (e / p.pow(i)) % p).collect() };
        let pack = |c: &[u32]| -> u32 { c.iter().rev().fold(0, |acc, &d| acc * p + d) };
        let qs = q as usize;
        let mut add = vec![0; qs * qs];
        let mut mul = vec![0; qs * qs];
        for a in 0..q {
            let ca = unpack(a);
            for b in 0..q {
                let cb = unpack(b);
                let sum: Vec<u32> = ca.iter().zip(&cb).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = pack(&sum) as Elem;
                let mut prod = vec![0u32; 2 * k as usize];
                for (i, x) in ca.iter().enumerate() {
                    for (j, y) in cb.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                if k > 1 {
                    for deg in (k as usize..prod.len()).rev() {
                        let lead = prod[deg];
                        if lead != 0 {
                            for (i, &m) in spec.modulus.iter().enumerate().take(k as usize) {
                                let idx = deg - k as usize + i;
                                prod[idx] = (prod[idx] + (p - lead) * m) % p;
                            }
                            prod[deg] = 0;
                        }
                    }
                }
                mul[(a * q + b) as usize] = pack(&prod[..k as usize]) as Elem;
            }
        }
        let neg = (0..q)
            .map(|a| (0..q).find(|&b| add[(a * q + b) as usize] == 0).unwrap() as Elem)
            .collect();
        let inv = (0..q)
            .map(|a| if a == 0 { 0 } else { (1..q).find(|&b| mul[(a * q + b) as usize] == 1).unwrap() as Elem })
            .collect();
        Field(Arc::new(Tables { spec, q, add, mul, neg, inv }))
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.0.q
    }

    pub fn p(&self) -> u32 {
        self.0.spec.p
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.0.add[a as usize * self.0.q as usize + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.0.mul[a as usize * self.0.q as usize + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.0.neg[a as usize]
    }

    /// Multiplicative inverse; zero maps to zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.0.inv[a as usize]
    }

    /// Image of an integer under `Z → F_p ⊆ F`.
    pub fn from_int(&self, n: i64) -> Elem {
        n.rem_euclid(self.p() as i64) as Elem
    }

    /// All elements, `0` first.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.q()).map(|e| e as Elem)
    }

    /// Nonzero elements.
    pub fn units(&self) -> impl Iterator<Item = Elem> {
        (1..self.q()).map(|e| e as Elem)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.spec == other.0.spec
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q())
    }
}
