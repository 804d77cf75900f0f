//! Finite fields `F_q` with table-driven arithmetic.
//!
//! Elements are stored as `u8` residues. For a prime field the residue is the
//! integer itself; for `q = p^k` with `k > 1` the residue `Σ c_i p^i` encodes the
//! polynomial `Σ c_i x^i` modulo a fixed primitive polynomial of degree `k`.
//! The modulus is the first primitive monic polynomial in increasing residue
//! order, so every `(p, k)` pair always gets the same encoding.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Elem = u8;

/// Field descriptor as it appears in serialized representations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub q: u32,
    pub p: u32,
    pub degree: u32,
    /// Monic modulus coefficients, lowest degree first. Empty for prime fields.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub modulus: Vec<u32>,
}

pub struct Field {
    spec: FieldSpec,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
    primitive: Elem,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.spec.q)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec
    }
}
impl Eq for Field {}

/// Splits `q` as `p^k`, or returns `None` when `q` is not a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

pub fn is_prime(n: u32) -> bool {
    matches!(prime_power(n), Some((_, 1)))
}

impl Field {
    pub fn new(q: u32) -> Result<Arc<Field>> {
        let (p, k) = prime_power(q)
            .ok_or_else(|| Error::Input(format!("q = {q} is not a prime power")))?;
        if q > 256 {
            return Err(Error::Input(format!("q = {q} exceeds the supported maximum 256")));
        }
        let field = if k == 1 {
            Self::prime(p)
        } else {
            Self::extension(p, k)
        };
        Ok(Arc::new(field))
    }

    fn prime(p: u32) -> Field {
        let q = p as usize;
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            for b in 0..q {
                add[a * q + b] = ((a + b) % q) as Elem;
                mul[a * q + b] = ((a * b) % q) as Elem;
            }
        }
        let spec = FieldSpec { q: p, p, degree: 1, modulus: Vec::new() };
        Self::finish(spec, add, mul)
    }

    fn extension(p: u32, k: u32) -> Field {
        let q = p.pow(k) as usize;
        let pu = p as usize;
        let digits = |mut x: usize| -> Vec<usize> {
            (0..k)
                .map(|_| {
                    let d = x % pu;
                    x /= pu;
                    d
                })
                .collect()
        };
        let pack = |ds: &[usize]| -> usize { ds.iter().rev().fold(0, |acc, &d| acc * pu + d) };

        let mut add = vec![0; q * q];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let s: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % pu).collect();
                add[a * q + b] = pack(&s) as Elem;
            }
        }

        // Multiply by x modulo the candidate modulus; used both for the
        // primitivity search and to build the multiplication table.
        let times_x = |ds: &[usize], modulus: &[usize]| -> Vec<usize> {
            let top = ds[k as usize - 1];
            let mut out = vec![0; k as usize];
            for i in (1..k as usize).rev() {
                out[i] = ds[i - 1];
            }
            for i in 0..k as usize {
                out[i] = (out[i] + pu * pu - (top * modulus[i]) % pu) % pu;
            }
            out
        };

        let mut chosen = None;
        for code in 0..q {
            let modulus = digits(code);
            if modulus[0] == 0 {
                continue;
            }
            // x is primitive iff its multiplicative order is exactly q - 1.
            let one = pack(&{
                let mut v = vec![0; k as usize];
                v[0] = 1;
                v
            });
            let mut cur = digits(one);
            let mut order = 0;
            for j in 1..q {
                cur = times_x(&cur, &modulus);
                if pack(&cur) == one {
                    order = j;
                    break;
                }
            }
            if order == q - 1 {
                chosen = Some(modulus);
                break;
            }
        }
        let modulus = chosen.expect("a primitive polynomial exists for every prime power");

        let mut mul = vec![0; q * q];
        for a in 0..q {
            // a * b = Σ b_i (a x^i)
            let mut shifted = vec![digits(a)];
            for _ in 1..k {
                let next = times_x(shifted.last().unwrap(), &modulus);
                shifted.push(next);
            }
            for b in 0..q {
                let db = digits(b);
                let mut acc = vec![0; k as usize];
                for (i, &c) in db.iter().enumerate() {
                    for t in 0..k as usize {
                        acc[t] = (acc[t] + c * shifted[i][t]) % pu;
                    }
                }
                mul[a * q + b] = pack(&acc) as Elem;
            }
        }
        let mut full = modulus.iter().map(|&c| c as u32).collect::<Vec<_>>();
        full.push(1);
        let spec = FieldSpec { q: q as u32, p, degree: k, modulus: full };
        Self::finish(spec, add, mul)
    }

    fn finish(spec: FieldSpec, add: Vec<Elem>, mul: Vec<Elem>) -> Field {
        let q = spec.q as usize;
        let mut neg = vec![0; q];
        let mut inv = vec![0; q];
        for a in 0..q {
            for b in 0..q {
                if add[a * q + b] == 0 {
                    neg[a] = b as Elem;
                }
                if mul[a * q + b] == 1 {
                    inv[a] = b as Elem;
                }
            }
        }
        let order = |g: usize| -> usize {
            let mut x = g;
            let mut n = 1;
            while x != 1 {
                x = mul[x * q + g] as usize;
                n += 1;
            }
            n
        };
        let primitive = (1..q).find(|&g| order(g) == q - 1).unwrap_or(1) as Elem;
        Field { spec, add, mul, neg, inv, primitive }
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Arc<Field>> {
        let f = Field::new(spec.q)?;
        if f.spec.p != spec.p || f.spec.degree != spec.degree {
            return Err(Error::Input(format!("inconsistent field descriptor for q = {}", spec.q)));
        }
        if !spec.modulus.is_empty() && spec.modulus != f.spec.modulus {
            return Err(Error::Input(format!(
                "unsupported modulus {:?} for q = {}; expected {:?}",
                spec.modulus, spec.q, f.spec.modulus
            )));
        }
        Ok(f)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.spec.q
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.spec.q as usize
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a as usize * self.size() + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.size() + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }

    /// Multiplicative inverse. Panics on zero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(a != 0, "inverse of zero");
        self.inv[a as usize]
    }

    /// A generator of the multiplicative group.
    pub fn primitive(&self) -> Elem {
        self.primitive
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.spec.q).map(|x| x as Elem)
    }
}

/// `q^e` as u128, saturating.
pub fn qpow(q: u32, e: u64) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..e {
        acc = acc.saturating_mul(q as u128);
    }
    acc
}

/// Order of `GL_n(F_q)`.
pub fn gl_order(q: u32, n: u32) -> u128 {
    let qn = qpow(q, n as u64);
    (0..n).fold(1u128, |acc, i| acc.saturating_mul(qn - qpow(q, i as u64)))
}

/// Order of `GL_m(F_{q^d})`.
pub fn gl_order_ext(q: u32, d: u32, m: u32) -> u128 {
    let big = qpow(q, d as u64);
    let top = (0..m).fold(1u128, |acc, _| acc.saturating_mul(big));
    let mut acc = 1u128;
    let mut power = 1u128;
    for _ in 0..m {
        acc = acc.saturating_mul(top - power);
        power = power.saturating_mul(big);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_axioms(f: &Field) {
        for a in f.elements() {
            assert_eq!(f.add(a, 0), a);
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a)), 1);
            }
            for b in f.elements() {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in f.elements() {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                }
            }
        }
    }

    #[test]
    fn small_fields_satisfy_axioms() {
        for q in [2, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            let f = Field::new(q).unwrap();
            check_axioms(&f);
        }
    }

    #[test]
    fn primitive_generates_units() {
        for q in [2, 3, 4, 8, 9, 13, 25] {
            let f = Field::new(q).unwrap();
            let g = f.primitive();
            let mut seen = std::collections::HashSet::new();
            let mut x = 1;
            for _ in 0..q - 1 {
                seen.insert(x);
                x = f.mul(x, g);
            }
            assert_eq!(seen.len(), (q - 1) as usize);
        }
    }

    #[test]
    fn rejects_non_prime_powers() {
        assert!(Field::new(6).is_err());
        assert!(Field::new(1).is_err());
        assert!(Field::new(12).is_err());
    }

    #[test]
    fn moduli_are_fixed() {
        assert_eq!(Field::new(4).unwrap().spec().modulus, vec![1, 1, 1]);
        assert_eq!(Field::new(8).unwrap().spec().modulus, vec![1, 1, 0, 1]);
        assert_eq!(Field::new(9).unwrap().spec().modulus, vec![2, 1, 1]);
    }

    #[test]
    fn gl_orders() {
        assert_eq!(gl_order(2, 2), 6);
        assert_eq!(gl_order(3, 2), 48);
        assert_eq!(gl_order(5, 1), 4);
        assert_eq!(gl_order(7, 0), 1);
        assert_eq!(gl_order_ext(2, 2, 1), 3);
        assert_eq!(gl_order_ext(3, 1, 2), 48);
    }
}
