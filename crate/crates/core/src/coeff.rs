//! Exact arithmetic in `Q(sqrt q)`, where `v = sqrt q`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// `a + b sqrt(q)`. When `q` is a perfect square, `b` is always zero.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Coeff {
    q: u32,
    a: BigRational,
    b: BigRational,
}

fn perfect_sqrt(q: u32) -> Option<u32> {
    let r = q.sqrt();
    (r * r == q).then_some(r)
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Coeff {
    pub fn new(q: u32, a: BigRational, b: BigRational) -> Coeff {
        match perfect_sqrt(q) {
            Some(r) => Coeff { q, a: a + b * rat(r as i64), b: BigRational::zero() },
            None => Coeff { q, a, b },
        }
    }

    pub fn zero(q: u32) -> Coeff {
        Coeff { q, a: BigRational::zero(), b: BigRational::zero() }
    }

    pub fn one(q: u32) -> Coeff {
        Coeff::from_int(q, 1)
    }

    pub fn from_int(q: u32, n: i64) -> Coeff {
        Coeff { q, a: rat(n), b: BigRational::zero() }
    }

    pub fn from_big(q: u32, n: BigInt) -> Coeff {
        Coeff { q, a: BigRational::from_integer(n), b: BigRational::zero() }
    }

    pub fn from_u128(q: u32, n: u128) -> Coeff {
        Coeff::from_big(q, BigInt::from(n))
    }

    pub fn from_rational(q: u32, r: BigRational) -> Coeff {
        Coeff { q, a: r, b: BigRational::zero() }
    }

    /// `v^k` with `v = sqrt q`.
    pub fn v_pow(q: u32, k: i64) -> Coeff {
        let half = k.div_euclid(2);
        let odd = k.rem_euclid(2) == 1;
        let base = if half >= 0 {
            BigRational::from_integer(BigInt::from(q).pow(half as u32))
        } else {
            BigRational::new(BigInt::one(), BigInt::from(q).pow((-half) as u32))
        };
        if odd {
            Coeff::new(q, BigRational::zero(), base)
        } else {
            Coeff::new(q, base, BigRational::zero())
        }
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn sqrt_part(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn inv(&self) -> Coeff {
        assert!(!self.is_zero(), "inverse of zero coefficient");
        // (a + b s)^{-1} = (a - b s) / (a^2 - q b^2)
        let norm = &self.a * &self.a - &self.b * &self.b * rat(self.q as i64);
        Coeff { q: self.q, a: &self.a / &norm, b: -&self.b / &norm }
    }

    pub fn div(&self, other: &Coeff) -> Coeff {
        self * &other.inv()
    }

    /// Integer value when the coefficient is a rational integer.
    pub fn to_integer(&self) -> Option<BigInt> {
        (self.b.is_zero() && self.a.is_integer()).then(|| self.a.to_integer())
    }

    pub fn is_negative_rational(&self) -> bool {
        self.b.is_zero() && self.a.is_negative()
    }
}

impl Add for &Coeff {
    type Output = Coeff;
    fn add(self, o: &Coeff) -> Coeff {
        debug_assert_eq!(self.q, o.q);
        Coeff { q: self.q, a: &self.a + &o.a, b: &self.b + &o.b }
    }
}

impl Sub for &Coeff {
    type Output = Coeff;
    fn sub(self, o: &Coeff) -> Coeff {
        debug_assert_eq!(self.q, o.q);
        Coeff { q: self.q, a: &self.a - &o.a, b: &self.b - &o.b }
    }
}

impl Mul for &Coeff {
    type Output = Coeff;
    fn mul(self, o: &Coeff) -> Coeff {
        debug_assert_eq!(self.q, o.q);
        let qq = rat(self.q as i64);
        Coeff {
            q: self.q,
            a: &self.a * &o.a + &self.b * &o.b * qq,
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }
}

impl Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        Coeff { q: self.q, a: -&self.a, b: -&self.b }
    }
}

impl Add for Coeff {
    type Output = Coeff;
    fn add(self, o: Coeff) -> Coeff {
        &self + &o
    }
}

impl Sub for Coeff {
    type Output = Coeff;
    fn sub(self, o: Coeff) -> Coeff {
        &self - &o
    }
}

impl Mul for Coeff {
    type Output = Coeff;
    fn mul(self, o: Coeff) -> Coeff {
        &self * &o
    }
}

impl Neg for Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        -&self
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}*v", self.b),
            (false, false) => write!(f, "{} + {}*v", self.a, self.b),
        }
    }
}

/// Parses a rational literal like `3`, `-2/5`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        Some(BigRational::from_integer(s.parse().ok()?))
    }
}

/// `[n] = (v^n - v^-n) / (v - v^-1)`.
pub fn quantum_integer(q: u32, n: i64) -> Coeff {
    let num = &Coeff::v_pow(q, n) - &Coeff::v_pow(q, -n);
    let den = &Coeff::v_pow(q, 1) - &Coeff::v_pow(q, -1);
    num.div(&den)
}

pub fn quantum_factorial(q: u32, n: i64) -> Coeff {
    (1..=n).fold(Coeff::one(q), |acc, k| &acc * &quantum_integer(q, k))
}

/// Row reduction over `Q(sqrt q)`; returns the rank and leaves `rows` in echelon form.
pub fn rank(rows: &mut [Vec<Coeff>]) -> usize {
    let Some(width) = rows.first().map(Vec::len) else {
        return 0;
    };
    let mut r = 0;
    for c in 0..width {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i].get(c).is_none_or(Coeff::is_zero)) else {
            continue;
        };
        rows.swap(p, r);
        let inv = rows[r][c].inv();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                for j in c..width {
                    let delta = &factor * &rows[r][j];
                    rows[i][j] = &rows[i][j] - &delta;
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    r
}

/// Basis of `{x : M x = 0}` for a matrix given by rows of equal width.
pub fn nullspace(rows: &[Vec<Coeff>], width: usize, q: u32) -> Vec<Vec<Coeff>> {
    let mut m = rows.to_vec();
    let r = rank(&mut m);
    let mut pivots = Vec::new();
    for row in m.iter().take(r) {
        let c = row.iter().position(|x| !x.is_zero()).expect("nonzero pivot row");
        pivots.push(c);
    }
    let mut basis = Vec::new();
    for free in (0..width).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Coeff::zero(q); width];
        v[free] = Coeff::one(q);
        for (row, &p) in pivots.iter().enumerate() {
            v[p] = -&m[row][free];
        }
        basis.push(v);
    }
    basis
}
