//! Enumeration of subspaces of `F_q^n` by reduced row echelon form.

use crate::error::{Error, Result};
use crate::field::{qpow, Elem, Field};
use crate::matrix::Mat;
use crate::quiver::DimVector;

/// Number of `k`-dimensional subspaces of `F_q^n`.
pub fn gaussian_binomial(q: u32, n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num = num.saturating_mul(qpow(q, (n - i) as u64) - 1);
        den = den.saturating_mul(qpow(q, (i + 1) as u64) - 1);
    }
    num / den
}

/// Number of graded subspaces of dimension `k` inside a space of dimension `n`.
pub fn graded_count(q: u32, n: &DimVector, k: &DimVector) -> u128 {
    n.0.iter()
        .zip(&k.0)
        .fold(1u128, |acc, (&a, &b)| acc.saturating_mul(gaussian_binomial(q, a, b)))
}

/// All `k`-dimensional subspaces of `F_q^n` as `k x n` RREF matrices.
pub fn subspaces(field: &Field, n: usize, k: usize) -> Vec<Mat> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let q = field.size();
    let mut pivots: Vec<usize> = (0..k).collect();
    loop {
        // Free slots: row r, columns after pivot r that are not pivots.
        let mut free = Vec::new();
        for (r, &p) in pivots.iter().enumerate() {
            for c in p + 1..n {
                if !pivots.contains(&c) {
                    free.push((r, c));
                }
            }
        }
        let mut digits = vec![0usize; free.len()];
        loop {
            let mut m = Mat::zeros(k, n);
            for (r, &p) in pivots.iter().enumerate() {
                m.set(r, p, 1);
            }
            for (&(r, c), &d) in free.iter().zip(&digits) {
                m.set(r, c, d as Elem);
            }
            out.push(m);
            let mut i = 0;
            while i < digits.len() {
                digits[i] += 1;
                if digits[i] < q {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
            if i == digits.len() {
                break;
            }
        }
        // Next pivot combination.
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if pivots[i] < n - k + i {
                pivots[i] += 1;
                for j in i + 1..k {
                    pivots[j] = pivots[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Calls `visit` on every graded subspace of dimension `k` in a space of
/// dimension `n`, given as one RREF basis per vertex.
pub fn for_each_graded(
    field: &Field,
    n: &DimVector,
    k: &DimVector,
    limit: u128,
    mut visit: impl FnMut(&[Mat]),
) -> Result<()> {
    if !k.leq(n) {
        return Ok(());
    }
    let count = graded_count(field.q(), n, k);
    if count > limit {
        return Err(Error::guard("graded subspace enumeration", count, limit));
    }
    let lists: Vec<Vec<Mat>> = n
        .0
        .iter()
        .zip(&k.0)
        .map(|(&a, &b)| subspaces(field, a as usize, b as usize))
        .collect();
    let mut idx = vec![0usize; lists.len()];
    let mut current: Vec<Mat> = lists.iter().map(|l| l[0].clone()).collect();
    loop {
        visit(&current);
        let mut i = 0;
        loop {
            if i == lists.len() {
                return Ok(());
            }
            idx[i] += 1;
            if idx[i] < lists[i].len() {
                current[i] = lists[i][idx[i]].clone();
                break;
            }
            idx[i] = 0;
            current[i] = lists[i][0].clone();
            i += 1;
        }
    }
}
