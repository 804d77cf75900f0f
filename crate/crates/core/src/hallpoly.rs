//! Hall polynomials by multi-prime interpolation.
//!
//! Hall numbers of a triple are measured over several fields, interpolated
//! exactly over `Q`, validated at a held-out field size and required to have
//! integer coefficients. When validation fails, the held-out point joins the
//! fit and the next size in [`EXTENSION_PRIMES`] becomes the new held-out
//! point.

use std::path::PathBuf;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::cache::DiskCache;
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::modspec::{SlotAssignment, SpecTriple};
use crate::quiver::Quiver;
use crate::rep::Guards;

/// Field sizes tried after the requested held-out point fails.
pub const EXTENSION_PRIMES: [u32; 5] = [13, 17, 19, 23, 29];

#[derive(Clone, Debug)]
pub struct FitOptions {
    pub primes: Vec<u32>,
    pub validation: u32,
    pub guards: Guards,
    pub cache_dir: Option<PathBuf>,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { primes: vec![2, 3, 5, 7], validation: 11, guards: Guards::default(), cache_dir: None }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Point {
    pub q: u32,
    pub value: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct HallPolynomial {
    pub triple: String,
    pub primes: Vec<u32>,
    pub points: Vec<Point>,
    /// Coefficients from the constant term up.
    pub coefficients: Vec<String>,
    pub polynomial: String,
    pub degree: usize,
    pub validation: Vec<u32>,
    pub status: String,
    /// Homogeneous summands are pinned to parameter slots; the value is
    /// assumed to depend only on which slots coincide.
    pub slot_interpretation: String,
    pub slot_assignments_agree: bool,
}

/// Coefficients of the interpolating polynomial through `points`, constant term first.
pub fn interpolate(points: &[(BigInt, BigInt)]) -> Vec<BigRational> {
    let n = points.len();
    let mut out = vec![BigRational::zero(); n.max(1)];
    for (i, (xi, yi)) in points.iter().enumerate() {
        // basis polynomial prod_{j != i} (x - x_j) / (x_i - x_j)
        let mut basis = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = vec![BigRational::zero(); basis.len() + 1];
            for (k, c) in basis.iter().enumerate() {
                next[k + 1] += c.clone();
                next[k] -= c * BigRational::from_integer(xj.clone());
            }
            basis = next;
            denom *= BigRational::from_integer(xi - xj);
        }
        let scale = BigRational::from_integer(yi.clone()) / denom;
        for (k, c) in basis.into_iter().enumerate() {
            out[k] += c * &scale;
        }
    }
    while out.len() > 1 && out.last().is_some_and(Zero::is_zero) {
        out.pop();
    }
    out
}

pub fn evaluate(coeffs: &[BigRational], x: &BigInt) -> BigRational {
    let x = BigRational::from_integer(x.clone());
    coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * &x + c)
}

/// Human-readable form in `x`, highest degree first.
pub fn format_polynomial(coeffs: &[BigInt]) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (k, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        let body = match (k, mag.is_one()) {
            (0, _) => mag.to_string(),
            (1, true) => "x".to_string(),
            (1, false) => format!("{mag}x"),
            (_, true) => format!("x^{k}"),
            (_, false) => format!("{mag}x^{k}"),
        };
        let sign = if c.is_negative() { "-" } else { "+" };
        if parts.is_empty() {
            parts.push(if c.is_negative() { format!("-{body}") } else { body });
        } else {
            parts.push(format!("{sign} {body}"));
        }
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" ")
    }
}

fn engine_for(quiver: &Arc<Quiver>, q: u32, opts: &FitOptions) -> Result<Engine> {
    let e = Engine::new(quiver.clone(), q, opts.guards)?;
    Ok(match &opts.cache_dir {
        Some(dir) => e.with_cache(DiskCache::open(dir, &quiver.content_hash(), q)?),
        None => e,
    })
}

/// `g^L_{M_1...M_m}` of an instantiated triple over one field.
pub fn measure(e: &Engine, triple: &SpecTriple, slots: SlotAssignment) -> Result<u128> {
    let l = e.instantiate(&triple.target, slots)?;
    let parts = triple.parts.iter().map(|p| e.instantiate(p, slots)).collect::<Result<Vec<_>>>()?;
    let value = if let [m, n] = &parts[..] {
        e.hall_number(&l, m, n)?
    } else {
        let keys = parts.iter().map(|p| e.identify(p)).collect::<Result<Vec<_>>>()?;
        e.iterated_hall_number(&e.identify(&l)?, &keys)?
    };
    e.flush_cache()?;
    Ok(value)
}

/// Value at `q` together with whether both slot assignments agree.
fn measure_at(quiver: &Arc<Quiver>, triple: &SpecTriple, q: u32, opts: &FitOptions) -> Result<(u128, bool)> {
    let e = engine_for(quiver, q, opts)?;
    let forward = measure(&e, triple, SlotAssignment::Forward)?;
    let agree = if triple.max_slot() > 0 { measure(&e, triple, SlotAssignment::Reverse)? == forward } else { true };
    Ok((forward, agree))
}

/// Interpolates, validates and checks integrality.
pub fn fit_polynomial(quiver: &Arc<Quiver>, triple: &SpecTriple, opts: &FitOptions) -> Result<HallPolynomial> {
    if opts.primes.is_empty() {
        return Err(Error::Input("at least one field size is needed".into()));
    }
    let mut fit: Vec<u32> = opts.primes.clone();
    let mut held = opts.validation;
    if fit.contains(&held) {
        return Err(Error::Input(format!("validation size {held} is also a fitting size")));
    }
    let mut spare: Vec<u32> = EXTENSION_PRIMES.iter().copied().filter(|p| !fit.contains(p) && *p != held).collect();
    let mut measured: Vec<(u32, u128, bool)> = fit
        .par_iter()
        .map(|&q| measure_at(quiver, triple, q, opts).map(|(g, a)| (q, g, a)))
        .collect::<Result<Vec<_>>>()?;
    let mut validation = Vec::new();
    loop {
        validation.push(held);
        let (g_held, agree_held) = measure_at(quiver, triple, held, opts)?;
        let pts: Vec<(BigInt, BigInt)> = measured.iter().map(|&(q, g, _)| (BigInt::from(q), BigInt::from(g))).collect();
        let coeffs = interpolate(&pts);
        let ok = evaluate(&coeffs, &BigInt::from(held)) == BigRational::from_integer(BigInt::from(g_held));
        measured.push((held, g_held, agree_held));
        if ok {
            let points: Vec<Point> = measured.iter().map(|&(q, value, _)| Point { q, value }).collect();
            let agree = measured.iter().all(|&(_, _, a)| a);
            let mut ints = Vec::new();
            for c in &coeffs {
                if !c.is_integer() {
                    let data: Vec<String> = points.iter().map(|p| format!("g({})={}", p.q, p.value)).collect();
                    return Err(Error::Integrality(format!(
                        "{triple}: coefficient {c} is not an integer (points: {})",
                        data.join(", ")
                    )));
                }
                ints.push(c.to_integer());
            }
            return Ok(HallPolynomial {
                triple: triple.to_string(),
                primes: fit,
                degree: ints.len() - 1,
                polynomial: format_polynomial(&ints),
                coefficients: ints.iter().map(BigInt::to_string).collect(),
                points,
                validation,
                status: if agree { "validated".into() } else { "slot-dependent".into() },
                slot_interpretation: "coincidence-pattern".into(),
                slot_assignments_agree: agree,
            });
        }
        fit.push(held);
        if spare.is_empty() {
            let data: Vec<String> = measured.iter().map(|(q, g, _)| format!("g({q})={g}")).collect();
            return Err(Error::Validation(format!(
                "{triple}: no polynomial fits the measured values ({})",
                data.join(", ")
            )));
        }
        held = spare.remove(0);
    }
}
