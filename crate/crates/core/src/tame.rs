//! Tame (extended Dynkin) quivers: recognition, defect, Coxeter
//! transformation, regular simples, and module classification.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use num_rational::Rational64;
use num_traits::{One, Zero};
use rand::SeedableRng;
use serde::Serialize;

use crate::engine::{short_hash, Engine};
use crate::error::{Error, Result};
use crate::orbit::ClassKey;
use crate::quiver::{DimVector, Quiver};
use crate::rep::Representation;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum TameFamily {
    /// Cycle with `p >= q` arrows in the two directions.
    ATilde { p: usize, q: usize },
    DTilde { n: usize },
    ETilde { n: usize },
}

impl std::fmt::Display for TameFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TameFamily::ATilde { p, q } => write!(f, "A~{p},{q}"),
            TameFamily::DTilde { n } => write!(f, "D~{n}"),
            TameFamily::ETilde { n } => write!(f, "E~{n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TameType {
    pub family: TameFamily,
    pub name: String,
    /// Number of non-homogeneous tubes.
    pub l: usize,
    pub periods: Vec<usize>,
    pub delta: DimVector,
    pub extending_vertex: usize,
}

fn rational_rref(m: &mut [Vec<Rational64>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(p, r);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c];
                for j in 0..cols {
                    let d = f * m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Primitive positive generator of the radical of the symmetric form, if it
/// is one-dimensional and spanned by a positive vector.
fn positive_radical(cartan: &[Vec<i64>]) -> Option<Vec<u32>> {
    let n = cartan.len();
    let mut m: Vec<Vec<Rational64>> =
        cartan.iter().map(|r| r.iter().map(|&x| Rational64::from_integer(x)).collect()).collect();
    let pivots = rational_rref(&mut m);
    if pivots.len() + 1 != n {
        return None;
    }
    let free = (0..n).find(|c| !pivots.contains(c))?;
    let mut v = vec![Rational64::zero(); n];
    v[free] = Rational64::one();
    for (row, &p) in pivots.iter().enumerate() {
        v[p] = -m[row][free];
    }
    let lcm = v.iter().fold(1i64, |acc, x| num_integer::lcm(acc, *x.denom()));
    let ints: Vec<i64> = v.iter().map(|x| (x * lcm).to_integer()).collect();
    let g = ints.iter().fold(0i64, |acc, &x| num_integer::gcd(acc, x));
    let sign = if ints[free] < 0 { -1 } else { 1 };
    let ints: Vec<i64> = ints.iter().map(|x| sign * x / g).collect();
    ints.iter().all(|&x| x > 0).then(|| ints.into_iter().map(|x| x as u32).collect())
}

/// Recognizes extended Dynkin quivers. `Ok(None)` for any other connected quiver.
pub fn recognize_tame(q: &Quiver) -> Result<Option<TameType>> {
    if !q.is_connected() {
        return Err(Error::Input("tame recognition needs a connected quiver".into()));
    }
    let Some(delta) = positive_radical(&q.cartan_matrix()) else { return Ok(None) };
    let n = q.n();
    let edges = q.arrows().len();
    let family = if edges == n {
        let (p, qq) = cycle_orientation(q);
        TameFamily::ATilde { p: p.max(qq), q: p.min(qq) }
    } else {
        let mut deg = vec![0usize; n];
        for a in q.arrows() {
            deg[a.source] += 1;
            deg[a.target] += 1;
        }
        let branch = deg.iter().filter(|&&d| d >= 3).count();
        if deg.contains(&4) || branch == 2 {
            TameFamily::DTilde { n: n - 1 }
        } else {
            TameFamily::ETilde { n: n - 1 }
        }
    };
    let periods: Vec<usize> = match &family {
        TameFamily::ATilde { p, q } => [*p, *q].into_iter().filter(|&r| r > 1).collect(),
        TameFamily::DTilde { n } => vec![2, 2, n - 2],
        TameFamily::ETilde { n: 6 } => vec![2, 3, 3],
        TameFamily::ETilde { n: 7 } => vec![2, 3, 4],
        TameFamily::ETilde { n: 8 } => vec![2, 3, 5],
        TameFamily::ETilde { .. } => return Err(Error::Classification("unexpected extended Dynkin shape".into())),
    };
    let extending_vertex = delta.iter().position(|&x| x == 1).expect("extended Dynkin radical has a 1");
    Ok(Some(TameType {
        name: family.to_string(),
        family,
        l: periods.len(),
        periods,
        delta: DimVector(delta),
        extending_vertex,
    }))
}

/// Arrows traversed forwards and backwards when walking once around a cycle.
fn cycle_orientation(q: &Quiver) -> (usize, usize) {
    let arrows = q.arrows();
    let mut used = vec![false; arrows.len()];
    let (mut forward, mut backward) = (0, 0);
    let mut at = 0usize;
    for _ in 0..arrows.len() {
        let Some(k) = (0..arrows.len()).find(|&k| !used[k] && (arrows[k].source == at || arrows[k].target == at))
        else {
            break;
        };
        used[k] = true;
        if arrows[k].source == at {
            forward += 1;
            at = arrows[k].target;
        } else {
            backward += 1;
            at = arrows[k].source;
        }
    }
    (forward, backward)
}

/// `<δ, d>`; negative on preprojective and positive on preinjective indecomposables.
pub fn defect(q: &Quiver, tame: &TameType, d: &DimVector) -> Result<i64> {
    q.euler(&tame.delta, d)
}

/// Coxeter matrix `Φ = -E^{-1} E^T` acting on column dimension vectors, where
/// `E` is the Euler form matrix; `Φ(dim M) = dim τM` for non-projective indecomposables.
pub fn coxeter_matrix(q: &Quiver) -> Vec<Vec<i64>> {
    let n = q.n();
    let unit = |i: usize| DimVector::unit(n, i);
    let e: Vec<Vec<i64>> =
        (0..n).map(|i| (0..n).map(|j| q.euler(&unit(i), &unit(j)).expect("same quiver")).collect()).collect();
    let inv = invert_integer(&e);
    let mut phi = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            phi[i][j] = -(0..n).map(|k| inv[i][k] * e[j][k]).sum::<i64>();
        }
    }
    phi
}

pub fn apply(m: &[Vec<i64>], x: &[i64]) -> Vec<i64> {
    m.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

fn invert_integer(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = m.len();
    let mut aug: Vec<Vec<Rational64>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rational64> = m[i].iter().map(|&x| Rational64::from_integer(x)).collect();
            row.extend((0..n).map(|j| Rational64::from_integer((i == j) as i64)));
            row
        })
        .collect();
    rational_rref(&mut aug);
    aug.iter().map(|r| r[n..].iter().map(|x| x.to_integer()).collect()).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Part {
    Preprojective,
    Regular,
    Preinjective,
}

/// Position of an indecomposable with dimension `d` decided by iterating the
/// Coxeter transformation: preprojective iff some `Φ^k d` leaves the positive
/// cone, preinjective iff some `Φ^{-k} d` does.
pub fn coxeter_part(q: &Quiver, d: &DimVector) -> Result<Part> {
    let phi = coxeter_matrix(q);
    let phi_inv = invert_integer(&phi);
    let start = d.as_i64();
    let bound = 64 * (d.total() as usize + 1) * q.n();
    let (mut fwd, mut bwd) = (start.clone(), start);
    for _ in 0..bound {
        fwd = apply(&phi, &fwd);
        if fwd.iter().any(|&x| x < 0) {
            return Ok(Part::Preprojective);
        }
        bwd = apply(&phi_inv, &bwd);
        if bwd.iter().any(|&x| x < 0) {
            return Ok(Part::Preinjective);
        }
    }
    Ok(Part::Regular)
}

/// Dimension vectors of the regular simples, one list per non-homogeneous
/// tube. Tubes are sorted by period and then by their first vector; vectors in
/// a tube are in decreasing lexicographic order.
pub fn regular_simples(q: &Quiver, tame: &TameType) -> Result<Vec<Vec<DimVector>>> {
    let phi = coxeter_matrix(q);
    let delta = &tame.delta;
    let candidates: BTreeSet<Vec<i64>> = delta
        .below()
        .into_iter()
        .filter(|x| !x.is_zero() && x != delta)
        .filter(|x| q.euler(x, x).ok() == Some(1) && defect(q, tame, x).ok() == Some(0))
        .map(|x| x.as_i64())
        .collect();
    let mut seen = BTreeSet::new();
    let mut tubes = Vec::new();
    for x in &candidates {
        if seen.contains(x) {
            continue;
        }
        let mut orbit = vec![x.clone()];
        let mut y = apply(&phi, x);
        while &y != x {
            if !candidates.contains(&y) || orbit.len() > candidates.len() {
                return Err(Error::Classification(format!("Coxeter orbit of {x:?} leaves the regular roots")));
            }
            orbit.push(y.clone());
            y = apply(&phi, &y);
        }
        seen.extend(orbit.iter().cloned());
        let sum: Vec<i64> = (0..q.n()).map(|i| orbit.iter().map(|v| v[i]).sum()).collect();
        if sum == delta.as_i64() {
            let mut tube: Vec<DimVector> =
                orbit.into_iter().map(|v| DimVector(v.into_iter().map(|x| x as u32).collect())).collect();
            tube.sort_by(|a, b| b.cmp(a));
            tubes.push(tube);
        }
    }
    tubes.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| b[0].cmp(&a[0])));
    let mut got: Vec<usize> = tubes.iter().map(Vec::len).collect();
    let mut want = tame.periods.clone();
    got.sort();
    want.sort();
    if got != want {
        return Err(Error::Classification(format!("tube periods {got:?} differ from expected {want:?}")));
    }
    Ok(tubes)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "tube")]
pub enum Tube {
    Homogeneous { parameter: Option<String> },
    NonHomogeneous { index: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "part")]
pub enum ModuleClass {
    Preprojective,
    Regular(Tube),
    Preinjective,
    Mixed { summands: Vec<(ModuleClass, u32)> },
    Zero,
}

/// Per-engine tame data with instantiated regular simples.
pub struct TameContext {
    pub tame: TameType,
    pub tube_dims: Vec<Vec<DimVector>>,
    pub tube_simples: Vec<Vec<Representation>>,
    memo: Mutex<HashMap<ClassKey, ModuleClass>>,
}

impl Engine {
    pub fn tame(&self) -> Result<Arc<TameContext>> {
        if let Some(t) = self.tame_ctx.lock().unwrap().as_ref() {
            return Ok(t.clone());
        }
        let tame = recognize_tame(self.quiver())?
            .ok_or_else(|| Error::Classification("quiver is not of extended Dynkin type".into()))?;
        let tube_dims = regular_simples(self.quiver(), &tame)?;
        let mut tube_simples = Vec::new();
        for tube in &tube_dims {
            let mut reps = Vec::new();
            for d in tube {
                reps.push(self.exceptional(d, 0)?);
            }
            tube_simples.push(reps);
        }
        let ctx = Arc::new(TameContext { tame, tube_dims, tube_simples, memo: Mutex::default() });
        *self.tame_ctx.lock().unwrap() = Some(ctx.clone());
        Ok(ctx)
    }

    /// A representation with `End = F_q` and no self-extensions of dimension
    /// `d` (the unique indecomposable of a real root). Deterministic in `(d, q, salt)`.
    pub fn exceptional(&self, d: &DimVector, salt: u64) -> Result<Representation> {
        let check = |r: &Representation| -> Result<bool> {
            let (hom, ext) = r.hom_ext_dims(r)?;
            Ok(hom == 1 && ext == 0)
        };
        if self.quiver().euler(d, d)? != 1 {
            return Err(Error::Classification(format!("{d} is not a real root")));
        }
        let mut seed = 0x5eed_u64 ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ (self.q() as u64) << 40;
        for (i, x) in d.0.iter().enumerate() {
            seed = seed.wrapping_mul(1_000_003).wrapping_add(*x as u64 + 7 * i as u64);
        }
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..4096 {
            let r = Representation::random(self.quiver().clone(), self.field().clone(), d.clone(), &mut rng);
            if check(&r)? {
                return Ok(r);
            }
        }
        // Exhaustive fallback over the iso-classes.
        for key in self.classes(d)?.keys.iter() {
            let r = self.rep_of(key);
            if check(&r)? {
                return Ok(r);
            }
        }
        Err(Error::Classification(format!("no exceptional module of dimension {d}")))
    }

    /// Part and tube of an indecomposable class.
    fn classify_indecomposable(&self, ctx: &TameContext, key: &ClassKey) -> Result<ModuleClass> {
        let d = defect(self.quiver(), &ctx.tame, &key.dim)?;
        if d < 0 {
            return Ok(ModuleClass::Preprojective);
        }
        if d > 0 {
            return Ok(ModuleClass::Preinjective);
        }
        let m = self.rep_of(key);
        let mut hits = Vec::new();
        for (t, simples) in ctx.tube_simples.iter().enumerate() {
            for e in simples {
                if e.dim_hom(&m)? > 0 {
                    hits.push(t);
                    break;
                }
            }
        }
        match hits.as_slice() {
            [] => {
                let parameter = (key.dim == ctx.tame.delta).then(|| short_hash(key));
                Ok(ModuleClass::Regular(Tube::Homogeneous { parameter }))
            }
            [t] => Ok(ModuleClass::Regular(Tube::NonHomogeneous { index: *t })),
            _ => Err(Error::Classification(format!("regular module maps from several tubes: {hits:?}"))),
        }
    }

    pub fn classify_key(&self, key: &ClassKey) -> Result<ModuleClass> {
        let ctx = self.tame()?;
        if let Some(c) = ctx.memo.lock().unwrap().get(key) {
            return Ok(c.clone());
        }
        let class = if key.is_zero() {
            ModuleClass::Zero
        } else {
            let info = self.info(key)?;
            let mut parts: Vec<(ModuleClass, u32)> = Vec::new();
            for (s, mult) in &info.summands {
                let c = self.classify_indecomposable(&ctx, s)?;
                match parts.iter_mut().find(|(x, _)| *x == c) {
                    Some((_, m)) => *m += mult,
                    None => parts.push((c, *mult)),
                }
            }
            if parts.len() == 1 {
                parts.pop().unwrap().0
            } else {
                ModuleClass::Mixed { summands: parts }
            }
        };
        ctx.memo.lock().unwrap().insert(key.clone(), class.clone());
        Ok(class)
    }

    pub fn classify(&self, rep: &Representation) -> Result<ModuleClass> {
        let key = self.identify(rep)?;
        self.classify_key(&key)
    }

    /// Classes of every summand, each paired with its multiplicity.
    pub fn summand_classes(&self, key: &ClassKey) -> Result<Vec<(ClassKey, ModuleClass, u32)>> {
        let info = self.info(key)?;
        let ctx = self.tame()?;
        info.summands.iter().map(|(s, m)| Ok((s.clone(), self.classify_indecomposable(&ctx, s)?, *m))).collect()
    }

    /// Every summand lies in a non-homogeneous tube.
    pub fn in_nonhomogeneous_tubes(&self, key: &ClassKey) -> Result<bool> {
        if key.is_zero() {
            return Ok(true);
        }
        Ok(self
            .summand_classes(key)?
            .iter()
            .all(|(_, c, _)| matches!(c, ModuleClass::Regular(Tube::NonHomogeneous { .. }))))
    }

    pub fn is_part(&self, key: &ClassKey, part: Part) -> Result<bool> {
        if key.is_zero() {
            return Ok(true);
        }
        let want = |c: &ModuleClass| match part {
            Part::Preprojective => matches!(c, ModuleClass::Preprojective),
            Part::Preinjective => matches!(c, ModuleClass::Preinjective),
            Part::Regular => matches!(c, ModuleClass::Regular(_)),
        };
        Ok(self.summand_classes(key)?.iter().all(|(_, c, _)| want(c)))
    }

    /// Generators of the rational Hall algebra up to degree `d`: the simples
    /// and every class of dimension `<= d` built from non-homogeneous tubes.
    pub fn rational_generators(&self, d: &DimVector) -> Result<Vec<crate::algebra::HallElement>> {
        let mut gens = self.composition_generators()?;
        for key in self.classes_below(d)? {
            if self.in_nonhomogeneous_tubes(&key)? && !gens.iter().any(|g| g.terms().contains_key(&key)) {
                gens.push(self.u(&key));
            }
        }
        Ok(gens)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(json: &str) -> Quiver {
        Quiver::from_json(json).unwrap()
    }

    #[test]
    fn dynkin_is_not_tame() {
        assert!(recognize_tame(&q(r#"{"vertices":["1","2"],"arrows":[["a","1","2"]]}"#)).unwrap().is_none());
    }

    #[test]
    fn kronecker_has_no_exceptional_tubes() {
        let k = q(r#"{"vertices":["1","2"],"arrows":[["a","1","2"],["b","1","2"]]}"#);
        let t = recognize_tame(&k).unwrap().unwrap();
        assert_eq!(t.l, 0);
        assert_eq!(t.delta, DimVector(vec![1, 1]));
        assert!(regular_simples(&k, &t).unwrap().is_empty());
    }

    #[test]
    fn coxeter_sends_projectives_to_minus_injectives() {
        let a = q(r#"{"vertices":["1","2","3"],"arrows":[["a","1","2"],["b","2","3"]]}"#);
        let phi = coxeter_matrix(&a);
        // P_1 = (1,1,1), I_1 = (1,0,0)
        assert_eq!(apply(&phi, &[1, 1, 1]), vec![-1, 0, 0]);
    }
}
