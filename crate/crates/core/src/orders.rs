//! The extension order, the hom order and related degeneration checks.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use num_bigint::BigInt;
use serde::Serialize;

use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::hallpoly::{evaluate, interpolate};
use crate::modspec::{ModuleSpec, SlotAssignment};
use crate::orbit::ClassKey;
use crate::quiver::{DimVector, Quiver};
use crate::rep::Guards;

/// Elementary degenerations `L -> U ⊕ V` for every exact `0 -> U -> L -> V -> 0`
/// with `L` not split.
pub type MoveGraph = BTreeMap<ClassKey, BTreeSet<ClassKey>>;

#[derive(Clone, Debug, Serialize)]
pub struct OrderRelation {
    pub lower: String,
    pub upper: String,
    pub ext: bool,
    pub hom: bool,
    /// Chain from `upper` down to `lower` when `ext` holds.
    pub witness: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrdersReport {
    pub dim: DimVector,
    pub classes: usize,
    pub pairs: usize,
    pub relations: Vec<OrderRelation>,
    pub disagreements: Vec<OrderRelation>,
}

impl OrdersReport {
    pub fn agree(&self) -> bool {
        self.disagreements.is_empty()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReinekeWindow {
    pub set_dimension: usize,
    pub set_codim: i64,
    pub codim_quotient: i64,
    pub codim_sub: i64,
    pub euler_sub_quotient: i64,
    pub hom: usize,
    pub excess: i64,
    pub within: bool,
}

impl Engine {
    /// Elementary moves inside dimension `d`.
    pub fn degeneration_moves(&self, d: &DimVector) -> Result<Arc<MoveGraph>> {
        let mut graph = MoveGraph::new();
        for a in d.below() {
            if a.is_zero() || &a == d {
                continue;
            }
            let b = d.checked_sub(&a).expect("below");
            let subs = self.classes(&a)?;
            let quots = self.classes(&b)?;
            for u in subs.keys.iter() {
                for v in quots.keys.iter() {
                    let split = self.direct_sum(&[u.clone(), v.clone()])?;
                    for (l, _) in self.product_row(v, u)?.iter() {
                        if *l != split {
                            graph.entry(l.clone()).or_default().insert(split.clone());
                        }
                    }
                }
            }
        }
        Ok(Arc::new(graph))
    }

    /// Chain `M = L_0 -> ... -> L_s = N` of elementary moves, if `N ≤_ext M`.
    pub fn ext_leq_in(&self, graph: &MoveGraph, n: &ClassKey, m: &ClassKey) -> Option<Vec<ClassKey>> {
        if n.dim != m.dim {
            return None;
        }
        let mut parent: BTreeMap<ClassKey, ClassKey> = BTreeMap::new();
        let mut seen = BTreeSet::from([m.clone()]);
        let mut queue = VecDeque::from([m.clone()]);
        while let Some(x) = queue.pop_front() {
            if &x == n {
                let mut chain = vec![x.clone()];
                let mut cur = x;
                while let Some(p) = parent.get(&cur) {
                    chain.push(p.clone());
                    cur = p.clone();
                }
                chain.reverse();
                return Some(chain);
            }
            for y in graph.get(&x).into_iter().flatten() {
                if seen.insert(y.clone()) {
                    parent.insert(y.clone(), x.clone());
                    queue.push_back(y.clone());
                }
            }
        }
        None
    }

    pub fn ext_leq(&self, n: &ClassKey, m: &ClassKey) -> Result<Option<Vec<ClassKey>>> {
        if n.dim != m.dim {
            return Ok(None);
        }
        let graph = self.degeneration_moves(&m.dim)?;
        Ok(self.ext_leq_in(&graph, n, m))
    }

    /// Every nonzero class of dimension at most `d`.
    pub fn probes(&self, d: &DimVector) -> Result<Vec<ClassKey>> {
        let mut out = Vec::new();
        for e in d.below() {
            if !e.is_zero() {
                out.extend(self.classes(&e)?.keys.iter().cloned());
            }
        }
        Ok(out)
    }

    fn hom_leq_with(&self, probes: &[ClassKey], n: &ClassKey, m: &ClassKey) -> Result<bool> {
        if n.dim != m.dim {
            return Ok(false);
        }
        let (nr, mr) = (self.rep_of(n), self.rep_of(m));
        for x in probes {
            let xr = self.rep_of(x);
            if xr.dim_hom(&nr)? < xr.dim_hom(&mr)? || nr.dim_hom(&xr)? < mr.dim_hom(&xr)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `dim N = dim M`, and for every probe `X` both `dim Hom(X, N) >= dim Hom(X, M)`
    /// and `dim Hom(N, X) >= dim Hom(M, X)`.
    pub fn hom_leq(&self, n: &ClassKey, m: &ClassKey) -> Result<bool> {
        if n.dim != m.dim {
            return Ok(false);
        }
        self.hom_leq_with(&self.probes(&m.dim)?, n, m)
    }

    /// Only the covariant half of [`Engine::hom_leq`].
    pub fn hom_leq_covariant(&self, n: &ClassKey, m: &ClassKey) -> Result<bool> {
        if n.dim != m.dim {
            return Ok(false);
        }
        let (nr, mr) = (self.rep_of(n), self.rep_of(m));
        for x in self.probes(&m.dim)? {
            let xr = self.rep_of(&x);
            if xr.dim_hom(&nr)? < xr.dim_hom(&mr)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Compares both orders on every ordered pair of classes at `d`.
    pub fn orders_agree(&self, d: &DimVector) -> Result<OrdersReport> {
        let keys = self.classes(d)?.keys.clone();
        let graph = self.degeneration_moves(d)?;
        let probes = self.probes(d)?;
        let mut relations = Vec::new();
        let mut disagreements = Vec::new();
        for n in &keys {
            for m in &keys {
                let chain = self.ext_leq_in(&graph, n, m);
                let ext = chain.is_some();
                let hom = self.hom_leq_with(&probes, n, m)?;
                if ext && n != m && self.info(n)?.orbit_dim >= self.info(m)?.orbit_dim {
                    return Err(Error::Validation(format!(
                        "a proper degeneration did not lower the orbit dimension: {} -> {}",
                        self.label(m)?,
                        self.label(n)?
                    )));
                }
                let witness = match chain {
                    Some(c) => Some(c.iter().map(|k| self.label(k)).collect::<Result<Vec<_>>>()?),
                    None => None,
                };
                let rel = OrderRelation { lower: self.label(n)?, upper: self.label(m)?, ext, hom, witness };
                if ext != hom {
                    disagreements.push(rel.clone());
                }
                relations.push(rel);
            }
        }
        Ok(OrdersReport { dim: d.clone(), classes: keys.len(), pairs: keys.len() * keys.len(), relations, disagreements })
    }

    /// Unique ext-maximum of `extension_targets(m, n)`, if there is one.
    pub fn ext_maximum(&self, m: &ClassKey, n: &ClassKey) -> Result<Option<ClassKey>> {
        let targets: Vec<ClassKey> = self.extension_targets(m, n)?.into_iter().map(|(l, _)| l).collect();
        let d = m.dim.add(&n.dim);
        let graph = self.degeneration_moves(&d)?;
        let maxima: Vec<&ClassKey> = targets
            .iter()
            .filter(|l| targets.iter().all(|x| self.ext_leq_in(&graph, x, l).is_some()))
            .collect();
        Ok(match maxima[..] {
            [one] => Some(one.clone()),
            _ => None,
        })
    }

    /// `generic_extension` succeeds exactly when the target set has a unique
    /// ext-maximum, and then returns it.
    pub fn generic_extension_consistent(&self, m: &ClassKey, n: &ClassKey) -> Result<bool> {
        let max = self.ext_maximum(m, n)?;
        match self.generic_extension(m, n) {
            Ok(g) => Ok(max.as_ref() == Some(&g)),
            Err(Error::NonUniqueGeneric { .. }) => Ok(max.is_none()),
            Err(e) => Err(e),
        }
    }

    /// Number of `F_q`-points of the extension set: `Σ |O_L|` over the targets.
    pub fn extension_set_points(&self, m: &ClassKey, n: &ClassKey) -> Result<u128> {
        let d = m.dim.add(&n.dim);
        let g = self.group_order(&d);
        let mut total = 0u128;
        for (l, _) in self.extension_targets(m, n)? {
            total += g / self.aut_order(&l)?;
        }
        Ok(total)
    }

    /// `dim End(X) - <d, d>`, the codimension of the orbit of `X` in `E_d`.
    pub fn orbit_codim(&self, key: &ClassKey) -> Result<i64> {
        Ok(self.info(key)?.dim_end as i64 - self.euler(&key.dim, &key.dim))
    }
}

/// Dimension of the extension set of `quot` by `sub` (as varieties), together
/// with the window `codim(O_M ⋆ O_N) - (codim O_M + codim O_N - <β, α>)` in
/// `[0, dim Hom(N, M)]`, where `M = quot` has dimension `α` and `N = sub`
/// has dimension `β`. The excess is the generic dimension of the quiver
/// Grassmannian of such submodules, whose tangent space is `Hom(N, M)`.
///
/// Targets are grouped by orbit dimension `k`; the number of targets with
/// orbit dimension `k` is fitted as a polynomial `N_k(q)` on `sizes` and
/// validated at `check`. The set dimension is `max_k (k + deg N_k)`.
pub fn reineke_window(quiver: &Arc<Quiver>, quot: &ModuleSpec, sub: &ModuleSpec, sizes: &[u32], check: u32) -> Result<ReinekeWindow> {
    let mut strata: Vec<BTreeMap<i64, u64>> = Vec::new();
    let mut first: Option<(i64, i64, i64, usize, i64)> = None;
    for &q in sizes.iter().chain([&check]) {
        let e = Engine::new(quiver.clone(), q, Guards::default())?;
        let m = e.instantiate_key(quot, SlotAssignment::Forward)?;
        let n = e.instantiate_key(sub, SlotAssignment::Forward)?;
        let mut counts = BTreeMap::new();
        for (l, _) in e.extension_targets(&m, &n)? {
            *counts.entry(e.info(&l)?.orbit_dim).or_insert(0u64) += 1;
        }
        strata.push(counts);
        if first.is_none() {
            let d = m.dim.add(&n.dim);
            first = Some((
                e.orbit_codim(&m)?,
                e.orbit_codim(&n)?,
                e.euler(&n.dim, &m.dim),
                e.rep_of(&n).dim_hom(&e.rep_of(&m))?,
                e.space_dim(&d) as i64,
            ));
        }
    }
    let dims: BTreeSet<i64> = strata.iter().flat_map(|c| c.keys().copied()).collect();
    let mut set_dimension = i64::MIN;
    for k in dims {
        let pts: Vec<(BigInt, BigInt)> = sizes
            .iter()
            .chain([&check])
            .zip(&strata)
            .map(|(&q, c)| (BigInt::from(q), BigInt::from(c.get(&k).copied().unwrap_or(0))))
            .collect();
        let (last, fit) = pts.split_last().expect("at least the check point");
        let coeffs = interpolate(fit);
        if evaluate(&coeffs, &last.0) != num_rational::BigRational::from_integer(last.1.clone()) {
            return Err(Error::Validation(format!("number of targets with orbit dimension {k} is not polynomial on the given sizes")));
        }
        if let Some(deg) = coeffs.iter().rposition(|c| !num_traits::Zero::is_zero(c)) {
            set_dimension = set_dimension.max(k + deg as i64);
        }
    }
    if set_dimension == i64::MIN {
        return Err(Error::Validation("empty extension set".into()));
    }
    let (codim_quotient, codim_sub, euler_sub_quotient, hom, space) = first.expect("sizes are nonempty");
    let set_codim = space - set_dimension;
    let excess = set_codim - (codim_quotient + codim_sub - euler_sub_quotient);
    Ok(ReinekeWindow {
        set_dimension: set_dimension as usize,
        set_codim,
        codim_quotient,
        codim_sub,
        euler_sub_quotient,
        hom,
        excess,
        within: excess >= 0 && excess <= hom as i64,
    })
}
