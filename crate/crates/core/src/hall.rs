//! Hall numbers `g^L_{MN}`: the number of subrepresentations `W <= L` with
//! `W ~ N` and `L/W ~ M`.

use std::collections::{BTreeMap, HashMap};

use crate::engine::{for_each_cocycle, Engine};
use crate::error::{Error, Result};
use crate::field::{qpow, Elem};
use crate::orbit::{ClassKey, PointSpace};
use crate::quiver::DimVector;
use crate::rep::Representation;
use crate::subspaces::{for_each_graded, graded_count};

impl Engine {
    /// Exact filtration count using isomorphism tests on every stable subspace.
    pub fn hall_number(&self, l: &Representation, m: &Representation, n: &Representation) -> Result<u128> {
        for r in [l, m, n] {
            self.check_rep(r)?;
        }
        if l.dim() != &m.dim().add(n.dim()) {
            return Ok(0);
        }
        let (lj, mj, nj) = (l.to_json_value(), m.to_json_value(), n.to_json_value());
        if let Some(cache) = &self.disk {
            if let Some(g) = cache.get(&lj, &mj, &nj) {
                return Ok(g);
            }
        }
        let mut sub_memo: HashMap<Vec<Elem>, bool> = HashMap::new();
        let mut quot_memo: HashMap<Vec<Elem>, bool> = HashMap::new();
        let mut count = 0u128;
        let mut err = None;
        for_each_graded(l.field(), l.dim(), n.dim(), self.guards().enum_limit(), |w| {
            if err.is_some() {
                return;
            }
            let Some(sub) = l.restrict(w) else { return };
            let res = (|| -> Result<bool> {
                let sp = sub.point();
                let ok_sub = match sub_memo.get(&sp) {
                    Some(&b) => b,
                    None => {
                        let b = sub.is_isomorphic(n, self.guards())?;
                        sub_memo.insert(sp, b);
                        b
                    }
                };
                if !ok_sub {
                    return Ok(false);
                }
                let quot = l.quotient(w);
                let qp = quot.point();
                Ok(match quot_memo.get(&qp) {
                    Some(&b) => b,
                    None => {
                        let b = quot.is_isomorphic(m, self.guards())?;
                        quot_memo.insert(qp, b);
                        b
                    }
                })
            })();
            match res {
                Ok(true) => count += 1,
                Ok(false) => {}
                Err(e) => err = Some(e),
            }
        })?;
        if let Some(e) = err {
            return Err(e);
        }
        if let Some(cache) = &self.disk {
            cache.put(lj, mj, nj, count);
        }
        Ok(count)
    }

    /// Hall number between classes, identifying sub and quotient by canonical form.
    pub fn hall_number_keys(&self, l: &ClassKey, m: &ClassKey, n: &ClassKey) -> Result<u128> {
        if l.dim != m.dim.add(&n.dim) {
            return Ok(0);
        }
        if m.is_zero() {
            return Ok((l == n) as u128);
        }
        if n.is_zero() {
            return Ok((l == m) as u128);
        }
        let memo_key = (l.clone(), m.clone(), n.clone());
        if let Some(&g) = self.hall_memo.lock().unwrap().get(&memo_key) {
            return Ok(g);
        }
        let (lr, mr, nr) = (self.rep_of(l), self.rep_of(m), self.rep_of(n));
        let (lj, mj, nj) = (lr.to_json_value(), mr.to_json_value(), nr.to_json_value());
        let cached = self.disk.as_ref().and_then(|c| c.get(&lj, &mj, &nj));
        let g = match cached {
            Some(g) => g,
            None => {
                let g = self.count_by_identification(&lr, m, n)?;
                if let Some(c) = &self.disk {
                    c.put(lj, mj, nj, g);
                }
                g
            }
        };
        self.hall_memo.lock().unwrap().insert(memo_key, g);
        Ok(g)
    }

    fn count_by_identification(&self, l: &Representation, m: &ClassKey, n: &ClassKey) -> Result<u128> {
        // Make sure sub and quotient dims have lookup tables when scanning is cheap.
        for d in [&m.dim, &n.dim] {
            if PointSpace::new(self.quiver(), self.field().clone(), d).size() <= self.guards().enum_limit() {
                self.classes(d)?;
            }
        }
        let mut count = 0u128;
        let mut err = None;
        for_each_graded(l.field(), l.dim(), &n.dim, self.guards().enum_limit(), |w| {
            if err.is_some() {
                return;
            }
            let Some(sub) = l.restrict(w) else { return };
            let res = (|| -> Result<bool> {
                if &self.identify(&sub)? != n {
                    return Ok(false);
                }
                Ok(&self.identify(&l.quotient(w))? == m)
            })();
            match res {
                Ok(true) => count += 1,
                Ok(false) => {}
                Err(e) => err = Some(e),
            }
        })?;
        match err {
            Some(e) => Err(e),
            None => Ok(count),
        }
    }

    /// All `L` with `g^L_{MN} > 0`, with their Hall numbers.
    pub fn extension_targets(&self, m: &ClassKey, n: &ClassKey) -> Result<Vec<(ClassKey, u128)>> {
        let gamma = m.dim.add(&n.dim);
        if gamma.is_zero() {
            return Ok(vec![(self.zero_key(), 1)]);
        }
        if m.is_zero() {
            return Ok(vec![(n.clone(), 1)]);
        }
        if n.is_zero() {
            return Ok(vec![(m.clone(), 1)]);
        }
        if !self.orbit_canonical(&gamma) {
            let (mr, nr) = (self.rep_of(m), self.rep_of(n));
            let shapes = Representation::cocycle_shapes(&nr, &mr);
            let dim_z: usize = shapes.iter().map(|(r, c)| r * c).sum();
            if self.guards().check_hom("cocycle enumeration", self.q(), dim_z).is_ok() {
                return self.extension_targets_by_cocycles(&mr, &nr, &shapes);
            }
        }
        let table = self.classes(&gamma)?;
        let mut out = Vec::new();
        for l in &table.keys {
            let g = self.hall_number_keys(l, m, n)?;
            if g > 0 {
                out.push((l.clone(), g));
            }
        }
        Ok(out)
    }

    /// Targets of `Ext(m, n)` from cocycle counts: each class `L` receives
    /// `#{c : L_c ~ L} a_L / (q^{sum m_i n_i} a_M a_N)`.
    fn extension_targets_by_cocycles(
        &self,
        m: &Representation,
        n: &Representation,
        shapes: &[(usize, usize)],
    ) -> Result<Vec<(ClassKey, u128)>> {
        let mut hits: BTreeMap<ClassKey, u128> = BTreeMap::new();
        let mut err = None;
        for_each_cocycle(self.field(), shapes, |c| {
            if err.is_some() {
                return;
            }
            match Representation::extension(n, m, c).and_then(|lc| self.identify(&lc)) {
                Ok(k) => *hits.entry(k).or_insert(0) += 1,
                Err(e) => err = Some(e),
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        let mn: u64 = m.dim().0.iter().zip(&n.dim().0).map(|(a, b)| (a * b) as u64).sum();
        let a_m = self.aut_order(&self.identify(m)?)?;
        let a_n = self.aut_order(&self.identify(n)?)?;
        let den = qpow(self.q(), mn) * a_m * a_n;
        let mut out = Vec::new();
        for (l, count) in hits {
            let num = count * self.aut_order(&l)?;
            if num % den != 0 {
                return Err(Error::Validation(format!("cocycle count produced a non-integer {num}/{den}")));
            }
            out.push((l, num / den));
        }
        Ok(out)
    }

    /// Number of filtrations `0 = W_0 < ... < W_m = L` whose top factor is
    /// `parts[0]` and bottom factor is `parts[m-1]`, matching the coefficient
    /// of `u_L` in the untwisted product `u_{parts[0]} * ... * u_{parts[m-1]}`.
    pub fn iterated_hall_number(&self, l: &ClassKey, parts: &[ClassKey]) -> Result<u128> {
        let total = parts.iter().fold(self.zero_dim(), |acc, p| acc.add(&p.dim));
        if total != l.dim {
            return Ok(0);
        }
        match parts {
            [] => Ok(l.is_zero() as u128),
            [only] => Ok((only == l) as u128),
            [first, rest @ ..] => {
                let rest_dim = rest.iter().fold(self.zero_dim(), |acc, p| acc.add(&p.dim));
                let mut sum = 0u128;
                for x in self.classes_or_zero(&rest_dim)? {
                    let g = self.hall_number_keys(l, first, &x)?;
                    if g > 0 {
                        sum += g * self.iterated_hall_number(&x, rest)?;
                    }
                }
                Ok(sum)
            }
        }
    }

    pub(crate) fn classes_or_zero(&self, d: &DimVector) -> Result<Vec<ClassKey>> {
        if d.is_zero() {
            Ok(vec![self.zero_key()])
        } else {
            Ok(self.classes(d)?.keys.clone())
        }
    }

    /// Direct count of full filtrations with the given factors, top first.
    pub fn iterated_hall_number_direct(&self, l: &Representation, parts: &[Representation]) -> Result<u128> {
        match parts {
            [] => Ok(l.is_zero_module() as u128),
            [only] => Ok(l.is_isomorphic(only, self.guards())? as u128),
            [first, rest @ ..] => {
                let rest_dim = rest.iter().fold(self.zero_dim(), |acc, p| acc.add(p.dim()));
                if l.dim().checked_sub(&rest_dim).as_ref() != Some(first.dim()) {
                    return Ok(0);
                }
                let mut subs = Vec::new();
                for_each_graded(l.field(), l.dim(), &rest_dim, self.guards().enum_limit(), |w| {
                    if let Some(sub) = l.restrict(w) {
                        subs.push((sub, l.quotient(w)));
                    }
                })?;
                let mut sum = 0u128;
                for (sub, quot) in subs {
                    if quot.is_isomorphic(first, self.guards())? {
                        sum += self.iterated_hall_number_direct(&sub, rest)?;
                    }
                }
                Ok(sum)
            }
        }
    }

    /// The extension target of maximal orbit dimension; an error when the
    /// maximum is attained by more than one class.
    pub fn generic_extension(&self, m: &ClassKey, n: &ClassKey) -> Result<ClassKey> {
        let targets = self.extension_targets(m, n)?;
        let mut best: Option<i64> = None;
        let mut winners = Vec::new();
        for (l, _) in targets {
            let od = self.info(&l)?.orbit_dim;
            match best {
                Some(b) if od < b => {}
                Some(b) if od == b => winners.push(l),
                _ => {
                    best = Some(od);
                    winners = vec![l];
                }
            }
        }
        match winners.len() {
            1 => Ok(winners.pop().unwrap()),
            0 => Err(Error::Validation("empty extension set".into())),
            count => Err(Error::NonUniqueGeneric { count, dim: best.unwrap_or(0) }),
        }
    }

    /// Riedtmann-style count:
    /// `g^L_{MN} = #{c : L_c ~ L} a_L / (q^{Σ m_i n_i} a_M a_N)`, where `c` runs
    /// over all cocycles `Π_rho Hom(M_s, N_t)` and `L_c` is the middle term.
    pub fn hall_number_via_ext_oracle(
        &self,
        l: &Representation,
        m: &Representation,
        n: &Representation,
    ) -> Result<u128> {
        if l.dim() != &m.dim().add(n.dim()) {
            return Ok(0);
        }
        let shapes = Representation::cocycle_shapes(n, m);
        let dim_z: usize = shapes.iter().map(|(r, c)| r * c).sum();
        self.guards().check_hom("cocycle enumeration", self.q(), dim_z)?;
        let mut hits = 0u128;
        let mut err = None;
        let mut memo: HashMap<Vec<Elem>, bool> = HashMap::new();
        for_each_cocycle(self.field(), &shapes, |c| {
            if err.is_some() {
                return;
            }
            match Representation::extension(n, m, c).and_then(|lc| {
                let p = lc.point();
                if let Some(&b) = memo.get(&p) {
                    return Ok(b);
                }
                let b = lc.is_isomorphic(l, self.guards())?;
                memo.insert(p, b);
                Ok(b)
            }) {
                Ok(true) => hits += 1,
                Ok(false) => {}
                Err(e) => err = Some(e),
            }
        });
        if let Some(e) = err {
            return Err(e);
        }
        if hits == 0 {
            return Ok(0);
        }
        let mn: u64 = m.dim().0.iter().zip(&n.dim().0).map(|(a, b)| (a * b) as u64).sum();
        let a_l = l.aut_order_bruteforce(self.guards())?;
        let a_m = m.aut_order_bruteforce(self.guards())?;
        let a_n = n.aut_order_bruteforce(self.guards())?;
        let num = hits * a_l;
        let den = qpow(self.q(), mn) * a_m * a_n;
        if !num.is_multiple_of(den) {
            return Err(Error::Validation(format!("ext oracle produced a non-integer {num}/{den}")));
        }
        Ok(num / den)
    }

    /// Pointwise convolution `(1_M o 1_N)(x) = #{W <= x stable : x|W in O_N, x|V/W in O_M}`
    /// on every point of `E_γ`, returned as a vector indexed by point code.
    pub fn convolution_oracle(&self, m: &ClassKey, n: &ClassKey) -> Result<Vec<u128>> {
        let gamma = m.dim.add(&n.dim);
        let space = PointSpace::new(self.quiver(), self.field().clone(), &gamma);
        let per_point = graded_count(self.q(), &gamma, &n.dim);
        let work = space.size().saturating_mul(per_point.max(1));
        let limit = self.guards().enum_limit() << 2;
        if work > limit {
            return Err(Error::guard("convolution oracle work", work, limit));
        }
        let tm = self.classes(&m.dim)?;
        let tn = self.classes(&n.dim)?;
        if !m.is_zero() && !tm.scanned() || !n.is_zero() && !tn.scanned() {
            return Err(Error::guard("convolution oracle needs pointwise tables", 0, 0));
        }
        let total = space.size() as usize;
        let mut values = vec![0u128; total];
        let mut buf = vec![0 as Elem; space.len()];
        for (idx, slot) in values.iter_mut().enumerate() {
            space.decode(idx as u128, &mut buf);
            let x = Representation::from_point(self.quiver().clone(), self.field().clone(), gamma.clone(), &buf);
            let mut count = 0u128;
            let mut err = None;
            for_each_graded(self.field(), &gamma, &n.dim, self.guards().enum_limit(), |w| {
                if err.is_some() {
                    return;
                }
                let Some(sub) = x.restrict(w) else { return };
                let res = (|| -> Result<bool> {
                    if &self.identify(&sub)? != n {
                        return Ok(false);
                    }
                    Ok(&self.identify(&x.quotient(w))? == m)
                })();
                match res {
                    Ok(true) => count += 1,
                    Ok(false) => {}
                    Err(e) => err = Some(e),
                }
            })?;
            if let Some(e) = err {
                return Err(e);
            }
            *slot = count;
        }
        Ok(values)
    }

    /// Coefficients of the convolution per iso-class of `E_γ`; fails if the
    /// function is not constant on orbits.
    pub fn convolution_coefficients(&self, m: &ClassKey, n: &ClassKey) -> Result<BTreeMap<ClassKey, u128>> {
        let values = self.convolution_oracle(m, n)?;
        let gamma = m.dim.add(&n.dim);
        let table = self.classes(&gamma)?;
        let space = PointSpace::new(self.quiver(), self.field().clone(), &gamma);
        let mut out: BTreeMap<ClassKey, u128> = BTreeMap::new();
        let mut buf = vec![0 as Elem; space.len()];
        for (idx, &v) in values.iter().enumerate() {
            space.decode(idx as u128, &mut buf);
            let x = Representation::from_point(self.quiver().clone(), self.field().clone(), gamma.clone(), &buf);
            let key = self.identify(&x)?;
            match out.get(&key) {
                Some(&prev) if prev != v => {
                    return Err(Error::Validation("convolution is not constant on an orbit".into()));
                }
                _ => {
                    out.insert(key, v);
                }
            }
        }
        debug_assert_eq!(out.len(), table.keys.len());
        Ok(out)
    }
}
