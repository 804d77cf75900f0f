//! Shared computation context for one quiver over one field.
//!
//! The engine owns the iso-class tables per dimension vector and memoizes
//! per-class invariants and Hall numbers. All public values are immutable.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::cache::DiskCache;
use crate::error::{Error, Result};
use crate::field::{gl_order_ext, qpow, Elem, Field};
use crate::orbit::{scan, ClassKey, PointSpace};
use crate::quiver::{DimVector, Quiver};
use crate::rep::{Guards, Representation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum EnumMode {
    /// Scan when the pointwise guard allows it, otherwise build from the catalog.
    #[default]
    Auto,
    Scan,
    Catalog,
}

/// Complete list of iso-classes of one dimension vector.
pub struct ClassTable {
    pub dim: DimVector,
    pub keys: Vec<ClassKey>,
    /// Orbit sizes from a pointwise scan.
    pub orbit_sizes: Option<Vec<u128>>,
    map: Option<Vec<u32>>,
    space: PointSpace,
}

impl ClassTable {
    pub fn scanned(&self) -> bool {
        self.map.is_some()
    }

    fn lookup(&self, point: &[Elem]) -> Option<&ClassKey> {
        let map = self.map.as_ref()?;
        let id = map[self.space.encode(point) as usize];
        self.keys.get(id as usize)
    }
}

/// Cached invariants of an iso-class.
#[derive(Clone, Debug)]
pub struct IsoClass {
    pub key: ClassKey,
    pub rep: Representation,
    pub dim_end: usize,
    pub orbit_dim: i64,
    /// Indecomposable summands with multiplicities, sorted by key.
    pub summands: Vec<(ClassKey, u32)>,
    /// `End / rad` of each distinct summand is `F_{q^d}`.
    pub residue_degrees: Vec<u32>,
}

impl IsoClass {
    pub fn is_indecomposable(&self) -> bool {
        self.summands.len() == 1 && self.summands[0].1 == 1
    }

    pub fn dim(&self) -> &DimVector {
        &self.key.dim
    }

    pub fn total_dim(&self) -> u32 {
        self.key.dim.total()
    }
}

type HallKey = (ClassKey, ClassKey, ClassKey);

pub struct Engine {
    quiver: Arc<Quiver>,
    field: Arc<Field>,
    guards: Guards,
    mode: EnumMode,
    tables: Mutex<HashMap<DimVector, Arc<ClassTable>>>,
    indecomposables: Mutex<HashMap<DimVector, Arc<Vec<ClassKey>>>>,
    infos: Mutex<HashMap<ClassKey, Arc<IsoClass>>>,
    auts: Mutex<HashMap<ClassKey, u128>>,
    canon: Mutex<HashMap<(DimVector, Vec<Elem>), ClassKey>>,
    pub(crate) hall_memo: Mutex<HashMap<HallKey, u128>>,
    pub(crate) rows: Mutex<HashMap<(ClassKey, ClassKey), Arc<Vec<(ClassKey, u128)>>>>,
    pub(crate) disk: Option<DiskCache>,
    pub(crate) tame_ctx: Mutex<Option<Arc<crate::tame::TameContext>>>,
    registry: Mutex<HashMap<DimVector, Vec<ClassKey>>>,
}

impl Engine {
    pub fn new(quiver: Arc<Quiver>, q: u32, guards: Guards) -> Result<Engine> {
        let field = Field::new(q)?;
        Ok(Engine {
            quiver,
            field,
            guards,
            mode: EnumMode::Auto,
            tables: Mutex::default(),
            indecomposables: Mutex::default(),
            infos: Mutex::default(),
            auts: Mutex::default(),
            canon: Mutex::default(),
            hall_memo: Mutex::default(),
            rows: Mutex::default(),
            disk: None,
            tame_ctx: Mutex::default(),
            registry: Mutex::default(),
        })
    }

    pub fn with_mode(mut self, mode: EnumMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_cache(mut self, cache: DiskCache) -> Self {
        self.disk = Some(cache);
        self
    }

    /// Writes pending disk-cache records, if a cache is attached.
    pub fn flush_cache(&self) -> Result<()> {
        match &self.disk {
            Some(d) => d.flush(),
            None => Ok(()),
        }
    }

    pub fn disk_cache(&self) -> Option<&DiskCache> {
        self.disk.as_ref()
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn guards(&self) -> &Guards {
        &self.guards
    }

    pub fn mode(&self) -> EnumMode {
        self.mode
    }

    pub fn n(&self) -> usize {
        self.quiver.n()
    }

    pub fn zero_dim(&self) -> DimVector {
        DimVector::zero(self.n())
    }

    pub fn zero_key(&self) -> ClassKey {
        ClassKey::zero(self.n())
    }

    pub fn rep_of(&self, key: &ClassKey) -> Representation {
        Representation::from_point(self.quiver.clone(), self.field.clone(), key.dim.clone(), &key.code)
    }

    pub fn simple(&self, i: usize) -> Representation {
        Representation::simple(self.quiver.clone(), self.field.clone(), i)
    }

    pub fn projective(&self, i: usize) -> Representation {
        Representation::projective(self.quiver.clone(), self.field.clone(), i)
    }

    pub fn injective(&self, i: usize) -> Representation {
        Representation::injective(self.quiver.clone(), self.field.clone(), i)
    }

    pub fn zero_rep(&self, dim: DimVector) -> Representation {
        Representation::zero(self.quiver.clone(), self.field.clone(), dim)
    }

    pub fn check_rep(&self, rep: &Representation) -> Result<()> {
        if **rep.quiver() != *self.quiver || **rep.field() != *self.field {
            return Err(Error::Mismatch("representation does not belong to this engine".into()));
        }
        Ok(())
    }

    // ---- Enumeration ----

    /// All iso-classes of dimension `d`, sorted by canonical form.
    pub fn classes(&self, d: &DimVector) -> Result<Arc<ClassTable>> {
        if let Some(t) = self.tables.lock().unwrap().get(d) {
            return Ok(t.clone());
        }
        let space = PointSpace::new(&self.quiver, self.field.clone(), d);
        let scan_ok = space.size() <= self.guards.enum_limit();
        let table = match (self.mode, scan_ok) {
            (EnumMode::Scan, _) | (EnumMode::Auto, true) => self.scan_table(d, space)?,
            (EnumMode::Catalog, _) | (EnumMode::Auto, false) => self.catalog_table(d, space)?,
        };
        let table = Arc::new(table);
        self.tables.lock().unwrap().insert(d.clone(), table.clone());
        Ok(table)
    }

    fn scan_table(&self, d: &DimVector, space: PointSpace) -> Result<ClassTable> {
        let s = scan(&space, self.guards.enum_limit())?;
        let keys = s.reps.into_iter().map(|code| ClassKey { dim: d.clone(), code }).collect();
        Ok(ClassTable { dim: d.clone(), keys, orbit_sizes: Some(s.orbit_sizes), map: Some(s.map), space })
    }

    fn catalog_table(&self, d: &DimVector, space: PointSpace) -> Result<ClassTable> {
        // Every class is a multiset of indecomposables whose dims sum to d.
        let mut pool: Vec<ClassKey> = Vec::new();
        for e in d.below() {
            if !e.is_zero() {
                pool.extend(self.indecomposables(&e)?.iter().cloned());
            }
        }
        let mut keys = Vec::new();
        let mut chosen = Vec::new();
        self.multisets(&pool, 0, d.clone(), &mut chosen, &mut keys)?;
        keys.sort();
        keys.dedup();
        Ok(ClassTable { dim: d.clone(), keys, orbit_sizes: None, map: None, space })
    }

    fn multisets(
        &self,
        pool: &[ClassKey],
        start: usize,
        remaining: DimVector,
        chosen: &mut Vec<ClassKey>,
        out: &mut Vec<ClassKey>,
    ) -> Result<()> {
        if remaining.is_zero() {
            let parts: Vec<Representation> = chosen.iter().map(|k| self.rep_of(k)).collect();
            let sum = Representation::direct_sum_all(&parts, self.quiver.clone(), self.field.clone())?;
            let key = self.identify(&sum)?;
            let summands = group_keys(chosen.clone());
            self.seed_info(&key, summands)?;
            out.push(key);
            return Ok(());
        }
        for i in start..pool.len() {
            if let Some(rest) = remaining.checked_sub(&pool[i].dim) {
                chosen.push(pool[i].clone());
                self.multisets(pool, i, rest, chosen, out)?;
                chosen.pop();
            }
        }
        Ok(())
    }

    /// Indecomposable classes of dimension `d`, built bottom-up as indecomposable
    /// middle terms of extensions of a simple top `S_i` by classes of `d - e_i`.
    pub fn indecomposables(&self, d: &DimVector) -> Result<Arc<Vec<ClassKey>>> {
        if let Some(v) = self.indecomposables.lock().unwrap().get(d) {
            return Ok(v.clone());
        }
        let mut found: Vec<Representation> = Vec::new();
        let mut degrees = Vec::new();
        let n = self.n();
        for i in 0..n {
            let Some(rest) = d.checked_sub(&DimVector::unit(n, i)) else { continue };
            let top = self.simple(i);
            let subs: Vec<ClassKey> = if rest.is_zero() {
                vec![self.zero_key()]
            } else {
                self.classes(&rest)?.keys.clone()
            };
            for sub_key in subs {
                let sub = self.rep_of(&sub_key);
                let shapes = Representation::cocycle_shapes(&sub, &top);
                let dim_z: usize = shapes.iter().map(|(r, c)| r * c).sum();
                self.guards.check_hom("cocycle enumeration", self.q(), dim_z)?;
                let mut err = None;
                for_each_cocycle(&self.field, &shapes, |c| {
                    if err.is_some() {
                        return;
                    }
                    let res: Result<()> = (|| {
                        let l = Representation::extension(&sub, &top, c)?;
                        for existing in &found {
                            if existing.is_isomorphic(&l, &self.guards)? {
                                return Ok(());
                            }
                        }
                        if let Err(deg) = l.splitting_endomorphism(&self.guards)? {
                            found.push(l);
                            degrees.push(deg);
                        }
                        Ok(())
                    })();
                    if let Err(e) = res {
                        err = Some(e);
                    }
                });
                if let Some(e) = err {
                    return Err(e);
                }
            }
        }
        let mut keys = Vec::with_capacity(found.len());
        for (rep, deg) in found.into_iter().zip(degrees) {
            let key = self.identify(&rep)?;
            self.seed_info(&key, vec![(key.clone(), 1)])?;
            keys.push((key, deg));
        }
        keys.sort();
        let v: Arc<Vec<ClassKey>> = Arc::new(keys.into_iter().map(|(k, _)| k).collect());
        self.indecomposables.lock().unwrap().insert(d.clone(), v.clone());
        Ok(v)
    }

    // ---- Identification ----

    /// Canonical key of the iso-class of `rep`.
    ///
    /// When `E_d` fits the scan guard the key is the lexicographically minimal
    /// orbit point. Above it, the key is the block-diagonal sum of the
    /// indecomposable summands' keys in sorted order, each summand keyed by its
    /// own minimal orbit point.
    pub fn identify(&self, rep: &Representation) -> Result<ClassKey> {
        self.check_rep(rep)?;
        let dim = rep.dim().clone();
        if dim.is_zero() {
            return Ok(self.zero_key());
        }
        let point = rep.point();
        let table = self.tables.lock().unwrap().get(&dim).cloned();
        if let Some(t) = table {
            if let Some(k) = t.lookup(&point) {
                return Ok(k.clone());
            }
        }
        let memo_key = (dim.clone(), point);
        if let Some(k) = self.canon.lock().unwrap().get(&memo_key) {
            return Ok(k.clone());
        }
        let key = if self.orbit_canonical(&dim) {
            let space = PointSpace::new(&self.quiver, self.field.clone(), &dim);
            let (code, _) = space.canonical(&memo_key.1, self.guards.enum_limit())?;
            ClassKey { dim, code }
        } else {
            let mut keys = Vec::new();
            for (part, _) in rep.indecomposable_summands(&self.guards)? {
                keys.push(self.identify_indecomposable(&part)?);
            }
            keys.sort();
            let parts: Vec<Representation> = keys.iter().map(|k| self.rep_of(k)).collect();
            let sum = Representation::direct_sum_all(&parts, self.quiver.clone(), self.field.clone())?;
            ClassKey { dim, code: sum.point() }
        };
        self.canon.lock().unwrap().insert(memo_key, key.clone());
        Ok(key)
    }

    /// Whether keys of dimension `d` are minimal orbit points.
    pub fn orbit_canonical(&self, d: &DimVector) -> bool {
        PointSpace::new(&self.quiver, self.field.clone(), d).size() <= self.guards.enum_limit()
    }

    fn identify_indecomposable(&self, rep: &Representation) -> Result<ClassKey> {
        let dim = rep.dim().clone();
        if self.orbit_canonical(&dim) {
            return self.identify(rep);
        }
        let known = self.registry.lock().unwrap().get(&dim).cloned().unwrap_or_default();
        for k in &known {
            if self.rep_of(k).is_isomorphic(rep, &self.guards)? {
                return Ok(k.clone());
            }
        }
        let space = PointSpace::new(&self.quiver, self.field.clone(), &dim);
        let (code, _) = space.canonical(&rep.point(), self.guards.enum_limit())?;
        let key = ClassKey { dim: dim.clone(), code };
        self.registry.lock().unwrap().entry(dim).or_default().push(key.clone());
        Ok(key)
    }

    /// Canonical representative as a representation.
    pub fn canonical_representative(&self, rep: &Representation) -> Result<Representation> {
        Ok(self.rep_of(&self.identify(rep)?))
    }

    // ---- Invariants ----

    fn seed_info(&self, key: &ClassKey, summands: Vec<(ClassKey, u32)>) -> Result<()> {
        if self.infos.lock().unwrap().contains_key(key) {
            return Ok(());
        }
        let canonical = self.rep_of(key);
        let dim_end = canonical.dim_end()?;
        let orbit_dim = canonical.orbit_dimension()?;
        let mut residue_degrees = Vec::with_capacity(summands.len());
        for (s, _) in &summands {
            residue_degrees.push(self.residue_degree(s)?);
        }
        let info = IsoClass { key: key.clone(), rep: canonical, dim_end, orbit_dim, summands, residue_degrees };
        self.infos.lock().unwrap().insert(key.clone(), Arc::new(info));
        Ok(())
    }

    fn residue_degree(&self, indecomposable: &ClassKey) -> Result<u32> {
        match self.rep_of(indecomposable).splitting_endomorphism(&self.guards)? {
            Err(d) => Ok(d),
            Ok(_) => Err(Error::Validation("summand is not indecomposable".into())),
        }
    }

    /// Invariants of the class with the given key.
    pub fn info(&self, key: &ClassKey) -> Result<Arc<IsoClass>> {
        if let Some(i) = self.infos.lock().unwrap().get(key) {
            return Ok(i.clone());
        }
        let summands = self.decompose(&self.rep_of(key))?;
        self.seed_info(key, summands)?;
        Ok(self.infos.lock().unwrap().get(key).expect("just inserted").clone())
    }

    pub fn info_of(&self, rep: &Representation) -> Result<Arc<IsoClass>> {
        let key = self.identify(rep)?;
        self.info(&key)
    }

    /// Krull-Schmidt decomposition as a sorted multiset of indecomposable keys.
    pub fn decompose(&self, rep: &Representation) -> Result<Vec<(ClassKey, u32)>> {
        self.check_rep(rep)?;
        let parts = rep.indecomposable_summands(&self.guards)?;
        let mut keys = Vec::with_capacity(parts.len());
        for (p, _) in parts {
            keys.push(self.identify(&p)?);
        }
        Ok(group_keys(keys))
    }

    /// `|Aut|`: brute-force unit count when the guard allows, otherwise the
    /// product formula over the Krull-Schmidt decomposition.
    pub fn aut_order(&self, key: &ClassKey) -> Result<u128> {
        if key.is_zero() {
            return Ok(1);
        }
        if let Some(&a) = self.auts.lock().unwrap().get(key) {
            return Ok(a);
        }
        let info = self.info(key)?;
        let q = self.q();
        let a = if qpow(q, info.dim_end as u64) <= self.guards.hom_limit() {
            info.rep.aut_order_bruteforce(&self.guards)?
        } else {
            aut_from_decomposition(q, info.dim_end, &info.summands, &info.residue_degrees)
        };
        self.auts.lock().unwrap().insert(key.clone(), a);
        Ok(a)
    }

    pub fn aut_order_formula(&self, key: &ClassKey) -> Result<u128> {
        if key.is_zero() {
            return Ok(1);
        }
        let info = self.info(key)?;
        Ok(aut_from_decomposition(self.q(), info.dim_end, &info.summands, &info.residue_degrees))
    }

    /// `|G_d| = Π |GL_{d_i}(F_q)|`.
    pub fn group_order(&self, d: &DimVector) -> u128 {
        d.0.iter().fold(1u128, |acc, &x| acc.saturating_mul(crate::field::gl_order(self.q(), x)))
    }

    pub fn space_dim(&self, d: &DimVector) -> usize {
        Representation::space_dim(&self.quiver, d)
    }

    pub fn euler(&self, a: &DimVector, b: &DimVector) -> i64 {
        self.quiver.euler(a, b).expect("dims come from this quiver")
    }

    pub fn symmetric(&self, a: &DimVector, b: &DimVector) -> i64 {
        self.quiver.symmetric(a, b).expect("dims come from this quiver")
    }

    /// Canonical key of a direct sum of classes.
    pub fn direct_sum(&self, keys: &[ClassKey]) -> Result<ClassKey> {
        let parts: Vec<Representation> = keys.iter().map(|k| self.rep_of(k)).collect();
        let sum = Representation::direct_sum_all(&parts, self.quiver.clone(), self.field.clone())?;
        self.identify(&sum)
    }

    /// All classes of every dimension vector `0 < e <= d`.
    pub fn classes_below(&self, d: &DimVector) -> Result<Vec<ClassKey>> {
        let mut out = Vec::new();
        for e in d.below() {
            if !e.is_zero() {
                out.extend(self.classes(&e)?.keys.iter().cloned());
            }
        }
        Ok(out)
    }

    /// Short stable label: hash prefix of the canonical form plus the
    /// dimension vectors of the summands.
    pub fn label(&self, key: &ClassKey) -> Result<String> {
        if key.is_zero() {
            return Ok("0".into());
        }
        let info = self.info(key)?;
        let parts: Vec<String> = info
            .summands
            .iter()
            .map(|(k, m)| if *m == 1 { k.dim.to_string() } else { format!("{m}*{}", k.dim) })
            .collect();
        Ok(format!("{}:{}", short_hash(key), parts.join("+")))
    }
}

pub fn short_hash(key: &ClassKey) -> String {
    use sha2::{Digest, Sha256};
    let mut h = Sha256::new();
    for x in &key.dim.0 {
        h.update(x.to_le_bytes());
    }
    h.update([0xff]);
    h.update(&key.code);
    hex::encode(&h.finalize()[..4])
}

fn group_keys(mut keys: Vec<ClassKey>) -> Vec<(ClassKey, u32)> {
    keys.sort();
    let mut out: Vec<(ClassKey, u32)> = Vec::new();
    for k in keys {
        match out.last_mut() {
            Some((last, m)) if *last == k => *m += 1,
            _ => out.push((k, 1)),
        }
    }
    out
}

/// `|Aut M| = q^{dim rad End M} Π |GL_{m_i}(F_{q^{d_i}})|`.
pub fn aut_from_decomposition(q: u32, dim_end: usize, summands: &[(ClassKey, u32)], degrees: &[u32]) -> u128 {
    let semisimple: u64 = summands.iter().zip(degrees).map(|((_, m), d)| (m * m * d) as u64).sum();
    let rad = dim_end as u64 - semisimple;
    summands
        .iter()
        .zip(degrees)
        .fold(qpow(q, rad), |acc, ((_, m), &d)| acc.saturating_mul(gl_order_ext(q, d, *m)))
}

/// Visits every cocycle `(c_rho)` with the given matrix shapes.
pub fn for_each_cocycle(field: &Field, shapes: &[(usize, usize)], mut visit: impl FnMut(&[crate::matrix::Mat])) {
    use crate::matrix::Mat;
    let total: usize = shapes.iter().map(|(r, c)| r * c).sum();
    let q = field.size();
    let mut digits = vec![0usize; total];
    loop {
        let mut mats = Vec::with_capacity(shapes.len());
        let mut off = 0;
        for &(r, c) in shapes {
            let data = digits[off..off + r * c].iter().map(|&x| x as Elem).collect();
            mats.push(Mat::from_vec(r, c, data));
            off += r * c;
        }
        visit(&mats);
        let mut i = 0;
        while i < total {
            digits[i] += 1;
            if digits[i] < q {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
        if i == total {
            return;
        }
    }
}

/// Multiset summary used in serialized output.
pub fn summand_dims(info: &IsoClass) -> BTreeMap<String, u32> {
    let mut out = BTreeMap::new();
    for (k, m) in &info.summands {
        *out.entry(k.dim.to_string()).or_insert(0) += m;
    }
    out
}
