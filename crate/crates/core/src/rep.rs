//! Representations of a quiver over `F_q` and their Hom/End/Aut invariants.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{qpow, Elem, Field, FieldSpec};
use crate::matrix::Mat;
use crate::quiver::{DimVector, Quiver};

/// Bounds on brute-force searches, stored as powers of two.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Guards {
    /// `q^{dim E_d} <= 2^enum_exp` for pointwise orbit scans.
    pub enum_exp: u32,
    /// `q^{dim Hom} <= 2^hom_exp` for Hom-space enumeration.
    pub hom_exp: u32,
}

impl Default for Guards {
    fn default() -> Self {
        Guards { enum_exp: 24, hom_exp: 20 }
    }
}

impl Guards {
    pub fn enum_limit(&self) -> u128 {
        1u128 << self.enum_exp
    }

    pub fn hom_limit(&self) -> u128 {
        1u128 << self.hom_exp
    }

    pub fn check_hom(&self, what: &str, q: u32, dim: usize) -> Result<()> {
        let needed = qpow(q, dim as u64);
        if needed > self.hom_limit() {
            return Err(Error::guard(what, needed, self.hom_limit()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Representation {
    quiver: Arc<Quiver>,
    field: Arc<Field>,
    dim: DimVector,
    mats: Vec<Mat>,
}

impl PartialEq for Representation {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.mats == other.mats && *self.field == *other.field
    }
}
impl Eq for Representation {}

#[derive(Serialize, Deserialize)]
struct RepFile {
    field: FieldSpec,
    dim: Vec<u32>,
    mats: BTreeMap<String, Vec<u32>>,
}

/// A homomorphism given by one matrix per vertex (`N_i x M_i`).
pub type Morphism = Vec<Mat>;

impl Representation {
    pub fn new(quiver: Arc<Quiver>, field: Arc<Field>, dim: DimVector, mats: Vec<Mat>) -> Result<Self> {
        if dim.len() != quiver.n() {
            return Err(Error::Mismatch("dimension vector does not match the quiver".into()));
        }
        if mats.len() != quiver.arrows().len() {
            return Err(Error::Mismatch("one matrix per arrow is required".into()));
        }
        for (a, m) in quiver.arrows().iter().zip(&mats) {
            let (r, c) = (dim.0[a.target] as usize, dim.0[a.source] as usize);
            if m.rows() != r || m.cols() != c {
                return Err(Error::Mismatch(format!(
                    "matrix for arrow `{}` is {}x{}, expected {r}x{c}",
                    a.id,
                    m.rows(),
                    m.cols()
                )));
            }
            if m.data().iter().any(|&x| x as usize >= field.size()) {
                return Err(Error::Input(format!("entry out of range for F_{}", field.q())));
            }
        }
        Ok(Representation { quiver, field, dim, mats })
    }

    pub fn zero(quiver: Arc<Quiver>, field: Arc<Field>, dim: DimVector) -> Self {
        let mats = quiver
            .arrows()
            .iter()
            .map(|a| Mat::zeros(dim.0[a.target] as usize, dim.0[a.source] as usize))
            .collect();
        Representation { quiver, field, dim, mats }
    }

    pub fn simple(quiver: Arc<Quiver>, field: Arc<Field>, i: usize) -> Self {
        let dim = DimVector::unit(quiver.n(), i);
        Self::zero(quiver, field, dim)
    }

    /// Indecomposable projective at `i`: basis = paths starting at `i`.
    pub fn projective(quiver: Arc<Quiver>, field: Arc<Field>, i: usize) -> Self {
        let paths = quiver.paths_from(i);
        let n = quiver.n();
        let mut by_vertex: Vec<Vec<&Vec<usize>>> = vec![Vec::new(); n];
        for p in &paths {
            by_vertex[quiver.path_end(i, p)].push(p);
        }
        let dim = DimVector(by_vertex.iter().map(|v| v.len() as u32).collect());
        let mut mats = Vec::new();
        for (k, a) in quiver.arrows().iter().enumerate() {
            let mut m = Mat::zeros(by_vertex[a.target].len(), by_vertex[a.source].len());
            for (col, p) in by_vertex[a.source].iter().enumerate() {
                let mut ext = (*p).clone();
                ext.push(k);
                let row = by_vertex[a.target].iter().position(|r| **r == ext).expect("path extends");
                m.set(row, col, 1);
            }
            mats.push(m);
        }
        Representation { quiver, field, dim, mats }
    }

    /// Indecomposable injective at `i`: the vertex-`j` space is dual to the paths `j -> i`.
    pub fn injective(quiver: Arc<Quiver>, field: Arc<Field>, i: usize) -> Self {
        let n = quiver.n();
        let mut by_vertex: Vec<Vec<Vec<usize>>> = vec![Vec::new(); n];
        for j in 0..n {
            for p in quiver.paths_from(j) {
                if quiver.path_end(j, &p) == i {
                    by_vertex[j].push(p);
                }
            }
        }
        let dim = DimVector(by_vertex.iter().map(|v| v.len() as u32).collect());
        let mut mats = Vec::new();
        for (k, a) in quiver.arrows().iter().enumerate() {
            let mut m = Mat::zeros(by_vertex[a.target].len(), by_vertex[a.source].len());
            for (col, p) in by_vertex[a.source].iter().enumerate() {
                if p.first() == Some(&k) {
                    let rest = &p[1..];
                    let row = by_vertex[a.target].iter().position(|r| r == rest).expect("suffix path");
                    m.set(row, col, 1);
                }
            }
            mats.push(m);
        }
        Representation { quiver, field, dim, mats }
    }

    pub fn random(quiver: Arc<Quiver>, field: Arc<Field>, dim: DimVector, rng: &mut impl Rng) -> Self {
        let q = field.size();
        let mats = quiver
            .arrows()
            .iter()
            .map(|a| {
                let (r, c) = (dim.0[a.target] as usize, dim.0[a.source] as usize);
                Mat::from_vec(r, c, (0..r * c).map(|_| rng.gen_range(0..q) as Elem).collect())
            })
            .collect();
        Representation { quiver, field, dim, mats }
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn dim(&self) -> &DimVector {
        &self.dim
    }

    pub fn mats(&self) -> &[Mat] {
        &self.mats
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    /// Total `F_q`-dimension.
    pub fn total_dim(&self) -> u32 {
        self.dim.total()
    }

    pub fn is_zero_module(&self) -> bool {
        self.dim.is_zero()
    }

    /// Flattened arrow matrices in arrow order, each row-major.
    pub fn point(&self) -> Vec<Elem> {
        self.mats.iter().flat_map(|m| m.data().iter().copied()).collect()
    }

    pub fn from_point(quiver: Arc<Quiver>, field: Arc<Field>, dim: DimVector, point: &[Elem]) -> Self {
        let mut mats = Vec::with_capacity(quiver.arrows().len());
        let mut off = 0;
        for a in quiver.arrows() {
            let (r, c) = (dim.0[a.target] as usize, dim.0[a.source] as usize);
            mats.push(Mat::from_vec(r, c, point[off..off + r * c].to_vec()));
            off += r * c;
        }
        Representation { quiver, field, dim, mats }
    }

    pub fn space_dim(quiver: &Quiver, dim: &DimVector) -> usize {
        quiver
            .arrows()
            .iter()
            .map(|a| dim.0[a.source] as usize * dim.0[a.target] as usize)
            .sum()
    }

    fn same_context(&self, other: &Representation) -> Result<()> {
        if *self.quiver != *other.quiver {
            return Err(Error::Mismatch("representations live on different quivers".into()));
        }
        if *self.field != *other.field {
            return Err(Error::Mismatch("representations live over different fields".into()));
        }
        Ok(())
    }

    pub fn direct_sum(&self, other: &Representation) -> Result<Representation> {
        self.same_context(other)?;
        let dim = self.dim.add(&other.dim);
        let mats = self
            .quiver
            .arrows()
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let (a_m, b_m) = (&self.mats[k], &other.mats[k]);
                let mut m = Mat::zeros(dim.0[a.target] as usize, dim.0[a.source] as usize);
                for r in 0..a_m.rows() {
                    for c in 0..a_m.cols() {
                        m.set(r, c, a_m.get(r, c));
                    }
                }
                for r in 0..b_m.rows() {
                    for c in 0..b_m.cols() {
                        m.set(a_m.rows() + r, a_m.cols() + c, b_m.get(r, c));
                    }
                }
                m
            })
            .collect();
        Ok(Representation { quiver: self.quiver.clone(), field: self.field.clone(), dim, mats })
    }

    pub fn direct_sum_all(parts: &[Representation], quiver: Arc<Quiver>, field: Arc<Field>) -> Result<Self> {
        let mut acc = Representation::zero(quiver.clone(), field, DimVector::zero(quiver.n()));
        for p in parts {
            acc = acc.direct_sum(p)?;
        }
        Ok(acc)
    }

    // ---- Hom spaces ----

    /// Basis of `Hom(self, other)`, each element flattened vertex by vertex.
    pub fn hom_basis(&self, other: &Representation) -> Result<Vec<Vec<Elem>>> {
        self.same_context(other)?;
        let f = &*self.field;
        let n = self.quiver.n();
        let m = &self.dim.0;
        let nn = &other.dim.0;
        let mut offsets = Vec::with_capacity(n);
        let mut total = 0usize;
        for i in 0..n {
            offsets.push(total);
            total += (m[i] * nn[i]) as usize;
        }
        if total == 0 {
            return Ok(Vec::new());
        }
        let rows: usize = self
            .quiver
            .arrows()
            .iter()
            .map(|a| (nn[a.target] * m[a.source]) as usize)
            .sum();
        let mut sys = Mat::zeros(rows, total);
        let mut row = 0;
        for (k, a) in self.quiver.arrows().iter().enumerate() {
            let (s, t) = (a.source, a.target);
            let xm = &self.mats[k];
            let xn = &other.mats[k];
            // f_t * xm - xn * f_s = 0, entry (r, c)
            for r in 0..nn[t] as usize {
                for c in 0..m[s] as usize {
                    for kk in 0..m[t] as usize {
                        let coef = xm.get(kk, c);
                        if coef != 0 {
                            let var = offsets[t] + r * m[t] as usize + kk;
                            sys.set(row, var, f.add(sys.get(row, var), coef));
                        }
                    }
                    for kk in 0..nn[s] as usize {
                        let coef = xn.get(r, kk);
                        if coef != 0 {
                            let var = offsets[s] + kk * m[s] as usize + c;
                            sys.set(row, var, f.sub(sys.get(row, var), coef));
                        }
                    }
                    row += 1;
                }
            }
        }
        Ok(sys.nullspace(f))
    }

    pub fn dim_hom(&self, other: &Representation) -> Result<usize> {
        Ok(self.hom_basis(other)?.len())
    }

    pub fn euler_with(&self, other: &Representation) -> Result<i64> {
        self.quiver.euler(&self.dim, &other.dim)
    }

    /// `(dim Hom, dim Ext^1)`; the path algebra is hereditary.
    pub fn hom_ext_dims(&self, other: &Representation) -> Result<(usize, usize)> {
        let h = self.dim_hom(other)?;
        let e = h as i64 - self.euler_with(other)?;
        debug_assert!(e >= 0);
        Ok((h, e as usize))
    }

    pub fn dim_end(&self) -> Result<usize> {
        self.dim_hom(self)
    }

    pub fn orbit_dimension(&self) -> Result<i64> {
        let g: i64 = self.dim.0.iter().map(|&d| (d * d) as i64).sum();
        Ok(g - self.dim_end()? as i64)
    }

    /// Splits a flattened morphism `self -> other` into per-vertex matrices.
    pub fn unflatten(&self, other: &Representation, flat: &[Elem]) -> Morphism {
        let mut off = 0;
        (0..self.quiver.n())
            .map(|i| {
                let (r, c) = (other.dim.0[i] as usize, self.dim.0[i] as usize);
                let m = Mat::from_vec(r, c, flat[off..off + r * c].to_vec());
                off += r * c;
                m
            })
            .collect()
    }

    fn flat_is_iso(&self, other: &Representation, flat: &[Elem]) -> bool {
        let f = &*self.field;
        let mut off = 0;
        for i in 0..self.quiver.n() {
            let d = self.dim.0[i] as usize;
            if d != other.dim.0[i] as usize {
                return false;
            }
            let m = Mat::from_vec(d, d, flat[off..off + d * d].to_vec());
            if !m.is_invertible(f) {
                return false;
            }
            off += d * d;
        }
        true
    }

    fn flat_is_nilpotent(&self, flat: &[Elem]) -> bool {
        let f = &*self.field;
        let mut off = 0;
        for &d in &self.dim.0 {
            let d = d as usize;
            let m = Mat::from_vec(d, d, flat[off..off + d * d].to_vec());
            if !m.is_nilpotent(f) {
                return false;
            }
            off += d * d;
        }
        true
    }

    fn flat_identity(&self) -> Vec<Elem> {
        let mut out = Vec::new();
        for &d in &self.dim.0 {
            out.extend_from_slice(Mat::identity(d as usize).data());
        }
        out
    }

    fn flat_compose(&self, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        let f = &*self.field;
        let mut out = Vec::with_capacity(a.len());
        let mut off = 0;
        for &d in &self.dim.0 {
            let d = d as usize;
            let ma = Mat::from_vec(d, d, a[off..off + d * d].to_vec());
            let mb = Mat::from_vec(d, d, b[off..off + d * d].to_vec());
            out.extend_from_slice(ma.mul(f, &mb).data());
            off += d * d;
        }
        out
    }

    /// Calls `visit` on every `F_q`-linear combination of `basis`; stops early on `true`.
    pub fn for_each_combination(
        field: &Field,
        basis: &[Vec<Elem>],
        len: usize,
        mut visit: impl FnMut(&[Elem]) -> bool,
    ) -> bool {
        // Walk the F_p-span of {x^j b_k}; each odometer step adds one generator.
        let spec = field.spec();
        let p = spec.p as usize;
        let gens: Vec<Vec<Elem>> = basis
            .iter()
            .flat_map(|b| {
                (0..spec.degree).map(move |j| {
                    let scalar = (spec.p as usize).pow(j) as Elem;
                    b.iter().map(|&x| field.mul(x, scalar)).collect::<Vec<_>>()
                })
            })
            .collect();
        let mut cur = vec![0 as Elem; len];
        let mut digits = vec![0usize; gens.len()];
        loop {
            if visit(&cur) {
                return true;
            }
            let mut k = 0;
            loop {
                if k == gens.len() {
                    return false;
                }
                for (c, g) in cur.iter_mut().zip(&gens[k]) {
                    *c = field.add(*c, *g);
                }
                digits[k] += 1;
                if digits[k] < p {
                    break;
                }
                digits[k] = 0;
                k += 1;
            }
        }
    }

    fn random_combination(field: &Field, basis: &[Vec<Elem>], len: usize, rng: &mut impl Rng) -> Vec<Elem> {
        let mut out = vec![0 as Elem; len];
        for b in basis {
            let c = rng.gen_range(0..field.size()) as Elem;
            if c != 0 {
                for (o, &x) in out.iter_mut().zip(b) {
                    *o = field.add(*o, field.mul(c, x));
                }
            }
        }
        out
    }

    fn seeded_rng(&self) -> ChaCha8Rng {
        let mut seed = 0xC0FFEEu64;
        for x in self.point() {
            seed = seed.wrapping_mul(1_000_003).wrapping_add(x as u64);
        }
        ChaCha8Rng::seed_from_u64(seed)
    }

    /// Exact isomorphism test: searches `Hom(self, other)` for an invertible map.
    pub fn is_isomorphic(&self, other: &Representation, guards: &Guards) -> Result<bool> {
        self.same_context(other)?;
        if self.dim != other.dim {
            return Ok(false);
        }
        for (a, b) in self.mats.iter().zip(&other.mats) {
            if a.rank(&self.field) != b.rank(&self.field) {
                return Ok(false);
            }
        }
        if self.mats == other.mats {
            return Ok(true);
        }
        let hom = self.hom_basis(other)?;
        let e1 = self.dim_end()?;
        if hom.len() != e1 || other.dim_end()? != e1 {
            return Ok(false);
        }
        let len: usize = self.dim.0.iter().map(|&d| (d * d) as usize).sum();
        if hom.iter().any(|b| self.flat_is_iso(other, b)) {
            return Ok(true);
        }
        let mut rng = self.seeded_rng();
        for _ in 0..48 {
            let c = Self::random_combination(&self.field, &hom, len, &mut rng);
            if self.flat_is_iso(other, &c) {
                return Ok(true);
            }
        }
        self_guard(&self.field, hom.len(), guards, "isomorphism search over Hom")?;
        Ok(Self::for_each_combination(&self.field, &hom, len, |c| self.flat_is_iso(other, c)))
    }

    /// `|Aut(self)|` by counting units of `End(self)`.
    pub fn aut_order_bruteforce(&self, guards: &Guards) -> Result<u128> {
        let basis = self.hom_basis(self)?;
        self_guard(&self.field, basis.len(), guards, "unit count in End")?;
        let len: usize = self.dim.0.iter().map(|&d| (d * d) as usize).sum();
        let mut count: u128 = 0;
        Self::for_each_combination(&self.field, &basis, len, |c| {
            if self.flat_is_iso(self, c) {
                count += 1;
            }
            false
        });
        Ok(count)
    }

    // ---- Fitting decomposition ----

    /// Finds an endomorphism that is neither nilpotent nor invertible, or certifies
    /// that `End(self)` is local. On a local ring returns the residue degree `d`
    /// (`End / rad = F_{q^d}`).
    pub fn splitting_endomorphism(&self, guards: &Guards) -> Result<std::result::Result<Vec<Elem>, u32>> {
        let f = &*self.field;
        let basis = self.hom_basis(self)?;
        if self.is_zero_module() {
            return Ok(Err(0));
        }
        if basis.len() == 1 {
            return Ok(Err(1));
        }
        let id = self.flat_identity();
        let len = id.len();
        let shift = |b: &[Elem], lambda: Elem| -> Vec<Elem> {
            b.iter().zip(&id).map(|(&x, &i)| f.sub(x, f.mul(lambda, i))).collect()
        };
        let mut nil_parts = Vec::with_capacity(basis.len());
        let mut all_scalar_plus_nil = true;
        for b in &basis {
            let mut found = None;
            for lambda in f.elements() {
                let g = shift(b, lambda);
                if self.flat_is_nilpotent(&g) {
                    found = Some(g);
                    break;
                }
                if !self.flat_is_iso(self, &g) {
                    return Ok(Ok(g));
                }
            }
            match found {
                Some(g) => nil_parts.push(g),
                None => all_scalar_plus_nil = false,
            }
        }
        if all_scalar_plus_nil && self.nilpotent_ideal(&nil_parts) {
            return Ok(Err(1));
        }
        let mut rng = self.seeded_rng();
        for _ in 0..64 {
            let c = Self::random_combination(f, &basis, len, &mut rng);
            if !self.flat_is_nilpotent(&c) && !self.flat_is_iso(self, &c) {
                return Ok(Ok(c));
            }
        }
        self_guard(f, basis.len(), guards, "locality check of End")?;
        let mut witness = None;
        let mut units: u128 = 0;
        Self::for_each_combination(f, &basis, len, |c| {
            let iso = self.flat_is_iso(self, c);
            if iso {
                units += 1;
            } else if !self.flat_is_nilpotent(c) {
                witness = Some(c.to_vec());
                return true;
            }
            false
        });
        if let Some(w) = witness {
            return Ok(Ok(w));
        }
        // Local: units = q^e - q^{e-d}.
        let e = basis.len() as u64;
        let q = f.q();
        let non_units = qpow(q, e) - units;
        let mut d = 0u32;
        while qpow(q, e - d as u64) > non_units {
            d += 1;
        }
        Ok(Err(d))
    }

    /// True when the span of `parts` is closed under composition and nilpotent.
    fn nilpotent_ideal(&self, parts: &[Vec<Elem>]) -> bool {
        let f = &*self.field;
        let len = parts.first().map_or(0, Vec::len);
        let span_rank = |vs: &[Vec<Elem>]| crate::matrix::rank_of_vectors(f, vs, len);
        let base_rank = span_rank(parts);
        for a in parts {
            for b in parts {
                let mut ext = parts.to_vec();
                ext.push(self.flat_compose(a, b));
                if span_rank(&ext) != base_rank {
                    return false;
                }
            }
        }
        let mut power: Vec<Vec<Elem>> = parts.to_vec();
        let total: usize = self.total_dim() as usize;
        for _ in 0..=total {
            let next: Vec<Vec<Elem>> = power
                .iter()
                .flat_map(|x| parts.iter().map(move |n| (n, x)))
                .map(|(n, x)| self.flat_compose(n, x))
                .filter(|v| v.iter().any(|&e| e != 0))
                .collect();
            if next.is_empty() {
                return true;
            }
            let r = span_rank(&next);
            if r == 0 {
                return true;
            }
            // Keep an independent spanning set.
            let mut m = Mat::from_rows(&next, len);
            m.rref_in_place(f);
            power = (0..r).map(|i| m.row(i).to_vec()).collect();
        }
        false
    }

    /// Decomposes into indecomposable summands; each comes with its residue degree.
    pub fn indecomposable_summands(&self, guards: &Guards) -> Result<Vec<(Representation, u32)>> {
        if self.is_zero_module() {
            return Ok(Vec::new());
        }
        match self.splitting_endomorphism(guards)? {
            Err(d) => Ok(vec![(self.clone(), d)]),
            Ok(g) => {
                let (image, kernel) = self.fitting_split(&g);
                let mut out = image.indecomposable_summands(guards)?;
                out.extend(kernel.indecomposable_summands(guards)?);
                Ok(out)
            }
        }
    }

    /// `self = Im g^N (+) Ker g^N` for an endomorphism `g`.
    fn fitting_split(&self, g: &[Elem]) -> (Representation, Representation) {
        let f = &*self.field;
        let maps = self.unflatten(self, g);
        let total = self.total_dim() as usize;
        let mut images = Vec::new();
        let mut kernels = Vec::new();
        for (i, m) in maps.iter().enumerate() {
            let d = self.dim.0[i] as usize;
            let mut p = Mat::identity(d);
            for _ in 0..total.max(1) {
                p = p.mul(f, m);
            }
            let mut img = p.transpose();
            let r = img.rref_in_place(f).len();
            images.push(Mat::from_rows(&(0..r).map(|k| img.row(k).to_vec()).collect::<Vec<_>>(), d));
            let ker = p.nullspace(f);
            let mut kmat = Mat::from_rows(&ker, d);
            let kr = kmat.rref_in_place(f).len();
            kernels.push(Mat::from_rows(&(0..kr).map(|k| kmat.row(k).to_vec()).collect::<Vec<_>>(), d));
        }
        let img_rep = self.restrict(&images).expect("image is a subrepresentation");
        let ker_rep = self.restrict(&kernels).expect("kernel is a subrepresentation");
        (img_rep, ker_rep)
    }

    // ---- Subrepresentations and quotients ----

    /// Restriction to a graded subspace given per vertex by an RREF row basis.
    /// Returns `None` when the subspace is not stable.
    pub fn restrict(&self, sub: &[Mat]) -> Option<Representation> {
        let f = &*self.field;
        let dim = DimVector(sub.iter().map(|m| m.rows() as u32).collect());
        let pivots: Vec<Vec<usize>> = sub.iter().map(pivot_columns).collect();
        let mut mats = Vec::with_capacity(self.mats.len());
        for (k, a) in self.quiver.arrows().iter().enumerate() {
            let (s, t) = (a.source, a.target);
            let x = &self.mats[k];
            let ws = &sub[s];
            let wt = &sub[t];
            let mut m = Mat::zeros(wt.rows(), ws.rows());
            for col in 0..ws.rows() {
                let image = x.mul_vec(f, ws.row(col));
                let coords: Vec<Elem> = pivots[t].iter().map(|&p| image[p]).collect();
                // Verify image lies in W_t.
                let mut recon = vec![0 as Elem; image.len()];
                for (j, &c) in coords.iter().enumerate() {
                    if c != 0 {
                        for (rv, &w) in recon.iter_mut().zip(wt.row(j)) {
                            *rv = f.add(*rv, f.mul(c, w));
                        }
                    }
                }
                if recon != image {
                    return None;
                }
                for (j, &c) in coords.iter().enumerate() {
                    m.set(j, col, c);
                }
            }
            mats.push(m);
        }
        Some(Representation { quiver: self.quiver.clone(), field: self.field.clone(), dim, mats })
    }

    /// Quotient by a stable graded subspace (RREF row bases); the complement
    /// basis is the set of standard vectors at non-pivot columns.
    pub fn quotient(&self, sub: &[Mat]) -> Representation {
        let f = &*self.field;
        let n = self.quiver.n();
        let pivots: Vec<Vec<usize>> = sub.iter().map(pivot_columns).collect();
        let free: Vec<Vec<usize>> = (0..n)
            .map(|i| (0..self.dim.0[i] as usize).filter(|c| !pivots[i].contains(c)).collect())
            .collect();
        let dim = DimVector(free.iter().map(|v| v.len() as u32).collect());
        let mut mats = Vec::with_capacity(self.mats.len());
        for (k, a) in self.quiver.arrows().iter().enumerate() {
            let (s, t) = (a.source, a.target);
            let x = &self.mats[k];
            let mut m = Mat::zeros(free[t].len(), free[s].len());
            for (col, &c) in free[s].iter().enumerate() {
                let mut image: Vec<Elem> = (0..x.rows()).map(|r| x.get(r, c)).collect();
                for (j, &p) in pivots[t].iter().enumerate() {
                    let coef = image[p];
                    if coef != 0 {
                        for (iv, &w) in image.iter_mut().zip(sub[t].row(j)) {
                            *iv = f.sub(*iv, f.mul(coef, w));
                        }
                    }
                }
                for (row, &r) in free[t].iter().enumerate() {
                    m.set(row, col, image[r]);
                }
            }
            mats.push(m);
        }
        Representation { quiver: self.quiver.clone(), field: self.field.clone(), dim, mats }
    }

    /// Middle term of the extension of `quot` by `sub` given by a cocycle
    /// `c = (c_rho : quot_s -> sub_t)`: matrices `[[x^sub, c], [0, x^quot]]`.
    pub fn extension(sub: &Representation, quot: &Representation, cocycle: &[Mat]) -> Result<Representation> {
        sub.same_context(quot)?;
        let dim = sub.dim.add(&quot.dim);
        let mut mats = Vec::new();
        for (k, a) in sub.quiver.arrows().iter().enumerate() {
            let (s, t) = (a.source, a.target);
            let (ns, nt) = (sub.dim.0[s] as usize, sub.dim.0[t] as usize);
            let (ms, mt) = (quot.dim.0[s] as usize, quot.dim.0[t] as usize);
            let mut m = Mat::zeros(nt + mt, ns + ms);
            for r in 0..nt {
                for c in 0..ns {
                    m.set(r, c, sub.mats[k].get(r, c));
                }
                for c in 0..ms {
                    m.set(r, ns + c, cocycle[k].get(r, c));
                }
            }
            for r in 0..mt {
                for c in 0..ms {
                    m.set(nt + r, ns + c, quot.mats[k].get(r, c));
                }
            }
            mats.push(m);
        }
        Ok(Representation { quiver: sub.quiver.clone(), field: sub.field.clone(), dim, mats })
    }

    /// Shape of the cocycle space `Π_rho Hom(quot_s, sub_t)`.
    pub fn cocycle_shapes(sub: &Representation, quot: &Representation) -> Vec<(usize, usize)> {
        sub.quiver
            .arrows()
            .iter()
            .map(|a| (sub.dim.0[a.target] as usize, quot.dim.0[a.source] as usize))
            .collect()
    }

    // ---- Serialization ----

    pub fn to_json_value(&self) -> serde_json::Value {
        let mats = self
            .quiver
            .arrows()
            .iter()
            .zip(&self.mats)
            .map(|(a, m)| (a.id.clone(), m.data().iter().map(|&x| x as u32).collect()))
            .collect();
        let file = RepFile { field: self.field.spec().clone(), dim: self.dim.0.clone(), mats };
        serde_json::to_value(file).expect("representation serializes")
    }

    pub fn to_json(&self) -> String {
        self.to_json_value().to_string()
    }

    pub fn from_json(text: &str, quiver: Arc<Quiver>) -> Result<Representation> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        Self::from_json_value(&value, quiver)
    }

    pub fn from_json_value(value: &serde_json::Value, quiver: Arc<Quiver>) -> Result<Representation> {
        let file: RepFile = serde_json::from_value(value.clone())?;
        let field = Field::from_spec(&file.field)?;
        let dim = quiver.dim(&file.dim)?;
        if file.mats.len() != quiver.arrows().len() {
            return Err(Error::Input("representation must list every arrow exactly once".into()));
        }
        let mut mats = Vec::new();
        for a in quiver.arrows() {
            let entries = file
                .mats
                .get(&a.id)
                .ok_or_else(|| Error::Input(format!("missing matrix for arrow `{}`", a.id)))?;
            let (r, c) = (dim.0[a.target] as usize, dim.0[a.source] as usize);
            if entries.len() != r * c {
                return Err(Error::Input(format!("arrow `{}` needs {} entries", a.id, r * c)));
            }
            if entries.iter().any(|&x| x >= field.q()) {
                return Err(Error::Input(format!("entry out of range for F_{}", field.q())));
            }
            mats.push(Mat::from_vec(r, c, entries.iter().map(|&x| x as Elem).collect()));
        }
        Representation::new(quiver, field, dim, mats)
    }
}

fn self_guard(field: &Field, dim: usize, guards: &Guards, what: &str) -> Result<()> {
    guards.check_hom(what, field.q(), dim)
}

pub fn pivot_columns(m: &Mat) -> Vec<usize> {
    (0..m.rows())
        .map(|r| m.row(r).iter().position(|&x| x != 0).expect("RREF rows are nonzero"))
        .collect()
}

/// Composes a morphism with representation data check: `g` intertwines `m -> n`.
pub fn is_morphism(m: &Representation, n: &Representation, g: &Morphism) -> bool {
    let f = &*m.field;
    m.quiver.arrows().iter().enumerate().all(|(k, a)| {
        g[a.target].mul(f, &m.mats[k]) == n.mats[k].mul(f, &g[a.source])
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> Arc<Quiver> {
        Arc::new(Quiver::from_json(r#"{"vertices":["1","2"],"arrows":[["a","1","2"]]}"#).unwrap())
    }

    #[test]
    fn projective_and_injective_of_a2() {
        let q = a2();
        let f = Field::new(3).unwrap();
        let p1 = Representation::projective(q.clone(), f.clone(), 0);
        assert_eq!(p1.dim().0, vec![1, 1]);
        let i2 = Representation::injective(q.clone(), f.clone(), 1);
        assert_eq!(i2.dim().0, vec![1, 1]);
        let g = Guards::default();
        assert!(p1.is_isomorphic(&i2, &g).unwrap());
        assert_eq!(p1.dim_end().unwrap(), 1);
        assert_eq!(p1.aut_order_bruteforce(&g).unwrap(), 2);
    }

    #[test]
    fn hom_ext_of_simples() {
        let q = a2();
        let f = Field::new(2).unwrap();
        let s1 = Representation::simple(q.clone(), f.clone(), 0);
        let s2 = Representation::simple(q.clone(), f.clone(), 1);
        let p1 = Representation::projective(q.clone(), f.clone(), 0);
        assert_eq!(s2.hom_ext_dims(&p1).unwrap(), (1, 0));
        assert_eq!(s1.hom_ext_dims(&s2).unwrap(), (0, 1));
    }

    #[test]
    fn gl2_automorphisms() {
        let q = Arc::new(Quiver::new(vec!["1".into()], vec![]).unwrap());
        let f = Field::new(3).unwrap();
        let m = Representation::zero(q, f, DimVector(vec![2]));
        assert_eq!(m.aut_order_bruteforce(&Guards::default()).unwrap(), 48);
    }

    #[test]
    fn fitting_split_of_semisimple() {
        let q = a2();
        let f = Field::new(2).unwrap();
        let m = Representation::zero(q, f, DimVector(vec![1, 1]));
        let parts = m.indecomposable_summands(&Guards::default()).unwrap();
        assert_eq!(parts.len(), 2);
    }

    #[test]
    fn json_roundtrip() {
        let q = a2();
        let f = Field::new(4).unwrap();
        let p1 = Representation::projective(q.clone(), f, 0);
        let back = Representation::from_json(&p1.to_json(), q).unwrap();
        assert_eq!(back, p1);
    }
}
