//! The twisted Hall algebra at a fixed `q`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use serde_json::{json, Value};

use crate::coeff::{parse_rational, quantum_factorial, Coeff};
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::field::prime_power;
use crate::orbit::{ClassKey, PointSpace};
use crate::quiver::DimVector;

/// Finite formal sum `Σ c_L u_L` with coefficients in `Q(sqrt q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HallElement {
    q: u32,
    terms: BTreeMap<ClassKey, Coeff>,
}

impl HallElement {
    pub fn zero(q: u32) -> Self {
        HallElement { q, terms: BTreeMap::new() }
    }

    pub fn basis(q: u32, key: ClassKey) -> Self {
        Self::term(key, Coeff::one(q))
    }

    pub fn one(q: u32, n: usize) -> Self {
        Self::basis(q, ClassKey::zero(n))
    }

    pub fn term(key: ClassKey, c: Coeff) -> Self {
        let mut x = HallElement::zero(c.q());
        x.add_term(key, c);
        x
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn terms(&self) -> &BTreeMap<ClassKey, Coeff> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &ClassKey) -> Coeff {
        self.terms.get(key).cloned().unwrap_or_else(|| Coeff::zero(self.q))
    }

    pub fn add_term(&mut self, key: ClassKey, c: Coeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(x) => {
                *x = &*x + &c;
                if x.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn add(&self, other: &HallElement) -> HallElement {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &HallElement) -> HallElement {
        self.add(&other.scale(&Coeff::from_int(self.q, -1)))
    }

    pub fn scale(&self, c: &Coeff) -> HallElement {
        let mut out = HallElement::zero(self.q);
        for (k, x) in &self.terms {
            out.add_term(k.clone(), x * c);
        }
        out
    }

    /// Dimension vectors present in the support.
    pub fn degrees(&self) -> BTreeSet<DimVector> {
        self.terms.keys().map(|k| k.dim.clone()).collect()
    }

    pub fn homogeneous_part(&self, d: &DimVector) -> HallElement {
        let terms = self.terms.iter().filter(|(k, _)| &k.dim == d).map(|(k, c)| (k.clone(), c.clone())).collect();
        HallElement { q: self.q, terms }
    }

    /// The unique degree of a nonzero homogeneous element.
    pub fn degree(&self) -> Option<DimVector> {
        let d = self.degrees();
        (d.len() == 1).then(|| d.into_iter().next().unwrap())
    }

    pub fn to_json_value(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(k, c)| {
                json!({
                    "dim": k.dim.0,
                    "code": k.code,
                    "a": c.rational_part().to_string(),
                    "b": c.sqrt_part().to_string(),
                })
            })
            .collect();
        json!({ "q": self.q, "terms": terms })
    }

    pub fn to_json(&self) -> String {
        self.to_json_value().to_string()
    }

    /// Structural parse; `Engine::canonicalize` checks the classes against a quiver.
    pub fn from_json(text: &str) -> Result<HallElement> {
        let v: Value = serde_json::from_str(text)?;
        Self::from_json_value(&v)
    }

    pub fn from_json_value(v: &Value) -> Result<HallElement> {
        let bad = |m: &str| Error::Input(format!("hall element: {m}"));
        let q = v.get("q").and_then(Value::as_u64).ok_or_else(|| bad("missing q"))?;
        let q = u32::try_from(q).map_err(|_| bad("q out of range"))?;
        if q > 256 || prime_power(q).is_none() {
            return Err(bad("q must be a prime power at most 256"));
        }
        let terms = v.get("terms").and_then(Value::as_array).ok_or_else(|| bad("missing terms"))?;
        let mut out = HallElement::zero(q);
        for t in terms {
            let dim: Vec<u32> = serde_json::from_value(t.get("dim").cloned().ok_or_else(|| bad("term without dim"))?)
                .map_err(|_| bad("dim must be a list of naturals"))?;
            let code: Vec<u8> = serde_json::from_value(t.get("code").cloned().unwrap_or(json!([])))
                .map_err(|_| bad("code must be a list of field elements"))?;
            if code.iter().any(|&x| x as u32 >= q) {
                return Err(bad("code entry outside the field"));
            }
            let rat = |name: &str| -> Result<_> {
                match t.get(name) {
                    None => Ok(num_rational::BigRational::from_integer(0.into())),
                    Some(Value::String(s)) => parse_rational(s).ok_or_else(|| bad("bad rational")),
                    Some(Value::Number(n)) => {
                        parse_rational(&n.to_string()).ok_or_else(|| bad("coefficients must be integers or strings"))
                    }
                    _ => Err(bad("bad coefficient")),
                }
            };
            let c = Coeff::new(q, rat("a")?, rat("b")?);
            out.add_term(ClassKey { dim: DimVector(dim), code }, c);
        }
        Ok(out)
    }
}

/// Incremental sparse row echelon form over `Q(sqrt q)`.
pub struct Span {
    rows: BTreeMap<ClassKey, HallElement>,
    basis: Vec<HallElement>,
}

impl Default for Span {
    fn default() -> Self {
        Self::new()
    }
}

impl Span {
    pub fn new() -> Self {
        Span { rows: BTreeMap::new(), basis: Vec::new() }
    }

    pub fn reduce(&self, x: &HallElement) -> HallElement {
        let mut r = x.clone();
        // Each stored row has no entries before its pivot, so one ascending pass suffices.
        for (p, row) in &self.rows {
            let c = r.coeff(p);
            if !c.is_zero() {
                r = r.sub(&row.scale(&c));
            }
        }
        r
    }

    /// Adds `x`; returns whether it enlarged the span.
    pub fn insert(&mut self, x: &HallElement) -> bool {
        let r = self.reduce(x);
        let Some((p, c)) = r.terms.iter().next() else { return false };
        let p = p.clone();
        let row = r.scale(&c.inv());
        self.rows.insert(p, row);
        self.basis.push(x.clone());
        true
    }

    pub fn contains(&self, x: &HallElement) -> bool {
        self.reduce(x).is_zero()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// The inserted elements that were independent, in insertion order.
    pub fn basis(&self) -> &[HallElement] {
        &self.basis
    }
}

/// Rank of the degree-`d` parts of a family.
pub fn graded_rank(elements: &[HallElement], d: &DimVector) -> usize {
    let mut span = Span::new();
    for x in elements {
        span.insert(&x.homogeneous_part(d));
    }
    span.rank()
}

impl Engine {
    pub fn u(&self, key: &ClassKey) -> HallElement {
        HallElement::basis(self.q(), key.clone())
    }

    pub fn one(&self) -> HallElement {
        HallElement::one(self.q(), self.n())
    }

    pub fn u_simple(&self, i: usize) -> Result<HallElement> {
        Ok(self.u(&self.identify(&self.simple(i))?))
    }

    /// `v^{-dim M + dim End M} u_M`.
    pub fn rescaled_exponent(&self, key: &ClassKey) -> Result<i64> {
        if key.is_zero() {
            return Ok(0);
        }
        let info = self.info(key)?;
        Ok(info.dim_end as i64 - key.dim.total() as i64)
    }

    pub fn rescaled(&self, key: &ClassKey) -> Result<HallElement> {
        Ok(HallElement::term(key.clone(), Coeff::v_pow(self.q(), self.rescaled_exponent(key)?)))
    }

    /// Checks every class against this engine's quiver and field and replaces
    /// it by its canonical key.
    pub fn canonicalize(&self, x: &HallElement) -> Result<HallElement> {
        if x.q() != self.q() {
            return Err(Error::Mismatch(format!("element over q={} used with q={}", x.q(), self.q())));
        }
        let mut out = HallElement::zero(self.q());
        for (k, c) in x.terms() {
            if k.dim.0.len() != self.n() {
                return Err(Error::Input("class dimension vector has the wrong length".into()));
            }
            let len = PointSpace::new(self.quiver(), self.field().clone(), &k.dim).len();
            if k.code.len() != len {
                return Err(Error::Input(format!("class code has length {} but E_d has dimension {len}", k.code.len())));
            }
            let key = self.identify(&self.rep_of(k))?;
            out.add_term(key, c.clone());
        }
        Ok(out)
    }

    /// Nonzero Hall numbers `g^L_{MN}` for all `L`, memoized.
    pub fn product_row(&self, m: &ClassKey, n: &ClassKey) -> Result<Arc<Vec<(ClassKey, u128)>>> {
        let k = (m.clone(), n.clone());
        if let Some(r) = self.rows.lock().unwrap().get(&k) {
            return Ok(r.clone());
        }
        let row = Arc::new(self.extension_targets(m, n)?);
        self.rows.lock().unwrap().insert(k, row.clone());
        Ok(row)
    }

    fn basis_product(&self, m: &ClassKey, n: &ClassKey, twisted: bool) -> Result<HallElement> {
        let q = self.q();
        let twist = if twisted { Coeff::v_pow(q, self.euler(&m.dim, &n.dim)) } else { Coeff::one(q) };
        let mut out = HallElement::zero(q);
        for (l, g) in self.product_row(m, n)?.iter() {
            out.add_term(l.clone(), &twist * &Coeff::from_u128(q, *g));
        }
        Ok(out)
    }

    fn product_with(&self, x: &HallElement, y: &HallElement, twisted: bool) -> Result<HallElement> {
        let mut out = HallElement::zero(self.q());
        for (m, a) in x.terms() {
            for (n, b) in y.terms() {
                let ab = a * b;
                for (l, g) in self.basis_product(m, n, twisted)?.terms() {
                    out.add_term(l.clone(), &ab * g);
                }
            }
        }
        Ok(out)
    }

    /// Twisted product `u_M * u_N = v^{<M,N>} Σ g^L_{MN} u_L`.
    pub fn product(&self, x: &HallElement, y: &HallElement) -> Result<HallElement> {
        self.product_with(x, y, true)
    }

    /// The same product with the twist forced to 1.
    pub fn untwisted_product(&self, x: &HallElement, y: &HallElement) -> Result<HallElement> {
        self.product_with(x, y, false)
    }

    pub fn product_all(&self, factors: &[HallElement]) -> Result<HallElement> {
        let mut acc = self.one();
        for f in factors {
            acc = self.product(&acc, f)?;
        }
        Ok(acc)
    }

    fn power_with(&self, x: &HallElement, p: u32, twisted: bool) -> Result<HallElement> {
        let mut acc = self.one();
        for _ in 0..p {
            acc = self.product_with(&acc, x, twisted)?;
        }
        Ok(acc)
    }

    /// `x^(p) = x^p / [p]!`.
    pub fn divided_power(&self, x: &HallElement, p: u32, twisted: bool) -> Result<HallElement> {
        let f = quantum_factorial(self.q(), p as i64);
        Ok(self.power_with(x, p, twisted)?.scale(&f.inv()))
    }

    /// Left side of the quantum Serre relation for the ordered pair `(i, j)`.
    pub fn serre_expression(&self, i: usize, j: usize, twisted: bool) -> Result<HallElement> {
        let a = self.quiver().cartan_matrix()[i][j];
        let top = (1 - a) as u32;
        let (xi, xj) = (self.u_simple(i)?, self.u_simple(j)?);
        let mut sum = HallElement::zero(self.q());
        for p in 0..=top {
            let left = self.divided_power(&xi, p, twisted)?;
            let right = self.divided_power(&xi, top - p, twisted)?;
            let term = self.product_with(&self.product_with(&left, &xj, twisted)?, &right, twisted)?;
            let sign = Coeff::from_int(self.q(), if p % 2 == 0 { 1 } else { -1 });
            sum = sum.add(&term.scale(&sign));
        }
        Ok(sum)
    }

    pub fn serre_check(&self, i: usize, j: usize, twisted: bool) -> Result<bool> {
        if i == j {
            return Err(Error::Input("Serre relation needs two distinct vertices".into()));
        }
        Ok(self.serre_expression(i, j, twisted)?.is_zero())
    }

    /// Checks every ordered pair of distinct vertices; returns failures and the pair count.
    pub fn serre_all(&self, twisted: bool) -> Result<(Vec<(usize, usize)>, usize)> {
        let n = self.n();
        let mut failed = Vec::new();
        let mut pairs = 0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    pairs += 1;
                    if !self.serre_check(i, j, twisted)? {
                        failed.push((i, j));
                    }
                }
            }
        }
        Ok((failed, pairs))
    }

    /// All classes of dimension `d` as basis elements.
    pub fn graded_piece(&self, d: &DimVector) -> Result<Vec<HallElement>> {
        Ok(self.classes_or_zero(d)?.iter().map(|k| self.u(k)).collect())
    }

    /// A basis of the degree-`d` piece of the subalgebra generated by
    /// homogeneous `generators`.
    pub fn subalgebra_basis(&self, generators: &[HallElement], d: &DimVector) -> Result<Vec<HallElement>> {
        let mut gens = Vec::new();
        for g in generators {
            match g.degree() {
                Some(deg) if !deg.is_zero() => gens.push((deg, g.clone())),
                Some(_) => {}
                None if g.is_zero() => {}
                None => return Err(Error::Input("subalgebra generators must be homogeneous".into())),
            }
        }
        let mut memo: HashMap<DimVector, Vec<HallElement>> = HashMap::new();
        memo.insert(self.zero_dim(), vec![self.one()]);
        // `below` lists vectors in lexicographic order, so smaller degrees come first.
        for e in d.below() {
            if e.is_zero() {
                continue;
            }
            let mut span = Span::new();
            for (deg, g) in &gens {
                let Some(rest) = e.checked_sub(deg) else { continue };
                let lower = memo.get(&rest).cloned().unwrap_or_default();
                for w in &lower {
                    span.insert(&self.product(g, w)?);
                }
            }
            memo.insert(e, span.basis().to_vec());
        }
        Ok(memo.remove(d).unwrap_or_default())
    }

    pub fn subalgebra_graded_dim(&self, generators: &[HallElement], d: &DimVector) -> Result<usize> {
        Ok(self.subalgebra_basis(generators, d)?.len())
    }

    /// Generators `u_{S_i}` of the composition algebra.
    pub fn composition_generators(&self) -> Result<Vec<HallElement>> {
        (0..self.n()).map(|i| self.u_simple(i)).collect()
    }

    /// `f_M * f_N` computed by pointwise convolution, rewritten in the
    /// rescaled basis; equals `<M> * <N>` when the two models agree.
    pub fn convolution_product_rescaled(&self, m: &ClassKey, n: &ClassKey) -> Result<HallElement> {
        let q = self.q();
        let (a, b) = (&m.dim, &n.dim);
        let quiver = self.quiver();
        let mut mm: i64 = a.0.iter().zip(&b.0).map(|(x, y)| (*x as i64) * (*y as i64)).sum();
        for r in quiver.arrows() {
            mm += a.0[r.source] as i64 * b.0[r.target] as i64;
        }
        let od_m = self.info(m)?.orbit_dim;
        let od_n = self.info(n)?.orbit_dim;
        let mut out = HallElement::zero(q);
        for (l, c) in self.convolution_coefficients(m, n)? {
            if c == 0 {
                continue;
            }
            // f_M o f_N = v^{-m(a,b) - dim O_M - dim O_N} Σ c_L 1_L and 1_L = v^{dim O_L} f_L.
            let od_l = self.info(&l)?.orbit_dim;
            let e = -mm - od_m - od_n + od_l;
            out.add_term(l, &Coeff::v_pow(q, e) * &Coeff::from_u128(q, c));
        }
        Ok(out)
    }

    /// `<M> * <N>` written in the rescaled basis `{<L>}`.
    pub fn rescaled_product_in_rescaled_basis(&self, m: &ClassKey, n: &ClassKey) -> Result<HallElement> {
        let q = self.q();
        let prod = self.product(&self.rescaled(m)?, &self.rescaled(n)?)?;
        let mut out = HallElement::zero(q);
        for (l, c) in prod.terms() {
            out.add_term(l.clone(), c * &Coeff::v_pow(q, -self.rescaled_exponent(l)?));
        }
        Ok(out)
    }
}
