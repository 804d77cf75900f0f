//! The extended positive half: basis `K_μ u_α`, Green's comultiplication,
//! the antipode, the pairing `φ` and Hopf-axiom checks.
//!
//! Elements are kept in the normal form `K_μ u_α` (torus part on the left).
//! Tensor factors multiply componentwise; since `Δ(u_λ)` carries `K_β` next to
//! the left factor, this reproduces the twisted tensor product of the
//! unextended algebra.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::algebra::HallElement;
use crate::coeff::{nullspace, Coeff};
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::orbit::ClassKey;
use crate::quiver::DimVector;

/// Integer weight `μ` of a torus element `K_μ`.
pub type Weight = Vec<i64>;

/// A basis monomial `K_μ u_α`.
pub type Monomial = (Weight, ClassKey);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedElement {
    q: u32,
    terms: BTreeMap<Monomial, Coeff>,
}

impl ExtendedElement {
    pub fn zero(q: u32) -> Self {
        ExtendedElement { q, terms: BTreeMap::new() }
    }

    pub fn one(q: u32, n: usize) -> Self {
        Self::monomial(q, vec![0; n], ClassKey::zero(n))
    }

    pub fn monomial(q: u32, mu: Weight, key: ClassKey) -> Self {
        let mut out = Self::zero(q);
        out.add_term((mu, key), Coeff::one(q));
        out
    }

    /// `K_μ`.
    pub fn k(q: u32, mu: Weight) -> Self {
        let n = mu.len();
        Self::monomial(q, mu, ClassKey::zero(n))
    }

    /// Embeds `Σ c_α u_α` with trivial torus part.
    pub fn from_hall(x: &HallElement, n: usize) -> Self {
        let mut out = Self::zero(x.q());
        for (k, c) in x.terms() {
            out.add_term((vec![0; n], k.clone()), c.clone());
        }
        out
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Coeff> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(|| Coeff::zero(self.q))
    }

    pub fn add_term(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(|| Coeff::zero(self.q));
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Coeff::from_int(self.q, -1)))
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        let mut out = Self::zero(self.q);
        for (m, x) in &self.terms {
            out.add_term(m.clone(), x * c);
        }
        out
    }
}

impl fmt::Display for ExtendedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((mu, k), c)| format!("({c})*K{mu:?}*u[{}|{:?}]", k.dim, k.code))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A finite sum of `k`-fold tensors of monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor {
    q: u32,
    terms: BTreeMap<Vec<Monomial>, Coeff>,
}

impl Tensor {
    pub fn zero(q: u32) -> Self {
        Tensor { q, terms: BTreeMap::new() }
    }

    pub fn terms(&self) -> &BTreeMap<Vec<Monomial>, Coeff> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Vec<Monomial>, c: Coeff) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(|| Coeff::zero(self.q));
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    /// `x ⊗ y`.
    pub fn pure(x: &ExtendedElement, y: &ExtendedElement) -> Self {
        let mut out = Tensor::zero(x.q);
        for (a, c) in &x.terms {
            for (b, d) in &y.terms {
                out.add_term(vec![a.clone(), b.clone()], c * d);
            }
        }
        out
    }
}

/// Interpretation of `|V_α|` in the pairing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VolumeMode {
    /// `q^{dim M(α)}`, the size of the underlying space.
    Dimension,
    /// `|O_α|`, the size of the orbit in the representation space.
    OrbitSize,
}

/// Outcome of the Hopf suite on one class.
#[derive(Clone, Debug, Serialize)]
pub struct HopfReport {
    pub dim: DimVector,
    pub code: Vec<u8>,
    pub counit: bool,
    pub coassociative: bool,
    pub antipode: bool,
    pub antipode_formulas_agree: bool,
}

fn wadd(a: &[i64], b: &[i64]) -> Weight {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn wneg(a: &[i64]) -> Weight {
    a.iter().map(|x| -x).collect()
}

impl Engine {
    fn sym_w(&self, a: &[i64], b: &[i64]) -> i64 {
        self.quiver().symmetric_i(a, b).expect("weights come from this quiver")
    }

    pub fn ext_one(&self) -> ExtendedElement {
        ExtendedElement::one(self.q(), self.n())
    }

    pub fn ext_u(&self, key: &ClassKey) -> ExtendedElement {
        ExtendedElement::monomial(self.q(), vec![0; self.n()], key.clone())
    }

    /// `(K_μ u_α)(K_ν u_β) = v^{-(ν,α)} K_{μ+ν} u_α u_β`.
    pub fn ext_product(&self, x: &ExtendedElement, y: &ExtendedElement) -> Result<ExtendedElement> {
        let q = self.q();
        let mut out = ExtendedElement::zero(q);
        for ((mu, a), c) in &x.terms {
            for ((nu, b), d) in &y.terms {
                let twist = Coeff::v_pow(q, -self.sym_w(nu, &a.dim.as_i64()));
                let cd = &(c * d) * &twist;
                let w = wadd(mu, nu);
                for (l, g) in self.product(&HallElement::basis(q, a.clone()), &HallElement::basis(q, b.clone()))?.terms() {
                    out.add_term((w.clone(), l.clone()), &cd * g);
                }
            }
        }
        Ok(out)
    }

    pub fn ext_product_all(&self, factors: &[ExtendedElement]) -> Result<ExtendedElement> {
        let mut acc = self.ext_one();
        for f in factors {
            acc = self.ext_product(&acc, f)?;
        }
        Ok(acc)
    }

    /// Componentwise product of tensors of equal arity.
    pub fn tensor_product(&self, x: &Tensor, y: &Tensor) -> Result<Tensor> {
        let q = self.q();
        let mut out = Tensor::zero(q);
        for (a, c) in &x.terms {
            for (b, d) in &y.terms {
                if a.len() != b.len() {
                    return Err(Error::Mismatch("tensor arities differ".into()));
                }
                let mut acc: Vec<(Vec<Monomial>, Coeff)> = vec![(Vec::new(), c * d)];
                for (ma, mb) in a.iter().zip(b) {
                    let f = self.ext_product(
                        &ExtendedElement::monomial(q, ma.0.clone(), ma.1.clone()),
                        &ExtendedElement::monomial(q, mb.0.clone(), mb.1.clone()),
                    )?;
                    let mut next = Vec::new();
                    for (prefix, coeff) in &acc {
                        for (m, e) in f.terms() {
                            let mut p = prefix.clone();
                            p.push(m.clone());
                            next.push((p, coeff * e));
                        }
                    }
                    acc = next;
                }
                for (m, e) in acc {
                    out.add_term(m, e);
                }
            }
        }
        Ok(out)
    }

    /// `Δ(u_λ) = Σ v^{<α,β>} (a_α a_β / a_λ) g^λ_{αβ} u_α K_β ⊗ u_β`,
    /// with `α` the quotient and `β` the submodule.
    pub fn comultiply_basis(&self, lambda: &ClassKey) -> Result<Tensor> {
        let q = self.q();
        let a_l = self.aut_order(lambda)?;
        let mut out = Tensor::zero(q);
        for bd in lambda.dim.below() {
            let ad = lambda.dim.checked_sub(&bd).expect("below");
            let subs = self.classes_or_zero(&bd)?;
            let quots = self.classes_or_zero(&ad)?;
            let beta_w = bd.as_i64();
            let alpha_w = ad.as_i64();
            // u_α K_β = v^{-(β,α)} K_β u_α
            let twist = Coeff::v_pow(q, self.euler(&ad, &bd) - self.sym_w(&beta_w, &alpha_w));
            for beta in &subs {
                for alpha in &quots {
                    let g = self.hall_number_keys(lambda, alpha, beta)?;
                    if g == 0 {
                        continue;
                    }
                    let num = Coeff::from_u128(q, self.aut_order(alpha)? * self.aut_order(beta)? * g);
                    let c = &(&num * &Coeff::from_u128(q, a_l).inv()) * &twist;
                    out.add_term(
                        vec![(beta_w.clone(), alpha.clone()), (vec![0; self.n()], beta.clone())],
                        c,
                    );
                }
            }
        }
        Ok(out)
    }

    /// `Δ` on an extended element, using `Δ(K_μ) = K_μ ⊗ K_μ`.
    pub fn comultiply(&self, x: &ExtendedElement) -> Result<Tensor> {
        let q = self.q();
        let mut out = Tensor::zero(q);
        for ((mu, key), c) in &x.terms {
            let k = ExtendedElement::k(q, mu.clone());
            let kk = Tensor::pure(&k, &k);
            let d = self.comultiply_basis(key)?;
            for (m, e) in self.tensor_product(&kk, &d)?.terms {
                out.add_term(m, c * &e);
            }
        }
        Ok(out)
    }

    /// Applies `Δ` to position `slot` of every tensor term.
    pub fn comultiply_at(&self, t: &Tensor, slot: usize) -> Result<Tensor> {
        let q = self.q();
        let mut out = Tensor::zero(q);
        for (m, c) in &t.terms {
            let mono = &m[slot];
            let d = self.comultiply(&ExtendedElement::monomial(q, mono.0.clone(), mono.1.clone()))?;
            for (pair, e) in d.terms {
                let mut next = m[..slot].to_vec();
                next.extend(pair);
                next.extend_from_slice(&m[slot + 1..]);
                out.add_term(next, c * &e);
            }
        }
        Ok(out)
    }

    /// `ε(K_μ u_λ) = δ_{λ0}`.
    pub fn counit(&self, x: &ExtendedElement) -> Coeff {
        let mut out = Coeff::zero(self.q());
        for ((_, k), c) in &x.terms {
            if k.is_zero() {
                out = &out + c;
            }
        }
        out
    }

    /// Applies `ε` to position `slot` of every tensor term.
    pub fn counit_at(&self, t: &Tensor, slot: usize) -> Tensor {
        let mut out = Tensor::zero(self.q());
        for (m, c) in &t.terms {
            if m[slot].1.is_zero() {
                let mut next = m.clone();
                next.remove(slot);
                out.add_term(next, c.clone());
            }
        }
        out
    }

    /// Closed formula: `S(u_λ) = δ_{λ0} + Σ_m (-1)^m Σ v^{2Σ_{i<j}<λ_i,λ_j>}
    /// (a_{λ_1}⋯a_{λ_m}/a_λ) g^λ_{λ_1⋯λ_m} K_{-λ} u_{λ_1}⋯u_{λ_m}` with the
    /// inner product untwisted and all parts nonzero.
    pub fn antipode_basis(&self, lambda: &ClassKey) -> Result<ExtendedElement> {
        let q = self.q();
        if lambda.is_zero() {
            return Ok(self.ext_one());
        }
        let a_l = Coeff::from_u128(q, self.aut_order(lambda)?);
        let k_neg = wneg(&lambda.dim.as_i64());
        let mut chains = Vec::new();
        self.filtration_chains(&lambda.dim, &mut Vec::new(), &mut chains)?;
        let mut out = ExtendedElement::zero(q);
        for parts in chains {
            let g = self.iterated_hall_number(lambda, &parts)?;
            if g == 0 {
                continue;
            }
            let mut exp = 0i64;
            for i in 0..parts.len() {
                for j in i + 1..parts.len() {
                    exp += 2 * self.euler(&parts[i].dim, &parts[j].dim);
                }
            }
            let mut a = 1u128;
            for p in &parts {
                a *= self.aut_order(p)?;
            }
            let sign = if parts.len() % 2 == 1 { -1 } else { 1 };
            let c = &(&Coeff::from_int(q, sign) * &Coeff::v_pow(q, exp))
                * &(&Coeff::from_u128(q, a * g) * &a_l.inv());
            let mut prod = self.one();
            for p in &parts {
                prod = self.untwisted_product(&prod, &HallElement::basis(q, p.clone()))?;
            }
            for (pi, h) in prod.terms() {
                out.add_term((k_neg.clone(), pi.clone()), &c * h);
            }
        }
        Ok(out)
    }

    fn filtration_chains(&self, rest: &DimVector, prefix: &mut Vec<ClassKey>, out: &mut Vec<Vec<ClassKey>>) -> Result<()> {
        if rest.is_zero() {
            out.push(prefix.clone());
            return Ok(());
        }
        for e in rest.below() {
            if e.is_zero() {
                continue;
            }
            let left = rest.checked_sub(&e).expect("below");
            for k in self.classes(&e)?.keys.iter() {
                prefix.push(k.clone());
                self.filtration_chains(&left, prefix, out)?;
                prefix.pop();
            }
        }
        Ok(())
    }

    /// The antipode solved degree by degree from `μ(S ⊗ 1)Δ = ηε`.
    pub fn antipode_recursive(&self, lambda: &ClassKey) -> Result<ExtendedElement> {
        let mut memo = BTreeMap::new();
        self.antipode_rec(lambda, &mut memo)
    }

    fn antipode_rec(&self, lambda: &ClassKey, memo: &mut BTreeMap<ClassKey, ExtendedElement>) -> Result<ExtendedElement> {
        if let Some(x) = memo.get(lambda) {
            return Ok(x.clone());
        }
        let q = self.q();
        let mut out = if lambda.is_zero() { self.ext_one() } else { ExtendedElement::zero(q) };
        if !lambda.is_zero() {
            for (m, c) in self.comultiply_basis(lambda)?.terms {
                let ((mu, alpha), (_, beta)) = (&m[0], &m[1]);
                if beta.is_zero() {
                    continue;
                }
                // S(K_μ u_α) u_β = S(u_α) K_{-μ} u_β
                let s = self.antipode_rec(alpha, memo)?;
                let rhs = ExtendedElement::monomial(q, wneg(mu), beta.clone());
                out = out.sub(&self.ext_product(&s, &rhs)?.scale(&c));
            }
        }
        memo.insert(lambda.clone(), out.clone());
        Ok(out)
    }

    /// `S(K_μ u_λ) = S(u_λ) K_{-μ}`.
    pub fn antipode(&self, x: &ExtendedElement) -> Result<ExtendedElement> {
        let q = self.q();
        let mut out = ExtendedElement::zero(q);
        for ((mu, k), c) in &x.terms {
            let s = self.antipode_basis(k)?;
            let y = self.ext_product(&s, &ExtendedElement::k(q, wneg(mu)))?;
            out = out.add(&y.scale(c));
        }
        Ok(out)
    }

    /// Multiplies the two factors of every term after applying `f` to the left one.
    fn multiply_out(&self, t: &Tensor, f: impl Fn(&ExtendedElement) -> Result<ExtendedElement>) -> Result<ExtendedElement> {
        let q = self.q();
        let mut out = ExtendedElement::zero(q);
        for (m, c) in &t.terms {
            let left = f(&ExtendedElement::monomial(q, m[0].0.clone(), m[0].1.clone()))?;
            let right = ExtendedElement::monomial(q, m[1].0.clone(), m[1].1.clone());
            out = out.add(&self.ext_product(&left, &right)?.scale(c));
        }
        Ok(out)
    }

    /// `μ(S ⊗ 1)Δ(u_λ) = ε(u_λ) 1`.
    pub fn hopf_axiom_check(&self, lambda: &ClassKey) -> Result<bool> {
        let lhs = self.multiply_out(&self.comultiply_basis(lambda)?, |x| self.antipode(x))?;
        let rhs = self.ext_one().scale(&self.counit(&self.ext_u(lambda)));
        Ok(lhs == rhs)
    }

    /// `μ(1 ⊗ S)Δ(u_λ) = ε(u_λ) 1`.
    pub fn hopf_axiom_check_right(&self, lambda: &ClassKey) -> Result<bool> {
        let q = self.q();
        let mut lhs = ExtendedElement::zero(q);
        for (m, c) in self.comultiply_basis(lambda)?.terms {
            let left = ExtendedElement::monomial(q, m[0].0.clone(), m[0].1.clone());
            let right = self.antipode(&ExtendedElement::monomial(q, m[1].0.clone(), m[1].1.clone()))?;
            lhs = lhs.add(&self.ext_product(&left, &right)?.scale(&c));
        }
        let rhs = self.ext_one().scale(&self.counit(&self.ext_u(lambda)));
        Ok(lhs == rhs)
    }

    /// `(Δ ⊗ 1)Δ = (1 ⊗ Δ)Δ` on `u_λ`.
    pub fn coassociativity_check(&self, lambda: &ClassKey) -> Result<bool> {
        let d = self.comultiply_basis(lambda)?;
        Ok(self.comultiply_at(&d, 0)? == self.comultiply_at(&d, 1)?)
    }

    /// `(ε ⊗ 1)Δ = 1 = (1 ⊗ ε)Δ` on `u_λ`.
    pub fn counit_check(&self, lambda: &ClassKey) -> Result<bool> {
        let d = self.comultiply_basis(lambda)?;
        let mut expect = Tensor::zero(self.q());
        expect.add_term(vec![(vec![0; self.n()], lambda.clone())], Coeff::one(self.q()));
        Ok(self.counit_at(&d, 0) == expect && self.counit_at(&d, 1) == expect)
    }

    /// `Δ(u_M u_N) = Δ(u_M) Δ(u_N)`.
    pub fn green_compatibility_check(&self, m: &ClassKey, n: &ClassKey) -> Result<bool> {
        let prod = self.ext_product(&self.ext_u(m), &self.ext_u(n))?;
        let lhs = self.comultiply(&prod)?;
        let rhs = self.tensor_product(&self.comultiply_basis(m)?, &self.comultiply_basis(n)?)?;
        Ok(lhs == rhs)
    }

    /// Both antipode formulas on `u_λ` agree.
    pub fn antipode_formulas_agree(&self, lambda: &ClassKey) -> Result<bool> {
        Ok(self.antipode_basis(lambda)? == self.antipode_recursive(lambda)?)
    }

    /// Counit, coassociativity, antipode axiom and antipode cross-check on `λ`.
    pub fn hopf_report(&self, lambda: &ClassKey) -> Result<HopfReport> {
        Ok(HopfReport {
            dim: lambda.dim.clone(),
            code: lambda.code.clone(),
            counit: self.counit_check(lambda)?,
            coassociative: self.coassociativity_check(lambda)?,
            antipode: self.hopf_axiom_check(lambda)?,
            antipode_formulas_agree: self.antipode_formulas_agree(lambda)?,
        })
    }

    pub fn volume(&self, key: &ClassKey, mode: VolumeMode) -> Result<Coeff> {
        let q = self.q();
        Ok(match mode {
            VolumeMode::Dimension => Coeff::v_pow(q, 2 * key.dim.total() as i64),
            VolumeMode::OrbitSize => {
                let g = Coeff::from_u128(q, self.group_order(&key.dim));
                &g * &Coeff::from_u128(q, self.aut_order(key)?).inv()
            }
        })
    }

    /// `φ(K_μ u_α, K_ν u_β) = v^{-(μ,ν)-(α,ν)+(μ,β)} (|V_α|/a_α) δ_{αβ}`,
    /// extended bilinearly; `y` is read as an element of the negative half.
    pub fn pairing_phi(&self, x: &ExtendedElement, y: &ExtendedElement, mode: VolumeMode) -> Result<Coeff> {
        let q = self.q();
        let mut out = Coeff::zero(q);
        for ((mu, a), c) in &x.terms {
            for ((nu, b), d) in &y.terms {
                if a != b {
                    continue;
                }
                let aw = a.dim.as_i64();
                let e = -self.sym_w(mu, nu) - self.sym_w(&aw, nu) + self.sym_w(mu, &aw);
                let base = &self.volume(a, mode)? * &Coeff::from_u128(q, self.aut_order(a)?).inv();
                out = &out + &(&(c * d) * &(&Coeff::v_pow(q, e) * &base));
            }
        }
        Ok(out)
    }

    /// `φ(a ⊗ b, c ⊗ d) = φ(a, c) φ(b, d)`.
    pub fn pairing_tensor(&self, x: &Tensor, y: &Tensor, mode: VolumeMode) -> Result<Coeff> {
        let q = self.q();
        let mut out = Coeff::zero(q);
        for (a, c) in &x.terms {
            for (b, d) in &y.terms {
                let mut e = c * d;
                for (ma, mb) in a.iter().zip(b) {
                    let xa = ExtendedElement::monomial(q, ma.0.clone(), ma.1.clone());
                    let yb = ExtendedElement::monomial(q, mb.0.clone(), mb.1.clone());
                    e = &e * &self.pairing_phi(&xa, &yb, mode)?;
                    if e.is_zero() {
                        break;
                    }
                }
                out = &out + &e;
            }
        }
        Ok(out)
    }

    /// Checks `φ(x, y y') = φ(Δx, y ⊗ y')` for all `x = K_μ u_λ` with `μ` a
    /// simple weight or zero and all classes `y, y'` of total dimension `|λ|`
    /// up to `bound`.
    pub fn pairing_sanity(&self, bound: u32, mode: VolumeMode) -> Result<bool> {
        let q = self.q();
        let n = self.n();
        let mut weights = vec![vec![0; n]];
        for i in 0..n {
            let mut w = vec![0; n];
            w[i] = 1;
            weights.push(w);
        }
        for lambda in self.classes_up_to(bound)? {
            for bd in lambda.dim.below() {
                let cd = lambda.dim.checked_sub(&bd).expect("below");
                for b in self.classes_or_zero(&bd)? {
                    for c in self.classes_or_zero(&cd)? {
                        let y = self.ext_u(&b);
                        let y2 = self.ext_u(&c);
                        let yy = self.ext_product(&y, &y2)?;
                        let yt = Tensor::pure(&y, &y2);
                        for mu in &weights {
                            let x = ExtendedElement::monomial(q, mu.clone(), lambda.clone());
                            let lhs = self.pairing_phi(&x, &yy, mode)?;
                            let rhs = self.pairing_tensor(&self.comultiply(&x)?, &yt, mode)?;
                            if lhs != rhs {
                                return Ok(false);
                            }
                        }
                    }
                }
            }
        }
        Ok(true)
    }

    /// The first volume interpretation passing [`Engine::pairing_sanity`].
    pub fn select_volume_mode(&self, bound: u32) -> Result<Option<VolumeMode>> {
        for mode in [VolumeMode::Dimension, VolumeMode::OrbitSize] {
            if self.pairing_sanity(bound, mode)? {
                return Ok(Some(mode));
            }
        }
        Ok(None)
    }

    /// Every class with total dimension between 1 and `bound`.
    pub fn classes_up_to(&self, bound: u32) -> Result<Vec<ClassKey>> {
        let n = self.n();
        let mut out = Vec::new();
        let mut d = vec![0u32; n];
        loop {
            let total: u32 = d.iter().sum();
            if total >= 1 && total <= bound {
                out.extend(self.classes(&DimVector(d.clone()))?.keys.iter().cloned());
            }
            let mut i = 0;
            loop {
                if i == n {
                    return Ok(out);
                }
                d[i] += 1;
                if d.iter().sum::<u32>() <= bound {
                    break;
                }
                d[i] = 0;
                i += 1;
            }
        }
    }

    /// Basis of `{x ∈ H^r_d : φ(x, C_d) = 0}`.
    pub fn orthogonal_complement(&self, d: &DimVector, mode: VolumeMode) -> Result<Vec<HallElement>> {
        let q = self.q();
        let n = self.n();
        let rational = self.rational_basis(d)?;
        let composition = self.composition_basis(d)?;
        let rows = composition
            .iter()
            .map(|c| {
                let y = ExtendedElement::from_hall(c, n);
                rational
                    .iter()
                    .map(|r| self.pairing_phi(&ExtendedElement::from_hall(r, n), &y, mode))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let kernel = if rows.is_empty() {
            (0..rational.len())
                .map(|i| (0..rational.len()).map(|j| Coeff::from_int(q, (i == j) as i64)).collect())
                .collect()
        } else {
            nullspace(&rows, rational.len(), q)
        };
        Ok(kernel
            .into_iter()
            .map(|v| {
                let mut x = HallElement::zero(q);
                for (c, r) in v.iter().zip(&rational) {
                    x = x.add(&r.scale(c));
                }
                x
            })
            .collect())
    }
}
