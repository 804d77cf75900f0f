//! Field-independent module descriptions and element expressions.
//!
//! Module grammar (whitespace is ignored):
//!
//! ```text
//! module := "0" | term ("+" term)*
//! term   := [count "*"] label
//! label  := "S" id | "P" id | "I" id           simple, projective, injective at vertex id
//!         | "r(" n ("," n)* ")"                exceptional module of a real root
//!         | "t(" tube "," start "," len ")"    regular uniserial in a non-homogeneous tube
//!         | "h(" slot "," len ")"              length-len module of a homogeneous tube
//! ```
//!
//! Tubes, starting positions and slots are 1-based. Position `k` of tube `j`
//! is the `k`-th regular simple in the listed order; a module `t(j,k,len)` has
//! regular socle at position `k` and composition factors following `τ^{-1}`.
//! Slot `s` names the `s`-th homogeneous tube with an `F_q`-rational
//! parameter under the chosen slot assignment.
//!
//! Element grammar:
//!
//! ```text
//! element := ["-"] eterm (("+" | "-") eterm)*
//! eterm   := (factor "*")* basis
//! factor  := rational | "v" | "v^" int
//! basis   := "u[" module "]" | "b[" module "]"     u_M or the rescaled <M>
//! ```

use std::fmt;

use num_rational::BigRational;

use crate::algebra::HallElement;
use crate::coeff::{parse_rational, Coeff};
use crate::engine::{for_each_cocycle, Engine};
use crate::error::{Error, Result};
use crate::orbit::ClassKey;
use crate::quiver::DimVector;
use crate::rep::Representation;
use crate::tame::{apply, coxeter_matrix, ModuleClass, Tube};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Simple(String),
    Projective(String),
    Injective(String),
    Root(Vec<u32>),
    Tube { tube: usize, start: usize, len: u32 },
    Homogeneous { slot: usize, len: u32 },
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Simple(v) => write!(f, "S{v}"),
            Label::Projective(v) => write!(f, "P{v}"),
            Label::Injective(v) => write!(f, "I{v}"),
            Label::Root(d) => {
                let parts: Vec<String> = d.iter().map(u32::to_string).collect();
                write!(f, "r({})", parts.join(","))
            }
            Label::Tube { tube, start, len } => write!(f, "t({tube},{start},{len})"),
            Label::Homogeneous { slot, len } => write!(f, "h({slot},{len})"),
        }
    }
}

/// A multiset of indecomposable labels.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ModuleSpec {
    pub summands: Vec<(Label, u32)>,
}

impl fmt::Display for ModuleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .summands
            .iter()
            .map(|(l, m)| if *m == 1 { l.to_string() } else { format!("{m}*{l}") })
            .collect();
        write!(f, "{}", parts.join("+"))
    }
}

fn input(msg: impl Into<String>) -> Error {
    Error::Input(msg.into())
}

/// Splits at `sep` outside brackets and parentheses.
fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn parse_args(s: &str, name: char) -> Result<Vec<u64>> {
    let inner = s
        .strip_prefix(name)
        .and_then(|r| r.strip_prefix('('))
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| input(format!("malformed label {s:?}")))?;
    inner
        .split(',')
        .map(|x| x.parse::<u64>().map_err(|_| input(format!("bad number {x:?} in {s:?}"))))
        .collect()
}

fn small(x: u64, what: &str) -> Result<u32> {
    u32::try_from(x).ok().filter(|&v| v <= 1 << 16).ok_or_else(|| input(format!("{what} {x} out of range")))
}

fn parse_label(s: &str) -> Result<Label> {
    let mut chars = s.chars();
    let head = chars.next().ok_or_else(|| input("empty label"))?;
    let rest = chars.as_str();
    let vertex = |kind: fn(String) -> Label| -> Result<Label> {
        if rest.is_empty() || !rest.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(input(format!("bad vertex id in {s:?}")));
        }
        Ok(kind(rest.to_string()))
    };
    match head {
        'S' => vertex(Label::Simple),
        'P' => vertex(Label::Projective),
        'I' => vertex(Label::Injective),
        'r' => {
            let d = parse_args(s, 'r')?.into_iter().map(|x| small(x, "entry")).collect::<Result<Vec<_>>>()?;
            Ok(Label::Root(d))
        }
        't' => match parse_args(s, 't')?[..] {
            [j, k, l] if j >= 1 && k >= 1 && l >= 1 => Ok(Label::Tube {
                tube: small(j, "tube")? as usize,
                start: small(k, "position")? as usize,
                len: small(l, "length")?,
            }),
            _ => Err(input(format!("t needs three positive arguments: {s:?}"))),
        },
        'h' => match parse_args(s, 'h')?[..] {
            [slot, l] if slot >= 1 && l >= 1 => Ok(Label::Homogeneous { slot: small(slot, "slot")? as usize, len: small(l, "length")? }),
            _ => Err(input(format!("h needs two positive arguments: {s:?}"))),
        },
        _ => Err(input(format!("unknown label {s:?}"))),
    }
}

impl ModuleSpec {
    pub fn parse(text: &str) -> Result<ModuleSpec> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(input("empty module"));
        }
        if s == "0" {
            return Ok(ModuleSpec::default());
        }
        let mut summands: Vec<(Label, u32)> = Vec::new();
        for term in split_top(&s, '+') {
            let (count, label) = match split_top(term, '*')[..] {
                [l] => (1, l),
                [c, l] => (c.parse::<u32>().map_err(|_| input(format!("bad multiplicity {c:?}")))?, l),
                _ => return Err(input(format!("malformed term {term:?}"))),
            };
            if count == 0 || count > 64 {
                return Err(input(format!("multiplicity {count} out of range")));
            }
            let label = parse_label(label)?;
            match summands.iter_mut().find(|(l, _)| *l == label) {
                Some((_, m)) => *m += count,
                None => summands.push((label, count)),
            }
        }
        summands.sort();
        Ok(ModuleSpec { summands })
    }

    /// Largest homogeneous slot referenced, 0 if none.
    pub fn max_slot(&self) -> usize {
        self.summands
            .iter()
            .filter_map(|(l, _)| match l {
                Label::Homogeneous { slot, .. } => Some(*slot),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }
}

/// `L;M;N` (or `L;M_1;...;M_m`): the class counted and the factors, top first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecTriple {
    pub target: ModuleSpec,
    pub parts: Vec<ModuleSpec>,
}

impl SpecTriple {
    pub fn parse(text: &str) -> Result<SpecTriple> {
        let pieces: Vec<&str> = text.split(';').collect();
        if pieces.len() < 3 {
            return Err(input(format!("expected L;M;N, got {text:?}")));
        }
        let target = ModuleSpec::parse(pieces[0])?;
        let parts = pieces[1..].iter().map(|p| ModuleSpec::parse(p)).collect::<Result<Vec<_>>>()?;
        Ok(SpecTriple { target, parts })
    }

    pub fn max_slot(&self) -> usize {
        self.parts.iter().map(ModuleSpec::max_slot).chain([self.target.max_slot()]).max().unwrap_or(0)
    }
}

impl fmt::Display for SpecTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.target)?;
        for p in &self.parts {
            write!(f, ";{p}")?;
        }
        Ok(())
    }
}

/// How slots map to rational homogeneous parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlotAssignment {
    /// Slot `s` is the `s`-th parameter in key order.
    Forward,
    /// Slot `s` is the `s`-th parameter from the end.
    Reverse,
}

impl Engine {
    fn vertex(&self, id: &str) -> Result<usize> {
        self.quiver().vertex_index(id).map_err(|_| input(format!("unknown vertex {id:?}")))
    }

    /// Length-one modules of the homogeneous tubes with rational parameter, in key order.
    pub fn homogeneous_points(&self) -> Result<Vec<ClassKey>> {
        let delta = self.tame()?.tame.delta.clone();
        let mut out = Vec::new();
        for k in self.indecomposables(&delta)?.iter() {
            if matches!(self.classify_key(k)?, ModuleClass::Regular(Tube::Homogeneous { .. })) {
                out.push(k.clone());
            }
        }
        out.sort();
        Ok(out)
    }

    /// Key of the indecomposable named by `label`.
    pub fn label_key(&self, label: &Label, slots: SlotAssignment) -> Result<ClassKey> {
        match label {
            Label::Simple(v) => self.identify(&self.simple(self.vertex(v)?)),
            Label::Projective(v) => self.identify(&self.projective(self.vertex(v)?)),
            Label::Injective(v) => self.identify(&self.injective(self.vertex(v)?)),
            Label::Root(d) => {
                if d.len() != self.n() || d.iter().all(|&x| x == 0) {
                    return Err(input(format!("root {d:?} does not fit this quiver")));
                }
                self.identify(&self.exceptional(&DimVector(d.clone()), 0)?)
            }
            Label::Tube { tube, start, len } => {
                let ctx = self.tame()?;
                let dims = ctx
                    .tube_dims
                    .get(tube - 1)
                    .ok_or_else(|| input(format!("there is no non-homogeneous tube {tube}")))?;
                let p = dims.len();
                if *start > p {
                    return Err(input(format!("tube {tube} has period {p}")));
                }
                let order = tau_inverse_order(self, dims, start - 1);
                let simples = &ctx.tube_simples[tube - 1];
                let factors: Vec<Representation> = (0..*len as usize).map(|i| simples[order[i % p]].clone()).collect();
                let m = self.uniserial(&factors)?;
                let key = self.identify(&m)?;
                let in_tube = matches!(self.classify_key(&key)?, ModuleClass::Regular(Tube::NonHomogeneous { index }) if index == tube - 1);
                if !in_tube || simples[start - 1].dim_hom(&m)? == 0 {
                    return Err(Error::Classification(format!("{label} did not land in tube {tube} with the requested socle")));
                }
                Ok(key)
            }
            Label::Homogeneous { slot, len } => {
                let points = self.homogeneous_points()?;
                if *slot > points.len() {
                    return Err(Error::FieldTooSmall { q: self.q(), available: points.len(), requested: *slot });
                }
                let base = match slots {
                    SlotAssignment::Forward => points[slot - 1].clone(),
                    SlotAssignment::Reverse => points[points.len() - slot].clone(),
                };
                if *len == 1 {
                    return Ok(base);
                }
                let h = self.rep_of(&base);
                let m = self.uniserial(&vec![h; *len as usize])?;
                let key = self.identify(&m)?;
                if !matches!(self.classify_key(&key)?, ModuleClass::Regular(Tube::Homogeneous { .. })) {
                    return Err(Error::Classification(format!("{label} is not homogeneous")));
                }
                Ok(key)
            }
        }
    }

    /// The indecomposable with the given regular composition factors, socle
    /// first, built by successive non-split extensions. Each step has a
    /// one-dimensional extension group, so the first indecomposable middle
    /// term is the module sought.
    fn uniserial(&self, factors: &[Representation]) -> Result<Representation> {
        let mut acc = factors[0].clone();
        for top in &factors[1..] {
            let shapes = Representation::cocycle_shapes(&acc, top);
            let dim_z: usize = shapes.iter().map(|(r, c)| r * c).sum();
            self.guards().check_hom("cocycle enumeration", self.q(), dim_z)?;
            let mut found = None;
            let mut err = None;
            for_each_cocycle(self.field(), &shapes, |c| {
                if found.is_some() || err.is_some() {
                    return;
                }
                match Representation::extension(&acc, top, c).and_then(|l| Ok((l.splitting_endomorphism(self.guards())?.is_err(), l))) {
                    Ok((true, l)) => found = Some(l),
                    Ok(_) => {}
                    Err(e) => err = Some(e),
                }
            });
            if let Some(e) = err {
                return Err(e);
            }
            acc = found.ok_or_else(|| Error::Classification("no indecomposable extension in the tube".into()))?;
        }
        Ok(acc)
    }

    /// A representation of the described module, checked by decomposing it.
    pub fn instantiate(&self, spec: &ModuleSpec, slots: SlotAssignment) -> Result<Representation> {
        let needed = spec.max_slot();
        if needed > 0 {
            let available = self.homogeneous_points()?.len();
            if needed > available {
                return Err(Error::FieldTooSmall { q: self.q(), available, requested: needed });
            }
        }
        let mut parts = Vec::new();
        let mut expect: Vec<(ClassKey, u32)> = Vec::new();
        for (label, m) in &spec.summands {
            let k = self.label_key(label, slots)?;
            for _ in 0..*m {
                parts.push(self.rep_of(&k));
            }
            match expect.iter_mut().find(|(e, _)| *e == k) {
                Some((_, c)) => *c += m,
                None => expect.push((k, *m)),
            }
        }
        if parts.is_empty() {
            return Ok(self.zero_rep(self.zero_dim()));
        }
        let rep = Representation::direct_sum_all(&parts, self.quiver().clone(), self.field().clone())?;
        let mut got = self.decompose(&rep)?;
        got.sort();
        expect.sort();
        if got != expect {
            return Err(Error::Validation(format!("instantiation of {spec} has the wrong Krull-Schmidt type")));
        }
        Ok(rep)
    }

    pub fn instantiate_key(&self, spec: &ModuleSpec, slots: SlotAssignment) -> Result<ClassKey> {
        self.identify(&self.instantiate(spec, slots)?)
    }

    /// Evaluates an element expression.
    pub fn parse_element(&self, text: &str) -> Result<HallElement> {
        let q = self.q();
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.starts_with('{') {
            let x = HallElement::from_json(&s)?;
            if x.q() != q {
                return Err(Error::Mismatch(format!("element is over F_{} but the engine is over F_{q}", x.q())));
            }
            return self.canonicalize(&x);
        }
        if s.is_empty() {
            return Err(input("empty element"));
        }
        // Split into signed terms at top-level + and -.
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut depth = 0i32;
        let mut cur = String::new();
        let mut neg = false;
        let mut prev: Option<char> = None;
        for c in s.chars() {
            match c {
                '(' | '[' => depth += 1,
                ')' | ']' => depth -= 1,
                _ => {}
            }
            let exponent_sign = prev == Some('^');
            if depth == 0 && (c == '+' || c == '-') && !exponent_sign {
                if !cur.is_empty() {
                    terms.push((neg, std::mem::take(&mut cur)));
                } else if c == '+' || prev.is_some() {
                    return Err(input(format!("dangling sign in {text:?}")));
                }
                neg = c == '-';
            } else {
                cur.push(c);
            }
            prev = Some(c);
        }
        if cur.is_empty() {
            return Err(input(format!("dangling sign in {text:?}")));
        }
        terms.push((neg, cur));
        let mut out = HallElement::zero(q);
        for (neg, term) in terms {
            let factors = split_top(&term, '*');
            let (basis, coeffs) = factors.split_last().expect("split yields one piece");
            let mut c = Coeff::from_int(q, if neg { -1 } else { 1 });
            for f in coeffs {
                c = &c * &parse_factor(q, f)?;
            }
            let (rescaled, inner) = if let Some(r) = basis.strip_prefix("u[") {
                (false, r)
            } else if let Some(r) = basis.strip_prefix("b[") {
                (true, r)
            } else {
                return Err(input(format!("expected u[..] or b[..], got {basis:?}")));
            };
            let inner = inner.strip_suffix(']').ok_or_else(|| input(format!("unclosed bracket in {basis:?}")))?;
            let key = self.instantiate_key(&ModuleSpec::parse(inner)?, SlotAssignment::Forward)?;
            let x = if rescaled { self.rescaled(&key)? } else { self.u(&key) };
            out = out.add(&x.scale(&c));
        }
        Ok(out)
    }
}

fn parse_factor(q: u32, f: &str) -> Result<Coeff> {
    if f == "v" {
        return Ok(Coeff::v_pow(q, 1));
    }
    if let Some(e) = f.strip_prefix("v^") {
        let e = e.trim_start_matches('(').trim_end_matches(')');
        let k: i64 = e.parse().map_err(|_| input(format!("bad exponent {e:?}")))?;
        if k.abs() > 4096 {
            return Err(input(format!("exponent {k} out of range")));
        }
        return Ok(Coeff::v_pow(q, k));
    }
    let r: BigRational = parse_rational(f).ok_or_else(|| input(format!("bad coefficient {f:?}")))?;
    if r.numer().bits() > 512 || r.denom().bits() > 512 {
        return Err(input(format!("coefficient {f:?} out of range")));
    }
    Ok(Coeff::from_rational(q, r))
}

/// Indices of `dims` starting at `start` and following `τ^{-1}`; the next
/// vector `y` after `x` is the one with `Φ y = x`.
fn tau_inverse_order(e: &Engine, dims: &[DimVector], start: usize) -> Vec<usize> {
    let phi = coxeter_matrix(e.quiver());
    let mut order = vec![start];
    while order.len() < dims.len() {
        let cur = dims[*order.last().expect("nonempty")].as_i64();
        let next = (0..dims.len()).find(|&i| apply(&phi, &dims[i].as_i64()) == cur).unwrap_or(order[0]);
        if order.contains(&next) {
            break;
        }
        order.push(next);
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let m = ModuleSpec::parse("S1 + 2*P2 + t(1,2,3) + h(1,1) + S1").unwrap();
        assert_eq!(m.to_string(), "2*S1+2*P2+t(1,2,3)+h(1,1)");
        assert_eq!(ModuleSpec::parse("0").unwrap(), ModuleSpec::default());
        assert_eq!(m.max_slot(), 1);
        assert!(ModuleSpec::parse("t(0,1,1)").is_err());
        assert!(ModuleSpec::parse("X1").is_err());
        assert!(ModuleSpec::parse("S").is_err());
        assert!(ModuleSpec::parse("0*S1").is_err());
        let t = SpecTriple::parse("r(1,1);S1;S2").unwrap();
        assert_eq!(t.parts.len(), 2);
        assert_eq!(t.to_string(), "r(1,1);S1;S2");
        assert!(SpecTriple::parse("S1;S2").is_err());
    }

    #[test]
    fn split_respects_brackets() {
        assert_eq!(split_top("a+b(1+2)+c[x+y]", '+'), vec!["a", "b(1+2)", "c[x+y]"]);
    }
}
