//! Quivers, dimension vectors and the Euler form.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub id: String,
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    index: HashMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
struct QuiverFile {
    vertices: Vec<String>,
    arrows: Vec<(String, String, String)>,
}

/// Dimension vector, indexed by vertex position in declaration order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct DimVector(pub Vec<u32>);

impl DimVector {
    pub fn zero(n: usize) -> Self {
        DimVector(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        DimVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn add(&self, other: &DimVector) -> DimVector {
        DimVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference, `None` if some entry would go negative.
    pub fn checked_sub(&self, other: &DimVector) -> Option<DimVector> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            out.push(a.checked_sub(*b)?);
        }
        Some(DimVector(out))
    }

    pub fn scale(&self, n: u32) -> DimVector {
        DimVector(self.0.iter().map(|a| a * n).collect())
    }

    /// Componentwise `self <= other`.
    pub fn leq(&self, other: &DimVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn as_i64(&self) -> Vec<i64> {
        self.0.iter().map(|&x| x as i64).collect()
    }

    /// All vectors `w` with `0 <= w <= self`, in lexicographic order.
    pub fn below(&self) -> Vec<DimVector> {
        let mut out = vec![Vec::new()];
        for &bound in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (bound as usize + 1));
            for prefix in &out {
                for x in 0..=bound {
                    let mut p = prefix.clone();
                    p.push(x);
                    next.push(p);
                }
            }
            out = next;
        }
        out.into_iter().map(DimVector).collect()
    }

    pub fn parse(s: &str, n: usize) -> Result<DimVector> {
        let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = trimmed.split(',').map(str::trim).filter(|p| !p.is_empty()).collect();
        if parts.len() != n {
            return Err(Error::Input(format!(
                "dimension vector `{s}` has {} entries, quiver has {n} vertices",
                parts.len()
            )));
        }
        let mut v = Vec::with_capacity(n);
        for p in parts {
            v.push(p.parse::<u32>().map_err(|_| Error::Input(format!("bad entry `{p}` in `{s}`")))?);
        }
        Ok(DimVector(v))
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl Quiver {
    pub fn new(vertices: Vec<String>, arrows: Vec<(String, String, String)>) -> Result<Quiver> {
        let mut index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(Error::Input(format!("duplicate vertex id `{v}`")));
            }
        }
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::with_capacity(arrows.len());
        for (id, s, t) in arrows {
            if !seen.insert(id.clone()) {
                return Err(Error::Input(format!("duplicate arrow id `{id}`")));
            }
            let source = *index
                .get(&s)
                .ok_or_else(|| Error::Input(format!("arrow `{id}` has unknown source `{s}`")))?;
            let target = *index
                .get(&t)
                .ok_or_else(|| Error::Input(format!("arrow `{id}` has unknown target `{t}`")))?;
            if source == target {
                return Err(Error::Input(format!("arrow `{id}` is a loop")));
            }
            out.push(Arrow { id, source, target });
        }
        let q = Quiver { vertices, arrows: out, index };
        if q.topological_order().is_none() {
            return Err(Error::Input("quiver has an oriented cycle".into()));
        }
        Ok(q)
    }

    pub fn from_json(text: &str) -> Result<Quiver> {
        let file: QuiverFile = serde_json::from_str(text)?;
        Quiver::new(file.vertices, file.arrows)
    }

    pub fn to_json(&self) -> String {
        let file = QuiverFile {
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| (a.id.clone(), self.vertices[a.source].clone(), self.vertices[a.target].clone()))
                .collect(),
        };
        serde_json::to_string(&file).expect("quiver serializes")
    }

    /// Stable content hash of the canonical JSON form.
    pub fn content_hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn vertex_index(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::Input(format!("unknown vertex `{id}`")))
    }

    pub fn dim(&self, entries: &[u32]) -> Result<DimVector> {
        if entries.len() != self.n() {
            return Err(Error::Mismatch(format!(
                "dimension vector of length {} for a quiver with {} vertices",
                entries.len(),
                self.n()
            )));
        }
        Ok(DimVector(entries.to_vec()))
    }

    fn check(&self, a: &[i64], b: &[i64]) -> Result<()> {
        if a.len() != self.n() || b.len() != self.n() {
            return Err(Error::Mismatch("dimension vectors do not match the vertex set".into()));
        }
        Ok(())
    }

    pub fn euler_i(&self, a: &[i64], b: &[i64]) -> Result<i64> {
        self.check(a, b)?;
        let diag: i64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
        let off: i64 = self.arrows.iter().map(|r| a[r.source] * b[r.target]).sum();
        Ok(diag - off)
    }

    pub fn euler(&self, a: &DimVector, b: &DimVector) -> Result<i64> {
        self.euler_i(&a.as_i64(), &b.as_i64())
    }

    pub fn symmetric_i(&self, a: &[i64], b: &[i64]) -> Result<i64> {
        Ok(self.euler_i(a, b)? + self.euler_i(b, a)?)
    }

    pub fn symmetric(&self, a: &DimVector, b: &DimVector) -> Result<i64> {
        self.symmetric_i(&a.as_i64(), &b.as_i64())
    }

    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.n();
        let mut c = vec![vec![0i64; n]; n];
        for (i, row) in c.iter_mut().enumerate() {
            row[i] = 2;
        }
        for a in &self.arrows {
            c[a.source][a.target] -= 1;
            c[a.target][a.source] -= 1;
        }
        c
    }

    /// Vertices ordered so that every arrow goes forward; `None` on a cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.n();
        let mut indeg = vec![0usize; n];
        for a in &self.arrows {
            indeg[a.target] += 1;
        }
        let mut ready: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        ready.reverse();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = ready.pop() {
            order.push(v);
            for a in self.arrows.iter().filter(|a| a.source == v) {
                indeg[a.target] -= 1;
                if indeg[a.target] == 0 {
                    ready.push(a.target);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n == 0 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for a in &self.arrows {
                for (x, y) in [(a.source, a.target), (a.target, a.source)] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Paths starting at `i`, each as a list of arrow indices (the trivial path first).
    pub fn paths_from(&self, i: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        let mut frontier: Vec<(usize, Vec<usize>)> = vec![(i, Vec::new())];
        while let Some((v, path)) = frontier.pop() {
            for (k, a) in self.arrows.iter().enumerate() {
                if a.source == v {
                    let mut p = path.clone();
                    p.push(k);
                    out.push(p.clone());
                    frontier.push((a.target, p));
                }
            }
        }
        out
    }

    /// Endpoint of a path that starts at `start`.
    pub fn path_end(&self, start: usize, path: &[usize]) -> usize {
        path.last().map_or(start, |&k| self.arrows[k].target)
    }
}
