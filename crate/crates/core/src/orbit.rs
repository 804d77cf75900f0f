//! Orbits of `G_d = Π GL_{d_i}` on the representation space `E_d`.
//!
//! A point of `E_d` is the concatenation of the arrow matrices, each row-major.
//! Points are compared lexicographically; the canonical representative of an
//! orbit is its lexicographically smallest point. The group is generated by
//! elementary transvections `I + E_ab` at each vertex together with one
//! diagonal scaling by a primitive element; BFS over these reaches the whole
//! orbit because the group is finite.

use std::collections::{HashSet, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{qpow, Elem, Field};
use crate::quiver::{DimVector, Quiver};

#[derive(Clone, Copy, Debug)]
struct Block {
    off: usize,
    rows: usize,
    cols: usize,
    source: usize,
    target: usize,
}

#[derive(Clone, Copy, Debug)]
enum Gen {
    Transvection { v: usize, a: usize, b: usize },
    Scale { v: usize },
}

/// Canonical key of an isomorphism class: its dimension vector and the
/// lexicographically minimal point of its orbit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ClassKey {
    pub dim: DimVector,
    pub code: Vec<Elem>,
}

impl ClassKey {
    pub fn zero(n: usize) -> Self {
        ClassKey { dim: DimVector::zero(n), code: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.dim.is_zero()
    }
}

pub struct PointSpace {
    field: Arc<Field>,
    dim: DimVector,
    len: usize,
    blocks: Vec<Block>,
    gens: Vec<Gen>,
}

impl PointSpace {
    pub fn new(quiver: &Quiver, field: Arc<Field>, dim: &DimVector) -> Self {
        let mut blocks = Vec::new();
        let mut off = 0;
        for a in quiver.arrows() {
            let rows = dim.0[a.target] as usize;
            let cols = dim.0[a.source] as usize;
            blocks.push(Block { off, rows, cols, source: a.source, target: a.target });
            off += rows * cols;
        }
        let mut gens = Vec::new();
        for (v, &d) in dim.0.iter().enumerate() {
            let d = d as usize;
            if d == 0 {
                continue;
            }
            // Only vertices touched by an arrow act nontrivially.
            if !blocks.iter().any(|b| (b.source == v || b.target == v) && b.rows * b.cols > 0) {
                continue;
            }
            gens.push(Gen::Scale { v });
            for a in 0..d {
                for b in 0..d {
                    if a != b {
                        gens.push(Gen::Transvection { v, a, b });
                    }
                }
            }
        }
        PointSpace { field, dim: dim.clone(), len: off, blocks, gens }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn dim(&self) -> &DimVector {
        &self.dim
    }

    /// `q^{dim E_d}`, saturating.
    pub fn size(&self) -> u128 {
        qpow(self.field.q(), self.len as u64)
    }

    pub fn encode(&self, p: &[Elem]) -> u128 {
        let q = self.field.q() as u128;
        p.iter().fold(0u128, |acc, &x| acc * q + x as u128)
    }

    pub fn decode(&self, mut idx: u128, out: &mut [Elem]) {
        let q = self.field.q() as u128;
        for slot in out.iter_mut().rev() {
            *slot = (idx % q) as Elem;
            idx /= q;
        }
    }

    fn apply(&self, g: Gen, p: &mut [Elem]) {
        let f = &*self.field;
        match g {
            Gen::Transvection { v, a, b } => {
                for bl in &self.blocks {
                    if bl.target == v {
                        for c in 0..bl.cols {
                            let src = p[bl.off + b * bl.cols + c];
                            if src != 0 {
                                let dst = &mut p[bl.off + a * bl.cols + c];
                                *dst = f.add(*dst, src);
                            }
                        }
                    }
                    if bl.source == v {
                        for r in 0..bl.rows {
                            let src = p[bl.off + r * bl.cols + a];
                            if src != 0 {
                                let dst = &mut p[bl.off + r * bl.cols + b];
                                *dst = f.sub(*dst, src);
                            }
                        }
                    }
                }
            }
            Gen::Scale { v } => {
                let g = f.primitive();
                let ginv = f.inv(g);
                for bl in &self.blocks {
                    if bl.target == v {
                        for c in 0..bl.cols {
                            let x = &mut p[bl.off + c];
                            *x = f.mul(*x, g);
                        }
                    }
                    if bl.source == v {
                        for r in 0..bl.rows {
                            let x = &mut p[bl.off + r * bl.cols];
                            *x = f.mul(*x, ginv);
                        }
                    }
                }
            }
        }
    }

    /// Lexicographically minimal point of the orbit of `p`, with the orbit size.
    pub fn canonical(&self, p: &[Elem], limit: u128) -> Result<(Vec<Elem>, u128)> {
        if self.len == 0 {
            return Ok((Vec::new(), 1));
        }
        if self.size() >= (1u128 << 126) {
            return Err(Error::guard("orbit encoding", self.size(), 1u128 << 126));
        }
        let start = self.encode(p);
        let mut seen: HashSet<u128> = HashSet::new();
        seen.insert(start);
        let mut queue = VecDeque::from([start]);
        let mut best = start;
        let mut buf = vec![0 as Elem; self.len];
        let mut next = vec![0 as Elem; self.len];
        while let Some(idx) = queue.pop_front() {
            self.decode(idx, &mut buf);
            for &g in &self.gens {
                next.copy_from_slice(&buf);
                self.apply(g, &mut next);
                let j = self.encode(&next);
                if seen.insert(j) {
                    if seen.len() as u128 > limit {
                        return Err(Error::guard("orbit size for canonical form", seen.len() as u128, limit));
                    }
                    best = best.min(j);
                    queue.push_back(j);
                }
            }
        }
        let mut out = vec![0 as Elem; self.len];
        self.decode(best, &mut out);
        Ok((out, seen.len() as u128))
    }
}

/// Result of a full pointwise scan of `E_d`.
pub struct Scan {
    /// Canonical points, in increasing order.
    pub reps: Vec<Vec<Elem>>,
    /// Orbit sizes aligned with `reps`.
    pub orbit_sizes: Vec<u128>,
    /// Class id of every point, indexed by point code.
    pub map: Vec<u32>,
}

/// Partitions every point of `E_d` into `G_d`-orbits.
pub fn scan(space: &PointSpace, limit: u128) -> Result<Scan> {
    let total = space.size();
    if total > limit {
        return Err(Error::guard("pointwise scan of E_d", total, limit));
    }
    let total = total as usize;
    let mut map = vec![u32::MAX; total];
    let mut reps = Vec::new();
    let mut orbit_sizes = Vec::new();
    let mut buf = vec![0 as Elem; space.len];
    let mut next = vec![0 as Elem; space.len];
    let mut queue = VecDeque::new();
    for idx in 0..total {
        if map[idx] != u32::MAX {
            continue;
        }
        let id = reps.len() as u32;
        let mut rep = vec![0 as Elem; space.len];
        space.decode(idx as u128, &mut rep);
        reps.push(rep);
        map[idx] = id;
        queue.push_back(idx);
        let mut size = 1u128;
        while let Some(i) = queue.pop_front() {
            space.decode(i as u128, &mut buf);
            for &g in &space.gens {
                next.copy_from_slice(&buf);
                space.apply(g, &mut next);
                let j = space.encode(&next) as usize;
                if map[j] == u32::MAX {
                    map[j] = id;
                    size += 1;
                    queue.push_back(j);
                }
            }
        }
        orbit_sizes.push(size);
    }
    Ok(Scan { reps, orbit_sizes, map })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kronecker() -> Quiver {
        Quiver::from_json(r#"{"vertices":["1","2"],"arrows":[["a","1","2"],["b","1","2"]]}"#).unwrap()
    }

    #[test]
    fn kronecker_11_has_four_orbits_over_f2() {
        let q = kronecker();
        let f = Field::new(2).unwrap();
        let space = PointSpace::new(&q, f, &DimVector(vec![1, 1]));
        let s = scan(&space, 1 << 20).unwrap();
        assert_eq!(s.reps.len(), 4);
        assert_eq!(s.orbit_sizes.iter().sum::<u128>(), 4);
    }

    #[test]
    fn canonical_matches_scan() {
        let q = kronecker();
        let f = Field::new(3).unwrap();
        let d = DimVector(vec![2, 1]);
        let space = PointSpace::new(&q, f, &d);
        let s = scan(&space, 1 << 20).unwrap();
        let mut buf = vec![0; space.len()];
        for idx in [5u128, 17, 40, 80] {
            space.decode(idx, &mut buf);
            let (c, size) = space.canonical(&buf, 1 << 20).unwrap();
            let id = s.map[idx as usize] as usize;
            assert_eq!(c, s.reps[id]);
            assert_eq!(size, s.orbit_sizes[id]);
        }
    }

    #[test]
    fn extension_field_orbits() {
        // Over F_4 the A_2 space at (1,1) has two orbits: zero and nonzero.
        let q = Quiver::from_json(r#"{"vertices":["1","2"],"arrows":[["a","1","2"]]}"#).unwrap();
        let f = Field::new(4).unwrap();
        let space = PointSpace::new(&q, f, &DimVector(vec![1, 1]));
        assert_eq!(scan(&space, 1 << 10).unwrap().reps.len(), 2);
    }
}
