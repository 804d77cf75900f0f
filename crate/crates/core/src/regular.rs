//! Regular components `E_{nδ,i}`, the PBW family and graded-gap checks.

use serde::Serialize;

use crate::algebra::{graded_rank, HallElement, Span};
use crate::coeff::Coeff;
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::orbit::ClassKey;
use crate::quiver::DimVector;
use crate::tame::{ModuleClass, Part, Tube};

/// Weakly decreasing positive parts summing to `n`, in reverse lexicographic order.
pub fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            prefix.push(k);
            go(n - k, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EComponents {
    pub e1: HallElement,
    pub e2: HallElement,
    pub e3: HallElement,
}

/// One member `<P> * <M> * E_{wδ,3} * <I>` of the PBW family.
#[derive(Clone, Debug, Serialize)]
pub struct PbwLabel {
    pub preprojective: ClassKey,
    pub regular: ClassKey,
    pub partition: Vec<u32>,
    pub preinjective: ClassKey,
}

impl Engine {
    /// Splits the regular classes of dimension `nδ` by where their summands
    /// live: all in non-homogeneous tubes, mixed, or all homogeneous. Each sum
    /// carries the prefactor `v^{-n|δ|}`.
    pub fn e_delta_components(&self, n: u32) -> Result<EComponents> {
        if n == 0 {
            return Err(Error::Input("n must be positive".into()));
        }
        let ctx = self.tame()?;
        let d = ctx.tame.delta.scale(n);
        let q = self.q();
        let pre = Coeff::v_pow(q, -(n as i64) * ctx.tame.delta.total() as i64);
        let (mut e1, mut e2, mut e3) = (HallElement::zero(q), HallElement::zero(q), HallElement::zero(q));
        for key in self.classes(&d)?.keys.iter() {
            let parts = self.summand_classes(key)?;
            let mut homogeneous = 0;
            let mut nonhomogeneous = 0;
            for (_, c, _) in &parts {
                match c {
                    ModuleClass::Regular(Tube::Homogeneous { .. }) => homogeneous += 1,
                    ModuleClass::Regular(Tube::NonHomogeneous { .. }) => nonhomogeneous += 1,
                    _ => {}
                }
            }
            if homogeneous + nonhomogeneous != parts.len() {
                continue;
            }
            let target = match (nonhomogeneous > 0, homogeneous > 0) {
                (true, false) => &mut e1,
                (true, true) => &mut e2,
                _ => &mut e3,
            };
            target.add_term(key.clone(), pre.clone());
        }
        Ok(EComponents { e1, e2, e3 })
    }

    /// `E_{w_1δ,3} * ... * E_{w_tδ,3}`.
    pub fn e_partition(&self, w: &[u32]) -> Result<HallElement> {
        let mut acc = self.one();
        for &k in w {
            acc = self.product(&acc, &self.e_delta_components(k)?.e3)?;
        }
        Ok(acc)
    }

    fn classes_of_part(&self, d: &DimVector, keep: impl Fn(&Self, &ClassKey) -> Result<bool>) -> Result<Vec<ClassKey>> {
        let mut out = Vec::new();
        for k in self.classes_or_zero(d)? {
            if keep(self, &k)? {
                out.push(k);
            }
        }
        Ok(out)
    }

    /// Every PBW label of degree `d`.
    pub fn pbw_labels(&self, d: &DimVector) -> Result<Vec<PbwLabel>> {
        let delta = self.tame()?.tame.delta.clone();
        let mut out = Vec::new();
        for a in d.below() {
            let pre = self.classes_of_part(&a, |e, k| e.is_part(k, Part::Preprojective))?;
            if pre.is_empty() {
                continue;
            }
            let rest = d.checked_sub(&a).expect("below");
            for b in rest.below() {
                let reg = self.classes_of_part(&b, |e, k| e.in_nonhomogeneous_tubes(k))?;
                if reg.is_empty() {
                    continue;
                }
                let rest2 = rest.checked_sub(&b).expect("below");
                let mut m = 0u32;
                while let Some(rest3) = rest2.checked_sub(&delta.scale(m)) {
                    let inj = self.classes_of_part(&rest3, |e, k| e.is_part(k, Part::Preinjective))?;
                    for w in partitions(m) {
                        for p in &pre {
                            for r in &reg {
                                for i in &inj {
                                    out.push(PbwLabel {
                                        preprojective: p.clone(),
                                        regular: r.clone(),
                                        partition: w.clone(),
                                        preinjective: i.clone(),
                                    });
                                }
                            }
                        }
                    }
                    if delta.is_zero() {
                        break;
                    }
                    m += 1;
                }
            }
        }
        Ok(out)
    }

    pub fn pbw_element(&self, label: &PbwLabel) -> Result<HallElement> {
        let p = self.rescaled(&label.preprojective)?;
        let m = self.rescaled(&label.regular)?;
        let e = self.e_partition(&label.partition)?;
        let i = self.rescaled(&label.preinjective)?;
        self.product_all(&[p, m, e, i])
    }

    /// Rank of the PBW family at `d` together with its size.
    pub fn pbw_rank(&self, d: &DimVector) -> Result<(usize, usize)> {
        let labels = self.pbw_labels(d)?;
        let elems = labels.iter().map(|l| self.pbw_element(l)).collect::<Result<Vec<_>>>()?;
        Ok((graded_rank(&elems, d), labels.len()))
    }

    /// Degree-`d` piece of the rational Hall algebra.
    pub fn rational_basis(&self, d: &DimVector) -> Result<Vec<HallElement>> {
        let gens = self.rational_generators(d)?;
        self.subalgebra_basis(&gens, d)
    }

    pub fn composition_basis(&self, d: &DimVector) -> Result<Vec<HallElement>> {
        let gens = self.composition_generators()?;
        self.subalgebra_basis(&gens, d)
    }

    /// `dim H^r_{nδ} - dim C_{nδ}`.
    pub fn graded_gap(&self, n: u32) -> Result<GradedGap> {
        let d = self.tame()?.tame.delta.scale(n);
        let rational = self.rational_basis(&d)?.len();
        let composition = self.composition_basis(&d)?.len();
        Ok(GradedGap { degree: d, rational, composition, gap: rational as i64 - composition as i64 })
    }

    /// Checks that every element of `small` lies in the span of `big`.
    pub fn span_contains(&self, big: &[HallElement], small: &[HallElement]) -> bool {
        let mut span = Span::new();
        for x in big {
            span.insert(x);
        }
        small.iter().all(|x| span.contains(x))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GradedGap {
    pub degree: DimVector,
    pub rational: usize,
    pub composition: usize,
    pub gap: i64,
}

#[cfg(test)]
mod tests {
    use super::partitions;

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..8).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15]);
        assert_eq!(partitions(3), vec![vec![3], vec![2, 1], vec![1, 1, 1]]);
    }
}
