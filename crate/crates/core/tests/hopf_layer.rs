mod common;

use common::*;
use hallq::coeff::Coeff;
use hallq::engine::Engine;
use hallq::hopf::{ExtendedElement, Tensor, VolumeMode};
use hallq::orbit::ClassKey;
use hallq::quiver::DimVector;
use proptest::prelude::*;

fn key(e: &Engine, rep: hallq::rep::Representation) -> ClassKey {
    e.identify(&rep).unwrap()
}

fn mono(_q: u32, mu: &[i64], k: &ClassKey) -> (Vec<i64>, ClassKey) {
    (mu.to_vec(), k.clone())
}

#[test]
fn comultiplication_of_simples_and_torus() {
    let e = engine(&a2(), 2);
    let q = e.q();
    let s1 = key(&e, e.simple(0));
    let z = e.zero_key();
    let d = e.comultiply_basis(&s1).unwrap();
    let mut expect = Tensor::zero(q);
    expect.add_term(vec![mono(q, &[0, 0], &s1), mono(q, &[0, 0], &z)], Coeff::one(q));
    expect.add_term(vec![mono(q, &[1, 0], &z), mono(q, &[0, 0], &s1)], Coeff::one(q));
    assert_eq!(d, expect);

    let k = ExtendedElement::k(q, vec![2, -1]);
    assert_eq!(e.comultiply(&k).unwrap(), Tensor::pure(&k, &k));
}

#[test]
fn comultiplication_of_split_module_on_a2() {
    // Hand expansion at q = 2, a = 1 for every class involved:
    // (0, λ): K_λ ⊗ u_λ; (λ, 0): u_λ ⊗ 1;
    // (S1, S2): v^{<S1,S2>} u_S1 K_2 ⊗ u_S2 = v^{-1} v^{1} K_2 u_S1 ⊗ u_S2;
    // (S2, S1): v^{0} u_S2 K_1 ⊗ u_S1 = v^{1} K_1 u_S2 ⊗ u_S1.
    let e = engine(&a2(), 2);
    let q = e.q();
    let s1 = key(&e, e.simple(0));
    let s2 = key(&e, e.simple(1));
    let lam = e.direct_sum(&[s1.clone(), s2.clone()]).unwrap();
    let z = e.zero_key();
    let mut expect = Tensor::zero(q);
    expect.add_term(vec![mono(q, &[1, 1], &z), mono(q, &[0, 0], &lam)], Coeff::one(q));
    expect.add_term(vec![mono(q, &[0, 0], &lam), mono(q, &[0, 0], &z)], Coeff::one(q));
    expect.add_term(vec![mono(q, &[0, 1], &s1), mono(q, &[0, 0], &s2)], Coeff::one(q));
    expect.add_term(vec![mono(q, &[1, 0], &s2), mono(q, &[0, 0], &s1)], Coeff::v_pow(q, 1));
    assert_eq!(e.comultiply_basis(&lam).unwrap(), expect);
}

#[test]
fn antipode_examples() {
    let e = engine(&a2(), 3);
    let q = e.q();
    let s2 = key(&e, e.simple(1));
    let expect = ExtendedElement::monomial(q, vec![0, -1], s2.clone()).scale(&Coeff::from_int(q, -1));
    assert_eq!(e.antipode(&e.ext_u(&s2)).unwrap(), expect);
    let k = ExtendedElement::k(q, vec![1, 3]);
    assert_eq!(e.antipode(&k).unwrap(), ExtendedElement::k(q, vec![-1, -3]));
    assert_eq!(e.antipode(&e.ext_one()).unwrap(), e.ext_one());
}

fn hopf_suite(e: &Engine, bound: u32) {
    for lam in e.classes_up_to(bound).unwrap() {
        let r = e.hopf_report(&lam).unwrap();
        assert!(r.counit && r.coassociative && r.antipode && r.antipode_formulas_agree, "{r:?}");
        assert!(e.hopf_axiom_check_right(&lam).unwrap(), "{lam:?}");
    }
    assert!(e.hopf_axiom_check(&e.zero_key()).unwrap());
}

#[test]
fn hopf_suite_a2_and_kronecker() {
    hopf_suite(&engine(&a2(), 2), 3);
    hopf_suite(&engine(&kronecker(), 2), 3);
    hopf_suite(&engine(&a2(), 3), 2);
}

fn green_all(e: &Engine, bound: u32) {
    let classes = e.classes_up_to(bound).unwrap();
    let mut all = vec![e.zero_key()];
    all.extend(classes);
    for m in &all {
        for n in &all {
            if m.dim.total() + n.dim.total() <= bound {
                assert!(e.green_compatibility_check(m, n).unwrap(), "{m:?} {n:?}");
            }
        }
    }
}

#[test]
fn green_compatibility() {
    green_all(&engine(&a2(), 2), 3);
    green_all(&engine(&kronecker(), 2), 3);
    for q in [2, 3] {
        for quiver in [a2(), kronecker(), a21()] {
            let e = engine(&quiver, q);
            for i in 0..e.n() {
                for j in 0..e.n() {
                    let si = key(&e, e.simple(i));
                    let sj = key(&e, e.simple(j));
                    assert!(e.green_compatibility_check(&si, &sj).unwrap());
                }
            }
        }
    }
}

#[test]
fn pairing_examples() {
    for q in [2, 3, 4] {
        let e = engine(&a2(), q);
        let s1 = key(&e, e.simple(0));
        let s2 = key(&e, e.simple(1));
        let mode = VolumeMode::Dimension;
        assert!(e.pairing_phi(&e.ext_u(&s1), &e.ext_u(&s2), mode).unwrap().is_zero());
        let expect = &Coeff::from_int(q, q as i64) * &Coeff::from_int(q, q as i64 - 1).inv();
        assert_eq!(e.pairing_phi(&e.ext_u(&s1), &e.ext_u(&s1), mode).unwrap(), expect);
        // (μ, ν) for μ = (1,0), ν = (1,1) on A2 is 2 - 1 = 1
        let kmu = ExtendedElement::k(q, vec![1, 0]);
        let knu = ExtendedElement::k(q, vec![1, 1]);
        assert_eq!(e.pairing_phi(&kmu, &knu, mode).unwrap(), Coeff::v_pow(q, -1));
    }
}

#[test]
fn volume_interpretation_is_dimension() {
    let e = engine(&a2(), 2);
    assert!(e.pairing_sanity(3, VolumeMode::Dimension).unwrap());
    assert!(!e.pairing_sanity(3, VolumeMode::OrbitSize).unwrap());
    assert_eq!(e.select_volume_mode(3).unwrap(), Some(VolumeMode::Dimension));
    assert!(engine(&kronecker(), 3).pairing_sanity(2, VolumeMode::Dimension).unwrap());
}

#[test]
fn orthogonal_complements() {
    let e = engine(&a21(), 2);
    let delta = DimVector(vec![1, 1, 1]);
    let comp = e.orthogonal_complement(&delta, VolumeMode::Dimension).unwrap();
    assert_eq!(comp.len(), 1);
    let composition = e.composition_basis(&delta).unwrap();
    for c in &composition {
        let y = ExtendedElement::from_hall(c, 3);
        let x = ExtendedElement::from_hall(&comp[0], 3);
        assert!(e.pairing_phi(&x, &y, VolumeMode::Dimension).unwrap().is_zero());
    }
    assert!(e.orthogonal_complement(&DimVector(vec![1, 1, 0]), VolumeMode::Dimension).unwrap().is_empty());

    let k = engine(&kronecker(), 2);
    assert!(k.orthogonal_complement(&DimVector(vec![1, 1]), VolumeMode::Dimension).unwrap().is_empty());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn comultiplication_is_multiplicative(i in 0usize..64, j in 0usize..64, q in prop::sample::select(vec![2u32, 3])) {
        let e = engine(&kronecker(), q);
        let classes = e.classes_up_to(2).unwrap();
        let m = &classes[i % classes.len()];
        let n = &classes[j % classes.len()];
        prop_assert!(e.green_compatibility_check(m, n).unwrap());
    }
}
