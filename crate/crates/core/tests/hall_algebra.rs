mod common;

use common::*;
use hallq::algebra::{HallElement, Span};
use hallq::coeff::Coeff;
use hallq::quiver::DimVector;
use proptest::prelude::*;

#[test]
fn a2_products_of_simples() {
    let q = a2();
    for f in [2u32, 3] {
        let e = engine(&q, f);
        let (u1, u2) = (e.u_simple(0).unwrap(), e.u_simple(1).unwrap());
        let p1 = e.identify(&e.projective(0)).unwrap();
        let split = e.identify(&e.simple(0).direct_sum(&e.simple(1)).unwrap()).unwrap();
        let vinv = Coeff::v_pow(f, -1);
        let want = HallElement::term(p1, vinv.clone()).add(&HallElement::term(split.clone(), vinv));
        assert_eq!(e.product(&u1, &u2).unwrap(), want);
        assert_eq!(e.product(&u2, &u1).unwrap(), e.u(&split));
        let one = e.one();
        assert_eq!(e.product(&one, &u1).unwrap(), u1);
        assert_eq!(e.product(&u2, &one).unwrap(), u2);
    }
}

#[test]
fn rescaled_exponents() {
    let q = point();
    let e = engine(&q, 3);
    let s = e.identify(&e.simple(0)).unwrap();
    assert_eq!(e.rescaled_exponent(&s).unwrap(), 0);
    let ss = e.direct_sum(&[s.clone(), s]).unwrap();
    assert_eq!(e.rescaled_exponent(&ss).unwrap(), 2);
    let qa = a2();
    let e = engine(&qa, 3);
    assert_eq!(e.rescaled_exponent(&e.identify(&e.projective(0)).unwrap()).unwrap(), -1);
}

#[test]
fn serre_relations_hold_and_untwisted_control_fails() {
    for qv in [a2(), a3(), kronecker(), a21()] {
        for f in [2u32, 3] {
            let e = engine(&qv, f);
            let (failed, pairs) = e.serre_all(true).unwrap();
            assert!(failed.is_empty(), "q={f} failed {failed:?}");
            assert_eq!(pairs, qv.n() * (qv.n() - 1));
        }
    }
    let e = engine(&a2(), 2);
    assert!(!e.serre_check(0, 1, false).unwrap());
}

#[test]
fn composition_piece_of_a2() {
    let e = engine(&a2(), 2);
    let gens = e.composition_generators().unwrap();
    assert_eq!(e.subalgebra_graded_dim(&gens, &DimVector(vec![1, 0])).unwrap(), 1);
    assert_eq!(e.subalgebra_graded_dim(&gens, &DimVector(vec![1, 1])).unwrap(), 2);
    assert_eq!(e.graded_piece(&DimVector(vec![1, 1])).unwrap().len(), 2);
}

#[test]
fn kronecker_composition_piece_is_proper_at_delta() {
    // Over F_q there are q+1 regular (1,1) classes plus the split one; words in
    // two simples span at most two dimensions.
    let e = engine(&kronecker(), 2);
    let gens = e.composition_generators().unwrap();
    let d = DimVector(vec![1, 1]);
    assert_eq!(e.subalgebra_graded_dim(&gens, &d).unwrap(), 2);
    assert_eq!(e.graded_piece(&d).unwrap().len(), 4);
}

#[test]
fn convolution_model_matches_rescaled_product() {
    for (qv, f) in [(a2(), 2u32), (a2(), 3), (kronecker(), 2), (a21(), 2)] {
        let e = engine(&qv, f);
        let n = qv.n();
        let dims: Vec<DimVector> = DimVector(vec![1; n]).below().into_iter().filter(|d| !d.is_zero()).collect();
        for a in &dims {
            for b in &dims {
                if a.add(b).total() > 3 {
                    continue;
                }
                for m in e.classes(a).unwrap().keys.iter() {
                    for nn in e.classes(b).unwrap().keys.iter() {
                        assert_eq!(
                            e.convolution_product_rescaled(m, nn).unwrap(),
                            e.rescaled_product_in_rescaled_basis(m, nn).unwrap()
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn json_round_trip_and_validation() {
    let e = engine(&kronecker(), 3);
    let x = e.product(&e.u_simple(0).unwrap(), &e.u_simple(1).unwrap()).unwrap();
    let back = HallElement::from_json(&x.to_json()).unwrap();
    assert_eq!(back, x);
    assert_eq!(e.canonicalize(&back).unwrap(), x);
    assert!(HallElement::from_json(r#"{"q":6,"terms":[]}"#).is_err());
    assert!(HallElement::from_json(r#"{"q":2,"terms":[{"dim":[1,1],"code":[5,0],"a":"1"}]}"#).is_err());
    let short = HallElement::from_json(r#"{"q":3,"terms":[{"dim":[1,1],"code":[1],"a":"1"}]}"#).unwrap();
    assert!(e.canonicalize(&short).is_err());
}

#[test]
fn span_tracks_rank() {
    let e = engine(&a2(), 2);
    let (u1, u2) = (e.u_simple(0).unwrap(), e.u_simple(1).unwrap());
    let a = e.product(&u1, &u2).unwrap();
    let b = e.product(&u2, &u1).unwrap();
    let mut span = Span::new();
    assert!(span.insert(&a));
    assert!(span.insert(&b));
    assert!(!span.insert(&a.add(&b.scale(&Coeff::from_int(2, 5)))));
    assert_eq!(span.rank(), 2);
}

fn random_element(e: &hallq::engine::Engine, rng: &mut impl rand::Rng, dims: &[DimVector]) -> HallElement {
    let d = &dims[rng.gen_range(0..dims.len())];
    let keys = e.classes(d).unwrap().keys.clone();
    let mut x = HallElement::zero(e.q());
    for _ in 0..2 {
        let k = &keys[rng.gen_range(0..keys.len())];
        x.add_term(k.clone(), &Coeff::from_int(e.q(), rng.gen_range(-2..=3)) + &Coeff::v_pow(e.q(), rng.gen_range(-1..=1)));
    }
    x
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn product_is_associative_and_graded(seed in any::<u64>(), which in 0usize..3, f in prop::sample::select(vec![2u32, 3])) {
        use rand::SeedableRng;
        let qv = [a2(), kronecker(), a21()][which].clone();
        let e = engine(&qv, f);
        let dims: Vec<DimVector> = DimVector(vec![1; qv.n()]).below().into_iter().filter(|d| !d.is_zero() && d.total() <= 2).collect();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let x = random_element(&e, &mut rng, &dims);
        let y = random_element(&e, &mut rng, &dims);
        let z = random_element(&e, &mut rng, &dims);
        let left = e.product(&e.product(&x, &y).unwrap(), &z).unwrap();
        let right = e.product(&x, &e.product(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        let want = x.degree().unwrap().add(&y.degree().unwrap()).add(&z.degree().unwrap());
        for d in left.degrees() {
            prop_assert_eq!(&d, &want);
        }
    }
}
