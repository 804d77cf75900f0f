mod common;

use common::*;
use hallq::error::Error;
use hallq::hallpoly::{fit_polynomial, FitOptions};
use hallq::modspec::{ModuleSpec, SlotAssignment, SpecTriple};
use hallq::quiver::DimVector;
use hallq::tame::{ModuleClass, Tube};

fn fit(quiver: &std::sync::Arc<hallq::quiver::Quiver>, triple: &str) -> String {
    let t = SpecTriple::parse(triple).unwrap();
    let p = fit_polynomial(quiver, &t, &FitOptions::default()).unwrap();
    assert_eq!(p.status, "validated", "{triple}");
    assert!(p.slot_assignments_agree);
    p.polynomial
}

#[test]
fn instantiation_examples() {
    let e = engine(&a2(), 2);
    let r = e.instantiate(&ModuleSpec::parse("S1+S2").unwrap(), SlotAssignment::Forward).unwrap();
    assert_eq!(r.dim(), &DimVector(vec![1, 1]));
    assert!(r.mats().iter().all(|m| m.data().iter().all(|&x| x == 0)));

    let k = engine(&kronecker(), 2);
    let h = k.instantiate(&ModuleSpec::parse("h(1,1)").unwrap(), SlotAssignment::Forward).unwrap();
    assert_eq!(h.dim(), &DimVector(vec![1, 1]));
    assert!(matches!(k.classify(&h).unwrap(), ModuleClass::Regular(Tube::Homogeneous { .. })));

    let spec = ModuleSpec::parse("h(1,1)+h(2,1)+h(3,1)+h(4,1)").unwrap();
    match k.instantiate(&spec, SlotAssignment::Forward) {
        Err(Error::FieldTooSmall { q: 2, available: 3, requested: 4 }) => {}
        other => panic!("unexpected {other:?}"),
    }
    assert!(k.instantiate(&ModuleSpec::parse("h(1,1)+h(2,1)+h(3,1)").unwrap(), SlotAssignment::Forward).is_ok());
}

#[test]
fn tube_labels_on_a21() {
    let e = engine(&a21(), 3);
    // Tube 1 lists (1,0,1) before (0,1,0).
    let top = e.instantiate(&ModuleSpec::parse("t(1,1,1)").unwrap(), SlotAssignment::Forward).unwrap();
    assert_eq!(top.dim(), &DimVector(vec![1, 0, 1]));
    let long = e.instantiate(&ModuleSpec::parse("t(1,2,3)").unwrap(), SlotAssignment::Forward).unwrap();
    assert_eq!(long.dim(), &DimVector(vec![1, 2, 1]));
    assert!(matches!(e.classify(&long).unwrap(), ModuleClass::Regular(Tube::NonHomogeneous { index: 0 })));
}

#[test]
fn single_vertex_polynomials() {
    let p = point();
    assert_eq!(fit(&p, "2*S1;S1;S1"), "x + 1");
    // Complete flags in F_q^3: (q^2 + q + 1)(q + 1).
    assert_eq!(fit(&p, "3*S1;S1;S1;S1"), "x^3 + 2x^2 + 2x + 1");
    // Planes in F_q^3 with quotient a line.
    assert_eq!(fit(&p, "3*S1;S1;2*S1"), "x^2 + x + 1");
}

#[test]
fn ten_triples_interpolate_to_integer_polynomials() {
    // Each value is derived by counting submodules by hand.
    let cases: Vec<(std::sync::Arc<hallq::quiver::Quiver>, &str, &str)> = vec![
        (a2(), "S1+S2;S1;S2", "1"),
        (a2(), "P1;S1;S2", "1"),
        (a2(), "P1;S2;S1", "0"),
        (a2(), "S1+S2;S2;S1", "1"),
        (a2(), "2*S1;S1;S1", "x + 1"),
        // lines at the sink not containing the image of the arrow
        (a2(), "P1+S2;P1;S2", "x"),
        (a2(), "P1+S2;S2;P1", "1"),
        (kronecker(), "h(1,1);S1;S2", "1"),
        (kronecker(), "S1+S2;S1;S2", "1"),
        (kronecker(), "h(1,1)+h(2,1);h(1,1);h(2,1)", "1"),
        // injective maps H -> H + H up to scalars
        (kronecker(), "2*h(1,1);h(1,1);h(1,1)", "x + 1"),
        (kronecker(), "h(1,2);h(1,1);h(1,1)", "1"),
        (a21(), "r(0,1,1);S2;S3", "1"),
        (a21(), "t(1,2,2);t(1,1,1);S2", "1"),
        (a21(), "t(1,1,2);S2;t(1,1,1)", "1"),
        (a21(), "t(1,2,2);S2;t(1,1,1)", "0"),
        (a21(), "2*S2;S2;S2", "x + 1"),
    ];
    for (q, triple, expect) in &cases {
        assert_eq!(fit(q, triple), *expect, "{triple}");
    }
}

#[test]
fn measured_values_match_the_ext_oracle() {
    for (quiver, triple) in [(kronecker(), "2*h(1,1);h(1,1);h(1,1)"), (a2(), "P1+S2;P1;S2"), (a21(), "t(1,2,2);t(1,1,1);S2")] {
        let t = SpecTriple::parse(triple).unwrap();
        for q in [2, 3, 5] {
            let e = engine(&quiver, q);
            let l = e.instantiate(&t.target, SlotAssignment::Forward).unwrap();
            let m = e.instantiate(&t.parts[0], SlotAssignment::Forward).unwrap();
            let n = e.instantiate(&t.parts[1], SlotAssignment::Forward).unwrap();
            assert_eq!(e.hall_number(&l, &m, &n).unwrap(), e.hall_number_via_ext_oracle(&l, &m, &n).unwrap(), "{triple} at {q}");
        }
    }
}

#[test]
fn bad_options_are_input_errors() {
    let t = SpecTriple::parse("2*S1;S1;S1").unwrap();
    let opts = FitOptions { primes: vec![2, 3], validation: 3, ..FitOptions::default() };
    assert!(matches!(fit_polynomial(&point(), &t, &opts), Err(Error::Input(_))));
}

#[test]
fn too_few_points_are_extended_adaptively() {
    // A single fitting point gives a constant; validation fails and the fit grows.
    let t = SpecTriple::parse("3*S1;S1;S1;S1").unwrap();
    let opts = FitOptions { primes: vec![2], validation: 3, ..FitOptions::default() };
    let p = fit_polynomial(&point(), &t, &opts).unwrap();
    assert_eq!(p.polynomial, "x^3 + 2x^2 + 2x + 1");
    assert!(p.validation.len() > 1);
}
