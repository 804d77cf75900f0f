mod common;

use std::collections::BTreeSet;

use common::*;
use hallq::quiver::DimVector;
use hallq::tame::{coxeter_part, defect, recognize_tame, regular_simples, ModuleClass, Part, TameFamily, Tube};

fn dv(v: &[u32]) -> DimVector {
    DimVector(v.to_vec())
}

fn tube_set(tubes: &[Vec<DimVector>]) -> BTreeSet<Vec<DimVector>> {
    tubes.iter().cloned().collect()
}

#[test]
fn recognizes_table_entries() {
    let t = recognize_tame(&a21()).unwrap().unwrap();
    assert_eq!(t.family, TameFamily::ATilde { p: 2, q: 1 });
    assert_eq!((t.l, t.periods.clone(), t.delta.clone()), (1, vec![2], dv(&[1, 1, 1])));

    let t = recognize_tame(&d4()).unwrap().unwrap();
    assert_eq!(t.family, TameFamily::DTilde { n: 4 });
    assert_eq!((t.l, t.periods.clone(), t.delta.clone()), (3, vec![2, 2, 2], dv(&[1, 1, 2, 1, 1])));

    let t = recognize_tame(&e6()).unwrap().unwrap();
    assert_eq!(t.family, TameFamily::ETilde { n: 6 });
    assert_eq!((t.periods.clone(), t.delta.clone()), (vec![2, 3, 3], dv(&[1, 2, 3, 2, 1, 2, 1])));

    let t = recognize_tame(&kronecker()).unwrap().unwrap();
    assert_eq!((t.l, t.delta.clone()), (0, dv(&[1, 1])));

    assert!(recognize_tame(&a2()).unwrap().is_none());
    assert!(recognize_tame(&a3()).unwrap().is_none());
    assert!(recognize_tame(&quiver(&["1", "2"], &[])).is_err());
}

#[test]
fn recognizes_larger_shapes() {
    // D~5: 1,2 -> 3 -> 4 <- 5,6 (two branch points)
    let d5 = quiver(
        &["1", "2", "3", "4", "5", "6"],
        &[("a", "1", "3"), ("b", "2", "3"), ("c", "3", "4"), ("d", "5", "4"), ("e", "6", "4")],
    );
    let t = recognize_tame(&d5).unwrap().unwrap();
    assert_eq!(t.family, TameFamily::DTilde { n: 5 });
    assert_eq!(t.delta, dv(&[1, 1, 2, 2, 1, 1]));
    assert_eq!(t.periods, vec![2, 2, 3]);
    // E~7: arm 1-2-3-4-5-6-7 with 8 attached to 4
    let names = ["1", "2", "3", "4", "5", "6", "7", "8"];
    let e7 = quiver(
        &names,
        &[("a", "1", "2"), ("b", "2", "3"), ("c", "3", "4"), ("d", "5", "4"), ("e", "6", "5"), ("f", "7", "6"), ("g", "8", "4")],
    );
    let t = recognize_tame(&e7).unwrap().unwrap();
    assert_eq!(t.family, TameFamily::ETilde { n: 7 });
    assert_eq!(t.delta, dv(&[1, 2, 3, 4, 3, 2, 1, 2]));
    // E~8: 1-2-3-4-5-6-7-8 with 9 attached to 3
    let names = ["1", "2", "3", "4", "5", "6", "7", "8", "9"];
    let e8 = quiver(
        &names,
        &[("a", "1", "2"), ("b", "2", "3"), ("c", "3", "4"), ("d", "4", "5"), ("e", "5", "6"), ("f", "6", "7"), ("g", "7", "8"), ("h", "9", "3")],
    );
    let t = recognize_tame(&e8).unwrap().unwrap();
    assert_eq!(t.family, TameFamily::ETilde { n: 8 });
    assert_eq!(t.delta, dv(&[2, 4, 6, 5, 4, 3, 2, 1, 3]));
    let tubes = regular_simples(&e8, &t).unwrap();
    assert_eq!(tubes.iter().map(Vec::len).collect::<Vec<_>>(), vec![2, 3, 5]);
    // A~{2,2}: square with alternating pairs
    let a22 = quiver(&["1", "2", "3", "4"], &[("a", "1", "2"), ("b", "2", "3"), ("c", "1", "4"), ("d", "4", "3")]);
    let t = recognize_tame(&a22).unwrap().unwrap();
    assert_eq!(t.family, TameFamily::ATilde { p: 2, q: 2 });
    assert_eq!(t.periods, vec![2, 2]);
    assert_eq!(regular_simples(&a22, &t).unwrap().len(), 2);
}

#[test]
fn table_invariants_hold() {
    for qv in [a21(), d4(), e6(), kronecker()] {
        let t = recognize_tame(&qv).unwrap().unwrap();
        let n = qv.n();
        assert_eq!(t.periods.iter().map(|r| r - 1).sum::<usize>(), n - 2);
        assert!(t.l <= 3);
        for v in 0..n {
            assert_eq!(qv.symmetric(&t.delta, &DimVector::unit(n, v)).unwrap(), 0);
        }
        assert_eq!(t.delta.0[t.extending_vertex], 1);
        for tube in regular_simples(&qv, &t).unwrap() {
            let sum = tube.iter().fold(DimVector::zero(n), |a, b| a.add(b));
            assert_eq!(sum, t.delta);
        }
    }
}

#[test]
fn d4_regular_simples_match_table() {
    let qv = d4();
    let t = recognize_tame(&qv).unwrap().unwrap();
    let got = regular_simples(&qv, &t).unwrap();
    let want = vec![
        vec![dv(&[1, 0, 1, 1, 0]), dv(&[0, 1, 1, 0, 1])],
        vec![dv(&[1, 0, 1, 0, 1]), dv(&[0, 1, 1, 1, 0])],
        vec![dv(&[1, 1, 1, 0, 0]), dv(&[0, 0, 1, 1, 1])],
    ];
    assert_eq!(tube_set(&got), tube_set(&want));
}

#[test]
fn e6_regular_simples_match_table() {
    let qv = e6();
    let t = recognize_tame(&qv).unwrap().unwrap();
    let got = regular_simples(&qv, &t).unwrap();
    let want = vec![
        vec![dv(&[1, 1, 2, 1, 1, 1, 1]), dv(&[0, 1, 1, 1, 0, 1, 0])],
        vec![dv(&[1, 1, 1, 1, 0, 0, 0]), dv(&[0, 1, 1, 0, 0, 1, 1]), dv(&[0, 0, 1, 1, 1, 1, 0])],
        vec![dv(&[1, 1, 1, 0, 0, 1, 0]), dv(&[0, 1, 1, 1, 1, 0, 0]), dv(&[0, 0, 1, 1, 0, 1, 1])],
    ];
    assert_eq!(tube_set(&got), tube_set(&want));
}

#[test]
fn a21_tube() {
    let qv = a21();
    let t = recognize_tame(&qv).unwrap().unwrap();
    assert_eq!(regular_simples(&qv, &t).unwrap(), vec![vec![dv(&[1, 0, 1]), dv(&[0, 1, 0])]]);
}

#[test]
fn classify_places_regular_simples_in_their_tubes() {
    for (qv, f) in [(d4(), 2u32), (e6(), 2), (a21(), 2), (a21(), 3)] {
        let e = engine(&qv, f);
        let ctx = e.tame().unwrap();
        for (i, tube) in ctx.tube_dims.iter().enumerate() {
            for d in tube {
                let r = e.exceptional(d, 1).unwrap();
                assert_eq!(e.classify(&r).unwrap(), ModuleClass::Regular(Tube::NonHomogeneous { index: i }));
            }
        }
    }
}

#[test]
fn kronecker_defects_and_classes() {
    let qv = kronecker();
    let t = recognize_tame(&qv).unwrap().unwrap();
    assert_eq!(defect(&qv, &t, &dv(&[0, 1])).unwrap(), -1);
    assert_eq!(defect(&qv, &t, &dv(&[1, 0])).unwrap(), 1);
    assert_eq!(defect(&qv, &t, &t.delta).unwrap(), 0);
    let e = engine(&qv, 3);
    for key in e.classes(&dv(&[1, 1])).unwrap().keys.iter() {
        let info = e.info(key).unwrap();
        if info.summands.len() == 1 {
            assert!(matches!(e.classify_key(key).unwrap(), ModuleClass::Regular(Tube::Homogeneous { parameter: Some(_) })));
        } else {
            assert!(matches!(e.classify_key(key).unwrap(), ModuleClass::Mixed { .. }));
        }
    }
    assert_eq!(e.classify(&e.projective(0)).unwrap(), ModuleClass::Preprojective);
    assert_eq!(e.classify(&e.injective(1)).unwrap(), ModuleClass::Preinjective);
}

/// Indecomposable classes with every dimension up to `top`, over the given engine.
fn indecomposables_up_to(e: &hallq::engine::Engine, top: &DimVector) -> Vec<hallq::orbit::ClassKey> {
    let mut out = Vec::new();
    for d in top.below() {
        if !d.is_zero() {
            out.extend(e.indecomposables(&d).unwrap().iter().cloned());
        }
    }
    out
}

#[test]
fn defect_trichotomy_matches_coxeter_iteration() {
    for (qv, top) in [(kronecker(), dv(&[2, 3])), (kronecker(), dv(&[3, 2])), (a21(), dv(&[2, 2, 2]))] {
        let e = engine(&qv, 2);
        let t = e.tame().unwrap().tame.clone();
        for key in indecomposables_up_to(&e, &top) {
            let part = coxeter_part(&qv, &key.dim).unwrap();
            let class = e.classify_key(&key).unwrap();
            let from_defect = match defect(&qv, &t, &key.dim).unwrap().signum() {
                -1 => Part::Preprojective,
                0 => Part::Regular,
                _ => Part::Preinjective,
            };
            assert_eq!(part, from_defect, "{}", key.dim);
            let expect = match class {
                ModuleClass::Preprojective => Part::Preprojective,
                ModuleClass::Regular(_) => Part::Regular,
                ModuleClass::Preinjective => Part::Preinjective,
                other => panic!("indecomposable classified as {other:?}"),
            };
            assert_eq!(part, expect);
        }
    }
}

#[test]
fn hom_ext_vanishing_between_parts_and_tubes() {
    for (qv, top) in [(kronecker(), dv(&[2, 2])), (a21(), dv(&[2, 2, 1])), (a21(), dv(&[1, 2, 2]))] {
        let e = engine(&qv, 2);
        let inds = indecomposables_up_to(&e, &top);
        let classes: Vec<_> = inds.iter().map(|k| (e.rep_of(k), e.classify_key(k).unwrap())).collect();
        let rank = |c: &ModuleClass| match c {
            ModuleClass::Preprojective => 0,
            ModuleClass::Regular(_) => 1,
            ModuleClass::Preinjective => 2,
            _ => unreachable!(),
        };
        for (x, cx) in &classes {
            for (y, cy) in &classes {
                let (hom, ext) = x.hom_ext_dims(y).unwrap();
                // Hom goes only forwards and Ext only backwards through P, R, I.
                if rank(cx) > rank(cy) {
                    assert_eq!(hom, 0);
                }
                if rank(cx) < rank(cy) {
                    assert_eq!(ext, 0);
                }
                if let (ModuleClass::Regular(tx), ModuleClass::Regular(ty)) = (cx, cy) {
                    let different = match (tx, ty) {
                        (Tube::NonHomogeneous { index: a }, Tube::NonHomogeneous { index: b }) => a != b,
                        (Tube::NonHomogeneous { .. }, Tube::Homogeneous { .. })
                        | (Tube::Homogeneous { .. }, Tube::NonHomogeneous { .. }) => true,
                        _ => false,
                    };
                    if different {
                        assert_eq!((hom, ext), (0, 0));
                    }
                }
            }
        }
    }
}
