#![no_main]

use std::sync::Arc;

use hallq::algebra::HallElement;
use hallq::engine::Engine;
use hallq::quiver::Quiver;
use hallq::rep::Guards;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(x) = HallElement::from_json(text) else { return };
    let again = HallElement::from_json(&x.to_json()).expect("serialized element parses");
    assert_eq!(again, x);
    if x.q() == 2 {
        let quiver = Arc::new(Quiver::from_json(r#"{"vertices":["1","2"],"arrows":[["a","1","2"]]}"#).unwrap());
        let guards = Guards { enum_exp: 12, hom_exp: 12 };
        let e = Engine::new(quiver, 2, guards).unwrap();
        let _ = e.canonicalize(&x);
    }
});
