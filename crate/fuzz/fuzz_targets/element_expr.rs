#![no_main]

use std::sync::Arc;

use hallq::engine::Engine;
use hallq::quiver::Quiver;
use hallq::rep::Guards;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if text.len() > 256 {
        return;
    }
    let quiver = Arc::new(Quiver::from_json(r#"{"vertices":["1","2"],"arrows":[["a","1","2"],["b","1","2"]]}"#).unwrap());
    let e = Engine::new(quiver, 2, Guards { enum_exp: 12, hom_exp: 12 }).unwrap();
    let _ = e.parse_element(text);
});
