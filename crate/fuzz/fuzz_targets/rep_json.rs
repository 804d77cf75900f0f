#![no_main]

use std::sync::Arc;

use hallq::quiver::Quiver;
use hallq::rep::Representation;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let quiver = Arc::new(Quiver::from_json(r#"{"vertices":["1","2"],"arrows":[["a","1","2"],["b","1","2"]]}"#).unwrap());
    if let Ok(rep) = Representation::from_json(text, quiver.clone()) {
        let again = Representation::from_json(&rep.to_json(), quiver).expect("serialized representation parses");
        assert_eq!(again.to_json(), rep.to_json());
    }
});
