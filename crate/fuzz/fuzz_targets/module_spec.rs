#![no_main]

use hallq::modspec::{ModuleSpec, SpecTriple};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(spec) = ModuleSpec::parse(text) {
        let again = ModuleSpec::parse(&spec.to_string()).expect("printed spec parses");
        assert_eq!(again.to_string(), spec.to_string());
    }
    if let Ok(t) = SpecTriple::parse(text) {
        let again = SpecTriple::parse(&t.to_string()).expect("printed triple parses");
        assert_eq!(again.to_string(), t.to_string());
    }
});
