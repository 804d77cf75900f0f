#![no_main]

use hallq::quiver::Quiver;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(q) = Quiver::from_json(text) {
        let again = Quiver::from_json(&q.to_json()).expect("serialized quiver parses");
        assert_eq!(again.content_hash(), q.content_hash());
        assert!(q.topological_order().is_some());
    }
});
