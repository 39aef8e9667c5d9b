#![no_main]

use libfuzzer_sys::fuzz_target;
use structctl::{lin_check, maximum_matching, parse_network, to_dot};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(g) = parse_network(text) else {
        return;
    };
    let printed = g.to_text();
    let h = parse_network(&printed).expect("printed network parses");
    assert_eq!(h.to_text(), printed);
    assert_eq!(to_dot(&h), to_dot(&g));
    if g.n_total() <= 64 {
        let m = maximum_matching(&g);
        assert!(m.size() <= g.n());
        let _ = lin_check(&g);
    }
});
