#![no_main]

use libfuzzer_sys::fuzz_target;
use structctl::planner::parse_plan;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(plan) = parse_plan(text) {
        let again = parse_plan(&plan.to_text()).expect("serialized plan parses");
        assert_eq!(again, plan);
    }
});
