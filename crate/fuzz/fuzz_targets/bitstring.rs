#![no_main]
use divsel::{BitString, Problem};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(x) = text.parse::<BitString>() else { return };
    assert_eq!(x.to_string(), text.trim());
    assert_eq!(x.count_ones(), x.bits().filter(|&b| b).count());
    for problem in [Problem::one_min_max(x.len()), Problem::lotz(x.len())] {
        let v = problem.evaluate(&x).unwrap();
        assert!(v.f1 as usize + v.f2 as usize <= x.len());
    }
});
