#![no_main]
use divsel::{AlgorithmKind, InitPolicy, ProblemKind, SelectionScheme};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = text.parse::<ProblemKind>() {
        assert_eq!(p.token().parse::<ProblemKind>().unwrap(), p);
    }
    if let Ok(a) = text.parse::<AlgorithmKind>() {
        assert_eq!(a.token().parse::<AlgorithmKind>().unwrap(), a);
    }
    if let Ok(s) = text.parse::<SelectionScheme>() {
        assert_eq!(s.token().parse::<SelectionScheme>().unwrap(), s);
    }
    if let Ok(i) = text.parse::<InitPolicy>() {
        assert_eq!(i.token().parse::<InitPolicy>().unwrap(), i);
    }
});
