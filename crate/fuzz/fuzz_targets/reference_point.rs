#![no_main]
use divsel::RefPolicy;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(policy) = text.parse::<RefPolicy>() {
        // Presets and literal pairs may name the same point, so compare
        // resolved coordinates rather than variants.
        let again: RefPolicy = policy.token().parse().unwrap();
        for n in [1, 100, 1 << 20] {
            assert_eq!(again.resolve(n), policy.resolve(n));
        }
    }
});
