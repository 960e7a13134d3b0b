#![no_main]
use divsel::harness::parse_config_str;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(file) = parse_config_str(text) {
        if let Ok(config) = file.resolve() {
            // A resolved config must describe valid runs.
            config.run_config(0).validate().unwrap();
            let _ = config.fingerprint();
        }
    }
});
