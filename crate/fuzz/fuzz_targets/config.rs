#![no_main]

use af_core::io::config::parse_config;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(cfg) = parse_config(text) else { return };
    for e in cfg.entries() {
        assert!(!e.key.is_empty() && !e.value.is_empty());
        assert!(e.line >= 1);
        let _ = cfg.parse::<f64>(&e.key);
        let _ = cfg.parse_list::<usize>(&e.key);
    }
    let _ = cfg.check_keys(&["problem", "op", "cfl"]);
});
