#![no_main]

use af_core::io::csv::read_convergence;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let _ = read_convergence(data);
});
