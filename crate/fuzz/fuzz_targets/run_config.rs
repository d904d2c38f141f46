#![no_main]

use libfuzzer_sys::fuzz_target;

// Arguments are NUL-separated; only parsing is exercised.
fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let args = std::iter::once("aflt").chain(s.split('\0'));
    let _ = aflt_cli::parse_args(args);
});
