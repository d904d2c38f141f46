#![no_main]

use aflt_core::{Element, ImagQuadField};
use libfuzzer_sys::fuzz_target;

const DS: [i64; 6] = [1, 2, 3, 7, 15, 127];

fuzz_target!(|data: &[u8]| {
    let Some((&k, rest)) = data.split_first() else { return };
    let Ok(s) = std::str::from_utf8(rest) else { return };
    let field = ImagQuadField::new(DS[k as usize % DS.len()]).unwrap();
    if let Ok(z) = Element::parse_in(&field, s) {
        let back = Element::parse_in(&field, &z.to_string()).expect("display output parses");
        assert_eq!(back, z);
    }
});
