#![no_main]

use aflt_core::{IdealHNF, ImagQuadField};
use libfuzzer_sys::fuzz_target;

const DS: [i64; 6] = [1, 2, 3, 7, 15, 127];

fuzz_target!(|data: &[u8]| {
    let Some((&k, rest)) = data.split_first() else { return };
    let Ok(s) = std::str::from_utf8(rest) else { return };
    let field = ImagQuadField::new(DS[k as usize % DS.len()]).unwrap();
    if let Ok(i) = IdealHNF::parse_in(&field, s) {
        let back = IdealHNF::parse_in(&field, &i.to_string()).expect("display output parses");
        assert_eq!(back, i);
        for g in i.basis() {
            assert!(i.contains(&g));
        }
    }
});
