#![no_main]

use aflt_core::{Element, ImagQuadField};
use arbitrary::Arbitrary;
use libfuzzer_sys::fuzz_target;

#[derive(Debug, Arbitrary)]
struct Input {
    d: u16,
    a: (i32, i32, i16),
    b: (i32, i32, i16),
}

fuzz_target!(|inp: Input| {
    let Ok(field) = ImagQuadField::new(i64::from(inp.d) + 1) else { return };
    let el = |(x, y, n): (i32, i32, i16)| Element::new(&field, x.into(), y.into(), n.into()).ok();
    let (Some(a), Some(b)) = (el(inp.a), el(inp.b)) else { return };
    assert_eq!(&(&a + &b) - &b, a);
    assert_eq!(a.conj().conj(), a);
    assert_eq!((&a * &b).norm(), a.norm() * b.norm());
    if !b.is_zero() {
        assert_eq!((&a * &b).checked_div(&b).unwrap(), a);
    }
    assert_eq!(&a + &a.one_minus(), field.one());
});
