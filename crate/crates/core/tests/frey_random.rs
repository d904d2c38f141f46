use aflt_core::frey::{frey_invariants, j_of_lambda, legendre_lambda, solution_with_unit_c, vm_analysis};
use aflt_core::quad_field::primes_above;
use aflt_core::{Element, Error, ImagQuadField};
use proptest::prelude::*;

fn el(f: &ImagQuadField, u: i64, w: i64) -> Element {
    Element::from_coords(f, u.into(), w.into())
}

fn solution() -> impl Strategy<Value = (i64, u32, (i64, i64), (i64, i64), i64, i64)> {
    (
        prop::sample::select(vec![2i64, 5, 6, 7, 13, 15, 23]),
        prop::sample::select(vec![3u32, 5, 7]),
        (-5i64..=5, -5i64..=5),
        (-5i64..=5, -5i64..=5),
        (-3i64..=3).prop_map(|k| 2 * k + 1),
        (-3i64..=3).prop_map(|k| 2 * k + 1),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn invariants_are_consistent((d, p, a, b, ca, cb) in solution()) {
        let f = ImagQuadField::new(d).unwrap();
        let (a, b) = (el(&f, a.0, a.1), el(&f, b.0, b.1));
        let (ca, cb) = (f.int(ca), f.int(cb));
        let fd = match solution_with_unit_c(&ca, &cb, &a, &b, p) {
            Ok(fd) => fd,
            Err(Error::EvenCoefficient(_) | Error::ZeroCoefficient(_) | Error::TrivialSolution) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        // j Δ = c4^3
        prop_assert_eq!(&fd.j * &fd.delta, fd.c4.pow(3));
        // Roots 0, A a^p, -B b^p in Legendre form.
        let alpha = &ca * &a.pow(p);
        let beta = -(&cb * &b.pow(p));
        let lambda = legendre_lambda(&f.zero(), &alpha, &beta).unwrap();
        prop_assert_eq!(&j_of_lambda(&lambda).unwrap(), &fd.j);
        // Swapping the roles of (A, a) and (B, b) twists by -1 and keeps j.
        let swapped = frey_invariants(&cb, &ca, &fd.coef_c, &b, &a, &fd.c, p).unwrap();
        prop_assert_eq!(&swapped.j, &fd.j);
        // Perturbing C breaks the equation.
        let bad = &fd.coef_c + &f.int(2);
        prop_assert!(matches!(frey_invariants(&ca, &cb, &bad, &a, &b, &fd.c, p), Err(Error::NotASolution(_))));
    }

    #[test]
    fn vm_reports_nonnegative_valuation((d, p, a, b, ca, cb) in solution()) {
        let f = ImagQuadField::new(d).unwrap();
        let (a, b) = (el(&f, a.0, a.1), el(&f, b.0, b.1));
        let Ok(fd) = solution_with_unit_c(&f.int(ca), &f.int(cb), &a, &b, p) else { return Ok(()) };
        for ell in [3u64, 5, 7, 11, 13] {
            for m in primes_above(&f, ell).unwrap() {
                if let Ok(r) = vm_analysis(&fd, &m) {
                    if r.t == 0 {
                        prop_assert!(r.v_m_j >= 0, "{:?}", r);
                    }
                }
            }
        }
    }
}
