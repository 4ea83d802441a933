//! Exact-rational evaluation of the slope continued fraction, outside-in,
//! independent of the library's big-integer recurrence.

mod common;

use common::oracle_slope;
use kakimizu::knot::TwistSequence;
use num_rational::Rational64;
use proptest::prelude::*;

fn library_slope(a: &[i64]) -> String {
    TwistSequence::new(a).unwrap().slope().unwrap().to_string()
}

fn show(r: Rational64) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

#[test]
fn reference_slopes() {
    for (a, want) in [
        (&[2, 2][..], "4/15"),
        (&[2, 2, 2, 2], "64/241"),
        (&[-2, 2], "-4/17"),
    ] {
        assert_eq!(show(oracle_slope(a).unwrap()), want, "oracle {a:?}");
        assert_eq!(library_slope(a), want, "library {a:?}");
    }
}

proptest! {
    #[test]
    fn library_agrees_with_oracle(
        half in prop::collection::vec((2i64..7, any::<bool>(), 2i64..7, any::<bool>()), 1..4)
    ) {
        let a: Vec<i64> = half
            .iter()
            .flat_map(|&(x, sx, y, sy)| [if sx { x } else { -x }, if sy { y } else { -y }])
            .collect();
        if let Some(r) = oracle_slope(&a) {
            prop_assert_eq!(library_slope(&a), show(r));
        }
    }
}
