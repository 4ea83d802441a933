//! Shared test oracles.

use num_rational::Rational64;

/// Value of `2a_k -/+ 1/(tail)` for the tail starting at `k` (0-based);
/// the sign after `2a_k` is minus for odd 1-based `k`, plus for even.
fn tail(a: &[i64], k: usize) -> Option<Rational64> {
    let head = Rational64::from_integer(2 * a[k]);
    if k + 1 == a.len() {
        return Some(head);
    }
    let rest = tail(a, k + 1)?;
    if rest == Rational64::from_integer(0) {
        return None;
    }
    let term = rest.recip();
    Some(if k.is_multiple_of(2) { head - term } else { head + term })
}

pub fn oracle_slope(a: &[i64]) -> Option<Rational64> {
    let t = tail(a, 0)?;
    (t != Rational64::from_integer(0)).then(|| t.recip())
}
