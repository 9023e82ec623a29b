//! Exact identity checking for polynomial families indexed by an integer m.

use crate::exact::Rat;
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    pub holds: bool,
    /// (m, lhs − rhs) for every m where the sides differ.
    pub failures: Vec<(i64, Poly<Rat>)>,
    pub checked: Vec<i64>,
}

/// Expand both sides for each m and compare coefficient by coefficient.
pub fn identity_check<L, R, I>(lhs: L, rhs: R, ms: I) -> IdentityReport
where
    L: Fn(i64) -> Poly<Rat>,
    R: Fn(i64) -> Poly<Rat>,
    I: IntoIterator<Item = i64>,
{
    let mut failures = Vec::new();
    let mut checked = Vec::new();
    for m in ms {
        checked.push(m);
        let diff = &lhs(m) - &rhs(m);
        if !diff.is_zero() {
            failures.push((m, diff));
        }
    }
    IdentityReport { holds: failures.is_empty(), failures, checked }
}

/// Default parameter range for m.
pub fn default_ms() -> std::ops::RangeInclusive<i64> {
    1..=12
}

/// The polynomial variable t.
pub fn t() -> Poly<Rat> {
    Poly::from_ints(&[0, 1])
}

/// Integer constant as a polynomial.
pub fn k(n: i64) -> Poly<Rat> {
    Poly::from_ints(&[n])
}
