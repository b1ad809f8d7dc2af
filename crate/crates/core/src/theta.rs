//! One-variable theta functions `j(x;Q) = sum_n (-1)^n Q^{C(n,2)} x^n` and the
//! `J` shorthand family.

use num_bigint::BigInt;
use num_integer::Integer;

use crate::cache::{memo, Key};
use crate::error::{Error, Result};
use crate::precision::{inverse_to, Lazy};
use crate::series::{c2, pochhammer, sign_pow, Series, SignedMonomial};

/// The integer interval around `argmin` on which the convex function `f` is `<= bound`,
/// restricted to `[floor, ceil]`.
pub(crate) fn convex_interval(
    argmin: i64,
    floor: i64,
    ceil: i64,
    bound: i64,
    f: impl Fn(i64) -> i64,
) -> Option<(i64, i64)> {
    let start = argmin.clamp(floor, ceil);
    if f(start) > bound {
        return None;
    }
    let mut lo = start;
    while lo > floor && f(lo - 1) <= bound {
        lo -= 1;
    }
    let mut hi = start;
    while hi < ceil && f(hi + 1) <= bound {
        hi += 1;
    }
    Some((lo, hi))
}

/// First integer `n` with `k*n + e >= 0`, the minimiser of `k*C(n,2) + e*n` for `k > 0`.
pub(crate) fn quad_argmin(k: i64, e: i64) -> i64 {
    Integer::div_ceil(&-e, &k)
}

fn check_base(base: SignedMonomial) -> Result<()> {
    if base.exp < 1 {
        return Err(Error::NonpositiveBaseExponent { exp: base.exp });
    }
    Ok(())
}

/// `j(x;base)` through `order`, from the bilateral sum.
pub fn theta_j(x: SignedMonomial, base: SignedMonomial, order: i64) -> Result<Series> {
    check_base(base)?;
    memo(Key::Theta(x, base), order, |order| Ok(theta_sum(x, base, order)))
}

fn theta_sum(x: SignedMonomial, base: SignedMonomial, order: i64) -> Series {
    let k = base.exp;
    let e = x.exp;
    let exponent = |n: i64| k * c2(n) + e * n;
    let Some((lo, hi)) = convex_interval(quad_argmin(k, e), i64::MIN / 4, i64::MAX / 4, order, exponent) else {
        return Series::zero(order);
    };
    let terms = (lo..=hi).map(|n| {
        let sign = sign_pow(-1, n) * sign_pow(base.sign, c2(n)) * sign_pow(x.sign, n);
        (exponent(n), BigInt::from(sign))
    });
    Series::from_int_terms(terms, order)
}

/// True when `j(x;base)` vanishes identically, i.e. `x = base^n` for an integer `n`.
pub fn theta_vanishes(x: SignedMonomial, base: SignedMonomial) -> bool {
    x.exp % base.exp == 0 && base.pow(x.exp / base.exp) == x
}

/// Exact valuation of `j(x;base)` read off the triple product, `None` when it vanishes.
pub fn theta_valuation(x: SignedMonomial, base: SignedMonomial) -> Option<i64> {
    if theta_vanishes(x, base) {
        return None;
    }
    let k = base.exp;
    let e = x.exp;
    // (x;Q)_inf contributes k*i + e for i >= 0, (Q/x;Q)_inf contributes k*i - e for i >= 1
    let left: i64 = (0..).map(|i| k * i + e).take_while(|t| *t < 0).sum();
    let right: i64 = (1..).map(|i| k * i - e).take_while(|t| *t < 0).sum();
    Some(left + right)
}

/// `1/j(x;base)` through `order`.
pub fn theta_inverse(x: SignedMonomial, base: SignedMonomial, order: i64) -> Result<Series> {
    check_base(base)?;
    let Some(v) = theta_valuation(x, base) else {
        return Err(Error::ThetaDenominatorZero { x: x.to_string(), base: base.to_string() });
    };
    // at least through the leading term, even when the pole is deeper than `order`
    theta_j(x, base, (order + 2 * v).max(v))?.invert().map(|s| s.truncate(order))
}

/// Lazy factor `j(x;base)`.
pub fn theta_factor(x: SignedMonomial, base: SignedMonomial) -> Lazy<'static> {
    Box::new(move |o| theta_j(x, base, o))
}

/// Lazy factor `1/j(x;base)`.
pub fn theta_inverse_factor(x: SignedMonomial, base: SignedMonomial) -> Lazy<'static> {
    Box::new(move |o| theta_inverse(x, base, o))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JKind {
    Plain,
    Bar,
    Single,
}

/// `J_{a,b}`, `Jbar_{a,b}` or `J_a` through `order`.
pub fn j_family(a: i64, b: i64, kind: JKind, order: i64) -> Result<Series> {
    match kind {
        JKind::Plain => theta_j(SignedMonomial::q(a), SignedMonomial::q(b), order),
        JKind::Bar => theta_j(SignedMonomial::neg_q(a), SignedMonomial::q(b), order),
        JKind::Single => euler(SignedMonomial::q(a), order),
    }
}

/// `(Q;Q)_inf` for a base `Q = ±q^k`.
pub fn euler(base: SignedMonomial, order: i64) -> Result<Series> {
    check_base(base)?;
    let inner = Integer::div_ceil(&order, &base.exp);
    let plain = memo(Key::Euler(1), inner, |o| pochhammer(SignedMonomial::q(1), None, SignedMonomial::q(1), o))?;
    Ok(plain.compose_base(base)?.truncate(order))
}

/// `1/J_a^3 = (q^a;q^a)_inf^{-3}` through `order`.
pub fn euler_inv3(order: i64) -> Result<Series> {
    let f: Lazy<'_> = Box::new(|o| Ok(euler(SignedMonomial::q(1), o)?.pow(3)));
    inverse_to(order, &f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::precision::product_to;

    #[test]
    fn theta_at_base_powers_vanishes() {
        for n in -4..=4 {
            assert!(theta_j(SignedMonomial::q(n), SignedMonomial::q(1), 30).unwrap().is_zero());
        }
    }

    #[test]
    fn inverse_with_pole_deeper_than_order() {
        let (x, b) = (SignedMonomial::neg_q(-23), SignedMonomial::q(4));
        let v = theta_valuation(x, b).unwrap();
        assert!(v < -5);
        let shallow = theta_inverse(x, b, 5).unwrap();
        assert!(shallow.is_zero() && shallow.order() == 5);
        let deep = theta_inverse(x, b, 100).unwrap();
        assert_eq!(deep.valuation(), Some(-v));
        let back = deep.mul_series(&theta_j(x, b, 100 + 2 * v).unwrap());
        assert_eq!(back.truncate(100 + v), Series::one(100 + v));
    }

    #[test]
    fn j_q_q3_is_euler_product() {
        let j = theta_j(SignedMonomial::q(1), SignedMonomial::q(3), 12).unwrap();
        let e = pochhammer(SignedMonomial::q(1), None, SignedMonomial::q(1), 12).unwrap();
        assert_eq!(j, e);
    }

    #[test]
    fn valuation_matches_sum() {
        for e in -9..=9 {
            for (sign, k) in [(1, 1), (1, 3), (-1, 5), (1, 7)] {
                let x = SignedMonomial::new(1, e);
                let base = SignedMonomial::new(sign, k);
                let s = theta_j(x, base, 80).unwrap();
                assert_eq!(theta_valuation(x, base), s.valuation(), "x={x} base={base}");
            }
        }
    }

    #[test]
    fn jbar01_rearrangement() {
        let o = 40;
        let lhs = j_family(0, 1, JKind::Bar, o).unwrap();
        let f: Vec<Lazy<'_>> = vec![
            Box::new(|o| Ok(euler(SignedMonomial::q(2), o)?.pow(2))),
            Box::new(|o| inverse_to(o, &(Box::new(|o| euler(SignedMonomial::q(1), o)) as Lazy<'_>))),
        ];
        let rhs = product_to(o, &f).unwrap().scale_int(2);
        assert_eq!(lhs, rhs);
    }
}
