//! Precision planning for products and quotients of lazily evaluated factors.
//!
//! A factor is a closure producing its series to any requested order. Products
//! with negative valuations need their partners to a higher order, which is only
//! known once the valuations are; a second evaluation fixes that.

use crate::error::{Error, Result};
use crate::series::Series;

pub type Lazy<'a> = Box<dyn Fn(i64) -> Result<Series> + Send + Sync + 'a>;

/// Extra orders tried when a denominator is zero to the requested order.
const ZERO_PROBE: [i64; 3] = [32, 128, 512];

/// Product of all factors, exact through `order`.
pub fn product_to(order: i64, factors: &[Lazy<'_>]) -> Result<Series> {
    if factors.is_empty() {
        return Ok(Series::one(order));
    }
    let mut vals: Vec<Series> = factors.iter().map(|f| f(order)).collect::<Result<_>>()?;
    for _ in 0..2 {
        let total: i64 = vals.iter().map(|v| v.lo()).sum();
        let mut changed = false;
        for (i, f) in factors.iter().enumerate() {
            let need = order - (total - vals[i].lo());
            if vals[i].order() < need {
                vals[i] = f(need)?;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut acc = vals[0].clone();
    for v in &vals[1..] {
        acc = acc.mul_series(v);
    }
    debug_assert!(acc.order() >= order, "planned product fell short: {} < {}", acc.order(), order);
    Ok(acc.truncate(order))
}

/// Multiplicative inverse exact through `order`.
pub fn inverse_to(order: i64, f: &Lazy<'_>) -> Result<Series> {
    let mut s = f(order)?;
    let mut probes = ZERO_PROBE.iter();
    while s.is_zero() {
        match probes.next() {
            Some(extra) => s = f(order.max(s.order()) + extra)?,
            None => return Err(Error::ZeroLeadingCoefficient { order: s.order() }),
        }
    }
    let need = order + 2 * s.lo();
    if s.order() < need {
        s = f(need)?;
    }
    Ok(s.invert()?.truncate(order))
}

/// A signed monomial as a factor.
pub fn mono(m: crate::series::SignedMonomial) -> Lazy<'static> {
    Box::new(move |o| Ok(m.to_series(o)))
}
