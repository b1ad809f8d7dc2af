//! Hecke-type double sums
//! `f_{a,b,c}(x,y;Q) = (sum_{r,s>=0} - sum_{r,s<0}) (-1)^{r+s} x^r y^s Q^{a C(r,2) + b r s + c C(s,2)}`.

use num_bigint::BigInt;

use crate::cache::{memo, Key};
use crate::error::{Error, Result};
use crate::series::{c2, sign_pow, Series, SignedMonomial};
use crate::theta::{convex_interval, quad_argmin};

const FAR: i64 = i64::MAX / 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HeckeSpec {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub x: SignedMonomial,
    pub y: SignedMonomial,
    pub base: SignedMonomial,
}

impl HeckeSpec {
    pub fn new(a: i64, b: i64, c: i64, x: SignedMonomial, y: SignedMonomial, base: SignedMonomial) -> Self {
        HeckeSpec { a, b, c, x, y, base }
    }

    /// Exponent of `q` in the `(r,s)` term.
    pub fn exponent(&self, r: i64, s: i64) -> i64 {
        self.base.exp * self.form(r, s) + self.x.exp * r + self.y.exp * s
    }

    /// Sign of the `(r,s)` term, before the quadrant sign.
    pub fn sign(&self, r: i64, s: i64) -> i8 {
        sign_pow(-1, r + s) * sign_pow(self.x.sign, r) * sign_pow(self.y.sign, s) * sign_pow(self.base.sign, self.form(r, s))
    }

    fn form(&self, r: i64, s: i64) -> i64 {
        self.a * c2(r) + self.b * r * s + self.c * c2(s)
    }

    fn validate(&self) -> Result<()> {
        if self.base.exp < 1 {
            return Err(Error::NonpositiveBaseExponent { exp: self.base.exp });
        }
        if self.a < 1 || self.c < 1 || self.b < 0 {
            return Err(Error::UnboundedDoubleSum { a: self.a, b: self.b, c: self.c });
        }
        Ok(())
    }

    /// Calls `visit(r, s, exponent, signed coefficient)` for every term with exponent `<= order`.
    ///
    /// On each quadrant `b r s >= 0`, so the row minimum over `s` is bounded below by
    /// `k a C(r,2) + x.exp r + min_s(k c C(s,2) + y.exp s)`, a convex function of `r`;
    /// rows are scanned exactly on the interval where that bound is `<= order`.
    pub fn visit_terms(&self, order: i64, mut visit: impl FnMut(i64, i64, i64, i8)) -> Result<()> {
        self.validate()?;
        let k = self.base.exp;
        for (floor, ceil, quadrant_sign) in [(0, FAR, 1i8), (-FAR, -1, -1i8)] {
            let s_argmin = quad_argmin(k * self.c, self.y.exp).clamp(floor, ceil);
            let s_floor = k * self.c * c2(s_argmin) + self.y.exp * s_argmin;
            let row_bound = |r: i64| k * self.a * c2(r) + self.x.exp * r + s_floor;
            let Some((r_lo, r_hi)) = convex_interval(quad_argmin(k * self.a, self.x.exp), floor, ceil, order, row_bound)
            else {
                continue;
            };
            for r in r_lo..=r_hi {
                let argmin = quad_argmin(k * self.c, k * self.b * r + self.y.exp);
                let Some((s_lo, s_hi)) = convex_interval(argmin, floor, ceil, order, |s| self.exponent(r, s)) else {
                    continue;
                };
                for s in s_lo..=s_hi {
                    visit(r, s, self.exponent(r, s), self.sign(r, s) * quadrant_sign);
                }
            }
        }
        Ok(())
    }

    /// Smallest exponent over all terms of both quadrants (before cancellation).
    pub fn min_exponent(&self, order: i64) -> Result<Option<i64>> {
        let mut best: Option<i64> = None;
        self.visit_terms(order, |_, _, e, _| best = Some(best.map_or(e, |b| b.min(e))))?;
        Ok(best)
    }
}

/// `f_{a,b,c}(x,y;base)` through `order`.
pub fn hecke_f(spec: &HeckeSpec, order: i64) -> Result<Series> {
    spec.validate()?;
    let key = Key::Hecke([spec.a, spec.b, spec.c], spec.x, spec.y, spec.base);
    memo(key, order, |order| {
        let mut terms = Vec::new();
        spec.visit_terms(order, |_, _, e, sign| terms.push((e, BigInt::from(sign))))?;
        Ok(Series::from_int_terms(terms, order))
    })
}
