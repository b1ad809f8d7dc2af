//! Appell functions `m(x,z;Q)` and the Appell/theta expansion of `f_{n,n,1}`.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::cache::{memo, Key};
use crate::error::{Error, Result};
use crate::precision::{mono, product_to, Lazy};
use crate::series::{c2, sign_pow, Series, SignedMonomial};
use crate::theta::{convex_interval, euler, quad_argmin, theta_factor, theta_inverse_factor, theta_j, theta_valuation};

/// The unique `r` with `u_r = Q^{r-1} x z` of exponent zero, if any, with that `u_r`.
fn critical_term(x: SignedMonomial, z: SignedMonomial, base: SignedMonomial) -> Option<(i64, SignedMonomial)> {
    let xz = x.mul(z);
    (xz.exp % base.exp == 0).then(|| {
        let r = 1 - xz.exp / base.exp;
        (r, base.pow(r - 1).mul(xz))
    })
}

/// `m(x,z;base)` through `order`.
pub fn appell_m(x: SignedMonomial, z: SignedMonomial, base: SignedMonomial, order: i64) -> Result<Series> {
    if base.exp < 1 {
        return Err(Error::NonpositiveBaseExponent { exp: base.exp });
    }
    if let Some((r, u)) = critical_term(x, z, base) {
        if u.sign == 1 {
            return Err(Error::AppellPole { r });
        }
    }
    let Some(vz) = theta_valuation(z, base) else {
        return Err(Error::ThetaDenominatorZero { x: z.to_string(), base: base.to_string() });
    };
    memo(Key::Appell(x, z, base), order, |order| {
        let sum = lerch_sum(x, z, base, order + vz);
        if sum.is_zero() {
            return Ok(Series::zero(order));
        }
        let inv = theta_j(z, base, order - sum.lo() + 2 * vz)?.invert()?;
        Ok(sum.mul_series(&inv).truncate(order))
    })
}

/// `sum_r (-1)^r Q^{C(r,2)} z^r / (1 - Q^{r-1} x z)` through `order`.
fn lerch_sum(x: SignedMonomial, z: SignedMonomial, base: SignedMonomial, order: i64) -> Series {
    let k = base.exp;
    let xz = x.mul(z);
    // term r starts at k C(r,2) + z.exp r; the geometric rewrite for u_r.exp < 0 only raises it
    let lead = |r: i64| k * c2(r) + z.exp * r;
    let Some((r_lo, r_hi)) = convex_interval(quad_argmin(k, z.exp), i64::MIN / 8, i64::MAX / 8, order, lead) else {
        return Series::zero(order);
    };
    // doubled coefficients so the u_r = -1 case stays integral
    let mut terms = Vec::new();
    for r in r_lo..=r_hi {
        let n = lead(r);
        let sign = (sign_pow(-1, r) * sign_pow(base.sign, c2(r)) * sign_pow(z.sign, r)) as i64;
        let u = base.pow(r - 1).mul(xz);
        if u.exp > 0 {
            let mut t = 0;
            while n + t * u.exp <= order {
                terms.push((n + t * u.exp, BigInt::from(2 * sign * sign_pow(u.sign, t) as i64)));
                t += 1;
            }
        } else if u.exp < 0 {
            let mut t = 1;
            while n - t * u.exp <= order {
                terms.push((n - t * u.exp, BigInt::from(-2 * sign * sign_pow(u.sign, t) as i64)));
                t += 1;
            }
        } else {
            debug_assert_eq!(u.sign, -1);
            terms.push((n, BigInt::from(sign)));
        }
    }
    Series::from_int_terms(terms, order).scale(&BigRational::new(1.into(), 2.into()))
}

/// Lazy factor `m(x,z;base)`.
pub fn appell_factor(x: SignedMonomial, z: SignedMonomial, base: SignedMonomial) -> Lazy<'static> {
    Box::new(move |o| appell_m(x, z, base, o))
}

/// The two pieces of `f_{n,n,1}(x,y;base) = h - theta / (Jbar_{0,n-1} Jbar_{0,n(n-1)})`.
#[derive(Clone, Debug)]
pub struct HeckeSplit {
    pub h: Series,
    pub theta: Series,
    pub divisor: Series,
}

impl HeckeSplit {
    /// `h - theta / divisor`, exact through the order the split was computed to.
    pub fn recombine(&self) -> Result<Series> {
        let quotient = self.theta.mul_series(&self.divisor.invert()?);
        Ok(self.h.sub_series(&quotient))
    }
}

/// Appell part `h_{n,n,1}`, theta part `theta_{n,n,1}` and the divisor `Jbar_{0,n-1} Jbar_{0,n(n-1)}`,
/// all in the base `Q`, each exact through `order`.
pub fn hecke_split(n: i64, x: SignedMonomial, y: SignedMonomial, base: SignedMonomial, order: i64) -> Result<HeckeSplit> {
    if n < 2 {
        return Err(Error::SplitUndefined { n, detail: "n must be at least 2".into() });
    }
    let qn = |e: i64| base.pow(e);
    let m1 = SignedMonomial::MINUS_ONE;
    let neg_y = y.neg();
    let nn1 = n * (n - 1);
    // q^{C(n,2)} x (-y)^{-n}
    let w = qn(c2(n)).mul(x).mul(neg_y.pow(-n));

    let h1: Vec<Lazy<'_>> = vec![
        theta_factor(x, qn(n)),
        appell_factor(qn(n - 1).neg().mul(y).div(x), m1, qn(n - 1)),
    ];
    let h2: Vec<Lazy<'_>> = vec![theta_factor(y, base), appell_factor(w, m1, qn(nn1))];
    let h = product_to(order, &h1)?.add_series(&product_to(order, &h2)?);

    for (arg, b) in [(w.neg(), qn(nn1))] {
        if theta_valuation(arg, b).is_none() {
            return Err(Error::SplitUndefined { n, detail: format!("j({arg};{b}) vanishes") });
        }
    }
    let mut theta = Series::zero(order);
    for d in 0..n {
        let t = (n - 1) * (d + 1);
        let den2 = qn(t).mul(y).div(x);
        if theta_valuation(den2, qn(nn1)).is_none() {
            return Err(Error::SplitUndefined { n, detail: format!("j({den2};{}) vanishes", qn(nn1)) });
        }
        let big_j = qn(nn1);
        let factors: Vec<Lazy<'_>> = vec![
            mono(qn((n - 1) * c2(d + 1))),
            theta_factor(qn(t).mul(y), qn(n)),
            theta_factor(qn(nn1 - t).neg().mul(x).div(y), qn(nn1)),
            Box::new(move |o| Ok(euler(big_j, o)?.pow(3))),
            theta_factor(qn(c2(n) + t).mul(neg_y.pow(1 - n)), qn(nn1)),
            theta_inverse_factor(w.neg(), qn(nn1)),
            theta_inverse_factor(den2, qn(nn1)),
        ];
        theta = theta.add_series(&product_to(order, &factors)?);
    }
    let div: Vec<Lazy<'_>> = vec![theta_factor(m1, qn(n - 1)), theta_factor(m1, qn(nn1))];
    // the divisor has valuation 0, so it must reach past order by the depth of theta
    let divisor = product_to(order - theta.lo().min(0), &div)?;
    Ok(HeckeSplit { h, theta, divisor })
}
