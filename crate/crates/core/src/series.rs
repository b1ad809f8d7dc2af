//! Truncated Laurent series in `q` with exact rational coefficients.
//!
//! A [`Series`] is authoritative for every exponent up to its `order`; nothing is
//! known above it. Coefficients are stored densely from the valuation upwards as
//! integer numerators over one common positive denominator.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `sign * q^exp` with `sign` in {+1, -1}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedMonomial {
    pub sign: i8,
    pub exp: i64,
}

impl SignedMonomial {
    pub const ONE: SignedMonomial = SignedMonomial { sign: 1, exp: 0 };
    pub const MINUS_ONE: SignedMonomial = SignedMonomial { sign: -1, exp: 0 };

    pub fn new(sign: i8, exp: i64) -> Self {
        assert!(sign == 1 || sign == -1, "sign must be +1 or -1");
        SignedMonomial { sign, exp }
    }

    /// `q^exp`
    pub fn q(exp: i64) -> Self {
        SignedMonomial { sign: 1, exp }
    }

    /// `-q^exp`
    pub fn neg_q(exp: i64) -> Self {
        SignedMonomial { sign: -1, exp }
    }

    pub fn neg(self) -> Self {
        SignedMonomial { sign: -self.sign, exp: self.exp }
    }

    pub fn mul(self, other: Self) -> Self {
        SignedMonomial { sign: self.sign * other.sign, exp: self.exp + other.exp }
    }

    pub fn inv(self) -> Self {
        SignedMonomial { sign: self.sign, exp: -self.exp }
    }

    pub fn div(self, other: Self) -> Self {
        self.mul(other.inv())
    }

    pub fn pow(self, n: i64) -> Self {
        SignedMonomial { sign: sign_pow(self.sign, n), exp: self.exp * n }
    }

    pub fn to_series(self, order: i64) -> Series {
        Series::from_int_terms([(self.exp, BigInt::from(self.sign))], order)
    }
}

impl fmt::Display for SignedMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign < 0 { "-" } else { "" };
        match self.exp {
            0 => write!(f, "{s}1"),
            1 => write!(f, "{s}q"),
            e if e < 0 => write!(f, "{s}q^({e})"),
            e => write!(f, "{s}q^{e}"),
        }
    }
}

/// `sign^n` for `sign` in {+1, -1}.
pub fn sign_pow(sign: i8, n: i64) -> i8 {
    if sign == 1 || n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Binomial coefficient `n choose 2` for any integer `n`.
pub fn c2(n: i64) -> i64 {
    n * (n - 1) / 2
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    lo: i64,
    order: i64,
    num: Vec<BigInt>,
    den: BigInt,
}

impl Series {
    pub fn zero(order: i64) -> Series {
        Series { lo: order + 1, order, num: Vec::new(), den: BigInt::one() }
    }

    pub fn one(order: i64) -> Series {
        Series::from_int_terms([(0, BigInt::one())], order)
    }

    pub fn constant(c: &BigRational, order: i64) -> Series {
        Series::monomial(c, 0, order)
    }

    pub fn monomial(c: &BigRational, exp: i64, order: i64) -> Series {
        Series::one(order - exp).shift(exp).scale(c)
    }

    /// Builds a series from sparse rational terms; terms above `order` are dropped.
    pub fn from_terms<I: IntoIterator<Item = (i64, BigRational)>>(terms: I, order: i64) -> Series {
        let terms: Vec<(i64, BigRational)> =
            terms.into_iter().filter(|(e, c)| *e <= order && !c.is_zero()).collect();
        let den = terms.iter().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let ints = terms.into_iter().map(|(e, c)| (e, c.numer() * (&den / c.denom())));
        let mut s = Series::from_int_terms(ints, order);
        s.den = den;
        s.normalized()
    }

    /// Builds an integer series from sparse terms; repeated exponents accumulate.
    pub fn from_int_terms<I: IntoIterator<Item = (i64, BigInt)>>(terms: I, order: i64) -> Series {
        let terms: Vec<(i64, BigInt)> = terms.into_iter().filter(|(e, _)| *e <= order).collect();
        let Some(lo) = terms.iter().map(|(e, _)| *e).min() else {
            return Series::zero(order);
        };
        let hi = terms.iter().map(|(e, _)| *e).max().unwrap();
        let mut num = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            num[(e - lo) as usize] += c;
        }
        Series::from_dense(lo, order, num, BigInt::one())
    }

    /// Dense numerators for exponents `lo, lo+1, ...` over the positive denominator `den`.
    pub(crate) fn from_dense(lo: i64, order: i64, num: Vec<BigInt>, den: BigInt) -> Series {
        debug_assert!(den.is_positive());
        Series { lo, order, num, den }.normalized()
    }

    fn normalized(mut self) -> Series {
        let keep = (self.order - self.lo + 1).max(0) as usize;
        self.num.truncate(keep);
        while self.num.last().is_some_and(Zero::is_zero) {
            self.num.pop();
        }
        let lead = self.num.iter().take_while(|c| c.is_zero()).count();
        if lead == self.num.len() {
            return Series::zero(self.order);
        }
        if lead > 0 {
            self.num.drain(..lead);
            self.lo += lead as i64;
        }
        if !self.den.is_one() {
            let mut g = self.den.clone();
            for c in &self.num {
                if g.is_one() {
                    break;
                }
                g = g.gcd(c);
            }
            if !g.is_one() {
                for c in &mut self.num {
                    *c /= &g;
                }
                self.den /= &g;
            }
        }
        self
    }

    /// Valuation when the series is nonzero, otherwise `order + 1`.
    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn valuation(&self) -> Option<i64> {
        (!self.num.is_empty()).then_some(self.lo)
    }

    /// True when every coefficient through `order` vanishes.
    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// Highest exponent carrying a nonzero coefficient.
    pub fn top(&self) -> Option<i64> {
        (!self.num.is_empty()).then(|| self.lo + self.num.len() as i64 - 1)
    }

    pub fn coefficient_at(&self, e: i64) -> Result<BigRational> {
        if e > self.order {
            return Err(Error::OrderExceeded { requested: e, order: self.order });
        }
        Ok(BigRational::new(self.numer_at(e), self.den.clone()))
    }

    fn numer_at(&self, e: i64) -> BigInt {
        if e < self.lo {
            return BigInt::zero();
        }
        self.num.get((e - self.lo) as usize).cloned().unwrap_or_default()
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> Vec<(i64, BigRational)> {
        self.num
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.lo + i as i64, BigRational::new(c.clone(), self.den.clone())))
            .collect()
    }

    /// First exponent `e <= upto` where the series differ, with `self[e] - other[e]`.
    pub fn first_discrepancy(&self, other: &Series, upto: i64) -> Result<Option<(i64, BigRational)>> {
        let common = self.order.min(other.order);
        if upto > common {
            return Err(Error::OrderExceeded { requested: upto, order: common });
        }
        let start = self.lo.min(other.lo);
        for e in start..=upto {
            let a = self.numer_at(e) * &other.den;
            let b = other.numer_at(e) * &self.den;
            if a != b {
                let delta = BigRational::new(a - b, &self.den * &other.den);
                return Ok(Some((e, delta)));
            }
        }
        Ok(None)
    }

    pub fn equal_up_to(&self, other: &Series, upto: i64) -> Result<bool> {
        Ok(self.first_discrepancy(other, upto)?.is_none())
    }

    /// Drops everything above `order` (never raises the order).
    pub fn truncate(&self, order: i64) -> Series {
        if order >= self.order {
            return self.clone();
        }
        Series { lo: self.lo, order, num: self.num.clone(), den: self.den.clone() }.normalized()
    }

    pub fn shift(&self, k: i64) -> Series {
        Series { lo: self.lo + k, order: self.order + k, num: self.num.clone(), den: self.den.clone() }
    }

    pub fn scale(&self, c: &BigRational) -> Series {
        if c.is_zero() {
            return Series::zero(self.order);
        }
        let (mut n, mut d) = (c.numer().clone(), c.denom().clone());
        if d.is_negative() {
            n = -n;
            d = -d;
        }
        let num = self.num.iter().map(|x| x * &n).collect();
        Series::from_dense(self.lo, self.order, num, &self.den * d)
    }

    pub fn scale_int(&self, c: i64) -> Series {
        self.scale(&BigRational::from_integer(c.into()))
    }

    pub fn add_series(&self, other: &Series) -> Series {
        self.combine(other, false)
    }

    pub fn sub_series(&self, other: &Series) -> Series {
        self.combine(other, true)
    }

    fn combine(&self, other: &Series, subtract: bool) -> Series {
        let order = self.order.min(other.order);
        let lo = self.lo.min(other.lo);
        if lo > order {
            return Series::zero(order);
        }
        let len = (order - lo + 1) as usize;
        let den = self.den.lcm(&other.den);
        let fa = &den / &self.den;
        let fb = &den / &other.den;
        let mut num = vec![BigInt::zero(); len];
        for (i, c) in self.num.iter().enumerate() {
            let idx = (self.lo - lo) as usize + i;
            if idx >= len {
                break;
            }
            num[idx] += c * &fa;
        }
        for (i, c) in other.num.iter().enumerate() {
            let idx = (other.lo - lo) as usize + i;
            if idx >= len {
                break;
            }
            if subtract {
                num[idx] -= c * &fb;
            } else {
                num[idx] += c * &fb;
            }
        }
        Series::from_dense(lo, order, num, den)
    }

    pub fn mul_series(&self, other: &Series) -> Series {
        let order = (self.order + other.lo).min(other.order + self.lo);
        if self.is_zero() || other.is_zero() {
            return Series::zero(order);
        }
        let lo = self.lo + other.lo;
        if lo > order {
            return Series::zero(order);
        }
        let len = (order - lo + 1) as usize;
        let num = convolve(&self.num, &other.num, len);
        Series::from_dense(lo, order, num, &self.den * &other.den)
    }

    /// `self^n`; `n = 0` gives the constant 1 at the same order.
    pub fn pow(&self, n: u32) -> Series {
        let mut acc: Option<Series> = None;
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul_series(&base),
                });
            }
            k >>= 1;
            if k > 0 {
                base = base.mul_series(&base);
            }
        }
        acc.unwrap_or_else(|| Series::one(self.order))
    }

    /// Multiplicative inverse: `q^v u` with `u(0) != 0` maps to `q^{-v} u^{-1}`.
    pub fn invert(&self) -> Result<Series> {
        if self.is_zero() {
            return Err(Error::ZeroLeadingCoefficient { order: self.order });
        }
        let v = self.lo;
        let k = (self.order - v) as usize;
        let n0 = self.num[0].clone();
        let d = if n0.abs().is_one() { invert_unit_int(&self.num, k, &n0) } else { None };
        let (num, den) = match d {
            Some(d) => (d.into_iter().map(|x| x * &self.den).collect(), BigInt::one()),
            None => invert_general(&self.num, k, &n0, &self.den),
        };
        Ok(Series::from_dense(-v, self.order - 2 * v, num, den))
    }

    /// Substitutes `q -> base` where `base = ±q^k`, `k >= 1`.
    pub fn compose_base(&self, base: SignedMonomial) -> Result<Series> {
        if base.exp <= 0 {
            return Err(Error::NonpositiveBaseExponent { exp: base.exp });
        }
        let k = base.exp;
        if self.is_zero() {
            return Ok(Series::zero(self.order * k));
        }
        let mut num = vec![BigInt::zero(); (self.num.len() - 1) * k as usize + 1];
        for (i, c) in self.num.iter().enumerate() {
            let e = self.lo + i as i64;
            num[i * k as usize] = if sign_pow(base.sign, e) < 0 { -c } else { c.clone() };
        }
        Ok(Series::from_dense(self.lo * k, self.order * k, num, self.den.clone()))
    }

    /// `self * (1 - sign q^d)` for `d > 0`, in place on the dense numerators.
    pub(crate) fn mul_binomial(&mut self, sign: i8, d: i64) {
        debug_assert!(d > 0);
        if self.is_zero() {
            return;
        }
        let cap = (self.order - self.lo + 1) as usize;
        let new_len = (self.num.len() + d as usize).min(cap);
        self.num.resize(new_len, BigInt::zero());
        let d = d as usize;
        for i in (d..new_len).rev() {
            let (head, tail) = self.num.split_at_mut(i);
            let src = &head[i - d];
            if !src.is_zero() {
                if sign > 0 {
                    tail[0] -= src;
                } else {
                    tail[0] += src;
                }
            }
        }
        while self.num.last().is_some_and(Zero::is_zero) {
            self.num.pop();
        }
    }
}

fn max_bits(v: &[BigInt]) -> u64 {
    v.iter().map(|c| c.bits()).max().unwrap_or(0)
}

fn convolve(a: &[BigInt], b: &[BigInt], len: usize) -> Vec<BigInt> {
    let span = a.len().min(b.len()).max(1) as u64;
    let budget = max_bits(a) + max_bits(b) + (64 - span.leading_zeros() as u64) + 1;
    if budget <= 126 {
        let a: Vec<i128> = a.iter().map(|c| c.to_i128().unwrap()).collect();
        let b: Vec<i128> = b.iter().map(|c| c.to_i128().unwrap()).collect();
        let mut out = vec![0i128; len];
        for (i, x) in a.iter().enumerate().take(len) {
            if *x == 0 {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(len - i) {
                out[i + j] += x * y;
            }
        }
        return out.into_iter().map(BigInt::from).collect();
    }
    let mut out = vec![BigInt::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// Inverse of an integer unit with constant term ±1, attempted in checked i128.
fn invert_unit_int(num: &[BigInt], k: usize, n0: &BigInt) -> Option<Vec<BigInt>> {
    let s: i128 = if n0.is_positive() { 1 } else { -1 };
    let n: Vec<i128> = num.iter().take(k + 1).map(|c| c.to_i128()).collect::<Option<_>>()?;
    let mut d = vec![0i128; k + 1];
    d[0] = s;
    for t in 1..=k {
        let mut acc: i128 = 0;
        for i in 1..n.len().min(t + 1) {
            if n[i] != 0 {
                acc = acc.checked_add(n[i].checked_mul(d[t - i])?)?;
            }
        }
        d[t] = acc.checked_mul(-s)?;
    }
    Some(d.into_iter().map(BigInt::from).collect())
}

/// Inverse of `N(q)/den` with arbitrary nonzero `N(0)`; returns numerators and denominator.
fn invert_general(num: &[BigInt], k: usize, n0: &BigInt, den: &BigInt) -> (Vec<BigInt>, BigInt) {
    // c_t = d_t / n0^{t+1} with d_t = -sum_{i>=1} N_i d_{t-i} n0^{i-1}
    let mut p = vec![BigInt::one()];
    for i in 1..=k + 1 {
        let next = &p[i - 1] * n0;
        p.push(next);
    }
    let mut d = vec![BigInt::zero(); k + 1];
    d[0] = BigInt::one();
    for t in 1..=k {
        let mut acc = BigInt::zero();
        for i in 1..num.len().min(t + 1) {
            if !num[i].is_zero() {
                acc += &num[i] * &d[t - i] * &p[i - 1];
            }
        }
        d[t] = -acc;
    }
    let mut out: Vec<BigInt> = d.iter().enumerate().map(|(t, x)| x * &p[k - t] * den).collect();
    let mut out_den = p[k + 1].clone();
    if out_den.is_negative() {
        out_den = -out_den;
        for c in &mut out {
            *c = -&*c;
        }
    }
    (out, out_den)
}

impl Add for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        self.add_series(rhs)
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        self.sub_series(rhs)
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        self.mul_series(rhs)
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series { lo: self.lo, order: self.order, num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = mag.is_one();
            if !unit || e == 0 {
                write!(f, "{mag}")?;
            }
            if e != 0 {
                if !unit {
                    write!(f, "*")?;
                }
                match e {
                    1 => write!(f, "q")?,
                    e if e < 0 => write!(f, "q^({e})")?,
                    e => write!(f, "q^{e}")?,
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order + 1)
    }
}

/// `(x; base)_n`, or the infinite product when `n` is `None`, exact through `order`.
pub fn pochhammer(x: SignedMonomial, n: Option<u64>, base: SignedMonomial, order: i64) -> Result<Series> {
    if base.exp < 1 {
        return Err(Error::NonpositiveBaseExponent { exp: base.exp });
    }
    if n.is_none() && x.exp <= 0 {
        return Err(Error::DivergentProduct { exp: x.exp });
    }
    let mut factors = Vec::new();
    let mut i = 0u64;
    while n.map_or(true, |n| i < n) {
        let t = base.pow(i as i64).mul(x);
        if n.is_none() && t.exp > order {
            break;
        }
        if t.exp == 0 && t.sign == 1 {
            return Ok(Series::zero(order));
        }
        factors.push(t);
        i += 1;
    }
    let (positive, rest): (Vec<_>, Vec<_>) = factors.into_iter().partition(|t| t.exp > 0);
    let ext = order - rest.iter().map(|m| m.exp.min(0)).sum::<i64>();
    let mut acc = Series::one(ext);
    for t in positive.iter().filter(|t| t.exp <= ext) {
        acc.mul_binomial(t.sign, t.exp);
    }
    for t in rest {
        let factor = Series::from_int_terms([(0, BigInt::one()), (t.exp, BigInt::from(-t.sign))], ext);
        acc = acc.mul_series(&factor);
    }
    Ok(acc.truncate(order))
}
