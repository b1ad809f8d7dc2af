//! Mock theta functions: q-hypergeometric definitions and Appell-function forms.

use std::fmt;
use std::str::FromStr;

use crate::appell::appell_factor;
use crate::cache::{memo, Key};
use crate::error::{Error, Result};
use crate::precision::{inverse_to, mono, product_to, Lazy};
use crate::series::{pochhammer, Series, SignedMonomial};
use crate::theta::{euler, theta_factor, theta_inverse_factor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MockName {
    Mu2,
    F3,
    Omega3,
    Psi3,
    Chi3,
}

impl MockName {
    pub const ALL: [MockName; 5] = [MockName::Mu2, MockName::F3, MockName::Omega3, MockName::Psi3, MockName::Chi3];

    pub fn as_str(self) -> &'static str {
        match self {
            MockName::Mu2 => "mu2",
            MockName::F3 => "f3",
            MockName::Omega3 => "omega3",
            MockName::Psi3 => "psi3",
            MockName::Chi3 => "chi3",
        }
    }
}

impl fmt::Display for MockName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MockName {
    type Err = ();
    fn from_str(s: &str) -> std::result::Result<Self, ()> {
        MockName::ALL.into_iter().find(|m| m.as_str() == s).ok_or(())
    }
}

const Q: SignedMonomial = SignedMonomial { sign: 1, exp: 1 };

fn q(e: i64) -> SignedMonomial {
    SignedMonomial::q(e)
}

/// `(x;base)_n` raised to `power`, as a factor (negative powers invert).
fn poch(x: SignedMonomial, n: u64, base: SignedMonomial, power: i32) -> Lazy<'static> {
    let f = move |o: i64| Ok(pochhammer(x, Some(n), base, o)?.pow(power.unsigned_abs()));
    if power >= 0 {
        Box::new(f)
    } else {
        Box::new(move |o| inverse_to(o, &(Box::new(f) as Lazy<'_>)))
    }
}

/// `sum_{n >= n0} q^{lead(n)} * prod(factors(n))` with `lead` increasing from the first term.
fn hypergeometric(
    order: i64,
    n0: u64,
    lead: impl Fn(i64) -> i64,
    factors: impl Fn(u64) -> Vec<Lazy<'static>>,
) -> Result<Series> {
    let mut acc = Series::zero(order);
    let mut n = n0;
    while lead(n as i64) <= order {
        let e = lead(n as i64);
        let term = product_to(order - e, &factors(n))?.shift(e);
        acc = acc.add_series(&term);
        n += 1;
    }
    Ok(acc)
}

fn mock_at_q(name: MockName, order: i64) -> Result<Series> {
    match name {
        // sum (-1)^n q^{n^2} (q;q^2)_n / (-q^2;q^2)_n^2
        MockName::Mu2 => hypergeometric(order, 0, |n| n * n, |n| {
            let sign = if n % 2 == 0 { 1 } else { -1 };
            vec![mono(SignedMonomial::new(sign, 0)), poch(Q, n, q(2), 1), poch(SignedMonomial::neg_q(2), n, q(2), -2)]
        }),
        // sum q^{n^2} / (-q;q)_n^2
        MockName::F3 => hypergeometric(order, 0, |n| n * n, |n| vec![poch(SignedMonomial::neg_q(1), n, Q, -2)]),
        // sum q^{2n(n+1)} / (q;q^2)_{n+1}^2
        MockName::Omega3 => hypergeometric(order, 0, |n| 2 * n * (n + 1), |n| vec![poch(Q, n + 1, q(2), -2)]),
        // sum_{n>=1} q^{n^2} / (q;q^2)_n
        MockName::Psi3 => hypergeometric(order, 1, |n| n * n, |n| vec![poch(Q, n, q(2), -1)]),
        // sum q^{n^2} (-q;q)_n / (-q^3;q^3)_n
        MockName::Chi3 => hypergeometric(order, 0, |n| n * n, |n| {
            vec![poch(SignedMonomial::neg_q(1), n, Q, 1), poch(SignedMonomial::neg_q(3), n, q(3), -1)]
        }),
    }
}

/// The q-hypergeometric series of `name`, evaluated at `base`, through `order`.
pub fn mock(name: MockName, base: SignedMonomial, order: i64) -> Result<Series> {
    if base.exp < 1 {
        return Err(Error::NonpositiveBaseExponent { exp: base.exp });
    }
    let inner = num_integer::Integer::div_ceil(&order, &base.exp);
    let plain = memo(Key::Mock(name.as_str()), inner, |o| mock_at_q(name, o))?;
    Ok(plain.compose_base(base)?.truncate(order))
}

fn jj(a: i64, b: i64) -> Lazy<'static> {
    theta_factor(q(a), q(b))
}

fn jj_inv(a: i64, b: i64) -> Lazy<'static> {
    theta_inverse_factor(q(a), q(b))
}

fn e_pow(a: i64, power: i32) -> Lazy<'static> {
    let f = move |o: i64| Ok(euler(q(a), o)?.pow(power.unsigned_abs()));
    if power >= 0 {
        Box::new(f)
    } else {
        Box::new(move |o| inverse_to(o, &(Box::new(f) as Lazy<'_>)))
    }
}

fn scaled(c: i64, factors: Vec<Lazy<'static>>, order: i64) -> Result<Series> {
    Ok(product_to(order, &factors)?.scale_int(c))
}

/// The Appell-function form of `name` at `q`, through `order`.
pub fn mock_appell(name: MockName, order: i64) -> Result<Series> {
    let m1 = SignedMonomial::MINUS_ONE;
    let nq = SignedMonomial::neg_q;
    match name {
        // 4 m(-q,-1;q^4) - J_{2,4}^4 / J_1^3
        MockName::Mu2 => {
            let a = scaled(4, vec![appell_factor(nq(1), m1, q(4))], order)?;
            let t = product_to(order, &[Box::new(|o| Ok(crate::theta::theta_j(q(2), q(4), o)?.pow(4))), e_pow(1, -3)])?;
            Ok(a.sub_series(&t))
        }
        // 4 m(-q,q;q^3) + J_{3,6}^2 / J_1
        MockName::F3 => {
            let a = scaled(4, vec![appell_factor(nq(1), q(1), q(3))], order)?;
            let t = product_to(order, &[jj(3, 6), jj(3, 6), e_pow(1, -1)])?;
            Ok(a.add_series(&t))
        }
        // -2 q^{-1} m(q,q^2;q^6) + J_6^3 / (J_2 J_{3,6})
        MockName::Omega3 => {
            let a = scaled(-2, vec![mono(q(-1)), appell_factor(q(1), q(2), q(6))], order)?;
            let t = product_to(order, &[e_pow(6, 3), e_pow(2, -1), jj_inv(3, 6)])?;
            Ok(a.add_series(&t))
        }
        // -m(q,-q;-q^3) + q J_12^3 / (J_4 J_{3,12})
        MockName::Psi3 => {
            let a = scaled(-1, vec![appell_factor(q(1), nq(1), nq(3))], order)?;
            let t = product_to(order, &[mono(q(1)), e_pow(12, 3), e_pow(4, -1), jj_inv(3, 12)])?;
            Ok(a.add_series(&t))
        }
        // m(-q,q;q^3) + J_{3,6}^2 / J_1
        MockName::Chi3 => {
            let a = product_to(order, &[appell_factor(nq(1), q(1), q(3))])?;
            let t = product_to(order, &[jj(3, 6), jj(3, 6), e_pow(1, -1)])?;
            Ok(a.add_series(&t))
        }
    }
}

/// The universal mock theta function
/// `g_3(x;Q) = x^{-1} (-1 + sum_{n>=0} Q^{n^2} / ((x;Q)_{n+1} (Q/x;Q)_n))`.
pub fn universal_g3(x: SignedMonomial, base: SignedMonomial, order: i64) -> Result<Series> {
    if base.exp < 1 {
        return Err(Error::NonpositiveBaseExponent { exp: base.exp });
    }
    if x.exp < 1 || x.exp >= base.exp {
        return Err(Error::NonUnitDenominator(format!("g3 needs 1 <= exp(x) < exp(base), got x={x}, base={base}")));
    }
    memo(Key::G3(x, base), order, |order| {
        let inner_order = order + x.exp;
        let k = base.exp;
        let qx = base.div(x);
        let sum = hypergeometric(inner_order, 0, |n| k * n * n, |n| {
            vec![
                mono(base.pow((n * n) as i64).div(SignedMonomial::q(k * (n * n) as i64))),
                poch(x, n + 1, base, -1),
                poch(qx, n, base, -1),
            ]
        })?;
        let shifted = sum.sub_series(&Series::one(inner_order)).shift(-x.exp);
        Ok(shifted.scale_int(x.sign as i64).truncate(order))
    })
}

/// Fifth-order mock theta functions, kept only as reference series for `g_3`.
pub mod fixtures {
    use super::*;

    /// `f_0(q) = sum q^{n^2} / (-q;q)_n`
    pub fn fifth_order_f0(order: i64) -> Result<Series> {
        hypergeometric(order, 0, |n| n * n, |n| vec![poch(SignedMonomial::neg_q(1), n, Q, -1)])
    }

    /// `f_1(q) = sum q^{n(n+1)} / (-q;q)_n`
    pub fn fifth_order_f1(order: i64) -> Result<Series> {
        hypergeometric(order, 0, |n| n * (n + 1), |n| vec![poch(SignedMonomial::neg_q(1), n, Q, -1)])
    }
}
