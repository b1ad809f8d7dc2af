//! Admissible-level string functions of `A_1^(1)` in the integer-exponent
//! normalization `𝒞 = q^{-s_λ} C`, and the checks built on them.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cache::{memo, Key};
use crate::error::{Error, Result};
use crate::hecke::{hecke_f, HeckeSpec};
use crate::precision::{inverse_to, product_to, Lazy};
use crate::series::{c2, sign_pow, Series, SignedMonomial as M};
use crate::theta::{euler, theta_j};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `(p, p')` admissible pair with quantum number `m` and spin `ell`; level `N = p'/p - 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StringParams {
    pub p: i64,
    pub pprime: i64,
    pub m: i64,
    pub ell: i64,
}

impl StringParams {
    pub fn new(p: i64, pprime: i64, m: i64, ell: i64) -> Result<Self> {
        let bad = |why: &str| Err(Error::InvalidStringParams(format!("(p,p',m,l)=({p},{pprime},{m},{ell}): {why}")));
        if p < 1 || pprime < 2 {
            return bad("need p >= 1 and p' >= 2");
        }
        if p.gcd(&pprime) != 1 {
            return bad("p and p' are not coprime");
        }
        if pprime <= 2 * p {
            return bad("level p'/p - 2 is not positive");
        }
        if !(0..=pprime - 2).contains(&ell) {
            return bad("spin outside 0..=p'-2");
        }
        if (m - ell).rem_euclid(2) != 0 {
            return bad("m and l have different parity");
        }
        Ok(StringParams { p, pprime, m, ell })
    }

    pub fn level(&self) -> BigRational {
        rat(self.pprime, self.p) - rat(2, 1)
    }

    /// `s_λ = -1/8 + (ℓ+1)^2/(4(N+2)) - m^2/(4N)`.
    pub fn s_lambda(&self) -> BigRational {
        let (p, pp, m, l) = (self.p, self.pprime, self.m, self.ell);
        rat(-1, 8) + rat(p * (l + 1) * (l + 1), 4 * pp) - rat(p * m * m, 4 * (pp - 2 * p))
    }

    fn with_m(&self, m: i64) -> Result<Self> {
        StringParams::new(self.p, self.pprime, m, self.ell)
    }
}

/// A series `q^offset * body` with a rational offset.
#[derive(Clone, Debug, PartialEq)]
pub struct OffsetSeries {
    pub offset: BigRational,
    pub body: Series,
}

impl OffsetSeries {
    pub fn new(offset: BigRational, body: Series) -> Self {
        OffsetSeries { offset, body }
    }

    pub fn mul(&self, other: &OffsetSeries) -> OffsetSeries {
        OffsetSeries::new(&self.offset + &other.offset, self.body.mul_series(&other.body))
    }

    /// Multiplies by `q^extra`.
    pub fn shifted(&self, extra: &BigRational) -> OffsetSeries {
        OffsetSeries::new(&self.offset + extra, self.body.clone())
    }

    /// The plain series, provided the offset is an integer.
    pub fn into_integral(self) -> Result<Series> {
        if !self.offset.is_integer() {
            return Err(Error::OffsetMismatch(self.offset.to_string()));
        }
        let k: i64 = self.offset.to_integer().try_into().map_err(|_| Error::OffsetMismatch(self.offset.to_string()))?;
        Ok(self.body.shift(k))
    }
}

fn euler_power(k: i64, e: i32, order: i64) -> Result<Series> {
    let f: Lazy<'_> = Box::new(move |o| Ok(euler(M::q(k), o)?.pow(e.unsigned_abs())));
    if e >= 0 {
        f(order)
    } else {
        inverse_to(order, &f)
    }
}

/// `η(q^k)^e = q^{ke/24} (q^k;q^k)_∞^e`.
pub fn eta_power(k: i64, e: i32, order: i64) -> Result<OffsetSeries> {
    Ok(OffsetSeries::new(rat(k * e as i64, 24), euler_power(k, e, order)?))
}

/// `(q)_∞^3 𝒞`, i.e. the difference of the two Hecke-type double sums.
pub fn string_numerator(params: &StringParams, order: i64) -> Result<Series> {
    let StringParams { p, pprime: pp, m, ell: l } = *params;
    let spec = |x: i64, y: i64| HeckeSpec::new(1, pp, 2 * p * pp, M::q(x), M::neg_q(y), M::q(1));
    let a = hecke_f(&spec(1 + (m + l) / 2, p * (pp + l + 1)), order)?;
    let b = hecke_f(&spec((m - l) / 2, p * (pp - l - 1)), order)?;
    Ok(a.sub_series(&b))
}

fn check_integral(s: &Series) -> Result<()> {
    if s.is_integral() {
        return Ok(());
    }
    let (e, c) = s.terms().into_iter().find(|(_, c)| !c.is_integer()).expect("some term is fractional");
    Err(Error::NonIntegralCoefficient { exp: e, value: c.to_string() })
}

/// `𝒞^{(p,p')}_{m,ℓ}` through `order`; the result is checked to lie in `Z[[q]]`.
pub fn string_c(params: &StringParams, order: i64) -> Result<Series> {
    let key = Key::StringC(params.p, params.pprime, params.m, params.ell);
    memo(key, order, |order| {
        let inv3: Lazy<'_> = Box::new(|o| euler_power(1, -3, o));
        let num: Lazy<'_> = Box::new(|o| string_numerator(params, o));
        let c = product_to(order, &[num, inv3])?;
        check_integral(&c)?;
        if let Some(v) = c.valuation().filter(|v| *v < 0) {
            return Err(Error::PolarPart { m: params.m, valuation: v });
        }
        Ok(c)
    })
}

/// Integral level `N`: `𝒞 = f_{1,1+N,1}(q^{1+(m+ℓ)/2}, q^{1-(m-ℓ)/2}; q) / (q)_∞^3`.
pub fn string_c_integral(n: i64, m: i64, ell: i64, order: i64) -> Result<Series> {
    StringParams::new(1, n + 2, m, ell)?;
    let spec = HeckeSpec::new(1, 1 + n, 1, M::q(1 + (m + ell) / 2), M::q(1 - (m - ell) / 2), M::q(1));
    let num: Lazy<'_> = Box::new(move |o| hecke_f(&spec, o));
    let inv3: Lazy<'_> = Box::new(|o| euler_power(1, -3, o));
    product_to(order, &[num, inv3])
}

/// The four closed forms `C^1_{0,0}`, `C^2_{1,1}`, `C^3_{1,1}`, `C^4_{2,0}` as eta quotients,
/// each moved to the `𝒞` normalization with its offset cancellation checked.
pub fn kac_peterson_forms(order: i64) -> Result<Vec<(StringParams, Series)>> {
    let pad = order + 2;
    let forms: Vec<(StringParams, OffsetSeries)> = vec![
        (StringParams::new(1, 3, 0, 0)?, eta_power(1, -1, pad)?),
        (StringParams::new(1, 4, 1, 1)?, eta_power(1, -2, pad)?.mul(&eta_power(2, 1, pad)?)),
        (
            StringParams::new(1, 5, 1, 1)?,
            eta_power(1, -2, pad)?.mul(&OffsetSeries::new(rat(3, 40), theta_j(M::q(6), M::q(15), pad)?)),
        ),
        (
            StringParams::new(1, 6, 2, 0)?,
            eta_power(1, -2, pad)?.mul(&eta_power(6, -1, pad)?).mul(&eta_power(12, 2, pad)?),
        ),
    ];
    forms
        .into_iter()
        .map(|(params, c)| {
            let series = c.shifted(&-params.s_lambda()).into_integral()?;
            Ok((params, series.truncate(order)))
        })
        .collect()
}

fn validate_euler(p: i64, pprime: i64, ell: i64, eta: i64) -> Result<()> {
    StringParams::new(p, pprime, ell, ell)?;
    if !(0..pprime).contains(&eta) || (ell + eta) % 2 != 0 {
        return Err(Error::InvalidStringParams(format!("eta={eta} must lie in 0..p' with l+eta even")));
    }
    Ok(())
}

/// `sum_L (-1)^L q^{C(L,2)} 𝒞_{2L+η,ℓ}` through `order`; the expected value is `δ_{ℓ,η}`.
///
/// Every summand lies in `Z[[q]]`, so only `L` with `C(L,2) <= order` contribute.
pub fn gen_euler_check(p: i64, pprime: i64, ell: i64, eta: i64, order: i64) -> Result<Series> {
    validate_euler(p, pprime, ell, eta)?;
    let mut acc = Series::zero(order);
    let mut l = 0i64;
    while c2(l) <= order {
        l += 1;
    }
    for big_l in (1 - l)..l {
        let e = c2(big_l);
        if e > order {
            continue;
        }
        let params = StringParams::new(p, pprime, 2 * big_l + eta, ell)?;
        let c = string_c(&params, order - e)?.shift(e).scale_int(sign_pow(-1, big_l) as i64);
        acc = acc.add_series(&c);
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

/// LHS minus RHS of the quasi-periodic relation at level `(p, 2p+j)`, divided by `q^{s_λ}`
/// of the unshifted string function so that every exponent is integral.
///
/// Even: `m = 2jt+2s`, `ℓ = 2r`. Odd: `m = 2jt+2s+1`, `ℓ = 2r+1`.
pub fn quasi_period_delta(parity: Parity, p: i64, j: i64, t: i64, s: i64, r: i64, order: i64) -> Result<Series> {
    if j < 1 || t < 0 {
        return Err(Error::InvalidStringParams(format!("need j >= 1 and t >= 0, got j={j}, t={t}")));
    }
    let pp = 2 * p + j;
    let d = match parity {
        Parity::Even => 0,
        Parity::Odd => 1,
    };
    let base_params = StringParams::new(p, pp, 2 * s + d, 2 * r + d)?;
    let shifted = base_params.with_m(2 * j * t + 2 * s + d)?;
    let s0 = base_params.s_lambda();

    // prefactor of the theta-weighted sum as printed
    let rhs_offset = match parity {
        Parity::Even => rat(-1, 8) + rat(p * (2 * r + 1) * (2 * r + 1), 4 * pp) + rat(c2(p) - p * (r - s), 1) - rat(p * s * s, j),
        Parity::Odd => {
            rat(-1, 8) + rat(p * (2 * r + 2) * (2 * r + 2), 4 * pp) + rat(c2(p + 1) - p * (r + 1 - s), 1)
                - rat(p * (2 * s + 1) * (2 * s + 1), 4 * j)
        }
    };
    let integral = |x: BigRational| -> Result<i64> {
        if !x.is_integer() {
            return Err(Error::OffsetMismatch(x.to_string()));
        }
        x.to_integer().try_into().map_err(|_| Error::OffsetMismatch(x.to_string()))
    };
    let e_lhs = integral(shifted.s_lambda() - &s0)?;
    let e_rhs = integral(rhs_offset - &s0)?;

    let lhs = string_numerator(&shifted, order - e_lhs)?.shift(e_lhs).sub_series(&string_numerator(&base_params, order)?);

    let big_q = M::q(2 * p * pp);
    let rr = 2 * r + 1 + d;
    let inner_order = order - e_rhs;
    let mut sum = Series::zero(inner_order);
    let mut add = |coef: i8, e: i64, x: M| -> Result<()> {
        let th = theta_j(x, big_q, inner_order - e)?.shift(e).scale_int(coef as i64);
        sum = sum.add_series(&th);
        Ok(())
    };
    for i in 1..=t {
        let lead = -2 * p * j * c2(i) - p * (2 * s + d) * i;
        for mm in 1..p {
            let sign = sign_pow(-1, mm);
            let w = lead + c2(mm + 1) + mm * (r - p);
            for (coef, e) in [(sign, w + mm * (j * i + s - j + d)), (-sign, w - mm * (j * i + s))] {
                add(coef, e, M::neg_q(mm * pp + p * rr))?;
                add(-coef, e + mm * pp - mm * rr, M::neg_q(-mm * pp + p * rr))?;
            }
        }
    }
    let rhs = sum.shift(e_rhs).scale_int(sign_pow(-1, p) as i64);
    Ok(lhs.sub_series(&rhs))
}

type Laurent = BTreeMap<i64, BigInt>;

/// Series in `q` whose coefficients are Laurent polynomials; key `a` stands for `w^{-a}`.
type QW = Vec<Laurent>;

fn lp_add(into: &mut Laurent, a: i64, c: BigInt) {
    let slot = into.entry(a).or_insert_with(BigInt::zero);
    *slot += c;
    if slot.is_zero() {
        into.remove(&a);
    }
}

fn lp_mul(x: &Laurent, y: &Laurent, into: &mut Laurent) {
    for (a, c) in x {
        for (b, d) in y {
            lp_add(into, a + b, c * d);
        }
    }
}

/// Exact quotient of an antisymmetric Laurent polynomial by `w^{-1} - w`.
fn lp_div_weyl(x: &Laurent) -> Result<Laurent> {
    // coefficient of w^{-a} in Q (w^{-1} - w) is Q_{a-1} - Q_{a+1}
    let mut quotient = Laurent::new();
    let (Some(&lo), Some(&hi)) = (x.keys().next(), x.keys().next_back()) else {
        return Ok(quotient);
    };
    let mut a = hi;
    while a >= lo {
        let next = quotient.get(&(a + 1)).cloned().unwrap_or_default();
        let c = x.get(&a).cloned().unwrap_or_default() + next;
        if !c.is_zero() {
            quotient.insert(a - 1, c);
        }
        a -= 1;
    }
    let mut check = Laurent::new();
    let weyl: Laurent = [(1, BigInt::one()), (-1, -BigInt::one())].into_iter().collect();
    lp_mul(&quotient, &weyl, &mut check);
    if &check != x {
        return Err(Error::Eval("character numerator is not divisible by the Weyl denominator".into()));
    }
    Ok(quotient)
}

/// String functions read off the Weyl–Kac character ratio, for each quantum number in `window`.
///
/// Works q-adically with Laurent-polynomial coefficients in `w = z^{1/2}`: after
/// dividing both theta sums by `w^{-1} - w`, the denominator is a unit `1 + O(q)`.
pub fn weyl_kac_oracle(p: i64, pprime: i64, ell: i64, window: &[i64], order: i64) -> Result<BTreeMap<i64, Series>> {
    StringParams::new(p, pprime, ell, ell)?;
    if window.is_empty() || window.iter().any(|m| (m - ell).rem_euclid(2) != 0) {
        return Err(Error::WindowTooSmall);
    }
    let n = order.max(0) as usize;
    let l1 = ell + 1;

    // numerator: sum over a = ±(ℓ+1) mod 2p' of ±q^{p(a^2-(ℓ+1)^2)/(4p')} w^{-a}
    let mut num: QW = vec![Laurent::new(); n + 1];
    let reach = (((l1 * l1 + 4 * pprime * order / p) as f64).sqrt() as i64) + 2 * pprime;
    for a in -reach..=reach {
        for (residue, sign) in [(l1, 1), (-l1, -1)] {
            if (a - residue).rem_euclid(2 * pprime) == 0 {
                let e = p * (a * a - l1 * l1);
                debug_assert_eq!(e % (4 * pprime), 0);
                let e = e / (4 * pprime);
                if (0..=order).contains(&e) {
                    lp_add(&mut num[e as usize], a, BigInt::from(sign));
                }
            }
        }
    }
    // denominator: sum over odd a of ε_a q^{(a^2-1)/8} w^{-a}, ε = +1 for a ≡ 1 (mod 4)
    let mut den: QW = vec![Laurent::new(); n + 1];
    let reach = ((8 * order + 1) as f64).sqrt() as i64 + 4;
    for a in (-reach..=reach).filter(|a| a.rem_euclid(2) == 1) {
        let e = (a * a - 1) / 8;
        if e <= order {
            let sign = if a.rem_euclid(4) == 1 { 1 } else { -1 };
            lp_add(&mut den[e as usize], a, BigInt::from(sign));
        }
    }
    let num: QW = num.iter().map(lp_div_weyl).collect::<Result<_>>()?;
    let unit: QW = den.iter().map(lp_div_weyl).collect::<Result<_>>()?;
    if unit[0] != [(0, BigInt::one())].into_iter().collect::<Laurent>() {
        return Err(Error::NonUnitDenominator("Weyl denominator quotient is not 1 + O(q)".into()));
    }
    let mut inv: QW = vec![Laurent::new(); n + 1];
    inv[0].insert(0, BigInt::one());
    for k in 1..=n {
        let mut acc = Laurent::new();
        for i in 1..=k {
            lp_mul(&unit[i], &inv[k - i], &mut acc);
        }
        inv[k] = acc.into_iter().map(|(a, c)| (a, -c)).collect();
    }

    let mut out = BTreeMap::new();
    for &m in window {
        let params = StringParams::new(p, pprime, m, ell)?;
        let mut terms = Vec::new();
        for k in 0..=n {
            let mut c = BigInt::zero();
            for i in 0..=k {
                for (a, x) in &num[i] {
                    if let Some(y) = inv[k - i].get(&(m - a)) {
                        c += x * y;
                    }
                }
            }
            if !c.is_zero() {
                terms.push((k as i64, c));
            }
        }
        // χ = q^{p(ℓ+1)^2/(4p') - 1/8} Ñ/D̃ and the w^{-m} coefficient of χ is C_m q^{m^2/(4N)}
        let prefactor = rat(p * l1 * l1, 4 * pprime) - rat(1, 8);
        let m_term = if params.level().is_zero() { rat(0, 1) } else { rat(p * m * m, 4 * (pprime - 2 * p)) };
        let offset = prefactor - m_term - params.s_lambda();
        let body = Series::from_int_terms(terms, order);
        out.insert(m, OffsetSeries::new(offset, body).into_integral()?);
    }
    Ok(out)
}
