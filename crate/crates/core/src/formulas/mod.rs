//! Closed-form quantities and finite conditions, evaluated exactly where
//! they are integer or rational and to a chosen precision where they are
//! real.

mod bigreal;

pub use bigreal::{BigReal, DEFAULT_DIGITS, MIN_DIGITS};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Pow, Zero};

use crate::combinat::{balanced_split, choose2};
use crate::error::{invalid, Result};
use crate::params::Params;

pub type Rational = BigRational;

/// Edges of the balanced complete `(k-1)`-partite graph on `n` vertices,
/// i.e. `ex(n, K_k)`.
pub fn turan_number(n: u64, k: u64) -> Result<u64> {
    if k < 2 {
        return Err(invalid(format!("k = {k} must be at least 2")));
    }
    let n = n as usize;
    let inside: usize = balanced_split(n, (k - 1) as usize).into_iter().map(choose2).sum();
    Ok((choose2(n) - inside) as u64)
}

fn check_digits(digits: u32) -> Result<()> {
    if digits < MIN_DIGITS {
        return Err(invalid(format!("precision {digits} is below {MIN_DIGITS} digits")));
    }
    Ok(())
}

fn ln_int(v: u32, digits: u32) -> Result<BigReal> {
    BigReal::from_int(v, digits).ln()
}

/// `x_*(r,d) = log((a+1)/a) / log((a+1)^r / (a (a-d)^(r-1)))`, the limiting
/// share of `V_0` in product-optimal constructions.
pub fn x_star(params: Params, digits: u32) -> Result<BigReal> {
    params.validate()?;
    check_digits(digits)?;
    if params.r < 2 {
        return Err(invalid("x_* needs r >= 2"));
    }
    let Params { a, r, d } = params;
    let (ln_a1, ln_a, ln_low) = (ln_int(a + 1, digits)?, ln_int(a, digits)?, ln_int(a - d, digits)?);
    let l = ln_a1.sub(&ln_a);
    let m = ln_a.sub(&ln_low);
    let den = l.mul_int(i64::from(r)).add(&m.mul_int(i64::from(r - 1)));
    l.div(&den)
}

/// Residual `|x(r+1) (r - x(r)) - (r-1) x(r)|` of the recurrence linking
/// consecutive values of `x_*`, relative to `x(r)`.
pub fn x_star_recurrence_residual(params: Params, digits: u32) -> Result<BigReal> {
    let x = x_star(params, digits)?;
    let y = x_star(Params { r: params.r + 1, ..params }, digits)?;
    let r = BigReal::from_int(params.r, digits);
    let lhs = y.mul(&r.sub(&x));
    let rhs = x.mul_int(i64::from(params.r) - 1);
    lhs.sub(&rhs).abs().div(&x)
}

/// `a^((1-x)/(r-1)) (a+1)^((r-2+x)/(r-1))` with `x = x_*(r,1)`.
pub fn theorem_value(a: u32, r: u32, digits: u32) -> Result<BigReal> {
    if a < 2 || r < 2 {
        return Err(invalid("the product density needs a, r >= 2"));
    }
    let x = x_star(Params::new(a, r, 1)?, digits)?;
    let one = BigReal::from_int(1, digits);
    let rm1 = i64::from(r - 1);
    let ea = one.sub(&x).div_int(rm1);
    let eb = BigReal::from_int(r - 2, digits).add(&x).div_int(rm1);
    Ok(ln_int(a, digits)?.mul(&ea).add(&ln_int(a + 1, digits)?.mul(&eb)).exp())
}

/// Limit of `Π_{r,d}(a,n)^(1/C(n,2))`: `a ((a+1)/a)^((r-2+x)/(r-1))` with
/// `x = x_*(r,d)`. Equals [`theorem_value`] when `d = 1`.
pub fn product_density_limit(params: Params, digits: u32) -> Result<BigReal> {
    let x = x_star(params, digits)?;
    let Params { a, r, .. } = params;
    let e = BigReal::from_int(r - 2, digits).add(&x).div_int(i64::from(r - 1));
    let l = ln_int(a + 1, digits)?.sub(&ln_int(a, digits)?);
    Ok(ln_int(a, digits)?.add(&l.mul(&e)).exp())
}

/// `value^(1/C(n,2))`, or `None` when `n < 2`.
pub fn product_density(value: &BigUint, n: usize, digits: u32) -> Result<Option<BigReal>> {
    check_digits(digits)?;
    let pairs = choose2(n) as i64;
    if pairs == 0 {
        return Ok(None);
    }
    if value.is_zero() {
        return Ok(Some(BigReal::from_int(0, digits)));
    }
    Ok(Some(BigReal::from_int(value.clone(), digits).ln()?.div_int(pairs).exp()))
}

/// `a^(1/r) (a+1)^((r-1)/r)`.
pub fn nonjump_value(a: u32, r: u32, digits: u32) -> Result<BigReal> {
    check_digits(digits)?;
    if a < 1 || r < 1 {
        return Err(invalid("a and r must be at least 1"));
    }
    let rr = i64::from(r);
    let lhs = ln_int(a, digits)?.div_int(rr);
    let rhs = ln_int(a + 1, digits)?.mul_int(rr - 1).div_int(rr);
    Ok(lhs.add(&rhs).exp())
}

/// `a + 1 - (d+1)/((r-1)d + r)`: the limit of `Σ_{r,d}(a,n) / C(n,2)`.
pub fn sigma_asymptotic_coeff(params: Params) -> Result<Rational> {
    params.validate()?;
    let Params { a, r, d } = params;
    let num = BigInt::from(d + 1);
    let den = BigInt::from((r - 1) * d + r);
    Ok(Rational::from_integer(BigInt::from(a + 1)) - Rational::new(num, den))
}

/// `Σ_{i=1}^{s-1} floor(1 + k i / den)`.
fn fk_sum(s: u64, k: u64, den: u64) -> u128 {
    (1..s).map(|i| 1 + u128::from(k) * u128::from(i) / u128::from(den)).sum()
}

/// The smallest rational `m` with `Σ_{i=1}^{s-1} floor(1 + m i) > q`.
///
/// The left side is a nondecreasing, right-continuous step function whose
/// jumps sit at `k/i` with `i < s`; for each denominator the least
/// qualifying numerator is found by bisection. It is negative nowhere
/// relevant: for `m < 0` every term is at most zero.
pub fn fk_ex_sigma(s: u64, q: u64) -> Result<Rational> {
    if s < 2 {
        return Err(invalid("s must be at least 2"));
    }
    let mut best: Option<Rational> = None;
    for i in 1..s {
        // at m = q + 1 the sum is (s-1)(q+2) > q
        let (mut lo, mut hi) = (0u64, (q + 1) * i);
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if fk_sum(s, mid, i) > u128::from(q) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        let cand = Rational::new(BigInt::from(lo), BigInt::from(i));
        if best.as_ref().is_none_or(|b| cand < *b) {
            best = Some(cand);
        }
    }
    Ok(best.expect("s >= 2 gives a denominator"))
}

/// `Σ_{i=1}^{s-1} floor(1 + m i)` for rational `m >= 0`.
pub fn fk_step(s: u64, m: &Rational) -> u128 {
    let k: u64 = m.numer().try_into().expect("numerator fits u64");
    let den: u64 = m.denom().try_into().expect("denominator fits u64");
    fk_sum(s, k, den)
}

/// `a^(n-t) (a+1)^t`: the largest product of `n` nonnegative integers with
/// sum `a n + t`, for `0 <= t <= n`.
pub fn am_gm_bound(a: u64, n: u64, t: u64) -> Result<BigUint> {
    if t > n {
        return Err(invalid(format!("t = {t} exceeds n = {n}")));
    }
    Ok(Pow::pow(BigUint::from(a), n - t) * Pow::pow(BigUint::from(a + 1), t))
}

fn pow(b: u32, e: u32) -> BigUint {
    Pow::pow(BigUint::from(b), e)
}

/// `(a-d+i)^R <= (a+1)^(R-d+i-1) (a-d)^(d-i+1)` for every `i` in `1..=d`.
pub fn check_r_condition(a: u32, d: u32, big_r: u32) -> Result<bool> {
    if a < d + 1 {
        return Err(invalid(format!("need a >= d + 1, got a = {a}, d = {d}")));
    }
    if big_r < d + 1 {
        return Err(invalid(format!("need R >= d + 1, got R = {big_r}, d = {d}")));
    }
    Ok((1..=d).all(|i| pow(a - d + i, big_r) <= pow(a + 1, big_r - d + i - 1) * pow(a - d, d - i + 1)))
}

/// The least `R >= d + 1` passing [`check_r_condition`]. Each inequality
/// holds for all large `R` because `a - d + i < a + 1`.
pub fn min_r(a: u32, d: u32) -> Result<u32> {
    let mut big_r = d + 1;
    while !check_r_condition(a, d, big_r)? {
        big_r += 1;
    }
    Ok(big_r)
}

/// `(a+1)^r (a-d) >= a^(r+1)`.
pub fn check_ar_condition(a: u32, r: u32, d: u32) -> Result<bool> {
    Params::new(a, r, d)?;
    Ok(pow(a + 1, r) * BigUint::from(a - d) >= pow(a, r + 1))
}
