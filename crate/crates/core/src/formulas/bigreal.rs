//! Binary fixed-point reals over `BigInt`, enough for logarithms,
//! exponentials and real powers at a few hundred digits.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

use crate::error::{invalid, Result};

/// Decimal digits used when no precision is requested.
pub const DEFAULT_DIGITS: u32 = 50;
/// Published results are never produced below this.
pub const MIN_DIGITS: u32 = 30;

const GUARD_BITS: u32 = 64;

/// `mant / 2^bits`. `digits` is the requested decimal precision; `bits`
/// includes guard bits on top of it.
#[derive(Clone)]
pub struct BigReal {
    mant: BigInt,
    bits: u32,
    digits: u32,
}

fn bits_for(digits: u32) -> u32 {
    // log2(10) < 3.3220
    (digits * 33220).div_ceil(10000) + GUARD_BITS
}

impl BigReal {
    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn from_int(v: impl Into<BigInt>, digits: u32) -> Self {
        let bits = bits_for(digits);
        BigReal { mant: v.into() << bits, bits, digits }
    }

    /// `num / den` rounded to the working precision.
    pub fn from_ratio(num: impl Into<BigInt>, den: impl Into<BigInt>, digits: u32) -> Result<Self> {
        let (num, den) = (num.into(), den.into());
        if den.is_zero() {
            return Err(invalid("division by zero"));
        }
        let bits = bits_for(digits);
        Ok(BigReal { mant: div_round(num << bits, &den), bits, digits })
    }

    fn with_mant(&self, mant: BigInt) -> Self {
        BigReal { mant, bits: self.bits, digits: self.digits }
    }

    fn check_same(&self, other: &Self) {
        assert_eq!(self.bits, other.bits, "mixed precisions");
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_same(other);
        self.with_mant(&self.mant + &other.mant)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.check_same(other);
        self.with_mant(&self.mant - &other.mant)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_same(other);
        self.with_mant(shr_round(&self.mant * &other.mant, self.bits))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_same(other);
        if other.mant.is_zero() {
            return Err(invalid("division by zero"));
        }
        Ok(self.with_mant(div_round(&self.mant << self.bits, &other.mant)))
    }

    pub fn mul_int(&self, k: i64) -> Self {
        self.with_mant(&self.mant * k)
    }

    pub fn div_int(&self, k: i64) -> Self {
        self.with_mant(div_round(self.mant.clone(), &BigInt::from(k)))
    }

    pub fn abs(&self) -> Self {
        self.with_mant(self.mant.abs())
    }

    fn one(&self) -> Self {
        self.with_mant(BigInt::one() << self.bits)
    }

    /// `atanh(z)` for `|z| <= 1/3`.
    fn atanh_small(&self) -> Self {
        let z2 = self.mul(self);
        let mut term = self.clone();
        let mut sum = self.clone();
        let mut k = 1i64;
        loop {
            term = term.mul(&z2);
            k += 2;
            let t = term.div_int(k);
            if t.mant.is_zero() {
                return sum;
            }
            sum = sum.add(&t);
        }
    }

    fn ln2(&self) -> Self {
        BigReal::from_ratio(1, 3, self.digits).expect("nonzero").atanh_small().mul_int(2)
    }

    /// Natural logarithm; the argument must be positive.
    pub fn ln(&self) -> Result<Self> {
        if !self.is_positive() {
            return Err(invalid("logarithm of a non-positive number"));
        }
        // x = y * 2^k with y in [1, 2)
        let k = self.mant.bits() as i64 - 1 - i64::from(self.bits);
        let y = if k >= 0 { self.with_mant(&self.mant >> k as usize) } else { self.with_mant(&self.mant << (-k) as usize) };
        let one = self.one();
        let z = y.sub(&one).div(&y.add(&one))?;
        Ok(z.atanh_small().mul_int(2).add(&self.ln2().mul_int(k)))
    }

    pub fn exp(&self) -> Self {
        let ln2 = self.ln2();
        let k = self.div(&ln2).expect("ln 2 is nonzero").round_to_int();
        let k_i = k.to_i64().expect("exponent fits in i64");
        let r = self.sub(&ln2.mul_int(k_i));
        const HALVINGS: u32 = 16;
        let small = r.with_mant(shr_round(r.mant.clone(), HALVINGS));
        let mut term = self.one();
        let mut sum = self.one();
        let mut i = 1i64;
        loop {
            term = term.mul(&small).div_int(i);
            if term.mant.is_zero() {
                break;
            }
            sum = sum.add(&term);
            i += 1;
        }
        for _ in 0..HALVINGS {
            sum = sum.mul(&sum);
        }
        if k_i >= 0 {
            sum.with_mant(sum.mant.clone() << k_i as usize)
        } else {
            sum.with_mant(shr_round(sum.mant.clone(), (-k_i) as u32))
        }
    }

    /// `self^y` for positive `self`.
    pub fn powf(&self, y: &Self) -> Result<Self> {
        Ok(self.ln()?.mul(y).exp())
    }

    pub fn round_to_int(&self) -> BigInt {
        shr_round(self.mant.clone(), self.bits)
    }

    pub fn to_f64(&self) -> f64 {
        let shift = self.mant.bits().saturating_sub(62);
        let top = (&self.mant >> shift).to_f64().expect("fits");
        top * 2f64.powi(shift as i32 - self.bits as i32)
    }

    /// Fixed-point decimal with `places` digits after the point, rounded to
    /// nearest.
    pub fn to_decimal(&self, places: u32) -> String {
        let scaled = shr_round(&self.mant * BigInt::from(10u32).pow(places), self.bits);
        let neg = scaled.sign() == Sign::Minus;
        let digits = scaled.abs().to_string();
        let p = places as usize;
        let padded = if digits.len() <= p { format!("{}{digits}", "0".repeat(p + 1 - digits.len())) } else { digits };
        let (int, frac) = padded.split_at(padded.len() - p);
        let sign = if neg { "-" } else { "" };
        if p == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }

    /// Fixed-point decimal rounded to `sig` significant digits.
    pub fn to_significant(&self, sig: u32) -> String {
        if self.mant.is_zero() {
            return "0".into();
        }
        let probe = self.abs().to_decimal(sig + 20);
        let (int, frac) = probe.split_once('.').expect("has a point");
        let places = if int != "0" {
            sig.saturating_sub(int.len() as u32)
        } else {
            frac.bytes().take_while(|&b| b == b'0').count() as u32 + sig
        };
        self.to_decimal(places)
    }
}

fn shr_round(v: BigInt, k: u32) -> BigInt {
    if k == 0 {
        return v;
    }
    let half = BigInt::one() << (k - 1);
    (v + half) >> k as usize
}

fn div_round(num: BigInt, den: &BigInt) -> BigInt {
    let (num, den) = if den.is_negative() { (-num, -den) } else { (num, den.clone()) };
    let (q, r) = num.div_mod_floor(&den);
    if r * 2 >= den {
        q + 1
    } else {
        q
    }
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for BigReal {}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BigReal {
    fn cmp(&self, other: &Self) -> Ordering {
        let b = self.bits.max(other.bits);
        (&self.mant << (b - self.bits)).cmp(&(&other.mant << (b - other.bits)))
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal(self.digits))
    }
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigReal({})", self.to_decimal(20))
    }
}
