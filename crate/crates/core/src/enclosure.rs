//! Certified real enclosures with fixed-point dyadic endpoints.
//!
//! An [`Interval`] `[lo, hi]·2^-bits` always contains the real number it
//! stands for. Every operation rounds the lower endpoint down and the upper
//! endpoint up, and series truncations add an explicit tail bound, so the
//! containment survives every step.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::Rational;

/// Guard bits added on top of the requested precision.
pub const GUARD_BITS: u32 = 32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
    bits: u32,
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

fn pow2(k: u32) -> BigInt {
    BigInt::one() << k
}

fn shr_floor(a: &BigInt, k: u32) -> BigInt {
    // `>>` on BigInt rounds toward negative infinity
    a >> k
}

fn shr_ceil(a: &BigInt, k: u32) -> BigInt {
    -((-a) >> k)
}

impl Interval {
    pub fn point_rational(q: &Rational, bits: u32) -> Self {
        let scaled_num = q.numer() << bits;
        Interval {
            lo: floor_div(&scaled_num, q.denom()),
            hi: ceil_div(&scaled_num, q.denom()),
            bits,
        }
    }

    pub fn zero(bits: u32) -> Self {
        Interval {
            lo: BigInt::zero(),
            hi: BigInt::zero(),
            bits,
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn lo_rational(&self) -> Rational {
        Rational::new(self.lo.clone(), pow2(self.bits))
    }

    pub fn hi_rational(&self) -> Rational {
        Rational::new(self.hi.clone(), pow2(self.bits))
    }

    pub fn width_rational(&self) -> Rational {
        Rational::new(&self.hi - &self.lo, pow2(self.bits))
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo_rational().to_f64().unwrap_or(f64::NEG_INFINITY)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi_rational().to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn mid_f64(&self) -> f64 {
        Rational::new(&self.lo + &self.hi, pow2(self.bits + 1))
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    pub fn add(&self, other: &Interval) -> Interval {
        debug_assert_eq!(self.bits, other.bits);
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
            bits: self.bits,
        }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        debug_assert_eq!(self.bits, other.bits);
        Interval {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
            bits: self.bits,
        }
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
            bits: self.bits,
        }
    }

    pub fn mul_rational(&self, q: &Rational) -> Interval {
        let (a, b) = if q.is_negative() {
            (&self.hi, &self.lo)
        } else {
            (&self.lo, &self.hi)
        };
        Interval {
            lo: floor_div(&(a * q.numer()), q.denom()),
            hi: ceil_div(&(b * q.numer()), q.denom()),
            bits: self.bits,
        }
    }

    /// Hull of both intervals.
    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
            bits: self.bits,
        }
    }

    pub fn contains_rational(&self, q: &Rational) -> bool {
        *q >= self.lo_rational() && *q <= self.hi_rational()
    }

    /// `Less` if entirely below `other`, `Greater` if entirely above, `None`
    /// when the enclosures overlap.
    pub fn compare(&self, other: &Interval) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    pub fn compare_rational(&self, q: &Rational) -> Option<Ordering> {
        if self.hi_rational() < *q {
            Some(Ordering::Less)
        } else if self.lo_rational() > *q {
            Some(Ordering::Greater)
        } else {
            None
        }
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.compare(other).is_none()
    }

    /// Both endpoints clamped from above by the integer `cap`.
    pub fn min_int(&self, cap: i64) -> Interval {
        let c = BigInt::from(cap) << self.bits;
        Interval {
            lo: self.lo.clone().min(c.clone()),
            hi: self.hi.clone().min(c),
            bits: self.bits,
        }
    }

    /// Enclosure of `ln q` for rational `q > 0`.
    pub fn ln_rational(q: &Rational, bits: u32) -> Interval {
        assert!(q.is_positive(), "logarithm of a nonpositive number");
        if q < &Rational::one() {
            return Interval::ln_rational(&q.recip(), bits).neg();
        }
        // q = 2^k · r with r ∈ [1, 2)
        let mut k = q.numer().bits() as i64 - q.denom().bits() as i64;
        let mut r = scale_pow2(q, -k);
        if r >= Rational::from_integer(BigInt::from(2)) {
            r /= BigInt::from(2);
            k += 1;
        } else if r < Rational::one() {
            r *= BigInt::from(2);
            k -= 1;
        }
        let z = (&r - Rational::one()) / (&r + Rational::one());
        let log_r = atanh_series(&z, bits);
        let log_r = Interval {
            lo: &log_r.lo << 1,
            hi: &log_r.hi << 1,
            bits,
        };
        if k == 0 {
            return log_r;
        }
        let ln2 = ln2(bits);
        let k = Rational::from_integer(BigInt::from(k));
        ln2.mul_rational(&k).add(&log_r)
    }

    /// Enclosure of `exp(x)` for every `x` in the interval.
    pub fn exp(&self) -> Interval {
        Interval {
            lo: exp_bound(&self.lo, self.bits, false),
            hi: exp_bound(&self.hi, self.bits, true),
            bits: self.bits,
        }
    }

    /// Decimal string with `digits` fractional digits, rounded down for the
    /// lower endpoint and up for the upper one.
    pub fn lo_decimal(&self, digits: u32) -> String {
        decimal(&self.lo, self.bits, digits, false)
    }

    pub fn hi_decimal(&self, digits: u32) -> String {
        decimal(&self.hi, self.bits, digits, true)
    }
}

fn scale_pow2(q: &Rational, k: i64) -> Rational {
    if k >= 0 {
        q * Rational::from_integer(pow2(k as u32))
    } else {
        q / Rational::from_integer(pow2((-k) as u32))
    }
}

/// `atanh(z) = Σ z^{2j+1}/(2j+1)` for `0 ≤ z ≤ 1/3`.
fn atanh_series(z: &Rational, bits: u32) -> Interval {
    debug_assert!(!z.is_negative() && *z <= Rational::new(1.into(), 3.into()));
    if z.is_zero() {
        return Interval::zero(bits);
    }
    let one = pow2(bits);
    let zi = Interval::point_rational(z, bits);
    let z2_lo = shr_floor(&(&zi.lo * &zi.lo), bits);
    let z2_hi = shr_ceil(&(&zi.hi * &zi.hi), bits);
    let (mut pow_lo, mut pow_hi) = (zi.lo.clone(), zi.hi.clone());
    let (mut sum_lo, mut sum_hi) = (BigInt::zero(), BigInt::zero());
    let mut j: u64 = 0;
    loop {
        let d = BigInt::from(2 * j + 1);
        sum_lo += floor_div(&pow_lo, &d);
        sum_hi += ceil_div(&pow_hi, &d);
        pow_lo = shr_floor(&(&pow_lo * &z2_lo), bits);
        pow_hi = shr_ceil(&(&pow_hi * &z2_hi), bits);
        j += 1;
        // remaining tail ≤ z^{2j+1} / (1 - z²) ≤ 2 z^{2j+1}
        if pow_hi <= BigInt::one() || pow_hi < (&one >> (bits + 4)) {
            sum_hi += &pow_hi << 1;
            break;
        }
    }
    Interval {
        lo: sum_lo,
        hi: sum_hi,
        bits,
    }
}

thread_local! {
    static LN2_CACHE: RefCell<HashMap<u32, Interval>> = RefCell::new(HashMap::new());
}

fn ln2(bits: u32) -> Interval {
    LN2_CACHE.with(|cache| {
        cache
            .borrow_mut()
            .entry(bits)
            .or_insert_with(|| {
                let third = Rational::new(BigInt::one(), BigInt::from(3));
                let a = atanh_series(&third, bits);
                Interval {
                    lo: a.lo << 1,
                    hi: a.hi << 1,
                    bits,
                }
            })
            .clone()
    })
}

/// Fixed-point bound on `exp(m / 2^bits) · 2^bits`, rounded in the requested
/// direction.
fn exp_bound(m: &BigInt, bits: u32, upward: bool) -> BigInt {
    if m.is_negative() {
        // exp(x) = 1 / exp(-x); exp(-x) ≥ 1 so the division is safe
        let neg = -m;
        // beyond ~bits·ln2 the result is below one ulp
        let limit = BigInt::from(bits as u64 + 8) << bits;
        if neg > limit {
            return if upward { BigInt::one() } else { BigInt::zero() };
        }
        let inv = exp_bound(&neg, bits, !upward);
        let num = pow2(2 * bits);
        return if upward {
            ceil_div(&num, &inv)
        } else {
            floor_div(&num, &inv)
        };
    }
    // x = m / 2^bits ≥ 0; reduce to s = x / 2^k ≤ 1/2
    let k = (m.bits() as i64 - bits as i64 + 1).max(0) as u32;
    let work = bits + k + 16;
    // s in fixed point at `work` bits: m · 2^(work - bits - k), exact
    let s = m << (work - bits - k);
    let one = pow2(work);
    let mut term_lo = one.clone();
    let mut term_hi = one.clone();
    let mut sum_lo = BigInt::zero();
    let mut sum_hi = BigInt::zero();
    let mut j: u64 = 1;
    loop {
        sum_lo += &term_lo;
        sum_hi += &term_hi;
        let d = BigInt::from(j);
        term_lo = floor_div(&shr_floor(&(&term_lo * &s), work), &d);
        term_hi = ceil_div(&shr_ceil(&(&term_hi * &s), work), &d);
        j += 1;
        // tail ≤ term · 1/(1 - s/j) ≤ 2·term
        if term_hi <= BigInt::one() {
            sum_hi += &term_hi << 1;
            break;
        }
    }
    let mut v = if upward { sum_hi } else { sum_lo };
    for _ in 0..k {
        let sq = &v * &v;
        v = if upward {
            shr_ceil(&sq, work)
        } else {
            shr_floor(&sq, work)
        };
    }
    let drop = work - bits;
    if upward {
        shr_ceil(&v, drop)
    } else {
        shr_floor(&v, drop)
    }
}

fn decimal(m: &BigInt, bits: u32, digits: u32, upward: bool) -> String {
    let scaled = m * BigInt::from(10).pow(digits);
    let q = if upward {
        shr_ceil(&scaled, bits)
    } else {
        shr_floor(&scaled, bits)
    };
    let neg = q.sign() == Sign::Minus;
    let s = q.abs().to_string();
    let s = format!("{:0>width$}", s, width = digits as usize + 1);
    let (whole, frac) = s.split_at(s.len() - digits as usize);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{whole}")
    } else {
        format!("{sign}{whole}.{frac}")
    }
}

/// Natural logarithm of a strictly positive real, with its enclosure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LogValue(Interval);

impl LogValue {
    pub fn of_rational(q: &Rational, bits: u32) -> Self {
        LogValue(Interval::ln_rational(q, bits))
    }

    pub fn from_interval(i: Interval) -> Self {
        LogValue(i)
    }

    pub fn interval(&self) -> &Interval {
        &self.0
    }

    /// Approximate `ln` value.
    pub fn approx_log(&self) -> f64 {
        self.0.mid_f64()
    }

    /// Approximate represented value `exp(log)`.
    pub fn approx_value(&self) -> f64 {
        self.0.mid_f64().exp()
    }

    pub fn log_width(&self) -> Rational {
        self.0.width_rational()
    }

    /// Enclosure of the represented value itself (`exp` of the log).
    pub fn value_enclosure(&self) -> Interval {
        self.0.exp()
    }
}
