//! Deterministic integer factorization: trial division to 10^6, then
//! Brent's variant of Pollard rho with fixed seeds, with Miller-Rabin
//! certification of every cofactor.

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::modp::{add_mod, mul_mod, pow_mod};
use crate::{Error, Result};

const TRIAL_BOUND: u64 = 1_000_000;

/// Witnesses making Miller-Rabin deterministic below 3.3 * 10^24.
const MR_WITNESSES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Prime factorization of a positive integer, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    #[serde(with = "crate::intarith::serde_bigint")]
    pub n: BigInt,
    #[serde(with = "crate::intarith::serde_factor_list")]
    pub factors: Vec<(BigInt, u32)>,
}

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = &BigInt> {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn exponent_of(&self, p: &BigInt) -> u32 {
        self.factors.iter().find(|(q, _)| q == p).map_or(0, |&(_, e)| e)
    }

    pub fn product(&self) -> BigInt {
        self.factors
            .iter()
            .fold(BigInt::one(), |acc, (p, e)| acc * num_traits::pow(p.clone(), *e as usize))
    }

    /// Product of the distinct primes.
    pub fn radical(&self) -> BigInt {
        self.factors.iter().fold(BigInt::one(), |acc, (p, _)| acc * p)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e < 2)
    }

    pub fn is_cubefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e < 3)
    }
}

/// Renders as `5 * 11 * 41^2 * 61`; the unit renders as `1`.
impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Factors `n >= 1`.
pub fn factor(n: &BigInt) -> Result<Factorization> {
    if n.sign() != Sign::Plus {
        return Err(Error::InvalidArgument(format!("cannot factor {n}: need n >= 1")));
    }
    let mut primes: Vec<BigUint> = Vec::new();
    let mut rest = n.magnitude().clone();

    if let Some(small) = rest.to_u64() {
        let mut small = small;
        trial_divide_u64(&mut small, &mut primes);
        if small > 1 {
            split_u64(small, &mut primes);
        }
    } else {
        trial_divide_big(&mut rest, &mut primes);
        if !rest.is_one() {
            split_big(rest, &mut primes);
        }
    }

    primes.sort();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    for p in primes {
        let p = BigInt::from(p);
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    Ok(Factorization { n: n.clone(), factors })
}

pub fn factor_u64(n: u64) -> Result<Factorization> {
    factor(&BigInt::from(n))
}

fn trial_divide_u64(n: &mut u64, out: &mut Vec<BigUint>) {
    while (*n).is_multiple_of(2) {
        out.push(BigUint::from(2u32));
        *n /= 2;
    }
    let mut d = 3u64;
    while d <= TRIAL_BOUND && d.saturating_mul(d) <= *n {
        while (*n).is_multiple_of(d) {
            out.push(BigUint::from(d));
            *n /= d;
        }
        d += 2;
    }
    if *n > 1 && d.saturating_mul(d) > *n {
        out.push(BigUint::from(*n));
        *n = 1;
    }
}

fn trial_divide_big(n: &mut BigUint, out: &mut Vec<BigUint>) {
    let mut d = 2u64;
    while d <= TRIAL_BOUND {
        let dd = BigUint::from(d);
        loop {
            let (q, r) = n.div_rem(&dd);
            if !r.is_zero() {
                break;
            }
            out.push(dd.clone());
            *n = q;
        }
        if &(&dd * &dd) > n {
            break;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if !n.is_one() && &BigUint::from(d) * BigUint::from(d) > *n {
        out.push(std::mem::replace(n, BigUint::one()));
    }
}

fn split_u64(n: u64, out: &mut Vec<BigUint>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(BigUint::from(n));
        return;
    }
    if let Some(r) = exact_sqrt_u64(n) {
        split_u64(r, out);
        split_u64(r, out);
        return;
    }
    let d = rho_u64(n);
    split_u64(d, out);
    split_u64(n / d, out);
}

fn split_big(n: BigUint, out: &mut Vec<BigUint>) {
    if let Some(small) = n.to_u64() {
        split_u64(small, out);
        return;
    }
    if is_prime_big(&n) {
        out.push(n);
        return;
    }
    let r = n.sqrt();
    if &r * &r == n {
        split_big(r.clone(), out);
        split_big(r, out);
        return;
    }
    let d = rho_big(&n);
    let q = &n / &d;
    split_big(d, out);
    split_big(q, out);
}

fn exact_sqrt_u64(n: u64) -> Option<u64> {
    let r = (n as f64).sqrt() as u64;
    (r.saturating_sub(2)..=r + 2).find(|&c| c.checked_mul(c) == Some(n))
}

/// Deterministic for all 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &MR_WITNESSES[..12] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Miller-Rabin over the fixed witness set; proven correct below 3.3 * 10^24.
pub fn is_prime_big(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for &a in &MR_WITNESSES {
        let a = BigUint::from(a);
        if (n % &a).is_zero() {
            return false;
        }
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&BigUint::from(2u32), n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn is_prime(n: &BigInt) -> bool {
    n.sign() == Sign::Plus && is_prime_big(n.magnitude())
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Brent's cycle detection with increments c = 1, 2, ... and x0 = 2.
fn rho_u64(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    for c in 1u64.. {
        let f = |x: u64| add_mod(mul_mod(x, x, n), c % n, n);
        let mut y = 2u64;
        let mut r = 1u64;
        let mut q = 1u64;
        let mut g = 1u64;
        let mut x = y;
        let mut ys = y;
        let m = 128u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..m.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd_u64(q, n);
                k += m;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd_u64(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
    }
    unreachable!()
}

fn rho_big(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    for c in 1u64.. {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        loop {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            let g = diff.gcd(n);
            if g == *n {
                break;
            }
            if g != one {
                return g;
            }
        }
    }
    unreachable!()
}
