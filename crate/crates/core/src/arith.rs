//! Small number theory: primality, factorisation, valuations and primitive
//! roots.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// All primes in increasing order.
pub fn primes() -> impl Iterator<Item = u64> {
    (2u64..).filter(|&n| is_prime(n))
}

/// Prime factorisation as `(prime, exponent)` pairs in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Prime-power decomposition of a positive integer of any size.
pub fn factorize_big(n: &BigInt) -> Vec<(u64, u32)> {
    if let Some(small) = n.to_u64() {
        return factorize(small);
    }
    let mut n = n.clone();
    let mut out = Vec::new();
    let mut d = 2u64;
    loop {
        let bd = BigInt::from(d);
        if &bd * &bd > n {
            break;
        }
        let mut e = 0;
        loop {
            let (q, r) = n.div_rem(&bd);
            if !r.is_zero() {
                break;
            }
            n = q;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > BigInt::one() {
        let p = n.to_u64().expect("cofactor beyond u64 after trial division");
        out.push((p, 1));
    }
    out
}

/// Multiplicative order of `a` modulo the prime `q`.
fn order_mod(a: u64, q: u64) -> u64 {
    let phi = q - 1;
    let mut order = phi;
    for (p, _) in factorize(phi) {
        while order % p == 0 && pow_mod(a, order / p, q) == 1 {
            order /= p;
        }
    }
    order
}

pub fn pow_mod(base: u64, mut e: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut b = base as u128 % m128;
    let mut r = 1u128 % m128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m128;
        }
        b = b * b % m128;
        e >>= 1;
    }
    r as u64
}

/// Smallest generator of `(Z/q)^×`.
pub fn primitive_root(q: u64) -> Result<u64> {
    if !is_prime(q) {
        return Err(Error::NotPrime { value: q });
    }
    if q == 2 {
        return Ok(1);
    }
    Ok((2..q).find(|&g| order_mod(g, q) == q - 1).expect("cyclic group has a generator"))
}

/// `v_q(p^e - 1)` for `p^e > 1`.
pub fn valuation_of_power_minus_one(p: u64, e: u32, q: u64) -> u32 {
    let value = num_traits::pow(BigInt::from(p), e as usize) - BigInt::one();
    crate::linalg::valuation(&value, q)
}
