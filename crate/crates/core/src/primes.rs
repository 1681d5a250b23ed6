//! Small factoring utilities for denominator profiles.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

const TRIAL_LIMIT: u32 = 10_000;
const MR_BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

pub fn is_prime_usize(m: usize) -> bool {
    if m < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors of `m` in increasing order.
pub fn prime_factors_usize(mut m: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            out.push(p);
            while m.is_multiple_of(p) {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// Distinct prime factors of an arbitrary-precision integer.
pub fn prime_factors(m: &BigUint) -> BTreeSet<BigUint> {
    let mut out = BTreeSet::new();
    let mut rest = m.clone();
    if rest.is_zero() {
        return out;
    }
    for p in 2..TRIAL_LIMIT {
        if rest.is_one() {
            return out;
        }
        let bp = BigUint::from(p);
        if (&rest % &bp).is_zero() {
            while (&rest % &bp).is_zero() {
                rest /= &bp;
            }
            out.insert(bp);
        }
    }
    split_large(rest, &mut out);
    out
}

fn split_large(m: BigUint, out: &mut BTreeSet<BigUint>) {
    if m.is_one() {
        return;
    }
    if is_probable_prime(&m) {
        out.insert(m);
        return;
    }
    let d = pollard_rho(&m);
    let other = &m / &d;
    split_large(d, out);
    split_large(other, out);
}

/// Miller-Rabin with the first 13 prime bases; deterministic below 3.3e24.
pub fn is_probable_prime(m: &BigUint) -> bool {
    if let Some(small) = m.to_u64() {
        if small < 2 {
            return false;
        }
        for &b in &MR_BASES {
            if small == b as u64 {
                return true;
            }
            if small % b as u64 == 0 {
                return false;
            }
        }
    }
    let one = BigUint::one();
    let m_minus_1 = m - &one;
    let s = m_minus_1.trailing_zeros().unwrap_or(0);
    let d = &m_minus_1 >> s;
    'bases: for &b in &MR_BASES {
        let mut x = BigUint::from(b).modpow(&d, m);
        if x == one || x == m_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % m;
            if x == m_minus_1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard's rho. `m` must be composite and odd.
fn pollard_rho(m: &BigUint) -> BigUint {
    let one = BigUint::one();
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % m;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        let mut d = one.clone();
        while d.is_one() {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            d = diff.gcd(m);
        }
        if &d != m {
            return d;
        }
        c += 1u32;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_factorizations() {
        assert_eq!(prime_factors_usize(12), vec![2, 3]);
        assert_eq!(prime_factors_usize(1), Vec::<usize>::new());
        assert_eq!(prime_factors_usize(49), vec![7]);
        assert!(is_prime_usize(13) && !is_prime_usize(9) && !is_prime_usize(1));
    }

    #[test]
    fn large_semiprime() {
        let p = BigUint::from(1_000_000_007u64);
        let q = BigUint::from(998_244_353u64);
        let m = &p * &q * BigUint::from(4u32);
        let f: Vec<_> = prime_factors(&m).into_iter().collect();
        assert_eq!(f, vec![BigUint::from(2u32), q, p]);
    }
}
