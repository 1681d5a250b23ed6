#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use origami_core::cyclotomic::CycNum;
use origami_core::geometry::{Angle, OrigamiField};
use origami_core::primes::is_prime_usize;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// A point `Σ c_k ζ_{2n}^k` with a few small rational coefficients.
pub fn random_point(field: &OrigamiField, rng: &mut ChaCha8Rng) -> CycNum {
    let big_n = 2 * field.n() as i64;
    let terms: Vec<(i64, BigRational)> = (0..rng.gen_range(1..=3))
        .map(|_| {
            let k = rng.gen_range(0..big_n);
            (k, rat(rng.gen_range(-5..=5), rng.gen_range(1..=4)))
        })
        .collect();
    CycNum::from_terms(field.field(), terms.iter().map(|(k, c)| (*k, c)))
}

pub fn random_angle(n: usize, rng: &mut ChaCha8Rng) -> Angle {
    Angle::wrapping(n, rng.gen_range(0..n as i64))
}

pub fn distinct_angles(n: usize, rng: &mut ChaCha8Rng) -> (Angle, Angle) {
    let u = random_angle(n, rng);
    let v = Angle::wrapping(n, u.k() as i64 + rng.gen_range(1..n as i64));
    (u, v)
}

/// A random element of `Z[ζ_n]` for prime `n`, or of `Z[1/n, ζ_n]` otherwise,
/// built on the powers `ζ_n^0 .. ζ_n^{n-1}` with coefficients in `[-2, 2]`.
pub fn random_ring_element(field: &OrigamiField, rng: &mut ChaCha8Rng) -> CycNum {
    let n = field.n() as i64;
    let den = if is_prime_usize(field.n()) || rng.gen_bool(0.5) {
        1
    } else {
        [2, 3, 4, n][rng.gen_range(0..4)]
    };
    let den = if n % den == 0 { den } else { n };
    let mut terms: Vec<(i64, BigRational)> = Vec::new();
    for k in 0..n {
        if rng.gen_bool(0.4) {
            terms.push((2 * k, rat(rng.gen_range(-2..=2), den)));
        }
    }
    CycNum::from_terms(field.field(), terms.iter().map(|(k, c)| (*k, c)))
}
