//! Dense univariate polynomials over the rationals, plus cyclotomic polynomials.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A polynomial with arbitrary-precision rational coefficients.
///
/// Index `j` of the coefficient vector is the coefficient of `X^j`. The
/// highest stored coefficient is always nonzero; the zero polynomial has no
/// coefficients at all.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct RationalPoly {
    coeffs: Vec<BigRational>,
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints<I: Into<BigInt> + Copy>(coeffs: &[I]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    /// `c * X^degree`
    pub fn monomial(c: BigRational, degree: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); degree + 1];
        coeffs[degree] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigRational> {
        self.coeffs
    }

    /// Coefficient of `X^j` (zero past the end).
    pub fn coeff(&self, j: usize) -> BigRational {
        self.coeffs
            .get(j)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    /// True when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Divides by the leading coefficient. The zero polynomial is returned unchanged.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lead) => self.scale(&lead.recip()),
            None => Self::zero(),
        }
    }

    /// Euclidean division. Returns `None` when `divisor` is zero.
    pub fn div_rem(&self, divisor: &Self) -> Option<(Self, Self)> {
        let dlead = divisor.leading()?.clone();
        let ddeg = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= ddeg {
            return Some((Self::zero(), self.clone()));
        }
        let mut quot = vec![BigRational::zero(); rem.len() - ddeg];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + ddeg] / &dlead;
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &c * d;
            }
            quot[i] = c;
        }
        rem.truncate(ddeg);
        Some((Self::new(quot), Self::new(rem)))
    }

    /// Extended Euclid: returns `(g, s, t)` with `s*a + t*b = g` and `g` monic
    /// (or zero when both inputs are zero).
    pub fn ext_gcd(a: &Self, b: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&q * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.leading().cloned() {
            Some(lead) => {
                let inv = lead.recip();
                (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
            }
            None => (r0, s0, t0),
        }
    }

    /// `X^m - 1`
    pub fn x_pow_minus_one(m: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); m + 1];
        coeffs[0] = -BigRational::one();
        coeffs[m] = BigRational::one();
        Self::new(coeffs)
    }
}

impl fmt::Debug for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalPoly({self})")
    }
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let a = c.abs();
            match (j, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => {}
                _ => write!(f, "{a}*")?,
            }
            match j {
                0 => {}
                1 => write!(f, "X")?,
                _ => write!(f, "X^{j}")?,
            }
        }
        Ok(())
    }
}

impl Add for &RationalPoly {
    type Output = RationalPoly;
    fn add(self, rhs: &RationalPoly) -> RationalPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        RationalPoly::new((0..len).map(|j| self.coeff(j) + rhs.coeff(j)).collect())
    }
}

impl Sub for &RationalPoly {
    type Output = RationalPoly;
    fn sub(self, rhs: &RationalPoly) -> RationalPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        RationalPoly::new((0..len).map(|j| self.coeff(j) - rhs.coeff(j)).collect())
    }
}

impl Mul for &RationalPoly {
    type Output = RationalPoly;
    fn mul(self, rhs: &RationalPoly) -> RationalPoly {
        if self.is_zero() || rhs.is_zero() {
            return RationalPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RationalPoly::new(out)
    }
}

impl Neg for &RationalPoly {
    type Output = RationalPoly;
    fn neg(self) -> RationalPoly {
        RationalPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// Positive divisors of `m` in increasing order.
pub fn divisors(m: usize) -> Vec<usize> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= m {
        if m.is_multiple_of(d) {
            small.push(d);
            if d * d != m {
                large.push(m / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Euler's totient.
pub fn totient(m: usize) -> usize {
    let mut result = m;
    let mut rest = m;
    let mut p = 2;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            while rest.is_multiple_of(p) {
                rest /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if rest > 1 {
        result -= result / rest;
    }
    result
}

/// Table of cyclotomic polynomials `Φ_d` for every divisor `d` of a fixed `m`.
#[derive(Clone, Debug)]
pub struct CycPolyTable {
    table: BTreeMap<usize, RationalPoly>,
}

impl CycPolyTable {
    /// Builds `Φ_d` for all `d | m` by dividing `X^d - 1` by the smaller factors.
    pub fn for_divisors_of(m: usize) -> Self {
        assert!(m >= 1, "cyclotomic table needs m >= 1");
        let mut table = BTreeMap::new();
        for d in divisors(m) {
            let mut poly = RationalPoly::x_pow_minus_one(d);
            for e in divisors(d) {
                if e == d {
                    continue;
                }
                let (q, r) = poly
                    .div_rem(&table[&e])
                    .expect("cyclotomic polys are nonzero");
                debug_assert!(r.is_zero());
                poly = q;
            }
            table.insert(d, poly);
        }
        Self { table }
    }

    pub fn get(&self, d: usize) -> Option<&RationalPoly> {
        self.table.get(&d)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &RationalPoly)> {
        self.table.iter().map(|(&d, p)| (d, p))
    }
}

/// The `d`-th cyclotomic polynomial.
pub fn cyclotomic_poly(d: usize) -> RationalPoly {
    assert!(d >= 1, "cyclotomic_poly needs d >= 1");
    CycPolyTable::for_divisors_of(d)
        .table
        .remove(&d)
        .expect("d divides itself")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn small_cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1), RationalPoly::from_ints(&[-1, 1]));
        assert_eq!(cyclotomic_poly(2), RationalPoly::from_ints(&[1, 1]));
        assert_eq!(cyclotomic_poly(4), RationalPoly::from_ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_poly(6), RationalPoly::from_ints(&[1, -1, 1]));
        assert_eq!(
            cyclotomic_poly(12),
            RationalPoly::from_ints(&[1, 0, -1, 0, 1])
        );
    }

    #[test]
    fn phi_4_by_explicit_division() {
        // (X^4 - 1) / ((X - 1)(X + 1))
        let denom = &RationalPoly::from_ints(&[-1, 1]) * &RationalPoly::from_ints(&[1, 1]);
        let (quot, rem) = RationalPoly::x_pow_minus_one(4).div_rem(&denom).unwrap();
        assert!(rem.is_zero());
        assert_eq!(quot, cyclotomic_poly(4));
    }

    #[test]
    fn phi_6_by_explicit_division() {
        let denom = &(&RationalPoly::from_ints(&[-1, 1]) * &RationalPoly::from_ints(&[1, 1]))
            * &RationalPoly::from_ints(&[1, 1, 1]);
        let (quot, rem) = RationalPoly::x_pow_minus_one(6).div_rem(&denom).unwrap();
        assert!(rem.is_zero());
        assert_eq!(quot, cyclotomic_poly(6));
    }

    #[test]
    fn product_over_divisors_is_x_m_minus_one() {
        for m in 1..=60 {
            let table = CycPolyTable::for_divisors_of(m);
            let prod = table
                .iter()
                .fold(RationalPoly::one(), |acc, (_, p)| &acc * p);
            assert_eq!(prod, RationalPoly::x_pow_minus_one(m), "m = {m}");
            for (d, p) in table.iter() {
                assert_eq!(p.degree(), Some(totient(d)));
                assert!(p.is_integral());
            }
        }
    }

    #[test]
    fn ext_gcd_bezout() {
        let a = RationalPoly::new(vec![q(1, 2), q(3, 1), q(-2, 3)]);
        let b = cyclotomic_poly(10);
        let (g, s, t) = RationalPoly::ext_gcd(&a, &b);
        assert_eq!(g, RationalPoly::one());
        assert_eq!(&(&s * &a) + &(&t * &b), g);
    }

    #[test]
    fn div_rem_by_zero_is_none() {
        assert!(RationalPoly::one().div_rem(&RationalPoly::zero()).is_none());
    }

    #[test]
    fn trailing_zeros_trimmed() {
        let p = RationalPoly::new(vec![q(1, 1), q(0, 1), q(0, 5)]);
        assert_eq!(p.degree(), Some(0));
        assert_eq!(
            format!("{}", RationalPoly::from_ints(&[1, -1, 1])),
            "X^2 - X + 1"
        );
    }

    #[test]
    fn divisors_and_totient() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(totient(1), 1);
        assert_eq!(totient(12), 4);
        assert_eq!(totient(7), 6);
    }
}
