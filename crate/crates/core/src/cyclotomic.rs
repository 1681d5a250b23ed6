//! Exact arithmetic in the cyclotomic field `Q(ζ_N)`.
//!
//! Elements are stored on the power basis `1, ζ, …, ζ^{φ(N)-1}` as a vector of
//! integer numerators over one shared positive denominator. The representation
//! is fully reduced: the numerators and the denominator have no common factor,
//! so two elements of the same field are equal iff their stored data is equal.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::{cyclotomic_poly, totient, RationalPoly};
use crate::primes;
use crate::CycError;

/// The field `Q(ζ_N)` together with the data needed to reduce products.
#[derive(Debug)]
pub struct CyclotomicField {
    conductor: usize,
    degree: usize,
    modulus: RationalPoly,
    /// `powers[k]` is `ζ^k` on the power basis, for `0 <= k < max(N, 2φ(N) - 1)`.
    powers: Vec<Vec<BigInt>>,
}

impl CyclotomicField {
    pub fn new(conductor: usize) -> Arc<Self> {
        assert!(conductor >= 1, "conductor must be positive");
        let modulus = cyclotomic_poly(conductor);
        let degree = totient(conductor);
        let low: Vec<BigInt> = modulus.coeffs()[..degree]
            .iter()
            .map(|c| c.to_integer())
            .collect();

        let table_len = conductor.max(2 * degree - 1);
        let mut powers = Vec::with_capacity(table_len);
        let mut current = vec![BigInt::zero(); degree];
        current[0] = BigInt::one();
        for _ in 0..table_len {
            powers.push(current.clone());
            // multiply by X, then substitute X^deg = -(low part of Φ)
            let top = current.pop().expect("degree >= 1");
            current.insert(0, BigInt::zero());
            if !top.is_zero() {
                for (c, m) in current.iter_mut().zip(&low) {
                    *c -= &top * m;
                }
            }
        }

        Arc::new(Self {
            conductor,
            degree,
            modulus,
            powers,
        })
    }

    pub fn conductor(&self) -> usize {
        self.conductor
    }

    /// `φ(N)`, the dimension over `Q`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// The defining polynomial `Φ_N`.
    pub fn modulus(&self) -> &RationalPoly {
        &self.modulus
    }

    fn power(&self, k: i64) -> &[BigInt] {
        let idx = k.rem_euclid(self.conductor as i64) as usize;
        &self.powers[idx]
    }
}

/// An exact element of `Q(ζ_N)` in canonical form.
#[derive(Clone)]
pub struct CycNum {
    field: Arc<CyclotomicField>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycNum {
    pub fn zero(field: &Arc<CyclotomicField>) -> Self {
        Self {
            field: field.clone(),
            num: vec![BigInt::zero(); field.degree],
            den: BigInt::one(),
        }
    }

    pub fn one(field: &Arc<CyclotomicField>) -> Self {
        Self::from_integer(field, BigInt::one())
    }

    pub fn from_integer(field: &Arc<CyclotomicField>, value: impl Into<BigInt>) -> Self {
        let mut out = Self::zero(field);
        out.num[0] = value.into();
        out
    }

    pub fn from_rational(field: &Arc<CyclotomicField>, value: &BigRational) -> Self {
        let mut out = Self::zero(field);
        out.num[0] = value.numer().clone();
        out.den = value.denom().clone();
        out.normalize();
        out
    }

    /// `ζ_N^k` for any integer `k`.
    pub fn zeta_pow(field: &Arc<CyclotomicField>, k: i64) -> Self {
        Self {
            field: field.clone(),
            num: field.power(k).to_vec(),
            den: BigInt::one(),
        }
    }

    /// Builds `Σ c · ζ^e` from arbitrary (exponent, coefficient) pairs, reducing
    /// exponents modulo `N` and the result modulo `Φ_N`.
    pub fn from_terms<'a, I>(field: &Arc<CyclotomicField>, terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, &'a BigRational)>,
    {
        let terms: Vec<(i64, &BigRational)> = terms.into_iter().collect();
        let den = terms
            .iter()
            .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let mut num = vec![BigInt::zero(); field.degree];
        for (e, c) in terms {
            if c.is_zero() {
                continue;
            }
            let scaled = c.numer() * (&den / c.denom());
            for (acc, p) in num.iter_mut().zip(field.power(e)) {
                if !p.is_zero() {
                    *acc += &scaled * p;
                }
            }
        }
        let mut out = Self {
            field: field.clone(),
            num,
            den,
        };
        out.normalize();
        out
    }

    /// Interprets `poly` as a polynomial in `ζ_N` and reduces it.
    pub fn from_poly(field: &Arc<CyclotomicField>, poly: &RationalPoly) -> Self {
        Self::from_terms(
            field,
            poly.coeffs().iter().enumerate().map(|(j, c)| (j as i64, c)),
        )
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn conductor(&self) -> usize {
        self.field.conductor
    }

    /// Integer numerators on the power basis (length `φ(N)`).
    pub fn numerators(&self) -> &[BigInt] {
        &self.num
    }

    /// The common positive denominator.
    pub fn denominator(&self) -> &BigInt {
        &self.den
    }

    /// Rational coefficients on the power basis (length `φ(N)`).
    pub fn coeffs(&self) -> Vec<BigRational> {
        self.num
            .iter()
            .map(|n| BigRational::new(n.clone(), self.den.clone()))
            .collect()
    }

    pub fn to_poly(&self) -> RationalPoly {
        RationalPoly::new(self.coeffs())
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// The value as a rational, if it lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    /// Maximum absolute value of the numerators and denominator.
    pub fn height(&self) -> BigInt {
        self.num
            .iter()
            .map(|n| n.abs())
            .fold(self.den.clone(), |a, b| a.max(b))
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -std::mem::take(&mut self.den);
            for n in &mut self.num {
                *n = -std::mem::take(n);
            }
        }
        if self.den.is_one() {
            return;
        }
        if self.is_zero() {
            self.den = BigInt::one();
            return;
        }
        let mut g = self.den.clone();
        for n in &self.num {
            if g.is_one() {
                return;
            }
            if !n.is_zero() {
                g = g.gcd(n);
            }
        }
        if !g.is_one() {
            self.den /= &g;
            for n in &mut self.num {
                *n /= &g;
            }
        }
    }

    fn check_field(&self, other: &Self) -> Result<(), CycError> {
        if self.field.conductor == other.field.conductor {
            Ok(())
        } else {
            Err(CycError::ConductorMismatch {
                left: self.field.conductor,
                right: other.field.conductor,
            })
        }
    }

    fn combine(&self, other: &Self, sign: i8) -> Self {
        let (num, den) = if self.den == other.den {
            let num = self
                .num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| if sign > 0 { a + b } else { a - b })
                .collect();
            (num, self.den.clone())
        } else {
            let den = self.den.lcm(&other.den);
            let fa = &den / &self.den;
            let fb = &den / &other.den;
            let num = self
                .num
                .iter()
                .zip(&other.num)
                .map(|(a, b)| {
                    let (x, y) = (a * &fa, b * &fb);
                    if sign > 0 {
                        x + y
                    } else {
                        x - y
                    }
                })
                .collect();
            (num, den)
        };
        let mut out = Self {
            field: self.field.clone(),
            num,
            den,
        };
        out.normalize();
        out
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, CycError> {
        self.check_field(other)?;
        Ok(self.combine(other, 1))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, CycError> {
        self.check_field(other)?;
        Ok(self.combine(other, -1))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, CycError> {
        self.check_field(other)?;
        let deg = self.field.degree;
        let mut wide = vec![BigInt::zero(); 2 * deg - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    wide[i + j] += a * b;
                }
            }
        }
        let mut num: Vec<BigInt> = wide.drain(..deg).collect();
        for (k, c) in wide.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (acc, p) in num.iter_mut().zip(&self.field.powers[deg + k]) {
                if !p.is_zero() {
                    *acc += &c * p;
                }
            }
        }
        let mut out = Self {
            field: self.field.clone(),
            num,
            den: &self.den * &other.den,
        };
        out.normalize();
        Ok(out)
    }

    /// Multiplicative inverse, via the extended gcd of the coefficient
    /// polynomial and `Φ_N` over the rationals.
    pub fn inv(&self) -> Result<Self, CycError> {
        if self.is_zero() {
            return Err(CycError::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(&self.field, &r.recip()));
        }
        let (g, s, _) = RationalPoly::ext_gcd(&self.to_poly(), &self.field.modulus);
        debug_assert_eq!(g, RationalPoly::one(), "Φ_N is irreducible");
        Ok(Self::from_poly(&self.field, &s))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, CycError> {
        self.check_field(other)?;
        self.checked_mul(&other.inv()?)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        let mut out = Self {
            field: self.field.clone(),
            num: self.num.iter().map(|n| n * r.numer()).collect(),
            den: &self.den * r.denom(),
        };
        out.normalize();
        out
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        self.scale(&BigRational::from_integer(k.clone()))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Complex conjugation: the automorphism `ζ ↦ ζ^{N-1}`.
    pub fn conj(&self) -> Self {
        let n = self.field.conductor as i64;
        let mut num = vec![BigInt::zero(); self.field.degree];
        for (j, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (acc, p) in num.iter_mut().zip(self.field.power(n - j as i64)) {
                if !p.is_zero() {
                    *acc += c * p;
                }
            }
        }
        Self {
            field: self.field.clone(),
            num,
            den: self.den.clone(),
        }
    }

    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// Numeric embedding `ζ_N ↦ exp(2πi/N)` in double precision.
    pub fn to_complex(&self) -> Complex64 {
        let n = self.field.conductor as f64;
        let den = self.den.to_f64().unwrap_or(f64::INFINITY);
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let coeff = if den.is_finite() {
                c.to_f64().unwrap_or(f64::NAN) / den
            } else {
                BigRational::new(c.clone(), self.den.clone())
                    .to_f64()
                    .unwrap_or(f64::NAN)
            };
            let theta = 2.0 * std::f64::consts::PI * j as f64 / n;
            acc += Complex64::from_polar(coeff, theta);
        }
        acc
    }

    /// Like [`CycNum::to_complex`], with the requested precision validated.
    /// Only double precision is implemented, so `bits` must be exactly 53.
    pub fn to_complex_with_precision(&self, bits: u32) -> Result<Complex64, CycError> {
        if bits != 53 {
            return Err(CycError::UnsupportedPrecision(bits));
        }
        Ok(self.to_complex())
    }

    /// Coordinates of `self` on the basis `1, ζ_m, …, ζ_m^{φ(m)-1}` of the subfield
    /// `Q(ζ_m)`, where `ζ_m = ζ_N^{N/m}`. Returns `None` when `self` is not in it.
    pub fn subfield_coords(&self, m: usize) -> Option<Vec<BigRational>> {
        let big_n = self.field.conductor;
        assert!(
            m >= 1 && big_n.is_multiple_of(m),
            "subfield order must divide the conductor"
        );
        let step = (big_n / m) as i64;
        let cols = totient(m);
        let rows = self.field.degree;

        // augmented system [M | a], M[:, j] = coordinates of ζ_N^{step*j}
        let mut mat: Vec<Vec<BigRational>> = (0..rows)
            .map(|i| {
                let mut row: Vec<BigRational> = (0..cols)
                    .map(|j| {
                        BigRational::from_integer(self.field.power(step * j as i64)[i].clone())
                    })
                    .collect();
                row.push(BigRational::new(self.num[i].clone(), self.den.clone()));
                row
            })
            .collect();

        let mut pivots = Vec::with_capacity(cols);
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..rows).find(|&i| !mat[i][c].is_zero()) else {
                continue;
            };
            mat.swap(r, p);
            let inv = mat[r][c].recip();
            for x in mat[r].iter_mut() {
                *x *= &inv;
            }
            for i in 0..rows {
                if i != r && !mat[i][c].is_zero() {
                    let f = mat[i][c].clone();
                    let (pivot_row, row) = if i < r {
                        let (a, b) = mat.split_at_mut(r);
                        (&b[0], &mut a[i])
                    } else {
                        let (a, b) = mat.split_at_mut(i);
                        (&a[r], &mut b[0])
                    };
                    for (x, y) in row.iter_mut().zip(pivot_row) {
                        *x -= &f * y;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        // any nonzero right-hand side left in a zero row means inconsistency
        if mat[r..].iter().any(|row| !row[cols].is_zero()) {
            return None;
        }
        let mut coords = vec![BigRational::zero(); cols];
        for (row, &c) in pivots.iter().enumerate() {
            coords[c] = mat[row][cols].clone();
        }
        Some(coords)
    }

    /// Inverse of [`CycNum::subfield_coords`].
    pub fn from_subfield_coords(
        field: &Arc<CyclotomicField>,
        m: usize,
        coords: &[BigRational],
    ) -> Self {
        let step = (field.conductor / m) as i64;
        Self::from_terms(
            field,
            coords.iter().enumerate().map(|(j, c)| (step * j as i64, c)),
        )
    }
}

/// Primes dividing the denominator of any coordinate. Empty means the
/// coordinates are integral.
pub fn integrality_profile(coords: &[BigRational]) -> BTreeSet<BigUint> {
    let mut out = BTreeSet::new();
    for c in coords {
        let d = c.denom().magnitude();
        if !d.is_one() {
            out.extend(primes::prime_factors(d));
        }
    }
    out
}

impl PartialEq for CycNum {
    fn eq(&self, other: &Self) -> bool {
        self.field.conductor == other.field.conductor
            && self.den == other.den
            && self.num == other.num
    }
}

impl Eq for CycNum {}

impl Hash for CycNum {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.conductor.hash(state);
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl Ord for CycNum {
    fn cmp(&self, other: &Self) -> Ordering {
        self.field
            .conductor
            .cmp(&other.field.conductor)
            .then_with(|| self.den.cmp(&other.den))
            .then_with(|| self.num.cmp(&other.num))
    }
}

impl PartialOrd for CycNum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNum[N={}]({})", self.field.conductor, self)
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::literal::format_literal(self))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for &CycNum {
            type Output = CycNum;
            fn $method(self, rhs: &CycNum) -> CycNum {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait for CycNum {
            type Output = CycNum;
            fn $method(self, rhs: CycNum) -> CycNum {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&CycNum> for CycNum {
            type Output = CycNum;
            fn $method(self, rhs: &CycNum) -> CycNum {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum {
            field: self.field.clone(),
            num: self.num.iter().map(|n| -n).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}
