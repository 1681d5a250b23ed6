//! Cyclotomic identities behind the ring structure of `R(U_n)`.
//!
//! An elementary monomial is `I_{u,v}(1,0) = (1 − u²)/(1 − (u/v)²)`, which for
//! `U_n` is a quotient `(1 − ζ_n^a)/(1 − ζ_n^b)`. Integer combinations of
//! products of these are exactly the ring elements. For prime `n` the ring is
//! `Z[ζ_n]`; otherwise `1/p` is reachable for each prime `p | n` through an
//! explicit certificate and the ring is `Z[1/n, ζ_n]`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{integrality_profile, CycNum};
use crate::geometry::{pairing, Angle, OrigamiField};
use crate::primes::{is_prime_usize, prime_factors_usize};
use crate::{GeometryError, OrigamiError};

/// `I_{u,v}(1,0)` evaluated through `(1 − u²)/(1 − (u/v)²)`.
pub fn elementary_monomial(
    field: &OrigamiField,
    u: Angle,
    v: Angle,
) -> Result<CycNum, GeometryError> {
    field.kernel(u, v)?;
    let one = field.one();
    let num = &one - &field.zeta_n_pow(u.k() as i64);
    let den = &one - &field.zeta_n_pow(u.k() as i64 - v.k() as i64);
    Ok(num.checked_div(&den)?)
}

/// `(1 − ζ_n^a) / (1 − ζ_n^b)` for `a, b ≢ 0 (mod n)`.
pub fn quotient_1mz(field: &OrigamiField, a: i64, b: i64) -> Result<CycNum, OrigamiError> {
    let n = field.n() as i64;
    if a.rem_euclid(n) == 0 || b.rem_euclid(n) == 0 {
        return Err(OrigamiError::BadOrder {
            n: field.n(),
            reason: format!("exponents must be nonzero mod n, got a = {a}, b = {b}"),
        });
    }
    let one = field.one();
    Ok((&one - &field.zeta_n_pow(a)).checked_div(&(&one - &field.zeta_n_pow(b)))?)
}

/// The elementary factor whose value is `(1 − ζ_n^a)/(1 − ζ_n^b)`:
/// `u = a`, `v = a − b (mod n)`, so that `u² = ζ_n^a` and `(u/v)² = ζ_n^b`.
pub fn quotient_factor(n: usize, a: i64, b: i64) -> ElementaryFactor {
    ElementaryFactor {
        u: Angle::wrapping(n, a),
        v: Angle::wrapping(n, a - b),
    }
}

/// The factor `(1 − ζ)/(1 − ζ^{-1}) = −ζ_n`.
pub fn neg_zeta_factor(n: usize) -> ElementaryFactor {
    quotient_factor(n, 1, -1)
}

/// `∏_{k=1}^{n−1} (1 − ζ_n^k)`, checked to equal `n`.
pub fn check_product_identity(n: usize) -> Result<CycNum, OrigamiError> {
    if n < 2 {
        return Err(OrigamiError::BadOrder {
            n,
            reason: "need n >= 2".into(),
        });
    }
    let field = OrigamiField::new(n);
    let one = field.one();
    let product = (1..n as i64).fold(field.one(), |acc, k| &acc * &(&one - &field.zeta_n_pow(k)));
    if product != field.int(n as i64) {
        return Err(OrigamiError::NotConstructible(format!(
            "product of (1 - ζ^k) is {product}, not {n}"
        )));
    }
    Ok(product)
}

/// Evidence that `1 − ζ_n` is a unit for `n = pq`.
#[derive(Clone, Debug)]
pub struct UnitCertificate {
    /// `∏_{gcd(k,n)=1} (1 − ζ_n^k)`, equal to 1
    pub product: CycNum,
    pub unit: CycNum,
    /// exact inverse of `unit`, with integral coordinates
    pub inverse: CycNum,
}

pub fn coprime_unit_product(n: usize) -> Result<UnitCertificate, OrigamiError> {
    let primes = prime_factors_usize(n);
    if primes.len() != 2 || primes[0] * primes[1] != n {
        return Err(OrigamiError::BadOrder {
            n,
            reason: "expected a product of two distinct primes".into(),
        });
    }
    let field = OrigamiField::new(n);
    let one = field.one();
    let product = (1..n as i64)
        .filter(|&k| k.gcd(&(n as i64)) == 1)
        .fold(field.one(), |acc, k| &acc * &(&one - &field.zeta_n_pow(k)));
    if !product.is_one() {
        return Err(OrigamiError::NotConstructible(format!(
            "coprime product is {product}, not 1"
        )));
    }
    let unit = &one - &field.zeta_n_pow(1);
    let inverse = unit.inv()?;
    if !is_integral_in(&field, &inverse) {
        return Err(OrigamiError::NotConstructible(
            "1 - ζ has a non-integral inverse".into(),
        ));
    }
    Ok(UnitCertificate {
        product,
        unit,
        inverse,
    })
}

fn is_integral_in(field: &OrigamiField, x: &CycNum) -> bool {
    x.subfield_coords(field.n())
        .is_some_and(|c| integrality_profile(&c).is_empty())
}

/// A product `multiplier · ∏ (1 − ζ_n^a)/(1 − ζ_n^b)` equal to `1/p`.
#[derive(Clone, Debug)]
pub struct QuotientCertificate {
    pub n: usize,
    pub p: usize,
    /// the divisor of `n` (`p²` or `pq`) the certificate is built in
    pub d: usize,
    /// exponent pairs `(a, b)` of `ζ_n`
    pub quotients: Vec<(i64, i64)>,
    /// an element of `Z[ζ_n]`
    pub multiplier: CycNum,
}

impl QuotientCertificate {
    pub fn evaluate(&self, field: &OrigamiField) -> Result<CycNum, OrigamiError> {
        self.quotients
            .iter()
            .try_fold(self.multiplier.clone(), |acc, &(a, b)| {
                Ok(&acc * &quotient_1mz(field, a, b)?)
            })
    }

    pub fn factors(&self) -> Vec<ElementaryFactor> {
        self.quotients
            .iter()
            .map(|&(a, b)| quotient_factor(self.n, a, b))
            .collect()
    }
}

/// Builds and checks a certificate for `1/p`, `p` a prime divisor of composite `n`.
///
/// With `p² | n` this uses `∏_{k<p², p∤k} (1 − ζ^k)/(1 − ζ^{pk}) = 1/p^{p−1}`
/// for `ζ = ζ_{p²}`, times the integer `p^{p−2}`. Otherwise, with another
/// prime `q | n` and `ζ = ζ_{pq}`, `∏_{k=1}^{p−1} (1 − ζ)/(1 − ζ^{qk}) = (1 − ζ)^{p−1}/p`,
/// times the inverse of the unit `(1 − ζ)^{p−1}`.
pub fn inverse_prime_product(n: usize, p: usize) -> Result<QuotientCertificate, OrigamiError> {
    let bad = |reason: &str| OrigamiError::BadOrder {
        n,
        reason: reason.into(),
    };
    if n < 4 || is_prime_usize(n) {
        return Err(bad("n must be composite"));
    }
    if !is_prime_usize(p) || !n.is_multiple_of(p) {
        return Err(bad(&format!("{p} is not a prime divisor of n")));
    }
    let field = OrigamiField::new(n);
    let cert = if n.is_multiple_of(p * p) {
        let d = p * p;
        let s = (n / d) as i64;
        let quotients = (1..d as i64)
            .filter(|k| k % p as i64 != 0)
            .map(|k| (k * s, p as i64 * k * s))
            .collect();
        let multiplier = field.int((p as i64).pow(p as u32 - 2));
        QuotientCertificate {
            n,
            p,
            d,
            quotients,
            multiplier,
        }
    } else {
        let q = prime_factors_usize(n)
            .into_iter()
            .find(|&q| q != p)
            .ok_or_else(|| bad("no second prime divisor"))?;
        let d = p * q;
        let s = (n / d) as i64;
        let quotients = (1..p as i64).map(|k| (s, q as i64 * k * s)).collect();
        let unit = (&field.one() - &field.zeta_n_pow(s)).pow(p as u32 - 1);
        let multiplier = unit.inv()?;
        if !is_integral_in(&field, &multiplier) {
            return Err(OrigamiError::NotConstructible(format!(
                "unit inverse for p = {p} is not integral"
            )));
        }
        QuotientCertificate {
            n,
            p,
            d,
            quotients,
            multiplier,
        }
    };
    let value = cert.evaluate(&field)?;
    let expected = CycNum::from_rational(field.field(), &BigRational::new(1.into(), p.into()));
    if value != expected {
        return Err(OrigamiError::NotConstructible(format!(
            "certificate for 1/{p} evaluates to {value}"
        )));
    }
    Ok(cert)
}

/// Where an element sits relative to the cyclotomic rings of order `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// in `Z[ζ_n]`
    Integral { coords: Vec<BigRational> },
    /// in `Z[1/n, ζ_n]` but not `Z[ζ_n]`
    Localized {
        coords: Vec<BigRational>,
        profile: BTreeSet<BigUint>,
    },
    /// in `Q(ζ_n)` only
    FieldOnly {
        coords: Vec<BigRational>,
        profile: BTreeSet<BigUint>,
    },
    /// in `Q(ζ_{2n})` but not `Q(ζ_n)`
    Outside,
}

impl Membership {
    pub fn coords(&self) -> Option<&[BigRational]> {
        match self {
            Self::Integral { coords }
            | Self::Localized { coords, .. }
            | Self::FieldOnly { coords, .. } => Some(coords),
            Self::Outside => None,
        }
    }

    pub fn profile(&self) -> BTreeSet<BigUint> {
        match self {
            Self::Localized { profile, .. } | Self::FieldOnly { profile, .. } => profile.clone(),
            _ => BTreeSet::new(),
        }
    }

    /// Whether this element lies in `R(U_n)`.
    pub fn is_constructible(&self, n: usize) -> bool {
        match self {
            Self::Integral { .. } => true,
            Self::Localized { .. } => !is_prime_usize(n),
            _ => false,
        }
    }

    pub fn verdict(&self, n: usize) -> String {
        match self {
            Self::Integral { .. } => format!("in Z[ζ_{n}]"),
            Self::Localized { .. } => format!("in Z[1/{n}, ζ_{n}] only"),
            Self::FieldOnly { .. } => format!("in Q(ζ_{n}) only"),
            Self::Outside => format!("outside Q(ζ_{n})"),
        }
    }
}

pub fn ring_membership(field: &OrigamiField, x: &CycNum) -> Membership {
    let n = field.n();
    let Some(coords) = x.subfield_coords(n) else {
        return Membership::Outside;
    };
    let profile = integrality_profile(&coords);
    if profile.is_empty() {
        return Membership::Integral { coords };
    }
    let allowed: BTreeSet<BigUint> = prime_factors_usize(n)
        .into_iter()
        .map(BigUint::from)
        .collect();
    if profile.is_subset(&allowed) {
        Membership::Localized { coords, profile }
    } else {
        Membership::FieldOnly { coords, profile }
    }
}

/// An elementary monomial descriptor `I_{u,v}(1,0)`, `u ≠ v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ElementaryFactor {
    pub u: Angle,
    pub v: Angle,
}

impl ElementaryFactor {
    pub fn value(&self, field: &OrigamiField) -> Result<CycNum, GeometryError> {
        elementary_monomial(field, self.u, self.v)
    }

    /// `⟨u,1⟩/⟨u,v⟩` as a sine-quotient; the factor equals it times `v`.
    pub fn sine_quotient(&self) -> SineQuotient {
        let n = self.u.n() as i64;
        SineQuotient {
            a: BigRational::new((self.u.k() as i64).into(), n.into()),
            b: BigRational::new((self.v.k() as i64).into(), n.into()),
            c: BigRational::zero(),
        }
    }
}

/// One term `coeff · ∏ factors` of a [`MonomialExpr`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialTerm {
    pub coeff: BigInt,
    pub factors: Vec<ElementaryFactor>,
}

/// An integer combination of products of elementary monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialExpr {
    pub n: usize,
    pub terms: Vec<MonomialTerm>,
}

impl MonomialExpr {
    pub fn evaluate(&self, field: &OrigamiField) -> Result<CycNum, OrigamiError> {
        if field.n() != self.n {
            return Err(GeometryError::OrderMismatch {
                left: field.n(),
                right: self.n,
            }
            .into());
        }
        let mut total = field.zero();
        for term in &self.terms {
            let mut prod = field.one();
            for f in &term.factors {
                prod = &prod * &f.value(field)?;
            }
            total = &total + &prod.scale_int(&term.coeff);
        }
        Ok(total)
    }

    pub fn factor_count(&self) -> usize {
        self.terms.iter().map(|t| t.factors.len()).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ExprRepr::from(self)).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        let repr: ExprRepr = serde_json::from_str(text).map_err(|e| e.to_string())?;
        repr.try_into()
    }
}

impl fmt::Display for MonomialExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", t.coeff)?;
            for fac in &t.factors {
                write!(f, "*M({},{})", fac.u.k(), fac.v.k())?;
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct FactorRepr {
    u: usize,
    v: usize,
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    coeff: serde_json::Number,
    factors: Vec<FactorRepr>,
}

#[derive(Serialize, Deserialize)]
struct ExprRepr {
    n: usize,
    terms: Vec<TermRepr>,
}

impl From<&MonomialExpr> for ExprRepr {
    fn from(e: &MonomialExpr) -> Self {
        Self {
            n: e.n,
            terms: e
                .terms
                .iter()
                .map(|t| TermRepr {
                    coeff: t.coeff.to_string().parse().expect("integer literal"),
                    factors: t
                        .factors
                        .iter()
                        .map(|f| FactorRepr {
                            u: f.u.k(),
                            v: f.v.k(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

impl TryFrom<ExprRepr> for MonomialExpr {
    type Error = String;

    fn try_from(r: ExprRepr) -> Result<Self, String> {
        if r.n < 3 {
            return Err(format!("n = {} is too small", r.n));
        }
        let mut terms = Vec::with_capacity(r.terms.len());
        for t in r.terms {
            let coeff: BigInt = t
                .coeff
                .to_string()
                .parse()
                .map_err(|_| format!("coefficient {} is not an integer", t.coeff))?;
            let mut factors = Vec::with_capacity(t.factors.len());
            for f in t.factors {
                let u = Angle::new(r.n, f.u).map_err(|e| e.to_string())?;
                let v = Angle::new(r.n, f.v).map_err(|e| e.to_string())?;
                if u == v {
                    return Err(format!("factor with equal angles {}", f.u));
                }
                factors.push(ElementaryFactor { u, v });
            }
            terms.push(MonomialTerm { coeff, factors });
        }
        Ok(Self { n: r.n, terms })
    }
}

/// Expresses `x ∈ R(U_n)` as an integer combination of elementary monomial products.
///
/// The denominator `D` of `x` is split into primes `p | n`, each inverted by
/// its [`QuotientCertificate`]; the remaining integral element
/// `z = M·D·x` (with `M` the product of certificate multipliers) is spelled out
/// on powers of `ζ_n = −I_{1,2}(1,0)`.
pub fn decompose(field: &OrigamiField, x: &CycNum) -> Result<MonomialExpr, OrigamiError> {
    let n = field.n();
    let membership = ring_membership(field, x);
    if !membership.is_constructible(n) {
        return Err(OrigamiError::NotConstructible(format!(
            "{x} is {}, not constructible",
            membership.verdict(n)
        )));
    }
    let coords = membership
        .coords()
        .expect("constructible implies coordinates");
    let den = coords
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));

    let mut remaining = den.clone();
    let mut shared = Vec::new();
    let mut multiplier = field.one();
    for p in prime_factors_usize(n) {
        let bp = BigInt::from(p);
        let mut e = 0u32;
        while (&remaining % &bp).is_zero() {
            remaining /= &bp;
            e += 1;
        }
        if e == 0 {
            continue;
        }
        let cert = inverse_prime_product(n, p)?;
        for _ in 0..e {
            shared.extend(cert.factors());
        }
        multiplier = &multiplier * &cert.multiplier.pow(e);
    }
    debug_assert!(remaining.is_one());

    let z = &multiplier * &x.scale_int(&den);
    let z_coords = z.subfield_coords(n).expect("z lies in Q(ζ_n)");
    let zeta = neg_zeta_factor(n);
    let mut terms = Vec::new();
    for (i, c) in z_coords.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        debug_assert!(c.is_integer());
        let mut coeff = c.to_integer();
        if i % 2 == 1 {
            coeff = -coeff;
        }
        let mut factors = shared.clone();
        factors.extend(std::iter::repeat_n(zeta, i));
        terms.push(MonomialTerm { coeff, factors });
    }
    Ok(MonomialExpr { n, terms })
}

/// `sin(π(a − c)) / sin(π(a − b))` for rational `a`, `b`, `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SineQuotient {
    pub a: BigRational,
    pub b: BigRational,
    pub c: BigRational,
}

impl SineQuotient {
    pub fn new(a: BigRational, b: BigRational, c: BigRational) -> Result<Self, OrigamiError> {
        if (&a - &b).is_integer() {
            return Err(OrigamiError::NotConstructible(
                "sine-quotient denominator vanishes (a ≡ b mod 1)".into(),
            ));
        }
        Ok(Self { a, b, c })
    }

    pub fn value(&self) -> f64 {
        let pi = std::f64::consts::PI;
        let diff = |x: &BigRational, y: &BigRational| {
            // reduce mod 2 before converting so large inputs keep their precision
            let d = x - y;
            let two = BigRational::from_integer(2.into());
            let r = &d - &(&d / &two).floor() * &two;
            r.to_f64().unwrap_or(f64::NAN)
        };
        (pi * diff(&self.a, &self.c)).sin() / (pi * diff(&self.a, &self.b)).sin()
    }

    /// The exact pairing quotient `⟨u,w⟩/⟨u,v⟩` with `u = e^{iπa}` etc., when
    /// every denominator divides `n`.
    pub fn exact(&self, field: &OrigamiField) -> Option<CycNum> {
        let n = BigInt::from(field.n());
        let exp = |x: &BigRational| -> Option<i64> {
            let e = x * BigRational::from_integer(n.clone());
            e.is_integer().then(|| e.to_integer().to_i64()).flatten()
        };
        let rep = |e: i64| CycNum::zeta_pow(field.field(), e);
        let (u, v, w) = (rep(exp(&self.a)?), rep(exp(&self.b)?), rep(exp(&self.c)?));
        pairing(&u, &w).checked_div(&pairing(&u, &v)).ok()
    }
}

/// Numeric check of the monomial shape: a product of elementary factors
/// equals the product of their sine-quotients times `e^{iπ Σ v_k / n}`.
pub fn monomial_polar_form(factors: &[ElementaryFactor]) -> Complex64 {
    let (mut t, mut phase) = (1.0f64, 0i64);
    for f in factors {
        t *= f.sine_quotient().value();
        phase += f.v.k() as i64;
    }
    let n = factors.first().map_or(1, |f| f.u.n()) as f64;
    Complex64::from_polar(t, std::f64::consts::PI * phase as f64 / n)
}
