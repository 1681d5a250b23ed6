//! Angles, lines and the exact intersection operator.
//!
//! For distinct angle classes `u`, `v` the intersection of the line through
//! `p` with direction `u` and the line through `q` with direction `v` is
//!
//! ```text
//! I_{u,v}(p, q) = ⟨u,p⟩/⟨u,v⟩ · v + ⟨v,q⟩/⟨v,u⟩ · u,     ⟨x,y⟩ = x y* − x* y.
//! ```
//!
//! An angle class is stored as a residue `k mod n`, standing for
//! `e^{iπk/n}` up to sign; its representative is `ζ_{2n}^k`.

use std::sync::{Arc, OnceLock};

use num_complex::Complex64;

use crate::cyclotomic::{CycNum, CyclotomicField};
use crate::literal::parse_literal;
use crate::{GeometryError, LiteralError, OrigamiError};

/// Threshold on `|sin(angle difference)|` below which the float path refuses.
pub const NEAR_PARALLEL: f64 = 1e-12;

/// A class in the angle group `U_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Angle {
    n: usize,
    k: usize,
}

impl Angle {
    pub fn new(n: usize, k: usize) -> Result<Self, GeometryError> {
        if k >= n {
            return Err(GeometryError::AngleOutOfRange { n, k });
        }
        Ok(Self { n, k })
    }

    /// Angle with residue `k mod n` (any integer `k`).
    pub fn wrapping(n: usize, k: i64) -> Self {
        Self {
            n,
            k: k.rem_euclid(n as i64) as usize,
        }
    }

    pub fn n(self) -> usize {
        self.n
    }

    pub fn k(self) -> usize {
        self.k
    }

    /// Group product: adding the angles.
    pub fn rotate(self, w: Angle) -> Angle {
        debug_assert_eq!(self.n, w.n);
        Angle::wrapping(self.n, (self.k + w.k) as i64)
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(1.0, std::f64::consts::PI * self.k as f64 / self.n as f64)
    }
}

/// Precomputed constants for one ordered angle pair:
/// `I_{u,v}(p,q) = ⟨u,p⟩·along_v + ⟨v,q⟩·along_u`.
#[derive(Clone, Debug)]
pub struct PairKernel {
    pub u: CycNum,
    pub v: CycNum,
    /// `v / ⟨u,v⟩`
    pub along_v: CycNum,
    /// `u / ⟨v,u⟩`
    pub along_u: CycNum,
}

impl PairKernel {
    fn new(u: CycNum, v: CycNum) -> Self {
        let uv = pairing(&u, &v);
        let inv = uv
            .inv()
            .expect("distinct angle classes have nonzero pairing");
        let along_v = &v * &inv;
        let along_u = -(&u * &inv);
        Self {
            u,
            v,
            along_v,
            along_u,
        }
    }

    pub fn apply(&self, p: &CycNum, q: &CycNum) -> CycNum {
        &(&pairing(&self.u, p) * &self.along_v) + &(&pairing(&self.v, q) * &self.along_u)
    }
}

/// The ambient field `Q(ζ_{2n})` for the angle group `U_n`, with lazily
/// built intersection kernels for every ordered pair of distinct angles.
#[derive(Debug)]
pub struct OrigamiField {
    n: usize,
    field: Arc<CyclotomicField>,
    kernels: Vec<OnceLock<PairKernel>>,
}

impl OrigamiField {
    /// Any `n >= 2`; operations that need three angles check separately.
    pub fn new(n: usize) -> Arc<Self> {
        assert!(n >= 2, "angle group order must be at least 2");
        Arc::new(Self {
            n,
            field: CyclotomicField::new(2 * n),
            kernels: (0..n * n).map(|_| OnceLock::new()).collect(),
        })
    }

    /// Like [`OrigamiField::new`] but enforcing `n >= 3`.
    pub fn checked(n: usize) -> Result<Arc<Self>, OrigamiError> {
        if n < 3 {
            return Err(OrigamiError::OrderTooSmall(n));
        }
        Ok(Self::new(n))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn angle(&self, k: usize) -> Result<Angle, GeometryError> {
        Angle::new(self.n, k)
    }

    pub fn angles(&self) -> impl Iterator<Item = Angle> + '_ {
        (0..self.n).map(|k| Angle { n: self.n, k })
    }

    /// `ζ_{2n}^k`, the representative of the angle class.
    pub fn representative(&self, a: Angle) -> CycNum {
        CycNum::zeta_pow(&self.field, a.k as i64)
    }

    /// `ζ_n^k = ζ_{2n}^{2k}`.
    pub fn zeta_n_pow(&self, k: i64) -> CycNum {
        CycNum::zeta_pow(&self.field, 2 * k)
    }

    pub fn zero(&self) -> CycNum {
        CycNum::zero(&self.field)
    }

    pub fn one(&self) -> CycNum {
        CycNum::one(&self.field)
    }

    pub fn int(&self, v: i64) -> CycNum {
        CycNum::from_integer(&self.field, v)
    }

    pub fn parse(&self, text: &str) -> Result<CycNum, LiteralError> {
        parse_literal(text, &self.field)
    }

    fn check_pair(&self, u: Angle, v: Angle) -> Result<(), GeometryError> {
        for a in [u, v] {
            if a.n != self.n {
                return Err(GeometryError::OrderMismatch {
                    left: self.n,
                    right: a.n,
                });
            }
            if a.k >= self.n {
                return Err(GeometryError::AngleOutOfRange { n: a.n, k: a.k });
            }
        }
        if u.k == v.k {
            return Err(GeometryError::EqualAngles(u.k));
        }
        Ok(())
    }

    fn check_point(&self, p: &CycNum) -> Result<(), GeometryError> {
        if p.conductor() != self.field.conductor() {
            return Err(GeometryError::Field(crate::CycError::ConductorMismatch {
                left: self.field.conductor(),
                right: p.conductor(),
            }));
        }
        Ok(())
    }

    pub fn kernel(&self, u: Angle, v: Angle) -> Result<&PairKernel, GeometryError> {
        self.check_pair(u, v)?;
        Ok(self.kernels[u.k * self.n + v.k]
            .get_or_init(|| PairKernel::new(self.representative(u), self.representative(v))))
    }

    /// The intersection point `I_{u,v}(p, q)`.
    pub fn intersect(
        &self,
        u: Angle,
        v: Angle,
        p: &CycNum,
        q: &CycNum,
    ) -> Result<CycNum, GeometryError> {
        self.check_point(p)?;
        self.check_point(q)?;
        Ok(self.kernel(u, v)?.apply(p, q))
    }

    /// Projection of `p` onto the line `{r v}` in direction `u`.
    pub fn project(&self, u: Angle, v: Angle, p: &CycNum) -> Result<CycNum, GeometryError> {
        self.intersect(u, v, p, &self.zero())
    }

    /// The real-linear maps `A`, `B` with `I_{u,v}(p,q) = A(p) + B(q)`.
    pub fn convexity_maps(&self, u: Angle, v: Angle) -> Result<LinearMapPair, GeometryError> {
        let kernel = self.kernel(u, v)?;
        let (ur, vr) = (&kernel.u, &kernel.v);
        // ⟨u,p⟩ along_v = (u p* − u* p) along_v
        let a_coeff = (-(&ur.conj() * &kernel.along_v), ur * &kernel.along_v);
        let b_coeff = (-(&vr.conj() * &kernel.along_u), vr * &kernel.along_u);
        Ok(LinearMapPair { a_coeff, b_coeff })
    }

    pub fn line(&self, anchor: CycNum, direction: Angle) -> Line {
        Line {
            direction_rep: self.representative(direction),
            anchor,
            direction,
        }
    }
}

/// `⟨x, y⟩ = x y* − x* y`; purely imaginary and antisymmetric.
pub fn pairing(x: &CycNum, y: &CycNum) -> CycNum {
    let a = x * &y.conj();
    &a - &a.conj()
}

/// The line `{anchor + r·u : r real}`.
#[derive(Clone, Debug)]
pub struct Line {
    pub anchor: CycNum,
    pub direction: Angle,
    direction_rep: CycNum,
}

impl Line {
    pub fn contains(&self, q: &CycNum) -> bool {
        pairing(&(q - &self.anchor), &self.direction_rep).is_zero()
    }
}

/// Real-linear maps `A: p ↦ a₁p + b₁p*` and `B: q ↦ a₂q + b₂q*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMapPair {
    pub a_coeff: (CycNum, CycNum),
    pub b_coeff: (CycNum, CycNum),
}

impl LinearMapPair {
    pub fn apply_a(&self, p: &CycNum) -> CycNum {
        &(&self.a_coeff.0 * p) + &(&self.a_coeff.1 * &p.conj())
    }

    pub fn apply_b(&self, q: &CycNum) -> CycNum {
        &(&self.b_coeff.0 * q) + &(&self.b_coeff.1 * &q.conj())
    }

    pub fn apply(&self, p: &CycNum, q: &CycNum) -> CycNum {
        &self.apply_a(p) + &self.apply_b(q)
    }

    /// `A + B` is the identity: `a₁ + a₂ = 1` and `b₁ + b₂ = 0`.
    pub fn sums_to_identity(&self) -> bool {
        (&self.a_coeff.0 + &self.b_coeff.0).is_one()
            && (&self.a_coeff.1 + &self.b_coeff.1).is_zero()
    }

    /// As a real 2×2 matrix, `p ↦ a p + b p*` has determinant `|a|² − |b|²`.
    pub fn determinants(&self) -> (CycNum, CycNum) {
        let det = |(a, b): &(CycNum, CycNum)| &(a * &a.conj()) - &(b * &b.conj());
        (det(&self.a_coeff), det(&self.b_coeff))
    }
}

fn pairing_f64(x: Complex64, y: Complex64) -> Complex64 {
    x * y.conj() - x.conj() * y
}

/// Floating-point intersection of `L_u(p)` and `L_v(q)` for unit directions `u`, `v`.
pub fn intersect_float(
    u: Complex64,
    v: Complex64,
    p: Complex64,
    q: Complex64,
) -> Result<Complex64, GeometryError> {
    let sin = (u / v).im / (u.norm() / v.norm());
    if sin.abs() < NEAR_PARALLEL {
        return Err(GeometryError::NearParallel(sin.abs()));
    }
    let uv = pairing_f64(u, v);
    Ok(pairing_f64(u, p) / uv * v + pairing_f64(v, q) / (-uv) * u)
}
