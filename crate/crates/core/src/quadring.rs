//! Exact arithmetic in the quadratic integer ring Z[√D] and its fraction
//! field Q(√D).
//!
//! For square-free D the ring of integers of Q(√D) is
//!
//! ```text
//!   { a + b√D : a, b ∈ Z }                      when D ≡ 2, 3 (mod 4)
//!   { (a + b√D)/2 : a ≡ b (mod 2) }             when D ≡ 1 (mod 4)
//! ```
//!
//! [`QuadInt`] represents ring elements with unbounded integer coordinates
//! and denominator 1 or 2; a denominator-2 element always has both
//! coordinates odd (even/even pairs are reduced on construction).
//! [`QuadRational`] carries exact rational coordinates and provides the
//! single ring-membership predicate (denominator clearing plus parity)
//! that every integrality test in the crate goes through.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::nt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RingError {
    #[error("D = {0} is divisible by a prime square")]
    NotSquareFree(i64),
    #[error("D = {0} does not define a quadratic ring")]
    DegenerateD(i64),
    #[error("not a ring element: {0}")]
    NotInRing(String),
    #[error("not divisible: {0}")]
    NotDivisible(String),
}

/// The ambient ring: a square-free D together with its mod-4 class.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct RingContext {
    d: i64,
    half: bool,
}

impl RingContext {
    pub fn new(d: i64) -> Result<Self, RingError> {
        if d == 0 || d == 1 {
            return Err(RingError::DegenerateD(d));
        }
        if !nt::is_square_free(d) {
            return Err(RingError::NotSquareFree(d));
        }
        Ok(RingContext { d, half: d.rem_euclid(4) == 1 })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    /// Residue of D mod 4; square-free D is never 0 mod 4.
    pub fn d_mod4(&self) -> u8 {
        self.d.rem_euclid(4) as u8
    }

    /// True iff the ring contains half-integers, i.e. D ≡ 1 (mod 4).
    pub fn half_integers(&self) -> bool {
        self.half
    }

    /// Field discriminant: D for D ≡ 1 (mod 4), else 4D.
    pub fn discriminant(&self) -> i64 {
        if self.half {
            self.d
        } else {
            4 * self.d
        }
    }

    pub fn big_d(&self) -> BigInt {
        BigInt::from(self.d)
    }

    /// Human-readable integral basis, e.g. `a+b√10` or `(a+b√5)/2, a≡b (mod 2)`.
    pub fn basis_description(&self) -> String {
        if self.half {
            format!("(a+b√{})/2 with a ≡ b (mod 2)", self.d)
        } else {
            format!("a+b√{}", self.d)
        }
    }
}

impl fmt::Debug for RingContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z[√{}]", self.d)
    }
}

/// An element (x + y√D)/den of the ring of integers, den ∈ {1, 2}.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadInt {
    ctx: RingContext,
    x: BigInt,
    y: BigInt,
    den: u8,
}

impl QuadInt {
    /// Canonicalizing constructor. A den-2 element needs a half-integer ring
    /// and equal parities; the even/even case reduces to den 1.
    pub fn new(
        ctx: RingContext,
        x: impl Into<BigInt>,
        y: impl Into<BigInt>,
        den: u8,
    ) -> Result<Self, RingError> {
        let (x, y) = (x.into(), y.into());
        match den {
            1 => Ok(QuadInt { ctx, x, y, den: 1 }),
            2 => {
                if !ctx.half_integers() {
                    return Err(RingError::NotInRing(format!(
                        "({x}+{y}√{})/2: D = {} is not 1 mod 4",
                        ctx.d(),
                        ctx.d()
                    )));
                }
                if x.is_even() && y.is_even() {
                    Ok(QuadInt { ctx, x: x / 2, y: y / 2, den: 1 })
                } else if x.is_odd() && y.is_odd() {
                    Ok(QuadInt { ctx, x, y, den: 2 })
                } else {
                    Err(RingError::NotInRing(format!(
                        "({x}+{y}√{})/2: coordinates of opposite parity",
                        ctx.d()
                    )))
                }
            }
            _ => Err(RingError::NotInRing(format!("denominator {den} not in {{1,2}}"))),
        }
    }

    /// Element x + y√D (denominator 1), always a ring member.
    pub fn integral(ctx: RingContext, x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        QuadInt { ctx, x: x.into(), y: y.into(), den: 1 }
    }

    pub fn from_int(ctx: RingContext, n: impl Into<BigInt>) -> Self {
        Self::integral(ctx, n, 0)
    }

    pub fn zero(ctx: RingContext) -> Self {
        Self::from_int(ctx, 0)
    }

    pub fn one(ctx: RingContext) -> Self {
        Self::from_int(ctx, 1)
    }

    pub fn sqrt_d(ctx: RingContext) -> Self {
        Self::integral(ctx, 0, 1)
    }

    // Internal: reduce (x + y√D)/den with den a power of two to canonical form.
    fn reduce(ctx: RingContext, mut x: BigInt, mut y: BigInt, mut den: u32) -> Self {
        while den > 1 && x.is_even() && y.is_even() {
            x /= 2;
            y /= 2;
            den /= 2;
        }
        assert!(
            den <= 2,
            "non-ring intermediate ({x}+{y}√{})/{den}; ring arithmetic is closed",
            ctx.d()
        );
        if den == 2 {
            debug_assert!(ctx.half_integers() && x.is_odd() && y.is_odd());
        }
        QuadInt { ctx, x, y, den: den as u8 }
    }

    pub fn ctx(&self) -> RingContext {
        self.ctx
    }

    pub fn x(&self) -> &BigInt {
        &self.x
    }

    pub fn y(&self) -> &BigInt {
        &self.y
    }

    pub fn den(&self) -> u8 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den == 1 && self.x.is_one() && self.y.is_zero()
    }

    /// True iff the element is a rational integer.
    pub fn is_integer(&self) -> bool {
        self.den == 1 && self.y.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        QuadInt { ctx: self.ctx, x: self.x.clone(), y: -&self.y, den: self.den }
    }

    /// Trace 2x/den, always a rational integer.
    pub fn trace(&self) -> BigInt {
        if self.den == 2 {
            self.x.clone()
        } else {
            2 * &self.x
        }
    }

    /// Norm (x² − Dy²)/den², always a rational integer.
    pub fn norm(&self) -> BigInt {
        let n = &self.x * &self.x - self.ctx.big_d() * &self.y * &self.y;
        if self.den == 2 {
            debug_assert!((&n % BigInt::from(4)).is_zero());
            n / 4
        } else {
            n
        }
    }

    pub fn is_unit(&self) -> bool {
        self.norm().abs().is_one()
    }

    /// True iff `a / self` lies in the ring; `self` must be nonzero.
    pub fn divides(&self, a: &QuadInt) -> bool {
        assert!(!self.is_zero(), "division by zero element");
        (QuadRational::from(a) / QuadRational::from(self)).is_ring_element()
    }

    pub fn div_exact(&self, a: &QuadInt) -> Result<QuadInt, RingError> {
        assert!(!self.is_zero(), "division by zero element");
        (QuadRational::from(a) / QuadRational::from(self))
            .to_quad_int()
            .ok_or_else(|| RingError::NotDivisible(format!("{self} does not divide {a}")))
    }

    /// Non-negative integer power.
    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.ctx);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Integer power of a unit (negative exponents use the conjugate inverse).
    pub fn unit_pow(&self, e: i64) -> Self {
        if e >= 0 {
            return self.pow(e as u64);
        }
        let n = self.norm();
        assert!(n.abs().is_one(), "unit_pow on non-unit");
        let inv = if n.is_one() { self.conjugate() } else { -&self.conjugate() };
        inv.pow(e.unsigned_abs())
    }

    /// Exact comparison with 0 of the real value x + y√D (D > 0 assumed
    /// positive for mixed signs; purely rational parts work for any D).
    pub fn is_positive_value(&self) -> bool {
        let (xs, ys) = (self.x.sign(), self.y.sign());
        use num_bigint::Sign::*;
        match (xs, ys) {
            (NoSign, NoSign) => false,
            (Plus | NoSign, Plus | NoSign) => true,
            (Minus | NoSign, Minus | NoSign) => false,
            (Plus, Minus) => &self.x * &self.x > self.ctx.big_d() * &self.y * &self.y,
            (Minus, Plus) => &self.x * &self.x < self.ctx.big_d() * &self.y * &self.y,
            _ => unreachable!(),
        }
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = |f: &mut fmt::Formatter<'_>| -> fmt::Result {
            if self.y.is_zero() {
                return write!(f, "{}", self.x);
            }
            if !self.x.is_zero() {
                write!(f, "{}", self.x)?;
                if self.y.is_positive() {
                    write!(f, "+")?;
                }
            }
            if self.y.is_one() {
                write!(f, "√{}", self.ctx.d())
            } else if (-&self.y).is_one() {
                write!(f, "-√{}", self.ctx.d())
            } else {
                write!(f, "{}√{}", self.y, self.ctx.d())
            }
        };
        if self.den == 2 {
            write!(f, "(")?;
            body(f)?;
            write!(f, ")/2")
        } else {
            body(f)
        }
    }
}

impl fmt::Debug for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

macro_rules! same_ring {
    ($a:expr, $b:expr) => {
        assert!($a.ctx == $b.ctx, "mixed ring contexts: {:?} vs {:?}", $a.ctx, $b.ctx)
    };
}

impl Add for &QuadInt {
    type Output = QuadInt;
    fn add(self, rhs: &QuadInt) -> QuadInt {
        same_ring!(self, rhs);
        let (l, r) = (u32::from(self.den), u32::from(rhs.den));
        let den = l.lcm(&r);
        let (sl, sr) = (den / l, den / r);
        QuadInt::reduce(
            self.ctx,
            &self.x * sl + &rhs.x * sr,
            &self.y * sl + &rhs.y * sr,
            den,
        )
    }
}

impl Sub for &QuadInt {
    type Output = QuadInt;
    fn sub(self, rhs: &QuadInt) -> QuadInt {
        self + &(-rhs)
    }
}

impl Mul for &QuadInt {
    type Output = QuadInt;
    fn mul(self, rhs: &QuadInt) -> QuadInt {
        same_ring!(self, rhs);
        let d = self.ctx.big_d();
        let x = &self.x * &rhs.x + &d * &self.y * &rhs.y;
        let y = &self.x * &rhs.y + &self.y * &rhs.x;
        QuadInt::reduce(self.ctx, x, y, u32::from(self.den) * u32::from(rhs.den))
    }
}

impl Neg for &QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        QuadInt { ctx: self.ctx, x: -&self.x, y: -&self.y, den: self.den }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QuadInt {
            type Output = QuadInt;
            fn $m(self, rhs: QuadInt) -> QuadInt {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        -&self
    }
}

/// An element x + y√D of the fraction field Q(√D), exact rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct QuadRational {
    ctx: RingContext,
    x: BigRational,
    y: BigRational,
}

impl QuadRational {
    pub fn new(ctx: RingContext, x: BigRational, y: BigRational) -> Self {
        QuadRational { ctx, x, y }
    }

    pub fn from_ints(ctx: RingContext, x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        QuadRational {
            ctx,
            x: BigRational::from_integer(x.into()),
            y: BigRational::from_integer(y.into()),
        }
    }

    /// (x + y√D)/den as an exact field element.
    pub fn from_coords_over(
        ctx: RingContext,
        x: impl Into<BigInt>,
        y: impl Into<BigInt>,
        den: impl Into<BigInt>,
    ) -> Self {
        let den: BigInt = den.into();
        QuadRational {
            ctx,
            x: BigRational::new(x.into(), den.clone()),
            y: BigRational::new(y.into(), den),
        }
    }

    pub fn zero(ctx: RingContext) -> Self {
        Self::from_ints(ctx, 0, 0)
    }

    pub fn one(ctx: RingContext) -> Self {
        Self::from_ints(ctx, 1, 0)
    }

    pub fn ctx(&self) -> RingContext {
        self.ctx
    }

    pub fn x(&self) -> &BigRational {
        &self.x
    }

    pub fn y(&self) -> &BigRational {
        &self.y
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        QuadRational { ctx: self.ctx, x: self.x.clone(), y: -&self.y }
    }

    pub fn norm(&self) -> BigRational {
        let d = BigRational::from_integer(self.ctx.big_d());
        &self.x * &self.x - d * &self.y * &self.y
    }

    pub fn inverse(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        let n = self.norm();
        QuadRational { ctx: self.ctx, x: &self.x / &n, y: -&self.y / &n }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        QuadRational { ctx: self.ctx, x: &self.x * r, y: &self.y * r }
    }

    /// The ring-membership predicate: clear denominators, then check parity.
    /// An element is integral iff it is x + y√D with integer x, y, or
    /// (x + y√D)/2 with x, y odd integers in a half-integer ring.
    pub fn is_ring_element(&self) -> bool {
        let (dx, dy) = (self.x.denom(), self.y.denom());
        let l = dx.lcm(dy);
        if l.is_one() {
            return true;
        }
        if l == BigInt::from(2) && self.ctx.half_integers() {
            let x2 = (&self.x * BigRational::from_integer(BigInt::from(2))).to_integer();
            let y2 = (&self.y * BigRational::from_integer(BigInt::from(2))).to_integer();
            return x2.is_odd() && y2.is_odd();
        }
        false
    }

    pub fn to_quad_int(&self) -> Option<QuadInt> {
        if !self.is_ring_element() {
            return None;
        }
        if self.x.is_integer() && self.y.is_integer() {
            Some(QuadInt::integral(self.ctx, self.x.to_integer(), self.y.to_integer()))
        } else {
            let two = BigRational::from_integer(BigInt::from(2));
            let x2 = (&self.x * &two).to_integer();
            let y2 = (&self.y * &two).to_integer();
            Some(QuadInt::new(self.ctx, x2, y2, 2).expect("checked membership"))
        }
    }
}

impl From<&QuadInt> for QuadRational {
    fn from(q: &QuadInt) -> Self {
        QuadRational::from_coords_over(q.ctx, q.x.clone(), q.y.clone(), i64::from(q.den))
    }
}

impl From<QuadInt> for QuadRational {
    fn from(q: QuadInt) -> Self {
        (&q).into()
    }
}

impl fmt::Display for QuadRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y.is_zero() {
            return write!(f, "{}", self.x);
        }
        if !self.x.is_zero() {
            write!(f, "{}", self.x)?;
            if self.y.is_positive() {
                write!(f, "+")?;
            }
        }
        write!(f, "{}√{}", self.y, self.ctx.d())
    }
}

impl fmt::Debug for QuadRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Add for &QuadRational {
    type Output = QuadRational;
    fn add(self, rhs: &QuadRational) -> QuadRational {
        same_ring!(self, rhs);
        QuadRational { ctx: self.ctx, x: &self.x + &rhs.x, y: &self.y + &rhs.y }
    }
}

impl Sub for &QuadRational {
    type Output = QuadRational;
    fn sub(self, rhs: &QuadRational) -> QuadRational {
        same_ring!(self, rhs);
        QuadRational { ctx: self.ctx, x: &self.x - &rhs.x, y: &self.y - &rhs.y }
    }
}

impl Mul for &QuadRational {
    type Output = QuadRational;
    fn mul(self, rhs: &QuadRational) -> QuadRational {
        same_ring!(self, rhs);
        let d = BigRational::from_integer(self.ctx.big_d());
        QuadRational {
            ctx: self.ctx,
            x: &self.x * &rhs.x + &d * &self.y * &rhs.y,
            y: &self.x * &rhs.y + &self.y * &rhs.x,
        }
    }
}

impl std::ops::Div for &QuadRational {
    type Output = QuadRational;
    fn div(self, rhs: &QuadRational) -> QuadRational {
        self * &rhs.inverse()
    }
}

impl Neg for &QuadRational {
    type Output = QuadRational;
    fn neg(self) -> QuadRational {
        QuadRational { ctx: self.ctx, x: -&self.x, y: -&self.y }
    }
}

macro_rules! forward_owned_rat {
    ($tr:ident, $m:ident) => {
        impl $tr for QuadRational {
            type Output = QuadRational;
            fn $m(self, rhs: QuadRational) -> QuadRational {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned_rat!(Add, add);
forward_owned_rat!(Sub, sub);
forward_owned_rat!(Mul, mul);

impl std::ops::Div for QuadRational {
    type Output = QuadRational;
    fn div(self, rhs: QuadRational) -> QuadRational {
        &self / &rhs
    }
}

impl Neg for QuadRational {
    type Output = QuadRational;
    fn neg(self) -> QuadRational {
        -&self
    }
}
