//! Exact 2×2 matrices over ring or field elements.

use std::fmt;

use crate::quadring::{QuadInt, QuadRational};

/// Entry types usable in [`Mat2`]: exact arithmetic plus conjugation.
pub trait Entry: Clone + PartialEq {
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn conj(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
}

impl Entry for QuadInt {
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn conj(&self) -> Self {
        self.conjugate()
    }
    fn one_like(&self) -> Self {
        QuadInt::one(self.ctx())
    }
    fn is_zero(&self) -> bool {
        QuadInt::is_zero(self)
    }
}

impl Entry for QuadRational {
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn conj(&self) -> Self {
        self.conjugate()
    }
    fn one_like(&self) -> Self {
        QuadRational::one(self.ctx())
    }
    fn is_zero(&self) -> bool {
        QuadRational::is_zero(self)
    }
}

/// Row-major 2×2 matrix with exact entries.
#[derive(Clone, PartialEq)]
pub struct Mat2<T> {
    e: [T; 4],
}

impl<T: Entry> Mat2<T> {
    pub fn new(m11: T, m12: T, m21: T, m22: T) -> Self {
        Mat2 { e: [m11, m12, m21, m22] }
    }

    /// 1-based entry access, `at(1,1)` through `at(2,2)`.
    pub fn at(&self, r: usize, c: usize) -> &T {
        assert!((1..=2).contains(&r) && (1..=2).contains(&c));
        &self.e[(r - 1) * 2 + (c - 1)]
    }

    pub fn entries(&self) -> &[T; 4] {
        &self.e
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let a = &self.e;
        let b = &rhs.e;
        Mat2::new(
            a[0].mul(&b[0]).add(&a[1].mul(&b[2])),
            a[0].mul(&b[1]).add(&a[1].mul(&b[3])),
            a[2].mul(&b[0]).add(&a[3].mul(&b[2])),
            a[2].mul(&b[1]).add(&a[3].mul(&b[3])),
        )
    }

    pub fn transpose(&self) -> Self {
        Mat2::new(self.e[0].clone(), self.e[2].clone(), self.e[1].clone(), self.e[3].clone())
    }

    pub fn entrywise_conj(&self) -> Self {
        Mat2::new(self.e[0].conj(), self.e[1].conj(), self.e[2].conj(), self.e[3].conj())
    }

    pub fn det(&self) -> T {
        self.e[0].mul(&self.e[3]).sub(&self.e[1].mul(&self.e[2]))
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(Entry::is_zero)
    }

    /// M·M = M, checked entrywise.
    pub fn is_idempotent(&self) -> bool {
        self.mul(self) == *self
    }

    /// For a singular nonzero 2×2 matrix, idempotence is equivalent to
    /// `m22 = 1 − m11`.
    pub fn trailing_entry_matches(&self) -> bool {
        self.e[3] == self.e[0].one_like().sub(&self.e[0])
    }
}

impl Mat2<QuadInt> {
    pub fn to_rational(&self) -> Mat2<QuadRational> {
        Mat2::new(
            (&self.e[0]).into(),
            (&self.e[1]).into(),
            (&self.e[2]).into(),
            (&self.e[3]).into(),
        )
    }
}

impl<T: Entry + fmt::Display> fmt::Display for Mat2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.e[0], self.e[1], self.e[2], self.e[3])
    }
}

impl<T: Entry + fmt::Display> fmt::Debug for Mat2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadring::RingContext;

    fn c10() -> RingContext {
        RingContext::new(10).unwrap()
    }

    fn qi(x: i64, y: i64) -> QuadInt {
        QuadInt::integral(c10(), x, y)
    }

    #[test]
    fn identity_is_idempotent() {
        let id = Mat2::new(qi(1, 0), qi(0, 0), qi(0, 0), qi(1, 0));
        assert!(id.is_idempotent());
    }

    #[test]
    fn known_idempotent_factor() {
        // a factor of A(3, 1+√10)
        let b = Mat2::new(qi(2, 2), qi(7, 1), qi(-6, 0), qi(-1, -2));
        assert!(b.is_idempotent());
        assert!(b.det().is_zero());
        assert!(b.trailing_entry_matches());
    }

    #[test]
    fn shear_is_not_idempotent() {
        let m = Mat2::new(qi(1, 0), qi(1, 0), qi(0, 0), qi(1, 0));
        assert!(!m.is_idempotent());
    }

    #[test]
    fn transpose_and_product() {
        let a = Mat2::new(qi(1, 1), qi(0, 2), qi(3, 0), qi(-1, 0));
        let b = Mat2::new(qi(0, 1), qi(2, 0), qi(1, -1), qi(0, 0));
        let ab_t = a.mul(&b).transpose();
        let bt_at = b.transpose().mul(&a.transpose());
        assert_eq!(ab_t, bt_at);
    }
}
