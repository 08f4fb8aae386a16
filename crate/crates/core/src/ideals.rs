//! Number-theoretic predicates: Kronecker symbol, the irreducible-but-not-
//! prime test for rational primes, and membership in I_p(D) and S_z.
//!
//! I_p(D) is the set of non-units z with z ∉ ⟨p⟩ such that zm ∈ ⟨p⟩ for some
//! m ∉ ⟨p⟩; equivalently, ⟨p, z⟩ is a non-principal ideal. Membership
//! reduces to three checks (z a non-unit, p ∤ z in the ring, p | ‖z‖): for
//! sufficiency take m = z̄, and necessity is the divisibility of the norm.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::nt;
use crate::pell::{enumerate_class_residues, solve_norm_equation};
use crate::quadring::{QuadInt, RingContext};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IdealError {
    #[error("{0} is not a prime number")]
    NotPrime(u64),
    #[error("invalid setting: {0}")]
    InvalidSetting(String),
}

/// Kronecker symbol (a/b), the full extension of the Legendre symbol to all
/// integer pairs (not both zero).
pub fn kronecker(a: &BigInt, b: &BigInt) -> i32 {
    if b.is_zero() {
        return if a.abs().is_one() { 1 } else { 0 };
    }
    if a.is_even() && b.is_even() {
        return 0;
    }
    let mut a = a.clone();
    let mut b = b.clone();
    let mut result = 1i32;
    if b.is_negative() {
        b = -b;
        if a.is_negative() {
            result = -result;
        }
    }
    // (a/2) per a mod 8, once for each factor of 2 in b
    let v2 = b.trailing_zeros().unwrap_or(0);
    if v2 > 0 {
        b >>= v2;
        if a.is_even() {
            return 0;
        }
        if v2 % 2 == 1 {
            let r = a.mod_floor(&BigInt::from(8));
            if r == BigInt::from(3) || r == BigInt::from(5) {
                result = -result;
            }
        }
    }
    // b is odd and positive; the usual binary Jacobi loop
    a = a.mod_floor(&b);
    let three = BigInt::from(3);
    let four = BigInt::from(4);
    let eight = BigInt::from(8);
    while !a.is_zero() {
        let v = a.trailing_zeros().unwrap_or(0);
        if v > 0 {
            a >>= v;
            if v % 2 == 1 {
                let r = b.mod_floor(&eight);
                if r == three || r == BigInt::from(5) {
                    result = -result;
                }
            }
        }
        if a.mod_floor(&four) == three && b.mod_floor(&four) == three {
            result = -result;
        }
        std::mem::swap(&mut a, &mut b);
        a = a.mod_floor(&b);
    }
    if b.is_one() {
        result
    } else {
        0
    }
}

/// Convenience overload for machine-sized arguments.
pub fn kronecker_i64(a: i64, b: i64) -> i32 {
    kronecker(&BigInt::from(a), &BigInt::from(b))
}

/// Status of a rational prime p relative to Z[√D].
///
/// `irreducible` means no ring element has norm ±p; `prime_in_ring` means
/// ⟨p⟩ is a prime ideal (p inert), decided by the Kronecker symbol of the
/// field discriminant at p (ramified and split cases both give a non-prime,
/// reducible-or-not p).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeStatus {
    pub p: u64,
    pub d: i64,
    pub irreducible: bool,
    pub prime_in_ring: bool,
}

impl PrimeStatus {
    /// The setting of interest: p irreducible but not prime.
    pub fn valid_setting(&self) -> bool {
        self.irreducible && !self.prime_in_ring
    }
}

/// True iff some ring element has norm n (integral lattice, plus half
/// elements with norm n when the ring has them: x² − Dy² = 4n, x, y odd).
fn norm_represented(ctx: &RingContext, n: &BigInt) -> bool {
    if !solve_norm_equation(ctx, n).is_empty() {
        return true;
    }
    if ctx.half_integers() {
        let four_n = BigInt::from(4) * n;
        let two = BigInt::from(2);
        for cls in solve_norm_equation(ctx, &four_n) {
            let odd_odd = (BigInt::one(), BigInt::one());
            if enumerate_class_residues(&cls, &two).contains(&odd_odd) {
                return true;
            }
        }
    }
    false
}

pub fn prime_status(p: u64, ctx: &RingContext) -> Result<PrimeStatus, IdealError> {
    if !nt::is_prime_u64(p) {
        return Err(IdealError::NotPrime(p));
    }
    let prime_in_ring = kronecker_i64(ctx.discriminant(), p as i64) == -1;
    let pb = BigInt::from(p);
    let irreducible = !norm_represented(ctx, &pb) && !norm_represented(ctx, &(-&pb));
    debug_assert!(!prime_in_ring || irreducible, "a prime element is irreducible");
    Ok(PrimeStatus { p, d: ctx.d(), irreducible, prime_in_ring })
}

/// Per-condition breakdown of the I_p(D) membership test; used for
/// diagnostic reporting regardless of whether the setting is valid.
#[derive(Debug, Clone)]
pub struct IpReport {
    pub norm: BigInt,
    pub p_divides_norm: bool,
    pub p_divides_z: bool,
    pub z_is_zero: bool,
    pub z_is_integer: bool,
    pub z_is_unit: bool,
}

impl IpReport {
    pub fn member(&self) -> bool {
        !self.z_is_zero && !self.z_is_unit && !self.p_divides_z && self.p_divides_norm
    }
}

pub fn ip_report(z: &QuadInt, p: u64) -> IpReport {
    let norm = z.norm();
    let p_elem = QuadInt::from_int(z.ctx(), p as i64);
    IpReport {
        p_divides_norm: (&norm % BigInt::from(p)).is_zero(),
        p_divides_z: p_elem.divides(z),
        z_is_zero: z.is_zero(),
        z_is_integer: z.is_integer(),
        z_is_unit: z.is_unit(),
        norm,
    }
}

/// z ∈ I_p(D): z is a non-unit with p ∤ z in the ring and p | ‖z‖.
/// Requires the valid setting (p irreducible, not prime).
pub fn in_ip(z: &QuadInt, p: u64) -> Result<bool, IdealError> {
    let st = prime_status(p, &z.ctx())?;
    if !st.valid_setting() {
        return Err(IdealError::InvalidSetting(format!(
            "p = {p} over Z[√{}]: irreducible = {}, prime = {}",
            z.ctx().d(),
            st.irreducible,
            st.prime_in_ring
        )));
    }
    Ok(ip_report(z, p).member())
}

/// m ∈ S_z = {m : m ∉ ⟨p⟩, zm ∈ ⟨p⟩}; requires z ∈ I_p(D).
pub fn in_sz(m: &QuadInt, z: &QuadInt, p: u64) -> Result<bool, IdealError> {
    if !in_ip(z, p)? {
        return Err(IdealError::InvalidSetting(format!(
            "z = {z} is not in I_{p}({})",
            z.ctx().d()
        )));
    }
    let p_elem = QuadInt::from_int(z.ctx(), p as i64);
    Ok(!p_elem.divides(m) && p_elem.divides(&(z * m)))
}
