//! Elementary number-theoretic helpers: primality, factoring, square-free
//! tests, integer square roots and canonical Bezout pairs.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, Zero};

/// Deterministic Miller-Rabin for `u64` (the usual 12-witness set).
pub fn is_prime_u64(n: u64) -> bool {
    match n {
        0 | 1 => false,
        2 | 3 => true,
        _ if n % 2 == 0 => false,
        _ => {
            let mut d = n - 1;
            let mut r = 0u32;
            while d % 2 == 0 {
                d /= 2;
                r += 1;
            }
            'witness: for &a in &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
                if a >= n {
                    continue;
                }
                let mut x = pow_mod(a, d, n);
                if x == 1 || x == n - 1 {
                    continue;
                }
                for _ in 0..r - 1 {
                    x = mul_mod(x, x, n);
                    if x == n - 1 {
                        continue 'witness;
                    }
                }
                return false;
            }
            true
        }
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Brent-cycle Pollard rho; `n` must be odd composite and > 3.
fn rho(n: u64) -> u64 {
    for c in 1..64 {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
    }
    unreachable!("rho failed on {n}")
}

/// Full factorization of `n > 0` as (prime, multiplicity) pairs, ascending.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    let mut stack = vec![n];
    let mut rest = Vec::new();
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            rest.push(m);
        } else {
            let d = rho(m);
            stack.push(d);
            stack.push(m / d);
        }
    }
    rest.sort_unstable();
    for p in rest {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out.sort_unstable();
    out
}

/// True iff no prime square divides `d` (sign ignored; 0 is not square-free).
pub fn is_square_free(d: i64) -> bool {
    if d == 0 {
        return false;
    }
    factor_u64(d.unsigned_abs()).iter().all(|&(_, e)| e == 1)
}

/// `Some(r)` with `r*r == n` when `n` is a perfect square, else `None`.
pub fn perfect_square(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// Bezout pair for `a*x - m*y = 1` with `gcd(a, m) = 1`, canonicalized to the
/// solution of minimal `|x|` (positive `x` on ties).
pub fn bezout_min_x(a: &BigInt, m: &BigInt) -> (BigInt, BigInt) {
    assert!(!m.is_zero(), "bezout_min_x needs m != 0");
    let eg = a.extended_gcd(m);
    assert!(eg.gcd.is_one(), "bezout_min_x needs gcd(a, m) = 1");
    // a*eg.x + m*eg.y = 1, so x0 = eg.x solves a*x - m*(-eg.y) = 1.
    let mabs = m.abs();
    let x0 = eg.x.mod_floor(&mabs);
    let x1 = &x0 - &mabs;
    let x = if x0.abs() < x1.abs() || (x0.abs() == x1.abs() && x0.is_positive()) {
        x0
    } else {
        x1
    };
    let y = (a * &x - BigInt::one()) / m;
    debug_assert_eq!(a * &x - m * &y, BigInt::one());
    (x, y)
}
