//! Continued fractions for √D, fundamental units, and complete solution of
//! the generalized Pell equation x² − Dy² = N in the x + y√D lattice.
//!
//! Solutions are grouped into classes: orbits under multiplication by the
//! group of integral norm-one units {±U^j}, where U is the fundamental
//! automorph (the least solution > 1 of x² − Dy² = 1). Conjugate solutions
//! (x, −y) are kept in their own class when the orbits differ. For D < 0
//! the solution set is finite and classes are orbits under the torsion
//! units. The class lists returned by [`solve_norm_equation`] are complete,
//! which is what makes exhaustive refutations downstream genuine decisions.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeSet;

use crate::nt;
use crate::quadring::{QuadInt, RingContext};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PellError {
    #[error("D = {0} is negative: the unit group is finite (torsion only)")]
    ImaginaryRing(i64),
}

/// Continued-fraction expansion of √D: `a0` then the minimal period.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CfExpansion {
    pub a0: BigInt,
    pub period: Vec<BigInt>,
}

/// Continued fraction of √d for d ≥ 2 non-square.
pub fn cf_sqrt(d: i64) -> CfExpansion {
    assert!(d >= 2, "cf_sqrt needs d >= 2");
    let a0 = d.sqrt();
    assert!(a0 * a0 != d, "cf_sqrt needs non-square d");
    let (p0, q0) = (a0, d - a0 * a0);
    let (mut p, mut q) = (p0, q0);
    let mut period = Vec::new();
    loop {
        let a = (a0 + p) / q;
        period.push(BigInt::from(a));
        p = a * q - p;
        q = (d - p * p) / q;
        if (p, q) == (p0, q0) {
            break;
        }
    }
    CfExpansion { a0: BigInt::from(a0), period }
}

impl CfExpansion {
    /// Convergent h/k immediately before the period closes; h² − Dk² = (−1)^ℓ.
    pub fn period_end_convergent(&self) -> (BigInt, BigInt) {
        let mut h_prev = BigInt::one();
        let mut h = self.a0.clone();
        let mut k_prev = BigInt::zero();
        let mut k = BigInt::one();
        for a in &self.period[..self.period.len() - 1] {
            let h_next = a * &h + &h_prev;
            let k_next = a * &k + &k_prev;
            h_prev = h;
            h = h_next;
            k_prev = k;
            k = k_next;
        }
        (h, k)
    }
}

/// Fundamental unit of the x + y√D sublattice Z[√D] (always integral),
/// obtained from the continued fraction of √D; |norm| = 1.
fn lattice_fundamental_unit(ctx: &RingContext) -> QuadInt {
    let (h, k) = cf_sqrt(ctx.d()).period_end_convergent();
    QuadInt::integral(*ctx, h, k)
}

/// Fundamental unit > 1 of the maximal order; half-integral when the unit
/// index over Z[√D] is 3 (possible only for D ≡ 1 mod 4). |norm| = 1.
pub fn fundamental_unit(ctx: &RingContext) -> Result<QuadInt, PellError> {
    if ctx.d() < 0 {
        return Err(PellError::ImaginaryRing(ctx.d()));
    }
    let u1 = lattice_fundamental_unit(ctx);
    if !ctx.half_integers() {
        return Ok(u1);
    }
    // A half-integral unit ε has ε³ ∈ Z[√D]; recover ε from the trace of u1
    // via trace(ε³) = a³ − 3na, a = trace(ε), n = norm(ε) ∈ {±1}.
    let t = u1.trace();
    let c = t.cbrt();
    for n in [1i64, -1] {
        let lo = &c - 2;
        let mut a = lo;
        for _ in 0..5 {
            if a.is_positive() && &a * &a * &a - BigInt::from(3 * n) * &a == t {
                let b2 = (&a * &a - BigInt::from(4 * n)) / ctx.big_d();
                if (&a * &a - BigInt::from(4 * n)) == &b2 * ctx.big_d() {
                    if let Some(b) = nt::perfect_square(&b2) {
                        if b.is_positive() && a.is_odd() && b.is_odd() {
                            let eps = QuadInt::new(*ctx, a.clone(), b, 2).expect("odd/odd");
                            debug_assert_eq!(eps.pow(3), u1);
                            return Ok(eps);
                        }
                    }
                }
            }
            a += 1;
        }
    }
    Ok(u1)
}

/// Generator of the torsion unit group for D < 0: i for D = −1, a primitive
/// sixth root of unity for D = −3, and −1 otherwise.
pub fn torsion_generator(ctx: &RingContext) -> QuadInt {
    assert!(ctx.d() < 0, "torsion_generator is for imaginary rings");
    match ctx.d() {
        -1 => QuadInt::integral(*ctx, 0, 1),
        -3 => QuadInt::new(*ctx, 1, 1, 2).expect("D = -3 is 1 mod 4"),
        _ => QuadInt::from_int(*ctx, -1),
    }
}

/// Fundamental automorph: least integral solution > 1 of x² − Dy² = 1.
/// This is the unit whose powers (with ±1) generate every solution class.
pub fn norm_one_unit(ctx: &RingContext) -> Result<QuadInt, PellError> {
    if ctx.d() < 0 {
        return Err(PellError::ImaginaryRing(ctx.d()));
    }
    let u1 = lattice_fundamental_unit(ctx);
    if u1.norm().is_one() {
        Ok(u1)
    } else {
        Ok(&u1 * &u1)
    }
}

/// Coordinates of (x + y√D)·u^k. If u is half-integral and the literal power
/// leaves the x + y√D lattice, the smallest integral power of u (its cube)
/// is used instead.
pub fn unit_action(s: (&BigInt, &BigInt), u: &QuadInt, k: i64) -> (BigInt, BigInt) {
    assert!(u.norm().abs().is_one(), "unit_action needs |norm(u)| = 1");
    let ctx = u.ctx();
    let base = QuadInt::integral(ctx, s.0.clone(), s.1.clone());
    let v = &base * &u.unit_pow(k);
    if v.den() == 1 {
        return (v.x().clone(), v.y().clone());
    }
    let cube = u.pow(3);
    assert_eq!(cube.den(), 1, "u^3 of a half-integral unit is integral");
    let v = &base * &cube.unit_pow(k);
    (v.x().clone(), v.y().clone())
}

/// One solution class of x² − Dy² = N: a fundamental representative plus the
/// unit whose action generates the class.
#[derive(Debug, Clone)]
pub struct PellSolutionClass {
    ctx: RingContext,
    n: BigInt,
    rep: (BigInt, BigInt),
    unit: QuadInt,
}

/// How a class member was reached from the representative; lets callers
/// reconstruct exact coordinates from a residue-level hit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrbitWitness {
    /// ±rep·U^power (real rings).
    UnitPower { neg: bool, power: u64 },
    /// An explicitly stored member (imaginary rings).
    Exact { x: BigInt, y: BigInt },
}

#[derive(Debug, Clone)]
pub struct OrbitPoint {
    pub xm: BigInt,
    pub ym: BigInt,
    pub witness: OrbitWitness,
}

impl PellSolutionClass {
    pub fn d(&self) -> i64 {
        self.ctx.d()
    }

    pub fn ctx(&self) -> RingContext {
        self.ctx
    }

    pub fn n(&self) -> &BigInt {
        &self.n
    }

    pub fn rep(&self) -> (&BigInt, &BigInt) {
        (&self.rep.0, &self.rep.1)
    }

    pub fn unit(&self) -> &QuadInt {
        &self.unit
    }

    /// Exact coordinates for an orbit witness.
    pub fn witness_coords(&self, w: &OrbitWitness) -> (BigInt, BigInt) {
        match w {
            OrbitWitness::Exact { x, y } => (x.clone(), y.clone()),
            OrbitWitness::UnitPower { neg, power } => {
                let e = QuadInt::integral(self.ctx, self.rep.0.clone(), self.rep.1.clone());
                let v = &e * &self.unit.pow(*power);
                if *neg {
                    (-v.x(), -v.y())
                } else {
                    (v.x().clone(), v.y().clone())
                }
            }
        }
    }

    /// All members for D < 0 (finite): torsion orbit of the representative
    /// together with negatives.
    fn members_imaginary(&self) -> Vec<(BigInt, BigInt)> {
        let mut out = Vec::new();
        let mut cur = QuadInt::integral(self.ctx, self.rep.0.clone(), self.rep.1.clone());
        for _ in 0..6 {
            if out.contains(&(cur.x().clone(), cur.y().clone())) {
                break;
            }
            out.push((cur.x().clone(), cur.y().clone()));
            out.push((-cur.x(), -cur.y()));
            let next = &cur * &self.unit;
            if next.den() != 1 {
                break;
            }
            cur = next;
        }
        out.sort();
        out.dedup();
        out
    }

    /// Class membership for an exact solution (x, y) of the same equation.
    pub fn contains(&self, x: &BigInt, y: &BigInt) -> bool {
        debug_assert_eq!(x * x - self.ctx.big_d() * y * y, self.n);
        if self.ctx.d() < 0 {
            return self.members_imaginary().contains(&(x.clone(), y.clone()));
        }
        let (rx, ry) = (&self.rep.0, &self.rep.1);
        let p = x * rx - self.ctx.big_d() * y * ry;
        let q = rx * y - ry * x;
        (&p % &self.n).is_zero() && (&q % &self.n).is_zero()
    }

    /// The complete residue orbit of the class mod m, with witnesses. The
    /// orbit is finite: the unit action is invertible mod m, so residue
    /// pairs cycle (pigeonhole, period ≤ m²).
    pub fn residue_orbit(&self, m: &BigInt) -> Vec<OrbitPoint> {
        assert!(m >= &BigInt::one(), "modulus must be >= 1");
        if self.ctx.d() < 0 {
            return self
                .members_imaginary()
                .into_iter()
                .map(|(x, y)| OrbitPoint {
                    xm: x.mod_floor(m),
                    ym: y.mod_floor(m),
                    witness: OrbitWitness::Exact { x, y },
                })
                .collect();
        }
        let d = self.ctx.big_d().mod_floor(m);
        let (ux, uy) = (self.unit.x().mod_floor(m), self.unit.y().mod_floor(m));
        let start = (self.rep.0.mod_floor(m), self.rep.1.mod_floor(m));
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        let (mut x, mut y) = start.clone();
        let mut power = 0u64;
        loop {
            if !seen.insert((x.clone(), y.clone())) {
                break;
            }
            out.push(OrbitPoint {
                xm: x.clone(),
                ym: y.clone(),
                witness: OrbitWitness::UnitPower { neg: false, power },
            });
            out.push(OrbitPoint {
                xm: (-&x).mod_floor(m),
                ym: (-&y).mod_floor(m),
                witness: OrbitWitness::UnitPower { neg: true, power },
            });
            let nx = (&x * &ux + &d * &y * &uy).mod_floor(m);
            let ny = (&x * &uy + &y * &ux).mod_floor(m);
            x = nx;
            y = ny;
            power += 1;
        }
        out
    }
}

/// The complete, finite set of residue pairs (x mod m, y mod m) attained by
/// the class (sign companions included).
pub fn enumerate_class_residues(cls: &PellSolutionClass, m: &BigInt) -> BTreeSet<(BigInt, BigInt)> {
    cls.residue_orbit(m).into_iter().map(|p| (p.xm, p.ym)).collect()
}

fn canonical_key(x: &BigInt, y: &BigInt) -> (BigInt, BigInt, bool, bool) {
    (y.abs(), x.abs(), y.is_negative(), x.is_negative())
}

fn sign_combos(x: BigInt, y: BigInt) -> Vec<(BigInt, BigInt)> {
    let mut v = vec![
        (x.clone(), y.clone()),
        (-&x, y.clone()),
        (x.clone(), -&y),
        (-&x, -&y),
    ];
    v.sort();
    v.dedup();
    v
}

/// Complete list of inequivalent solution classes of x² − Dy² = N over
/// integer pairs; the empty list certifies insolubility.
///
/// For N = 1 the representative follows the classical convention that the
/// fundamental solution of the unit equation is the fundamental automorph
/// itself rather than the trivial (1, 0).
pub fn solve_norm_equation(ctx: &RingContext, n: &BigInt) -> Vec<PellSolutionClass> {
    assert!(!n.is_zero(), "solve_norm_equation needs N != 0");
    let d = ctx.d();
    let mut candidates: Vec<(BigInt, BigInt)> = Vec::new();
    let unit;
    if d < 0 {
        if n.is_negative() {
            return Vec::new();
        }
        unit = torsion_generator(ctx);
        let bound = (n / BigInt::from(-d)).sqrt();
        let mut y = BigInt::zero();
        while y <= bound {
            let x2 = n + ctx.big_d() * &y * &y;
            if let Some(x) = nt::perfect_square(&x2) {
                candidates.extend(sign_combos(x, y.clone()));
            }
            y += 1;
        }
    } else {
        unit = norm_one_unit(ctx).expect("d > 0");
        let (a, b) = (unit.x().clone(), unit.y().clone());
        let shift = if n.is_positive() { &a + 1 } else { &a - 1 };
        let ymax = (&b * &b * n.abs() / (BigInt::from(2) * shift)).sqrt() + 1;
        let mut y = BigInt::zero();
        while y <= ymax {
            let x2 = n + ctx.big_d() * &y * &y;
            if !x2.is_negative() {
                if let Some(x) = nt::perfect_square(&x2) {
                    candidates.extend(sign_combos(x, y.clone()));
                }
            }
            y += 1;
        }
    }

    let mut classes: Vec<PellSolutionClass> = Vec::new();
    let mut grouped: Vec<Vec<(BigInt, BigInt)>> = Vec::new();
    'cand: for (x, y) in candidates {
        for (i, cls) in classes.iter().enumerate() {
            if cls.contains(&x, &y) {
                grouped[i].push((x, y));
                continue 'cand;
            }
        }
        classes.push(PellSolutionClass {
            ctx: *ctx,
            n: n.clone(),
            rep: (x.clone(), y.clone()),
            unit: unit.clone(),
        });
        grouped.push(vec![(x, y)]);
    }

    for (cls, members) in classes.iter_mut().zip(&grouped) {
        let best = members
            .iter()
            .min_by_key(|(x, y)| canonical_key(x, y))
            .expect("non-empty group");
        cls.rep = best.clone();
    }
    if n.is_one() && !classes.is_empty() {
        // one class; represent it by the automorph rather than (1, 0)
        classes[0].rep = (unit.x().clone(), unit.y().clone());
    }
    classes.sort_by_key(|c| canonical_key(&c.rep.0, &c.rep.1));
    classes
}
