//! The singular matrices A(p, z) = (p, z; z̄, ‖z‖/p), verification of
//! two-idempotent factor pairs, the exact parametrization of candidate
//! factors, and constructive certificates.
//!
//! A factor pair B = (a, b; c, 1−a), C = (d, e; f, 1−d) of idempotents with
//! B·C = A(p, z) is equivalent to five ring relations:
//!
//! ```text
//!   (0)  p = ad + bf
//!   (1)  z(1−a) = kb          (2)  z̄a = pc
//!   (3)  zd = pe              (4)  z̄(1−d) = kf
//! ```
//!
//! Relations (1)–(4) solve exactly for a, c in terms of b (and d, e in terms
//! of f) over the fraction field: a = 1 − z̄b/p, c = z̄a/p, d = 1 − zf/p,
//! e = zd/p. Relation (0) is then the one genuine constraint; with f = b̄
//! it collapses to a single quadratic Diophantine equation in the
//! coordinates of b (the conjugate-pair criterion).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Number;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::ideals::{self, IdealError};
use crate::mat2::Mat2;
use crate::nt;
use crate::quadring::{QuadInt, QuadRational, RingContext, RingError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FactorError {
    #[error("invalid setting: {0}")]
    InvalidSetting(String),
    #[error("p = {p} does not divide ‖z‖ = {norm} (p | ‖z‖ is required for A(p,z))")]
    NormNotDivisible { p: u64, norm: BigInt },
    #[error("‖z‖ = {norm} but the construction needs ‖z‖ = -p² = {expected}")]
    NormMismatch { norm: BigInt, expected: BigInt },
    #[error("the ‖z‖ = -p² construction requires an odd prime (‖z‖ = -4 never occurs in I_2)")]
    OddPrimeRequired,
    #[error("not a usable unit: {0}")]
    NotAUnit(String),
    #[error("bad certificate: {0}")]
    BadCertificate(String),
}

impl From<IdealError> for FactorError {
    fn from(e: IdealError) -> Self {
        FactorError::InvalidSetting(e.to_string())
    }
}

impl From<RingError> for FactorError {
    fn from(e: RingError) -> Self {
        FactorError::BadCertificate(e.to_string())
    }
}

/// The three coordinate cases: D ≡ 1 (mod 4) with half-integral z (case 1),
/// D ≡ 1 (mod 4) with integral z (case 2), and D ≡ 2, 3 (mod 4) (case 3).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseTag {
    Case1,
    Case2,
    Case3,
}

impl CaseTag {
    pub fn of(z: &QuadInt) -> CaseTag {
        if !z.ctx().half_integers() {
            CaseTag::Case3
        } else if z.den() == 2 {
            CaseTag::Case1
        } else {
            CaseTag::Case2
        }
    }

    /// Denominator scale of the unknowns a, b, c, d, e, f.
    pub fn unknown_scale(self) -> u8 {
        match self {
            CaseTag::Case3 => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaseTag::Case1 => write!(f, "case 1"),
            CaseTag::Case2 => write!(f, "case 2"),
            CaseTag::Case3 => write!(f, "case 3"),
        }
    }
}

/// A(p, z) = (p, z; z̄, k) with k = ‖z‖/p; construction enforces the valid
/// setting (p irreducible but not prime, z ∈ I_p(D)).
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixA {
    p: u64,
    z: QuadInt,
    k: BigInt,
    matrix: Mat2<QuadInt>,
}

impl MatrixA {
    pub fn new(p: u64, z: QuadInt) -> Result<Self, FactorError> {
        let ctx = z.ctx();
        let st = ideals::prime_status(p, &ctx)?;
        if !st.valid_setting() {
            return Err(FactorError::InvalidSetting(if st.prime_in_ring {
                format!("{p} is prime (inert) in Z[√{}]", ctx.d())
            } else {
                format!("{p} is reducible in Z[√{}]", ctx.d())
            }));
        }
        let report = ideals::ip_report(&z, p);
        if report.z_is_zero {
            return Err(FactorError::InvalidSetting("z = 0 is not in I_p(D)".into()));
        }
        if report.z_is_unit {
            return Err(FactorError::InvalidSetting(format!("z = {z} is a unit, never in I_p(D)")));
        }
        if report.z_is_integer {
            return Err(FactorError::InvalidSetting(format!(
                "z = {z} is a rational integer, never in I_p(D)"
            )));
        }
        if !report.p_divides_norm {
            return Err(FactorError::NormNotDivisible { p, norm: report.norm });
        }
        if report.p_divides_z {
            return Err(FactorError::InvalidSetting(format!("{p} divides z = {z} in the ring")));
        }
        let k = report.norm / BigInt::from(p);
        let matrix = Mat2::new(
            QuadInt::from_int(ctx, p as i64),
            z.clone(),
            z.conjugate(),
            QuadInt::integral(ctx, k.clone(), 0),
        );
        debug_assert!(matrix.det().is_zero());
        Ok(MatrixA { p, z, k, matrix })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn p_big(&self) -> BigInt {
        BigInt::from(self.p)
    }

    pub fn z(&self) -> &QuadInt {
        &self.z
    }

    pub fn k(&self) -> &BigInt {
        &self.k
    }

    pub fn matrix(&self) -> &Mat2<QuadInt> {
        &self.matrix
    }

    pub fn ctx(&self) -> RingContext {
        self.z.ctx()
    }

    pub fn case(&self) -> CaseTag {
        CaseTag::of(&self.z)
    }

    /// p + k, the quadratic coefficient of the conjecture criterion.
    pub fn p_plus_k(&self) -> BigInt {
        self.p_big() + &self.k
    }
}

impl fmt::Display for MatrixA {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "A({}, {})", self.p, self.z)
    }
}

/// The five relations of the factor-pair criterion, individually.
pub fn lemma31_relations(
    a: &QuadInt,
    b: &QuadInt,
    c: &QuadInt,
    d: &QuadInt,
    e: &QuadInt,
    f: &QuadInt,
    target: &MatrixA,
) -> [bool; 5] {
    let ctx = target.ctx();
    let p = QuadInt::from_int(ctx, target.p() as i64);
    let k = QuadInt::integral(ctx, target.k().clone(), 0);
    let one = QuadInt::one(ctx);
    let z = target.z();
    let zbar = z.conjugate();
    [
        &(a * d) + &(b * f) == p,
        &(z * &(&one - a)) == &(&k * b),
        &(&zbar * a) == &(&p * c),
        &(z * d) == &(&p * e),
        &(&zbar * &(&one - d)) == &(&k * f),
    ]
}

/// True iff (a, b; c, 1−a)·(d, e; f, 1−d) is an idempotent factorization of
/// the target, i.e. all five relations hold.
pub fn verify_lemma31(
    a: &QuadInt,
    b: &QuadInt,
    c: &QuadInt,
    d: &QuadInt,
    e: &QuadInt,
    f: &QuadInt,
    target: &MatrixA,
) -> bool {
    lemma31_relations(a, b, c, d, e, f, target).iter().all(|&r| r)
}

fn scale_of(case: CaseTag) -> BigInt {
    BigInt::from(i64::from(case.unknown_scale()))
}

/// Exact field value of the first factor's a and c for given b-coordinates:
/// a = 1 − z̄b/p, c = z̄a/p. Integrality is the caller's test.
pub fn params_ac(
    b: (&BigInt, &BigInt),
    target: &MatrixA,
    case: CaseTag,
) -> (QuadRational, QuadRational) {
    debug_assert_eq!(case, target.case());
    let ctx = target.ctx();
    let p = BigRational::from_integer(target.p_big());
    let b_val = QuadRational::from_coords_over(ctx, b.0.clone(), b.1.clone(), scale_of(case));
    let zbar: QuadRational = QuadRational::from(&target.z().conjugate());
    let a = &QuadRational::one(ctx) - &(&zbar * &b_val).scale(&p.recip());
    let c = (&zbar * &a).scale(&p.recip());
    (a, c)
}

/// Mirror parametrization for the second factor: d = 1 − zf/p, e = zd/p.
pub fn params_de(
    f: (&BigInt, &BigInt),
    target: &MatrixA,
    case: CaseTag,
) -> (QuadRational, QuadRational) {
    debug_assert_eq!(case, target.case());
    let ctx = target.ctx();
    let p = BigRational::from_integer(target.p_big());
    let f_val = QuadRational::from_coords_over(ctx, f.0.clone(), f.1.clone(), scale_of(case));
    let z: QuadRational = QuadRational::from(target.z());
    let d = &QuadRational::one(ctx) - &(&z * &f_val).scale(&p.recip());
    let e = (&z * &d).scale(&p.recip());
    (d, e)
}

/// ad + bf − p evaluated exactly; zero iff (b, f) satisfies the pairing
/// relation (0) with the parametrized a and d.
pub fn pairing_residual(
    b: (&BigInt, &BigInt),
    f: (&BigInt, &BigInt),
    target: &MatrixA,
    case: CaseTag,
) -> QuadRational {
    let ctx = target.ctx();
    let s = scale_of(case);
    let b_val = QuadRational::from_coords_over(ctx, b.0.clone(), b.1.clone(), s.clone());
    let f_val = QuadRational::from_coords_over(ctx, f.0.clone(), f.1.clone(), s);
    let (a, _) = params_ac(b, target, case);
    let (d, _) = params_de(f, target, case);
    let p = QuadRational::from_ints(ctx, target.p_big(), 0);
    &(&(&a * &d) + &(&b_val * &f_val)) - &p
}

/// One-equation criterion for the conjugate-pair form (f1 = b1, f2 = −b2):
/// quad_b1·b1² + quad_b2·b2² + lin_b1·b1 + lin_b2·b2 + constant = 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjectureEquation {
    pub quad_b1: BigInt,
    pub quad_b2: BigInt,
    pub lin_b1: BigInt,
    pub lin_b2: BigInt,
    pub constant: BigInt,
}

impl ConjectureEquation {
    pub fn eval(&self, b1: &BigInt, b2: &BigInt) -> BigInt {
        &self.quad_b1 * b1 * b1
            + &self.quad_b2 * b2 * b2
            + &self.lin_b1 * b1
            + &self.lin_b2 * b2
            + &self.constant
    }

    /// Coefficients divided by their content (zero equation stays zero).
    pub fn reduced(&self) -> ConjectureEquation {
        let g = [&self.quad_b1, &self.quad_b2, &self.lin_b1, &self.lin_b2, &self.constant]
            .iter()
            .fold(BigInt::zero(), |acc, v| acc.gcd(v));
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        ConjectureEquation {
            quad_b1: &self.quad_b1 / &g,
            quad_b2: &self.quad_b2 / &g,
            lin_b1: &self.lin_b1 / &g,
            lin_b2: &self.lin_b2 / &g,
            constant: &self.constant / &g,
        }
    }
}

impl fmt::Display for ConjectureEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}·b1² + {}·b2² + {}·b1 + {}·b2 + {} = 0",
            self.quad_b1, self.quad_b2, self.lin_b1, self.lin_b2, self.constant
        )
    }
}

/// The conjugate-pair criterion of the target as a binary quadratic
/// Diophantine equation (raw coefficients; see [`ConjectureEquation::reduced`]).
pub fn conjecture_equation(target: &MatrixA, case: CaseTag) -> ConjectureEquation {
    debug_assert_eq!(case, target.case());
    let pk = target.p_plus_k();
    let d = target.ctx().big_d();
    let (z1, z2) = (target.z().x().clone(), target.z().y().clone());
    let s = BigInt::from(i64::from(case.unknown_scale()));
    let t = BigInt::from(i64::from(target.z().den()));
    let w = BigInt::from(2) * &s / &t; // 2s/t ∈ {2, 4}
    let p = target.p_big();
    ConjectureEquation {
        quad_b1: pk.clone(),
        quad_b2: -&pk * &d,
        lin_b1: -&w * &z1,
        lin_b2: &w * &z2 * &d,
        constant: &s * &s * (&p - &p * &p),
    }
}

/// Builds b (over the case scale) and the derived a, c, returning them as
/// ring elements when all three are integral; the congruence filter and the
/// search paths all funnel through here.
pub fn conjecture_candidate(
    target: &MatrixA,
    b1: &BigInt,
    b2: &BigInt,
) -> Option<(QuadInt, QuadInt, QuadInt)> {
    let case = target.case();
    let ctx = target.ctx();
    let b = QuadRational::from_coords_over(ctx, b1.clone(), b2.clone(), scale_of(case))
        .to_quad_int()?;
    let (a, c) = params_ac((b1, b2), target, case);
    let a = a.to_quad_int()?;
    let c = c.to_quad_int()?;
    Some((a, b, c))
}

/// Certificate provenance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "norm_minus_p2")]
    NormMinusP2,
    #[serde(rename = "pell_decision")]
    PellDecision,
    #[serde(rename = "corp2")]
    CorP2,
    #[serde(rename = "general_search")]
    GeneralSearch,
    #[serde(rename = "unit_transfer")]
    UnitTransfer,
    #[serde(rename = "transpose")]
    Transpose,
    #[serde(rename = "external")]
    External,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Method::NormMinusP2 => "norm_minus_p2",
            Method::PellDecision => "pell_decision",
            Method::CorP2 => "corp2",
            Method::GeneralSearch => "general_search",
            Method::UnitTransfer => "unit_transfer",
            Method::Transpose => "transpose",
            Method::External => "external",
        };
        write!(f, "{s}")
    }
}

/// A machine-checkable idempotent factorization A(p, z) = B·C.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub target: MatrixA,
    pub factor_b: Mat2<QuadInt>,
    pub factor_c: Mat2<QuadInt>,
    pub method: Method,
    pub params: BTreeMap<String, BigInt>,
}

/// Outcome of the per-relation certificate check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertCheck {
    /// Relations (0)–(4).
    pub relations: [bool; 5],
    /// B22 = 1 − B11 and C22 = 1 − C11.
    pub shape_b: bool,
    pub shape_c: bool,
    /// C = (ā, c̄; b̄, 1−ā), the conjugate-pair arrangement.
    pub conjugate_arrangement: bool,
}

impl CertCheck {
    pub fn passed(&self) -> bool {
        self.relations.iter().all(|&r| r) && self.shape_b && self.shape_c
    }
}

impl Certificate {
    /// Assemble a conjugate-pair certificate from the first factor's
    /// entries; verification failure is an error.
    pub fn from_conjecture_triple(
        target: MatrixA,
        a: QuadInt,
        b: QuadInt,
        c: QuadInt,
        method: Method,
        params: BTreeMap<String, BigInt>,
    ) -> Result<Certificate, FactorError> {
        let one = QuadInt::one(target.ctx());
        let factor_b = Mat2::new(a.clone(), b.clone(), c.clone(), &one - &a);
        let factor_c =
            Mat2::new(a.conjugate(), c.conjugate(), b.conjugate(), &one - &a.conjugate());
        let cert = Certificate { target, factor_b, factor_c, method, params };
        if !cert.verify() {
            return Err(FactorError::BadCertificate(format!(
                "conjugate-pair triple a = {a}, b = {b}, c = {c} does not verify"
            )));
        }
        Ok(cert)
    }

    pub fn sextuple(&self) -> (&QuadInt, &QuadInt, &QuadInt, &QuadInt, &QuadInt, &QuadInt) {
        (
            self.factor_b.at(1, 1),
            self.factor_b.at(1, 2),
            self.factor_b.at(2, 1),
            self.factor_c.at(1, 1),
            self.factor_c.at(1, 2),
            self.factor_c.at(2, 1),
        )
    }

    pub fn check(&self) -> CertCheck {
        let (a, b, c, d, e, f) = self.sextuple();
        let one = QuadInt::one(self.target.ctx());
        let relations = lemma31_relations(a, b, c, d, e, f, &self.target);
        let shape_b = *self.factor_b.at(2, 2) == &one - a;
        let shape_c = *self.factor_c.at(2, 2) == &one - d;
        let conjugate_arrangement =
            *d == a.conjugate() && *e == c.conjugate() && *f == b.conjugate();
        CertCheck { relations, shape_b, shape_c, conjugate_arrangement }
    }

    /// Full verification: shape plus the five relations (equivalently, both
    /// factors idempotent with product equal to the target).
    pub fn verify(&self) -> bool {
        let ok = self.check().passed();
        debug_assert_eq!(
            ok,
            self.factor_b.is_idempotent()
                && self.factor_c.is_idempotent()
                && self.factor_b.mul(&self.factor_c) == *self.target.matrix()
                && self.factor_b.at(2, 2).clone() == &QuadInt::one(self.target.ctx()) - self.factor_b.at(1, 1)
                && self.factor_c.at(2, 2).clone() == &QuadInt::one(self.target.ctx()) - self.factor_c.at(1, 1),
        );
        ok
    }

    pub fn is_conjecture_form(&self) -> bool {
        self.check().conjugate_arrangement
    }
}

/// Constructive certificate for ‖z‖ = −p² (always exists, p odd). The free
/// parameter m indexes the solution family; distinct m give distinct
/// certificates, witnessing non-uniqueness.
pub fn construct_norm_minus_p2(target: &MatrixA, m: &BigInt) -> Result<Certificate, FactorError> {
    let p = target.p_big();
    if *target.k() != -&p {
        return Err(FactorError::NormMismatch {
            norm: target.z().norm(),
            expected: -&p * &p,
        });
    }
    if target.p() == 2 {
        return Err(FactorError::OddPrimeRequired);
    }
    let case = target.case();
    let d = target.ctx().big_d();
    let (z1, z2) = (target.z().x().clone(), target.z().y().clone());
    // gcd(z1, z2·D) = 1 whenever ‖z‖ = −p²; pick the Bezout pair of minimal |x|
    let (x, y) = nt::bezout_min_x(&z1, &(&z2 * &d));
    let p2 = &p * &p;
    let (b1, b2) = match case {
        CaseTag::Case3 => {
            let half = (&p - &p2) / BigInt::from(2); // p odd
            (&x * &half - &z2 * m * &d, &y * &half - m * &z1)
        }
        CaseTag::Case2 => {
            // the line parameter must step by 2 to stay in the ring: z1 and
            // z2 have opposite parity when z1² − Dz2² = −p² with p odd
            let j = BigInt::from(2) * m;
            (&x * (&p - &p2) - &z2 * &j * &d, &y * (&p - &p2) - &j * &z1)
        }
        CaseTag::Case1 => (
            BigInt::from(2) * &x * (&p - &p2) - &z2 * m * &d,
            BigInt::from(2) * &y * (&p - &p2) - m * &z1,
        ),
    };
    let (a, b, c) = conjecture_candidate(target, &b1, &b2).ok_or_else(|| {
        FactorError::BadCertificate(format!(
            "norm −p² construction produced a non-integral factor at m = {m}"
        ))
    })?;
    let mut params = BTreeMap::new();
    params.insert("m".into(), m.clone());
    params.insert("bezout_x".into(), x);
    params.insert("bezout_y".into(), y);
    params.insert("b1".into(), b1);
    params.insert("b2".into(), b2);
    Certificate::from_conjecture_triple(target.clone(), a, b, c, Method::NormMinusP2, params)
}

/// Certificate for A(p, z·u) from a certificate for A(p, z), u a norm-one
/// unit: B' = (a, bu; cū, 1−a), C' = (d, eu; fū, 1−d).
pub fn transfer_by_unit(cert: &Certificate, u: &QuadInt) -> Result<Certificate, FactorError> {
    if !u.is_unit() {
        return Err(FactorError::NotAUnit(format!("{u} has |norm| ≠ 1")));
    }
    if !u.norm().is_one() {
        return Err(FactorError::NotAUnit(format!(
            "{u} has norm −1; factor pairs transfer along norm-one units (use u²)"
        )));
    }
    let target = MatrixA::new(cert.target.p(), cert.target.z() * u)?;
    let ubar = u.conjugate();
    let (a, b, c, d, e, f) = cert.sextuple();
    let one = QuadInt::one(target.ctx());
    let factor_b = Mat2::new(a.clone(), b * u, c * &ubar, &one - a);
    let factor_c = Mat2::new(d.clone(), e * u, f * &ubar, &one - d);
    let mut params = cert.params.clone();
    params.insert("unit_x".into(), u.x().clone());
    params.insert("unit_y".into(), u.y().clone());
    params.insert("unit_den".into(), BigInt::from(i64::from(u.den())));
    let out = Certificate { target, factor_b, factor_c, method: Method::UnitTransfer, params };
    if !out.verify() {
        return Err(FactorError::BadCertificate("unit transfer failed to verify".into()));
    }
    Ok(out)
}

/// Certificate for the transposed target A(p, z̄) = A(p, z)^T, via
/// (BC)^T = C^T B^T; the conjugate-pair form is preserved.
pub fn transpose_cert(cert: &Certificate) -> Result<Certificate, FactorError> {
    let target = MatrixA::new(cert.target.p(), cert.target.z().conjugate())?;
    let out = Certificate {
        target,
        factor_b: cert.factor_c.transpose(),
        factor_c: cert.factor_b.transpose(),
        method: Method::Transpose,
        params: cert.params.clone(),
    };
    if !out.verify() {
        return Err(FactorError::BadCertificate("transpose failed to verify".into()));
    }
    Ok(out)
}

// --- JSON serialization -----------------------------------------------------
//
// Schema: {"D", "p", "z": [x,y,den], "k", "B": [four [x,y,den] triples,
// row-major], "C": [...], "method", "params"}; integers are exact JSON
// numbers of arbitrary size.

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertError {
    #[error("certificate JSON parse error: {0}")]
    Json(String),
    #[error("certificate is not well-formed: {0}")]
    Semantic(String),
}

#[derive(Serialize, Deserialize)]
struct ElemDto(Number, Number, u8);

#[derive(Serialize, Deserialize)]
struct CertDto {
    #[serde(rename = "D")]
    d: i64,
    p: u64,
    z: ElemDto,
    k: Number,
    #[serde(rename = "B")]
    b: Vec<ElemDto>,
    #[serde(rename = "C")]
    c: Vec<ElemDto>,
    method: Method,
    params: BTreeMap<String, Number>,
}

fn bigint_to_number(v: &BigInt) -> Number {
    Number::from_str(&v.to_string()).expect("integer literal is a valid JSON number")
}

fn number_to_bigint(n: &Number) -> Result<BigInt, CertError> {
    n.to_string()
        .parse()
        .map_err(|_| CertError::Semantic(format!("expected an integer, found {n}")))
}

fn elem_to_dto(q: &QuadInt) -> ElemDto {
    ElemDto(bigint_to_number(q.x()), bigint_to_number(q.y()), q.den())
}

fn dto_to_elem(ctx: RingContext, e: &ElemDto) -> Result<QuadInt, CertError> {
    QuadInt::new(ctx, number_to_bigint(&e.0)?, number_to_bigint(&e.1)?, e.2)
        .map_err(|err| CertError::Semantic(err.to_string()))
}

impl Certificate {
    pub fn to_json_value(&self) -> serde_json::Value {
        let dto = CertDto {
            d: self.target.ctx().d(),
            p: self.target.p(),
            z: elem_to_dto(self.target.z()),
            k: bigint_to_number(self.target.k()),
            b: self.factor_b.entries().iter().map(elem_to_dto).collect(),
            c: self.factor_c.entries().iter().map(elem_to_dto).collect(),
            method: self.method,
            params: self.params.iter().map(|(k, v)| (k.clone(), bigint_to_number(v))).collect(),
        };
        serde_json::to_value(dto).expect("certificate serialization is infallible")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("valid JSON value")
    }

    pub fn from_json_str(s: &str) -> Result<Certificate, CertError> {
        let dto: CertDto = serde_json::from_str(s).map_err(|e| CertError::Json(e.to_string()))?;
        let ctx = RingContext::new(dto.d).map_err(|e| CertError::Semantic(e.to_string()))?;
        let z = dto_to_elem(ctx, &dto.z)?;
        let target =
            MatrixA::new(dto.p, z).map_err(|e| CertError::Semantic(e.to_string()))?;
        if number_to_bigint(&dto.k)? != *target.k() {
            return Err(CertError::Semantic(format!(
                "stored k = {} but ‖z‖/p = {}",
                dto.k,
                target.k()
            )));
        }
        if dto.b.len() != 4 || dto.c.len() != 4 {
            return Err(CertError::Semantic("B and C must each hold 4 entries".into()));
        }
        let get = |v: &[ElemDto]| -> Result<Mat2<QuadInt>, CertError> {
            Ok(Mat2::new(
                dto_to_elem(ctx, &v[0])?,
                dto_to_elem(ctx, &v[1])?,
                dto_to_elem(ctx, &v[2])?,
                dto_to_elem(ctx, &v[3])?,
            ))
        };
        let factor_b = get(&dto.b)?;
        let factor_c = get(&dto.c)?;
        let params = dto
            .params
            .iter()
            .map(|(k, v)| Ok((k.clone(), number_to_bigint(v)?)))
            .collect::<Result<_, CertError>>()?;
        Ok(Certificate { target, factor_b, factor_c, method: dto.method, params })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(d: i64) -> RingContext {
        RingContext::new(d).unwrap()
    }

    fn bi(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn a3_z110() -> MatrixA {
        MatrixA::new(3, QuadInt::integral(ctx(10), 1, 1)).unwrap()
    }

    fn a2_sqrt10() -> MatrixA {
        MatrixA::new(2, QuadInt::integral(ctx(10), 0, 1)).unwrap()
    }

    #[test]
    fn build_examples() {
        let t = a3_z110();
        assert_eq!(*t.k(), bi(-3));
        assert_eq!(t.matrix().at(2, 1), &QuadInt::integral(ctx(10), 1, -1));
        assert_eq!(t.case(), CaseTag::Case3);

        let t = a2_sqrt10();
        assert_eq!(*t.k(), bi(-5));

        // integers are never in I_p
        assert!(matches!(
            MatrixA::new(3, QuadInt::from_int(ctx(10), 5)),
            Err(FactorError::InvalidSetting(_))
        ));
        // A(7, 13+2√10): 7 is inert over D = 10, and 7 ∤ 129 besides
        assert!(MatrixA::new(7, QuadInt::integral(ctx(10), 13, 2)).is_err());
        // norm divisibility failure where the setting itself is valid
        assert!(matches!(
            MatrixA::new(3, QuadInt::integral(ctx(10), 1, 3)),
            Err(FactorError::NormNotDivisible { .. })
        ));
    }

    #[test]
    fn verify_lemma31_examples() {
        let c10 = ctx(10);
        let t = a3_z110();
        let a = QuadInt::integral(c10, 2, 2);
        let b = QuadInt::integral(c10, 7, 1);
        let c = QuadInt::from_int(c10, -6);
        assert!(verify_lemma31(&a, &b, &c, &a.conjugate(), &c.conjugate(), &b.conjugate(), &t));

        let one = QuadInt::one(c10);
        let zero = QuadInt::zero(c10);
        assert!(!verify_lemma31(&one, &zero, &zero, &one, &zero, &zero, &t));

        let t2 = a2_sqrt10();
        let a = QuadInt::integral(c10, 6, 2);
        let b = QuadInt::integral(c10, 4, 1);
        let c = QuadInt::integral(c10, -10, -3);
        assert!(verify_lemma31(&a, &b, &c, &a.conjugate(), &c.conjugate(), &b.conjugate(), &t2));
    }

    #[test]
    fn params_examples() {
        let t = a3_z110();
        let (a, c) = params_ac((&bi(-3), &bi(0)), &t, CaseTag::Case3);
        assert_eq!(a.to_quad_int().unwrap(), QuadInt::integral(ctx(10), 2, -1));
        assert_eq!(c.to_quad_int().unwrap(), QuadInt::integral(ctx(10), 4, -1));

        let t2 = a2_sqrt10();
        let (a, c) = params_ac((&bi(4), &bi(1)), &t2, CaseTag::Case3);
        assert_eq!(a.to_quad_int().unwrap(), QuadInt::integral(ctx(10), 6, 2));
        assert_eq!(c.to_quad_int().unwrap(), QuadInt::integral(ctx(10), -10, -3));

        // non-integral when z1·b1 ≢ z2·D·b2 (mod p)
        let (a, _) = params_ac((&bi(1), &bi(0)), &t, CaseTag::Case3);
        assert!(a.to_quad_int().is_none());

        let (d, _) = params_de((&bi(-3), &bi(0)), &t, CaseTag::Case3);
        assert_eq!(d.to_quad_int().unwrap(), QuadInt::integral(ctx(10), 2, 1)); // conjugate of a

        let (d, e) = params_de((&bi(0), &bi(0)), &t, CaseTag::Case3);
        assert_eq!(d.to_quad_int().unwrap(), QuadInt::one(ctx(10)));
        assert!(e.to_quad_int().is_none()); // e = z/p

        let (d, _) = params_de((&bi(4), &bi(-1)), &t2, CaseTag::Case3);
        assert_eq!(d.to_quad_int().unwrap(), QuadInt::integral(ctx(10), 6, -2));
    }

    #[test]
    fn pairing_examples() {
        let t = a3_z110();
        assert!(pairing_residual((&bi(-3), &bi(0)), (&bi(-3), &bi(0)), &t, CaseTag::Case3)
            .is_zero());
        let t2 = a2_sqrt10();
        assert!(pairing_residual((&bi(4), &bi(1)), (&bi(4), &bi(-1)), &t2, CaseTag::Case3)
            .is_zero());
        // b = f = 0 leaves 1 − p
        let r = pairing_residual((&bi(0), &bi(0)), (&bi(0), &bi(0)), &t, CaseTag::Case3);
        assert_eq!(r, QuadRational::from_ints(ctx(10), -2, 0));
    }

    #[test]
    fn conjecture_equation_examples() {
        let eq = conjecture_equation(&a3_z110(), CaseTag::Case3);
        assert_eq!(
            (eq.quad_b1.clone(), eq.quad_b2.clone(), eq.lin_b1.clone(), eq.lin_b2.clone(), eq.constant.clone()),
            (bi(0), bi(0), bi(-2), bi(20), bi(-6))
        );
        let red = eq.reduced();
        assert_eq!(
            (red.lin_b1, red.lin_b2, red.constant),
            (bi(-1), bi(10), bi(-3))
        );

        let t = MatrixA::new(3, QuadInt::integral(ctx(10), 5, 1)).unwrap();
        let eq = conjecture_equation(&t, CaseTag::Case3);
        assert_eq!(
            (eq.quad_b1, eq.quad_b2, eq.lin_b1, eq.lin_b2, eq.constant),
            (bi(8), bi(-80), bi(-10), bi(20), bi(-6))
        );

        let eq = conjecture_equation(&a2_sqrt10(), CaseTag::Case3);
        assert_eq!(
            (eq.quad_b1, eq.quad_b2, eq.lin_b1, eq.lin_b2, eq.constant),
            (bi(-3), bi(30), bi(0), bi(20), bi(-2))
        );
    }

    #[test]
    fn construct_m_zero() {
        let t = a3_z110();
        let cert = construct_norm_minus_p2(&t, &bi(0)).unwrap();
        let c10 = ctx(10);
        assert_eq!(cert.factor_b.at(1, 1), &QuadInt::integral(c10, 2, -1));
        assert_eq!(cert.factor_b.at(1, 2), &QuadInt::from_int(c10, -3));
        assert_eq!(cert.factor_b.at(2, 1), &QuadInt::integral(c10, 4, -1));
        assert_eq!(cert.factor_b.at(2, 2), &QuadInt::integral(c10, -1, 1));
        assert!(cert.verify());
        assert!(cert.is_conjecture_form());
    }

    #[test]
    fn construct_reproduces_published_factorizations() {
        // m = −1 gives the original factorization; m ∈ {−2, 6, −3, 1} the
        // four alternates (the m = 6 b-entry is −63−6√10; the printed
        // −36−6√10 transposes the digits and fails the product check).
        let t = a3_z110();
        let c10 = ctx(10);
        let expect = [
            (-1i64, (2, 2), (7, 1), (-6, 0)),
            (-2, (2, 5), (17, 2), (-16, 1)),
            (6, (2, -19), (-63, -6), (64, -7)),
            (-3, (2, 8), (27, 3), (-26, 2)),
            (1, (2, -4), (-13, -1), (14, -2)),
        ];
        let mut seen = Vec::new();
        for (m, a, b, c) in expect {
            let cert = construct_norm_minus_p2(&t, &bi(m)).unwrap();
            assert_eq!(cert.factor_b.at(1, 1), &QuadInt::integral(c10, a.0, a.1), "m = {m}");
            assert_eq!(cert.factor_b.at(1, 2), &QuadInt::integral(c10, b.0, b.1), "m = {m}");
            assert_eq!(cert.factor_b.at(2, 1), &QuadInt::integral(c10, c.0, c.1), "m = {m}");
            assert!(cert.verify());
            assert!(!seen.contains(&cert.factor_b.clone()));
            seen.push(cert.factor_b.clone());
        }
    }

    #[test]
    fn construct_norm_mismatch() {
        let t = MatrixA::new(3, QuadInt::integral(ctx(10), 1, 2)).unwrap();
        assert!(matches!(
            construct_norm_minus_p2(&t, &bi(0)),
            Err(FactorError::NormMismatch { .. })
        ));
    }

    #[test]
    fn construct_case1_d85() {
        let c85 = ctx(85);
        let z = QuadInt::new(c85, 7, 1, 2).unwrap();
        assert_eq!(z.norm(), bi(-9));
        let t = MatrixA::new(3, z).unwrap();
        assert_eq!(t.case(), CaseTag::Case1);
        let cert = construct_norm_minus_p2(&t, &bi(0)).unwrap();
        assert_eq!(cert.factor_b.at(1, 1), &QuadInt::integral(c85, 2, 5));
        for m in -3..=3 {
            let cert = construct_norm_minus_p2(&t, &bi(m)).unwrap();
            assert!(cert.verify(), "case 1 m = {m}");
        }
    }

    #[test]
    fn construct_case2_d65() {
        let c65 = ctx(65);
        let z = QuadInt::integral(c65, 4, 1);
        assert_eq!(z.norm(), bi(-49));
        let t = MatrixA::new(7, z).unwrap();
        assert_eq!(t.case(), CaseTag::Case2);
        for m in -3..=3 {
            let cert = construct_norm_minus_p2(&t, &bi(m)).unwrap();
            assert!(cert.verify(), "case 2 m = {m}");
        }
        let cert = construct_norm_minus_p2(&t, &bi(0)).unwrap();
        assert_eq!(cert.factor_b.at(1, 1), &QuadInt::integral(c65, 4, 36));
    }

    #[test]
    fn transfer_examples() {
        let t = a2_sqrt10();
        let (a, c) = params_ac((&bi(4), &bi(1)), &t, CaseTag::Case3);
        let b = QuadInt::integral(ctx(10), 4, 1);
        let cert = Certificate::from_conjecture_triple(
            t,
            a.to_quad_int().unwrap(),
            b,
            c.to_quad_int().unwrap(),
            Method::CorP2,
            BTreeMap::new(),
        )
        .unwrap();

        let u = QuadInt::integral(ctx(10), 19, 6);
        let moved = transfer_by_unit(&cert, &u).unwrap();
        assert_eq!(moved.target.z(), &QuadInt::integral(ctx(10), 60, 19));
        assert!(moved.verify());
        assert!(moved.is_conjecture_form());

        let id = transfer_by_unit(&cert, &QuadInt::one(ctx(10))).unwrap();
        assert_eq!(id.factor_b, cert.factor_b);

        let again = transfer_by_unit(&moved, &u).unwrap();
        assert_eq!(again.target.z(), &(&QuadInt::integral(ctx(10), 0, 1) * &u.pow(2)));
        assert!(again.verify());

        // norm −1 units do not transfer
        let eps = QuadInt::integral(ctx(10), 3, 1);
        assert!(matches!(transfer_by_unit(&cert, &eps), Err(FactorError::NotAUnit(_))));
        assert!(matches!(
            transfer_by_unit(&cert, &QuadInt::integral(ctx(10), 1, 1)),
            Err(FactorError::NotAUnit(_))
        ));
    }

    #[test]
    fn transpose_examples() {
        let t = a3_z110();
        let cert = construct_norm_minus_p2(&t, &bi(-1)).unwrap();
        let tr = transpose_cert(&cert).unwrap();
        assert_eq!(tr.target.z(), &QuadInt::integral(ctx(10), 1, -1));
        assert!(tr.verify());
        assert!(tr.is_conjecture_form());
        let back = transpose_cert(&tr).unwrap();
        assert_eq!(back.target.z(), t.z());
        assert_eq!(back.factor_b, cert.factor_b);
    }

    #[test]
    fn json_round_trip() {
        let cert = construct_norm_minus_p2(&a3_z110(), &bi(-1)).unwrap();
        let s = cert.to_json_string();
        let back = Certificate::from_json_str(&s).unwrap();
        assert_eq!(back, cert);
        assert!(back.verify());
        // stable top-level keys
        let v = cert.to_json_value();
        let obj = v.as_object().unwrap();
        for key in ["D", "p", "z", "k", "B", "C", "method", "params"] {
            assert!(obj.contains_key(key), "missing {key}");
        }
        assert_eq!(obj["method"], serde_json::json!("norm_minus_p2"));
    }

    #[test]
    fn json_rejects_malformed() {
        assert!(matches!(Certificate::from_json_str("{"), Err(CertError::Json(_))));
        let cert = construct_norm_minus_p2(&a3_z110(), &bi(0)).unwrap();
        let mut v = cert.to_json_value();
        v["k"] = serde_json::json!(7);
        assert!(matches!(
            Certificate::from_json_str(&v.to_string()),
            Err(CertError::Semantic(_))
        ));
    }

    #[test]
    fn tampered_certificate_fails_relation_checks() {
        let cert = construct_norm_minus_p2(&a3_z110(), &bi(-1)).unwrap();
        let mut bad = cert.clone();
        let bumped = bad.factor_b.at(1, 2) + &QuadInt::one(ctx(10));
        bad.factor_b = Mat2::new(
            bad.factor_b.at(1, 1).clone(),
            bumped,
            bad.factor_b.at(2, 1).clone(),
            bad.factor_b.at(2, 2).clone(),
        );
        let check = bad.check();
        assert!(!check.passed());
        assert!(!check.relations[1], "relation (1) must fail when b is perturbed");
    }
}
