//! Exact arithmetic in ℚ and in the cyclotomic fields ℚ(ζₙ).
//!
//! An element of ℚ(ζₙ) is stored as its residue modulo Φₙ: a dense vector of
//! φ(n) rational coefficients in the power basis `1, ζ, …, ζ^{φ(n)−1}`.
//! Two elements can only be combined when they share a conductor; use
//! [`CycloNum::promote`] or [`unify`] to move values into a common field.

mod cyclotomic;
mod qpoly;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use cyclotomic::cyclotomic_poly;

/// Arbitrary-precision rational number in lowest terms with positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycloError {
    #[error("conductor must be positive")]
    ZeroConductor,
    #[error("conductor mismatch: {0} vs {1} (promote to a common conductor first)")]
    ConductorMismatch(u32, u32),
    #[error("cannot promote from conductor {from} to {to}: {from} does not divide {to}")]
    BadPromotion { from: u32, to: u32 },
    #[error("division by zero")]
    DivisionByZero,
}

/// The ambient field ℚ(ζₙ): conductor and reduction modulus Φₙ.
#[derive(Debug)]
pub struct CycloCtx {
    n: u32,
    modulus: Vec<BigInt>,
    modulus_q: Vec<Rational>,
}

impl CycloCtx {
    /// Returns the (shared, cached) context for conductor `n`.
    pub fn new(n: u32) -> Result<Arc<CycloCtx>, CycloError> {
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CycloCtx>>>> = OnceLock::new();
        if n == 0 {
            return Err(CycloError::ZeroConductor);
        }
        let cache = CACHE.get_or_init(Default::default);
        let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
        let ctx = guard.entry(n).or_insert_with(|| {
            let modulus = cyclotomic_poly(n).expect("n > 0");
            debug_assert_eq!(modulus.len() as u32 - 1, cyclotomic::euler_phi(n));
            let modulus_q = modulus.iter().cloned().map(Rational::from_integer).collect();
            Arc::new(CycloCtx { n, modulus, modulus_q })
        });
        Ok(Arc::clone(ctx))
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    /// φ(n), the dimension of ℚ(ζₙ) over ℚ.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    /// Φₙ, lowest degree first.
    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }

    pub fn zero(self: &Arc<Self>) -> CycloNum {
        CycloNum { ctx: Arc::clone(self), coeffs: vec![Rational::zero(); self.degree()] }
    }

    pub fn one(self: &Arc<Self>) -> CycloNum {
        self.rational(Rational::one())
    }

    pub fn rational(self: &Arc<Self>, q: Rational) -> CycloNum {
        let mut x = self.zero();
        x.coeffs[0] = q;
        x
    }

    pub fn integer(self: &Arc<Self>, v: i64) -> CycloNum {
        self.rational(Rational::from_integer(v.into()))
    }

    /// ζₙᵏ, with `k` taken mod n.
    pub fn root_of_unity(self: &Arc<Self>, k: i64) -> CycloNum {
        let e = k.rem_euclid(self.n as i64) as usize;
        let mut v = vec![Rational::zero(); e + 1];
        v[e] = Rational::one();
        self.from_power_coeffs(v)
    }

    /// The value Σ vᵢ ζⁱ for an arbitrary-length coefficient vector.
    pub fn from_power_coeffs(self: &Arc<Self>, mut v: Vec<Rational>) -> CycloNum {
        self.reduce(&mut v);
        CycloNum { ctx: Arc::clone(self), coeffs: v }
    }

    /// Reduces `v` in place mod Φₙ and pads it to length φ(n).
    fn reduce(&self, v: &mut Vec<Rational>) {
        let deg = self.degree();
        for i in (deg..v.len()).rev() {
            if v[i].is_zero() {
                continue;
            }
            let c = std::mem::take(&mut v[i]);
            for (j, m) in self.modulus[..deg].iter().enumerate() {
                v[i - deg + j] -= &c * m;
            }
        }
        v.resize(deg, Rational::zero());
    }
}

impl PartialEq for CycloCtx {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
    }
}

impl Eq for CycloCtx {}

/// An element of ℚ(ζₙ).
#[derive(Clone)]
pub struct CycloNum {
    ctx: Arc<CycloCtx>,
    coeffs: Vec<Rational>,
}

impl CycloNum {
    pub fn ctx(&self) -> &Arc<CycloCtx> {
        &self.ctx
    }

    pub fn conductor(&self) -> u32 {
        self.ctx.n
    }

    /// Power-basis coefficients, length φ(n).
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if every non-constant coefficient vanishes.
    pub fn as_rational(&self) -> Option<Rational> {
        self.coeffs[1..].iter().all(Zero::is_zero).then(|| self.coeffs[0].clone())
    }

    fn check(&self, rhs: &CycloNum) -> Result<(), CycloError> {
        if self.ctx.n == rhs.ctx.n {
            Ok(())
        } else {
            Err(CycloError::ConductorMismatch(self.ctx.n, rhs.ctx.n))
        }
    }

    pub fn checked_add(&self, rhs: &CycloNum) -> Result<CycloNum, CycloError> {
        self.check(rhs)?;
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect();
        Ok(CycloNum { ctx: Arc::clone(&self.ctx), coeffs })
    }

    pub fn checked_sub(&self, rhs: &CycloNum) -> Result<CycloNum, CycloError> {
        self.check(rhs)?;
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect();
        Ok(CycloNum { ctx: Arc::clone(&self.ctx), coeffs })
    }

    pub fn checked_mul(&self, rhs: &CycloNum) -> Result<CycloNum, CycloError> {
        self.check(rhs)?;
        if self.is_zero() || rhs.is_zero() {
            return Ok(self.ctx.zero());
        }
        if let Some(q) = rhs.as_rational() {
            return Ok(self.scale(&q));
        }
        if let Some(q) = self.as_rational() {
            return Ok(rhs.scale(&q));
        }
        let prod = qpoly::mul(&self.coeffs, &rhs.coeffs);
        Ok(self.ctx.from_power_coeffs(prod))
    }

    pub fn checked_div(&self, rhs: &CycloNum) -> Result<CycloNum, CycloError> {
        self.check(rhs)?;
        self.checked_mul(&rhs.inv()?)
    }

    /// Multiplication by a rational.
    pub fn scale(&self, q: &Rational) -> CycloNum {
        CycloNum { ctx: Arc::clone(&self.ctx), coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against Φₙ.
    pub fn inv(&self) -> Result<CycloNum, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(self.ctx.rational(q.recip()));
        }
        let mut p = self.coeffs.clone();
        qpoly::trim(&mut p);
        let (g, u) = qpoly::ext_gcd_left(&p, &self.ctx.modulus_q);
        // Φₙ is irreducible, so any nonzero residue is coprime to it.
        debug_assert_eq!(g.len(), 1);
        Ok(self.ctx.from_power_coeffs(u))
    }

    /// Integer power; negative exponents invert first.
    pub fn pow(&self, e: i64) -> Result<CycloNum, CycloError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = self.ctx.one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Re-expresses `self` in ℚ(ζₘ) via ζₙ = ζₘ^{m/n}; requires `n | m`.
    pub fn promote(&self, m: u32) -> Result<CycloNum, CycloError> {
        let n = self.ctx.n;
        if m == n {
            return Ok(self.clone());
        }
        if m == 0 || m % n != 0 {
            return Err(CycloError::BadPromotion { from: n, to: m });
        }
        let target = CycloCtx::new(m)?;
        let step = (m / n) as usize;
        let mut v = vec![Rational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * step] = c.clone();
        }
        Ok(target.from_power_coeffs(v))
    }
}

/// Least common conductor of `x` and `y`.
pub fn common_conductor(x: u32, y: u32) -> u32 {
    x.lcm(&y)
}

/// Promotes both operands into their least common cyclotomic field.
pub fn unify(x: &CycloNum, y: &CycloNum) -> (CycloNum, CycloNum) {
    let m = common_conductor(x.conductor(), y.conductor());
    (x.promote(m).expect("divides lcm"), y.promote(m).expect("divides lcm"))
}

impl PartialEq for CycloNum {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.n == other.ctx.n && self.coeffs == other.coeffs
    }
}

impl Eq for CycloNum {}

impl Hash for CycloNum {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ctx.n.hash(state);
        self.coeffs.hash(state);
    }
}

/// Orders by conductor, then lexicographically by power-basis coefficients.
/// This is a bookkeeping order for deterministic output, not a field order.
impl Ord for CycloNum {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ctx.n.cmp(&other.ctx.n).then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl PartialOrd for CycloNum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

macro_rules! forward_binop {
    ($imp:ident, $method:ident, $checked:ident) => {
        impl $imp<&CycloNum> for &CycloNum {
            type Output = CycloNum;
            /// Panics on a conductor mismatch; see the `checked_*` variants.
            fn $method(self, rhs: &CycloNum) -> CycloNum {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $imp<CycloNum> for CycloNum {
            type Output = CycloNum;
            fn $method(self, rhs: CycloNum) -> CycloNum {
                (&self).$method(&rhs)
            }
        }
        impl $imp<&CycloNum> for CycloNum {
            type Output = CycloNum;
            fn $method(self, rhs: &CycloNum) -> CycloNum {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        CycloNum { ctx: Arc::clone(&self.ctx), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        -&self
    }
}

/// Renders as an expression in the CLI point grammar, e.g. `1/2 - zeta(5,2)`.
impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            if i == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "zeta({},{i})", self.ctx.n)?;
            } else {
                write!(f, "{mag}*zeta({},{i})", self.ctx.n)?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloNum[Q(zeta{})]({self})", self.ctx.n)
    }
}
