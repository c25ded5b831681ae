//! Laurent polynomials over ℚ(ζₙ), the two-variable ε-family polynomials, and
//! exact linear algebra over the coefficient field.

mod eps;
mod linalg;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::One;
use thiserror::Error;

use crate::cyclo::{CycloCtx, CycloError, CycloNum};

pub use eps::EpsPoly;
pub use linalg::LinearSystem;

/// Largest exponent magnitude a polynomial may carry.
pub const MAX_EXPONENT: i64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("variable mismatch: {0} vs {1}")]
    VarMismatch(Var, Var),
    #[error("exponent {0} exceeds the supported range ±{MAX_EXPONENT}")]
    ExponentOverflow(i64),
    #[error("scaling factor must be nonzero")]
    ZeroScale,
    #[error("evaluation at zero of a polynomial with negative exponents")]
    PoleAtZero,
    #[error("linear system rows must all have {expected} entries, found {found}")]
    Ragged { expected: usize, found: usize },
    #[error(transparent)]
    Cyclo(#[from] CycloError),
}

/// Chart variable of the base ℙ¹: `t` on the chart around 0, `s = 1/t` around ∞.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    T,
    S,
}

impl Var {
    /// The coordinate of the opposite chart.
    pub fn other(self) -> Var {
        match self {
            Var::T => Var::S,
            Var::S => Var::T,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Var::T => "t",
            Var::S => "s",
        })
    }
}

fn check_exp(e: i64) -> Result<i64, PolyError> {
    if e.abs() > MAX_EXPONENT {
        Err(PolyError::ExponentOverflow(e))
    } else {
        Ok(e)
    }
}

/// A finite-support Laurent polynomial Σ cₑ Xᵉ. Zero coefficients are never
/// stored, so structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    var: Var,
    terms: BTreeMap<i64, CycloNum>,
}

impl LaurentPoly {
    pub fn zero(var: Var) -> Self {
        LaurentPoly { var, terms: BTreeMap::new() }
    }

    pub fn constant(var: Var, c: CycloNum) -> Self {
        Self::monomial(var, 0, c)
    }

    pub fn monomial(var: Var, exp: i64, c: CycloNum) -> Self {
        let mut p = Self::zero(var);
        if !c.is_zero() {
            p.terms.insert(exp, c);
        }
        p
    }

    /// Sums the given terms; repeated exponents accumulate.
    pub fn from_terms(var: Var, terms: impl IntoIterator<Item = (i64, CycloNum)>) -> Self {
        let mut p = Self::zero(var);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: i64, c: CycloNum) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    o.insert(sum);
                }
            }
        }
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &CycloNum)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, e: i64) -> Option<&CycloNum> {
        self.terms.get(&e)
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn conductor(&self) -> Option<u32> {
        self.terms.values().next().map(CycloNum::conductor)
    }

    fn same_var(&self, rhs: &Self) -> Result<(), PolyError> {
        if self.var == rhs.var {
            Ok(())
        } else {
            Err(PolyError::VarMismatch(self.var, rhs.var))
        }
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, PolyError> {
        self.same_var(rhs)?;
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            if let Some(x) = out.terms.get(e) {
                x.checked_add(c)?;
            }
            out.add_term(*e, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self, PolyError> {
        self.checked_add(&-rhs)
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, PolyError> {
        self.same_var(rhs)?;
        let mut out = Self::zero(self.var);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(check_exp(e1 + e2)?, c1.checked_mul(c2)?);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &CycloNum) -> Self {
        Self::from_terms(self.var, self.terms.iter().map(|(e, x)| (*e, x * c)))
    }

    /// Multiplication by `Xᵏ`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly {
            var: self.var,
            terms: self.terms.iter().map(|(e, c)| (check_exp(e + k).unwrap_or_else(|e| panic!("{e}")), c.clone())).collect(),
        }
    }

    /// `p(μ·X)`: the coefficient at exponent `e` is multiplied by `μᵉ`.
    pub fn precompose_scale(&self, mu: &CycloNum) -> Result<Self, PolyError> {
        if mu.is_zero() {
            return Err(PolyError::ZeroScale);
        }
        let mut out = Self::zero(self.var);
        for (e, c) in &self.terms {
            out.add_term(*e, c.checked_mul(&mu.pow(*e)?)?);
        }
        Ok(out)
    }

    /// The substitution `X ↦ 1/Y`: exponent `e` becomes `−e` under the new tag.
    pub fn substitute_inverse(&self, new_var: Var) -> Self {
        LaurentPoly { var: new_var, terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect() }
    }

    pub fn retag(&self, var: Var) -> Self {
        LaurentPoly { var, terms: self.terms.clone() }
    }

    /// The terms with negative exponent, lowest first.
    pub fn negative_part(&self) -> Vec<(i64, CycloNum)> {
        self.terms.range(..0).map(|(e, c)| (*e, c.clone())).collect()
    }

    /// `Ok` when no negative exponents occur; otherwise the offending terms,
    /// which certify that the expression does not extend over `X = 0`.
    pub fn polynomial_check(&self) -> Result<(), Vec<(i64, CycloNum)>> {
        let neg = self.negative_part();
        if neg.is_empty() {
            Ok(())
        } else {
            Err(neg)
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.min_exp().map_or(true, |e| e >= 0)
    }

    pub fn eval(&self, x: &CycloNum) -> Result<CycloNum, PolyError> {
        let mut acc = x.ctx().zero();
        for (e, c) in &self.terms {
            if *e < 0 && x.is_zero() {
                return Err(PolyError::PoleAtZero);
            }
            acc = acc.checked_add(&c.checked_mul(&x.pow(*e)?)?)?;
        }
        Ok(acc)
    }

    /// Moves every coefficient into ℚ(ζₘ).
    pub fn promote(&self, m: u32) -> Result<Self, PolyError> {
        let mut out = Self::zero(self.var);
        for (e, c) in &self.terms {
            out.terms.insert(*e, c.promote(m)?);
        }
        Ok(out)
    }
}

macro_rules! forward_binop {
    ($imp:ident, $method:ident, $checked:ident) => {
        impl $imp<&LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $imp<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { var: self.var, terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

pub(crate) fn fmt_term(f: &mut fmt::Formatter<'_>, first: bool, c: &CycloNum, mono: &str) -> fmt::Result {
    let text = c.to_string();
    let compound = text.contains(' ');
    let (neg, body) = match text.strip_prefix('-') {
        Some(rest) if !compound => (true, rest.to_string()),
        _ => (false, text),
    };
    if !first {
        f.write_str(if neg { " - " } else { " + " })?;
    } else if neg {
        f.write_str("-")?;
    }
    match (mono.is_empty(), body.as_str(), compound) {
        (true, _, _) => f.write_str(&body),
        (false, "1", _) => f.write_str(mono),
        (false, _, true) => write!(f, "({body})*{mono}"),
        (false, _, false) => write!(f, "{body}*{mono}"),
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono = match e {
                0 => String::new(),
                1 => self.var.to_string(),
                e => format!("{}^{e}", self.var),
            };
            fmt_term(f, i == 0, c, &mono)?;
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

/// `tᵃ ∏_{k=0}^{a−1} (t − ζₐᵏ)`, expanded over ℚ(ζₐ) factor by factor.
///
/// The product runs over all a-th roots of unity, so the result is
/// `t^{2a} − tᵃ`; the expansion is done literally rather than assumed.
pub fn sigma_zero(a: u32) -> Result<LaurentPoly, PolyError> {
    let ctx = CycloCtx::new(a)?;
    let mut acc = LaurentPoly::monomial(Var::T, a as i64, ctx.one());
    for k in 0..a as i64 {
        let factor = LaurentPoly::from_terms(Var::T, [(1, ctx.one()), (0, -ctx.root_of_unity(k))]);
        acc = acc.checked_mul(&factor)?;
    }
    debug_assert!(acc.terms.values().all(|c| c.as_rational().is_some()));
    debug_assert!(acc.coeff(2 * a as i64).is_some_and(|c| c.as_rational().is_some_and(|q| q.is_one())));
    Ok(acc)
}
