use std::sync::Arc;

use num_traits::{One, Signed};
use thiserror::Error;

use crate::cyclo::{common_conductor, CycloCtx, CycloNum, Rational};
use crate::poly::{sigma_zero, LaurentPoly, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("a must be greater than 3 (got a = {0})")]
    ATooSmall(u32),
    #[error("b ≥ 3a is required (got a = {a}, b = {b})")]
    BTooSmall { a: u32, b: u32 },
    #[error("a, b and c must be positive")]
    NonPositive,
    #[error("lambda must satisfy 0 < lambda < 1 (got {0})")]
    LambdaOutOfRange(Rational),
    #[error("the section must be a nonzero polynomial in t of degree at most c = {0}")]
    BadSection(u32),
}

/// The data `(a, b, c, λ, σ)` defining a quotient `W/⟨g⟩` of
/// `𝒪(b) ⊕ 𝒪(a)` minus its zero section.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifoldSpec {
    a: u32,
    b: u32,
    c: u32,
    lambda: Rational,
    sigma0: LaurentPoly,
    ctx: Arc<CycloCtx>,
}

impl ManifoldSpec {
    pub fn default_lambda() -> Rational {
        Rational::new(1.into(), 2.into())
    }

    /// The manifold with `c = 2a` and `σ₀ = tᵃ ∏ₖ (t − ζₐᵏ)`; requires
    /// `a > 3`, `b ≥ 3a` and `0 < λ < 1`.
    pub fn canonical(a: u32, b: u32, lambda: Rational) -> Result<Self, SpecError> {
        if a <= 3 {
            return Err(SpecError::ATooSmall(a));
        }
        if b < 3 * a {
            return Err(SpecError::BTooSmall { a, b });
        }
        let sigma0 = sigma_zero(a).expect("a > 0");
        Self::general(a, b, 2 * a, lambda, sigma0)
    }

    /// Arbitrary positive `(a, b, c)` and a section `σ₀` of `𝒪(c)` in the
    /// t-chart. Gluing of the contraction is not assumed.
    pub fn general(a: u32, b: u32, c: u32, lambda: Rational, sigma0: LaurentPoly) -> Result<Self, SpecError> {
        if a == 0 || b == 0 || c == 0 {
            return Err(SpecError::NonPositive);
        }
        if !lambda.is_positive() || lambda >= Rational::one() {
            return Err(SpecError::LambdaOutOfRange(lambda));
        }
        let in_range = sigma0.min_exp().is_some_and(|e| e >= 0) && sigma0.max_exp().is_some_and(|e| e <= c as i64);
        if sigma0.var() != Var::T || !in_range {
            return Err(SpecError::BadSection(c));
        }
        let n = common_conductor(a, sigma0.conductor().unwrap_or(1));
        let ctx = CycloCtx::new(n).expect("positive conductor");
        let sigma0 = sigma0.promote(n).expect("divides lcm");
        Ok(ManifoldSpec { a, b, c, lambda, sigma0, ctx })
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    pub fn lambda(&self) -> &Rational {
        &self.lambda
    }

    pub fn ctx(&self) -> &Arc<CycloCtx> {
        &self.ctx
    }

    /// λ as an element of the working field.
    pub fn lambda_num(&self) -> CycloNum {
        self.ctx.rational(self.lambda.clone())
    }

    pub fn sigma0(&self) -> &LaurentPoly {
        &self.sigma0
    }

    /// `σ₁(s) = sᶜ σ₀(1/s)`.
    pub fn sigma1(&self) -> LaurentPoly {
        self.sigma0.substitute_inverse(Var::S).shift(self.c as i64)
    }

    /// The exponent `b − a − c` of the s-chart correction factor.
    pub fn gluing_margin(&self) -> i64 {
        self.b as i64 - self.a as i64 - self.c as i64
    }

    pub fn is_canonical(&self) -> bool {
        self.a > 3
            && self.b >= 3 * self.a
            && self.c == 2 * self.a
            && sigma_zero(self.a).ok().and_then(|s| s.promote(self.ctx.conductor()).ok()).as_ref() == Some(&self.sigma0)
    }

    /// `ζₐᵏ` in the working field: the base rotation of angle `2πk/a`.
    pub fn rotation(&self, k: i64) -> CycloNum {
        let step = (self.ctx.conductor() / self.a) as i64;
        self.ctx.root_of_unity(k * step)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_validation() {
        let half = ManifoldSpec::default_lambda();
        assert!(ManifoldSpec::canonical(4, 12, half.clone()).unwrap().is_canonical());
        assert_eq!(ManifoldSpec::canonical(3, 12, half.clone()), Err(SpecError::ATooSmall(3)));
        assert_eq!(ManifoldSpec::canonical(4, 11, half.clone()), Err(SpecError::BTooSmall { a: 4, b: 11 }));
        let one = Rational::one();
        assert_eq!(ManifoldSpec::canonical(4, 12, one.clone()), Err(SpecError::LambdaOutOfRange(one)));
        assert!(ManifoldSpec::canonical(4, 12, -half).is_err());
    }

    #[test]
    fn sigma_one_and_rotation() {
        let spec = ManifoldSpec::canonical(4, 12, ManifoldSpec::default_lambda()).unwrap();
        let c = spec.ctx().clone();
        assert_eq!(spec.sigma1(), LaurentPoly::from_terms(Var::S, [(0, c.one()), (4, -c.one())]));
        assert_eq!(spec.rotation(1), c.root_of_unity(1));
        assert_eq!(spec.gluing_margin(), 0);
    }

    #[test]
    fn general_relaxes_bounds() {
        let spec = ManifoldSpec::general(4, 11, 8, ManifoldSpec::default_lambda(), sigma_zero(4).unwrap()).unwrap();
        assert_eq!(spec.gluing_margin(), -1);
        assert!(!spec.is_canonical());
        let bad = ManifoldSpec::general(4, 12, 7, ManifoldSpec::default_lambda(), sigma_zero(4).unwrap());
        assert_eq!(bad, Err(SpecError::BadSection(7)));
    }
}
