use std::fmt;

use crate::cyclo::CycloNum;
use crate::poly::{EpsPoly, LaurentPoly, PolyError, Var};

/// Position of a coefficient: chart exponent and ε exponent (0 for maps
/// without a deformation parameter).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermKey {
    pub exp: i64,
    pub eps: u32,
}

/// Coefficient ring of a fiber matrix: [`LaurentPoly`] for maps of one
/// manifold, [`EpsPoly`] for maps of the whole ε-family.
pub trait ChartEntry: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    fn zero(var: Var) -> Self;
    fn constant(var: Var, c: CycloNum) -> Self;
    fn monomial(var: Var, key: TermKey, c: CycloNum) -> Self;
    fn var(&self) -> Var;
    fn is_zero(&self) -> bool;
    fn try_add(&self, rhs: &Self) -> Result<Self, PolyError>;
    fn try_sub(&self, rhs: &Self) -> Result<Self, PolyError>;
    fn try_mul(&self, rhs: &Self) -> Result<Self, PolyError>;
    fn scale(&self, c: &CycloNum) -> Self;
    fn shift(&self, k: i64) -> Self;
    fn precompose_scale(&self, mu: &CycloNum) -> Result<Self, PolyError>;
    fn substitute_inverse(&self, var: Var) -> Self;
    fn coefficients(&self) -> Vec<(TermKey, CycloNum)>;
    fn promote(&self, m: u32) -> Result<Self, PolyError>;
}

impl ChartEntry for LaurentPoly {
    fn zero(var: Var) -> Self {
        LaurentPoly::zero(var)
    }
    fn constant(var: Var, c: CycloNum) -> Self {
        LaurentPoly::constant(var, c)
    }
    fn monomial(var: Var, key: TermKey, c: CycloNum) -> Self {
        assert_eq!(key.eps, 0, "LaurentPoly has no ε");
        LaurentPoly::monomial(var, key.exp, c)
    }
    fn var(&self) -> Var {
        LaurentPoly::var(self)
    }
    fn is_zero(&self) -> bool {
        LaurentPoly::is_zero(self)
    }
    fn try_add(&self, rhs: &Self) -> Result<Self, PolyError> {
        self.checked_add(rhs)
    }
    fn try_sub(&self, rhs: &Self) -> Result<Self, PolyError> {
        self.checked_sub(rhs)
    }
    fn try_mul(&self, rhs: &Self) -> Result<Self, PolyError> {
        self.checked_mul(rhs)
    }
    fn scale(&self, c: &CycloNum) -> Self {
        LaurentPoly::scale(self, c)
    }
    fn shift(&self, k: i64) -> Self {
        LaurentPoly::shift(self, k)
    }
    fn precompose_scale(&self, mu: &CycloNum) -> Result<Self, PolyError> {
        LaurentPoly::precompose_scale(self, mu)
    }
    fn substitute_inverse(&self, var: Var) -> Self {
        LaurentPoly::substitute_inverse(self, var)
    }
    fn coefficients(&self) -> Vec<(TermKey, CycloNum)> {
        self.terms().map(|(exp, c)| (TermKey { exp, eps: 0 }, c.clone())).collect()
    }
    fn promote(&self, m: u32) -> Result<Self, PolyError> {
        LaurentPoly::promote(self, m)
    }
}

impl ChartEntry for EpsPoly {
    fn zero(var: Var) -> Self {
        EpsPoly::zero(var)
    }
    fn constant(var: Var, c: CycloNum) -> Self {
        EpsPoly::monomial(var, 0, 0, c)
    }
    fn monomial(var: Var, key: TermKey, c: CycloNum) -> Self {
        EpsPoly::monomial(var, key.exp, key.eps, c)
    }
    fn var(&self) -> Var {
        EpsPoly::var(self)
    }
    fn is_zero(&self) -> bool {
        EpsPoly::is_zero(self)
    }
    fn try_add(&self, rhs: &Self) -> Result<Self, PolyError> {
        self.checked_add(rhs)
    }
    fn try_sub(&self, rhs: &Self) -> Result<Self, PolyError> {
        self.checked_sub(rhs)
    }
    fn try_mul(&self, rhs: &Self) -> Result<Self, PolyError> {
        self.checked_mul(rhs)
    }
    fn scale(&self, c: &CycloNum) -> Self {
        EpsPoly::scale(self, c)
    }
    fn shift(&self, k: i64) -> Self {
        EpsPoly::shift(self, k)
    }
    fn precompose_scale(&self, mu: &CycloNum) -> Result<Self, PolyError> {
        EpsPoly::precompose_scale(self, mu)
    }
    fn substitute_inverse(&self, var: Var) -> Self {
        EpsPoly::substitute_inverse(self, var)
    }
    fn coefficients(&self) -> Vec<(TermKey, CycloNum)> {
        self.terms().map(|((exp, eps), c)| (TermKey { exp, eps }, c.clone())).collect()
    }
    fn promote(&self, m: u32) -> Result<Self, PolyError> {
        EpsPoly::promote(self, m)
    }
}
