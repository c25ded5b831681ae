//! The deformation `(t, λz₀ + εσ₀(t)w₀, λw₀, ε)` joining the λ-homothety
//! bundle (ε = 0) to the manifold itself (ε = 1), with ε a formal variable.

use thiserror::Error;

use crate::autgrp::{chart_map, lift_space, AutElement, AutError};
use crate::bundle::{glues, transition, BundleError, BundleMap, ChartMap, GlueStatus, ManifoldSpec};
use crate::cyclo::CycloNum;
use crate::moebius::Moebius;
use crate::poly::{EpsPoly, LaurentPoly, PolyError, Var};

/// Chart map with fiber entries polynomial in ε.
pub type FamilyMap = ChartMap<EpsPoly>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("family maps need a canonical spec")]
    NonCanonical,
    #[error("scaling factor must be nonzero")]
    ZeroScaling,
    #[error(transparent)]
    Aut(#[from] AutError),
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

fn lift_entries(m: &ChartMap<LaurentPoly>) -> FamilyMap {
    let [[a, b], [c, d]] = m.fiber();
    let f = |p: &LaurentPoly| EpsPoly::from_laurent(p, 0);
    ChartMap::new(m.var(), m.base().clone(), [[f(a), f(b)], [f(c), f(d)]]).expect("same chart variable")
}

/// `g̃`: diagonal λ, upper entry `ε·σ₀(t)`.
pub fn family_contraction(spec: &ManifoldSpec) -> Result<FamilyMap, FamilyError> {
    if !spec.is_canonical() {
        return Err(FamilyError::NonCanonical);
    }
    let lam = EpsPoly::from_laurent(&LaurentPoly::constant(Var::T, spec.lambda_num()), 0);
    let upper = EpsPoly::from_laurent(spec.sigma0(), 1);
    Ok(ChartMap::new(Var::T, Moebius::identity(spec.ctx()), [[lam.clone(), upper], [EpsPoly::zero(Var::T), lam]])?)
}

/// The ε-independent family map with the same charts as `e`.
pub fn extend_to_family(e: &AutElement, spec: &ManifoldSpec) -> FamilyMap {
    lift_entries(&chart_map(e, spec))
}

/// Substitutes a value for ε in every fiber entry.
pub fn specialize(f: &FamilyMap, eps: &CycloNum) -> Result<ChartMap<LaurentPoly>, FamilyError> {
    let [[a, b], [c, d]] = f.fiber();
    let s = |p: &EpsPoly| p.specialize(eps);
    Ok(ChartMap::new(f.var(), f.base().clone(), [[s(a)?, s(b)?], [s(c)?, s(d)?]])?)
}

/// Gluing with ε kept formal.
pub fn family_glues(f: &FamilyMap, spec: &ManifoldSpec) -> Result<GlueStatus, FamilyError> {
    Ok(glues(f, spec)?)
}

/// `F` glues and `g̃ ∘ F = F ∘ g̃` in both charts, as identities in `(t, ε)`.
pub fn commutes_in_family(f: &FamilyMap, spec: &ManifoldSpec) -> Result<bool, FamilyError> {
    let tr = transition(spec);
    let map = BundleMap::from_t_chart(f.clone(), tr)?;
    if !map.is_verified() {
        return Ok(false);
    }
    let g = BundleMap::from_t_chart(family_contraction(spec)?, tr)?;
    Ok(map.commutes_with(&g)?)
}

/// Whether `t ↦ μt` lifts to a glued bundle map commuting with the
/// contraction: the λ-homothety when `at_eps_zero`, otherwise `g̃` with ε
/// formal.
///
/// The candidate fibers are `[[α₀(t), τ₀(t)], [0, α₀(t)]]` with ε-free entries
/// of degree at most `b − a`. Higher ε-terms in a lift cannot help: the
/// ε¹ part of the commutator with `g̃` is `α₀(0)·(σ₀(μt) − σ₀(t))` regardless.
pub fn scaling_lift(mu: &CycloNum, spec: &ManifoldSpec, at_eps_zero: bool) -> Result<bool, FamilyError> {
    if mu.is_zero() {
        return Err(FamilyError::ZeroScaling);
    }
    let degree = (spec.b() - spec.a()) as usize;
    let tr = transition(spec);
    let sol = if at_eps_zero {
        let lam = LaurentPoly::constant(Var::T, spec.lambda_num());
        let homothety = ChartMap::new(
            Var::T,
            Moebius::identity(spec.ctx()),
            [[lam.clone(), LaurentPoly::zero(Var::T)], [LaurentPoly::zero(Var::T), lam]],
        )?;
        lift_space(mu, &homothety, &tr, degree)?
    } else {
        lift_space(mu, &family_contraction(spec)?, &tr, degree)?
    };
    Ok(sol.alpha_is_constant() && sol.admits_invertible())
}
