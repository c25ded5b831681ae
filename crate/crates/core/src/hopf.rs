//! Which fibers of `W/⟨g⟩ → ℙ¹` are the diagonal Hopf surface X₀ and which
//! are the Jordan-block surface X₁.
//!
//! The fiber over `t` is `ℂ² ∖ 0` modulo `(z, w) ↦ (λz + σ(t)w, λw)`; it is X₀
//! exactly when the off-diagonal entry `σ(t)` vanishes. The biholomorphic
//! classification of the two contractions is taken as known.

use std::fmt;

use thiserror::Error;

use crate::bundle::ManifoldSpec;
use crate::cyclo::{common_conductor, CycloError};
use crate::moebius::{MoebiusError, ProjPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HopfClass {
    /// Quotient by the homothety `(z, w) ↦ (λz, λw)`.
    X0,
    /// Quotient by `(z, w) ↦ (λz + w, λw)`.
    X1,
}

impl fmt::Display for HopfClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HopfClass::X0 => "X0",
            HopfClass::X1 => "X1",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HopfError {
    #[error("special fibers are only enumerated for the canonical section")]
    NonCanonical,
    #[error("special fiber enumeration failed its own re-check at {0}")]
    SelfCheck(String),
    #[error(transparent)]
    Cyclo(#[from] CycloError),
    #[error(transparent)]
    Moebius(#[from] MoebiusError),
}

/// Value of the section at `(u : v)` as a homogeneous form of degree c:
/// `Σ σₑ uᵉ v^{c−e}`. This is `v^c σ₀(u/v)` on the t-chart and `u^c σ₁(v/u)`
/// near ∞, so it vanishes exactly at the zeros of σ.
fn section_value(spec: &ManifoldSpec, p: &ProjPoint) -> Result<crate::cyclo::CycloNum, HopfError> {
    let n = common_conductor(spec.ctx().conductor(), p.conductor());
    let p = p.promote(n)?;
    let mut acc = p.u().ctx().zero();
    for (e, coeff) in spec.sigma0().terms() {
        let term = coeff.promote(n)? * p.u().pow(e)? * p.v().pow(spec.c() as i64 - e)?;
        acc = acc + term;
    }
    Ok(acc)
}

pub fn classify_fiber(spec: &ManifoldSpec, t: &ProjPoint) -> Result<HopfClass, HopfError> {
    Ok(if section_value(spec, t)?.is_zero() { HopfClass::X0 } else { HopfClass::X1 })
}

/// Rational points checked to lie off the special set after enumeration.
fn witness_points(spec: &ManifoldSpec) -> Vec<ProjPoint> {
    let ctx = spec.ctx();
    let mut pts: Vec<ProjPoint> = [2i64, 3, -2, 5, -7].iter().map(|&v| ProjPoint::finite(ctx.integer(v))).collect();
    pts.push(ProjPoint::finite(ctx.rational(crate::cyclo::Rational::new(1.into(), 2.into()))));
    pts.push(ProjPoint::infinity(ctx));
    pts
}

/// `{0} ∪ {ζₐᵏ : 0 ≤ k < a}`: the zeros of `t^{2a} − tᵃ`, in that order.
///
/// Each returned point is re-evaluated and must classify as X₀; a few rational
/// points and ∞ must classify as X₁.
pub fn special_fibers(spec: &ManifoldSpec) -> Result<Vec<ProjPoint>, HopfError> {
    if !spec.is_canonical() {
        return Err(HopfError::NonCanonical);
    }
    let ctx = spec.ctx();
    let mut pts = vec![ProjPoint::finite(ctx.zero())];
    pts.extend((0..spec.a() as i64).map(|k| ProjPoint::finite(spec.rotation(k))));
    for p in &pts {
        if classify_fiber(spec, p)? != HopfClass::X0 {
            return Err(HopfError::SelfCheck(p.to_string()));
        }
    }
    for p in witness_points(spec) {
        if classify_fiber(spec, &p)? != HopfClass::X1 {
            return Err(HopfError::SelfCheck(p.to_string()));
        }
    }
    Ok(pts)
}
