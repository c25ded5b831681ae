//! Chart-level maps of `W = 𝒪(b) ⊕ 𝒪(a) ∖ {zero section}` over ℙ¹.
//!
//! A map is written in the t-chart `(t, z₀, w₀)` as a base Möbius map plus a
//! 2×2 fiber matrix acting on `(z₀, w₀)`. The s-chart expression is obtained by
//! conjugating with the transition `s = 1/t, z₁ = sᵇz₀, w₁ = sᵃw₀`; the map is
//! globally defined exactly when that expression has no negative powers of s.

mod entry;
mod spec;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::cyclo::{CycloCtx, CycloError, CycloNum};
use crate::moebius::Moebius;
use crate::poly::{LaurentPoly, PolyError, Var};

pub use entry::{ChartEntry, TermKey};
pub use spec::{ManifoldSpec, SpecError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BundleError {
    #[error("base map {0} is not a scaling z -> mu*z and cannot be carried to the other chart")]
    UnsupportedBase(String),
    #[error("map is not verified to glue")]
    NotVerified,
    #[error("map does not glue: {0}")]
    GluingFailed(Obstruction),
    #[error("chart expressions disagree: {0}")]
    Inconsistent(String),
    #[error("point with t = 0 has no s-chart coordinates")]
    AtPole,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Cyclo(#[from] CycloError),
}

/// The chart change `(x, z, w) ↦ (1/x, x^{−b} z, x^{−a} w)`. The same formula
/// goes t → s and s → t, so it is an involution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Transition {
    /// Weight on the z-coordinate, the degree of the `𝒪(b)` summand.
    pub z_weight: i64,
    /// Weight on the w-coordinate, the degree of the `𝒪(a)` summand.
    pub w_weight: i64,
}

impl Transition {
    /// Carries a point with base coordinate `x ≠ 0` to the other chart.
    pub fn apply(&self, x: &CycloNum, z: &CycloNum, w: &CycloNum) -> Result<(CycloNum, CycloNum, CycloNum), BundleError> {
        if x.is_zero() {
            return Err(BundleError::AtPole);
        }
        let x_inv = x.inv()?;
        Ok((x_inv.clone(), z * &x_inv.pow(self.z_weight)?, w * &x_inv.pow(self.w_weight)?))
    }

    fn weights(&self) -> [i64; 2] {
        [self.z_weight, self.w_weight]
    }
}

/// `transition(spec)`: `st = 1, z₁ = sᵇz₀, w₁ = sᵃw₀`.
pub fn transition(spec: &ManifoldSpec) -> Transition {
    Transition { z_weight: spec.b() as i64, w_weight: spec.a() as i64 }
}

/// One coefficient that blocks gluing: entry `(row, col)` of the
/// other-chart fiber matrix carries a negative power of the chart variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionTerm {
    pub row: usize,
    pub col: usize,
    pub key: TermKey,
    pub coeff: CycloNum,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Obstruction {
    pub terms: Vec<ObstructionTerm>,
}

impl Obstruction {
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Distinct offending exponents, increasing.
    pub fn exponents(&self) -> Vec<i64> {
        let mut e: Vec<i64> = self.terms.iter().map(|t| t.key.exp).collect();
        e.sort_unstable();
        e.dedup();
        e
    }
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.terms.iter().map(|t| format!("entry ({},{}) has ({})*s^{}", t.row, t.col, t.coeff, t.key.exp)).collect();
        f.write_str(&parts.join("; "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GlueStatus {
    Verified,
    Failed(Obstruction),
}

impl GlueStatus {
    pub fn is_verified(&self) -> bool {
        matches!(self, GlueStatus::Verified)
    }

    pub fn obstruction(&self) -> Option<&Obstruction> {
        match self {
            GlueStatus::Verified => None,
            GlueStatus::Failed(o) => Some(o),
        }
    }
}

pub type Fiber<E> = [[E; 2]; 2];

fn fiber_mul<E: ChartEntry>(x: &Fiber<E>, y: &Fiber<E>) -> Result<Fiber<E>, PolyError> {
    let e = |i: usize, j: usize| -> Result<E, PolyError> { x[i][0].try_mul(&y[0][j])?.try_add(&x[i][1].try_mul(&y[1][j])?) };
    Ok([[e(0, 0)?, e(0, 1)?], [e(1, 0)?, e(1, 1)?]])
}

/// Entrywise `x − y`.
pub fn fiber_sub<E: ChartEntry>(x: &Fiber<E>, y: &Fiber<E>) -> Result<Fiber<E>, PolyError> {
    let e = |i: usize, j: usize| x[i][j].try_sub(&y[i][j]);
    Ok([[e(0, 0)?, e(0, 1)?], [e(1, 0)?, e(1, 1)?]])
}

/// A fibered map written in a single chart: `(x, v) ↦ (base(x), fiber(x)·v)`.
#[derive(Clone, PartialEq, Eq)]
pub struct ChartMap<E: ChartEntry = LaurentPoly> {
    var: Var,
    base: Moebius,
    fiber: Fiber<E>,
}

impl<E: ChartEntry> ChartMap<E> {
    pub fn new(var: Var, base: Moebius, fiber: Fiber<E>) -> Result<Self, BundleError> {
        for x in fiber.iter().flatten() {
            if x.var() != var {
                return Err(PolyError::VarMismatch(var, x.var()).into());
            }
        }
        Ok(ChartMap { var, base, fiber })
    }

    pub fn identity(var: Var, ctx: &Arc<CycloCtx>) -> Self {
        let one = || E::constant(var, ctx.one());
        ChartMap { var, base: Moebius::identity(ctx), fiber: [[one(), E::zero(var)], [E::zero(var), one()]] }
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn base(&self) -> &Moebius {
        &self.base
    }

    pub fn fiber(&self) -> &Fiber<E> {
        &self.fiber
    }

    /// `μ` when the base map is `x ↦ μx`.
    pub fn base_scale(&self) -> Result<CycloNum, BundleError> {
        self.base.is_rotation_about_zero().ok_or_else(|| BundleError::UnsupportedBase(self.base.to_string()))
    }

    /// `self ∘ other`: `(x, v) ↦ (μ_F μ_G x, M_F(μ_G x) M_G(x) v)`.
    pub fn compose(&self, other: &ChartMap<E>) -> Result<ChartMap<E>, BundleError> {
        if self.var != other.var {
            return Err(PolyError::VarMismatch(self.var, other.var).into());
        }
        let mu = other.base_scale()?;
        let shifted = self.map_entries(|e| e.precompose_scale(&mu))?;
        Ok(ChartMap { var: self.var, base: self.base.compose(&other.base), fiber: fiber_mul(&shifted.fiber, &other.fiber)? })
    }

    fn map_entries(&self, f: impl Fn(&E) -> Result<E, PolyError>) -> Result<ChartMap<E>, BundleError> {
        let [[a, b], [c, d]] = &self.fiber;
        Ok(ChartMap { var: self.var, base: self.base.clone(), fiber: [[f(a)?, f(b)?], [f(c)?, f(d)?]] })
    }

    /// The expression of the same map in the other chart.
    ///
    /// For base `x ↦ μx` and fiber `(mᵢⱼ)`, the result has base `y ↦ μ⁻¹y`
    /// and entries `μ^{−wᵢ} y^{wᵢ − wⱼ} mᵢⱼ(1/y)` with weights `w = (b, a)`.
    pub fn conjugate(&self, tr: &Transition) -> Result<ChartMap<E>, BundleError> {
        let mu = self.base_scale()?;
        let new_var = self.var.other();
        let weights = tr.weights();
        let mut entries = Vec::with_capacity(4);
        for (i, row) in self.fiber.iter().enumerate() {
            let row_factor = mu.pow(-weights[i])?;
            for (j, m) in row.iter().enumerate() {
                entries.push(m.substitute_inverse(new_var).shift(weights[i] - weights[j]).scale(&row_factor));
            }
        }
        let [a, b, c, d]: [E; 4] = entries.try_into().expect("four entries");
        let base = Moebius::scaling(&mu.inv()?).expect("nonzero scale");
        Ok(ChartMap { var: new_var, base, fiber: [[a, b], [c, d]] })
    }

    /// Negative-exponent terms of the fiber entries.
    pub fn pole_terms(&self) -> Obstruction {
        let mut terms = Vec::new();
        for (row, r) in self.fiber.iter().enumerate() {
            for (col, e) in r.iter().enumerate() {
                for (key, coeff) in e.coefficients() {
                    if key.exp < 0 {
                        terms.push(ObstructionTerm { row, col, key, coeff });
                    }
                }
            }
        }
        Obstruction { terms }
    }

    pub fn promote(&self, m: u32) -> Result<ChartMap<E>, BundleError> {
        let promoted = self.map_entries(|e| e.promote(m))?;
        Ok(ChartMap { base: self.base.promote(m).map_err(|e| BundleError::Inconsistent(e.to_string()))?, ..promoted })
    }
}

impl ChartMap<LaurentPoly> {
    /// The fiber matrix evaluated at a base point.
    pub fn fiber_at(&self, x: &CycloNum) -> Result<[[CycloNum; 2]; 2], BundleError> {
        let e = |i: usize, j: usize| self.fiber[i][j].eval(x);
        Ok([[e(0, 0)?, e(0, 1)?], [e(1, 0)?, e(1, 1)?]])
    }
}

impl<E: ChartEntry> fmt::Display for ChartMap<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [[a, b], [c, d]] = &self.fiber;
        write!(f, "{} -> {}; fiber [[{a}, {b}], [{c}, {d}]]", self.var, self.base)
    }
}

impl<E: ChartEntry> fmt::Debug for ChartMap<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChartMap({self})")
    }
}

/// `conjugate_to_s_chart`: the s-chart expression of a t-chart map.
pub fn conjugate_to_s_chart<E: ChartEntry>(f0: &ChartMap<E>, spec: &ManifoldSpec) -> Result<ChartMap<E>, BundleError> {
    f0.conjugate(&transition(spec))
}

/// Whether a t-chart map extends over `s = 0`, with the obstruction if not.
pub fn glues<E: ChartEntry>(f0: &ChartMap<E>, spec: &ManifoldSpec) -> Result<GlueStatus, BundleError> {
    glue_status(f0, &transition(spec))
}

fn glue_status<E: ChartEntry>(f0: &ChartMap<E>, tr: &Transition) -> Result<GlueStatus, BundleError> {
    let obstruction = f0.conjugate(tr)?.pole_terms();
    Ok(if obstruction.is_empty() { GlueStatus::Verified } else { GlueStatus::Failed(obstruction) })
}

/// A map given in both charts together with its gluing verdict.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BundleMap<E: ChartEntry = LaurentPoly> {
    chart0: ChartMap<E>,
    chart1: ChartMap<E>,
    status: GlueStatus,
    transition: Transition,
}

impl<E: ChartEntry> BundleMap<E> {
    /// Builds the s-chart expression of `chart0` and checks gluing.
    pub fn from_t_chart(chart0: ChartMap<E>, tr: Transition) -> Result<Self, BundleError> {
        if chart0.var() != Var::T {
            return Err(PolyError::VarMismatch(Var::T, chart0.var()).into());
        }
        let chart1 = chart0.conjugate(&tr)?;
        let obstruction = chart1.pole_terms();
        let status = if obstruction.is_empty() { GlueStatus::Verified } else { GlueStatus::Failed(obstruction) };
        Ok(BundleMap { chart0, chart1, status, transition: tr })
    }

    pub fn identity(ctx: &Arc<CycloCtx>, tr: Transition) -> Self {
        Self::from_t_chart(ChartMap::identity(Var::T, ctx), tr).expect("identity glues")
    }

    pub fn chart0(&self) -> &ChartMap<E> {
        &self.chart0
    }

    pub fn chart1(&self) -> &ChartMap<E> {
        &self.chart1
    }

    pub fn status(&self) -> &GlueStatus {
        &self.status
    }

    pub fn is_verified(&self) -> bool {
        self.status.is_verified()
    }

    /// Chartwise `self ∘ other`; both must be verified. The s-chart
    /// composite is cross-checked against conjugation of the t-chart one.
    pub fn compose(&self, other: &BundleMap<E>) -> Result<BundleMap<E>, BundleError> {
        if !self.is_verified() || !other.is_verified() {
            return Err(BundleError::NotVerified);
        }
        let out = BundleMap::from_t_chart(self.chart0.compose(&other.chart0)?, self.transition)?;
        let chart1 = self.chart1.compose(&other.chart1)?;
        if chart1 != out.chart1 {
            return Err(BundleError::Inconsistent(format!("s-chart composite {chart1} vs conjugate {}", out.chart1)));
        }
        Ok(out)
    }

    /// `self ∘ other = other ∘ self` as exact chart identities.
    pub fn commutes_with(&self, other: &BundleMap<E>) -> Result<bool, BundleError> {
        Ok(self.compose(other)? == other.compose(self)?)
    }
}

impl BundleMap<LaurentPoly> {
    /// Exact check on the fiber over `t = s = 1` that the two chart
    /// expressions describe the same map.
    pub fn agrees_on_unit_fiber(&self) -> Result<bool, BundleError> {
        let ctx = self.chart0.base().entries()[0][0].ctx().clone();
        let one = ctx.one();
        let mu = self.chart0.base_scale()?;
        let m = self.chart0.fiber_at(&one)?;
        let n = self.chart1.fiber_at(&one)?;
        // image of (1, z, w) in the t-chart is (μ, M(1)(z, w)); move it to the s-chart
        let image_s = self.chart1.base().apply(&crate::moebius::ProjPoint::finite(one.clone()));
        if image_s != crate::moebius::ProjPoint::finite(mu.inv()?) {
            return Ok(false);
        }
        for col in 0..2 {
            let (_, z1, w1) = self.transition.apply(&mu, &m[0][col], &m[1][col])?;
            if z1 != n[0][col] || w1 != n[1][col] {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// The t-chart expression `(t, λz₀ + σ₀(t)w₀, λw₀)` of the contraction.
pub fn contraction_chart(spec: &ManifoldSpec) -> ChartMap<LaurentPoly> {
    let ctx = spec.ctx();
    let lam = LaurentPoly::constant(Var::T, spec.lambda_num());
    ChartMap::new(Var::T, Moebius::identity(ctx), [[lam.clone(), spec.sigma0().clone()], [LaurentPoly::zero(Var::T), lam]])
        .expect("t-chart entries")
}

/// The glued contraction `g`; fails when `b − a − c < 0`.
pub fn contraction(spec: &ManifoldSpec) -> Result<BundleMap<LaurentPoly>, BundleError> {
    let g = BundleMap::from_t_chart(contraction_chart(spec), transition(spec))?;
    match g.status() {
        GlueStatus::Verified => Ok(g),
        GlueStatus::Failed(o) => Err(BundleError::GluingFailed(o.clone())),
    }
}

pub fn compose<E: ChartEntry>(f: &BundleMap<E>, g: &BundleMap<E>) -> Result<BundleMap<E>, BundleError> {
    f.compose(g)
}

pub fn commutes_with_contraction(f: &BundleMap<LaurentPoly>, spec: &ManifoldSpec) -> Result<bool, BundleError> {
    if !f.is_verified() {
        return Err(BundleError::NotVerified);
    }
    f.commutes_with(&contraction(spec)?)
}
