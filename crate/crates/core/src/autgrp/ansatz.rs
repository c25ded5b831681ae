use std::collections::BTreeMap;

use super::AutError;
use crate::bundle::{fiber_sub, ChartEntry, ChartMap, TermKey, Transition};
use crate::cyclo::{common_conductor, CycloCtx, CycloNum};
use crate::moebius::Moebius;
use crate::poly::{LinearSystem, Var};

/// Solution space of the lifting problem for a base scaling `t ↦ μt`.
///
/// The unknowns are the coefficients of `α₀(t) = Σ xᵢ tⁱ` and
/// `τ₀(t) = Σ yᵢ tⁱ` for `0 ≤ i ≤ D`, laid out as `[x₀ … x_D, y₀ … y_D]`, in
/// the fiber matrix `[[α₀, τ₀], [0, α₀]]`.
#[derive(Debug, Clone)]
pub struct AnsatzSolution {
    pub degree_bound: usize,
    pub constraints: usize,
    pub basis: Vec<Vec<CycloNum>>,
}

impl AnsatzSolution {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn alpha_part(&self, i: usize) -> &[CycloNum] {
        &self.basis[i][..=self.degree_bound]
    }

    pub fn tau_part(&self, i: usize) -> &[CycloNum] {
        &self.basis[i][self.degree_bound + 1..]
    }

    /// Every solution has `α₀` constant.
    pub fn alpha_is_constant(&self) -> bool {
        (0..self.dimension()).all(|i| self.alpha_part(i)[1..].iter().all(CycloNum::is_zero))
    }

    /// Some solution has `α₀(0) ≠ 0`, i.e. an invertible fiber matrix exists.
    pub fn admits_invertible(&self) -> bool {
        (0..self.dimension()).any(|i| !self.alpha_part(i)[0].is_zero())
    }

    /// Largest `i` with `yᵢ ≠ 0` in some solution.
    pub fn max_tau_degree(&self) -> Option<usize> {
        (0..self.dimension()).filter_map(|i| self.tau_part(i).iter().rposition(|y| !y.is_zero())).max()
    }
}

/// Row key of a linear constraint: which identity, which fiber entry, which
/// monomial.
type ConstraintKey = (u8, usize, usize, TermKey);

fn collect<E: ChartEntry>(
    rows: &mut BTreeMap<ConstraintKey, BTreeMap<usize, CycloNum>>,
    block: u8,
    col: usize,
    fiber: &[[E; 2]; 2],
    only_poles: bool,
) {
    for (i, row) in fiber.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            for (key, c) in entry.coefficients() {
                if !only_poles || key.exp < 0 {
                    rows.entry((block, i, j, key)).or_default().insert(col, c);
                }
            }
        }
    }
}

/// Builds and solves the linear conditions for `(t ↦ μt, [[α₀, τ₀], [0, α₀]])`
/// to (i) extend over `s = 0` after the chart change and (ii) commute with the
/// given contraction in both charts.
///
/// Both conditions are linear in the fiber entries, so the system's columns
/// are the constraint values of the individual unknown monomials.
pub fn lift_space<E: ChartEntry>(
    mu: &CycloNum,
    contraction: &ChartMap<E>,
    tr: &Transition,
    degree: usize,
) -> Result<AnsatzSolution, AutError> {
    let n = common_conductor(mu.conductor(), contraction.base().conductor());
    let ctx = CycloCtx::new(n)?;
    let mu = mu.promote(n)?;
    let g0 = contraction.promote(n)?;
    let g1 = g0.conjugate(tr)?;
    let base = Moebius::scaling(&mu).map_err(|e| AutError::InvalidElement(e.to_string()))?;
    let unknowns = 2 * (degree + 1);
    let mut rows: BTreeMap<ConstraintKey, BTreeMap<usize, CycloNum>> = BTreeMap::new();
    for col in 0..unknowns {
        let (is_alpha, i) = if col <= degree { (true, col) } else { (false, col - degree - 1) };
        let mono = E::monomial(Var::T, TermKey { exp: i as i64, eps: 0 }, ctx.one());
        let zero = E::zero(Var::T);
        let fiber = if is_alpha { [[mono.clone(), zero.clone()], [zero, mono]] } else { [[zero.clone(), mono], [zero.clone(), zero]] };
        let f0 = ChartMap::new(Var::T, base.clone(), fiber)?;
        let f1 = f0.conjugate(tr)?;
        collect(&mut rows, 0, col, f1.fiber(), true);
        let comm0 = fiber_sub(g0.compose(&f0)?.fiber(), f0.compose(&g0)?.fiber())?;
        collect(&mut rows, 1, col, &comm0, false);
        let comm1 = fiber_sub(g1.compose(&f1)?.fiber(), f1.compose(&g1)?.fiber())?;
        collect(&mut rows, 2, col, &comm1, false);
    }
    let matrix: Vec<Vec<CycloNum>> =
        rows.values().map(|entries| (0..unknowns).map(|c| entries.get(&c).cloned().unwrap_or_else(|| ctx.zero())).collect()).collect();
    let constraints = matrix.len();
    let system = LinearSystem::from_rows(&ctx, unknowns, matrix)?;
    Ok(AnsatzSolution { degree_bound: degree, constraints, basis: system.nullspace() })
}
