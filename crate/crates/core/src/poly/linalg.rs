use std::sync::Arc;

use super::PolyError;
use crate::cyclo::{CycloCtx, CycloNum};

/// A homogeneous linear system `A·x = 0` with entries in one cyclotomic field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem {
    ctx: Arc<CycloCtx>,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<CycloNum>>,
}

impl LinearSystem {
    pub fn zeros(ctx: &Arc<CycloCtx>, rows: usize, cols: usize) -> Self {
        LinearSystem { ctx: Arc::clone(ctx), rows, cols, entries: vec![vec![ctx.zero(); cols]; rows] }
    }

    pub fn from_rows(ctx: &Arc<CycloCtx>, cols: usize, rows: Vec<Vec<CycloNum>>) -> Result<Self, PolyError> {
        for r in &rows {
            if r.len() != cols {
                return Err(PolyError::Ragged { expected: cols, found: r.len() });
            }
            for x in r {
                if x.conductor() != ctx.conductor() {
                    return Err(crate::cyclo::CycloError::ConductorMismatch(ctx.conductor(), x.conductor()).into());
                }
            }
        }
        Ok(LinearSystem { ctx: Arc::clone(ctx), rows: rows.len(), cols, entries: rows })
    }

    pub fn identity(ctx: &Arc<CycloCtx>, n: usize) -> Self {
        let mut m = Self::zeros(ctx, n, n);
        for i in 0..n {
            m.entries[i][i] = ctx.one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &CycloNum {
        &self.entries[r][c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: CycloNum) {
        assert_eq!(v.conductor(), self.ctx.conductor(), "entry outside the system's field");
        self.entries[r][c] = v;
    }

    /// `A·x`.
    pub fn apply(&self, x: &[CycloNum]) -> Vec<CycloNum> {
        assert_eq!(x.len(), self.cols);
        self.entries.iter().map(|row| row.iter().zip(x).fold(self.ctx.zero(), |acc, (a, b)| acc + a * b)).collect()
    }

    /// Reduced row echelon form and pivot columns. The pivot for each column
    /// is the first remaining row with a nonzero entry there.
    fn rref(&self) -> (Vec<Vec<CycloNum>>, Vec<usize>) {
        let mut m = self.entries.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(row, p);
            let inv = m[row][col].inv().expect("pivot is nonzero");
            for x in m[row].iter_mut() {
                *x = &*x * &inv;
            }
            let pivot_row = m[row].clone();
            for (r, other) in m.iter_mut().enumerate() {
                if r == row || other[col].is_zero() {
                    continue;
                }
                let f = other[col].clone();
                for (x, p) in other.iter_mut().zip(&pivot_row) {
                    if !p.is_zero() {
                        *x = &*x - &(&f * p);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of `{x : A·x = 0}`, one vector per free column in increasing
    /// column order, with that free coordinate set to 1.
    pub fn nullspace(&self) -> Vec<Vec<CycloNum>> {
        let (m, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![self.ctx.zero(); self.cols];
                v[f] = self.ctx.one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -&m[r][f];
                }
                v
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basic_shapes() {
        let c = CycloCtx::new(5).unwrap();
        assert!(LinearSystem::identity(&c, 3).nullspace().is_empty());
        assert_eq!(LinearSystem::zeros(&c, 2, 3).nullspace().len(), 3);
        // rows (1, 2, ζ) and 2·(1, 2, ζ): rank 1
        let z = c.root_of_unity(1);
        let r1 = vec![c.integer(1), c.integer(2), z.clone()];
        let r2: Vec<_> = r1.iter().map(|x| x * &c.integer(2)).collect();
        let sys = LinearSystem::from_rows(&c, 3, vec![r1, r2]).unwrap();
        assert_eq!(sys.rank(), 1);
        let basis = sys.nullspace();
        assert_eq!(basis.len(), 2);
        for v in &basis {
            assert!(sys.apply(v).iter().all(CycloNum::is_zero));
        }
    }

    #[test]
    fn ragged_rows_rejected() {
        let c = CycloCtx::new(1).unwrap();
        let err = LinearSystem::from_rows(&c, 2, vec![vec![c.one()]]).unwrap_err();
        assert_eq!(err, PolyError::Ragged { expected: 2, found: 1 });
    }

    fn arb_system() -> impl Strategy<Value = LinearSystem> {
        (1usize..5, 1usize..6, prop_oneof![Just(3u32), Just(4), Just(8)]).prop_flat_map(|(r, c, n)| {
            proptest::collection::vec(proptest::collection::vec((-2i64..=2, 0i64..8), c), r).prop_map(move |rows| {
                let ctx = CycloCtx::new(n).unwrap();
                let rows =
                    rows.into_iter().map(|row| row.into_iter().map(|(v, k)| ctx.integer(v) * ctx.root_of_unity(k)).collect()).collect();
                LinearSystem::from_rows(&ctx, c, rows).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn nullspace_is_sound(sys in arb_system()) {
            let basis = sys.nullspace();
            prop_assert_eq!(basis.len(), sys.cols() - sys.rank());
            for v in &basis {
                prop_assert!(sys.apply(v).iter().all(CycloNum::is_zero));
            }
            // independence: the basis stacked as rows has full rank
            if !basis.is_empty() {
                let ctx = CycloCtx::new(sys.get(0, 0).conductor()).unwrap();
                let stacked = LinearSystem::from_rows(&ctx, sys.cols(), basis.clone()).unwrap();
                prop_assert_eq!(stacked.rank(), basis.len());
            }
        }
    }
}
