//! Dense two-phase simplex for the small feasibility problems that decide
//! convex-hull membership.
//!
//! Problems here have `d + 1` equality rows and `n + 1` columns, so a plain
//! tableau with Bland's anti-cycling rule is both fast enough and easy to
//! audit. Callers are expected to scale their rows to unit magnitude.

const PIVOT_TOL: f64 = 1e-11;
const FEASIBILITY_TOL: f64 = 1e-10;
const MAX_PIVOTS: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum LpOutcome {
    Optimal { value: f64, x: Vec<f64> },
    Infeasible,
    Unbounded,
}

/// Maximizes `c^T x` subject to `A x = b`, `x >= 0`.
///
/// `a` is row-major with `b.len()` rows and `c.len()` columns. Rows with a
/// negative right-hand side are negated internally.
pub(crate) fn maximize(a: &[f64], b: &[f64], c: &[f64]) -> LpOutcome {
    let m = b.len();
    let k = c.len();
    debug_assert_eq!(a.len(), m * k);

    let mut tab = Tableau::new(a, b, m, k);

    // Phase 1: drive the artificial variables to zero.
    let phase1: Vec<f64> = (0..k + m).map(|j| if j < k { 0.0 } else { -1.0 }).collect();
    if !tab.run(&phase1, k + m) {
        // Phase 1 is bounded by construction.
        return LpOutcome::Infeasible;
    }
    let infeasibility: f64 = (0..m).filter(|&i| tab.basis[i] >= k).map(|i| tab.rhs(i)).sum();
    if infeasibility > FEASIBILITY_TOL {
        return LpOutcome::Infeasible;
    }
    tab.evict_artificials(k);

    // Phase 2 over the structural columns only.
    let mut phase2 = c.to_vec();
    phase2.extend(std::iter::repeat_n(0.0, m));
    if !tab.run(&phase2, k) {
        return LpOutcome::Unbounded;
    }

    let mut x = vec![0.0; k];
    for i in 0..m {
        if tab.basis[i] < k {
            x[tab.basis[i]] = tab.rhs(i).max(0.0);
        }
    }
    let value = c.iter().zip(&x).map(|(ci, xi)| ci * xi).sum();
    LpOutcome::Optimal { value, x }
}

struct Tableau {
    m: usize,
    width: usize,
    /// `m` rows of `[A | I | b]`.
    cells: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    fn new(a: &[f64], b: &[f64], m: usize, k: usize) -> Self {
        let width = k + m + 1;
        let mut cells = vec![0.0; m * width];
        for i in 0..m {
            let sign = if b[i] < 0.0 { -1.0 } else { 1.0 };
            for j in 0..k {
                cells[i * width + j] = sign * a[i * k + j];
            }
            cells[i * width + k + i] = 1.0;
            cells[i * width + width - 1] = sign * b[i];
        }
        Self { m, width, cells, basis: (k..k + m).collect() }
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.cells[i * self.width + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.at(i, self.width - 1)
    }

    /// Runs primal simplex for `max cost^T x` with entering columns limited
    /// to `0..allowed`. Returns `false` if the problem is unbounded.
    fn run(&mut self, cost: &[f64], allowed: usize) -> bool {
        for _ in 0..MAX_PIVOTS {
            let Some(col) = self.entering(cost, allowed) else {
                return true;
            };
            let Some(row) = self.leaving(col) else {
                return false;
            };
            self.pivot(row, col);
        }
        // Bland's rule cannot cycle; hitting the cap means the tableau has
        // lost precision and the current vertex is the best we have.
        true
    }

    /// Bland's rule: the lowest-index column with positive reduced cost.
    fn entering(&self, cost: &[f64], allowed: usize) -> Option<usize> {
        (0..allowed).find(|&j| {
            if self.basis.contains(&j) {
                return false;
            }
            let reduced = cost[j] - (0..self.m).map(|i| cost[self.basis[i]] * self.at(i, j)).sum::<f64>();
            reduced > PIVOT_TOL
        })
    }

    fn leaving(&self, col: usize) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for i in 0..self.m {
            let coef = self.at(i, col);
            if coef <= PIVOT_TOL {
                continue;
            }
            let ratio = self.rhs(i).max(0.0) / coef;
            best = match best {
                None => Some((i, ratio)),
                Some((bi, br)) => {
                    if ratio < br - 1e-14 || (ratio <= br + 1e-14 && self.basis[i] < self.basis[bi]) {
                        Some((i, ratio))
                    } else {
                        Some((bi, br))
                    }
                }
            };
        }
        best.map(|(i, _)| i)
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let w = self.width;
        let p = self.at(row, col);
        for j in 0..w {
            self.cells[row * w + j] /= p;
        }
        for i in 0..self.m {
            if i == row {
                continue;
            }
            let factor = self.at(i, col);
            if factor == 0.0 {
                continue;
            }
            for j in 0..w {
                let v = self.cells[row * w + j];
                self.cells[i * w + j] -= factor * v;
            }
        }
        self.basis[row] = col;
    }

    /// Pivots zero-valued artificials out of the basis where a structural
    /// column allows it; rows that cannot be pivoted are redundant.
    fn evict_artificials(&mut self, k: usize) {
        for i in 0..self.m {
            if self.basis[i] < k {
                continue;
            }
            if let Some(j) = (0..k).find(|&j| !self.basis.contains(&j) && self.at(i, j).abs() > PIVOT_TOL) {
                self.pivot(i, j);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn optimal(outcome: LpOutcome) -> (f64, Vec<f64>) {
        match outcome {
            LpOutcome::Optimal { value, x } => (value, x),
            other => panic!("expected optimum, got {other:?}"),
        }
    }

    #[test]
    fn textbook_problem() {
        // max 3x + 2y  s.t. x + y + s1 = 4, x + 3y + s2 = 6
        let a = [1.0, 1.0, 1.0, 0.0, 1.0, 3.0, 0.0, 1.0];
        let (value, x) = optimal(maximize(&a, &[4.0, 6.0], &[3.0, 2.0, 0.0, 0.0]));
        assert!((value - 12.0).abs() < 1e-12);
        assert!((x[0] - 4.0).abs() < 1e-12);
    }

    #[test]
    fn detects_infeasibility() {
        // x = -1 with x >= 0
        assert_eq!(maximize(&[1.0], &[-1.0], &[1.0]), LpOutcome::Infeasible);
        // x + y = 1 and x + y = 2
        assert_eq!(maximize(&[1.0, 1.0, 1.0, 1.0], &[1.0, 2.0], &[1.0, 0.0]), LpOutcome::Infeasible);
    }

    #[test]
    fn detects_unboundedness() {
        // x - y = 0, maximize x
        assert_eq!(maximize(&[1.0, -1.0], &[0.0], &[1.0, 0.0]), LpOutcome::Unbounded);
    }

    #[test]
    fn tolerates_redundant_rows() {
        // x + y = 1 stated twice
        let (value, _) = optimal(maximize(&[1.0, 1.0, 1.0, 1.0], &[1.0, 1.0], &[1.0, 2.0]));
        assert!((value - 2.0).abs() < 1e-12);
    }
}
