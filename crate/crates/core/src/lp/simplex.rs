//! Two-phase dense-tableau primal simplex with Bland's rule.
//!
//! The `p <= 1` box is added as explicit rows, so every column is bounded
//! and the tableau never reports unbounded on the programs built here.

use super::{LinearProgram, LpSolution, LpStatus};
use crate::error::LpError;

pub const PIVOT_TOLERANCE: f64 = 1e-10;
pub const FEASIBILITY_TOLERANCE: f64 = 1e-8;
const MAX_PIVOTS: usize = 200_000;

struct Tableau {
    rows: usize,
    cols: usize,
    /// `rows` constraint rows followed by the reduced-cost row, each `cols + 1` wide (rhs last).
    data: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * (self.cols + 1) + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.cols)
    }

    fn row(&self, r: usize) -> &[f64] {
        let w = self.cols + 1;
        &self.data[r * w..(r + 1) * w]
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.cols + 1;
        let inv = 1.0 / self.at(pr, pc);
        for v in &mut self.data[pr * w..(pr + 1) * w] {
            *v *= inv;
        }
        let pivot_row: Vec<f64> = self.row(pr).to_vec();
        for r in 0..=self.rows {
            if r == pr {
                continue;
            }
            let factor = self.at(r, pc);
            if factor == 0.0 {
                continue;
            }
            let dst = &mut self.data[r * w..(r + 1) * w];
            for (d, p) in dst.iter_mut().zip(&pivot_row) {
                *d -= factor * p;
            }
            dst[pc] = 0.0;
        }
        self.basis[pr] = pc;
    }

    /// Installs `cost` as the objective and prices out the current basis.
    fn set_objective(&mut self, cost: &[f64]) {
        let w = self.cols + 1;
        let z = self.rows * w;
        self.data[z..z + self.cols].copy_from_slice(&cost[..self.cols]);
        self.data[z + self.cols] = 0.0;
        for r in 0..self.rows {
            let cb = cost[self.basis[r]];
            if cb == 0.0 {
                continue;
            }
            for c in 0..=self.cols {
                let v = self.data[r * w + c];
                self.data[z + c] -= cb * v;
            }
        }
    }

    /// Maximizes the installed objective over columns where `allowed` holds.
    fn optimize(&mut self, allowed: &dyn Fn(usize) -> bool) -> Result<bool, LpError> {
        for _ in 0..MAX_PIVOTS {
            // Bland: lowest-index improving column.
            let Some(pc) = (0..self.cols)
                .find(|&c| allowed(c) && self.at(self.rows, c) > PIVOT_TOLERANCE)
            else {
                return Ok(true);
            };
            let mut best: Option<(usize, f64)> = None;
            for r in 0..self.rows {
                let a = self.at(r, pc);
                if a <= PIVOT_TOLERANCE {
                    continue;
                }
                let ratio = self.rhs(r) / a;
                best = match best {
                    None => Some((r, ratio)),
                    Some((br, bratio)) => {
                        if ratio < bratio - PIVOT_TOLERANCE
                            || (ratio <= bratio + PIVOT_TOLERANCE
                                && self.basis[r] < self.basis[br])
                        {
                            Some((r, ratio))
                        } else {
                            Some((br, bratio))
                        }
                    }
                };
            }
            match best {
                Some((pr, _)) => self.pivot(pr, pc),
                None => return Ok(false),
            }
        }
        Err(LpError::IterationLimit(MAX_PIVOTS))
    }
}

/// Solves `max c·p  s.t.  A p <= b,  0 <= p <= 1`.
///
/// Infeasibility is reported through [`LpStatus`], not as an error.
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution, LpError> {
    lp.validate()?;
    let nv = lp.var_count();
    let explicit = lp.rows.len();
    let m = explicit + nv;

    // Row list in `a·p + s = b` form, bounds last.
    let mut rows: Vec<(Vec<f64>, f64)> = lp
        .rows
        .iter()
        .zip(&lp.rhs)
        .map(|(a, &b)| (a.clone(), b))
        .collect();
    for j in 0..nv {
        let mut a = vec![0.0; nv];
        a[j] = 1.0;
        rows.push((a, 1.0));
    }

    let negative: Vec<usize> = (0..m).filter(|&r| rows[r].1 < 0.0).collect();
    let slack0 = nv;
    let art0 = nv + m;
    let cols = nv + m + negative.len();
    let w = cols + 1;
    let mut t = Tableau {
        rows: m,
        cols,
        data: vec![0.0; (m + 1) * w],
        basis: vec![0; m],
    };
    let mut art_of_row = vec![None; m];
    for (k, &r) in negative.iter().enumerate() {
        art_of_row[r] = Some(art0 + k);
    }
    for (r, (a, b)) in rows.iter().enumerate() {
        let sign = if *b < 0.0 { -1.0 } else { 1.0 };
        let base = r * w;
        for j in 0..nv {
            t.data[base + j] = sign * a[j];
        }
        t.data[base + slack0 + r] = sign;
        t.data[base + cols] = sign * b;
        match art_of_row[r] {
            Some(ac) => {
                t.data[base + ac] = 1.0;
                t.basis[r] = ac;
            }
            None => t.basis[r] = slack0 + r,
        }
    }

    if !negative.is_empty() {
        let mut cost = vec![0.0; cols];
        for c in cost.iter_mut().skip(art0) {
            *c = -1.0;
        }
        t.set_objective(&cost);
        t.optimize(&|_| true)?;
        // The reduced-cost row's rhs holds minus the objective value.
        let phase_one = -t.rhs(m);
        if phase_one < -FEASIBILITY_TOLERANCE {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                values: Vec::new(),
                objective_value: f64::NEG_INFINITY,
                row_duals: Vec::new(),
                bound_duals: Vec::new(),
            });
        }
        // Drive zero-level artificials out of the basis where possible.
        for r in 0..m {
            if t.basis[r] >= art0 {
                if let Some(c) = (0..art0).find(|&c| t.at(r, c).abs() > PIVOT_TOLERANCE) {
                    t.pivot(r, c);
                }
            }
        }
    }

    let mut cost = vec![0.0; cols];
    cost[..nv].copy_from_slice(&lp.objective);
    t.set_objective(&cost);
    if !t.optimize(&|c| c < art0)? {
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            values: Vec::new(),
            objective_value: f64::INFINITY,
            row_duals: Vec::new(),
            bound_duals: Vec::new(),
        });
    }

    let mut values = vec![0.0; nv];
    for r in 0..m {
        if t.basis[r] < nv {
            values[t.basis[r]] = t.rhs(r).clamp(0.0, 1.0);
        }
    }
    let duals: Vec<f64> = (0..m).map(|r| -t.at(m, slack0 + r)).collect();
    Ok(LpSolution {
        status: LpStatus::Optimal,
        objective_value: lp.evaluate(&values),
        values,
        row_duals: duals[..explicit].to_vec(),
        bound_duals: duals[explicit..].to_vec(),
    })
}
