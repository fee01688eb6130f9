//! Small dense two-phase simplex.
//!
//! Variables are free unless flagged nonnegative. Constraints are
//! `c·v ≥ d` or `c·v = d`; the optional objective is minimized. Pivoting
//! follows Bland's rule so degenerate problems terminate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vector;

pub const PIVOT_TOL: f64 = 1e-10;
pub const FEAS_TOL: f64 = 1e-9;

const MAX_PIVOTS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearRow {
    pub coeffs: Vec<f64>,
    pub rhs: f64,
}

/// Feasibility (or minimization) problem over `n` real variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpProblem {
    n: usize,
    nonneg: Vec<bool>,
    ineqs: Vec<LinearRow>,
    eqs: Vec<LinearRow>,
    objective: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    /// Phase-1 optimum stayed above the feasibility tolerance.
    Infeasible { phase1_value: f64 },
    /// Feasible, but the objective is unbounded below.
    Unbounded { feasible_point: Vec<f64> },
}

impl LpProblem {
    pub fn new(n: usize) -> Self {
        LpProblem {
            n,
            nonneg: vec![false; n],
            ineqs: Vec::new(),
            eqs: Vec::new(),
            objective: None,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn set_nonneg(&mut self, var: usize) -> &mut Self {
        self.nonneg[var] = true;
        self
    }

    pub fn set_all_nonneg(&mut self) -> &mut Self {
        self.nonneg.iter_mut().for_each(|b| *b = true);
        self
    }

    /// Adds `coeffs·v ≥ rhs`.
    pub fn geq(&mut self, coeffs: Vec<f64>, rhs: f64) -> &mut Self {
        assert_eq!(coeffs.len(), self.n, "constraint width");
        self.ineqs.push(LinearRow { coeffs, rhs });
        self
    }

    /// Adds `coeffs·v ≤ rhs`.
    pub fn leq(&mut self, coeffs: Vec<f64>, rhs: f64) -> &mut Self {
        let neg = coeffs.iter().map(|c| -c).collect();
        self.geq(neg, -rhs)
    }

    /// Adds `coeffs·v = rhs`.
    pub fn equals(&mut self, coeffs: Vec<f64>, rhs: f64) -> &mut Self {
        assert_eq!(coeffs.len(), self.n, "constraint width");
        self.eqs.push(LinearRow { coeffs, rhs });
        self
    }

    /// Minimize `c·v`.
    pub fn minimize(&mut self, c: Vec<f64>) -> &mut Self {
        assert_eq!(c.len(), self.n, "objective width");
        self.objective = Some(c);
        self
    }

    pub fn inequalities(&self) -> &[LinearRow] {
        &self.ineqs
    }

    pub fn equalities(&self) -> &[LinearRow] {
        &self.eqs
    }

    pub fn is_nonneg(&self, var: usize) -> bool {
        self.nonneg[var]
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Invalid("LP needs at least one variable".into()));
        }
        let finite = |r: &LinearRow| r.rhs.is_finite() && r.coeffs.iter().all(|c| c.is_finite());
        if !self.ineqs.iter().chain(&self.eqs).all(finite) {
            return Err(Error::Invalid("LP coefficients must be finite".into()));
        }
        if let Some(c) = &self.objective {
            if !c.iter().all(|v| v.is_finite()) {
                return Err(Error::Invalid("LP objective must be finite".into()));
            }
        }
        Ok(())
    }

    /// Largest violation of any constraint (or sign restriction) at `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let dot = |c: &[f64]| c.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
        let mut worst: f64 = 0.0;
        for r in &self.ineqs {
            worst = worst.max(r.rhs - dot(&r.coeffs));
        }
        for r in &self.eqs {
            worst = worst.max((r.rhs - dot(&r.coeffs)).abs());
        }
        for (j, &nn) in self.nonneg.iter().enumerate() {
            if nn {
                worst = worst.max(-x[j]);
            }
        }
        worst
    }

    pub fn solve(&self) -> Result<LpOutcome> {
        self.validate()?;
        Tableau::build(self).run(self)
    }
}

/// Returns a feasible point or `None` when the constraints are infeasible.
pub fn lp_feasible(p: &LpProblem) -> Result<Option<Vector>> {
    let mut feas = p.clone();
    feas.objective = None;
    match feas.solve()? {
        LpOutcome::Optimal(sol) => Ok(Some(Vector::from_vec_unchecked(sol.x))),
        LpOutcome::Infeasible { .. } => Ok(None),
        LpOutcome::Unbounded { .. } => Err(Error::LpUnbounded),
    }
}

// Column layout: structural columns (free vars split in two), one slack
// per inequality, then one artificial per row.
struct Tableau {
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    n_art_start: usize,
    n_cols: usize,
    var_cols: Vec<(usize, Option<usize>)>,
}

impl Tableau {
    fn build(p: &LpProblem) -> Tableau {
        let mut var_cols = Vec::with_capacity(p.n);
        let mut col = 0;
        for j in 0..p.n {
            if p.nonneg[j] {
                var_cols.push((col, None));
                col += 1;
            } else {
                var_cols.push((col, Some(col + 1)));
                col += 2;
            }
        }
        let n_struct = col;
        let n_slack = p.ineqs.len();
        let m = p.ineqs.len() + p.eqs.len();
        let n_art_start = n_struct + n_slack;
        let n_cols = n_art_start + m;

        let mut rows = Vec::with_capacity(m);
        let all = p
            .ineqs
            .iter()
            .map(|r| (r, true))
            .chain(p.eqs.iter().map(|r| (r, false)));
        for (i, (r, is_ineq)) in all.enumerate() {
            let mut row = vec![0.0; n_cols + 1];
            let max_coeff = r.coeffs.iter().fold(0.0_f64, |a, c| a.max(c.abs()));
            let scale = max_coeff.max(1.0);
            for (j, &c) in r.coeffs.iter().enumerate() {
                let (pos, neg) = var_cols[j];
                row[pos] = c / scale;
                if let Some(neg) = neg {
                    row[neg] = -c / scale;
                }
            }
            if is_ineq {
                row[n_struct + i] = -1.0;
            }
            row[n_cols] = r.rhs / scale;
            if row[n_cols] < 0.0 {
                row.iter_mut().for_each(|v| *v = -*v);
            }
            row[n_art_start + i] = 1.0;
            rows.push(row);
        }
        let basis = (0..m).map(|i| n_art_start + i).collect();
        Tableau {
            rows,
            basis,
            n_art_start,
            n_cols,
            var_cols,
        }
    }

    fn pivot(&mut self, r: usize, c: usize, obj: &mut [f64]) {
        let piv = self.rows[r][c];
        self.rows[r].iter_mut().for_each(|v| *v /= piv);
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[c];
            if f != 0.0 {
                row.iter_mut().zip(&prow).for_each(|(v, p)| *v -= f * p);
            }
        }
        let f = obj[c];
        if f != 0.0 {
            obj.iter_mut().zip(&prow).for_each(|(v, p)| *v -= f * p);
        }
        self.basis[r] = c;
    }

    /// Reduced-cost row for costs `c` (length n_cols) given the current basis.
    /// The last entry holds minus the objective value.
    fn reduced_costs(&self, c: &[f64]) -> Vec<f64> {
        let mut obj = c.to_vec();
        obj.push(0.0);
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = c[b];
            if cb != 0.0 {
                obj.iter_mut()
                    .zip(&self.rows[i])
                    .for_each(|(v, t)| *v -= cb * t);
            }
        }
        obj
    }

    /// Bland-rule simplex on columns `< allowed`. Returns false if unbounded.
    fn optimize(&mut self, obj: &mut [f64], allowed: usize) -> Result<bool> {
        for _ in 0..MAX_PIVOTS {
            let entering = (0..allowed).find(|&j| obj[j] < -PIVOT_TOL);
            let Some(c) = entering else {
                return Ok(true);
            };
            let rhs = self.n_cols;
            let mut best: Option<(usize, f64)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[c] > PIVOT_TOL {
                    let ratio = row[rhs] / row[c];
                    best = match best {
                        None => Some((i, ratio)),
                        Some((bi, br)) => {
                            if ratio < br - 1e-12
                                || (ratio <= br + 1e-12 && self.basis[i] < self.basis[bi])
                            {
                                Some((i, ratio))
                            } else {
                                Some((bi, br))
                            }
                        }
                    };
                }
            }
            match best {
                None => return Ok(false),
                Some((r, _)) => self.pivot(r, c, obj),
            }
        }
        Err(Error::NumericalFailure("simplex pivot limit reached".into()))
    }

    fn extract(&self, p: &LpProblem) -> Vec<f64> {
        let mut col_val = vec![0.0; self.n_cols];
        for (i, &b) in self.basis.iter().enumerate() {
            col_val[b] = self.rows[i][self.n_cols];
        }
        (0..p.n)
            .map(|j| {
                let (pos, neg) = self.var_cols[j];
                col_val[pos] - neg.map_or(0.0, |n| col_val[n])
            })
            .collect()
    }

    fn run(mut self, p: &LpProblem) -> Result<LpOutcome> {
        let m = self.rows.len();
        if m == 0 {
            let x = vec![0.0; p.n];
            return match &p.objective {
                None => Ok(LpOutcome::Optimal(LpSolution { x, objective: 0.0 })),
                Some(c) => {
                    let unbounded = c
                        .iter()
                        .enumerate()
                        .any(|(j, &cj)| cj < -PIVOT_TOL || (!p.nonneg[j] && cj.abs() > PIVOT_TOL));
                    if unbounded {
                        Ok(LpOutcome::Unbounded { feasible_point: x })
                    } else {
                        Ok(LpOutcome::Optimal(LpSolution { x, objective: 0.0 }))
                    }
                }
            };
        }

        // Phase 1: minimize the sum of artificials.
        let mut c1 = vec![0.0; self.n_cols];
        c1[self.n_art_start..].iter_mut().for_each(|v| *v = 1.0);
        let mut obj = self.reduced_costs(&c1);
        if !self.optimize(&mut obj, self.n_cols)? {
            return Err(Error::LpUnbounded);
        }
        let phase1_value = -obj[self.n_cols];
        if phase1_value > FEAS_TOL {
            return Ok(LpOutcome::Infeasible { phase1_value });
        }

        // Drive remaining artificials out of the basis; drop redundant rows.
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] >= self.n_art_start {
                let col = (0..self.n_art_start).find(|&j| self.rows[r][j].abs() > PIVOT_TOL);
                match col {
                    Some(c) => {
                        let mut dummy = vec![0.0; self.n_cols + 1];
                        self.pivot(r, c, &mut dummy);
                        r += 1;
                    }
                    None => {
                        self.rows.remove(r);
                        self.basis.remove(r);
                    }
                }
            } else {
                r += 1;
            }
        }

        let Some(c) = &p.objective else {
            let x = self.extract(p);
            return Ok(LpOutcome::Optimal(LpSolution { x, objective: 0.0 }));
        };

        // Phase 2 over structural and slack columns only.
        let mut c2 = vec![0.0; self.n_cols];
        for (j, &cj) in c.iter().enumerate() {
            let (pos, neg) = self.var_cols[j];
            c2[pos] = cj;
            if let Some(neg) = neg {
                c2[neg] = -cj;
            }
        }
        let mut obj = self.reduced_costs(&c2);
        let bounded = self.optimize(&mut obj, self.n_art_start)?;
        let x = self.extract(p);
        if !bounded {
            return Ok(LpOutcome::Unbounded { feasible_point: x });
        }
        let objective = c.iter().zip(&x).map(|(a, b)| a * b).sum();
        Ok(LpOutcome::Optimal(LpSolution { x, objective }))
    }
}
