//! Dense two-phase primal simplex with Bland's anti-cycling rule.
//!
//! Solves `max cᵀx` subject to `aᵢᵀx {≤, ≥, =} bᵢ`, `x ≥ 0`. Intended for
//! the handful of variables and rows of the power-allocation problem, where
//! a textbook tableau is both fast enough and easy to audit.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Optimal(Vec<f64>),
    Infeasible,
}

const PIVOT_EPS: f64 = 1e-12;
const COST_EPS: f64 = 1e-11;
const MAX_PIVOTS: usize = 50_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Column {
    Original,
    Slack,
    Artificial,
}

struct Tableau {
    /// `m` rows of `n + 1` entries; the last entry is the right-hand side.
    rows: Vec<Vec<f64>>,
    /// Reduced costs (maximization: a positive entry may enter).
    cost: Vec<f64>,
    basis: Vec<usize>,
    kinds: Vec<Column>,
}

impl Tableau {
    fn width(&self) -> usize {
        self.kinds.len()
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let w = self.width();
        let piv = self.rows[r][col];
        for v in self.rows[r].iter_mut() {
            *v /= piv;
        }
        self.rows[r][col] = 1.0;
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[col];
            if f != 0.0 {
                for k in 0..=w {
                    row[k] -= f * pivot_row[k];
                }
                row[col] = 0.0;
            }
        }
        let f = self.cost[col];
        if f != 0.0 {
            for k in 0..=w {
                self.cost[k] -= f * pivot_row[k];
            }
            self.cost[col] = 0.0;
        }
        self.basis[r] = col;
    }

    /// Recomputes reduced costs for objective `c` (one entry per column).
    fn price(&mut self, c: &[f64]) {
        let w = self.width();
        let mut cost = c.to_vec();
        cost.push(0.0);
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = c[b];
            if cb != 0.0 {
                for k in 0..=w {
                    cost[k] -= cb * row[k];
                }
            }
        }
        self.cost = cost;
    }

    /// Runs Bland's rule to optimality. Artificial columns never enter when
    /// `allow_artificial` is false.
    fn optimize(&mut self, allow_artificial: bool) -> Result<()> {
        let w = self.width();
        for _ in 0..MAX_PIVOTS {
            let entering = (0..w).find(|&j| {
                (allow_artificial || self.kinds[j] != Column::Artificial) && self.cost[j] > COST_EPS
            });
            let Some(col) = entering else {
                return Ok(());
            };
            let mut leave: Option<(usize, f64)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                let a = row[col];
                if a <= PIVOT_EPS {
                    continue;
                }
                let ratio = row[w] / a;
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        let tol = 1e-12 * (1.0 + br.abs());
                        if ratio < br - tol || (ratio <= br + tol && self.basis[i] < self.basis[bi])
                        {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            let Some((r, _)) = leave else {
                return Err(Error::LpUnbounded);
            };
            self.pivot(r, col);
        }
        Err(Error::LpNumerical(format!(
            "no convergence after {MAX_PIVOTS} pivots"
        )))
    }
}

/// Maximizes `objective · x` over `x ≥ 0` and the given rows.
pub fn maximize(objective: &[f64], rows: &[(Vec<f64>, Sense, f64)]) -> Result<Outcome> {
    let n = objective.len();
    if objective.iter().any(|v| !v.is_finite()) {
        return Err(Error::LpNumerical(
            "non-finite objective coefficient".into(),
        ));
    }

    // Row scaling by max-abs coefficient, then sign-normalize so b ≥ 0.
    let mut scaled: Vec<(Vec<f64>, Sense, f64)> = Vec::with_capacity(rows.len());
    for (i, (a, sense, b)) in rows.iter().enumerate() {
        if a.len() != n {
            return Err(Error::LpNumerical(format!(
                "row {i} has {} coefficients, expected {n}",
                a.len()
            )));
        }
        if !b.is_finite() || a.iter().any(|v| !v.is_finite()) {
            return Err(Error::LpNumerical(format!(
                "row {i} has non-finite entries"
            )));
        }
        let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if scale == 0.0 {
            let ok = match sense {
                Sense::Le => 0.0 <= *b,
                Sense::Ge => 0.0 >= *b,
                Sense::Eq => *b == 0.0,
            };
            if !ok {
                return Ok(Outcome::Infeasible);
            }
            continue;
        }
        let mut a: Vec<f64> = a.iter().map(|v| v / scale).collect();
        let mut b = b / scale;
        let mut sense = *sense;
        if b < 0.0 {
            a.iter_mut().for_each(|v| *v = -*v);
            b = -b;
            sense = match sense {
                Sense::Le => Sense::Ge,
                Sense::Ge => Sense::Le,
                Sense::Eq => Sense::Eq,
            };
        }
        scaled.push((a, sense, b));
    }

    let m = scaled.len();
    let n_slack = scaled.iter().filter(|r| r.1 != Sense::Eq).count();
    let n_art = scaled.iter().filter(|r| r.1 != Sense::Le).count();
    let w = n + n_slack + n_art;

    let mut kinds = vec![Column::Original; n];
    kinds.extend(std::iter::repeat_n(Column::Slack, n_slack));
    kinds.extend(std::iter::repeat_n(Column::Artificial, n_art));

    let mut t = Tableau {
        rows: Vec::with_capacity(m),
        cost: vec![0.0; w + 1],
        basis: Vec::with_capacity(m),
        kinds,
    };
    let (mut next_slack, mut next_art) = (n, n + n_slack);
    for (a, sense, b) in &scaled {
        let mut row = vec![0.0; w + 1];
        row[..n].copy_from_slice(a);
        row[w] = *b;
        match sense {
            Sense::Le => {
                row[next_slack] = 1.0;
                t.basis.push(next_slack);
                next_slack += 1;
            }
            Sense::Ge => {
                row[next_slack] = -1.0;
                next_slack += 1;
                row[next_art] = 1.0;
                t.basis.push(next_art);
                next_art += 1;
            }
            Sense::Eq => {
                row[next_art] = 1.0;
                t.basis.push(next_art);
                next_art += 1;
            }
        }
        t.rows.push(row);
    }

    let b_scale = scaled.iter().fold(1.0f64, |s, r| s.max(r.2));

    // Phase 1: maximize −Σ artificials.
    if n_art > 0 {
        let phase1: Vec<f64> = t
            .kinds
            .iter()
            .map(|k| if *k == Column::Artificial { -1.0 } else { 0.0 })
            .collect();
        t.price(&phase1);
        t.optimize(true)?;
        let infeasibility: f64 = t
            .rows
            .iter()
            .zip(&t.basis)
            .filter(|(_, &b)| t.kinds[b] == Column::Artificial)
            .map(|(r, _)| r[w])
            .sum();
        if infeasibility > 1e-9 * b_scale {
            return Ok(Outcome::Infeasible);
        }
        // Drive zero-valued artificials out of the basis; drop rows that
        // turn out to be redundant.
        let mut i = 0;
        while i < t.rows.len() {
            if t.kinds[t.basis[i]] == Column::Artificial {
                let col =
                    (0..w).find(|&j| t.kinds[j] != Column::Artificial && t.rows[i][j].abs() > 1e-9);
                match col {
                    Some(j) => t.pivot(i, j),
                    None => {
                        t.rows.remove(i);
                        t.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    // Phase 2 on the scaled objective.
    let c_scale = objective.iter().fold(0.0f64, |s, v| s.max(v.abs()));
    let mut phase2 = vec![0.0; w];
    if c_scale > 0.0 {
        for (j, c) in objective.iter().enumerate() {
            phase2[j] = c / c_scale;
        }
    }
    t.price(&phase2);
    t.optimize(false)?;

    let mut x = vec![0.0; n];
    for (row, &b) in t.rows.iter().zip(&t.basis) {
        if b < n {
            x[b] = row[w].max(0.0);
        }
    }
    Ok(Outcome::Optimal(x))
}
