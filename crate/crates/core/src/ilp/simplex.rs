//! Dense bounded-variable dual simplex.
//!
//! Rows are stored as `r_i = sum_j a_ij x_j` with a logical variable `r_i`
//! boxed by the row's relation, so the column set is `[A | -I]` and the
//! initial basis is the logicals. Rows are scaled to unit max coefficient.

use super::{Constraint, IntegerLinearProgram, LpSolution, LpStatus, Relation, FEAS_TOL};
use crate::error::{Error, Result};

const PIVOT_TOL: f64 = 1e-9;
const DEGENERATE_STREAK: usize = 50;

/// Immutable scaled problem data shared by every tableau of one solve.
#[derive(Debug)]
pub(crate) struct LpData {
    pub(crate) n: usize,
    pub(crate) m: usize,
    /// Scaled rows, `m x n` row-major.
    rows: Vec<f64>,
    row_lo: Vec<f64>,
    row_hi: Vec<f64>,
    cost: Vec<f64>,
}

impl LpData {
    pub(crate) fn new(objective: &[f64], constraints: &[Constraint]) -> Self {
        let n = objective.len();
        let m = constraints.len();
        let mut rows = Vec::with_capacity(m * n);
        let mut row_lo = Vec::with_capacity(m);
        let mut row_hi = Vec::with_capacity(m);
        for c in constraints {
            let max = c.coeffs.iter().fold(0.0f64, |acc, a| acc.max(a.abs()));
            let s = if max > 0.0 { 1.0 / max } else { 1.0 };
            rows.extend(c.coeffs.iter().map(|a| a * s));
            let rhs = c.rhs * s;
            let (lo, hi) = match c.relation {
                Relation::Le => (f64::NEG_INFINITY, rhs),
                Relation::Ge => (rhs, f64::INFINITY),
                Relation::Eq => (rhs, rhs),
            };
            row_lo.push(lo);
            row_hi.push(hi);
        }
        let mut cost = objective.to_vec();
        cost.resize(n + m, 0.0);
        Self { n, m, rows, row_lo, row_hi, cost }
    }

    fn ncols(&self) -> usize {
        self.n + self.m
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.rows[i * self.n..(i + 1) * self.n]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    Basic,
    Lower,
    Upper,
}

/// Basis of a solved tableau, enough to rebuild it by refactorization.
#[derive(Debug, Clone)]
pub(crate) struct BasisSnapshot {
    basis: Vec<usize>,
    at_upper: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Outcome {
    Optimal,
    Infeasible,
}

#[derive(Debug, Clone)]
pub(crate) struct Tableau<'a> {
    data: &'a LpData,
    /// `B^-1 [A | -I]`, `m x (n + m)` row-major.
    t: Vec<f64>,
    d: Vec<f64>,
    basis: Vec<usize>,
    state: Vec<State>,
    x: Vec<f64>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    bland: bool,
}

impl<'a> Tableau<'a> {
    /// Slack basis with structural columns at their dual-feasible bound.
    pub(crate) fn cold(data: &'a LpData, lo: &[f64], hi: &[f64]) -> Self {
        let (n, m, nc) = (data.n, data.m, data.ncols());
        let mut t = vec![0.0; m * nc];
        for i in 0..m {
            let row = data.row(i);
            for j in 0..n {
                t[i * nc + j] = -row[j];
            }
            t[i * nc + n + i] = 1.0;
        }
        let mut state = vec![State::Basic; nc];
        for (j, s) in state.iter_mut().enumerate().take(n) {
            *s = if data.cost[j] >= 0.0 { State::Lower } else { State::Upper };
        }
        let (lo_all, hi_all) = Self::all_bounds(data, lo, hi);
        let mut tab = Self {
            data,
            t,
            d: data.cost.clone(),
            basis: (n..nc).collect(),
            state,
            x: vec![0.0; nc],
            lo: lo_all,
            hi: hi_all,
            bland: false,
        };
        tab.recompute_values();
        tab
    }

    /// Rebuilds the tableau for a given basis by Gauss-Jordan elimination.
    /// Returns `None` if the basis matrix is numerically singular.
    pub(crate) fn from_basis(data: &'a LpData, snapshot: &BasisSnapshot, lo: &[f64], hi: &[f64]) -> Option<Self> {
        let (n, m, nc) = (data.n, data.m, data.ncols());
        let mut t = vec![0.0; m * nc];
        for i in 0..m {
            t[i * nc..i * nc + n].copy_from_slice(data.row(i));
            t[i * nc + n + i] = -1.0;
        }
        let mut assigned = vec![false; m];
        let mut basis = vec![usize::MAX; m];
        for &col in &snapshot.basis {
            let (mut best, mut best_abs) = (usize::MAX, 1e-11);
            for (i, _) in assigned.iter().enumerate().filter(|(_, a)| !**a) {
                let v = t[i * nc + col].abs();
                if v > best_abs {
                    best = i;
                    best_abs = v;
                }
            }
            if best == usize::MAX {
                return None;
            }
            assigned[best] = true;
            basis[best] = col;
            pivot_rows(&mut t, nc, m, best, col);
        }

        let mut state = vec![State::Lower; nc];
        for (j, s) in state.iter_mut().enumerate() {
            if snapshot.at_upper[j] {
                *s = State::Upper;
            }
        }
        for &b in &basis {
            state[b] = State::Basic;
        }
        let mut d = data.cost.clone();
        for (i, &b) in basis.iter().enumerate() {
            let cb = data.cost[b];
            if cb != 0.0 {
                let row = &t[i * nc..(i + 1) * nc];
                for (dj, tij) in d.iter_mut().zip(row) {
                    *dj -= cb * tij;
                }
            }
        }
        let (lo_all, hi_all) = Self::all_bounds(data, lo, hi);
        let mut tab = Self { data, t, d, basis, state, x: vec![0.0; nc], lo: lo_all, hi: hi_all, bland: false };
        tab.recompute_values();
        Some(tab)
    }

    fn all_bounds(data: &LpData, lo: &[f64], hi: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let mut lo_all = lo.to_vec();
        lo_all.extend_from_slice(&data.row_lo);
        let mut hi_all = hi.to_vec();
        hi_all.extend_from_slice(&data.row_hi);
        (lo_all, hi_all)
    }

    /// Places nonbasic columns on their bounds and derives basic values.
    fn recompute_values(&mut self) {
        let nc = self.data.ncols();
        for j in 0..nc {
            match self.state[j] {
                State::Lower if self.lo[j].is_finite() => self.x[j] = self.lo[j],
                State::Upper if self.hi[j].is_finite() => self.x[j] = self.hi[j],
                // a nonbasic logical must sit on its finite side
                State::Lower => {
                    self.state[j] = State::Upper;
                    self.x[j] = self.hi[j];
                }
                State::Upper => {
                    self.state[j] = State::Lower;
                    self.x[j] = self.lo[j];
                }
                State::Basic => {}
            }
        }
        for (i, &b) in self.basis.iter().enumerate() {
            let row = &self.t[i * nc..(i + 1) * nc];
            let mut v = 0.0;
            for (j, a) in row.iter().enumerate() {
                if self.state[j] != State::Basic {
                    v -= a * self.x[j];
                }
            }
            self.x[b] = v;
        }
    }

    pub(crate) fn bounds(&self, j: usize) -> (f64, f64) {
        (self.lo[j], self.hi[j])
    }

    pub(crate) fn snapshot(&self) -> BasisSnapshot {
        BasisSnapshot { basis: self.basis.clone(), at_upper: self.state.iter().map(|s| *s == State::Upper).collect() }
    }

    /// Changes the box of structural variable `j`, keeping the basis.
    pub(crate) fn set_bounds(&mut self, j: usize, lo: f64, hi: f64) {
        self.lo[j] = lo;
        self.hi[j] = hi;
        let target = match self.state[j] {
            State::Basic => return,
            State::Lower => lo,
            State::Upper => hi,
        };
        let delta = target - self.x[j];
        if delta != 0.0 {
            self.shift_nonbasic(j, delta);
        }
    }

    fn shift_nonbasic(&mut self, j: usize, delta: f64) {
        let nc = self.data.ncols();
        self.x[j] += delta;
        for (i, &b) in self.basis.iter().enumerate() {
            let a = self.t[i * nc + j];
            if a != 0.0 {
                self.x[b] -= a * delta;
            }
        }
    }

    fn infeasibility(&self, var: usize) -> f64 {
        let v = self.x[var];
        if v < self.lo[var] - FEAS_TOL {
            self.lo[var] - v
        } else if v > self.hi[var] + FEAS_TOL {
            v - self.hi[var]
        } else {
            0.0
        }
    }

    fn choose_leaving(&self) -> Option<usize> {
        if self.bland {
            return (0..self.data.m)
                .filter(|&i| self.infeasibility(self.basis[i]) > 0.0)
                .min_by_key(|&i| self.basis[i]);
        }
        let mut best = None;
        let mut best_inf = 0.0;
        for i in 0..self.data.m {
            let inf = self.infeasibility(self.basis[i]);
            if inf > best_inf {
                best_inf = inf;
                best = Some(i);
            }
        }
        best
    }

    /// Runs dual simplex iterations until primal feasibility or a proof of
    /// infeasibility.
    pub(crate) fn solve(&mut self, max_iter: usize) -> Result<Outcome> {
        let nc = self.data.ncols();
        let mut streak = 0;
        for _ in 0..max_iter {
            let Some(r) = self.choose_leaving() else {
                return Ok(Outcome::Optimal);
            };
            let leaving = self.basis[r];
            let increase = self.x[leaving] < self.lo[leaving];
            let target = if increase { self.lo[leaving] } else { self.hi[leaving] };

            let row = &self.t[r * nc..(r + 1) * nc];
            let mut enter: Option<(usize, f64, f64)> = None;
            for (j, &alpha) in row.iter().enumerate() {
                let st = self.state[j];
                if st == State::Basic || self.lo[j] == self.hi[j] {
                    continue;
                }
                if alpha.abs() < PIVOT_TOL {
                    continue;
                }
                let eligible = match (increase, st) {
                    (true, State::Lower) => alpha < 0.0,
                    (true, State::Upper) => alpha > 0.0,
                    (false, State::Lower) => alpha > 0.0,
                    (false, State::Upper) => alpha < 0.0,
                    (_, State::Basic) => unreachable!(),
                };
                if !eligible {
                    continue;
                }
                let dj = if st == State::Lower { self.d[j].max(0.0) } else { (-self.d[j]).max(0.0) };
                let ratio = dj / alpha.abs();
                let better = match enter {
                    None => true,
                    Some((_, best_ratio, best_alpha)) => {
                        if ratio < best_ratio - 1e-12 {
                            true
                        } else if ratio <= best_ratio + 1e-12 && !self.bland {
                            alpha.abs() > best_alpha * (1.0 + 1e-9)
                        } else {
                            false
                        }
                    }
                };
                if better {
                    enter = Some((j, ratio, alpha.abs()));
                }
            }
            let Some((j, ratio, _)) = enter else {
                return Ok(Outcome::Infeasible);
            };

            if ratio <= 1e-12 {
                streak += 1;
                if streak >= DEGENERATE_STREAK {
                    self.bland = true;
                }
            } else {
                streak = 0;
            }

            let alpha = self.t[r * nc + j];
            let delta = (self.x[leaving] - target) / alpha;
            self.shift_nonbasic(j, delta);
            self.x[leaving] = target;
            self.state[leaving] = if increase { State::Lower } else { State::Upper };
            self.state[j] = State::Basic;
            self.basis[r] = j;
            pivot_rows(&mut self.t, nc, self.data.m, r, j);
            let dj = self.d[j];
            if dj != 0.0 {
                let row = &self.t[r * nc..(r + 1) * nc];
                for (dk, tk) in self.d.iter_mut().zip(row) {
                    *dk -= dj * tk;
                }
            }
            self.d[j] = 0.0;
        }
        Err(Error::Solver(format!(
            "dual simplex did not converge in {max_iter} iterations ({} rows, {} columns)",
            self.data.m, self.data.n
        )))
    }

    pub(crate) fn structural_values(&self) -> &[f64] {
        &self.x[..self.data.n]
    }

    pub(crate) fn objective(&self) -> f64 {
        self.data.cost[..self.data.n].iter().zip(self.structural_values()).map(|(c, x)| c * x).sum()
    }

    /// Largest violation of rows or structural bounds, recomputed from the
    /// original scaled data rather than the tableau.
    pub(crate) fn max_violation(&self) -> f64 {
        let n = self.data.n;
        let x = self.structural_values();
        let mut worst = 0.0f64;
        for (j, v) in x.iter().enumerate().take(n) {
            worst = worst.max(self.lo[j] - v).max(v - self.hi[j]);
        }
        for i in 0..self.data.m {
            let act: f64 = self.data.row(i).iter().zip(x).map(|(a, v)| a * v).sum();
            let scale = 1.0 + act.abs();
            worst = worst.max((self.lo[n + i] - act) / scale).max((act - self.hi[n + i]) / scale);
        }
        worst
    }
}

/// Gauss-Jordan pivot on `(r, col)` over all `m` rows.
fn pivot_rows(t: &mut [f64], nc: usize, m: usize, r: usize, col: usize) {
    let p = t[r * nc + col];
    for v in &mut t[r * nc..(r + 1) * nc] {
        *v /= p;
    }
    t[r * nc + col] = 1.0;
    let (before, rest) = t.split_at_mut(r * nc);
    let (pivot_row, after) = rest.split_at_mut(nc);
    for row in before.chunks_exact_mut(nc).chain(after.chunks_exact_mut(nc)).take(m - 1) {
        let f = row[col];
        if f != 0.0 {
            for (v, pv) in row.iter_mut().zip(pivot_row.iter()) {
                *v -= f * pv;
            }
            row[col] = 0.0;
        }
    }
}

pub(crate) fn iteration_limit(data: &LpData) -> usize {
    50 * (data.n + 2 * data.m) + 1000
}

/// Solves `tab` and re-solves cold if the result drifted out of tolerance.
pub(crate) fn solve_checked<'a>(tab: &mut Tableau<'a>, data: &'a LpData) -> Result<Outcome> {
    let limit = iteration_limit(data);
    let outcome = match tab.solve(limit) {
        Ok(o) => o,
        Err(_) => {
            let (lo, hi) = (tab.lo[..data.n].to_vec(), tab.hi[..data.n].to_vec());
            *tab = Tableau::cold(data, &lo, &hi);
            tab.bland = true;
            tab.solve(limit)?
        }
    };
    if outcome == Outcome::Optimal && tab.max_violation() > 10.0 * FEAS_TOL {
        let (lo, hi) = (tab.lo[..data.n].to_vec(), tab.hi[..data.n].to_vec());
        *tab = Tableau::cold(data, &lo, &hi);
        let outcome = tab.solve(limit)?;
        if outcome == Outcome::Optimal && tab.max_violation() > 10.0 * FEAS_TOL {
            return Err(Error::Solver(format!(
                "LP solution violates rows by {:.3e} after a fresh solve",
                tab.max_violation()
            )));
        }
        return Ok(outcome);
    }
    Ok(outcome)
}

/// Solves the continuous relaxation of `program` (integrality dropped).
pub fn solve_lp(program: &IntegerLinearProgram) -> Result<LpSolution> {
    let data = LpData::new(&program.objective, &program.constraints);
    let lo: Vec<f64> = program.bounds.iter().map(|b| b.0 as f64).collect();
    let hi: Vec<f64> = program.bounds.iter().map(|b| b.1 as f64).collect();
    let mut tab = Tableau::cold(&data, &lo, &hi);
    Ok(match solve_checked(&mut tab, &data)? {
        Outcome::Optimal => LpSolution {
            status: LpStatus::Optimal,
            objective: tab.objective(),
            values: tab.structural_values().to_vec(),
        },
        Outcome::Infeasible => LpSolution { status: LpStatus::Infeasible, objective: f64::INFINITY, values: vec![] },
    })
}
