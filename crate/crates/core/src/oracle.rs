//! Brute-force reference solvers for small instances.
//!
//! Both enumerate integer points in lexicographic order and keep the first
//! point reaching the minimum objective, so ties resolve to the
//! lexicographically smallest assignment.

use crate::error::{Error, Result};
use crate::ilp::{IlpSolution, IlpStatus, IntegerLinearProgram, Relation};
use crate::model::{check_feasible, total_cost, ProblemInstance, ShedPlan, ZonePlan};

pub const DEFAULT_ENUMERATION_BUDGET: u64 = 100_000_000;

/// Optimum of the original bilinear program over `(k, d)` in each zone's
/// box, subject to shortfall and adjacent-pair fairness. `Ok(None)` when no
/// point is feasible. Ties go to the lexicographically smallest
/// `(k_1, d_1, k_2, d_2, ...)`.
pub fn brute_force_original(instance: &ProblemInstance) -> Result<Option<(ShedPlan, f64)>> {
    brute_force_original_with(instance, DEFAULT_ENUMERATION_BUDGET)
}

pub fn brute_force_original_with(instance: &ProblemInstance, budget: u64) -> Result<Option<(ShedPlan, f64)>> {
    let zones = instance.zones();
    let size: f64 = zones.iter().map(|z| (z.k_max as f64 + 1.0) * (z.d_max_slots - z.d_min_slots + 1) as f64).product();
    if size > budget as f64 {
        return Err(Error::EnumerationBudget { size, budget });
    }

    let mut current: Vec<ZonePlan> = zones.iter().map(|z| ZonePlan::consistent(0, z.d_min_slots)).collect();
    let mut best: Option<(ShedPlan, f64)> = None;
    loop {
        let plan = ShedPlan::new(current.clone());
        if check_feasible(instance, &plan)?.is_feasible() {
            let cost = total_cost(instance, &plan)?;
            if best.as_ref().is_none_or(|(_, c)| cost < *c) {
                best = Some((plan, cost));
            }
        }
        // odometer over (k_1, d_1, ..., k_N, d_N), last position fastest
        let mut pos = 2 * zones.len();
        loop {
            if pos == 0 {
                return Ok(best);
            }
            pos -= 1;
            let (n, is_d) = (pos / 2, pos % 2 == 1);
            let z = &zones[n];
            let e = &mut current[n];
            if is_d {
                if e.d < z.d_max_slots {
                    *e = ZonePlan::consistent(e.k, e.d + 1);
                    break;
                }
                *e = ZonePlan::consistent(e.k, z.d_min_slots);
            } else {
                if e.k < z.k_max {
                    *e = ZonePlan::consistent(e.k + 1, e.d);
                    break;
                }
                *e = ZonePlan::consistent(0, e.d);
            }
        }
    }
}

/// Exhaustive search over every integer point of the variable boxes. Partial
/// assignments whose rows cannot be met by any completion are skipped; the
/// budget bounds the number of search nodes visited.
pub fn brute_force_ilp(program: &IntegerLinearProgram) -> Result<IlpSolution> {
    brute_force_ilp_with(program, DEFAULT_ENUMERATION_BUDGET)
}

struct Search<'a> {
    program: &'a IntegerLinearProgram,
    /// `suffix_min[i][j]`: smallest possible contribution of variables
    /// `j..n` to row `i`.
    suffix_min: Vec<Vec<f64>>,
    suffix_max: Vec<Vec<f64>>,
    tol: Vec<f64>,
    x: Vec<i64>,
    activity: Vec<f64>,
    objective: f64,
    best: Option<(f64, Vec<i64>)>,
    visited: u64,
    budget: u64,
}

impl Search<'_> {
    fn rows_possible(&self, depth: usize) -> bool {
        self.program.constraints.iter().enumerate().all(|(i, c)| {
            let lo = self.activity[i] + self.suffix_min[i][depth];
            let hi = self.activity[i] + self.suffix_max[i][depth];
            let t = self.tol[i];
            match c.relation {
                Relation::Le => lo <= c.rhs + t,
                Relation::Ge => hi >= c.rhs - t,
                Relation::Eq => lo <= c.rhs + t && hi >= c.rhs - t,
            }
        })
    }

    fn descend(&mut self, depth: usize) -> Result<()> {
        self.visited += 1;
        if self.visited > self.budget {
            return Err(Error::EnumerationBudget { size: self.visited as f64, budget: self.budget });
        }
        if !self.rows_possible(depth) {
            return Ok(());
        }
        let n = self.program.num_vars();
        if depth == n {
            if self.best.as_ref().is_none_or(|(b, _)| self.objective < *b) {
                self.best = Some((self.objective, self.x.clone()));
            }
            return Ok(());
        }
        let (lo, hi) = self.program.bounds[depth];
        let c = self.program.objective[depth];
        for v in lo..=hi {
            self.x[depth] = v;
            for (i, row) in self.program.constraints.iter().enumerate() {
                self.activity[i] += row.coeffs[depth] * v as f64;
            }
            self.objective += c * v as f64;
            let r = self.descend(depth + 1);
            for (i, row) in self.program.constraints.iter().enumerate() {
                self.activity[i] -= row.coeffs[depth] * v as f64;
            }
            self.objective -= c * v as f64;
            r?;
        }
        Ok(())
    }
}

pub fn brute_force_ilp_with(program: &IntegerLinearProgram, budget: u64) -> Result<IlpSolution> {
    let n = program.num_vars();
    let mut suffix_min = Vec::with_capacity(program.constraints.len());
    let mut suffix_max = Vec::with_capacity(program.constraints.len());
    let mut tol = Vec::with_capacity(program.constraints.len());
    for c in &program.constraints {
        let mut mins = vec![0.0; n + 1];
        let mut maxs = vec![0.0; n + 1];
        for j in (0..n).rev() {
            let (lo, hi) = program.bounds[j];
            let (a, b) = (c.coeffs[j] * lo as f64, c.coeffs[j] * hi as f64);
            mins[j] = mins[j + 1] + a.min(b);
            maxs[j] = maxs[j + 1] + a.max(b);
        }
        suffix_min.push(mins);
        suffix_max.push(maxs);
        tol.push(1e-9 * c.rhs.abs().max(1.0));
    }
    let mut search = Search {
        program,
        suffix_min,
        suffix_max,
        tol,
        x: vec![0; n],
        activity: vec![0.0; program.constraints.len()],
        objective: 0.0,
        best: None,
        visited: 0,
        budget,
    };
    search.descend(0)?;
    let visited = search.visited;
    Ok(match search.best {
        Some((_, values)) => IlpSolution {
            status: IlpStatus::Optimal,
            objective: program.objective_value(&values),
            values,
            node_count: visited,
            gap: 0.0,
        },
        None => IlpSolution {
            status: IlpStatus::Infeasible,
            objective: f64::INFINITY,
            values: vec![],
            node_count: visited,
            gap: 0.0,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ilp::{solve_ilp, Constraint};
    use crate::model::tests::zone;
    use crate::relax::build_relaxation;

    fn single() -> ProblemInstance {
        ProblemInstance::new(vec![zone(1, 400.0, (4.0, 1.0, 1.0), 4, (1, 4))], 400.0, 0.0, 30).unwrap()
    }

    #[test]
    fn zero_shortfall_optimum_is_no_outages() {
        let inst = ProblemInstance::new(
            vec![zone(1, 100.0, (4.0, 8.0, 1.0), 3, (2, 4)), zone(2, 100.0, (4.0, 12.0, 1.0), 3, (1, 4))],
            0.0,
            1e6,
            30,
        )
        .unwrap();
        let (plan, cost) = brute_force_original(&inst).unwrap().unwrap();
        assert_eq!(plan.k(), vec![0, 0]);
        assert_eq!(plan.d(), vec![2, 1]);
        assert_eq!(cost, 0.25 * 8.0 * 2.0 + 0.25 * 12.0);
    }

    #[test]
    fn single_zone_hand_enumeration() {
        // feasible needs k*d >= 4; (1,4) costs 6, (2,2) costs 6.5, (4,1) costs 8.25
        let (plan, cost) = brute_force_original(&single()).unwrap().unwrap();
        assert_eq!(plan.entries, vec![ZonePlan::consistent(1, 4)]);
        assert_eq!(cost, 6.0);
    }

    #[test]
    fn unreachable_shortfall_is_infeasible() {
        let inst = single().with_e_sf(1601.0).unwrap();
        assert!(brute_force_original(&inst).unwrap().is_none());
        let (p, _) = build_relaxation(&inst).unwrap();
        assert_eq!(brute_force_ilp(&p).unwrap().status, IlpStatus::Infeasible);
        assert_eq!(solve_ilp(&p).unwrap().status, IlpStatus::Infeasible);
    }

    #[test]
    fn relaxation_bounds_original() {
        let (p, _) = build_relaxation(&single()).unwrap();
        let relaxed = brute_force_ilp(&p).unwrap();
        let (_, original) = brute_force_original(&single()).unwrap().unwrap();
        assert!(relaxed.objective <= original);
        assert_eq!(relaxed.objective, solve_ilp(&p).unwrap().objective);
    }

    #[test]
    fn ilp_enumeration_on_plain_program() {
        let row = |coeffs: Vec<f64>, relation, rhs| Constraint { name: "r".into(), coeffs, relation, rhs };
        let p = IntegerLinearProgram::unnamed(
            vec![-5.0, -4.0, -3.0],
            vec![(0, 1); 3],
            vec![
                row(vec![2.0, 3.0, 1.0], Relation::Le, 5.0),
                row(vec![4.0, 1.0, 2.0], Relation::Le, 11.0),
                row(vec![3.0, 4.0, 2.0], Relation::Le, 8.0),
            ],
        )
        .unwrap();
        let s = brute_force_ilp(&p).unwrap();
        assert_eq!(s.values, vec![1, 1, 0]);
        assert_eq!(s.objective, -9.0);
    }

    #[test]
    fn budgets_refuse_large_problems() {
        let big = ProblemInstance::new(
            (1..=6).map(|i| zone(i, 100.0, (1.0, 1.0, 1.0), 200, (2, 8))).collect(),
            0.0,
            0.0,
            30,
        )
        .unwrap();
        assert!(matches!(brute_force_original(&big), Err(Error::EnumerationBudget { .. })));
        let (p, _) = build_relaxation(&single()).unwrap();
        assert!(matches!(brute_force_ilp_with(&p, 3), Err(Error::EnumerationBudget { .. })));
    }
}
