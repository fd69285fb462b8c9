use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::io::Write;

use num_integer::Integer;

use super::simplex::{solve_checked, BasisSnapshot, LpData, Outcome, Tableau};
use super::{IlpSolution, IlpStatus, IntegerLinearProgram, INT_TOL};
use crate::error::{Error, Result};

pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IlpOptions {
    /// Maximum number of LP nodes before giving up with
    /// [`Error::NodeBudget`].
    pub node_budget: u64,
}

impl Default for IlpOptions {
    fn default() -> Self {
        Self { node_budget: DEFAULT_NODE_BUDGET }
    }
}

struct OpenNode {
    bound: f64,
    id: u64,
    depth: u32,
    lo: Vec<f64>,
    hi: Vec<f64>,
    basis: BasisSnapshot,
}

// Min-heap on (bound, id).
impl Ord for OpenNode {
    fn cmp(&self, other: &Self) -> Ordering {
        other.bound.total_cmp(&self.bound).then_with(|| other.id.cmp(&self.id))
    }
}

impl PartialOrd for OpenNode {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for OpenNode {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for OpenNode {}

/// Spacing of objective values over integer points, when every objective
/// coefficient is an integer multiple of a common dyadic step.
fn objective_grid(objective: &[f64]) -> Option<f64> {
    for p in 0..=20 {
        let s = f64::from(1u32 << p);
        let mut g: i64 = 0;
        let mut ok = true;
        for c in objective {
            let v = c * s;
            if v.abs() >= 2f64.powi(52) || (v - v.round()).abs() > 1e-9 * v.abs().max(1.0) {
                ok = false;
                break;
            }
            g = g.gcd(&(v.round() as i64));
        }
        if ok {
            return (g != 0).then(|| g as f64 / s);
        }
    }
    None
}

fn most_fractional(values: &[f64]) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    let mut best_dist = INT_TOL;
    for (j, &v) in values.iter().enumerate() {
        let f = v - v.floor();
        let dist = f.min(1.0 - f);
        if dist > best_dist {
            best_dist = dist;
            best = Some((j, v));
        }
    }
    best
}

fn round_into_bounds(values: &[f64], program: &IntegerLinearProgram) -> Vec<i64> {
    values.iter().zip(&program.bounds).map(|(v, &(lo, hi))| (v.round() as i64).clamp(lo, hi)).collect()
}

pub fn solve_ilp(program: &IntegerLinearProgram) -> Result<IlpSolution> {
    solve_ilp_with(program, &IlpOptions::default(), None)
}

/// Branch-and-bound: dives depth-first into the rounded-up child, and when a
/// dive ends resumes from the open node with the best bound
/// (ties by creation order). Branches on the most fractional variable, ties
/// by lowest index. When `trace` is given, one line is written per node.
pub fn solve_ilp_with(
    program: &IntegerLinearProgram,
    options: &IlpOptions,
    mut trace: Option<&mut dyn Write>,
) -> Result<IlpSolution> {
    let data = LpData::new(&program.objective, &program.constraints);
    let n = program.num_vars();
    let root_lo: Vec<f64> = program.bounds.iter().map(|b| b.0 as f64).collect();
    let root_hi: Vec<f64> = program.bounds.iter().map(|b| b.1 as f64).collect();
    let grid = objective_grid(&program.objective);

    let mut incumbent: Option<(f64, Vec<i64>)> = None;
    let mut open: BinaryHeap<OpenNode> = BinaryHeap::new();
    let mut node_count: u64 = 0;
    let mut next_id: u64 = 1;
    let mut root_bound = f64::NEG_INFINITY;

    let prunable = |bound: f64, incumbent: &Option<(f64, Vec<i64>)>| -> bool {
        match incumbent {
            None => false,
            Some((best, _)) => {
                let tol = 1e-7 * best.abs().max(1.0);
                match grid {
                    Some(g) => bound > best - g + tol,
                    None => bound >= best - tol,
                }
            }
        }
    };

    let mut current: Option<(Tableau, u64, u32)> = Some((Tableau::cold(&data, &root_lo, &root_hi), 0, 0));

    loop {
        let (mut tab, id, depth) = match current.take() {
            Some(c) => c,
            None => {
                let Some(node) = pop_live(&mut open, |b| prunable(b, &incumbent)) else {
                    break;
                };
                let tab = Tableau::from_basis(&data, &node.basis, &node.lo, &node.hi)
                    .unwrap_or_else(|| Tableau::cold(&data, &node.lo, &node.hi));
                (tab, node.id, node.depth)
            }
        };

        if node_count >= options.node_budget {
            let open_min = open.iter().map(|o| o.bound).fold(f64::INFINITY, f64::min);
            let gap = incumbent.as_ref().map_or(f64::INFINITY, |(best, _)| (best - open_min.min(*best)).max(0.0));
            let (incumbent, best) = match incumbent {
                Some((obj, x)) => (Some(obj), x),
                None => (None, Vec::new()),
            };
            return Err(Error::NodeBudget { budget: options.node_budget, incumbent, gap, best });
        }
        node_count += 1;

        let outcome = solve_checked(&mut tab, &data)?;
        if outcome == Outcome::Infeasible {
            if let Some(w) = trace.as_deref_mut() {
                writeln!(w, "node {id} depth {depth} bound infeasible branch -").ok();
            }
            continue;
        }
        let bound = tab.objective();
        if id == 0 {
            root_bound = bound;
        }
        if prunable(bound, &incumbent) {
            if let Some(w) = trace.as_deref_mut() {
                writeln!(w, "node {id} depth {depth} bound {bound:.6} branch pruned").ok();
            }
            continue;
        }

        let values = tab.structural_values();
        match most_fractional(values) {
            None => {
                let x = round_into_bounds(values, program);
                let accepted = program.is_feasible_exact(&x);
                if let Some(w) = trace.as_deref_mut() {
                    let tag = if accepted { "integral" } else { "rejected" };
                    writeln!(w, "node {id} depth {depth} bound {bound:.6} branch {tag}").ok();
                }
                if accepted {
                    let obj = program.objective_value(&x);
                    if incumbent.as_ref().is_none_or(|(best, _)| obj < *best) {
                        incumbent = Some((obj, x));
                    }
                }
            }
            Some((j, v)) => {
                if let Some(w) = trace.as_deref_mut() {
                    writeln!(w, "node {id} depth {depth} bound {bound:.6} branch {}", program.var_names[j]).ok();
                }
                let (floor, ceil) = (v.floor(), v.ceil());
                let snapshot = tab.snapshot();
                let lo: Vec<f64> = (0..n).map(|k| tab_lo(&tab, k)).collect();
                let hi: Vec<f64> = (0..n).map(|k| tab_hi(&tab, k)).collect();

                let (other_lo, mut other_hi) = (lo, hi.clone());
                // Up first: on covering rows rounding up keeps the dive feasible.
                other_hi[j] = floor;
                tab.set_bounds(j, ceil, hi[j]);
                open.push(OpenNode {
                    bound,
                    id: next_id,
                    depth: depth + 1,
                    lo: other_lo,
                    hi: other_hi,
                    basis: snapshot,
                });
                current = Some((tab, next_id + 1, depth + 1));
                next_id += 2;
            }
        }
    }

    Ok(match incumbent {
        Some((objective, values)) => {
            debug_assert!(
                root_bound <= objective + 1e-6 * objective.abs().max(1.0),
                "LP bound {root_bound} above integer optimum {objective}"
            );
            IlpSolution { status: IlpStatus::Optimal, objective, values, node_count, gap: 0.0 }
        }
        None => IlpSolution {
            status: IlpStatus::Infeasible,
            objective: f64::INFINITY,
            values: vec![],
            node_count,
            gap: 0.0,
        },
    })
}

fn tab_lo(tab: &Tableau, j: usize) -> f64 {
    tab.bounds(j).0
}

fn tab_hi(tab: &Tableau, j: usize) -> f64 {
    tab.bounds(j).1
}

fn pop_live(open: &mut BinaryHeap<OpenNode>, prunable: impl Fn(f64) -> bool) -> Option<OpenNode> {
    while let Some(node) = open.pop() {
        if !prunable(node.bound) {
            return Some(node);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ilp::{Constraint, Relation};

    fn row(coeffs: Vec<f64>, relation: Relation, rhs: f64) -> Constraint {
        Constraint { name: "r".into(), coeffs, relation, rhs }
    }

    #[test]
    fn grid_detection() {
        assert_eq!(objective_grid(&[0.25, 0.5, 1.0]), Some(0.25));
        assert_eq!(objective_grid(&[2.0, 4.0, 0.0]), Some(2.0));
        assert_eq!(objective_grid(&[0.0, 0.0]), None);
        assert_eq!(objective_grid(&[0.1]), None);
    }

    #[test]
    fn integral_root_takes_one_node() {
        let p = IntegerLinearProgram::unnamed(vec![1.0], vec![(0, 10)], vec![row(vec![1.0], Relation::Ge, 3.0)]).unwrap();
        let s = solve_ilp(&p).unwrap();
        assert_eq!(s.status, IlpStatus::Optimal);
        assert_eq!(s.values, vec![3]);
        assert_eq!(s.node_count, 1);
        assert_eq!(s.gap, 0.0);
    }

    #[test]
    fn rounding_forced_by_branching() {
        let p = IntegerLinearProgram::unnamed(vec![1.0], vec![(0, 10)], vec![row(vec![1.0], Relation::Ge, 2.5)]).unwrap();
        let s = solve_ilp(&p).unwrap();
        assert_eq!(s.values, vec![3]);
        assert_eq!(s.objective, 3.0);
        assert!(s.node_count > 1);
    }

    #[test]
    fn integer_infeasible_but_lp_feasible() {
        // 2x = 1 has no integer solution
        let p = IntegerLinearProgram::unnamed(vec![1.0], vec![(0, 5)], vec![row(vec![2.0], Relation::Eq, 1.0)]).unwrap();
        let s = solve_ilp(&p).unwrap();
        assert_eq!(s.status, IlpStatus::Infeasible);
        assert!(s.values.is_empty());
    }

    #[test]
    fn knapsack() {
        // max 5a + 4b + 3c s.t. 2a + 3b + c <= 5, 4a + b + 2c <= 11, 3a + 4b + 2c <= 8, binaries
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
        let s = solve_ilp(&p).unwrap();
        assert_eq!(s.objective, -9.0);
        assert_eq!(s.values, vec![1, 1, 0]);
    }

    #[test]
    fn node_budget_is_enforced() {
        let p = IntegerLinearProgram::unnamed(
            vec![-1.0, -1.0],
            vec![(0, 100), (0, 100)],
            vec![row(vec![2.0, 2.0], Relation::Le, 101.0)],
        )
        .unwrap();
        let err = solve_ilp_with(&p, &IlpOptions { node_budget: 1 }, None).unwrap_err();
        assert!(matches!(err, Error::NodeBudget { budget: 1, .. }));
        assert_eq!(solve_ilp(&p).unwrap().objective, -50.0);
    }

    #[test]
    fn trace_writes_one_line_per_node() {
        let p = IntegerLinearProgram::unnamed(vec![1.0], vec![(0, 10)], vec![row(vec![1.0], Relation::Ge, 2.5)]).unwrap();
        let mut buf = Vec::new();
        let s = solve_ilp_with(&p, &IlpOptions::default(), Some(&mut buf)).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count() as u64, s.node_count);
        assert!(text.starts_with("node 0 depth 0 bound 2.500000 branch x0"));
    }
}
