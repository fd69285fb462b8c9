//! Relax, solve, recover: the optimization pipeline end to end.

use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::ilp::{solve_ilp_with, IlpOptions, IlpStatus, IntegerLinearProgram, DEFAULT_NODE_BUDGET};
use crate::model::{check_feasible, total_cost, FeasibilityReport, ProblemInstance, ShedPlan, ZoneSpec};
use crate::recovery::{is_exact, recover_detailed, Recovery};
use crate::relax::{build_relaxation_with, relaxed_objective, RelaxOptions, VariableLayout};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    pub node_budget: u64,
    pub relax: RelaxOptions,
    /// When the node budget runs out with an incumbent in hand, continue
    /// with that incumbent instead of failing. [`Optimized::gap`] then
    /// reports how far it may be from the relaxed optimum.
    pub accept_incumbent: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { node_budget: DEFAULT_NODE_BUDGET, relax: RelaxOptions::default(), accept_incumbent: false }
    }
}

#[derive(Debug, Clone)]
pub struct Optimized {
    pub num_vars: usize,
    pub num_rows: usize,
    /// Optimum of the relaxed integer program, read back as a plan.
    pub relaxed: ShedPlan,
    pub relaxed_objective: f64,
    /// Whether `w = d * k` held at the relaxed optimum.
    pub exact: bool,
    pub recovery: Recovery,
    pub cost: f64,
    pub report: FeasibilityReport,
    pub node_count: u64,
    /// Upper bound on `relaxed_objective` minus the relaxed optimum; zero
    /// when branch-and-bound finished.
    pub gap: f64,
    pub elapsed: Duration,
}

impl Optimized {
    pub fn plan(&self) -> &ShedPlan {
        &self.recovery.plan
    }
}

/// Names the constraint family that makes an instance infeasible. Without
/// fairness rows the relaxation is feasible exactly when every zone at
/// `(k_max, d_max)` sheds enough, so anything else is down to fairness.
pub fn diagnose_infeasibility(instance: &ProblemInstance) -> String {
    let max_shed: f64 = instance.zones().iter().map(ZoneSpec::max_shed_mwh).sum();
    if max_shed < instance.e_sf {
        format!("shortfall (at most {max_shed:.1} MWh sheddable, {:.1} MWh required)", instance.e_sf)
    } else {
        format!("fairness (no integer point keeps adjacent cost gaps within {})", instance.c_delta)
    }
}

/// Relaxed solution as seen by the pipeline: the plan read back from the
/// integer point, its objective, nodes used and remaining gap.
#[derive(Debug, Clone, PartialEq)]
pub struct RelaxedSolution {
    pub plan: ShedPlan,
    pub objective: f64,
    pub node_count: u64,
    pub gap: f64,
}

/// Solves the relaxation and only that. `Ok(None)` when the relaxation is
/// infeasible.
pub fn solve_relaxation(instance: &ProblemInstance, options: &SolveOptions) -> Result<Option<RelaxedSolution>> {
    let (program, layout) = build_relaxation_with(instance, options.relax)?;
    solve_program(&program, &layout, options)
}

fn solve_program(
    program: &IntegerLinearProgram,
    layout: &VariableLayout,
    options: &SolveOptions,
) -> Result<Option<RelaxedSolution>> {
    let ilp = IlpOptions { node_budget: options.node_budget };
    match solve_ilp_with(program, &ilp, None) {
        Ok(s) if s.status == IlpStatus::Infeasible => Ok(None),
        Ok(s) => Ok(Some(RelaxedSolution {
            plan: layout.plan_from_values(&s.values),
            objective: s.objective,
            node_count: s.node_count,
            gap: s.gap,
        })),
        Err(Error::NodeBudget { budget, incumbent: Some(objective), gap, best }) if options.accept_incumbent => {
            Ok(Some(RelaxedSolution { plan: layout.plan_from_values(&best), objective, node_count: budget, gap }))
        }
        Err(e) => Err(e),
    }
}

pub fn optimize(instance: &ProblemInstance, options: &SolveOptions) -> Result<Optimized> {
    let start = Instant::now();
    let (program, layout) = build_relaxation_with(instance, options.relax)?;
    let Some(solution) = solve_program(&program, &layout, options)? else {
        return Err(Error::Infeasible(diagnose_infeasibility(instance)));
    };
    let relaxed = solution.plan;
    let relaxed_obj = relaxed_objective(instance, &relaxed)?;
    let recovery = recover_detailed(instance, &relaxed)?;
    let cost = total_cost(instance, &recovery.plan)?;
    let report = check_feasible(instance, &recovery.plan)?;
    Ok(Optimized {
        num_vars: program.num_vars(),
        num_rows: program.constraints.len(),
        exact: is_exact(&relaxed),
        relaxed,
        relaxed_objective: relaxed_obj,
        recovery,
        cost,
        report,
        node_count: solution.node_count,
        gap: solution.gap,
        elapsed: start.elapsed(),
    })
}
