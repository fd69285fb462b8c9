//! Optimized plan against round-robin sequencing and equal power shedding.

use loadshed::baselines::{equal_power_plan, sequencing_plan};
use loadshed::model::{check_feasible, shed_energy, total_cost};
use loadshed::pipeline::{optimize, SolveOptions};
use loadshed::scenario::{bench_instance, DEFAULT_SEED};

fn main() -> loadshed::Result<()> {
    let instance = bench_instance(DEFAULT_SEED);
    let options = SolveOptions { node_budget: 50_000, accept_incumbent: true, ..SolveOptions::default() };
    let optimized = optimize(&instance, &options)?;

    let plans =
        [("optimized", optimized.plan().clone()), ("sequencing", sequencing_plan(&instance)), ("equal power", equal_power_plan(&instance))];
    let best = optimized.cost;
    for (name, plan) in &plans {
        let cost = total_cost(&instance, plan)?;
        let report = check_feasible(&instance, plan)?;
        println!(
            "{name:<12} cost {cost:>10.2}  shed {:>9.1} MWh  fairness violations {:>2}  saving {:>5.1}%",
            shed_energy(&instance, plan)?,
            report.fairness_violations().count(),
            100.0 * (cost - best) / cost
        );
    }
    Ok(())
}
