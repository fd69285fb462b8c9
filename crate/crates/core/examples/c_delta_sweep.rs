//! How the fairness limit moves the relaxed optimum on the benchmark.
//!
//! The LP bound at each limit is exact; the integer value is the best point
//! found within a small node budget, with its remaining gap.

use loadshed::ilp::{solve_ilp_with, solve_lp, IlpOptions};
use loadshed::relax::build_relaxation;
use loadshed::scenario::{bench_instance, DEFAULT_SEED};
use loadshed::Error;

fn main() -> loadshed::Result<()> {
    let base = bench_instance(DEFAULT_SEED);
    for c_delta in [2000.0, 1000.0, 500.0, 200.0, 100.0, 50.0, 0.0] {
        let (program, _) = build_relaxation(&base.with_c_delta(c_delta)?)?;
        let lp = solve_lp(&program)?;
        let integer = match solve_ilp_with(&program, &IlpOptions { node_budget: 5_000 }, None) {
            Ok(s) => format!("{:?} {:.2}", s.status, s.objective),
            Err(Error::NodeBudget { incumbent: Some(obj), gap, .. }) => format!("incumbent {obj:.2} (gap {gap:.1})"),
            Err(Error::NodeBudget { incumbent: None, .. }) => "no integer point found".to_string(),
            Err(e) => return Err(e),
        };
        println!("c_delta {c_delta:>6}: LP {:?} {:>10.2}  integer {integer}", lp.status, lp.objective);
    }
    Ok(())
}
