//! Full pipeline on the 30-zone benchmark: relax, branch and bound, recover.
//!
//! `cargo run --release --example optimize -- [seed] [node_budget]`

use loadshed::pipeline::{optimize, SolveOptions};
use loadshed::scenario::{bench_instance, DEFAULT_SEED};

fn main() -> loadshed::Result<()> {
    let mut args = std::env::args().skip(1);
    let seed = args.next().map_or(DEFAULT_SEED, |s| s.parse().expect("seed"));
    let node_budget = args.next().map_or(50_000, |s| s.parse().expect("node budget"));

    let instance = bench_instance(seed);
    // the full relaxation rarely closes within a small budget; keep the incumbent
    let options = SolveOptions { node_budget, accept_incumbent: true, ..SolveOptions::default() };
    let result = optimize(&instance, &options)?;

    println!("{} variables, {} rows, {} nodes, {:?}", result.num_vars, result.num_rows, result.node_count, result.elapsed);
    println!("relaxed objective {:.2} (gap to proven optimum at most {:.2})", result.relaxed_objective, result.gap);
    println!("w = d*k at the relaxed point: {}", result.exact);
    println!("recovery factor {:.4}, {} repair outages", result.recovery.factor, result.recovery.repairs);
    println!("recovered cost {:.2}, feasible {}", result.cost, result.report.is_feasible());
    for (z, e) in instance.zones().iter().zip(&result.plan().entries) {
        println!("  zone {:>2} {:<11} k={:>3} d={:>2} slots", z.id, z.category.to_string(), e.k, e.d);
    }
    Ok(())
}
