//! McCormick relaxation of a small instance: rows, LP bound and LP export.

use loadshed::ilp::solve_lp;
use loadshed::relax::{build_relaxation, build_relaxation_with, export_lp, RelaxOptions};
use loadshed::scenario::small_instance;

fn main() -> loadshed::Result<()> {
    let instance = small_instance(9);
    let (program, layout) = build_relaxation(&instance)?;
    println!("{} zones -> {} variables, {} rows", instance.num_zones(), layout.num_vars(), program.constraints.len());
    for row in &program.constraints {
        println!("  {:<10} {:?} {}", row.name, row.relation, row.rhs);
    }

    let lp = solve_lp(&program)?;
    println!("LP bound: {:?} {:.4}", lp.status, lp.objective);
    let (tight, _) = build_relaxation_with(&instance, RelaxOptions { classical_upper_envelope: true })?;
    let lp_tight = solve_lp(&tight)?;
    println!("LP bound with the classical upper facet: {:?} {:.4}", lp_tight.status, lp_tight.objective);

    print!("{}", export_lp(&program));
    Ok(())
}
