//! Cross-check of the solver against exhaustive enumeration on small instances.

use loadshed::ilp::solve_ilp;
use loadshed::oracle::{brute_force_ilp, brute_force_original};
use loadshed::relax::build_relaxation;
use loadshed::scenario::small_instance;

fn main() -> loadshed::Result<()> {
    let mut mismatches = 0;
    for seed in 0..20 {
        let instance = small_instance(seed);
        let (program, _) = build_relaxation(&instance)?;
        let solved = solve_ilp(&program)?;
        let enumerated = brute_force_ilp(&program)?;
        let original = brute_force_original(&instance)?.map(|(_, cost)| cost);
        let same = solved.status == enumerated.status && solved.objective == enumerated.objective;
        mismatches += usize::from(!same);
        println!(
            "seed {seed:>2}: {} zones  solver {:>10} ({:>3} nodes)  enumeration {:>10}  original {:>10}",
            instance.num_zones(),
            format!("{:.2}", solved.objective),
            solved.node_count,
            format!("{:.2}", enumerated.objective),
            original.map_or("infeasible".to_string(), |c| format!("{c:.2}")),
        );
    }
    println!("{mismatches} mismatches");
    Ok(())
}
