//! The branch-and-bound solver on a plain integer program, with node trace.

use loadshed::ilp::{solve_ilp_with, Constraint, IlpOptions, IntegerLinearProgram, Relation};

fn main() -> loadshed::Result<()> {
    // 0/1 knapsack-style program: maximize 5a + 4b + 3c
    let row = |name: &str, coeffs: Vec<f64>, rhs| Constraint { name: name.into(), coeffs, relation: Relation::Le, rhs };
    let program = IntegerLinearProgram::new(
        vec![-5.0, -4.0, -3.0],
        vec![(0, 1); 3],
        vec![
            row("c1", vec![2.0, 3.0, 1.0], 5.0),
            row("c2", vec![4.0, 1.0, 2.0], 11.0),
            row("c3", vec![3.0, 4.0, 2.0], 8.0),
        ],
        vec!["a".into(), "b".into(), "c".into()],
    )?;

    let mut trace = Vec::new();
    let solution = solve_ilp_with(&program, &IlpOptions::default(), Some(&mut trace))?;
    print!("{}", String::from_utf8_lossy(&trace));
    println!(
        "{:?}: objective {} at {:?} after {} nodes",
        solution.status, solution.objective, solution.values, solution.node_count
    );
    println!("exactly feasible: {}", program.is_feasible_exact(&solution.values));
    Ok(())
}
