//! McCormick relaxation of the bilinear shedding program.
//!
//! Each product `w_n = d_n * k_n` becomes an integer variable boxed by four
//! envelope rows:
//!
//! ```text
//! d_min * k            <= w <= d_max * k
//! d_max * k + k_max * d - k_max * d_max <= w <= k_max * d
//! ```
//!
//! The classical McCormick set replaces the last upper row with the tighter
//! `w <= d_min * k + k_max * d - k_max * d_min`; it is available through
//! [`RelaxOptions::classical_upper_envelope`] as an additional row.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::ilp::{Constraint, IlpSolution, IntegerLinearProgram, Relation};
use crate::model::{linear_cost, ProblemInstance, ShedPlan, ZonePlan};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RelaxOptions {
    /// Emit the classical `w <= d_min*k + k_max*d - k_max*d_min` facet as
    /// one extra row per zone.
    pub classical_upper_envelope: bool,
}

/// Column positions of the three variables of each zone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZoneVars {
    pub k: usize,
    pub d: usize,
    pub w: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableLayout {
    zones: Vec<ZoneVars>,
}

impl VariableLayout {
    /// Zone-major layout `(k_1, d_1, w_1, k_2, ...)`.
    pub fn zone_major(num_zones: usize) -> Self {
        Self { zones: (0..num_zones).map(|n| ZoneVars { k: 3 * n, d: 3 * n + 1, w: 3 * n + 2 }).collect() }
    }

    pub fn num_vars(&self) -> usize {
        3 * self.zones.len()
    }

    pub fn num_zones(&self) -> usize {
        self.zones.len()
    }

    /// Variables of the zone at 0-based position `n`.
    pub fn zone(&self, n: usize) -> ZoneVars {
        self.zones[n]
    }

    pub fn iter(&self) -> impl Iterator<Item = &ZoneVars> {
        self.zones.iter()
    }

    /// Reads a plan out of an integer assignment.
    pub fn plan_from_values(&self, values: &[i64]) -> ShedPlan {
        let get = |i: usize| u32::try_from(values[i]).expect("relaxation variables are nonnegative and boxed");
        ShedPlan::new(self.zones.iter().map(|v| ZonePlan { k: get(v.k), d: get(v.d), w: get(v.w) }).collect())
    }

    pub fn plan_from_solution(&self, solution: &IlpSolution) -> ShedPlan {
        self.plan_from_values(&solution.values)
    }

    pub fn values_from_plan(&self, plan: &ShedPlan) -> Vec<i64> {
        let mut values = vec![0; self.num_vars()];
        for (v, e) in self.zones.iter().zip(&plan.entries) {
            values[v.k] = e.k.into();
            values[v.d] = e.d.into();
            values[v.w] = e.w.into();
        }
        values
    }
}

pub fn build_relaxation(instance: &ProblemInstance) -> Result<(IntegerLinearProgram, VariableLayout)> {
    build_relaxation_with(instance, RelaxOptions::default())
}

pub fn build_relaxation_with(
    instance: &ProblemInstance,
    options: RelaxOptions,
) -> Result<(IntegerLinearProgram, VariableLayout)> {
    let zones = instance.zones();
    let layout = VariableLayout::zone_major(zones.len());
    let nv = layout.num_vars();

    let mut objective = vec![0.0; nv];
    let mut bounds = vec![(0, 0); nv];
    let mut var_names = vec![String::new(); nv];
    for (z, v) in zones.iter().zip(layout.iter()) {
        if z.d_min_slots > z.d_max_slots {
            return Err(Error::InvalidInstance(format!("zone {}: d_min_slots exceeds d_max_slots", z.id)));
        }
        objective[v.k] = z.coeffs.a3;
        objective[v.d] = 0.25 * z.coeffs.a2;
        objective[v.w] = 0.25 * z.coeffs.a1;
        let (k_max, d_min, d_max) = (i64::from(z.k_max), i64::from(z.d_min_slots), i64::from(z.d_max_slots));
        bounds[v.k] = (0, k_max);
        bounds[v.d] = (d_min, d_max);
        bounds[v.w] = (0, k_max * d_max);
        var_names[v.k] = format!("k_{}", z.id);
        var_names[v.d] = format!("d_{}", z.id);
        var_names[v.w] = format!("w_{}", z.id);
    }

    let mut constraints = Vec::new();
    let row = |terms: &[(usize, f64)]| {
        let mut coeffs = vec![0.0; nv];
        for &(j, a) in terms {
            coeffs[j] += a;
        }
        coeffs
    };

    for (z, v) in zones.iter().zip(layout.iter()) {
        let (k_max, d_min, d_max) = (z.k_max as f64, z.d_min_slots as f64, z.d_max_slots as f64);
        let id = z.id;
        constraints.push(Constraint {
            name: format!("env_lo1_{id}"),
            coeffs: row(&[(v.w, 1.0), (v.k, -d_min)]),
            relation: Relation::Ge,
            rhs: 0.0,
        });
        constraints.push(Constraint {
            name: format!("env_up1_{id}"),
            coeffs: row(&[(v.w, 1.0), (v.k, -d_max)]),
            relation: Relation::Le,
            rhs: 0.0,
        });
        constraints.push(Constraint {
            name: format!("env_lo2_{id}"),
            coeffs: row(&[(v.w, 1.0), (v.k, -d_max), (v.d, -k_max)]),
            relation: Relation::Ge,
            rhs: 0.0 - k_max * d_max,
        });
        constraints.push(Constraint {
            name: format!("env_up2_{id}"),
            coeffs: row(&[(v.w, 1.0), (v.d, -k_max)]),
            relation: Relation::Le,
            rhs: 0.0,
        });
        if options.classical_upper_envelope {
            constraints.push(Constraint {
                name: format!("env_up3_{id}"),
                coeffs: row(&[(v.w, 1.0), (v.k, -d_min), (v.d, -k_max)]),
                relation: Relation::Le,
                rhs: 0.0 - k_max * d_min,
            });
        }
    }

    let shortfall: Vec<(usize, f64)> = zones.iter().zip(layout.iter()).map(|(z, v)| (v.w, 0.25 * z.p_avg)).collect();
    constraints.push(Constraint {
        name: "shortfall".into(),
        coeffs: row(&shortfall),
        relation: Relation::Ge,
        rhs: instance.e_sf,
    });

    for n in 0..zones.len().saturating_sub(1) {
        let (za, zb) = (&zones[n], &zones[n + 1]);
        let (va, vb) = (layout.zone(n), layout.zone(n + 1));
        let gap = row(&[
            (va.w, 0.25 * za.coeffs.a1),
            (va.d, 0.25 * za.coeffs.a2),
            (va.k, za.coeffs.a3),
            (vb.w, -0.25 * zb.coeffs.a1),
            (vb.d, -0.25 * zb.coeffs.a2),
            (vb.k, -zb.coeffs.a3),
        ]);
        constraints.push(Constraint {
            name: format!("fair_up_{}", za.id),
            coeffs: gap.clone(),
            relation: Relation::Le,
            rhs: instance.c_delta,
        });
        constraints.push(Constraint {
            name: format!("fair_lo_{}", za.id),
            coeffs: gap,
            relation: Relation::Ge,
            rhs: 0.0 - instance.c_delta,
        });
    }

    let program = IntegerLinearProgram::new(objective, bounds, constraints, var_names)?;
    Ok((program, layout))
}

/// Linear objective at `(k, d, w)`; equals [`crate::model::total_cost`]
/// whenever the plan is consistent.
pub fn relaxed_objective(instance: &ProblemInstance, plan: &ShedPlan) -> Result<f64> {
    plan.check_len(instance)?;
    Ok(instance
        .zones()
        .iter()
        .zip(&plan.entries)
        .map(|(z, e)| linear_cost(&z.coeffs, e.k as f64, e.d as f64, e.w as f64))
        .sum())
}

fn fmt_num(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}

fn write_terms(out: &mut String, coeffs: &[f64], names: &[String]) {
    let mut first = true;
    for (a, name) in coeffs.iter().zip(names) {
        if *a == 0.0 {
            continue;
        }
        let sign = if *a < 0.0 { "-" } else { "+" };
        if first {
            if *a < 0.0 {
                out.push_str(" -");
            }
        } else {
            let _ = write!(out, " {sign}");
        }
        let _ = write!(out, " {} {}", fmt_num(a.abs()), name);
        first = false;
    }
    if first {
        out.push_str(" 0");
    }
}

/// Writes the program in CPLEX LP text format, one row per line.
pub fn export_lp(program: &IntegerLinearProgram) -> String {
    let names = &program.var_names;
    let mut out = String::from("\\ rotational load shedding relaxation\nMinimize\n obj:");
    write_terms(&mut out, &program.objective, names);
    out.push_str("\nSubject To\n");
    for c in &program.constraints {
        let _ = write!(out, " {}:", c.name);
        write_terms(&mut out, &c.coeffs, names);
        let rel = match c.relation {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        };
        let _ = writeln!(out, " {rel} {}", fmt_num(c.rhs));
    }
    out.push_str("Bounds\n");
    for ((lo, hi), name) in program.bounds.iter().zip(names) {
        let _ = writeln!(out, " {lo} <= {name} <= {hi}");
    }
    out.push_str("General\n");
    for name in names {
        let _ = writeln!(out, " {name}");
    }
    out.push_str("End\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::tests::zone;
    use crate::model::{total_cost, ZoneSpec};

    fn instance(zones: Vec<ZoneSpec>, e_sf: f64, c_delta: f64) -> ProblemInstance {
        ProblemInstance::new(zones, e_sf, c_delta, 30).unwrap()
    }

    fn envelope_rows(program: &IntegerLinearProgram) -> impl Iterator<Item = &Constraint> {
        program.constraints.iter().filter(|c| c.name.starts_with("env_"))
    }

    #[test]
    fn single_zone_counts() {
        let inst = instance(vec![zone(1, 100.0, (1.0, 1.0, 1.0), 2, (1, 2))], 10.0, 5.0);
        let (p, layout) = build_relaxation(&inst).unwrap();
        assert_eq!(p.num_vars(), 3);
        assert_eq!(layout.num_vars(), 3);
        assert_eq!(envelope_rows(&p).count(), 4);
        assert_eq!(p.constraints.iter().filter(|c| c.name == "shortfall").count(), 1);
        assert_eq!(p.constraints.iter().filter(|c| c.name.starts_with("fair")).count(), 0);
        assert_eq!(p.constraints.len(), 5);
    }

    #[test]
    fn row_counts_scale_with_zones() {
        for n in 1..=6 {
            let zones = (1..=n).map(|i| zone(i, 100.0, (1.0, 2.0, 3.0), 4, (1, 3))).collect();
            let (p, _) = build_relaxation(&instance(zones, 10.0, 5.0)).unwrap();
            assert_eq!(p.num_vars(), 3 * n);
            assert_eq!(p.constraints.len(), 4 * n + 1 + 2 * (n - 1));
        }
        let zones = (1..=3).map(|i| zone(i, 100.0, (1.0, 2.0, 3.0), 4, (1, 3))).collect();
        let opts = RelaxOptions { classical_upper_envelope: true };
        let (p, _) = build_relaxation_with(&instance(zones, 10.0, 5.0), opts).unwrap();
        assert_eq!(p.constraints.len(), 5 * 3 + 1 + 4);
    }

    #[test]
    fn envelope_forces_zero_w_at_zero_k() {
        let z = zone(1, 100.0, (1.0, 1.0, 1.0), 5, (2, 6));
        let (p, l) = build_relaxation(&instance(vec![z], 0.0, 0.0)).unwrap();
        let v = l.zone(0);
        for d in 2..=6 {
            for w in 0..=30 {
                let mut x = vec![0; 3];
                x[v.d] = d;
                x[v.w] = w;
                let ok = envelope_rows(&p).all(|c| c.is_satisfied_by(&x));
                assert_eq!(ok, w == 0, "d={d} w={w}");
            }
        }
    }

    #[test]
    fn envelope_forces_product_at_upper_corner() {
        let z = zone(1, 100.0, (1.0, 1.0, 1.0), 5, (2, 6));
        let (p, l) = build_relaxation(&instance(vec![z], 0.0, 0.0)).unwrap();
        let v = l.zone(0);
        for w in 0..=30 {
            let mut x = vec![0; 3];
            x[v.k] = 5;
            x[v.d] = 6;
            x[v.w] = w;
            let ok = envelope_rows(&p).all(|c| c.is_satisfied_by(&x));
            assert_eq!(ok, w == 30, "w={w}");
        }
    }

    #[test]
    fn relaxed_objective_examples() {
        let inst = instance(vec![zone(1, 100.0, (4.0, 0.0, 0.0), 10, (1, 4))], 0.0, 0.0);
        let plan = ShedPlan::new(vec![ZonePlan { k: 0, d: 0, w: 10 }]);
        assert_eq!(relaxed_objective(&inst, &plan).unwrap(), 10.0);
        let zero = ShedPlan::new(vec![ZonePlan::default()]);
        assert_eq!(relaxed_objective(&inst, &zero).unwrap(), 0.0);
        assert!(relaxed_objective(&inst, &ShedPlan::default()).is_err());
    }

    #[test]
    fn relaxed_objective_matches_total_cost_on_consistent_plans() {
        let inst = instance(
            vec![zone(1, 100.0, (13.0, 7.0, 3.0), 10, (1, 8)), zone(2, 300.0, (2.5, 11.0, 5.0), 10, (1, 8))],
            0.0,
            0.0,
        );
        for k in 0..5 {
            for d in 1..8 {
                let plan = ShedPlan::from_kd(&[k, 4 - k.min(4)], &[d, 9 - d]);
                assert_eq!(relaxed_objective(&inst, &plan).unwrap(), total_cost(&inst, &plan).unwrap());
            }
        }
    }

    #[test]
    fn program_objective_matches_relaxed_objective() {
        let inst = instance(
            vec![zone(1, 100.0, (13.0, 7.0, 3.0), 10, (1, 8)), zone(2, 300.0, (2.5, 11.0, 5.0), 10, (1, 8))],
            0.0,
            0.0,
        );
        let (p, l) = build_relaxation(&inst).unwrap();
        let plan = ShedPlan::new(vec![ZonePlan { k: 3, d: 2, w: 5 }, ZonePlan { k: 1, d: 7, w: 7 }]);
        let x = l.values_from_plan(&plan);
        assert_eq!(l.plan_from_values(&x), plan);
        assert!((p.objective_value(&x) - relaxed_objective(&inst, &plan).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn export_lp_format() {
        let inst = instance(
            vec![zone(1, 100.0, (4.0, 2.0, 1.0), 3, (1, 2)), zone(2, 200.0, (4.0, 2.0, 1.0), 3, (1, 2))],
            50.0,
            7.5,
        );
        let (p, _) = build_relaxation(&inst).unwrap();
        let text = export_lp(&p);
        assert!(text.starts_with("\\"));
        assert!(text.contains("Minimize\n obj: 1 k_1 + 0.5 d_1 + 1 w_1"));
        assert!(text.contains(" env_lo1_1: - 1 k_1 + 1 w_1 >= 0\n"));
        assert!(text.contains(" env_lo2_2: - 2 k_2 - 3 d_2 + 1 w_2 >= -6\n"));
        assert!(text.contains(" shortfall: 25 w_1 + 50 w_2 >= 50\n"));
        assert!(text.contains(" fair_up_1:"));
        assert!(text.contains(" <= 7.5\n"));
        assert!(text.contains(" 1 <= d_2 <= 2\n"));
        assert!(text.ends_with("General\n k_1\n d_1\n w_1\n k_2\n d_2\n w_2\nEnd\n"));
        assert_eq!(text.lines().filter(|l| l.contains(':') && !l.contains("obj")).count(), p.constraints.len());
    }
}
