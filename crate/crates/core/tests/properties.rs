use loadshed::ilp::{solve_ilp, solve_lp, IlpStatus, LpStatus};
use loadshed::model::{
    shed_energy, zone_cost, CostCoefficients, ProblemInstance, ShedPlan, ZoneCategory, ZonePlan, ZoneSpec,
};
use loadshed::recovery::recover;
use loadshed::relax::build_relaxation;
use loadshed::scenario::small_instance;
use proptest::prelude::*;

fn zone(k_max: u32, d_min: u32, d_max: u32, p_avg: f64) -> ZoneSpec {
    ZoneSpec {
        id: 1,
        category: ZoneCategory::Residential,
        p_avg,
        coeffs: CostCoefficients::new(3.0, 2.0, 5.0),
        k_max,
        d_min_slots: d_min,
        d_max_slots: d_max,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn envelope_admits_every_consistent_point(k_max in 0u32..10, d_min in 1u32..12, span in 0u32..12) {
        let d_max = d_min + span;
        let instance = ProblemInstance::new(vec![zone(k_max, d_min, d_max, 100.0)], 0.0, 0.0, 30).unwrap();
        let (program, layout) = build_relaxation(&instance).unwrap();
        for k in 0..=k_max {
            for d in d_min..=d_max {
                let x = layout.values_from_plan(&ShedPlan::new(vec![ZonePlan::consistent(k, d)]));
                for row in program.constraints.iter().filter(|c| c.name.starts_with("env_")) {
                    prop_assert!(row.is_satisfied_by(&x), "{} rejects k={k} d={d}", row.name);
                }
            }
        }
    }

    #[test]
    fn zone_cost_is_monotone(a1 in 0.0f64..50.0, a2 in 0.0f64..50.0, a3 in 0.0f64..50.0, k in 0u32..20, d in 0u32..40) {
        let c = CostCoefficients::new(a1, a2, a3);
        let base = zone_cost(&c, k, d);
        prop_assert!(zone_cost(&c, k + 1, d) >= base);
        prop_assert!(zone_cost(&c, k, d + 1) >= base);
    }

    #[test]
    fn shed_energy_is_bilinear(p in 1u32..2000, k in 0u32..20, d in 1u32..40) {
        let instance = ProblemInstance::new(vec![zone(20, 1, 40, f64::from(p))], 0.0, 0.0, 30).unwrap();
        let e = |k, d| shed_energy(&instance, &ShedPlan::new(vec![ZonePlan::consistent(k, d)])).unwrap();
        prop_assert_eq!(e(k, d), 0.25 * f64::from(p) * f64::from(k) * f64::from(d));
        prop_assert_eq!(e(2 * k, d), 2.0 * e(k, d));
        prop_assert_eq!(e(k, 2 * d), 2.0 * e(k, d));
    }

    #[test]
    fn lp_bound_never_exceeds_ilp_optimum(seed in 0u64..10_000) {
        let (program, _) = build_relaxation(&small_instance(seed)).unwrap();
        let lp = solve_lp(&program).unwrap();
        let ilp = solve_ilp(&program).unwrap();
        if ilp.status == IlpStatus::Optimal {
            prop_assert_eq!(lp.status, LpStatus::Optimal);
            prop_assert!(lp.objective <= ilp.objective + 1e-6);
        }
    }

    #[test]
    fn recovery_is_consistent_boxed_and_meets_shortfall(seed in 0u64..10_000) {
        let instance = small_instance(seed);
        let (program, layout) = build_relaxation(&instance).unwrap();
        let solution = solve_ilp(&program).unwrap();
        prop_assume!(solution.status == IlpStatus::Optimal);
        let relaxed = layout.plan_from_solution(&solution);
        if let Ok(plan) = recover(&instance, &relaxed) {
            prop_assert!(plan.is_consistent());
            for ((e, z), r) in plan.entries.iter().zip(instance.zones()).zip(&relaxed.entries) {
                prop_assert!(e.k <= z.k_max);
                prop_assert!(e.k >= r.k);
                prop_assert_eq!(e.d, r.d);
            }
            prop_assert!(shed_energy(&instance, &plan).unwrap() >= instance.e_sf * (1.0 - 1e-9));
        }
    }
}
