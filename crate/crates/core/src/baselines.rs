//! Heuristic plans used as comparison points: round-robin sequencing and
//! equal power shedding. Both use fixed one-hour outages and ignore the
//! per-zone boxes and the fairness limit; run [`crate::model::check_feasible`]
//! on their output to see what they violate.

use crate::model::{ProblemInstance, ShedPlan, ZonePlan, CHECK_TOL, SLOTS_PER_HOUR};

/// Duration of every baseline outage, in slots.
pub const BASELINE_OUTAGE_SLOTS: u32 = SLOTS_PER_HOUR;

fn with_hour_outages(k: Vec<u32>) -> ShedPlan {
    ShedPlan::new(
        k.into_iter()
            .map(|k| if k == 0 { ZonePlan::default() } else { ZonePlan::consistent(k, BASELINE_OUTAGE_SLOTS) })
            .collect(),
    )
}

/// Assigns one-hour outages to zones `1, 2, ..., N, 1, 2, ...` until the
/// cumulative shed energy reaches `e_sf`.
pub fn sequencing_plan(instance: &ProblemInstance) -> ShedPlan {
    let zones = instance.zones();
    let target = instance.e_sf - CHECK_TOL * instance.e_sf.max(1.0);
    let mut k = vec![0u32; zones.len()];
    let mut shed = 0.0;
    let mut next = 0;
    while shed < target {
        k[next] += 1;
        shed += zones[next].p_avg;
        next = (next + 1) % zones.len();
    }
    with_hour_outages(k)
}

/// Gives every zone the same energy target `e_sf / N` and covers it with
/// one-hour outages, rounding the count up.
pub fn equal_power_plan(instance: &ProblemInstance) -> ShedPlan {
    let target = instance.e_sf / instance.num_zones() as f64;
    let k = instance
        .zones()
        .iter()
        .map(|z| {
            let outages = target / z.p_avg;
            (outages - CHECK_TOL * outages.max(1.0)).ceil().max(0.0) as u32
        })
        .collect();
    with_hour_outages(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::shed_energy;
    use crate::model::tests::zone;

    fn instance(p: &[f64], e_sf: f64) -> ProblemInstance {
        let zones = p.iter().enumerate().map(|(i, &p)| zone(i + 1, p, (1.0, 1.0, 1.0), 10, (1, 8))).collect();
        ProblemInstance::new(zones, e_sf, 0.0, 30).unwrap()
    }

    #[test]
    fn sequencing_cycles_through_zones() {
        let inst = instance(&[100.0, 100.0], 300.0);
        let plan = sequencing_plan(&inst);
        assert_eq!(plan.k(), vec![2, 1]);
        assert_eq!(plan.d(), vec![4, 4]);
        assert_eq!(shed_energy(&inst, &plan).unwrap(), 300.0);
    }

    #[test]
    fn zero_shortfall_gives_empty_plans() {
        let inst = instance(&[100.0, 250.0, 80.0], 0.0);
        assert_eq!(sequencing_plan(&inst).k(), vec![0, 0, 0]);
        assert_eq!(equal_power_plan(&inst).k(), vec![0, 0, 0]);
        assert!(sequencing_plan(&inst).is_consistent());
    }

    #[test]
    fn equal_power_counts() {
        let mut p = vec![600.0; 30];
        p[4] = 800.0;
        let inst = instance(&p, 5e5);
        let plan = equal_power_plan(&inst);
        assert_eq!(plan.entries[4].k, 21);
        assert_eq!(plan.entries[0].k, 28);
        assert!(shed_energy(&inst, &plan).unwrap() >= 5e5);
    }

    #[test]
    fn equal_power_is_inversely_proportional() {
        let inst = instance(&[200.0, 100.0], 4000.0);
        let plan = equal_power_plan(&inst);
        assert_eq!(plan.k(), vec![10, 20]);
    }

    #[test]
    fn exact_multiples_do_not_round_up() {
        let inst = instance(&[100.0], 300.0);
        assert_eq!(equal_power_plan(&inst).k(), vec![3]);
        assert_eq!(sequencing_plan(&inst).k(), vec![3]);
    }
}
