//! Zone costs, shed energy and the feasibility report for a hand-built plan.

use loadshed::model::{
    check_feasible, shed_energy, total_cost, zone_cost, CostCoefficients, ProblemInstance, ShedPlan, ZoneCategory,
    ZoneSpec,
};

fn main() -> loadshed::Result<()> {
    let zones = vec![
        ZoneSpec {
            id: 1,
            category: ZoneCategory::Industrial,
            p_avg: 800.0,
            coeffs: CostCoefficients::new(100.0, 40.0, 90.0),
            k_max: 50,
            d_min_slots: 8,
            d_max_slots: 16,
        },
        ZoneSpec {
            id: 2,
            category: ZoneCategory::Residential,
            p_avg: 600.0,
            coeffs: CostCoefficients::new(80.0, 100.0, 30.0),
            k_max: 200,
            d_min_slots: 2,
            d_max_slots: 8,
        },
    ];
    let instance = ProblemInstance::new(zones, 20_000.0, 500.0, 30)?;

    // two-hour outages in zone 1, one-hour outages in zone 2
    let plan = ShedPlan::from_kd(&[6, 20], &[8, 4]);
    for (z, e) in instance.zones().iter().zip(&plan.entries) {
        println!("zone {} ({}): k={} d={} slots cost={:.2}", z.id, z.category, e.k, e.d, zone_cost(&z.coeffs, e.k, e.d));
    }
    println!("total cost  {:.2}", total_cost(&instance, &plan)?);
    println!("shed energy {:.1} MWh (needed {})", shed_energy(&instance, &plan)?, instance.e_sf);

    let report = check_feasible(&instance, &plan)?;
    println!("shortfall met: {} (slack {:.1} MWh)", report.shortfall_met, report.shortfall_slack_mwh);
    println!("boxes ok: {}", report.boxes_ok);
    for pair in &report.fairness {
        println!("pair ({}, {}): gap {:.2}, slack {:.2}", pair.zone, pair.zone + 1, pair.cost_gap, pair.slack);
    }
    println!("feasible: {}", report.is_feasible());
    Ok(())
}
