//! Synthesized demand profiles and the generation cap implied by the shortfall.

use loadshed::model::SLOTS_PER_DAY;
use loadshed::profiles::{calibrate_cap, exceedance_energy, synthesize, total_demand};
use loadshed::scenario::{bench_instance, DEFAULT_SEED};

fn main() -> loadshed::Result<()> {
    let instance = bench_instance(DEFAULT_SEED);
    let profile = synthesize(&instance, DEFAULT_SEED);
    let total = total_demand(&profile);

    // average day of each category's first zone, hourly
    for (i, z) in instance.zones().iter().enumerate().filter(|(i, _)| [0, 6, 27].contains(i)) {
        let row = profile.row(i);
        let hourly: Vec<String> = (0..24)
            .map(|h| {
                let mean = (0..row.len()).filter(|t| t % SLOTS_PER_DAY / 4 == h).map(|t| row[t]).sum::<f64>()
                    / (row.len() / 24) as f64;
                format!("{mean:.0}")
            })
            .collect();
        println!("zone {} ({}), p_avg {}: {}", z.id, z.category, z.p_avg, hourly.join(" "));
    }

    let peak = total.iter().copied().fold(0.0, f64::max);
    println!("total demand: mean {:.1} MW, peak {peak:.1} MW", total.iter().sum::<f64>() / total.len() as f64);
    for e_sf in [1e5, instance.e_sf, 1e6] {
        let cap = calibrate_cap(&profile, e_sf)?;
        println!("e_sf {e_sf:>9} MWh -> cap {cap:.1} MW (exceedance {:.1} MWh)", exceedance_energy(&total, cap));
    }
    Ok(())
}
