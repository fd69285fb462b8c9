//! Outage calendars for the optimized plan on a synthesized profile.

use loadshed::calendar::{export_calendar, place};
use loadshed::pipeline::{optimize, SolveOptions};
use loadshed::profiles::{calibrate_cap, synthesize};
use loadshed::scenario::{bench_instance, DEFAULT_SEED};

fn main() -> loadshed::Result<()> {
    let instance = bench_instance(DEFAULT_SEED);
    let options = SolveOptions { node_budget: 20_000, accept_incumbent: true, ..SolveOptions::default() };
    let plan = optimize(&instance, &options)?.plan().clone();

    let profile = synthesize(&instance, DEFAULT_SEED);
    let cap = calibrate_cap(&profile, instance.e_sf)?;
    let (calendar, report) = place(&plan, &profile, cap)?;

    println!("cap {cap:.1} MW");
    println!("calendar sheds {:.1} MWh", calendar.shed_energy(&profile));
    println!("residual exceedance {:.1} MWh in {} slots", report.residual_mwh, report.uncovered_slots);
    for zone in [1, 10, 30] {
        let listing = export_calendar(&calendar, zone)?;
        println!("zone {zone}: {} outages, first days:", listing.lines().count());
        for line in listing.lines().take(5) {
            println!("  {line}");
        }
    }
    Ok(())
}
