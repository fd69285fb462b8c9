//! Feasible plan recovery from an inexact relaxed optimum.
//!
//! Durations are kept; outage counts are scaled by `e_sf / shed(d*, k*)`,
//! rounded to the nearest integer and clamped into `[0, k_max]`. Rounding
//! and clamping can leave the shortfall unmet, so a repair loop then adds
//! outages one at a time to the zone with the cheapest marginal cost per
//! marginal MWh until the shortfall holds.

use crate::error::{Error, Result};
use crate::model::{shed_energy, zone_shed_mwh, ProblemInstance, ShedPlan, ZonePlan, CHECK_TOL};

pub fn is_exact(plan: &ShedPlan) -> bool {
    plan.is_consistent()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Recovery {
    pub plan: ShedPlan,
    /// Scale applied to every `k*`; `1.0` when no up-scaling was needed.
    pub factor: f64,
    /// Outage counts right after rounding, before clamping and repair.
    pub rounded: Vec<u64>,
    /// Outages added by the repair loop.
    pub repairs: u32,
}

pub fn recover(instance: &ProblemInstance, relaxed: &ShedPlan) -> Result<ShedPlan> {
    recover_detailed(instance, relaxed).map(|r| r.plan)
}

fn shortfall_met(shed: f64, e_sf: f64) -> bool {
    shed >= e_sf - CHECK_TOL * e_sf.max(1.0)
}

pub fn recover_detailed(instance: &ProblemInstance, relaxed: &ShedPlan) -> Result<Recovery> {
    relaxed.check_len(instance)?;
    let as_is = ShedPlan::new(relaxed.entries.iter().map(|e| ZonePlan::consistent(e.k, e.d)).collect());
    let shed = shed_energy(instance, &as_is)?;
    if shortfall_met(shed, instance.e_sf) {
        return Ok(Recovery {
            rounded: as_is.entries.iter().map(|e| u64::from(e.k)).collect(),
            plan: as_is,
            factor: 1.0,
            repairs: 0,
        });
    }
    if shed <= 0.0 {
        return Err(Error::CannotRecover { e_sf: instance.e_sf });
    }

    let factor = instance.e_sf / shed;
    let rounded: Vec<u64> = relaxed.entries.iter().map(|e| (factor * e.k as f64).round() as u64).collect();
    let mut entries: Vec<ZonePlan> = relaxed
        .entries
        .iter()
        .zip(instance.zones())
        .zip(&rounded)
        .map(|((e, z), &k)| ZonePlan::consistent(k.min(u64::from(z.k_max)) as u32, e.d))
        .collect();

    let mut shed = shed_energy(instance, &ShedPlan::new(entries.clone()))?;
    let mut repairs = 0;
    while !shortfall_met(shed, instance.e_sf) {
        let mut best: Option<(usize, f64)> = None;
        for (n, (e, z)) in entries.iter().zip(instance.zones()).enumerate() {
            if e.k >= z.k_max || e.d == 0 {
                continue;
            }
            let d = e.d as f64;
            let marginal_cost = 0.25 * z.coeffs.a1 * d + z.coeffs.a3;
            let marginal_mwh = zone_shed_mwh(z, 1, e.d);
            let ratio = marginal_cost / marginal_mwh;
            if best.is_none_or(|(_, r)| ratio < r) {
                best = Some((n, ratio));
            }
        }
        let Some((n, _)) = best else {
            return Err(Error::InfeasibleAfterRecovery { residual_mwh: instance.e_sf - shed });
        };
        entries[n] = ZonePlan::consistent(entries[n].k + 1, entries[n].d);
        shed = shed_energy(instance, &ShedPlan::new(entries.clone()))?;
        repairs += 1;
    }

    Ok(Recovery { plan: ShedPlan::new(entries), factor, rounded, repairs })
}
