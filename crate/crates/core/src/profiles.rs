//! Per-zone demand profiles at 15-minute resolution, the total demand they
//! add up to, and the generation cap implied by a shortfall.

use std::io::{Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{ProblemInstance, ZoneCategory, SLOTS_PER_DAY, SLOTS_PER_HOUR};

const SLOT_HOURS: f64 = 1.0 / SLOTS_PER_HOUR as f64;

/// Bisection stops once the cap bracket is narrower than this, in MW.
pub const CAP_PRECISION_MW: f64 = 0.1;

/// Demand matrix, zones x slots, in MW. Row `i` belongs to zone `i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadProfile {
    slots: usize,
    data: Vec<f64>,
}

impl LoadProfile {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let slots = rows.first().map_or(0, Vec::len);
        if rows.is_empty() || slots == 0 {
            return Err(Error::ProfileFormat("profile needs at least one zone and one slot".into()));
        }
        let mut data = Vec::with_capacity(rows.len() * slots);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != slots {
                return Err(Error::Dimension { expected: slots, actual: row.len() });
            }
            if let Some(v) = row.iter().find(|v| !v.is_finite() || **v < 0.0) {
                return Err(Error::ProfileFormat(format!("zone {}: demand must be finite and nonnegative, got {v}", i + 1)));
            }
            data.extend(row);
        }
        Ok(Self { slots, data })
    }

    pub fn num_zones(&self) -> usize {
        self.data.len() / self.slots
    }

    pub fn num_slots(&self) -> usize {
        self.slots
    }

    /// Demand of the zone at `index` (0-based) over the horizon.
    pub fn row(&self, index: usize) -> &[f64] {
        &self.data[index * self.slots..(index + 1) * self.slots]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.slots)
    }

    /// Errors unless the profile has one row per zone and one column per
    /// slot of the instance horizon.
    pub fn check_matches(&self, instance: &ProblemInstance) -> Result<()> {
        if self.num_zones() != instance.num_zones() {
            return Err(Error::Dimension { expected: instance.num_zones(), actual: self.num_zones() });
        }
        if self.slots != instance.horizon_slots() {
            return Err(Error::Dimension { expected: instance.horizon_slots(), actual: self.slots });
        }
        Ok(())
    }
}

/// Daily shape of synthesized demand, as multipliers of a zone's base
/// level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeParams {
    /// Multiplier inside the category's elevated window.
    pub peak: f64,
    /// Multiplier outside the window and its ramps.
    pub off_peak: f64,
    /// Length of the linear ramps just before and after the window.
    pub ramp_slots: usize,
    /// Half-width of the uniform multiplicative noise around 1.
    pub noise: f64,
}

impl Default for ShapeParams {
    fn default() -> Self {
        Self { peak: 1.5, off_peak: 0.7, ramp_slots: SLOTS_PER_HOUR as usize, noise: 0.15 }
    }
}

/// Elevated-demand window of a category, in hours of the day `[start, end)`.
pub fn category_window(category: ZoneCategory) -> (usize, usize) {
    match category {
        ZoneCategory::Residential => (16, 20),
        ZoneCategory::Industrial => (8, 18),
        ZoneCategory::Commercial => (9, 21),
    }
}

fn shape_at(params: &ShapeParams, window: (usize, usize), slot_of_day: usize) -> f64 {
    let per_hour = SLOTS_PER_HOUR as usize;
    let (start, end) = (window.0 * per_hour, window.1 * per_hour);
    let ramp = params.ramp_slots;
    let t = slot_of_day;
    let rise = params.peak - params.off_peak;
    if (start..end).contains(&t) {
        params.peak
    } else if ramp > 0 && t + ramp >= start && t < start {
        params.off_peak + rise * (ramp - (start - t)) as f64 / ramp as f64
    } else if ramp > 0 && t >= end && t < end + ramp {
        params.off_peak + rise * (ramp - (t - end)) as f64 / ramp as f64
    } else {
        params.off_peak
    }
}

pub fn synthesize(instance: &ProblemInstance, seed: u64) -> LoadProfile {
    synthesize_with(instance, seed, &ShapeParams::default())
}

/// Category shape times per-slot noise drawn from `[1 - noise, 1 + noise]`,
/// each row then rescaled so its horizon mean is the zone's `p_avg`.
pub fn synthesize_with(instance: &ProblemInstance, seed: u64, params: &ShapeParams) -> LoadProfile {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // keep profile noise independent of the instance coefficient draws
    rng.set_stream(1);
    let slots = instance.horizon_slots();
    let noise = params.noise.clamp(0.0, 1.0);
    let rows = instance
        .zones()
        .iter()
        .map(|zone| {
            let window = category_window(zone.category);
            let mut row: Vec<f64> = (0..slots)
                .map(|t| {
                    let u: f64 = if noise > 0.0 { rng.gen_range(1.0 - noise..=1.0 + noise) } else { 1.0 };
                    shape_at(params, window, t % SLOTS_PER_DAY) * u
                })
                .collect();
            let mean = row.iter().sum::<f64>() / slots as f64;
            let scale = if mean > 0.0 { zone.p_avg / mean } else { 0.0 };
            row.iter_mut().for_each(|v| *v *= scale);
            row
        })
        .collect();
    LoadProfile::from_rows(rows).expect("synthesized rows are rectangular and nonnegative")
}

/// Per-slot sum over zones, in MW.
pub fn total_demand(profile: &LoadProfile) -> Vec<f64> {
    let mut total = vec![0.0; profile.num_slots()];
    for row in profile.rows() {
        total.iter_mut().zip(row).for_each(|(t, v)| *t += v);
    }
    total
}

/// Energy above `cap` over the horizon, in MWh.
pub fn exceedance_energy(total: &[f64], cap: f64) -> f64 {
    total.iter().map(|d| (d - cap).max(0.0)).sum::<f64>() * SLOT_HOURS
}

/// Generation cap whose exceedance energy equals `e_sf`, by bisection to
/// [`CAP_PRECISION_MW`].
pub fn calibrate_cap(profile: &LoadProfile, e_sf: f64) -> Result<f64> {
    let total = total_demand(profile);
    let max = total.iter().copied().fold(0.0, f64::max);
    let energy = exceedance_energy(&total, 0.0);
    if e_sf > energy {
        return Err(Error::InfeasibleCap { e_sf, total_mwh: energy });
    }
    if e_sf <= 0.0 {
        return Ok(max);
    }
    let (mut lo, mut hi) = (0.0, max);
    while hi - lo > CAP_PRECISION_MW {
        let mid = 0.5 * (lo + hi);
        if exceedance_energy(&total, mid) > e_sf {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Writes a header row of zone ids, then one row per slot.
pub fn write_profile_csv<W: Write>(profile: &LoadProfile, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record((1..=profile.num_zones()).map(|id| id.to_string()))?;
    for t in 0..profile.num_slots() {
        w.write_record(profile.rows().map(|row| row[t].to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads the format of [`write_profile_csv`]. Header ids must be `1..=N`
/// in order.
pub fn read_profile_csv<R: Read>(reader: R) -> Result<LoadProfile> {
    let mut r = csv::Reader::from_reader(reader);
    let header = r.headers()?.clone();
    for (i, field) in header.iter().enumerate() {
        if field.trim().parse::<usize>().ok() != Some(i + 1) {
            return Err(Error::ProfileFormat(format!("header column {} should be zone id {}, got {field:?}", i + 1, i + 1)));
        }
    }
    let mut rows = vec![Vec::new(); header.len()];
    for (t, record) in r.records().enumerate() {
        let record = record?;
        for (i, field) in record.iter().enumerate() {
            let v = field
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::ProfileFormat(format!("slot {t}, zone {}: not a number: {field:?}", i + 1)))?;
            rows[i].push(v);
        }
    }
    LoadProfile::from_rows(rows)
}

/// Writes `slot,mw` rows of the total demand.
pub fn write_total_demand_csv<W: Write>(total: &[f64], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["slot", "mw"])?;
    for (t, v) in total.iter().enumerate() {
        w.write_record([t.to_string(), v.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
