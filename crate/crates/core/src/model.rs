//! Zones, problem instances and shedding plans, plus the cost and
//! feasibility evaluations every other module builds on.
//!
//! Durations are integer 15-minute slots throughout. Hours only appear when
//! a cost or an energy is evaluated, through the `SLOTS_PER_HOUR` factor.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SLOT_MINUTES: u32 = 15;
pub const SLOTS_PER_HOUR: u32 = 4;
pub const SLOTS_PER_DAY: usize = 96;

/// Relative tolerance used when comparing evaluated costs and energies
/// against their limits.
pub const CHECK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostCoefficients {
    /// Cost per hour of shed time per outage (the `d * k` product term).
    pub a1: f64,
    /// Cost per hour of outage duration.
    pub a2: f64,
    /// Cost per outage event.
    pub a3: f64,
}

impl CostCoefficients {
    pub fn new(a1: f64, a2: f64, a3: f64) -> Self {
        Self { a1, a2, a3 }
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in [("a1", self.a1), ("a2", self.a2), ("a3", self.a3)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidInstance(format!("{name} must be a finite nonnegative number, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ZoneCategory {
    Industrial,
    Residential,
    Commercial,
}

impl fmt::Display for ZoneCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ZoneCategory::Industrial => "industrial",
            ZoneCategory::Residential => "residential",
            ZoneCategory::Commercial => "commercial",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZoneSpec {
    /// 1-based zone index.
    pub id: usize,
    pub category: ZoneCategory,
    /// Average power in MW.
    pub p_avg: f64,
    pub coeffs: CostCoefficients,
    pub k_max: u32,
    pub d_min_slots: u32,
    pub d_max_slots: u32,
}

impl ZoneSpec {
    fn validate(&self) -> Result<()> {
        if !self.p_avg.is_finite() || self.p_avg <= 0.0 {
            return Err(Error::InvalidInstance(format!("zone {}: p_avg must be positive, got {}", self.id, self.p_avg)));
        }
        self.coeffs
            .validate()
            .map_err(|e| Error::InvalidInstance(format!("zone {}: {e}", self.id)))?;
        if self.d_min_slots < 1 {
            return Err(Error::InvalidInstance(format!("zone {}: d_min_slots must be at least 1", self.id)));
        }
        if self.d_min_slots > self.d_max_slots {
            return Err(Error::InvalidInstance(format!(
                "zone {}: d_min_slots {} exceeds d_max_slots {}",
                self.id, self.d_min_slots, self.d_max_slots
            )));
        }
        Ok(())
    }

    /// Largest energy (MWh) this zone can shed within its boxes.
    pub fn max_shed_mwh(&self) -> f64 {
        slots_to_hours(self.k_max as f64 * self.d_max_slots as f64) * self.p_avg
    }
}

/// A validated planning problem. Construct through [`ProblemInstance::new`]
/// or deserialize from JSON; both paths enforce the same invariants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance", into = "RawInstance")]
pub struct ProblemInstance {
    zones: Vec<ZoneSpec>,
    /// Expected shortfall energy in MWh.
    pub e_sf: f64,
    /// Fairness limit on the cost gap between adjacent zones.
    pub c_delta: f64,
    pub horizon_days: u32,
}

impl ProblemInstance {
    pub fn new(zones: Vec<ZoneSpec>, e_sf: f64, c_delta: f64, horizon_days: u32) -> Result<Self> {
        let instance = Self { zones, e_sf, c_delta, horizon_days };
        instance.validate()?;
        Ok(instance)
    }

    fn validate(&self) -> Result<()> {
        if self.zones.is_empty() {
            return Err(Error::InvalidInstance("instance has no zones".into()));
        }
        if !self.e_sf.is_finite() || self.e_sf < 0.0 {
            return Err(Error::InvalidInstance(format!("e_sf must be nonnegative, got {}", self.e_sf)));
        }
        if !self.c_delta.is_finite() || self.c_delta < 0.0 {
            return Err(Error::InvalidInstance(format!("c_delta must be nonnegative, got {}", self.c_delta)));
        }
        for (i, zone) in self.zones.iter().enumerate() {
            if zone.id != i + 1 {
                return Err(Error::InvalidInstance(format!(
                    "zone ids must be 1..N in order; position {} has id {}",
                    i + 1,
                    zone.id
                )));
            }
            zone.validate()?;
        }
        Ok(())
    }

    pub fn zones(&self) -> &[ZoneSpec] {
        &self.zones
    }

    pub fn num_zones(&self) -> usize {
        self.zones.len()
    }

    pub fn zone(&self, id: usize) -> Result<&ZoneSpec> {
        id.checked_sub(1)
            .and_then(|i| self.zones.get(i))
            .ok_or(Error::UnknownZone(id))
    }

    pub fn horizon_slots(&self) -> usize {
        self.horizon_days as usize * SLOTS_PER_DAY
    }

    /// Copy of this instance with a different fairness limit.
    pub fn with_c_delta(&self, c_delta: f64) -> Result<Self> {
        Self::new(self.zones.clone(), self.e_sf, c_delta, self.horizon_days)
    }

    /// Copy of this instance with a different shortfall.
    pub fn with_e_sf(&self, e_sf: f64) -> Result<Self> {
        Self::new(self.zones.clone(), e_sf, self.c_delta, self.horizon_days)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawZone {
    id: usize,
    category: ZoneCategory,
    p_avg_mw: f64,
    a1: f64,
    a2: f64,
    a3: f64,
    k_max: u32,
    d_min_slots: u32,
    d_max_slots: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    zones: Vec<RawZone>,
    e_sf_mwh: f64,
    c_delta: f64,
    horizon_days: u32,
}

impl TryFrom<RawInstance> for ProblemInstance {
    type Error = Error;

    fn try_from(raw: RawInstance) -> Result<Self> {
        let zones = raw
            .zones
            .into_iter()
            .map(|z| ZoneSpec {
                id: z.id,
                category: z.category,
                p_avg: z.p_avg_mw,
                coeffs: CostCoefficients::new(z.a1, z.a2, z.a3),
                k_max: z.k_max,
                d_min_slots: z.d_min_slots,
                d_max_slots: z.d_max_slots,
            })
            .collect();
        ProblemInstance::new(zones, raw.e_sf_mwh, raw.c_delta, raw.horizon_days)
    }
}

impl From<ProblemInstance> for RawInstance {
    fn from(inst: ProblemInstance) -> Self {
        RawInstance {
            zones: inst
                .zones
                .into_iter()
                .map(|z| RawZone {
                    id: z.id,
                    category: z.category,
                    p_avg_mw: z.p_avg,
                    a1: z.coeffs.a1,
                    a2: z.coeffs.a2,
                    a3: z.coeffs.a3,
                    k_max: z.k_max,
                    d_min_slots: z.d_min_slots,
                    d_max_slots: z.d_max_slots,
                })
                .collect(),
            e_sf_mwh: inst.e_sf,
            c_delta: inst.c_delta,
            horizon_days: inst.horizon_days,
        }
    }
}

/// Outage count `k`, per-outage duration `d` (slots) and total shed slots
/// `w` for one zone.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ZonePlan {
    pub k: u32,
    pub d: u32,
    pub w: u32,
}

impl ZonePlan {
    /// Entry with `w = d * k`.
    pub fn consistent(k: u32, d: u32) -> Self {
        Self { k, d, w: k * d }
    }

    pub fn is_consistent(&self) -> bool {
        u64::from(self.w) == u64::from(self.k) * u64::from(self.d)
    }
}

/// Per-zone assignment, in instance zone order. Consistency (`w = d * k`)
/// is a predicate, not a construction invariant: relaxed optima break it.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ShedPlan {
    pub entries: Vec<ZonePlan>,
}

impl ShedPlan {
    pub fn new(entries: Vec<ZonePlan>) -> Self {
        Self { entries }
    }

    pub fn from_kd(k: &[u32], d: &[u32]) -> Self {
        assert_eq!(k.len(), d.len(), "k and d must have equal length");
        Self::new(k.iter().zip(d).map(|(&k, &d)| ZonePlan::consistent(k, d)).collect())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_consistent(&self) -> bool {
        self.entries.iter().all(ZonePlan::is_consistent)
    }

    pub fn k(&self) -> Vec<u32> {
        self.entries.iter().map(|e| e.k).collect()
    }

    pub fn d(&self) -> Vec<u32> {
        self.entries.iter().map(|e| e.d).collect()
    }

    pub fn check_len(&self, instance: &ProblemInstance) -> Result<()> {
        if self.len() != instance.num_zones() {
            return Err(Error::Dimension { expected: instance.num_zones(), actual: self.len() });
        }
        Ok(())
    }
}

pub fn slots_to_hours(slots: f64) -> f64 {
    slots / SLOTS_PER_HOUR as f64
}

/// `a1/4 * w + a2/4 * d + a3 * k`: the linear cost form shared by the
/// bilinear cost (with `w = d * k`) and the relaxed objective.
pub(crate) fn linear_cost(coeffs: &CostCoefficients, k: f64, d: f64, w: f64) -> f64 {
    0.25 * coeffs.a1 * w + 0.25 * coeffs.a2 * d + coeffs.a3 * k
}

/// Damage cost of `k` outages of `d_slots` slots each.
pub fn zone_cost(coeffs: &CostCoefficients, k: u32, d_slots: u32) -> f64 {
    linear_cost(coeffs, k as f64, d_slots as f64, k as f64 * d_slots as f64)
}

/// Sum of zone costs evaluated on `(k, d)`; `w` is ignored.
pub fn total_cost(instance: &ProblemInstance, plan: &ShedPlan) -> Result<f64> {
    Ok(zone_costs(instance, plan)?.into_iter().sum())
}

pub fn zone_costs(instance: &ProblemInstance, plan: &ShedPlan) -> Result<Vec<f64>> {
    plan.check_len(instance)?;
    Ok(instance
        .zones()
        .iter()
        .zip(&plan.entries)
        .map(|(z, e)| zone_cost(&z.coeffs, e.k, e.d))
        .collect())
}

/// Energy shed by the plan in MWh, using the product `d * k`.
pub fn shed_energy(instance: &ProblemInstance, plan: &ShedPlan) -> Result<f64> {
    plan.check_len(instance)?;
    Ok(instance
        .zones()
        .iter()
        .zip(&plan.entries)
        .map(|(z, e)| zone_shed_mwh(z, e.k, e.d))
        .sum())
}

pub(crate) fn zone_shed_mwh(zone: &ZoneSpec, k: u32, d: u32) -> f64 {
    slots_to_hours(d as f64 * k as f64) * zone.p_avg
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoxBound {
    KAboveMax,
    DBelowMin,
    DAboveMax,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxViolation {
    pub zone: usize,
    pub bound: BoxBound,
    /// Signed slack of the violated bound (negative).
    pub slack: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairMargin {
    /// First zone of the adjacent pair `(zone, zone + 1)`.
    pub zone: usize,
    pub cost_gap: f64,
    /// `c_delta - |gap|`; negative when violated.
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityReport {
    pub shortfall_met: bool,
    /// `shed_energy - e_sf` in MWh.
    pub shortfall_slack_mwh: f64,
    pub boxes_ok: bool,
    pub box_violations: Vec<BoxViolation>,
    pub fairness_ok: bool,
    /// One entry per adjacent pair `n = 1..N-1`.
    pub fairness: Vec<PairMargin>,
}

impl FeasibilityReport {
    pub fn is_feasible(&self) -> bool {
        self.shortfall_met && self.boxes_ok && self.fairness_ok
    }

    pub fn fairness_violations(&self) -> impl Iterator<Item = &PairMargin> {
        self.fairness.iter().filter(|p| p.slack < 0.0)
    }
}

fn tol(scale: f64) -> f64 {
    CHECK_TOL * scale.abs().max(1.0)
}

/// Evaluates shortfall, box and adjacent-pair fairness constraints on the
/// consistent product `d * k`. Infeasibility is reported, never an error.
pub fn check_feasible(instance: &ProblemInstance, plan: &ShedPlan) -> Result<FeasibilityReport> {
    let shed = shed_energy(instance, plan)?;
    let shortfall_slack_mwh = shed - instance.e_sf;
    let shortfall_met = shortfall_slack_mwh >= -tol(instance.e_sf);

    let mut box_violations = Vec::new();
    for (z, e) in instance.zones().iter().zip(&plan.entries) {
        if e.k > z.k_max {
            box_violations.push(BoxViolation {
                zone: z.id,
                bound: BoxBound::KAboveMax,
                slack: i64::from(z.k_max) - i64::from(e.k),
            });
        }
        if e.d < z.d_min_slots {
            box_violations.push(BoxViolation {
                zone: z.id,
                bound: BoxBound::DBelowMin,
                slack: i64::from(e.d) - i64::from(z.d_min_slots),
            });
        }
        if e.d > z.d_max_slots {
            box_violations.push(BoxViolation {
                zone: z.id,
                bound: BoxBound::DAboveMax,
                slack: i64::from(z.d_max_slots) - i64::from(e.d),
            });
        }
    }

    let costs = zone_costs(instance, plan)?;
    let fairness: Vec<PairMargin> = costs
        .windows(2)
        .enumerate()
        .map(|(i, pair)| {
            let cost_gap = pair[0] - pair[1];
            PairMargin { zone: i + 1, cost_gap, slack: instance.c_delta - cost_gap.abs() }
        })
        .collect();
    let fairness_ok = fairness.iter().all(|p| p.slack >= -tol(instance.c_delta));

    Ok(FeasibilityReport {
        shortfall_met,
        shortfall_slack_mwh,
        boxes_ok: box_violations.is_empty(),
        box_violations,
        fairness_ok,
        fairness,
    })
}
