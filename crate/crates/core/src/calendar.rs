//! Placement of each zone's outages on the horizon, driven by where total
//! demand exceeds the generation cap.

use std::io::Write;

use crate::error::{Error, Result};
use crate::model::{ShedPlan, SLOTS_PER_DAY, SLOTS_PER_HOUR, SLOT_MINUTES};
use crate::profiles::{total_demand, LoadProfile};

const SLOT_HOURS: f64 = 1.0 / SLOTS_PER_HOUR as f64;

/// Outage over slots `[start, end)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Interval {
    pub start: usize,
    pub end: usize,
}

impl Interval {
    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Calendar {
    /// Per zone, sorted by start.
    pub intervals: Vec<Vec<Interval>>,
    /// Total demand minus the demand of zones in outage, per slot (MW).
    pub supplied: Vec<f64>,
}

impl Calendar {
    pub fn zone_intervals(&self, zone: usize) -> Result<&[Interval]> {
        zone.checked_sub(1).and_then(|i| self.intervals.get(i)).map(Vec::as_slice).ok_or(Error::UnknownZone(zone))
    }

    /// Demand switched off by the calendar, in MWh.
    pub fn shed_energy(&self, profile: &LoadProfile) -> f64 {
        self.intervals
            .iter()
            .enumerate()
            .map(|(i, ivs)| {
                let row = profile.row(i);
                ivs.iter().map(|iv| row[iv.start..iv.end].iter().sum::<f64>()).sum::<f64>()
            })
            .sum::<f64>()
            * SLOT_HOURS
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapReport {
    pub demand: Vec<f64>,
    pub supplied: Vec<f64>,
    pub cap: f64,
    /// `max(supplied - cap, 0)` per slot (MW).
    pub residual: Vec<f64>,
    pub residual_mwh: f64,
    /// Slots where supplied power still exceeds the cap.
    pub uncovered_slots: usize,
}

impl CapReport {
    fn new(demand: Vec<f64>, supplied: Vec<f64>, cap: f64) -> Self {
        let residual: Vec<f64> = supplied.iter().map(|s| (s - cap).max(0.0)).collect();
        let residual_mwh = residual.iter().sum::<f64>() * SLOT_HOURS;
        let uncovered_slots = residual.iter().filter(|r| **r > 0.0).count();
        Self { demand, supplied, cap, residual, residual_mwh, uncovered_slots }
    }
}

/// Greedy forward sweep. At every slot where supplied demand is above
/// `cap`, zones with outages left that are not already out start one,
/// largest current demand first (ties by id), until the slot is under the
/// cap. Outages the sweep did not use are then placed, zone by zone, on
/// the free window with the highest supplied demand (earliest on ties).
pub fn place(plan: &ShedPlan, profile: &LoadProfile, cap: f64) -> Result<(Calendar, CapReport)> {
    if plan.len() != profile.num_zones() {
        return Err(Error::Dimension { expected: profile.num_zones(), actual: plan.len() });
    }
    if !(cap > 0.0 && cap.is_finite()) {
        return Err(Error::InvalidInstance(format!("cap must be positive, got {cap}")));
    }
    let slots = profile.num_slots();
    for (i, e) in plan.entries.iter().enumerate() {
        if e.k > 0 && (e.d == 0 || e.k as usize * e.d as usize > slots) {
            return Err(Error::ImpossibleCalendar { zone: i + 1, k: e.k, d: e.d, slots });
        }
    }

    let demand = total_demand(profile);
    let mut supplied = demand.clone();
    let mut remaining: Vec<u32> = plan.entries.iter().map(|e| e.k).collect();
    let mut busy_until = vec![0usize; plan.len()];
    let mut intervals: Vec<Vec<Interval>> = vec![Vec::new(); plan.len()];

    let start_outage = |i: usize, start: usize, supplied: &mut [f64], intervals: &mut [Vec<Interval>]| {
        let end = start + plan.entries[i].d as usize;
        let row = profile.row(i);
        for t in start..end {
            supplied[t] -= row[t];
        }
        intervals[i].push(Interval { start, end });
        end
    };

    let mut candidates = Vec::with_capacity(plan.len());
    for t in 0..slots {
        if supplied[t] <= cap {
            continue;
        }
        candidates.clear();
        candidates.extend((0..plan.len()).filter(|&i| {
            remaining[i] > 0 && busy_until[i] <= t && t + plan.entries[i].d as usize <= slots
        }));
        candidates.sort_by(|&a, &b| profile.row(b)[t].total_cmp(&profile.row(a)[t]).then(a.cmp(&b)));
        for &i in &candidates {
            if supplied[t] <= cap {
                break;
            }
            busy_until[i] = start_outage(i, t, &mut supplied, &mut intervals);
            remaining[i] -= 1;
        }
    }

    for i in 0..plan.len() {
        let d = plan.entries[i].d as usize;
        for _ in 0..remaining[i] {
            let mut taken = vec![false; slots];
            for iv in &intervals[i] {
                taken[iv.start..iv.end].iter_mut().for_each(|x| *x = true);
            }
            let start = best_free_window(&supplied, &taken, d).ok_or(Error::ImpossibleCalendar {
                zone: i + 1,
                k: plan.entries[i].k,
                d: plan.entries[i].d,
                slots,
            })?;
            start_outage(i, start, &mut supplied, &mut intervals);
        }
        intervals[i].sort();
    }

    let report = CapReport::new(demand, supplied.clone(), cap);
    Ok((Calendar { intervals, supplied }, report))
}

/// Start of the length-`d` window of untaken slots with the largest sum of
/// `weight`, earliest on ties.
fn best_free_window(weight: &[f64], taken: &[bool], d: usize) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    let (mut sum, mut run) = (0.0, 0usize);
    for t in 0..weight.len() {
        if taken[t] {
            run = 0;
            sum = 0.0;
            continue;
        }
        run += 1;
        sum += weight[t];
        if run > d {
            sum -= weight[t - d];
        }
        if run >= d && best.is_none_or(|(_, s)| sum > s) {
            best = Some((t + 1 - d, sum));
        }
    }
    best.map(|(s, _)| s)
}

/// One outage as listed for a zone: attributed to the day it starts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutageEntry {
    pub day: usize,
    /// Slot within the day, 0..96.
    pub start_slot: usize,
    pub duration_slots: usize,
}

impl OutageEntry {
    pub fn start_hhmm(&self) -> String {
        let minutes = self.start_slot * SLOT_MINUTES as usize;
        format!("{:02}:{:02}", minutes / 60, minutes % 60)
    }

    pub fn duration_minutes(&self) -> usize {
        self.duration_slots * SLOT_MINUTES as usize
    }
}

pub fn zone_entries(calendar: &Calendar, zone: usize) -> Result<Vec<OutageEntry>> {
    Ok(calendar
        .zone_intervals(zone)?
        .iter()
        .map(|iv| OutageEntry {
            day: iv.start / SLOTS_PER_DAY,
            start_slot: iv.start % SLOTS_PER_DAY,
            duration_slots: iv.len(),
        })
        .collect())
}

/// Human-readable listing, one line per outage: `day 3: 16:00 for 60 minutes`.
pub fn export_calendar(calendar: &Calendar, zone: usize) -> Result<String> {
    Ok(zone_entries(calendar, zone)?
        .iter()
        .map(|e| format!("day {}: {} for {} minutes\n", e.day, e.start_hhmm(), e.duration_minutes()))
        .collect())
}

/// `day,start_slot,duration_slots` rows for one zone.
pub fn write_zone_csv<W: Write>(calendar: &Calendar, zone: usize, writer: W) -> Result<()> {
    let entries = zone_entries(calendar, zone)?;
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["day", "start_slot", "duration_slots"])?;
    for e in entries {
        w.write_record([e.day.to_string(), e.start_slot.to_string(), e.duration_slots.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// `zone,day,start_slot,duration_slots` rows for every zone.
pub fn write_calendar_csv<W: Write>(calendar: &Calendar, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["zone", "day", "start_slot", "duration_slots"])?;
    for zone in 1..=calendar.intervals.len() {
        for e in zone_entries(calendar, zone)? {
            w.write_record([zone.to_string(), e.day.to_string(), e.start_slot.to_string(), e.duration_slots.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_cap_report_csv<W: Write>(report: &CapReport, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["slot", "demand_mw", "supplied_mw", "cap_mw", "residual_mw"])?;
    for t in 0..report.demand.len() {
        w.write_record([
            t.to_string(),
            report.demand[t].to_string(),
            report.supplied[t].to_string(),
            report.cap.to_string(),
            report.residual[t].to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ZonePlan;

    fn flat(rows: &[f64], slots: usize) -> LoadProfile {
        LoadProfile::from_rows(rows.iter().map(|&v| vec![v; slots]).collect()).unwrap()
    }

    #[test]
    fn no_outages_under_high_cap() {
        let profile = flat(&[10.0, 20.0], 96);
        let plan = ShedPlan::new(vec![ZonePlan::default(); 2]);
        let (cal, report) = place(&plan, &profile, 100.0).unwrap();
        assert!(cal.intervals.iter().all(Vec::is_empty));
        assert_eq!(report.residual_mwh, 0.0);
        assert_eq!(report.uncovered_slots, 0);
    }

    #[test]
    fn single_zone_hand_trace() {
        let profile = flat(&[100.0], 96);
        let plan = ShedPlan::new(vec![ZonePlan::consistent(1, 4)]);
        let (cal, report) = place(&plan, &profile, 60.0).unwrap();
        assert_eq!(cal.intervals[0], vec![Interval { start: 0, end: 4 }]);
        assert_eq!(&cal.supplied[..5], &[0.0, 0.0, 0.0, 0.0, 100.0]);
        assert!(report.residual[..4].iter().all(|r| *r == 0.0));
        assert!(report.residual[4..].iter().all(|r| *r == 40.0));
        assert_eq!(report.uncovered_slots, 92);
    }

    #[test]
    fn larger_zone_goes_first_and_leftovers_are_placed() {
        // only one outage is needed at slot 0; zone 2 (more demand) takes it
        let profile = flat(&[10.0, 30.0], 8);
        let plan = ShedPlan::new(vec![ZonePlan::consistent(1, 2), ZonePlan::consistent(2, 2)]);
        let (cal, report) = place(&plan, &profile, 35.0).unwrap();
        assert_eq!(cal.intervals[1], vec![Interval { start: 0, end: 2 }, Interval { start: 2, end: 4 }]);
        assert_eq!(cal.intervals[0], vec![Interval { start: 4, end: 6 }]);
        assert_eq!(report.residual_mwh, 5.0 * 2.0 * 0.25);
        let shed = cal.shed_energy(&profile);
        assert_eq!(shed, (2.0 * 10.0 + 4.0 * 30.0) * 0.25);
        assert_eq!(shed, (report.demand.iter().sum::<f64>() - report.supplied.iter().sum::<f64>()) * 0.25);
    }

    #[test]
    fn twenty_nine_outages_of_three_slots() {
        let profile = flat(&[50.0], 30 * 96);
        let plan = ShedPlan::new(vec![ZonePlan::consistent(29, 3)]);
        let (cal, _) = place(&plan, &profile, 10.0).unwrap();
        assert_eq!(cal.intervals[0].len(), 29);
        assert!(cal.intervals[0].iter().all(|iv| iv.len() == 3));
        assert!(cal.intervals[0].windows(2).all(|w| w[0].end <= w[1].start));
        let text = export_calendar(&cal, 1).unwrap();
        assert_eq!(text.lines().count(), 29);
        assert!(text.lines().all(|l| l.ends_with("for 45 minutes")));
    }

    #[test]
    fn impossible_quota() {
        let profile = flat(&[50.0], 8);
        let plan = ShedPlan::new(vec![ZonePlan::consistent(3, 3)]);
        assert!(matches!(place(&plan, &profile, 10.0), Err(Error::ImpossibleCalendar { zone: 1, .. })));
        // fits by count, but the sweep leaves only single free slots
        let profile = LoadProfile::from_rows(vec![vec![0.0, 50.0, 50.0, 0.0, 50.0, 50.0, 0.0]]).unwrap();
        let plan = ShedPlan::new(vec![ZonePlan::consistent(3, 2)]);
        assert!(matches!(place(&plan, &profile, 10.0), Err(Error::ImpossibleCalendar { .. })));
    }

    #[test]
    fn listing_and_csv() {
        let cal = Calendar {
            intervals: vec![vec![Interval { start: 64, end: 68 }, Interval { start: 94 + 96, end: 98 + 96 }], vec![]],
            supplied: vec![],
        };
        assert_eq!(export_calendar(&cal, 1).unwrap(), "day 0: 16:00 for 60 minutes\nday 1: 23:30 for 60 minutes\n");
        assert_eq!(export_calendar(&cal, 2).unwrap(), "");
        assert!(matches!(export_calendar(&cal, 3), Err(Error::UnknownZone(3))));
        let mut buf = Vec::new();
        write_calendar_csv(&cal, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "zone,day,start_slot,duration_slots\n1,0,64,4\n1,1,94,4\n");
        let mut buf = Vec::new();
        write_zone_csv(&cal, 1, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "day,start_slot,duration_slots\n0,64,4\n1,94,4\n");
    }
}
