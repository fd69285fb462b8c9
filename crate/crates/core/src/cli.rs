//! Command-line front end. Every command is deterministic given its input
//! files, seed and flags; nothing time-dependent is written.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::baselines::{equal_power_plan, sequencing_plan};
use crate::calendar::{export_calendar, place, write_calendar_csv, write_cap_report_csv, write_zone_csv};
use crate::error::{Error, Result};
use crate::ilp::DEFAULT_NODE_BUDGET;
use crate::model::{check_feasible, zone_costs, ProblemInstance, ShedPlan, ZonePlan};
use crate::pipeline::{optimize, Optimized, SolveOptions};
use crate::profiles::{
    calibrate_cap, read_profile_csv, synthesize, total_demand, write_profile_csv, write_total_demand_csv,
};
use crate::relax::{build_relaxation, export_lp};
use crate::scenario::{bench_instance, DEFAULT_SEED};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "loadshed", version, about = "Optimal rotational load-shedding schedules")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Instance JSON; defaults to the 30-zone benchmark drawn with `--seed`.
    #[arg(long, global = true)]
    pub instance: Option<PathBuf>,

    /// Seeds the benchmark coefficient draws and the profile noise.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Overrides the instance's fairness limit.
    #[arg(long, global = true)]
    pub c_delta: Option<f64>,

    #[arg(long, global = true, default_value_t = DEFAULT_NODE_BUDGET)]
    pub node_budget: u64,

    /// On an exhausted node budget, continue with the best integer point
    /// found instead of failing.
    #[arg(long, global = true)]
    pub accept_incumbent: bool,

    /// Output directory; created if missing.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Relax, solve and recover; writes plan.json.
    Solve,
    /// Optimized plan against round-robin sequencing and equal power.
    Compare,
    /// Places a plan's outages on a demand profile.
    Calendar {
        /// Plan JSON as written by `solve`; solved afresh when omitted.
        #[arg(long)]
        plan: Option<PathBuf>,
        /// Profile CSV (header of zone ids, one row per slot); synthesized
        /// from `--seed` when omitted.
        #[arg(long)]
        profile: Option<PathBuf>,
        /// Generation cap; calibrated to the shortfall when omitted.
        #[arg(long)]
        cap_mw: Option<f64>,
    },
    /// Writes synthesized per-zone profiles and their total.
    SynthProfiles,
    /// Writes the relaxed program in LP format.
    ExportLp,
    /// Writes the instance as JSON.
    GenInstance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanZone {
    pub zone: usize,
    pub k: u32,
    pub d_slots: u32,
    pub w: u32,
    pub cost: f64,
}

/// The plan file: per-zone rows plus the solve summary. Only `zones` is
/// read back.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanFile {
    pub zones: Vec<PlanZone>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summary: Option<SolveSummary>,
}

impl PlanFile {
    pub fn plan(&self) -> ShedPlan {
        ShedPlan::new(self.zones.iter().map(|z| ZonePlan { k: z.k, d: z.d_slots, w: z.w }).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveSummary {
    pub relaxed_objective: f64,
    pub exact: bool,
    pub recovery_factor: f64,
    pub repairs: u32,
    pub total_cost: f64,
    pub shortfall_slack_mwh: f64,
    pub fairness_violations: Vec<usize>,
    pub feasible: bool,
    pub node_count: u64,
    pub gap: f64,
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Infeasible(_)
        | Error::InfeasibleCap { .. }
        | Error::CannotRecover { .. }
        | Error::InfeasibleAfterRecovery { .. }
        | Error::ImpossibleCalendar { .. } => EXIT_INFEASIBLE,
        Error::NodeBudget { .. } | Error::EnumerationBudget { .. } => EXIT_RESOURCE,
        _ => EXIT_USAGE,
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Messages go to `stdout` and `stderr`.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    match run(&cli, stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn load_instance(cli: &Cli) -> Result<ProblemInstance> {
    let instance = match &cli.instance {
        Some(path) => ProblemInstance::from_json(&fs::read_to_string(path)?)?,
        None => bench_instance(cli.seed),
    };
    match cli.c_delta {
        Some(c) => instance.with_c_delta(c),
        None => Ok(instance),
    }
}

fn solve_options(cli: &Cli) -> SolveOptions {
    SolveOptions { node_budget: cli.node_budget, accept_incumbent: cli.accept_incumbent, ..SolveOptions::default() }
}

fn out_dir(cli: &Cli, command: &str) -> Result<PathBuf> {
    let dir = cli.out.clone().ok_or_else(|| Error::Usage(format!("{command} needs --out <dir>")))?;
    fs::create_dir_all(&dir)?;
    Ok(dir)
}

fn write_file(dir: &Path, name: &str, contents: &[u8]) -> Result<()> {
    fs::write(dir.join(name), contents)?;
    Ok(())
}

pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Solve => cmd_solve(cli, stdout),
        Command::Compare => cmd_compare(cli, stdout),
        Command::Calendar { plan, profile, cap_mw } => {
            cmd_calendar(cli, plan.as_deref(), profile.as_deref(), *cap_mw, stdout)
        }
        Command::SynthProfiles => cmd_synth_profiles(cli, stdout),
        Command::ExportLp => cmd_export_lp(cli, stdout),
        Command::GenInstance => cmd_gen_instance(cli, stdout),
    }
}

pub fn plan_file(instance: &ProblemInstance, plan: &ShedPlan, summary: Option<SolveSummary>) -> Result<PlanFile> {
    let costs = zone_costs(instance, plan)?;
    let zones = plan
        .entries
        .iter()
        .zip(costs)
        .enumerate()
        .map(|(i, (e, cost))| PlanZone { zone: i + 1, k: e.k, d_slots: e.d, w: e.w, cost })
        .collect();
    Ok(PlanFile { zones, summary })
}

fn summary(o: &Optimized) -> SolveSummary {
    SolveSummary {
        relaxed_objective: o.relaxed_objective,
        exact: o.exact,
        recovery_factor: o.recovery.factor,
        repairs: o.recovery.repairs,
        total_cost: o.cost,
        shortfall_slack_mwh: o.report.shortfall_slack_mwh,
        fairness_violations: o.report.fairness_violations().map(|p| p.zone).collect(),
        feasible: o.report.is_feasible(),
        node_count: o.node_count,
        gap: o.gap,
    }
}

fn cmd_solve(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    let instance = load_instance(cli)?;
    let optimized = optimize(&instance, &solve_options(cli))?;
    let s = summary(&optimized);
    writeln!(stdout, "relaxed objective   {:.2}", s.relaxed_objective)?;
    writeln!(stdout, "exact (w = d*k)     {}", s.exact)?;
    writeln!(stdout, "recovery factor     {:.6} ({} repairs)", s.recovery_factor, s.repairs)?;
    writeln!(stdout, "total cost          {:.2}", s.total_cost)?;
    writeln!(stdout, "shortfall margin    {:.3} MWh", s.shortfall_slack_mwh)?;
    writeln!(stdout, "fairness violations {:?}", s.fairness_violations)?;
    writeln!(stdout, "nodes               {} (gap {:.4})", s.node_count, s.gap)?;
    writeln!(stdout, "zone      k  d_slots  cost")?;
    let file = plan_file(&instance, optimized.plan(), Some(s))?;
    for z in &file.zones {
        writeln!(stdout, "{:>4} {:>6} {:>8}  {:.2}", z.zone, z.k, z.d_slots, z.cost)?;
    }
    if let Some(dir) = &cli.out {
        fs::create_dir_all(dir)?;
        write_file(dir, "plan.json", serde_json::to_string_pretty(&file)?.as_bytes())?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodTotal {
    pub method: String,
    pub total_cost: f64,
    pub feasible: bool,
    /// Percentage saved by the optimized plan relative to this method.
    pub reduction_pct: f64,
}

fn cmd_compare(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    let instance = load_instance(cli)?;
    let optimized = optimize(&instance, &solve_options(cli))?;
    let methods = [
        ("optimized", optimized.plan().clone()),
        ("sequencing", sequencing_plan(&instance)),
        ("equal_power", equal_power_plan(&instance)),
    ];
    let mut csv = csv::Writer::from_writer(Vec::new());
    csv.write_record(["method", "zone", "k", "d_slots", "cost"])?;
    let mut totals = Vec::new();
    for (name, plan) in &methods {
        let costs = zone_costs(&instance, plan)?;
        for (i, (e, c)) in plan.entries.iter().zip(&costs).enumerate() {
            csv.write_record([name.to_string(), (i + 1).to_string(), e.k.to_string(), e.d.to_string(), c.to_string()])?;
        }
        totals.push((name.to_string(), costs.iter().sum::<f64>(), check_feasible(&instance, plan)?.is_feasible()));
    }
    let best = totals[0].1;
    let totals: Vec<MethodTotal> = totals
        .into_iter()
        .map(|(method, total_cost, feasible)| MethodTotal {
            method,
            total_cost,
            feasible,
            reduction_pct: if total_cost > 0.0 { 100.0 * (total_cost - best) / total_cost } else { 0.0 },
        })
        .collect();
    writeln!(stdout, "method        total cost  feasible  reduction")?;
    for t in &totals {
        writeln!(stdout, "{:<12} {:>11.2}  {:<8}  {:>8.2}%", t.method, t.total_cost, t.feasible, t.reduction_pct)?;
    }
    if let Some(dir) = &cli.out {
        fs::create_dir_all(dir)?;
        write_file(dir, "compare.csv", &csv.into_inner().map_err(|e| Error::Io(e.into_error()))?)?;
        write_file(dir, "compare.json", serde_json::to_string_pretty(&totals)?.as_bytes())?;
    }
    Ok(())
}

fn cmd_calendar(
    cli: &Cli,
    plan_path: Option<&Path>,
    profile_path: Option<&Path>,
    cap_mw: Option<f64>,
    stdout: &mut dyn Write,
) -> Result<()> {
    let dir = out_dir(cli, "calendar")?;
    let instance = load_instance(cli)?;
    let plan = match plan_path {
        Some(path) => {
            let file: PlanFile = serde_json::from_str(&fs::read_to_string(path)?)?;
            file.plan()
        }
        None => optimize(&instance, &solve_options(cli))?.plan().clone(),
    };
    plan.check_len(&instance)?;
    if !plan.is_consistent() {
        return Err(Error::Usage("calendar needs a consistent plan (w = d * k in every zone)".into()));
    }
    let profile = match profile_path {
        Some(path) => read_profile_csv(fs::File::open(path)?)?,
        None => synthesize(&instance, cli.seed),
    };
    profile.check_matches(&instance)?;
    let cap = match cap_mw {
        Some(cap) => cap,
        None => calibrate_cap(&profile, instance.e_sf)?,
    };
    let (calendar, report) = place(&plan, &profile, cap)?;

    let mut buf = Vec::new();
    write_calendar_csv(&calendar, &mut buf)?;
    write_file(&dir, "calendar.csv", &buf)?;
    let zones_dir = dir.join("zones");
    fs::create_dir_all(&zones_dir)?;
    for zone in 1..=instance.num_zones() {
        let mut buf = Vec::new();
        write_zone_csv(&calendar, zone, &mut buf)?;
        write_file(&zones_dir, &format!("zone_{zone:02}.csv"), &buf)?;
        write_file(&zones_dir, &format!("zone_{zone:02}.txt"), export_calendar(&calendar, zone)?.as_bytes())?;
    }
    let mut buf = Vec::new();
    write_cap_report_csv(&report, &mut buf)?;
    write_file(&dir, "cap_report.csv", &buf)?;

    writeln!(stdout, "cap                 {cap:.1} MW")?;
    writeln!(stdout, "calendar shed       {:.1} MWh", calendar.shed_energy(&profile))?;
    writeln!(stdout, "residual exceedance {:.1} MWh over {} slots", report.residual_mwh, report.uncovered_slots)?;
    Ok(())
}

fn cmd_synth_profiles(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    let dir = out_dir(cli, "synth-profiles")?;
    let instance = load_instance(cli)?;
    let profile = synthesize(&instance, cli.seed);
    let total = total_demand(&profile);
    let mut buf = Vec::new();
    write_profile_csv(&profile, &mut buf)?;
    write_file(&dir, "profiles.csv", &buf)?;
    let mut buf = Vec::new();
    write_total_demand_csv(&total, &mut buf)?;
    write_file(&dir, "total_demand.csv", &buf)?;
    let peak = total.iter().copied().fold(0.0, f64::max);
    writeln!(stdout, "zones {} slots {} peak total {peak:.1} MW", profile.num_zones(), profile.num_slots())?;
    match calibrate_cap(&profile, instance.e_sf) {
        Ok(cap) => writeln!(stdout, "calibrated cap {cap:.1} MW for {} MWh", instance.e_sf)?,
        Err(e) => writeln!(stdout, "no cap: {e}")?,
    }
    Ok(())
}

fn cmd_export_lp(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    let instance = load_instance(cli)?;
    let (program, _) = build_relaxation(&instance)?;
    let text = export_lp(&program);
    match &cli.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            write_file(dir, "relaxation.lp", text.as_bytes())
        }
        None => Ok(stdout.write_all(text.as_bytes())?),
    }
}

fn cmd_gen_instance(cli: &Cli, stdout: &mut dyn Write) -> Result<()> {
    let text = load_instance(cli)?.to_json()?;
    match &cli.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            write_file(dir, "instance.json", text.as_bytes())
        }
        None => Ok(writeln!(stdout, "{text}")?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = main_with_args(std::iter::once("loadshed").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_args(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["solve", "--seed", "x"]).0, EXIT_USAGE);
        assert_eq!(run_args(&[]).0, EXIT_USAGE);
        assert_eq!(run_args(&["synth-profiles"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["solve", "--instance", "/nonexistent/instance.json"]).0, EXIT_USAGE);
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("export-lp"));
    }

    #[test]
    fn exit_code_classes() {
        assert_eq!(exit_code(&Error::Infeasible("x".into())), EXIT_INFEASIBLE);
        assert_eq!(
            exit_code(&Error::NodeBudget { budget: 1, incumbent: None, gap: f64::INFINITY, best: vec![] }),
            EXIT_RESOURCE
        );
        assert_eq!(exit_code(&Error::UnknownZone(4)), EXIT_USAGE);
    }

    #[test]
    fn export_lp_to_stdout() {
        let (code, out, _) = run_args(&["export-lp", "--seed", "2"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.starts_with("\\ "));
        assert!(out.contains("General"));
    }

    #[test]
    fn plan_file_round_trip() {
        let inst = bench_instance(1);
        let plan = ShedPlan::new(inst.zones().iter().map(|z| ZonePlan::consistent(1, z.d_min_slots)).collect());
        let file = plan_file(&inst, &plan, None).unwrap();
        let text = serde_json::to_string(&file).unwrap();
        let back: PlanFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.plan(), plan);
        assert_eq!(back.zones[0].zone, 1);
    }
}
