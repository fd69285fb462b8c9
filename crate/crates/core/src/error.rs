use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} entries, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid program: {0}")]
    InvalidProgram(String),

    #[error("relaxed program is infeasible; binding constraint family: {0}")]
    Infeasible(String),

    #[error("simplex failure: {0}")]
    Solver(String),

    #[error("node budget of {budget} exhausted ({})", budget_status(.incumbent, .gap))]
    NodeBudget {
        budget: u64,
        incumbent: Option<f64>,
        gap: f64,
        /// Best integer point found before the budget ran out; empty when
        /// there is none.
        best: Vec<i64>,
    },

    #[error("enumeration budget exceeded: {size} points > budget {budget}")]
    EnumerationBudget { size: f64, budget: u64 },

    #[error("cannot recover: relaxed plan sheds no energy but shortfall is {e_sf} MWh")]
    CannotRecover { e_sf: f64 },

    #[error("recovery exhausted all outage headroom; {residual_mwh:.3} MWh still unshed")]
    InfeasibleAfterRecovery { residual_mwh: f64 },

    #[error("shortfall {e_sf} MWh exceeds total demand energy {total_mwh} MWh")]
    InfeasibleCap { e_sf: f64, total_mwh: f64 },

    #[error("zone {zone}: cannot place {k} outages of {d} slots in a {slots}-slot horizon")]
    ImpossibleCalendar { zone: usize, k: u32, d: u32, slots: usize },

    #[error("usage: {0}")]
    Usage(String),

    #[error("unknown zone id {0}")]
    UnknownZone(usize),

    #[error("profile format: {0}")]
    ProfileFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn budget_status(incumbent: &Option<f64>, gap: &f64) -> String {
    match incumbent {
        Some(obj) => format!("incumbent {obj}, gap {gap:.4}"),
        None => "no incumbent".into(),
    }
}
