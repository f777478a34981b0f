//! Per-step secrecy-rate history recorded by the alternating solvers.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StepKind {
    Init,
    Position,
    PowerSplit,
    Gamma,
    Covariance,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceStep {
    pub kind: StepKind,
    pub outer: usize,
    /// Unclamped `R_Bob − R_Eve` after the step, bps/Hz.
    pub secrecy: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trace {
    pub steps: Vec<TraceStep>,
}

impl Trace {
    pub fn push(&mut self, kind: StepKind, outer: usize, secrecy: f64) {
        self.steps.push(TraceStep { kind, outer, secrecy });
    }

    pub fn last(&self) -> Option<f64> {
        self.steps.last().map(|s| s.secrecy)
    }

    /// Largest decrease between consecutive recorded steps (0 when monotone).
    pub fn max_drop(&self) -> f64 {
        self.steps.windows(2).map(|w| w[0].secrecy - w[1].secrecy).fold(0.0, f64::max)
    }
}
