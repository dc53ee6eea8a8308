use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::par;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

/// One verification line.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    /// Acceptance criterion this check belongs to.
    pub criterion: u32,
    pub status: Status,
    pub measured: Value,
    pub tolerance: Option<f64>,
    /// Short description of the mathematical statement being checked.
    pub anchor: String,
    pub seconds: f64,
    pub detail: Value,
    /// Index of the job that produced the check within its suite run.
    #[serde(skip)]
    pub job: usize,
}

impl Check {
    pub fn new(name: &str, anchor: &str) -> Self {
        Self {
            name: name.into(),
            criterion: 0,
            status: Status::Skip,
            measured: Value::Null,
            tolerance: None,
            anchor: anchor.into(),
            seconds: 0.0,
            detail: Value::Null,
            job: 0,
        }
    }

    /// Passes iff `measured <= tol`.
    pub fn at_most(mut self, measured: f64, tol: f64) -> Self {
        self.status = if measured <= tol { Status::Pass } else { Status::Fail };
        self.measured = json!(measured);
        self.tolerance = Some(tol);
        self
    }

    pub fn holds(mut self, ok: bool) -> Self {
        self.status = if ok { Status::Pass } else { Status::Fail };
        self.measured = json!(ok);
        self
    }

    pub fn criterion(mut self, k: u32) -> Self {
        self.criterion = k;
        self
    }

    pub fn detail(mut self, detail: Value) -> Self {
        self.detail = detail;
        self
    }

    pub fn errored(name: &str, anchor: &str, err: &crate::Error) -> Self {
        let mut c = Self::new(name, anchor);
        c.status = Status::Fail;
        c.detail = json!({ "error": err.to_string() });
        c
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

type Job<'a> = Box<dyn Fn() -> Vec<Check> + Send + Sync + 'a>;

/// Runs jobs (possibly in parallel), keeping declaration order and
/// recording wall-clock per job.
pub fn run_jobs(jobs: Vec<Job<'_>>) -> Vec<Check> {
    let results = par::map_indices(jobs.len(), |i| {
        let t = Instant::now();
        let mut checks = jobs[i]();
        let secs = t.elapsed().as_secs_f64();
        for c in &mut checks {
            c.seconds = secs;
            c.job = i;
        }
        checks
    });
    results.into_iter().flatten().collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new(suite: &str, checks: Vec<Check>) -> Self {
        Self { suite: suite.into(), checks }
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn to_json(&self, config: &Value) -> Value {
        json!({
            "suite": self.suite,
            "status": if self.pass() { "pass" } else { "fail" },
            "checks": self.checks,
            "config": config,
        })
    }

    /// One line per check.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skip => "SKIP",
            };
            let tol = c.tolerance.map(|t| format!(" (tol {t:e})")).unwrap_or_default();
            out.push_str(&format!("{tag} {} = {}{tol}  [{}] {:.2}s\n", c.name, c.measured, c.anchor, c.seconds));
        }
        out.push_str(&format!(
            "{}: {}/{} passed\n",
            self.suite,
            self.checks.iter().filter(|c| c.passed()).count(),
            self.checks.len()
        ));
        out
    }
}
