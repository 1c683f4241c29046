//! Bookkeeping for the acceptance run: named checks with tolerances, one
//! report line per criterion.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

/// One numeric or boolean comparison inside a criterion.
#[derive(Debug, Clone)]
pub struct Check {
    pub label: String,
    pub ok: bool,
    pub detail: String,
}

impl Check {
    /// `|value - target| <= tol`.
    pub fn near(label: &str, value: f64, target: f64, tol: f64) -> Self {
        Check {
            label: label.into(),
            ok: (value - target).abs() <= tol,
            detail: format!("{value:.6} vs {target} ± {tol:e}"),
        }
    }

    /// `value < bound`.
    pub fn below(label: &str, value: f64, bound: f64) -> Self {
        Check { label: label.into(), ok: value < bound, detail: format!("{value:.3e} < {bound:e}") }
    }

    /// `value >= bound`.
    pub fn at_least(label: &str, value: f64, bound: f64) -> Self {
        Check { label: label.into(), ok: value >= bound, detail: format!("{value:.4} >= {bound}") }
    }

    pub fn holds(label: &str, ok: bool, detail: impl Into<String>) -> Self {
        Check { label: label.into(), ok, detail: detail.into() }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub id: u32,
    pub title: String,
    pub checks: Vec<Check>,
    pub elapsed: Duration,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.ok)
    }

    pub fn line(&self) -> String {
        let mut s = format!(
            "criterion {:>2} {:<5} {} ({:.2} s)",
            self.id,
            if self.passed() { "PASS" } else { "FAIL" },
            self.title,
            self.elapsed.as_secs_f64()
        );
        for c in &self.checks {
            let _ = write!(s, "\n    [{}] {}: {}", if c.ok { "ok" } else { "FAILED" }, c.label, c.detail);
        }
        s
    }
}

/// Runs criteria in order and prints each result as soon as it is known.
#[derive(Debug, Default)]
pub struct Report {
    pub outcomes: Vec<Outcome>,
}

impl Report {
    pub fn run<F>(&mut self, id: u32, title: &str, f: F)
    where
        F: FnOnce() -> Result<Vec<Check>, String>,
    {
        let start = Instant::now();
        let checks = f().unwrap_or_else(|e| vec![Check::holds("error", false, e)]);
        let outcome = Outcome { id, title: title.into(), checks, elapsed: start.elapsed() };
        println!("{}", outcome.line());
        self.outcomes.push(outcome);
    }

    /// Adds a wall-clock limit check to the most recent criterion.
    pub fn time_limit(&mut self, limit: Duration) {
        if let Some(last) = self.outcomes.last_mut() {
            let secs = last.elapsed.as_secs_f64();
            let check = Check::below("runtime [s]", secs, limit.as_secs_f64());
            if !check.ok {
                println!("    [FAILED] criterion {} runtime {secs:.2} s exceeds {:.0} s", last.id, limit.as_secs_f64());
            }
            last.checks.push(check);
        }
    }

    pub fn failures(&self) -> Vec<u32> {
        self.outcomes.iter().filter(|o| !o.passed()).map(|o| o.id).collect()
    }

    pub fn summary(&self) -> String {
        let failed = self.failures();
        format!(
            "acceptance: {} of {} criteria passed{}",
            self.outcomes.len() - failed.len(),
            self.outcomes.len(),
            if failed.is_empty() { String::new() } else { format!("; failed: {failed:?}") }
        )
    }
}
