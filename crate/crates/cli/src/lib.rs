//! Shared plumbing for the `setlp` command line tool and HTTP service.

pub mod api;
pub mod commands;

use std::path::Path;
use std::sync::Arc;

use setlp::engine::{DesignConfig, Designer};
use setlp::io::parse_problem;
use setlp::poly::ProjectionStrategy;
use setlp::problem::Problem;
use setlp::session::{DesignSession, SessionMeta};

/// Whether the decision is picked by minimizing the model's cost vector.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum TieBreakChoice {
    #[default]
    Cost,
    None,
}

/// Options shared by all subcommands.
#[derive(Clone, Debug)]
pub struct Settings {
    /// Membership and face tolerance for selected points.
    pub tol: f64,
    pub strategy: ProjectionStrategy,
    pub tiebreak: TieBreakChoice,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            tol: DesignConfig::default().membership_tol,
            strategy: ProjectionStrategy::Auto,
            tiebreak: TieBreakChoice::Cost,
        }
    }
}

impl Settings {
    pub fn design_config(&self, problem: &Problem) -> DesignConfig {
        let mut config = DesignConfig {
            membership_tol: self.tol,
            face_tol: self.tol,
            tiebreak: problem.tiebreak(self.tiebreak == TieBreakChoice::Cost),
            ..DesignConfig::default()
        };
        config.projection.strategy = self.strategy;
        config
    }
}

pub fn load_problem(path: &Path) -> Result<Problem, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_problem(&text).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn designer_for(problem: &Problem, settings: &Settings) -> setlp::Result<Arc<Designer>> {
    Ok(Arc::new(Designer::new(problem.map.clone(), settings.design_config(problem))?))
}

pub fn session_for(problem: &Problem, problem_ref: &str, settings: &Settings) -> setlp::Result<DesignSession> {
    let meta = SessionMeta {
        problem_ref: problem_ref.to_string(),
        labels: problem.labels.clone(),
        report_total: problem.report_total,
    };
    DesignSession::create(designer_for(problem, settings)?, meta)
}

/// Human-readable number: integers without a fraction, others in shortest
/// round-trip form.
pub fn fmt_num(v: f64) -> String {
    let r = v.round();
    if (v - r).abs() <= 1e-9 * (1.0 + v.abs()) {
        format!("{}", r + 0.0)
    } else {
        format!("{v}")
    }
}

pub fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| fmt_num(*x)).collect();
    format!("({})", parts.join(", "))
}
