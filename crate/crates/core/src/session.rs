//! Interactive design session: ordered selections, revision, status and a
//! replayable event log.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::engine::{Designer, StopOutcome, ValueFunctionResult};
use crate::error::{Error, Result};
use crate::linalg::norm;
use crate::poly::{FaceRep, Projection};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Searching,
    Found,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    pub id: u64,
    pub point: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Event {
    Select { point: Vec<f64> },
    Remove { id: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogEntry {
    pub event: Event,
    pub status: Status,
}

/// How a requested point was turned into the stored selection.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Adjustment {
    None,
    /// Replaced by a nearby qualified candidate.
    Candidate,
    /// Replaced by the L1-nearest available option (and possibly then by a
    /// candidate at that spot).
    Nearest { distance: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AddReport {
    pub id: u64,
    pub requested: Vec<f64>,
    pub point: Vec<f64>,
    pub adjustment: Adjustment,
    /// Whether the point lies on a qualified candidate face.
    pub qualified: bool,
}

/// Vertex/ray description of a set, ready for drawing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    pub vertices: Vec<Vec<f64>>,
    pub rays: Vec<Vec<f64>>,
    pub lines: Vec<Vec<f64>>,
    /// Suggested length for drawing rays and lines.
    pub clip_length: f64,
}

impl Geometry {
    pub fn from_projection(p: &Projection) -> Self {
        let vertices = p.vrep.points.clone();
        let diag = bounding_diagonal(&vertices);
        Self {
            vertices,
            rays: p.vrep.rays.clone(),
            lines: p.vrep.lines.clone(),
            clip_length: 3.0 * if diag > 0.0 { diag } else { 1.0 },
        }
    }
}

fn bounding_diagonal(points: &[Vec<f64>]) -> f64 {
    let Some(first) = points.first() else {
        return 0.0;
    };
    let mut lo = first.clone();
    let mut hi = first.clone();
    for p in points {
        for (i, v) in p.iter().enumerate() {
            lo[i] = lo[i].min(*v);
            hi[i] = hi[i].max(*v);
        }
    }
    let d: Vec<f64> = hi.iter().zip(&lo).map(|(a, b)| a - b).collect();
    norm(&d)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptionsLayer {
    #[serde(flatten)]
    pub geometry: Geometry,
    pub found: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerSummary {
    pub x: Vec<f64>,
    pub labels: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub total: Option<f64>,
}

/// Everything a client needs to draw the current state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SessionView {
    pub status: Status,
    pub q: usize,
    pub background: Geometry,
    pub options: OptionsLayer,
    pub selections: Vec<Selection>,
    pub candidates: Vec<FaceRep>,
    pub optimizer: Option<OptimizerSummary>,
}

/// Presentation data attached to a session.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SessionMeta {
    pub problem_ref: String,
    pub labels: Vec<String>,
    pub report_total: bool,
}

#[derive(Clone, Debug)]
pub struct DesignSession {
    designer: Arc<Designer>,
    meta: SessionMeta,
    selections: Vec<Selection>,
    next_id: u64,
    current: ValueFunctionResult,
    outcome: StopOutcome,
    candidates: Vec<FaceRep>,
    log: Vec<LogEntry>,
}

impl DesignSession {
    /// Refuses maps for which no optimizer exists.
    pub fn create(designer: Arc<Designer>, meta: SessionMeta) -> Result<Self> {
        if !designer.optimizers_exist() {
            return Err(Error::NoOptimizers);
        }
        let current = designer.value_function(&[])?;
        let outcome = designer.stop_test(&current)?;
        let candidates = designer.qualified_candidates(&current)?;
        Ok(Self {
            designer,
            meta,
            selections: Vec::new(),
            next_id: 1,
            current,
            outcome,
            candidates,
            log: Vec::new(),
        })
    }

    pub fn designer(&self) -> &Arc<Designer> {
        &self.designer
    }

    pub fn meta(&self) -> &SessionMeta {
        &self.meta
    }

    pub fn selections(&self) -> &[Selection] {
        &self.selections
    }

    pub fn current(&self) -> &ValueFunctionResult {
        &self.current
    }

    pub fn outcome(&self) -> &StopOutcome {
        &self.outcome
    }

    pub fn candidates(&self) -> &[FaceRep] {
        &self.candidates
    }

    pub fn log(&self) -> &[LogEntry] {
        &self.log
    }

    pub fn status(&self) -> Status {
        if self.outcome.is_found() {
            Status::Found
        } else {
            Status::Searching
        }
    }

    fn snap_radius(&self) -> f64 {
        let diag = bounding_diagonal(&self.designer.optimal_value().vrep.points);
        self.designer.config().candidate_snap * if diag > 0.0 { diag } else { 1.0 }
    }

    fn nearby_candidate(&self, y: &[f64]) -> Option<Vec<f64>> {
        let radius = self.snap_radius();
        self.candidates
            .iter()
            .filter(|f| f.is_vertex())
            .map(|f| {
                let d: Vec<f64> = f.point.iter().zip(y).map(|(a, b)| a - b).collect();
                (norm(&d), &f.point)
            })
            .filter(|(d, _)| *d <= radius)
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .map(|(_, p)| p.clone())
    }

    /// Adds `y` to the selection. Without `snap`, `y` must be an available
    /// option and is stored as given. With `snap`, a point outside the options
    /// is first replaced by the nearest option; the result is then replaced by
    /// a qualified vertex if one lies within the snapping radius. Snapping is
    /// idempotent, so replaying stored points with `snap` changes nothing.
    pub fn add_point(&mut self, y: &[f64], snap: bool) -> Result<AddReport> {
        let d = &self.designer;
        if y.len() != d.map().q() {
            return Err(Error::DimensionMismatch {
                expected: d.map().q(),
                found: y.len(),
            });
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::Representation("non-finite coordinate".into()));
        }
        let (mut point, mut adjustment) = if d.is_option(&self.current, y)? {
            (y.to_vec(), Adjustment::None)
        } else {
            let nearest = d.nearest_option(&self.current, y)?;
            match nearest {
                Some((p, distance)) if snap => (p, Adjustment::Nearest { distance }),
                _ => {
                    return Err(Error::OutsideOptions {
                        point: y.to_vec(),
                        distance: nearest.as_ref().map_or(f64::INFINITY, |n| n.1),
                        nearest: nearest.map(|n| n.0),
                    })
                }
            }
        };
        if snap {
            if let Some(v) = self.nearby_candidate(&point) {
                point = v;
                if adjustment == Adjustment::None {
                    adjustment = Adjustment::Candidate;
                }
            }
        }
        let qualified = self
            .candidates
            .iter()
            .any(|f| f.meets(&point, d.config().face_tol));
        let id = self.next_id;
        let mut selections = self.selections.clone();
        selections.push(Selection {
            id,
            point: point.clone(),
        });
        self.recompute(selections)?;
        self.next_id += 1;
        self.log.push(LogEntry {
            event: Event::Select {
                point: point.clone(),
            },
            status: self.status(),
        });
        Ok(AddReport {
            id,
            requested: y.to_vec(),
            point,
            adjustment,
            qualified,
        })
    }

    pub fn remove_point(&mut self, id: u64) -> Result<()> {
        if !self.selections.iter().any(|s| s.id == id) {
            return Err(Error::UnknownSelection(id));
        }
        let selections = self
            .selections
            .iter()
            .filter(|s| s.id != id)
            .cloned()
            .collect();
        self.recompute(selections)?;
        self.log.push(LogEntry {
            event: Event::Remove { id },
            status: self.status(),
        });
        Ok(())
    }

    /// Rebuilds the options from scratch; state is untouched on error.
    fn recompute(&mut self, selections: Vec<Selection>) -> Result<()> {
        let points: Vec<Vec<f64>> = selections.iter().map(|s| s.point.clone()).collect();
        let current = self.designer.value_function(&points)?;
        let outcome = self.designer.stop_test(&current)?;
        let candidates = self.designer.qualified_candidates(&current)?;
        self.selections = selections;
        self.current = current;
        self.outcome = outcome;
        self.candidates = candidates;
        Ok(())
    }

    pub fn view(&self) -> SessionView {
        let optimizer = self.outcome.optimizer().map(|x| OptimizerSummary {
            x: x.to_vec(),
            labels: self.meta.labels.clone(),
            total: self.meta.report_total.then(|| x.iter().sum()),
        });
        SessionView {
            status: self.status(),
            q: self.designer.map().q(),
            background: Geometry::from_projection(self.designer.optimal_value()),
            options: OptionsLayer {
                geometry: Geometry::from_projection(&self.current.projection),
                found: self.outcome.is_found(),
            },
            selections: self.selections.clone(),
            candidates: self.candidates.clone(),
            optimizer,
        }
    }

    /// Text log: a `PROBLEM` header (if the session has a reference), then one `SELECT`/`REMOVE` line per event,
    /// each followed by a comment with the resulting status.
    pub fn export_log(&self) -> String {
        let mut out = String::new();
        if !self.meta.problem_ref.trim().is_empty() {
            let _ = writeln!(out, "PROBLEM {}", self.meta.problem_ref);
        }
        for entry in &self.log {
            match &entry.event {
                Event::Select { point } => {
                    out.push_str("SELECT");
                    for v in point {
                        // `Display` for f64 is the shortest exact round-trip form.
                        let _ = write!(out, " {v}");
                    }
                }
                Event::Remove { id } => {
                    let _ = write!(out, "REMOVE {id}");
                }
            }
            let status = match entry.status {
                Status::Searching => "searching",
                Status::Found => "found",
            };
            let _ = writeln!(out, "\n# {status}");
        }
        out
    }

    /// Applies the events of a log without snapping.
    pub fn replay(designer: Arc<Designer>, meta: SessionMeta, log: &EventLog) -> Result<Self> {
        let mut s = Self::create(designer, meta)?;
        for event in &log.events {
            s.apply(event)?;
        }
        Ok(s)
    }

    pub fn apply(&mut self, event: &Event) -> Result<()> {
        match event {
            Event::Select { point } => self.add_point(point, false).map(|_| ()),
            Event::Remove { id } => self.remove_point(*id),
        }
    }
}

/// A parsed session log.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EventLog {
    pub problem: Option<String>,
    pub events: Vec<Event>,
}

impl EventLog {
    /// Parses `PROBLEM`, `SELECT y…` and `REMOVE id` lines; blank lines and
    /// `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut log = EventLog::default();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut words = line.split_whitespace();
            let keyword = words.next().unwrap_or("").to_ascii_uppercase();
            let err = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            match keyword.as_str() {
                "PROBLEM" => {
                    let rest = line["PROBLEM".len()..].trim();
                    if rest.is_empty() {
                        return Err(err("PROBLEM needs a reference".into()));
                    }
                    log.problem = Some(rest.to_string());
                }
                "SELECT" => {
                    let point = words
                        .map(|w| w.parse::<f64>().map_err(|_| err(format!("bad number '{w}'"))))
                        .collect::<Result<Vec<f64>>>()?;
                    if point.is_empty() {
                        return Err(err("SELECT needs coordinates".into()));
                    }
                    log.events.push(Event::Select { point });
                }
                "REMOVE" => {
                    let id = words
                        .next()
                        .and_then(|w| w.parse::<u64>().ok())
                        .ok_or_else(|| err("REMOVE needs a selection id".into()))?;
                    if words.next().is_some() {
                        return Err(err("REMOVE takes one id".into()));
                    }
                    log.events.push(Event::Remove { id });
                }
                other => return Err(err(format!("unknown keyword '{other}'"))),
            }
        }
        Ok(log)
    }
}
