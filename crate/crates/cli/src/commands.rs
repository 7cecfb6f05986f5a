//! Implementations of the `check`, `optval` and `session` subcommands.

use std::fmt::Write as _;
use std::path::Path;

use setlp::io::{write_hrep, write_vrep};
use setlp::poly::{Projection, VRepPolyhedron};
use setlp::session::{EventLog, Status};
use setlp::svg::render_view;

use crate::{designer_for, fmt_num, fmt_vec, load_problem, session_for, Settings};

/// Generators in descending lexicographic order, for stable output.
fn sorted_desc(v: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut v = v.to_vec();
    v.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    v
}

fn describe_cone(v: &VRepPolyhedron) -> String {
    if v.is_empty() {
        return "empty".into();
    }
    let mut parts = Vec::new();
    if v.points.len() != 1 || v.points[0].iter().any(|x| x.abs() > 1e-9) {
        parts.push(format!(
            "conv{{{}}}",
            v.points.iter().map(|p| fmt_vec(p)).collect::<Vec<_>>().join(", ")
        ));
    }
    if !v.rays.is_empty() {
        parts.push(format!(
            "cone{{{}}}",
            sorted_desc(&v.rays).iter().map(|p| fmt_vec(p)).collect::<Vec<_>>().join(", ")
        ));
    }
    if !v.lines.is_empty() {
        parts.push(format!(
            "span{{{}}}",
            v.lines.iter().map(|p| fmt_vec(p)).collect::<Vec<_>>().join(", ")
        ));
    }
    if parts.is_empty() {
        "{0}".into()
    } else {
        parts.join(" + ")
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Report on nonemptiness and existence of optimizers; returns whether they exist.
pub fn check(path: &Path, settings: &Settings, out: &mut String) -> Result<bool, String> {
    let problem = load_problem(path)?;
    let map = &problem.map;
    let _ = writeln!(
        out,
        "problem: {} (n={}, q={}, aux={})",
        path.display(),
        map.n(),
        map.q(),
        map.aux_dim()
    );
    let nonempty = map.ensure_nonempty(1e-9).is_ok();
    let _ = writeln!(out, "domain nonempty: {}", yes_no(nonempty));
    if !nonempty {
        let _ = writeln!(out, "optimizers exist: no");
        return Ok(false);
    }
    let designer = designer_for(&problem, settings).map_err(|e| e.to_string())?;
    let cones = designer.cones();
    let _ = writeln!(out, "G(0) = {}", describe_cone(&cones.g_zero_projection.vrep));
    let _ = writeln!(out, "K = {}", describe_cone(&cones.natural_cone_projection.vrep));
    let _ = writeln!(out, "optimizers exist: {}", yes_no(cones.optimizers_exist));
    Ok(cones.optimizers_exist)
}

fn optval_report(p: &Projection) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "vertices:");
    for v in &p.vrep.points {
        let _ = writeln!(s, "  {}", fmt_vec(v));
    }
    let _ = writeln!(s, "rays:");
    for r in &p.vrep.rays {
        let _ = writeln!(s, "  {}", fmt_vec(r));
    }
    if !p.vrep.lines.is_empty() {
        let _ = writeln!(s, "lines:");
        for l in &p.vrep.lines {
            let _ = writeln!(s, "  {}", fmt_vec(l));
        }
    }
    let _ = writeln!(s, "inequalities:");
    for c in p.hrep.constraints() {
        let lhs: Vec<String> = c.coeffs.iter().map(|a| fmt_num(*a)).collect();
        let _ = writeln!(s, "  {} {} {}", lhs.join(" "), c.rel.symbol(), fmt_num(c.rhs));
    }
    s
}

/// Prints the optimal value; with `out_dir`, also writes `optval.vrep`,
/// `optval.hrep` and (for two objectives) `optval.svg`.
pub fn optval(path: &Path, settings: &Settings, out_dir: Option<&Path>, out: &mut String) -> Result<(), String> {
    let problem = load_problem(path)?;
    let designer = designer_for(&problem, settings).map_err(|e| e.to_string())?;
    let p = designer.optimal_value();
    out.push_str(&optval_report(p));
    let Some(dir) = out_dir else {
        return Ok(());
    };
    std::fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    let write = |name: &str, text: &str| {
        let f = dir.join(name);
        std::fs::write(&f, text).map_err(|e| format!("{}: {e}", f.display()))
    };
    write("optval.vrep", &write_vrep(&p.vrep))?;
    write("optval.hrep", &write_hrep(&p.hrep))?;
    if problem.map.q() == 2 {
        let view = session_view_of_background(&problem, settings)?;
        write("optval.svg", &render_view(&view).map_err(|e| e.to_string())?)?;
        let _ = writeln!(out, "wrote optval.vrep, optval.hrep, optval.svg to {}", dir.display());
    } else {
        let _ = writeln!(
            out,
            "wrote optval.vrep, optval.hrep to {} (rendering needs q = 2)",
            dir.display()
        );
    }
    Ok(())
}

fn session_view_of_background(
    problem: &setlp::problem::Problem,
    settings: &Settings,
) -> Result<setlp::session::SessionView, String> {
    match session_for(problem, "", settings) {
        Ok(s) => Ok(s.view()),
        // Maps without optimizers still get a background picture.
        Err(setlp::Error::NoOptimizers) => {
            let designer = designer_for(problem, settings).map_err(|e| e.to_string())?;
            let geometry = setlp::session::Geometry::from_projection(designer.optimal_value());
            Ok(setlp::session::SessionView {
                status: Status::Searching,
                q: problem.map.q(),
                background: geometry.clone(),
                options: setlp::session::OptionsLayer { geometry, found: false },
                selections: Vec::new(),
                candidates: Vec::new(),
                optimizer: None,
            })
        }
        Err(e) => Err(e.to_string()),
    }
}

/// Outcome of a scripted session.
pub struct SessionRun {
    pub status: Status,
    pub log: String,
}

fn status_line(s: &setlp::session::DesignSession) -> String {
    let mut line = match s.status() {
        Status::Searching => "searching".to_string(),
        Status::Found => "found".to_string(),
    };
    if let Some(x) = s.outcome().optimizer() {
        let _ = write!(line, " x={}", fmt_vec(&round_display(x)));
        if s.meta().report_total {
            let _ = write!(line, " total={:.1}", x.iter().sum::<f64>());
        }
    }
    let _ = write!(line, " options={} vertices", s.current().projection.vrep.points.len());
    line
}

fn round_display(x: &[f64]) -> Vec<f64> {
    x.iter().map(|v| (v * 1e4).round() / 1e4).collect()
}

/// Replays a script, printing the status after each event.
pub fn session(
    problem_path: &Path,
    script_path: &Path,
    settings: &Settings,
    snap: bool,
    out: &mut String,
) -> Result<SessionRun, String> {
    let problem = load_problem(problem_path)?;
    let script_text =
        std::fs::read_to_string(script_path).map_err(|e| format!("{}: {e}", script_path.display()))?;
    let script = EventLog::parse(&script_text).map_err(|e| format!("{}: {e}", script_path.display()))?;
    let problem_ref = problem_path
        .file_name()
        .map(|f| f.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut s = session_for(&problem, &problem_ref, settings).map_err(|e| e.to_string())?;
    let _ = writeln!(out, "start: {}", status_line(&s));
    for event in &script.events {
        match event {
            setlp::session::Event::Select { point } => match s.add_point(point, snap) {
                Ok(r) => {
                    let _ = writeln!(
                        out,
                        "SELECT {} -> #{} at {}: {}",
                        fmt_vec(point),
                        r.id,
                        fmt_vec(&r.point),
                        status_line(&s)
                    );
                }
                Err(setlp::Error::OutsideOptions { point, nearest, distance }) => {
                    return Err(format!(
                        "SELECT {} lies outside the current options: L1 distance {}, nearest option {}",
                        fmt_vec(&point),
                        distance,
                        nearest.map_or("none".into(), |p| fmt_vec(&p))
                    ));
                }
                Err(e) => return Err(e.to_string()),
            },
            setlp::session::Event::Remove { id } => {
                s.remove_point(*id).map_err(|e| e.to_string())?;
                let _ = writeln!(out, "REMOVE {id}: {}", status_line(&s));
            }
        }
    }
    Ok(SessionRun {
        status: s.status(),
        log: s.export_log(),
    })
}
