//! Plain-text formats for polyhedra, maps, networks and linear programs.
//!
//! All formats are line oriented; `#` starts a comment. Numbers are decimal
//! literals and are written back in shortest round-trip form.
//!
//! Polyhedron:
//! ```text
//! dim 2
//! aux_dim 1
//! 1 0 -1 >= 0
//! 0 1 0 <= 4
//! ```
//! or, for a V-representation, sections `POINTS`, `RAYS`, `LINES` with one
//! vector per line. Map files start with `n=… q=…`; the ambient columns are
//! `x` then `y`, further columns are auxiliary. Network files list
//! `SUPPLY name a=…`, `DEMAND name b=…`, `ARC tail head c=… u=…` and
//! `PARAMS tau=… mu=… gamma1=… gamma2=…`. LP files start with
//! `MIN c…` or `MAX c…` followed by rows over `x`.

use std::fmt::Write as _;

use crate::builders::{build_from_graph_vrep, build_from_lp, Arc, DemandNode, NetworkParams, NetworkSpec, SupplyNode};
use crate::error::{Error, Result};
use crate::lp::{Constraint, Relation, Sense};
use crate::poly::{HRepPolyhedron, PRepPolyhedron, VRepPolyhedron};
use crate::problem::Problem;
use crate::setmap::SetValuedMap;

/// A parsed polyhedron file.
#[derive(Clone, Debug, PartialEq)]
pub enum PolyhedronFile {
    Inequalities(PRepPolyhedron),
    Generators(VRepPolyhedron),
}

struct Line<'a> {
    no: usize,
    text: &'a str,
}

fn significant_lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let t = raw.split('#').next().unwrap_or("").trim();
            (!t.is_empty()).then_some(Line { no: i + 1, text: t })
        })
        .collect()
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn number(line: usize, word: &str) -> Result<f64> {
    let v: f64 = word
        .parse()
        .map_err(|_| parse_err(line, format!("bad number '{word}'")))?;
    if !v.is_finite() {
        return Err(parse_err(line, format!("non-finite number '{word}'")));
    }
    Ok(v)
}

fn vector(line: &Line) -> Result<Vec<f64>> {
    line.text
        .split_whitespace()
        .map(|w| number(line.no, w))
        .collect()
}

/// `key value`, `key=value` or `key = value`.
fn key_value<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    let rest = text.strip_prefix(key)?;
    if !rest.starts_with([' ', '=', '\t']) {
        return None;
    }
    Some(rest.trim_start_matches([' ', '=', '\t']).trim())
}

fn relation_of(word: &str) -> Option<Relation> {
    match word {
        ">=" | "≥" => Some(Relation::Ge),
        "<=" | "≤" => Some(Relation::Le),
        "=" | "==" => Some(Relation::Eq),
        _ => None,
    }
}

fn row(line: &Line, width: usize) -> Result<Constraint> {
    let words: Vec<&str> = line.text.split_whitespace().collect();
    let pos = words
        .iter()
        .position(|w| relation_of(w).is_some())
        .ok_or_else(|| parse_err(line.no, "expected a relation >=, <= or ="))?;
    if pos + 2 != words.len() {
        return Err(parse_err(line.no, "a row reads 'a1 … ak rel b'"));
    }
    let coeffs = words[..pos]
        .iter()
        .map(|w| number(line.no, w))
        .collect::<Result<Vec<_>>>()?;
    if coeffs.len() != width {
        return Err(parse_err(
            line.no,
            format!("expected {width} coefficients, found {}", coeffs.len()),
        ));
    }
    let rhs = number(line.no, words[pos + 1])?;
    Ok(Constraint::new(coeffs, relation_of(words[pos]).unwrap(), rhs))
}

fn dim_value(line: &Line, key: &str) -> Result<Option<usize>> {
    match key_value(line.text, key) {
        None => Ok(None),
        Some(v) => v
            .parse::<usize>()
            .map(Some)
            .map_err(|_| parse_err(line.no, format!("{key} needs a nonnegative integer"))),
    }
}

enum Section {
    Rows,
    Points,
    Rays,
    Lines,
}

/// Shared body parser: `dim`/`aux_dim` fields then rows or generator sections.
fn parse_body(lines: &[Line], default_dim: Option<usize>) -> Result<PolyhedronFile> {
    let mut dim = default_dim;
    let mut aux = 0usize;
    let mut section = Section::Rows;
    let mut rows = Vec::new();
    let (mut points, mut rays, mut lines_v) = (Vec::new(), Vec::new(), Vec::new());
    let mut saw_generators = false;
    for line in lines {
        if let Some(d) = dim_value(line, "dim")? {
            if let Some(prev) = default_dim {
                if prev != d {
                    return Err(parse_err(line.no, format!("dim {d} contradicts n+q = {prev}")));
                }
            }
            dim = Some(d);
            continue;
        }
        if let Some(a) = dim_value(line, "aux_dim")? {
            aux = a;
            continue;
        }
        match line.text.to_ascii_uppercase().as_str() {
            "ROWS" => {
                section = Section::Rows;
                continue;
            }
            "POINTS" => {
                section = Section::Points;
                saw_generators = true;
                continue;
            }
            "RAYS" => {
                section = Section::Rays;
                saw_generators = true;
                continue;
            }
            "LINES" => {
                section = Section::Lines;
                saw_generators = true;
                continue;
            }
            _ => {}
        }
        let d = dim.ok_or_else(|| parse_err(line.no, "dim must be given before data"))?;
        match section {
            Section::Rows => rows.push(row(line, d + aux)?),
            Section::Points | Section::Rays | Section::Lines => {
                let v = vector(line)?;
                if v.len() != d {
                    return Err(parse_err(line.no, format!("expected {d} entries, found {}", v.len())));
                }
                match section {
                    Section::Points => points.push(v),
                    Section::Rays => rays.push(v),
                    _ => lines_v.push(v),
                }
            }
        }
    }
    let last = lines.last().map_or(1, |l| l.no);
    let d = dim.ok_or_else(|| parse_err(last, "missing dim"))?;
    if saw_generators {
        if !rows.is_empty() {
            return Err(parse_err(last, "mixing inequality rows and generator sections"));
        }
        Ok(PolyhedronFile::Generators(VRepPolyhedron::new(d, points, rays, lines_v)?))
    } else {
        Ok(PolyhedronFile::Inequalities(PRepPolyhedron::new(d, aux, rows)?))
    }
}

pub fn parse_polyhedron(text: &str) -> Result<PolyhedronFile> {
    parse_body(&significant_lines(text), None)
}

fn header_dims(line: &Line) -> Result<(usize, usize)> {
    let mut n = None;
    let mut q = None;
    for word in line.text.split_whitespace() {
        let (k, v) = word
            .split_once('=')
            .ok_or_else(|| parse_err(line.no, "header reads 'n=… q=…'"))?;
        let v: usize = v
            .parse()
            .map_err(|_| parse_err(line.no, format!("bad integer in '{word}'")))?;
        match k {
            "n" => n = Some(v),
            "q" => q = Some(v),
            _ => return Err(parse_err(line.no, format!("unknown header field '{k}'"))),
        }
    }
    match (n, q) {
        (Some(n), Some(q)) if q > 0 => Ok((n, q)),
        _ => Err(parse_err(line.no, "header needs n=… and q=… with q > 0")),
    }
}

pub fn parse_map(text: &str) -> Result<SetValuedMap> {
    let lines = significant_lines(text);
    let head = lines.first().ok_or_else(|| parse_err(1, "empty map file"))?;
    let (n, q) = header_dims(head)?;
    match parse_body(&lines[1..], Some(n + q))? {
        PolyhedronFile::Inequalities(p) => SetValuedMap::new(n, q, p),
        PolyhedronFile::Generators(v) => build_from_graph_vrep(n, q, v.points, v.rays, v.lines),
    }
}

fn attribute(line: &Line, word: &str, key: &str) -> Result<f64> {
    match word.split_once('=') {
        Some((k, v)) if k.eq_ignore_ascii_case(key) => number(line.no, v),
        _ => Err(parse_err(line.no, format!("expected {key}=…, found '{word}'"))),
    }
}

pub fn parse_network(text: &str) -> Result<NetworkSpec> {
    let mut supplies = Vec::new();
    let mut demands = Vec::new();
    let mut arcs = Vec::new();
    let mut params = None;
    for line in significant_lines(text) {
        let words: Vec<&str> = line.text.split_whitespace().collect();
        let arity = |k: usize| {
            if words.len() == k {
                Ok(())
            } else {
                Err(parse_err(line.no, format!("{} takes {} fields", words[0], k - 1)))
            }
        };
        match words[0].to_ascii_uppercase().as_str() {
            "SUPPLY" => {
                arity(3)?;
                supplies.push(SupplyNode {
                    name: words[1].to_string(),
                    cost: attribute(&line, words[2], "a")?,
                });
            }
            "DEMAND" => {
                arity(3)?;
                demands.push(DemandNode {
                    name: words[1].to_string(),
                    demand: attribute(&line, words[2], "b")?,
                });
            }
            "ARC" => {
                arity(5)?;
                arcs.push(Arc {
                    tail: words[1].to_string(),
                    head: words[2].to_string(),
                    cost: attribute(&line, words[3], "c")?,
                    capacity: attribute(&line, words[4], "u")?,
                });
            }
            "PARAMS" => {
                arity(5)?;
                let keys = ["tau", "mu", "gamma1", "gamma2"];
                let mut v = [0.0; 4];
                for (slot, (word, key)) in v.iter_mut().zip(words[1..].iter().zip(keys)) {
                    *slot = if word.contains('=') {
                        attribute(&line, word, key)?
                    } else {
                        number(line.no, word)?
                    };
                }
                params = Some(NetworkParams {
                    tau: v[0],
                    mu: v[1],
                    gamma1: v[2],
                    gamma2: v[3],
                });
            }
            other => return Err(parse_err(line.no, format!("unknown keyword '{other}'"))),
        }
    }
    let spec = NetworkSpec {
        supplies,
        demands,
        arcs,
        params: params.ok_or_else(|| parse_err(text.lines().count().max(1), "missing PARAMS line"))?,
    };
    spec.validate()?;
    Ok(spec)
}

/// Objective, constraint rows `Ax ≥ b` and sense of an LP file.
pub fn parse_lp(text: &str) -> Result<(Vec<f64>, Vec<Vec<f64>>, Vec<f64>, Sense)> {
    let lines = significant_lines(text);
    let head = lines.first().ok_or_else(|| parse_err(1, "empty LP file"))?;
    let mut words = head.text.split_whitespace();
    let sense = match words.next().map(|w| w.to_ascii_uppercase()).as_deref() {
        Some("MIN") => Sense::Minimize,
        Some("MAX") => Sense::Maximize,
        _ => return Err(parse_err(head.no, "LP file starts with MIN or MAX")),
    };
    let c = words
        .map(|w| number(head.no, w))
        .collect::<Result<Vec<_>>>()?;
    if c.is_empty() {
        return Err(parse_err(head.no, "objective needs at least one coefficient"));
    }
    let mut a = Vec::new();
    let mut b = Vec::new();
    for line in &lines[1..] {
        let r = row(line, c.len())?;
        match r.rel {
            Relation::Ge => {
                a.push(r.coeffs);
                b.push(r.rhs);
            }
            Relation::Le => {
                a.push(r.coeffs.iter().map(|v| -v).collect());
                b.push(-r.rhs);
            }
            Relation::Eq => {
                a.push(r.coeffs.iter().map(|v| -v).collect());
                b.push(-r.rhs);
                a.push(r.coeffs);
                b.push(r.rhs);
            }
        }
    }
    Ok((c, a, b, sense))
}

/// Guesses the format from the first significant line.
pub fn detect_kind(text: &str) -> Option<crate::problem::ProblemKind> {
    use crate::problem::ProblemKind;
    let first = significant_lines(text).into_iter().next()?;
    let word = first.text.split_whitespace().next()?.to_ascii_uppercase();
    match word.as_str() {
        "MIN" | "MAX" => Some(ProblemKind::LinearProgram),
        "SUPPLY" | "DEMAND" | "ARC" | "PARAMS" => Some(ProblemKind::Network),
        _ if first.text.starts_with("n=") || first.text.starts_with("q=") => Some(ProblemKind::Map),
        _ => None,
    }
}

/// Parses any problem file.
pub fn parse_problem(text: &str) -> Result<Problem> {
    use crate::problem::ProblemKind;
    match detect_kind(text) {
        Some(ProblemKind::Map) => Ok(Problem::from_map(parse_map(text)?)),
        Some(ProblemKind::Network) => Problem::from_network(&parse_network(text)?),
        Some(ProblemKind::LinearProgram) => {
            let (c, a, b, sense) = parse_lp(text)?;
            let cost = match sense {
                Sense::Minimize => c.clone(),
                Sense::Maximize => c.iter().map(|v| -v).collect(),
            };
            Ok(Problem::from_lp(build_from_lp(&c, &a, &b, sense)?, cost))
        }
        None => {
            let line = significant_lines(text).first().map_or(1, |l| l.no);
            Err(parse_err(
                line,
                "cannot tell the problem type (expected 'n=… q=…', MIN/MAX, or SUPPLY/DEMAND/ARC/PARAMS)",
            ))
        }
    }
}

fn write_vector(out: &mut String, v: &[f64]) {
    let words: Vec<String> = v.iter().map(|x| format!("{x}")).collect();
    out.push_str(&words.join(" "));
}

fn write_rows(out: &mut String, rows: &[Constraint]) {
    for c in rows {
        write_vector(out, &c.coeffs);
        let _ = writeln!(out, " {} {}", c.rel.symbol(), c.rhs);
    }
}

pub fn write_prep(p: &PRepPolyhedron) -> String {
    let mut out = format!("dim {}\naux_dim {}\n", p.ambient_dim(), p.aux_dim());
    write_rows(&mut out, p.constraints());
    out
}

pub fn write_hrep(h: &HRepPolyhedron) -> String {
    let mut out = format!("dim {}\naux_dim 0\n", h.dim());
    write_rows(&mut out, h.constraints());
    out
}

pub fn write_vrep(v: &VRepPolyhedron) -> String {
    let mut out = format!("dim {}\n", v.dim);
    for (name, list) in [("POINTS", &v.points), ("RAYS", &v.rays), ("LINES", &v.lines)] {
        let _ = writeln!(out, "{name}");
        for p in list {
            write_vector(&mut out, p);
            out.push('\n');
        }
    }
    out
}

pub fn write_map(m: &SetValuedMap) -> String {
    format!("n={} q={}\n{}", m.n(), m.q(), write_prep(m.graph()))
}

pub fn write_network(spec: &NetworkSpec) -> String {
    let mut out = String::new();
    for s in &spec.supplies {
        let _ = writeln!(out, "SUPPLY {} a={}", s.name, s.cost);
    }
    for d in &spec.demands {
        let _ = writeln!(out, "DEMAND {} b={}", d.name, d.demand);
    }
    for a in &spec.arcs {
        let _ = writeln!(out, "ARC {} {} c={} u={}", a.tail, a.head, a.cost, a.capacity);
    }
    let p = &spec.params;
    let _ = writeln!(
        out,
        "PARAMS tau={} mu={} gamma1={} gamma2={}",
        p.tau, p.mu, p.gamma1, p.gamma2
    );
    out
}
