//! Text file formats: instances, DIMACS CNF, capacitated hypergraphs, and
//! edge-list graphs with optional partition/cycle annotations.
//!
//! Instance format, line oriented (`#` starts a comment, blank lines
//! ignored):
//!
//! ```text
//! vars <n>
//! dom <i> <v>:<p> <v>:<p> ...
//! ev (<i>,<j>) (<i>,<j>) ...
//! ```
//!
//! One `dom` line per variable; values must be 0..d-1 in increasing order.
//! Each `ev` line is one atomic bad-event.
//!
//! Hypergraph format: `v <count>`, optional `cap <v> <C>` lines (default
//! capacity is the edge count), and `edge <v1> <v2> ...` lines.
//!
//! Graph format: `v <count>`, `edge <u> <v>` lines, optional `class <v1>
//! ... <vb>` lines (a partition for transversal instances) and an optional
//! `cycle <v0> ... <v_{n-1}>` line (a Hamiltonian cycle).

use lllmt_core::model::{Instance, VariableSpace};
use lllmt_core::vcmep::CapacitatedHypergraph;
use std::fmt::Write as _;

#[derive(Debug, thiserror::Error)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

fn err<T>(line: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        msg: msg.into(),
    })
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Parse the instance text format.
pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut n: Option<usize> = None;
    let mut domains: Vec<Option<Vec<f64>>> = Vec::new();
    let mut events: Vec<Vec<(u32, u32)>> = Vec::new();
    let mut last_line = 0;

    for (ln, line) in content_lines(text) {
        last_line = ln;
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("vars") => {
                if n.is_some() {
                    return err(ln, "duplicate vars line");
                }
                let count: usize = tokens
                    .next()
                    .ok_or(ParseError {
                        line: ln,
                        msg: "vars needs a count".into(),
                    })?
                    .parse()
                    .map_err(|_| ParseError {
                        line: ln,
                        msg: "bad vars count".into(),
                    })?;
                n = Some(count);
                domains = vec![None; count];
            }
            Some("dom") => {
                let n = n.ok_or(ParseError {
                    line: ln,
                    msg: "dom before vars".into(),
                })?;
                let var: usize = tokens
                    .next()
                    .ok_or(ParseError {
                        line: ln,
                        msg: "dom needs a variable".into(),
                    })?
                    .parse()
                    .map_err(|_| ParseError {
                        line: ln,
                        msg: "bad variable index".into(),
                    })?;
                if var >= n {
                    return err(ln, format!("variable {var} out of range (vars {n})"));
                }
                if domains[var].is_some() {
                    return err(ln, format!("duplicate dom line for variable {var}"));
                }
                let mut probs = Vec::new();
                for tok in tokens {
                    let (v, p) = tok.split_once(':').ok_or(ParseError {
                        line: ln,
                        msg: format!("expected v:p, got {tok}"),
                    })?;
                    let v: usize = v.parse().map_err(|_| ParseError {
                        line: ln,
                        msg: format!("bad value in {tok}"),
                    })?;
                    if v != probs.len() {
                        return err(ln, format!("values must be 0..d-1 in order, got {v}"));
                    }
                    let p: f64 = p.parse().map_err(|_| ParseError {
                        line: ln,
                        msg: format!("bad probability in {tok}"),
                    })?;
                    probs.push(p);
                }
                if probs.is_empty() {
                    return err(ln, format!("variable {var} has an empty domain"));
                }
                domains[var] = Some(probs);
            }
            Some("ev") => {
                if n.is_none() {
                    return err(ln, "ev before vars");
                }
                let mut terms = Vec::new();
                for tok in tokens {
                    let inner = tok
                        .strip_prefix('(')
                        .and_then(|t| t.strip_suffix(')'))
                        .ok_or(ParseError {
                            line: ln,
                            msg: format!("expected (i,j), got {tok}"),
                        })?;
                    let (i, j) = inner.split_once(',').ok_or(ParseError {
                        line: ln,
                        msg: format!("expected (i,j), got {tok}"),
                    })?;
                    let i: u32 = i.trim().parse().map_err(|_| ParseError {
                        line: ln,
                        msg: format!("bad variable in {tok}"),
                    })?;
                    let j: u32 = j.trim().parse().map_err(|_| ParseError {
                        line: ln,
                        msg: format!("bad value in {tok}"),
                    })?;
                    terms.push((i, j));
                }
                if terms.is_empty() {
                    return err(ln, "empty event");
                }
                events.push(terms);
            }
            Some(other) => return err(ln, format!("unknown directive '{other}'")),
            None => {}
        }
    }
    let n = n.ok_or(ParseError {
        line: last_line,
        msg: "missing vars line".into(),
    })?;
    let mut probs = Vec::with_capacity(n);
    for (var, d) in domains.into_iter().enumerate() {
        probs.push(d.ok_or(ParseError {
            line: last_line,
            msg: format!("missing dom line for variable {var}"),
        })?);
    }
    let space = VariableSpace::new(probs).map_err(|e| ParseError {
        line: last_line,
        msg: format!("invalid space: {e}"),
    })?;
    Instance::build(space, events).map_err(|e| ParseError {
        line: last_line,
        msg: format!("invalid instance: {e}"),
    })
}

/// Render an instance in the text format.
pub fn write_instance(instance: &Instance) -> String {
    let mut out = String::new();
    let n = instance.var_count();
    writeln!(out, "vars {n}").unwrap();
    for i in 0..n {
        write!(out, "dom {i}").unwrap();
        for (j, p) in instance.space().probs_of(i).iter().enumerate() {
            write!(out, " {j}:{p}").unwrap();
        }
        writeln!(out).unwrap();
    }
    for ev in instance.events() {
        write!(out, "ev").unwrap();
        for &(i, j) in ev.terms() {
            write!(out, " ({i},{j})").unwrap();
        }
        writeln!(out).unwrap();
    }
    out
}

/// A parsed CNF: the variable count and clauses of (variable, positive)
/// literals, 0-indexed.
pub type Cnf = (usize, Vec<Vec<(u32, bool)>>);

/// Parse DIMACS CNF into clauses of (variable, positive) literals.
/// Variables are 0-indexed in the output.
pub fn parse_dimacs(text: &str) -> Result<Cnf, ParseError> {
    let mut n_vars: Option<usize> = None;
    let mut clauses: Vec<Vec<(u32, bool)>> = Vec::new();
    let mut current: Vec<(u32, bool)> = Vec::new();
    for (ln, line) in text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())) {
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('p') {
            if n_vars.is_some() {
                return err(ln, "duplicate problem line");
            }
            let mut toks = rest.split_whitespace();
            if toks.next() != Some("cnf") {
                return err(ln, "expected 'p cnf'");
            }
            let n: usize = toks
                .next()
                .ok_or(ParseError {
                    line: ln,
                    msg: "missing variable count".into(),
                })?
                .parse()
                .map_err(|_| ParseError {
                    line: ln,
                    msg: "bad variable count".into(),
                })?;
            let _m: usize = toks
                .next()
                .ok_or(ParseError {
                    line: ln,
                    msg: "missing clause count".into(),
                })?
                .parse()
                .map_err(|_| ParseError {
                    line: ln,
                    msg: "bad clause count".into(),
                })?;
            n_vars = Some(n);
            continue;
        }
        let n = n_vars.ok_or(ParseError {
            line: ln,
            msg: "clause before problem line".into(),
        })?;
        for tok in line.split_whitespace() {
            let lit: i64 = tok.parse().map_err(|_| ParseError {
                line: ln,
                msg: format!("bad literal '{tok}'"),
            })?;
            if lit == 0 {
                if current.is_empty() {
                    return err(ln, "empty clause");
                }
                clauses.push(std::mem::take(&mut current));
            } else {
                let var = lit.unsigned_abs() as u32 - 1;
                if var as usize >= n {
                    return err(ln, format!("literal {lit} out of range"));
                }
                current.push((var, lit > 0));
            }
        }
    }
    if !current.is_empty() {
        clauses.push(current);
    }
    let n = n_vars.ok_or(ParseError {
        line: 1,
        msg: "missing problem line".into(),
    })?;
    Ok((n, clauses))
}

pub fn write_dimacs(n_vars: usize, clauses: &[Vec<(u32, bool)>]) -> String {
    let mut out = String::new();
    writeln!(out, "p cnf {} {}", n_vars, clauses.len()).unwrap();
    for clause in clauses {
        for &(v, pos) in clause {
            let lit = (v as i64 + 1) * if pos { 1 } else { -1 };
            write!(out, "{lit} ").unwrap();
        }
        writeln!(out, "0").unwrap();
    }
    out
}

/// A parsed hypergraph file; capacities default to the edge count.
#[derive(Clone, Debug)]
pub struct HypergraphFile {
    pub vertices: usize,
    pub edges: Vec<Vec<u32>>,
    pub capacities: Vec<Option<u32>>,
}

impl HypergraphFile {
    pub fn into_capacitated(self) -> Result<CapacitatedHypergraph, ParseError> {
        let default = self.edges.len() as u32;
        let caps = self
            .capacities
            .iter()
            .map(|c| c.unwrap_or(default))
            .collect();
        CapacitatedHypergraph::new(self.vertices, self.edges, caps).map_err(|e| ParseError {
            line: 0,
            msg: format!("invalid hypergraph: {e}"),
        })
    }
}

pub fn parse_hypergraph(text: &str) -> Result<HypergraphFile, ParseError> {
    let mut vertices: Option<usize> = None;
    let mut edges: Vec<Vec<u32>> = Vec::new();
    let mut caps: Vec<Option<u32>> = Vec::new();
    for (ln, line) in content_lines(text) {
        let mut toks = line.split_whitespace();
        match toks.next() {
            Some("v") => {
                let n: usize = toks
                    .next()
                    .ok_or(ParseError {
                        line: ln,
                        msg: "v needs a count".into(),
                    })?
                    .parse()
                    .map_err(|_| ParseError {
                        line: ln,
                        msg: "bad vertex count".into(),
                    })?;
                vertices = Some(n);
                caps = vec![None; n];
            }
            Some("cap") => {
                let n = vertices.ok_or(ParseError {
                    line: ln,
                    msg: "cap before v".into(),
                })?;
                let v: usize = toks
                    .next()
                    .ok_or(ParseError {
                        line: ln,
                        msg: "cap needs a vertex".into(),
                    })?
                    .parse()
                    .map_err(|_| ParseError {
                        line: ln,
                        msg: "bad vertex".into(),
                    })?;
                if v >= n {
                    return err(ln, format!("vertex {v} out of range"));
                }
                let c: u32 = toks
                    .next()
                    .ok_or(ParseError {
                        line: ln,
                        msg: "cap needs a capacity".into(),
                    })?
                    .parse()
                    .map_err(|_| ParseError {
                        line: ln,
                        msg: "bad capacity".into(),
                    })?;
                caps[v] = Some(c);
            }
            Some("edge") => {
                let n = vertices.ok_or(ParseError {
                    line: ln,
                    msg: "edge before v".into(),
                })?;
                let mut edge = Vec::new();
                for tok in toks {
                    let v: u32 = tok.parse().map_err(|_| ParseError {
                        line: ln,
                        msg: format!("bad vertex '{tok}'"),
                    })?;
                    if v as usize >= n {
                        return err(ln, format!("vertex {v} out of range"));
                    }
                    edge.push(v);
                }
                if edge.is_empty() {
                    return err(ln, "empty edge");
                }
                edges.push(edge);
            }
            Some(other) => return err(ln, format!("unknown directive '{other}'")),
            None => {}
        }
    }
    let vertices = vertices.ok_or(ParseError {
        line: 1,
        msg: "missing v line".into(),
    })?;
    Ok(HypergraphFile {
        vertices,
        edges,
        capacities: caps,
    })
}

pub fn write_hypergraph(g: &CapacitatedHypergraph) -> String {
    let mut out = String::new();
    writeln!(out, "v {}", g.vertices).unwrap();
    for (v, c) in g.capacities.iter().enumerate() {
        writeln!(out, "cap {v} {c}").unwrap();
    }
    for edge in &g.edges {
        write!(out, "edge").unwrap();
        for v in edge {
            write!(out, " {v}").unwrap();
        }
        writeln!(out).unwrap();
    }
    out
}

/// A parsed graph file with optional partition and cycle annotations.
#[derive(Clone, Debug, Default)]
pub struct GraphFile {
    pub vertices: usize,
    pub edges: Vec<(u32, u32)>,
    pub classes: Vec<Vec<u32>>,
    pub cycle: Option<Vec<u32>>,
}

pub fn parse_graph(text: &str) -> Result<GraphFile, ParseError> {
    let mut g = GraphFile::default();
    let mut have_v = false;
    for (ln, line) in content_lines(text) {
        let mut toks = line.split_whitespace();
        let parse_vertex = |tok: &str, ln: usize| -> Result<u32, ParseError> {
            tok.parse().map_err(|_| ParseError {
                line: ln,
                msg: format!("bad vertex '{tok}'"),
            })
        };
        match toks.next() {
            Some("v") => {
                g.vertices = toks
                    .next()
                    .ok_or(ParseError {
                        line: ln,
                        msg: "v needs a count".into(),
                    })?
                    .parse()
                    .map_err(|_| ParseError {
                        line: ln,
                        msg: "bad vertex count".into(),
                    })?;
                have_v = true;
            }
            Some("edge") => {
                if !have_v {
                    return err(ln, "edge before v");
                }
                let u = parse_vertex(
                    toks.next().ok_or(ParseError {
                        line: ln,
                        msg: "edge needs u v".into(),
                    })?,
                    ln,
                )?;
                let w = parse_vertex(
                    toks.next().ok_or(ParseError {
                        line: ln,
                        msg: "edge needs u v".into(),
                    })?,
                    ln,
                )?;
                if u as usize >= g.vertices || w as usize >= g.vertices {
                    return err(ln, "edge vertex out of range");
                }
                g.edges.push((u, w));
            }
            Some("class") => {
                let mut class = Vec::new();
                for tok in toks {
                    class.push(parse_vertex(tok, ln)?);
                }
                if class.is_empty() {
                    return err(ln, "empty class");
                }
                g.classes.push(class);
            }
            Some("cycle") => {
                let mut cycle = Vec::new();
                for tok in toks {
                    cycle.push(parse_vertex(tok, ln)?);
                }
                g.cycle = Some(cycle);
            }
            Some(other) => return err(ln, format!("unknown directive '{other}'")),
            None => {}
        }
    }
    if !have_v {
        return err(1, "missing v line");
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instance_round_trip() {
        let text = "\
# toy instance
vars 3
dom 0 0:0.5 1:0.5
dom 1 0:0.25 1:0.75
dom 2 0:0.5 1:0.5
ev (0,0) (1,0)
ev (1,1) (2,0)
";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.var_count(), 3);
        assert_eq!(inst.event_count(), 2);
        assert!((inst.space().prob(1, 1) - 0.75).abs() < 1e-12);
        let rendered = write_instance(&inst);
        let again = parse_instance(&rendered).unwrap();
        assert_eq!(again.event_count(), 2);
        assert_eq!(again.event(1).terms(), inst.event(1).terms());
    }

    #[test]
    fn instance_errors_carry_line_numbers() {
        let e = parse_instance("vars 1\ndom 0 0:0.5 2:0.5\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_instance("vars 1\ndom 0 0:1.0\nev (3,0)\n").unwrap_err();
        assert!(e.msg.contains("invalid instance"));
        let e = parse_instance("dom 0 0:1.0\n").unwrap_err();
        assert_eq!(e.line, 1);
    }

    #[test]
    fn dimacs_round_trip() {
        let text = "c example\np cnf 3 2\n1 -2 3 0\n-1 2 0\n";
        let (n, clauses) = parse_dimacs(text).unwrap();
        assert_eq!(n, 3);
        assert_eq!(
            clauses,
            vec![
                vec![(0, true), (1, false), (2, true)],
                vec![(0, false), (1, true)],
            ]
        );
        let rendered = write_dimacs(n, &clauses);
        let (n2, clauses2) = parse_dimacs(&rendered).unwrap();
        assert_eq!((n2, clauses2), (n, clauses));
    }

    #[test]
    fn dimacs_errors() {
        assert!(parse_dimacs("1 2 0\n").is_err());
        let e = parse_dimacs("p cnf 2 1\n5 0\n").unwrap_err();
        assert_eq!(e.line, 2);
    }

    #[test]
    fn hypergraph_round_trip() {
        let text = "v 3\ncap 0 1\ncap 1 1\ncap 2 1\nedge 0 1\nedge 1 2\n";
        let hg = parse_hypergraph(text).unwrap().into_capacitated().unwrap();
        assert_eq!(hg.vertices, 3);
        assert_eq!(hg.edge_count(), 2);
        let rendered = write_hypergraph(&hg);
        let again = parse_hypergraph(&rendered)
            .unwrap()
            .into_capacitated()
            .unwrap();
        assert_eq!(again.capacities, hg.capacities);
        assert_eq!(again.edges, hg.edges);
    }

    #[test]
    fn hypergraph_default_capacity() {
        let hg = parse_hypergraph("v 2\nedge 0 1\n")
            .unwrap()
            .into_capacitated()
            .unwrap();
        assert_eq!(hg.capacities, vec![1, 1]); // defaults to edge count
    }

    #[test]
    fn graph_with_classes_and_cycle() {
        let text = "v 4\nedge 0 2\nedge 1 3\nclass 0 1\nclass 2 3\ncycle 0 2 1 3\n";
        let g = parse_graph(text).unwrap();
        assert_eq!(g.vertices, 4);
        assert_eq!(g.edges.len(), 2);
        assert_eq!(g.classes.len(), 2);
        assert_eq!(g.cycle.as_deref(), Some(&[0, 2, 1, 3][..]));
    }
}
