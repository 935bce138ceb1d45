//! JSON and DOT renderings of explored transition systems. Nodes are
//! listed in canonical text order and edges sorted, so output only depends
//! on the system.

use std::fmt::Write;

use serde::Serialize;

use crate::lts::{Reachable, SystemKind};
use crate::terms::Calculus;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Edge {
    pub source: String,
    pub label: String,
    pub target: String,
    pub rule: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Dump {
    pub calculus: Calculus,
    pub kind: SystemKind,
    pub root: String,
    pub nodes: Vec<String>,
    pub edges: Vec<Edge>,
}

impl From<&Reachable> for Dump {
    fn from(r: &Reachable) -> Dump {
        let text: Vec<String> = r.states.iter().map(|s| s.to_string()).collect();
        let mut nodes = text.clone();
        nodes.sort();
        let mut edges: Vec<Edge> = r
            .edges
            .iter()
            .map(|(s, l, t, rule)| Edge {
                source: text[*s].clone(),
                label: l.to_string(),
                target: text[*t].clone(),
                rule: rule.to_string(),
            })
            .collect();
        edges.sort();
        edges.dedup();
        Dump { calculus: r.calculus, kind: r.kind, root: text[0].clone(), nodes, edges }
    }
}

pub fn to_json(r: &Reachable) -> String {
    serde_json::to_string_pretty(&Dump::from(r)).expect("dumps serialise")
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn to_dot(r: &Reachable) -> String {
    let d = Dump::from(r);
    let id = |s: &str| d.nodes.binary_search_by(|n| n.as_str().cmp(s)).unwrap();
    let mut out = String::from("digraph lts {\n");
    for (k, n) in d.nodes.iter().enumerate() {
        let shape = if *n == d.root { ", shape=doublecircle" } else { "" };
        writeln!(out, "  s{k} [label={}{shape}];", quote(n)).unwrap();
    }
    for e in &d.edges {
        writeln!(out, "  s{} -> s{} [label={}];", id(&e.source), id(&e.target), quote(&e.label)).unwrap();
    }
    out.push_str("}\n");
    out
}
