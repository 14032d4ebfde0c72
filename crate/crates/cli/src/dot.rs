//! Graphviz export of 1-skeletons: Kripke states joined by agent-labeled
//! edges, or complex vertices joined along facets.

use std::collections::BTreeSet;
use std::fmt::Write;

use episolve_core::logic::ActionModel;
use episolve_core::{KripkeFrame, KripkeModel, SimplicialModel};

fn quote(s: &str) -> String {
    format!(
        "\"{}\"",
        s.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', "\\n")
    )
}

fn frame_edges(out: &mut String, frame: &KripkeFrame) {
    for s in 0..frame.len() {
        for t in s + 1..frame.len() {
            let by: Vec<&str> = frame
                .agents()
                .iter()
                .filter(|&a| frame.related(a, s, t))
                .map(|a| frame.agents().name(a))
                .collect();
            if !by.is_empty() {
                let _ = writeln!(
                    out,
                    "  {} -- {} [label={}];",
                    quote(frame.state_name(s)),
                    quote(frame.state_name(t)),
                    quote(&by.join(","))
                );
            }
        }
    }
}

pub fn kripke(m: &KripkeModel) -> String {
    let mut out = String::from("graph kripke {\n");
    for s in 0..m.len() {
        let name = m.frame().state_name(s);
        let label = format!("{name}\n{}", m.literal_names(s).join(" "));
        let _ = writeln!(out, "  {} [label={}];", quote(name), quote(&label));
    }
    frame_edges(&mut out, m.frame());
    out.push_str("}\n");
    out
}

pub fn action(a: &ActionModel) -> String {
    let mut out = String::from("graph action {\n");
    for p in 0..a.len() {
        let name = a.point_name(p);
        let label = format!("{name}\npre: {}", a.precondition(p));
        let _ = writeln!(out, "  {} [label={}];", quote(name), quote(&label));
    }
    frame_edges(&mut out, a.frame());
    out.push_str("}\n");
    out
}

pub fn simplicial(sm: &SimplicialModel) -> String {
    let c = sm.complex();
    let mut out = String::from("graph complex {\n");
    for (v, vertex) in c.vertices().iter().enumerate() {
        let label = format!("{}\n{}", vertex.name, sm.label_names(v).join(" "));
        let _ = writeln!(
            out,
            "  {} [label={}, group={}];",
            quote(&vertex.name),
            quote(&label),
            quote(c.agents().name(vertex.color))
        );
    }
    let mut edges = BTreeSet::new();
    for f in c.facets() {
        for (i, &u) in f.iter().enumerate() {
            for &v in &f[i + 1..] {
                edges.insert((u.min(v), u.max(v)));
            }
        }
    }
    for (u, v) in edges {
        let _ = writeln!(out, "  {} -- {};", quote(&c.vertex(u).name), quote(&c.vertex(v).name));
    }
    out.push_str("}\n");
    out
}
