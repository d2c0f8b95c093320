use std::io::{self, Write};

use super::CoGraph;

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

/// Undirected DOT with `name` on nodes and `weight` on edges.
pub fn write_dot<W: Write>(g: &CoGraph, mut out: W) -> io::Result<()> {
    writeln!(out, "graph castnet {{")?;
    for u in 0..g.node_count() {
        writeln!(out, "  n{u} [name=\"{}\"];", dot_escape(g.label(u)))?;
    }
    for (u, v, w) in g.edges() {
        writeln!(out, "  n{u} -- n{v} [weight={w}];")?;
    }
    writeln!(out, "}}")
}

pub fn write_graphml<W: Write>(g: &CoGraph, mut out: W) -> io::Result<()> {
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#)?;
    writeln!(out, r#"<graphml xmlns="http://graphml.graphdrawing.org/xmlns">"#)?;
    writeln!(out, r#"  <key id="name" for="node" attr.name="name" attr.type="string"/>"#)?;
    writeln!(out, r#"  <key id="weight" for="edge" attr.name="weight" attr.type="int"/>"#)?;
    writeln!(out, r#"  <graph id="castnet" edgedefault="undirected">"#)?;
    for u in 0..g.node_count() {
        writeln!(
            out,
            r#"    <node id="n{u}"><data key="name">{}</data></node>"#,
            xml_escape(g.label(u))
        )?;
    }
    for (u, v, w) in g.edges() {
        writeln!(
            out,
            r#"    <edge source="n{u}" target="n{v}"><data key="weight">{w}</data></edge>"#
        )?;
    }
    writeln!(out, "  </graph>")?;
    writeln!(out, "</graphml>")
}
