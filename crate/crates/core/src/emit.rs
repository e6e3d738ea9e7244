//! DOT, TikZ and JSON renderings of quivers, categories, mutation graphs,
//! exangles and verification reports. Output is byte-deterministic.

use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::json;

use crate::error::{Error, Result};
use crate::exangle::Exangle;
use crate::model::FiniteCategory;
use crate::quiver::Quiver;
use crate::rigid::MutationGraph;
use crate::tuple::IndexTuple;
use crate::verify::GridRun;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Dot,
    Tikz,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dot" => Ok(Format::Dot),
            "tikz" => Ok(Format::Tikz),
            "json" => Ok(Format::Json),
            _ => Err(Error::InvalidEmit(format!("unknown format {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Content {
    Quiver,
    Category,
    MutationGraph,
    Exangle,
    Report,
}

impl FromStr for Content {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quiver" => Ok(Content::Quiver),
            "category" => Ok(Content::Category),
            "mutation-graph" => Ok(Content::MutationGraph),
            "exangle" => Ok(Content::Exangle),
            "report" => Ok(Content::Report),
            _ => Err(Error::InvalidEmit(format!("unknown content {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ArrowPolicy {
    /// Every non-zero morphism between distinct objects.
    All,
    /// Non-zero morphisms between distinct objects that are not a non-zero
    /// composite of two non-identity basis morphisms.
    #[default]
    Irreducible,
}

impl FromStr for ArrowPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(ArrowPolicy::All),
            "irreducible" => Ok(ArrowPolicy::Irreducible),
            _ => Err(Error::InvalidEmit(format!("unknown arrow policy {s:?}"))),
        }
    }
}

/// A plain labelled digraph, the common shape of everything drawn.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    /// `(id, label)`.
    pub nodes: Vec<(String, String)>,
    /// `(source id, target id, optional edge label)`.
    pub edges: Vec<(String, String, Option<String>)>,
}

impl Graph {
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph {\n");
        for (id, label) in &self.nodes {
            writeln!(out, "  \"{id}\" [label=\"{label}\"];").unwrap();
        }
        for (s, t, label) in &self.edges {
            match label {
                Some(l) => writeln!(out, "  \"{s}\" -> \"{t}\" [label=\"{l}\"];").unwrap(),
                None => writeln!(out, "  \"{s}\" -> \"{t}\";").unwrap(),
            }
        }
        out.push_str("}\n");
        out
    }

    /// A `graphs`-library picture; needs `\usetikzlibrary{graphs,graphdrawing}`
    /// and `\usegdlibrary{layered}`.
    pub fn to_tikz(&self) -> String {
        let mut out = String::from("\\tikz \\graph [layered layout] {\n");
        for (id, label) in &self.nodes {
            writeln!(out, "  \"{id}\" [as={{${label}$}}];").unwrap();
        }
        for (s, t, label) in &self.edges {
            match label {
                Some(l) => writeln!(out, "  \"{s}\" ->[\"{l}\"] \"{t}\";").unwrap(),
                None => writeln!(out, "  \"{s}\" -> \"{t}\";").unwrap(),
            }
        }
        out.push_str("};\n");
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "nodes": self.nodes.iter().map(|(id, _)| id).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|(s, t, l)| match l {
                Some(l) => json!([s, t, l]),
                None => json!([s, t]),
            }).collect::<Vec<_>>(),
        })
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Dot => self.to_dot(),
            Format::Tikz => self.to_tikz(),
            Format::Json => pretty(&self.to_json()),
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialise");
    s.push('\n');
    s
}

fn node(t: &IndexTuple) -> (String, String) {
    (t.key(), t.label())
}

/// Arrows `(source, target)` by object index, in lexicographic order.
pub fn arrows<C: FiniteCategory + ?Sized>(model: &C, policy: ArrowPolicy) -> Vec<(usize, usize)> {
    let size = model.objects().len();
    let mut out = Vec::new();
    for x in 0..size {
        for y in 0..size {
            if x == y || !model.hom_idx(x, y) {
                continue;
            }
            let factors = policy == ArrowPolicy::Irreducible
                && (0..size).any(|z| {
                    z != x && z != y && model.hom_idx(x, z) && model.hom_idx(z, y) && model.compose_idx(x, z, y)
                });
            if !factors {
                out.push((x, y));
            }
        }
    }
    out
}

pub fn quiver_graph(q: &Quiver) -> Graph {
    Graph {
        nodes: q.vertices.iter().map(node).collect(),
        edges: q.arrows.iter().map(|a| (a.source.key(), a.target.key(), None)).collect(),
    }
}

pub fn category_graph<C: FiniteCategory + ?Sized>(model: &C, policy: ArrowPolicy) -> Graph {
    let objs = model.objects();
    Graph {
        nodes: objs.iter().map(node).collect(),
        edges: arrows(model, policy).into_iter().map(|(x, y)| (objs[x].key(), objs[y].key(), None)).collect(),
    }
}

pub fn mutation_graph_graph(g: &MutationGraph) -> Graph {
    let id = |i: usize| g.nodes[i].summands().iter().map(IndexTuple::key).collect::<Vec<_>>().join(" ");
    Graph {
        nodes: (0..g.nodes.len()).map(|i| (id(i), g.nodes[i].label())).collect(),
        edges: g
            .edges
            .iter()
            .map(|e| (id(e.from), id(e.to), Some(format!("{}/{}", e.removed.label(), e.added.label()))))
            .collect(),
    }
}

/// Summands as nodes, non-zero differential entries as signed edges. Node ids
/// carry the position, `p:a,b,c`, so a tuple may occur at several positions.
pub fn exangle_graph(e: &Exangle) -> Graph {
    let terms = e.terms();
    let id = |p: usize, t: &IndexTuple| format!("{p}:{}", t.key());
    let nodes =
        terms.iter().enumerate().flat_map(|(p, term)| term.iter().map(move |t| (id(p, t), t.label()))).collect();
    let mut edges = Vec::new();
    for (k, dk) in e.differentials().iter().enumerate() {
        for (i, target) in dk.target().iter().enumerate() {
            for (j, source) in dk.source().iter().enumerate() {
                let v = dk.get(i, j);
                if v != 0 {
                    edges.push((id(k, source), id(k + 1, target), Some(v.to_string())));
                }
            }
        }
    }
    Graph { nodes, edges }
}

pub fn emit_quiver(q: &Quiver, format: Format) -> String {
    match format {
        Format::Json => pretty(&serde_json::to_value(q).expect("quivers serialise")),
        _ => quiver_graph(q).render(format),
    }
}

pub fn emit_category<C: FiniteCategory + ?Sized>(model: &C, format: Format, policy: ArrowPolicy) -> String {
    category_graph(model, policy).render(format)
}

pub fn emit_mutation_graph(g: &MutationGraph, format: Format) -> String {
    match format {
        Format::Json => pretty(&serde_json::to_value(g).expect("graphs serialise")),
        _ => mutation_graph_graph(g).render(format),
    }
}

pub fn emit_exangle(e: &Exangle, format: Format) -> String {
    match format {
        Format::Json => pretty(&e.to_json()),
        _ => exangle_graph(e).render(format),
    }
}

pub fn emit_report(run: &GridRun, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(pretty(&run.to_json())),
        _ => Err(Error::InvalidEmit("reports are only emitted as json".into())),
    }
}
