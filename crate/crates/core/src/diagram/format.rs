//! Text and JSON forms of diagrams.
//!
//! ```text
//! diagram
//! vertex <id> <degree>      # node 0, 1, ... in order of appearance
//! crossing 02|13            # over strand through slots 0-2 or 1-3
//! loop                      # crossing-free circle, takes no node index
//! arc <node>.<slot> <node>.<slot>
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Diagram, Node, NodeKind, Over, SlotRef};
use crate::{Error, Result};

const PLACEHOLDER: SlotRef = SlotRef { node: usize::MAX, slot: usize::MAX };

impl Diagram {
    pub fn parse(text: &str) -> Result<Diagram> {
        let mut header = false;
        let mut nodes: Vec<Node> = Vec::new();
        let mut loops = 0;
        let mut arcs = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let line_no = lineno + 1;
            let syntax = |msg: &str| Error::Syntax { line: line_no, msg: msg.to_string() };
            let toks: Vec<&str> = line.split_whitespace().collect();
            if !header {
                if toks != ["diagram"] {
                    return Err(syntax("expected `diagram` header"));
                }
                header = true;
                continue;
            }
            match toks.as_slice() {
                ["vertex", id, deg] => {
                    let label = id.parse().map_err(|_| syntax("bad vertex id"))?;
                    let deg: usize = deg.parse().map_err(|_| syntax("bad degree"))?;
                    nodes.push(Node { kind: NodeKind::Vertex { label }, links: vec![PLACEHOLDER; deg] });
                }
                ["crossing", o] => {
                    let over = match *o {
                        "02" => Over::Even,
                        "13" => Over::Odd,
                        _ => return Err(Error::Topology(format!("line {line_no}: over must be 02 or 13"))),
                    };
                    nodes.push(Node { kind: NodeKind::Crossing(over), links: vec![PLACEHOLDER; 4] });
                }
                ["loop"] => loops += 1,
                ["arc", a, b] => {
                    let a = parse_slot(a).ok_or_else(|| syntax("bad slot, expected <node>.<slot>"))?;
                    let b = parse_slot(b).ok_or_else(|| syntax("bad slot, expected <node>.<slot>"))?;
                    arcs.push((line_no, a, b));
                }
                _ => return Err(syntax("unrecognised line")),
            }
        }
        if !header {
            return Err(Error::Syntax { line: 0, msg: "empty input".into() });
        }
        for (line_no, a, b) in arcs {
            for s in [a, b] {
                if s.node >= nodes.len() || s.slot >= nodes[s.node].degree() {
                    return Err(Error::Topology(format!("line {line_no}: no slot {s}")));
                }
            }
            for (s, t) in [(a, b), (b, a)] {
                let cell = &mut nodes[s.node].links[s.slot];
                if *cell != PLACEHOLDER {
                    return Err(Error::Topology(format!("line {line_no}: slot {s} used twice")));
                }
                *cell = t;
            }
        }
        for (i, n) in nodes.iter().enumerate() {
            if let Some(j) = n.links.iter().position(|&t| t == PLACEHOLDER) {
                return Err(Error::Topology(format!("slot {i}.{j} has no arc")));
            }
        }
        Diagram::from_parts(nodes, loops)
    }

    pub fn to_json(&self) -> DiagramJson {
        DiagramJson {
            nodes: self
                .nodes()
                .iter()
                .map(|n| match n.kind {
                    NodeKind::Vertex { label } => NodeJson::Vertex { id: label, degree: n.degree() },
                    NodeKind::Crossing(o) => NodeJson::Crossing { over: over_str(o).to_string() },
                })
                .collect(),
            loops: self.free_loops(),
            arcs: self.arcs().into_iter().map(|(a, b)| [a.node, a.slot, b.node, b.slot]).collect(),
        }
    }

    pub fn from_json(j: &DiagramJson) -> Result<Diagram> {
        // Reuse the text validator so both forms reject the same inputs.
        let mut text = String::from("diagram\n");
        for n in &j.nodes {
            match n {
                NodeJson::Vertex { id, degree } => text += &format!("vertex {id} {degree}\n"),
                NodeJson::Crossing { over } => text += &format!("crossing {over}\n"),
            }
        }
        for _ in 0..j.loops {
            text += "loop\n";
        }
        for a in &j.arcs {
            text += &format!("arc {}.{} {}.{}\n", a[0], a[1], a[2], a[3]);
        }
        Diagram::parse(&text)
    }
}

fn over_str(o: Over) -> &'static str {
    match o {
        Over::Even => "02",
        Over::Odd => "13",
    }
}

fn parse_slot(s: &str) -> Option<SlotRef> {
    let (n, k) = s.split_once('.')?;
    Some(SlotRef::new(n.parse().ok()?, k.parse().ok()?))
}

/// Canonical text: nodes in index order, loops, then arcs sorted.
impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "diagram")?;
        for n in self.nodes() {
            match n.kind {
                NodeKind::Vertex { label } => writeln!(f, "vertex {label} {}", n.degree())?,
                NodeKind::Crossing(o) => writeln!(f, "crossing {}", over_str(o))?,
            }
        }
        for _ in 0..self.free_loops() {
            writeln!(f, "loop")?;
        }
        for (a, b) in self.arcs() {
            writeln!(f, "arc {a} {b}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramJson {
    pub nodes: Vec<NodeJson>,
    #[serde(default)]
    pub loops: usize,
    pub arcs: Vec<[usize; 4]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NodeJson {
    Vertex { id: usize, degree: usize },
    Crossing { over: String },
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknot_forms() {
        let free = Diagram::parse("diagram\nloop\n").unwrap();
        assert_eq!(free.free_loops(), 1);
        let vertex = Diagram::parse("diagram\nvertex 0 2\narc 0.0 0.1\n").unwrap();
        assert_eq!(vertex.nodes().len(), 1);
    }

    #[test]
    fn errors() {
        assert!(matches!(Diagram::parse("graph 3"), Err(Error::Syntax { .. })));
        assert!(matches!(Diagram::parse("diagram\ncrossing 01\n"), Err(Error::Topology(_))));
        assert!(matches!(Diagram::parse("diagram\nvertex 0 2\n"), Err(Error::Topology(_))));
        assert!(matches!(
            Diagram::parse("diagram\nvertex 0 2\narc 0.0 0.1\narc 0.1 0.0\n"),
            Err(Error::Topology(_))
        ));
        assert!(matches!(Diagram::parse("diagram\narc 0.x 1.1\n"), Err(Error::Syntax { line: 2, .. })));
    }

    #[test]
    fn json_mirror() {
        let d = Diagram::parse("diagram\nvertex 3 2\ncrossing 13\nloop\narc 0.0 1.0\narc 0.1 1.3\narc 1.1 1.2\n")
            .unwrap();
        let j = serde_json::to_string(&d.to_json()).unwrap();
        let back: DiagramJson = serde_json::from_str(&j).unwrap();
        assert_eq!(Diagram::from_json(&back).unwrap(), d);
    }
}
