use std::collections::HashSet;

use super::{Diagram, Node, NodeKind, SlotRef};
use crate::{Error, Result};

const UNLINKED: SlotRef = SlotRef { node: usize::MAX, slot: usize::MAX };

/// Mutable working copy of a diagram used by the local rewrites.
///
/// Removed nodes leave holes until [`Draft::finish`] compacts indices, so
/// slot references taken before a rewrite stay meaningful during it.
#[derive(Debug, Clone)]
pub(crate) struct Draft {
    nodes: Vec<Option<Node>>,
    pub free_loops: usize,
}

impl Draft {
    pub fn new() -> Self {
        Draft { nodes: Vec::new(), free_loops: 0 }
    }

    pub fn from_diagram(d: &Diagram) -> Self {
        Draft { nodes: d.nodes().iter().cloned().map(Some).collect(), free_loops: d.free_loops() }
    }

    pub fn add_node(&mut self, kind: NodeKind, degree: usize) -> usize {
        self.nodes.push(Some(Node { kind, links: vec![UNLINKED; degree] }));
        self.nodes.len() - 1
    }

    /// Appends every node of `d`, returning the index offset.
    pub fn append(&mut self, d: &Diagram) -> usize {
        let off = self.nodes.len();
        for n in d.nodes() {
            let links = n.links.iter().map(|t| SlotRef::new(t.node + off, t.slot)).collect();
            self.nodes.push(Some(Node { kind: n.kind, links }));
        }
        self.free_loops += d.free_loops();
        off
    }

    pub fn node(&self, i: usize) -> &Node {
        self.nodes[i].as_ref().expect("live node")
    }

    pub fn mate(&self, s: SlotRef) -> SlotRef {
        self.node(s.node).links[s.slot]
    }

    pub fn link(&mut self, a: SlotRef, b: SlotRef) {
        self.nodes[a.node].as_mut().expect("live node").links[a.slot] = b;
        self.nodes[b.node].as_mut().expect("live node").links[b.slot] = a;
    }

    pub fn remove(&mut self, i: usize) {
        self.nodes[i] = None;
    }

    /// Deletes the given crossings and joins the strands running through
    /// them straight across. Strands closing up inside become free loops.
    pub fn splice_out(&mut self, crossings: &[usize]) {
        self.splice_out_with(crossings, |s| SlotRef::new(s.node, (s.slot + 2) % 4));
    }

    /// Deletes `removed` nodes; a strand entering a removed slot `s` leaves
    /// through `through(s)`, which must be an involution on removed slots.
    pub fn splice_out_with(&mut self, removed: &[usize], through: impl Fn(SlotRef) -> SlotRef) {
        let gone: HashSet<usize> = removed.iter().copied().collect();
        let mut visited: HashSet<SlotRef> = HashSet::new();
        let mut ends = Vec::new();
        for (i, n) in self.nodes.iter().enumerate() {
            let Some(n) = n else { continue };
            if gone.contains(&i) {
                continue;
            }
            for (j, t) in n.links.iter().enumerate() {
                if gone.contains(&t.node) {
                    ends.push(SlotRef::new(i, j));
                }
            }
        }
        for x in ends {
            let mut cur = self.mate(x);
            if !gone.contains(&cur.node) {
                continue; // already joined from the other end
            }
            loop {
                visited.insert(cur);
                let out = through(cur);
                visited.insert(out);
                let next = self.mate(out);
                if !gone.contains(&next.node) {
                    self.link(x, next);
                    break;
                }
                cur = next;
            }
        }
        for &c in removed {
            for j in 0..self.node(c).degree() {
                let start = SlotRef::new(c, j);
                if visited.contains(&start) {
                    continue;
                }
                let mut cur = start;
                while visited.insert(cur) {
                    let out = through(cur);
                    visited.insert(out);
                    cur = self.mate(out);
                }
                self.free_loops += 1;
            }
        }
        for &c in removed {
            self.remove(c);
        }
    }

    /// Compacts node indices (preserving order) and validates.
    pub fn finish(self) -> Result<Diagram> {
        let d = self.finish_unchecked()?;
        d.validate()?;
        Ok(d)
    }

    pub fn finish_unchecked(self) -> Result<Diagram> {
        let mut index = vec![usize::MAX; self.nodes.len()];
        let mut k = 0;
        for (i, n) in self.nodes.iter().enumerate() {
            if n.is_some() {
                index[i] = k;
                k += 1;
            }
        }
        let mut nodes = Vec::with_capacity(k);
        for n in self.nodes.into_iter().flatten() {
            let mut links = Vec::with_capacity(n.links.len());
            for t in n.links {
                if t == UNLINKED || index.get(t.node).copied().unwrap_or(usize::MAX) == usize::MAX {
                    return Err(Error::Topology("dangling slot after rewrite".into()));
                }
                links.push(SlotRef::new(index[t.node], t.slot));
            }
            nodes.push(Node { kind: n.kind, links });
        }
        Ok(Diagram::from_parts_unchecked(nodes, self.free_loops))
    }
}
