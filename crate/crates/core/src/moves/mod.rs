//! Local moves on diagrams and the bounded searches built from them.
//!
//! Every move names its site by slots of the diagram it applies to. Applying
//! a move re-validates the result, so a site that does not fit fails with
//! [`Error::MoveNotApplicable`].

mod descending;
mod rewrite;
mod search;

use serde::{Deserialize, Serialize};

use crate::diagram::{ArcRef, Diagram, KeyMode, NodeKind, Over, SlotRef};
use crate::{Error, Result};

pub use descending::descending_diagram;
pub use search::{
    cc_equivalent_within, equivalent_within, replay, simplify, Budget, Path, SimplifyOutcome,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoveKind {
    R1Add,
    R1Remove,
    R2Add,
    R2Remove,
    R3,
    R5Twist,
    R5Untwist,
    CrossingChange,
    VertexSlide,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum MoveSite {
    /// Kink on an arc, on the side selected by `mirrored`.
    R1Add { arc: ArcRef, mirrored: bool, over: Over },
    /// Kink at `crossing` whose slots `slot` and `slot + 1` are joined.
    R1Remove { crossing: usize, slot: usize },
    /// Push the dart `a` over (`a_over`) or under the dart `b` of the same
    /// face. When both name one arc, `b_first` picks which part leads.
    R2Add { a: ArcRef, b: ArcRef, a_over: bool, b_first: bool },
    /// Bigon with arcs `first`-`second` and `first - 1`-`second + 1`.
    R2Remove { first: SlotRef, second: SlotRef },
    /// Triangle face starting at this dart.
    R3 { dart: SlotRef },
    /// Half twist of the edges at `slot - 1` and `slot` of a vertex.
    R5Twist { vertex_slot: SlotRef, over: Over },
    R5Untwist { vertex_slot: SlotRef },
    CrossingChange { crossing: usize },
    /// Strand crossing `count` consecutive edges from `vertex_slot` on
    /// slid across the vertex. A strand around every edge is pulled off.
    VertexSlide { vertex_slot: SlotRef, count: usize },
    /// The arc at `arc`, in the face before `vertex_slot`, slid across the
    /// vertex so that it crosses every edge.
    VertexWrap { vertex_slot: SlotRef, arc: SlotRef, reversed: bool, over: Over },
}

impl MoveSite {
    pub fn kind(&self) -> MoveKind {
        match self {
            MoveSite::R1Add { .. } => MoveKind::R1Add,
            MoveSite::R1Remove { .. } => MoveKind::R1Remove,
            MoveSite::R2Add { .. } => MoveKind::R2Add,
            MoveSite::R2Remove { .. } => MoveKind::R2Remove,
            MoveSite::R3 { .. } => MoveKind::R3,
            MoveSite::R5Twist { .. } => MoveKind::R5Twist,
            MoveSite::R5Untwist { .. } => MoveKind::R5Untwist,
            MoveSite::CrossingChange { .. } => MoveKind::CrossingChange,
            MoveSite::VertexSlide { .. } | MoveSite::VertexWrap { .. } => MoveKind::VertexSlide,
        }
    }
}

/// Applies a move. In [`KeyMode::Shadow`] over/under conditions are ignored.
pub fn apply_in(d: &Diagram, site: &MoveSite, mode: KeyMode) -> Result<Diagram> {
    let shadow = mode == KeyMode::Shadow;
    match *site {
        MoveSite::R1Add { arc, mirrored, over } => rewrite::r1_add(d, arc, mirrored, over),
        MoveSite::R1Remove { crossing, slot } => rewrite::r1_remove(d, crossing, slot),
        MoveSite::R2Add { a, b, a_over, b_first } => rewrite::r2_add(d, a, b, a_over, b_first),
        MoveSite::R2Remove { first, second } => rewrite::r2_remove(d, first, second, shadow),
        MoveSite::R3 { dart } => rewrite::r3(d, dart, shadow),
        MoveSite::R5Twist { vertex_slot, over } => rewrite::r5_twist(d, vertex_slot, over),
        MoveSite::R5Untwist { vertex_slot } => rewrite::r5_untwist(d, vertex_slot),
        MoveSite::CrossingChange { crossing } => d
            .with_crossing_changed(crossing)
            .map_err(|_| Error::MoveNotApplicable(format!("node {crossing} is not a crossing"))),
        MoveSite::VertexSlide { vertex_slot, count } => rewrite::vertex_slide(d, vertex_slot, count, shadow),
        MoveSite::VertexWrap { vertex_slot, arc, reversed, over } => {
            rewrite::vertex_wrap(d, vertex_slot, arc, reversed, over)
        }
    }
}

pub fn apply(d: &Diagram, site: &MoveSite) -> Result<Diagram> {
    apply_in(d, site, KeyMode::Full)
}

fn is_crossing_slot(d: &Diagram, s: SlotRef) -> bool {
    d.node(s.node).is_crossing()
}

/// Candidate sites of every isotopy move (crossing changes excluded). In
/// shadow mode over/under variants collapse to one.
pub fn enumerate_moves(d: &Diagram, mode: KeyMode) -> Vec<MoveSite> {
    let overs: &[Over] = match mode {
        KeyMode::Full => &[Over::Even, Over::Odd],
        KeyMode::Shadow => &[Over::Even],
    };
    let a_overs: &[bool] = match mode {
        KeyMode::Full => &[true, false],
        KeyMode::Shadow => &[true],
    };
    let mut out = Vec::new();
    let arcs = d.arcs();

    // R1
    for &over in overs {
        for &(s, _) in &arcs {
            for mirrored in [false, true] {
                out.push(MoveSite::R1Add { arc: ArcRef::Slot(s), mirrored, over });
            }
        }
        if d.free_loops() > 0 {
            out.push(MoveSite::R1Add { arc: ArcRef::FreeLoop, mirrored: false, over });
        }
    }
    for c in d.crossings() {
        for slot in 0..4 {
            if d.mate(SlotRef::new(c, slot)) == SlotRef::new(c, (slot + 1) % 4) {
                out.push(MoveSite::R1Remove { crossing: c, slot });
            }
        }
    }

    // R2
    let faces = d.faces();
    for face in &faces {
        for i in 0..face.len() {
            for j in i + 1..face.len() {
                let (a, b) = (face[i], face[j]);
                let same_arc = d.mate(a) == b;
                for &a_over in a_overs {
                    for b_first in if same_arc { &[false, true][..] } else { &[false][..] } {
                        out.push(MoveSite::R2Add { a: ArcRef::Slot(a), b: ArcRef::Slot(b), a_over, b_first: *b_first });
                    }
                }
            }
        }
    }
    if d.free_loops() > 0 {
        for &a_over in a_overs {
            for s in d.slots() {
                out.push(MoveSite::R2Add { a: ArcRef::FreeLoop, b: ArcRef::Slot(s), a_over, b_first: false });
            }
            if d.free_loops() > 1 {
                out.push(MoveSite::R2Add { a: ArcRef::FreeLoop, b: ArcRef::FreeLoop, a_over, b_first: false });
            }
        }
    }
    for c1 in d.crossings() {
        for p in 0..4 {
            let first = SlotRef::new(c1, p);
            let second = d.mate(first);
            if second.node == c1 || !is_crossing_slot(d, second) {
                continue;
            }
            if d.mate(SlotRef::new(c1, (p + 3) % 4)) == SlotRef::new(second.node, (second.slot + 1) % 4) {
                out.push(MoveSite::R2Remove { first, second });
            }
        }
    }

    // R3
    for face in &faces {
        if face.len() == 3 && face.iter().all(|&s| is_crossing_slot(d, s)) {
            let nodes = [face[0].node, face[1].node, face[2].node];
            if nodes[0] != nodes[1] && nodes[1] != nodes[2] && nodes[0] != nodes[2] {
                out.push(MoveSite::R3 { dart: face[0] });
            }
        }
    }

    // vertex moves
    let faces = d.faces();
    let mut face_of = std::collections::HashMap::new();
    for (i, f) in faces.iter().enumerate() {
        for &s in f {
            face_of.insert(s, i);
        }
    }
    for v in d.vertices() {
        let deg = d.node(v).degree();
        for p in 0..deg {
            let vs = SlotRef::new(v, p);
            let prev = SlotRef::new(v, (p + deg - 1) % deg);
            if deg >= 2 && d.mate(prev) != vs {
                for &over in overs {
                    out.push(MoveSite::R5Twist { vertex_slot: vs, over });
                }
            }
            let m = d.mate(vs);
            if deg >= 2 && is_crossing_slot(d, m) && d.mate(prev) == SlotRef::new(m.node, (m.slot + 1) % 4) {
                out.push(MoveSite::R5Untwist { vertex_slot: vs });
            }
            for count in 1..=deg {
                if rewrite::slide_fan(d, vs, count).is_some() {
                    out.push(MoveSite::VertexSlide { vertex_slot: vs, count });
                }
            }
            if let Some(&f) = face_of.get(&vs) {
                for &arc in &faces[f] {
                    if arc.node == v || d.mate(arc).node == v {
                        continue;
                    }
                    for &over in overs {
                        for reversed in [false, true] {
                            out.push(MoveSite::VertexWrap { vertex_slot: vs, arc, reversed, over });
                        }
                    }
                }
            }
        }
    }
    out
}

/// Crossing changes available in `d`.
pub fn crossing_changes(d: &Diagram) -> Vec<MoveSite> {
    d.crossings().map(|crossing| MoveSite::CrossingChange { crossing }).collect()
}

pub(crate) fn over_of(d: &Diagram, c: usize) -> Over {
    match d.node(c).kind {
        NodeKind::Crossing(o) => o,
        NodeKind::Vertex { .. } => unreachable!("not a crossing"),
    }
}

#[cfg(test)]
mod tests;
