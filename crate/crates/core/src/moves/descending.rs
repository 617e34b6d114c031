use crate::diagram::{Diagram, NodeKind, Over};

/// Same shadow with over/under data reset so that, walking edges in order
/// (each from its lower endpoint) and then closed strands, every crossing
/// is first met on its over strand.
pub fn descending_diagram(d: &Diagram) -> Diagram {
    let strands = d.strands();
    let mut set = vec![false; d.nodes().len()];
    let mut out = d.clone();
    let passes = strands.edges.iter().flat_map(|t| t.passes.iter()).chain(strands.closed.iter().flatten());
    for p in passes {
        if !set[p.crossing] {
            set[p.crossing] = true;
            out.nodes_mut()[p.crossing].kind = NodeKind::Crossing(Over::through(p.entry));
        }
    }
    out
}
