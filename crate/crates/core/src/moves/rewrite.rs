use super::over_of;
use crate::diagram::{ArcRef, Diagram, Draft, NodeKind, Over, SlotRef};
use crate::{Error, Result};

fn not_applicable(msg: impl Into<String>) -> Error {
    Error::MoveNotApplicable(msg.into())
}

fn finish(draft: Draft) -> Result<Diagram> {
    draft.finish().map_err(|e| not_applicable(format!("result is not a plane diagram: {e}")))
}

fn crossing_node(d: &Diagram, n: usize) -> Result<()> {
    if n < d.nodes().len() && d.node(n).is_crossing() {
        Ok(())
    } else {
        Err(not_applicable(format!("node {n} is not a crossing")))
    }
}

fn slot_in(d: &Diagram, s: SlotRef) -> Result<()> {
    if s.node < d.nodes().len() && s.slot < d.node(s.node).degree() {
        Ok(())
    } else {
        Err(not_applicable(format!("no slot {s}")))
    }
}

fn at(s: SlotRef, delta: usize) -> SlotRef {
    SlotRef::new(s.node, (s.slot + delta) % 4)
}

pub(super) fn r1_add(d: &Diagram, arc: ArcRef, mirrored: bool, over: Over) -> Result<Diagram> {
    let mut draft = Draft::from_diagram(d);
    match arc {
        ArcRef::FreeLoop => {
            if d.free_loops() == 0 {
                return Err(not_applicable("no free loop"));
            }
            let c = draft.add_node(NodeKind::Crossing(over), 4);
            draft.link(SlotRef::new(c, 0), SlotRef::new(c, 1));
            draft.link(SlotRef::new(c, 2), SlotRef::new(c, 3));
            draft.free_loops -= 1;
        }
        ArcRef::Slot(s) => {
            slot_in(d, s)?;
            let t = d.mate(s);
            let c = draft.add_node(NodeKind::Crossing(over), 4);
            draft.link(s, SlotRef::new(c, 0));
            let (kink, exit) = if mirrored { (1, 3) } else { (3, 1) };
            draft.link(SlotRef::new(c, 2), SlotRef::new(c, kink));
            draft.link(SlotRef::new(c, exit), t);
        }
    }
    finish(draft)
}

pub(super) fn r1_remove(d: &Diagram, c: usize, slot: usize) -> Result<Diagram> {
    crossing_node(d, c)?;
    let s = SlotRef::new(c, slot % 4);
    if d.mate(s) != at(s, 1) {
        return Err(not_applicable(format!("no kink at {s}")));
    }
    let mut draft = Draft::from_diagram(d);
    draft.splice_out(&[c]);
    finish(draft)
}

/// Links `pairs` after adding two crossings with the given over data.
fn two_crossings(d: &Diagram, over: Over, loops_used: usize) -> (Draft, usize, usize) {
    let mut draft = Draft::from_diagram(d);
    let c1 = draft.add_node(NodeKind::Crossing(over), 4);
    let c2 = draft.add_node(NodeKind::Crossing(over), 4);
    draft.free_loops -= loops_used;
    (draft, c1, c2)
}

fn same_face(d: &Diagram, a: SlotRef, b: SlotRef) -> bool {
    d.faces().iter().any(|f| f.contains(&a) && f.contains(&b))
}

pub(super) fn r2_add(d: &Diagram, a: ArcRef, b: ArcRef, a_over: bool, b_first: bool) -> Result<Diagram> {
    // The A strand runs through odd slots, the B strand through even ones.
    let over = if a_over { Over::Odd } else { Over::Even };
    let s = SlotRef::new;
    match (a, b) {
        (ArcRef::Slot(_), ArcRef::FreeLoop) => r2_add(d, b, a, !a_over, b_first),
        (ArcRef::FreeLoop, ArcRef::FreeLoop) => {
            if d.free_loops() < 2 {
                return Err(not_applicable("need two free loops"));
            }
            let (mut draft, c1, c2) = two_crossings(d, over, 2);
            draft.link(s(c1, 3), s(c2, 3));
            draft.link(s(c2, 1), s(c1, 1));
            draft.link(s(c2, 2), s(c1, 0));
            draft.link(s(c1, 2), s(c2, 0));
            finish(draft)
        }
        (ArcRef::FreeLoop, ArcRef::Slot(b0)) => {
            if d.free_loops() == 0 {
                return Err(not_applicable("no free loop"));
            }
            slot_in(d, b0)?;
            let b1 = d.mate(b0);
            let (mut draft, c1, c2) = two_crossings(d, over, 1);
            draft.link(s(c1, 1), s(c2, 1));
            draft.link(s(c1, 3), s(c2, 3));
            draft.link(b0, s(c2, 0));
            draft.link(s(c2, 2), s(c1, 0));
            draft.link(s(c1, 2), b1);
            finish(draft)
        }
        (ArcRef::Slot(a0), ArcRef::Slot(b0)) => {
            slot_in(d, a0)?;
            slot_in(d, b0)?;
            if a0 == b0 || !same_face(d, a0, b0) {
                return Err(not_applicable("darts do not share a face"));
            }
            let (a1, b1) = (d.mate(a0), d.mate(b0));
            let (mut draft, c1, c2) = two_crossings(d, over, 0);
            if b0 == a1 {
                if b_first {
                    draft.link(a0, s(c1, 2));
                    draft.link(s(c1, 0), s(c2, 2));
                    draft.link(s(c2, 0), s(c1, 1));
                    draft.link(s(c1, 3), s(c2, 3));
                    draft.link(s(c2, 1), a1);
                } else {
                    draft.link(a0, s(c1, 1));
                    draft.link(s(c1, 3), s(c2, 3));
                    draft.link(s(c2, 1), s(c1, 2));
                    draft.link(s(c1, 0), s(c2, 2));
                    draft.link(s(c2, 0), a1);
                }
            } else {
                draft.link(a0, s(c1, 1));
                draft.link(s(c1, 3), s(c2, 3));
                draft.link(s(c2, 1), a1);
                draft.link(b0, s(c2, 0));
                draft.link(s(c2, 2), s(c1, 0));
                draft.link(s(c1, 2), b1);
            }
            finish(draft)
        }
    }
}

pub(super) fn r2_remove(d: &Diagram, first: SlotRef, second: SlotRef, shadow: bool) -> Result<Diagram> {
    crossing_node(d, first.node)?;
    crossing_node(d, second.node)?;
    let (c1, c2) = (first.node, second.node);
    if c1 == c2 || d.mate(first) != second || d.mate(at(first, 3)) != at(second, 1) {
        return Err(not_applicable(format!("no bigon at {first} {second}")));
    }
    if !shadow && over_of(d, c1).contains(first.slot % 4) != over_of(d, c2).contains(second.slot % 4) {
        return Err(not_applicable("bigon strands alternate"));
    }
    let mut draft = Draft::from_diagram(d);
    draft.splice_out(&[c1, c2]);
    finish(draft)
}

pub(super) fn r3(d: &Diagram, dart: SlotRef, shadow: bool) -> Result<Diagram> {
    crossing_node(d, dart.node)?;
    let bad = || not_applicable(format!("no triangle at {dart}"));
    let xp = SlotRef::new(dart.node, dart.slot % 4);
    let yq = d.mate(xp);
    if !d.node(yq.node).is_crossing() {
        return Err(bad());
    }
    let zr = d.mate(at(yq, 1));
    if !d.node(zr.node).is_crossing() || d.mate(at(zr, 1)) != at(xp, 3) {
        return Err(bad());
    }
    let (x, y, z) = (xp.node, yq.node, zr.node);
    if x == y || y == z || x == z {
        return Err(bad());
    }
    // strands: alpha through x-y, beta through y-z, gamma through z-x
    let ag = over_of(d, x).contains(xp.slot);
    let ab = over_of(d, y).contains(yq.slot);
    let bg = over_of(d, z).contains(zr.slot);
    if !shadow && ab == bg && bg != ag {
        return Err(not_applicable("triangle over/under data is cyclic"));
    }
    let pick = |b: bool, yes: Over| if b { yes } else { yes.flip() };
    let mut draft = Draft::from_diagram(d);
    let nx = draft.add_node(NodeKind::Crossing(pick(ag, Over::Odd)), 4);
    let ny = draft.add_node(NodeKind::Crossing(pick(ab, Over::Even)), 4);
    let nz = draft.add_node(NodeKind::Crossing(pick(bg, Over::Even)), 4);
    let s = SlotRef::new;
    let ext = [
        (at(zr, 3), s(nx, 2)),
        (at(yq, 2), s(nx, 3)),
        (at(xp, 2), s(ny, 2)),
        (at(zr, 2), s(ny, 3)),
        (at(yq, 3), s(nz, 2)),
        (at(xp, 1), s(nz, 3)),
    ];
    for &(old, new) in &ext {
        let m = d.mate(old);
        let target = ext.iter().find(|(o, _)| *o == m).map_or(m, |&(_, n)| n);
        draft.link(new, target);
    }
    draft.link(s(nx, 1), s(ny, 0));
    draft.link(s(ny, 1), s(nz, 0));
    draft.link(s(nz, 1), s(nx, 0));
    for c in [x, y, z] {
        draft.remove(c);
    }
    finish(draft)
}

fn vertex_slot(d: &Diagram, vs: SlotRef) -> Result<usize> {
    slot_in(d, vs)?;
    let deg = d.node(vs.node).degree();
    if d.node(vs.node).is_crossing() || deg < 2 {
        return Err(not_applicable(format!("{vs} is not a slot of a vertex of degree at least 2")));
    }
    Ok(deg)
}

pub(super) fn r5_twist(d: &Diagram, vs: SlotRef, over: Over) -> Result<Diagram> {
    let deg = vertex_slot(d, vs)?;
    let prev = SlotRef::new(vs.node, (vs.slot + deg - 1) % deg);
    if deg < 2 {
        return Err(not_applicable("vertex of degree one"));
    }
    if d.mate(prev) == vs {
        return Err(not_applicable("edges form a loop"));
    }
    let (x, y) = (d.mate(prev), d.mate(vs));
    let mut draft = Draft::from_diagram(d);
    let c = draft.add_node(NodeKind::Crossing(over), 4);
    draft.link(SlotRef::new(c, 0), vs);
    draft.link(SlotRef::new(c, 1), prev);
    draft.link(SlotRef::new(c, 2), x);
    draft.link(SlotRef::new(c, 3), y);
    finish(draft)
}

pub(super) fn r5_untwist(d: &Diagram, vs: SlotRef) -> Result<Diagram> {
    let deg = vertex_slot(d, vs)?;
    let prev = SlotRef::new(vs.node, (vs.slot + deg - 1) % deg);
    let cq = d.mate(vs);
    if !d.node(cq.node).is_crossing() || d.mate(prev) != at(cq, 1) {
        return Err(not_applicable(format!("no twist at {vs}")));
    }
    let (t1, t2) = (d.mate(at(cq, 2)), d.mate(at(cq, 3)));
    let mut draft = Draft::from_diagram(d);
    draft.remove(cq.node);
    if t1 == at(cq, 3) {
        draft.link(prev, vs);
    } else {
        draft.link(prev, t1);
        draft.link(vs, t2);
    }
    finish(draft)
}

/// Strand crossing consecutive edges next to a vertex.
pub(super) struct Fan {
    crossings: Vec<usize>,
    /// Slot of each crossing facing the vertex.
    facing: Vec<usize>,
    enter: SlotRef,
    leave: SlotRef,
    over: Vec<bool>,
}

impl Fan {
    fn role(&self, i: usize, r: usize) -> SlotRef {
        SlotRef::new(self.crossings[i], (self.facing[i] + 2 + r) % 4)
    }
}

pub(super) fn slide_fan(d: &Diagram, vs: SlotRef, count: usize) -> Option<Fan> {
    let v = vs.node;
    let deg = d.node(v).degree();
    if d.node(v).is_crossing() || count == 0 || count > deg {
        return None;
    }
    let vslot = |i: isize| SlotRef::new(v, (vs.slot as isize + i).rem_euclid(deg as isize) as usize);
    let mut fan = Fan { crossings: Vec::new(), facing: Vec::new(), enter: vs, leave: vs, over: Vec::new() };
    for i in 0..count {
        let m = d.mate(vslot(i as isize));
        if !d.node(m.node).is_crossing() || fan.crossings.contains(&m.node) {
            return None;
        }
        fan.crossings.push(m.node);
        fan.facing.push(m.slot);
    }
    for i in 0..count - 1 {
        if d.mate(fan.role(i, 1)) != fan.role(i + 1, 3) {
            return None;
        }
    }
    fan.enter = d.mate(fan.role(0, 3));
    fan.leave = d.mate(fan.role(count - 1, 1));
    let foreign = |s: SlotRef| s.node != v && !fan.crossings.contains(&s.node);
    if !foreign(fan.enter) || !foreign(fan.leave) {
        return None;
    }
    if (0..count).any(|i| !foreign(d.mate(fan.role(i, 0)))) {
        return None;
    }
    if (1..=deg - count).any(|l| !foreign(d.mate(vslot(-(l as isize))))) {
        return None;
    }
    fan.over = (0..count).map(|i| over_of(d, fan.crossings[i]).contains(fan.role(i, 1).slot)).collect();
    Some(fan)
}

pub(super) fn vertex_slide(d: &Diagram, vs: SlotRef, count: usize, shadow: bool) -> Result<Diagram> {
    slot_in(d, vs)?;
    let fan = slide_fan(d, vs, count).ok_or_else(|| not_applicable(format!("no slidable strand at {vs}")))?;
    let s_over = fan.over[0];
    if !shadow && fan.over.iter().any(|&o| o != s_over) {
        return Err(not_applicable("strand is neither all over nor all under"));
    }
    let v = vs.node;
    let deg = d.node(v).degree();
    let vslot = |i: isize| SlotRef::new(v, (vs.slot as isize + i).rem_euclid(deg as isize) as usize);
    let over = if s_over { Over::Odd } else { Over::Even };
    let mut draft = Draft::from_diagram(d);
    let new: Vec<usize> = (0..deg - count).map(|_| draft.add_node(NodeKind::Crossing(over), 4)).collect();
    let s = SlotRef::new;
    for (l, &n) in new.iter().enumerate() {
        let e = vslot(-(l as isize) - 1);
        draft.link(s(n, 0), d.mate(e));
        draft.link(e, s(n, 2));
        if l + 1 < new.len() {
            draft.link(s(n, 3), s(new[l + 1], 1));
        }
    }
    match (new.first(), new.last()) {
        (Some(&first), Some(&last)) => {
            draft.link(s(first, 1), fan.enter);
            draft.link(s(last, 3), fan.leave);
        }
        _ => draft.link(fan.enter, fan.leave),
    }
    for i in 0..count {
        draft.link(vslot(i as isize), d.mate(fan.role(i, 0)));
    }
    for &c in &fan.crossings {
        draft.remove(c);
    }
    finish(draft)
}

/// Inverse of pulling a strand off a vertex: the arc at `arc`, lying in the
/// face at the corner before `vs`, is slid across the vertex.
pub(super) fn vertex_wrap(d: &Diagram, vs: SlotRef, arc: SlotRef, reversed: bool, over: Over) -> Result<Diagram> {
    slot_in(d, vs)?;
    slot_in(d, arc)?;
    let v = vs.node;
    if d.node(v).is_crossing() {
        return Err(not_applicable(format!("{vs} is not a vertex slot")));
    }
    let deg = d.node(v).degree();
    let other = d.mate(arc);
    if arc.node == v || other.node == v {
        return Err(not_applicable("arc ends at the vertex"));
    }
    let vslot = |i: isize| SlotRef::new(v, (vs.slot as isize + i).rem_euclid(deg as isize) as usize);
    if (0..deg).any(|i| d.mate(vslot(i as isize)).node == v) {
        return Err(not_applicable("vertex carries a loop"));
    }
    let (enter, leave) = if reversed { (other, arc) } else { (arc, other) };
    let mut draft = Draft::from_diagram(d);
    let new: Vec<usize> = (0..deg).map(|_| draft.add_node(NodeKind::Crossing(over), 4)).collect();
    let s = SlotRef::new;
    for (l, &n) in new.iter().enumerate() {
        let e = vslot(-(l as isize) - 1);
        draft.link(s(n, 0), d.mate(e));
        draft.link(e, s(n, 2));
        if l + 1 < new.len() {
            draft.link(s(n, 3), s(new[l + 1], 1));
        }
    }
    draft.link(s(new[0], 1), enter);
    draft.link(s(new[deg - 1], 3), leave);
    let out = finish(draft)?;
    let label = d.node(v).label().ok_or_else(|| not_applicable("unlabelled vertex"))?;
    let w = out.vertex_node(label).ok_or_else(|| not_applicable("vertex lost"))?;
    let key = d.canonical_key(crate::diagram::KeyMode::Full);
    let undone = (0..deg).any(|p| {
        vertex_slide(&out, SlotRef::new(w, p), deg, true)
            .is_ok_and(|b| b.canonical_key(crate::diagram::KeyMode::Full) == key)
    });
    if !undone {
        return Err(not_applicable("strand does not wrap the vertex"));
    }
    Ok(out)
}
