use super::*;
use crate::diagram::{book_diagram, BookLayout};
use crate::multigraph::Multigraph;

fn hopf() -> Diagram {
    Diagram::parse("diagram\ncrossing 13\ncrossing 13\narc 0.0 1.3\narc 0.1 1.2\narc 0.2 1.1\narc 0.3 1.0\n").unwrap()
}

fn k5() -> Diagram {
    let g = Multigraph::complete(5);
    book_diagram(&g, &BookLayout::minimal(&g, (0..5).collect()).unwrap()).unwrap()
}

fn theta_twisted() -> Diagram {
    let g = Multigraph::new(2, [(0, 1), (0, 1), (0, 1)]).unwrap();
    let d = book_diagram(&g, &BookLayout { positions: vec![0, 1], upper: vec![true; 3] }).unwrap();
    apply(&d, &MoveSite::R5Twist { vertex_slot: SlotRef::new(0, 1), over: Over::Odd }).unwrap()
}

fn samples() -> Vec<Diagram> {
    let curl = apply(&Diagram::unknot(), &MoveSite::R1Add { arc: ArcRef::FreeLoop, mirrored: false, over: Over::Even })
        .unwrap();
    vec![Diagram::unlink(2), curl, hopf(), k5(), theta_twisted()]
}

#[test]
fn unconditional_moves_always_apply() {
    for d in samples() {
        for site in enumerate_moves(&d, KeyMode::Full) {
            let r = apply(&d, &site);
            match site.kind() {
                MoveKind::R2Remove | MoveKind::R3 | MoveKind::VertexSlide => {
                    if let Err(e) = r {
                        assert!(matches!(e, Error::MoveNotApplicable(_)), "{site:?}: {e}");
                    }
                }
                _ => assert!(r.is_ok(), "{site:?} on\n{d}: {r:?}"),
            }
        }
    }
}

#[test]
fn moves_keep_the_underlying_graph() {
    for d in samples() {
        let g = d.underlying_graph();
        for site in enumerate_moves(&d, KeyMode::Full) {
            if let Ok(next) = apply(&d, &site) {
                assert_eq!(next.underlying_graph(), g, "{site:?}");
            }
        }
    }
}

#[test]
fn every_move_has_an_inverse() {
    for d in samples() {
        let d = d.canonical(KeyMode::Full).0;
        let key = d.canonical_key(KeyMode::Full);
        for site in enumerate_moves(&d, KeyMode::Full) {
            let Ok(next) = apply(&d, &site) else { continue };
            let next = next.canonical(KeyMode::Full).0;
            let back = enumerate_moves(&next, KeyMode::Full)
                .into_iter()
                .any(|s| apply(&next, &s).is_ok_and(|b| b.canonical_key(KeyMode::Full) == key));
            assert!(back, "{site:?} on\n{d}");
        }
    }
}

#[test]
fn r1_round_trip() {
    let u = Diagram::unknot();
    for over in [Over::Even, Over::Odd] {
        let c = apply(&u, &MoveSite::R1Add { arc: ArcRef::FreeLoop, mirrored: false, over }).unwrap();
        assert_eq!(c.crossing_count(), 1);
        let back = apply(&c, &MoveSite::R1Remove { crossing: 0, slot: 0 }).unwrap();
        assert_eq!(back, u);
    }
}

#[test]
fn r2_needs_matching_strands() {
    let h = hopf();
    assert!(matches!(
        apply(&h, &MoveSite::R2Remove { first: SlotRef::new(0, 0), second: SlotRef::new(1, 3) }),
        Err(Error::MoveNotApplicable(_))
    ));
    let shadow = apply_in(&h, &MoveSite::R2Remove { first: SlotRef::new(0, 0), second: SlotRef::new(1, 3) }, KeyMode::Shadow)
        .unwrap();
    assert_eq!(shadow, Diagram::unlink(2));
    let u2 = Diagram::unlink(2);
    let pushed = apply(&u2, &MoveSite::R2Add { a: ArcRef::FreeLoop, b: ArcRef::FreeLoop, a_over: true, b_first: false })
        .unwrap();
    assert_eq!(pushed.crossing_count(), 2);
    assert_eq!(pushed.link_components().unwrap().len(), 2);
}

#[test]
fn cyclic_triangle_blocks_r3() {
    let mut seen_valid = false;
    let mut seen_cyclic = false;
    let mut frontier = vec![Diagram::unlink(3)];
    for _ in 0..4 {
        let mut next = Vec::new();
        for d in &frontier {
            for site in enumerate_moves(d, KeyMode::Full) {
                if let MoveSite::R3 { .. } = site {
                    match apply(d, &site) {
                        Ok(n) => {
                            seen_valid = true;
                            assert_eq!(n.crossing_count(), d.crossing_count());
                        }
                        Err(_) => seen_cyclic = true,
                    }
                    assert!(apply_in(d, &site, KeyMode::Shadow).is_ok());
                }
                if matches!(site, MoveSite::R2Add { .. }) && next.len() < 300 {
                    next.push(apply(d, &site).unwrap());
                }
            }
        }
        frontier = next;
    }
    assert!(seen_valid && seen_cyclic);
}

#[test]
fn slide_round_trip() {
    // A strand crossing one edge of a degree-3 vertex slides to cross the
    // other two.
    let d = theta_twisted();
    let g = Multigraph::new(2, [(0, 1), (0, 1), (0, 1)]).unwrap();
    let mut found = false;
    let mut frontier = vec![d.clone()];
    for _ in 0..2 {
        let mut next = Vec::new();
        for d in &frontier {
            for site in enumerate_moves(d, KeyMode::Full) {
                if let Ok(n) = apply(d, &site) {
                    if let MoveSite::VertexSlide { count, .. } = site {
                        let deg = d.node(d.vertices().next().unwrap()).degree();
                        assert_eq!(n.crossing_count() + count, d.crossing_count() + deg - count);
                        assert_eq!(n.underlying_graph(), g);
                        found = true;
                    }
                    if next.len() < 200 && n.crossing_count() <= 3 {
                        next.push(n);
                    }
                }
            }
        }
        frontier = next;
    }
    assert!(found);
}

#[test]
fn leaves_swap_by_wrapping() {
    // Two leaves of a star trade places: twist them, then pull the crossing
    // off the end of one leaf.
    let star = |order: &str| {
        Diagram::parse(&format!("diagram\nvertex 0 3\nvertex 1 1\nvertex 2 1\nvertex 3 1\n{order}")).unwrap()
    };
    let a = star("arc 0.0 1.0\narc 0.1 2.0\narc 0.2 3.0\n");
    let b = star("arc 0.0 2.0\narc 0.1 1.0\narc 0.2 3.0\n");
    assert_ne!(a.canonical_key(KeyMode::Full), b.canonical_key(KeyMode::Full));
    let budget = Budget { max_crossings: 2, max_states: 10_000 };
    let path = equivalent_within(&a, &b, &budget).unwrap().unwrap();
    assert!(path.connects(&a, &b));

    let twisted = apply(&a, &MoveSite::R5Twist { vertex_slot: SlotRef::new(0, 1), over: Over::Even }).unwrap();
    let off: Vec<Diagram> = enumerate_moves(&twisted, KeyMode::Full)
        .iter()
        .filter(|s| matches!(s, MoveSite::VertexSlide { count: 1, .. }))
        .filter_map(|s| apply(&twisted, s).ok())
        .filter(|n| n.crossing_count() == 0)
        .collect();
    assert!(!off.is_empty());
    for n in &off {
        let back = enumerate_moves(n, KeyMode::Full)
            .into_iter()
            .filter(|s| matches!(s, MoveSite::VertexWrap { .. }))
            .any(|s| apply(n, &s).is_ok_and(|t| t.canonical_key(KeyMode::Full) == twisted.canonical_key(KeyMode::Full)));
        assert!(back);
    }
}

#[test]
fn simplify_removes_added_crossings() {
    let d = Diagram::unknot();
    let d = apply(&d, &MoveSite::R1Add { arc: ArcRef::FreeLoop, mirrored: false, over: Over::Odd }).unwrap();
    let d = apply(&d, &MoveSite::R1Add { arc: ArcRef::Slot(SlotRef::new(0, 0)), mirrored: true, over: Over::Even })
        .unwrap();
    let out = simplify(&d, &Budget { max_crossings: 3, max_states: 100_000 }).unwrap();
    assert_eq!(out.diagram, Diagram::unknot());
    assert!(out.complete);
    assert_eq!(out.path.replay(&d).unwrap(), Diagram::unknot());
}

#[test]
fn bidirectional_path_replays() {
    let u = Diagram::unlink(2);
    let pushed = apply(&u, &MoveSite::R2Add { a: ArcRef::FreeLoop, b: ArcRef::FreeLoop, a_over: false, b_first: false })
        .unwrap();
    let kinked = apply(&u, &MoveSite::R1Add { arc: ArcRef::FreeLoop, mirrored: false, over: Over::Odd }).unwrap();
    let budget = Budget { max_crossings: 3, max_states: 200_000 };
    let path = equivalent_within(&pushed, &kinked, &budget).unwrap().unwrap();
    assert!(path.connects(&pushed, &kinked));
    assert_eq!(equivalent_within(&hopf(), &u, &Budget { max_crossings: 2, max_states: 100_000 }).unwrap(), None);
    let cc = cc_equivalent_within(&hopf(), &u, &Budget { max_crossings: 2, max_states: 100_000 }).unwrap().unwrap();
    assert!(cc.connects(&hopf(), &u));
}

#[test]
fn budget_is_reported() {
    let r = equivalent_within(&hopf(), &Diagram::unlink(2), &Budget { max_crossings: 6, max_states: 50 });
    assert!(matches!(r, Err(Error::BudgetExceeded(_))));
}

#[test]
fn move_sites_serialize() {
    let site = MoveSite::R5Twist { vertex_slot: SlotRef::new(2, 1), over: Over::Odd };
    let j = serde_json::to_string(&site).unwrap();
    assert_eq!(serde_json::from_str::<MoveSite>(&j).unwrap(), site);
}
