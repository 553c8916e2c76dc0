//! The hand-written three-party CHSH ring compared with the generator.

mod common;

use common::table;
use exclusivity::events::{build_exclusivity_graph, union_scenario, Scenario};
use exclusivity::graph::Graph;
use exclusivity::packing::fractional_packing;
use exclusivity::rational::int;
use exclusivity::scenarios::gen_bell_loop;

/// Backtracking isomorphism search with degree and adjacency pruning.
fn isomorphic(g: &Graph, h: &Graph) -> bool {
    let n = g.vertex_count();
    if n != h.vertex_count() || g.edge_count() != h.edge_count() {
        return false;
    }
    let mut dg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut dh: Vec<usize> = (0..n).map(|v| h.degree(v)).collect();
    dg.sort_unstable();
    dh.sort_unstable();
    if dg != dh {
        return false;
    }
    // Visit g in BFS order so each new vertex has mapped neighbours.
    let mut order = Vec::new();
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        order.push(s);
        let mut i = order.len() - 1;
        while i < order.len() {
            let v = order[i];
            for u in g.neighbors(v).ones() {
                if !seen[u] {
                    seen[u] = true;
                    order.push(u);
                }
            }
            i += 1;
        }
    }
    fn extend(
        k: usize,
        order: &[usize],
        g: &Graph,
        h: &Graph,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if k == order.len() {
            return true;
        }
        let v = order[k];
        for w in 0..h.vertex_count() {
            if used[w] || h.degree(w) != g.degree(v) {
                continue;
            }
            let consistent = order[..k]
                .iter()
                .all(|&u| g.has_edge(u, v) == h.has_edge(map[u], w));
            if consistent {
                map[v] = w;
                used[w] = true;
                if extend(k + 1, order, g, h, map, used) {
                    return true;
                }
                used[w] = false;
            }
        }
        false
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    extend(0, &order, g, h, &mut map, &mut used)
}

fn union_graph(parts: &[Scenario]) -> Graph {
    build_exclusivity_graph(&union_scenario(parts, &[]).unwrap().scenario).unwrap()
}

#[test]
fn table_graph_numbers() {
    let parts = table();
    for p in &parts {
        let g = build_exclusivity_graph(p).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (8, 12));
    }
    let u = union_graph(&parts);
    assert_eq!(u.vertex_count(), 24);
    assert_eq!(fractional_packing(&u).unwrap().objective, int(9));
}

#[test]
fn table_contains_the_cross_triangle() {
    let parts = table();
    let union = union_scenario(&parts, &[]).unwrap();
    let u = build_exclusivity_graph(&union.scenario).unwrap();
    let find = |label: &str| {
        union
            .scenario
            .events
            .iter()
            .position(|e| e.label == label)
            .unwrap()
    };
    let tri = [
        find("0:00|0_A0_B"),
        find("1:10|0_A0_C"),
        find("2:11|0_C0_B"),
    ];
    assert!(u.is_clique(&tri));
}

#[test]
fn table_matches_generated_ring_up_to_isomorphism() {
    let generated = gen_bell_loop(3, 2).unwrap();
    let g = union_graph(&generated.parts);
    let h = union_graph(&table());
    assert!(isomorphic(&g, &h));
    // The checker is not vacuous: one extra edge breaks it.
    let (a, b) = h.non_edges()[0];
    assert!(!isomorphic(&g, &h.with_edge(a, b).unwrap()));
}
