//! Reference fibers used by tests, benches and the command line.

use crate::dualgraph::{Component, FiberGraph, IntersectionPoint};
use crate::indices::IndexSystem;
use crate::rational::{q, qi};

/// Genus-2 star around `S7` with arms `S1`, `S2`, `S3` and the chain `S4`–`S5`–`S6`.
pub fn model4() -> FiberGraph {
    let mut s1 = Component::rational("S1", 1, -4);
    s1.k_degree = 2;
    FiberGraph::new(
        2,
        vec![
            s1,
            Component::rational("S2", 2, -2),
            Component::rational("S3", 2, -2),
            Component::rational("S4", 3, -2),
            Component::rational("S5", 2, -2),
            Component::rational("S6", 1, -2),
            Component::rational("S7", 4, -2),
        ],
        vec![
            IntersectionPoint::node("p1", "S1", "S7"),
            IntersectionPoint::node("p2", "S2", "S7"),
            IntersectionPoint::node("p3", "S3", "S7"),
            IntersectionPoint::node("p4", "S4", "S7"),
            IntersectionPoint::node("p5", "S4", "S5"),
            IntersectionPoint::node("p6", "S5", "S6"),
        ],
    )
}

/// Cycle of `n` rational −2 curves of multiplicity one.
pub fn rational_ring(n: usize) -> FiberGraph {
    let comps = (1..=n).map(|i| Component::rational(format!("S{i}"), 1, -2)).collect();
    let points = (1..=n)
        .map(|i| IntersectionPoint::node(format!("p{i}"), &format!("S{i}"), &format!("S{}", i % n + 1)))
        .collect();
    FiberGraph::new(1, comps, points)
}

/// Loop of four components whose index sums are `−4/3, −2, −4, −2`, with
/// `Sᵢ` carrying the points `pᵢ₋₁` and `pᵢ`. The loop is given at the level of
/// its equations; the branches already substituted into the first sum are not
/// modelled.
pub fn model10_system() -> IndexSystem {
    let sums = [q(-4, 3), qi(-2), qi(-4), qi(-2)];
    IndexSystem {
        components: sums.iter().enumerate().map(|(i, s)| (format!("S{}", i + 1), Some(s.clone()))).collect(),
        points: (1..=4).map(|i| (format!("p{i}"), [format!("S{i}"), format!("S{}", i % 4 + 1)])).collect(),
    }
}
