//! Properties of the generated catalog that are not acceptance criteria.

use g2fib_core::{cycle_rank, enumerate_catalog, CatalogBounds};

#[test]
fn at_most_two_loops_of_rational_curves() {
    for e in enumerate_catalog(CatalogBounds::default()) {
        let handles: usize = e.graph.components.iter().map(|c| c.geom.handles()).sum();
        let loops = cycle_rank(&e.graph) - handles;
        assert!(loops <= 2, "{} has {loops} loops", e.family);
        assert!(cycle_rank(&e.graph) <= 4, "{}", e.family);
    }
}
