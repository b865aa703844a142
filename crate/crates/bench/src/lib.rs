//! Inputs shared by the benchmarks.

use g2fib_core::fixtures::model4;
use g2fib_core::{parse_germ, FiberGraph, GermIntegral, PencilGerm};

/// Germs of every generation, one per row of the normal-form list.
pub fn germs() -> Vec<GermIntegral> {
    ["x^5 * y^4 * (x - y)", "y^3 * (x^2 - y)^2", "y^2 * (x^2 - y^3)", "(x^2 - y^5)"]
        .iter()
        .map(|s| parse_germ(s).expect("fixed germ parses"))
        .collect()
}

pub fn pencils() -> Vec<PencilGerm> {
    ["y^4 / x^10", "y^7 / x^30", "x^5 * y^4 * (x - y) / (x^2 - y^3)^3"]
        .iter()
        .map(|s| PencilGerm::parse(s).expect("fixed pencil parses"))
        .collect()
}

pub fn graphs() -> Vec<FiberGraph> {
    vec![model4(), g2fib_core::assemble_global_example().inf]
}
