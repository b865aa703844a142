//! Non-reduced and cyclic configurations of −2 rational curves from the
//! elliptic classification, used as building blocks for cases i and ii.

use serde::Serialize;

use crate::dualgraph::{Component, FiberGraph, IntersectionPoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum KodairaFamily {
    /// Cycle of n curves.
    In,
    /// Affine D_{n+4}.
    InStar,
    /// Affine E6.
    IvStar,
    /// Affine E7.
    IiiStar,
    /// Affine E8.
    IiStar,
    /// Two curves with a double contact.
    Iii,
    /// Three curves through one point.
    Iv,
}

impl KodairaFamily {
    pub const ALL: [KodairaFamily; 7] = [
        KodairaFamily::In,
        KodairaFamily::InStar,
        KodairaFamily::IvStar,
        KodairaFamily::IiiStar,
        KodairaFamily::IiStar,
        KodairaFamily::Iii,
        KodairaFamily::Iv,
    ];

    pub fn name(self, n: usize) -> String {
        match self {
            KodairaFamily::In => format!("I{n}"),
            KodairaFamily::InStar => format!("I{n}*"),
            KodairaFamily::IvStar => "IV*".into(),
            KodairaFamily::IiiStar => "III*".into(),
            KodairaFamily::IiStar => "II*".into(),
            KodairaFamily::Iii => "III".into(),
            KodairaFamily::Iv => "IV".into(),
        }
    }
}

/// Genus-1 fragment whose `designated` component has multiplicity 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Template {
    pub family: KodairaFamily,
    pub n: usize,
    pub graph: FiberGraph,
    pub designated: String,
}

impl Template {
    pub fn name(&self) -> String {
        self.family.name(self.n)
    }
}

struct Builder {
    comps: Vec<Component>,
    points: Vec<IntersectionPoint>,
}

impl Builder {
    fn new() -> Self {
        Builder { comps: Vec::new(), points: Vec::new() }
    }

    fn curve(&mut self, mult: u64) -> String {
        let id = format!("K{}", self.comps.len() + 1);
        self.comps.push(Component::rational(id.clone(), mult, -2));
        id
    }

    fn node(&mut self, a: &str, b: &str) {
        let id = format!("k{}", self.points.len() + 1);
        self.points.push(IntersectionPoint::node(id, a, b));
    }

    /// Chain of the given multiplicities hanging from `from`.
    fn arm(&mut self, from: &str, mults: &[u64]) -> String {
        let mut prev = from.to_string();
        for &m in mults {
            let c = self.curve(m);
            self.node(&prev, &c);
            prev = c;
        }
        prev
    }

    fn done(self, family: KodairaFamily, n: usize, designated: String) -> Template {
        Template { family, n, graph: FiberGraph::new(1, self.comps, self.points), designated }
    }
}

fn cycle(n: usize) -> Template {
    let mut b = Builder::new();
    let ids: Vec<String> = (0..n).map(|_| b.curve(1)).collect();
    for i in 0..n {
        let (x, y) = (ids[i].clone(), ids[(i + 1) % n].clone());
        b.node(&x, &y);
    }
    b.done(KodairaFamily::In, n, ids[0].clone())
}

fn d_tilde(n: usize) -> Template {
    let mut b = Builder::new();
    let spine: Vec<String> = (0..=n).map(|_| b.curve(2)).collect();
    for w in spine.windows(2) {
        b.node(&w[0], &w[1]);
    }
    let first = b.arm(&spine[0], &[1]);
    b.arm(&spine[0], &[1]);
    b.arm(&spine[n], &[1]);
    b.arm(&spine[n], &[1]);
    b.done(KodairaFamily::InStar, n, first)
}

fn star(family: KodairaFamily, centre: u64, arms: &[&[u64]]) -> Template {
    let mut b = Builder::new();
    let c = b.curve(centre);
    let mut designated = None;
    for arm in arms {
        let tip = b.arm(&c, arm);
        if designated.is_none() && arm.last() == Some(&1) {
            designated = Some(tip);
        }
    }
    b.done(family, 0, designated.expect("every affine star has a multiplicity-1 tip"))
}

fn tangent_pair() -> Template {
    let mut b = Builder::new();
    let (x, y) = (b.curve(1), b.curve(1));
    let mut p = IntersectionPoint::node("k1", &x, &y);
    p.set_mult(0, 1, 2);
    b.points.push(p);
    b.done(KodairaFamily::Iii, 0, x)
}

fn concurrent_triple() -> Template {
    let mut b = Builder::new();
    let ids: Vec<String> = (0..3).map(|_| b.curve(1)).collect();
    let refs: Vec<&str> = ids.iter().map(String::as_str).collect();
    b.points.push(IntersectionPoint::with_branches("k1", &refs));
    b.done(KodairaFamily::Iv, 0, ids[0].clone())
}

/// All seven families, cycles `I_n` for `2 ≤ n ≤ max(2, n_bound)` and
/// `I_n*` for `0 ≤ n ≤ n_bound`.
pub fn kodaira_templates(n_bound: usize) -> Vec<Template> {
    let mut out: Vec<Template> = (2..=n_bound.max(2)).map(cycle).collect();
    out.extend((0..=n_bound).map(d_tilde));
    out.push(star(KodairaFamily::IvStar, 3, &[&[2, 1], &[2, 1], &[2, 1]]));
    out.push(star(KodairaFamily::IiiStar, 4, &[&[3, 2, 1], &[3, 2, 1], &[2]]));
    out.push(star(KodairaFamily::IiStar, 6, &[&[5, 4, 3, 2, 1], &[4, 2], &[3]]));
    out.push(tangent_pair());
    out.push(concurrent_triple());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dualgraph::validate_fiber;
    use std::collections::BTreeSet;

    #[test]
    fn seven_families_all_elliptic_fibers() {
        let t = kodaira_templates(3);
        let fams: BTreeSet<_> = t.iter().map(|t| t.family).collect();
        assert_eq!(fams.len(), 7);
        for tpl in &t {
            // As fibers of an elliptic fibration (K·Γ = 0 throughout) they are valid at genus 1.
            assert!(validate_fiber(&tpl.graph).pass(), "{} {:?}", tpl.name(), validate_fiber(&tpl.graph));
            assert!(tpl.graph.components.iter().all(|c| c.k_degree == 0));
            assert_eq!(tpl.graph.component(&tpl.designated).unwrap().mult, 1);
        }
    }

    #[test]
    fn sizes() {
        let t = kodaira_templates(2);
        let size = |name: &str| t.iter().find(|t| t.name() == name).unwrap().graph.components.len();
        assert_eq!(size("I2"), 2);
        assert_eq!(size("I0*"), 5);
        assert_eq!(size("I2*"), 7);
        assert_eq!(size("IV*"), 7);
        assert_eq!(size("III*"), 8);
        assert_eq!(size("II*"), 9);
    }
}
