//! Enumeration of genus-2 fiber shapes: case budgets, the multiplicity
//! partition search below a type-D component, Kodaira templates and the catalog.

pub mod catalog;
mod kodaira;

pub use catalog::{enumerate_catalog, CatalogBounds, CatalogEntry, Source};
pub use kodaira::{kodaira_templates, KodairaFamily, Template};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::dualgraph::{validate_fiber, Component, FiberGraph, Geom, IntersectionPoint, TypeLabel};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CaseTag {
    I,
    II,
    III,
    IV,
    V,
}

impl CaseTag {
    pub const ALL: [CaseTag; 5] = [CaseTag::I, CaseTag::II, CaseTag::III, CaseTag::IV, CaseTag::V];

    pub fn parse(s: &str) -> Option<CaseTag> {
        match s {
            "i" => Some(CaseTag::I),
            "ii" => Some(CaseTag::II),
            "iii" => Some(CaseTag::III),
            "iv" => Some(CaseTag::IV),
            "v" => Some(CaseTag::V),
            _ => None,
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CaseTag::I => "i",
            CaseTag::II => "ii",
            CaseTag::III => "iii",
            CaseTag::IV => "iv",
            CaseTag::V => "v",
        })
    }
}

/// Non-E components forced by `Σ nᵢ Γᵢ·K = 2`; every other component is of type E.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseBudget {
    pub case_tag: CaseTag,
    pub required: Vec<(TypeLabel, u64)>,
}

impl CaseBudget {
    pub fn canonical_sum(&self) -> i64 {
        self.required.iter().map(|(t, m)| t.numbers().map_or(0, |(k, _)| k) * *m as i64).sum()
    }
}

pub fn case_budgets() -> Vec<CaseBudget> {
    use TypeLabel::*;
    vec![
        CaseBudget { case_tag: CaseTag::I, required: vec![(C, 1)] },
        CaseBudget { case_tag: CaseTag::II, required: vec![(D, 1)] },
        CaseBudget { case_tag: CaseTag::III, required: vec![(A, 2)] },
        CaseBudget { case_tag: CaseTag::IV, required: vec![(A, 1), (B, 1)] },
        CaseBudget { case_tag: CaseTag::V, required: vec![(B, 2)] },
    ]
}

/// Non-decreasing multisets of parts `p ≥ ⌈cur/2⌉` summing to `2·cur − prev`.
pub fn legal_partitions(cur: u64, prev: u64) -> Vec<Vec<u64>> {
    let Some(sum) = (2 * cur).checked_sub(prev) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    partitions_from(sum, cur.div_ceil(2).max(1), &mut Vec::new(), &mut out);
    out
}

fn partitions_from(rest: u64, lo: u64, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if rest == 0 {
        out.push(acc.clone());
        return;
    }
    for p in lo..=rest {
        acc.push(p);
        partitions_from(rest - p, p, acc, out);
        acc.pop();
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchNode {
    pub cur: u64,
    pub prev: u64,
    pub depth: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SearchTag {
    Complete,
    Impossible,
    InfiniteChain,
}

/// Multiplicities of the chain hanging below the type-D component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModelNode {
    pub mult: u64,
    pub children: Vec<ModelNode>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchOutcome {
    pub tag: SearchTag,
    /// Present only when the assembled fiber (with a single type-D curve
    /// of multiplicity 1 above the root) passes validation.
    pub graph: Option<FiberGraph>,
    /// Partition chosen at each expansion, in search order.
    pub path: Vec<Vec<u64>>,
    pub model: ModelNode,
    /// Shape with every constant-multiplicity run collapsed.
    pub family: String,
    pub run_lengths: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SearchTree {
    Leaf(SearchOutcome),
    Expand { node: SearchNode, branches: Vec<(Vec<u64>, SearchTree)> },
}

impl SearchTree {
    pub fn outcomes(&self) -> Vec<&SearchOutcome> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect<'a>(&'a self, out: &mut Vec<&'a SearchOutcome>) {
        match self {
            SearchTree::Leaf(o) => out.push(o),
            SearchTree::Expand { branches, .. } => branches.iter().for_each(|(_, t)| t.collect(out)),
        }
    }

    /// Distinct complete families grouped by the first-level partition.
    pub fn complete_families(&self) -> BTreeMap<Vec<u64>, BTreeSet<String>> {
        let mut out: BTreeMap<Vec<u64>, BTreeSet<String>> = BTreeMap::new();
        for o in self.outcomes() {
            if o.tag == SearchTag::Complete {
                out.entry(o.path.first().cloned().unwrap_or_default()).or_default().insert(o.family.clone());
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
struct Slot {
    cur: u64,
    prev: u64,
    depth: usize,
    parent: Option<usize>,
    /// Consecutive single-part expansions with strictly increasing multiplicity ending here.
    rising: usize,
}

#[derive(Clone, Debug)]
struct State {
    slots: Vec<Slot>,
    open: Vec<usize>,
    path: Vec<Vec<u64>>,
}

/// Depth-first expansion by legal partitions from `(cur = m, prev = 1)`.
pub fn multiplicity_search(m: u64, depth_limit: usize) -> Result<SearchTree> {
    if depth_limit < 1 {
        return Err(Error::InvalidArgument("depth_limit must be at least 1".into()));
    }
    if !(1..=4).contains(&m) {
        return Err(Error::InvalidArgument(format!("attachment multiplicity {m} outside 1..=4")));
    }
    let root = Slot { cur: m, prev: 1, depth: 0, parent: None, rising: 0 };
    Ok(expand(State { slots: vec![root], open: vec![0], path: Vec::new() }, depth_limit))
}

fn expand(mut st: State, depth_limit: usize) -> SearchTree {
    let idx = loop {
        match st.open.pop() {
            None => return SearchTree::Leaf(finish(&st, SearchTag::Complete)),
            Some(i) if 2 * st.slots[i].cur == st.slots[i].prev => continue,
            Some(i) => break i,
        }
    };
    let s = st.slots[idx].clone();
    let node = SearchNode { cur: s.cur, prev: s.prev, depth: s.depth };
    if s.depth >= depth_limit {
        let tag = if s.rising >= 2 { SearchTag::InfiniteChain } else { SearchTag::Impossible };
        return SearchTree::Leaf(finish(&st, tag));
    }
    let parts = legal_partitions(s.cur, s.prev);
    if parts.is_empty() {
        return SearchTree::Leaf(finish(&st, SearchTag::Impossible));
    }
    let branches = parts
        .into_iter()
        .map(|part| {
            let mut next = st.clone();
            let single = part.len() == 1;
            for &p in part.iter().rev() {
                let rising = if single && p > s.cur { s.rising + 1 } else { 0 };
                next.slots.push(Slot { cur: p, prev: s.cur, depth: s.depth + 1, parent: Some(idx), rising });
                next.open.push(next.slots.len() - 1);
            }
            next.path.push(part.clone());
            (part, expand(next, depth_limit))
        })
        .collect();
    SearchTree::Expand { node, branches }
}

fn finish(st: &State, tag: SearchTag) -> SearchOutcome {
    let model = model_tree(&st.slots, 0);
    let (family, run_lengths) = family_key(&model, 1);
    let graph = if tag == SearchTag::Complete {
        let g = assemble_below_d(&model);
        validate_fiber(&g).pass().then_some(g)
    } else {
        None
    };
    SearchOutcome { tag, graph, path: st.path.clone(), model, family, run_lengths }
}

fn model_tree(slots: &[Slot], i: usize) -> ModelNode {
    let mut children: Vec<ModelNode> =
        (0..slots.len()).filter(|&j| slots[j].parent == Some(i)).map(|j| model_tree(slots, j)).collect();
    children.sort_by(|a, b| (a.mult, format!("{a:?}")).cmp(&(b.mult, format!("{b:?}"))));
    ModelNode { mult: slots[i].cur, children }
}

/// Collapses maximal single-child runs of equal multiplicity that start at a
/// node whose multiplicity equals its parent's.
pub fn family_key(node: &ModelNode, parent_mult: u64) -> (String, Vec<usize>) {
    let mut runs = Vec::new();
    let key = family_rec(node, parent_mult, &mut runs);
    (key, runs)
}

fn family_rec(node: &ModelNode, parent_mult: u64, runs: &mut Vec<usize>) -> String {
    let mut n = node;
    let mut label = n.mult.to_string();
    if n.mult == parent_mult {
        let mut len = 1;
        while n.children.len() == 1 && n.children[0].mult == n.mult {
            n = &n.children[0];
            len += 1;
        }
        runs.push(len);
        label.push('*');
    }
    if n.children.is_empty() {
        return label;
    }
    let mut parts: Vec<(String, Vec<usize>)> = n
        .children
        .iter()
        .map(|c| {
            let mut r = Vec::new();
            (family_rec(c, n.mult, &mut r), r)
        })
        .collect();
    parts.sort();
    let keys: Vec<&str> = parts.iter().map(|(k, _)| k.as_str()).collect();
    for (_, r) in &parts {
        runs.extend(r);
    }
    format!("{label}({})", keys.join(","))
}

/// The model below a single type-D curve `D` of multiplicity 1.
pub fn assemble_below_d(model: &ModelNode) -> FiberGraph {
    let mut comps = vec![Component::new("D", 1, -4, 2, Geom::SmoothRational)];
    let mut points = Vec::new();
    fn add(n: &ModelNode, parent: &str, comps: &mut Vec<Component>, points: &mut Vec<IntersectionPoint>) {
        let id = format!("E{}", comps.len());
        comps.push(Component::rational(id.clone(), n.mult, -2));
        points.push(IntersectionPoint::node(format!("p{}", points.len() + 1), parent, &id));
        for c in &n.children {
            add(c, &id, comps, points);
        }
    }
    add(model, "D", &mut comps, &mut points);
    FiberGraph::new(2, comps, points)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute force: every non-decreasing sequence with parts bounded by the sum.
    fn brute(cur: u64, prev: u64) -> BTreeSet<Vec<u64>> {
        let mut out = BTreeSet::new();
        if 2 * cur < prev {
            return out;
        }
        let sum = 2 * cur - prev;
        fn all(rest: u64, acc: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
            if rest == 0 {
                out.push(acc.clone());
                return;
            }
            for p in 1..=rest {
                acc.push(p);
                all(rest - p, acc, out);
                acc.pop();
            }
        }
        let mut seqs = Vec::new();
        all(sum, &mut Vec::new(), &mut seqs);
        for mut s in seqs {
            if s.iter().all(|&p| 2 * p >= cur) {
                s.sort_unstable();
                out.insert(s);
            }
        }
        out
    }

    #[test]
    fn partitions_match_brute_force() {
        for cur in 1..=12 {
            for prev in 1..=2 * cur {
                let got: BTreeSet<Vec<u64>> = legal_partitions(cur, prev).into_iter().collect();
                assert_eq!(got, brute(cur, prev), "cur={cur} prev={prev}");
            }
        }
    }

    #[test]
    fn quoted_partitions() {
        let set = |v: Vec<Vec<u64>>| v.into_iter().collect::<BTreeSet<_>>();
        assert_eq!(
            set(legal_partitions(4, 1)),
            set(vec![vec![7], vec![3, 4], vec![2, 5], vec![2, 2, 3]])
        );
        assert_eq!(set(legal_partitions(7, 4)), set(vec![vec![10], vec![4, 6], vec![5, 5]]));
        assert_eq!(legal_partitions(1, 2), vec![Vec::<u64>::new()]);
        assert!(legal_partitions(1, 3).is_empty());
    }

    #[test]
    fn budgets() {
        let b = case_budgets();
        assert_eq!(b.len(), 5);
        assert!(b.iter().all(|c| c.canonical_sum() == 2));
        assert!(b.iter().any(|c| c.required == vec![(TypeLabel::C, 1)]));
        assert!(b.iter().any(|c| c.required == vec![(TypeLabel::A, 1), (TypeLabel::B, 1)]));
    }

    #[test]
    fn m4_families() {
        let t = multiplicity_search(4, 64).unwrap();
        let fam = t.complete_families();
        for p in [vec![3, 4], vec![2, 5], vec![2, 2, 3]] {
            assert_eq!(fam[&p].len(), 1, "{p:?}");
        }
        // The trivial branch is flagged, its sibling {5,5} dies.
        let chain = t.outcomes().into_iter().find(|o| o.path.iter().all(|p| p.len() == 1) && o.path[0] == vec![7]).unwrap();
        assert_eq!(chain.tag, SearchTag::InfiniteChain);
        assert_eq!(&chain.path[..3], &[vec![7], vec![10], vec![13]]);
        assert!(t.outcomes().iter().any(|o| o.path.starts_with(&[vec![7], vec![5, 5]]) && o.tag == SearchTag::Impossible));
        for o in t.outcomes() {
            if o.tag == SearchTag::Complete {
                let g = o.graph.as_ref().expect("m = 4 models validate");
                assert!(validate_fiber(g).pass());
            }
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(multiplicity_search(4, 0).is_err());
        assert!(multiplicity_search(5, 3).is_err());
    }

    #[test]
    fn run_compression() {
        let leaf = |m| ModelNode { mult: m, children: vec![] };
        let chain = |k: usize| {
            let mut n = ModelNode { mult: 4, children: vec![leaf(2), leaf(2)] };
            for _ in 1..k {
                n = ModelNode { mult: 4, children: vec![n] };
            }
            ModelNode { mult: 4, children: vec![ModelNode { mult: 3, children: vec![ModelNode { mult: 2, children: vec![leaf(1)] }] }, n] }
        };
        let (a, ra) = family_key(&chain(1), 1);
        let (b, rb) = family_key(&chain(5), 1);
        assert_eq!(a, b);
        assert_eq!((ra, rb), (vec![1], vec![5]));
    }
}
