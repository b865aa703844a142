//! Catalog of fiber graphs over all five case budgets.
//!
//! Trees of type-E curves are grown below the special component of each
//! case: a node of multiplicity `p` and self-intersection `s` needs
//! neighbour multiplicities (weighted by contact order) summing to `−p·s`.
//! Double contacts are allowed only on edges that touch a special curve.
//! Cycles come from Kodaira templates with the special substituted in.

use std::collections::HashMap;
use std::rc::Rc;

use serde::Serialize;

use super::kodaira::{kodaira_templates, Template};
use super::CaseTag;
use crate::canon::{canonical_hash, is_isomorphic};
use crate::dualgraph::{BranchRef, Component, FiberGraph, Geom, IntersectionPoint, TypeLabel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogBounds {
    pub depth_limit: usize,
    pub chain_bound: usize,
}

impl Default for CatalogBounds {
    fn default() -> Self {
        CatalogBounds { depth_limit: 64, chain_bound: 16 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Source {
    /// Grown by the partition engine.
    Tree,
    /// A Kodaira template with its designated curve replaced by a type-C curve.
    KodairaC { template: String },
    /// Two Kodaira templates glued along a common type-D curve.
    KodairaPairD { left: String, right: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub case: CaseTag,
    pub source: Source,
    /// Shape with constant-multiplicity runs collapsed; equal for every member of a parametric family.
    pub family: String,
    /// Longest collapsed run, or the template chain parameter.
    pub chain_len: usize,
    pub graph: FiberGraph,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Kind {
    E,
    /// The second special of case iv, placed somewhere in the tree.
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Contact {
    Transverse,
    Tangent,
    TwoPoints,
}

impl Contact {
    fn order(self) -> u64 {
        match self {
            Contact::Transverse => 1,
            Contact::Tangent | Contact::TwoPoints => 2,
        }
    }
}

#[derive(Debug)]
struct Shape {
    kind: Kind,
    mult: u64,
    contact: Contact,
    /// Levels below this node.
    height: usize,
    /// Copies of the second special below and at this node.
    b: usize,
    children: Vec<Rc<Shape>>,
}

impl Shape {
    fn new(d: Desc, children: Vec<Rc<Shape>>) -> Self {
        let height = children.iter().map(|c| c.height + 1).max().unwrap_or(0);
        let b = usize::from(d.kind == Kind::B) + children.iter().map(|c| c.b).sum::<usize>();
        Shape { kind: d.kind, mult: d.mult, contact: d.contact, height, b, children }
    }

    fn has_b(&self) -> usize {
        self.b
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Desc {
    mult: u64,
    kind: Kind,
    contact: Contact,
}

struct Special {
    label: TypeLabel,
    mult: u64,
}

impl Special {
    fn id(&self) -> &'static str {
        match self.label {
            TypeLabel::A => "A",
            TypeLabel::B => "B",
            TypeLabel::C => "C",
            TypeLabel::D => "D",
            _ => "X",
        }
    }

    fn numbers(&self) -> (i64, i64) {
        self.label.numbers().expect("specials are tabulated types")
    }

    fn geoms(&self) -> Vec<Geom> {
        let (k, s) = self.numbers();
        if 2 + k + s == 2 {
            vec![Geom::SmoothElliptic, Geom::NodalRational, Geom::CuspidalRational]
        } else {
            vec![Geom::SmoothRational]
        }
    }
}

type Key = (Kind, u64, u64, Contact, usize, bool);

struct Engine {
    bounds: CatalogBounds,
    memo: HashMap<Key, (usize, Rc<Vec<Rc<Shape>>>)>,
}

fn need(kind: Kind, mult: u64) -> u64 {
    match kind {
        Kind::E => 2 * mult,
        Kind::B => 3 * mult,
    }
}

impl Engine {
    /// Descriptors of children of a node with multiplicity `p`, up to total weight `r`.
    fn descriptors(&self, p: u64, r: u64, parent_special: bool, allow_b: bool) -> Vec<Desc> {
        let mut out = Vec::new();
        for q in 1..=r {
            for contact in [Contact::Transverse, Contact::Tangent, Contact::TwoPoints] {
                let e = contact.order();
                if q * e > r {
                    continue;
                }
                for kind in [Kind::E, Kind::B] {
                    if kind == Kind::B && (!allow_b || q != 1) {
                        continue;
                    }
                    if e == 2 && !parent_special && kind == Kind::E {
                        continue;
                    }
                    if need(kind, q) >= p * e {
                        out.push(Desc { mult: q, kind, contact });
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// Subtrees rooted at a child `d` of a node of multiplicity `parent_mult`,
    /// of height at most `budget`.
    fn subtrees(&mut self, d: Desc, parent_mult: u64, budget: usize, run: usize, allow_b: bool) -> Rc<Vec<Rc<Shape>>> {
        let key = (d.kind, d.mult, parent_mult, d.contact, run, allow_b);
        if let Some((b, v)) = self.memo.get(&key) {
            if *b == budget {
                return v.clone();
            }
            if *b > budget {
                return Rc::new(v.iter().filter(|s| s.height <= budget).cloned().collect());
            }
        }
        let r = need(d.kind, d.mult) - parent_mult * d.contact.order();
        let mut out = Vec::new();
        if r == 0 {
            out.push(Rc::new(Shape::new(d, vec![])));
        } else if budget > 0 {
            let special = d.kind == Kind::B;
            for children in self.fill(d.mult, r, special, d.kind, budget - 1, run, allow_b && d.kind != Kind::B) {
                out.push(Rc::new(Shape::new(d, children)));
            }
        }
        let v = Rc::new(out);
        self.memo.insert(key, (budget, v.clone()));
        v
    }

    /// All child lists for a node of multiplicity `p` that must absorb weight `r`.
    #[allow(clippy::too_many_arguments)]
    fn fill(
        &mut self,
        p: u64,
        r: u64,
        special: bool,
        kind: Kind,
        budget: usize,
        run: usize,
        allow_b: bool,
    ) -> Vec<Vec<Rc<Shape>>> {
        let descs = self.descriptors(p, r, special, allow_b);
        let mut multisets = Vec::new();
        multiset(&descs, 0, r, &mut Vec::new(), &mut multisets);
        let mut out = Vec::new();
        for ms in multisets {
            if ms.iter().filter(|d| d.kind == Kind::B).count() > 1 {
                continue;
            }
            let mut options: Vec<Rc<Vec<Rc<Shape>>>> = Vec::new();
            for d in &ms {
                let child_run = if kind == Kind::E && d.kind == Kind::E && d.mult == p { run + 1 } else { 0 };
                if child_run > self.bounds.chain_bound {
                    options.clear();
                    break;
                }
                let o = self.subtrees(*d, p, budget, child_run, allow_b && d.kind != Kind::B);
                if o.is_empty() {
                    options.clear();
                    break;
                }
                options.push(o);
            }
            if options.len() != ms.len() {
                continue;
            }
            combine(&ms, &options, 0, &mut Vec::new(), &mut out);
        }
        out
    }
}

/// Non-decreasing selections from `descs` with weights summing to `r`.
fn multiset(descs: &[Desc], from: usize, r: u64, acc: &mut Vec<Desc>, out: &mut Vec<Vec<Desc>>) {
    if r == 0 {
        out.push(acc.clone());
        return;
    }
    for i in from..descs.len() {
        let w = descs[i].mult * descs[i].contact.order();
        if w <= r {
            acc.push(descs[i]);
            multiset(descs, i, r - w, acc, out);
            acc.pop();
        }
    }
}

/// Cartesian product, choosing non-decreasing option indices for equal descriptors.
fn combine(ms: &[Desc], options: &[Rc<Vec<Rc<Shape>>>], i: usize, acc: &mut Vec<(usize, Rc<Shape>)>, out: &mut Vec<Vec<Rc<Shape>>>) {
    if i == ms.len() {
        let b: usize = acc.iter().map(|(_, s)| s.has_b()).sum();
        if b <= 1 {
            out.push(acc.iter().map(|(_, s)| s.clone()).collect());
        }
        return;
    }
    let start = if i > 0 && ms[i] == ms[i - 1] { acc[i - 1].0 } else { 0 };
    let placed: usize = acc.iter().map(|(_, s)| s.has_b()).sum();
    for k in start..options[i].len() {
        if placed + options[i][k].has_b() > 1 {
            continue;
        }
        acc.push((k, options[i][k].clone()));
        combine(ms, options, i + 1, acc, out);
        acc.pop();
    }
}

fn shape_key(s: &Shape, parent_mult: u64, runs: &mut Vec<usize>) -> String {
    let mut label = match s.kind {
        Kind::E => s.mult.to_string(),
        Kind::B => "B".to_string(),
    };
    label.push_str(match s.contact {
        Contact::Transverse => "",
        Contact::Tangent => "^t",
        Contact::TwoPoints => "^2",
    });
    let mut n = s;
    if s.kind == Kind::E && s.mult == parent_mult {
        let mut len = 1;
        while n.children.len() == 1 && n.children[0].kind == Kind::E && n.children[0].mult == n.mult {
            n = &n.children[0];
            len += 1;
        }
        runs.push(len);
        label.push('*');
    }
    if n.children.is_empty() {
        return label;
    }
    let mut keys: Vec<String> = n.children.iter().map(|c| shape_key(c, n.mult, runs)).collect();
    keys.sort();
    format!("{label}({})", keys.join(","))
}

struct Assembly {
    comps: Vec<Component>,
    points: Vec<IntersectionPoint>,
}

impl Assembly {
    fn link(&mut self, parent: &str, child: &str, contact: Contact) {
        let next = |pts: &Vec<IntersectionPoint>| format!("p{}", pts.len() + 1);
        match contact {
            Contact::Transverse => {
                let id = next(&self.points);
                self.points.push(IntersectionPoint::node(id, parent, child));
            }
            Contact::Tangent => {
                let mut p = IntersectionPoint::node(next(&self.points), parent, child);
                p.set_mult(0, 1, 2);
                self.points.push(p);
            }
            Contact::TwoPoints => {
                for label in ["0", "1"] {
                    let id = next(&self.points);
                    self.points.push(IntersectionPoint {
                        id,
                        branches: vec![BranchRef::new(parent, label), BranchRef::new(child, label)],
                        pairwise_mult: Vec::new(),
                    });
                }
            }
        }
    }

    fn grow(&mut self, s: &Shape, parent: &str) {
        let id = match s.kind {
            Kind::E => {
                let id = format!("E{}", self.comps.iter().filter(|c| c.id.starts_with('E')).count() + 1);
                self.comps.push(Component::rational(id.clone(), s.mult, -2));
                id
            }
            Kind::B => {
                self.comps.push(Component::new("B", s.mult, -3, 1, Geom::SmoothRational));
                "B".to_string()
            }
        };
        self.link(parent, &id, s.contact);
        for c in &s.children {
            self.grow(c, &id);
        }
    }
}

pub fn tree_entries(case: CaseTag, bounds: CatalogBounds) -> Vec<CatalogEntry> {
    let (root, allow_b) = match case {
        CaseTag::I => (Special { label: TypeLabel::C, mult: 1 }, false),
        CaseTag::II => (Special { label: TypeLabel::D, mult: 1 }, false),
        CaseTag::III => (Special { label: TypeLabel::A, mult: 2 }, false),
        CaseTag::IV => (Special { label: TypeLabel::A, mult: 1 }, true),
        CaseTag::V => (Special { label: TypeLabel::B, mult: 2 }, false),
    };
    let (k, s) = root.numbers();
    let r = (-(root.mult as i64) * s) as u64;
    let mut engine = Engine { bounds, memo: HashMap::new() };
    let mut out = Vec::new();
    for children in engine.fill(root.mult, r, true, Kind::B, bounds.depth_limit - 1, 0, allow_b) {
        let placed: usize = children.iter().map(|c| c.has_b()).sum();
        if placed != usize::from(allow_b) {
            continue;
        }
        let mut runs = Vec::new();
        let mut keys: Vec<String> = children.iter().map(|c| shape_key(c, root.mult, &mut runs)).collect();
        keys.sort();
        let family = format!("{}{}({})", root.id(), root.mult, keys.join(","));
        let chain_len = runs.iter().copied().max().unwrap_or(0);
        for geom in root.geoms() {
            let mut a = Assembly { comps: vec![Component::new(root.id(), root.mult, s, k, geom)], points: Vec::new() };
            for c in &children {
                a.grow(c, root.id());
            }
            out.push(CatalogEntry {
                case,
                source: Source::Tree,
                family: family.clone(),
                chain_len,
                graph: FiberGraph::new(2, a.comps, a.points),
            });
        }
    }
    out
}

fn rename(t: &Template, prefix: &str, special: &str) -> (Vec<Component>, Vec<IntersectionPoint>) {
    let map = |id: &str| if id == t.designated { special.to_string() } else { format!("{prefix}{id}") };
    let comps = t.graph.components.iter().filter(|c| c.id != t.designated).map(|c| {
        let mut c = c.clone();
        c.id = map(&c.id);
        c
    });
    let points = t.graph.points.iter().map(|p| {
        let mut p = p.clone();
        p.id = format!("{prefix}{}", p.id);
        for b in p.branches.iter_mut() {
            b.component = map(&b.component);
            if b.component == special {
                b.label = p.id.clone();
            }
        }
        p
    });
    (comps.collect(), points.collect())
}

fn template_entries(case: CaseTag, bounds: CatalogBounds) -> Vec<CatalogEntry> {
    let templates = kodaira_templates(bounds.chain_bound);
    let mut out = Vec::new();
    match case {
        CaseTag::I => {
            for t in &templates {
                for geom in [Geom::SmoothElliptic, Geom::NodalRational, Geom::CuspidalRational] {
                    let (mut comps, points) = rename(t, "", "C");
                    comps.insert(0, Component::new("C", 1, -2, 2, geom));
                    out.push(CatalogEntry {
                        case,
                        source: Source::KodairaC { template: t.name() },
                        family: format!("C+{}", t.family.name(0)),
                        chain_len: t.n,
                        graph: FiberGraph::new(2, comps, points),
                    });
                }
            }
        }
        CaseTag::II => {
            for (i, a) in templates.iter().enumerate() {
                for b in &templates[i..] {
                    let (ca, pa) = rename(a, "L", "D");
                    let (cb, pb) = rename(b, "R", "D");
                    let mut comps = vec![Component::new("D", 1, -4, 2, Geom::SmoothRational)];
                    comps.extend(ca);
                    comps.extend(cb);
                    let points = pa.into_iter().chain(pb).collect();
                    out.push(CatalogEntry {
                        case,
                        source: Source::KodairaPairD { left: a.name(), right: b.name() },
                        family: format!("D+{}+{}", a.family.name(0), b.family.name(0)),
                        chain_len: a.n.max(b.n),
                        graph: FiberGraph::new(2, comps, points),
                    });
                }
            }
        }
        _ => {}
    }
    out
}

/// Emits one entry per isomorphism class, first representative kept.
pub fn enumerate_case(case: CaseTag, bounds: CatalogBounds) -> Vec<CatalogEntry> {
    let mut all = template_entries(case, bounds);
    all.extend(tree_entries(case, bounds));
    dedup_entries(all)
}

pub fn enumerate_catalog(bounds: CatalogBounds) -> Vec<CatalogEntry> {
    dedup_entries(CaseTag::ALL.iter().flat_map(|&c| enumerate_case(c, bounds)).collect())
}

fn dedup_entries(entries: Vec<CatalogEntry>) -> Vec<CatalogEntry> {
    let mut buckets: HashMap<u64, Vec<usize>> = HashMap::new();
    let mut out: Vec<CatalogEntry> = Vec::new();
    for e in entries {
        let h = canonical_hash(&e.graph);
        let b = buckets.entry(h).or_default();
        if b.iter().any(|&i| is_isomorphic(&out[i].graph, &e.graph)) {
            continue;
        }
        b.push(out.len());
        out.push(e);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dualgraph::validate_fiber;

    fn small() -> CatalogBounds {
        CatalogBounds { depth_limit: 12, chain_bound: 3 }
    }

    #[test]
    fn every_case_produces_valid_graphs() {
        for case in CaseTag::ALL {
            let entries = enumerate_case(case, small());
            assert!(!entries.is_empty(), "case {case}");
            for e in &entries {
                let r = validate_fiber(&e.graph);
                assert!(r.pass(), "case {case} {}: {:?}", e.family, r.violations);
            }
        }
    }

    #[test]
    fn case_ii_contains_the_three_m4_models() {
        let entries = enumerate_case(CaseTag::II, small());
        for fam in ["D1(4(3(2(1)),4*(2,2)))", "D1(4(2,5(6(3,4(2)))))", "D1(4(2,2,3(2(1))))"] {
            assert!(entries.iter().any(|e| e.family == fam), "missing {fam}");
        }
    }

    #[test]
    fn larger_bounds_give_a_superset() {
        let a = enumerate_case(CaseTag::II, CatalogBounds { depth_limit: 8, chain_bound: 2 });
        let b = enumerate_case(CaseTag::II, CatalogBounds { depth_limit: 10, chain_bound: 3 });
        for e in &a {
            assert!(b.iter().any(|f| is_isomorphic(&f.graph, &e.graph)), "{}", e.family);
        }
        assert!(b.len() > a.len());
    }
}
