//! Decorated dual graphs of singular fibers.
//!
//! Components are vertices carrying multiplicity, self-intersection and
//! canonical degree. Intersection points are hyperedges over branches, so
//! tangencies and triple points stay representable before resolution.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{gcd_u64, q, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Geom {
    SmoothRational,
    SmoothElliptic,
    NodalRational,
    CuspidalRational,
}

impl Geom {
    pub fn is_rational(self) -> bool {
        !matches!(self, Geom::SmoothElliptic)
    }

    /// Independent loops carried by the curve itself.
    pub fn handles(self) -> usize {
        match self {
            Geom::SmoothElliptic => 2,
            Geom::NodalRational => 1,
            Geom::SmoothRational | Geom::CuspidalRational => 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub id: String,
    pub mult: u64,
    pub self_int: i64,
    pub k_degree: i64,
    pub geom: Geom,
}

impl Component {
    pub fn new(id: impl Into<String>, mult: u64, self_int: i64, k_degree: i64, geom: Geom) -> Self {
        Component { id: id.into(), mult, self_int, k_degree, geom }
    }

    /// Smooth rational curve; the canonical degree follows from adjunction.
    pub fn rational(id: impl Into<String>, mult: u64, self_int: i64) -> Self {
        Component::new(id, mult, self_int, -2 - self_int, Geom::SmoothRational)
    }

    pub fn arithmetic_genus(&self) -> Q {
        arithmetic_genus(self.self_int, self.k_degree)
    }

    pub fn label(&self) -> TypeLabel {
        classify_component(self.k_degree, self.self_int)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BranchRef {
    pub component: String,
    pub label: String,
}

impl BranchRef {
    pub fn new(component: impl Into<String>, label: impl Into<String>) -> Self {
        BranchRef { component: component.into(), label: label.into() }
    }
}

/// Local intersection multiplicity between two branches of a point,
/// addressed by their positions in `branches`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairMult {
    pub pair: [usize; 2],
    pub mult: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionPoint {
    pub id: String,
    pub branches: Vec<BranchRef>,
    /// Pairs not listed meet transversally.
    #[serde(default)]
    pub pairwise_mult: Vec<PairMult>,
}

impl IntersectionPoint {
    pub fn node(id: impl Into<String>, a: &str, b: &str) -> Self {
        IntersectionPoint {
            id: id.into(),
            branches: vec![BranchRef::new(a, "0"), BranchRef::new(b, "0")],
            pairwise_mult: Vec::new(),
        }
    }

    pub fn with_branches(id: impl Into<String>, comps: &[&str]) -> Self {
        IntersectionPoint {
            id: id.into(),
            branches: comps.iter().map(|c| BranchRef::new(*c, "0")).collect(),
            pairwise_mult: Vec::new(),
        }
    }

    /// Local intersection multiplicity of branches `i` and `j`.
    pub fn mult_between(&self, i: usize, j: usize) -> u64 {
        self.pairwise_mult
            .iter()
            .find(|p| (p.pair[0] == i && p.pair[1] == j) || (p.pair[0] == j && p.pair[1] == i))
            .map(|p| p.mult)
            .unwrap_or(1)
    }

    pub fn set_mult(&mut self, i: usize, j: usize, mult: u64) {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.pairwise_mult.retain(|p| !((p.pair[0] == a && p.pair[1] == b) || (p.pair[0] == b && p.pair[1] == a)));
        if mult != 1 {
            self.pairwise_mult.push(PairMult { pair: [a, b], mult });
            self.pairwise_mult.sort_by_key(|p| p.pair);
        }
    }

    /// All unordered branch pairs with their multiplicities.
    pub fn pairs(&self) -> Vec<(usize, usize, u64)> {
        let n = self.branches.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                out.push((i, j, self.mult_between(i, j)));
            }
        }
        out
    }

    /// Exactly two branches meeting transversally.
    pub fn is_nodal(&self) -> bool {
        self.branches.len() == 2 && self.mult_between(0, 1) == 1
    }

    pub fn touches(&self, comp: &str) -> bool {
        self.branches.iter().any(|b| b.component == comp)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberGraph {
    pub genus: u32,
    pub components: Vec<Component>,
    pub points: Vec<IntersectionPoint>,
}

impl FiberGraph {
    pub fn new(genus: u32, components: Vec<Component>, points: Vec<IntersectionPoint>) -> Self {
        FiberGraph { genus, components, points }
    }

    pub fn component(&self, id: &str) -> Option<&Component> {
        self.components.iter().find(|c| c.id == id)
    }

    pub fn component_mut(&mut self, id: &str) -> Option<&mut Component> {
        self.components.iter_mut().find(|c| c.id == id)
    }

    pub fn point(&self, id: &str) -> Option<&IntersectionPoint> {
        self.points.iter().find(|p| p.id == id)
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.components.iter().position(|c| c.id == id)
    }

    pub fn mults(&self) -> Vec<u64> {
        self.components.iter().map(|c| c.mult).collect()
    }

    pub fn all_nodal(&self) -> bool {
        self.points.iter().all(|p| p.is_nodal())
    }

    /// `L·Γ` for component `id`, with `L = Σ nᵢΓᵢ`.
    pub fn fiber_dot(&self, id: &str) -> Option<i64> {
        let c = self.component(id)?;
        let mut total = c.mult as i64 * c.self_int;
        for p in &self.points {
            for (i, j, m) in p.pairs() {
                let (bi, bj) = (&p.branches[i], &p.branches[j]);
                if bi.component == bj.component {
                    continue;
                }
                if bi.component == id {
                    total += self.component(&bj.component).map_or(0, |o| o.mult as i64) * m as i64;
                } else if bj.component == id {
                    total += self.component(&bi.component).map_or(0, |o| o.mult as i64) * m as i64;
                }
            }
        }
        Some(total)
    }

    /// Intersection number `Γ_a·Γ_b` for distinct components.
    pub fn dot(&self, a: &str, b: &str) -> i64 {
        if a == b {
            return self.component(a).map_or(0, |c| c.self_int);
        }
        let mut total = 0;
        for p in &self.points {
            for (i, j, m) in p.pairs() {
                let (ci, cj) = (&p.branches[i].component, &p.branches[j].component);
                if (ci == a && cj == b) || (ci == b && cj == a) {
                    total += m as i64;
                }
            }
        }
        total
    }

    /// Components sharing a point with `id`, other than itself.
    pub fn neighbors(&self, id: &str) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for p in &self.points {
            if p.touches(id) {
                for b in &p.branches {
                    if b.component != id {
                        out.insert(b.component.clone());
                    }
                }
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        if self.components.is_empty() {
            return false;
        }
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([self.components[0].id.clone()]);
        seen.insert(self.components[0].id.clone());
        while let Some(c) = queue.pop_front() {
            for n in self.neighbors(&c) {
                if seen.insert(n.clone()) {
                    queue.push_back(n);
                }
            }
        }
        seen.len() == self.components.len()
    }

    fn fresh_component_id(&self, stem: &str) -> String {
        (1..).map(|k| format!("{stem}{k}")).find(|id| self.component(id).is_none()).unwrap()
    }

    fn fresh_point_id(&self, stem: &str) -> String {
        (1..).map(|k| format!("{stem}{k}")).find(|id| self.point(id).is_none()).unwrap()
    }

    fn fresh_label(&self, comp: &str) -> String {
        let used: BTreeSet<&str> = self
            .points
            .iter()
            .flat_map(|p| p.branches.iter())
            .filter(|b| b.component == comp)
            .map(|b| b.label.as_str())
            .collect();
        (0..).map(|k| k.to_string()).find(|l| !used.contains(l.as_str())).unwrap()
    }
}

/// `1 + (Γ² + Γ·K)/2`.
pub fn arithmetic_genus(self_int: i64, k_degree: i64) -> Q {
    q(2 + self_int + k_degree, 2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TypeLabel {
    A,
    B,
    C,
    D,
    E,
    MinusOneCurve,
    Other,
}

impl TypeLabel {
    /// `(Γ·K, Γ²)` of a tabulated type.
    pub fn numbers(self) -> Option<(i64, i64)> {
        match self {
            TypeLabel::A => Some((1, -1)),
            TypeLabel::B => Some((1, -3)),
            TypeLabel::C => Some((2, -2)),
            TypeLabel::D => Some((2, -4)),
            TypeLabel::E => Some((0, -2)),
            TypeLabel::MinusOneCurve => Some((-1, -1)),
            TypeLabel::Other => None,
        }
    }

    /// Genus column of the published type table. It disagrees with the
    /// arithmetic genus for C and D; callers report both.
    pub fn tabulated_genus(self) -> Option<u32> {
        match self {
            TypeLabel::A | TypeLabel::D => Some(1),
            TypeLabel::B | TypeLabel::C | TypeLabel::E => Some(0),
            _ => None,
        }
    }
}

impl fmt::Display for TypeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TypeLabel::A => "A",
            TypeLabel::B => "B",
            TypeLabel::C => "C",
            TypeLabel::D => "D",
            TypeLabel::E => "E",
            TypeLabel::MinusOneCurve => "MinusOneCurve",
            TypeLabel::Other => "Other",
        };
        f.write_str(s)
    }
}

pub fn classify_component(k_degree: i64, self_int: i64) -> TypeLabel {
    match (k_degree, self_int) {
        (1, -1) => TypeLabel::A,
        (1, -3) => TypeLabel::B,
        (2, -2) => TypeLabel::C,
        (2, -4) => TypeLabel::D,
        (0, -2) => TypeLabel::E,
        (-1, -1) => TypeLabel::MinusOneCurve,
        _ => TypeLabel::Other,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Empty,
    DuplicateComponent { id: String },
    DuplicatePoint { id: String },
    ZeroMultiplicity { component: String },
    NonIntegralGenus { component: String },
    NegativeGenus { component: String },
    TooFewBranches { point: String },
    UnknownComponent { point: String, component: String },
    RepeatedBranch { point: String },
    BadPair { point: String },
    Disconnected,
    MultipleFiber { gcd: u64 },
    FiberDot { component: String, value: i64 },
    CanonicalSum { value: i64, expected: i64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => write!(f, "graph has no components"),
            Violation::DuplicateComponent { id } => write!(f, "component id `{id}` repeated"),
            Violation::DuplicatePoint { id } => write!(f, "point id `{id}` repeated"),
            Violation::ZeroMultiplicity { component } => write!(f, "{component}: multiplicity must be >= 1"),
            Violation::NonIntegralGenus { component } => {
                write!(f, "{component}: self_int + k_degree is odd (arithmetic genus not integral)")
            }
            Violation::NegativeGenus { component } => write!(f, "{component}: arithmetic genus is negative"),
            Violation::TooFewBranches { point } => write!(f, "{point}: needs at least two branches"),
            Violation::UnknownComponent { point, component } => {
                write!(f, "{point}: references unknown component `{component}`")
            }
            Violation::RepeatedBranch { point } => write!(f, "{point}: a branch is listed twice"),
            Violation::BadPair { point } => write!(f, "{point}: pairwise_mult entry is out of range or zero"),
            Violation::Disconnected => write!(f, "graph is not connected"),
            Violation::MultipleFiber { gcd } => write!(f, "gcd of multiplicities is {gcd}, expected 1"),
            Violation::FiberDot { component, value } => write!(f, "{component}: L·Γ = {value}, expected 0"),
            Violation::CanonicalSum { value, expected } => {
                write!(f, "Σ nᵢ Γᵢ·K = {value}, expected {expected}")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn validate_fiber(g: &FiberGraph) -> ValidationReport {
    let mut v = Vec::new();
    if g.components.is_empty() {
        v.push(Violation::Empty);
        return ValidationReport { violations: v };
    }
    let mut ids = BTreeSet::new();
    for c in &g.components {
        if !ids.insert(c.id.as_str()) {
            v.push(Violation::DuplicateComponent { id: c.id.clone() });
        }
        if c.mult == 0 {
            v.push(Violation::ZeroMultiplicity { component: c.id.clone() });
        }
        let s = c.self_int + c.k_degree;
        if s.rem_euclid(2) != 0 {
            v.push(Violation::NonIntegralGenus { component: c.id.clone() });
        } else if s < -2 {
            v.push(Violation::NegativeGenus { component: c.id.clone() });
        }
    }
    let mut pids = BTreeSet::new();
    let mut structural_ok = true;
    for p in &g.points {
        if !pids.insert(p.id.as_str()) {
            v.push(Violation::DuplicatePoint { id: p.id.clone() });
        }
        if p.branches.len() < 2 {
            v.push(Violation::TooFewBranches { point: p.id.clone() });
        }
        let mut seen = BTreeSet::new();
        for b in &p.branches {
            if !ids.contains(b.component.as_str()) {
                v.push(Violation::UnknownComponent { point: p.id.clone(), component: b.component.clone() });
                structural_ok = false;
            }
            if !seen.insert(b) {
                v.push(Violation::RepeatedBranch { point: p.id.clone() });
            }
        }
        if p.pairwise_mult.iter().any(|pm| {
            pm.mult == 0 || pm.pair[0] == pm.pair[1] || pm.pair.iter().any(|&i| i >= p.branches.len())
        }) {
            v.push(Violation::BadPair { point: p.id.clone() });
            structural_ok = false;
        }
    }
    if !structural_ok {
        return ValidationReport { violations: v };
    }
    if !g.is_connected() {
        v.push(Violation::Disconnected);
    }
    let gcd = g.components.iter().fold(0, |acc, c| gcd_u64(acc, c.mult));
    if gcd != 1 {
        v.push(Violation::MultipleFiber { gcd });
    }
    for c in &g.components {
        let d = g.fiber_dot(&c.id).unwrap_or(0);
        if d != 0 {
            v.push(Violation::FiberDot { component: c.id.clone(), value: d });
        }
    }
    let sum: i64 = g.components.iter().map(|c| c.mult as i64 * c.k_degree).sum();
    let expected = 2 * g.genus as i64 - 2;
    if sum != expected {
        v.push(Violation::CanonicalSum { value: sum, expected });
    }
    ValidationReport { violations: v }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BlowUpLocus {
    Point { id: String },
    Free { component: String },
}

/// Graph-level blow-up at a nodal point or at a free point of a component.
///
/// Incident components drop self-intersection and raise canonical degree
/// by the square and the multiplicity of their passage through the centre,
/// which keeps every arithmetic genus fixed.
pub fn blow_up(g: &FiberGraph, locus: &BlowUpLocus) -> Result<FiberGraph> {
    let mut out = g.clone();
    let e_id = g.fresh_component_id("E");
    match locus {
        BlowUpLocus::Free { component } => {
            let c = g.component(component).ok_or_else(|| Error::UnknownComponent(component.clone()))?;
            let label = g.fresh_label(component);
            let q_id = g.fresh_point_id("q");
            out.components.push(Component::new(e_id.clone(), c.mult, -1, -1, Geom::SmoothRational));
            let cm = out.component_mut(component).unwrap();
            cm.self_int -= 1;
            cm.k_degree += 1;
            out.points.push(IntersectionPoint {
                id: q_id,
                branches: vec![BranchRef::new(component.clone(), label), BranchRef::new(e_id, "0")],
                pairwise_mult: Vec::new(),
            });
        }
        BlowUpLocus::Point { id } => {
            let p = g.point(id).ok_or_else(|| Error::UnknownPoint(id.clone()))?;
            if !p.is_nodal() {
                return Err(Error::NotNodal(id.clone()));
            }
            let (bi, bj) = (p.branches[0].clone(), p.branches[1].clone());
            let ni = g.component(&bi.component).ok_or_else(|| Error::UnknownComponent(bi.component.clone()))?.mult;
            let nj = g.component(&bj.component).ok_or_else(|| Error::UnknownComponent(bj.component.clone()))?.mult;
            out.points.retain(|pt| pt.id != *id);
            out.components.push(Component::new(e_id.clone(), ni + nj, -1, -1, Geom::SmoothRational));
            if bi.component == bj.component {
                let c = out.component_mut(&bi.component).unwrap();
                c.self_int -= 4;
                c.k_degree += 2;
            } else {
                for b in [&bi, &bj] {
                    let c = out.component_mut(&b.component).unwrap();
                    c.self_int -= 1;
                    c.k_degree += 1;
                }
            }
            let q1 = out.fresh_point_id("q");
            out.points.push(IntersectionPoint {
                id: q1,
                branches: vec![bi, BranchRef::new(e_id.clone(), "0")],
                pairwise_mult: Vec::new(),
            });
            let q2 = out.fresh_point_id("q");
            out.points.push(IntersectionPoint {
                id: q2,
                branches: vec![bj, BranchRef::new(e_id, "1")],
                pairwise_mult: Vec::new(),
            });
        }
    }
    Ok(out)
}

/// Contracts a smooth rational −1 component meeting at most two other
/// branches, each transversally.
pub fn blow_down(g: &FiberGraph, c: &str) -> Result<FiberGraph> {
    let comp = g.component(c).ok_or_else(|| Error::UnknownComponent(c.to_string()))?;
    let refuse = |reason: &str| Error::NotContractible { id: c.to_string(), reason: reason.to_string() };
    if comp.label() != TypeLabel::MinusOneCurve || comp.geom != Geom::SmoothRational {
        return Err(refuse("not a smooth rational -1 curve"));
    }
    // (point index, branch index on the other side)
    let mut touches: Vec<(usize, usize)> = Vec::new();
    for (pi, p) in g.points.iter().enumerate() {
        let own: Vec<usize> = (0..p.branches.len()).filter(|&i| p.branches[i].component == c).collect();
        if own.is_empty() {
            continue;
        }
        if own.len() > 1 {
            return Err(refuse("passes twice through a point"));
        }
        for j in 0..p.branches.len() {
            if j == own[0] {
                continue;
            }
            if p.mult_between(own[0], j) != 1 {
                return Err(refuse("meets a branch non-transversally"));
            }
            touches.push((pi, j));
        }
    }
    if touches.len() > 2 {
        return Err(refuse("meets three or more branches"));
    }
    if touches.is_empty() && g.components.len() == 1 {
        return Err(refuse("is the whole fiber"));
    }
    let mut out = g.clone();
    // Each other component gains (Γ·C)² in self-intersection and loses Γ·C in degree.
    let mut dots: BTreeMap<String, i64> = BTreeMap::new();
    for &(pi, j) in &touches {
        *dots.entry(g.points[pi].branches[j].component.clone()).or_default() += 1;
    }
    for (id, d) in &dots {
        let m = out.component_mut(id).unwrap();
        m.self_int += d * d;
        m.k_degree -= d;
    }
    let own_branch = |pi: usize| g.points[pi].branches.iter().position(|b| b.component == c).unwrap();
    match touches.as_slice() {
        [] => {}
        [(pi, _)] => {
            let pid = g.points[*pi].id.clone();
            out.points.retain(|p| p.id != pid);
        }
        [(pa, ja), (pb, jb)] if pa == pb => {
            // Triple point collapses to a point where the survivors gain one order of contact.
            let p = &g.points[*pa];
            let skip = own_branch(*pa);
            let keep: Vec<usize> = (0..p.branches.len()).filter(|&i| i != skip).collect();
            let mut np = IntersectionPoint {
                id: p.id.clone(),
                branches: keep.iter().map(|&i| p.branches[i].clone()).collect(),
                pairwise_mult: Vec::new(),
            };
            let ia = keep.iter().position(|&i| i == *ja).unwrap();
            let ib = keep.iter().position(|&i| i == *jb).unwrap();
            np.set_mult(ia, ib, p.mult_between(*ja, *jb) + 1);
            let slot = out.points.iter().position(|x| x.id == p.id).unwrap();
            out.points[slot] = np;
        }
        [(pa, ja), (pb, jb)] => {
            let a = g.points[*pa].branches[*ja].clone();
            let mut b = g.points[*pb].branches[*jb].clone();
            if a == b {
                b.label = out.fresh_label(&b.component);
            }
            let (ida, idb) = (g.points[*pa].id.clone(), g.points[*pb].id.clone());
            out.points.retain(|p| p.id != ida && p.id != idb);
            let nid = out.fresh_point_id("r");
            out.points.push(IntersectionPoint { id: nid, branches: vec![a, b], pairwise_mult: Vec::new() });
        }
        _ => unreachable!(),
    }
    out.components.retain(|x| x.id != c);
    out.points.retain(|p| p.branches.len() >= 2);
    Ok(out)
}

/// First Betti number of the incidence graph plus the loops carried by
/// elliptic and nodal components.
pub fn cycle_rank(g: &FiberGraph) -> usize {
    let v = g.components.len() + g.points.len();
    let e: usize = g.points.iter().map(|p| p.branches.len()).sum();
    let cc = incidence_components(g);
    let betti = (e + cc).saturating_sub(v);
    betti + g.components.iter().map(|c| c.geom.handles()).sum::<usize>()
}

fn incidence_components(g: &FiberGraph) -> usize {
    let n = g.components.len();
    let mut parent: Vec<usize> = (0..n + g.points.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for (pi, p) in g.points.iter().enumerate() {
        for b in &p.branches {
            if let Some(ci) = g.index_of(&b.component) {
                let (x, y) = (find(&mut parent, n + pi), find(&mut parent, ci));
                parent[x] = y;
            }
        }
    }
    (0..parent.len()).filter(|&i| find(&mut parent, i) == i).count()
}

/// Blows up every non-nodal point until the fiber has normal crossings.
///
/// Branches are treated as smooth at the point; branches with contact at
/// least two share a tangent and stay together on the exceptional curve.
pub fn normal_crossings(g: &FiberGraph) -> FiberGraph {
    let mut out = g.clone();
    while let Some(pi) = out.points.iter().position(|p| !p.is_nodal() && p.branches.len() >= 2) {
        let p = out.points.remove(pi);
        let e_id = out.fresh_component_id("E");
        let mut mult = 0;
        let mut through: BTreeMap<String, i64> = BTreeMap::new();
        for b in &p.branches {
            mult += out.component(&b.component).map_or(0, |c| c.mult);
            *through.entry(b.component.clone()).or_default() += 1;
        }
        for (id, m) in &through {
            let c = out.component_mut(id).unwrap();
            c.self_int -= m * m;
            c.k_degree += m;
        }
        out.components.push(Component::new(e_id.clone(), mult, -1, -1, Geom::SmoothRational));
        // Tangency classes.
        let n = p.branches.len();
        let mut class: Vec<usize> = (0..n).collect();
        for (i, j, m) in p.pairs() {
            if m >= 2 {
                let (ci, cj) = (class[i], class[j]);
                for c in class.iter_mut() {
                    if *c == cj {
                        *c = ci;
                    }
                }
            }
        }
        let reps: BTreeSet<usize> = class.iter().copied().collect();
        for (k, r) in reps.into_iter().enumerate() {
            let members: Vec<usize> = (0..n).filter(|&i| class[i] == r).collect();
            let mut np = IntersectionPoint {
                id: out.fresh_point_id("n"),
                branches: members.iter().map(|&i| p.branches[i].clone()).collect(),
                pairwise_mult: Vec::new(),
            };
            for (a, &i) in members.iter().enumerate() {
                for (b, &j) in members.iter().enumerate().skip(a + 1) {
                    np.set_mult(a, b, p.mult_between(i, j).saturating_sub(1).max(1));
                }
            }
            np.branches.push(BranchRef::new(e_id.clone(), k.to_string()));
            out.points.push(np);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::model4;

    /// Recomputes L·Γ from the raw point data, independently of `fiber_dot`.
    fn dot_oracle(g: &FiberGraph, id: &str) -> i64 {
        let mult: BTreeMap<&str, i64> = g.components.iter().map(|c| (c.id.as_str(), c.mult as i64)).collect();
        let own = g.component(id).unwrap();
        let mut s = own.mult as i64 * own.self_int;
        for p in &g.points {
            for i in 0..p.branches.len() {
                if p.branches[i].component != id {
                    continue;
                }
                for j in 0..p.branches.len() {
                    if j != i && p.branches[j].component != id {
                        s += mult[p.branches[j].component.as_str()] * p.mult_between(i, j) as i64;
                    }
                }
            }
        }
        s
    }

    #[test]
    fn model4_passes_and_perturbation_fails() {
        let g = model4();
        assert!(validate_fiber(&g).pass(), "{:?}", validate_fiber(&g));
        for c in &g.components {
            assert_eq!(dot_oracle(&g, &c.id), 0);
        }
        let mut bad = g.clone();
        bad.component_mut("S7").unwrap().mult = 3;
        let r = validate_fiber(&bad);
        assert!(r.violations.contains(&Violation::FiberDot { component: "S7".into(), value: -6 + 1 + 2 + 2 + 3 }));
    }

    #[test]
    fn irreducible_fiber_passes() {
        let g = FiberGraph::new(2, vec![Component::new("F", 1, 0, 2, Geom::SmoothRational)], vec![]);
        assert!(validate_fiber(&g).pass());
    }

    #[test]
    fn genus_and_labels() {
        assert_eq!(arithmetic_genus(0, 2), q(2, 1));
        assert_eq!(arithmetic_genus(-1, 1), q(1, 1));
        assert_eq!(arithmetic_genus(-2, 0), q(0, 1));
        assert_eq!(classify_component(2, -4), TypeLabel::D);
        assert_eq!(classify_component(0, -2), TypeLabel::E);
        assert_eq!(classify_component(0, 0), TypeLabel::Other);
        assert_eq!(classify_component(-1, -1), TypeLabel::MinusOneCurve);
        // Table genus and arithmetic genus disagree for C and D.
        assert_eq!(arithmetic_genus(-2, 2), q(1, 1));
        assert_eq!(TypeLabel::C.tabulated_genus(), Some(0));
        assert_eq!(arithmetic_genus(-4, 2), q(0, 1));
        assert_eq!(TypeLabel::D.tabulated_genus(), Some(1));
    }

    #[test]
    fn node_blow_up_on_model4() {
        let g = model4();
        let h = blow_up(&g, &BlowUpLocus::Point { id: "p1".into() }).unwrap();
        let e = h.component("E1").unwrap();
        assert_eq!((e.mult, e.self_int, e.k_degree), (5, -1, -1));
        assert_eq!(h.component("S1").unwrap().self_int, -5);
        assert_eq!(h.component("S7").unwrap().self_int, -3);
        for c in &h.components {
            assert_eq!(dot_oracle(&h, &c.id), 0, "{}", c.id);
        }
        assert!(validate_fiber(&h).pass());
        let back = blow_down(&h, "E1").unwrap();
        assert!(crate::canon::is_isomorphic(&back, &g));
    }

    #[test]
    fn free_blow_up_on_s6() {
        let g = model4();
        let h = blow_up(&g, &BlowUpLocus::Free { component: "S6".into() }).unwrap();
        let e = h.component("E1").unwrap();
        assert_eq!((e.mult, e.self_int), (1, -1));
        assert_eq!(h.component("S6").unwrap().self_int, -3);
        for c in &h.components {
            assert_eq!(dot_oracle(&h, &c.id), 0);
        }
        assert!(crate::canon::is_isomorphic(&blow_down(&h, "E1").unwrap(), &g));
    }

    #[test]
    fn chain_tip_collapse() {
        // A −1 tip on a chain: neighbour self-intersection rises by one.
        let g = FiberGraph::new(
            2,
            vec![Component::rational("a", 2, -2), Component::rational("t", 1, -1)],
            vec![IntersectionPoint::node("p", "a", "t")],
        );
        let h = blow_down(&g, "t").unwrap();
        assert_eq!(h.component("a").unwrap().self_int, -1);
        assert!(h.points.is_empty());
    }

    #[test]
    fn blow_down_refusals() {
        let g = model4();
        assert!(matches!(blow_down(&g, "S2"), Err(Error::NotContractible { .. })));
        let star = FiberGraph::new(
            2,
            vec![
                Component::rational("c", 3, -1),
                Component::rational("a", 1, -2),
                Component::rational("b", 1, -2),
                Component::rational("d", 1, -2),
            ],
            vec![
                IntersectionPoint::node("p", "c", "a"),
                IntersectionPoint::node("q", "c", "b"),
                IntersectionPoint::node("r", "c", "d"),
            ],
        );
        assert!(matches!(blow_down(&star, "c"), Err(Error::NotContractible { .. })));
    }

    #[test]
    fn cycle_ranks() {
        assert_eq!(cycle_rank(&model4()), 0);
        let ring = FiberGraph::new(
            2,
            (1..=4).map(|i| Component::rational(format!("S{i}"), 1, -2)).collect(),
            vec![
                IntersectionPoint::node("p1", "S1", "S2"),
                IntersectionPoint::node("p2", "S2", "S3"),
                IntersectionPoint::node("p3", "S3", "S4"),
                IntersectionPoint::node("p4", "S4", "S1"),
            ],
        );
        assert_eq!(cycle_rank(&ring), 1);
        let ell = FiberGraph::new(
            2,
            vec![Component::new("C", 1, -1, 1, Geom::SmoothElliptic), Component::rational("t", 1, -2)],
            vec![IntersectionPoint::node("p", "C", "t")],
        );
        assert_eq!(cycle_rank(&ell), 2);
    }

    #[test]
    fn triple_point_normal_crossings() {
        let g = FiberGraph::new(
            2,
            vec![Component::rational("a", 1, -2), Component::rational("b", 1, -2), Component::rational("c", 1, -2)],
            vec![IntersectionPoint::with_branches("t", &["a", "b", "c"])],
        );
        let h = normal_crossings(&g);
        assert!(h.all_nodal());
        assert_eq!(h.component("E1").unwrap().mult, 3);
        assert_eq!(h.component("a").unwrap().self_int, -3);
    }

    #[test]
    fn tangency_needs_two_blow_ups() {
        let mut p = IntersectionPoint::with_branches("t", &["a", "b"]);
        p.set_mult(0, 1, 2);
        let g = FiberGraph::new(1, vec![Component::rational("a", 1, -2), Component::rational("b", 1, -2)], vec![p]);
        assert!(validate_fiber(&g).pass());
        let h = normal_crossings(&g);
        assert!(h.all_nodal());
        assert_eq!(h.components.len(), 4);
        assert!(validate_fiber(&h).pass(), "{:?}", validate_fiber(&h));
    }
}
