//! Camacho-Sad indices on fiber graphs.
//!
//! Every nodal point carries two branch indices with product 1, and the
//! indices along a smooth component sum to its self-intersection. With
//! multiplicities these follow directly; from the bare graph they are solved
//! by leaf sweeps and, on loops, by closing a Möbius chain into a quadratic.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::dualgraph::{FiberGraph, Geom};
use crate::error::{Error, Result};
use crate::localsing::{branch_type, catalog_germs, intersection, permutations, separatrix_index, Branch, GermIntegral};
use crate::rational::{de_q, fmt_q, ser_q, sqrt_q, Q};

/// Equations `Σ_{p ∈ C} Ind_p(C) = sum(C)` over nodal points with two branches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexSystem {
    /// Component id and the required index sum; `None` leaves it unconstrained.
    pub components: Vec<(String, Option<Q>)>,
    /// Point id and the components of its two branches.
    pub points: Vec<(String, [String; 2])>,
}

impl IndexSystem {
    /// One equation per smooth component; curves with an internal node or
    /// cusp carry hidden indices and stay unconstrained.
    pub fn from_graph(g: &FiberGraph) -> Result<Self> {
        let components = g
            .components
            .iter()
            .map(|c| {
                let smooth = matches!(c.geom, Geom::SmoothRational | Geom::SmoothElliptic);
                (c.id.clone(), smooth.then(|| Q::from_integer(c.self_int.into())))
            })
            .collect();
        let mut points = Vec::with_capacity(g.points.len());
        for p in &g.points {
            if !p.is_nodal() {
                return Err(Error::NotNodal(p.id.clone()));
            }
            points.push((p.id.clone(), [p.branches[0].component.clone(), p.branches[1].component.clone()]));
        }
        let sys = IndexSystem { components, points };
        sys.check_refs()?;
        Ok(sys)
    }

    fn check_refs(&self) -> Result<()> {
        for (p, cs) in &self.points {
            for c in cs {
                if !self.components.iter().any(|(id, _)| id == c) {
                    return Err(Error::UnknownComponent(format!("{c} (at {p})")));
                }
            }
        }
        Ok(())
    }

    fn is_self_node(&self, p: usize) -> bool {
        let cs = &self.points[p].1;
        cs[0] == cs[1]
    }

    /// `(point, branch position)` pairs on each component.
    fn incidences(&self) -> Vec<Vec<(usize, usize)>> {
        let mut out = vec![Vec::new(); self.components.len()];
        for (pi, (_, cs)) in self.points.iter().enumerate() {
            for (pos, c) in cs.iter().enumerate() {
                let ci = self.components.iter().position(|(id, _)| id == c).expect("checked");
                out[ci].push((pi, pos));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchIndex {
    pub component: String,
    #[serde(serialize_with = "ser_q", deserialize_with = "de_q")]
    pub index: Q,
}

/// Both branch indices of one point, branches ordered by component id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeIndex {
    pub point: String,
    pub branches: [BranchIndex; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexAssignment {
    pub nodes: Vec<NodeIndex>,
    /// `(m, n)` with `m` the eigenvalue on the first branch of the node, whose
    /// index is `−n/m`.
    pub eigenpairs: BTreeMap<String, (u64, u64)>,
}

impl IndexAssignment {
    pub fn node(&self, point: &str) -> Option<&NodeIndex> {
        self.nodes.iter().find(|n| n.point == point)
    }

    /// Index of the branch of `component` at `point`; the first one at a self-node.
    pub fn get(&self, point: &str, component: &str) -> Option<&Q> {
        self.node(point)?.branches.iter().find(|b| b.component == component).map(|b| &b.index)
    }

    /// Index sum along `component`.
    pub fn component_sum(&self, component: &str) -> Q {
        self.nodes.iter().flat_map(|n| n.branches.iter()).filter(|b| b.component == component).map(|b| &b.index).sum()
    }

    fn build(sys: &IndexSystem, t: &[Q]) -> Result<Self> {
        let mut nodes = Vec::with_capacity(t.len());
        let mut eigenpairs = BTreeMap::new();
        for (pi, (id, cs)) in sys.points.iter().enumerate() {
            let mut branches = [
                BranchIndex { component: cs[0].clone(), index: t[pi].clone() },
                BranchIndex { component: cs[1].clone(), index: t[pi].recip() },
            ];
            if branches[1].component < branches[0].component {
                branches.swap(0, 1);
            }
            eigenpairs.insert(id.clone(), eigenpair_of(&branches[0].index)?);
            nodes.push(NodeIndex { point: id.clone(), branches });
        }
        Ok(IndexAssignment { nodes, eigenpairs })
    }
}

/// `(m, n)` from an index `−n/m`.
fn eigenpair_of(index: &Q) -> Result<(u64, u64)> {
    if !index.is_negative() {
        return Err(Error::Inconsistent(format!("index {} is not negative", fmt_q(index))));
    }
    let r = -index;
    match (r.denom().to_u64(), r.numer().to_u64()) {
        (Some(m), Some(n)) => Ok((m, n)),
        _ => Err(Error::InvalidArgument(format!("eigenvalues of index {} overflow", fmt_q(index)))),
    }
}

fn check_sums(sys: &IndexSystem, t: &[Q]) -> Result<()> {
    let inc = sys.incidences();
    for (ci, (id, sum)) in sys.components.iter().enumerate() {
        let Some(s) = sum else { continue };
        let total: Q = inc[ci].iter().map(|&(p, pos)| if pos == 0 { t[p].clone() } else { t[p].recip() }).sum();
        if &total != s {
            return Err(Error::Inconsistent(format!(
                "indices on {id} sum to {}, expected {}",
                fmt_q(&total),
                fmt_q(s)
            )));
        }
    }
    Ok(())
}

/// Index `−nⱼ/nᵢ` on the `i`-branch of every node.
pub fn indices_from_multiplicities(g: &FiberGraph) -> Result<IndexAssignment> {
    let sys = IndexSystem::from_graph(g)?;
    let mut t = Vec::with_capacity(sys.points.len());
    for (id, cs) in &sys.points {
        let n = |c: &str| g.component(c).map(|c| c.mult).unwrap_or(0);
        let (a, b) = (n(&cs[0]), n(&cs[1]));
        if a == 0 || b == 0 {
            return Err(Error::InvalidFiber(format!("zero multiplicity at {id}")));
        }
        t.push(-Q::new((b as i64).into(), (a as i64).into()));
    }
    check_sums(&sys, &t)?;
    IndexAssignment::build(&sys, &t)
}

/// Eigenpair at `p`, oriented with `m` on the branch of the smaller component id.
pub fn eigenvalues_at(a: &IndexAssignment, p: &str) -> Result<(u64, u64)> {
    a.eigenpairs.get(p).copied().ok_or_else(|| Error::UnknownPoint(p.to_string()))
}

/// Primitive multiplicities with `nⱼ = −Ind_p(Cᵢ)·nᵢ` at every node.
pub fn multiplicities_from_eigenpairs(g: &FiberGraph, a: &IndexAssignment) -> Result<Vec<u64>> {
    let n = g.components.len();
    let mut ratio: Vec<Option<Q>> = vec![None; n];
    if n == 0 {
        return Ok(Vec::new());
    }
    ratio[0] = Some(Q::one());
    let mut changed = true;
    while changed {
        changed = false;
        for node in &a.nodes {
            let [b0, b1] = &node.branches;
            let (i, j) = match (g.index_of(&b0.component), g.index_of(&b1.component)) {
                (Some(i), Some(j)) => (i, j),
                _ => return Err(Error::UnknownComponent(format!("at {}", node.point))),
            };
            let fwd = -&b0.index;
            match (ratio[i].clone(), ratio[j].clone()) {
                (Some(ri), None) => {
                    ratio[j] = Some(ri * fwd);
                    changed = true;
                }
                (None, Some(rj)) => {
                    ratio[i] = Some(rj / fwd);
                    changed = true;
                }
                (Some(ri), Some(rj)) if &ri * &fwd != rj => {
                    return Err(Error::Inconsistent(format!("eigenpairs disagree around {}", node.point)));
                }
                _ => {}
            }
        }
    }
    let ratio: Vec<Q> = ratio
        .into_iter()
        .map(|r| r.ok_or_else(|| Error::InvalidFiber("graph is disconnected".into())))
        .collect::<Result<_>>()?;
    let den = ratio.iter().fold(num_bigint::BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<num_bigint::BigInt> = ratio.iter().map(|r| (r * Q::from_integer(den.clone())).to_integer()).collect();
    let g0 = ints.iter().fold(num_bigint::BigInt::zero(), |acc, v| acc.gcd(v));
    ints.iter()
        .map(|v| (v / &g0).to_u64().ok_or_else(|| Error::InvalidArgument("multiplicity overflow".into())))
        .collect()
}

/// `(a t + b) / (c t + d)` in the loop indeterminate `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Mob {
    a: Q,
    b: Q,
    c: Q,
    d: Q,
}

impl Mob {
    fn constant(v: Q) -> Self {
        Mob { a: Q::zero(), b: v, c: Q::zero(), d: Q::one() }
    }

    fn ident() -> Self {
        Mob { a: Q::one(), b: Q::zero(), c: Q::zero(), d: Q::one() }
    }

    fn is_const(&self) -> bool {
        self.c.is_zero() && self.a.is_zero() && !self.d.is_zero()
    }

    fn value(&self) -> Option<Q> {
        self.is_const().then(|| &self.b / &self.d)
    }

    fn recip(&self) -> Self {
        Mob { a: self.c.clone(), b: self.d.clone(), c: self.a.clone(), d: self.b.clone() }
    }

    /// `s − (self + k)`.
    fn complement(&self, k: &Q, s: &Q) -> Self {
        let (a, b) = (&self.a + k * &self.c, &self.b + k * &self.d);
        Mob { a: s * &self.c - a, b: s * &self.d - b, c: self.c.clone(), d: self.d.clone() }
    }

    fn eval(&self, t: &Q) -> Option<Q> {
        let den = &self.c * t + &self.d;
        (!den.is_zero()).then(|| (&self.a * t + &self.b) / den)
    }

    /// Constant values are normalized so `recip` of a constant stays constant.
    fn normalized(self) -> Self {
        if self.a.is_zero() && self.c.is_zero() {
            Mob::constant(&self.b / &self.d)
        } else if self.b.is_zero() && self.d.is_zero() {
            Mob::constant(&self.a / &self.c)
        } else {
            self
        }
    }
}

struct Ctx<'a> {
    sys: &'a IndexSystem,
    inc: Vec<Vec<(usize, usize)>>,
}

/// Closing equation `Σ terms = sum` at a component whose indices are all known.
struct Closure {
    component: usize,
    terms: Vec<Mob>,
    sum: Q,
}

fn term(vals: &[Option<Mob>], p: usize, pos: usize) -> Option<Mob> {
    vals[p].as_ref().map(|m| if pos == 0 { m.clone() } else { m.recip().normalized() })
}

fn admissible_value(v: &Q) -> bool {
    v.is_negative()
}

impl Ctx<'_> {
    /// Sweeps components with one unknown until nothing changes. Returns the
    /// first closing equation that involves the indeterminate.
    fn propagate(&self, vals: &mut [Option<Mob>]) -> Result<Option<Closure>> {
        loop {
            let mut changed = false;
            for (ci, (id, sum)) in self.sys.components.iter().enumerate() {
                let Some(s) = sum else { continue };
                let inc = &self.inc[ci];
                let unknown: Vec<(usize, usize)> = inc.iter().copied().filter(|&(p, _)| vals[p].is_none()).collect();
                let known: Vec<Mob> = inc.iter().filter_map(|&(p, pos)| term(vals, p, pos)).collect();
                let konst: Q = known.iter().filter_map(Mob::value).sum();
                let moving: Vec<&Mob> = known.iter().filter(|m| !m.is_const()).collect();
                match unknown.len() {
                    0 if moving.is_empty() => {
                        if &konst != s {
                            return Err(Error::Inconsistent(format!(
                                "indices on {id} sum to {}, expected {}",
                                fmt_q(&konst),
                                fmt_q(s)
                            )));
                        }
                    }
                    0 => return Ok(Some(Closure { component: ci, terms: known, sum: s.clone() })),
                    1 if moving.len() <= 1 => {
                        let (p, pos) = unknown[0];
                        let v = match moving.first() {
                            Some(m) => m.complement(&konst, s).normalized(),
                            None => Mob::constant(s - &konst),
                        };
                        if let Some(c) = v.value() {
                            if !admissible_value(&c) {
                                return Err(Error::Inconsistent(format!(
                                    "index of {id} at {} would be {}",
                                    self.sys.points[p].0,
                                    fmt_q(&c)
                                )));
                            }
                        }
                        vals[p] = Some(if pos == 0 { v } else { v.recip().normalized() });
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                return Ok(None);
            }
        }
    }
}

/// Polynomial numerator of `Σ terms − sum`, coefficients from degree 0.
fn closure_poly(cl: &Closure) -> Vec<Q> {
    fn mul(p: &[Q], a: &Q, b: &Q) -> Vec<Q> {
        // p · (a t + b)
        let mut out = vec![Q::zero(); p.len() + 1];
        for (i, c) in p.iter().enumerate() {
            out[i] += c * b;
            out[i + 1] += c * a;
        }
        out
    }
    let n = cl.terms.len();
    let mut total = vec![Q::zero(); n + 2];
    for i in 0..n {
        let mut p = vec![Q::one()];
        for (j, m) in cl.terms.iter().enumerate() {
            p = if i == j { mul(&p, &m.a, &m.b) } else { mul(&p, &m.c, &m.d) };
        }
        for (k, c) in p.into_iter().enumerate() {
            total[k] += c;
        }
    }
    let mut den = vec![Q::one()];
    for m in &cl.terms {
        den = mul(&den, &m.c, &m.d);
    }
    for (k, c) in den.into_iter().enumerate() {
        total[k] -= &cl.sum * c;
    }
    while total.last().is_some_and(Zero::is_zero) {
        total.pop();
    }
    total
}

/// Rational roots of a polynomial of degree at most 2; `None` above that.
fn rational_roots(p: &[Q]) -> Option<Vec<Q>> {
    match p.len() {
        0 | 1 => Some(Vec::new()),
        2 => Some(vec![-&p[0] / &p[1]]),
        3 => {
            let disc = &p[1] * &p[1] - Q::from_integer(4.into()) * &p[2] * &p[0];
            let two_a = Q::from_integer(2.into()) * &p[2];
            Some(match sqrt_q(&disc) {
                None => Vec::new(),
                Some(r) if r.is_zero() => vec![-&p[1] / &two_a],
                Some(r) => {
                    let mut v = vec![(-&p[1] - &r) / &two_a, (-&p[1] + r) / &two_a];
                    v.sort();
                    v
                }
            })
        }
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleEquation {
    /// Point whose first-branch index was taken as the indeterminate.
    pub seed: String,
    /// Component where the chain closed.
    pub closing: String,
    /// Points whose indices depend on the indeterminate.
    pub points: Vec<String>,
    /// Closing polynomial, coefficients from degree 0.
    pub coefficients: Vec<String>,
    /// Every rational root.
    pub roots: Vec<String>,
    /// Roots giving negative indices everywhere and a consistent remainder.
    pub admissible: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniquenessCertificate {
    /// Points determined by sweeping from the tips before any loop is closed.
    pub tree_resolved: Vec<String>,
    pub cycle_equations: Vec<CycleEquation>,
    /// Points set from the kernel of the intersection form because no single
    /// indeterminate closed their loops; uniqueness is not certified there.
    pub kernel_points: Vec<String>,
    pub unique: bool,
}

impl Ctx<'_> {
    fn solve(&self, mut vals: Vec<Option<Mob>>, cert: &mut UniquenessCertificate) -> Result<Vec<Q>> {
        self.propagate(&mut vals)?;
        let unresolved: Vec<usize> = (0..vals.len()).filter(|&p| vals[p].is_none()).collect();
        if unresolved.is_empty() {
            return Ok(vals.into_iter().map(|m| m.and_then(|m| m.value()).expect("constant")).collect());
        }
        let mut seeds = unresolved.clone();
        seeds.sort_by_key(|&p| !self.sys.is_self_node(p));
        for seed in seeds {
            let mut trial = vals.clone();
            trial[seed] = Some(Mob::ident());
            let Some(cl) = self.propagate(&mut trial)? else { continue };
            let poly = closure_poly(&cl);
            if poly.is_empty() {
                return Err(Error::UnderDetermined(format!(
                    "loop through {} closes identically at {}",
                    self.sys.points[seed].0, self.sys.components[cl.component].0
                )));
            }
            let Some(roots) = rational_roots(&poly) else { continue };
            let moving: Vec<usize> =
                (0..trial.len()).filter(|&p| trial[p].as_ref().is_some_and(|m| !m.is_const())).collect();
            let mut eq = CycleEquation {
                seed: self.sys.points[seed].0.clone(),
                closing: self.sys.components[cl.component].0.clone(),
                points: moving.iter().map(|&p| self.sys.points[p].0.clone()).collect(),
                coefficients: poly.iter().map(fmt_q).collect(),
                roots: roots.iter().map(fmt_q).collect(),
                admissible: 0,
            };
            let mut found: Vec<(Q, Vec<Q>, UniquenessCertificate)> = Vec::new();
            let mut first_err = None;
            for r in &roots {
                if self.sys.is_self_node(seed) && found.iter().any(|(f, _, _)| f.recip() == *r) {
                    continue;
                }
                let mut fixed = vals.clone();
                let mut ok = true;
                for &p in &moving {
                    match trial[p].as_ref().and_then(|m| m.eval(r)) {
                        Some(v) if admissible_value(&v) => fixed[p] = Some(Mob::constant(v)),
                        _ => ok = false,
                    }
                }
                for (p, v) in trial.iter().enumerate() {
                    if fixed[p].is_none() {
                        fixed[p] = v.clone();
                    }
                }
                if !ok {
                    continue;
                }
                let mut sub = cert.clone();
                match self.solve(fixed, &mut sub) {
                    Ok(sol) => found.push((r.clone(), sol, sub)),
                    Err(e @ Error::Inconsistent(_)) => first_err = first_err.or(Some(e)),
                    Err(e) => return Err(e),
                }
            }
            eq.admissible = found.len();
            return match found.len() {
                0 => Err(first_err.unwrap_or_else(|| {
                    Error::Inconsistent(format!("no admissible root closes the loop through {}", eq.seed))
                })),
                1 => {
                    let (_, sol, mut sub) = found.pop().unwrap();
                    sub.cycle_equations.insert(cert.cycle_equations.len(), eq);
                    *cert = sub;
                    Ok(sol)
                }
                _ => Err(Error::NonUnique { cycle: eq.points, roots: found.iter().map(|(r, _, _)| fmt_q(r)).collect() }),
            };
        }
        self.kernel_fallback(vals, &unresolved, cert)
    }

    /// Indices `−nⱼ/nᵢ` from the one-dimensional kernel of the intersection form
    /// whose diagonal is `sum(C) + 2·#self-nodes(C)`.
    fn kernel_fallback(
        &self,
        vals: Vec<Option<Mob>>,
        unresolved: &[usize],
        cert: &mut UniquenessCertificate,
    ) -> Result<Vec<Q>> {
        let sys = self.sys;
        let n = sys.components.len();
        let mut m = vec![vec![Q::zero(); n]; n];
        for (i, (id, sum)) in sys.components.iter().enumerate() {
            m[i][i] = sum.clone().ok_or_else(|| Error::UnderDetermined(format!("{id} has no index equation")))?;
        }
        let pos = |c: &str| sys.components.iter().position(|(id, _)| id == c).expect("checked");
        for (_, cs) in &sys.points {
            let (i, j) = (pos(&cs[0]), pos(&cs[1]));
            if i == j {
                m[i][i] += Q::from_integer(2.into());
            } else {
                m[i][j] += Q::one();
                m[j][i] += Q::one();
            }
        }
        let kernel = nullspace(m);
        if kernel.len() != 1 {
            return Err(Error::UnderDetermined(format!("intersection form has nullity {}", kernel.len())));
        }
        let mut v = kernel.into_iter().next().unwrap();
        if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
            v.iter_mut().for_each(|x| *x = -x.clone());
        }
        if v.iter().any(|x| !x.is_positive()) {
            return Err(Error::Inconsistent("kernel of the intersection form is not positive".into()));
        }
        let mut t = Vec::with_capacity(vals.len());
        for (p, (_, cs)) in sys.points.iter().enumerate() {
            let k = -(&v[pos(&cs[1])] / &v[pos(&cs[0])]);
            match vals[p].as_ref().and_then(Mob::value) {
                Some(known) if known != k => {
                    return Err(Error::UnderDetermined(format!(
                        "loops through {} are not closed by one indeterminate",
                        sys.points[p].0
                    )))
                }
                _ => t.push(k),
            }
        }
        check_sums(sys, &t)?;
        cert.kernel_points = unresolved.iter().map(|&p| sys.points[p].0.clone()).collect();
        Ok(t)
    }
}

/// Basis of the right kernel by exact row reduction.
fn nullspace(mut m: Vec<Vec<Q>>) -> Vec<Vec<Q>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, pr);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Q::zero(); cols];
            v[free] = Q::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[row][free].clone();
            }
            v
        })
        .collect()
}

pub fn solve_system(sys: &IndexSystem) -> Result<(IndexAssignment, UniquenessCertificate)> {
    sys.check_refs()?;
    let ctx = Ctx { sys, inc: sys.incidences() };
    let mut vals: Vec<Option<Mob>> = vec![None; sys.points.len()];
    ctx.propagate(&mut vals)?;
    let mut cert = UniquenessCertificate {
        tree_resolved: (0..vals.len()).filter(|&p| vals[p].is_some()).map(|p| sys.points[p].0.clone()).collect(),
        ..Default::default()
    };
    let t = ctx.solve(vals, &mut cert)?;
    check_sums(sys, &t)?;
    cert.unique = cert.kernel_points.is_empty();
    Ok((IndexAssignment::build(sys, &t)?, cert))
}

/// Indices from self-intersections alone; multiplicities are ignored.
pub fn solve_indices(g: &FiberGraph) -> Result<(IndexAssignment, UniquenessCertificate)> {
    solve_system(&IndexSystem::from_graph(g)?)
}

/// The catalog germ (or linear germ) with separatrices `branches` carrying
/// indices `idx`, written on those branches.
pub fn match_normal_form(branches: &[Branch], idx: &[Q]) -> Result<GermIntegral> {
    if branches.len() != idx.len() || branches.is_empty() {
        return Err(Error::InvalidArgument("one index per branch is required".into()));
    }
    for (i, b) in branches.iter().enumerate() {
        if branches[..i].contains(b) {
            return Err(Error::InvalidArgument(format!("branch {b} repeated")));
        }
    }
    let describe = || {
        let parts: Vec<String> = branches.iter().zip(idx).map(|(b, i)| format!("{b}: {}", fmt_q(i))).collect();
        parts.join(", ")
    };
    let linear = branches.len() == 2
        && branches.iter().all(|b| b.is_smooth())
        && intersection(branches[0], branches[1]) == 1;
    if linear {
        if !idx[0].is_negative() || &idx[0] * &idx[1] != Q::one() {
            return Err(Error::NotCatalogGerm(describe()));
        }
        let (m, n) = eigenpair_of(&idx[0])?;
        let (m, n) = (m.to_u32(), n.to_u32());
        let (Some(m), Some(n)) = (m, n) else { return Err(Error::InvalidArgument("exponent overflow".into())) };
        return Ok(GermIntegral { factors: vec![(branches[0], m), (branches[1], n)] });
    }
    let mut out: Option<GermIntegral> = None;
    for c in catalog_germs() {
        let f = &c.germ.factors;
        if f.len() != branches.len() {
            continue;
        }
        for perm in permutations(f.len()) {
            let shape = (0..f.len()).all(|i| branch_type(branches[i]) == branch_type(f[perm[i]].0))
                && (0..f.len()).all(|i| {
                    (i + 1..f.len())
                        .all(|j| intersection(branches[i], branches[j]) == intersection(f[perm[i]].0, f[perm[j]].0))
                });
            if !shape {
                continue;
            }
            let hit = (0..f.len()).all(|i| separatrix_index(&c.germ, f[perm[i]].0).is_ok_and(|v| v == idx[i]));
            if hit {
                let g = GermIntegral { factors: (0..f.len()).map(|i| (branches[i], f[perm[i]].1)).collect() };
                match &out {
                    Some(o) if *o != g => {
                        return Err(Error::Inconsistent(format!("several catalog germs match {}", describe())))
                    }
                    _ => out = Some(g),
                }
            }
        }
    }
    out.ok_or_else(|| Error::NotCatalogGerm(describe()))
}
