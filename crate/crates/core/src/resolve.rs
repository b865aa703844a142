//! Resolution of the base points of a pencil `N/D` by point blow-ups, with
//! divisorial valuations tracked on every curve.

use serde::{Deserialize, Serialize};

use crate::dualgraph::{blow_down, BranchRef, Component, FiberGraph, Geom, IntersectionPoint, TypeLabel};
use crate::error::{Error, Result};
use crate::localsing::{intersection, parse_germ, transform, Branch, GermIntegral};

/// `numerator / denominator` near a base point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PencilGerm {
    pub numerator: GermIntegral,
    /// A single branch power.
    pub denominator: GermIntegral,
}

impl PencilGerm {
    pub fn new(numerator: GermIntegral, denominator: GermIntegral) -> Result<Self> {
        if denominator.factors.len() != 1 {
            return Err(Error::InvalidArgument("denominator must be a single branch power".into()));
        }
        let d = denominator.factors[0].0;
        if numerator.contains(d) {
            return Err(Error::InvalidArgument(format!("{d} divides both numerator and denominator")));
        }
        Ok(PencilGerm { numerator, denominator })
    }

    /// `NUM / DEN^k` in the germ grammar.
    pub fn parse(text: &str) -> Result<Self> {
        let (n, d) = text.split_once('/').ok_or_else(|| Error::Parse { pos: 0, msg: "expected 'N / D'".into() })?;
        let offset = n.len() + 1;
        let den = parse_germ(d).map_err(|e| match e {
            Error::Parse { pos, msg } => Error::Parse { pos: pos + offset, msg },
            e => e,
        })?;
        PencilGerm::new(parse_germ(n)?, den)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Origin {
    /// Strict transform of a curve present before any blow-up.
    Strict,
    /// Exceptional curve of the given blow-up, counted from 1.
    Exceptional { step: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolvedCurve {
    pub id: String,
    /// For germs of curves this is relative to an unknown starting value.
    pub self_int: i64,
    pub origin: Origin,
    pub nu_num: u64,
    pub nu_den: u64,
}

impl ResolvedCurve {
    /// Multiplicity in the fiber over 0, or 0.
    pub fn zero_mult(&self) -> u64 {
        self.nu_num.saturating_sub(self.nu_den)
    }

    pub fn inf_mult(&self) -> u64 {
        self.nu_den.saturating_sub(self.nu_num)
    }

    pub fn is_horizontal(&self) -> bool {
        self.nu_num == self.nu_den
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Fiber {
    Zero,
    Inf,
}

impl Fiber {
    fn mult(self, c: &ResolvedCurve) -> u64 {
        match self {
            Fiber::Zero => c.zero_mult(),
            Fiber::Inf => c.inf_mult(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionGraph {
    pub curves: Vec<ResolvedCurve>,
    /// Every point where two or more curves meet, with local contact orders.
    pub points: Vec<IntersectionPoint>,
    pub blowups: usize,
}

impl ResolutionGraph {
    pub fn curve(&self, id: &str) -> Option<&ResolvedCurve> {
        self.curves.iter().find(|c| c.id == id)
    }

    /// Curves with positive multiplicity in the chosen fiber, as a fiber graph of
    /// smooth rational curves. Genus comes from `Σ nᵢ KΓᵢ = 2g − 2` when that is
    /// admissible and is 0 otherwise.
    pub fn fiber(&self, which: Fiber) -> FiberGraph {
        let components: Vec<Component> = self
            .curves
            .iter()
            .filter(|c| which.mult(c) > 0)
            .map(|c| Component::rational(c.id.clone(), which.mult(c), c.self_int))
            .collect();
        let keep = |id: &str| components.iter().any(|c| c.id == id);
        let mut points = Vec::new();
        for p in &self.points {
            let idx: Vec<usize> = (0..p.branches.len()).filter(|&i| keep(&p.branches[i].component)).collect();
            if idx.len() < 2 {
                continue;
            }
            let mut np = IntersectionPoint {
                id: p.id.clone(),
                branches: idx.iter().map(|&i| p.branches[i].clone()).collect(),
                pairwise_mult: Vec::new(),
            };
            for (a, &i) in idx.iter().enumerate() {
                for (b, &j) in idx.iter().enumerate().skip(a + 1) {
                    np.set_mult(a, b, p.mult_between(i, j));
                }
            }
            points.push(np);
        }
        let kl: i64 = components.iter().map(|c| c.mult as i64 * c.k_degree).sum();
        let genus = if kl >= -2 && kl % 2 == 0 { ((kl + 2) / 2) as u32 } else { 0 };
        FiberGraph::new(genus, components, points)
    }
}

/// A point of the surface with the curves through it in local coordinates.
#[derive(Clone, Debug)]
struct Site {
    tag: String,
    branches: Vec<(usize, Branch)>,
}

/// Curves and points before resolution.
#[derive(Clone, Debug)]
pub struct Configuration {
    curves: Vec<ResolvedCurve>,
    sites: Vec<Site>,
    exceptional_count: Vec<(String, usize)>,
    blowups: usize,
}

impl Configuration {
    fn new() -> Self {
        Configuration { curves: Vec::new(), sites: Vec::new(), exceptional_count: Vec::new(), blowups: 0 }
    }

    fn add_curve(&mut self, id: &str, self_int: i64, nu_num: u64, nu_den: u64) -> usize {
        self.curves.push(ResolvedCurve { id: id.into(), self_int, origin: Origin::Strict, nu_num, nu_den });
        self.curves.len() - 1
    }

    /// A point named by `tag`; exceptional curves born there are `E1{tag}`, `E2{tag}`, ...
    fn add_site(&mut self, tag: &str, branches: Vec<(usize, Branch)>) {
        self.sites.push(Site { tag: tag.into(), branches });
    }

    fn indeterminate(&self, s: &Site) -> bool {
        let c = |i: usize| &self.curves[i];
        s.branches.iter().any(|&(i, _)| c(i).nu_num > c(i).nu_den)
            && s.branches.iter().any(|&(i, _)| c(i).nu_den > c(i).nu_num)
    }

    fn blow_up(&mut self, si: usize) {
        let site = self.sites.remove(si);
        self.blowups += 1;
        let (mut nn, mut nd) = (0, 0);
        for &(i, b) in &site.branches {
            let m = b.mult() as u64;
            nn += self.curves[i].nu_num * m;
            nd += self.curves[i].nu_den * m;
            self.curves[i].self_int -= (m * m) as i64;
        }
        let k = match self.exceptional_count.iter_mut().find(|(t, _)| *t == site.tag) {
            Some((_, k)) => {
                *k += 1;
                *k
            }
            None => {
                self.exceptional_count.push((site.tag.clone(), 1));
                1
            }
        };
        let e = self.curves.len();
        self.curves.push(ResolvedCurve {
            id: format!("E{k}{}", site.tag),
            self_int: -1,
            origin: Origin::Exceptional { step: self.blowups },
            nu_num: nn,
            nu_den: nd,
        });
        let mut fresh: Vec<(crate::localsing::Position, Site)> = Vec::new();
        for &(i, b) in &site.branches {
            let (pos, nb) = transform(b);
            let slot = match fresh.iter().position(|(p, _)| *p == pos) {
                Some(s) => s,
                None => {
                    let s = Site { tag: site.tag.clone(), branches: vec![(e, pos.exceptional())] };
                    fresh.push((pos, s));
                    fresh.len() - 1
                }
            };
            fresh[slot].1.branches.push((i, nb));
        }
        fresh.sort_by_key(|(p, _)| *p);
        self.sites.extend(fresh.into_iter().map(|(_, s)| s));
    }

    /// Blows up indeterminacy points in order of appearance until none remain.
    pub fn resolve(mut self) -> ResolutionGraph {
        while let Some(si) = self.sites.iter().position(|s| self.indeterminate(s)) {
            self.blow_up(si);
        }
        let mut points = Vec::new();
        for (n, s) in self.sites.iter().enumerate() {
            if s.branches.len() < 2 {
                continue;
            }
            let mut p = IntersectionPoint {
                id: format!("q{}", n + 1),
                branches: s.branches.iter().map(|&(i, _)| BranchRef::new(self.curves[i].id.clone(), "0")).collect(),
                pairwise_mult: Vec::new(),
            };
            for a in 0..s.branches.len() {
                for b in a + 1..s.branches.len() {
                    p.set_mult(a, b, intersection(s.branches[a].1, s.branches[b].1) as u64);
                }
            }
            points.push(p);
        }
        ResolutionGraph { curves: self.curves, points, blowups: self.blowups }
    }
}

fn branch_name(b: Branch) -> String {
    match b {
        Branch::X => "X".into(),
        Branch::Y => "Y".into(),
        Branch::Diag => "D".into(),
        Branch::Binom(a, c) => format!("B{a}_{c}"),
    }
}

/// Local resolution at the origin. Strict transforms are named `X`, `Y`, `D`
/// or `Ba_b` after their branch and start at self-intersection 0.
pub fn resolve_pencil(p: &PencilGerm) -> ResolutionGraph {
    let mut cfg = Configuration::new();
    let mut here = Vec::new();
    for &(b, k) in &p.numerator.factors {
        here.push((cfg.add_curve(&branch_name(b), 0, k as u64, 0), b));
    }
    let (d, k) = p.denominator.factors[0];
    here.push((cfg.add_curve(&branch_name(d), 0, 0, k as u64), d));
    cfg.add_site("", here);
    cfg.resolve()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GlobalExample {
    pub resolution: ResolutionGraph,
    pub zero: FiberGraph,
    pub inf: FiberGraph,
}

/// `x⁵y⁴(x − y) / z¹⁰` on the projective plane: lines `Lx = {x = 0}`,
/// `Ly = {y = 0}`, `Ld = {x = y}` through the origin and `Linf` at infinity.
///
/// Each line meets `Linf` at a base point where, with `u` the equation of
/// `Linf` and `v` that of the line, the pencil reads `v^k / u^10`. Curves
/// born over the base point of `Lx`, `Ly`, `Ld` carry the suffix `x`, `y`, `d`.
pub fn assemble_global_example() -> GlobalExample {
    let mut cfg = Configuration::new();
    let lx = cfg.add_curve("Lx", 1, 5, 0);
    let ly = cfg.add_curve("Ly", 1, 4, 0);
    let ld = cfg.add_curve("Ld", 1, 1, 0);
    let inf = cfg.add_curve("Linf", 1, 0, 10);
    cfg.add_site("o", vec![(lx, Branch::X), (ly, Branch::Y), (ld, Branch::Diag)]);
    for (tag, line) in [("x", lx), ("y", ly), ("d", ld)] {
        cfg.add_site(tag, vec![(inf, Branch::X), (line, Branch::Y)]);
    }
    let resolution = cfg.resolve();
    let zero = resolution.fiber(Fiber::Zero);
    let inf = resolution.fiber(Fiber::Inf);
    GlobalExample { resolution, zero, inf }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CollapseReport {
    pub fiber: FiberGraph,
    pub contracted: Vec<String>,
    /// `−1` curves left in place, with the reason.
    pub halted: Vec<(String, String)>,
}

/// Contracts smooth rational `−1` curves until none can be contracted.
pub fn collapse_all(g: &FiberGraph) -> CollapseReport {
    let mut cur = g.clone();
    let mut contracted = Vec::new();
    loop {
        let next = cur
            .components
            .iter()
            .filter(|c| c.label() == TypeLabel::MinusOneCurve && c.geom == Geom::SmoothRational)
            .find_map(|c| blow_down(&cur, &c.id).ok().map(|g| (c.id.clone(), g)));
        match next {
            Some((id, g)) => {
                contracted.push(id);
                cur = g;
            }
            None => break,
        }
    }
    let halted = cur
        .components
        .iter()
        .filter(|c| c.label() == TypeLabel::MinusOneCurve)
        .map(|c| {
            let reason = match blow_down(&cur, &c.id) {
                Err(Error::NotContractible { reason, .. }) => reason,
                Err(e) => e.to_string(),
                Ok(_) => unreachable!("contractible curves were contracted"),
            };
            (c.id.clone(), reason)
        })
        .collect();
    CollapseReport { fiber: cur, contracted, halted }
}

/// Components with self-intersection `−3` or `+3`; the classification quoted for
/// the global example names a `+3` component, impossible in a fiber.
pub fn type20_note(g: &FiberGraph) -> Option<String> {
    let hits: Vec<String> =
        g.components.iter().filter(|c| c.self_int.abs() == 3).map(|c| format!("{} ({})", c.id, c.self_int)).collect();
    (!hits.is_empty()).then(|| {
        format!("self-intersection 3 is quoted for this fiber; computed values give {}", hits.join(", "))
    })
}
