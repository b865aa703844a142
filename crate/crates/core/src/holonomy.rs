//! Holonomy orders, elliptic holonomy invariants, monodromy order and the
//! isotriviality test on multiplicities.

use std::fmt;

use serde::Serialize;

use crate::dualgraph::{cycle_rank, normal_crossings, FiberGraph, Geom};
use crate::error::{Error, Result};
use crate::indices::{indices_from_multiplicities, multiplicities_from_eigenpairs, IndexAssignment};
use crate::rational::{gcd_u64, lcm_u64};
use crate::resolve::collapse_all;

/// Order of the rotation `exp(−2πi n/m)` on a transversal to the branch with eigenvalue `m`.
pub fn local_holonomy_order(m: u64, n: u64) -> u64 {
    m / gcd_u64(m, n)
}

/// Eigenpairs at the nodes on `c`, each oriented with `m` on a branch of `c`.
fn pairs_on(a: &IndexAssignment, c: &str) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for node in &a.nodes {
        let (m, n) = a.eigenpairs[&node.point];
        for (k, b) in node.branches.iter().enumerate() {
            if b.component == c {
                out.push(if k == 0 { (m, n) } else { (n, m) });
            }
        }
    }
    out
}

/// Lcm of the local holonomy orders at the singular points of `c`.
pub fn generated_holonomy_order(g: &FiberGraph, a: &IndexAssignment, c: &str) -> Result<u64> {
    if g.component(c).is_none() {
        return Err(Error::UnknownComponent(c.to_string()));
    }
    Ok(pairs_on(a, c).into_iter().map(|(m, n)| local_holonomy_order(m, n)).fold(1, lcm_u64))
}

/// The multiplicity of `c`.
pub fn total_holonomy_order(g: &FiberGraph, c: &str) -> Result<u64> {
    g.component(c).map(|c| c.mult).ok_or_else(|| Error::UnknownComponent(c.to_string()))
}

/// Transmits holonomy orders across nodes from one component and compares the
/// primitive result with the multiplicities.
pub fn transmission_consistent(g: &FiberGraph) -> Result<bool> {
    let a = indices_from_multiplicities(g)?;
    Ok(multiplicities_from_eigenpairs(g, &a)? == g.mults())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EllipticGenerator {
    /// `loop k` for a cycle of the dual graph, else the carrying component.
    pub source: String,
    pub admissible_orders: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EllipticInvariants {
    pub generators: Vec<EllipticGenerator>,
    /// Elliptic or pinched components whose multiplicity is not 1 or 2.
    pub violations: Vec<String>,
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// One generator per unit of cycle rank: graph loops are trivial, a smooth
/// elliptic component gives two and a pinched one gives one, each of order
/// dividing the multiplicity.
pub fn elliptic_invariants(g: &FiberGraph) -> EllipticInvariants {
    let handles: usize = g.components.iter().map(|c| c.geom.handles()).sum();
    let loops = cycle_rank(g) - handles;
    let mut generators: Vec<EllipticGenerator> =
        (1..=loops).map(|k| EllipticGenerator { source: format!("loop {k}"), admissible_orders: vec![1] }).collect();
    let mut violations = Vec::new();
    for c in &g.components {
        let count = match c.geom {
            Geom::SmoothElliptic => 2,
            Geom::NodalRational => 1,
            _ => continue,
        };
        if !matches!(c.mult, 1 | 2) {
            violations.push(format!("{} has multiplicity {}", c.id, c.mult));
        }
        for _ in 0..count {
            generators.push(EllipticGenerator { source: c.id.clone(), admissible_orders: divisors(c.mult) });
        }
    }
    EllipticInvariants { generators, violations }
}

/// Lcm of the multiplicities on the normal-crossings model of the minimal fiber.
///
/// Contracting `−1` curves first makes the value independent of extra blow-ups.
pub fn monodromy_order(g: &FiberGraph) -> u64 {
    let minimal = collapse_all(g).fiber;
    normal_crossings(&minimal).mults().into_iter().fold(1, lcm_u64)
}

/// Order of the monodromy on `H¹` from the trace formula on a normal-crossings
/// model: `tr(Tᵏ) = 2 − Σ_{nᵢ | k} nᵢ χ(Γᵢ°)`, with `Γᵢ°` the component minus
/// its points. Returns `None` when no `k ≤ bound` gives `Tᵏ = 1`.
pub fn homological_monodromy_order(g: &FiberGraph, bound: u64) -> Option<u64> {
    let nc = normal_crossings(g);
    let dim = 2 * g.genus as i64;
    let chi: Vec<(u64, i64)> = nc
        .components
        .iter()
        .map(|c| {
            let pts = nc.points.iter().map(|p| p.branches.iter().filter(|b| b.component == c.id).count()).sum::<usize>();
            let gen = c.arithmetic_genus();
            let base = if gen.is_integer() { 2 - 2 * gen.to_integer().try_into().unwrap_or(0i64) } else { 2 };
            (c.mult, base - pts as i64)
        })
        .collect();
    (1..=bound).find(|&k| {
        let lef: i64 = chi.iter().filter(|(n, _)| k % n == 0).map(|(n, x)| *n as i64 * x).sum();
        2 - lef == dim
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum GroupCandidate {
    /// Cyclic, with the order a multiple of the given value.
    Cyclic(u64),
    A4,
    S4,
    Dihedral(u64),
}

impl fmt::Display for GroupCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupCandidate::Cyclic(1) => write!(f, "cyclic"),
            GroupCandidate::Cyclic(k) => write!(f, "cyclic of order divisible by {k}"),
            GroupCandidate::A4 => write!(f, "A4"),
            GroupCandidate::S4 => write!(f, "S4"),
            GroupCandidate::Dihedral(n) => write!(f, "D{n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IsotrivialVerdict {
    pub admissible: bool,
    /// Primes outside `{2, 3, 5}` dividing some multiplicity.
    pub offending_primes: Vec<u64>,
    pub candidates: Vec<GroupCandidate>,
}

const DIHEDRAL: [u64; 9] = [6, 8, 9, 10, 12, 15, 16, 18, 20];

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Admissible iff every multiplicity has only the prime factors 2, 3 and 5.
pub fn isotrivial_admissibility(g: &FiberGraph) -> IsotrivialVerdict {
    verdict_for(&g.mults())
}

pub fn verdict_for(mults: &[u64]) -> IsotrivialVerdict {
    let mut offending: Vec<u64> =
        mults.iter().flat_map(|&m| prime_factors(m)).filter(|p| ![2, 3, 5].contains(p)).collect();
    offending.sort();
    offending.dedup();
    if !offending.is_empty() {
        return IsotrivialVerdict { admissible: false, offending_primes: offending, candidates: Vec::new() };
    }
    let candidates = if mults.iter().any(|m| m % 5 == 0) {
        vec![GroupCandidate::Cyclic(5), GroupCandidate::Dihedral(10), GroupCandidate::Dihedral(15), GroupCandidate::Dihedral(20)]
    } else {
        let mut v = vec![GroupCandidate::Cyclic(1), GroupCandidate::A4, GroupCandidate::S4];
        v.extend(DIHEDRAL.iter().map(|&n| GroupCandidate::Dihedral(n)));
        v
    };
    IsotrivialVerdict { admissible: true, offending_primes: Vec::new(), candidates }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentHolonomy {
    pub id: String,
    pub generated_order: u64,
    pub total_order: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HolonomyReport {
    pub per_component: Vec<ComponentHolonomy>,
    pub elliptic: EllipticInvariants,
    pub monodromy_order: u64,
    /// Whether transmitting orders across nodes reproduces the multiplicities.
    pub transmission_consistent: bool,
    pub isotrivial: IsotrivialVerdict,
}

/// Full report; generated orders come from the normal-crossings model.
pub fn holonomy_report(g: &FiberGraph) -> Result<HolonomyReport> {
    let nc = if g.all_nodal() { g.clone() } else { normal_crossings(g) };
    let a = indices_from_multiplicities(&nc)?;
    let per_component = g
        .components
        .iter()
        .map(|c| {
            Ok(ComponentHolonomy {
                id: c.id.clone(),
                generated_order: generated_holonomy_order(&nc, &a, &c.id)?,
                total_order: total_holonomy_order(g, &c.id)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HolonomyReport {
        per_component,
        elliptic: elliptic_invariants(g),
        monodromy_order: monodromy_order(g),
        transmission_consistent: multiplicities_from_eigenpairs(&nc, &a)? == nc.mults(),
        isotrivial: isotrivial_admissibility(g),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dualgraph::{blow_up, BlowUpLocus, Component};
    use crate::fixtures::{model4, rational_ring};

    /// Number of turns of `exp(−2πi n/m)` that return all `m` points of a
    /// nearby fiber on the transversal to themselves.
    fn brute_order(m: u64, n: u64) -> u64 {
        let tau = std::f64::consts::TAU;
        let pts: Vec<(f64, f64)> = (0..m).map(|k| (tau * k as f64 / m as f64).sin_cos()).collect();
        let rot = -tau * n as f64 / m as f64;
        (1..=m)
            .find(|&r| {
                let a = rot * r as f64;
                pts.iter().all(|&(s, c)| {
                    let (s2, c2) = (s * a.cos() + c * a.sin(), c * a.cos() - s * a.sin());
                    (s2 - s).abs() < 1e-9 && (c2 - c).abs() < 1e-9
                })
            })
            .unwrap()
    }

    #[test]
    fn local_orders() {
        assert_eq!(local_holonomy_order(4, 1), 4);
        assert_eq!(local_holonomy_order(1, 1), 1);
        assert_eq!(local_holonomy_order(4, 2), 2);
        for m in 1..13 {
            for n in 1..13 {
                assert_eq!(local_holonomy_order(m, n), brute_order(m, n), "({m}, {n})");
            }
        }
    }

    #[test]
    fn model4_orders() {
        let g = model4();
        let a = indices_from_multiplicities(&g).unwrap();
        assert_eq!(generated_holonomy_order(&g, &a, "S7").unwrap(), 4);
        assert_eq!(generated_holonomy_order(&g, &a, "S6").unwrap(), 1);
        let totals: Vec<u64> = g.components.iter().map(|c| total_holonomy_order(&g, &c.id).unwrap()).collect();
        assert_eq!(totals, vec![1, 2, 2, 3, 2, 1, 4]);
        let r = holonomy_report(&g).unwrap();
        assert!(r.transmission_consistent);
        assert!(r.per_component.iter().all(|c| c.total_order % c.generated_order == 0));
        assert!(r.elliptic.generators.is_empty());
        assert_eq!(r.monodromy_order, 12);
    }

    #[test]
    fn monodromy_survives_blow_ups() {
        let g = model4();
        for p in &g.points {
            let b = blow_up(&g, &BlowUpLocus::Point { id: p.id.clone() }).unwrap();
            assert_eq!(monodromy_order(&b), 12);
        }
        for c in &g.components {
            let b = blow_up(&g, &BlowUpLocus::Free { component: c.id.clone() }).unwrap();
            assert_eq!(monodromy_order(&b), 12);
        }
    }

    #[test]
    fn homological_order_of_model4() {
        // Trace formula on H¹; differs from the multiplicity lcm.
        assert_eq!(homological_monodromy_order(&model4(), 100), Some(4));
    }

    #[test]
    fn regular_fiber() {
        let g = FiberGraph::new(1, vec![Component::new("S1", 1, 0, 0, Geom::SmoothElliptic)], vec![]);
        assert_eq!(monodromy_order(&g), 1);
        assert_eq!(total_holonomy_order(&g, "S1").unwrap(), 1);
        let inv = elliptic_invariants(&g);
        assert_eq!(inv.generators.len(), 2);
        assert!(inv.violations.is_empty());
    }

    #[test]
    fn elliptic_double_fiber_is_ambiguous() {
        let g = FiberGraph::new(1, vec![Component::new("S1", 2, 0, 0, Geom::SmoothElliptic)], vec![]);
        let inv = elliptic_invariants(&g);
        assert_eq!(inv.generators.len(), 2);
        assert!(inv.generators.iter().all(|x| x.admissible_orders == vec![1, 2]));
        let g = FiberGraph::new(1, vec![Component::new("S1", 3, 0, 0, Geom::SmoothElliptic)], vec![]);
        assert_eq!(elliptic_invariants(&g).violations.len(), 1);
    }

    #[test]
    fn rational_loop_is_trivial() {
        let inv = elliptic_invariants(&rational_ring(4));
        assert_eq!(inv.generators, vec![EllipticGenerator { source: "loop 1".into(), admissible_orders: vec![1] }]);
    }

    #[test]
    fn isotriviality() {
        let v = isotrivial_admissibility(&model4());
        assert!(v.admissible);
        assert_eq!(v.candidates.len(), 12);
        let v = verdict_for(&[1, 7, 2]);
        assert!(!v.admissible);
        assert_eq!(v.offending_primes, vec![7]);
        let v = verdict_for(&[5, 1]);
        let names: Vec<String> = v.candidates.iter().map(|c| c.to_string()).collect();
        assert_eq!(names, ["cyclic of order divisible by 5", "D10", "D15", "D20"]);
        assert_eq!(verdict_for(&[3, 2, 1]), verdict_for(&[1, 3, 2]));
    }
}
