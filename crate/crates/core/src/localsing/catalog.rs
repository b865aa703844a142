//! Normal-form catalog, terminality by forward search, and the collapse test
//! for germs sharing a `−1` curve.

use std::sync::OnceLock;

use num_traits::Zero;
use serde::Serialize;

use super::{blow_up_unchecked, intersection, separatrix_index, three_lines, Branch, GermIntegral};
use crate::error::{Error, Result};
use crate::rational::{qi, Q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogGerm {
    pub generation: u8,
    pub germ: GermIntegral,
    pub terminal: bool,
}

impl CatalogGerm {
    pub fn id(&self) -> String {
        self.germ.to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GermClass {
    pub generation: u8,
    /// Normal form of the matched catalog entry, or `x^n * y^m` for linear germs.
    pub id: String,
    pub terminal: bool,
}

/// Canonical form under relabeling of branches: per-branch
/// `(mult type, exponent, designated)` plus the pairwise intersection matrix,
/// minimized over orderings. Smooth branches all share type `(1, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GermKey {
    branches: Vec<((u32, u32), u32, bool)>,
    meets: Vec<u32>,
}

pub(crate) fn branch_type(b: Branch) -> (u32, u32) {
    match b {
        Branch::Binom(a, c) if a.min(c) > 1 => (a.min(c), a.max(c)),
        _ => (1, 1),
    }
}

pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

pub fn germ_key(h: &GermIntegral, designated: Option<Branch>) -> GermKey {
    let f = &h.factors;
    permutations(f.len())
        .into_iter()
        .map(|perm| {
            let branches = perm.iter().map(|&i| (branch_type(f[i].0), f[i].1, Some(f[i].0) == designated)).collect();
            let mut meets = Vec::new();
            for (x, &i) in perm.iter().enumerate() {
                for &j in &perm[x + 1..] {
                    meets.push(intersection(f[i].0, f[j].0));
                }
            }
            GermKey { branches, meets }
        })
        .min()
        .expect("at least one ordering")
}

fn y_binom(a: u32, b: u32) -> GermIntegral {
    GermIntegral { factors: vec![(Branch::Y, a), (Branch::Binom(2, 1), b)] }
}

fn listed() -> Vec<(u8, GermIntegral)> {
    let mut out = Vec::new();
    for (a, b, c) in [(1, 1, 1), (1, 1, 2), (1, 2, 3), (2, 2, 1), (3, 1, 1), (4, 3, 1), (5, 4, 1), (5, 3, 2)] {
        out.push((1, three_lines(a, b, c)));
    }
    for (a, b) in [(1, 1), (2, 1), (3, 1), (4, 1), (3, 2)] {
        out.push((2, y_binom(a, b)));
    }
    out.push((3, GermIntegral { factors: vec![(Branch::Binom(2, 3), 1)] }));
    out.push((3, GermIntegral { factors: vec![(Branch::Y, 2), (Branch::Binom(2, 3), 1)] }));
    out.push((4, GermIntegral { factors: vec![(Branch::Binom(2, 5), 1)] }));
    out
}

/// The non-linear normal forms with generation and terminality.
///
/// A germ is terminal when it never occurs at a point over the exceptional
/// line of a blow-up of another catalog germ. Linear germs blow up into linear
/// germs only, so the search runs over the catalog itself.
pub fn catalog_germs() -> &'static [CatalogGerm] {
    static CATALOG: OnceLock<Vec<CatalogGerm>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        let base = listed();
        let produced: Vec<GermKey> = base
            .iter()
            .flat_map(|(_, g)| blow_up_unchecked(g).points_on_e)
            .map(|p| germ_key(&p.germ, None))
            .collect();
        base.into_iter()
            .map(|(generation, germ)| {
                let terminal = !produced.contains(&germ_key(&germ, None));
                CatalogGerm { generation, germ, terminal }
            })
            .collect()
    })
}

fn linear_exponents(h: &GermIntegral) -> Option<(u32, u32)> {
    h.is_linear().then(|| (h.factors[0].1, h.factors[1].1))
}

pub fn classify_germ(h: &GermIntegral) -> Result<GermClass> {
    if let Some((n, m)) = linear_exponents(h) {
        let (n, m) = (n.max(m), n.min(m));
        return Ok(GermClass { generation: 0, id: GermIntegral::linear(n, m).to_string(), terminal: false });
    }
    let key = germ_key(h, None);
    catalog_germs()
        .iter()
        .find(|c| germ_key(&c.germ, None) == key)
        .map(|c| GermClass { generation: c.generation, id: c.id(), terminal: c.terminal })
        .ok_or_else(|| Error::NotCatalogGerm(h.to_string()))
}

pub fn is_terminal(h: &GermIntegral) -> Result<bool> {
    classify_germ(h).map(|c| c.terminal)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Admissibility {
    pub admissible: bool,
    pub witness: Option<GermIntegral>,
    /// Designated-branch indices in input order.
    #[serde(serialize_with = "crate::rational::q_vec::serialize")]
    pub indices: Vec<Q>,
    pub reason: String,
}

impl Admissibility {
    fn no(indices: Vec<Q>, reason: impl Into<String>) -> Self {
        Admissibility { admissible: false, witness: None, indices, reason: reason.into() }
    }
}

/// Germs of order `e` that may collapse onto a `−1` curve: linear `x^n y^m`
/// with `n + m = e` and catalog germs of that order.
fn collapse_candidates(e: u32) -> Vec<GermIntegral> {
    let mut out: Vec<GermIntegral> = (1..e).filter(|&n| n >= e - n).map(|n| GermIntegral::linear(n, e - n)).collect();
    out.extend(catalog_germs().iter().filter(|c| c.germ.order() == e).map(|c| c.germ.clone()));
    out
}

/// Decides whether the singular points `germs`, each with the branch lying on
/// a common rational curve, can sit together on a `−1` curve.
pub fn admissible_over_minus_one(germs: &[(GermIntegral, Branch)]) -> Result<Admissibility> {
    if germs.is_empty() {
        return Err(Error::InvalidArgument("no germs given".into()));
    }
    let mut indices = Vec::with_capacity(germs.len());
    for (h, b) in germs {
        indices.push(separatrix_index(h, *b)?);
    }
    let total: Q = indices.iter().sum();
    if total != qi(-1) {
        return Ok(Admissibility::no(indices, format!("designated indices sum to {total}, not -1")));
    }
    let exps: Vec<u32> = germs.iter().map(|(h, b)| h.exponent(*b).unwrap_or(0)).collect();
    let e = exps[0];
    if e.is_zero() || exps.iter().any(|&x| x != e) {
        return Ok(Admissibility::no(indices, format!("designated exponents {exps:?} differ")));
    }
    let mut want: Vec<GermKey> = germs.iter().map(|(h, b)| germ_key(h, Some(*b))).collect();
    want.sort();
    for cand in collapse_candidates(e) {
        let mut got: Vec<GermKey> =
            blow_up_unchecked(&cand).points_on_e.iter().map(|p| germ_key(&p.germ, Some(p.exceptional))).collect();
        got.sort();
        if got == want {
            let reason = format!("collapses to {cand}");
            return Ok(Admissibility { admissible: true, witness: Some(cand), indices, reason });
        }
    }
    Ok(Admissibility::no(indices, format!("no germ of order {e} blows up to this configuration")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localsing::{blow_up_germ, residue_index_oracle};

    fn g(s: &str) -> GermIntegral {
        s.parse().unwrap()
    }

    #[test]
    fn classification_examples() {
        let c = classify_germ(&g("x^5 * y^4 * (x - y)")).unwrap();
        assert_eq!((c.generation, c.terminal), (1, false));
        let c = classify_germ(&g("y^2 * (x^2 - y^3)")).unwrap();
        assert_eq!((c.generation, c.terminal), (3, false));
        let c = classify_germ(&g("x^2 - y^5")).unwrap();
        assert_eq!((c.generation, c.terminal), (4, true));
        assert_eq!(classify_germ(&g("x^2 * y^3")).unwrap().generation, 0);
        assert!(matches!(classify_germ(&g("x^4 * y * (x - y)")), Err(Error::NotCatalogGerm(_))));
        assert!(matches!(classify_germ(&g("y * (x^2 - y^5)")), Err(Error::NotCatalogGerm(_))));
    }

    #[test]
    fn symmetric_forms_match() {
        // Permuting line directions and swapping the two tangent smooth branches.
        assert_eq!(classify_germ(&g("x * y^5 * (x - y)^4")).unwrap().id, "x^5 * y^4 * (x - y)");
        assert_eq!(classify_germ(&g("y * (x^2 - y)^4")).unwrap().id, "y^4 * (x^2 - y)");
        assert_eq!(classify_germ(&g("x^4 * (x - y^2)")).unwrap().id, "y^4 * (x^2 - y)");
    }

    #[test]
    fn terminal_set() {
        let t: Vec<String> = catalog_germs().iter().filter(|c| c.terminal).map(|c| c.id()).collect();
        assert_eq!(
            t,
            [
                "x * y * (x - y)",
                "x^2 * y^2 * (x - y)",
                "x^3 * y * (x - y)",
                "y * (x^2 - y)",
                "y^3 * (x^2 - y)",
                "y^3 * (x^2 - y)^2",
                "(x^2 - y^3)",
                "(x^2 - y^5)"
            ]
        );
    }

    #[test]
    fn closure_and_generation_drop() {
        for c in catalog_germs() {
            for p in blow_up_germ(&c.germ).unwrap().points_on_e {
                let k = classify_germ(&p.germ).unwrap();
                assert!(k.generation < c.generation, "{} -> {}", c.id(), p.germ);
            }
        }
    }

    #[test]
    fn recursion_matches_residue_on_catalog() {
        for c in catalog_germs() {
            for (b, _) in &c.germ.factors {
                if b.is_smooth() {
                    assert_eq!(separatrix_index(&c.germ, *b).unwrap(), residue_index_oracle(&c.germ, *b).unwrap());
                }
            }
        }
    }

    #[test]
    fn combination_examples() {
        let a = admissible_over_minus_one(&[(g("y^4 * (x^2 - y)"), Branch::Y), (g("x^4 * y^2"), Branch::X)]).unwrap();
        assert!(a.admissible);
        assert_eq!(a.witness, Some(g("y^2 * (x^2 - y^3)")));

        let a = admissible_over_minus_one(&[(g("x^2 * y"), Branch::X), (g("x^2 * y"), Branch::X)]).unwrap();
        assert!(a.admissible);
        assert_eq!(a.witness, Some(g("x * y")));

        let a = admissible_over_minus_one(&[(g("x^3 * (x - y)^2"), Branch::X), (g("x^2 * y"), Branch::X)]).unwrap();
        assert!(!a.admissible);
    }

    #[test]
    fn terminal_germ_never_combines() {
        let h = g("y^3 * (x^2 - y)");
        for b in [Branch::Y, Branch::Binom(2, 1)] {
            let k = h.exponent(b).unwrap();
            let ind = separatrix_index(&h, b).unwrap();
            assert!(!admissible_over_minus_one(&[(h.clone(), b)]).unwrap().admissible);
            for c in catalog_germs() {
                for (pb, pk) in &c.germ.factors {
                    if *pk == k && pb.is_smooth() {
                        let a = admissible_over_minus_one(&[(h.clone(), b), (c.germ.clone(), *pb)]).unwrap();
                        assert!(!a.admissible, "{} with {}", h, c.germ);
                    }
                }
            }
            for n in 1..12 {
                let a = admissible_over_minus_one(&[(h.clone(), b), (GermIntegral::linear(k, n), Branch::X)]).unwrap();
                assert!(!a.admissible, "ind {ind} with x^{k} y^{n}");
            }
        }
    }
}
