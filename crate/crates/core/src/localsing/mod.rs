//! First-integral germs `∏ bⱼ^{kⱼ}` built from lines and binomials, their
//! blow-ups, separatrix indices and the normal-form catalog.

mod catalog;
mod parse;
pub mod poly;
mod residue;

pub use catalog::{
    admissible_over_minus_one, catalog_germs, classify_germ, germ_key, is_terminal, Admissibility, CatalogGerm,
    GermClass,
};
pub(crate) use catalog::{branch_type, permutations};
pub use parse::parse_germ;
pub use residue::{residue_index_oracle, residue_index_with_order, tangent_field, DEFAULT_ORDER};

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{q, qi, Q};
use poly::Poly;

/// Irreducible curve germ at the origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    /// `{x = 0}`
    X,
    /// `{y = 0}`
    Y,
    /// `{x = y}`
    Diag,
    /// `{x^a = y^b}` with `gcd(a, b) = 1` and `(a, b) ≠ (1, 1)`.
    Binom(u32, u32),
}

impl Branch {
    pub fn binom(a: u32, b: u32) -> Result<Branch> {
        if a == 0 || b == 0 || a.gcd(&b) != 1 {
            return Err(Error::InvalidArgument(format!("x^{a} - y^{b} is not an irreducible branch")));
        }
        Ok(if a == 1 && b == 1 { Branch::Diag } else { Branch::Binom(a, b) })
    }

    /// Multiplicity at the origin.
    pub fn mult(self) -> u32 {
        match self {
            Branch::Binom(a, b) => a.min(b),
            _ => 1,
        }
    }

    pub fn is_smooth(self) -> bool {
        self.mult() == 1
    }

    pub fn poly(self) -> Poly {
        let (x, y) = (Poly::x(), Poly::y());
        match self {
            Branch::X => x,
            Branch::Y => y,
            Branch::Diag => &x - &y,
            Branch::Binom(a, b) => &x.pow(a) - &y.pow(b),
        }
    }
}

/// Local intersection multiplicity of two distinct branches.
pub fn intersection(a: Branch, b: Branch) -> u32 {
    use Branch::*;
    match (a, b) {
        (Binom(p, r), Binom(s, t)) => (r * s).min(p * t),
        (X, Binom(_, t)) | (Binom(_, t), X) => t,
        (Y, Binom(s, _)) | (Binom(s, _), Y) => s,
        (Diag, Binom(s, t)) | (Binom(s, t), Diag) => s.min(t),
        _ => 1,
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branch::X => write!(f, "x"),
            Branch::Y => write!(f, "y"),
            Branch::Diag => write!(f, "(x - y)"),
            Branch::Binom(a, b) => {
                let p = |v: &str, e: u32| if e == 1 { v.to_string() } else { format!("{v}^{e}") };
                write!(f, "({} - {})", p("x", *a), p("y", *b))
            }
        }
    }
}

impl Serialize for Branch {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Product of distinct branch powers, up to a unit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GermIntegral {
    pub factors: Vec<(Branch, u32)>,
}

impl GermIntegral {
    pub fn new(factors: Vec<(Branch, u32)>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidArgument("a germ needs at least one factor".into()));
        }
        for (i, (b, k)) in factors.iter().enumerate() {
            if *k == 0 {
                return Err(Error::InvalidArgument(format!("exponent of {b} must be positive")));
            }
            if factors[..i].iter().any(|(c, _)| c == b) {
                return Err(Error::InvalidArgument(format!("branch {b} repeated")));
            }
        }
        Ok(GermIntegral { factors })
    }

    pub fn linear(n: u32, m: u32) -> Self {
        GermIntegral { factors: vec![(Branch::X, n), (Branch::Y, m)] }
    }

    pub fn contains(&self, b: Branch) -> bool {
        self.exponent(b).is_some()
    }

    pub fn exponent(&self, b: Branch) -> Option<u32> {
        self.factors.iter().find(|(c, _)| *c == b).map(|(_, k)| *k)
    }

    /// Total vanishing order at the origin.
    pub fn order(&self) -> u32 {
        self.factors.iter().map(|(b, k)| b.mult() * k).sum()
    }

    /// A single smooth factor: the foliation is regular at the origin.
    pub fn is_regular(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].0.is_smooth()
    }

    /// Two smooth transverse factors, i.e. `x^n y^m` after a coordinate change.
    pub fn is_linear(&self) -> bool {
        self.factors.len() == 2
            && self.factors.iter().all(|(b, _)| b.is_smooth())
            && intersection(self.factors[0].0, self.factors[1].0) == 1
    }

    pub fn poly(&self) -> Poly {
        self.factors.iter().fold(Poly::constant(qi(1)), |acc, (b, k)| &acc * &b.poly().pow(*k))
    }
}

impl fmt::Display for GermIntegral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(b, k)| if *k == 1 { b.to_string() } else { format!("{b}^{k}") })
            .collect();
        f.write_str(&parts.join(" * "))
    }
}

impl FromStr for GermIntegral {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_germ(s)
    }
}

impl Serialize for GermIntegral {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Where a point sits on the exceptional line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Position {
    /// Origin of the chart `(x, y) = (x₁, x₁y₁)`; the exceptional line is `{x₁ = 0}`.
    E0,
    /// `y₁ = 1` in the same chart.
    E1,
    /// Origin of the chart `(x, y) = (x₂y₂, y₂)`; the exceptional line is `{y₂ = 0}`.
    EInf,
}

impl Position {
    pub fn exceptional(self) -> Branch {
        match self {
            Position::E0 | Position::E1 => Branch::X,
            Position::EInf => Branch::Y,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointOnE {
    pub position: Position,
    pub germ: GermIntegral,
    /// Exceptional branch in chart coordinates; always a factor of `germ`.
    pub exceptional: Branch,
    /// Original branch and its strict transform, for every branch through this point.
    pub strict: Vec<(Branch, Branch)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlowUpResult {
    pub exc_mult: u32,
    pub points_on_e: Vec<PointOnE>,
}

/// Position and strict transform of `b` after one blow-up of the origin.
pub fn transform(b: Branch) -> (Position, Branch) {
    match b {
        Branch::X => (Position::EInf, Branch::X),
        Branch::Y => (Position::E0, Branch::Y),
        Branch::Diag => (Position::E1, Branch::Y),
        Branch::Binom(a, c) if a > c => (Position::E0, Branch::binom(a - c, c).expect("coprime")),
        Branch::Binom(a, c) => (Position::EInf, Branch::binom(a, c - a).expect("coprime")),
    }
}

pub fn blow_up_germ(h: &GermIntegral) -> Result<BlowUpResult> {
    if h.is_regular() {
        return Err(Error::RegularGerm);
    }
    Ok(blow_up_unchecked(h))
}

/// Blow-up without the singularity check; a regular germ yields one point.
pub fn blow_up_unchecked(h: &GermIntegral) -> BlowUpResult {
    let exc_mult = h.order();
    let mut points: Vec<PointOnE> = Vec::new();
    for &(b, k) in &h.factors {
        let (pos, nb) = transform(b);
        let slot = match points.iter().position(|p| p.position == pos) {
            Some(i) => i,
            None => {
                let e = pos.exceptional();
                points.push(PointOnE {
                    position: pos,
                    germ: GermIntegral { factors: vec![(e, exc_mult)] },
                    exceptional: e,
                    strict: Vec::new(),
                });
                points.len() - 1
            }
        };
        points[slot].germ.factors.push((nb, k));
        points[slot].strict.push((b, nb));
    }
    points.sort_by_key(|p| p.position);
    BlowUpResult { exc_mult, points_on_e: points }
}

const MAX_DEPTH: usize = 32;

/// Index of the separatrix `b` by the blow-up recursion
/// `Ind₀(b) = Ind_q(b̃) + m₀(b)·(E·b̃)_q`, bottoming out at linear and regular germs.
pub fn separatrix_index(h: &GermIntegral, b: Branch) -> Result<Q> {
    index_rec(h, b, 0)
}

fn index_rec(h: &GermIntegral, b: Branch, depth: usize) -> Result<Q> {
    let kb = h.exponent(b).ok_or_else(|| Error::InvalidArgument(format!("{b} is not a factor of {h}")))?;
    if h.is_regular() {
        return Ok(Q::zero());
    }
    if h.is_linear() {
        let other = h.factors.iter().find(|(c, _)| *c != b).map(|(_, k)| *k).unwrap_or(0);
        return Ok(q(-(other as i64), kb as i64));
    }
    if depth >= MAX_DEPTH {
        return Err(Error::DepthExceeded(MAX_DEPTH));
    }
    let up = blow_up_unchecked(h);
    let p = up
        .points_on_e
        .iter()
        .find(|p| p.strict.iter().any(|(o, _)| *o == b))
        .expect("every factor has a strict transform");
    let nb = p.strict.iter().find(|(o, _)| *o == b).map(|(_, n)| *n).unwrap();
    let meet = intersection(p.exceptional, nb);
    Ok(index_rec(&p.germ, nb, depth + 1)? + qi(b.mult() as i64 * meet as i64))
}

/// `k(2 − α) + Σ gcd(kᵢ, k)` with `k = Σ kᵢ`.
pub fn euler_char_compactification(ks: &[u64]) -> i64 {
    let k: u64 = ks.iter().sum();
    let alpha = ks.len() as i64;
    k as i64 * (2 - alpha) + ks.iter().map(|&ki| ki.gcd(&k) as i64).sum::<i64>()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Triple {
    /// Non-increasing exponents.
    pub ks: [u64; 3],
    pub chi: i64,
}

/// Exponent triples of three transverse lines with coprime exponents whose
/// compactified level curve has `χ = 0` (with every `gcd(kᵢ, k) = kᵢ`) or `χ = −2`.
pub fn enumerate_generation_one(max_k: u64) -> Vec<Triple> {
    let mut out = Vec::new();
    for a in 1..=max_k {
        for b in 1..=a {
            for c in 1..=b {
                let k = a + b + c;
                if k > max_k || a.gcd(&b).gcd(&c) != 1 {
                    continue;
                }
                let ks = [a, b, c];
                let chi = euler_char_compactification(&ks);
                let divides = ks.iter().all(|&x| x.gcd(&k) == x);
                if (chi == 0 && divides) || chi == -2 {
                    out.push(Triple { ks, chi });
                }
            }
        }
    }
    out.sort_by_key(|t| (std::cmp::Reverse(t.chi), t.ks.iter().sum::<u64>(), t.ks));
    out
}

/// Three-line germ `x^a y^b (x − y)^c`.
pub fn three_lines(a: u32, b: u32, c: u32) -> GermIntegral {
    GermIntegral { factors: vec![(Branch::X, a), (Branch::Y, b), (Branch::Diag, c)] }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GermIntegral {
        s.parse().unwrap()
    }

    /// Index of a smooth branch through a point where all branches are smooth:
    /// `−Σ_{j≠i} kⱼ (bᵢ·bⱼ) / kᵢ`.
    fn closed_form(h: &GermIntegral, b: Branch) -> Q {
        let kb = h.exponent(b).unwrap() as i64;
        let s: i64 = h.factors.iter().filter(|(c, _)| *c != b).map(|(c, k)| *k as i64 * intersection(b, *c) as i64).sum();
        q(-s, kb)
    }

    #[test]
    fn euler_characteristics() {
        assert_eq!(euler_char_compactification(&[1, 1, 1]), 0);
        assert_eq!(euler_char_compactification(&[5, 3, 2]), -2);
        assert_eq!(euler_char_compactification(&[2, 2, 2]), 0);
    }

    #[test]
    fn generation_one_scan_is_stable() {
        let at10 = enumerate_generation_one(10);
        assert_eq!(enumerate_generation_one(100), at10);
        assert!(at10.iter().all(|t| t.ks.iter().sum::<u64>() <= 10));
    }

    #[test]
    fn linear_blow_up() {
        let r = blow_up_germ(&g("x * y")).unwrap();
        assert_eq!(r.exc_mult, 2);
        assert_eq!(r.points_on_e.len(), 2);
        for p in &r.points_on_e {
            assert!(p.germ.is_linear());
            let mut e: Vec<u32> = p.germ.factors.iter().map(|f| f.1).collect();
            e.sort();
            assert_eq!(e, vec![1, 2]);
        }
    }

    #[test]
    fn quoted_blow_ups() {
        let r = blow_up_germ(&g("y * (x^2 - y)")).unwrap();
        assert_eq!(r.exc_mult, 2);
        assert_eq!(r.points_on_e.len(), 1);
        assert_eq!(r.points_on_e[0].germ, three_lines(2, 1, 1).reordered(&[Branch::X, Branch::Y, Branch::Diag]));
        let r = blow_up_germ(&g("(x^2 - y^5)")).unwrap();
        assert_eq!(r.exc_mult, 2);
        assert_eq!(r.points_on_e[0].position, Position::EInf);
        assert_eq!(r.points_on_e[0].germ, g("y^2 * (x^2 - y^3)"));
        assert!(matches!(blow_up_germ(&g("y^3")), Err(Error::RegularGerm)));
    }

    #[test]
    fn quoted_indices() {
        assert_eq!(separatrix_index(&g("y^3 * (x^2 - y)"), Branch::Y).unwrap(), q(-2, 3));
        assert_eq!(separatrix_index(&g("y^3 * (x^2 - y)"), Branch::Binom(2, 1)).unwrap(), qi(-6));
        assert_eq!(separatrix_index(&g("y^4 * (x^2 - y)"), Branch::Y).unwrap(), q(-1, 2));
        assert_eq!(separatrix_index(&g("y^4 * (x^2 - y)"), Branch::Binom(2, 1)).unwrap(), qi(-8));
        assert_eq!(separatrix_index(&g("y^2 * (x^2 - y)"), Branch::Y).unwrap(), qi(-1));
        assert_eq!(separatrix_index(&g("(x^2 - y^3)"), Branch::Binom(2, 3)).unwrap(), qi(0));
    }

    #[test]
    fn three_lines_follow_the_closed_form() {
        for a in 1..6 {
            for b in 1..6 {
                for c in 1..6 {
                    let h = three_lines(a, b, c);
                    assert_eq!(separatrix_index(&h, Branch::Y).unwrap(), q(-((a + c) as i64), b as i64));
                    for (br, _) in &h.factors {
                        assert_eq!(separatrix_index(&h, *br).unwrap(), closed_form(&h, *br));
                    }
                }
            }
        }
    }

    #[test]
    fn exceptional_indices_sum_to_minus_one() {
        for h in ["x^3 * y", "x * y * (x - y)", "y^4 * (x^2 - y)", "y^2 * (x^2 - y^3)", "(x^2 - y^5)", "(x^2 - y^3)"] {
            let h = g(h);
            let r = blow_up_germ(&h).unwrap();
            assert_eq!(r.exc_mult, h.order());
            let s: Q = r.points_on_e.iter().map(|p| separatrix_index(&p.germ, p.exceptional).unwrap()).sum();
            assert_eq!(s, qi(-1), "{h}");
        }
    }

    #[test]
    fn intersections_are_symmetric() {
        let bs = [Branch::X, Branch::Y, Branch::Diag, Branch::Binom(2, 1), Branch::Binom(2, 3), Branch::Binom(1, 3)];
        for a in bs {
            for b in bs {
                if a != b {
                    assert_eq!(intersection(a, b), intersection(b, a));
                }
            }
        }
        assert_eq!(intersection(Branch::Y, Branch::Binom(2, 1)), 2);
        assert_eq!(intersection(Branch::Binom(2, 3), Branch::Binom(3, 2)), 4);
    }
}

#[cfg(test)]
impl GermIntegral {
    fn reordered(&self, order: &[Branch]) -> GermIntegral {
        let mut f = self.factors.clone();
        f.sort_by_key(|(b, _)| order.iter().position(|o| o == b));
        GermIntegral { factors: f }
    }
}
