//! Direct residue computation of the Camacho-Sad index of a smooth separatrix.

use num_traits::{One, Zero};

use super::poly::Poly;
use super::{Branch, GermIntegral};
use crate::error::{Error, Result};
use crate::rational::{qi, Q};

pub const DEFAULT_ORDER: usize = 16;

/// `(x, y)` substitution after which `b` becomes `{y = 0}`.
fn straighten(b: Branch) -> Result<(Poly, Poly)> {
    let (x, y) = (Poly::x(), Poly::y());
    Ok(match b {
        Branch::Y => (x, y),
        Branch::X => (y, x),
        Branch::Diag => (x.clone(), &x - &y),
        Branch::Binom(a, 1) => (x.clone(), &x.pow(a) - &y),
        Branch::Binom(1, c) => (&y + &x.pow(c), x),
        Branch::Binom(..) => return Err(Error::InvalidArgument(format!("{b} is singular; no residue route"))),
    })
}

/// Tangent field `(F, G)` of the logarithmic form of `∏ gⱼ^{kⱼ}`.
pub fn tangent_field(gs: &[(Poly, u32)]) -> (Poly, Poly) {
    let (mut f, mut g) = (Poly::zero(), Poly::zero());
    for (j, (gj, kj)) in gs.iter().enumerate() {
        let mut rest = Poly::constant(qi(*kj as i64));
        for (l, (gl, _)) in gs.iter().enumerate() {
            if l != j {
                rest = &rest * gl;
            }
        }
        f = &f + &(&gj.dy() * &rest);
        g = &g - &(&gj.dx() * &rest);
    }
    (f, g)
}

/// Power series of `1/f` to `order` terms; `f(0) ≠ 0`.
fn reciprocal(f: &[Q], order: usize) -> Vec<Q> {
    let mut inv = vec![Q::zero(); order];
    if order == 0 {
        return inv;
    }
    inv[0] = Q::one() / &f[0];
    for n in 1..order {
        let mut s = Q::zero();
        for k in 1..=n.min(f.len() - 1) {
            s += &f[k] * &inv[n - k];
        }
        inv[n] = -s / &f[0];
    }
    inv
}

/// `Res_{x=0} ∂_y(G/F)(x, 0) dx` with `b` moved to `{y = 0}`.
pub fn residue_index_oracle(h: &GermIntegral, b: Branch) -> Result<Q> {
    residue_index_with_order(h, b, DEFAULT_ORDER)
}

pub fn residue_index_with_order(h: &GermIntegral, b: Branch, order: usize) -> Result<Q> {
    if !h.contains(b) {
        return Err(Error::InvalidArgument(format!("{b} is not a factor of {h}")));
    }
    let (px, py) = straighten(b)?;
    let gs: Vec<(Poly, u32)> = h.factors.iter().map(|(br, k)| (br.poly().compose(&px, &py), *k)).collect();
    let (f, g) = tangent_field(&gs);
    if !g.y_slice(0).iter().all(Zero::is_zero) {
        return Err(Error::InvalidArgument("separatrix is not invariant after straightening".into()));
    }
    // On y = 0, ∂_y(G/F) = G_y/F because G vanishes there.
    let f0 = f.y_slice(0);
    let gy0 = g.y_slice(1);
    let r = f0.iter().position(|c| !c.is_zero()).ok_or_else(|| {
        Error::InvalidArgument("tangent field vanishes along the separatrix".into())
    })?;
    if r > order {
        return Err(Error::InsufficientOrder { need: r, have: order });
    }
    // G_y / F = x^{-r} G_y / u with u(0) ≠ 0; the residue is the x^{r-1} coefficient of G_y/u.
    if r == 0 {
        return Ok(Q::zero());
    }
    let inv = reciprocal(&f0[r..], r);
    let mut res = Q::zero();
    for (i, c) in gy0.iter().enumerate().take(r) {
        res += c * &inv[r - 1 - i];
    }
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn g(s: &str) -> GermIntegral {
        s.parse().unwrap()
    }

    #[test]
    fn quoted_fields() {
        // xy(x−y) has tangent field x(x − 2y)∂x + y(y − 2x)∂y.
        let h = g("x * y * (x - y)");
        let gs: Vec<(Poly, u32)> = h.factors.iter().map(|(b, k)| (b.poly(), *k)).collect();
        let (f, gg) = tangent_field(&gs);
        assert_eq!(f, &Poly::x().pow(2) - &(&(&Poly::x() * &Poly::y()) * &Poly::constant(qi(2))));
        assert_eq!(gg, &Poly::y().pow(2) - &(&(&Poly::x() * &Poly::y()) * &Poly::constant(qi(2))));
        assert_eq!(residue_index_oracle(&h, Branch::Y).unwrap(), qi(-2));
    }

    #[test]
    fn anchors() {
        assert_eq!(residue_index_oracle(&g("x * y^2"), Branch::Y).unwrap(), q(-1, 2));
        assert_eq!(residue_index_oracle(&g("y^3 * (x^2 - y)"), Branch::Y).unwrap(), q(-2, 3));
        assert_eq!(residue_index_oracle(&g("y^3 * (x^2 - y)"), Branch::Binom(2, 1)).unwrap(), qi(-6));
        assert_eq!(residue_index_oracle(&g("y^4 * (x^2 - y)"), Branch::Binom(2, 1)).unwrap(), qi(-8));
        assert_eq!(residue_index_oracle(&g("x^2 * y^2 * (x - y)"), Branch::Diag).unwrap(), qi(-4));
    }

    #[test]
    fn truncation_is_reported() {
        let h = g("y^2 * (x^2 - y^3)");
        assert!(matches!(residue_index_with_order(&h, Branch::Y, 1), Err(Error::InsufficientOrder { .. })));
        assert!(residue_index_with_order(&h, Branch::Binom(2, 3), 16).is_err());
    }
}
