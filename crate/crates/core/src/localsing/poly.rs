//! Sparse bivariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::rational::{qi, Q};

/// Terms keyed by `(deg_x, deg_y)`; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<(u32, u32), Q>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: Q) -> Self {
        Poly::monomial(c, 0, 0)
    }

    pub fn monomial(c: Q, i: u32, j: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        Poly { terms }
    }

    pub fn x() -> Self {
        Poly::monomial(Q::one(), 1, 0)
    }

    pub fn y() -> Self {
        Poly::monomial(Q::one(), 0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Q {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Q::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Q)> {
        self.terms.iter()
    }

    fn add_term(&mut self, k: (u32, u32), c: Q) {
        let e = self.terms.entry(k).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut out = Poly::constant(Q::one());
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    pub fn dx(&self) -> Poly {
        let mut out = Poly::zero();
        for (&(i, j), c) in &self.terms {
            if i > 0 {
                out.add_term((i - 1, j), c * qi(i as i64));
            }
        }
        out
    }

    pub fn dy(&self) -> Poly {
        let mut out = Poly::zero();
        for (&(i, j), c) in &self.terms {
            if j > 0 {
                out.add_term((i, j - 1), c * qi(j as i64));
            }
        }
        out
    }

    /// `self(px, py)`.
    pub fn compose(&self, px: &Poly, py: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (&(i, j), c) in &self.terms {
            let t = &(&px.pow(i) * &py.pow(j)) * &Poly::constant(c.clone());
            out = &out + &t;
        }
        out
    }

    /// Coefficients of `x^k` in the restriction to `y = j`-th order, i.e. of `x^k y^j`.
    pub fn y_slice(&self, j: u32) -> Vec<Q> {
        let deg = self.terms.keys().filter(|k| k.1 == j).map(|k| k.0).max();
        match deg {
            None => Vec::new(),
            Some(d) => (0..=d).map(|i| self.coeff(i, j)).collect(),
        }
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &rhs.terms {
                out.add_term((i + k, j + l), a * b);
            }
        }
        out
    }
}
