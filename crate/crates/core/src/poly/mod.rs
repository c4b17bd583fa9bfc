//! Sparse multivariate polynomials over a [`Field`].
//!
//! Terms live in a `BTreeMap` keyed by [`Monomial`] (graded lex), so iteration
//! in reverse gives the canonical output order `x0^3, x0^2*x1, ...`. The
//! Gröbner engine keeps its own order-specific representation.

mod line;
mod monomial;
mod random;
mod text;

use std::collections::BTreeMap;
use std::fmt;

pub use line::{substitute_line, LineCoefficients};
pub use monomial::{Monomial, MAX_VARS};
pub(crate) use random::random_member_with;
pub use random::{random_member, reduce_rational, reinterpret, sample_rng};
pub use text::{parse_polynomial, polynomial_from_json, polynomial_to_json};

use crate::field::Field;

#[derive(Clone, PartialEq)]
pub struct Polynomial<F: Field> {
    field: F,
    nvars: usize,
    terms: BTreeMap<Monomial, F::Elem>,
}

impl<F: Field> Polynomial<F> {
    pub fn zero(field: &F, nvars: usize) -> Self {
        assert!(nvars <= MAX_VARS, "at most {MAX_VARS} variables");
        Polynomial {
            field: field.clone(),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &F, nvars: usize, c: F::Elem) -> Self {
        Self::monomial(field, nvars, Monomial::one(), c)
    }

    pub fn one(field: &F, nvars: usize) -> Self {
        Self::constant(field, nvars, field.one())
    }

    pub fn var(field: &F, nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        Self::monomial(field, nvars, Monomial::var(i), field.one())
    }

    pub fn monomial(field: &F, nvars: usize, mono: Monomial, c: F::Elem) -> Self {
        let mut p = Self::zero(field, nvars);
        p.add_term(mono, c);
        p
    }

    /// Sums the given terms; repeated monomials are combined.
    pub fn from_terms<I>(field: &F, nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, F::Elem)>,
    {
        let mut p = Self::zero(field, nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, mono: Monomial, c: F::Elem) {
        debug_assert!(mono.exps()[self.nvars..].iter().all(|&e| e == 0));
        if self.field.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&mono) {
            Some(existing) => {
                let s = self.field.add(existing, &c);
                if self.field.is_zero(&s) {
                    self.terms.remove(&mono);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(mono, c);
            }
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &F::Elem)> + '_ {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, mono: &Monomial) -> F::Elem {
        self.terms
            .get(mono)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn is_homogeneous_of_degree(&self, d: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == d)
    }

    pub fn neg(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (*m, self.field.neg(c)))
            .collect();
        Polynomial {
            field: self.field.clone(),
            nvars: self.nvars,
            terms,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        if self.field.is_zero(c) {
            return Self::zero(&self.field, self.nvars);
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, a)| (*m, self.field.mul(a, c)))
            .collect();
        Polynomial {
            field: self.field.clone(),
            nvars: self.nvars,
            terms,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_compatible(other);
        let mut out = Self::zero(&self.field, self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), self.field.mul(ca, cb));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(&self.field, self.nvars);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(&self.field, self.nvars);
        for (m, c) in &self.terms {
            let e = m.exp(i);
            if e == 0 {
                continue;
            }
            let mut dm = *m;
            dm.set_exp(i, e - 1);
            out.add_term(dm, self.field.mul(c, &self.field.from_i64(e as i64)));
        }
        out
    }

    pub fn eval(&self, point: &[F::Elem]) -> F::Elem {
        assert_eq!(point.len(), self.nvars, "point has wrong arity");
        let f = &self.field;
        self.terms.iter().fold(f.zero(), |acc, (m, c)| {
            let mut t = c.clone();
            for (i, x) in point.iter().enumerate() {
                for _ in 0..m.exp(i) {
                    t = f.mul(&t, x);
                }
            }
            f.add(&acc, &t)
        })
    }

    /// Substitutes `x_i -> images[i]`; the result lives in the ring of the images.
    pub fn substitute(&self, images: &[Polynomial<F>]) -> Polynomial<F> {
        assert_eq!(images.len(), self.nvars, "one image per variable");
        let target_vars = images.first().map_or(0, |p| p.nvars);
        let mut powers: Vec<Vec<Polynomial<F>>> = images
            .iter()
            .map(|p| vec![Polynomial::one(&self.field, p.nvars), p.clone()])
            .collect();
        let mut out = Polynomial::zero(&self.field, target_vars);
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(&self.field, target_vars, c.clone());
            for (i, pw) in powers.iter_mut().enumerate() {
                let e = m.exp(i) as usize;
                while pw.len() <= e {
                    let next = pw[pw.len() - 1].mul(&images[i]);
                    pw.push(next);
                }
                if e > 0 {
                    t = t.mul(&pw[e]);
                }
            }
            out = out.add(&t);
        }
        out
    }

    pub fn map_field<G: Field>(&self, target: &G, f: impl Fn(&F::Elem) -> G::Elem) -> Polynomial<G> {
        Polynomial::from_terms(target, self.nvars, self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    /// Re-embeds into a ring with `nvars` variables (must cover the support).
    pub fn with_nvars(&self, nvars: usize) -> Self {
        assert!(
            self.terms.keys().all(|m| m.exps()[nvars.min(MAX_VARS)..].iter().all(|&e| e == 0)),
            "support exceeds target ring"
        );
        Polynomial {
            field: self.field.clone(),
            nvars,
            terms: self.terms.clone(),
        }
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.nvars, other.nvars, "polynomials live in different rings");
        assert_eq!(self.field, other.field, "polynomials over different fields");
    }

    /// Gradient `(dT/dx_0, ..., dT/dx_{n-1})`.
    pub fn jacobian(&self) -> Vec<Polynomial<F>> {
        (0..self.nvars).map(|i| self.derivative(i)).collect()
    }
}

/// The formal partial derivatives of `t`.
pub fn jacobian<F: Field>(t: &Polynomial<F>) -> Vec<Polynomial<F>> {
    t.jacobian()
}

impl<F: Field> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", text::format_polynomial(self))
    }
}

impl<F: Field> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self, self.field.spec())
    }
}
