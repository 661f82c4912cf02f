//! Sparse multivariate polynomials over an exact field.

mod gcd;
mod monomial;

pub use monomial::Monomial;

use crate::error::{Error, Result};
use crate::scalar::{format_scalar, Field};
use crate::text::{self, ExprRing};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

/// A polynomial in `x1..xn`, stored as a map from monomials to nonzero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<F> {
    nvars: usize,
    terms: BTreeMap<Monomial, F>,
}

impl<F: Field> Polynomial<F> {
    pub fn zero(nvars: usize) -> Self {
        Polynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, F::one())
    }

    pub fn constant(nvars: usize, c: F) -> Self {
        Self::monomial(Monomial::one(nvars), c)
    }

    pub fn from_i64(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, F::from_i64(c))
    }

    /// The variable `x_{i+1}` (zero-based index).
    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(Monomial::var(nvars, i), F::one())
    }

    pub fn monomial(m: Monomial, c: F) -> Self {
        let nvars = m.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { nvars, terms }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, F)>) -> Self {
        let mut p = Polynomial::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn constant_term(&self) -> F {
        self.terms
            .get(&Monomial::one(self.nvars))
            .cloned()
            .unwrap_or_else(F::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &F)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &F)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coefficient(&self) -> F {
        self.leading_term().map_or_else(F::zero, |(_, c)| c.clone())
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Degree if every term has the same total degree; `None` for zero or mixed degrees.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn add_term(&mut self, m: Monomial, c: &F) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| {
                    let mut a = a.clone();
                    a *= c;
                    (m.clone(), a)
                })
                .collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &F) -> Self {
        if c.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(k, a)| {
                    let mut a = a.clone();
                    a *= c;
                    (k.mul(m), a)
                })
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Polynomial::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Partial derivative with respect to `x_{i+1}`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Polynomial::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.exponent(i);
            if e == 0 {
                continue;
            }
            let mut c = c.clone();
            c *= &F::from_i64(e as i64);
            out.add_term(m.with_exponent(i, e - 1), &c);
        }
        out
    }

    /// The homogeneous part of total degree `d`.
    pub fn graded_component(&self, d: u32) -> Self {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Exact quotient `self / divisor`.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        let (lm, lc) = divisor.leading_term().ok_or(Error::DivisionByZero)?;
        let lc_inv = lc.inv().ok_or(Error::DivisionByZero)?;
        let mut rem = self.clone();
        let mut quot = Polynomial::zero(self.nvars);
        while let Some((m, c)) = rem.leading_term() {
            if !lm.divides(m) {
                return Err(Error::NotDivisible);
            }
            let qm = lm.quotient_of(m);
            let mut qc = c.clone();
            qc *= &lc_inv;
            rem -= &divisor.mul_term(&qm, &qc);
            quot.add_term(qm, &qc);
        }
        Ok(quot)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        gcd::gcd(self, other)
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Substitutes `x_j -> sum_i m[j][i] * x_i`.
    pub fn substitute_linear(&self, m: &[Vec<F>]) -> Self {
        let n = self.nvars;
        let images: Vec<Self> = (0..n)
            .map(|j| {
                Polynomial::from_terms(
                    n,
                    (0..n).map(|i| (Monomial::var(n, i), m[j][i].clone())),
                )
            })
            .collect();
        let mut out = Polynomial::zero(n);
        for (mono, c) in &self.terms {
            let mut t = Polynomial::constant(n, c.clone());
            for (j, img) in images.iter().enumerate() {
                t = &t * &img.pow(mono.exponent(j));
            }
            out += &t;
        }
        out
    }

    /// Substitutes polynomials for the variables.
    pub fn compose(&self, images: &[Self]) -> Self {
        let n = images.first().map_or(self.nvars, Polynomial::nvars);
        let mut out = Polynomial::zero(n);
        for (mono, c) in &self.terms {
            let mut t = Polynomial::constant(n, c.clone());
            for (j, img) in images.iter().enumerate() {
                let e = mono.exponent(j);
                if e > 0 {
                    t = &t * &img.pow(e);
                }
            }
            out += &t;
        }
        out
    }

    pub fn map_coefficients<G: Field>(&self, f: impl Fn(&F) -> G) -> Polynomial<G> {
        Polynomial::from_terms(self.nvars, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// Parses the text format, with `z` read as a primitive `zeta_order`-th root of unity.
    pub fn parse(s: &str, nvars: usize, zeta_order: u32) -> Result<Self> {
        let e = text::parse_expr(s)?;
        text::eval(&PolyCtx::<F> { nvars, zeta_order, _f: std::marker::PhantomData }, &e)
    }
}

struct PolyCtx<F> {
    nvars: usize,
    zeta_order: u32,
    _f: std::marker::PhantomData<F>,
}

impl<F: Field> ExprRing for PolyCtx<F> {
    type V = Polynomial<F>;

    fn from_int(&self, v: &BigInt) -> Polynomial<F> {
        Polynomial::constant(self.nvars, F::from_rational(BigRational::from_integer(v.clone())))
    }

    fn zeta(&self, col: usize) -> Result<Polynomial<F>> {
        F::root_of_unity(self.zeta_order)
            .map(|z| Polynomial::constant(self.nvars, z))
            .ok_or_else(|| {
                Error::parse(
                    col,
                    format!("no primitive root of unity of order {} in this field", self.zeta_order),
                )
            })
    }

    fn var(&self, i: usize, col: usize) -> Result<Polynomial<F>> {
        if i >= self.nvars {
            return Err(Error::parse(
                col,
                format!("variable x{} out of range (n = {})", i + 1, self.nvars),
            ));
        }
        Ok(Polynomial::var(self.nvars, i))
    }

    fn gen(&self, _i: usize, col: usize) -> Result<Polynomial<F>> {
        Err(Error::parse(col, "generators are not allowed in a polynomial"))
    }

    fn add(&self, a: &Polynomial<F>, b: &Polynomial<F>) -> Polynomial<F> {
        a + b
    }

    fn sub(&self, a: &Polynomial<F>, b: &Polynomial<F>) -> Polynomial<F> {
        a - b
    }

    fn mul(&self, a: &Polynomial<F>, b: &Polynomial<F>) -> Polynomial<F> {
        a * b
    }

    fn neg(&self, a: &Polynomial<F>) -> Polynomial<F> {
        -a
    }

    fn div(&self, a: &Polynomial<F>, b: &Polynomial<F>, col: usize) -> Result<Polynomial<F>> {
        if !b.is_constant() || b.is_zero() {
            return Err(Error::parse(col, "can only divide by a nonzero constant"));
        }
        Ok(a.scale(&b.constant_term().inv().unwrap()))
    }
}

impl<'a, F: Field> AddAssign<&'a Polynomial<F>> for Polynomial<F> {
    fn add_assign(&mut self, rhs: &'a Polynomial<F>) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c);
        }
    }
}

impl<'a, F: Field> SubAssign<&'a Polynomial<F>> for Polynomial<F> {
    fn sub_assign(&mut self, rhs: &'a Polynomial<F>) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), &-c.clone());
        }
    }
}

impl<'a, F: Field> Add<&'a Polynomial<F>> for &'a Polynomial<F> {
    type Output = Polynomial<F>;
    fn add(self, rhs: &'a Polynomial<F>) -> Polynomial<F> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a, F: Field> Sub<&'a Polynomial<F>> for &'a Polynomial<F> {
    type Output = Polynomial<F>;
    fn sub(self, rhs: &'a Polynomial<F>) -> Polynomial<F> {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'a, F: Field> Mul<&'a Polynomial<F>> for &'a Polynomial<F> {
    type Output = Polynomial<F>;
    fn mul(self, rhs: &'a Polynomial<F>) -> Polynomial<F> {
        let mut out = Polynomial::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let mut c = ca.clone();
                c *= cb;
                out.add_term(ma.mul(mb), &c);
            }
        }
        out
    }
}

impl<'a, F: Field> Neg for &'a Polynomial<F> {
    type Output = Polynomial<F>;
    fn neg(self) -> Polynomial<F> {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl<F: Field> Add for Polynomial<F> {
    type Output = Polynomial<F>;
    fn add(mut self, rhs: Polynomial<F>) -> Polynomial<F> {
        self += &rhs;
        self
    }
}

impl<F: Field> Sub for Polynomial<F> {
    type Output = Polynomial<F>;
    fn sub(mut self, rhs: Polynomial<F>) -> Polynomial<F> {
        self -= &rhs;
        self
    }
}

impl<F: Field> Mul for Polynomial<F> {
    type Output = Polynomial<F>;
    fn mul(self, rhs: Polynomial<F>) -> Polynomial<F> {
        &self * &rhs
    }
}

impl<F: Field> Neg for Polynomial<F> {
    type Output = Polynomial<F>;
    fn neg(self) -> Polynomial<F> {
        -&self
    }
}

/// Leading term first, e.g. `x2^2 - 3/2*x1*x2 + 1`.
impl<F: Field> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let (neg, mag) = match c.to_rational() {
                Some(q) if q < BigRational::zero() => (true, F::from_rational(-q)),
                _ => (false, c.clone()),
            };
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{}", format_scalar(&mag))?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", format_scalar(&mag))?;
            }
        }
        Ok(())
    }
}

impl<F: fmt::Debug> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c:?}*{m}")?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Cyclotomic;
    use num_traits::One;

    type P = Polynomial<BigRational>;

    fn p(s: &str) -> P {
        P::parse(s, 3, 1).unwrap()
    }

    #[test]
    fn print_parse_round_trip() {
        let f = p("3/2*x1*x2 - x2^2 + 1 - x3");
        assert_eq!(f.to_string(), "-x2^2 + 3/2*x1*x2 - x3 + 1");
        assert_eq!(p(&f.to_string()), f);
    }

    #[test]
    fn cyclotomic_round_trip() {
        let f = Polynomial::<Cyclotomic>::parse("(1 + z)*x1 - z^2*x2", 2, 3).unwrap();
        let g = Polynomial::<Cyclotomic>::parse(&f.to_string(), 2, 3).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn zeta_rejected_over_rationals() {
        assert!(matches!(P::parse("z*x1", 3, 3), Err(Error::Parse { column: 1, .. })));
    }

    #[test]
    fn exact_division() {
        let a = p("x1^2 - x2^2");
        assert_eq!(a.exact_div(&p("x1 - x2")).unwrap(), p("x1 + x2"));
        assert_eq!(a.exact_div(&p("x1 + x3")), Err(Error::NotDivisible));
    }

    #[test]
    fn derivative_and_components() {
        let f = p("x1^3*x2 + x2 + 5");
        assert_eq!(f.derivative(0), p("3*x1^2*x2"));
        assert_eq!(f.graded_component(1), p("x2"));
        assert_eq!(f.homogeneous_degree(), None);
    }

    #[test]
    fn linear_substitution() {
        let f = p("x1*x2");
        let m = vec![
            vec![BigRational::one(), BigRational::one(), BigRational::zero()],
            vec![BigRational::zero(), BigRational::one(), BigRational::zero()],
            vec![BigRational::zero(), BigRational::zero(), BigRational::one()],
        ];
        assert_eq!(f.substitute_linear(&m), p("x1*x2 + x2^2"));
    }
}
