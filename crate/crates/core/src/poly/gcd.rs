//! Multivariate gcd by recursive content extraction and primitive
//! pseudo-remainder sequences in the highest variable.

use super::{Monomial, Polynomial};
use crate::scalar::Field;
use std::collections::BTreeMap;

fn main_variable<F: Field>(p: &Polynomial<F>) -> Option<usize> {
    p.terms()
        .flat_map(|(m, _)| {
            m.exponents()
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, _)| i)
                .collect::<Vec<_>>()
        })
        .max()
}

fn degree_in<F: Field>(p: &Polynomial<F>, v: usize) -> u32 {
    p.terms().map(|(m, _)| m.exponent(v)).max().unwrap_or(0)
}

/// Coefficients of `p` as a polynomial in `x_v`, keyed by exponent.
fn coefficients_in<F: Field>(p: &Polynomial<F>, v: usize) -> BTreeMap<u32, Polynomial<F>> {
    let mut out: BTreeMap<u32, Polynomial<F>> = BTreeMap::new();
    for (m, c) in p.terms() {
        out.entry(m.exponent(v))
            .or_insert_with(|| Polynomial::zero(p.nvars()))
            .add_term(m.with_exponent(v, 0), c);
    }
    out
}

fn leading_coefficient_in<F: Field>(p: &Polynomial<F>, v: usize) -> Polynomial<F> {
    coefficients_in(p, v)
        .into_iter()
        .next_back()
        .map(|(_, c)| c)
        .unwrap_or_else(|| Polynomial::zero(p.nvars()))
}

fn content_in<F: Field>(p: &Polynomial<F>, v: usize) -> Polynomial<F> {
    let mut g = Polynomial::zero(p.nvars());
    for c in coefficients_in(p, v).values() {
        g = gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn pseudo_remainder<F: Field>(a: &Polynomial<F>, b: &Polynomial<F>, v: usize) -> Polynomial<F> {
    let n = a.nvars();
    let k = degree_in(b, v);
    let lb = leading_coefficient_in(b, v);
    let mut r = a.clone();
    while !r.is_zero() && degree_in(&r, v) >= k {
        let dr = degree_in(&r, v);
        let lr = leading_coefficient_in(&r, v);
        let shift = Polynomial::monomial(
            Monomial::one(n).with_exponent(v, dr - k),
            F::one(),
        );
        r = &(&lb * &r) - &(&(&lr * &shift) * b);
    }
    r
}

pub(super) fn gcd<F: Field>(a: &Polynomial<F>, b: &Polynomial<F>) -> Polynomial<F> {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    let n = a.nvars();
    let (va, vb) = (main_variable(a), main_variable(b));
    let v = match (va, vb) {
        (None, _) | (_, None) => return Polynomial::one(n),
        (Some(x), Some(y)) => x.max(y),
    };
    let (da, db) = (degree_in(a, v), degree_in(b, v));
    if da == 0 {
        return gcd(a, &content_in(b, v));
    }
    if db == 0 {
        return gcd(&content_in(a, v), b);
    }
    let (ca, cb) = (content_in(a, v), content_in(b, v));
    let c = gcd(&ca, &cb);
    let mut p = a.exact_div(&ca).expect("content divides");
    let mut q = b.exact_div(&cb).expect("content divides");
    if degree_in(&p, v) < degree_in(&q, v) {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        let r = pseudo_remainder(&p, &q, v);
        if r.is_zero() {
            break;
        }
        if degree_in(&r, v) == 0 {
            return c.monic();
        }
        let cr = content_in(&r, v);
        p = q;
        q = r.exact_div(&cr).expect("content divides");
    }
    let cq = content_in(&q, v);
    let prim = q.exact_div(&cq).expect("content divides");
    (&c * &prim).monic()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type P = Polynomial<BigRational>;

    fn p(s: &str) -> P {
        P::parse(s, 3, 1).unwrap()
    }

    #[test]
    fn common_factor_recovered() {
        let g = p("x1*x2 - x3^2");
        let a = &g * &p("x1 + x2 + 1");
        let b = &g * &p("x2*x3 - 2*x1");
        assert_eq!(a.gcd(&b), g.monic());
    }

    #[test]
    fn coprime_inputs() {
        assert!(p("x1^2 + x2").gcd(&p("x1 - x3")).is_one());
    }

    #[test]
    fn constants_and_zero() {
        assert!(p("5").gcd(&p("x1")).is_one());
        assert_eq!(p("0").gcd(&p("2*x1*x2")), p("x1*x2"));
    }

    #[test]
    fn monic_normalization() {
        let g = p("-3*x3 + x1");
        assert_eq!(g.gcd(&(&g * &g)), p("x3 - 1/3*x1"));
    }
}
