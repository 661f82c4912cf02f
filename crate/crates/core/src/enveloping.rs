//! The enveloping algebra `U(S, L)` of a free module of derivations with a
//! triangular basis, in PBW normal form `sum_I f_I α^I` where
//! `α^I = α_n^{i_n} ⋯ α_1^{i_1}`.

use crate::derivation::{DerivationBasis, StructureConstants};
use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial};
use crate::scalar::Field;
use crate::text::{self, ExprRing};
use num_bigint::BigInt;
use num_rational::BigRational;
use smallvec::SmallVec;
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::RwLock;

/// Exponents `(i_1, ..., i_n)` of a PBW monomial.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(SmallVec<[u32; 4]>);

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        MultiIndex(SmallVec::from_elem(0, n))
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut m = Self::zero(n);
        m.0[i] = 1;
        m
    }

    pub fn from_exponents(e: &[u32]) -> Self {
        MultiIndex(SmallVec::from_slice(e))
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total order `|I|`.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn weight(&self, weights: &[i64]) -> i64 {
        self.0.iter().zip(weights).map(|(&e, &w)| e as i64 * w).sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// Letters of `α^I` read left to right, as zero-based generator indices.
    pub fn word(&self) -> Vec<u8> {
        let mut w = Vec::with_capacity(self.order() as usize);
        for (i, &e) in self.0.iter().enumerate().rev() {
            w.extend(std::iter::repeat(i as u8).take(e as usize));
        }
        w
    }

    fn min_index(&self) -> Option<usize> {
        self.0.iter().position(|&e| e > 0)
    }

    fn max_index(&self) -> Option<usize> {
        self.0.iter().rposition(|&e| e > 0)
    }

    /// All multi-indices of order at most `p`, by increasing order.
    pub fn all_up_to(n: usize, p: u32) -> Vec<MultiIndex> {
        let mut out: Vec<MultiIndex> = (0..=p)
            .flat_map(|d| Monomial::all_of_degree(n, d))
            .map(|m| MultiIndex::from_exponents(m.exponents()))
            .collect();
        out.sort();
        out
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    format!("a{}", i + 1)
                } else {
                    format!("a{}^{}", i + 1, e)
                }
            })
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An element `sum_I f_I α^I` of the enveloping algebra.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UElement<F> {
    nvars: usize,
    terms: BTreeMap<MultiIndex, Polynomial<F>>,
}

impl<F: Field> UElement<F> {
    pub fn zero(nvars: usize) -> Self {
        UElement {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_poly(f: Polynomial<F>) -> Self {
        let n = f.nvars();
        Self::term(MultiIndex::zero(n), f)
    }

    pub fn term(i: MultiIndex, f: Polynomial<F>) -> Self {
        let nvars = f.nvars();
        let mut terms = BTreeMap::new();
        if !f.is_zero() {
            terms.insert(i, f);
        }
        UElement { nvars, terms }
    }

    /// The generator `α_{i+1}`.
    pub fn generator(nvars: usize, i: usize) -> Self {
        Self::term(MultiIndex::unit(nvars, i), Polynomial::one(nvars))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Polynomial<F>)> + '_ {
        self.terms.iter()
    }

    pub fn coefficient(&self, i: &MultiIndex) -> Polynomial<F> {
        self.terms
            .get(i)
            .cloned()
            .unwrap_or_else(|| Polynomial::zero(self.nvars))
    }

    pub fn add_term(&mut self, i: MultiIndex, f: &Polynomial<F>) {
        if f.is_zero() {
            return;
        }
        match self.terms.get_mut(&i) {
            Some(c) => {
                *c += f;
                if c.is_zero() {
                    self.terms.remove(&i);
                }
            }
            None => {
                self.terms.insert(i, f.clone());
            }
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (i, f) in &other.terms {
            self.add_term(i.clone(), f);
        }
    }

    pub fn sub_assign(&mut self, other: &Self) {
        for (i, f) in &other.terms {
            self.add_term(i.clone(), &-f);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.sub_assign(other);
        out
    }

    pub fn neg(&self) -> Self {
        UElement {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(i, f)| (i.clone(), -f)).collect(),
        }
    }

    /// Left multiplication by a polynomial.
    pub fn left_mul_poly(&self, g: &Polynomial<F>) -> Self {
        let mut out = UElement::zero(self.nvars);
        if g.is_zero() {
            return out;
        }
        for (i, f) in &self.terms {
            out.add_term(i.clone(), &(g * f));
        }
        out
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = UElement::zero(self.nvars);
        for (i, f) in &self.terms {
            out.add_term(i.clone(), &f.scale(c));
        }
        out
    }

    /// Order in the filtration, `None` for zero.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::order).max()
    }

    /// The weight if the element is homogeneous, with `x_k` of weight 1 and
    /// `α_m` of weight `w_m`.
    pub fn weight(&self, weights: &[i64]) -> Option<i64> {
        let mut w = None;
        for (i, f) in &self.terms {
            let d = f.homogeneous_degree()? as i64 + i.weight(weights);
            match w {
                None => w = Some(d),
                Some(v) if v != d => return None,
                _ => {}
            }
        }
        w
    }

    /// Drops all terms of order `> p`.
    pub fn truncate(&self, p: u32) -> Self {
        UElement {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(i, _)| i.order() <= p)
                .map(|(i, f)| (i.clone(), f.clone()))
                .collect(),
        }
    }

    /// Terms of order exactly `p`.
    pub fn symbol(&self, p: u32) -> Self {
        UElement {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(i, _)| i.order() == p)
                .map(|(i, f)| (i.clone(), f.clone()))
                .collect(),
        }
    }
}

/// Printed as `(f)*a3^i3*a2^i2*a1^i1 + ...`, which parses back.
impl<F: Field> fmt::Display for UElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(i, c)| {
                if i.is_zero() {
                    format!("({c})")
                } else {
                    format!("({c})*{i}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<F: fmt::Debug> fmt::Debug for UElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

fn binomial(n: u32, k: u32) -> i64 {
    let mut acc: i64 = 1;
    for j in 0..k as i64 {
        acc = acc * (n as i64 - j) / (j + 1);
    }
    acc
}

/// The enveloping algebra of a triangular basis, with its structure
/// constants and normal-form caches.
pub struct Enveloping<F: Field> {
    basis: DerivationBasis<F>,
    consts: StructureConstants<F>,
    weights: Option<Vec<i64>>,
    word_cache: RwLock<HashMap<Vec<u8>, UElement<F>>>,
    comm_x_cache: RwLock<HashMap<(MultiIndex, usize), UElement<F>>>,
}

impl<F: Field> Enveloping<F> {
    pub fn new(basis: DerivationBasis<F>) -> Result<Self> {
        if !basis.check_triangularizable() {
            return Err(Error::NotTriangular);
        }
        let consts = basis.structure_constants()?.clone();
        let weights = basis.weights().ok();
        Ok(Enveloping {
            basis,
            consts,
            weights,
            word_cache: RwLock::new(HashMap::new()),
            comm_x_cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn n(&self) -> usize {
        self.basis.n()
    }

    pub fn basis(&self) -> &DerivationBasis<F> {
        &self.basis
    }

    pub fn structure_constants(&self) -> &StructureConstants<F> {
        &self.consts
    }

    pub fn weights(&self) -> Result<&[i64]> {
        self.weights
            .as_deref()
            .ok_or_else(|| Error::NotHomogeneous("basis has no weight grading".into()))
    }

    pub fn one(&self) -> UElement<F> {
        UElement::from_poly(Polynomial::one(self.n()))
    }

    pub fn generator(&self, i: usize) -> UElement<F> {
        UElement::generator(self.n(), i)
    }

    pub fn x(&self, k: usize) -> UElement<F> {
        UElement::from_poly(Polynomial::var(self.n(), k))
    }

    /// `α_n^{k_n}(⋯ α_1^{k_1}(g))`.
    pub fn apply_index(&self, k: &MultiIndex, g: &Polynomial<F>) -> Polynomial<F> {
        let mut h = g.clone();
        for (m, &e) in k.exponents().iter().enumerate() {
            for _ in 0..e {
                if h.is_zero() {
                    return h;
                }
                h = self.basis.get(m).apply(&h);
            }
        }
        h
    }

    /// `α^I g` in normal form: `sum_{K <= I} binom(I, K) (α^K g) α^{I-K}`.
    pub fn index_times_poly(&self, i: &MultiIndex, g: &Polynomial<F>) -> Vec<(MultiIndex, Polynomial<F>)> {
        let n = self.n();
        let mut acc: Vec<(MultiIndex, Polynomial<F>)> = vec![(i.clone(), g.clone())];
        for m in 0..n {
            let e = i.exponents()[m];
            if e == 0 {
                continue;
            }
            let mut next = Vec::new();
            for (rest, h) in acc {
                let mut cur = h;
                for k in 0..=e {
                    if cur.is_zero() {
                        break;
                    }
                    let mut r = rest.clone();
                    r.0[m] -= k;
                    next.push((r, cur.scale(&F::from_i64(binomial(e, k)))));
                    if k < e {
                        cur = self.basis.get(m).apply(&cur);
                    }
                }
            }
            acc = next;
        }
        acc
    }

    /// Normal form of a word in the generators.
    pub fn normal_form_word(&self, w: &[u8]) -> UElement<F> {
        let n = self.n();
        let Some(t) = (0..w.len().saturating_sub(1)).find(|&t| w[t] < w[t + 1]) else {
            let mut e = MultiIndex::zero(n);
            for &l in w {
                e.0[l as usize] += 1;
            }
            return UElement::term(e, Polynomial::one(n));
        };
        if let Some(hit) = self.word_cache.read().unwrap().get(w) {
            return hit.clone();
        }
        let (i, j) = (w[t] as usize, w[t + 1] as usize);
        let mut swapped = w.to_vec();
        swapped.swap(t, t + 1);
        let mut out = self.normal_form_word(&swapped);
        let mut prefix = MultiIndex::zero(n);
        for &l in &w[..t] {
            prefix.0[l as usize] += 1;
        }
        let suffix = &w[t + 2..];
        for (k, c) in self.consts[i][j].iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (rest, h) in self.index_times_poly(&prefix, c) {
                let mut word = rest.word();
                word.push(k as u8);
                word.extend_from_slice(suffix);
                out.add_assign(&self.normal_form_word(&word).left_mul_poly(&h));
            }
        }
        self.word_cache
            .write()
            .unwrap()
            .insert(w.to_vec(), out.clone());
        out
    }

    /// `α^P α^J` in normal form.
    fn index_product(&self, p: &MultiIndex, j: &MultiIndex) -> UElement<F> {
        let n = self.n();
        match (p.min_index(), j.max_index()) {
            (Some(lo), Some(hi)) if hi > lo => {
                let mut w = p.word();
                w.extend(j.word());
                self.normal_form_word(&w)
            }
            _ => UElement::term(p.add(j), Polynomial::one(n)),
        }
    }

    pub fn mul(&self, a: &UElement<F>, b: &UElement<F>) -> UElement<F> {
        let mut out = UElement::zero(self.n());
        for (i, f) in &a.terms {
            for (j, g) in &b.terms {
                for (p, h) in self.index_times_poly(i, g) {
                    let coeff = f * &h;
                    if coeff.is_zero() {
                        continue;
                    }
                    out.add_assign(&self.index_product(&p, j).left_mul_poly(&coeff));
                }
            }
        }
        out
    }

    pub fn commutator(&self, a: &UElement<F>, b: &UElement<F>) -> UElement<F> {
        self.mul(a, b).sub(&self.mul(b, a))
    }

    /// `u · g` for a polynomial `g` on the right.
    pub fn mul_poly_right(&self, u: &UElement<F>, g: &Polynomial<F>) -> UElement<F> {
        let mut out = UElement::zero(self.n());
        for (i, f) in &u.terms {
            for (p, h) in self.index_times_poly(i, g) {
                out.add_term(p, &(f * &h));
            }
        }
        out
    }

    /// `[α^I, x_l] = sum_{0 < K <= I} binom(I, K) α^K(x_l) α^{I-K}`, cached.
    pub fn commutator_with_x(&self, i: &MultiIndex, l: usize) -> UElement<F> {
        let key = (i.clone(), l);
        if let Some(hit) = self.comm_x_cache.read().unwrap().get(&key) {
            return hit.clone();
        }
        let n = self.n();
        let mut out = UElement::zero(n);
        for (p, h) in self.index_times_poly(i, &Polynomial::var(n, l)) {
            if p != *i {
                out.add_term(p, &h);
            }
        }
        self.comm_x_cache.write().unwrap().insert(key, out.clone());
        out
    }

    /// `[u, x_l]`.
    pub fn commutator_with_var(&self, u: &UElement<F>, l: usize) -> UElement<F> {
        let mut out = UElement::zero(self.n());
        for (i, f) in &u.terms {
            if i.is_zero() {
                continue;
            }
            out.add_assign(&self.commutator_with_x(i, l).left_mul_poly(f));
        }
        out
    }

    /// The action of `u` as a differential operator on `S`.
    pub fn act_on_poly(&self, u: &UElement<F>, g: &Polynomial<F>) -> Polynomial<F> {
        let mut out = Polynomial::zero(self.n());
        for (i, f) in &u.terms {
            let h = self.apply_index(i, g);
            if !h.is_zero() {
                out += &(f * &h);
            }
        }
        out
    }

    /// Basis `(monomial, multi-index)` of the part of `U` of weight `d` and order at most `p`.
    pub fn enumerate_slice(&self, p: u32, d: i64) -> Result<Vec<(Monomial, MultiIndex)>> {
        let w = self.weights()?.to_vec();
        let mut out = Vec::new();
        for i in MultiIndex::all_up_to(self.n(), p) {
            let deg = d - i.weight(&w);
            if deg < 0 {
                continue;
            }
            for m in Monomial::all_of_degree(self.n(), deg as u32) {
                out.push((m, i.clone()));
            }
        }
        Ok(out)
    }

    /// Parses `sum` / product expressions in `x1..xn`, `a1..an` and rationals,
    /// normalizing as it multiplies.
    pub fn parse(&self, s: &str, zeta_order: u32) -> Result<UElement<F>> {
        let e = text::parse_expr(s)?;
        text::eval(&UCtx { alg: self, zeta_order }, &e)
    }
}

struct UCtx<'a, F: Field> {
    alg: &'a Enveloping<F>,
    zeta_order: u32,
}

impl<F: Field> ExprRing for UCtx<'_, F> {
    type V = UElement<F>;

    fn from_int(&self, v: &BigInt) -> UElement<F> {
        UElement::from_poly(Polynomial::constant(
            self.alg.n(),
            F::from_rational(BigRational::from_integer(v.clone())),
        ))
    }

    fn zeta(&self, col: usize) -> Result<UElement<F>> {
        F::root_of_unity(self.zeta_order)
            .map(|z| UElement::from_poly(Polynomial::constant(self.alg.n(), z)))
            .ok_or_else(|| Error::parse(col, "no such root of unity in this field"))
    }

    fn var(&self, i: usize, col: usize) -> Result<UElement<F>> {
        if i >= self.alg.n() {
            return Err(Error::parse(col, format!("variable x{} out of range", i + 1)));
        }
        Ok(self.alg.x(i))
    }

    fn gen(&self, i: usize, col: usize) -> Result<UElement<F>> {
        if i >= self.alg.n() {
            return Err(Error::parse(col, format!("generator a{} out of range", i + 1)));
        }
        Ok(self.alg.generator(i))
    }

    fn add(&self, a: &UElement<F>, b: &UElement<F>) -> UElement<F> {
        a.add(b)
    }

    fn sub(&self, a: &UElement<F>, b: &UElement<F>) -> UElement<F> {
        a.sub(b)
    }

    fn mul(&self, a: &UElement<F>, b: &UElement<F>) -> UElement<F> {
        self.alg.mul(a, b)
    }

    fn neg(&self, a: &UElement<F>) -> UElement<F> {
        a.neg()
    }

    fn div(&self, a: &UElement<F>, b: &UElement<F>, col: usize) -> Result<UElement<F>> {
        let c = match b.terms.iter().next() {
            Some((i, f)) if b.terms.len() == 1 && i.is_zero() && f.is_constant() => {
                f.constant_term()
            }
            _ => return Err(Error::parse(col, "can only divide by a nonzero constant")),
        };
        Ok(a.scale(&c.inv().unwrap()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{build_family, FamilySpec};

    type Q = BigRational;

    fn alg(spec: FamilySpec) -> Enveloping<Q> {
        Enveloping::new(build_family::<Q>(&spec).unwrap().basis).unwrap()
    }

    #[test]
    fn commutation_with_variables() {
        let a = alg(FamilySpec::Wreath { n: 3, r: 1 });
        let d = a.generator(1);
        let c = a.commutator(&d, &a.x(2));
        assert_eq!(c, a.parse("x3*(x3 - x1)", 1).unwrap());
    }

    #[test]
    fn euler_bracket_scales_by_weight() {
        for r in 1..=3 {
            let a = alg(FamilySpec::Wreath { n: 3, r });
            let e = a.generator(0);
            let d = a.generator(1);
            let c = a.generator(2);
            assert_eq!(a.commutator(&e, &d), d.scale(&Q::from_i64(r as i64)));
            assert_eq!(a.commutator(&e, &c), c.scale(&Q::from_i64(2 * r as i64)));
        }
    }

    #[test]
    fn print_parse_round_trip() {
        let a = alg(FamilySpec::Wreath { n: 3, r: 2 });
        let u = a.parse("a1*x2*a3 - 2*a2^2*x1 + x3", 1).unwrap();
        let v = a.parse(&u.to_string(), 1).unwrap();
        assert_eq!(u, v);
    }

    #[test]
    fn action_is_multiplicative() {
        let a = alg(FamilySpec::Wreath { n: 3, r: 1 });
        let u = a.parse("a2*a1 + x1*a3", 1).unwrap();
        let v = a.parse("a3 - x2*a2^2", 1).unwrap();
        let g = Polynomial::<Q>::parse("x1^2*x3 + x2^4", 3, 1).unwrap();
        let lhs = a.act_on_poly(&a.mul(&u, &v), &g);
        let rhs = a.act_on_poly(&u, &a.act_on_poly(&v, &g));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn slice_sizes() {
        let a = alg(FamilySpec::Wreath { n: 3, r: 1 });
        // 1 and α_1
        let s = a.enumerate_slice(1, 0).unwrap();
        assert_eq!(s.len(), 2);
    }
}
