//! The complex `X^q = U ⊗ Hom(Λ^q V, k)` computing `H^*(S, U)`, the first two
//! terms of the Koszul resolution of `S`, liftings of derivations to it and
//! the induced action on cochains.

use crate::derivation::{Derivation, OrthogonalFamily};
use crate::enveloping::{Enveloping, UElement};
use crate::poly::{Monomial, Polynomial};
use crate::scalar::Field;
use std::collections::BTreeMap;
use std::fmt;

/// A sorted set of zero-based variable indices, the `K` of `x̂_K`.
pub type IndexSet = Vec<u8>;

/// `sum_K u_K x̂_K` with all `|K| = q`.
#[derive(Clone, PartialEq, Eq)]
pub struct Cochain<F> {
    nvars: usize,
    degree: usize,
    comps: BTreeMap<IndexSet, UElement<F>>,
}

impl<F: Field> Cochain<F> {
    pub fn zero(nvars: usize, degree: usize) -> Self {
        Cochain {
            nvars,
            degree,
            comps: BTreeMap::new(),
        }
    }

    /// `u x̂_K`.
    pub fn single(k: IndexSet, u: UElement<F>) -> Self {
        let mut c = Cochain::zero(u.nvars(), k.len());
        c.add_component(k, &u);
        c
    }

    /// A degree-0 cochain.
    pub fn from_element(u: UElement<F>) -> Self {
        Cochain::single(Vec::new(), u)
    }

    /// A degree-1 cochain from its values on `x̂_1..x̂_n`.
    pub fn from_components(comps: Vec<UElement<F>>) -> Self {
        let n = comps.len();
        let mut c = Cochain::zero(n, 1);
        for (l, u) in comps.into_iter().enumerate() {
            c.add_component(vec![l as u8], &u);
        }
        c
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&IndexSet, &UElement<F>)> + '_ {
        self.comps.iter()
    }

    pub fn component(&self, k: &[u8]) -> UElement<F> {
        self.comps
            .get(k)
            .cloned()
            .unwrap_or_else(|| UElement::zero(self.nvars))
    }

    pub fn add_component(&mut self, k: IndexSet, u: &UElement<F>) {
        debug_assert_eq!(k.len(), self.degree);
        if u.is_zero() {
            return;
        }
        let entry = self
            .comps
            .entry(k.clone())
            .or_insert_with(|| UElement::zero(self.nvars));
        entry.add_assign(u);
        if entry.is_zero() {
            self.comps.remove(&k);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, u) in &other.comps {
            out.add_component(k.clone(), u);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, u) in &other.comps {
            out.add_component(k.clone(), &u.neg());
        }
        out
    }

    /// Left multiplication by a polynomial.
    pub fn left_mul_poly(&self, f: &Polynomial<F>) -> Self {
        let mut out = Cochain::zero(self.nvars, self.degree);
        for (k, u) in &self.comps {
            out.add_component(k.clone(), &u.left_mul_poly(f));
        }
        out
    }

    pub fn scale(&self, c: &F) -> Self {
        let mut out = Cochain::zero(self.nvars, self.degree);
        for (k, u) in &self.comps {
            out.add_component(k.clone(), &u.scale(c));
        }
        out
    }

    /// Maximal order of the components.
    pub fn order(&self) -> Option<u32> {
        self.comps.values().filter_map(UElement::order).max()
    }

    pub fn truncate(&self, p: u32) -> Self {
        let mut out = Cochain::zero(self.nvars, self.degree);
        for (k, u) in &self.comps {
            out.add_component(k.clone(), &u.truncate(p));
        }
        out
    }

    /// Weight with each `x̂_k` of weight `-1`.
    pub fn weight(&self, weights: &[i64]) -> Option<i64> {
        let mut w = None;
        for u in self.comps.values() {
            let d = u.weight(weights)? - self.degree as i64;
            match w {
                None => w = Some(d),
                Some(v) if v != d => return None,
                _ => {}
            }
        }
        w
    }
}

impl<F: Field> fmt::Display for Cochain<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.comps.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .comps
            .iter()
            .map(|(k, u)| {
                if k.is_empty() {
                    format!("[{u}]")
                } else {
                    let hats: Vec<String> = k.iter().map(|l| format!("X{}", l + 1)).collect();
                    format!("[{u}]*{}", hats.join("^"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<F: fmt::Debug> fmt::Debug for Cochain<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.comps.iter()).finish()
    }
}

/// Sign of sorting `l` into the sorted set `k`, and the resulting set;
/// `None` if `l` is already present.
pub fn insert_sorted(k: &[u8], l: u8) -> Option<(i64, IndexSet)> {
    if k.contains(&l) {
        return None;
    }
    let greater = k.iter().filter(|&&j| j > l).count();
    let mut out = k.to_vec();
    let pos = out.iter().position(|&j| j > l).unwrap_or(out.len());
    out.insert(pos, l);
    Some((if greater % 2 == 0 { 1 } else { -1 }, out))
}

/// `d(u x̂_K) = sum_{l ∉ K} ± [u, x_l] x̂_{K ∪ l}`, the sign being that of
/// moving `x̂_l` from the right end of `x̂_K ∧ x̂_l` into place.
pub fn koszul_d<F: Field>(alg: &Enveloping<F>, c: &Cochain<F>) -> Cochain<F> {
    let n = alg.n();
    let mut out = Cochain::zero(n, c.degree + 1);
    for (k, u) in &c.comps {
        for l in 0..n as u8 {
            let Some((sign, kl)) = insert_sorted(k, l) else {
                continue;
            };
            let comm = alg.commutator_with_var(u, l as usize);
            if comm.is_zero() {
                continue;
            }
            let comm = if sign < 0 { comm.neg() } else { comm };
            out.add_component(kl, &comm);
        }
    }
    out
}

/// `sum c · a|b`, an element of `P_0 = S ⊗ S`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct P0Element<F> {
    terms: BTreeMap<(Monomial, Monomial), F>,
}

impl<F: Field> Default for P0Element<F> {
    fn default() -> Self {
        P0Element {
            terms: BTreeMap::new(),
        }
    }
}

impl<F: Field> P0Element<F> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, a: Monomial, b: Monomial, c: &F) {
        if c.is_zero() {
            return;
        }
        let key = (a, b);
        let e = self.terms.entry(key.clone()).or_insert_with(F::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// `f|g` expanded bilinearly.
    pub fn tensor(f: &Polynomial<F>, g: &Polynomial<F>) -> Self {
        let mut out = Self::zero();
        for (ma, ca) in f.terms() {
            for (mb, cb) in g.terms() {
                let mut c = ca.clone();
                c *= cb;
                out.add_term(ma.clone(), mb.clone(), &c);
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((a, b), c) in &other.terms {
            out.add_term(a.clone(), b.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((a, b), c) in &other.terms {
            out.add_term(a.clone(), b.clone(), &-c.clone());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Monomial, Monomial), &F)> + '_ {
        self.terms.iter()
    }

    /// `θ_0(a|b) = θ(a)|b + a|θ(b)`.
    pub fn apply_derivation(&self, theta: &Derivation<F>) -> Self {
        let mut out = Self::zero();
        for ((a, b), c) in &self.terms {
            let pa = Polynomial::monomial(a.clone(), c.clone());
            let pb = Polynomial::monomial(b.clone(), F::one());
            out = out
                .add(&P0Element::tensor(&theta.apply(&pa), &pb))
                .add(&P0Element::tensor(&pa, &theta.apply(&pb)));
        }
        out
    }
}

/// `sum c · a|x_k|b`, an element of `P_1 = S ⊗ V ⊗ S`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct P1Element<F> {
    terms: BTreeMap<(Monomial, usize, Monomial), F>,
}

impl<F: Field> Default for P1Element<F> {
    fn default() -> Self {
        P1Element {
            terms: BTreeMap::new(),
        }
    }
}

impl<F: Field> P1Element<F> {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `1|x_k|1`.
    pub fn generator(nvars: usize, k: usize) -> Self {
        let mut out = Self::zero();
        out.add_term(Monomial::one(nvars), k, Monomial::one(nvars), &F::one());
        out
    }

    pub fn add_term(&mut self, a: Monomial, k: usize, b: Monomial, c: &F) {
        if c.is_zero() {
            return;
        }
        let key = (a, k, b);
        let e = self.terms.entry(key.clone()).or_insert_with(F::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// `f|x_k|g` expanded bilinearly.
    pub fn tensor(f: &Polynomial<F>, k: usize, g: &Polynomial<F>) -> Self {
        let mut out = Self::zero();
        for (ma, ca) in f.terms() {
            for (mb, cb) in g.terms() {
                let mut c = ca.clone();
                c *= cb;
                out.add_term(ma.clone(), k, mb.clone(), &c);
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((a, k, b), c) in &other.terms {
            out.add_term(a.clone(), *k, b.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((a, k, b), c) in &other.terms {
            out.add_term(a.clone(), *k, b.clone(), &-c.clone());
        }
        out
    }

    pub fn scale(&self, s: &F) -> Self {
        let mut out = Self::zero();
        for ((a, k, b), c) in &self.terms {
            let mut c = c.clone();
            c *= s;
            out.add_term(a.clone(), *k, b.clone(), &c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Monomial, usize, Monomial), &F)> + '_ {
        self.terms.iter()
    }
}

impl<F: Field> fmt::Display for P1Element<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((a, k, b), c)| format!("{}*({a}|x{}|{b})", crate::scalar::format_scalar(c), k + 1))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `b(a|x_k|b) = a x_k | b - a | x_k b`.
pub fn resolution_b<F: Field>(x: &P1Element<F>) -> P0Element<F> {
    let mut out = P0Element::zero();
    for ((a, k, b), c) in &x.terms {
        let n = a.nvars();
        let xk = Monomial::var(n, *k);
        out.add_term(a.mul(&xk), b.clone(), c);
        out.add_term(a.clone(), b.mul(&xk), &-c.clone());
    }
    out
}

/// `Δ(x_{j_1} ⋯ x_{j_d}) = sum_t x_{j_1}⋯x_{j_{t-1}} | x_{j_t} | x_{j_{t+1}}⋯x_{j_d}`
/// with `j_1 <= ... <= j_d`, extended linearly. `b(Δ(g)) = g|1 - 1|g`.
pub fn delta<F: Field>(g: &Polynomial<F>) -> P1Element<F> {
    let n = g.nvars();
    let mut out = P1Element::zero();
    for (m, c) in g.terms() {
        let mut letters = Vec::new();
        for (j, &e) in m.exponents().iter().enumerate() {
            letters.extend(std::iter::repeat(j).take(e as usize));
        }
        let mut left = vec![0u32; n];
        for (t, &j) in letters.iter().enumerate() {
            let mut right = vec![0u32; n];
            for &l in &letters[t + 1..] {
                right[l] += 1;
            }
            out.add_term(
                Monomial::from_exponents(&left),
                j,
                Monomial::from_exponents(&right),
                c,
            );
            left[j] += 1;
        }
    }
    out
}

/// A lift `θ_1` of a derivation to `P_1`, determined by its values on `1|x_k|1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainLifting<F> {
    pub derivation: Derivation<F>,
    pub values: Vec<P1Element<F>>,
}

impl<F: Field> ChainLifting<F> {
    /// `b(θ_1(1|x_k|1)) = θ(x_k)|1 - 1|θ(x_k)` for every `k`.
    pub fn check_chain_map(&self) -> bool {
        let n = self.derivation.nvars();
        (0..n).all(|k| {
            let lhs = resolution_b(&self.values[k]);
            let g = self.derivation.component(k);
            let one = Polynomial::one(n);
            let rhs = P0Element::tensor(g, &one).sub(&P0Element::tensor(&one, g));
            lhs == rhs
        })
    }

    /// `θ_1` on an arbitrary element, extended `S^e`-linearly.
    pub fn apply(&self, x: &P1Element<F>) -> P1Element<F> {
        let mut out = P1Element::zero();
        for ((a, k, b), c) in x.terms() {
            for ((a2, k2, b2), c2) in self.values[*k].terms() {
                let mut cc = c.clone();
                cc *= c2;
                out.add_term(a.mul(a2), *k2, b2.mul(b), &cc);
            }
        }
        out
    }
}

/// The lifting `θ_1(1|x_k|1) = Δ(θ(x_k))`.
pub fn lift_derivation<F: Field>(theta: &Derivation<F>) -> ChainLifting<F> {
    ChainLifting {
        derivation: theta.clone(),
        values: theta.components().iter().map(delta).collect(),
    }
}

/// Closed-form lifting of `D = α_2` for the rank-3 wreath basis:
/// `D_1(1|x_1|1) = 0` and, for `k = 2, 3`,
/// `D_1(1|x_k|1) = sum_{s+t=r} x_k^s|x_k|x_k^t - sum_{s+t=r-1} x_1^s|x_1|x_1^t x_k - x_1^r|x_k|1`.
pub fn closed_form_d_lifting<F: Field>(d: &Derivation<F>, r: u32) -> ChainLifting<F> {
    closed_form_d_lifting_with(d, r, false)
}

/// The same formula with `x_k^s` in place of `x_1^s` in the middle sum.
/// This variant is not a chain map once `r >= 2`.
pub fn closed_form_d_lifting_variant<F: Field>(d: &Derivation<F>, r: u32) -> ChainLifting<F> {
    closed_form_d_lifting_with(d, r, true)
}

fn closed_form_d_lifting_with<F: Field>(d: &Derivation<F>, r: u32, variant: bool) -> ChainLifting<F> {
    let n = 3;
    let mono = |k: usize, e: u32| Monomial::one(n).with_exponent(k, e);
    let mut values = vec![P1Element::zero()];
    for k in 1..3 {
        let mut v = P1Element::zero();
        for s in 0..=r {
            v.add_term(mono(k, s), k, mono(k, r - s), &F::one());
        }
        for s in 0..r {
            let left = if variant { mono(k, s) } else { mono(0, s) };
            let right = mono(0, r - 1 - s).mul(&Monomial::var(n, k));
            v.add_term(left, 0, right, &-F::one());
        }
        v.add_term(mono(0, r), k, Monomial::one(n), &-F::one());
        values.push(v);
    }
    ChainLifting {
        derivation: d.clone(),
        values,
    }
}

/// `φ(sum c · a|x_l|b) = sum c · a φ_l b` for a degree-1 cochain `φ`.
pub fn evaluate_cochain<F: Field>(alg: &Enveloping<F>, phi: &Cochain<F>, x: &P1Element<F>) -> UElement<F> {
    let n = alg.n();
    let mut out = UElement::zero(n);
    for ((a, l, b), c) in x.terms() {
        let u = phi.component(&[*l as u8]);
        if u.is_zero() {
            continue;
        }
        let right = alg.mul_poly_right(&u, &Polynomial::monomial(b.clone(), F::one()));
        out.add_assign(&right.left_mul_poly(&Polynomial::monomial(a.clone(), c.clone())));
    }
    out
}

/// `θ^♯(φ)(1|x_k|1) = [θ, φ_k] - φ(θ_1(1|x_k|1))` on degree-1 cochains and
/// `θ^♯(u) = [θ, u]` on degree 0. `theta` is the element of `U` representing
/// the derivation of `lifting`.
pub fn sharp_action<F: Field>(
    alg: &Enveloping<F>,
    theta: &UElement<F>,
    lifting: &ChainLifting<F>,
    c: &Cochain<F>,
) -> Cochain<F> {
    let n = alg.n();
    match c.degree() {
        0 => Cochain::from_element(alg.commutator(theta, &c.component(&[]))),
        1 => Cochain::from_components(
            (0..n)
                .map(|k| {
                    let phik = c.component(&[k as u8]);
                    alg.commutator(theta, &phik)
                        .sub(&evaluate_cochain(alg, c, &lifting.values[k]))
                })
                .collect(),
        ),
        q => panic!("sharp action implemented for degrees 0 and 1, got {q}"),
    }
}

/// The element of `U` given by a derivation in the module, `sum g_i α_i`.
pub fn derivation_element<F: Field>(alg: &Enveloping<F>, theta: &Derivation<F>) -> crate::Result<UElement<F>> {
    let g = alg.basis().express_in_basis(theta)?;
    let n = alg.n();
    let mut u = UElement::zero(n);
    for (i, gi) in g.iter().enumerate() {
        u.add_assign(&UElement::generator(n, i).left_mul_poly(gi));
    }
    Ok(u)
}

/// `u_k = α_n + sum_i f_k^i α_i` as an element of `U`.
pub fn orthogonal_element<F: Field>(alg: &Enveloping<F>, fam: &OrthogonalFamily<F>, k: usize) -> UElement<F> {
    let n = alg.n();
    let mut u = UElement::zero(n);
    for (i, f) in fam.full_coefficients(k).iter().enumerate() {
        u.add_assign(&UElement::generator(n, i).left_mul_poly(f));
    }
    u
}

/// `η_k^p = u_k^p x̂_k`.
pub fn build_eta<F: Field>(alg: &Enveloping<F>, fam: &OrthogonalFamily<F>, k: usize, p: u32) -> Cochain<F> {
    let u = orthogonal_element(alg, fam, k);
    let mut acc = alg.one();
    for _ in 0..p {
        acc = alg.mul(&acc, &u);
    }
    Cochain::single(vec![k as u8], acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{build_family, FamilySpec};
    use crate::derivation::build_orthogonal_family;
    use num_rational::BigRational;

    type Q = BigRational;

    fn setup(r: u32) -> (Enveloping<Q>, OrthogonalFamily<Q>) {
        let spec = FamilySpec::Wreath { n: 3, r };
        let fam = build_family::<Q>(&spec).unwrap();
        (
            Enveloping::new(fam.basis).unwrap(),
            build_orthogonal_family(&spec).unwrap(),
        )
    }

    #[test]
    fn d0_of_euler() {
        let (alg, _) = setup(1);
        let d = koszul_d(&alg, &Cochain::from_element(alg.generator(0)));
        let expected = Cochain::from_components((0..3).map(|k| alg.x(k)).collect());
        assert_eq!(d, expected);
    }

    #[test]
    fn wedge_sign_convention() {
        let (alg, _) = setup(1);
        let u = alg.generator(2);
        let d = koszul_d(&alg, &Cochain::single(vec![0], u.clone()));
        assert_eq!(d.component(&[0, 1]), alg.commutator_with_var(&u, 1));
        let d2 = koszul_d(&alg, &Cochain::single(vec![1], u.clone()));
        assert_eq!(d2.component(&[0, 1]), alg.commutator_with_var(&u, 0).neg());
    }

    #[test]
    fn eta_zero_and_three() {
        let (alg, fam) = setup(2);
        assert_eq!(build_eta(&alg, &fam, 1, 0), Cochain::single(vec![1], alg.one()));
        assert_eq!(build_eta(&alg, &fam, 2, 1), Cochain::single(vec![2], alg.generator(2)));
    }

    #[test]
    fn closed_form_value_at_x2_for_r1() {
        let (alg, _) = setup(1);
        let lift = closed_form_d_lifting(alg.basis().get(1), 1);
        assert!(lift.values[0].is_zero());
        let p = |s: &str| Polynomial::<Q>::parse(s, 3, 1).unwrap();
        let expected = P1Element::tensor(&p("1"), 1, &p("x2"))
            .add(&P1Element::tensor(&p("x2"), 1, &p("1")))
            .sub(&P1Element::tensor(&p("1"), 0, &p("x2")))
            .sub(&P1Element::tensor(&p("x1"), 1, &p("1")));
        assert_eq!(lift.values[1], expected);
    }

    #[test]
    fn closed_form_lifting_is_a_chain_map() {
        for r in 1..=3 {
            let (alg, _) = setup(r);
            assert!(closed_form_d_lifting(alg.basis().get(1), r).check_chain_map());
        }
    }

    #[test]
    fn variant_lifting_fails_for_r2() {
        let (alg, _) = setup(1);
        assert!(closed_form_d_lifting_variant(alg.basis().get(1), 1).check_chain_map());
        let (alg, _) = setup(2);
        assert!(!closed_form_d_lifting_variant(alg.basis().get(1), 2).check_chain_map());
    }

    #[test]
    fn delta_telescopes() {
        let g = Polynomial::<Q>::parse("x1^2*x3 - 4*x2*x3^2 + 7*x1", 3, 1).unwrap();
        let one = Polynomial::one(3);
        assert_eq!(
            resolution_b(&delta(&g)),
            P0Element::tensor(&g, &one).sub(&P0Element::tensor(&one, &g))
        );
    }

    #[test]
    fn sharp_of_zero_is_zero() {
        let (alg, _) = setup(1);
        let d = alg.basis().get(1).clone();
        let lift = lift_derivation(&d);
        let theta = derivation_element(&alg, &d).unwrap();
        assert!(sharp_action(&alg, &theta, &lift, &Cochain::zero(3, 1)).is_zero());
    }
}
