//! Exact cohomology in weight slices: `H^q(S, U)` truncated by operator
//! order, the cokernel of the Saito matrix, Chevalley–Eilenberg cohomology
//! `H^q_S(L, S)`, the `L`-action on `H^1(S, U)` and the outer derivations.

use crate::derivation::{Derivation, DerivationBasis};
use crate::enveloping::{Enveloping, MultiIndex, UElement};
use crate::koszul::{insert_sorted, koszul_d, lift_derivation, sharp_action, ChainLifting, Cochain, IndexSet};
use crate::linalg::{rank_and_relations, Echelon, SparseVec};
use crate::poly::{Monomial, Polynomial};
use crate::scalar::Field;
use crate::{Error, Result};
use rayon::prelude::*;
use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

/// Dimensions of one weight slice of a complex: `dim = ker - im`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SliceDims {
    pub weight: i64,
    pub ker: usize,
    pub im: usize,
    pub dim: usize,
}

impl SliceDims {
    fn new(weight: i64, ker: usize, im: usize) -> Self {
        assert!(im <= ker, "image larger than kernel in weight {weight}");
        SliceDims {
            weight,
            ker,
            im,
            dim: ker - im,
        }
    }
}

/// Assigns column indices to coordinate keys on first sight.
#[derive(Clone, Debug)]
pub struct Columns<K> {
    index: HashMap<K, usize>,
}

impl<K: Hash + Eq + Clone> Default for Columns<K> {
    fn default() -> Self {
        Columns { index: HashMap::new() }
    }
}

impl<K: Hash + Eq + Clone> Columns<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn column(&mut self, k: &K) -> usize {
        if let Some(&c) = self.index.get(k) {
            return c;
        }
        let c = self.index.len();
        self.index.insert(k.clone(), c);
        c
    }

    pub fn vector<F: Field>(&mut self, entries: impl IntoIterator<Item = (K, F)>) -> SparseVec<F> {
        let mut acc: BTreeMap<usize, F> = BTreeMap::new();
        for (k, c) in entries {
            let col = self.column(&k);
            let e = acc.entry(col).or_insert_with(F::zero);
            *e += &c;
        }
        acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }
}

/// Coordinates of `X^q`: the wedge, the PBW index and the monomial.
pub type CochainKey = (IndexSet, MultiIndex, Monomial);

fn cochain_entries<F: Field>(c: &Cochain<F>) -> Vec<(CochainKey, F)> {
    let mut out = Vec::new();
    for (k, u) in c.components() {
        for (i, f) in u.terms() {
            for (m, x) in f.terms() {
                out.push(((k.clone(), i.clone(), m.clone()), x.clone()));
            }
        }
    }
    out
}

/// Coordinates of `c`, only keeping PBW indices of order at least `min_order`.
fn cochain_entries_from_order<F: Field>(c: &Cochain<F>, min_order: u32) -> Vec<(CochainKey, F)> {
    cochain_entries(c)
        .into_iter()
        .filter(|((_, i, _), _)| i.order() >= min_order)
        .collect()
}

/// All `q`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, q: usize) -> Vec<IndexSet> {
    fn rec(start: usize, n: usize, q: usize, cur: &mut IndexSet, out: &mut Vec<IndexSet>) {
        if cur.len() == q {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i as u8);
            rec(i + 1, n, q, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, q, &mut Vec::new(), &mut out);
    out
}

/// The monomial basis `f α^I x̂_K` of `X^q` in weight `d` and order at most `p`.
pub fn cochain_slice_basis<F: Field>(alg: &Enveloping<F>, q: usize, d: i64, p: u32) -> Result<Vec<Cochain<F>>> {
    let n = alg.n();
    let mut out = Vec::new();
    let elems = alg.enumerate_slice(p, d + q as i64)?;
    for k in subsets(n, q) {
        for (m, i) in &elems {
            let u = UElement::term(i.clone(), Polynomial::monomial(m.clone(), F::one()));
            out.push(Cochain::single(k.clone(), u));
        }
    }
    Ok(out)
}

fn image_rank<F: Field>(alg: &Enveloping<F>, src: &[Cochain<F>]) -> (usize, Vec<SparseVec<F>>) {
    let images: Vec<Cochain<F>> = src.par_iter().map(|c| koszul_d(alg, c)).collect();
    let mut cols = Columns::new();
    let vecs: Vec<SparseVec<F>> = images.iter().map(|c| cols.vector(cochain_entries(c))).collect();
    rank_and_relations(&vecs, cols.len())
}

/// `F_p H^q(S, U)` in weight `d`: cocycles of order `<= p` modulo the image
/// of `d^{q-1}` on order `<= p + 1`.
pub fn h_su_slice<F: Field>(alg: &Enveloping<F>, q: usize, d: i64, p: u32) -> Result<SliceDims> {
    let n = alg.n();
    if q > n {
        return Ok(SliceDims::new(d, 0, 0));
    }
    let src = cochain_slice_basis(alg, q, d, p)?;
    let ker = if q == n { src.len() } else { src.len() - image_rank(alg, &src).0 };
    let im = if q == 0 {
        0
    } else {
        let prev = cochain_slice_basis(alg, q - 1, d, p + 1)?;
        image_rank(alg, &prev).0
    };
    Ok(SliceDims::new(d, ker, im))
}

/// `h_su_slice` over a window of weights, computed in parallel.
pub fn h_su_dims<F: Field>(alg: &Enveloping<F>, q: usize, weights: (i64, i64), p: u32) -> Result<Vec<SliceDims>> {
    (weights.0..=weights.1)
        .into_par_iter()
        .map(|d| h_su_slice(alg, q, d, p))
        .collect()
}

/// Dimension of `((S^n) / S·{rows d^0(α_i)})` in weight `d`, where the
/// `k`-th free generator has weight `-1`.
pub fn coker_saito_slice<F: Field>(basis: &DerivationBasis<F>, d: i64) -> Result<SliceDims> {
    let n = basis.n();
    let w = basis.weights()?;
    if d + 1 < 0 {
        return Ok(SliceDims::new(d, 0, 0));
    }
    let free = n * Monomial::all_of_degree(n, (d + 1) as u32).len();
    let mut cols: Columns<(usize, Monomial)> = Columns::new();
    let mut ech = Echelon::new();
    for (i, alpha) in basis.elements().iter().enumerate() {
        let deg = d - w[i];
        if deg < 0 {
            continue;
        }
        for g in Monomial::all_of_degree(n, deg as u32) {
            let mut entries = Vec::new();
            for k in 0..n {
                for (m, c) in alpha.component(k).terms() {
                    entries.push(((k, m.mul(&g)), c.clone()));
                }
            }
            ech.insert(cols.vector(entries));
        }
    }
    Ok(SliceDims::new(d, free, ech.rank()))
}

pub fn coker_saito_dims<F: Field>(basis: &DerivationBasis<F>, weights: (i64, i64)) -> Result<Vec<SliceDims>> {
    (weights.0..=weights.1).map(|d| coker_saito_slice(basis, d)).collect()
}

/// `dim F_p H^1(S, U)_d` predicted as `sum_{j <= p} dim coker_{d - j w_n}`.
pub fn predict_h1_dims<F: Field>(basis: &DerivationBasis<F>, weights: (i64, i64), p: u32) -> Result<Vec<(i64, usize)>> {
    let w = basis.weights()?;
    let wn = *w.last().unwrap();
    if wn <= 0 {
        return Err(Error::Invalid(format!("top generator has weight {wn}; need a positive weight")));
    }
    let mut cache: HashMap<i64, usize> = HashMap::new();
    let mut out = Vec::new();
    for d in weights.0..=weights.1 {
        let mut total = 0;
        for j in 0..=p as i64 {
            let e = d - j * wn;
            if e < -1 {
                break;
            }
            if !cache.contains_key(&e) {
                cache.insert(e, coker_saito_slice(basis, e)?.dim);
            }
            total += cache[&e];
        }
        out.push((d, total));
    }
    Ok(out)
}

/// A cochain of `Hom_S(Λ^q_S L, S)` in the basis dual to the `α_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CeCochain<F> {
    pub nvars: usize,
    pub degree: usize,
    pub comps: BTreeMap<IndexSet, Polynomial<F>>,
}

impl<F: Field> CeCochain<F> {
    pub fn zero(nvars: usize, degree: usize) -> Self {
        CeCochain {
            nvars,
            degree,
            comps: BTreeMap::new(),
        }
    }

    pub fn component(&self, k: &[u8]) -> Polynomial<F> {
        self.comps.get(k).cloned().unwrap_or_else(|| Polynomial::zero(self.nvars))
    }

    pub fn add_component(&mut self, k: IndexSet, f: &Polynomial<F>) {
        let e = self.comps.entry(k.clone()).or_insert_with(|| Polynomial::zero(self.nvars));
        *e += f;
        if e.is_zero() {
            self.comps.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    fn entries(&self) -> Vec<((IndexSet, Monomial), F)> {
        let mut out = Vec::new();
        for (k, f) in &self.comps {
            for (m, c) in f.terms() {
                out.push(((k.clone(), m.clone()), c.clone()));
            }
        }
        out
    }
}

/// The Chevalley–Eilenberg differential with coefficients in `S`.
pub fn ce_d<F: Field>(basis: &DerivationBasis<F>, phi: &CeCochain<F>) -> Result<CeCochain<F>> {
    let n = basis.n();
    let consts = basis.structure_constants()?;
    let q = phi.degree;
    let mut out = CeCochain::zero(n, q + 1);
    for j in subsets(n, q + 1) {
        let mut acc = Polynomial::zero(n);
        for (a, &ia) in j.iter().enumerate() {
            let rest: IndexSet = j.iter().copied().filter(|&x| x != ia).collect();
            let v = basis.get(ia as usize).apply(&phi.component(&rest));
            if a % 2 == 0 {
                acc += &v;
            } else {
                acc -= &v;
            }
        }
        for a in 0..j.len() {
            for b in a + 1..j.len() {
                let (ia, ib) = (j[a] as usize, j[b] as usize);
                let rest: IndexSet = j.iter().copied().filter(|&x| x as usize != ia && x as usize != ib).collect();
                let sign_ab = if (a + b) % 2 == 0 { 1 } else { -1 };
                for (m, c) in consts[ia][ib].iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let Some((_, km)) = insert_sorted(&rest, m as u8) else {
                        continue;
                    };
                    // φ(α_m, rest) with α_m in front: sign of moving it into place.
                    let front = rest.iter().filter(|&&x| (x as usize) < m).count() as i64;
                    let sign = sign_ab * if front % 2 == 0 { 1 } else { -1 };
                    let v = c * &phi.component(&km);
                    if sign > 0 {
                        acc += &v;
                    } else {
                        acc -= &v;
                    }
                }
            }
        }
        if !acc.is_zero() {
            out.add_component(j, &acc);
        }
    }
    Ok(out)
}

/// Monomial basis of CE cochains of degree `q` and weight `d`, where the
/// component at `K` has polynomial degree `d + sum_{i in K} w_i`.
pub fn ce_slice_basis<F: Field>(basis: &DerivationBasis<F>, q: usize, d: i64) -> Result<Vec<CeCochain<F>>> {
    let n = basis.n();
    let w = basis.weights()?;
    let mut out = Vec::new();
    for k in subsets(n, q) {
        let deg = d + k.iter().map(|&i| w[i as usize]).sum::<i64>();
        if deg < 0 {
            continue;
        }
        for m in Monomial::all_of_degree(n, deg as u32) {
            let mut c = CeCochain::zero(n, q);
            c.add_component(k.clone(), &Polynomial::monomial(m, F::one()));
            out.push(c);
        }
    }
    Ok(out)
}

fn ce_image_rank<F: Field>(basis: &DerivationBasis<F>, src: &[CeCochain<F>]) -> Result<usize> {
    let mut cols = Columns::new();
    let mut ech = Echelon::new();
    for c in src {
        ech.insert(cols.vector(ce_d(basis, c)?.entries()));
    }
    Ok(ech.rank())
}

/// `H^q_S(L, S)` in weight `d`.
pub fn ce_s_slice<F: Field>(basis: &DerivationBasis<F>, q: usize, d: i64) -> Result<SliceDims> {
    let n = basis.n();
    if q > n {
        return Ok(SliceDims::new(d, 0, 0));
    }
    let src = ce_slice_basis(basis, q, d)?;
    let ker = if q == n { src.len() } else { src.len() - ce_image_rank(basis, &src)? };
    let im = if q == 0 { 0 } else { ce_image_rank(basis, &ce_slice_basis(basis, q - 1, d)?)? };
    Ok(SliceDims::new(d, ker, im))
}

pub fn ce_s_dims<F: Field>(basis: &DerivationBasis<F>, q: usize, weights: (i64, i64)) -> Result<Vec<SliceDims>> {
    (weights.0..=weights.1).map(|d| ce_s_slice(basis, q, d)).collect()
}

/// `d_CE ∘ d_CE` applied to `phi`; zero when the differential is correct.
pub fn ce_d_squared<F: Field>(basis: &DerivationBasis<F>, phi: &CeCochain<F>) -> Result<CeCochain<F>> {
    ce_d(basis, &ce_d(basis, phi)?)
}

/// Coboundaries `d^0(X^0_{d, <= p+1})` inside `X^1_d`, for membership tests.
pub struct Coboundaries<F> {
    pub weight: i64,
    pub order: u32,
    cols: Columns<CochainKey>,
    ech: Echelon<F>,
}

impl<F: Field> Coboundaries<F> {
    pub fn new(alg: &Enveloping<F>, d: i64, p: u32) -> Result<Self> {
        let src = cochain_slice_basis(alg, 0, d, p + 1)?;
        let images: Vec<Cochain<F>> = src.par_iter().map(|c| koszul_d(alg, c)).collect();
        let mut cols = Columns::new();
        let mut ech = Echelon::new();
        for c in &images {
            ech.insert(cols.vector(cochain_entries(c)));
        }
        Ok(Coboundaries {
            weight: d,
            order: p,
            cols,
            ech,
        })
    }

    pub fn rank(&self) -> usize {
        self.ech.rank()
    }

    /// Canonical representative of `c` modulo coboundaries.
    pub fn residue(&mut self, c: &Cochain<F>) -> SparseVec<F> {
        let v = self.cols.vector(cochain_entries(c));
        self.ech.reduce(v)
    }

    pub fn contains(&mut self, c: &Cochain<F>) -> bool {
        self.residue(c).is_empty()
    }
}

/// Representatives of a basis of `F_p H^1(S, U)_d`.
pub struct H1Slice<F> {
    pub weight: i64,
    pub order: u32,
    pub reps: Vec<Cochain<F>>,
    pub boundaries: Coboundaries<F>,
}

impl<F: Field> H1Slice<F> {
    pub fn new(alg: &Enveloping<F>, d: i64, p: u32) -> Result<Self> {
        let src = cochain_slice_basis(alg, 1, d, p)?;
        let (_, relations) = image_rank(alg, &src);
        let mut boundaries = Coboundaries::new(alg, d, p)?;
        let mut classes = Echelon::new();
        let mut reps = Vec::new();
        for rel in relations {
            let mut z = Cochain::zero(alg.n(), 1);
            for (j, c) in rel {
                z = z.add(&src[j].scale(&c));
            }
            if classes.insert(boundaries.residue(&z)) {
                reps.push(z);
            }
        }
        Ok(H1Slice {
            weight: d,
            order: p,
            reps,
            boundaries,
        })
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }
}

/// The action of each basis derivation on cochains, with generic liftings.
pub struct LieAction<'a, F: Field> {
    pub alg: &'a Enveloping<F>,
    elements: Vec<UElement<F>>,
    liftings: Vec<ChainLifting<F>>,
}

impl<'a, F: Field> LieAction<'a, F> {
    pub fn new(alg: &'a Enveloping<F>) -> Self {
        let n = alg.n();
        LieAction {
            alg,
            elements: (0..n).map(|i| alg.generator(i)).collect(),
            liftings: alg.basis().elements().iter().map(lift_derivation).collect(),
        }
    }

    /// `α_i^♯(c)`.
    pub fn nabla(&self, i: usize, c: &Cochain<F>) -> Cochain<F> {
        sharp_action(self.alg, &self.elements[i], &self.liftings[i], c)
    }

    /// `θ^♯(c)` for an arbitrary derivation in the module.
    pub fn nabla_derivation(&self, theta: &Derivation<F>, c: &Cochain<F>) -> Result<Cochain<F>> {
        let u = crate::koszul::derivation_element(self.alg, theta)?;
        Ok(sharp_action(self.alg, &u, &lift_derivation(theta), c))
    }
}

/// `H^0_S(L, F_p H^1(S, U)_d)`: classes killed by every `∇_{α_i}`.
pub fn invariants_h1_slice<F: Field>(alg: &Enveloping<F>, d: i64, p: u32) -> Result<SliceDims> {
    let n = alg.n();
    let w = alg.weights()?.to_vec();
    let h = H1Slice::new(alg, d, p)?;
    let action = LieAction::new(alg);
    let mut targets: Vec<Coboundaries<F>> = (0..n)
        .map(|i| Coboundaries::new(alg, d + w[i], p))
        .collect::<Result<_>>()?;
    let images: Vec<Vec<Cochain<F>>> = h
        .reps
        .par_iter()
        .map(|z| (0..n).map(|i| action.nabla(i, z)).collect())
        .collect();
    let mut offsets = vec![0usize; n];
    let mut residues: Vec<Vec<SparseVec<F>>> = Vec::new();
    for imgs in &images {
        let mut row = Vec::new();
        for (i, c) in imgs.iter().enumerate() {
            row.push(targets[i].residue(c));
        }
        residues.push(row);
    }
    for i in 1..n {
        offsets[i] = offsets[i - 1] + targets[i - 1].cols.len();
    }
    let mut ech = Echelon::new();
    for row in residues {
        let mut v: SparseVec<F> = Vec::new();
        for (i, r) in row.into_iter().enumerate() {
            v.extend(r.into_iter().map(|(c, x)| (c + offsets[i], x)));
        }
        ech.insert(v);
    }
    Ok(SliceDims::new(d, h.dim() - ech.rank(), 0))
}

/// `H^0_S(L, H^1(S, U))` restricted to weight 0.
pub fn invariants_h1<F: Field>(alg: &Enveloping<F>, p: u32) -> Result<SliceDims> {
    invariants_h1_slice(alg, 0, p)
}

/// `∇_E` acts on `F_p H^1(S, U)_d` as multiplication by `d`.
pub fn euler_scaling_holds<F: Field>(alg: &Enveloping<F>, d: i64, p: u32) -> Result<bool> {
    let mut h = H1Slice::new(alg, d, p)?;
    let action = LieAction::new(alg);
    let euler = Derivation::euler(alg.n());
    let scale = F::from_i64(d);
    for z in h.reps.clone() {
        let v = action.nabla_derivation(&euler, &z)?.sub(&z.scale(&scale));
        if !h.boundaries.contains(&v) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `∇_{α_i} ∇_{α_j} - ∇_{α_j} ∇_{α_i} - sum_m c_{ij}^m ∇_{α_m}` vanishes on
/// `F_p H^1(S, U)_d` for all `i < j`.
pub fn lie_action_is_flat<F: Field>(alg: &Enveloping<F>, d: i64, p: u32) -> Result<bool> {
    let n = alg.n();
    let w = alg.weights()?.to_vec();
    let consts = alg.basis().structure_constants()?;
    let h = H1Slice::new(alg, d, p)?;
    let action = LieAction::new(alg);
    for i in 0..n {
        for j in i + 1..n {
            let mut target = Coboundaries::new(alg, d + w[i] + w[j], p)?;
            for z in &h.reps {
                let mut v = action.nabla(i, &action.nabla(j, z)).sub(&action.nabla(j, &action.nabla(i, z)));
                for (m, c) in consts[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        v = v.sub(&action.nabla(m, z).left_mul_poly(c));
                    }
                }
                if !target.contains(&v) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Whether `v` lies in `F_{p-1} X^1 + d^0(X^0)` within weight `d`: its
/// components of order `>= p` must agree with those of a coboundary.
pub fn in_lower_order_plus_coboundaries<F: Field>(alg: &Enveloping<F>, v: &Cochain<F>, d: i64, p: u32) -> Result<bool> {
    let order = v.order().unwrap_or(0);
    let top = order.max(p);
    let src = cochain_slice_basis(alg, 0, d, top + 1)?;
    let images: Vec<Cochain<F>> = src.par_iter().map(|c| koszul_d(alg, c)).collect();
    let mut cols = Columns::new();
    let mut ech = Echelon::new();
    for c in &images {
        ech.insert(cols.vector(cochain_entries_from_order(c, p)));
    }
    Ok(ech.contains(cols.vector(cochain_entries_from_order(v, p))))
}

/// Whether every term of `v` has order `< p`.
pub fn in_lower_order<F: Field>(v: &Cochain<F>, p: u32) -> bool {
    match v.order() {
        None => true,
        Some(o) => o < p,
    }
}

/// `φ_f(α_i) = α_i(f) / f`, the cocycle of the outer derivation `∂_f`.
pub fn outer_derivation_cocycle<F: Field>(basis: &DerivationBasis<F>, f: &Polynomial<F>) -> Result<CeCochain<F>> {
    let n = basis.n();
    let mut c = CeCochain::zero(n, 1);
    for (i, a) in basis.elements().iter().enumerate() {
        let v = a.apply(f).exact_div(f)?;
        c.add_component(vec![i as u8], &v);
    }
    Ok(c)
}

/// The derivation `∂` of `U` vanishing on `S` with `∂(α_i) = φ(α_i)`.
pub fn apply_outer_derivation<F: Field>(alg: &Enveloping<F>, phi: &CeCochain<F>, u: &UElement<F>) -> UElement<F> {
    let n = alg.n();
    let mut out = UElement::zero(n);
    for (i, g) in u.terms() {
        let word = i.word();
        for t in 0..word.len() {
            let value = phi.component(&[word[t]]);
            if value.is_zero() {
                continue;
            }
            let left = alg.normal_form_word(&word[..t]);
            let right = alg.normal_form_word(&word[t + 1..]);
            let mid = alg.mul(&left, &UElement::from_poly(value));
            out.add_assign(&alg.mul(&mid, &right).left_mul_poly(g));
        }
    }
    out
}

/// Outcome of the outer-derivation computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OuterReport {
    pub forms: usize,
    pub all_cocycles: bool,
    pub rank: usize,
    pub h1_weight0: usize,
    pub compositions_vanish: bool,
}

/// Rank of the classes `[φ_f]` in `H^1_S(L, S)_0`, one per hyperplane, and
/// the vanishing of `∂_f ∘ ∂_g` on the generators of `U`.
pub fn outer_basis_report<F: Field>(alg: &Enveloping<F>, forms: &[Polynomial<F>]) -> Result<OuterReport> {
    let basis = alg.basis();
    let n = alg.n();
    let cocycles: Vec<CeCochain<F>> = forms
        .iter()
        .map(|f| outer_derivation_cocycle(basis, f))
        .collect::<Result<_>>()?;
    let mut all_cocycles = true;
    for c in &cocycles {
        all_cocycles &= ce_d(basis, c)?.is_zero();
    }
    let mut cols = Columns::new();
    let mut ech = Echelon::new();
    for c in ce_slice_basis(basis, 0, 0)? {
        ech.insert(cols.vector(ce_d(basis, &c)?.entries()));
    }
    let base = ech.rank();
    for c in &cocycles {
        ech.insert(cols.vector(c.entries()));
    }
    let rank = ech.rank() - base;
    let generators: Vec<UElement<F>> = (0..n).map(|k| alg.x(k)).chain((0..n).map(|i| alg.generator(i))).collect();
    let mut compositions_vanish = true;
    for a in &cocycles {
        for b in &cocycles {
            for g in &generators {
                let v = apply_outer_derivation(alg, a, &apply_outer_derivation(alg, b, g));
                compositions_vanish &= v.is_zero();
            }
        }
    }
    Ok(OuterReport {
        forms: forms.len(),
        all_cocycles,
        rank,
        h1_weight0: ce_s_slice(basis, 1, 0)?.dim,
        compositions_vanish,
    })
}

/// Elements of `U` of weight `d` and order `<= p` commuting with every
/// `x_k` and every `α_i`.
pub fn center_slice<F: Field>(alg: &Enveloping<F>, d: i64, p: u32) -> Result<usize> {
    let n = alg.n();
    let src = alg.enumerate_slice(p, d)?;
    let images: Vec<Vec<(usize, UElement<F>)>> = src
        .par_iter()
        .map(|(m, i)| {
            let u = UElement::term(i.clone(), Polynomial::monomial(m.clone(), F::one()));
            let mut out = Vec::new();
            for k in 0..n {
                out.push((k, alg.commutator_with_var(&u, k)));
            }
            for j in 0..n {
                out.push((n + j, alg.commutator(&u, &alg.generator(j))));
            }
            out
        })
        .collect();
    let mut cols: Columns<(usize, MultiIndex, Monomial)> = Columns::new();
    let vecs: Vec<SparseVec<F>> = images
        .iter()
        .map(|parts| {
            let mut entries = Vec::new();
            for (slot, u) in parts {
                for (i, f) in u.terms() {
                    for (m, c) in f.terms() {
                        entries.push(((*slot, i.clone(), m.clone()), c.clone()));
                    }
                }
            }
            cols.vector(entries)
        })
        .collect();
    let (rank, _) = rank_and_relations(&vecs, cols.len());
    Ok(src.len() - rank)
}

/// Per-weight dimensions of the center, computed directly in `U` and as
/// `H^0_S(L, S)`, together with the check `H^0(S, U)_d = S_d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CenterReport {
    pub direct: Vec<(i64, usize)>,
    pub ce: Vec<SliceDims>,
    pub h0_is_s: bool,
}

pub fn center_report<F: Field>(alg: &Enveloping<F>, weights: (i64, i64), p: u32) -> Result<CenterReport> {
    let n = alg.n();
    let direct = (weights.0..=weights.1)
        .into_par_iter()
        .map(|d| Ok((d, center_slice(alg, d, p)?)))
        .collect::<Result<Vec<_>>>()?;
    let ce = ce_s_dims(alg.basis(), 0, weights)?;
    let h0 = h_su_dims(alg, 0, weights, p)?;
    let h0_is_s = h0
        .iter()
        .all(|s| s.dim == if s.weight < 0 { 0 } else { Monomial::all_of_degree(n, s.weight as u32).len() });
    Ok(CenterReport { direct, ce, h0_is_s })
}

/// `dim HH^1(U) = dim H^1_S(L, S) + dim H^0_S(L, H^1(S, U))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hh1Report {
    pub ce_h1: Vec<SliceDims>,
    pub invariants: usize,
    pub total: usize,
}

pub fn hh1_report<F: Field>(alg: &Enveloping<F>, weights: (i64, i64), p: u32) -> Result<Hh1Report> {
    let ce_h1 = ce_s_dims(alg.basis(), 1, weights)?;
    let invariants = invariants_h1(alg, p)?.dim;
    let total = ce_h1.iter().map(|s| s.dim).sum::<usize>() + invariants;
    Ok(Hh1Report {
        ce_h1,
        invariants,
        total,
    })
}

/// For an order-one cocycle `ω = sum_l (f_l^2 α_2 + f_l^1 α_1) x̂_l`, the
/// elements `g_11, g_12, g_22` with `g_11 α_1(x_1) = f_1^1`,
/// `g_12 α_1(x_1) = f_1^2` and `g_22 α_2(x_2) = f_2^2 - g_12 α_1(x_2)`.
pub fn order_one_primitive<F: Field>(alg: &Enveloping<F>, omega: &Cochain<F>) -> Result<[Polynomial<F>; 3]> {
    let basis = alg.basis();
    let a = MultiIndex::unit(alg.n(), 0);
    let b = MultiIndex::unit(alg.n(), 1);
    let f = |l: u8, i: &MultiIndex| omega.component(&[l]).coefficient(i);
    let a11 = basis.get(0).component(0);
    let a12 = basis.get(0).component(1);
    let a22 = basis.get(1).component(1);
    let g11 = f(0, &a).exact_div(a11)?;
    let g12 = f(0, &b).exact_div(a11)?;
    let g22 = (&f(1, &b) - &(&g12 * a12)).exact_div(a22)?;
    Ok([g11, g12, g22])
}

/// `½ g_11 α_1^2 + g_12 α_2 α_1 + ½ g_22 α_2^2`.
pub fn order_one_potential<F: Field>(alg: &Enveloping<F>, g: &[Polynomial<F>; 3]) -> Result<UElement<F>> {
    let n = alg.n();
    let half = F::from_i64(2).inv().ok_or_else(|| Error::FieldTooSmall("2 is not invertible".into()))?;
    let mut e = vec![0u32; n];
    e[0] = 2;
    let mut u = UElement::term(MultiIndex::from_exponents(&e), g[0].scale(&half));
    e[0] = 1;
    e[1] = 1;
    u.add_term(MultiIndex::from_exponents(&e), &g[1]);
    e[0] = 0;
    e[1] = 2;
    u.add_term(MultiIndex::from_exponents(&e), &g[2].scale(&half));
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{build_family, FamilySpec};
    use num_rational::BigRational;

    type Q = BigRational;

    fn alg(spec: FamilySpec) -> Enveloping<Q> {
        Enveloping::new(build_family::<Q>(&spec).unwrap().basis).unwrap()
    }

    #[test]
    fn subsets_are_lexicographic() {
        assert_eq!(subsets(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(subsets(3, 0), vec![Vec::<u8>::new()]);
    }

    #[test]
    fn h0_is_polynomials() {
        let a = alg(FamilySpec::Wreath { n: 3, r: 1 });
        for s in h_su_dims(&a, 0, (0, 4), 3).unwrap() {
            let d = s.weight as usize;
            assert_eq!(s.dim, (d + 2) * (d + 1) / 2);
        }
    }

    #[test]
    fn coker_low_weights() {
        let a = alg(FamilySpec::Wreath { n: 3, r: 1 });
        let c = coker_saito_dims(a.basis(), (-1, 0)).unwrap();
        assert_eq!(c[0].dim, 3);
        // 3 · dim S_1 = 9 minus the Euler relation
        assert_eq!(c[1].dim, 8);
    }

    #[test]
    fn ce_constants_only_in_degree_zero() {
        let a = alg(FamilySpec::Wreath { n: 3, r: 1 });
        let dims = ce_s_dims(a.basis(), 0, (-1, 4)).unwrap();
        assert_eq!(dims.iter().map(|s| s.dim).collect::<Vec<_>>(), vec![0, 1, 0, 0, 0, 0]);
    }

    #[test]
    fn outer_cocycle_of_x1() {
        let a = alg(FamilySpec::Wreath { n: 3, r: 1 });
        let x1 = Polynomial::var(3, 0);
        let c = outer_derivation_cocycle(a.basis(), &x1).unwrap();
        assert_eq!(c.component(&[0]), Polynomial::one(3));
        assert!(c.component(&[1]).is_zero());
        assert!(c.component(&[2]).is_zero());
    }

    #[test]
    fn outer_cocycle_of_x3_minus_x2() {
        let a = alg(FamilySpec::Wreath { n: 3, r: 1 });
        let f = Polynomial::<Q>::parse("x3 - x2", 3, 1).unwrap();
        let c = outer_derivation_cocycle(a.basis(), &f).unwrap();
        let p = |s: &str| Polynomial::<Q>::parse(s, 3, 1).unwrap();
        assert_eq!(c.component(&[0]), p("1"));
        assert_eq!(c.component(&[1]), p("x3 + x2 - x1"));
        assert_eq!(c.component(&[2]), p("x3*(x3 - x1)"));
    }

    #[test]
    fn ce_d_squares_to_zero() {
        let a = alg(FamilySpec::Wreath { n: 3, r: 2 });
        for q in 0..2 {
            for c in ce_slice_basis(a.basis(), q, 1).unwrap() {
                assert!(ce_d_squared(a.basis(), &c).unwrap().is_zero());
            }
        }
    }
}
