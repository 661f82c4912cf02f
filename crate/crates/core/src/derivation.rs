//! Derivations of the polynomial ring, triangular bases of logarithmic
//! derivations and the structural conditions on them.

use crate::arrangement::{Arrangement, FamilySpec};
use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial};
use crate::scalar::{to_cyclotomic, Cyclotomic, Field};
use num_traits::Zero;
use std::fmt;
use std::sync::OnceLock;

/// `sum_i c_i d/dx_i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Derivation<F> {
    comps: Vec<Polynomial<F>>,
}

impl<F: Field> Derivation<F> {
    pub fn new(comps: Vec<Polynomial<F>>) -> Self {
        let n = comps.len();
        assert!(comps.iter().all(|c| c.nvars() == n), "component ambient mismatch");
        Derivation { comps }
    }

    pub fn zero(n: usize) -> Self {
        Derivation::new(vec![Polynomial::zero(n); n])
    }

    pub fn euler(n: usize) -> Self {
        Derivation::new((0..n).map(|i| Polynomial::var(n, i)).collect())
    }

    /// `d/dx_{i+1}`.
    pub fn partial(n: usize, i: usize) -> Self {
        let mut d = Derivation::zero(n);
        d.comps[i] = Polynomial::one(n);
        d
    }

    pub fn nvars(&self) -> usize {
        self.comps.len()
    }

    /// The value on `x_{k+1}`.
    pub fn component(&self, k: usize) -> &Polynomial<F> {
        &self.comps[k]
    }

    pub fn components(&self) -> &[Polynomial<F>] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Polynomial::is_zero)
    }

    pub fn apply(&self, f: &Polynomial<F>) -> Polynomial<F> {
        let mut out = Polynomial::zero(self.nvars());
        for (i, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let df = f.derivative(i);
            if !df.is_zero() {
                out += &(c * &df);
            }
        }
        out
    }

    pub fn bracket(&self, other: &Self) -> Self {
        Derivation::new(
            (0..self.nvars())
                .map(|k| self.apply(&other.comps[k]) - other.apply(&self.comps[k]))
                .collect(),
        )
    }

    pub fn scale(&self, f: &Polynomial<F>) -> Self {
        Derivation::new(self.comps.iter().map(|c| f * c).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        Derivation::new(self.comps.iter().zip(&other.comps).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Derivation::new(self.comps.iter().zip(&other.comps).map(|(a, b)| a - b).collect())
    }

    /// Weight `w` such that every nonzero component is homogeneous of degree `w + 1`.
    pub fn weight(&self) -> Option<i64> {
        let mut w = None;
        for c in self.comps.iter().filter(|c| !c.is_zero()) {
            let d = c.homogeneous_degree()? as i64 - 1;
            match w {
                None => w = Some(d),
                Some(v) if v != d => return None,
                _ => {}
            }
        }
        w
    }

    /// The same derivation in coordinates `y = T x`.
    pub fn change_coordinates(&self, t: &crate::linalg::ScalarMatrix<F>) -> Result<Self> {
        let n = self.nvars();
        let tinv = t
            .inverse()
            .ok_or_else(|| Error::Invalid("singular coordinate change".into()))?;
        let tinv_rows = tinv.to_rows();
        let pulled: Vec<Polynomial<F>> =
            self.comps.iter().map(|c| c.substitute_linear(&tinv_rows)).collect();
        Ok(Derivation::new(
            (0..n)
                .map(|j| {
                    let mut acc = Polynomial::zero(n);
                    for (i, c) in pulled.iter().enumerate() {
                        let tji = t.get(j, i);
                        if !tji.is_zero() {
                            acc += &c.scale(tji);
                        }
                    }
                    acc
                })
                .collect(),
        ))
    }
}

impl<F: Field> fmt::Display for Derivation<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .comps
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("({c})*d{}", i + 1))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl<F: fmt::Debug> fmt::Debug for Derivation<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.comps).finish()
    }
}

/// True iff every form divides the derivation's value on it.
pub fn is_tangent<F: Field>(arr: &Arrangement, d: &Derivation<F>) -> bool {
    let n = arr.n();
    let comps: Vec<Polynomial<Cyclotomic>> = d
        .components()
        .iter()
        .map(|c| c.map_coefficients(to_cyclotomic))
        .collect();
    arr.form_polynomials().iter().all(|lambda| {
        let mut val = Polynomial::zero(n);
        for (k, c) in comps.iter().enumerate() {
            let coef = lambda.coeff(&Monomial::var(n, k));
            if !coef.is_zero() {
                val += &c.scale(&coef);
            }
        }
        val.exact_div(lambda).is_ok()
    })
}

/// Structure constants `c[i][j][k]` with `[α_i, α_j] = sum_k c[i][j][k] α_k`.
pub type StructureConstants<F> = Vec<Vec<Vec<Polynomial<F>>>>;

/// An ordered basis `α_1..α_n` of a module of derivations.
#[derive(Clone)]
pub struct DerivationBasis<F> {
    elems: Vec<Derivation<F>>,
    constants: OnceLock<std::result::Result<StructureConstants<F>, Error>>,
}

impl<F: fmt::Debug> fmt::Debug for DerivationBasis<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.elems).finish()
    }
}

impl<F: Field> PartialEq for DerivationBasis<F> {
    fn eq(&self, other: &Self) -> bool {
        self.elems == other.elems
    }
}

impl<F: Field> DerivationBasis<F> {
    pub fn new(elems: Vec<Derivation<F>>) -> Result<Self> {
        let n = elems.len();
        if elems.iter().any(|d| d.nvars() != n) {
            return Err(Error::Invalid(format!(
                "a basis of derivations in {n} variables needs {n} members"
            )));
        }
        Ok(DerivationBasis {
            elems,
            constants: OnceLock::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.elems.len()
    }

    pub fn get(&self, i: usize) -> &Derivation<F> {
        &self.elems[i]
    }

    pub fn elements(&self) -> &[Derivation<F>] {
        &self.elems
    }

    /// Entry `(i, k)` is `α_i(x_k)`.
    pub fn saito_matrix(&self) -> Vec<Vec<Polynomial<F>>> {
        self.elems.iter().map(|d| d.components().to_vec()).collect()
    }

    pub fn saito_determinant(&self) -> Polynomial<F> {
        polynomial_determinant(&self.saito_matrix())
    }

    /// `α_i(x_j) = 0` for `i > j` and a nonzero diagonal product.
    pub fn check_triangularizable(&self) -> bool {
        let n = self.n();
        (0..n).all(|i| !self.elems[i].component(i).is_zero())
            && (0..n).all(|i| (0..i).all(|j| self.elems[i].component(j).is_zero()))
    }

    /// Weights `w_m` with every nonzero `α_m(x_k)` of degree `w_m + 1`.
    pub fn weights(&self) -> Result<Vec<i64>> {
        self.elems
            .iter()
            .enumerate()
            .map(|(m, d)| {
                d.weight().ok_or_else(|| {
                    Error::NotHomogeneous(format!("basis member {} has no weight", m + 1))
                })
            })
            .collect()
    }

    /// Coefficients `g` with `d = sum_i g_i α_i`, by triangular substitution.
    pub fn express_in_basis(&self, d: &Derivation<F>) -> Result<Vec<Polynomial<F>>> {
        if !self.check_triangularizable() {
            return Err(Error::NotTriangular);
        }
        let n = self.n();
        let mut g: Vec<Polynomial<F>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut rhs = d.component(i).clone();
            for (j, gj) in g.iter().enumerate() {
                rhs -= &(gj * self.elems[j].component(i));
            }
            let gi = rhs.exact_div(self.elems[i].component(i)).map_err(|_| {
                Error::NotInModule(format!(
                    "{} does not divide the residual at x{}",
                    self.elems[i].component(i),
                    i + 1
                ))
            })?;
            g.push(gi);
        }
        Ok(g)
    }

    /// `sum_i g_i α_i`.
    pub fn combine(&self, g: &[Polynomial<F>]) -> Derivation<F> {
        let n = self.n();
        let mut acc = Derivation::zero(n);
        for (gi, a) in g.iter().zip(&self.elems) {
            if !gi.is_zero() {
                acc = acc.add(&a.scale(gi));
            }
        }
        acc
    }

    /// Computed once per basis.
    pub fn structure_constants(&self) -> Result<&StructureConstants<F>> {
        self.constants
            .get_or_init(|| {
                let n = self.n();
                let mut c = vec![vec![vec![Polynomial::zero(n); n]; n]; n];
                for i in 0..n {
                    for j in i + 1..n {
                        let g = self.express_in_basis(&self.elems[i].bracket(&self.elems[j]))?;
                        for k in 0..n {
                            c[j][i][k] = -&g[k];
                            c[i][j][k] = g[k].clone();
                        }
                    }
                }
                Ok(c)
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// For each `k < n`, `α_k(x_k)` is coprime with the determinant of the
    /// minor with rows `x_{k+1}..x_n` and columns `α_k..α_{n-1}`.
    pub fn check_bezout(&self) -> bool {
        let n = self.n();
        (0..n.saturating_sub(1)).all(|k| {
            let minor = self.bezout_minor(k);
            let det = polynomial_determinant(&minor);
            self.elems[k].component(k).gcd(&det).is_one()
        })
    }

    /// Zero-based `k`: entry `(a, b)` is `α_{k+b}(x_{k+1+a})`.
    pub fn bezout_minor(&self, k: usize) -> Vec<Vec<Polynomial<F>>> {
        let n = self.n();
        (k + 1..n)
            .map(|row| (k..n - 1).map(|col| self.elems[col].component(row).clone()).collect())
            .collect()
    }

    pub fn bezout_minor_determinant(&self, k: usize) -> Polynomial<F> {
        polynomial_determinant(&self.bezout_minor(k))
    }
}

/// Fraction-free determinant of a square matrix of polynomials.
pub fn polynomial_determinant<F: Field>(m: &[Vec<Polynomial<F>>]) -> Polynomial<F> {
    let n = m.len();
    if n == 0 {
        return Polynomial::one(0);
    }
    let nv = m[0][0].nvars();
    let mut a: Vec<Vec<Polynomial<F>>> = m.to_vec();
    let mut prev = Polynomial::one(nv);
    let mut negate = false;
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Polynomial::zero(nv);
        };
        if p != c {
            a.swap(p, c);
            negate = !negate;
        }
        for i in c + 1..n {
            for j in c + 1..n {
                let num = &(&a[c][c] * &a[i][j]) - &(&a[i][c] * &a[c][j]);
                a[i][j] = num.exact_div(&prev).expect("Bareiss division is exact");
            }
            a[i][c] = Polynomial::zero(nv);
        }
        prev = a[c][c].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Elements `u_k = α_n + sum_{i<n} f_k^i α_i` with `[u_k, x_l] = 0` for `l != k`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthogonalFamily<F> {
    /// `coeffs[k][i]` is `f_k^i` for `i < n - 1`.
    pub coeffs: Vec<Vec<Polynomial<F>>>,
}

impl<F: Field> OrthogonalFamily<F> {
    /// All coefficients of `u_k` on the basis, including the leading 1.
    pub fn full_coefficients(&self, k: usize) -> Vec<Polynomial<F>> {
        let mut v = self.coeffs[k].clone();
        let n = v.len() + 1;
        v.push(Polynomial::one(n));
        v
    }

    pub fn as_derivation(&self, basis: &DerivationBasis<F>, k: usize) -> Derivation<F> {
        basis.combine(&self.full_coefficients(k))
    }
}

/// Checks `[u_k, x_l] = u_k(x_l) = 0` for every `l != k`.
pub fn check_orthogonality<F: Field>(basis: &DerivationBasis<F>, fam: &OrthogonalFamily<F>) -> bool {
    let n = basis.n();
    fam.coeffs.len() == n
        && (0..n).all(|k| {
            let u = fam.as_derivation(basis, k);
            (0..n).filter(|&l| l != k).all(|l| u.component(l).is_zero())
        })
}

/// The explicit orthogonal family attached to a built family:
/// `u_k = sum_{i>=k} (-1)^{n-i} prod_{j>i} (x_j^r - x_k^r) α_i` (with `r = 1` for braids).
pub fn build_orthogonal_family<F: Field>(spec: &FamilySpec) -> Result<OrthogonalFamily<F>> {
    let (n, r) = match *spec {
        FamilySpec::Braid { n } => (n, 1),
        FamilySpec::BraidDeleted { n } => (n, 1),
        FamilySpec::Wreath { n, r } => (n, r),
    };
    let xr = |j: usize| Polynomial::<F>::var(n, j).pow(r);
    let coeffs = (0..n)
        .map(|k| {
            (0..n - 1)
                .map(|i| {
                    if i < k {
                        return Polynomial::zero(n);
                    }
                    let mut p = Polynomial::from_i64(n, if (n - 1 - i) % 2 == 0 { 1 } else { -1 });
                    for j in i + 1..n {
                        p = &p * &(&xr(j) - &xr(k));
                    }
                    p
                })
                .collect()
        })
        .collect();
    Ok(OrthogonalFamily { coeffs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::build_family;
    use num_rational::BigRational;

    type P = Polynomial<BigRational>;

    fn p(s: &str, n: usize) -> P {
        P::parse(s, n, 1).unwrap()
    }

    #[test]
    fn euler_scales_by_degree() {
        let e = Derivation::<BigRational>::euler(3);
        assert_eq!(e.apply(&p("x1^2*x2", 3)), p("3*x1^2*x2", 3));
        assert!(e.apply(&p("1", 3)).is_zero());
    }

    #[test]
    fn theta2_in_alpha_basis() {
        let fam = build_family::<BigRational>(&FamilySpec::Wreath { n: 3, r: 2 }).unwrap();
        let ot = fam.ot_basis.as_ref().unwrap();
        let g = fam.basis.express_in_basis(ot.get(1)).unwrap();
        assert_eq!(g, vec![p("x1^2", 3), p("1", 3), p("0", 3)]);
    }

    #[test]
    fn partial_not_in_module() {
        let fam = build_family::<BigRational>(&FamilySpec::Wreath { n: 3, r: 1 }).unwrap();
        let d = Derivation::partial(3, 0);
        assert!(matches!(fam.basis.express_in_basis(&d), Err(Error::NotInModule(_))));
        assert!(!is_tangent(&fam.arrangement, &d));
    }

    #[test]
    fn orthogonal_family_for_braid_2() {
        let fam = build_orthogonal_family::<BigRational>(&FamilySpec::Braid { n: 2 }).unwrap();
        assert_eq!(fam.coeffs, vec![vec![p("-x2 + x1", 2)], vec![p("0", 2)]]);
    }

    #[test]
    fn degenerate_families_fail_checks() {
        let n = 3;
        let bad = DerivationBasis::new(vec![
            Derivation::new(vec![p("x1", n), p("0", n), p("0", n)]),
            Derivation::new(vec![p("0", n), p("x1", n), p("0", n)]),
            Derivation::new(vec![p("0", n), p("0", n), p("x3", n)]),
        ])
        .unwrap();
        assert!(bad.check_triangularizable());
        assert!(!bad.check_bezout());
        let all_top = OrthogonalFamily {
            coeffs: vec![vec![p("0", n), p("0", n)]; n],
        };
        let fam = build_family::<BigRational>(&FamilySpec::Wreath { n: 3, r: 1 }).unwrap();
        assert!(!check_orthogonality(&fam.basis, &all_top));
    }

    #[test]
    fn lower_entry_breaks_triangularity() {
        let n = 2;
        let b = DerivationBasis::new(vec![
            Derivation::new(vec![p("x1", n), p("x2", n)]),
            Derivation::new(vec![p("x1", n), p("x2^2", n)]),
        ])
        .unwrap();
        assert!(!b.check_triangularizable());
    }
}
