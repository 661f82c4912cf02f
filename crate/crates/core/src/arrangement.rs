//! Central hyperplane arrangements, the built-in free families and
//! Saito's criterion.

use crate::derivation::{is_tangent, Derivation, DerivationBasis};
use crate::error::{Error, Result};
use crate::linalg::ScalarMatrix;
use crate::poly::{Monomial, Polynomial};
use crate::scalar::{format_scalar, Cyclotomic, Field};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// The built-in families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilySpec {
    /// `x_j - x_i` for `i < j`.
    Braid { n: usize },
    /// The braid arrangement with the coordinate hyperplanes added.
    BraidDeleted { n: usize },
    /// Reflection arrangement of `C_r ≀ S_n`: `x_i` and `x_j^r - x_i^r`.
    Wreath { n: usize, r: u32 },
}

impl FamilySpec {
    pub fn n(&self) -> usize {
        match *self {
            FamilySpec::Braid { n } | FamilySpec::BraidDeleted { n } | FamilySpec::Wreath { n, .. } => n,
        }
    }

    /// `r` for wreath families, 1 for braid-deleted, `None` for braid.
    pub fn r(&self) -> Option<u32> {
        match *self {
            FamilySpec::Braid { .. } => None,
            FamilySpec::BraidDeleted { .. } => Some(1),
            FamilySpec::Wreath { r, .. } => Some(r),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            FamilySpec::Braid { .. } => "braid",
            FamilySpec::BraidDeleted { .. } => "braid-deleted",
            FamilySpec::Wreath { .. } => "wreath",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            FamilySpec::Braid { n } if n < 2 => {
                Err(Error::InvalidFamily(format!("braid needs n >= 2, got {n}")))
            }
            FamilySpec::BraidDeleted { n } if n < 1 => {
                Err(Error::InvalidFamily("braid-deleted needs n >= 1".into()))
            }
            FamilySpec::Wreath { n, r } if n < 1 || r < 1 => Err(Error::InvalidFamily(format!(
                "wreath needs n >= 1 and r >= 1, got n = {n}, r = {r}"
            ))),
            FamilySpec::Wreath { r, .. } if r > crate::scalar::MAX_CYCLOTOMIC_ORDER => {
                Err(Error::InvalidFamily(format!(
                    "wreath supports r <= {}, got {r}",
                    crate::scalar::MAX_CYCLOTOMIC_ORDER
                )))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FamilySpec::Braid { n } => write!(f, "braid(n={n})"),
            FamilySpec::BraidDeleted { n } => write!(f, "braid-deleted(n={n})"),
            FamilySpec::Wreath { n, r } => write!(f, "wreath(n={n}, r={r})"),
        }
    }
}

/// Scalar field the forms are written over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldMode {
    Rational,
    Cyclotomic(u32),
}

impl FieldMode {
    /// Order used to read `z` in polynomial text.
    pub fn zeta_order(&self) -> u32 {
        match self {
            FieldMode::Rational => 1,
            FieldMode::Cyclotomic(r) => *r,
        }
    }
}

/// A central arrangement given by its linear forms. Coefficients are kept in
/// a cyclotomic field so that forms with irrational coefficients can be
/// listed even when the derivations are rational.
#[derive(Clone, Debug, PartialEq)]
pub struct Arrangement {
    n: usize,
    field: FieldMode,
    forms: Vec<Vec<Cyclotomic>>,
}

impl Arrangement {
    /// Normalizes each form so its last nonzero coefficient is 1 and rejects
    /// zero or proportional forms.
    pub fn new(n: usize, field: FieldMode, forms: Vec<Vec<Cyclotomic>>) -> Result<Self> {
        let mut normalized: Vec<Vec<Cyclotomic>> = Vec::with_capacity(forms.len());
        for (idx, form) in forms.into_iter().enumerate() {
            if form.len() != n {
                return Err(Error::InvalidArrangement(format!(
                    "form {} has {} coefficients, expected {n}",
                    idx + 1,
                    form.len()
                )));
            }
            let Some(last) = form.iter().rev().find(|c| !c.is_zero()).cloned() else {
                return Err(Error::InvalidArrangement(format!("form {} is zero", idx + 1)));
            };
            let inv = last.inv().unwrap();
            let form: Vec<Cyclotomic> = form.into_iter().map(|c| c * inv.clone()).collect();
            if let Some(j) = normalized.iter().position(|g| *g == form) {
                return Err(Error::InvalidArrangement(format!(
                    "forms {} and {} proportional",
                    j + 1,
                    idx + 1
                )));
            }
            normalized.push(form);
        }
        Ok(Arrangement {
            n,
            field,
            forms: normalized,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> FieldMode {
        self.field
    }

    pub fn forms(&self) -> &[Vec<Cyclotomic>] {
        &self.forms
    }

    pub fn num_hyperplanes(&self) -> usize {
        self.forms.len()
    }

    pub fn form_polynomials(&self) -> Vec<Polynomial<Cyclotomic>> {
        self.forms
            .iter()
            .map(|f| {
                Polynomial::from_terms(
                    self.n,
                    f.iter()
                        .enumerate()
                        .map(|(k, c)| (Monomial::var(self.n, k), c.clone())),
                )
            })
            .collect()
    }

    /// `Q`, the product of the forms, over the cyclotomic field.
    pub fn defining_polynomial_cyclotomic(&self) -> Polynomial<Cyclotomic> {
        self.form_polynomials()
            .iter()
            .fold(Polynomial::one(self.n), |acc, l| &acc * l)
    }

    /// `Q` in the scalar field `F`.
    pub fn defining_polynomial<F: Field>(&self) -> Result<Polynomial<F>> {
        let q = self.defining_polynomial_cyclotomic();
        let mut out = Polynomial::zero(self.n);
        for (m, c) in q.terms() {
            let c = F::from_cyclotomic(c).ok_or_else(|| {
                Error::FieldTooSmall("defining polynomial has irrational coefficients".into())
            })?;
            out.add_term(m.clone(), &c);
        }
        Ok(out)
    }

    pub fn to_json<F: Field>(&self, basis: Option<&DerivationBasis<F>>) -> String {
        let file = ArrangementFile {
            n: self.n,
            field: match self.field {
                FieldMode::Rational => FieldSpec::Name("Q".into()),
                FieldMode::Cyclotomic(r) => FieldSpec::Cyclotomic { cyclotomic: r },
            },
            forms: self
                .forms
                .iter()
                .map(|f| f.iter().map(format_scalar).collect())
                .collect(),
            basis: basis.map(|b| {
                b.elements()
                    .iter()
                    .map(|d| d.components().iter().map(ToString::to_string).collect())
                    .collect()
            }),
        };
        serde_json::to_string_pretty(&file).expect("serializable")
    }

    /// Reads the JSON arrangement format, with an optional basis whose row
    /// `i` lists `θ_i(x_1), ..., θ_i(x_n)`.
    pub fn from_json<F: Field>(s: &str) -> Result<(Arrangement, Option<DerivationBasis<F>>)> {
        let file: ArrangementFile =
            serde_json::from_str(s).map_err(|e| Error::Json(e.to_string()))?;
        let field = match &file.field {
            FieldSpec::Name(name) if name == "Q" => FieldMode::Rational,
            FieldSpec::Name(other) => {
                return Err(Error::Json(format!("unknown field '{other}'")));
            }
            FieldSpec::Cyclotomic { cyclotomic } => {
                if !(1..=crate::scalar::MAX_CYCLOTOMIC_ORDER).contains(cyclotomic) {
                    return Err(Error::Json(format!("unsupported cyclotomic order {cyclotomic}")));
                }
                FieldMode::Cyclotomic(*cyclotomic)
            }
        };
        let z = field.zeta_order();
        let mut forms = Vec::new();
        for form in &file.forms {
            let mut row = Vec::new();
            for c in form {
                let p = Polynomial::<Cyclotomic>::parse(c, 0, z)?;
                row.push(p.constant_term());
            }
            forms.push(row);
        }
        let arr = Arrangement::new(file.n, field, forms)?;
        let basis = match &file.basis {
            None => None,
            Some(rows) => {
                let mut elems = Vec::new();
                for row in rows {
                    if row.len() != file.n {
                        return Err(Error::Json(format!(
                            "basis rows need {} entries, got {}",
                            file.n,
                            row.len()
                        )));
                    }
                    let comps = row
                        .iter()
                        .map(|s| Polynomial::<F>::parse(s, file.n, z))
                        .collect::<Result<Vec<_>>>()?;
                    elems.push(Derivation::new(comps));
                }
                Some(DerivationBasis::new(elems)?)
            }
        };
        Ok((arr, basis))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum FieldSpec {
    Name(String),
    Cyclotomic { cyclotomic: u32 },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArrangementFile {
    n: usize,
    field: FieldSpec,
    forms: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    basis: Option<Vec<Vec<String>>>,
}

/// A built family: arrangement, canonical triangular basis and, for wreath
/// families, the invariant-theoretic basis `θ_m(x_k) = x_k^{(m-1)r+1}`.
#[derive(Clone, Debug)]
pub struct Family<F> {
    pub spec: FamilySpec,
    pub arrangement: Arrangement,
    pub basis: DerivationBasis<F>,
    pub ot_basis: Option<DerivationBasis<F>>,
}

pub fn build_family<F: Field>(spec: &FamilySpec) -> Result<Family<F>> {
    spec.validate()?;
    let n = spec.n();
    let x = |k: usize| Polynomial::<F>::var(n, k);
    match *spec {
        FamilySpec::Braid { n } => {
            let mut forms = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    let mut f = vec![Cyclotomic::zero(); n];
                    f[i] = -Cyclotomic::one();
                    f[j] = Cyclotomic::one();
                    forms.push(f);
                }
            }
            let arrangement = Arrangement::new(n, FieldMode::Rational, forms)?;
            let elems = (0..n)
                .map(|i| {
                    Derivation::new(
                        (0..n)
                            .map(|k| {
                                (0..i).fold(Polynomial::one(n), |acc, j| &acc * &(&x(k) - &x(j)))
                            })
                            .collect(),
                    )
                })
                .collect();
            Ok(Family {
                spec: *spec,
                arrangement,
                basis: DerivationBasis::new(elems)?,
                ot_basis: None,
            })
        }
        FamilySpec::BraidDeleted { n } => {
            let mut fam = build_family::<F>(&FamilySpec::Wreath { n, r: 1 })?;
            fam.spec = *spec;
            fam.ot_basis = None;
            Ok(fam)
        }
        FamilySpec::Wreath { n, r } => {
            let field = if r <= 2 {
                FieldMode::Rational
            } else {
                FieldMode::Cyclotomic(r)
            };
            let zeta = Cyclotomic::root_of_unity(r).expect("validated order");
            let mut forms = Vec::new();
            for i in 0..n {
                let mut f = vec![Cyclotomic::zero(); n];
                f[i] = Cyclotomic::one();
                forms.push(f);
            }
            for i in 0..n {
                for j in i + 1..n {
                    let mut zs = Cyclotomic::one();
                    for _ in 0..r {
                        let mut f = vec![Cyclotomic::zero(); n];
                        f[i] = -zs.clone();
                        f[j] = Cyclotomic::one();
                        forms.push(f);
                        zs *= &zeta;
                    }
                }
            }
            let arrangement = Arrangement::new(n, field, forms)?;
            let xr = |k: usize| x(k).pow(r);
            let alpha = (0..n)
                .map(|m| {
                    Derivation::new(
                        (0..n)
                            .map(|k| {
                                (0..m).fold(x(k), |acc, i| &acc * &(&xr(k) - &xr(i)))
                            })
                            .collect(),
                    )
                })
                .collect();
            let theta = (0..n)
                .map(|m| Derivation::new((0..n).map(|k| x(k).pow(m as u32 * r + 1)).collect()))
                .collect();
            Ok(Family {
                spec: *spec,
                arrangement,
                basis: DerivationBasis::new(alpha)?,
                ot_basis: Some(DerivationBasis::new(theta)?),
            })
        }
    }
}

/// Outcome of Saito's criterion.
#[derive(Clone, Debug, PartialEq)]
pub enum SaitoOutcome<F> {
    /// `det = c * Q` with `c` a nonzero scalar.
    Free { scalar: F },
    NotBasis { determinant: Polynomial<F> },
}

impl<F> SaitoOutcome<F> {
    pub fn is_free(&self) -> bool {
        matches!(self, SaitoOutcome::Free { .. })
    }
}

pub fn check_saito_criterion<F: Field>(
    arr: &Arrangement,
    basis: &DerivationBasis<F>,
) -> Result<SaitoOutcome<F>> {
    for (i, d) in basis.elements().iter().enumerate() {
        if !is_tangent(arr, d) {
            return Err(Error::TangencyViolation(format!(
                "basis member {} is not tangent",
                i + 1
            )));
        }
    }
    let det = basis.saito_determinant();
    let q = arr.defining_polynomial::<F>()?;
    if det.is_zero() {
        return Ok(SaitoOutcome::NotBasis { determinant: det });
    }
    match det.exact_div(&q) {
        Ok(c) if c.is_constant() => Ok(SaitoOutcome::Free {
            scalar: c.constant_term(),
        }),
        _ => Ok(SaitoOutcome::NotBasis { determinant: det }),
    }
}

/// Transports a derivation to coordinates `y = T x`.
pub fn change_coordinates<F: Field>(d: &Derivation<F>, t: &ScalarMatrix<F>) -> Result<Derivation<F>> {
    d.change_coordinates(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type P = Polynomial<BigRational>;

    #[test]
    fn braid_three_forms_and_q() {
        let fam = build_family::<BigRational>(&FamilySpec::Braid { n: 3 }).unwrap();
        assert_eq!(fam.arrangement.num_hyperplanes(), 3);
        let q = fam.arrangement.defining_polynomial::<BigRational>().unwrap();
        let expected = P::parse("(x2 - x1)*(x3 - x1)*(x3 - x2)", 3, 1).unwrap();
        assert_eq!(q, expected);
    }

    #[test]
    fn wreath_two_has_nine_rational_forms() {
        let fam = build_family::<BigRational>(&FamilySpec::Wreath { n: 3, r: 2 }).unwrap();
        assert_eq!(fam.arrangement.num_hyperplanes(), 9);
        assert_eq!(fam.arrangement.field(), FieldMode::Rational);
        let q = fam.arrangement.defining_polynomial::<BigRational>().unwrap();
        let expected =
            P::parse("x1*x2*x3*(x2^2 - x1^2)*(x3^2 - x1^2)*(x3^2 - x2^2)", 3, 1).unwrap();
        assert_eq!(q, expected);
    }

    #[test]
    fn wreath_three_q_is_rational() {
        let fam = build_family::<BigRational>(&FamilySpec::Wreath { n: 3, r: 3 }).unwrap();
        assert_eq!(fam.arrangement.num_hyperplanes(), 12);
        assert!(fam.arrangement.defining_polynomial::<BigRational>().is_ok());
    }

    #[test]
    fn proportional_forms_rejected() {
        let one = Cyclotomic::one();
        let two = Cyclotomic::from(2);
        let zero = Cyclotomic::zero();
        let err = Arrangement::new(
            2,
            FieldMode::Rational,
            vec![vec![one.clone(), zero.clone()], vec![zero, one], vec![two, Cyclotomic::zero()]],
        )
        .unwrap_err();
        assert_eq!(err, Error::InvalidArrangement("forms 1 and 3 proportional".into()));
    }

    #[test]
    fn braid_two_saito_matrix() {
        let fam = build_family::<BigRational>(&FamilySpec::Braid { n: 2 }).unwrap();
        let m = fam.basis.saito_matrix();
        let p = |s| P::parse(s, 2, 1).unwrap();
        assert_eq!(m, vec![vec![p("1"), p("1")], vec![p("0"), p("x2 - x1")]]);
    }

    #[test]
    fn duplicated_row_is_not_a_basis() {
        let fam = build_family::<BigRational>(&FamilySpec::Wreath { n: 3, r: 1 }).unwrap();
        let e = fam.basis.get(0).clone();
        let b = DerivationBasis::new(vec![e.clone(), e, fam.basis.get(2).clone()]).unwrap();
        assert!(!check_saito_criterion(&fam.arrangement, &b).unwrap().is_free());
    }

    #[test]
    fn json_round_trip() {
        let fam = build_family::<crate::Cyclotomic>(&FamilySpec::Wreath { n: 2, r: 3 }).unwrap();
        let s = fam.arrangement.to_json(Some(&fam.basis));
        let (arr, basis) = Arrangement::from_json::<crate::Cyclotomic>(&s).unwrap();
        assert_eq!(arr, fam.arrangement);
        assert_eq!(basis.unwrap(), fam.basis);
    }
}
