use super::Field;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::OnceLock;

/// Largest supported root-of-unity order.
pub const MAX_CYCLOTOMIC_ORDER: u32 = 12;

type UPoly = Vec<BigRational>;

fn trim(p: &mut UPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn upoly_mul(a: &[BigRational], b: &[BigRational]) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn upoly_sub(a: &[BigRational], b: &[BigRational]) -> UPoly {
    let mut out: UPoly = (0..a.len().max(b.len()))
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            match b.get(i) {
                Some(y) => x - y,
                None => x,
            }
        })
        .collect();
    trim(&mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
fn upoly_divrem(a: &[BigRational], b: &[BigRational]) -> (UPoly, UPoly) {
    let mut rem: UPoly = a.to_vec();
    trim(&mut rem);
    let db = b.len() - 1;
    let lead = b[db].clone();
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    while rem.len() > db {
        let shift = rem.len() - 1 - db;
        let c = rem.last().unwrap() / &lead;
        for (i, y) in b.iter().enumerate() {
            let t = &c * y;
            rem[shift + i] -= t;
        }
        quot[shift] = c;
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

/// The cyclotomic polynomial `Φ_r`, coefficients from the constant term up.
pub fn cyclotomic_polynomial(r: u32) -> &'static [BigRational] {
    static TABLE: OnceLock<Vec<UPoly>> = OnceLock::new();
    assert!(
        (1..=MAX_CYCLOTOMIC_ORDER).contains(&r),
        "cyclotomic order {r} outside 1..={MAX_CYCLOTOMIC_ORDER}"
    );
    let table = TABLE.get_or_init(|| {
        let mut table: Vec<UPoly> = vec![Vec::new()];
        for n in 1..=MAX_CYCLOTOMIC_ORDER as usize {
            let mut xn1 = vec![BigRational::zero(); n + 1];
            xn1[0] = -BigRational::one();
            xn1[n] = BigRational::one();
            let mut phi = xn1;
            for (d, phid) in table.iter().enumerate().take(n).skip(1) {
                if n % d == 0 {
                    let (q, r) = upoly_divrem(&phi, phid);
                    debug_assert!(r.is_empty());
                    phi = q;
                }
            }
            table.push(phi);
        }
        table
    });
    &table[r as usize]
}

/// An element of `Q(ζ_r)` in the power basis reduced modulo `Φ_r`.
///
/// Rational values are stored with order 1, so they mix freely with any
/// cyclotomic field. Mixing two different nontrivial orders panics.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic {
    order: u32,
    coeffs: UPoly,
}

impl Cyclotomic {
    fn from_parts(order: u32, mut coeffs: UPoly) -> Self {
        if order > 2 {
            let phi = cyclotomic_polynomial(order);
            if coeffs.len() >= phi.len() {
                coeffs = upoly_divrem(&coeffs, phi).1;
            }
        }
        trim(&mut coeffs);
        let order = if coeffs.len() <= 1 { 1 } else { order };
        Cyclotomic { order, coeffs }
    }

    /// Order of the root of unity this value lives over, 1 if rational.
    pub fn order(&self) -> u32 {
        self.order
    }

    fn common_order(&self, other: &Self) -> u32 {
        match (self.order, other.order) {
            (1, b) => b,
            (a, 1) => a,
            (a, b) if a == b => a,
            (a, b) => panic!("mixing Q(ζ_{a}) and Q(ζ_{b})"),
        }
    }

    /// Power-basis coefficients from the constant term up.
    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::format_scalar(self))
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::format_scalar(self))
    }
}

impl Zero for Cyclotomic {
    fn zero() -> Self {
        Cyclotomic {
            order: 1,
            coeffs: Vec::new(),
        }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for Cyclotomic {
    fn one() -> Self {
        Cyclotomic {
            order: 1,
            coeffs: vec![BigRational::one()],
        }
    }
}

impl<'a> AddAssign<&'a Cyclotomic> for Cyclotomic {
    fn add_assign(&mut self, rhs: &'a Cyclotomic) {
        let order = self.common_order(rhs);
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), BigRational::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
        *self = Cyclotomic::from_parts(order, std::mem::take(&mut self.coeffs));
    }
}

impl<'a> SubAssign<&'a Cyclotomic> for Cyclotomic {
    fn sub_assign(&mut self, rhs: &'a Cyclotomic) {
        let order = self.common_order(rhs);
        let coeffs = upoly_sub(&self.coeffs, &rhs.coeffs);
        *self = Cyclotomic::from_parts(order, coeffs);
    }
}

impl<'a> MulAssign<&'a Cyclotomic> for Cyclotomic {
    fn mul_assign(&mut self, rhs: &'a Cyclotomic) {
        let order = self.common_order(rhs);
        let coeffs = upoly_mul(&self.coeffs, &rhs.coeffs);
        *self = Cyclotomic::from_parts(order, coeffs);
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(mut self, rhs: Cyclotomic) -> Cyclotomic {
        self += &rhs;
        self
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(mut self, rhs: Cyclotomic) -> Cyclotomic {
        self -= &rhs;
        self
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(mut self, rhs: Cyclotomic) -> Cyclotomic {
        self *= &rhs;
        self
    }
}

impl Div for Cyclotomic {
    type Output = Cyclotomic;
    fn div(self, rhs: Cyclotomic) -> Cyclotomic {
        let inv = rhs.inv().expect("division by zero in Q(ζ)");
        self * inv
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl Field for Cyclotomic {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.order == 1 {
            return Some(Cyclotomic::from_rational(self.coeffs[0].recip()));
        }
        let phi = cyclotomic_polynomial(self.order);
        let (mut r0, mut r1) = (phi.to_vec(), self.coeffs.clone());
        let (mut s0, mut s1): (UPoly, UPoly) = (Vec::new(), vec![BigRational::one()]);
        while !r1.is_empty() {
            let (q, rem) = upoly_divrem(&r0, &r1);
            let s2 = upoly_sub(&s0, &upoly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
        }
        debug_assert_eq!(r0.len(), 1);
        let c = r0[0].recip();
        let coeffs = s0.into_iter().map(|x| x * &c).collect();
        Some(Cyclotomic::from_parts(self.order, coeffs))
    }

    fn from_rational(q: BigRational) -> Self {
        Cyclotomic::from_parts(1, vec![q])
    }

    fn root_of_unity(order: u32) -> Option<Self> {
        match order {
            0 => None,
            1 => Some(Cyclotomic::one()),
            2 => Some(-Cyclotomic::one()),
            r if r <= MAX_CYCLOTOMIC_ORDER => Some(Cyclotomic::from_parts(
                r,
                vec![BigRational::zero(), BigRational::one()],
            )),
            _ => None,
        }
    }

    fn to_rational(&self) -> Option<BigRational> {
        match self.coeffs.len() {
            0 => Some(BigRational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    fn power_coefficients(&self) -> Vec<(u32, BigRational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i as u32, c.clone()))
            .collect()
    }

    fn ambient_order(&self) -> u32 {
        self.order
    }

    fn from_cyclotomic(c: &Cyclotomic) -> Option<Self> {
        Some(c.clone())
    }
}

impl From<i64> for Cyclotomic {
    fn from(v: i64) -> Self {
        Cyclotomic::from_rational(BigRational::from_integer(BigInt::from(v)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(p: &[BigRational]) -> Vec<i64> {
        p.iter()
            .map(|c| {
                assert!(c.is_integer());
                i64::try_from(c.to_integer()).unwrap()
            })
            .collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(ints(cyclotomic_polynomial(1)), vec![-1, 1]);
        assert_eq!(ints(cyclotomic_polynomial(3)), vec![1, 1, 1]);
        assert_eq!(ints(cyclotomic_polynomial(4)), vec![1, 0, 1]);
        assert_eq!(ints(cyclotomic_polynomial(6)), vec![1, -1, 1]);
        assert_eq!(ints(cyclotomic_polynomial(12)), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn zeta_has_exact_order() {
        for r in 3..=MAX_CYCLOTOMIC_ORDER {
            let z = Cyclotomic::root_of_unity(r).unwrap();
            let mut p = Cyclotomic::one();
            for k in 1..=r {
                p *= &z;
                assert_eq!(p.is_one(), k == r, "ζ_{r}^{k}");
            }
        }
    }

    #[test]
    fn inverse_round_trip() {
        let z = Cyclotomic::root_of_unity(5).unwrap();
        let a = Cyclotomic::from(3) + z.clone() * z.clone() - z;
        let b = a.inv().unwrap();
        assert!((a * b).is_one());
    }

    #[test]
    fn sum_of_cube_roots_vanishes() {
        let z = Cyclotomic::root_of_unity(3).unwrap();
        let s = Cyclotomic::one() + z.clone() + z.clone() * z;
        assert!(s.is_zero());
        assert_eq!(s.order(), 1);
    }
}
