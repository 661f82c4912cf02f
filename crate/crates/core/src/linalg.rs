//! Exact linear algebra: dense fraction-free elimination for small matrices
//! and an incremental sparse echelon form for the large graded slices.

use crate::scalar::Field;
use std::collections::{BTreeMap, HashMap};

/// A dense matrix over a field, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarMatrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> ScalarMatrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ScalarMatrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        ScalarMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        self.data.chunks(self.cols.max(1)).map(<[F]>::to_vec).collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let mut t = a.clone();
                    t *= other.get(k, j);
                    out.data[i * other.cols + j] += &t;
                }
            }
        }
        out
    }

    /// Bareiss elimination in place. Returns pivot columns and the row-swap parity.
    fn bareiss(&mut self) -> (Vec<usize>, bool) {
        let (rows, cols) = (self.rows, self.cols);
        let mut prev = F::one();
        let mut pivots = Vec::new();
        let mut odd = false;
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..cols {
                    self.data.swap(p * cols + j, r * cols + j);
                }
                odd = !odd;
            }
            let piv = self.get(r, c).clone();
            for i in r + 1..rows {
                let lead = self.get(i, c).clone();
                for j in c + 1..cols {
                    let v = (piv.clone() * self.get(i, j).clone()
                        - lead.clone() * self.get(r, j).clone())
                        / prev.clone();
                    self.set(i, j, v);
                }
                self.set(i, c, F::zero());
            }
            prev = piv;
            pivots.push(c);
            r += 1;
        }
        (pivots, odd)
    }

    pub fn rank(&self) -> usize {
        self.clone().bareiss().0.len()
    }

    pub fn determinant(&self) -> F {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        if self.rows == 0 {
            return F::one();
        }
        let mut a = self.clone();
        let (pivots, odd) = a.bareiss();
        if pivots.len() < self.rows {
            return F::zero();
        }
        let d = a.get(self.rows - 1, self.cols - 1).clone();
        if odd {
            -d
        } else {
            d
        }
    }

    /// Basis of the right kernel `{v : A v = 0}`.
    pub fn kernel_basis(&self) -> Vec<Vec<F>> {
        let mut a = self.clone();
        let (pivots, _) = a.bareiss();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![F::zero(); self.cols];
                x[f] = F::one();
                for (row, &pc) in pivots.iter().enumerate().rev() {
                    let mut s = F::zero();
                    for (j, xj) in x.iter().enumerate().skip(pc + 1) {
                        if !xj.is_zero() {
                            let mut t = a.get(row, j).clone();
                            t *= xj;
                            s += &t;
                        }
                    }
                    x[pc] = -s / a.get(row, pc).clone();
                }
                x
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for c in 0..n {
            let p = (c..n).find(|&i| !a.get(i, c).is_zero())?;
            for j in 0..n {
                a.data.swap(p * n + j, c * n + j);
                inv.data.swap(p * n + j, c * n + j);
            }
            let s = a.get(c, c).inv().unwrap();
            for j in 0..n {
                let v = a.get(c, j).clone() * s.clone();
                a.set(c, j, v);
                let v = inv.get(c, j).clone() * s.clone();
                inv.set(c, j, v);
            }
            for i in 0..n {
                if i == c || a.get(i, c).is_zero() {
                    continue;
                }
                let f = a.get(i, c).clone();
                for j in 0..n {
                    let v = a.get(i, j).clone() - f.clone() * a.get(c, j).clone();
                    a.set(i, j, v);
                    let v = inv.get(i, j).clone() - f.clone() * inv.get(c, j).clone();
                    inv.set(i, j, v);
                }
            }
        }
        Some(inv)
    }
}

/// Basis of the kernel of a dense matrix.
pub fn kernel_basis<F: Field>(m: &ScalarMatrix<F>) -> Vec<Vec<F>> {
    m.kernel_basis()
}

/// A sparse vector: strictly increasing indices, nonzero entries.
pub type SparseVec<F> = Vec<(usize, F)>;

/// Row echelon form grown one vector at a time. Each stored row has a
/// leading 1 at its pivot column.
#[derive(Clone, Debug)]
pub struct Echelon<F> {
    rows: HashMap<usize, SparseVec<F>>,
}

impl<F: Field> Default for Echelon<F> {
    fn default() -> Self {
        Echelon {
            rows: HashMap::new(),
        }
    }
}

impl<F: Field> Echelon<F> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = &usize> {
        self.rows.keys()
    }

    /// The canonical residue of `v` modulo the row space: no entry of the
    /// result sits in a pivot column.
    pub fn reduce(&self, v: SparseVec<F>) -> SparseVec<F> {
        let mut acc: BTreeMap<usize, F> = v.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let mut out = Vec::new();
        while let Some((c, coeff)) = acc.pop_first() {
            match self.rows.get(&c) {
                Some(row) => {
                    for (j, x) in &row[1..] {
                        let mut t = coeff.clone();
                        t *= x;
                        match acc.entry(*j) {
                            std::collections::btree_map::Entry::Vacant(e) => {
                                e.insert(-t);
                            }
                            std::collections::btree_map::Entry::Occupied(mut e) => {
                                *e.get_mut() -= &t;
                                if e.get().is_zero() {
                                    e.remove();
                                }
                            }
                        }
                    }
                }
                None => out.push((c, coeff)),
            }
        }
        out
    }

    /// Adds `v` to the row space; returns whether the rank grew.
    pub fn insert(&mut self, v: SparseVec<F>) -> bool {
        let r = self.reduce(v);
        self.insert_residue(r)
    }

    /// Adds an already reduced vector.
    pub fn insert_residue(&mut self, r: SparseVec<F>) -> bool {
        let Some((pc, lead)) = r.first().cloned() else {
            return false;
        };
        let s = lead.inv().unwrap();
        let row = r
            .into_iter()
            .map(|(j, mut x)| {
                x *= &s;
                (j, x)
            })
            .collect();
        self.rows.insert(pc, row);
        true
    }

    pub fn contains(&self, v: SparseVec<F>) -> bool {
        self.reduce(v).is_empty()
    }
}

/// Rank of a family of vectors together with a basis of the linear
/// relations among them (indexed by position in `vectors`).
pub fn rank_and_relations<F: Field>(
    vectors: &[SparseVec<F>],
    ncols: usize,
) -> (usize, Vec<SparseVec<F>>) {
    let mut ech = Echelon::new();
    let mut relations = Vec::new();
    for (idx, v) in vectors.iter().enumerate() {
        let mut aug = v.clone();
        aug.push((ncols + idx, F::one()));
        let r = ech.reduce(aug);
        match r.first() {
            Some((c, _)) if *c < ncols => {
                ech.insert_residue(r);
            }
            _ => relations.push(r.into_iter().map(|(c, x)| (c - ncols, x)).collect()),
        }
    }
    (ech.rank(), relations)
}

/// Rank of a family of sparse vectors.
pub fn rank<F: Field>(vectors: impl IntoIterator<Item = SparseVec<F>>) -> usize {
    let mut ech = Echelon::new();
    for v in vectors {
        ech.insert(v);
    }
    ech.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    fn m(rows: &[&[i64]]) -> ScalarMatrix<BigRational> {
        ScalarMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect())
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let a = m(&[&[2, -1, 0], &[1, 3, 4], &[0, 5, -2]]);
        // 2*(3*-2 - 4*5) + 1*(1*-2 - 0) = -52 - 2
        assert_eq!(a.determinant(), q(-54));
        assert_eq!(m(&[&[0, 1], &[1, 0]]).determinant(), q(-1));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).determinant(), q(0));
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let a = m(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        let ker = a.kernel_basis();
        assert_eq!(ker.len(), 2);
        for v in &ker {
            for i in 0..a.rows() {
                let s = (0..a.cols()).fold(q(0), |s, j| s + a.get(i, j).clone() * v[j].clone());
                assert_eq!(s, q(0));
            }
        }
    }

    #[test]
    fn inverse_round_trip() {
        let a = m(&[&[2, 1], &[7, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), ScalarMatrix::identity(2));
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn sparse_rank_and_relations() {
        let vs = vec![
            vec![(0, q(1)), (2, q(1))],
            vec![(1, q(1))],
            vec![(0, q(2)), (1, q(3)), (2, q(2))],
        ];
        let (rank, rel) = rank_and_relations(&vs, 3);
        assert_eq!(rank, 2);
        assert_eq!(rel, vec![vec![(0, q(-2)), (1, q(-3)), (2, q(1))]]);
    }
}
