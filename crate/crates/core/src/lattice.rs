//! Exact integer linear algebra on the cocharacter lattice.
//!
//! Everything here works over arbitrary-precision integers. The Smith normal
//! form is the workhorse: it decides regularity of cones, completes
//! primitive families to lattice bases, inverts unimodular matrices and
//! computes integer kernels.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An element of the lattice `Z^n`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct LatticeVector(pub Vec<BigInt>);

impl LatticeVector {
    pub fn new(entries: Vec<BigInt>) -> Self {
        LatticeVector(entries)
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        LatticeVector(entries.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero(n: usize) -> Self {
        LatticeVector(vec![BigInt::zero(); n])
    }

    /// The `i`-th standard basis vector of `Z^n`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zero(n);
        v.0[i] = BigInt::one();
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    /// gcd of the entries; zero for the zero vector.
    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    pub fn neg(&self) -> Self {
        LatticeVector(self.0.iter().map(|x| -x).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn to_i64(&self) -> Result<Vec<i64>> {
        self.0
            .iter()
            .map(|x| x.to_i64().ok_or_else(|| Error::Overflow(x.to_string())))
            .collect()
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Divides `v` by the gcd of its entries.
pub fn primitive(v: &LatticeVector) -> Result<LatticeVector> {
    let g = v.content();
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(LatticeVector(v.0.iter().map(|x| x / &g).collect()))
}

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        Ok(IntMatrix { rows, cols, data })
    }

    /// Builds a matrix from `i64` rows; panics on ragged input.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged integer matrix");
        let data = rows.iter().flatten().map(|&x| BigInt::from(x)).collect();
        IntMatrix { rows: r, cols: c, data }
    }

    /// Matrix whose columns are the given vectors, in an ambient space of rank `n`.
    pub fn from_columns(n: usize, cols: &[LatticeVector]) -> Result<Self> {
        let mut m = Self::zeros(n, cols.len());
        for (j, v) in cols.iter().enumerate() {
            if v.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: v.len() });
            }
            for i in 0..n {
                m[(i, j)] = v.0[i].clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> LatticeVector {
        LatticeVector(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn column(&self, j: usize) -> LatticeVector {
        LatticeVector((0..self.rows).map(|i| self[(i, j)].clone()).collect())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * &other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &LatticeVector) -> Result<LatticeVector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        Ok(LatticeVector(
            (0..self.rows)
                .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &v.0[j]).sum())
                .collect(),
        ))
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = v / &prev;
                }
            }
            prev = a[(k, k)].clone();
        }
        Ok(sign * &a[(n - 1, n - 1)])
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.det().map(|d| d.abs().is_one()).unwrap_or(false)
    }

    /// Inverse of a unimodular matrix.
    pub fn inverse_unimodular(&self) -> Result<IntMatrix> {
        if !self.is_square() {
            return Err(Error::NotUnimodular);
        }
        let s = smith_full(self);
        if s.diagonal().iter().any(|d| !d.is_one()) || s.rank() != self.rows {
            return Err(Error::NotUnimodular);
        }
        // U M V = I  =>  M^{-1} = V U
        s.v.mul(&s.u)
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        smith_full(self).rank()
    }

    /// Basis of the integer kernel `{x : M x = 0}` in Hermite normal form.
    pub fn kernel_basis(&self) -> Vec<LatticeVector> {
        let s = smith_full(self);
        let r = s.rank();
        let cols: Vec<LatticeVector> = (r..self.cols).map(|j| s.v.column(j)).collect();
        if cols.is_empty() {
            return cols;
        }
        let rows = IntMatrix::from_columns(self.cols, &cols).expect("kernel columns").transpose();
        let h = rows.row_hermite_form();
        (0..h.rows).map(|i| h.row(i)).filter(|v| !v.is_zero()).collect()
    }

    /// Row-style Hermite normal form: echelon, positive pivots, entries above
    /// each pivot reduced into `[0, pivot)`. Zero rows are dropped to the bottom.
    pub fn row_hermite_form(&self) -> IntMatrix {
        let mut a = self.clone();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            loop {
                let pivot = (r..a.rows)
                    .filter(|&i| !a[(i, c)].is_zero())
                    .min_by(|&i, &j| a[(i, c)].abs().cmp(&a[(j, c)].abs()).then(i.cmp(&j)));
                let Some(p) = pivot else { break };
                a.swap_rows(r, p);
                let mut done = true;
                for i in r + 1..a.rows {
                    if a[(i, c)].is_zero() {
                        continue;
                    }
                    let q = a[(i, c)].div_floor(&a[(r, c)]);
                    a.add_row_multiple(i, r, &-q);
                    if !a[(i, c)].is_zero() {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
            if r < a.rows && !a[(r, c)].is_zero() {
                if a[(r, c)].is_negative() {
                    a.negate_row(r);
                }
                for i in 0..r {
                    let q = a[(i, c)].div_floor(&a[(r, c)]);
                    a.add_row_multiple(i, r, &-q);
                }
                r += 1;
            }
        }
        a
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// row_i += q * row_k
    fn add_row_multiple(&mut self, i: usize, k: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let v = &self[(k, c)] * q;
            self.data[i * self.cols + c] += v;
        }
    }

    /// col_j += q * col_k
    fn add_col_multiple(&mut self, j: usize, k: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let v = &self[(r, k)] * q;
            self.data[r * self.cols + j] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let x = &mut self.data[i * self.cols + c];
            *x = -std::mem::take(x);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for r in 0..self.rows {
            let x = &mut self.data[r * self.cols + j];
            *x = -std::mem::take(x);
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Smith normal form together with the inverses of both transforms.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

/// Smith normal form `U M V = D` with `U`, `V` unimodular and
/// `d_1 | d_2 | ...` nonnegative.
pub fn snf(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let s = smith_full(m);
    (s.u, s.d, s.v)
}

/// Pivot is the entry of least absolute value in the trailing block, ties
/// broken by (row, col) order.
pub fn smith_full(m: &IntMatrix) -> SmithForm {
    let (r, c) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut u_inv = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    let mut v_inv = IntMatrix::identity(c);

    'outer: for k in 0..r.min(c) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in k..r {
                for j in k..c {
                    if d[(i, j)].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break 'outer };
            d.swap_rows(k, pi);
            u.swap_rows(k, pi);
            u_inv.swap_cols(k, pi);
            d.swap_cols(k, pj);
            v.swap_cols(k, pj);
            v_inv.swap_rows(k, pj);

            let mut clean = true;
            for i in k + 1..r {
                if d[(i, k)].is_zero() {
                    continue;
                }
                let q = d[(i, k)].div_floor(&d[(k, k)]);
                d.add_row_multiple(i, k, &-&q);
                u.add_row_multiple(i, k, &-&q);
                u_inv.add_col_multiple(k, i, &q);
                clean &= d[(i, k)].is_zero();
            }
            for j in k + 1..c {
                if d[(k, j)].is_zero() {
                    continue;
                }
                let q = d[(k, j)].div_floor(&d[(k, k)]);
                d.add_col_multiple(j, k, &-&q);
                v.add_col_multiple(j, k, &-&q);
                v_inv.add_row_multiple(k, j, &q);
                clean &= d[(k, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let p = d[(k, k)].clone();
            let bad = (k + 1..r).find(|&i| (k + 1..c).any(|j| !d[(i, j)].is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row_multiple(k, i, &one);
                    u.add_row_multiple(k, i, &one);
                    u_inv.add_col_multiple(i, k, &-one);
                }
                None => break,
            }
        }
        if d[(k, k)].is_negative() {
            d.negate_row(k);
            u.negate_row(k);
            u_inv.negate_col(k);
        }
    }
    SmithForm { u, u_inv, d, v, v_inv }
}

/// Completes `vs` to a unimodular `n x n` matrix whose first columns are `vs`.
pub fn complete_to_basis(n: usize, vs: &[LatticeVector]) -> Result<IntMatrix> {
    let k = vs.len();
    if k > n {
        return Err(Error::NotBasisFragment(format!("{k} vectors in rank {n}")));
    }
    let a = IntMatrix::from_columns(n, vs)?;
    let s = smith_full(&a);
    let diag = s.diagonal();
    if diag.iter().any(|d| !d.is_one()) {
        let list: Vec<String> = diag.iter().map(ToString::to_string).collect();
        return Err(Error::NotBasisFragment(format!("elementary divisors [{}]", list.join(", "))));
    }
    // A V = U^{-1} D, and D = [I; 0], so the first k columns of U^{-1} are A V.
    let mut out = s.u_inv;
    for (j, col) in vs.iter().enumerate() {
        for i in 0..n {
            out[(i, j)] = col.0[i].clone();
        }
    }
    debug_assert!(out.is_unimodular());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_of(d: &IntMatrix) -> Vec<i64> {
        (0..d.rows().min(d.cols())).map(|i| d[(i, i)].to_i64().unwrap()).collect()
    }

    #[test]
    fn snf_examples() {
        let (_, d, _) = snf(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(diag_of(&d), vec![1, 6]);

        let (u, d, v) = snf(&IntMatrix::identity(3));
        assert_eq!(d, IntMatrix::identity(3));
        assert_eq!(u, IntMatrix::identity(3));
        assert_eq!(v, IntMatrix::identity(3));

        let (_, d, _) = snf(&IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(diag_of(&d), vec![2, 4]);
    }

    #[test]
    fn snf_transforms_have_inverses() {
        let m = IntMatrix::from_rows(&[vec![3, -7, 2], vec![0, 4, 6]]);
        let s = smith_full(&m);
        assert_eq!(s.u.mul(&s.u_inv).unwrap(), IntMatrix::identity(2));
        assert_eq!(s.v.mul(&s.v_inv).unwrap(), IntMatrix::identity(3));
        assert_eq!(s.u.mul(&m).unwrap().mul(&s.v).unwrap(), s.d);
    }

    #[test]
    fn primitive_examples() {
        assert_eq!(primitive(&LatticeVector::from_i64(&[4, 6])).unwrap(), LatticeVector::from_i64(&[2, 3]));
        assert_eq!(
            primitive(&LatticeVector::from_i64(&[1, 0, 0])).unwrap(),
            LatticeVector::from_i64(&[1, 0, 0])
        );
        assert_eq!(primitive(&LatticeVector::from_i64(&[0, 0])), Err(Error::ZeroVector));
        assert_eq!(Error::ZeroVector.to_string(), "no primitive direction: zero vector");
    }

    #[test]
    fn complete_to_basis_examples() {
        let b = complete_to_basis(2, &[LatticeVector::from_i64(&[1, 0])]).unwrap();
        assert_eq!(b, IntMatrix::identity(2));

        let v = LatticeVector::from_i64(&[2, 1]);
        let b = complete_to_basis(2, std::slice::from_ref(&v)).unwrap();
        assert_eq!(b.column(0), v);
        assert!(b.det().unwrap().abs().is_one());

        assert!(matches!(
            complete_to_basis(2, &[LatticeVector::from_i64(&[2, 0])]),
            Err(Error::NotBasisFragment(_))
        ));
    }

    #[test]
    fn apply_examples() {
        let v = LatticeVector::from_i64(&[5, -2]);
        assert_eq!(IntMatrix::identity(2).apply(&v).unwrap(), v);
        let m = IntMatrix::from_rows(&[vec![1, 0], vec![-1, 1]]);
        assert_eq!(m.apply(&LatticeVector::from_i64(&[1, 1])).unwrap(), LatticeVector::from_i64(&[1, 0]));
        let swap = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(swap.apply(&LatticeVector::from_i64(&[1, 0])).unwrap(), LatticeVector::from_i64(&[0, 1]));
        assert!(matches!(swap.apply(&LatticeVector::from_i64(&[1])), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn det_and_inverse() {
        let m = IntMatrix::from_rows(&[vec![2, 1], vec![1, 1]]);
        assert_eq!(m.det().unwrap(), BigInt::from(1));
        let inv = m.inverse_unimodular().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), IntMatrix::identity(2));
        let bad = IntMatrix::from_rows(&[vec![2, 0], vec![0, 1]]);
        assert_eq!(bad.inverse_unimodular(), Err(Error::NotUnimodular));
        assert_eq!(IntMatrix::from_rows(&[vec![0, 2], vec![3, 1]]).det().unwrap(), BigInt::from(-6));
    }

    #[test]
    fn kernel_of_p2_rays() {
        let m = IntMatrix::from_rows(&[vec![1, 0, -1], vec![0, 1, -1]]);
        assert_eq!(m.kernel_basis(), vec![LatticeVector::from_i64(&[1, 1, 1])]);
        assert!(IntMatrix::identity(3).kernel_basis().is_empty());
    }

    #[test]
    fn hermite_form_is_canonical() {
        let a = IntMatrix::from_rows(&[vec![2, 4, 1], vec![1, 1, 1]]);
        let b = IntMatrix::from_rows(&[vec![3, 5, 2], vec![1, 1, 1]]);
        assert_eq!(a.row_hermite_form(), b.row_hermite_form());
    }
}
