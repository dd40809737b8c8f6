//! Small dense real matrices, in high precision and in exact rationals.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalar::Scalar;

/// Row-major square-or-rectangular matrix of [`Scalar`]s.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Scalar::one();
        }
        m
    }

    /// Builds from rows; panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_f64(rows: &[&[f64]]) -> Self {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Scalar::from_f64(x)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Scalar::zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    acc = acc + a * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for (k, x) in v.iter().enumerate() {
                    let a = self.get(i, k);
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc + a * x;
                    }
                }
                acc
            })
            .collect()
    }

    /// `selfᵀ · self`
    pub fn gram(&self) -> Matrix {
        self.transpose().mul(self)
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    /// Largest absolute entry.
    pub fn max_norm(&self) -> Scalar {
        self.data.iter().fold(Scalar::zero(), |m, x| m.max(&x.abs()))
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).to_f64()).collect()).collect()
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_f64_rows()).finish()
    }
}

/// Exact rational matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RationalMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigRational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        RationalMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        RationalMatrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> RationalMatrix {
        let mut t = RationalMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = RationalMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigRational::zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if !a.is_zero() {
                        acc += a * other.get(k, j);
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| {
                let mut acc = BigRational::zero();
                for (k, x) in v.iter().enumerate() {
                    let a = self.get(i, k);
                    if !a.is_zero() && !x.is_zero() {
                        acc += a * x;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn gram(&self) -> RationalMatrix {
        self.transpose().mul(self)
    }

    pub fn add(&self, other: &RationalMatrix) -> RationalMatrix {
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        RationalMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &RationalMatrix) -> RationalMatrix {
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        RationalMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &BigRational) -> RationalMatrix {
        RationalMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// `Some(λ)` when the matrix equals λ·I.
    pub fn scalar_multiple_of_identity(&self) -> Option<BigRational> {
        if self.rows != self.cols || self.rows == 0 {
            return None;
        }
        let lambda = self.get(0, 0).clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let want = if i == j { &lambda } else { &BigRational::zero() };
                if self.get(i, j) != want {
                    return None;
                }
            }
        }
        Some(lambda)
    }

    /// For a rank-one matrix, a nonzero column spanning its image.
    pub fn rank_one_image(&self) -> Option<Vec<BigRational>> {
        let mut image: Option<Vec<BigRational>> = None;
        for j in 0..self.cols {
            let col: Vec<BigRational> = (0..self.rows).map(|i| self.get(i, j).clone()).collect();
            if col.iter().all(Zero::is_zero) {
                continue;
            }
            match &image {
                None => image = Some(col),
                Some(base) => {
                    // col must be a multiple of base
                    let p = base.iter().position(|x| !x.is_zero()).expect("nonzero base");
                    let f = &col[p] / &base[p];
                    if base.iter().zip(&col).any(|(b, c)| &(b * &f) != c) {
                        return None;
                    }
                }
            }
        }
        image
    }

    pub fn to_scalar(&self) -> Matrix {
        Matrix::from_rows(
            (0..self.rows).map(|i| (0..self.cols).map(|j| Scalar::from_ratio(self.get(i, j))).collect()).collect(),
        )
    }

    pub fn max_abs(&self) -> BigRational {
        use num_traits::Signed;
        self.data.iter().map(|x| x.abs()).max().unwrap_or_else(BigRational::zero)
    }
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues and the orthogonal matrix whose columns are the
/// matching eigenvectors.
pub fn symmetric_eigen(a: &Matrix) -> (Vec<Scalar>, Matrix) {
    assert!(a.is_square(), "eigendecomposition needs a square matrix");
    let n = a.rows();
    let mut m = a.clone();
    let mut v = Matrix::identity(n);
    let tol = crate::scalar::Scalar::pow2(-(crate::scalar::precision() as i32) + 4);
    for _sweep in 0..100 {
        let mut off = Scalar::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off = off + m.get(i, j) * m.get(i, j);
                }
            }
        }
        let scale = m.max_norm().max(&Scalar::one());
        if off.sqrt() <= &tol * &scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m.get(p, q).clone();
                if apq.is_zero() {
                    continue;
                }
                let app = m.get(p, p).clone();
                let aqq = m.get(q, q).clone();
                // tan of the rotation angle, smaller root
                let theta = (&aqq - &app) / (Scalar::from_i64(2) * &apq);
                let sign = if theta.is_negative() { -Scalar::one() } else { Scalar::one() };
                let t = &sign / (theta.abs() + (&theta * &theta + Scalar::one()).sqrt());
                let c = Scalar::one() / (&t * &t + Scalar::one()).sqrt();
                let s = &t * &c;
                for k in 0..n {
                    let mkp = m.get(k, p).clone();
                    let mkq = m.get(k, q).clone();
                    m.set(k, p, &c * &mkp - &s * &mkq);
                    m.set(k, q, &s * &mkp + &c * &mkq);
                }
                for k in 0..n {
                    let mpk = m.get(p, k).clone();
                    let mqk = m.get(q, k).clone();
                    m.set(p, k, &c * &mpk - &s * &mqk);
                    m.set(q, k, &s * &mpk + &c * &mqk);
                }
                for k in 0..n {
                    let vkp = v.get(k, p).clone();
                    let vkq = v.get(k, q).clone();
                    v.set(k, p, &c * &vkp - &s * &vkq);
                    v.set(k, q, &s * &vkp + &c * &vkq);
                }
            }
        }
    }
    let values = (0..n).map(|i| m.get(i, i).clone()).collect();
    (values, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_recovers_known_spectrum() {
        // [[16,-4],[-4,2]] has eigenvalues 9 ± sqrt(65)
        let a = Matrix::from_f64(&[&[16.0, -4.0], &[-4.0, 2.0]]);
        let (mut vals, vecs) = symmetric_eigen(&a);
        vals.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let r65 = Scalar::from_i64(65).sqrt();
        assert!((&vals[1] - (Scalar::from_i64(9) + &r65)).abs() < Scalar::pow2(-150));
        assert!((&vals[0] - (Scalar::from_i64(9) - &r65)).abs() < Scalar::pow2(-150));
        let vt = vecs.transpose();
        let id = vt.mul(&vecs);
        assert!(id.sub(&Matrix::identity(2)).max_norm() < Scalar::pow2(-150));
    }

    #[test]
    fn rank_one_detection() {
        let m = RationalMatrix::from_i64(&[&[0, 1], &[0, 0]]);
        assert_eq!(m.rank_one_image().unwrap(), vec![BigRational::one(), BigRational::zero()]);
        let full = RationalMatrix::from_i64(&[&[1, 4], &[1, 0]]);
        assert!(full.rank_one_image().is_none());
    }

    #[test]
    fn identity_multiple() {
        let m = RationalMatrix::identity(3).scale(&BigRational::new(1.into(), 2.into()));
        assert_eq!(m.scalar_multiple_of_identity(), Some(BigRational::new(1.into(), 2.into())));
    }
}
