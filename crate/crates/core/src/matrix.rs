//! Dense exact matrices over `K` and over `R_n`.
//!
//! Structure maps, tangle evaluation, and all cohomology systems go through
//! this module. Everything is exact: row reduction over `K`, and `eps`-adic
//! lifting for inverses over the local ring `R_n`.

use std::fmt;

use thiserror::Error;

use crate::field::{Field, FieldElem, ScalarError};
use crate::series::{SeriesRing, TruncatedScalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("shape mismatch: ({0}x{1}) vs ({2}x{3})")]
    Shape(usize, usize, usize, usize),
    #[error("ring context mismatch")]
    Ctx,
    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),
    #[error("matrix is singular (not a unit{0})")]
    Singular(&'static str),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Ring element usable as a matrix entry. Context mismatches are the caller's
/// bug once a matrix is constructed, so the element ops are unchecked.
pub trait Entry: Clone + PartialEq + fmt::Debug + Send + Sync {
    type Ctx: Copy + PartialEq + fmt::Debug + Send + Sync;
    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: Self::Ctx) -> Self;
    fn one(ctx: Self::Ctx) -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// `self += a * b`.
    fn mul_acc(&mut self, a: &Self, b: &Self);
}

impl Entry for FieldElem {
    type Ctx = Field;
    fn ctx(&self) -> Field {
        self.field()
    }
    fn zero(ctx: Field) -> Self {
        FieldElem::zero(ctx)
    }
    fn one(ctx: Field) -> Self {
        FieldElem::one(ctx)
    }
    fn is_zero(&self) -> bool {
        FieldElem::is_zero(self)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn mul_acc(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        *self = &*self + &(a * b);
    }
}

impl Entry for TruncatedScalar {
    type Ctx = SeriesRing;
    fn ctx(&self) -> SeriesRing {
        self.ring()
    }
    fn zero(ctx: SeriesRing) -> Self {
        TruncatedScalar::zero(ctx)
    }
    fn one(ctx: SeriesRing) -> Self {
        TruncatedScalar::one(ctx)
    }
    fn is_zero(&self) -> bool {
        TruncatedScalar::is_zero(self)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn mul_acc(&mut self, a: &Self, b: &Self) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        TruncatedScalar::mul_acc(self, a, b);
    }
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<T: Entry> {
    rows: usize,
    cols: usize,
    ctx: T::Ctx,
    data: Vec<T>,
}

pub type MatrixK = Matrix<FieldElem>;
pub type MatrixR = Matrix<TruncatedScalar>;

impl<T: Entry> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                write!(f, "{:?} ", self.data[r * self.cols + c])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<T: Entry> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize, ctx: T::Ctx) -> Self {
        Matrix {
            rows,
            cols,
            ctx,
            data: vec![T::zero(ctx); rows * cols],
        }
    }

    pub fn identity(n: usize, ctx: T::Ctx) -> Self {
        let mut m = Matrix::zeros(n, n, ctx);
        for i in 0..n {
            m.data[i * n + i] = T::one(ctx);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, ctx: T::Ctx, f: impl Fn(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                let e = f(r, c);
                debug_assert!(e.ctx() == ctx);
                data.push(e);
            }
        }
        Matrix { rows, cols, ctx, data }
    }

    pub fn from_entries(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols || data.is_empty() {
            return Err(LinalgError::Shape(rows, cols, data.len(), 1));
        }
        let ctx = data[0].ctx();
        if data.iter().any(|e| e.ctx() != ctx) {
            return Err(LinalgError::Ctx);
        }
        Ok(Matrix { rows, cols, ctx, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ctx(&self) -> T::Ctx {
        self.ctx
    }

    pub fn at(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        debug_assert!(v.ctx() == self.ctx);
        self.data[r * self.cols + c] = v;
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(T::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, self.ctx, |r, c| self.at(c, r).clone())
    }

    pub fn map(&self, f: impl Fn(&T) -> T) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            ctx: self.ctx,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(LinalgError::Shape(self.rows, self.cols, rhs.rows, rhs.cols));
        }
        if self.ctx != rhs.ctx {
            return Err(LinalgError::Ctx);
        }
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a.add_ref(b))
            .collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, ctx: self.ctx, data })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(LinalgError::Shape(self.rows, self.cols, rhs.rows, rhs.cols));
        }
        if self.ctx != rhs.ctx {
            return Err(LinalgError::Ctx);
        }
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a.sub_ref(b))
            .collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, ctx: self.ctx, data })
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|e| e.mul_ref(s))
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::Shape(self.rows, self.cols, rhs.rows, rhs.cols));
        }
        if self.ctx != rhs.ctx {
            return Err(LinalgError::Ctx);
        }
        let mut out: Matrix<T> = Matrix::zeros(self.rows, rhs.cols, self.ctx);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = rhs.at(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    out.data[r * rhs.cols + c].mul_acc(a, b);
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product; realizes the tensor product of linear maps.
    pub fn kron(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.ctx != rhs.ctx {
            return Err(LinalgError::Ctx);
        }
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        let mut out = Matrix::zeros(rows, cols, self.ctx);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = self.at(r1, c1);
                if a.is_zero() {
                    continue;
                }
                for r2 in 0..rhs.rows {
                    for c2 in 0..rhs.cols {
                        let b = rhs.at(r2, c2);
                        if b.is_zero() {
                            continue;
                        }
                        out.set(r1 * rhs.rows + r2, c1 * rhs.cols + c2, a.mul_ref(b));
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Outcome of an exact linear solve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solve {
    /// Some `x` with `A x = b`; free variables are set to zero.
    Solution(Vec<FieldElem>),
    /// Certificate of infeasibility: `y` with `y^T A = 0` and `y^T b != 0`.
    NoSolution { certificate: Vec<FieldElem> },
}

impl MatrixK {
    /// In-place reduced row echelon form; returns the pivot columns.
    /// `aug` trailing columns are carried along but never pivoted on.
    fn rref(&mut self, aug: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        let pivot_cols = self.cols - aug;
        for col in 0..pivot_cols {
            let Some(pr) = (row..self.rows).find(|&r| !self.at(r, col).is_zero()) else {
                continue;
            };
            self.data.swap_chunks(pr, row, self.cols);
            let inv = self.at(row, col).inv().expect("pivot is nonzero");
            for c in col..self.cols {
                let v = self.at(row, c).mul_ref(&inv);
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r == row || self.at(r, col).is_zero() {
                    continue;
                }
                let factor = self.at(r, col).clone();
                for c in col..self.cols {
                    let v = self.at(r, c).sub_ref(&self.at(row, c).mul_ref(&factor));
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
            if row == self.rows {
                break;
            }
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref(0).len()
    }

    /// Basis of the right null space, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<FieldElem>> {
        let mut m = self.clone();
        let pivots = m.rref(0);
        let mut basis = Vec::new();
        let mut pivot_of_col = vec![None; self.cols];
        for (i, &c) in pivots.iter().enumerate() {
            pivot_of_col[c] = Some(i);
        }
        for free in 0..self.cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut v = vec![FieldElem::zero(self.ctx); self.cols];
            v[free] = FieldElem::one(self.ctx);
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = m.at(i, free).neg_ref();
            }
            basis.push(v);
        }
        basis
    }

    /// Solves `A x = b` exactly, or produces an infeasibility certificate.
    pub fn solve(&self, b: &[FieldElem]) -> Result<Solve, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::Shape(self.rows, 1, b.len(), 1));
        }
        // Augment with b and with an identity block recording row operations.
        let aug = 1 + self.rows;
        let mut m = Matrix::zeros(self.rows, self.cols + aug, self.ctx);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.at(r, c).clone());
            }
            m.set(r, self.cols, b[r].clone());
            m.set(r, self.cols + 1 + r, FieldElem::one(self.ctx));
        }
        let pivots = m.rref(aug);
        // Any row that is zero on A's columns but nonzero on b is inconsistent.
        for r in 0..self.rows {
            let zero_a = (0..self.cols).all(|c| m.at(r, c).is_zero());
            if zero_a && !m.at(r, self.cols).is_zero() {
                let certificate = (0..self.rows)
                    .map(|i| m.at(r, self.cols + 1 + i).clone())
                    .collect();
                return Ok(Solve::NoSolution { certificate });
            }
        }
        let mut x = vec![FieldElem::zero(self.ctx); self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = m.at(i, self.cols).clone();
        }
        Ok(Solve::Solution(x))
    }

    pub fn invert(&self) -> Result<MatrixK, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let n = self.rows;
        let mut m = Matrix::zeros(n, 2 * n, self.ctx);
        for r in 0..n {
            for c in 0..n {
                m.set(r, c, self.at(r, c).clone());
            }
            m.set(r, n + r, FieldElem::one(self.ctx));
        }
        let pivots = m.rref(n);
        if pivots.len() != n {
            return Err(LinalgError::Singular(" over K"));
        }
        Ok(Matrix::from_fn(n, n, self.ctx, |r, c| m.at(r, n + c).clone()))
    }

    pub fn mul_vec(&self, v: &[FieldElem]) -> Result<Vec<FieldElem>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::Shape(self.rows, self.cols, v.len(), 1));
        }
        Ok((0..self.rows)
            .map(|r| {
                let mut acc = FieldElem::zero(self.ctx);
                for c in 0..self.cols {
                    acc.mul_acc(self.at(r, c), &v[c]);
                }
                acc
            })
            .collect())
    }

    /// Embeds into `R_n` as the constant coefficient.
    pub fn to_series(&self, order: usize) -> MatrixR {
        let ring = SeriesRing::new(self.ctx, order);
        Matrix::from_fn(self.rows, self.cols, ring, |r, c| {
            TruncatedScalar::constant(self.at(r, c).clone(), order)
        })
    }
}

// Vec lacks a chunked swap; emulate via split_at_mut.
trait SwapChunks {
    fn swap_chunks(&mut self, a: usize, b: usize, width: usize);
}

impl<T> SwapChunks for Vec<T> {
    fn swap_chunks(&mut self, a: usize, b: usize, width: usize) {
        if a == b {
            return;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        let (left, right) = self.split_at_mut(hi * width);
        left[lo * width..lo * width + width].swap_with_slice(&mut right[..width]);
    }
}

impl MatrixR {
    /// Coefficient of `eps^k`, entrywise.
    pub fn coeff_matrix(&self, k: usize) -> MatrixK {
        Matrix::from_fn(self.rows, self.cols, self.ctx.field, |r, c| {
            self.at(r, c).coeff(k).clone()
        })
    }

    pub fn reduce_order(&self, k: usize) -> Result<MatrixR, LinalgError> {
        if k > self.ctx.order {
            return Err(ScalarError::ReduceOrder {
                requested: k,
                actual: self.ctx.order,
            }
            .into());
        }
        let ring = SeriesRing::new(self.ctx.field, k);
        Ok(Matrix::from_fn(self.rows, self.cols, ring, |r, c| {
            self.at(r, c).reduce_order(k).expect("k <= order")
        }))
    }

    /// Exact two-sided inverse over `R_n`: invert mod `eps`, then lift order
    /// by order. Requires the constant-coefficient matrix to be invertible.
    pub fn invert(&self) -> Result<MatrixR, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare(self.rows, self.cols));
        }
        let n = self.ctx.order;
        let b0 = self
            .coeff_matrix(0)
            .invert()
            .map_err(|_| LinalgError::Singular(" mod eps"))?;
        let coeff_mats: Vec<MatrixK> = (0..=n).map(|k| self.coeff_matrix(k)).collect();
        let mut inv_coeffs: Vec<MatrixK> = vec![b0.clone()];
        for k in 1..=n {
            // B_k = -B_0 (sum_{i=1..k} M_i B_{k-i})
            let mut acc = Matrix::zeros(self.rows, self.cols, self.ctx.field);
            for i in 1..=k {
                acc = acc.add(&coeff_mats[i].mul(&inv_coeffs[k - i])?)?;
            }
            inv_coeffs.push(b0.mul(&acc)?.map(|e| e.neg_ref()));
        }
        let ring = self.ctx;
        Ok(Matrix::from_fn(self.rows, self.cols, ring, |r, c| {
            TruncatedScalar::from_coeffs(
                (0..=n).map(|k| inv_coeffs[k].at(r, c).clone()).collect(),
            )
            .expect("uniform field")
        }))
    }

    /// Value of a 1x1 matrix, the scalar a closed diagram evaluates to.
    pub fn as_scalar(&self) -> Option<&TruncatedScalar> {
        (self.rows == 1 && self.cols == 1).then(|| self.at(0, 0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fe(n: i64) -> FieldElem {
        FieldElem::from_int(n, Field::Q)
    }

    fn mk(rows: usize, cols: usize, vals: &[i64]) -> MatrixK {
        Matrix::from_entries(rows, cols, vals.iter().map(|&v| fe(v)).collect()).unwrap()
    }

    #[test]
    fn kron_identities() {
        let i2: MatrixK = Matrix::identity(2, Field::Q);
        let i3: MatrixK = Matrix::identity(3, Field::Q);
        assert_eq!(i2.kron(&i3).unwrap(), Matrix::identity(6, Field::Q));
    }

    #[test]
    fn mul_identity() {
        let a = mk(2, 3, &[1, 2, 3, 4, 5, 6]);
        let i3 = Matrix::identity(3, Field::Q);
        assert_eq!(a.mul(&i3).unwrap(), a);
        assert!(a.mul(&mk(2, 2, &[1, 0, 0, 1])).is_err());
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        let i3: MatrixK = Matrix::identity(3, Field::Q);
        assert!(i3.kernel_basis().is_empty());
    }

    #[test]
    fn kernel_over_f2() {
        let f = Field::Fp(2);
        let m = Matrix::from_entries(
            2,
            2,
            vec![
                FieldElem::one(f),
                FieldElem::one(f),
                FieldElem::one(f),
                FieldElem::one(f),
            ],
        )
        .unwrap();
        let basis = m.kernel_basis();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0], vec![FieldElem::one(f), FieldElem::one(f)]);
    }

    #[test]
    fn solve_examples() {
        let i2: MatrixK = Matrix::identity(2, Field::Q);
        assert_eq!(
            i2.solve(&[fe(3), fe(-4)]).unwrap(),
            Solve::Solution(vec![fe(3), fe(-4)])
        );
        let z: MatrixK = Matrix::zeros(2, 2, Field::Q);
        assert_eq!(
            z.solve(&[fe(0), fe(0)]).unwrap(),
            Solve::Solution(vec![fe(0), fe(0)])
        );
        // Inconsistent system carries a certificate.
        let m = mk(2, 1, &[1, 1]);
        match m.solve(&[fe(1), fe(2)]).unwrap() {
            Solve::NoSolution { certificate } => {
                // y^T A = 0 and y^T b != 0
                let ya = &certificate[0] + &certificate[1];
                assert!(ya.is_zero());
                let yb = &certificate[0] + &(&certificate[1] * &fe(2));
                assert!(!yb.is_zero());
            }
            other => panic!("expected NoSolution, got {other:?}"),
        }
    }

    #[test]
    fn series_inverse_of_scaled_identity() {
        let ring = SeriesRing::new(Field::Q, 2);
        let two = TruncatedScalar::constant(fe(2), 2);
        let m: MatrixR = Matrix::identity(3, ring).scale(&two);
        let inv = m.invert().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(3, ring));
        assert_eq!(inv.mul(&m).unwrap(), Matrix::identity(3, ring));
        // Identity inverts to itself; nilpotent constant term fails.
        let id: MatrixR = Matrix::identity(2, ring);
        assert_eq!(id.invert().unwrap(), id);
        let nil = id.map(|e| e.sub_ref(e));
        assert!(matches!(nil.invert(), Err(LinalgError::Singular(_))));
    }

    fn arb_matrix(rows: usize, cols: usize) -> impl Strategy<Value = MatrixK> {
        proptest::collection::vec(-9i64..9, rows * cols)
            .prop_map(move |v| mk(rows, cols, &v))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn kron_mixed_product(a in arb_matrix(2, 3), c in arb_matrix(3, 2),
                              b in arb_matrix(2, 2), d in arb_matrix(2, 3)) {
            // kron(A,B) kron(C,D) = kron(AC, BD)
            let lhs = a.kron(&b).unwrap().mul(&c.kron(&d).unwrap()).unwrap();
            let rhs = a.mul(&c).unwrap().kron(&b.mul(&d).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn kron_is_associative(a in arb_matrix(2, 2), b in arb_matrix(2, 3), c in arb_matrix(3, 2)) {
            let lhs = a.kron(&b).unwrap().kron(&c).unwrap();
            let rhs = a.kron(&b.kron(&c).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn rank_nullity(a in arb_matrix(3, 4)) {
            prop_assert_eq!(a.rank() + a.kernel_basis().len(), a.cols());
            for v in a.kernel_basis() {
                let av = a.mul_vec(&v).unwrap();
                prop_assert!(av.iter().all(FieldElem::is_zero));
            }
        }

        #[test]
        fn solve_consistent_systems(a in arb_matrix(3, 3), x0 in proptest::collection::vec(-9i64..9, 3)) {
            let x0: Vec<FieldElem> = x0.into_iter().map(fe).collect();
            let b = a.mul_vec(&x0).unwrap();
            match a.solve(&b).unwrap() {
                Solve::Solution(x) => {
                    prop_assert_eq!(a.mul_vec(&x).unwrap(), b);
                }
                Solve::NoSolution { .. } => prop_assert!(false, "consistent system reported unsolvable"),
            }
        }

        #[test]
        fn series_inverse_is_two_sided(coeffs in proptest::collection::vec(-4i64..4, 4 * 9)) {
            // A = I + eps * N: invertible mod eps by construction.
            let ring = SeriesRing::new(Field::Q, 3);
            let mut m: MatrixR = Matrix::identity(3, ring);
            for r in 0..3 {
                for c in 0..3 {
                    let mut cs = vec![FieldElem::zero(Field::Q); 4];
                    cs[0] = if r == c { fe(1) } else { fe(0) };
                    for k in 1..4 {
                        cs[k] = fe(coeffs[(r * 3 + c) * 4 + k]);
                    }
                    m.set(r, c, TruncatedScalar::from_coeffs(cs).unwrap());
                }
            }
            let inv = m.invert().unwrap();
            prop_assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(3, ring));
            prop_assert_eq!(inv.mul(&m).unwrap(), Matrix::identity(3, ring));
        }
    }
}
