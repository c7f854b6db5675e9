//! Dense exact linear algebra over Q and F_p.
//!
//! Elimination is plain Gauss-Jordan with deterministic pivoting: columns
//! are swept left to right and the pivot row is the topmost row with a
//! nonzero entry. Everything downstream (kernel bases, solution choices,
//! quotient coordinates) inherits this determinism.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

/// Dense row-major matrix of exact scalars.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Matrix {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds a matrix from complete row data; all rows must share one
    /// length and one field.
    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Result<Matrix> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            if row.len() != ncols {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            for s in row {
                if s.field() != field {
                    return Err(Error::FieldMismatch(format!("expected {field}, got {}", s.field())));
                }
                data.push(s);
            }
        }
        Ok(Matrix { field, rows: nrows, cols: ncols, data })
    }

    pub fn from_cols(field: FieldSpec, cols: Vec<Vec<Scalar>>) -> Result<Matrix> {
        Ok(Matrix::from_rows(field, cols)?.transpose())
    }

    /// Column vector from a coordinate slice.
    pub fn column(field: FieldSpec, coords: &[Scalar]) -> Matrix {
        Matrix { field, rows: coords.len(), cols: 1, data: coords.to_vec() }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        debug_assert_eq!(v.field(), self.field);
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| if r == c { self.at(r, c).is_one() } else { self.at(r, c).is_zero() })
            })
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.at(r, c).clone());
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let data = self.data.iter().map(|a| a * s).collect();
        Matrix { field: self.field, rows: self.rows, cols: self.cols, data }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix shape mismatch in product");
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.at(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.at(r, c).add(&a.mul(b));
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    /// Matrix-vector product as coordinates.
    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "matrix/vector shape mismatch");
        let mut out = vec![self.field.zero(); self.rows];
        for r in 0..self.rows {
            let mut acc = self.field.zero();
            for c in 0..self.cols {
                let a = self.at(r, c);
                if a.is_zero() || v[c].is_zero() {
                    continue;
                }
                acc = acc.add(&a.mul(&v[c]));
            }
            out[r] = acc;
        }
        out
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut out = Matrix::zeros(self.field, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.at(r, c).clone());
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.at(r, c).clone());
            }
        }
        out
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { field: self.field, rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.at(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..m.cols {
                    m.data.swap(p * m.cols + c, row * m.cols + c);
                }
            }
            let inv = m.at(row, col).inv().expect("pivot is nonzero");
            if !inv.is_one() {
                for c in col..m.cols {
                    let v = m.at(row, c).mul(&inv);
                    m.set(row, c, v);
                }
            }
            for r in 0..m.rows {
                if r == row || m.at(r, col).is_zero() {
                    continue;
                }
                let factor = m.at(r, col).clone();
                for c in col..m.cols {
                    if m.at(row, c).is_zero() {
                        continue;
                    }
                    let v = m.at(r, c).sub(&factor.mul(m.at(row, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    /// Exact row rank (= column rank).
    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Solves `self * X = rhs` for each column of `rhs`. Returns one exact
    /// solution with every free variable set to zero, or `None` when some
    /// column is inconsistent.
    pub fn solve(&self, rhs: &Matrix) -> Result<Option<Matrix>> {
        if self.rows != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "solve: {} equations vs {} right-hand rows",
                self.rows, rhs.rows
            )));
        }
        let aug = self.hstack(rhs);
        let (red, pivots) = aug.rref();
        // A pivot beyond the coefficient block means an inconsistent column.
        if pivots.iter().any(|&c| c >= self.cols) {
            return Ok(None);
        }
        let mut x = Matrix::zeros(self.field, self.cols, rhs.cols);
        for (r, &c) in pivots.iter().enumerate() {
            for k in 0..rhs.cols {
                x.set(c, k, red.at(r, self.cols + k).clone());
            }
        }
        Ok(Some(x))
    }

    /// Exact basis of the null space, in deterministic echelon-derived
    /// order (one vector per free column, ascending).
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let (red, pivots) = self.rref();
        let mut basis = Vec::new();
        let mut pivot_iter = pivots.iter().copied().enumerate();
        let mut pivot_of_col = vec![None; self.cols];
        for (row, col) in &mut pivot_iter {
            pivot_of_col[col] = Some(row);
        }
        for free in 0..self.cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut v = vec![self.field.zero(); self.cols];
            v[free] = self.field.one();
            for (row, &col) in pivots.iter().enumerate() {
                v[col] = red.at(row, free).neg();
            }
            basis.push(v);
        }
        basis
    }

    /// Exact inverse, or `None` when singular.
    pub fn invert(&self) -> Result<Option<Matrix>> {
        if self.rows != self.cols {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let aug = self.hstack(&Matrix::identity(self.field, self.rows));
        let (red, pivots) = aug.rref();
        if pivots.len() < self.rows || pivots.iter().any(|&c| c >= self.cols) {
            return Ok(None);
        }
        let mut inv = Matrix::zeros(self.field, self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                inv.set(r, c, red.at(r, self.cols + c).clone());
            }
        }
        Ok(Some(inv))
    }

    /// Coefficients of the monic minimal polynomial, lowest degree first
    /// (`p[0] + p[1] x + ... + x^deg`, with the leading 1 included).
    pub fn min_poly(&self) -> Result<Vec<Scalar>> {
        if self.rows != self.cols {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut powers: Vec<Matrix> = vec![Matrix::identity(self.field, n)];
        let mut span = Subspace::new(self.field, n * n);
        span.insert(powers[0].data.clone());
        loop {
            let next = powers.last().unwrap().mul(self);
            if !span.insert(next.data.clone()) {
                // Linear dependence: solve for the combination.
                let cols: Vec<Vec<Scalar>> = powers.iter().map(|m| m.data.clone()).collect();
                let basis = Matrix::from_cols(self.field, cols)?;
                let target = Matrix::column(self.field, &next.data);
                let sol = basis.solve(&target)?.ok_or_else(|| Error::Internal("minimal polynomial solve failed".into()))?;
                let mut coeffs: Vec<Scalar> = (0..powers.len()).map(|i| sol.at(i, 0).neg()).collect();
                coeffs.push(self.field.one());
                return Ok(coeffs);
            }
            powers.push(next);
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(Scalar::literal).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// A subspace of k^n held as a reduced row echelon basis. Insertion keeps
/// the basis in RREF, so equal subspaces have identical row lists.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    field: FieldSpec,
    ambient: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn new(field: FieldSpec, ambient: usize) -> Subspace {
        Subspace { field, ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_vectors<I>(field: FieldSpec, ambient: usize, vectors: I) -> Subspace
    where
        I: IntoIterator<Item = Vec<Scalar>>,
    {
        let mut s = Subspace::new(field, ambient);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Ambient coordinates not used as pivots, ascending; these index a
    /// canonical complement of the subspace.
    pub fn complement_positions(&self) -> Vec<usize> {
        (0..self.ambient).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// Reduces `v` modulo the subspace: the result has zeros in every
    /// pivot coordinate and equals `v` up to an element of the subspace.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.ambient, "vector/subspace ambient mismatch");
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if out[p].is_zero() {
                continue;
            }
            let factor = out[p].clone();
            for (o, r) in out.iter_mut().zip(row) {
                if !r.is_zero() {
                    *o = o.sub(&factor.mul(r));
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    pub fn contains_space(&self, other: &Subspace) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    /// Inserts a vector, returning `true` when it enlarged the span.
    pub fn insert(&mut self, v: Vec<Scalar>) -> bool {
        let mut v = self.reduce(&v);
        let Some(lead) = v.iter().position(|s| !s.is_zero()) else {
            return false;
        };
        let inv = v[lead].inv().expect("leading entry nonzero");
        if !inv.is_one() {
            for s in v.iter_mut() {
                if !s.is_zero() {
                    *s = s.mul(&inv);
                }
            }
        }
        // Clear the new pivot column from existing rows to stay in RREF.
        for row in self.rows.iter_mut() {
            if row[lead].is_zero() {
                continue;
            }
            let factor = row[lead].clone();
            for (r, s) in row.iter_mut().zip(&v) {
                if !s.is_zero() {
                    *r = r.sub(&factor.mul(s));
                }
            }
        }
        let at = self.pivots.iter().position(|&p| p > lead).unwrap_or(self.pivots.len());
        self.pivots.insert(at, lead);
        self.rows.insert(at, v);
        true
    }

    /// Row-span as a matrix (rows are the RREF basis).
    pub fn to_matrix(&self) -> Matrix {
        if self.rows.is_empty() {
            return Matrix::zeros(self.field, 0, self.ambient);
        }
        Matrix::from_rows(self.field, self.rows.clone()).expect("basis rows are consistent")
    }

    /// Coordinates of `v` in the canonical complement (entries of the
    /// reduced vector at non-pivot positions). The reduction is the
    /// quotient-space projection used throughout the crate.
    pub fn quotient_coords(&self, v: &[Scalar]) -> Vec<Scalar> {
        let reduced = self.reduce(v);
        self.complement_positions().iter().map(|&c| reduced[c].clone()).collect()
    }

    /// Basis of `{x : r . x = 0 for every basis row r}` - the solution
    /// space of the homogeneous system whose equations are the rows.
    /// Cheaper than materializing a tall equation matrix: rows can be
    /// inserted incrementally and only the RREF survives.
    pub fn solution_space(&self) -> Vec<Vec<Scalar>> {
        let mut basis = Vec::new();
        for free in self.complement_positions() {
            let mut v = vec![self.field.zero(); self.ambient];
            v[free] = self.field.one();
            for (row, &col) in self.rows.iter().zip(&self.pivots) {
                v[col] = row[free].neg();
            }
            basis.push(v);
        }
        basis
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    fn mat(rows: &[&[i64]]) -> Matrix {
        let field = q();
        Matrix::from_rows(
            field,
            rows.iter().map(|r| r.iter().map(|&v| field.from_i64(v)).collect()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::identity(q(), 3).rank(), 3);
        assert_eq!(Matrix::zeros(q(), 2, 2).rank(), 0);
        assert_eq!(mat(&[&[1, 2], &[2, 4]]).rank(), 1);
    }

    #[test]
    fn solve_examples() {
        let id2 = Matrix::identity(q(), 2);
        let b = mat(&[&[3], &[5]]);
        let x = id2.solve(&b).unwrap().unwrap();
        assert_eq!(x, b);

        // Free variable convention: trailing unknowns go to zero.
        let a = mat(&[&[1, 1]]);
        let b = mat(&[&[2]]);
        let x = a.solve(&b).unwrap().unwrap();
        assert_eq!(x, mat(&[&[2], &[0]]));

        let a = mat(&[&[1], &[1]]);
        let b = mat(&[&[1], &[2]]);
        assert!(a.solve(&b).unwrap().is_none());

        assert!(matches!(a.solve(&mat(&[&[1]])), Err(crate::error::Error::DimensionMismatch(_))));
    }

    #[test]
    fn kernel_examples() {
        assert!(Matrix::identity(q(), 3).kernel_basis().is_empty());

        let z = Matrix::zeros(q(), 2, 2);
        let k = z.kernel_basis();
        assert_eq!(k.len(), 2);
        assert_eq!(k[0], vec![q().one(), q().zero()]);
        assert_eq!(k[1], vec![q().zero(), q().one()]);

        let a = mat(&[&[1, 2], &[2, 4]]);
        let k = a.kernel_basis();
        assert_eq!(k.len(), 1);
        // Proportional to (-2, 1).
        assert_eq!(k[0], vec![q().from_i64(-2), q().one()]);
    }

    #[test]
    fn invert_examples() {
        let id4 = Matrix::identity(q(), 4);
        assert_eq!(id4.invert().unwrap().unwrap(), id4);

        let swap = mat(&[&[0, 1], &[1, 0]]);
        assert_eq!(swap.invert().unwrap().unwrap(), swap);

        assert!(mat(&[&[1, 1], &[1, 1]]).invert().unwrap().is_none());
        assert!(matches!(mat(&[&[1, 1]]).invert(), Err(crate::error::Error::NotSquare { .. })));
    }

    #[test]
    fn min_poly_of_projection() {
        // diag(1, 0) satisfies x^2 - x.
        let p = mat(&[&[1, 0], &[0, 0]]);
        let mp = p.min_poly().unwrap();
        assert_eq!(mp, vec![q().zero(), q().from_i64(-1), q().one()]);
    }

    #[test]
    fn subspace_reduction_is_canonical() {
        let mut s = Subspace::new(q(), 3);
        assert!(s.insert(vec![q().from_i64(2), q().from_i64(2), q().zero()]));
        assert!(s.insert(vec![q().one(), q().zero(), q().one()]));
        assert!(!s.insert(vec![q().from_i64(3), q().from_i64(2), q().one()]));
        assert_eq!(s.dim(), 2);
        assert_eq!(s.pivots(), &[0, 1]);
        assert_eq!(s.complement_positions(), vec![2]);
        assert!(s.contains(&[q().one(), q().one(), q().zero()]));
    }

    fn small_matrix() -> impl Strategy<Value = Matrix> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-6i64..6, r * c).prop_map(move |vals| {
                let field = FieldSpec::Rationals;
                Matrix {
                    field,
                    rows: r,
                    cols: c,
                    data: vals.into_iter().map(|v| field.from_i64(v)).collect(),
                }
            })
        })
    }

    proptest! {
        #[test]
        fn rank_equals_transpose_rank(m in small_matrix()) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn kernel_vectors_annihilate(m in small_matrix()) {
            let kernel = m.kernel_basis();
            prop_assert_eq!(kernel.len(), m.cols() - m.rank());
            let mut span = Subspace::new(m.field(), m.cols());
            for v in &kernel {
                prop_assert!(m.mul_vec(v).iter().all(Scalar::is_zero));
                prop_assert!(span.insert(v.clone()), "kernel basis must be independent");
            }
        }

        #[test]
        fn consistent_solves_verify(m in small_matrix(), seed in proptest::collection::vec(-4i64..4, 1..5)) {
            // Build a consistent rhs as m * x0.
            let x0: Vec<Scalar> = (0..m.cols()).map(|i| m.field().from_i64(*seed.get(i % seed.len()).unwrap())).collect();
            let rhs = Matrix::column(m.field(), &m.mul_vec(&x0));
            let x = m.solve(&rhs).unwrap().expect("consistent by construction");
            let back = m.mul(&x);
            prop_assert_eq!(back, rhs);
        }

        #[test]
        fn inverse_iff_full_rank(m in small_matrix()) {
            if m.rows() == m.cols() {
                let inv = m.invert().unwrap();
                prop_assert_eq!(inv.is_some(), m.rank() == m.rows());
                if let Some(inv) = inv {
                    prop_assert!(m.mul(&inv).is_identity());
                    prop_assert!(inv.mul(&m).is_identity());
                }
            }
        }
    }
}
