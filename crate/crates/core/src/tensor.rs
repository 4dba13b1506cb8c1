//! Dense multilinear algebra over a [`ScalarRing`].
//!
//! Index convention, used everywhere in the crate and in every export:
//! multi-indices are flattened lexicographically with the leftmost leg
//! varying slowest, so for two legs of dimension 2 the basis order is
//! `e0⊗e0, e0⊗e1, e1⊗e0, e1⊗e1`. Operator matrices are stored row-major
//! with column `j` holding the image of the `j`-th input basis tensor.

use crate::error::{Error, Result};
use crate::scalars::{Scalar, ScalarRing};

/// Maximum coefficient magnitude; the universal residual measure.
pub trait ResidualNorm {
    fn residual_norm(&self) -> f64;
}

impl ResidualNorm for Scalar {
    fn residual_norm(&self) -> f64 {
        self.max_abs()
    }
}

fn product(dims: &[usize]) -> usize {
    dims.iter().product()
}

/// Flattens a multi-index in the global convention.
pub fn flat_index(dims: &[usize], index: &[usize]) -> usize {
    debug_assert_eq!(dims.len(), index.len());
    index.iter().zip(dims).fold(0, |acc, (&i, &d)| acc * d + i)
}

/// Inverse of [`flat_index`].
pub fn multi_index(dims: &[usize], mut flat: usize) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = flat % d;
        flat /= d;
    }
    out
}

fn validate_dims(dims: &[usize], what: &str) -> Result<()> {
    if dims.contains(&0) {
        return Err(Error::ShapeMismatch(format!(
            "{what}: leg dimensions must be positive, got {dims:?}"
        )));
    }
    Ok(())
}

/// Element of `V_1 ⊗ ... ⊗ V_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorElement {
    ring: ScalarRing,
    leg_dims: Vec<usize>,
    coeffs: Vec<Scalar>,
}

impl TensorElement {
    pub fn zeros(ring: ScalarRing, leg_dims: &[usize]) -> Self {
        TensorElement {
            ring,
            leg_dims: leg_dims.to_vec(),
            coeffs: vec![ring.zero(); product(leg_dims)],
        }
    }

    pub fn from_coeffs(ring: ScalarRing, leg_dims: &[usize], coeffs: Vec<Scalar>) -> Result<Self> {
        validate_dims(leg_dims, "tensor")?;
        if coeffs.len() != product(leg_dims) {
            return Err(Error::ShapeMismatch(format!(
                "tensor with legs {leg_dims:?} needs {} coefficients, got {}",
                product(leg_dims),
                coeffs.len()
            )));
        }
        if let Some(bad) = coeffs.iter().find(|c| !c.belongs_to(&ring)) {
            return Err(Error::RingMismatch(format!(
                "coefficient {bad} does not belong to {ring}"
            )));
        }
        Ok(TensorElement {
            ring,
            leg_dims: leg_dims.to_vec(),
            coeffs,
        })
    }

    /// Builds a tensor by evaluating `f` on every multi-index.
    pub fn from_fn(
        ring: ScalarRing,
        leg_dims: &[usize],
        mut f: impl FnMut(&[usize]) -> Scalar,
    ) -> Self {
        let coeffs = (0..product(leg_dims))
            .map(|flat| f(&multi_index(leg_dims, flat)))
            .collect();
        TensorElement {
            ring,
            leg_dims: leg_dims.to_vec(),
            coeffs,
        }
    }

    /// Basis tensor `e_{i1} ⊗ ... ⊗ e_{ik}`.
    pub fn basis(ring: ScalarRing, leg_dims: &[usize], index: &[usize]) -> Self {
        let mut t = Self::zeros(ring, leg_dims);
        t.coeffs[flat_index(leg_dims, index)] = ring.one();
        t
    }

    pub fn ring(&self) -> &ScalarRing {
        &self.ring
    }

    pub fn leg_dims(&self) -> &[usize] {
        &self.leg_dims
    }

    pub fn legs(&self) -> usize {
        self.leg_dims.len()
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn get(&self, index: &[usize]) -> &Scalar {
        &self.coeffs[flat_index(&self.leg_dims, index)]
    }

    pub fn set(&mut self, index: &[usize], value: Scalar) {
        let flat = flat_index(&self.leg_dims, index);
        self.coeffs[flat] = value;
    }

    /// Nonzero entries as `(flat index, coefficient)`.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_exact_zero())
    }

    fn ensure_same_shape(&self, other: &TensorElement, what: &str) -> Result<()> {
        self.ring.ensure_compatible(&other.ring, what)?;
        if self.leg_dims != other.leg_dims {
            return Err(Error::ShapeMismatch(format!(
                "{what}: legs {:?} vs {:?}",
                self.leg_dims, other.leg_dims
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &TensorElement) -> Result<TensorElement> {
        self.ensure_same_shape(other, "tensor add")?;
        Ok(TensorElement {
            ring: self.ring,
            leg_dims: self.leg_dims.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &TensorElement) -> Result<TensorElement> {
        self.ensure_same_shape(other, "tensor sub")?;
        Ok(TensorElement {
            ring: self.ring,
            leg_dims: self.leg_dims.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, s: &Scalar) -> TensorElement {
        TensorElement {
            ring: self.ring,
            leg_dims: self.leg_dims.clone(),
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// Outer product; legs concatenate.
    pub fn tensor(&self, other: &TensorElement) -> Result<TensorElement> {
        self.ring.ensure_compatible(&other.ring, "tensor product")?;
        let mut leg_dims = self.leg_dims.clone();
        leg_dims.extend_from_slice(&other.leg_dims);
        let mut coeffs = Vec::with_capacity(self.coeffs.len() * other.coeffs.len());
        let zero = self.ring.zero();
        for a in &self.coeffs {
            for b in &other.coeffs {
                if a.is_exact_zero() || b.is_exact_zero() {
                    coeffs.push(zero.clone());
                } else {
                    coeffs.push(a * b);
                }
            }
        }
        Ok(TensorElement {
            ring: self.ring,
            leg_dims,
            coeffs,
        })
    }

    /// Reorders legs: leg `l` of the input becomes leg `perm[l]` of the output.
    pub fn leg_permute(&self, perm: &[usize]) -> Result<TensorElement> {
        let k = self.legs();
        let mut seen = vec![false; k];
        if perm.len() != k {
            return Err(Error::InvalidArgument(format!(
                "permutation {perm:?} has wrong length for {k} legs"
            )));
        }
        for &p in perm {
            if p >= k || seen[p] {
                return Err(Error::InvalidArgument(format!(
                    "{perm:?} is not a permutation of 0..{k}"
                )));
            }
            seen[p] = true;
        }
        let mut out_dims = vec![0; k];
        for (l, &p) in perm.iter().enumerate() {
            out_dims[p] = self.leg_dims[l];
        }
        let mut out = TensorElement::zeros(self.ring, &out_dims);
        let mut target = vec![0; k];
        for (flat, c) in self.coeffs.iter().enumerate() {
            let idx = multi_index(&self.leg_dims, flat);
            for (l, &p) in perm.iter().enumerate() {
                target[p] = idx[l];
            }
            let t = flat_index(&out_dims, &target);
            out.coeffs[t] = c.clone();
        }
        Ok(out)
    }

    pub fn approx_eq(&self, other: &TensorElement, tolerance: f64) -> bool {
        self.try_sub(other)
            .map(|d| d.residual_norm() < tolerance)
            .unwrap_or(false)
    }
}

impl ResidualNorm for TensorElement {
    fn residual_norm(&self) -> f64 {
        self.coeffs.iter().map(Scalar::max_abs).fold(0.0, f64::max)
    }
}

/// Linear map `⊗ in_dims -> ⊗ out_dims`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearOperator {
    ring: ScalarRing,
    in_dims: Vec<usize>,
    out_dims: Vec<usize>,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl LinearOperator {
    pub fn zeros(ring: ScalarRing, out_dims: &[usize], in_dims: &[usize]) -> Self {
        let rows = product(out_dims);
        let cols = product(in_dims);
        LinearOperator {
            ring,
            in_dims: in_dims.to_vec(),
            out_dims: out_dims.to_vec(),
            rows,
            cols,
            entries: vec![ring.zero(); rows * cols],
        }
    }

    pub fn identity(ring: ScalarRing, dims: &[usize]) -> Self {
        let mut op = Self::zeros(ring, dims, dims);
        for i in 0..op.rows {
            op.entries[i * op.cols + i] = ring.one();
        }
        op
    }

    /// Builds an operator from a row-major entry function `f(row, col)`.
    pub fn from_fn(
        ring: ScalarRing,
        out_dims: &[usize],
        in_dims: &[usize],
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Self {
        let rows = product(out_dims);
        let cols = product(in_dims);
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        LinearOperator {
            ring,
            in_dims: in_dims.to_vec(),
            out_dims: out_dims.to_vec(),
            rows,
            cols,
            entries,
        }
    }

    /// Builds an operator from row-major entries, validating shape and ring.
    pub fn from_rows(
        ring: ScalarRing,
        out_dims: &[usize],
        in_dims: &[usize],
        entries: Vec<Scalar>,
    ) -> Result<Self> {
        validate_dims(out_dims, "operator output")?;
        validate_dims(in_dims, "operator input")?;
        let rows = product(out_dims);
        let cols = product(in_dims);
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "operator {out_dims:?} <- {in_dims:?} needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|c| !c.belongs_to(&ring)) {
            return Err(Error::RingMismatch(format!(
                "entry {bad} does not belong to {ring}"
            )));
        }
        Ok(LinearOperator {
            ring,
            in_dims: in_dims.to_vec(),
            out_dims: out_dims.to_vec(),
            rows,
            cols,
            entries,
        })
    }

    /// Operator whose `j`-th column is `columns[j]`.
    pub fn from_columns(
        ring: ScalarRing,
        in_dims: &[usize],
        columns: &[TensorElement],
    ) -> Result<Self> {
        let cols = product(in_dims);
        if columns.len() != cols {
            return Err(Error::ShapeMismatch(format!(
                "need {cols} columns, got {}",
                columns.len()
            )));
        }
        let out_dims = columns
            .first()
            .map(|c| c.leg_dims().to_vec())
            .ok_or_else(|| Error::ShapeMismatch("no columns".into()))?;
        for c in columns {
            c.ensure_same_shape(&columns[0], "operator columns")?;
        }
        ring.ensure_compatible(columns[0].ring(), "operator columns")?;
        Ok(Self::from_fn(ring, &out_dims, in_dims, |r, c| {
            columns[c].coeffs[r].clone()
        }))
    }

    pub fn diagonal(ring: ScalarRing, dims: &[usize], diag: Vec<Scalar>) -> Result<Self> {
        let n = product(dims);
        if diag.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "diagonal of length {} for dimension {n}",
                diag.len()
            )));
        }
        let mut op = Self::zeros(ring, dims, dims);
        for (i, d) in diag.into_iter().enumerate() {
            if !d.belongs_to(&ring) {
                return Err(Error::RingMismatch(format!(
                    "diagonal entry {d} not in {ring}"
                )));
            }
            op.entries[i * n + i] = d;
        }
        Ok(op)
    }

    pub fn ring(&self) -> &ScalarRing {
        &self.ring
    }

    pub fn in_dims(&self) -> &[usize] {
        &self.in_dims
    }

    pub fn out_dims(&self) -> &[usize] {
        &self.out_dims
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, row: usize, col: usize) -> &Scalar {
        &self.entries[row * self.cols + col]
    }

    pub fn set_entry(&mut self, row: usize, col: usize, value: Scalar) {
        self.entries[row * self.cols + col] = value;
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    /// Image of the `j`-th input basis tensor.
    pub fn column(&self, j: usize) -> TensorElement {
        TensorElement {
            ring: self.ring,
            leg_dims: self.out_dims.clone(),
            coeffs: (0..self.rows).map(|r| self.entry(r, j).clone()).collect(),
        }
    }

    /// Relabels the leg structure without touching entries.
    pub fn reshape(&self, out_dims: &[usize], in_dims: &[usize]) -> Result<Self> {
        if product(out_dims) != self.rows || product(in_dims) != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "cannot reshape {}x{} into {out_dims:?} <- {in_dims:?}",
                self.rows, self.cols
            )));
        }
        let mut op = self.clone();
        op.out_dims = out_dims.to_vec();
        op.in_dims = in_dims.to_vec();
        Ok(op)
    }

    /// Matrix transpose; input and output legs swap.
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.ring, &self.in_dims, &self.out_dims, |r, c| {
            self.entry(c, r).clone()
        })
    }

    /// `self ∘ P`, where `P` moves input leg `l` to position `perm[l]` as in
    /// [`TensorElement::leg_permute`]. Avoids building `P` densely.
    pub fn permute_inputs(&self, perm: &[usize]) -> Result<LinearOperator> {
        let k = self.in_dims.len();
        let mut seen = vec![false; k];
        if perm.len() != k
            || perm
                .iter()
                .any(|&p| p >= k || std::mem::replace(&mut seen[p], true))
        {
            return Err(Error::InvalidArgument(format!(
                "{perm:?} is not a permutation of {k} input legs"
            )));
        }
        let in_dims: Vec<usize> = perm.iter().map(|&p| self.in_dims[p]).collect();
        let mut source = vec![0; self.cols];
        let mut y = vec![0; k];
        for (x_flat, s) in source.iter_mut().enumerate() {
            let x = multi_index(&in_dims, x_flat);
            for (l, &p) in perm.iter().enumerate() {
                y[p] = x[l];
            }
            *s = flat_index(&self.in_dims, &y);
        }
        Ok(Self::from_fn(
            self.ring,
            &self.out_dims,
            &in_dims,
            |r, c| self.entry(r, source[c]).clone(),
        ))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LinearOperator) -> Result<LinearOperator> {
        self.ring.ensure_compatible(&inner.ring, "compose")?;
        if self.cols != inner.rows {
            return Err(Error::ShapeMismatch(format!(
                "compose: {:?} <- {:?} after {:?} <- {:?}",
                self.out_dims, self.in_dims, inner.out_dims, inner.in_dims
            )));
        }
        let mut out = LinearOperator::zeros(self.ring, &self.out_dims, &inner.in_dims);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.entry(r, k);
                if a.is_exact_zero() {
                    continue;
                }
                for c in 0..inner.cols {
                    let b = inner.entry(k, c);
                    if b.is_exact_zero() {
                        continue;
                    }
                    let slot = &mut out.entries[r * out.cols + c];
                    *slot = &*slot + &(a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, x: &TensorElement) -> Result<TensorElement> {
        self.ring.ensure_compatible(&x.ring, "apply")?;
        if x.coeffs.len() != self.cols {
            return Err(Error::ShapeMismatch(format!(
                "apply: operator takes {:?}, element has legs {:?}",
                self.in_dims, x.leg_dims
            )));
        }
        let mut out = TensorElement::zeros(self.ring, &self.out_dims);
        for (c, xv) in x.nonzero() {
            for r in 0..self.rows {
                let a = self.entry(r, c);
                if a.is_exact_zero() {
                    continue;
                }
                out.coeffs[r] = &out.coeffs[r] + &(a * xv);
            }
        }
        Ok(out)
    }

    /// Kronecker product `(A ⊗ B)(x ⊗ y) = A(x) ⊗ B(y)`; leg lists concatenate.
    pub fn kron(&self, other: &LinearOperator) -> Result<LinearOperator> {
        self.ring.ensure_compatible(&other.ring, "kron")?;
        let mut out_dims = self.out_dims.clone();
        out_dims.extend_from_slice(&other.out_dims);
        let mut in_dims = self.in_dims.clone();
        in_dims.extend_from_slice(&other.in_dims);
        let mut out = LinearOperator::zeros(self.ring, &out_dims, &in_dims);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = self.entry(r1, c1);
                if a.is_exact_zero() {
                    continue;
                }
                for r2 in 0..other.rows {
                    for c2 in 0..other.cols {
                        let b = other.entry(r2, c2);
                        if b.is_exact_zero() {
                            continue;
                        }
                        let r = r1 * other.rows + r2;
                        let c = c1 * other.cols + c2;
                        out.entries[r * out.cols + c] = a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product of a list of operators, left to right.
    pub fn kron_all(ops: &[&LinearOperator]) -> Result<LinearOperator> {
        let (first, rest) = ops
            .split_first()
            .ok_or_else(|| Error::InvalidArgument("kron of an empty list".into()))?;
        rest.iter()
            .try_fold((*first).clone(), |acc, op| acc.kron(op))
    }

    fn ensure_same_shape(&self, other: &LinearOperator, what: &str) -> Result<()> {
        self.ring.ensure_compatible(&other.ring, what)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "{what}: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &LinearOperator) -> Result<LinearOperator> {
        self.ensure_same_shape(other, "operator add")?;
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(&other.entries) {
            *a = &*a + b;
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &LinearOperator) -> Result<LinearOperator> {
        self.ensure_same_shape(other, "operator sub")?;
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(&other.entries) {
            *a = &*a - b;
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Scalar) -> LinearOperator {
        let mut out = self.clone();
        for a in out.entries.iter_mut() {
            *a = &*a * s;
        }
        out
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// `self^n` for a square operator (`n = 0` gives the identity).
    pub fn power(&self, n: u32) -> Result<LinearOperator> {
        if !self.is_square() {
            return Err(Error::ShapeMismatch(
                "power of a non-square operator".into(),
            ));
        }
        let mut acc = LinearOperator::identity(self.ring, &self.out_dims)
            .reshape(&self.out_dims, &self.in_dims)?;
        for _ in 0..n {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    /// Gauss-Jordan inverse. Pivots are chosen by constant-term modulus, so
    /// a series matrix is invertible exactly when its `h = 0` part is.
    pub fn try_inverse(&self) -> Result<LinearOperator> {
        if !self.is_square() {
            return Err(Error::NotInvertible(format!(
                "{}x{} operator is not square",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let tol = self.ring.tolerance();
        let mut a: Vec<Vec<Scalar>> = (0..n)
            .map(|r| (0..n).map(|c| self.entry(r, c).clone()).collect())
            .collect();
        let mut inv: Vec<Vec<Scalar>> = (0..n)
            .map(|r| {
                (0..n)
                    .map(|c| {
                        if r == c {
                            self.ring.one()
                        } else {
                            self.ring.zero()
                        }
                    })
                    .collect()
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| {
                    a[i][col]
                        .constant_term()
                        .norm()
                        .total_cmp(&a[j][col].constant_term().norm())
                })
                .expect("non-empty range");
            if a[pivot][col].constant_term().norm() <= tol {
                return Err(Error::NotInvertible(format!(
                    "singular matrix (no pivot in column {col})"
                )));
            }
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p = a[col][col].try_invert(tol)?;
            for c in 0..n {
                a[col][c] = &a[col][c] * &p;
                inv[col][c] = &inv[col][c] * &p;
            }
            for r in 0..n {
                if r == col || a[r][col].is_exact_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for c in 0..n {
                    let t = &f * &a[col][c];
                    a[r][c] = &a[r][c] - &t;
                    let t = &f * &inv[col][c];
                    inv[r][c] = &inv[r][c] - &t;
                }
            }
        }
        Ok(LinearOperator::from_fn(
            self.ring,
            &self.in_dims,
            &self.out_dims,
            |r, c| inv[r][c].clone(),
        ))
    }

    /// Some solution `x` of `self(x) = b` by row reduction; free variables
    /// are set to zero. Inconsistent systems still return a candidate, so
    /// callers must check `self(x) - b` themselves.
    pub fn solve(&self, b: &TensorElement) -> Result<TensorElement> {
        self.ring.ensure_compatible(&b.ring, "solve")?;
        if b.coeffs.len() != self.rows {
            return Err(Error::ShapeMismatch(format!(
                "solve: right-hand side has {} entries, operator has {} rows",
                b.coeffs.len(),
                self.rows
            )));
        }
        let tol = self.ring.tolerance();
        let mut a: Vec<Vec<Scalar>> = (0..self.rows)
            .map(|r| {
                let mut row: Vec<Scalar> =
                    (0..self.cols).map(|c| self.entry(r, c).clone()).collect();
                row.push(b.coeffs[r].clone());
                row
            })
            .collect();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let best = (row..self.rows)
                .max_by(|&i, &j| {
                    a[i][col]
                        .constant_term()
                        .norm()
                        .total_cmp(&a[j][col].constant_term().norm())
                })
                .expect("non-empty range");
            if a[best][col].constant_term().norm() <= tol {
                continue;
            }
            a.swap(row, best);
            let p = a[row][col].try_invert(tol)?;
            for v in a[row].iter_mut() {
                *v = &*v * &p;
            }
            for r in 0..self.rows {
                if r == row || a[r][col].is_exact_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for c in 0..=self.cols {
                    let t = &f * &a[row][c];
                    a[r][c] = &a[r][c] - &t;
                }
            }
            pivots.push((row, col));
            row += 1;
        }
        let mut x = TensorElement::zeros(self.ring, &self.in_dims);
        for (r, c) in pivots {
            x.coeffs[c] = a[r][self.cols].clone();
        }
        Ok(x)
    }

    pub fn is_invertible(&self) -> bool {
        self.try_inverse().is_ok()
    }

    pub fn approx_eq(&self, other: &LinearOperator, tolerance: f64) -> bool {
        self.try_sub(other)
            .map(|d| d.residual_norm() < tolerance)
            .unwrap_or(false)
    }
}

impl ResidualNorm for LinearOperator {
    fn residual_norm(&self) -> f64 {
        self.entries.iter().map(Scalar::max_abs).fold(0.0, f64::max)
    }
}

/// The flip `τ(v ⊗ w) = w ⊗ v` from `V_{d1} ⊗ V_{d2}` to `V_{d2} ⊗ V_{d1}`.
pub fn twist_operator(ring: ScalarRing, d1: usize, d2: usize) -> LinearOperator {
    let mut op = LinearOperator::zeros(ring, &[d2, d1], &[d1, d2]);
    for i in 0..d1 {
        for j in 0..d2 {
            op.set_entry(j * d1 + i, i * d2 + j, ring.one());
        }
    }
    op
}

/// Which pair of legs of `A⊗A⊗A` carries `R`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LegPair {
    L12,
    L13,
    L23,
}

/// `R_12 = R ⊗ c`, `R_23 = c ⊗ R`, `R_13 = (τ ⊗ Id)(R_23)`.
pub fn embed_r(r: &TensorElement, c: &TensorElement, which: LegPair) -> Result<TensorElement> {
    if r.legs() != 2 || c.legs() != 1 {
        return Err(Error::ShapeMismatch(format!(
            "embed_r needs a 2-leg R and 1-leg c, got {:?} and {:?}",
            r.leg_dims(),
            c.leg_dims()
        )));
    }
    let d = c.leg_dims()[0];
    if r.leg_dims() != [d, d] {
        return Err(Error::ShapeMismatch(format!(
            "embed_r: R legs {:?} do not match c dimension {d}",
            r.leg_dims()
        )));
    }
    match which {
        LegPair::L12 => r.tensor(c),
        LegPair::L23 => c.tensor(r),
        // τ⊗Id swaps legs 0 and 1 of c⊗R.
        LegPair::L13 => c.tensor(r)?.leg_permute(&[1, 0, 2]),
    }
}

/// Leg-wise product `(a_1⊗..⊗a_k)(b_1⊗..⊗b_k) = a_1 b_1 ⊗ .. ⊗ a_k b_k`,
/// extended bilinearly. `mu` is a multiplication `[d, d] -> [d]`.
pub fn legwise_multiply(
    x: &TensorElement,
    y: &TensorElement,
    mu: &LinearOperator,
) -> Result<TensorElement> {
    x.ring.ensure_compatible(&y.ring, "legwise_multiply")?;
    x.ring.ensure_compatible(&mu.ring, "legwise_multiply")?;
    let d = mu
        .out_dims()
        .first()
        .copied()
        .filter(|_| mu.out_dims().len() == 1)
        .ok_or_else(|| Error::ShapeMismatch("multiplication must have one output leg".into()))?;
    if mu.in_dims() != [d, d] {
        return Err(Error::ShapeMismatch(format!(
            "multiplication must map [d, d] -> [d], got {:?} -> {:?}",
            mu.in_dims(),
            mu.out_dims()
        )));
    }
    if x.leg_dims() != y.leg_dims() || x.leg_dims().iter().any(|&l| l != d) {
        return Err(Error::ShapeMismatch(format!(
            "legwise_multiply: legs {:?} and {:?} must all equal {d}",
            x.leg_dims(),
            y.leg_dims()
        )));
    }
    // Sparse product table: for each (i, j), the nonzero (k, mu_ij^k).
    let table: Vec<Vec<(usize, Scalar)>> = (0..d * d)
        .map(|col| {
            (0..d)
                .filter_map(|k| {
                    let s = mu.entry(k, col);
                    (!s.is_exact_zero()).then(|| (k, s.clone()))
                })
                .collect()
        })
        .collect();
    let dims = x.leg_dims().to_vec();
    let legs = dims.len();
    let mut out = TensorElement::zeros(x.ring, &dims);
    let ys: Vec<(Vec<usize>, &Scalar)> = y
        .nonzero()
        .map(|(f, s)| (multi_index(&dims, f), s))
        .collect();
    let mut stack: Vec<(usize, usize, Scalar)> = Vec::new();
    for (fx, xv) in x.nonzero() {
        let ix = multi_index(&dims, fx);
        for (iy, yv) in &ys {
            let coef = xv * *yv;
            // depth-first expansion over legs
            stack.clear();
            stack.push((0, 0, coef));
            while let Some((leg, flat, acc)) = stack.pop() {
                if leg == legs {
                    out.coeffs[flat] = &out.coeffs[flat] + &acc;
                    continue;
                }
                for (k, s) in &table[ix[leg] * d + iy[leg]] {
                    stack.push((leg + 1, flat * d + k, &acc * s));
                }
            }
        }
    }
    Ok(out)
}
