//! Dense complex linear algebra for small multipartite systems.
//!
//! Everything here operates on row-major [`ComplexMatrix`] values indexed by a
//! [`SystemLayout`] describing the tensor factorization `d_1 x d_2 x ... x d_N`.
//! Basis ordering is big-endian: the first party is the most significant digit
//! of a basis index, so for qubits `|b_1 b_2 ... b_N>` has index
//! `b_1 * 2^(N-1) + ... + b_N`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Guardrail on the total Hilbert-space dimension (12 qubits).
pub const MAX_TOTAL_DIM: usize = 4096;

/// Accepted Hermiticity deviation, `max |m[i,j] - conj(m[j,i])|`.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Off-diagonal Frobenius norm at which the Jacobi iteration stops.
pub const EIGEN_OFFDIAG_TOL: f64 = 1e-12;

/// Maximum number of cyclic Jacobi sweeps before giving up.
pub const MAX_JACOBI_SWEEPS: usize = 100;

/// Shorthand constructor for a complex scalar.
#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major data; rejects length mismatches and
    /// non-finite entries.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape("matrix dimensions must be positive".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                rows * cols,
                rows,
                cols,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Shape("matrix entries must be finite".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::ONE);
        }
        m
    }

    /// Builds a matrix from nested rows.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Self::new(r, c, rows.concat())
    }

    /// Diagonal matrix with real entries.
    pub fn diagonal_real(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in diag.iter().enumerate() {
            m.set(i, i, c64(v, 0.0));
        }
        m
    }

    /// Outer product `|v><v|`.
    pub fn outer(v: &[Complex64]) -> Self {
        let n = v.len();
        let mut data = Vec::with_capacity(n * n);
        for &vi in v {
            for &vj in v {
                data.push(vi * vj.conj());
            }
        }
        Self {
            rows: n,
            cols: n,
            data,
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn trace(&self) -> Complex64 {
        debug_assert!(self.is_square());
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(c64(factor, 0.0))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry-wise absolute difference to another matrix.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |m[i,j] - conj(m[j,i])|`; zero for an exactly Hermitian matrix.
    pub fn hermiticity_deviation(&self) -> f64 {
        debug_assert!(self.is_square());
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..=i {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }

    /// `max |(U'U - I)[i,j]|`; zero for an exactly unitary matrix.
    pub fn unitarity_deviation(&self) -> f64 {
        let product = self.adjoint().matmul(self);
        product.max_abs_diff(&Self::identity(self.cols))
    }

    /// Kronecker product `self (x) other`.
    ///
    /// `(a (x) b)[(i*rb + k), (j*cb + l)] = a[i,j] * b[k,l]`. Errors when the
    /// result would exceed [`MAX_TOTAL_DIM`] on either side.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        if rows > MAX_TOTAL_DIM || cols > MAX_TOTAL_DIM {
            return Err(Error::SizeLimit {
                got: rows.max(cols),
                max: MAX_TOTAL_DIM,
            });
        }
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == Complex64::ZERO {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, a * other.get(k, l));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Partial trace onto the kept parties (1-based indices, any order;
    /// the result is ordered by ascending party index). An empty `keep`
    /// traces out everything and returns the 1x1 scalar trace.
    pub fn partial_trace(&self, layout: &SystemLayout, keep: &[usize]) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Shape(format!(
                "partial trace requires a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        if self.rows != layout.total_dim() {
            return Err(Error::Shape(format!(
                "matrix dimension {} does not match layout total dimension {}",
                self.rows,
                layout.total_dim()
            )));
        }
        let split = layout.split(keep)?;
        let kd = split.kept_dim;
        let mut out = Self::zeros(kd, kd);
        for a in 0..kd {
            for b in 0..kd {
                let mut acc = Complex64::ZERO;
                for &g in &split.traced_offsets {
                    acc += self.get(split.kept_offsets[a] + g, split.kept_offsets[b] + g);
                }
                out.set(a, b, acc);
            }
        }
        Ok(out)
    }

    /// Entry-wise comparison within `tol` (absolute).
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self.rows, self.cols) == (other.rows, other.cols) && self.max_abs_diff(other) <= tol
    }
}

/// Reduction of a pure state given by its amplitude vector, without forming
/// the full density matrix first.
pub fn partial_trace_pure(
    amps: &[Complex64],
    layout: &SystemLayout,
    keep: &[usize],
) -> Result<ComplexMatrix> {
    if amps.len() != layout.total_dim() {
        return Err(Error::Shape(format!(
            "amplitude vector length {} does not match layout total dimension {}",
            amps.len(),
            layout.total_dim()
        )));
    }
    let split = layout.split(keep)?;
    let kd = split.kept_dim;
    let mut out = ComplexMatrix::zeros(kd, kd);
    for a in 0..kd {
        for b in 0..kd {
            let mut acc = Complex64::ZERO;
            for &g in &split.traced_offsets {
                acc += amps[split.kept_offsets[a] + g] * amps[split.kept_offsets[b] + g].conj();
            }
            out.set(a, b, acc);
        }
    }
    Ok(out)
}

/// Embeds a single-party operator as `I (x) ... (x) op (x) ... (x) I`.
pub fn embed_local(
    op: &ComplexMatrix,
    layout: &SystemLayout,
    party: usize,
) -> Result<ComplexMatrix> {
    let idx = layout.party_index(party)?;
    let d = layout.dims()[idx];
    if op.rows() != d || op.cols() != d {
        return Err(Error::Shape(format!(
            "operator is {}x{} but party {} has dimension {}",
            op.rows(),
            op.cols(),
            party,
            d
        )));
    }
    let pre: usize = layout.dims()[..idx].iter().product();
    let post: usize = layout.dims()[idx + 1..].iter().product();
    ComplexMatrix::identity(pre)
        .kron(op)?
        .kron(&ComplexMatrix::identity(post))
}

/// Applies a single-party operator directly to an amplitude vector.
pub fn apply_local_to_vec(
    op: &ComplexMatrix,
    layout: &SystemLayout,
    party: usize,
    amps: &[Complex64],
) -> Result<Vec<Complex64>> {
    let idx = layout.party_index(party)?;
    let d = layout.dims()[idx];
    if op.rows() != d || op.cols() != d {
        return Err(Error::Shape(format!(
            "operator is {}x{} but party {} has dimension {}",
            op.rows(),
            op.cols(),
            party,
            d
        )));
    }
    if amps.len() != layout.total_dim() {
        return Err(Error::Shape("amplitude vector length mismatch".into()));
    }
    let stride: usize = layout.dims()[idx + 1..].iter().product();
    let block = d * stride;
    let mut out = vec![Complex64::ZERO; amps.len()];
    for hi in 0..amps.len() / block {
        for lo in 0..stride {
            let base = hi * block + lo;
            for i in 0..d {
                let mut acc = Complex64::ZERO;
                for j in 0..d {
                    acc += op.get(i, j) * amps[base + j * stride];
                }
                out[base + i * stride] = acc;
            }
        }
    }
    Ok(out)
}

/// Ordered subsystem dimensions defining the tensor factorization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct SystemLayout {
    dims: Vec<usize>,
}

impl SystemLayout {
    /// Validates that every dimension is at least 2 and that the total
    /// dimension stays within [`MAX_TOTAL_DIM`].
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Layout("layout needs at least one party".into()));
        }
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::Layout(format!(
                "subsystem dimensions must be at least 2, got {d}"
            )));
        }
        let mut total: usize = 1;
        for &d in &dims {
            total = total.saturating_mul(d);
        }
        if total > MAX_TOTAL_DIM {
            return Err(Error::SizeLimit {
                got: total,
                max: MAX_TOTAL_DIM,
            });
        }
        Ok(Self { dims })
    }

    /// Layout of `n` qubits.
    pub fn qubits(n: usize) -> Result<Self> {
        Self::new(vec![2; n])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_parties(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// All parties, 1-based.
    pub fn parties(&self) -> impl Iterator<Item = usize> + '_ {
        1..=self.num_parties()
    }

    /// `log2` of the total dimension, in bits.
    pub fn capacity_bits(&self) -> f64 {
        self.dims.iter().map(|&d| (d as f64).log2()).sum()
    }

    /// Converts a 1-based party label to a 0-based index, range-checked.
    pub fn party_index(&self, party: usize) -> Result<usize> {
        if party == 0 || party > self.dims.len() {
            return Err(Error::Layout(format!(
                "party {} out of range 1..={}",
                party,
                self.dims.len()
            )));
        }
        Ok(party - 1)
    }

    /// Precomputes linear-index offsets for a kept/traced split of the
    /// parties. Duplicate `keep` entries are rejected.
    fn split(&self, keep: &[usize]) -> Result<IndexSplit> {
        let n = self.dims.len();
        let mut is_kept = vec![false; n];
        for &party in keep {
            let idx = self.party_index(party)?;
            if is_kept[idx] {
                return Err(Error::Layout(format!("party {party} listed twice")));
            }
            is_kept[idx] = true;
        }
        // stride of party k in the big-endian linear index
        let mut strides = vec![1usize; n];
        for k in (0..n.saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.dims[k + 1];
        }
        let kept: Vec<usize> = (0..n).filter(|&k| is_kept[k]).collect();
        let traced: Vec<usize> = (0..n).filter(|&k| !is_kept[k]).collect();
        Ok(IndexSplit {
            kept_dim: kept.iter().map(|&k| self.dims[k]).product(),
            kept_offsets: enumerate_offsets(&kept, &self.dims, &strides),
            traced_offsets: enumerate_offsets(&traced, &self.dims, &strides),
        })
    }
}

impl TryFrom<Vec<usize>> for SystemLayout {
    type Error = Error;

    fn try_from(dims: Vec<usize>) -> Result<Self> {
        Self::new(dims)
    }
}

impl From<SystemLayout> for Vec<usize> {
    fn from(layout: SystemLayout) -> Self {
        layout.dims
    }
}

struct IndexSplit {
    kept_dim: usize,
    kept_offsets: Vec<usize>,
    traced_offsets: Vec<usize>,
}

/// Linear-index offsets spanned by the given parties, in lexicographic order
/// of their digit tuples (ascending party index = most significant first).
fn enumerate_offsets(parties: &[usize], dims: &[usize], strides: &[usize]) -> Vec<usize> {
    let mut offsets = vec![0usize];
    for &k in parties {
        let mut next = Vec::with_capacity(offsets.len() * dims[k]);
        for &base in &offsets {
            for digit in 0..dims[k] {
                next.push(base + digit * strides[k]);
            }
        }
        offsets = next;
    }
    offsets
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Each rotation annihilates one off-diagonal element with a complex plane
/// rotation; sweeps repeat until the off-diagonal Frobenius norm drops below
/// [`EIGEN_OFFDIAG_TOL`] or [`MAX_JACOBI_SWEEPS`] is reached. Eigenvalues come
/// out ascending, with the unitary of accumulated rotations aligned so that
/// `V diag(l) V' = m`.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    if !m.is_square() {
        return Err(Error::Shape(format!(
            "eigendecomposition requires a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let dev = m.hermiticity_deviation();
    if dev > HERMITICITY_TOL {
        return Err(Error::NotHermitian(dev));
    }
    let n = m.rows();

    // Work on the Hermitian average so the input's tolerated asymmetry
    // cannot leak into the rotations.
    let mut h = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            h.set(i, j, (m.get(i, j) + m.get(j, i).conj()).scale(0.5));
        }
    }
    let mut v = ComplexMatrix::identity(n);

    let off_diag_norm = |h: &ComplexMatrix| -> f64 {
        let mut sum = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    sum += h.get(i, j).norm_sqr();
                }
            }
        }
        sum.sqrt()
    };

    let mut converged = off_diag_norm(&h) < EIGEN_OFFDIAG_TOL;
    let mut sweeps = 0;
    while !converged && sweeps < MAX_JACOBI_SWEEPS {
        for p in 0..n {
            for q in p + 1..n {
                let apq = h.get(p, q);
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let phase = apq / r; // e^{i phi}
                let app = h.get(p, p).re;
                let aqq = h.get(q, q).re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // rows: G' H
                for j in 0..n {
                    let hpj = h.get(p, j);
                    let hqj = h.get(q, j);
                    h.set(p, j, hpj.scale(c) - phase * hqj.scale(s));
                    h.set(q, j, hpj.scale(s) + phase * hqj.scale(c));
                }
                // columns: (G' H) G
                for j in 0..n {
                    let hjp = h.get(j, p);
                    let hjq = h.get(j, q);
                    h.set(j, p, hjp.scale(c) - phase.conj() * hjq.scale(s));
                    h.set(j, q, hjp.scale(s) + phase.conj() * hjq.scale(c));
                }
                h.set(p, q, Complex64::ZERO);
                h.set(q, p, Complex64::ZERO);
                // eigenvector accumulation: V G
                for j in 0..n {
                    let vjp = v.get(j, p);
                    let vjq = v.get(j, q);
                    v.set(j, p, vjp.scale(c) - phase.conj() * vjq.scale(s));
                    v.set(j, q, vjp.scale(s) + phase.conj() * vjq.scale(c));
                }
            }
        }
        sweeps += 1;
        converged = off_diag_norm(&h) < EIGEN_OFFDIAG_TOL;
    }
    if !converged {
        return Err(Error::NoConvergence(MAX_JACOBI_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| h.get(a, a).re.total_cmp(&h.get(b, b).re));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| h.get(k, k).re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for i in 0..n {
            vectors.set(i, new_col, v.get(i, old_col));
        }
    }
    Ok((eigenvalues, vectors))
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    hermitian_eigen(m).map(|(vals, _)| vals)
}
