//! Dense complex linear algebra for small qubit registers.
//!
//! States, Hermitian operators and unitaries are thin newtypes over nalgebra
//! matrices. Exponentials of Hermitian operators go through the spectral
//! decomposition; the exact directional derivative of a segment propagator is
//! available both through the block-triangular exponential identity and
//! through the spectral divided-difference formula, which the simulator uses.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{exp_divided_difference, Eigh};

pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Tolerance on `‖H - H†‖_max` accepted by [`HermitianOperator::new`].
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Tolerance on the state norm accepted by [`QuantumState::new`].
pub const NORM_TOL: f64 = 1e-10;

pub(crate) const I: C64 = C64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> CMatrix {
        let o = C64::new(0.0, 0.0);
        let l = C64::new(1.0, 0.0);
        match self {
            Pauli::X => CMatrix::from_row_slice(2, 2, &[o, l, l, o]),
            Pauli::Y => CMatrix::from_row_slice(2, 2, &[o, -I, I, o]),
            Pauli::Z => CMatrix::from_row_slice(2, 2, &[l, o, o, -l]),
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        };
        write!(f, "{c}")
    }
}

/// Normalized pure state of a `d`-level register.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState(CVector);

impl QuantumState {
    pub fn new(amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidParameter(format!(
                "state norm {norm} differs from 1"
            )));
        }
        Ok(Self(amplitudes))
    }

    /// Normalizes the given amplitudes.
    pub fn normalized(amplitudes: CVector) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidParameter(
                "cannot normalize zero vector".into(),
            ));
        }
        Ok(Self(amplitudes / C64::new(norm, 0.0)))
    }

    pub(crate) fn from_vec_unchecked(amplitudes: CVector) -> Self {
        Self(amplitudes)
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = CVector::zeros(dim);
        v[index] = C64::new(1.0, 0.0);
        Self(v)
    }

    /// `|0⟩^{⊗n}`.
    pub fn zero(n_qubits: usize) -> Self {
        Self::basis(1 << n_qubits, 0)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    /// Euclidean distance between amplitude vectors (phase sensitive).
    pub fn distance(&self, other: &QuantumState) -> f64 {
        (&self.0 - &other.0).norm()
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &QuantumState) -> f64 {
        self.0.dotc(&other.0).norm_sqr()
    }
}

/// Hermitian `d × d` operator.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator(CMatrix);

impl HermitianOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        let deviation = hermitian_deviation(&matrix);
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self(matrix))
    }

    pub(crate) fn from_matrix_unchecked(matrix: CMatrix) -> Self {
        Self(matrix)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(CMatrix::zeros(dim, dim))
    }

    pub fn identity(dim: usize) -> Self {
        Self(CMatrix::identity(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    /// Row-major entries, the layout used by the spectral kernels.
    pub fn row_major(&self) -> Vec<C64> {
        let d = self.dim();
        let mut out = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                out.push(self.0[(i, j)]);
            }
        }
        out
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self(&self.0 * C64::new(s, 0.0))
    }

    pub fn add(&self, other: &HermitianOperator) -> Result<Self> {
        check_dim(self.dim(), other.dim())?;
        Ok(Self(&self.0 + &other.0))
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    /// Spectral decomposition with ascending eigenvalues.
    pub fn eigh(&self) -> Eigh {
        Eigh::of(&self.row_major(), self.dim())
    }

    pub fn kron(&self, other: &HermitianOperator) -> Self {
        Self(self.0.kronecker(&other.0))
    }
}

impl fmt::Display for HermitianOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Unitary `d × d` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix(CMatrix);

impl UnitaryMatrix {
    pub fn identity(dim: usize) -> Self {
        Self(CMatrix::identity(dim, dim))
    }

    pub(crate) fn from_matrix_unchecked(matrix: CMatrix) -> Self {
        Self(matrix)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    /// `self · other` (apply `other` first).
    pub fn then_left(&self, other: &UnitaryMatrix) -> UnitaryMatrix {
        UnitaryMatrix(&self.0 * &other.0)
    }

    pub fn apply(&self, psi: &QuantumState) -> QuantumState {
        QuantumState(&self.0 * psi.amplitudes())
    }

    pub fn adjoint(&self) -> UnitaryMatrix {
        UnitaryMatrix(self.0.adjoint())
    }

    /// `max |(U†U - I)_ij|`.
    pub fn unitarity_defect(&self) -> f64 {
        let d = self.dim();
        max_abs(&(self.0.adjoint() * &self.0 - CMatrix::identity(d, d)))
    }
}

/// Measurement operator together with its extreme eigenpairs.
#[derive(Debug, Clone)]
pub struct Observable {
    operator: HermitianOperator,
    lambda_min: f64,
    lambda_max: f64,
    eigvec_min: QuantumState,
    eigvec_max: QuantumState,
}

impl Observable {
    pub fn new(operator: HermitianOperator) -> Self {
        let d = operator.dim();
        let e = operator.eigh();
        let column = |k: usize| {
            let v = CVector::from_iterator(d, (0..d).map(|i| e.vecs[i * d + k]));
            QuantumState(v.normalize())
        };
        Self {
            lambda_min: e.vals[0],
            lambda_max: e.vals[d - 1],
            eigvec_min: column(0),
            eigvec_max: column(d - 1),
            operator,
        }
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.operator
    }

    pub fn dim(&self) -> usize {
        self.operator.dim()
    }

    pub fn lambda_min(&self) -> f64 {
        self.lambda_min
    }

    pub fn lambda_max(&self) -> f64 {
        self.lambda_max
    }

    pub fn eigvec_min(&self) -> &QuantumState {
        &self.eigvec_min
    }

    pub fn eigvec_max(&self) -> &QuantumState {
        &self.eigvec_max
    }

    pub fn range(&self) -> (f64, f64) {
        (self.lambda_min, self.lambda_max)
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

pub(crate) fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub(crate) fn hermitian_deviation(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// `I ⊗ … ⊗ σ_axis ⊗ … ⊗ I` with the Pauli matrix on 1-based `site` of `n_qubits`.
///
/// Site 1 is the leftmost tensor factor (most significant bit of the
/// computational-basis index).
pub fn pauli_embed(axis: Pauli, site: usize, n_qubits: usize) -> Result<HermitianOperator> {
    if n_qubits == 0 || site == 0 || site > n_qubits {
        return Err(Error::SiteOutOfRange { site, n_qubits });
    }
    let mut acc = CMatrix::identity(1, 1);
    for k in 1..=n_qubits {
        let factor = if k == site {
            axis.matrix()
        } else {
            CMatrix::identity(2, 2)
        };
        acc = acc.kronecker(&factor);
    }
    Ok(HermitianOperator(acc))
}

/// `exp(-i s H)` through the spectral decomposition of `H`.
pub fn expm_hermitian(h: &HermitianOperator, s: f64) -> Result<UnitaryMatrix> {
    let deviation = hermitian_deviation(h.matrix());
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let d = h.dim();
    let e = h.eigh();
    if e.vals.iter().any(|v| !v.is_finite()) {
        return Err(Error::Eigen("non-finite eigenvalue".into()));
    }
    Ok(UnitaryMatrix(CMatrix::from_row_slice(
        d,
        d,
        &e.exp_matrix(s),
    )))
}

/// Exponential of a general complex matrix by scaling and squaring with a
/// Taylor core. Used for the non-normal block matrices of
/// [`expm_with_derivative`].
pub fn expm_general(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    let norm1 = (0..n)
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let mut squarings = 0u32;
    if norm1 > 0.25 {
        squarings = (norm1 / 0.25).log2().ceil() as u32;
    }
    let scaled = a / C64::new(2f64.powi(squarings as i32), 0.0);
    // ‖scaled‖ ≤ 1/4: 20 terms put the truncation error below 1e-30.
    let mut result = CMatrix::identity(n, n);
    let mut term = CMatrix::identity(n, n);
    for k in 1..=20 {
        term = &term * &scaled / C64::new(k as f64, 0.0);
        result += &term;
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// `U = exp(-i s H)` and `dU = ∂/∂ε exp(-i s (H + ε V))` at `ε = 0`, computed
/// from the top-right block of `exp([[-isH, -isV], [0, -isH]])`.
pub fn expm_with_derivative(
    h: &HermitianOperator,
    v: &HermitianOperator,
    s: f64,
) -> Result<(UnitaryMatrix, CMatrix)> {
    check_dim(h.dim(), v.dim())?;
    let d = h.dim();
    let factor = C64::new(0.0, -s);
    let mut block = CMatrix::zeros(2 * d, 2 * d);
    let a = h.matrix() * factor;
    let b = v.matrix() * factor;
    block.view_mut((0, 0), (d, d)).copy_from(&a);
    block.view_mut((d, d), (d, d)).copy_from(&a);
    block.view_mut((0, d), (d, d)).copy_from(&b);
    let e = expm_general(&block);
    let u = e.view((0, 0), (d, d)).into_owned();
    let du = e.view((0, d), (d, d)).into_owned();
    Ok((UnitaryMatrix(u), du))
}

/// The same directional derivative as [`expm_with_derivative`], assembled in
/// the eigenbasis of `H`: `dU = W [(W† (-isV) W) ∘ K] W†` with the
/// divided-difference kernel `K` of `λ ↦ e^{-isλ}`.
pub fn expm_derivative_spectral(
    h: &HermitianOperator,
    v: &HermitianOperator,
    s: f64,
) -> Result<CMatrix> {
    check_dim(h.dim(), v.dim())?;
    let d = h.dim();
    let e = h.eigh();
    let w = CMatrix::from_row_slice(d, d, &e.vecs);
    let mut rotated = w.adjoint() * v.matrix() * &w * C64::new(0.0, -s);
    for a in 0..d {
        for b in 0..d {
            rotated[(a, b)] *= exp_divided_difference(s, e.vals[a], e.vals[b]);
        }
    }
    Ok(&w * rotated * w.adjoint())
}

/// `⟨ψ|M|ψ⟩`.
pub fn expectation(m: &Observable, psi: &QuantumState) -> Result<f64> {
    expectation_of(m.operator(), psi)
}

pub fn expectation_of(op: &HermitianOperator, psi: &QuantumState) -> Result<f64> {
    check_dim(op.dim(), psi.dim())?;
    let v = psi.amplitudes();
    Ok(v.dotc(&(op.matrix() * v)).re)
}

/// Superposition of the extreme eigenvectors of `M` whose expectation is `y`.
pub fn target_state(m: &Observable, y: f64) -> Result<QuantumState> {
    let (lo, hi) = m.range();
    if !(lo..=hi).contains(&y) {
        return Err(Error::TargetOutOfRange {
            value: y,
            min: lo,
            max: hi,
        });
    }
    if hi - lo <= f64::EPSILON * hi.abs().max(lo.abs()).max(1.0) {
        return Ok(m.eigvec_max().clone());
    }
    let w_min = ((y - hi) / (lo - hi)).max(0.0).sqrt();
    let w_max = ((y - lo) / (hi - lo)).max(0.0).sqrt();
    let v = m.eigvec_min().amplitudes() * C64::new(w_min, 0.0)
        + m.eigvec_max().amplitudes() * C64::new(w_max, 0.0);
    Ok(QuantumState(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn herm(m: CMatrix) -> HermitianOperator {
        HermitianOperator::new(m).unwrap()
    }

    #[test]
    fn pauli_embed_examples() {
        let z = pauli_embed(Pauli::Z, 1, 1).unwrap();
        assert_eq!(z.matrix(), &Pauli::Z.matrix());

        let x2 = pauli_embed(Pauli::X, 2, 2).unwrap();
        let one = c(1.0, 0.0);
        for (i, row) in x2.matrix().row_iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let expected = matches!((i, j), (0, 1) | (1, 0) | (2, 3) | (3, 2));
                assert_eq!(*v, if expected { one } else { c(0.0, 0.0) });
            }
        }

        let y1 = pauli_embed(Pauli::Y, 1, 2).unwrap();
        let sq = y1.matrix() * y1.matrix();
        assert_eq!(sq, CMatrix::identity(4, 4));
    }

    #[test]
    fn pauli_embed_rejects_bad_site() {
        assert!(matches!(
            pauli_embed(Pauli::X, 3, 2),
            Err(Error::SiteOutOfRange { .. })
        ));
        assert!(pauli_embed(Pauli::X, 0, 2).is_err());
    }

    #[test]
    fn pauli_algebra_exact() {
        // anticommute on the same site, commute across sites; entries are exact
        for n in 1..=4 {
            for s1 in 1..=n {
                for s2 in 1..=n {
                    for a in [Pauli::X, Pauli::Y, Pauli::Z] {
                        for b in [Pauli::X, Pauli::Y, Pauli::Z] {
                            let pa = pauli_embed(a, s1, n).unwrap();
                            let pb = pauli_embed(b, s2, n).unwrap();
                            let ab = pa.matrix() * pb.matrix();
                            let ba = pb.matrix() * pa.matrix();
                            if s1 == s2 && a != b {
                                assert_eq!(ab, -ba);
                            } else {
                                assert_eq!(ab, ba);
                            }
                        }
                    }
                    let p = pauli_embed(Pauli::Y, s1, n).unwrap();
                    assert_eq!(p.trace(), 0.0);
                }
            }
        }
    }

    #[test]
    fn expm_examples() {
        let x = herm(Pauli::X.matrix());
        let u = expm_hermitian(&x, PI / 2.0).unwrap();
        let expected = Pauli::X.matrix() * c(0.0, -1.0);
        assert!(max_abs(&(u.matrix() - expected)) < 1e-14);

        let u0 = expm_hermitian(&x, 0.0).unwrap();
        assert!(max_abs(&(u0.matrix() - CMatrix::identity(2, 2))) < 1e-15);

        let z = herm(Pauli::Z.matrix());
        let uz = expm_hermitian(&z, PI).unwrap();
        assert!(max_abs(&(uz.matrix() + CMatrix::identity(2, 2))) < 1e-14);
    }

    #[test]
    fn expm_rejects_non_hermitian() {
        let m =
            CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let bad = HermitianOperator::from_matrix_unchecked(m);
        assert!(matches!(
            expm_hermitian(&bad, 1.0),
            Err(Error::NotHermitian { .. })
        ));
        assert!(HermitianOperator::new(bad.into_matrix()).is_err());
    }

    #[test]
    fn derivative_commuting_direction() {
        let z = herm(Pauli::Z.matrix());
        let s = 0.37;
        let (u, du) = expm_with_derivative(&z, &z, s).unwrap();
        let expected = Pauli::Z.matrix() * c(0.0, -s) * u.matrix();
        assert!(max_abs(&(du - expected)) < 1e-14);
    }

    #[test]
    fn derivative_zero_direction() {
        let h = herm(Pauli::X.matrix() * c(0.3, 0.0) + Pauli::Z.matrix());
        let (_, du) = expm_with_derivative(&h, &HermitianOperator::zeros(2), 1.3).unwrap();
        assert!(max_abs(&du) == 0.0);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let z = herm(Pauli::Z.matrix());
        let x = herm(Pauli::X.matrix());
        let s = 0.1;
        let (_, du) = expm_with_derivative(&z, &x, s).unwrap();
        let eps = 1e-6;
        let plus = expm_hermitian(&z.add(&x.scaled(eps)).unwrap(), s).unwrap();
        let minus = expm_hermitian(&z.add(&x.scaled(-eps)).unwrap(), s).unwrap();
        let fd = (plus.matrix() - minus.matrix()) / c(2.0 * eps, 0.0);
        assert!(max_abs(&(du - fd)) < 1e-8);
    }

    #[test]
    fn derivative_dimension_mismatch() {
        let z = herm(Pauli::Z.matrix());
        let big = HermitianOperator::identity(4);
        assert!(matches!(
            expm_with_derivative(&z, &big, 1.0),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn expectation_examples() {
        let m = Observable::new(herm(Pauli::Z.matrix()));
        assert_eq!(expectation(&m, &QuantumState::zero(1)).unwrap(), 1.0);
        let plus =
            QuantumState::normalized(CVector::from_vec(vec![c(1.0, 0.0), c(1.0, 0.0)])).unwrap();
        assert!(expectation(&m, &plus).unwrap().abs() < 1e-15);

        let z1 = Observable::new(pauli_embed(Pauli::Z, 1, 2).unwrap());
        // |10⟩ is basis index 2
        assert_eq!(expectation(&z1, &QuantumState::basis(4, 2)).unwrap(), -1.0);
        assert!(expectation(&z1, &QuantumState::zero(1)).is_err());
    }

    #[test]
    fn target_state_examples() {
        let m = Observable::new(herm(Pauli::Z.matrix()));
        let top = target_state(&m, 1.0).unwrap();
        assert!(top.fidelity(&QuantumState::basis(2, 0)) > 1.0 - 1e-15);

        let mid = target_state(&m, 0.0).unwrap();
        let a = mid.amplitudes();
        assert!((a[0].norm_sqr() - 0.5).abs() < 1e-15);
        assert!((a[1].norm_sqr() - 0.5).abs() < 1e-15);

        let s = target_state(&m, 0.5).unwrap();
        assert!((s.amplitudes()[0].norm_sqr() - 0.75).abs() < 1e-15);
        assert!((s.amplitudes()[1].norm_sqr() - 0.25).abs() < 1e-15);
        assert!((expectation(&m, &s).unwrap() - 0.5).abs() < 1e-15);

        assert!(matches!(
            target_state(&m, 1.5),
            Err(Error::TargetOutOfRange { .. })
        ));
    }
}
