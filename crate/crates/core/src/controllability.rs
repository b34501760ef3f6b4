//! Numerical Lie-closure engine for controllability checks.
//!
//! Two questions are answered with the same breadth-first closure:
//!
//! * whether the control Hamiltonians alone generate `su(d)`, and
//! * whether `x_j ⊗ iD_j` and `1 ⊗ iH_k` generate every
//!   `monomial ⊗ su(d)` up to a total degree cutoff.
//!
//! The second computation runs in the quotient of the polynomial-coefficient
//! algebra by the ideal of monomials above the cutoff, so a `full` verdict
//! certifies spanning only up to that degree.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{max_abs, CMatrix, HermitianOperator, I};
use crate::model::PulseModel;

/// Default residual threshold for admitting a new basis direction.
pub const DEFAULT_TOL: f64 = 1e-9;
/// Default total-degree cutoff of the ensemble check.
pub const DEFAULT_DEGREE_CUTOFF: usize = 4;
/// Residual below which a `monomial ⊗ direction` pair counts as reached.
const REACH_TOL: f64 = 1e-6;

/// Traceless skew-Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct LieElement {
    matrix: CMatrix,
}

impl LieElement {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        let deviation = skew_deviation(&matrix);
        if deviation > 1e-12 {
            return Err(Error::NotSkewHermitian { deviation });
        }
        Ok(Self { matrix })
    }

    /// `i H` with the trace removed; the identity component of `H` generates
    /// only a global phase.
    pub fn from_hermitian(h: &HermitianOperator) -> Self {
        Self {
            matrix: traceless(h.matrix() * I),
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

fn traceless(mut m: CMatrix) -> CMatrix {
    let d = m.nrows();
    let shift = m.trace() / C64::new(d as f64, 0.0);
    for i in 0..d {
        m[(i, i)] -= shift;
    }
    m
}

fn skew_deviation(m: &CMatrix) -> f64 {
    let d = m.nrows();
    let skew = max_abs(&(m + m.adjoint()));
    let trace = m.trace().norm() / (d as f64).max(1.0);
    skew.max(trace)
}

/// Multi-index `(r_1, …, r_m)` of a monomial `x_1^{r_1} ⋯ x_m^{r_m}`.
pub type Monomial = Vec<u32>;

/// Polynomial-coefficient Lie element `Σ_r x^r ⊗ A_r`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyLieElement {
    pub terms: BTreeMap<Monomial, CMatrix>,
}

impl PolyLieElement {
    pub fn degree(&self) -> usize {
        self.terms
            .keys()
            .map(|r| r.iter().sum::<u32>() as usize)
            .max()
            .unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Full,
    Deficient,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Full => "full",
            Verdict::Deficient => "deficient",
        })
    }
}

/// Orthonormal basis of a closure.
#[derive(Debug, Clone)]
pub enum ClosureBasis {
    Plain(Vec<LieElement>),
    Ensemble(Vec<PolyLieElement>),
}

/// Reached fraction of `monomial ⊗ su(d)` for one total degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeCoverage {
    pub degree: usize,
    pub reached: usize,
    pub total: usize,
}

/// Result of a closure run.
#[derive(Debug, Clone, Serialize)]
pub struct ClosureReport {
    #[serde(skip)]
    pub basis: ClosureBasis,
    pub dimension: usize,
    pub ambient_dimension: usize,
    pub verdict: Verdict,
    /// Unreached `monomial ⊗ direction` pairs, e.g. `"x^2 ⊗ Y"`.
    pub missing: Vec<String>,
    /// Reached pairs, in the same notation.
    #[serde(skip)]
    pub reached: Vec<(Monomial, String)>,
    pub generations: usize,
    /// Total degree cutoff; `None` for the plain control closure.
    pub degree_cutoff: Option<usize>,
    pub coverage: Vec<DegreeCoverage>,
    pub summary: String,
}

impl ClosureReport {
    pub fn is_full(&self) -> bool {
        self.verdict == Verdict::Full
    }

    pub fn plain_basis(&self) -> Option<&[LieElement]> {
        match &self.basis {
            ClosureBasis::Plain(b) => Some(b),
            ClosureBasis::Ensemble(_) => None,
        }
    }

    pub fn ensemble_basis(&self) -> Option<&[PolyLieElement]> {
        match &self.basis {
            ClosureBasis::Ensemble(b) => Some(b),
            ClosureBasis::Plain(_) => None,
        }
    }

    /// Whether `monomial ⊗ direction` lies in the closure.
    pub fn reaches(&self, monomial: &[u32], direction: &str) -> bool {
        self.reached
            .iter()
            .any(|(m, d)| m.as_slice() == monomial && d == direction)
    }
}

/// Generalized Gell-Mann directions of `su(d)` with labels.
///
/// Off-diagonal pairs `α < β` give `X_{αβ} = i(|α⟩⟨β| + |β⟩⟨α|)` and
/// `Y_{αβ} = |α⟩⟨β| - |β⟩⟨α|`; the `d - 1` diagonal directions are
/// `i √(2/(l(l+1))) (Σ_{k<l} |k⟩⟨k| - l |l⟩⟨l|)`. All have Hilbert–Schmidt
/// norm √2, and for `d = 2` they are exactly `iσx, iσy, iσz`.
pub fn su_basis_labeled(d: usize) -> Result<Vec<(String, LieElement)>> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!(
            "su(d) needs d >= 2, got {d}"
        )));
    }
    let one = C64::new(1.0, 0.0);
    let mut out = Vec::with_capacity(d * d - 1);
    for a in 0..d {
        for b in a + 1..d {
            let mut x = CMatrix::zeros(d, d);
            x[(a, b)] = I;
            x[(b, a)] = I;
            let mut y = CMatrix::zeros(d, d);
            y[(a, b)] = one;
            y[(b, a)] = -one;
            let (lx, ly) = if d == 2 {
                ("X".to_string(), "Y".to_string())
            } else {
                (
                    format!("X({},{})", a + 1, b + 1),
                    format!("Y({},{})", a + 1, b + 1),
                )
            };
            out.push((lx, LieElement { matrix: x }));
            out.push((ly, LieElement { matrix: y }));
        }
    }
    for l in 1..d {
        let scale = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut z = CMatrix::zeros(d, d);
        for k in 0..l {
            z[(k, k)] = I * scale;
        }
        z[(l, l)] = I * (-(l as f64) * scale);
        let label = if d == 2 {
            "Z".to_string()
        } else {
            format!("Z({})", l)
        };
        out.push((label, LieElement { matrix: z }));
    }
    Ok(out)
}

/// The `d² - 1` orthogonal directions of [`su_basis_labeled`].
pub fn su_basis(d: usize) -> Result<Vec<LieElement>> {
    Ok(su_basis_labeled(d)?.into_iter().map(|(_, e)| e).collect())
}

/// `Re tr(A† B)`.
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Monomials of total degree `<= cutoff` in `m` variables, graded then
/// lexicographically descending by exponent of `x_1`.
fn monomials(m: usize, cutoff: usize) -> Vec<Monomial> {
    fn rec(m: usize, remaining: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() == m - 1 {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for r in (0..=remaining).rev() {
            prefix.push(r);
            rec(m, remaining - r, prefix, out);
            prefix.pop();
        }
    }
    if m == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for deg in 0..=cutoff as u32 {
        rec(m, deg, &mut Vec::new(), &mut out);
    }
    out
}

pub fn monomial_label(r: &[u32]) -> String {
    let parts: Vec<String> = r
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(j, &e)| {
            let var = if r.len() == 1 {
                "x".to_string()
            } else {
                format!("x{}", j + 1)
            };
            if e == 1 {
                var
            } else {
                format!("{var}^{e}")
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Truncated polynomial-coefficient algebra with a dense element layout:
/// one `d × d` block per monomial.
struct TruncatedAlgebra {
    d: usize,
    monos: Vec<Monomial>,
    index: HashMap<Monomial, usize>,
    cutoff: usize,
}

type Element = Vec<CMatrix>;

impl TruncatedAlgebra {
    fn new(d: usize, n_vars: usize, cutoff: usize) -> Self {
        let monos = monomials(n_vars, cutoff);
        let index = monos
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        Self {
            d,
            monos,
            index,
            cutoff,
        }
    }

    fn ambient(&self) -> usize {
        self.monos.len() * (self.d * self.d - 1)
    }

    fn zero(&self) -> Element {
        vec![CMatrix::zeros(self.d, self.d); self.monos.len()]
    }

    fn single(&self, mono: &[u32], m: &CMatrix) -> Element {
        let mut e = self.zero();
        e[self.index[mono]] = m.clone();
        e
    }

    fn inner(&self, a: &Element, b: &Element) -> f64 {
        a.iter().zip(b).map(|(x, y)| hs_inner(x, y)).sum()
    }

    fn norm(&self, a: &Element) -> f64 {
        self.inner(a, a).sqrt()
    }

    fn axpy(&self, alpha: f64, x: &Element, y: &mut Element) {
        let s = C64::new(alpha, 0.0);
        for (yi, xi) in y.iter_mut().zip(x) {
            *yi += xi * s;
        }
    }

    fn bracket(&self, a: &Element, b: &Element) -> Element {
        let mut out = self.zero();
        for (i, ma) in self.monos.iter().enumerate() {
            if max_abs(&a[i]) == 0.0 {
                continue;
            }
            for (j, mb) in self.monos.iter().enumerate() {
                if max_abs(&b[j]) == 0.0 {
                    continue;
                }
                let sum: Monomial = ma.iter().zip(mb).map(|(p, q)| p + q).collect();
                if sum.iter().sum::<u32>() as usize > self.cutoff {
                    continue;
                }
                out[self.index[&sum]] += commutator(&a[i], &b[j]);
            }
        }
        out
    }

    /// Residual of `v` after projection onto the orthonormal `basis`
    /// (two Gram–Schmidt passes).
    fn residual(&self, basis: &[Element], mut v: Element) -> Element {
        for _ in 0..2 {
            for b in basis {
                let c = self.inner(b, &v);
                if c != 0.0 {
                    self.axpy(-c, b, &mut v);
                }
            }
        }
        v
    }
}

struct ClosureRun {
    basis: Vec<Element>,
    generations: usize,
}

fn run_closure(alg: &TruncatedAlgebra, generators: Vec<Element>, tol: f64) -> ClosureRun {
    let ambient = alg.ambient();
    let mut basis: Vec<Element> = Vec::new();
    let admit = |basis: &mut Vec<Element>, v: Element| -> bool {
        if basis.len() >= ambient {
            return false;
        }
        let r = alg.residual(basis, v);
        let n = alg.norm(&r);
        if n > tol {
            let mut unit = r;
            for m in unit.iter_mut() {
                *m /= C64::new(n, 0.0);
            }
            basis.push(unit);
            true
        } else {
            false
        }
    };
    let mut frontier = Vec::new();
    for g in generators {
        if admit(&mut basis, g) {
            frontier.push(basis.len() - 1);
        }
    }
    let mut generations = 0;
    while !frontier.is_empty() && basis.len() < ambient {
        let mut next = Vec::new();
        for &i in &frontier {
            let mut j = 0;
            while j < basis.len() {
                if j != i {
                    let c = alg.bracket(&basis[i], &basis[j]);
                    if admit(&mut basis, c) {
                        next.push(basis.len() - 1);
                    }
                }
                j += 1;
            }
        }
        generations += 1;
        frontier = next;
    }
    ClosureRun { basis, generations }
}

fn coverage_and_reach(
    alg: &TruncatedAlgebra,
    basis: &[Element],
) -> (Vec<(Monomial, String)>, Vec<String>, Vec<DegreeCoverage>) {
    let directions = su_basis_labeled(alg.d).expect("d >= 2");
    let mut reached = Vec::new();
    let mut missing = Vec::new();
    let mut coverage: Vec<DegreeCoverage> = (0..=alg.cutoff)
        .map(|degree| DegreeCoverage {
            degree,
            reached: 0,
            total: 0,
        })
        .collect();
    for mono in &alg.monos {
        let deg = mono.iter().sum::<u32>() as usize;
        for (label, dir) in &directions {
            let unit = dir.matrix() / C64::new(2f64.sqrt(), 0.0);
            let r = alg.residual(basis, alg.single(mono, &unit));
            coverage[deg].total += 1;
            if alg.norm(&r) < REACH_TOL {
                coverage[deg].reached += 1;
                reached.push((mono.clone(), label.clone()));
            } else {
                missing.push(format!("{} ⊗ {}", monomial_label(mono), label));
            }
        }
    }
    (reached, missing, coverage)
}

fn check_generators(gens: &[LieElement]) -> Result<usize> {
    let d = gens.first().ok_or(Error::Empty("generator list"))?.dim();
    for g in gens {
        if g.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: g.dim(),
            });
        }
        let deviation = skew_deviation(g.matrix());
        if deviation > 1e-12 {
            return Err(Error::NotSkewHermitian { deviation });
        }
    }
    if d < 2 {
        return Err(Error::InvalidParameter(
            "closure needs dimension >= 2".into(),
        ));
    }
    Ok(d)
}

/// Lie algebra generated by `generators` inside `su(d)`.
pub fn lie_closure(generators: &[LieElement], tol: f64) -> Result<ClosureReport> {
    let d = check_generators(generators)?;
    let alg = TruncatedAlgebra::new(d, 0, 0);
    let gens = generators
        .iter()
        .map(|g| vec![g.matrix().clone()])
        .collect();
    let run = run_closure(&alg, gens, tol);
    let (reached, missing, coverage) = coverage_and_reach(&alg, &run.basis);
    let dimension = run.basis.len();
    let ambient = alg.ambient();
    let verdict = if dimension == ambient {
        Verdict::Full
    } else {
        Verdict::Deficient
    };
    let summary = match verdict {
        Verdict::Full => format!("controls generate su({d}) (dimension {dimension})"),
        Verdict::Deficient => format!(
            "controls generate a {dimension}-dimensional subalgebra of su({d}) (dimension {ambient})"
        ),
    };
    Ok(ClosureReport {
        basis: ClosureBasis::Plain(
            run.basis
                .into_iter()
                .map(|mut e| LieElement {
                    matrix: e.remove(0),
                })
                .collect(),
        ),
        dimension,
        ambient_dimension: ambient,
        verdict,
        missing,
        reached,
        generations: run.generations,
        degree_cutoff: None,
        coverage,
        summary,
    })
}

/// Degree-truncated closure of `{x_j ⊗ iD_j} ∪ {1 ⊗ iH_k}`.
///
/// `encoders` pairs each encoding Hamiltonian with the 0-based index of the
/// input variable it multiplies.
pub fn ensemble_closure(
    encoders: &[(HermitianOperator, usize)],
    controls: &[HermitianOperator],
    degree_cutoff: usize,
    tol: f64,
) -> Result<ClosureReport> {
    if degree_cutoff < 1 {
        return Err(Error::InvalidParameter("degree cutoff must be >= 1".into()));
    }
    let lifted: Vec<LieElement> = encoders
        .iter()
        .map(|(h, _)| h)
        .chain(controls.iter())
        .map(LieElement::from_hermitian)
        .collect();
    let d = check_generators(&lifted)?;
    let n_vars = encoders.iter().map(|(_, j)| j + 1).max().unwrap_or(0);
    let alg = TruncatedAlgebra::new(d, n_vars, degree_cutoff);
    let mut gens = Vec::with_capacity(lifted.len());
    for ((_, var), g) in encoders.iter().zip(&lifted) {
        let mut mono = vec![0u32; n_vars];
        mono[*var] = 1;
        gens.push(alg.single(&mono, g.matrix()));
    }
    for g in &lifted[encoders.len()..] {
        gens.push(alg.single(&vec![0u32; n_vars], g.matrix()));
    }
    let run = run_closure(&alg, gens, tol);
    let (reached, missing, coverage) = coverage_and_reach(&alg, &run.basis);
    let dimension = run.basis.len();
    let ambient = alg.ambient();
    let verdict = if dimension == ambient {
        Verdict::Full
    } else {
        Verdict::Deficient
    };
    let summary = match verdict {
        Verdict::Full => format!(
            "ensemble controllable up to degree {degree_cutoff}: every monomial ⊗ su({d}) of total degree <= {degree_cutoff} is reached"
        ),
        Verdict::Deficient => format!(
            "not ensemble controllable up to degree {degree_cutoff}: {} of {ambient} monomial ⊗ su({d}) directions unreached",
            ambient - dimension
        ),
    };
    let basis = run
        .basis
        .into_iter()
        .map(|e| PolyLieElement {
            terms: alg
                .monos
                .iter()
                .cloned()
                .zip(e)
                .filter(|(_, m)| max_abs(m) > 0.0)
                .collect(),
        })
        .collect();
    Ok(ClosureReport {
        basis: ClosureBasis::Ensemble(basis),
        dimension,
        ambient_dimension: ambient,
        verdict,
        missing,
        reached,
        generations: run.generations,
        degree_cutoff: Some(degree_cutoff),
        coverage,
        summary,
    })
}

/// Plain and ensemble closure verdicts for one model.
#[derive(Debug, Clone, Serialize)]
pub struct ModelCheck {
    pub controls: ClosureReport,
    pub ensemble: ClosureReport,
    pub note: String,
}

impl ModelCheck {
    pub fn is_full(&self) -> bool {
        self.controls.is_full() && self.ensemble.is_full()
    }
}

/// Run both closure tests on a model at the default tolerance.
pub fn check_model(model: &PulseModel, degree_cutoff: usize) -> Result<ModelCheck> {
    let controls: Vec<LieElement> = model
        .controls()
        .iter()
        .map(LieElement::from_hermitian)
        .collect();
    let plain = if controls.is_empty() {
        lie_closure(
            &[LieElement::new(CMatrix::zeros(model.dim(), model.dim()))?],
            DEFAULT_TOL,
        )?
    } else {
        lie_closure(&controls, DEFAULT_TOL)?
    };
    let encoders: Vec<(HermitianOperator, usize)> = model
        .encoders()
        .iter()
        .cloned()
        .enumerate()
        .map(|(j, h)| (h, j))
        .collect();
    let ensemble = ensemble_closure(&encoders, model.controls(), degree_cutoff, DEFAULT_TOL)?;
    Ok(ModelCheck {
        controls: plain,
        ensemble,
        note: "both conditions are sufficient for expressivity; a deficient verdict does not show that the model is inexpressive for a particular observable and initial state".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{pauli_embed, Pauli};
    use crate::model::{build_bivariate_model, build_circular_model, build_single_qubit_model};

    fn ipauli(p: Pauli) -> LieElement {
        LieElement::from_hermitian(&pauli_embed(p, 1, 1).unwrap())
    }

    #[test]
    fn su_basis_sizes_and_orthogonality() {
        for d in 2..=5 {
            let b = su_basis(d).unwrap();
            assert_eq!(b.len(), d * d - 1);
            for (i, a) in b.iter().enumerate() {
                assert!(skew_deviation(a.matrix()) < 1e-15);
                assert!((hs_inner(a.matrix(), a.matrix()) - 2.0).abs() < 1e-12);
                for c in &b[i + 1..] {
                    assert!(hs_inner(a.matrix(), c.matrix()).abs() < 1e-14);
                }
            }
        }
        let b2 = su_basis(2).unwrap();
        assert_eq!(b2[0], ipauli(Pauli::X));
        assert_eq!(b2[1], ipauli(Pauli::Y));
        assert_eq!(b2[2], ipauli(Pauli::Z));
        assert!(su_basis(1).is_err());
    }

    #[test]
    fn pauli_pair_closes_to_su2() {
        let r = lie_closure(&[ipauli(Pauli::X), ipauli(Pauli::Y)], DEFAULT_TOL).unwrap();
        assert_eq!(r.dimension, 3);
        assert!(r.is_full());
        assert_eq!(r.generations, 1);
    }

    #[test]
    fn single_generator_is_abelian() {
        let r = lie_closure(&[ipauli(Pauli::Z)], DEFAULT_TOL).unwrap();
        assert_eq!(r.dimension, 1);
        assert_eq!(r.verdict, Verdict::Deficient);
        assert_eq!(r.missing, vec!["1 ⊗ X", "1 ⊗ Y"]);
    }

    #[test]
    fn rejects_bad_generators() {
        let herm = pauli_embed(Pauli::X, 1, 1).unwrap().into_matrix();
        assert!(LieElement::new(herm).is_err());
        assert!(lie_closure(&[], DEFAULT_TOL).is_err());
        let e = LieElement::from_hermitian(&pauli_embed(Pauli::X, 1, 2).unwrap());
        assert!(lie_closure(&[ipauli(Pauli::X), e], DEFAULT_TOL).is_err());
    }

    #[test]
    fn parity_obstruction() {
        let z = pauli_embed(Pauli::Z, 1, 1).unwrap();
        let x = pauli_embed(Pauli::X, 1, 1).unwrap();
        let y = pauli_embed(Pauli::Y, 1, 1).unwrap();
        let full = ensemble_closure(&[(z.clone(), 0)], &[x.clone(), y], 3, DEFAULT_TOL).unwrap();
        assert!(full.is_full());
        assert_eq!(full.dimension, 12);

        let r = ensemble_closure(&[(z, 0)], &[x], 3, DEFAULT_TOL).unwrap();
        assert!(!r.is_full());
        for k in 0..=3u32 {
            let even = k % 2 == 0;
            assert_eq!(r.reaches(&[k], "X"), even);
            assert_eq!(r.reaches(&[k], "Y"), !even);
            assert_eq!(r.reaches(&[k], "Z"), !even);
        }
        assert!(
            ensemble_closure(&[], &[pauli_embed(Pauli::X, 1, 1).unwrap()], 0, DEFAULT_TOL).is_err()
        );
    }

    #[test]
    fn bivariate_model_full_at_degree_two() {
        let m = build_bivariate_model();
        let check = check_model(&m, 2).unwrap();
        assert!(check.ensemble.is_full(), "{}", check.ensemble.summary);
        assert_eq!(check.ensemble.ambient_dimension, 6 * 3);
    }

    #[test]
    fn model_checks() {
        let single = check_model(&build_single_qubit_model(), 4).unwrap();
        assert!(single.is_full());
        assert!(single.ensemble.summary.contains("up to degree 4"));

        let x_only = build_single_qubit_model().without_control(1).unwrap();
        let c = check_model(&x_only, 4).unwrap();
        assert_eq!(c.controls.dimension, 1);
        assert!(!c.controls.is_full());
        assert!(!c.ensemble.is_full());

        let circ = check_model(&build_circular_model(2).unwrap(), 2).unwrap();
        assert_eq!(circ.controls.dimension, 15);
        assert!(circ.controls.is_full());
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(monomials(1, 3), vec![vec![0], vec![1], vec![2], vec![3]]);
        assert_eq!(monomials(2, 2).len(), 6);
        assert_eq!(monomials(3, 2).len(), 10);
        assert_eq!(monomial_label(&[2, 0]), "x1^2");
        assert_eq!(monomial_label(&[1, 1]), "x1*x2");
        assert_eq!(monomial_label(&[3]), "x^3");
        assert_eq!(monomial_label(&[0]), "1");
    }
}
