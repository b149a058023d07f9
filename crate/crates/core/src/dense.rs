//! Dense `2^n x 2^n` realization of Pauli operators, pulse schedules and the
//! adjoint action on the gamma basis.
//!
//! Matrix indices put qubit 0 in the most significant bit, so the matrix of
//! `A ⊗ B` is the Kronecker product `kron(A, B)`.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::generators::{build_chirality, build_e, GeneratorRef};
use crate::operator::PauliSum;
use crate::pauli::{check_qubits, PauliString, PauliWord, Phase};

/// Largest chain for which matrices are built.
pub const N_MAX_MATRIX: usize = 12;
/// Largest chain for schedules, rotation extraction and membership tests.
pub const N_MAX_PIPELINE: usize = 8;
pub const DEFAULT_MEMBERSHIP_TOLERANCE: f64 = 1e-8;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn check_limit(n: usize, limit: usize, what: &str) -> Result<()> {
    check_qubits(n)?;
    if n > limit {
        return Err(Error::Resource(format!(
            "{what} supports at most {limit} qubits, got {n}"
        )));
    }
    Ok(())
}

/// Qubit-indexed mask to matrix-index mask (qubit `q` is bit `n - 1 - q`).
fn index_mask(mask: u64, n: usize) -> usize {
    (mask.reverse_bits() >> (64 - n)) as usize
}

/// Sparse action of a Pauli string: column `c` maps to row `c ^ x` with value
/// `base * (-1)^popcount(c & z)`.
#[derive(Clone, Copy)]
struct WordAction {
    x: usize,
    z: usize,
    base: Complex64,
}

impl WordAction {
    fn new(p: &PauliString) -> Self {
        let n = p.n();
        let w = p.word();
        let y_phase = Phase::from_exponent(w.y_count());
        WordAction {
            x: index_mask(w.x_mask(), n),
            z: index_mask(w.z_mask(), n),
            base: (p.phase() * y_phase).to_complex(),
        }
    }

    #[inline]
    fn entry(&self, col: usize) -> (usize, Complex64) {
        let v = if (col & self.z).count_ones() % 2 == 1 {
            -self.base
        } else {
            self.base
        };
        (col ^ self.x, v)
    }

    /// `P * m` without a full matrix product.
    fn apply_left(&self, m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let side = m.nrows();
        let mut out = DMatrix::from_element(side, m.ncols(), ZERO);
        for c in 0..side {
            let (r, v) = self.entry(c);
            for j in 0..m.ncols() {
                out[(r, j)] = v * m[(c, j)];
            }
        }
        out
    }

    /// `tr(P m)`.
    fn trace_with(&self, m: &DMatrix<Complex64>) -> Complex64 {
        (0..m.nrows())
            .map(|c| {
                let (r, v) = self.entry(c);
                v * m[(c, r)]
            })
            .sum()
    }
}

/// Complex `2^n x 2^n` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: DMatrix<Complex64>,
}

impl DenseMatrix {
    pub fn identity(n: usize) -> Result<Self> {
        check_limit(n, N_MAX_MATRIX, "matrix construction")?;
        let side = 1 << n;
        Ok(DenseMatrix {
            n,
            data: DMatrix::identity(side, side),
        })
    }

    /// Wraps a square matrix whose side is a power of two (at least 2).
    pub fn from_matrix(data: DMatrix<Complex64>) -> Result<Self> {
        let n = qubits_for_side(data.nrows(), data.ncols())?;
        Ok(DenseMatrix { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn side(&self) -> usize {
        self.data.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.data
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[(row, col)]
    }

    pub fn mul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(DenseMatrix {
            n: self.n,
            data: &self.data * &other.data,
        })
    }

    pub fn adjoint(&self) -> DenseMatrix {
        DenseMatrix {
            n: self.n,
            data: self.data.adjoint(),
        }
    }

    pub fn scale(&self, c: Complex64) -> DenseMatrix {
        DenseMatrix {
            n: self.n,
            data: &self.data * c,
        }
    }

    /// Largest entrywise modulus of `self - other`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        if self.data.shape() != other.data.shape() {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |U^dag U - I|`.
    pub fn unitarity_residual(&self) -> f64 {
        let product = self.data.adjoint() * &self.data;
        let side = self.side();
        let mut worst = 0.0f64;
        for r in 0..side {
            for c in 0..side {
                let target = if r == c { ONE } else { ZERO };
                worst = worst.max((product[(r, c)] - target).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let side = self.side();
        (0..side).all(|r| {
            (0..side).all(|c| (self.data[(r, c)] - self.data[(c, r)].conj()).norm() <= tol)
        })
    }

    fn require_unitary(&self, tol: f64) -> Result<()> {
        let residual = self.unitarity_residual();
        if residual > tol {
            Err(Error::NotUnitary(residual))
        } else {
            Ok(())
        }
    }
}

fn qubits_for_side(rows: usize, cols: usize) -> Result<usize> {
    if rows != cols || rows < 2 || !rows.is_power_of_two() {
        return Err(Error::Precondition(format!(
            "expected a square matrix with power-of-two side, got {rows}x{cols}"
        )));
    }
    let n = rows.trailing_zeros() as usize;
    check_limit(n, N_MAX_MATRIX, "matrix construction")?;
    Ok(n)
}

/// Anything with a Kronecker-product matrix realization.
pub trait PauliOperator {
    fn to_matrix(&self) -> Result<DenseMatrix>;
}

impl PauliOperator for PauliString {
    fn to_matrix(&self) -> Result<DenseMatrix> {
        let n = self.n();
        check_limit(n, N_MAX_MATRIX, "matrix construction")?;
        let side = 1 << n;
        let action = WordAction::new(self);
        let mut data = DMatrix::from_element(side, side, ZERO);
        for c in 0..side {
            let (r, v) = action.entry(c);
            data[(r, c)] = v;
        }
        Ok(DenseMatrix { n, data })
    }
}

impl PauliOperator for PauliWord {
    fn to_matrix(&self) -> Result<DenseMatrix> {
        PauliString::from(*self).to_matrix()
    }
}

impl PauliOperator for PauliSum {
    fn to_matrix(&self) -> Result<DenseMatrix> {
        let n = self.n();
        check_limit(n, N_MAX_MATRIX, "matrix construction")?;
        let side = 1 << n;
        let mut data = DMatrix::from_element(side, side, ZERO);
        for (w, coeff) in self.iter() {
            let action = WordAction::new(&PauliString::from(*w));
            for c in 0..side {
                let (r, v) = action.entry(c);
                data[(r, c)] += coeff * v;
            }
        }
        Ok(DenseMatrix { n, data })
    }
}

/// In-place Walsh-Hadamard transform: `out[z] = sum_c (-1)^popcount(c & z) in[c]`.
fn walsh_hadamard(values: &mut [Complex64]) {
    let len = values.len();
    let mut h = 1;
    while h < len {
        for block in (0..len).step_by(2 * h) {
            for i in block..block + h {
                let (a, b) = (values[i], values[i + h]);
                values[i] = a + b;
                values[i + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// Matrix-index mask back to a qubit-indexed mask.
fn qubit_mask(index: usize, n: usize) -> u64 {
    index_mask(index as u64, n) as u64
}

/// Visits every Pauli coefficient `tr(w M) / 2^n` of an `n`-qubit matrix, unpruned.
fn for_each_coefficient<F>(m: &DMatrix<Complex64>, n: usize, mut visit: F) -> Result<()>
where
    F: FnMut(PauliWord, Complex64),
{
    let side = 1usize << n;
    let scale = 1.0 / side as f64;
    let mut buffer = vec![ZERO; side];
    for x in 0..side {
        // tr(w M) = i^{#Y} sum_c (-1)^{c.z} M[c][c ^ x]
        for (c, slot) in buffer.iter_mut().enumerate() {
            *slot = m[(c, c ^ x)];
        }
        walsh_hadamard(&mut buffer);
        for (z, total) in buffer.iter().enumerate() {
            let y_phase = Phase::from_exponent((x & z).count_ones()).to_complex();
            let word = PauliWord::from_masks(n, qubit_mask(x, n), qubit_mask(z, n))?;
            visit(word, y_phase * total * scale);
        }
    }
    Ok(())
}

/// Expands a matrix in the Pauli basis: the coefficient of `w` is
/// `tr(w M) / 2^n`.
pub fn pauli_decompose(m: &DMatrix<Complex64>) -> Result<PauliSum> {
    let n = qubits_for_side(m.nrows(), m.ncols())?;
    let mut terms = Vec::new();
    for_each_coefficient(m, n, |w, coeff| {
        if coeff.norm() > 0.0 {
            terms.push((w, coeff));
        }
    })?;
    PauliSum::from_terms(n, terms)
}

fn hermitian_generator(g: &GeneratorRef, n: usize) -> Result<PauliString> {
    let p = g.resolve(n)?;
    if !p.is_hermitian() {
        return Err(Error::NotHermitian(format!(
            "generator {g} resolves to {p}"
        )));
    }
    Ok(p)
}

/// `exp(i θ P) = cos θ I + i sin θ P` for a Hermitian Pauli string (`P^2 = I`).
pub fn exp_word(p: &PauliString, theta: f64) -> Result<DenseMatrix> {
    if !p.is_hermitian() {
        return Err(Error::NotHermitian(p.to_string()));
    }
    let n = p.n();
    check_limit(n, N_MAX_MATRIX, "matrix construction")?;
    let side = 1 << n;
    let action = WordAction::new(p);
    let mut data = DMatrix::from_element(side, side, ZERO);
    let (sin, cos) = theta.sin_cos();
    for c in 0..side {
        data[(c, c)] += Complex64::new(cos, 0.0);
        let (r, v) = action.entry(c);
        data[(r, c)] += Complex64::new(0.0, sin) * v;
    }
    Ok(DenseMatrix { n, data })
}

/// `exp(i θ G)` for a named generator.
pub fn exp_pulse(g: &GeneratorRef, theta: f64, n: usize) -> Result<DenseMatrix> {
    exp_word(&hermitian_generator(g, n)?, theta)
}

/// `exp(i θ H)` for a Hermitian Pauli sum, via Hermitian eigendecomposition.
pub fn exp_hermitian(h: &PauliSum, theta: f64) -> Result<DenseMatrix> {
    if !h.is_hermitian() {
        return Err(Error::NotHermitian(
            "Pauli sum has complex coefficients".into(),
        ));
    }
    let m = h.to_matrix()?;
    let eigen = m.data.clone().symmetric_eigen();
    let phases: DVector<Complex64> = eigen
        .eigenvalues
        .map(|lambda| Complex64::from_polar(1.0, theta * lambda));
    let v = &eigen.eigenvectors;
    let data = v * DMatrix::from_diagonal(&phases) * v.adjoint();
    Ok(DenseMatrix { n: m.n, data })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Pulse {
    pub gen: GeneratorRef,
    pub theta: f64,
}

/// Piecewise-constant control sequence; list order is time order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PulseSchedule {
    pub n: usize,
    pub pulses: Vec<Pulse>,
}

impl PulseSchedule {
    pub fn new(n: usize) -> Self {
        PulseSchedule {
            n,
            pulses: Vec::new(),
        }
    }

    pub fn push(&mut self, gen: GeneratorRef, theta: f64) -> &mut Self {
        self.pulses.push(Pulse { gen, theta });
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_limit(self.n, N_MAX_PIPELINE, "schedule execution")?;
        for pulse in &self.pulses {
            hermitian_generator(&pulse.gen, self.n)?;
            if !pulse.theta.is_finite() {
                return Err(Error::Precondition(format!(
                    "pulse angle for {} is not finite",
                    pulse.gen
                )));
            }
        }
        Ok(())
    }
}

/// `U = exp(iθ_m G_m) ... exp(iθ_1 G_1)`: the first pulse is the rightmost factor.
pub fn run_schedule(schedule: &PulseSchedule) -> Result<DenseMatrix> {
    schedule.validate()?;
    let mut u = DenseMatrix::identity(schedule.n)?;
    for pulse in &schedule.pulses {
        let p = hermitian_generator(&pulse.gen, schedule.n)?;
        let (sin, cos) = pulse.theta.sin_cos();
        let rotated = WordAction::new(&p).apply_left(&u.data);
        u.data = &u.data * Complex64::new(cos, 0.0) + rotated * Complex64::new(0.0, sin);
    }
    Ok(u)
}

/// Gamma basis `(γ_0, ..., γ_{2n})` with `γ_k = i e_k Γ` for `k < 2n` and
/// `γ_{2n} = Γ`, where `Γ` is the chirality element.
///
/// This is the `(2n+1)`-dimensional space that `exp(i θ e_k)` and
/// `exp(θ e_j e_k)` preserve: `[e_j, i e_l Γ] = 2i δ_jl Γ` and
/// `[e_j, Γ] = 2 e_j Γ`. At `n = 1` it is `(Y, -X, Z)`.
pub fn gamma_basis(n: usize) -> Result<Vec<PauliString>> {
    let chirality = build_chirality(n)?;
    let mut basis = Vec::with_capacity(2 * n + 1);
    for k in 0..2 * n {
        let g = build_e(n, k)?.mul(&chirality)?.times_phase(Phase::I);
        debug_assert!(g.is_hermitian());
        basis.push(g);
    }
    basis.push(chirality);
    Ok(basis)
}

/// Real `(2n+1) x (2n+1)` matrix with `U γ_a U^dag = sum_b R[b][a] γ_b`.
#[derive(Clone, Debug, PartialEq)]
pub struct RotationMatrix {
    n: usize,
    entries: DMatrix<f64>,
}

impl RotationMatrix {
    pub fn identity(n: usize) -> Self {
        let dim = 2 * n + 1;
        RotationMatrix {
            n,
            entries: DMatrix::identity(dim, dim),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[(row, col)]
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn mul(&self, other: &RotationMatrix) -> Result<RotationMatrix> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(RotationMatrix {
            n: self.n,
            entries: &self.entries * &other.entries,
        })
    }

    /// `max |R^T R - I|`.
    pub fn orthogonality_residual(&self) -> f64 {
        let gram = self.entries.transpose() * &self.entries;
        let dim = self.dim();
        let mut worst = 0.0f64;
        for r in 0..dim {
            for c in 0..dim {
                let target = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((gram[(r, c)] - target).abs());
            }
        }
        worst
    }

    pub fn determinant(&self) -> f64 {
        self.entries.determinant()
    }

    pub fn max_abs_diff(&self, other: &RotationMatrix) -> f64 {
        if self.entries.shape() != other.entries.shape() {
            return f64::INFINITY;
        }
        self.entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Entries in row-major order.
    pub fn row_major(&self) -> Vec<f64> {
        let dim = self.dim();
        (0..dim)
            .flat_map(|r| (0..dim).map(move |c| (r, c)))
            .map(|(r, c)| self.entries[(r, c)])
            .collect()
    }
}

impl Serialize for RotationMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("RotationMatrix", 5)?;
        s.serialize_field("n", &self.n)?;
        s.serialize_field("dim", &self.dim())?;
        s.serialize_field("entries", &self.row_major())?;
        s.serialize_field("orthogonality_residual", &self.orthogonality_residual())?;
        s.serialize_field("determinant", &self.determinant())?;
        s.end()
    }
}

fn conjugated_gammas(
    u: &DenseMatrix,
    tol: f64,
) -> Result<(Vec<PauliString>, Vec<DMatrix<Complex64>>)> {
    check_limit(u.n, N_MAX_PIPELINE, "rotation extraction")?;
    u.require_unitary(tol)?;
    let gammas = gamma_basis(u.n)?;
    let u_dag = u.data.adjoint();
    let images = gammas
        .iter()
        .map(|g| &u.data * WordAction::new(g).apply_left(&u_dag))
        .collect();
    Ok((gammas, images))
}

/// Adjoint action of `U` on the gamma basis: `R[b][a] = tr(γ_b U γ_a U^dag) / 2^n`.
///
/// `U` and `-U` give the same rotation.
pub fn adjoint_rotation(u: &DenseMatrix, tol: f64) -> Result<RotationMatrix> {
    let (gammas, images) = conjugated_gammas(u, tol)?;
    let dim = gammas.len();
    let scale = 1.0 / u.side() as f64;
    let actions: Vec<WordAction> = gammas.iter().map(WordAction::new).collect();
    let mut entries = DMatrix::zeros(dim, dim);
    for (a, image) in images.iter().enumerate() {
        for (b, action) in actions.iter().enumerate() {
            entries[(b, a)] = action.trace_with(image).re * scale;
        }
    }
    Ok(RotationMatrix { n: u.n, entries })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Membership {
    pub member: bool,
    /// Largest Pauli coefficient of any `U γ_a U^dag` outside the gamma span.
    pub residual: f64,
    pub orthogonality_residual: f64,
    pub determinant: f64,
    pub rotation: RotationMatrix,
}

/// Tests whether `U` acts on the gamma span as an element of `SO(2n+1)`.
pub fn so_membership(u: &DenseMatrix, tol: f64) -> Result<Membership> {
    let (gammas, images) = conjugated_gammas(u, tol)?;
    let dim = gammas.len();
    let index: BTreeMap<PauliWord, (usize, Complex64)> = gammas
        .iter()
        .enumerate()
        .map(|(b, g)| (g.word(), (b, g.phase().to_complex())))
        .collect();
    let mut entries = DMatrix::zeros(dim, dim);
    let mut residual = 0.0f64;
    for (a, image) in images.iter().enumerate() {
        for_each_coefficient(image, u.n, |w, coeff| match index.get(&w) {
            Some(&(b, phase)) => {
                let value = coeff * phase.conj();
                entries[(b, a)] = value.re;
                residual = residual.max(value.im.abs());
            }
            None => residual = residual.max(coeff.norm()),
        })?;
    }
    let rotation = RotationMatrix { n: u.n, entries };
    let orthogonality_residual = rotation.orthogonality_residual();
    let determinant = rotation.determinant();
    Ok(Membership {
        member: residual <= tol
            && orthogonality_residual <= tol
            && (determinant - 1.0).abs() <= tol,
        residual,
        orthogonality_residual,
        determinant,
        rotation,
    })
}
