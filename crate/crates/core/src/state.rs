//! Labeled tensor-product pure states, reduced density matrices and
//! entanglement entropies.
//!
//! Amplitudes are stored densely in Kronecker order: the first factor is the
//! most significant index. For a two-qubit state on `photon_A ⊗ photon_B`
//! the ordering is therefore `HH, HV, VH, VV`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Tolerance used for the density-matrix invariants and eigenvalue clamping.
pub const DENSITY_TOL: f64 = 1e-12;

/// Ordered subsystem names and dimensions of a tensor-product space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisLabel {
    names: Vec<String>,
    dims: Vec<usize>,
}

impl BasisLabel {
    pub fn new<S: Into<String>>(factors: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let mut names = Vec::new();
        let mut dims = Vec::new();
        for (name, dim) in factors {
            let name = name.into();
            if dim == 0 {
                return Err(Error::ZeroDimension(name));
            }
            if names.contains(&name) {
                return Err(Error::DuplicateFactor(name));
            }
            names.push(name);
            dims.push(dim);
        }
        Ok(Self { names, dims })
    }

    pub fn single(name: impl Into<String>, dim: usize) -> Result<Self> {
        Self::new([(name.into(), dim)])
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_factors(&self) -> usize {
        self.names.len()
    }

    /// Dimension of the full product space.
    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownFactor(name.to_string()))
    }

    pub fn dim_of(&self, name: &str) -> Result<usize> {
        Ok(self.dims[self.index_of(name)?])
    }

    /// Flat amplitude index of a multi-index (one entry per factor).
    pub fn flat_index(&self, multi: &[usize]) -> Result<usize> {
        if multi.len() != self.dims.len() {
            return Err(Error::DimensionMismatch {
                expected: self.dims.len(),
                found: multi.len(),
            });
        }
        let mut flat = 0;
        for (&i, &d) in multi.iter().zip(&self.dims) {
            if i >= d {
                return Err(Error::DimensionMismatch { expected: d, found: i });
            }
            flat = flat * d + i;
        }
        Ok(flat)
    }

    /// Splits the space around factor `k` into (outer, dim_k, inner) strides.
    fn split_at(&self, k: usize) -> (usize, usize, usize) {
        let outer = self.dims[..k].iter().product();
        let inner = self.dims[k + 1..].iter().product();
        (outer, self.dims[k], inner)
    }

    fn renamed(&self, names: &[&str]) -> Result<Self> {
        if names.len() != self.names.len() {
            return Err(Error::DimensionMismatch {
                expected: self.names.len(),
                found: names.len(),
            });
        }
        Self::new(names.iter().copied().zip(self.dims.iter().copied()))
    }
}

/// A pure state over a labeled tensor-product basis.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    basis: BasisLabel,
    amplitudes: DVector<C64>,
}

impl PureState {
    pub fn new(basis: BasisLabel, amplitudes: DVector<C64>) -> Result<Self> {
        if amplitudes.len() != basis.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: basis.total_dim(),
                found: amplitudes.len(),
            });
        }
        Ok(Self { basis, amplitudes })
    }

    pub fn from_slice(basis: BasisLabel, amplitudes: &[C64]) -> Result<Self> {
        Self::new(basis, DVector::from_column_slice(amplitudes))
    }

    pub fn from_real(basis: BasisLabel, amplitudes: &[f64]) -> Result<Self> {
        let amps: Vec<C64> = amplitudes.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_slice(basis, &amps)
    }

    /// Computational basis ket `|index>` of a single factor.
    pub fn basis_ket(name: impl Into<String>, dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::DimensionMismatch { expected: dim, found: index });
        }
        let mut amps = DVector::zeros(dim);
        amps[index] = C64::new(1.0, 0.0);
        Self::new(BasisLabel::single(name, dim)?, amps)
    }

    pub fn basis(&self) -> &BasisLabel {
        &self.basis
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitude(&self, multi: &[usize]) -> Result<C64> {
        Ok(self.amplitudes[self.basis.flat_index(multi)?])
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn normalize(&self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroNorm);
        }
        Ok(Self {
            basis: self.basis.clone(),
            amplitudes: self.amplitudes.unscale(norm),
        })
    }

    /// Same amplitudes under new factor names.
    pub fn relabel(&self, names: &[&str]) -> Result<Self> {
        Ok(Self {
            basis: self.basis.renamed(names)?,
            amplitudes: self.amplitudes.clone(),
        })
    }

    /// `<self|other>`, antilinear in `self`.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch);
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// Applies a square operator to one factor, identity elsewhere.
    pub fn apply_local(&self, factor: &str, op: &DMatrix<C64>) -> Result<Self> {
        let k = self.basis.index_of(factor)?;
        let (outer, d, inner) = self.basis.split_at(k);
        if op.nrows() != d || op.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, found: op.nrows() });
        }
        let mut out = DVector::zeros(self.dim());
        for o in 0..outer {
            for r in 0..inner {
                for i in 0..d {
                    let mut acc = C64::new(0.0, 0.0);
                    for j in 0..d {
                        acc += op[(i, j)] * self.amplitudes[(o * d + j) * inner + r];
                    }
                    out[(o * d + i) * inner + r] = acc;
                }
            }
        }
        Ok(Self { basis: self.basis.clone(), amplitudes: out })
    }
}

impl Serialize for PureState {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Record<'a> {
            factors: &'a [String],
            dims: &'a [usize],
            amplitudes: Vec<[f64; 2]>,
        }
        Record {
            factors: &self.basis.names,
            dims: &self.basis.dims,
            amplitudes: self.amplitudes.iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(serializer)
    }
}

/// Kronecker product of states in the given order.
pub fn tensor(states: &[&PureState]) -> Result<PureState> {
    let mut factors: Vec<(String, usize)> = Vec::new();
    let mut amps = DVector::from_element(1, C64::new(1.0, 0.0));
    for state in states {
        for (name, &dim) in state.basis.names.iter().zip(&state.basis.dims) {
            factors.push((name.clone(), dim));
        }
        amps = amps.kronecker(&state.amplitudes);
    }
    PureState::new(BasisLabel::new(factors)?, amps)
}

/// Hermitian, unit-trace, positive semidefinite matrix from a partial trace.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedDensityMatrix {
    entries: DMatrix<C64>,
}

impl ReducedDensityMatrix {
    /// Validates the density-matrix invariants at [`DENSITY_TOL`].
    pub fn new(entries: DMatrix<C64>) -> Result<Self> {
        let n = entries.nrows();
        if n == 0 || entries.ncols() != n {
            return Err(Error::InvalidDensityMatrix(format!(
                "{}x{} is not square",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let herm_dev = (&entries - entries.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if herm_dev > DENSITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!("Hermiticity deviation {herm_dev:e}")));
        }
        let trace = entries.trace();
        if (trace.re - 1.0).abs() > DENSITY_TOL || trace.im.abs() > DENSITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!("trace {trace}")));
        }
        let rho = Self { entries };
        let min = rho.raw_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
        if min < -DENSITY_TOL {
            return Err(Error::InvalidDensityMatrix(format!("eigenvalue {min:e}")));
        }
        Ok(rho)
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let diag = DVector::from_iterator(values.len(), values.iter().map(|&x| C64::new(x, 0.0)));
        Self::new(DMatrix::from_diagonal(&diag))
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    fn raw_eigenvalues(&self) -> Vec<f64> {
        if self.dim() == 1 {
            return vec![self.entries[(0, 0)].re];
        }
        self.entries.symmetric_eigenvalues().iter().copied().collect()
    }

    /// Spectrum in ascending order, noise below zero clamped to 0.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.raw_eigenvalues().into_iter().map(|x| x.max(0.0)).collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn purity(&self) -> f64 {
        self.eigenvalues().iter().map(|p| p * p).sum()
    }
}

/// Reduced state of one factor, tracing out all others.
pub fn partial_trace(state: &PureState, keep: &str) -> Result<ReducedDensityMatrix> {
    let k = state.basis.index_of(keep)?;
    let (outer, d, inner) = state.basis.split_at(k);
    // rows: kept index, columns: everything else
    let mut m = DMatrix::<C64>::zeros(d, outer * inner);
    for o in 0..outer {
        for i in 0..d {
            for r in 0..inner {
                m[(i, o * inner + r)] = state.amplitudes[(o * d + i) * inner + r];
            }
        }
    }
    let mut rho = &m * m.adjoint();
    // exact Hermitian symmetrization removes rounding asymmetry
    rho = (&rho + rho.adjoint()).scale(0.5);
    ReducedDensityMatrix::new(rho)
}

/// `-Σ λ log₂ λ` over the clamped spectrum, in bits.
pub fn von_neumann_entropy(rho: &ReducedDensityMatrix) -> f64 {
    let s: f64 = rho
        .eigenvalues()
        .into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum();
    // adding 0.0 turns -0.0 into +0.0
    s.clamp(0.0, (rho.dim() as f64).log2()) + 0.0
}

/// Rényi entropy of order `alpha` in bits.
pub fn renyi_entropy(rho: &ReducedDensityMatrix, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) || alpha == 1.0 || !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "Renyi order must be positive and different from 1, got {alpha}"
        )));
    }
    let tr: f64 = rho
        .eigenvalues()
        .into_iter()
        .filter(|&p| p > 0.0)
        .map(|p| p.powf(alpha))
        .sum();
    let s = tr.log2() / (1.0 - alpha);
    Ok(s.clamp(0.0, (rho.dim() as f64).log2()) + 0.0)
}

/// `|<a|b>|²`.
pub fn fidelity(a: &PureState, b: &PureState) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr().min(1.0))
}

/// Von Neumann entropy of the reduced state of `factor`.
pub fn entanglement_entropy(state: &PureState, factor: &str) -> Result<f64> {
    Ok(von_neumann_entropy(&partial_trace(state, factor)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn qubit(name: &str, a: f64, b: f64) -> PureState {
        PureState::from_real(BasisLabel::single(name, 2).unwrap(), &[a, b]).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn tensor_of_basis_kets() {
        let s = tensor(&[&qubit("x", 1.0, 0.0), &qubit("y", 1.0, 0.0)]).unwrap();
        let want = [1.0, 0.0, 0.0, 0.0];
        for (a, w) in s.amplitudes().iter().zip(want) {
            assert_eq!(*a, C64::new(w, 0.0));
        }
        assert_eq!(s.basis().names(), ["x", "y"]);
    }

    #[test]
    fn tensor_of_superposition_and_ket() {
        // hand Kronecker product: (1/√2)(1,1) ⊗ (0,1)
        let s = tensor(&[&qubit("x", FRAC_1_SQRT_2, FRAC_1_SQRT_2), &qubit("y", 0.0, 1.0)]).unwrap();
        let want = [0.0, FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2];
        for (a, w) in s.amplitudes().iter().zip(want) {
            assert!(close(a.re, w, 1e-15) && a.im == 0.0);
        }
    }

    #[test]
    fn tensor_rejects_duplicate_names() {
        let a = qubit("x", 1.0, 0.0);
        assert!(matches!(tensor(&[&a, &a]), Err(Error::DuplicateFactor(n)) if n == "x"));
    }

    #[test]
    fn partial_trace_of_bell_pair() {
        let s = PureState::from_real(
            BasisLabel::new([("A", 2), ("B", 2)]).unwrap(),
            &[FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2],
        )
        .unwrap();
        let rho = partial_trace(&s, "A").unwrap();
        assert!(close(rho.entries()[(0, 0)].re, 0.5, 1e-15));
        assert!(close(rho.entries()[(1, 1)].re, 0.5, 1e-15));
        assert!(rho.entries()[(0, 1)].norm() < 1e-15);
        assert!(close(von_neumann_entropy(&rho), 1.0, 1e-12));
    }

    #[test]
    fn partial_trace_of_product_is_pure() {
        let s = tensor(&[&qubit("A", 1.0, 0.0), &qubit("B", 0.0, 1.0)]).unwrap();
        let rho = partial_trace(&s, "A").unwrap();
        assert_eq!(rho.entries()[(0, 0)].re, 1.0);
        assert_eq!(rho.entries()[(1, 1)].re, 0.0);
        assert_eq!(von_neumann_entropy(&rho), 0.0);
    }

    #[test]
    fn partial_trace_of_qutrit_superposition() {
        // (|2,0> + |1,1> + |0,2>)/√3 on two 3-level modes
        let mut amps = vec![0.0; 9];
        let c = 1.0 / 3f64.sqrt();
        amps[2 * 3] = c;
        amps[3 + 1] = c;
        amps[2] = c;
        let s = PureState::from_real(BasisLabel::new([("a", 3), ("b", 3)]).unwrap(), &amps).unwrap();
        let rho = partial_trace(&s, "a").unwrap();
        for i in 0..3 {
            assert!(close(rho.entries()[(i, i)].re, 1.0 / 3.0, 1e-15));
        }
        assert!(close(von_neumann_entropy(&rho), 3f64.log2(), 1e-12));
        assert!(close(renyi_entropy(&rho, 2.0).unwrap(), 3f64.log2(), 1e-12));
    }

    #[test]
    fn partial_trace_unknown_factor() {
        let s = qubit("x", 1.0, 0.0);
        assert!(matches!(partial_trace(&s, "nope"), Err(Error::UnknownFactor(_))));
    }

    #[test]
    fn partial_trace_middle_factor() {
        // |0>|+>|1>, keep middle factor -> |+><+|
        let s = tensor(&[
            &qubit("a", 1.0, 0.0),
            &qubit("b", FRAC_1_SQRT_2, FRAC_1_SQRT_2),
            &qubit("c", 0.0, 1.0),
        ])
        .unwrap();
        let rho = partial_trace(&s, "b").unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!(close(rho.entries()[(i, j)].re, 0.5, 1e-15));
            }
        }
    }

    #[test]
    fn entropy_closed_forms() {
        let half = ReducedDensityMatrix::diagonal(&[0.5, 0.5]).unwrap();
        let pure = ReducedDensityMatrix::diagonal(&[1.0, 0.0]).unwrap();
        let third = ReducedDensityMatrix::diagonal(&[1.0 / 3.0; 3]).unwrap();
        assert!(close(von_neumann_entropy(&half), 1.0, 1e-15));
        assert_eq!(von_neumann_entropy(&pure), 0.0);
        assert!(close(von_neumann_entropy(&third), 1.584962500721156, 1e-12));
        assert!(close(renyi_entropy(&half, 2.0).unwrap(), 1.0, 1e-15));
        for alpha in [0.5, 2.0, 3.0, 10.0] {
            assert_eq!(renyi_entropy(&pure, alpha).unwrap(), 0.0);
        }
    }

    #[test]
    fn renyi_rejects_bad_orders() {
        let half = ReducedDensityMatrix::diagonal(&[0.5, 0.5]).unwrap();
        for alpha in [0.0, -1.0, 1.0, f64::NAN] {
            assert!(matches!(renyi_entropy(&half, alpha), Err(Error::InvalidParameter(_))));
        }
    }

    #[test]
    fn density_matrix_rejects_invalid_input() {
        assert!(ReducedDensityMatrix::diagonal(&[0.6, 0.6]).is_err());
        assert!(ReducedDensityMatrix::diagonal(&[1.5, -0.5]).is_err());
        let mut m = DMatrix::from_diagonal(&DVector::from_vec(vec![C64::new(0.5, 0.0); 2]));
        m[(0, 1)] = C64::new(0.1, 0.0);
        assert!(ReducedDensityMatrix::new(m).is_err());
        // tiny negative noise is tolerated and clamped
        let rho = ReducedDensityMatrix::diagonal(&[1.0 + 5e-13, -5e-13]).unwrap();
        assert_eq!(rho.eigenvalues()[0], 0.0);
    }

    #[test]
    fn fidelity_values() {
        let plus = qubit("x", FRAC_1_SQRT_2, FRAC_1_SQRT_2);
        let zero = qubit("x", 1.0, 0.0);
        let one = qubit("x", 0.0, 1.0);
        assert!(close(fidelity(&plus, &plus).unwrap(), 1.0, 1e-15));
        assert_eq!(fidelity(&zero, &one).unwrap(), 0.0);
        assert!(close(fidelity(&plus, &zero).unwrap(), 0.5, 1e-15));
        let other = qubit("y", 1.0, 0.0);
        assert!(matches!(fidelity(&zero, &other), Err(Error::BasisMismatch)));
    }

    #[test]
    fn normalize_and_zero_norm() {
        let s = qubit("x", 3.0, 4.0).normalize().unwrap();
        assert!(close(s.norm(), 1.0, 1e-15));
        assert!(matches!(qubit("x", 0.0, 0.0).normalize(), Err(Error::ZeroNorm)));
    }

    #[test]
    fn apply_local_flips_second_factor() {
        let s = tensor(&[&qubit("a", 1.0, 0.0), &qubit("b", 1.0, 0.0)]).unwrap();
        let flip = DMatrix::from_row_slice(
            2,
            2,
            &[C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
        );
        let t = s.apply_local("b", &flip).unwrap();
        assert_eq!(t.amplitude(&[0, 1]).unwrap(), C64::new(1.0, 0.0));
        assert_eq!(t.amplitude(&[0, 0]).unwrap(), C64::new(0.0, 0.0));
    }

    #[test]
    fn basis_label_invariants() {
        assert!(matches!(BasisLabel::new([("a", 2), ("a", 3)]), Err(Error::DuplicateFactor(_))));
        assert!(matches!(BasisLabel::new([("a", 0)]), Err(Error::ZeroDimension(_))));
        let b = BasisLabel::new([("a", 2), ("b", 3)]).unwrap();
        assert_eq!(b.total_dim(), 6);
        assert_eq!(b.flat_index(&[1, 2]).unwrap(), 5);
        assert!(PureState::from_real(b, &[1.0; 5]).is_err());
    }
}
