//! Gaussian integrals and Wick moments for quadratic phases.
//!
//! Two variants are supported. The oscillatory variant treats
//! integral of e^{ik Q(x,x)/2} over R^N, defined by analytic continuation; it
//! is never numerically quadratured here. The euclidean variant treats
//! e^{-k Q(x,x)/2} with positive-definite Q and admits direct quadrature,
//! which is how the moment engine is cross-checked.
//!
//! Moments are evaluated by summing over all perfect matchings of the index
//! list. Each matched pair (j, k) contributes i * Q^{jk} in the oscillatory
//! variant and Q^{jk} in the euclidean one, where Q^{jk} denotes an entry of
//! the inverse matrix; odd-degree moments vanish identically.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::TrivalentGraph;
use crate::quadrature::gauss_hermite;

/// Which Gaussian is meant: e^{ik Q/2} or e^{-k Q/2}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Oscillatory,
    Euclidean,
}

/// A nondegenerate symmetric bilinear form with its precomputed inverse,
/// determinant, and signature.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticForm {
    q: DMatrix<f64>,
    q_inv: DMatrix<f64>,
    det: f64,
    /// (number of positive eigenvalues, number of negative eigenvalues).
    signature: (usize, usize),
}

impl QuadraticForm {
    /// Validates and precomputes with the default tolerances
    /// (symmetry 1e-12, determinant floor 1e-10).
    pub fn new(q: DMatrix<f64>) -> Result<Self> {
        QuadraticForm::with_tolerances(q, 1e-12, 1e-10)
    }

    pub fn with_tolerances(mut q: DMatrix<f64>, symmetry_tol: f64, det_floor: f64) -> Result<Self> {
        let n = q.nrows();
        if n == 0 || q.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "quadratic form must be square and nonempty, got {}x{}",
                q.nrows(),
                q.ncols()
            )));
        }
        let mut max_asym = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                max_asym = max_asym.max((q[(i, j)] - q[(j, i)]).abs());
            }
        }
        if max_asym > symmetry_tol {
            return Err(Error::NotSymmetric {
                max_asym,
                tol: symmetry_tol,
            });
        }
        // Exact symmetrization after the check keeps downstream algebra clean.
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (q[(i, j)] + q[(j, i)]);
                q[(i, j)] = avg;
                q[(j, i)] = avg;
            }
        }

        let lu = q.clone().lu();
        let det = lu.determinant();
        if !det.is_finite() || det.abs() < det_floor {
            return Err(Error::DegenerateForm {
                det: det.abs(),
                floor: det_floor,
            });
        }
        let q_inv = lu.try_inverse().ok_or(Error::NotInvertible)?;
        let residual = (&q * &q_inv - DMatrix::<f64>::identity(n, n)).abs().max();
        if residual > 1e-9 {
            return Err(Error::NotInvertible);
        }

        let eigenvalues = q.clone().symmetric_eigen().eigenvalues;
        let plus = eigenvalues.iter().filter(|&&l| l > 0.0).count();
        let minus = eigenvalues.iter().filter(|&&l| l < 0.0).count();

        Ok(QuadraticForm {
            q,
            q_inv,
            det,
            signature: (plus, minus),
        })
    }

    pub fn identity(n: usize) -> Self {
        QuadraticForm::new(DMatrix::identity(n, n)).expect("identity is nondegenerate")
    }

    pub fn dim(&self) -> usize {
        self.q.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.q
    }

    pub fn inverse(&self) -> &DMatrix<f64> {
        &self.q_inv
    }

    /// Entry Q^{jk} of the inverse matrix.
    pub fn inverse_entry(&self, j: usize, k: usize) -> f64 {
        self.q_inv[(j, k)]
    }

    pub fn det(&self) -> f64 {
        self.det
    }

    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }

    pub fn is_positive_definite(&self) -> bool {
        self.signature == (self.dim(), 0)
    }

    /// Rescales the form by mu (used by the covariance tests).
    pub fn scaled(&self, mu: f64) -> Result<QuadraticForm> {
        QuadraticForm::new(self.q.clone() * mu)
    }
}

/// Normalization Z(0) of the Gaussian with parameter k > 0.
///
/// Euclidean: (2 pi / k)^{N/2} / sqrt(det Q), requiring positive-definite Q.
/// Oscillatory: (2 pi / k)^{N/2} e^{i pi sgn(Q) / 4} / sqrt(|det Q|), where
/// sgn(Q) is the signature.
pub fn gaussian_normalization(q: &QuadraticForm, variant: Variant, k: f64) -> Result<Complex64> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::ParameterDomain(format!(
            "gaussian parameter k must be positive, got {k}"
        )));
    }
    let n = q.dim() as f64;
    let radial = (2.0 * std::f64::consts::PI / k).powf(n / 2.0);
    match variant {
        Variant::Euclidean => {
            if !q.is_positive_definite() {
                let (plus, minus) = q.signature();
                return Err(Error::NotPositiveDefinite { plus, minus });
            }
            Ok(Complex64::new(radial / q.det().sqrt(), 0.0))
        }
        Variant::Oscillatory => {
            let (plus, minus) = q.signature();
            let sig = plus as f64 - minus as f64;
            let phase = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4 * sig);
            Ok(phase * radial / q.det().abs().sqrt())
        }
    }
}

/// Visits every perfect matching of {0, .., d-1} in lexicographic order,
/// reusing one buffer. `d` must be even.
pub(crate) fn visit_pairings(d: usize, mut visit: impl FnMut(&[(usize, usize)])) {
    debug_assert!(d % 2 == 0);
    let mut used = vec![false; d];
    let mut pairs = Vec::with_capacity(d / 2);
    visit_rec(&mut used, &mut pairs, &mut visit);
}

fn visit_rec(
    used: &mut Vec<bool>,
    pairs: &mut Vec<(usize, usize)>,
    visit: &mut impl FnMut(&[(usize, usize)]),
) {
    let h = match used.iter().position(|&u| !u) {
        Some(h) => h,
        None => {
            visit(pairs);
            return;
        }
    };
    used[h] = true;
    for t in h + 1..used.len() {
        if used[t] {
            continue;
        }
        used[t] = true;
        pairs.push((h, t));
        visit_rec(used, pairs, visit);
        pairs.pop();
        used[t] = false;
    }
    used[h] = false;
}

/// Lazy iterator over all perfect matchings of {0, .., d-1}, lexicographic.
///
/// There are (d-1)!! of them, so `max_degree` (normally 6 times the loop-order
/// cap) guards against detonating requests.
pub fn enumerate_pairings(d: usize, max_degree: usize) -> Result<Pairings> {
    if d % 2 != 0 {
        return Err(Error::OddPairingDegree(d));
    }
    if d > max_degree {
        return Err(Error::PairingDegreeTooLarge {
            degree: d,
            max: max_degree,
        });
    }
    Ok(Pairings {
        d,
        used: vec![false; d],
        stack: Vec::with_capacity(d / 2),
        started: false,
        done: false,
    })
}

#[derive(Debug, Clone)]
pub struct Pairings {
    d: usize,
    used: Vec<bool>,
    stack: Vec<(usize, usize)>,
    started: bool,
    done: bool,
}

impl Pairings {
    /// Pairs each smallest free element with the next free one until full.
    fn complete_greedily(&mut self) {
        loop {
            let h = match self.used.iter().position(|&u| !u) {
                Some(h) => h,
                None => return,
            };
            let t = (h + 1..self.d)
                .find(|&t| !self.used[t])
                .expect("even count of free elements");
            self.used[h] = true;
            self.used[t] = true;
            self.stack.push((h, t));
        }
    }
}

impl Iterator for Pairings {
    type Item = Vec<(usize, usize)>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.complete_greedily();
            return Some(self.stack.clone());
        }
        // Backtrack: advance the deepest pair whose partner can still move.
        while let Some((h, t)) = self.stack.pop() {
            self.used[h] = false;
            self.used[t] = false;
            if let Some(t2) = (t + 1..self.d).find(|&t2| !self.used[t2]) {
                self.used[h] = true;
                self.used[t2] = true;
                self.stack.push((h, t2));
                self.complete_greedily();
                return Some(self.stack.clone());
            }
        }
        self.done = true;
        None
    }
}

/// Interprets a perfect matching on 6m half-edges as a trivalent graph.
pub fn pairing_to_graph(pairing: &[(usize, usize)], m: usize) -> Result<TrivalentGraph> {
    if m == 0 || pairing.len() != 3 * m {
        return Err(Error::InvalidGraph(format!(
            "expected {} pairs for loop order {m}, got {}",
            3 * m,
            pairing.len()
        )));
    }
    TrivalentGraph::new(2 * m, pairing.iter().copied())
}

/// Normalized Gaussian moment <x_{j_1} ... x_{j_d}> by Wick's theorem.
///
/// Evaluation cost is (d-1)!! terms; odd d returns exactly zero.
pub fn moment_wick(q: &QuadraticForm, indices: &[usize], variant: Variant) -> Result<Complex64> {
    for &j in indices {
        if j >= q.dim() {
            return Err(Error::IndexOutOfRange {
                index: j,
                dim: q.dim(),
            });
        }
    }
    if indices.len() % 2 == 1 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    let i_unit = Complex64::new(0.0, 1.0);
    visit_pairings(indices.len(), |pairs| {
        let mut term = Complex64::new(1.0, 0.0);
        for &(a, b) in pairs {
            let entry = q.inverse_entry(indices[a], indices[b]);
            term *= match variant {
                Variant::Oscillatory => i_unit * entry,
                Variant::Euclidean => Complex64::new(entry, 0.0),
            };
        }
        sum += term;
    });
    Ok(sum)
}

/// Normalized expectation of f under e^{-k Q(x,x)/2} by tensor-product
/// Gauss-Hermite quadrature.
///
/// Substituting x = L^{-T} u sqrt(2/k) with Q = L L^T reduces the weight to
/// the standard Gaussian; `nodes_per_dim` must exceed half the polynomial
/// degree of f for exactness.
pub fn expectation_gauss_hermite(
    q: &QuadraticForm,
    k: f64,
    nodes_per_dim: usize,
    mut f: impl FnMut(&[f64]) -> f64,
) -> Result<f64> {
    if !q.is_positive_definite() {
        let (plus, minus) = q.signature();
        return Err(Error::NotPositiveDefinite { plus, minus });
    }
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::ParameterDomain(format!(
            "gaussian parameter k must be positive, got {k}"
        )));
    }
    let n = q.dim();
    let chol = q
        .matrix()
        .clone()
        .cholesky()
        .ok_or(Error::NotInvertible)?;
    let l_t = chol.l().transpose();
    let scale = (2.0 / k).sqrt();
    let (nodes, weights) = gauss_hermite(nodes_per_dim);

    let mut grid_index = vec![0usize; n];
    let mut total = 0.0f64;
    let mut u = vec![0.0f64; n];
    let mut x = vec![0.0f64; n];
    loop {
        let mut weight = 1.0f64;
        for (dim, &gi) in grid_index.iter().enumerate() {
            weight *= weights[gi];
            u[dim] = scale * nodes[gi];
        }
        // Back-substitution for L^T x = u.
        for i in (0..n).rev() {
            let mut acc = u[i];
            for j in i + 1..n {
                acc -= l_t[(i, j)] * x[j];
            }
            x[i] = acc / l_t[(i, i)];
        }
        total += weight * f(&x);

        // Odometer over the tensor grid.
        let mut dim = 0;
        loop {
            if dim == n {
                return Ok(total / std::f64::consts::PI.powf(n as f64 / 2.0));
            }
            grid_index[dim] += 1;
            if grid_index[dim] < nodes_per_dim {
                break;
            }
            grid_index[dim] = 0;
            dim += 1;
        }
    }
}

/// Euclidean moment (k = 1) by quadrature; the independent oracle for
/// `moment_wick`.
pub fn moment_gauss_hermite(
    q: &QuadraticForm,
    indices: &[usize],
    nodes_per_dim: usize,
) -> Result<f64> {
    for &j in indices {
        if j >= q.dim() {
            return Err(Error::IndexOutOfRange {
                index: j,
                dim: q.dim(),
            });
        }
    }
    expectation_gauss_hermite(q, 1.0, nodes_per_dim, |x| {
        indices.iter().map(|&j| x[j]).product()
    })
}
