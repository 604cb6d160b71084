//! Lie-algebra weight systems on oriented trivalent graphs.
//!
//! The data is a metrized Lie algebra presented numerically: a symmetric
//! invertible bilinear form B and the totally antisymmetric tensor
//! c_{IJK} = B([E_I, E_J], E_K). The weight b(Gamma) contracts one copy of c
//! per vertex, with indices read in the vertex's cyclic order, against one
//! copy of B^{-1} per edge. Cyclic rotations leave the value fixed; a single
//! transposition at a vertex flips its sign, so the value is attached to the
//! orientation class.

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};
use crate::graph::OrientedGraph;
use crate::tensor::{contract_graph, Tensor};

/// A metrized Lie algebra in a fixed basis.
#[derive(Debug, Clone)]
pub struct LieData {
    dim: usize,
    b: DMatrix<f64>,
    b_inv: DMatrix<f64>,
    c: Tensor,
    antisymmetrized: bool,
}

impl LieData {
    /// Validates B (symmetric, invertible) and antisymmetrizes c over all
    /// six index permutations; `was_antisymmetrized()` reports whether that
    /// changed anything beyond exact equality.
    pub fn new(b: DMatrix<f64>, c: Tensor) -> Result<Self> {
        let d = b.nrows();
        if d == 0 || b.ncols() != d {
            return Err(Error::InvalidLieData(
                "bilinear form must be square and nonempty".into(),
            ));
        }
        if c.rank() != 3 || c.dims() != [d, d, d] {
            return Err(Error::InvalidLieData(format!(
                "structure tensor must have shape [{d}, {d}, {d}]"
            )));
        }
        let mut max_asym = 0.0f64;
        for i in 0..d {
            for j in (i + 1)..d {
                max_asym = max_asym.max((b[(i, j)] - b[(j, i)]).abs());
            }
        }
        if max_asym > 1e-12 {
            return Err(Error::NotSymmetric {
                max_asym,
                tol: 1e-12,
            });
        }
        let lu = b.clone().lu();
        let det = lu.determinant();
        if !det.is_finite() || det.abs() < 1e-10 {
            return Err(Error::DegenerateForm {
                det: det.abs(),
                floor: 1e-10,
            });
        }
        let b_inv = lu.try_inverse().ok_or(Error::NotInvertible)?;

        let (c, antisymmetrized) = antisymmetrize(d, &c);
        Ok(LieData {
            dim: d,
            b,
            b_inv,
            c,
            antisymmetrized,
        })
    }

    /// Builds the structure tensor from a sparse (i, j, k, value) list.
    /// A canonical list, meaning every triple is strictly increasing and no
    /// triple repeats, assigns each value across its orbit with alternating
    /// signs verbatim. Any other list is raw data: duplicates sum, then the
    /// total is antisymmetrized.
    pub fn from_entries(
        b: DMatrix<f64>,
        entries: &[(usize, usize, usize, f64)],
    ) -> Result<Self> {
        let d = b.nrows();
        for &(i, j, k, v) in entries {
            for &ix in &[i, j, k] {
                if ix >= d {
                    return Err(Error::TensorIndexOutOfRange { i, j, k, dim: d });
                }
            }
            if !v.is_finite() {
                return Err(Error::NonFinite(format!(
                    "structure constant at ({i},{j},{k})"
                )));
            }
        }
        let increasing = entries.iter().all(|&(i, j, k, _)| i < j && j < k);
        let unique = {
            let mut seen: Vec<_> = entries.iter().map(|&(i, j, k, _)| (i, j, k)).collect();
            seen.sort_unstable();
            seen.windows(2).all(|w| w[0] != w[1])
        };
        let mut raw = Tensor::zeros(&[d, d, d]);
        if increasing && unique {
            for &(i, j, k, v) in entries {
                for (p, sign) in [
                    ([i, j, k], 1.0),
                    ([j, k, i], 1.0),
                    ([k, i, j], 1.0),
                    ([i, k, j], -1.0),
                    ([j, i, k], -1.0),
                    ([k, j, i], -1.0),
                ] {
                    raw.set(&p, sign * v);
                }
            }
        } else {
            for &(i, j, k, v) in entries {
                raw.add_assign_at(&[i, j, k], v);
            }
        }
        LieData::new(b, raw)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn form(&self) -> &DMatrix<f64> {
        &self.b
    }

    pub fn form_inverse(&self) -> &DMatrix<f64> {
        &self.b_inv
    }

    pub fn structure_tensor(&self) -> &Tensor {
        &self.c
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c.get(&[i, j, k])
    }

    /// True when the supplied structure tensor was not already totally
    /// antisymmetric.
    pub fn was_antisymmetrized(&self) -> bool {
        self.antisymmetrized
    }

    /// Largest absolute entry of the Jacobi tensor
    /// J_{abcg} = sum_e (c_{ab}{}^e c_{ecg} + c_{bc}{}^e c_{eag} + c_{ca}{}^e c_{ebg}),
    /// with the upper index raised through B^{-1}. Zero for honest Lie data.
    pub fn jacobi_residual(&self) -> f64 {
        let d = self.dim;
        // raised[a][b][e] = sum_l c_{abl} B^{le}
        let mut raised = Tensor::zeros(&[d, d, d]);
        for a in 0..d {
            for b in 0..d {
                for e in 0..d {
                    let mut acc = 0.0;
                    for l in 0..d {
                        acc += self.c.get(&[a, b, l]) * self.b_inv[(l, e)];
                    }
                    raised.set(&[a, b, e], acc);
                }
            }
        }
        let mut worst = 0.0f64;
        for a in 0..d {
            for b in 0..d {
                for cc in 0..d {
                    for g in 0..d {
                        let mut acc = 0.0;
                        for e in 0..d {
                            acc += raised.get(&[a, b, e]) * self.c.get(&[e, cc, g])
                                + raised.get(&[b, cc, e]) * self.c.get(&[e, a, g])
                                + raised.get(&[cc, a, e]) * self.c.get(&[e, b, g]);
                        }
                        worst = worst.max(acc.abs());
                    }
                }
            }
        }
        worst
    }
}

fn antisymmetrize(d: usize, raw: &Tensor) -> (Tensor, bool) {
    let mut out = Tensor::zeros(&[d, d, d]);
    let mut changed = false;
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                if (i == j || j == k || i == k) && raw.get(&[i, j, k]) != 0.0 {
                    // Repeated indices are annihilated by antisymmetry.
                    changed = true;
                }
            }
        }
    }
    for i in 0..d {
        for j in (i + 1)..d {
            for k in (j + 1)..d {
                let orbit = [
                    ([i, j, k], 1.0),
                    ([j, k, i], 1.0),
                    ([k, i, j], 1.0),
                    ([i, k, j], -1.0),
                    ([j, i, k], -1.0),
                    ([k, j, i], -1.0),
                ];
                // An exactly antisymmetric orbit is kept bit for bit, so
                // antisymmetric tensors are fixed points of this map.
                let rep = raw.get(&[i, j, k]);
                let value = if orbit.iter().all(|&(p, sign)| raw.get(&p) == sign * rep) {
                    rep
                } else {
                    changed = true;
                    (raw.get(&[i, j, k]) - raw.get(&[i, k, j]) - raw.get(&[j, i, k])
                        + raw.get(&[j, k, i])
                        + raw.get(&[k, i, j])
                        - raw.get(&[k, j, i]))
                        / 6.0
                };
                for (p, sign) in orbit {
                    out.set(&p, sign * value);
                }
            }
        }
    }
    (out, changed)
}

/// su(2) in the basis E_j = -(i/2) sigma_j, with B the trace form of the
/// defining representation: B = -(1/2) I and c_{IJK} = -(1/2) eps_{IJK}.
pub fn su2_data() -> LieData {
    let b = DMatrix::from_diagonal_element(3, 3, -0.5);
    let mut c = Tensor::zeros(&[3, 3, 3]);
    for (p, sign) in [
        ([0usize, 1, 2], 1.0),
        ([1, 2, 0], 1.0),
        ([2, 0, 1], 1.0),
        ([0, 2, 1], -1.0),
        ([2, 1, 0], -1.0),
        ([1, 0, 2], -1.0),
    ] {
        c.set(&p, -0.5 * sign);
    }
    LieData::new(b, c).expect("su(2) data is valid")
}

/// su(n) in the anti-Hermitian basis E_{jk}-E_{kj}, i(E_{jk}+E_{kj}) for
/// j < k and i(E_{ll}-E_{l+1,l+1}), with B the trace form of the defining
/// representation. This normalization gives B(h, h) = 2 on the coroots
/// h = E_{ll} - E_{l+1,l+1} of the complexification.
pub fn sun_data(n: usize) -> Result<LieData> {
    if n < 2 {
        return Err(Error::InvalidLieData(format!(
            "su(n) needs n >= 2, got {n}"
        )));
    }
    let one = Complex::new(1.0, 0.0);
    let i_unit = Complex::new(0.0, 1.0);
    let mut basis: Vec<DMatrix<Complex<f64>>> = Vec::with_capacity(n * n - 1);
    for j in 0..n {
        for k in (j + 1)..n {
            let mut x = DMatrix::zeros(n, n);
            x[(j, k)] = one;
            x[(k, j)] = -one;
            basis.push(x);
            let mut y = DMatrix::zeros(n, n);
            y[(j, k)] = i_unit;
            y[(k, j)] = i_unit;
            basis.push(y);
        }
    }
    for l in 0..n - 1 {
        let mut h = DMatrix::zeros(n, n);
        h[(l, l)] = i_unit;
        h[(l + 1, l + 1)] = -i_unit;
        basis.push(h);
    }
    let d = basis.len();
    debug_assert_eq!(d, n * n - 1);

    let real_trace = |m: &DMatrix<Complex<f64>>| -> f64 {
        let t = m.trace();
        debug_assert!(t.im.abs() < 1e-12);
        t.re
    };
    let b = DMatrix::from_fn(d, d, |i, j| real_trace(&(&basis[i] * &basis[j])));
    let mut c = Tensor::zeros(&[d, d, d]);
    for i in 0..d {
        for j in 0..d {
            let bracket = &basis[i] * &basis[j] - &basis[j] * &basis[i];
            for k in 0..d {
                c.set(&[i, j, k], real_trace(&(&bracket * &basis[k])));
            }
        }
    }
    LieData::new(b, c)
}

/// The weight b(Gamma): contract c at each vertex (axes in the vertex's
/// cyclic order) and B^{-1} along each edge.
pub fn lie_weight(data: &LieData, og: &OrientedGraph) -> Result<f64> {
    let legs: Vec<[usize; 3]> = (0..og.graph().num_vertices())
        .map(|v| og.vertex_order(v))
        .collect();
    contract_graph(og.graph(), &data.c, &data.b_inv, &legs)
}

/// The decoupled weight: a geometric factor times the Lie factor. Reversing
/// the orientation flips both signs, so the product is orientation-free.
pub fn combined_weight(data: &LieData, geometric_factor: f64, og: &OrientedGraph) -> Result<f64> {
    Ok(geometric_factor * lie_weight(data, og)?)
}
