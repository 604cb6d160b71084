//! The asymptotic expansion of the oscillatory integral with a cubic
//! perturbation: Z_k / Z(0) ~ sum over m of c_m k^{-m}, where
//!
//!   c_m = i^m * sum over 2m-vertex graph classes of W(Gamma) / |Aut Gamma|.
//!
//! Restricting the sum to connected classes gives the expansion of
//! log(Z_k / Z(0)), and exponentiating that formal series must reproduce the
//! full one. The series is asymptotic, not convergent; nothing here resums.

use num_complex::Complex64;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::graph::{enumerate_graphs, TrivalentGraph};
use crate::tensor::{graph_weight, CubicModel};
use crate::wick::{expectation_gauss_hermite, visit_pairings};

/// One graph class's contribution to one coefficient.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub order: usize,
    pub graph: TrivalentGraph,
    pub aut_order: u64,
    /// 1 / |Aut|, exact.
    pub symmetry_factor: Ratio<i64>,
    pub weight: f64,
    pub connected: bool,
    /// weight * symmetry_factor, before the i^m phase.
    pub contribution: f64,
}

/// Coefficients c_0..c_M of the k^{-m} expansion with the complete per-graph
/// ledger behind them.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeriesExpansion {
    pub max_order: usize,
    pub coefficients: Vec<Complex64>,
    pub ledger: Vec<LedgerEntry>,
}

/// The same expansion restricted to connected graphs: the log-series.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConnectedSeries {
    pub max_order: usize,
    pub coefficients: Vec<Complex64>,
    pub ledger: Vec<LedgerEntry>,
}

fn expand_impl(model: &CubicModel, max_order: usize, cfg: &Config, connected_only: bool)
    -> Result<(Vec<Complex64>, Vec<LedgerEntry>)>
{
    if max_order > cfg.max_loop_order {
        return Err(Error::LoopOrderOutOfRange {
            requested: max_order,
            max: cfg.max_loop_order,
        });
    }
    let mut coefficients = vec![Complex64::new(1.0, 0.0)];
    if connected_only {
        // log Z has no constant term.
        coefficients[0] = Complex64::new(0.0, 0.0);
    }
    let mut ledger = Vec::new();
    for m in 1..=max_order {
        let table = enumerate_graphs(m, cfg.max_loop_order)?;
        let mut sum = 0.0f64;
        for class in &table.classes {
            if connected_only && !class.connected {
                continue;
            }
            let weight = graph_weight(model, &class.graph)?;
            let symmetry_factor = Ratio::new(1i64, class.aut_order as i64);
            let contribution = weight / class.aut_order as f64;
            sum += contribution;
            ledger.push(LedgerEntry {
                order: m,
                graph: class.graph.clone(),
                aut_order: class.aut_order,
                symmetry_factor,
                weight,
                connected: class.connected,
                contribution,
            });
        }
        coefficients.push(Complex64::i().powu(m as u32) * sum);
    }
    Ok((coefficients, ledger))
}

/// Full expansion of Z_k / Z(0) to order `max_order` in k^{-1}.
pub fn expand(model: &CubicModel, max_order: usize, cfg: &Config) -> Result<SeriesExpansion> {
    let (coefficients, ledger) = expand_impl(model, max_order, cfg, false)?;
    Ok(SeriesExpansion {
        max_order,
        coefficients,
        ledger,
    })
}

/// Expansion of log(Z_k / Z(0)): connected classes only.
pub fn expand_connected(
    model: &CubicModel,
    max_order: usize,
    cfg: &Config,
) -> Result<ConnectedSeries> {
    let (coefficients, ledger) = expand_impl(model, max_order, cfg, true)?;
    Ok(ConnectedSeries {
        max_order,
        coefficients,
        ledger,
    })
}

/// Exponentiates a formal power series with zero constant term, returning
/// the coefficients of exp(l): c_0 = 1, c_n = (1/n) sum_j j l_j c_{n-j}.
pub fn series_exp(log_coefficients: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(1.0, 0.0)];
    for n in 1..log_coefficients.len() {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 1..=n {
            acc += (j as f64) * log_coefficients[j] * out[n - j];
        }
        out.push(acc / n as f64);
    }
    out
}

/// Coefficient c_m recomputed from scratch as the raw Wick sum over all
/// (6m-1)!! pairings, with no grouping into isomorphism classes:
/// c_m = i^m / ((2m)! 6^{2m}) * sum over pairings of W(graph(pairing)).
pub fn pairing_oracle_coefficient(
    model: &CubicModel,
    m: usize,
    cfg: &Config,
) -> Result<Complex64> {
    if m == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if m > cfg.max_loop_order {
        return Err(Error::LoopOrderOutOfRange {
            requested: m,
            max: cfg.max_loop_order,
        });
    }
    let mut sum = 0.0f64;
    let mut failure: Option<Error> = None;
    visit_pairings(6 * m, |pairs| {
        if failure.is_some() {
            return;
        }
        match TrivalentGraph::new(2 * m, pairs.iter().copied())
            .and_then(|g| graph_weight(model, &g))
        {
            Ok(w) => sum += w,
            Err(e) => failure = Some(e),
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let mut norm = 1.0f64;
    for j in 1..=2 * m {
        norm *= j as f64;
    }
    norm *= 36.0f64.powi(m as i32);
    Ok(Complex64::i().powu(m as u32) * sum / norm)
}

/// Evaluates sum of coefficients[m] * k^{-m}.
pub fn evaluate_series(coefficients: &[Complex64], k: f64) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    let mut power = 1.0f64;
    for &c in coefficients {
        total += c * power;
        power /= k;
    }
    total
}

/// Result of checking the euclidean series against direct quadrature.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TruncationCheck {
    pub series_value: f64,
    pub quadrature_value: f64,
    pub relative_error: f64,
}

/// Integrates the euclidean Gaussian times the exponential truncated at
/// degree 6M and compares with the euclidean series sum_{m<=M} (c_m/i^m) k^{-m}.
/// The two are equal up to quadrature roundoff: the truncated polynomial's
/// even blocks reproduce exactly the orders m <= M and its odd blocks
/// integrate to zero.
pub fn euclidean_truncation_check(
    model: &CubicModel,
    max_order: usize,
    k: f64,
    cfg: &Config,
) -> Result<TruncationCheck> {
    let expansion = expand(model, max_order, cfg)?;
    let mut series_value = 0.0f64;
    for (m, &c) in expansion.coefficients.iter().enumerate() {
        let real = (c / Complex64::i().powu(m as u32)).re;
        series_value += real / k.powi(m as i32);
    }

    let cubic = &model.cubic;
    let n = model.dim();
    let cubic_value = move |x: &[f64]| {
        let mut acc = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    acc += cubic.entry(i, j, l) * x[i] * x[j] * x[l];
                }
            }
        }
        acc
    };
    let nodes = 3 * max_order + 4;
    let quadrature_value = expectation_gauss_hermite(&model.quadratic, k, nodes, |x| {
        let v = -k * cubic_value(x) / 6.0;
        let mut term = 1.0f64;
        let mut total = 1.0f64;
        for degree in 1..=2 * max_order {
            term *= v / degree as f64;
            total += term;
        }
        total
    })?;

    let scale = series_value.abs().max(quadrature_value.abs()).max(1e-300);
    Ok(TruncationCheck {
        series_value,
        quadrature_value,
        relative_error: (series_value - quadrature_value).abs() / scale,
    })
}
