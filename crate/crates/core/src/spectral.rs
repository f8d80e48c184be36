//! Perron roots of nonnegative matrices: a floating-point estimate by power
//! iteration and an exact integer test for `rho > 1`.

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::matrix::TransferMatrix;

pub const POWER_ITERATION_TOLERANCE: f64 = 1e-10;
pub const POWER_ITERATION_MAX_STEPS: usize = 10_000;

/// Strongly connected components of the support digraph (`i -> j` iff
/// `a_ij > 0`).
pub fn strong_components(a: &TransferMatrix) -> Vec<Vec<usize>> {
    let n = a.dim();
    let mut graph = DiGraph::<(), ()>::with_capacity(n, n);
    let nodes: Vec<_> = (0..n).map(|_| graph.add_node(())).collect();
    for i in 0..n {
        for (j, &x) in a.row(i).iter().enumerate() {
            if x > 0 {
                graph.add_edge(nodes[i], nodes[j], ());
            }
        }
    }
    tarjan_scc(&graph)
        .into_iter()
        .map(|comp| {
            let mut c: Vec<usize> = comp.into_iter().map(|v| v.index()).collect();
            c.sort_unstable();
            c
        })
        .collect()
}

fn has_internal_edge(a: &TransferMatrix, comp: &[usize]) -> bool {
    comp.len() > 1 || a.get(comp[0], comp[0]) > 0
}

/// True iff the support digraph contains a directed cycle.
pub fn has_cycle(a: &TransferMatrix) -> bool {
    strong_components(a)
        .iter()
        .any(|comp| has_internal_edge(a, comp))
}

/// Exact test of `rho(a) > 1` for a nonnegative integer matrix.
///
/// `rho > 1` iff some strongly connected component is not a bare simple
/// cycle of unit weights: either an internal entry is at least 2 or some
/// vertex has two internal out-edges.
pub fn exceeds_one(a: &TransferMatrix) -> bool {
    strong_components(a).iter().any(|comp| {
        if !has_internal_edge(a, comp) {
            return false;
        }
        comp.iter().any(|&i| {
            let mut out = 0;
            for &j in comp {
                match a.get(i, j) {
                    0 => {}
                    1 => out += 1,
                    _ => return true,
                }
            }
            out >= 2
        })
    })
}

/// Perron root of a nonnegative matrix (zero for a nilpotent one).
///
/// Each strongly connected block `C` is iterated as `C + I`, which is
/// primitive, and stopped once the Collatz–Wielandt bracket
/// `min (Cx)_i / x_i <= rho <= max (Cx)_i / x_i` is tighter than the
/// relative tolerance.
pub fn spectral_radius(a: &TransferMatrix) -> f64 {
    strong_components(a)
        .iter()
        .filter(|comp| has_internal_edge(a, comp))
        .map(|comp| block_radius(a, comp))
        .fold(0.0, f64::max)
}

fn block_radius(a: &TransferMatrix, comp: &[usize]) -> f64 {
    let n = comp.len();
    let block: Vec<f64> = comp
        .iter()
        .flat_map(|&i| comp.iter().map(move |&j| a.get(i, j) as f64))
        .collect();
    let mut x = vec![1.0; n];
    let mut y = vec![0.0; n];
    let (mut lo, mut hi) = (0.0, f64::INFINITY);
    for _ in 0..POWER_ITERATION_MAX_STEPS {
        for i in 0..n {
            let row = &block[i * n..(i + 1) * n];
            y[i] = x[i] + row.iter().zip(&x).map(|(r, v)| r * v).sum::<f64>();
        }
        lo = f64::INFINITY;
        hi = 0.0;
        for i in 0..n {
            let ratio = y[i] / x[i];
            lo = f64::min(lo, ratio);
            hi = f64::max(hi, ratio);
        }
        let (lo_rho, hi_rho) = (lo - 1.0, hi - 1.0);
        if hi_rho - lo_rho <= POWER_ITERATION_TOLERANCE * hi_rho.max(1.0) {
            break;
        }
        let scale = y.iter().cloned().fold(0.0, f64::max);
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi / scale;
        }
    }
    0.5 * (lo + hi) - 1.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[u64]]) -> TransferMatrix {
        TransferMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn triangular_unit_matrix() {
        let a = m(&[&[1, 1], &[0, 1]]);
        assert!(!exceeds_one(&a));
        assert!((spectral_radius(&a) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn scalar_two() {
        let a = m(&[&[2]]);
        assert!(exceeds_one(&a));
        assert!((spectral_radius(&a) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn identity_has_radius_one() {
        for n in [1, 2, 5, 16] {
            let a = TransferMatrix::identity(n);
            assert!(!exceeds_one(&a));
            assert!((spectral_radius(&a) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn nilpotent_is_zero() {
        let a = m(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        assert_eq!(spectral_radius(&a), 0.0);
        assert!(!exceeds_one(&a));
        assert!(!has_cycle(&a));
    }

    #[test]
    fn periodic_cycle_converges() {
        // A permutation cycle is irreducible but not primitive.
        let mut a = TransferMatrix::zeros(7);
        for i in 0..7 {
            a.set(i, (i + 1) % 7, 1);
        }
        assert!(!exceeds_one(&a));
        assert!((spectral_radius(&a) - 1.0).abs() < 1e-10);
        a.set(3, 0, 1);
        assert!(exceeds_one(&a));
        assert!(spectral_radius(&a) > 1.0 + 1e-9);
    }

    #[test]
    fn golden_mean() {
        let a = m(&[&[1, 1], &[1, 0]]);
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((spectral_radius(&a) - golden).abs() < 1e-10 * golden);
        assert!(exceeds_one(&a));
    }
}
