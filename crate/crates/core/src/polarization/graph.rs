//! Euclidean polarisation of flat-chart graphs about the mirror `x1 = 0`.

use crate::achronal::FlatGraph;
use crate::error::Result;

use super::SymmetrizeSign;

/// Pairs node `(i, j)` with its mirror image `(N - i, j)`; on the chosen half
/// (`Plus` is `x1 > 0`) the larger of the two values is kept, on the other the
/// smaller. Level functions are polarised the same way, so the domain is
/// polarised as a set. Mirror nodes are left alone.
pub fn polarize_graph(g: &FlatGraph, toward: SymmetrizeSign) -> Result<FlatGraph> {
    let side = g.side();
    let n = g.cells();
    let pick = |v: &[f64]| -> Vec<f64> {
        (0..v.len())
            .map(|k| {
                let (i, j) = (k % side, k / side);
                let m = g.index(n - i, j);
                let (a, b) = (v[k], v[m]);
                let upper = match toward {
                    SymmetrizeSign::Plus => 2 * i > n,
                    SymmetrizeSign::Minus => 2 * i < n,
                };
                if 2 * i == n {
                    a
                } else if upper {
                    a.max(b)
                } else {
                    a.min(b)
                }
            })
            .collect()
    };
    let levels = g.levels().iter().map(|l| pick(l)).collect();
    g.with_values(pick(g.values()))?.with_levels(levels)
}
