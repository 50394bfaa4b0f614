use crate::exactalg::{EigenDecomposition, Matrix};

/// Support graph of `partner` on the eigenspaces of `eig`: `{i, j}` (i ≠ j)
/// is an edge iff the block `E_i B E_j` is nonzero.
pub fn support_graph(eig: &EigenDecomposition, partner: &Matrix) -> Vec<Vec<bool>> {
    let k = eig.len();
    let idem = eig.primitive_idempotents();
    let left: Vec<Matrix> = idem.iter().map(|e| e.mul(partner)).collect();
    let mut adj = vec![vec![false; k]; k];
    for i in 0..k {
        for j in i + 1..k {
            let nonzero = !left[i].mul(&idem[j]).is_zero() || !left[j].mul(&idem[i]).is_zero();
            adj[i][j] = nonzero;
            adj[j][i] = nonzero;
        }
    }
    adj
}

/// Orderings of the eigenspaces of `eig` under which `partner` acts
/// block-tridiagonally. These are exactly the traversals of the support
/// graph when that graph is a simple path: two traversals for d ≥ 1, one for
/// d = 0, and none when the graph is not a path.
pub fn support_path_orderings(eig: &EigenDecomposition, partner: &Matrix) -> Vec<Vec<usize>> {
    let k = eig.len();
    if k == 1 {
        return vec![vec![0]];
    }
    let adj = support_graph(eig, partner);
    path_traversals(&adj)
}

pub(crate) fn path_traversals(adj: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let k = adj.len();
    let degree: Vec<usize> = adj.iter().map(|row| row.iter().filter(|&&b| b).count()).collect();
    let edges: usize = degree.iter().sum::<usize>() / 2;
    if edges != k - 1 || degree.iter().any(|&d| d == 0 || d > 2) {
        return Vec::new();
    }
    let Some(start) = degree.iter().position(|&d| d == 1) else {
        return Vec::new();
    };
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while let Some(next) = (0..k).find(|&j| adj[cur][j] && j != prev) {
        if order.contains(&next) {
            return Vec::new();
        }
        order.push(next);
        prev = cur;
        cur = next;
    }
    if order.len() != k {
        return Vec::new();
    }
    let reversed: Vec<usize> = order.iter().rev().copied().collect();
    vec![order, reversed]
}
