//! Slack matrices of regular n-gons.
//!
//! S_n is circulant: row i is the coefficient vector shifted one step to the
//! right, S[i][j] = c_{j-i}. The entries vanish exactly on the main diagonal
//! and the diagonal below it (mod n).

use crate::coeffs::CoefficientFn;
use crate::error::Result;
use crate::matrix::Matrix;

/// Entries whose raw magnitude falls below `ZERO_SNAP * c_1` are stored as
/// exact zeros so the support pattern is unambiguous.
pub const ZERO_SNAP: f64 = 1e-12;

/// A dense slack matrix of the regular n-gon. `scale` is 1 for the raw matrix
/// and 1/c_1 for the normalized form whose smallest positive entry is 1.
#[derive(Clone, Debug)]
pub struct SlackMatrix {
    n: usize,
    scale: f64,
    mat: Matrix,
}

impl SlackMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.mat[(i, j)]
    }

    /// Wraps an already parsed dense matrix (used by the dump reader).
    pub(crate) fn from_parts(n: usize, scale: f64, mat: Matrix) -> Self {
        Self { n, scale, mat }
    }
}

/// Builds the n-by-n slack matrix S[i][j] = scale * c_{j-i}.
pub fn slack_matrix(n: usize, normalized: bool) -> Result<SlackMatrix> {
    let cf = CoefficientFn::new(n)?;
    let scale = if normalized { 1.0 / cf.c1() } else { 1.0 };
    let snap = ZERO_SNAP * cf.c1();

    let mut row0: Vec<f64> = (0..n as i64).map(|k| cf.eval(k)).collect();
    for x in &mut row0 {
        if x.abs() < snap {
            *x = 0.0;
        } else {
            *x *= scale;
        }
    }

    let mut mat = Matrix::zeros(n, n);
    for i in 0..n {
        // Row i is row 0 rotated right by i places.
        let row = mat.row_mut(i);
        row[i..].copy_from_slice(&row0[..n - i]);
        row[..i].copy_from_slice(&row0[n - i..]);
    }
    Ok(SlackMatrix {
        n,
        scale,
        mat,
    })
}
