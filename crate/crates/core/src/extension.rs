//! Extended formulations induced by nonnegative factorizations.
//!
//! If S = U V is the slack matrix of P = {x | A x <= b}, then
//! P = {x | A x + U y = b, y >= 0}: a lifted description whose facet count is
//! the inner dimension r rather than n.

use std::f64::consts::PI;

use crate::coeffs::CoefficientFn;
use crate::error::{Error, Result};
use crate::factorize::Factorization;
use crate::matrix::Matrix;

/// Vertex-consistency tolerance, relative to the largest slack value.
const SLACK_IDENTITY_TOL: f64 = 1e-8;

/// The lifted system {x | A x + U y = b, y >= 0} for a regular n-gon.
#[derive(Clone, Debug)]
pub struct ExtendedFormulation {
    a: Matrix,
    b: Vec<f64>,
    u: Matrix,
    vertices: Vec<[f64; 2]>,
}

impl ExtendedFormulation {
    pub fn n(&self) -> usize {
        self.b.len()
    }

    /// Number of lifted nonnegative variables; the facets of the extension.
    pub fn num_lifted_vars(&self) -> usize {
        self.u.cols()
    }

    /// Facet normals, one row per original inequality.
    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn u(&self) -> &Matrix {
        &self.u
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }
}

/// Vertices of the regular n-gon on the unit circle, vertex j at angle 2*pi*j/n.
pub fn polygon_vertices(n: usize) -> Result<Vec<[f64; 2]>> {
    if n < 3 {
        return Err(Error::Domain(format!("polygon needs n >= 3, got {n}")));
    }
    Ok((0..n)
        .map(|j| {
            let t = 2.0 * PI * j as f64 / n as f64;
            [t.cos(), t.sin()]
        })
        .collect())
}

/// Builds the lifted system from a factorization of scale * S_n, checking the
/// slack identity b - A x_j = U V[:, j] at every polygon vertex.
pub fn extension_from_factorization(f: &Factorization) -> Result<ExtendedFormulation> {
    let n = f.n();
    let cf = CoefficientFn::new(n)?;
    let vertices = polygon_vertices(n)?;

    // Facet i supports vertices i-1 and i; its outward normal bisects them.
    // The apothem of the unit-circumradius n-gon is cos(pi/n). Rows are
    // multiplied by the factorization's scale so slacks match U V exactly.
    let apothem = (PI / n as f64).cos();
    let mut a = Matrix::zeros(n, 2);
    let mut b = vec![0.0; n];
    for i in 0..n {
        let phi = (2.0 * i as f64 - 1.0) * PI / n as f64;
        a[(i, 0)] = f.scale() * phi.cos();
        a[(i, 1)] = f.scale() * phi.sin();
        b[i] = f.scale() * apothem;
    }

    let smax: f64 = (0..n as i64)
        .map(|k| (cf.eval(k) * f.scale()).abs())
        .fold(0.0, f64::max);
    let tol = SLACK_IDENTITY_TOL * smax;
    for (j, x) in vertices.iter().enumerate() {
        for i in 0..n {
            let slack = b[i] - a[(i, 0)] * x[0] - a[(i, 1)] * x[1];
            let lifted: f64 = (0..f.r()).map(|t| f.u()[(i, t)] * f.v()[(t, j)]).sum();
            let dev = (slack - lifted).abs();
            if dev > tol {
                return Err(Error::VertexSlack {
                    vertex: j,
                    deviation: dev,
                });
            }
        }
    }

    Ok(ExtendedFormulation {
        a,
        b,
        u: f.u().clone(),
        vertices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorize::recursive_factorize;

    #[test]
    fn hexagon_lifts_to_five_facets() {
        let f = recursive_factorize(6).unwrap().normalized().unwrap();
        let ext = extension_from_factorization(&f).unwrap();
        assert_eq!(ext.num_lifted_vars(), 5);
        assert_eq!(ext.n(), 6);
    }

    #[test]
    fn square_lift_is_the_square_itself() {
        let f = recursive_factorize(4).unwrap();
        let ext = extension_from_factorization(&f).unwrap();
        assert_eq!(ext.num_lifted_vars(), 4);
    }

    #[test]
    fn sixteen_gon_has_eight_lifted_vars() {
        let f = recursive_factorize(16).unwrap();
        let ext = extension_from_factorization(&f).unwrap();
        assert_eq!(ext.num_lifted_vars(), 8);
    }

    #[test]
    fn corrupted_factorization_is_rejected() {
        let f = recursive_factorize(8).unwrap();
        let mut u = f.u().clone();
        u[(0, 0)] += 0.5;
        u[(3, 2)] += 0.5;
        let bad = Factorization::new(8, 1.0, u, f.v().clone()).unwrap();
        assert!(matches!(
            extension_from_factorization(&bad),
            Err(Error::VertexSlack { .. })
        ));
    }

    #[test]
    fn raw_and_normalized_scales_both_check_out() {
        for n in [5usize, 7, 12, 100] {
            let raw = recursive_factorize(n).unwrap();
            extension_from_factorization(&raw).unwrap();
            let norm = raw.normalized().unwrap();
            extension_from_factorization(&norm).unwrap();
        }
    }
}
