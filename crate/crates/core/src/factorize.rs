//! Explicit nonnegative factorization of slack matrices of regular n-gons.
//!
//! The construction is recursive. On the current k-by-l upper-left block
//! (k = l or l+1) of S_n, two nonnegative rank-one corrections zero out the
//! anti-diagonal band i+j = l+1, l+2 (1-based). The residual then repeats rows
//! and columns, so a factorization of its k'-by-ceil(l/2) upper-left block
//! lifts to one of the whole block at a cost of two extra inner dimensions.
//! Blocks with at most four columns are factorized trivially as B = B I.
//!
//! The inner dimension reached this way is `upper_bound_size(n)`:
//! 2 ceil(log2 n) - 1 when 2^(k-1) < n <= 2^(k-1) + 2^(k-2), else 2 ceil(log2 n).

use crate::coeffs::CoefficientFn;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::slack::{SlackMatrix, ZERO_SNAP};

/// Factor entries below this throw; anything negative above it is rounding
/// noise and clamps to zero.
const NEG_ABORT: f64 = -1e-10;

/// Relative tolerance of the exactness check `u v^T = correction matrix`.
const RANK_ONE_TOL: f64 = 1e-10;

/// Relative residual allowed for the assembled factorization.
const CONSTRUCTION_TOL: f64 = 1e-9;

/// Size of the factorization produced by `recursive_factorize`, as a function
/// of n alone. With k = ceil(log2 n): 2k-1 if 2^(k-1) < n <= 2^(k-1) + 2^(k-2),
/// else 2k.
pub fn upper_bound_size(n: usize) -> Result<usize> {
    if n < 2 {
        return Err(Error::Domain(format!("upper_bound_size needs n >= 2, got {n}")));
    }
    let k = (usize::BITS - (n - 1).leading_zeros()) as usize;
    if k >= 2 && n <= (1usize << (k - 1)) + (1usize << (k - 2)) {
        Ok(2 * k - 1)
    } else {
        Ok(2 * k)
    }
}

/// The k-by-l upper-left block of S_n at some recursion depth.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockSpec {
    pub n: usize,
    pub k: usize,
    pub l: usize,
}

impl BlockSpec {
    pub fn new(n: usize, k: usize, l: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Domain(format!("block needs n >= 3, got {n}")));
        }
        if !(1 <= l && l <= k && k <= l + 1 && l <= n) {
            return Err(Error::Domain(format!(
                "invalid block shape k={k}, l={l} for n={n}"
            )));
        }
        Ok(Self { n, k, l })
    }

    /// Shape of the upper-left block the recursion descends into.
    pub fn child_dims(&self) -> (usize, usize) {
        child_dims(self.k, self.l)
    }
}

fn child_dims(k: usize, l: usize) -> (usize, usize) {
    let l2 = l.div_ceil(2);
    // k' = ceil(k/2), except k' = l/2 + 1 when k = l is even.
    let k2 = if k == l && l % 2 == 0 {
        l / 2 + 1
    } else {
        k.div_ceil(2)
    };
    (k2, l2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorrectionKind {
    UpperRight,
    LowerLeft,
}

/// One rank-one correction, zero-padded to the full block: `u` has length k,
/// `v` length l, and u v^T equals the removed matrix on its sub-rectangle.
#[derive(Clone, Debug)]
pub struct RankOneFactor {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub kind: CorrectionKind,
}

/// The rows-by-cols matrix with entry (i, j) = c_{alpha-i+j} - c_{beta-i-j}
/// (1-based i, j). Rank one for any fixed alpha, beta, n; not necessarily
/// nonnegative for arbitrary parameters.
pub fn correction_matrix(
    n: usize,
    alpha: i64,
    beta: i64,
    rows: usize,
    cols: usize,
) -> Result<Matrix> {
    if rows < 1 || cols < 1 {
        return Err(Error::Domain(format!(
            "correction matrix needs rows, cols >= 1, got {rows}x{cols}"
        )));
    }
    let cf = CoefficientFn::new(n)?;
    let mut m = Matrix::zeros(rows, cols);
    for i in 1..=rows {
        for j in 1..=cols {
            m[(i - 1, j - 1)] =
                cf.eval(alpha - i as i64 + j as i64) - cf.eval(beta - i as i64 - j as i64);
        }
    }
    Ok(m)
}

struct CorrectionGeometry {
    rows: usize,
    cols: usize,
    row_off: usize,
    col_off: usize,
    alpha: i64,
    beta: i64,
}

fn correction_geometry(k: usize, l: usize, kind: CorrectionKind) -> CorrectionGeometry {
    match kind {
        CorrectionKind::UpperRight => {
            let p = l.div_ceil(2);
            CorrectionGeometry {
                rows: p,
                cols: p,
                row_off: 0,
                col_off: l - p,
                alpha: (l - p) as i64,
                beta: (p + 1) as i64,
            }
        }
        CorrectionKind::LowerLeft => {
            let p = l / 2;
            let q = k - l.div_ceil(2);
            CorrectionGeometry {
                rows: q,
                cols: p,
                row_off: k - q,
                col_off: 0,
                // alpha = q - k = -ceil(l/2), beta = floor(l/2) + 1.
                alpha: q as i64 - k as i64,
                beta: (p + 1) as i64,
            }
        }
    }
}

/// Computes the rank-one factor removed from the given block. Equals, after
/// zero padding, the vectors displayed in the worked 9-gon example.
pub fn rank_one_correction(block: &BlockSpec, kind: CorrectionKind) -> Result<RankOneFactor> {
    let cf = CoefficientFn::new(block.n)?;
    rank_one_correction_impl(&cf, block.k, block.l, kind)
}

fn rank_one_correction_impl(
    cf: &CoefficientFn,
    k: usize,
    l: usize,
    kind: CorrectionKind,
) -> Result<RankOneFactor> {
    if l < 5 {
        return Err(Error::Contract(format!(
            "rank-one corrections apply only to blocks with l >= 5, got l={l}"
        )));
    }
    let geom = correction_geometry(k, l, kind);
    let snap = ZERO_SNAP * cf.c1();
    let ctx = match kind {
        CorrectionKind::UpperRight => "upper-right correction",
        CorrectionKind::LowerLeft => "lower-left correction",
    };
    // Removed-matrix entry at 1-based (i, j) inside the sub-rectangle,
    // clamped: tiny values snap to zero, anything below the abort
    // threshold is a construction bug and not rounding noise.
    let ent = |i: usize, j: usize| -> Result<f64> {
        let x = cf.eval(geom.alpha - i as i64 + j as i64) - cf.eval(geom.beta - i as i64 - j as i64);
        if x < NEG_ABORT {
            Err(Error::Negativity {
                context: ctx,
                row: i,
                col: j,
                value: x,
            })
        } else if x < snap {
            Ok(0.0)
        } else {
            Ok(x)
        }
    };

    // Pivot: the entry where the removed matrix touches the new zero cross.
    // For the upper-right block it sits in the last row, first structurally
    // nonzero column; for the lower-left, first structurally nonzero row,
    // last column. Its value is c_1 in both cases.
    let (pi, pj) = match kind {
        CorrectionKind::UpperRight => {
            let mut j = 1;
            while j <= geom.cols && ent(geom.rows, j)? <= snap {
                j += 1;
            }
            if j > geom.cols {
                return Err(Error::Inconsistent(format!(
                    "no pivot in last row of {ctx} (k={k}, l={l})"
                )));
            }
            (geom.rows, j)
        }
        CorrectionKind::LowerLeft => {
            let mut i = 1;
            while i <= geom.rows && ent(i, geom.cols)? <= snap {
                i += 1;
            }
            if i > geom.rows {
                return Err(Error::Inconsistent(format!(
                    "no pivot in last column of {ctx} (k={k}, l={l})"
                )));
            }
            (i, geom.cols)
        }
    };
    let pivot = ent(pi, pj)?;

    // u = pivot column of the removed matrix, v = pivot row over the pivot.
    let mut u = vec![0.0; k];
    for i in 1..=geom.rows {
        u[geom.row_off + i - 1] = ent(i, pj)?;
    }
    let mut v = vec![0.0; l];
    for j in 1..=geom.cols {
        let x = ent(pi, j)? / pivot;
        v[geom.col_off + j - 1] = if x.abs() < ZERO_SNAP { 0.0 } else { x };
    }

    // The split is exact only if the removed matrix is rank one; confirm.
    // Entry (i, j) reads c at alpha-i+j and beta-i-j; along a row the first
    // index steps up and the second steps down, so both walk the coefficient
    // table without any modular arithmetic.
    let tab = cf.table();
    let n = cf.n() as i64;
    let mut max_entry = 0.0f64;
    let mut max_err = 0.0f64;
    let mut worst_neg = 0.0f64;
    let mut worst_neg_at = (0usize, 0usize);
    for i in 1..=geom.rows {
        let ui = u[geom.row_off + i - 1];
        let mut a = (geom.alpha - i as i64 + 1).rem_euclid(n) as usize;
        let mut b = (geom.beta - i as i64 - 1).rem_euclid(n) as usize;
        let vrow = &v[geom.col_off..geom.col_off + geom.cols];
        for (j, &vj) in vrow.iter().enumerate() {
            let mut m = tab[a] - tab[b];
            if m < worst_neg {
                worst_neg = m;
                worst_neg_at = (i, j + 1);
            }
            if m.abs() < snap {
                m = 0.0;
            }
            max_entry = max_entry.max(m.abs());
            max_err = max_err.max((ui * vj - m).abs());
            a += 1;
            if a == n as usize {
                a = 0;
            }
            b = if b == 0 { n as usize - 1 } else { b - 1 };
        }
    }
    if worst_neg < NEG_ABORT {
        return Err(Error::Negativity {
            context: ctx,
            row: worst_neg_at.0,
            col: worst_neg_at.1,
            value: worst_neg,
        });
    }
    if max_err > RANK_ONE_TOL * max_entry.max(f64::MIN_POSITIVE) {
        return Err(Error::Inconsistent(format!(
            "{ctx} is not numerically rank one (k={k}, l={l}, err={max_err:.3e}, max={max_entry:.3e})"
        )));
    }
    Ok(RankOneFactor { u, v, kind })
}

/// Raw circulant block entries c_{j-i}, 1 <= i <= k, 1 <= j <= l (1-based).
fn circulant_block(cf: &CoefficientFn, k: usize, l: usize) -> Matrix {
    let snap = ZERO_SNAP * cf.c1();
    let mut b = Matrix::zeros(k, l);
    for i in 0..k {
        let row = b.row_mut(i);
        for (j, x) in row.iter_mut().enumerate() {
            let v = cf.eval(j as i64 - i as i64);
            *x = if v.abs() < snap { 0.0 } else { v };
        }
    }
    b
}

/// Base case of the recursion: B = B I_l, contributing l inner dimensions.
pub fn trivial_base_factorize(b: &Matrix, k: usize, l: usize) -> Result<(Matrix, Matrix)> {
    if l > 4 {
        return Err(Error::Contract(format!(
            "trivial factorization only applies for l <= 4, got l={l}"
        )));
    }
    if b.rows() != k || b.cols() != l {
        return Err(Error::Dimensions(format!(
            "block is {}x{}, expected {k}x{l}",
            b.rows(),
            b.cols()
        )));
    }
    Ok((b.clone(), Matrix::identity(l)))
}

fn rmap(k: usize, l: usize, k2: usize, i: usize) -> usize {
    if i < k2 {
        i
    } else if k == l {
        k - i
    } else {
        k - i - 1
    }
}

fn cmap(l: usize, l2: usize, j: usize) -> usize {
    if j < l2 {
        j
    } else {
        l - 1 - j
    }
}

/// Residual entry (0-based) of the block after both corrections.
fn residual_entry(cf: &CoefficientFn, ll: &RankOneFactor, ur: &RankOneFactor, i: usize, j: usize) -> f64 {
    cf.eval(j as i64 - i as i64) - ll.u[i] * ll.v[j] - ur.u[i] * ur.v[j]
}

/// Debug-only structural check of the corrected block: the anti-diagonal
/// cross is zero and the residual's duplicated rows/columns agree. Sampled on
/// large blocks to keep the cost bounded.
#[cfg(debug_assertions)]
fn check_residual_structure(
    cf: &CoefficientFn,
    k: usize,
    l: usize,
    ll: &RankOneFactor,
    ur: &RankOneFactor,
) {
    // The cross zeros cancel products u_i * v_j whose factors carry rounding
    // of order eps * max|v| ~ eps * n, so the achievable absolute accuracy
    // is about 1e-13 at n = 4096 while c1 decays like 1/n^2. The floor keeps
    // the check meaningful for large blocks; real defects show up at c1 scale,
    // six orders above it.
    let cross_tol = (1e-10 * cf.c1()).max(1e-12);
    let dup_tol = 1e-10;
    let stride = (l / 64).max(1);

    for i1 in 1..=k {
        for j1 in [l + 1 - i1, l + 2 - i1] {
            if (1..=l).contains(&j1) {
                let r = residual_entry(cf, ll, ur, i1 - 1, j1 - 1);
                debug_assert!(
                    r.abs() <= cross_tol,
                    "cross residual {r:.3e} at ({i1},{j1}) k={k} l={l}"
                );
            }
        }
    }

    // Columns j and l-j+1 coincide for j <= floor(l/2); rows i+s and k-i+1
    // for i <= floor(k/2), with s = 1 if k = l and s = 0 if k = l+1.
    for j1 in (1..=l / 2).step_by(stride) {
        for i1 in (1..=k).step_by(stride) {
            let a = residual_entry(cf, ll, ur, i1 - 1, j1 - 1);
            let b = residual_entry(cf, ll, ur, i1 - 1, l - j1);
            debug_assert!((a - b).abs() <= dup_tol, "dup cols {j1}/{} k={k} l={l}", l - j1 + 1);
        }
    }
    let s = if k == l { 1 } else { 0 };
    for i1 in (1..=k / 2).step_by(stride) {
        for j1 in (1..=l).step_by(stride) {
            let a = residual_entry(cf, ll, ur, i1 + s - 1, j1 - 1);
            let b = residual_entry(cf, ll, ur, k - i1, j1 - 1);
            debug_assert!((a - b).abs() <= dup_tol, "dup rows {}/{} k={k} l={l}", i1 + s, k - i1 + 1);
        }
    }
}

fn factor_block(cf: &CoefficientFn, k: usize, l: usize) -> Result<(Matrix, Matrix)> {
    if l <= 4 {
        let b = circulant_block(cf, k, l);
        return trivial_base_factorize(&b, k, l);
    }

    let ll = rank_one_correction_impl(cf, k, l, CorrectionKind::LowerLeft)?;
    let ur = rank_one_correction_impl(cf, k, l, CorrectionKind::UpperRight)?;
    #[cfg(debug_assertions)]
    check_residual_structure(cf, k, l, &ll, &ur);

    let (k2, l2) = child_dims(k, l);
    let (u2, v2) = factor_block(cf, k2, l2)?;

    let r = u2.cols() + 2;
    let mut u = Matrix::zeros(k, r);
    for i in 0..k {
        let src = rmap(k, l, k2, i);
        let row = u.row_mut(i);
        row[0] = ll.u[i];
        row[1] = ur.u[i];
        row[2..].copy_from_slice(u2.row(src));
    }
    let mut v = Matrix::zeros(r, l);
    v.row_mut(0).copy_from_slice(&ll.v);
    v.row_mut(1).copy_from_slice(&ur.v);
    for t in 0..v2.rows() {
        let src = v2.row(t);
        let dst = v.row_mut(2 + t);
        for (j, x) in dst.iter_mut().enumerate() {
            *x = src[cmap(l, l2, j)];
        }
    }
    Ok((u, v))
}

/// A nonnegative factorization U V of `scale * S_n` with inner dimension r.
#[derive(Clone, Debug)]
pub struct Factorization {
    n: usize,
    r: usize,
    scale: f64,
    u: Matrix,
    v: Matrix,
}

impl Factorization {
    /// Wraps externally supplied factors (dump files, hand-built tests).
    pub fn new(n: usize, scale: f64, u: Matrix, v: Matrix) -> Result<Self> {
        if u.rows() != n || v.cols() != n || u.cols() != v.rows() {
            return Err(Error::Dimensions(format!(
                "factors {}x{} and {}x{} do not fit an n = {n} slack matrix",
                u.rows(),
                u.cols(),
                v.rows(),
                v.cols()
            )));
        }
        Ok(Self {
            n,
            r: u.cols(),
            scale,
            u,
            v,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Scale of the matrix being factorized: U V = scale * S_n (raw).
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn u(&self) -> &Matrix {
        &self.u
    }

    pub fn v(&self) -> &Matrix {
        &self.v
    }

    /// Most negative entry across U and V.
    pub fn min_entry(&self) -> f64 {
        self.u.min_entry().min(self.v.min_entry())
    }

    /// Rescales the factorized matrix by `factor` (applied to U).
    pub fn rescale(&mut self, factor: f64) {
        self.u = self.u.scaled(factor);
        self.scale *= factor;
    }

    /// Converts a raw factorization into one of the paper-normalized matrix
    /// S_n / c_1, whose smallest positive entry is 1.
    pub fn normalized(mut self) -> Result<Self> {
        let c1 = CoefficientFn::new(self.n)?.c1();
        self.rescale(self.scale.recip() / c1);
        Ok(self)
    }
}

/// Tiled |U V - expected| maximum. Product tiles of a few rows by a
/// cache-sized column window are accumulated by axpy passes over V row
/// segments, skipping U's structural zeros; `fill_expected` writes the
/// segment [j0, j0 + out.len()) of reference row i into the scratch.
fn max_abs_residual_rows(
    u: &Matrix,
    v: &Matrix,
    mut fill_expected: impl FnMut(usize, usize, &mut [f64]),
) -> (f64, (usize, usize)) {
    const ROW_BLOCK: usize = 4;
    const COL_BLOCK: usize = 1024;
    let cols = v.cols();
    let r = v.rows();
    let mut prod = vec![0.0f64; ROW_BLOCK * COL_BLOCK];
    let mut expected = vec![0.0f64; COL_BLOCK];
    let mut max_abs = 0.0f64;
    let mut at = (0, 0);
    for i0 in (0..u.rows()).step_by(ROW_BLOCK) {
        let block = ROW_BLOCK.min(u.rows() - i0);
        for j0 in (0..cols).step_by(COL_BLOCK) {
            let w = COL_BLOCK.min(cols - j0);
            prod[..block * w].fill(0.0);
            for k in 0..r {
                let vseg = &v.row(k)[j0..j0 + w];
                for t in 0..block {
                    let a = u[(i0 + t, k)];
                    if a == 0.0 {
                        continue;
                    }
                    let dst = &mut prod[t * w..(t + 1) * w];
                    for (p, &b) in dst.iter_mut().zip(vseg) {
                        *p += a * b;
                    }
                }
            }
            for t in 0..block {
                let exp = &mut expected[..w];
                fill_expected(i0 + t, j0, exp);
                let row = &prod[t * w..(t + 1) * w];
                for (j, (&p, &e)) in row.iter().zip(exp.iter()).enumerate() {
                    let res = (p - e).abs();
                    if res > max_abs {
                        max_abs = res;
                        at = (i0 + t, j0 + j);
                    }
                }
            }
        }
    }
    (max_abs, at)
}

/// Max |U V - scale S_n| relative to max |scale S_n|, without materializing
/// S_n. Returns (relative residual, worst position).
fn residual_against_ngon(cf: &CoefficientFn, f: &Factorization) -> (f64, (usize, usize)) {
    let n = f.n;
    let table: Vec<f64> = (0..n as i64).map(|k| cf.eval(k) * f.scale).collect();
    let smax = table.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    let (max_abs, at) = max_abs_residual_rows(&f.u, &f.v, |i, j0, out| {
        // Segment of circulant row i: the table rotated right by i.
        let mut m = j0 + n - i;
        if m >= n {
            m -= n;
        }
        let first = (n - m).min(out.len());
        out[..first].copy_from_slice(&table[m..m + first]);
        let rest = out.len() - first;
        out[first..].copy_from_slice(&table[..rest]);
    });
    (max_abs / smax, at)
}

/// Builds the factorization of Table/figure size `upper_bound_size(n)` for the
/// raw slack matrix S_n, verifying the residual before returning.
pub fn recursive_factorize(n: usize) -> Result<Factorization> {
    let cf = CoefficientFn::new(n)?;
    let (u, v) = factor_block(&cf, n, n)?;
    let r = u.cols();
    let expected = upper_bound_size(n)?;
    if r != expected {
        return Err(Error::Inconsistent(format!(
            "factorization size {r} for n = {n} differs from the closed form {expected}"
        )));
    }
    let f = Factorization {
        n,
        r,
        scale: 1.0,
        u,
        v,
    };
    let (max_rel, at) = residual_against_ngon(&cf, &f);
    if max_rel > CONSTRUCTION_TOL {
        return Err(Error::Construction {
            n,
            max_rel,
            row: at.0,
            col: at.1,
            tol: CONSTRUCTION_TOL,
        });
    }
    Ok(f)
}

/// Outcome of checking a factorization against a slack matrix.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub max_abs_residual: f64,
    pub max_rel_residual: f64,
    pub worst_at: (usize, usize),
    pub min_entry: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Checks U V against S entrywise. Passes iff the residual relative to
/// max |S| stays within `tol` and no factor entry is below -tol.
pub fn verify_factorization(
    s: &SlackMatrix,
    f: &Factorization,
    tol: f64,
) -> Result<VerificationReport> {
    let n = s.n();
    if f.u.rows() != n || f.v.cols() != n {
        return Err(Error::Dimensions(format!(
            "factorization of size {}x{} * {}x{} against an {n}x{n} matrix",
            f.u.rows(),
            f.u.cols(),
            f.v.rows(),
            f.v.cols()
        )));
    }
    let smax = s.matrix().max_abs().max(f64::MIN_POSITIVE);
    let (max_abs, at) = max_abs_residual_rows(&f.u, &f.v, |i, j0, out| {
        out.copy_from_slice(&s.matrix().row(i)[j0..j0 + out.len()]);
    });
    let min_entry = f.min_entry();
    let max_rel = max_abs / smax;
    Ok(VerificationReport {
        max_abs_residual: max_abs,
        max_rel_residual: max_rel,
        worst_at: at,
        min_entry,
        tol,
        pass: max_rel <= tol && min_entry >= -tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::slack::slack_matrix;

    fn c(n: usize, k: i64) -> f64 {
        CoefficientFn::new(n).unwrap().eval(k)
    }

    #[test]
    fn size_formula() {
        assert_eq!(upper_bound_size(9).unwrap(), 7);
        assert_eq!(upper_bound_size(13).unwrap(), 8);
        assert_eq!(upper_bound_size(16).unwrap(), 8);
        assert_eq!(upper_bound_size(17).unwrap(), 9);
        for k in 2..=20 {
            assert_eq!(upper_bound_size(1usize << k).unwrap(), 2 * k);
        }
        assert!(upper_bound_size(1).is_err());
    }

    #[test]
    fn correction_matrix_matches_nine_gon_lower_left() {
        // The 4x4 matrix removed from the lower-left block of S_9 has
        // parameters alpha = -5 = q - k, beta = 5.
        let m = correction_matrix(9, -5, 5, 4, 4).unwrap();
        let row0 = [c(9, 4) - c(9, 3), c(9, 3) - c(9, 2), c(9, 2) - c(9, 1), c(9, 1)];
        for (j, want) in row0.iter().enumerate() {
            assert!((m[(0, j)] - want).abs() < 1e-14, "col {j}");
        }
        assert!((m[(1, 1)] - (c(9, 4) - c(9, 1))).abs() < 1e-14);
        assert!((m[(3, 3)] - (c(9, 4) - c(9, 2))).abs() < 1e-14);
        assert!((m[(2, 3)] - (c(9, 3) - c(9, 1))).abs() < 1e-14);
    }

    #[test]
    fn correction_matrix_single_entry() {
        let m = correction_matrix(7, 3, 4, 1, 1).unwrap();
        assert!((m[(0, 0)] - (c(7, 3) - c(7, 2))).abs() < 1e-15);
    }

    #[test]
    fn correction_matrix_minors_vanish() {
        let m = correction_matrix(12, 3, 7, 5, 5).unwrap();
        let scale = m.max_abs().powi(2);
        for i0 in 0..5 {
            for i1 in i0 + 1..5 {
                for j0 in 0..5 {
                    for j1 in j0 + 1..5 {
                        let det = m[(i0, j0)] * m[(i1, j1)] - m[(i0, j1)] * m[(i1, j0)];
                        assert!(det.abs() <= 1e-10 * scale.max(1.0), "minor ({i0},{i1})x({j0},{j1})");
                    }
                }
            }
        }
    }

    #[test]
    fn nine_gon_first_corrections_match_displayed_factors() {
        let block = BlockSpec::new(9, 9, 9).unwrap();
        let tol = 1e-14;

        let ll = rank_one_correction(&block, CorrectionKind::LowerLeft).unwrap();
        let u_want = [0.0, 0.0, 0.0, 0.0, 0.0, c(9, 1), c(9, 2), c(9, 3) - c(9, 1), c(9, 4) - c(9, 2)];
        let c1 = c(9, 1);
        let v_want = [
            (c(9, 4) - c(9, 3)) / c1,
            (c(9, 3) - c(9, 2)) / c1,
            (c(9, 2) - c(9, 1)) / c1,
            1.0,
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
        ];
        for i in 0..9 {
            assert!((ll.u[i] - u_want[i]).abs() < tol, "ll.u[{i}]");
            assert!((ll.v[i] - v_want[i]).abs() < tol, "ll.v[{i}]");
        }

        let ur = rank_one_correction(&block, CorrectionKind::UpperRight).unwrap();
        let u_want = [0.0, c(9, 4) - c(9, 2), c(9, 3) - c(9, 1), c(9, 2), c(9, 1), 0.0, 0.0, 0.0, 0.0];
        let v_want = [
            0.0,
            0.0,
            0.0,
            0.0,
            0.0,
            1.0,
            (c(9, 2) - c(9, 1)) / c1,
            (c(9, 3) - c(9, 2)) / c1,
            (c(9, 4) - c(9, 3)) / c1,
        ];
        for i in 0..9 {
            assert!((ur.u[i] - u_want[i]).abs() < tol, "ur.u[{i}]");
            assert!((ur.v[i] - v_want[i]).abs() < tol, "ur.v[{i}]");
        }
    }

    #[test]
    fn corrections_reject_small_blocks() {
        let block = BlockSpec::new(9, 4, 4).unwrap();
        assert!(matches!(
            rank_one_correction(&block, CorrectionKind::UpperRight),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn eight_gon_residual_cross_pattern() {
        // After both corrections on the full 8x8 block, zeros sit exactly on
        // i+j = l+1, l+2 and the two original diagonals (1-based).
        let cf = CoefficientFn::new(8).unwrap();
        let (k, l) = (8usize, 8usize);
        let ll = rank_one_correction_impl(&cf, k, l, CorrectionKind::LowerLeft).unwrap();
        let ur = rank_one_correction_impl(&cf, k, l, CorrectionKind::UpperRight).unwrap();
        let tol = 1e-10 * cf.c1();
        for i1 in 1..=k {
            for j1 in 1..=l {
                let r = residual_entry(&cf, &ll, &ur, i1 - 1, j1 - 1);
                let cross = i1 + j1 == l + 1 || i1 + j1 == l + 2;
                let diag = i1 == j1 || i1 == j1 + 1;
                if cross || diag {
                    assert!(r.abs() <= tol, "expected zero at ({i1},{j1}), got {r:.3e}");
                } else {
                    assert!(r > tol, "unexpected zero at ({i1},{j1})");
                }
            }
        }
    }

    #[test]
    fn square_factorizes_trivially() {
        let f = recursive_factorize(4).unwrap();
        assert_eq!(f.r(), 4);
        let s = slack_matrix(4, false).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(f.u()[(i, j)], s.entry(i, j));
                let id = if i == j { 1.0 } else { 0.0 };
                assert_eq!(f.v()[(i, j)], id);
            }
        }
    }

    #[test]
    fn triangle_base_case() {
        let f = recursive_factorize(3).unwrap();
        assert_eq!(f.r(), 3);
    }

    #[test]
    fn trivial_base_rejects_wide_blocks() {
        let b = Matrix::zeros(5, 5);
        assert!(matches!(
            trivial_base_factorize(&b, 5, 5),
            Err(Error::Contract(_))
        ));
        let b = Matrix::zeros(3, 1);
        let (u, v) = trivial_base_factorize(&b, 3, 1).unwrap();
        assert_eq!(u.rows(), 3);
        assert_eq!(v.rows(), 1);
        assert_eq!(v[(0, 0)], 1.0);
    }

    /// The printed rank-5 factorization of the normalized hexagon matrix.
    pub(crate) fn paper_hexagon_factors() -> (Matrix, Matrix) {
        let u = Matrix::from_rows(&[
            vec![0., 0., 0., 1., 2.],
            vec![0., 1., 0., 0., 1.],
            vec![0., 1., 1., 0., 0.],
            vec![0., 0., 2., 1., 0.],
            vec![1., 0., 1., 0., 0.],
            vec![1., 0., 0., 0., 1.],
        ]);
        let v = Matrix::from_rows(&[
            vec![1., 2., 1., 0., 0., 0.],
            vec![0., 0., 0., 1., 2., 1.],
            vec![1., 0., 0., 0., 0., 1.],
            vec![0., 1., 0., 0., 1., 0.],
            vec![0., 0., 1., 1., 0., 0.],
        ]);
        (u, v)
    }

    #[test]
    fn hexagon_matches_paper_exactly() {
        // For n = 6 the construction reproduces the printed factorization in
        // the printed order: lower-left factor, upper-right factor, base block.
        let f = recursive_factorize(6).unwrap().normalized().unwrap();
        assert_eq!(f.r(), 5);
        let (pu, pv) = paper_hexagon_factors();
        for i in 0..6 {
            for j in 0..5 {
                assert!((f.u()[(i, j)] - pu[(i, j)]).abs() < 1e-12, "U({i},{j})");
                assert!((f.v()[(j, i)] - pv[(j, i)]).abs() < 1e-12, "V({j},{i})");
            }
        }
    }

    #[test]
    fn nine_gon_matches_paper_up_to_column_order() {
        // Discovery order here is [LL1, UR1, LL2, UR2, base]; the paper
        // displays [base, LL2, UR2, LL1, UR1].
        let perm = [5usize, 6, 3, 4, 0, 1, 2]; // ours[t] == paper[perm[t]]
        let f = recursive_factorize(9).unwrap();
        let c1 = c(9, 1);
        let (c2, c3, c4) = (c(9, 2), c(9, 3), c(9, 4));
        let pu = Matrix::from_rows(&[
            vec![0., c1, c2, 0., c3 - c1, 0., 0.],
            vec![0., 0., c1, 0., c2, 0., c4 - c2],
            vec![c1, 0., 0., 0., c1, 0., c3 - c1],
            vec![c1, 0., 0., c1, 0., 0., c2],
            vec![0., 0., c1, c2, 0., 0., c1],
            vec![0., 0., c1, c2, 0., c1, 0.],
            vec![c1, 0., 0., c1, 0., c2, 0.],
            vec![c1, 0., 0., 0., c1, c3 - c1, 0.],
            vec![0., 0., c1, 0., c2, c4 - c2, 0.],
        ]);
        let w = |x: f64| x / c1; // shorthand for the printed ratios
        let pv = Matrix::from_rows(&[
            vec![1., 0., 0., 0., 1., 0., 0., 0., 1.],
            vec![0., 1., 0., 1., 0., 1., 0., 1., 0.],
            vec![0., 0., 1., 0., 0., 0., 1., 0., 0.],
            vec![w(c2 - c1), 1., 0., 0., 0., 0., 0., 1., w(c2 - c1)],
            vec![0., 0., 0., 1., w(c2 - c1), 1., 0., 0., 0.],
            vec![w(c4 - c3), w(c3 - c2), w(c2 - c1), 1., 0., 0., 0., 0., 0.],
            vec![0., 0., 0., 0., 0., 1., w(c2 - c1), w(c3 - c2), w(c4 - c3)],
        ]);
        assert_eq!(f.r(), 7);
        for t in 0..7 {
            for i in 0..9 {
                assert!(
                    (f.u()[(i, t)] - pu[(i, perm[t])]).abs() < 1e-12,
                    "U col {t} row {i}"
                );
                assert!(
                    (f.v()[(t, i)] - pv[(perm[t], i)]).abs() < 1e-12,
                    "V row {t} col {i}"
                );
            }
        }
    }

    #[test]
    fn verification_catches_corruption() {
        let s = slack_matrix(9, false).unwrap();
        let f = recursive_factorize(9).unwrap();
        assert!(verify_factorization(&s, &f, 1e-10).unwrap().pass);

        let mut u = f.u().clone();
        for i in 0..9 {
            u[(i, 0)] = 0.0;
        }
        let bad = Factorization::new(9, 1.0, u, f.v().clone()).unwrap();
        let rep = verify_factorization(&s, &bad, 1e-10).unwrap();
        assert!(!rep.pass);
        // Column 0 is the first lower-left factor; the damage sits in the
        // rows it supports.
        assert!((5..9).contains(&rep.worst_at.0), "worst at {:?}", rep.worst_at);
    }

    #[test]
    fn verification_rejects_wrong_shapes() {
        let s = slack_matrix(6, false).unwrap();
        let f = recursive_factorize(9).unwrap();
        assert!(matches!(
            verify_factorization(&s, &f, 1e-8),
            Err(Error::Dimensions(_))
        ));
    }

    #[test]
    fn small_sweep_sizes_and_residuals() {
        for n in 3..=64usize {
            let f = recursive_factorize(n).unwrap();
            assert_eq!(f.r(), upper_bound_size(n).unwrap(), "r for n={n}");
            assert!(f.min_entry() >= 0.0, "negative entry for n={n}");
            let s = slack_matrix(n, false).unwrap();
            let rep = verify_factorization(&s, &f, 1e-10).unwrap();
            assert!(rep.pass, "n={n}: {rep:?}");
        }
    }

    #[test]
    fn normalized_hexagon_product_is_integral() {
        let f = recursive_factorize(6).unwrap().normalized().unwrap();
        let p = f.u().mul(f.v());
        let s = slack_matrix(6, true).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                assert!((p[(i, j)] - s.entry(i, j)).abs() < 1e-12);
                assert!((p[(i, j)] - p[(i, j)].round()).abs() < 1e-12);
            }
        }
    }
}
