//! Lower bounds on the nonnegative rank of n-gon slack matrices, the closed
//! form of the factorization size, and the brute-force check behind the
//! improved antichain bound. Everything here runs in exact integer or
//! rational arithmetic; the binomials involved overflow doubles long before
//! the interesting range ends.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::factorize::upper_bound_size;
use crate::rectcover::{rectangle_cover_number, support_pattern, DEFAULT_NODE_BUDGET};
use crate::slack::slack_matrix;

/// Largest n for which `bounds_row` computes the exact rectangle covering
/// number when asked to.
pub const RCB_TABLE_MAX_N: u64 = 12;

/// C(a, b), with C(a, b) = 0 whenever b < 0, b > a or a < 0.
pub fn binomial(a: i64, b: i64) -> BigInt {
    if b < 0 || b > a || a < 0 {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    let mut res = BigInt::one();
    for i in 0..b {
        res = res * BigInt::from(a - i) / BigInt::from(i + 1);
    }
    res
}

fn ceil_log2(m: u64) -> u64 {
    debug_assert!(m >= 1);
    if m <= 1 {
        0
    } else {
        (u64::BITS - (m - 1).leading_zeros()) as u64
    }
}

/// Smallest r >= 1 with C(r, floor(r/2)) >= p: an antichain of p sets needs a
/// ground set of this size, so p incomparable row supports force at least
/// this many rectangles.
pub fn sperner_bound(p: u64) -> u64 {
    debug_assert!(p >= 1);
    let target = BigInt::from(p);
    let mut r = 1u64;
    while binomial(r as i64, (r / 2) as i64) < target {
        r += 1;
    }
    r
}

/// Smallest r >= 2 with n (r-1) <= (r - floor(r/2)) C(r, floor(r/2)); the
/// sharpened antichain bound for matrices with the n-gon zero pattern.
pub fn improved_boolean_bound(n: u64) -> Result<u64> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "improved boolean bound needs n >= 2, got {n}"
        )));
    }
    let n_big = BigInt::from(n);
    let mut r = 2u64;
    loop {
        let half = r / 2;
        let lhs = &n_big * BigInt::from(r - 1);
        let rhs = BigInt::from(r - half) * binomial(r as i64, half as i64);
        if lhs <= rhs {
            return Ok(r);
        }
        r += 1;
    }
}

/// Maximal number of k-faces of a d-polytope with v vertices (attained by the
/// cyclic polytope C(v, d)). The halved last term of the even-d sum is always
/// an even count; integrality is asserted rather than assumed.
pub fn faces(v: u64, d: u64, k: u64) -> Result<BigInt> {
    if d < 1 || v < d + 1 {
        return Err(Error::Domain(format!(
            "faces(v={v}, d={d}, ..) needs v >= d+1 >= 2"
        )));
    }
    if k > d - 1 {
        return Err(Error::Domain(format!(
            "faces(v={v}, d={d}, k={k}) needs 0 <= k <= d-1"
        )));
    }
    let kf = (k + 1) as i64;
    let (v, d) = (v as i64, d as i64);
    let mut total = BigInt::zero();
    for i in 0..=d / 2 {
        let term = (binomial(d - i, kf - i) + binomial(i, kf - d + i)) * binomial(v - d - 1 + i, i);
        if d % 2 == 0 && i == d / 2 {
            if term.is_odd() {
                return Err(Error::Inconsistent(format!(
                    "halved face-count term is odd for v={v}, d={d}, k={k}"
                )));
            }
            total += term / 2;
        } else {
            total += term;
        }
    }
    debug_assert!(!total.is_negative());
    Ok(total)
}

/// Smallest r >= 4 such that n <= max over d in 3..=r-1 of
/// min(faces(r, d-1, d-3), faces(r, d-1, d-2)): the face-counting bound on the
/// nonnegative rank of an n-vertex polygon's slack matrix. Meaningful for
/// n >= 4; the r scan is capped safely above the factorization upper bound.
pub fn geometric_lower_bound(n: u64) -> u64 {
    let cap = 2 * ceil_log2(n.max(2)) + 4;
    let target = BigInt::from(n);
    for r in 4..=cap.max(4) {
        let mut best = BigInt::zero();
        for d in 3..r {
            let lo = faces(r, d - 1, d - 3)
                .expect("d in 3..r keeps faces() arguments in range")
                .min(faces(r, d - 1, d - 2).expect("d in 3..r keeps faces() arguments in range"));
            best = best.max(lo);
        }
        if best >= target {
            return r;
        }
    }
    unreachable!("geometric bound exceeded its cap of {cap} for n = {n}")
}

/// ceil(log2(2n + 2)), the face-counting lower bound on the nonnegative rank.
pub fn trivial_log_bound(n: u64) -> u64 {
    debug_assert!(n >= 1);
    ceil_log2(2 * n + 2)
}

/// Result of minimizing f(k, z) = k!(r-k)! + (k+z)!(r-k-z)! - 2 k! z! (r-k-z)!
/// over k, z >= 1 with k + z <= r.
#[derive(Clone, Debug)]
pub struct MinFkzResult {
    pub r: u32,
    pub k_star: u32,
    pub z_star: u32,
    /// Minimum of f itself.
    pub min_f: BigInt,
    /// Minimum of f divided by r!, the quantity the counting argument uses.
    pub min_value: Ratio<BigInt>,
    /// Every minimizing (k, z), in lexicographic order.
    pub all_minimizers: Vec<(u32, u32)>,
}

/// Brute-force minimization of f(k, z) with exact factorials.
pub fn minimize_fkz(r: u32) -> Result<MinFkzResult> {
    if r < 2 {
        return Err(Error::Domain(format!("minimize_fkz needs r >= 2, got {r}")));
    }
    let mut fact = vec![BigInt::one(); (r + 1) as usize];
    for i in 1..=r as usize {
        fact[i] = &fact[i - 1] * BigInt::from(i);
    }
    let f = |k: u32, z: u32| -> BigInt {
        let (k, z, r) = (k as usize, z as usize, r as usize);
        &fact[k] * &fact[r - k] + &fact[k + z] * &fact[r - k - z]
            - BigInt::from(2) * &fact[k] * &fact[z] * &fact[r - k - z]
    };

    let mut min_f: Option<BigInt> = None;
    let mut minimizers = Vec::new();
    for k in 1..r {
        for z in 1..=(r - k) {
            let val = f(k, z);
            match &min_f {
                Some(cur) if val > *cur => {}
                Some(cur) if val == *cur => minimizers.push((k, z)),
                _ => {
                    min_f = Some(val);
                    minimizers = vec![(k, z)];
                }
            }
        }
    }
    let min_f = min_f.expect("r >= 2 leaves at least (1, 1) feasible");
    minimizers.sort_unstable();
    let canonical = (r / 2, 1);
    let (k_star, z_star) = if minimizers.contains(&canonical) {
        canonical
    } else {
        minimizers[0]
    };
    Ok(MinFkzResult {
        r,
        k_star,
        z_star,
        min_value: Ratio::new(min_f.clone(), fact[r as usize].clone()),
        min_f,
        all_minimizers: minimizers,
    })
}

/// Exact rectangle covering data attached to a bounds row: the covering
/// number itself when the search proved optimality, otherwise the best lower
/// bound the exhausted search established.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RcbInfo {
    pub value: u64,
    pub optimal: bool,
}

/// All bounds for one n, plus the best lower bound and the gap to the upper
/// bound.
#[derive(Clone, Debug)]
pub struct BoundsRow {
    pub n: u64,
    pub lb_log: u64,
    pub lb_sperner: u64,
    pub lb_improved: u64,
    pub lb_geometric: u64,
    pub rcb: Option<RcbInfo>,
    pub lb_best: u64,
    pub ub: u64,
    pub gap: u64,
}

/// Assembles every bound for one n. All four closed-form bounds lower-bound
/// the nonnegative rank (the Sperner-family ones via the rectangle covering
/// number); the geometric bound only applies for n >= 4, where the d-range of
/// its maximum can reach the polygon's own dimension. The exact rectangle
/// covering number joins the maximum when requested and n <= `RCB_TABLE_MAX_N`.
pub fn bounds_row(n: u64, include_rcb: bool) -> Result<BoundsRow> {
    bounds_row_with_budget(n, include_rcb, DEFAULT_NODE_BUDGET)
}

pub fn bounds_row_with_budget(n: u64, include_rcb: bool, node_budget: u64) -> Result<BoundsRow> {
    if n < 3 {
        return Err(Error::Domain(format!("bounds_row needs n >= 3, got {n}")));
    }
    let lb_log = trivial_log_bound(n);
    let lb_sperner = sperner_bound(n);
    let lb_improved = improved_boolean_bound(n)?;
    let lb_geometric = geometric_lower_bound(n);
    let ub = upper_bound_size(n as usize)? as u64;

    let rcb = if include_rcb && n <= RCB_TABLE_MAX_N {
        let s = slack_matrix(n as usize, false)?;
        let pattern = support_pattern(s.matrix(), 1e-12)?;
        let res = rectangle_cover_number(&pattern, node_budget)?;
        Some(RcbInfo {
            value: if res.optimal {
                res.value as u64
            } else {
                res.lower_bound as u64
            },
            optimal: res.optimal,
        })
    } else {
        None
    };

    let mut lb_best = lb_log.max(lb_sperner).max(lb_improved);
    if n >= 4 {
        lb_best = lb_best.max(lb_geometric);
    }
    if let Some(info) = rcb {
        lb_best = lb_best.max(info.value);
    }
    debug_assert!(lb_best <= ub, "lower bound {lb_best} above upper bound {ub} for n={n}");
    Ok(BoundsRow {
        n,
        lb_log,
        lb_sperner,
        lb_improved,
        lb_geometric,
        rcb,
        lb_best,
        ub,
        gap: ub - lb_best,
    })
}
