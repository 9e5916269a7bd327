//! Exact rectangle covering number (boolean rank) of small support patterns.
//!
//! A rectangle is a row set and column set whose submatrix is entirely
//! positive; the covering number is the minimum number of rectangles whose
//! union contains every positive entry. Maximal rectangles (maximal bicliques
//! of the bipartite support graph) are enumerated exhaustively by closure
//! pairs; the minimum cover is found by branch and bound over them with a
//! fooling-set lower bound. Everything is sized for desk-scale matrices.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Default branch-and-bound node budget.
pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

/// Closure enumeration walks all subsets of the smaller dimension.
const ENUM_DIM_CAP: usize = 24;

/// Boolean support of a matrix, rows as u64 masks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportPattern {
    rows: usize,
    cols: usize,
    masks: Vec<u64>,
}

impl SupportPattern {
    pub fn new(rows: usize, cols: usize) -> Result<Self> {
        if cols > 64 || rows > 64 {
            return Err(Error::TooLarge(format!(
                "support patterns are limited to 64x64, got {rows}x{cols}"
            )));
        }
        Ok(Self {
            rows,
            cols,
            masks: vec![0; rows],
        })
    }

    pub fn from_bits(bits: &[Vec<bool>]) -> Result<Self> {
        let rows = bits.len();
        let cols = bits.first().map_or(0, Vec::len);
        let mut p = Self::new(rows, cols)?;
        for (i, row) in bits.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (j, &b) in row.iter().enumerate() {
                p.set(i, j, b);
            }
        }
        Ok(p)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        if value {
            self.masks[i] |= 1 << j;
        } else {
            self.masks[i] &= !(1 << j);
        }
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.masks[i] >> j & 1 == 1
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn count_true(&self) -> usize {
        self.masks.iter().map(|m| m.count_ones() as usize).sum()
    }

    /// Positive positions in row-major order.
    pub fn true_bits(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.count_true());
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    fn transposed(&self) -> Self {
        let mut t = Self {
            rows: self.cols,
            cols: self.rows,
            masks: vec![0; self.cols],
        };
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    t.masks[j] |= 1 << i;
                }
            }
        }
        t
    }
}

/// Thresholded support: bit (i, j) is set iff M[i][j] > tol.
pub fn support_pattern(m: &Matrix, tol: f64) -> Result<SupportPattern> {
    if tol < 0.0 {
        return Err(Error::Domain(format!("support threshold must be >= 0, got {tol}")));
    }
    let mut p = SupportPattern::new(m.rows(), m.cols())?;
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            p.set(i, j, m[(i, j)] > tol);
        }
    }
    Ok(p)
}

/// An all-positive combinatorial rectangle, row and column sets sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rectangle {
    pub row_set: Vec<usize>,
    pub col_set: Vec<usize>,
}

fn mask_to_vec(mut mask: u64) -> Vec<usize> {
    let mut v = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        v.push(mask.trailing_zeros() as usize);
        mask &= mask - 1;
    }
    v
}

/// Closure-pair enumeration over row subsets: for each seed set, take the
/// common columns and then every row positive on all of them. Each such pair
/// is maximal, and every maximal rectangle is the closure of its own row set.
fn enumerate_closures(masks: &[u64]) -> Vec<(u64, u64)> {
    let rows = masks.len();
    let mut seen = HashSet::new();
    for sel in 1u64..(1u64 << rows) {
        let mut colmask = u64::MAX;
        let mut m = sel;
        while m != 0 {
            colmask &= masks[m.trailing_zeros() as usize];
            m &= m - 1;
        }
        if colmask == 0 {
            continue;
        }
        let mut rowclosure = 0u64;
        for (i, &rm) in masks.iter().enumerate() {
            if rm & colmask == colmask {
                rowclosure |= 1 << i;
            }
        }
        seen.insert((rowclosure, colmask));
    }
    let mut out: Vec<_> = seen.into_iter().collect();
    out.sort_unstable();
    out
}

/// The complete, duplicate-free list of maximal rectangles.
pub fn maximal_rectangles(p: &SupportPattern) -> Result<Vec<Rectangle>> {
    if p.count_true() == 0 {
        return Ok(Vec::new());
    }
    let by_rows = p.rows <= p.cols;
    let small = if by_rows { p.rows } else { p.cols };
    if small > ENUM_DIM_CAP {
        return Err(Error::TooLarge(format!(
            "closure enumeration needs min(rows, cols) <= {ENUM_DIM_CAP}, got {small}"
        )));
    }
    let pairs = if by_rows {
        enumerate_closures(&p.masks)
    } else {
        enumerate_closures(&p.transposed().masks)
            .into_iter()
            .map(|(r, c)| (c, r))
            .collect::<Vec<_>>()
    };
    let mut rects: Vec<Rectangle> = pairs
        .into_iter()
        .map(|(r, c)| Rectangle {
            row_set: mask_to_vec(r),
            col_set: mask_to_vec(c),
        })
        .collect();
    rects.sort_unstable_by(|a, b| (&a.row_set, &a.col_set).cmp(&(&b.row_set, &b.col_set)));
    Ok(rects)
}

/// Fixed-width bit buffer over the true-bit universe.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits {
    w: Vec<u64>,
}

impl Bits {
    fn zeros(words: usize) -> Self {
        Self { w: vec![0; words] }
    }

    fn set(&mut self, b: usize) {
        self.w[b / 64] |= 1 << (b % 64);
    }

    fn get(&self, b: usize) -> bool {
        self.w[b / 64] >> (b % 64) & 1 == 1
    }

    fn or_assign(&mut self, other: &Bits) {
        for (a, b) in self.w.iter_mut().zip(&other.w) {
            *a |= b;
        }
    }

    fn copy_from(&mut self, other: &Bits) {
        self.w.copy_from_slice(&other.w);
    }

    /// |self \ other|
    fn andnot_count(&self, other: &Bits) -> usize {
        self.w
            .iter()
            .zip(&other.w)
            .map(|(a, b)| (a & !b).count_ones() as usize)
            .sum()
    }

    fn andnot_into(&self, other: &Bits, out: &mut Bits) {
        for ((o, a), b) in out.w.iter_mut().zip(&self.w).zip(&other.w) {
            *o = a & !b;
        }
    }

    /// self ⊆ other
    fn is_subset(&self, other: &Bits) -> bool {
        self.w.iter().zip(&other.w).all(|(a, b)| a & !b == 0)
    }

    fn count_ones(&self) -> usize {
        self.w.iter().map(|x| x.count_ones() as usize).sum()
    }
}

/// Result of the minimum-cover search.
#[derive(Clone, Debug)]
pub struct RcResult {
    /// Size of the best cover found (the covering number when `optimal`).
    pub value: usize,
    pub cover: Vec<Rectangle>,
    /// True iff exhausted search (or a matching lower bound) proved no
    /// smaller cover exists.
    pub optimal: bool,
    pub nodes_explored: u64,
    /// Best proven lower bound; equals `value` when `optimal`.
    pub lower_bound: usize,
}

struct SearchCtx<'a> {
    cov: &'a [Bits],
    bit_rects: &'a [Vec<u32>],
    compat: &'a [Bits],
    order: &'a [usize],
    words: usize,
    budget: u64,
    nodes: u64,
    exhausted: bool,
    best: usize,
    best_sel: Vec<u32>,
    scratch: Bits,
    pools: Vec<Vec<(usize, u32, Bits)>>,
}

impl SearchCtx<'_> {
    /// Greedy maximum independent set of pairwise non-co-coverable bits among
    /// the uncovered ones; any rectangle contains at most one of them.
    fn fooling_lb(&mut self, covered: &Bits) -> usize {
        self.scratch.copy_from(covered);
        let mut cnt = 0;
        for &b in self.order {
            if !self.scratch.get(b) {
                cnt += 1;
                self.scratch.or_assign(&self.compat[b]);
            }
        }
        cnt
    }

    fn dfs(&mut self, covered: &Bits, uncovered: usize, sel: &mut Vec<u32>) {
        if uncovered == 0 {
            if sel.len() < self.best {
                self.best = sel.len();
                self.best_sel = sel.clone();
            }
            return;
        }
        if sel.len() + 1 >= self.best {
            return;
        }
        if self.nodes >= self.budget {
            self.exhausted = true;
            return;
        }
        self.nodes += 1;

        let lb = self.fooling_lb(covered);
        if sel.len() + lb >= self.best {
            return;
        }

        // Branch on the uncovered bit in the fewest maximal rectangles;
        // `order` already sorts by that count with (row, col) tie-break.
        let bit = self
            .order
            .iter()
            .copied()
            .find(|&b| !covered.get(b))
            .expect("uncovered > 0");

        // Candidate rectangles through that bit, keeping only those whose
        // uncovered gain is set-maximal.
        let depth = sel.len();
        if self.pools.len() <= depth {
            self.pools.resize_with(depth + 1, Vec::new);
        }
        let mut cands = std::mem::take(&mut self.pools[depth]);
        cands.clear();
        for &r in &self.bit_rects[bit] {
            let mut gain = Bits::zeros(self.words);
            self.cov[r as usize].andnot_into(covered, &mut gain);
            cands.push((gain.count_ones(), r, gain));
        }
        let mut keep = vec![true; cands.len()];
        for a in 0..cands.len() {
            for b in 0..cands.len() {
                if a == b || !keep[a] || !keep[b] {
                    continue;
                }
                if cands[a].2.is_subset(&cands[b].2) && (cands[a].2 != cands[b].2 || b < a) {
                    keep[a] = false;
                }
            }
        }
        let mut picks: Vec<usize> = (0..cands.len()).filter(|&i| keep[i]).collect();
        picks.sort_unstable_by_key(|&i| (usize::MAX - cands[i].0, cands[i].1));

        for i in picks {
            let (gain, r, ref gbits) = cands[i];
            let mut child = covered.clone();
            child.or_assign(gbits);
            child.or_assign(&self.cov[r as usize]);
            sel.push(r);
            self.dfs(&child, uncovered - gain, sel);
            sel.pop();
            if self.exhausted || sel.len() + 1 >= self.best {
                break;
            }
        }
        self.pools[depth] = cands;
    }
}

/// Exact minimum rectangle cover by branch and bound over maximal rectangles.
pub fn rectangle_cover_number(p: &SupportPattern, node_budget: u64) -> Result<RcResult> {
    if node_budget < 1 {
        return Err(Error::Domain("node budget must be at least 1".into()));
    }
    let bits = p.true_bits();
    if bits.is_empty() {
        return Ok(RcResult {
            value: 0,
            cover: Vec::new(),
            optimal: true,
            nodes_explored: 0,
            lower_bound: 0,
        });
    }
    let rects = maximal_rectangles(p)?;
    let nb = bits.len();
    let words = nb.div_ceil(64);

    let mut index = vec![usize::MAX; p.rows() * p.cols()];
    for (b, &(i, j)) in bits.iter().enumerate() {
        index[i * p.cols() + j] = b;
    }
    let cov: Vec<Bits> = rects
        .iter()
        .map(|r| {
            let mut bb = Bits::zeros(words);
            for &i in &r.row_set {
                for &j in &r.col_set {
                    bb.set(index[i * p.cols() + j]);
                }
            }
            bb
        })
        .collect();

    let mut bit_rects = vec![Vec::new(); nb];
    for (ri, bb) in cov.iter().enumerate() {
        for (b, br) in bit_rects.iter_mut().enumerate() {
            if bb.get(b) {
                br.push(ri as u32);
            }
        }
    }
    // Two bits fit in one rectangle iff the two opposite corners are also
    // positive (the four corners then span an all-positive 2x2).
    let compat: Vec<Bits> = (0..nb)
        .map(|b1| {
            let (i1, j1) = bits[b1];
            let mut bb = Bits::zeros(words);
            bb.set(b1);
            for (b2, &(i2, j2)) in bits.iter().enumerate() {
                if b2 != b1 && p.get(i1, j2) && p.get(i2, j1) {
                    bb.set(b2);
                }
            }
            bb
        })
        .collect();

    let mut order: Vec<usize> = (0..nb).collect();
    order.sort_unstable_by_key(|&b| (bit_rects[b].len(), b));

    // Greedy cover: initial upper bound.
    let mut covered = Bits::zeros(words);
    let mut greedy_sel: Vec<u32> = Vec::new();
    let mut left = nb;
    while left > 0 {
        let mut best_gain = 0;
        let mut best_r = 0;
        for (ri, bb) in cov.iter().enumerate() {
            let g = bb.andnot_count(&covered);
            if g > best_gain {
                best_gain = g;
                best_r = ri;
            }
        }
        debug_assert!(best_gain > 0, "every positive bit lies in a maximal rectangle");
        covered.or_assign(&cov[best_r]);
        left -= best_gain;
        greedy_sel.push(best_r as u32);
    }

    let mut ctx = SearchCtx {
        cov: &cov,
        bit_rects: &bit_rects,
        compat: &compat,
        order: &order,
        words,
        budget: node_budget,
        nodes: 0,
        exhausted: false,
        best: greedy_sel.len(),
        best_sel: greedy_sel,
        scratch: Bits::zeros(words),
        pools: Vec::new(),
    };
    let root_lb = ctx.fooling_lb(&Bits::zeros(words));

    if root_lb < ctx.best {
        let empty = Bits::zeros(words);
        let mut sel = Vec::new();
        ctx.dfs(&empty, nb, &mut sel);
    }

    let optimal = !ctx.exhausted;
    let value = ctx.best;
    let cover: Vec<Rectangle> = {
        let mut sel = ctx.best_sel.clone();
        sel.sort_unstable();
        sel.iter().map(|&r| rects[r as usize].clone()).collect()
    };

    // Sanity: the reported cover really covers, with all-positive rectangles.
    let mut check = Bits::zeros(words);
    for rect in &cover {
        for &i in &rect.row_set {
            for &j in &rect.col_set {
                if !p.get(i, j) {
                    return Err(Error::Inconsistent(format!(
                        "cover rectangle touches a zero at ({i}, {j})"
                    )));
                }
                check.set(index[i * p.cols() + j]);
            }
        }
    }
    if check.count_ones() != nb {
        return Err(Error::Inconsistent("reported cover misses positive entries".into()));
    }

    Ok(RcResult {
        value,
        cover,
        optimal,
        nodes_explored: ctx.nodes,
        lower_bound: if optimal { value } else { root_lb },
    })
}
