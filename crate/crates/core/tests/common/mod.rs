//! Shared test oracles. Everything here is written from the definitions,
//! independently of the library code it is used to check.

#![allow(dead_code)]

use std::collections::HashSet;

use ngon_core::{Matrix, SupportPattern};

/// Facets of the cyclic polytope C(v, d) as vertex bitmasks, by Gale's
/// evenness condition: a d-subset is a facet iff every maximal run of
/// consecutive vertices not touching either end has even length.
pub fn gale_facets(v: usize, d: usize) -> Vec<u32> {
    assert!(v >= d + 1 && d >= 1 && v <= 32);
    let mut out = Vec::new();
    let limit: u64 = 1 << v;
    let mut mask: u64 = (1 << d) - 1;
    while mask < limit {
        if gale_even(mask as u32, v) {
            out.push(mask as u32);
        }
        // Gosper's hack: next mask with the same popcount.
        let c = mask & mask.wrapping_neg();
        let r = mask + c;
        mask = (((r ^ mask) >> 2) / c) | r;
    }
    out
}

fn gale_even(mask: u32, v: usize) -> bool {
    let mut i = 0;
    while i < v {
        if mask >> i & 1 == 1 {
            let start = i;
            while i < v && mask >> i & 1 == 1 {
                i += 1;
            }
            let interior = start != 0 && i != v;
            if interior && (i - start) % 2 == 1 {
                return false;
            }
        } else {
            i += 1;
        }
    }
    true
}

/// Number of k-faces of C(v, d) for k in 0..d. Cyclic polytopes are
/// simplicial, so the k-faces are exactly the (k+1)-subsets of vertices
/// contained in some facet.
pub fn gale_face_counts(v: usize, d: usize) -> Vec<u64> {
    let facets = gale_facets(v, d);
    let mut faces: HashSet<u32> = HashSet::new();
    for &f in &facets {
        let mut s = f;
        loop {
            if s != 0 {
                faces.insert(s);
            }
            if s == 0 {
                break;
            }
            s = (s - 1) & f;
        }
    }
    let mut counts = vec![0u64; d];
    for &s in &faces {
        let sz = s.count_ones() as usize;
        if sz <= d {
            counts[sz - 1] += 1;
        }
    }
    counts
}

/// Maximal rectangles straight from the definition: for every nonempty row
/// subset take the common columns, then keep the pair only if no row or
/// column can be added.
pub fn brute_maximal_rectangles(p: &SupportPattern) -> Vec<(Vec<usize>, Vec<usize>)> {
    let rows = p.rows();
    let cols = p.cols();
    assert!(rows <= 16);
    let mut seen = HashSet::new();
    for sel in 1u32..(1 << rows) {
        let rset: Vec<usize> = (0..rows).filter(|&i| sel >> i & 1 == 1).collect();
        let cset: Vec<usize> = (0..cols)
            .filter(|&j| rset.iter().all(|&i| p.get(i, j)))
            .collect();
        if cset.is_empty() {
            continue;
        }
        let row_addable = (0..rows)
            .any(|i| !rset.contains(&i) && cset.iter().all(|&j| p.get(i, j)));
        if row_addable {
            continue;
        }
        let col_addable = (0..cols)
            .any(|j| !cset.contains(&j) && rset.iter().all(|&i| p.get(i, j)));
        if col_addable {
            continue;
        }
        seen.insert((rset, cset));
    }
    let mut out: Vec<_> = seen.into_iter().collect();
    out.sort();
    out
}

/// Exact minimum cover size by plain exhaustive search over subsets of the
/// brute-force maximal rectangle list, smallest size first. Any cover can be
/// enlarged rectangle-by-rectangle to maximal ones, so this loses nothing.
pub fn exhaustive_cover_number(p: &SupportPattern) -> usize {
    let bits = p.true_bits();
    if bits.is_empty() {
        return 0;
    }
    assert!(bits.len() <= 128);
    let rects = brute_maximal_rectangles(p);
    let masks: Vec<u128> = rects
        .iter()
        .map(|(rs, cs)| {
            let mut m = 0u128;
            for &i in rs {
                for &j in cs {
                    let b = bits.iter().position(|&x| x == (i, j)).unwrap();
                    m |= 1 << b;
                }
            }
            m
        })
        .collect();
    let full: u128 = if bits.len() == 128 {
        u128::MAX
    } else {
        (1u128 << bits.len()) - 1
    };

    fn choose(masks: &[u128], full: u128, start: usize, left: usize, acc: u128) -> bool {
        if acc == full {
            return true;
        }
        if left == 0 || start >= masks.len() {
            return false;
        }
        for i in start..masks.len() {
            if masks[i] & !acc != 0 && choose(masks, full, i + 1, left - 1, acc | masks[i]) {
                return true;
            }
        }
        false
    }

    for k in 1..=masks.len() {
        if choose(&masks, full, 0, k, 0) {
            return k;
        }
    }
    unreachable!("maximal rectangles always cover every positive entry");
}

/// The printed rank-5 factorization of the normalized hexagon slack matrix.
pub fn paper_hexagon_factors() -> (Matrix, Matrix) {
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
