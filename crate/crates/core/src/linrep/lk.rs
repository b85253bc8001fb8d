//! Lawrence–Krammer matrices for the braid group on `n` strands.

use super::laurent::LaurentPoly;
use super::matrix::PolyMatrix;

/// Convention identifier recorded in certificates.
pub const LK_CONVENTION: &str = "lawrence-krammer/krammer-basis-x_ij/q-t";

/// Index of `x_{i,j}` (1-based, `i < j`) in lexicographic order.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(1 <= i && i < j && j <= n);
    (1..i).map(|r| n - r).sum::<usize>() + (j - i - 1)
}

/// Image of `σ_k` (1-based); column `x_ij` holds `σ_k · x_ij`.
pub fn lk_generator(n: usize, k: usize) -> PolyMatrix {
    let dim = n * (n - 1) / 2;
    let q = LaurentPoly::q();
    let t = LaurentPoly::t();
    let one = LaurentPoly::one();
    let q1 = &q - &one;
    let one_q = &one - &q;
    let qpow = |e: i32| LaurentPoly::monomial(1, e, 0);
    let mut m = PolyMatrix::zero(dim);
    let idx = |i: usize, j: usize| pair_index(n, i, j);
    let kk = idx(k, k + 1);
    for i in 1..=n {
        for j in i + 1..=n {
            let col = idx(i, j);
            let mut put = |row: usize, v: LaurentPoly| {
                let cur = m.get(row, col).clone();
                m.set(row, col, &cur + &v);
            };
            if i == k && j == k + 1 {
                put(kk, &t * &qpow(2));
            } else if i < k && j == k {
                put(idx(i, k), one_q.clone());
                put(idx(i, k + 1), q.clone());
            } else if i < k && j == k + 1 {
                put(idx(i, k), one.clone());
                put(kk, &(&t * &qpow((k - i + 1) as i32)) * &q1);
            } else if i == k && j > k + 1 {
                put(kk, &(&t * &q) * &q1);
                put(idx(k + 1, j), q.clone());
            } else if i == k + 1 {
                put(idx(k, j), one.clone());
                put(idx(k + 1, j), one_q.clone());
            } else if j < k || i > k + 1 {
                put(col, one.clone());
            } else {
                // i < k < k+1 < j
                put(col, one.clone());
                put(kk, &(&t * &qpow((k - i) as i32)) * &(&q1 * &q1));
            }
        }
    }
    m
}
