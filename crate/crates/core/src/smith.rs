//! Smith normal form of integer matrices over arbitrary-precision integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Returns the nonzero invariant factors `d1 | d2 | ...` (all positive) of
/// the `rows × cols` matrix.
pub fn invariant_factors(mut m: Vec<Vec<BigInt>>, cols: usize) -> Vec<BigInt> {
    let rows = m.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero |entry| in the trailing block
        let Some((pr, pc)) = min_entry(&m, t, cols) else { break };
        m.swap(t, pr);
        for row in m.iter_mut() {
            row.swap(t, pc);
        }
        loop {
            let mut dirty = false;
            for r in t + 1..rows {
                if !m[r][t].is_zero() {
                    let q = m[r][t].div_floor(&m[t][t]);
                    for c in t..cols {
                        let v = &q * &m[t][c];
                        m[r][c] -= v;
                    }
                    dirty |= !m[r][t].is_zero();
                }
            }
            for c in t + 1..cols {
                if !m[t][c].is_zero() {
                    let q = m[t][c].div_floor(&m[t][t]);
                    for r in t..rows {
                        let v = &q * &m[r][t];
                        m[r][c] -= v;
                    }
                    dirty |= !m[t][c].is_zero();
                }
            }
            if !dirty {
                // divisibility of the remaining block by the pivot
                let bad = (t + 1..rows)
                    .flat_map(|r| (t + 1..cols).map(move |c| (r, c)))
                    .find(|&(r, c)| !(&m[r][c] % &m[t][t]).is_zero());
                match bad {
                    None => break,
                    Some((r, _)) => {
                        for c in t..cols {
                            let v = m[r][c].clone();
                            m[t][c] += v;
                        }
                        continue;
                    }
                }
            }
            // a remainder appeared; move the new minimum into place and retry
            let (pr, pc) = min_entry(&m, t, cols).expect("block still has a nonzero entry");
            m.swap(t, pr);
            for row in m.iter_mut() {
                row.swap(t, pc);
            }
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    diag
}

fn min_entry(m: &[Vec<BigInt>], t: usize, cols: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (r, row) in m.iter().enumerate().skip(t) {
        for (c, v) in row.iter().enumerate().take(cols).skip(t) {
            if v.is_zero() {
                continue;
            }
            if best.is_none_or(|(br, bc)| v.abs() < m[br][bc].abs()) {
                best = Some((r, c));
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn diagonalizes_small_examples() {
        assert_eq!(invariant_factors(mat(&[&[2, 0], &[0, 3]]), 2), ints(&[1, 6]));
        assert_eq!(invariant_factors(mat(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]), 3), ints(&[2, 6, 12]));
        assert_eq!(invariant_factors(mat(&[&[0, 0]]), 2), ints(&[]));
        assert_eq!(invariant_factors(mat(&[&[1, -1], &[1, -1]]), 2), ints(&[1]));
        assert_eq!(invariant_factors(vec![], 3), ints(&[]));
    }

    #[test]
    fn divisibility_chain_holds() {
        let d = invariant_factors(mat(&[&[4, 0, 0], &[0, 6, 0], &[0, 0, 10]]), 3);
        assert_eq!(d, ints(&[2, 2, 60]));
    }
}
