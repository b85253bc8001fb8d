//! A 12-dimensional Krammer-type representation of the Artin group of type
//! D4, indexed by the positive roots.

use super::laurent::LaurentPoly;
use super::matrix::PolyMatrix;

pub const CW_CONVENTION: &str = "cohen-wales-d4/positive-roots-height-order/q-t";

/// Root coordinates over the simple roots `(a1, a2, a3, b)`.
pub type Root = [i32; 4];

pub const CENTRE: usize = 3;

/// Positive roots of D4 ordered by height, then coordinates.
pub fn positive_roots() -> Vec<Root> {
    let mut roots: Vec<Root> = Vec::new();
    for a1 in 0..=1 {
        for a2 in 0..=1 {
            for a3 in 0..=1 {
                for b in 0..=2 {
                    let r = [a1, a2, a3, b];
                    if r != [0; 4] && norm(&r) == 2 {
                        roots.push(r);
                    }
                }
            }
        }
    }
    roots.sort_by_key(|r| (r.iter().sum::<i32>(), *r));
    roots
}

/// Symmetric bilinear form of the simply-laced star graph.
pub fn inner(x: &Root, y: &Root) -> i32 {
    let mut s = 0;
    for i in 0..4 {
        s += 2 * x[i] * y[i];
    }
    for leaf in 0..3 {
        s -= x[leaf] * y[CENTRE] + x[CENTRE] * y[leaf];
    }
    s
}

fn norm(x: &Root) -> i32 {
    inner(x, x)
}

fn simple(s: usize) -> Root {
    let mut r = [0; 4];
    r[s] = 1;
    r
}

/// Image of the atom with simple root index `s` (order `a1, a2, a3, b`).
pub fn cw_generator(s: usize) -> PolyMatrix {
    let roots = positive_roots();
    let find = |r: &Root| roots.iter().position(|x| x == r).expect("positive root");
    let q = LaurentPoly::q();
    let t = LaurentPoly::t();
    let one = LaurentPoly::one();
    let q1 = &q - &one;
    let qinv = LaurentPoly::monomial(1, -1, 0);
    let theta: Root = [1, 1, 1, 2];
    let alpha = simple(s);
    let a_idx = find(&alpha);
    let mut m = PolyMatrix::zero(roots.len());
    for (col, beta) in roots.iter().enumerate() {
        let mut put = |row: usize, v: LaurentPoly| {
            let cur = m.get(row, col).clone();
            m.set(row, col, &cur + &v);
        };
        let k = inner(&alpha, beta);
        if *beta != alpha {
            match k {
                0 => put(col, one.clone()),
                1 => {
                    let mut r = *beta;
                    r[s] -= 1;
                    put(find(&r), one.clone());
                }
                -1 => {
                    let mut r = *beta;
                    r[s] += 1;
                    put(col, &one - &q);
                    put(find(&r), q.clone());
                }
                _ => unreachable!("simply-laced pairing"),
            }
        }
        if beta[s] == 0 {
            continue;
        }
        let c = if *beta == alpha {
            q.pow(2)
        } else if s != CENTRE && *beta == theta {
            &(&q1.pow(2) * &(&q + &one)) * &qinv
        } else {
            match k {
                1 => &q * &q1,
                0 => q1.pow(2),
                _ => &q1.pow(3) * &qinv,
            }
        };
        put(a_idx, &t * &c);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_positive_roots() {
        let roots = positive_roots();
        assert_eq!(roots.len(), 12);
        assert_eq!(roots[0], [0, 0, 0, 1]);
        assert_eq!(roots[11], [1, 1, 1, 2]);
        assert!(roots.iter().all(|r| inner(r, r) == 2));
    }

    #[test]
    fn braid_and_commutation() {
        let g: Vec<PolyMatrix> = (0..4).map(cw_generator).collect();
        for leaf in 0..3 {
            let (a, b) = (&g[leaf], &g[CENTRE]);
            assert_eq!(a.mul(b).mul(a), b.mul(a).mul(b));
        }
        assert_eq!(g[0].mul(&g[1]), g[1].mul(&g[0]));
        assert_eq!(g[1].mul(&g[2]), g[2].mul(&g[1]));
    }
}
