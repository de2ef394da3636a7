//! Smith normal form over `Z` with unimodular transforms, and integer
//! linear systems built on it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type IMat = Vec<Vec<BigInt>>;

/// `U·A·V = D` with `D` diagonal, `d_1 | d_2 | ...`, all `d_i > 0` for `i < rank`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IMat,
    pub v: IMat,
    pub diag: Vec<BigInt>,
    pub rank: usize,
}

fn identity(n: usize) -> IMat {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

pub fn mat_mul(a: &IMat, b: &IMat) -> IMat {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(BigInt::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &IMat, x: &[BigInt]) -> Vec<BigInt> {
    a.iter().map(|row| row.iter().zip(x).fold(BigInt::zero(), |acc, (r, v)| acc + r * v)).collect()
}

pub fn smith_normal_form(a: &IMat) -> Smith {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let mut d = a.clone();
    let mut u = identity(m);
    let mut v = identity(n);
    let mut t = 0;
    while t < m.min(n) {
        // pivot: smallest nonzero absolute value in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !d[i][j].is_zero() && best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap(t, pi);
        u.swap(t, pi);
        for row in d.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut changed = false;
            // clear column t
            for i in t + 1..m {
                if d[i][t].is_zero() {
                    continue;
                }
                let q = d[i][t].div_floor(&d[t][t]);
                for j in t..n {
                    let s = &q * &d[t][j];
                    d[i][j] -= s;
                }
                for j in 0..m {
                    let s = &q * &u[t][j];
                    u[i][j] -= s;
                }
                if !d[i][t].is_zero() {
                    d.swap(t, i);
                    u.swap(t, i);
                    changed = true;
                }
            }
            // clear row t
            for j in t + 1..n {
                if d[t][j].is_zero() {
                    continue;
                }
                let q = d[t][j].div_floor(&d[t][t]);
                for i in t..m {
                    let s = &q * &d[i][t];
                    d[i][j] -= s;
                }
                for i in 0..n {
                    let s = &q * &v[i][t];
                    v[i][j] -= s;
                }
                if !d[t][j].is_zero() {
                    for row in d.iter_mut() {
                        row.swap(t, j);
                    }
                    for row in v.iter_mut() {
                        row.swap(t, j);
                    }
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // divisibility: pivot must divide the rest of the block
            let bad = (t + 1..m).flat_map(|i| (t + 1..n).map(move |j| (i, j))).find(|&(i, j)| !(&d[i][j] % &d[t][t]).is_zero());
            match bad {
                Some((i, _)) => {
                    for j in t..n {
                        let s = d[i][j].clone();
                        d[t][j] += s;
                    }
                    for j in 0..m {
                        let s = u[i][j].clone();
                        u[t][j] += s;
                    }
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for j in t..n {
                d[t][j] = -d[t][j].clone();
            }
            for j in 0..m {
                u[t][j] = -u[t][j].clone();
            }
        }
        t += 1;
    }
    let diag: Vec<BigInt> = (0..m.min(n)).map(|i| d[i][i].clone()).collect();
    let rank = diag.iter().take_while(|x| !x.is_zero()).count();
    Smith { u, v, diag, rank }
}

/// Integer solutions of `A x = b`: a particular solution and a lattice basis
/// of the kernel, or `None` if there is no integer solution.
pub fn solve_integer(a: &IMat, b: &[BigInt]) -> Option<(Vec<BigInt>, Vec<Vec<BigInt>>)> {
    let n = a.first().map_or(0, |r| r.len());
    if a.is_empty() {
        return Some((vec![BigInt::zero(); n], identity(n)));
    }
    let s = smith_normal_form(a);
    let ub = mat_vec(&s.u, b);
    let mut y = vec![BigInt::zero(); n];
    for (i, c) in ub.iter().enumerate() {
        if i < s.rank {
            let (q, r) = c.div_rem(&s.diag[i]);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !c.is_zero() {
            return None;
        }
    }
    let x = mat_vec(&s.v, &y);
    let kernel = (s.rank..n).map(|j| s.v.iter().map(|row| row[j].clone()).collect()).collect();
    Some((x, kernel))
}

/// Solve `A x ≡ b (mod modulus)`; returns a particular solution reduced into
/// `[0, modulus)`, or `None`.
pub fn solve_mod(a: &IMat, b: &[BigInt], modulus: &BigInt) -> Option<Vec<BigInt>> {
    let rows = a.len();
    let n = a.first().map_or(0, |r| r.len());
    // [A | -M·I] (x, y)ᵀ = b over Z
    let aug: IMat = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..rows).map(|j| if i == j { -modulus.clone() } else { BigInt::zero() }));
            row
        })
        .collect();
    if rows == 0 {
        return Some(vec![BigInt::zero(); n]);
    }
    let (sol, _) = solve_integer(&aug, b)?;
    Some(sol[..n].iter().map(|x| x.mod_floor(modulus)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn to_big(a: &[Vec<i64>]) -> IMat {
        a.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn known_form() {
        let a = to_big(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let s = smith_normal_form(&a);
        let d: Vec<i64> = s.diag.iter().map(|x| x.try_into().unwrap()).collect();
        assert_eq!(d, vec![2, 6, 12]);
    }

    #[test]
    fn modular_system() {
        // 2x ≡ 3 (mod 4) has no solution; 2x ≡ 2 (mod 4) does
        let a = to_big(&[vec![2]]);
        let m = BigInt::from(4);
        assert!(solve_mod(&a, &[BigInt::from(3)], &m).is_none());
        let x = solve_mod(&a, &[BigInt::from(2)], &m).unwrap();
        let r: BigInt = &x[0] * 2 - 2;
        assert_eq!(r.mod_floor(&m), BigInt::zero());
    }

    proptest! {
        #[test]
        fn transforms_diagonalize(rows in 1usize..5, cols in 1usize..5, seed in proptest::collection::vec(-9i64..10, 25)) {
            let a: IMat = (0..rows).map(|i| (0..cols).map(|j| BigInt::from(seed[i * 5 + j])).collect()).collect();
            let s = smith_normal_form(&a);
            let d = mat_mul(&mat_mul(&s.u, &a), &s.v);
            for i in 0..rows {
                for j in 0..cols {
                    if i != j {
                        prop_assert!(d[i][j].is_zero());
                    } else {
                        prop_assert_eq!(&d[i][i], &s.diag[i]);
                    }
                }
            }
            for w in s.diag[..s.rank].windows(2) {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
            prop_assert!(s.diag[s.rank..].iter().all(|x| x.is_zero()));
        }

        #[test]
        fn integer_solutions_are_solutions(seed in proptest::collection::vec(-5i64..6, 12), xs in proptest::collection::vec(-5i64..6, 4)) {
            let a: IMat = (0..3).map(|i| (0..4).map(|j| BigInt::from(seed[i * 4 + j])).collect()).collect();
            let x0: Vec<BigInt> = xs.iter().map(|&v| BigInt::from(v)).collect();
            let b = mat_vec(&a, &x0);
            let (x, kernel) = solve_integer(&a, &b).expect("consistent by construction");
            prop_assert_eq!(mat_vec(&a, &x), b);
            for k in kernel {
                prop_assert!(mat_vec(&a, &k).iter().all(|v| v.is_zero()));
            }
        }
    }
}
