//! Dense exact linear algebra over the rationals.

use super::rational::Rational;

pub type Matrix = Vec<Vec<Rational>>;

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref(a: &mut Matrix) -> Vec<usize> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].recip().expect("nonzero pivot");
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let (src, dst) = if i < r {
                    let (lo, hi) = a.split_at_mut(r);
                    (&hi[0], &mut lo[i])
                } else {
                    let (lo, hi) = a.split_at_mut(i);
                    (&lo[r], &mut hi[0])
                };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    if !s.is_zero() {
                        *d = &*d - &(&f * s);
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(a: &Matrix) -> usize {
    let mut m = a.clone();
    rref(&mut m).len()
}

/// Basis of the right null space.
pub fn nullspace(a: &Matrix, cols: usize) -> Vec<Vec<Rational>> {
    let mut m = a.clone();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -&m[row][f];
            }
            v
        })
        .collect()
}

/// Unique solution of the square system `a x = b`, or `None` if singular.
pub fn solve(a: &Matrix, b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.len();
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return None;
    }
    Some(aug.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

pub fn mat_vec(a: &Matrix, x: &[Rational]) -> Vec<Rational> {
    a.iter().map(|row| row.iter().zip(x).map(|(p, q)| p * q).sum()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn solve_two_by_two() {
        let a = vec![vec![q(2), q(1)], vec![q(1), q(3)]];
        let x = solve(&a, &[q(3), q(5)]).unwrap();
        assert_eq!(mat_vec(&a, &x), vec![q(3), q(5)]);
        assert!(solve(&vec![vec![q(1), q(2)], vec![q(2), q(4)]], &[q(1), q(1)]).is_none());
    }

    #[test]
    fn kernel_of_rank_one() {
        let a = vec![vec![q(1), q(2), q(3)]];
        let ns = nullspace(&a, 3);
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(mat_vec(&a, &v).iter().all(|x| x.is_zero()));
        }
    }
}
