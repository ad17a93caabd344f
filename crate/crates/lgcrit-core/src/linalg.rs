//! Small exact linear algebra over rationals used by the lattice-geometry code.

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

pub type Rat = Ratio<i128>;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(n as i128)
}

/// Solve the square system `a * x = b` by Gaussian elimination with exact
/// rational arithmetic. Returns `None` when `a` is singular.
pub fn solve_square(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    debug_assert!(a.iter().all(|row| row.len() == n) && b.len() == n);
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(*rhs);
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let p = m[col][col];
        for entry in m[col].iter_mut() {
            *entry /= p;
        }
        for row in 0..n {
            if row != col && !m[row][col].is_zero() {
                let f = m[row][col];
                for k in col..=n {
                    let sub = f * m[col][k];
                    m[row][k] -= sub;
                }
            }
        }
    }
    Some(m.iter().map(|row| row[n]).collect())
}

/// Determinant of an integer matrix, exact.
pub fn det_i64(a: &[Vec<i64>]) -> i128 {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .map(|row| row.iter().map(|&v| rat(v)).collect())
        .collect();
    let mut det = Rat::one();
    for col in 0..n {
        let pivot = match (col..n).find(|&r| !m[r][col].is_zero()) {
            Some(p) => p,
            None => return 0,
        };
        if pivot != col {
            m.swap(col, pivot);
            det = -det;
        }
        let p = m[col][col];
        det *= p;
        for row in col + 1..n {
            if !m[row][col].is_zero() {
                let f = m[row][col] / p;
                for k in col..n {
                    let sub = f * m[col][k];
                    m[row][k] -= sub;
                }
            }
        }
    }
    debug_assert!(det.is_integer());
    det.to_integer()
}

/// Rank of a rational matrix, exact.
pub fn rank(mat: &[Vec<Rat>]) -> usize {
    if mat.is_empty() || mat[0].is_empty() {
        return 0;
    }
    let mut m: Vec<Vec<Rat>> = mat.to_vec();
    let rows = m.len();
    let cols = m[0].len();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let pivot = match (rank..rows).find(|&r| !m[r][col].is_zero()) {
            Some(p) => p,
            None => continue,
        };
        m.swap(rank, pivot);
        let p = m[rank][col];
        for row in rank + 1..rows {
            if !m[row][col].is_zero() {
                let f = m[row][col] / p;
                for k in col..cols {
                    let sub = f * m[rank][k];
                    m[row][k] -= sub;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn rat_floor(x: Rat) -> i64 {
    x.floor().to_integer() as i64
}

pub fn rat_abs(x: Rat) -> Rat {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_identity() {
        let a = vec![vec![rat(1), rat(0)], vec![rat(0), rat(1)]];
        let b = vec![rat(3), rat(5)];
        assert_eq!(solve_square(&a, &b).unwrap(), b);
    }

    #[test]
    fn detects_singular() {
        let a = vec![vec![rat(1), rat(2)], vec![rat(2), rat(4)]];
        assert!(solve_square(&a, &[rat(1), rat(1)]).is_none());
    }

    #[test]
    fn det_small() {
        assert_eq!(det_i64(&[vec![2, 1], vec![1, 1]]), 1);
        assert_eq!(det_i64(&[vec![1, 2], vec![2, 4]]), 0);
    }

    #[test]
    fn rank_small() {
        let m = vec![
            vec![rat(1), rat(2), rat(3)],
            vec![rat(2), rat(4), rat(6)],
            vec![rat(0), rat(1), rat(0)],
        ];
        assert_eq!(rank(&m), 2);
    }
}
