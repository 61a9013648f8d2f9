//! Dense exact linear algebra over a field given by a [`Ring`] with exact zero tests.

use super::ring::Ring;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<T: Ring>(m: &mut Vec<Vec<T>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row >= m.len() {
            break;
        }
        let Some(pr) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, pr);
        let inv = m[row][col].try_inv().expect("nonzero pivot in a field");
        for c in col..ncols {
            m[row][c] = m[row][c].mul(&inv);
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..ncols {
                    let t = f.mul(&m[row][c]);
                    m[r][c] = m[r][c].sub(&t);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    m.truncate(row);
    pivots
}

/// Basis of {v : M v = 0}, one vector per free column, each with a 1 in its free slot.
pub fn nullspace<T: Ring>(m: &[Vec<T>], ncols: usize, like: &T) -> Vec<Vec<T>> {
    let mut a: Vec<Vec<T>> = m.to_vec();
    let pivots = rref(&mut a, ncols);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![like.zero_like(); ncols];
        v[free] = like.one_like();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = a[r][free].neg();
        }
        out.push(v);
    }
    out
}

/// A solution of M v = b, if any.
pub fn solve<T: Ring>(m: &[Vec<T>], b: &[T], ncols: usize, like: &T) -> Option<Vec<T>> {
    let mut a: Vec<Vec<T>> = m.iter().zip(b).map(|(row, bi)| {
        let mut r = row.clone();
        r.push(bi.clone());
        r
    }).collect();
    let pivots = rref(&mut a, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut v = vec![like.zero_like(); ncols];
    for (r, &pc) in pivots.iter().enumerate() {
        v[pc] = a[r][ncols].clone();
    }
    Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Rational;

    fn q(n: i64) -> Rational {
        Rational::from(n)
    }

    #[test]
    fn nullspace_of_rank_one() {
        let m = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]];
        let ns = nullspace(&m, 3, &q(0));
        assert_eq!(ns.len(), 2);
        for v in ns {
            let dot = (&v[0] + &v[1] * q(2)) + &v[2] * q(3);
            assert_eq!(dot, 0);
        }
    }

    #[test]
    fn solves_consistent_systems() {
        let m = vec![vec![q(1), q(1)], vec![q(1), q(-1)]];
        let v = solve(&m, &[q(3), q(1)], 2, &q(0)).unwrap();
        assert_eq!(v, vec![q(2), q(1)]);
        let sing = vec![vec![q(1), q(1)], vec![q(2), q(2)]];
        assert!(solve(&sing, &[q(1), q(3)], 2, &q(0)).is_none());
    }
}
