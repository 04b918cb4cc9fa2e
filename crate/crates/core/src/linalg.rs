//! Small dense linear algebra: exact solves over rationals with symbolic
//! right-hand sides, and floating-point LU determinants.

use alloc::vec::Vec;

use crate::expr::Expr;
use crate::rational::Rational;

/// Solves `A x = b` for an invertible rational matrix and symbolic `b` by
/// Gauss–Jordan elimination. Returns `None` for a singular matrix.
pub fn solve_rational(a: &[Vec<Rational>], b: &[Expr]) -> Option<Vec<Expr>> {
    let n = a.len();
    assert!(a.iter().all(|row| row.len() == n) && b.len() == n, "square system expected");
    let mut m: Vec<Vec<Rational>> = a.to_vec();
    let mut rhs: Vec<Expr> = b.to_vec();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let inv = m[col][col].recip()?;
        for k in 0..n {
            m[col][k] *= inv;
        }
        rhs[col] = rhs[col].scale(inv);
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col];
            for k in 0..n {
                let v = m[col][k];
                m[r][k] -= factor * v;
            }
            let scaled = rhs[col].scale(factor);
            rhs[r] -= &scaled;
        }
    }
    Some(rhs)
}

/// Determinant by LU factorisation with partial pivoting.
pub fn determinant(matrix: &[Vec<f64>]) -> f64 {
    let n = matrix.len();
    let mut m: Vec<Vec<f64>> = matrix.to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let mut pivot = col;
        for r in col + 1..n {
            if libm::fabs(m[r][col]) > libm::fabs(m[pivot][col]) {
                pivot = r;
            }
        }
        if m[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap(col, pivot);
            det = -det;
        }
        let p = m[col][col];
        det *= p;
        for r in col + 1..n {
            let factor = m[r][col] / p;
            if factor == 0.0 {
                continue;
            }
            for k in col..n {
                m[r][k] -= factor * m[col][k];
            }
        }
    }
    det
}

/// Solves `A x = b` in floating point by Gaussian elimination with partial
/// pivoting; `None` when a pivot vanishes.
pub fn solve_f64(matrix: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = matrix.len();
    let mut m: Vec<Vec<f64>> = matrix.to_vec();
    let mut rhs = b.to_vec();
    for col in 0..n {
        let mut pivot = col;
        for r in col + 1..n {
            if libm::fabs(m[r][col]) > libm::fabs(m[pivot][col]) {
                pivot = r;
            }
        }
        if m[pivot][col] == 0.0 {
            return None;
        }
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for r in col + 1..n {
            let factor = m[r][col] / m[col][col];
            for k in col..n {
                m[r][k] -= factor * m[col][k];
            }
            rhs[r] -= factor * rhs[col];
        }
    }
    let mut x = alloc::vec![0.0; n];
    for r in (0..n).rev() {
        let mut acc = rhs[r];
        for k in r + 1..n {
            acc -= m[r][k] * x[k];
        }
        x[r] = acc / m[r][r];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i128) -> Rational {
        Rational::integer(n)
    }

    #[test]
    fn rational_solve_with_symbolic_rhs() {
        // [[0, 1], [-1, 0]] x = (a, b)  =>  x = (-b, a)
        let a = alloc::vec![alloc::vec![q(0), q(1)], alloc::vec![q(-1), q(0)]];
        let b = alloc::vec![Expr::var("a"), Expr::var("b")];
        let x = solve_rational(&a, &b).unwrap();
        assert_eq!(x, alloc::vec![-Expr::var("b"), Expr::var("a")]);
        let singular = alloc::vec![alloc::vec![q(1), q(2)], alloc::vec![q(2), q(4)]];
        assert!(solve_rational(&singular, &b).is_none());
    }

    #[test]
    fn determinants() {
        let m = alloc::vec![alloc::vec![0.0, 2.0], alloc::vec![3.0, 1.0]];
        assert_eq!(determinant(&m), -6.0);
        let id = alloc::vec![alloc::vec![1.0, 0.0, 0.0], alloc::vec![0.0, 1.0, 0.0], alloc::vec![0.0, 0.0, 1.0]];
        assert_eq!(determinant(&id), 1.0);
        let x = solve_f64(&m, &[2.0, 4.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-15 && (x[1] - 1.0).abs() < 1e-15);
    }
}
