//! Gaussian elimination over polynomial matrices whose pivots are nonzero
//! constants. Every carrier frame used here has a constant Gram matrix, so a
//! non-constant pivot is reported instead of leaving the polynomial ring.

use crate::error::{Error, Result};
use crate::ratpoly::{Chart, Polynomial};
use crate::scalar::Scalar;

type Matrix<S> = Vec<Vec<Polynomial<S>>>;

fn find_pivot<S: Scalar>(m: &Matrix<S>, col: usize, from: usize) -> Result<Option<(usize, S)>> {
    let mut nonconstant = false;
    for (r, row) in m.iter().enumerate().skip(from) {
        let entry = &row[col];
        if entry.is_zero() {
            continue;
        }
        match entry.constant_value() {
            Some(c) => return Ok(Some((r, c))),
            None => nonconstant = true,
        }
    }
    if nonconstant {
        return Err(Error::Nondegeneracy(format!(
            "column {col} has only non-constant pivots; elimination would leave the polynomial ring"
        )));
    }
    Ok(None)
}

/// Reduced row echelon form in place; returns the pivot columns.
fn rref<S: Scalar>(m: &mut Matrix<S>, ncols: usize) -> Result<Vec<usize>> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == m.len() {
            break;
        }
        let Some((r, c)) = find_pivot(m, col, row)? else {
            continue;
        };
        m.swap(row, r);
        let inv = S::one() / c;
        for entry in m[row].iter_mut() {
            *entry = entry.scale(&inv);
        }
        let pivot_row = m[row].clone();
        for (k, other) in m.iter_mut().enumerate() {
            if k == row || other[col].is_zero() {
                continue;
            }
            let factor = other[col].clone();
            for (entry, p) in other.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *entry -= &(&factor * p);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    Ok(pivots)
}

/// Solves the square system `m u = rhs`.
pub fn solve<S: Scalar>(m: &[Vec<Polynomial<S>>], rhs: &[Polynomial<S>]) -> Result<Vec<Polynomial<S>>> {
    let n = m.len();
    if rhs.len() != n || m.iter().any(|row| row.len() != n) {
        return Err(Error::Dimension(format!("solve needs a square {n}x{n} system")));
    }
    let mut aug: Matrix<S> = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug, n)?;
    if pivots.len() < n {
        return Err(Error::Nondegeneracy(format!(
            "Gram matrix has rank {} < {n}",
            pivots.len()
        )));
    }
    Ok(aug
        .into_iter()
        .map(|mut row| row.pop().expect("augmented column"))
        .collect())
}

/// Inverse of a square matrix with constant pivots.
pub fn inverse<S: Scalar>(m: &[Vec<Polynomial<S>>], chart: Chart) -> Result<Vec<Vec<Polynomial<S>>>> {
    let n = m.len();
    let mut aug: Matrix<S> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    Polynomial::one(chart)
                } else {
                    Polynomial::zero(chart)
                }
            }));
            r
        })
        .collect();
    let pivots = rref(&mut aug, n)?;
    if pivots.len() < n {
        return Err(Error::Nondegeneracy(format!("matrix has rank {} < {n}", pivots.len())));
    }
    Ok(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Basis of `{u : m u = 0}` for an `r x ncols` matrix.
pub fn kernel<S: Scalar>(m: &[Vec<Polynomial<S>>], ncols: usize, chart: Chart) -> Result<Vec<Vec<Polynomial<S>>>> {
    if m.iter().any(|row| row.len() != ncols) {
        return Err(Error::Dimension("ragged matrix".into()));
    }
    let mut work: Matrix<S> = m.to_vec();
    let pivots = rref(&mut work, ncols)?;
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Polynomial::zero(chart); ncols];
        v[free] = Polynomial::one(chart);
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -&work[row][free];
        }
        basis.push(v);
    }
    Ok(basis)
}

pub fn rank<S: Scalar>(m: &[Vec<Polynomial<S>>], ncols: usize) -> Result<usize> {
    let mut work: Matrix<S> = m.to_vec();
    Ok(rref(&mut work, ncols)?.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Chart, Poly};

    fn c() -> Chart {
        Chart::new(1, 1).unwrap()
    }

    fn int(n: i64) -> Poly {
        Poly::integer(c(), n)
    }

    #[test]
    fn solves_with_polynomial_right_side() {
        let m = vec![vec![int(0), int(2)], vec![int(2), int(0)]];
        let x1 = Poly::variable(c(), 0).unwrap();
        let u = solve(&m, &[x1.clone(), int(4)]).unwrap();
        assert_eq!(u, vec![int(2), x1.scale(&"1/2".parse().unwrap())]);
    }

    #[test]
    fn singular_and_nonconstant_are_errors() {
        let m = vec![vec![int(1), int(1)], vec![int(1), int(1)]];
        assert!(matches!(solve(&m, &[int(0), int(0)]), Err(Error::Nondegeneracy(_))));
        let x1 = Poly::variable(c(), 0).unwrap();
        let m = vec![vec![x1, int(0)], vec![int(0), int(1)]];
        assert!(matches!(solve(&m, &[int(0), int(0)]), Err(Error::Nondegeneracy(_))));
    }

    #[test]
    fn kernel_and_inverse() {
        let m = vec![vec![int(1), int(0), int(-1)]];
        let k = kernel(&m, 3, c()).unwrap();
        assert_eq!(k.len(), 2);
        for v in &k {
            let dot: Poly = m[0].iter().zip(v).map(|(a, b)| a * b).fold(int(0), |s, t| &s + &t);
            assert!(dot.is_zero());
        }
        let g = vec![vec![int(0), int(1)], vec![int(1), int(0)]];
        assert_eq!(inverse(&g, c()).unwrap(), g);
        assert_eq!(rank(&m, 3).unwrap(), 1);
    }
}
