//! Exact Gaussian elimination over a [`Field`].

use num_rational::BigRational;
use num_traits::Zero;

use crate::field::Field;

/// Row-reduces `rows` in place and returns the rank. The surviving first
/// `rank` rows form an echelon basis of the row space.
pub fn row_reduce(field: Field, rows: &mut Vec<Vec<BigRational>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    for r in rows.iter_mut() {
        for x in r.iter_mut() {
            *x = field.norm(x.clone());
        }
    }
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = field.inv(&rows[rank][col]).expect("nonzero pivot");
        for x in rows[rank].iter_mut() {
            *x = field.mul(x, &inv);
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = field.add(x, &field.neg(&field.mul(&factor, p)));
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    rank
}

pub fn rank(field: Field, rows: &[Vec<BigRational>]) -> usize {
    let mut rows = rows.to_vec();
    row_reduce(field, &mut rows)
}

/// Inverse of a square matrix, or `None` if singular.
pub fn invert(field: Field, m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut aug: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    BigRational::from_integer(1.into())
                } else {
                    BigRational::zero()
                }
            }));
            r
        })
        .collect();
    let r = row_reduce(field, &mut aug);
    if r < n || (0..n).any(|i| aug[i][i].is_zero()) {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}
