//! Smith normal form and lattice bookkeeping over Z.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntegerMatrix;
use crate::error::{Error, Result};

/// `left * m * right` is diagonal with `diagonal[0] | diagonal[1] | ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// min(rows, cols) invariant factors, all non-negative.
    pub diagonal: Vec<BigInt>,
    pub left: IntegerMatrix,
    pub right: IntegerMatrix,
    pub rank: usize,
}

pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let (form, _) = smith_with_right_inverse(m, true);
    form
}

/// Also returns `right^{-1}`, tracked alongside the column operations.
pub(crate) fn smith_with_right_inverse(m: &IntegerMatrix, track_left: bool) -> (SmithForm, IntegerMatrix) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut left = IntegerMatrix::identity(if track_left { rows } else { 0 });
    let mut right = IntegerMatrix::identity(cols);
    let mut right_inv = IntegerMatrix::identity(cols);

    let row_swap = |a: &mut IntegerMatrix, left: &mut IntegerMatrix, i: usize, j: usize| {
        a.swap_rows(i, j);
        if track_left {
            left.swap_rows(i, j);
        }
    };

    let steps = rows.min(cols);
    for t in 0..steps {
        loop {
            // smallest nonzero |entry| in the trailing block, first in row-major order
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[(i, j)].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| a[(i, j)].abs() < a[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break;
            };
            row_swap(&mut a, &mut left, t, pi);
            a.swap_cols(t, pj);
            right.swap_cols(t, pj);
            right_inv.swap_rows(t, pj);

            let p = a[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = -a[(i, t)].div_floor(&p);
                a.add_row_multiple(i, t, &q);
                if track_left {
                    left.add_row_multiple(i, t, &q);
                }
                if !a[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = a[(t, j)].div_floor(&p);
                let neg = -q.clone();
                a.add_col_multiple(j, t, &neg);
                right.add_col_multiple(j, t, &neg);
                right_inv.add_row_multiple(t, j, &q);
                if !a[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility: pull an offending row into row t
            let mut offending = None;
            'scan: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !a[(i, j)].is_multiple_of(&p) {
                        offending = Some(i);
                        break 'scan;
                    }
                }
            }
            match offending {
                Some(i) => {
                    let one = BigInt::one();
                    a.add_row_multiple(t, i, &one);
                    if track_left {
                        left.add_row_multiple(t, i, &one);
                    }
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            if track_left {
                left.negate_row(t);
            }
        }
    }
    let diagonal: Vec<BigInt> = (0..steps).map(|i| a[(i, i)].clone()).collect();
    let rank = diagonal.iter().filter(|d| !d.is_zero()).count();
    (SmithForm { diagonal, left, right, rank }, right_inv)
}

/// Rank and index of the row lattice of `generators` inside Z^ambient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeIndex {
    pub rank: usize,
    /// `None` when the lattice has rank below the ambient rank (infinite index).
    pub index: Option<BigInt>,
    /// Index of the lattice inside its saturation Z^n ∩ (Q-span); always finite.
    pub saturation_index: BigInt,
}

pub fn lattice_index(generators: &IntegerMatrix, ambient_rank: usize) -> Result<LatticeIndex> {
    if generators.cols() != ambient_rank {
        return Err(Error::ArityMismatch { expected: ambient_rank, found: generators.cols() });
    }
    let basis = lattice_basis(generators);
    let (form, _) = smith_with_right_inverse(&basis, false);
    let saturation_index: BigInt = form.diagonal.iter().filter(|d| !d.is_zero()).product();
    let index = (form.rank == ambient_rank).then(|| saturation_index.clone());
    Ok(LatticeIndex { rank: form.rank, index, saturation_index })
}

/// A Z-basis (in row echelon form) of the row lattice of `generators`.
pub fn lattice_basis(generators: &IntegerMatrix) -> IntegerMatrix {
    let n = generators.cols();
    let mut basis: Vec<Vec<BigInt>> = Vec::new();
    for i in 0..generators.rows() {
        insert_row(&mut basis, generators.row(i).to_vec());
    }
    IntegerMatrix::from_rows(basis, n).expect("rows have the ambient width")
}

fn lead(v: &[BigInt]) -> Option<usize> {
    v.iter().position(|x| !x.is_zero())
}

fn insert_row(basis: &mut Vec<Vec<BigInt>>, mut v: Vec<BigInt>) {
    loop {
        let Some(l) = lead(&v) else {
            return;
        };
        let Some(pos) = basis.iter().position(|b| lead(b) == Some(l)) else {
            if v[l].is_negative() {
                v.iter_mut().for_each(|x| *x = -std::mem::take(x));
            }
            let at = basis.iter().position(|b| lead(b).unwrap() > l).unwrap_or(basis.len());
            basis.insert(at, v);
            reduce_above(basis);
            return;
        };
        let b = &basis[pos];
        let e = b[l].extended_gcd(&v[l]);
        let g = e.gcd;
        let (bl, vl) = (&b[l] / &g, &v[l] / &g);
        let new_b: Vec<BigInt> = b.iter().zip(&v).map(|(x, y)| &e.x * x + &e.y * y).collect();
        let new_v: Vec<BigInt> = b.iter().zip(&v).map(|(x, y)| &bl * y - &vl * x).collect();
        let mut new_b = new_b;
        if new_b[l].is_negative() {
            new_b.iter_mut().for_each(|x| *x = -std::mem::take(x));
        }
        basis[pos] = new_b;
        v = new_v;
    }
}

/// Hermite-style reduction of entries above pivots, keeps coefficients small.
fn reduce_above(basis: &mut [Vec<BigInt>]) {
    for i in 0..basis.len() {
        let l = lead(&basis[i]).unwrap();
        let p = basis[i][l].clone();
        for r in 0..i {
            let q = basis[r][l].div_floor(&p);
            if q.is_zero() {
                continue;
            }
            let row = basis[i].clone();
            for (x, y) in basis[r].iter_mut().zip(&row) {
                *x -= &q * y;
            }
        }
    }
}

/// Z-basis (k rows) of the saturation Z^n ∩ span_Q(rows of `generators`).
pub fn saturation_basis(generators: &IntegerMatrix) -> IntegerMatrix {
    let basis = lattice_basis(generators);
    let k = basis.rows();
    let (_, right_inv) = smith_with_right_inverse(&basis, false);
    let rows = (0..k).map(|i| right_inv.row(i).to_vec()).collect();
    let sat = IntegerMatrix::from_rows(rows, generators.cols()).expect("square right inverse");
    // echelonize for a canonical presentation
    lattice_basis(&sat)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im(rows: &[Vec<i64>], cols: usize) -> IntegerMatrix {
        IntegerMatrix::from_i64(rows, cols).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check_form(m: &IntegerMatrix, f: &SmithForm) {
        let d = f.left.mul(m).unwrap().mul(&f.right).unwrap();
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                if i == j {
                    assert_eq!(d[(i, j)], f.diagonal[i]);
                } else {
                    assert!(d[(i, j)].is_zero(), "off-diagonal entry in {d:?}");
                }
            }
        }
        assert!(f.left.is_unimodular());
        assert!(f.right.is_unimodular());
        for w in f.diagonal.windows(2) {
            assert!(!w[0].is_negative() && !w[1].is_negative());
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]), "divisibility chain broken: {:?}", f.diagonal);
            }
        }
    }

    #[test]
    fn diag_2_3() {
        let m = im(&[vec![2, 0], vec![0, 3]], 2);
        let f = smith_normal_form(&m);
        check_form(&m, &f);
        assert_eq!(f.diagonal, ints(&[1, 6]));
    }

    #[test]
    fn rows_21_12() {
        let m = im(&[vec![2, 1], vec![1, 2]], 2);
        let f = smith_normal_form(&m);
        check_form(&m, &f);
        assert_eq!(f.diagonal, ints(&[1, 3]));
        assert_eq!(lattice_index(&m, 2).unwrap().index, Some(BigInt::from(3)));
    }

    #[test]
    fn zero_matrix() {
        let m = IntegerMatrix::zeros(2, 3);
        let f = smith_normal_form(&m);
        check_form(&m, &f);
        assert_eq!(f.diagonal, ints(&[0, 0]));
        assert_eq!(f.rank, 0);
    }

    #[test]
    fn lattice_index_examples() {
        let diag = lattice_index(&im(&[vec![2, 0], vec![0, 3]], 2), 2).unwrap();
        assert_eq!((diag.rank, diag.index), (2, Some(BigInt::from(6))));
        let one_d = lattice_index(&im(&[vec![2], vec![3]], 1), 1).unwrap();
        assert_eq!((one_d.rank, one_d.index), (1, Some(BigInt::one())));
        let deficient = lattice_index(&im(&[vec![2, 0]], 2), 2).unwrap();
        assert_eq!((deficient.rank, deficient.index), (1, None));
        assert_eq!(deficient.saturation_index, BigInt::from(2));
    }

    #[test]
    fn saturation_of_even_line() {
        let sat = saturation_basis(&im(&[vec![2, 4], vec![4, 8]], 2));
        assert_eq!(sat.to_rows(), vec![ints(&[1, 2])]);
    }

    #[test]
    fn random_forms_are_valid() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let r = rng.gen_range(1..=4);
            let c = rng.gen_range(1..=4);
            let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-6..=6)).collect()).collect();
            let m = im(&rows, c);
            let f = smith_normal_form(&m);
            check_form(&m, &f);
            if r == c {
                let det = m.determinant().unwrap().abs();
                let prod: BigInt = f.diagonal.iter().product();
                assert_eq!(det, prod);
            }
        }
    }

    #[test]
    fn index_invariant_under_unimodular_row_ops() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let rows: Vec<Vec<i64>> = (0..3).map(|_| (0..2).map(|_| rng.gen_range(-5..=5)).collect()).collect();
            let m = im(&rows, 2);
            let before = lattice_index(&m, 2).unwrap();
            let mut t = m.clone();
            let f = BigInt::from(rng.gen_range(-3..=3));
            t.add_row_multiple(0, 1, &f);
            t.swap_rows(1, 2);
            t.negate_row(0);
            assert_eq!(lattice_index(&t, 2).unwrap(), before);
        }
    }
}
