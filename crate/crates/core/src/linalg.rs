//! Exact linear algebra over the rationals: a sparse Gauss-Jordan
//! nullspace used by the ansatz solver, and a dense rank used by the
//! sampling-based counts.

use std::collections::BTreeMap;

use num::{One, Signed, Zero};

use crate::Rat;

/// Nullspace basis of the sparse system `A c = 0`.
///
/// `rows` holds the nonzero entries of each equation as `(column, value)`
/// pairs. The returned basis is canonical for the given column order:
/// Gauss-Jordan pivots on the smallest available column, and each basis
/// vector is scaled to coprime integers with its first nonzero entry
/// positive.
pub fn nullspace(rows: Vec<Vec<(usize, Rat)>>, ncols: usize) -> Vec<Vec<Rat>> {
    // pivot column -> fully reduced row (pivot coefficient 1)
    let mut pivots: BTreeMap<usize, BTreeMap<usize, Rat>> = BTreeMap::new();
    for row in rows {
        let mut r: BTreeMap<usize, Rat> =
            row.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        // reduce against existing pivots
        loop {
            let lead = match r.keys().next() {
                None => break,
                Some(k) => *k,
            };
            match pivots.get(&lead) {
                Some(p) => {
                    let factor = r[&lead].clone();
                    for (col, val) in p {
                        let entry = r.entry(*col).or_insert_with(Rat::zero);
                        *entry -= &factor * val;
                        if entry.is_zero() {
                            r.remove(col);
                        }
                    }
                }
                None => {
                    // normalize and eliminate this column from other pivots
                    let lead_val = r[&lead].clone();
                    let mut norm: BTreeMap<usize, Rat> = BTreeMap::new();
                    for (col, val) in &r {
                        norm.insert(*col, val / &lead_val);
                    }
                    for (_, p) in pivots.iter_mut() {
                        if let Some(f) = p.get(&lead).cloned() {
                            for (col, val) in &norm {
                                let entry = p.entry(*col).or_insert_with(Rat::zero);
                                *entry -= &f * val;
                                if entry.is_zero() {
                                    p.remove(col);
                                }
                            }
                        }
                    }
                    pivots.insert(lead, norm);
                    break;
                }
            }
        }
    }

    let pivot_cols: Vec<usize> = pivots.keys().copied().collect();
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); ncols];
        v[free] = Rat::one();
        for (pcol, prow) in &pivots {
            if let Some(val) = prow.get(&free) {
                v[*pcol] = -val.clone();
            }
        }
        basis.push(scale_to_primitive(v));
    }
    basis
}

/// Scale a rational vector to coprime integers with the first nonzero
/// entry positive.
pub fn scale_to_primitive(v: Vec<Rat>) -> Vec<Rat> {
    let mut num_gcd = num::BigInt::from(0);
    let mut den_lcm = num::BigInt::from(1);
    for x in &v {
        if x.is_zero() {
            continue;
        }
        num_gcd = num::Integer::gcd(&num_gcd, &x.numer().abs());
        den_lcm = num::Integer::lcm(&den_lcm, &x.denom().abs());
    }
    if num_gcd.is_zero() {
        return v;
    }
    let mut scale = Rat::new(den_lcm, num_gcd);
    if let Some(first) = v.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            scale = -scale;
        }
    }
    v.into_iter().map(|x| x * &scale).collect()
}

/// Exact rank of a dense rational matrix.
pub fn rank(mut m: Vec<Vec<Rat>>) -> usize {
    let nrows = m.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = m[0].len();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..ncols {
        if row == nrows {
            break;
        }
        let pivot = (row..nrows).find(|&r| !m[r][col].is_zero());
        let pivot = match pivot {
            Some(p) => p,
            None => continue,
        };
        m.swap(row, pivot);
        let pv = m[row][col].clone();
        for r in (row + 1)..nrows {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &pv;
            for c in col..ncols {
                let sub = &f * &m[row][c];
                m[r][c] -= sub;
            }
        }
        row += 1;
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::int;

    #[test]
    fn nullspace_of_simple_system() {
        // c0 + c1 = 0 over two columns -> basis {(1, -1)}
        let rows = vec![vec![(0, int(1)), (1, int(1))]];
        let basis = nullspace(rows, 2);
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0], vec![int(1), int(-1)]);
    }

    #[test]
    fn nullspace_trivial_when_full_rank() {
        let rows = vec![
            vec![(0, int(1))],
            vec![(1, int(2)), (0, int(3))],
        ];
        assert!(nullspace(rows, 2).is_empty());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(vec![]), 0);
        let m = vec![
            vec![int(1), int(2), int(3)],
            vec![int(2), int(4), int(6)],
            vec![int(0), int(1), int(1)],
        ];
        assert_eq!(rank(m), 2);
    }

    #[test]
    fn primitive_scaling_sign() {
        let v = vec![int(0), crate::rat(-2, 3), int(4)];
        assert_eq!(scale_to_primitive(v), vec![int(0), int(1), int(-6)]);
    }
}
