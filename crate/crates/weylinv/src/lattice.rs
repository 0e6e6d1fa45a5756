//! Integer lattices: Hermite and Smith normal forms, kernels, sublattice
//! membership and finite quotient groups.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn to_big_matrix(m: &[Vec<i64>]) -> IntMatrix {
    m.iter().map(|r| r.iter().map(|&v| big(v)).collect()).collect()
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
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

pub fn vec_mat(v: &[BigInt], m: &IntMatrix) -> Vec<BigInt> {
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols).map(|j| v.iter().zip(m).fold(BigInt::zero(), |acc, (a, r)| acc + a * &r[j])).collect()
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    let cols = m.first().map_or(0, |r| r.len());
    (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Row-style Hermite normal form of the row span. Zero rows are dropped;
/// pivots are positive and entries above each pivot lie in `[0, pivot)`.
pub fn hnf(rows: &[Vec<BigInt>], ncols: usize) -> IntMatrix {
    let mut m: IntMatrix = rows.iter().filter(|r| r.iter().any(|v| !v.is_zero())).cloned().collect();
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..ncols {
        if pivot_row >= m.len() {
            break;
        }
        loop {
            // Row with smallest nonzero |entry| in this column.
            let best = (pivot_row..m.len())
                .filter(|&r| !m[r][col].is_zero())
                .min_by(|&a, &b| m[a][col].abs().cmp(&m[b][col].abs()));
            let Some(best) = best else { break };
            m.swap(pivot_row, best);
            let mut done = true;
            for r in pivot_row + 1..m.len() {
                if m[r][col].is_zero() {
                    continue;
                }
                let q = m[r][col].div_floor(&m[pivot_row][col]);
                let (head, tail) = m.split_at_mut(r);
                let p = &head[pivot_row];
                for (x, y) in tail[0].iter_mut().zip(p) {
                    *x -= &q * y;
                }
                if !tail[0][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if m[pivot_row][col].is_zero() {
            continue;
        }
        if m[pivot_row][col].is_negative() {
            for x in m[pivot_row].iter_mut() {
                *x = -x.clone();
            }
        }
        for r in 0..pivot_row {
            let q = m[r][col].div_floor(&m[pivot_row][col]);
            if q.is_zero() {
                continue;
            }
            let (head, tail) = m.split_at_mut(pivot_row);
            for (x, y) in head[r].iter_mut().zip(&tail[0]) {
                *x -= &q * y;
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    m.truncate(pivot_row);
    m
}

/// Basis of `{v : v * m = 0}` (left kernel) as rows.
pub fn left_kernel(m: &IntMatrix, ncols: usize) -> IntMatrix {
    let n = m.len();
    let aug: IntMatrix = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    hnf(&aug, ncols + n)
        .into_iter()
        .filter(|r| r[..ncols].iter().all(|v| v.is_zero()))
        .map(|r| r[ncols..].to_vec())
        .collect()
}

/// Smith normal form `U * a * V = D` with `D` diagonal and each diagonal
/// entry dividing the next. Returns `(U, D, V)`.
pub fn snf(a: &IntMatrix, ncols: usize) -> (IntMatrix, IntMatrix, IntMatrix) {
    let nrows = a.len();
    let mut d = a.clone();
    let mut u = identity(nrows);
    let mut v = identity(ncols);
    let rows_op = |m: &mut IntMatrix, dst: usize, src: usize, q: &BigInt| {
        let s = m[src].clone();
        for (x, y) in m[dst].iter_mut().zip(&s) {
            *x -= q * y;
        }
    };
    let cols_op = |m: &mut IntMatrix, dst: usize, src: usize, q: &BigInt| {
        for row in m.iter_mut() {
            let y = row[src].clone();
            row[dst] -= q * y;
        }
    };
    let swap_cols = |m: &mut IntMatrix, a: usize, b: usize| {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
    };
    for t in 0..nrows.min(ncols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..nrows {
                for j in t..ncols {
                    if !d[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else {
                return (u, d, v);
            };
            d.swap(t, bi);
            u.swap(t, bi);
            swap_cols(&mut d, t, bj);
            swap_cols(&mut v, t, bj);
            let mut clean = true;
            for i in t + 1..nrows {
                let q = d[i][t].div_floor(&d[t][t]);
                if !q.is_zero() {
                    rows_op(&mut d, i, t, &q);
                    rows_op(&mut u, i, t, &q);
                }
                if !d[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..ncols {
                let q = d[t][j].div_floor(&d[t][t]);
                if !q.is_zero() {
                    cols_op(&mut d, j, t, &q);
                    cols_op(&mut v, j, t, &q);
                }
                if !d[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Divisibility: fold any offending row into row t and retry.
            let bad = (t + 1..nrows).find(|&i| (t + 1..ncols).any(|j| !(&d[i][j] % &d[t][t]).is_zero()));
            match bad {
                Some(i) => {
                    let m1 = BigInt::from(-1);
                    rows_op(&mut d, t, i, &m1);
                    rows_op(&mut u, t, i, &m1);
                }
                None => break,
            }
        }
        if d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
    }
    (u, d, v)
}

/// Determinant by fraction-free Bareiss elimination.
pub fn det(m: &IntMatrix) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Inverse of a square integer matrix over Q.
pub fn rational_inverse(m: &IntMatrix) -> Result<Vec<Vec<BigRational>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<BigRational> = r.iter().map(|x| BigRational::from_integer(x.clone())).collect();
            row.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero()).ok_or_else(|| Error::Internal("singular matrix".into()))?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in a[c].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                let pr = a[c].clone();
                for (x, y) in a[r].iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
            }
        }
    }
    Ok(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// A sublattice of Z^dim, stored by its Hermite basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    dim: usize,
    basis: IntMatrix,
}

impl Lattice {
    pub fn zero(dim: usize) -> Self {
        Lattice { dim, basis: vec![] }
    }

    pub fn full(dim: usize) -> Self {
        Lattice { dim, basis: identity(dim) }
    }

    pub fn from_generators(dim: usize, gens: &[Vec<BigInt>]) -> Self {
        for g in gens {
            assert_eq!(g.len(), dim, "generator length");
        }
        Lattice { dim, basis: hnf(gens, dim) }
    }

    pub fn from_i64(dim: usize, gens: &[Vec<i64>]) -> Self {
        Self::from_generators(dim, &to_big_matrix(gens))
    }

    /// `diag(scales) * Z^dim`.
    pub fn diagonal(scales: &[i64]) -> Self {
        let n = scales.len();
        let rows: Vec<Vec<i64>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { scales[i] } else { 0 }).collect()).collect();
        Self::from_i64(n, &rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn basis_i64(&self) -> Vec<Vec<i64>> {
        self.basis
            .iter()
            .map(|r| r.iter().map(|v| i64::try_from(v).expect("lattice entry fits in i64")).collect())
            .collect()
    }

    pub fn join(&self, other: &Lattice) -> Lattice {
        assert_eq!(self.dim, other.dim);
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Lattice::from_generators(self.dim, &rows)
    }

    pub fn intersect(&self, other: &Lattice) -> Lattice {
        assert_eq!(self.dim, other.dim);
        let r = self.basis.len();
        // a B1 = b B2 via the left kernel of [B1; -B2]
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().map(|row| row.iter().map(|v| -v).collect::<Vec<_>>()));
        let gens: Vec<Vec<BigInt>> =
            left_kernel(&rows, self.dim).iter().map(|k| vec_mat(&k[..r], &self.basis)).collect();
        Lattice::from_generators(self.dim, &gens)
    }

    pub fn with_vectors(&self, gens: &[Vec<BigInt>]) -> Lattice {
        let mut rows = self.basis.clone();
        rows.extend(gens.iter().cloned());
        Lattice::from_generators(self.dim, &rows)
    }

    /// Integer coordinates of `v` against the basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut rem = v.to_vec();
        let mut coords = Vec::with_capacity(self.basis.len());
        for row in &self.basis {
            let col = row.iter().position(|x| !x.is_zero()).expect("HNF rows are nonzero");
            let (q, r) = rem[col].div_rem(&row[col]);
            if !r.is_zero() {
                return None;
            }
            for (x, y) in rem.iter_mut().zip(row) {
                *x -= &q * y;
            }
            coords.push(q);
        }
        rem.iter().all(|x| x.is_zero()).then_some(coords)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_i64(&self, v: &[i64]) -> bool {
        let v: Vec<BigInt> = v.iter().map(|&x| big(x)).collect();
        self.contains(&v)
    }

    pub fn is_subset_of(&self, other: &Lattice) -> bool {
        self.basis.iter().all(|r| other.contains(r))
    }
}

/// A finitely generated abelian group `Z^free + sum Z/d_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorGroup {
    pub invariant_factors: Vec<BigInt>,
    pub free_rank: usize,
}

impl FactorGroup {
    pub fn trivial() -> Self {
        FactorGroup { invariant_factors: vec![], free_rank: 0 }
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty() && self.free_rank == 0
    }

    /// Order of the torsion part.
    pub fn torsion_order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    pub fn factors_i64(&self) -> Vec<i64> {
        self.invariant_factors.iter().map(|v| i64::try_from(v).expect("factor fits in i64")).collect()
    }

    /// `sup / sub`, requiring `sub ⊆ sup`.
    pub fn quotient(sub: &Lattice, sup: &Lattice) -> Result<Self> {
        let coords: IntMatrix = sub
            .basis
            .iter()
            .map(|r| sup.coordinates(r).ok_or_else(|| Error::Inclusion(format!("{r:?} not in super-lattice"))))
            .collect::<Result<_>>()?;
        let r = sup.rank();
        if coords.is_empty() {
            return Ok(FactorGroup { invariant_factors: vec![], free_rank: r });
        }
        let (_, d, _) = snf(&coords, r);
        let mut factors = Vec::new();
        let mut nonzero = 0;
        for i in 0..d.len().min(r) {
            if !d[i][i].is_zero() {
                nonzero += 1;
                if !d[i][i].is_one() {
                    factors.push(d[i][i].clone());
                }
            }
        }
        factors.sort();
        Ok(FactorGroup { invariant_factors: factors, free_rank: r - nonzero })
    }
}

impl std::fmt::Display for FactorGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self.invariant_factors.iter().map(|d| format!("Z/{d}")).collect();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hnf_is_canonical() {
        let a = Lattice::from_i64(2, &[vec![2, 4], vec![0, 6]]);
        let b = Lattice::from_i64(2, &[vec![2, -2], vec![4, 14], vec![0, 6]]);
        assert_eq!(a, b);
        assert_eq!(a.basis_i64(), vec![vec![2, 4], vec![0, 6]]);
        assert!(a.contains_i64(&[4, 2]));
        assert!(!a.contains_i64(&[1, 0]));
    }

    #[test]
    fn intersection_of_coprime_scalings() {
        let a = Lattice::from_i64(2, &[vec![2, 0], vec![0, 1]]);
        let b = Lattice::from_i64(2, &[vec![3, 0], vec![1, 1]]);
        let c = a.intersect(&b);
        assert_eq!(c.basis_i64(), vec![vec![2, 2], vec![0, 3]]);
        assert_eq!(a.intersect(&Lattice::full(2)), a);
    }

    proptest! {
        #[test]
        fn intersection_is_largest_common_sublattice(
            a in proptest::collection::vec(-6i64..=6, 4),
            b in proptest::collection::vec(-6i64..=6, 4),
            v in proptest::collection::vec(-30i64..=30, 2),
        ) {
            let la = Lattice::from_i64(2, &[a[..2].to_vec(), a[2..].to_vec()]);
            let lb = Lattice::from_i64(2, &[b[..2].to_vec(), b[2..].to_vec()]);
            let c = la.intersect(&lb);
            prop_assert!(c.is_subset_of(&la) && c.is_subset_of(&lb));
            prop_assert_eq!(c.contains_i64(&v), la.contains_i64(&v) && lb.contains_i64(&v));
        }
    }

    #[test]
    fn smith_form_of_quotient() {
        let sub = Lattice::from_i64(2, &[vec![2, 0], vec![0, 4]]);
        let g = FactorGroup::quotient(&sub, &Lattice::full(2)).unwrap();
        assert_eq!(g.factors_i64(), vec![2, 4]);
        let sub = Lattice::from_i64(2, &[vec![4, 4], vec![4, -4]]);
        let g = FactorGroup::quotient(&sub, &Lattice::full(2)).unwrap();
        assert_eq!(g.factors_i64(), vec![4, 8]);
        assert!(FactorGroup::quotient(&Lattice::full(2), &Lattice::full(2)).unwrap().is_trivial());
        assert!(FactorGroup::quotient(&Lattice::full(2), &sub).is_err());
    }

    #[test]
    fn kernel_example() {
        let m = to_big_matrix(&[vec![1], vec![1], vec![-2]]);
        let k = left_kernel(&m, 1);
        assert_eq!(k.len(), 2);
        for r in &k {
            assert!(vec_mat(r, &m)[0].is_zero());
        }
    }

    fn arb_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-9i64..10, c), r))
    }

    proptest! {
        #[test]
        fn snf_transforms_are_consistent(m in arb_matrix()) {
            let a = to_big_matrix(&m);
            let c = m[0].len();
            let (u, d, v) = snf(&a, c);
            prop_assert_eq!(mat_mul(&mat_mul(&u, &a), &v), d.clone());
            prop_assert!(det(&u).abs().is_one());
            prop_assert!(det(&v).abs().is_one());
            let diag: Vec<BigInt> = (0..d.len().min(c)).map(|i| d[i][i].clone()).collect();
            for i in 0..d.len() {
                for j in 0..c {
                    if i != j { prop_assert!(d[i][j].is_zero()); }
                }
            }
            for w in diag.windows(2) {
                if !w[1].is_zero() { prop_assert!((&w[1] % &w[0]).is_zero()); }
                else { prop_assert!(true); }
            }
        }

        #[test]
        fn hnf_preserves_span(m in arb_matrix()) {
            let a = to_big_matrix(&m);
            let l = Lattice::from_generators(m[0].len(), &a);
            for r in &a { prop_assert!(l.contains(r)); }
            for r in l.basis() {
                prop_assert!(Lattice::from_generators(m[0].len(), &a).contains(r));
            }
            prop_assert_eq!(Lattice::from_generators(m[0].len(), l.basis()), l.clone());
        }
    }
}
