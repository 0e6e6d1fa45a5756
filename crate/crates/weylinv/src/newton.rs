//! Newton-relation transforms for types A and C.
//!
//! With `φ: Z[y_1..y_N] → Z[Λ]` sending `σ_l` to `ρ(ω_l)` and the involution
//! `τ(y_i) = c - y_i` (`c = φ(y_i)` at the identity: 1 for A, 2 for C), the
//! polynomials `r_i = φτ(g_{N+1-i})` built from complete sums
//! `g_k = h_k(y_1..y_{N+1-k})` form a flat tuple, and
//! `(ρ_1..ρ_n) A = (r_1..r_n)` for an explicit matrix `A` with unit
//! determinant.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::laurent::{CoefficientRing, Exponent, LaurentPoly};
use crate::root_data::{DynkinType, SimpleFactor};

/// Change of coordinates between fundamental weights and the basis in which
/// the Newton tuple is flat (ω-basis for A, standard basis `e_i` for C).
pub fn to_flat(ty: DynkinType, a: &[i32]) -> Exponent {
    match ty {
        DynkinType::C => {
            let mut b = vec![0; a.len()];
            let mut acc = 0;
            for j in (0..a.len()).rev() {
                acc += a[j];
                b[j] = acc;
            }
            b
        }
        _ => a.to_vec(),
    }
}

pub fn from_flat(ty: DynkinType, b: &[i32]) -> Exponent {
    match ty {
        DynkinType::C => (0..b.len()).map(|i| b[i] - b.get(i + 1).copied().unwrap_or(0)).collect(),
        _ => b.to_vec(),
    }
}

#[derive(Clone, Debug)]
pub struct NewtonTransform {
    pub factor: SimpleFactor,
    /// Augmented orbits `ρ_i` in flat coordinates.
    pub rho: Vec<LaurentPoly>,
    /// The flat tuple `r_i`.
    pub flat: Vec<LaurentPoly>,
    /// `matrix[l][i]`, so that `r_i = Σ_l ρ_l matrix[l][i]`.
    pub matrix: Vec<Vec<LaurentPoly>>,
    pub det: LaurentPoly,
    /// Type A only: `r_{n+1}`, a combination of the others.
    pub eliminated: Option<LaurentPoly>,
    /// Columns whose sign was flipped to make the leading coefficient monic.
    pub flipped: Vec<bool>,
}

/// Memoised `h_k(z_1..z_v)` over a fixed list `z`.
struct CompleteSums<'a> {
    z: &'a [LaurentPoly],
    memo: HashMap<(usize, usize), LaurentPoly>,
    nvars: usize,
}

impl CompleteSums<'_> {
    fn get(&mut self, k: usize, v: usize) -> LaurentPoly {
        if k == 0 {
            return LaurentPoly::one(self.nvars, CoefficientRing::INTEGERS);
        }
        if v == 0 {
            return LaurentPoly::zero(self.nvars, CoefficientRing::INTEGERS);
        }
        if let Some(p) = self.memo.get(&(k, v)) {
            return p.clone();
        }
        // h_k(z_1..z_v) = h_k(z_1..z_{v-1}) + z_v h_{k-1}(z_1..z_v)
        let a = self.get(k, v - 1);
        let b = self.get(k - 1, v);
        let out = &a + &(&self.z[v - 1] * &b);
        self.memo.insert((k, v), out.clone());
        out
    }
}

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

/// Determinant of a square matrix over the Laurent ring by Laplace expansion
/// along rows with memoisation on the set of used columns.
pub fn laurent_det(m: &[Vec<LaurentPoly>]) -> LaurentPoly {
    let n = m.len();
    assert!(n < 32);
    let nvars = m.first().and_then(|r| r.first()).map_or(0, |p| p.nvars());
    let ring = m.first().and_then(|r| r.first()).map_or(CoefficientRing::INTEGERS, |p| p.ring());
    let mut memo: HashMap<u32, LaurentPoly> = HashMap::new();
    fn rec(
        m: &[Vec<LaurentPoly>],
        row: usize,
        used: u32,
        memo: &mut HashMap<u32, LaurentPoly>,
        nvars: usize,
        ring: CoefficientRing,
    ) -> LaurentPoly {
        if row == m.len() {
            return LaurentPoly::one(nvars, ring);
        }
        if let Some(p) = memo.get(&used) {
            return p.clone();
        }
        let mut acc = LaurentPoly::zero(nvars, ring);
        let mut sign = 1i64;
        for c in 0..m.len() {
            if used >> c & 1 == 1 {
                continue;
            }
            if !m[row][c].is_zero() {
                let minor = rec(m, row + 1, used | 1 << c, memo, nvars, ring);
                let term = &m[row][c] * &minor;
                acc = if sign > 0 { &acc + &term } else { &acc - &term };
            }
            sign = -sign;
        }
        memo.insert(used, acc.clone());
        acc
    }
    rec(m, 0, 0, &mut memo, nvars, ring)
}

/// `± x^e`: returns the exponent if `p` is a unit monomial.
pub fn unit_monomial(p: &LaurentPoly) -> Option<Exponent> {
    if p.num_terms() != 1 {
        return None;
    }
    let (e, c) = p.terms().next()?;
    (c.abs().is_one()).then(|| e.clone())
}

pub fn newton_transform(factor: SimpleFactor) -> Result<NewtonTransform> {
    let ty = factor.ty;
    let n = factor.rank;
    let (big_n, c) = match ty {
        DynkinType::A => (n + 1, 1i64),
        DynkinType::C => (n, 2i64),
        _ => return Err(Error::Unsupported(format!("no Newton transform for {factor}"))),
    };
    if n == 0 {
        return Err(Error::InvalidSpec("rank must be positive".into()));
    }
    let z = CoefficientRing::INTEGERS;
    let var = |i: usize, e: i32| {
        let mut v = vec![0; n];
        v[i] = e;
        LaurentPoly::monomial(z, v, BigInt::one())
    };
    // Y_i = φ(y_i) in flat coordinates.
    let ys: Vec<LaurentPoly> = match ty {
        DynkinType::A => (0..big_n)
            .map(|i| {
                let mut e = vec![0; n];
                if i < n {
                    e[i] += 1;
                }
                if i > 0 {
                    e[i - 1] -= 1;
                }
                LaurentPoly::monomial(z, e, BigInt::one())
            })
            .collect(),
        _ => (0..n).map(|i| &var(i, 1) + &var(i, -1)).collect(),
    };
    let cpoly = LaurentPoly::constant(n, z, big(c));
    let zs: Vec<LaurentPoly> = ys.iter().map(|y| &cpoly - y).collect();
    let mut h = CompleteSums { z: &zs, memo: HashMap::new(), nvars: n };

    let rho: Vec<LaurentPoly> = (0..n)
        .map(|l| {
            let mut w = vec![0i64; n];
            w[l] = 1;
            let orbit = factor.orbit(&w);
            let size = orbit.len();
            let mut p = LaurentPoly::from_terms(
                n,
                z,
                orbit.into_iter().map(|v| {
                    let a: Vec<i32> = v.into_iter().map(|x| x as i32).collect();
                    (to_flat(ty, &a), BigInt::one())
                }),
            );
            p.add_term(vec![0; n], -BigInt::from(size));
            p
        })
        .collect();

    // B_{l,k} = Σ_{j=l}^{k} (-1)^{j+1} τh_{k-j}(y_1..y_{N+1-k}) (-1)^l C(N-l, j-l) c^{j-l}
    let mut b_entry = |l: usize, k: usize| -> LaurentPoly {
        let mut acc = LaurentPoly::zero(n, z);
        for j in l..=k {
            let sign = if (j + 1 + l).is_multiple_of(2) { 1 } else { -1 };
            let coeff = big(sign) * binomial(big((big_n - l) as i64), big((j - l) as i64)) * big(c).pow((j - l) as u32);
            let hk = h.get(k - j, big_n + 1 - k);
            acc = &acc + &hk.scale(&coeff);
        }
        acc
    };

    let mut matrix = vec![vec![LaurentPoly::zero(n, z); n]; n];
    for i in 0..n {
        let k = big_n - i;
        for l in 0..n {
            matrix[l][i] = b_entry(l + 1, k);
        }
    }
    let mut flat: Vec<LaurentPoly> = (0..n).map(|i| h.get(big_n - i, i + 1)).collect();
    // Monic leading coefficients: flip column signs where needed.
    let mut flipped = vec![false; n];
    for i in 0..n {
        let deg = flat[i].degrees(i)?;
        let top = flat[i].slice(i, deg.hdeg);
        if top.num_terms() == 1 && top.terms().next().is_some_and(|(_, c)| c.is_negative()) {
            flat[i] = -&flat[i];
            flipped[i] = true;
            for row in matrix.iter_mut() {
                row[i] = -&row[i];
            }
        }
    }
    let eliminated = (ty == DynkinType::A).then(|| h.get(1, big_n));
    let det = laurent_det(&matrix);
    Ok(NewtonTransform { factor, rho, flat, matrix, det, eliminated, flipped })
}

impl NewtonTransform {
    /// `(ρ_1..ρ_n) A`, recomputed.
    pub fn apply(&self) -> Vec<LaurentPoly> {
        let n = self.rho.len();
        (0..n)
            .map(|i| {
                (0..n).fold(LaurentPoly::zero(n, CoefficientRing::INTEGERS), |acc, l| {
                    &acc + &(&self.rho[l] * &self.matrix[l][i])
                })
            })
            .collect()
    }

    pub fn det_is_unit(&self) -> bool {
        unit_monomial(&self.det).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syzygy::check_flatness;

    #[test]
    fn sl2_sanity() {
        let t = newton_transform(SimpleFactor::a(1)).unwrap();
        let x = LaurentPoly::parse("x1", 1, CoefficientRing::INTEGERS).unwrap();
        assert_eq!(t.flat[0], &x * &t.rho[0]);
        assert_eq!(t.flat[0], LaurentPoly::parse("1 - 2*x1 + x1^2", 1, CoefficientRing::INTEGERS).unwrap());
    }

    #[test]
    fn transforms_are_flat_and_unimodular() {
        for n in 1..=5 {
            for f in [SimpleFactor::a(n), SimpleFactor::c(n)] {
                let t = newton_transform(f).unwrap();
                assert_eq!(t.apply(), t.flat, "{f}");
                assert!(check_flatness(&t.flat).ok, "{f}");
                assert!(t.det_is_unit(), "{f}: det = {}", t.det);
            }
        }
    }

    #[test]
    fn eliminated_entry_is_dependent() {
        for n in 1..=4 {
            let t = newton_transform(SimpleFactor::a(n)).unwrap();
            // Σ_{k=1}^{n+1} x_{k-1} r_k = 0 for the unnormalised r_k.
            let mut acc = t.eliminated.clone().unwrap().mul_monomial(&{
                let mut e = vec![0; n];
                e[n - 1] = 1;
                e
            });
            for k in 0..n {
                let mut e = vec![0; n];
                if k > 0 {
                    e[k - 1] = 1;
                }
                let r = if t.flipped[k] { -&t.flat[k] } else { t.flat[k].clone() };
                acc = &acc + &r.mul_monomial(&e);
            }
            assert!(acc.is_zero(), "n = {n}: {acc}");
        }
    }

    #[test]
    fn coordinate_change_round_trips() {
        let a = vec![3, -1, 2, 0];
        assert_eq!(from_flat(DynkinType::C, &to_flat(DynkinType::C, &a)), a);
        assert_eq!(to_flat(DynkinType::C, &[0, 1]), vec![1, 1]);
    }
}
