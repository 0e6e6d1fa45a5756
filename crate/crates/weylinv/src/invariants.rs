//! The characteristic map `c2`, the lattices `Q ⊇ Sdec ⊇ Dec` in Killing
//! coordinates, their factor groups, and the quotient reductions used for
//! the PGO8 parity statements.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::generators::{build_generators, default_lambda0, gcd_chain};
use crate::laurent::{CoefficientRing, Grading, LaurentPoly};
use crate::lattice::{big, hnf, left_kernel, rational_inverse, snf, to_big_matrix, FactorGroup, IntMatrix, Lattice};
use crate::root_data::{grading_from_basis, DynkinType, GroupSpec, LatticeModel, SimpleFactor};
use crate::tables;

/// An element of `S^{≤2}` over the fundamental weights; `deg2[i][j]` for
/// `i <= j` is the coefficient of `ω_i ω_j` (entries below the diagonal stay 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedForm {
    pub deg0: BigInt,
    pub deg1: Vec<BigInt>,
    pub deg2: Vec<Vec<BigInt>>,
}

impl TruncatedForm {
    pub fn zero(n: usize) -> Self {
        TruncatedForm { deg0: BigInt::zero(), deg1: vec![BigInt::zero(); n], deg2: vec![vec![BigInt::zero(); n]; n] }
    }

    pub fn rank(&self) -> usize {
        self.deg1.len()
    }

    /// Image of `e^λ`: `∏ (1 + ω_i + ω_i^2)^{a_i}`, with `(1 - ω_i)` for negative powers.
    pub fn of_monomial(exp: &[i32]) -> Self {
        let n = exp.len();
        let mut t = TruncatedForm::zero(n);
        t.deg0 = BigInt::one();
        for i in 0..n {
            let a = i64::from(exp[i]);
            t.deg1[i] = big(a);
            t.deg2[i][i] = big((a * a + a) / 2);
            for j in i + 1..n {
                t.deg2[i][j] = big(a * i64::from(exp[j]));
            }
        }
        t
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        TruncatedForm {
            deg0: &self.deg0 * c,
            deg1: self.deg1.iter().map(|x| x * c).collect(),
            deg2: self.deg2.iter().map(|r| r.iter().map(|x| x * c).collect()).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        TruncatedForm {
            deg0: &self.deg0 + &o.deg0,
            deg1: self.deg1.iter().zip(&o.deg1).map(|(a, b)| a + b).collect(),
            deg2: self.deg2.iter().zip(&o.deg2).map(|(r, s)| r.iter().zip(s).map(|(a, b)| a + b).collect()).collect(),
        }
    }

    /// Product with everything of degree ≥ 3 dropped.
    pub fn mul(&self, o: &Self) -> Self {
        let n = self.rank();
        let mut out = self.scale(&o.deg0).add(&o.scale(&self.deg0));
        out.deg0 = &self.deg0 * &o.deg0;
        for i in 0..n {
            for j in 0..n {
                let p = &self.deg1[i] * &o.deg1[j];
                if !p.is_zero() {
                    let (a, b) = if i <= j { (i, j) } else { (j, i) };
                    out.deg2[a][b] += p;
                }
            }
        }
        out
    }
}

/// The truncated image of a Laurent polynomial over Z.
pub fn truncated_image(f: &LaurentPoly) -> TruncatedForm {
    let n = f.nvars();
    let mut t = TruncatedForm::zero(n);
    for (e, c) in f.terms() {
        t = t.add(&TruncatedForm::of_monomial(e).scale(c));
    }
    t
}

/// `c2(f)`: the degree-2 part of the truncated image.
pub fn c2(f: &LaurentPoly) -> TruncatedForm {
    let mut t = truncated_image(f);
    t.deg0 = BigInt::zero();
    t.deg1.iter_mut().for_each(|x| *x = BigInt::zero());
    t
}

/// `Σ d_i q_i`, one coordinate per simple factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KillingVector(pub Vec<BigInt>);

impl KillingVector {
    pub fn neg(&self) -> Self {
        KillingVector(self.0.iter().map(|x| -x).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    /// Equal up to one global sign.
    pub fn eq_up_to_sign(&self, o: &Self) -> bool {
        self == o || *self == o.neg()
    }

    pub fn from_i64(v: &[i64]) -> Self {
        KillingVector(v.iter().map(|&x| big(x)).collect())
    }
}

impl fmt::Display for KillingVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Degree-2 table (upper triangular, global indices) of `Σ d_f q_f`.
pub fn killing_table(model: &LatticeModel, d: &[BigRational]) -> Vec<Vec<BigRational>> {
    let n = model.total_rank;
    let mut t = vec![vec![BigRational::zero(); n]; n];
    for (f, fac) in model.factors().iter().enumerate() {
        let o = model.offsets[f];
        let (sq, cross) = fac.killing_terms();
        for (i, s) in sq.iter().enumerate() {
            t[o + i][o + i] = &d[f] * BigRational::from_integer(big(*s));
        }
        for (i, j, c) in cross {
            let (a, b) = if i <= j { (i, j) } else { (j, i) };
            t[o + a][o + b] = &d[f] * BigRational::from_integer(big(c));
        }
    }
    t
}

/// Expresses a degree-2 table in the Killing basis, failing if the form is not
/// a combination of the `q_f` or has non-integral coordinates.
pub fn killing_coordinates(model: &LatticeModel, deg2: &[Vec<BigInt>]) -> Result<KillingVector> {
    let d: Vec<BigRational> = model
        .factors()
        .iter()
        .enumerate()
        .map(|(f, fac)| {
            let o = model.offsets[f];
            BigRational::new(deg2[o][o].clone(), big(fac.killing_terms().0[0]))
        })
        .collect();
    let expect = killing_table(model, &d);
    let n = model.total_rank;
    for i in 0..n {
        for j in i..n {
            if BigRational::from_integer(deg2[i][j].clone()) != expect[i][j] {
                return Err(Error::Internal(format!("form is not W-invariant at ω{}ω{}", i + 1, j + 1)));
            }
        }
    }
    d.into_iter()
        .map(|x| {
            if x.is_integer() {
                Ok(x.to_integer())
            } else {
                Err(Error::Internal(format!("non-integral Killing coordinate {x}")))
            }
        })
        .collect::<Result<Vec<_>>>()
        .map(KillingVector)
}

/// `c2` of an element with vanishing degree-1 image, in Killing coordinates.
pub fn c2_killing(model: &LatticeModel, f: &LaurentPoly) -> Result<KillingVector> {
    let t = truncated_image(f);
    if t.deg1.iter().any(|x| !x.is_zero()) {
        return Err(Error::DegreeCondition("degree-1 image does not vanish".into()));
    }
    killing_coordinates(model, &t.deg2)
}

/// `λ^T Q^{-1} λ` for the Killing Gram matrix `Q` of one factor.
fn inverse_norm(inv: &[Vec<BigRational>], lambda: &[i64]) -> BigRational {
    let mut acc = BigRational::zero();
    for (i, row) in inv.iter().enumerate() {
        if lambda[i] == 0 {
            continue;
        }
        for (j, x) in row.iter().enumerate() {
            if lambda[j] != 0 {
                acc += x * BigRational::from_integer(big(lambda[i] * lambda[j]));
            }
        }
    }
    acc
}

/// Inverse of the Killing Gram matrix (not doubled).
pub fn killing_inverse(fac: &SimpleFactor) -> Vec<Vec<BigRational>> {
    let m2 = to_big_matrix(&fac.killing_matrix2());
    let inv2 = rational_inverse(&m2).expect("Killing form is nondegenerate");
    inv2.into_iter().map(|r| r.into_iter().map(|x| x * BigRational::from_integer(big(2))).collect()).collect()
}

/// `(k, |W(λ)|)` with `c2(ρ(λ)) = k q` for a single factor, using
/// `Σ_{χ∈W(λ)} χχ^T = (|W(λ)| λ^T Q^{-1} λ / rank) Q`.
pub fn factor_orbit_c2(fac: &SimpleFactor, inv: &[Vec<BigRational>], lambda: &[i64]) -> Result<(BigInt, BigInt)> {
    let size = BigInt::from(fac.orbit_size(lambda));
    let t = inverse_norm(inv, lambda) * BigRational::from_integer(size.clone())
        / BigRational::from_integer(big(fac.rank as i64));
    // Σχ² = t q; c2 = -t/2.
    let k = -t / BigRational::from_integer(big(2));
    if !k.is_integer() {
        return Err(Error::Internal(format!("odd orbit form for {fac} at {lambda:?}")));
    }
    Ok((k.to_integer(), size))
}

/// `c2(ρ(λ)) = -½ Σ_{χ∈W(λ)} χ²` in Killing coordinates.
pub fn c2_orbit(model: &LatticeModel, lambda: &[i64]) -> Result<KillingVector> {
    let parts = model.split(lambda);
    let data: Vec<(BigInt, BigInt)> = model
        .factors()
        .iter()
        .zip(&parts)
        .map(|(f, p)| factor_orbit_c2(f, &killing_inverse(f), p))
        .collect::<Result<_>>()?;
    Ok(KillingVector(
        (0..data.len())
            .map(|f| {
                data.iter().enumerate().fold(data[f].0.clone(), |acc, (g, (_, s))| if g == f { acc } else { acc * s })
            })
            .collect(),
    ))
}

/// Compares the closed form with the truncated ring map on `ρ(λ) - |W(λ)|`.
pub fn c2_orbit_crosscheck(model: &LatticeModel, lambda: &[i64]) -> Result<bool> {
    let closed = c2_orbit(model, lambda)?;
    let direct = c2_killing(model, &model.orbit_poly(lambda, true))?;
    Ok(closed.eq_up_to_sign(&direct))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exactness {
    Exact,
    LowerBound,
}

impl fmt::Display for Exactness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Exactness::Exact => "exact",
            Exactness::LowerBound => "lower-bound",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantLattice {
    pub lattice: Lattice,
    pub exactness: Exactness,
}

impl InvariantLattice {
    pub fn exact(lattice: Lattice) -> Self {
        InvariantLattice { lattice, exactness: Exactness::Exact }
    }

    pub fn contains(&self, v: &KillingVector) -> bool {
        self.lattice.contains(&v.0)
    }

    pub fn hnf_i64(&self) -> Vec<Vec<i64>> {
        self.lattice.basis_i64()
    }
}

/// `Q(G)` computed on the Hermite basis of `T*`.
pub fn compute_q(model: &LatticeModel) -> Result<InvariantLattice> {
    compute_q_with_basis(model, &model.tstar_basis)
}

/// `Q(G)` from an arbitrary basis of `T*` (rows in fundamental-weight coordinates).
pub fn compute_q_with_basis(model: &LatticeModel, basis: &[Vec<i64>]) -> Result<InvariantLattice> {
    let n = model.total_rank;
    let nf = model.factors().len();
    if basis.len() != n {
        return Err(Error::RankMismatch(n, basis.len()));
    }
    let binv = rational_inverse(&to_big_matrix(basis))?;
    // For the form with coordinates e_f: N = B^{-T} M B^{-1}; conditions N_jj ∈ Z, 2 N_jk ∈ Z.
    let mut conditions: Vec<Vec<BigRational>> = Vec::new();
    let mut per_factor: Vec<Vec<Vec<BigRational>>> = Vec::with_capacity(nf);
    for f in 0..nf {
        let mut d = vec![BigRational::zero(); nf];
        d[f] = BigRational::one();
        let t = killing_table(model, &d);
        // symmetric Gram matrix M with M_ii = t_ii, M_ij = t_ij / 2
        let m: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            t[i][i].clone()
                        } else {
                            let (a, b) = if i < j { (i, j) } else { (j, i) };
                            &t[a][b] / BigRational::from_integer(big(2))
                        }
                    })
                    .collect()
            })
            .collect();
        // N = B^{-T} M B^{-1}; N_jk = Σ_{a,b} binv[a][j] M[a][b] binv[b][k]
        let mb: Vec<Vec<BigRational>> = (0..n)
            .map(|a| {
                (0..n).map(|k| (0..n).fold(BigRational::zero(), |acc, b| acc + &m[a][b] * &binv[b][k])).collect()
            })
            .collect();
        let nn: Vec<Vec<BigRational>> = (0..n)
            .map(|j| {
                (0..n).map(|k| (0..n).fold(BigRational::zero(), |acc, a| acc + &binv[a][j] * &mb[a][k])).collect()
            })
            .collect();
        per_factor.push(nn);
    }
    for j in 0..n {
        for k in j..n {
            let scale = if j == k { BigRational::one() } else { BigRational::from_integer(big(2)) };
            conditions.push((0..nf).map(|f| &per_factor[f][j][k] * &scale).collect());
        }
    }
    Ok(InvariantLattice::exact(integral_solutions(&conditions, nf)))
}

/// `{d ∈ Z^nf : Σ_f c_f d_f ∈ Z for every condition c}`.
fn integral_solutions(conditions: &[Vec<BigRational>], nf: usize) -> Lattice {
    let conds: Vec<&Vec<BigRational>> = conditions.iter().filter(|c| c.iter().any(|x| !x.is_integer())).collect();
    if conds.is_empty() {
        return Lattice::full(nf);
    }
    let l = conds.iter().flat_map(|c| c.iter()).fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let k = conds.len();
    // rows: d_f -> (L c_f), then y_k -> -L e_k
    let mut m: IntMatrix = Vec::with_capacity(nf + k);
    for f in 0..nf {
        m.push(conds.iter().map(|c| (&c[f] * BigRational::from_integer(l.clone())).to_integer()).collect());
    }
    for i in 0..k {
        m.push((0..k).map(|j| if i == j { -l.clone() } else { BigInt::zero() }).collect());
    }
    let ker = left_kernel(&m, k);
    let proj: Vec<Vec<BigInt>> = ker.into_iter().map(|r| r[..nf].to_vec()).collect();
    Lattice::from_generators(nf, &proj)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecMode {
    Enumerate,
    Table,
    Both,
}

pub const DEFAULT_HEIGHT: u32 = 8;
const STABILITY_WINDOW: u32 = 2;

struct FactorSample {
    rep: Vec<i64>,
    k: BigInt,
    size: BigInt,
}

/// Dominant weights with coordinate sum at most `h`.
pub fn dominant_weights_up_to(rank: usize, h: u32) -> Vec<Vec<i64>> {
    fn go(prefix: &mut Vec<i64>, left: i64, rank: usize, out: &mut Vec<Vec<i64>>) {
        if prefix.len() == rank {
            out.push(prefix.clone());
            return;
        }
        for a in 0..=left {
            prefix.push(a);
            go(prefix, left - a, rank, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(rank), i64::from(h), rank, &mut out);
    out
}

fn factor_samples(fac: &SimpleFactor, h: u32) -> Result<Vec<FactorSample>> {
    let inv = killing_inverse(fac);
    dominant_weights_up_to(fac.rank, h)
        .into_par_iter()
        .map(|lam| {
            let (k, size) = factor_orbit_c2(fac, &inv, &lam)?;
            Ok(FactorSample { rep: lam, k, size })
        })
        .collect()
}

/// Lattice generated by `c2(ρ(λ))` over dominant `λ ∈ T*` whose coordinates sum to at most `h` on every factor.
pub fn dec_at_height(model: &LatticeModel, h: u32) -> Result<Lattice> {
    let nf = model.factors().len();
    let samples: Vec<Vec<FactorSample>> =
        model.factors().iter().map(|f| factor_samples(f, h)).collect::<Result<_>>()?;
    // Seeds: weights supported on one factor with trivial center class lie in T*.
    let seeds: Vec<BigInt> = model
        .factors()
        .iter()
        .zip(&samples)
        .map(|(f, s)| {
            s.iter()
                .filter(|x| f.center_class(&x.rep).iter().all(|&c| c == 0))
                .fold(BigInt::zero(), |g, x| g.gcd(&x.k))
        })
        .collect();
    let modulus = seeds.iter().filter(|d| !d.is_zero()).fold(BigInt::one(), |acc, d| acc.lcm(d));
    let all_seeded = seeds.iter().all(|d| !d.is_zero());
    // Deduplicate per factor by (class, k mod D_f, size mod lcm D).
    let reduced: Vec<Vec<(Vec<i64>, BigInt, BigInt, &Vec<i64>)>> = model
        .factors()
        .iter()
        .zip(&samples)
        .enumerate()
        .map(|(f, (fac, s))| {
            let mut seen = BTreeSet::new();
            let mut out = Vec::new();
            for x in s {
                let class = fac.center_class(&x.rep);
                let k = if seeds[f].is_zero() { x.k.clone() } else { x.k.mod_floor(&seeds[f]) };
                let size = if all_seeded { x.size.mod_floor(&modulus) } else { x.size.clone() };
                if seen.insert((class.clone(), k.clone(), size.clone())) {
                    out.push((class, k, size, &x.rep));
                }
            }
            out
        })
        .collect();
    let mut gens: Vec<Vec<BigInt>> = Vec::new();
    for (f, d) in seeds.iter().enumerate() {
        if !d.is_zero() {
            let mut v = vec![BigInt::zero(); nf];
            v[f] = d.clone();
            gens.push(v);
        }
    }
    let mut idx = vec![0usize; nf];
    let mut lattice = Lattice::from_generators(nf, &gens);
    let mut batch: Vec<Vec<BigInt>> = Vec::new();
    'outer: loop {
        let lambda: Vec<i64> = idx.iter().enumerate().flat_map(|(f, &i)| reduced[f][i].3.iter().copied()).collect();
        if model.in_tstar(&lambda) {
            let v: Vec<BigInt> = (0..nf)
                .map(|f| {
                    let x = (0..nf).fold(reduced[f][idx[f]].1.clone(), |acc, g| {
                        if g == f {
                            acc
                        } else {
                            acc * &reduced[g][idx[g]].2
                        }
                    });
                    if seeds[f].is_zero() {
                        x
                    } else {
                        x.mod_floor(&seeds[f])
                    }
                })
                .collect();
            if v.iter().any(|x| !x.is_zero()) {
                batch.push(v);
                if batch.len() >= 256 {
                    lattice = lattice.with_vectors(&batch);
                    batch.clear();
                }
            }
        }
        for f in 0..nf {
            idx[f] += 1;
            if idx[f] < reduced[f].len() {
                continue 'outer;
            }
            idx[f] = 0;
        }
        break;
    }
    Ok(lattice.with_vectors(&batch))
}

/// Grows the height from 1 until the lattice is unchanged for two
/// consecutive increments or `max_height` is reached.
pub fn dec_enumerate(model: &LatticeModel, max_height: u32) -> Result<Lattice> {
    let mut prev: Option<Lattice> = None;
    let mut stable = 0;
    let mut h = 1;
    loop {
        let cur = dec_at_height(model, h)?;
        if prev.as_ref() == Some(&cur) {
            stable += 1;
        } else {
            stable = 0;
        }
        if stable >= STABILITY_WINDOW || h >= max_height.max(1) {
            return Ok(cur);
        }
        prev = Some(cur);
        h += 1;
    }
}

pub fn compute_dec(model: &LatticeModel, height: u32, mode: DecMode) -> Result<InvariantLattice> {
    let table = tables::dec_table(&model.spec);
    match mode {
        DecMode::Table => match table {
            Some(t) => Ok(InvariantLattice::exact(t)),
            None => Ok(InvariantLattice { lattice: dec_enumerate(model, height)?, exactness: Exactness::LowerBound }),
        },
        DecMode::Enumerate => {
            Ok(InvariantLattice { lattice: dec_enumerate(model, height)?, exactness: Exactness::LowerBound })
        }
        DecMode::Both => {
            let e = dec_enumerate(model, height)?;
            match table {
                Some(t) if t == e => Ok(InvariantLattice::exact(t)),
                Some(t) => Err(Error::Mismatch(format!(
                    "Dec: enumeration {:?} vs closed form {:?}",
                    e.basis_i64(),
                    t.basis_i64()
                ))),
                None => Ok(InvariantLattice { lattice: e, exactness: Exactness::LowerBound }),
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SdecMode {
    Generators,
    Elements,
    Table,
    Bounds,
}

impl fmt::Display for SdecMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SdecMode::Generators => "generators",
            SdecMode::Elements => "elements",
            SdecMode::Table => "table",
            SdecMode::Bounds => "bounds",
        })
    }
}

pub fn generators_applicable(model: &LatticeModel) -> bool {
    model.grading.moduli == [2] && model.factors().iter().all(|f| matches!(f.ty, DynkinType::A | DynkinType::C))
}

/// Mode used when none is requested.
pub fn default_sdec_mode(model: &LatticeModel) -> SdecMode {
    if generators_applicable(model) {
        SdecMode::Generators
    } else if tables::sdec_table(&model.spec).is_some() {
        SdecMode::Table
    } else {
        SdecMode::Bounds
    }
}

/// `c2` of each generator of `I^W ∩ R[T*]` (index-2 quotients with A/C factors).
pub fn generator_forms(model: &LatticeModel, lambda0: Option<&[i64]>) -> Result<Vec<KillingVector>> {
    if !generators_applicable(model) {
        return Err(Error::Unsupported("generators mode needs an index-2 quotient with factors of type A or C".into()));
    }
    let chain = gcd_chain(model)?;
    let l0 = match lambda0 {
        Some(l) => l.to_vec(),
        None => default_lambda0(model, &chain),
    };
    let gens = build_generators(model, &chain, &l0)?;
    gens.all()
        .map(|g| {
            if !g.poly.augmentation().is_zero() {
                return Err(Error::Internal(format!("generator {} has nonzero augmentation", g.id)));
            }
            c2_killing(model, &g.poly)
        })
        .collect()
}

/// `e^{λ} z` for a pair of factors, as used for the explicit semi-decomposable elements.
pub fn pair_element(model: &LatticeModel, f: usize, g: usize) -> Option<LaurentPoly> {
    let (a, b) = (model.factors()[f], model.factors()[g]);
    if a.ty != b.ty {
        return None;
    }
    let n = model.total_rank;
    let (node, ca, cb) = match a.ty {
        DynkinType::B if a.rank == 2 && b.rank == 2 => (1, 1, 1),
        DynkinType::C | DynkinType::D => {
            let gg = (a.rank as i64).gcd(&(b.rank as i64));
            (0, b.rank as i64 / gg, a.rank as i64 / gg)
        }
        _ => return None,
    };
    let w = |fac: usize| {
        let mut v = vec![0i64; n];
        v[model.offsets[fac] + node] = 1;
        v
    };
    let z = &model.orbit_poly(&w(f), true).scale(&big(ca)) - &model.orbit_poly(&w(g), true).scale(&big(cb));
    let y = &model.monomial(&w(f)) * &z;
    y.is_homogeneous(&model.grading, &model.grading.zero_class()).then_some(y)
}

pub fn element_forms(model: &LatticeModel) -> Result<Vec<KillingVector>> {
    let nf = model.factors().len();
    let mut out = Vec::new();
    for f in 0..nf {
        for g in f + 1..nf {
            if let Some(y) = pair_element(model, f, g) {
                out.push(c2_killing(model, &y)?);
            }
        }
    }
    Ok(out)
}

/// Per-factor height used for the shifted elements of [`sdec_lower_bound`].
pub const SHIFT_HEIGHT: u32 = 2;

/// Upper bound for Sdec from the map `Z[Λ] → Z[Λ/T*]`.
///
/// Every `x = Σ f_j ρ̄(ω_j)` in `Z[T*] ∩ I^W` maps to 0, and `c2(x)` only
/// depends on the augmentations of the `f_j`. Solving the image condition
/// over `Z[Λ/T*]` bounds the possible augmentation vectors.
pub fn sdec_upper_bound(model: &LatticeModel) -> Result<Lattice> {
    let nf = model.factors().len();
    let classes = model.grading.all_classes();
    let index: BTreeMap<Vec<i64>, usize> = classes.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect();
    let nc = classes.len();
    let n = model.total_rank;
    let mut rows: IntMatrix = Vec::with_capacity(n * nc);
    let mut forms = Vec::with_capacity(n);
    for j in 0..n {
        let w = model.fundamental_weight(j);
        let cj = model.class_of(&w);
        let size = big(model.orbit_size(&w) as i64);
        forms.push(c2_orbit(model, &w)?.0);
        for g in &classes {
            // f_{j,g} e^g ρ̄_j ↦ |O_j| (e^{g + c_j} - e^g)
            let mut row = vec![BigInt::zero(); nc];
            row[index[&model.grading.add(g, &cj)]] += &size;
            row[index[g]] -= &size;
            rows.push(row);
        }
    }
    let kernel = left_kernel(&rows, nc);
    let images: Vec<Vec<BigInt>> = kernel
        .iter()
        .map(|v| {
            (0..nf)
                .map(|f| (0..n).fold(BigInt::zero(), |acc, j| acc + v[j * nc..(j + 1) * nc].iter().sum::<BigInt>() * &forms[j][f]))
                .collect()
        })
        .collect();
    Ok(Lattice::from_generators(nf, &images))
}

/// Lower bound for Sdec from elements `e^μ Σ a_λ ρ̄(λ)` with every `λ` in the
/// class of `-μ` and `Σ a_λ |W(λ)| = 0`, together with Dec and the explicit
/// pair elements.
pub fn sdec_lower_bound(model: &LatticeModel, dec: &Lattice, h: u32) -> Result<Lattice> {
    let nf = model.factors().len();
    let samples: Vec<Vec<FactorSample>> =
        model.factors().iter().map(|f| factor_samples(f, h)).collect::<Result<_>>()?;
    let zero = model.grading.zero_class();
    let mut by_class: BTreeMap<Vec<i64>, Vec<Vec<BigInt>>> = BTreeMap::new();
    let mut idx = vec![0usize; nf];
    loop {
        let rep: Vec<i64> = idx.iter().zip(&samples).flat_map(|(&i, s)| s[i].rep.iter().copied()).collect();
        let class = model.class_of(&rep);
        if class != zero {
            let size: BigInt = idx.iter().zip(&samples).map(|(&i, s)| s[i].size.clone()).product();
            let mut row = vec![size];
            for f in 0..nf {
                let others: BigInt =
                    (0..nf).filter(|&g| g != f).map(|g| samples[g][idx[g]].size.clone()).product();
                row.push(&samples[f][idx[f]].k * others);
            }
            by_class.entry(class).or_default().push(row);
        }
        let mut f = 0;
        while f < nf {
            idx[f] += 1;
            if idx[f] < samples[f].len() {
                break;
            }
            idx[f] = 0;
            f += 1;
        }
        if f == nf {
            break;
        }
    }
    let mut gens: Vec<Vec<BigInt>> = Vec::new();
    for rows in by_class.values() {
        for r in hnf(rows, nf + 1) {
            if r[0].is_zero() {
                gens.push(r[1..].to_vec());
            }
        }
    }
    gens.extend(element_forms(model)?.into_iter().map(|v| v.0));
    Ok(dec.with_vectors(&gens))
}

pub fn compute_sdec(model: &LatticeModel, dec: &InvariantLattice, mode: SdecMode) -> Result<InvariantLattice> {
    match mode {
        SdecMode::Generators => {
            let forms = generator_forms(model, None)?;
            let span = Lattice::from_generators(model.factors().len(), &forms.into_iter().map(|v| v.0).collect::<Vec<_>>());
            if !dec.lattice.is_subset_of(&span) {
                return Err(Error::Inclusion("Dec is not contained in the span of the generator forms".into()));
            }
            Ok(InvariantLattice::exact(span))
        }
        SdecMode::Elements => {
            let forms = element_forms(model)?;
            Ok(InvariantLattice {
                lattice: dec.lattice.with_vectors(&forms.into_iter().map(|v| v.0).collect::<Vec<_>>()),
                exactness: Exactness::LowerBound,
            })
        }
        SdecMode::Table => match tables::sdec_table(&model.spec) {
            Some(t) => Ok(InvariantLattice::exact(t)),
            // simple groups have Sdec = Dec
            None if model.factors().len() == 1 => Ok(dec.clone()),
            None => Err(Error::Unsupported("no closed form for Sdec of this group".into())),
        },
        SdecMode::Bounds => {
            let lower = sdec_lower_bound(model, &dec.lattice, SHIFT_HEIGHT)?;
            let upper = sdec_upper_bound(model)?.join(&dec.lattice).intersect(&compute_q(model)?.lattice);
            if !lower.is_subset_of(&upper) {
                return Err(Error::Internal("Sdec lower bound exceeds the upper bound".into()));
            }
            let exact = lower == upper && dec.exactness == Exactness::Exact;
            Ok(InvariantLattice {
                lattice: lower,
                exactness: if exact { Exactness::Exact } else { Exactness::LowerBound },
            })
        }
    }
}

pub fn factor_group(sub: &InvariantLattice, sup: &InvariantLattice) -> Result<FactorGroup> {
    FactorGroup::quotient(&sub.lattice, &sup.lattice)
}

/// Generators of `sup / sub` with their orders, as vectors in Killing coordinates.
pub fn factor_group_generators(sub: &Lattice, sup: &Lattice) -> Result<Vec<(BigInt, Vec<BigInt>)>> {
    let r = sup.rank();
    let coords: IntMatrix = sub
        .basis()
        .iter()
        .map(|row| sup.coordinates(row).ok_or_else(|| Error::Inclusion("sub-lattice not contained".into())))
        .collect::<Result<_>>()?;
    if coords.is_empty() {
        return Ok(vec![]);
    }
    let (_, d, v) = snf(&coords, r);
    let vinv: Vec<Vec<BigInt>> =
        rational_inverse(&v)?.into_iter().map(|row| row.into_iter().map(|x| x.to_integer()).collect()).collect();
    let mut out = Vec::new();
    for i in 0..r {
        let di = if i < d.len() { d[i][i].abs() } else { BigInt::zero() };
        if di.is_one() {
            continue;
        }
        let g: Vec<BigInt> = (0..sup.dim())
            .map(|c| (0..r).fold(BigInt::zero(), |acc, k| acc + &vinv[i][k] * &sup.basis()[k][c]))
            .collect();
        out.push((di, g));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// `q_1 - 2 q_2` style rendering of a Killing vector.
pub fn format_form(v: &[BigInt]) -> String {
    let mut s = String::new();
    for (i, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let sign = if c.is_negative() { "-" } else { "+" };
        let mag = c.abs();
        let coef = if mag.is_one() { String::new() } else { format!("{mag}") };
        if s.is_empty() {
            if c.is_negative() {
                s.push('-');
            }
        } else {
            s.push_str(&format!(" {sign} "));
        }
        s.push_str(&format!("{coef}q{}", i + 1));
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

/// Everything computed for one group.
#[derive(Clone, Debug)]
pub struct InvariantReport {
    pub spec: GroupSpec,
    pub q: InvariantLattice,
    pub dec: InvariantLattice,
    pub sdec: InvariantLattice,
    pub sdec_mode: SdecMode,
    /// Upper bound from [`sdec_upper_bound`], joined with Dec and cut down to Q.
    pub sdec_upper: Lattice,
    pub inv_ind: FactorGroup,
    pub inv_sd: FactorGroup,
}

pub fn invariants(
    model: &LatticeModel,
    height: u32,
    dec_mode: DecMode,
    sdec_mode: Option<SdecMode>,
) -> Result<InvariantReport> {
    let q = compute_q(model)?;
    let dec = compute_dec(model, height, dec_mode)?;
    let sdec_mode = sdec_mode.unwrap_or_else(|| default_sdec_mode(model));
    let sdec = compute_sdec(model, &dec, sdec_mode)?;
    assemble_report(model, q, dec, sdec, sdec_mode)
}

/// Checks `Dec ⊆ Sdec ⊆ Q` and, for computed modes, `Sdec ⊆` the upper bound.
pub fn assemble_report(
    model: &LatticeModel,
    q: InvariantLattice,
    dec: InvariantLattice,
    sdec: InvariantLattice,
    sdec_mode: SdecMode,
) -> Result<InvariantReport> {
    if !dec.lattice.is_subset_of(&sdec.lattice) {
        return Err(Error::Inclusion("Dec ⊄ Sdec".into()));
    }
    if !sdec.lattice.is_subset_of(&q.lattice) {
        return Err(Error::Inclusion("Sdec ⊄ Q".into()));
    }
    let sdec_upper = sdec_upper_bound(model)?.join(&dec.lattice).intersect(&q.lattice);
    if sdec_mode != SdecMode::Table && !sdec.lattice.is_subset_of(&sdec_upper) {
        return Err(Error::Inclusion("computed Sdec exceeds the group-ring upper bound".into()));
    }
    let inv_ind = factor_group(&dec, &q)?;
    let inv_sd = factor_group(&dec, &sdec)?;
    Ok(InvariantReport { spec: model.spec.clone(), q, dec, sdec, sdec_mode, sdec_upper, inv_ind, inv_sd })
}

/// An element of `(Z/m)[A]` for a finite abelian group `A` given by a grading.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRingElement {
    pub grading: Grading,
    pub modulus: u64,
    pub coeffs: BTreeMap<Vec<i64>, BigInt>,
}

impl GroupRingElement {
    fn insert(&mut self, class: Vec<i64>, c: BigInt) {
        let m = big(self.modulus as i64);
        let e = self.coeffs.entry(class).or_insert_with(BigInt::zero);
        *e = (&*e + c).mod_floor(&m);
        self.coeffs.retain(|_, v| !v.is_zero());
    }

    pub fn coeff(&self, class: &[i64]) -> BigInt {
        self.coeffs.get(class).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = GroupRingElement { grading: self.grading.clone(), modulus: self.modulus, coeffs: BTreeMap::new() };
        for (a, x) in &self.coeffs {
            for (b, y) in &o.coeffs {
                out.insert(self.grading.add(a, b), x * y);
            }
        }
        out
    }
}

/// Pushes exponents to `Λ / sublattice` and reduces coefficients mod `m`.
pub fn quotient_reduction(f: &LaurentPoly, sublattice: &[Vec<i64>], m: u64) -> Result<GroupRingElement> {
    let n = f.nvars();
    let l = Lattice::from_i64(n, sublattice);
    if l.rank() < n {
        return Err(Error::InvalidSpec("sublattice has infinite index".into()));
    }
    if m < 2 {
        return Err(Error::InvalidModulus(m));
    }
    let grading = grading_from_basis(l.basis(), n);
    let mut out = GroupRingElement { grading: grading.clone(), modulus: m, coeffs: BTreeMap::new() };
    for (e, c) in f.terms() {
        out.insert(grading.class_of(e), c.clone());
    }
    Ok(out)
}

/// PGO8 = Spin8 / full center.
pub fn pgo8_spec() -> GroupSpec {
    GroupSpec::new(vec![SimpleFactor::d(4)], vec![vec![vec![1, 0]], vec![vec![0, 1]]]).expect("valid spec")
}

/// Twice the standard coordinates of a D4 weight given on fundamental weights.
pub fn d4_double_coordinates(a: &[i64]) -> [i64; 4] {
    [2 * a[0] + 2 * a[1] + a[2] + a[3], 2 * a[1] + a[2] + a[3], a[2] + a[3], a[3] - a[2]]
}

/// `Λ' = {x ∈ T* : x_1 and x_2 + x_3 + x_4 even}` on fundamental weights.
pub fn pgo8_auxiliary_lattice() -> Vec<Vec<i64>> {
    let mut gens = Vec::new();
    let r = -4..=4;
    for a in r.clone() {
        for b in r.clone() {
            for c in r.clone() {
                for d in r.clone() {
                    let x = d4_double_coordinates(&[a, b, c, d]);
                    if x.iter().any(|v| v % 2 != 0) {
                        continue;
                    }
                    let y: Vec<i64> = x.iter().map(|v| v / 2).collect();
                    if y.iter().sum::<i64>() % 2 == 0 && y[0] % 2 == 0 && (y[1] + y[2] + y[3]) % 2 == 0 {
                        gens.push(vec![a, b, c, d]);
                    }
                }
            }
        }
    }
    Lattice::from_i64(4, &gens).basis_i64()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pgo8Report {
    pub in_tstar: bool,
    /// Augmentation of `f_i` is even.
    pub parities: [bool; 4],
    /// `(i, class, sum of coefficients of f_i in that class)` for i = 1, 3, 4.
    pub component_sums: Vec<(usize, Vec<i64>, BigInt)>,
    /// Component sums are even outside the exceptional class of `ω_i`.
    pub lemma_holds: bool,
    /// `f_1 ρ_1 + f_3 ρ_3 + f_4 ρ_4` reduced into `(Z/16)[Λ/T*]` is a constant.
    pub mod16_constant: bool,
    /// Augmentations of `f_1, f_3, f_4` are even whenever `in_tstar`.
    pub holds: bool,
}

pub fn pgo8_parity_check(f: &[LaurentPoly]) -> Result<Pgo8Report> {
    let model = LatticeModel::compile(&pgo8_spec())?;
    if f.len() != 4 {
        return Err(Error::LengthMismatch(4, f.len()));
    }
    let rho: Vec<LaurentPoly> = (0..4).map(|i| model.rho(i)).collect();
    let x = f.iter().zip(&rho).fold(LaurentPoly::zero(4, CoefficientRing::INTEGERS), |acc, (a, b)| &acc + &(a * b));
    let g = &model.grading;
    let in_tstar = x.is_homogeneous(g, &g.zero_class());
    let two = big(2);
    let parities = [0, 1, 2, 3].map(|i| f[i].augmentation().is_even());
    let mut component_sums = Vec::new();
    let mut lemma_holds = true;
    for i in [0usize, 2, 3] {
        let exceptional = model.class_of(&model.fundamental_weight(i));
        for class in g.all_classes() {
            let s = f[i].homogeneous_component(g, &class).augmentation();
            if class != exceptional && !s.mod_floor(&two).is_zero() {
                lemma_holds = false;
            }
            component_sums.push((i + 1, class, s));
        }
    }
    let partial = [0usize, 2, 3]
        .iter()
        .fold(LaurentPoly::zero(4, CoefficientRing::INTEGERS), |acc, &i| &acc + &(&f[i] * &rho[i]));
    let red = quotient_reduction(&partial, &model.tstar_basis, 16)?;
    let mod16_constant = red.coeffs.keys().all(|k| k.iter().all(|&v| v == 0));
    let holds = !in_tstar || (parities[0] && parities[2] && parities[3] && lemma_holds);
    Ok(Pgo8Report {
        in_tstar,
        parities,
        component_sums,
        lemma_holds: !in_tstar || lemma_holds,
        mod16_constant: !in_tstar || mod16_constant,
        holds,
    })
}

/// Converts a lattice basis to small integers for display.
pub fn basis_to_i64(l: &Lattice) -> Vec<Vec<i64>> {
    l.basis().iter().map(|r| r.iter().map(|x| x.to_i64().expect("entry fits in i64")).collect()).collect()
}

pub fn abs_vec(v: &[BigInt]) -> Vec<BigInt> {
    v.iter().map(|x| x.abs()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tables::{diagonal_spec, separate_spec};
    use proptest::prelude::*;

    fn model(spec: GroupSpec) -> LatticeModel {
        LatticeModel::compile(&spec).unwrap()
    }

    fn lat(rows: &[Vec<i64>]) -> Lattice {
        Lattice::from_i64(rows[0].len(), rows)
    }

    #[test]
    fn closed_form_matches_ring_map() {
        for f in [SimpleFactor::a(3), SimpleFactor::b(3), SimpleFactor::c(3), SimpleFactor::d(4), SimpleFactor::b(2)] {
            let m = model(GroupSpec::simply_connected(vec![f]));
            for lam in dominant_weights_up_to(f.rank, 2) {
                assert!(c2_orbit_crosscheck(&m, &lam).unwrap(), "{f} {lam:?}");
            }
        }
        let m = model(GroupSpec::simply_connected(vec![SimpleFactor::c(2), SimpleFactor::a(2)]));
        assert!(c2_orbit_crosscheck(&m, &[1, 0, 1, 1]).unwrap());
    }

    #[test]
    fn known_orbit_values() {
        // B: vector orbit gives 2q, spin orbit of Spin5 gives q
        let m = model(GroupSpec::simply_connected(vec![SimpleFactor::b(2)]));
        assert_eq!(c2_orbit(&m, &[1, 0]).unwrap(), KillingVector::from_i64(&[-2]));
        assert_eq!(c2_orbit(&m, &[0, 1]).unwrap(), KillingVector::from_i64(&[-1]));
        // Sp: ρ(2e1) gives 4q
        let m = model(GroupSpec::simply_connected(vec![SimpleFactor::c(3)]));
        assert_eq!(c2_orbit(&m, &[2, 0, 0]).unwrap(), KillingVector::from_i64(&[-4]));
        // SL_m: kω1 gives -k^2 q
        let m = model(GroupSpec::simply_connected(vec![SimpleFactor::a(3)]));
        assert_eq!(c2_orbit(&m, &[3, 0, 0]).unwrap(), KillingVector::from_i64(&[-9]));
    }

    #[test]
    fn q_examples() {
        let m = model(diagonal_spec(vec![SimpleFactor::c(2), SimpleFactor::c(3)], 2).unwrap());
        // 2d + 3d' ≡ 0 mod 4
        let q = compute_q(&m).unwrap().lattice;
        assert_eq!(q, lat(&[vec![1, 2], vec![0, 4]]));
        let m = model(diagonal_spec(vec![SimpleFactor::b(2), SimpleFactor::b(3)], 2).unwrap());
        assert_eq!(compute_q(&m).unwrap().lattice, lat(&[vec![1, 1], vec![0, 2]]));
        let m = model(diagonal_spec(vec![SimpleFactor::e6(), SimpleFactor::e6()], 3).unwrap());
        assert_eq!(compute_q(&m).unwrap().lattice, lat(&[vec![1, 2], vec![0, 3]]));
        let m = model(separate_spec(vec![SimpleFactor::a(1)], &[2]).unwrap());
        assert_eq!(compute_q(&m).unwrap().lattice, lat(&[vec![4]]));
    }

    #[test]
    fn q_does_not_depend_on_the_basis() {
        let m = model(diagonal_spec(vec![SimpleFactor::a(3), SimpleFactor::a(3)], 4).unwrap());
        let base = compute_q(&m).unwrap();
        let mut b = m.tstar_basis.clone();
        // unimodular row operations
        let r0 = b[0].clone();
        for (x, y) in b[1].iter_mut().zip(&r0) {
            *x += 3 * y;
        }
        b.swap(2, 5);
        let r4 = b[4].clone();
        for (x, y) in b[0].iter_mut().zip(&r4) {
            *x -= y;
        }
        assert_eq!(compute_q_with_basis(&m, &b).unwrap(), base);
    }

    #[test]
    fn dec_enumeration_agrees_with_tables() {
        for spec in [
            diagonal_spec(vec![SimpleFactor::c(2), SimpleFactor::c(3)], 2).unwrap(),
            diagonal_spec(vec![SimpleFactor::b(2), SimpleFactor::b(3)], 2).unwrap(),
            diagonal_spec(vec![SimpleFactor::a(1), SimpleFactor::a(3)], 2).unwrap(),
            separate_spec(vec![SimpleFactor::c(2)], &[2]).unwrap(),
        ] {
            let m = model(spec.clone());
            let dec = compute_dec(&m, DEFAULT_HEIGHT, DecMode::Both);
            assert!(dec.is_ok(), "{spec:?}: {dec:?}");
        }
    }

    #[test]
    fn sp_pair_reproduces_the_example() {
        let m = model(diagonal_spec(vec![SimpleFactor::c(2), SimpleFactor::c(2)], 2).unwrap());
        let r = invariants(&m, DEFAULT_HEIGHT, DecMode::Both, None).unwrap();
        assert_eq!(r.sdec_mode, SdecMode::Generators);
        assert_eq!(r.inv_ind.factors_i64(), vec![2]);
        assert_eq!(r.inv_sd.factors_i64(), vec![2]);
    }

    #[test]
    fn type_c_element_value() {
        for (a, b) in [(1usize, 1usize), (2, 3), (4, 4)] {
            let m = model(diagonal_spec(vec![SimpleFactor::c(a), SimpleFactor::c(b)], 2).unwrap());
            let y = pair_element(&m, 0, 1).unwrap();
            let g = (a as i64).gcd(&(b as i64));
            let want = KillingVector::from_i64(&[b as i64 / g, -(a as i64) / g]);
            assert!(c2_killing(&m, &y).unwrap().eq_up_to_sign(&want));
        }
    }

    #[test]
    fn factor_group_of_equal_lattices_is_trivial() {
        let l = InvariantLattice::exact(Lattice::diagonal(&[2, 6]));
        assert!(factor_group(&l, &l).unwrap().is_trivial());
    }

    #[test]
    fn bounds_meet_the_generator_span() {
        for (spec, sd) in [
            (diagonal_spec(vec![SimpleFactor::a(7), SimpleFactor::a(7)], 2), vec![2]),
            (diagonal_spec(vec![SimpleFactor::c(1), SimpleFactor::c(4)], 2), vec![2]),
            (diagonal_spec(vec![SimpleFactor::c(2), SimpleFactor::c(3)], 2), vec![2]),
            (diagonal_spec(vec![SimpleFactor::a(3), SimpleFactor::a(5)], 2), vec![2]),
        ] {
            let m = model(spec.unwrap());
            let r = invariants(&m, DEFAULT_HEIGHT, DecMode::Table, Some(SdecMode::Generators)).unwrap();
            let b = invariants(&m, DEFAULT_HEIGHT, DecMode::Table, Some(SdecMode::Bounds)).unwrap();
            assert_eq!(r.sdec.lattice, b.sdec.lattice);
            assert_eq!(r.sdec.lattice, r.sdec_upper);
            assert_eq!(b.sdec.exactness, Exactness::Exact);
            assert_eq!(r.inv_sd.factors_i64(), sd);
        }
    }

    #[test]
    fn upper_bound_excludes_a_single_form() {
        // (SL8 x SL8)/μ2: odd fundamental weights have odd c2 and orbit sizes divisible by 8,
        // so the two coefficients of any form in Sdec have the same parity.
        let m = model(diagonal_spec(vec![SimpleFactor::a(7), SimpleFactor::a(7)], 2).unwrap());
        let u = sdec_upper_bound(&m).unwrap();
        assert!(u.contains_i64(&[1, 1]));
        assert!(!u.contains_i64(&[1, 0]));
        assert_eq!(compute_q(&m).unwrap().lattice, Lattice::full(2));
    }

    #[test]
    fn pgo8_reductions() {
        let m = model(pgo8_spec());
        let sub = pgo8_auxiliary_lattice();
        assert_eq!(Lattice::from_i64(4, &sub).basis().len(), 4);
        let r1 = quotient_reduction(&m.rho(0), &sub, 4).unwrap();
        let e1 = quotient_reduction(&m.monomial(&[1, 0, 0, 0]), &sub, 4).unwrap();
        let e2 = quotient_reduction(&m.monomial(&[-1, 1, 0, 0]), &sub, 4).unwrap();
        let two = LaurentPoly::constant(4, CoefficientRing::INTEGERS, big(2));
        let two = quotient_reduction(&two, &sub, 4).unwrap();
        let mut want = two.mul(&e1);
        for (k, v) in two.mul(&e2).coeffs {
            want.insert(k, v);
        }
        assert_eq!(r1, want);
        for i in 1..4 {
            assert!(quotient_reduction(&m.rho(i), &sub, 4).unwrap().is_zero());
        }
    }

    #[test]
    fn quotient_reduction_rejects_infinite_index() {
        let f = LaurentPoly::one(2, CoefficientRing::INTEGERS);
        assert!(quotient_reduction(&f, &[vec![1, 0]], 2).is_err());
    }

    fn small_poly() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((prop::collection::vec(-2i32..=2, 3), -3i64..=3), 0..5).prop_map(|ts| {
            LaurentPoly::from_terms(3, CoefficientRing::INTEGERS, ts.into_iter().map(|(e, c)| (e, big(c))))
        })
    }

    fn aug_ideal(p: LaurentPoly) -> LaurentPoly {
        let a = p.augmentation();
        &p - &LaurentPoly::constant(3, CoefficientRing::INTEGERS, a)
    }

    proptest! {
        #[test]
        fn truncation_is_multiplicative(f in small_poly(), g in small_poly()) {
            let lhs = truncated_image(&(&f * &g));
            let rhs = truncated_image(&f).mul(&truncated_image(&g));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn cube_of_augmentation_ideal_is_killed(f in small_poly(), g in small_poly(), h in small_poly()) {
            let x = &(&aug_ideal(f) * &aug_ideal(g)) * &aug_ideal(h);
            let t = c2(&x);
            prop_assert!(t.deg2.iter().flatten().all(|v| v.is_zero()));
        }

        #[test]
        fn c2_scales_by_augmentation(h in small_poly(), a in 0i64..3, b in 0i64..3) {
            let m = LatticeModel::compile(&GroupSpec::simply_connected(vec![SimpleFactor::a(3)])).unwrap();
            let g = m.orbit_poly(&[a, b, 1], true);
            let lhs = c2(&(&h * &g));
            let rhs = c2(&g).scale(&h.augmentation());
            prop_assert_eq!(lhs.deg2, rhs.deg2);
        }

        #[test]
        fn quotient_reduction_is_a_ring_map(f in small_poly(), g in small_poly(), m in 2u64..9) {
            let sub = vec![vec![2, 1, 0], vec![0, 3, 0], vec![1, 0, 4]];
            let lhs = quotient_reduction(&(&f * &g), &sub, m).unwrap();
            let rhs = quotient_reduction(&f, &sub, m).unwrap().mul(&quotient_reduction(&g, &sub, m).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
