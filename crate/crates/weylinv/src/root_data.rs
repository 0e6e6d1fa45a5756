//! Root data of split semisimple groups in fundamental-weight coordinates.
//!
//! Every weight is stored by its coordinates `a_i` against the fundamental
//! weights of each simple factor, concatenated over factors. A simple
//! reflection acts by `s_j(λ) = λ - a_j α_j`, where `α_j` is column `j` of
//! the Cartan matrix `C[i][j] = <α_i^∨, α_j>`. Nodes are numbered as in
//! Bourbaki.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::ops::Range;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::laurent::{CoefficientRing, Grading, LaurentPoly};
use crate::lattice::{hnf, left_kernel, snf, to_big_matrix, IntMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DynkinType {
    A,
    B,
    C,
    D,
    E6,
    E7,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SimpleFactor {
    pub ty: DynkinType,
    pub rank: usize,
}

impl fmt::Display for SimpleFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.ty {
            DynkinType::E6 => write!(f, "E6"),
            DynkinType::E7 => write!(f, "E7"),
            t => write!(f, "{:?}{}", t, self.rank),
        }
    }
}

fn factorial(n: u128) -> u128 {
    (1..=n).product()
}

impl SimpleFactor {
    /// `C` is accepted from rank 1 (then `Sp(2) = SL(2)`).
    pub fn new(ty: DynkinType, rank: usize) -> Result<Self> {
        let ok = match ty {
            DynkinType::A => rank >= 1,
            DynkinType::B => rank >= 2,
            DynkinType::C => rank >= 1,
            DynkinType::D => rank >= 4,
            DynkinType::E6 => rank == 6,
            DynkinType::E7 => rank == 7,
        };
        if !ok {
            return Err(Error::InvalidSpec(format!("rank {rank} not allowed for type {ty:?}")));
        }
        Ok(SimpleFactor { ty, rank })
    }

    pub fn a(n: usize) -> Self {
        Self::new(DynkinType::A, n).expect("valid rank")
    }
    pub fn b(n: usize) -> Self {
        Self::new(DynkinType::B, n).expect("valid rank")
    }
    pub fn c(n: usize) -> Self {
        Self::new(DynkinType::C, n).expect("valid rank")
    }
    pub fn d(n: usize) -> Self {
        Self::new(DynkinType::D, n).expect("valid rank")
    }
    pub fn e6() -> Self {
        Self::new(DynkinType::E6, 6).expect("valid rank")
    }
    pub fn e7() -> Self {
        Self::new(DynkinType::E7, 7).expect("valid rank")
    }

    /// Name of the simply connected group, as accepted by the spec grammar.
    pub fn group_name(&self) -> String {
        let n = self.rank;
        match self.ty {
            DynkinType::A => format!("SL({})", n + 1),
            DynkinType::B => format!("Spin({})", 2 * n + 1),
            DynkinType::C => format!("Sp({})", 2 * n),
            DynkinType::D => format!("Spin({})", 2 * n),
            DynkinType::E6 => "E6".into(),
            DynkinType::E7 => "E7".into(),
        }
    }

    /// Edges of the Dynkin diagram, 0-based.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.rank;
        match self.ty {
            DynkinType::A | DynkinType::B | DynkinType::C => (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect(),
            DynkinType::D => {
                let mut e: Vec<_> = (0..n - 2).map(|i| (i, i + 1)).collect();
                e.push((n - 3, n - 1));
                e
            }
            DynkinType::E6 | DynkinType::E7 => {
                let mut e = vec![(0, 2), (2, 3), (3, 4), (4, 5), (1, 3)];
                if self.ty == DynkinType::E7 {
                    e.push((5, 6));
                }
                e
            }
        }
    }

    pub fn cartan(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut c = vec![vec![0i64; n]; n];
        for (i, row) in c.iter_mut().enumerate() {
            row[i] = 2;
        }
        for (i, j) in self.edges() {
            c[i][j] = -1;
            c[j][i] = -1;
        }
        if n >= 2 {
            match self.ty {
                DynkinType::B => c[n - 1][n - 2] = -2,
                DynkinType::C => c[n - 2][n - 1] = -2,
                _ => {}
            }
        }
        c
    }

    /// Simple root `α_j` in fundamental-weight coordinates.
    pub fn simple_root(&self, j: usize) -> Vec<i64> {
        self.cartan().iter().map(|r| r[j]).collect()
    }

    /// Moduli of the character group of the center (`Λ / root lattice`).
    pub fn center_moduli(&self) -> Vec<i64> {
        let n = self.rank as i64;
        match self.ty {
            DynkinType::A => vec![n + 1],
            DynkinType::B | DynkinType::C | DynkinType::E7 => vec![2],
            DynkinType::D if n % 2 == 1 => vec![4],
            DynkinType::D => vec![2, 2],
            DynkinType::E6 => vec![3],
        }
    }

    /// Linear forms (one per center component) computing the class of a
    /// weight in `Λ / root lattice`.
    pub fn class_forms(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let odd_upto = |last: usize, w: i64| -> Vec<i64> {
            (0..n).map(|i| if i < last && i % 2 == 0 { w } else { 0 }).collect()
        };
        match self.ty {
            DynkinType::A => vec![(1..=n as i64).collect()],
            DynkinType::B => {
                let mut v = vec![0; n];
                v[n - 1] = 1;
                vec![v]
            }
            DynkinType::C => vec![odd_upto(n, 1)],
            DynkinType::D if n % 2 == 1 => {
                let mut v = odd_upto(n - 2, 2);
                v[n - 2] = 1;
                v[n - 1] = 3;
                vec![v]
            }
            DynkinType::D => {
                let mut v1 = vec![0; n];
                v1[n - 2] = 1;
                v1[n - 1] = 1;
                let mut v2 = odd_upto(n - 2, 1);
                v2[n - 1] = 1;
                vec![v1, v2]
            }
            DynkinType::E6 => vec![vec![1, 0, 2, 0, 1, 2]],
            DynkinType::E7 => vec![vec![0, 1, 0, 0, 1, 0, 1]],
        }
    }

    pub fn center_class(&self, a: &[i64]) -> Vec<i64> {
        self.class_forms()
            .iter()
            .zip(self.center_moduli())
            .map(|(f, m)| f.iter().zip(a).map(|(x, y)| x * y).sum::<i64>().rem_euclid(m))
            .collect()
    }

    /// Normalised Killing form as (square coefficients, cross terms `(i, j, c)`
    /// meaning `c ω_i ω_j`).
    pub fn killing_terms(&self) -> (Vec<i64>, Vec<(usize, usize, i64)>) {
        let n = self.rank;
        let edges = self.edges();
        match self.ty {
            DynkinType::B => {
                let mut sq = vec![1; n];
                sq[n - 1] = 2;
                let cross = edges.iter().map(|&(i, j)| (i, j, if j == n - 1 { -2 } else { -1 })).collect();
                (sq, cross)
            }
            DynkinType::C => {
                let mut sq = vec![2; n];
                sq[n - 1] = 1;
                (sq, edges.iter().map(|&(i, j)| (i, j, -2)).collect())
            }
            _ => (vec![1; n], edges.iter().map(|&(i, j)| (i, j, -1)).collect()),
        }
    }

    /// Twice the Gram matrix of the Killing form (integral and symmetric).
    pub fn killing_matrix2(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let (sq, cross) = self.killing_terms();
        let mut m = vec![vec![0; n]; n];
        for i in 0..n {
            m[i][i] = 2 * sq[i];
        }
        for (i, j, c) in cross {
            m[i][j] = c;
            m[j][i] = c;
        }
        m
    }

    pub fn reflect(&self, lambda: &mut [i64], j: usize, cartan: &[Vec<i64>]) {
        let aj = lambda[j];
        if aj == 0 {
            return;
        }
        for (i, row) in cartan.iter().enumerate() {
            lambda[i] -= aj * row[j];
        }
    }

    /// The dominant weight in the orbit of `lambda`.
    pub fn dominant(&self, lambda: &[i64]) -> Vec<i64> {
        let cartan = self.cartan();
        let mut l = lambda.to_vec();
        while let Some(j) = l.iter().position(|&v| v < 0) {
            self.reflect(&mut l, j, &cartan);
        }
        l
    }

    /// Orbit under the Weyl group, by breadth-first closure, sorted.
    pub fn orbit(&self, lambda: &[i64]) -> Vec<Vec<i64>> {
        let cartan = self.cartan();
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(lambda.to_vec());
        queue.push_back(lambda.to_vec());
        while let Some(l) = queue.pop_front() {
            for j in 0..self.rank {
                if l[j] == 0 {
                    continue;
                }
                let mut m = l.clone();
                self.reflect(&mut m, j, &cartan);
                if seen.insert(m.clone()) {
                    queue.push_back(m);
                }
            }
        }
        let mut v: Vec<_> = seen.into_iter().collect();
        v.sort();
        v
    }

    pub fn weyl_order(&self) -> u128 {
        self.parabolic_order((1u64 << self.rank) - 1)
    }

    /// Order of the parabolic subgroup generated by the reflections in `mask`.
    pub fn parabolic_order(&self, mask: u64) -> u128 {
        let nodes: Vec<usize> = (0..self.rank).filter(|&i| mask >> i & 1 == 1).collect();
        let edges: Vec<(usize, usize)> = self
            .edges()
            .into_iter()
            .filter(|&(i, j)| mask >> i & 1 == 1 && mask >> j & 1 == 1)
            .collect();
        let mut seen = HashSet::new();
        let mut order = 1u128;
        for &start in &nodes {
            if !seen.insert(start) {
                continue;
            }
            let mut comp = vec![start];
            let mut k = 0;
            while k < comp.len() {
                let v = comp[k];
                for &(i, j) in &edges {
                    let w = if i == v { j } else if j == v { i } else { continue };
                    if seen.insert(w) {
                        comp.push(w);
                    }
                }
                k += 1;
            }
            order *= self.component_order(&comp, &edges);
        }
        order
    }

    fn component_order(&self, comp: &[usize], edges: &[(usize, usize)]) -> u128 {
        let k = comp.len() as u128;
        let n = self.rank;
        let double = matches!(self.ty, DynkinType::B | DynkinType::C)
            && n >= 2
            && comp.contains(&(n - 2))
            && comp.contains(&(n - 1));
        if double {
            return (1u128 << k) * factorial(k);
        }
        let deg = |v: usize| edges.iter().filter(|&&(i, j)| i == v || j == v).count();
        let Some(&branch) = comp.iter().find(|&&v| deg(v) == 3) else {
            return factorial(k + 1);
        };
        let mut arms: Vec<usize> = edges
            .iter()
            .filter_map(|&(i, j)| if i == branch { Some(j) } else if j == branch { Some(i) } else { None })
            .map(|first| {
                let (mut prev, mut cur, mut len) = (branch, first, 1);
                loop {
                    let next = edges.iter().find_map(|&(i, j)| {
                        if i == cur && j != prev {
                            Some(j)
                        } else if j == cur && i != prev {
                            Some(i)
                        } else {
                            None
                        }
                    });
                    match next {
                        Some(nx) => {
                            prev = cur;
                            cur = nx;
                            len += 1;
                        }
                        None => break len,
                    }
                }
            })
            .collect();
        arms.sort();
        match arms.as_slice() {
            [1, 1, _] => (1u128 << (k - 1)) * factorial(k),
            [1, 2, 2] => 51840,
            [1, 2, 3] => 2903040,
            _ => unreachable!("unexpected branched subdiagram {arms:?}"),
        }
    }

    /// `|W(λ)|` from the stabiliser of the dominant representative.
    pub fn orbit_size(&self, lambda: &[i64]) -> u128 {
        let dom = self.dominant(lambda);
        let mask = dom.iter().enumerate().filter(|(_, &v)| v == 0).fold(0u64, |m, (i, _)| m | 1 << i);
        self.weyl_order() / self.parabolic_order(mask)
    }
}

/// A product of simply connected factors modulo a central subgroup.
///
/// Each kernel generator assigns to every factor an element of its center,
/// written against [`SimpleFactor::center_moduli`]; the pairing with a weight
/// class `c` is `Σ_k c_k z_k / m_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    pub factors: Vec<SimpleFactor>,
    pub kernel: Vec<Vec<Vec<i64>>>,
}

impl GroupSpec {
    pub fn new(factors: Vec<SimpleFactor>, kernel: Vec<Vec<Vec<i64>>>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidSpec("no factors".into()));
        }
        let mut norm = Vec::with_capacity(kernel.len());
        for gen in kernel {
            if gen.len() != factors.len() {
                return Err(Error::InvalidSpec(format!(
                    "kernel tuple has {} entries for {} factors",
                    gen.len(),
                    factors.len()
                )));
            }
            let mut g = Vec::with_capacity(gen.len());
            for (z, f) in gen.iter().zip(&factors) {
                let moduli = f.center_moduli();
                if z.len() != moduli.len() {
                    return Err(Error::InvalidSpec(format!("center element {z:?} invalid for {f}")));
                }
                g.push(z.iter().zip(&moduli).map(|(v, m)| v.rem_euclid(*m)).collect::<Vec<_>>());
            }
            norm.push(g);
        }
        Ok(GroupSpec { factors, kernel: norm })
    }

    pub fn simply_connected(factors: Vec<SimpleFactor>) -> Self {
        GroupSpec { factors, kernel: vec![] }
    }

    /// Order of a kernel generator.
    pub fn generator_order(&self, gen: &[Vec<i64>]) -> i64 {
        gen.iter().zip(&self.factors).fold(1, |acc, (z, f)| {
            z.iter().zip(f.center_moduli()).fold(acc, |acc, (&v, m)| acc.lcm(&(m / v.gcd(&m))))
        })
    }

    pub fn total_rank(&self) -> usize {
        self.factors.iter().map(|f| f.rank).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Congruence {
    pub coeffs: Vec<i64>,
    pub modulus: i64,
}

impl Congruence {
    pub fn holds(&self, lambda: &[i64]) -> bool {
        self.coeffs.iter().zip(lambda).map(|(a, b)| a * b).sum::<i64>().rem_euclid(self.modulus) == 0
    }
}

/// A compiled [`GroupSpec`]: the character lattice `T*` inside the weight
/// lattice `Λ`, and the grading `Λ → Λ/T*`.
#[derive(Clone, Debug)]
pub struct LatticeModel {
    pub spec: GroupSpec,
    pub offsets: Vec<usize>,
    pub total_rank: usize,
    pub congruences: Vec<Congruence>,
    /// Hermite basis of `T*` as rows.
    pub tstar_basis: Vec<Vec<i64>>,
    pub grading: Grading,
}

impl LatticeModel {
    pub fn compile(spec: &GroupSpec) -> Result<Self> {
        let spec = GroupSpec::new(spec.factors.clone(), spec.kernel.clone())?;
        let mut offsets = Vec::new();
        let mut n = 0;
        for f in &spec.factors {
            offsets.push(n);
            n += f.rank;
        }
        let mut congruences = Vec::new();
        for gen in &spec.kernel {
            let big_n = spec
                .factors
                .iter()
                .flat_map(|f| f.center_moduli())
                .fold(1i64, |acc, m| acc.lcm(&m));
            let mut coeffs = vec![0i64; n];
            for ((z, f), &off) in gen.iter().zip(&spec.factors).zip(&offsets) {
                for ((zk, mk), form) in z.iter().zip(f.center_moduli()).zip(f.class_forms()) {
                    for (i, c) in form.iter().enumerate() {
                        coeffs[off + i] += (big_n / mk) * zk * c;
                    }
                }
            }
            for c in coeffs.iter_mut() {
                *c = c.rem_euclid(big_n);
            }
            if coeffs.iter().any(|&c| c != 0) {
                congruences.push(Congruence { coeffs, modulus: big_n });
            }
        }
        let tstar = tstar_basis(n, &congruences);
        let grading = grading_from_basis(&tstar, n);
        let tstar_basis = tstar
            .iter()
            .map(|r| r.iter().map(|v| i64::try_from(v).expect("basis entry fits")).collect())
            .collect();
        Ok(LatticeModel { spec, offsets, total_rank: n, congruences, tstar_basis, grading })
    }

    pub fn factors(&self) -> &[SimpleFactor] {
        &self.spec.factors
    }

    pub fn factor_range(&self, f: usize) -> Range<usize> {
        self.offsets[f]..self.offsets[f] + self.spec.factors[f].rank
    }

    /// Factor index and local index of global coordinate `i`.
    pub fn locate(&self, i: usize) -> (usize, usize) {
        let f = self.offsets.iter().rposition(|&o| o <= i).expect("index in range");
        (f, i - self.offsets[f])
    }

    pub fn fundamental_weight(&self, i: usize) -> Vec<i64> {
        let mut v = vec![0; self.total_rank];
        v[i] = 1;
        v
    }

    pub fn in_tstar(&self, lambda: &[i64]) -> bool {
        self.congruences.iter().all(|c| c.holds(lambda))
    }

    pub fn class_of(&self, lambda: &[i64]) -> Vec<i64> {
        self.grading.class_of(lambda)
    }

    /// Exponent of `Λ/T*`.
    pub fn exponent(&self) -> i64 {
        self.grading.moduli.iter().fold(1, |a, m| a.lcm(m))
    }

    pub fn split<'a>(&self, lambda: &'a [i64]) -> Vec<&'a [i64]> {
        (0..self.spec.factors.len()).map(|f| &lambda[self.factor_range(f)]).collect()
    }

    /// Applies the simple reflection at global node `j`.
    pub fn reflect(&self, lambda: &[i64], j: usize) -> Vec<i64> {
        let (f, local) = self.locate(j);
        let r = self.factor_range(f);
        let mut out = lambda.to_vec();
        let fac = self.spec.factors[f];
        fac.reflect(&mut out[r], local, &fac.cartan());
        out
    }

    /// Full Weyl orbit of `lambda` (product of factor orbits), sorted.
    pub fn weyl_orbit(&self, lambda: &[i64]) -> Vec<Vec<i64>> {
        let mut out: Vec<Vec<i64>> = vec![vec![]];
        for (f, part) in self.split(lambda).into_iter().enumerate() {
            let orb = self.spec.factors[f].orbit(part);
            out = out
                .into_iter()
                .flat_map(|pre| {
                    orb.iter().map(move |o| {
                        let mut v = pre.clone();
                        v.extend_from_slice(o);
                        v
                    })
                })
                .collect();
        }
        out.sort();
        out
    }

    pub fn orbit_size(&self, lambda: &[i64]) -> u128 {
        self.split(lambda).iter().zip(&self.spec.factors).map(|(p, f)| f.orbit_size(p)).product()
    }

    /// `ρ(λ)`, minus `|W(λ)|` when `augmented`.
    pub fn orbit_poly(&self, lambda: &[i64], augmented: bool) -> LaurentPoly {
        let n = self.total_rank;
        let orbit = self.weyl_orbit(lambda);
        let size = orbit.len();
        let mut p = LaurentPoly::from_terms(
            n,
            CoefficientRing::INTEGERS,
            orbit.into_iter().map(|v| (v.into_iter().map(|x| x as i32).collect(), BigInt::one())),
        );
        if augmented {
            p.add_term(vec![0; n], -BigInt::from(size));
        }
        p
    }

    /// `ρ_i = ρ(ω_i) - |W(ω_i)|`.
    pub fn rho(&self, i: usize) -> LaurentPoly {
        self.orbit_poly(&self.fundamental_weight(i), true)
    }

    pub fn monomial(&self, lambda: &[i64]) -> LaurentPoly {
        LaurentPoly::monomial(
            CoefficientRing::INTEGERS,
            lambda.iter().map(|&x| x as i32).collect(),
            BigInt::one(),
        )
    }
}

fn tstar_basis(n: usize, congruences: &[Congruence]) -> IntMatrix {
    if congruences.is_empty() {
        return crate::lattice::identity(n);
    }
    let c = congruences.len();
    let mut rows: Vec<Vec<i64>> = Vec::with_capacity(n + c);
    for i in 0..n {
        rows.push(congruences.iter().map(|k| k.coeffs[i]).collect());
    }
    for (k, cg) in congruences.iter().enumerate() {
        rows.push((0..c).map(|j| if j == k { -cg.modulus } else { 0 }).collect());
    }
    let ker = left_kernel(&to_big_matrix(&rows), c);
    let proj: IntMatrix = ker.into_iter().map(|r| r[..n].to_vec()).collect();
    hnf(&proj, n)
}

pub fn grading_from_basis(basis: &IntMatrix, n: usize) -> Grading {
    let (_, d, v) = snf(basis, n);
    let mut moduli = Vec::new();
    let mut cols = Vec::new();
    for k in 0..n {
        let dk = &d[k][k];
        if dk > &BigInt::one() {
            moduli.push(i64::try_from(dk).expect("grading modulus fits"));
            cols.push(k);
        }
    }
    let images = (0..n)
        .map(|i| {
            cols.iter()
                .zip(&moduli)
                .map(|(&k, m)| i64::try_from(v[i][k].mod_floor(&BigInt::from(*m))).expect("fits"))
                .collect()
        })
        .collect();
    debug_assert!(d.iter().enumerate().all(|(k, r)| !r[k].is_zero()));
    Grading::new(moduli, images)
}
