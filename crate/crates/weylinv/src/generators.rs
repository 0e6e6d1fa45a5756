//! Generators of `I^W ∩ R[T*]` for index-2 quotients and the reduction of an
//! arbitrary element (given against the `ρ_i`) to those generators.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::laurent::{CoefficientRing, LaurentPoly};
use crate::root_data::LatticeModel;
use crate::syzygy::{degree_one_gcd, normalize_coefficients};

/// Orbit sizes of the fundamental weights, reindexed so that the degree-1
/// weights come first, with the gcd chain `d_1 | d_2 | ... | d_{n'} = s_{n'}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GcdChain {
    pub nprime: usize,
    /// `order[k]` is the global index of the k-th reindexed weight.
    pub order: Vec<usize>,
    pub s: Vec<i64>,
    pub d_chain: Vec<i64>,
    /// Upper triangular `n' x n'`; `d_i = Σ_j a[i][j] s_j`.
    pub a: Vec<Vec<i64>>,
    /// `ρ̃_i = Σ_j a[i][j] ρ_j`, augmented.
    pub rho_tilde: Vec<LaurentPoly>,
}

impl GcdChain {
    pub fn d(&self) -> i64 {
        self.d_chain[0]
    }

    /// `ρ̃(ω_i) = ρ̃_i + d_i`.
    pub fn rho_tilde_weight(&self, i: usize) -> LaurentPoly {
        let p = &self.rho_tilde[i];
        p + &LaurentPoly::constant(p.nvars(), CoefficientRing::INTEGERS, BigInt::from(self.d_chain[i]))
    }
}

fn symmetric_rem(a: i64, m: i64) -> (i64, i64) {
    let (mut q, mut r) = a.div_mod_floor(&m);
    if 2 * r > m {
        r -= m;
        q += 1;
    }
    (q, r)
}

pub fn gcd_chain(model: &LatticeModel) -> Result<GcdChain> {
    let (deg1, _) = degree_one_gcd(model)?;
    let n = model.total_rank;
    let order: Vec<usize> = (0..n).filter(|&i| deg1[i]).chain((0..n).filter(|&i| !deg1[i])).collect();
    let nprime = deg1.iter().filter(|&&b| b).count();
    let s: Vec<i64> = order.iter().map(|&i| model.orbit_size(&model.fundamental_weight(i)) as i64).collect();
    let last = nprime - 1;
    let mut d_chain = vec![0i64; nprime];
    let mut a = vec![vec![0i64; nprime]; nprime];
    d_chain[last] = s[last];
    a[last][last] = 1;
    for i in (0..last).rev() {
        let e = s[i].extended_gcd(&d_chain[i + 1]);
        d_chain[i] = e.gcd;
        a[i][i] = e.x;
        for j in i + 1..nprime {
            a[i][j] = e.y * a[i + 1][j];
        }
        // Shrink a[i][j] (j < n') modulo s_{n'}/gcd(s_j, s_{n'}), compensating on the last slot.
        for j in i..last {
            let g = s[j].gcd(&s[last]);
            let (q, r) = symmetric_rem(a[i][j], s[last] / g);
            a[i][j] = r;
            a[i][last] += q * (s[j] / g);
        }
        debug_assert_eq!((i..nprime).map(|j| a[i][j] * s[j]).sum::<i64>(), d_chain[i]);
    }
    let rho: Vec<LaurentPoly> = order[..nprime].iter().map(|&i| model.rho(i)).collect();
    let z = CoefficientRing::INTEGERS;
    let rho_tilde = (0..nprime)
        .map(|i| {
            (i..nprime).fold(LaurentPoly::zero(n, z), |acc, j| &acc + &rho[j].scale(&BigInt::from(a[i][j])))
        })
        .collect();
    Ok(GcdChain { nprime, order, s, d_chain, a, rho_tilde })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GeneratorKind {
    H1,
    H2,
    H3,
}

/// `kind` and the 0-based position `index` in the reindexed numbering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GeneratorId {
    pub kind: GeneratorKind,
    pub index: usize,
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            GeneratorKind::H1 => 1,
            GeneratorKind::H2 => 2,
            GeneratorKind::H3 => 3,
        };
        write!(f, "h{k},{}", self.index + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub id: GeneratorId,
    /// Coefficients against `ρ_j` in the global numbering: `poly = Σ tuple_j ρ_j`.
    pub tuple: Vec<LaurentPoly>,
    pub poly: LaurentPoly,
}

#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub chain: GcdChain,
    pub lambda0: Vec<i64>,
    pub h1: Vec<Generator>,
    pub h2: Vec<Generator>,
    pub h3: Vec<Generator>,
}

impl GeneratorSet {
    pub fn all(&self) -> impl Iterator<Item = &Generator> {
        self.h1.iter().chain(&self.h2).chain(&self.h3)
    }

    pub fn get(&self, id: GeneratorId) -> Option<&Generator> {
        let list = match id.kind {
            GeneratorKind::H1 => &self.h1,
            GeneratorKind::H2 => &self.h2,
            GeneratorKind::H3 => &self.h3,
        };
        list.iter().find(|g| g.id == id)
    }
}

/// Default `λ_0`: the first degree-1 fundamental weight.
pub fn default_lambda0(model: &LatticeModel, chain: &GcdChain) -> Vec<i64> {
    model.fundamental_weight(chain.order[0])
}

fn weighted_sum(tuple: &[LaurentPoly], rho: &[LaurentPoly]) -> LaurentPoly {
    let n = rho[0].nvars();
    tuple.iter().zip(rho).fold(LaurentPoly::zero(n, CoefficientRing::INTEGERS), |acc, (a, b)| {
        if a.is_zero() {
            acc
        } else {
            &acc + &(a * b)
        }
    })
}

pub fn build_generators(model: &LatticeModel, chain: &GcdChain, lambda0: &[i64]) -> Result<GeneratorSet> {
    let n = model.total_rank;
    let z = CoefficientRing::INTEGERS;
    if lambda0.len() != n {
        return Err(Error::LengthMismatch(n, lambda0.len()));
    }
    if model.class_of(lambda0) != [1] {
        return Err(Error::DegreeCondition(format!("λ0 = {lambda0:?} is not of degree 1")));
    }
    let np = chain.nprime;
    let order = &chain.order;
    let rho: Vec<LaurentPoly> = (0..n).map(|i| model.rho(i)).collect();
    let rho_w: Vec<LaurentPoly> = order.iter().map(|&i| model.orbit_poly(&model.fundamental_weight(i), false)).collect();
    let e0 = model.monomial(lambda0);
    let zero = LaurentPoly::zero(n, z);
    let b = |v: i64| BigInt::from(v);
    let d = chain.d();
    let rt1 = chain.rho_tilde_weight(0);

    let mut h1 = Vec::new();
    for i in 0..np.saturating_sub(1) {
        let r = chain.s[i].lcm(&chain.d_chain[i + 1]);
        let (u, v) = (r / chain.s[i], r / chain.d_chain[i + 1]);
        let mut tuple = vec![zero.clone(); n];
        tuple[order[i]] = e0.scale(&b(u));
        for j in i + 1..np {
            tuple[order[j]] = e0.scale(&b(-v * chain.a[i + 1][j]));
        }
        let poly = &e0 * &(&rho_w[i].scale(&b(u)) - &chain.rho_tilde_weight(i + 1).scale(&b(v)));
        h1.push(Generator { id: GeneratorId { kind: GeneratorKind::H1, index: i }, tuple, poly });
    }
    let mut h2 = Vec::new();
    for i in 0..np {
        let mut tuple = vec![zero.clone(); n];
        for j in 0..np {
            tuple[order[j]] = rho_w[i].scale(&b(chain.a[0][j]));
        }
        tuple[order[i]] = &tuple[order[i]] + &LaurentPoly::constant(n, z, b(d));
        let poly = &(&rho_w[i] * &rt1) - &LaurentPoly::constant(n, z, b(d * chain.s[i]));
        h2.push(Generator { id: GeneratorId { kind: GeneratorKind::H2, index: i }, tuple, poly });
    }
    let mut h3 = Vec::new();
    for i in np..n {
        let mut tuple = vec![zero.clone(); n];
        tuple[order[i]] = LaurentPoly::one(n, z);
        h3.push(Generator { id: GeneratorId { kind: GeneratorKind::H3, index: i }, tuple, poly: rho[order[i]].clone() });
    }
    let set = GeneratorSet { chain: chain.clone(), lambda0: lambda0.to_vec(), h1, h2, h3 };
    for g in set.all() {
        if !g.poly.is_homogeneous(&model.grading, &[0]) {
            return Err(Error::Internal(format!("generator {} is not of degree 0", g.id)));
        }
        if !g.poly.augmentation().is_zero() {
            return Err(Error::Internal(format!("generator {} has nonzero augmentation", g.id)));
        }
        if weighted_sum(&g.tuple, &rho) != g.poly {
            return Err(Error::Internal(format!("generator {} disagrees with its tuple", g.id)));
        }
    }
    Ok(set)
}

/// `Σ c_g g` with coefficients in `R[T*]`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Combination {
    pub terms: BTreeMap<GeneratorId, LaurentPoly>,
}

impl Combination {
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&mut self, id: GeneratorId, c: LaurentPoly) {
        if c.is_zero() {
            return;
        }
        let s = match self.terms.remove(&id) {
            Some(old) => &old + &c,
            None => c,
        };
        if !s.is_zero() {
            self.terms.insert(id, s);
        }
    }

    pub fn expand(&self, gens: &GeneratorSet, nvars: usize) -> LaurentPoly {
        self.terms.iter().fold(LaurentPoly::zero(nvars, CoefficientRing::INTEGERS), |acc, (id, c)| {
            &acc + &(c * &gens.get(*id).expect("generator id belongs to the set").poly)
        })
    }

    /// The tuple `Σ c_g tuple(g)` against the `ρ_j`.
    pub fn expand_tuple(&self, gens: &GeneratorSet, nvars: usize) -> Vec<LaurentPoly> {
        let mut out = vec![LaurentPoly::zero(nvars, CoefficientRing::INTEGERS); nvars];
        for (id, c) in &self.terms {
            let g = gens.get(*id).expect("generator id belongs to the set");
            for (o, t) in out.iter_mut().zip(&g.tuple) {
                if !t.is_zero() {
                    *o = &*o + &(c * t);
                }
            }
        }
        out
    }
}

/// Expresses `Σ f_i ρ_i` through the generators, following the four
/// elimination steps; the running equality is asserted after each step.
pub fn reduce_to_generators(model: &LatticeModel, gens: &GeneratorSet, f: &[LaurentPoly]) -> Result<Combination> {
    let n = model.total_rank;
    let z = CoefficientRing::INTEGERS;
    let chain = &gens.chain;
    let np = chain.nprime;
    let order = &chain.order;
    let rho: Vec<LaurentPoly> = (0..n).map(|i| model.rho(i)).collect();
    if f.len() != n {
        return Err(Error::LengthMismatch(n, f.len()));
    }
    let target = weighted_sum(f, &rho);
    let f = normalize_coefficients(model, f)?;
    let mut ff: Vec<LaurentPoly> = order.iter().map(|&i| f[i].clone()).collect();
    let r: Vec<&LaurentPoly> = order.iter().map(|&i| &rho[i]).collect();
    let rho_w: Vec<LaurentPoly> = order.iter().map(|&i| model.orbit_poly(&model.fundamental_weight(i), false)).collect();
    let d = BigInt::from(chain.d());
    let b = |v: i64| BigInt::from(v);
    let mut comb = Combination::default();
    let id = |kind, index| GeneratorId { kind, index };
    let comp = |p: &LaurentPoly, deg: i64| p.homogeneous_component(&model.grading, &[deg]);

    let check = |ff: &[LaurentPoly], comb: &Combination, step: &str| -> Result<()> {
        let rest = ff.iter().zip(&r).fold(LaurentPoly::zero(n, z), |acc, (a, b)| &acc + &(a * *b));
        if &rest + &comb.expand(gens, n) != target {
            return Err(Error::Internal(format!("running equality broken after {step}")));
        }
        Ok(())
    };

    // Step 1: clear the degree-0 part of f_i for degree-1 weights with h2.
    for i in 0..np {
        let c0 = comp(&ff[i], 0);
        let cf = c0
            .div_exact(&d)
            .ok_or_else(|| Error::Divisibility(format!("d = {d} does not divide f_{}^(0) = {c0}", order[i] + 1)))?;
        if cf.is_zero() {
            continue;
        }
        for j in 0..np {
            if chain.a[0][j] != 0 {
                ff[j] = &ff[j] - &(&cf * &rho_w[i]).scale(&b(chain.a[0][j]));
            }
        }
        ff[i] = &ff[i] - &cf.scale(&d);
        comb.add(id(GeneratorKind::H2, i), cf);
    }
    check(&ff, &comb, "step 1")?;

    // Step 2: clear the degree-1 part of f_i for degree-0 weights with ρ̃(ω_1) h3.
    let rt1 = chain.rho_tilde_weight(0);
    for i in np..n {
        let c1 = comp(&ff[i], 1);
        let cf = c1
            .div_exact(&d)
            .ok_or_else(|| Error::Divisibility(format!("d = {d} does not divide f_{}^(1) = {c1}", order[i] + 1)))?;
        if cf.is_zero() {
            continue;
        }
        for j in 0..np {
            if chain.a[0][j] != 0 {
                ff[j] = &ff[j] - &(&cf * r[i]).scale(&b(chain.a[0][j]));
            }
        }
        ff[i] = &ff[i] - &cf.scale(&d);
        comb.add(id(GeneratorKind::H3, i), &cf * &rt1);
    }
    check(&ff, &comb, "step 2")?;

    // Step 3: the remaining f_i (degree-0 weights) lie in R[T*].
    for i in np..n {
        if !ff[i].is_homogeneous(&model.grading, &[0]) {
            return Err(Error::Internal(format!("f_{} is not of degree 0 after step 2", order[i] + 1)));
        }
        let c = std::mem::replace(&mut ff[i], LaurentPoly::zero(n, z));
        comb.add(id(GeneratorKind::H3, i), c);
    }
    check(&ff, &comb, "step 3")?;

    // Step 4: eliminate f_1, ..., f_{n'-1} with h1; f_{n'} must then vanish.
    let neg0: Vec<i32> = gens.lambda0.iter().map(|&v| -(v as i32)).collect();
    for i in 0..np.saturating_sub(1) {
        if !comp(&ff[i], 0).is_zero() {
            return Err(Error::Internal(format!("f_{} has a degree-0 part in step 4", order[i] + 1)));
        }
        let rr = chain.s[i].lcm(&chain.d_chain[i + 1]);
        let ratio = b(rr / chain.s[i]);
        let q = ff[i].div_exact(&ratio).ok_or_else(|| {
            Error::Divisibility(format!("r/s = {ratio} does not divide f_{} = {}", order[i] + 1, ff[i]))
        })?;
        if q.is_zero() {
            continue;
        }
        let v = rr / chain.d_chain[i + 1];
        for j in i + 1..np {
            if chain.a[i + 1][j] != 0 {
                ff[j] = &ff[j] + &q.scale(&b(v * chain.a[i + 1][j]));
            }
        }
        ff[i] = LaurentPoly::zero(n, z);
        comb.add(id(GeneratorKind::H1, i), q.mul_monomial(&neg0));
    }
    if !ff[np - 1].is_zero() {
        return Err(Error::Divisibility(format!("f_{} does not vanish at the end of step 4", order[np - 1] + 1)));
    }
    check(&ff, &comb, "step 4")?;
    debug_assert!(ff.iter().all(|p| p.is_zero()));
    Ok(comb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_data::{GroupSpec, SimpleFactor};
    use crate::syzygy::tests::{random_poly, random_trivial};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pgsp4() -> LatticeModel {
        LatticeModel::compile(&GroupSpec::new(vec![SimpleFactor::c(2)], vec![vec![vec![1]]]).unwrap()).unwrap()
    }

    fn sp_sp(m: usize, n: usize) -> LatticeModel {
        LatticeModel::compile(
            &GroupSpec::new(vec![SimpleFactor::c(m), SimpleFactor::c(n)], vec![vec![vec![1], vec![1]]]).unwrap(),
        )
        .unwrap()
    }

    fn parse(s: &str, n: usize) -> LaurentPoly {
        LaurentPoly::parse(s, n, CoefficientRing::INTEGERS).unwrap()
    }

    #[test]
    fn pgsp4_chain_and_generators() {
        let model = pgsp4();
        let chain = gcd_chain(&model).unwrap();
        assert_eq!((chain.nprime, chain.s[0], chain.d()), (1, 4, 4));
        assert_eq!(chain.a, vec![vec![1]]);
        assert_eq!(chain.rho_tilde[0], model.rho(0));
        let gens = build_generators(&model, &chain, &default_lambda0(&model, &chain)).unwrap();
        assert!(gens.h1.is_empty());
        let rw1 = model.orbit_poly(&[1, 0], false);
        assert_eq!(gens.h2[0].poly, &(&rw1 * &rw1) - &parse("16", 2));
        assert_eq!(gens.h3[0].poly, &model.orbit_poly(&[0, 1], false) - &parse("4", 2));
    }

    #[test]
    fn sp_products_chain() {
        for (m, n) in [(1, 1), (2, 3), (2, 2), (3, 2)] {
            let model = sp_sp(m, n);
            let chain = gcd_chain(&model).unwrap();
            // Degree-1 weights are the odd ω_i of both factors.
            assert_eq!(chain.nprime, m.div_ceil(2) + n.div_ceil(2));
            assert_eq!(chain.s[0], 2 * m as i64);
            assert_eq!(chain.s[m.div_ceil(2)], 2 * n as i64);
            let d = chain.s[..chain.nprime].iter().fold(0i64, |g, s| g.gcd(s));
            assert_eq!(chain.d(), d);
            if m <= 2 && n <= 2 {
                assert_eq!(d, (2 * m as i64).gcd(&(2 * n as i64)));
            }
            for i in 1..chain.nprime {
                assert_eq!(chain.d_chain[i] % chain.d_chain[i - 1], 0);
            }
            assert_eq!(chain.d_chain[chain.nprime - 1], chain.s[chain.nprime - 1]);
            for (i, t) in chain.rho_tilde.iter().enumerate() {
                assert_eq!(t.constant_term(), BigInt::from(-chain.d_chain[i]));
            }
            build_generators(&model, &chain, &default_lambda0(&model, &chain)).unwrap();
        }
    }

    #[test]
    fn h1_matches_type_c_element() {
        // (Sp4 x Sp4)/μ2: h1 = e^{λ0}(ρ(ω1) - ρ(ω1')).
        let model = sp_sp(2, 2);
        let chain = gcd_chain(&model).unwrap();
        let l0 = default_lambda0(&model, &chain);
        let gens = build_generators(&model, &chain, &l0).unwrap();
        let z = &model.orbit_poly(&[1, 0, 0, 0], false) - &model.orbit_poly(&[0, 0, 1, 0], false);
        assert_eq!(gens.h1[0].poly, &model.monomial(&l0) * &z);
    }

    #[test]
    fn generators_are_weyl_invariant_up_to_the_shift() {
        let model = sp_sp(2, 1);
        let chain = gcd_chain(&model).unwrap();
        let gens = build_generators(&model, &chain, &default_lambda0(&model, &chain)).unwrap();
        for g in gens.h2.iter().chain(&gens.h3) {
            for j in 0..model.total_rank {
                let moved = g.poly.map_exponents(model.total_rank, |e| {
                    let v: Vec<i64> = e.iter().map(|&x| x as i64).collect();
                    model.reflect(&v, j).into_iter().map(|x| x as i32).collect()
                });
                assert_eq!(moved, g.poly, "{} under s_{j}", g.id);
            }
        }
    }

    #[test]
    fn zero_and_single_generator() {
        let model = pgsp4();
        let chain = gcd_chain(&model).unwrap();
        let gens = build_generators(&model, &chain, &default_lambda0(&model, &chain)).unwrap();
        let zero = vec![LaurentPoly::zero(2, CoefficientRing::INTEGERS); 2];
        assert!(reduce_to_generators(&model, &gens, &zero).unwrap().is_empty());
        let comb = reduce_to_generators(&model, &gens, &gens.h2[0].tuple).unwrap();
        assert_eq!(comb.terms.len(), 1);
        assert_eq!(comb.terms[&gens.h2[0].id], LaurentPoly::one(2, CoefficientRing::INTEGERS));
    }

    pub(crate) fn random_combination(rng: &mut ChaCha8Rng, model: &LatticeModel, gens: &GeneratorSet) -> Combination {
        let n = model.total_rank;
        let mut c = Combination::default();
        for g in gens.all() {
            let p = random_poly(rng, n, n, CoefficientRing::INTEGERS, 3).homogeneous_component(&model.grading, &[0]);
            c.add(g.id, p);
        }
        c
    }

    fn round_trip(model: &LatticeModel, seed: u64, cases: usize) {
        let chain = gcd_chain(model).unwrap();
        let gens = build_generators(model, &chain, &default_lambda0(model, &chain)).unwrap();
        let rho: Vec<LaurentPoly> = (0..model.total_rank).map(|i| model.rho(i)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..cases {
            let c = random_combination(&mut rng, model, &gens);
            let mut f = c.expand_tuple(&gens, model.total_rank);
            for (a, t) in f.iter_mut().zip(random_trivial(&mut rng, &rho)) {
                *a = &*a + &t;
            }
            let out = reduce_to_generators(model, &gens, &f).unwrap();
            assert_eq!(out.expand(&gens, model.total_rank), c.expand(&gens, model.total_rank));
        }
    }

    #[test]
    fn random_combinations_round_trip() {
        round_trip(&pgsp4(), 11, 10);
        round_trip(&sp_sp(2, 2), 12, 5);
        round_trip(&sp_sp(2, 3), 13, 3);
    }

    #[test]
    fn type_a_index_two() {
        let model =
            LatticeModel::compile(&GroupSpec::new(vec![SimpleFactor::a(3)], vec![vec![vec![2]]]).unwrap()).unwrap();
        round_trip(&model, 14, 3);
    }

    #[test]
    fn lambda0_choices_generate_the_same_ideal() {
        let model = pgsp4();
        let chain = gcd_chain(&model).unwrap();
        let a = build_generators(&model, &chain, &[1, 0]).unwrap();
        let b = build_generators(&model, &chain, &[-1, 1]).unwrap();
        for (x, y) in [(&a, &b), (&b, &a)] {
            for g in y.all() {
                let comb = reduce_to_generators(&model, x, &g.tuple).unwrap();
                assert_eq!(comb.expand(x, 2), g.poly);
            }
        }
        assert!(build_generators(&model, &chain, &[0, 1]).is_err());
    }
}
