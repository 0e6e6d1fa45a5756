//! Flatness, trivialisation of syzygies of flat tuples, and lifting of
//! trivial syzygies through coefficient reduction.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::laurent::{smallest_prime_factor, CoefficientRing, Exponent, LaurentPoly};
use crate::newton::{from_flat, laurent_det, newton_transform, to_flat, unit_monomial};
use crate::root_data::{DynkinType, LatticeModel};

/// `Σ g_ij S_ij` over pairs `i < j`, where `S_ij` has `t_j` in slot `i` and
/// `-t_i` in slot `j`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SyzygyCertificate {
    pub coefficients: BTreeMap<(usize, usize), LaurentPoly>,
}

impl SyzygyCertificate {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Adds `g S_ij`, normalising `i > j` to `-g S_ji`.
    pub fn add(&mut self, i: usize, j: usize, g: LaurentPoly) {
        assert_ne!(i, j, "S_ii is not defined");
        let (key, g) = if i < j { ((i, j), g) } else { ((j, i), -g) };
        if g.is_zero() {
            return;
        }
        match self.coefficients.remove(&key) {
            Some(old) => {
                let s = &old + &g;
                if !s.is_zero() {
                    self.coefficients.insert(key, s);
                }
            }
            None => {
                self.coefficients.insert(key, g);
            }
        }
    }

    pub fn merge(&mut self, other: SyzygyCertificate) {
        for ((i, j), g) in other.coefficients {
            self.add(i, j, g);
        }
    }

    pub fn map<F: Fn(&LaurentPoly) -> LaurentPoly>(&self, f: F) -> Self {
        let mut out = Self::new();
        for (&(i, j), g) in &self.coefficients {
            out.add(i, j, f(g));
        }
        out
    }

    pub fn expand(&self, t: &[LaurentPoly]) -> Vec<LaurentPoly> {
        let nvars = t[0].nvars();
        let ring = t[0].ring();
        let mut out = vec![LaurentPoly::zero(nvars, ring); t.len()];
        for (&(i, j), g) in &self.coefficients {
            out[i] = &out[i] + &(g * &t[j]);
            out[j] = &out[j] - &(g * &t[i]);
        }
        out
    }

    pub fn reduce(&self, m: u64) -> Result<Self> {
        let mut out = Self::new();
        for (&(i, j), g) in &self.coefficients {
            out.add(i, j, g.reduce_coefficients(m)?);
        }
        Ok(out)
    }
}

/// Lifts a certificate over Z/d to Z with canonical residues in `[0, d)`.
pub fn lift_syzygy(cert: &SyzygyCertificate) -> SyzygyCertificate {
    cert.map(|g| g.lift_to_integers())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntryDiagnostic {
    /// Entry varies along an axis beyond its own.
    pub uses_later_axis: bool,
    pub is_divisor: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatnessReport {
    pub ok: bool,
    pub entries: Vec<EntryDiagnostic>,
}

/// Entry `i` may only vary along axes `0..=i` (a monomial factor in later
/// axes is a unit and allowed) and must be a divisor along axis `i`.
pub fn check_flatness(t: &[LaurentPoly]) -> FlatnessReport {
    let entries: Vec<EntryDiagnostic> = t
        .iter()
        .enumerate()
        .map(|(i, p)| {
            if p.is_zero() || i >= p.nvars() {
                return EntryDiagnostic { uses_later_axis: true, is_divisor: false };
            }
            let later = (i + 1..p.nvars()).any(|a| p.degrees(a).map_or(true, |d| d.wdeg != 0));
            EntryDiagnostic { uses_later_axis: later, is_divisor: p.is_divisor(i).unwrap_or(false) }
        })
        .collect();
    let ok = entries.iter().all(|e| !e.uses_later_axis && e.is_divisor);
    FlatnessReport { ok, entries }
}

fn check_syzygy(t: &[LaurentPoly], f: &[LaurentPoly]) -> Result<()> {
    if t.len() != f.len() {
        return Err(Error::LengthMismatch(t.len(), f.len()));
    }
    let mut acc = LaurentPoly::zero(t[0].nvars(), t[0].ring());
    for (a, b) in f.iter().zip(t) {
        acc = acc.try_add(&a.try_mul(b)?)?;
    }
    if !acc.is_zero() {
        return Err(Error::NotASyzygy);
    }
    Ok(())
}

/// Writes a syzygy `f` of a flat tuple `t` as `Σ g_ij S_ij`.
pub fn trivialize_syzygy(t: &[LaurentPoly], f: &[LaurentPoly]) -> Result<SyzygyCertificate> {
    if t.is_empty() {
        return if f.is_empty() { Ok(SyzygyCertificate::new()) } else { Err(Error::LengthMismatch(0, f.len())) };
    }
    check_syzygy(t, f)?;
    let report = check_flatness(t);
    if let Some(i) = report.entries.iter().position(|e| e.uses_later_axis || !e.is_divisor) {
        return Err(Error::NotFlat(i));
    }
    // Strip unit monomials in later axes: t_i = u_i t'_i.
    let nvars = t[0].nvars();
    let units: Vec<Exponent> = t
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let mut e = vec![0; nvars];
            for (a, slot) in e.iter_mut().enumerate().skip(i + 1) {
                *slot = p.degrees(a).expect("nonzero entry").hdeg as i32;
            }
            e
        })
        .collect();
    let neg = |e: &Exponent| -> Exponent { e.iter().map(|v| -v).collect() };
    let tn: Vec<LaurentPoly> = t.iter().zip(&units).map(|(p, u)| p.mul_monomial(&neg(u))).collect();
    let fn_: Vec<LaurentPoly> = f.iter().zip(&units).map(|(p, u)| p.mul_monomial(u)).collect();
    let cert = solve(&tn, fn_, t[0].ring().modulus())?;
    let mut out = SyzygyCertificate::new();
    for ((i, j), g) in cert.coefficients {
        let shift: Exponent = units[i].iter().zip(&units[j]).map(|(a, b)| -a - b).collect();
        out.add(i, j, g.mul_monomial(&shift));
    }
    if out.expand(t) != f {
        return Err(Error::Internal("certificate does not re-expand to the syzygy".into()));
    }
    Ok(out)
}

fn solve(t: &[LaurentPoly], f: Vec<LaurentPoly>, modulus: u64) -> Result<SyzygyCertificate> {
    if modulus == 0 || smallest_prime_factor(modulus) == modulus {
        return solve_domain(t, f, t.len());
    }
    let p = smallest_prime_factor(modulus);
    let l = modulus / p;
    let ring = CoefficientRing::modular(modulus)?;
    let t_l: Vec<LaurentPoly> = t.iter().map(|x| x.reduce_coefficients(l)).collect::<Result<_>>()?;
    let f_l: Vec<LaurentPoly> = f.iter().map(|x| x.reduce_coefficients(l)).collect::<Result<_>>()?;
    let cert_l = solve(&t_l, f_l, l)?;
    let lifted = cert_l.map(|g| g.lift_to_integers().with_ring(ring));
    let residual: Vec<LaurentPoly> = f.iter().zip(lifted.expand(t)).map(|(a, b)| a - &b).collect();
    let big_l = BigInt::from(l);
    let mut f2 = Vec::with_capacity(residual.len());
    for r in residual {
        let q = r
            .lift_to_integers()
            .div_exact(&big_l)
            .ok_or_else(|| Error::Internal("residual not divisible by the cofactor".into()))?;
        f2.push(q.reduce_coefficients(p)?);
    }
    let t_p: Vec<LaurentPoly> = t.iter().map(|x| x.reduce_coefficients(p)).collect::<Result<_>>()?;
    let cert_p = solve(&t_p, f2, p)?;
    let mut out = lifted;
    out.merge(cert_p.map(|g| g.lift_to_integers().scale(&big_l).with_ring(ring)));
    Ok(out)
}

/// Domain case, on the prefix `t[..k]`; `f` has length `k`.
fn solve_domain(t: &[LaurentPoly], f: Vec<LaurentPoly>, k: usize) -> Result<SyzygyCertificate> {
    let mut cert = SyzygyCertificate::new();
    if k == 0 || f.iter().all(|p| p.is_zero()) {
        return Ok(cert);
    }
    let last = k - 1;
    if k == 1 {
        return Err(Error::Internal("nonzero syzygy of a single divisor over a domain".into()));
    }
    let tl = &t[last];
    let nonzero: Vec<i64> =
        f[..last].iter().filter(|p| !p.is_zero()).map(|p| p.degrees(last).expect("nonzero").ldeg).collect();
    let Some(&d) = nonzero.iter().min() else {
        // Only f_last is nonzero, impossible in a domain.
        return Err(Error::Internal("last entry of a syzygy is a zero divisor".into()));
    };
    let mut h = Vec::with_capacity(last);
    let mut top = f[last].clone();
    for (i, fi) in f[..last].iter().enumerate() {
        if fi.is_zero() {
            h.push(fi.clone());
            continue;
        }
        let (g, r) = fi.bounded_divide(tl, last, d)?;
        top = &top + &(&g * &t[i]);
        cert.add(i, last, g);
        h.push(r);
    }
    if !top.is_zero() {
        return Err(Error::Internal("degree window argument failed: residual last entry is nonzero".into()));
    }
    let (lo, hi) = h.iter().filter(|p| !p.is_zero()).fold((i64::MAX, i64::MIN), |(lo, hi), p| {
        let dg = p.degrees(last).expect("nonzero");
        (lo.min(dg.ldeg), hi.max(dg.hdeg))
    });
    if lo > hi {
        return Ok(cert);
    }
    for j in lo..=hi {
        let slices: Vec<LaurentPoly> = h.iter().map(|p| p.slice(last, j)).collect();
        if slices.iter().all(|p| p.is_zero()) {
            continue;
        }
        let sub = solve_domain(t, slices, last)?;
        let mut shift = vec![0; t[0].nvars()];
        shift[last] = j as i32;
        for ((a, b), g) in sub.coefficients {
            cert.add(a, b, g.mul_monomial(&shift));
        }
    }
    Ok(cert)
}

/// Degree-1 fundamental weights (by class) and `d = gcd` of their orbit sizes.
pub fn degree_one_gcd(model: &LatticeModel) -> Result<(Vec<bool>, i64)> {
    if model.grading.moduli != [2] {
        return Err(Error::DegreeCondition(format!(
            "weight lattice modulo characters is {:?}, expected Z/2",
            model.grading.moduli
        )));
    }
    let deg1: Vec<bool> =
        (0..model.total_rank).map(|i| model.class_of(&model.fundamental_weight(i))[0] == 1).collect();
    let d = (0..model.total_rank)
        .filter(|&i| deg1[i])
        .map(|i| model.orbit_size(&model.fundamental_weight(i)) as i64)
        .fold(0i64, |g, s| g.gcd(&s));
    Ok((deg1, d))
}

/// Block-diagonal Newton data for a model whose factors are all of type A or C.
pub(crate) struct GlobalTransform {
    pub flat: Vec<LaurentPoly>,
    pub matrix: Vec<Vec<LaurentPoly>>,
    /// Inverse matrix (entries are Laurent polynomials since det is a unit).
    pub inverse: Vec<Vec<LaurentPoly>>,
}

pub(crate) fn global_to_flat(model: &LatticeModel, a: &[i32]) -> Exponent {
    let mut out = Vec::with_capacity(a.len());
    for (f, fac) in model.factors().iter().enumerate() {
        out.extend(to_flat(fac.ty, &a[model.factor_range(f)]));
    }
    out
}

pub(crate) fn global_from_flat(model: &LatticeModel, b: &[i32]) -> Exponent {
    let mut out = Vec::with_capacity(b.len());
    for (f, fac) in model.factors().iter().enumerate() {
        out.extend(from_flat(fac.ty, &b[model.factor_range(f)]));
    }
    out
}

pub(crate) fn global_transform(model: &LatticeModel) -> Result<GlobalTransform> {
    let n = model.total_rank;
    let z = CoefficientRing::INTEGERS;
    let zero = LaurentPoly::zero(n, z);
    let mut flat = vec![zero.clone(); n];
    let mut matrix = vec![vec![zero.clone(); n]; n];
    let mut inverse = vec![vec![zero.clone(); n]; n];
    for (f, fac) in model.factors().iter().enumerate() {
        if !matches!(fac.ty, DynkinType::A | DynkinType::C) {
            return Err(Error::Unsupported(format!(
                "generalized flatness is only available for types A and C, not {fac}"
            )));
        }
        let t = newton_transform(*fac)?;
        let r = model.factor_range(f);
        let off = r.start;
        let embed = |p: &LaurentPoly| {
            p.map_exponents(n, |e| {
                let mut v = vec![0; n];
                v[off..off + e.len()].copy_from_slice(e);
                v
            })
        };
        let det_exp = unit_monomial(&t.det).ok_or_else(|| Error::Internal(format!("det of {fac} is not a unit")))?;
        let det_sign = t.det.terms().next().map(|(_, c)| c.clone()).expect("unit");
        let inv_det = LaurentPoly::monomial(z, det_exp.iter().map(|v| -v).collect(), det_sign);
        let k = fac.rank;
        for i in 0..k {
            flat[off + i] = embed(&t.flat[i]);
            for j in 0..k {
                matrix[off + i][off + j] = embed(&t.matrix[i][j]);
                // inverse[i][j] = (-1)^{i+j} det(minor without row j, col i) / det
                let minor: Vec<Vec<LaurentPoly>> = (0..k)
                    .filter(|&a| a != j)
                    .map(|a| (0..k).filter(|&b| b != i).map(|b| t.matrix[a][b].clone()).collect())
                    .collect();
                let mut c = &laurent_det(&minor) * &inv_det;
                if (i + j) % 2 == 1 {
                    c = -c;
                }
                inverse[off + i][off + j] = embed(&c);
            }
        }
    }
    Ok(GlobalTransform { flat, matrix, inverse })
}

/// Rewrites `f` so that `Σ f_i ρ_i` is unchanged and the component of `f_i`
/// of degree `1 - |i|` vanishes modulo `d`.
pub fn normalize_coefficients(model: &LatticeModel, f: &[LaurentPoly]) -> Result<Vec<LaurentPoly>> {
    let n = model.total_rank;
    if f.len() != n {
        return Err(Error::LengthMismatch(n, f.len()));
    }
    let (deg1, d) = degree_one_gcd(model)?;
    let rho: Vec<LaurentPoly> = (0..n).map(|i| model.rho(i)).collect();
    let total = f.iter().zip(&rho).fold(LaurentPoly::zero(n, CoefficientRing::INTEGERS), |acc, (a, b)| &acc + &(a * b));
    if !total.is_homogeneous(&model.grading, &[0]) {
        return Err(Error::DegreeCondition("Σ f_i ρ_i has a component of degree 1".into()));
    }
    let tr = global_transform(model)?;
    if d == 1 {
        return Ok(f.to_vec());
    }
    let du = d as u64;
    let ring = CoefficientRing::modular(du)?;
    let c: Vec<LaurentPoly> = f
        .iter()
        .enumerate()
        .map(|(i, fi)| fi.homogeneous_component(&model.grading, &[1 - i64::from(deg1[i])]).reduce_coefficients(du))
        .collect::<Result<_>>()?;
    if c.iter().all(|p| p.is_zero()) {
        return Ok(f.to_vec());
    }
    let to_flat = |p: &LaurentPoly| p.map_exponents(n, |e| global_to_flat(model, e));
    let c_flat: Vec<LaurentPoly> = c.iter().map(to_flat).collect();
    let red = |p: &LaurentPoly| p.reduce_coefficients(du);
    // g = A^{-1} c
    let g: Vec<LaurentPoly> = (0..n)
        .map(|i| {
            (0..n).try_fold(LaurentPoly::zero(n, ring), |acc, j| {
                Ok::<_, Error>(&acc + &(&red(&tr.inverse[i][j])? * &c_flat[j]))
            })
        })
        .collect::<Result<_>>()?;
    let flat_bar: Vec<LaurentPoly> = tr.flat.iter().map(red).collect::<Result<_>>()?;
    let cert_flat = trivialize_syzygy(&flat_bar, &g)?;
    // Transport back: G_ab = Σ G'_ij (A_ai A_bj - A_aj A_bi).
    let a_bar: Vec<Vec<LaurentPoly>> =
        tr.matrix.iter().map(|r| r.iter().map(red).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
    let mut cert = SyzygyCertificate::new();
    for (&(i, j), gij) in &cert_flat.coefficients {
        for a in 0..n {
            for b in a + 1..n {
                let m = &(&a_bar[a][i] * &a_bar[b][j]) - &(&a_bar[a][j] * &a_bar[b][i]);
                if !m.is_zero() {
                    cert.add(a, b, gij * &m);
                }
            }
        }
    }
    let cert = cert.map(|p| p.map_exponents(n, |e| global_from_flat(model, e)));
    let rho_bar: Vec<LaurentPoly> = rho.iter().map(red).collect::<Result<_>>()?;
    if cert.expand(&rho_bar) != c {
        return Err(Error::Internal("transported certificate does not reproduce the graded syzygy".into()));
    }
    let h = lift_syzygy(&cert).expand(&rho);
    let out: Vec<LaurentPoly> = f.iter().zip(&h).map(|(a, b)| a - b).collect();
    debug_assert!(out.iter().enumerate().all(|(i, g)| g
        .homogeneous_component(&model.grading, &[1 - i64::from(deg1[i])])
        .reduce_coefficients(du)
        .is_ok_and(|p| p.is_zero())));
    Ok(out)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use num_traits::One;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str, n: usize, m: u64) -> LaurentPoly {
        LaurentPoly::parse(s, n, CoefficientRing::new(m).unwrap()).unwrap()
    }

    #[test]
    fn flatness_examples() {
        assert!(check_flatness(&[p("x1 - 1", 2, 0), p("x1 x2 + 1", 2, 0)]).ok);
        let r = check_flatness(&[p("x2 - 1", 2, 0), p("x1 + 1", 2, 0)]);
        assert!(!r.ok);
        assert!(r.entries[0].uses_later_axis);
        // A monomial factor in a later variable is a unit.
        assert!(check_flatness(&[p("x1 x2^3 - x2^3", 2, 0), p("x2 + 1", 2, 0)]).ok);
    }

    #[test]
    fn zero_and_generator_round_trip() {
        let t = vec![p("x1 - 1", 2, 0), p("x1 x2 + 1", 2, 0)];
        let zero = vec![LaurentPoly::zero(2, CoefficientRing::INTEGERS); 2];
        assert!(trivialize_syzygy(&t, &zero).unwrap().is_empty());
        let s12 = vec![t[1].clone(), -&t[0]];
        let cert = trivialize_syzygy(&t, &s12).unwrap();
        assert_eq!(cert.coefficients.len(), 1);
        assert_eq!(cert.coefficients[&(0, 1)], LaurentPoly::one(2, CoefficientRing::INTEGERS));
        assert_eq!(trivialize_syzygy(&t, &[t[0].clone(), t[1].clone()]), Err(Error::NotASyzygy));
    }

    #[test]
    fn lifting_constants() {
        let mut c = SyzygyCertificate::new();
        c.add(0, 1, p("5", 1, 6));
        let l = lift_syzygy(&c);
        assert_eq!(l.coefficients[&(0, 1)], p("5", 1, 0));
        assert!(lift_syzygy(&SyzygyCertificate::new()).is_empty());
    }

    pub(crate) fn random_poly(rng: &mut ChaCha8Rng, n: usize, upto: usize, ring: CoefficientRing, terms: usize) -> LaurentPoly {
        let mut out = LaurentPoly::zero(n, ring);
        for _ in 0..terms {
            let mut e = vec![0; n];
            for slot in e.iter_mut().take(upto) {
                *slot = rng.gen_range(-2..=2);
            }
            out.add_term(e, BigInt::from(rng.gen_range(-3..=3)));
        }
        out
    }

    /// A random flat tuple of length `n`.
    pub(crate) fn random_flat(rng: &mut ChaCha8Rng, n: usize, ring: CoefficientRing) -> Vec<LaurentPoly> {
        (0..n)
            .map(|i| {
                let mut lead = vec![0; n];
                for slot in lead.iter_mut().take(i) {
                    *slot = rng.gen_range(-1..=1);
                }
                let top = rng.gen_range(1..=2);
                lead[i] = top;
                let mut t = LaurentPoly::monomial(ring, lead, BigInt::one());
                for _ in 0..3 {
                    let mut e = vec![0; n];
                    for slot in e.iter_mut().take(i) {
                        *slot = rng.gen_range(-1..=1);
                    }
                    e[i] = rng.gen_range(-1..top);
                    t.add_term(e, BigInt::from(rng.gen_range(-2..=2)));
                }
                t
            })
            .collect()
    }

    pub(crate) fn random_trivial(
        rng: &mut ChaCha8Rng,
        t: &[LaurentPoly],
    ) -> Vec<LaurentPoly> {
        let n = t.len();
        let mut cert = SyzygyCertificate::new();
        for i in 0..n {
            for j in i + 1..n {
                cert.add(i, j, random_poly(rng, t[0].nvars(), t[0].nvars(), t[0].ring(), 2));
            }
        }
        cert.expand(t)
    }

    #[test]
    fn random_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for case in 0..60 {
            let m = [0u64, 2, 4, 6, 12][case % 5];
            let ring = CoefficientRing::new(m).unwrap();
            let n = 2 + case % 3;
            let t = random_flat(&mut rng, n, ring);
            let f = random_trivial(&mut rng, &t);
            let cert = trivialize_syzygy(&t, &f).unwrap();
            assert_eq!(cert.expand(&t), f);
        }
    }

    #[test]
    fn lift_then_reduce_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let ring = CoefficientRing::modular(6).unwrap();
        for _ in 0..20 {
            let mut c = SyzygyCertificate::new();
            c.add(0, 2, random_poly(&mut rng, 3, 3, ring, 3));
            c.add(1, 2, random_poly(&mut rng, 3, 3, ring, 3));
            assert_eq!(lift_syzygy(&c).reduce(6).unwrap(), c);
        }
    }

    fn normalization_case(spec: crate::root_data::GroupSpec, seed: u64) {
        use crate::root_data::LatticeModel;
        let model = LatticeModel::compile(&spec).unwrap();
        let n = model.total_rank;
        let z = CoefficientRing::INTEGERS;
        let (deg1, d) = degree_one_gcd(&model).unwrap();
        let rho: Vec<LaurentPoly> = (0..n).map(|i| model.rho(i)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..4 {
            // f_i ρ_i has degree 0 for y of degree 0 and f_i = y (ρ(ω_i) + s_i) or f_i = y.
            let hom: Vec<LaurentPoly> = (0..n)
                .map(|i| {
                    let y = random_poly(&mut rng, n, n, z, 4).homogeneous_component(&model.grading, &[0]);
                    if deg1[i] {
                        let s = BigInt::from(model.orbit_size(&model.fundamental_weight(i)));
                        &y * &(&model.orbit_poly(&model.fundamental_weight(i), false) + &LaurentPoly::constant(n, z, s))
                    } else {
                        y
                    }
                })
                .collect();
            let triv = random_trivial(&mut rng, &rho);
            let f: Vec<LaurentPoly> = hom.iter().zip(&triv).map(|(a, b)| a + b).collect();
            let g = normalize_coefficients(&model, &f).unwrap();
            let sum = |v: &[LaurentPoly]| v.iter().zip(&rho).fold(LaurentPoly::zero(n, z), |acc, (a, b)| &acc + &(a * b));
            assert_eq!(sum(&g), sum(&f));
            for (i, gi) in g.iter().enumerate() {
                let c = gi.homogeneous_component(&model.grading, &[1 - i64::from(deg1[i])]);
                assert!(c.reduce_coefficients(d as u64).unwrap().is_zero(), "entry {i}: {c}");
            }
        }
    }

    #[test]
    fn normalization_kills_wrong_degree_components() {
        use crate::root_data::{GroupSpec, SimpleFactor};
        normalization_case(GroupSpec::new(vec![SimpleFactor::c(2)], vec![vec![vec![1]]]).unwrap(), 1);
        normalization_case(GroupSpec::new(vec![SimpleFactor::a(3)], vec![vec![vec![2]]]).unwrap(), 2);
        normalization_case(
            GroupSpec::new(vec![SimpleFactor::c(2), SimpleFactor::c(2)], vec![vec![vec![1], vec![1]]]).unwrap(),
            3,
        );
    }

    #[test]
    fn normalization_refuses_other_types() {
        use crate::root_data::{GroupSpec, LatticeModel, SimpleFactor};
        let model = LatticeModel::compile(&GroupSpec::new(vec![SimpleFactor::b(2)], vec![vec![vec![1]]]).unwrap()).unwrap();
        let f = vec![LaurentPoly::zero(2, CoefficientRing::INTEGERS); 2];
        assert!(matches!(normalize_coefficients(&model, &f), Err(Error::Unsupported(_))));
    }
}
