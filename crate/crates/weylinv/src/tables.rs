//! Closed forms for `Dec` and `Sdec`, and the labelled families of groups
//! whose invariant groups are known in advance.

use std::collections::BTreeSet;

use num_integer::Integer;

use crate::error::Result;
use crate::invariants::compute_q;
use crate::lattice::{FactorGroup, Lattice};
use crate::root_data::{DynkinType, GroupSpec, LatticeModel, SimpleFactor};

/// Kernel component of the standard diagonal `μ_k` for one factor.
pub fn diagonal_component(f: &SimpleFactor, k: i64) -> Option<Vec<i64>> {
    let n = f.rank as i64;
    match (f.ty, k) {
        (DynkinType::A, k) if k >= 1 && (n + 1) % k == 0 => Some(vec![(n + 1) / k]),
        (DynkinType::B | DynkinType::C | DynkinType::E7, 2) => Some(vec![1]),
        (DynkinType::D, 4) if n % 2 == 1 => Some(vec![1]),
        (DynkinType::D, 2) if n % 2 == 1 => Some(vec![2]),
        (DynkinType::D, 2) => Some(vec![1, 0]),
        (DynkinType::E6, 3) => Some(vec![1]),
        _ => None,
    }
}

/// `(∏ factors) / μ_k` with the standard diagonal embedding.
pub fn diagonal_spec(factors: Vec<SimpleFactor>, k: i64) -> Option<GroupSpec> {
    let gen: Option<Vec<Vec<i64>>> = factors.iter().map(|f| diagonal_component(f, k)).collect();
    GroupSpec::new(factors, vec![gen?]).ok()
}

/// Each factor modulo its own `μ_k` (adjoint for `PGL`, `PGSp`, `SO` etc.).
pub fn separate_spec(factors: Vec<SimpleFactor>, ks: &[i64]) -> Option<GroupSpec> {
    let nf = factors.len();
    let mut kernel = Vec::new();
    for (i, (f, &k)) in factors.iter().zip(ks).enumerate() {
        if k <= 1 {
            continue;
        }
        let mut g: Vec<Vec<i64>> = factors.iter().map(|h| vec![0; h.center_moduli().len()]).collect();
        g[i] = diagonal_component(f, k)?;
        kernel.push(g);
        debug_assert_eq!(kernel.last().map(|g| g.len()), Some(nf));
    }
    GroupSpec::new(factors, kernel).ok()
}

fn v_p(mut x: i64, p: i64) -> u32 {
    let mut v = 0;
    while x != 0 && x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

fn prime_power(k: i64) -> Option<i64> {
    if k < 2 {
        return None;
    }
    let p = (2..=k).find(|d| k % d == 0)?;
    let mut r = k;
    while r % p == 0 {
        r /= p;
    }
    (r == 1).then_some(p)
}

/// Subgroup of a factor's center generated by the given elements.
fn subgroup(f: &SimpleFactor, gens: &[&Vec<i64>]) -> BTreeSet<Vec<i64>> {
    let moduli = f.center_moduli();
    let mut set: BTreeSet<Vec<i64>> = BTreeSet::new();
    set.insert(vec![0; moduli.len()]);
    loop {
        let mut grew = false;
        let cur: Vec<Vec<i64>> = set.iter().cloned().collect();
        for a in &cur {
            for g in gens {
                let s: Vec<i64> = a.iter().zip(g.iter()).zip(&moduli).map(|((x, y), m)| (x + y).rem_euclid(*m)).collect();
                grew |= set.insert(s);
            }
        }
        if !grew {
            return set;
        }
    }
}

fn order_of(f: &SimpleFactor, z: &[i64]) -> i64 {
    z.iter().zip(f.center_moduli()).fold(1, |acc, (&v, m)| acc.lcm(&(m / v.gcd(&m))))
}

fn is_so_type(f: &SimpleFactor, z: &[i64]) -> bool {
    if f.rank % 2 == 1 {
        z == [2]
    } else {
        z == [1, 0] || (f.rank == 4 && z.iter().any(|&x| x != 0))
    }
}

/// Factors linked through kernel generators, together with the generators touching them.
struct Block {
    factors: Vec<usize>,
    gens: Vec<Vec<Vec<i64>>>,
}

fn blocks(spec: &GroupSpec) -> Vec<Block> {
    let nf = spec.factors.len();
    let mut parent: Vec<usize> = (0..nf).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let support = |g: &Vec<Vec<i64>>| -> Vec<usize> { (0..nf).filter(|&i| g[i].iter().any(|&x| x != 0)).collect() };
    for g in &spec.kernel {
        let s = support(g);
        for w in s.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a] = b;
        }
    }
    let mut out: Vec<Block> = Vec::new();
    let mut roots: Vec<usize> = Vec::new();
    for i in 0..nf {
        let r = find(&mut parent, i);
        match roots.iter().position(|&x| x == r) {
            Some(j) => out[j].factors.push(i),
            None => {
                roots.push(r);
                out.push(Block { factors: vec![i], gens: vec![] });
            }
        }
    }
    for g in &spec.kernel {
        let s = support(g);
        if let Some(&first) = s.first() {
            let r = find(&mut parent, first);
            let j = roots.iter().position(|&x| x == r).expect("root recorded");
            let local: Vec<Vec<i64>> = out[j].factors.iter().map(|&i| g[i].clone()).collect();
            out[j].gens.push(local);
        }
    }
    out
}

fn unit(n: usize, i: usize, c: i64) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = c;
    v
}

/// Dec of a simple factor modulo a subgroup of its center, as a multiple of `q`.
fn single_dec(f: &SimpleFactor, comps: &[&Vec<i64>]) -> Option<i64> {
    let sub = subgroup(f, comps);
    let k = sub.len() as i64;
    let n = f.rank as i64;
    match f.ty {
        DynkinType::A => {
            if k == 1 {
                return Some(1);
            }
            let p = prime_power(k)?;
            if p != 2 || v_p(n + 1, 2) > v_p(k, 2) {
                Some(k)
            } else {
                Some(2 * k)
            }
        }
        DynkinType::B => Some(if k == 1 && n == 2 { 1 } else { 2 }),
        DynkinType::C => Some(if k == 1 { 1 } else { 4 / n.gcd(&2) }),
        DynkinType::D => {
            if k == 1 || (k == 2 && sub.iter().all(|z| z.iter().all(|&x| x == 0) || is_so_type(f, z))) {
                Some(2)
            } else if n == 4 && k == 4 {
                Some(4)
            } else {
                None
            }
        }
        DynkinType::E6 => Some(6),
        DynkinType::E7 => Some(12),
    }
}

enum Diagonal {
    A { k: i64, sizes: [i64; 2] },
    B,
    C { ranks: Vec<i64> },
    DMu4 { ranks: Vec<i64> },
    DMu2,
}

fn classify_diagonal(factors: &[SimpleFactor], gen: &[Vec<i64>]) -> Option<Diagonal> {
    let ty = factors[0].ty;
    if factors.iter().any(|f| f.ty != ty) {
        return None;
    }
    let orders: Vec<i64> = factors.iter().zip(gen).map(|(f, z)| order_of(f, z)).collect();
    let k = orders[0];
    if orders.iter().any(|&o| o != k) {
        return None;
    }
    let ranks: Vec<i64> = factors.iter().map(|f| f.rank as i64).collect();
    match ty {
        DynkinType::A if factors.len() == 2 => {
            prime_power(k)?;
            let units: Vec<i64> = factors.iter().zip(gen).map(|(f, z)| z[0] / ((f.rank as i64 + 1) / k)).collect();
            let u = units[0].rem_euclid(k);
            if units.iter().all(|&v| v.rem_euclid(k) == u || v.rem_euclid(k) == (-u).rem_euclid(k)) {
                Some(Diagonal::A { k, sizes: [ranks[0] + 1, ranks[1] + 1] })
            } else {
                None
            }
        }
        DynkinType::B => Some(Diagonal::B),
        DynkinType::C => Some(Diagonal::C { ranks }),
        DynkinType::D if k == 4 => Some(Diagonal::DMu4 { ranks }),
        DynkinType::D if k == 2 => {
            let parity = ranks[0] % 2;
            (ranks.iter().all(|r| r % 2 == parity) && factors.iter().zip(gen).all(|(f, z)| is_so_type(f, z)))
                .then_some(Diagonal::DMu2)
        }
        _ => None,
    }
}

fn diagonal_dec(d: &Diagonal, m: usize) -> Vec<Vec<i64>> {
    match d {
        Diagonal::A { k, sizes } => {
            let (a, b) = (v_p(sizes[0], 2), v_p(sizes[1], 2));
            let vk = v_p(*k, 2);
            if k % 2 == 1 || (a > vk && b > vk) {
                vec![vec![*k, 0], vec![0, *k]]
            } else if a == vk && b == vk {
                vec![vec![*k, -k], vec![*k, *k]]
            } else if a > vk {
                vec![vec![*k, 0], vec![0, 2 * k]]
            } else {
                vec![vec![2 * k, 0], vec![0, *k]]
            }
        }
        Diagonal::B | Diagonal::DMu2 => (0..m).map(|i| unit(m, i, 2)).collect(),
        Diagonal::C { ranks } => {
            let mut gens: Vec<Vec<i64>> = Vec::new();
            let odd: Vec<usize> = (0..m).filter(|&i| ranks[i] % 2 == 1).collect();
            for i in (0..m).filter(|&i| ranks[i] % 2 == 0) {
                gens.push(unit(m, i, 2));
            }
            if let Some(&o) = odd.first() {
                gens.push(unit(m, o, 4));
                for &j in &odd[1..] {
                    let mut v = unit(m, o, 2);
                    v[j] = -2;
                    gens.push(v);
                }
            }
            gens
        }
        Diagonal::DMu4 { .. } => {
            let mut gens = Vec::new();
            for i in 1..m {
                let mut v = unit(m, 0, 4);
                v[i] = -4;
                gens.push(v);
            }
            let mut v = unit(m, 0, 4);
            v[1] = 4;
            gens.push(v);
            gens
        }
    }
}

fn diagonal_sdec_extra(d: &Diagonal, factors: &[SimpleFactor]) -> Vec<Vec<i64>> {
    let m = factors.len();
    let mut out = Vec::new();
    let pair = |i: usize, j: usize, ni: i64, nj: i64, c: i64| {
        let g = ni.gcd(&nj);
        let mut v = vec![0; m];
        v[i] = c * nj / g;
        v[j] = -c * ni / g;
        v
    };
    match d {
        Diagonal::B => {
            for i in 0..m {
                for j in i + 1..m {
                    if factors[i].rank == 2 && factors[j].rank == 2 {
                        out.push(pair(i, j, 1, 1, 1));
                    }
                }
            }
        }
        Diagonal::C { ranks } => {
            for i in 0..m {
                for j in i + 1..m {
                    out.push(pair(i, j, ranks[i], ranks[j], 1));
                }
            }
        }
        Diagonal::DMu4 { ranks } => {
            for j in 1..m {
                out.push(pair(0, j, ranks[0], ranks[j], 2));
            }
        }
        Diagonal::A { .. } | Diagonal::DMu2 => {}
    }
    out
}

fn block_spec(spec: &GroupSpec, b: &Block) -> Option<GroupSpec> {
    GroupSpec::new(b.factors.iter().map(|&i| spec.factors[i]).collect(), b.gens.clone()).ok()
}

/// `(Dec, Sdec)` generators for one block, in block coordinates.
fn block_tables(spec: &GroupSpec, b: &Block) -> (Option<Vec<Vec<i64>>>, Option<Vec<Vec<i64>>>) {
    let factors: Vec<SimpleFactor> = b.factors.iter().map(|&i| spec.factors[i]).collect();
    let m = factors.len();
    if m == 1 {
        let comps: Vec<&Vec<i64>> = b.gens.iter().map(|g| &g[0]).collect();
        let d = single_dec(&factors[0], &comps).map(|d| vec![vec![d]]);
        return (d.clone(), d);
    }
    if factors.iter().all(|f| f.ty == DynkinType::E6) {
        let d: Vec<Vec<i64>> = (0..m).map(|i| unit(m, i, 6)).collect();
        return (Some(d.clone()), Some(d));
    }
    if factors.iter().all(|f| f.ty == DynkinType::E7) {
        let d: Vec<Vec<i64>> = (0..m).map(|i| unit(m, i, 12)).collect();
        return (Some(d.clone()), Some(d));
    }
    if b.gens.len() != 1 {
        return (None, None);
    }
    if factors.iter().all(|f| f.ty == DynkinType::A) {
        let k = order_of(&factors[0], &b.gens[0][0]);
        let sdec = factors
            .iter()
            .zip(&b.gens[0])
            .all(|(f, z)| order_of(f, z) == k)
            .then(|| block_spec(spec, b))
            .flatten()
            .and_then(|s| LatticeModel::compile(&s).ok())
            .and_then(|model| compute_q(&model).ok())
            .map(|q| q.lattice.basis_i64());
        let dec = classify_diagonal(&factors, &b.gens[0]).map(|d| diagonal_dec(&d, m));
        return (dec, sdec);
    }
    let Some(diag) = classify_diagonal(&factors, &b.gens[0]) else { return (None, None) };
    let dec = diagonal_dec(&diag, m);
    let mut sdec = dec.clone();
    sdec.extend(diagonal_sdec_extra(&diag, &factors));
    (Some(dec), Some(sdec))
}

fn assemble(spec: &GroupSpec, pick_sdec: bool) -> Option<Lattice> {
    let nf = spec.factors.len();
    let mut gens: Vec<Vec<i64>> = Vec::new();
    for b in blocks(spec) {
        let (dec, sdec) = block_tables(spec, &b);
        for v in if pick_sdec { sdec } else { dec }? {
            let mut g = vec![0; nf];
            for (local, &f) in b.factors.iter().enumerate() {
                g[f] = v[local];
            }
            gens.push(g);
        }
    }
    Some(Lattice::from_i64(nf, &gens))
}

/// Closed form for `Dec`, when one is known.
pub fn dec_table(spec: &GroupSpec) -> Option<Lattice> {
    assemble(spec, false)
}

/// Closed form for `Sdec`, when one is known.
pub fn sdec_table(spec: &GroupSpec) -> Option<Lattice> {
    assemble(spec, true)
}

pub const FAMILY_LABELS: [&str; 9] =
    ["cor:typeA", "cor:abelian", "propB", "cor:typeB", "prop:typec", "cor:typec", "Ddiagonal", "cor:typeD", "prop:typeE"];

/// All labels accepted by [`family_instances`].
pub fn family_labels() -> Vec<&'static str> {
    let mut v = FAMILY_LABELS.to_vec();
    v.push("pgo8");
    v
}

#[derive(Clone, Debug)]
pub struct FamilyInstance {
    pub label: &'static str,
    pub spec: GroupSpec,
    /// Invariant factors of `Inv_ind`, when the family states them.
    pub expected_ind: Option<Vec<i64>>,
    /// Invariant factors of `Inv_sd`, when the family states them.
    pub expected_sd: Option<Vec<i64>>,
    /// Compare only the orders of `Inv_ind`.
    pub order_only: bool,
}

/// Invariant factors of `⊕ (Z/o)^c`.
pub fn group(parts: &[(i64, usize)]) -> Vec<i64> {
    let diag: Vec<i64> = parts.iter().flat_map(|&(o, c)| std::iter::repeat_n(o, c)).collect();
    if diag.is_empty() {
        return vec![];
    }
    FactorGroup::quotient(&Lattice::diagonal(&diag), &Lattice::full(diag.len()))
        .expect("diagonal sublattice")
        .factors_i64()
}

fn inst(label: &'static str, spec: Option<GroupSpec>, ind: Option<Vec<i64>>, sd: Option<Vec<i64>>) -> Option<FamilyInstance> {
    Some(FamilyInstance { label, spec: spec?, expected_ind: ind, expected_sd: sd, order_only: false })
}

fn tuples(values: &[usize], len: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::new();
        for t in out {
            for &v in values.iter().filter(|&&v| t.last().is_none_or(|&l| v >= l)) {
                let mut t2 = t.clone();
                t2.push(v);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

/// Instances of a labelled family with the invariant groups stated for them.
pub fn family_instances(label: &str) -> Result<Vec<FamilyInstance>> {
    let mut out: Vec<Option<FamilyInstance>> = Vec::new();
    match label {
        "cor:typeA" => {
            for m in 1..=3 {
                for ns in tuples(&[1, 2, 4], m) {
                    let all0 = ns.iter().all(|n| n % 4 == 0);
                    let g = group(&[(2, if all0 { m } else { m - 1 })]);
                    let factors = ns.iter().map(|&n| SimpleFactor::a(2 * n - 1)).collect();
                    out.push(inst("cor:typeA", diagonal_spec(factors, 2), Some(g.clone()), Some(g)));
                }
            }
        }
        "cor:abelian" => {
            let f = vec![SimpleFactor::a(11), SimpleFactor::a(11)];
            if let Some(mut i) = inst("cor:abelian", diagonal_spec(f, 6), Some(vec![6]), Some(vec![6])) {
                i.order_only = true;
                out.push(Some(i));
            }
        }
        "propB" => {
            for m in 2..=4 {
                for n in m..=4 {
                    let sd = if m == 2 && n == 2 { vec![2] } else { vec![] };
                    out.push(inst(
                        "propB",
                        diagonal_spec(vec![SimpleFactor::b(m), SimpleFactor::b(n)], 2),
                        Some(vec![2]),
                        Some(sd),
                    ));
                }
            }
        }
        "cor:typeB" => {
            for m in 1..=2 {
                for ns in tuples(&[2, 3, 4], m) {
                    let f: Vec<SimpleFactor> = ns.iter().map(|&n| SimpleFactor::b(n)).collect();
                    out.push(inst("cor:typeB", separate_spec(f, &vec![2; m]), Some(vec![]), Some(vec![])));
                }
            }
            for m in 2..=3 {
                for ns in tuples(&[2, 3, 4], m) {
                    let k = ns.iter().filter(|&&n| n == 2).count();
                    let f = ns.iter().map(|&n| SimpleFactor::b(n)).collect();
                    out.push(inst(
                        "cor:typeB",
                        diagonal_spec(f, 2),
                        Some(group(&[(2, m - 1)])),
                        Some(group(&[(2, k.saturating_sub(1))])),
                    ));
                }
            }
            for spin in tuples(&[2, 3, 4], 1).into_iter().chain(tuples(&[2, 3], 2)) {
                for so in [2usize, 3] {
                    let mut f: Vec<SimpleFactor> = spin.iter().map(|&n| SimpleFactor::b(n)).collect();
                    let mut ks = vec![1; f.len()];
                    f.push(SimpleFactor::b(so));
                    ks.push(2);
                    let k = spin.iter().filter(|&&n| n >= 3).count();
                    out.push(inst("cor:typeB", separate_spec(f, &ks), Some(group(&[(2, k)])), Some(vec![])));
                }
            }
        }
        "prop:typec" => {
            for m in 1..=6usize {
                for n in m..=6usize {
                    let (a, b) = (m % 4 == 0, n % 4 == 0);
                    let ind = if a && b { vec![2, 2] } else { vec![2] };
                    let sd = if a == b { vec![2] } else { vec![] };
                    out.push(inst(
                        "prop:typec",
                        diagonal_spec(vec![SimpleFactor::c(m), SimpleFactor::c(n)], 2),
                        Some(ind),
                        Some(sd),
                    ));
                }
            }
        }
        "cor:typec" => {
            for m in 1..=3 {
                for ns in tuples(&[1, 2, 4], m) {
                    let f: Vec<SimpleFactor> = ns.iter().map(|&n| SimpleFactor::c(n)).collect();
                    let k = ns.iter().filter(|&&n| n % 4 == 0).count();
                    out.push(inst("cor:typec", separate_spec(f.clone(), &vec![2; m]), Some(group(&[(2, k)])), Some(vec![])));
                    if m >= 2 {
                        let all0 = ns.iter().all(|n| n % 4 == 0);
                        let none0 = ns.iter().all(|n| n % 4 != 0);
                        let ind = group(&[(2, if all0 { m } else { m - 1 })]);
                        let sd = group(&[(2, if all0 || none0 { m - 1 } else { m - 2 })]);
                        out.push(inst("cor:typec", diagonal_spec(f, 2), Some(ind), Some(sd)));
                    }
                }
            }
            for (pg, sp) in [(1usize, 1usize), (2, 3), (4, 1), (4, 4)] {
                let f = vec![SimpleFactor::c(pg), SimpleFactor::c(sp)];
                let k = usize::from(pg % 4 == 0);
                out.push(inst("cor:typec", separate_spec(f, &[2, 1]), Some(group(&[(2, k)])), Some(vec![])));
            }
        }
        "Ddiagonal" => {
            for (m, n) in [(5usize, 5usize), (5, 7), (7, 7)] {
                let f = vec![SimpleFactor::d(m), SimpleFactor::d(n)];
                out.push(inst("Ddiagonal", diagonal_spec(f.clone(), 4), Some(vec![4]), Some(vec![2])));
                out.push(inst("Ddiagonal", diagonal_spec(f, 2), Some(vec![2]), Some(vec![])));
            }
            for (m, n) in [(4usize, 4usize), (4, 6), (6, 6)] {
                let f = vec![SimpleFactor::d(m), SimpleFactor::d(n)];
                out.push(inst("Ddiagonal", diagonal_spec(f, 2), Some(vec![2]), Some(vec![])));
            }
        }
        "cor:typeD" => {
            for m in 1..=3 {
                for ns in tuples(&[5, 7], m) {
                    let f = ns.iter().map(|&n| SimpleFactor::d(n)).collect();
                    out.push(inst(
                        "cor:typeD",
                        diagonal_spec(f, 4),
                        Some(group(&[(4, m - 1)])),
                        Some(group(&[(2, m - 1)])),
                    ));
                }
                for ns in tuples(&[4, 6], m) {
                    let f = ns.iter().map(|&n| SimpleFactor::d(n)).collect();
                    out.push(inst("cor:typeD", diagonal_spec(f, 2), Some(group(&[(2, m - 1)])), Some(vec![])));
                }
            }
        }
        "prop:typeE" => {
            out.push(inst(
                "prop:typeE",
                diagonal_spec(vec![SimpleFactor::e6(), SimpleFactor::e6()], 3),
                Some(group(&[(2, 1), (6, 1)])),
                Some(vec![]),
            ));
            out.push(inst(
                "prop:typeE",
                diagonal_spec(vec![SimpleFactor::e7(), SimpleFactor::e7()], 2),
                Some(group(&[(3, 1), (12, 1)])),
                Some(vec![]),
            ));
        }
        "pgo8" => {
            out.push(inst("pgo8", Some(crate::invariants::pgo8_spec()), None, Some(vec![])));
        }
        other => return Err(crate::error::Error::InvalidSpec(format!("unknown family label {other}"))),
    }
    Ok(out.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_normal_form() {
        assert_eq!(group(&[(2, 1), (6, 1)]), vec![2, 6]);
        assert_eq!(group(&[(3, 1), (12, 1)]), vec![3, 12]);
        assert_eq!(group(&[(2, 0)]), Vec::<i64>::new());
    }

    #[test]
    fn blocks_follow_kernel_support() {
        let spec = separate_spec(vec![SimpleFactor::c(2), SimpleFactor::c(3), SimpleFactor::b(2)], &[2, 1, 2]).unwrap();
        assert_eq!(blocks(&spec).len(), 3);
        let spec = diagonal_spec(vec![SimpleFactor::c(2), SimpleFactor::c(3)], 2).unwrap();
        assert_eq!(blocks(&spec).len(), 1);
    }

    #[test]
    fn closed_forms_for_small_groups() {
        let pgsp4 = separate_spec(vec![SimpleFactor::c(2)], &[2]).unwrap();
        assert_eq!(dec_table(&pgsp4).unwrap().basis_i64(), vec![vec![2]]);
        let e = diagonal_spec(vec![SimpleFactor::e6(), SimpleFactor::e6()], 3).unwrap();
        assert_eq!(dec_table(&e).unwrap(), Lattice::diagonal(&[6, 6]));
        let a = diagonal_spec(vec![SimpleFactor::a(3), SimpleFactor::a(3)], 2).unwrap();
        // v2(4) > v2(2) on both sides
        assert_eq!(dec_table(&a).unwrap(), Lattice::diagonal(&[2, 2]));
        let a = diagonal_spec(vec![SimpleFactor::a(1), SimpleFactor::a(1)], 2).unwrap();
        assert_eq!(dec_table(&a).unwrap(), Lattice::from_i64(2, &[vec![2, -2], vec![2, 2]]));
    }

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(8), Some(2));
        assert_eq!(prime_power(9), Some(3));
        assert_eq!(prime_power(6), None);
        assert_eq!(v_p(24, 2), 3);
    }
}
