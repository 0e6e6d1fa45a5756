//! Group-spec grammar and the `weylinv` command-line driver.

use std::fmt::Write as _;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::generators::{build_generators, default_lambda0, gcd_chain, reduce_to_generators, GeneratorSet};
use crate::invariants::{
    self, compute_dec, compute_q, compute_sdec, default_sdec_mode, factor_group_generators, format_form,
    pgo8_auxiliary_lattice, pgo8_parity_check, pgo8_spec, quotient_reduction, DecMode, InvariantLattice,
    InvariantReport, SdecMode,
};
use crate::laurent::{CoefficientRing, LaurentPoly};
use crate::lattice::Lattice;
use crate::newton::newton_transform;
use crate::root_data::{DynkinType, GroupSpec, LatticeModel, SimpleFactor};
use crate::syzygy::{check_flatness, lift_syzygy, trivialize_syzygy};
use crate::tables::{self, diagonal_component, FamilyInstance};

struct SpecParser<'a> {
    s: &'a [u8],
    pos: usize,
}

#[derive(Debug, PartialEq)]
enum Residue {
    Int(i64),
    Pair(i64, i64),
    /// `@z`: the center element `z` itself, for factors whose center has no `μ_k`.
    Raw(i64),
}

impl<'a> SpecParser<'a> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.to_string() })
    }

    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(&format!("expected '{}'", c as char))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a name");
        }
        Ok(String::from_utf8_lossy(&self.s[start..self.pos]).into_owned())
    }

    fn int(&mut self) -> Result<i64> {
        self.ws();
        let start = self.pos;
        if self.pos < self.s.len() && self.s[self.pos] == b'-' {
            self.pos += 1;
        }
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .map_or_else(|| Err(Error::Parse { pos: start, msg: "expected an integer".into() }), Ok)
    }

    /// `x` used as a separator (not the start of a longer name).
    fn separator(&mut self) -> bool {
        self.ws();
        let next = self.s.get(self.pos + 1).copied();
        if self.s.get(self.pos) == Some(&b'x') && !next.is_some_and(|c| c.is_ascii_alphanumeric()) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn arg(&mut self) -> Result<i64> {
        self.expect(b'(')?;
        let n = self.int()?;
        self.expect(b')')?;
        Ok(n)
    }

    /// A factor and the kernel elements its alias adds on that factor.
    fn factor(&mut self) -> Result<(SimpleFactor, Vec<Vec<i64>>)> {
        self.ws();
        let start = self.pos;
        let name = self.ident()?;
        let bad = |pos: usize, msg: String| Err(Error::Parse { pos, msg });
        let even = |n: i64| n > 0 && n % 2 == 0;
        let out = match name.as_str() {
            "E6" => (SimpleFactor::e6(), vec![]),
            "E7" => (SimpleFactor::e7(), vec![]),
            "SL" | "PGL" => {
                let n = self.arg()?;
                if n < 2 {
                    return bad(start, format!("{name}({n}) needs n >= 2"));
                }
                let f = SimpleFactor::a(n as usize - 1);
                (f, if name == "PGL" { vec![vec![1]] } else { vec![] })
            }
            "Sp" | "PGSp" => {
                let n = self.arg()?;
                if !even(n) {
                    return bad(start, format!("{name}({n}) needs a positive even argument"));
                }
                let f = SimpleFactor::c(n as usize / 2);
                (f, if name == "PGSp" { vec![vec![1]] } else { vec![] })
            }
            "Spin" | "SO" => {
                let n = self.arg()?;
                let f = if n >= 5 && n % 2 == 1 {
                    SimpleFactor::b((n as usize - 1) / 2)
                } else if n >= 8 && n % 2 == 0 {
                    SimpleFactor::d(n as usize / 2)
                } else {
                    return bad(start, format!("{name}({n}) is outside types B and D"));
                };
                let gens = if name == "SO" { vec![diagonal_component(&f, 2).expect("SO kernel")] } else { vec![] };
                (f, gens)
            }
            "HSpin" => {
                let n = self.arg()?;
                if n < 8 || n % 4 != 0 {
                    return bad(start, format!("HSpin({n}) needs n divisible by 4 and n >= 8"));
                }
                (SimpleFactor::d(n as usize / 2), vec![vec![0, 1]])
            }
            "PGO" => {
                let n = self.arg()?;
                if n != 8 {
                    return bad(start, format!("PGO({n}) is only available for n = 8"));
                }
                (SimpleFactor::d(4), vec![vec![1, 0], vec![0, 1]])
            }
            other => return bad(start, format!("unknown factor {other}")),
        };
        Ok(out)
    }

    fn residue(&mut self) -> Result<Residue> {
        if self.eat(b'(') {
            let a = self.int()?;
            self.expect(b',')?;
            let b = self.int()?;
            self.expect(b')')?;
            Ok(Residue::Pair(a, b))
        } else if self.eat(b'@') {
            Ok(Residue::Raw(self.int()?))
        } else {
            Ok(Residue::Int(self.int()?))
        }
    }

    fn center(&mut self, factors: &[SimpleFactor]) -> Result<Vec<Vec<i64>>> {
        self.ws();
        let start = self.pos;
        let name = self.ident()?;
        if name != "mu" {
            return Err(Error::Parse { pos: start, msg: format!("expected mu(k), found {name}") });
        }
        let k = self.arg()?;
        if k < 2 {
            return Err(Error::Parse { pos: start, msg: "mu(k) needs k >= 2".into() });
        }
        let gen: Vec<Vec<i64>> = if self.eat(b'[') {
            let mut res = vec![self.residue()?];
            while self.eat(b',') {
                res.push(self.residue()?);
            }
            self.expect(b']')?;
            if res.len() != factors.len() {
                return Err(Error::Parse {
                    pos: start,
                    msg: format!("{} residues for {} factors", res.len(), factors.len()),
                });
            }
            let mut g = Vec::new();
            for (f, r) in factors.iter().zip(res) {
                let moduli = f.center_moduli();
                let comp = match (r, moduli.len()) {
                    (Residue::Int(0), l) => vec![0; l],
                    (Residue::Int(r), 1) => {
                        if moduli[0] % k != 0 {
                            return Err(Error::InvalidSpec(format!("mu({k}) does not embed in the center of {f}")));
                        }
                        vec![r * (moduli[0] / k)]
                    }
                    (Residue::Int(1), 2) if k == 2 => diagonal_component(f, 2).expect("Klein component"),
                    (Residue::Pair(a, b), 2) => vec![a, b],
                    (Residue::Raw(z), 1) => vec![z],
                    _ => return Err(Error::InvalidSpec(format!("invalid residue for {f}"))),
                };
                g.push(comp);
            }
            g
        } else {
            factors
                .iter()
                .map(|f| {
                    diagonal_component(f, k)
                        .ok_or_else(|| Error::InvalidSpec(format!("no diagonal mu({k}) in the center of {f}")))
                })
                .collect::<Result<_>>()?
        };
        let spec = GroupSpec::new(factors.to_vec(), vec![gen.clone()])?;
        if spec.generator_order(&spec.kernel[0]) != k {
            return Err(Error::InvalidSpec(format!("kernel element {gen:?} does not have order {k}")));
        }
        Ok(spec.kernel[0].clone())
    }

    fn spec(&mut self) -> Result<GroupSpec> {
        let paren = self.eat(b'(');
        let mut factors = Vec::new();
        let mut local: Vec<(usize, Vec<i64>)> = Vec::new();
        loop {
            let (f, gens) = self.factor()?;
            for g in gens {
                local.push((factors.len(), g));
            }
            factors.push(f);
            if !self.separator() {
                break;
            }
        }
        if paren {
            self.expect(b')')?;
        }
        let zero = |fs: &[SimpleFactor]| -> Vec<Vec<i64>> { fs.iter().map(|f| vec![0; f.center_moduli().len()]).collect() };
        let mut kernel: Vec<Vec<Vec<i64>>> = local
            .into_iter()
            .map(|(i, g)| {
                let mut full = zero(&factors);
                full[i] = g;
                full
            })
            .collect();
        if self.eat(b'/') {
            kernel.push(self.center(&factors)?);
            while self.separator() {
                kernel.push(self.center(&factors)?);
            }
        }
        if self.peek().is_some() {
            return self.err("unexpected trailing input");
        }
        GroupSpec::new(factors, kernel)
    }
}

/// Parses the group grammar, e.g. `(Sp(4) x Sp(4)) / mu(2)` or `PGO(8)`.
pub fn parse_spec(text: &str) -> Result<GroupSpec> {
    SpecParser { s: text.as_bytes(), pos: 0 }.spec()
}

fn factor_name(f: &SimpleFactor) -> String {
    match f.ty {
        DynkinType::A => format!("SL({})", f.rank + 1),
        DynkinType::B => format!("Spin({})", 2 * f.rank + 1),
        DynkinType::C => format!("Sp({})", 2 * f.rank),
        DynkinType::D => format!("Spin({})", 2 * f.rank),
        DynkinType::E6 => "E6".into(),
        DynkinType::E7 => "E7".into(),
    }
}

/// Canonical text for a spec; `parse_spec(print_spec(s)) == s`.
pub fn print_spec(spec: &GroupSpec) -> String {
    let names: Vec<String> = spec.factors.iter().map(factor_name).collect();
    let mut out = names.join(" x ");
    if spec.kernel.is_empty() {
        return out;
    }
    if spec.factors.len() > 1 {
        out = format!("({out})");
    }
    let centers: Vec<String> = spec
        .kernel
        .iter()
        .map(|g| {
            let k = spec.generator_order(g);
            let res: Vec<String> = g
                .iter()
                .zip(&spec.factors)
                .map(|(z, f)| {
                    let m = f.center_moduli();
                    if z.iter().all(|&v| v == 0) {
                        "0".to_string()
                    } else if m.len() == 1 && m[0] % k == 0 {
                        (z[0] / (m[0] / k)).to_string()
                    } else if m.len() == 1 {
                        format!("@{}", z[0])
                    } else {
                        format!("({},{})", z[0], z[1])
                    }
                })
                .collect();
            format!("mu({k})[{}]", res.join(","))
        })
        .collect();
    format!("{out} / {}", centers.join(" x "))
}

#[derive(Parser, Debug)]
#[command(name = "weylinv", about = "Degree-3 invariants of split semisimple groups and the syzygy calculus behind them")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Enumerate,
    Table,
    Both,
    Generators,
    Elements,
    Bounds,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Emit JSON.
    #[arg(long)]
    pub json: bool,
    /// Emit tab-separated values.
    #[arg(long, conflicts_with = "json")]
    pub tsv: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Q, Dec, Sdec and the factor groups for one group.
    Invariants {
        #[arg(long)]
        spec: String,
        #[command(flatten)]
        out: OutputArgs,
        /// Maximal orbit height for enumeration.
        #[arg(long, default_value_t = invariants::DEFAULT_HEIGHT)]
        height: u32,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// 1-based index of the degree-1 fundamental weight used as λ0.
        #[arg(long)]
        lambda0: Option<usize>,
        /// Print generators of the factor groups.
        #[arg(long)]
        show_generators: bool,
    },
    /// The generator set of an index-2 quotient with factors of type A or C.
    Generators {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        lambda0: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Rewrites a tuple (f_i) with Σ f_i ρ_i ∈ Z[T*] through the generators.
    Reduce {
        #[arg(long)]
        spec: String,
        /// JSON array of polynomial strings.
        #[arg(long)]
        input: std::path::PathBuf,
        #[arg(long)]
        lambda0: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Checks that the Newton tuple of a factor is flat with unit determinant.
    VerifyFlatness {
        #[arg(long = "type")]
        ty: String,
        #[arg(long)]
        rank: usize,
    },
    /// Random trivial syzygies of flat tuples, trivialized and re-expanded.
    FuzzSyzygy {
        #[arg(long, default_value_t = 100)]
        cases: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// A labelled family: expected versus computed factor groups.
    Table {
        #[arg(long)]
        family: String,
        /// Largest factor rank to include.
        #[arg(long)]
        max_rank: Option<usize>,
        #[command(flatten)]
        out: OutputArgs,
        #[arg(long, default_value_t = invariants::DEFAULT_HEIGHT)]
        height: u32,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// Reductions and parity statements for PGO(8).
    Pgo8Check {
        #[arg(long, default_value_t = 50)]
        cases: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
}

/// Result of a verb: text to print and the exit code.
pub struct Outcome {
    pub text: String,
    pub code: i32,
    /// `text` is an error message rather than a result.
    pub failed: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, code: 0, failed: false }
    }

    fn with_code(text: String, code: i32) -> Self {
        Outcome { text, code, failed: false }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Mismatch(_) | Error::Inclusion(_) | Error::NotASyzygy | Error::Divisibility(_) | Error::NotFlat(_) => 2,
        _ => 1,
    }
}

fn modes(mode: Option<ModeArg>) -> (DecMode, Option<SdecMode>) {
    match mode {
        None => (DecMode::Table, None),
        Some(ModeArg::Enumerate) => (DecMode::Enumerate, None),
        Some(ModeArg::Both) => (DecMode::Both, None),
        Some(ModeArg::Table) => (DecMode::Table, Some(SdecMode::Table)),
        Some(ModeArg::Generators) => (DecMode::Table, Some(SdecMode::Generators)),
        Some(ModeArg::Elements) => (DecMode::Table, Some(SdecMode::Elements)),
        Some(ModeArg::Bounds) => (DecMode::Table, Some(SdecMode::Bounds)),
    }
}

/// `(DecMode, SdecMode)` for a `--mode` name; `None` selects the defaults.
pub fn mode_from_name(name: Option<&str>) -> Result<(DecMode, Option<SdecMode>)> {
    let arg = name
        .map(|n| <ModeArg as ValueEnum>::from_str(n, true).map_err(|e| Error::InvalidSpec(format!("mode: {e}"))))
        .transpose()?;
    Ok(modes(arg))
}

fn lambda0_weight(model: &LatticeModel, index: Option<usize>) -> Result<Option<Vec<i64>>> {
    let Some(i) = index else { return Ok(None) };
    if i == 0 || i > model.total_rank {
        return Err(Error::InvalidSpec(format!("--lambda0 {i} is out of range")));
    }
    let w = model.fundamental_weight(i - 1);
    if model.class_of(&w) == model.grading.zero_class() {
        return Err(Error::DegreeCondition(format!("ω{i} has degree 0")));
    }
    Ok(Some(w))
}

fn lattice_json(l: &InvariantLattice) -> Value {
    json!(l.hnf_i64())
}

fn report_json(r: &InvariantReport, extra: Option<Value>) -> Value {
    let mut v = json!({
        "spec": print_spec(&r.spec),
        "Q": {"hnf": lattice_json(&r.q)},
        "Dec": {"hnf": lattice_json(&r.dec), "exactness": r.dec.exactness.to_string()},
        "Sdec": {"hnf": lattice_json(&r.sdec), "exactness": r.sdec.exactness.to_string(), "mode": r.sdec_mode.to_string(), "upper_bound": r.sdec_upper.basis_i64()},
        "inv_ind": {"factors": r.inv_ind.factors_i64()},
        "inv_sd": {"factors": r.inv_sd.factors_i64()},
    });
    if let Some(e) = extra {
        v["generators"] = e;
    }
    v
}

fn generator_labels(sub: &Lattice, sup: &Lattice) -> Result<Vec<String>> {
    Ok(factor_group_generators(sub, sup)?.into_iter().map(|(d, g)| format!("(Z/{d})({})", format_form(&g))).collect())
}

fn compute_report(
    model: &LatticeModel,
    height: u32,
    mode: Option<ModeArg>,
    lambda0: Option<&[i64]>,
) -> Result<InvariantReport> {
    let (dm, sm) = modes(mode);
    match (sm, lambda0) {
        (Some(SdecMode::Generators), Some(l)) | (None, Some(l)) => {
            let q = compute_q(model)?;
            let dec = compute_dec(model, height, dm)?;
            let forms = invariants::generator_forms(model, Some(l))?;
            let span = Lattice::from_generators(model.factors().len(), &forms.into_iter().map(|v| v.0).collect::<Vec<_>>());
            if !dec.lattice.is_subset_of(&span) {
                return Err(Error::Inclusion("Dec is not contained in the span of the generator forms".into()));
            }
            invariants::assemble_report(model, q, dec, InvariantLattice::exact(span), SdecMode::Generators)
        }
        _ => invariants::invariants(model, height, dm, sm),
    }
}

fn run_invariants(
    spec: &str,
    out: &OutputArgs,
    height: u32,
    mode: Option<ModeArg>,
    lambda0: Option<usize>,
    show: bool,
) -> Result<Outcome> {
    let spec = parse_spec(spec)?;
    let model = LatticeModel::compile(&spec)?;
    let l0 = lambda0_weight(&model, lambda0)?;
    let r = compute_report(&model, height, mode, l0.as_deref())?;
    let labels = if show {
        Some((generator_labels(&r.dec.lattice, &r.q.lattice)?, generator_labels(&r.dec.lattice, &r.sdec.lattice)?))
    } else {
        None
    };
    let mut text = String::new();
    if out.json {
        let extra = labels.as_ref().map(|(a, b)| json!({"inv_ind": a, "inv_sd": b}));
        text = serde_json::to_string_pretty(&report_json(&r, extra)).expect("json") + "\n";
    } else if out.tsv {
        writeln!(text, "spec\tQ\tDec\tDec_exactness\tSdec\tSdec_mode\tinv_ind\tinv_sd").unwrap();
        writeln!(
            text,
            "{}\t{:?}\t{:?}\t{}\t{:?}\t{}\t{:?}\t{:?}",
            print_spec(&r.spec),
            r.q.hnf_i64(),
            r.dec.hnf_i64(),
            r.dec.exactness,
            r.sdec.hnf_i64(),
            r.sdec_mode,
            r.inv_ind.factors_i64(),
            r.inv_sd.factors_i64()
        )
        .unwrap();
    } else {
        writeln!(text, "group    {}", print_spec(&r.spec)).unwrap();
        writeln!(text, "Q        {:?}", r.q.hnf_i64()).unwrap();
        writeln!(text, "Dec      {:?} ({})", r.dec.hnf_i64(), r.dec.exactness).unwrap();
        writeln!(text, "Sdec     {:?} ({}, {})", r.sdec.hnf_i64(), r.sdec.exactness, r.sdec_mode).unwrap();
        writeln!(text, "Sdec ⊆   {:?}", r.sdec_upper.basis_i64()).unwrap();
        writeln!(text, "Inv_ind  {:?}  {}", r.inv_ind.factors_i64(), r.inv_ind).unwrap();
        writeln!(text, "Inv_sd   {:?}  {}", r.inv_sd.factors_i64(), r.inv_sd).unwrap();
        if let Some((a, b)) = labels {
            writeln!(text, "Inv_ind generators  {}", if a.is_empty() { "-".into() } else { a.join(" + ") }).unwrap();
            writeln!(text, "Inv_sd generators   {}", if b.is_empty() { "-".into() } else { b.join(" + ") }).unwrap();
        }
    }
    Ok(Outcome::ok(text))
}

fn generator_set(model: &LatticeModel, lambda0: Option<usize>) -> Result<GeneratorSet> {
    let chain = gcd_chain(model)?;
    let l0 = match lambda0_weight(model, lambda0)? {
        Some(w) => w,
        None => default_lambda0(model, &chain),
    };
    build_generators(model, &chain, &l0)
}

fn run_generators(spec: &str, lambda0: Option<usize>, as_json: bool) -> Result<Outcome> {
    let model = LatticeModel::compile(&parse_spec(spec)?)?;
    let gens = generator_set(&model, lambda0)?;
    let c = &gens.chain;
    if as_json {
        let list: Vec<Value> = gens
            .all()
            .map(|g| {
                json!({
                    "id": g.id.to_string(),
                    "tuple": g.tuple.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                    "poly": g.poly.to_string(),
                })
            })
            .collect();
        let v = json!({
            "spec": print_spec(&model.spec),
            "order": c.order.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "s": c.s, "d": c.d_chain, "a": c.a,
            "lambda0": gens.lambda0,
            "generators": list,
        });
        return Ok(Outcome::ok(serde_json::to_string_pretty(&v).expect("json") + "\n"));
    }
    let mut text = String::new();
    writeln!(text, "group   {}", print_spec(&model.spec)).unwrap();
    writeln!(text, "order   {:?}", c.order.iter().map(|i| i + 1).collect::<Vec<_>>()).unwrap();
    writeln!(text, "s       {:?}", c.s).unwrap();
    writeln!(text, "d       {:?}", c.d_chain).unwrap();
    writeln!(text, "lambda0 {:?}", gens.lambda0).unwrap();
    for g in gens.all() {
        writeln!(text, "{}\t{}", g.id, g.poly).unwrap();
    }
    Ok(Outcome::ok(text))
}

fn run_reduce(spec: &str, input: &std::path::Path, lambda0: Option<usize>, as_json: bool) -> Result<Outcome> {
    let model = LatticeModel::compile(&parse_spec(spec)?)?;
    let raw = std::fs::read_to_string(input).map_err(|e| Error::InvalidSpec(format!("{}: {e}", input.display())))?;
    let items: Vec<String> = serde_json::from_str(&raw).map_err(|e| Error::InvalidSpec(format!("input: {e}")))?;
    if items.len() != model.total_rank {
        return Err(Error::LengthMismatch(model.total_rank, items.len()));
    }
    let f: Vec<LaurentPoly> = items
        .iter()
        .map(|s| LaurentPoly::parse(s, model.total_rank, CoefficientRing::INTEGERS))
        .collect::<Result<_>>()?;
    let gens = generator_set(&model, lambda0)?;
    let comb = reduce_to_generators(&model, &gens, &f)?;
    if as_json {
        let terms: serde_json::Map<String, Value> =
            comb.terms.iter().map(|(id, c)| (id.to_string(), Value::String(c.to_string()))).collect();
        return Ok(Outcome::ok(serde_json::to_string_pretty(&json!({"combination": terms})).expect("json") + "\n"));
    }
    let mut text = String::new();
    for (id, c) in &comb.terms {
        writeln!(text, "{id}\t{c}").unwrap();
    }
    Ok(Outcome::ok(text))
}

fn parse_type(ty: &str, rank: usize) -> Result<SimpleFactor> {
    let t = match ty {
        "A" | "a" => DynkinType::A,
        "B" | "b" => DynkinType::B,
        "C" | "c" => DynkinType::C,
        "D" | "d" => DynkinType::D,
        _ => return Err(Error::InvalidSpec(format!("unknown type {ty}"))),
    };
    SimpleFactor::new(t, rank)
}

fn run_verify_flatness(ty: &str, rank: usize) -> Result<Outcome> {
    let f = parse_type(ty, rank)?;
    let t = newton_transform(f)?;
    let report = check_flatness(&t.flat);
    let unit = t.det_is_unit();
    let mut text = String::new();
    writeln!(text, "factor {f}").unwrap();
    for (i, p) in t.flat.iter().enumerate() {
        writeln!(text, "t{}\t{}", i + 1, p).unwrap();
    }
    writeln!(text, "det\t{}", t.det).unwrap();
    writeln!(text, "flat\t{}", report.ok).unwrap();
    writeln!(text, "det_unit\t{unit}").unwrap();
    Ok(Outcome::with_code(text, if report.ok && unit { 0 } else { 2 }))
}

fn random_poly(rng: &mut ChaCha8Rng, n: usize, spread: i32, terms: usize) -> LaurentPoly {
    let ts = (0..terms).map(|_| {
        let e: Vec<i32> = (0..n).map(|_| rng.gen_range(-spread..=spread)).collect();
        (e, BigInt::from(rng.gen_range(-3i64..=3)))
    });
    LaurentPoly::from_terms(n, CoefficientRing::INTEGERS, ts)
}

/// Flat tuples used by the syzygy fuzzer: Newton tuples of types A and C plus
/// variable tuples `x_i - c`.
pub fn fuzz_tuple(rng: &mut ChaCha8Rng) -> Result<Vec<LaurentPoly>> {
    let n = rng.gen_range(2..=4);
    match rng.gen_range(0..3) {
        0 => Ok(newton_transform(SimpleFactor::a(n))?.flat),
        1 => Ok(newton_transform(SimpleFactor::c(n))?.flat),
        _ => Ok((0..n)
            .map(|i| {
                let c = LaurentPoly::constant(n, CoefficientRing::INTEGERS, BigInt::from(rng.gen_range(-2i64..=2)));
                &LaurentPoly::var(n, CoefficientRing::INTEGERS, i) - &c
            })
            .collect()),
    }
}

/// A random Koszul combination `Σ g_ij (t_j e_i - t_i e_j)`.
pub fn random_trivial_syzygy(rng: &mut ChaCha8Rng, t: &[LaurentPoly]) -> Vec<LaurentPoly> {
    let n = t.len();
    let nv = t[0].nvars();
    let mut f = vec![LaurentPoly::zero(nv, CoefficientRing::INTEGERS); n];
    for _ in 0..rng.gen_range(1..=3) {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let g = random_poly(rng, nv, 1, 3);
        f[i] = &f[i] + &(&g * &t[j]);
        f[j] = &f[j] - &(&g * &t[i]);
    }
    f
}

fn run_fuzz(cases: usize, seed: u64) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = Instant::now();
    let mut failures = 0;
    for _ in 0..cases {
        let t = fuzz_tuple(&mut rng)?;
        let f = random_trivial_syzygy(&mut rng, &t);
        let ok = trivialize_syzygy(&t, &f).map(|c| c.expand(&t) == f).unwrap_or(false);
        let lifted = trivialize_syzygy(&t, &f)
            .and_then(|c| c.reduce(6))
            .map(|c6| lift_syzygy(&c6).reduce(6).map(|r| r == c6).unwrap_or(false))
            .unwrap_or(false);
        if !(ok && lifted) {
            failures += 1;
        }
    }
    eprintln!("fuzz-syzygy: {:.2}s", start.elapsed().as_secs_f64());
    let text = format!("cases\t{cases}\nfailures\t{failures}\n");
    Ok(Outcome::with_code(text, if failures == 0 { 0 } else { 2 }))
}

/// Computed factor groups of one family instance.
pub struct FamilyRow {
    pub instance: FamilyInstance,
    pub report: Result<InvariantReport>,
}

impl FamilyRow {
    pub fn ind_ok(&self) -> Option<bool> {
        let exp = self.instance.expected_ind.as_ref()?;
        let r = self.report.as_ref().ok()?;
        if self.instance.order_only {
            let got: i64 = r.inv_ind.factors_i64().iter().product();
            Some(got == exp.iter().product::<i64>())
        } else {
            Some(&r.inv_ind.factors_i64() == exp)
        }
    }

    pub fn sd_ok(&self) -> Option<bool> {
        let exp = self.instance.expected_sd.as_ref()?;
        let r = self.report.as_ref().ok()?;
        Some(&r.inv_sd.factors_i64() == exp)
    }

    pub fn passed(&self) -> bool {
        self.report.is_ok() && self.ind_ok() != Some(false) && self.sd_ok() != Some(false)
    }
}

pub fn family_rows(label: &str, max_rank: Option<usize>, height: u32, mode: Option<SdecMode>) -> Result<Vec<FamilyRow>> {
    let inst = tables::family_instances(label)?;
    Ok(inst
        .into_iter()
        .filter(|i| max_rank.is_none_or(|r| i.spec.factors.iter().all(|f| f.rank <= r)))
        .map(|instance| {
            let report = LatticeModel::compile(&instance.spec).and_then(|m| {
                let sm = match mode {
                    Some(SdecMode::Generators) if !invariants::generators_applicable(&m) => default_sdec_mode(&m),
                    Some(sm) => sm,
                    None => default_sdec_mode(&m),
                };
                invariants::invariants(&m, height, DecMode::Table, Some(sm))
            });
            FamilyRow { instance, report }
        })
        .collect())
}

fn fmt_opt(v: &Option<Vec<i64>>) -> String {
    v.as_ref().map_or("-".into(), |x| format!("{x:?}"))
}

fn run_table(family: &str, max_rank: Option<usize>, out: &OutputArgs, height: u32, mode: Option<ModeArg>) -> Result<Outcome> {
    let rows = family_rows(family, max_rank, height, modes(mode).1)?;
    let all_ok = rows.iter().all(FamilyRow::passed);
    let mut text = String::new();
    if out.json {
        let list: Vec<Value> = rows
            .iter()
            .map(|r| {
                let mut v = json!({
                    "label": r.instance.label,
                    "spec": print_spec(&r.instance.spec),
                    "expected_ind": r.instance.expected_ind,
                    "expected_sd": r.instance.expected_sd,
                    "pass": r.passed(),
                });
                match &r.report {
                    Ok(rep) => v["result"] = report_json(rep, None),
                    Err(e) => v["error"] = Value::String(e.to_string()),
                }
                v
            })
            .collect();
        text = serde_json::to_string_pretty(&Value::Array(list)).expect("json") + "\n";
    } else {
        let sep = if out.tsv { "\t" } else { "  " };
        writeln!(text, "{}", ["label", "spec", "inv_ind", "expected_ind", "inv_sd", "expected_sd", "status"].join(sep)).unwrap();
        for r in &rows {
            let (ind, sd) = match &r.report {
                Ok(rep) => (format!("{:?}", rep.inv_ind.factors_i64()), format!("{:?}", rep.inv_sd.factors_i64())),
                Err(e) => (format!("error: {e}"), "-".into()),
            };
            let status = if r.passed() { "ok" } else { "MISMATCH" };
            writeln!(
                text,
                "{}",
                [
                    r.instance.label.to_string(),
                    print_spec(&r.instance.spec),
                    ind,
                    fmt_opt(&r.instance.expected_ind),
                    sd,
                    fmt_opt(&r.instance.expected_sd),
                    status.to_string(),
                ]
                .join(sep)
            )
            .unwrap();
        }
    }
    Ok(Outcome::with_code(text, if all_ok { 0 } else { 2 }))
}

/// Random tuples `(f_i)` on the D4 weight lattice with `Σ f_i ρ_i ∈ Z[T*]`.
pub fn pgo8_tuple(rng: &mut ChaCha8Rng, model: &LatticeModel) -> Vec<LaurentPoly> {
    let zero = LaurentPoly::zero(4, CoefficientRing::INTEGERS);
    let mut f = vec![zero.clone(); 4];
    // a sequence of fundamental weights with total class 0
    let mut seq: Vec<usize>;
    loop {
        let len = rng.gen_range(1..=4);
        seq = (0..len).map(|_| rng.gen_range(0..4)).collect();
        let total = seq.iter().fold(model.grading.zero_class(), |acc, &i| {
            model.grading.add(&acc, &model.class_of(&model.fundamental_weight(i)))
        });
        if total == model.grading.zero_class() {
            break;
        }
    }
    let s: Vec<LaurentPoly> = seq.iter().map(|&i| model.orbit_poly(&model.fundamental_weight(i), false)).collect();
    let c: Vec<BigInt> = seq.iter().map(|&i| BigInt::from(model.orbit_size(&model.fundamental_weight(i)))).collect();
    // Π s_l - Π c_l = Σ_k (Π_{l<k} s_l) ρ_{i_k} (Π_{l>k} c_l)
    let mut prefix = LaurentPoly::one(4, CoefficientRing::INTEGERS);
    for k in 0..seq.len() {
        let tail: BigInt = c[k + 1..].iter().product();
        f[seq[k]] = &f[seq[k]] + &prefix.scale(&tail);
        prefix = &prefix * &s[k];
    }
    // a random multiplier of degree 0
    let mut y = zero.clone();
    for _ in 0..rng.gen_range(1..=3) {
        let coeffs: Vec<i64> = (0..4).map(|_| rng.gen_range(-1..=1)).collect();
        let e: Vec<i64> = (0..4).map(|j| (0..4).map(|r| coeffs[r] * model.tstar_basis[r][j]).sum()).collect();
        y = &y + &model.monomial(&e).scale(&BigInt::from(rng.gen_range(-2i64..=2)));
    }
    if y.is_zero() {
        y = LaurentPoly::one(4, CoefficientRing::INTEGERS);
    }
    for p in f.iter_mut() {
        *p = &*p * &y;
    }
    // Koszul terms do not change Σ f_i ρ_i
    for _ in 0..rng.gen_range(0..=2) {
        let i = rng.gen_range(0..4);
        let j = (i + rng.gen_range(1..4)) % 4;
        let g = random_poly(rng, 4, 1, 2);
        f[i] = &f[i] + &(&g * &model.rho(j));
        f[j] = &f[j] - &(&g * &model.rho(i));
    }
    f
}

/// Summary of the PGO(8) checks.
pub struct Pgo8Summary {
    pub rho1_image_ok: bool,
    pub rho_others_vanish: bool,
    pub tuples: usize,
    pub tuples_in_tstar: usize,
    pub parity_failures: usize,
    pub dec: Vec<Vec<i64>>,
    pub sdec: Vec<Vec<i64>>,
}

pub fn pgo8_summary(cases: usize, seed: u64) -> Result<Pgo8Summary> {
    let model = LatticeModel::compile(&pgo8_spec())?;
    let sub = pgo8_auxiliary_lattice();
    let red = |p: &LaurentPoly| quotient_reduction(p, &sub, 4);
    let two = red(&LaurentPoly::constant(4, CoefficientRing::INTEGERS, BigInt::from(2)))?;
    let e1 = red(&model.monomial(&[1, 0, 0, 0]))?;
    let e2 = red(&model.monomial(&[-1, 1, 0, 0]))?;
    let (a, b) = (two.mul(&e1), two.mul(&e2));
    let r1 = red(&model.rho(0))?;
    let rho1_image_ok = r1.coeffs.len() == 2
        && a.coeffs.iter().chain(b.coeffs.iter()).all(|(k, v)| r1.coeff(k) == *v)
        && a.coeffs.keys().next() != b.coeffs.keys().next();
    let rho_others_vanish = (1..4).map(|i| red(&model.rho(i)).map(|r| r.is_zero())).collect::<Result<Vec<_>>>()?.into_iter().all(|x| x);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut inside, mut failures) = (0, 0);
    for _ in 0..cases {
        let f = pgo8_tuple(&mut rng, &model);
        let rep = pgo8_parity_check(&f)?;
        if rep.in_tstar {
            inside += 1;
        }
        if !(rep.in_tstar && rep.holds && rep.lemma_holds && rep.mod16_constant) {
            failures += 1;
        }
    }
    let dec = compute_dec(&model, invariants::DEFAULT_HEIGHT, DecMode::Both)?;
    let sdec = compute_sdec(&model, &dec, SdecMode::Table)?;
    let elements = compute_sdec(&model, &dec, SdecMode::Elements)?;
    if elements.lattice != sdec.lattice {
        return Err(Error::Mismatch("PGO(8): explicit elements leave Dec".into()));
    }
    Ok(Pgo8Summary {
        rho1_image_ok,
        rho_others_vanish,
        tuples: cases,
        tuples_in_tstar: inside,
        parity_failures: failures,
        dec: dec.hnf_i64(),
        sdec: sdec.hnf_i64(),
    })
}

fn run_pgo8(cases: usize, seed: u64, as_json: bool) -> Result<Outcome> {
    let s = pgo8_summary(cases, seed)?;
    let ok = s.rho1_image_ok && s.rho_others_vanish && s.parity_failures == 0 && s.dec == vec![vec![4]] && s.sdec == s.dec;
    let text = if as_json {
        serde_json::to_string_pretty(&json!({
            "rho1_image": s.rho1_image_ok,
            "rho2_4_vanish": s.rho_others_vanish,
            "tuples": s.tuples,
            "tuples_in_tstar": s.tuples_in_tstar,
            "parity_failures": s.parity_failures,
            "Dec": s.dec,
            "Sdec": s.sdec,
        }))
        .expect("json")
            + "\n"
    } else {
        format!(
            "rho1 -> 2e(e1) + 2e(e2)\t{}\nrho2..4 -> 0\t{}\ntuples\t{} ({} in Z[T*])\nparity failures\t{}\nDec\t{:?}\nSdec\t{:?}\n",
            s.rho1_image_ok, s.rho_others_vanish, s.tuples, s.tuples_in_tstar, s.parity_failures, s.dec, s.sdec
        )
    };
    Ok(Outcome::with_code(text, if ok { 0 } else { 2 }))
}

/// Caps rayon's pool from `WEYL_INV_THREADS`.
pub fn configure_threads() {
    if let Some(n) = std::env::var("WEYL_INV_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

pub fn run(cli: Cli) -> Outcome {
    let res = match cli.command {
        Command::Invariants { spec, out, height, mode, lambda0, show_generators } => {
            run_invariants(&spec, &out, height, mode, lambda0, show_generators)
        }
        Command::Generators { spec, lambda0, json } => run_generators(&spec, lambda0, json),
        Command::Reduce { spec, input, lambda0, json } => run_reduce(&spec, &input, lambda0, json),
        Command::VerifyFlatness { ty, rank } => run_verify_flatness(&ty, rank),
        Command::FuzzSyzygy { cases, seed } => run_fuzz(cases, seed),
        Command::Table { family, max_rank, out, height, mode } => run_table(&family, max_rank, &out, height, mode),
        Command::Pgo8Check { cases, seed, json } => run_pgo8(cases, seed, json),
    };
    res.unwrap_or_else(|e| Outcome { text: format!("error: {e}\n"), code: exit_code(&e), failed: true })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_examples() {
        let s = parse_spec("(SL(8) x SL(8)) / mu(2)").unwrap();
        assert_eq!(s.factors, vec![SimpleFactor::a(7), SimpleFactor::a(7)]);
        assert_eq!(s.kernel, vec![vec![vec![4], vec![4]]]);
        let s = parse_spec("PGO(8)").unwrap();
        assert_eq!(s, pgo8_spec());
        let s = parse_spec("(E6 x E6) / mu(3)[1,2]").unwrap();
        assert_eq!(s.kernel, vec![vec![vec![1], vec![2]]]);
        let s = parse_spec("PGSp(4) x Sp(6)").unwrap();
        assert_eq!(s.kernel, vec![vec![vec![1], vec![0]]]);
        let s = parse_spec("SO(7)").unwrap();
        assert_eq!(s.factors, vec![SimpleFactor::b(3)]);
        let s = parse_spec("(Spin(10) x Spin(14)) / mu(4)").unwrap();
        assert_eq!(s.kernel, vec![vec![vec![1], vec![1]]]);
        let s = parse_spec("(Spin(8) x Spin(12)) / mu(2)[(0,1),1]").unwrap();
        assert_eq!(s.kernel, vec![vec![vec![0, 1], vec![1, 0]]]);
    }

    #[test]
    fn reports_errors_with_positions() {
        match parse_spec("SL(4) x Foo(3)") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 8),
            other => panic!("{other:?}"),
        }
        assert!(parse_spec("(SL(4) x SL(6)) / mu(4)").is_err());
        assert!(parse_spec("(SL(4) x SL(4)) / mu(4)[2,2]").is_err());
        assert!(parse_spec("SL(4) junk").is_err());
    }

    #[test]
    fn printing_round_trips() {
        for text in [
            "SL(2)",
            "(Sp(4) x Sp(4)) / mu(2)",
            "PGO(8)",
            "(E6 x E6) / mu(3)[1,2]",
            "HSpin(16) x SO(9)",
            "(SL(12) x SL(12)) / mu(6)",
            "(Spin(8) x Spin(12)) / mu(2)[(1,1),1] x mu(2)[0,(0,1)]",
            "PGL(4) x Spin(10)",
        ] {
            let s = parse_spec(text).unwrap();
            assert_eq!(parse_spec(&print_spec(&s)).unwrap(), s, "{text}");
        }
    }

    #[test]
    fn sp_pair_invariants() {
        let out = OutputArgs { json: true, tsv: false };
        let o = run_invariants("(Sp(4) x Sp(4))/mu(2)", &out, 4, None, None, false).unwrap();
        let v: Value = serde_json::from_str(&o.text).unwrap();
        assert_eq!(v["inv_ind"]["factors"], json!([2]));
        assert_eq!(v["inv_sd"]["factors"], json!([2]));
    }

    #[test]
    fn simply_connected_is_trivial() {
        let out = OutputArgs { json: true, tsv: false };
        let o = run_invariants("SL(2)", &out, 4, None, None, false).unwrap();
        let v: Value = serde_json::from_str(&o.text).unwrap();
        assert_eq!(v["inv_ind"]["factors"], json!([]));
        assert_eq!(v["Q"]["hnf"], v["Dec"]["hnf"]);
    }
}
