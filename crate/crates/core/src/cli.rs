//! Command-line front end: argument parsing, the verification suites and output rendering.
//!
//! [`run`] never touches the process environment or stdout, so tests can drive it directly.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::braid::{pair_reports, sweep};
use crate::catalog::{expected_size, Irrep, SimpleLabel};
use crate::chars::{char_of, inner, oracle_fuse, restriction_from_characters, restriction_table, Subgroup};
use crate::context::Mtc;
use crate::cyclo::{sqrt_q, Cyclo, Rational};
use crate::dw::{dw_crosscheck, dw_invariant, Manifold};
use crate::error::Error;
use crate::fusion::{compare_all, fuse, fuse_blocks, BlockCase, Scope};
use crate::gf::make_field;
use crate::modular::{check_relations, verlinde_vs_oracle, ModularData};
use crate::sl2::{ClassLabel, Sign};

pub const SCHEMA: &str = "mtc-dsl2q/1";

#[derive(Parser, Debug)]
#[command(name = "sl2q-mtc", version, about = "Modular data of the quantum double of SL(2,q)")]
pub struct Cli {
    #[arg(long, value_enum, default_value = "json", global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the simple objects.
    Catalogue { q: u64 },
    /// Closed-form fusion of two simples.
    Fuse {
        q: u64,
        x1: String,
        x2: String,
        /// Also run the character oracle and print the difference.
        #[arg(long)]
        oracle: bool,
    },
    /// Braiding checks on the support blocks of X₁⊗X₂.
    Braid {
        q: u64,
        x1: String,
        x2: String,
        /// Restrict to one block, e.g. `+e` or `a^2`.
        #[arg(long)]
        block: Option<String>,
    },
    /// S and T matrices.
    Smatrix { q: u64 },
    /// Run verification suites.
    Verify {
        q: u64,
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Dijkgraaf-Witten invariant of s3, s2xs1, t3, lens:<p>:1 or sigma:<g>xs1.
    Dw { q: u64, manifold: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Suite {
    Fields,
    Chars,
    Fusion,
    Braid,
    Modular,
    Dw,
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Fields => "fields",
            Suite::Chars => "chars",
            Suite::Fusion => "fusion",
            Suite::Braid => "braid",
            Suite::Modular => "modular",
            Suite::Dw => "dw",
            Suite::All => "all",
        }
    }
}

/// Exit status and captured streams of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// One named check of a verification suite.
#[derive(Clone, Debug)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub pass: bool,
    pub detail: Value,
}

impl Check {
    fn new(suite: &'static str, name: impl Into<String>, pass: bool, detail: Value) -> Check {
        Check { suite, name: name.into(), pass, detail }
    }
    fn to_json(&self) -> Value {
        json!({ "suite": self.suite, "name": self.name, "pass": self.pass, "detail": self.detail })
    }
}

pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Output { code, stdout: text, stderr: String::new() }
            } else {
                Output { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match execute(&cli) {
        Ok((ok, stdout)) => Output { code: if ok { 0 } else { 1 }, stdout, stderr: String::new() },
        Err(e) => {
            let code = match e {
                Error::Parse { .. } | Error::OutOfRange { .. } | Error::InvalidOrder { .. } | Error::BlockAbsent { .. } => 2,
                _ => 1,
            };
            Output { code, stdout: String::new(), stderr: format!("error: {e}\n") }
        }
    }
}

fn envelope(command: &str, q: u64, body: Value) -> Value {
    let mut v = json!({ "schema": SCHEMA, "command": command, "q": q });
    if let (Value::Object(dst), Value::Object(src)) = (&mut v, body) {
        dst.extend(src);
    }
    v
}

fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

fn execute(cli: &Cli) -> crate::Result<(bool, String)> {
    let fmt = cli.format;
    match &cli.command {
        Command::Catalogue { q } => {
            let m = Mtc::new(*q)?;
            let rows = m.catalog.rows(&m.group);
            let out = match fmt {
                Format::Json => render_json(&envelope("catalogue", *q, json!({ "count": rows.len(), "simples": rows }))),
                Format::Csv => {
                    let mut s = String::from("label,support,qdim,parity,twist\n");
                    for r in &rows {
                        let _ = writeln!(s, "{},{},{},{},{}", r.label, r.support, r.qdim, r.parity, r.twist);
                    }
                    s
                }
                Format::Text => {
                    let mut s = format!("q = {q}: {} simple objects\n", rows.len());
                    for r in &rows {
                        let _ = writeln!(s, "{:<14} support {:<6} d = {:<6} parity {} twist {}", r.label, r.support, r.qdim, r.parity, r.twist);
                    }
                    s
                }
            };
            Ok((true, out))
        }
        Command::Fuse { q, x1, x2, oracle } => {
            let m = Mtc::new(*q)?;
            let (a, b) = (m.parse(x1)?, m.parse(x2)?);
            let closed = fuse(&m, &a, &b)?;
            let orc = if *oracle { Some(oracle_fuse(&m, &a, &b)?) } else { None };
            let mut diff = Vec::new();
            if let Some(o) = &orc {
                let keys: BTreeSet<String> =
                    closed.named_terms(&m).into_iter().chain(o.named_terms(&m)).map(|(s, _)| s).collect();
                for k in keys {
                    let w = m.parse(&k)?;
                    let (c, r) = (closed.get(&w), o.get(&w));
                    if c != r {
                        diff.push((k, c, r));
                    }
                }
            }
            let ok = diff.is_empty();
            let out = match fmt {
                Format::Json => {
                    let mut body = json!({ "pair": [x1, x2], "closed_form": closed.named_terms(&m) });
                    if let Some(o) = &orc {
                        body["oracle"] = json!(o.named_terms(&m));
                        body["diff"] = json!(diff.iter().map(|(k, c, r)| json!({"label": k, "closed_form": c, "oracle": r})).collect::<Vec<_>>());
                    }
                    render_json(&envelope("fuse", *q, body))
                }
                Format::Csv => {
                    let mut s = String::from(if orc.is_some() { "label,closed_form,oracle\n" } else { "label,closed_form\n" });
                    for (k, n) in closed.named_terms(&m) {
                        match &orc {
                            Some(o) => {
                                let _ = writeln!(s, "{k},{n},{}", o.get(&m.parse(&k)?));
                            }
                            None => {
                                let _ = writeln!(s, "{k},{n}");
                            }
                        }
                    }
                    for (k, c, r) in diff.iter().filter(|(_, c, _)| *c == 0) {
                        let _ = writeln!(s, "{k},{c},{r}");
                    }
                    s
                }
                Format::Text => {
                    let terms: Vec<String> = closed.named_terms(&m).iter().map(|(k, n)| if *n == 1 { k.clone() } else { format!("{n}·{k}") }).collect();
                    let mut s = format!("{x1} ⊗ {x2} = {}\n", terms.join(" + "));
                    if orc.is_some() {
                        if diff.is_empty() {
                            s.push_str("oracle: identical\n");
                        }
                        for (k, c, r) in &diff {
                            let _ = writeln!(s, "oracle differs at {k}: closed form {c}, oracle {r}");
                        }
                    }
                    s
                }
            };
            Ok((ok, out))
        }
        Command::Braid { q, x1, x2, block } => {
            let m = Mtc::new(*q)?;
            let (a, b) = (m.parse(x1)?, m.parse(x2)?);
            let mut reps = pair_reports(&m, &a, &b)?;
            if let Some(bl) = block {
                let want = m.group.validate_class(ClassLabel::parse(bl)?)?.to_string();
                reps.retain(|r| r.block == want);
                if reps.is_empty() {
                    return Err(Error::BlockAbsent { x1: x1.clone(), x2: x2.clone(), block: bl.clone() });
                }
            }
            let ok = reps.iter().all(|r| r.double_braiding_ok() && r.trace_ok != Some(false));
            let out = match fmt {
                Format::Json => render_json(&envelope("braid", *q, json!({ "pair": [x1, x2], "blocks": reps }))),
                Format::Csv => {
                    let mut s = String::from("block,fiber_dim,double_braiding_ok,single_trace,closed_form_trace,trace_ok\n");
                    for r in &reps {
                        let opt = |z: &Option<Cyclo>| z.as_ref().map_or(String::new(), |z| z.to_string());
                        let _ = writeln!(
                            s,
                            "{},{},{},{},{},{}",
                            r.block,
                            r.fiber_dim,
                            r.double_braiding_ok(),
                            opt(&r.single_trace),
                            opt(&r.closed_form_trace),
                            r.trace_ok.map_or(String::new(), |b| b.to_string())
                        );
                    }
                    s
                }
                Format::Text => {
                    let mut s = String::new();
                    for r in &reps {
                        let _ = writeln!(s, "block {} (fiber dim {}): double braiding {}", r.block, r.fiber_dim, if r.double_braiding_ok() { "ok" } else { "FAIL" });
                        if let (Some(t), Some(p)) = (&r.single_trace, &r.closed_form_trace) {
                            let _ = writeln!(s, "  single-braid trace {t}, closed form {p}");
                        }
                    }
                    s
                }
            };
            Ok((ok, out))
        }
        Command::Smatrix { q } => {
            let m = Mtc::new(*q)?;
            let md = ModularData::build(&m);
            let out = match fmt {
                Format::Json => render_json(&envelope("smatrix", *q, md.to_json(&m))),
                Format::Csv => {
                    let mut s = String::from("row,col,value\n");
                    for u in 0..md.len() {
                        for v in 0..md.len() {
                            if !md.s(u, v).is_zero() {
                                let _ = writeln!(s, "{},{},{}", m.name(&md.labels[u]), m.name(&md.labels[v]), md.s(u, v));
                            }
                        }
                    }
                    s
                }
                Format::Text => {
                    let mut s = String::new();
                    for u in 0..md.len() {
                        let _ = writeln!(s, "{}: T = {}", m.name(&md.labels[u]), md.t[u]);
                        for v in 0..md.len() {
                            if !md.s(u, v).is_zero() {
                                let _ = writeln!(s, "  S[{}] = {}", m.name(&md.labels[v]), md.s(u, v));
                            }
                        }
                    }
                    s
                }
            };
            Ok((true, out))
        }
        Command::Verify { q, suite, seed } => {
            let checks = verify(*q, *suite, *seed)?;
            let ok = checks.iter().all(|c| c.pass);
            let out = match fmt {
                Format::Json => render_json(&envelope(
                    "verify",
                    *q,
                    json!({
                        "suite": suite.name(),
                        "seed": seed,
                        "pass": ok,
                        "checks": checks.iter().map(Check::to_json).collect::<Vec<_>>(),
                    }),
                )),
                Format::Csv => {
                    let mut s = format!("# seed {seed}\nsuite,check,pass\n");
                    for c in &checks {
                        let _ = writeln!(s, "{},{},{}", c.suite, c.name, c.pass);
                    }
                    s
                }
                Format::Text => {
                    let mut s = format!("verify q={q} suite={} seed={seed}\n", suite.name());
                    for c in &checks {
                        let _ = writeln!(s, "[{}] {}/{}: {}", if c.pass { "PASS" } else { "FAIL" }, c.suite, c.name, c.detail);
                    }
                    let _ = writeln!(s, "{}", if ok { "all checks passed" } else { "some checks FAILED" });
                    s
                }
            };
            Ok((ok, out))
        }
        Command::Dw { q, manifold } => {
            let m = Mtc::new(*q)?;
            let man: Manifold = manifold.parse()?;
            let value = dw_invariant(&m, man);
            let cross = match man {
                Manifold::S3 => None,
                _ => Some(dw_crosscheck(&m, &ModularData::build(&m), man)),
            };
            let ok = cross.as_ref().is_none_or(|c| c.ok());
            let out = match fmt {
                Format::Json => render_json(&envelope("dw", *q, json!({ "manifold": man.to_string(), "value": value.to_string(), "crosscheck": cross }))),
                Format::Csv => {
                    let (md, eq) = cross.as_ref().map_or((String::new(), String::new()), |c| {
                        (c.modular.clone().unwrap_or_default(), c.equal.map_or(String::new(), |b| b.to_string()))
                    });
                    format!("manifold,counting,modular,equal\n{man},{value},{md},{eq}\n")
                }
                Format::Text => format!("{value}\n"),
            };
            Ok((ok, out))
        }
    }
}

/// Runs one suite (or all of them) and returns every check in a fixed order.
pub fn verify(q: u64, suite: Suite, seed: u64) -> crate::Result<Vec<Check>> {
    let fp = make_field(q)?;
    let mut out = Vec::new();
    let wants = |s: Suite| suite == Suite::All || suite == s;
    if wants(Suite::Fields) {
        out.extend(fields_suite(&fp));
    }
    if suite == Suite::Fields {
        return Ok(out);
    }
    let m = Mtc::new(q)?;
    if wants(Suite::Chars) {
        out.extend(chars_suite(&m));
    }
    if wants(Suite::Fusion) {
        out.extend(fusion_suite(&m, seed));
    }
    if wants(Suite::Braid) {
        out.extend(braid_suite(&m, seed));
    }
    let md = (wants(Suite::Modular) || wants(Suite::Dw)).then(|| ModularData::build(&m));
    if wants(Suite::Modular) {
        out.extend(modular_suite(&m, md.as_ref().expect("built"), seed));
    }
    if wants(Suite::Dw) {
        out.extend(dw_suite(&m, md.as_ref().expect("built")));
    }
    Ok(out)
}

fn fields_suite(fp: &crate::gf::FieldParams) -> Vec<Check> {
    let s = "fields";
    let (b, ext) = (&fp.base, &fp.ext);
    let q = fp.q as i64;
    let mut out = Vec::new();
    let g = fp.check_gen();
    let full = ext.pow(g, q * q - 1) == ext.one();
    let primitive = full
        && prime_factors((q * q - 1) as u64).iter().all(|&r| ext.pow(g, (q * q - 1) / r as i64) != ext.one());
    out.push(Check::new(s, "extension generator has order q^2-1", primitive, json!({ "q": q })));
    let e = fp.e();
    let e_prim = prime_factors((q - 1) as u64).iter().all(|&r| b.pow(e, (q as u64 - 1) / r) != b.one());
    out.push(Check::new(s, "e generates F_q^x and is a non-square", e_prim && fp.is_square(e) == Ok(false), json!(null)));
    let f_ok = ext.pow(fp.f(), q + 1) == ext.one() && fp.norm(fp.f()) == b.one() && ext.pow(fp.f(), 2 * fp.h as i64 + 1) == ext.neg(ext.one());
    out.push(Check::new(s, "f has norm 1 and order q+1", f_ok, json!(null)));
    let squares: BTreeSet<_> = b.elements().filter(|x| !x.is_zero()).map(|x| b.mul(x, x)).collect();
    let sq_ok = squares.len() as i64 == (q - 1) / 2
        && b.elements().filter(|y| !y.is_zero()).all(|y| fp.is_square(y) == Ok(squares.contains(&y)));
    out.push(Check::new(s, "square classes", sq_ok, json!({ "squares": squares.len() })));
    let mut hit = vec![false; fp.p as usize];
    let mut linear = true;
    for x in b.elements() {
        hit[fp.trace_to_prime(x) as usize] = true;
        let y = b.mul(x, fp.e());
        linear &= fp.trace_to_prime(b.add(x, y)) == (fp.trace_to_prime(x) + fp.trace_to_prime(y)) % fp.p;
    }
    out.push(Check::new(s, "trace to F_p is additive and onto", linear && hit.iter().all(|&h| h), json!(null)));
    let r = sqrt_q(fp);
    out.push(Check::new(s, "sqrt(q) squares to q", r.pow(2) == Cyclo::from_int(q) && r.to_complex().0 > 0.0, json!(r.to_string())));
    out
}

fn prime_factors(n: u64) -> Vec<u64> {
    crate::cyclo::prime_powers(n as u32).into_iter().map(|(p, _)| p as u64).collect()
}

fn chars_suite(m: &Mtc) -> Vec<Check> {
    let s = "chars";
    let g = &m.group;
    let mut out = Vec::new();
    let sum_sq = m.catalog.sum_dim_squares();
    let size_ok = m.catalog.len() as u64 == expected_size(m.q() as u64) && sum_sq == (g.order() as u128).pow(2);
    out.push(Check::new(s, "catalogue size and sum of d^2", size_ok, json!({ "simples": m.catalog.len(), "sum_d2": sum_sq.to_string(), "order": g.order() })));

    let sizes: Vec<i128> = (0..g.num_classes()).map(|c| g.member_indices(c).len() as i128).collect();
    let irreps = m.table.irreps().to_vec();
    let mut rows_ok = irreps.len() == g.num_classes();
    for &r in &irreps {
        for &t in &irreps {
            let mut acc = Cyclo::zero();
            for (c, &n) in sizes.iter().enumerate() {
                acc += &(m.table.value(r, c) * &m.table.value(t, c).conj()).scale(Rational::from_integer(n));
            }
            rows_ok &= acc == Cyclo::from_int(if r == t { g.order() as i64 } else { 0 });
        }
    }
    let mut cols_ok = true;
    for c1 in 0..g.num_classes() {
        for c2 in 0..g.num_classes() {
            let mut acc = Cyclo::zero();
            for &r in &irreps {
                acc += &(m.table.value(r, c1) * &m.table.value(r, c2).conj());
            }
            cols_ok &= acc == Cyclo::from_int(if c1 == c2 { g.order() as i64 / sizes[c1] as i64 } else { 0 });
        }
    }
    out.push(Check::new(s, "character table orthogonality", rows_ok && cols_ok, json!({ "irreps": irreps.len() })));

    let mut bad = Vec::new();
    for &r in &irreps {
        if r == Irrep::One {
            continue;
        }
        for sub in [Subgroup::Split, Subgroup::Unipotent, Subgroup::Nonsplit] {
            if restriction_table(m, r, sub, true) != Some(restriction_from_characters(m, r, sub)) {
                bad.push(format!("{r}/{sub:?}"));
            }
        }
    }
    out.push(Check::new(s, "restriction tables", bad.is_empty(), json!({ "mismatches": bad })));

    let labels: Vec<SimpleLabel> = m.catalog.labels().collect();
    let chars: Vec<_> = labels.iter().map(|l| char_of(m, l)).collect();
    let mut bad = Vec::new();
    for c in 0..g.num_classes() {
        let on: &[usize] = m.simples_on(c);
        for &i in on {
            for &j in on {
                let want = if i == j { Cyclo::one() } else { Cyclo::zero() };
                if inner(m, &chars[i].values, &chars[j].values) != want {
                    bad.push(format!("{},{}", m.name(&labels[i]), m.name(&labels[j])));
                }
            }
        }
    }
    let count_ok = m.orbits.len() == labels.len();
    out.push(Check::new(s, "D(G) characters orthonormal", bad.is_empty() && count_ok, json!({ "characters": labels.len(), "failures": bad.len() })));
    out
}

/// The d=0 A⊗A block and the ν=− C⊗C block with |d| = 2h+1.
pub fn spot_values(m: &Mtc) -> Vec<Check> {
    let s = "fusion";
    let h = m.h();
    let q = m.q();
    let plus = ClassLabel::Central(Sign::Plus);
    let mut out = Vec::new();
    let (a1, a2) = (SimpleLabel::A { k: 1, u: 2 }, SimpleLabel::A { k: 1, u: 2 });
    let blk = fuse_blocks(m, &a1, &a2).ok().and_then(|bs| bs.into_iter().find(|b| b.block == plus));
    let expect: Vec<(String, u64)> = {
        let mut v = vec![("E:+:1".to_string(), 1), ("E:+:V".into(), 3), ("E:+:W'".into(), 1 + u64::from(2 * h == q - 1)), ("E:+:W''".into(), 1 + u64::from(2 * h == q - 1))];
        for sg in (2..2 * h).step_by(2) {
            v.push((format!("E:+:W{sg}"), 2));
        }
        for ph in (2..=2 * h).step_by(2) {
            v.push((format!("E:+:X{ph}"), 2));
        }
        v.sort();
        v
    };
    let (got, oracle_ok) = match &blk {
        Some(b) => (b.vector.named_terms(m), oracle_fuse(m, &a1, &a2).map(|o| o.restrict(plus) == b.vector).unwrap_or(false)),
        None => (Vec::new(), false),
    };
    out.push(Check::new(
        s,
        format!("{}⊗{} block at +e (d=0)", m.name(&a1), m.name(&a2)),
        got == expect && oracle_ok && matches!(blk.map(|b| b.case), Some(BlockCase::CentralA { d: 0 })),
        json!({ "block": got }),
    ));

    // ν = −, μ = +: w₁ − w₂ = 2h+1
    let (c1, c2) = (SimpleLabel::C { l: 1, w: 2 * h + 2 }, SimpleLabel::C { l: 1, w: 1 });
    let blk = fuse_blocks(m, &c1, &c2).ok().and_then(|bs| bs.into_iter().find(|b| b.block == plus));
    let (ok, got) = match &blk {
        Some(b) => {
            let odd = b.vector.iter().all(|(w, _)| match w {
                SimpleLabel::Central { irrep: Irrep::W(i) | Irrep::X(i), .. } => i % 2 == 1,
                _ => false,
            });
            let orc = oracle_fuse(m, &c1, &c2).map(|o| o.restrict(plus) == b.vector).unwrap_or(false);
            (odd && orc && !b.vector.is_empty() && b.case == BlockCase::CentralC { d: 2 * h + 1 }, b.vector.named_terms(m))
        }
        None => (false, Vec::new()),
    };
    out.push(Check::new(s, "C⊗C block at +e with nu=- and |d|=2h+1", ok, json!({ "pair": [m.name(&c1), m.name(&c2)], "block": got })));
    out
}

fn fusion_suite(m: &Mtc, seed: u64) -> Vec<Check> {
    let s = "fusion";
    let scope = if m.q() == 5 { Scope::AllPairs } else { Scope::Sample { n: 500, seed } };
    let r = compare_all(m, &scope);
    let mut out = vec![Check::new(
        s,
        if m.q() == 5 { "closed form = oracle, all pairs".to_string() } else { "closed form = oracle, 500 seeded pairs".to_string() },
        r.ok(),
        json!({ "pairs": r.pairs, "central_first_factor": r.delegated, "mismatches": r.mismatches.len(), "errors": r.errors }),
    )];
    out.extend(spot_values(m));
    out
}

fn braid_suite(m: &Mtc, seed: u64) -> Vec<Check> {
    let s = "braid";
    let nc: Vec<SimpleLabel> = m.catalog.labels().filter(|l| !l.is_central()).collect();
    let all: Vec<_> = nc.iter().flat_map(|&a| nc.iter().map(move |&b| (a, b))).collect();
    let (pairs, scope) = if m.q() == 5 {
        (all, "all non-central pairs".to_string())
    } else {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut idx = rand::seq::index::sample(&mut rng, all.len(), 300.min(all.len())).into_vec();
        idx.sort_unstable();
        let mut p: Vec<_> = idx.into_iter().map(|i| all[i]).collect();
        p.extend(nc.iter().map(|&l| (l, l)));
        p.sort();
        p.dedup();
        (p, "300 seeded pairs plus all diagonal pairs".to_string())
    };
    let r = sweep(m, &pairs);
    let first = |v: &[crate::braid::BraidBlockReport]| v.first().map(|r| json!({ "pair": r.pair, "block": r.block }));
    vec![
        Check::new(
            s,
            format!("double braiding eigenvalues and multiplicities, {scope}"),
            r.double_braiding_ok(),
            json!({ "pairs": r.pairs, "blocks": r.blocks, "failures": r.double_braiding_failures.len(), "first_failure": first(&r.double_braiding_failures), "errors": r.errors }),
        ),
        Check::new(
            s,
            "single-braid block traces = closed form",
            r.traces_ok(),
            json!({
                "blocks_compared": r.traces_compared,
                "failures": r.trace_failures.len(),
                "first_failure": first(&r.trace_failures),
                "literal_formula_failures": r.literal_trace_failures,
            }),
        ),
    ]
}

fn modular_suite(m: &Mtc, md: &ModularData, seed: u64) -> Vec<Check> {
    let s = "modular";
    let r = check_relations(m, md);
    let mut out = vec![
        Check::new(s, "unit row S_1V = d_V/|G| and sum S_1V^2 = 1", r.unit_row && r.global_dimension, json!(null)),
        Check::new(s, "S symmetric", r.symmetric, json!(null)),
        Check::new(s, "S unitary", r.unitary, json!(null)),
        Check::new(s, "S^2 = identity permutation", r.s_squared_identity, json!(null)),
        Check::new(
            s,
            "(ST)^3 = lambda S^2, lambda a root of unity",
            r.lambda_root_of_unity,
            json!({ "lambda": r.lambda.as_ref().map(|z| z.to_string()), "table_b_twists_consistent": r.alternative_b_twists_consistent }),
        ),
    ];
    let n = md.len();
    let (pairs, scope): (Vec<(usize, usize)>, String) = if m.q() == 5 {
        ((0..n).flat_map(|u| (0..n).map(move |v| (u, v))).collect(), "all pairs".into())
    } else {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut idx = rand::seq::index::sample(&mut rng, n * n, 200.min(n * n)).into_vec();
        idx.sort_unstable();
        (idx.into_iter().map(|i| (i / n, i % n)).collect(), "200 seeded pairs".into())
    };
    let bad = verlinde_vs_oracle(m, md, &pairs);
    out.push(Check::new(s, format!("Verlinde = oracle, {scope}"), bad.is_empty(), json!({ "pairs": pairs.len(), "mismatches": bad })));
    out
}

fn dw_suite(m: &Mtc, md: &ModularData) -> Vec<Check> {
    let s = "dw";
    let order = m.group.order() as i128;
    let mut out = vec![
        Check::new(s, "Z(S2xS1) = 1", dw_invariant(m, Manifold::S2xS1) == Rational::from_integer(1), json!(null)),
        Check::new(s, "Z(S3) = 1/|G|", dw_invariant(m, Manifold::S3) == Rational::new(1, order), json!(null)),
    ];
    let t3 = dw_invariant(m, Manifold::T3);
    out.push(Check::new(s, "Z(T3) = catalogue size", t3 == Rational::from_integer(m.catalog.len() as i128), json!(t3.to_string())));
    let mut list: Vec<Manifold> = (0..=3).map(Manifold::SigmaGxS1).collect();
    list.extend([2, 3, 5, 7].map(Manifold::Lens));
    for man in list {
        let r = dw_crosscheck(m, md, man);
        out.push(Check::new(s, format!("{man}: counting = modular"), r.equal == Some(true), json!(r)));
    }
    out
}
