//! Simple objects of E(SL(2,q)): labels, quantum dimensions, twists, parities.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::cyclo::Cyclo;
use crate::error::{parse_err, Error, Result};
use crate::gf::FieldElement;
use crate::sl2::{ClassLabel, Sign, Sl2};

/// Irreducible representations of SL(2,q). `W1, W2, X1, X2` are W', W'', X', X''.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Irrep {
    One,
    V,
    W(u32),
    X(u32),
    W1,
    W2,
    X1,
    X2,
}

impl Irrep {
    /// All irreps in table order for a given h.
    pub fn all(h: u32) -> Vec<Irrep> {
        let mut v = vec![Irrep::One, Irrep::V];
        v.extend((1..2 * h).map(Irrep::W));
        v.extend((1..=2 * h).map(Irrep::X));
        v.extend([Irrep::W1, Irrep::W2, Irrep::X1, Irrep::X2]);
        v
    }
    pub fn dim(self, q: u32) -> u64 {
        let h = (q - 1) / 4;
        (match self {
            Irrep::One => 1,
            Irrep::V => q,
            Irrep::W(_) => q + 1,
            Irrep::X(_) => q - 1,
            Irrep::W1 | Irrep::W2 => 2 * h + 1,
            Irrep::X1 | Irrep::X2 => 2 * h,
        }) as u64
    }
    /// The sign by which -e acts.
    pub fn parity(self) -> Sign {
        match self {
            Irrep::One | Irrep::V | Irrep::W1 | Irrep::W2 => Sign::Plus,
            Irrep::W(s) | Irrep::X(s) => Sign::from_parity(s as i64),
            Irrep::X1 | Irrep::X2 => Sign::Minus,
        }
    }
    pub fn parse(s: &str) -> Result<Irrep> {
        let expected = "irrep `1`, `V`, `W<σ>`, `X<φ>`, `W'`, `W''`, `X'` or `X''`";
        match s {
            "1" => return Ok(Irrep::One),
            "V" => return Ok(Irrep::V),
            "W'" => return Ok(Irrep::W1),
            "W''" => return Ok(Irrep::W2),
            "X'" => return Ok(Irrep::X1),
            "X''" => return Ok(Irrep::X2),
            _ => {}
        }
        if let Some(n) = s.strip_prefix('W') {
            return n.parse().map(Irrep::W).map_err(|_| parse_err(s, expected));
        }
        if let Some(n) = s.strip_prefix('X') {
            return n.parse().map(Irrep::X).map_err(|_| parse_err(s, expected));
        }
        Err(parse_err(s, expected))
    }
}

impl fmt::Display for Irrep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Irrep::One => write!(f, "1"),
            Irrep::V => write!(f, "V"),
            Irrep::W(s) => write!(f, "W{s}"),
            Irrep::X(s) => write!(f, "X{s}"),
            Irrep::W1 => write!(f, "W'"),
            Irrep::W2 => write!(f, "W''"),
            Irrep::X1 => write!(f, "X'"),
            Irrep::X2 => write!(f, "X''"),
        }
    }
}

/// Tag of a simple object U(x, ρ).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum SimpleLabel {
    Central { mu: Sign, irrep: Irrep },
    A { k: u32, u: u32 },
    B { mu: Sign, eps: Sign, nu: Sign, v: FieldElement },
    C { l: u32, w: u32 },
}

impl SimpleLabel {
    pub fn unit() -> SimpleLabel {
        SimpleLabel::Central { mu: Sign::Plus, irrep: Irrep::One }
    }
    pub fn support(&self) -> ClassLabel {
        match *self {
            SimpleLabel::Central { mu, .. } => ClassLabel::Central(mu),
            SimpleLabel::A { k, .. } => ClassLabel::A(k),
            SimpleLabel::B { mu, eps, .. } => ClassLabel::B(mu, eps),
            SimpleLabel::C { l, .. } => ClassLabel::C(l),
        }
    }
    pub fn is_central(&self) -> bool {
        matches!(self, SimpleLabel::Central { .. })
    }
    pub fn parity(&self) -> Sign {
        match *self {
            SimpleLabel::Central { irrep, .. } => irrep.parity(),
            SimpleLabel::A { u, .. } => Sign::from_parity(u as i64),
            SimpleLabel::B { nu, .. } => nu,
            SimpleLabel::C { w, .. } => Sign::from_parity(w as i64),
        }
    }
    /// Every simple object is self-dual.
    pub fn dual(&self) -> SimpleLabel {
        *self
    }
}

#[derive(Clone, Debug)]
pub struct SimpleData {
    pub label: SimpleLabel,
    pub qdim: u64,
    pub twist: Cyclo,
    pub parity: Sign,
    pub support: ClassLabel,
}

/// Twist of B_{μ,ε}^{ν,v} from the summary twist table, μν ζ_p^{tr(e^έ v)}.
/// The homomorphism convention gives ν^{[μ=-]} ζ_p^{tr(e^έ v)} instead.
pub fn table_twist_b(g: &Sl2, mu: Sign, eps: Sign, nu: Sign, v: FieldElement) -> Cyclo {
    let fp = &g.field;
    let t = fp.trace_to_prime(fp.base.mul(fp.e_pow(eps.acute() as i64), v));
    Cyclo::root_of_unity(fp.p, t as i64).scale(((mu * nu).value() as i128).into())
}

#[derive(Clone, Debug)]
pub struct Catalog {
    q: u32,
    p: u32,
    entries: Vec<SimpleData>,
    index: HashMap<SimpleLabel, usize>,
    text: Vec<String>,
}

impl Catalog {
    pub fn build(g: &Sl2) -> Catalog {
        let fp = &g.field;
        let (q, h) = (fp.q, fp.h);
        let mut labels = Vec::new();
        for mu in Sign::BOTH {
            for irrep in Irrep::all(h) {
                labels.push(SimpleLabel::Central { mu, irrep });
            }
        }
        for k in 1..2 * h {
            for u in 1..q {
                labels.push(SimpleLabel::A { k, u });
            }
        }
        for mu in Sign::BOTH {
            for eps in Sign::BOTH {
                for nu in Sign::BOTH {
                    for v in fp.base.elements() {
                        labels.push(SimpleLabel::B { mu, eps, nu, v });
                    }
                }
            }
        }
        for l in 1..=2 * h {
            for w in 1..=q + 1 {
                labels.push(SimpleLabel::C { l, w });
            }
        }
        let entries: Vec<SimpleData> = labels.iter().map(|&l| simple_data(g, l)).collect();
        let index = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let text = labels.iter().map(|&l| format_label(g, l)).collect();
        Catalog { q, p: fp.p, entries, index, text }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
    pub fn entries(&self) -> &[SimpleData] {
        &self.entries
    }
    pub fn labels(&self) -> impl Iterator<Item = SimpleLabel> + '_ {
        self.entries.iter().map(|d| d.label)
    }
    pub fn index(&self, label: &SimpleLabel) -> Option<usize> {
        self.index.get(label).copied()
    }
    pub fn get(&self, label: &SimpleLabel) -> Option<&SimpleData> {
        self.index(label).map(|i| &self.entries[i])
    }
    pub fn data(&self, i: usize) -> &SimpleData {
        &self.entries[i]
    }
    pub fn text(&self, i: usize) -> &str {
        &self.text[i]
    }
    pub fn name(&self, label: &SimpleLabel) -> &str {
        &self.text[self.index(label).expect("label in catalogue")]
    }
    pub fn q(&self) -> u32 {
        self.q
    }
    pub fn characteristic(&self) -> u32 {
        self.p
    }
    /// Σ d_U².
    pub fn sum_dim_squares(&self) -> u128 {
        self.entries.iter().map(|d| (d.qdim as u128).pow(2)).sum()
    }
}

/// Expected catalogue size 2(q+4) + (2h-1)(q-1) + 8q + 2h(q+1).
pub fn expected_size(q: u64) -> u64 {
    let h = (q - 1) / 4;
    2 * (q + 4) + (2 * h - 1) * (q - 1) + 8 * q + 2 * h * (q + 1)
}

fn simple_data(g: &Sl2, label: SimpleLabel) -> SimpleData {
    let fp = &g.field;
    let q = fp.q as u64;
    let (qdim, twist) = match label {
        SimpleLabel::Central { mu, irrep } => {
            let s = if mu == Sign::Minus { irrep.parity().value() } else { 1 };
            (irrep.dim(fp.q), Cyclo::from_int(s))
        }
        SimpleLabel::A { k, u } => (q * (q + 1), Cyclo::root_of_unity(fp.q - 1, (k * u) as i64)),
        SimpleLabel::B { mu, eps, nu, v } => {
            let t = fp.trace_to_prime(fp.base.mul(fp.e_pow(eps.acute() as i64), v));
            let sign = if mu == Sign::Minus { nu.value() } else { 1 };
            ((q * q - 1) / 2, Cyclo::root_of_unity(fp.p, t as i64).scale((sign as i128).into()))
        }
        SimpleLabel::C { l, w } => (q * (q - 1), Cyclo::root_of_unity(fp.q + 1, (l * w) as i64)),
    };
    SimpleData { label, qdim, twist, parity: label.parity(), support: label.support() }
}

/// Text form: `E:+:V`, `A:1:2`, `B:+:-:+:3`, `C:1:1`.
pub fn format_label(g: &Sl2, label: SimpleLabel) -> String {
    match label {
        SimpleLabel::Central { mu, irrep } => format!("E:{mu}:{irrep}"),
        SimpleLabel::A { k, u } => format!("A:{k}:{u}"),
        SimpleLabel::B { mu, eps, nu, v } => format!("B:{mu}:{eps}:{nu}:{}", g.field.base.format(v)),
        SimpleLabel::C { l, w } => format!("C:{l}:{w}"),
    }
}

fn window(what: &str, value: impl fmt::Display, lo: u32, hi: u32) -> Error {
    Error::OutOfRange { what: what.to_string(), value: value.to_string(), window: format!("[{lo}, {hi}]") }
}

/// Parses and range-checks a label.
pub fn parse_label(g: &Sl2, s: &str) -> Result<SimpleLabel> {
    let grammar = "label `E:<+|->:<irrep>`, `A:<k>:<u>`, `B:<μ>:<ε>:<ν>:<v>` or `C:<ℓ>:<w>`";
    let (q, h) = (g.q(), g.h());
    let parts: Vec<&str> = s.trim().split(':').collect();
    let num = |t: &str| t.parse::<u32>().map_err(|_| parse_err(t, "a non-negative integer"));
    let check = |what: &str, v: u32, lo: u32, hi: u32| {
        if (lo..=hi).contains(&v) {
            Ok(v)
        } else {
            Err(window(what, v, lo, hi))
        }
    };
    match parts.as_slice() {
        ["E", mu, irrep] => {
            let irrep = Irrep::parse(irrep)?;
            match irrep {
                Irrep::W(s) => {
                    check("σ", s, 1, 2 * h - 1)?;
                }
                Irrep::X(s) => {
                    check("φ", s, 1, 2 * h)?;
                }
                _ => {}
            }
            Ok(SimpleLabel::Central { mu: mu.parse()?, irrep })
        }
        ["A", k, u] => Ok(SimpleLabel::A { k: check("k", num(k)?, 1, 2 * h - 1)?, u: check("u", num(u)?, 1, q - 1)? }),
        ["B", mu, eps, nu, v] => Ok(SimpleLabel::B {
            mu: mu.parse()?,
            eps: eps.parse()?,
            nu: nu.parse()?,
            v: g.field.base.parse(v)?,
        }),
        ["C", l, w] => Ok(SimpleLabel::C { l: check("ℓ", num(l)?, 1, 2 * h)?, w: check("w", num(w)?, 1, q + 1)? }),
        _ => Err(parse_err(s, grammar)),
    }
}

/// Serializable catalogue row.
#[derive(Serialize)]
pub struct CatalogRow<'a> {
    pub label: &'a str,
    pub support: String,
    pub qdim: u64,
    pub parity: char,
    pub twist: &'a Cyclo,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table_twist: Option<Cyclo>,
}

impl Catalog {
    pub fn rows<'a>(&'a self, g: &Sl2) -> Vec<CatalogRow<'a>> {
        self.entries
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let closed = match d.label {
                    SimpleLabel::B { mu, eps, nu, v } => {
                        let t = table_twist_b(g, mu, eps, nu, v);
                        (t != d.twist).then_some(t)
                    }
                    _ => None,
                };
                CatalogRow {
                    label: &self.text[i],
                    support: d.support.to_string(),
                    qdim: d.qdim,
                    parity: d.parity.symbol(),
                    twist: &d.twist,
                    table_twist: closed,
                }
            })
            .collect()
    }
}
