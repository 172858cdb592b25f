//! Characters of SL(2,q) and of D(SL(2,q)), the character pairing, and the
//! brute-force fusion oracle.

use std::collections::BTreeMap;
use std::ops::Range;

use crate::catalog::{Irrep, SimpleLabel};
use crate::context::Mtc;
use crate::cyclo::{root_sum, sqrt_q, Cyclo, CycloAcc, Rational};
use crate::error::Result;
use crate::fusion::FusionVector;
use crate::sl2::{CenCoord, ClassLabel, GroupElement, Sign, Sl2};

/// Sparse integer combination of powers of ζ_L; not reduced.
pub type RootSum = Vec<(u32, i64)>;

/// The ordinary character table of SL(2,q).
pub struct CharTable {
    irreps: Vec<Irrep>,
    values: Vec<Vec<Cyclo>>,
    twice: Vec<Vec<RootSum>>,
}

fn table_value(g: &Sl2, sq: &Cyclo, r: Irrep, class: ClassLabel) -> Cyclo {
    let q = g.q() as i64;
    let h = g.h() as i64;
    let int = Cyclo::from_int;
    let half = Rational::new(1, 2);
    let s = |eps: Sign| match eps {
        Sign::Plus => (&int(1) + sq).scale(half),
        Sign::Minus => (&int(1) - sq).scale(half),
    };
    let pow = |mu: Sign, k: i64| if mu == Sign::Minus && k % 2 != 0 { -1 } else { 1 };
    let cos = |n: u32, k: i64| &Cyclo::root_of_unity(n, k) + &Cyclo::root_of_unity(n, -k);
    use ClassLabel::*;
    match (r, class) {
        (Irrep::One, _) => int(1),
        (Irrep::V, Central(_)) => int(q),
        (Irrep::V, A(_)) => int(1),
        (Irrep::V, B(..)) => int(0),
        (Irrep::V, C(_)) => int(-1),
        (Irrep::W(sg), Central(mu)) => int((q + 1) * pow(mu, sg as i64)),
        (Irrep::W(sg), A(k)) => cos(g.q() - 1, (sg * k) as i64),
        (Irrep::W(sg), B(mu, _)) => int(pow(mu, sg as i64)),
        (Irrep::W(_), C(_)) => int(0),
        (Irrep::X(ph), Central(mu)) => int((q - 1) * pow(mu, ph as i64)),
        (Irrep::X(_), A(_)) => int(0),
        (Irrep::X(ph), B(mu, _)) => int(-pow(mu, ph as i64)),
        (Irrep::X(ph), C(l)) => -cos(g.q() + 1, (ph * l) as i64),
        (Irrep::W1 | Irrep::W2, Central(_)) => int(2 * h + 1),
        (Irrep::W1 | Irrep::W2, A(k)) => int(pow(Sign::Minus, k as i64)),
        (Irrep::W1, B(_, eps)) => s(eps),
        (Irrep::W2, B(_, eps)) => s(eps.flip()),
        (Irrep::W1 | Irrep::W2, C(_)) => int(0),
        (Irrep::X1 | Irrep::X2, Central(mu)) => int(2 * h * mu.value()),
        (Irrep::X1 | Irrep::X2, A(_)) => int(0),
        (Irrep::X1, B(mu, eps)) => s(eps).scale((-mu.value() as i128).into()),
        (Irrep::X2, B(mu, eps)) => s(eps.flip()).scale((-mu.value() as i128).into()),
        (Irrep::X1 | Irrep::X2, C(l)) => int(pow(Sign::Minus, l as i64 + 1)),
    }
}

impl CharTable {
    pub fn build(g: &Sl2, conductor: u32) -> CharTable {
        let sq = sqrt_q(&g.field);
        let irreps = Irrep::all(g.h());
        let values: Vec<Vec<Cyclo>> = irreps
            .iter()
            .map(|&r| g.classes().iter().map(|&c| table_value(g, &sq, r, c)).collect())
            .collect();
        let twice = values
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| {
                        v.scale(Rational::from_integer(2))
                            .lift(conductor)
                            .terms()
                            .map(|(k, c)| {
                                assert!(c.is_integer(), "2χ has integral coordinates");
                                (k, *c.numer() as i64)
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        CharTable { irreps, values, twice }
    }
    pub fn irreps(&self) -> &[Irrep] {
        &self.irreps
    }
    pub fn irrep_index(&self, r: Irrep) -> usize {
        self.irreps.iter().position(|&x| x == r).expect("irrep in table")
    }
    /// χ_r on the class with the given id.
    pub fn value(&self, r: Irrep, class: usize) -> &Cyclo {
        &self.values[self.irrep_index(r)][class]
    }
    pub fn row(&self, r: Irrep) -> &[Cyclo] {
        &self.values[self.irrep_index(r)]
    }
    pub(crate) fn twice(&self, r: usize, class: usize) -> &[(u32, i64)] {
        &self.twice[r][class]
    }
}

/// Orbit representative (x, h) of commuting pairs: x is the representative of `class`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub class: usize,
    pub h: u32,
    pub size: u64,
}

/// Representatives of commuting pairs under simultaneous conjugation.
pub struct OrbitIndex {
    orbits: Vec<Orbit>,
    start: Vec<usize>,
}

impl OrbitIndex {
    pub fn build(g: &Sl2) -> OrbitIndex {
        let mut orbits = Vec::new();
        let mut start = Vec::new();
        for id in 0..g.num_classes() {
            start.push(orbits.len());
            if id < 2 {
                for hc in 0..g.num_classes() {
                    let size = g.member_indices(hc).len() as u64;
                    orbits.push(Orbit { class: id, h: g.index_of(&g.rep(hc)) as u32, size });
                }
            } else {
                let size = g.member_indices(id).len() as u64;
                for &h in g.centralizer_indices(id) {
                    orbits.push(Orbit { class: id, h, size });
                }
            }
        }
        start.push(orbits.len());
        OrbitIndex { orbits, start }
    }
    pub fn orbits(&self) -> &[Orbit] {
        &self.orbits
    }
    pub fn len(&self) -> usize {
        self.orbits.len()
    }
    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }
    /// Orbits whose first entry lies in the given class.
    pub fn range(&self, class: usize) -> Range<usize> {
        self.start[class]..self.start[class + 1]
    }
    /// Σ orbit sizes = #{(x,h) : xh = hx}.
    pub fn total_pairs(&self) -> u64 {
        self.orbits.iter().map(|o| o.size).sum()
    }
}

enum Val<'a> {
    /// 2 ζ^k.
    Root(u32),
    /// 2χ.
    Sum(&'a [(u32, i64)]),
}

/// Exponent of ρ(h) for a one-dimensional ρ of the centralizer of the class rep.
fn root_value(m: &Mtc, label: &SimpleLabel, class: usize, h: &GroupElement) -> u32 {
    let g = &m.group;
    let fp = &g.field;
    let l = m.conductor;
    match (label, g.cen_coord(class, h)) {
        (SimpleLabel::A { u, .. }, CenCoord::Split(j)) => m.zeta(fp.q - 1, (j * u) as i64),
        (SimpleLabel::B { nu, v, .. }, CenCoord::Unipotent(s, y)) => {
            let t = fp.trace_to_prime(fp.base.mul(*v, y));
            let sign = if s == Sign::Minus && *nu == Sign::Minus { l / 2 } else { 0 };
            (m.zeta(fp.p, t as i64) + sign) % l
        }
        (SimpleLabel::C { w, .. }, CenCoord::Nonsplit(j)) => m.zeta(fp.q + 1, (j * w) as i64),
        _ => unreachable!("label and class disagree"),
    }
}

/// Exponent in ζ_L of ρ(h) for a non-central label and h in the centralizer of its class representative.
pub fn rho_exponent(m: &Mtc, label: &SimpleLabel, h: &GroupElement) -> u32 {
    assert!(!label.is_central(), "ρ is one-dimensional only off the centre");
    root_value(m, label, m.group.class_id(label.support()), h)
}

/// χ_U(x, h) for x = element xi in the support of U and h ∈ Cen(x).
fn value_at<'a>(m: &'a Mtc, label: &SimpleLabel, ri: Option<usize>, xi: usize, h: &GroupElement) -> Val<'a> {
    let g = &m.group;
    match ri {
        Some(r) => Val::Sum(m.table.twice(r, g.class_id_of_index(g.index_of(h)))),
        None => {
            let class = g.class_id_of_index(xi);
            let w = g.at(g.witness_index(xi));
            Val::Root(root_value(m, label, class, &g.conj_by(&g.inv(&w), h)))
        }
    }
}

fn irrep_slot(m: &Mtc, label: &SimpleLabel) -> Option<usize> {
    match label {
        SimpleLabel::Central { irrep, .. } => Some(m.table.irrep_index(*irrep)),
        _ => None,
    }
}

/// χ_U(x, h) for an arbitrary commuting pair.
pub fn eval(m: &Mtc, label: &SimpleLabel, x: &GroupElement, h: &GroupElement) -> Cyclo {
    let g = &m.group;
    assert_eq!(g.mul(x, h), g.mul(h, x), "χ is evaluated on commuting pairs");
    let xi = g.index_of(x);
    if g.class_id_of_index(xi) != g.class_id(label.support()) {
        return Cyclo::zero();
    }
    match value_at(m, label, irrep_slot(m, label), xi, h) {
        Val::Root(k) => Cyclo::root_of_unity(m.conductor, k as i64),
        Val::Sum(s) => root_sum(m.conductor, s, 2),
    }
}

/// 2χ_U(x, h) as a sparse integer sum over ζ_L; empty off the support.
pub fn twice_value(m: &Mtc, label: &SimpleLabel, x: &GroupElement, h: &GroupElement) -> Vec<(u32, i64)> {
    let g = &m.group;
    let xi = g.index_of(x);
    if g.class_id_of_index(xi) != g.class_id(label.support()) {
        return Vec::new();
    }
    match value_at(m, label, irrep_slot(m, label), xi, h) {
        Val::Root(k) => vec![(k, 2)],
        Val::Sum(s) => s.to_vec(),
    }
}

/// A D(Γ)-character stored on orbit representatives.
#[derive(Clone, Debug)]
pub struct DCharacter {
    pub label: SimpleLabel,
    pub values: Vec<Cyclo>,
}

pub fn char_of(m: &Mtc, label: &SimpleLabel) -> DCharacter {
    let g = &m.group;
    let support = g.class_id(label.support());
    let values = m
        .orbits
        .orbits()
        .iter()
        .map(|o| {
            if o.class != support {
                return Cyclo::zero();
            }
            eval(m, label, &g.rep(o.class), &g.at(o.h as usize))
        })
        .collect();
    DCharacter { label: *label, values }
}

/// (1/|Γ|) Σ_{xh=hx} a(x,h) conj(b(x,h)) for functions on orbit representatives.
pub fn inner(m: &Mtc, a: &[Cyclo], b: &[Cyclo]) -> Cyclo {
    let mut acc = Cyclo::zero();
    for ((o, x), y) in m.orbits.orbits().iter().zip(a).zip(b) {
        if x.is_zero() || y.is_zero() {
            continue;
        }
        acc += &(x * &y.conj()).scale(Rational::from_integer(o.size as i128));
    }
    acc.scale(Rational::new(1, m.group.order() as i128))
}

/// 4·(χ₁⊙χ₂) on every orbit representative, unreduced.
fn tensor_twice(m: &Mtc, l1: &SimpleLabel, l2: &SimpleLabel) -> Vec<RootSum> {
    let g = &m.group;
    let lc = m.conductor;
    let s1 = g.class_id(l1.support());
    let s2 = g.class_id(l2.support());
    let (r1, r2) = (irrep_slot(m, l1), irrep_slot(m, l2));
    let central_rep = g.index_of(&g.rep(s1)) as u32;
    let mut buf = vec![0i64; lc as usize];
    let mut touched: Vec<u32> = Vec::new();
    let mut out = Vec::with_capacity(m.orbits.len());
    for o in m.orbits.orbits() {
        let z = g.rep(o.class);
        let hi = o.h as usize;
        let h = g.at(hi);
        let hc = g.class_id_of_index(hi);
        let single = [central_rep];
        let candidates: &[u32] = if l1.is_central() {
            &single
        } else if hc < 2 {
            g.member_indices(s1)
        } else if o.class < 2 {
            g.centralizer_indices(hc)
        } else {
            g.centralizer_indices(o.class)
        };
        for &x1i in candidates {
            let x1i = x1i as usize;
            if g.class_id_of_index(x1i) != s1 {
                continue;
            }
            let x1 = g.at(x1i);
            let x2 = g.mul(&g.inv(&x1), &z);
            let x2i = g.index_of(&x2);
            if g.class_id_of_index(x2i) != s2 {
                continue;
            }
            let v1 = value_at(m, l1, r1, x1i, &h);
            let v2 = value_at(m, l2, r2, x2i, &h);
            let mut add = |k: u32, c: i64| {
                let k = (k % lc) as usize;
                if buf[k] == 0 {
                    touched.push(k as u32);
                }
                buf[k] += c;
            };
            match (v1, v2) {
                (Val::Root(a), Val::Root(b)) => add(a + b, 4),
                (Val::Root(a), Val::Sum(s)) | (Val::Sum(s), Val::Root(a)) => {
                    for &(k, c) in s {
                        add(a + k, 2 * c);
                    }
                }
                (Val::Sum(s), Val::Sum(t)) => {
                    for &(i, c) in s {
                        for &(j, d) in t {
                            add(i + j, c * d);
                        }
                    }
                }
            }
        }
        touched.sort_unstable();
        touched.dedup();
        let mut sum = RootSum::new();
        for &k in &touched {
            let c = std::mem::take(&mut buf[k as usize]);
            if c != 0 {
                sum.push((k, c));
            }
        }
        touched.clear();
        out.push(sum);
    }
    out
}

/// (χ₁⊙χ₂)(x,h) = Σ_{x₁x₂=x} χ₁(x₁,h) χ₂(x₂,h) on every orbit representative.
pub fn tensor_char(m: &Mtc, l1: &SimpleLabel, l2: &SimpleLabel) -> Vec<Cyclo> {
    tensor_twice(m, l1, l2).iter().map(|s| root_sum(m.conductor, s, 4)).collect()
}

/// Fusion multiplicities N^W = ⟨χ₁⊙χ₂, χ_W⟩ by direct summation.
pub fn oracle_fuse(m: &Mtc, l1: &SimpleLabel, l2: &SimpleLabel) -> Result<FusionVector> {
    let g = &m.group;
    let lc = m.conductor;
    let t = tensor_twice(m, l1, l2);
    let mut acc = CycloAcc::new(lc);
    let den = 8 * g.order() as i128;
    let mut out = FusionVector::default();
    for class in 0..g.num_classes() {
        let range = m.orbits.range(class);
        if t[range.clone()].iter().all(|s| s.is_empty()) {
            continue;
        }
        for &wi in m.simples_on(class) {
            let w = m.catalog.data(wi).label;
            let rw = irrep_slot(m, &w);
            acc.clear();
            for oi in range.clone() {
                if t[oi].is_empty() {
                    continue;
                }
                let o = m.orbits.orbits()[oi];
                let size = o.size as i128;
                let h = g.at(o.h as usize);
                let xi = g.index_of(&g.rep(class));
                match value_at(m, &w, rw, xi, &h) {
                    Val::Root(k) => acc.add_shifted((lc - k) % lc, 2 * size, &t[oi]),
                    Val::Sum(s) => {
                        for &(k, c) in s {
                            acc.add_shifted((lc - k) % lc, size * c as i128, &t[oi]);
                        }
                    }
                }
            }
            let n = acc.finish(den).as_rational_integer()?;
            if n < 0 {
                return Err(crate::Error::NonInteger(format!("negative multiplicity {n}")));
            }
            if n > 0 {
                out.insert(w, n as u64);
            }
        }
    }
    Ok(out)
}

/// Subgroups used by the restriction tables.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Subgroup {
    /// ⟨a⟩, characters u ∈ Z_{q-1}.
    Split,
    /// {b(y)}, characters v ∈ F_q (by code).
    Unipotent,
    /// ⟨c⟩, characters w ∈ Z_{q+1}.
    Nonsplit,
}

/// Character index → multiplicity.
pub type Multiset = BTreeMap<u32, u32>;

/// Decomposition of the restriction of an irrep, computed from the character table.
pub fn restriction_from_characters(m: &Mtc, r: Irrep, sub: Subgroup) -> Multiset {
    let g = &m.group;
    let fp = &g.field;
    let (q, lc) = (fp.q, m.conductor);
    let ri = m.table.irrep_index(r);
    let (elements, nchars): (Vec<GroupElement>, u32) = match sub {
        Subgroup::Split => ((0..q - 1).map(|j| g.a_pow(j as i64)).collect(), q - 1),
        Subgroup::Unipotent => (fp.base.elements().map(|y| g.b_of(y)).collect(), q),
        Subgroup::Nonsplit => ((0..q + 1).map(|j| g.c_pow(j as i64)).collect(), q + 1),
    };
    let psi = |c: u32, j: usize| -> u32 {
        match sub {
            Subgroup::Split => m.zeta(q - 1, c as i64 * j as i64),
            Subgroup::Unipotent => {
                let y = fp.base.from_code(j as u32);
                m.zeta(fp.p, fp.trace_to_prime(fp.base.mul(fp.base.from_code(c), y)) as i64)
            }
            Subgroup::Nonsplit => m.zeta(q + 1, c as i64 * j as i64),
        }
    };
    let mut out = Multiset::new();
    let mut acc = CycloAcc::new(lc);
    for c in 0..nchars {
        acc.clear();
        for (j, x) in elements.iter().enumerate() {
            let class = g.class_id_of_index(g.index_of(x));
            acc.add_shifted((lc - psi(c, j)) % lc, 1, m.table.twice(ri, class));
        }
        let mult = acc
            .finish(2 * elements.len() as i128)
            .as_rational_integer()
            .expect("restriction multiplicities are integers");
        if mult > 0 {
            out.insert(c, mult as u32);
        }
    }
    out
}

/// Cells of the literal restriction table that disagree with the character table.
/// Each entry is (irrep, subgroup); the corrected multiset is used there.
pub fn restriction_corrections(h: u32) -> Vec<(Irrep, Subgroup)> {
    let mut v = Vec::new();
    for phi in 1..=2 * h {
        v.push((Irrep::X(phi), Subgroup::Unipotent));
        v.push((Irrep::X(phi), Subgroup::Nonsplit));
    }
    v.push((Irrep::X1, Subgroup::Unipotent));
    v.push((Irrep::X2, Subgroup::Unipotent));
    v
}

/// The restriction table taken literally (`corrected = false`) or with the corrections
/// of [`restriction_corrections`] applied. `None` for the trivial irrep.
pub fn restriction_table(m: &Mtc, r: Irrep, sub: Subgroup, corrected: bool) -> Option<Multiset> {
    let fp = &m.group.field;
    let (q, h) = (fp.q, fp.h);
    let mut out = Multiset::new();
    let mut add = |c: u32, k: u32| {
        *out.entry(c).or_insert(0) += k;
    };
    let square = |c: u32| fp.is_square(fp.base.from_code(c)).unwrap_or(false);
    let nonzero = 1..q;
    let (nu, nw) = (q - 1, q + 1);
    let fix = corrected && restriction_corrections(h).contains(&(r, sub));
    match (r, sub) {
        (Irrep::One, _) => return None,
        (Irrep::V, Subgroup::Split) => {
            add(0, 3);
            (2..nu).step_by(2).for_each(|u| add(u, 2));
        }
        (Irrep::V, Subgroup::Unipotent) => (0..q).for_each(|v| add(v, 1)),
        (Irrep::V, Subgroup::Nonsplit) => {
            add(0, 1);
            (2..nw).step_by(2).for_each(|w| add(w, 2));
        }
        (Irrep::W(s), Subgroup::Split) => {
            add(s, 1);
            add(nu - s, 1);
            (0..nu).filter(|u| (u + s) % 2 == 0).for_each(|u| add(u, 2));
        }
        (Irrep::W(_), Subgroup::Unipotent) => {
            add(0, 2);
            nonzero.for_each(|v| add(v, 1));
        }
        (Irrep::W(s), Subgroup::Nonsplit) => (0..nw).filter(|w| (w + s) % 2 == 0).for_each(|w| add(w, 2)),
        (Irrep::X(f), Subgroup::Split) => (0..nu).filter(|u| (u + f) % 2 == 0).for_each(|u| add(u, 2)),
        (Irrep::X(_), Subgroup::Unipotent) => {
            let from = if fix { 1 } else { 0 };
            (from..q).for_each(|v| add(v, 1));
        }
        (Irrep::X(f), Subgroup::Nonsplit) => {
            for w in (0..nw).filter(|w| (w + f) % 2 == 0) {
                if w != f && w != nw - f {
                    add(w, 2);
                } else if fix {
                    add(w, 1);
                }
            }
        }
        (Irrep::W1 | Irrep::W2, Subgroup::Split) => {
            add(2 * h, 1);
            (0..nu).step_by(2).for_each(|u| add(u, 1));
        }
        (Irrep::W1 | Irrep::W2, Subgroup::Unipotent) => {
            add(0, 1);
            let want = r == Irrep::W1;
            nonzero.filter(|&v| square(v) == want).for_each(|v| add(v, 1));
        }
        (Irrep::W1 | Irrep::W2, Subgroup::Nonsplit) => (0..nw).step_by(2).for_each(|w| add(w, 1)),
        (Irrep::X1 | Irrep::X2, Subgroup::Split) => (1..nu).step_by(2).for_each(|u| add(u, 1)),
        (Irrep::X1 | Irrep::X2, Subgroup::Unipotent) => {
            let want = (r == Irrep::X1) != fix;
            nonzero.filter(|&v| square(v) == want).for_each(|v| add(v, 1));
        }
        (Irrep::X1 | Irrep::X2, Subgroup::Nonsplit) => {
            (1..nw).step_by(2).filter(|&w| w != 2 * h + 1).for_each(|w| add(w, 1))
        }
    }
    Some(out)
}
