//! Closed-form tensor decompositions per support block, and the comparison harness.

use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{Irrep, SimpleLabel};
use crate::chars::oracle_fuse;
use crate::context::Mtc;
use crate::cyclo::{sqrt_q, Cyclo, Rational};
use crate::error::{Error, Result};
use crate::gf::{ExtFieldElement, FieldElement, FieldParams};
use crate::sl2::{ClassLabel, ExtMatrix, GroupElement, Sign, Sl2};

/// Multiplicities N^W of a tensor product.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FusionVector {
    terms: BTreeMap<SimpleLabel, u64>,
}

impl FusionVector {
    pub fn single(w: SimpleLabel) -> FusionVector {
        let mut v = FusionVector::default();
        v.insert(w, 1);
        v
    }
    /// Adds `n` copies of `w`.
    pub fn insert(&mut self, w: SimpleLabel, n: u64) {
        if n > 0 {
            *self.terms.entry(w).or_insert(0) += n;
        }
    }
    pub fn get(&self, w: &SimpleLabel) -> u64 {
        self.terms.get(w).copied().unwrap_or(0)
    }
    pub fn iter(&self) -> impl Iterator<Item = (&SimpleLabel, &u64)> {
        self.terms.iter()
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn extend(&mut self, other: &FusionVector) {
        for (w, &n) in other.iter() {
            self.insert(*w, n);
        }
    }
    /// The part supported on one class.
    pub fn restrict(&self, block: ClassLabel) -> FusionVector {
        let terms = self.terms.iter().filter(|(w, _)| w.support() == block).map(|(w, &n)| (*w, n)).collect();
        FusionVector { terms }
    }
    /// Σ N^W d_W.
    pub fn total_dim(&self, m: &Mtc) -> u64 {
        self.terms.iter().map(|(w, &n)| n * m.catalog.get(w).expect("label in catalogue").qdim).sum()
    }
    /// `{"pairs": [x1, x2], "terms": [[label, mult], ...]}`.
    pub fn to_json(&self, m: &Mtc, x1: &SimpleLabel, x2: &SimpleLabel) -> serde_json::Value {
        serde_json::json!({
            "pairs": [m.name(x1), m.name(x2)],
            "terms": self.named_terms(m),
        })
    }
    /// Text terms sorted by label string.
    pub fn named_terms(&self, m: &Mtc) -> Vec<(String, u64)> {
        let mut v: Vec<(String, u64)> = self.terms.iter().map(|(w, &n)| (m.name(w).to_string(), n)).collect();
        v.sort();
        v
    }
}

/// Δ(t, t₁, t₂) = 4 + t t₁ t₂ − t² − t₁² − t₂².
pub fn delta_invariant(fp: &FieldParams, t: FieldElement, t1: FieldElement, t2: FieldElement) -> FieldElement {
    let f = &fp.base;
    let sq = |x| f.mul(x, x);
    let pos = f.add(f.from_int(4), f.mul(t, f.mul(t1, t2)));
    f.sub(pos, f.add(sq(t), f.add(sq(t1), sq(t2))))
}

/// All (y₁, y₂) in SL(2,q) with tr y_j = t_j and y₁y₂ = a(a), a ∉ {±1}, in the
/// parametrization y₂ = [[a t₂ − t₁, y], [z, t₁ − a⁻¹t₂]]/(a − a⁻¹), yz = Δ.
pub fn solve_pairs_diagonal(
    g: &Sl2,
    t1: FieldElement,
    t2: FieldElement,
    a: FieldElement,
) -> Vec<(GroupElement, GroupElement)> {
    let fp = &g.field;
    let f = &fp.base;
    let ai = f.inv(a);
    let t = f.add(a, ai);
    let delta = delta_invariant(fp, t, t1, t2);
    let s = f.inv(f.sub(a, ai));
    let build = |y: FieldElement, z: FieldElement| {
        let y1 = GroupElement {
            a: f.mul(s, f.sub(f.mul(a, t1), t2)),
            b: f.mul(s, f.neg(f.mul(a, y))),
            c: f.mul(s, f.neg(f.mul(ai, z))),
            d: f.mul(s, f.sub(t2, f.mul(ai, t1))),
        };
        let y2 = GroupElement {
            a: f.mul(s, f.sub(f.mul(a, t2), t1)),
            b: f.mul(s, y),
            c: f.mul(s, z),
            d: f.mul(s, f.sub(t1, f.mul(ai, t2))),
        };
        (y1, y2)
    };
    let mut out = Vec::new();
    if delta.is_zero() {
        out.push(build(f.zero(), f.zero()));
        for y in f.elements().filter(|y| !y.is_zero()) {
            out.push(build(y, f.zero()));
            out.push(build(f.zero(), y));
        }
    } else {
        for y in f.elements().filter(|y| !y.is_zero()) {
            out.push(build(y, f.div(delta, y)));
        }
    }
    out
}

/// All (y₁, y₂) in SL(2,q) with tr y_j = t_j and y₁y₂ = μb(b), b ≠ 0, in the
/// parametrization y₂ = [[x, y], [(t₂ − μt₁)/b, t₂ − x]], x(t₂ − x) = (t₂ − μt₁)y/b + 1.
pub fn solve_pairs_unipotent(
    g: &Sl2,
    t1: FieldElement,
    t2: FieldElement,
    mu: Sign,
    b: FieldElement,
) -> Vec<(GroupElement, GroupElement)> {
    let f = &g.field.base;
    let m = f.from_int(mu.value());
    let bi = f.inv(b);
    let gap = f.sub(t2, f.mul(m, t1));
    let build = |x: FieldElement, y: FieldElement| {
        let y2 = GroupElement { a: x, b: y, c: f.mul(gap, bi), d: f.sub(t2, x) };
        let y1 = GroupElement {
            a: f.sub(t1, f.mul(m, x)),
            b: f.mul(m, f.sub(f.mul(b, x), y)),
            c: f.mul(f.neg(f.mul(m, gap)), bi),
            d: f.mul(m, x),
        };
        (y1, y2)
    };
    let mut out = Vec::new();
    for x in f.elements() {
        let lhs = f.sub(f.mul(x, f.sub(t2, x)), f.one());
        if gap.is_zero() {
            if lhs.is_zero() {
                out.extend(f.elements().map(|y| build(x, y)));
            }
        } else {
            out.push(build(x, f.div(f.mul(lhs, b), gap)));
        }
    }
    out
}

/// k.u ∈ SL(2,q) iff d = ā and c = −e b̄ (for det u = 1).
pub fn real_form_filter(g: &Sl2, u: &ExtMatrix) -> bool {
    let fp = &g.field;
    let ext = &fp.ext;
    let [[a, b], [c, d]] = u.0;
    d == fp.conj(a) && c == ext.neg(ext.mul(fp.embed(fp.e()), fp.conj(b)))
}

/// Per-pair data shared by the support blocks.
#[derive(Clone, Debug)]
pub struct BlockContext {
    pub x1: SimpleLabel,
    pub x2: SimpleLabel,
    pub a1: ExtFieldElement,
    pub a2: ExtFieldElement,
    pub t1: FieldElement,
    pub t2: FieldElement,
    /// + iff the parities agree.
    pub nu: Sign,
    /// 𝔾: u ∈ [1, q−1] with u ≡ ν́ (mod 2).
    pub g_set: Vec<u32>,
    /// 𝕀: i ∈ [1, q+1] with i ≡ ν́ (mod 2).
    pub i_set: Vec<u32>,
}

fn eigen_data(fp: &FieldParams, x: &SimpleLabel) -> Option<(ExtFieldElement, FieldElement)> {
    let f = &fp.base;
    let ext = &fp.ext;
    match *x {
        SimpleLabel::Central { .. } => None,
        SimpleLabel::A { k, .. } => {
            Some((fp.embed(fp.e_pow(k as i64)), f.add(fp.e_pow(k as i64), fp.e_pow(-(k as i64)))))
        }
        SimpleLabel::B { mu, .. } => {
            let s = f.from_int(mu.value());
            Some((fp.embed(s), f.add(s, s)))
        }
        SimpleLabel::C { l, .. } => {
            let t = ext.add(fp.f_pow(l as i64), fp.f_pow(-(l as i64)));
            Some((fp.f_pow(l as i64), fp.restrict(t).expect("f^l + f^-l lies in F_q")))
        }
    }
}

fn b_data(x: &SimpleLabel) -> Option<(Sign, Sign)> {
    match *x {
        SimpleLabel::B { mu, eps, .. } => Some((mu, eps)),
        _ => None,
    }
}

impl BlockContext {
    /// `None` when either support is central.
    pub fn new(m: &Mtc, x1: &SimpleLabel, x2: &SimpleLabel) -> Option<BlockContext> {
        let fp = &m.group.field;
        let (a1, t1) = eigen_data(fp, x1)?;
        let (a2, t2) = eigen_data(fp, x2)?;
        let nu = x1.parity() * x2.parity();
        let q = fp.q;
        let g_set = (1..q).filter(|u| u % 2 == nu.acute()).collect();
        let i_set = (1..=q + 1).filter(|i| i % 2 == nu.acute()).collect();
        Some(BlockContext { x1: *x1, x2: *x2, a1, a2, t1, t2, nu, g_set, i_set })
    }
    fn t(&self, j: usize) -> FieldElement {
        if j == 1 {
            self.t1
        } else {
            self.t2
        }
    }
    fn x(&self, j: usize) -> &SimpleLabel {
        if j == 1 {
            &self.x1
        } else {
            &self.x2
        }
    }

    /// 𝕳: i ∈ [1, q−1] with i + ǩ ≡ jk + έ_j (mod 2) for every B-type X_j.
    pub fn h_set(&self, fp: &FieldParams, k: u32) -> Vec<u32> {
        let f = &fp.base;
        let kc = fp.dlog(f.sub(fp.e_pow(k as i64), fp.e_pow(-(k as i64)))).expect("e^k ≠ e^-k");
        (1..fp.q)
            .filter(|&i| {
                (1..=2).all(|j| match b_data(self.x(j)) {
                    Some((_, eps)) => (i + kc) % 2 == (j as u32 * k + eps.acute()) % 2,
                    None => true,
                })
            })
            .collect()
    }

    /// 𝕳′ with the partner index: pairs (i, î) for i ∈ [1, (q−1)/2] such that
    /// e^έ − e^{2i+έ₂} = e^{2î+έ₁}.
    pub fn h_prime_set(&self, fp: &FieldParams, eps: Sign) -> Vec<(u32, u32)> {
        let f = &fp.base;
        let (Some((_, e1)), Some((_, e2))) = (b_data(&self.x1), b_data(&self.x2)) else {
            return Vec::new();
        };
        let half = (fp.q - 1) / 2;
        (1..=half)
            .filter_map(|i| {
                let r = f.sub(fp.e_pow(eps.acute() as i64), fp.e_pow((2 * i + e2.acute()) as i64));
                let l = fp.dlog(r).ok()?;
                if l % 2 != e1.acute() {
                    return None;
                }
                let ih = ((l - e1.acute()) / 2) % half;
                Some((i, if ih == 0 { half } else { ih }))
            })
            .collect()
    }

    /// x₀ with N(x₀) = Δ/e; the literal choice (t − μ_j t_j̄)ẽ⁻¹ when some X_j is B-type.
    fn x0(&self, fp: &FieldParams, t: FieldElement) -> ExtFieldElement {
        let f = &fp.base;
        let ext = &fp.ext;
        for j in 1..=2 {
            if let Some((mu, _)) = b_data(self.x(j)) {
                let s = f.sub(t, f.mul(f.from_int(mu.value()), self.t(3 - j)));
                return ext.mul(fp.embed(s), ext.inv(fp.e_tilde()));
            }
        }
        let delta = delta_invariant(fp, t, self.t1, self.t2);
        let target = f.div(delta, fp.e());
        ext.gen_pow(fp.dlog(target).expect("Δ ≠ 0") as i64)
    }

    /// h_j(i) = k.(M_j(i)) with M_j(i) = [[f^ℓ t_j − t_j̄, x₀f^i], [e x̄₀ f^{-i}, t_j̄ − f^{-ℓ}t_j]]/(f^ℓ − f^{-ℓ}).
    pub fn h_matrix(&self, g: &Sl2, l: u32, j: usize, i: i64) -> GroupElement {
        let fp = &g.field;
        let ext = &fp.ext;
        let (fl, fli) = (fp.f_pow(l as i64), fp.f_pow(-(l as i64)));
        let t = fp.restrict(ext.add(fl, fli)).expect("trace in F_q");
        let x0 = self.x0(fp, t);
        let s = ext.inv(ext.sub(fl, fli));
        let (tj, tb) = (fp.embed(self.t(j)), fp.embed(self.t(3 - j)));
        let u = ExtMatrix([
            [ext.mul(s, ext.sub(ext.mul(fl, tj), tb)), ext.mul(s, ext.mul(x0, fp.f_pow(i)))],
            [
                ext.mul(s, ext.mul(fp.embed(fp.e()), ext.mul(fp.conj(x0), fp.f_pow(-i)))),
                ext.mul(s, ext.sub(tb, ext.mul(fli, tj))),
            ],
        ]);
        debug_assert!(real_form_filter(g, &u));
        g.from_ext(&g.ext_conj_by(&g.k_matrix(), &u)).expect("real form")
    }

    /// 𝕂: i ∈ [1, q+1] with h₁(2h+1+ℓ+i) and h₂(i) in the classes of the B-type X_j,
    /// by the square-class test of [`BlockContext::k_condition`].
    pub fn k_set(&self, g: &Sl2, l: u32) -> Vec<u32> {
        let h = g.h() as i64;
        (1..=g.q() + 1)
            .filter(|&i| {
                (1..=2).all(|j| {
                    let idx = if j == 1 { 2 * h + 1 + l as i64 + i as i64 } else { i as i64 };
                    self.k_condition(&g.field, l, j, idx, false).unwrap_or(true)
                })
            })
            .collect()
    }

    /// 𝕂 by classifying the matrices h_j(i) directly.
    pub fn k_set_classified(&self, g: &Sl2, l: u32) -> Vec<u32> {
        let h = g.h() as i64;
        (1..=g.q() + 1)
            .filter(|&i| {
                (1..=2).all(|j| match b_data(self.x(j)) {
                    Some((mu, eps)) => {
                        let idx = if j == 1 { 2 * h + 1 + l as i64 + i as i64 } else { i as i64 };
                        g.class_of(&self.h_matrix(g, l, j, idx)).0 == ClassLabel::B(mu, eps)
                    }
                    None => true,
                })
            })
            .collect()
    }

    /// Membership of h_j(i) in [μ_j b_{ε_j}] by a square-class test, j the B-type factor.
    /// `literal`: (t − μ_j t_j̄) e^{έ_j} (f̃^i + f̃^{-i})² / (2ẽ(f^ℓ − f^{-ℓ})) ∈ F_q^{×2}.
    /// Otherwise the form read off the lower-left entry of k.M_j(i):
    /// (t − μ_j t_j̄) e^{έ_j} ẽ (f̃^i − μ_j f̃^{-i})² / (2(f^ℓ − f^{-ℓ})) ∈ F_q^{×2},
    /// or off the upper-right entry when that square vanishes.
    pub fn k_condition(&self, fp: &FieldParams, l: u32, j: usize, i: i64, literal: bool) -> Option<bool> {
        let (mu, eps) = b_data(self.x(j))?;
        let f = &fp.base;
        let ext = &fp.ext;
        let (fl, fli) = (fp.f_pow(l as i64), fp.f_pow(-(l as i64)));
        let t = fp.restrict(ext.add(fl, fli))?;
        let lead = f.mul(f.sub(t, f.mul(f.from_int(mu.value()), self.t(3 - j))), fp.e_pow(eps.acute() as i64));
        let ft = ext.pow(fp.f_tilde(), i);
        let two_d = ext.add(ext.sub(fl, fli), ext.sub(fl, fli));
        let v = if literal {
            let c = ext.add(ft, ext.inv(ft));
            ext.div(ext.mul(fp.embed(lead), ext.mul(c, c)), ext.mul(fp.e_tilde(), two_d))
        } else {
            let c = ext.sub(ft, ext.mul(fp.embed(f.from_int(mu.value())), ext.inv(ft)));
            if c.is_zero() {
                // lower-left entry vanishes; the upper-right one 2μ_j sẽ/(e(f^ℓ − f^{-ℓ})) decides
                let four = fp.embed(f.from_int(4));
                ext.div(ext.mul(fp.embed(lead), ext.mul(fp.e_tilde(), four)), ext.mul(fp.embed(fp.e()), two_d))
            } else {
                ext.div(ext.mul(fp.embed(lead), ext.mul(fp.e_tilde(), ext.mul(c, c))), two_d)
            }
        };
        let v = fp.restrict(v)?;
        Some(!v.is_zero() && fp.is_square(v).ok()?)
    }

    /// Feasibility of the generic unipotent block: (μt_j̄ − t_j)e^{έ+έ_j} ∈ F_q^{×2} for B-type X_j.
    pub fn unipotent_feasible(&self, fp: &FieldParams, mu: Sign, eps: Sign) -> bool {
        let f = &fp.base;
        (1..=2).all(|j| match b_data(self.x(j)) {
            Some((_, ej)) => {
                let v = f.sub(f.mul(f.from_int(mu.value()), self.t(3 - j)), self.t(j));
                let v = f.mul(v, fp.e_pow((eps.acute() + ej.acute()) as i64));
                !v.is_zero() && fp.is_square(v).unwrap()
            }
            None => true,
        })
    }
}

/// Which closed form produced a block.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum BlockCase {
    /// A factor has central support; multiplicities come from the oracle.
    Delegated,
    Empty,
    /// e^k ≠ a₁^±a₂^±: ⊕_{u∈𝔾} copies·A_k^u.
    SplitGeneric { copies: u32, h_size: u32 },
    /// e^k = a₁^{ε₁}a₂^{ε₂}.
    SplitDiagonal { eps1: i8, eps2: i8 },
    /// t₁ ≠ μt₂.
    UnipotentGeneric,
    /// t₁ = μt₂ ≠ ±2.
    UnipotentSplit,
    /// t₁ = μt₂ = ±2.
    UnipotentPair { h_prime: Vec<(u32, u32)> },
    /// f^ℓ ≠ a₁^±a₂^±.
    NonsplitGeneric { copies: u32, k_size: u32 },
    /// f^ℓ = a₁^{ε₁}a₂^{ε₂}.
    NonsplitDiagonal { eps1: i8, eps2: i8 },
    CentralA { d: u32 },
    CentralB { same_v: bool },
    CentralC { d: u32 },
}

/// One support block of X₁⊙X₂.
#[derive(Clone, Debug)]
pub struct BlockResult {
    pub block: ClassLabel,
    pub case: BlockCase,
    pub vector: FusionVector,
    /// Trace of the literal R_{[x]} on each W-multiplicity space, where a closed formula exists.
    pub closed_braid: Option<Vec<(SimpleLabel, Cyclo)>>,
}

fn tr_j(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        2
    } else {
        0
    }
}

fn cyc(n: u32, k: i64) -> Cyclo {
    Cyclo::root_of_unity(n, k)
}

fn int(k: i64) -> Cyclo {
    Cyclo::from_int(k)
}

fn window(x: i64, n: u32) -> u32 {
    let r = x.rem_euclid(n as i64) as u32;
    if r == 0 {
        n
    } else {
        r
    }
}

/// |d| ∈ [0, n/2] for d ∈ Z_n.
fn abs_mod(d: i64, n: u32) -> u32 {
    let r = d.rem_euclid(n as i64) as u32;
    r.min(n - r)
}

/// Signs (ε₁, ε₂) with ε₁k₁ + ε₂k₂ ≡ k (mod n).
fn sign_solution(k1: i64, k2: i64, k: i64, n: u32) -> Option<(i8, i8)> {
    for e1 in [1i64, -1] {
        for e2 in [1i64, -1] {
            if (e1 * k1 + e2 * k2 - k).rem_euclid(n as i64) == 0 {
                return Some((e1 as i8, e2 as i8));
            }
        }
    }
    None
}

struct Fuser<'a> {
    m: &'a Mtc,
    ctx: BlockContext,
    theta2_inv: Cyclo,
    literal: bool,
}

impl<'a> Fuser<'a> {
    fn fp(&self) -> &FieldParams {
        &self.m.group.field
    }

    fn split(&self, k: u32) -> BlockResult {
        let fp = self.fp();
        let f = &fp.base;
        let (q, h) = (fp.q, fp.h);
        let c = &self.ctx;
        let block = ClassLabel::A(k);
        let t = f.add(fp.e_pow(k as i64), fp.e_pow(-(k as i64)));
        let delta = delta_invariant(fp, t, c.t1, c.t2);
        let has_b = b_data(&c.x1).is_some() || b_data(&c.x2).is_some();
        let mut v = FusionVector::default();
        let mut br = BTreeMap::<SimpleLabel, Cyclo>::new();
        let phase = |u: u32| cyc(2 * (q - 1), ((k + 2 * h) * u) as i64);
        let mut add_br = |w: SimpleLabel, x: Cyclo| {
            let e = br.entry(w).or_insert_with(Cyclo::zero);
            *e += &x;
        };
        let case = if !delta.is_zero() {
            let hs = if has_b { c.h_set(fp, k).len() as u32 } else { q - 1 };
            let copies = hs / (2 * h);
            for &u in &c.g_set {
                let w = SimpleLabel::A { k, u };
                v.insert(w, copies as u64);
                let tr = if has_b { 1 } else { tr_j(k as i64) };
                if copies > 0 {
                    add_br(w, &(&self.theta2_inv * &phase(u)).scale(Rational::from_integer(tr as i128)) * &int(1));
                }
            }
            BlockCase::SplitGeneric { copies, h_size: hs }
        } else {
            match (c.x1, c.x2) {
                (SimpleLabel::A { k: k1, u: u1 }, SimpleLabel::A { k: k2, u: u2 }) => {
                    let (e1, e2) = sign_solution(k1 as i64, k2 as i64, k as i64, q - 1).expect("Δ = 0");
                    let u0 = window(e1 as i64 * u1 as i64 + e2 as i64 * u2 as i64, q - 1);
                    let w0 = SimpleLabel::A { k, u: u0 };
                    v.insert(w0, 1);
                    // literal ζ_{2h}^{ε₁k₁u₂} and no sign on the four generic copies; the explicit
                    // braiding needs ζ_{q-1}^{k₁u₂} and (-1)^{u₂}
                    let (n0, e0, sign) =
                        if self.literal { (2 * h, e1 as i64, 1) } else { (q - 1, 1, if u2 % 2 == 1 { -1 } else { 1 }) };
                    add_br(w0, cyc(n0, e0 * k1 as i64 * u2 as i64));
                    for &u in &c.g_set {
                        let w = SimpleLabel::A { k, u };
                        v.insert(w, 4);
                        let tr = 2 * tr_j(k as i64) * sign;
                        add_br(w, (&self.theta2_inv * &phase(u)).scale(Rational::from_integer(tr as i128)));
                    }
                    BlockCase::SplitDiagonal { eps1: e1, eps2: e2 }
                }
                _ => {
                    for &u in &c.g_set {
                        let w = SimpleLabel::A { k, u };
                        v.insert(w, 2);
                        add_br(w, (&self.theta2_inv * &phase(u)).scale(Rational::from_integer(2)));
                    }
                    BlockCase::SplitDiagonal { eps1: 0, eps2: 0 }
                }
            }
        };
        let closed = if v.is_empty() { None } else { Some(br.into_iter().collect()) };
        BlockResult { block, case: if v.is_empty() { BlockCase::Empty } else { case }, vector: v, closed_braid: closed }
    }

    fn unipotent(&self, mu: Sign, eps: Sign) -> BlockResult {
        let fp = self.fp();
        let f = &fp.base;
        let c = &self.ctx;
        let block = ClassLabel::B(mu, eps);
        let m = f.from_int(mu.value());
        let two = f.from_int(2);
        let mut v = FusionVector::default();
        let mut br: Vec<(SimpleLabel, Cyclo)> = Vec::new();
        let nu2 = c.x2.parity();
        let pref = &self.theta2_inv * &int(if mu == Sign::Minus && nu2 == Sign::Minus { -1 } else { 1 });
        let ee = fp.e_pow(eps.acute() as i64);
        let tr = |x: FieldElement| fp.trace_to_prime(x) as i64;
        let case = if c.t1 != f.mul(m, c.t2) {
            if c.unipotent_feasible(fp, mu, eps) {
                let coef = f.div(f.mul(ee, c.t1), f.sub(c.t1, f.mul(m, c.t2)));
                for x in f.elements() {
                    let w = SimpleLabel::B { mu, eps, nu: c.nu, v: x };
                    v.insert(w, 1);
                    br.push((w, &pref * &cyc(fp.p, tr(f.mul(coef, x)))));
                }
            }
            BlockCase::UnipotentGeneric
        } else if c.t1 != two && c.t1 != f.neg(two) {
            if let (SimpleLabel::A { .. }, SimpleLabel::A { .. }) = (c.x1, c.x2) {
                for x in f.elements() {
                    let w = SimpleLabel::B { mu, eps, nu: c.nu, v: x };
                    v.insert(w, 2);
                    br.push((w, Cyclo::zero()));
                }
            }
            BlockCase::UnipotentSplit
        } else {
            let hp = c.h_prime_set(fp, eps);
            if let (SimpleLabel::B { v: v1, .. }, SimpleLabel::B { v: v2, .. }) = (c.x1, c.x2) {
                let half = ((fp.q - 1) / 2) as i64;
                for &(d, dh) in &hp {
                    let val = f.add(f.mul(fp.e_pow(-2 * dh as i64), v1), f.mul(fp.e_pow(-2 * d as i64), v2));
                    let w = SimpleLabel::B { mu, eps, nu: c.nu, v: val };
                    v.insert(w, 1);
                    let diag = (d as i64 - dh as i64).rem_euclid(half) == 0;
                    let x = if diag {
                        &pref * &cyc(fp.p, tr(f.mul(fp.e_pow(eps.acute() as i64 - 2 * d as i64), v2)))
                    } else {
                        Cyclo::zero()
                    };
                    br.push((w, x));
                }
            }
            BlockCase::UnipotentPair { h_prime: hp }
        };
        let mut merged = BTreeMap::<SimpleLabel, Cyclo>::new();
        for (w, x) in br {
            *merged.entry(w).or_insert_with(Cyclo::zero) += &x;
        }
        let closed = if v.is_empty() { None } else { Some(merged.into_iter().collect()) };
        BlockResult { block, case: if v.is_empty() { BlockCase::Empty } else { case }, vector: v, closed_braid: closed }
    }

    fn nonsplit(&self, l: u32) -> BlockResult {
        let g = &self.m.group;
        let fp = self.fp();
        let ext = &fp.ext;
        let (q, h) = (fp.q, fp.h);
        let c = &self.ctx;
        let block = ClassLabel::C(l);
        let t = fp.restrict(ext.add(fp.f_pow(l as i64), fp.f_pow(-(l as i64)))).expect("trace in F_q");
        let delta = delta_invariant(fp, t, c.t1, c.t2);
        let has_b = b_data(&c.x1).is_some() || b_data(&c.x2).is_some();
        let mut v = FusionVector::default();
        let mut br = BTreeMap::<SimpleLabel, Cyclo>::new();
        let phase = |w: u32| cyc(2 * (q + 1), ((l + 2 * h + 1) * w) as i64);
        let case = if !delta.is_zero() {
            let ks = if has_b { c.k_set(g, l).len() as u32 } else { q + 1 };
            let copies = ks / (2 * h + 1);
            if copies > 0 {
                for &w in &c.i_set {
                    let lab = SimpleLabel::C { l, w };
                    v.insert(lab, copies as u64);
                    let tr = if has_b { 1 } else { tr_j(l as i64 + 1) };
                    br.insert(lab, (&self.theta2_inv * &phase(w)).scale(Rational::from_integer(tr as i128)));
                }
            }
            BlockCase::NonsplitGeneric { copies, k_size: ks }
        } else {
            match (c.x1, c.x2) {
                (SimpleLabel::C { l: l1, w: w1 }, SimpleLabel::C { l: l2, w: w2 }) => {
                    let (e1, e2) = sign_solution(l1 as i64, l2 as i64, l as i64, q + 1).expect("Δ = 0");
                    let w0 = window(e1 as i64 * w1 as i64 + e2 as i64 * w2 as i64, q + 1);
                    let lab = SimpleLabel::C { l, w: w0 };
                    v.insert(lab, 1);
                    br.insert(lab, cyc(q + 1, (e1 * e2) as i64 * l1 as i64 * w2 as i64));
                    BlockCase::NonsplitDiagonal { eps1: e1, eps2: e2 }
                }
                _ => BlockCase::Empty,
            }
        };
        let closed = if v.is_empty() { None } else { Some(br.into_iter().collect()) };
        BlockResult { block, case: if v.is_empty() { BlockCase::Empty } else { case }, vector: v, closed_braid: closed }
    }

    fn central(&self, mu: Sign) -> BlockResult {
        let fp = self.fp();
        let f = &fp.base;
        let (q, h) = (fp.q, fp.h);
        let c = &self.ctx;
        let block = ClassLabel::Central(mu);
        let mut v = FusionVector::default();
        let mut br: Option<Vec<(Irrep, Cyclo)>> = None;
        let mub = mu.flip();
        let mub_h = int(if mub == Sign::Minus && h % 2 == 1 { -1 } else { 1 });
        let mub_acute = mub.acute() as i64;
        let even = |s: u32| s % 2 == 0;
        // W_{2σ'} on the d = 0 blocks: literal μ̄^h, explicitly μ̄^{σ'} (alternating when μ = +)
        let literal = self.literal;
        let w_even = |sg: u32| if literal { mub_h.clone() } else { int(if mub == Sign::Minus && (sg / 2) % 2 == 1 { -1 } else { 1 }) };
        // μ̄^u, missing from the literal scalar of the d = 0 blocks
        let mub_pow = |u: u32| int(if !literal && mub == Sign::Minus && u % 2 == 1 { -1 } else { 1 });
        let mut mults: Vec<(Irrep, u64)> = Vec::new();
        let case = match (c.x1, c.x2) {
            (SimpleLabel::A { k: k1, u: u1 }, SimpleLabel::A { k: k2, u: u2 })
                if k2 == if mu == Sign::Plus { k1 } else { 2 * h - k1 } =>
            {
                let d = (u1 as i64 - mu.value() * u2 as i64).rem_euclid((q - 1) as i64) as u32;
                let ad = abs_mod(d as i64, q - 1);
                let s = cyc(q - 1, mub.value() * (k1 * u2) as i64);
                if even(d) {
                    let nn = 1 + u64::from(ad == 2 * h);
                    mults.push((Irrep::One, u64::from(d == 0)));
                    mults.push((Irrep::V, 2 + u64::from(d == 0)));
                    for sg in 1..2 * h {
                        mults.push((Irrep::W(sg), 2 * u64::from(even(sg)) + u64::from(ad == sg)));
                    }
                    for ph in 1..=2 * h {
                        mults.push((Irrep::X(ph), 2 * u64::from(even(ph))));
                    }
                    mults.push((Irrep::W1, nn));
                    mults.push((Irrep::W2, nn));
                    let mut r: Vec<(Irrep, Cyclo)> = Vec::new();
                    let mut s = s;
                    if d == 0 {
                        s = &s * &mub_pow(u2);
                        r.push((Irrep::One, int(1)));
                        r.push((Irrep::V, int(tr_j(mub_acute) + 1)));
                        for sg in (2..2 * h).step_by(2) {
                            r.push((Irrep::W(sg), &w_even(sg) * &int(2)));
                        }
                        // literal J^{μ̄́−1} on X_{2φ'}; the explicit braiding needs J^{μ̄́} as on V
                        let jx = if self.literal { mub_acute - 1 } else { mub_acute };
                        for ph in (2..=2 * h).step_by(2) {
                            r.push((Irrep::X(ph), int(tr_j(jx))));
                        }
                        r.push((Irrep::W1, mub_h.clone()));
                        r.push((Irrep::W2, mub_h.clone()));
                    } else if ad == 2 * h {
                        r.push((Irrep::V, int(tr_j(mub_acute))));
                        for sg in (2..2 * h).step_by(2) {
                            r.push((Irrep::W(sg), &mub_h * &int(2)));
                        }
                        for ph in (2..=2 * h).step_by(2) {
                            r.push((Irrep::X(ph), int(tr_j(mub_acute))));
                        }
                        r.push((Irrep::W1, &mub_h * &int(2)));
                        r.push((Irrep::W2, &mub_h * &int(2)));
                    } else {
                        r = mults.iter().map(|&(ir, n)| (ir, int(n as i64))).collect();
                    }
                    br = Some(r.into_iter().map(|(ir, x)| (ir, &s * &x)).collect());
                } else {
                    mults.push((Irrep::One, 0));
                    mults.push((Irrep::V, 0));
                    for sg in 1..2 * h {
                        mults.push((Irrep::W(sg), 2 * u64::from(!even(sg)) + u64::from(ad == sg)));
                    }
                    for ph in 1..=2 * h {
                        mults.push((Irrep::X(ph), 2 * u64::from(!even(ph))));
                    }
                    mults.push((Irrep::X1, 1));
                    mults.push((Irrep::X2, 1));
                    br = Some(mults.iter().map(|&(ir, n)| (ir, &s * &int(n as i64))).collect());
                }
                BlockCase::CentralA { d }
            }
            (
                SimpleLabel::B { mu: m1, eps: e1, nu: n1, v: v1 },
                SimpleLabel::B { mu: m2, eps: e2, nu: n2, v: v2 },
            ) if e1 == e2 && m1 * m2 == mu => {
                let tr = |x: FieldElement| fp.trace_to_prime(x) as i64;
                let s = &cyc(fp.p, -tr(f.mul(fp.e_pow(e1.acute() as i64), v2))) * &int((m2 * n2).value());
                if v1 == v2 {
                    if n1 == n2 {
                        mults.push((Irrep::One, 1));
                        mults.push((Irrep::V, 1));
                        mults.push((Irrep::W1, 1));
                        mults.push((Irrep::W2, 1));
                        for sg in 1..2 * h {
                            mults.push((Irrep::W(sg), 2 * u64::from(even(sg))));
                        }
                        let sh = int(if h % 2 == 1 { -1 } else { 1 });
                        let mut r = vec![(Irrep::One, int(1)), (Irrep::V, int(1))];
                        for sg in (2..2 * h).step_by(2) {
                            let w = if literal { sh.clone() } else { int(if (sg / 2) % 2 == 1 { -1 } else { 1 }) };
                            r.push((Irrep::W(sg), &w * &int(2)));
                        }
                        r.push((Irrep::W1, sh.clone()));
                        r.push((Irrep::W2, sh));
                        br = Some(r.into_iter().map(|(ir, x)| (ir, &s * &x)).collect());
                    } else {
                        for sg in 1..2 * h {
                            mults.push((Irrep::W(sg), 2 * u64::from(!even(sg))));
                        }
                        let sh = int(if h % 2 == 1 { -2 } else { 2 });
                        br = Some((1..2 * h).step_by(2).map(|sg| (Irrep::W(sg), &s * &sh)).collect());
                    }
                } else {
                    let delta = f.sub(v1, v2);
                    let gp: Cyclo = (1..=2 * h)
                        .map(|k| cyc(fp.p, tr(f.mul(fp.e_pow(2 * k as i64), delta))))
                        .fold(Cyclo::zero(), |a, b| &a + &b);
                    let sp = (&sqrt_q(fp) - &Cyclo::one()).scale(Rational::new(1, 2));
                    let first = gp == sp;
                    let parity_even = n1 == n2;
                    for sg in 1..2 * h {
                        mults.push((Irrep::W(sg), u64::from(even(sg) == parity_even)));
                    }
                    for ph in 1..=2 * h {
                        mults.push((Irrep::X(ph), u64::from(even(ph) == parity_even)));
                    }
                    if parity_even {
                        mults.push((Irrep::V, 1));
                        mults.push((if first { Irrep::W1 } else { Irrep::W2 }, 1));
                        br = Some(mults.iter().map(|&(ir, n)| (ir, &s * &int(n as i64))).collect());
                    } else {
                        // literal: (m′, m″) = (1, 0) iff g_+ = s_+ − 1; X′/X″ split ⟨b⟩ the other way round from W′/W″
                        mults.push((if first { Irrep::X2 } else { Irrep::X1 }, 1));
                    }
                }
                BlockCase::CentralB { same_v: v1 == v2 }
            }
            (SimpleLabel::C { l: l1, w: w1 }, SimpleLabel::C { l: l2, w: w2 })
                if l2 == if mu == Sign::Plus { l1 } else { 2 * h + 1 - l1 } =>
            {
                let d = (w1 as i64 - mu.value() * w2 as i64).rem_euclid((q + 1) as i64) as u32;
                let ad = abs_mod(d as i64, q + 1);
                let s = cyc(q + 1, mub.value() * (l1 * w2) as i64);
                if even(d) {
                    mults.push((Irrep::One, u64::from(d == 0)));
                    mults.push((Irrep::V, 2 - u64::from(d == 0)));
                    for sg in 1..2 * h {
                        mults.push((Irrep::W(sg), 2 * u64::from(even(sg))));
                    }
                    for ph in 1..=2 * h {
                        mults.push((Irrep::X(ph), 2 * u64::from(even(ph)) - u64::from(ad == ph)));
                    }
                    mults.push((Irrep::W1, 1));
                    mults.push((Irrep::W2, 1));
                    if d == 0 {
                        let s = &s * &mub_pow(w2);
                        let mut r = vec![(Irrep::One, int(1)), (Irrep::V, int(1))];
                        for sg in (2..2 * h).step_by(2) {
                            r.push((Irrep::W(sg), &w_even(sg) * &int(2)));
                        }
                        for ph in (2..=2 * h).step_by(2) {
                            r.push((Irrep::X(ph), int(tr_j(mub_acute))));
                        }
                        r.push((Irrep::W1, mub_h.clone()));
                        r.push((Irrep::W2, mub_h.clone()));
                        br = Some(r.into_iter().map(|(ir, x)| (ir, &s * &x)).collect());
                    } else {
                        br = Some(mults.iter().map(|&(ir, n)| (ir, &s * &int(n as i64))).collect());
                    }
                } else {
                    let top = ad == 2 * h + 1;
                    for sg in 1..2 * h {
                        mults.push((Irrep::W(sg), 2 * u64::from(!even(sg))));
                    }
                    for ph in 1..=2 * h {
                        // literal: 2δ_{2∤φ} − δ_{|d|}^{2h+1}; the isomorphisms that follow fix it to − δ_{|d|}^φ
                        mults.push((Irrep::X(ph), 2 * u64::from(!even(ph)) - u64::from(ad == ph)));
                    }
                    mults.push((Irrep::X1, u64::from(!top)));
                    mults.push((Irrep::X2, u64::from(!top)));
                    if top {
                        let mut r = Vec::new();
                        for sg in (1..2 * h).step_by(2) {
                            r.push((Irrep::W(sg), &mub_h * &int(2)));
                        }
                        for ph in (1..=2 * h).step_by(2) {
                            r.push((Irrep::X(ph), int(tr_j(mub_acute))));
                        }
                        br = Some(r.into_iter().map(|(ir, x)| (ir, &s * &x)).collect());
                    } else {
                        br = Some(mults.iter().map(|&(ir, n)| (ir, &s * &int(n as i64))).collect());
                    }
                }
                BlockCase::CentralC { d }
            }
            _ => BlockCase::Empty,
        };
        for (ir, n) in mults {
            v.insert(SimpleLabel::Central { mu, irrep: ir }, n);
        }
        let closed = if v.is_empty() {
            None
        } else {
            br.map(|r| r.into_iter().map(|(ir, x)| (SimpleLabel::Central { mu, irrep: ir }, x)).collect())
        };
        BlockResult { block, case: if v.is_empty() { BlockCase::Empty } else { case }, vector: v, closed_braid: closed }
    }
}

/// Switches for [`fuse_blocks_with`].
#[derive(Clone, Copy, Debug)]
pub struct FuseOptions {
    /// Delegate central-support factors to the oracle; otherwise they are `UnsupportedCase`.
    pub oracle_fallback: bool,
    /// Use the braiding formulas literally, without the corrections.
    pub literal_braid: bool,
}

impl Default for FuseOptions {
    fn default() -> Self {
        FuseOptions { oracle_fallback: true, literal_braid: false }
    }
}

/// The closed-form decomposition of X₁⊙X₂ block by block, in class order.
/// Central-support factors are delegated to the oracle.
pub fn fuse_blocks(m: &Mtc, x1: &SimpleLabel, x2: &SimpleLabel) -> Result<Vec<BlockResult>> {
    fuse_blocks_with(m, x1, x2, FuseOptions::default())
}

pub fn fuse_blocks_with(m: &Mtc, x1: &SimpleLabel, x2: &SimpleLabel, opts: FuseOptions) -> Result<Vec<BlockResult>> {
    let g = &m.group;
    for x in [x1, x2] {
        if m.catalog.index(x).is_none() {
            return Err(Error::Domain("label not in catalogue"));
        }
    }
    let Some(ctx) = BlockContext::new(m, x1, x2) else {
        if !opts.oracle_fallback {
            return Err(Error::UnsupportedCase(format!(
                "{} (x) {}: central support has no closed form",
                m.name(x1),
                m.name(x2)
            )));
        }
        let v = oracle_fuse(m, x1, x2)?;
        return Ok(g
            .classes()
            .iter()
            .filter_map(|&b| {
                let part = v.restrict(b);
                (!part.is_empty()).then_some(BlockResult {
                    block: b,
                    case: BlockCase::Delegated,
                    vector: part,
                    closed_braid: None,
                })
            })
            .collect());
    };
    let theta2 = &m.catalog.get(x2).expect("label in catalogue").twist;
    let fz = Fuser { m, ctx, theta2_inv: theta2.conj(), literal: opts.literal_braid };
    let mut out = Vec::new();
    for &b in g.classes() {
        let r = match b {
            ClassLabel::Central(mu) => fz.central(mu),
            ClassLabel::A(k) => fz.split(k),
            ClassLabel::B(mu, eps) => fz.unipotent(mu, eps),
            ClassLabel::C(l) => fz.nonsplit(l),
        };
        if !r.vector.is_empty() {
            out.push(r);
        }
    }
    Ok(out)
}

/// The closed-form fusion vector.
pub fn fuse(m: &Mtc, x1: &SimpleLabel, x2: &SimpleLabel) -> Result<FusionVector> {
    let mut v = FusionVector::default();
    for b in fuse_blocks(m, x1, x2)? {
        v.extend(&b.vector);
    }
    Ok(v)
}

/// Which pairs to compare.
#[derive(Clone, Debug)]
pub enum Scope {
    AllPairs,
    Sample { n: usize, seed: u64 },
    Pairs(Vec<(SimpleLabel, SimpleLabel)>),
}

impl Scope {
    pub fn pairs(&self, m: &Mtc) -> Vec<(SimpleLabel, SimpleLabel)> {
        let labels: Vec<SimpleLabel> = m.catalog.labels().collect();
        let n = labels.len();
        match self {
            Scope::AllPairs => labels.iter().flat_map(|&a| labels.iter().map(move |&b| (a, b))).collect(),
            Scope::Sample { n: k, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let k = (*k).min(n * n);
                let mut idx = sample(&mut rng, n * n, k).into_vec();
                idx.sort_unstable();
                idx.into_iter().map(|i| (labels[i / n], labels[i % n])).collect()
            }
            Scope::Pairs(v) => v.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockMismatch {
    pub pair: [String; 2],
    pub block: String,
    pub closed: Vec<(String, u64)>,
    pub oracle: Vec<(String, u64)>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CompareReport {
    pub pairs: usize,
    pub delegated: usize,
    pub mismatches: Vec<BlockMismatch>,
    pub errors: Vec<String>,
}

impl CompareReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty() && self.errors.is_empty()
    }
}

fn compare_pair(m: &Mtc, x1: &SimpleLabel, x2: &SimpleLabel) -> (bool, Vec<BlockMismatch>, Vec<String>) {
    let name = |l: &SimpleLabel| m.name(l).to_string();
    let (blocks, oracle) = match (fuse_blocks(m, x1, x2), oracle_fuse(m, x1, x2)) {
        (Ok(b), Ok(o)) => (b, o),
        (Err(e), _) | (_, Err(e)) => return (false, Vec::new(), vec![format!("{} {}: {e}", name(x1), name(x2))]),
    };
    let delegated = blocks.iter().any(|b| b.case == BlockCase::Delegated);
    let mut bad = Vec::new();
    for &b in m.group.classes() {
        let closed = blocks.iter().find(|r| r.block == b).map(|r| r.vector.clone()).unwrap_or_default();
        let want = oracle.restrict(b);
        if closed != want {
            bad.push(BlockMismatch {
                pair: [name(x1), name(x2)],
                block: b.to_string(),
                closed: closed.named_terms(m),
                oracle: want.named_terms(m),
            });
        }
    }
    (delegated, bad, Vec::new())
}

/// fuse vs oracle_fuse over a scope; results are in scope order regardless of threading.
pub fn compare_all(m: &Mtc, scope: &Scope) -> CompareReport {
    let pairs = scope.pairs(m);
    let results: Vec<_> = pairs.par_iter().map(|(a, b)| compare_pair(m, a, b)).collect();
    let mut report = CompareReport { pairs: pairs.len(), ..Default::default() };
    for (delegated, bad, errs) in results {
        report.delegated += usize::from(delegated);
        report.mismatches.extend(bad);
        report.errors.extend(errs);
    }
    report
}
