//! Explicit induced modules for non-central supports, the braiding on their tensor
//! products, and block-wise checks of gauge-invariant braiding data.

use std::collections::BTreeMap;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::SimpleLabel;
use crate::chars::{oracle_fuse, rho_exponent};
use crate::context::Mtc;
use crate::cyclo::{Cyclo, CycloAcc};
use crate::error::{Error, Result};
use crate::fusion::{fuse_blocks_with, FuseOptions, FusionVector};
use crate::sl2::{ClassLabel, GroupElement, Sign};

/// An eigenvalue e^{2πi r}, r ∈ [0, 1).
pub type Turn = Ratio<i64>;

/// U(x, ρ) with ρ one-dimensional: one line per support element.
#[derive(Clone, Debug)]
pub struct ExplicitModule {
    pub label: SimpleLabel,
    pub class: usize,
    /// Element indices of the support, in class-member order.
    pub basis: Vec<u32>,
    witness: Vec<u32>,
    line_of: Vec<u32>,
}

const NO_LINE: u32 = u32::MAX;

impl ExplicitModule {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    pub fn element(&self, m: &Mtc, i: usize) -> GroupElement {
        m.group.at(self.basis[i] as usize)
    }
    /// The line graded by the element with this index, if it lies in the support.
    pub fn line(&self, elem: usize) -> Option<usize> {
        let l = self.line_of[elem];
        (l != NO_LINE).then_some(l as usize)
    }
    /// L_g on line i: the target line j (graded by g x_i g⁻¹) and the phase exponent of ρ(w_j⁻¹ g w_i).
    pub fn act(&self, m: &Mtc, g: &GroupElement, i: usize) -> (usize, u32) {
        let grp = &m.group;
        let y = grp.conj_by(g, &self.element(m, i));
        let j = self.line(grp.index_of(&y)).expect("conjugation preserves the support");
        let wi = grp.at(self.witness[i] as usize);
        let wj = grp.at(self.witness[j] as usize);
        let c = grp.mul(&grp.inv(&wj), &grp.mul(g, &wi));
        (j, rho_exponent(m, &self.label, &c))
    }
}

pub fn build_module(m: &Mtc, label: &SimpleLabel) -> Result<ExplicitModule> {
    if label.is_central() {
        return Err(Error::Domain("explicit modules exist only for non-central supports"));
    }
    let g = &m.group;
    let class = g.class_id(label.support());
    let basis = g.member_indices(class).to_vec();
    let witness = basis.iter().map(|&i| g.witness_index(i as usize) as u32).collect();
    let mut line_of = vec![NO_LINE; g.order() as usize];
    for (k, &i) in basis.iter().enumerate() {
        line_of[i as usize] = k as u32;
    }
    Ok(ExplicitModule { label: *label, class, basis, witness, line_of })
}

/// θ_X as an exponent of ζ_L.
pub fn twist_exponent(m: &Mtc, label: &SimpleLabel) -> u32 {
    match *label {
        SimpleLabel::Central { mu, irrep } => {
            if mu == Sign::Minus && irrep.parity() == Sign::Minus {
                m.conductor / 2
            } else {
                0
            }
        }
        _ => rho_exponent(m, label, &m.group.representative(label.support())),
    }
}

fn turn(m: &Mtc, k: u32) -> Turn {
    Ratio::new(k as i64, m.conductor as i64)
}

/// Lines (i₁, i₂) of X₁⊙X₂ over z: x_{i₁}x_{i₂} = z.
fn fiber(m: &Mtc, m1: &ExplicitModule, m2: &ExplicitModule, z: &GroupElement) -> Vec<(usize, usize)> {
    let g = &m.group;
    (0..m1.dim())
        .filter_map(|i1| {
            let x2 = g.mul(&g.inv(&m1.element(m, i1)), z);
            m2.line(g.index_of(&x2)).map(|i2| (i1, i2))
        })
        .collect()
}

/// R_{X₁,X₂}(u⊗v) = L_x(v)⊗u on line (i₁, i₂): target line (j, i₁) of X₂⊙X₁ and phase.
pub fn braid_line(m: &Mtc, m1: &ExplicitModule, m2: &ExplicitModule, i1: usize, i2: usize) -> ((usize, usize), u32) {
    let (j, ph) = m2.act(m, &m1.element(m, i1), i2);
    ((j, i1), ph)
}

fn tensor_act(m: &Mtc, m1: &ExplicitModule, m2: &ExplicitModule, h: &GroupElement, l: (usize, usize)) -> ((usize, usize), u32) {
    let (j1, p1) = m1.act(m, h, l.0);
    let (j2, p2) = m2.act(m, h, l.1);
    ((j1, j2), (p1 + p2) % m.conductor)
}

/// The double braiding R_{X₂,X₁}R_{X₁,X₂} on one line of X₁⊙X₂.
fn monodromy_line(m: &Mtc, m1: &ExplicitModule, m2: &ExplicitModule, l: (usize, usize)) -> ((usize, usize), u32) {
    let ((j, i1), pa) = braid_line(m, m1, m2, l.0, l.1);
    let ((k, j2), pb) = braid_line(m, m2, m1, j, i1);
    ((k, j2), (pa + pb) % m.conductor)
}

/// R_{X₁,X₂}L_g = L_gR_{X₁,X₂} for each g, on every line.
pub fn naturality(m: &Mtc, m1: &ExplicitModule, m2: &ExplicitModule, gens: &[GroupElement]) -> bool {
    let lc = m.conductor;
    gens.iter().all(|g| {
        (0..m1.dim()).all(|i1| {
            (0..m2.dim()).all(|i2| {
                let (a, pa) = tensor_act(m, m1, m2, g, (i1, i2));
                let (b, pb) = braid_line(m, m1, m2, a.0, a.1);
                let (c, pc) = braid_line(m, m1, m2, i1, i2);
                let (d, pd) = tensor_act(m, m2, m1, g, c);
                b == d && (pa + pb) % lc == (pc + pd) % lc
            })
        })
    })
}

/// L_gL_h = L_{gh} on every line, for all g, h in the list.
pub fn is_homomorphism(m: &Mtc, module: &ExplicitModule, elems: &[GroupElement]) -> bool {
    let lc = m.conductor;
    elems.iter().all(|g| {
        elems.iter().all(|h| {
            let gh = m.group.mul(g, h);
            (0..module.dim()).all(|i| {
                let (j, p) = module.act(m, h, i);
                let (k, p2) = module.act(m, g, j);
                let (k2, p3) = module.act(m, &gh, i);
                k == k2 && (p + p2) % lc == p3
            })
        })
    })
}

/// Eigenvalues of a monomial operator, from its cycles.
fn monomial_spectrum(m: &Mtc, lines: &[(usize, usize)], map: &BTreeMap<(usize, usize), ((usize, usize), u32)>) -> Vec<Turn> {
    let lc = m.conductor as i64;
    let mut seen = BTreeMap::new();
    let mut out = Vec::new();
    for &start in lines {
        if seen.contains_key(&start) {
            continue;
        }
        let (mut cur, mut phase, mut len) = (start, 0i64, 0i64);
        loop {
            seen.insert(cur, ());
            let (nx, p) = map[&cur];
            phase += p as i64;
            len += 1;
            cur = nx;
            if cur == start {
                break;
            }
        }
        let a = phase.rem_euclid(lc);
        for k in 0..len {
            out.push(Ratio::new(a + k * lc, lc * len));
        }
    }
    out.sort();
    out
}

/// Per-W data of a double-braiding check.
#[derive(Clone, Debug, Serialize)]
pub struct IsotypicCheck {
    pub simple: String,
    /// Multiplicity read off the explicit fiber.
    pub multiplicity: u64,
    /// Multiplicity from the oracle.
    pub oracle: u64,
    /// θ_W/(θ₁θ₂) as a fraction of a turn.
    pub expected: String,
    /// Trace of the double braiding on the isotypic part equals expected × multiplicity.
    pub eigenvalue_ok: bool,
}

/// Gauge-invariant braiding data of X₁⊙X₂ over one support block.
#[derive(Clone, Debug, Serialize)]
pub struct BraidBlockReport {
    pub pair: [String; 2],
    pub block: String,
    pub fiber_dim: usize,
    pub isotypic: Vec<IsotypicCheck>,
    /// The cycle spectrum of the double braiding equals ⊕_W (θ_W/θ₁θ₂)^{N^W dim W_z}.
    pub spectrum_ok: bool,
    /// Single braiding on the fiber, only for X₁ = X₂.
    pub single_trace: Option<Cyclo>,
    /// Σ_W tr(R_W) dim W_z from the block formula, where one exists, corrected.
    pub closed_form_trace: Option<Cyclo>,
    pub trace_ok: Option<bool>,
    /// The same with the formula taken literally.
    pub literal_trace: Option<Cyclo>,
    pub literal_trace_ok: Option<bool>,
    /// det of the single braiding on the fiber as a fraction of a turn, only for X₁ = X₂.
    pub determinant: Option<String>,
    /// tr(R_W) on each multiplicity space, only for X₁ = X₂.
    #[serde(skip)]
    pub single_isotypic: Vec<(SimpleLabel, Cyclo)>,
}

impl BraidBlockReport {
    pub fn double_braiding_ok(&self) -> bool {
        self.spectrum_ok && self.isotypic.iter().all(|c| c.eigenvalue_ok && c.multiplicity == c.oracle)
    }
}

fn fmt_turn(t: Turn) -> String {
    format!("{}/{}", t.numer(), t.denom())
}

/// Characters of the simples on a block, as sparse sums over ζ_L with denominator 2.
struct BlockChars {
    /// Weighted centralizer sample: element and weight (class size for a central block).
    cen: Vec<(GroupElement, i128)>,
    order: i128,
    simples: Vec<(SimpleLabel, Vec<Vec<(u32, i64)>>, u64)>,
}

fn block_chars(m: &Mtc, block: usize) -> BlockChars {
    let g = &m.group;
    let lc = m.conductor;
    let central = matches!(g.class_label(block), ClassLabel::Central(_));
    let cen: Vec<(GroupElement, i128)> = if central {
        (0..g.num_classes()).map(|c| (g.rep(c), g.member_indices(c).len() as i128)).collect()
    } else {
        g.centralizer_indices(block).iter().map(|&i| (g.at(i as usize), 1)).collect()
    };
    let order = cen.iter().map(|(_, w)| w).sum();
    let simples = m
        .simples_on(block)
        .iter()
        .map(|&i| {
            let d = m.catalog.data(i);
            let vals: Vec<Vec<(u32, i64)>> = cen
                .iter()
                .map(|(h, _)| match d.label {
                    SimpleLabel::Central { irrep, .. } => {
                        let r = m.table.irrep_index(irrep);
                        m.table.twice(r, g.class_id_of_index(g.index_of(h))).to_vec()
                    }
                    _ => vec![(rho_exponent(m, &d.label, h), 2)],
                })
                .map(|v| v.into_iter().map(|(k, c)| ((lc - k) % lc, c)).collect())
                .collect();
            let dim = match d.label {
                SimpleLabel::Central { irrep, .. } => irrep.dim(m.q()),
                _ => 1,
            };
            (d.label, vals, dim)
        })
        .collect();
    BlockChars { cen, order, simples }
}

/// Checks the braiding of X₁⊙X₂ over the fiber of one block representative.
pub fn block_report(
    m: &Mtc,
    x1: &SimpleLabel,
    x2: &SimpleLabel,
    block: ClassLabel,
    oracle: &FusionVector,
) -> Result<BraidBlockReport> {
    let (m1, m2) = (build_module(m, x1)?, build_module(m, x2)?);
    let chars = block_chars(m, m.group.class_id(block));
    block_report_with(m, &m1, &m2, block, oracle, &chars)
}

fn block_report_with(
    m: &Mtc,
    m1: &ExplicitModule,
    m2: &ExplicitModule,
    block: ClassLabel,
    oracle: &FusionVector,
    chars: &BlockChars,
) -> Result<BraidBlockReport> {
    let g = &m.group;
    let lc = m.conductor;
    let (x1, x2) = (&m1.label, &m2.label);
    let name = |l: &SimpleLabel| m.name(l).to_string();
    let z = g.representative(block);
    let lines = fiber(m, m1, m2, &z);
    if lines.is_empty() {
        return Err(Error::BlockAbsent { x1: name(x1), x2: name(x2), block: block.to_string() });
    }
    let mono: BTreeMap<_, _> = lines.iter().map(|&l| (l, monodromy_line(m, m1, m2, l))).collect();

    // F(h) = tr L_h and T(h) = tr(M L_h) on the fiber, as sparse sums over ζ_L
    let mut f_vals = Vec::with_capacity(chars.cen.len());
    let mut t_vals = Vec::with_capacity(chars.cen.len());
    for (h, _) in &chars.cen {
        let (mut fv, mut tv) = (BTreeMap::<u32, i64>::new(), BTreeMap::<u32, i64>::new());
        for &l in &lines {
            let (a, pa) = tensor_act(m, m1, m2, h, l);
            if a == l {
                *fv.entry(pa).or_insert(0) += 1;
            }
            let (b, pb) = mono[&a];
            if b == l {
                *tv.entry((pa + pb) % lc).or_insert(0) += 1;
            }
        }
        f_vals.push(fv.into_iter().collect::<Vec<_>>());
        t_vals.push(tv.into_iter().collect::<Vec<_>>());
    }

    let (t1, t2) = (twist_exponent(m, x1), twist_exponent(m, x2));
    let mut acc = CycloAcc::new(lc);
    let mut isotypic = Vec::new();
    let mut expected_spectrum = Vec::new();
    for (w, conj_chi, dim) in &chars.simples {
        acc.clear();
        for ((_, wt), (c, f)) in chars.cen.iter().zip(conj_chi.iter().zip(&f_vals)) {
            acc.add_product(*wt, c, f);
        }
        let mult = acc.finish(2 * chars.order).as_rational_integer()?;
        let lambda = (twist_exponent(m, w) + 2 * lc - t1 - t2) % lc;
        acc.clear();
        for ((_, wt), (c, t)) in chars.cen.iter().zip(conj_chi.iter().zip(&t_vals)) {
            acc.add_product(*wt, c, t);
        }
        let tr = acc.finish(2 * chars.order);
        let want = Cyclo::root_of_unity(lc, lambda as i64).scale((mult as i128).into());
        let ow = oracle.get(w);
        if mult != 0 || ow != 0 {
            isotypic.push(IsotypicCheck {
                simple: name(w),
                multiplicity: mult as u64,
                oracle: ow,
                expected: fmt_turn(turn(m, lambda)),
                eigenvalue_ok: tr == want,
            });
        }
        for _ in 0..(mult.max(0) as u64) * dim {
            expected_spectrum.push(turn(m, lambda));
        }
    }
    expected_spectrum.sort();
    let spectrum_ok = monomial_spectrum(m, &lines, &mono) == expected_spectrum;

    let (mut single_trace, mut determinant, mut single_isotypic) = (None, None, Vec::new());
    if x1 == x2 {
        let mut acc = CycloAcc::new(lc);
        let mut det_phase = 0i64;
        let mut map = BTreeMap::new();
        let braid: BTreeMap<_, _> = lines.iter().map(|&l| (l, braid_line(m, m1, m2, l.0, l.1))).collect();
        for &l in &lines {
            let (t, p) = braid[&l];
            if t == l {
                acc.add_root(p, 1);
            }
            det_phase += p as i64;
            map.insert(l, t);
        }
        single_trace = Some(acc.finish(1));
        // tr(R L_h), then tr(R_W) on each multiplicity space
        let r_vals: Vec<Vec<(u32, i64)>> = chars
            .cen
            .iter()
            .map(|(h, _)| {
                let mut tv = BTreeMap::<u32, i64>::new();
                for &l in &lines {
                    let (a, pa) = tensor_act(m, m1, m2, h, l);
                    let (b, pb) = braid[&a];
                    if b == l {
                        *tv.entry((pa + pb) % lc).or_insert(0) += 1;
                    }
                }
                tv.into_iter().collect()
            })
            .collect();
        for (w, conj_chi, _) in &chars.simples {
            if oracle.get(w) == 0 {
                continue;
            }
            acc.clear();
            for ((_, wt), (c, t)) in chars.cen.iter().zip(conj_chi.iter().zip(&r_vals)) {
                acc.add_product(*wt, c, t);
            }
            single_isotypic.push((*w, acc.finish(2 * chars.order)));
        }
        // sign of the permutation: (−1)^{n − #cycles}
        let mut seen = BTreeMap::new();
        let mut cycles = 0i64;
        for &l in &lines {
            if seen.contains_key(&l) {
                continue;
            }
            cycles += 1;
            let mut cur = l;
            while seen.insert(cur, ()).is_none() {
                cur = map[&cur];
            }
        }
        let sign_half = (lines.len() as i64 - cycles).rem_euclid(2) * (lc as i64 / 2);
        determinant = Some(fmt_turn(Ratio::new((det_phase + sign_half).rem_euclid(lc as i64), lc as i64)));
    }

    Ok(BraidBlockReport {
        pair: [name(x1), name(x2)],
        block: block.to_string(),
        fiber_dim: lines.len(),
        isotypic,
        spectrum_ok,
        single_trace,
        closed_form_trace: None,
        trace_ok: None,
        literal_trace: None,
        literal_trace_ok: None,
        determinant,
        single_isotypic,
    })
}

/// Σ_W tr(R_W) dim W_z from the per-block formulas, where every W has one;
/// `literal` skips the corrections.
pub fn closed_form_block_trace(
    m: &Mtc,
    x1: &SimpleLabel,
    x2: &SimpleLabel,
    block: ClassLabel,
    literal: bool,
) -> Result<Option<Cyclo>> {
    let opts = FuseOptions { literal_braid: literal, ..Default::default() };
    let blocks = fuse_blocks_with(m, x1, x2, opts)?;
    let Some(b) = blocks.into_iter().find(|b| b.block == block) else {
        return Ok(None);
    };
    let Some(traces) = b.closed_braid else {
        return Ok(None);
    };
    let mut total = Cyclo::zero();
    for (w, tr) in traces {
        let dim = match w {
            SimpleLabel::Central { irrep, .. } => irrep.dim(m.q()),
            _ => 1,
        };
        total += &tr.scale((dim as i128).into());
    }
    Ok(Some(total))
}

/// All block reports of one pair of non-central simples.
pub fn pair_reports(m: &Mtc, x1: &SimpleLabel, x2: &SimpleLabel) -> Result<Vec<BraidBlockReport>> {
    let (m1, m2) = (build_module(m, x1)?, build_module(m, x2)?);
    let oracle = oracle_fuse(m, x1, x2)?;
    let g = &m.group;
    let mut out = Vec::new();
    for (id, &block) in g.classes().iter().enumerate() {
        if fiber(m, &m1, &m2, &g.rep(id)).is_empty() {
            continue;
        }
        let chars = block_chars(m, id);
        let mut r = block_report_with(m, &m1, &m2, block, &oracle.restrict(block), &chars)?;
        if x1 == x2 {
            r.closed_form_trace = closed_form_block_trace(m, x1, x2, block, false)?;
            r.literal_trace = closed_form_block_trace(m, x1, x2, block, true)?;
            if let (Some(a), Some(b)) = (&r.single_trace, &r.closed_form_trace) {
                r.trace_ok = Some(a == b);
            }
            if let (Some(a), Some(b)) = (&r.single_trace, &r.literal_trace) {
                r.literal_trace_ok = Some(a == b);
            }
        }
        out.push(r);
    }
    Ok(out)
}

/// Summary of a braiding sweep.
#[derive(Clone, Debug, Default, Serialize)]
pub struct BraidSweep {
    pub pairs: usize,
    pub blocks: usize,
    pub double_braiding_failures: Vec<BraidBlockReport>,
    pub traces_compared: usize,
    pub trace_failures: Vec<BraidBlockReport>,
    /// Blocks where the literal formula misses the explicit trace.
    pub literal_trace_failures: usize,
    pub errors: Vec<String>,
}

impl BraidSweep {
    pub fn double_braiding_ok(&self) -> bool {
        self.double_braiding_failures.is_empty() && self.errors.is_empty()
    }
    pub fn traces_ok(&self) -> bool {
        self.trace_failures.is_empty()
    }
}

/// Block reports for every pair, aggregated in input order.
pub fn sweep(m: &Mtc, pairs: &[(SimpleLabel, SimpleLabel)]) -> BraidSweep {
    let results: Vec<_> = pairs.par_iter().map(|(a, b)| (a, b, pair_reports(m, a, b))).collect();
    let mut s = BraidSweep { pairs: pairs.len(), ..Default::default() };
    for (a, b, r) in results {
        match r {
            Err(e) => s.errors.push(format!("{} {}: {e}", m.name(a), m.name(b))),
            Ok(reports) => {
                for r in reports {
                    s.blocks += 1;
                    if !r.double_braiding_ok() {
                        s.double_braiding_failures.push(r.clone());
                    }
                    if r.literal_trace_ok == Some(false) {
                        s.literal_trace_failures += 1;
                    }
                    if let Some(ok) = r.trace_ok {
                        s.traces_compared += 1;
                        if !ok {
                            s.trace_failures.push(r);
                        }
                    }
                }
            }
        }
    }
    s
}
