//! S and T matrices, the modular relations and the Verlinde formula.
//!
//! S is held as 4|Γ|·S, an integral element of Z[ζ_L] per entry (characters are stored
//! as twice-values), so matrix products stay in integer accumulators.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog::SimpleLabel;
use crate::chars::{oracle_fuse, twice_value};
use crate::context::Mtc;
use crate::cyclo::{root_sum, Cyclo, CycloAcc, Rational};
use crate::error::{Error, Result};
use crate::fusion::FusionVector;

type Sparse = Vec<(u32, i64)>;

pub struct ModularData {
    /// Catalogue order.
    pub labels: Vec<SimpleLabel>,
    pub order: u64,
    pub conductor: u32,
    qdims: Vec<u64>,
    s4: Vec<Sparse>,
    s: Vec<Cyclo>,
    pub t: Vec<Cyclo>,
    t_exp: Vec<u32>,
    dual: Vec<usize>,
}

fn conj(a: &[(u32, i64)], lc: u32) -> Sparse {
    a.iter().map(|&(k, c)| ((lc - k) % lc, c)).collect()
}

fn shift(a: &[(u32, i64)], by: u32, lc: u32) -> Sparse {
    a.iter().map(|&(k, c)| ((k + by) % lc, c)).collect()
}

fn to_sparse(acc: &mut CycloAcc) -> Sparse {
    acc.reduced()
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(k, &c)| (k as u32, i64::try_from(c).expect("coefficient overflow")))
        .collect()
}

fn root_exponent(z: &Cyclo, lc: u32) -> u32 {
    let (n, k) = z.as_root_of_unity().expect("twists are roots of unity");
    assert_eq!(lc % n, 0);
    k * (lc / n)
}

/// Sparse n×n product; entries are reduced to canonical form.
fn mat_mul(n: usize, lc: u32, a: &[Sparse], b: &[Sparse]) -> Vec<Sparse> {
    let nz_b: Vec<Vec<usize>> = (0..n).map(|k| (0..n).filter(|&j| !b[k * n + j].is_empty()).collect()).collect();
    (0..n)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut accs: Vec<Option<CycloAcc>> = vec![None; n];
            for k in 0..n {
                let aik = &a[i * n + k];
                if aik.is_empty() {
                    continue;
                }
                for &j in &nz_b[k] {
                    accs[j].get_or_insert_with(|| CycloAcc::new(lc)).add_product(1, aik, &b[k * n + j]);
                }
            }
            accs.into_iter().map(|a| a.map(|mut a| to_sparse(&mut a)).unwrap_or_default()).collect::<Vec<_>>()
        })
        .collect()
}

impl ModularData {
    pub fn build(m: &Mtc) -> ModularData {
        let g = &m.group;
        let lc = m.conductor;
        let labels: Vec<SimpleLabel> = m.catalog.labels().collect();
        let n = labels.len();
        let order = g.order();
        let s4: Vec<Sparse> = (0..n)
            .into_par_iter()
            .flat_map_iter(|u| {
                let lu = &labels[u];
                let cu = g.class_id(lu.support());
                let x = g.rep(cu);
                let mut accs: Vec<Option<CycloAcc>> = vec![None; n];
                for o in m.orbits.range(cu) {
                    let orb = m.orbits.orbits()[o];
                    let h = g.at(orb.h as usize);
                    let a = conj(&twice_value(m, lu, &x, &h), lc);
                    if a.is_empty() {
                        continue;
                    }
                    for &v in m.simples_on(g.class_id_of_index(orb.h as usize)) {
                        let b = conj(&twice_value(m, &labels[v], &h, &x), lc);
                        accs[v].get_or_insert_with(|| CycloAcc::new(lc)).add_product(orb.size as i128, &a, &b);
                    }
                }
                accs.into_iter().map(|a| a.map(|mut a| to_sparse(&mut a)).unwrap_or_default()).collect::<Vec<_>>()
            })
            .collect();
        let den = 4 * order as i64;
        let s = s4.iter().map(|e| root_sum(lc, e, den)).collect();
        let t: Vec<Cyclo> = m.catalog.entries().iter().map(|d| d.twist.clone()).collect();
        let t_exp = t.iter().map(|z| root_exponent(z, lc)).collect();
        let qdims = m.catalog.entries().iter().map(|d| d.qdim).collect();
        let dual = labels.iter().map(|l| m.catalog.index(&l.dual()).expect("duals are simple")).collect();
        ModularData { labels, order, conductor: lc, qdims, s4, s, t, t_exp, dual }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
    pub fn s(&self, u: usize, v: usize) -> &Cyclo {
        &self.s[u * self.len() + v]
    }
    /// Index of the unit object.
    pub fn unit(&self) -> usize {
        self.labels.iter().position(|l| *l == SimpleLabel::unit()).expect("unit present")
    }
    fn scale(&self) -> i64 {
        4 * self.order as i64
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.len();
        (0..n).all(|u| (u + 1..n).all(|v| self.s4[u * n + v] == self.s4[v * n + u]))
    }

    /// S_{1,V} = d_V/|Γ| on the unit row.
    pub fn unit_row_ok(&self) -> bool {
        let u1 = self.unit();
        (0..self.len()).all(|v| *self.s(u1, v) == Cyclo::from_rational(Rational::new(self.qdims[v] as i128, self.order as i128)))
    }

    /// Σ_V S_{1,V}² = 1.
    pub fn global_dimension_ok(&self) -> bool {
        let total: u128 = self.qdims.iter().map(|&d| (d as u128).pow(2)).sum();
        total == (self.order as u128).pow(2)
    }

    fn is_scalar_permutation(&self, prod: &[Sparse], perm: &[usize], value: &Sparse) -> bool {
        let n = self.len();
        (0..n).all(|i| (0..n).all(|j| if perm[i] == j { &prod[i * n + j] == value } else { prod[i * n + j].is_empty() }))
    }

    /// S·S̄ᵗ = 1.
    pub fn is_unitary(&self) -> bool {
        let n = self.len();
        let lc = self.conductor;
        let adj: Vec<Sparse> = (0..n * n).map(|k| conj(&self.s4[(k % n) * n + k / n], lc)).collect();
        let prod = mat_mul(n, lc, &self.s4, &adj);
        let id: Vec<usize> = (0..n).collect();
        self.is_scalar_permutation(&prod, &id, &self.integral(self.scale().pow(2)))
    }

    fn integral(&self, k: i64) -> Sparse {
        let mut acc = CycloAcc::new(self.conductor);
        acc.add_root(0, k as i128);
        to_sparse(&mut acc)
    }

    /// S² equals the charge conjugation, which is the identity since every simple is self-dual.
    pub fn s_squared_is_conjugation(&self) -> bool {
        let n = self.len();
        let prod = mat_mul(n, self.conductor, &self.s4, &self.s4);
        self.is_scalar_permutation(&prod, &self.dual, &self.integral(self.scale().pow(2)))
    }

    pub fn conjugation_is_identity(&self) -> bool {
        self.dual.iter().enumerate().all(|(i, &d)| i == d)
    }

    fn st(&self, t_exp: &[u32]) -> Vec<Sparse> {
        let n = self.len();
        (0..n * n).map(|k| shift(&self.s4[k], t_exp[k % n], self.conductor)).collect()
    }

    /// λ with (ST)³ = λS² checked on every entry, or None if the relation fails.
    pub fn st_cubed(&self) -> Option<Cyclo> {
        self.st_cubed_with(&self.t_exp)
    }

    fn st_cubed_with(&self, t_exp: &[u32]) -> Option<Cyclo> {
        let n = self.len();
        let lc = self.conductor;
        let m1 = self.st(t_exp);
        let m2 = mat_mul(n, lc, &m1, &m1);
        let m3 = mat_mul(n, lc, &m2, &m1);
        let value = m3[self.unit() * n + self.dual[self.unit()]].clone();
        if value.is_empty() || !self.is_scalar_permutation(&m3, &self.dual, &value) {
            return None;
        }
        Some(root_sum(lc, &value, self.scale().pow(3)))
    }

    /// λ from the unit entry alone: (ST)³₁₁ = |Γ|⁻² Σ_{X,Y} d_X d_Y θ_X θ_Y S_{XY}.
    pub fn anomaly(&self) -> Cyclo {
        let n = self.len();
        let mut acc = CycloAcc::new(self.conductor);
        for x in 0..n {
            for y in 0..n {
                let e = &self.s4[x * n + y];
                if !e.is_empty() {
                    let c = self.qdims[x] as i128 * self.qdims[y] as i128;
                    acc.add_shifted((self.t_exp[x] + self.t_exp[y]) % self.conductor, c, e);
                }
            }
        }
        acc.finish(self.scale() as i128 * (self.order as i128).pow(2))
    }

    /// Whether (ST)³ ∝ S² still holds with the alternative B twists μν ζ_p^{tr(e^έ v)}.
    pub fn alternative_b_twists_consistent(&self, m: &Mtc) -> bool {
        let alt: Vec<u32> = m
            .catalog
            .rows(&m.group)
            .iter()
            .zip(&self.t_exp)
            .map(|(r, &t)| r.table_twist.as_ref().map_or(t, |z| root_exponent(z, self.conductor)))
            .collect();
        self.st_cubed_with(&alt).is_some()
    }

    /// Σ_X S_{1X}^{2−2g}.
    pub fn surface_sum(&self, genus: u32) -> Rational {
        let o = self.order as i128;
        self.qdims
            .iter()
            .map(|&d| {
                let s = Rational::new(d as i128, o);
                if genus == 0 {
                    s * s
                } else {
                    num_traits::Pow::pow(s.recip(), 2 * (genus as i32) - 2)
                }
            })
            .sum()
    }

    /// Σ_X S_{1X} θ_X^p conj(S_{1X}) = |Γ|⁻² Σ_X d_X² θ_X^p.
    pub fn lens_sum(&self, p: u32) -> Cyclo {
        let mut acc = CycloAcc::new(self.conductor);
        for (d, &t) in self.qdims.iter().zip(&self.t_exp) {
            acc.add_root((t as u64 * p as u64 % self.conductor as u64) as u32, (*d as i128).pow(2));
        }
        acc.finish((self.order as i128).pow(2))
    }

    /// N_{UV}^W = Σ_X S_{UX} S_{VX} conj(S_{WX}) / S_{1X}.
    pub fn verlinde_fuse(&self, u: usize, v: usize) -> Result<FusionVector> {
        let n = self.len();
        let lc = self.conductor;
        let dl = self.qdims.iter().fold(1i128, |a, &d| num_integer::lcm(a, d as i128));
        let mut accs: Vec<Option<CycloAcc>> = vec![None; n];
        let mut pair = CycloAcc::new(lc);
        for x in 0..n {
            let (a, b) = (&self.s4[u * n + x], &self.s4[v * n + x]);
            if a.is_empty() || b.is_empty() {
                continue;
            }
            pair.clear();
            pair.add_product(1, a, b);
            let y = to_sparse(&mut pair);
            let c = dl / self.qdims[x] as i128;
            for w in 0..n {
                let e = &self.s4[w * n + x];
                if !e.is_empty() {
                    accs[w].get_or_insert_with(|| CycloAcc::new(lc)).add_product(c, &y, &conj(e, lc));
                }
            }
        }
        let den = (self.scale() as i128).pow(3) / self.order as i128 * dl;
        let mut out = FusionVector::default();
        for (w, acc) in accs.into_iter().enumerate() {
            let Some(mut acc) = acc else { continue };
            let z = acc.finish(den);
            let r = z.as_rational().ok_or_else(|| Error::NonInteger(z.to_string()))?;
            if !r.is_integer() || r < Rational::from_integer(0) {
                return Err(Error::NonInteger(r.to_string()));
            }
            if *r.numer() != 0 {
                out.insert(self.labels[w], *r.numer() as u64);
            }
        }
        Ok(out)
    }

    pub fn to_json(&self, m: &Mtc) -> Value {
        let n = self.len();
        let names: Vec<&str> = self.labels.iter().map(|l| m.name(l)).collect();
        let rows: Vec<Vec<&Cyclo>> = (0..n).map(|u| (0..n).map(|v| self.s(u, v)).collect()).collect();
        let approx_s: Vec<Vec<(f64, f64)>> =
            (0..n).map(|u| (0..n).map(|v| self.s(u, v).to_complex()).collect()).collect();
        let approx_t: Vec<(f64, f64)> = self.t.iter().map(|z| z.to_complex()).collect();
        json!({
            "labels": names,
            "order": self.order,
            "S": rows,
            "T": self.t,
            "approximate": { "S": approx_s, "T": approx_t },
        })
    }
}

/// Outcome of the modular relations.
#[derive(Clone, Debug, Serialize)]
pub struct ModularReport {
    pub simples: usize,
    pub unit_row: bool,
    pub global_dimension: bool,
    pub symmetric: bool,
    pub unitary: bool,
    pub s_squared_identity: bool,
    /// λ in (ST)³ = λS², if the relation holds.
    pub lambda: Option<Cyclo>,
    pub lambda_root_of_unity: bool,
    /// Whether the alternative B-twist table also satisfies (ST)³ ∝ S².
    pub alternative_b_twists_consistent: bool,
}

impl ModularReport {
    pub fn ok(&self) -> bool {
        self.unit_row
            && self.global_dimension
            && self.symmetric
            && self.unitary
            && self.s_squared_identity
            && self.lambda_root_of_unity
    }
}

pub fn check_relations(m: &Mtc, md: &ModularData) -> ModularReport {
    let lambda = md.st_cubed();
    ModularReport {
        simples: md.len(),
        unit_row: md.unit_row_ok(),
        global_dimension: md.global_dimension_ok(),
        symmetric: md.is_symmetric(),
        unitary: md.is_unitary(),
        s_squared_identity: md.conjugation_is_identity() && md.s_squared_is_conjugation(),
        lambda_root_of_unity: lambda.as_ref().is_some_and(|z| z.as_root_of_unity().is_some()),
        lambda,
        alternative_b_twists_consistent: md.alternative_b_twists_consistent(m),
    }
}

/// A pair where Verlinde and the oracle disagree, or the Verlinde sum is not an integer.
#[derive(Clone, Debug, Serialize)]
pub struct VerlindeMismatch {
    pub pair: [String; 2],
    pub detail: String,
}

/// Verlinde against the character oracle on the given index pairs.
pub fn verlinde_vs_oracle(m: &Mtc, md: &ModularData, pairs: &[(usize, usize)]) -> Vec<VerlindeMismatch> {
    let mut out: Vec<(usize, VerlindeMismatch)> = pairs
        .par_iter()
        .enumerate()
        .filter_map(|(i, &(u, v))| {
            let names = [m.name(&md.labels[u]).to_string(), m.name(&md.labels[v]).to_string()];
            let detail = match (md.verlinde_fuse(u, v), oracle_fuse(m, &md.labels[u], &md.labels[v])) {
                (Ok(a), Ok(b)) if a == b => return None,
                (Ok(_), Ok(_)) => "vectors differ".to_string(),
                (Err(e), _) | (_, Err(e)) => e.to_string(),
            };
            Some((i, VerlindeMismatch { pair: names, detail }))
        })
        .collect();
    out.sort_by_key(|(i, _)| *i);
    out.into_iter().map(|(_, x)| x).collect()
}
