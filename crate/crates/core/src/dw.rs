//! Untwisted Dijkgraaf-Witten invariants Z(M) = #Hom(π₁M, Γ)/|Γ| by counting, and their
//! modular-data counterparts.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::context::Mtc;
use crate::cyclo::{Cyclo, Rational};
use crate::error::{parse_err, Error, Result};
use crate::modular::ModularData;

const GRAMMAR: &str = "one of s3, s2xs1, t3, lens:<p>:1, sigma:<g>xs1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Manifold {
    S3,
    S2xS1,
    T3,
    /// L(p, 1).
    Lens(u32),
    /// Σ_g × S¹.
    SigmaGxS1(u32),
}

impl fmt::Display for Manifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Manifold::S3 => write!(f, "s3"),
            Manifold::S2xS1 => write!(f, "s2xs1"),
            Manifold::T3 => write!(f, "t3"),
            Manifold::Lens(p) => write!(f, "lens:{p}:1"),
            Manifold::SigmaGxS1(g) => write!(f, "sigma:{g}xs1"),
        }
    }
}

impl FromStr for Manifold {
    type Err = Error;
    fn from_str(s: &str) -> Result<Manifold> {
        let num = |t: &str| t.parse::<u32>().map_err(|_| parse_err(t, "a non-negative integer"));
        match s.split(':').collect::<Vec<_>>().as_slice() {
            ["s3"] => Ok(Manifold::S3),
            ["s2xs1"] => Ok(Manifold::S2xS1),
            ["t3"] => Ok(Manifold::T3),
            ["lens", p, "1"] => match num(p)? {
                0 => Err(Error::OutOfRange { what: "p".into(), value: "0".into(), window: "p >= 1".into() }),
                p => Ok(Manifold::Lens(p)),
            },
            ["sigma", g] if g.ends_with("xs1") => Ok(Manifold::SigmaGxS1(num(&g[..g.len() - 3])?)),
            _ => Err(parse_err(s, GRAMMAR)),
        }
    }
}

fn ratio(num: u128, den: u64) -> Rational {
    Rational::new(num as i128, den as i128)
}

/// #{(y, z) ∈ H² : yz = zy} for H the centralizer of a class representative.
fn commuting_pairs(m: &Mtc, class: usize) -> u128 {
    let g = &m.group;
    if class < 2 {
        // H = Γ: Σ_y |Cen(y)| over class representatives
        return (0..g.num_classes())
            .map(|c| g.member_indices(c).len() as u128 * g.centralizer_indices(c).len() as u128)
            .sum();
    }
    let cen: Vec<_> = g.centralizer_indices(class).iter().map(|&i| g.at(i as usize)).collect();
    cen.iter().map(|y| cen.iter().filter(|z| g.mul(y, z) == g.mul(z, y)).count() as u128).sum()
}

/// #Hom(π₁Σ_g, H) = |H|^{2g−1} Σ_ρ (dim ρ)^{2−2g}.
fn surface_homs(m: &Mtc, class: usize, genus: u32) -> Rational {
    let g = &m.group;
    let order = g.centralizer_indices(class).len() as i128;
    let dims: Vec<i128> = if class < 2 {
        m.table.irreps().iter().map(|r| r.dim(m.q()) as i128).collect()
    } else {
        // abelian: checked by the pair count
        assert_eq!(commuting_pairs(m, class), (order * order) as u128);
        vec![1; order as usize]
    };
    let e = 2 * genus as i32 - 1;
    let scale = num_traits::Pow::pow(Rational::from_integer(order), e);
    dims.iter().map(|&d| num_traits::Pow::pow(Rational::from_integer(d), 2 - 2 * genus as i32)).sum::<Rational>() * scale
}

/// Z(M) from homomorphism counts.
pub fn dw_invariant(m: &Mtc, man: Manifold) -> Rational {
    let g = &m.group;
    let order = g.order();
    match man {
        Manifold::S3 => ratio(1, order),
        Manifold::S2xS1 => ratio(order as u128, order),
        Manifold::T3 => {
            let triples: u128 = (0..g.num_classes())
                .into_par_iter()
                .map(|c| g.member_indices(c).len() as u128 * commuting_pairs(m, c))
                .sum();
            ratio(triples, order)
        }
        Manifold::Lens(p) => {
            let e = g.identity();
            let n = g.elements().par_iter().filter(|x| g.pow(x, p as i64) == e).count();
            ratio(n as u128, order)
        }
        Manifold::SigmaGxS1(0) => dw_invariant(m, Manifold::S2xS1),
        Manifold::SigmaGxS1(1) => dw_invariant(m, Manifold::T3),
        Manifold::SigmaGxS1(genus) => {
            let total: Rational = (0..g.num_classes())
                .into_par_iter()
                .map(|c| surface_homs(m, c, genus) * Rational::from_integer(g.member_indices(c).len() as i128))
                .collect::<Vec<_>>()
                .into_iter()
                .sum();
            total / Rational::from_integer(order as i128)
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DwReport {
    pub manifold: String,
    pub counting: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modular: Option<String>,
    /// Factor applied to the raw modular sum, λ^{-1} for the lens spaces.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub anomaly_factor: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equal: Option<bool>,
}

impl DwReport {
    pub fn ok(&self) -> bool {
        self.equal != Some(false)
    }
}

/// Counting value against Σ_X S_{1X}^{2−2g} or the anomaly-corrected lens sum.
pub fn dw_crosscheck(m: &Mtc, md: &ModularData, man: Manifold) -> DwReport {
    let counting = dw_invariant(m, man);
    let (modular, anomaly): (Option<Cyclo>, Option<Cyclo>) = match man {
        Manifold::S3 => (None, None),
        Manifold::S2xS1 => (Some(Cyclo::from_rational(md.surface_sum(0))), None),
        Manifold::T3 => (Some(Cyclo::from_rational(md.surface_sum(1))), None),
        Manifold::SigmaGxS1(g) => (Some(Cyclo::from_rational(md.surface_sum(g))), None),
        Manifold::Lens(p) => {
            // surgery on the p-framed unknot; signature 1
            let lambda = md.anomaly();
            let inv = lambda.conj();
            (Some(&md.lens_sum(p) * &inv), Some(inv))
        }
    };
    let equal = modular.as_ref().map(|z| *z == Cyclo::from_rational(counting));
    DwReport {
        manifold: man.to_string(),
        counting: counting.to_string(),
        modular: modular.map(|z| z.as_rational().map_or_else(|| z.to_string(), |r| r.to_string())),
        anomaly_factor: anomaly.map(|z| z.as_rational().map_or_else(|| z.to_string(), |r| r.to_string())),
        equal,
    }
}
