//! Shared, immutable per-q context.

use num_integer::Integer;

use crate::catalog::{parse_label, Catalog, SimpleLabel};
use crate::chars::{CharTable, OrbitIndex};
use crate::error::Result;
use crate::sl2::Sl2;

/// Everything derived from q: the group, the catalogue and the character data.
pub struct Mtc {
    pub group: Sl2,
    pub catalog: Catalog,
    pub table: CharTable,
    pub orbits: OrbitIndex,
    /// Conductor lcm(p, q-1, q+1) holding every character value.
    pub conductor: u32,
    by_support: Vec<Vec<usize>>,
}

impl Mtc {
    pub fn new(q: u64) -> Result<Mtc> {
        let group = Sl2::new(q)?;
        let fp = &group.field;
        let conductor = fp.p.lcm(&(fp.q - 1)).lcm(&(fp.q + 1));
        let catalog = Catalog::build(&group);
        let table = CharTable::build(&group, conductor);
        let orbits = OrbitIndex::build(&group);
        let mut by_support = vec![Vec::new(); group.num_classes()];
        for (i, d) in catalog.entries().iter().enumerate() {
            by_support[group.class_id(d.support)].push(i);
        }
        Ok(Mtc { group, catalog, table, orbits, conductor, by_support })
    }

    pub fn q(&self) -> u32 {
        self.group.q()
    }
    pub fn h(&self) -> u32 {
        self.group.h()
    }
    pub fn parse(&self, s: &str) -> Result<SimpleLabel> {
        parse_label(&self.group, s)
    }
    pub fn name(&self, l: &SimpleLabel) -> &str {
        self.catalog.name(l)
    }
    /// Catalogue indices of the simples supported on a class.
    pub fn simples_on(&self, class: usize) -> &[usize] {
        &self.by_support[class]
    }
    /// Exponent of ζ_n^k inside ζ_L, L the character conductor.
    #[inline]
    pub fn zeta(&self, n: u32, k: i64) -> u32 {
        debug_assert!(self.conductor % n == 0);
        (k.rem_euclid(n as i64) as u32) * (self.conductor / n)
    }
}
