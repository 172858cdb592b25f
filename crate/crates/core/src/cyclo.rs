//! Exact arithmetic in cyclotomic fields Q(ζ_N).
//!
//! Values are kept in canonical form over a Zumbroich-style basis: for every
//! prime power p^a exactly dividing N, an exponent k is admissible when the
//! leading base-p digit of k mod p^a is not p-1 (odd p) or not 1 (p = 2).
//! Inadmissible powers are rewritten with Σ_s ζ^{k + sN/p} = 0. With this
//! choice ζ^0 = 1 is a basis element, so rationals are single terms.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf::FieldParams;

pub type Rational = Ratio<i128>;

/// Prime powers exactly dividing n, as (p, p^a).
pub(crate) fn prime_powers(mut n: u32) -> Vec<(u32, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut pa = 1;
            while n % d == 0 {
                n /= d;
                pa *= d;
            }
            out.push((d, pa));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, n));
    }
    out
}

#[inline]
fn forbidden(k: u32, p: u32, pa: u32) -> bool {
    let top = (k % pa) / (pa / p);
    if p == 2 {
        top == 1
    } else {
        top == p - 1
    }
}

/// Element of Q(ζ_N), always in canonical form.
#[derive(Clone, Debug)]
pub struct Cyclo {
    n: u32,
    terms: BTreeMap<u32, Rational>,
}

impl Cyclo {
    fn from_raw(n: u32, mut terms: BTreeMap<u32, Rational>) -> Cyclo {
        assert!(n >= 1);
        for (p, pa) in prime_powers(n) {
            let bad: Vec<u32> = terms.keys().copied().filter(|&k| forbidden(k, p, pa)).collect();
            let step = n / p;
            for k in bad {
                let c = terms.remove(&k).unwrap();
                for s in 1..p {
                    let j = (k + s * step) % n;
                    let e = terms.entry(j).or_insert_with(Rational::zero);
                    *e -= c;
                }
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Cyclo { n, terms }
    }

    /// Builds Σ c_k ζ_n^k from arbitrary (possibly repeated) exponents.
    pub fn from_terms<I>(n: u32, terms: I) -> Cyclo
    where
        I: IntoIterator<Item = (i64, Rational)>,
    {
        let mut map = BTreeMap::new();
        for (k, c) in terms {
            let k = k.rem_euclid(n as i64) as u32;
            *map.entry(k).or_insert_with(Rational::zero) += c;
        }
        Cyclo::from_raw(n, map)
    }

    pub fn zero() -> Cyclo {
        Cyclo { n: 1, terms: BTreeMap::new() }
    }
    pub fn one() -> Cyclo {
        Cyclo::from_rational(Rational::one())
    }
    pub fn from_rational(r: Rational) -> Cyclo {
        Cyclo::from_terms(1, [(0, r)])
    }
    pub fn from_int(k: i64) -> Cyclo {
        Cyclo::from_rational(Rational::from_integer(k as i128))
    }
    /// ζ_n^k.
    pub fn root_of_unity(n: u32, k: i64) -> Cyclo {
        Cyclo::from_terms(n, [(k, Rational::one())])
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }
    /// Canonical (exponent, coefficient) pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, &Rational)> {
        self.terms.iter().map(|(&k, c)| (k, c))
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The same number written in Q(ζ_m); n must divide m.
    pub fn lift(&self, m: u32) -> Cyclo {
        assert!(m % self.n == 0, "conductor {} does not divide {}", self.n, m);
        if m == self.n {
            return self.clone();
        }
        let r = m / self.n;
        Cyclo::from_raw(m, self.terms.iter().map(|(&k, c)| (k * r, *c)).collect())
    }

    fn common(&self, other: &Cyclo) -> (Cyclo, Cyclo) {
        let m = self.n.lcm(&other.n);
        (self.lift(m), other.lift(m))
    }

    pub fn conj(&self) -> Cyclo {
        let n = self.n;
        Cyclo::from_raw(n, self.terms.iter().map(|(&k, c)| ((n - k) % n, *c)).collect())
    }
    pub fn abs_square(&self) -> Cyclo {
        self * &self.conj()
    }
    pub fn scale(&self, r: Rational) -> Cyclo {
        if r.is_zero() {
            return Cyclo::zero();
        }
        Cyclo { n: self.n, terms: self.terms.iter().map(|(&k, c)| (k, c * r)).collect() }
    }
    pub fn pow(&self, mut k: u32) -> Cyclo {
        let mut base = self.clone();
        let mut acc = Cyclo::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// The rational value, if this element is rational.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&0).copied(),
            _ => None,
        }
    }
    pub fn as_rational_integer(&self) -> Result<i64> {
        match self.as_rational() {
            Some(r) if r.is_integer() => r
                .to_integer()
                .to_i64()
                .ok_or_else(|| Error::NonInteger(self.to_string())),
            _ => Err(Error::NonInteger(self.to_string())),
        }
    }

    /// If this is ±ζ_n^k or rational ±1, the exponent of ζ_M for M = lcm(n, 2).
    pub fn as_root_of_unity(&self) -> Option<(u32, u32)> {
        let m = self.n.lcm(&2);
        for k in 0..m {
            let z = Cyclo::root_of_unity(m, k as i64);
            if &z == self {
                return Some((m, k));
            }
        }
        None
    }

    pub fn to_complex(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (&k, c) in &self.terms {
            let x = c.numer().to_f64().unwrap() / c.denom().to_f64().unwrap();
            let t = 2.0 * std::f64::consts::PI * k as f64 / self.n as f64;
            re += x * t.cos();
            im += x * t.sin();
        }
        (re, im)
    }
}

impl PartialEq for Cyclo {
    fn eq(&self, other: &Cyclo) -> bool {
        if self.n == other.n {
            return self.terms == other.terms;
        }
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        let (a, b) = self.common(other);
        a.terms == b.terms
    }
}
impl Eq for Cyclo {}

impl Add for &Cyclo {
    type Output = Cyclo;
    fn add(self, rhs: &Cyclo) -> Cyclo {
        let (mut a, b) = if self.n == rhs.n { (self.clone(), rhs.clone()) } else { self.common(rhs) };
        for (k, c) in b.terms {
            *a.terms.entry(k).or_insert_with(Rational::zero) += c;
        }
        a.terms.retain(|_, c| !c.is_zero());
        a
    }
}

impl Sub for &Cyclo {
    type Output = Cyclo;
    fn sub(self, rhs: &Cyclo) -> Cyclo {
        self + &(-rhs)
    }
}

impl Neg for &Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        Cyclo { n: self.n, terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect() }
    }
}

impl Mul for &Cyclo {
    type Output = Cyclo;
    fn mul(self, rhs: &Cyclo) -> Cyclo {
        if self.is_zero() || rhs.is_zero() {
            return Cyclo::zero();
        }
        let m = self.n.lcm(&rhs.n);
        let (ra, rb) = (m / self.n, m / rhs.n);
        let mut map = BTreeMap::new();
        for (&i, a) in &self.terms {
            for (&j, b) in &rhs.terms {
                let k = (i * ra + j * rb) % m;
                *map.entry(k).or_insert_with(Rational::zero) += a * b;
            }
        }
        Cyclo::from_raw(m, map)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Cyclo {
            type Output = Cyclo;
            fn $f(self, rhs: Cyclo) -> Cyclo {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Cyclo> for Cyclo {
            type Output = Cyclo;
            fn $f(self, rhs: &Cyclo) -> Cyclo {
                (&self).$f(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        -&self
    }
}

impl AddAssign<&Cyclo> for Cyclo {
    fn add_assign(&mut self, rhs: &Cyclo) {
        *self = &*self + rhs;
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&k, c) in &self.terms {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            if k == 0 {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "z{}^{}", self.n, k)?;
            } else {
                write!(f, "{a}*z{}^{}", self.n, k)?;
            }
        }
        Ok(())
    }
}

impl Serialize for Cyclo {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Terms<'a>(&'a BTreeMap<u32, Rational>);
        impl Serialize for Terms<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut seq = s.serialize_seq(Some(self.0.len()))?;
                for (k, c) in self.0 {
                    seq.serialize_element(&(k, c.numer(), c.denom()))?;
                }
                seq.end()
            }
        }
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("N", &self.n)?;
        m.serialize_entry("terms", &Terms(&self.terms))?;
        m.end()
    }
}

fn legendre(t: u32, p: u32) -> i64 {
    let mut acc: u64 = 1;
    let mut base = (t % p) as u64;
    let mut k = (p - 1) / 2;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        k >>= 1;
    }
    match acc {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// Quadratic Gauss sum Σ_t (t/p) ζ_p^t.
pub fn gauss_sum(p: u32) -> Cyclo {
    Cyclo::from_terms(p, (1..p).map(|t| (t as i64, Rational::from_integer(legendre(t, p) as i128))))
}

/// The positive square root of q as an element of Q(ζ_p).
pub fn sqrt_q(params: &FieldParams) -> Cyclo {
    let (p, n) = (params.p, params.n);
    let scale = Rational::from_integer((p as i128).pow(n / 2));
    if n % 2 == 0 {
        Cyclo::from_rational(scale)
    } else {
        gauss_sum(p).scale(scale)
    }
}

/// Dense integer accumulator over Z[ζ_n] for inner loops.
///
/// Exponents are taken mod n without any reduction until [`CycloAcc::finish`].
#[derive(Clone, Debug)]
pub struct CycloAcc {
    n: u32,
    primes: Vec<(u32, u32)>,
    c: Vec<i128>,
}

impl CycloAcc {
    pub fn new(n: u32) -> CycloAcc {
        CycloAcc { n, primes: prime_powers(n), c: vec![0; n as usize] }
    }
    pub fn conductor(&self) -> u32 {
        self.n
    }
    pub fn clear(&mut self) {
        self.c.iter_mut().for_each(|x| *x = 0);
    }
    #[inline]
    pub fn add_root(&mut self, k: u32, coeff: i128) {
        self.c[(k % self.n) as usize] += coeff;
    }
    /// Adds coeff · ζ^shift · Σ_i c_i ζ^{k_i}.
    #[inline]
    pub fn add_shifted(&mut self, shift: u32, coeff: i128, sum: &[(u32, i64)]) {
        for &(k, c) in sum {
            self.c[((k + shift) % self.n) as usize] += coeff * c as i128;
        }
    }
    /// Adds coeff · a · b for two sparse sums.
    pub fn add_product(&mut self, coeff: i128, a: &[(u32, i64)], b: &[(u32, i64)]) {
        for &(i, x) in a {
            for &(j, y) in b {
                self.c[((i + j) % self.n) as usize] += coeff * (x as i128) * (y as i128);
            }
        }
    }
    fn reduce(&mut self) {
        let n = self.n;
        for &(p, pa) in &self.primes {
            let step = n / p;
            for k in 0..n {
                let v = self.c[k as usize];
                if v != 0 && forbidden(k, p, pa) {
                    self.c[k as usize] = 0;
                    for s in 1..p {
                        self.c[((k + s * step) % n) as usize] -= v;
                    }
                }
            }
        }
    }
    /// The accumulated value divided by `den`, in canonical form.
    pub fn finish(&mut self, den: i128) -> Cyclo {
        self.reduce();
        let terms = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(k, &v)| (k as u32, Rational::new(v, den)))
            .collect();
        Cyclo { n: self.n, terms }
    }
    /// Canonical integer coefficients, without building a Cyclo.
    pub fn reduced(&mut self) -> &[i128] {
        self.reduce();
        &self.c
    }
}

/// Converts a sparse integer sum over ζ_n to canonical form, divided by `den`.
pub fn root_sum(n: u32, sum: &[(u32, i64)], den: i64) -> Cyclo {
    Cyclo::from_terms(
        n,
        sum.iter().map(|&(k, c)| (k as i64, Rational::new(c as i128, den as i128))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(a: i128, b: i128) -> Rational {
        Rational::new(a, b)
    }

    #[test]
    fn worked_examples() {
        let i = Cyclo::root_of_unity(4, 1);
        assert!((&i + &Cyclo::root_of_unity(4, 3)).is_zero());
        assert_eq!(
            &Cyclo::root_of_unity(6, 2) * &Cyclo::root_of_unity(6, 5),
            Cyclo::root_of_unity(6, 1)
        );
        let x = &Cyclo::root_of_unity(5, 1) + &Cyclo::root_of_unity(5, 4);
        assert_eq!(x.conj(), x);
    }

    #[test]
    fn rationals_are_single_terms() {
        let one = Cyclo::from_terms(60, [(0, r(1, 1))]);
        assert_eq!(one.as_rational(), Some(r(1, 1)));
        assert_eq!(one, Cyclo::one());
        let s: Cyclo = (0..12).map(|k| Cyclo::root_of_unity(12, k)).fold(Cyclo::zero(), |a, b| a + b);
        assert!(s.is_zero());
    }

    #[test]
    fn gauss_sums_square_to_p() {
        for p in [5u32, 13, 17, 29] {
            let g = gauss_sum(p);
            assert_eq!(g.pow(2).as_rational_integer().unwrap(), p as i64);
            assert!(g.to_complex().0 > 0.0);
        }
        let g5 = gauss_sum(5);
        let expected = Cyclo::from_terms(5, [(1, r(1, 1)), (2, r(-1, 1)), (3, r(-1, 1)), (4, r(1, 1))]);
        assert_eq!(g5, expected);
    }

    #[test]
    fn non_integers_are_rejected() {
        assert!(Cyclo::root_of_unity(4, 1).as_rational_integer().is_err());
        assert!(Cyclo::from_rational(r(1, 2)).as_rational_integer().is_err());
        assert_eq!(Cyclo::from_int(3).as_rational_integer(), Ok(3));
    }

    #[test]
    fn accumulator_matches_sparse() {
        let mut acc = CycloAcc::new(60);
        let a = [(3u32, 2i64), (17, -1), (0, 5)];
        let b = [(45u32, 1i64), (20, 3)];
        acc.add_product(1, &a, &b);
        let expect = &root_sum(60, &a, 1) * &root_sum(60, &b, 1);
        assert_eq!(acc.finish(1), expect);
    }

    #[test]
    fn serializes_terms() {
        let x = Cyclo::root_of_unity(4, 1).scale(r(1, 2));
        assert_eq!(serde_json::to_string(&x).unwrap(), r#"{"N":4,"terms":[[1,1,2]]}"#);
    }
}
