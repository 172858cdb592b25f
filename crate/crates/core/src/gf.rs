//! Finite fields F_q = F_p[t]/(m) and F_{q^2} = F_p[t]/(M).
//!
//! Elements are stored as integer codes: the residue polynomial
//! c_0 + c_1 t + ... is encoded as c_0 + c_1 p + c_2 p^2 + ....
//! All arithmetic goes through the owning field, which keeps the tables.

use std::fmt;

use crate::error::{parse_err, Error, Result};

/// Element of F_q.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct FieldElement(pub(crate) u32);

/// Element of F_{q^2}.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct ExtFieldElement(pub(crate) u32);

impl FieldElement {
    pub fn code(self) -> u32 {
        self.0
    }
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl ExtFieldElement {
    pub fn code(self) -> u32 {
        self.0
    }
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

const NONE: u32 = u32::MAX;

/// Largest field order accepted. Group enumeration is cubic in q.
pub const MAX_Q: u32 = 1 << 10;

pub(crate) fn prime_factors(mut x: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= x {
        if x % d == 0 {
            out.push(d);
            while x % d == 0 {
                x /= d;
            }
        }
        d += 1;
    }
    if x > 1 {
        out.push(x);
    }
    out
}

fn prime_power(q: u64) -> Option<(u32, u32)> {
    let fs = prime_factors(q);
    if fs.len() != 1 {
        return None;
    }
    let p = fs[0];
    let mut n = 0;
    let mut r = q;
    while r > 1 {
        r /= p;
        n += 1;
    }
    Some((p as u32, n))
}

fn decode(code: u32, p: u32, len: usize) -> Vec<u32> {
    let mut c = code;
    (0..len)
        .map(|_| {
            let d = c % p;
            c /= p;
            d
        })
        .collect()
}

fn encode(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// The idx-th digit vector in lexicographic order with c_0 most significant.
fn lex_digits(idx: u32, p: u32, len: usize) -> Vec<u32> {
    let mut d = decode(idx, p, len);
    d.reverse();
    d
}

/// Remainder of `a` modulo the monic polynomial `m`, as a vector of length deg(m).
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let deg = m.len() - 1;
    let mut r: Vec<u32> = a.to_vec();
    if r.len() < deg {
        r.resize(deg, 0);
        return r;
    }
    for i in (deg..r.len()).rev() {
        let c = r[i];
        if c != 0 {
            for j in 0..=deg {
                let idx = i - deg + j;
                r[idx] = (r[idx] + (p - c) * m[j]) % p;
            }
        }
    }
    r.truncate(deg);
    r
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    poly_rem(&prod, m, p)
}

fn is_irreducible(f: &[u32], p: u32) -> bool {
    let deg = f.len() - 1;
    for k in 1..=deg / 2 {
        for idx in 0..p.pow(k as u32) {
            let mut g = decode(idx, p, k);
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn smallest_irreducible(deg: usize, p: u32) -> Vec<u32> {
    for idx in 0..p.pow(deg as u32) {
        let mut f = lex_digits(idx, p, deg);
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn format_digits(d: &[u32]) -> String {
    let mut parts = Vec::new();
    for (i, &c) in d.iter().enumerate() {
        if c == 0 {
            continue;
        }
        parts.push(match i {
            0 => c.to_string(),
            1 => format!("{c}t"),
            _ => format!("{c}t^{i}"),
        });
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("+")
    }
}

fn parse_digits(s: &str, p: u32, len: usize) -> Result<Vec<u32>> {
    let expected = "field element such as `3`, `2t`, `1+2t` or `t^2+1`";
    let mut d = vec![0u32; len];
    let s = s.trim();
    if s.is_empty() {
        return Err(parse_err(s, expected));
    }
    for term in s.split('+') {
        let term = term.trim();
        let (coef, power) = match term.find('t') {
            None => (term, 0usize),
            Some(pos) => {
                let rest = &term[pos + 1..];
                let power = if rest.is_empty() {
                    1
                } else if let Some(e) = rest.strip_prefix('^') {
                    e.parse::<usize>().map_err(|_| parse_err(term, expected))?
                } else {
                    return Err(parse_err(term, expected));
                };
                let c = &term[..pos];
                (if c.is_empty() { "1" } else { c.trim_end_matches('*') }, power)
            }
        };
        let c: u64 = coef.parse().map_err(|_| parse_err(term, expected))?;
        if power >= len {
            return Err(parse_err(term, expected));
        }
        d[power] = ((d[power] as u64 + c) % p as u64) as u32;
    }
    Ok(d)
}

/// F_q with full addition and multiplication tables.
#[derive(Clone, Debug)]
pub struct BaseField {
    p: u32,
    n: u32,
    q: u32,
    modulus: Vec<u32>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

impl BaseField {
    fn new(p: u32, n: u32, modulus: Vec<u32>) -> Self {
        let q = p.pow(n);
        let len = n as usize;
        let digits: Vec<Vec<u32>> = (0..q).map(|c| decode(c, p, len)).collect();
        let mut add = vec![0; (q * q) as usize];
        let mut mul = vec![0; (q * q) as usize];
        for x in 0..q {
            for y in 0..q {
                let s: Vec<u32> = digits[x as usize]
                    .iter()
                    .zip(&digits[y as usize])
                    .map(|(a, b)| (a + b) % p)
                    .collect();
                add[(x * q + y) as usize] = encode(&s, p);
                let m = poly_mulmod(&digits[x as usize], &digits[y as usize], &modulus, p);
                mul[(x * q + y) as usize] = encode(&m, p);
            }
        }
        let mut neg = vec![0; q as usize];
        let mut inv = vec![NONE; q as usize];
        for x in 0..q {
            for y in 0..q {
                if add[(x * q + y) as usize] == 0 {
                    neg[x as usize] = y;
                }
                if mul[(x * q + y) as usize] == 1 {
                    inv[x as usize] = y;
                }
            }
        }
        BaseField { p, n, q, modulus, add, mul, neg, inv }
    }

    pub fn order(&self) -> u32 {
        self.q
    }
    pub fn characteristic(&self) -> u32 {
        self.p
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }
    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }
    /// Image of an integer under Z -> F_p -> F_q.
    pub fn from_int(&self, k: i64) -> FieldElement {
        FieldElement(k.rem_euclid(self.p as i64) as u32)
    }
    pub fn from_code(&self, code: u32) -> FieldElement {
        assert!(code < self.q, "code {code} outside F_{}", self.q);
        FieldElement(code)
    }
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(FieldElement)
    }
    #[inline]
    pub fn add(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        FieldElement(self.add[(x.0 * self.q + y.0) as usize])
    }
    #[inline]
    pub fn neg(&self, x: FieldElement) -> FieldElement {
        FieldElement(self.neg[x.0 as usize])
    }
    #[inline]
    pub fn sub(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.add(x, self.neg(y))
    }
    #[inline]
    pub fn mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        FieldElement(self.mul[(x.0 * self.q + y.0) as usize])
    }
    pub fn checked_inv(&self, x: FieldElement) -> Option<FieldElement> {
        match self.inv[x.0 as usize] {
            NONE => None,
            y => Some(FieldElement(y)),
        }
    }
    /// Panics on zero.
    #[inline]
    pub fn inv(&self, x: FieldElement) -> FieldElement {
        self.checked_inv(x).expect("inverse of zero in F_q")
    }
    pub fn div(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.mul(x, self.inv(y))
    }
    pub fn pow(&self, x: FieldElement, mut k: u64) -> FieldElement {
        let mut base = x;
        let mut acc = self.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }
    pub fn coeffs(&self, x: FieldElement) -> Vec<u32> {
        decode(x.0, self.p, self.n as usize)
    }
    pub fn from_coeffs(&self, c: &[u32]) -> FieldElement {
        let mut d = c.to_vec();
        d.resize(self.n as usize, 0);
        FieldElement(encode(&d.iter().map(|x| x % self.p).collect::<Vec<_>>(), self.p))
    }
    pub fn format(&self, x: FieldElement) -> String {
        format_digits(&self.coeffs(x))
    }
    pub fn parse(&self, s: &str) -> Result<FieldElement> {
        Ok(FieldElement(encode(&parse_digits(s, self.p, self.n as usize)?, self.p)))
    }
}

/// F_{q^2} with exponent/logarithm tables relative to the fixed generator.
#[derive(Clone, Debug)]
pub struct ExtField {
    p: u32,
    len: usize,
    size: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl ExtField {
    fn new(p: u32, n: u32, modulus: Vec<u32>) -> Self {
        let len = 2 * n as usize;
        let size = p.pow(2 * n);
        let order = (size - 1) as u64;
        let primes = prime_factors(order);
        let pow = |x: &[u32], mut k: u64| {
            let mut base = x.to_vec();
            let mut acc = vec![0; len];
            acc[0] = 1;
            while k > 0 {
                if k & 1 == 1 {
                    acc = poly_mulmod(&acc, &base, &modulus, p);
                }
                base = poly_mulmod(&base, &base, &modulus, p);
                k >>= 1;
            }
            acc
        };
        let mut gen = None;
        for idx in 0..size {
            let g = lex_digits(idx, p, len);
            if g.iter().all(|&c| c == 0) {
                continue;
            }
            let is_one = |v: &[u32]| v[0] == 1 && v[1..].iter().all(|&c| c == 0);
            if primes.iter().all(|&r| !is_one(&pow(&g, order / r))) {
                gen = Some(g);
                break;
            }
        }
        let gen = gen.expect("multiplicative group of a finite field is cyclic");
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![NONE; size as usize];
        let mut x = vec![0; len];
        x[0] = 1;
        for i in 0..order as u32 {
            let c = encode(&x, p);
            exp.push(c);
            log[c as usize] = i;
            x = poly_mulmod(&x, &gen, &modulus, p);
        }
        ExtField { p, len, size, modulus, exp, log }
    }

    pub fn order(&self) -> u32 {
        self.size
    }
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    pub fn zero(&self) -> ExtFieldElement {
        ExtFieldElement(0)
    }
    pub fn one(&self) -> ExtFieldElement {
        ExtFieldElement(1)
    }
    pub fn from_code(&self, code: u32) -> ExtFieldElement {
        assert!(code < self.size);
        ExtFieldElement(code)
    }
    pub fn elements(&self) -> impl Iterator<Item = ExtFieldElement> {
        (0..self.size).map(ExtFieldElement)
    }
    /// The generator raised to the k-th power.
    pub fn gen_pow(&self, k: i64) -> ExtFieldElement {
        let m = self.exp.len() as i64;
        ExtFieldElement(self.exp[k.rem_euclid(m) as usize])
    }
    /// Logarithm to the base of the fixed generator.
    pub fn log(&self, x: ExtFieldElement) -> Option<u32> {
        match self.log[x.0 as usize] {
            NONE => None,
            l => Some(l),
        }
    }
    pub fn add(&self, x: ExtFieldElement, y: ExtFieldElement) -> ExtFieldElement {
        let (mut a, mut b, mut r, mut scale) = (x.0, y.0, 0, 1);
        for _ in 0..self.len {
            r += ((a % self.p + b % self.p) % self.p) * scale;
            a /= self.p;
            b /= self.p;
            scale *= self.p;
        }
        ExtFieldElement(r)
    }
    pub fn neg(&self, x: ExtFieldElement) -> ExtFieldElement {
        let (mut a, mut r, mut scale) = (x.0, 0, 1);
        for _ in 0..self.len {
            r += ((self.p - a % self.p) % self.p) * scale;
            a /= self.p;
            scale *= self.p;
        }
        ExtFieldElement(r)
    }
    pub fn sub(&self, x: ExtFieldElement, y: ExtFieldElement) -> ExtFieldElement {
        self.add(x, self.neg(y))
    }
    pub fn mul(&self, x: ExtFieldElement, y: ExtFieldElement) -> ExtFieldElement {
        if x.0 == 0 || y.0 == 0 {
            return ExtFieldElement(0);
        }
        let m = self.exp.len() as u32;
        let l = (self.log[x.0 as usize] + self.log[y.0 as usize]) % m;
        ExtFieldElement(self.exp[l as usize])
    }
    pub fn checked_inv(&self, x: ExtFieldElement) -> Option<ExtFieldElement> {
        let l = self.log(x)?;
        let m = self.exp.len() as u32;
        Some(ExtFieldElement(self.exp[((m - l) % m) as usize]))
    }
    pub fn inv(&self, x: ExtFieldElement) -> ExtFieldElement {
        self.checked_inv(x).expect("inverse of zero in F_q^2")
    }
    pub fn div(&self, x: ExtFieldElement, y: ExtFieldElement) -> ExtFieldElement {
        self.mul(x, self.inv(y))
    }
    pub fn pow(&self, x: ExtFieldElement, k: i64) -> ExtFieldElement {
        match self.log(x) {
            None => {
                assert!(k > 0, "non-positive power of zero");
                x
            }
            Some(l) => self.gen_pow(l as i64 * k.rem_euclid(self.exp.len() as i64)),
        }
    }
    /// A square root, if one exists; the one with the smaller logarithm.
    pub fn sqrt(&self, x: ExtFieldElement) -> Option<ExtFieldElement> {
        if x.0 == 0 {
            return Some(x);
        }
        let l = self.log(x)?;
        (l % 2 == 0).then(|| self.gen_pow((l / 2) as i64))
    }
    pub fn coeffs(&self, x: ExtFieldElement) -> Vec<u32> {
        decode(x.0, self.p, self.len)
    }
    pub fn from_coeffs(&self, c: &[u32]) -> ExtFieldElement {
        let mut d: Vec<u32> = c.iter().map(|x| x % self.p).collect();
        d.resize(self.len, 0);
        ExtFieldElement(encode(&d, self.p))
    }
    pub fn format(&self, x: ExtFieldElement) -> String {
        format_digits(&self.coeffs(x))
    }
    pub fn parse(&self, s: &str) -> Result<ExtFieldElement> {
        Ok(ExtFieldElement(encode(&parse_digits(s, self.p, self.len)?, self.p)))
    }
}

/// The field tower F_p ⊂ F_q ⊂ F_{q^2} with its distinguished generators.
#[derive(Clone, Debug)]
pub struct FieldParams {
    pub p: u32,
    pub n: u32,
    pub q: u32,
    pub h: u32,
    pub base: BaseField,
    pub ext: ExtField,
    embed: Vec<u32>,
    restrict: Vec<u32>,
    exp_e: Vec<u32>,
    log_e: Vec<u32>,
    trace: Vec<u32>,
}

impl FieldParams {
    pub fn new(q: u64) -> Result<FieldParams> {
        let invalid = |reason: &str| Error::InvalidOrder { q, reason: reason.to_string() };
        let (p, n) = prime_power(q).ok_or_else(|| invalid("not a prime power"))?;
        if p == 2 {
            return Err(invalid("characteristic 2 is not supported"));
        }
        if q < 5 {
            return Err(invalid("q must be at least 5"));
        }
        if q % 4 != 1 {
            return Err(invalid("q must be congruent to 1 mod 4"));
        }
        if q > MAX_Q as u64 {
            return Err(invalid(&format!("q must be at most {MAX_Q}")));
        }
        let q = q as u32;
        let h = (q - 1) / 4;
        let base = BaseField::new(p, n, smallest_irreducible(n as usize, p));
        let ext = ExtField::new(p, n, smallest_irreducible(2 * n as usize, p));

        // The embedding sends t to the smallest root of m in F_{q^2}.
        let m = base.modulus().to_vec();
        let eval = |x: ExtFieldElement, poly: &[u32]| {
            poly.iter().rev().fold(ext.zero(), |acc, &c| {
                ext.add(ext.mul(acc, x), ext.from_coeffs(&[c]))
            })
        };
        let root = ext
            .elements()
            .find(|&x| eval(x, &m).is_zero())
            .expect("m splits in F_q^2");
        let mut embed = vec![0; q as usize];
        let mut restrict = vec![NONE; ext.order() as usize];
        for y in base.elements() {
            let img = eval(root, &base.coeffs(y));
            embed[y.0 as usize] = img.0;
            restrict[img.0 as usize] = y.0;
        }

        let mut fp = FieldParams {
            p,
            n,
            q,
            h,
            base,
            ext,
            embed,
            restrict,
            exp_e: Vec::new(),
            log_e: Vec::new(),
            trace: Vec::new(),
        };
        let e = fp.e();
        let mut x = fp.base.one();
        fp.log_e = vec![NONE; q as usize];
        for k in 0..q - 1 {
            fp.exp_e.push(x.0);
            fp.log_e[x.0 as usize] = k;
            x = fp.base.mul(x, e);
        }
        fp.trace = fp
            .base
            .elements()
            .map(|y| {
                let mut acc = fp.base.zero();
                let mut z = y;
                for _ in 0..n {
                    acc = fp.base.add(acc, z);
                    z = fp.base.pow(z, p as u64);
                }
                assert!(acc.0 < p, "trace lands in F_p");
                acc.0
            })
            .collect();
        Ok(fp)
    }

    pub fn embed(&self, y: FieldElement) -> ExtFieldElement {
        ExtFieldElement(self.embed[y.0 as usize])
    }
    /// The preimage in F_q, if x lies in the subfield.
    pub fn restrict(&self, x: ExtFieldElement) -> Option<FieldElement> {
        match self.restrict[x.0 as usize] {
            NONE => None,
            y => Some(FieldElement(y)),
        }
    }

    /// The fixed generator ě of F_{q^2}^×.
    pub fn check_gen(&self) -> ExtFieldElement {
        self.ext.gen_pow(1)
    }
    /// ẽ = ě^{2h+1}.
    pub fn e_tilde(&self) -> ExtFieldElement {
        self.ext.gen_pow(2 * self.h as i64 + 1)
    }
    /// f̃ = ě^{2h}.
    pub fn f_tilde(&self) -> ExtFieldElement {
        self.ext.gen_pow(2 * self.h as i64)
    }
    /// f = ě^{4h}, a generator of the norm-one subgroup.
    pub fn f(&self) -> ExtFieldElement {
        self.ext.gen_pow(4 * self.h as i64)
    }
    /// f^k.
    pub fn f_pow(&self, k: i64) -> ExtFieldElement {
        self.ext.gen_pow(4 * self.h as i64 * k.rem_euclid(self.q as i64 + 1))
    }
    /// e = ě^{q+1}, a generator of F_q^×.
    pub fn e(&self) -> FieldElement {
        self.restrict(self.ext.gen_pow(self.q as i64 + 1)).expect("e lies in F_q")
    }
    /// e^k.
    pub fn e_pow(&self, k: i64) -> FieldElement {
        if self.exp_e.is_empty() {
            return self.base.pow(self.e(), k.rem_euclid(self.q as i64 - 1) as u64);
        }
        FieldElement(self.exp_e[k.rem_euclid(self.q as i64 - 1) as usize])
    }

    pub fn norm(&self, x: ExtFieldElement) -> FieldElement {
        self.restrict(self.ext.pow(x, self.q as i64 + 1))
            .expect("norm lies in F_q")
    }
    pub fn conj(&self, x: ExtFieldElement) -> ExtFieldElement {
        if x.is_zero() {
            return x;
        }
        self.ext.pow(x, self.q as i64)
    }
    /// Field trace F_q -> F_p, as a residue in [0, p).
    pub fn trace_to_prime(&self, y: FieldElement) -> u32 {
        self.trace[y.0 as usize]
    }
    /// Logarithm of y to the base e, in [0, q-1).
    pub fn dlog(&self, y: FieldElement) -> Result<u32> {
        match self.log_e[y.0 as usize] {
            NONE => Err(Error::Domain("dlog of zero")),
            k => Ok(k),
        }
    }
    pub fn is_square(&self, y: FieldElement) -> Result<bool> {
        self.dlog(y)
            .map(|k| k % 2 == 0)
            .map_err(|_| Error::Domain("square class of zero"))
    }
    /// The square root e^{k/2} of a square e^k; zero maps to zero.
    pub fn sqrt(&self, y: FieldElement) -> Option<FieldElement> {
        if y.is_zero() {
            return Some(y);
        }
        let k = self.dlog(y).ok()?;
        (k % 2 == 0).then(|| self.e_pow((k / 2) as i64))
    }

    /// r_k = (e^k + e^{-k})/2.
    pub fn r(&self, k: i64) -> FieldElement {
        let b = &self.base;
        b.div(b.add(self.e_pow(k), self.e_pow(-k)), b.from_int(2))
    }
    /// r'_k = (e^k - e^{-k})/2.
    pub fn r_prime(&self, k: i64) -> FieldElement {
        let b = &self.base;
        b.div(b.sub(self.e_pow(k), self.e_pow(-k)), b.from_int(2))
    }
    fn half_sum(&self, x: ExtFieldElement, sign: bool) -> ExtFieldElement {
        let x_inv = self.ext.inv(x);
        let s = if sign { self.ext.add(x, x_inv) } else { self.ext.sub(x, x_inv) };
        self.ext.div(s, self.embed(self.base.from_int(2)))
    }
    /// s_ℓ = (f^ℓ + f^{-ℓ})/2, which lies in F_q.
    pub fn s(&self, l: i64) -> FieldElement {
        self.restrict(self.half_sum(self.f_pow(l), true)).expect("s_l lies in F_q")
    }
    /// s'_ℓ = (f^ℓ - f^{-ℓ})/2.
    pub fn s_prime(&self, l: i64) -> ExtFieldElement {
        self.half_sum(self.f_pow(l), false)
    }
    /// s̃_ℓ = (f̃^ℓ + f̃^{-ℓ})/2.
    pub fn s_tilde(&self, l: i64) -> ExtFieldElement {
        self.half_sum(self.ext.pow(self.f_tilde(), l), true)
    }
    /// s̃'_ℓ = (f̃^ℓ - f̃^{-ℓ})/2.
    pub fn s_tilde_prime(&self, l: i64) -> ExtFieldElement {
        self.half_sum(self.ext.pow(self.f_tilde(), l), false)
    }
}

/// Validating constructor; see [`FieldParams::new`].
pub fn make_field(q: u64) -> Result<FieldParams> {
    FieldParams::new(q)
}

impl fmt::Display for FieldParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{} (p={}, n={}, h={})", self.q, self.p, self.n, self.h)
    }
}
