//! The group SL(2,q): enumeration, conjugacy classes with witnesses, centralizers.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{parse_err, Error, Result};
use crate::gf::{ExtFieldElement, FieldElement, FieldParams};

/// A sign μ ∈ {+,-}; `acute` is the exponent with μ = (-1)^acute.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn acute(self) -> u32 {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }
    pub fn from_parity(k: i64) -> Sign {
        if k.rem_euclid(2) == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_parity((self.acute() + rhs.acute()) as i64)
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

impl FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Sign> {
        match s {
            "+" => Ok(Sign::Plus),
            "-" => Ok(Sign::Minus),
            _ => Err(parse_err(s, "`+` or `-`")),
        }
    }
}

/// A 2×2 matrix of determinant one over F_q, row-major.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GroupElement {
    pub a: FieldElement,
    pub b: FieldElement,
    pub c: FieldElement,
    pub d: FieldElement,
}

/// Canonical conjugacy class tag.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum ClassLabel {
    Central(Sign),
    A(u32),
    B(Sign, Sign),
    C(u32),
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassLabel::Central(mu) => write!(f, "{mu}e"),
            ClassLabel::A(k) => write!(f, "a^{k}"),
            ClassLabel::B(mu, eps) => write!(f, "{mu}b_{eps}"),
            ClassLabel::C(l) => write!(f, "c^{l}"),
        }
    }
}

impl ClassLabel {
    /// Parses the text form used by [`fmt::Display`]: `+e`, `a^2`, `-b_+`, `c^3`.
    pub fn parse(s: &str) -> Result<ClassLabel> {
        let expected = "class label `+e`, `-e`, `a^<k>`, `<μ>b_<ε>` or `c^<ℓ>`";
        let err = || parse_err(s, expected);
        if let Some(k) = s.strip_prefix("a^") {
            return k.parse().map(ClassLabel::A).map_err(|_| err());
        }
        if let Some(l) = s.strip_prefix("c^") {
            return l.parse().map(ClassLabel::C).map_err(|_| err());
        }
        let mut chars = s.chars();
        let mu: Sign = chars.next().ok_or_else(err)?.to_string().parse().map_err(|_| err())?;
        let rest: String = chars.collect();
        if rest == "e" {
            return Ok(ClassLabel::Central(mu));
        }
        if let Some(eps) = rest.strip_prefix("b_") {
            return Ok(ClassLabel::B(mu, eps.parse().map_err(|_| err())?));
        }
        Err(err())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum CentralizerKind {
    FullGroup,
    CyclicSplit,
    Unipotent,
    CyclicNonsplit,
}

#[derive(Clone, Debug)]
pub struct CentralizerDesc {
    pub kind: CentralizerKind,
    pub order: u64,
    pub generators: Vec<GroupElement>,
}

/// Position of an element inside the centralizer of a non-central class representative.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CenCoord {
    /// a^j, j mod q-1.
    Split(u32),
    /// s·b(y).
    Unipotent(Sign, FieldElement),
    /// c^j, j mod q+1.
    Nonsplit(u32),
}

/// 2×2 matrix over F_{q^2}; used for the k-conjugation computations.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ExtMatrix(pub [[ExtFieldElement; 2]; 2]);

/// SL(2,q) together with class and centralizer tables.
pub struct Sl2 {
    pub field: FieldParams,
    elements: Vec<GroupElement>,
    index: Vec<u32>,
    classes: Vec<ClassLabel>,
    reps: Vec<GroupElement>,
    elem_class: Vec<u16>,
    elem_witness: Vec<u32>,
    members: Vec<Vec<u32>>,
    cen_members: Vec<Vec<u32>>,
}

impl Sl2 {
    pub fn new(q: u64) -> Result<Sl2> {
        Ok(Sl2::from_field(FieldParams::new(q)?))
    }

    pub fn from_field(field: FieldParams) -> Sl2 {
        let q = field.q;
        let h = field.h;
        let f = &field.base;
        let mut elements = Vec::new();
        let mut index = vec![u32::MAX; (q as usize).pow(4)];
        for a in f.elements() {
            for b in f.elements() {
                for c in f.elements() {
                    for d in f.elements() {
                        if f.sub(f.mul(a, d), f.mul(b, c)) == f.one() {
                            let code = ((a.0 * q + b.0) * q + c.0) * q + d.0;
                            index[code as usize] = elements.len() as u32;
                            elements.push(GroupElement { a, b, c, d });
                        }
                    }
                }
            }
        }
        let mut classes = vec![ClassLabel::Central(Sign::Plus), ClassLabel::Central(Sign::Minus)];
        classes.extend((1..2 * h).map(ClassLabel::A));
        for mu in Sign::BOTH {
            for eps in Sign::BOTH {
                classes.push(ClassLabel::B(mu, eps));
            }
        }
        classes.extend((1..=2 * h).map(ClassLabel::C));

        let mut g = Sl2 {
            field,
            elements,
            index,
            classes,
            reps: Vec::new(),
            elem_class: Vec::new(),
            elem_witness: Vec::new(),
            members: Vec::new(),
            cen_members: Vec::new(),
        };
        g.reps = g.classes.iter().map(|&l| g.representative(l)).collect();
        let n = g.elements.len();
        g.elem_class = Vec::with_capacity(n);
        g.elem_witness = Vec::with_capacity(n);
        g.members = vec![Vec::new(); g.classes.len()];
        for i in 0..n {
            let x = g.elements[i];
            let (label, w) = g.classify(&x);
            let id = g.class_id(label);
            g.elem_class.push(id as u16);
            g.elem_witness.push(g.index_of(&w) as u32);
            g.members[id].push(i as u32);
        }
        g.cen_members = (0..g.classes.len()).map(|id| g.centralizer_list(id)).collect();
        g
    }

    pub fn q(&self) -> u32 {
        self.field.q
    }
    pub fn h(&self) -> u32 {
        self.field.h
    }
    /// |SL(2,q)| = q(q²-1).
    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    // ----- element arithmetic -----

    pub fn identity(&self) -> GroupElement {
        self.scalar(Sign::Plus)
    }
    /// μe.
    pub fn scalar(&self, mu: Sign) -> GroupElement {
        let f = &self.field.base;
        let s = f.from_int(mu.value());
        GroupElement { a: s, b: f.zero(), c: f.zero(), d: s }
    }
    pub fn mul(&self, x: &GroupElement, y: &GroupElement) -> GroupElement {
        let f = &self.field.base;
        GroupElement {
            a: f.add(f.mul(x.a, y.a), f.mul(x.b, y.c)),
            b: f.add(f.mul(x.a, y.b), f.mul(x.b, y.d)),
            c: f.add(f.mul(x.c, y.a), f.mul(x.d, y.c)),
            d: f.add(f.mul(x.c, y.b), f.mul(x.d, y.d)),
        }
    }
    pub fn inv(&self, x: &GroupElement) -> GroupElement {
        let f = &self.field.base;
        GroupElement { a: x.d, b: f.neg(x.b), c: f.neg(x.c), d: x.a }
    }
    /// g x g^{-1}.
    pub fn conj_by(&self, g: &GroupElement, x: &GroupElement) -> GroupElement {
        self.mul(&self.mul(g, x), &self.inv(g))
    }
    pub fn pow(&self, x: &GroupElement, k: i64) -> GroupElement {
        let mut base = if k < 0 { self.inv(x) } else { *x };
        let mut k = k.unsigned_abs();
        let mut acc = self.identity();
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            k >>= 1;
        }
        acc
    }
    pub fn trace(&self, x: &GroupElement) -> FieldElement {
        self.field.base.add(x.a, x.d)
    }
    pub fn neg(&self, x: &GroupElement) -> GroupElement {
        let f = &self.field.base;
        GroupElement { a: f.neg(x.a), b: f.neg(x.b), c: f.neg(x.c), d: f.neg(x.d) }
    }
    /// μ·x.
    pub fn signed(&self, mu: Sign, x: &GroupElement) -> GroupElement {
        match mu {
            Sign::Plus => *x,
            Sign::Minus => self.neg(x),
        }
    }
    /// Builds a matrix from entries, checking the determinant.
    pub fn element(&self, a: FieldElement, b: FieldElement, c: FieldElement, d: FieldElement) -> Result<GroupElement> {
        let f = &self.field.base;
        if f.sub(f.mul(a, d), f.mul(b, c)) != f.one() {
            return Err(Error::Domain("matrix does not have determinant one"));
        }
        Ok(GroupElement { a, b, c, d })
    }

    /// a(x) = diag(x, x^{-1}).
    pub fn a_of(&self, x: FieldElement) -> GroupElement {
        let f = &self.field.base;
        GroupElement { a: x, b: f.zero(), c: f.zero(), d: f.inv(x) }
    }
    /// a^k = a(e^k).
    pub fn a_pow(&self, k: i64) -> GroupElement {
        self.a_of(self.field.e_pow(k))
    }
    /// b(y) = [[1, y], [0, 1]].
    pub fn b_of(&self, y: FieldElement) -> GroupElement {
        let f = &self.field.base;
        GroupElement { a: f.one(), b: y, c: f.zero(), d: f.one() }
    }
    /// b_ε = b(e^{έ}).
    pub fn b_eps(&self, eps: Sign) -> GroupElement {
        self.b_of(self.field.e_pow(eps.acute() as i64))
    }
    /// c^ℓ = [[s_ℓ, s'_ℓ ẽ^{-1}], [s'_ℓ ẽ, s_ℓ]].
    pub fn c_pow(&self, l: i64) -> GroupElement {
        let fp = &self.field;
        let et = fp.e_tilde();
        let sp = fp.s_prime(l);
        let s = fp.s(l);
        let b = fp.restrict(fp.ext.div(sp, et)).expect("s'_l / ẽ lies in F_q");
        let c = fp.restrict(fp.ext.mul(sp, et)).expect("s'_l ẽ lies in F_q");
        GroupElement { a: s, b, c, d: s }
    }
    /// j = [[0, 1], [-1, 0]].
    pub fn j(&self) -> GroupElement {
        let f = &self.field.base;
        GroupElement { a: f.zero(), b: f.one(), c: f.neg(f.one()), d: f.zero() }
    }

    /// Generators of SL(2,q): a, j and b(t^i) for an F_p-basis t^i of F_q.
    pub fn generators(&self) -> Vec<GroupElement> {
        let mut out = vec![self.a_pow(1), self.j()];
        for i in 0..self.field.n as usize {
            let mut c = vec![0; self.field.n as usize];
            c[i] = 1;
            out.push(self.b_of(self.field.base.from_coeffs(&c)));
        }
        out
    }

    // ----- enumeration -----

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }
    #[inline]
    pub fn index_of(&self, x: &GroupElement) -> usize {
        let q = self.field.q;
        let code = ((x.a.0 * q + x.b.0) * q + x.c.0) * q + x.d.0;
        self.index[code as usize] as usize
    }
    #[inline]
    pub fn at(&self, i: usize) -> GroupElement {
        self.elements[i]
    }

    // ----- classes -----

    pub fn classes(&self) -> &[ClassLabel] {
        &self.classes
    }
    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }
    pub fn class_id(&self, label: ClassLabel) -> usize {
        let h = self.h() as usize;
        match label {
            ClassLabel::Central(mu) => mu.acute() as usize,
            ClassLabel::A(k) => 1 + k as usize,
            ClassLabel::B(mu, eps) => 2 * h + 1 + 2 * mu.acute() as usize + eps.acute() as usize,
            ClassLabel::C(l) => 2 * h + 4 + l as usize,
        }
    }
    pub fn class_label(&self, id: usize) -> ClassLabel {
        self.classes[id]
    }
    /// Checks the parameter windows of a class label.
    pub fn validate_class(&self, label: ClassLabel) -> Result<ClassLabel> {
        let h = self.h();
        let bad = |what: &str, v: u32, window: String| Error::OutOfRange {
            what: what.to_string(),
            value: v.to_string(),
            window,
        };
        match label {
            ClassLabel::A(k) if !(1..2 * h).contains(&k) => Err(bad("k", k, format!("[1, {}]", 2 * h - 1))),
            ClassLabel::C(l) if !(1..=2 * h).contains(&l) => Err(bad("l", l, format!("[1, {}]", 2 * h))),
            _ => Ok(label),
        }
    }
    pub fn rep(&self, id: usize) -> GroupElement {
        self.reps[id]
    }
    pub fn representative(&self, label: ClassLabel) -> GroupElement {
        match label {
            ClassLabel::Central(mu) => self.scalar(mu),
            ClassLabel::A(k) => self.a_pow(k as i64),
            ClassLabel::B(mu, eps) => self.signed(mu, &self.b_eps(eps)),
            ClassLabel::C(l) => self.c_pow(l as i64),
        }
    }
    #[inline]
    pub fn class_id_of_index(&self, i: usize) -> usize {
        self.elem_class[i] as usize
    }
    #[inline]
    pub fn witness_index(&self, i: usize) -> usize {
        self.elem_witness[i] as usize
    }
    /// Canonical label and a witness w with w·rep·w^{-1} = g.
    pub fn class_of(&self, g: &GroupElement) -> (ClassLabel, GroupElement) {
        let i = self.index_of(g);
        (self.classes[self.elem_class[i] as usize], self.elements[self.elem_witness[i] as usize])
    }
    /// Indices of the class members, in lexicographic order of entries.
    pub fn member_indices(&self, id: usize) -> &[u32] {
        &self.members[id]
    }
    pub fn class_members(&self, label: ClassLabel) -> impl Iterator<Item = GroupElement> + '_ {
        self.members[self.class_id(label)].iter().map(|&i| self.elements[i as usize])
    }
    pub fn class_size(&self, label: ClassLabel) -> u64 {
        self.members[self.class_id(label)].len() as u64
    }

    /// Direct classification; the tables built at construction cache its result.
    pub fn classify(&self, g: &GroupElement) -> (ClassLabel, GroupElement) {
        let fp = &self.field;
        let f = &fp.base;
        let q = fp.q as i64;
        let h = fp.h as i64;
        for mu in Sign::BOTH {
            if *g == self.scalar(mu) {
                return (ClassLabel::Central(mu), self.identity());
            }
        }
        let t = self.trace(g);
        let two = f.from_int(2);
        let label = if t == two || t == f.neg(two) {
            let mu = if t == two { Sign::Plus } else { Sign::Minus };
            let n = self.mul(&self.scalar(mu), g);
            let (n12, n21) = (n.b, n.c);
            let probe = if !n12.is_zero() { n12 } else { f.neg(n21) };
            let eps = if fp.is_square(probe).unwrap() { Sign::Plus } else { Sign::Minus };
            ClassLabel::B(mu, eps)
        } else {
            let disc = f.sub(f.mul(t, t), f.from_int(4));
            let half = f.inv(two);
            if let Some(r) = fp.sqrt(disc) {
                let lambda = f.mul(f.add(t, r), half);
                let j = fp.dlog(lambda).unwrap() as i64;
                ClassLabel::A(if j < 2 * h { j } else { q - 1 - j } as u32)
            } else {
                let ext = &fp.ext;
                let r = ext.sqrt(fp.embed(disc)).expect("every element of F_q is a square in F_q^2");
                let lambda = ext.mul(ext.add(fp.embed(t), r), fp.embed(half));
                let j = (ext.log(lambda).unwrap() / (q as u32 - 1)) as i64;
                ClassLabel::C(if j <= 2 * h { j } else { q + 1 - j } as u32)
            }
        };
        let rep = self.representative(label);
        (label, self.conjugator(&rep, g))
    }

    /// w ∈ SL(2,q) with w·r·w^{-1} = g, for non-central r, g of the same class.
    fn conjugator(&self, r: &GroupElement, g: &GroupElement) -> GroupElement {
        if r == g {
            return self.identity();
        }
        let f = &self.field.base;
        let apply = |m: &GroupElement, v: (FieldElement, FieldElement)| {
            (f.add(f.mul(m.a, v.0), f.mul(m.b, v.1)), f.add(f.mul(m.c, v.0), f.mul(m.d, v.1)))
        };
        let cyclic = |m: &GroupElement, v: (FieldElement, FieldElement)| {
            let w = apply(m, v);
            !f.sub(f.mul(v.0, w.1), f.mul(v.1, w.0)).is_zero()
        };
        let v = std::iter::once((f.zero(), f.one()))
            .chain(f.elements().map(|x| (f.one(), x)))
            .find(|&v| cyclic(r, v) && cyclic(g, v))
            .expect("non-scalar matrices have a common cyclic vector");
        let krylov = |m: &GroupElement| {
            let w = apply(m, v);
            (v.0, w.0, v.1, w.1)
        };
        let (ka, kb, kc, kd) = krylov(g);
        let (ra, rb, rc, rd) = krylov(r);
        let det_r = f.sub(f.mul(ra, rd), f.mul(rb, rc));
        let di = f.inv(det_r);
        // K_r^{-1} = det^{-1} [[rd, -rb], [-rc, ra]]
        let (ia, ib, ic, id) = (f.mul(rd, di), f.neg(f.mul(rb, di)), f.neg(f.mul(rc, di)), f.mul(ra, di));
        let w0 = (
            f.add(f.mul(ka, ia), f.mul(kb, ic)),
            f.add(f.mul(ka, ib), f.mul(kb, id)),
            f.add(f.mul(kc, ia), f.mul(kd, ic)),
            f.add(f.mul(kc, ib), f.mul(kd, id)),
        );
        let d0 = f.sub(f.mul(w0.0, w0.3), f.mul(w0.1, w0.2));
        let target = f.inv(d0);
        let t = self.trace(r);
        for beta in f.elements() {
            for alpha in f.elements() {
                let det = f.add(f.add(f.mul(alpha, alpha), f.mul(f.mul(alpha, beta), t)), f.mul(beta, beta));
                if det == target {
                    // z = α e + β r
                    let z = GroupElement {
                        a: f.add(alpha, f.mul(beta, r.a)),
                        b: f.mul(beta, r.b),
                        c: f.mul(beta, r.c),
                        d: f.add(alpha, f.mul(beta, r.d)),
                    };
                    let w0m = GroupElement { a: w0.0, b: w0.1, c: w0.2, d: w0.3 };
                    return self.mul(&w0m, &z);
                }
            }
        }
        unreachable!("the norm form of F_q[r] is surjective")
    }

    // ----- centralizers -----

    pub fn centralizer(&self, label: ClassLabel) -> CentralizerDesc {
        let q = self.q() as u64;
        match label {
            ClassLabel::Central(_) => CentralizerDesc {
                kind: CentralizerKind::FullGroup,
                order: self.order(),
                generators: self.generators(),
            },
            ClassLabel::A(_) => CentralizerDesc {
                kind: CentralizerKind::CyclicSplit,
                order: q - 1,
                generators: vec![self.a_pow(1)],
            },
            ClassLabel::B(_, _) => {
                let mut generators = vec![self.scalar(Sign::Minus)];
                for i in 0..self.field.n as usize {
                    let mut c = vec![0; self.field.n as usize];
                    c[i] = 1;
                    generators.push(self.b_of(self.field.base.from_coeffs(&c)));
                }
                CentralizerDesc { kind: CentralizerKind::Unipotent, order: 2 * q, generators }
            }
            ClassLabel::C(_) => CentralizerDesc {
                kind: CentralizerKind::CyclicNonsplit,
                order: q + 1,
                generators: vec![self.c_pow(1)],
            },
        }
    }

    fn centralizer_list(&self, id: usize) -> Vec<u32> {
        let f = &self.field.base;
        let q = self.q() as i64;
        let list: Vec<GroupElement> = match self.classes[id] {
            ClassLabel::Central(_) => self.elements.clone(),
            ClassLabel::A(_) => (0..q - 1).map(|j| self.a_pow(j)).collect(),
            ClassLabel::B(_, _) => Sign::BOTH
                .iter()
                .flat_map(|&s| f.elements().map(move |y| (s, y)))
                .map(|(s, y)| self.signed(s, &self.b_of(y)))
                .collect(),
            ClassLabel::C(_) => (0..q + 1).map(|j| self.c_pow(j)).collect(),
        };
        list.iter().map(|x| self.index_of(x) as u32).collect()
    }

    /// Elements of the centralizer of the class representative, in coordinate order
    /// (a^j, then s·b(y) with s = + first, then c^j). For central classes: all of Γ.
    pub fn centralizer_indices(&self, id: usize) -> &[u32] {
        &self.cen_members[id]
    }

    /// Coordinate of h in the centralizer of the representative of a non-central class.
    pub fn cen_coord(&self, id: usize, h: &GroupElement) -> CenCoord {
        let fp = &self.field;
        match self.classes[id] {
            ClassLabel::A(_) => CenCoord::Split(fp.dlog(h.a).expect("diagonal entry is nonzero")),
            ClassLabel::B(_, _) => {
                let s = if h.a == fp.base.one() { Sign::Plus } else { Sign::Minus };
                let y = if s == Sign::Plus { h.b } else { fp.base.neg(h.b) };
                CenCoord::Unipotent(s, y)
            }
            ClassLabel::C(_) => {
                let ext = &fp.ext;
                let lambda = ext.add(fp.embed(h.a), ext.mul(fp.embed(h.b), fp.e_tilde()));
                CenCoord::Nonsplit(ext.log(lambda).expect("eigenvalue is nonzero") / (fp.q - 1))
            }
            ClassLabel::Central(_) => panic!("central classes have no centralizer coordinates"),
        }
    }

    // ----- matrices over F_{q^2} -----

    pub fn to_ext(&self, x: &GroupElement) -> ExtMatrix {
        let e = |y| self.field.embed(y);
        ExtMatrix([[e(x.a), e(x.b)], [e(x.c), e(x.d)]])
    }
    /// The matrix if all entries lie in F_q and its determinant is one.
    pub fn from_ext(&self, m: &ExtMatrix) -> Option<GroupElement> {
        let r = |y| self.field.restrict(y);
        let [[a, b], [c, d]] = m.0;
        self.element(r(a)?, r(b)?, r(c)?, r(d)?).ok()
    }
    pub fn ext_mul(&self, x: &ExtMatrix, y: &ExtMatrix) -> ExtMatrix {
        let e = &self.field.ext;
        let mut out = [[e.zero(); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = e.add(e.mul(x.0[i][0], y.0[0][j]), e.mul(x.0[i][1], y.0[1][j]));
            }
        }
        ExtMatrix(out)
    }
    pub fn ext_det(&self, x: &ExtMatrix) -> ExtFieldElement {
        let e = &self.field.ext;
        e.sub(e.mul(x.0[0][0], x.0[1][1]), e.mul(x.0[0][1], x.0[1][0]))
    }
    pub fn ext_inv(&self, x: &ExtMatrix) -> ExtMatrix {
        let e = &self.field.ext;
        let di = e.inv(self.ext_det(x));
        let [[a, b], [c, d]] = x.0;
        ExtMatrix([[e.mul(d, di), e.neg(e.mul(b, di))], [e.neg(e.mul(c, di)), e.mul(a, di)]])
    }
    /// g x g^{-1} over F_{q^2}.
    pub fn ext_conj_by(&self, g: &ExtMatrix, x: &ExtMatrix) -> ExtMatrix {
        self.ext_mul(&self.ext_mul(g, x), &self.ext_inv(g))
    }
    /// k = [[1, -ẽ^{-1}], [ẽ, 1]].
    pub fn k_matrix(&self) -> ExtMatrix {
        let e = &self.field.ext;
        let et = self.field.e_tilde();
        ExtMatrix([[e.one(), e.neg(e.inv(et))], [et, e.one()]])
    }
    /// a(x) over F_{q^2}.
    pub fn a_ext(&self, x: ExtFieldElement) -> ExtMatrix {
        let e = &self.field.ext;
        ExtMatrix([[x, e.zero()], [e.zero(), e.inv(x)]])
    }

    // ----- text form -----

    pub fn format_element(&self, x: &GroupElement) -> String {
        let f = &self.field.base;
        format!("[[{},{}],[{},{}]]", f.format(x.a), f.format(x.b), f.format(x.c), f.format(x.d))
    }
    pub fn parse_element(&self, s: &str) -> Result<GroupElement> {
        let expected = "matrix `[[a,b],[c,d]]` of determinant one";
        let inner = s
            .trim()
            .strip_prefix("[[")
            .and_then(|r| r.strip_suffix("]]"))
            .ok_or_else(|| parse_err(s, expected))?;
        let rows: Vec<&str> = inner.split("],[").collect();
        if rows.len() != 2 {
            return Err(parse_err(s, expected));
        }
        let mut v = Vec::new();
        for row in rows {
            let entries: Vec<&str> = row.split(',').collect();
            if entries.len() != 2 {
                return Err(parse_err(row, expected));
            }
            for e in entries {
                v.push(self.field.base.parse(e)?);
            }
        }
        self.element(v[0], v[1], v[2], v[3])
            .map_err(|_| parse_err(s, expected))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_label_text_round_trip() {
        for l in [
            ClassLabel::Central(Sign::Minus),
            ClassLabel::A(3),
            ClassLabel::B(Sign::Minus, Sign::Plus),
            ClassLabel::C(2),
        ] {
            assert_eq!(ClassLabel::parse(&l.to_string()).unwrap(), l);
        }
        assert!(ClassLabel::parse("b_+").is_err());
    }

    #[test]
    fn element_text_round_trip() {
        let g = Sl2::new(5).unwrap();
        for x in g.elements().iter().step_by(7) {
            assert_eq!(g.parse_element(&g.format_element(x)).unwrap(), *x);
        }
        assert!(g.parse_element("[[1,1],[1,1]]").is_err());
    }
}
