//! The presentation `R_n / I_n` of `H(BSL_n, I)` by generators `P_i`, `X_n`,
//! `B_J`, the restriction `Phi_n`, the evaluation `theta` into the normal-form
//! model, and a Smith-normal-form oracle for the quotient's graded groups.
//!
//! Every word containing an odd-degree generator is 2-torsion modulo the
//! relations, so the graded-commutative sign is invisible and words are
//! stored as commutative monomials.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::coeff::{FieldTag, WittElement};
use crate::error::{AlgebraError, Result};
use crate::icoh::{beta_j, euler_class_icoh, icoh_mul, scalar_mul, ICohContext, ICohElement};
use crate::linalg::{cokernel, AbelianGroup};

/// Nonempty subset of `{1..(n-1)/2}`, as a bitmask (bit `j` for `j`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexSetJ(u32);

impl IndexSetJ {
    /// Validates distinct entries in `1..=(n-1)/2`, nonempty.
    pub fn new(n: u32, entries: &[u32]) -> Result<Self> {
        let top = (n.max(1) - 1) / 2;
        let mut bits = 0u32;
        for &j in entries {
            if j == 0 || j > top || bits >> j & 1 == 1 {
                return Err(AlgebraError::InvalidArgument(format!(
                    "invalid index set {entries:?} for n = {n}: need distinct entries in 1..={top}"
                )));
            }
            bits |= 1 << j;
        }
        if bits == 0 {
            return Err(AlgebraError::InvalidArgument("index set must be nonempty".into()));
        }
        Ok(IndexSetJ(bits))
    }

    fn from_bits(bits: u32) -> Option<Self> {
        (bits != 0).then_some(IndexSetJ(bits))
    }

    pub fn bits(&self) -> u32 {
        self.0
    }

    pub fn elements(&self) -> Vec<u32> {
        (1..32).filter(|j| self.0 >> j & 1 == 1).collect()
    }

    pub fn max(&self) -> u32 {
        31 - self.0.leading_zeros()
    }

    /// `deg B_J = 1 + sum 2j`.
    pub fn degree(&self) -> u32 {
        1 + 2 * self.elements().iter().sum::<u32>()
    }

    /// All nonempty index sets for `n`.
    pub fn all(n: u32) -> Vec<Self> {
        let top = (n.max(1) - 1) / 2;
        (1..1u32 << top).map(|b| IndexSetJ(b << 1)).collect()
    }
}

impl fmt::Display for IndexSetJ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elements().iter().map(u32::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Commutative word `P^a X^b B_{J_1} ... B_{J_r}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    /// Exponents of `P_1..P_k`, `k = (n-1)/2`.
    pub p: Vec<u32>,
    pub x: u32,
    /// Sorted multiset of index sets.
    pub b: Vec<IndexSetJ>,
}

impl Word {
    pub fn one(n: u32) -> Self {
        Word { p: vec![0; num_p(n)], x: 0, b: Vec::new() }
    }

    pub fn degree(&self, n: u32) -> u32 {
        let p: u32 = self.p.iter().enumerate().map(|(i, a)| 4 * (i as u32 + 1) * a).sum();
        p + n * self.x + self.b.iter().map(IndexSetJ::degree).sum::<u32>()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut b = self.b.clone();
        b.extend_from_slice(&other.b);
        b.sort();
        Word { p: self.p.iter().zip(&other.p).map(|(a, c)| a + c).collect(), x: self.x + other.x, b }
    }

    pub fn format(&self, n: u32) -> String {
        let mut parts = Vec::new();
        for (i, &a) in self.p.iter().enumerate() {
            match a {
                0 => {}
                1 => parts.push(format!("P{}", i + 1)),
                a => parts.push(format!("P{}^{a}", i + 1)),
            }
        }
        match self.x {
            0 => {}
            1 => parts.push(format!("X{n}")),
            a => parts.push(format!("X{n}^{a}")),
        }
        for j in &self.b {
            parts.push(format!("B{j}"));
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

fn num_p(n: u32) -> usize {
    ((n.max(1) - 1) / 2) as usize
}

/// `W(F)`-linear combination of words in `R_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresentationElement {
    n: u32,
    field: FieldTag,
    terms: BTreeMap<Word, WittElement>,
}

impl PresentationElement {
    pub fn zero(n: u32, field: FieldTag) -> Self {
        PresentationElement { n, field, terms: BTreeMap::new() }
    }

    pub fn word(n: u32, field: FieldTag, w: Word, c: WittElement) -> Self {
        let mut out = Self::zero(n, field);
        out.add_term(w, c);
        out
    }

    pub fn one(n: u32, field: FieldTag) -> Self {
        Self::word(n, field, Word::one(n), WittElement::one(field))
    }

    pub fn p(n: u32, field: FieldTag, i: u32) -> Result<Self> {
        if i == 0 || i as usize > num_p(n) {
            return Err(AlgebraError::InvalidArgument(format!("P_{i} is not a generator of R_{n}")));
        }
        let mut w = Word::one(n);
        w.p[i as usize - 1] = 1;
        Ok(Self::word(n, field, w, WittElement::one(field)))
    }

    pub fn x(n: u32, field: FieldTag) -> Self {
        let mut w = Word::one(n);
        w.x = 1;
        Self::word(n, field, w, WittElement::one(field))
    }

    pub fn b(n: u32, field: FieldTag, j: IndexSetJ) -> Self {
        let mut w = Word::one(n);
        w.b.push(j);
        Self::word(n, field, w, WittElement::one(field))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &WittElement)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, w: Word, c: WittElement) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(w).or_insert_with(|| WittElement::zero(c.field()));
        *entry = entry.add(&c);
        self.terms.retain(|_, v| !v.is_zero());
    }

    fn check(&self, other: &Self) {
        assert!(self.n == other.n && self.field == other.field, "presentation context mismatch");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), *c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        PresentationElement {
            n: self.n,
            field: self.field,
            terms: self.terms.iter().map(|(w, c)| (w.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &WittElement) -> Self {
        let mut out = Self::zero(self.n, self.field);
        for (w, v) in &self.terms {
            out.add_term(w.clone(), v.mul(c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let mut out = Self::zero(self.n, self.field);
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                out.add_term(wa.mul(wb), ca.mul(cb));
            }
        }
        out
    }

    /// Highest word degree, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|w| w.degree(self.n)).max()
    }
}

impl fmt::Display for PresentationElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let one = WittElement::one(self.field);
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| if *c == one { w.format(self.n) } else { format!("({c})*{}", w.format(self.n)) })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Evaluation `R_n -> H(BSL_n, I)`: `P_i -> p_{2i}`, `X_n -> e_n`,
/// `B_J -> beta(prod cb_{2j})`.
pub fn theta(ctx: &Arc<ICohContext>, x: &PresentationElement) -> Result<ICohElement> {
    if ctx.n() != x.n || ctx.field() != x.field {
        return Err(AlgebraError::ContextMismatch);
    }
    let n = x.n;
    let ps: Vec<ICohElement> = (1..=num_p(n) as u32)
        .map(|i| ICohElement::generator(ctx, &format!("p{}", 2 * i)))
        .collect::<Result<_>>()?;
    let e = euler_class_icoh(ctx)?;
    let mut betas: HashMap<IndexSetJ, ICohElement> = HashMap::new();
    let mut acc = ICohElement::zero(ctx);
    for (w, c) in &x.terms {
        let mut term = ICohElement::from_witt(ctx, WittElement::one(x.field));
        for (i, &a) in w.p.iter().enumerate() {
            for _ in 0..a {
                term = icoh_mul(&term, &ps[i])?;
            }
        }
        for _ in 0..w.x {
            term = icoh_mul(&term, &e)?;
        }
        for j in &w.b {
            let bj = match betas.get(j) {
                Some(b) => b.clone(),
                None => {
                    let b = beta_j(ctx, &j.elements())?;
                    betas.insert(*j, b.clone());
                    b
                }
            };
            term = icoh_mul(&term, &bj)?;
        }
        acc = acc.add(&scalar_mul(c, &term)?);
    }
    Ok(acc)
}

/// The defining relations of `I_n` of degree at most `max_degree`:
/// `I(F) B_J`, `X_{2k+1} - B_{k}` and the product rule for `B_J B_J'`.
pub fn ideal_generators(n: u32, field: FieldTag, max_degree: u32) -> Vec<PresentationElement> {
    let mut out = Vec::new();
    let js = IndexSetJ::all(n);
    let ideal: Vec<WittElement> = field
        .descriptor()
        .fundamental_ideal
        .iter()
        .map(|g| {
            let mut c = [0i64; 2];
            c[..g.len()].copy_from_slice(g);
            WittElement::from_coords(field, c)
        })
        .collect();
    for j in &js {
        if j.degree() <= max_degree {
            for w in &ideal {
                out.push(PresentationElement::b(n, field, *j).scale(w));
            }
        }
    }
    if n % 2 == 1 && n >= 3 && n <= max_degree {
        let k = IndexSetJ::new(n, &[(n - 1) / 2]).unwrap();
        out.push(PresentationElement::x(n, field).sub(&PresentationElement::b(n, field, k)));
    }
    for j in &js {
        for jp in &js {
            if j.degree() + jp.degree() > max_degree {
                continue;
            }
            let lhs = PresentationElement::b(n, field, *j).mul(&PresentationElement::b(n, field, *jp));
            let mut rhs = PresentationElement::zero(n, field);
            for k in j.elements() {
                let rest = j.bits() & !(1 << k);
                let Some(delta) = IndexSetJ::from_bits(rest ^ jp.bits()) else { continue };
                let mut term = PresentationElement::b(n, field, IndexSetJ(1 << k))
                    .mul(&PresentationElement::b(n, field, delta));
                for a in 1..32u32 {
                    if (rest & jp.bits()) >> a & 1 == 1 {
                        term = term.mul(&PresentationElement::p(n, field, a).unwrap());
                    }
                }
                rhs = rhs.add(&term);
            }
            out.push(lhs.sub(&rhs));
        }
    }
    out
}

/// Restriction `Phi_n : R_n -> R_{n-1}`.
pub fn phi(x: &PresentationElement) -> Result<PresentationElement> {
    let n = x.n;
    if n < 3 {
        return Err(AlgebraError::InvalidArgument("Phi_n needs n >= 3".into()));
    }
    let field = x.field;
    let m = n - 1;
    let top = (n % 2 == 1).then_some((n - 1) / 2);
    let p_img = |i: u32| -> PresentationElement {
        if Some(i) == top {
            PresentationElement::x(m, field).mul(&PresentationElement::x(m, field))
        } else {
            PresentationElement::p(m, field, i).unwrap()
        }
    };
    let b_img = |j: &IndexSetJ| -> PresentationElement {
        if Some(j.max()) == top {
            match IndexSetJ::from_bits(j.bits() & !(1 << j.max())) {
                None => PresentationElement::zero(m, field),
                Some(rest) => PresentationElement::b(m, field, rest).mul(&PresentationElement::x(m, field)),
            }
        } else {
            PresentationElement::b(m, field, *j)
        }
    };
    let mut acc = PresentationElement::zero(m, field);
    for (w, c) in &x.terms {
        if w.x > 0 {
            continue;
        }
        let mut term = PresentationElement::word(m, field, Word::one(m), *c);
        for (i, &a) in w.p.iter().enumerate() {
            for _ in 0..a {
                term = term.mul(&p_img(i as u32 + 1));
            }
        }
        for j in &w.b {
            term = term.mul(&b_img(j));
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// All words of degree `d` in `R_n`, sorted.
pub fn words_of_degree(n: u32, d: u32) -> Vec<Word> {
    let js = IndexSetJ::all(n);
    let k = num_p(n);
    let mut out = Vec::new();
    // Multisets of B's, then X, then P exponents.
    fn b_multisets(js: &[IndexSetJ], start: usize, left: u32, cur: &mut Vec<IndexSetJ>, out: &mut Vec<(Vec<IndexSetJ>, u32)>) {
        out.push((cur.clone(), left));
        for (i, j) in js.iter().enumerate().skip(start) {
            if j.degree() <= left {
                cur.push(*j);
                b_multisets(js, i, left - j.degree(), cur, out);
                cur.pop();
            }
        }
    }
    fn p_exps(k: usize, i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == k {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let deg = 4 * (i as u32 + 1);
        let mut a = 0;
        while a * deg <= left {
            cur.push(a);
            p_exps(k, i + 1, left - a * deg, cur, out);
            cur.pop();
            a += 1;
        }
    }
    let mut bs = Vec::new();
    b_multisets(&js, 0, d, &mut Vec::new(), &mut bs);
    for (b, left) in bs {
        let mut x = 0;
        while x * n <= left {
            let mut ps = Vec::new();
            p_exps(k, 0, left - x * n, &mut Vec::new(), &mut ps);
            for p in ps {
                out.push(Word { p, x, b: b.clone() });
            }
            x += 1;
        }
    }
    out.sort();
    out
}

/// Degree-`d` group of `R_n / I_n` over `W(R) = Z`, by Smith normal form of
/// all degree-`d` multiples of the relations. Limited to `n <= 6`, `d <= 12`.
pub fn oracle_graded_group(n: u32, d: u32) -> Result<AbelianGroup> {
    if n > 6 || d > 12 {
        return Err(AlgebraError::ResourceBound(format!("oracle limited to n <= 6 and d <= 12, got n = {n}, d = {d}")));
    }
    if n < 2 {
        return Err(AlgebraError::InvalidArgument("oracle needs n >= 2".into()));
    }
    let field = FieldTag::R;
    let basis = words_of_degree(n, d);
    let index: HashMap<&Word, usize> = basis.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut rows = Vec::new();
    for g in ideal_generators(n, field, d) {
        let gd = g.degree().unwrap_or(0);
        // Relations are homogeneous; multiply by every word of the complementary degree.
        for w in words_of_degree(n, d - gd) {
            let prod = g.mul(&PresentationElement::word(n, field, w, WittElement::one(field)));
            let mut row = vec![0i64; basis.len()];
            for (word, c) in prod.terms() {
                row[index[word]] = c.coords()[0];
            }
            rows.push(row);
        }
    }
    cokernel(&rows, basis.len())
}
