//! Sparse graded polynomials over a coefficient ring, with generator contexts,
//! truncations, substitution homomorphisms and per-degree bases.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::coeff::{CoeffRing, Coefficient};
use crate::error::{AlgebraError, Result};

pub const DEFAULT_MAX_DEGREE: u32 = 64;

/// A polynomial generator. `truncation = Some(t)` imposes `g^t = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
    pub truncation: Option<u32>,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: u32) -> Self {
        Generator { name: name.into(), degree, truncation: None }
    }

    pub fn truncated(mut self, t: u32) -> Self {
        self.truncation = Some(t);
        self
    }
}

/// Ordered generators with degrees, plus the coefficient ring and degree cap.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneratorContext {
    ring: CoeffRing,
    gens: Vec<Generator>,
    max_degree: u32,
}

pub type Ctx = Arc<GeneratorContext>;

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl GeneratorContext {
    pub fn new(ring: CoeffRing, gens: Vec<Generator>) -> Result<Ctx> {
        Self::with_cap(ring, gens, DEFAULT_MAX_DEGREE)
    }

    pub fn with_cap(ring: CoeffRing, gens: Vec<Generator>, max_degree: u32) -> Result<Ctx> {
        for (i, g) in gens.iter().enumerate() {
            if !valid_name(&g.name) {
                return Err(AlgebraError::InvalidArgument(format!("invalid generator name '{}'", g.name)));
            }
            if g.degree == 0 {
                return Err(AlgebraError::InvalidArgument(format!("generator {} has degree 0", g.name)));
            }
            if g.truncation == Some(0) {
                return Err(AlgebraError::InvalidArgument(format!("generator {} has truncation 0", g.name)));
            }
            if gens[..i].iter().any(|h| h.name == g.name) {
                return Err(AlgebraError::InvalidArgument(format!("duplicate generator name '{}'", g.name)));
            }
        }
        Ok(Arc::new(GeneratorContext { ring, gens, max_degree }))
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }

    /// Same generators over another coefficient ring.
    pub fn with_ring(&self, ring: CoeffRing) -> Ctx {
        Arc::new(GeneratorContext { ring, gens: self.gens.clone(), max_degree: self.max_degree })
    }

    pub fn with_max_degree(&self, max_degree: u32) -> Ctx {
        Arc::new(GeneratorContext { ring: self.ring, gens: self.gens.clone(), max_degree })
    }
}

fn same_ctx(a: &Ctx, b: &Ctx) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Exponent vector with cached total degree. Ordered by degree, then with
/// larger exponents of earlier generators first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    degree: u32,
    exps: Vec<u32>,
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree.cmp(&other.degree).then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub fn one(ctx: &GeneratorContext) -> Self {
        Monomial { degree: 0, exps: vec![0; ctx.len()] }
    }

    pub fn new(ctx: &GeneratorContext, exps: Vec<u32>) -> Self {
        assert_eq!(exps.len(), ctx.len(), "exponent vector length");
        let degree = exps.iter().zip(ctx.gens()).map(|(e, g)| e * g.degree).sum();
        Monomial { degree, exps }
    }

    pub fn var(ctx: &GeneratorContext, idx: usize) -> Self {
        let mut exps = vec![0; ctx.len()];
        exps[idx] = 1;
        Self::new(ctx, exps)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0 && self.exps.iter().all(|&e| e == 0)
    }

    /// Whether the monomial survives the context's truncations.
    pub fn survives(&self, ctx: &GeneratorContext) -> bool {
        self.exps.iter().zip(ctx.gens()).all(|(&e, g)| g.truncation.is_none_or(|t| e < t))
    }

    /// Product, or `None` if a truncation kills it.
    pub fn mul(&self, other: &Self, ctx: &GeneratorContext) -> Option<Self> {
        let exps: Vec<u32> = self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect();
        let m = Monomial { degree: self.degree + other.degree, exps };
        m.survives(ctx).then_some(m)
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    pub fn format(&self, ctx: &GeneratorContext) -> String {
        let parts: Vec<String> = self
            .exps
            .iter()
            .zip(ctx.gens())
            .filter(|(e, _)| **e > 0)
            .map(|(&e, g)| if e == 1 { g.name.clone() } else { format!("{}^{e}", g.name) })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// All monomials of degree `d`, in canonical order.
pub fn graded_basis(ctx: &GeneratorContext, d: u32) -> Vec<Monomial> {
    fn rec(ctx: &GeneratorContext, i: usize, left: u32, exps: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i == ctx.len() {
            if left == 0 {
                out.push(Monomial::new(ctx, exps.clone()));
            }
            return;
        }
        let g = &ctx.gens()[i];
        let mut e = 0;
        while e * g.degree <= left && g.truncation.is_none_or(|t| e < t) {
            exps.push(e);
            rec(ctx, i + 1, left - e * g.degree, exps, out);
            exps.pop();
            e += 1;
        }
    }
    let mut out = Vec::new();
    rec(ctx, 0, d, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Sparse polynomial; zero coefficients are never stored.
#[derive(Clone, Debug)]
pub struct GradedPolynomial<C> {
    ctx: Ctx,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coefficient> PartialEq for GradedPolynomial<C> {
    fn eq(&self, other: &Self) -> bool {
        same_ctx(&self.ctx, &other.ctx) && self.terms == other.terms
    }
}

impl<C: Coefficient> Eq for GradedPolynomial<C> {}

impl<C: Coefficient> GradedPolynomial<C> {
    pub fn zero(ctx: &Ctx) -> Self {
        GradedPolynomial { ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ctx: &Ctx) -> Self {
        Self::constant(ctx, C::one_in(ctx.ring()))
    }

    pub fn constant(ctx: &Ctx, c: C) -> Self {
        Self::monomial(ctx, Monomial::one(ctx), c)
    }

    pub fn from_int(ctx: &Ctx, n: i64) -> Self {
        Self::constant(ctx, C::from_int_in(ctx.ring(), n))
    }

    pub fn monomial(ctx: &Ctx, m: Monomial, c: C) -> Self {
        let mut p = Self::zero(ctx);
        if !c.is_zero() && m.survives(ctx) {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn var(ctx: &Ctx, idx: usize) -> Self {
        Self::monomial(ctx, Monomial::var(ctx, idx), C::one_in(ctx.ring()))
    }

    pub fn var_named(ctx: &Ctx, name: &str) -> Result<Self> {
        ctx.index_of(name)
            .map(|i| Self::var(ctx, i))
            .ok_or_else(|| AlgebraError::InvalidArgument(format!("unknown generator '{name}'")))
    }

    /// Builds from (monomial, coefficient) pairs, summing repeats.
    pub fn from_terms(ctx: &Ctx, terms: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Self::zero(ctx);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() || !m.survives(&self.ctx) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = v.add(&c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(|| C::zero_in(self.ctx.ring()))
    }

    /// Highest degree of a term; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn homogeneous_component(&self, d: u32) -> Self {
        GradedPolynomial {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().filter(|(m, _)| m.degree == d).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Nonzero homogeneous components keyed by degree.
    pub fn components(&self) -> BTreeMap<u32, Self> {
        let mut out: BTreeMap<u32, Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree)
                .or_insert_with(|| Self::zero(&self.ctx))
                .terms
                .insert(m.clone(), c.clone());
        }
        out
    }

    fn check_ctx(&self, other: &Self) -> Result<()> {
        if same_ctx(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(AlgebraError::ContextMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    /// Sum; panics on a context mismatch.
    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("polynomial context mismatch")
    }

    pub fn neg(&self) -> Self {
        GradedPolynomial {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(&self.ctx);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v.mul(c));
        }
        out
    }

    /// Product; fails on a context mismatch or when a term exceeds the
    /// context's degree cap.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_ctx(other)?;
        let cap = self.ctx.max_degree();
        let mut out = Self::zero(&self.ctx);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let degree = ma.degree + mb.degree;
                if degree > cap {
                    return Err(AlgebraError::DegreeOverflow { degree, cap });
                }
                if let Some(m) = ma.mul(mb, &self.ctx) {
                    out.add_term(m, ca.mul(cb));
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = Self::one(&self.ctx);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Applies a coefficient map, keeping exponent vectors. The target must
    /// have generators of the same degrees, possibly under other names.
    pub fn map_coeffs<D: Coefficient>(&self, target: &Ctx, f: impl Fn(&C) -> D) -> GradedPolynomial<D> {
        assert!(
            target.len() == self.ctx.len()
                && target.gens().iter().zip(self.ctx.gens()).all(|(a, b)| a.degree == b.degree),
            "map_coeffs needs matching generator degrees"
        );
        let mut out = GradedPolynomial::zero(target);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Ring-homomorphic evaluation `g_i -> images[i]` with coefficients
    /// mapped by `coeff_map`. Each nonzero image must be homogeneous of the
    /// generator's degree.
    pub fn substitute<D: Coefficient>(
        &self,
        target: &Ctx,
        images: &[GradedPolynomial<D>],
        coeff_map: impl Fn(&C) -> D,
    ) -> Result<GradedPolynomial<D>> {
        if images.len() != self.ctx.len() {
            return Err(AlgebraError::InvalidArgument(format!(
                "expected {} images, got {}",
                self.ctx.len(),
                images.len()
            )));
        }
        for (g, img) in self.ctx.gens().iter().zip(images) {
            if !same_ctx(img.ctx(), target) {
                return Err(AlgebraError::ContextMismatch);
            }
            if !img.is_zero() && !(img.is_homogeneous() && img.degree() == Some(g.degree)) {
                return Err(AlgebraError::Degree(format!(
                    "image of {} is not homogeneous of degree {}",
                    g.name, g.degree
                )));
            }
        }
        self.evaluate(GradedPolynomial::zero(target), images, |c| {
            GradedPolynomial::constant(target, coeff_map(c))
        })
    }

    /// Evaluates into an algebra: `sum coeff_to(c) * prod images[i]^e_i`.
    pub fn evaluate<A: Algebra>(&self, zero: A, images: &[A], coeff_to: impl Fn(&C) -> A) -> Result<A> {
        if images.len() != self.ctx.len() {
            return Err(AlgebraError::InvalidArgument(format!(
                "expected {} images, got {}",
                self.ctx.len(),
                images.len()
            )));
        }
        let mut powers: HashMap<(usize, u32), A> = HashMap::new();
        let mut acc = zero;
        for (m, c) in &self.terms {
            let mut term = coeff_to(c);
            for (i, &e) in m.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = match powers.get(&(i, e)) {
                    Some(p) => p.clone(),
                    None => {
                        let mut p = images[i].clone();
                        for _ in 1..e {
                            p = p.mul(&images[i])?;
                        }
                        powers.insert((i, e), p.clone());
                        p
                    }
                };
                term = term.mul(&pw)?;
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Coordinates in a list of monomials; panics if a term is missing.
    pub fn coords_in(&self, basis: &[Monomial]) -> Vec<C> {
        for m in self.terms.keys() {
            assert!(basis.contains(m), "monomial outside the basis");
        }
        basis.iter().map(|m| self.coefficient(m)).collect()
    }
}

/// Minimal algebra interface used by [`GradedPolynomial::evaluate`].
pub trait Algebra: Clone {
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Result<Self>;
}

impl<C: Coefficient> Algebra for GradedPolynomial<C> {
    fn add(&self, other: &Self) -> Self {
        GradedPolynomial::add(self, other)
    }
    fn mul(&self, other: &Self) -> Result<Self> {
        GradedPolynomial::mul(self, other)
    }
}

impl<C: Coefficient> fmt::Display for GradedPolynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let ring = self.ctx.ring();
        let one = C::one_in(ring);
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let (negative, mag) = if c.is_negative() { (true, c.neg()) } else { (false, c.clone()) };
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag == one {
                f.write_str(&m.format(&self.ctx))?;
            } else if mag.is_compound() {
                write!(f, "({mag})*{}", m.format(&self.ctx))?;
            } else {
                write!(f, "{mag}*{}", m.format(&self.ctx))?;
            }
        }
        Ok(())
    }
}
