//! The ring `H(BSL_n, I)` in geometric bidegrees, stored as a free
//! `W(F)`-polynomial part plus a torsion part recorded by its mod-2 image.

use std::fmt;
use std::sync::Arc;

use crate::chow::{drop_top, ChowContext, ChowSpace, F2Poly};
use crate::coeff::{CoeffRing, FieldTag, WittElement, F2};
use crate::error::{AlgebraError, Result};
use crate::polyring::{graded_basis, Algebra, Ctx, Generator, GeneratorContext, GradedPolynomial, DEFAULT_MAX_DEGREE};

pub type WPoly = GradedPolynomial<WittElement>;

/// Free generators `p{2i}` (degree `4i`, `i <= (n-1)/2`) and `e{n}` for even
/// `n`, over `W(F)`, together with the mod-2 Chow ring of `BSL_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ICohContext {
    n: u32,
    field: FieldTag,
    free: Ctx,
    chow: ChowContext,
}

impl ICohContext {
    pub fn new(n: u32, field: FieldTag) -> Result<Arc<Self>> {
        Self::with_cap(n, field, DEFAULT_MAX_DEGREE)
    }

    pub fn with_cap(n: u32, field: FieldTag, cap: u32) -> Result<Arc<Self>> {
        if n < 2 {
            return Err(AlgebraError::InvalidArgument(format!("I-cohomology of BSL_n needs n >= 2, got {n}")));
        }
        let mut gens: Vec<Generator> = (1..=(n - 1) / 2).map(|i| Generator::new(format!("p{}", 2 * i), 4 * i)).collect();
        if n % 2 == 0 {
            gens.push(Generator::new(format!("e{n}"), n));
        }
        let free = GeneratorContext::with_cap(CoeffRing::Witt(field), gens, cap)?;
        let chow = ChowContext::with_cap(ChowSpace::Bsl(n), cap)?;
        Ok(Arc::new(ICohContext { n, field, free, chow }))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn free_ctx(&self) -> &Ctx {
        &self.free
    }

    pub fn chow(&self) -> &ChowContext {
        &self.chow
    }

    pub fn mod2(&self) -> &Ctx {
        self.chow.mod2()
    }

    pub fn max_degree(&self) -> u32 {
        self.free.max_degree()
    }

    /// Reduction of a free polynomial: `p{2i} -> cb{2i}^2`, `e{n} -> cb{n}`.
    pub fn rho_free(&self, f: &WPoly) -> Result<F2Poly> {
        let images = crate::chow::free_reduction_generators(&self.chow)?;
        f.substitute(self.mod2(), &images, |w| F2(w.rank_mod2() == 1))
    }
}

/// Element of `H(BSL_n, I)`: `free + torsion`, the torsion part given by its
/// (injective) image under `rho`.
#[derive(Debug, Clone)]
pub struct ICohElement {
    ctx: Arc<ICohContext>,
    free: WPoly,
    torsion: F2Poly,
}

impl PartialEq for ICohElement {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx)
            && self.free == other.free
            && self.torsion == other.torsion
    }
}

impl Eq for ICohElement {}

impl ICohElement {
    /// Checked constructor: the torsion part must lie in `Im Sq^2`.
    pub fn new(ctx: &Arc<ICohContext>, free: WPoly, torsion: F2Poly) -> Result<Self> {
        if free.ctx() != ctx.free_ctx() || torsion.ctx() != ctx.mod2() {
            return Err(AlgebraError::ContextMismatch);
        }
        if !ctx.chow().sq2_op().in_image(&torsion)? {
            return Err(AlgebraError::Compatibility(format!("torsion part {torsion} is not in the image of Sq2")));
        }
        Ok(ICohElement { ctx: ctx.clone(), free, torsion })
    }

    fn raw(ctx: &Arc<ICohContext>, free: WPoly, torsion: F2Poly) -> Self {
        ICohElement { ctx: ctx.clone(), free, torsion }
    }

    pub fn zero(ctx: &Arc<ICohContext>) -> Self {
        Self::raw(ctx, WPoly::zero(ctx.free_ctx()), F2Poly::zero(ctx.mod2()))
    }

    pub fn one(ctx: &Arc<ICohContext>) -> Self {
        Self::from_witt(ctx, WittElement::one(ctx.field()))
    }

    pub fn from_witt(ctx: &Arc<ICohContext>, w: WittElement) -> Self {
        Self::raw(ctx, WPoly::constant(ctx.free_ctx(), w), F2Poly::zero(ctx.mod2()))
    }

    pub fn from_free(ctx: &Arc<ICohContext>, free: WPoly) -> Result<Self> {
        Self::new(ctx, free, F2Poly::zero(ctx.mod2()))
    }

    /// Free generator by name (`p{2i}` or `e{n}`).
    pub fn generator(ctx: &Arc<ICohContext>, name: &str) -> Result<Self> {
        Ok(Self::raw(ctx, WPoly::var_named(ctx.free_ctx(), name)?, F2Poly::zero(ctx.mod2())))
    }

    pub fn ctx(&self) -> &Arc<ICohContext> {
        &self.ctx
    }

    pub fn free(&self) -> &WPoly {
        &self.free
    }

    pub fn torsion(&self) -> &F2Poly {
        &self.torsion
    }

    pub fn is_zero(&self) -> bool {
        self.free.is_zero() && self.torsion.is_zero()
    }

    pub fn is_torsion(&self) -> bool {
        self.free.is_zero()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx {
            Ok(())
        } else {
            Err(AlgebraError::ContextMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self::raw(&self.ctx, self.free.add(&other.free), self.torsion.add(&other.torsion)))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("I-cohomology context mismatch")
    }

    pub fn neg(&self) -> Self {
        Self::raw(&self.ctx, self.free.neg(), self.torsion.clone())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn homogeneous_component(&self, d: u32) -> Self {
        Self::raw(&self.ctx, self.free.homogeneous_component(d), self.torsion.homogeneous_component(d))
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = Self::one(&self.ctx);
        for _ in 0..k {
            acc = icoh_mul(&acc, self)?;
        }
        Ok(acc)
    }
}

impl Algebra for ICohElement {
    fn add(&self, other: &Self) -> Self {
        ICohElement::add(self, other)
    }
    fn mul(&self, other: &Self) -> Result<Self> {
        icoh_mul(self, other)
    }
}

impl fmt::Display for ICohElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.free.is_zero(), self.torsion.is_zero()) {
            (true, true) => f.write_str("0"),
            (false, true) => write!(f, "{}", self.free),
            (true, false) => write!(f, "tors({})", self.torsion),
            (false, false) => write!(f, "{} + tors({})", self.free, self.torsion),
        }
    }
}

/// Product: free parts multiply, torsion through `rho`.
pub fn icoh_mul(a: &ICohElement, b: &ICohElement) -> Result<ICohElement> {
    a.check(b)?;
    let ctx = &a.ctx;
    let free = a.free.mul(&b.free)?;
    let ra = ctx.rho_free(&a.free)?;
    let rb = ctx.rho_free(&b.free)?;
    let torsion = ra.mul(&b.torsion)?.add(&rb.mul(&a.torsion)?).add(&a.torsion.mul(&b.torsion)?);
    Ok(ICohElement::raw(ctx, free, torsion))
}

/// Bockstein: `rho(beta(sigma)) = Sq^2(sigma)`.
pub fn beta(ctx: &Arc<ICohContext>, sigma: &F2Poly) -> Result<ICohElement> {
    if sigma.ctx() != ctx.mod2() {
        return Err(AlgebraError::ContextMismatch);
    }
    Ok(ICohElement::raw(ctx, WPoly::zero(ctx.free_ctx()), ctx.chow().sq2(sigma)?))
}

/// `beta_J = beta(prod_{j in J} cb{2j})`.
pub fn beta_j(ctx: &Arc<ICohContext>, j: &[u32]) -> Result<ICohElement> {
    beta(ctx, &even_class_product(ctx.chow(), j)?)
}

/// `prod_{j in J} cb{2j}`, validating `0 < j <= (n-1)/2`.
pub fn even_class_product(chow: &ChowContext, j: &[u32]) -> Result<F2Poly> {
    let n = match chow.space() {
        ChowSpace::Bsl(n) => *n,
        _ => return Err(AlgebraError::InvalidArgument("beta classes need BSL_n".into())),
    };
    let mut acc = F2Poly::one(chow.mod2());
    for (k, &x) in j.iter().enumerate() {
        if x == 0 || x > (n - 1) / 2 || j[..k].contains(&x) {
            return Err(AlgebraError::InvalidArgument(format!(
                "invalid index set {j:?} for n = {n}: entries must be distinct in 1..={}",
                (n - 1) / 2
            )));
        }
        acc = acc.mul(&chow.chern_bar(2 * x))?;
    }
    Ok(acc)
}

pub fn rho(x: &ICohElement) -> Result<F2Poly> {
    Ok(x.ctx.rho_free(&x.free)?.add(&x.torsion))
}

/// `W(F)`-action; the fundamental ideal kills torsion.
pub fn scalar_mul(w: &WittElement, x: &ICohElement) -> Result<ICohElement> {
    if w.field() != x.ctx.field() {
        return Err(AlgebraError::DescriptorMismatch(w.field(), x.ctx.field()));
    }
    let torsion = if w.rank_mod2() == 1 { x.torsion.clone() } else { F2Poly::zero(x.ctx.mod2()) };
    Ok(ICohElement::raw(&x.ctx, x.free.scale(w), torsion))
}

/// `e_n`: the free generator for even `n`, `beta(cb{n-1})` for odd `n`.
pub fn euler_class_icoh(ctx: &Arc<ICohContext>) -> Result<ICohElement> {
    let n = ctx.n();
    if n % 2 == 0 {
        ICohElement::generator(ctx, &format!("e{n}"))
    } else {
        beta(ctx, &ctx.chow().chern_bar(n - 1))
    }
}

/// Pontryagin class `p_i` of `BSL_n`, `1 <= i <= n`.
pub fn pontryagin_icoh(ctx: &Arc<ICohContext>, i: u32) -> Result<ICohElement> {
    let n = ctx.n();
    if i == 0 || i > n {
        return Err(AlgebraError::InvalidArgument(format!("Pontryagin index {i} out of range 1..={n}")));
    }
    if i % 2 == 1 {
        // p_{2k+1} = beta(cb_{2k} cb_{2k+1}), with cb_0 = 1 and cb_1 = 0.
        let chow = ctx.chow();
        return beta(ctx, &chow.chern_bar(i - 1).mul(&chow.chern_bar(i))?);
    }
    if i <= 2 * ((n - 1) / 2) {
        return ICohElement::generator(ctx, &format!("p{i}"));
    }
    // i = n even: <-1>^{n/2} e_n^2.
    let e = euler_class_icoh(ctx)?;
    let sign = if (n / 2) % 2 == 1 { WittElement::minus_one_form(ctx.field()) } else { WittElement::one(ctx.field()) };
    scalar_mul(&sign, &icoh_mul(&e, &e)?)
}

/// Restriction `BSL_{n-1} -> BSL_n` on I-cohomology.
pub fn restrict_icoh(x: &ICohElement) -> Result<ICohElement> {
    let src = x.ctx();
    let n = src.n();
    if n < 3 {
        return Err(AlgebraError::InvalidArgument("restriction needs n >= 3".into()));
    }
    let tgt = ICohContext::with_cap(n - 1, src.field(), src.max_degree())?;
    let mut images = Vec::new();
    for g in src.free_ctx().gens() {
        let img = if g.name.starts_with('e') {
            WPoly::zero(tgt.free_ctx())
        } else if g.degree == 2 * (n - 1) {
            // p_{n-1} for odd n.
            WPoly::var_named(tgt.free_ctx(), &format!("e{}", n - 1))?.pow(2)?
        } else {
            WPoly::var_named(tgt.free_ctx(), &g.name)?
        };
        images.push(img);
    }
    let free = x.free.substitute(tgt.free_ctx(), &images, |w| *w)?;
    let torsion = drop_top(&x.torsion, tgt.mod2())?;
    Ok(ICohElement::raw(&tgt, free, torsion))
}

/// Algebra map `W(F)[p_1..p_n] -> H(BSL_n, I)`, `p_i -> pontryagin_icoh(n, i)`.
pub fn sympl_to_sl(ctx: &Arc<ICohContext>, q: &WPoly) -> Result<ICohElement> {
    let n = ctx.n() as usize;
    let qctx = q.ctx();
    if qctx.len() != n || qctx.gens().iter().enumerate().any(|(i, g)| g.degree != 2 * (i as u32 + 1)) {
        return Err(AlgebraError::InvalidArgument(format!("expected a polynomial in p1..p{n}")));
    }
    if qctx.ring() != CoeffRing::Witt(ctx.field()) {
        return Err(AlgebraError::DescriptorMismatch(witt_tag(qctx.ring()), ctx.field()));
    }
    let images: Vec<ICohElement> = (1..=n as u32).map(|i| pontryagin_icoh(ctx, i)).collect::<Result<_>>()?;
    q.evaluate(ICohElement::zero(ctx), &images, |w| ICohElement::from_witt(ctx, *w))
}

fn witt_tag(ring: CoeffRing) -> FieldTag {
    match ring {
        CoeffRing::Witt(t) | CoeffRing::GrothendieckWitt(t) => t,
        _ => FieldTag::R,
    }
}

/// `(free W-rank, torsion Z/2-dimension)` of `H^d(BSL_n, I)`.
pub fn graded_structure_icoh(ctx: &ICohContext, d: u32) -> Result<(usize, usize)> {
    let free = graded_basis(ctx.free_ctx(), d).len();
    let torsion = ctx.chow().sq2_op().image_dim(d)?;
    Ok((free, torsion))
}

/// Whether the torsion of every homogeneous piece lies in `Im Sq^2`.
pub fn in_image_sq2(ctx: &ICohContext, p: &F2Poly) -> Result<bool> {
    ctx.chow().sq2_op().in_image(p)
}
