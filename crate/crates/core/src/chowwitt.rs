//! Chow-Witt ring of `BSL_n` as the fiber product of I-cohomology and the
//! Chow ring over the mod-2 Chow ring, with its characteristic classes.

use std::fmt;
use std::sync::Arc;

use crate::chow::{drop_top, ZPoly};
use crate::coeff::{FieldTag, GWElement, WittElement};
use crate::error::{AlgebraError, Result};
use crate::icoh::{
    beta_j, euler_class_icoh, icoh_mul, pontryagin_icoh, restrict_icoh, rho, scalar_mul, ICohContext, ICohElement,
};
use crate::linalg::{smith_invariants, Gf2Span};
use crate::polyring::{graded_basis, Algebra};

/// Compatible pair `(x, c)` with `rho(x) = c mod 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChowWittElement {
    icoh: ICohElement,
    chern: ZPoly,
}

/// Builds a Chow-Witt class, checking both fiber-square conditions.
pub fn cw_make(icoh: ICohElement, chern: ZPoly) -> Result<ChowWittElement> {
    let ctx = icoh.ctx().clone();
    if chern.ctx() != ctx.chow().integral() {
        return Err(AlgebraError::ContextMismatch);
    }
    let reduced = ctx.chow().reduce(&chern);
    let r = rho(&icoh)?;
    if r != reduced {
        return Err(AlgebraError::Compatibility(format!(
            "rho(icoh) = {r} differs from chern mod 2 = {reduced}"
        )));
    }
    if !ctx.chow().sq2(&reduced)?.is_zero() {
        return Err(AlgebraError::Compatibility(format!("chern component {chern} is not in ker d (Sq2 of its reduction is nonzero)")));
    }
    Ok(ChowWittElement { icoh, chern })
}

impl ChowWittElement {
    pub fn zero(ctx: &Arc<ICohContext>) -> Self {
        ChowWittElement { icoh: ICohElement::zero(ctx), chern: ZPoly::zero(ctx.chow().integral()) }
    }

    pub fn one(ctx: &Arc<ICohContext>) -> Self {
        Self::from_gw(ctx, GWElement::one(ctx.field()))
    }

    pub fn from_gw(ctx: &Arc<ICohContext>, g: GWElement) -> Self {
        ChowWittElement {
            icoh: ICohElement::from_witt(ctx, g.witt()),
            chern: ZPoly::from_int(ctx.chow().integral(), g.rank()),
        }
    }

    pub fn ctx(&self) -> &Arc<ICohContext> {
        self.icoh.ctx()
    }

    pub fn icoh(&self) -> &ICohElement {
        &self.icoh
    }

    pub fn chern(&self) -> &ZPoly {
        &self.chern
    }

    pub fn is_zero(&self) -> bool {
        self.icoh.is_zero() && self.chern.is_zero()
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        Ok(ChowWittElement { icoh: self.icoh.try_add(&other.icoh)?, chern: self.chern.try_add(&other.chern)? })
    }

    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("Chow-Witt context mismatch")
    }

    pub fn neg(&self) -> Self {
        ChowWittElement { icoh: self.icoh.neg(), chern: self.chern.neg() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Ok(ChowWittElement { icoh: icoh_mul(&self.icoh, &other.icoh)?, chern: self.chern.mul(&other.chern)? })
    }

    /// `GW(F)`-action: rank on the Chern part, Witt class on the I-part.
    pub fn gw_scale(&self, g: &GWElement) -> Result<Self> {
        Ok(ChowWittElement { icoh: scalar_mul(&g.witt(), &self.icoh)?, chern: self.chern.scale(&g.rank()) })
    }

    pub fn homogeneous_component(&self, d: u32) -> Self {
        ChowWittElement { icoh: self.icoh.homogeneous_component(d), chern: self.chern.homogeneous_component(d) }
    }
}

impl Algebra for ChowWittElement {
    fn add(&self, other: &Self) -> Self {
        ChowWittElement::add(self, other)
    }
    fn mul(&self, other: &Self) -> Result<Self> {
        ChowWittElement::mul(self, other)
    }
}

impl fmt::Display for ChowWittElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.icoh, self.chern)
    }
}

/// Euler class `(e_n, c_n)`.
pub fn class_euler(ctx: &Arc<ICohContext>) -> Result<ChowWittElement> {
    cw_make(euler_class_icoh(ctx)?, ctx.chow().chern(ctx.n()))
}

/// Chern component of `p_i`:
/// `(-1)^i c_i^2 + 2 sum_{j=max(0,2i-n)}^{i-1} (-1)^j c_j c_{2i-j}`.
pub fn pontryagin_chern(ctx: &ICohContext, i: u32) -> Result<ZPoly> {
    let chow = ctx.chow();
    let n = ctx.n();
    let sign = |k: u32| if k % 2 == 0 { 1i64 } else { -1 };
    let mut acc = chow.chern(i).pow(2)?.scale(&sign(i));
    for j in (2 * i).saturating_sub(n)..i {
        acc = acc.add(&chow.chern(j).mul(&chow.chern(2 * i - j))?.scale(&(2 * sign(j))));
    }
    Ok(acc)
}

/// Pontryagin class `p_i`, `1 <= i <= n`.
pub fn class_pontryagin(ctx: &Arc<ICohContext>, i: u32) -> Result<ChowWittElement> {
    let icoh = pontryagin_icoh(ctx, i)?;
    cw_make(icoh, pontryagin_chern(ctx, i)?)
}

/// `(beta_J, lift)`, the lift being `Sq^2(prod cb_{2j})` with bars removed.
pub fn class_beta_lift(ctx: &Arc<ICohContext>, j: &[u32]) -> Result<ChowWittElement> {
    let b = beta_j(ctx, j)?;
    let lift = ctx.chow().lift(b.torsion());
    cw_make(b, lift)
}

/// Componentwise restriction to `BSL_{n-1}`.
pub fn cw_restrict(x: &ChowWittElement) -> Result<ChowWittElement> {
    let icoh = restrict_icoh(&x.icoh)?;
    let chern = drop_top(&x.chern, icoh.ctx().chow().integral())?;
    cw_make(icoh, chern)
}

/// All products of the given homogeneous classes of total degree `d`
/// (the empty product included when `d = 0`).
pub fn products_of_degree(ctx: &Arc<ICohContext>, classes: &[ChowWittElement], d: u32) -> Result<Vec<ChowWittElement>> {
    fn rec(
        classes: &[(u32, ChowWittElement)],
        start: usize,
        left: u32,
        cur: ChowWittElement,
        out: &mut Vec<ChowWittElement>,
    ) -> Result<()> {
        if left == 0 {
            out.push(cur);
            return Ok(());
        }
        for (k, (deg, c)) in classes.iter().enumerate().skip(start) {
            if *deg <= left {
                rec(classes, k, left - deg, cur.mul(c)?, out)?;
            }
        }
        Ok(())
    }
    let mut graded = Vec::new();
    for c in classes {
        let deg = c.chern.degree().or(c.icoh.free().degree()).or(c.icoh.torsion().degree());
        match deg {
            Some(0) | None => {
                return Err(AlgebraError::InvalidArgument("classes must be nonzero of positive degree".into()))
            }
            Some(k) => graded.push((k, c.clone())),
        }
    }
    let mut out = Vec::new();
    rec(&graded, 0, d, ChowWittElement::one(ctx), &mut out)?;
    Ok(out)
}

/// Over `W(R)`: whether the given degree-`d` elements generate the whole
/// fiber product `CH~^d = H^d(I) x_{Ch^d} CH^d` as an abelian group.
///
/// Both groups are compared through their preimages in
/// `Z^free + Z^{Ch^d} + Z^{CH^d}` (torsion coordinates read mod 2): the
/// fiber product's preimage has index `2^(2D - dim T)` with `D = dim Ch^d`
/// and `T` the torsion subgroup, and the span must have the same index.
pub fn generates_fiber_product(ctx: &Arc<ICohContext>, d: u32, elems: &[ChowWittElement]) -> Result<bool> {
    if ctx.field() != FieldTag::R {
        return Err(AlgebraError::InvalidArgument("fiber-product enumeration is implemented over W(R)".into()));
    }
    let free_basis = graded_basis(ctx.free_ctx(), d);
    let mono = graded_basis(ctx.mod2(), d);
    let zmono = graded_basis(ctx.chow().integral(), d);
    let f = free_basis.len();
    let dd = mono.len();
    let n_cols = f + 2 * dd;
    let mut rows = Vec::new();
    for e in elems {
        let e = e.homogeneous_component(d);
        let mut row = vec![0i64; n_cols];
        for (k, c) in e.icoh.free().coords_in(&free_basis).iter().enumerate() {
            row[k] = c.coords()[0];
        }
        for (k, c) in e.icoh.torsion().coords_in(&mono).iter().enumerate() {
            row[f + k] = c.0 as i64;
        }
        for (k, c) in e.chern.coords_in(&zmono).iter().enumerate() {
            row[f + dd + k] = *c;
        }
        rows.push(row);
    }
    for k in 0..dd {
        let mut row = vec![0i64; n_cols];
        row[f + k] = 2;
        rows.push(row);
    }
    let inv = smith_invariants(&rows, n_cols)?;
    if inv.len() < n_cols {
        return Ok(false);
    }
    let index: u128 = inv.iter().map(|&x| x as u128).product();
    let (_, t) = ctx.chow().sq2_op().image_span(d)?;
    let dim_t = if d == 0 { 0 } else { t.dim() };
    let expect = 1u128 << (2 * dd - dim_t);
    Ok(index == expect)
}

/// `(free I-rank, torsion dim, Chow rank)` in degree `d`.
pub fn fiber_square_ranks(ctx: &Arc<ICohContext>, d: u32) -> Result<(usize, usize, usize)> {
    let (free, torsion) = crate::icoh::graded_structure_icoh(ctx, d)?;
    Ok((free, torsion, graded_basis(ctx.chow().integral(), d).len()))
}

/// Degree-`d` piece of `ker Sq^2` as a span, for callers comparing with
/// explicit subrings.
pub fn ker_sq2_span(ctx: &ICohContext, d: u32) -> Result<(Vec<crate::polyring::Monomial>, Gf2Span)> {
    let basis = graded_basis(ctx.mod2(), d);
    let mut span = Gf2Span::new(basis.len());
    // rho(free) + Im Sq^2 spans the kernel.
    for m in graded_basis(ctx.free_ctx(), d) {
        let p = crate::icoh::WPoly::monomial(ctx.free_ctx(), m, WittElement::one(ctx.field()));
        let r = ctx.rho_free(&p)?;
        span.insert(&r.coords_in(&basis).iter().map(|c| c.0).collect::<Vec<_>>());
    }
    if d > 0 {
        for m in graded_basis(ctx.mod2(), d - 1) {
            let img = ctx.chow().sq2(&crate::chow::F2Poly::monomial(ctx.mod2(), m, crate::coeff::F2(true)))?;
            span.insert(&img.coords_in(&basis).iter().map(|c| c.0).collect::<Vec<_>>());
        }
    }
    Ok((basis, span))
}
