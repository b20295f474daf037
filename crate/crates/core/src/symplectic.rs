//! Chow-Witt rings of symplectic classifying spaces: `GW(F)[p_1..p_n]` for
//! `BSp_2n`, its products, the torus `BSL_2^n`, and `HP^m`.

use std::sync::Arc;

use crate::chowwitt::{class_pontryagin, ChowWittElement};
use crate::coeff::{CoeffRing, FieldTag, GWElement};
use crate::error::{AlgebraError, Result};
use crate::icoh::ICohContext;
use crate::polyring::{Ctx, Generator, GeneratorContext, GradedPolynomial, DEFAULT_MAX_DEGREE};

pub type SymplPoly = GradedPolynomial<GWElement>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymplecticSpace {
    /// `BSp_2n`: `p1..pn`, `deg p_i = 2i`.
    Bsp(u32),
    /// `BSp_2n1 x BSp_2n2 x ...`: `p{i}_{k}`.
    BspProduct(Vec<u32>),
    /// `BSL_2^n`: `p1_{k}`.
    Sl2Power(u32),
    /// `HP^m`: `p1` with `p1^(m+1) = 0`.
    Hp(u32),
}

impl SymplecticSpace {
    /// Factor ranks, `HP^m` excluded.
    pub fn factors(&self) -> Option<Vec<u32>> {
        match self {
            SymplecticSpace::Bsp(n) => Some(vec![*n]),
            SymplecticSpace::BspProduct(fs) => Some(fs.clone()),
            SymplecticSpace::Sl2Power(n) => Some(vec![1; *n as usize]),
            SymplecticSpace::Hp(_) => None,
        }
    }

    fn gen_name(&self, factor: usize, i: u32) -> String {
        match self {
            SymplecticSpace::Bsp(_) | SymplecticSpace::Hp(_) => format!("p{i}"),
            SymplecticSpace::BspProduct(_) => format!("p{i}_{}", factor + 1),
            SymplecticSpace::Sl2Power(_) => format!("p1_{}", factor + 1),
        }
    }
}

/// Polynomial ring of a symplectic space over `GW(field)`.
pub fn symplectic_ctx(space: &SymplecticSpace, field: FieldTag, cap: u32) -> Result<Ctx> {
    let mut gens = Vec::new();
    match space {
        SymplecticSpace::Hp(m) => {
            if *m < 1 {
                return Err(AlgebraError::InvalidArgument("HP^m needs m >= 1".into()));
            }
            gens.push(Generator::new("p1", 2).truncated(m + 1));
        }
        _ => {
            let fs = space.factors().unwrap();
            if fs.is_empty() || fs.contains(&0) {
                return Err(AlgebraError::InvalidArgument("symplectic factors must have rank >= 1".into()));
            }
            for (k, &n) in fs.iter().enumerate() {
                for i in 1..=n {
                    gens.push(Generator::new(space.gen_name(k, i), 2 * i));
                }
            }
        }
    }
    GeneratorContext::with_cap(CoeffRing::GrothendieckWitt(field), gens, cap)
}

/// `CH~(HP^m) = GW[p1]/(p1^(m+1))`.
pub fn hp_ring(m: u32, field: FieldTag) -> Result<Ctx> {
    symplectic_ctx(&SymplecticSpace::Hp(m), field, DEFAULT_MAX_DEGREE)
}

fn field_of(ctx: &Ctx) -> Result<FieldTag> {
    match ctx.ring() {
        CoeffRing::GrothendieckWitt(t) => Ok(t),
        _ => Err(AlgebraError::InvalidArgument("expected GW coefficients".into())),
    }
}

fn expect_space(q: &SymplPoly, space: &SymplecticSpace) -> Result<(FieldTag, Ctx)> {
    let field = field_of(q.ctx())?;
    let ctx = symplectic_ctx(space, field, q.ctx().max_degree())?;
    if q.ctx() != &ctx {
        return Err(AlgebraError::ContextMismatch);
    }
    Ok((field, ctx))
}

/// `p_i` of factor `k`, with `p_0 = 1` and `p_i = 0` above the rank.
fn pont(ctx: &Ctx, space: &SymplecticSpace, fs: &[u32], k: usize, i: u32) -> SymplPoly {
    if i == 0 {
        SymplPoly::one(ctx)
    } else if i > fs[k] {
        SymplPoly::zero(ctx)
    } else {
        SymplPoly::var_named(ctx, &space.gen_name(k, i)).expect("Pontryagin generator")
    }
}

/// Splits factor `k` of a product as `BSp_2m x BSp_2(n_k - m)`:
/// `p_i -> sum_{j=i+m-n}^{m} p_j x p_{i-j}`.
pub fn sympl_split_factor(src: &SymplecticSpace, k: usize, m: u32, q: &SymplPoly) -> Result<(SymplecticSpace, SymplPoly)> {
    let fs = src.factors().ok_or_else(|| AlgebraError::InvalidArgument("HP^m has no Whitney splitting".into()))?;
    let (field, _) = expect_space(q, src)?;
    let n = *fs.get(k).ok_or_else(|| AlgebraError::InvalidArgument(format!("no factor {k}")))?;
    if m == 0 || m >= n {
        return Err(AlgebraError::InvalidArgument(format!("need 0 < m < n, got m = {m}, n = {n}")));
    }
    let mut tfs = fs.clone();
    tfs.splice(k..=k, [m, n - m]);
    let tspace = SymplecticSpace::BspProduct(tfs.clone());
    let tgt = symplectic_ctx(&tspace, field, q.ctx().max_degree())?;
    let mut images = Vec::new();
    for (f, &nf) in fs.iter().enumerate() {
        for i in 1..=nf {
            images.push(if f == k {
                let mut acc = SymplPoly::zero(&tgt);
                for j in (i + m).saturating_sub(n)..=m.min(i) {
                    acc = acc.add(&pont(&tgt, &tspace, &tfs, k, j).mul(&pont(&tgt, &tspace, &tfs, k + 1, i - j))?);
                }
                acc
            } else {
                pont(&tgt, &tspace, &tfs, if f < k { f } else { f + 1 }, i)
            });
        }
    }
    let out = q.substitute(&tgt, &images, |x| x.clone())?;
    Ok((tspace, out))
}

/// Whitney formula for `BSp_2m x BSp_2(n-m) -> BSp_2n`.
pub fn sympl_whitney(n: u32, m: u32, q: &SymplPoly) -> Result<SymplPoly> {
    Ok(sympl_split_factor(&SymplecticSpace::Bsp(n), 0, m, q)?.1)
}

/// Restriction of a product space to the torus `BSL_2^N`: each factor's
/// `p_i` goes to the `i`-th elementary symmetric polynomial in its block.
pub fn sympl_split_space(src: &SymplecticSpace, q: &SymplPoly) -> Result<SymplPoly> {
    let fs = src.factors().ok_or_else(|| AlgebraError::InvalidArgument("HP^m has no splitting".into()))?;
    let (field, _) = expect_space(q, src)?;
    let total: u32 = fs.iter().sum();
    let tspace = SymplecticSpace::Sl2Power(total);
    let tgt = symplectic_ctx(&tspace, field, q.ctx().max_degree())?;
    let mut images = Vec::new();
    let mut offset = 0usize;
    for &nf in &fs {
        let vars: Vec<SymplPoly> = (0..nf as usize).map(|t| SymplPoly::var(&tgt, offset + t)).collect();
        // e_i via the product prod (1 + x_t).
        let mut elem = vec![SymplPoly::one(&tgt)];
        for x in &vars {
            let mut next = elem.clone();
            next.push(SymplPoly::zero(&tgt));
            for i in 1..next.len() {
                next[i] = next[i].add(&elem[i - 1].mul(x)?);
            }
            elem = next;
        }
        images.extend(elem.into_iter().skip(1));
        offset += nf as usize;
    }
    q.substitute(&tgt, &images, |x| x.clone())
}

/// `p_i -> sigma_i(p_{1,1}, ..., p_{1,n})`.
pub fn sympl_split(n: u32, q: &SymplPoly) -> Result<SymplPoly> {
    sympl_split_space(&SymplecticSpace::Bsp(n), q)
}

/// Conjugate bundle: `p_i -> <-1>^i p_i`, read off the degree `2i`.
pub fn sympl_conjugate(q: &SymplPoly) -> Result<SymplPoly> {
    let ctx = q.ctx();
    let field = field_of(ctx)?;
    let minus = GWElement::minus_one_form(field);
    let images: Vec<SymplPoly> = ctx
        .gens()
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let v = SymplPoly::var(ctx, i);
            if (g.degree / 2) % 2 == 1 {
                v.scale(&minus)
            } else {
                v
            }
        })
        .collect();
    q.substitute(ctx, &images, |x| x.clone())
}

/// Pontryagin classes of `E + Ebar` on `BSp_2n`:
/// `p_i -> sum_{j=0}^{i} <-1>^{i-j} p_j p_{i-j}`, with `p_k = 0` for `k > n`.
pub fn sympl_double(n: u32, q: &SymplPoly) -> Result<SymplPoly> {
    let space = SymplecticSpace::Bsp(n);
    let (field, ctx) = expect_space(q, &space)?;
    let minus = GWElement::minus_one_form(field);
    let fs = [n];
    let mut images = Vec::new();
    for i in 1..=n {
        let mut acc = SymplPoly::zero(&ctx);
        for j in 0..=i {
            let mut t = pont(&ctx, &space, &fs, 0, j).mul(&pont(&ctx, &space, &fs, 0, i - j))?;
            if (i - j) % 2 == 1 {
                t = t.scale(&minus);
            }
            acc = acc.add(&t);
        }
        images.push(acc);
    }
    q.substitute(&ctx, &images, |x| x.clone())
}

/// GW-algebra map `GW[p_1..p_n] -> CH~(BSL_n)`, `p_i -> class_pontryagin(n, i)`.
pub fn symplectify(ctx: &Arc<ICohContext>, q: &SymplPoly) -> Result<ChowWittElement> {
    let (field, _) = expect_space(q, &SymplecticSpace::Bsp(ctx.n()))?;
    if field != ctx.field() {
        return Err(AlgebraError::DescriptorMismatch(field, ctx.field()));
    }
    let images: Vec<ChowWittElement> = (1..=ctx.n()).map(|i| class_pontryagin(ctx, i)).collect::<Result<_>>()?;
    let one = ChowWittElement::one(ctx);
    q.evaluate(ChowWittElement::zero(ctx), &images, |g| one.gw_scale(g).expect("GW scalar"))
}
