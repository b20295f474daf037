//! Chow and mod-2 Chow rings of `BSL_n` and related spaces, the Steenrod
//! square `Sq^2` as a derivation, and Chern-class structure maps.

use crate::coeff::{CoeffRing, F2};
use crate::error::{AlgebraError, Result};
use crate::linalg::Gf2Span;
use crate::polyring::{graded_basis, Ctx, Generator, GeneratorContext, GradedPolynomial, Monomial, DEFAULT_MAX_DEGREE};

pub type ZPoly = GradedPolynomial<i64>;
pub type F2Poly = GradedPolynomial<F2>;

/// The spaces whose Chow rings are modelled.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ChowSpace {
    /// `BSL_n`: `Z[c_2..c_n]`.
    Bsl(u32),
    /// `BSL_{n_1} x ... x BSL_{n_r}`, generators `c{i}_{k}`.
    BslProduct(Vec<u32>),
    /// `BSp_2n`: `Z[c_2, c_4, .., c_2n]`.
    Bsp(u32),
    /// `(SL_2)^n`: generators `c2_{k}`.
    Sl2Power(u32),
    /// `P^d`: `Z[h]/(h^{d+1})`.
    Projective(u32),
}

/// Derivation `Sq^2` on a mod-2 ring, given by its values on generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sq2 {
    ctx: Ctx,
    images: Vec<F2Poly>,
}

impl Sq2 {
    /// Validates that each nonzero image is homogeneous of degree one more
    /// than its generator and that truncation relations are respected.
    pub fn new(ctx: &Ctx, images: Vec<F2Poly>) -> Result<Self> {
        if images.len() != ctx.len() {
            return Err(AlgebraError::InvalidArgument(format!(
                "expected {} Sq2 images, got {}",
                ctx.len(),
                images.len()
            )));
        }
        for (g, img) in ctx.gens().iter().zip(&images) {
            if img.is_zero() {
                continue;
            }
            if img.ctx() != ctx {
                return Err(AlgebraError::ContextMismatch);
            }
            if !(img.is_homogeneous() && img.degree() == Some(g.degree + 1)) {
                return Err(AlgebraError::Degree(format!(
                    "Sq2({}) must be homogeneous of degree {}",
                    g.name,
                    g.degree + 1
                )));
            }
        }
        let sq = Sq2 { ctx: ctx.clone(), images };
        // g^t = 0 forces t * g^(t-1) * Sq2(g) = 0.
        for (i, g) in ctx.gens().iter().enumerate() {
            if let Some(t) = g.truncation {
                if t % 2 == 1 && t > 0 {
                    let mut exps = vec![0; ctx.len()];
                    exps[i] = t - 1;
                    let m = F2Poly::monomial(ctx, Monomial::new(ctx, exps), F2(true));
                    if !m.mul(&sq.images[i])?.is_zero() {
                        return Err(AlgebraError::InvalidArgument(format!(
                            "Sq2({}) is incompatible with {}^{t} = 0",
                            g.name, g.name
                        )));
                    }
                }
            }
        }
        Ok(sq)
    }

    pub fn ctx(&self) -> &Ctx {
        &self.ctx
    }

    pub fn image_of_generator(&self, i: usize) -> &F2Poly {
        &self.images[i]
    }

    /// Derivation extension to arbitrary polynomials.
    pub fn apply(&self, p: &F2Poly) -> Result<F2Poly> {
        if p.ctx() != &self.ctx {
            return Err(AlgebraError::ContextMismatch);
        }
        let mut out = F2Poly::zero(&self.ctx);
        for (m, _) in p.terms() {
            for (i, &e) in m.exps().iter().enumerate() {
                if e % 2 == 0 || self.images[i].is_zero() {
                    continue;
                }
                let mut exps = m.exps().to_vec();
                exps[i] -= 1;
                let rest = F2Poly::monomial(&self.ctx, Monomial::new(&self.ctx, exps), F2(true));
                out = out.add(&rest.mul(&self.images[i])?);
            }
        }
        Ok(out)
    }

    /// Matrix of `Sq^2 : Ch^d -> Ch^{d+1}` as rows over the degree `d+1` basis.
    fn rows(&self, d: u32) -> Result<(Vec<Monomial>, Vec<Vec<bool>>)> {
        let src = graded_basis(&self.ctx, d);
        let tgt = graded_basis(&self.ctx, d + 1);
        let mut rows = Vec::with_capacity(src.len());
        for m in src {
            let img = self.apply(&F2Poly::monomial(&self.ctx, m, F2(true)))?;
            rows.push(img.coords_in(&tgt).into_iter().map(|c| c.0).collect());
        }
        Ok((tgt, rows))
    }

    /// Span of `Sq^2(Ch^{d-1})` inside `Ch^d`, with the basis of `Ch^d`.
    pub fn image_span(&self, d: u32) -> Result<(Vec<Monomial>, Gf2Span)> {
        if d == 0 {
            return Ok((graded_basis(&self.ctx, 0), Gf2Span::new(1)));
        }
        let (tgt, rows) = self.rows(d - 1)?;
        let mut span = Gf2Span::new(tgt.len());
        for r in &rows {
            span.insert(r);
        }
        Ok((tgt, span))
    }

    pub fn image_dim(&self, d: u32) -> Result<usize> {
        Ok(self.image_span(d)?.1.dim())
    }

    pub fn kernel_dim(&self, d: u32) -> Result<usize> {
        let (tgt, rows) = self.rows(d)?;
        let mut span = Gf2Span::new(tgt.len());
        for r in &rows {
            span.insert(r);
        }
        Ok(rows.len() - span.dim())
    }

    /// Whether every homogeneous component of `p` lies in `Im Sq^2`.
    pub fn in_image(&self, p: &F2Poly) -> Result<bool> {
        for (d, comp) in p.components() {
            let (basis, span) = self.image_span(d)?;
            let v: Vec<bool> = comp.coords_in(&basis).into_iter().map(|c| c.0).collect();
            if !span.contains(&v) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Integral and mod-2 Chow contexts of a space, with `Sq^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChowContext {
    space: ChowSpace,
    integral: Ctx,
    mod2: Ctx,
    sq2: Sq2,
}

fn factors_of(space: &ChowSpace) -> Option<Vec<u32>> {
    match space {
        ChowSpace::Bsl(n) => Some(vec![*n]),
        ChowSpace::BslProduct(f) => Some(f.clone()),
        _ => None,
    }
}

impl ChowContext {
    pub fn new(space: ChowSpace) -> Result<Self> {
        Self::with_cap(space, DEFAULT_MAX_DEGREE)
    }

    pub fn bsl(n: u32) -> Result<Self> {
        Self::new(ChowSpace::Bsl(n))
    }

    pub fn with_cap(space: ChowSpace, cap: u32) -> Result<Self> {
        // (integral name, mod-2 name, degree, truncation)
        let mut gens: Vec<(String, String, u32, Option<u32>)> = Vec::new();
        match &space {
            ChowSpace::Bsl(n) => {
                if *n < 1 {
                    return Err(AlgebraError::InvalidArgument("BSL_n needs n >= 1".into()));
                }
                for i in 2..=*n {
                    gens.push((format!("c{i}"), format!("cb{i}"), i, None));
                }
            }
            ChowSpace::BslProduct(fs) => {
                if fs.is_empty() || fs.contains(&0) {
                    return Err(AlgebraError::InvalidArgument("product factors must be >= 1".into()));
                }
                for (k, &n) in fs.iter().enumerate() {
                    for i in 2..=n {
                        gens.push((format!("c{i}_{}", k + 1), format!("cb{i}_{}", k + 1), i, None));
                    }
                }
            }
            ChowSpace::Bsp(n) => {
                for i in 1..=*n {
                    gens.push((format!("c{}", 2 * i), format!("cb{}", 2 * i), 2 * i, None));
                }
            }
            ChowSpace::Sl2Power(n) => {
                for k in 1..=*n {
                    gens.push((format!("c2_{k}"), format!("cb2_{k}"), 2, None));
                }
            }
            ChowSpace::Projective(d) => gens.push(("h".into(), "h".into(), 1, Some(d + 1))),
        }
        let mk = |ring, pick: &dyn Fn(&(String, String, u32, Option<u32>)) -> String| {
            GeneratorContext::with_cap(
                ring,
                gens.iter()
                    .map(|g| {
                        let base = Generator::new(pick(g), g.2);
                        match g.3 {
                            Some(t) => base.truncated(t),
                            None => base,
                        }
                    })
                    .collect(),
                cap,
            )
        };
        let integral = mk(CoeffRing::Integers, &|g| g.0.clone())?;
        let mod2 = mk(CoeffRing::Mod2, &|g| g.1.clone())?;

        let zero = F2Poly::zero(&mod2);
        let var = |name: &str| F2Poly::var_named(&mod2, name);
        let images: Vec<F2Poly> = match &space {
            ChowSpace::Bsl(_) | ChowSpace::BslProduct(_) => {
                let fs = factors_of(&space).unwrap();
                let mut out = Vec::new();
                for (k, &n) in fs.iter().enumerate() {
                    for i in 2..=n {
                        let target = if i % 2 == 0 && i < n { Some(i + 1) } else { None };
                        out.push(match target {
                            None => zero.clone(),
                            Some(j) => match space {
                                ChowSpace::Bsl(_) => var(&format!("cb{j}"))?,
                                _ => var(&format!("cb{j}_{}", k + 1))?,
                            },
                        });
                    }
                }
                out
            }
            // Odd Chern classes of symplectic bundles vanish.
            ChowSpace::Bsp(_) | ChowSpace::Sl2Power(_) => vec![zero.clone(); mod2.len()],
            ChowSpace::Projective(_) => vec![var("h")?.pow(2)?],
        };
        let sq2 = Sq2::new(&mod2, images)?;
        Ok(ChowContext { space, integral, mod2, sq2 })
    }

    pub fn space(&self) -> &ChowSpace {
        &self.space
    }

    pub fn integral(&self) -> &Ctx {
        &self.integral
    }

    pub fn mod2(&self) -> &Ctx {
        &self.mod2
    }

    pub fn sq2_op(&self) -> &Sq2 {
        &self.sq2
    }

    pub fn sq2(&self, p: &F2Poly) -> Result<F2Poly> {
        self.sq2.apply(p)
    }

    /// Reduction `CH -> Ch`.
    pub fn reduce(&self, p: &ZPoly) -> F2Poly {
        p.map_coeffs(&self.mod2, |c| F2(c.rem_euclid(2) == 1))
    }

    /// Integral lift with bars removed monomial by monomial.
    pub fn lift(&self, p: &F2Poly) -> ZPoly {
        p.map_coeffs(&self.integral, |_| 1)
    }

    fn factor_rank(&self, factor: usize) -> u32 {
        match &self.space {
            ChowSpace::Bsl(n) => *n,
            ChowSpace::BslProduct(fs) => fs[factor],
            _ => panic!("Chern classes by factor need a BSL space"),
        }
    }

    fn chern_name(&self, factor: usize, i: u32) -> String {
        match &self.space {
            ChowSpace::Bsl(_) => format!("c{i}"),
            _ => format!("c{i}_{}", factor + 1),
        }
    }

    /// `c_i` of a factor, with `c_0 = 1`, `c_1 = 0` and `c_i = 0` above the rank.
    pub fn chern_in_factor(&self, factor: usize, i: u32) -> ZPoly {
        match i {
            0 => ZPoly::one(&self.integral),
            1 => ZPoly::zero(&self.integral),
            i if i > self.factor_rank(factor) => ZPoly::zero(&self.integral),
            i => ZPoly::var_named(&self.integral, &self.chern_name(factor, i)).expect("Chern generator"),
        }
    }

    /// `c_i` of `BSL_n` (or `BSp`), same conventions.
    pub fn chern(&self, i: u32) -> ZPoly {
        match &self.space {
            ChowSpace::Bsp(n) => match i {
                0 => ZPoly::one(&self.integral),
                i if i % 2 == 1 || i > 2 * n => ZPoly::zero(&self.integral),
                i => ZPoly::var_named(&self.integral, &format!("c{i}")).unwrap(),
            },
            _ => self.chern_in_factor(0, i),
        }
    }

    pub fn chern_bar(&self, i: u32) -> F2Poly {
        self.reduce(&self.chern(i))
    }

    /// Whether `c` lies in `ker d`, i.e. `Sq^2` kills its reduction.
    pub fn ker_del_member(&self, c: &ZPoly) -> Result<bool> {
        Ok(self.sq2(&self.reduce(c))?.is_zero())
    }
}

fn bsl_n(ctx: &ChowContext) -> Result<u32> {
    match ctx.space() {
        ChowSpace::Bsl(n) => Ok(*n),
        other => Err(AlgebraError::InvalidArgument(format!("expected a BSL_n context, got {other:?}"))),
    }
}

/// Splits factor `k` of `BSL_{n_1} x ...` as `BSL_m x BSL_{n_k - m}`.
pub fn split_factor(src: &ChowContext, k: usize, m: u32, c: &ZPoly) -> Result<(ChowContext, ZPoly)> {
    let fs = factors_of(src.space())
        .ok_or_else(|| AlgebraError::InvalidArgument("Whitney splitting needs a BSL space".into()))?;
    let n = *fs.get(k).ok_or_else(|| AlgebraError::InvalidArgument(format!("no factor {k}")))?;
    if m == 0 || m >= n {
        return Err(AlgebraError::InvalidArgument(format!("need 0 < m < n, got m = {m}, n = {n}")));
    }
    let mut tfs = fs.clone();
    tfs.splice(k..=k, [m, n - m]);
    let tgt = ChowContext::with_cap(ChowSpace::BslProduct(tfs), src.integral().max_degree())?;
    let mut images = Vec::new();
    for (f, &nf) in fs.iter().enumerate() {
        for i in 2..=nf {
            let img = if f == k {
                let lo = (i + m).saturating_sub(n);
                let mut acc = ZPoly::zero(tgt.integral());
                for j in lo..=m.min(i) {
                    acc = acc.add(&tgt.chern_in_factor(k, j).mul(&tgt.chern_in_factor(k + 1, i - j))?);
                }
                acc
            } else {
                tgt.chern_in_factor(if f < k { f } else { f + 1 }, i)
            };
            images.push(img);
        }
    }
    let out = c.substitute(tgt.integral(), &images, |x| *x)?;
    Ok((tgt, out))
}

/// Whitney formula `c_i -> sum_{j=i+m-n}^{m} c_j x c_{i-j}` for `BSL_n`.
pub fn chern_whitney(n: u32, m: u32, c: &ZPoly) -> Result<(ChowContext, ZPoly)> {
    let src = ChowContext::with_cap(ChowSpace::Bsl(n), c.ctx().max_degree())?;
    if c.ctx() != src.integral() {
        return Err(AlgebraError::ContextMismatch);
    }
    split_factor(&src, 0, m, c)
}

/// Conjugate bundle: `c_i -> (-1)^i c_i`.
pub fn conjugate_chern(c: &ZPoly) -> Result<ZPoly> {
    let ctx = c.ctx();
    let images: Vec<ZPoly> = ctx
        .gens()
        .iter()
        .enumerate()
        .map(|(i, g)| ZPoly::var(ctx, i).scale(&if g.degree % 2 == 0 { 1 } else { -1 }))
        .collect();
    c.substitute(ctx, &images, |x| *x)
}

/// Maps generator `i` of `src` to generator `i` of `tgt` when it exists and
/// to zero otherwise. Used for `BSL_n -> BSL_{n-1}`.
pub fn drop_top<C: crate::coeff::Coefficient>(p: &GradedPolynomial<C>, tgt: &Ctx) -> Result<GradedPolynomial<C>> {
    let images: Vec<GradedPolynomial<C>> = (0..p.ctx().len())
        .map(|i| if i < tgt.len() { GradedPolynomial::var(tgt, i) } else { GradedPolynomial::zero(tgt) })
        .collect();
    p.substitute(tgt, &images, |x| x.clone())
}

/// Stabilization `CH(BSL_n) -> CH(BSL_{n-1})`: `c_n -> 0`.
pub fn stabilize_chern(n: u32, c: &ZPoly) -> Result<(ChowContext, ZPoly)> {
    if n < 3 {
        return Err(AlgebraError::InvalidArgument("stabilization needs n >= 3".into()));
    }
    let src = ChowContext::with_cap(ChowSpace::Bsl(n), c.ctx().max_degree())?;
    if c.ctx() != src.integral() {
        return Err(AlgebraError::ContextMismatch);
    }
    let tgt = ChowContext::with_cap(ChowSpace::Bsl(n - 1), c.ctx().max_degree())?;
    let out = drop_top(c, tgt.integral())?;
    Ok((tgt, out))
}

/// Mod-2 classes `cb{2i}^2` (`2i < n`) and `cb{n}` (`n` even): the
/// reductions of the free I-cohomology generators.
pub fn free_reduction_generators(ctx: &ChowContext) -> Result<Vec<F2Poly>> {
    let n = bsl_n(ctx)?;
    let mut out = Vec::new();
    for i in 1..=(n - 1) / 2 {
        out.push(ctx.chern_bar(2 * i).pow(2)?);
    }
    if n % 2 == 0 {
        out.push(ctx.chern_bar(n));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cb(ctx: &ChowContext, i: u32) -> F2Poly {
        ctx.chern_bar(i)
    }

    #[test]
    fn sq2_examples() {
        let ctx = ChowContext::bsl(5).unwrap();
        assert_eq!(ctx.sq2(&cb(&ctx, 2)).unwrap(), cb(&ctx, 3));
        assert!(ctx.sq2(&cb(&ctx, 3)).unwrap().is_zero());
        let x = cb(&ctx, 2).mul(&cb(&ctx, 4)).unwrap();
        let expect = cb(&ctx, 3).mul(&cb(&ctx, 4)).unwrap().add(&cb(&ctx, 2).mul(&cb(&ctx, 5)).unwrap());
        assert_eq!(ctx.sq2(&x).unwrap(), expect);

        let p5 = ChowContext::new(ChowSpace::Projective(5)).unwrap();
        let h = F2Poly::var(p5.mod2(), 0);
        assert!(p5.sq2(&h.pow(4).unwrap()).unwrap().is_zero());
        assert_eq!(p5.sq2(&h.pow(3).unwrap()).unwrap(), h.pow(4).unwrap());
    }

    #[test]
    fn ker_del_examples() {
        let ctx = ChowContext::bsl(4).unwrap();
        assert!(ctx.ker_del_member(&ctx.chern(2).scale(&2)).unwrap());
        assert!(!ctx.ker_del_member(&ctx.chern(2)).unwrap());
        assert!(ctx.ker_del_member(&ctx.chern(4)).unwrap());
    }

    #[test]
    fn whitney_examples() {
        let ctx = ChowContext::bsl(4).unwrap();
        let (t, img) = chern_whitney(4, 2, &ctx.chern(2)).unwrap();
        assert_eq!(img, t.chern_in_factor(0, 2).add(&t.chern_in_factor(1, 2)));
        let (t, img) = chern_whitney(4, 2, &ctx.chern(4)).unwrap();
        assert_eq!(img, t.chern_in_factor(0, 2).mul(&t.chern_in_factor(1, 2)).unwrap());
        // j ranges over {1, 2}: c_1 x c_2 + c_2 x c_1 = 0.
        let (_, img) = chern_whitney(4, 2, &ctx.chern(3)).unwrap();
        assert!(img.is_zero());
        assert!(chern_whitney(4, 4, &ctx.chern(2)).is_err());
    }

    #[test]
    fn conjugate_examples() {
        let ctx = ChowContext::bsl(5).unwrap();
        assert_eq!(conjugate_chern(&ctx.chern(2)).unwrap(), ctx.chern(2));
        assert_eq!(conjugate_chern(&ctx.chern(3)).unwrap(), ctx.chern(3).neg());
        let x = ctx.chern(2).mul(&ctx.chern(3)).unwrap();
        assert_eq!(conjugate_chern(&x).unwrap(), x.neg());
    }

    #[test]
    fn stabilize_examples() {
        let ctx = ChowContext::bsl(5).unwrap();
        let (t, img) = stabilize_chern(5, &ctx.chern(5)).unwrap();
        assert!(img.is_zero());
        assert_eq!(stabilize_chern(5, &ctx.chern(3)).unwrap().1, t.chern(3));
        let x = ctx.chern(2).mul(&ctx.chern(5)).unwrap();
        assert!(stabilize_chern(5, &x).unwrap().1.is_zero());
    }

    #[test]
    fn sq2_squares_to_zero_and_is_derivation_on_monomials() {
        for n in 2..=6 {
            let ctx = ChowContext::bsl(n).unwrap();
            for d in 0..=12 {
                for m in graded_basis(ctx.mod2(), d) {
                    let x = F2Poly::monomial(ctx.mod2(), m, F2(true));
                    assert!(ctx.sq2(&ctx.sq2(&x).unwrap()).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn kernel_is_free_reduction_plus_image() {
        // ker Sq^2 = Z/2[cb_{2i}^2, cb_n (n even)] + Im Sq^2, degreewise.
        for n in 2..=6 {
            let ctx = ChowContext::bsl(n).unwrap();
            let gens = free_reduction_generators(&ctx).unwrap();
            let degs: Vec<u32> = gens.iter().map(|g| g.degree().unwrap()).collect();
            let free_ctx = GeneratorContext::new(
                CoeffRing::Mod2,
                degs.iter().enumerate().map(|(i, d)| Generator::new(format!("g{i}"), *d)).collect(),
            )
            .unwrap();
            for d in 0..=12 {
                let free = graded_basis(&free_ctx, d).len();
                let im = ctx.sq2_op().image_dim(d).unwrap();
                assert_eq!(ctx.sq2_op().kernel_dim(d).unwrap(), free + im, "n={n} d={d}");
            }
        }
    }

    #[test]
    fn wu_formula_on_line_bundle_sums() {
        // For c = prod (1 + x_k) with Sq2(x) = x^2 the Wu formula gives
        // Sq2(c_i) = c_1 c_i + (i+1) c_{i+1}; with c_1 = 0 these are the BSL rules.
        let ctx = GeneratorContext::new(CoeffRing::Mod2, (1..=4).map(|k| Generator::new(format!("x{k}"), 1)).collect()).unwrap();
        let xs: Vec<F2Poly> = (0..4).map(|i| F2Poly::var(&ctx, i)).collect();
        let sq = Sq2::new(&ctx, xs.iter().map(|x| x.pow(2).unwrap()).collect()).unwrap();
        let mut e = vec![F2Poly::one(&ctx)];
        for i in 1..=4usize {
            let mut acc = F2Poly::zero(&ctx);
            for subset in 0u32..16 {
                if subset.count_ones() as usize == i {
                    let mut t = F2Poly::one(&ctx);
                    for (k, x) in xs.iter().enumerate() {
                        if subset >> k & 1 == 1 {
                            t = t.mul(x).unwrap();
                        }
                    }
                    acc = acc.add(&t);
                }
            }
            e.push(acc);
        }
        e.push(F2Poly::zero(&ctx));
        for i in 1..=4usize {
            let mut expect = e[1].mul(&e[i]).unwrap();
            if i % 2 == 0 {
                expect = expect.add(&e[i + 1]);
            }
            assert_eq!(sq.apply(&e[i]).unwrap(), expect, "i={i}");
        }
    }

    #[test]
    fn truncation_incompatible_sq2_is_rejected() {
        let ctx = GeneratorContext::new(CoeffRing::Mod2, vec![Generator::new("h", 1).truncated(3)]).unwrap();
        let h = F2Poly::var(&ctx, 0);
        assert!(Sq2::new(&ctx, vec![h.pow(2).unwrap()]).is_ok());
        // a^3 = 0 but Sq2(a^3) = a^2 b survives.
        let ctx = GeneratorContext::new(CoeffRing::Mod2, vec![Generator::new("a", 1).truncated(3), Generator::new("b", 2)]).unwrap();
        let b = F2Poly::var(&ctx, 1);
        assert!(Sq2::new(&ctx, vec![b.clone(), F2Poly::zero(&ctx)]).is_err());
    }

    proptest::proptest! {
        #[test]
        fn derivation_and_jacobi(seed in proptest::collection::vec(0u32..2, 15)) {
            let ctx = ChowContext::bsl(6).unwrap();
            let mk = |s: &[u32]| F2Poly::monomial(ctx.mod2(), Monomial::new(ctx.mod2(), s.to_vec()), F2(true));
            let (x, y, z) = (mk(&seed[0..5]), mk(&seed[5..10]), mk(&seed[10..15]));
            let s = |p: &F2Poly| ctx.sq2(p).unwrap();
            let m = |a: &F2Poly, b: &F2Poly| a.mul(b).unwrap();
            proptest::prop_assert_eq!(s(&m(&x, &y)), m(&s(&x), &y).add(&m(&x, &s(&y))));
            let jac = m(&s(&x), &s(&m(&y, &z))).add(&m(&s(&m(&x, &y)), &s(&z))).add(&m(&s(&m(&x, &z)), &s(&y)));
            proptest::prop_assert!(jac.is_zero());
        }

        #[test]
        fn conjugation_is_an_involution(seed in proptest::collection::vec((0u32..3, -4i64..4), 1..5)) {
            let ctx = ChowContext::bsl(5).unwrap();
            let p = ZPoly::from_terms(ctx.integral(), seed.iter().enumerate().map(|(i, (e, c))| {
                let mut exps = vec![0; 4];
                exps[i % 4] = *e;
                exps[(i + 1) % 4] += 1;
                (Monomial::new(ctx.integral(), exps), *c)
            }));
            proptest::prop_assert_eq!(conjugate_chern(&conjugate_chern(&p).unwrap()).unwrap(), p);
        }
    }

    #[test]
    fn whitney_is_coassociative() {
        for n in 3..=6u32 {
            let ctx = ChowContext::bsl(n).unwrap();
            for a in 1..n - 1 {
                for b in 1..n - a {
                    for i in 2..=n {
                        let c = ctx.chern(i);
                        // BSL_n -> BSL_a x BSL_{n-a} -> BSL_a x BSL_b x BSL_{n-a-b}
                        let (t1, x1) = chern_whitney(n, a, &c).unwrap();
                        let (t1b, y1) = split_factor(&t1, 1, b, &x1).unwrap();
                        // BSL_n -> BSL_{a+b} x BSL_{n-a-b} -> BSL_a x BSL_b x BSL_{n-a-b}
                        let (t2, x2) = chern_whitney(n, a + b, &c).unwrap();
                        let (t2b, y2) = split_factor(&t2, 0, a, &x2).unwrap();
                        assert_eq!(t1b, t2b);
                        assert_eq!(y1, y2, "n={n} a={a} b={b} i={i}");
                    }
                }
            }
        }
    }
}
