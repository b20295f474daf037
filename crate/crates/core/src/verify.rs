//! Self-check suites run by `wittclasses verify`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chow::{ChowContext, F2Poly};
use crate::chowwitt::{class_euler, ker_sq2_span};
use crate::coeff::{FieldTag, GWElement, WittElement, F2};
use crate::error::{AlgebraError, Result};
use crate::icoh::{graded_structure_icoh, icoh_mul, restrict_icoh, ICohContext};
use crate::linalg::AbelianGroup;
use crate::polyring::{graded_basis, Monomial, DEFAULT_MAX_DEGREE};
use crate::presentation::{ideal_generators, oracle_graded_group, phi, theta, words_of_degree, IndexSetJ, PresentationElement};
use crate::symplectic::{
    sympl_conjugate, sympl_split, sympl_split_factor, symplectic_ctx, symplectify, SymplPoly, SymplecticSpace,
};

pub const SUITES: [&str; 6] = ["relations", "cube", "sq2", "oracle", "symplectic", "all"];
pub const DEFAULT_SEED: u64 = 0x5eed_2024;

/// Bounds for a run. `None` means the suite default.
#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub n: Option<u32>,
    pub field: FieldTag,
    pub max_degree: Option<u32>,
    pub samples: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { n: None, field: FieldTag::R, max_degree: None, samples: 200, seed: DEFAULT_SEED }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub lines: Vec<(String, Option<String>)>,
}

impl Report {
    fn check(&mut self, name: impl Into<String>, failure: Option<String>) {
        self.lines.push((name.into(), failure));
    }

    fn check_result(&mut self, name: impl Into<String>, r: Result<Option<String>>) {
        let failure = match r {
            Ok(f) => f,
            Err(e) => Some(format!("error: {e}")),
        };
        self.check(name, failure);
    }

    pub fn passed(&self) -> bool {
        self.lines.iter().all(|(_, f)| f.is_none())
    }

    pub fn failures(&self) -> usize {
        self.lines.iter().filter(|(_, f)| f.is_some()).count()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, fail) in &self.lines {
            match fail {
                None => writeln!(f, "PASS {name}")?,
                Some(d) => writeln!(f, "FAIL {name}: {d}")?,
            }
        }
        Ok(())
    }
}

fn range(opt: Option<u32>, lo: u32, hi: u32) -> Vec<u32> {
    match opt {
        Some(n) => vec![n],
        None => (lo..=hi).collect(),
    }
}

pub fn run_suite(suite: &str, opts: &VerifyOptions) -> Result<Report> {
    let mut r = Report::default();
    match suite {
        "relations" => relations(&mut r, opts)?,
        "cube" => cube(&mut r, opts)?,
        "sq2" => sq2(&mut r, opts)?,
        "oracle" => oracle(&mut r, opts)?,
        "symplectic" => symplectic(&mut r, opts)?,
        "all" => {
            for s in &SUITES[..5] {
                r.lines.extend(run_suite(s, opts)?.lines);
            }
        }
        other => {
            return Err(AlgebraError::InvalidArgument(format!(
                "unknown suite '{other}' (expected one of {})",
                SUITES.join(", ")
            )))
        }
    }
    Ok(r)
}

/// Every ideal generator maps to 0 under `theta_n`, and `Phi_n` of it maps
/// to 0 under `theta_{n-1}`.
fn relations(r: &mut Report, opts: &VerifyOptions) -> Result<()> {
    let d = opts.max_degree.unwrap_or(14);
    let f = opts.field;
    for n in range(opts.n, 2, 8) {
        let ctx = ICohContext::with_cap(n, f, d.max(DEFAULT_MAX_DEGREE))?;
        let lower = if n >= 3 { Some(ICohContext::with_cap(n - 1, f, d.max(DEFAULT_MAX_DEGREE))?) } else { None };
        for (k, g) in ideal_generators(n, f, d).iter().enumerate() {
            let deg = g.degree().unwrap_or(0);
            r.check_result(
                format!("relations n={n} field={f} #{k} deg={deg} theta"),
                theta(&ctx, g).map(|v| (!v.is_zero()).then(|| format!("theta({g}) = {v}"))),
            );
            if let Some(lower) = &lower {
                r.check_result(
                    format!("relations n={n} field={f} #{k} deg={deg} phi"),
                    phi(g).and_then(|h| theta(lower, &h)).map(|v| (!v.is_zero()).then(|| format!("theta(phi({g})) = {v}"))),
                );
            }
        }
    }
    Ok(())
}

fn generators(n: u32, f: FieldTag) -> Result<Vec<PresentationElement>> {
    let mut gens: Vec<PresentationElement> =
        (1..=(n - 1) / 2).map(|i| PresentationElement::p(n, f, i)).collect::<Result<_>>()?;
    gens.push(PresentationElement::x(n, f));
    gens.extend(IndexSetJ::all(n).into_iter().map(|j| PresentationElement::b(n, f, j)));
    Ok(gens)
}

/// `theta_{n-1} . Phi_n = restrict . theta_n` on generators and random words.
fn cube(r: &mut Report, opts: &VerifyOptions) -> Result<()> {
    let f = opts.field;
    let dmax = opts.max_degree.unwrap_or(12);
    for n in range(opts.n, 3, 6) {
        let ctx = ICohContext::with_cap(n, f, dmax.max(DEFAULT_MAX_DEGREE))?;
        let lower = ICohContext::with_cap(n - 1, f, dmax.max(DEFAULT_MAX_DEGREE))?;
        let square = |x: &PresentationElement| -> Result<Option<String>> {
            let left = theta(&lower, &phi(x)?)?;
            let right = restrict_icoh(&theta(&ctx, x)?)?;
            Ok((left != right).then(|| format!("{x}: theta(phi) = {left}, restrict(theta) = {right}")))
        };
        for g in generators(n, f)? {
            r.check_result(format!("cube n={n} generator {g}"), square(&g));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ u64::from(n));
        let by_degree: Vec<_> = (0..=dmax).map(|d| words_of_degree(n, d)).collect();
        let mut failure = None;
        for _ in 0..opts.samples {
            let d = rng.gen_range(0..=dmax) as usize;
            if by_degree[d].is_empty() {
                continue;
            }
            let w = by_degree[d][rng.gen_range(0..by_degree[d].len())].clone();
            let x = PresentationElement::word(n, f, w, WittElement::one(f));
            match square(&x) {
                Ok(None) => {}
                Ok(Some(e)) => failure = failure.or(Some(e)),
                Err(e) => failure = failure.or(Some(format!("error: {e}"))),
            }
        }
        r.check(format!("cube n={n} {} random words up to degree {dmax}", opts.samples), failure);
    }
    Ok(())
}

fn monomials_up_to(ctx: &ChowContext, d: u32) -> Vec<F2Poly> {
    (0..=d)
        .flat_map(|k| graded_basis(ctx.mod2(), k))
        .map(|m: Monomial| F2Poly::monomial(ctx.mod2(), m, F2(true)))
        .collect()
}

/// Derivation rule, `Sq^2 Sq^2 = 0`, the Jacobi identity, and
/// `ker Sq^2 = rho(free) + Im Sq^2`.
fn sq2(r: &mut Report, opts: &VerifyOptions) -> Result<()> {
    let d = opts.max_degree.unwrap_or(8);
    for n in range(opts.n, 6, 6) {
        let ctx = ChowContext::with_cap(crate::chow::ChowSpace::Bsl(n), (3 * d + 2).max(DEFAULT_MAX_DEGREE))?;
        let mons = monomials_up_to(&ctx, d);
        let s = |p: &F2Poly| ctx.sq2(p);
        let mut sqsq = None;
        for x in &mons {
            if !s(&s(x)?)?.is_zero() {
                sqsq = sqsq.or(Some(format!("Sq2Sq2({x}) != 0")));
            }
        }
        r.check(format!("sq2 n={n} Sq2Sq2 = 0 on {} monomials of degree <= {d}", mons.len()), sqsq);
        let mut deriv = None;
        for x in &mons {
            for y in &mons {
                let lhs = s(&x.mul(y)?)?;
                let rhs = s(x)?.mul(y)?.add(&x.mul(&s(y)?)?);
                if lhs != rhs {
                    deriv = deriv.or(Some(format!("Sq2({x}*{y})")));
                }
            }
        }
        r.check(format!("sq2 n={n} derivation on {} monomial pairs", mons.len() * mons.len()), deriv);
        let sq: Vec<F2Poly> = mons.iter().map(|m| s(m)).collect::<Result<_>>()?;
        let mut jac = None;
        for (a, x) in mons.iter().enumerate() {
            for (b, y) in mons.iter().enumerate() {
                let xy = s(&x.mul(y)?)?;
                for (c, z) in mons.iter().enumerate() {
                    let t = sq[a].mul(&s(&y.mul(z)?)?)?.add(&xy.mul(&sq[c])?).add(&s(&x.mul(z)?)?.mul(&sq[b])?);
                    if !t.is_zero() {
                        jac = jac.or(Some(format!("Jacobi fails on ({x}, {y}, {z})")));
                    }
                }
            }
        }
        r.check(format!("sq2 n={n} Jacobi on {} monomial triples", mons.len().pow(3)), jac);
        let ictx = ICohContext::new(n, FieldTag::R)?;
        for k in 0..=12.max(d) {
            r.check_result(
                format!("sq2 n={n} d={k} ker Sq2 = rho(free) + Im Sq2"),
                ker_sq2_span(&ictx, k).and_then(|(_, span)| {
                    let kd = ictx.chow().sq2_op().kernel_dim(k)?;
                    Ok((span.dim() != kd).then(|| format!("kernel dim {kd}, span dim {}", span.dim())))
                }),
            );
        }
    }
    Ok(())
}

/// Smith-normal-form groups of `R_n / I_n` against the normal-form model.
fn oracle(r: &mut Report, opts: &VerifyOptions) -> Result<()> {
    let dmax = opts.max_degree.unwrap_or(12);
    for n in range(opts.n, 2, 5) {
        let ctx = ICohContext::new(n, FieldTag::R)?;
        for d in 0..=dmax {
            r.check_result(
                format!("oracle n={n} d={d}"),
                oracle_graded_group(n, d).and_then(|g| {
                    let (free, tors) = graded_structure_icoh(&ctx, d)?;
                    let model = AbelianGroup { free_rank: free, torsion: vec![2; tors] };
                    Ok((g != model).then(|| format!("presentation {g}, model {model}")))
                }),
            );
        }
    }
    Ok(())
}

fn symplectic(r: &mut Report, opts: &VerifyOptions) -> Result<()> {
    let f = opts.field;
    for n in range(opts.n, 2, 5) {
        let space = SymplecticSpace::Bsp(n);
        let ctx = symplectic_ctx(&space, f, DEFAULT_MAX_DEGREE)?;
        let p = |i: u32| SymplPoly::var(&ctx, i as usize - 1);
        let mut coassoc = None;
        for i in 1..=n {
            for a in 1..n {
                for b in 1..(n - a) {
                    let (s1, x) = sympl_split_factor(&space, 0, a, &p(i))?;
                    let (_, left) = sympl_split_factor(&s1, 1, b, &x)?;
                    let (s2, y) = sympl_split_factor(&space, 0, a + b, &p(i))?;
                    let (_, right) = sympl_split_factor(&s2, 0, a, &y)?;
                    if left != right {
                        coassoc = coassoc.or(Some(format!("p{i} with splits ({a},{b})")));
                    }
                }
            }
        }
        r.check(format!("symplectic n={n} field={f} Whitney coassociativity"), coassoc);
        let mut split = None;
        for i in 1..=n {
            let img = sympl_split(n, &p(i))?;
            let tctx = img.ctx().clone();
            let expect = SymplPoly::from_terms(
                &tctx,
                (0u32..1 << n).filter(|s| s.count_ones() == i).map(|s| {
                    let exps = (0..n).map(|k| s >> k & 1).collect();
                    (Monomial::new(&tctx, exps), GWElement::one(f))
                }),
            );
            if img != expect {
                split = split.or(Some(format!("p{i} -> {img}")));
            }
        }
        r.check(format!("symplectic n={n} field={f} splitting gives elementary symmetric polynomials"), split);
        let mut conj = None;
        for m in (0..=4 * n).flat_map(|d| graded_basis(&ctx, d)) {
            let q = SymplPoly::monomial(&ctx, m, GWElement::one(f));
            if sympl_conjugate(&sympl_conjugate(&q)?)? != q {
                conj = conj.or(Some(format!("{q}")));
            }
        }
        r.check(format!("symplectic n={n} field={f} conjugation is an involution"), conj);
    }
    for n in range(opts.n.filter(|n| n % 2 == 0), 2, 6).into_iter().filter(|n| n % 2 == 0) {
        let ictx = ICohContext::new(n, f)?;
        let sctx = symplectic_ctx(&SymplecticSpace::Bsp(n), f, DEFAULT_MAX_DEGREE)?;
        let check = || -> Result<Option<String>> {
            let x = symplectify(&ictx, &SymplPoly::var(&sctx, n as usize - 1))?;
            let e = class_euler(&ictx)?;
            let sign = if (n / 2) % 2 == 0 { WittElement::one(f) } else { WittElement::minus_one_form(f) };
            let icoh = crate::icoh::scalar_mul(&sign, &icoh_mul(e.icoh(), e.icoh())?)?;
            let chern = ictx.chow().chern(n).pow(2)?;
            Ok((x.icoh() != &icoh || x.chern() != &chern).then(|| format!("symplectify(p{n}) = {x}")))
        };
        r.check_result(format!("symplectic n={n} field={f} symplectify(p{n}) = (<-1>^{} e^2, c^2)", n / 2), check());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_runs_pass() {
        let opts = VerifyOptions { n: Some(4), max_degree: Some(8), samples: 20, ..Default::default() };
        for s in ["relations", "cube", "oracle", "symplectic"] {
            let r = run_suite(s, &opts).unwrap();
            assert!(r.passed(), "{s}:\n{r}");
            assert!(!r.lines.is_empty());
        }
        assert!(run_suite("nope", &opts).is_err());
    }

    #[test]
    fn output_format() {
        let mut r = Report::default();
        r.check("a", None);
        r.check("b", Some("x".into()));
        assert_eq!(r.to_string(), "PASS a\nFAIL b: x\n");
        assert_eq!(r.failures(), 1);
    }
}
