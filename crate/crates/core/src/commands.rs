//! Command implementations behind the `wittclasses` binary. Each command
//! returns its full standard output as a string.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::chow::{drop_top, ChowContext, ChowSpace, F2Poly, Sq2};
use crate::chowwitt::{class_beta_lift, class_euler, class_pontryagin, cw_restrict, fiber_square_ranks};
use crate::coeff::{CoeffRing, FieldTag, GWElement, WittElement, F2};
use crate::error::{AlgebraError, Result};
use crate::expr::{evaluate, parse_expr, CwTarget, ICohTarget, PolyTarget, ScalarLiteral, TypedPoly};
use crate::icoh::{beta, graded_structure_icoh, restrict_icoh, rho, ICohContext};
use crate::polyring::{graded_basis, Ctx, GradedPolynomial};
use crate::presentation::IndexSetJ;
use crate::splitting::{parse_spec, split_check};
use crate::symplectic::{symplectic_ctx, SymplecticSpace};
use crate::verify::{run_suite, VerifyOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Space {
    Bsl(u32),
    Bsp(u32),
    Sl2xn(u32),
    Hp(u32),
    Pn(u32),
}

impl FromStr for Space {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || AlgebraError::InvalidArgument(format!("bad space '{s}' (expected bsl:<n>, bsp:<n>, sl2xn:<n>, hp:<m> or pn:<d>)"));
        let (kind, num) = s.split_once(':').ok_or_else(bad)?;
        let k: u32 = num.parse().map_err(|_| bad())?;
        let space = match kind {
            "bsl" if k >= 2 => Space::Bsl(k),
            "bsp" if k >= 1 => Space::Bsp(k),
            "sl2xn" if k >= 1 => Space::Sl2xn(k),
            "hp" if k >= 1 => Space::Hp(k),
            "pn" if k >= 1 => Space::Pn(k),
            _ => return Err(bad()),
        };
        Ok(space)
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Bsl(n) => write!(f, "bsl:{n}"),
            Space::Bsp(n) => write!(f, "bsp:{n}"),
            Space::Sl2xn(n) => write!(f, "sl2xn:{n}"),
            Space::Hp(m) => write!(f, "hp:{m}"),
            Space::Pn(d) => write!(f, "pn:{d}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Theory {
    Chow,
    Ch2,
    Icoh,
    Cw,
}

impl FromStr for Theory {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chow" => Ok(Theory::Chow),
            "ch2" => Ok(Theory::Ch2),
            "icoh" => Ok(Theory::Icoh),
            "cw" => Ok(Theory::Cw),
            other => Err(AlgebraError::InvalidArgument(format!("unknown theory '{other}' (expected chow, ch2, icoh or cw)"))),
        }
    }
}

/// Space, coefficients and theory shared by the algebraic commands.
#[derive(Debug, Clone)]
pub struct Session {
    pub space: Space,
    pub field: FieldTag,
    pub theory: Theory,
    pub cap: u32,
}

/// A value in whichever ring the session selects.
enum Value {
    Z(GradedPolynomial<i64>),
    F2(F2Poly),
    W(GradedPolynomial<WittElement>),
    Gw(GradedPolynomial<GWElement>),
    ICoh(crate::icoh::ICohElement),
    Cw(crate::chowwitt::ChowWittElement),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Z(p) => write!(f, "{p}"),
            Value::F2(p) => write!(f, "{p}"),
            Value::W(p) => write!(f, "{p}"),
            Value::Gw(p) => write!(f, "{p}"),
            Value::ICoh(x) => write!(f, "{x}"),
            Value::Cw(x) => write!(f, "{x}"),
        }
    }
}

fn unsupported(what: &str, s: &Session) -> AlgebraError {
    AlgebraError::InvalidArgument(format!("{what} is not available for theory {:?} on {}", s.theory, s.space).to_lowercase())
}

impl Session {
    fn chow_space(&self) -> Option<ChowSpace> {
        match self.space {
            Space::Bsl(n) => Some(ChowSpace::Bsl(n)),
            Space::Bsp(n) => Some(ChowSpace::Bsp(n)),
            Space::Sl2xn(n) => Some(ChowSpace::Sl2Power(n)),
            Space::Pn(d) => Some(ChowSpace::Projective(d)),
            Space::Hp(_) => None,
        }
    }

    fn sympl_space(&self) -> Option<SymplecticSpace> {
        match self.space {
            Space::Bsp(n) => Some(SymplecticSpace::Bsp(n)),
            Space::Sl2xn(n) => Some(SymplecticSpace::Sl2Power(n)),
            Space::Hp(m) => Some(SymplecticSpace::Hp(m)),
            _ => None,
        }
    }

    fn chow(&self) -> Result<ChowContext> {
        match self.chow_space() {
            Some(s) => ChowContext::with_cap(s, self.cap),
            None => {
                Err(AlgebraError::InvalidArgument(format!("no Chern-class model for {}; use the cw or icoh theory", self.space)))
            }
        }
    }

    /// Mod-2 ring with its `Sq^2`; for `HP^m` the ring of `p1` with zero `Sq^2`.
    fn mod2(&self) -> Result<(Ctx, Sq2)> {
        match self.sympl_space() {
            Some(sp @ SymplecticSpace::Hp(_)) => {
                let ctx = symplectic_ctx(&sp, self.field, self.cap)?.with_ring(CoeffRing::Mod2);
                let zero = vec![F2Poly::zero(&ctx); ctx.len()];
                Ok((ctx.clone(), Sq2::new(&ctx, zero)?))
            }
            _ => {
                let c = self.chow()?;
                Ok((c.mod2().clone(), c.sq2_op().clone()))
            }
        }
    }

    fn icoh(&self) -> Result<Arc<ICohContext>> {
        match self.space {
            Space::Bsl(n) => ICohContext::with_cap(n, self.field, self.cap),
            _ => Err(unsupported("I-cohomology of BSL_n", self)),
        }
    }

    fn sympl(&self) -> Result<Ctx> {
        symplectic_ctx(&self.sympl_space().ok_or_else(|| unsupported("a symplectic ring", self))?, self.field, self.cap)
    }

    fn poly<C: ScalarLiteral>(&self, ctx: &Ctx, e: &crate::expr::Expr) -> Result<GradedPolynomial<C>> {
        let t = PolyTarget::new(ctx);
        let typed: TypedPoly<'_, C> = t.typed();
        evaluate(&typed, e)
    }

    fn eval(&self, text: &str) -> Result<Value> {
        let e = parse_expr(text)?;
        Ok(match (self.theory, self.space) {
            (Theory::Chow, Space::Hp(_)) => Value::Z(self.poly(&self.sympl()?.with_ring(CoeffRing::Integers), &e)?),
            (Theory::Chow, _) => Value::Z(self.poly(self.chow()?.integral(), &e)?),
            (Theory::Ch2, _) => Value::F2(self.poly(&self.mod2()?.0, &e)?),
            (Theory::Icoh, Space::Bsl(_)) => Value::ICoh(evaluate(&ICohTarget { ctx: self.icoh()? }, &e)?),
            (Theory::Icoh, Space::Pn(_)) => return Err(unsupported("I-cohomology", self)),
            (Theory::Icoh, _) => Value::W(self.poly(&self.sympl()?.with_ring(CoeffRing::Witt(self.field)), &e)?),
            (Theory::Cw, Space::Bsl(_)) => Value::Cw(evaluate(&CwTarget { ctx: self.icoh()? }, &e)?),
            (Theory::Cw, Space::Pn(_)) => return Err(unsupported("Chow-Witt", self)),
            (Theory::Cw, _) => Value::Gw(self.poly(&self.sympl()?, &e)?),
        })
    }

    fn mul_values(&self, a: Value, b: Value) -> Result<Value> {
        Ok(match (a, b) {
            (Value::Z(a), Value::Z(b)) => Value::Z(a.mul(&b)?),
            (Value::F2(a), Value::F2(b)) => Value::F2(a.mul(&b)?),
            (Value::W(a), Value::W(b)) => Value::W(a.mul(&b)?),
            (Value::Gw(a), Value::Gw(b)) => Value::Gw(a.mul(&b)?),
            (Value::ICoh(a), Value::ICoh(b)) => Value::ICoh(crate::icoh::icoh_mul(&a, &b)?),
            (Value::Cw(a), Value::Cw(b)) => Value::Cw(a.mul(&b)?),
            _ => return Err(AlgebraError::ContextMismatch),
        })
    }

    /// Product of the given expressions (a single expression is just evaluated).
    pub fn mul(&self, exprs: &[String]) -> Result<String> {
        let mut it = exprs.iter();
        let first = it.next().ok_or_else(|| AlgebraError::InvalidArgument("mul needs at least one expression".into()))?;
        let mut acc = self.eval(first)?;
        for e in it {
            acc = self.mul_values(acc, self.eval(e)?)?;
        }
        Ok(format!("{acc}\n"))
    }

    pub fn sq2(&self, expr: &str) -> Result<String> {
        if self.theory != Theory::Ch2 {
            return Err(AlgebraError::InvalidArgument("sq2 needs the ch2 theory".into()));
        }
        let (ctx, sq) = self.mod2()?;
        let p: F2Poly = self.poly(&ctx, &parse_expr(expr)?)?;
        Ok(format!("{}\n", sq.apply(&p)?))
    }

    pub fn beta(&self, expr: &str) -> Result<String> {
        if self.theory != Theory::Ch2 {
            return Err(AlgebraError::InvalidArgument("beta needs ch2 input".into()));
        }
        let ctx = self.icoh()?;
        let p: F2Poly = self.poly(ctx.mod2(), &parse_expr(expr)?)?;
        Ok(format!("{}\n", beta(&ctx, &p)?))
    }

    pub fn rho(&self, expr: &str) -> Result<String> {
        let out = match self.eval(expr)? {
            Value::ICoh(x) => rho(&x)?.to_string(),
            Value::Cw(x) => rho(x.icoh())?.to_string(),
            Value::W(p) => {
                let (ctx, _) = self.mod2()?;
                let r = p.substitute(&ctx, &self.symplectic_reductions(&ctx)?, |w| F2(w.rank_mod2() == 1))?;
                r.to_string()
            }
            _ => return Err(AlgebraError::InvalidArgument("rho needs the icoh or cw theory".into())),
        };
        Ok(format!("{out}\n"))
    }

    // rho(p_i) = cb_{2i} on symplectic spaces.
    fn symplectic_reductions(&self, ctx: &Ctx) -> Result<Vec<F2Poly>> {
        match self.space {
            Space::Bsp(n) => (1..=n).map(|i| F2Poly::var_named(ctx, &format!("cb{}", 2 * i))).collect(),
            Space::Sl2xn(n) => (1..=n).map(|k| F2Poly::var_named(ctx, &format!("cb2_{k}"))).collect(),
            _ => Ok((0..ctx.len()).map(|i| F2Poly::var(ctx, i)).collect()),
        }
    }

    pub fn restrict(&self, expr: &str) -> Result<String> {
        let Space::Bsl(n) = self.space else {
            return Err(unsupported("restriction", self));
        };
        if n < 3 {
            return Err(AlgebraError::InvalidArgument("restriction needs n >= 3".into()));
        }
        let lower = Session { space: Space::Bsl(n - 1), ..self.clone() };
        let out = match self.eval(expr)? {
            Value::Z(p) => drop_top(&p, lower.chow()?.integral())?.to_string(),
            Value::F2(p) => drop_top(&p, lower.chow()?.mod2())?.to_string(),
            Value::ICoh(x) => restrict_icoh(&x)?.to_string(),
            Value::Cw(x) => cw_restrict(&x)?.to_string(),
            _ => unreachable!("BSL values"),
        };
        Ok(format!("{out}\n"))
    }

    /// Named characteristic classes of the space in the chosen theory.
    pub fn classes(&self) -> Result<String> {
        let mut rows: Vec<(String, String)> = Vec::new();
        match (self.theory, self.space) {
            (Theory::Chow, Space::Hp(_)) | (Theory::Ch2, Space::Hp(_)) => {
                rows.push(("p1".into(), "p1".into()));
            }
            (Theory::Chow, _) => {
                let c = self.chow()?;
                for g in c.integral().gens() {
                    rows.push((g.name.clone(), g.name.clone()));
                }
            }
            (Theory::Ch2, _) => {
                let (ctx, sq) = self.mod2()?;
                for (i, g) in ctx.gens().iter().enumerate() {
                    rows.push((g.name.clone(), format!("Sq2 = {}", sq.image_of_generator(i))));
                }
            }
            (Theory::Icoh, Space::Bsl(n)) => {
                let ctx = self.icoh()?;
                for i in 1..=n {
                    rows.push((format!("p{i}"), crate::icoh::pontryagin_icoh(&ctx, i)?.to_string()));
                }
                rows.push((format!("e{n}"), crate::icoh::euler_class_icoh(&ctx)?.to_string()));
                for j in IndexSetJ::all(n) {
                    rows.push((format!("b{j}"), crate::icoh::beta_j(&ctx, &j.elements())?.to_string()));
                }
            }
            (Theory::Cw, Space::Bsl(n)) => {
                let ctx = self.icoh()?;
                for i in 1..=n {
                    rows.push((format!("p{i}"), class_pontryagin(&ctx, i)?.to_string()));
                }
                rows.push((format!("e{n}"), class_euler(&ctx)?.to_string()));
                for j in IndexSetJ::all(n) {
                    rows.push((format!("b{j}"), class_beta_lift(&ctx, &j.elements())?.to_string()));
                }
            }
            (Theory::Icoh, _) | (Theory::Cw, _) => {
                let ctx = self.sympl()?;
                for g in ctx.gens() {
                    rows.push((g.name.clone(), format!("degree {}", g.degree)));
                }
            }
        }
        Ok(rows.into_iter().map(|(a, b)| format!("{a}\t{b}\n")).collect())
    }

    /// Per-degree structure as TSV; degrees with a zero group are omitted.
    pub fn poincare(&self, max_degree: u32) -> Result<String> {
        let mut out = String::new();
        let basis_table = |ctx: &Ctx, out: &mut String| {
            out.push_str("degree\trank\tbasis\n");
            for d in 0..=max_degree {
                let b = graded_basis(ctx, d);
                if !b.is_empty() {
                    let names: Vec<String> = b.iter().map(|m| m.format(ctx)).collect();
                    out.push_str(&format!("{d}\t{}\t{}\n", b.len(), names.join(",")));
                }
            }
        };
        match (self.theory, self.space) {
            (Theory::Icoh, Space::Bsl(_)) => {
                let ctx = self.icoh()?;
                out.push_str("degree\tfree\ttorsion\n");
                for d in 0..=max_degree {
                    let (f, t) = graded_structure_icoh(&ctx, d)?;
                    if f + t > 0 {
                        out.push_str(&format!("{d}\t{f}\t{t}\n"));
                    }
                }
            }
            (Theory::Cw, Space::Bsl(_)) => {
                let ctx = self.icoh()?;
                out.push_str("degree\ticoh_free\ticoh_torsion\tchow_rank\n");
                for d in 0..=max_degree {
                    let (f, t, c) = fiber_square_ranks(&ctx, d)?;
                    if f + t + c > 0 {
                        out.push_str(&format!("{d}\t{f}\t{t}\t{c}\n"));
                    }
                }
            }
            (Theory::Chow, Space::Hp(_)) | (Theory::Icoh, _) | (Theory::Cw, _) => {
                if matches!(self.space, Space::Pn(_)) {
                    return Err(unsupported("a Poincare table", self));
                }
                basis_table(&self.sympl()?, &mut out);
            }
            (Theory::Chow, _) => basis_table(self.chow()?.integral(), &mut out),
            (Theory::Ch2, _) => basis_table(&self.mod2()?.0, &mut out),
        }
        Ok(out)
    }
}

/// Runs a suite; the flag is whether every check passed.
pub fn verify(suite: &str, opts: &VerifyOptions) -> Result<(String, bool)> {
    let r = run_suite(suite, opts)?;
    Ok((r.to_string(), r.passed()))
}

pub fn split_check_text(text: &str, cap: u32) -> Result<String> {
    let (ring, bundle) = parse_spec(text, cap)?;
    Ok(split_check(&ring, &bundle)?.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::DEFAULT_MAX_DEGREE;

    fn s(space: &str, theory: Theory) -> Session {
        Session { space: space.parse().unwrap(), field: FieldTag::R, theory, cap: DEFAULT_MAX_DEGREE }
    }

    #[test]
    fn poincare_examples() {
        let t = s("bsl:5", Theory::Icoh).poincare(5).unwrap();
        assert_eq!(t, "degree\tfree\ttorsion\n0\t1\t0\n3\t0\t1\n4\t1\t0\n5\t0\t1\n");
        let t = s("bsp:3", Theory::Cw).poincare(4).unwrap();
        assert_eq!(t, "degree\trank\tbasis\n0\t1\t1\n2\t1\tp1\n4\t2\tp1^2,p2\n");
        let t = s("pn:3", Theory::Chow).poincare(0).unwrap();
        assert_eq!(t, "degree\trank\tbasis\n0\t1\t1\n");
    }

    #[test]
    fn command_examples() {
        assert_eq!(s("bsl:5", Theory::Icoh).mul(&["p2*b{1}".into()]).unwrap(), "tors(cb2^2*cb3)\n");
        assert_eq!(s("bsl:5", Theory::Ch2).sq2("cb2^2 + cb2").unwrap(), "cb3\n");
        assert_eq!(s("bsl:3", Theory::Ch2).beta("cb2").unwrap(), "tors(cb3)\n");
        assert_eq!(s("bsl:5", Theory::Cw).restrict("e5").unwrap(), "(0, 0)\n");
        assert_eq!(s("bsl:3", Theory::Cw).mul(&["e3".into(), "e3".into()]).unwrap(), "(tors(cb3^2), c3^2)\n");
        assert_eq!(s("hp:2", Theory::Cw).mul(&["p1^3".into()]).unwrap(), "0\n");
        assert!(s("bsp:2", Theory::Ch2).beta("cb2").is_err());
        assert!(s("bsl:5", Theory::Chow).sq2("c2").is_err());
        assert!("bsl:x".parse::<Space>().is_err());
    }

    #[test]
    fn classes_listing() {
        let out = s("bsl:3", Theory::Cw).classes().unwrap();
        assert!(out.contains("e3\t(tors(cb3), c3)\n"));
        assert!(out.contains("p2\t(p2, c2^2)\n"));
    }
}
