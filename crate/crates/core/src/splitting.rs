//! Odd-rank splitting criterion: does a rank-`n` bundle on an `n`-dimensional
//! variety (`n` odd) split off a trivial line bundle?

use std::fmt;

use crate::chow::{F2Poly, Sq2, ZPoly};
use crate::chowwitt::class_euler;
use crate::coeff::{CoeffRing, FieldTag, F2};
use crate::error::{AlgebraError, Result};
use crate::expr::{evaluate, parse_expr, PolyTarget};
use crate::icoh::{rho, ICohContext};
use crate::polyring::{Ctx, Generator, GeneratorContext, DEFAULT_MAX_DEGREE};

/// Truncated graded ring with a user-supplied `Sq^2`.
#[derive(Debug, Clone)]
pub struct RingSpec {
    pub integral: Ctx,
    pub mod2: Ctx,
    pub sq2: Sq2,
    pub dim: u32,
    pub ambient_pn: bool,
    pub two_torsion_free: bool,
}

#[derive(Debug, Clone)]
pub struct BundleSpec {
    pub total: ZPoly,
    pub rank: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Splits,
    Obstructed,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Splits => "SPLITS",
            Verdict::Obstructed => "OBSTRUCTED",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Clone)]
pub struct SplitReport {
    pub verdict: Verdict,
    pub top_chern: ZPoly,
    pub obstruction: F2Poly,
    pub note: Option<String>,
}

impl fmt::Display for SplitReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "VERDICT: {}", self.verdict)?;
        writeln!(f, "c_n = {}", self.top_chern)?;
        writeln!(f, "sq2_obstruction = {}", self.obstruction)?;
        if let Some(n) = &self.note {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}

impl RingSpec {
    /// `gens` are `(name, degree, truncation)`; `sq2` maps generator names to
    /// mod-2 expressions, missing generators go to 0.
    pub fn new(
        gens: &[(String, u32, u32)],
        dim: u32,
        sq2: &[(String, String)],
        ambient_pn: bool,
        two_torsion_free: bool,
        cap: u32,
    ) -> Result<Self> {
        let mk = |ring| {
            GeneratorContext::with_cap(
                ring,
                gens.iter().map(|(n, d, t)| Generator::new(n.clone(), *d).truncated(*t)).collect(),
                cap.max(dim + 1),
            )
        };
        let integral = mk(CoeffRing::Integers)?;
        let mod2 = mk(CoeffRing::Mod2)?;
        let target = PolyTarget::new(&mod2);
        let mut images = vec![F2Poly::zero(&mod2); mod2.len()];
        for (name, text) in sq2 {
            let i = mod2
                .index_of(name)
                .ok_or_else(|| AlgebraError::InvalidArgument(format!("Sq2 given for unknown generator '{name}'")))?;
            images[i] = evaluate(&target.typed::<F2>(), &parse_expr(text)?)?;
        }
        let sq2 = Sq2::new(&mod2, images)?;
        Ok(RingSpec { integral, mod2, sq2, dim, ambient_pn, two_torsion_free })
    }

    /// `Ch(P^d) = F2[h]/(h^(d+1))` with `Sq^2(h) = h^2`, flagged `ambient_pn`.
    pub fn projective(d: u32) -> Result<Self> {
        Self::new(&[("h".into(), 1, d + 1)], d, &[("h".into(), "h^2".into())], true, false, DEFAULT_MAX_DEGREE)
    }

    pub fn reduce(&self, p: &ZPoly) -> F2Poly {
        p.map_coeffs(&self.mod2, |c| F2(c.rem_euclid(2) == 1))
    }
}

impl BundleSpec {
    pub fn new(ring: &RingSpec, total: &str, rank: u32) -> Result<Self> {
        let total = evaluate(&PolyTarget::new(&ring.integral).typed::<i64>(), &parse_expr(total)?)?;
        Ok(BundleSpec { total, rank })
    }

    /// `c_i(E)`, the degree-`i` part of the total class.
    pub fn chern(&self, i: u32) -> ZPoly {
        self.total.homogeneous_component(i)
    }
}

/// Parses the `[ring]` / `[sq2]` / `[bundle]` text format.
pub fn parse_spec(text: &str, cap: u32) -> Result<(RingSpec, BundleSpec)> {
    let mut section = "";
    let mut gens = Vec::new();
    let mut dim = None;
    let (mut ambient, mut torsion_free) = (false, false);
    let mut sq2 = Vec::new();
    let mut total = None;
    let mut rank = None;
    let bad = |line: usize, msg: String| AlgebraError::InvalidArgument(format!("line {line}: {msg}"));
    for (k, raw) in text.lines().enumerate() {
        let ln = k + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') {
            section = match line {
                "[ring]" => "ring",
                "[sq2]" => "sq2",
                "[bundle]" => "bundle",
                other => return Err(bad(ln, format!("unknown section {other}"))),
            };
            continue;
        }
        let words: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| s.parse::<u32>().map_err(|_| bad(ln, format!("expected a number, got '{s}'")));
        match (section, words[0]) {
            ("ring", "gen") if words.len() == 4 => gens.push((words[1].to_string(), num(words[2])?, num(words[3])?)),
            ("ring", "dim") if words.len() == 2 => dim = Some(num(words[1])?),
            ("ring", "flags") => {
                for f in line["flags".len()..].split(['|', ' ', ',']).filter(|s| !s.is_empty()) {
                    match f {
                        "ambient_pn" => ambient = true,
                        "two_torsion_free" => torsion_free = true,
                        other => return Err(bad(ln, format!("unknown flag '{other}'"))),
                    }
                }
            }
            ("sq2", "sq2") => {
                let rest = line["sq2".len()..].trim();
                let (name, expr) = rest.split_once('=').ok_or_else(|| bad(ln, "expected 'sq2 <name> = <expr>'".into()))?;
                sq2.push((name.trim().to_string(), expr.trim().to_string()));
            }
            ("bundle", "total") => {
                let (_, expr) = line.split_once('=').ok_or_else(|| bad(ln, "expected 'total = <expr>'".into()))?;
                total = Some(expr.trim().to_string());
            }
            ("bundle", "rank") if words.len() == 2 => rank = Some(num(words[1])?),
            _ => return Err(bad(ln, format!("unexpected line '{line}'"))),
        }
    }
    let dim = dim.ok_or_else(|| AlgebraError::InvalidArgument("missing 'dim' in [ring]".into()))?;
    let ring = RingSpec::new(&gens, dim, &sq2, ambient, torsion_free, cap)?;
    let total = total.ok_or_else(|| AlgebraError::InvalidArgument("missing 'total' in [bundle]".into()))?;
    let bundle = BundleSpec::new(&ring, &total, rank.unwrap_or(dim))?;
    Ok((ring, bundle))
}

/// Evaluates the criterion `c_n(E) = 0` and `beta(cb_{n-1}(E)) = 0` through
/// the computable surrogate `Sq^2(cb_{n-1}(E))`.
pub fn split_check(ring: &RingSpec, bundle: &BundleSpec) -> Result<SplitReport> {
    let n = ring.dim;
    if n % 2 == 0 {
        return Err(AlgebraError::Dimension(format!("the criterion needs odd dimension, got {n}")));
    }
    if bundle.rank != n {
        return Err(AlgebraError::Rank(format!("bundle rank {} differs from dimension {n}", bundle.rank)));
    }
    if bundle.total.ctx() != &ring.integral {
        return Err(AlgebraError::ContextMismatch);
    }
    if bundle.total.homogeneous_component(0) != ZPoly::one(&ring.integral) {
        return Err(AlgebraError::InvalidArgument("total Chern class must have constant term 1".into()));
    }
    if let Some((d, _)) = bundle.total.components().into_iter().find(|(d, c)| *d > n.min(bundle.rank) && !c.is_zero()) {
        return Err(AlgebraError::Degree(format!("total Chern class has a nonzero component in degree {d} > {n}")));
    }
    let top_chern = bundle.chern(n);
    let obstruction = ring.sq2.apply(&ring.reduce(&bundle.chern(n - 1)))?;
    let (verdict, note) = if !top_chern.is_zero() || !obstruction.is_zero() {
        (Verdict::Obstructed, None)
    } else if ring.ambient_pn {
        (Verdict::Splits, None)
    } else if ring.two_torsion_free && ring.reduce(&bundle.chern(n - 1)).is_zero() {
        (Verdict::Splits, None)
    } else {
        let why = "Sq2(cb_{n-1}(E)) = 0 does not imply beta(cb_{n-1}(E)) = 0 in general (open question)";
        (Verdict::Inconclusive, Some(why.to_string()))
    };
    Ok(SplitReport { verdict, top_chern, obstruction, note })
}

/// Pulls the universal Euler class of `BSL_n` back along `c_i -> c_i(E)`:
/// returns `(rho of its I-part, its Chern part)`. Needs `cb_1(E) = 0`.
pub fn euler_pullback(ring: &RingSpec, bundle: &BundleSpec) -> Result<(F2Poly, ZPoly)> {
    let n = ring.dim;
    if !ring.reduce(&bundle.chern(1)).is_zero() {
        return Err(AlgebraError::InvalidArgument("the pullback needs c_1(E) even".into()));
    }
    let ctx = ICohContext::new(n, FieldTag::R)?;
    let e = class_euler(&ctx)?;
    let mod2_images: Vec<F2Poly> = (2..=n).map(|i| ring.reduce(&bundle.chern(i))).collect();
    let zimages: Vec<ZPoly> = (2..=n).map(|i| bundle.chern(i)).collect();
    let r = rho(e.icoh())?.substitute(&ring.mod2, &mod2_images, |c| *c)?;
    let c = e.chern().substitute(&ring.integral, &zimages, |c| *c)?;
    Ok((r, c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::graded_basis;

    #[test]
    fn p5_examples() {
        let ring = RingSpec::projective(5).unwrap();
        let b = BundleSpec::new(&ring, "(1+2*h)*(1+h)^4", 5).unwrap();
        let r = split_check(&ring, &b).unwrap();
        assert_eq!(r.top_chern.to_string(), "2*h^5");
        assert!(r.obstruction.is_zero());
        assert_eq!(r.verdict, Verdict::Obstructed);
        let b = BundleSpec::new(&ring, "(1+h)^2*(1-h)^2", 5).unwrap();
        let r = split_check(&ring, &b).unwrap();
        assert!(r.top_chern.is_zero());
        assert!(r.obstruction.is_zero());
        assert_eq!(r.verdict, Verdict::Splits);
    }

    #[test]
    fn p3_obstructed() {
        let ring = RingSpec::projective(3).unwrap();
        let b = BundleSpec::new(&ring, "1 + 4*h^3", 3).unwrap();
        let r = split_check(&ring, &b).unwrap();
        assert_eq!(r.verdict, Verdict::Obstructed);
        assert_eq!(r.top_chern.to_string(), "4*h^3");
    }

    #[test]
    fn even_dimension_and_rank_errors() {
        let ring = RingSpec::projective(4).unwrap();
        let b = BundleSpec::new(&ring, "1", 4).unwrap();
        assert!(matches!(split_check(&ring, &b), Err(AlgebraError::Dimension(_))));
        let ring = RingSpec::projective(3).unwrap();
        let b = BundleSpec::new(&ring, "1", 2).unwrap();
        assert!(matches!(split_check(&ring, &b), Err(AlgebraError::Rank(_))));
    }

    #[test]
    fn projective_spaces_have_no_obstruction_in_degree_n_minus_1() {
        for n in (1..=11).step_by(2) {
            let ring = RingSpec::projective(n).unwrap();
            for m in graded_basis(&ring.mod2, n - 1) {
                let x = F2Poly::monomial(&ring.mod2, m, F2(true));
                assert!(ring.sq2.apply(&x).unwrap().is_zero(), "n={n}");
            }
        }
    }

    #[test]
    fn spec_format() {
        let text = "[ring]\ngen h 1 6\ndim 5\nflags ambient_pn\n[sq2]\nsq2 h = h^2\n[bundle]\nrank 5\ntotal = (1+h)^2*(1-h)^2\n";
        let (ring, b) = parse_spec(text, 64).unwrap();
        let r = split_check(&ring, &b).unwrap();
        assert_eq!(r.to_string(), "VERDICT: SPLITS\nc_n = 0\nsq2_obstruction = 0\n");
        assert!(parse_spec("[ring]\ngen h 1\n", 64).is_err());
    }

    #[test]
    fn inconclusive_without_ambient_certificate() {
        let text = "[ring]\ngen x 1 4\ngen y 1 4\ndim 3\n[sq2]\nsq2 x = x^2\nsq2 y = y^2\n[bundle]\ntotal = 1 + 2*x + x*y\n";
        let (ring, b) = parse_spec(text, 64).unwrap();
        let r = split_check(&ring, &b).unwrap();
        assert!(r.top_chern.is_zero());
        // Sq2(xy) = x^2 y + x y^2 is nonzero: obstructed.
        assert_eq!(r.verdict, Verdict::Obstructed);
        let b = BundleSpec::new(&ring, "1 + 2*x + x^2", 3).unwrap();
        let r = split_check(&ring, &b).unwrap();
        assert!(r.obstruction.is_zero());
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert!(r.note.is_some());
    }

    #[test]
    fn universal_consistency_on_projective_spaces() {
        for n in [3u32, 5, 7] {
            let ring = RingSpec::projective(n).unwrap();
            for total in ["(1+2*h)*(1+h)^2", "(1+h)^2*(1-h)^2", "(1+4*h)*(1+2*h)^3", "(1+h)^4*(1+3*h)^2"] {
                let b = BundleSpec::new(&ring, total, n).unwrap();
                if !ring.reduce(&b.chern(1)).is_zero() {
                    continue;
                }
                let r = split_check(&ring, &b).unwrap();
                let (s, c) = euler_pullback(&ring, &b).unwrap();
                assert_eq!(s, r.obstruction, "n={n} {total}");
                assert_eq!(c, r.top_chern, "n={n} {total}");
            }
        }
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn nonzero_top_class_is_never_split(n in (1u32..6).prop_map(|k| 2 * k + 1), coeffs in proptest::collection::vec(-3i64..4, 11), extra in 1i64..5) {
            let ring = RingSpec::projective(n).unwrap();
            let total: String = std::iter::once("1".to_string())
                .chain(coeffs.iter().take(n as usize).enumerate().map(|(i, c)| format!("{c}*h^{}", i + 1)))
                .collect::<Vec<_>>()
                .join(" + ");
            let b = BundleSpec::new(&ring, &total, n).unwrap();
            let before = split_check(&ring, &b).unwrap();
            let bumped = BundleSpec::new(&ring, &format!("{total} + {extra}*h^{n}"), n).unwrap();
            let after = split_check(&ring, &bumped).unwrap();
            if !after.top_chern.is_zero() {
                proptest::prop_assert_eq!(after.verdict, Verdict::Obstructed);
            }
            if before.verdict == Verdict::Obstructed && !before.obstruction.is_zero() {
                proptest::prop_assert_eq!(after.verdict, Verdict::Obstructed);
            }
        }
    }
}
