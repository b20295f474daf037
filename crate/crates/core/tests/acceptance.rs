//! Acceptance criteria 1-11. Each criterion prints one PASS/FAIL line.
//! All comparisons are exact (zero tolerance): integer, Z/2 and Witt-ring
//! arithmetic only.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wittclasses::chow::{ChowContext, F2Poly};
use wittclasses::chowwitt::{
    class_euler, class_pontryagin, cw_make, generates_fiber_product, products_of_degree,
    ChowWittElement,
};
use wittclasses::coeff::{CoeffRing, FieldTag, GWElement, WittElement, F2};
use wittclasses::expr::{evaluate, parse_expr, PolyTarget};
use wittclasses::icoh::{beta, graded_structure_icoh, icoh_mul, restrict_icoh, rho, ICohContext, ICohElement};
use wittclasses::linalg::AbelianGroup;
use wittclasses::polyring::{graded_basis, GradedPolynomial, Monomial};
use wittclasses::presentation::{ideal_generators, oracle_graded_group, phi, theta, words_of_degree, IndexSetJ, PresentationElement};
use wittclasses::splitting::{euler_pullback, split_check, BundleSpec, RingSpec, Verdict};
use wittclasses::symplectic::{
    sympl_conjugate, sympl_split, sympl_split_factor, symplectic_ctx, symplectify, SymplPoly, SymplecticSpace,
};
use wittclasses::verify::{run_suite, VerifyOptions};

const R: FieldTag = FieldTag::R;
const SEED: u64 = 20_241_018;

/// Stand-alone model of `Ch(BSL_n) = F2[cb_2..cb_n]` and its `Sq^2`,
/// used as an oracle for the library's mod-2 computations.
mod mini {
    use std::collections::BTreeSet;

    /// Exponents of `cb_2..cb_n`.
    pub type Mono = Vec<u32>;
    pub type Poly = BTreeSet<Mono>;

    pub fn degree(m: &Mono) -> u32 {
        m.iter().enumerate().map(|(i, e)| (i as u32 + 2) * e).sum()
    }

    pub fn basis(n: u32, d: u32) -> Vec<Mono> {
        fn rec(n: u32, k: u32, left: u32, cur: &mut Mono, out: &mut Vec<Mono>) {
            if k > n {
                if left == 0 {
                    out.push(cur.clone());
                }
                return;
            }
            let mut e = 0;
            while e * k <= left {
                cur.push(e);
                rec(n, k + 1, left - e * k, cur, out);
                cur.pop();
                e += 1;
            }
        }
        let mut out = Vec::new();
        rec(n, 2, d, &mut Vec::new(), &mut out);
        out
    }

    fn toggle(p: &mut Poly, m: Mono) {
        if !p.remove(&m) {
            p.insert(m);
        }
    }

    /// `Sq^2(cb_k) = cb_{k+1}` for even `k < n`, zero otherwise; Leibniz rule.
    pub fn sq2_mono(n: u32, m: &Mono) -> Poly {
        let mut out = Poly::new();
        for (i, &e) in m.iter().enumerate() {
            let k = i as u32 + 2;
            if e % 2 == 1 && k % 2 == 0 && k < n {
                let mut t = m.clone();
                t[i] -= 1;
                t[i + 1] += 1;
                toggle(&mut out, t);
            }
        }
        out
    }

    pub fn sq2(n: u32, p: &Poly) -> Poly {
        let mut out = Poly::new();
        for m in p {
            for t in sq2_mono(n, m) {
                toggle(&mut out, t);
            }
        }
        out
    }

    pub fn mul(a: &Poly, b: &Poly) -> Poly {
        let mut out = Poly::new();
        for x in a {
            for y in b {
                toggle(&mut out, x.iter().zip(y).map(|(p, q)| p + q).collect());
            }
        }
        out
    }

    /// GF(2) rank by elimination on `u128` rows.
    pub fn rank(rows: &[u128]) -> usize {
        let mut pivots: Vec<u128> = Vec::new();
        for &r in rows {
            let mut v = r;
            for &p in &pivots {
                v = v.min(v ^ p);
            }
            if v != 0 {
                pivots.push(v);
                pivots.sort_unstable_by(|a, b| b.cmp(a));
            }
        }
        pivots.len()
    }

    pub fn vector(p: &Poly, basis: &[Mono]) -> u128 {
        assert!(basis.len() <= 128);
        basis.iter().enumerate().filter(|(_, m)| p.contains(*m)).fold(0, |acc, (i, _)| acc | 1 << i)
    }

    pub fn image_dim(n: u32, d: u32) -> usize {
        if d == 0 {
            return 0;
        }
        let tgt = basis(n, d);
        let rows: Vec<u128> =
            basis(n, d - 1).iter().map(|m| vector(&sq2_mono(n, m), &tgt)).collect();
        rank(&rows)
    }

    pub fn kernel_dim(n: u32, d: u32) -> usize {
        let tgt = basis(n, d + 1);
        let src = basis(n, d);
        let rows: Vec<u128> = src.iter().map(|m| vector(&sq2_mono(n, m), &tgt)).collect();
        src.len() - rank(&rows)
    }
}

struct Outcome {
    id: &'static str,
    passed: bool,
    detail: String,
}

fn report(id: &'static str, title: &str, failures: Vec<String>, summary: String) -> Outcome {
    let passed = failures.is_empty();
    let detail = if passed {
        format!("{title}: {summary}")
    } else {
        format!("{title}: {} failure(s), first: {}", failures.len(), failures[0])
    };
    Outcome { id, passed, detail }
}

fn icoh(n: u32) -> Arc<ICohContext> {
    ICohContext::new(n, R).unwrap()
}

fn criterion_1() -> Outcome {
    let mut fails = Vec::new();
    let mut count = 0;
    for n in 2..=8 {
        let ctx = icoh(n);
        for g in ideal_generators(n, R, 14) {
            count += 1;
            let v = theta(&ctx, &g).unwrap();
            if !v.is_zero() {
                fails.push(format!("n={n}: theta({g}) = {v}"));
            }
        }
    }
    report("1", "relation suite", fails, format!("{count} ideal generators (n=2..8, R, degree <= 14) map to exactly 0"))
}

fn criterion_2() -> Outcome {
    let mut fails = Vec::new();
    let mut count = 0;
    for n in 3..=8 {
        let lower = icoh(n - 1);
        for g in ideal_generators(n, R, 14) {
            count += 1;
            let v = theta(&lower, &phi(&g).unwrap()).unwrap();
            if !v.is_zero() {
                fails.push(format!("n={n}: theta(phi({g})) = {v}"));
            }
        }
    }
    report("2", "phi-compatibility", fails, format!("{count} generators (n=3..8, degree <= 14) restrict into the lower ideal"))
}

fn criterion_3() -> Outcome {
    let mut fails = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut count = 0;
    for n in 3..=6 {
        let ctx = icoh(n);
        let lower = icoh(n - 1);
        let mut elems: Vec<PresentationElement> = (1..=(n - 1) / 2).map(|i| PresentationElement::p(n, R, i).unwrap()).collect();
        elems.push(PresentationElement::x(n, R));
        elems.extend(IndexSetJ::all(n).into_iter().map(|j| PresentationElement::b(n, R, j)));
        let words: Vec<_> = (0..=14).flat_map(|d| words_of_degree(n, d)).collect();
        for _ in 0..200 {
            // Random W(R)-combination of up to three words.
            let mut x = PresentationElement::zero(n, R);
            for _ in 0..rng.gen_range(1..=3) {
                let w = words[rng.gen_range(0..words.len())].clone();
                let c = WittElement::from_int(R, rng.gen_range(-3..=3));
                x = x.add(&PresentationElement::word(n, R, w, c));
            }
            elems.push(x);
        }
        for x in elems {
            count += 1;
            let left = theta(&lower, &phi(&x).unwrap()).unwrap();
            let right = restrict_icoh(&theta(&ctx, &x).unwrap()).unwrap();
            if left != right {
                fails.push(format!("n={n} {x}: {left} vs {right}"));
            }
        }
    }
    report("3", "cube commutativity", fails, format!("{count} elements (generators + 200 random per n=3..6)"))
}

fn criterion_4() -> Outcome {
    let mut fails = Vec::new();
    for n in 2..=5 {
        let ctx = icoh(n);
        for d in 0..=12 {
            let raw = oracle_graded_group(n, d).unwrap();
            let (free, tors) = graded_structure_icoh(&ctx, d).unwrap();
            let model = AbelianGroup { free_rank: free, torsion: vec![2; tors] };
            // Independent count: monomials in p_{2i} (deg 4i) and e_n, and dim Im Sq^2.
            let mut free_count = 0;
            let free_degrees: Vec<u32> =
                (1..=(n - 1) / 2).map(|i| 4 * i).chain((n % 2 == 0).then_some(n)).collect();
            count_monomials(&free_degrees, d, &mut free_count);
            let indep = AbelianGroup { free_rank: free_count, torsion: vec![2; mini::image_dim(n, d)] };
            if raw != model || model != indep {
                fails.push(format!("n={n} d={d}: presentation {raw}, model {model}, count {indep}"));
            }
        }
    }
    report("4", "oracle equivalence", fails, "Smith normal form of R_n/I_n = Z^free + (Z/2)^torsion for n<=5, d<=12".into())
}

fn count_monomials(degrees: &[u32], d: u32, out: &mut usize) {
    match degrees.split_first() {
        None => *out += usize::from(d == 0),
        Some((&k, rest)) => {
            let mut e = 0;
            while e * k <= d {
                count_monomials(rest, d - e * k, out);
                e += 1;
            }
        }
    }
}

fn lib_poly(ctx: &ChowContext, m: &mini::Mono) -> F2Poly {
    F2Poly::monomial(ctx.mod2(), Monomial::new(ctx.mod2(), m.clone()), F2(true))
}

fn to_mini(p: &F2Poly) -> mini::Poly {
    p.terms().map(|(m, _)| m.exps().to_vec()).collect()
}

fn criterion_5() -> Outcome {
    let n = 6;
    let ctx = ChowContext::bsl(n).unwrap();
    let mons: Vec<mini::Mono> = (0..=8).flat_map(|d| mini::basis(n, d)).collect();
    let lib: Vec<F2Poly> = mons.iter().map(|m| lib_poly(&ctx, m)).collect();
    let sq: Vec<F2Poly> = lib.iter().map(|p| ctx.sq2(p).unwrap()).collect();
    let s = |p: &F2Poly| ctx.sq2(p).unwrap();
    let m = |a: &F2Poly, b: &F2Poly| a.mul(b).unwrap();
    let mut fails = Vec::new();
    for (i, x) in lib.iter().enumerate() {
        if to_mini(&sq[i]) != mini::sq2_mono(n, &mons[i]) {
            fails.push(format!("Sq2({x}) disagrees with the oracle"));
        }
        if !s(&sq[i]).is_zero() {
            fails.push(format!("Sq2Sq2({x}) != 0"));
        }
        for (j, y) in lib.iter().enumerate() {
            let xy = m(x, y);
            if s(&xy) != m(&sq[i], y).add(&m(x, &sq[j])) {
                fails.push(format!("derivation fails on ({x}, {y})"));
            }
            let sxy = s(&xy);
            for (k, z) in lib.iter().enumerate() {
                let jac = m(&sq[i], &s(&m(y, z))).add(&m(&sxy, &sq[k])).add(&m(&s(&m(x, z)), &sq[j]));
                if !jac.is_zero() {
                    fails.push(format!("Jacobi fails on ({x}, {y}, {z})"));
                }
            }
        }
    }
    let k = lib.len();
    report("5", "Sq2 suite", fails, format!("Ch(BSL_6), {k} monomials of degree <= 8: {} pairs, {} triples", k * k, k * k * k))
}

/// Span of monomials in cb_{2i+1}, cb_{2i}^2 and (n even) cb_n, in degree d.
fn literal_span_dim(n: u32, d: u32) -> usize {
    let mut letters: Vec<mini::Mono> = Vec::new();
    let unit = |k: u32, e: u32| {
        let mut m = vec![0; n as usize - 1];
        m[k as usize - 2] = e;
        m
    };
    for k in 2..=n {
        if k % 2 == 1 {
            letters.push(unit(k, 1));
        } else {
            letters.push(unit(k, 2));
        }
    }
    if n % 2 == 0 {
        letters.push(unit(n, 1));
    }
    let mut products = BTreeSet::new();
    fn rec(letters: &[mini::Mono], start: usize, cur: mini::Mono, d: u32, out: &mut BTreeSet<mini::Mono>) {
        let deg = mini::degree(&cur);
        if deg == d {
            out.insert(cur.clone());
        }
        for (i, l) in letters.iter().enumerate().skip(start) {
            if deg + mini::degree(l) <= d {
                let next: mini::Mono = cur.iter().zip(l).map(|(a, b)| a + b).collect();
                rec(letters, i, next, d, out);
            }
        }
    }
    rec(&letters, 0, vec![0; n as usize - 1], d, &mut products);
    let basis = mini::basis(n, d);
    let rows: Vec<u128> = products.iter().map(|m| mini::vector(&[m.clone()].into_iter().collect(), &basis)).collect();
    mini::rank(&rows)
}

fn amended_span_dim(n: u32, d: u32) -> usize {
    let basis = mini::basis(n, d);
    let mut rows: Vec<u128> = Vec::new();
    let free_letters: Vec<mini::Poly> = {
        let mut v = Vec::new();
        for k in (2..n).step_by(2) {
            let mut m = vec![0; n as usize - 1];
            m[k as usize - 2] = 2;
            v.push([m].into_iter().collect());
        }
        if n % 2 == 0 {
            let mut m = vec![0; n as usize - 1];
            m[n as usize - 2] = 1;
            v.push([m].into_iter().collect());
        }
        v
    };
    // Products of free reductions.
    fn rec(letters: &[mini::Poly], start: usize, cur: mini::Poly, d: u32, n: u32, basis: &[mini::Mono], rows: &mut Vec<u128>) {
        let deg = cur.iter().next().map(mini::degree).unwrap_or(0);
        if deg == d {
            rows.push(mini::vector(&cur, basis));
        }
        for (i, l) in letters.iter().enumerate().skip(start) {
            let ld = mini::degree(l.iter().next().unwrap());
            if deg + ld <= d {
                rec(letters, i, mini::mul(&cur, l), d, n, basis, rows);
            }
        }
    }
    let one: mini::Poly = [vec![0; n as usize - 1]].into_iter().collect();
    rec(&free_letters, 0, one, d, n, &basis, &mut rows);
    if d > 0 {
        for m in mini::basis(n, d - 1) {
            rows.push(mini::vector(&mini::sq2(n, &[m].into_iter().collect()), &basis));
        }
    }
    mini::rank(&rows)
}

/// The literal statement, plus the amended one with `Im Sq^2` added.
fn criterion_6() -> (Outcome, Outcome) {
    let mut literal = Vec::new();
    let mut amended = Vec::new();
    for n in 2..=6 {
        let ctx = ChowContext::bsl(n).unwrap();
        for d in 0..=12 {
            let kd = mini::kernel_dim(n, d);
            let lib = ctx.sq2_op().kernel_dim(d).unwrap();
            if kd != lib {
                amended.push(format!("n={n} d={d}: library kernel {lib}, oracle {kd}"));
            }
            let lit = literal_span_dim(n, d);
            if lit != kd {
                literal.push(format!("n={n} d={d}: ker Sq2 has dim {kd}, monomial span has dim {lit}"));
            }
            let am = amended_span_dim(n, d);
            if am != kd {
                amended.push(format!("n={n} d={d}: ker Sq2 has dim {kd}, free reductions + Im Sq2 span {am}"));
            }
        }
    }
    (
        report("6", "ker d suite, literal monomial span", literal, "dimensions agree for n<=6, d<=12".into()),
        report("6*", "ker d suite, monomial span + Im Sq2", amended, "dimensions agree for n<=6, d<=12".into()),
    )
}

fn criterion_7() -> Outcome {
    let c = icoh(3);
    let ch = c.chow();
    let mut fails = Vec::new();
    let classes = [
        cw_make(ICohElement::generator(&c, "p2").unwrap(), ch.chern(2).pow(2).unwrap()),
        cw_make(beta(&c, &ch.chern_bar(2)).unwrap(), ch.chern(3)),
        cw_make(ICohElement::zero(&c), ch.chern(2).scale(&2)),
    ];
    let classes: Vec<ChowWittElement> = classes.into_iter().filter_map(|r| r.map_err(|e| fails.push(e.to_string())).ok()).collect();
    if classes.len() == 3 {
        // Values stated for this example: p_2 = (p_2, c_2^2), e_3 = (beta(cb_2), c_3).
        if classes[0] != class_pontryagin(&c, 2).unwrap() {
            fails.push("(p2, c2^2) differs from the Pontryagin class p2".into());
        }
        if classes[1] != class_euler(&c).unwrap() {
            fails.push("(beta(cb2), c3) differs from the Euler class".into());
        }
        let forms = [GWElement::one(R), GWElement::minus_one_form(R)];
        for d in 0..=4 {
            let elems: Vec<ChowWittElement> = products_of_degree(&c, &classes, d)
                .unwrap()
                .into_iter()
                .flat_map(|p| forms.iter().map(move |g| p.gw_scale(g).unwrap()))
                .collect();
            if !generates_fiber_product(&c, d, &elems).unwrap() {
                fails.push(format!("degree {d} not generated"));
            }
        }
    }
    report("7", "BSL_3 worked example", fails, "three classes valid, generate CH~^d(BSL_3) for d<=4 with GW(R) scalars".into())
}

fn criterion_8() -> Outcome {
    let mut fails = Vec::new();
    for n in [3u32, 5, 7] {
        let c = icoh(n);
        let e = class_euler(&c).unwrap();
        let b = beta(&c, &c.chow().chern_bar(n - 1)).unwrap();
        if e.icoh() != &b {
            fails.push(format!("n={n}: e = {} but beta(cb{}) = {b}", e.icoh(), n - 1));
        }
    }
    for n in 2..=6 {
        let c = icoh(n);
        for k in 0..=(n - 1) / 2 {
            let i = 2 * k + 1;
            let p = class_pontryagin(&c, i).unwrap();
            let cb = |j| c.chow().chern_bar(j);
            let b = if k == 0 { F2Poly::zero(c.mod2()) } else { c.chow().sq2(&cb(2 * k).mul(&cb(i)).unwrap()).unwrap() };
            // Independent value: Sq^2(cb_{2k} cb_{2k+1}) = cb_{2k+1}^2 (zero for k = 0 since c_1 = 0).
            let expect = if k == 0 { F2Poly::zero(c.mod2()) } else { cb(i).pow(2).unwrap() };
            if rho(p.icoh()).unwrap() != b || b != expect {
                fails.push(format!("n={n}: rho(p{i}) = {} vs beta-level {b}", rho(p.icoh()).unwrap()));
            }
            if !p.icoh().add(p.icoh()).is_zero() {
                fails.push(format!("n={n}: 2 p{i} != 0"));
            }
        }
    }
    report("8", "Euler identities", fails, "e_n = beta(cb_{n-1}) (n=3,5,7); rho(p_odd) = Sq2(cb_2k cb_2k+1); 2 p_odd = 0 (n<=6)".into())
}

fn criterion_9() -> Outcome {
    let mut fails = Vec::new();
    for n in 2..=5 {
        let space = SymplecticSpace::Bsp(n);
        let ctx = symplectic_ctx(&space, R, 64).unwrap();
        let p = |i: u32| SymplPoly::var(&ctx, i as usize - 1);
        for i in 1..=n {
            for a in 1..n {
                for b in 1..(n - a) {
                    let (s1, x) = sympl_split_factor(&space, 0, a, &p(i)).unwrap();
                    let (s2, y) = sympl_split_factor(&space, 0, a + b, &p(i)).unwrap();
                    if sympl_split_factor(&s1, 1, b, &x).unwrap().1 != sympl_split_factor(&s2, 0, a, &y).unwrap().1 {
                        fails.push(format!("coassociativity n={n} p{i} ({a},{b})"));
                    }
                }
            }
            let img = sympl_split(n, &p(i)).unwrap();
            let expected: BTreeSet<Vec<u32>> =
                (0u32..1 << n).filter(|s| s.count_ones() == i).map(|s| (0..n).map(|k| s >> k & 1).collect()).collect();
            let got: BTreeSet<Vec<u32>> = img.terms().map(|(m, _)| m.exps().to_vec()).collect();
            if got != expected || img.terms().any(|(_, c)| *c != GWElement::one(R)) {
                fails.push(format!("split n={n} p{i} = {img}"));
            }
        }
        for m in (0..=4 * n).flat_map(|d| graded_basis(&ctx, d)) {
            let q = SymplPoly::monomial(&ctx, m, GWElement::from_int(R, 3).add(&GWElement::minus_one_form(R)));
            if sympl_conjugate(&sympl_conjugate(&q).unwrap()).unwrap() != q {
                fails.push(format!("conjugation n={n} on {q}"));
            }
        }
    }
    for n in [2u32, 4, 6] {
        let c = icoh(n);
        let sctx = symplectic_ctx(&SymplecticSpace::Bsp(n), R, 64).unwrap();
        let x = symplectify(&c, &SymplPoly::var(&sctx, n as usize - 1)).unwrap();
        let e = class_euler(&c).unwrap();
        let sign = if (n / 2) % 2 == 0 { 1 } else { -1 };
        let want_icoh = wittclasses::icoh::scalar_mul(&WittElement::from_int(R, sign), &icoh_mul(e.icoh(), e.icoh()).unwrap()).unwrap();
        let want_chern = c.chow().chern(n).pow(2).unwrap().scale(&if n % 2 == 0 { 1 } else { -1 });
        if x.icoh() != &want_icoh || x.chern() != &want_chern {
            fails.push(format!("symplectify(p{n}) = {x}"));
        }
    }
    report("9", "symplectic suite", fails, "coassociativity n<=5, elementary symmetric splitting, conjugation involution, p_n = (<-1>^(n/2) e^2, c_n^2)".into())
}

fn criterion_10() -> Outcome {
    let mut fails = Vec::new();
    for n in (1..=11).step_by(2) {
        let ring = RingSpec::projective(n).unwrap();
        for m in graded_basis(&ring.mod2, n - 1) {
            let x = F2Poly::monomial(&ring.mod2, m, F2(true));
            if !ring.sq2.apply(&x).unwrap().is_zero() {
                fails.push(format!("P^{n}: Sq2({x}) != 0"));
            }
        }
    }
    let ring = RingSpec::projective(3).unwrap();
    let b = BundleSpec::new(&ring, "1 + 4*h^3", 3).unwrap();
    if split_check(&ring, &b).unwrap().verdict != Verdict::Obstructed {
        fails.push("c_3 = 4h^3 not reported OBSTRUCTED".into());
    }
    let mut agreements = 0;
    for n in [3u32, 5, 7, 9, 11] {
        let ring = RingSpec::projective(n).unwrap();
        for total in ["(1+2*h)*(1+h)^2", "(1+h)^2*(1-h)^2", "(1+4*h)*(1+2*h)^3", "(1+h)^4*(1+3*h)^2", "(1-2*h)^3*(1+h)^2"] {
            let b = BundleSpec::new(&ring, total, n).unwrap();
            let r = split_check(&ring, &b).unwrap();
            let (s, c) = euler_pullback(&ring, &b).unwrap();
            agreements += 1;
            if s != r.obstruction || c != r.top_chern {
                fails.push(format!("P^{n} {total}: universal ({s}, {c}) vs checker ({}, {})", r.obstruction, r.top_chern));
            }
        }
    }
    report("10", "splitting checker", fails, format!("Sq2 vanishes in degree n-1 on P^n (n odd <= 11); obstruction detected; {agreements} universal agreements"))
}

fn criterion_11() -> Outcome {
    let mut fails = Vec::new();
    let opts = VerifyOptions::default();
    let a = run_suite("all", &opts).unwrap().to_string();
    let b = run_suite("all", &opts).unwrap().to_string();
    if a != b {
        fails.push("verify all reports differ".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for k in 0..1000 {
        let n = rng.gen_range(2..=6);
        let chow = ChowContext::bsl(n).unwrap();
        let ok = match k % 4 {
            0 => round_trip::<i64>(chow.integral(), &mut rng, |r| r.gen_range(-9..=9)),
            1 => round_trip::<F2>(chow.mod2(), &mut rng, |r| F2(r.gen_bool(0.5))),
            2 => {
                let ctx = symplectic_ctx(&SymplecticSpace::Bsp(n), FieldTag::Fq1, 64).unwrap().with_ring(CoeffRing::Witt(FieldTag::Fq1));
                round_trip::<WittElement>(&ctx, &mut rng, |r| WittElement::from_coords(FieldTag::Fq1, [r.gen_range(0..2), r.gen_range(0..2)]))
            }
            _ => {
                let ctx = symplectic_ctx(&SymplecticSpace::Bsp(n), R, 64).unwrap();
                round_trip::<GWElement>(&ctx, &mut rng, |r| {
                    GWElement::from_int(R, r.gen_range(-3..=3)).add(&GWElement::minus_one_form(R).mul(&GWElement::from_int(R, r.gen_range(-3..=3))))
                })
            }
        };
        if let Err(e) = ok {
            fails.push(e);
        }
    }
    report("11", "determinism", fails, "verify all byte-identical across runs; 1000 random canonical expressions round-trip".into())
}

fn round_trip<C: wittclasses::expr::ScalarLiteral>(
    ctx: &wittclasses::polyring::Ctx,
    rng: &mut ChaCha8Rng,
    coeff: impl Fn(&mut ChaCha8Rng) -> C,
) -> Result<(), String> {
    let mut p = GradedPolynomial::<C>::zero(ctx);
    for _ in 0..rng.gen_range(0..6) {
        let d = rng.gen_range(0..=10);
        let basis = graded_basis(ctx, d);
        if basis.is_empty() {
            continue;
        }
        let m = basis[rng.gen_range(0..basis.len())].clone();
        p = p.add(&GradedPolynomial::monomial(ctx, m, coeff(rng)));
    }
    let text = p.to_string();
    let e = parse_expr(&text).map_err(|e| format!("'{text}': {e}"))?;
    let t = PolyTarget::new(ctx);
    let back: GradedPolynomial<C> = evaluate(&t.typed::<C>(), &e).map_err(|e| format!("'{text}': {e}"))?;
    if back != p || back.to_string() != text {
        return Err(format!("'{text}' came back as '{back}'"));
    }
    Ok(())
}

fn main() {
    let (six, six_amended) = criterion_6();
    let outcomes = vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        six,
        six_amended,
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
        criterion_11(),
    ];
    for o in &outcomes {
        println!("{} criterion {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.id, o.detail);
    }
    // The literal monomial-span statement of criterion 6 misses classes such
    // as Sq2(cb2 cb4) = cb3 cb4 + cb2 cb5 for n >= 5; only those cases may fail.
    let literal = outcomes.iter().find(|o| o.id == "6").unwrap();
    if !literal.passed {
        for n in 2..=6 {
            for d in 0..=12 {
                if literal_span_dim(n, d) != mini::kernel_dim(n, d) {
                    assert!(n >= 5, "literal criterion 6 fails unexpectedly at n={n}, d={d}");
                }
            }
        }
    }
    let failed: Vec<&str> = outcomes.iter().filter(|o| !o.passed && o.id != "6").map(|o| o.id).collect();
    if !failed.is_empty() {
        eprintln!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
}

