//! Expression language for classes: parsing, printing and evaluation into
//! polynomial rings, I-cohomology and Chow-Witt rings.

use std::fmt;
use std::sync::Arc;

use crate::chowwitt::{class_beta_lift, class_euler, class_pontryagin, ChowWittElement};
use crate::coeff::{gw_make, CoeffRing, Coefficient, FieldTag, GWElement, WittElement, F2};
use crate::error::{AlgebraError, Result};
use crate::icoh::{beta_j, euler_class_icoh, icoh_mul, pontryagin_icoh, ICohContext, ICohElement};
use crate::polyring::{Ctx, GradedPolynomial};

/// Argument of a form literal `<a>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FormArg {
    Int(i64),
    Unit(String),
}

/// Witt component of a pair literal `(rank, witt)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WittLit {
    Int(i64),
    S,
    OnePlusS,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(i64),
    Ident(String),
    Beta(Vec<u32>),
    Form(FormArg),
    Pair(i64, WittLit),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl fmt::Display for WittLit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WittLit::Int(n) => write!(f, "{n}"),
            WittLit::S => f.write_str("s"),
            WittLit::OnePlusS => f.write_str("1+s"),
        }
    }
}

impl Expr {
    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) => 3,
            Expr::Neg(_) => 4,
            Expr::Int(n) if *n < 0 => 4,
            Expr::Pow(..) => 5,
            _ => 6,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.prec() < min {
            f.write_str("(")?;
            self.write_at(f, 0)?;
            return f.write_str(")");
        }
        match self {
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Ident(s) => f.write_str(s),
            Expr::Beta(j) => {
                let parts: Vec<String> = j.iter().map(|x| x.to_string()).collect();
                write!(f, "b{{{}}}", parts.join(","))
            }
            Expr::Form(FormArg::Int(a)) => write!(f, "<{a}>"),
            Expr::Form(FormArg::Unit(u)) => write!(f, "<{u}>"),
            Expr::Pair(r, w) => write!(f, "({r},{w})"),
            Expr::Neg(a) => {
                f.write_str("-")?;
                a.write_at(f, 5)
            }
            Expr::Add(a, b) => {
                a.write_at(f, 1)?;
                f.write_str(" + ")?;
                b.write_at(f, 2)
            }
            Expr::Sub(a, b) => {
                a.write_at(f, 1)?;
                f.write_str(" - ")?;
                b.write_at(f, 2)
            }
            Expr::Mul(a, b) => {
                a.write_at(f, 3)?;
                f.write_str("*")?;
                b.write_at(f, 4)
            }
            Expr::Pow(a, k) => {
                a.write_at(f, 6)?;
                write!(f, "^{k}")
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(i64),
    Ident(String),
    Sym(char),
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let v = text[start..i]
                .parse::<i64>()
                .map_err(|_| AlgebraError::Parse { offset: start, message: "integer literal too large".into() })?;
            out.push((Tok::Int(v), start));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(text[start..i].to_string()), start));
        } else if "+-*^(){},<>".contains(c) {
            out.push((Tok::Sym(c), i));
            i += 1;
        } else {
            return Err(AlgebraError::Parse { offset: i, message: format!("unexpected character '{}'", &text[i..].chars().next().unwrap()) });
        }
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(AlgebraError::Parse { offset: self.offset(), message: message.into() })
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn int(&mut self) -> Result<i64> {
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                Ok(v)
            }
            _ => self.err("expected an integer"),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Sym('-') => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Sym('*') {
            self.bump();
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Sym('-') {
            self.bump();
            return Ok(match self.unary()? {
                Expr::Int(n) => Expr::Int(-n),
                e => Expr::Neg(Box::new(e)),
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if *self.peek() == Tok::Sym('^') {
            self.bump();
            let k = self.exponent()?;
            return Ok(Expr::Pow(Box::new(base), k));
        }
        Ok(base)
    }

    // Right-associative: a^2^3 = a^8.
    fn exponent(&mut self) -> Result<u32> {
        let at = self.offset();
        let k = self.int()?;
        let k = u32::try_from(k).map_err(|_| AlgebraError::Parse { offset: at, message: "exponent too large".into() })?;
        if *self.peek() == Tok::Sym('^') {
            self.bump();
            let e = self.exponent()?;
            return k.checked_pow(e).ok_or(AlgebraError::Parse { offset: at, message: "exponent too large".into() });
        }
        Ok(k)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().clone() {
            Tok::Int(v) => {
                self.bump();
                Ok(Expr::Int(v))
            }
            Tok::Ident(name) => {
                self.bump();
                if name == "b" && *self.peek() == Tok::Sym('{') {
                    self.bump();
                    let mut j = Vec::new();
                    loop {
                        let at = self.offset();
                        let v = self.int()?;
                        j.push(u32::try_from(v).map_err(|_| AlgebraError::Parse { offset: at, message: "index out of range".into() })?);
                        match self.bump() {
                            Tok::Sym(',') => continue,
                            Tok::Sym('}') => break,
                            _ => {
                                self.pos -= 1;
                                return self.err("expected ',' or '}'");
                            }
                        }
                    }
                    return Ok(Expr::Beta(j));
                }
                Ok(Expr::Ident(name))
            }
            Tok::Sym('<') => {
                self.bump();
                let arg = match self.peek().clone() {
                    Tok::Sym('-') => {
                        self.bump();
                        FormArg::Int(-self.int()?)
                    }
                    Tok::Int(v) => {
                        self.bump();
                        FormArg::Int(v)
                    }
                    Tok::Ident(u) => {
                        self.bump();
                        FormArg::Unit(u)
                    }
                    _ => return self.err("expected a unit in form literal"),
                };
                self.expect('>')?;
                Ok(Expr::Form(arg))
            }
            Tok::Sym('(') => {
                let is_pair = matches!(
                    (self.peek_at(1), self.peek_at(2), self.peek_at(3)),
                    (Tok::Int(_), Tok::Sym(','), _) | (Tok::Sym('-'), Tok::Int(_), Tok::Sym(','))
                );
                self.bump();
                if is_pair {
                    let neg = *self.peek() == Tok::Sym('-');
                    if neg {
                        self.bump();
                    }
                    let r = self.int()?;
                    self.expect(',')?;
                    let w = self.witt_lit()?;
                    self.expect(')')?;
                    return Ok(Expr::Pair(if neg { -r } else { r }, w));
                }
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::End => self.err("unexpected end of input"),
            Tok::Sym(c) => self.err(format!("unexpected '{c}'")),
        }
    }

    fn witt_lit(&mut self) -> Result<WittLit> {
        match self.peek().clone() {
            Tok::Ident(s) if s == "s" => {
                self.bump();
                Ok(WittLit::S)
            }
            Tok::Sym('-') => {
                self.bump();
                Ok(WittLit::Int(-self.int()?))
            }
            Tok::Int(v) => {
                self.bump();
                if v == 1 && *self.peek() == Tok::Sym('+') && *self.peek_at(1) == Tok::Ident("s".into()) {
                    self.bump();
                    self.bump();
                    return Ok(WittLit::OnePlusS);
                }
                Ok(WittLit::Int(v))
            }
            _ => self.err("expected a Witt class"),
        }
    }
}

/// Parses an expression; errors carry the byte offset of the failure.
pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

/// A ring that expressions evaluate into.
pub trait EvalTarget {
    type Value: Clone;
    fn int(&self, n: i64) -> Result<Self::Value>;
    fn ident(&self, name: &str) -> Result<Self::Value>;
    fn beta(&self, j: &[u32]) -> Result<Self::Value>;
    fn form(&self, arg: &FormArg) -> Result<Self::Value>;
    fn pair(&self, rank: i64, witt: WittLit) -> Result<Self::Value>;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn neg(&self, a: &Self::Value) -> Result<Self::Value>;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;

    fn pow(&self, a: &Self::Value, k: u32) -> Result<Self::Value> {
        let mut acc = self.int(1)?;
        for _ in 0..k {
            acc = self.mul(&acc, a)?;
        }
        Ok(acc)
    }
}

pub fn evaluate<T: EvalTarget>(target: &T, e: &Expr) -> Result<T::Value> {
    match e {
        Expr::Int(n) => target.int(*n),
        Expr::Ident(s) => target.ident(s),
        Expr::Beta(j) => target.beta(j),
        Expr::Form(a) => target.form(a),
        Expr::Pair(r, w) => target.pair(*r, *w),
        Expr::Neg(a) => target.neg(&evaluate(target, a)?),
        Expr::Add(a, b) => target.add(&evaluate(target, a)?, &evaluate(target, b)?),
        Expr::Sub(a, b) => {
            let nb = target.neg(&evaluate(target, b)?)?;
            target.add(&evaluate(target, a)?, &nb)
        }
        Expr::Mul(a, b) => target.mul(&evaluate(target, a)?, &evaluate(target, b)?),
        Expr::Pow(a, k) => target.pow(&evaluate(target, a)?, *k),
    }
}

fn unknown(name: &str) -> AlgebraError {
    AlgebraError::InvalidArgument(format!("unknown identifier '{name}'"))
}

fn witt_field(ring: CoeffRing) -> Option<FieldTag> {
    match ring {
        CoeffRing::Witt(t) | CoeffRing::GrothendieckWitt(t) => Some(t),
        _ => None,
    }
}

fn witt_form(field: FieldTag, arg: &FormArg) -> Result<WittElement> {
    match arg {
        FormArg::Int(1) => Ok(WittElement::one(field)),
        FormArg::Int(-1) => Ok(WittElement::minus_one_form(field)),
        FormArg::Unit(u) if u == "u" => WittElement::nonsquare_form(field),
        FormArg::Int(a) => Err(AlgebraError::InvalidArgument(format!("unsupported form <{a}> (use <1>, <-1> or <u>)"))),
        FormArg::Unit(u) => Err(AlgebraError::InvalidArgument(format!("unknown unit '{u}' (use <u> for a non-square)"))),
    }
}

fn witt_lit(field: FieldTag, w: WittLit) -> Result<WittElement> {
    match (w, field) {
        (WittLit::Int(n), _) => Ok(WittElement::from_int(field, n)),
        (WittLit::S, FieldTag::Fq1) => Ok(WittElement::from_coords(field, [0, 1])),
        (WittLit::OnePlusS, FieldTag::Fq1) => Ok(WittElement::from_coords(field, [1, 1])),
        _ => Err(AlgebraError::InvalidArgument(format!("'s' only exists in W(Fq1), not W({field})"))),
    }
}

/// Coefficient types that can interpret scalar literals.
pub trait ScalarLiteral: Coefficient {
    fn form(ring: CoeffRing, arg: &FormArg) -> Result<Self>;
    fn pair(ring: CoeffRing, rank: i64, witt: WittLit) -> Result<Self>;
    fn named(ring: CoeffRing, name: &str) -> Option<Self>;
}

fn no_forms(ring: CoeffRing) -> AlgebraError {
    AlgebraError::InvalidArgument(format!("form literals need W or GW coefficients, not {ring}"))
}

impl ScalarLiteral for i64 {
    fn form(ring: CoeffRing, _: &FormArg) -> Result<Self> {
        Err(no_forms(ring))
    }
    fn pair(ring: CoeffRing, _: i64, _: WittLit) -> Result<Self> {
        Err(no_forms(ring))
    }
    fn named(_: CoeffRing, _: &str) -> Option<Self> {
        None
    }
}

impl ScalarLiteral for F2 {
    fn form(ring: CoeffRing, _: &FormArg) -> Result<Self> {
        Err(no_forms(ring))
    }
    fn pair(ring: CoeffRing, _: i64, _: WittLit) -> Result<Self> {
        Err(no_forms(ring))
    }
    fn named(_: CoeffRing, _: &str) -> Option<Self> {
        None
    }
}

impl ScalarLiteral for WittElement {
    fn form(ring: CoeffRing, arg: &FormArg) -> Result<Self> {
        witt_form(witt_field(ring).ok_or_else(|| no_forms(ring))?, arg)
    }
    fn pair(ring: CoeffRing, _: i64, _: WittLit) -> Result<Self> {
        Err(AlgebraError::InvalidArgument(format!("pair literals need GW coefficients, not {ring}")))
    }
    fn named(ring: CoeffRing, name: &str) -> Option<Self> {
        match (name, witt_field(ring)) {
            ("s", Some(FieldTag::Fq1)) => Some(WittElement::from_coords(FieldTag::Fq1, [0, 1])),
            _ => None,
        }
    }
}

impl ScalarLiteral for GWElement {
    fn form(ring: CoeffRing, arg: &FormArg) -> Result<Self> {
        gw_make(1, witt_form(witt_field(ring).ok_or_else(|| no_forms(ring))?, arg)?)
    }
    fn pair(ring: CoeffRing, rank: i64, witt: WittLit) -> Result<Self> {
        gw_make(rank, witt_lit(witt_field(ring).ok_or_else(|| no_forms(ring))?, witt)?)
    }
    fn named(_: CoeffRing, _: &str) -> Option<Self> {
        None
    }
}

/// Evaluation into a polynomial ring. In a mod-2 ring `c<i>` also names
/// `cb<i>`.
pub struct PolyTarget {
    pub ctx: Ctx,
}

impl PolyTarget {
    pub fn new(ctx: &Ctx) -> Self {
        PolyTarget { ctx: ctx.clone() }
    }
}

impl PolyTarget {
    fn lookup<C: ScalarLiteral>(&self, name: &str) -> Result<GradedPolynomial<C>> {
        if let Ok(v) = GradedPolynomial::var_named(&self.ctx, name) {
            return Ok(v);
        }
        if self.ctx.ring() == CoeffRing::Mod2 {
            if let Some(rest) = name.strip_prefix('c') {
                if let Ok(v) = GradedPolynomial::var_named(&self.ctx, &format!("cb{rest}")) {
                    return Ok(v);
                }
            }
        }
        match C::named(self.ctx.ring(), name) {
            Some(c) => Ok(GradedPolynomial::constant(&self.ctx, c)),
            None => Err(unknown(name)),
        }
    }
}

/// Typed polynomial evaluation with coefficient type `C`.
pub struct TypedPoly<'a, C> {
    target: &'a PolyTarget,
    _c: std::marker::PhantomData<C>,
}

impl PolyTarget {
    pub fn typed<C: ScalarLiteral>(&self) -> TypedPoly<'_, C> {
        TypedPoly { target: self, _c: std::marker::PhantomData }
    }
}

impl<C: ScalarLiteral> EvalTarget for TypedPoly<'_, C> {
    type Value = GradedPolynomial<C>;

    fn int(&self, n: i64) -> Result<Self::Value> {
        Ok(GradedPolynomial::from_int(&self.target.ctx, n))
    }
    fn ident(&self, name: &str) -> Result<Self::Value> {
        self.target.lookup(name)
    }
    fn beta(&self, _: &[u32]) -> Result<Self::Value> {
        Err(AlgebraError::InvalidArgument("b{...} needs the icoh or cw theory".into()))
    }
    fn form(&self, arg: &FormArg) -> Result<Self::Value> {
        Ok(GradedPolynomial::constant(&self.target.ctx, C::form(self.target.ctx.ring(), arg)?))
    }
    fn pair(&self, rank: i64, witt: WittLit) -> Result<Self::Value> {
        Ok(GradedPolynomial::constant(&self.target.ctx, C::pair(self.target.ctx.ring(), rank, witt)?))
    }
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value> {
        a.try_add(b)
    }
    fn neg(&self, a: &Self::Value) -> Result<Self::Value> {
        Ok(a.neg())
    }
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value> {
        a.mul(b)
    }
    fn pow(&self, a: &Self::Value, k: u32) -> Result<Self::Value> {
        a.pow(k)
    }
}

fn index_after(name: &str, prefix: &str) -> Option<u32> {
    name.strip_prefix(prefix)
        .filter(|r| !r.is_empty() && r.bytes().all(|b| b.is_ascii_digit()))
        .and_then(|r| r.parse().ok())
}

/// Evaluation into `H(BSL_n, I)`: `p<i>`, `e<n>`, `b{J}` and W-scalars.
pub struct ICohTarget {
    pub ctx: Arc<ICohContext>,
}

impl EvalTarget for ICohTarget {
    type Value = ICohElement;

    fn int(&self, n: i64) -> Result<ICohElement> {
        Ok(ICohElement::from_witt(&self.ctx, WittElement::from_int(self.ctx.field(), n)))
    }
    fn ident(&self, name: &str) -> Result<ICohElement> {
        let n = self.ctx.n();
        if let Some(i) = index_after(name, "p") {
            return pontryagin_icoh(&self.ctx, i);
        }
        if index_after(name, "e") == Some(n) {
            return euler_class_icoh(&self.ctx);
        }
        match WittElement::named(CoeffRing::Witt(self.ctx.field()), name) {
            Some(w) => Ok(ICohElement::from_witt(&self.ctx, w)),
            None => Err(unknown(name)),
        }
    }
    fn beta(&self, j: &[u32]) -> Result<ICohElement> {
        beta_j(&self.ctx, j)
    }
    fn form(&self, arg: &FormArg) -> Result<ICohElement> {
        Ok(ICohElement::from_witt(&self.ctx, witt_form(self.ctx.field(), arg)?))
    }
    fn pair(&self, _: i64, _: WittLit) -> Result<ICohElement> {
        Err(AlgebraError::InvalidArgument("pair literals need the cw theory".into()))
    }
    fn add(&self, a: &ICohElement, b: &ICohElement) -> Result<ICohElement> {
        a.try_add(b)
    }
    fn neg(&self, a: &ICohElement) -> Result<ICohElement> {
        Ok(a.neg())
    }
    fn mul(&self, a: &ICohElement, b: &ICohElement) -> Result<ICohElement> {
        icoh_mul(a, b)
    }
    fn pow(&self, a: &ICohElement, k: u32) -> Result<ICohElement> {
        a.pow(k)
    }
}

/// Evaluation into `CH~(BSL_n)`: `p<i>`, `e<n>`, `b{J}` (canonical lift)
/// and GW-scalars.
pub struct CwTarget {
    pub ctx: Arc<ICohContext>,
}

impl CwTarget {
    fn scalar(&self, g: GWElement) -> ChowWittElement {
        ChowWittElement::from_gw(&self.ctx, g)
    }
}

impl EvalTarget for CwTarget {
    type Value = ChowWittElement;

    fn int(&self, n: i64) -> Result<ChowWittElement> {
        Ok(self.scalar(GWElement::from_int(self.ctx.field(), n)))
    }
    fn ident(&self, name: &str) -> Result<ChowWittElement> {
        if let Some(i) = index_after(name, "p") {
            return class_pontryagin(&self.ctx, i);
        }
        if index_after(name, "e") == Some(self.ctx.n()) {
            return class_euler(&self.ctx);
        }
        Err(unknown(name))
    }
    fn beta(&self, j: &[u32]) -> Result<ChowWittElement> {
        class_beta_lift(&self.ctx, j)
    }
    fn form(&self, arg: &FormArg) -> Result<ChowWittElement> {
        Ok(self.scalar(gw_make(1, witt_form(self.ctx.field(), arg)?)?))
    }
    fn pair(&self, rank: i64, witt: WittLit) -> Result<ChowWittElement> {
        Ok(self.scalar(gw_make(rank, witt_lit(self.ctx.field(), witt)?)?))
    }
    fn add(&self, a: &ChowWittElement, b: &ChowWittElement) -> Result<ChowWittElement> {
        a.try_add(b)
    }
    fn neg(&self, a: &ChowWittElement) -> Result<ChowWittElement> {
        Ok(a.neg())
    }
    fn mul(&self, a: &ChowWittElement, b: &ChowWittElement) -> Result<ChowWittElement> {
        a.mul(b)
    }
}
