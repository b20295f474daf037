//! Coefficient rings: Z, Z/2, and the Witt and Grothendieck-Witt rings of the
//! four built-in base fields.
//!
//! A Witt ring is described by a finite presentation of its additive group
//! (cyclic summands), a multiplication table on the additive generators, the
//! classes `<1>` and `<-1>`, and the rank-mod-2 map. Each descriptor is checked
//! against the ring axioms the first time it is used.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{AlgebraError, Result};

/// Maximum number of additive generators of a built-in Witt ring.
const MAX_GENS: usize = 2;

/// Built-in base fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldTag {
    /// The real numbers: `W(R) = Z`.
    R,
    /// The complex numbers: `W(C) = Z/2`.
    C,
    /// A finite field with `q = 1 mod 4`: `W = Z/2[s]/(s^2)`.
    Fq1,
    /// A finite field with `q = 3 mod 4`: `W = Z/4`.
    Fq3,
}

impl FieldTag {
    pub const ALL: [FieldTag; 4] = [FieldTag::R, FieldTag::C, FieldTag::Fq1, FieldTag::Fq3];

    pub fn descriptor(self) -> &'static WittRingDescriptor {
        static CELLS: [OnceLock<WittRingDescriptor>; 4] =
            [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
        let idx = self as usize;
        CELLS[idx].get_or_init(|| {
            let d = WittRingDescriptor::builtin(self);
            if let Err(msg) = d.check_axioms() {
                panic!("built-in Witt ring descriptor for {self} is inconsistent: {msg}");
            }
            d
        })
    }
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FieldTag::R => "R",
            FieldTag::C => "C",
            FieldTag::Fq1 => "Fq1",
            FieldTag::Fq3 => "Fq3",
        };
        f.write_str(s)
    }
}

impl FromStr for FieldTag {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "R" => Ok(FieldTag::R),
            "C" => Ok(FieldTag::C),
            "Fq1" => Ok(FieldTag::Fq1),
            "Fq3" => Ok(FieldTag::Fq3),
            other => Err(AlgebraError::InvalidArgument(format!(
                "unknown field tag '{other}' (expected R, C, Fq1 or Fq3)"
            ))),
        }
    }
}

/// Finite presentation of a Witt ring `W(F)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WittRingDescriptor {
    pub field: FieldTag,
    /// Orders of the cyclic summands of the additive group; `0` means infinite.
    pub orders: Vec<u64>,
    /// `table[i][j]` is the product of additive generators `i` and `j`.
    pub table: Vec<Vec<Vec<i64>>>,
    pub unit: Vec<i64>,
    pub minus_one: Vec<i64>,
    /// Value of rank mod 2 on each additive generator.
    pub rank_mod2: Vec<u8>,
    /// Generators of the fundamental ideal `I(F)`.
    pub fundamental_ideal: Vec<Vec<i64>>,
}

impl WittRingDescriptor {
    fn builtin(field: FieldTag) -> Self {
        match field {
            FieldTag::R => WittRingDescriptor {
                field,
                orders: vec![0],
                table: vec![vec![vec![1]]],
                unit: vec![1],
                minus_one: vec![-1],
                rank_mod2: vec![1],
                fundamental_ideal: vec![vec![2]],
            },
            FieldTag::C => WittRingDescriptor {
                field,
                orders: vec![2],
                table: vec![vec![vec![1]]],
                unit: vec![1],
                minus_one: vec![1],
                rank_mod2: vec![1],
                fundamental_ideal: vec![],
            },
            // Additive basis {1, s} with s = 1 + <u>, u a non-square.
            FieldTag::Fq1 => WittRingDescriptor {
                field,
                orders: vec![2, 2],
                table: vec![
                    vec![vec![1, 0], vec![0, 1]],
                    vec![vec![0, 1], vec![0, 0]],
                ],
                unit: vec![1, 0],
                minus_one: vec![1, 0],
                rank_mod2: vec![1, 0],
                fundamental_ideal: vec![vec![0, 1]],
            },
            FieldTag::Fq3 => WittRingDescriptor {
                field,
                orders: vec![4],
                table: vec![vec![vec![1]]],
                unit: vec![1],
                minus_one: vec![3],
                rank_mod2: vec![1],
                fundamental_ideal: vec![vec![2]],
            },
        }
    }

    pub fn num_gens(&self) -> usize {
        self.orders.len()
    }

    pub fn is_finite(&self) -> bool {
        self.orders.iter().all(|&o| o > 0)
    }

    fn element(&self, coords: &[i64]) -> WittElement {
        WittElement { field: self.field, coords: self.reduce(pad(coords)) }
    }

    fn reduce(&self, coords: [i64; MAX_GENS]) -> [i64; MAX_GENS] {
        let mut c = [0i64; MAX_GENS];
        for (i, &order) in self.orders.iter().enumerate() {
            c[i] = if order == 0 { coords[i] } else { coords[i].rem_euclid(order as i64) };
        }
        c
    }

    fn add_coords(&self, a: [i64; MAX_GENS], b: [i64; MAX_GENS]) -> [i64; MAX_GENS] {
        self.reduce([a[0] + b[0], a[1] + b[1]])
    }

    fn mul_coords(&self, a: [i64; MAX_GENS], b: [i64; MAX_GENS]) -> [i64; MAX_GENS] {
        let n = self.num_gens();
        let mut acc = [0i64; MAX_GENS];
        for i in 0..n {
            if a[i] == 0 {
                continue;
            }
            for j in 0..n {
                if b[j] == 0 {
                    continue;
                }
                let k = a[i] * b[j];
                for (slot, &t) in acc.iter_mut().zip(&self.table[i][j]) {
                    *slot += k * t;
                }
            }
        }
        self.reduce(acc)
    }

    fn rank_coords(&self, a: [i64; MAX_GENS]) -> u8 {
        let s: i64 = a.iter().zip(&self.rank_mod2).map(|(c, r)| c * *r as i64).sum();
        s.rem_euclid(2) as u8
    }

    /// Coordinates used by the axiom checker: every element of a finite ring,
    /// a window around zero for `W(R) = Z`.
    fn sample_coords(&self) -> Vec<[i64; MAX_GENS]> {
        if self.is_finite() {
            let mut out = vec![[0i64; MAX_GENS]];
            for (i, &order) in self.orders.iter().enumerate() {
                let mut next = Vec::new();
                for base in &out {
                    for k in 0..order as i64 {
                        let mut c = *base;
                        c[i] = k;
                        next.push(c);
                    }
                }
                out = next;
            }
            out
        } else {
            (-6..=6).map(|k| self.reduce(pad(&[k]))).collect()
        }
    }

    pub fn sample_elements(&self) -> Vec<WittElement> {
        self.sample_coords()
            .into_iter()
            .map(|coords| WittElement { field: self.field, coords })
            .collect()
    }

    /// Checks the ring axioms, the `<-1>` relation, and that `rank_mod2` is a
    /// ring map onto Z/2 whose kernel is the ideal spanned by
    /// `fundamental_ideal`. Arithmetic uses this descriptor's own tables.
    pub fn check_axioms(&self) -> std::result::Result<(), String> {
        let n = self.num_gens();
        if n == 0 || n > MAX_GENS {
            return Err(format!("unsupported number of generators {n}"));
        }
        if self.table.len() != n || self.table.iter().any(|row| row.len() != n) {
            return Err("multiplication table has the wrong shape".into());
        }
        let elems = self.sample_coords();
        let one = self.reduce(pad(&self.unit));
        let minus_one = self.reduce(pad(&self.minus_one));
        let (add, mul) = (|a, b| self.add_coords(a, b), |a, b| self.mul_coords(a, b));
        let rank = |a| self.rank_coords(a);

        for &a in &elems {
            if mul(a, one) != a {
                return Err(format!("<1> is not a unit on {a:?}"));
            }
            for &b in &elems {
                if mul(a, b) != mul(b, a) {
                    return Err(format!("multiplication not commutative on {a:?}, {b:?}"));
                }
                if rank(add(a, b)) != (rank(a) + rank(b)) % 2 {
                    return Err(format!("rank_mod2 not additive on {a:?}, {b:?}"));
                }
                if rank(mul(a, b)) != rank(a) * rank(b) {
                    return Err(format!("rank_mod2 not multiplicative on {a:?}, {b:?}"));
                }
                for &c in &elems {
                    if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                        return Err(format!("multiplication not associative on {a:?}, {b:?}, {c:?}"));
                    }
                    if mul(a, add(b, c)) != add(mul(a, b), mul(a, c)) {
                        return Err(format!("distributivity fails on {a:?}, {b:?}, {c:?}"));
                    }
                }
            }
        }
        if mul(minus_one, minus_one) != one {
            return Err("<-1>^2 != <1>".into());
        }
        if rank(one) != 1 {
            return Err("rank_mod2(<1>) != 1".into());
        }

        let gens: Vec<[i64; MAX_GENS]> =
            self.fundamental_ideal.iter().map(|g| self.reduce(pad(g))).collect();
        if gens.iter().any(|&g| rank(g) != 0) {
            return Err("a fundamental ideal generator has odd rank".into());
        }
        // Every even-rank sample must be a combination of ideal generators.
        let mut span = vec![[0i64; MAX_GENS]];
        for &g in &gens {
            let mut next = span.clone();
            for &s in &span {
                for &r in &elems {
                    let cand = add(s, mul(r, g));
                    if !next.contains(&cand) {
                        next.push(cand);
                    }
                }
            }
            span = next;
        }
        for &a in &elems {
            if rank(a) == 0 && !span.contains(&a) {
                return Err(format!("{a:?} has even rank but is not in the fundamental ideal"));
            }
        }
        Ok(())
    }
}

fn pad(coords: &[i64]) -> [i64; MAX_GENS] {
    let mut c = [0i64; MAX_GENS];
    c[..coords.len()].copy_from_slice(coords);
    c
}

/// An element of `W(F)` in coordinates over the descriptor's additive
/// generators, reduced modulo the summand orders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WittElement {
    field: FieldTag,
    coords: [i64; MAX_GENS],
}

impl WittElement {
    pub fn from_coords(field: FieldTag, coords: [i64; MAX_GENS]) -> Self {
        WittElement { field, coords: field.raw().reduce(coords) }
    }

    pub fn zero(field: FieldTag) -> Self {
        WittElement { field, coords: [0; MAX_GENS] }
    }

    pub fn one(field: FieldTag) -> Self {
        let d = field.raw();
        d.element(&d.unit)
    }

    /// The class `<-1>`.
    pub fn minus_one_form(field: FieldTag) -> Self {
        let d = field.raw();
        d.element(&d.minus_one)
    }

    /// `<u>` for a non-square unit `u`. `C` has none.
    pub fn nonsquare_form(field: FieldTag) -> Result<Self> {
        match field {
            FieldTag::C => Err(AlgebraError::InvalidArgument("every unit of C is a square".into())),
            FieldTag::Fq1 => Ok(Self::from_coords(field, [1, 1])),
            _ => Ok(Self::minus_one_form(field)),
        }
    }

    pub fn from_int(field: FieldTag, n: i64) -> Self {
        let one = Self::one(field);
        let c = [one.coords[0] * n, one.coords[1] * n];
        Self::from_coords(field, c)
    }

    pub fn field(&self) -> FieldTag {
        self.field
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords[..self.field.raw().num_gens()]
    }

    pub fn is_zero(&self) -> bool {
        self.coords == [0; MAX_GENS]
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.field, rhs.field, "Witt ring mismatch");
        Self::from_coords(
            self.field,
            [self.coords[0] + rhs.coords[0], self.coords[1] + rhs.coords[1]],
        )
    }

    pub fn neg(&self) -> Self {
        Self::from_coords(self.field, [-self.coords[0], -self.coords[1]])
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    /// Product through the descriptor's multiplication table.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.field, rhs.field, "Witt ring mismatch");
        WittElement { field: self.field, coords: self.field.raw().mul_coords(self.coords, rhs.coords) }
    }

    pub fn rank_mod2(&self) -> u8 {
        self.field.raw().rank_coords(self.coords)
    }
}

impl FieldTag {
    // Raw table used by element arithmetic. The axiom checker itself does
    // element arithmetic, so it cannot sit behind the validated accessor.
    fn raw(self) -> &'static WittRingDescriptor {
        static RAW: [OnceLock<WittRingDescriptor>; 4] =
            [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
        RAW[self as usize].get_or_init(|| WittRingDescriptor::builtin(self))
    }
}

impl fmt::Display for WittElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.field {
            FieldTag::Fq1 => match (self.coords[0], self.coords[1]) {
                (0, 0) => f.write_str("0"),
                (1, 0) => f.write_str("1"),
                (0, 1) => f.write_str("s"),
                _ => f.write_str("1+s"),
            },
            _ => write!(f, "{}", self.coords[0]),
        }
    }
}

/// `witt_mul` with an explicit descriptor check.
pub fn witt_mul(a: &WittElement, b: &WittElement) -> Result<WittElement> {
    if a.field != b.field {
        return Err(AlgebraError::DescriptorMismatch(a.field, b.field));
    }
    Ok(a.mul(b))
}

pub fn in_fundamental_ideal(w: &WittElement) -> bool {
    w.rank_mod2() == 0
}

/// An element of `GW(F) = Z x_{Z/2} W(F)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GWElement {
    rank: i64,
    witt: WittElement,
}

impl GWElement {
    pub fn field(&self) -> FieldTag {
        self.witt.field
    }

    pub fn rank(&self) -> i64 {
        self.rank
    }

    pub fn witt(&self) -> WittElement {
        self.witt
    }

    pub fn zero(field: FieldTag) -> Self {
        GWElement { rank: 0, witt: WittElement::zero(field) }
    }

    pub fn one(field: FieldTag) -> Self {
        GWElement { rank: 1, witt: WittElement::one(field) }
    }

    pub fn from_int(field: FieldTag, n: i64) -> Self {
        GWElement { rank: n, witt: WittElement::from_int(field, n) }
    }

    /// The class `<-1>`.
    pub fn minus_one_form(field: FieldTag) -> Self {
        GWElement { rank: 1, witt: WittElement::minus_one_form(field) }
    }

    /// `<u>` for a non-square unit `u`.
    pub fn nonsquare_form(field: FieldTag) -> Result<Self> {
        Ok(GWElement { rank: 1, witt: WittElement::nonsquare_form(field)? })
    }

    /// `epsilon = -<-1>`.
    pub fn epsilon(field: FieldTag) -> Self {
        Self::minus_one_form(field).neg()
    }

    /// `<1> + <-1>`.
    pub fn hyperbolic(field: FieldTag) -> Self {
        Self::one(field).add(&Self::minus_one_form(field))
    }

    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.witt.is_zero()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        GWElement { rank: self.rank + rhs.rank, witt: self.witt.add(&rhs.witt) }
    }

    pub fn neg(&self) -> Self {
        GWElement { rank: -self.rank, witt: self.witt.neg() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        GWElement { rank: self.rank * rhs.rank, witt: self.witt.mul(&rhs.witt) }
    }
}

impl fmt::Display for GWElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.rank, self.witt)
    }
}

/// Builds a Grothendieck-Witt class from its rank and Witt class.
pub fn gw_make(rank: i64, witt: WittElement) -> Result<GWElement> {
    if rank.rem_euclid(2) as u8 != witt.rank_mod2() {
        return Err(AlgebraError::Compatibility(format!(
            "rank {rank} has parity different from rank_mod2({witt}) = {}",
            witt.rank_mod2()
        )));
    }
    Ok(GWElement { rank, witt })
}

/// Element of Z/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct F2(pub bool);

impl fmt::Display for F2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.0 { "1" } else { "0" })
    }
}

/// Tag of a coefficient ring, carried by every generator context.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoeffRing {
    Integers,
    Mod2,
    Witt(FieldTag),
    GrothendieckWitt(FieldTag),
}

impl fmt::Display for CoeffRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffRing::Integers => f.write_str("Z"),
            CoeffRing::Mod2 => f.write_str("Z/2"),
            CoeffRing::Witt(t) => write!(f, "W({t})"),
            CoeffRing::GrothendieckWitt(t) => write!(f, "GW({t})"),
        }
    }
}

/// Ring operations needed by polynomial arithmetic.
pub trait Coefficient: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero_in(ring: CoeffRing) -> Self;
    fn from_int_in(ring: CoeffRing, n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;

    fn one_in(ring: CoeffRing) -> Self {
        Self::from_int_in(ring, 1)
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    /// Whether the printed form should be a subtracted term.
    fn is_negative(&self) -> bool {
        false
    }

    /// Whether the printed form needs parentheses when used as a factor.
    fn is_compound(&self) -> bool {
        false
    }
}

impl Coefficient for i64 {
    fn zero_in(_: CoeffRing) -> Self {
        0
    }
    fn from_int_in(_: CoeffRing, n: i64) -> Self {
        n
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn add(&self, rhs: &Self) -> Self {
        self.checked_add(*rhs).expect("integer coefficient overflow")
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.checked_mul(*rhs).expect("integer coefficient overflow")
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
}

impl Coefficient for F2 {
    fn zero_in(_: CoeffRing) -> Self {
        F2(false)
    }
    fn from_int_in(_: CoeffRing, n: i64) -> Self {
        F2(n.rem_euclid(2) == 1)
    }
    fn is_zero(&self) -> bool {
        !self.0
    }
    fn add(&self, rhs: &Self) -> Self {
        F2(self.0 ^ rhs.0)
    }
    fn neg(&self) -> Self {
        *self
    }
    fn mul(&self, rhs: &Self) -> Self {
        F2(self.0 & rhs.0)
    }
}

fn witt_field(ring: CoeffRing) -> FieldTag {
    match ring {
        CoeffRing::Witt(t) | CoeffRing::GrothendieckWitt(t) => t,
        other => panic!("{other} is not a Witt or Grothendieck-Witt ring"),
    }
}

impl Coefficient for WittElement {
    fn zero_in(ring: CoeffRing) -> Self {
        WittElement::zero(witt_field(ring))
    }
    fn from_int_in(ring: CoeffRing, n: i64) -> Self {
        WittElement::from_int(witt_field(ring), n)
    }
    fn is_zero(&self) -> bool {
        WittElement::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        WittElement::add(self, rhs)
    }
    fn neg(&self) -> Self {
        WittElement::neg(self)
    }
    fn mul(&self, rhs: &Self) -> Self {
        WittElement::mul(self, rhs)
    }
    fn is_negative(&self) -> bool {
        self.field == FieldTag::R && self.coords[0] < 0
    }
    fn is_compound(&self) -> bool {
        self.field == FieldTag::Fq1 && self.coords == [1, 1]
    }
}

impl Coefficient for GWElement {
    fn zero_in(ring: CoeffRing) -> Self {
        GWElement::zero(witt_field(ring))
    }
    fn from_int_in(ring: CoeffRing, n: i64) -> Self {
        GWElement::from_int(witt_field(ring), n)
    }
    fn is_zero(&self) -> bool {
        GWElement::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        GWElement::add(self, rhs)
    }
    fn neg(&self) -> Self {
        GWElement::neg(self)
    }
    fn mul(&self, rhs: &Self) -> Self {
        GWElement::mul(self, rhs)
    }
}
