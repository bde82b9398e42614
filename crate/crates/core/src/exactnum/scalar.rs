//! Exact elements of Q(symbols) in canonical reduced form.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{int, Poly};
use super::NumError;

/// One declared generic symbol.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Symbol {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub display: Option<String>,
}

/// Ordered list of generic symbols; no algebraic relations hold among them.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<Symbol>", into = "Vec<Symbol>")]
pub struct SymbolTable {
    symbols: Vec<Symbol>,
}

impl SymbolTable {
    pub fn new(symbols: Vec<Symbol>) -> Result<Self, NumError> {
        let mut seen = std::collections::BTreeSet::new();
        for s in &symbols {
            let ok = !s.name.is_empty()
                && s.name != "1"
                && s.name.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
                && s.name.chars().all(|c| c.is_alphanumeric() || c == '_');
            if !ok {
                return Err(NumError::BadSymbol(s.name.clone()));
            }
            if !seen.insert(s.name.clone()) {
                return Err(NumError::DuplicateSymbol(s.name.clone()));
            }
        }
        Ok(SymbolTable { symbols })
    }

    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Self, NumError> {
        SymbolTable::new(
            names
                .iter()
                .map(|n| Symbol {
                    name: n.as_ref().to_string(),
                    display: None,
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn index_of(&self, name: &str) -> Option<u32> {
        self.symbols
            .iter()
            .position(|s| s.name == name)
            .map(|i| i as u32)
    }

    pub fn name(&self, v: u32) -> &str {
        &self.symbols[v as usize].name
    }

    pub fn display_name(&self, v: u32) -> &str {
        let s = &self.symbols[v as usize];
        s.display.as_deref().unwrap_or(&s.name)
    }

    pub fn shared(self) -> Arc<SymbolTable> {
        Arc::new(self)
    }
}

impl TryFrom<Vec<Symbol>> for SymbolTable {
    type Error = NumError;
    fn try_from(v: Vec<Symbol>) -> Result<Self, NumError> {
        SymbolTable::new(v)
    }
}

impl From<SymbolTable> for Vec<Symbol> {
    fn from(t: SymbolTable) -> Self {
        t.symbols
    }
}

/// Element of Q(symbols) stored as `num / den`, coprime, `den` monic.
///
/// Constants carry no table and combine with scalars of any table.
#[derive(Clone, Debug)]
pub struct Scalar {
    num: Poly,
    den: Poly,
    table: Option<Arc<SymbolTable>>,
}

impl PartialEq for Scalar {
    fn eq(&self, o: &Self) -> bool {
        self.num == o.num && self.den == o.den
    }
}

impl Eq for Scalar {}

impl std::hash::Hash for Scalar {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.num.hash(h);
        self.den.hash(h);
    }
}

fn merge_tables(
    a: &Option<Arc<SymbolTable>>,
    b: &Option<Arc<SymbolTable>>,
) -> Option<Arc<SymbolTable>> {
    match (a, b) {
        (Some(x), Some(y)) => {
            assert!(
                Arc::ptr_eq(x, y) || x == y,
                "scalar arithmetic across different symbol tables"
            );
            Some(x.clone())
        }
        (Some(x), None) | (None, Some(x)) => Some(x.clone()),
        (None, None) => None,
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar {
            num: Poly::zero(),
            den: Poly::one(),
            table: None,
        }
    }

    pub fn one() -> Self {
        Scalar::from_rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(int(n))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Scalar::from_rational(BigRational::from_integer(n))
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar {
            num: Poly::constant(r),
            den: Poly::one(),
            table: None,
        }
    }

    pub fn symbol(table: &Arc<SymbolTable>, name: &str) -> Result<Self, NumError> {
        let v = table
            .index_of(name)
            .ok_or_else(|| NumError::UnknownSymbol(name.to_string()))?;
        Ok(Scalar {
            num: Poly::var(v),
            den: Poly::one(),
            table: Some(table.clone()),
        })
    }

    /// Builds `num / den` and reduces it to canonical form.
    pub fn from_polys(num: Poly, den: Poly, table: Option<Arc<SymbolTable>>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Scalar {
                num,
                den: Poly::one(),
                table,
            };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        let lc = den.leading_coeff().recip();
        Scalar {
            num: num.scale(&lc),
            den: den.scale(&lc),
            table,
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn table(&self) -> Option<&Arc<SymbolTable>> {
        self.table.as_ref()
    }

    pub fn with_table(mut self, t: &Arc<SymbolTable>) -> Self {
        self.table = Some(t.clone());
        self
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_constant() && self.num == Poly::one()
    }

    pub fn rational_value(&self) -> Option<BigRational> {
        if self.den.is_constant() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn integer_value(&self) -> Option<BigInt> {
        self.rational_value()
            .filter(|r| r.is_integer())
            .map(|r| r.to_integer())
    }

    pub fn inv(&self) -> Result<Scalar, NumError> {
        if self.is_zero() {
            return Err(NumError::DivisionByZero);
        }
        Ok(Scalar::from_polys(
            self.den.clone(),
            self.num.clone(),
            self.table.clone(),
        ))
    }

    pub fn pow(&self, e: i32) -> Result<Scalar, NumError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs();
        Ok(Scalar::from_polys(
            base.num.pow(k),
            base.den.pow(k),
            base.table.clone(),
        ))
    }

    /// True when both sides share a symbol table or at least one is a constant.
    pub fn compatible(&self, o: &Scalar) -> bool {
        match (&self.table, &o.table) {
            (Some(a), Some(b)) => Arc::ptr_eq(a, b) || a == b,
            _ => true,
        }
    }

    /// Numeric value under an assignment of complex numbers to every symbol.
    /// Diagnostics only.
    pub fn eval(&self, values: &[Complex64]) -> Complex64 {
        self.num.eval(values) / self.den.eval(values)
    }

    /// Parses expressions like `-1/(2*alpha_t)` or `tau_i*(1 + mu)^2`.
    pub fn parse(s: &str, table: &Arc<SymbolTable>) -> Result<Scalar, NumError> {
        let mut p = Parser {
            src: s.as_bytes(),
            pos: 0,
            table,
        };
        let v = p.expr()?;
        p.ws();
        if p.pos != p.src.len() {
            return Err(p.err("trailing input"));
        }
        Ok(v.with_table(table))
    }

    fn fmt_using(&self, f: &mut dyn fmt::Write, name: &dyn Fn(u32) -> String) -> fmt::Result {
        let wrap_num = !self.den.is_one() && self.num.len() > 1;
        if wrap_num {
            f.write_str("(")?;
        }
        self.num.fmt_with(f, name)?;
        if wrap_num {
            f.write_str(")")?;
        }
        if !self.den.is_one() {
            f.write_str("/")?;
            let single = self.den.len() == 1
                && self
                    .den
                    .leading()
                    .is_some_and(|(m, c)| m.is_one() || (c.is_one() && m.factors().len() == 1));
            if !single {
                f.write_str("(")?;
            }
            self.den.fmt_with(f, name)?;
            if !single {
                f.write_str(")")?;
            }
        }
        Ok(())
    }

    /// Renders with display names (e.g. `α̃` for `alpha_t`).
    pub fn pretty(&self) -> String {
        let mut s = String::new();
        let t = self.table.clone();
        let name = move |v: u32| match &t {
            Some(t) => t.display_name(v).to_string(),
            None => format!("x{v}"),
        };
        let _ = self.fmt_using(&mut s, &name);
        s
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = self.table.clone();
        let name = move |v: u32| match &t {
            Some(t) => t.name(v).to_string(),
            None => format!("x{v}"),
        };
        let mut s = String::new();
        self.fmt_using(&mut s, &name)?;
        f.write_str(&s)
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        let t = merge_tables(&self.table, &o.table);
        if self.den == o.den {
            return Scalar::from_polys(self.num.add(&o.num), self.den.clone(), t);
        }
        Scalar::from_polys(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
            t,
        )
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self + &(-o)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        let t = merge_tables(&self.table, &o.table);
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        Scalar::from_polys(self.num.mul(&o.num), self.den.mul(&o.den), t)
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    /// # Panics
    /// On division by zero.
    fn div(self, o: &Scalar) -> Scalar {
        self * &o.inv().expect("division by zero scalar")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            num: self.num.neg(),
            den: self.den.clone(),
            table: self.table.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::one()
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    table: &'a Arc<SymbolTable>,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> NumError {
        NumError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Scalar, NumError> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                b'-' => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Scalar, NumError> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                b'/' => {
                    self.pos += 1;
                    let d = self.unary()?;
                    acc = &acc * &d.inv().map_err(|_| self.err("division by zero"))?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Scalar, NumError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Scalar, NumError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let neg = if self.peek() == Some(b'-') {
                self.pos += 1;
                true
            } else {
                false
            };
            self.ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
            let e: i32 = digits.parse().map_err(|_| self.err("bad exponent"))?;
            let e = if neg { -e } else { e };
            return base.pow(e).map_err(|_| self.err("zero to a negative power"));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Scalar, NumError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("0");
                let n: BigInt = digits.parse().map_err(|_| self.err("bad integer"))?;
                Ok(Scalar::from_bigint(n))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
                Scalar::symbol(self.table, name).map_err(|_| {
                    self.pos = start;
                    self.err(&format!("unknown symbol '{name}'"))
                })
            }
            _ => Err(self.err("expected a number, symbol or '('")),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
