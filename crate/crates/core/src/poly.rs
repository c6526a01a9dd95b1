//! Exact sparse multivariate polynomials over a [`Field`].
//!
//! A [`Poly`] lives in a ring with a fixed number of variables; variable
//! names are only needed for parsing and printing and are passed alongside.
//! Terms are kept in graded order (total degree first, then lexicographic
//! with the first variable heaviest), which is also the printing order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::PolyError;
use crate::field::Field;

/// Exponent vector of a monomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Weighted degree `w . nu`.
    pub fn weighted_degree(&self, w: &[u64]) -> u64 {
        self.0.iter().zip(w).map(|(&e, &wi)| e as u64 * wi).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Result<Monomial, PolyError> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(PolyError::ExponentOverflow))
            .collect::<Result<Vec<_>, _>>()
            .map(Monomial)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Indices of the variables with positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    nvars: usize,
    field: Field,
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero(nvars: usize, field: Field) -> Self {
        Poly { nvars, field, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, field: Field, c: BigRational) -> Self {
        let mut p = Poly::zero(nvars, field);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn from_int(nvars: usize, field: Field, c: i64) -> Self {
        Poly::constant(nvars, field, BigRational::from_integer(c.into()))
    }

    pub fn one(nvars: usize, field: Field) -> Self {
        Poly::from_int(nvars, field, 1)
    }

    pub fn var(nvars: usize, field: Field, i: usize) -> Self {
        let mut p = Poly::zero(nvars, field);
        p.add_term(Monomial::var(nvars, i), BigRational::one());
        p
    }

    /// Builds a polynomial from `(coefficient, exponents)` pairs, combining duplicates.
    pub fn from_terms<I>(nvars: usize, field: Field, terms: I) -> Self
    where
        I: IntoIterator<Item = (BigRational, Vec<u32>)>,
    {
        let mut p = Poly::zero(nvars, field);
        for (c, e) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(Monomial(e), c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(&Monomial::one(self.nvars))
    }

    /// Adds `c * m` in place.
    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        let c = self.field.norm(c);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = self.field.add(v, &c);
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn check_ring(&self, other: &Poly) {
        assert!(
            self.nvars == other.nvars && self.field == other.field,
            "ring mismatch: {} vars over {} vs {} vars over {}",
            self.nvars,
            self.field,
            other.nvars,
            other.field
        );
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.check_ring(other);
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.clone(), self.field.neg(c)))
            .collect();
        Poly { nvars: self.nvars, field: self.field, terms }
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        let mut r = Poly::zero(self.nvars, self.field);
        for (m, a) in &self.terms {
            r.add_term(m.clone(), a * c);
        }
        r
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        self.check_ring(other);
        let mut r = Poly::zero(self.nvars, self.field);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2).expect("exponent overflow in product");
                r.add_term(m, c1 * c2);
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut result = Poly::one(self.nvars, self.field);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Formal partial derivative with respect to variable `v`.
    pub fn derive(&self, v: usize) -> Poly {
        let mut r = Poly::zero(self.nvars, self.field);
        for (m, c) in &self.terms {
            let e = m.0[v];
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.0[v] -= 1;
            r.add_term(dm, c * BigRational::from_integer(BigInt::from(e)));
        }
        r
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Lowest total degree of a term; `None` for the zero polynomial.
    pub fn min_degree(&self) -> Option<u64> {
        self.terms.keys().map(Monomial::degree).min()
    }

    /// Variables that actually occur.
    pub fn support(&self) -> Vec<usize> {
        let mut used = vec![false; self.nvars];
        for m in self.terms.keys() {
            for i in m.support() {
                used[i] = true;
            }
        }
        (0..self.nvars).filter(|&i| used[i]).collect()
    }

    /// Substitutes `subs[i]` for variable `i`; all substitutes share one target ring.
    pub fn compose(&self, subs: &[Poly]) -> Poly {
        assert_eq!(subs.len(), self.nvars);
        let (n, field) = match subs.first() {
            Some(s) => (s.nvars, s.field),
            None => (0, self.field),
        };
        let mut r = Poly::zero(n, field);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(n, field, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t.mul(&subs[i].pow(e));
                }
            }
            r = r.add(&t);
        }
        r
    }

    /// Moves the polynomial into a ring with `nvars` variables, sending variable `i` to `map[i]`.
    pub fn remap(&self, nvars: usize, map: &[usize]) -> Poly {
        assert_eq!(map.len(), self.nvars);
        let mut r = Poly::zero(nvars, self.field);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; nvars];
            for (i, &k) in m.0.iter().enumerate() {
                e[map[i]] += k;
            }
            r.add_term(Monomial(e), c.clone());
        }
        r
    }

    /// Reinterprets the coefficients in another field.
    pub fn to_field(&self, field: Field) -> Result<Poly, PolyError> {
        let mut r = Poly::zero(self.nvars, field);
        for (m, c) in &self.terms {
            r.add_term(m.clone(), field.reduce(c)?);
        }
        Ok(r)
    }

    /// Evaluates at a point given by field elements.
    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.nvars);
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += t;
        }
        self.field.norm(acc)
    }

    /// Keeps only terms satisfying the predicate.
    pub fn filter_terms<F: Fn(&Monomial) -> bool>(&self, keep: F) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| keep(m))
            .map(|(m, c)| (m.clone(), c.clone()))
            .collect();
        Poly { nvars: self.nvars, field: self.field, terms }
    }

    /// Prints in the parse-canonical grammar.
    pub fn to_text(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if negative {
                    s.push('-');
                }
            } else {
                s.push(if negative { '-' } else { '+' });
            }
            let mono = monomial_text(m, names);
            if mono.is_empty() {
                s.push_str(&abs.to_string());
            } else if abs.is_one() {
                s.push_str(&mono);
            } else {
                let _ = write!(s, "{abs}*{mono}");
            }
        }
        s
    }
}

pub(crate) fn monomial_text(m: &Monomial, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(names[i].clone()),
            _ => parts.push(format!("{}^{}", names[i], e)),
        }
    }
    parts.join("*")
}

/// Parses the text grammar `term (+|- term)*` with `term = [coef][*]var[^exp](*var[^exp])*`.
pub fn parse_poly(text: &str, vars: &[&str], field: Field) -> Result<Poly, PolyError> {
    Parser { src: text.as_bytes(), pos: 0, vars, field }.parse()
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [&'a str],
    field: Field,
}

impl Parser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T, PolyError> {
        Err(PolyError::Malformed { pos: self.pos, msg: msg.to_string() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<BigInt, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn ident(&mut self) -> &str {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap()
    }

    fn parse(mut self) -> Result<Poly, PolyError> {
        let n = self.vars.len();
        let mut poly = Poly::zero(n, self.field);
        if self.peek().is_none() {
            return self.err("empty input");
        }
        let mut first = true;
        loop {
            let sign = match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    1
                }
                Some(b'-') => {
                    self.pos += 1;
                    -1
                }
                Some(_) if first => 1,
                Some(_) => return self.err("expected `+` or `-`"),
                None => break,
            };
            first = false;
            let (c, e) = self.term()?;
            let c = self.field.reduce(&(c * BigRational::from_integer(sign.into())))?;
            poly.add_term(Monomial(e), c);
        }
        Ok(poly)
    }

    fn term(&mut self) -> Result<(BigRational, Vec<u32>), PolyError> {
        let mut coef = BigRational::one();
        let mut exps = vec![0u32; self.vars.len()];
        let mut factors = 0;
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let num = self.number()?;
                    let mut value = BigRational::from_integer(num);
                    if self.peek() == Some(b'/') {
                        self.pos += 1;
                        let den = self.number()?;
                        if den.is_zero() {
                            return self.err("zero denominator");
                        }
                        value /= BigRational::from_integer(den);
                    }
                    coef *= value;
                }
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                    let name = self.ident().to_string();
                    let idx = self
                        .vars
                        .iter()
                        .position(|v| *v == name)
                        .ok_or_else(|| PolyError::UnknownVariable(name.clone()))?;
                    let mut e = 1u32;
                    if self.peek() == Some(b'^') {
                        self.pos += 1;
                        let k = self.number()?;
                        e = u32::try_from(k).map_err(|_| PolyError::ExponentOverflow)?;
                    }
                    exps[idx] = exps[idx].checked_add(e).ok_or(PolyError::ExponentOverflow)?;
                }
                _ => return self.err("expected a coefficient or a variable"),
            }
            factors += 1;
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                }
                Some(c) if c.is_ascii_alphanumeric() || c == b'_' => {}
                _ => break,
            }
        }
        debug_assert!(factors > 0);
        Ok((coef, exps))
    }
}

/// The scissor polynomial `S_n = 1 - prod (1 - x_i)` in `n` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScissorPolynomial {
    arity: usize,
    poly: Poly,
}

impl ScissorPolynomial {
    pub fn new(arity: usize) -> Self {
        let field = Field::Rationals;
        let one = Poly::one(arity, field);
        let mut prod = one.clone();
        for i in 0..arity {
            prod = prod.mul(&one.sub(&Poly::var(arity, field, i)));
        }
        ScissorPolynomial { arity, poly: one.sub(&prod) }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    /// Odd-degree part `S_n^+`.
    pub fn positive_part(&self) -> Poly {
        self.poly.filter_terms(|m| m.degree() % 2 == 1)
    }

    /// Negated even-degree part `S_n^-`, so that `S_n = S_n^+ - S_n^-`.
    pub fn negative_part(&self) -> Poly {
        self.poly.filter_terms(|m| m.degree() % 2 == 0).neg()
    }

    /// `S_n(args)` with the arguments living in a common ring.
    pub fn apply(&self, args: &[Poly]) -> Poly {
        self.poly.compose(args)
    }
}

/// Normal form modulo the idempotency relations `x_i^2 = x_i` for every variable.
pub fn scissor_reduce(p: &Poly) -> Poly {
    let all: Vec<usize> = (0..p.nvars()).collect();
    scissor_reduce_vars(p, &all)
}

/// Normal form modulo `x_i^2 = x_i` for the designated variables only.
pub fn scissor_reduce_vars(p: &Poly, idempotent: &[usize]) -> Poly {
    let mut r = Poly::zero(p.nvars(), p.field());
    for (m, c) in p.terms() {
        let mut e = m.clone();
        for &i in idempotent {
            e.0[i] = e.0[i].min(1);
        }
        r.add_term(e, c.clone());
    }
    r
}
