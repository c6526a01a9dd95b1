//! The class ring `Z[L, 1/L, Lhat, G_1, G_2, ..]` and rational power series
//! over it.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arcgen::ZariskiFormula;
use crate::error::ClassError;
use crate::poly::ScissorPolynomial;
use crate::rationalizer::TaggedTuple;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum GenKey {
    Formula {
        characteristic: u64,
        free_untagged: usize,
        free_tagged: usize,
        tags: Vec<bool>,
        equations: Vec<String>,
    },
    Initial {
        characteristic: u64,
        names: Vec<String>,
        equations: Vec<String>,
        theta: TaggedTuple,
        k: usize,
    },
}

/// An opaque generator of the class ring.
///
/// Either the class of a tagged formula, compared up to renaming of its
/// variables, or the class `[Parc_k^theta]` of a directed arc scheme of a
/// fixed hypersurface at a fixed level.
#[derive(Debug, Clone)]
pub struct ClassGenerator {
    key: GenKey,
    display: String,
    formula: ZariskiFormula,
}

impl PartialEq for ClassGenerator {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for ClassGenerator {}

impl PartialOrd for ClassGenerator {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ClassGenerator {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }
}

impl std::hash::Hash for ClassGenerator {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.key.hash(state);
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

impl ClassGenerator {
    /// Generator for the class of `phi` as a subscheme of its ambient space.
    pub fn formula(phi: &ZariskiFormula) -> Self {
        let m = phi.nvars();
        let mut used = vec![false; m];
        for f in phi.equations() {
            for v in f.support() {
                used[v] = true;
            }
        }
        let used_idx: Vec<usize> = (0..m).filter(|&i| used[i]).collect();
        let free_tagged = (0..m).filter(|&i| !used[i] && phi.tagged()[i]).count();
        let free_untagged = m - used_idx.len() - free_tagged;
        let k = used_idx.len();
        let names: Vec<String> = (0..k).map(|i| format!("v{i}")).collect();
        let perms = if k <= 6 { permutations(k) } else { vec![(0..k).collect()] };
        let mut best: Option<(Vec<bool>, Vec<String>)> = None;
        for p in perms {
            // used variable used_idx[i] becomes v{p[i]}
            let mut map = vec![0usize; m];
            let mut tags = vec![false; k];
            for (i, &v) in used_idx.iter().enumerate() {
                map[v] = p[i];
                tags[p[i]] = phi.tagged()[v];
            }
            let mut eqs: Vec<String> = phi
                .equations()
                .iter()
                .map(|f| f.remap(k, &map).to_text(&names))
                .collect();
            eqs.sort();
            eqs.dedup();
            let cand = (tags, eqs);
            if best.as_ref().map_or(true, |b| cand < *b) {
                best = Some(cand);
            }
        }
        let (tags, equations) = best.expect("at least one permutation");
        let display = format!("[{}]", phi.to_text().replace('\n', ", "));
        ClassGenerator {
            key: GenKey::Formula {
                characteristic: phi.field().characteristic(),
                free_untagged,
                free_tagged,
                tags,
                equations,
            },
            display,
            formula: phi.clone(),
        }
    }

    /// Generator `[Parc_k^theta X]` for the hypersurface (or scheme) `phi`.
    pub fn initial_value(phi: &ZariskiFormula, theta: &TaggedTuple, k: usize) -> Self {
        let names = phi.names().to_vec();
        let equations = phi.equations().iter().map(|f| f.to_text(&names)).collect::<Vec<_>>();
        let display = if *theta == TaggedTuple::zero(theta.len()) {
            format!("[arc_{k}]")
        } else {
            format!("[Parc_{k}^{theta}]")
        };
        ClassGenerator {
            key: GenKey::Initial {
                characteristic: phi.field().characteristic(),
                names,
                equations,
                theta: theta.clone(),
                k,
            },
            display,
            formula: phi.clone(),
        }
    }

    pub fn name(&self) -> &str {
        &self.display
    }

    /// The formula whose points this generator counts.
    pub fn formula_ref(&self) -> &ZariskiFormula {
        &self.formula
    }

    /// `(theta, k)` for a directed-arc generator.
    pub fn initial_data(&self) -> Option<(&TaggedTuple, usize)> {
        match &self.key {
            GenKey::Initial { theta, k, .. } => Some((theta, *k)),
            GenKey::Formula { .. } => None,
        }
    }
}

impl fmt::Display for ClassGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display)
    }
}

/// Monomial `L^l Lhat^h prod G_i^{e_i}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassMonomial {
    pub lef: i64,
    pub lhat: u32,
    pub gens: BTreeMap<ClassGenerator, u32>,
}

impl ClassMonomial {
    fn one() -> Self {
        ClassMonomial { lef: 0, lhat: 0, gens: BTreeMap::new() }
    }

    fn mul(&self, other: &ClassMonomial) -> ClassMonomial {
        let mut gens = self.gens.clone();
        for (g, e) in &other.gens {
            *gens.entry(g.clone()).or_insert(0) += e;
        }
        ClassMonomial { lef: self.lef + other.lef, lhat: self.lhat + other.lhat, gens }
    }
}

/// Integer combination of class monomials.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ClassExpr {
    terms: BTreeMap<ClassMonomial, BigInt>,
}

impl ClassExpr {
    pub fn zero() -> Self {
        ClassExpr::default()
    }

    pub fn one() -> Self {
        ClassExpr::int(1)
    }

    pub fn int(c: i64) -> Self {
        ClassExpr::from_monomial(ClassMonomial::one(), BigInt::from(c))
    }

    pub fn big(c: BigInt) -> Self {
        ClassExpr::from_monomial(ClassMonomial::one(), c)
    }

    fn from_monomial(m: ClassMonomial, c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        ClassExpr { terms }
    }

    /// `L^e`.
    pub fn lef(e: i64) -> Self {
        ClassExpr::from_monomial(ClassMonomial { lef: e, ..ClassMonomial::one() }, BigInt::one())
    }

    /// `Lhat^e`.
    pub fn lhat(e: u32) -> Self {
        ClassExpr::from_monomial(ClassMonomial { lhat: e, ..ClassMonomial::one() }, BigInt::one())
    }

    /// `L* = L - Lhat`.
    pub fn lstar() -> Self {
        ClassExpr::lef(1).sub(&ClassExpr::lhat(1))
    }

    pub fn generator(g: ClassGenerator) -> Self {
        let mut gens = BTreeMap::new();
        gens.insert(g, 1);
        ClassExpr::from_monomial(ClassMonomial { gens, ..ClassMonomial::one() }, BigInt::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ClassMonomial, &BigInt)> {
        self.terms.iter()
    }

    fn add_term(&mut self, m: ClassMonomial, c: BigInt) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &ClassExpr) -> ClassExpr {
        let mut r = self.clone();
        for (m, c) in &other.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, other: &ClassExpr) -> ClassExpr {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ClassExpr {
        ClassExpr { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn mul(&self, other: &ClassExpr) -> ClassExpr {
        let mut r = ClassExpr::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                r.add_term(m1.mul(m2), c1 * c2);
            }
        }
        r
    }

    pub fn pow(&self, e: u32) -> ClassExpr {
        let mut r = ClassExpr::one();
        for _ in 0..e {
            r = r.mul(self);
        }
        r
    }

    pub fn scale(&self, c: &BigInt) -> ClassExpr {
        if c.is_zero() {
            return ClassExpr::zero();
        }
        ClassExpr { terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect() }
    }

    /// Multiplies by `L^e`.
    pub fn shift_lef(&self, e: i64) -> ClassExpr {
        ClassExpr {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (ClassMonomial { lef: m.lef + e, ..m.clone() }, c.clone()))
                .collect(),
        }
    }

    /// All generators occurring in the expression.
    pub fn generators(&self) -> Vec<ClassGenerator> {
        let mut out: Vec<ClassGenerator> = Vec::new();
        for m in self.terms.keys() {
            for g in m.gens.keys() {
                if !out.contains(g) {
                    out.push(g.clone());
                }
            }
        }
        out.sort();
        out
    }

    /// Ring homomorphism `L -> q`, `Lhat -> 1`, `G -> counts[G]`.
    pub fn specialize(&self, q: u64, counts: &BTreeMap<ClassGenerator, BigInt>) -> Result<BigInt, ClassError> {
        if q < 2 {
            return Err(ClassError::BadQ);
        }
        let qq = BigInt::from(q);
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut v = BigRational::from_integer(c.clone());
            let p = num_traits::pow(qq.clone(), m.lef.unsigned_abs() as usize);
            if m.lef >= 0 {
                v *= BigRational::from_integer(p);
            } else {
                v /= BigRational::from_integer(p);
            }
            for (g, e) in &m.gens {
                let n = counts.get(g).ok_or_else(|| ClassError::MissingCount(g.to_string()))?;
                v *= BigRational::from_integer(num_traits::pow(n.clone(), *e as usize));
            }
            acc += v;
        }
        if !acc.is_integer() {
            return Err(ClassError::NonIntegral(acc.to_string()));
        }
        Ok(acc.to_integer())
    }

    /// Substitutes `L -> L`, `Lhat -> Lhat` and each generator by an expression.
    pub fn substitute(&self, subs: &BTreeMap<ClassGenerator, ClassExpr>) -> ClassExpr {
        let mut r = ClassExpr::zero();
        for (m, c) in &self.terms {
            let mut t = ClassExpr::from_monomial(
                ClassMonomial { lef: m.lef, lhat: m.lhat, gens: BTreeMap::new() },
                c.clone(),
            );
            for (g, e) in &m.gens {
                let base = subs.get(g).cloned().unwrap_or_else(|| ClassExpr::generator(g.clone()));
                t = t.mul(&base.pow(*e));
            }
            r = r.add(&t);
        }
        r
    }
}

impl fmt::Display for ClassExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest powers of L first
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| b.lef.cmp(&a.lef).then(a.lhat.cmp(&b.lhat)).then(a.gens.cmp(&b.gens)));
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let mut factors = Vec::new();
            for (g, e) in &m.gens {
                factors.push(if *e == 1 { g.to_string() } else { format!("{g}^{e}") });
            }
            match m.lef {
                0 => {}
                1 => factors.push("L".into()),
                e => factors.push(format!("L^{e}")),
            }
            match m.lhat {
                0 => {}
                1 => factors.push("Lhat".into()),
                e => factors.push(format!("Lhat^{e}")),
            }
            let abs = c.abs();
            let sign = if c.is_negative() { "-" } else if i > 0 { "+" } else { "" };
            let body = if factors.is_empty() {
                abs.to_string()
            } else if abs.is_one() {
                factors.join("*")
            } else {
                format!("{abs}*{}", factors.join("*"))
            };
            write!(f, "{sign}{body}")?;
        }
        Ok(())
    }
}

/// Class of projective `n`-space from the scissor relation of its standard
/// affine cover: the intersection of `j` charts has class `L^(n-j+1) (L - Lhat)^(j-1)`.
pub fn projective_class(n: usize) -> ClassExpr {
    let s = ScissorPolynomial::new(n + 1);
    let mut r = ClassExpr::zero();
    for (mono, c) in s.poly().terms() {
        let j = mono.degree() as i64;
        if j == 0 {
            continue;
        }
        let chart = ClassExpr::lef(n as i64 - j + 1).mul(&ClassExpr::lstar().pow(j as u32 - 1));
        r = r.add(&chart.scale(&c.to_integer()));
    }
    r
}

/// Coefficient of a series, or a marker below its validity bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coefficient {
    Certified(ClassExpr),
    Uncertified,
}

/// `N(t) / prod (1 - L^a t^b)`, whose coefficients are claimed only for `n >= n0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSeries {
    pub numerator: Vec<ClassExpr>,
    /// Factors `(a, b)` meaning `1 - L^a t^b`, sorted.
    pub denominator: Vec<(i64, u64)>,
    pub n0: usize,
}

impl RationalSeries {
    pub fn zero() -> Self {
        RationalSeries { numerator: Vec::new(), denominator: Vec::new(), n0: 0 }
    }

    pub fn polynomial(coeffs: Vec<ClassExpr>, n0: usize) -> Self {
        let mut s = RationalSeries { numerator: coeffs, denominator: Vec::new(), n0 };
        s.trim();
        s
    }

    /// `c t^s / (1 - L^a t^b)`.
    pub fn geometric(c: ClassExpr, s: usize, a: i64, b: u64) -> Self {
        let mut numerator = vec![ClassExpr::zero(); s + 1];
        numerator[s] = c;
        let mut r = RationalSeries { numerator, denominator: vec![(a, b)], n0: 0 };
        r.trim();
        r
    }

    fn trim(&mut self) {
        while self.numerator.last().is_some_and(ClassExpr::is_zero) {
            self.numerator.pop();
        }
        self.denominator.sort();
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_empty()
    }

    /// The first `len` coefficients, ignoring the validity bound.
    pub fn raw_coefficients(&self, len: usize) -> Vec<ClassExpr> {
        let mut c: Vec<ClassExpr> = (0..len)
            .map(|i| self.numerator.get(i).cloned().unwrap_or_default())
            .collect();
        for &(a, b) in &self.denominator {
            let b = b as usize;
            for i in b..len {
                let prev = c[i - b].shift_lef(a);
                c[i] = c[i].add(&prev);
            }
        }
        c
    }

    pub fn coefficient(&self, n: usize) -> Coefficient {
        if n < self.n0 {
            return Coefficient::Uncertified;
        }
        Coefficient::Certified(self.raw_coefficients(n + 1).pop().expect("n + 1 coefficients"))
    }

    /// `prod (1 - L^a t^b)` as a polynomial in `t`.
    pub fn denominator_poly(&self) -> Vec<ClassExpr> {
        let mut d = vec![ClassExpr::one()];
        for &(a, b) in &self.denominator {
            let b = b as usize;
            let mut next = d.clone();
            next.resize(d.len() + b, ClassExpr::zero());
            for (i, c) in d.iter().enumerate() {
                next[i + b] = next[i + b].sub(&c.shift_lef(a));
            }
            d = next;
        }
        d
    }

    fn with_factors(&self, factors: &[(i64, u64)]) -> Vec<ClassExpr> {
        let mut num = self.numerator.clone();
        for &(a, b) in factors {
            let b = b as usize;
            let mut next = num.clone();
            next.resize(num.len() + b, ClassExpr::zero());
            for (i, c) in num.iter().enumerate() {
                next[i + b] = next[i + b].sub(&c.shift_lef(a));
            }
            num = next;
        }
        num
    }

    /// Sum over the least common multiple of the two denominators.
    pub fn add(&self, other: &RationalSeries) -> RationalSeries {
        let mut count: BTreeMap<(i64, u64), (usize, usize)> = BTreeMap::new();
        for f in &self.denominator {
            count.entry(*f).or_default().0 += 1;
        }
        for f in &other.denominator {
            count.entry(*f).or_default().1 += 1;
        }
        let mut den = Vec::new();
        let (mut extra_self, mut extra_other) = (Vec::new(), Vec::new());
        for (f, (a, b)) in count {
            for _ in 0..a.max(b) {
                den.push(f);
            }
            for _ in a..a.max(b) {
                extra_self.push(f);
            }
            for _ in b..a.max(b) {
                extra_other.push(f);
            }
        }
        let x = self.with_factors(&extra_self);
        let y = other.with_factors(&extra_other);
        let len = x.len().max(y.len());
        let numerator = (0..len)
            .map(|i| {
                let a = x.get(i).cloned().unwrap_or_default();
                let b = y.get(i).cloned().unwrap_or_default();
                a.add(&b)
            })
            .collect();
        let mut r = RationalSeries { numerator, denominator: den, n0: self.n0.max(other.n0) };
        r.trim();
        r
    }

    pub fn neg(&self) -> RationalSeries {
        RationalSeries {
            numerator: self.numerator.iter().map(ClassExpr::neg).collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &RationalSeries) -> RationalSeries {
        self.add(&other.neg())
    }

    /// Multiplies by `c t^s`; the validity bound moves up by `s`.
    pub fn mul_term(&self, c: &ClassExpr, s: usize) -> RationalSeries {
        let mut numerator = vec![ClassExpr::zero(); s];
        numerator.extend(self.numerator.iter().map(|x| x.mul(c)));
        let mut r = RationalSeries { numerator, denominator: self.denominator.clone(), n0: self.n0 + s };
        r.trim();
        r
    }

    /// Substitutes generators inside every numerator coefficient.
    pub fn substitute(&self, subs: &BTreeMap<ClassGenerator, ClassExpr>) -> RationalSeries {
        let mut r = RationalSeries {
            numerator: self.numerator.iter().map(|c| c.substitute(subs)).collect(),
            ..self.clone()
        };
        r.trim();
        r
    }

    pub fn generators(&self) -> Vec<ClassGenerator> {
        let mut out: Vec<ClassGenerator> = Vec::new();
        for c in &self.numerator {
            for g in c.generators() {
                if !out.contains(&g) {
                    out.push(g);
                }
            }
        }
        out.sort();
        out
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            numerator: self
                .numerator
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| NumeratorTerm { t: i, class: c.to_string() })
                .collect(),
            denominator: self.denominator.clone(),
            n0: self.n0,
        }
    }
}

/// Solves `Z = tail + L^r t^s Z`.
pub fn solve_series(tail: &RationalSeries, r: i64, s: u64) -> RationalSeries {
    assert!(s > 0, "shift must be positive");
    let mut out = tail.clone();
    out.n0 = tail.n0.max(s as usize + 1);
    if out.is_zero() {
        return out;
    }
    out.denominator.push((r, s));
    out.denominator.sort();
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumeratorTerm {
    pub t: usize,
    pub class: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub numerator: Vec<NumeratorTerm>,
    /// Factors `[a, b]` meaning `1 - L^a t^b`.
    pub denominator: Vec<(i64, u64)>,
    pub n0: usize,
}

/// Polynomial in `t` as a numerator list, used for naive multiplication checks.
pub fn poly_mul(a: &[ClassExpr], b: &[ClassExpr], len: usize) -> Vec<ClassExpr> {
    let mut out = vec![ClassExpr::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

/// Point-count polynomial `#P^n(F_q) = (q^(n+1) - 1) / (q - 1)`, for tests.
pub fn projective_count(n: u32, q: u64) -> BigInt {
    let q = BigInt::from(q);
    (num_traits::pow(q.clone(), n as usize + 1) - 1) / (q - 1)
}
