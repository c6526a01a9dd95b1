//! Finite-dimensional commutative algebras given by a basis and structure
//! constants, plus lengths of jets of germs at the origin.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{ArtinError, PolyError};
use crate::field::Field;
use crate::linalg;
use crate::poly::{monomial_text, Monomial, Poly};

/// Algebra with basis `alpha_0, .., alpha_{l-1}` and
/// `alpha_a * alpha_b = sum_g table[a][b][g] * alpha_g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArtinAlgebra {
    labels: Vec<String>,
    field: Field,
    table: Vec<Vec<Vec<BigRational>>>,
    unit: Vec<BigRational>,
    local: bool,
    blocks: Vec<usize>,
}

impl ArtinAlgebra {
    /// Validates commutativity, associativity and the unit on all basis
    /// pairs and triples, and nilpotency of the maximal ideal when `local`.
    pub fn new(
        labels: Vec<String>,
        field: Field,
        table: Vec<Vec<Vec<BigRational>>>,
        unit: Vec<BigRational>,
        local: bool,
    ) -> Result<Self, ArtinError> {
        let l = labels.len();
        if l == 0
            || table.len() != l
            || unit.len() != l
            || table.iter().any(|row| row.len() != l || row.iter().any(|v| v.len() != l))
        {
            return Err(ArtinError::Shape);
        }
        let table = table
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|v| v.iter().map(|c| field.reduce(c)).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, PolyError>>()?;
        let unit = unit.iter().map(|c| field.reduce(c)).collect::<Result<Vec<_>, _>>()?;
        let alg = ArtinAlgebra { labels, field, table, unit, local, blocks: vec![l] };
        alg.validate()?;
        Ok(alg)
    }

    fn validate(&self) -> Result<(), ArtinError> {
        let l = self.len();
        for a in 0..l {
            for b in a + 1..l {
                if self.table[a][b] != self.table[b][a] {
                    return Err(ArtinError::NotCommutative(a, b));
                }
            }
        }
        for a in 0..l {
            for b in 0..l {
                for c in 0..l {
                    let left = self.mul(&self.table[a][b], &self.basis_vector(c));
                    let right = self.mul(&self.basis_vector(a), &self.table[b][c]);
                    if left != right {
                        return Err(ArtinError::NotAssociative(a, b, c));
                    }
                }
            }
        }
        for b in 0..l {
            if self.mul(&self.unit, &self.basis_vector(b)) != self.basis_vector(b) {
                return Err(ArtinError::NotUnital);
            }
        }
        if self.local {
            self.check_local()?;
        }
        Ok(())
    }

    fn check_local(&self) -> Result<(), ArtinError> {
        let l = self.len();
        if self.unit != self.basis_vector(0) {
            return Err(ArtinError::NotLocal);
        }
        let ideal: Vec<Vec<BigRational>> = (1..l).map(|i| self.basis_vector(i)).collect();
        for a in &ideal {
            for b in &ideal {
                if !self.mul(a, b)[0].is_zero() {
                    return Err(ArtinError::NotLocal);
                }
            }
        }
        // M^k for k = 1, 2, ..; nilpotent iff this reaches zero within l steps
        let mut power = ideal.clone();
        for _ in 0..l {
            if power.is_empty() {
                return Ok(());
            }
            let mut next = Vec::new();
            for p in &power {
                for a in &ideal {
                    next.push(self.mul(p, a));
                }
            }
            linalg::row_reduce(self.field, &mut next);
            power = next;
        }
        if power.is_empty() {
            Ok(())
        } else {
            Err(ArtinError::NotLocal)
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_local(&self) -> bool {
        self.local
    }

    pub fn unit(&self) -> &[BigRational] {
        &self.unit
    }

    /// Sizes of the explicit direct-sum blocks (a single block unless built by [`direct_sum`]).
    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    /// Structure constant `c_{ab}^g`.
    pub fn constant(&self, a: usize, b: usize, g: usize) -> &BigRational {
        &self.table[a][b][g]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); self.len()];
        v[i] = BigRational::one();
        v
    }

    /// Product of two elements in coordinates.
    pub fn mul(&self, x: &[BigRational], y: &[BigRational]) -> Vec<BigRational> {
        let l = self.len();
        let mut out = vec![BigRational::zero(); l];
        for a in 0..l {
            if x[a].is_zero() {
                continue;
            }
            for b in 0..l {
                if y[b].is_zero() {
                    continue;
                }
                let xy = self.field.mul(&x[a], &y[b]);
                for (g, c) in self.table[a][b].iter().enumerate() {
                    if !c.is_zero() {
                        out[g] = self.field.add(&out[g], &self.field.mul(&xy, c));
                    }
                }
            }
        }
        out
    }

    /// Product of elements of `R (x) k[vars]` given by polynomial coordinates.
    pub fn mul_poly(&self, x: &[Poly], y: &[Poly]) -> Vec<Poly> {
        let l = self.len();
        let (n, field) = (x[0].nvars(), x[0].field());
        let mut out = vec![Poly::zero(n, field); l];
        for a in 0..l {
            if x[a].is_zero() {
                continue;
            }
            for b in 0..l {
                if y[b].is_zero() {
                    continue;
                }
                let xy = x[a].mul(&y[b]);
                for (g, c) in self.table[a][b].iter().enumerate() {
                    if !c.is_zero() {
                        out[g] = out[g].add(&xy.scale(c));
                    }
                }
            }
        }
        out
    }

    /// The same algebra presented in the basis `beta_a = sum_b change[a][b] alpha_b`.
    pub fn change_basis(&self, change: &[Vec<BigRational>]) -> Option<ArtinAlgebra> {
        let l = self.len();
        let inv = linalg::invert(self.field, change)?;
        // old coordinates v (row) -> new coordinates v * inv
        let to_new = |v: &[BigRational]| -> Vec<BigRational> {
            (0..l)
                .map(|j| {
                    let mut s = BigRational::zero();
                    for i in 0..l {
                        s += &v[i] * &inv[i][j];
                    }
                    self.field.norm(s)
                })
                .collect()
        };
        let table = (0..l)
            .map(|a| {
                (0..l)
                    .map(|b| to_new(&self.mul(&change[a], &change[b])))
                    .collect()
            })
            .collect();
        let labels = (0..l).map(|i| format!("b{i}")).collect();
        ArtinAlgebra::new(labels, self.field, table, to_new(&self.unit), false).ok()
    }

    /// Reduction of the structure constants into another field.
    pub fn to_field(&self, field: Field) -> Result<ArtinAlgebra, ArtinError> {
        let mut alg = ArtinAlgebra::new(
            self.labels.clone(),
            field,
            self.table.clone(),
            self.unit.clone(),
            self.local,
        )?;
        alg.blocks = self.blocks.clone();
        Ok(alg)
    }

    /// Algebra spanned by the first `m` basis elements after killing the rest.
    pub fn truncate(&self, m: usize) -> Result<ArtinAlgebra, ArtinError> {
        let table = (0..m)
            .map(|a| (0..m).map(|b| self.table[a][b][..m].to_vec()).collect())
            .collect();
        ArtinAlgebra::new(
            self.labels[..m].to_vec(),
            self.field,
            table,
            self.unit[..m].to_vec(),
            self.local,
        )
    }

    pub fn to_json(&self) -> AlgebraJson {
        let s = |v: &Vec<BigRational>| v.iter().map(|c| c.to_string()).collect::<Vec<_>>();
        AlgebraJson {
            characteristic: self.field.characteristic(),
            labels: self.labels.clone(),
            table: self.table.iter().map(|row| row.iter().map(s).collect()).collect(),
            unit: s(&self.unit),
            local: self.local,
        }
    }

    pub fn from_json(j: &AlgebraJson) -> Result<Self, ArtinError> {
        let field = Field::from_characteristic(j.characteristic)?;
        let parse = |s: &String| -> Result<BigRational, ArtinError> {
            s.parse::<BigRational>()
                .map_err(|_| ArtinError::Poly(PolyError::Malformed { pos: 0, msg: s.clone() }))
        };
        let table = j
            .table
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| v.iter().map(parse).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let unit = j.unit.iter().map(parse).collect::<Result<Vec<_>, _>>()?;
        ArtinAlgebra::new(j.labels.clone(), field, table, unit, j.local)
    }
}

/// JSON form: labels and a dense structure-constant tensor `table[a][b][g]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraJson {
    pub characteristic: u64,
    pub labels: Vec<String>,
    pub table: Vec<Vec<Vec<String>>>,
    pub unit: Vec<String>,
    pub local: bool,
}

/// `k[vars] / (monomial generators)`, which must be primary to the maximal ideal.
///
/// The staircase basis is sorted by degree, so basis element 0 is `1` and
/// the trailing basis elements always span an ideal.
pub fn monomial_quotient(
    vars: &[&str],
    generators: &[Vec<u32>],
    field: Field,
) -> Result<ArtinAlgebra, ArtinError> {
    let n = vars.len();
    let mut bound = vec![u32::MAX; n];
    for g in generators {
        if g.len() != n {
            return Err(ArtinError::Shape);
        }
        let support: Vec<usize> = (0..n).filter(|&i| g[i] > 0).collect();
        if support.len() == 1 {
            let i = support[0];
            bound[i] = bound[i].min(g[i]);
        } else if support.is_empty() {
            // the unit ideal: zero ring, not Artinian local
            return Err(ArtinError::Shape);
        }
    }
    if let Some(i) = bound.iter().position(|&b| b == u32::MAX) {
        return Err(ArtinError::NotPrimary(i));
    }
    let gens: Vec<Monomial> = generators.iter().cloned().map(Monomial).collect();
    let mut basis = Vec::new();
    let mut e = vec![0u32; n];
    'outer: loop {
        let m = Monomial(e.clone());
        if !gens.iter().any(|g| g.divides(&m)) {
            basis.push(m);
        }
        for i in (0..n).rev() {
            e[i] += 1;
            if e[i] < bound[i] {
                continue 'outer;
            }
            e[i] = 0;
        }
        break;
    }
    basis.sort();
    let l = basis.len();
    let names: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
    let labels = basis
        .iter()
        .map(|m| if m.is_one() { "1".to_string() } else { monomial_text(m, &names) })
        .collect();
    let table = (0..l)
        .map(|a| {
            (0..l)
                .map(|b| {
                    let mut v = vec![BigRational::zero(); l];
                    let prod = basis[a].mul(&basis[b]).expect("small exponents");
                    if let Ok(g) = basis.binary_search(&prod) {
                        v[g] = BigRational::one();
                    }
                    v
                })
                .collect()
        })
        .collect();
    let mut unit = vec![BigRational::zero(); l];
    unit[0] = BigRational::one();
    ArtinAlgebra::new(labels, field, table, unit, true)
}

/// The truncated polynomial ring `k[xi]/(xi^n)`.
pub fn truncated(n: u32, field: Field) -> Result<ArtinAlgebra, ArtinError> {
    monomial_quotient(&["xi"], &[vec![n]], field)
}

/// Block-diagonal direct sum; the unit is the sum of both units.
pub fn direct_sum(r: &ArtinAlgebra, s: &ArtinAlgebra) -> Result<ArtinAlgebra, ArtinError> {
    if r.field != s.field {
        return Err(ArtinError::FieldMismatch);
    }
    let (l1, l2) = (r.len(), s.len());
    let l = l1 + l2;
    let mut table = vec![vec![vec![BigRational::zero(); l]; l]; l];
    for a in 0..l1 {
        for b in 0..l1 {
            table[a][b][..l1].clone_from_slice(&r.table[a][b]);
        }
    }
    for a in 0..l2 {
        for b in 0..l2 {
            table[l1 + a][l1 + b][l1..].clone_from_slice(&s.table[a][b]);
        }
    }
    let labels = r
        .labels
        .iter()
        .map(|x| format!("L.{x}"))
        .chain(s.labels.iter().map(|x| format!("R.{x}")))
        .collect();
    let unit = r.unit.iter().chain(&s.unit).cloned().collect();
    let mut alg = ArtinAlgebra::new(labels, r.field, table, unit, false)?;
    alg.blocks = r.blocks.iter().chain(&s.blocks).copied().collect();
    Ok(alg)
}

/// A germ at the origin of affine space cut out by polynomial equations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GermPresentation {
    nvars: usize,
    equations: Vec<Poly>,
}

impl GermPresentation {
    pub fn new(nvars: usize, equations: Vec<Poly>) -> Result<Self, ArtinError> {
        for f in &equations {
            if f.nvars() != nvars {
                return Err(ArtinError::Shape);
            }
            if !f.constant_term().is_zero() {
                return Err(ArtinError::Poly(PolyError::Malformed {
                    pos: 0,
                    msg: "germ equation does not vanish at the origin".into(),
                }));
            }
        }
        Ok(GermPresentation { nvars, equations })
    }

    /// The germ of the origin in `A^m` itself.
    pub fn affine(nvars: usize) -> Self {
        GermPresentation { nvars, equations: Vec::new() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn equations(&self) -> &[Poly] {
        &self.equations
    }
}

/// All monomials in `n` variables of total degree `< d`, in graded order.
pub(crate) fn monomials_below(n: usize, d: u64) -> Vec<Monomial> {
    let mut out = Vec::new();
    fn rec(n: usize, left: u64, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if cur.len() == n {
            out.push(Monomial(cur.clone()));
            return;
        }
        for e in 0..=left {
            cur.push(e as u32);
            rec(n, left - e, cur, out);
            cur.pop();
        }
    }
    if d > 0 {
        rec(n, d - 1, &mut Vec::new(), &mut out);
    }
    out.sort();
    out
}

/// Length of `k[x]/((f_1..f_s) + m^n)`.
pub fn germ_jet_length(germ: &GermPresentation, n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let field = germ.equations.first().map_or(Field::Rationals, Poly::field);
    let basis = monomials_below(germ.nvars, n);
    let mut rows = Vec::new();
    for f in &germ.equations {
        let Some(d) = f.min_degree() else { continue };
        if d >= n {
            continue;
        }
        for mu in monomials_below(germ.nvars, n - d) {
            let mut row = vec![BigRational::zero(); basis.len()];
            for (m, c) in f.terms() {
                let prod = m.mul(&mu).expect("small exponents");
                if prod.degree() < n {
                    let idx = basis.binary_search(&prod).expect("monomial below n");
                    row[idx] = c.clone();
                }
            }
            rows.push(row);
        }
    }
    let rank = if rows.is_empty() { 0 } else { linalg::row_reduce(field, &mut rows) };
    (basis.len() - rank) as u64
}

/// Eventually linear behaviour `j^n = e n + b` of jet lengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertData {
    /// Multiplicity (slope).
    pub e: i64,
    pub b: i64,
    /// First `n` from which consecutive differences equal `e`.
    pub start: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HilbertOutcome {
    Linear(HilbertData),
    /// No two trailing differences agree within the window; retry with a larger bound.
    NotYetLinear { lengths: Vec<u64> },
}

pub fn hilbert_data(germ: &GermPresentation, n_max: u64) -> HilbertOutcome {
    let n_max = n_max.max(3);
    let lengths: Vec<u64> = (0..=n_max).map(|n| germ_jet_length(germ, n)).collect();
    hilbert_from_lengths(&lengths)
}

pub(crate) fn hilbert_from_lengths(lengths: &[u64]) -> HilbertOutcome {
    let n_max = lengths.len() - 1;
    let diff = |k: usize| lengths[k] as i64 - lengths[k - 1] as i64;
    let e = diff(n_max);
    let mut start = n_max;
    while start > 1 && diff(start - 1) == e {
        start -= 1;
    }
    if start == n_max {
        return HilbertOutcome::NotYetLinear { lengths: lengths.to_vec() };
    }
    let b = lengths[n_max] as i64 - e * n_max as i64;
    HilbertOutcome::Linear(HilbertData { e, b, start: start as u64 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    #[test]
    fn truncated_cube() {
        let z3 = truncated(3, Field::Rationals).unwrap();
        assert_eq!(z3.len(), 3);
        assert_eq!(z3.labels(), &["1", "xi", "xi^2"]);
        assert!(z3.constant(1, 2, 0).is_zero() && z3.constant(1, 2, 1).is_zero());
        assert!(z3.constant(1, 2, 2).is_zero());
        assert!(z3.constant(1, 1, 2).is_one());
    }

    #[test]
    fn bidual_numbers() {
        let r = monomial_quotient(&["xi", "zeta"], &[vec![2, 0], vec![0, 2]], Field::Rationals)
            .unwrap();
        assert_eq!(r.labels(), &["1", "xi", "zeta", "xi*zeta"]);
        assert!(r.constant(1, 2, 3).is_one());
        let k = truncated(1, Field::Rationals).unwrap();
        assert_eq!(k.len(), 1);
    }

    #[test]
    fn rejects_infinite_length() {
        let e = monomial_quotient(&["x", "y"], &[vec![2, 0], vec![1, 1]], Field::Rationals);
        assert_eq!(e, Err(ArtinError::NotPrimary(1)));
    }

    #[test]
    fn rejects_bad_tables() {
        let q = |v: i64| BigRational::from_integer(v.into());
        // a^2 = b, a*b = a, b^2 = 0: (a a) b = 0 but a (a b) = b
        let labels = vec!["1".to_string(), "a".into(), "b".into()];
        let mut t = vec![vec![vec![q(0); 3]; 3]; 3];
        for i in 0..3 {
            t[0][i][i] = q(1);
            t[i][0][i] = q(1);
        }
        t[1][1][2] = q(1);
        t[1][2][1] = q(1);
        t[2][1][1] = q(1);
        let unit = vec![q(1), q(0), q(0)];
        let r = ArtinAlgebra::new(labels.clone(), Field::Rationals, t.clone(), unit.clone(), false);
        assert!(matches!(r, Err(ArtinError::NotAssociative(..))));
        t[2][1][1] = q(2);
        let r = ArtinAlgebra::new(labels, Field::Rationals, t, unit, false);
        assert!(matches!(r, Err(ArtinError::NotCommutative(1, 2))));
    }

    #[test]
    fn sums() {
        let z2 = truncated(2, Field::Rationals).unwrap();
        let z3 = truncated(3, Field::Rationals).unwrap();
        let k = truncated(1, Field::Rationals).unwrap();
        assert_eq!(direct_sum(&z2, &z2).unwrap().len(), 4);
        let kk = direct_sum(&k, &k).unwrap();
        assert_eq!(kk.len(), 2);
        assert!(kk.constant(0, 1, 0).is_zero() && kk.constant(0, 1, 1).is_zero());
        assert!(kk.constant(0, 0, 0).is_one() && kk.constant(1, 1, 1).is_one());
        let s = direct_sum(&z2, &z3).unwrap();
        assert_eq!(s.len(), 5);
        assert!(!s.is_local());
        assert_eq!(s.blocks(), &[2, 3]);
    }

    #[test]
    fn prefixes_are_quotients() {
        let algebras = vec![
            truncated(4, Field::Rationals).unwrap(),
            monomial_quotient(&["a", "b"], &[vec![2, 0], vec![0, 2]], Field::Rationals).unwrap(),
            monomial_quotient(&["a", "b"], &[vec![3, 0], vec![1, 1], vec![0, 2]], Field::Rationals)
                .unwrap(),
            monomial_quotient(&["a", "b", "c"], &[vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2]], Field::Rationals)
                .unwrap(),
        ];
        for alg in algebras {
            for m in 1..=alg.len() {
                // tail is an ideal: tail * anything stays in the tail
                for a in m..alg.len() {
                    for b in 0..alg.len() {
                        for g in 0..m {
                            assert!(alg.constant(a, b, g).is_zero());
                        }
                    }
                }
                assert!(alg.truncate(m).is_ok(), "prefix {m} of {:?}", alg.labels());
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let r = monomial_quotient(&["xi", "zeta"], &[vec![2, 0], vec![0, 2]], Field::Rationals)
            .unwrap();
        let j = serde_json::to_string(&r.to_json()).unwrap();
        let back = ArtinAlgebra::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(back, r);
    }

    fn cusp() -> GermPresentation {
        let f = parse_poly("x^2-y^3", &["x", "y"], Field::Rationals).unwrap();
        GermPresentation::new(2, vec![f]).unwrap()
    }

    #[test]
    fn jet_lengths() {
        let line = GermPresentation::affine(1);
        let plane = GermPresentation::affine(2);
        for n in 0..6 {
            assert_eq!(germ_jet_length(&line, n), n);
            assert_eq!(germ_jet_length(&plane, n), n * (n + 1) / 2);
        }
        let lens: Vec<u64> = (0..6).map(|n| germ_jet_length(&cusp(), n)).collect();
        assert_eq!(lens, vec![0, 1, 3, 5, 7, 9]);
    }

    #[test]
    fn hilbert() {
        let line = GermPresentation::affine(1);
        assert_eq!(
            hilbert_data(&line, 6),
            HilbertOutcome::Linear(HilbertData { e: 1, b: 0, start: 1 })
        );
        assert_eq!(
            hilbert_data(&cusp(), 6),
            HilbertOutcome::Linear(HilbertData { e: 2, b: -1, start: 2 })
        );
        assert!(matches!(
            hilbert_data(&GermPresentation::affine(2), 8),
            HilbertOutcome::NotYetLinear { .. }
        ));
    }

    #[test]
    fn germ_must_pass_through_origin() {
        let f = parse_poly("x+1", &["x"], Field::Rationals).unwrap();
        assert!(GermPresentation::new(1, vec![f]).is_err());
    }
}
