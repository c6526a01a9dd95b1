//! Arc equations of Zariski formulae along Artinian algebras and directed
//! arc systems along tagged tuples.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::artin::ArtinAlgebra;
use crate::error::{ArtinError, PolyError};
use crate::field::Field;
use crate::poly::Poly;
use crate::rationalizer::TaggedTuple;

/// A conjunction of equations `f = 0` in named variables, some of which are
/// declared invertible (tagged).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZariskiFormula {
    names: Vec<String>,
    field: Field,
    equations: Vec<Poly>,
    tagged: Vec<bool>,
}

impl ZariskiFormula {
    pub fn new(
        names: Vec<String>,
        field: Field,
        equations: Vec<Poly>,
        tagged: Vec<bool>,
    ) -> Result<Self, PolyError> {
        if tagged.len() != names.len()
            || equations.iter().any(|f| f.nvars() != names.len() || f.field() != field)
        {
            return Err(PolyError::RingMismatch);
        }
        Ok(ZariskiFormula { names, field, equations, tagged })
    }

    pub fn untagged(names: Vec<String>, field: Field, equations: Vec<Poly>) -> Result<Self, PolyError> {
        let m = names.len();
        ZariskiFormula::new(names, field, equations, vec![false; m])
    }

    /// The formula `x = x` in the given variables.
    pub fn lefschetz(names: Vec<String>, field: Field) -> Self {
        let m = names.len();
        ZariskiFormula { names, field, equations: Vec::new(), tagged: vec![false; m] }
    }

    /// The formula `1 = 0`.
    pub fn empty_scheme(names: Vec<String>, field: Field) -> Self {
        let m = names.len();
        ZariskiFormula {
            equations: vec![Poly::one(m, field)],
            names,
            field,
            tagged: vec![false; m],
        }
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn equations(&self) -> &[Poly] {
        &self.equations
    }

    pub fn tagged(&self) -> &[bool] {
        &self.tagged
    }

    pub fn is_tagged(&self) -> bool {
        self.tagged.iter().any(|&t| t)
    }

    /// Names with a trailing `*` on tagged variables.
    pub fn display_names(&self) -> Vec<String> {
        self.names
            .iter()
            .zip(&self.tagged)
            .map(|(n, &t)| if t { format!("{n}*") } else { n.clone() })
            .collect()
    }

    /// One equation per line.
    pub fn to_text(&self) -> String {
        let names = self.display_names();
        self.equations.iter().map(|f| f.to_text(&names)).collect::<Vec<_>>().join("\n")
    }

    /// `phi x psi` in disjoint variables.
    pub fn product(&self, other: &ZariskiFormula) -> Result<ZariskiFormula, PolyError> {
        if self.field != other.field {
            return Err(PolyError::RingMismatch);
        }
        let (a, b) = (self.nvars(), other.nvars());
        let left: Vec<usize> = (0..a).collect();
        let right: Vec<usize> = (a..a + b).collect();
        let names = fresh_names(&self.names, &other.names);
        let equations = self
            .equations
            .iter()
            .map(|f| f.remap(a + b, &left))
            .chain(other.equations.iter().map(|g| g.remap(a + b, &right)))
            .collect();
        let tagged = self.tagged.iter().chain(&other.tagged).copied().collect();
        ZariskiFormula::new(names, self.field, equations, tagged)
    }

    /// The same formula with coefficients reduced into another field.
    pub fn to_field(&self, field: Field) -> Result<ZariskiFormula, PolyError> {
        let equations = self.equations.iter().map(|f| f.to_field(field)).collect::<Result<_, _>>()?;
        ZariskiFormula::new(self.names.clone(), field, equations, self.tagged.clone())
    }
}

fn fresh_names(left: &[String], right: &[String]) -> Vec<String> {
    let mut names: Vec<String> = left.to_vec();
    for n in right {
        let mut cand = n.clone();
        while names.contains(&cand) {
            cand.push('_');
        }
        names.push(cand);
    }
    names
}

/// Index of arc variable `(basis element k, base variable j)`.
pub fn arc_var(m: usize, k: usize, j: usize) -> usize {
    k * m + j
}

fn arc_names(names: &[String], l: usize) -> Vec<String> {
    (0..l).flat_map(|k| names.iter().map(move |n| format!("{n}_{k}"))).collect()
}

/// True when the structure constants are those of `k[xi]/(xi^l)` in the basis `1, xi, .., xi^(l-1)`.
pub fn is_truncated_basis(r: &ArtinAlgebra) -> bool {
    let l = r.len();
    (0..l).all(|a| {
        (0..l).all(|b| {
            (0..l).all(|g| {
                let expect = a + b == g;
                if expect {
                    r.constant(a, b, g).is_one()
                } else {
                    r.constant(a, b, g).is_zero()
                }
            })
        })
    })
}

/// Arc formula of `phi` along `R` in `l m` variables `{name}_{k}`.
///
/// Each equation contributes its nonzero coordinates in the basis of `R`,
/// in basis order. Tagged variables of `phi` tag their coordinate-0 arc
/// variable, which requires `R` to be local.
pub fn arc_formula(phi: &ZariskiFormula, r: &ArtinAlgebra) -> Result<ZariskiFormula, ArtinError> {
    let field = phi.field;
    if r.field() != field {
        return Err(ArtinError::FieldMismatch);
    }
    if phi.is_tagged() && !r.is_local() {
        return Err(ArtinError::NotLocal);
    }
    let m = phi.nvars();
    let l = r.len();
    let coords = if is_truncated_basis(r) {
        linear_coordinates(phi, l)
    } else {
        generic_coordinates(phi, r)
    };
    let equations = coords.into_iter().flatten().filter(|p| !p.is_zero()).collect();
    let mut tagged = vec![false; l * m];
    for j in 0..m {
        tagged[arc_var(m, 0, j)] = phi.tagged[j];
    }
    Ok(ZariskiFormula::new(arc_names(&phi.names, l), field, equations, tagged)?)
}

/// Coordinates of every equation, computed with the structure constants.
pub fn generic_coordinates(phi: &ZariskiFormula, r: &ArtinAlgebra) -> Vec<Vec<Poly>> {
    let (m, l, field) = (phi.nvars(), r.len(), phi.field);
    let n = l * m;
    let unit: Vec<Poly> = r.unit().iter().map(|c| Poly::constant(n, field, c.clone())).collect();
    let generic: Vec<Vec<Poly>> = (0..m)
        .map(|j| (0..l).map(|k| Poly::var(n, field, arc_var(m, k, j))).collect())
        .collect();
    phi.equations
        .iter()
        .map(|f| {
            let mut acc = vec![Poly::zero(n, field); l];
            for (mono, c) in f.terms() {
                let mut t: Vec<Poly> = unit.iter().map(|u| u.scale(c)).collect();
                for (j, &e) in mono.0.iter().enumerate() {
                    for _ in 0..e {
                        t = r.mul_poly(&t, &generic[j]);
                    }
                }
                for (a, p) in acc.iter_mut().zip(&t) {
                    *a = a.add(p);
                }
            }
            acc
        })
        .collect()
}

/// Coordinates along `k[xi]/(xi^l)` via truncated power series.
pub fn linear_coordinates(phi: &ZariskiFormula, l: usize) -> Vec<Vec<Poly>> {
    let (m, field) = (phi.nvars(), phi.field);
    let n = l * m;
    let series: Vec<Vec<Poly>> = (0..m)
        .map(|j| (0..l).map(|k| Poly::var(n, field, arc_var(m, k, j))).collect())
        .collect();
    phi.equations.iter().map(|f| eval_series(f, &series, l, n)).collect()
}

fn series_mul(a: &[Poly], b: &[Poly], len: usize) -> Vec<Poly> {
    let (n, field) = (a[0].nvars(), a[0].field());
    let mut out = vec![Poly::zero(n, field); len];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            if !y.is_zero() {
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
    }
    out
}

/// `f(s_1, .., s_m)` truncated at `xi^len`, where `s_j` are series in `n` variables.
fn eval_series(f: &Poly, series: &[Vec<Poly>], len: usize, n: usize) -> Vec<Poly> {
    let field = f.field();
    let mut powers: Vec<Vec<Vec<Poly>>> = series
        .iter()
        .map(|s| {
            let mut one = vec![Poly::zero(n, field); len];
            if len > 0 {
                one[0] = Poly::one(n, field);
            }
            vec![one, s.clone()]
        })
        .collect();
    let mut out = vec![Poly::zero(n, field); len];
    for (mono, c) in f.terms() {
        let mut t = vec![Poly::zero(n, field); len];
        if len == 0 {
            continue;
        }
        t[0] = Poly::constant(n, field, c.clone());
        for (j, &e) in mono.0.iter().enumerate() {
            let e = e as usize;
            while powers[j].len() <= e {
                let next = series_mul(powers[j].last().unwrap(), &series[j], len);
                powers[j].push(next);
            }
            if e > 0 {
                t = series_mul(&t, &powers[j][e], len);
            }
        }
        for (o, p) in out.iter_mut().zip(&t) {
            *o = o.add(p);
        }
    }
    out
}

/// A power series in `xi` truncated at `xi^n`; `coeff[k]` is the `xi^k` coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XiSeries {
    pub n: usize,
    pub coeff: Vec<Poly>,
}

/// Materialized equations of the `n`-th directed arc scheme along `theta`.
///
/// Coordinate `j` of the arc is `xi^(v theta_j) * (z_j0 + z_j1 xi + ..)`; the
/// variable `z_ji` is named `{x_j}_{v theta_j + i}` after the arc level it
/// occupies. Variables are sorted by that level, then by base index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedArcSystem {
    pub theta: TaggedTuple,
    pub n: usize,
    /// `(base index, arc level)` of each variable.
    pub vars: Vec<(usize, usize)>,
    /// One truncated series per input equation.
    pub series: Vec<XiSeries>,
    /// Set when a tagged coordinate vanishes to order `>= n`.
    pub empty: bool,
    pub formula: ZariskiFormula,
}

impl DirectedArcSystem {
    /// Variables first visible at arc level `k`.
    pub fn vars_at_level(&self, k: usize) -> Vec<usize> {
        (0..self.vars.len()).filter(|&v| self.vars[v].1 == k).collect()
    }
}

/// Directed arc system of `f_1 = .. = f_s = 0` along `theta` at level `n`.
pub fn directed_arc_system(
    equations: &[Poly],
    names: &[String],
    theta: &TaggedTuple,
    n: usize,
) -> Result<DirectedArcSystem, PolyError> {
    let m = names.len();
    if theta.len() != m || equations.iter().any(|f| f.nvars() != m) {
        return Err(PolyError::RingMismatch);
    }
    let field = equations.first().map_or(Field::Rationals, Poly::field);
    let v = theta.values();
    let empty = (0..m).any(|j| theta.is_tagged(j) && v[j] as usize >= n);
    let mut vars: Vec<(usize, usize)> = (0..m)
        .flat_map(|j| (v[j] as usize..n.max(v[j] as usize)).map(move |lev| (j, lev)))
        .collect();
    vars.sort_by_key(|&(j, lev)| (lev, j));
    let nv = vars.len();
    let var_names: Vec<String> = vars.iter().map(|&(j, lev)| format!("{}_{lev}", names[j])).collect();
    let tagged: Vec<bool> = vars.iter().map(|&(j, lev)| theta.is_tagged(j) && lev == v[j] as usize).collect();
    let arcs: Vec<Vec<Poly>> = (0..m)
        .map(|j| {
            (0..n)
                .map(|lev| match vars.iter().position(|&x| x == (j, lev)) {
                    Some(idx) => Poly::var(nv, field, idx),
                    None => Poly::zero(nv, field),
                })
                .collect()
        })
        .collect();
    let series: Vec<XiSeries> = equations
        .iter()
        .map(|f| XiSeries { n, coeff: eval_series(f, &arcs, n, nv) })
        .collect();
    let mut eqs: Vec<Poly> = series.iter().flat_map(|s| s.coeff.iter().cloned()).filter(|p| !p.is_zero()).collect();
    if empty {
        eqs = vec![Poly::one(nv, field)];
    }
    let formula = ZariskiFormula::new(var_names, field, eqs, tagged)?;
    Ok(DirectedArcSystem { theta: theta.clone(), n, vars, series, empty, formula })
}

/// `phi ⊔ psi` in one extra variable `z`: `(1-z) f`, `z g`, `z^2 - z`.
pub fn disjoint_union_formula(phi: &ZariskiFormula, psi: &ZariskiFormula) -> Result<ZariskiFormula, PolyError> {
    if phi.nvars() != psi.nvars() || phi.field != psi.field || phi.is_tagged() || psi.is_tagged() {
        return Err(PolyError::RingMismatch);
    }
    let m = phi.nvars();
    let field = phi.field;
    let map: Vec<usize> = (0..m).collect();
    let z = Poly::var(m + 1, field, m);
    let one_minus_z = Poly::one(m + 1, field).sub(&z);
    let mut equations: Vec<Poly> = phi.equations.iter().map(|f| one_minus_z.mul(&f.remap(m + 1, &map))).collect();
    equations.extend(psi.equations.iter().map(|g| z.mul(&g.remap(m + 1, &map))));
    equations.push(z.mul(&z).sub(&z));
    let mut zname = "z".to_string();
    while phi.names.contains(&zname) {
        zname.push('_');
    }
    let mut names = phi.names.clone();
    names.push(zname);
    ZariskiFormula::untagged(names, field, equations)
}

/// Evaluates every equation at a point; tagged variables must be nonzero.
pub fn satisfies(phi: &ZariskiFormula, point: &[BigRational]) -> bool {
    point.iter().zip(&phi.tagged).all(|(x, &t)| !t || !x.is_zero())
        && phi.equations.iter().all(|f| f.eval(point).is_zero())
}
