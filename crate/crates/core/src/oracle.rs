//! Brute-force point counts over prime fields, used to check every symbolic
//! result independently.

use std::collections::{BTreeMap, HashMap};
use std::ops::RangeInclusive;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arcgen::ZariskiFormula;
use crate::classring::{ClassExpr, ClassGenerator, Coefficient, RationalSeries};
use crate::error::OracleError;
use crate::field::{is_prime, Field};
use crate::poly::Poly;
use crate::rationalizer::TaggedTuple;

/// Polynomial with residues mod `p` as a list of `(coefficient, [(variable, exponent)])`.
#[derive(Debug, Clone)]
struct Compiled {
    terms: Vec<(u64, Vec<(usize, u32)>)>,
}

impl Compiled {
    fn new(f: &Poly, p: u64) -> Result<Self, OracleError> {
        let field = Field::prime(p)?;
        let mut terms = Vec::new();
        for (m, c) in f.terms() {
            let c = field.residue(c).ok_or(OracleError::NotPrime(p))?;
            if c == 0 {
                continue;
            }
            let factors = m.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (i, e)).collect();
            terms.push((c, factors));
        }
        Ok(Compiled { terms })
    }

    fn eval(&self, x: &[u64], p: u64) -> u64 {
        let mut acc = 0u64;
        for (c, factors) in &self.terms {
            let mut t = *c;
            for &(i, e) in factors {
                for _ in 0..e {
                    t = t * x[i] % p;
                }
            }
            acc = (acc + t) % p;
        }
        acc
    }
}

fn check_prime(q: u64) -> Result<u64, OracleError> {
    if q >= 1 << 31 || !is_prime(q) {
        return Err(OracleError::NotPrime(q));
    }
    Ok(q)
}

/// Number of points of `phi` in `F_q^m`, tagged coordinates ranging over units.
pub fn count_points(phi: &ZariskiFormula, q: u64) -> Result<BigUint, OracleError> {
    let p = check_prime(q)?;
    let eqs = phi.equations().iter().map(|f| Compiled::new(f, p)).collect::<Result<Vec<_>, _>>()?;
    let m = phi.nvars();
    let mut used = vec![false; m];
    for f in phi.equations() {
        for v in f.support() {
            used[v] = true;
        }
    }
    let lo = |i: usize| u64::from(phi.tagged()[i]);
    let mut free = BigUint::one();
    for i in (0..m).filter(|&i| !used[i]) {
        free *= p - lo(i);
    }
    let active: Vec<usize> = (0..m).filter(|&i| used[i]).collect();
    let mut x = vec![0u64; m];
    for &i in &active {
        x[i] = lo(i);
    }
    let mut count = 0u64;
    loop {
        if eqs.iter().all(|f| f.eval(&x, p) == 0) {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == active.len() {
                return Ok(free * count);
            }
            let i = active[k];
            x[i] += 1;
            if x[i] < p {
                break;
            }
            x[i] = lo(i);
            k += 1;
        }
    }
}

/// Counts of `Parc_k` for `k = 0..=n`, with per-level search statistics.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub q: u64,
    pub n: usize,
    /// `counts[k]` is the number of `F_q`-points at level `k`; lower bounds when incomplete.
    pub counts: Vec<BigUint>,
    /// Search nodes visited at each depth.
    pub nodes: Vec<u64>,
    pub complete: bool,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Settings for [`count_arc_points_with`].
#[derive(Debug, Clone, Copy)]
pub struct SearchLimits {
    /// Abort after this many search nodes; the report is then marked incomplete.
    pub node_budget: u64,
    /// Split the search over the rayon pool.
    pub parallel: bool,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { node_budget: u64::MAX, parallel: true }
    }
}

/// Counts of the directed arc schemes `Parc_k^theta` (plain arcs for `theta = None`)
/// of `f_1 = .. = f_s = 0` for all `k <= n`, by level-extension search.
pub fn count_arc_points(
    equations: &[Poly],
    theta: Option<&TaggedTuple>,
    q: u64,
    n: usize,
) -> Result<CountReport, OracleError> {
    count_arc_points_with(equations, theta, q, n, SearchLimits::default())
}

struct Ctx {
    p: u64,
    m: usize,
    n: usize,
    /// `eqs[e]`: list of `(coefficient, chain of (variable, exponent))`.
    eqs: Vec<Compiled>,
    /// `derivs[e][j]` is `d f_e / d x_j`.
    derivs: Vec<Vec<Compiled>>,
    maxdeg: Vec<usize>,
    /// Active (enumerated) variables first visible at each level, as `(base, lower bound)`.
    level_vars: Vec<Vec<(usize, u64)>>,
    /// Depth from which all remaining levels enter linearly and are counted by rank.
    tail_from: usize,
    budget: u64,
    visited: AtomicU64,
    aborted: AtomicBool,
}

#[derive(Clone)]
struct Worker {
    /// `x[j][k]`: arc coefficient of `xi^k` in coordinate `j`.
    x: Vec<Vec<u64>>,
    /// `pw[j][e][k]`: coefficient `k` of `x_j^e`.
    pw: Vec<Vec<Vec<u64>>>,
    /// `chain[eq][term][t][k]`: coefficient `k` of the product of the first `t + 1` factors.
    chain: Vec<Vec<Vec<Vec<u64>>>>,
    /// `lin[eq][v]`: coefficient of the `v`-th new variable, fixed once level 0 is set.
    lin: Vec<Vec<Vec<u64>>>,
    /// Solutions found at each depth.
    found: Vec<u128>,
    /// Nodes explicitly visited at each depth.
    searched: Vec<u64>,
    memo: HashMap<Vec<u64>, u64>,
}

impl Worker {
    fn new(ctx: &Ctx) -> Self {
        let n = ctx.n.max(1);
        Worker {
            x: vec![vec![0; n]; ctx.m],
            pw: (0..ctx.m)
                .map(|j| {
                    let mut v = vec![vec![0; n]; ctx.maxdeg[j] + 1];
                    v[0][0] = 1;
                    v
                })
                .collect(),
            chain: ctx
                .eqs
                .iter()
                .map(|f| f.terms.iter().map(|(_, fs)| vec![vec![0; n]; fs.len()]).collect())
                .collect(),
            lin: Vec::new(),
            found: vec![0; ctx.n + 1],
            searched: vec![0; ctx.n + 1],
            memo: HashMap::new(),
        }
    }

    /// Recomputes all products at level `k` and returns the `xi^k` coefficient of each equation.
    fn level(&mut self, ctx: &Ctx, k: usize) -> Vec<u64> {
        let p = ctx.p;
        for j in 0..ctx.m {
            let d = ctx.maxdeg[j];
            if d == 0 {
                continue;
            }
            self.pw[j][1][k] = self.x[j][k];
            for e in 2..=d {
                let mut acc = 0u64;
                for i in 0..=k {
                    let xi = self.x[j][i];
                    if xi != 0 {
                        acc = (acc + self.pw[j][e - 1][k - i] * xi) % p;
                    }
                }
                self.pw[j][e][k] = acc;
            }
        }
        let mut out = Vec::with_capacity(ctx.eqs.len());
        for (ei, f) in ctx.eqs.iter().enumerate() {
            let mut acc = 0u64;
            for (ti, (c, factors)) in f.terms.iter().enumerate() {
                if factors.is_empty() {
                    if k == 0 {
                        acc = (acc + c) % p;
                    }
                    continue;
                }
                let (j0, e0) = factors[0];
                let chain = &mut self.chain[ei][ti];
                chain[0][k] = self.pw[j0][e0 as usize][k];
                for t in 1..factors.len() {
                    let (j, e) = factors[t];
                    let pj = &self.pw[j][e as usize];
                    let mut s = 0u64;
                    for i in 0..=k {
                        let a = chain[t - 1][i];
                        if a != 0 {
                            s = (s + a * pj[k - i]) % p;
                        }
                    }
                    chain[t][k] = s;
                }
                acc = (acc + c * chain[factors.len() - 1][k]) % p;
            }
            out.push(acc);
        }
        out
    }

    fn level0_values(&self, ctx: &Ctx) -> Vec<u64> {
        (0..ctx.m).map(|j| self.x[j][0]).collect()
    }

    /// Fixes the linear coefficients of the new variables once level 0 is assigned.
    fn set_linear(&mut self, ctx: &Ctx) {
        let x0 = self.level0_values(ctx);
        self.lin = (0..=ctx.n)
            .map(|k| {
                let vars = ctx.level_vars.get(k).map_or(&[][..], |v| &v[..]);
                ctx.derivs
                    .iter()
                    .map(|d| vars.iter().map(|&(j, _)| d[j].eval(&x0, ctx.p)).collect())
                    .collect()
            })
            .collect();
        self.memo.clear();
    }

    fn tick(&self, ctx: &Ctx) -> bool {
        if ctx.visited.fetch_add(1, Ordering::Relaxed) >= ctx.budget {
            ctx.aborted.store(true, Ordering::Relaxed);
        }
        !ctx.aborted.load(Ordering::Relaxed)
    }

    /// Assignments of the new variables at level `k`, each reported through `visit`.
    fn for_each_child(&mut self, ctx: &Ctx, k: usize, mut visit: impl FnMut(&mut Worker)) {
        let vars = ctx.level_vars[k].clone();
        let p = ctx.p;
        if k == 0 {
            odometer(&vars, p, |z| {
                for (&(j, _), &v) in vars.iter().zip(z) {
                    self.x[j][0] = v;
                }
                if self.level(ctx, 0).iter().all(|&c| c == 0) {
                    self.set_linear(ctx);
                    visit(self);
                }
            });
            return;
        }
        for &(j, _) in &vars {
            self.x[j][k] = 0;
        }
        let a = self.level(ctx, k);
        let lin = self.lin[k].clone();
        odometer(&vars, p, |z| {
            let ok = a.iter().zip(&lin).all(|(&ai, ci)| {
                let mut s = ai;
                for (c, v) in ci.iter().zip(z) {
                    s = (s + c * v) % p;
                }
                s == 0
            });
            if ok {
                for (&(j, _), &v) in vars.iter().zip(z) {
                    self.x[j][k] = v;
                }
                self.level(ctx, k);
                visit(self);
            }
        });
    }

    /// Number of valid assignments at level `k`, without descending.
    fn count_children(&mut self, ctx: &Ctx, k: usize) -> u64 {
        if k == 0 {
            let mut c = 0;
            self.for_each_child(ctx, 0, |_| c += 1);
            return c;
        }
        let vars = &ctx.level_vars[k];
        for &(j, _) in vars {
            self.x[j][k] = 0;
        }
        let a = self.level(ctx, k);
        if let Some(&c) = self.memo.get(&a) {
            return c;
        }
        let lin = &self.lin[k];
        let p = ctx.p;
        let mut c = 0;
        odometer(vars, p, |z| {
            let ok = a.iter().zip(lin).all(|(&ai, ci)| {
                let mut s = ai;
                for (cc, v) in ci.iter().zip(z) {
                    s = (s + cc * v) % p;
                }
                s == 0
            });
            c += u64::from(ok);
        });
        self.memo.insert(a, c);
        c
    }

    /// Explores below a node at depth `k`, counting nodes at depths `> k`.
    fn descend(&mut self, ctx: &Ctx, k: usize) {
        if k >= ctx.n || !self.tick(ctx) {
            return;
        }
        self.searched[k] += 1;
        if k == ctx.tail_from {
            self.tail(ctx, k);
            return;
        }
        if k + 1 == ctx.n {
            self.found[k + 1] += u128::from(self.count_children(ctx, k));
            return;
        }
        self.for_each_child(ctx, k, |w| {
            w.found[k + 1] += 1;
            w.descend(ctx, k + 1);
        });
    }

    /// Counts all extensions of a node at depth `h` with `2h >= n`.
    ///
    /// A variable at level `l >= h` meets another such variable only in
    /// coefficients `>= 2h`, so below `n` the coefficient `c` is affine in them:
    /// `f(x)_c = A_c + sum z_{j,l} (d_j f(x))_{c-l}`.
    fn tail(&mut self, ctx: &Ctx, h: usize) {
        let (n, p) = (ctx.n, ctx.p);
        for xj in self.x.iter_mut() {
            xj[h..n].iter_mut().for_each(|v| *v = 0);
        }
        let a: Vec<Vec<u64>> = (h..n).map(|c| self.level(ctx, c)).collect();
        let len = n - h;
        let lower: Vec<&[u64]> = self.x.iter().map(|xj| &xj[..len]).collect();
        let d: Vec<Vec<Vec<u64>>> = ctx
            .derivs
            .iter()
            .map(|de| de.iter().map(|g| series_eval(g, &lower, len, p)).collect())
            .collect();
        let mut cols: Vec<(usize, usize)> = Vec::new();
        for k in h + 1..=n {
            let c_new = k - 1;
            cols.extend(ctx.level_vars[c_new].iter().map(|&(j, _)| (j, c_new)));
            let mut rows = Vec::new();
            for c in h..k {
                for (e, de) in d.iter().enumerate() {
                    let mut row: Vec<u64> =
                        cols.iter().map(|&(j, l)| if l <= c { de[j][c - l] } else { 0 }).collect();
                    row.push((p - a[c - h][e]) % p);
                    rows.push(row);
                }
            }
            match affine_rank(&mut rows, cols.len(), p) {
                Some(rank) => {
                    let free = (cols.len() - rank) as u32;
                    self.found[k] += u128::from(p).pow(free);
                }
                None => return,
            }
        }
    }
}

/// Truncated power series of `g` evaluated at the series `xs`.
fn series_eval(g: &Compiled, xs: &[&[u64]], len: usize, p: u64) -> Vec<u64> {
    let mut out = vec![0u64; len];
    for (c, factors) in &g.terms {
        let mut t = vec![0u64; len];
        t[0] = *c;
        for &(j, e) in factors {
            for _ in 0..e {
                let mut u = vec![0u64; len];
                for (i, &ti) in t.iter().enumerate().filter(|(_, &ti)| ti != 0) {
                    for (k, &xk) in xs[j].iter().enumerate().take(len - i) {
                        u[i + k] = (u[i + k] + ti * xk) % p;
                    }
                }
                t = u;
            }
        }
        for (o, v) in out.iter_mut().zip(&t) {
            *o = (*o + v) % p;
        }
    }
    out
}

/// Rank of the coefficient part of an augmented system mod `p`, or `None` if inconsistent.
fn affine_rank(rows: &mut [Vec<u64>], ncols: usize, p: u64) -> Option<usize> {
    let inv = |a: u64| {
        let (mut r, mut b, mut e) = (1u64, a, p - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let s = inv(rows[rank][col]);
        rows[rank].iter_mut().for_each(|v| *v = *v * s % p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let f = row[col];
                for (v, &pv) in row.iter_mut().zip(&pivot) {
                    *v = (*v + (p - f) * pv) % p;
                }
            }
        }
        rank += 1;
    }
    if rows[rank..].iter().any(|r| r[ncols] != 0) {
        return None;
    }
    Some(rank)
}

/// Calls `f` on every assignment of the variables, each ranging over `[lower, p)`.
fn odometer(vars: &[(usize, u64)], p: u64, mut f: impl FnMut(&[u64])) {
    let mut z: Vec<u64> = vars.iter().map(|&(_, lo)| lo).collect();
    if z.iter().any(|&v| v >= p) {
        return;
    }
    loop {
        f(&z);
        let mut i = 0;
        loop {
            if i == z.len() {
                return;
            }
            z[i] += 1;
            if z[i] < p {
                break;
            }
            z[i] = vars[i].1;
            i += 1;
        }
    }
}

pub fn count_arc_points_with(
    equations: &[Poly],
    theta: Option<&TaggedTuple>,
    q: u64,
    n: usize,
    limits: SearchLimits,
) -> Result<CountReport, OracleError> {
    let start = Instant::now();
    let p = check_prime(q)?;
    let m = equations.first().map_or_else(|| theta.map_or(0, TaggedTuple::len), Poly::nvars);
    let zero = TaggedTuple::zero(m);
    let theta = theta.unwrap_or(&zero);
    if theta.len() != m || equations.iter().any(|f| f.nvars() != m) {
        return Err(OracleError::Poly(crate::error::PolyError::RingMismatch));
    }
    let eqs = equations.iter().map(|f| Compiled::new(f, p)).collect::<Result<Vec<_>, _>>()?;
    let derivs = equations
        .iter()
        .map(|f| (0..m).map(|j| Compiled::new(&f.derive(j), p)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    let v = theta.values();
    let mut maxdeg = vec![0usize; m];
    for f in &eqs {
        for (_, fs) in &f.terms {
            for &(j, e) in fs {
                maxdeg[j] = maxdeg[j].max(e as usize);
            }
        }
    }
    // a variable at arc level L of coordinate j first shows up in the xi^(L + gap_j) coefficient
    let mut gap: Vec<Option<u64>> = vec![None; m];
    for f in equations {
        for (mono, _) in f.terms() {
            let w = mono.weighted_degree(&v);
            for j in mono.support() {
                let g = w - v[j];
                gap[j] = Some(gap[j].map_or(g, |x| x.min(g)));
            }
        }
    }
    let mut level_vars = vec![Vec::new(); n.max(1)];
    // free variables: (arc level, number of values)
    let mut free: Vec<(usize, u64)> = Vec::new();
    for j in 0..m {
        for lev in v[j] as usize..n {
            let tagged = theta.is_tagged(j) && lev == v[j] as usize;
            let lo = u64::from(tagged);
            match gap[j] {
                Some(g) if (lev as u64 + g) < n as u64 => level_vars[lev].push((j, lo)),
                _ => free.push((lev, p - lo)),
            }
        }
    }
    let last_tag = (0..m)
        .filter(|&j| theta.is_tagged(j))
        .map(|j| (j, v[j] as usize))
        .filter(|&(j, l)| l < n && level_vars[l].iter().any(|&(i, lo)| i == j && lo == 1))
        .map(|(_, l)| l)
        .max();
    let tail_from = n.div_ceil(2).max(1).max(last_tag.map_or(0, |t| t + 1));
    let ctx = Ctx {
        p,
        m,
        n,
        eqs,
        derivs,
        maxdeg,
        level_vars,
        tail_from,
        budget: limits.node_budget,
        visited: AtomicU64::new(0),
        aborted: AtomicBool::new(false),
    };
    let mut found = vec![0u128; n + 1];
    let mut searched = vec![0u64; n + 1];
    found[0] = 1;
    fn merge(found: &mut [u128], searched: &mut [u64], w: &Worker) {
        for (a, b) in found.iter_mut().zip(&w.found) {
            *a += b;
        }
        for (a, b) in searched.iter_mut().zip(&w.searched) {
            *a += b;
        }
    }
    if n > 0 && (!limits.parallel || n == 1) {
        let mut w = Worker::new(&ctx);
        w.descend(&ctx, 0);
        merge(&mut found, &mut searched, &w);
    } else if n > 0 {
        // breadth-first until there is enough work to share
        let target = 8 * rayon::current_num_threads().max(1);
        let mut frontier = vec![Worker::new(&ctx)];
        let mut depth = 0;
        while depth + 1 < n && depth < tail_from && frontier.len() < target && !frontier.is_empty() {
            let mut next = Vec::new();
            for mut w in frontier {
                w.searched[depth] += 1;
                merge(&mut found, &mut searched, &w);
                w.for_each_child(&ctx, depth, |c| next.push(c.clone()));
            }
            depth += 1;
            found[depth] = next.len() as u128;
            frontier = next
                .into_iter()
                .map(|mut w| {
                    w.found.iter_mut().for_each(|c| *c = 0);
                    w.searched.iter_mut().for_each(|c| *c = 0);
                    w
                })
                .collect();
        }
        let results: Vec<Worker> = frontier
            .into_par_iter()
            .map(|mut w| {
                w.descend(&ctx, depth);
                w
            })
            .collect();
        for w in &results {
            merge(&mut found, &mut searched, w);
        }
    }
    let first_tag = (0..m).filter(|&j| theta.is_tagged(j)).map(|j| v[j] as usize).max();
    let counts = (0..=n)
        .map(|k| {
            if first_tag.is_some_and(|t| k <= t) {
                return BigUint::zero();
            }
            let mut c = BigUint::from(found[k]);
            for &(lev, size) in &free {
                if lev < k {
                    c *= size;
                }
            }
            c
        })
        .collect();
    Ok(CountReport {
        q,
        n,
        counts,
        nodes: searched,
        complete: !ctx.aborted.load(Ordering::Relaxed),
        elapsed: start.elapsed(),
    })
}

/// Counts by enumerating every tuple of the materialized system, for cross-checks.
pub fn count_arc_points_flat(
    equations: &[Poly],
    names: &[String],
    theta: Option<&TaggedTuple>,
    q: u64,
    n: usize,
) -> Result<BigUint, OracleError> {
    let m = names.len();
    let zero = TaggedTuple::zero(m);
    let sys = crate::arcgen::directed_arc_system(equations, names, theta.unwrap_or(&zero), n)?;
    if sys.empty {
        return Ok(BigUint::zero());
    }
    count_points(&sys.formula.to_field(Field::prime(q)?)?, q)
}

/// Point counts of every generator of `series` at `q`.
pub fn count_generators(series: &RationalSeries, q: u64) -> Result<BTreeMap<ClassGenerator, BigInt>, OracleError> {
    let mut out = BTreeMap::new();
    for g in series.generators() {
        let phi = g.formula_ref().to_field(Field::prime(q)?)?;
        let c = match g.initial_data() {
            None => count_points(&phi, q)?,
            Some((theta, k)) => count_arc_points(phi.equations(), Some(theta), q, k)?.counts[k].clone(),
        };
        out.insert(g, BigInt::from(c));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyRow {
    pub n: usize,
    pub expected: String,
    pub actual: String,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub q: u64,
    pub rows: Vec<VerifyRow>,
    pub first_mismatch: Option<usize>,
    pub all_ok: bool,
}

/// Compares specialized series coefficients with oracle counts `actual[n]` of `[arc_n]`.
pub fn verify_series(
    series: &RationalSeries,
    counts: &BTreeMap<ClassGenerator, BigInt>,
    q: u64,
    n_range: RangeInclusive<usize>,
    actual: &[BigUint],
) -> Result<VerifyReport, OracleError> {
    let mut rows = Vec::new();
    for n in n_range {
        let expected = match series.coefficient(n) {
            Coefficient::Certified(c) => Some(c.specialize(q, counts)?),
            Coefficient::Uncertified => None,
        };
        let actual_n = actual.get(n).map(|a| BigInt::from(a.clone()));
        let ok = matches!((&expected, &actual_n), (Some(e), Some(a)) if e == a);
        rows.push(VerifyRow {
            n,
            expected: expected.map_or_else(|| "uncertified".to_string(), |e| e.to_string()),
            actual: actual_n.map_or_else(|| "missing".to_string(), |a| a.to_string()),
            ok,
        });
    }
    let first_mismatch = rows.iter().find(|r| !r.ok).map(|r| r.n);
    Ok(VerifyReport { q, all_ok: first_mismatch.is_none(), rows, first_mismatch })
}

/// Runs the oracle for `f` and checks `series` on `n_range`.
pub fn verify_against_oracle(
    series: &RationalSeries,
    f: &ZariskiFormula,
    q: u64,
    n_range: RangeInclusive<usize>,
) -> Result<VerifyReport, OracleError> {
    let counts = count_generators(series, q)?;
    let fq = f.to_field(Field::prime(q)?)?;
    let report = count_arc_points(fq.equations(), None, q, *n_range.end())?;
    verify_series(series, &counts, q, n_range, &report.counts)
}

/// Specializes a class expression with oracle counts of its generators.
pub fn specialize_with_oracle(e: &ClassExpr, q: u64) -> Result<BigInt, OracleError> {
    let series = RationalSeries::polynomial(vec![e.clone()], 0);
    let counts = count_generators(&series, q)?;
    Ok(e.specialize(q, &counts)?)
}

/// Convenience for small values.
pub fn to_u64(c: &BigUint) -> Option<u64> {
    c.to_u64()
}
