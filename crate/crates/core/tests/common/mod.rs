#![allow(dead_code)]

use std::collections::BTreeMap;

use arcscheme::arcgen::{arc_formula, disjoint_union_formula, satisfies, ZariskiFormula};
use arcscheme::artin::{monomial_quotient, truncated, ArtinAlgebra};
use arcscheme::classring::RationalSeries;
use arcscheme::oracle::{count_arc_points, count_points};
use arcscheme::rationalizer::{
    assemble_igusa, branch_children, build_tree, classify_leaf, ord_and_tin, recur_check, LeafClass,
    ResolutionTree, TaggedTuple,
};
use arcscheme::{parse_poly, Field, Monomial, Poly};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const XYZ: [&str; 3] = ["x", "y", "z"];

pub fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

pub fn poly(text: &str, vars: &[&str], field: Field) -> Poly {
    parse_poly(text, vars, field).unwrap_or_else(|e| panic!("{text}: {e}"))
}

pub fn formula(text: &str, vars: &[&str], field: Field) -> ZariskiFormula {
    ZariskiFormula::untagged(names(vars), field, vec![poly(text, vars, field)]).unwrap()
}

pub fn tree(text: &str, field: Field) -> ResolutionTree {
    let f = poly(text, &XYZ, field);
    build_tree(&f, &names(&XYZ), &TaggedTuple::zero(3), 10_000).unwrap()
}

pub fn igusa(text: &str, field: Field) -> RationalSeries {
    assemble_igusa(&tree(text, field)).unwrap()
}

/// Arc variable names `x_0, y_0, x_1, y_1, ..` for `l` levels.
pub fn arc_names(vars: &[&str], l: usize) -> Vec<String> {
    (0..l).flat_map(|k| vars.iter().map(move |v| format!("{v}_{k}"))).collect()
}

/// Equations of a golden file, one per line, in the given variables.
pub fn golden(file: &str, vars: &[String], field: Field) -> Vec<Poly> {
    let path = format!("{}/tests/golden/{file}", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    let refs: Vec<&str> = vars.iter().map(String::as_str).collect();
    text.lines().filter(|l| !l.trim().is_empty()).map(|l| poly(l, &refs, field)).collect()
}

pub fn count(f: &Poly, theta: Option<&TaggedTuple>, q: u64, n: usize) -> BigUint {
    count_arc_points(std::slice::from_ref(f), theta, q, n).unwrap().counts[n].clone()
}

pub fn qpow(q: u64, e: i64) -> Result<BigUint, String> {
    u32::try_from(e).map(|e| BigUint::from(q).pow(e)).map_err(|_| format!("negative exponent {e}"))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

// ---------------------------------------------------------------------------
// random instances

pub fn random_field(rng: &mut ChaCha8Rng) -> (u64, Field) {
    let q = [2u64, 3, 5][rng.gen_range(0..3)];
    (q, Field::prime(q).unwrap())
}

/// A nonzero polynomial without constant term, of degree at most `deg`, with up to `max_terms` terms.
pub fn random_poly(rng: &mut ChaCha8Rng, m: usize, field: Field, deg: u32, max_terms: usize) -> Poly {
    let q = field.characteristic();
    loop {
        let terms = rng.gen_range(1..=max_terms);
        let mut f = Poly::zero(m, field);
        for _ in 0..terms {
            let mut e = vec![0u32; m];
            let d = rng.gen_range(1..=deg);
            for _ in 0..d {
                e[rng.gen_range(0..m)] += 1;
            }
            let c = if q == 0 { rng.gen_range(-4..=4) } else { rng.gen_range(1..q) as i64 };
            f = f.add(&Poly::from_terms(m, field, [(BigRational::from_integer(c.into()), e)]));
        }
        if !f.is_zero() {
            return f;
        }
    }
}

pub fn random_theta(rng: &mut ChaCha8Rng, m: usize, max: u64, tags: bool) -> TaggedTuple {
    let values: Vec<u64> = (0..m).map(|_| rng.gen_range(0..=max)).collect();
    let tagged: Vec<bool> = (0..m).map(|_| tags && rng.gen_bool(0.3)).collect();
    TaggedTuple::new(&values, &tagged)
}

/// A local algebra: `k[xi]/(xi^l)` or a monomial quotient in two variables.
pub fn random_local_algebra(rng: &mut ChaCha8Rng, field: Field, max_len: usize) -> ArtinAlgebra {
    loop {
        let r = if rng.gen_bool(0.5) {
            truncated(rng.gen_range(1..=max_len as u32), field).unwrap()
        } else {
            let a = rng.gen_range(1..=3);
            let b = rng.gen_range(1..=3);
            let mut gens = vec![vec![a, 0], vec![0, b]];
            if rng.gen_bool(0.5) {
                gens.push(vec![1, 1]);
            }
            monomial_quotient(&["xi", "zeta"], &gens, field).unwrap()
        };
        if r.len() <= max_len {
            return r;
        }
    }
}

/// `R` in a basis `e_a + c e_b`-style, obtained by random elementary row operations.
pub fn random_basis_change(rng: &mut ChaCha8Rng, l: usize, q: u64) -> Vec<Vec<BigRational>> {
    let mut m: Vec<Vec<i64>> = (0..l).map(|i| (0..l).map(|j| i64::from(i == j)).collect()).collect();
    for _ in 0..2 * l {
        let i = rng.gen_range(0..l);
        let j = rng.gen_range(0..l);
        if i != j {
            let c = rng.gen_range(1..q as i64);
            for k in 0..l {
                m[i][k] = (m[i][k] + c * m[j][k]).rem_euclid(q as i64);
            }
        }
    }
    if l > 1 && rng.gen_bool(0.5) {
        m.swap(0, l - 1);
    }
    m.into_iter().map(|r| r.into_iter().map(|v| BigRational::from_integer(v.into())).collect()).collect()
}

/// Whether every point of `V(f)` in `F_q^m` other than the origin has a nonzero gradient.
pub fn singular_only_at_origin(f: &Poly, q: u64) -> bool {
    let m = f.nvars();
    let grads: Vec<Poly> = (0..m).map(|j| f.derive(j)).collect();
    let mut x = vec![0u64; m];
    loop {
        let pt: Vec<BigRational> = x.iter().map(|&v| BigRational::from_integer(v.into())).collect();
        if x.iter().any(|&v| v != 0) && f.eval(&pt).is_zero() && grads.iter().all(|g| g.eval(&pt).is_zero()) {
            return false;
        }
        let mut i = 0;
        loop {
            if i == m {
                return true;
            }
            x[i] += 1;
            if x[i] < q {
                break;
            }
            x[i] = 0;
            i += 1;
        }
    }
}

// ---------------------------------------------------------------------------
// laws at the level of point counts

/// `#Parc_n^theta = sum_delta #Parc_n^{e^eta_delta(theta)}`.
pub fn partition_law(f: &Poly, theta: &TaggedTuple, eta: &[bool], q: u64, n: usize) -> Result<(), String> {
    let lhs = count(f, Some(theta), q, n);
    let children = branch_children(theta, eta).map_err(|e| e.to_string())?;
    let rhs: BigUint = children.iter().map(|c| count(f, Some(c), q, n)).sum();
    ensure(lhs == rhs, || format!("theta {theta}, eta {eta:?}, n {n}: {lhs} != {rhs}"))
}

/// For a regular `theta` and `n > ord, max v(theta)`:
/// `#Parc_n^theta = #tin * q^((m-1)(n-1) + ord - |theta|)`.
pub fn regular_leaf_law(f: &Poly, theta: &TaggedTuple, q: u64, n: usize) -> Result<(), String> {
    let m = f.nvars();
    let (ord, tin) = ord_and_tin(f, &names(&XYZ[..m]), theta).map_err(|e| e.to_string())?;
    ensure(classify_leaf(&tin) == LeafClass::Regular, || format!("{theta} is not regular"))?;
    let lhs = count(f, Some(theta), q, n);
    let e = ((m - 1) * (n - 1)) as i64 + ord as i64 - theta.norm() as i64;
    let rhs = count_points(&tin, q).unwrap() * qpow(q, e)?;
    ensure(lhs == rhs, || format!("theta {theta}, n {n}: {lhs} != {rhs}"))
}

/// `#Parc_n^beta = q^r #Parc_{n-s}^alpha` for `n > s`, every tag of `alpha` below `n - s`
/// and `n >= max v(beta)`.
pub fn recursion_law(f: &Poly, alpha: &TaggedTuple, beta: &TaggedTuple, q: u64, n: usize) -> Result<(), String> {
    let (s, r) = recur_check(f, alpha, beta).ok_or_else(|| format!("no recursion {alpha} -> {beta}"))?;
    let s = s as usize;
    ensure(n > s, || format!("n {n} <= s {s}"))?;
    let (mut lhs, mut rhs) = (count(f, Some(beta), q, n), count(f, Some(alpha), q, n - s));
    // r < 0 when a coordinate absent from f is raised by more than s
    if r >= 0 {
        rhs *= qpow(q, r)?;
    } else {
        lhs *= qpow(q, -r)?;
    }
    ensure(lhs == rhs, || format!("{alpha} -> {beta} (s {s}, r {r}), n {n}: {lhs} != {rhs}"))
}

/// `#arc_n X = (#X - 1) q^((m-1)(n-1)) + #Parc_n^(1,..,1)`.
pub fn reduced_fiber_law(f: &Poly, q: u64, n: usize) -> Result<(), String> {
    let m = f.nvars();
    let x = ZariskiFormula::untagged(names(&XYZ[..m]), f.field(), vec![f.clone()]).unwrap();
    let points = count_points(&x, q).unwrap();
    let lhs = count(f, None, q, n);
    let rhs = (points - 1u32) * qpow(q, ((m - 1) * (n - 1)) as i64)? + count(f, Some(&TaggedTuple::ones(m)), q, n);
    ensure(lhs == rhs, || format!("n {n}: {lhs} != {rhs}"))
}

/// `#arc_R(phi x psi) = #arc_R(phi) #arc_R(psi)`.
pub fn fubini_law(phi: &ZariskiFormula, psi: &ZariskiFormula, r: &ArtinAlgebra, q: u64) -> Result<(), String> {
    let prod = phi.product(psi).map_err(|e| e.to_string())?;
    let c = |x: &ZariskiFormula| count_points(&arc_formula(x, r).unwrap(), q).unwrap();
    let (lhs, a, b) = (c(&prod), c(phi), c(psi));
    ensure(lhs == &a * &b, || format!("{lhs} != {a} * {b}"))
}

/// `#(phi ⊔ psi) = #phi + #psi`.
pub fn disjoint_union_law(phi: &ZariskiFormula, psi: &ZariskiFormula, q: u64) -> Result<(), String> {
    let u = disjoint_union_formula(phi, psi).map_err(|e| e.to_string())?;
    let (lhs, a, b) = (count_points(&u, q).unwrap(), count_points(phi, q).unwrap(), count_points(psi, q).unwrap());
    ensure(lhs == &a + &b, || format!("{lhs} != {a} + {b}"))
}

/// Every rational point `a` of `phi` gives the arc `(a, 0, .., 0)`.
pub fn constant_section_law(phi: &ZariskiFormula, r: &ArtinAlgebra, q: u64) -> Result<usize, String> {
    let arcs = arc_formula(phi, r).map_err(|e| e.to_string())?;
    let m = phi.nvars();
    let mut x = vec![0u64; m];
    let mut seen = 0;
    loop {
        let pt: Vec<BigRational> = x.iter().map(|&v| BigRational::from_integer(v.into())).collect();
        if satisfies(phi, &pt) {
            seen += 1;
            let mut ext = pt.clone();
            ext.resize(arcs.nvars(), BigRational::zero());
            ensure(satisfies(&arcs, &ext), || format!("point {x:?} does not lift"))?;
        }
        let mut i = 0;
        loop {
            if i == m {
                return Ok(seen);
            }
            x[i] += 1;
            if x[i] < q {
                break;
            }
            x[i] = 0;
            i += 1;
        }
    }
}

/// `#arc_R phi` does not depend on the basis of `R`.
pub fn basis_law(phi: &ZariskiFormula, r: &ArtinAlgebra, change: &[Vec<BigRational>], q: u64) -> Result<(), String> {
    let r2 = r.change_basis(change).ok_or("singular basis change")?;
    let a = count_points(&arc_formula(phi, r).unwrap(), q).unwrap();
    let b = count_points(&arc_formula(phi, &r2).unwrap(), q).unwrap();
    ensure(a == b, || format!("{a} != {b}"))
}

// ---------------------------------------------------------------------------
// instance drivers shared by the property suites and the acceptance run

pub fn partition_instance(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let (q, field) = random_field(rng);
    let m = rng.gen_range(1..=3);
    let f = random_poly(rng, m, field, 3, 3);
    let theta = random_theta(rng, m, 2, true);
    let free: Vec<usize> = (0..m).filter(|&j| !theta.is_tagged(j)).collect();
    let mut eta = vec![false; m];
    for &j in &free {
        eta[j] = rng.gen_bool(0.6);
    }
    if let Some(&j) = free.first() {
        eta[j] = true;
    }
    let n = rng.gen_range(0..=if q == 5 && m == 3 { 3 } else { 4 });
    partition_law(&f, &theta, &eta, q, n)
}

pub fn regular_leaf_instance(rng: &mut ChaCha8Rng) -> Result<(), String> {
    loop {
        let (q, field) = random_field(rng);
        let m = rng.gen_range(1..=3);
        let f = random_poly(rng, m, field, 3, 3);
        let theta = random_theta(rng, m, 1, true);
        let (ord, tin) = ord_and_tin(&f, &names(&XYZ[..m]), &theta).unwrap();
        let lo = ord.max(theta.values().into_iter().max().unwrap_or(0)) as usize + 1;
        if classify_leaf(&tin) != LeafClass::Regular || lo > 4 {
            continue;
        }
        let n = rng.gen_range(lo..=4);
        return regular_leaf_law(&f, &theta, q, n);
    }
}

/// A weighted homogeneous `f` with `alpha` and `beta = alpha + w`, so that `f(xi^beta) = xi^d f(xi^alpha)`.
pub fn recursion_instance(rng: &mut ChaCha8Rng) -> Result<(), String> {
    loop {
        let (q, field) = random_field(rng);
        let m = rng.gen_range(1..=3);
        let w: Vec<u64> = (0..m).map(|_| rng.gen_range(0..=2)).collect();
        let d = rng.gen_range(1..=3u64);
        let mut monos = Vec::new();
        let mut e = vec![0u32; m];
        loop {
            let deg: u64 = e.iter().zip(&w).map(|(&a, &b)| u64::from(a) * b).sum();
            if deg == d {
                monos.push(e.clone());
            }
            let mut i = 0;
            while i < m {
                e[i] += 1;
                if e[i] <= 3 {
                    break;
                }
                e[i] = 0;
                i += 1;
            }
            if i == m {
                break;
            }
        }
        if monos.is_empty() {
            continue;
        }
        let mut f = Poly::zero(m, field);
        for mono in &monos {
            if rng.gen_bool(0.6) {
                let c = rng.gen_range(1..q) as i64;
                f = f.add(&Poly::from_terms(m, field, [(BigRational::from_integer(c.into()), mono.clone())]));
            }
        }
        if f.is_zero() {
            continue;
        }
        let alpha_v: Vec<u64> = (0..m).map(|_| rng.gen_range(0..=1)).collect();
        let tags: Vec<bool> = (0..m).map(|_| rng.gen_bool(0.25)).collect();
        let alpha = TaggedTuple::new(&alpha_v, &tags);
        let beta_v: Vec<u64> = alpha_v.iter().zip(&w).map(|(a, b)| a + b).collect();
        let beta = TaggedTuple::new(&beta_v, &tags);
        let Some((s, _)) = recur_check(&f, &alpha, &beta) else {
            continue;
        };
        // the tags of alpha are visible only from level n - s = max tagged value + 1 on
        let tag_max = (0..m).filter(|&j| tags[j]).map(|j| alpha_v[j] as usize + 1).max().unwrap_or(1);
        // and every coordinate of beta keeps at least one arc variable at level n
        let lo = (s as usize + tag_max).max(beta_v.iter().copied().max().unwrap_or(0) as usize);
        if lo > 4 {
            continue;
        }
        let n = rng.gen_range(lo..=4);
        return recursion_law(&f, &alpha, &beta, q, n);
    }
}

pub fn reduced_fiber_instance(rng: &mut ChaCha8Rng) -> Result<(), String> {
    loop {
        let (q, field) = random_field(rng);
        let m = rng.gen_range(1..=3);
        let f = random_poly(rng, m, field, 3, 3);
        if !singular_only_at_origin(&f, q) {
            continue;
        }
        let n = rng.gen_range(1..=if q == 5 && m == 3 { 3 } else { 4 });
        return reduced_fiber_law(&f, q, n);
    }
}

fn random_formula(rng: &mut ChaCha8Rng, vars: &[&str], field: Field, tags: bool) -> ZariskiFormula {
    let m = vars.len();
    let k = rng.gen_range(0..=2);
    let eqs = (0..k).map(|_| random_poly(rng, m, field, 2, 2)).collect();
    let tagged = (0..m).map(|_| tags && rng.gen_bool(0.3)).collect();
    ZariskiFormula::new(names(vars), field, eqs, tagged).unwrap()
}

pub fn fubini_instance(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let (q, field) = random_field(rng);
    let r = random_local_algebra(rng, field, if q == 5 { 2 } else { 3 });
    let budget = if q == 5 { 6 } else { 9 };
    let m1 = rng.gen_range(1..=2);
    let m2 = rng.gen_range(1..=2).min((budget / r.len()).saturating_sub(m1).max(1));
    let phi = random_formula(rng, &["x", "y"][..m1], field, true);
    let psi = random_formula(rng, &["u", "v"][..m2], field, true);
    fubini_law(&phi, &psi, &r, q)
}

pub fn disjoint_union_instance(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let (q, field) = random_field(rng);
    let m = rng.gen_range(1..=3);
    let phi = random_formula(rng, &XYZ[..m], field, false);
    let psi = random_formula(rng, &XYZ[..m], field, false);
    disjoint_union_law(&phi, &psi, q)
}

pub fn constant_section_instance(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let (q, field) = random_field(rng);
    let m = rng.gen_range(1..=3);
    let r = random_local_algebra(rng, field, 4);
    let phi = random_formula(rng, &XYZ[..m], field, true);
    constant_section_law(&phi, &r, q).map(|_| ())
}

pub fn basis_instance(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let (q, field) = random_field(rng);
    let max_len = if q == 5 { 3 } else { 4 };
    let r = random_local_algebra(rng, field, max_len);
    let m = (if q == 5 { 6 } else { 8 } / r.len()).clamp(1, 2);
    let phi = random_formula(rng, &XYZ[..m], field, false);
    let change = random_basis_change(rng, r.len(), q);
    basis_law(&phi, &r, &change, q)
}

pub type Instance = fn(&mut ChaCha8Rng) -> Result<(), String>;

pub const LAWS: [(&str, Instance); 8] = [
    ("partition identity", partition_instance),
    ("regular-leaf law", regular_leaf_instance),
    ("recursion law", recursion_instance),
    ("reduced-fiber law", reduced_fiber_instance),
    ("Fubini multiplicativity", fubini_instance),
    ("disjoint-union additivity", disjoint_union_instance),
    ("constant-section law", constant_section_instance),
    ("basis independence", basis_instance),
];

// ---------------------------------------------------------------------------
// other fixtures

/// `sum_{m=0}^{n} L^m Lhat^(n-m)`.
pub fn projective_expected(n: usize) -> arcscheme::classring::ClassExpr {
    use arcscheme::classring::ClassExpr;
    (0..=n).fold(ClassExpr::zero(), |acc, m| acc.add(&ClassExpr::lef(m as i64).mul(&ClassExpr::lhat((n - m) as u32))))
}

/// Length of `k[x]/(I + m^n)` by rank of the truncated multiples of the generators,
/// computed mod a large prime.
pub fn flat_jet_length(eqs: &[Poly], n: u64) -> u64 {
    const P: i64 = 1_000_003;
    if n == 0 {
        return 0;
    }
    let m = eqs[0].nvars();
    let monos: Vec<Monomial> = all_monomials(m, n);
    let index: BTreeMap<&Monomial, usize> = monos.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for f in eqs {
        for a in &monos {
            let mut row = vec![0i64; monos.len()];
            for (mono, c) in f.terms() {
                let prod = Monomial(mono.0.iter().zip(&a.0).map(|(x, y)| x + y).collect());
                if let Some(&i) = index.get(&prod) {
                    let c: BigInt = c.numer().clone();
                    let c = i64::try_from(c % BigInt::from(P)).unwrap();
                    row[i] = (row[i] + c).rem_euclid(P);
                }
            }
            rows.push(row);
        }
    }
    let mut rank = 0;
    for col in 0..monos.len() {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else { continue };
        rows.swap(rank, piv);
        let inv = modpow(rows[rank][col], P - 2, P);
        let pivot: Vec<i64> = rows[rank].iter().map(|v| v * inv % P).collect();
        for r in rank + 1..rows.len() {
            let f = rows[r][col];
            if f != 0 {
                for c in 0..monos.len() {
                    rows[r][c] = (rows[r][c] - f * pivot[c]).rem_euclid(P);
                }
            }
        }
        rows[rank] = pivot;
        rank += 1;
    }
    (monos.len() - rank) as u64
}

fn modpow(mut b: i64, mut e: i64, p: i64) -> i64 {
    let mut r = 1;
    b = b.rem_euclid(p);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Monomials of degree `< n` in `m` variables.
fn all_monomials(m: usize, n: u64) -> Vec<Monomial> {
    let mut out = vec![Monomial::one(m)];
    let mut frontier = out.clone();
    for _ in 1..n {
        let mut next = Vec::new();
        for mono in &frontier {
            let last = mono.0.iter().rposition(|&e| e > 0).unwrap_or(0);
            for j in last..m {
                let mut e = mono.0.clone();
                e[j] += 1;
                next.push(Monomial(e));
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}
