//! Tagged tuples, twisted initial forms and rationalization trees.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arcgen::ZariskiFormula;
use crate::artin::HilbertData;
use crate::classring::{solve_series, ClassExpr, ClassGenerator, RationalSeries};
use crate::error::TreeError;
use crate::poly::{Monomial, Poly};

/// One entry of a tagged tuple: a vanishing order, tagged when the leading
/// coefficient is a unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Entry {
    pub value: u64,
    pub tagged: bool,
}

/// Element of `Gamma_m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TaggedTuple(pub Vec<Entry>);

impl TaggedTuple {
    pub fn zero(m: usize) -> Self {
        TaggedTuple(vec![Entry { value: 0, tagged: false }; m])
    }

    pub fn ones(m: usize) -> Self {
        TaggedTuple(vec![Entry { value: 1, tagged: false }; m])
    }

    pub fn untagged(values: &[u64]) -> Self {
        TaggedTuple(values.iter().map(|&value| Entry { value, tagged: false }).collect())
    }

    pub fn new(values: &[u64], tags: &[bool]) -> Self {
        assert_eq!(values.len(), tags.len());
        TaggedTuple(
            values
                .iter()
                .zip(tags)
                .map(|(&value, &tagged)| Entry { value, tagged })
                .collect(),
        )
    }

    /// Parses `"(2,3*,5)"` or `"2,3*,5"`.
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.trim().is_empty() {
            return Some(TaggedTuple(Vec::new()));
        }
        s.split(',')
            .map(|p| {
                let p = p.trim();
                let (num, tagged) = match p.strip_suffix('*') {
                    Some(rest) => (rest, true),
                    None => (p, false),
                };
                Some(Entry { value: num.trim().parse().ok()?, tagged })
            })
            .collect::<Option<Vec<_>>>()
            .map(TaggedTuple)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Underlying value `v theta`.
    pub fn values(&self) -> Vec<u64> {
        self.0.iter().map(|e| e.value).collect()
    }

    pub fn tags(&self) -> Vec<bool> {
        self.0.iter().map(|e| e.tagged).collect()
    }

    pub fn is_tagged(&self, j: usize) -> bool {
        self.0[j].tagged
    }

    pub fn any_tagged(&self) -> bool {
        self.0.iter().any(|e| e.tagged)
    }

    /// `||theta|| = sum of the underlying values`.
    pub fn norm(&self) -> u64 {
        self.0.iter().map(|e| e.value).sum()
    }

    /// The partial order: untagged entries may grow, tagged entries are frozen.
    pub fn preceq(&self, other: &TaggedTuple) -> bool {
        self.len() == other.len()
            && self.0.iter().zip(&other.0).all(|(a, b)| {
                if a.tagged {
                    a == b
                } else {
                    a.value <= b.value
                }
            })
    }

    /// `e^eta_delta(theta)`: where `eta_i = 1`, either tag the entry (`delta_i = 0`)
    /// or raise it by one (`delta_i = 1`).
    pub fn transform(&self, eta: &[bool], delta: &[bool]) -> Result<TaggedTuple, TreeError> {
        if eta.len() != self.len() || delta.len() != self.len() {
            return Err(TreeError::Arity(eta.len().max(delta.len()), self.len()));
        }
        let mut out = self.clone();
        for i in 0..self.len() {
            if delta[i] && !eta[i] {
                return Err(TreeError::Arity(i, self.len()));
            }
            if !eta[i] {
                continue;
            }
            if self.0[i].tagged {
                return Err(TreeError::TagConflict(i));
            }
            if delta[i] {
                out.0[i].value += 1;
            } else {
                out.0[i].tagged = true;
            }
        }
        Ok(out)
    }
}

impl fmt::Display for TaggedTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}{}", e.value, if e.tagged { "*" } else { "" })?;
        }
        write!(f, ")")
    }
}

/// The `2^|eta|` children `e^eta_delta(theta)` for `delta <= eta`, `delta` descending from `eta`.
pub fn branch_children(theta: &TaggedTuple, eta: &[bool]) -> Result<Vec<TaggedTuple>, TreeError> {
    let support: Vec<usize> = (0..eta.len()).filter(|&i| eta[i]).collect();
    let k = support.len();
    let mut out = Vec::with_capacity(1 << k);
    for mask in (0..1u64 << k).rev() {
        let mut delta = vec![false; eta.len()];
        for (bit, &i) in support.iter().enumerate() {
            delta[i] = mask >> (k - 1 - bit) & 1 == 1;
        }
        out.push(theta.transform(eta, &delta)?);
    }
    Ok(out)
}

/// `ord_theta f` and the twisted initial form, which inherits the tags of `theta`.
pub fn ord_and_tin(f: &Poly, names: &[String], theta: &TaggedTuple) -> Result<(u64, ZariskiFormula), TreeError> {
    if theta.len() != f.nvars() || names.len() != f.nvars() {
        return Err(TreeError::Arity(theta.len(), f.nvars()));
    }
    let w = theta.values();
    let ord = f.terms().map(|(m, _)| m.weighted_degree(&w)).min().ok_or(TreeError::ZeroPolynomial)?;
    let tin = f.filter_terms(|m| m.weighted_degree(&w) == ord);
    let formula = ZariskiFormula::new(names.to_vec(), f.field(), vec![tin], theta.tags())
        .expect("same ring as f");
    Ok((ord, formula))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LeafClass {
    Empty,
    Regular,
    Undetermined,
}

/// Syntactic emptiness and smoothness tests on a single tagged equation.
pub fn classify_leaf(tin: &ZariskiFormula) -> LeafClass {
    let [g] = tin.equations() else {
        return LeafClass::Undetermined;
    };
    let tagged = tin.tagged();
    let in_tagged = |m: &Monomial| m.support().all(|v| tagged[v]);
    if g.len() == 1 && g.terms().all(|(m, _)| in_tagged(m)) {
        return LeafClass::Empty;
    }
    for i in 0..g.nvars() {
        let d = g.derive(i);
        if d.len() == 1 && d.terms().all(|(m, _)| in_tagged(m)) {
            return LeafClass::Regular;
        }
    }
    LeafClass::Undetermined
}

/// `(s, r)` when `beta` recurses onto `alpha`: the twisted equations at `beta`
/// are those at `alpha` shifted by `xi^s`, leaving `r` free arc variables.
pub fn recur_check(f: &Poly, alpha: &TaggedTuple, beta: &TaggedTuple) -> Option<(u64, i64)> {
    if !alpha.preceq(beta) || alpha.tags() != beta.tags() || f.is_zero() {
        return None;
    }
    let (va, vb) = (alpha.values(), beta.values());
    let mut shift = None;
    for (m, _) in f.terms() {
        let s = m.weighted_degree(&vb) - m.weighted_degree(&va);
        match shift {
            None => shift = Some(s),
            Some(t) if t != s => return None,
            _ => {}
        }
    }
    let s = shift?;
    if s == 0 {
        return None;
    }
    let m = f.nvars() as i64;
    Some((s, s as i64 * m - beta.norm() as i64 + alpha.norm() as i64))
}

/// Where a recursive leaf points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RecTarget {
    /// The untwisted arc scheme, i.e. the zero tuple.
    Zero,
    /// An ancestor node.
    Node(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NodeKind {
    Internal { eta: Vec<bool> },
    Empty,
    Regular { class: ClassGenerator },
    Recursive { target: RecTarget, s: u64, r: i64 },
    Stuck,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub theta: TaggedTuple,
    pub ord: u64,
    pub tin: ZariskiFormula,
    pub kind: NodeKind,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionTree {
    pub names: Vec<String>,
    pub f: Poly,
    pub nodes: Vec<TreeNode>,
}

impl ResolutionTree {
    pub fn root(&self) -> &TreeNode {
        &self.nodes[0]
    }

    pub fn leaves(&self) -> impl Iterator<Item = (usize, &TreeNode)> {
        self.nodes.iter().enumerate().filter(|(_, n)| n.children.is_empty())
    }

    pub fn count(&self, pred: impl Fn(&NodeKind) -> bool) -> usize {
        self.nodes.iter().filter(|n| pred(&n.kind)).count()
    }

    pub fn stuck(&self) -> Vec<usize> {
        self.leaves().filter(|(_, n)| n.kind == NodeKind::Stuck).map(|(i, _)| i).collect()
    }

    /// Multiset of regular-leaf classes as `(name, multiplicity)`.
    pub fn regular_classes(&self) -> Vec<(ClassGenerator, usize)> {
        let mut out: Vec<(ClassGenerator, usize)> = Vec::new();
        for n in &self.nodes {
            if let NodeKind::Regular { class } = &n.kind {
                match out.iter_mut().find(|(g, _)| g == class) {
                    Some((_, k)) => *k += 1,
                    None => out.push((class.clone(), 1)),
                }
            }
        }
        out
    }

    fn depth(&self, mut i: usize) -> usize {
        let mut d = 0;
        while let Some(p) = self.nodes[i].parent {
            d += 1;
            i = p;
        }
        d
    }

    fn subtree_leaves(&self, i: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![i];
        while let Some(k) = stack.pop() {
            if self.nodes[k].children.is_empty() {
                out.push(k);
            } else {
                stack.extend(self.nodes[k].children.iter().rev());
            }
        }
        out
    }

    /// Graphviz rendering: node label is the tuple, leaves add their kind.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph rationalization {\n  node [shape=box, fontname=\"monospace\"];\n");
        for (i, n) in self.nodes.iter().enumerate() {
            let extra = match &n.kind {
                NodeKind::Internal { .. } => format!("ord {}", n.ord),
                NodeKind::Empty => "empty".to_string(),
                NodeKind::Regular { class } => format!("regular {class}"),
                NodeKind::Recursive { target, s, r } => {
                    let t = match target {
                        RecTarget::Zero => TaggedTuple::zero(n.theta.len()).to_string(),
                        RecTarget::Node(k) => self.nodes[*k].theta.to_string(),
                    };
                    format!("recursive to {t}, s={s}, r={r}")
                }
                NodeKind::Stuck => format!("stuck, tin {}", n.tin.to_text()),
            };
            let label = format!("{}\\n{}", n.theta, extra).replace('"', "\\\"");
            s.push_str(&format!("  n{i} [label=\"{label}\"];\n"));
        }
        for (i, n) in self.nodes.iter().enumerate() {
            for &c in &n.children {
                s.push_str(&format!("  n{i} -> n{c};\n"));
            }
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> TreeJson {
        TreeJson {
            nodes: self
                .nodes
                .iter()
                .map(|n| {
                    let (kind, class, target, s, r) = match &n.kind {
                        NodeKind::Internal { .. } => ("internal", None, None, None, None),
                        NodeKind::Empty => ("empty", None, None, None, None),
                        NodeKind::Regular { class } => ("regular", Some(class.to_string()), None, None, None),
                        NodeKind::Recursive { target, s, r } => {
                            let t = match target {
                                RecTarget::Zero => TaggedTuple::zero(n.theta.len()).to_string(),
                                RecTarget::Node(k) => self.nodes[*k].theta.to_string(),
                            };
                            ("recursive", None, Some(t), Some(*s), Some(*r))
                        }
                        NodeKind::Stuck => ("stuck", None, None, None, None),
                    };
                    NodeJson {
                        theta: n.theta.to_string(),
                        ord: n.ord,
                        tin: n.tin.to_text(),
                        kind: kind.to_string(),
                        class,
                        target,
                        s,
                        r,
                        children: n.children.clone(),
                    }
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeJson {
    pub theta: String,
    pub ord: u64,
    pub tin: String,
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<i64>,
    pub children: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeJson {
    pub nodes: Vec<NodeJson>,
}

/// Depth-first rationalization of the hypersurface `f = 0` starting at `root`.
///
/// Nodes whose order exceeds `budget` become stuck leaves.
pub fn build_tree(f: &Poly, names: &[String], root: &TaggedTuple, budget: u64) -> Result<ResolutionTree, TreeError> {
    if f.is_zero() {
        return Err(TreeError::ZeroPolynomial);
    }
    if root.len() != f.nvars() {
        return Err(TreeError::Arity(root.len(), f.nvars()));
    }
    let mut tree = ResolutionTree { names: names.to_vec(), f: f.clone(), nodes: Vec::new() };
    expand(&mut tree, root.clone(), None, budget)?;
    Ok(tree)
}

fn expand(tree: &mut ResolutionTree, theta: TaggedTuple, parent: Option<usize>, budget: u64) -> Result<usize, TreeError> {
    let (ord, tin) = ord_and_tin(&tree.f, &tree.names, &theta)?;
    let idx = tree.nodes.len();
    tree.nodes.push(TreeNode { theta: theta.clone(), ord, tin: tin.clone(), kind: NodeKind::Stuck, parent, children: Vec::new() });
    if ord > budget {
        return Ok(idx);
    }
    let zero = TaggedTuple::zero(theta.len());
    if let Some((s, r)) = recur_check(&tree.f, &zero, &theta) {
        tree.nodes[idx].kind = NodeKind::Recursive { target: RecTarget::Zero, s, r };
        return Ok(idx);
    }
    let mut anc = parent;
    while let Some(a) = anc {
        if tree.nodes[a].theta != zero {
            if let Some((s, r)) = recur_check(&tree.f, &tree.nodes[a].theta, &theta) {
                tree.nodes[idx].kind = NodeKind::Recursive { target: RecTarget::Node(a), s, r };
                return Ok(idx);
            }
        }
        anc = tree.nodes[a].parent;
    }
    match classify_leaf(&tin) {
        LeafClass::Empty => tree.nodes[idx].kind = NodeKind::Empty,
        LeafClass::Regular => {
            tree.nodes[idx].kind = NodeKind::Regular { class: ClassGenerator::formula(&tin) }
        }
        LeafClass::Undetermined => {
            let mut eta = vec![false; theta.len()];
            for v in tin.equations()[0].support() {
                eta[v] = !theta.is_tagged(v);
            }
            if eta.iter().any(|&e| e) {
                tree.nodes[idx].kind = NodeKind::Internal { eta: eta.clone() };
                for child in branch_children(&theta, &eta)? {
                    let c = expand(tree, child, Some(idx), budget)?;
                    tree.nodes[idx].children.push(c);
                }
            }
        }
    }
    Ok(idx)
}

/// Generating series `sum [arc_n X] t^n` of the hypersurface from a tree rooted
/// at the zero tuple or at the all-ones tuple.
///
/// With the all-ones root the singular locus is assumed to be the origin, so
/// `[arc_n X] = ([X] - 1) L^((m-1)(n-1)) + [Parc_n^(1,..,1)]`. Coefficients below
/// the returned `n0` are left as the generators `[arc_n]`.
pub fn assemble_igusa(tree: &ResolutionTree) -> Result<RationalSeries, TreeError> {
    let stuck = tree.stuck();
    if !stuck.is_empty() {
        return Err(TreeError::Stuck(stuck.len()));
    }
    let m = tree.f.nvars();
    let root = &tree.root().theta;
    let zero = TaggedTuple::zero(m);
    let ones = TaggedTuple::ones(m);
    if *root != zero && *root != ones {
        return Err(TreeError::Root(root.to_string()));
    }
    let f_formula = ZariskiFormula::untagged(tree.names.clone(), tree.f.field(), vec![tree.f.clone()])
        .expect("f lives in its own ring");
    let mut n0 = 0usize;
    for (_, leaf) in tree.leaves() {
        n0 = n0.max(leaf.ord as usize);
        if let NodeKind::Recursive { s, .. } = leaf.kind {
            n0 = n0.max(s as usize);
        }
    }
    let n0 = n0 + 1;
    let initial = |theta: &TaggedTuple, upto: usize| -> RationalSeries {
        let coeffs = (0..upto)
            .map(|k| ClassExpr::generator(ClassGenerator::initial_value(&f_formula, theta, k)))
            .collect();
        RationalSeries::polynomial(coeffs, n0)
    };
    let lm1 = (m - 1) as i64;
    // series of each solved recursion target
    let mut solved: Vec<(RecTarget, RationalSeries)> = Vec::new();
    let target_theta = |t: &RecTarget| match t {
        RecTarget::Zero => zero.clone(),
        RecTarget::Node(k) => tree.nodes[*k].theta.clone(),
    };
    // the tail of T_alpha from n0 on, as known series plus at most one self-reference
    let tail = |top: usize, me: RecTarget, solved: &[(RecTarget, RationalSeries)]| -> Result<(RationalSeries, Option<(i64, u64)>), TreeError> {
        let mut acc = RationalSeries::zero();
        acc.n0 = n0;
        let mut own = None;
        for leaf in tree.subtree_leaves(top) {
            let node = &tree.nodes[leaf];
            match &node.kind {
                NodeKind::Empty => {}
                NodeKind::Regular { class } => {
                    let e = lm1 * (n0 as i64 - 1) + node.ord as i64 - node.theta.norm() as i64;
                    let c = ClassExpr::generator(class.clone()).shift_lef(e);
                    acc = acc.add(&RationalSeries::geometric(c, n0, lm1, 1));
                }
                NodeKind::Recursive { target, s, r } => {
                    let target = if *target == RecTarget::Node(0) && *root == zero { RecTarget::Zero } else { *target };
                    if target == me {
                        if own.is_some() {
                            return Err(TreeError::NonTriangular(format!("several recursions onto {}", target_theta(&me))));
                        }
                        own = Some((*r, *s));
                        let low = initial(&target_theta(&target), n0.saturating_sub(*s as usize));
                        acc = acc.sub(&low.mul_term(&ClassExpr::lef(*r), *s as usize));
                    } else if let Some((_, t)) = solved.iter().find(|(k, _)| *k == target) {
                        let low = initial(&target_theta(&target), n0.saturating_sub(*s as usize));
                        acc = acc.add(&t.sub(&low).mul_term(&ClassExpr::lef(*r), *s as usize));
                    } else {
                        return Err(TreeError::NonTriangular(format!(
                            "{} recurses onto {} outside its own subtree",
                            node.theta,
                            target_theta(&target)
                        )));
                    }
                }
                NodeKind::Internal { .. } | NodeKind::Stuck => unreachable!("leaves only"),
            }
        }
        acc.n0 = n0;
        Ok((acc, own))
    };
    let mut node_targets: Vec<usize> = tree
        .nodes
        .iter()
        .filter_map(|n| match n.kind {
            NodeKind::Recursive { target: RecTarget::Node(k), .. } if !(k == 0 && *root == zero) => Some(k),
            _ => None,
        })
        .collect();
    node_targets.sort_by_key(|&k| std::cmp::Reverse(tree.depth(k)));
    node_targets.dedup();
    for k in node_targets {
        let me = RecTarget::Node(k);
        let (h, own) = tail(k, me, &solved)?;
        let t = initial(&tree.nodes[k].theta, n0).add(&h);
        let t = match own {
            Some((r, s)) => solve_series(&t, r, s),
            None => t,
        };
        solved.push((me, t));
    }
    let (h, own) = tail(0, RecTarget::Zero, &solved)?;
    let mut z = initial(&zero, n0).add(&h);
    if *root == ones {
        let x = ClassExpr::generator(ClassGenerator::formula(&f_formula)).sub(&ClassExpr::one());
        let smooth = RationalSeries::geometric(x.shift_lef(lm1 * (n0 as i64 - 1)), n0, lm1, 1);
        z = z.add(&smooth);
    }
    z.n0 = n0;
    Ok(match own {
        Some((r, s)) => solve_series(&z, r, s),
        None => z,
    })
}

/// `sum_n [Y] L^(d (j^n - 1)) t^n` for `Y` smooth of dimension `d` along a germ
/// with `j^n = e n + b` from `n = N` on.
pub fn igusa_smooth_along_germ(d: u64, hilbert: HilbertData, class_y: &ClassExpr) -> RationalSeries {
    let d = d as i64;
    let n = hilbert.start as usize;
    let c = class_y.shift_lef(d * (hilbert.e * n as i64 + hilbert.b - 1));
    let mut s = RationalSeries::geometric(c, n, d * hilbert.e, 1);
    s.n0 = n;
    s
}

/// Multiplies coefficient `n` by `L^(-d j^n)` where `j^n = e n + b`.
pub fn motivic_normalize(series: &RationalSeries, d: u64, hilbert: HilbertData) -> RationalSeries {
    let d = d as i64;
    RationalSeries {
        numerator: series
            .numerator
            .iter()
            .enumerate()
            .map(|(k, c)| c.shift_lef(-d * (hilbert.e * k as i64 + hilbert.b)))
            .collect(),
        denominator: {
            let mut f: Vec<(i64, u64)> = series
                .denominator
                .iter()
                .map(|&(a, b)| (a - d * hilbert.e * b as i64, b))
                .collect();
            f.sort();
            f
        },
        n0: series.n0.max(hilbert.start as usize),
    }
}
