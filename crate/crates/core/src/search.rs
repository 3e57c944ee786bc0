//! Exact combinatorial oracles on small enumerated groups: maximum
//! intersecting sets, sharply transitive sets and the module V.
//!
//! Two elements u, v intersect when u·v⁻¹ fixes a point, i.e. when
//! α^u = α^v for some α, so adjacency is read straight off the image arrays.

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::EchelonBasis;
use crate::table::GroupTable;

/// Default group-order limit for the exact coclique search.
pub const DEFAULT_MAX_ORDER: usize = 400;
/// Default node-expansion budget.
pub const DEFAULT_BUDGET: u64 = 50_000_000;
/// Group-order limit for exact rank computations on V.
pub const MODULE_V_MAX_ORDER: usize = 10_000;

fn intersect(t: &GroupTable, u: u32, v: u32) -> bool {
    t.element(u).iter().zip(t.element(v)).any(|(a, b)| a == b)
}

#[derive(Clone, Debug)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn and_not(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a &= !b;
        }
    }

    fn above(&self, v: usize) -> Bits {
        let mut out = self.clone();
        for i in 0..=v {
            out.clear(i);
        }
        out
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                (w != 0).then(|| {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    i * 64 + b
                })
            })
        })
    }
}

struct Graph {
    adj: Vec<Bits>,
}

impl Graph {
    fn build(t: &GroupTable, edge: impl Fn(u32, u32) -> bool) -> Self {
        let n = t.order();
        let mut adj = vec![Bits::empty(n); n];
        for u in 0..n {
            for v in u + 1..n {
                if edge(u as u32, v as u32) {
                    adj[u].set(v);
                    adj[v].set(u);
                }
            }
        }
        Graph { adj }
    }
}

/// Branch and bound for cliques with a greedy-colouring bound.
struct CliqueSearch<'a> {
    g: &'a Graph,
    budget: u64,
    nodes: u64,
    exhausted: bool,
    /// Size a clique must exceed to be recorded.
    floor: usize,
    best: Option<Vec<usize>>,
    /// Stop as soon as a clique larger than `floor` is found.
    first_only: bool,
}

impl<'a> CliqueSearch<'a> {
    fn new(g: &'a Graph, budget: u64, floor: usize, first_only: bool) -> Self {
        Self {
            g,
            budget,
            nodes: 0,
            exhausted: false,
            floor,
            best: None,
            first_only,
        }
    }

    fn done(&self) -> bool {
        self.exhausted || (self.first_only && self.best.is_some())
    }

    /// Greedy sequential colouring; returns vertices with their colour
    /// numbers, colours nondecreasing.
    fn colour(&self, p: &Bits) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut uncoloured = p.clone();
        let mut colour = 0;
        while !uncoloured.is_empty() {
            colour += 1;
            let mut q = uncoloured.clone();
            while let Some(v) = q.first() {
                q.clear(v);
                q.and_not(&self.g.adj[v]);
                uncoloured.clear(v);
                out.push((v, colour));
            }
        }
        out
    }

    fn expand(&mut self, clique: &mut Vec<usize>, mut p: Bits) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        let order = self.colour(&p);
        for &(v, colour) in order.iter().rev() {
            if clique.len() + colour <= self.floor || self.done() {
                return;
            }
            clique.push(v);
            let next = p.and(&self.g.adj[v]);
            if next.is_empty() {
                if clique.len() > self.floor {
                    self.floor = clique.len();
                    let mut c = clique.clone();
                    c.sort_unstable();
                    self.best = Some(c);
                }
            } else {
                self.expand(clique, next);
            }
            clique.pop();
            p.clear(v);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CocliqueClass {
    StabiliserCoset,
    InSpanV,
    Other,
}

#[derive(Clone, Debug, Serialize)]
pub struct CocliqueWitness {
    pub elements: Vec<u32>,
    pub size: usize,
    pub classification: CocliqueClass,
    /// `(α, β)` with the set equal to `{g : α^g = β}`, for cosets.
    pub coset: Option<(usize, usize)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CocliqueResult {
    /// Whether the search finished; if not, `witness` is the best set found
    /// and `upper_bound` the proven bound.
    pub complete: bool,
    pub witness: CocliqueWitness,
    pub upper_bound: usize,
    pub nodes: u64,
}

/// Exact maximum intersecting set, the lexicographically least one among
/// those of maximum size.
///
/// Right translation is an automorphism of the derangement graph, so some
/// maximum coclique contains the identity, and the lexicographically least
/// one does. The search therefore runs on the elements with a fixed point,
/// starting from the stabiliser of point 0 as incumbent.
pub fn max_coclique_exact(t: &GroupTable, max_order: usize, budget: u64) -> Result<CocliqueResult> {
    let n = t.order();
    if n > max_order {
        return Err(Error::Precondition(format!(
            "group order {n} exceeds the exact-search limit {max_order}"
        )));
    }
    let g = Graph::build(t, |u, v| intersect(t, u, v));
    let mut root = g.adj[0].clone();
    root.clear(0);
    let incumbent: Vec<usize> = if t.degree() > 0 {
        t.point_stabilizer(0)?.into_iter().map(|x| x as usize).collect()
    } else {
        vec![0]
    };
    // colour bound at the root, proven regardless of the budget
    let probe = CliqueSearch::new(&g, budget, 0, false);
    let root_bound = 1 + probe.colour(&root).last().map_or(0, |&(_, c)| c);

    let mut search = CliqueSearch::new(&g, budget, incumbent.len() - 1, false);
    search.expand(&mut vec![0], root.clone());
    let nodes1 = search.nodes;
    let size = search.best.as_ref().map_or(incumbent.len(), |b| b.len().max(incumbent.len()));
    if search.exhausted {
        let best = search
            .best
            .filter(|b| b.len() > incumbent.len())
            .unwrap_or_else(|| incumbent.clone());
        return Ok(CocliqueResult {
            complete: false,
            witness: classify_coclique(t, &to_u32(&best))?,
            upper_bound: root_bound,
            nodes: nodes1,
        });
    }

    // lexicographically least clique of the maximum size
    let mut chosen = vec![0usize];
    let mut cand = root;
    let mut nodes = nodes1;
    while chosen.len() < size {
        let mut placed = false;
        for v in cand.iter().collect::<Vec<_>>() {
            let next = cand.and(&g.adj[v]).above(v);
            let need = size - chosen.len() - 1;
            let ok = if need == 0 {
                true
            } else {
                let mut d = CliqueSearch::new(&g, budget.saturating_sub(nodes), need - 1, true);
                d.expand(&mut Vec::new(), next.clone());
                nodes += d.nodes;
                if d.exhausted {
                    return Err(Error::Precondition(
                        "budget exhausted while extracting the least maximum coclique".into(),
                    ));
                }
                d.best.is_some()
            };
            if ok {
                chosen.push(v);
                cand = next;
                placed = true;
                break;
            }
        }
        assert!(placed, "a clique of the maximum size extends the prefix");
    }
    Ok(CocliqueResult {
        complete: true,
        witness: classify_coclique(t, &to_u32(&chosen))?,
        upper_bound: size,
        nodes,
    })
}

fn to_u32(v: &[usize]) -> Vec<u32> {
    v.iter().map(|&x| x as u32).collect()
}

/// `{g : α^g = β}`.
pub fn coset(t: &GroupTable, alpha: usize, beta: usize) -> Vec<u32> {
    t.coset(alpha, beta)
}

fn indicator_vectors(t: &GroupTable) -> Vec<Vec<BigRational>> {
    let n = t.degree();
    let mut out = vec![vec![BigRational::zero(); t.order()]; n * n];
    for id in 0..t.order() {
        for (alpha, &beta) in t.element(id as u32).iter().enumerate() {
            out[alpha * n + beta as usize][id] = BigRational::one();
        }
    }
    out
}

/// Labels an intersecting set: a stabiliser coset, a set whose
/// characteristic vector lies in V, or neither.
pub fn classify_coclique(t: &GroupTable, set: &[u32]) -> Result<CocliqueWitness> {
    let mut set = set.to_vec();
    set.sort_unstable();
    set.dedup();
    for (i, &u) in set.iter().enumerate() {
        for &v in &set[i + 1..] {
            if !intersect(t, u, v) {
                return Err(Error::Precondition(format!(
                    "elements {u} and {v} do not intersect"
                )));
            }
        }
    }
    let size = set.len();
    let mut coset_pair = None;
    if let Some(&first) = set.first() {
        if (size as u64) * (t.degree() as u64) == t.order() as u64 {
            for alpha in 0..t.degree() {
                let beta = t.element(first)[alpha] as usize;
                if set.iter().all(|&g| t.element(g)[alpha] as usize == beta) {
                    coset_pair = Some((alpha, beta));
                    break;
                }
            }
        }
    }
    let classification = if coset_pair.is_some() {
        CocliqueClass::StabiliserCoset
    } else if t.order() <= MODULE_V_MAX_ORDER && in_span_v(t, &set) {
        CocliqueClass::InSpanV
    } else {
        CocliqueClass::Other
    };
    Ok(CocliqueWitness {
        elements: set,
        size,
        classification,
        coset: coset_pair,
    })
}

fn module_v_basis(t: &GroupTable) -> EchelonBasis {
    let mut basis = EchelonBasis::new();
    for v in indicator_vectors(t) {
        basis.insert(&v);
    }
    basis
}

fn in_span_v(t: &GroupTable, set: &[u32]) -> bool {
    let mut x = vec![BigRational::zero(); t.order()];
    for &g in set {
        x[g as usize] = BigRational::one();
    }
    module_v_basis(t).contains(&x)
}

/// Rank over ℚ of the indicator vectors of the sets `{g : α^g = β}`.
pub fn module_v_rank(t: &GroupTable) -> Result<usize> {
    if t.order() > MODULE_V_MAX_ORDER {
        return Err(Error::Precondition(format!(
            "group order {} exceeds the exact rank limit {MODULE_V_MAX_ORDER}",
            t.order()
        )));
    }
    Ok(module_v_basis(t).rank())
}

#[derive(Clone, Debug, Serialize)]
pub struct CliqueResult {
    pub elements: Option<Vec<u32>>,
    /// Whether the search ran to completion (so `None` proves absence).
    pub complete: bool,
    pub method: &'static str,
}

fn is_derangement(t: &GroupTable, id: u32) -> bool {
    t.element(id).iter().enumerate().all(|(i, &x)| i != x as usize)
}

/// Closure of the given elements if it is a regular subgroup: order |Ω| with
/// every non-identity element a derangement.
fn regular_closure(t: &GroupTable, gens: &[u32]) -> Option<Vec<u32>> {
    let n = t.degree();
    let mut elems = vec![0u32];
    let mut seen = hashbrown::HashSet::new();
    seen.insert(0u32);
    let mut i = 0;
    while i < elems.len() {
        for &g in gens {
            let p = t.multiply(elems[i], g);
            if seen.insert(p) {
                if !is_derangement(t, p) || elems.len() >= n {
                    return None;
                }
                elems.push(p);
            }
        }
        i += 1;
    }
    (elems.len() == n).then(|| {
        elems.sort_unstable();
        elems
    })
}

/// A set of |Ω| elements pairwise differing by derangements. Regular
/// subgroups are tried first (cyclic, then two-generated with the first
/// generator up to conjugacy), then an exact clique search.
pub fn find_sharply_transitive_clique(
    t: &GroupTable,
    class_reps: &[u32],
    budget: u64,
    max_order: usize,
) -> Result<CliqueResult> {
    let n = t.degree();
    if !t.is_k_transitive(1)? {
        return Err(Error::Intransitive);
    }
    let divides = |id: u32| n as u64 % t.element_order(id) == 0;
    let derangements: Vec<u32> = (0..t.order() as u32)
        .filter(|&x| is_derangement(t, x) && divides(x))
        .collect();
    for &x in &derangements {
        if t.element_order(x) as usize == n {
            if let Some(s) = regular_closure(t, &[x]) {
                return Ok(CliqueResult {
                    elements: Some(s),
                    complete: true,
                    method: "regular-cyclic-subgroup",
                });
            }
        }
    }
    for &x in class_reps.iter().filter(|&&x| is_derangement(t, x) && divides(x)) {
        for &y in &derangements {
            if let Some(s) = regular_closure(t, &[x, y]) {
                return Ok(CliqueResult {
                    elements: Some(s),
                    complete: true,
                    method: "regular-subgroup",
                });
            }
        }
    }
    if t.order() > max_order {
        return Ok(CliqueResult {
            elements: None,
            complete: false,
            method: "regular-subgroup",
        });
    }
    let g = Graph::build(t, |u, v| !intersect(t, u, v));
    let mut root = g.adj[0].clone();
    root.clear(0);
    let mut s = CliqueSearch::new(&g, budget, n.saturating_sub(2), true);
    s.expand(&mut vec![0], root);
    Ok(CliqueResult {
        elements: s.best.map(|b| to_u32(&b)),
        complete: !s.exhausted,
        method: "clique-search",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{GeneratorSet, Permutation};
    use crate::table::DEFAULT_CAP;

    fn group(degree: usize, gens: &[&str]) -> GroupTable {
        let gens = gens
            .iter()
            .map(|g| Permutation::parse_cycles(degree, g).unwrap())
            .collect();
        GroupTable::enumerate(&GeneratorSet::new(degree, gens).unwrap(), DEFAULT_CAP).unwrap()
    }

    /// Exhaustive maximum intersecting set size for tiny groups.
    fn brute_force(t: &GroupTable) -> usize {
        let n = t.order();
        let mut best = 0;
        for mask in 1u32..(1 << n) {
            let set: Vec<u32> = (0..n as u32).filter(|&i| mask >> i & 1 == 1).collect();
            if set.len() > best
                && set
                    .iter()
                    .all(|&u| set.iter().all(|&v| u == v || intersect(t, u, v)))
            {
                best = set.len();
            }
        }
        best
    }

    #[test]
    fn s3_coclique_and_clique() {
        let t = group(3, &["(1,2)", "(1,2,3)"]);
        let r = max_coclique_exact(&t, DEFAULT_MAX_ORDER, DEFAULT_BUDGET).unwrap();
        assert!(r.complete);
        assert_eq!(r.witness.size, 2);
        assert_eq!(r.witness.size, brute_force(&t));
        assert_eq!(r.witness.classification, CocliqueClass::StabiliserCoset);
        let c = find_sharply_transitive_clique(&t, &[0, 1, 2], 1000, 400).unwrap();
        assert_eq!(c.elements.unwrap().len(), 3);
        assert_eq!(module_v_rank(&t).unwrap(), 5);
    }

    #[test]
    fn agrees_with_brute_force_on_tiny_groups() {
        for t in [
            group(4, &["(1,2,3,4)"]),
            group(4, &["(1,2)(3,4)", "(1,3)(2,4)"]),
            group(4, &["(1,2,3,4)", "(1,3)"]),
            group(4, &["(1,2,3)", "(2,3,4)"]),
        ] {
            let r = max_coclique_exact(&t, DEFAULT_MAX_ORDER, DEFAULT_BUDGET).unwrap();
            assert_eq!(r.witness.size, brute_force(&t));
        }
    }

    #[test]
    fn non_intersecting_sets_are_rejected() {
        let t = group(3, &["(1,2)", "(1,2,3)"]);
        let c = t.id_of_permutation(&Permutation::parse_cycles(3, "(1,2,3)").unwrap()).unwrap();
        assert!(classify_coclique(&t, &[0, c]).is_err());
    }

    #[test]
    fn budget_exhaustion_is_partial() {
        let t = group(5, &["(1,2,3)", "(1,2,3,4,5)"]);
        let r = max_coclique_exact(&t, DEFAULT_MAX_ORDER, 1).unwrap();
        assert!(!r.complete);
        assert!(r.upper_bound >= r.witness.size);
        assert_eq!(r.witness.size, 12);
    }

    #[test]
    fn frobenius_group_of_order_20_has_regular_translations() {
        let t = group(5, &["(1,2,3,4,5)", "(2,3,5,4)"]);
        assert_eq!(t.order(), 20);
        let c = find_sharply_transitive_clique(&t, &[0], 1000, 400).unwrap();
        assert_eq!(c.method, "regular-cyclic-subgroup");
        assert_eq!(c.elements.unwrap().len(), 5);
    }
}
