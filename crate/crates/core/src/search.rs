//! Exact maximum and maximal EKR sets on enumerated dual polar graphs.

use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::geometry::{DualPolarGraph, Subspace};

pub const DEFAULT_BUDGET: u64 = 100_000_000;
pub const DEFAULT_MAXIMAL_CAP: usize = 1_000_000;

/// Adjacency as packed bit rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitGraph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

type Bits = Vec<u64>;

fn bit_set(b: &mut [u64], i: usize) {
    b[i / 64] |= 1 << (i % 64);
}

fn bit_clear(b: &mut [u64], i: usize) {
    b[i / 64] &= !(1 << (i % 64));
}

fn bit_test(b: &[u64], i: usize) -> bool {
    b[i / 64] >> (i % 64) & 1 == 1
}

fn count(b: &[u64]) -> usize {
    b.iter().map(|w| w.count_ones() as usize).sum()
}

fn is_empty(b: &[u64]) -> bool {
    b.iter().all(|&w| w == 0)
}

fn first(b: &[u64]) -> Option<usize> {
    b.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

fn ones(b: &[u64]) -> impl Iterator<Item = usize> + '_ {
    b.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let j = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(i * 64 + j)
        })
    })
}

fn and(a: &[u64], b: &[u64]) -> Bits {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

impl BitGraph {
    pub fn from_fn(n: usize, adj: impl Fn(usize, usize) -> bool) -> Self {
        let words = n.div_ceil(64).max(1);
        let mut rows = vec![0u64; n * words];
        for i in 0..n {
            for j in 0..n {
                if i != j && adj(i, j) {
                    bit_set(&mut rows[i * words..(i + 1) * words], j);
                }
            }
        }
        BitGraph { n, words, rows }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.rows[i * self.words..(i + 1) * self.words]
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        bit_test(self.row(i), j)
    }

    pub fn degree(&self, i: usize) -> usize {
        count(self.row(i))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| ones(self.row(i)).all(|j| self.adjacent(j, i)))
    }

    pub fn is_clique(&self, set: &[usize]) -> bool {
        set.iter().enumerate().all(|(a, &x)| set[a + 1..].iter().all(|&y| self.adjacent(x, y)))
    }

    fn full(&self) -> Bits {
        let mut b = vec![0u64; self.words];
        (0..self.n).for_each(|i| bit_set(&mut b, i));
        b
    }

    /// The graph relabelled so that old vertex `perm[i]` becomes `i`.
    pub fn permuted(&self, perm: &[usize]) -> BitGraph {
        BitGraph::from_fn(self.n, |i, j| self.adjacent(perm[i], perm[j]))
    }

    /// Greedy sequential colouring of `p`: vertices in colouring order with
    /// their (non-decreasing) colour numbers.
    fn colour(&self, p: &[u64]) -> (Vec<usize>, Vec<usize>) {
        let mut order = Vec::with_capacity(count(p));
        let mut colours = Vec::with_capacity(order.capacity());
        let mut rest = p.to_vec();
        let mut k = 0;
        while !is_empty(&rest) {
            k += 1;
            let mut class = rest.clone();
            while let Some(v) = first(&class) {
                bit_clear(&mut rest, v);
                bit_clear(&mut class, v);
                for (c, a) in class.iter_mut().zip(self.row(v)) {
                    *c &= !a;
                }
                order.push(v);
                colours.push(k);
            }
        }
        (order, colours)
    }
}

/// A dual polar graph with the EKR compatibility relation at level `t`.
#[derive(Debug, Clone)]
pub struct EKRInstance<'g> {
    pub graph: &'g DualPolarGraph,
    pub t: usize,
    pub adjacency: BitGraph,
}

impl<'g> EKRInstance<'g> {
    pub fn new(graph: &'g DualPolarGraph, t: usize) -> Self {
        let adjacency = BitGraph::from_fn(graph.n(), |i, j| graph.codim(i, j) <= t);
        EKRInstance { graph, t, adjacency }
    }

    pub fn is_ekr(&self, set: &[usize]) -> bool {
        set.iter().all(|&v| v < self.graph.n()) && self.graph.is_ekr_set(set, self.t)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliqueResult {
    pub size: usize,
    /// Sorted vertex indices.
    pub witness: Vec<usize>,
    pub optimal: bool,
    pub nodes_explored: u64,
    pub millis: u64,
}

struct Shared {
    best: AtomicUsize,
    best_set: Mutex<Vec<usize>>,
    nodes: AtomicU64,
    budget: u64,
    exhausted: AtomicBool,
}

impl Shared {
    fn tick(&self) -> bool {
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.budget {
            self.exhausted.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    fn offer(&self, set: &[usize]) {
        let mut guard = self.best_set.lock().expect("poisoned");
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        if sorted.len() > guard.len() || (sorted.len() == guard.len() && sorted < *guard) {
            *guard = sorted;
            self.best.store(guard.len(), Ordering::Relaxed);
        }
    }
}

/// Branch and bound in the relabelled graph; `labels` maps back.
fn expand(g: &BitGraph, labels: &[usize], r: &mut Vec<usize>, mut p: Bits, sh: &Shared) {
    if !sh.tick() {
        return;
    }
    let (order, colours) = g.colour(&p);
    for i in (0..order.len()).rev() {
        if r.len() + colours[i] <= sh.best.load(Ordering::Relaxed) || sh.exhausted.load(Ordering::Relaxed) {
            return;
        }
        let v = order[i];
        r.push(labels[v]);
        let np = and(&p, g.row(v));
        if is_empty(&np) {
            if r.len() > sh.best.load(Ordering::Relaxed) {
                sh.offer(r);
            }
        } else {
            expand(g, labels, r, np, sh);
        }
        r.pop();
        bit_clear(&mut p, v);
    }
}

/// Lexicographically least clique of size `need` inside `p`, scanning in
/// index order.
fn lex_least(g: &BitGraph, r: &mut Vec<usize>, p: Bits, need: usize, sh: &Shared) -> Option<bool> {
    if need == 0 {
        return Some(true);
    }
    if !sh.tick() {
        return None;
    }
    if count(&p) < need || g.colour(&p).1.last().copied().unwrap_or(0) < need {
        return Some(false);
    }
    let mut rest = p;
    while let Some(v) = first(&rest) {
        if count(&rest) < need {
            break;
        }
        bit_clear(&mut rest, v);
        r.push(v);
        match lex_least(g, r, and(&rest, g.row(v)), need - 1, sh)? {
            true => return Some(true),
            false => {
                r.pop();
            }
        }
    }
    Some(false)
}

/// Maximum clique, with the lexicographically least maximum witness.
pub fn max_clique(g: &BitGraph, budget: u64) -> CliqueResult {
    let start = Instant::now();
    let n = g.n();
    if n == 0 {
        return CliqueResult { size: 0, witness: Vec::new(), optimal: true, nodes_explored: 0, millis: 0 };
    }
    // static order: descending degree, ties by index
    let mut labels: Vec<usize> = (0..n).collect();
    labels.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let h = g.permuted(&labels);
    let sh = Shared {
        best: AtomicUsize::new(0),
        best_set: Mutex::new(Vec::new()),
        nodes: AtomicU64::new(0),
        budget,
        exhausted: AtomicBool::new(false),
    };
    sh.offer(&[0]);
    let full = h.full();
    let (order, colours) = h.colour(&full);
    // root split: branch i sees only the vertices coloured before it
    (0..order.len()).into_par_iter().rev().for_each(|i| {
        if 1 + colours[i] - 1 < sh.best.load(Ordering::Relaxed) || sh.exhausted.load(Ordering::Relaxed) {
            return;
        }
        let v = order[i];
        let mut before = vec![0u64; h.words];
        order[..i].iter().for_each(|&u| bit_set(&mut before, u));
        let mut r = vec![labels[v]];
        let np = and(&before, h.row(v));
        if is_empty(&np) {
            sh.offer(&r);
        } else {
            expand(&h, &labels, &mut r, np, &sh);
        }
    });
    let exhausted = sh.exhausted.load(Ordering::Relaxed);
    let size = sh.best.load(Ordering::Relaxed);
    let mut witness = sh.best_set.lock().expect("poisoned").clone();
    if !exhausted {
        let mut r = Vec::with_capacity(size);
        if let Some(true) = lex_least(g, &mut r, g.full(), size, &sh) {
            witness = r;
        }
    }
    CliqueResult {
        size,
        witness,
        optimal: !exhausted,
        nodes_explored: sh.nodes.load(Ordering::Relaxed).min(budget),
        millis: start.elapsed().as_millis() as u64,
    }
}

pub fn max_ekr(inst: &EKRInstance<'_>, budget: u64) -> CliqueResult {
    max_clique(&inst.adjacency, budget)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaximalSets {
    /// Sorted sets in lexicographic order.
    pub sets: Vec<Vec<usize>>,
    pub truncated: bool,
}

/// All maximal cliques by Bron–Kerbosch with pivoting, up to `cap`.
pub fn maximal_cliques(g: &BitGraph, cap: usize) -> MaximalSets {
    fn bk(g: &BitGraph, r: &mut Vec<usize>, mut p: Bits, mut x: Bits, out: &mut Vec<Vec<usize>>, cap: usize) -> bool {
        if is_empty(&p) {
            if is_empty(&x) {
                if out.len() >= cap {
                    return false;
                }
                let mut s = r.clone();
                s.sort_unstable();
                out.push(s);
            }
            return true;
        }
        let pivot = ones(&p)
            .chain(ones(&x))
            .max_by_key(|&u| (count(&and(&p, g.row(u))), std::cmp::Reverse(u)))
            .expect("p is non-empty");
        let cand: Vec<usize> = ones(&p).filter(|&v| !g.adjacent(pivot, v)).collect();
        for v in cand {
            r.push(v);
            let ok = bk(g, r, and(&p, g.row(v)), and(&x, g.row(v)), out, cap);
            r.pop();
            if !ok {
                return false;
            }
            bit_clear(&mut p, v);
            bit_set(&mut x, v);
        }
        true
    }
    let mut out = Vec::new();
    let complete = g.n() == 0 || bk(g, &mut Vec::new(), g.full(), vec![0; g.words], &mut out, cap);
    if g.n() == 0 {
        out.push(Vec::new());
    }
    out.sort();
    MaximalSets { sets: out, truncated: !complete }
}

pub fn enumerate_maximal(inst: &EKRInstance<'_>, cap: usize) -> MaximalSets {
    maximal_cliques(&inst.adjacency, cap)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaCheck {
    pub t: usize,
    pub sets_checked: usize,
    pub complete: bool,
    pub failures: Vec<Vec<usize>>,
}

impl LemmaCheck {
    pub fn passed(&self) -> bool {
        self.complete && self.failures.is_empty()
    }
}

/// Every maximal `(d, t-1)`-EKR set extends at level `t`.
pub fn check_lemma_3_1(g: &DualPolarGraph, t: usize, cap: usize) -> LemmaCheck {
    if t == 0 {
        // the only maximal set below level 0 is empty
        let ok = g.n() > 0;
        return LemmaCheck { t, sets_checked: 1, complete: true, failures: if ok { vec![] } else { vec![vec![]] } };
    }
    let sets = enumerate_maximal(&EKRInstance::new(g, t - 1), cap);
    let failures: Vec<Vec<usize>> =
        sets.sets.par_iter().filter(|s| g.extension_vertices(s, t).is_empty()).cloned().collect();
    LemmaCheck { t, sets_checked: sets.sets.len(), complete: !sets.truncated, failures }
}

/// Every maximum `(d, 1)`-EKR set is all generators on a `(d-1)`-space.
pub fn check_lemma_3_2(g: &DualPolarGraph, cap: usize) -> LemmaCheck {
    let sets = enumerate_maximal(&EKRInstance::new(g, 1), cap);
    let top = sets.sets.iter().map(Vec::len).max().unwrap_or(0);
    let maximum: Vec<&Vec<usize>> = sets.sets.iter().filter(|s| s.len() == top).collect();
    let failures = maximum
        .par_iter()
        .filter(|s| {
            let m = g.common_meet(s);
            m.dim() + 1 != g.d() || g.meeting_at_least(&m, m.dim()).as_slice() != s.as_slice()
        })
        .map(|s| (*s).clone())
        .collect();
    LemmaCheck { t: 1, sets_checked: maximum.len(), complete: !sets.truncated, failures }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessClass {
    /// All generators through a fixed subspace of dimension at least `d - t`.
    Pencil,
    EvenExample,
    OddExample,
    /// Half the generators of a hyperbolic space with pairwise even codimension.
    HyperbolicSpecial,
    Other,
}

impl WitnessClass {
    pub fn tag(self) -> &'static str {
        match self {
            WitnessClass::Pencil => "pencil",
            WitnessClass::EvenExample => "even-example",
            WitnessClass::OddExample => "odd-example",
            WitnessClass::HyperbolicSpecial => "hyperbolic-special",
            WitnessClass::Other => "other",
        }
    }
}

/// Match a vertex set against the known families of large EKR sets.
pub fn classify_witness(g: &DualPolarGraph, t: usize, set: &[usize]) -> WitnessClass {
    let d = g.d();
    let mut s = set.to_vec();
    s.sort_unstable();
    if s.is_empty() {
        return WitnessClass::Other;
    }
    let meet = g.common_meet(&s);
    if meet.dim() + t >= d && g.meeting_at_least(&meet, meet.dim()) == s {
        return WitnessClass::Pencil;
    }
    if t % 2 == 0 && t <= d && s.iter().any(|&c| g.example_even(c, t).map(|e| e == s).unwrap_or(false)) {
        return WitnessClass::EvenExample;
    }
    if t % 2 == 1 && t <= d && d >= 1 {
        let f = g.field();
        let mut seen: Vec<Subspace> = Vec::new();
        for (i, &a) in s.iter().enumerate() {
            for &b in &s[i + 1..] {
                if g.codim(a, b) != 1 {
                    continue;
                }
                let u = g.vertex(a).intersection(f, g.vertex(b));
                if seen.contains(&u) {
                    continue;
                }
                if g.example_odd(&u, t).map(|e| e == s).unwrap_or(false) {
                    return WitnessClass::OddExample;
                }
                seen.push(u);
            }
        }
    }
    let p = g.params();
    if p.twice_epsilon() == 0
        && d >= 1
        && t + 1 == d
        && 2 * s.len() == g.n()
        && s.iter().enumerate().all(|(i, &a)| s[i + 1..].iter().all(|&b| g.codim(a, b) % 2 == 0))
    {
        return WitnessClass::HyperbolicSpecial;
    }
    WitnessClass::Other
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::hoffman_floor;
    use crate::geometry::build_graph;
    use crate::qcore::{Family, PolarParams};
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn graph(f: Family, q: u64, d: usize) -> DualPolarGraph {
        build_graph(&PolarParams::new(f, q, d).unwrap()).unwrap()
    }

    fn brute_max(g: &BitGraph) -> usize {
        let n = g.n();
        (0u32..1 << n)
            .filter(|m| {
                let s: Vec<usize> = (0..n).filter(|&i| m >> i & 1 == 1).collect();
                g.is_clique(&s)
            })
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap()
    }

    fn brute_maximal(g: &BitGraph) -> Vec<Vec<usize>> {
        let n = g.n();
        let mut out: Vec<Vec<usize>> = (0u32..1 << n)
            .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect::<Vec<_>>())
            .filter(|s| g.is_clique(s) && (0..n).all(|v| s.contains(&v) || !s.iter().all(|&u| g.adjacent(u, v))))
            .collect();
        out.sort();
        out
    }

    proptest! {
        #[test]
        fn clique_matches_brute_force(n in 1usize..13, bits in proptest::collection::vec(any::<bool>(), 78)) {
            let mut k = 0;
            let mut m = vec![vec![false; n]; n];
            for i in 0..n {
                for j in i + 1..n {
                    m[i][j] = bits[k % bits.len()];
                    m[j][i] = m[i][j];
                    k += 1;
                }
            }
            let g = BitGraph::from_fn(n, |i, j| m[i][j]);
            let res = max_clique(&g, DEFAULT_BUDGET);
            prop_assert!(res.optimal);
            prop_assert_eq!(res.size, brute_max(&g));
            prop_assert!(g.is_clique(&res.witness));
            // lexicographically least among maximum cliques
            let least = brute_maximal(&g).into_iter().filter(|s| s.len() == res.size).min().unwrap();
            prop_assert_eq!(&res.witness, &least);
            prop_assert_eq!(maximal_cliques(&g, usize::MAX).sets, brute_maximal(&g));
        }
    }

    #[test]
    fn known_small_values() {
        let g = graph(Family::Symplectic, 2, 2);
        let r = max_ekr(&EKRInstance::new(&g, 1), DEFAULT_BUDGET);
        assert_eq!((r.size, r.optimal), (3, true));
        assert_eq!(max_ekr(&EKRInstance::new(&g, 2), DEFAULT_BUDGET).size, 15);
        assert_eq!(max_ekr(&EKRInstance::new(&g, 0), DEFAULT_BUDGET).size, 1);
        assert_eq!(classify_witness(&g, 1, &r.witness), WitnessClass::Pencil);
        let all = enumerate_maximal(&EKRInstance::new(&g, 1), 1000);
        assert!(!all.truncated);
        assert!(all.sets.iter().all(|s| s.len() == 3));
        assert_eq!(enumerate_maximal(&EKRInstance::new(&g, 2), 10).sets.len(), 1);
        let inst = EKRInstance::new(&g, 1);
        assert!(inst.is_ekr(&[]));
        assert!(inst.is_ekr(&[4]));
        assert!(inst.adjacency.is_symmetric());
    }

    #[test]
    fn ruling_class_is_hyperbolic_special() {
        let g = graph(Family::HyperbolicQPlus, 2, 3);
        let r = max_ekr(&EKRInstance::new(&g, 2), DEFAULT_BUDGET);
        assert_eq!((r.size, r.optimal), (15, true));
        assert_eq!(classify_witness(&g, 2, &r.witness), WitnessClass::HyperbolicSpecial);
        let class: Vec<usize> = (0..g.n()).filter(|&v| g.codim(0, v) % 2 == 0).collect();
        assert_eq!(class.len(), 15);
        assert!(EKRInstance::new(&g, 2).is_ekr(&class));
    }

    #[test]
    fn examples_round_trip() {
        let g = graph(Family::Symplectic, 2, 3);
        let even = g.example_even(5, 2).unwrap();
        assert_eq!(classify_witness(&g, 2, &even), WitnessClass::EvenExample);
        let g = graph(Family::HyperbolicQPlus, 2, 3);
        let u = g.vertex(0).intersection(g.field(), g.vertex((1..g.n()).find(|&v| g.codim(0, v) == 1).unwrap()));
        let odd = g.example_odd(&u, 3).unwrap();
        assert_eq!(odd.len(), 14);
        assert_eq!(classify_witness(&g, 3, &odd), WitnessClass::OddExample);
        let g = graph(Family::Symplectic, 2, 3);
        assert_eq!(classify_witness(&g, 1, &g.point_pencil(g.vertex(0)).unwrap()), WitnessClass::Pencil);
        let b = (1..g.n()).find(|&v| g.codim(0, v) == 1).unwrap();
        assert_eq!(classify_witness(&g, 1, &[0, b]), WitnessClass::Other);
    }

    #[test]
    fn lemmas_on_small_graphs() {
        for (f, q, d) in [(Family::Symplectic, 2, 2), (Family::Symplectic, 2, 3), (Family::HyperbolicQPlus, 2, 2)] {
            let g = graph(f, q, d);
            for t in 0..=d {
                let c = check_lemma_3_1(&g, t, DEFAULT_MAXIMAL_CAP);
                assert!(c.passed(), "{f:?} {q} {d} t={t}: {c:?}");
            }
            assert!(check_lemma_3_2(&g, DEFAULT_MAXIMAL_CAP).passed());
        }
    }

    #[test]
    fn permutation_and_worker_invariance() {
        let g = graph(Family::Symplectic, 2, 3);
        let inst = EKRInstance::new(&g, 2);
        let base = max_ekr(&inst, DEFAULT_BUDGET);
        assert!(base.size as u64 <= hoffman_floor(g.params(), 2).unwrap().try_into().unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..3 {
            let mut perm: Vec<usize> = (0..g.n()).collect();
            perm.shuffle(&mut rng);
            assert_eq!(max_clique(&inst.adjacency.permuted(&perm), DEFAULT_BUDGET).size, base.size);
        }
        for w in [1, 3] {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(w).build().unwrap();
            let r = pool.install(|| max_ekr(&inst, DEFAULT_BUDGET));
            assert_eq!((r.size, &r.witness), (base.size, &base.witness));
        }
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let g = graph(Family::Symplectic, 2, 3);
        let r = max_ekr(&EKRInstance::new(&g, 2), 3);
        assert!(!r.optimal);
        assert!(EKRInstance::new(&g, 2).is_ekr(&r.witness));
        let trunc = maximal_cliques(&EKRInstance::new(&g, 1).adjacency, 2);
        assert!(trunc.truncated);
        assert_eq!(trunc.sets.len(), 2);
    }
}
