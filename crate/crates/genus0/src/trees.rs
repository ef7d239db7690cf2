//! Stable genus-0 trees: the combinatorics behind boundary strata of
//! compactified moduli of marked curves.
//!
//! A stable tree on legs `0..n-1` is a tree all of whose vertices have
//! valence at least three. Each edge cuts the leg set in two; recording the
//! side away from leg 0 identifies the tree with a family of subsets
//! ("splits") that are pairwise nested or disjoint. Conversely every such
//! laminar family is a stable tree, so enumeration is a search over
//! compatible split sets and a tree with `e` edges is a sorted list of `e`
//! split masks.
//!
//! Besides enumeration this module provides the equivariant workhorse
//! [`tree_sum_characteristic`]: the symmetric-function characteristic of a
//! sum over all stable trees of tensor products of per-vertex classes,
//! optionally twisted by the sign of the symmetry's action on the edge set.
//! Dimension-level counts ([`count_stable_trees_by_edges`],
//! [`free_operad_dimension`]) use a separate blocks-containing-the-first-leg
//! recursion, so they cross-check the explicit enumeration.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::partition::Partition;
use crate::ratfun::RatFun;
use crate::symseries::{Basis, SymSeries};
use crate::{Error, Result};

/// Largest leg count the bitmask representation supports.
pub const MAX_LEGS: u32 = 30;

/// A stable tree on legs `0..n-1`, stored as the ascending list of its edge
/// splits. Each split is a bitmask of the legs on the side away from leg 0;
/// a valid split has between 2 and n-2 bits and never bit 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StableTree {
    n: u32,
    splits: Vec<u32>,
}

/// One vertex of a stable tree: its external legs and the indices (into the
/// tree's split list) of its incident edges. Valence is `legs + edges`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeVertex {
    pub legs: Vec<u32>,
    pub edges: Vec<usize>,
}

impl TreeVertex {
    pub fn valence(&self) -> usize {
        self.legs.len() + self.edges.len()
    }
}

fn check_n(n: u32) -> Result<()> {
    if !(3..=MAX_LEGS).contains(&n) {
        return Err(Error::ArityOutOfRange(n, format!("need 3..={MAX_LEGS}")));
    }
    Ok(())
}

/// Nested or disjoint, as subsets of the side away from leg 0.
fn compatible(a: u32, b: u32) -> bool {
    let i = a & b;
    i == 0 || i == a || i == b
}

impl StableTree {
    /// The one-vertex tree.
    pub fn corolla(n: u32) -> Result<StableTree> {
        check_n(n)?;
        Ok(StableTree { n, splits: Vec::new() })
    }

    /// Builds a tree from edge splits, validating mask range, split sizes,
    /// and pairwise compatibility.
    pub fn new(n: u32, mut splits: Vec<u32>) -> Result<StableTree> {
        check_n(n)?;
        let full = (1u32 << n) - 1;
        for &s in &splits {
            let size = s.count_ones();
            if s & 1 != 0 || s & !full != 0 || size < 2 || size > n - 2 {
                return Err(Error::Internal(format!("invalid split {s:#b} for n={n}")));
            }
        }
        splits.sort_unstable();
        splits.dedup();
        for i in 0..splits.len() {
            for j in i + 1..splits.len() {
                if !compatible(splits[i], splits[j]) {
                    return Err(Error::Internal(format!(
                        "incompatible splits {:#b}, {:#b}",
                        splits[i], splits[j]
                    )));
                }
            }
        }
        Ok(StableTree { n, splits })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Number of internal edges; the tree has `edges() + 1` vertices.
    pub fn edges(&self) -> usize {
        self.splits.len()
    }

    pub fn splits(&self) -> &[u32] {
        &self.splits
    }

    /// Recovers the vertices. The vertex containing leg 0 comes first; the
    /// others (one per split, the vertex on that split's side closest to the
    /// edge) follow by smallest leg label below the split, ties by mask.
    pub fn vertices(&self) -> Vec<TreeVertex> {
        let e = self.splits.len();
        let full = (1u32 << self.n) - 1;
        // parent[i]: index of the smallest split strictly containing split i.
        let mut parent = vec![usize::MAX; e];
        for i in 0..e {
            let mut best: Option<usize> = None;
            for j in 0..e {
                if i != j
                    && self.splits[i] & self.splits[j] == self.splits[i]
                    && best.map_or(true, |b| {
                        self.splits[j].count_ones() < self.splits[b].count_ones()
                    })
                {
                    best = Some(j);
                }
            }
            if let Some(j) = best {
                parent[i] = j;
            }
        }
        let mut children = vec![Vec::new(); e + 1];
        for i in 0..e {
            let slot = if parent[i] == usize::MAX { e } else { parent[i] };
            children[slot].push(i);
        }
        let mut out = Vec::with_capacity(e + 1);
        // Root vertex: legs outside every maximal split, plus those splits.
        let mut mask = full;
        for &i in &children[e] {
            mask &= !self.splits[i];
        }
        out.push(TreeVertex { legs: bits(mask), edges: children[e].clone() });
        let mut order: Vec<usize> = (0..e).collect();
        order.sort_unstable_by_key(|&i| (self.splits[i].trailing_zeros(), self.splits[i]));
        for i in order {
            let mut mask = self.splits[i];
            for &c in &children[i] {
                mask &= !self.splits[c];
            }
            let mut edges = Vec::with_capacity(children[i].len() + 1);
            edges.push(i);
            edges.extend_from_slice(&children[i]);
            edges.sort_unstable();
            out.push(TreeVertex { legs: bits(mask), edges });
        }
        out
    }

    /// Relabels legs by `perm` (leg `i` becomes `perm[i]`). The result is
    /// again canonical: any image split containing leg 0 is complemented.
    pub fn apply(&self, perm: &[u32]) -> StableTree {
        let full = (1u32 << self.n) - 1;
        let mut splits: Vec<u32> = self
            .splits
            .iter()
            .map(|&s| {
                let mut m = 0u32;
                for b in bits(s) {
                    m |= 1 << perm[b as usize];
                }
                if m & 1 != 0 {
                    m = full & !m;
                }
                m
            })
            .collect();
        splits.sort_unstable();
        StableTree { n: self.n, splits }
    }

    pub fn is_fixed_by(&self, perm: &[u32]) -> bool {
        self.apply(perm).splits == self.splits
    }

    /// For a tree fixed by `perm`, the induced permutation of edge indices.
    fn edge_permutation(&self, perm: &[u32]) -> Vec<usize> {
        let full = (1u32 << self.n) - 1;
        self.splits
            .iter()
            .map(|&s| {
                let mut m = 0u32;
                for b in bits(s) {
                    m |= 1 << perm[b as usize];
                }
                if m & 1 != 0 {
                    m = full & !m;
                }
                self.splits.binary_search(&m).expect("tree not fixed by perm")
            })
            .collect()
    }
}

fn bits(mut mask: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        let b = mask.trailing_zeros();
        out.push(b);
        mask &= mask - 1;
    }
    out
}

/// All valid splits for n legs, ascending. There are `2^(n-1) - n - 1`.
pub fn all_splits(n: u32) -> Result<Vec<u32>> {
    check_n(n)?;
    let mut out = Vec::new();
    for m in 0..(1u32 << (n - 1)) {
        let mask = m << 1;
        let size = mask.count_ones();
        if size >= 2 && size <= n - 2 {
            out.push(mask);
        }
    }
    Ok(out)
}

/// Closed-form count of one-edge trees: `2^(n-1) - n - 1`.
pub fn count_t1(n: u32) -> Result<BigInt> {
    check_n(n)?;
    if n < 4 {
        return Err(Error::ArityOutOfRange(n, "one-edge trees need 4 legs".into()));
    }
    Ok((BigInt::one() << (n - 1)) - BigInt::from(n) - BigInt::one())
}

/// All stable trees on n legs with exactly `e` edges, in deterministic order.
pub fn enumerate_stable_trees(n: u32, e: u32) -> Result<Vec<StableTree>> {
    check_n(n)?;
    if e > n - 3 {
        return Err(Error::ArityOutOfRange(e, format!("edge counts for {n} legs are 0..={}", n - 3)));
    }
    Ok(enumerate_all_stable_trees(n)?
        .into_iter()
        .filter(|t| t.edges() == e as usize)
        .collect())
}

/// All stable trees on n legs, every edge count, in deterministic order.
/// Feasible through n = 8 (39 208 trees); use the counting recursion beyond.
pub fn enumerate_all_stable_trees(n: u32) -> Result<Vec<StableTree>> {
    let splits = all_splits(n)?;
    let mut out = Vec::new();
    let mut chosen: Vec<u32> = Vec::new();
    // Splits are chosen in ascending order, so each laminar family appears
    // exactly once, already sorted.
    fn go(splits: &[u32], from: usize, chosen: &mut Vec<u32>, n: u32, out: &mut Vec<StableTree>) {
        out.push(StableTree { n, splits: chosen.clone() });
        if chosen.len() == (n - 3) as usize {
            return;
        }
        for i in from..splits.len() {
            let s = splits[i];
            if chosen.iter().all(|&c| compatible(c, s)) {
                chosen.push(s);
                go(splits, i + 1, chosen, n, out);
                chosen.pop();
            }
        }
    }
    go(&splits, 0, &mut chosen, n, &mut out);
    Ok(out)
}

// ---------------------------------------------------------------------------
// Dimension-level counting: blocks-containing-the-first-leg recursion.
// ---------------------------------------------------------------------------

fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        num /= BigInt::from(i + 1);
    }
    num
}

fn poly_add(a: &mut Vec<BigInt>, b: &[BigInt]) {
    if a.len() < b.len() {
        a.resize(b.len(), BigInt::zero());
    }
    for (i, c) in b.iter().enumerate() {
        a[i] += c;
    }
}

fn poly_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_scale(a: &[BigInt], c: &BigInt) -> Vec<BigInt> {
    a.iter().map(|x| x * c).collect()
}

/// Number of stable trees on n legs with e edges, returned as the
/// coefficient vector indexed by e = 0..=n-3.
///
/// Rooted recursion: hang the tree from leg 0 and partition the remaining
/// legs into the root vertex's branches. A branch on one leg is that leg; a
/// branch on m >= 2 legs is an edge (one factor of the counting variable)
/// followed by a rooted stable subtree, counted by `r(m)` below. Summing
/// over set partitions uses the block containing the smallest element, which
/// also forces the root to have at least two branches.
pub fn count_stable_trees_by_edges(n: u32) -> Result<Vec<BigInt>> {
    check_n(n)?;
    let m = (n - 1) as usize;
    // w[k]: weight of one branch on k legs; p[k]: all partitions of k legs.
    let mut w: Vec<Vec<BigInt>> = vec![Vec::new(); m + 1];
    let mut p: Vec<Vec<BigInt>> = vec![Vec::new(); m + 1];
    w[1] = vec![BigInt::one()];
    p[0] = vec![BigInt::one()];
    p[1] = vec![BigInt::one()];
    let mut r_last: Vec<BigInt> = vec![BigInt::one()];
    for k in 2..=m {
        // r(k) = partitions into >= 2 blocks = those whose first block is proper.
        let mut r: Vec<BigInt> = Vec::new();
        for first in 1..k {
            let c = binomial(k - 1, first - 1);
            let term = poly_mul(&w[first], &p[k - first]);
            poly_add(&mut r, &poly_scale(&term, &c));
        }
        // One edge above the subtree root: w(k) = s * r(k).
        let mut wk = vec![BigInt::zero()];
        wk.extend_from_slice(&r);
        let mut pk = r.clone();
        poly_add(&mut pk, &wk);
        w[k] = wk;
        p[k] = pk;
        r_last = r;
    }
    r_last.resize((n - 2) as usize, BigInt::zero());
    Ok(r_last)
}

/// Graded dimension in arity n of the free cyclic structure on generators of
/// the given graded dimensions: the sum over stable trees of the product of
/// generator dimension polynomials at the vertices. `gen_dims` must cover
/// every valence from 3 to n.
pub fn free_operad_dimension(gen_dims: &BTreeMap<u32, RatFun>, n: u32) -> Result<RatFun> {
    check_n(n)?;
    for k in 3..=n {
        if !gen_dims.contains_key(&k) {
            return Err(Error::ArityOutOfRange(k, "generator dimension missing".into()));
        }
    }
    let m = (n - 1) as usize;
    let dim = |k: usize| -> &RatFun { &gen_dims[&(k as u32)] };
    // e[k][j]: weighted partitions of k legs into exactly j branches. For
    // j >= 2 the block containing the first leg is proper, so e[k][j] only
    // needs branch weights w[first] with first < k; w[k] itself is the
    // rooted-subtree sum over those, closing the recursion.
    let mut w: Vec<RatFun> = vec![RatFun::zero(); m + 1];
    w[1] = RatFun::one();
    let mut e: Vec<Vec<RatFun>> = vec![vec![RatFun::zero(); m + 2]; m + 1];
    e[0][0] = RatFun::one();
    for k in 1..=m {
        for j in 2..=k {
            let mut total = RatFun::zero();
            for first in 1..k {
                let c = RatFun::from_bigint(binomial(k - 1, first - 1));
                total = &total + &(&(&c * &w[first]) * &e[k - first][j - 1]);
            }
            e[k][j] = total;
        }
        if k >= 2 {
            // Subtree hanging off an edge: its root vertex has valence j + 1.
            let mut total = RatFun::zero();
            for j in 2..=k {
                total = &total + &(dim(j + 1) * &e[k][j]);
            }
            w[k] = total;
        }
        e[k][1] = w[k].clone();
    }
    let mut out = RatFun::zero();
    for j in 2..=m {
        out = &out + &(dim(j + 1) * &e[m][j]);
    }
    Ok(out)
}

/// Both sides of the degree-p Euler comparison between the open cohomology
/// of n marked points and the boundary strata of its compactification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratificationReport {
    pub n: u32,
    pub p: u32,
    pub open_side: BigInt,
    pub tree_side: BigInt,
}

/// Checks `dim H^p(open) = sum_j (-1)^j sum_{trees with p-j edges}
/// [t^(2j)] prod_v (compact Betti polynomial at valence v)`: the Euler
/// characteristic of the stratification spectral sequence in one weight.
/// Returns both sides; inequality is an error, not a report.
pub fn stratification_euler_check(n: u32, p: u32) -> Result<StratificationReport> {
    check_n(n)?;
    if p > n - 3 {
        return Err(Error::ArityOutOfRange(
            p,
            format!("cohomological degrees for {n} legs are 0..={}", n - 3),
        ));
    }
    let as_int_poly = |f: &RatFun| -> Result<Vec<BigInt>> {
        f.integer_polynomial()
            .ok_or_else(|| Error::Internal(format!("Betti polynomial is not integral: {f}")))
    };
    let open_poly = as_int_poly(&crate::operads::poincare_polynomial(
        crate::operads::Space::Open,
        n,
    )?)?;
    let signed = open_poly.get(p as usize).cloned().unwrap_or_default();
    let open_side = if p % 2 == 0 { signed } else { -signed };
    let mut betti: Vec<Vec<BigInt>> = vec![Vec::new(); n as usize + 1];
    for k in 3..=n {
        betti[k as usize] = as_int_poly(&crate::operads::poincare_polynomial(
            crate::operads::Space::Compact,
            k,
        )?)?;
    }
    let mut tree_side = BigInt::zero();
    for j in 0..=p {
        let e = p - j;
        if e > n - 3 {
            continue;
        }
        let mut level = BigInt::zero();
        for tree in enumerate_stable_trees(n, e)? {
            let mut prod = vec![BigInt::one()];
            for v in tree.vertices() {
                prod = poly_mul(&prod, &betti[v.valence()]);
            }
            level += prod.get(2 * j as usize).cloned().unwrap_or_default();
        }
        if j % 2 == 0 {
            tree_side += level;
        } else {
            tree_side -= level;
        }
    }
    if open_side != tree_side {
        return Err(Error::Consistency(format!(
            "stratification Euler check fails at n = {n}, p = {p}: {open_side} vs {tree_side}"
        )));
    }
    Ok(StratificationReport { n, p, open_side, tree_side })
}

// ---------------------------------------------------------------------------
// Equivariant tree sums.
// ---------------------------------------------------------------------------

/// Character value of a symmetric-function class at a conjugacy class:
/// `z(nu)` times the power-sum coefficient.
fn char_value(f: &SymSeries, nu: &Partition) -> Result<RatFun> {
    if f.basis() != Basis::Power {
        return Err(Error::BasisMismatch { expected: Basis::Power, found: f.basis() });
    }
    Ok(&f.coeff(nu) * &RatFun::from_bigint(nu.z()))
}

/// One permutation of cycle type `nu` on `0..n-1`: consecutive cycles.
fn canonical_permutation(nu: &Partition, n: u32) -> Vec<u32> {
    let mut perm: Vec<u32> = (0..n).collect();
    let mut start = 0u32;
    for &part in nu.parts() {
        for i in 0..part {
            perm[(start + i) as usize] = start + (i + 1) % part;
        }
        start += part;
    }
    perm
}

fn compose_perm(a: &[u32], b: &[u32]) -> Vec<u32> {
    // (a then b): i -> b[a[i]]
    a.iter().map(|&x| b[x as usize]).collect()
}

fn compose_idx(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().map(|&x| b[x]).collect()
}

fn cycle_count(perm: &[usize]) -> usize {
    let mut seen = vec![false; perm.len()];
    let mut cycles = 0;
    for i in 0..perm.len() {
        if !seen[i] {
            cycles += 1;
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                j = perm[j];
            }
        }
    }
    cycles
}

/// The characteristic of a sum over all stable trees on n legs of tensor
/// products of per-vertex classes.
///
/// `vertex_chars[k - 3]` is the class placed on every valence-k vertex, a
/// power-basis symmetric function homogeneous of weight k whose coefficients
/// grade the class by powers of t. Each tree is weighted by
/// `edge_weight^edges`, and when `det_edge_twist` is set each symmetry's
/// trace picks up the sign of its permutation of the edge set.
///
/// The trace of a symmetry is a product over its vertex orbits: an orbit of
/// length l contributes the vertex character evaluated at the cycle type of
/// the return map on the representative's flags, with t replaced by t^l.
pub fn tree_sum_characteristic(
    n: u32,
    edge_weight: &RatFun,
    det_edge_twist: bool,
    vertex_chars: &[SymSeries],
) -> Result<SymSeries> {
    check_n(n)?;
    if vertex_chars.len() < (n - 2) as usize {
        return Err(Error::Internal(format!(
            "need vertex characters for arities 3..={n}, got {}",
            vertex_chars.len() + 2
        )));
    }
    for (i, f) in vertex_chars.iter().enumerate() {
        if f.basis() != Basis::Power {
            return Err(Error::BasisMismatch { expected: Basis::Power, found: f.basis() });
        }
        let k = (i + 3) as u32;
        if f.iter().any(|(lam, _)| lam.weight() != k) {
            return Err(Error::Internal(format!("vertex character {k} not homogeneous")));
        }
    }

    let trees = enumerate_all_stable_trees(n)?;
    let incidence: Vec<Vec<TreeVertex>> = trees.iter().map(|t| t.vertices()).collect();

    let mut out = SymSeries::zero(Basis::Power, n);
    for nu in crate::partition::partitions_of(n) {
        let sigma = canonical_permutation(&nu, n);
        let mut total = RatFun::zero();
        for (t, verts) in trees.iter().zip(&incidence) {
            if !t.is_fixed_by(&sigma) {
                continue;
            }
            total = &total + &tree_trace(t, verts, &sigma, edge_weight, det_edge_twist, vertex_chars)?;
        }
        if !total.is_zero() {
            let z = RatFun::from_bigint(nu.z());
            out.add_term(nu, &(&total / &z))?;
        }
    }
    Ok(out)
}

fn tree_trace(
    t: &StableTree,
    verts: &[TreeVertex],
    sigma: &[u32],
    edge_weight: &RatFun,
    det_edge_twist: bool,
    vertex_chars: &[SymSeries],
) -> Result<RatFun> {
    let e = t.edges();
    let edge_perm = t.edge_permutation(sigma);

    // Vertex permutation, via leg/edge signatures.
    let key = |v: &TreeVertex| (v.legs.clone(), v.edges.clone());
    let index: HashMap<(Vec<u32>, Vec<usize>), usize> =
        verts.iter().enumerate().map(|(i, v)| (key(v), i)).collect();
    let vert_perm: Vec<usize> = verts
        .iter()
        .map(|v| {
            let mut legs: Vec<u32> = v.legs.iter().map(|&l| sigma[l as usize]).collect();
            legs.sort_unstable();
            let mut edges: Vec<usize> = v.edges.iter().map(|&i| edge_perm[i]).collect();
            edges.sort_unstable();
            *index.get(&(legs, edges)).expect("vertex image missing")
        })
        .collect();

    let mut trace = if det_edge_twist && (e - cycle_count(&edge_perm)) % 2 == 1 {
        -&edge_weight.pow(e as i32)?
    } else {
        edge_weight.pow(e as i32)?
    };

    let mut seen = vec![false; verts.len()];
    for v0 in 0..verts.len() {
        if seen[v0] {
            continue;
        }
        let mut orbit_len = 0usize;
        let mut v = v0;
        while !seen[v] {
            seen[v] = true;
            v = vert_perm[v];
            orbit_len += 1;
        }
        // Return map sigma^l on the representative's flags.
        let mut sig_l: Vec<u32> = (0..t.n()).collect();
        let mut edge_l: Vec<usize> = (0..e).collect();
        for _ in 0..orbit_len {
            sig_l = compose_perm(&sig_l, sigma);
            edge_l = compose_idx(&edge_l, &edge_perm);
        }
        let cycle_type = flag_cycle_type(&verts[v0], &sig_l, &edge_l)?;
        let k = verts[v0].valence();
        let chi = char_value(&vertex_chars[k - 3], &cycle_type)?;
        let chi = if orbit_len == 1 {
            chi
        } else {
            chi.compose(&RatFun::t_pow(orbit_len as i64))?
        };
        if chi.is_zero() {
            return Ok(RatFun::zero());
        }
        trace = &trace * &chi;
    }
    Ok(trace)
}

/// Cycle type of a flag permutation restricted to one vertex's flags.
fn flag_cycle_type(v: &TreeVertex, leg_map: &[u32], edge_map: &[usize]) -> Result<Partition> {
    #[derive(Clone, Copy, PartialEq, Eq, Hash)]
    enum Flag {
        Leg(u32),
        Edge(usize),
    }
    let flags: Vec<Flag> = v
        .legs
        .iter()
        .map(|&l| Flag::Leg(l))
        .chain(v.edges.iter().map(|&i| Flag::Edge(i)))
        .collect();
    let pos: HashMap<Flag, usize> = flags.iter().enumerate().map(|(i, &f)| (f, i)).collect();
    let step = |f: Flag| -> Flag {
        match f {
            Flag::Leg(l) => Flag::Leg(leg_map[l as usize]),
            Flag::Edge(i) => Flag::Edge(edge_map[i]),
        }
    };
    let mut seen = vec![false; flags.len()];
    let mut parts = Vec::new();
    for i in 0..flags.len() {
        if seen[i] {
            continue;
        }
        let mut len = 0u32;
        let mut f = flags[i];
        loop {
            let j = *pos.get(&f).ok_or_else(|| {
                Error::Internal("flag permutation leaves the vertex".into())
            })?;
            if seen[j] {
                break;
            }
            seen[j] = true;
            len += 1;
            f = step(f);
        }
        parts.push(len);
    }
    Partition::from_unsorted(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::CharacterVector;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn split_count_matches_closed_form() {
        assert!(all_splits(3).unwrap().is_empty());
        assert!(count_t1(3).is_err());
        for n in 4..=9 {
            let splits = all_splits(n).unwrap();
            assert_eq!(BigInt::from(splits.len()), count_t1(n).unwrap());
        }
    }

    #[test]
    fn enumeration_matches_counting_recursion() {
        for n in 3..=7 {
            let by_edges = count_stable_trees_by_edges(n).unwrap();
            for e in 0..=(n - 3) {
                let listed = enumerate_stable_trees(n, e).unwrap();
                assert_eq!(
                    BigInt::from(listed.len()),
                    by_edges[e as usize],
                    "n={n} e={e}"
                );
            }
        }
    }

    #[test]
    fn totals_match_series_reduced_tree_numbers() {
        // Unrooted trees on n labeled legs, all vertices of valence >= 3:
        // 1, 4, 26, 236, 2752, 39208, 660032, 12818912 for n = 3..10.
        let expected: [i64; 8] = [1, 4, 26, 236, 2752, 39208, 660032, 12818912];
        for (i, &want) in expected.iter().enumerate() {
            let n = 3 + i as u32;
            let total: BigInt = count_stable_trees_by_edges(n).unwrap().into_iter().sum();
            assert_eq!(total, big(want), "n={n}");
        }
    }

    #[test]
    fn trivalent_counts_are_double_factorials() {
        // (2n-5)!! trees with all vertices trivalent.
        let mut want = BigInt::one();
        for n in 3..=8u32 {
            if n > 3 {
                want *= big((2 * n - 5) as i64);
            }
            let counted = count_stable_trees_by_edges(n).unwrap()[(n - 3) as usize].clone();
            assert_eq!(counted, want, "n={n}");
            if n <= 7 {
                let listed = enumerate_stable_trees(n, n - 3).unwrap();
                assert_eq!(BigInt::from(listed.len()), want, "n={n} enumerated");
            }
        }
    }

    #[test]
    fn free_structure_on_unit_generators_counts_trees() {
        let dims: BTreeMap<u32, RatFun> = (3..=8).map(|k| (k, RatFun::one())).collect();
        for n in 3..=8 {
            let total: BigInt = count_stable_trees_by_edges(n).unwrap().into_iter().sum();
            assert_eq!(
                free_operad_dimension(&dims, n).unwrap(),
                RatFun::from_bigint(total),
                "n={n}"
            );
        }
    }

    #[test]
    fn free_structure_on_a_trivalent_generator_counts_trivalent_trees() {
        let dims: BTreeMap<u32, RatFun> = (3..=9)
            .map(|k| (k, if k == 3 { RatFun::one() } else { RatFun::zero() }))
            .collect();
        let mut want = BigInt::one();
        for n in 3..=9u32 {
            if n > 3 {
                want *= big((2 * n - 5) as i64);
            }
            assert_eq!(
                free_operad_dimension(&dims, n).unwrap(),
                RatFun::from_bigint(want.clone()),
                "n={n}"
            );
        }
    }

    #[test]
    fn stratification_euler_counts() {
        let r = stratification_euler_check(4, 1).unwrap();
        assert_eq!(r.open_side, big(2));
        let r = stratification_euler_check(5, 1).unwrap();
        assert_eq!(r.open_side, big(5));
        for n in 3..=7u32 {
            for p in 0..=n - 3 {
                let r = stratification_euler_check(n, p).unwrap();
                assert_eq!(r.open_side, r.tree_side);
                if p == 0 {
                    assert_eq!(r.open_side, BigInt::one());
                }
            }
        }
        assert!(stratification_euler_check(5, 3).is_err());
    }

    #[test]
    fn vertex_recovery_is_consistent() {
        for n in 4..=6 {
            for t in enumerate_all_stable_trees(n).unwrap() {
                let verts = t.vertices();
                assert_eq!(verts.len(), t.edges() + 1);
                // Every leg appears exactly once, every edge exactly twice,
                // and all valences are at least 3.
                let mut leg_seen = vec![0u32; n as usize];
                let mut edge_seen = vec![0u32; t.edges()];
                for v in &verts {
                    assert!(v.valence() >= 3);
                    for &l in &v.legs {
                        leg_seen[l as usize] += 1;
                    }
                    for &e in &v.edges {
                        edge_seen[e] += 1;
                    }
                }
                assert!(leg_seen.iter().all(|&c| c == 1));
                assert!(edge_seen.iter().all(|&c| c == 2));
            }
        }
    }

    #[test]
    fn relabeling_is_an_action() {
        let n = 6u32;
        let trees = enumerate_stable_trees(n, 2).unwrap();
        let a: Vec<u32> = vec![1, 2, 0, 4, 3, 5];
        let b: Vec<u32> = vec![5, 4, 3, 2, 1, 0];
        let ab = compose_perm(&a, &b);
        for t in &trees {
            assert_eq!(t.apply(&a).apply(&b), t.apply(&ab));
        }
    }

    #[test]
    fn induced_character_of_one_edge_trees_at_four_legs() {
        // Trivial classes on every vertex, one-edge trees only: the induced
        // S_4-character of the three two-vertex trees is s_4 + s_{2^2}.
        let triv3 = crate::characters::ch_of_character(&CharacterVector::trivial(3), 4).unwrap();
        let chars = vec![triv3, SymSeries::zero(Basis::Power, 4)];
        let sum = tree_sum_characteristic(4, &RatFun::one(), true, &chars).unwrap();
        let want = SymSeries::schur_term(Partition::new(vec![4]).unwrap(), RatFun::one(), 4)
            .unwrap()
            .add(
                &SymSeries::schur_term(Partition::new(vec![2, 2]).unwrap(), RatFun::one(), 4)
                    .unwrap(),
            )
            .unwrap()
            .to_power()
            .unwrap();
        assert_eq!(sum.first_mismatch(&want), None);
    }

    #[test]
    fn tree_sum_at_unit_classes_counts_trees_by_edges() {
        // With the trivial class on every vertex and no determinant twist,
        // the p_1^n coefficient recovers tree counts weighted by edges.
        let n = 6u32;
        let chars: Vec<SymSeries> = (3..=n)
            .map(|k| crate::characters::ch_of_character(&CharacterVector::trivial(k), n).unwrap())
            .collect();
        let sum = tree_sum_characteristic(n, &RatFun::t(), false, &chars).unwrap();
        let ones = Partition::ones(n);
        let dim = &sum.coeff(&ones) * &RatFun::from_bigint(ones.z());
        let by_edges = count_stable_trees_by_edges(n).unwrap();
        let mut want = RatFun::zero();
        for (e, c) in by_edges.iter().enumerate() {
            want = &want + &(&RatFun::from_bigint(c.clone()) * &RatFun::t_pow(e as i64));
        }
        assert_eq!(dim, want);
    }
}
