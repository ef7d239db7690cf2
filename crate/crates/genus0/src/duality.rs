//! Quadratic-duality lab on the two-vertex tree basis: explicit relation
//! vectors for the hypercommutative (generalized associativity) and gravity
//! (generalized Jacobi) presentations, their spans, and the orthogonality
//! between them.
//!
//! Arity n means legs 0..n-1 with output leg 0. A one-edge stable tree is a
//! two-block partition of the legs; the basis stores the block away from
//! leg 0 and displays the block containing it. All inputs are treated as
//! even-degree, so sorting bracket arguments contributes only Koszul signs,
//! all +1: both relation families have unit coefficients. The pairing
//! between the two families is the diagonal form with +1 on every canonical
//! tree. With that convention the two spans annihilate each other and have
//! complementary dimensions — the rank facts this module certifies. Should
//! the zero pairing ever fail, the check is retried with the per-tree
//! orientation sign (the shuffle sign of the tree's leg blocks) and both
//! outcomes are reported.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::partition::Partition;
use crate::ratmat::{bareiss_rank, rref};
use crate::trees::{all_splits, count_t1};
use crate::{Error, Result};

/// The one-edge stable trees on n legs as an ordered basis. Each element is
/// kept as the bitmask of the block away from leg 0 (2..=n-2 bits, never
/// bit 0), in ascending mask order.
#[derive(Debug, Clone)]
pub struct TwoVertexBasis {
    n: u32,
    masks: Vec<u32>,
    index: BTreeMap<u32, usize>,
}

impl TwoVertexBasis {
    pub fn new(n: u32) -> Result<Self> {
        if n < 4 {
            return Err(Error::ArityOutOfRange(n, "one-edge trees need 4 legs".into()));
        }
        let masks = all_splits(n)?;
        let expected = count_t1(n)?;
        if BigInt::from(masks.len()) != expected {
            return Err(Error::Internal(format!(
                "split count {} != 2^(n-1) - n - 1 at n = {n}",
                masks.len()
            )));
        }
        let index = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        Ok(TwoVertexBasis { n, masks, index })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn masks(&self) -> &[u32] {
        &self.masks
    }

    /// Index of the tree with the given block, either side of the edge.
    pub fn index_of(&self, block: u32) -> Result<usize> {
        let mask = if block & 1 == 1 {
            ((1u32 << self.n) - 1) ^ block
        } else {
            block
        };
        self.index.get(&mask).copied().ok_or_else(|| {
            Error::Internal(format!("block {block:#b} is not a stable split at n = {}", self.n))
        })
    }

    /// Canonical representative of element i: the block containing leg 0.
    pub fn canonical(&self, i: usize) -> u32 {
        ((1u32 << self.n) - 1) ^ self.masks[i]
    }

    /// Orientation sign of element i: the sign of the permutation listing
    /// the leg-0 block in ascending order followed by the other block in
    /// ascending order.
    pub fn orientation_sign(&self, i: usize) -> i64 {
        let inner = self.masks[i];
        let mut inversions = 0u32;
        // Inversions are pairs (x, y) with x outside the inner block,
        // y inside, and x > y.
        for y in 1..self.n {
            if inner >> y & 1 == 1 {
                inversions += (y + 1..self.n).filter(|&x| inner >> x & 1 == 0).count() as u32;
            }
        }
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// One relation, as integer coordinates on a [`TwoVertexBasis`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationVector {
    pub coords: Vec<BigInt>,
}

impl RelationVector {
    fn zero(len: usize) -> Self {
        RelationVector { coords: vec![BigInt::zero(); len] }
    }

    fn bump(&mut self, i: usize, delta: i64) {
        self.coords[i] += BigInt::from(delta);
    }
}

fn input_bits(n: u32) -> u32 {
    ((1u32 << n) - 1) & !1
}

/// Every subset of `mask`, including the empty set and `mask` itself.
fn submasks(mask: u32) -> Vec<u32> {
    let mut out = vec![0u32];
    let mut s = mask;
    while s != 0 {
        out.push(s);
        s = (s - 1) & mask;
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// The generalized associativity relations: for inputs a, b, c and every
/// split S1 of the remaining inputs,
/// `sum_S1 [block {a,b} + S1] - sum_S1 [block {b,c} + S1]`, one vector per
/// middle input b and unordered outer pair {a, c}. All coefficients are
/// +1/-1: the inputs are even-degree.
pub fn hycom_relations(n: u32) -> Result<Vec<RelationVector>> {
    let basis = TwoVertexBasis::new(n)?;
    let inputs: Vec<u32> = (1..n).collect();
    let mut out = Vec::new();
    for &b in &inputs {
        for (ai, &a) in inputs.iter().enumerate() {
            if a == b {
                continue;
            }
            for &c in &inputs[ai + 1..] {
                if c == b {
                    continue;
                }
                let rest = input_bits(n) & !(1 << a) & !(1 << b) & !(1 << c);
                let mut vector = RelationVector::zero(basis.len());
                for s1 in submasks(rest) {
                    vector.bump(basis.index_of(1 << a | 1 << b | s1)?, 1);
                    vector.bump(basis.index_of(1 << b | 1 << c | s1)?, -1);
                }
                out.push(vector);
            }
        }
    }
    Ok(out)
}

/// The generalized Jacobi relations: for every way to pick k > 2 of the
/// inputs as bracket arguments (the other l inputs are passengers),
/// `sum_{i<j} [block {a_i, a_j}] - (l > 0) * [block {a_1..a_k}]`.
/// Sorting each term's bracket arguments into ascending order contributes
/// only the Koszul sign, which is +1 for even-degree inputs, so every
/// left-hand coefficient is +1.
pub fn grav_relations(n: u32) -> Result<Vec<RelationVector>> {
    let basis = TwoVertexBasis::new(n)?;
    let all = input_bits(n);
    let mut out = Vec::new();
    for a_mask in submasks(all) {
        let k = a_mask.count_ones();
        if k < 3 {
            continue;
        }
        let a: Vec<u32> = (1..n).filter(|&x| a_mask >> x & 1 == 1).collect();
        let mut vector = RelationVector::zero(basis.len());
        for i in 0..a.len() {
            for j in i + 1..a.len() {
                vector.bump(basis.index_of(1 << a[i] | 1 << a[j])?, 1);
            }
        }
        if k < n - 1 {
            vector.bump(basis.index_of(a_mask)?, -1);
        }
        out.push(vector);
    }
    Ok(out)
}

/// Dimensions and orthogonality of the two relation families at n legs.
/// `pairing_rank` uses the +1-diagonal pairing; `flipped_pairing_rank` is
/// filled only if that fails, with the orientation-signed retry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualityReport {
    pub n: u32,
    pub dim_basis: usize,
    pub hycom_span: usize,
    pub grav_span: usize,
    pub pairing_rank: usize,
    pub flipped_pairing_rank: Option<usize>,
}

fn span_rank(vectors: &[RelationVector]) -> usize {
    bareiss_rank(vectors.iter().map(|v| v.coords.clone()).collect())
}

fn gram_rank(
    grav: &[RelationVector],
    hycom: &[RelationVector],
    metric: impl Fn(usize) -> i64,
) -> (usize, Option<(usize, usize, BigInt)>) {
    let mut first_nonzero = None;
    let mut gram = Vec::with_capacity(grav.len());
    for (gi, g) in grav.iter().enumerate() {
        let mut row = Vec::with_capacity(hycom.len());
        for (hi, h) in hycom.iter().enumerate() {
            let mut entry = BigInt::zero();
            for (s, (x, y)) in g.coords.iter().zip(&h.coords).enumerate() {
                if !x.is_zero() && !y.is_zero() {
                    entry += BigInt::from(metric(s)) * x * y;
                }
            }
            if first_nonzero.is_none() && !entry.is_zero() {
                first_nonzero = Some((gi, hi, entry.clone()));
            }
            row.push(entry);
        }
        gram.push(row);
    }
    (bareiss_rank(gram), first_nonzero)
}

/// Computes both spans and their pairing at n legs, asserting the
/// complementary-dimension identity and the vanishing of the pairing; a
/// violation is an error naming the offending entry.
pub fn pairing_and_ranks(n: u32) -> Result<DualityReport> {
    let basis = TwoVertexBasis::new(n)?;
    let hycom = hycom_relations(n)?;
    let grav = grav_relations(n)?;
    let hycom_span = span_rank(&hycom);
    let grav_span = span_rank(&grav);
    if hycom_span + grav_span != basis.len() {
        return Err(Error::Consistency(format!(
            "relation spans at n = {n} are not complementary: {hycom_span} + {grav_span} != {}",
            basis.len()
        )));
    }
    let (pairing_rank, witness) = gram_rank(&grav, &hycom, |_| 1);
    let flipped_pairing_rank = if pairing_rank == 0 {
        None
    } else {
        let (flipped, flipped_witness) = gram_rank(&grav, &hycom, |s| basis.orientation_sign(s));
        if flipped != 0 {
            let (gi, hi, value) = flipped_witness.unwrap();
            return Err(Error::Consistency(format!(
                "pairing at n = {n} is nonzero under both conventions; \
                 orientation-signed entry ({gi}, {hi}) = {value}, default entry {:?}",
                witness
            )));
        }
        Some(flipped)
    };
    Ok(DualityReport {
        n,
        dim_basis: basis.len(),
        hycom_span,
        grav_span,
        pairing_rank,
        flipped_pairing_rank,
    })
}

/// Trace of the permutation with the given cycle type (on the n-1 inputs)
/// acting on the span of the associativity relations. Traces across all
/// classes determine the span's character as an input-permutation module.
pub fn hycom_span_trace(n: u32, mu: &Partition) -> Result<BigRational> {
    if mu.weight() != n - 1 {
        return Err(Error::InvalidPartition(format!(
            "cycle type {mu} is not a partition of {}",
            n - 1
        )));
    }
    let basis = TwoVertexBasis::new(n)?;
    // A permutation of the inputs with the given cycle type, as images of
    // legs 1..n-1; leg 0 stays put.
    let mut image: Vec<u32> = (0..n).collect();
    let mut start = 1u32;
    for &part in mu.parts() {
        for i in 0..part {
            image[(start + i) as usize] = start + (i + 1) % part;
        }
        start += part;
    }
    let tree_image = |mask: u32| -> u32 {
        (1..n).filter(|&x| mask >> x & 1 == 1).map(|x| 1 << image[x as usize]).sum()
    };
    let perm: Vec<usize> = (0..basis.len())
        .map(|s| basis.index_of(tree_image(basis.masks()[s])))
        .collect::<Result<_>>()?;
    let mut inverse = vec![0usize; perm.len()];
    for (s, &t) in perm.iter().enumerate() {
        inverse[t] = s;
    }
    let mut rows: Vec<Vec<BigRational>> = hycom_relations(n)?
        .iter()
        .map(|v| v.coords.iter().map(|c| BigRational::from(c.clone())).collect())
        .collect();
    let pivots = rref(&mut rows);
    // rref rows are 1 at their own pivot and 0 at the others, so a vector in
    // the span has expansion coefficients equal to its pivot coordinates;
    // the trace sums, over rows, the image row's coordinate at its own
    // pivot, and the image's coordinate there is the row's coordinate at
    // the preimage of the pivot.
    let mut trace = BigRational::zero();
    for (row, &pivot) in rows.iter().zip(&pivots) {
        trace += &row[inverse[pivot]];
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::mn_character;
    use crate::partition::partitions_of;
    use num_traits::One;

    #[test]
    fn basis_is_the_one_edge_tree_set() {
        for n in 4..=7u32 {
            let basis = TwoVertexBasis::new(n).unwrap();
            assert_eq!(BigInt::from(basis.len()), count_t1(n).unwrap());
            for i in 0..basis.len() {
                assert_eq!(basis.canonical(i) & 1, 1);
                assert_eq!(basis.index_of(basis.canonical(i)).unwrap(), i);
            }
        }
        assert!(TwoVertexBasis::new(3).is_err());
    }

    #[test]
    fn associativity_in_lowest_arity_is_the_two_channel_difference() {
        // (a,(b,c)) = ((a,b),c) with (a,b,c) = (1,2,3): the vector supported
        // on blocks {1,2} and {2,3} with opposite unit coefficients.
        let relations = hycom_relations(4).unwrap();
        let basis = TwoVertexBasis::new(4).unwrap();
        let mut want = RelationVector::zero(basis.len());
        want.bump(basis.index_of(0b0110).unwrap(), 1);
        want.bump(basis.index_of(0b1100).unwrap(), -1);
        assert!(relations.contains(&want));
        assert_eq!(relations.len(), 3);
    }

    #[test]
    fn jacobi_has_unit_coefficients() {
        let relations = grav_relations(4).unwrap();
        assert_eq!(relations.len(), 1);
        assert!(relations[0].coords.iter().all(|c| c == &BigInt::one()));

        // n=5: four three-argument instances with one passenger, plus the
        // four-argument instance with none. The first instance brackets
        // inputs {1,2,3} past the passenger 4.
        let relations = grav_relations(5).unwrap();
        assert_eq!(relations.len(), 5);
        let basis = TwoVertexBasis::new(5).unwrap();
        let mut want = RelationVector::zero(basis.len());
        for pair in [0b00110, 0b01010, 0b01100] {
            want.bump(basis.index_of(pair).unwrap(), 1);
        }
        want.bump(basis.index_of(0b01110).unwrap(), -1);
        assert_eq!(relations[0], want);
    }

    #[test]
    fn ranks_are_complementary_and_the_pairing_vanishes() {
        let want = [(4, 3, 2, 1), (5, 10, 5, 5), (6, 25, 9, 16), (7, 56, 14, 42)];
        for (n, dim, hycom, grav) in want {
            let report = pairing_and_ranks(n).unwrap();
            assert_eq!(
                (report.dim_basis, report.hycom_span, report.grav_span, report.pairing_rank),
                (dim, hycom, grav, 0),
                "n = {n}"
            );
            assert_eq!(report.flipped_pairing_rank, None);
            assert_eq!(report.hycom_span, (n as usize - 1) * (n as usize - 2) / 2 - 1);
        }
    }

    #[test]
    fn hycom_span_character_is_the_t_linear_module() {
        // On the plain permutation basis of splits the span realizes the
        // irreducible labelled (n-2, 2) — the Schur class of the t-linear
        // coefficient of the open row; its sign twist is the two-column
        // module the edge-determinant version of the basis would carry.
        // Traces are compared at every cycle type extended by the fixed
        // leg 0.
        for n in [5u32, 6] {
            let lam = Partition::new(vec![n - 2, 2]).unwrap();
            for mu in partitions_of(n - 1) {
                let mut extended = mu.parts().to_vec();
                extended.push(1);
                let extended = Partition::new(extended).unwrap();
                let want = mn_character(&lam, &extended).unwrap();
                let got = hycom_span_trace(n, &mu).unwrap();
                assert_eq!(got, BigRational::from(BigInt::from(want)), "n = {n}, mu = {mu}");
            }
        }
    }
}
