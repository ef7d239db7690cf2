//! Cohomology of configurations of n points in the plane by generators and
//! relations: odd generators w_jk = w_kj, one per pair, subject to the
//! triangle relations w_ij w_jk + w_jk w_ki + w_ki w_ij = 0. Products
//! straighten onto the no-broken-circuit basis; the circle contraction
//! (the derivation sending every generator to 1) carves out the cohomology
//! of the moduli space of n+1 marked points, whose symmetric-group
//! characters this module extracts monomial by monomial.
//!
//! Pairs are ordered lexicographically. Under that order a monomial is
//! broken-circuit-free exactly when no two of its pairs share their larger
//! index, so the basis is enumerable without reference to the relations;
//! straightening repeatedly rewrites an offending pair of factors
//! w_ik w_jk (i < j < k) as w_ij w_jk - w_ij w_ik, which strictly lowers
//! the factor set in lexicographic order.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::characters::{ch_of_character, CharacterVector};
use crate::legendre::d_dp1;
use crate::operads::{ch_moduli_open, poincare_polynomial, Space};
use crate::partition::{partitions_of, Partition};
use crate::ratfun::RatFun;
use crate::ratmat::{kernel_basis, KernelBasis};
use crate::symseries::SymSeries;
use crate::{Error, Result};

/// Largest point count: pair sets index into a 32-bit mask and the full
/// basis has n! elements.
pub const MAX_POINTS: u32 = 7;

fn check_points(n: u32) -> Result<()> {
    if !(1..=MAX_POINTS).contains(&n) {
        return Err(Error::ArityOutOfRange(
            n,
            format!("point count outside 1..={MAX_POINTS}"),
        ));
    }
    Ok(())
}

/// The pairs (j, k), 1 <= j < k <= n, in lexicographic order.
fn edge_list(n: u32) -> Vec<(u32, u32)> {
    let mut edges = Vec::new();
    for j in 1..=n {
        for k in j + 1..=n {
            edges.push((j, k));
        }
    }
    edges
}

fn edge_bit(n: u32, j: u32, k: u32) -> u32 {
    // Pairs with first index j occupy a block of n - j consecutive bits.
    (j - 1) * n - j * (j - 1) / 2 + (k - j - 1)
}

/// A square-free product of generators, kept as a bitmask over the
/// lexicographic pair list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct ArnoldMonomial {
    n: u32,
    mask: u32,
}

impl ArnoldMonomial {
    /// Builds the monomial with the given factors, normalizing each pair to
    /// j < k. Out-of-range or repeated indices within a pair are errors, as
    /// is a repeated factor: a square is not a monomial (it is zero).
    pub fn new(n: u32, pairs: &[(u32, u32)]) -> Result<Self> {
        check_points(n)?;
        let mut mask = 0u32;
        for &(j, k) in pairs {
            let bit = normalize_pair(n, j, k)?;
            if mask >> bit & 1 == 1 {
                return Err(Error::Internal(format!(
                    "repeated factor ({j}, {k}) does not form a monomial"
                )));
            }
            mask |= 1 << bit;
        }
        Ok(ArnoldMonomial { n, mask })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.mask.count_ones()
    }

    pub fn factors(&self) -> Vec<(u32, u32)> {
        let edges = edge_list(self.n);
        (0..edges.len()).filter(|&b| self.mask >> b & 1 == 1).map(|b| edges[b]).collect()
    }

    /// Whether the monomial avoids every broken circuit: under the
    /// lexicographic pair order this says no two factors share their
    /// larger index.
    pub fn is_nbc(&self) -> bool {
        let mut seen = 0u32;
        for (_, k) in self.factors() {
            if seen >> k & 1 == 1 {
                return false;
            }
            seen |= 1 << k;
        }
        true
    }
}

impl std::fmt::Display for ArnoldMonomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.mask == 0 {
            return write!(f, "1");
        }
        for (i, (j, k)) in self.factors().into_iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "w_{j}{k}")?;
        }
        Ok(())
    }
}

fn normalize_pair(n: u32, j: u32, k: u32) -> Result<u32> {
    if j == k || j == 0 || k == 0 || j > n || k > n {
        return Err(Error::ArityOutOfRange(
            j.max(k),
            format!("pair ({j}, {k}) is not two distinct points in 1..={n}"),
        ));
    }
    Ok(edge_bit(n, j.min(k), j.max(k)))
}

/// A rational combination of monomials of one point count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArnoldCombination {
    n: u32,
    terms: BTreeMap<u32, BigRational>,
}

impl ArnoldCombination {
    pub fn zero(n: u32) -> Self {
        ArnoldCombination { n, terms: BTreeMap::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (ArnoldMonomial, &BigRational)> {
        let n = self.n;
        self.terms.iter().map(move |(&mask, c)| (ArnoldMonomial { n, mask }, c))
    }

    pub fn coeff(&self, m: &ArnoldMonomial) -> BigRational {
        self.terms.get(&m.mask).cloned().unwrap_or_else(BigRational::zero)
    }

    fn add_term(&mut self, mask: u32, delta: &BigRational) {
        let entry = self.terms.entry(mask).or_insert_with(BigRational::zero);
        *entry += delta;
        if entry.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn add(&self, other: &ArnoldCombination) -> Result<ArnoldCombination> {
        if self.n != other.n {
            return Err(Error::CapMismatch(self.n, other.n));
        }
        let mut out = self.clone();
        for (mask, c) in &other.terms {
            out.add_term(*mask, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &ArnoldCombination) -> Result<ArnoldCombination> {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, c: &BigRational) -> ArnoldCombination {
        if c.is_zero() {
            return ArnoldCombination::zero(self.n);
        }
        ArnoldCombination {
            n: self.n,
            terms: self.terms.iter().map(|(&m, v)| (m, v * c)).collect(),
        }
    }
}

impl std::fmt::Display for ArnoldCombination {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}) {m}")?;
        }
        Ok(())
    }
}

/// Left-multiplies the generator at `bit` into the monomial `mask`:
/// the sign counts the factors the generator moves past, and a repeated
/// factor kills the product.
fn insert_factor(mask: u32, bit: u32) -> Option<(u32, i64)> {
    if mask >> bit & 1 == 1 {
        return None;
    }
    let below = (mask & ((1 << bit) - 1)).count_ones();
    Some((mask | 1 << bit, if below % 2 == 0 { 1 } else { -1 }))
}

fn position(mask: u32, bit: u32) -> u32 {
    (mask & ((1 << bit) - 1)).count_ones()
}

/// Rewrites one monomial into the nbc basis. Returns integer coordinates.
fn straighten_mask(n: u32, mask: u32) -> BTreeMap<u32, BigInt> {
    let edges = edge_list(n);
    let mut out: BTreeMap<u32, BigInt> = BTreeMap::new();
    let mut work: Vec<(u32, BigInt)> = vec![(mask, BigInt::one())];
    while let Some((mask, coeff)) = work.pop() {
        // First pair of factors sharing their larger index, scanning in
        // lexicographic order.
        let mut by_top: BTreeMap<u32, u32> = BTreeMap::new();
        let mut violation = None;
        for b in 0..edges.len() as u32 {
            if mask >> b & 1 == 0 {
                continue;
            }
            let (_, k) = edges[b as usize];
            if let Some(&first) = by_top.get(&k) {
                violation = Some((first, b));
                break;
            }
            by_top.insert(k, b);
        }
        let Some((b_bit, c_bit)) = violation else {
            *out.entry(mask).or_insert_with(BigInt::zero) += coeff;
            continue;
        };
        let (i, _) = edges[b_bit as usize];
        let (j, _) = edges[c_bit as usize];
        let a_bit = edge_bit(n, i, j);
        // w_ik w_jk = w_ij w_jk - w_ij w_ik, substituted in place: extract
        // the two factors to the front (the second lands one slot short of
        // its position), swap in each replacement product, and re-sort.
        let front = if (position(mask, b_bit) + position(mask, c_bit)) % 2 == 1 { 1 } else { -1 };
        let stripped = mask & !(1 << b_bit) & !(1 << c_bit);
        for (keep_bit, term_sign) in [(c_bit, 1i64), (b_bit, -1i64)] {
            let (with_keep, s1) = insert_factor(stripped, keep_bit).unwrap();
            let Some((full, s2)) = insert_factor(with_keep, a_bit) else {
                continue;
            };
            work.push((full, &coeff * BigInt::from(front * term_sign * s1 * s2)));
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Expands a product of generators, given as index pairs in multiplication
/// order, in the nbc basis. Repeated factors square to zero; the expansion
/// of a basis monomial is itself.
pub fn straighten(n: u32, factors: &[(u32, u32)]) -> Result<ArnoldCombination> {
    check_points(n)?;
    let mut mask = 0u32;
    let mut sign = 1i64;
    // Right-to-left so each generator is a left multiplication.
    for &(j, k) in factors.iter().rev() {
        let bit = normalize_pair(n, j, k)?;
        match insert_factor(mask, bit) {
            Some((next, s)) => {
                mask = next;
                sign *= s;
            }
            None => return Ok(ArnoldCombination::zero(n)),
        }
    }
    let mut out = ArnoldCombination::zero(n);
    for (m, c) in straighten_mask(n, mask) {
        out.add_term(m, &BigRational::from(c * BigInt::from(sign)));
    }
    Ok(out)
}

/// The nbc monomials of one degree, in ascending mask order.
pub fn nbc_basis(n: u32, degree: u32) -> Result<Vec<ArnoldMonomial>> {
    check_points(n)?;
    let mut masks = vec![0u32];
    for k in 2..=n {
        let mut next = masks.clone();
        for j in 1..k {
            let bit = edge_bit(n, j, k);
            next.extend(masks.iter().map(|m| m | 1 << bit));
        }
        masks = next;
    }
    masks.retain(|m| m.count_ones() == degree);
    masks.sort_unstable();
    Ok(masks.into_iter().map(|mask| ArnoldMonomial { n, mask }).collect())
}

/// Signed Poincare polynomial of the configuration space: nbc-basis counts
/// with the (-t)-convention, certified against the falling product of
/// linear factors.
pub fn betti_config(n: u32) -> Result<RatFun> {
    check_points(n)?;
    let mut signed = Vec::new();
    for degree in 0..n {
        let count = nbc_basis(n, degree)?.len() as i64;
        signed.push(if degree % 2 == 0 { count } else { -count });
    }
    let poly = RatFun::poly(&signed);
    let product = poincare_polynomial(Space::Config, n)?;
    if poly != product {
        return Err(Error::Consistency(format!(
            "nbc count polynomial {poly} differs from the falling product {product} at n = {n}"
        )));
    }
    Ok(poly)
}

/// The contraction: the odd derivation with value 1 on every generator.
/// Subsets of nbc monomials are nbc, so no re-straightening is needed.
pub fn contract(c: &ArnoldCombination) -> ArnoldCombination {
    let mut out = ArnoldCombination::zero(c.n);
    for (&mask, coeff) in &c.terms {
        let mut sign = BigRational::one();
        for b in 0..32 {
            if mask >> b & 1 == 1 {
                out.add_term(mask & !(1 << b), &(coeff * &sign));
                sign = -sign;
            }
        }
    }
    out
}

/// Relabels the points of a straightened combination by `sigma` (images of
/// 1..=n in order) and re-straightens.
pub fn permute_straightened(c: &ArnoldCombination, sigma: &[u32]) -> Result<ArnoldCombination> {
    if sigma.len() != c.n as usize {
        return Err(Error::Internal(format!(
            "permutation on {} points applied to {} points",
            sigma.len(),
            c.n
        )));
    }
    let mut out = ArnoldCombination::zero(c.n);
    for (m, coeff) in c.terms() {
        let moved: Vec<(u32, u32)> = m
            .factors()
            .into_iter()
            .map(|(j, k)| (sigma[j as usize - 1], sigma[k as usize - 1]))
            .collect();
        out = out.add(&straighten(c.n, &moved)?.scale(coeff))?;
    }
    Ok(out)
}

/// One cohomological degree of the moduli of n+1 marked points, with a
/// basis in nbc coordinates.
#[derive(Debug, Clone)]
pub struct KernelLayer {
    pub degree: u32,
    pub basis: Vec<ArnoldCombination>,
}

struct RawLayer {
    degree: u32,
    monomials: Vec<ArnoldMonomial>,
    kernel: KernelBasis,
}

fn check_kernel_range(n: u32) -> Result<()> {
    if !(2..=6).contains(&n) {
        return Err(Error::ArityOutOfRange(n, "kernel extraction handles 2..=6 points".into()));
    }
    Ok(())
}

/// Kernels of the contraction in every degree, certified against the open
/// moduli Betti numbers at n+1 marked points. Degrees above n-2, where the
/// kernel must vanish, are checked and dropped.
fn kernel_layers(n: u32) -> Result<Vec<RawLayer>> {
    check_kernel_range(n)?;
    let reference = poincare_polynomial(Space::Open, n + 1)?
        .polynomial()
        .ok_or_else(|| Error::Internal("open Poincare polynomial with a denominator".into()))?;
    let mut layers = Vec::new();
    for degree in 0..n {
        let domain = nbc_basis(n, degree)?;
        let target = nbc_basis(n, degree.saturating_sub(1))?;
        let index: BTreeMap<u32, usize> =
            target.iter().enumerate().map(|(i, m)| (m.mask, i)).collect();
        let mut rows = vec![vec![BigRational::zero(); domain.len()]; target.len()];
        if degree > 0 {
            for (col, m) in domain.iter().enumerate() {
                let single = ArnoldCombination {
                    n,
                    terms: BTreeMap::from([(m.mask, BigRational::one())]),
                };
                for (image, c) in contract(&single).terms() {
                    rows[index[&image.mask]][col] = c.clone();
                }
            }
        }
        let kernel = kernel_basis(rows, domain.len());
        let expected = reference.get(degree as usize).map_or(BigInt::zero(), |c| {
            if !c.is_integer() {
                return BigInt::zero();
            }
            c.to_integer().abs()
        });
        if BigInt::from(kernel.vectors.len()) != expected {
            return Err(Error::Consistency(format!(
                "contraction kernel in degree {degree} at n = {n} has dimension {}, Betti number {expected}",
                kernel.vectors.len()
            )));
        }
        if degree + 2 <= n {
            layers.push(RawLayer { degree, monomials: domain, kernel });
        }
    }
    Ok(layers)
}

/// Explicit graded basis of the cohomology of the moduli of n+1 marked
/// points inside the configuration model: per degree, the kernel of the
/// contraction, as combinations of nbc monomials.
pub fn contraction_kernel(n: u32) -> Result<Vec<KernelLayer>> {
    let mut out = Vec::new();
    for layer in kernel_layers(n)? {
        let basis = layer
            .kernel
            .vectors
            .iter()
            .map(|v| {
                let mut c = ArnoldCombination::zero(n);
                for (m, coeff) in layer.monomials.iter().zip(v) {
                    if !coeff.is_zero() {
                        c.add_term(m.mask, coeff);
                    }
                }
                c
            })
            .collect();
        out.push(KernelLayer { degree: layer.degree, basis });
    }
    Ok(out)
}

/// Permutation with the given cycle type, as images of 1..=n.
fn permutation_of_type(n: u32, mu: &Partition) -> Vec<u32> {
    let mut image: Vec<u32> = (1..=n).collect();
    let mut start = 0u32;
    for &part in mu.parts() {
        for i in 0..part {
            image[(start + i) as usize] = start + (i + 1) % part + 1;
        }
        start += part;
    }
    image
}

/// The symmetric-group character of each cohomological degree of the moduli
/// of n+1 marked points, taken by permuting indices of kernel-basis
/// monomials, re-straightening, and tracing; assembled with the
/// (-t)-convention and certified against the p_1-derivative of the open
/// moduli characteristic.
pub fn equivariant_characteristic(n: u32) -> Result<SymSeries> {
    let layers = kernel_layers(n)?;
    let mut traces: Vec<BTreeMap<Partition, BigRational>> = Vec::new();
    for layer in &layers {
        let mut per_class = BTreeMap::new();
        for mu in partitions_of(n) {
            let sigma = permutation_of_type(n, &mu);
            // Column s of the permutation matrix, as straightened images;
            // the trace reads each kernel vector at its own free column.
            let images: Vec<ArnoldCombination> = layer
                .monomials
                .iter()
                .map(|m| {
                    let single = ArnoldCombination {
                        n,
                        terms: BTreeMap::from([(m.mask, BigRational::one())]),
                    };
                    permute_straightened(&single, &sigma)
                })
                .collect::<Result<_>>()?;
            let mut trace = BigRational::zero();
            for (v, &fc) in layer.kernel.vectors.iter().zip(&layer.kernel.free_columns) {
                let pivot = &layer.monomials[fc];
                for (coeff, image) in v.iter().zip(&images) {
                    if !coeff.is_zero() {
                        trace += coeff * image.coeff(pivot);
                    }
                }
            }
            per_class.insert(mu, trace);
        }
        traces.push(per_class);
    }
    let mut row = SymSeries::zero(crate::symseries::Basis::Power, n);
    for layer in layers.iter().zip(&traces) {
        let (layer, per_class) = layer;
        let mut values = BTreeMap::new();
        for (mu, trace) in per_class {
            if !trace.is_integer() {
                return Err(Error::Consistency(format!(
                    "non-integral trace {trace} at cycle type {mu}, degree {}",
                    layer.degree
                )));
            }
            let v = i64::try_from(trace.to_integer())
                .map_err(|_| Error::Internal("trace exceeds i64".into()))?;
            values.insert(mu.clone(), v);
        }
        let chi = CharacterVector::new(n, values)?;
        let signed_t = (-&RatFun::t()).pow(layer.degree as i32)?;
        row = row.add(&ch_of_character(&chi, n)?.scale(&signed_t))?;
    }
    let open = ch_moduli_open(n + 1)?;
    let closed_form = d_dp1(open.row(n + 1)?)?.with_cap_exact(n)?;
    if let Some((lam, got, want)) = row.first_mismatch(&closed_form) {
        return Err(Error::Consistency(format!(
            "character row at n = {n} differs from the open-row residue at p_{lam}: {got} vs {want}"
        )));
    }
    row.to_schur()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn monomial(n: u32, pairs: &[(u32, u32)]) -> ArnoldCombination {
        straighten(n, pairs).unwrap()
    }

    #[test]
    fn squares_vanish_and_the_triangle_straightens() {
        assert!(straighten(3, &[(1, 2), (1, 2)]).unwrap().is_zero());
        assert!(straighten(4, &[(1, 2), (3, 4), (2, 1)]).unwrap().is_zero());

        // w_23 w_13 = w_12 w_13 - w_12 w_23, directly from the triangle
        // relation on (1, 2, 3).
        let got = monomial(3, &[(2, 3), (1, 3)]);
        let want = monomial(3, &[(1, 2), (1, 3)])
            .sub(&monomial(3, &[(1, 2), (2, 3)]))
            .unwrap();
        assert_eq!(got, want);
        assert_eq!(got.terms().count(), 2);
        assert!(got.terms().all(|(m, _)| m.is_nbc()));

        // Basis monomials are fixed points.
        for m in nbc_basis(4, 2).unwrap() {
            let expanded = straighten(4, &m.factors()).unwrap();
            assert_eq!(expanded.coeff(&m), BigRational::one());
            assert_eq!(expanded.terms().count(), 1);
        }
    }

    #[test]
    fn nbc_counts_match_the_falling_product() {
        for n in 1..=MAX_POINTS {
            betti_config(n).unwrap();
        }
        assert_eq!(betti_config(2).unwrap(), RatFun::poly(&[1, -1]));
        assert_eq!(betti_config(3).unwrap(), RatFun::poly(&[1, -3, 2]));
        assert_eq!(nbc_basis(3, 2).unwrap().len(), 2);
        let total: usize = (0..6).map(|d| nbc_basis(6, d).unwrap().len()).sum();
        assert_eq!(total, 720);
        assert!(betti_config(8).is_err());
    }

    #[test]
    fn contraction_is_a_derivation_on_products() {
        for n in [4u32, 5] {
            let edges = edge_list(n);
            for (x, &e1) in edges.iter().enumerate() {
                for (y, &e2) in edges.iter().enumerate() {
                    for (z, &e3) in edges.iter().enumerate() {
                        if (x + y + z) % 3 != 0 {
                            continue;
                        }
                        let whole = contract(&monomial(n, &[e1, e2, e3]));
                        let leibniz = monomial(n, &[e2, e3])
                            .sub(&monomial(n, &[e1, e3]))
                            .unwrap()
                            .add(&monomial(n, &[e1, e2]))
                            .unwrap();
                        assert_eq!(whole, leibniz, "factors {e1:?} {e2:?} {e3:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn kernel_dimensions_match_open_moduli() {
        let dims: Vec<Vec<usize>> = (2..=6)
            .map(|n| {
                let layers = contraction_kernel(n).unwrap();
                layers
                    .iter()
                    .inspect(|layer| {
                        for v in &layer.basis {
                            assert!(contract(v).is_zero());
                            assert!(v.terms().all(|(m, _)| m.degree() == layer.degree));
                        }
                    })
                    .map(|layer| layer.basis.len())
                    .collect()
            })
            .collect();
        assert_eq!(
            dims,
            vec![
                vec![1],
                vec![1, 2],
                vec![1, 5, 6],
                vec![1, 9, 26, 24],
                vec![1, 14, 71, 154, 120],
            ]
        );
        assert!(contraction_kernel(7).is_err());
    }

    #[test]
    fn action_commutes_with_straightening() {
        let products: [&[(u32, u32)]; 3] =
            [&[(2, 3), (1, 3)], &[(1, 4), (2, 4), (3, 4)], &[(1, 2), (2, 3), (3, 4)]];
        for sigma in [vec![2u32, 1, 3, 4], vec![2u32, 3, 4, 1], vec![1u32, 3, 2, 4]] {
            for factors in products {
                let direct: Vec<(u32, u32)> = factors
                    .iter()
                    .map(|&(j, k)| (sigma[j as usize - 1], sigma[k as usize - 1]))
                    .collect();
                assert_eq!(
                    permute_straightened(&monomial(4, factors), &sigma).unwrap(),
                    monomial(4, &direct)
                );
            }
        }
    }

    #[test]
    fn characters_match_the_residue_of_the_open_row() {
        // Permutation character of the three degree-one generators at n=3:
        // the full symmetric square class, trivial plus standard.
        let basis = nbc_basis(3, 1).unwrap();
        let sigma = vec![2u32, 1, 3];
        let trace: BigRational = basis
            .iter()
            .map(|m| {
                let single = monomial(3, &m.factors());
                permute_straightened(&single, &sigma).unwrap().coeff(m)
            })
            .sum();
        assert_eq!(trace, BigRational::one());

        let row3 = equivariant_characteristic(3).unwrap();
        let want = SymSeries::schur_term(Partition::new(vec![3]).unwrap(), RatFun::one(), 3)
            .unwrap()
            .add(
                &SymSeries::schur_term(
                    Partition::new(vec![2, 1]).unwrap(),
                    -&RatFun::t(),
                    3,
                )
                .unwrap(),
            )
            .unwrap();
        assert!(row3.first_mismatch(&want).is_none());

        for n in [2u32, 4, 5] {
            equivariant_characteristic(n).unwrap();
        }
    }
}
