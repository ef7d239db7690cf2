//! Symmetric-group characters via the Murnaghan–Nakayama rule.
//!
//! Characters are the bridge between the power-sum and Schur bases:
//! `p_mu = sum_lam chi^lam(mu) s_lam` and `s_lam = sum_mu chi^lam(mu)/z_mu p_mu`.
//! The recursion works on beta-sets (first-column hook lengths): removing a
//! border strip of length `r` moves one beta number down by `r`, with sign
//! `(-1)^h` where `h` counts beta numbers jumped over.
//!
//! All values are computed on demand; nothing is tabulated globally, so every
//! call is independent and trivially thread-safe.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;

use crate::partition::{partitions_of, Partition};
use crate::ratfun::RatFun;
use crate::symseries::{Basis, SymSeries};
use crate::{Error, Result};

/// Irreducible character value `chi^lam(mu)`; both must partition the same n.
pub fn mn_character(lam: &Partition, mu: &Partition) -> Result<i64> {
    if lam.weight() != mu.weight() {
        return Err(Error::Consistency(format!(
            "character of a partition of {} at a class of {}",
            lam.weight(),
            mu.weight()
        )));
    }
    let mut memo = HashMap::new();
    Ok(chi(lam.parts(), mu.parts(), 0, &mut memo))
}

fn chi(
    lam: &[u32],
    mu: &[u32],
    mi: usize,
    memo: &mut HashMap<(Vec<u32>, usize), i64>,
) -> i64 {
    if mi == mu.len() {
        return 1; // lam is empty too: weights always stay matched
    }
    let key = (lam.to_vec(), mi);
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let r = mu[mi] as i64;
    let l = lam.len();
    // Strictly decreasing beta-set lam_i + (l - 1 - i).
    let beta: Vec<i64> = lam
        .iter()
        .enumerate()
        .map(|(i, &p)| p as i64 + (l - 1 - i) as i64)
        .collect();
    let mut total = 0i64;
    for (i, &b) in beta.iter().enumerate() {
        let target = b - r;
        if target < 0 || beta.contains(&target) {
            continue;
        }
        let height = beta.iter().filter(|&&x| target < x && x < b).count();
        let sign = if height % 2 == 0 { 1 } else { -1 };
        let mut new_beta = beta.clone();
        new_beta[i] = target;
        new_beta.sort_unstable_by(|a, b| b.cmp(a));
        let new_lam: Vec<u32> = new_beta
            .iter()
            .enumerate()
            .map(|(j, &bj)| (bj - (l - 1 - j) as i64) as u32)
            .filter(|&p| p > 0)
            .collect();
        total += sign * chi(&new_lam, mu, mi + 1, memo);
    }
    memo.insert(key, total);
    total
}

/// A class function on `S_n`, stored as one integer per cycle type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterVector {
    n: u32,
    values: BTreeMap<Partition, i64>,
}

impl CharacterVector {
    /// Builds from explicit values; every class of `S_n` must be present.
    pub fn new(n: u32, values: BTreeMap<Partition, i64>) -> Result<Self> {
        for mu in partitions_of(n) {
            if !values.contains_key(&mu) {
                return Err(Error::Consistency(format!(
                    "missing character value at class {mu}"
                )));
            }
        }
        if values.len() != partitions_of(n).len() {
            return Err(Error::Consistency(
                "character has values at non-classes".into(),
            ));
        }
        Ok(CharacterVector { n, values })
    }

    pub fn from_fn(n: u32, f: impl Fn(&Partition) -> i64) -> Self {
        let values = partitions_of(n)
            .into_iter()
            .map(|mu| {
                let v = f(&mu);
                (mu, v)
            })
            .collect();
        CharacterVector { n, values }
    }

    /// The irreducible character indexed by `lam`.
    pub fn irreducible(lam: &Partition) -> Result<Self> {
        let n = lam.weight();
        let mut values = BTreeMap::new();
        for mu in partitions_of(n) {
            values.insert(mu.clone(), mn_character(lam, &mu)?);
        }
        Ok(CharacterVector { n, values })
    }

    pub fn trivial(n: u32) -> Self {
        CharacterVector::from_fn(n, |_| 1)
    }

    pub fn sign(n: u32) -> Self {
        CharacterVector::from_fn(n, |mu| mu.sign())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn value(&self, mu: &Partition) -> i64 {
        *self.values.get(mu).expect("value at a genuine class")
    }

    pub fn dim(&self) -> i64 {
        self.value(&Partition::ones(self.n))
    }

    pub fn add(&self, other: &CharacterVector) -> Result<CharacterVector> {
        if self.n != other.n {
            return Err(Error::Consistency(format!(
                "adding characters of S_{} and S_{}",
                self.n, other.n
            )));
        }
        let values = self
            .values
            .iter()
            .map(|(mu, v)| (mu.clone(), v + other.value(mu)))
            .collect();
        Ok(CharacterVector { n: self.n, values })
    }

    /// Inner product `<self, other> = (1/n!) sum |class| chi chi'`, exact.
    pub fn inner(&self, other: &CharacterVector) -> Result<num_rational::BigRational> {
        if self.n != other.n {
            return Err(Error::Consistency(format!(
                "pairing characters of S_{} and S_{}",
                self.n, other.n
            )));
        }
        let mut acc = num_rational::BigRational::from_integer(BigInt::from(0));
        for (mu, v) in &self.values {
            let term = num_rational::BigRational::new(
                BigInt::from(v * other.value(mu)),
                mu.z(),
            );
            acc += term;
        }
        Ok(acc)
    }
}

/// Frobenius characteristic of a class function:
/// `ch = sum_mu chi(mu)/z_mu * p_mu`, a homogeneous power-basis series.
pub fn ch_of_character(chi: &CharacterVector, cap: u32) -> Result<SymSeries> {
    if chi.n > cap {
        return Err(Error::DegreeAboveCap(chi.n, cap));
    }
    let mut out = SymSeries::zero(Basis::Power, cap);
    for mu in partitions_of(chi.n) {
        let v = chi.value(&mu);
        if v == 0 {
            continue;
        }
        let coeff = &RatFun::from_int(v) / &RatFun::from_bigint(mu.z());
        out.insert(mu, coeff)?;
    }
    Ok(out)
}

/// Character table of `S_n`: `table[i][j] = chi^{lam_i}(mu_j)` with both axes
/// in the order of [`partitions_of`].
pub fn character_table(n: u32) -> Result<Vec<Vec<i64>>> {
    let parts = partitions_of(n);
    let mut table = Vec::with_capacity(parts.len());
    for lam in &parts {
        let mut row = Vec::with_capacity(parts.len());
        for mu in &parts {
            if lam.weight() != mu.weight() {
                return Err(Error::Internal("ragged character table".into()));
            }
            // The memo key is (shape, position in mu), so it is only valid
            // within a single class.
            let mut memo = HashMap::new();
            row.push(chi(lam.parts(), mu.parts(), 0, &mut memo));
        }
        table.push(row);
    }
    Ok(table)
}
