//! Sparse symmetric-function series over `Q(t)`, truncated at a degree cap.
//!
//! A [`SymSeries`] is a finite map from partitions to [`RatFun`] coefficients,
//! tagged with a basis and a cap. Terms of weight above the cap are silently
//! unrepresentable — every operation truncates — so two series are comparable
//! only at equal caps, and binary operations insist on it.
//!
//! Multiplication is defined in the power basis, where `p_lam * p_mu` is just
//! the merged partition. Everything else converts through it: Schur via the
//! character tables, complete/elementary via Newton's identities.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::characters::character_table;
use crate::partition::{partitions_of, Partition};
use crate::ratfun::RatFun;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    Power,
    Schur,
    Complete,
    Elementary,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymSeries {
    basis: Basis,
    cap: u32,
    terms: BTreeMap<Partition, RatFun>,
}

impl SymSeries {
    pub fn zero(basis: Basis, cap: u32) -> SymSeries {
        SymSeries {
            basis,
            cap,
            terms: BTreeMap::new(),
        }
    }

    /// Constant series (coefficient of the empty partition).
    pub fn constant(c: RatFun, basis: Basis, cap: u32) -> SymSeries {
        let mut s = SymSeries::zero(basis, cap);
        if !c.is_zero() {
            s.terms.insert(Partition::empty(), c);
        }
        s
    }

    pub fn one(basis: Basis, cap: u32) -> SymSeries {
        SymSeries::constant(RatFun::one(), basis, cap)
    }

    /// The power-sum generator `p_n` as a power-basis series.
    pub fn p(n: u32, cap: u32) -> Result<SymSeries> {
        if n > cap {
            return Err(Error::DegreeAboveCap(n, cap));
        }
        if n == 0 {
            return Err(Error::InvalidPartition("p_0 is not a generator".into()));
        }
        let mut s = SymSeries::zero(Basis::Power, cap);
        s.terms.insert(Partition::single(n)?, RatFun::one());
        Ok(s)
    }

    /// `h_n` expanded in the power basis via Newton's identity
    /// `n h_n = sum_{k=1}^{n} p_k h_{n-k}`.
    pub fn h(n: u32, cap: u32) -> Result<SymSeries> {
        if n > cap {
            return Err(Error::DegreeAboveCap(n, cap));
        }
        let mut hs: Vec<SymSeries> = vec![SymSeries::one(Basis::Power, cap)];
        for m in 1..=n {
            let mut acc = SymSeries::zero(Basis::Power, cap);
            for k in 1..=m {
                acc = acc.add(&SymSeries::p(k, cap)?.mul(&hs[(m - k) as usize])?)?;
            }
            hs.push(acc.scale(&RatFun::ratio(1, m as i64)));
        }
        Ok(hs.pop().expect("nonempty by construction"))
    }

    /// `e_n` via `n e_n = sum_{k=1}^{n} (-1)^(k-1) p_k e_{n-k}`.
    pub fn e(n: u32, cap: u32) -> Result<SymSeries> {
        if n > cap {
            return Err(Error::DegreeAboveCap(n, cap));
        }
        let mut es: Vec<SymSeries> = vec![SymSeries::one(Basis::Power, cap)];
        for m in 1..=n {
            let mut acc = SymSeries::zero(Basis::Power, cap);
            for k in 1..=m {
                let term = SymSeries::p(k, cap)?.mul(&es[(m - k) as usize])?;
                acc = if k % 2 == 1 { acc.add(&term)? } else { acc.sub(&term)? };
            }
            es.push(acc.scale(&RatFun::ratio(1, m as i64)));
        }
        Ok(es.pop().expect("nonempty by construction"))
    }

    /// A single Schur term `c * s_lam`.
    pub fn schur_term(lam: Partition, c: RatFun, cap: u32) -> Result<SymSeries> {
        if lam.weight() > cap {
            return Err(Error::DegreeAboveCap(lam.weight(), cap));
        }
        let mut s = SymSeries::zero(Basis::Schur, cap);
        s.insert(lam, c)?;
        Ok(s)
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, lam: &Partition) -> RatFun {
        self.terms.get(lam).cloned().unwrap_or_else(RatFun::zero)
    }

    /// Coefficient of `p_1^w` (used by the exponential specialization
    /// `p_1 = x, p_n = 0`, under which that is the whole weight-`w` part).
    pub fn p1_power_coeff(&self, w: u32) -> RatFun {
        self.coeff(&Partition::ones(w))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Partition, &RatFun)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sets a single coefficient (dropping explicit zeros).
    pub fn insert(&mut self, lam: Partition, c: RatFun) -> Result<()> {
        if lam.weight() > self.cap {
            return Err(Error::DegreeAboveCap(lam.weight(), self.cap));
        }
        if c.is_zero() {
            self.terms.remove(&lam);
        } else {
            self.terms.insert(lam, c);
        }
        Ok(())
    }

    pub fn add_term(&mut self, lam: Partition, c: &RatFun) -> Result<()> {
        let cur = self.coeff(&lam);
        self.insert(lam, &cur + c)
    }

    fn check_compatible(&self, other: &SymSeries) -> Result<()> {
        if self.basis != other.basis {
            return Err(Error::BasisMismatch {
                expected: self.basis,
                found: other.basis,
            });
        }
        if self.cap != other.cap {
            return Err(Error::CapMismatch(self.cap, other.cap));
        }
        Ok(())
    }

    pub fn add(&self, other: &SymSeries) -> Result<SymSeries> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (lam, c) in &other.terms {
            out.add_term(lam.clone(), c)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SymSeries) -> Result<SymSeries> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> SymSeries {
        self.map(|c| -c)
    }

    pub fn scale(&self, by: &RatFun) -> SymSeries {
        if by.is_zero() {
            return SymSeries::zero(self.basis, self.cap);
        }
        self.map(|c| c * by)
    }

    fn map(&self, f: impl Fn(&RatFun) -> RatFun) -> SymSeries {
        let mut out = SymSeries::zero(self.basis, self.cap);
        for (lam, c) in &self.terms {
            let v = f(c);
            if !v.is_zero() {
                out.terms.insert(lam.clone(), v);
            }
        }
        out
    }

    /// Rewrites every coefficient; fallible version of `map` for evaluations.
    pub fn map_coeffs(&self, f: impl Fn(&RatFun) -> Result<RatFun>) -> Result<SymSeries> {
        let mut out = SymSeries::zero(self.basis, self.cap);
        for (lam, c) in &self.terms {
            let v = f(c)?;
            if !v.is_zero() {
                out.terms.insert(lam.clone(), v);
            }
        }
        Ok(out)
    }

    /// Truncating product; power basis only, where monomials merge parts.
    pub fn mul(&self, other: &SymSeries) -> Result<SymSeries> {
        self.check_compatible(other)?;
        if self.basis != Basis::Power {
            return Err(Error::BasisMismatch {
                expected: Basis::Power,
                found: self.basis,
            });
        }
        let mut out = SymSeries::zero(self.basis, self.cap);
        for (lam, a) in &self.terms {
            for (mu, b) in &other.terms {
                if lam.weight() + mu.weight() > self.cap {
                    continue;
                }
                out.add_term(lam.merge(mu), &(a * b))?;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<SymSeries> {
        let mut acc = SymSeries::one(self.basis, self.cap);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// The homogeneous weight-`w` part, as a series with the same cap.
    pub fn component(&self, w: u32) -> SymSeries {
        let mut out = SymSeries::zero(self.basis, self.cap);
        for (lam, c) in &self.terms {
            if lam.weight() == w {
                out.terms.insert(lam.clone(), c.clone());
            }
        }
        out
    }

    pub fn min_weight(&self) -> Option<u32> {
        self.terms.keys().map(|l| l.weight()).min()
    }

    pub fn max_weight(&self) -> Option<u32> {
        self.terms.keys().map(|l| l.weight()).max()
    }

    /// Lowers the cap, discarding higher terms.
    pub fn truncate(&self, new_cap: u32) -> SymSeries {
        let mut out = SymSeries::zero(self.basis, new_cap.min(self.cap));
        for (lam, c) in &self.terms {
            if lam.weight() <= out.cap {
                out.terms.insert(lam.clone(), c.clone());
            }
        }
        out
    }

    /// Re-tags at a higher cap. Sound only when the series is known to be
    /// exact (e.g. homogeneous), not a truncation — callers assert that.
    pub fn with_cap_exact(&self, new_cap: u32) -> Result<SymSeries> {
        if self.max_weight().unwrap_or(0) > new_cap {
            return Err(Error::DegreeAboveCap(self.max_weight().unwrap(), new_cap));
        }
        let mut out = SymSeries::zero(self.basis, new_cap);
        out.terms = self.terms.clone();
        Ok(out)
    }

    /// Power basis -> Schur basis, weight by weight, via
    /// `p_mu = sum_lam chi^lam(mu) s_lam`.
    pub fn to_schur(&self) -> Result<SymSeries> {
        if self.basis != Basis::Power {
            return Err(Error::BasisMismatch {
                expected: Basis::Power,
                found: self.basis,
            });
        }
        let mut out = SymSeries::zero(Basis::Schur, self.cap);
        let weights: Vec<u32> = {
            let mut ws: Vec<u32> = self.terms.keys().map(|l| l.weight()).collect();
            ws.dedup();
            ws
        };
        for w in weights {
            let parts = partitions_of(w);
            let table = character_table(w)?;
            let index: BTreeMap<&Partition, usize> =
                parts.iter().enumerate().map(|(i, p)| (p, i)).collect();
            for (i, lam) in parts.iter().enumerate() {
                let mut acc = RatFun::zero();
                for (mu, c) in self.terms.range(
                    parts.first().unwrap().clone()..=parts.last().unwrap().clone(),
                ) {
                    if mu.weight() != w {
                        continue;
                    }
                    let j = index[mu];
                    let chi = table[i][j];
                    if chi != 0 {
                        acc = &acc + &(c * &RatFun::from_int(chi));
                    }
                }
                if !acc.is_zero() {
                    out.terms.insert(lam.clone(), acc);
                }
            }
        }
        Ok(out)
    }

    /// Any basis -> power basis.
    pub fn to_power(&self) -> Result<SymSeries> {
        match self.basis {
            Basis::Power => Ok(self.clone()),
            Basis::Schur => {
                let mut out = SymSeries::zero(Basis::Power, self.cap);
                for (lam, c) in &self.terms {
                    let w = lam.weight();
                    for mu in partitions_of(w) {
                        let chi = crate::characters::mn_character(lam, &mu)?;
                        if chi == 0 {
                            continue;
                        }
                        let coeff = &RatFun::from_int(chi) / &RatFun::from_bigint(mu.z());
                        out.add_term(mu, &(&coeff * c))?;
                    }
                }
                Ok(out)
            }
            Basis::Complete | Basis::Elementary => {
                let gen = |k: u32| -> Result<SymSeries> {
                    if self.basis == Basis::Complete {
                        SymSeries::h(k, self.cap)
                    } else {
                        SymSeries::e(k, self.cap)
                    }
                };
                let mut out = SymSeries::zero(Basis::Power, self.cap);
                for (lam, c) in &self.terms {
                    let mut prod = SymSeries::one(Basis::Power, self.cap);
                    for &part in lam.parts() {
                        prod = prod.mul(&gen(part)?)?;
                    }
                    out = out.add(&prod.scale(c))?;
                }
                Ok(out)
            }
        }
    }

    /// First coefficient where the two series differ, for mismatch reports.
    pub fn first_mismatch(&self, other: &SymSeries) -> Option<(Partition, RatFun, RatFun)> {
        let keys: std::collections::BTreeSet<&Partition> =
            self.terms.keys().chain(other.terms.keys()).collect();
        for lam in keys {
            let a = self.coeff(lam);
            let b = other.coeff(lam);
            if a != b {
                return Some((lam.clone(), a, b));
            }
        }
        None
    }

    /// Renders a Schur-basis series in the notation of the tables:
    /// `s_4 - t s_{2^2}`, `(1+t^2) s_4`. Single-monomial coefficients print
    /// bare, anything longer is parenthesized.
    pub fn schur_text(&self) -> Result<String> {
        if self.basis != Basis::Schur {
            return Err(Error::BasisMismatch {
                expected: Basis::Schur,
                found: self.basis,
            });
        }
        if self.terms.is_empty() {
            return Ok("0".to_string());
        }
        let mut out = String::new();
        for (lam, c) in &self.terms {
            let (neg, body) = coefficient_text(c);
            if out.is_empty() {
                if neg {
                    out.push_str("-");
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            if !body.is_empty() {
                out.push_str(&body);
                out.push(' ');
            }
            let sub = lam.to_string();
            if sub.len() == 1 {
                out.push_str(&format!("s_{sub}"));
            } else {
                out.push_str(&format!("s_{{{sub}}}"));
            }
        }
        Ok(out)
    }
}

/// Splits a coefficient into a leading sign and the text to print before
/// `s_lam`; empty text means the coefficient is ±1.
fn coefficient_text(c: &RatFun) -> (bool, String) {
    if let Some((low, coeffs)) = c.laurent() {
        let nonzero = coeffs.iter().filter(|x| !num_traits::Zero::is_zero(*x)).count();
        if nonzero == 1 {
            let (e, a) = coeffs
                .iter()
                .enumerate()
                .find(|(_, x)| !num_traits::Zero::is_zero(*x))
                .map(|(i, x)| (low + i as i64, x.clone()))
                .expect("nonzero term exists");
            let neg = a.is_negative();
            let mag: BigInt = a.abs();
            let mag_text = if num_traits::One::is_one(&mag) {
                String::new()
            } else {
                mag.to_string()
            };
            let t_text = match e {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{e}"),
            };
            let body = match (mag_text.is_empty(), t_text.is_empty()) {
                (true, true) => String::new(),
                (true, false) => t_text,
                (false, true) => mag_text,
                (false, false) => format!("{mag_text}{t_text}"),
            };
            return (neg, body);
        }
        if coeffs.iter().all(|x| !x.is_positive()) {
            let flipped = &RatFun::zero() - c;
            return (true, format!("({flipped})"));
        }
        return (false, format!("({c})"));
    }
    (false, format!("({c})"))
}

impl fmt::Display for SymSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Basis::Schur = self.basis {
            if let Ok(text) = self.schur_text() {
                return write!(f, "{text}");
            }
        }
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let prefix = match self.basis {
            Basis::Power => "p",
            Basis::Schur => "s",
            Basis::Complete => "h",
            Basis::Elementary => "e",
        };
        let mut first = true;
        for (lam, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if lam.is_empty() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c}) {prefix}_{{{lam}}}")?;
            }
        }
        Ok(())
    }
}
