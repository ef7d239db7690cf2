//! The Legendre transform of symmetric-function series.
//!
//! For `F` with `∂F/∂p_1 = p_1 + (higher)`, the transform is
//! `G = p_1 h - F ∘ h` where `h` is the plethystic inverse of `∂F/∂p_1`
//! with respect to `p_1`-composition. It satisfies `∂G/∂p_1 = h`, hence
//! `F ∘ (∂G/∂p_1) + G = p_1 ∂G/∂p_1`, and is an involution. Both identities
//! are re-verified term by term on every call — a transform that cannot
//! certify itself returns an error instead of a value.

use crate::partition::Partition;
use crate::plethysm::plethysm;
use crate::ratfun::RatFun;
use crate::symseries::{Basis, SymSeries};
use crate::{Error, Result};

/// Formal derivative with respect to `p_1` (power basis).
pub fn d_dp1(f: &SymSeries) -> Result<SymSeries> {
    if f.basis() != Basis::Power {
        return Err(Error::BasisMismatch {
            expected: Basis::Power,
            found: f.basis(),
        });
    }
    let mut out = SymSeries::zero(Basis::Power, f.cap());
    for (lam, c) in f.iter() {
        let m1 = lam.multiplicity(1);
        if m1 == 0 {
            continue;
        }
        let reduced = lam.remove_one(1).expect("part 1 present");
        out.add_term(reduced, &(c * &RatFun::from_int(m1 as i64)))?;
    }
    Ok(out)
}

/// Compositional inverse of `f = p_1 + (weight >= 2)` under plethysm:
/// returns `g` with `f ∘ g = g ∘ f = p_1`.
pub fn plethystic_inverse_p1(f: &SymSeries) -> Result<SymSeries> {
    if f.basis() != Basis::Power {
        return Err(Error::BasisMismatch {
            expected: Basis::Power,
            found: f.basis(),
        });
    }
    if !f.coeff(&Partition::empty()).is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    let p1 = SymSeries::p(1, f.cap())?;
    if f.component(1) != p1 {
        return Err(Error::BadLinearTerm);
    }
    let tail = f.sub(&p1)?;
    // g = p_1 - tail ∘ g gains one settled weight per pass, because tail has
    // minimum weight 2.
    let mut g = p1.clone();
    for _ in 0..f.cap() {
        let next = p1.sub(&plethysm(&tail, &g)?)?;
        if next == g {
            break;
        }
        g = next;
    }
    if plethysm(f, &g)? != p1 || plethysm(&g, f)? != p1 {
        return Err(Error::Internal(
            "plethystic inverse failed its defining equation".into(),
        ));
    }
    Ok(g)
}

/// Legendre transform `G = p_1 h - F ∘ h`, `h = (∂F/∂p_1)^{<-1>}`.
pub fn legendre_transform(f: &SymSeries) -> Result<SymSeries> {
    let fp = d_dp1(f)?;
    let h = plethystic_inverse_p1(&fp)?;
    let p1 = SymSeries::p(1, f.cap())?;
    let g = p1.mul(&h)?.sub(&plethysm(f, &h)?)?;

    // Certification: ∂G/∂p_1 = h, and the defining identity
    // F ∘ (∂G/∂p_1) + G = p_1 ∂G/∂p_1. The derivative of a series stored to
    // weight `cap` is only determined to weight `cap - 1`, so the first
    // comparison happens there; every term of the identity reads the
    // derivative at weight <= cap - 1, so it holds at the full cap.
    let gp = d_dp1(&g)?;
    if gp.truncate(f.cap().saturating_sub(1)) != h.truncate(f.cap().saturating_sub(1)) {
        return Err(Error::Consistency(
            "Legendre transform: ∂G/∂p_1 differs from the inverted derivative".into(),
        ));
    }
    let lhs = plethysm(f, &gp)?.add(&g)?;
    let rhs = p1.mul(&gp)?;
    if let Some((lam, a, b)) = lhs.first_mismatch(&rhs) {
        return Err(Error::Consistency(format!(
            "Legendre identity fails at p_{{{lam}}}: {a} vs {b}"
        )));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_acts_on_ones() {
        // ∂(p_1^3)/∂p_1 = 3 p_1^2; ∂e_2/∂p_1 = p_1; ∂h_n/∂p_1 = h_{n-1}.
        let p1 = SymSeries::p(1, 6).unwrap();
        let cube = p1.pow(3).unwrap();
        assert_eq!(d_dp1(&cube).unwrap(), p1.pow(2).unwrap().scale(&RatFun::from_int(3)));
        assert_eq!(
            d_dp1(&SymSeries::e(2, 6).unwrap()).unwrap(),
            SymSeries::p(1, 6).unwrap()
        );
        for n in 1..=6u32 {
            assert_eq!(
                d_dp1(&SymSeries::h(n, 6).unwrap()).unwrap(),
                SymSeries::h(n - 1, 6).unwrap(),
                "∂h_{n}/∂p_1"
            );
        }
    }

    #[test]
    fn inverse_of_shifted_geometric_is_catalan() {
        // f = p_1 - p_1^2 inverts to g = sum C_{n-1} p_1^n.
        let cap = 6;
        let p1 = SymSeries::p(1, cap).unwrap();
        let f = p1.sub(&p1.pow(2).unwrap()).unwrap();
        let g = plethystic_inverse_p1(&f).unwrap();
        let catalan = [1i64, 1, 2, 5, 14, 42];
        for n in 1..=cap {
            assert_eq!(
                g.coeff(&Partition::ones(n)),
                RatFun::from_int(catalan[(n - 1) as usize]),
                "Catalan coefficient at weight {n}"
            );
        }
    }

    #[test]
    fn inverse_requires_unit_linear_term() {
        let cap = 5;
        let bad = SymSeries::p(1, cap).unwrap().scale(&RatFun::from_int(2));
        assert!(matches!(
            plethystic_inverse_p1(&bad),
            Err(Error::BadLinearTerm)
        ));
        let bad = SymSeries::p(2, cap).unwrap();
        assert!(matches!(
            plethystic_inverse_p1(&bad),
            Err(Error::BadLinearTerm)
        ));
    }

    #[test]
    fn transform_of_e2_is_h2() {
        // Frozen: the quadratic normalization p_1^2 - e_2 = h_2.
        let e2 = SymSeries::e(2, 6).unwrap();
        let g = legendre_transform(&e2).unwrap();
        assert_eq!(g, SymSeries::h(2, 6).unwrap());
    }

    #[test]
    fn transform_counts_trivalent_trees() {
        // One totally symmetric generator with three legs: F = e_2 - h_3.
        // The transform minus h_2 counts leg-labeled trivalent trees:
        // (2n-5)!! of them at n legs.
        let cap = 7;
        let f = SymSeries::e(2, cap)
            .unwrap()
            .sub(&SymSeries::h(3, cap).unwrap())
            .unwrap();
        let g = legendre_transform(&f).unwrap();
        let counts = [1i64, 3, 15, 105, 945];
        for n in 3..=cap {
            let coeff = g.p1_power_coeff(n);
            let factorial: i64 = (1..=n as i64).product();
            assert_eq!(
                &coeff * &RatFun::from_int(factorial),
                RatFun::from_int(counts[(n - 3) as usize]),
                "trivalent tree count at {n} legs"
            );
        }
    }

    #[test]
    fn transform_is_an_involution() {
        let cap = 7;
        let f = SymSeries::e(2, cap)
            .unwrap()
            .sub(&SymSeries::h(3, cap).unwrap())
            .unwrap()
            .add(&SymSeries::h(4, cap).unwrap().scale(&RatFun::poly(&[0, 0, 2])))
            .unwrap();
        let g = legendre_transform(&f).unwrap();
        let back = legendre_transform(&g).unwrap();
        assert_eq!(back, f);
    }
}
