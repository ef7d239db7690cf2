//! Plethysm and the plethystic exponential/logarithm.
//!
//! The composition `f ∘ g` is determined by three rules: it distributes over
//! sums and products in `f`; `p_n ∘ g` substitutes `t -> t^n` into the
//! coefficients of `g` and `p_j -> p_{jn}` into its monomials; and scalars
//! (rational functions of `t`) pass through untouched, `t ∘ g = t`. The last
//! rule is what makes the grading variable a spectator in the left argument
//! and an active participant in the right one.
//!
//! `Exp` and `Log` are mutually inverse on series with zero constant term:
//! `Exp(f) = exp(sum_k (p_k ∘ f)/k)` (equivalently `sum_n h_n ∘ f`, which the
//! tests check) and `Log(f) = sum_n mu(n)/n log(p_n ∘ f)`.

use crate::partition::Partition;
use crate::ratfun::RatFun;
use crate::symseries::{Basis, SymSeries};
use crate::{Error, Result};

/// Möbius function; `n` must be positive.
pub fn moebius(n: u32) -> i64 {
    assert!(n > 0, "moebius of 0");
    let mut m = n;
    let mut primes = 0;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            m /= d;
            if m % d == 0 {
                return 0;
            }
            primes += 1;
        }
        d += 1;
    }
    if m > 1 {
        primes += 1;
    }
    if primes % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Euler totient; `n` must be positive.
pub fn euler_phi(n: u32) -> u64 {
    assert!(n > 0, "phi of 0");
    let mut m = n as u64;
    let mut result = m;
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            while m % d == 0 {
                m /= d;
            }
            result -= result / d;
        }
        d += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

fn require_power(f: &SymSeries) -> Result<()> {
    if f.basis() != Basis::Power {
        return Err(Error::BasisMismatch {
            expected: Basis::Power,
            found: f.basis(),
        });
    }
    Ok(())
}

/// `p_k ∘ g`: `t -> t^k` in coefficients, every part multiplied by `k`.
pub fn power_plethysm(k: u32, g: &SymSeries) -> Result<SymSeries> {
    require_power(g)?;
    assert!(k > 0, "p_0 is not a power sum");
    let cap = g.cap();
    let tk = RatFun::t_pow(k as i64);
    let mut out = SymSeries::zero(Basis::Power, cap);
    for (lam, c) in g.iter() {
        if lam.weight() * k > cap {
            continue;
        }
        let scaled = Partition::new(lam.parts().iter().map(|&p| p * k).collect())?;
        out.add_term(scaled, &c.compose(&tk)?)?;
    }
    Ok(out)
}

/// Plethystic composition `f ∘ g`. Requires both power-basis with equal caps
/// and `g` without constant term (otherwise the sum would not converge).
pub fn plethysm(f: &SymSeries, g: &SymSeries) -> Result<SymSeries> {
    require_power(f)?;
    require_power(g)?;
    if f.cap() != g.cap() {
        return Err(Error::CapMismatch(f.cap(), g.cap()));
    }
    if !g.coeff(&Partition::empty()).is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    let cap = f.cap();
    // Cache p_k ∘ g for the part sizes that actually occur in f.
    let mut cache: std::collections::BTreeMap<u32, SymSeries> = Default::default();
    for (lam, _) in f.iter() {
        for &k in lam.parts() {
            if !cache.contains_key(&k) {
                cache.insert(k, power_plethysm(k, g)?);
            }
        }
    }
    let mut out = SymSeries::zero(Basis::Power, cap);
    for (lam, c) in f.iter() {
        // Monomials of minimal weight ell(lam) after composition; skip the
        // ones that cannot reach the cap.
        if lam.len() as u32 > cap && !lam.is_empty() {
            continue;
        }
        let mut term = SymSeries::constant(c.clone(), Basis::Power, cap);
        for &k in lam.parts() {
            term = term.mul(&cache[&k])?;
            if term.is_zero() {
                break;
            }
        }
        out = out.add(&term)?;
    }
    Ok(out)
}

/// `exp(u) = sum u^m / m!` for `u` with zero constant term.
pub fn series_exp(u: &SymSeries) -> Result<SymSeries> {
    require_power(u)?;
    if !u.coeff(&Partition::empty()).is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    let cap = u.cap();
    let mut out = SymSeries::one(Basis::Power, cap);
    let mut power = SymSeries::one(Basis::Power, cap);
    let mut factorial = RatFun::one();
    let min_w = match u.min_weight() {
        None => return Ok(out),
        Some(w) => w.max(1),
    };
    for m in 1..=cap / min_w {
        power = power.mul(u)?;
        factorial = &factorial * &RatFun::from_int(m as i64);
        out = out.add(&power.scale(&factorial.inv()?))?;
    }
    Ok(out)
}

/// `log(f) = sum (-1)^(m-1) u^m / m` for `f = 1 + u`.
pub fn series_log(f: &SymSeries) -> Result<SymSeries> {
    require_power(f)?;
    if !f.coeff(&Partition::empty()).is_one() {
        return Err(Error::ConstantTermNotOne);
    }
    let cap = f.cap();
    let mut u = f.clone();
    u.insert(Partition::empty(), RatFun::zero())?;
    let mut out = SymSeries::zero(Basis::Power, cap);
    let mut power = SymSeries::one(Basis::Power, cap);
    let min_w = match u.min_weight() {
        None => return Ok(out),
        Some(w) => w.max(1),
    };
    for m in 1..=cap / min_w {
        power = power.mul(&u)?;
        let sign = if m % 2 == 1 { 1 } else { -1 };
        out = out.add(&power.scale(&RatFun::ratio(sign, m as i64)))?;
    }
    Ok(out)
}

/// `(1 + u)^c = exp(c log(1 + u))` for a rational-function exponent `c`.
pub fn pow_with_exponent(base: &SymSeries, c: &RatFun) -> Result<SymSeries> {
    series_exp(&series_log(base)?.scale(c))
}

/// Plethystic exponential `Exp(f) = exp(sum_k (p_k ∘ f)/k)`.
pub fn pleth_exp(f: &SymSeries) -> Result<SymSeries> {
    require_power(f)?;
    if !f.coeff(&Partition::empty()).is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    let cap = f.cap();
    let mut inner = SymSeries::zero(Basis::Power, cap);
    let min_w = f.min_weight().unwrap_or(cap + 1).max(1);
    for k in 1..=cap / min_w {
        inner = inner.add(&power_plethysm(k, f)?.scale(&RatFun::ratio(1, k as i64)))?;
    }
    series_exp(&inner)
}

/// Plethystic logarithm `Log(f) = sum_n mu(n)/n log(p_n ∘ f)`, the inverse of
/// [`pleth_exp`] on series with constant term 1.
pub fn pleth_log(f: &SymSeries) -> Result<SymSeries> {
    require_power(f)?;
    if !f.coeff(&Partition::empty()).is_one() {
        return Err(Error::ConstantTermNotOne);
    }
    let cap = f.cap();
    let mut u = f.clone();
    u.insert(Partition::empty(), RatFun::zero())?;
    let min_w = u.min_weight().unwrap_or(cap + 1).max(1);
    let mut out = SymSeries::zero(Basis::Power, cap);
    for n in 1..=cap / min_w {
        let m = moebius(n);
        if m == 0 {
            continue;
        }
        let mut pn_f = power_plethysm(n, &u)?;
        pn_f.insert(Partition::empty(), RatFun::one())?;
        out = out.add(&series_log(&pn_f)?.scale(&RatFun::ratio(m, n as i64)))?;
    }
    Ok(out)
}

/// Simultaneous substitution `t -> t_image` in coefficients and
/// `p_n -> scale(n) * p_n` in monomials, where `scale(n)` may involve the
/// ambient `t`. The image of `t` must be nonzero.
pub fn substitute(
    f: &SymSeries,
    t_image: &RatFun,
    p_scale: impl Fn(u32) -> RatFun,
) -> Result<SymSeries> {
    require_power(f)?;
    if t_image.is_zero() {
        return Err(Error::ZeroTImage);
    }
    let mut out = SymSeries::zero(Basis::Power, f.cap());
    for (lam, c) in f.iter() {
        let mut coeff = c.compose(t_image)?;
        for &k in lam.parts() {
            coeff = &coeff * &p_scale(k);
        }
        out.add_term(lam.clone(), &coeff)?;
    }
    Ok(out)
}

/// Operadic suspension on characteristics: `s` steps multiply each monomial's
/// coefficient by `(-t)^s (-1)^(s * length) t^(-s * weight)`. One step up is
/// `f -> -t * f(p_k -> -t^(-k) p_k)`; `s = -1` is its inverse. The grading
/// variable inside coefficients is untouched — only the monomial twist sees it.
pub fn suspend(f: &SymSeries, s: i32) -> Result<SymSeries> {
    require_power(f)?;
    let mut out = SymSeries::zero(Basis::Power, f.cap());
    let global_sign = if s.rem_euclid(2) == 0 { 1 } else { -1 };
    for (lam, c) in f.iter() {
        let parity = (s * lam.len() as i32).rem_euclid(2);
        let sign = global_sign * if parity == 0 { 1 } else { -1 };
        let twist = &RatFun::from_int(sign)
            * &RatFun::t_pow(s as i64 * (1 - lam.weight() as i64));
        out.add_term(lam.clone(), &(c * &twist))?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::partitions_of;

    fn part(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn p(n: u32, cap: u32) -> SymSeries {
        SymSeries::p(n, cap).unwrap()
    }

    #[test]
    fn number_theory_helpers() {
        let mu: Vec<i64> = (1..=12).map(moebius).collect();
        assert_eq!(mu, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]);
        let phi: Vec<u64> = (1..=12).map(euler_phi).collect();
        assert_eq!(phi, vec![1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]);
    }

    #[test]
    fn power_sums_compose_multiplicatively() {
        let out = plethysm(&p(2, 12), &p(3, 12)).unwrap();
        assert_eq!(out, p(6, 12));
        // Rule 3 twists t: p_2 ∘ (t p_1) = t^2 p_2.
        let tp1 = p(1, 6).scale(&RatFun::t());
        let out = plethysm(&p(2, 6), &tp1).unwrap();
        assert_eq!(out, p(2, 6).scale(&RatFun::t_pow(2)));
    }

    #[test]
    fn h2_of_h2_is_the_classical_expansion() {
        // Frozen: h_2 ∘ h_2 = s_4 + s_{2^2}.
        let h2 = SymSeries::h(2, 8).unwrap();
        let got = plethysm(&h2, &h2).unwrap().to_schur().unwrap();
        assert_eq!(got.coeff(&part(&[4])), RatFun::one());
        assert_eq!(got.coeff(&part(&[2, 2])), RatFun::one());
        assert_eq!(got.len(), 2);
    }

    #[test]
    fn plethysm_distributes() {
        let cap = 8;
        let f1 = SymSeries::h(2, cap).unwrap();
        let f2 = p(3, cap).scale(&RatFun::t());
        let g = SymSeries::e(2, cap)
            .unwrap()
            .add(&p(1, cap).scale(&RatFun::t_pow(-1)))
            .unwrap();
        let sum = plethysm(&f1.add(&f2).unwrap(), &g).unwrap();
        let split = plethysm(&f1, &g)
            .unwrap()
            .add(&plethysm(&f2, &g).unwrap())
            .unwrap();
        assert_eq!(sum, split, "(f1+f2)∘g = f1∘g + f2∘g");

        let prod = plethysm(&f1.mul(&f2).unwrap(), &g).unwrap();
        let split = plethysm(&f1, &g)
            .unwrap()
            .mul(&plethysm(&f2, &g).unwrap())
            .unwrap();
        assert_eq!(prod, split, "(f1 f2)∘g = (f1∘g)(f2∘g)");
    }

    #[test]
    fn scalars_pass_through() {
        // (c(t) f) ∘ g = c(t) (f ∘ g): the scalar is not composed.
        let c = &RatFun::poly(&[1, 2]) / &RatFun::poly(&[1, 0, 3]);
        let f = SymSeries::h(2, 6).unwrap();
        let g = p(2, 6).scale(&RatFun::t());
        let lhs = plethysm(&f.scale(&c), &g).unwrap();
        let rhs = plethysm(&f, &g).unwrap().scale(&c);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn exp_agrees_with_definitional_sum_of_h_n() {
        let cap = 7;
        for f in [
            p(1, cap),
            SymSeries::e(2, cap).unwrap().scale(&RatFun::t()),
            p(1, cap).add(&p(3, cap).scale(&RatFun::t_pow(-2))).unwrap(),
        ] {
            let fast = pleth_exp(&f).unwrap();
            let mut definitional = SymSeries::one(Basis::Power, cap);
            for n in 1..=cap {
                definitional = definitional
                    .add(&plethysm(&SymSeries::h(n, cap).unwrap(), &f).unwrap())
                    .unwrap();
            }
            assert_eq!(fast, definitional, "Exp via exp(sum p_k/k) vs sum h_n");
        }
        // Exp(p_1) = 1 + sum h_n.
        let exp_p1 = pleth_exp(&p(1, 5)).unwrap();
        let mut expected = SymSeries::one(Basis::Power, 5);
        for n in 1..=5 {
            expected = expected.add(&SymSeries::h(n, 5).unwrap()).unwrap();
        }
        assert_eq!(exp_p1, expected);
    }

    #[test]
    fn log_inverts_exp() {
        let cap = 7;
        let mut f = SymSeries::zero(Basis::Power, cap);
        f.insert(part(&[1]), RatFun::t()).unwrap();
        f.insert(part(&[2]), RatFun::ratio(-1, 3)).unwrap();
        f.insert(part(&[2, 1]), RatFun::t_pow(-1)).unwrap();
        let round = pleth_log(&pleth_exp(&f).unwrap()).unwrap();
        assert_eq!(round, f);
    }

    #[test]
    fn exp_turns_sums_into_products() {
        let cap = 6;
        let f = p(1, cap);
        let g = SymSeries::e(2, cap).unwrap().scale(&RatFun::t());
        let lhs = pleth_exp(&f.add(&g).unwrap()).unwrap();
        let rhs = pleth_exp(&f).unwrap().mul(&pleth_exp(&g).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitute_sign_twist_is_omega() {
        // p_n -> (-1)^(n-1) p_n sends h_n to e_n.
        let omega = |f: &SymSeries| {
            substitute(f, &RatFun::t(), |k| {
                RatFun::from_int(if k % 2 == 1 { 1 } else { -1 })
            })
            .unwrap()
        };
        for n in 1..=6u32 {
            assert_eq!(
                omega(&SymSeries::h(n, 6).unwrap()),
                SymSeries::e(n, 6).unwrap(),
                "omega(h_{n}) = e_{n}"
            );
        }
        // Schur level: omega(s_lam) = s_lam'.
        for lam in partitions_of(5) {
            let s = SymSeries::schur_term(lam.clone(), RatFun::one(), 5)
                .unwrap()
                .to_power()
                .unwrap();
            let twisted = omega(&s).to_schur().unwrap();
            assert_eq!(
                twisted.coeff(&lam.conjugate()),
                RatFun::one(),
                "omega(s_{lam})"
            );
            assert_eq!(twisted.len(), 1);
        }
    }

    #[test]
    fn substitute_rejects_zero_t_image() {
        let f = p(1, 4);
        assert!(matches!(
            substitute(&f, &RatFun::zero(), |_| RatFun::one()),
            Err(Error::ZeroTImage)
        ));
    }

    #[test]
    fn suspension_matches_hand_computation_and_inverts() {
        // Frozen: one step up on h_2 gives -t^{-1} e_2.
        let h2 = SymSeries::h(2, 6).unwrap();
        let up = suspend(&h2, 1).unwrap();
        let expected = SymSeries::e(2, 6).unwrap().scale(&RatFun::t_pow(-1)).neg();
        assert_eq!(up, expected);

        // Round trips in both orders, including multi-step.
        let mut f = SymSeries::zero(Basis::Power, 6);
        f.insert(part(&[2, 1]), RatFun::poly(&[0, 1, 3])).unwrap();
        f.insert(part(&[4]), RatFun::t_pow(-2)).unwrap();
        assert_eq!(suspend(&suspend(&f, 1).unwrap(), -1).unwrap(), f);
        assert_eq!(suspend(&suspend(&f, -2).unwrap(), 2).unwrap(), f);
        let two_steps = suspend(&suspend(&f, 1).unwrap(), 1).unwrap();
        assert_eq!(suspend(&f, 2).unwrap(), two_steps);
    }

    #[test]
    fn composition_preconditions() {
        let f = p(2, 6);
        let mut g = SymSeries::one(Basis::Power, 6);
        g.insert(part(&[1]), RatFun::one()).unwrap();
        assert!(matches!(plethysm(&f, &g), Err(Error::NonzeroConstantTerm)));
        assert!(matches!(
            plethysm(&f, &p(1, 5)),
            Err(Error::CapMismatch(6, 5))
        ));
        assert!(matches!(
            pleth_log(&SymSeries::zero(Basis::Power, 4)),
            Err(Error::ConstantTermNotOne)
        ));
    }
}
