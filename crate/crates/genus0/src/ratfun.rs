//! Rational functions in the grading variable `t`, exact over `Z`.
//!
//! Every series coefficient in this crate is a [`RatFun`]: a quotient of
//! integer polynomials kept in canonical form — numerator and denominator
//! coprime (both as polynomials and in integer content), denominator nonzero
//! with positive leading coefficient. Equality of canonical forms is then
//! literal equality, which is what "exact arithmetic" means here: every
//! comparison in the test suite is `==`, never a tolerance.
//!
//! Laurent polynomials (`t^-k` factors) are just quotients with a monomial
//! denominator; nothing special-cases them until display time.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Dense integer polynomial, coefficients ascending in degree, no trailing
/// zeros (zero polynomial = empty vector).
#[derive(Debug, Clone, PartialEq, Eq)]
struct Poly(Vec<BigInt>);

impl Poly {
    fn zero() -> Self {
        Poly(Vec::new())
    }

    fn constant(c: BigInt) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly(vec![c])
        }
    }

    fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    fn monomial(coeff: BigInt, degree: usize) -> Self {
        if coeff.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); degree + 1];
        coeffs[degree] = coeff;
        Poly(coeffs)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        // Degree of the zero polynomial never matters on any path that asks.
        self.0.len().saturating_sub(1)
    }

    fn leading(&self) -> BigInt {
        self.0.last().cloned().unwrap_or_else(BigInt::zero)
    }

    fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let mut coeffs = vec![BigInt::zero(); n];
        for (i, c) in self.0.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in other.0.iter().enumerate() {
            coeffs[i] += c;
        }
        Poly::from_coeffs(coeffs)
    }

    fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly::from_coeffs(coeffs)
    }

    /// Positive gcd of the coefficients; 0 for the zero polynomial.
    fn content(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    fn scale_down_exact(&self, d: &BigInt) -> Poly {
        Poly(self.0.iter().map(|c| c / d).collect())
    }

    fn primitive(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale_down_exact(&self.content())
    }

    /// Exact long division; panics if not exact (callers divide by a gcd).
    fn div_exact(&self, divisor: &Poly) -> Poly {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Poly::zero();
        }
        let mut rem = self.0.clone();
        let dd = divisor.degree();
        let lead = divisor.leading();
        assert!(rem.len() > dd, "inexact polynomial division");
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let head = rem[k + dd].clone();
            if head.is_zero() {
                continue;
            }
            let (q, r) = head.div_rem(&lead);
            assert!(r.is_zero(), "inexact polynomial division");
            for (j, c) in divisor.0.iter().enumerate() {
                rem[k + j] -= &q * c;
            }
            quot[k] = q;
        }
        assert!(rem.iter().all(|c| c.is_zero()), "inexact polynomial division");
        Poly::from_coeffs(quot)
    }

    /// Primitive gcd with positive leading coefficient, via a pseudo-remainder
    /// sequence reduced to primitive parts at every step.
    fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.primitive();
        let mut b = other.primitive();
        if a.is_zero() {
            return b.positive_leading();
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive();
            a = b;
            b = r;
        }
        a.positive_leading()
    }

    fn positive_leading(&self) -> Poly {
        if self.leading().is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    fn pseudo_rem(&self, divisor: &Poly) -> Poly {
        let mut r = self.clone();
        let dd = divisor.degree();
        let c = divisor.leading();
        while !r.is_zero() && r.degree() >= dd {
            let shift = r.degree() - dd;
            let lr = r.leading();
            let scaled = Poly(r.0.iter().map(|x| x * &c).collect());
            let mut sub = vec![BigInt::zero(); shift];
            sub.extend(divisor.0.iter().map(|x| x * &lr));
            r = Poly::from_coeffs(scaled.0).sub(&Poly::from_coeffs(sub));
        }
        r
    }

    fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }
}

/// A rational function of `t` in canonical form. See the module docs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    fn normalized(num: Poly, den: Poly) -> RatFun {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFun {
                num: Poly::zero(),
                den: Poly::constant(BigInt::one()),
            };
        }
        let cn = num.content();
        let cd = den.content();
        let pn = num.scale_down_exact(&cn);
        let pd = den.scale_down_exact(&cd);
        let g = pn.gcd(&pd);
        let mut pn = pn.div_exact(&g);
        let mut pd = pd.div_exact(&g);
        if pd.leading().is_negative() {
            pn = pn.neg();
            pd = pd.neg();
        }
        let c = cn.gcd(&cd);
        let num = pn.mul(&Poly::constant(&cn / &c));
        let den = pd.mul(&Poly::constant(&cd / &c));
        RatFun { num, den }
    }

    pub fn zero() -> RatFun {
        RatFun {
            num: Poly::zero(),
            den: Poly::constant(BigInt::one()),
        }
    }

    pub fn one() -> RatFun {
        RatFun::from_int(1)
    }

    pub fn from_int(n: i64) -> RatFun {
        RatFun {
            num: Poly::constant(BigInt::from(n)),
            den: Poly::constant(BigInt::one()),
        }
    }

    pub fn from_bigint(n: BigInt) -> RatFun {
        RatFun {
            num: Poly::constant(n),
            den: Poly::constant(BigInt::one()),
        }
    }

    pub fn from_rational(q: &BigRational) -> RatFun {
        RatFun::normalized(
            Poly::constant(q.numer().clone()),
            Poly::constant(q.denom().clone()),
        )
    }

    /// Polynomial with the given ascending integer coefficients.
    pub fn poly(coeffs: &[i64]) -> RatFun {
        RatFun::normalized(
            Poly::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect()),
            Poly::constant(BigInt::one()),
        )
    }

    pub fn poly_big(coeffs: Vec<BigInt>) -> RatFun {
        RatFun::normalized(Poly::from_coeffs(coeffs), Poly::constant(BigInt::one()))
    }

    pub fn t() -> RatFun {
        RatFun::t_pow(1)
    }

    /// `t^k` for any integer `k`, negative powers included.
    pub fn t_pow(k: i64) -> RatFun {
        if k >= 0 {
            RatFun {
                num: Poly::monomial(BigInt::one(), k as usize),
                den: Poly::constant(BigInt::one()),
            }
        } else {
            RatFun {
                num: Poly::constant(BigInt::one()),
                den: Poly::monomial(BigInt::one(), (-k) as usize),
            }
        }
    }

    /// `n/d` as a constant.
    pub fn ratio(n: i64, d: i64) -> RatFun {
        assert!(d != 0, "zero denominator");
        RatFun::normalized(
            Poly::constant(BigInt::from(n)),
            Poly::constant(BigInt::from(d)),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == Poly::constant(BigInt::one()) && self.den == Poly::constant(BigInt::one())
    }

    pub fn inv(&self) -> Result<RatFun> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFun::normalized(self.den.clone(), self.num.clone()))
    }

    /// Integer power; negative exponents invert (error on zero base).
    pub fn pow(&self, exp: i32) -> Result<RatFun> {
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        let mut acc = RatFun::one();
        for _ in 0..exp.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Substitutes `t -> image`. Errors if the image hits a pole of the
    /// denominator (or is 0 while negative powers of `t` are present).
    pub fn compose(&self, image: &RatFun) -> Result<RatFun> {
        let eval = |p: &Poly| -> RatFun {
            let mut acc = RatFun::zero();
            for c in p.0.iter().rev() {
                acc = &(&acc * image) + &RatFun::from_bigint(c.clone());
            }
            acc
        };
        let n = eval(&self.num);
        let d = eval(&self.den);
        if d.is_zero() {
            return Err(Error::Pole);
        }
        Ok(&n / &d)
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, x: &BigRational) -> Result<BigRational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::Pole);
        }
        Ok(self.num.eval(x) / d)
    }

    pub fn eval_at_one(&self) -> Result<BigRational> {
        self.eval(&BigRational::one())
    }

    /// Rational-coefficient polynomial form, if the denominator is constant.
    pub fn polynomial(&self) -> Option<Vec<BigRational>> {
        if self.den.degree() != 0 {
            return None;
        }
        let d = BigRational::from_integer(self.den.leading());
        Some(
            self.num
                .0
                .iter()
                .map(|c| BigRational::from_integer(c.clone()) / &d)
                .collect(),
        )
    }

    /// Integer-coefficient polynomial form, if the denominator is exactly 1.
    pub fn integer_polynomial(&self) -> Option<Vec<BigInt>> {
        if self.den == Poly::constant(BigInt::one()) {
            Some(self.num.0.clone())
        } else {
            None
        }
    }

    /// Laurent form `(lowest exponent, ascending integer coefficients)` if the
    /// denominator is a power of `t` (including `t^0 = 1`).
    pub fn laurent(&self) -> Option<(i64, Vec<BigInt>)> {
        let is_t_power = self.den.0.len() >= 1
            && self.den.leading().is_one()
            && self.den.0[..self.den.degree()].iter().all(|c| c.is_zero());
        if !is_t_power {
            return None;
        }
        let k = self.den.degree() as i64;
        if self.num.is_zero() {
            return Some((0, Vec::new()));
        }
        let low = self.num.0.iter().position(|c| !c.is_zero()).unwrap();
        Some((low as i64 - k, self.num.0[low..].to_vec()))
    }

    /// Numerator/denominator coefficient vectors (ascending), for export.
    pub fn fraction_coeffs(&self) -> (Vec<BigInt>, Vec<BigInt>) {
        (self.num.0.clone(), self.den.0.clone())
    }

    pub fn from_fraction_coeffs(num: Vec<BigInt>, den: Vec<BigInt>) -> Result<RatFun> {
        let den = Poly::from_coeffs(den);
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFun::normalized(Poly::from_coeffs(num), den))
    }
}

impl Add for &RatFun {
    type Output = RatFun;
    fn add(self, rhs: &RatFun) -> RatFun {
        RatFun::normalized(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }
}

impl Sub for &RatFun {
    type Output = RatFun;
    fn sub(self, rhs: &RatFun) -> RatFun {
        RatFun::normalized(
            self.num.mul(&rhs.den).sub(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }
}

impl Mul for &RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &RatFun) -> RatFun {
        RatFun::normalized(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
}

impl Div for &RatFun {
    type Output = RatFun;
    fn div(self, rhs: &RatFun) -> RatFun {
        assert!(!rhs.is_zero(), "division by zero rational function");
        RatFun::normalized(self.num.mul(&rhs.den), self.den.mul(&rhs.num))
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

fn write_laurent(f: &mut fmt::Formatter<'_>, low: i64, coeffs: &[BigInt]) -> fmt::Result {
    let mut first = true;
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let e = low + i as i64;
        if first {
            if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
        } else if c.is_negative() {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        let a = c.abs();
        match (a.is_one(), e) {
            (true, 0) => write!(f, "{a}")?,
            (true, 1) => write!(f, "t")?,
            (true, _) => write!(f, "t^{e}")?,
            (false, 0) => write!(f, "{a}")?,
            (false, 1) => write!(f, "{a}t")?,
            (false, _) => write!(f, "{a}t^{e}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((low, coeffs)) = self.laurent() {
            return write_laurent(f, low, &coeffs);
        }
        if self.den.degree() == 0 {
            let terms = self.num.0.iter().filter(|c| !c.is_zero()).count();
            if terms > 1 {
                write!(f, "(")?;
                write_laurent(f, 0, &self.num.0)?;
                write!(f, ")")?;
            } else {
                write_laurent(f, 0, &self.num.0)?;
            }
            return write!(f, "/{}", self.den.leading());
        }
        write!(f, "(")?;
        write_laurent(f, 0, &self.num.0)?;
        write!(f, ")/(")?;
        write_laurent(f, 0, &self.den.0)?;
        write!(f, ")")
    }
}

/// Total order by degree-major comparison of canonical forms; only used to
/// keep report output deterministic, no algebraic meaning.
impl PartialOrd for RatFun {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.to_string().cmp(&other.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tp(k: i64) -> RatFun {
        RatFun::t_pow(k)
    }

    #[test]
    fn normalization_cancels_common_factors() {
        // (2t^2-2)/(2t-2) = t+1
        let num = RatFun::poly(&[-2, 0, 2]);
        let den = RatFun::poly(&[-2, 2]);
        assert_eq!(&num / &den, RatFun::poly(&[1, 1]));
        // Sign moves out of the denominator: 1/(-t+1) has den 1-t ... leading
        // coefficient of the denominator must be positive: 1/(1-t) = (-1)/(t-1).
        let r = &RatFun::one() / &RatFun::poly(&[1, -1]);
        let (n, d) = r.fraction_coeffs();
        assert_eq!(d.last().unwrap(), &BigInt::from(1));
        assert_eq!(n, vec![BigInt::from(-1)]);
    }

    #[test]
    fn laurent_powers_multiply() {
        assert_eq!(&tp(-2) * &tp(5), tp(3));
        assert_eq!(&tp(-3) * &tp(3), RatFun::one());
        let r = &RatFun::poly(&[0, 0, 3]) * &tp(-2); // 3t^2 / t^2
        assert_eq!(r, RatFun::from_int(3));
        assert_eq!(tp(-2).laurent(), Some((-2, vec![BigInt::one()])));
    }

    #[test]
    fn compose_substitutes_t() {
        // 1/(1-t) with t -> t^2 gives 1/(1-t^2)
        let c = &RatFun::one() / &RatFun::poly(&[1, -1]);
        let composed = c.compose(&tp(2)).unwrap();
        assert_eq!(composed, &RatFun::one() / &RatFun::poly(&[1, 0, -1]));
        // t -> 1 on 1/(1-t) is a pole
        assert_eq!(c.compose(&RatFun::one()), Err(Error::Pole));
        assert_eq!(c.eval_at_one(), Err(Error::Pole));
    }

    #[test]
    fn eval_is_exact() {
        // (1 - 3t + 2t^2) at t = 1/2 -> 0
        let p = RatFun::poly(&[1, -3, 2]);
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        assert_eq!(p.eval(&half).unwrap(), BigRational::zero());
        assert_eq!(
            p.eval_at_one().unwrap(),
            BigRational::zero()
        );
    }

    #[test]
    fn display_matches_conventions() {
        assert_eq!(RatFun::poly(&[1, -3, 2]).to_string(), "1 - 3t + 2t^2");
        assert_eq!(tp(-2).to_string(), "t^-2");
        assert_eq!((&RatFun::poly(&[0, -1]) * &tp(-3)).to_string(), "-t^-2");
        assert_eq!(RatFun::ratio(1, 2).to_string(), "1/2");
        assert_eq!(RatFun::zero().to_string(), "0");
        let braid_like = &RatFun::poly(&[1, -1]) / &RatFun::poly(&[0, 2]); // (1-t)/2t
        assert_eq!(braid_like.to_string(), "(1 - t)/(2t)");
    }

    #[test]
    fn polynomial_views() {
        let p = RatFun::poly(&[1, 0, 5]);
        assert_eq!(
            p.integer_polynomial(),
            Some(vec![BigInt::one(), BigInt::zero(), BigInt::from(5)])
        );
        assert!(tp(-1).integer_polynomial().is_none());
        assert!(RatFun::ratio(1, 2).integer_polynomial().is_none());
        assert!(RatFun::ratio(1, 2).polynomial().is_some());
    }

    fn arb_ratfun() -> impl Strategy<Value = RatFun> {
        let coeffs = prop::collection::vec(-6i64..7, 0..4);
        (coeffs.clone(), coeffs).prop_filter_map("nonzero denominator", |(n, d)| {
            let den = RatFun::poly(&d);
            if den.is_zero() {
                None
            } else {
                Some(&RatFun::poly(&n) / &den)
            }
        })
    }

    proptest! {
        #[test]
        fn field_axioms(a in arb_ratfun(), b in arb_ratfun(), c in arb_ratfun()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
            if !a.is_zero() {
                prop_assert_eq!(&a * &a.inv().unwrap(), RatFun::one());
            }
        }

        #[test]
        fn normalization_is_canonical(a in arb_ratfun(), n in -5i64..6, d in 1i64..6) {
            // Multiplying num and den by the same nonzero constant is a no-op.
            if n != 0 {
                let scale = RatFun::ratio(n, d);
                let scaled = &(&a * &scale) / &scale;
                prop_assert_eq!(scaled, a);
            }
        }
    }
}
