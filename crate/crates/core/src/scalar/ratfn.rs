//! Rational functions in `s = q^(1/2)` over the rationals.
//!
//! Canonical form: `gcd(num, den) = 1` and `den` monic. Laurent
//! polynomials in `q^(1/2)` are the special case of a monomial
//! denominator.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::QPoly;
use crate::error::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: QPoly,
    den: QPoly,
}

impl RatFn {
    pub fn new(num: QPoly, den: QPoly) -> RatFn {
        assert!(!den.is_zero(), "rational function with zero denominator");
        let mut r = RatFn { num, den };
        r.reduce();
        r
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = QPoly::one();
            return;
        }
        let g = self.num.gcd(&self.den);
        if !g.is_one() {
            self.num = self.num.div_exact(&g);
            self.den = self.den.div_exact(&g);
        }
        let lead = self.den.leading().unwrap().clone();
        if !lead.is_one() {
            let inv = BigRational::one() / lead;
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
    }

    pub fn zero() -> RatFn {
        RatFn {
            num: QPoly::zero(),
            den: QPoly::one(),
        }
    }

    pub fn one() -> RatFn {
        RatFn {
            num: QPoly::one(),
            den: QPoly::one(),
        }
    }

    pub fn from_poly(p: QPoly) -> RatFn {
        RatFn {
            num: p,
            den: QPoly::one(),
        }
    }

    pub fn from_rational(c: BigRational) -> RatFn {
        RatFn::from_poly(QPoly::constant(c))
    }

    pub fn from_int(n: i64) -> RatFn {
        RatFn::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `c * s^e` with `e` possibly negative.
    pub fn monomial(c: BigRational, e: i64) -> RatFn {
        if e >= 0 {
            RatFn::from_poly(QPoly::monomial(c, e as usize))
        } else {
            RatFn {
                num: QPoly::constant(c),
                den: QPoly::monomial(BigRational::one(), (-e) as usize),
            }
        }
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn add(&self, rhs: &RatFn) -> RatFn {
        RatFn::new(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }

    pub fn sub(&self, rhs: &RatFn) -> RatFn {
        RatFn::new(
            self.num.mul(&rhs.den).sub(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }

    pub fn neg(&self) -> RatFn {
        RatFn {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, rhs: &RatFn) -> RatFn {
        // Cross-reduce first; keeps the intermediate gcds small.
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let n1 = if g1.is_one() { self.num.clone() } else { self.num.div_exact(&g1) };
        let d2 = if g1.is_one() { rhs.den.clone() } else { rhs.den.div_exact(&g1) };
        let n2 = if g2.is_one() { rhs.num.clone() } else { rhs.num.div_exact(&g2) };
        let d1 = if g2.is_one() { self.den.clone() } else { self.den.div_exact(&g2) };
        let mut r = RatFn {
            num: n1.mul(&n2),
            den: d1.mul(&d2),
        };
        if let Some(l) = r.den.leading() {
            if !l.is_one() {
                let inv = BigRational::one() / l;
                r.num = r.num.scale(&inv);
                r.den = r.den.scale(&inv);
            }
        }
        if r.num.is_zero() {
            r.den = QPoly::one();
        }
        r
    }

    pub fn inv(&self) -> Result<RatFn, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFn::new(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, rhs: &RatFn) -> Result<RatFn, Error> {
        Ok(self.mul(&rhs.inv()?))
    }

    /// Evaluation at `s0 = sqrt(q0)`, exactly in rational arithmetic.
    pub fn eval_rational(&self, s0: &BigRational) -> Result<BigRational, Error> {
        let d = self.den.eval_rational(s0);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval_rational(s0) / d)
    }

    pub fn eval_f64(&self, s0: f64) -> f64 {
        self.num.eval_f64(s0) / self.den.eval_f64(s0)
    }

    /// True when the denominator is a monomial `s^k`, i.e. the value is a
    /// Laurent polynomial in `q^(1/2)`.
    pub fn is_laurent(&self) -> bool {
        self.den.is_monomial()
    }

    /// Laurent expansion `[(exponent of s, coefficient)]`, ascending,
    /// when [`Self::is_laurent`] holds.
    pub fn laurent_terms(&self) -> Option<Vec<(i64, BigRational)>> {
        if !self.is_laurent() {
            return None;
        }
        let shift = self.den.degree().unwrap_or(0) as i64;
        let lead = self.den.leading().cloned().unwrap_or_else(BigRational::one);
        Some(
            self.num
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i as i64 - shift, c / &lead))
                .collect(),
        )
    }

    /// The constant value when this is a constant, else `None`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.den.is_one() && self.num.degree().map_or(true, |d| d == 0) {
            Some(self.num.coeff(0))
        } else {
            None
        }
    }

    /// Positivity of the value for all large `s` (sign of the dominant term).
    pub fn leading_sign_positive(&self) -> bool {
        match (self.num.leading(), self.den.leading()) {
            (Some(n), Some(d)) => n.is_positive() == d.is_positive(),
            _ => false,
        }
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_reduces() {
        // (s^2-1)/(s-1) = s+1
        let a = RatFn::new(QPoly::from_i64(&[-1, 0, 1]), QPoly::from_i64(&[-1, 1]));
        assert_eq!(a, RatFn::from_poly(QPoly::from_i64(&[1, 1])));
        let b = RatFn::monomial(BigRational::one(), -2);
        let prod = a.mul(&b);
        assert_eq!(
            prod,
            RatFn::new(QPoly::from_i64(&[1, 1]), QPoly::from_i64(&[0, 0, 1]))
        );
    }

    #[test]
    fn laurent_detection() {
        let a = RatFn::monomial(BigRational::from_integer(3.into()), -4);
        let terms = a.laurent_terms().unwrap();
        assert_eq!(terms, vec![(-4, BigRational::from_integer(3.into()))]);
        let b = RatFn::new(QPoly::one(), QPoly::from_i64(&[1, 0, 1]));
        assert!(b.laurent_terms().is_none());
    }
}
