//! Dense univariate polynomials over arbitrary-precision rationals.
//!
//! The variable is context-dependent: coefficients of [`crate::Scalar`]
//! use polynomials in `s = q^(1/2)`, radicands use polynomials in `q`.
//! Coefficients are stored in ascending degree order; the vector is empty
//! for the zero polynomial and its last entry is nonzero otherwise.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    fn normalize(&mut self) {
        while self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        if c.is_zero() {
            QPoly::zero()
        } else {
            QPoly { coeffs: vec![c] }
        }
    }

    pub fn monomial(c: BigRational, deg: usize) -> Self {
        if c.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); deg + 1];
        coeffs[deg] = c;
        QPoly { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let mut p = QPoly { coeffs };
        p.normalize();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        QPoly::from_coeffs(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    /// True when only one coefficient is nonzero.
    pub fn is_monomial(&self) -> bool {
        self.coeffs.iter().filter(|c| !c.is_zero()).count() <= 1
    }

    /// Number of trailing zero coefficients (infinite for zero; returns 0 there).
    pub fn valuation(&self) -> usize {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .unwrap_or(0)
    }

    /// Divides by `x^k`; the first `k` coefficients must be zero.
    pub fn shift_down(&self, k: usize) -> QPoly {
        debug_assert!(self.coeffs.iter().take(k).all(|c| c.is_zero()));
        QPoly::from_coeffs(self.coeffs.iter().skip(k).cloned().collect())
    }

    pub fn shift_up(&self, k: usize) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        QPoly { coeffs }
    }

    pub fn add(&self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) + rhs.coeff(i));
        }
        QPoly::from_coeffs(coeffs)
    }

    pub fn sub(&self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) - rhs.coeff(i));
        }
        QPoly::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> QPoly {
        QPoly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn mul(&self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs =
            vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] += a * b;
            }
        }
        QPoly::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &BigRational) -> QPoly {
        if c.is_zero() {
            return QPoly::zero();
        }
        QPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Euclidean division; panics on zero divisor.
    pub fn div_rem(&self, rhs: &QPoly) -> (QPoly, QPoly) {
        assert!(!rhs.is_zero(), "polynomial division by zero");
        let dr = rhs.degree().unwrap();
        if self.degree().map_or(true, |dl| dl < dr) {
            return (QPoly::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let dl = rem.len() - 1;
        let lead = rhs.leading().unwrap().clone();
        let mut quot = vec![BigRational::zero(); dl - dr + 1];
        for i in (dr..=dl).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let f = &rem[i] / &lead;
            quot[i - dr] = f.clone();
            rem[i] = BigRational::zero();
            for (j, b) in rhs.coeffs.iter().enumerate().take(dr) {
                rem[i - dr + j] -= &f * b;
            }
        }
        (QPoly::from_coeffs(quot), QPoly::from_coeffs(rem))
    }

    /// Exact division; panics if the remainder is nonzero.
    pub fn div_exact(&self, rhs: &QPoly) -> QPoly {
        let (q, r) = self.div_rem(rhs);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd (1 for coprime inputs, 0 only if both inputs are 0).
    pub fn gcd(&self, rhs: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.make_monic()
    }

    /// Scales so the leading coefficient is 1 (zero stays zero).
    pub fn make_monic(&self) -> QPoly {
        match self.leading() {
            None => QPoly::zero(),
            Some(l) => {
                let inv = BigRational::one() / l;
                self.scale(&inv)
            }
        }
    }

    pub fn derivative(&self) -> QPoly {
        if self.coeffs.len() <= 1 {
            return QPoly::zero();
        }
        QPoly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Rational content and integer-primitive part with positive leading
    /// coefficient: `p = content * primitive`.
    pub fn content_primitive(&self) -> (BigRational, QPoly) {
        if self.is_zero() {
            return (BigRational::zero(), QPoly::zero());
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in &self.coeffs {
            if c.is_zero() {
                continue;
            }
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut content = BigRational::new(num_gcd, den_lcm);
        if self.leading().unwrap().is_negative() {
            content = -content;
        }
        let prim = self.scale(&(BigRational::one() / &content));
        (content, prim)
    }

    /// Squarefree decomposition (Yun): returns `[(p1,1), (p2,2), ...]`
    /// with `self = lc * prod p_i^i`, each `p_i` squarefree, monic,
    /// pairwise coprime. Empty for constants.
    pub fn squarefree_decomposition(&self) -> Vec<(QPoly, usize)> {
        let p = self.make_monic();
        if p.degree().map_or(true, |d| d == 0) {
            return Vec::new();
        }
        let dp = p.derivative();
        let a0 = p.gcd(&dp);
        let mut out = Vec::new();
        let mut b = p.div_exact(&a0);
        let mut c = dp.div_exact(&a0);
        let mut i = 1usize;
        loop {
            let d = c.sub(&b.derivative());
            if d.is_zero() {
                if b.degree().map_or(false, |d| d > 0) {
                    out.push((b, i));
                }
                break;
            }
            let g = b.gcd(&d);
            if g.degree().map_or(false, |d| d > 0) {
                out.push((g.clone(), i));
            }
            b = b.div_exact(&g);
            c = d.div_exact(&g);
            i += 1;
        }
        out
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0f64;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + rational_to_f64(c);
        }
        acc
    }

    /// Reinterprets a polynomial in `q` as one in `s` via `q = s^2`.
    pub fn inflate(&self) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); 2 * (self.coeffs.len() - 1) + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[2 * i] = c.clone();
        }
        QPoly { coeffs }
    }

    /// Reinterprets a polynomial in `s` with only even-degree terms as one
    /// in `q`. Returns `None` when an odd-degree term is present.
    pub fn deflate(&self) -> Option<QPoly> {
        for (i, c) in self.coeffs.iter().enumerate() {
            if i % 2 == 1 && !c.is_zero() {
                return None;
            }
        }
        Some(QPoly::from_coeffs(
            self.coeffs.iter().step_by(2).cloned().collect(),
        ))
    }
}

pub fn rational_to_f64(c: &BigRational) -> f64 {
    // Split into integer part and remainder so huge numerators/denominators
    // still convert accurately.
    use num_traits::ToPrimitive;
    c.to_f64().unwrap_or_else(|| {
        let i = c.to_integer();
        let frac = c - BigRational::from_integer(i.clone());
        i.to_f64().unwrap_or(f64::NAN) + frac.to_f64().unwrap_or(f64::NAN)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> QPoly {
        QPoly::from_i64(v)
    }

    #[test]
    fn div_rem_roundtrip() {
        let a = p(&[1, 0, 2, 3, 1]);
        let b = p(&[1, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
    }

    #[test]
    fn gcd_of_multiples() {
        let g = p(&[1, 2, 1]); // (1+x)^2
        let a = g.mul(&p(&[3, 1]));
        let b = g.mul(&p(&[-1, 0, 1]));
        assert_eq!(a.gcd(&b), g.make_monic());
    }

    #[test]
    fn yun_extracts_squares() {
        // x * (x+1)^2 * (x^2+1)^3
        let x = p(&[0, 1]);
        let f = x
            .mul(&p(&[1, 1]).mul(&p(&[1, 1])))
            .mul(&p(&[1, 0, 1]).mul(&p(&[1, 0, 1])).mul(&p(&[1, 0, 1])));
        let dec = f.squarefree_decomposition();
        assert_eq!(dec.len(), 3);
        assert_eq!(dec[0], (p(&[0, 1]), 1));
        assert_eq!(dec[1], (p(&[1, 1]), 2));
        assert_eq!(dec[2], (p(&[1, 0, 1]), 3));
    }

    #[test]
    fn content_primitive_sign() {
        let f = p(&[-2, 0, -4]);
        let (c, prim) = f.content_primitive();
        assert_eq!(prim, p(&[1, 0, 2]));
        assert_eq!(prim.scale(&c), f);
        assert!(prim.leading().unwrap().is_positive());
    }

    #[test]
    fn inflate_deflate() {
        let f = p(&[1, -2, 3]);
        assert_eq!(f.inflate().deflate().unwrap(), f);
        assert!(p(&[0, 1]).deflate().is_none());
    }
}
