//! Exact arithmetic in `Q(q^(1/2))` extended by square roots.
//!
//! A [`Scalar`] is a finite sum of terms `coefficient * sqrt(radicand)`
//! where the coefficient is a rational function of `s = q^(1/2)` and the
//! radicand is a Laurent polynomial in `q`. Radicands are kept in a
//! canonical form (squarefree, lowest term constant, integer-primitive
//! polynomial part with positive leading coefficient, squarefree integer
//! content), so structural equality decides equality in the field
//! extension.

mod poly;
mod ratfn;

pub use poly::{rational_to_f64, QPoly};
pub use ratfn::RatFn;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::half::Half;

/// Floating-point result of [`Scalar::eval_f64`].
pub type NumericValue = f64;

/// Canonical radicand `d * P(q)`: `d` a squarefree nonzero integer, `P`
/// integer-primitive with positive leading coefficient and nonzero
/// constant term. The pair `(1, 1)` tags the rational part of a scalar.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Radicand {
    d: BigInt,
    poly: QPoly,
}

impl Radicand {
    pub fn one() -> Radicand {
        Radicand {
            d: BigInt::one(),
            poly: QPoly::one(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.d.is_one() && self.poly.is_one()
    }

    /// The radicand as a polynomial in `q` (content times primitive part).
    pub fn as_qpoly(&self) -> QPoly {
        self.poly.scale(&BigRational::from_integer(self.d.clone()))
    }

    /// The radicand as a rational function of `s` (via `q = s^2`).
    fn as_ratfn_s(&self) -> RatFn {
        RatFn::from_poly(self.as_qpoly().inflate())
    }
}

impl PartialOrd for Radicand {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Radicand {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let da = self.poly.degree().map_or(-1i64, |d| d as i64);
        let db = other.poly.degree().map_or(-1i64, |d| d as i64);
        da.cmp(&db)
            .then_with(|| self.poly.coeffs().cmp(other.poly.coeffs()))
            .then_with(|| self.d.cmp(&other.d))
    }
}

/// `n = m^2 * d` with `d` squarefree; returns `(m, d)`. Sign goes to `d`.
fn int_squarefree(n: &BigInt) -> (BigInt, BigInt) {
    assert!(!n.is_zero());
    let mut rem = n.abs();
    let mut m = BigInt::one();
    let mut d = if n.is_negative() {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    let mut f = BigInt::from(2);
    while &f * &f <= rem {
        let mut e = 0u32;
        while (&rem % &f).is_zero() {
            rem /= &f;
            e += 1;
        }
        if e > 0 {
            for _ in 0..e / 2 {
                m *= &f;
            }
            if e % 2 == 1 {
                d *= &f;
            }
        }
        f += 1;
    }
    d *= rem; // leftover is 1 or prime
    (m, d)
}

/// Canonicalizes a nonzero polynomial in `q` under the square root:
/// `sqrt(p) = multiplier * sqrt(radicand)` with `multiplier` a rational
/// function of `s`.
fn canonicalize_radicand(p: &QPoly) -> (RatFn, Radicand) {
    assert!(!p.is_zero(), "zero radicand");
    let val = p.valuation();
    let p0 = p.shift_down(val);
    // sqrt(q^val) = s^val
    let mut mult = RatFn::monomial(BigRational::one(), val as i64);

    let lc = p0.leading().unwrap().clone();
    let dec = p0.squarefree_decomposition();
    let mut outer = QPoly::one();
    let mut odd = QPoly::one();
    for (fac, e) in &dec {
        for _ in 0..e / 2 {
            outer = outer.mul(fac);
        }
        if e % 2 == 1 {
            odd = odd.mul(fac);
        }
    }
    mult = mult.mul(&RatFn::from_poly(outer.inflate()));

    // sqrt(lc * odd) with odd monic: extract the square part of the
    // rational constant.
    let (content, prim) = odd.scale(&lc).content_primitive();
    let ab = content.numer() * content.denom();
    let (m, d) = int_squarefree(&ab);
    mult = mult.mul(&RatFn::from_rational(BigRational::new(
        m,
        content.denom().clone(),
    )));
    (mult, Radicand { d, poly: prim })
}

type RadProduct = (RatFn, Radicand);

fn radicand_product_cache() -> &'static RwLock<HashMap<(Radicand, Radicand), RadProduct>> {
    static CACHE: OnceLock<RwLock<HashMap<(Radicand, Radicand), RadProduct>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// `sqrt(r1) * sqrt(r2) = multiplier * sqrt(r3)`.
fn mul_radicands(r1: &Radicand, r2: &Radicand) -> RadProduct {
    if r1.is_one() {
        return (RatFn::one(), r2.clone());
    }
    if r2.is_one() {
        return (RatFn::one(), r1.clone());
    }
    if r1 == r2 {
        return (r1.as_ratfn_s(), Radicand::one());
    }
    let key = if r1 <= r2 {
        (r1.clone(), r2.clone())
    } else {
        (r2.clone(), r1.clone())
    };
    if let Some(hit) = radicand_product_cache().read().unwrap().get(&key) {
        return hit.clone();
    }
    let prod = r1.as_qpoly().mul(&r2.as_qpoly());
    let out = canonicalize_radicand(&prod);
    radicand_product_cache()
        .write()
        .unwrap()
        .insert(key, out.clone());
    out
}

/// Element of the radical extension of the rational functions of `q^(1/2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scalar {
    terms: BTreeMap<Radicand, RatFn>,
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Scalar {
        Scalar::from_ratfn(RatFn::one())
    }

    pub fn from_ratfn(c: RatFn) -> Scalar {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Radicand::one(), c);
        }
        Scalar { terms }
    }

    pub fn from_int(n: i64) -> Scalar {
        Scalar::from_ratfn(RatFn::from_int(n))
    }

    pub fn from_fraction(n: i64, d: i64) -> Scalar {
        assert!(d != 0);
        Scalar::from_ratfn(RatFn::from_rational(BigRational::new(
            BigInt::from(n),
            BigInt::from(d),
        )))
    }

    pub fn from_rational(c: BigRational) -> Scalar {
        Scalar::from_ratfn(RatFn::from_rational(c))
    }

    /// `q^h` for a half-integer exponent `h`.
    pub fn q_pow(h: Half) -> Scalar {
        Scalar::from_ratfn(RatFn::monomial(BigRational::one(), h.twice()))
    }

    /// `c * q^h`.
    pub fn q_monomial(c: BigRational, h: Half) -> Scalar {
        Scalar::from_ratfn(RatFn::monomial(c, h.twice()))
    }

    fn insert_term(&mut self, r: Radicand, c: RatFn) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(r) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Radicand::one())
                .map_or(false, |c| c.is_one())
    }

    /// True when no radical term is present.
    pub fn is_rational(&self) -> bool {
        self.terms.keys().all(|r| r.is_one())
    }

    /// The rational-function value when [`Self::is_rational`]; `None` otherwise.
    pub fn as_ratfn(&self) -> Option<RatFn> {
        if self.terms.is_empty() {
            return Some(RatFn::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&Radicand::one()) {
                return Some(c.clone());
            }
        }
        None
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Radicand, &RatFn)> {
        self.terms.iter()
    }

    pub fn add(&self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        for (r, c) in &rhs.terms {
            out.insert_term(r.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        for (r, c) in &rhs.terms {
            out.insert_term(r.clone(), c.neg());
        }
        out
    }

    pub fn neg(&self) -> Scalar {
        Scalar {
            terms: self
                .terms
                .iter()
                .map(|(r, c)| (r.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn mul(&self, rhs: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (r1, c1) in &self.terms {
            for (r2, c2) in &rhs.terms {
                let (extra, r3) = mul_radicands(r1, r2);
                out.insert_term(r3, c1.mul(c2).mul(&extra));
            }
        }
        out
    }

    pub fn scale_ratfn(&self, c: &RatFn) -> Scalar {
        if c.is_zero() {
            return Scalar::zero();
        }
        Scalar {
            terms: self
                .terms
                .iter()
                .map(|(r, x)| (r.clone(), x.mul(c)))
                .collect(),
        }
    }

    /// Inverse of a single-term scalar: `1/(c*sqrt(r)) = (1/(c r)) sqrt(r)`.
    pub fn inv(&self) -> Result<Scalar, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.terms.len() > 1 {
            return Err(Error::NonInvertible(format!(
                "multi-term radical scalar {self}"
            )));
        }
        let (r, c) = self.terms.iter().next().unwrap();
        let denom = c.mul(&r.as_ratfn_s());
        let mut terms = BTreeMap::new();
        terms.insert(r.clone(), denom.inv()?);
        Ok(Scalar { terms })
    }

    pub fn div(&self, rhs: &Scalar) -> Result<Scalar, Error> {
        Ok(self.mul(&rhs.inv()?))
    }

    /// Square root of a nonnegative rational (radical-free) scalar.
    pub fn sqrt_rational(&self) -> Result<Scalar, Error> {
        if self.is_zero() {
            return Ok(Scalar::zero());
        }
        let c = self
            .as_ratfn()
            .ok_or_else(|| Error::SqrtUnsupported(format!("radical scalar {self}")))?;
        let prod = c.num().mul(c.den());
        let in_q = prod
            .deflate()
            .ok_or_else(|| Error::SqrtUnsupported(format!("half-integer powers in {self}")))?;
        let (mult, rad) = canonicalize_radicand(&in_q);
        let coeff = mult.div(&RatFn::from_poly(c.den().clone()))?;
        let mut out = Scalar::zero();
        out.insert_term(rad, coeff);
        Ok(out)
    }

    /// Exact evaluation at `q = q0` as a pair decomposition
    /// `sum_i (u_i + v_i sqrt(q0)) sqrt(r_i)` — used by both f64 and
    /// high-precision evaluation.
    fn eval_parts(&self, q0: &BigRational) -> Result<Vec<(BigRational, BigRational, BigRational)>, Error> {
        if !q0.is_positive() || q0.is_one() {
            return Err(Error::InvalidEvaluationPoint(q0.to_string()));
        }
        let mut parts = Vec::new();
        for (r, c) in &self.terms {
            // c(s) = (ne(q)+s*no(q))/(de(q)+s*do(q)) at s = sqrt(q0):
            // rationalize by the conjugate.
            let (ne, no) = split_even_odd(c.num());
            let (de, dd) = split_even_odd(c.den());
            let a = ne.eval_rational(q0);
            let b = no.eval_rational(q0);
            let cc = de.eval_rational(q0);
            let d = dd.eval_rational(q0);
            let denom = &cc * &cc - &d * &d * q0;
            if denom.is_zero() {
                return Err(Error::DivisionByZero);
            }
            let u = (&a * &cc - &b * &d * q0) / &denom;
            let v = (&b * &cc - &a * &d) / &denom;
            let rv = r.as_qpoly().eval_rational(q0);
            if rv.is_negative() {
                return Err(Error::NegativeRadicand {
                    q0: q0.to_string(),
                    radicand: format!("{}", ScalarRadicandDisplay(r)),
                });
            }
            parts.push((u, v, rv));
        }
        Ok(parts)
    }

    /// Numeric value at `q0 > 0`, `q0 != 1`, double precision.
    pub fn eval_f64(&self, q0: &BigRational) -> Result<NumericValue, Error> {
        let parts = self.eval_parts(q0)?;
        let sq0 = rational_to_f64(q0).sqrt();
        let mut acc = 0.0f64;
        for (u, v, r) in parts {
            acc += (rational_to_f64(&u) + rational_to_f64(&v) * sq0) * rational_to_f64(&r).sqrt();
        }
        debug_assert!(acc.is_finite());
        Ok(acc)
    }

    /// Numeric value computed with `bits` of working precision before the
    /// final rounding to f64. `bits <= 53` falls back to [`Self::eval_f64`].
    pub fn eval_bits(&self, q0: &BigRational, bits: u32) -> Result<NumericValue, Error> {
        if bits <= 53 {
            return self.eval_f64(q0);
        }
        let parts = self.eval_parts(q0)?;
        let sq0 = sqrt_rational_bits(q0, bits);
        let mut acc = BigRational::zero();
        for (u, v, r) in parts {
            let root = sqrt_rational_bits(&r, bits);
            acc += (u + v * &sq0) * root;
        }
        Ok(rational_to_f64(&acc))
    }
}

/// `p(s) = even(s^2) + s * odd(s^2)`.
fn split_even_odd(p: &QPoly) -> (QPoly, QPoly) {
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for (i, c) in p.coeffs().iter().enumerate() {
        if i % 2 == 0 {
            even.push(c.clone());
        } else {
            odd.push(c.clone());
        }
    }
    (QPoly::from_coeffs(even), QPoly::from_coeffs(odd))
}

/// `sqrt(x)` for `x >= 0` to roughly `bits` fractional bits.
fn sqrt_rational_bits(x: &BigRational, bits: u32) -> BigRational {
    if x.is_zero() {
        return BigRational::zero();
    }
    let scale = BigInt::one() << bits;
    let scaled = (x.numer() * x.denom() * &scale * &scale).sqrt();
    BigRational::new(scaled, x.denom() * scale)
}

/// q-integer `[m]_q = (q^m - q^{-m})/(q - q^{-1})`.
pub fn qint(m: i64) -> Scalar {
    use std::cmp::Ordering;
    match m.cmp(&0) {
        Ordering::Equal => Scalar::zero(),
        Ordering::Less => qint(-m).neg(),
        Ordering::Greater => {
            // q^{m-1} + q^{m-3} + ... + q^{-(m-1)}
            let mut acc = RatFn::zero();
            let mut e = -(m - 1);
            while e <= m - 1 {
                acc = acc.add(&RatFn::monomial(BigRational::one(), 2 * e));
                e += 2;
            }
            Scalar::from_ratfn(acc)
        }
    }
}

/// Symmetric q-factorial `[n]_q!`.
fn qfactorial(n: i64) -> Scalar {
    let mut acc = Scalar::one();
    for m in 1..=n {
        acc = acc.mul(&qint(m));
    }
    acc
}

/// Symmetric q-binomial `[n k]_q = [n]_q!/([k]_q! [n-k]_q!)`.
pub fn qbinomial(n: i64, k: i64) -> Result<Scalar, Error> {
    if n < 0 || k < 0 || k > n {
        return Err(Error::BinomialRange { n, k });
    }
    qfactorial(n).div(&qfactorial(k).mul(&qfactorial(n - k)))
}

/// Ladder coefficient `alpha^l_j = ([l-j]_q [l+j+1]_q)^(1/2)`.
pub fn alpha(l: Half, j: Half) -> Scalar {
    let lmj = (l - j).as_integer().expect("l - j must be an integer");
    let lpj1 = (l + j + Half::ONE).as_integer().expect("l + j integral");
    qint(lmj)
        .mul(&qint(lpj1))
        .sqrt_rational()
        .expect("q-integer product is rational")
}

// ---- Display ----

struct ScalarRadicandDisplay<'a>(&'a Radicand);

impl fmt::Display for ScalarRadicandDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.0.as_qpoly();
        write!(f, "{}", laurent_q_string(&poly_terms_q(&p)))
    }
}

/// Terms `(half-exponent of q, coefficient)` of a Laurent polynomial,
/// descending in the exponent.
fn poly_terms_q(p: &QPoly) -> Vec<(i64, BigRational)> {
    // polynomial in q: exponent i corresponds to q^i, i.e. s-degree 2i
    p.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (2 * i as i64, c.clone()))
        .rev()
        .collect()
}

/// Renders Laurent terms `(s-exponent, coeff)` as a polynomial in `q`,
/// with `q^(1/2)` powers where the exponent is odd.
fn laurent_q_string(terms: &[(i64, BigRational)]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (e, c)) in terms.iter().enumerate() {
        let neg = c.is_negative();
        let mag = c.abs();
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let pow = match e {
            0 => String::new(),
            2 => "q".to_string(),
            e if e % 2 == 0 => format!("q^{}", e / 2),
            e => format!("q^({e}/2)"),
        };
        if pow.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag.is_one() {
            out.push_str(&pow);
        } else {
            out.push_str(&format!("{mag}*{pow}"));
        }
    }
    out
}

/// Canonical text of a coefficient. `parenthesize` adds parentheses when
/// the rendering is not a single product factor.
fn ratfn_string(c: &RatFn) -> (String, bool) {
    if let Some(terms) = c.laurent_terms() {
        let mut ts = terms;
        ts.reverse();
        let s = laurent_q_string(&ts);
        let simple = ts.len() == 1 && !ts[0].1.is_negative();
        (s, !simple)
    } else {
        let num = laurent_q_string(&{
            let mut t = c
                .num()
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i as i64, x.clone()))
                .collect::<Vec<_>>();
            t.reverse();
            t
        });
        let den = laurent_q_string(&{
            let mut t = c
                .den()
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i as i64, x.clone()))
                .collect::<Vec<_>>();
            t.reverse();
            t
        });
        (format!("({num})/({den})"), false)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (r, c) in &self.terms {
            let (cs, needs_parens) = ratfn_string(c);
            let (body, neg) = if r.is_one() {
                (cs.clone(), false)
            } else {
                let root = format!("sqrt({})", ScalarRadicandDisplay(r));
                if c.is_one() {
                    (root, false)
                } else if needs_parens {
                    // fold a leading minus out of single-term negatives
                    if let Some(stripped) = single_negative(&cs) {
                        (format!("{stripped}*{root}"), true)
                    } else {
                        (format!("({cs})*{root}"), false)
                    }
                } else {
                    (format!("{cs}*{root}"), false)
                }
            };
            if first {
                if neg {
                    write!(f, "-{body}")?;
                } else {
                    write!(f, "{body}")?;
                }
                first = false;
            } else if neg {
                write!(f, " - {body}")?;
            } else if let Some(stripped) = body.strip_prefix('-') {
                write!(f, " - {stripped}")?;
            } else {
                write!(f, " + {body}")?;
            }
        }
        Ok(())
    }
}

/// For a rendering like `-q^2` (single negative product factor), returns
/// the positive part; `None` when the string is a sum or not negative.
fn single_negative(s: &str) -> Option<&str> {
    let stripped = s.strip_prefix('-')?;
    if stripped.contains(" + ") || stripped.contains(" - ") {
        None
    } else {
        Some(stripped)
    }
}

impl std::ops::Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar::add(self, rhs)
    }
}

impl std::ops::Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar::sub(self, rhs)
    }
}

impl std::ops::Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar::mul(self, rhs)
    }
}

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q0_half() -> BigRational {
        BigRational::new(BigInt::one(), BigInt::from(2))
    }

    #[test]
    fn qint_basics() {
        assert!(qint(0).is_zero());
        assert!(qint(1).is_one());
        // [2]_q = q + q^-1
        let two = Scalar::q_pow(Half::ONE).add(&Scalar::q_pow(-Half::ONE));
        assert_eq!(qint(2), two);
        assert_eq!(qint(-3), qint(3).neg());
    }

    #[test]
    fn qbinomial_against_polynomial_division() {
        // oracle: explicit numerator/denominator division
        assert_eq!(qbinomial(2, 1).unwrap(), qint(2));
        assert!(qbinomial(3, 0).unwrap().is_one());
        let direct = qint(4)
            .mul(&qint(3))
            .div(&qint(2).mul(&qint(1)))
            .unwrap();
        assert_eq!(qbinomial(4, 2).unwrap(), direct);
        // frozen expansion: q^4 + q^2 + 2 + q^-2 + q^-4
        let frozen = Scalar::from_int(2)
            .add(&Scalar::q_pow(Half::int(2)))
            .add(&Scalar::q_pow(Half::int(-2)))
            .add(&Scalar::q_pow(Half::int(4)))
            .add(&Scalar::q_pow(Half::int(-4)));
        assert_eq!(qbinomial(4, 2).unwrap(), frozen);
        assert!(qbinomial(2, 3).is_err());
        assert!(qbinomial(2, -1).is_err());
    }

    #[test]
    fn radical_products_renormalize() {
        let r2 = qint(2).sqrt_rational().unwrap();
        assert_eq!(r2.mul(&r2), qint(2));
        // sqrt([2]) * sqrt([4]) = [2] * sqrt(q^2 + q^-2)
        let r4 = qint(4).sqrt_rational().unwrap();
        let prod = r2.mul(&r4);
        let qq = Scalar::q_pow(Half::int(2)).add(&Scalar::q_pow(Half::int(-2)));
        let expect = qint(2).mul(&qq.sqrt_rational().unwrap());
        assert_eq!(prod, expect);
    }

    #[test]
    fn add_cancels() {
        let q = Scalar::q_pow(Half::ONE);
        assert!(q.add(&q.neg()).is_zero());
    }

    #[test]
    fn division_rules() {
        let r2 = qint(2).sqrt_rational().unwrap();
        let x = qint(3).mul(&r2);
        assert!(x.div(&r2).unwrap() == qint(3));
        assert!(Scalar::one().div(&Scalar::zero()).is_err());
        let multi = Scalar::one().add(&r2);
        assert!(matches!(
            Scalar::one().div(&multi),
            Err(Error::NonInvertible(_))
        ));
    }

    #[test]
    fn eval_examples() {
        let q0 = q0_half();
        assert!((qint(2).eval_f64(&q0).unwrap() - 2.5).abs() < 1e-15);
        assert_eq!(Scalar::zero().eval_f64(&q0).unwrap(), 0.0);
        assert!((qint(3).eval_f64(&q0).unwrap() - 5.25).abs() < 1e-15);
        // radical coherence numerically
        let r2 = qint(2).sqrt_rational().unwrap();
        let lhs = r2.eval_f64(&q0).unwrap();
        assert!((lhs * lhs - 2.5).abs() < 1e-12);
        // high-precision path agrees
        let hp = qint(3).eval_bits(&q0, 200).unwrap();
        assert!((hp - 5.25).abs() < 1e-15);
    }

    #[test]
    fn eval_rejects_bad_points() {
        assert!(qint(2).eval_f64(&BigRational::one()).is_err());
        assert!(qint(2)
            .eval_f64(&BigRational::from_integer((-2).into()))
            .is_err());
    }

    #[test]
    fn sqrt_of_fraction() {
        // sqrt(q^2/ (q^2+1)) = q / sqrt(q^2+1) = q (q^2+1)^{-1} sqrt(q^2+1)
        let frac = Scalar::from_ratfn(RatFn::new(
            QPoly::from_i64(&[0, 0, 0, 0, 1]),
            QPoly::from_i64(&[1, 0, 0, 0, 1]),
        ));
        let root = frac.sqrt_rational().unwrap();
        assert_eq!(root.mul(&root), frac);
    }

    #[test]
    fn display_roundtrip_examples() {
        assert_eq!(qint(2).to_string(), "q + q^-1");
        assert_eq!(Scalar::zero().to_string(), "0");
        assert_eq!(
            qint(2).sqrt_rational().unwrap().to_string(),
            "q^(-1/2)*sqrt(q^2 + 1)"
        );
    }
}
