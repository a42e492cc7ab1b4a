//! The coordinate algebra `O(SU_q(2))` in PBW normal form.
//!
//! Monomials are `a^i c^j c*^k` or `a*^i c^j c*^k` (`i >= 1` in the
//! starred case). The rewriting system is generated by
//!
//! ```text
//! ac  = q ca,   ac*  = q c*a,   cc* = c*c,
//! a*a + c*c = 1,   aa* + q^2 cc* = 1,
//! ```
//!
//! together with the starred consequences `ca* = q a*c`, `c*a* = q a*c*`.
//! The spin-1/2 corepresentation matrix is fixed as
//! `t^(1/2) = [[a, -q c*], [c, a*]]`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_rational::BigRational;
use num_traits::One;

use crate::error::Error;
use crate::half::Half;
use crate::hopf::Gen;
use crate::scalar::{alpha, RatFn, QPoly, Scalar};
use crate::Result;

/// A PBW monomial. `star` selects `a*^a` instead of `a^a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono {
    star: bool,
    a: u32,
    c: u32,
    cs: u32,
}

/// One of the four algebra generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Letter {
    A,
    AStar,
    C,
    CStar,
}

impl Mono {
    pub const ONE: Mono = Mono {
        star: false,
        a: 0,
        c: 0,
        cs: 0,
    };

    pub fn new(star: bool, a: u32, c: u32, cs: u32) -> Mono {
        let star = star && a > 0;
        Mono { star, a, c, cs }
    }

    pub fn gen(l: Letter) -> Mono {
        match l {
            Letter::A => Mono::new(false, 1, 0, 0),
            Letter::AStar => Mono::new(true, 1, 0, 0),
            Letter::C => Mono::new(false, 0, 1, 0),
            Letter::CStar => Mono::new(false, 0, 0, 1),
        }
    }

    pub fn is_one(&self) -> bool {
        self.a == 0 && self.c == 0 && self.cs == 0
    }

    pub fn degree(&self) -> u32 {
        self.a + self.c + self.cs
    }

    pub fn star_flag(&self) -> bool {
        self.star
    }

    pub fn a_pow(&self) -> u32 {
        self.a
    }

    pub fn c_pow(&self) -> u32 {
        self.c
    }

    pub fn cs_pow(&self) -> u32 {
        self.cs
    }

    /// Exponent of the left `K`-eigenvalue: `K |> m = q^wl m`.
    pub fn k_weight(&self) -> Half {
        let a = self.a as i64;
        let sign = if self.star { 1 } else { -1 };
        Half::from_twice(sign * a - self.c as i64 + self.cs as i64)
    }

    /// Exponent of the right `K`-eigenvalue: `d_K(m) = q^er m`.
    pub fn dk_weight(&self) -> Half {
        let a = self.a as i64;
        let sign = if self.star { -1 } else { 1 };
        Half::from_twice(sign * a - self.c as i64 + self.cs as i64)
    }

    /// Hopf-fibration grade: `d_{K^2}(m) = q^{-N} m`.
    pub fn grade(&self) -> i64 {
        -self.dk_weight().twice()
    }

    fn letters(&self) -> Vec<Letter> {
        let mut v = Vec::with_capacity(self.degree() as usize);
        let abase = if self.star { Letter::AStar } else { Letter::A };
        v.extend(std::iter::repeat(abase).take(self.a as usize));
        v.extend(std::iter::repeat(Letter::C).take(self.c as usize));
        v.extend(std::iter::repeat(Letter::CStar).take(self.cs as usize));
        v
    }

    fn split_at(&self, p: usize) -> (Mono, Letter, Mono) {
        let a = self.a as usize;
        let c = self.c as usize;
        debug_assert!(p < self.degree() as usize);
        if p < a {
            (
                Mono::new(self.star, p as u32, 0, 0),
                if self.star { Letter::AStar } else { Letter::A },
                Mono::new(self.star, (a - p - 1) as u32, self.c, self.cs),
            )
        } else if p < a + c {
            let p = p - a;
            (
                Mono::new(self.star, self.a, p as u32, 0),
                Letter::C,
                Mono::new(false, 0, (c - p - 1) as u32, self.cs),
            )
        } else {
            let p = p - a - c;
            (
                Mono::new(self.star, self.a, self.c, p as u32),
                Letter::CStar,
                Mono::new(false, 0, 0, self.cs - p as u32 - 1),
            )
        }
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        let push = |parts: &mut Vec<String>, name: &str, e: u32| {
            if e == 1 {
                parts.push(name.to_string());
            } else if e > 1 {
                parts.push(format!("{name}^{e}"));
            }
        };
        push(&mut parts, if self.star { "as" } else { "a" }, self.a);
        push(&mut parts, "c", self.c);
        push(&mut parts, "cs", self.cs);
        write!(f, "{}", parts.join("*"))
    }
}

/// Element of `O(SU_q(2))` in PBW normal form.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AlgebraElement {
    terms: BTreeMap<Mono, Scalar>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        AlgebraElement {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        AlgebraElement::monomial(Mono::ONE, Scalar::one())
    }

    pub fn gen(l: Letter) -> Self {
        AlgebraElement::monomial(Mono::gen(l), Scalar::one())
    }

    pub fn monomial(m: Mono, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        AlgebraElement { terms }
    }

    pub fn from_scalar(c: Scalar) -> Self {
        AlgebraElement::monomial(Mono::ONE, c)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Mono) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn insert(&mut self, m: Mono, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert(*m, c.neg());
        }
        out
    }

    pub fn neg(&self) -> Self {
        AlgebraElement {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, c.neg()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return AlgebraElement::zero();
        }
        let mut out = AlgebraElement::zero();
        for (m, x) in &self.terms {
            out.insert(*m, x.mul(c));
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = AlgebraElement::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let prod = mul_mono(m1, m2);
                let c = c1.mul(c2);
                for (m, x) in &prod.terms {
                    out.insert(*m, x.mul(&c));
                }
            }
        }
        out
    }

    /// The involution `*`.
    pub fn star(&self) -> Self {
        let mut out = AlgebraElement::zero();
        for (m, c) in &self.terms {
            let i = m.a as i64;
            let e = i * (m.c as i64 + m.cs as i64);
            let (m2, exp) = if m.star {
                (Mono::new(false, m.a, m.cs, m.c), -e)
            } else {
                (Mono::new(m.a > 0, m.a, m.cs, m.c), e)
            };
            out.insert(m2, c.mul(&Scalar::q_pow(Half::int(exp))));
        }
        out
    }
}

impl std::ops::Mul for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::mul(self, rhs)
    }
}

impl std::ops::Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::add(self, rhs)
    }
}

impl std::ops::Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::sub(self, rhs)
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        display_terms(f, self.terms.iter().map(|(m, c)| (m.to_string(), c)))
    }
}

/// Shared term-list rendering for algebra elements.
pub(crate) fn display_terms<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (String, &'a Scalar)>,
) -> fmt::Result {
    let mut first = true;
    let mut empty = true;
    for (mono, coeff) in terms {
        empty = false;
        let (body, neg) = coefficient_times(coeff, &mono);
        if first {
            if neg {
                write!(f, "-{body}")?;
            } else {
                write!(f, "{body}")?;
            }
            first = false;
        } else if neg {
            write!(f, " - {body}")?;
        } else {
            write!(f, " + {body}")?;
        }
    }
    if empty {
        write!(f, "0")?;
    }
    Ok(())
}

/// Renders `coeff * mono`, returning the magnitude string and sign flag.
fn coefficient_times(c: &Scalar, mono: &str) -> (String, bool) {
    let s = c.to_string();
    let (mag, neg) = match s.strip_prefix('-') {
        Some(rest) if !rest.contains(" + ") && !rest.contains(" - ") => (rest.to_string(), true),
        _ => (s.clone(), false),
    };
    let simple =
        !mag.contains(" + ") && !mag.contains(" - ") && (neg || !s.starts_with('-'));
    if mono == "1" {
        if simple {
            (mag, neg)
        } else {
            (format!("({s})"), false)
        }
    } else if simple {
        if mag == "1" {
            (mono.to_string(), neg)
        } else {
            (format!("{mag}*{mono}"), neg)
        }
    } else {
        (format!("({s})*{mono}"), false)
    }
}

// ---- monomial multiplication ----

type PairCache = RwLock<HashMap<(u32, u32), Arc<AlgebraElement>>>;

fn aa_star_cache() -> &'static PairCache {
    static C: OnceLock<PairCache> = OnceLock::new();
    C.get_or_init(|| RwLock::new(HashMap::new()))
}

fn astar_a_cache() -> &'static PairCache {
    static C: OnceLock<PairCache> = OnceLock::new();
    C.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Append `c^dc * c*^dcs` on the right (free: c-letters commute).
fn append_c(x: &AlgebraElement, dc: u32, dcs: u32) -> AlgebraElement {
    if dc == 0 && dcs == 0 {
        return x.clone();
    }
    AlgebraElement {
        terms: x
            .terms
            .iter()
            .map(|(m, s)| (Mono::new(m.star, m.a, m.c + dc, m.cs + dcs), s.clone()))
            .collect(),
    }
}

/// Normal form of `a^i a*^j`.
fn aa_star(i: u32, j: u32) -> Arc<AlgebraElement> {
    if let Some(hit) = aa_star_cache().read().unwrap().get(&(i, j)) {
        return hit.clone();
    }
    let result = if i == 0 || j == 0 {
        AlgebraElement::monomial(Mono::new(j > 0, i.max(j), 0, 0), Scalar::one())
    } else {
        // a a* = 1 - q^2 cc*, then commute cc* past a*^{j-1}.
        let base = aa_star(i - 1, j - 1);
        let shifted = append_c(&base, 1, 1)
            .scale(&Scalar::q_pow(Half::int(2 * (j as i64 - 1) + 2)).neg());
        base.add(&shifted)
    };
    let arc = Arc::new(result);
    aa_star_cache().write().unwrap().insert((i, j), arc.clone());
    arc
}

/// Normal form of `a*^i a^j`.
fn astar_a(i: u32, j: u32) -> Arc<AlgebraElement> {
    if let Some(hit) = astar_a_cache().read().unwrap().get(&(i, j)) {
        return hit.clone();
    }
    let result = if i == 0 || j == 0 {
        AlgebraElement::monomial(Mono::new(i > 0, i.max(j), 0, 0), Scalar::one())
    } else {
        // a* a = 1 - c*c, then commute c*c past a^{j-1}.
        let base = astar_a(i - 1, j - 1);
        let shifted = append_c(&base, 1, 1)
            .scale(&Scalar::q_pow(Half::int(-2 * (j as i64 - 1))).neg());
        base.add(&shifted)
    };
    let arc = Arc::new(result);
    astar_a_cache().write().unwrap().insert((i, j), arc.clone());
    arc
}

/// Product of two PBW monomials, in normal form.
pub fn mul_mono(m1: &Mono, m2: &Mono) -> AlgebraElement {
    // commute m1's c-block past m2's a-block
    let cblock = (m1.c + m1.cs) as i64;
    let exp = if m2.star {
        cblock * m2.a as i64
    } else {
        -cblock * m2.a as i64
    };
    let coeff = Scalar::q_pow(Half::int(exp));
    let apart: AlgebraElement = match (m1.star, m2.star) {
        _ if m1.a == 0 || m2.a == 0 => AlgebraElement::monomial(
            Mono::new(
                (m1.star && m1.a > 0) || (m2.star && m2.a > 0),
                m1.a + m2.a,
                0,
                0,
            ),
            Scalar::one(),
        ),
        (false, false) | (true, true) => {
            AlgebraElement::monomial(Mono::new(m1.star, m1.a + m2.a, 0, 0), Scalar::one())
        }
        (false, true) => (*aa_star(m1.a, m2.a)).clone(),
        (true, false) => (*astar_a(m1.a, m2.a)).clone(),
    };
    append_c(&apart, m1.c + m2.c, m1.cs + m2.cs).scale(&coeff)
}

// ---- functionals and automorphisms ----

/// Counit: `eps(a) = eps(a*) = 1`, `eps(c) = eps(c*) = 0`.
pub fn counit(x: &AlgebraElement) -> Scalar {
    let mut out = Scalar::zero();
    for (m, c) in &x.terms {
        if m.c == 0 && m.cs == 0 {
            out = out.add(c);
        }
    }
    out
}

/// Haar state: vanishes off monomials `(cc*)^k`, where it takes the value
/// `(1 - q^2)/(1 - q^{2k+2})`. Coefficients are grouped per `k` before
/// the division so the expensive rational-function reductions happen
/// once per group.
pub fn haar(x: &AlgebraElement) -> Scalar {
    let mut groups: BTreeMap<u32, Scalar> = BTreeMap::new();
    for (m, c) in &x.terms {
        if m.a == 0 && m.c == m.cs {
            match groups.entry(m.c) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(c.clone());
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    let s = e.get().add(c);
                    *e.get_mut() = s;
                }
            }
        }
    }
    let mut out = Scalar::zero();
    for (k, c) in groups {
        out = out.add(&c.scale_ratfn(&haar_ccstar(k)));
    }
    out
}

fn haar_ccstar(k: u32) -> RatFn {
    // (1 - q^2)/(1 - q^{2k+2}) = 1 / (1 + q^2 + ... + q^{2k})
    let mut den = vec![BigRational::from_integer(0.into()); 4 * k as usize + 1];
    for i in 0..=k as usize {
        den[4 * i] = BigRational::one();
    }
    RatFn::new(QPoly::one(), QPoly::from_coeffs(den))
}

/// Modular automorphism `theta(y) = d_{K^2}(K^{-2} |> y)`; scales a PBW
/// monomial by `q^{2i}` (`a`-power) or `q^{-2i}` (`a*`-power).
pub fn theta(x: &AlgebraElement) -> AlgebraElement {
    theta_pow(x, 1)
}

pub fn theta_inv(x: &AlgebraElement) -> AlgebraElement {
    theta_pow(x, -1)
}

fn theta_pow(x: &AlgebraElement, e: i64) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for (m, c) in &x.terms {
        let sign = if m.star { -1 } else { 1 };
        let exp = Half::int(e * sign * 2 * m.a as i64);
        out.insert(*m, c.mul(&Scalar::q_pow(exp)));
    }
    out
}

/// The `M_N`-homogeneous component of `x`.
pub fn grade_component(x: &AlgebraElement, n: i64) -> AlgebraElement {
    AlgebraElement {
        terms: x
            .terms
            .iter()
            .filter(|(m, _)| m.grade() == n)
            .map(|(m, c)| (*m, c.clone()))
            .collect(),
    }
}

/// True when every monomial of `x` lies in `M_n`.
pub fn is_homogeneous(x: &AlgebraElement, n: i64) -> bool {
    x.terms.keys().all(|m| m.grade() == n)
}

// ---- actions of the U_q(su_2) generators ----

/// Left action of a single generator, `g |> x`, via the coproduct
/// `D(E) = E (x) K + K^{-1} (x) E` (same shape for `F`), `D(K) = K (x) K`.
pub fn act_gen_left(g: Gen, x: &AlgebraElement) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for (m, c) in &x.terms {
        let acted = act_gen_left_mono(g, m);
        for (m2, c2) in &acted.terms {
            out.insert(*m2, c2.mul(c));
        }
    }
    out
}

/// Right action `d_g(x)` with the twisted Leibniz rule
/// `d_X(ab) = d_K(a) d_X(b) + d_X(a) d_{K^{-1}}(b)` for `X = E, F`.
pub fn act_gen_right(g: Gen, x: &AlgebraElement) -> AlgebraElement {
    let mut out = AlgebraElement::zero();
    for (m, c) in &x.terms {
        let acted = act_gen_right_mono(g, m);
        for (m2, c2) in &acted.terms {
            out.insert(*m2, c2.mul(c));
        }
    }
    out
}

type ActCache = RwLock<HashMap<(Gen, Mono), Arc<AlgebraElement>>>;

fn act_left_cache() -> &'static ActCache {
    static C: OnceLock<ActCache> = OnceLock::new();
    C.get_or_init(|| RwLock::new(HashMap::new()))
}

fn act_right_cache() -> &'static ActCache {
    static C: OnceLock<ActCache> = OnceLock::new();
    C.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Left action on the four generators (frozen tables; the build-time
/// oracle in the tests re-derives them from the ladder relations).
fn left_table(g: Gen, l: Letter) -> Option<(i64, Half, Letter)> {
    use Letter::*;
    match (g, l) {
        (Gen::E, A) => Some((-1, Half::int(1), CStar)),
        (Gen::E, C) => Some((1, Half::ZERO, AStar)),
        (Gen::E, AStar) | (Gen::E, CStar) => None,
        (Gen::F, CStar) => Some((-1, Half::int(-1), A)),
        (Gen::F, AStar) => Some((1, Half::ZERO, C)),
        (Gen::F, A) | (Gen::F, C) => None,
        _ => unreachable!("K handled by weight scaling"),
    }
}

/// Right action `d_E`, `d_F` on the four generators.
fn right_table(g: Gen, l: Letter) -> Option<(i64, Half, Letter)> {
    use Letter::*;
    match (g, l) {
        (Gen::E, C) => Some((-1, Half::int(-1), A)),
        (Gen::E, AStar) => Some((1, Half::ZERO, CStar)),
        (Gen::E, A) | (Gen::E, CStar) => None,
        (Gen::F, A) => Some((-1, Half::int(1), C)),
        (Gen::F, CStar) => Some((1, Half::ZERO, AStar)),
        (Gen::F, C) | (Gen::F, AStar) => None,
        _ => unreachable!("K handled by weight scaling"),
    }
}

fn act_gen_left_mono(g: Gen, m: &Mono) -> Arc<AlgebraElement> {
    match g {
        Gen::K => {
            return Arc::new(AlgebraElement::monomial(
                *m,
                Scalar::q_pow(m.k_weight()),
            ));
        }
        Gen::Kinv => {
            return Arc::new(AlgebraElement::monomial(
                *m,
                Scalar::q_pow(-m.k_weight()),
            ));
        }
        _ => {}
    }
    if let Some(hit) = act_left_cache().read().unwrap().get(&(g, *m)) {
        return hit.clone();
    }
    // E |> (l1...ln) = sum_p (K^{-1} |> prefix)(E |> l_p)(K |> suffix)
    let letters = m.letters();
    let mut out = AlgebraElement::zero();
    for p in 0..letters.len() {
        if let Some((sign, e, repl)) = left_table(g, letters[p]) {
            let (pre, _, suf) = m.split_at(p);
            let w = -pre.k_weight() + suf.k_weight() + e;
            let coeff = Scalar::q_pow(w).scale_ratfn(&RatFn::from_int(sign));
            let prod = mul_mono(&pre, &Mono::gen(repl));
            for (m1, c1) in &prod.terms {
                let prod2 = mul_mono(m1, &suf);
                for (m2, c2) in &prod2.terms {
                    out.insert(*m2, c2.mul(c1).mul(&coeff));
                }
            }
        }
    }
    let arc = Arc::new(out);
    act_left_cache().write().unwrap().insert((g, *m), arc.clone());
    arc
}

fn act_gen_right_mono(g: Gen, m: &Mono) -> Arc<AlgebraElement> {
    match g {
        Gen::K => {
            return Arc::new(AlgebraElement::monomial(
                *m,
                Scalar::q_pow(m.dk_weight()),
            ));
        }
        Gen::Kinv => {
            return Arc::new(AlgebraElement::monomial(
                *m,
                Scalar::q_pow(-m.dk_weight()),
            ));
        }
        _ => {}
    }
    if let Some(hit) = act_right_cache().read().unwrap().get(&(g, *m)) {
        return hit.clone();
    }
    // d_X(l1...ln) = sum_p d_K(prefix) d_X(l_p) d_{K^{-1}}(suffix)
    let letters = m.letters();
    let mut out = AlgebraElement::zero();
    for p in 0..letters.len() {
        if let Some((sign, e, repl)) = right_table(g, letters[p]) {
            let (pre, _, suf) = m.split_at(p);
            let w = pre.dk_weight() - suf.dk_weight() + e;
            let coeff = Scalar::q_pow(w).scale_ratfn(&RatFn::from_int(sign));
            let prod = mul_mono(&pre, &Mono::gen(repl));
            for (m1, c1) in &prod.terms {
                let prod2 = mul_mono(m1, &suf);
                for (m2, c2) in &prod2.terms {
                    out.insert(*m2, c2.mul(c1).mul(&coeff));
                }
            }
        }
    }
    let arc = Arc::new(out);
    act_right_cache().write().unwrap().insert((g, *m), arc.clone());
    arc
}

// ---- the orthonormal v-basis ----

/// `v^l_{jk}` with its expansion in the PBW basis.
#[derive(Debug, Clone)]
pub struct VBasisVector {
    pub l: Half,
    pub j: Half,
    pub k: Half,
    pub expansion: Arc<AlgebraElement>,
}

type VCache = RwLock<BTreeMap<(i64, i64, i64), Arc<AlgebraElement>>>;

fn v_cache() -> &'static VCache {
    static C: OnceLock<VCache> = OnceLock::new();
    C.get_or_init(|| RwLock::new(BTreeMap::new()))
}

fn v_key(l: Half, j: Half, k: Half) -> (i64, i64, i64) {
    (l.twice(), j.twice(), k.twice())
}

/// `v^l_{jk}` split as `prefactor * body`: the prefactor collects the
/// radical normalizations (`mu` and the ladder alphas) into one
/// single-term scalar, leaving a body with Laurent-polynomial
/// coefficients. Exact inner products of bodies stay radical-free.
#[derive(Debug, Clone)]
pub struct VFactored {
    pub prefactor: Scalar,
    pub body: Arc<AlgebraElement>,
}

type VFCache = RwLock<BTreeMap<(i64, i64, i64), VFactored>>;

fn vf_cache() -> &'static VFCache {
    static C: OnceLock<VFCache> = OnceLock::new();
    C.get_or_init(|| RwLock::new(BTreeMap::new()))
}

/// The factored form of `v^l_{jk}`.
pub fn v_factored(l: Half, j: Half, k: Half) -> Result<VFactored> {
    if l < Half::ZERO
        || j.abs() > l
        || k.abs() > l
        || !(l - j).is_integer()
        || !(l - k).is_integer()
    {
        return Err(Error::IndexOutOfRange(format!("v^{l}_({j},{k})")));
    }
    Ok(v_factored_raw(l, j, k))
}

fn v_factored_raw(l: Half, j: Half, k: Half) -> VFactored {
    if let Some(hit) = vf_cache().read().unwrap().get(&v_key(l, j, k)) {
        return hit.clone();
    }
    let out = if j == -l && k == -l {
        // seed: v^l_{-l,-l} = h(a*^{2l} a^{2l})^{-1/2} a^{2l}
        let two_l = l.twice() as u32;
        let seed = AlgebraElement::monomial(Mono::new(false, two_l, 0, 0), Scalar::one());
        let norm2 = haar(&seed.star().mul(&seed));
        let mu = norm2
            .inv()
            .and_then(|x| x.sqrt_rational())
            .expect("Haar norm of a^{2l} is a positive rational function");
        VFactored {
            prefactor: mu,
            body: Arc::new(seed),
        }
    } else if j == -l {
        // raise k: divide by alpha^l_{k-1}
        let prev = v_factored_raw(l, j, k - Half::ONE);
        let body = act_gen_left(Gen::E, &prev.body);
        VFactored {
            prefactor: prev
                .prefactor
                .mul(&alpha(l, k - Half::ONE).inv().expect("alpha nonzero")),
            body: Arc::new(body),
        }
    } else {
        // raise j: divide by -alpha^l_{j-1}
        let prev = v_factored_raw(l, j - Half::ONE, k);
        let body = act_gen_right(Gen::F, &prev.body);
        VFactored {
            prefactor: prev
                .prefactor
                .mul(&alpha(l, j - Half::ONE).neg().inv().expect("alpha nonzero")),
            body: Arc::new(body),
        }
    };
    vf_cache()
        .write()
        .unwrap()
        .insert(v_key(l, j, k), out.clone());
    out
}

/// Basis vector `v^l_{jk}`, built by ladder operators from the seed
/// `a^{2l}` with Haar-state normalization.
pub fn v_basis(l: Half, j: Half, k: Half) -> Result<VBasisVector> {
    if l < Half::ZERO
        || j.abs() > l
        || k.abs() > l
        || !(l - j).is_integer()
        || !(l - k).is_integer()
    {
        return Err(Error::IndexOutOfRange(format!("v^{l}_({j},{k})")));
    }
    let expansion = v_expansion(l, j, k);
    Ok(VBasisVector { l, j, k, expansion })
}

fn v_expansion(l: Half, j: Half, k: Half) -> Arc<AlgebraElement> {
    if let Some(hit) = v_cache().read().unwrap().get(&v_key(l, j, k)) {
        return hit.clone();
    }
    let f = v_factored_raw(l, j, k);
    let arc = Arc::new(f.body.scale(&f.prefactor));
    v_cache()
        .write()
        .unwrap()
        .insert(v_key(l, j, k), arc.clone());
    arc
}

/// Matrix coefficient `t^l_{jk} = [2l+1]_q^{-1/2} q^{-j} v^l_{jk}`.
pub fn t_coeff(l: Half, j: Half, k: Half) -> Result<AlgebraElement> {
    let v = v_basis(l, j, k)?;
    let norm = crate::scalar::qint(l.twice() + 1)
        .sqrt_rational()
        .expect("positive q-integer")
        .inv()
        .expect("nonzero");
    Ok(v.expansion.scale(&norm.mul(&Scalar::q_pow(-j))))
}

/// Harmonic expansion of `x` over the `v`-basis with `l <= lmax`.
/// Fails with the residual when the cutoff is too small.
pub fn expand_in_v(
    x: &AlgebraElement,
    lmax: Half,
) -> Result<Vec<(Half, Half, Half, Scalar)>> {
    let mut classes: BTreeMap<(i64, i64), AlgebraElement> = BTreeMap::new();
    for (m, c) in &x.terms {
        let j = Half::from_twice(m.grade());
        let k = m.k_weight();
        classes
            .entry((j.twice(), k.twice()))
            .or_default()
            .insert(*m, c.clone());
    }
    let mut out = Vec::new();
    let mut residual = x.clone();
    for ((j2, k2), part) in &classes {
        let j = Half::from_twice(*j2);
        let k = Half::from_twice(*k2);
        let lmin = j.abs().max(k.abs());
        let mut l = lmin;
        while l <= lmax {
            let v = v_expansion(l, j, k);
            let coeff = haar(&v.star().mul(part));
            if !coeff.is_zero() {
                residual = residual.sub(&v.scale(&coeff));
                out.push((l, j, k, coeff));
            }
            l = l + Half::ONE;
        }
    }
    if !residual.is_zero() {
        return Err(Error::ExpansionResidual {
            cutoff: lmax.to_string(),
            residual: residual.to_string(),
        });
    }
    out.sort_by_key(|(l, j, k, _)| (l.twice(), j.twice(), k.twice()));
    Ok(out)
}

// ---- v-basis cache persistence ----

const VCACHE_HEADER: &str = "qpodles-vcache 1";

/// Writes the in-memory `v`-basis cache to a line-oriented file.
pub fn vcache_save(path: &std::path::Path) -> std::io::Result<()> {
    use std::io::Write;
    let cache = v_cache().read().unwrap();
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "{VCACHE_HEADER}")?;
    for ((l, j, k), elem) in cache.iter() {
        writeln!(
            f,
            "({} {} {}) -> {}",
            Half::from_twice(*l),
            Half::from_twice(*j),
            Half::from_twice(*k),
            elem
        )?;
    }
    Ok(())
}

/// Loads a cache file produced by [`vcache_save`]. A header mismatch
/// invalidates the file.
pub fn vcache_load(path: &std::path::Path) -> Result<usize> {
    let data = std::fs::read_to_string(path)
        .map_err(|e| Error::CacheFormat(format!("{}: {e}", path.display())))?;
    let mut lines = data.lines();
    match lines.next() {
        Some(h) if h.trim() == VCACHE_HEADER => {}
        other => {
            return Err(Error::CacheFormat(format!(
                "bad header {:?}",
                other.unwrap_or("")
            )))
        }
    }
    let mut n = 0;
    for line in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (key, val) = line
            .split_once("->")
            .ok_or_else(|| Error::CacheFormat(format!("bad line {line:?}")))?;
        let key = key.trim();
        let key = key
            .strip_prefix('(')
            .and_then(|k| k.strip_suffix(')'))
            .ok_or_else(|| Error::CacheFormat(format!("bad key {key:?}")))?;
        let parts: Vec<&str> = key.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(Error::CacheFormat(format!("bad key {key:?}")));
        }
        let l = Half::parse(parts[0])?;
        let j = Half::parse(parts[1])?;
        let k = Half::parse(parts[2])?;
        let elem = crate::expr::parse_suq2(val.trim())?;
        v_cache()
            .write()
            .unwrap()
            .insert(v_key(l, j, k), Arc::new(elem));
        n += 1;
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qint;

    fn a() -> AlgebraElement {
        AlgebraElement::gen(Letter::A)
    }
    fn astar_el() -> AlgebraElement {
        AlgebraElement::gen(Letter::AStar)
    }
    fn c() -> AlgebraElement {
        AlgebraElement::gen(Letter::C)
    }
    fn cstar_el() -> AlgebraElement {
        AlgebraElement::gen(Letter::CStar)
    }
    fn qp(e: i64) -> Scalar {
        Scalar::q_pow(Half::int(e))
    }

    #[test]
    fn defining_relations() {
        // c a = q^{-1} a c
        assert_eq!(c().mul(&a()), a().mul(&c()).scale(&qp(-1)));
        // a a* = 1 - q^2 cc*
        let aastar = a().mul(&astar_el());
        let expect = AlgebraElement::one()
            .sub(&c().mul(&cstar_el()).scale(&qp(2)));
        assert_eq!(aastar, expect);
        // a* a = 1 - c* c
        let astara = astar_el().mul(&a());
        let expect = AlgebraElement::one().sub(&cstar_el().mul(&c()));
        assert_eq!(astara, expect);
        // c c* = c* c
        assert_eq!(c().mul(&cstar_el()), cstar_el().mul(&c()));
        // c a* = q a* c
        assert_eq!(c().mul(&astar_el()), astar_el().mul(&c()).scale(&qp(1)));
        // multiply(x, 1) = x
        let x = a().mul(&c()).mul(&cstar_el());
        assert_eq!(x.mul(&AlgebraElement::one()), x);
    }

    #[test]
    fn star_is_antimultiplicative_involution() {
        let x = a().mul(&c());
        let y = cstar_el().mul(&astar_el());
        assert_eq!(x.star().star(), x);
        assert_eq!(x.mul(&y).star(), y.star().mul(&x.star()));
        // (ac)* = c* a* = q a* c*
        assert_eq!(
            x.star(),
            astar_el().mul(&cstar_el()).scale(&qp(1))
        );
    }

    #[test]
    fn counit_values() {
        assert!(counit(&a()).is_one());
        assert!(counit(&astar_el()).is_one());
        assert!(counit(&cstar_el().mul(&c())).is_zero());
        // eps is an algebra map: eps(a a*) = 1
        assert!(counit(&a().mul(&astar_el())).is_one());
    }

    #[test]
    fn haar_values() {
        assert!(haar(&AlgebraElement::one()).is_one());
        assert!(haar(&c()).is_zero());
        // h(c*c) = 1/(1+q^2), oracle: solve the twisted-trace relations
        // h(aa*) = q^{-2} h(a*a) with a*a + c*c = 1, aa* + q^2 cc* = 1.
        let hccs = haar(&cstar_el().mul(&c()));
        let lhs = Scalar::one().sub(&qp(2).mul(&hccs)); // h(aa*)
        let rhs = qp(-2).mul(&Scalar::one().sub(&hccs)); // q^-2 h(a*a)
        assert_eq!(lhs, rhs);
        let expect = qint(2)
            .mul(&Scalar::q_pow(Half::int(1)))
            .inv()
            .unwrap(); // 1/(q [2]_q) = 1/(1+q^2)
        assert_eq!(hccs, expect);
    }

    #[test]
    fn theta_eigenvalues() {
        assert_eq!(theta(&a()), a().scale(&qp(2)));
        assert_eq!(theta(&cstar_el()), cstar_el());
        assert_eq!(theta(&AlgebraElement::one()), AlgebraElement::one());
        assert_eq!(theta_inv(&theta(&a().mul(&c()))), a().mul(&c()));
    }

    #[test]
    fn grading() {
        assert_eq!(grade_component(&c(), 1), c());
        assert!(grade_component(&c(), 0).is_zero());
        let ccs = cstar_el().mul(&c());
        assert_eq!(grade_component(&ccs, 0), ccs);
    }

    #[test]
    fn left_action_tables() {
        // act_left(E, 1) = 0, K-eigenvalues
        assert!(act_gen_left(Gen::E, &AlgebraElement::one()).is_zero());
        assert_eq!(act_gen_left(Gen::K, &c()), c().scale(&Scalar::q_pow(-Half::HALF)));
        // E |> a = -q c*
        assert_eq!(act_gen_left(Gen::E, &a()), cstar_el().scale(&qp(1)).neg());
        // F |> a* = c
        assert_eq!(act_gen_left(Gen::F, &astar_el()), c());
    }

    #[test]
    fn right_action_tables() {
        assert!(act_gen_right(Gen::F, &AlgebraElement::one()).is_zero());
        // d_K(a) = q^{1/2} a
        assert_eq!(
            act_gen_right(Gen::K, &a()),
            a().scale(&Scalar::q_pow(Half::HALF))
        );
        // d_F(a) = -q c
        assert_eq!(act_gen_right(Gen::F, &a()), c().scale(&qp(1)).neg());
        // d_E(c) = -q^{-1} a
        assert_eq!(act_gen_right(Gen::E, &c()), a().scale(&qp(-1)).neg());
    }

    #[test]
    fn ladder_oracle_for_action_tables() {
        // The frozen tables must reproduce the EFK ladder on v^l for
        // small l, both actions, both directions.
        for l2 in 1..=3i64 {
            let l = Half::from_twice(l2);
            for j in Half::range_incl(-l, l) {
                for k in Half::range_incl(-l, l) {
                    let v = v_expansion(l, j, k);
                    // E |> v = alpha^l_k v_{j,k+1}
                    let up = act_gen_left(Gen::E, &v);
                    if k < l {
                        let expect = v_expansion(l, j, k + Half::ONE)
                            .scale(&alpha(l, k));
                        assert_eq!(up, expect, "E ladder at l={l} j={j} k={k}");
                    } else {
                        assert!(up.is_zero());
                    }
                    // F |> v = alpha^l_{k-1} v_{j,k-1}
                    let down = act_gen_left(Gen::F, &v);
                    if k > -l {
                        let expect = v_expansion(l, j, k - Half::ONE)
                            .scale(&alpha(l, k - Half::ONE));
                        assert_eq!(down, expect);
                    } else {
                        assert!(down.is_zero());
                    }
                    // d_E(v) = -alpha^l_{j-1} v_{j-1,k}
                    let de = act_gen_right(Gen::E, &v);
                    if j > -l {
                        let expect = v_expansion(l, j - Half::ONE, k)
                            .scale(&alpha(l, j - Half::ONE))
                            .neg();
                        assert_eq!(de, expect);
                    } else {
                        assert!(de.is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn v_basis_small_values() {
        // v^0_00 = 1
        assert_eq!(*v_expansion(Half::ZERO, Half::ZERO, Half::ZERO), AlgebraElement::one());
        // v^{1/2}_{-1/2,-1/2} = [2]^{1/2} q^{-1/2} a
        let v = v_expansion(Half::HALF, -Half::HALF, -Half::HALF);
        let coeff = qint(2)
            .sqrt_rational()
            .unwrap()
            .mul(&Scalar::q_pow(-Half::HALF));
        assert_eq!(*v, a().scale(&coeff));
        // v^{1/2}_{1/2,-1/2} = [2]^{1/2} q^{1/2} c
        let v = v_expansion(Half::HALF, Half::HALF, -Half::HALF);
        let coeff = qint(2)
            .sqrt_rational()
            .unwrap()
            .mul(&Scalar::q_pow(Half::HALF));
        assert_eq!(*v, c().scale(&coeff));
        assert!(v_basis(Half::HALF, Half::ONE, Half::ZERO).is_err());
    }

    #[test]
    fn orthonormality_small() {
        for l2 in 0..=2i64 {
            let l = Half::from_twice(l2);
            for j in Half::range_incl(-l, l) {
                for k in Half::range_incl(-l, l) {
                    let v = v_expansion(l, j, k);
                    for l2b in 0..=2i64 {
                        let lb = Half::from_twice(l2b);
                        for jb in Half::range_incl(-lb, lb) {
                            for kb in Half::range_incl(-lb, lb) {
                                let w = v_expansion(lb, jb, kb);
                                let ip = haar(&v.star().mul(&w));
                                if (l, j, k) == (lb, jb, kb) {
                                    assert!(ip.is_one(), "norm of v^{l}_({j},{k})");
                                } else {
                                    assert!(ip.is_zero());
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn expansion_roundtrip() {
        let x = a().mul(&c()).add(&cstar_el().mul(&c()).scale(&qint(3)));
        let coeffs = expand_in_v(&x, Half::int(2)).unwrap();
        let mut rec = AlgebraElement::zero();
        for (l, j, k, c) in &coeffs {
            rec = rec.add(&v_expansion(*l, *j, *k).scale(c));
        }
        assert_eq!(rec, x);
        // expand_in_v(1, 0) = [(0,0,0,1)]
        let one = expand_in_v(&AlgebraElement::one(), Half::ZERO).unwrap();
        assert_eq!(one.len(), 1);
        assert!(one[0].3.is_one());
        // residual reported when cutoff too small
        assert!(expand_in_v(&x, Half::HALF).is_err());
    }

    #[test]
    fn expansion_examples() {
        // expand(a) = [2]^{-1/2} q^{1/2} v^{1/2}_{-1/2,-1/2}
        let coeffs = expand_in_v(&a(), Half::HALF).unwrap();
        assert_eq!(coeffs.len(), 1);
        let expect = qint(2)
            .sqrt_rational()
            .unwrap()
            .inv()
            .unwrap()
            .mul(&Scalar::q_pow(Half::HALF));
        assert_eq!(coeffs[0].3, expect);
        // expand(c*c, 1): l = 0 coefficient 1/(1+q^2)
        let ccs = cstar_el().mul(&c());
        let coeffs = expand_in_v(&ccs, Half::ONE).unwrap();
        let l0: Vec<_> = coeffs.iter().filter(|(l, _, _, _)| *l == Half::ZERO).collect();
        assert_eq!(l0.len(), 1);
        assert_eq!(l0[0].3, haar(&ccs));
        assert!(coeffs.iter().all(|(l, _, _, _)| *l <= Half::ONE));
    }
}
