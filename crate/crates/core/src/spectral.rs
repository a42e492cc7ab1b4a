//! The 0-summable spectral triple on truncated weight bases: Dirac
//! spectrum, holomorphic-structure kernels, the real structure, and the
//! index/q-index of the compressed Dirac operator.
//!
//! Operators are applied symbolically (exactly) to polynomial vectors;
//! numbers enter only when matrix coefficients are evaluated at `q0`.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_rational::BigRational;

use crate::cyclic::Chain;
use crate::error::Error;
use crate::half::Half;
use crate::hopf::Gen;
use crate::ktheory::{projection_p, Check, Report};
use crate::podles::{embed, unembed, PodlesElement};
use crate::scalar::{alpha, qint, Scalar};
use crate::suq2::{
    act_gen_left, act_gen_right, grade_component, v_basis, AlgebraElement,
};
use crate::Result;

/// Labels `(l, k)` of the weight basis `{v^l_{N/2,k}}` of `M_N` with
/// `l <= cutoff`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightBasis {
    pub n: i64,
    pub cutoff: Half,
    pub labels: Vec<(Half, Half)>,
}

impl WeightBasis {
    pub fn new(n: i64, cutoff: Half) -> WeightBasis {
        let mut labels = Vec::new();
        let mut l = Half::from_twice(n.abs());
        while l <= cutoff {
            for k in Half::range_incl(-l, l) {
                labels.push((l, k));
            }
            l = l + Half::ONE;
        }
        WeightBasis { n, cutoff, labels }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn index_of(&self, l: Half, k: Half) -> Option<usize> {
        self.labels.iter().position(|&(a, b)| a == l && b == k)
    }

    /// The left-index `j = N/2` shared by all labels.
    pub fn j(&self) -> Half {
        Half::from_twice(self.n)
    }
}

/// Exact matrix of an operator between weight bases.
#[derive(Debug, Clone)]
pub struct ExactOp {
    pub from: WeightBasis,
    pub to: WeightBasis,
    entries: Vec<Scalar>,
}

impl ExactOp {
    pub fn zero(from: WeightBasis, to: WeightBasis) -> ExactOp {
        let n = from.dim() * to.dim();
        ExactOp {
            from,
            to,
            entries: vec![Scalar::zero(); n],
        }
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.from.dim() + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        let i = r * self.from.dim() + c;
        self.entries[i] = v;
    }

    pub fn column_is_zero(&self, c: usize) -> bool {
        (0..self.to.dim()).all(|r| self.get(r, c).is_zero())
    }

    pub fn to_numeric(&self, q0: &BigRational) -> Result<DMatrix<f64>> {
        let mut m = DMatrix::zeros(self.to.dim(), self.from.dim());
        for r in 0..self.to.dim() {
            for c in 0..self.from.dim() {
                let s = self.get(r, c);
                if !s.is_zero() {
                    m[(r, c)] = s.eval_f64(q0)?;
                }
            }
        }
        Ok(m)
    }
}

/// Dirac eigenvalues `+-[l + 1/2]_q` with multiplicity `2l + 1`, for
/// `l = 1/2, 3/2, ..., cutoff`. The eigenvectors are
/// `(v^l_{-1/2,k}, -+ v^l_{1/2,k})/sqrt(2)`.
pub fn dirac_spectrum(cutoff: Half) -> Vec<(Scalar, u32)> {
    let mut out = Vec::new();
    let mut l = Half::HALF;
    while l <= cutoff {
        let ev = qint((l + Half::HALF).as_integer().expect("l half-odd"));
        let mult = (l.twice() + 1) as u32;
        out.push((ev.clone(), mult));
        out.push((ev.neg(), mult));
        l = l + Half::ONE;
    }
    out
}

/// Exact matrices of `d_E: M_N -> M_{N-2}` and `d_F: M_N -> M_{N+2}` on
/// weight bases with cutoff `l <= lmax`.
pub fn partial_matrices(n: i64, lmax: Half) -> (ExactOp, ExactOp) {
    let from = WeightBasis::new(n, lmax);
    let j = from.j();
    // E-matrix
    let to_e = WeightBasis::new(n - 2, lmax);
    let mut e_op = ExactOp::zero(from.clone(), to_e);
    for (c, &(l, k)) in e_op.from.labels.clone().iter().enumerate() {
        // d_E(v^l_{jk}) = -alpha^l_{j-1} v^l_{j-1,k}
        if (j - Half::ONE).abs() <= l {
            let coeff = alpha(l, j - Half::ONE).neg();
            if !coeff.is_zero() {
                if let Some(r) = e_op.to.index_of(l, k) {
                    e_op.set(r, c, coeff);
                }
            }
        }
    }
    // F-matrix
    let to_f = WeightBasis::new(n + 2, lmax);
    let mut f_op = ExactOp::zero(from, to_f);
    for (c, &(l, k)) in f_op.from.labels.clone().iter().enumerate() {
        // d_F(v^l_{jk}) = -alpha^l_j v^l_{j+1,k}
        if (j + Half::ONE).abs() <= l {
            let coeff = alpha(l, j).neg();
            if !coeff.is_zero() {
                if let Some(r) = f_op.to.index_of(l, k) {
                    f_op.set(r, c, coeff);
                }
            }
        }
    }
    (e_op, f_op)
}

/// Result of the kernel zero-pattern check.
#[derive(Debug, Clone)]
pub struct KernelLemma {
    pub pass: bool,
    pub ker_e_dim: usize,
    pub ker_f_dim: usize,
}

/// Verifies that the zero columns of the `d_E`/`d_F` weight matrices
/// reproduce exactly the stated kernels: for `N > 0` the `l = N/2` row
/// spans `ker d_F` and `ker d_E = 0`; mirrored for `N < 0`; both kernels
/// are the single vector `v^0_{00}` at `N = 0`.
pub fn kernel_lemma_check(n: i64, lmax: Half) -> KernelLemma {
    let (e_op, f_op) = partial_matrices(n, lmax);
    let lmin = Half::from_twice(n.abs());
    let expect_f: Vec<usize> = match n {
        _ if n > 0 => f_op
            .from
            .labels
            .iter()
            .enumerate()
            .filter(|(_, &(l, _))| l == lmin)
            .map(|(i, _)| i)
            .collect(),
        0 => vec![0],
        _ => Vec::new(),
    };
    let expect_e: Vec<usize> = match n {
        _ if n < 0 => e_op
            .from
            .labels
            .iter()
            .enumerate()
            .filter(|(_, &(l, _))| l == lmin)
            .map(|(i, _)| i)
            .collect(),
        0 => vec![0],
        _ => Vec::new(),
    };
    let zero_f: Vec<usize> = (0..f_op.from.dim())
        .filter(|&c| f_op.column_is_zero(c))
        .collect();
    let zero_e: Vec<usize> = (0..e_op.from.dim())
        .filter(|&c| e_op.column_is_zero(c))
        .collect();
    KernelLemma {
        pass: zero_f == expect_f && zero_e == expect_e,
        ker_e_dim: zero_e.len(),
        ker_f_dim: zero_f.len(),
    }
}

/// Representation of a degree-2 chain by the Dirac commutators:
/// `pi_D(sum a0 (x) a1 (x) a2) = sum a0 [D,a1][D,a2]` is diagonal; the
/// two multiplication elements are
/// `upper = sum a0 dE(a1) dF(a2)` (acting on `M_{-1}`) and
/// `lower = sum a0 dF(a1) dE(a2)` (acting on `M_1`).
pub fn pi_d(x: &Chain) -> Result<(PodlesElement, PodlesElement)> {
    if x.degree() != 2 {
        return Err(Error::ArityMismatch {
            arity: 3,
            degree: x.degree(),
        });
    }
    let mut upper = AlgebraElement::zero();
    let mut lower = AlgebraElement::zero();
    for (key, c) in x.terms() {
        let a0 = embed(&PodlesElement::monomial(key[0], Scalar::one()));
        let x1 = embed(&PodlesElement::monomial(key[1], Scalar::one()));
        let x2 = embed(&PodlesElement::monomial(key[2], Scalar::one()));
        let de1 = act_gen_right(Gen::E, &x1);
        let df1 = act_gen_right(Gen::F, &x1);
        let de2 = act_gen_right(Gen::E, &x2);
        let df2 = act_gen_right(Gen::F, &x2);
        upper = upper.add(&a0.mul(&de1.mul(&df2)).scale(c));
        lower = lower.add(&a0.mul(&df1.mul(&de2)).scale(c));
    }
    Ok((unembed(&upper)?, unembed(&lower)?))
}

// ---- real structure ----

/// Element of the spinor space `W = M_{-1} (+) M_1`, kept exact.
#[derive(Debug, Clone, PartialEq)]
pub struct WElem {
    pub minus: AlgebraElement,
    pub plus: AlgebraElement,
}

impl WElem {
    pub fn zero() -> WElem {
        WElem {
            minus: AlgebraElement::zero(),
            plus: AlgebraElement::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.minus.is_zero() && self.plus.is_zero()
    }

    pub fn add(&self, rhs: &WElem) -> WElem {
        WElem {
            minus: self.minus.add(&rhs.minus),
            plus: self.plus.add(&rhs.plus),
        }
    }

    pub fn sub(&self, rhs: &WElem) -> WElem {
        WElem {
            minus: self.minus.sub(&rhs.minus),
            plus: self.plus.sub(&rhs.plus),
        }
    }

    pub fn neg(&self) -> WElem {
        WElem {
            minus: self.minus.neg(),
            plus: self.plus.neg(),
        }
    }
}

/// `D(x_-, x_+) = (d_E x_+, d_F x_-)`.
pub fn dirac_apply(w: &WElem) -> WElem {
    WElem {
        minus: act_gen_right(Gen::E, &w.plus),
        plus: act_gen_right(Gen::F, &w.minus),
    }
}

/// `gamma = diag(1, -1)`.
pub fn gamma_apply(w: &WElem) -> WElem {
    WElem {
        minus: w.minus.clone(),
        plus: w.plus.neg(),
    }
}

/// `J_0(x) = (d_K (K^{-1} |> x))^*`, grade-reversing.
pub fn j0_apply(x: &AlgebraElement) -> AlgebraElement {
    act_gen_right(Gen::K, &act_gen_left(Gen::Kinv, x)).star()
}

/// `J = gamma J_0` on `W`.
pub fn j_apply(w: &WElem) -> WElem {
    WElem {
        minus: j0_apply(&w.plus),
        plus: j0_apply(&w.minus).neg(),
    }
}

/// Left multiplication by an `M_0` element.
pub fn mult_apply(a: &AlgebraElement, w: &WElem) -> WElem {
    WElem {
        minus: a.mul(&w.minus),
        plus: a.mul(&w.plus),
    }
}

/// `J b^* J^{-1}` with `J^{-1} = -J`.
pub fn j_conj_apply(bstar: &AlgebraElement, w: &WElem) -> WElem {
    j_apply(&mult_apply(bstar, &j_apply(w))).neg()
}

fn max_coeff_abs(x: &AlgebraElement, q0: &BigRational) -> Result<f64> {
    let mut m: f64 = 0.0;
    for (_, c) in x.terms() {
        m = m.max(c.eval_f64(q0)?.abs());
    }
    Ok(m)
}

fn welem_residual(w: &WElem, q0: &BigRational) -> Result<f64> {
    Ok(max_coeff_abs(&w.minus, q0)?.max(max_coeff_abs(&w.plus, q0)?))
}

/// Hilbert-space norm squared `h(x^* x)` of an element at `q0`.
pub fn hilbert_norm_sq(x: &AlgebraElement, q0: &BigRational) -> Result<f64> {
    if x.is_zero() {
        return Ok(0.0);
    }
    let mut ctx = NumCtx::new(q0);
    let xn = ctx.eval_elem(x)?;
    let xs = ctx.star(&xn);
    let xx = ctx.mul(&xs, &xn);
    Ok(ctx.haar(&xx))
}

/// Verifies the real-structure identities on the truncation `l <= cutoff`
/// at `q = q0`: `J^2 = -1`, `JD = DJ`, `gamma D = -D gamma`, the
/// commutant and first-order conditions for `a, b` among the Podles
/// generators, and the conjugation formula
/// `J_0 b^* J_0^{-1} x = x (K |> b)`. All operators are applied exactly;
/// the reported residuals are numeric.
pub fn real_structure_check(cutoff: Half, q0: &BigRational, tol: f64) -> Result<Report> {
    let mut report = Report::default();
    let mut basis: Vec<WElem> = Vec::new();
    let mut interior: Vec<WElem> = Vec::new();
    for (grade, plus_slot) in [(-1i64, false), (1i64, true)] {
        let wb = WeightBasis::new(grade, cutoff);
        for &(l, k) in &wb.labels {
            let v = v_basis(l, Half::from_twice(grade), k)?;
            let w = if plus_slot {
                WElem {
                    minus: AlgebraElement::zero(),
                    plus: (*v.expansion).clone(),
                }
            } else {
                WElem {
                    minus: (*v.expansion).clone(),
                    plus: AlgebraElement::zero(),
                }
            };
            if l <= cutoff - Half::ONE - Half::ONE {
                interior.push(w.clone());
            }
            basis.push(w);
        }
    }

    let check_max = |name: &str, residual: f64, report: &mut Report| {
        report.push(Check::new(name, residual <= tol, format!("{residual:.3e}"), format!("<= {tol:.1e}")));
    };

    // J^2 = -1
    let mut r = 0.0f64;
    for w in &basis {
        let jj = j_apply(&j_apply(w));
        r = r.max(welem_residual(&jj.add(w), q0)?);
    }
    check_max("J-squared-is-minus-one", r, &mut report);

    // JD = DJ
    let mut r = 0.0f64;
    for w in &basis {
        let lhs = j_apply(&dirac_apply(w));
        let rhs = dirac_apply(&j_apply(w));
        r = r.max(welem_residual(&lhs.sub(&rhs), q0)?);
    }
    check_max("J-commutes-with-D", r, &mut report);

    // gamma D + D gamma = 0
    let mut r = 0.0f64;
    for w in &basis {
        let lhs = gamma_apply(&dirac_apply(w));
        let rhs = dirac_apply(&gamma_apply(w));
        r = r.max(welem_residual(&lhs.add(&rhs), q0)?);
    }
    check_max("gamma-anticommutes-with-D", r, &mut report);

    let gens = [
        PodlesElement::gen_a(),
        PodlesElement::gen_b(),
        PodlesElement::gen_bstar(),
    ];

    // J_0 b* J_0^{-1} x = x (K |> b) on M_{-1} basis vectors
    let mut r = 0.0f64;
    for b in &gens {
        let bstar = embed(&b.star());
        let kb = act_gen_left(Gen::K, &embed(b));
        for w in &interior {
            for x in [&w.minus, &w.plus] {
                if x.is_zero() {
                    continue;
                }
                let lhs = j0_apply(&bstar.mul(&j0_apply(x)));
                let rhs = x.mul(&kb);
                r = r.max(max_coeff_abs(&lhs.sub(&rhs), q0)?);
            }
        }
    }
    check_max("J0-conjugation-is-right-multiplication", r, &mut report);

    // [a, J b* J^{-1}] = 0
    let mut r = 0.0f64;
    for a in &gens {
        let ae = embed(a);
        for b in &gens {
            let bstar = embed(&b.star());
            for w in &interior {
                let lhs = mult_apply(&ae, &j_conj_apply(&bstar, w));
                let rhs = j_conj_apply(&bstar, &mult_apply(&ae, w));
                r = r.max(welem_residual(&lhs.sub(&rhs), q0)?);
            }
        }
    }
    check_max("commutant", r, &mut report);

    // [[D,a], J b* J^{-1}] = 0
    let d_comm = |a: &AlgebraElement, w: &WElem| -> WElem {
        dirac_apply(&mult_apply(a, w)).sub(&mult_apply(a, &dirac_apply(w)))
    };
    let mut r = 0.0f64;
    for a in &gens {
        let ae = embed(a);
        for b in &gens {
            let bstar = embed(&b.star());
            for w in &interior {
                let lhs = d_comm(&ae, &j_conj_apply(&bstar, w));
                let rhs = j_conj_apply(&bstar, &d_comm(&ae, w));
                r = r.max(welem_residual(&lhs.sub(&rhs), q0)?);
            }
        }
    }
    check_max("first-order", r, &mut report);

    Ok(report)
}

// ---- index and q-index ----

/// Numeric elements: PBW monomials with `f64` coefficients at a fixed
/// `q0`. Monomial-level algebra is delegated to the exact layer and
/// cached; only the coefficients are floating point. This is the
/// backend for rank decisions, where exact radical arithmetic would be
/// disproportionate.
struct NumElem {
    terms: HashMap<crate::suq2::Mono, f64>,
}

impl NumElem {
    fn zero() -> NumElem {
        NumElem {
            terms: HashMap::new(),
        }
    }

    fn insert(&mut self, m: crate::suq2::Mono, v: f64) {
        if v == 0.0 {
            return;
        }
        let e = self.terms.entry(m).or_insert(0.0);
        *e += v;
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Per-`q0` evaluation context with monomial-level caches.
struct NumCtx {
    q0: BigRational,
    mul_cache: HashMap<(crate::suq2::Mono, crate::suq2::Mono), std::rc::Rc<Vec<(crate::suq2::Mono, f64)>>>,
    act_cache: HashMap<(Gen, crate::suq2::Mono), std::rc::Rc<Vec<(crate::suq2::Mono, f64)>>>,
    star_cache: HashMap<crate::suq2::Mono, (crate::suq2::Mono, f64)>,
    v_cache: HashMap<(i64, i64, i64), std::rc::Rc<NumElem>>,
    vstar_cache: HashMap<(i64, i64, i64), std::rc::Rc<NumElem>>,
    haar_cache: HashMap<u32, f64>,
}

impl NumCtx {
    fn new(q0: &BigRational) -> NumCtx {
        NumCtx {
            q0: q0.clone(),
            mul_cache: HashMap::new(),
            act_cache: HashMap::new(),
            star_cache: HashMap::new(),
            v_cache: HashMap::new(),
            vstar_cache: HashMap::new(),
            haar_cache: HashMap::new(),
        }
    }

    fn eval_elem(&self, x: &AlgebraElement) -> Result<NumElem> {
        let mut out = NumElem::zero();
        for (m, c) in x.terms() {
            out.insert(*m, c.eval_f64(&self.q0)?);
        }
        Ok(out)
    }

    fn mul_monos(
        &mut self,
        m1: crate::suq2::Mono,
        m2: crate::suq2::Mono,
    ) -> std::rc::Rc<Vec<(crate::suq2::Mono, f64)>> {
        if let Some(hit) = self.mul_cache.get(&(m1, m2)) {
            return hit.clone();
        }
        let exact = crate::suq2::mul_mono(&m1, &m2);
        let v: Vec<(crate::suq2::Mono, f64)> = exact
            .terms()
            .map(|(m, c)| (*m, c.eval_f64(&self.q0).expect("q-power evaluation")))
            .collect();
        let rc = std::rc::Rc::new(v);
        self.mul_cache.insert((m1, m2), rc.clone());
        rc
    }

    fn mul(&mut self, a: &NumElem, b: &NumElem) -> NumElem {
        let mut out = NumElem::zero();
        for (m1, c1) in &a.terms {
            for (m2, c2) in &b.terms {
                let prod = self.mul_monos(*m1, *m2);
                for (m, c) in prod.iter() {
                    out.insert(*m, c * c1 * c2);
                }
            }
        }
        out
    }

    fn act_right(&mut self, g: Gen, x: &NumElem) -> NumElem {
        let mut out = NumElem::zero();
        for (m, c) in &x.terms {
            let acted = if let Some(hit) = self.act_cache.get(&(g, *m)) {
                hit.clone()
            } else {
                let exact =
                    act_gen_right(g, &AlgebraElement::monomial(*m, Scalar::one()));
                let v: Vec<(crate::suq2::Mono, f64)> = exact
                    .terms()
                    .map(|(mm, cc)| (*mm, cc.eval_f64(&self.q0).expect("weight evaluation")))
                    .collect();
                let rc = std::rc::Rc::new(v);
                self.act_cache.insert((g, *m), rc.clone());
                rc
            };
            for (mm, cc) in acted.iter() {
                out.insert(*mm, cc * c);
            }
        }
        out
    }

    fn star(&mut self, x: &NumElem) -> NumElem {
        let mut out = NumElem::zero();
        for (m, c) in &x.terms {
            let (sm, sc) = if let Some(hit) = self.star_cache.get(m) {
                *hit
            } else {
                let exact = AlgebraElement::monomial(*m, Scalar::one()).star();
                let (sm, scal) = exact.terms().next().expect("monomial star");
                let pair = (*sm, scal.eval_f64(&self.q0).expect("q-power evaluation"));
                self.star_cache.insert(*m, pair);
                pair
            };
            out.insert(sm, sc * c);
        }
        out
    }

    fn haar(&mut self, x: &NumElem) -> f64 {
        let q0f = crate::scalar::rational_to_f64(&self.q0);
        let mut acc = 0.0;
        for (m, c) in &x.terms {
            if m.a_pow() == 0 && m.c_pow() == m.cs_pow() {
                let k = m.c_pow();
                let h = *self.haar_cache.entry(k).or_insert_with(|| {
                    (1.0 - q0f * q0f) / (1.0 - q0f.powi(2 * k as i32 + 2))
                });
                acc += h * c;
            }
        }
        acc
    }

    fn v_num(&mut self, l: Half, j: Half, k: Half) -> Result<std::rc::Rc<NumElem>> {
        let key = (l.twice(), j.twice(), k.twice());
        if let Some(hit) = self.v_cache.get(&key) {
            return Ok(hit.clone());
        }
        let exact = v_basis(l, j, k)?;
        let num = std::rc::Rc::new(self.eval_elem(&exact.expansion)?);
        self.v_cache.insert(key, num.clone());
        Ok(num)
    }

    fn v_star_num(&mut self, l: Half, j: Half, k: Half) -> Result<std::rc::Rc<NumElem>> {
        let key = (l.twice(), j.twice(), k.twice());
        if let Some(hit) = self.vstar_cache.get(&key) {
            return Ok(hit.clone());
        }
        let v = self.v_num(l, j, k)?;
        let s = std::rc::Rc::new(self.star(&v));
        self.vstar_cache.insert(key, s.clone());
        Ok(s)
    }

    /// Coefficients of `x` over a weight basis (complete when the basis
    /// cutoff covers the polynomial support; checked via Parseval).
    fn expand(&mut self, x: &NumElem, basis: &WeightBasis) -> Result<Vec<(usize, f64)>> {
        if x.is_zero() {
            return Ok(Vec::new());
        }
        let j = basis.j();
        // group by the left K-weight
        let mut classes: HashMap<i64, NumElem> = HashMap::new();
        let mut norm_sq = 0.0;
        for (m, c) in &x.terms {
            if m.grade() != basis.n {
                return Err(Error::Other(format!(
                    "grade {} monomial in an M_{} expansion",
                    m.grade(),
                    basis.n
                )));
            }
            classes
                .entry(m.k_weight().twice())
                .or_insert_with(NumElem::zero)
                .insert(*m, *c);
        }
        let mut out = Vec::new();
        let mut coeff_sq = 0.0;
        for (k2, part) in classes {
            let k = Half::from_twice(k2);
            let xs = self.star(&part);
            let xx = self.mul(&xs, &part);
            norm_sq += self.haar(&xx);
            let mut l = j.abs().max(k.abs());
            while l <= basis.cutoff {
                let vs = self.v_star_num(l, j, k)?;
                let prod = self.mul(&vs, &part);
                let c = self.haar(&prod);
                if c != 0.0 {
                    let idx = basis.index_of(l, k).expect("label in basis");
                    out.push((idx, c));
                    coeff_sq += c * c;
                }
                l = l + Half::ONE;
            }
        }
        let scale = norm_sq.abs().max(1.0);
        if (norm_sq - coeff_sq).abs() > 1e-8 * scale {
            return Err(Error::ExpansionResidual {
                cutoff: basis.cutoff.to_string(),
                residual: format!(
                    "Parseval defect {:.3e} (norm^2 {:.6e}, coeff^2 {:.6e})",
                    norm_sq - coeff_sq,
                    norm_sq,
                    coeff_sq
                ),
            });
        }
        Ok(out)
    }
}

/// Outcome of [`index_and_qindex`].
#[derive(Debug, Clone)]
pub struct IndexReport {
    pub n: i64,
    pub cutoff: Half,
    pub q0: BigRational,
    pub ind: i64,
    pub qind: f64,
    pub ker_dim: usize,
    pub coker_dim: usize,
    /// Largest singular value classified as zero (kernel side).
    pub sv_below: f64,
    /// Smallest singular value classified as nonzero (kernel side).
    pub sv_above: f64,
}

struct KernelData {
    dim: usize,
    k2_trace: f64,
    sv_below: f64,
    sv_above: f64,
}

/// Index and q-index of the compressed operator `P_N dbar_F P_N` from
/// the truncation `l <= cutoff`. The kernel (cokernel) is computed as
/// the joint null space of the compression and of `P - 1` on the
/// truncated domain; boundary-supported null vectors signal an unstable
/// truncation.
pub fn index_and_qindex(
    n: i64,
    cutoff: Half,
    q0: &BigRational,
    tol: f64,
) -> Result<IndexReport> {
    if cutoff < Half::from_twice(n.abs()) + Half::int(4) {
        return Err(Error::IndexOutOfRange(format!(
            "cutoff {cutoff} too small for N = {n}; need |N|/2 + 4"
        )));
    }
    let ker = compression_kernel(n, -1, Gen::F, cutoff, q0, tol)?;
    let coker = compression_kernel(n, 1, Gen::E, cutoff, q0, tol)?;
    Ok(IndexReport {
        n,
        cutoff,
        q0: q0.clone(),
        ind: ker.dim as i64 - coker.dim as i64,
        qind: ker.k2_trace - coker.k2_trace,
        ker_dim: ker.dim,
        coker_dim: coker.dim,
        sv_below: ker.sv_below.max(coker.sv_below),
        sv_above: ker.sv_above.min(coker.sv_above),
    })
}

/// Null space data of the stacked system `[P d P; P - 1]` on the domain
/// `C^{|N|+1} (x) M_grade` truncated at `l <= cutoff`.
fn compression_kernel(
    n: i64,
    grade: i64,
    direction: Gen,
    cutoff: Half,
    q0: &BigRational,
    tol: f64,
) -> Result<KernelData> {
    let p = projection_p(n)?;
    let dim = p.rows();
    let mut ctx = NumCtx::new(q0);
    let entries: Vec<NumElem> = p
        .entries()
        .iter()
        .map(|e| ctx.eval_elem(&embed(e)))
        .collect::<Result<_>>()?;
    let shift = Half::int(n.abs()); // entry degree <= 2|N|, l-shift <= |N|
    let domain = WeightBasis::new(grade, cutoff);
    let dom_ext = WeightBasis::new(grade, cutoff + shift);
    let cod_grade = match direction {
        Gen::F => grade + 2,
        Gen::E => grade - 2,
        _ => unreachable!(),
    };
    let cod_ext = WeightBasis::new(cod_grade, cutoff + shift + shift);

    let ncols = dim * domain.dim();
    let t_rows = dim * cod_ext.dim();
    let p_rows = dim * dom_ext.dim();
    let mut stacked = DMatrix::<f64>::zeros(t_rows + p_rows, ncols);

    // column-by-column assembly over the numeric backend
    for (bi, &(l, k)) in domain.labels.iter().enumerate() {
        let v = ctx.v_num(l, domain.j(), k)?;
        for slot in 0..dim {
            let col = slot * domain.dim() + bi;
            // P (e_slot (x) v)
            let pv: Vec<NumElem> = (0..dim)
                .map(|r| ctx.mul(&entries[r * dim + slot], &v))
                .collect();
            // (P - 1) part
            for (r, x) in pv.iter().enumerate() {
                let mut coords = ctx.expand(x, &dom_ext)?;
                if r == slot {
                    // subtract the unit column
                    let idx = dom_ext.index_of(l, k).expect("domain label");
                    coords.push((idx, -1.0));
                }
                for (idx, cval) in coords {
                    stacked[(t_rows + r * dom_ext.dim() + idx, col)] += cval;
                }
            }
            // P d P part
            let dpv: Vec<NumElem> = pv.iter().map(|x| ctx.act_right(direction, x)).collect();
            for r in 0..dim {
                let mut acc = NumElem::zero();
                for (m, dx) in dpv.iter().enumerate() {
                    let prod = ctx.mul(&entries[r * dim + m], dx);
                    for (mm, cc) in prod.terms {
                        acc.insert(mm, cc);
                    }
                }
                for (idx, cval) in ctx.expand(&acc, &cod_ext)? {
                    stacked[(r * cod_ext.dim() + idx, col)] += cval;
                }
            }
        }
    }

    // SVD rank decision
    let svd = stacked.clone().svd(false, true);
    let mut svs: Vec<f64> = svd.singular_values.iter().cloned().collect();
    svs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let ker_dim = svs.iter().filter(|&&s| s < tol).count()
        + ncols.saturating_sub(svs.len());
    let sv_below = svs
        .iter()
        .filter(|&&s| s < tol)
        .fold(0.0f64, |a, &b| a.max(b));
    let sv_above = svs
        .iter()
        .filter(|&&s| s >= tol)
        .fold(f64::INFINITY, |a, &b| a.min(b));
    if sv_above.is_finite() && sv_above - sv_below < 10.0 * tol {
        return Err(Error::IllConditioned {
            below: sv_below,
            above: sv_above,
            tol,
        });
    }

    // kernel basis = last ker_dim rows of V^T
    let v_t = svd.v_t.as_ref().expect("svd with V requested");
    let total = v_t.nrows();
    let mut k2_trace = 0.0f64;
    let weights = k2_weights(&p, &domain, q0)?;
    let boundary = boundary_mask(&p, &domain);
    for row in (total - ker_dim)..total {
        let mut boundary_mass = 0.0f64;
        let mut w_acc = 0.0f64;
        for c in 0..ncols {
            let x = v_t[(row, c)];
            w_acc += x * x * weights[c];
            if boundary[c] {
                boundary_mass += x * x;
            }
        }
        if boundary_mass > 1e-6 {
            return Err(Error::TruncationUnstable(format!(
                "kernel vector carries mass {boundary_mass:.3e} on the top l-layers; raise the cutoff"
            )));
        }
        k2_trace += w_acc;
    }
    Ok(KernelData {
        dim: ker_dim,
        k2_trace,
        sv_below,
        sv_above,
    })
}

/// Diagonal of `pi(K^2)` over the domain basis: `q^{-2m - 2k}` on
/// `e_m (x) v^l_{jk}`.
fn k2_weights(
    p: &crate::ktheory::AlgebraMatrix,
    domain: &WeightBasis,
    q0: &BigRational,
) -> Result<Vec<f64>> {
    let mut rep_weights = Vec::new();
    for l in p.spins() {
        for m in Half::range_incl(-*l, *l) {
            rep_weights.push(m);
        }
    }
    let mut out = vec![0.0; rep_weights.len() * domain.dim()];
    let mut cache: HashMap<i64, f64> = HashMap::new();
    for (slot, m) in rep_weights.iter().enumerate() {
        for (bi, &(_, k)) in domain.labels.iter().enumerate() {
            let e = -(m.twice() + k.twice()); // q^{-2m-2k} = (q^{1/2})^{2e}
            let w = match cache.entry(e) {
                std::collections::hash_map::Entry::Occupied(o) => *o.get(),
                std::collections::hash_map::Entry::Vacant(vac) => {
                    let v = Scalar::q_pow(Half::from_twice(e)).eval_f64(q0)?;
                    *vac.insert(v)
                }
            };
            out[slot * domain.dim() + bi] = w;
        }
    }
    Ok(out)
}

/// Marks domain coordinates in the top two `l`-layers.
fn boundary_mask(p: &crate::ktheory::AlgebraMatrix, domain: &WeightBasis) -> Vec<bool> {
    let dim = p.rows();
    let mut mask = vec![false; dim * domain.dim()];
    for slot in 0..dim {
        for (bi, &(l, _)) in domain.labels.iter().enumerate() {
            if l > domain.cutoff - Half::ONE {
                mask[slot * domain.dim() + bi] = true;
            }
        }
    }
    mask
}

/// The Poincare pairing on `K_0 = Z[(1,0)] (+) Z[(0,1)]`: the
/// antisymmetric bilinear extension of `<(1,1), (1,0)> = 1` (the index
/// pairing of the generators), i.e. `<(k,l), (m,n)> = l m - k n`.
pub fn poincare_pairing(k: i64, l: i64, m: i64, n: i64) -> i64 {
    l * m - k * n
}

/// One line of context for reports: the paper states the closed form of
/// the pairing with the opposite index placement while its proof
/// concludes with a third variant; the implemented form is the unique
/// antisymmetric bilinear extension of the generator value.
pub const POINCARE_NOTE: &str = "pairing = l*m - k*n, the antisymmetric bilinear \
extension of <(1,1),(1,0)> = 1; the source statement and its derivation disagree \
on the index placement";

/// Multiplication operator of an `M_0` element on a truncated weight
/// basis (used by the CLI spectrum/consistency paths and tests).
pub fn multiplication_matrix(
    y: &PodlesElement,
    from: &WeightBasis,
    to: &WeightBasis,
    q0: &BigRational,
) -> Result<DMatrix<f64>> {
    let mut ctx = NumCtx::new(q0);
    let ye = ctx.eval_elem(&embed(y))?;
    let mut m = DMatrix::zeros(to.dim(), from.dim());
    for (c, &(l, k)) in from.labels.iter().enumerate() {
        let v = ctx.v_num(l, from.j(), k)?;
        let prod = ctx.mul(&ye, &v);
        if prod.is_zero() {
            continue;
        }
        for (r, val) in ctx.expand(&prod, to)? {
            m[(r, c)] = val;
        }
    }
    Ok(m)
}

/// Consistency helper: the `M_N` grade of an embedded element (used in
/// tests; errors on inhomogeneous input).
pub fn grade_of(x: &AlgebraElement) -> Result<i64> {
    for n in -64..=64 {
        if grade_component(x, n) == *x {
            return Ok(n);
        }
    }
    Err(Error::Other("inhomogeneous element".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclic::{eta, Chain};
    use num_bigint::BigInt;
    use num_traits::One;

    fn q_half() -> BigRational {
        BigRational::new(BigInt::one(), BigInt::from(2))
    }

    #[test]
    fn spectrum_small() {
        // dirac_spectrum(1/2) = [(1, 2), (-1, 2)]
        let s = dirac_spectrum(Half::HALF);
        assert_eq!(s.len(), 2);
        assert!(s[0].0.is_one());
        assert_eq!(s[0].1, 2);
        assert_eq!(s[1].0, Scalar::from_int(-1));
        // includes (+-[2]_q, 4) at l = 3/2
        let s = dirac_spectrum(Half::from_twice(3));
        assert_eq!(s.len(), 4);
        assert_eq!(s[2].0, qint(2));
        assert_eq!(s[2].1, 4);
        // numeric: [2]_{1/2} = 2.5
        assert!((s[2].0.eval_f64(&q_half()).unwrap() - 2.5).abs() < 1e-14);
    }

    #[test]
    fn spectrum_matches_eigenvectors() {
        // D(v^l_{-1/2,k}, -+v^l_{1/2,k}) = +-[l+1/2](v^l_{-1/2,k}, -+v^l_{1/2,k})
        for l2 in [1i64, 3] {
            let l = Half::from_twice(l2);
            let ev = qint((l + Half::HALF).as_integer().unwrap());
            for k in Half::range_incl(-l, l) {
                let vm = (*v_basis(l, -Half::HALF, k).unwrap().expansion).clone();
                let vp = (*v_basis(l, Half::HALF, k).unwrap().expansion).clone();
                for sign in [1i64, -1] {
                    let w = WElem {
                        minus: vm.clone(),
                        plus: vp.scale(&Scalar::from_int(sign)),
                    };
                    let dw = dirac_apply(&w);
                    let lambda = if sign > 0 { ev.neg() } else { ev.clone() };
                    let expect = WElem {
                        minus: w.minus.scale(&lambda),
                        plus: w.plus.scale(&lambda),
                    };
                    assert_eq!(dw, expect, "l={l} k={k} sign={sign}");
                }
            }
        }
    }

    #[test]
    fn partial_matrix_zero_pattern() {
        // F-matrix for N=1 at l=1/2 is a zero column
        let (_, f) = partial_matrices(1, Half::from_twice(5));
        let idx = f.from.index_of(Half::HALF, -Half::HALF).unwrap();
        assert!(f.column_is_zero(idx));
        // E-matrix for N=0 at l=0 is zero
        let (e, _) = partial_matrices(0, Half::int(2));
        assert!(e.column_is_zero(0));
        // alpha-squared consistency
        let (_, f) = partial_matrices(2, Half::int(3));
        let j = Half::ONE;
        for (c, &(l, k)) in f.from.labels.iter().enumerate() {
            if let Some(r) = f.to.index_of(l, k) {
                let s = f.get(r, c);
                let sq = s.mul(s);
                let expect = qint((l - j).as_integer().unwrap())
                    .mul(&qint((l + j + Half::ONE).as_integer().unwrap()));
                assert_eq!(sq, expect);
            }
        }
    }

    #[test]
    fn kernel_lemma_small() {
        for n in -3..=3i64 {
            let r = kernel_lemma_check(n, Half::from_twice(n.abs()) + Half::int(3));
            assert!(r.pass, "kernel lemma N={n}");
            let (ke, kf) = match n.signum() {
                1 => (0, (n + 1) as usize),
                -1 => ((-n + 1) as usize, 0),
                _ => (1, 1),
            };
            assert_eq!(r.ker_e_dim, ke);
            assert_eq!(r.ker_f_dim, kf);
        }
    }

    #[test]
    fn pi_d_orientation() {
        let (upper, lower) = pi_d(&eta().unwrap()).unwrap();
        // gamma_q = diag(q^{-1}, -q)
        assert_eq!(upper, PodlesElement::from_scalar(Scalar::q_pow(Half::int(-1))));
        assert_eq!(lower, PodlesElement::from_scalar(Scalar::q_pow(Half::int(1)).neg()));
        // pi_D of 1 (x) 1 (x) 1 vanishes
        let one = PodlesElement::one();
        let c = Chain::tensor(&[&one, &one, &one]);
        let (u, l) = pi_d(&c).unwrap();
        assert!(u.is_zero() && l.is_zero());
    }

    #[test]
    fn adjointness_numeric() {
        // matrix of dE on M_{N+2} equals transpose of dF on M_N
        let q0 = q_half();
        let (_, f) = partial_matrices(1, Half::from_twice(7));
        let (e, _) = partial_matrices(3, Half::from_twice(7));
        let fm = f.to_numeric(&q0).unwrap();
        let em = e.to_numeric(&q0).unwrap();
        let d = (fm.transpose() - em).abs().max();
        assert!(d < 1e-10, "adjointness defect {d}");
    }

    #[test]
    fn index_n1() {
        let r = index_and_qindex(1, Half::from_twice(9), &q_half(), 1e-8).unwrap();
        assert_eq!(r.ind, 1);
        assert!((r.qind - 1.0).abs() < 1e-6, "qind {}", r.qind);
        assert_eq!(r.ker_dim, 1);
        assert_eq!(r.coker_dim, 0);
    }

    #[test]
    fn index_n0() {
        let r = index_and_qindex(0, Half::int(4), &q_half(), 1e-8).unwrap();
        assert_eq!(r.ind, 0);
        assert!(r.qind.abs() < 1e-6);
        assert_eq!(r.ker_dim, 0);
        assert_eq!(r.coker_dim, 0);
    }

    #[test]
    fn poincare_values() {
        assert_eq!(poincare_pairing(1, 1, 1, 0), 1);
        assert_eq!(poincare_pairing(1, 0, 1, 0), 0);
        // antisymmetry and bilinearity on a small grid
        for (k, l, m, n) in [(1, 1, 1, 0), (2, 1, 1, 1), (0, 3, -1, 2), (2, -2, 1, 4)] {
            assert_eq!(
                poincare_pairing(k, l, m, n),
                -poincare_pairing(m, n, k, l)
            );
            assert_eq!(poincare_pairing(k, l, k, l), 0);
        }
    }

    #[test]
    fn real_structure_small() {
        let r = real_structure_check(Half::from_twice(5), &q_half(), 1e-9).unwrap();
        assert!(r.all_pass(), "{:?}", r.checks);
    }
}
