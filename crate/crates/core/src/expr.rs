//! Expression grammar for scalars and algebra elements.
//!
//! Tokens: `A`, `B`, `Bs` (Podles generators), `a`, `c`, `as`, `cs`
//! (quantum SU(2) generators), `q`, integer literals, the q-integer
//! literal `[n]`, `sqrt(...)`, operators `+ - * / ^` and parentheses.
//! Operator precedence is `^` above `* /` above `+ -`; `/` divides by a
//! scalar-valued factor. Every canonical string printed by the crate
//! re-parses to an equal element.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::Error;
use crate::half::Half;
use crate::podles::{embed, PodlesElement};
use crate::scalar::{qint, RatFn, Scalar};
use crate::suq2::{AlgebraElement, Letter};
use crate::Result;

/// A parsed value: scalar, Podles-sphere element, or quantum-SU(2)
/// element. Mixed arithmetic promotes along
/// `Scalar -> Podles -> Suq2` (the last step through the embedding).
#[derive(Debug, Clone)]
pub enum Element {
    Scalar(Scalar),
    Podles(PodlesElement),
    Suq2(AlgebraElement),
}

impl Element {
    pub fn to_suq2(&self) -> AlgebraElement {
        match self {
            Element::Scalar(s) => AlgebraElement::from_scalar(s.clone()),
            Element::Podles(p) => embed(p),
            Element::Suq2(x) => x.clone(),
        }
    }

    pub fn to_podles(&self) -> Result<PodlesElement> {
        match self {
            Element::Scalar(s) => Ok(PodlesElement::from_scalar(s.clone())),
            Element::Podles(p) => Ok(p.clone()),
            Element::Suq2(x) => crate::podles::unembed(x),
        }
    }

    pub fn as_scalar(&self) -> Option<Scalar> {
        match self {
            Element::Scalar(s) => Some(s.clone()),
            Element::Podles(p) => {
                if p.is_zero() {
                    return Some(Scalar::zero());
                }
                let mut it = p.terms();
                match (it.next(), it.next()) {
                    (Some((m, c)), None) if m.is_one() => Some(c.clone()),
                    _ => None,
                }
            }
            Element::Suq2(x) => {
                if x.is_zero() {
                    return Some(Scalar::zero());
                }
                let mut it = x.terms();
                match (it.next(), it.next()) {
                    (Some((m, c)), None) if m.is_one() => Some(c.clone()),
                    _ => None,
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Element::Scalar(s) => s.is_zero(),
            Element::Podles(p) => p.is_zero(),
            Element::Suq2(x) => x.is_zero(),
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Element::Scalar(_) => 0,
            Element::Podles(_) => 1,
            Element::Suq2(_) => 2,
        }
    }

    fn promote_pair(a: &Element, b: &Element) -> (Element, Element) {
        let r = a.rank().max(b.rank());
        let lift = |x: &Element| match r {
            0 => x.clone(),
            1 => Element::Podles(x.to_podles().expect("rank-1 promotion")),
            _ => Element::Suq2(x.to_suq2()),
        };
        (lift(a), lift(b))
    }

    pub fn add(&self, rhs: &Element) -> Element {
        match Element::promote_pair(self, rhs) {
            (Element::Scalar(a), Element::Scalar(b)) => Element::Scalar(a.add(&b)),
            (Element::Podles(a), Element::Podles(b)) => Element::Podles(a.add(&b)),
            (Element::Suq2(a), Element::Suq2(b)) => Element::Suq2(a.add(&b)),
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, rhs: &Element) -> Element {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Element {
        match self {
            Element::Scalar(s) => Element::Scalar(s.neg()),
            Element::Podles(p) => Element::Podles(p.neg()),
            Element::Suq2(x) => Element::Suq2(x.neg()),
        }
    }

    pub fn mul(&self, rhs: &Element) -> Element {
        match Element::promote_pair(self, rhs) {
            (Element::Scalar(a), Element::Scalar(b)) => Element::Scalar(a.mul(&b)),
            (Element::Podles(a), Element::Podles(b)) => Element::Podles(a.mul(&b)),
            (Element::Suq2(a), Element::Suq2(b)) => Element::Suq2(a.mul(&b)),
            _ => unreachable!(),
        }
    }

    pub fn div(&self, rhs: &Element) -> Result<Element> {
        let d = rhs.as_scalar().ok_or_else(|| {
            Error::NonInvertible("division by a non-scalar element".into())
        })?;
        let inv = d.inv()?;
        Ok(self.mul(&Element::Scalar(inv)))
    }

    pub fn pow(&self, e: i64) -> Result<Element> {
        if e < 0 {
            let s = self.as_scalar().ok_or_else(|| {
                Error::NonInvertible("negative power of a non-scalar".into())
            })?;
            let inv = s.inv()?;
            return Element::Scalar(inv).pow(-e);
        }
        let mut acc = Element::Scalar(Scalar::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        Ok(acc)
    }

    pub fn to_string_canonical(&self) -> String {
        match self {
            Element::Scalar(s) => s.to_string(),
            Element::Podles(p) => p.to_string(),
            Element::Suq2(x) => x.to_string(),
        }
    }
}

// ---- lexer ----

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    QIntLit(i64),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let b = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let ch = b[i];
        match ch {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => {
                toks.push((i, Tok::Plus));
                i += 1;
            }
            b'-' => {
                toks.push((i, Tok::Minus));
                i += 1;
            }
            b'*' => {
                toks.push((i, Tok::Star));
                i += 1;
            }
            b'/' => {
                toks.push((i, Tok::Slash));
                i += 1;
            }
            b'^' => {
                toks.push((i, Tok::Caret));
                i += 1;
            }
            b'(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            b')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            b'[' => {
                let start = i;
                i += 1;
                let mut neg = false;
                if i < b.len() && b[i] == b'-' {
                    neg = true;
                    i += 1;
                }
                let ds = i;
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                if ds == i || i >= b.len() || b[i] != b']' {
                    return Err(Error::Parse {
                        offset: start,
                        message: "malformed q-integer literal, expected [n]".into(),
                    });
                }
                let n: i64 = text[ds..i].parse().map_err(|_| Error::Parse {
                    offset: ds,
                    message: "q-integer literal out of range".into(),
                })?;
                toks.push((start, Tok::QIntLit(if neg { -n } else { n })));
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("digits");
                toks.push((start, Tok::Int(n)));
            }
            b'a'..=b'z' | b'A'..=b'Z' => {
                let start = i;
                while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_') {
                    i += 1;
                }
                toks.push((start, Tok::Ident(text[start..i].to_string())));
            }
            _ => {
                return Err(Error::Parse {
                    offset: i,
                    message: format!("unexpected character {:?}", ch as char),
                })
            }
        }
    }
    Ok(toks)
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(o, _)| *o)
            .unwrap_or(self.len)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        let off = self.offset();
        match self.next() {
            Some(got) if got == t => Ok(()),
            got => Err(Error::Parse {
                offset: off,
                message: format!("expected {t:?}, found {got:?}"),
            }),
        }
    }
}

// ---- parser ----

/// Parses an expression into an [`Element`].
pub fn parse(text: &str) -> Result<Element> {
    let toks = lex(text)?;
    let mut lx = Lexer {
        toks,
        pos: 0,
        len: text.len(),
    };
    let e = parse_expr(&mut lx)?;
    if lx.peek().is_some() {
        return Err(Error::Parse {
            offset: lx.offset(),
            message: "trailing input".into(),
        });
    }
    Ok(e)
}

/// Parses and coerces to a Podles element.
pub fn parse_podles(text: &str) -> Result<PodlesElement> {
    parse(text)?.to_podles()
}

/// Parses and coerces to an `O(SU_q(2))` element.
pub fn parse_suq2(text: &str) -> Result<AlgebraElement> {
    Ok(parse(text)?.to_suq2())
}

/// Parses and coerces to a scalar.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    parse(text)?.as_scalar().ok_or_else(|| Error::Parse {
        offset: 0,
        message: "expression is not scalar-valued".into(),
    })
}

fn parse_expr(lx: &mut Lexer) -> Result<Element> {
    let mut acc = parse_term(lx)?;
    loop {
        match lx.peek() {
            Some(Tok::Plus) => {
                lx.next();
                let rhs = parse_term(lx)?;
                acc = acc.add(&rhs);
            }
            Some(Tok::Minus) => {
                lx.next();
                let rhs = parse_term(lx)?;
                acc = acc.sub(&rhs);
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_term(lx: &mut Lexer) -> Result<Element> {
    let mut acc = parse_factor(lx)?;
    loop {
        match lx.peek() {
            Some(Tok::Star) => {
                lx.next();
                let rhs = parse_factor(lx)?;
                acc = acc.mul(&rhs);
            }
            Some(Tok::Slash) => {
                lx.next();
                let rhs = parse_factor(lx)?;
                acc = acc.div(&rhs)?;
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_factor(lx: &mut Lexer) -> Result<Element> {
    if let Some(Tok::Minus) = lx.peek() {
        lx.next();
        let e = parse_factor(lx)?;
        return Ok(e.neg());
    }
    parse_power(lx)
}

fn parse_power(lx: &mut Lexer) -> Result<Element> {
    let base = parse_atom(lx)?;
    if let Some(Tok::Caret) = lx.peek() {
        lx.next();
        let (num, den) = parse_exponent(lx)?;
        if den == 1 {
            return base.pow(num);
        }
        // fractional exponent: only q^(n/2)
        if den == 2 {
            if let Some(s) = base.as_scalar() {
                if s == Scalar::q_pow(Half::ONE) {
                    return Ok(Element::Scalar(Scalar::q_pow(Half::from_twice(num))));
                }
            }
        }
        return Err(Error::Parse {
            offset: lx.offset(),
            message: "fractional exponents are supported only for q^(n/2)".into(),
        });
    }
    Ok(base)
}

/// Exponent forms: `2`, `-2`, `(3/2)`, `(-1/2)`.
fn parse_exponent(lx: &mut Lexer) -> Result<(i64, i64)> {
    let off = lx.offset();
    let small = |n: &BigInt| -> Result<i64> {
        i64::try_from(n).map_err(|_| Error::Parse {
            offset: off,
            message: "exponent out of range".into(),
        })
    };
    match lx.next() {
        Some(Tok::Int(n)) => Ok((small(&n)?, 1)),
        Some(Tok::Minus) => match lx.next() {
            Some(Tok::Int(n)) => Ok((-small(&n)?, 1)),
            _ => Err(Error::Parse {
                offset: off,
                message: "expected integer exponent".into(),
            }),
        },
        Some(Tok::LParen) => {
            let mut sign = 1i64;
            if let Some(Tok::Minus) = lx.peek() {
                lx.next();
                sign = -1;
            }
            let num = match lx.next() {
                Some(Tok::Int(n)) => small(&n)?,
                _ => {
                    return Err(Error::Parse {
                        offset: off,
                        message: "expected rational exponent".into(),
                    })
                }
            };
            let den = if let Some(Tok::Slash) = lx.peek() {
                lx.next();
                match lx.next() {
                    Some(Tok::Int(n)) => small(&n)?,
                    _ => {
                        return Err(Error::Parse {
                            offset: off,
                            message: "expected exponent denominator".into(),
                        })
                    }
                }
            } else {
                1
            };
            lx.expect(Tok::RParen)?;
            Ok((sign * num, den))
        }
        got => Err(Error::Parse {
            offset: off,
            message: format!("expected exponent, found {got:?}"),
        }),
    }
}

fn parse_atom(lx: &mut Lexer) -> Result<Element> {
    let off = lx.offset();
    match lx.next() {
        Some(Tok::Int(n)) => Ok(Element::Scalar(Scalar::from_ratfn(RatFn::from_rational(
            BigRational::from_integer(n),
        )))),
        Some(Tok::QIntLit(n)) => Ok(Element::Scalar(qint(n))),
        Some(Tok::LParen) => {
            let e = parse_expr(lx)?;
            lx.expect(Tok::RParen)?;
            Ok(e)
        }
        Some(Tok::Ident(id)) => match id.as_str() {
            "q" => Ok(Element::Scalar(Scalar::q_pow(Half::ONE))),
            "A" => Ok(Element::Podles(PodlesElement::gen_a())),
            "B" => Ok(Element::Podles(PodlesElement::gen_b())),
            "Bs" => Ok(Element::Podles(PodlesElement::gen_bstar())),
            "a" => Ok(Element::Suq2(AlgebraElement::gen(Letter::A))),
            "c" => Ok(Element::Suq2(AlgebraElement::gen(Letter::C))),
            "as" => Ok(Element::Suq2(AlgebraElement::gen(Letter::AStar))),
            "cs" => Ok(Element::Suq2(AlgebraElement::gen(Letter::CStar))),
            "sqrt" => {
                lx.expect(Tok::LParen)?;
                let inner = parse_expr(lx)?;
                lx.expect(Tok::RParen)?;
                let s = inner.as_scalar().ok_or(Error::Parse {
                    offset: off,
                    message: "sqrt of a non-scalar".into(),
                })?;
                Ok(Element::Scalar(s.sqrt_rational()?))
            }
            other => Err(Error::Parse {
                offset: off,
                message: format!("unknown identifier `{other}`"),
            }),
        },
        got => Err(Error::Parse {
            offset: off,
            message: format!("expected an atom, found {got:?}"),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        // Bs*B = A - A^2
        let e = parse_podles("Bs*B").unwrap();
        let a = PodlesElement::gen_a();
        assert_eq!(e, a.sub(&a.mul(&a)));
        let one = parse("1").unwrap();
        assert!(one.as_scalar().unwrap().is_one());
        // [2]*A = (q + q^-1) A
        let e = parse_podles("[2]*A").unwrap();
        assert_eq!(e, PodlesElement::gen_a().scale(&qint(2)));
    }

    #[test]
    fn parse_errors_have_offsets() {
        match parse("A + $") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse("Q").is_err());
        assert!(parse("A +").is_err());
        assert!(parse("[x]").is_err());
    }

    #[test]
    fn precedence() {
        // 1/2*A = (1/2)A, not 1/(2A)
        let e = parse_podles("1/2*A").unwrap();
        assert_eq!(e, PodlesElement::gen_a().scale(&Scalar::from_fraction(1, 2)));
        // ^ binds tighter than *
        let e = parse_podles("q^2*A").unwrap();
        assert_eq!(
            e,
            PodlesElement::gen_a().scale(&Scalar::q_pow(Half::int(2)))
        );
        // unary minus
        let e = parse_podles("-A*B").unwrap();
        assert_eq!(
            e,
            PodlesElement::gen_a().mul(&PodlesElement::gen_b()).neg()
        );
    }

    #[test]
    fn q_half_powers() {
        let s = parse_scalar("q^(1/2)").unwrap();
        assert_eq!(s, Scalar::q_pow(Half::HALF));
        let s = parse_scalar("q^(-3/2)").unwrap();
        assert_eq!(s, Scalar::q_pow(Half::from_twice(-3)));
        let s = parse_scalar("q^-1").unwrap();
        assert_eq!(s, Scalar::q_pow(Half::int(-1)));
    }

    #[test]
    fn roundtrip_canonical_strings() {
        let samples = [
            "A - q^2*A^2",
            "Bs*B + [3]*A",
            "a*c - q*cs",
            "(q + q^-1)*A*B",
            "sqrt(q^2 + 1)*c",
            "1",
            "0",
        ];
        for s in samples {
            let e = parse(s).unwrap();
            let printed = e.to_string_canonical();
            let again = parse(&printed).unwrap();
            assert_eq!(
                again.sub(&e).is_zero(),
                true,
                "roundtrip failed: {s} -> {printed}"
            );
        }
    }

    #[test]
    fn mixed_promotion() {
        // A * c lives in O(SU_q(2))
        let e = parse("A*c").unwrap();
        match e {
            Element::Suq2(_) => {}
            other => panic!("expected Suq2, got {other:?}"),
        }
        // scalar division
        let e = parse_podles("A/[2]").unwrap();
        assert_eq!(
            e,
            PodlesElement::gen_a().scale(&qint(2).inv().unwrap())
        );
    }
}
