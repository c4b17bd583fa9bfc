//! Text form `3*x0^2*x1 + -1/2*x4 + 7` and JSON form
//! `[["3",[2,1,0,0,0,0]], ...]`.

use num_bigint::BigInt;
use serde_json::Value;

use super::{Monomial, Polynomial, MAX_VARS};
use crate::error::{Error, Result};
use crate::field::Field;

pub(super) fn format_polynomial<F: Field>(p: &Polynomial<F>) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let field = p.field();
    p.terms()
        .map(|(m, c)| {
            let coeff = field.format(c);
            if m.degree() == 0 {
                coeff
            } else if field.is_one(c) {
                m.to_string_with(p.nvars())
            } else {
                format!("{coeff}*{}", m.to_string_with(p.nvars()))
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn error(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at byte {}", self.pos))
    }
}

/// Parses the text form. Signs may appear as `a - b` or `a + -b`; numeric
/// factors may be integers or fractions `p/q`.
pub fn parse_polynomial<F: Field>(field: &F, nvars: usize, s: &str) -> Result<Polynomial<F>> {
    if nvars > MAX_VARS {
        return Err(Error::Parse(format!("at most {MAX_VARS} variables")));
    }
    let mut cur = Cursor {
        src: s.as_bytes(),
        pos: 0,
    };
    let mut out = Polynomial::zero(field, nvars);
    if cur.peek().is_none() {
        return Err(cur.error("empty input"));
    }
    let mut first = true;
    loop {
        let mut negative = false;
        match cur.peek() {
            None if !first => break,
            Some(b'+') if !first => cur.pos += 1,
            Some(b'-') => {
                cur.pos += 1;
                negative = true;
            }
            _ if first => {}
            _ => return Err(cur.error("expected '+' or '-'")),
        }
        // "a + -b"
        if cur.peek() == Some(b'-') {
            cur.pos += 1;
            negative = !negative;
        }
        let (mono, mut coeff) = parse_term(field, nvars, &mut cur)?;
        if negative {
            coeff = field.neg(&coeff);
        }
        out.add_term(mono, coeff);
        first = false;
        if cur.peek().is_none() {
            break;
        }
    }
    Ok(out)
}

fn parse_term<F: Field>(field: &F, nvars: usize, cur: &mut Cursor<'_>) -> Result<(Monomial, F::Elem)> {
    let mut mono = Monomial::one();
    let mut coeff = field.one();
    loop {
        match cur.peek() {
            Some(b'x') => {
                cur.pos += 1;
                let idx: usize = cur
                    .digits()
                    .ok_or_else(|| cur.error("expected variable index"))?
                    .parse()
                    .map_err(|_| cur.error("bad variable index"))?;
                if idx >= nvars {
                    return Err(cur.error(&format!("variable x{idx} outside {nvars} variables")));
                }
                let mut e: u16 = 1;
                if cur.peek() == Some(b'^') {
                    cur.pos += 1;
                    e = cur
                        .digits()
                        .ok_or_else(|| cur.error("expected exponent"))?
                        .parse()
                        .map_err(|_| cur.error("bad exponent"))?;
                }
                mono.set_exp(idx, mono.exp(idx) + e);
            }
            Some(c) if c.is_ascii_digit() => {
                let num: BigInt = cur.digits().unwrap().parse().expect("digits");
                let mut den = BigInt::from(1);
                if cur.peek() == Some(b'/') {
                    cur.pos += 1;
                    den = cur
                        .digits()
                        .ok_or_else(|| cur.error("expected denominator"))?
                        .parse()
                        .expect("digits");
                }
                coeff = field.mul(&coeff, &field.from_ratio(&num, &den)?);
            }
            _ => return Err(cur.error("expected a factor")),
        }
        if cur.peek() == Some(b'*') {
            cur.pos += 1;
        } else {
            break;
        }
    }
    Ok((mono, coeff))
}

pub fn polynomial_to_json<F: Field>(p: &Polynomial<F>) -> Value {
    Value::Array(
        p.terms()
            .map(|(m, c)| {
                let exps: Vec<Value> = (0..p.nvars()).map(|i| Value::from(m.exp(i))).collect();
                Value::Array(vec![Value::String(p.field().format(c)), Value::Array(exps)])
            })
            .collect(),
    )
}

pub fn polynomial_from_json<F: Field>(field: &F, v: &Value) -> Result<Polynomial<F>> {
    let bad = |msg: &str| Error::Parse(format!("polynomial JSON: {msg}"));
    let terms = v.as_array().ok_or_else(|| bad("expected a list of terms"))?;
    let mut nvars = None;
    let mut parsed = Vec::with_capacity(terms.len());
    for t in terms {
        let pair = t.as_array().filter(|a| a.len() == 2).ok_or_else(|| bad("term must be [coeff, exps]"))?;
        let coeff_text = pair[0].as_str().ok_or_else(|| bad("coefficient must be a string"))?;
        let exps: Vec<u16> = pair[1]
            .as_array()
            .ok_or_else(|| bad("exponents must be a list"))?
            .iter()
            .map(|e| e.as_u64().and_then(|e| u16::try_from(e).ok()).ok_or_else(|| bad("bad exponent")))
            .collect::<Result<_>>()?;
        if *nvars.get_or_insert(exps.len()) != exps.len() || exps.len() > MAX_VARS {
            return Err(bad("inconsistent arity"));
        }
        let coeff = parse_polynomial(field, 0, coeff_text)?;
        if !coeff.is_constant() {
            return Err(bad("coefficient is not a number"));
        }
        let c = coeff.coefficient(&Monomial::one());
        parsed.push((Monomial::from_exponents(&exps), c));
    }
    Ok(Polynomial::from_terms(field, nvars.unwrap_or(6), parsed))
}
