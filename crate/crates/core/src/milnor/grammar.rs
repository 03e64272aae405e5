//! Text forms of elements.
//!
//! Steenrod algebra elements are `+`-separated terms `Q(i,j,…)P(r1,r2,…)`,
//! either factor omissible, with `1` for the unit and `0` for zero. Dual
//! elements are terms such as `t0 t2 x1^2 x3`. Whitespace is ignored.
//! Repeated terms cancel in pairs.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

use super::{BiDegree, DualElement, DualMonomial, MilnorAlgebra, SteenrodElement};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Letter(char),
    Num(u32),
    Open,
    Close,
    Comma,
    Caret,
    Plus,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    pos: usize,
    text: String,
}

fn parse_error(pos: usize, token: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        position: pos,
        token: token.to_string(),
        message: message.into(),
    }
}

fn lex(input: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = input.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '0'..='9' => {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let n = text
                    .parse()
                    .map_err(|_| parse_error(start, &text, "number out of range"))?;
                out.push(Token {
                    tok: Tok::Num(n),
                    pos: start,
                    text,
                });
                continue;
            }
            'Q' | 'P' | 't' | 'x' => Tok::Letter(c),
            '(' => Tok::Open,
            ')' => Tok::Close,
            ',' => Tok::Comma,
            '^' => Tok::Caret,
            '+' => Tok::Plus,
            _ => return Err(parse_error(start, &c.to_string(), "unexpected character")),
        };
        i += 1;
        out.push(Token {
            tok,
            pos: start,
            text: c.to_string(),
        });
    }
    Ok(out)
}

struct Cursor {
    toks: Vec<Token>,
    at: usize,
    end: usize,
}

impl Cursor {
    fn new(input: &str) -> Result<Self> {
        Ok(Cursor {
            toks: lex(input)?,
            at: 0,
            end: input.chars().count(),
        })
    }

    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.at)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.toks.get(self.at).cloned();
        self.at += 1;
        t
    }

    fn fail_here(&self, message: &str) -> Error {
        match self.peek() {
            Some(t) => parse_error(t.pos, &t.text, message),
            None => parse_error(self.end, "<end>", message),
        }
    }

    fn expect(&mut self, tok: Tok, message: &str) -> Result<Token> {
        match self.peek() {
            Some(t) if t.tok == tok => Ok(self.next().unwrap()),
            _ => Err(self.fail_here(message)),
        }
    }

    fn number(&mut self) -> Result<u32> {
        match self.peek().map(|t| &t.tok) {
            Some(Tok::Num(n)) => {
                let n = *n;
                self.next();
                Ok(n)
            }
            _ => Err(self.fail_here("expected a number")),
        }
    }

    fn number_list(&mut self) -> Result<Vec<u32>> {
        self.expect(Tok::Open, "expected `(`")?;
        let mut out = Vec::new();
        if matches!(self.peek().map(|t| &t.tok), Some(Tok::Close)) {
            self.next();
            return Ok(out);
        }
        loop {
            out.push(self.number()?);
            match self.peek().map(|t| &t.tok) {
                Some(Tok::Comma) => {
                    self.next();
                }
                Some(Tok::Close) => {
                    self.next();
                    return Ok(out);
                }
                _ => return Err(self.fail_here("expected `,` or `)`")),
            }
        }
    }

    fn at_term_end(&self) -> bool {
        matches!(self.peek().map(|t| &t.tok), None | Some(Tok::Plus))
    }
}

fn toggle(set: &mut BTreeSet<DualMonomial>, m: DualMonomial) {
    if !set.remove(&m) {
        set.insert(m);
    }
}

/// Parses `+`-separated terms with `term` until the input is exhausted.
/// A lone `0` stands for the empty sum.
fn parse_sum(
    input: &str,
    mut term: impl FnMut(&mut Cursor) -> Result<DualMonomial>,
) -> Result<Vec<DualMonomial>> {
    let mut c = Cursor::new(input)?;
    if c.peek().is_none() {
        return Err(parse_error(0, "<end>", "empty expression"));
    }
    let mut set = BTreeSet::new();
    loop {
        let zero = matches!(c.peek().map(|t| &t.tok), Some(Tok::Num(0)));
        if zero {
            c.next();
        } else {
            let m = term(&mut c)?;
            toggle(&mut set, m);
        }
        if !c.at_term_end() {
            return Err(c.fail_here("expected `+` or end of input"));
        }
        if c.next().is_none() {
            break;
        }
    }
    Ok(set.into_iter().collect())
}

fn unit_term(c: &mut Cursor) -> bool {
    if matches!(c.peek().map(|t| &t.tok), Some(Tok::Num(1))) {
        c.next();
        true
    } else {
        false
    }
}

fn steenrod_term(c: &mut Cursor) -> Result<DualMonomial> {
    if unit_term(c) {
        return Ok(DualMonomial::one());
    }
    let first = c.peek().cloned();
    let mut tau: Option<Vec<u32>> = None;
    let mut xi: Option<Vec<u32>> = None;
    while !c.at_term_end() {
        let t = c.next().unwrap();
        match t.tok {
            Tok::Letter('Q') if tau.is_none() && xi.is_none() => {
                let list = c.number_list()?;
                let mut sorted = list.clone();
                sorted.sort_unstable();
                if sorted.windows(2).any(|w| w[0] == w[1]) {
                    return Err(parse_error(t.pos, &t.text, "repeated index in Q(...)"));
                }
                tau = Some(list);
            }
            Tok::Letter('P') if xi.is_none() => xi = Some(c.number_list()?),
            _ => {
                return Err(parse_error(
                    t.pos,
                    &t.text,
                    "expected `Q(...)`, `P(...)` or `1`",
                ))
            }
        }
    }
    if tau.is_none() && xi.is_none() {
        let (pos, text) = first.map_or((c.end, "<end>".to_string()), |t| (t.pos, t.text));
        return Err(parse_error(pos, &text, "empty term"));
    }
    Ok(DualMonomial::new(&tau.unwrap_or_default(), &xi.unwrap_or_default()).unwrap())
}

fn dual_term(c: &mut Cursor) -> Result<DualMonomial> {
    if unit_term(c) {
        return Ok(DualMonomial::one());
    }
    let mut m = DualMonomial::one();
    let start = c.peek().cloned();
    while !c.at_term_end() {
        let t = c.next().unwrap();
        let factor = match t.tok {
            Tok::Letter('t') => DualMonomial::tau(c.number()?),
            Tok::Letter('x') => {
                let n = c.number()?;
                if n == 0 {
                    return Err(parse_error(t.pos, &t.text, "ξ is indexed from 1"));
                }
                let e = if matches!(c.peek().map(|t| &t.tok), Some(Tok::Caret)) {
                    c.next();
                    c.number()?
                } else {
                    1
                };
                DualMonomial::xi_power(n, e)
            }
            _ => return Err(parse_error(t.pos, &t.text, "expected `tN`, `xN` or `xN^E`")),
        };
        m = m
            .mul(&factor)
            .ok_or_else(|| parse_error(t.pos, &t.text, "repeated τ factor"))?;
    }
    if start.is_none() {
        return Err(parse_error(c.end, "<end>", "empty term"));
    }
    Ok(m)
}

/// Monomials whose duals appear in a Steenrod algebra expression.
pub fn parse_steenrod_terms(input: &str) -> Result<Vec<DualMonomial>> {
    parse_sum(input, steenrod_term)
}

/// Monomials appearing in a dual algebra expression.
pub fn parse_dual_terms(input: &str) -> Result<Vec<DualMonomial>> {
    parse_sum(input, dual_term)
}

fn homogeneous(terms: &[DualMonomial], input: &str) -> Result<BiDegree> {
    let d = terms.first().map_or(BiDegree::ZERO, |m| m.degree());
    if let Some(bad) = terms.iter().find(|m| m.degree() != d) {
        return Err(parse_error(
            0,
            input,
            format!("terms of different bidegrees {d} and {}", bad.degree()),
        ));
    }
    Ok(d)
}

fn coords(
    alg: &MilnorAlgebra,
    terms: &[DualMonomial],
    d: BiDegree,
) -> Result<crate::linalg::BitVector> {
    let mut v = crate::linalg::BitVector::zeros(alg.dim(d)?);
    for m in terms {
        v.flip(alg.index_of(m)?);
    }
    Ok(v)
}

/// Parses a homogeneous Steenrod algebra element. `0` parses to zero in
/// bidegree (0,0).
pub fn parse_steenrod(alg: &MilnorAlgebra, input: &str) -> Result<SteenrodElement> {
    let terms = parse_steenrod_terms(input)?;
    let d = homogeneous(&terms, input)?;
    Ok(SteenrodElement::new(d, coords(alg, &terms, d)?))
}

/// Parses a homogeneous dual element.
pub fn parse_dual(alg: &MilnorAlgebra, input: &str) -> Result<DualElement> {
    let terms = parse_dual_terms(input)?;
    let d = homogeneous(&terms, input)?;
    Ok(DualElement::new(d, coords(alg, &terms, d)?))
}

/// `Q(E)P(R)` form of the dual of a monomial.
pub fn steenrod_term_string(m: &DualMonomial) -> String {
    if m.is_one() {
        return "1".into();
    }
    let join = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
    let mut s = String::new();
    if !m.tau_indices().is_empty() {
        s += &format!("Q({})", join(m.tau_indices()));
    }
    if !m.xi_exponents().is_empty() {
        s += &format!("P({})", join(m.xi_exponents()));
    }
    s
}

fn format_terms(terms: impl Iterator<Item = String>) -> String {
    let parts: Vec<String> = terms.collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// Canonical text of a Steenrod algebra element, terms in basis order.
pub fn format_steenrod(alg: &MilnorAlgebra, a: &SteenrodElement) -> Result<String> {
    let basis = alg.dual_basis(a.degree)?;
    Ok(format_terms(
        a.coeffs
            .iter_ones()
            .map(|i| steenrod_term_string(&basis[i])),
    ))
}

/// Canonical text of a dual element, terms in basis order.
pub fn format_dual(alg: &MilnorAlgebra, x: &DualElement) -> Result<String> {
    let basis = alg.dual_basis(x.degree)?;
    Ok(format_terms(
        x.coeffs.iter_ones().map(|i| basis[i].to_string()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn steenrod_round_trip() {
        let alg = MilnorAlgebra::new(12);
        for s in ["P(1)", "Q(0)", "Q(0,1)P(2)", "1", "P(0,1) + P(3)"] {
            let a = parse_steenrod(&alg, s).unwrap();
            let text = format_steenrod(&alg, &a).unwrap();
            assert_eq!(parse_steenrod(&alg, &text).unwrap(), a, "{s} -> {text}");
        }
        let a = parse_steenrod(&alg, " P ( 1 ) + P(1) ").unwrap();
        assert!(a.is_zero());
        assert_eq!(format_steenrod(&alg, &a).unwrap(), "0");
    }

    #[test]
    fn dual_round_trip() {
        let alg = MilnorAlgebra::new(12);
        let x = parse_dual(&alg, "x2 + x1^3").unwrap();
        assert_eq!(format_dual(&alg, &x).unwrap(), "x2 + x1^3");
        let y = parse_dual(&alg, "t0t1 x1").unwrap();
        assert_eq!(format_dual(&alg, &y).unwrap(), "t0 t1 x1");
    }

    #[test]
    fn errors_cite_token() {
        match parse_steenrod_terms("P(1) + R(2)") {
            Err(Error::Parse {
                position, token, ..
            }) => {
                assert_eq!(position, 7);
                assert_eq!(token, "R");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_steenrod_terms("P(1"),
            Err(Error::Parse { token, .. }) if token == "<end>"
        ));
        assert!(matches!(
            parse_dual_terms("t0 t0"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_steenrod_terms("Q(1,1)"),
            Err(Error::Parse { .. })
        ));
        let alg = MilnorAlgebra::new(12);
        assert!(matches!(
            parse_steenrod(&alg, "P(1) + Q(0)"),
            Err(Error::Parse { .. })
        ));
    }
}
