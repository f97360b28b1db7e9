//! Polynomial expression parser: named variables, rational coefficients,
//! + − * ^ and parentheses. Implicit multiplication is a syntax error.

use polelog_core::poly::Poly;
use polelog_core::scalar::ExactScalar;
use polelog_core::Scalar;

#[derive(Debug)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "syntax error at byte {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(ExactScalar),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

struct Lexer {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

fn lex(text: &str) -> Result<Lexer, ParseError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                toks.push((i, Tok::Plus));
                i += 1;
            }
            '-' | '−' => {
                toks.push((i, Tok::Minus));
                i += 1;
            }
            '*' => {
                toks.push((i, Tok::Star));
                i += 1;
            }
            '^' => {
                toks.push((i, Tok::Caret));
                i += 1;
            }
            '(' => {
                toks.push((i, Tok::LParen));
                i += 1;
            }
            ')' => {
                toks.push((i, Tok::RParen));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                // rational literal p/q
                let mut text_num = text[start..i].to_string();
                if i < bytes.len() && bytes[i] == b'/' {
                    let mut j = i + 1;
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    if j == i + 1 {
                        return Err(ParseError {
                            position: i,
                            message: "expected digits after '/'".into(),
                        });
                    }
                    text_num.push('/');
                    text_num.push_str(&text[i + 1..j]);
                    i = j;
                }
                let value = text_num.parse::<ExactScalar>().map_err(|m| ParseError {
                    position: start,
                    message: m,
                })?;
                toks.push((start, Tok::Num(value)));
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i < bytes.len() {
                    let ch = bytes[i] as char;
                    if ch.is_alphanumeric() || ch == '_' {
                        i += 1;
                    } else {
                        break;
                    }
                }
                toks.push((start, Tok::Ident(text[start..i].to_string())));
            }
            other => {
                return Err(ParseError {
                    position: i,
                    message: format!("unexpected character {other:?}"),
                })
            }
        }
    }
    Ok(Lexer {
        toks,
        pos: 0,
        end: bytes.len(),
    })
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        let here = self.here();
        match self.next() {
            Some(t) if t == tok => Ok(()),
            other => Err(ParseError {
                position: here,
                message: format!("expected {tok:?}, found {other:?}"),
            }),
        }
    }
}

/// Sparse polynomial under construction: monomial -> coefficient.
#[derive(Clone, Debug)]
struct Expr {
    terms: std::collections::BTreeMap<Vec<u32>, ExactScalar>,
    nvars: usize,
}

impl Expr {
    fn constant(nvars: usize, c: ExactScalar) -> Self {
        let mut terms = std::collections::BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; nvars], c);
        }
        Expr { terms, nvars }
    }

    fn var(nvars: usize, idx: usize) -> Self {
        let mut e = vec![0u32; nvars];
        e[idx] = 1;
        let mut terms = std::collections::BTreeMap::new();
        terms.insert(e, ExactScalar::one());
        Expr { terms, nvars }
    }

    fn add(mut self, other: Expr) -> Expr {
        for (m, c) in other.terms {
            let slot = self
                .terms
                .entry(m)
                .or_insert_with(ExactScalar::zero);
            *slot = slot.add(&c);
        }
        self.terms.retain(|_, c| !c.is_zero());
        self
    }

    fn neg(mut self) -> Expr {
        for c in self.terms.values_mut() {
            *c = c.neg();
        }
        self
    }

    fn mul(&self, other: &Expr) -> Expr {
        let mut terms: std::collections::BTreeMap<Vec<u32>, ExactScalar> =
            std::collections::BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m: Vec<u32> = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                let slot = terms.entry(m).or_insert_with(ExactScalar::zero);
                *slot = slot.add(&c1.mul(c2));
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Expr {
            terms,
            nvars: self.nvars,
        }
    }

    fn pow(&self, mut exp: u32) -> Expr {
        let mut acc = Expr::constant(self.nvars, ExactScalar::one());
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            exp >>= 1;
        }
        acc
    }
}

struct Parser<'a> {
    lexer: Lexer,
    vars: &'a [String],
}

impl<'a> Parser<'a> {
    fn var_index(&self, name: &str, pos: usize) -> Result<usize, ParseError> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| ParseError {
                position: pos,
                message: format!(
                    "unknown variable {name:?} (declared: {})",
                    self.vars.join(", ")
                ),
            })
    }

    // sum := ['-'] product (('+'|'-') product)*
    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut negate = false;
        if self.lexer.peek() == Some(&Tok::Minus) {
            self.lexer.next();
            negate = true;
        }
        let mut acc = self.product()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            match self.lexer.peek() {
                Some(Tok::Plus) => {
                    self.lexer.next();
                    let rhs = self.product()?;
                    acc = acc.add(rhs);
                }
                Some(Tok::Minus) => {
                    self.lexer.next();
                    let rhs = self.product()?;
                    acc = acc.add(rhs.neg());
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    // product := power ('*' power)*
    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.power()?;
        loop {
            match self.lexer.peek() {
                Some(Tok::Star) => {
                    self.lexer.next();
                    let rhs = self.power()?;
                    acc = acc.mul(&rhs);
                }
                // implicit multiplication is disallowed: an atom right after
                // an atom is a syntax error surfaced by the caller
                Some(Tok::Ident(_)) | Some(Tok::Num(_)) | Some(Tok::LParen) => {
                    return Err(ParseError {
                        position: self.lexer.here(),
                        message: "implicit multiplication is not allowed; write '*'".into(),
                    });
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    // power := atom ['^' nat]
    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.lexer.peek() == Some(&Tok::Caret) {
            self.lexer.next();
            let here = self.lexer.here();
            match self.lexer.next() {
                Some(Tok::Num(n)) if n.is_integer() && !n.is_negative() => {
                    let exp = n.to_i64().and_then(|v| u32::try_from(v).ok()).ok_or(
                        ParseError {
                            position: here,
                            message: "exponent too large".into(),
                        },
                    )?;
                    Ok(base.pow(exp))
                }
                other => Err(ParseError {
                    position: here,
                    message: format!("expected a nonnegative integer exponent, found {other:?}"),
                }),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let here = self.lexer.here();
        match self.lexer.next() {
            Some(Tok::Num(c)) => Ok(Expr::constant(self.vars.len(), c)),
            Some(Tok::Ident(name)) => {
                let idx = self.var_index(&name, here)?;
                Ok(Expr::var(self.vars.len(), idx))
            }
            Some(Tok::LParen) => {
                let inner = self.sum()?;
                self.lexer.expect(Tok::RParen)?;
                Ok(inner)
            }
            other => Err(ParseError {
                position: here,
                message: format!("expected a number, variable or '(', found {other:?}"),
            }),
        }
    }
}

/// Parses an expression into an exact sparse polynomial over `vars` with the
/// given integer weights; validates weighted homogeneity.
pub fn parse_poly(
    text: &str,
    vars: &[String],
    weights: &[u32],
) -> Result<Poly, Box<dyn std::error::Error>> {
    assert_eq!(vars.len(), weights.len());
    let lexer = lex(text)?;
    let mut parser = Parser { lexer, vars };
    let expr = parser.sum()?;
    if parser.lexer.pos < parser.lexer.toks.len() {
        return Err(Box::new(ParseError {
            position: parser.lexer.here(),
            message: "trailing input".into(),
        }));
    }
    let poly = Poly::new(
        weights.to_vec(),
        vars.to_vec(),
        expr.terms.into_iter().map(|(m, c)| (c, m)).collect(),
    )?;
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn remark_24_polynomial() {
        let v = vars(&["x", "y", "z", "w"]);
        let p = parse_poly("x^4 + y^3*z + z^3*w + x*y*z*w", &v, &[1, 1, 1, 1]).unwrap();
        assert_eq!(p.e(), 4);
        assert_eq!(p.terms.len(), 4);
    }

    #[test]
    fn weighted_acceptance() {
        let v = vars(&["x", "y"]);
        let p = parse_poly("x^2 + y^3", &v, &[3, 2]).unwrap();
        assert_eq!(p.e(), 6);
        let err = parse_poly("x^2 + y^3", &v, &[1, 1]).unwrap_err();
        assert!(err.to_string().contains("not weighted-homogeneous"));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let v = vars(&["x", "y"]);
        let err = parse_poly("x^2 + @", &v, &[1, 1]).unwrap_err();
        assert!(err.to_string().contains("byte 6"));
        let err = parse_poly("2x", &v, &[1, 1]).unwrap_err();
        assert!(err.to_string().contains("implicit multiplication"));
    }

    #[test]
    fn rational_coefficients_and_parens() {
        let v = vars(&["x", "y"]);
        let p = parse_poly("1/2*(x + y)^2 - x*y", &v, &[1, 1]).unwrap();
        assert_eq!(p.to_string(), "1/2*x^2 + 1/2*y^2");
    }

    #[test]
    fn roundtrip_display() {
        let v = vars(&["x", "y", "z"]);
        let p = parse_poly("x^3 - 2*x*y*z + 5/3*z^3", &v, &[1, 1, 1]).unwrap();
        let q = parse_poly(&p.to_string(), &v, &[1, 1, 1]).unwrap();
        assert_eq!(p, q);
    }
}
