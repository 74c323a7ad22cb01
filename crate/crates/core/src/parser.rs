//! Parser for the `.mpoly` expression language.
//!
//! ```text
//! file    := [header] expr            # comments run from '#' to end of line
//! header  := "vars:" INT
//! expr    := term (("+" | "-") term)*
//! term    := unary (("*" | "/") unary)*
//! unary   := "-" unary | power
//! power   := atom ["^" INT]
//! atom    := INT | "i" | zK | zbarK | "conj" "(" expr ")" | "(" expr ")"
//! ```
//!
//! Implicit multiplication is rejected. A divisor must expand to a nonzero
//! constant, so `1/4` and `(1+i)/2` are literals while `z1/z2` is an error.

use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::gaussian::GaussianRational;
use crate::mixedpoly::{MixedPolynomial, MAX_EXPONENT};

/// Expression tree. Variable indices are 1-based, as written.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(GaussianRational),
    Var(usize),
    ConjVar(usize),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
    Conj(Box<Expr>),
}

/// A parsed expression with its ambient number of variables.
#[derive(Debug, Clone, PartialEq)]
pub struct Parsed {
    pub ast: Expr,
    pub n_vars: usize,
}

impl Expr {
    /// Largest variable index used (0 when the expression is constant).
    pub fn max_var(&self) -> usize {
        match self {
            Expr::Const(_) => 0,
            Expr::Var(k) | Expr::ConjVar(k) => *k,
            Expr::Sum(xs) | Expr::Product(xs) => xs.iter().map(Expr::max_var).max().unwrap_or(0),
            Expr::Neg(e) | Expr::Pow(e, _) | Expr::Conj(e) => e.max_var(),
        }
    }

    /// Direct tree evaluation; independent of [`expand`].
    pub fn evaluate(&self, z: &[Complex64]) -> Complex64 {
        match self {
            Expr::Const(c) => c.to_complex(),
            Expr::Var(k) => z[k - 1],
            Expr::ConjVar(k) => z[k - 1].conj(),
            Expr::Sum(xs) => xs.iter().map(|e| e.evaluate(z)).sum(),
            Expr::Product(xs) => xs.iter().map(|e| e.evaluate(z)).product(),
            Expr::Neg(e) => -e.evaluate(z),
            Expr::Pow(e, k) => e.evaluate(z).powu(*k),
            Expr::Conj(e) => e.evaluate(z).conj(),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var(k) => write!(f, "z{k}"),
            Expr::ConjVar(k) => write!(f, "zbar{k}"),
            Expr::Sum(xs) => {
                write!(f, "(")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            Expr::Product(xs) => {
                write!(f, "(")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Pow(e, k) => write!(f, "{e}^{k}"),
            Expr::Conj(e) => write!(f, "conj({e})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Dot,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut k = 0;
        while k < chars.len() {
            let ch = chars[k];
            let (line_no, column) = (li + 1, k + 1);
            let push = |out: &mut Vec<Spanned>, tok| {
                out.push(Spanned {
                    tok,
                    line: line_no,
                    column,
                })
            };
            match ch {
                '#' => break,
                c if c.is_whitespace() => k += 1,
                '0'..='9' => {
                    let start = k;
                    while k < chars.len() && chars[k].is_ascii_digit() {
                        k += 1;
                    }
                    let digits: String = chars[start..k].iter().collect();
                    push(&mut out, Tok::Int(digits.parse().expect("ascii digits")));
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let start = k;
                    while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '_') {
                        k += 1;
                    }
                    push(&mut out, Tok::Ident(chars[start..k].iter().collect()));
                }
                _ => {
                    let tok = match ch {
                        '+' => Tok::Plus,
                        '-' => Tok::Minus,
                        '*' => Tok::Star,
                        '/' => Tok::Slash,
                        '^' => Tok::Caret,
                        '(' => Tok::LParen,
                        ')' => Tok::RParen,
                        '.' => Tok::Dot,
                        other => {
                            return Err(Error::Syntax {
                                line: line_no,
                                column,
                                message: format!("unexpected character `{other}`"),
                            })
                        }
                    };
                    push(&mut out, tok);
                    k += 1;
                }
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|s| (s.line, s.column))
            .unwrap_or(self.end)
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T> {
        let (line, column) = self.here();
        Err(Error::Syntax {
            line,
            column,
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.syntax(format!("expected {what}"))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut parts = vec![self.term()?];
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    parts.push(self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    parts.push(Expr::Neg(Box::new(self.term()?)));
                }
                _ => break,
            }
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Expr::Sum(parts)
        })
    }

    fn term(&mut self) -> Result<Expr> {
        let mut parts = vec![self.unary()?];
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    parts.push(self.unary()?);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let (line, column) = self.here();
                    let divisor = self.unary()?;
                    let value = constant_value(&divisor).ok_or_else(|| Error::Syntax {
                        line,
                        column,
                        message: "divisor must be a constant".into(),
                    })?;
                    let inv = value.inv().ok_or_else(|| Error::Syntax {
                        line,
                        column,
                        message: "division by zero".into(),
                    })?;
                    parts.push(Expr::Const(inv));
                }
                Some(Tok::Int(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    return self.syntax("implicit multiplication is not allowed; use `*`");
                }
                _ => break,
            }
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Expr::Product(parts)
        })
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let (line, column) = self.here();
        let parenthesised = self.peek() == Some(&Tok::LParen);
        if parenthesised {
            self.pos += 1;
        }
        let exponent = match self.peek().cloned() {
            Some(Tok::Int(k)) => {
                self.pos += 1;
                if self.peek() == Some(&Tok::Dot)
                    || (parenthesised && self.peek() == Some(&Tok::Slash))
                {
                    return Err(Error::NonNaturalExponent { line, column });
                }
                k
            }
            Some(Tok::Minus) => return Err(Error::NonNaturalExponent { line, column }),
            _ => return self.syntax("expected a natural-number exponent"),
        };
        if parenthesised {
            self.expect(Tok::RParen, "`)`")?;
        }
        let e: u64 = exponent.try_into().map_err(|_| Error::ExponentOverflow(u64::MAX))?;
        if e > MAX_EXPONENT as u64 {
            return Err(Error::ExponentOverflow(e));
        }
        if self.peek() == Some(&Tok::Caret) {
            return self.syntax("chained `^` is ambiguous; add parentheses");
        }
        Ok(Expr::Pow(Box::new(base), e as u32))
    }

    fn atom(&mut self) -> Result<Expr> {
        let (line, column) = self.here();
        match self.peek().cloned() {
            Some(Tok::Int(k)) => {
                self.pos += 1;
                if self.peek() == Some(&Tok::Dot) {
                    return self.syntax("decimal literals are not supported; write p/q");
                }
                Ok(Expr::Const(GaussianRational::real(BigRational::from_integer(k))))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "i" {
                    return Ok(Expr::Const(GaussianRational::i()));
                }
                if name == "conj" {
                    self.expect(Tok::LParen, "`(` after conj")?;
                    let e = self.expr()?;
                    self.expect(Tok::RParen, "`)`")?;
                    return Ok(Expr::Conj(Box::new(e)));
                }
                if let Some(k) = variable_index(&name, "zbar") {
                    return Ok(Expr::ConjVar(k));
                }
                if let Some(k) = variable_index(&name, "z") {
                    return Ok(Expr::Var(k));
                }
                Err(Error::UnknownSymbol {
                    symbol: name,
                    line,
                    column,
                })
            }
            Some(_) => self.syntax("unexpected token"),
            None => self.syntax("unexpected end of input"),
        }
    }
}

fn variable_index(name: &str, prefix: &str) -> Option<usize> {
    let digits = name.strip_prefix(prefix)?;
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.starts_with('0') {
        return None;
    }
    digits.parse().ok()
}

fn constant_value(e: &Expr) -> Option<GaussianRational> {
    if e.max_var() != 0 {
        return None;
    }
    let p = expand(e, 0).ok()?;
    Some(p.constant_term())
}

/// Parses an expression. `n_hint` can only raise the inferred arity.
pub fn parse(text: &str, n_hint: Option<usize>) -> Result<Parsed> {
    let (header, body) = split_header(text)?;
    let toks = lex(&body)?;
    let end = toks
        .last()
        .map(|t| (t.line, t.column + 1))
        .unwrap_or((1, 1));
    if toks.is_empty() {
        return Err(Error::Syntax {
            line: end.0,
            column: end.1,
            message: "empty expression".into(),
        });
    }
    let mut p = Parser { toks, pos: 0, end };
    let ast = p.expr()?;
    if p.pos < p.toks.len() {
        return p.syntax("unexpected trailing input");
    }
    let n_vars = ast
        .max_var()
        .max(header.unwrap_or(0))
        .max(n_hint.unwrap_or(0))
        .max(1);
    Ok(Parsed { ast, n_vars })
}

// Blanks out an optional `vars: n` header line so that line numbers are kept.
fn split_header(text: &str) -> Result<(Option<usize>, String)> {
    let mut header = None;
    let mut seen_expr = false;
    let mut lines = Vec::new();
    for (li, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim();
        if let Some(rest) = trimmed.strip_prefix("vars:") {
            if seen_expr || header.is_some() {
                return Err(Error::Syntax {
                    line: li + 1,
                    column: 1,
                    message: "`vars:` header must come first and only once".into(),
                });
            }
            let n: usize = rest.trim().parse().map_err(|_| Error::Syntax {
                line: li + 1,
                column: raw.find("vars:").unwrap_or(0) + 6,
                message: "`vars:` expects a positive integer".into(),
            })?;
            if n == 0 {
                return Err(Error::Syntax {
                    line: li + 1,
                    column: 1,
                    message: "`vars:` expects a positive integer".into(),
                });
            }
            header = Some(n);
            lines.push(String::new());
        } else {
            if !trimmed.is_empty() {
                seen_expr = true;
            }
            lines.push(raw.to_string());
        }
    }
    Ok((header, lines.join("\n")))
}

/// Fully distributes the tree into a canonical polynomial in `n` variables.
pub fn expand(ast: &Expr, n: usize) -> Result<MixedPolynomial> {
    Ok(match ast {
        Expr::Const(c) => {
            if c.is_zero() {
                MixedPolynomial::zero(n)
            } else {
                MixedPolynomial::constant(c.clone(), n)
            }
        }
        Expr::Var(k) => MixedPolynomial::var(k - 1, n),
        Expr::ConjVar(k) => MixedPolynomial::conj_var(k - 1, n),
        Expr::Sum(xs) => {
            let mut acc = MixedPolynomial::zero(n);
            for x in xs {
                acc = acc.add(&expand(x, n)?)?;
            }
            acc
        }
        Expr::Product(xs) => {
            let mut acc = MixedPolynomial::constant(GaussianRational::one(), n);
            for x in xs {
                acc = acc.mul(&expand(x, n)?)?;
            }
            acc
        }
        Expr::Neg(e) => expand(e, n)?.neg(),
        Expr::Pow(e, k) => expand(e, n)?.pow(*k as u64)?,
        Expr::Conj(e) => expand(e, n)?.conjugate(),
    })
}

/// `parse` followed by `expand`.
pub fn parse_polynomial(text: &str, n_hint: Option<usize>) -> Result<MixedPolynomial> {
    let parsed = parse(text, n_hint)?;
    expand(&parsed.ast, parsed.n_vars)
}

pub fn read_mpoly(path: &Path, n_hint: Option<usize>) -> Result<MixedPolynomial> {
    let text = std::fs::read_to_string(path)?;
    parse_polynomial(&text, n_hint)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::{c, f_ex};

    #[test]
    fn parses_semitame_example() {
        let p = parse(
            "(1/4)*z1^2 - (1/4)*zbar1^2 + z1*zbar1 - (1+i)*(z1+z2)*(zbar1+zbar2)",
            None,
        )
        .unwrap();
        assert_eq!(p.n_vars, 2);
        let f = expand(&p.ast, p.n_vars).unwrap();
        assert_eq!(f, f_ex());
    }

    #[test]
    fn conj_function_equals_zbar_sugar() {
        let a = parse_polynomial("z1*conj(z1) + z2*conj(z2)", None).unwrap();
        let b = parse_polynomial("z1*zbar1 + z2*zbar2", None).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn negative_exponent_rejected() {
        assert!(matches!(
            parse("z1^-1", None),
            Err(Error::NonNaturalExponent { line: 1, column: 4 })
        ));
        assert!(matches!(parse("z1^(-2)", None), Err(Error::NonNaturalExponent { .. })));
        assert!(matches!(parse("z1^(1/2)", None), Err(Error::NonNaturalExponent { .. })));
        assert!(matches!(parse("z1^1.5", None), Err(Error::NonNaturalExponent { .. })));
    }

    #[test]
    fn unknown_symbols_and_syntax_errors() {
        assert!(matches!(
            parse("z1 + w2", None),
            Err(Error::UnknownSymbol { column: 6, .. })
        ));
        assert!(matches!(parse("z0", None), Err(Error::UnknownSymbol { .. })));
        assert!(matches!(parse("2 z1", None), Err(Error::Syntax { .. })));
        assert!(matches!(parse("(z1 + 1", None), Err(Error::Syntax { .. })));
        assert!(matches!(parse("z1 / z2", None), Err(Error::Syntax { .. })));
        assert!(matches!(parse("z1 / 0", None), Err(Error::Syntax { .. })));
        assert!(matches!(parse("1.5*z1", None), Err(Error::Syntax { .. })));
        let err = parse("z1 +\n  * z2", None).unwrap_err();
        assert_eq!(
            err,
            Error::Syntax {
                line: 2,
                column: 3,
                message: "unexpected token".into()
            }
        );
    }

    #[test]
    fn expand_conjugate_of_sum() {
        let f = parse_polynomial("conj(z1^2 + i*z2)", None).unwrap();
        let g = parse_polynomial("zbar1^2 - i*zbar2", None).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn expand_g_pol_has_three_terms() {
        let g = parse_polynomial("z1^2 + z1^4*zbar2^2 + z2^2", None).unwrap();
        assert_eq!(g.terms().len(), 3);
    }

    #[test]
    fn header_comments_and_arity() {
        let text = "# example\nvars: 3\nz1*zbar1  # radial\n + z2*zbar2\n";
        let f = parse_polynomial(text, None).unwrap();
        assert_eq!(f.n_vars(), 3);
        assert_eq!(parse_polynomial("z2", Some(1)).unwrap().n_vars(), 2);
        assert_eq!(parse_polynomial("z2", Some(4)).unwrap().n_vars(), 4);
        assert!(parse("z1\nvars: 2", None).is_err());
    }

    #[test]
    fn precedence_of_unary_minus_and_power() {
        let f = parse_polynomial("-z1^2", None).unwrap();
        let v = f.evaluate(&[c(2.0, 0.0)]).unwrap();
        assert!((v - c(-4.0, 0.0)).norm() < 1e-15);
        let g = parse_polynomial("(1+i)/2*z1", None).unwrap();
        let v = g.evaluate(&[c(1.0, 0.0)]).unwrap();
        assert!((v - c(0.5, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn serializer_output_reparses() {
        let f = f_ex();
        assert_eq!(parse_polynomial(&f.to_string(), Some(2)).unwrap(), f);
        assert_eq!(parse_polynomial("0", Some(2)).unwrap(), MixedPolynomial::zero(2));
    }
}
