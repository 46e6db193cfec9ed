//! Textual notations: infix with parentheses, and parenthesis-free prefix and
//! postfix token streams.
//!
//! Tokens are `1`, `x`, `+`, `*` (or `·`), `^`, and in infix `(` and `)`.
//! Infix follows
//!
//! ```text
//! expr   := term ('+' term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' factor)?
//! atom   := '1' | 'x' | '(' expr ')'
//! ```
//!
//! Prefix and postfix operators are binary. An n-ary sum or product is written
//! as a chain of binary operators; a chain of the same operator is collected
//! back into one n-ary node when parsed.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::expr::{Expr, Kind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Notation {
    Infix,
    Prefix,
    Postfix,
}

impl std::str::FromStr for Notation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "infix" => Ok(Notation::Infix),
            "prefix" => Ok(Notation::Prefix),
            "postfix" => Ok(Notation::Postfix),
            other => Err(Error::Domain(format!("unknown notation `{other}`"))),
        }
    }
}

impl Expr {
    /// Renders in `notation`. With `expand_x` every `x` is written as `1+1`
    /// (parenthesized in infix).
    pub fn render(&self, notation: Notation, expand_x: bool) -> String {
        let mut out = String::new();
        match notation {
            Notation::Infix => write_infix(self, expand_x, &mut out),
            Notation::Prefix => {
                let mut tokens = Vec::new();
                prefix_tokens(self, expand_x, &mut tokens);
                out = tokens.join(" ");
            }
            Notation::Postfix => {
                let mut tokens = Vec::new();
                postfix_tokens(self, expand_x, &mut tokens);
                out = tokens.join(" ");
            }
        }
        out
    }
}

/// Parses `text` written in `notation` into an interned expression.
pub fn parse(text: &str, notation: Notation) -> Result<Expr> {
    match notation {
        Notation::Infix => InfixParser::new(text)?.parse(),
        Notation::Prefix => parse_prefix(text),
        Notation::Postfix => parse_postfix(text),
    }
}

fn write_infix(e: &Expr, expand_x: bool, out: &mut String) {
    match e.kind() {
        Kind::One => out.push('1'),
        Kind::Sum(_) if e.is_x() => out.push_str(if expand_x { "(1+1)" } else { "x" }),
        Kind::Sum(cs) => {
            out.push('(');
            for (i, c) in cs.iter().enumerate() {
                if i > 0 {
                    out.push('+');
                }
                write_infix(c, expand_x, out);
            }
            out.push(')');
        }
        Kind::Product(cs) => {
            for (i, c) in cs.iter().enumerate() {
                if i > 0 {
                    out.push('*');
                }
                write_infix(c, expand_x, out);
            }
        }
        Kind::Power(b, x) => {
            write_power_operand(b, expand_x, out);
            out.push('^');
            write_power_operand(x, expand_x, out);
        }
    }
}

fn write_power_operand(e: &Expr, expand_x: bool, out: &mut String) {
    // sums carry their own parentheses
    if matches!(e.kind(), Kind::Product(_) | Kind::Power(..)) {
        out.push('(');
        write_infix(e, expand_x, out);
        out.push(')');
    } else {
        write_infix(e, expand_x, out);
    }
}

fn prefix_tokens(e: &Expr, expand_x: bool, out: &mut Vec<&'static str>) {
    match e.kind() {
        Kind::One => out.push("1"),
        Kind::Sum(_) if e.is_x() && !expand_x => out.push("x"),
        Kind::Sum(cs) | Kind::Product(cs) => {
            let op = if matches!(e.kind(), Kind::Sum(_)) { "+" } else { "*" };
            // a op (b op (c ...)), written right-nested
            for c in &cs[..cs.len() - 1] {
                out.push(op);
                prefix_tokens(c, expand_x, out);
            }
            prefix_tokens(&cs[cs.len() - 1], expand_x, out);
        }
        Kind::Power(b, x) => {
            out.push("^");
            prefix_tokens(b, expand_x, out);
            prefix_tokens(x, expand_x, out);
        }
    }
}

fn postfix_tokens(e: &Expr, expand_x: bool, out: &mut Vec<&'static str>) {
    match e.kind() {
        Kind::One => out.push("1"),
        Kind::Sum(_) if e.is_x() && !expand_x => out.push("x"),
        Kind::Sum(cs) | Kind::Product(cs) => {
            let op = if matches!(e.kind(), Kind::Sum(_)) { "+" } else { "*" };
            postfix_tokens(&cs[0], expand_x, out);
            for c in &cs[1..] {
                postfix_tokens(c, expand_x, out);
                out.push(op);
            }
        }
        Kind::Power(b, x) => {
            postfix_tokens(b, expand_x, out);
            postfix_tokens(x, expand_x, out);
            out.push("^");
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Token {
    One,
    X,
    Plus,
    Times,
    Caret,
    Open,
    Close,
}

fn lex(text: &str) -> Result<Vec<(usize, Token)>> {
    let mut tokens = Vec::new();
    for (pos, ch) in text.char_indices() {
        let tok = match ch {
            c if c.is_whitespace() => continue,
            '1' => Token::One,
            'x' => Token::X,
            '+' => Token::Plus,
            '*' | '·' => Token::Times,
            '^' => Token::Caret,
            '(' => Token::Open,
            ')' => Token::Close,
            other => {
                return Err(Error::Syntax {
                    position: pos,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        tokens.push((pos, tok));
    }
    Ok(tokens)
}

struct InfixParser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl InfixParser {
    fn new(text: &str) -> Result<Self> {
        Ok(InfixParser {
            tokens: lex(text)?,
            pos: 0,
            end: text.len(),
        })
    }

    fn parse(mut self) -> Result<Expr> {
        let e = self.expr()?;
        match self.tokens.get(self.pos) {
            None => Ok(e),
            Some(&(at, _)) => Err(Error::Syntax {
                position: at,
                message: "unexpected trailing input".into(),
            }),
        }
    }

    fn peek(&self) -> Option<Token> {
        self.tokens.get(self.pos).map(|&(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |&(p, _)| p)
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut terms = vec![self.term()?];
        while self.peek() == Some(Token::Plus) {
            self.pos += 1;
            terms.push(self.term()?);
        }
        Ok(Expr::sum(terms))
    }

    fn term(&mut self) -> Result<Expr> {
        let mut factors = vec![self.factor()?];
        while self.peek() == Some(Token::Times) {
            self.pos += 1;
            factors.push(self.factor()?);
        }
        Ok(Expr::product(factors))
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some(Token::Caret) {
            self.pos += 1;
            let exponent = self.factor()?;
            return Ok(Expr::power(base, exponent));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let at = self.offset();
        match self.peek() {
            Some(Token::One) => {
                self.pos += 1;
                Ok(Expr::one())
            }
            Some(Token::X) => {
                self.pos += 1;
                Ok(Expr::x())
            }
            Some(Token::Open) => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(Token::Close) {
                    return Err(Error::Syntax {
                        position: self.offset(),
                        message: "expected `)`".into(),
                    });
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(tok) => Err(Error::Syntax {
                position: at,
                message: format!("expected `1`, `x` or `(`, found {}", describe(tok)),
            }),
            None => Err(Error::Syntax {
                position: at,
                message: "unexpected end of input".into(),
            }),
        }
    }
}

fn describe(tok: Token) -> &'static str {
    match tok {
        Token::One => "`1`",
        Token::X => "`x`",
        Token::Plus => "`+`",
        Token::Times => "`*`",
        Token::Caret => "`^`",
        Token::Open => "`(`",
        Token::Close => "`)`",
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Chain {
    Sum,
    Product,
}

/// Intermediate result while reading a token stream: either a finished node
/// or an open chain of one associative operator whose operands have not been
/// interned as a node yet.
enum Partial {
    Done(Expr),
    Chain(Chain, Vec<Expr>),
}

impl Partial {
    fn finish(self) -> Expr {
        match self {
            Partial::Done(e) => e,
            Partial::Chain(Chain::Sum, es) => Expr::sum(es),
            Partial::Chain(Chain::Product, es) => Expr::product(es),
        }
    }

    fn operands_for(self, op: Chain, into: &mut Vec<Expr>) {
        match self {
            Partial::Chain(c, es) if c == op => into.extend(es),
            other => into.push(other.finish()),
        }
    }
}

fn combine(tok: Token, a: Partial, b: Partial) -> Partial {
    let chain = match tok {
        Token::Plus => Chain::Sum,
        Token::Times => Chain::Product,
        _ => return Partial::Done(Expr::power(a.finish(), b.finish())),
    };
    let mut operands = Vec::new();
    a.operands_for(chain, &mut operands);
    b.operands_for(chain, &mut operands);
    Partial::Chain(chain, operands)
}

fn stream_tokens(text: &str) -> Result<Vec<(usize, Token)>> {
    let tokens = lex(text)?;
    if let Some(&(at, _)) = tokens
        .iter()
        .find(|(_, t)| matches!(t, Token::Open | Token::Close))
    {
        return Err(Error::Syntax {
            position: at,
            message: "parentheses are not allowed in prefix or postfix notation".into(),
        });
    }
    if tokens.is_empty() {
        return Err(Error::Syntax {
            position: 0,
            message: "empty input".into(),
        });
    }
    Ok(tokens)
}

fn parse_prefix(text: &str) -> Result<Expr> {
    let tokens = stream_tokens(text)?;
    let mut pos = 0;
    let e = prefix_operand(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err(Error::Arity {
            position: pos,
            message: format!("{} token(s) left after a complete expression", tokens.len() - pos),
        });
    }
    Ok(e.finish())
}

fn prefix_operand(tokens: &[(usize, Token)], pos: &mut usize) -> Result<Partial> {
    let Some(&(_, tok)) = tokens.get(*pos) else {
        return Err(Error::Arity {
            position: *pos,
            message: "operator is missing an operand".into(),
        });
    };
    *pos += 1;
    match tok {
        Token::One => Ok(Partial::Done(Expr::one())),
        Token::X => Ok(Partial::Done(Expr::x())),
        _ => {
            let a = prefix_operand(tokens, pos)?;
            let b = prefix_operand(tokens, pos)?;
            Ok(combine(tok, a, b))
        }
    }
}

fn parse_postfix(text: &str) -> Result<Expr> {
    let tokens = stream_tokens(text)?;
    let mut stack: Vec<Partial> = Vec::new();
    for (i, &(_, tok)) in tokens.iter().enumerate() {
        match tok {
            Token::One => stack.push(Partial::Done(Expr::one())),
            Token::X => stack.push(Partial::Done(Expr::x())),
            _ => {
                let (Some(b), Some(a)) = (stack.pop(), stack.pop()) else {
                    return Err(Error::Arity {
                        position: i,
                        message: format!("{} needs two operands", describe(tok)),
                    });
                };
                stack.push(combine(tok, a, b));
            }
        }
    }
    if stack.len() != 1 {
        let mut msg = String::new();
        let _ = write!(msg, "{} operands left without an operator", stack.len());
        return Err(Error::Arity {
            position: tokens.len(),
            message: msg,
        });
    }
    Ok(stack.pop().unwrap().finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn infix(s: &str) -> Expr {
        parse(s, Notation::Infix).unwrap()
    }

    #[test]
    fn infix_examples() {
        let e = infix("(x^x+1)");
        let expected = Expr::sum([Expr::power(Expr::x(), Expr::x()), Expr::one()]);
        assert_eq!(e, expected);
        assert_eq!(parse("+ ^ x x 1", Notation::Prefix).unwrap(), expected);
        assert_eq!(parse("x x ^ 1 +", Notation::Postfix).unwrap(), expected);

        let e = infix("x^(x+1)");
        assert_eq!(e.evaluate_u64().unwrap(), 8);
        assert!(matches!(e.kind(), Kind::Power(b, _) if b.is_x()));
    }

    #[test]
    fn power_is_right_associative() {
        assert_eq!(infix("x^x^x"), infix("x^(x^x)"));
        assert_eq!(infix("x^x^x").evaluate_u64().unwrap(), 16);
    }

    #[test]
    fn precedence() {
        assert_eq!(infix("1+x*x^x").evaluate_u64().unwrap(), 9);
        assert_eq!(infix("(1+x)*x").evaluate_u64().unwrap(), 6);
    }

    #[test]
    fn middle_dot_and_whitespace() {
        assert_eq!(infix(" ( x + 1 ) · x "), infix("(x+1)*x"));
    }

    #[test]
    fn trivial_subterms_are_simplified_on_input() {
        assert_eq!(infix("1^(1^1)"), Expr::one());
        assert_eq!(infix("x^1"), Expr::x());
        assert_eq!(infix("x*1*x"), infix("x*x"));
        assert_eq!(infix("1+1"), Expr::x());
    }

    #[test]
    fn renders_examples() {
        let three = Expr::sum([Expr::x(), Expr::one()]);
        assert_eq!(three.render(Notation::Infix, false), "(x+1)");
        assert_eq!(Expr::x().render(Notation::Infix, true), "(1+1)");
        assert_eq!(three.render(Notation::Postfix, false), "x 1 +");
        assert_eq!(three.render(Notation::Prefix, false), "+ x 1");
        assert_eq!(three.render(Notation::Prefix, true), "+ + 1 1 1");
        let tower = infix("x^(x^x)");
        assert_eq!(tower.render(Notation::Infix, false), "x^(x^x)");
        let p = infix("(x+1)^(x*x)");
        assert_eq!(p.render(Notation::Infix, false), "(x+1)^(x*x)");
    }

    #[test]
    fn stream_chains_collect_into_one_node() {
        let e = parse("+ 1 + 1 1", Notation::Prefix).unwrap();
        assert_eq!(e.operands().len(), 3);
        let e = parse("1 1 + 1 +", Notation::Postfix).unwrap();
        assert_eq!(e.operands().len(), 3);
        assert_eq!(e.render(Notation::Postfix, false), "1 1 + 1 +");
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse("(x+1", Notation::Infix) {
            Err(Error::Syntax { position, .. }) => assert_eq!(position, 4),
            other => panic!("{other:?}"),
        }
        match parse("x+y", Notation::Infix) {
            Err(Error::Syntax { position, .. }) => assert_eq!(position, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("x x", Notation::Infix), Err(Error::Syntax { position: 2, .. })));
        assert!(matches!(parse("", Notation::Infix), Err(Error::Syntax { .. })));
        assert!(matches!(parse("( x )", Notation::Prefix), Err(Error::Syntax { .. })));
    }

    #[test]
    fn arity_errors() {
        assert!(matches!(parse("+ x", Notation::Prefix), Err(Error::Arity { .. })));
        assert!(matches!(parse("+ x 1 1", Notation::Prefix), Err(Error::Arity { .. })));
        assert!(matches!(parse("x +", Notation::Postfix), Err(Error::Arity { .. })));
        assert!(matches!(parse("x 1", Notation::Postfix), Err(Error::Arity { .. })));
    }
}
