use std::f64::consts::{E, PI};

use super::ast::{BinOp, CmpOp, Func, Node, UnaryOp};
use super::lexer::{tokenize, Token, TokenKind};
use crate::error::ParseError;

/// Recursive-descent parser over the token stream.
///
/// ```text
/// expr    := term { ("+"|"-") term }
/// term    := unary { ("*"|"/") unary }
/// unary   := "-" unary | power
/// power   := primary [ "^" unary ]
/// primary := NUMBER | IDENT | IDENT "(" expr { "," expr } ")" | "(" expr ")" | cond
/// cond    := "if" "(" expr CMP expr "," expr "," expr ")"
/// ```
///
/// `-x1^2` is `-(x1^2)` and `^` is right-associative.
pub fn parse(src: &str, arity: usize) -> Result<Node, ParseError> {
    let tokens = tokenize(src)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        end: src.len(),
        arity,
    };
    let node = p.expr()?;
    if let Some(tok) = p.peek() {
        return Err(p.error_at(tok.position, "operator or end of input", &tok.text.clone()));
    }
    Ok(node)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: usize,
    arity: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_op(&self, ops: &[&str]) -> Option<String> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Operator && ops.contains(&t.text.as_str()) => Some(t.text.clone()),
            _ => None,
        }
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, position: usize, expected: &str, found: &str) -> ParseError {
        ParseError {
            position,
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        match self.peek() {
            Some(t) => self.error_at(t.position, expected, &format!("'{}'", t.text)),
            None => self.error_at(self.end, expected, "end of input"),
        }
    }

    fn expect(&mut self, kind: TokenKind, what: &str) -> Result<Token, ParseError> {
        match self.peek() {
            Some(t) if t.kind == kind => Ok(self.next().expect("peeked")),
            _ => Err(self.unexpected(what)),
        }
    }

    fn expr(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.term()?;
        while let Some(op) = self.peek_op(&["+", "-"]) {
            self.pos += 1;
            let rhs = self.term()?;
            let op = if op == "+" { BinOp::Add } else { BinOp::Sub };
            lhs = Node::Binary {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.unary()?;
        while let Some(op) = self.peek_op(&["*", "/"]) {
            self.pos += 1;
            let rhs = self.unary()?;
            let op = if op == "*" { BinOp::Mul } else { BinOp::Div };
            lhs = Node::Binary {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Node, ParseError> {
        if self.peek_op(&["-"]).is_some() {
            self.pos += 1;
            let child = self.unary()?;
            return Ok(Node::Unary {
                op: UnaryOp::Neg,
                child: Box::new(child),
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node, ParseError> {
        let base = self.primary()?;
        if self.peek_op(&["^"]).is_some() {
            self.pos += 1;
            let exponent = self.unary()?;
            return Ok(Node::Binary {
                op: BinOp::Pow,
                lhs: Box::new(base),
                rhs: Box::new(exponent),
            });
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Node, ParseError> {
        let expected = "number, variable, function call or '('";
        let tok = match self.peek() {
            Some(t) => t.clone(),
            None => return Err(self.unexpected(expected)),
        };
        match tok.kind {
            TokenKind::Number => {
                self.pos += 1;
                let value: f64 = tok
                    .text
                    .parse()
                    .map_err(|_| self.error_at(tok.position, "number", &format!("'{}'", tok.text)))?;
                if !value.is_finite() {
                    return Err(self.error_at(tok.position, "finite number", &format!("'{}'", tok.text)));
                }
                Ok(Node::Number(value))
            }
            TokenKind::LParen => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(TokenKind::RParen, "')'")?;
                Ok(inner)
            }
            TokenKind::Identifier => {
                self.pos += 1;
                self.identifier(&tok)
            }
            _ => Err(self.unexpected(expected)),
        }
    }

    fn identifier(&mut self, tok: &Token) -> Result<Node, ParseError> {
        let name = tok.text.as_str();
        if name == "if" {
            return self.cond();
        }
        if let Some(func) = Func::from_name(name) {
            return self.call(func, tok);
        }
        match name {
            "pi" => return Ok(Node::Number(PI)),
            "e" => return Ok(Node::Number(E)),
            _ => {}
        }
        let index = match name {
            "x" | "u" => Some(1),
            "y" | "v" => Some(2),
            _ => name
                .strip_prefix('x')
                .filter(|d| !d.is_empty() && !d.starts_with('0') && d.bytes().all(|b| b.is_ascii_digit()))
                .and_then(|d| d.parse::<usize>().ok()),
        };
        match index {
            Some(k) if k <= self.arity => Ok(Node::Var(k)),
            Some(_) => Err(self.error_at(
                tok.position,
                &format!("variable x1..x{}", self.arity),
                &format!("'{name}'"),
            )),
            None => Err(self.error_at(
                tok.position,
                "variable, constant or function",
                &format!("'{name}'"),
            )),
        }
    }

    fn call(&mut self, func: Func, name_tok: &Token) -> Result<Node, ParseError> {
        self.expect(TokenKind::LParen, &format!("'(' after {}", func.name()))?;
        let mut args = vec![self.expr()?];
        while self.peek().is_some_and(|t| t.kind == TokenKind::Comma) {
            self.pos += 1;
            args.push(self.expr()?);
        }
        self.expect(TokenKind::RParen, "',' or ')'")?;
        if args.len() != func.arity() {
            return Err(self.error_at(
                name_tok.position,
                &format!("{} argument(s) for {}", func.arity(), func.name()),
                &format!("{} argument(s)", args.len()),
            ));
        }
        Ok(Node::Call { func, args })
    }

    fn cond(&mut self) -> Result<Node, ParseError> {
        self.expect(TokenKind::LParen, "'(' after if")?;
        let lhs = self.expr()?;
        let cmp = match self.peek_op(&["<", "<=", ">", ">=", "=="]) {
            Some(s) => {
                self.pos += 1;
                CmpOp::from_symbol(&s).expect("listed comparison")
            }
            None => return Err(self.unexpected("comparison operator")),
        };
        let rhs = self.expr()?;
        self.expect(TokenKind::Comma, "','")?;
        let then = self.expr()?;
        self.expect(TokenKind::Comma, "','")?;
        let otherwise = self.expr()?;
        self.expect(TokenKind::RParen, "')'")?;
        Ok(Node::Cond {
            cmp,
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
            then: Box::new(then),
            otherwise: Box::new(otherwise),
        })
    }
}
