//! Recursive-descent parser for formulas.
//!
//! ```text
//! formula := disj
//! disj    := conj ("|" conj)*
//! conj    := unit ("&" unit)*
//! unit    := ("E" | "A") IDENT "in" SYMBOL "." disj
//!          | SYMBOL "(" args ")" | "(" disj ")" | "true" | "false"
//! args    := IDENT | INT ("," INT)*
//! ```
//!
//! `E` and `A` are quantifiers only when followed by an identifier, so they
//! remain usable as symbol names.

use crate::error::{Error, Result};
use crate::signature::{Signature, Tuple};

use super::ast::{Formula, TupleExpr};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(u32),
    Punct(char),
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
        } else if c.is_whitespace() {
            chars.next();
            column += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    s.push(c);
                    chars.next();
                    column += 1;
                } else {
                    break;
                }
            }
            out.push(Token {
                tok: Tok::Ident(s),
                line: l,
                column: col,
            });
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_digit() {
                    s.push(c);
                    chars.next();
                    column += 1;
                } else {
                    break;
                }
            }
            let value = s.parse().map_err(|_| Error::FormulaParse {
                line: l,
                column: col,
                message: format!("integer `{s}` is too large"),
            })?;
            out.push(Token {
                tok: Tok::Int(value),
                line: l,
                column: col,
            });
        } else if "()|&,.".contains(c) {
            chars.next();
            column += 1;
            out.push(Token {
                tok: Tok::Punct(c),
                line: l,
                column: col,
            });
        } else {
            return Err(Error::FormulaParse {
                line: l,
                column: col,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column,
    });
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    sig: &'a Signature,
    /// Bound variables and the symbol they range over, innermost last.
    scope: Vec<(String, usize)>,
}

/// Parses and scope-checks a formula over `sig`.
pub fn parse(text: &str, sig: &Signature) -> Result<Formula> {
    let mut p = Parser {
        tokens: lex(text)?,
        pos: 0,
        sig,
        scope: Vec::new(),
    };
    let f = p.disj()?;
    if p.peek() != &Tok::Eof {
        return p.fail("expected end of input");
    }
    Ok(f)
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek2(&self) -> &Tok {
        &self.tokens[(self.pos + 1).min(self.tokens.len() - 1)].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.tokens[self.pos].tok.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T> {
        self.fail_at(self.pos, message)
    }

    fn fail_at<T>(&self, pos: usize, message: impl Into<String>) -> Result<T> {
        let t = &self.tokens[pos];
        Err(Error::FormulaParse {
            line: t.line,
            column: t.column,
            message: message.into(),
        })
    }

    fn expect_punct(&mut self, c: char) -> Result<()> {
        if self.peek() == &Tok::Punct(c) {
            self.bump();
            Ok(())
        } else {
            self.fail(format!("expected `{c}`"))
        }
    }

    fn symbol(&mut self) -> Result<usize> {
        let at = self.pos;
        match self.bump() {
            Tok::Ident(name) => match self.sig.symbol_index(&name) {
                Some(s) => Ok(s),
                None => self.fail_at(at, format!("unknown symbol `{name}`")),
            },
            _ => self.fail_at(at, "expected a relation symbol"),
        }
    }

    fn disj(&mut self) -> Result<Formula> {
        let mut f = self.conj()?;
        while self.peek() == &Tok::Punct('|') {
            self.bump();
            f = Formula::or(f, self.conj()?);
        }
        Ok(f)
    }

    fn conj(&mut self) -> Result<Formula> {
        let mut f = self.unit()?;
        while self.peek() == &Tok::Punct('&') {
            self.bump();
            f = Formula::and(f, self.unit()?);
        }
        Ok(f)
    }

    fn unit(&mut self) -> Result<Formula> {
        match (self.peek().clone(), self.peek2().clone()) {
            (Tok::Punct('('), _) => {
                self.bump();
                let f = self.disj()?;
                self.expect_punct(')')?;
                Ok(f)
            }
            (Tok::Ident(q), Tok::Ident(_)) if q == "E" || q == "A" => self.quantifier(q == "E"),
            (Tok::Ident(c), next) if (c == "true" || c == "false") && next != Tok::Punct('(') => {
                self.bump();
                Ok(Formula::Const(c == "true"))
            }
            (Tok::Ident(_), _) => self.atom(),
            _ => self.fail("expected a formula"),
        }
    }

    fn quantifier(&mut self, exists: bool) -> Result<Formula> {
        self.bump();
        let var_at = self.pos;
        let Tok::Ident(var) = self.bump() else {
            unreachable!("checked by the caller")
        };
        if self.scope.iter().any(|(v, _)| *v == var) {
            return self.fail_at(var_at, format!("variable `{var}` is already bound"));
        }
        if self.sig.symbol_index(&var).is_some() || var == "in" {
            return self.fail_at(var_at, format!("`{var}` cannot be used as a variable name"));
        }
        match self.bump() {
            Tok::Ident(kw) if kw == "in" => {}
            _ => return self.fail_at(self.pos - 1, "expected `in`"),
        }
        let symbol = self.symbol()?;
        self.expect_punct('.')?;
        self.scope.push((var.clone(), symbol));
        let body = self.disj();
        self.scope.pop();
        let body = Box::new(body?);
        Ok(if exists {
            Formula::Exists { var, symbol, body }
        } else {
            Formula::Forall { var, symbol, body }
        })
    }

    fn atom(&mut self) -> Result<Formula> {
        let symbol = self.symbol()?;
        let arity = self.sig.arity(symbol);
        self.expect_punct('(')?;
        let args_at = self.pos;
        let args = match self.peek().clone() {
            Tok::Ident(v) => {
                self.bump();
                let Some(&(_, bound)) = self.scope.iter().rev().find(|(w, _)| *w == v) else {
                    return Err(Error::FreeVariable(v));
                };
                if self.sig.arity(bound) != arity {
                    return self.fail_at(
                        args_at,
                        format!(
                            "`{v}` ranges over `{}` of arity {}, but `{}` has arity {arity}",
                            self.sig.name(bound),
                            self.sig.arity(bound),
                            self.sig.name(symbol)
                        ),
                    );
                }
                TupleExpr::Var(v)
            }
            Tok::Int(_) => {
                let mut t = Tuple::new();
                loop {
                    match self.bump() {
                        Tok::Int(e) => t.push(e),
                        _ => return self.fail_at(self.pos - 1, "expected an element index"),
                    }
                    if self.peek() != &Tok::Punct(',') {
                        break;
                    }
                    self.bump();
                }
                if t.len() != arity {
                    return self.fail_at(
                        args_at,
                        format!(
                            "`{}` has arity {arity}, got {} element(s)",
                            self.sig.name(symbol),
                            t.len()
                        ),
                    );
                }
                TupleExpr::Lit(t)
            }
            _ => return self.fail("expected a variable or element indices"),
        };
        self.expect_punct(')')?;
        Ok(Formula::Atom { symbol, args })
    }
}
