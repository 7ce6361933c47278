use crate::signature::{Signature, Tuple};

/// Argument of an atom: a literal tuple or a bound tuple variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TupleExpr {
    Lit(Tuple),
    Var(String),
}

/// A negation-free formula whose quantifiers range over whole tuples.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    /// `true` / `false`; realized as 1 / 0.
    Const(bool),
    Atom {
        symbol: usize,
        args: TupleExpr,
    },
    Or(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Exists {
        var: String,
        symbol: usize,
        body: Box<Formula>,
    },
    Forall {
        var: String,
        symbol: usize,
        body: Box<Formula>,
    },
}

const OR: u8 = 1;
const AND: u8 = 2;

impl Formula {
    pub fn atom(symbol: usize, tuple: &[u32]) -> Formula {
        Formula::Atom {
            symbol,
            args: TupleExpr::Lit(Tuple::from_slice(tuple)),
        }
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    /// Left-nested disjunction; `false` when empty.
    pub fn disjunction(items: impl IntoIterator<Item = Formula>) -> Formula {
        items.into_iter().reduce(Formula::or).unwrap_or(Formula::Const(false))
    }

    /// Left-nested conjunction; `true` when empty.
    pub fn conjunction(items: impl IntoIterator<Item = Formula>) -> Formula {
        items.into_iter().reduce(Formula::and).unwrap_or(Formula::Const(true))
    }

    /// Number of `|`, `&` and quantifier nodes.
    pub fn connectives(&self) -> usize {
        match self {
            Formula::Const(_) | Formula::Atom { .. } => 0,
            Formula::Or(a, b) | Formula::And(a, b) => 1 + a.connectives() + b.connectives(),
            Formula::Exists { body, .. } | Formula::Forall { body, .. } => 1 + body.connectives(),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Formula::Const(_) => true,
            Formula::Atom { args, .. } => matches!(args, TupleExpr::Lit(_)),
            Formula::Or(a, b) | Formula::And(a, b) => a.is_ground() && b.is_ground(),
            Formula::Exists { .. } | Formula::Forall { .. } => false,
        }
    }

    /// Prints with minimal parentheses and single spaces.
    pub fn to_text(&self, sig: &Signature) -> String {
        let mut out = String::new();
        self.write(sig, OR, true, &mut out);
        out
    }

    /// `rightmost`: nothing follows in the enclosing text, so a quantifier
    /// body may extend to the end without parentheses.
    fn write(&self, sig: &Signature, prec: u8, rightmost: bool, out: &mut String) {
        match self {
            Formula::Const(b) => out.push_str(if *b { "true" } else { "false" }),
            Formula::Atom { symbol, args } => {
                out.push_str(sig.name(*symbol));
                out.push('(');
                match args {
                    TupleExpr::Var(v) => out.push_str(v),
                    TupleExpr::Lit(t) => {
                        let parts: Vec<String> = t.iter().map(u32::to_string).collect();
                        out.push_str(&parts.join(","));
                    }
                }
                out.push(')');
            }
            Formula::Or(a, b) => binary(sig, a, b, " | ", OR, prec, rightmost, out),
            Formula::And(a, b) => binary(sig, a, b, " & ", AND, prec, rightmost, out),
            Formula::Exists { var, symbol, body } | Formula::Forall { var, symbol, body } => {
                let wrap = !rightmost;
                if wrap {
                    out.push('(');
                }
                out.push_str(if matches!(self, Formula::Exists { .. }) {
                    "E "
                } else {
                    "A "
                });
                out.push_str(var);
                out.push_str(" in ");
                out.push_str(sig.name(*symbol));
                out.push_str(" . ");
                body.write(sig, OR, true, out);
                if wrap {
                    out.push(')');
                }
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn binary(sig: &Signature, a: &Formula, b: &Formula, op: &str, own: u8, prec: u8, rightmost: bool, out: &mut String) {
    let wrap = prec > own;
    if wrap {
        out.push('(');
    }
    a.write(sig, own, false, out);
    out.push_str(op);
    b.write(sig, own + 1, rightmost || wrap, out);
    if wrap {
        out.push(')');
    }
}
