use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Propositional formula over feature identifiers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expr {
    Var(String),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Implies(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn var(id: impl Into<String>) -> Self {
        Expr::Var(id.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(e: Expr) -> Self {
        Expr::Not(Box::new(e))
    }

    pub fn and(a: Expr, b: Expr) -> Self {
        Expr::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Expr, b: Expr) -> Self {
        Expr::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Expr, b: Expr) -> Self {
        Expr::Implies(Box::new(a), Box::new(b))
    }

    /// Closed-world evaluation: a variable is true iff `selected` says so.
    pub fn eval(&self, selected: &dyn Fn(&str) -> bool) -> bool {
        match self {
            Expr::Var(v) => selected(v),
            Expr::Not(e) => !e.eval(selected),
            Expr::And(a, b) => a.eval(selected) && b.eval(selected),
            Expr::Or(a, b) => a.eval(selected) || b.eval(selected),
            Expr::Implies(a, b) => !a.eval(selected) || b.eval(selected),
        }
    }

    pub fn variables(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Expr::Var(v) => {
                out.insert(v);
            }
            Expr::Not(e) => e.collect_vars(out),
            Expr::And(a, b) | Expr::Or(a, b) | Expr::Implies(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    fn is_binary(&self) -> bool {
        matches!(self, Expr::And(..) | Expr::Or(..) | Expr::Implies(..))
    }
}

/// Writes the DSL surface syntax. Nested binary operands are always
/// parenthesized so the printed form parses back to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn operand(e: &Expr, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            if e.is_binary() {
                write!(f, "({e})")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            Expr::Var(v) => f.write_str(v),
            Expr::Not(e) => {
                f.write_str("!")?;
                operand(e, f)
            }
            Expr::And(a, b) | Expr::Or(a, b) | Expr::Implies(a, b) => {
                let op = match self {
                    Expr::And(..) => "&",
                    Expr::Or(..) => "|",
                    _ => "=>",
                };
                operand(a, f)?;
                write!(f, " {op} ")?;
                operand(b, f)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn implication_truth_table() {
        let e = Expr::implies(Expr::var("A"), Expr::var("B"));
        let cases = [(false, false, true), (false, true, true), (true, false, false), (true, true, true)];
        for (a, b, want) in cases {
            let sel = move |v: &str| if v == "A" { a } else { b };
            assert_eq!(e.eval(&sel), want, "A={a} B={b}");
        }
    }

    #[test]
    fn display_parenthesizes_nested_binaries() {
        let e = Expr::or(Expr::and(Expr::var("A"), Expr::var("B")), Expr::not(Expr::var("C")));
        assert_eq!(e.to_string(), "(A & B) | !C");
        let e = Expr::not(Expr::implies(Expr::var("A"), Expr::var("B")));
        assert_eq!(e.to_string(), "!(A => B)");
    }

    #[test]
    fn variables_are_deduplicated() {
        let e = Expr::and(Expr::var("B"), Expr::or(Expr::var("A"), Expr::var("B")));
        assert_eq!(e.variables().into_iter().collect::<Vec<_>>(), vec!["A", "B"]);
    }
}
