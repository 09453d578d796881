use std::collections::BTreeMap;

use crate::fm::{validate_model, Constraint, Expr, Feature, FeatureModel, Group, GroupKind, Variability};

use super::{ParseError, ParseErrorCode, SourceSpan};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Str(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Bang,
    Amp,
    Pipe,
    Arrow,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    span: SourceSpan,
}

fn syntax(span: SourceSpan, msg: impl Into<String>) -> ParseError {
    ParseError::new(span, ParseErrorCode::Syntax, msg)
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

/// Splits one line into tokens. Stops at an unquoted `#`.
fn tokenize(line: &str, line_no: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let span = SourceSpan::new(line_no, i + 1);
        let single = match c {
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '!' => Some(Tok::Bang),
            '&' => Some(Tok::Amp),
            '|' => Some(Tok::Pipe),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token { tok, span });
            i += 1;
            continue;
        }
        match c {
            '#' => break,
            ' ' => i += 1,
            '\t' => return Err(syntax(span, "tab characters are not allowed; indent with spaces")),
            '=' => {
                if chars.get(i + 1) == Some(&'>') {
                    out.push(Token { tok: Tok::Arrow, span });
                    i += 2;
                } else {
                    return Err(syntax(span, "expected '=>'"));
                }
            }
            '"' => {
                let mut s = String::new();
                i += 1;
                loop {
                    match chars.get(i) {
                        None => return Err(syntax(span, "unterminated string")),
                        Some('"') => {
                            i += 1;
                            break;
                        }
                        Some('\\') => {
                            let esc = SourceSpan::new(line_no, i + 1);
                            match chars.get(i + 1) {
                                Some('"') => s.push('"'),
                                Some('\\') => s.push('\\'),
                                Some('n') => s.push('\n'),
                                _ => return Err(syntax(esc, "unknown escape; use \\\", \\\\ or \\n")),
                            }
                            i += 2;
                        }
                        Some(&ch) => {
                            s.push(ch);
                            i += 1;
                        }
                    }
                }
                out.push(Token { tok: Tok::Str(s), span });
            }
            c if is_ident_start(c) => {
                let start = i;
                while i < chars.len() && is_ident_char(chars[i]) {
                    i += 1;
                }
                out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), span });
            }
            other => return Err(syntax(span, format!("unexpected character '{other}'"))),
        }
    }
    Ok(out)
}

/// Recursive-descent parser for constraint formulas.
/// Precedence, loosest first: `=>` (right-assoc), `|`, `&`, `!`.
struct ExprParser<'a> {
    toks: &'a [Token],
    pos: usize,
    end: SourceSpan,
    refs: Vec<(String, SourceSpan)>,
}

impl<'a> ExprParser<'a> {
    fn new(toks: &'a [Token], end: SourceSpan) -> Self {
        Self { toks, pos: 0, end, refs: Vec::new() }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> SourceSpan {
        self.toks.get(self.pos).map_or(self.end, |t| t.span)
    }

    fn parse_all(mut self) -> Result<(Expr, Vec<(String, SourceSpan)>), ParseError> {
        if self.toks.is_empty() {
            return Err(syntax(self.end, "empty constraint"));
        }
        let e = self.implies()?;
        if self.pos < self.toks.len() {
            return Err(syntax(self.here(), "unexpected token after expression"));
        }
        Ok((e, self.refs))
    }

    fn implies(&mut self) -> Result<Expr, ParseError> {
        let lhs = self.or()?;
        if self.peek() == Some(&Tok::Arrow) {
            self.pos += 1;
            let rhs = self.implies()?;
            return Ok(Expr::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.and()?;
        while self.peek() == Some(&Tok::Pipe) {
            self.pos += 1;
            lhs = Expr::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&Tok::Amp) {
            self.pos += 1;
            lhs = Expr::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        let span = self.here();
        match self.peek().cloned() {
            Some(Tok::Bang) => {
                self.pos += 1;
                Ok(Expr::not(self.unary()?))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.implies()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(syntax(self.here(), "expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                self.refs.push((name.clone(), span));
                Ok(Expr::Var(name))
            }
            Some(_) => Err(syntax(span, "expected a feature identifier, '!' or '('")),
            None => Err(syntax(span, "unexpected end of constraint")),
        }
    }
}

/// Parses a standalone constraint formula such as `A & !B => C`.
/// Identifiers are not resolved against any model.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let toks = tokenize(text, 1)?;
    let end = SourceSpan::new(1, text.chars().count() + 1);
    ExprParser::new(&toks, end).parse_all().map(|(e, _)| e)
}

enum Frame {
    Feature { indent: usize, id: String },
    Group { indent: usize, index: usize, opened: SourceSpan },
}

impl Frame {
    fn indent(&self) -> usize {
        match self {
            Frame::Feature { indent, .. } | Frame::Group { indent, .. } => *indent,
        }
    }
}

struct Builder {
    features: Vec<Feature>,
    groups: Vec<Group>,
    constraints: Vec<(Expr, Vec<(String, SourceSpan)>)>,
    declared: BTreeMap<String, SourceSpan>,
    stack: Vec<Frame>,
}

/// Parses `.fm` text into a feature model that passes `validate_model`.
pub fn parse(text: &str) -> Result<FeatureModel, ParseError> {
    let mut b = Builder {
        features: Vec::new(),
        groups: Vec::new(),
        constraints: Vec::new(),
        declared: BTreeMap::new(),
        stack: Vec::new(),
    };

    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        let indent = line.chars().take_while(|c| *c == ' ').count();
        let toks = tokenize(line, line_no)?;
        let Some(first) = toks.first() else { continue };
        let end = SourceSpan::new(line_no, line.chars().count() + 1);
        if indent % 2 != 0 {
            return Err(syntax(first.span, "indentation must be a multiple of two spaces"));
        }

        match &first.tok {
            Tok::RBrace => {
                if toks.len() > 1 {
                    return Err(syntax(toks[1].span, "unexpected token after '}'"));
                }
                b.close_group(indent, first.span)?;
            }
            Tok::Ident(kw) if kw == "constraint" => {
                if indent != 0 {
                    return Err(syntax(first.span, "constraints must start at column 1"));
                }
                b.unwind(0)?;
                let parsed = ExprParser::new(&toks[1..], end).parse_all()?;
                b.constraints.push(parsed);
            }
            Tok::Ident(kw) if (kw == "or" || kw == "alt") && toks.get(1).map(|t| &t.tok) == Some(&Tok::LBrace) => {
                if toks.len() > 2 {
                    return Err(syntax(toks[2].span, "unexpected token after '{'"));
                }
                let kind = if kw == "or" { GroupKind::Or } else { GroupKind::Alternative };
                b.attach(indent, first.span)?;
                let parent = match b.stack.last() {
                    Some(Frame::Feature { id, .. }) => id.clone(),
                    Some(Frame::Group { .. }) => {
                        return Err(syntax(
                            first.span,
                            "a group must be nested under a feature, not directly in a group",
                        ))
                    }
                    None => return Err(syntax(first.span, "a group needs a parent feature")),
                };
                b.groups.push(Group { parent, kind, children: Vec::new() });
                b.stack.push(Frame::Group { indent, index: b.groups.len() - 1, opened: first.span });
            }
            Tok::Ident(kw) if kw == "feature" => b.feature_line(indent, &toks)?,
            _ => {
                return Err(syntax(first.span, "expected 'feature', 'or {', 'alt {', '}' or 'constraint'"));
            }
        }
    }

    let eof = SourceSpan::new(text.lines().count().max(1), 1);
    b.unwind(0)?;
    if let Some(Frame::Group { opened, .. }) = b.stack.last() {
        return Err(syntax(*opened, "group is never closed with '}'"));
    }
    if b.features.is_empty() {
        return Err(syntax(eof, "no features declared"));
    }

    let mut constraints = Vec::with_capacity(b.constraints.len());
    for (expr, refs) in b.constraints {
        for (name, span) in refs {
            if !b.declared.contains_key(&name) {
                return Err(ParseError::new(
                    span,
                    ParseErrorCode::UnknownRef,
                    format!("constraint references unknown feature '{name}'"),
                ));
            }
        }
        constraints.push(Constraint::new(expr));
    }

    let model = FeatureModel::new(b.features, b.groups, constraints);
    debug_assert!(validate_model(&model).is_ok(), "{:?}", validate_model(&model));
    Ok(model)
}

impl Builder {
    /// Pops frames until the top sits strictly shallower than `indent`.
    fn unwind(&mut self, indent: usize) -> Result<(), ParseError> {
        while let Some(top) = self.stack.last() {
            if top.indent() < indent {
                break;
            }
            if let Frame::Group { opened, .. } = top {
                return Err(syntax(*opened, "group is not closed with '}' before dedent"));
            }
            self.stack.pop();
        }
        Ok(())
    }

    /// Positions the stack for a new item at `indent`.
    fn attach(&mut self, indent: usize, span: SourceSpan) -> Result<(), ParseError> {
        self.unwind(indent)?;
        match self.stack.last() {
            None if indent != 0 => Err(syntax(span, "unexpected indentation")),
            None if !self.features.is_empty() => Err(syntax(span, "second root feature; a model has exactly one root")),
            Some(top) if top.indent() + 2 != indent => {
                Err(syntax(span, format!("unexpected indentation; expected {} spaces", top.indent() + 2)))
            }
            _ => Ok(()),
        }
    }

    fn close_group(&mut self, indent: usize, span: SourceSpan) -> Result<(), ParseError> {
        while matches!(self.stack.last(), Some(Frame::Feature { indent: i, .. }) if *i > indent) {
            self.stack.pop();
        }
        match self.stack.last() {
            Some(Frame::Group { indent: i, index, opened }) if *i == indent => {
                let (index, opened) = (*index, *opened);
                self.stack.pop();
                let g = &self.groups[index];
                if g.children.len() < 2 {
                    return Err(ParseError::new(
                        opened,
                        ParseErrorCode::BadGroup,
                        format!(
                            "{} group under '{}' has {} child(ren); at least 2 required",
                            g.kind,
                            g.parent,
                            g.children.len()
                        ),
                    ));
                }
                Ok(())
            }
            _ => Err(syntax(span, "'}' does not close an open group at this indentation")),
        }
    }

    fn feature_line(&mut self, indent: usize, toks: &[Token]) -> Result<(), ParseError> {
        let head = toks[0].span;
        let (id, id_span) = match toks.get(1) {
            Some(Token { tok: Tok::Ident(id), span }) => (id.clone(), *span),
            Some(t) => return Err(syntax(t.span, "expected a feature identifier")),
            None => return Err(syntax(head, "expected a feature identifier after 'feature'")),
        };
        let mut rest = &toks[2..];
        let modifier = match rest.first() {
            Some(Token { tok: Tok::Ident(m), span }) => {
                let v = match m.as_str() {
                    "mandatory" => Variability::Mandatory,
                    "optional" => Variability::Optional,
                    _ => return Err(syntax(*span, "expected 'mandatory', 'optional' or a quoted display name")),
                };
                rest = &rest[1..];
                Some((v, *span))
            }
            _ => None,
        };
        let display = match rest.first() {
            Some(Token { tok: Tok::Str(s), .. }) => {
                rest = &rest[1..];
                Some(s.clone())
            }
            _ => None,
        };
        if let Some(t) = rest.first() {
            return Err(syntax(t.span, "unexpected token at end of feature line"));
        }

        self.attach(indent, head)?;
        if let Some(first) = self.declared.get(&id) {
            return Err(ParseError::new(
                id_span,
                ParseErrorCode::DuplicateId,
                format!("feature '{id}' already declared at line {}", first.line),
            ));
        }

        let (parent, variability) = match self.stack.last() {
            None => (None, modifier.map_or(Variability::Mandatory, |m| m.0)),
            Some(Frame::Feature { id: p, .. }) => (Some(p.clone()), modifier.map_or(Variability::Mandatory, |m| m.0)),
            Some(Frame::Group { index, .. }) => {
                if let Some((_, span)) = modifier {
                    return Err(syntax(span, "group members take no 'mandatory'/'optional' modifier"));
                }
                let index = *index;
                self.groups[index].children.push(id.clone());
                (Some(self.groups[index].parent.clone()), Variability::Grouped)
            }
        };
        self.declared.insert(id.clone(), id_span);
        self.features.push(Feature {
            display_name: display.unwrap_or_else(|| id.clone()),
            id: id.clone(),
            variability,
            parent,
        });
        self.stack.push(Frame::Feature { indent, id });
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err(text: &str) -> ParseError {
        parse(text).expect_err("expected a parse error")
    }

    #[test]
    fn single_root() {
        let m = parse("feature Root mandatory").unwrap();
        assert_eq!(m.features, vec![Feature::root("Root")]);
    }

    #[test]
    fn nested_groups_and_constraints() {
        let text = "\
# demo
feature R mandatory \"The Root\"
  feature A optional   # trailing comment
  alt {
    feature B
      feature B1 optional
    feature C \"Sea\"
  }
  or {
    feature X
    feature Y
  }
constraint A => B
constraint !(X & Y) | A
";
        let m = parse(text).unwrap();
        assert!(validate_model(&m).is_ok());
        assert_eq!(m.feature("R").unwrap().display_name, "The Root");
        assert_eq!(m.feature("C").unwrap().display_name, "Sea");
        assert_eq!(m.feature("B1").unwrap().parent.as_deref(), Some("B"));
        assert_eq!(m.groups.len(), 2);
        assert_eq!(m.groups[0].children, vec!["B", "C"]);
        assert_eq!(m.constraints[1].formula.to_string(), "!(X & Y) | A");
    }

    #[test]
    fn precedence_and_associativity() {
        let e = parse_expr("A | B & !C => D => E").unwrap();
        assert_eq!(e.to_string(), "(A | (B & !C)) => (D => E)");
        let e = parse_expr("A & B & C").unwrap();
        assert_eq!(e, Expr::and(Expr::and(Expr::var("A"), Expr::var("B")), Expr::var("C")));
    }

    #[test]
    fn one_child_alt_is_bad_group_at_opener() {
        let e = err("feature R\n  alt {\n    feature B\n  }\n");
        assert_eq!(e.code, ParseErrorCode::BadGroup);
        assert_eq!(e.span, SourceSpan::new(2, 3));
    }

    #[test]
    fn duplicate_ids() {
        let e = err("feature R\n  feature A optional\n  feature A optional\n");
        assert_eq!(e.code, ParseErrorCode::DuplicateId);
        assert_eq!(e.span, SourceSpan::new(3, 11));
    }

    #[test]
    fn unknown_constraint_reference() {
        let e = err("feature R\n  feature A optional\nconstraint A => Ghost\n");
        assert_eq!(e.code, ParseErrorCode::UnknownRef);
        assert_eq!(e.span, SourceSpan::new(3, 17));
    }

    #[test]
    fn forward_references_in_constraints_resolve() {
        assert!(parse("constraint R\nfeature R\n").is_ok());
    }

    #[test]
    fn syntax_errors() {
        let cases = [
            ("feature R\n   feature A optional\n", 2),
            ("feature R\n    feature A optional\n", 2),
            ("feature R\nfeature S\n", 2),
            ("feature R\n  alt {\n    feature A\n    feature B\n", 2),
            ("feature R\n}\n", 2),
            ("feature R\n  alt {\n    feature A optional\n    feature B\n  }\n", 3),
            ("feature R\n\tfeature A\n", 2),
            ("feature R\nconstraint A =\n", 2),
            ("feature R\nconstraint (R\n", 2),
            ("feature R bogus\n", 1),
            ("feature R \"open\n", 1),
            ("  feature R\n", 1),
            ("widget R\n", 1),
            ("", 1),
            ("feature R\n  alt {\n    alt {\n", 3),
        ];
        for (text, line) in cases {
            let e = err(text);
            assert_eq!(e.code, ParseErrorCode::Syntax, "{text:?} -> {e}");
            assert_eq!(e.span.line, line, "{text:?} -> {e}");
            assert!(!e.message.is_empty());
        }
    }

    #[test]
    fn string_escapes() {
        let m = parse("feature R \"a \\\"b\\\" \\\\ # not a comment\"\n").unwrap();
        assert_eq!(m.features[0].display_name, "a \"b\" \\ # not a comment");
    }

    #[test]
    fn crlf_and_blank_lines() {
        let m = parse("feature R\r\n\r\n  feature A optional\r\n").unwrap();
        assert_eq!(m.len(), 2);
    }
}
