//! `.hobo` problem sources and the JSON term-list format.
//!
//! ```text
//! problem := { decl | stmt } ;
//! decl    := "var" IDENT "[" int { "," int } "]" "as" STRING ;
//! stmt    := "H" "+=" expr ;
//! expr    := term { ("+" | "-") term } ;
//! term    := factor { "*" factor } ;
//! factor  := [ "-" ] base [ "**" uint ] ;
//! base    := NUMBER | IDENT "[" int { "," int } "]" | "(" expr ")" ;
//! ```
//!
//! `#` starts a comment. Comments beginning with `#!` carry metadata that the
//! grammar ignores:
//!
//! ```text
//! #! name <text>
//! #! description <text>
//! #! value <label> = <expr>     integer read-out printed with each result
//! #! grid "<pattern>"           variable array printed as a 0/1 grid
//! ```

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::compile::{compile, CompileError, HoboTensor};
use crate::expr::{Polynomial, Symbols, VarArray};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct SourceLocation {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourceLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("{loc}: syntax error: {msg}")]
    Syntax { loc: SourceLocation, msg: String },
    #[error("{loc}: undeclared variable array {name:?}")]
    Undeclared { loc: SourceLocation, name: String },
    #[error("{loc}: index {index:?} is out of bounds for {name}{shape:?}")]
    IndexOutOfBounds {
        loc: SourceLocation,
        name: String,
        index: Vec<usize>,
        shape: Vec<usize>,
    },
    #[error("{loc}: exponent must be a non-negative integer, found {found}")]
    Exponent { loc: SourceLocation, found: String },
    #[error("{loc}: {msg}")]
    Declaration { loc: SourceLocation, msg: String },
    #[error("malformed term list: {0}")]
    TermList(String),
}

impl ParseError {
    pub fn location(&self) -> Option<SourceLocation> {
        match self {
            Self::Syntax { loc, .. }
            | Self::Undeclared { loc, .. }
            | Self::IndexOutOfBounds { loc, .. }
            | Self::Exponent { loc, .. }
            | Self::Declaration { loc, .. } => Some(*loc),
            Self::TermList(_) => None,
        }
    }
}

/// One `var` declaration.
#[derive(Debug, Clone, PartialEq)]
pub struct Declaration {
    pub ident: String,
    pub shape: Vec<usize>,
    pub pattern: String,
    pub array: VarArray,
}

/// A parsed problem: declarations, the reduced objective and its metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub name: Option<String>,
    pub description: Option<String>,
    pub declarations: Vec<Declaration>,
    pub symbols: Symbols,
    pub objective: Polynomial,
    /// Labelled integer read-outs, in source order.
    pub values: Vec<(String, Polynomial)>,
    /// Name patterns to print as grids, in source order.
    pub grids: Vec<String>,
}

impl ProblemSpec {
    pub fn compile(&self) -> Result<HoboTensor, CompileError> {
        compile(&self.objective, self.symbols.len())
    }

    pub fn to_term_list(&self) -> TermListDoc {
        TermListDoc {
            num_vars: self.symbols.len(),
            terms: self
                .objective
                .terms()
                .filter(|(m, _)| !m.is_one())
                .map(|(m, c)| TermEntry {
                    vars: m.vars().to_vec(),
                    coeff: c,
                })
                .collect(),
            constant: self.objective.constant_term(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermEntry {
    pub vars: Vec<usize>,
    pub coeff: f64,
}

/// JSON term list. `offset` is accepted in place of `constant` so compiled
/// exports read back in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermListDoc {
    pub num_vars: usize,
    pub terms: Vec<TermEntry>,
    #[serde(default, alias = "offset")]
    pub constant: f64,
}

pub fn parse_term_list(doc: &str) -> Result<ProblemSpec, ParseError> {
    let doc: TermListDoc =
        serde_json::from_str(doc).map_err(|e| ParseError::TermList(e.to_string()))?;
    term_list_to_problem(&doc)
}

pub fn term_list_to_problem(doc: &TermListDoc) -> Result<ProblemSpec, ParseError> {
    if !doc.constant.is_finite() {
        return Err(ParseError::TermList("constant is not finite".into()));
    }
    for (k, t) in doc.terms.iter().enumerate() {
        if let Some(w) = t.vars.windows(2).find(|w| w[0] >= w[1]) {
            let what = if w[0] == w[1] {
                "duplicated"
            } else {
                "unsorted"
            };
            return Err(ParseError::TermList(format!(
                "term {k}: {what} vars {:?}",
                t.vars
            )));
        }
        if let Some(&v) = t.vars.iter().find(|&&v| v >= doc.num_vars) {
            return Err(ParseError::TermList(format!(
                "term {k}: var {v} is not below num_vars = {}",
                doc.num_vars
            )));
        }
        if !t.coeff.is_finite() {
            return Err(ParseError::TermList(format!(
                "term {k}: coefficient is not finite"
            )));
        }
    }
    let mut symbols = Symbols::new();
    let mut declarations = Vec::new();
    if doc.num_vars > 0 {
        let array = symbols
            .var_array(&[doc.num_vars], "x{}")
            .map_err(|e| ParseError::TermList(e.to_string()))?;
        declarations.push(Declaration {
            ident: "x".into(),
            shape: vec![doc.num_vars],
            pattern: "x{}".into(),
            array,
        });
    }
    let mut objective = Polynomial::from_terms(doc.terms.iter().map(|t| (t.vars.clone(), t.coeff)));
    objective += doc.constant;
    Ok(ProblemSpec {
        name: None,
        description: None,
        declarations,
        symbols,
        objective,
        values: Vec::new(),
        grids: Vec::new(),
    })
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number { value: f64, text: String },
    Str(String),
    LBracket,
    RBracket,
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
    StarStar,
    PlusEq,
    Directive(String),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier {s:?}"),
            Tok::Number { text, .. } => write!(f, "number {text}"),
            Tok::Str(s) => write!(f, "string {s:?}"),
            Tok::LBracket => write!(f, "'['"),
            Tok::RBracket => write!(f, "']'"),
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
            Tok::Comma => write!(f, "','"),
            Tok::Plus => write!(f, "'+'"),
            Tok::Minus => write!(f, "'-'"),
            Tok::Star => write!(f, "'*'"),
            Tok::StarStar => write!(f, "'**'"),
            Tok::PlusEq => write!(f, "'+='"),
            Tok::Directive(_) => write!(f, "metadata comment"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl Lexer<'_> {
    fn loc(&self) -> SourceLocation {
        SourceLocation {
            line: self.line,
            column: self.column,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn rest_of_line(&mut self) -> String {
        let mut s = String::new();
        while let Some(&c) = self.chars.peek() {
            if c == '\n' {
                break;
            }
            s.push(c);
            self.bump();
        }
        s
    }

    fn tokens(mut self) -> Result<Vec<(Tok, SourceLocation)>, ParseError> {
        let mut out = Vec::new();
        loop {
            let loc = self.loc();
            let Some(&c) = self.chars.peek() else {
                out.push((Tok::Eof, loc));
                return Ok(out);
            };
            let single = |t: Tok| Some(t);
            let tok = match c {
                c if c.is_whitespace() => {
                    self.bump();
                    None
                }
                '#' => {
                    self.bump();
                    if self.chars.peek() == Some(&'!') {
                        self.bump();
                        let text_loc = self.loc();
                        out.push((Tok::Directive(self.rest_of_line()), text_loc));
                    } else {
                        self.rest_of_line();
                    }
                    None
                }
                '[' => single(Tok::LBracket),
                ']' => single(Tok::RBracket),
                '(' => single(Tok::LParen),
                ')' => single(Tok::RParen),
                ',' => single(Tok::Comma),
                '-' => single(Tok::Minus),
                '+' => {
                    self.bump();
                    if self.chars.peek() == Some(&'=') {
                        self.bump();
                        out.push((Tok::PlusEq, loc));
                    } else {
                        out.push((Tok::Plus, loc));
                    }
                    continue;
                }
                '*' => {
                    self.bump();
                    if self.chars.peek() == Some(&'*') {
                        self.bump();
                        out.push((Tok::StarStar, loc));
                    } else {
                        out.push((Tok::Star, loc));
                    }
                    continue;
                }
                '"' => {
                    self.bump();
                    let mut s = String::new();
                    loop {
                        match self.bump() {
                            Some('"') => break,
                            Some('\n') | None => {
                                return Err(ParseError::Syntax {
                                    loc,
                                    msg: "unterminated string".into(),
                                })
                            }
                            Some(ch) => s.push(ch),
                        }
                    }
                    out.push((Tok::Str(s), loc));
                    continue;
                }
                c if c.is_ascii_digit() || c == '.' => {
                    let text = self.number_text();
                    let value = text.parse::<f64>().map_err(|_| ParseError::Syntax {
                        loc,
                        msg: format!("malformed number {text:?}"),
                    })?;
                    out.push((Tok::Number { value, text }, loc));
                    continue;
                }
                c if c.is_alphabetic() || c == '_' => {
                    let mut s = String::new();
                    while let Some(&ch) = self.chars.peek() {
                        if !(ch.is_alphanumeric() || ch == '_') {
                            break;
                        }
                        s.push(ch);
                        self.bump();
                    }
                    out.push((Tok::Ident(s), loc));
                    continue;
                }
                other => {
                    return Err(ParseError::Syntax {
                        loc,
                        msg: format!("unexpected character {other:?}"),
                    })
                }
            };
            if let Some(t) = tok {
                self.bump();
                out.push((t, loc));
            }
        }
    }

    fn number_text(&mut self) -> String {
        let mut s = String::new();
        let take_digits = |lx: &mut Self, s: &mut String| {
            while let Some(&d) = lx.chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                s.push(d);
                lx.bump();
            }
        };
        take_digits(self, &mut s);
        if self.chars.peek() == Some(&'.') {
            s.push('.');
            self.bump();
            take_digits(self, &mut s);
        }
        if matches!(self.chars.peek(), Some('e' | 'E')) {
            s.push('e');
            self.bump();
            if let Some(&sign @ ('+' | '-')) = self.chars.peek() {
                s.push(sign);
                self.bump();
            }
            take_digits(self, &mut s);
        }
        s
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, SourceLocation)>, ParseError> {
    Lexer {
        chars: text.chars().peekable(),
        line: 1,
        column: 1,
    }
    .tokens()
}

struct Parser<'s> {
    toks: &'s [(Tok, SourceLocation)],
    pos: usize,
    arrays: &'s BTreeMap<String, Declaration>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn loc(&self) -> SourceLocation {
        self.toks[self.pos].1
    }

    fn next(&mut self) -> (Tok, SourceLocation) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            loc: self.loc(),
            msg: format!("expected {wanted}, found {}", self.peek()),
        })
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> Result<SourceLocation, ParseError> {
        if *self.peek() == tok {
            Ok(self.next().1)
        } else {
            self.unexpected(wanted)
        }
    }

    fn uint(&mut self) -> Result<(usize, SourceLocation), ParseError> {
        match self.peek().clone() {
            Tok::Number { text, .. } if text.bytes().all(|b| b.is_ascii_digit()) => {
                let (_, loc) = self.next();
                let v = text.parse().map_err(|_| ParseError::Syntax {
                    loc,
                    msg: format!("integer {text} is too large"),
                })?;
                Ok((v, loc))
            }
            _ => self.unexpected("a non-negative integer"),
        }
    }

    fn index_list(&mut self) -> Result<Vec<usize>, ParseError> {
        self.expect(Tok::LBracket, "'['")?;
        let mut ix = vec![self.uint()?.0];
        while *self.peek() == Tok::Comma {
            self.next();
            ix.push(self.uint()?.0);
        }
        self.expect(Tok::RBracket, "']'")?;
        Ok(ix)
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.next();
                    acc += self.term()?;
                }
                Tok::Minus => {
                    self.next();
                    acc -= self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            self.next();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, ParseError> {
        let negate = if *self.peek() == Tok::Minus {
            self.next();
            true
        } else {
            false
        };
        let mut base = self.base()?;
        if *self.peek() == Tok::StarStar {
            self.next();
            let loc = self.loc();
            let exp = match self.peek().clone() {
                Tok::Number { text, .. } if text.bytes().all(|b| b.is_ascii_digit()) => {
                    self.next();
                    text.parse::<u32>()
                        .map_err(|_| ParseError::Exponent { loc, found: text })?
                }
                Tok::Number { text, .. } => return Err(ParseError::Exponent { loc, found: text }),
                Tok::Minus => {
                    let mut found = "-".to_string();
                    self.next();
                    if let Tok::Number { text, .. } = self.peek() {
                        found.push_str(text);
                    }
                    return Err(ParseError::Exponent { loc, found });
                }
                other => {
                    return Err(ParseError::Exponent {
                        loc,
                        found: other.to_string(),
                    })
                }
            };
            base = base.pow(exp);
        }
        Ok(if negate { -base } else { base })
    }

    fn base(&mut self) -> Result<Polynomial, ParseError> {
        match self.peek().clone() {
            Tok::Number { value, .. } => {
                self.next();
                Ok(Polynomial::constant(value))
            }
            Tok::LParen => {
                self.next();
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let (_, loc) = self.next();
                let Some(decl) = self.arrays.get(&name) else {
                    return Err(ParseError::Undeclared { loc, name });
                };
                let index = self.index_list()?;
                decl.array
                    .try_at(&index)
                    .map_err(|_| ParseError::IndexOutOfBounds {
                        loc,
                        name,
                        index,
                        shape: decl.shape.clone(),
                    })
            }
            _ => self.unexpected("a number, variable or '('"),
        }
    }
}

enum Meta {
    Value {
        label: String,
        expr: String,
        loc: SourceLocation,
    },
}

pub fn parse_problem(text: &str) -> Result<ProblemSpec, ParseError> {
    let toks = lex(text)?;
    let mut symbols = Symbols::new();
    let mut arrays: BTreeMap<String, Declaration> = BTreeMap::new();
    let mut order = Vec::new();
    let mut objective = Polynomial::zero();
    let mut name = None;
    let mut description = None;
    let mut grids = Vec::new();
    let mut pending = Vec::new();

    let mut pos = 0;
    loop {
        let mut p = Parser {
            toks: &toks,
            pos,
            arrays: &arrays,
        };
        let (tok, loc) = p.next();
        match tok {
            Tok::Eof => break,
            Tok::Directive(raw) => {
                let body = raw.trim();
                let (key, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
                let rest = rest.trim();
                match key {
                    "name" => name = Some(rest.to_string()),
                    "description" => description = Some(rest.to_string()),
                    "grid" => grids.push(rest.trim_matches('"').to_string()),
                    "value" => {
                        let Some((label, expr)) = rest.split_once('=') else {
                            return Err(ParseError::Syntax {
                                loc,
                                msg: "value directive needs `<label> = <expr>`".into(),
                            });
                        };
                        let eq = raw.find('=').expect("value directive has '='");
                        pending.push(Meta::Value {
                            label: label.trim().to_string(),
                            expr: expr.to_string(),
                            loc: SourceLocation {
                                line: loc.line,
                                column: loc.column + raw[..=eq].chars().count(),
                            },
                        });
                    }
                    _ => {}
                }
                pos = p.pos;
            }
            Tok::Ident(kw) if kw == "var" => {
                let (ident, ident_loc) = match p.next() {
                    (Tok::Ident(s), l) if s != "H" && s != "var" && s != "as" => (s, l),
                    (t, l) => {
                        return Err(ParseError::Syntax {
                            loc: l,
                            msg: format!("expected array name, found {t}"),
                        })
                    }
                };
                let shape = p.index_list()?;
                match p.next() {
                    (Tok::Ident(s), _) if s == "as" => {}
                    (t, l) => {
                        return Err(ParseError::Syntax {
                            loc: l,
                            msg: format!("expected 'as', found {t}"),
                        })
                    }
                }
                let pattern = match p.next() {
                    (Tok::Str(s), _) => s,
                    (t, l) => {
                        return Err(ParseError::Syntax {
                            loc: l,
                            msg: format!("expected name pattern string, found {t}"),
                        })
                    }
                };
                pos = p.pos;
                if arrays.contains_key(&ident) {
                    return Err(ParseError::Declaration {
                        loc: ident_loc,
                        msg: format!("array {ident:?} is declared twice"),
                    });
                }
                let array =
                    symbols
                        .var_array(&shape, &pattern)
                        .map_err(|e| ParseError::Declaration {
                            loc: ident_loc,
                            msg: e.to_string(),
                        })?;
                order.push(ident.clone());
                arrays.insert(
                    ident.clone(),
                    Declaration {
                        ident,
                        shape,
                        pattern,
                        array,
                    },
                );
            }
            Tok::Ident(h) if h == "H" => {
                p.expect(Tok::PlusEq, "'+='")?;
                objective += p.expr()?;
                pos = p.pos;
            }
            other => {
                return Err(ParseError::Syntax {
                    loc,
                    msg: format!("expected 'var', 'H' or end of input, found {other}"),
                })
            }
        }
    }

    let mut values = Vec::new();
    for Meta::Value { label, expr, loc } in pending {
        let mut toks = lex(&expr).map_err(|e| relocate(e, loc))?;
        // Lexed positions are relative to the text after '='.
        for (_, l) in &mut toks {
            l.column += loc.column - 1;
            l.line = loc.line;
        }
        let mut p = Parser {
            toks: &toks,
            pos: 0,
            arrays: &arrays,
        };
        let e = p.expr()?;
        if *p.peek() != Tok::Eof {
            return p.unexpected("end of value expression");
        }
        values.push((label, e));
    }

    Ok(ProblemSpec {
        name,
        description,
        declarations: order
            .into_iter()
            .map(|k| arrays.remove(&k).expect("declared"))
            .collect(),
        symbols,
        objective,
        values,
        grids,
    })
}

fn relocate(e: ParseError, at: SourceLocation) -> ParseError {
    match e {
        ParseError::Syntax { msg, .. } => ParseError::Syntax { loc: at, msg },
        other => other,
    }
}
