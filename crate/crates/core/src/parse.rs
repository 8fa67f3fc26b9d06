//! Reader for the `.lp` program format.
//!
//! ```text
//! program   ::= statement*
//! statement ::= rule "." | "?-" body "."
//! rule      ::= atom | atom ":-" body | ":-" body
//! body      ::= literal ("," literal)*
//! literal   ::= atom | "not" atom
//! atom      ::= ident | ident "(" term ("," term)* ")"
//! term      ::= ident | variable | integer
//! ident     ::= [a-z][A-Za-z0-9_]*
//! variable  ::= [A-Z_][A-Za-z0-9_]*
//! integer   ::= "-"? [0-9]+
//! ```
//!
//! Whitespace is free-form and `%` starts a comment running to the end of the
//! line. Intervals such as `1..3` are rejected.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::atom::{AtomTable, Literal};
use crate::nonground::{NgAtom, NgLiteral, NonGroundRule, Term};
use crate::program::{Program, Rule};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedEnd,
    Expected(&'static str),
    IntervalNotAllowed,
    VariableInGroundProgram(String),
    EmptyConstraint,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: ", self.line, self.column)?;
        match &self.kind {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character `{c}`"),
            ParseErrorKind::UnexpectedEnd => f.write_str("unexpected end of input"),
            ParseErrorKind::Expected(what) => write!(f, "expected {what}"),
            ParseErrorKind::IntervalNotAllowed => {
                f.write_str("interval terms are not allowed; list each constant separately")
            }
            ParseErrorKind::VariableInGroundProgram(v) => {
                write!(f, "variable `{v}` in a grounded program")
            }
            ParseErrorKind::EmptyConstraint => f.write_str("constraint with an empty body"),
        }
    }
}

impl core::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Var(String),
    Int(String),
    LParen,
    RParen,
    Comma,
    Dot,
    DotDot,
    If,
    Query,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, column, kind| ParseError { line, column, kind };
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => advance(1, &mut i, &mut col),
            '%' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '(' => {
                out.push(Token { tok: Tok::LParen, line: tl, column: tc });
                advance(1, &mut i, &mut col);
            }
            ')' => {
                out.push(Token { tok: Tok::RParen, line: tl, column: tc });
                advance(1, &mut i, &mut col);
            }
            ',' => {
                out.push(Token { tok: Tok::Comma, line: tl, column: tc });
                advance(1, &mut i, &mut col);
            }
            '.' => {
                if chars.get(i + 1) == Some(&'.') {
                    out.push(Token { tok: Tok::DotDot, line: tl, column: tc });
                    advance(2, &mut i, &mut col);
                } else {
                    out.push(Token { tok: Tok::Dot, line: tl, column: tc });
                    advance(1, &mut i, &mut col);
                }
            }
            ':' | '?' => {
                if chars.get(i + 1) != Some(&'-') {
                    return Err(err(tl, tc, ParseErrorKind::UnexpectedChar(c)));
                }
                let tok = if c == ':' { Tok::If } else { Tok::Query };
                out.push(Token { tok, line: tl, column: tc });
                advance(2, &mut i, &mut col);
            }
            c if c.is_ascii_digit() || (c == '-' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) => {
                let start = i;
                advance(1, &mut i, &mut col);
                while i < chars.len() && chars[i].is_ascii_digit() {
                    advance(1, &mut i, &mut col);
                }
                let text: String = chars[start..i].iter().collect();
                out.push(Token { tok: Tok::Int(text), line: tl, column: tc });
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    advance(1, &mut i, &mut col);
                }
                let text: String = chars[start..i].iter().collect();
                let tok = if c.is_ascii_lowercase() { Tok::Ident(text) } else { Tok::Var(text) };
                out.push(Token { tok, line: tl, column: tc });
            }
            other => return Err(err(tl, tc, ParseErrorKind::UnexpectedChar(other))),
        }
    }
    Ok(out)
}

/// A parsed source file that may still contain variables.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NonGroundProgram {
    pub rules: Vec<NonGroundRule>,
    /// `(line, column)` of each rule's first token.
    pub positions: Vec<(usize, usize)>,
    pub query: Option<Vec<NgLiteral>>,
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn new(src: &str) -> Result<Self, ParseError> {
        let toks = lex(src)?;
        let end = src.lines().enumerate().last().map(|(i, l)| (i + 1, l.chars().count() + 1)).unwrap_or((1, 1));
        Ok(Parser { toks, pos: 0, end })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|t| &t.tok)
    }

    fn error_here(&self, kind: ParseErrorKind) -> ParseError {
        match self.toks.get(self.pos) {
            Some(t) => ParseError { line: t.line, column: t.column, kind },
            None => ParseError { line: self.end.0, column: self.end.1, kind: ParseErrorKind::UnexpectedEnd },
        }
    }

    fn expect(&mut self, tok: Tok, what: &'static str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error_here(ParseErrorKind::Expected(what)))
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn position(&self) -> (usize, usize) {
        self.toks.get(self.pos).map(|t| (t.line, t.column)).unwrap_or(self.end)
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let term = match self.peek() {
            Some(Tok::Ident(s)) => Term::Const(s.clone()),
            Some(Tok::Int(s)) => Term::Const(s.clone()),
            Some(Tok::Var(s)) => Term::Var(s.clone()),
            _ => return Err(self.error_here(ParseErrorKind::Expected("a term"))),
        };
        self.pos += 1;
        if self.peek() == Some(&Tok::DotDot) {
            return Err(self.error_here(ParseErrorKind::IntervalNotAllowed));
        }
        Ok(term)
    }

    fn atom(&mut self) -> Result<NgAtom, ParseError> {
        let name = match self.peek() {
            Some(Tok::Ident(s)) => s.clone(),
            _ => return Err(self.error_here(ParseErrorKind::Expected("an atom"))),
        };
        self.pos += 1;
        let mut args = Vec::new();
        if self.peek() == Some(&Tok::LParen) {
            self.pos += 1;
            args.push(self.term()?);
            while self.peek() == Some(&Tok::Comma) {
                self.pos += 1;
                args.push(self.term()?);
            }
            self.expect(Tok::RParen, "`)`")?;
        }
        Ok(NgAtom::new(name, args))
    }

    fn literal(&mut self) -> Result<NgLiteral, ParseError> {
        let negated = matches!(self.peek(), Some(Tok::Ident(s)) if s == "not")
            && matches!(self.peek2(), Some(Tok::Ident(_)));
        if negated {
            self.pos += 1;
        }
        Ok(NgLiteral { atom: self.atom()?, negated })
    }

    fn body(&mut self) -> Result<Vec<NgLiteral>, ParseError> {
        let mut lits = alloc::vec![self.literal()?];
        while self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            lits.push(self.literal()?);
        }
        Ok(lits)
    }

    fn program(&mut self) -> Result<NonGroundProgram, ParseError> {
        let mut out = NonGroundProgram::default();
        while !self.at_end() {
            let start = self.position();
            match self.peek() {
                Some(Tok::Query) => {
                    self.pos += 1;
                    let body = self.body()?;
                    self.expect(Tok::Dot, "`.`")?;
                    out.query.get_or_insert_with(Vec::new).extend(body);
                }
                Some(Tok::If) => {
                    self.pos += 1;
                    if self.peek() == Some(&Tok::Dot) {
                        return Err(self.error_here(ParseErrorKind::EmptyConstraint));
                    }
                    let body = self.body()?;
                    self.expect(Tok::Dot, "`.`")?;
                    out.rules.push(NonGroundRule::new(None, body));
                    out.positions.push(start);
                }
                _ => {
                    let head = self.atom()?;
                    let body = if self.peek() == Some(&Tok::If) {
                        self.pos += 1;
                        let body = self.body()?;
                        self.expect(Tok::Dot, "`.`")?;
                        body
                    } else {
                        self.expect(Tok::Dot, "`.` or `:-`")?;
                        Vec::new()
                    };
                    out.rules.push(NonGroundRule::new(Some(head), body));
                    out.positions.push(start);
                }
            }
        }
        Ok(out)
    }
}

/// Parses a source that may contain variables.
pub fn parse_nonground(src: &str) -> Result<NonGroundProgram, ParseError> {
    Parser::new(src)?.program()
}

/// Parses a grounded program; variables are rejected with their position.
pub fn parse_program(src: &str) -> Result<Program, ParseError> {
    let parsed = parse_nonground(src)?;
    let mut program = Program::new();
    for (rule, &(line, column)) in parsed.rules.iter().zip(&parsed.positions) {
        if let Some(v) = rule.variables().into_iter().next() {
            return Err(ParseError { line, column, kind: ParseErrorKind::VariableInGroundProgram(v) });
        }
        let head = rule.head.as_ref().map(|h| program.intern(&h.canonical()));
        let body = intern_literals(&rule.body, program.atoms_mut());
        program.add_rule(Rule::new(head, body));
    }
    if let Some(q) = &parsed.query {
        if let Some(v) = q.iter().flat_map(|l| l.atom.variables()).next() {
            return Err(ParseError {
                line: 1,
                column: 1,
                kind: ParseErrorKind::VariableInGroundProgram(String::from(v)),
            });
        }
        program.query = Some(intern_literals(q, program.atoms_mut()));
    }
    Ok(program)
}

fn intern_literals(lits: &[NgLiteral], atoms: &mut AtomTable) -> Vec<Literal> {
    let mut out: Vec<Literal> = Vec::with_capacity(lits.len());
    for l in lits {
        let lit = Literal { atom: atoms.intern(&l.atom.canonical()), negated: l.negated };
        if !out.contains(&lit) {
            out.push(lit);
        }
    }
    out
}

/// Parses `p, not q` (an optional leading `?-` and trailing `.` are accepted).
pub fn parse_literal_list(src: &str, atoms: &mut AtomTable) -> Result<Vec<Literal>, ParseError> {
    let mut p = Parser::new(src)?;
    if p.peek() == Some(&Tok::Query) {
        p.pos += 1;
    }
    let body = p.body()?;
    if p.peek() == Some(&Tok::Dot) {
        p.pos += 1;
    }
    if !p.at_end() {
        return Err(p.error_here(ParseErrorKind::Expected("`,` or end of query")));
    }
    if let Some(v) = body.iter().flat_map(|l| l.atom.variables()).next() {
        return Err(ParseError { line: 1, column: 1, kind: ParseErrorKind::VariableInGroundProgram(String::from(v)) });
    }
    Ok(intern_literals(&body, atoms))
}
