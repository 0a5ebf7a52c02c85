//! Parsers for module files and terms.
//!
//! Module files follow the functional-module surface syntax:
//!
//! ```text
//! fmod NAT is
//!   sort Nat .
//!   op 0 : -> Nat .
//!   op suc : Nat -> Nat .
//!   op _+_ : Nat Nat -> Nat [assoc comm] .
//! endfm
//! ```
//!
//! Declarations are whitespace-insensitive and `.`-terminated. Operators
//! declared with mixfix underscores (`_+_`) are referenced by the stripped
//! name (`+`). Terms use prefix syntax, `op(arg,...)`, with variables written
//! `Name:Sort`.

use std::fmt;

use thiserror::Error;

use crate::sig::{AxiomSet, Signature, Sort, Symbol};
use crate::term::Term;

/// A parse failure with its source position.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl ParseError {
    fn new(pos: (usize, usize), msg: impl fmt::Display) -> Self {
        ParseError {
            line: pos.0,
            col: pos.1,
            msg: msg.to_string(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Colon,
    LBracket,
    RBracket,
    Dot,
    Lt,
    Arrow,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Colon => write!(f, "`:`"),
            Tok::LBracket => write!(f, "`[`"),
            Tok::RBracket => write!(f, "`]`"),
            Tok::Dot => write!(f, "`.`"),
            Tok::Lt => write!(f, "`<`"),
            Tok::Arrow => write!(f, "`->`"),
        }
    }
}

fn is_punct(c: char) -> bool {
    matches!(c, '(' | ')' | ',' | ':' | '[' | ']' | '.' | '<')
}

fn lex(text: &str) -> Result<Vec<(Tok, (usize, usize))>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let pos = (line, col);
        let bump = |c: char, line: &mut usize, col: &mut usize| {
            if c == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
        };
        if c.is_whitespace() {
            chars.next();
            bump(c, &mut line, &mut col);
            continue;
        }
        if is_punct(c) {
            chars.next();
            bump(c, &mut line, &mut col);
            let tok = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                ':' => Tok::Colon,
                '[' => Tok::LBracket,
                ']' => Tok::RBracket,
                '.' => Tok::Dot,
                '<' => Tok::Lt,
                _ => unreachable!(),
            };
            out.push((tok, pos));
            continue;
        }
        // `->` is its own token; any other run of plain characters is an
        // identifier.
        let mut ident = String::new();
        while let Some(&c) = chars.peek() {
            if c.is_whitespace() || is_punct(c) {
                break;
            }
            if c == '-' {
                let mut ahead = chars.clone();
                ahead.next();
                if ahead.peek() == Some(&'>') {
                    break;
                }
            }
            ident.push(c);
            chars.next();
            bump(c, &mut line, &mut col);
        }
        if ident.is_empty() {
            // The run starts with `->`.
            chars.next();
            chars.next();
            bump('-', &mut line, &mut col);
            bump('>', &mut line, &mut col);
            out.push((Tok::Arrow, pos));
        } else {
            out.push((Tok::Ident(ident), pos));
        }
    }
    Ok(out)
}

struct Cursor {
    toks: Vec<(Tok, (usize, usize))>,
    at: usize,
    end: (usize, usize),
}

impl Cursor {
    fn new(text: &str) -> Result<Self, ParseError> {
        let toks = lex(text)?;
        let lines = text.lines().count().max(1);
        let end = (lines, text.lines().last().map_or(1, |l| l.chars().count() + 1));
        Ok(Cursor { toks, at: 0, end })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> (usize, usize) {
        self.toks.get(self.at).map_or(self.end, |&(_, p)| p)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(t, _)| t.clone());
        if t.is_some() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok) -> Result<(), ParseError> {
        let pos = self.pos();
        match self.next() {
            Some(t) if &t == want => Ok(()),
            Some(t) => Err(ParseError::new(pos, format!("expected {want}, found {t}"))),
            None => Err(ParseError::new(pos, format!("expected {want}, found end of input"))),
        }
    }

    /// An identifier; `<` is accepted as the identifier `<` so operators
    /// stripped from `_<_` stay reachable.
    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        let pos = self.pos();
        match self.next() {
            Some(Tok::Ident(s)) => Ok(s),
            Some(Tok::Lt) => Ok("<".to_string()),
            Some(t) => Err(ParseError::new(pos, format!("expected {what}, found {t}"))),
            None => Err(ParseError::new(pos, format!("expected {what}, found end of input"))),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        let pos = self.pos();
        let id = self.ident(&format!("`{kw}`"))?;
        if id == kw {
            Ok(())
        } else {
            Err(ParseError::new(pos, format!("expected `{kw}`, found `{id}`")))
        }
    }
}

/// Strips mixfix underscores from an operator name.
fn strip_mixfix(name: &str) -> String {
    name.replace('_', "")
}

/// Parses a module file into a signature.
pub fn parse_signature(text: &str) -> Result<Signature, ParseError> {
    let mut cur = Cursor::new(text)?;
    cur.keyword("fmod")?;
    cur.ident("module name")?;
    cur.keyword("is")?;

    let mut b = Signature::builder();
    loop {
        let pos = cur.pos();
        let kw = cur.ident("declaration or `endfm`")?;
        match kw.as_str() {
            "endfm" => break,
            "sort" | "sorts" => {
                let mut any = false;
                while !matches!(cur.peek(), Some(Tok::Dot)) {
                    let s = cur.ident("sort name")?;
                    b.sort(&s);
                    any = true;
                }
                if !any {
                    return Err(ParseError::new(cur.pos(), "expected at least one sort name"));
                }
                cur.expect(&Tok::Dot)?;
            }
            "subsort" => {
                let sub = cur.ident("sort name")?;
                cur.expect(&Tok::Lt)?;
                let sup = cur.ident("sort name")?;
                b.subsort(&sub, &sup);
                cur.expect(&Tok::Dot)?;
            }
            "op" => {
                let raw = cur.ident("operator name")?;
                let name = strip_mixfix(&raw);
                if name.is_empty() {
                    return Err(ParseError::new(pos, format!("operator name `{raw}` is empty after stripping underscores")));
                }
                cur.expect(&Tok::Colon)?;
                let mut args = Vec::new();
                while !matches!(cur.peek(), Some(Tok::Arrow)) {
                    args.push(cur.ident("argument sort or `->`")?);
                }
                cur.expect(&Tok::Arrow)?;
                let result = cur.ident("result sort")?;
                let mut axioms = AxiomSet::FREE;
                if matches!(cur.peek(), Some(Tok::LBracket)) {
                    cur.next();
                    loop {
                        match cur.peek() {
                            Some(Tok::RBracket) => {
                                cur.next();
                                break;
                            }
                            Some(Tok::Comma) => {
                                cur.next();
                            }
                            _ => {
                                let apos = cur.pos();
                                let attr = cur.ident("attribute")?;
                                match attr.as_str() {
                                    "assoc" => axioms.assoc = true,
                                    "comm" => axioms.comm = true,
                                    other => {
                                        return Err(ParseError::new(
                                            apos,
                                            format!("unknown attribute `{other}`"),
                                        ))
                                    }
                                }
                            }
                        }
                    }
                }
                b.op_with(&name, &args, &result, axioms)
                    .map_err(|e| ParseError::new(pos, e))?;
                cur.expect(&Tok::Dot)?;
            }
            other => {
                return Err(ParseError::new(
                    pos,
                    format!("expected `sort`, `sorts`, `subsort`, `op`, or `endfm`, found `{other}`"),
                ))
            }
        }
    }
    if let Some(t) = cur.peek() {
        return Err(ParseError::new(cur.pos(), format!("unexpected {t} after `endfm`")));
    }
    b.build().map_err(|e| ParseError::new((1, 1), e))
}

/// Parses a prefix term over `sig`, checking arities and sorts.
pub fn parse_term(text: &str, sig: &Signature) -> Result<Term, ParseError> {
    let mut cur = Cursor::new(text)?;
    let t = parse_term_inner(&mut cur, sig)?;
    if let Some(tok) = cur.peek() {
        return Err(ParseError::new(cur.pos(), format!("unexpected {tok} after term")));
    }
    Ok(t)
}

fn parse_term_inner(cur: &mut Cursor, sig: &Signature) -> Result<Term, ParseError> {
    let pos = cur.pos();
    let head = cur.ident("term")?;
    match cur.peek() {
        Some(Tok::Colon) => {
            cur.next();
            let spos = cur.pos();
            let sort = cur.ident("sort name")?;
            if !sig.poset().contains(&Sort::new(&sort)) {
                return Err(ParseError::new(spos, format!("unknown sort `{sort}`")));
            }
            Ok(Term::var(&head, &sort))
        }
        Some(Tok::LParen) => {
            cur.next();
            let mut args = vec![parse_term_inner(cur, sig)?];
            loop {
                match cur.peek() {
                    Some(Tok::Comma) => {
                        cur.next();
                        args.push(parse_term_inner(cur, sig)?);
                    }
                    Some(Tok::RParen) => {
                        cur.next();
                        break;
                    }
                    _ => {
                        return Err(ParseError::new(
                            cur.pos(),
                            format!(
                                "expected `,` or `)`, found {}",
                                cur.peek().map_or("end of input".to_string(), |t| t.to_string())
                            ),
                        ))
                    }
                }
            }
            check_app(&head, args, sig, pos)
        }
        _ => check_app(&head, Vec::new(), sig, pos),
    }
}

fn check_app(
    name: &str,
    args: Vec<Term>,
    sig: &Signature,
    pos: (usize, usize),
) -> Result<Term, ParseError> {
    let sym = Symbol::new(name);
    let decl = sig
        .op(&sym)
        .ok_or_else(|| ParseError::new(pos, format!("unknown operator `{name}`")))?;
    if decl.arity() != args.len() {
        return Err(ParseError::new(
            pos,
            format!(
                "operator `{name}` expects {} argument(s), found {}",
                decl.arity(),
                args.len()
            ),
        ));
    }
    for (i, (arg, want)) in args.iter().zip(&decl.arg_sorts).enumerate() {
        let got = arg
            .sort(sig)
            .ok_or_else(|| ParseError::new(pos, format!("unknown operator in argument {} of `{name}`", i + 1)))?;
        if !sig.poset().leq(&got, want) {
            return Err(ParseError::new(
                pos,
                format!(
                    "ill-sorted term: argument {} of `{name}` has sort `{got}`, expected `{want}`",
                    i + 1
                ),
            ));
        }
    }
    Ok(Term::App { op: sym, args })
}
