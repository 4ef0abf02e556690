//! Text syntax for terms.
//!
//! ```text
//! term   := sum
//! sum    := scaled (('+' | '-') scaled)*      # a - b  is  a + (-1).b
//! scaled := rational '.' scaled | prod
//! prod   := tens ('*' (tens | scaled))*       # f * g  is  f ∘ g
//! tens   := atom ('@' atom)*
//! atom   := 'id' '[' objs ']' | 'zero' '[' objs ';' objs ']'
//!         | ('braid' | 'braidinv') '[' X ',' Y ']'     # single labels
//!         | ('braid' | 'braidinv') '[' objs ';' objs ']'
//!         | IDENT | '(' term ')'
//! ```
//!
//! Precedence is `@` > `*` > `.` > `+`/`-`, so `2 . f * g` scales the whole
//! composite. A scalar appearing after `*` extends to the end of the product.
//! `#` starts a comment running to the end of the line.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::term::{typecheck, ObjType, Signature, Term, TermError};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: expected {expected}")]
    Syntax { line: usize, column: usize, expected: String },
    #[error(transparent)]
    Type(#[from] TermError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Semi,
    Star,
    At,
    Plus,
    Minus,
    Dot,
    Slash,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Int(n) => format!("number `{n}`"),
            Tok::Eof => "end of input".into(),
            other => format!("`{}`", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrack => "[",
            Tok::RBrack => "]",
            Tok::Comma => ",",
            Tok::Semi => ";",
            Tok::Star => "*",
            Tok::At => "@",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Dot => ".",
            Tok::Slash => "/",
            _ => "",
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    for (li, line_text) in text.lines().enumerate() {
        let chars: Vec<char> = line_text.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let (line, column) = (li + 1, i + 1);
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let tok = if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Spanned { tok: Tok::Ident(chars[start..i].iter().collect()), line, column });
                continue;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..i].iter().collect();
                out.push(Spanned { tok: Tok::Int(digits.parse().expect("ascii digits")), line, column });
                continue;
            } else {
                match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    '[' => Tok::LBrack,
                    ']' => Tok::RBrack,
                    ',' => Tok::Comma,
                    ';' => Tok::Semi,
                    '*' => Tok::Star,
                    '@' => Tok::At,
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '.' => Tok::Dot,
                    '/' => Tok::Slash,
                    _ => {
                        return Err(ParseError::Syntax { line, column, expected: format!("a token, found `{c}`") });
                    }
                }
            };
            out.push(Spanned { tok, line, column });
            i += 1;
        }
    }
    let (line, column) = match text.lines().enumerate().last() {
        Some((li, l)) => (li + 1, l.chars().count() + 1),
        None => (1, 1),
    };
    out.push(Spanned { tok: Tok::Eof, line, column });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

const KEYWORDS: [&str; 4] = ["id", "zero", "braid", "braidinv"];

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, expected: &str) -> Result<T, ParseError> {
        let s = &self.toks[self.pos];
        Err(ParseError::Syntax {
            line: s.line,
            column: s.column,
            expected: format!("{expected}, found {}", s.tok.describe()),
        })
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> Result<(), ParseError> {
        if self.eat(&t) {
            Ok(())
        } else {
            self.err(&format!("`{}`", t.symbol()))
        }
    }

    fn at_rational(&self) -> bool {
        match self.peek() {
            Tok::Int(_) => true,
            Tok::Minus => matches!(self.peek_at(1), Tok::Int(_)),
            _ => false,
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut acc = self.scaled()?;
        loop {
            if self.eat(&Tok::Plus) {
                acc = Term::sum(acc, self.scaled()?);
            } else if self.eat(&Tok::Minus) {
                acc = Term::difference(acc, self.scaled()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn rational(&mut self) -> Result<Rational, ParseError> {
        let neg = self.eat(&Tok::Minus);
        let num = match self.bump() {
            Tok::Int(n) => n,
            _ => {
                self.pos -= 1;
                return self.err("a number");
            }
        };
        let den = if self.eat(&Tok::Slash) {
            match self.peek().clone() {
                Tok::Int(d) if d.is_positive() => {
                    self.bump();
                    d
                }
                _ => return self.err("a positive denominator"),
            }
        } else {
            BigInt::one()
        };
        let r = Rational::new(num, den);
        Ok(if neg { -r } else { r })
    }

    fn scaled(&mut self) -> Result<Term, ParseError> {
        if self.at_rational() {
            let c = self.rational()?;
            self.expect(Tok::Dot)?;
            Ok(Term::scale(c, self.scaled()?))
        } else {
            self.prod()
        }
    }

    fn prod(&mut self) -> Result<Term, ParseError> {
        let mut acc = self.tens()?;
        while self.eat(&Tok::Star) {
            if self.at_rational() {
                let rest = self.scaled()?;
                return Ok(Term::compose(acc, rest));
            }
            acc = Term::compose(acc, self.tens()?);
        }
        Ok(acc)
    }

    fn tens(&mut self) -> Result<Term, ParseError> {
        let mut acc = self.atom()?;
        while self.eat(&Tok::At) {
            acc = Term::tensor(acc, self.atom()?);
        }
        Ok(acc)
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            _ => self.err("an object label"),
        }
    }

    /// Comma-separated labels up to (not including) `;` or `]`.
    fn objs(&mut self) -> Result<ObjType, ParseError> {
        let mut v = Vec::new();
        if matches!(self.peek(), Tok::Semi | Tok::RBrack) {
            return Ok(ObjType(v));
        }
        v.push(self.ident()?);
        while self.eat(&Tok::Comma) {
            v.push(self.ident()?);
        }
        Ok(ObjType(v))
    }

    fn braid_args(&mut self) -> Result<(ObjType, ObjType), ParseError> {
        self.expect(Tok::LBrack)?;
        let x = self.objs()?;
        let pair = if self.eat(&Tok::Semi) {
            let y = self.objs()?;
            (x, y)
        } else if x.len() == 2 {
            (ObjType(vec![x.0[0].clone()]), ObjType(vec![x.0[1].clone()]))
        } else {
            return self.err("`;` between the two label lists");
        };
        self.expect(Tok::RBrack)?;
        Ok(pair)
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Ident(s) => {
                self.bump();
                match s.as_str() {
                    "id" => {
                        self.expect(Tok::LBrack)?;
                        let o = self.objs()?;
                        self.expect(Tok::RBrack)?;
                        Ok(Term::Id(o))
                    }
                    "zero" => {
                        self.expect(Tok::LBrack)?;
                        let d = self.objs()?;
                        self.expect(Tok::Semi)?;
                        let c = self.objs()?;
                        self.expect(Tok::RBrack)?;
                        Ok(Term::Zero(d, c))
                    }
                    "braid" => {
                        let (x, y) = self.braid_args()?;
                        Ok(Term::Braid(x, y))
                    }
                    "braidinv" => {
                        let (x, y) = self.braid_args()?;
                        Ok(Term::BraidInv(x, y))
                    }
                    _ => Ok(Term::Gen(s)),
                }
            }
            _ => self.err("a term"),
        }
    }
}

/// Parses without typechecking.
pub fn parse_untyped(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let t = p.term()?;
    if *p.peek() != Tok::Eof {
        return p.err("an operator or end of input");
    }
    Ok(t)
}

/// Parses and typechecks against `sig`.
pub fn parse(text: &str, sig: &Signature) -> Result<Term, ParseError> {
    let t = parse_untyped(text)?;
    typecheck(&t, sig)?;
    Ok(t)
}

/// Canonical, fully parenthesized text.
pub fn pretty(t: &Term) -> String {
    let mut s = String::new();
    write_term(t, &mut s);
    s
}

fn write_term(t: &Term, s: &mut String) {
    let bin = |s: &mut String, a: &Term, op: &str, b: &Term| {
        s.push('(');
        write_term(a, s);
        s.push_str(op);
        write_term(b, s);
        s.push(')');
    };
    match t {
        Term::Id(o) => {
            s.push_str("id[");
            s.push_str(&o.0.join(","));
            s.push(']');
        }
        Term::Gen(n) => s.push_str(n),
        Term::Compose(a, b) => bin(s, a, " * ", b),
        Term::Tensor(a, b) => bin(s, a, " @ ", b),
        Term::Sum(a, b) => bin(s, a, " + ", b),
        Term::Braid(x, y) | Term::BraidInv(x, y) => {
            s.push_str(if matches!(t, Term::Braid(..)) { "braid[" } else { "braidinv[" });
            if x.len() == 1 && y.len() == 1 {
                s.push_str(&format!("{},{}", x.0[0], y.0[0]));
            } else {
                s.push_str(&format!("{};{}", x.0.join(","), y.0.join(",")));
            }
            s.push(']');
        }
        Term::ScalarMul(c, t) => {
            s.push_str(&format!("({c} . "));
            write_term(t, s);
            s.push(')');
        }
        Term::Zero(d, c) => s.push_str(&format!("zero[{};{}]", d.0.join(","), c.0.join(","))),
    }
}
