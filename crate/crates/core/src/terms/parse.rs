use super::{Action, AmbName, Calculus, Label, Proc, Term};
use crate::error::{Error, Result};

const KEYWORDS: [&str; 5] = ["tau", "nu", "in", "out", "open"];

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Zero,
    Ident(String),
    ProcVar(String),
    NameVar(String),
    Quote,
    Dot,
    Bar,
    Plus,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Hole,
    Eof,
}

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let ident_char = |c: char| c.is_ascii_alphanumeric() || c == '_';
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column: col };
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let single = match c {
            '.' => Some(Tok::Dot),
            '|' => Some(Tok::Bar),
            '+' => Some(Tok::Plus),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '[' => Some(Tok::LBrack),
            ']' => Some(Tok::RBrack),
            '-' => Some(Tok::Hole),
            '\'' => Some(Tok::Quote),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, pos));
            i += 1;
            col += 1;
            continue;
        }
        if c == '@' || c == '?' || ident_char(c) {
            let start = if c == '@' || c == '?' { i + 1 } else { i };
            let mut j = start;
            while j < chars.len() && ident_char(chars[j]) {
                j += 1;
            }
            let word: String = chars[start..j].iter().collect();
            if word.is_empty() {
                return Err(parse_error(pos, format!("expected an identifier after `{c}`")));
            }
            let tok = match c {
                '@' => Tok::ProcVar(word),
                '?' => Tok::NameVar(word),
                _ if word == "0" => Tok::Zero,
                _ if !word.chars().next().unwrap().is_ascii_alphabetic() && !word.starts_with('_') => {
                    return Err(parse_error(pos, format!("`{word}` is not a name")));
                }
                _ => Tok::Ident(word),
            };
            out.push((tok, pos));
            col += j - i;
            i = j;
            continue;
        }
        return Err(parse_error(pos, format!("unexpected character `{c}`")));
    }
    out.push((Tok::Eof, Pos { line, column: col }));
    Ok(out)
}

fn parse_error(pos: Pos, message: String) -> Error {
    Error::Parse { line: pos.line, column: pos.column, message }
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    calculus: Calculus,
    holes: bool,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.at + k).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(parse_error(self.pos(), msg.into()))
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.fail(format!("expected {what}, found {}", describe(self.peek())))
        }
    }

    fn name(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(w) if !KEYWORDS.contains(&w.as_str()) => {
                self.bump();
                Ok(w)
            }
            t => self.fail(format!("expected a name, found {}", describe(&t))),
        }
    }

    fn par(&mut self) -> Result<Proc> {
        let mut parts = vec![self.sum()?];
        while *self.peek() == Tok::Bar {
            self.bump();
            parts.push(self.sum()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Proc::Par(parts) })
    }

    fn sum(&mut self) -> Result<Proc> {
        let first_pos = self.pos();
        let mut parts = vec![self.atom()?];
        while *self.peek() == Tok::Plus {
            if !self.calculus.has_sum() {
                return self.fail("mobile ambients have no `+`");
            }
            self.bump();
            parts.push(self.atom()?);
        }
        if parts.len() == 1 {
            return Ok(parts.pop().unwrap());
        }
        for p in &parts {
            if !matches!(p, Proc::Nil | Proc::Prefix(..) | Proc::Sum(_)) {
                return Err(parse_error(first_pos, "summands must be guarded".into()));
            }
        }
        Ok(Proc::Sum(parts))
    }

    fn continuation(&mut self) -> Result<Proc> {
        if *self.peek() == Tok::Dot {
            self.bump();
            self.atom()
        } else {
            Ok(Proc::Nil)
        }
    }

    fn atom(&mut self) -> Result<Proc> {
        match self.peek().clone() {
            Tok::Zero => {
                self.bump();
                Ok(Proc::Nil)
            }
            Tok::Hole if self.holes => {
                self.bump();
                Ok(Proc::Hole)
            }
            Tok::LParen if *self.peek_at(1) == Tok::Ident("nu".into()) => {
                self.bump();
                self.bump();
                let n = self.name()?;
                self.expect(Tok::RParen, "`)`")?;
                let body = self.par()?;
                Ok(Proc::nu(n, body))
            }
            Tok::LParen => {
                self.bump();
                let p = self.par()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(p)
            }
            Tok::ProcVar(x) => {
                self.bump();
                Ok(Proc::Var(x))
            }
            Tok::NameVar(x) => {
                self.bump();
                if self.calculus != Calculus::Ma {
                    return self.fail("name variables only occur in ambient position");
                }
                self.expect(Tok::LBrack, "`[` after a name variable")?;
                let body = self.par()?;
                self.expect(Tok::RBrack, "`]`")?;
                Ok(Proc::Amb(AmbName::Var(x), Box::new(body)))
            }
            Tok::Quote => {
                self.bump();
                let a = self.name()?;
                match self.calculus {
                    Calculus::Ccs => {
                        let cont = self.continuation()?;
                        Ok(Proc::prefix(Action::Send(a), cont))
                    }
                    Calculus::Accs => {
                        if *self.peek() == Tok::Dot {
                            return self.fail("outputs have no continuation in asynchronous CCS");
                        }
                        Ok(Proc::Output(a))
                    }
                    Calculus::Ma => self.fail("no output actions in mobile ambients"),
                }
            }
            Tok::Ident(w) => {
                self.bump();
                let action = match (w.as_str(), self.calculus) {
                    ("tau", Calculus::Ccs | Calculus::Accs) => Action::Tau,
                    ("in", Calculus::Ma) => Action::In(self.name()?),
                    ("out", Calculus::Ma) => Action::Out(self.name()?),
                    ("open", Calculus::Ma) => Action::Open(self.name()?),
                    (kw, _) if KEYWORDS.contains(&kw) => {
                        return self.fail(format!("`{kw}` is not allowed here in {}", self.calculus))
                    }
                    (_, Calculus::Ma) => {
                        self.expect(Tok::LBrack, "`[` after an ambient name")?;
                        let body = self.par()?;
                        self.expect(Tok::RBrack, "`]`")?;
                        return Ok(Proc::amb(w, body));
                    }
                    (_, _) => Action::Recv(w),
                };
                let cont = self.continuation()?;
                Ok(Proc::prefix(action, cont))
            }
            t => self.fail(format!("unexpected {}", describe(&t))),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Zero => "`0`".into(),
        Tok::Ident(w) => format!("`{w}`"),
        Tok::ProcVar(x) => format!("`@{x}`"),
        Tok::NameVar(x) => format!("`?{x}`"),
        Tok::Quote => "`'`".into(),
        Tok::Dot => "`.`".into(),
        Tok::Bar => "`|`".into(),
        Tok::Plus => "`+`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::LBrack => "`[`".into(),
        Tok::RBrack => "`]`".into(),
        Tok::Hole => "`-`".into(),
        Tok::Eof => "end of input".into(),
    }
}

/// Parses a process (or context, when `holes` is set) without the
/// well-formedness checks of [`Term::new`].
pub fn parse_proc(calculus: Calculus, src: &str, holes: bool) -> Result<Proc> {
    let mut p = Parser { toks: lex(src)?, at: 0, calculus, holes };
    let out = p.par()?;
    if *p.peek() != Tok::Eof {
        return p.fail(format!("trailing input starting at {}", describe(p.peek())));
    }
    Ok(out)
}

pub fn parse_term(calculus: Calculus, src: &str) -> Result<Term> {
    Term::new(calculus, parse_proc(calculus, src, false)?)
}

pub fn parse_label(calculus: Calculus, src: &str) -> Result<Label> {
    Label::new(calculus, parse_proc(calculus, src, true)?)
}
