//! Text forms of level sets, sum sets and certified sets.
//!
//! ```text
//! level 2: (x0 in {1,2} & x1 notin {3}) | x0 in {5}
//!
//! sum:
//! summand 1: x0 in {4}
//! tail(head[1]=x0 notin {0}; last[0]=all; from=2)
//!
//! certified family A:
//! finite {1,2,3}
//! bundle 0: x0 in {5}
//! cell {0: (1), 1: (1,2)}
//! ```
//!
//! Expressions use `|`, `&`, `!` and parentheses over atoms
//! `xK in {..}`, `xK notin {..}`, `all` and `none`. In a `tail(..)` line the
//! widths in brackets may be left out, in which case they are the least
//! widths covering the coordinates used. Lines starting with `#` are
//! comments.

use std::collections::BTreeSet;
use std::fmt;

use idealforge::finprime::Multicell;
use idealforge::{CertifiedSet, FamilyId, Pred, SumSymbolicSet, SymbolicSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
    /// The failure came from a resource cap, not from the text.
    pub resource: bool,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for ParseError {}

pub type ParseResult<T> = Result<T, ParseError>;

/// A parsed document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Parsed {
    Level(SymbolicSet),
    Sum(SumSymbolicSet),
    Certified(CertifiedSet),
}

impl Parsed {
    pub fn kind(&self) -> &'static str {
        match self {
            Parsed::Level(_) => "level set",
            Parsed::Sum(_) => "sum set",
            Parsed::Certified(_) => "certified set",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetExpression {
    pub source: String,
    pub parsed: Parsed,
}

/// Canonical text of a parsed document, ending in a newline.
pub fn print(p: &Parsed) -> String {
    match p {
        Parsed::Level(s) => print_level(s),
        Parsed::Sum(m) => format!("sum:\n{m}"),
        Parsed::Certified(a) => format!("certified family {}:\n{a}", a.family()),
    }
}

pub fn print_level(s: &SymbolicSet) -> String {
    format!("level {}: {s}\n", s.level())
}

pub fn parse(text: &str) -> ParseResult<SetExpression> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let Some((hline, header)) = lines.next() else {
        return Err(at((1, 1), "empty document"));
    };
    let mut cur = Cursor::new(header, hline);
    let word = cur.word()?;
    let parsed = match word.as_str() {
        "level" => {
            let n = cur.int()? as usize;
            cur.expect(':')?;
            if n == 0 {
                return Err(cur.error("level must be at least 1"));
            }
            let ast = cur.expr()?;
            cur.end()?;
            if let Some((ln, _)) = lines.next() {
                return Err(at((ln, 1), "a level set is a single line"));
            }
            Parsed::Level(ast.eval(n)?)
        }
        "sum" => {
            cur.expect(':')?;
            cur.end()?;
            Parsed::Sum(parse_sum_body(lines)?)
        }
        "certified" => {
            let w = cur.word()?;
            if w != "family" {
                return Err(cur.error(format!("expected `family`, found `{w}`")));
            }
            let name = cur.word()?;
            let family = FamilyId::parse(&name).map_err(|_| cur.error(format!("unknown family `{name}`")))?;
            cur.expect(':')?;
            cur.end()?;
            Parsed::Certified(parse_certified_body(family, lines)?)
        }
        other => {
            return Err(at(
                (hline, 1),
                format!("expected `level N:`, `sum:` or `certified family F:`, found `{other}`"),
            ))
        }
    };
    Ok(SetExpression {
        source: text.to_string(),
        parsed,
    })
}

/// Parses a `level N: EXPR` document and returns the set.
pub fn parse_level(text: &str) -> ParseResult<SymbolicSet> {
    match parse(text)?.parsed {
        Parsed::Level(s) => Ok(s),
        other => Err(at((1, 1), format!("expected a level set, found a {}", other.kind()))),
    }
}

fn parse_sum_body<'a>(lines: impl Iterator<Item = (usize, &'a str)>) -> ParseResult<SumSymbolicSet> {
    let mut tails: Option<SumSymbolicSet> = None;
    let mut summands = Vec::new();
    for (ln, l) in lines {
        let mut cur = Cursor::new(l, ln);
        let start = cur.position();
        match cur.word()?.as_str() {
            "summand" => {
                let j = cur.int()? as usize;
                if j == 0 {
                    return Err(cur.error("summands are numbered from 1"));
                }
                cur.expect(':')?;
                let s = cur.expr()?.eval(j)?;
                cur.end()?;
                summands.push((start, j, s));
            }
            "tail" => {
                cur.expect('(')?;
                let (h, head) = tail_field(&mut cur, "head")?;
                cur.expect(';')?;
                let (t, last) = tail_field(&mut cur, "last")?;
                cur.expect(';')?;
                let key = cur.word()?;
                if key != "from" {
                    return Err(cur.error(format!("expected `from`, found `{key}`")));
                }
                cur.expect('=')?;
                let from = cur.int()? as usize;
                cur.expect(')')?;
                cur.end()?;
                let h = h.unwrap_or_else(|| head.width());
                let t = t.unwrap_or_else(|| last.width());
                let template =
                    SumSymbolicSet::template(&head.eval(h)?, &last.eval(t)?, from).map_err(|e| core_at(start, e))?;
                tails = Some(match tails {
                    Some(prev) => prev.union(&template).map_err(|e| core_at(start, e))?,
                    None => template,
                });
            }
            other => return Err(at(start, format!("expected `summand` or `tail`, found `{other}`"))),
        }
    }
    let mut out = tails.unwrap_or_else(SumSymbolicSet::empty);
    for (pos, j, s) in summands {
        out = out.with_summand(j, s).map_err(|e| core_at(pos, e))?;
    }
    Ok(out)
}

fn tail_field(cur: &mut Cursor, name: &str) -> ParseResult<(Option<usize>, Ast)> {
    let key = cur.word()?;
    if key != name {
        return Err(cur.error(format!("expected `{name}`, found `{key}`")));
    }
    let width = if cur.eat('[') {
        let w = cur.int()? as usize;
        cur.expect(']')?;
        Some(w)
    } else {
        None
    };
    cur.expect('=')?;
    Ok((width, cur.expr()?))
}

fn parse_certified_body<'a>(
    family: FamilyId,
    lines: impl Iterator<Item = (usize, &'a str)>,
) -> ParseResult<CertifiedSet> {
    let mut finite = BTreeSet::new();
    let mut bundles = Vec::new();
    let mut cells = Vec::new();
    let mut first = None;
    for (ln, l) in lines {
        let mut cur = Cursor::new(l, ln);
        let start = cur.position();
        first.get_or_insert(start);
        match cur.word()?.as_str() {
            "finite" => {
                finite.extend(cur.int_set()?);
                cur.end()?;
            }
            "bundle" => {
                let level = cur.int()? as usize;
                cur.expect(':')?;
                let b = cur.expr()?.eval(level + 1)?;
                cur.end()?;
                bundles.push((level, b));
            }
            "cell" => {
                cur.expect('{')?;
                let mut u = Multicell::new();
                loop {
                    let pos = cur.position();
                    let level = cur.int()? as usize;
                    cur.expect(':')?;
                    let t = cur.tuple()?;
                    if t.len() != level + 1 {
                        return Err(at(
                            pos,
                            format!("cell tuple at level {level} needs {} entries", level + 1),
                        ));
                    }
                    if u.insert(level, t).is_some() {
                        return Err(at(pos, format!("level {level} repeated in a cell")));
                    }
                    if !cur.eat(',') {
                        break;
                    }
                }
                cur.expect('}')?;
                cur.end()?;
                cells.push(u);
            }
            other => {
                return Err(at(
                    start,
                    format!("expected `finite`, `bundle` or `cell`, found `{other}`"),
                ))
            }
        }
    }
    CertifiedSet::new(family, finite, bundles, cells).map_err(|e| core_at(first.unwrap_or((1, 1)), e))
}

fn core_at(pos: (usize, usize), e: idealforge::Error) -> ParseError {
    ParseError {
        resource: e.is_resource(),
        ..at(pos, e.to_string())
    }
}

fn at(pos: (usize, usize), msg: impl Into<String>) -> ParseError {
    ParseError {
        line: pos.0,
        col: pos.1,
        msg: msg.into(),
        resource: false,
    }
}

/// Expression tree with the source position of every atom.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Ast {
    All,
    None,
    Atom {
        coord: usize,
        pred: Pred,
        pos: (usize, usize),
    },
    Not(Box<Ast>),
    And(Box<Ast>, Box<Ast>),
    Or(Box<Ast>, Box<Ast>),
}

impl Ast {
    /// Least level holding every coordinate used.
    fn width(&self) -> usize {
        match self {
            Ast::All | Ast::None => 0,
            Ast::Atom { coord, .. } => coord + 1,
            Ast::Not(a) => a.width(),
            Ast::And(a, b) | Ast::Or(a, b) => a.width().max(b.width()),
        }
    }

    fn eval(&self, level: usize) -> ParseResult<SymbolicSet> {
        let lift = |r: idealforge::Result<SymbolicSet>, pos| r.map_err(|e| core_at(pos, e));
        match self {
            Ast::All => Ok(SymbolicSet::full(level)),
            Ast::None => Ok(SymbolicSet::empty(level)),
            Ast::Atom { coord, pred, pos } => {
                if *coord >= level {
                    return Err(at(*pos, format!("coordinate x{coord} out of range for level {level}")));
                }
                lift(SymbolicSet::atom(level, *coord, pred.clone()), *pos)
            }
            Ast::Not(a) => lift(a.eval(level)?.complement(), self.pos()),
            Ast::And(a, b) => lift(a.eval(level)?.intersection(&b.eval(level)?), self.pos()),
            Ast::Or(a, b) => lift(a.eval(level)?.union(&b.eval(level)?), self.pos()),
        }
    }

    fn pos(&self) -> (usize, usize) {
        match self {
            Ast::All | Ast::None => (1, 1),
            Ast::Atom { pos, .. } => *pos,
            Ast::Not(a) | Ast::And(a, _) | Ast::Or(a, _) => a.pos(),
        }
    }
}

struct Cursor {
    chars: Vec<char>,
    i: usize,
    line: usize,
}

impl Cursor {
    fn new(text: &str, line: usize) -> Cursor {
        Cursor {
            chars: text.chars().collect(),
            i: 0,
            line,
        }
    }

    fn position(&mut self) -> (usize, usize) {
        self.skip_ws();
        (self.line, self.i + 1)
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        at((self.line, self.i + 1), msg)
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.i).is_some_and(|c| c.is_whitespace()) {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.i).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> ParseResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            let msg = match self.peek() {
                Some(found) => format!("expected `{c}`, found `{found}`"),
                None => format!("expected `{c}`, found end of line"),
            };
            Err(self.error(msg))
        }
    }

    fn end(&mut self) -> ParseResult<()> {
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(self.error(format!("unexpected `{c}`"))),
        }
    }

    fn word(&mut self) -> ParseResult<String> {
        self.skip_ws();
        let start = self.i;
        while self
            .chars
            .get(self.i)
            .is_some_and(|c| c.is_ascii_alphabetic() || *c == '_' || *c == '-' || *c == '^')
        {
            self.i += 1;
        }
        if start == self.i {
            return Err(self.error("expected a word"));
        }
        Ok(self.chars[start..self.i].iter().collect())
    }

    fn int(&mut self) -> ParseResult<u64> {
        self.skip_ws();
        let start = self.i;
        while self.chars.get(self.i).is_some_and(char::is_ascii_digit) {
            self.i += 1;
        }
        if start == self.i {
            return Err(self.error("expected a number"));
        }
        let digits: String = self.chars[start..self.i].iter().collect();
        digits.parse().map_err(|_| {
            at(
                (self.line, start + 1),
                format!("number {digits} does not fit in 64 bits"),
            )
        })
    }

    fn int_set(&mut self) -> ParseResult<BTreeSet<u64>> {
        self.expect('{')?;
        let mut out = BTreeSet::new();
        if self.eat('}') {
            return Ok(out);
        }
        loop {
            out.insert(self.int()?);
            if !self.eat(',') {
                break;
            }
        }
        self.expect('}')?;
        Ok(out)
    }

    fn tuple(&mut self) -> ParseResult<Vec<u64>> {
        self.expect('(')?;
        let mut out = vec![self.int()?];
        while self.eat(',') {
            out.push(self.int()?);
        }
        self.expect(')')?;
        Ok(out)
    }

    fn expr(&mut self) -> ParseResult<Ast> {
        let mut left = self.term()?;
        while self.eat('|') {
            let right = self.term()?;
            left = Ast::Or(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn term(&mut self) -> ParseResult<Ast> {
        let mut left = self.atom()?;
        while self.eat('&') {
            let right = self.atom()?;
            left = Ast::And(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn atom(&mut self) -> ParseResult<Ast> {
        let pos = self.position();
        if self.eat('!') {
            return Ok(Ast::Not(Box::new(self.atom()?)));
        }
        if self.eat('(') {
            let e = self.expr()?;
            self.expect(')')?;
            return Ok(e);
        }
        match self.peek() {
            Some('x') => {
                self.i += 1;
                let coord = self.int()? as usize;
                let op = self.word()?;
                let vals = self.int_set()?;
                let pred = match op.as_str() {
                    "in" => Pred::In(vals),
                    "notin" => Pred::NotIn(vals),
                    _ => return Err(at(pos, format!("expected `in` or `notin`, found `{op}`"))),
                };
                Ok(Ast::Atom { coord, pred, pos })
            }
            Some(c) if c.is_ascii_alphabetic() => match self.word()?.as_str() {
                "all" => Ok(Ast::All),
                "none" => Ok(Ast::None),
                w => Err(at(pos, format!("expected an atom, found `{w}`"))),
            },
            Some(c) => Err(self.error(format!("expected an atom, found `{c}`"))),
            None => Err(self.error("expected an atom, found end of line")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_examples() {
        let f2 = parse_level("level 2: x0 notin {0}").unwrap();
        assert_eq!(f2, SymbolicSet::atom(2, 0, Pred::not_in([0])).unwrap());
        let two = parse_level("level 2: (x0 in {1,2} & x1 notin {3}) | x0 in {5}").unwrap();
        assert_eq!(two.conjuncts().len(), 2);
        let err = parse_level("level 2: x2 in {1}").unwrap_err();
        assert_eq!((err.line, err.col), (1, 10));
        assert!(err.msg.contains("out of range"), "{err}");
    }

    #[test]
    fn syntax_errors_have_positions() {
        let err = parse("level 2: x0 in {1").unwrap_err();
        assert_eq!(err.line, 1);
        assert!(err.msg.contains("expected `}`"));
        let err = parse("sum:\nsummand 2: x0 within {1}").unwrap_err();
        assert_eq!((err.line, err.col), (2, 12));
        assert!(parse("").is_err());
        assert!(parse("set: x0 in {1}").is_err());
    }

    #[test]
    fn documents_roundtrip() {
        for text in [
            "level 3: x0 in {1,2} & x2 notin {0} | !(x1 in {4})",
            "level 1: none",
            "sum:\nsummand 1: x0 in {4}\ntail(head=x0 notin {0}; last=all; from=2)",
            "sum:\ntail(head[0]=all; last[2]=x1 in {0}; from=3)\ntail(head=x0 in {1}; last=x0 in {2}; from=3)",
            "certified family B:\nfinite {1,2,3}\nbundle 0: x0 in {5}\ncell {0: (1), 1: (1,2)}",
        ] {
            let p = parse(text).unwrap().parsed;
            let printed = print(&p);
            assert_eq!(parse(&printed).unwrap().parsed, p, "{printed}");
            assert_eq!(print(&parse(&printed).unwrap().parsed), printed);
        }
    }
}
