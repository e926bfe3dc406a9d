//! Lexer, AST and recursive-descent parser for `.hopt` programs.
//!
//! ```text
//! program  := stmt*
//! stmt     := "model" IDENT ";"
//!           | "object" IDENT "=" ( "{" label ("," label)* "}" | INT ) ";"
//!           | "morphism" IDENT ":" objexpr "->" objexpr "=" morexpr ";"
//!           | "tower" IDENT "=" "[" IDENT ("," IDENT)* "]" ";"
//!           | "type" IDENT "=" typeexpr ";"
//!           | "corrupt" "seq" "(" objexpr "," objexpr "," objexpr ")" "at" INT ";"
//!           | "check" ["laws"] IDENT (IDENT "=" (INT | IDENT))* ";"
//! objexpr  := objatom ("*" objatom)*
//! objatom  := "I" | IDENT | "[" objexpr "," objexpr "]" | "(" objexpr ")"
//! morexpr  := morpar (";" morpar)*
//! morpar   := moratom ("*" moratom)*
//! moratom  := IDENT | "(" morexpr ")" | "id(" objexpr ")" | "braid(" o "," o ")"
//!           | "kappa(" morexpr ")" | "seq(" o "," o "," o ")" | "par(" o "," o "," o "," o ")"
//!           | "curry(" morexpr ["," objexpr] ")" | "eval(" o "," o ")" | table
//! table    := "{" [elem "->" elem ("," elem "->" elem)*] "}" | "[" row ("," row)* "]"
//! typeexpr := "first(" INT ")" | "hom(" INT "," INT ")" | "ns(" typeexpr "," typeexpr ")" | IDENT
//! ```

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub pos: Pos,
    pub expected: Vec<String>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at {}: expected {}, found {}", self.pos, self.expected.join(" or "), self.found)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u64),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{}`", s),
            Tok::Int(n) => write!(f, "`{}`", n),
            Tok::Sym(s) => write!(f, "`{}`", s),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

const SYMBOLS: [&str; 14] = ["->", ";", ":", "=", ",", "(", ")", "[", "]", "{", "}", "*", "/", "-"];

fn lex(src: &str) -> Result<Vec<(Tok, Pos, usize)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let bump = |c: char, line: &mut usize, col: &mut usize| {
        if c == '\n' {
            *line += 1;
            *col = 1;
        } else {
            *col += 1;
        }
    };
    while i < chars.len() {
        let (off, c) = chars[i];
        let pos = Pos { line, col };
        if c.is_whitespace() {
            bump(c, &mut line, &mut col);
            i += 1;
        } else if c == '#' || src[off..].starts_with("//") {
            while i < chars.len() && chars[i].1 != '\n' {
                i += 1;
                col += 1;
            }
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_' || chars[i].1 == '\'') {
                i += 1;
                col += 1;
            }
            let end = chars.get(i).map_or(src.len(), |p| p.0);
            out.push((Tok::Ident(src[chars[start].0..end].to_string()), pos, off));
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
                col += 1;
            }
            let end = chars.get(i).map_or(src.len(), |p| p.0);
            let text = &src[chars[start].0..end];
            let n = text.parse().map_err(|_| ParseError {
                pos,
                expected: vec!["an integer that fits in 64 bits".into()],
                found: format!("`{}`", text),
            })?;
            out.push((Tok::Int(n), pos, off));
        } else if let Some(s) = SYMBOLS.iter().find(|s| src[off..].starts_with(**s)) {
            out.push((Tok::Sym(s), pos, off));
            i += s.len();
            col += s.len();
        } else {
            return Err(ParseError { pos, expected: vec!["a token".into()], found: format!("`{}`", c) });
        }
    }
    out.push((Tok::Eof, Pos { line, col }, src.len()));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ident {
    pub name: String,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ObjExpr {
    Unit,
    Name(Ident),
    Tensor(Box<ObjExpr>, Box<ObjExpr>),
    Hom(Box<ObjExpr>, Box<ObjExpr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Elem {
    Label(String),
    Tuple(Vec<Elem>),
}

/// A rational entry `n` or `n/d`, possibly negative.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rat {
    pub num: i64,
    pub den: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Table {
    Pairs(Vec<(Elem, Elem)>),
    /// Row-major entries of a `|cod| × |dom|` matrix.
    Rows(Vec<Vec<Rat>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MorKind {
    Name(Ident),
    Then(Box<MorExpr>, Box<MorExpr>),
    Par(Box<MorExpr>, Box<MorExpr>),
    Id(ObjExpr),
    Braid(ObjExpr, ObjExpr),
    Kappa(Box<MorExpr>),
    Seq(ObjExpr, ObjExpr, ObjExpr),
    ParMap(ObjExpr, ObjExpr, ObjExpr, ObjExpr),
    Curry(Box<MorExpr>, Option<ObjExpr>),
    Eval(ObjExpr, ObjExpr),
    Table(Table),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorExpr {
    pub kind: MorKind,
    pub pos: Pos,
    /// Source text, for error messages.
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ObjDef {
    Labels(Vec<String>),
    Dim(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeExpr {
    First(usize),
    Hom(usize, usize),
    Ns(Box<TypeExpr>, Box<TypeExpr>),
    Name(Ident),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OptVal {
    Int(u64),
    Name(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stmt {
    Model(Ident),
    Object { name: Ident, def: ObjDef },
    Morphism { name: Ident, dom: ObjExpr, cod: ObjExpr, body: MorExpr },
    Tower { name: Ident, layers: Vec<Ident> },
    Type { name: Ident, def: TypeExpr },
    Corrupt { a: ObjExpr, b: ObjExpr, c: ObjExpr, input: usize, pos: Pos },
    Check { suite: Ident, opts: Vec<(Ident, OptVal)>, text: String },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    pub stmts: Vec<Stmt>,
}

impl Program {
    pub fn checks(&self) -> impl Iterator<Item = &Stmt> {
        self.stmts.iter().filter(|s| matches!(s, Stmt::Check { .. }))
    }
}

pub fn parse(src: &str) -> Result<Program, ParseError> {
    let mut p = Parser { src, toks: lex(src)?, i: 0 };
    let mut stmts = Vec::new();
    while p.peek() != &Tok::Eof {
        stmts.push(p.stmt()?);
    }
    Ok(Program { stmts })
}

struct Parser<'s> {
    src: &'s str,
    toks: Vec<(Tok, Pos, usize)>,
    i: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.i + 1).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].1
    }

    fn offset(&self) -> usize {
        self.toks[self.i].2
    }

    fn text_from(&self, start: usize) -> String {
        let Some((tok, _, off)) = self.i.checked_sub(1).map(|k| &self.toks[k]) else {
            return String::new();
        };
        let len = match tok {
            Tok::Ident(s) => s.len(),
            Tok::Int(n) => n.to_string().len(),
            Tok::Sym(s) => s.len(),
            Tok::Eof => 0,
        };
        self.src[start..(off + len).max(start)].trim().to_string()
    }

    fn fail<T>(&self, expected: &[&str]) -> PResult<T> {
        Err(ParseError {
            pos: self.pos(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: self.peek().to_string(),
        })
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(t) if *t == s)
    }

    fn is_kw(&self, k: &str) -> bool {
        matches!(self.peek(), Tok::Ident(t) if t == k)
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> PResult<()> {
        if self.eat(s) {
            Ok(())
        } else {
            self.fail(&[&format!("`{}`", s)])
        }
    }

    fn keyword(&mut self, k: &str) -> PResult<()> {
        if self.is_kw(k) {
            self.i += 1;
            Ok(())
        } else {
            self.fail(&[&format!("`{}`", k)])
        }
    }

    fn ident(&mut self) -> PResult<Ident> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let pos = self.pos();
                self.i += 1;
                Ok(Ident { name, pos })
            }
            _ => self.fail(&["an identifier"]),
        }
    }

    fn int(&mut self) -> PResult<u64> {
        match *self.peek() {
            Tok::Int(n) => {
                self.i += 1;
                Ok(n)
            }
            _ => self.fail(&["an integer"]),
        }
    }

    fn usize(&mut self) -> PResult<usize> {
        let pos = self.pos();
        let n = self.int()?;
        usize::try_from(n).map_err(|_| ParseError { pos, expected: vec!["a smaller integer".into()], found: n.to_string() })
    }

    fn stmt(&mut self) -> PResult<Stmt> {
        let start = self.offset();
        let Tok::Ident(kw) = self.peek().clone() else {
            return self.fail(&["`model`", "`object`", "`morphism`", "`tower`", "`type`", "`corrupt`", "`check`"]);
        };
        let stmt = match kw.as_str() {
            "model" => {
                self.i += 1;
                Stmt::Model(self.ident()?)
            }
            "object" => {
                self.i += 1;
                let name = self.ident()?;
                self.expect("=")?;
                let def = if self.eat("{") {
                    let mut labels = Vec::new();
                    if !self.is_sym("}") {
                        labels.push(self.label()?);
                        while self.eat(",") {
                            labels.push(self.label()?);
                        }
                    }
                    self.expect("}")?;
                    ObjDef::Labels(labels)
                } else if let Tok::Int(_) = self.peek() {
                    ObjDef::Dim(self.usize()?)
                } else {
                    return self.fail(&["`{`", "an integer"]);
                };
                Stmt::Object { name, def }
            }
            "morphism" => {
                self.i += 1;
                let name = self.ident()?;
                self.expect(":")?;
                let dom = self.objexpr()?;
                self.expect("->")?;
                let cod = self.objexpr()?;
                self.expect("=")?;
                let body = self.morexpr()?;
                Stmt::Morphism { name, dom, cod, body }
            }
            "tower" => {
                self.i += 1;
                let name = self.ident()?;
                self.expect("=")?;
                self.expect("[")?;
                let mut layers = vec![self.ident()?];
                while self.eat(",") {
                    layers.push(self.ident()?);
                }
                self.expect("]")?;
                Stmt::Tower { name, layers }
            }
            "type" => {
                self.i += 1;
                let name = self.ident()?;
                self.expect("=")?;
                Stmt::Type { name, def: self.typeexpr()? }
            }
            "corrupt" => {
                let pos = self.pos();
                self.i += 1;
                self.keyword("seq")?;
                self.expect("(")?;
                let a = self.objexpr()?;
                self.expect(",")?;
                let b = self.objexpr()?;
                self.expect(",")?;
                let c = self.objexpr()?;
                self.expect(")")?;
                self.keyword("at")?;
                let input = self.usize()?;
                Stmt::Corrupt { a, b, c, input, pos }
            }
            "check" => {
                self.i += 1;
                if self.is_kw("laws") && matches!(self.peek2(), Tok::Ident(_)) {
                    self.i += 1;
                }
                let suite = self.ident()?;
                let mut opts = Vec::new();
                while let Tok::Ident(_) = self.peek() {
                    let key = self.ident()?;
                    self.expect("=")?;
                    let val = match self.peek().clone() {
                        Tok::Int(n) => {
                            self.i += 1;
                            OptVal::Int(n)
                        }
                        Tok::Ident(s) => {
                            self.i += 1;
                            OptVal::Name(s)
                        }
                        _ => return self.fail(&["an integer", "an identifier"]),
                    };
                    opts.push((key, val));
                }
                Stmt::Check { suite, opts, text: self.text_from(start) }
            }
            _ => return self.fail(&["`model`", "`object`", "`morphism`", "`tower`", "`type`", "`corrupt`", "`check`"]),
        };
        self.expect(";")?;
        Ok(stmt)
    }

    fn label(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.i += 1;
                Ok(s)
            }
            Tok::Int(n) => {
                self.i += 1;
                Ok(n.to_string())
            }
            _ => self.fail(&["a label"]),
        }
    }

    fn objexpr(&mut self) -> PResult<ObjExpr> {
        let mut acc = self.objatom()?;
        while self.eat("*") {
            acc = ObjExpr::Tensor(Box::new(acc), Box::new(self.objatom()?));
        }
        Ok(acc)
    }

    fn objatom(&mut self) -> PResult<ObjExpr> {
        if self.eat("(") {
            let o = self.objexpr()?;
            self.expect(")")?;
            return Ok(o);
        }
        if self.eat("[") {
            let a = self.objexpr()?;
            self.expect(",")?;
            let b = self.objexpr()?;
            self.expect("]")?;
            return Ok(ObjExpr::Hom(Box::new(a), Box::new(b)));
        }
        match self.peek() {
            Tok::Ident(s) if s == "I" => {
                self.i += 1;
                Ok(ObjExpr::Unit)
            }
            Tok::Ident(_) => Ok(ObjExpr::Name(self.ident()?)),
            _ => self.fail(&["an object", "`I`", "`[`", "`(`"]),
        }
    }

    fn morexpr(&mut self) -> PResult<MorExpr> {
        let (start, pos) = (self.offset(), self.pos());
        let mut acc = self.morpar()?;
        while self.eat(";") {
            // `;` also ends a statement: only continue when a morphism follows.
            if !self.starts_morphism() {
                self.i -= 1;
                break;
            }
            let rhs = self.morpar()?;
            acc = MorExpr { kind: MorKind::Then(Box::new(acc), Box::new(rhs)), pos, text: self.text_from(start) };
        }
        Ok(acc)
    }

    fn starts_morphism(&self) -> bool {
        match self.peek() {
            Tok::Ident(s) => {
                !matches!(s.as_str(), "model" | "object" | "morphism" | "tower" | "type" | "corrupt" | "check")
                    || self.is_sym_at(self.i + 1, "(")
            }
            Tok::Sym(s) => matches!(*s, "(" | "{" | "["),
            _ => false,
        }
    }

    fn is_sym_at(&self, i: usize, s: &str) -> bool {
        matches!(self.toks.get(i), Some((Tok::Sym(t), _, _)) if *t == s)
    }

    fn morpar(&mut self) -> PResult<MorExpr> {
        let (start, pos) = (self.offset(), self.pos());
        let mut acc = self.moratom()?;
        while self.eat("*") {
            let rhs = self.moratom()?;
            acc = MorExpr { kind: MorKind::Par(Box::new(acc), Box::new(rhs)), pos, text: self.text_from(start) };
        }
        Ok(acc)
    }

    fn moratom(&mut self) -> PResult<MorExpr> {
        let (start, pos) = (self.offset(), self.pos());
        let kind = if self.eat("(") {
            let m = self.morexpr()?;
            self.expect(")")?;
            return Ok(MorExpr { text: self.text_from(start), ..m });
        } else if self.is_sym("{") || self.is_sym("[") {
            MorKind::Table(self.table()?)
        } else {
            let name = self.ident()?;
            if !self.is_sym("(") {
                MorKind::Name(name)
            } else {
                self.i += 1;
                let kind = match name.name.as_str() {
                    "id" => MorKind::Id(self.objexpr()?),
                    "braid" => {
                        let a = self.objexpr()?;
                        self.expect(",")?;
                        MorKind::Braid(a, self.objexpr()?)
                    }
                    "kappa" => MorKind::Kappa(Box::new(self.morexpr()?)),
                    "seq" => {
                        let os = self.objlist(3)?;
                        let [a, b, c] = <[ObjExpr; 3]>::try_from(os).expect("three objects");
                        MorKind::Seq(a, b, c)
                    }
                    "par" => {
                        let os = self.objlist(4)?;
                        let [a, a2, b, b2] = <[ObjExpr; 4]>::try_from(os).expect("four objects");
                        MorKind::ParMap(a, a2, b, b2)
                    }
                    "curry" => {
                        let f = self.morexpr()?;
                        let a = if self.eat(",") { Some(self.objexpr()?) } else { None };
                        MorKind::Curry(Box::new(f), a)
                    }
                    "eval" => {
                        let a = self.objexpr()?;
                        self.expect(",")?;
                        MorKind::Eval(a, self.objexpr()?)
                    }
                    _ => {
                        self.i -= 2;
                        return self.fail(&["`id`", "`braid`", "`kappa`", "`seq`", "`par`", "`curry`", "`eval`"]);
                    }
                };
                self.expect(")")?;
                kind
            }
        };
        Ok(MorExpr { kind, pos, text: self.text_from(start) })
    }

    fn objlist(&mut self, n: usize) -> PResult<Vec<ObjExpr>> {
        let mut os = vec![self.objexpr()?];
        for _ in 1..n {
            self.expect(",")?;
            os.push(self.objexpr()?);
        }
        Ok(os)
    }

    fn table(&mut self) -> PResult<Table> {
        if self.eat("[") {
            let mut rows = vec![self.row()?];
            while self.eat(",") {
                rows.push(self.row()?);
            }
            self.expect("]")?;
            return Ok(Table::Rows(rows));
        }
        self.expect("{")?;
        let mut pairs = Vec::new();
        if !self.is_sym("}") {
            loop {
                let x = self.elem()?;
                self.expect("->")?;
                pairs.push((x, self.elem()?));
                if !self.eat(",") {
                    break;
                }
            }
        }
        self.expect("}")?;
        Ok(Table::Pairs(pairs))
    }

    fn row(&mut self) -> PResult<Vec<Rat>> {
        self.expect("[")?;
        let mut r = vec![self.rat()?];
        while self.eat(",") {
            r.push(self.rat()?);
        }
        self.expect("]")?;
        Ok(r)
    }

    fn rat(&mut self) -> PResult<Rat> {
        let neg = self.eat("-");
        let pos = self.pos();
        let big = |n: u64| {
            i64::try_from(n).map_err(|_| ParseError { pos, expected: vec!["a 63-bit integer".into()], found: n.to_string() })
        };
        let num = big(self.int()?)?;
        let den = if self.eat("/") { big(self.int()?)? } else { 1 };
        if den == 0 {
            return Err(ParseError { pos, expected: vec!["a nonzero denominator".into()], found: "0".into() });
        }
        Ok(Rat { num: if neg { -num } else { num }, den })
    }

    fn elem(&mut self) -> PResult<Elem> {
        if self.eat("(") {
            let mut xs = vec![self.elem()?];
            while self.eat(",") {
                xs.push(self.elem()?);
            }
            self.expect(")")?;
            return Ok(Elem::Tuple(xs));
        }
        Ok(Elem::Label(self.label()?))
    }

    fn typeexpr(&mut self) -> PResult<TypeExpr> {
        let name = self.ident()?;
        if !self.eat("(") {
            return Ok(TypeExpr::Name(name));
        }
        let t = match name.name.as_str() {
            "first" => TypeExpr::First(self.usize()?),
            "hom" => {
                let n = self.usize()?;
                self.expect(",")?;
                TypeExpr::Hom(n, self.usize()?)
            }
            "ns" => {
                let a = self.typeexpr()?;
                self.expect(",")?;
                TypeExpr::Ns(Box::new(a), Box::new(self.typeexpr()?))
            }
            _ => {
                self.i -= 2;
                return self.fail(&["`first`", "`hom`", "`ns`", "a type name"]);
            }
        };
        self.expect(")")?;
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_statement_program() {
        let p = parse("model finset; object A = {0,1}; morphism f: A -> A = {0->1,1->0}; check laws enriched;").unwrap();
        assert_eq!(p.stmts.len(), 4);
        assert!(matches!(&p.stmts[3], Stmt::Check { suite, .. } if suite.name == "enriched"));
        let Stmt::Morphism { body, .. } = &p.stmts[2] else { panic!() };
        assert_eq!(body.text, "{0->1,1->0}");
    }

    #[test]
    fn empty_program() {
        assert_eq!(parse("").unwrap(), Program::default());
        assert_eq!(parse("  # nothing\n").unwrap(), Program::default());
    }

    #[test]
    fn semicolon_binds_looser_than_star() {
        let p = parse("morphism g: A -> A = f * h ; k;").unwrap();
        let Stmt::Morphism { body, .. } = &p.stmts[0] else { panic!() };
        let MorKind::Then(l, r) = &body.kind else { panic!("{:?}", body.kind) };
        assert!(matches!(l.kind, MorKind::Par(..)));
        assert!(matches!(&r.kind, MorKind::Name(i) if i.name == "k"));
        assert_eq!(body.text, "f * h ; k");
    }

    #[test]
    fn sequence_stops_at_next_statement() {
        let p = parse("morphism g: A -> A = f ; f;\ncheck enriched;").unwrap();
        assert_eq!(p.stmts.len(), 2);
    }

    #[test]
    fn errors_carry_position_and_expected_tokens() {
        let e = parse("model finset;\nobject A = ;").unwrap_err();
        assert_eq!(e.pos, Pos { line: 2, col: 12 });
        assert!(e.expected.iter().any(|s| s == "`{`"), "{:?}", e.expected);
        assert!(e.to_string().starts_with("parse error at 2:12"));
        let e = parse("morphism f: A -> = f;").unwrap_err();
        assert_eq!(e.pos.col, 18);
        assert!(parse("object A = {0,1}").is_err());
        assert!(parse("$").is_err());
    }

    #[test]
    fn structured_expressions() {
        let src = "morphism c: [A,B] * [B,C] -> [A,C] = seq(A, B, C);\n\
                   morphism d: I -> [A*A, A] = kappa(curry(eval(A, A), A) ; id([A,A]));\n\
                   morphism m: A -> A = [[1/2, 1], [-1/2, 0]];\n\
                   morphism r: A * A -> A = {(0,1) -> 1};\n\
                   type T = ns(hom(2,2), hom(2, 2));\n\
                   tower T3 = [finset, finset, finset];\n\
                   corrupt seq(A, A, A) at 0;\n\
                   check tower size=2 tower=T3;";
        let p = parse(src).unwrap();
        assert_eq!(p.stmts.len(), 8);
        let Stmt::Morphism { dom, .. } = &p.stmts[0] else { panic!() };
        assert!(matches!(dom, ObjExpr::Tensor(..)));
        let Stmt::Morphism { body, .. } = &p.stmts[2] else { panic!() };
        assert_eq!(body.kind, MorKind::Table(Table::Rows(vec![
            vec![Rat { num: 1, den: 2 }, Rat { num: 1, den: 1 }],
            vec![Rat { num: -1, den: 2 }, Rat { num: 0, den: 1 }],
        ])));
        let Stmt::Check { opts, text, .. } = &p.stmts[7] else { panic!() };
        assert_eq!(opts.len(), 2);
        assert_eq!(text, "check tower size=2 tower=T3");
    }
}
