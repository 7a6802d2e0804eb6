//! Formulas, contexts, sequents, their textual grammar, and the structural
//! maps between contexts and formulas (left-associated product, right action,
//! maximal decomposition).

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// An atomic formula label. Valid names match `[a-z][a-zA-Z0-9_]*`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom(String);

impl Atom {
    pub fn new(name: impl Into<String>) -> Result<Self, SyntaxError> {
        let name = name.into();
        if is_valid_atom_name(&name) {
            Ok(Atom(name))
        } else {
            Err(SyntaxError::BadAtomName(name))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

fn is_valid_atom_name(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for Atom {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Atom {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let name = String::deserialize(d)?;
        Atom::new(name).map_err(serde::de::Error::custom)
    }
}

/// A binary tree of atoms under `*`; the objects of the Tamari order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Formula {
    Atom(Atom),
    Prod(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Atom::new(name).expect("invalid atom name"))
    }

    pub fn prod(left: Formula, right: Formula) -> Formula {
        Formula::Prod(Box::new(left), Box::new(right))
    }

    /// The number of `*` operations in the formula.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Prod(l, r) => 1 + l.size() + r.size(),
        }
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Formula::Atom(_))
    }

    /// The ordered list of atoms occurring in the formula.
    pub fn frontier(&self) -> Vec<Atom> {
        let mut out = Vec::with_capacity(self.size() + 1);
        self.collect_frontier(&mut out);
        out
    }

    fn collect_frontier(&self, out: &mut Vec<Atom>) {
        match self {
            Formula::Atom(a) => out.push(a.clone()),
            Formula::Prod(l, r) => {
                l.collect_frontier(out);
                r.collect_frontier(out);
            }
        }
    }

    pub fn frontier_len(&self) -> usize {
        self.size() + 1
    }

    /// Replace every leaf atom by its image under `sigma`.
    pub fn relabel(&self, sigma: &impl Fn(&Atom) -> Atom) -> Formula {
        match self {
            Formula::Atom(a) => Formula::Atom(sigma(a)),
            Formula::Prod(l, r) => Formula::prod(l.relabel(sigma), r.relabel(sigma)),
        }
    }

    /// The maximal decomposition: unfolds the left-branching spine into an
    /// irreducible context whose left-associated product gives back the
    /// formula.
    pub fn max_decomposition(&self) -> Context {
        let mut out = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                Formula::Atom(_) => {
                    out.push(cur.clone());
                    break;
                }
                Formula::Prod(l, r) => {
                    out.push((**r).clone());
                    cur = l;
                }
            }
        }
        out.reverse();
        Context::new(out)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Outermost parentheses are omitted; nested products are bracketed.
        match self {
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Prod(l, r) => {
                l.fmt_inner(f)?;
                f.write_str("*")?;
                r.fmt_inner(f)
            }
        }
    }
}

impl Formula {
    fn fmt_inner(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Prod(..) => write!(f, "({self})"),
        }
    }
}

/// An ordered list of formulas; order and multiplicity are significant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Context(Vec<Formula>);

impl Context {
    pub fn new(formulas: Vec<Formula>) -> Context {
        Context(formulas)
    }

    pub fn empty() -> Context {
        Context(Vec::new())
    }

    pub fn singleton(f: Formula) -> Context {
        Context(vec![f])
    }

    pub fn formulas(&self) -> &[Formula] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// A context is reducible iff it is nonempty and its leftmost formula is
    /// compound. The empty context counts as irreducible.
    pub fn is_reducible(&self) -> bool {
        matches!(self.0.first(), Some(Formula::Prod(..)))
    }

    pub fn is_irreducible(&self) -> bool {
        !self.is_reducible()
    }

    pub fn frontier(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        for f in &self.0 {
            f.collect_frontier(&mut out);
        }
        out
    }

    pub fn frontier_len(&self) -> usize {
        self.0.iter().map(Formula::frontier_len).sum()
    }

    pub fn relabel(&self, sigma: &impl Fn(&Atom) -> Atom) -> Context {
        Context(self.0.iter().map(|f| f.relabel(sigma)).collect())
    }

    pub fn concat(&self, other: &Context) -> Context {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Context(v)
    }

    /// The left-associated product of a nonempty context.
    pub fn to_formula(&self) -> Result<Formula, SyntaxError> {
        let mut it = self.0.iter();
        let first = it.next().ok_or(SyntaxError::EmptyContext)?;
        let mut acc = first.clone();
        for f in it {
            acc = Formula::prod(acc, f.clone());
        }
        Ok(acc)
    }
}

impl From<Vec<Formula>> for Context {
    fn from(v: Vec<Formula>) -> Context {
        Context(v)
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for fl in &self.0 {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "{fl}")?;
        }
        Ok(())
    }
}

/// The right action of a context on a formula: `A . [] = A`,
/// `A . (D, B) = (A . D) * B`.
pub fn right_action(a: &Formula, delta: &[Formula]) -> Formula {
    let mut acc = a.clone();
    for b in delta {
        acc = Formula::prod(acc, b.clone());
    }
    acc
}

/// A context paired with a goal formula.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sequent {
    pub context: Context,
    pub goal: Formula,
}

impl Sequent {
    pub fn new(context: Context, goal: Formula) -> Sequent {
        Sequent { context, goal }
    }

    pub fn classify(&self) -> SequentClass {
        if self.context.is_empty() {
            SequentClass::EmptyContext
        } else if self.context.is_reducible() {
            SequentClass::LeftInverting
        } else if self.goal.is_atom() {
            SequentClass::Atomic
        } else {
            SequentClass::RightFocusing
        }
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.context.is_empty() {
            write!(f, "|- {}", self.goal)
        } else {
            write!(f, "{} |- {}", self.context, self.goal)
        }
    }
}

/// Each nonempty-context sequent falls in exactly one of the first three
/// classes; the empty-context class is an artifact convention (such sequents
/// are underivable).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequentClass {
    LeftInverting,
    RightFocusing,
    Atomic,
    EmptyContext,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SyntaxError {
    #[error("invalid atom name: {0:?}")]
    BadAtomName(String),
    #[error("empty context has no formula interpretation")]
    EmptyContext,
    #[error("syntax error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

fn parse_err(pos: usize, msg: impl Into<String>) -> SyntaxError {
    SyntaxError::Parse { pos, msg: msg.into() }
}

struct Scanner<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(src: &'a str) -> Self {
        Scanner { src, pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(|c: char| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn expect(&mut self, c: char) -> Result<(), SyntaxError> {
        match self.bump() {
            Some(got) if got == c => Ok(()),
            Some(got) => Err(parse_err(self.pos - got.len_utf8(), format!("expected '{c}', found '{got}'"))),
            None => Err(parse_err(self.src.len(), format!("expected '{c}', found end of input"))),
        }
    }

    fn atom(&mut self) -> Result<Atom, SyntaxError> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[start..];
        let len = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(rest.len());
        if len == 0 {
            return Err(parse_err(start, "expected an atom"));
        }
        let name = &rest[..len];
        self.pos += len;
        Atom::new(name).map_err(|_| parse_err(start, format!("invalid atom name {name:?}")))
    }

    // primary := atom | '(' binary ')'
    fn primary(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek() {
            Some('(') => {
                self.bump();
                let f = self.binary()?;
                self.expect(')')?;
                Ok(f)
            }
            _ => Ok(Formula::Atom(self.atom()?)),
        }
    }

    // binary := primary ('*' primary)?   -- `*` is non-associative
    fn binary(&mut self) -> Result<Formula, SyntaxError> {
        let left = self.primary()?;
        if self.peek() == Some('*') {
            self.bump();
            let right = self.primary()?;
            if self.peek() == Some('*') {
                return Err(parse_err(self.pos, "ambiguous: parenthesize (`*` is non-associative)"));
            }
            Ok(Formula::prod(left, right))
        } else {
            Ok(left)
        }
    }

    fn end(&mut self) -> Result<(), SyntaxError> {
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(parse_err(self.pos, format!("unexpected '{c}'"))),
        }
    }
}

/// Parse a formula. The grammar is `formula := atom | '(' formula '*' formula ')'`
/// with the outermost parentheses optional; `a*b*c` is rejected as ambiguous.
pub fn parse_formula(text: &str) -> Result<Formula, SyntaxError> {
    let mut s = Scanner::new(text);
    let f = s.binary()?;
    s.end()?;
    Ok(f)
}

/// Parse a comma-separated context; the empty (or all-whitespace) string
/// denotes the empty context.
pub fn parse_context(text: &str) -> Result<Context, SyntaxError> {
    if text.trim().is_empty() {
        return Ok(Context::empty());
    }
    let mut s = Scanner::new(text);
    let mut formulas = vec![s.binary()?];
    while s.peek() == Some(',') {
        s.bump();
        formulas.push(s.binary()?);
    }
    s.end()?;
    Ok(Context::new(formulas))
}

/// Parse a sequent of the form `context '|-' formula`.
pub fn parse_sequent(text: &str) -> Result<Sequent, SyntaxError> {
    let sep = text
        .find("|-")
        .ok_or_else(|| parse_err(text.len(), "expected '|-'"))?;
    let context = parse_context(&text[..sep])?;
    let goal = parse_formula(&text[sep + 2..])?;
    Ok(Sequent::new(context, goal))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fml(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn parse_basic() {
        assert_eq!(
            fml("(p*q)*r"),
            Formula::prod(Formula::prod(Formula::atom("p"), Formula::atom("q")), Formula::atom("r"))
        );
        assert_eq!(fml("p"), Formula::atom("p"));
        assert_eq!(fml("  ( p * q ) "), fml("p*q"));
    }

    #[test]
    fn parse_rejects_ambiguous() {
        let err = parse_formula("p*q*r").unwrap_err();
        assert!(matches!(err, SyntaxError::Parse { .. }));
        assert!(err.to_string().contains("ambiguous"));
        assert!(parse_formula("(p*q*r)").is_err());
        assert!(parse_formula("").is_err());
        assert!(parse_formula("p*").is_err());
        assert!(parse_formula("(p*q").is_err());
        assert!(parse_formula("P").is_err());
    }

    #[test]
    fn print_minimal_parens() {
        assert_eq!(fml("(p*q)*r").to_string(), "(p*q)*r");
        assert_eq!(fml("p").to_string(), "p");
        assert_eq!(fml("p*(q*r)").to_string(), "p*(q*r)");
    }

    #[test]
    fn frontier_unfolds() {
        let names = |f: &Formula| {
            f.frontier().iter().map(|a| a.name().to_string()).collect::<Vec<_>>()
        };
        assert_eq!(names(&fml("(p*q)*r")), ["p", "q", "r"]);
        assert_eq!(names(&fml("p")), ["p"]);
        let ctx = parse_context("p*q, r").unwrap();
        assert_eq!(
            ctx.frontier().iter().map(|a| a.name()).collect::<Vec<_>>(),
            ["p", "q", "r"]
        );
    }

    #[test]
    fn relabel_cases() {
        let constant = |_: &Atom| Atom::new("p").unwrap();
        assert_eq!(fml("(q*r)*s").relabel(&constant), fml("(p*p)*p"));
        let id = |a: &Atom| a.clone();
        assert_eq!(fml("q*r").relabel(&id), fml("q*r"));
        let swap = |a: &Atom| {
            Atom::new(match a.name() {
                "q" => "a",
                "r" => "b",
                other => other,
            })
            .unwrap()
        };
        assert_eq!(fml("q*r").relabel(&swap), fml("a*b"));
    }

    #[test]
    fn context_to_formula() {
        let ctx = parse_context("p, q, r").unwrap();
        assert_eq!(ctx.to_formula().unwrap(), fml("(p*q)*r"));
        let single = parse_context("p*(q*r)").unwrap();
        assert_eq!(single.to_formula().unwrap(), fml("p*(q*r)"));
        assert_eq!(Context::empty().to_formula(), Err(SyntaxError::EmptyContext));
    }

    #[test]
    fn right_action_cases() {
        let d = vec![fml("q"), fml("r")];
        assert_eq!(right_action(&fml("p"), &d), fml("(p*q)*r"));
        assert_eq!(right_action(&fml("p*q"), &[]), fml("p*q"));
        assert_eq!(right_action(&fml("p*q"), &[fml("r")]), fml("(p*q)*r"));
    }

    #[test]
    fn max_decomposition_cases() {
        assert_eq!(fml("(p*q)*r").max_decomposition(), parse_context("p, q, r").unwrap());
        assert_eq!(fml("p*(q*r)").max_decomposition(), parse_context("p, q*r").unwrap());
        assert_eq!(fml("p").max_decomposition(), parse_context("p").unwrap());
    }

    #[test]
    fn classify_cases() {
        let s = parse_sequent("p*q, r |- s").unwrap();
        assert_eq!(s.classify(), SequentClass::LeftInverting);
        let s = parse_sequent("p, q |- p*q").unwrap();
        assert_eq!(s.classify(), SequentClass::RightFocusing);
        let s = parse_sequent("p |- p").unwrap();
        assert_eq!(s.classify(), SequentClass::Atomic);
        let s = parse_sequent("|- p").unwrap();
        assert_eq!(s.classify(), SequentClass::EmptyContext);
    }

    #[test]
    fn json_shapes() {
        let f = fml("p*(q*r)");
        let v = serde_json::to_value(&f).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"prod": [{"atom": "p"}, {"prod": [{"atom": "q"}, {"atom": "r"}]}]})
        );
        let back: Formula = serde_json::from_value(v).unwrap();
        assert_eq!(back, f);
        let s = parse_sequent("p, q |- p*q").unwrap();
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(v["context"], serde_json::json!([{"atom": "p"}, {"atom": "q"}]));
        assert!(v["goal"].is_object());
    }
}
