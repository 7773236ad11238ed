//! Text formats: relation expressions, job configurations, and the plain
//! presentation format.
//!
//! All user-facing text is 1-based (matching the usual cycle notation);
//! the parser/printer is exactly the 0-based boundary. The relation
//! grammar, informally:
//!
//! ```text
//! relation   := product ("^" INT)?
//! product    := factor ("*" factor)*
//! factor     := primary ("^" INT)?
//! primary    := PERM | "@" PERM | "pi" | "t[" objref "]"
//!             | "(" product ")" | "[" product "," product "]"
//! PERM       := ("(" points ")")+ | "()"
//! objref     := INT | "{" INT+ ("|" INT+)* "}" | NAME
//! ```
//!
//! `@`-prefixed permutations are written in the source action's points
//! (for example 24 Golay points) and induced into the control action;
//! `pi` marks the unknown of a search template; `t[A]` resolves a label
//! bound in the configuration or exported by the control recipe.

use std::collections::HashMap;

use thiserror::Error;

use crate::action::{InducedAction, Labels};
use crate::coset::{Presentation, Strategy, Word};
use crate::perm::Permutation;
use crate::progenitor::ProgElement;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TextError {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("cannot resolve: {0}")]
    Resolve(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ObjRef {
    /// 0-based action point.
    Point(usize),
    /// Sorted 0-based source-point set.
    Set(Vec<u32>),
    /// Partition blocks, 0-based.
    Partition(Vec<Vec<u32>>),
    Label(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelExpr {
    /// Cycle-notation permutation; `source` marks an `@` literal written
    /// in the source action's points.
    Perm { cycles: Vec<Vec<u32>>, source: bool },
    Pi,
    TGen(ObjRef),
    Product(Vec<RelExpr>),
    Power(Box<RelExpr>, u32),
    Commutator(Box<RelExpr>, Box<RelExpr>),
}

struct Cursor<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor {
            text,
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn loc(&self) -> (usize, usize) {
        let mut line = 1;
        let mut col = 1;
        for &b in &self.bytes[..self.pos] {
            if b == b'\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        (line, col)
    }

    fn error(&self, msg: impl Into<String>) -> TextError {
        let (line, col) = self.loc();
        TextError::Syntax {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && (self.bytes[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn peek_raw(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> Result<(), TextError> {
        self.skip_ws();
        if self.peek_raw() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", b as char)))
        }
    }

    fn try_eat(&mut self, b: u8) -> bool {
        self.skip_ws();
        if self.peek_raw() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<u64, TextError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        self.text[start..self.pos]
            .parse()
            .map_err(|_| self.error("number out of range"))
    }

    fn ident(&mut self) -> Result<String, TextError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_alphanumeric()
                || self.bytes[self.pos] == b'_'
                || self.bytes[self.pos] == b'-')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a name"));
        }
        Ok(self.text[start..self.pos].to_string())
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.bytes.len()
    }
}

/// Parses a relation expression.
pub fn parse_relation(text: &str) -> Result<RelExpr, TextError> {
    let mut c = Cursor::new(text);
    let expr = parse_product(&mut c)?;
    let expr = if c.try_eat(b'^') {
        let e = c.integer()? as u32;
        if e == 0 {
            return Err(c.error("exponent must be at least 1"));
        }
        RelExpr::Power(Box::new(expr), e)
    } else {
        expr
    };
    if !c.at_end() {
        return Err(c.error("trailing input after relation"));
    }
    Ok(expr)
}

fn parse_product(c: &mut Cursor) -> Result<RelExpr, TextError> {
    let mut factors = vec![parse_factor(c)?];
    while c.try_eat(b'*') {
        factors.push(parse_factor(c)?);
    }
    Ok(if factors.len() == 1 {
        factors.pop().expect("one factor")
    } else {
        RelExpr::Product(factors)
    })
}

fn parse_factor(c: &mut Cursor) -> Result<RelExpr, TextError> {
    let primary = parse_primary(c)?;
    if c.try_eat(b'^') {
        let e = c.integer()? as u32;
        if e == 0 {
            return Err(c.error("exponent must be at least 1"));
        }
        Ok(RelExpr::Power(Box::new(primary), e))
    } else {
        Ok(primary)
    }
}

fn parse_primary(c: &mut Cursor) -> Result<RelExpr, TextError> {
    match c.peek() {
        Some(b'@') => {
            c.eat(b'@')?;
            Ok(RelExpr::Perm {
                cycles: parse_cycles(c)?,
                source: true,
            })
        }
        Some(b'(') => {
            // A '(' followed by a digit or ')' is cycle notation; anything
            // else opens a grouped product.
            let save = c.pos;
            c.eat(b'(')?;
            let inner = c.peek();
            c.pos = save;
            match inner {
                Some(b) if b.is_ascii_digit() || b == b')' => Ok(RelExpr::Perm {
                    cycles: parse_cycles(c)?,
                    source: false,
                }),
                _ => {
                    c.eat(b'(')?;
                    let product = parse_product(c)?;
                    c.eat(b')')?;
                    Ok(product)
                }
            }
        }
        Some(b'[') => {
            c.eat(b'[')?;
            let a = parse_product(c)?;
            c.eat(b',')?;
            let b = parse_product(c)?;
            c.eat(b']')?;
            Ok(RelExpr::Commutator(Box::new(a), Box::new(b)))
        }
        Some(b't') => {
            // Either the `t[...]` generator or an identifier beginning
            // with t is not allowed here; look ahead for the bracket.
            let save = c.pos;
            let name = c.ident()?;
            if name == "t" && c.try_eat(b'[') {
                let obj = parse_objref(c)?;
                c.eat(b']')?;
                Ok(RelExpr::TGen(obj))
            } else {
                c.pos = save;
                Err(c.error("expected 't[...]'"))
            }
        }
        Some(b'p') => {
            let name = c.ident()?;
            if name == "pi" {
                Ok(RelExpr::Pi)
            } else {
                Err(c.error("unknown name (expected 'pi')"))
            }
        }
        _ => Err(c.error("expected a permutation, 'pi', 't[...]', '(' or '['")),
    }
}

fn parse_cycles(c: &mut Cursor) -> Result<Vec<Vec<u32>>, TextError> {
    let mut cycles = Vec::new();
    c.eat(b'(')?;
    loop {
        let mut cycle = Vec::new();
        loop {
            c.skip_ws();
            if c.try_eat(b',') {
                continue;
            }
            if c.try_eat(b')') {
                break;
            }
            let v = c.integer()?;
            if v == 0 {
                return Err(c.error("points are 1-based"));
            }
            cycle.push(v as u32 - 1);
        }
        if cycle.len() == 1 {
            return Err(c.error("singleton cycle"));
        }
        if !cycle.is_empty() {
            cycles.push(cycle);
        }
        // Another cycle follows only if '(' comes immediately next.
        if c.peek() == Some(b'(') {
            c.eat(b'(')?;
        } else {
            break;
        }
    }
    Ok(cycles)
}

fn parse_objref(c: &mut Cursor) -> Result<ObjRef, TextError> {
    match c.peek() {
        Some(b'{') => {
            c.eat(b'{')?;
            let mut blocks: Vec<Vec<u32>> = vec![Vec::new()];
            loop {
                c.skip_ws();
                if c.try_eat(b'}') {
                    break;
                }
                if c.try_eat(b'|') {
                    blocks.push(Vec::new());
                    continue;
                }
                let v = c.integer()?;
                if v == 0 {
                    return Err(c.error("points are 1-based"));
                }
                blocks.last_mut().expect("block open").push(v as u32 - 1);
            }
            if blocks.len() == 1 {
                let mut set = blocks.pop().expect("one block");
                set.sort_unstable();
                Ok(ObjRef::Set(set))
            } else {
                Ok(ObjRef::Partition(blocks))
            }
        }
        Some(b) if b.is_ascii_digit() => {
            let v = c.integer()?;
            if v == 0 {
                return Err(c.error("points are 1-based"));
            }
            Ok(ObjRef::Point(v as usize - 1))
        }
        _ => Ok(ObjRef::Label(c.ident()?)),
    }
}

/// Context for resolving a parsed relation against a control action.
pub struct ResolveContext<'a> {
    pub n: usize,
    pub labels: &'a Labels,
    pub bindings: &'a [(String, usize)],
    /// Needed to resolve `@` source-permutation literals.
    pub action: Option<&'a InducedAction>,
}

/// A resolved relation: a concrete element with an exponent, or a search
/// template when `pi` is present.
#[derive(Debug, Clone)]
pub enum Resolved {
    Element { element: ProgElement, exponent: u32 },
    Template { word: Vec<u32>, exponent: u32 },
}

pub fn resolve_relation(expr: &RelExpr, ctx: &ResolveContext) -> Result<Resolved, TextError> {
    let (inner, exponent) = match expr {
        RelExpr::Power(inner, e) => (inner.as_ref(), *e),
        other => (other, 1),
    };
    if contains_pi(inner) {
        let word = resolve_template(inner, ctx)?;
        Ok(Resolved::Template { word, exponent })
    } else {
        let element = resolve_element(inner, ctx)?;
        Ok(Resolved::Element { element, exponent })
    }
}

fn contains_pi(expr: &RelExpr) -> bool {
    match expr {
        RelExpr::Pi => true,
        RelExpr::Product(fs) => fs.iter().any(contains_pi),
        RelExpr::Power(inner, _) => contains_pi(inner),
        RelExpr::Commutator(a, b) => contains_pi(a) || contains_pi(b),
        _ => false,
    }
}

fn resolve_template(expr: &RelExpr, ctx: &ResolveContext) -> Result<Vec<u32>, TextError> {
    // The unknown must lead: pi * t-word.
    let factors = match expr {
        RelExpr::Product(fs) => fs.as_slice(),
        RelExpr::Pi => {
            return Err(TextError::Resolve(
                "a template needs at least one symmetric generator".into(),
            ))
        }
        _ => {
            return Err(TextError::Resolve(
                "templates must have the shape (pi * t[..] * ..)^d".into(),
            ))
        }
    };
    if factors.first() != Some(&RelExpr::Pi) || factors.iter().skip(1).any(contains_pi) {
        return Err(TextError::Resolve(
            "'pi' must appear exactly once, leading the template".into(),
        ));
    }
    let mut word = Vec::new();
    for f in &factors[1..] {
        let e = resolve_element(f, ctx)?;
        if !e.pi.is_identity() {
            return Err(TextError::Resolve(
                "template tails must be words in the symmetric generators".into(),
            ));
        }
        word.extend(e.word);
    }
    if word.is_empty() {
        return Err(TextError::Resolve(
            "a template needs at least one symmetric generator".into(),
        ));
    }
    Ok(word)
}

fn resolve_element(expr: &RelExpr, ctx: &ResolveContext) -> Result<ProgElement, TextError> {
    match expr {
        RelExpr::Pi => Err(TextError::Resolve("'pi' outside a template".into())),
        RelExpr::Perm { cycles, source } => {
            let cycles_usize: Vec<Vec<usize>> = cycles
                .iter()
                .map(|c| c.iter().map(|&p| p as usize).collect())
                .collect();
            let pi = if *source {
                let action = ctx.action.ok_or_else(|| {
                    TextError::Resolve("'@' permutation without a source action".into())
                })?;
                let sp = Permutation::from_cycles(action.source_degree(), &cycles_usize)
                    .map_err(|e| TextError::Resolve(e.to_string()))?;
                action
                    .induce(&sp)
                    .map_err(|e| TextError::Resolve(e.to_string()))?
            } else {
                Permutation::from_cycles(ctx.n, &cycles_usize)
                    .map_err(|e| TextError::Resolve(e.to_string()))?
            };
            Ok(ProgElement { pi, word: Vec::new() })
        }
        RelExpr::TGen(obj) => {
            let point = resolve_objref(obj, ctx)?;
            Ok(ProgElement {
                pi: Permutation::identity(ctx.n),
                word: vec![point as u32],
            })
        }
        RelExpr::Product(fs) => {
            let mut acc = ProgElement::identity(ctx.n);
            for f in fs {
                acc = acc.multiply(&resolve_element(f, ctx)?);
            }
            Ok(acc)
        }
        RelExpr::Power(inner, e) => Ok(resolve_element(inner, ctx)?.pow(*e)),
        RelExpr::Commutator(a, b) => {
            let a = resolve_element(a, ctx)?;
            let b = resolve_element(b, ctx)?;
            Ok(a.inverse()
                .multiply(&b.inverse())
                .multiply(&a)
                .multiply(&b))
        }
    }
}

fn resolve_objref(obj: &ObjRef, ctx: &ResolveContext) -> Result<usize, TextError> {
    match obj {
        ObjRef::Point(p) => {
            if *p >= ctx.n {
                return Err(TextError::Resolve(format!(
                    "t-index {} out of range (n = {})",
                    p + 1,
                    ctx.n
                )));
            }
            Ok(*p)
        }
        ObjRef::Set(set) => ctx
            .labels
            .resolve_set(set)
            .ok_or_else(|| TextError::Resolve("set does not name an action object".into())),
        ObjRef::Partition(blocks) => ctx
            .labels
            .resolve_partition(blocks)
            .ok_or_else(|| TextError::Resolve("partition does not name an action object".into())),
        ObjRef::Label(name) => ctx
            .bindings
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| *v)
            .ok_or_else(|| TextError::Resolve(format!("unbound label '{name}'"))),
    }
}

/// A parsed job or catalog-entry configuration.
#[derive(Debug, Clone, Default)]
pub struct JobConfig {
    pub id: Option<String>,
    pub scale: Option<String>,
    /// Control recipe tokens, e.g. `["sn", "6", "subsets", "3"]`.
    pub control: Vec<String>,
    /// Explicit control generators in cycle notation, with their degree.
    pub control_perms: Option<(usize, Vec<String>)>,
    pub relations: Vec<String>,
    pub labels: Vec<(String, usize)>,
    pub expected_index: Option<(u64, String)>,
    pub expected_order: Option<(u128, String)>,
    pub max_cosets: Option<usize>,
    pub strategy: Option<Strategy>,
    pub notes: Vec<String>,
}

/// Parses the sectioned `key: value` configuration format. Unknown keys
/// are rejected.
pub fn parse_config(text: &str) -> Result<JobConfig, TextError> {
    let mut config = JobConfig::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once(':').ok_or(TextError::Syntax {
            line: lineno + 1,
            col: 1,
            msg: "expected 'key: value'".into(),
        })?;
        let value = value.trim();
        let syntax = |msg: String| TextError::Syntax {
            line: lineno + 1,
            col: key.len() + 2,
            msg,
        };
        match key.trim() {
            "id" => config.id = Some(value.to_string()),
            "scale" => config.scale = Some(value.to_string()),
            "control" => {
                if let Some(rest) = value.strip_prefix("perms") {
                    let mut parts = rest.trim().splitn(2, ' ');
                    let degree: usize = parts
                        .next()
                        .and_then(|d| d.parse().ok())
                        .ok_or_else(|| syntax("perms needs a degree".into()))?;
                    let gens_text = parts.next().unwrap_or("");
                    let gens = split_top_level(gens_text, ',')
                        .into_iter()
                        .map(|s| s.trim().to_string())
                        .filter(|s| !s.is_empty())
                        .collect();
                    config.control_perms = Some((degree, gens));
                } else {
                    config.control = value.split_whitespace().map(|s| s.to_string()).collect();
                }
            }
            "relations" => {
                for part in split_top_level(value, ',') {
                    let part = part.trim();
                    if !part.is_empty() {
                        config.relations.push(part.to_string());
                    }
                }
            }
            "labels" => {
                for part in split_top_level(value, ',') {
                    let (name, target) = part
                        .split_once('=')
                        .ok_or_else(|| syntax("labels are 'NAME = #POINT'".into()))?;
                    let target = target.trim();
                    let point: usize = target
                        .strip_prefix('#')
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| syntax("label target must be '#<1-based point>'".into()))?;
                    if point == 0 {
                        return Err(syntax("label points are 1-based".into()));
                    }
                    config.labels.push((name.trim().to_string(), point - 1));
                }
            }
            "expected-index" => {
                let mut parts = value.split_whitespace();
                let v: u64 = parts
                    .next()
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| syntax("expected-index needs a number".into()))?;
                let tag = parts.next().unwrap_or("paper").to_string();
                config.expected_index = Some((v, tag));
            }
            "expected-order" => {
                let mut parts = value.split_whitespace();
                let v: u128 = parts
                    .next()
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| syntax("expected-order needs a number".into()))?;
                let tag = parts.next().unwrap_or("paper").to_string();
                config.expected_order = Some((v, tag));
            }
            "max-cosets" => {
                config.max_cosets =
                    Some(value.parse().map_err(|_| syntax("bad max-cosets".into()))?)
            }
            "strategy" => {
                config.strategy = Some(match value {
                    "felsch" => Strategy::Felsch,
                    "hlt" | "hlt-lookahead" => Strategy::HltLookahead,
                    other => return Err(syntax(format!("unknown strategy '{other}'"))),
                })
            }
            "notes" => config.notes.push(value.to_string()),
            other => return Err(syntax(format!("unknown key '{other}'"))),
        }
    }
    Ok(config)
}

/// Splits on a separator, ignoring separators inside (), [], {}.
fn split_top_level(text: &str, sep: char) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut current = String::new();
    for ch in text.chars() {
        match ch {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            c if c == sep && depth == 0 => {
                parts.push(std::mem::take(&mut current));
                continue;
            }
            _ => {}
        }
        current.push(ch);
    }
    if !current.trim().is_empty() {
        parts.push(current);
    }
    parts
}

/// Parses the plain presentation format:
/// `gens: a b; rels: a^2, b^3, (a*b)^7, [a,b]^4; sub: a`.
pub fn parse_raw_presentation(text: &str) -> Result<(Presentation, Vec<Word>), TextError> {
    let mut gens: Vec<String> = Vec::new();
    let mut rels: Vec<Word> = Vec::new();
    let mut sub: Vec<Word> = Vec::new();
    let mut seen_gens = false;
    for section in text.split(';') {
        let section = section.trim();
        if section.is_empty() {
            continue;
        }
        let (key, value) = section.split_once(':').ok_or(TextError::Syntax {
            line: 1,
            col: 1,
            msg: "expected 'gens:', 'rels:' or 'sub:' section".into(),
        })?;
        match key.trim() {
            "gens" => {
                gens = value.split_whitespace().map(|s| s.to_string()).collect();
                seen_gens = true;
            }
            "rels" | "sub" => {
                if !seen_gens {
                    return Err(TextError::Resolve(
                        "'gens:' must come before relators".into(),
                    ));
                }
                let name_index: HashMap<&str, usize> = gens
                    .iter()
                    .enumerate()
                    .map(|(i, n)| (n.as_str(), i))
                    .collect();
                let target = if key.trim() == "rels" {
                    &mut rels
                } else {
                    &mut sub
                };
                for part in split_top_level(value, ',') {
                    let part = part.trim();
                    if part.is_empty() {
                        continue;
                    }
                    let mut c = Cursor::new(part);
                    let word = parse_gen_word(&mut c, &name_index)?;
                    if !c.at_end() {
                        return Err(c.error("trailing input in word"));
                    }
                    target.push(word);
                }
            }
            other => {
                return Err(TextError::Resolve(format!(
                    "unknown presentation section '{other}'"
                )))
            }
        }
    }
    if gens.is_empty() {
        return Err(TextError::Resolve("no generators declared".into()));
    }
    Ok((Presentation::new(gens, rels), sub))
}

fn parse_gen_word(c: &mut Cursor, names: &HashMap<&str, usize>) -> Result<Word, TextError> {
    let mut acc = parse_gen_factor(c, names)?;
    while c.try_eat(b'*') {
        acc = acc.concat(&parse_gen_factor(c, names)?);
    }
    Ok(acc)
}

fn parse_gen_factor(c: &mut Cursor, names: &HashMap<&str, usize>) -> Result<Word, TextError> {
    let base = match c.peek() {
        Some(b'(') => {
            c.eat(b'(')?;
            let w = parse_gen_word(c, names)?;
            c.eat(b')')?;
            w
        }
        Some(b'[') => {
            c.eat(b'[')?;
            let a = parse_gen_word(c, names)?;
            c.eat(b',')?;
            let b = parse_gen_word(c, names)?;
            c.eat(b']')?;
            Word::commutator(&a, &b)
        }
        _ => {
            let name = c.ident()?;
            let &gi = names
                .get(name.as_str())
                .ok_or_else(|| TextError::Resolve(format!("unknown generator '{name}'")))?;
            Word::generator(gi)
        }
    };
    if c.try_eat(b'^') {
        c.skip_ws();
        let negative = c.try_eat(b'-');
        let e = c.integer()? as u32;
        let powered = base.pow(e);
        Ok(if negative { powered.inverse() } else { powered })
    } else {
        Ok(base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{induced_action, on_k_subsets, ActionRecipe};
    use crate::group::PermutationGroup;

    fn ctx_natural(n: usize) -> (InducedAction, Labels) {
        let g = PermutationGroup::symmetric(n);
        let a = induced_action(&g, &ActionRecipe::Natural).unwrap();
        let labels = a.labels.clone();
        (a, labels)
    }

    #[test]
    fn parse_simple_relation() {
        let expr = parse_relation("((1 2) * t[1])^3").unwrap();
        let (action, labels) = ctx_natural(4);
        let ctx = ResolveContext {
            n: 4,
            labels: &labels,
            bindings: &[],
            action: Some(&action),
        };
        match resolve_relation(&expr, &ctx).unwrap() {
            Resolved::Element { element, exponent } => {
                assert_eq!(exponent, 3);
                assert_eq!(element.word, vec![0]);
                assert_eq!(
                    element.pi,
                    Permutation::parse_cycles("(1 2)", 4).unwrap()
                );
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_template_with_pi() {
        let expr = parse_relation("(pi * t[1] * t[2])^2").unwrap();
        let (action, labels) = ctx_natural(4);
        let ctx = ResolveContext {
            n: 4,
            labels: &labels,
            bindings: &[],
            action: Some(&action),
        };
        match resolve_relation(&expr, &ctx).unwrap() {
            Resolved::Template { word, exponent } => {
                assert_eq!(word, vec![0, 1]);
                assert_eq!(exponent, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_subset_tgen() {
        let s6 = PermutationGroup::symmetric(6);
        let action = on_k_subsets(&s6, 3).unwrap();
        let labels = action.labels.clone();
        let expr = parse_relation("((4 5) * t[{1 2 3}])^3").unwrap();
        let ctx = ResolveContext {
            n: action.degree(),
            labels: &labels,
            bindings: &[],
            action: Some(&action),
        };
        match resolve_relation(&expr, &ctx).unwrap() {
            Resolved::Element { element, exponent } => {
                assert_eq!(exponent, 3);
                assert_eq!(element.word, vec![0]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn commutator_inside_word() {
        // t_3 t_2 [t_1, t_2 t_3] expands to an 8-letter word.
        let expr = parse_relation("t[3]*t[2]*[t[1], t[2]*t[3]]").unwrap();
        let (action, labels) = ctx_natural(4);
        let ctx = ResolveContext {
            n: 4,
            labels: &labels,
            bindings: &[],
            action: Some(&action),
        };
        match resolve_relation(&expr, &ctx).unwrap() {
            Resolved::Element { element, .. } => {
                assert!(element.pi.is_identity());
                assert_eq!(element.word, vec![2, 1, 0, 2, 1, 0, 1, 2]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn labels_resolve() {
        let expr = parse_relation("pi * t[A] * t[B]").unwrap();
        let (action, labels) = ctx_natural(6);
        let bindings = vec![("A".to_string(), 2usize), ("B".to_string(), 5usize)];
        let ctx = ResolveContext {
            n: 6,
            labels: &labels,
            bindings: &bindings,
            action: Some(&action),
        };
        match resolve_relation(&expr, &ctx).unwrap() {
            Resolved::Template { word, exponent } => {
                assert_eq!(word, vec![2, 5]);
                assert_eq!(exponent, 1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_error_has_location() {
        let err = parse_relation("t[1)^3").unwrap_err();
        match err {
            TextError::Syntax { line, col, .. } => {
                assert_eq!(line, 1);
                assert!(col >= 3);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_relation("((1 2) * t[1]").is_err());
        assert!(parse_relation("t[0]").is_err());
    }

    #[test]
    fn config_round_trip() {
        let text = "\
id: coxeter-d5
scale: desk
control: sn 5 subsets 2
relations: ((2 3) * t[{1 2}])^3
expected-index: 16 derived-oracle
expected-order: 1920 derived-oracle
max-cosets: 100000
notes: theorem family D
";
        let config = parse_config(text).unwrap();
        assert_eq!(config.id.as_deref(), Some("coxeter-d5"));
        assert_eq!(config.control, vec!["sn", "5", "subsets", "2"]);
        assert_eq!(config.relations.len(), 1);
        assert_eq!(config.expected_index, Some((16, "derived-oracle".into())));
        assert_eq!(config.max_cosets, Some(100_000));
    }

    #[test]
    fn config_rejects_unknown_keys() {
        assert!(parse_config("nonsense: 1").is_err());
    }

    #[test]
    fn raw_presentation_parses() {
        let (p, sub) =
            parse_raw_presentation("gens: a b; rels: a^2, b^3, (a*b)^7, [a,b]^4; sub: a").unwrap();
        assert_eq!(p.ngens(), 2);
        assert_eq!(p.relators.len(), 4);
        assert_eq!(p.relators[0], Word(vec![1, 1]));
        assert_eq!(p.relators[3].len(), 16);
        assert_eq!(sub, vec![Word(vec![1])]);
        let t = crate::coset::todd_coxeter(
            &p,
            &sub,
            &crate::coset::EnumerationLimits::with_max(10_000),
        )
        .unwrap();
        assert_eq!(t.index(), 84);
    }

    #[test]
    fn raw_presentation_negative_exponent() {
        let (p, _) = parse_raw_presentation("gens: a b; rels: a*b^-1*a*b").unwrap();
        assert_eq!(p.relators[0], Word(vec![1, -2, 1, 2]));
    }

    #[test]
    fn perms_control_config() {
        let config =
            parse_config("control: perms 5 (1 2 3 4 5), (1 2)\nrelations: (pi * t[1])^3").unwrap();
        let (degree, gens) = config.control_perms.unwrap();
        assert_eq!(degree, 5);
        assert_eq!(gens, vec!["(1 2 3 4 5)", "(1 2)"]);
    }
}
