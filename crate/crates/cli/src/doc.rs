//! The line-oriented document format.
//!
//! ```text
//! algebroid aff1_line
//!   base x
//!   frame e1, e2
//!   anchor e1 = -x
//!   anchor e2 = 1
//!   bracket [e1, e2] = e2
//! end
//! ```
//!
//! Blocks are `algebroid`, `connection`, `vb`, `cochain`, `triple` and
//! `imsection`; each names earlier blocks through its `base` line.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;
use vbalg::algebroid::{BundleDerivation, Connection, FrameAlgebroid, Section};
use vbalg::defcomplex::DefCochain;
use vbalg::im::{IMSectionCoords, IMTriple};
use vbalg::symexpr::{parse_expression_at, Chart, PolyMatrix, PolyVector, Polynomial};
use vbalg::vb::{
    build_full_core_unchecked, build_tangent_unchecked, build_trivial_core_unchecked, gauge_vb_unchecked, SplitVB,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DocError {
    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: {message}")]
    Resolve { line: usize, message: String },
}

type Result<T> = std::result::Result<T, DocError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Algebroid,
    Connection,
    Vb,
    Cochain,
    Triple,
    ImSection,
}

impl Kind {
    fn from_keyword(s: &str) -> Option<Kind> {
        Some(match s {
            "algebroid" => Kind::Algebroid,
            "connection" => Kind::Connection,
            "vb" => Kind::Vb,
            "cochain" => Kind::Cochain,
            "triple" => Kind::Triple,
            "imsection" => Kind::ImSection,
            _ => return None,
        })
    }

    fn keys(self) -> &'static [&'static str] {
        match self {
            Kind::Algebroid => &["base", "frame", "anchor", "bracket"],
            Kind::Connection => &["base", "frame", "christoffel"],
            Kind::Vb => &["base"],
            Kind::Cochain => &["base", "degree", "value", "symbol"],
            Kind::Triple => &["base", "value", "symbol"],
            Kind::ImSection => &["base", "X", "U", "V"],
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Algebroid => "algebroid",
            Kind::Connection => "connection",
            Kind::Vb => "vb",
            Kind::Cochain => "cochain",
            Kind::Triple => "triple",
            Kind::ImSection => "imsection",
        })
    }
}

#[derive(Clone, Debug)]
pub enum Object {
    Algebroid(Arc<FrameAlgebroid>),
    Connection(Connection),
    Vb(SplitVB),
    /// A cochain together with the name of the block it lives on.
    Cochain {
        base: String,
        cochain: DefCochain,
    },
    Triple {
        vb: String,
        triple: IMTriple,
    },
    ImSection {
        connection: String,
        coords: IMSectionCoords,
    },
}

#[derive(Clone, Debug)]
pub struct Entry {
    pub kind: Kind,
    pub name: String,
    pub line: usize,
    pub object: Object,
}

/// A parsed and resolved document.
#[derive(Clone, Debug, Default)]
pub struct SpecDocument {
    entries: Vec<Entry>,
}

/// One body line: the key and the text after it, with the 1-based column
/// where that text starts.
#[derive(Clone, Debug)]
struct Line {
    no: usize,
    key: String,
    key_col: usize,
    rest: String,
    col: usize,
}

struct RawBlock {
    kind: Kind,
    name: String,
    line: usize,
    body: Vec<Line>,
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> DocError {
    DocError::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn lift(line: usize, e: vbalg::Error) -> DocError {
    match e {
        vbalg::Error::Syntax { line, column, message } => parse_err(line, column, message),
        vbalg::Error::UnknownIdentifier { line, column, name } => {
            parse_err(line, column, format!("unknown identifier `{name}`"))
        }
        e => DocError::Resolve {
            line,
            message: e.to_string(),
        },
    }
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Splits off the first whitespace-delimited word; returns it, the rest and
/// the column of the rest.
fn split_word(s: &str, col: usize) -> (&str, &str, usize) {
    let lead = s.len() - s.trim_start().len();
    let s2 = &s[lead..];
    let end = s2.find(char::is_whitespace).unwrap_or(s2.len());
    let word = &s2[..end];
    let after = &s2[end..];
    let pad = after.len() - after.trim_start().len();
    (word, after.trim(), col + lead + end + pad)
}

/// Pieces of `s` separated by `sep`, trimmed, with their columns.
fn split_at(s: &str, col: usize, sep: char) -> Vec<(&str, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    for (i, ch) in s.char_indices().chain(std::iter::once((s.len(), sep))) {
        if ch == sep {
            let piece = &s[start..i];
            let lead = piece.len() - piece.trim_start().len();
            out.push((piece.trim(), col + start + lead));
            start = i + ch.len_utf8();
        }
    }
    out
}

fn lex(text: &str) -> Result<Vec<RawBlock>> {
    let mut blocks = Vec::new();
    let mut current: Option<RawBlock> = None;
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let (word, rest, col) = split_word(content, 1);
        let word_col = 1 + content.len() - content.trim_start().len();
        match current.as_mut() {
            None => {
                let Some(kind) = Kind::from_keyword(word) else {
                    return Err(parse_err(
                        no,
                        word_col,
                        format!("expected a block keyword, found `{word}`"),
                    ));
                };
                if !is_ident(rest) {
                    return Err(parse_err(no, col, format!("expected a block name after `{word}`")));
                }
                current = Some(RawBlock {
                    kind,
                    name: rest.to_string(),
                    line: no,
                    body: Vec::new(),
                });
            }
            Some(block) => {
                if word == "end" {
                    if !rest.is_empty() {
                        return Err(parse_err(no, col, "unexpected text after `end`"));
                    }
                    blocks.push(current.take().expect("open block"));
                    continue;
                }
                if !block.kind.keys().contains(&word) {
                    return Err(parse_err(
                        no,
                        word_col,
                        format!("unknown key `{word}` in {} block", block.kind),
                    ));
                }
                block.body.push(Line {
                    no,
                    key: word.to_string(),
                    key_col: word_col,
                    rest: rest.to_string(),
                    col,
                });
            }
        }
    }
    if let Some(b) = current {
        let last = text.lines().count();
        return Err(parse_err(
            last.max(1),
            1,
            format!("{} block `{}` is missing `end`", b.kind, b.name),
        ));
    }
    Ok(blocks)
}

fn ident_list(l: &Line) -> Result<Vec<String>> {
    if l.rest.is_empty() {
        return Ok(Vec::new());
    }
    split_at(&l.rest, l.col, ',')
        .into_iter()
        .map(|(s, c)| {
            if is_ident(s) {
                Ok(s.to_string())
            } else {
                Err(parse_err(l.no, c, format!("expected a name, found `{s}`")))
            }
        })
        .collect()
}

/// `lhs = rhs`, returning the trimmed sides and the column of `rhs`.
fn assignment(l: &Line) -> Result<(&str, &str, usize)> {
    let Some(eq) = l.rest.find('=') else {
        return Err(parse_err(l.no, l.col + l.rest.len(), "expected `=`"));
    };
    let rhs = &l.rest[eq + 1..];
    let lead = rhs.len() - rhs.trim_start().len();
    Ok((l.rest[..eq].trim(), rhs.trim(), l.col + eq + 1 + lead))
}

/// `[a, b, ...]` to frame indices.
fn tuple(l: &Line, lhs: &str, frame: &[String]) -> Result<Vec<usize>> {
    let inner = lhs
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| parse_err(l.no, l.col, format!("expected a tuple `[...]`, found `{lhs}`")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    split_at(inner, l.col + 1, ',')
        .into_iter()
        .map(|(s, c)| {
            frame
                .iter()
                .position(|f| f == s)
                .ok_or_else(|| parse_err(l.no, c, format!("unknown frame element `{s}`")))
        })
        .collect()
}

fn frame_index(l: &Line, name: &str, frame: &[String]) -> Result<usize> {
    frame
        .iter()
        .position(|f| f == name)
        .ok_or_else(|| parse_err(l.no, l.col, format!("unknown frame element `{name}`")))
}

fn poly(l: &Line, text: &str, col: usize, chart: &Chart) -> Result<Polynomial> {
    parse_expression_at(text, chart, l.no, col).map_err(|e| lift(l.no, e))
}

fn components(l: &Line, text: &str, col: usize, chart: &Chart, count: usize) -> Result<Vec<Polynomial>> {
    let pieces = split_at(text, col, ',');
    if pieces.len() == 1 && pieces[0].0 == "0" {
        return Ok(vec![Polynomial::zero(chart); count]);
    }
    if pieces.len() != count {
        return Err(parse_err(
            l.no,
            col,
            format!("expected {count} components, found {}", pieces.len()),
        ));
    }
    pieces.into_iter().map(|(s, c)| poly(l, s, c, chart)).collect()
}

fn matrix(l: &Line, text: &str, col: usize, chart: &Chart, rows: usize, cols: usize) -> Result<PolyMatrix> {
    let (text, col) = match text.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
        Some(inner) => (inner, col + 1),
        None => (text, col),
    };
    if text.trim() == "0" {
        return Ok(PolyMatrix::zero(chart, rows, cols));
    }
    let row_texts = split_at(text, col, ';');
    if row_texts.len() != rows {
        return Err(parse_err(
            l.no,
            col,
            format!("expected {rows} rows, found {}", row_texts.len()),
        ));
    }
    let mut out = Vec::with_capacity(rows);
    for (r, c) in row_texts {
        let entries = split_at(r, c, ',');
        if entries.len() != cols {
            return Err(parse_err(
                l.no,
                c,
                format!("expected {cols} entries per row, found {}", entries.len()),
            ));
        }
        out.push(
            entries
                .into_iter()
                .map(|(s, c)| poly(l, s, c, chart))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    PolyMatrix::from_rows(chart, out).map_err(|e| lift(l.no, e))
}

/// A linear combination of frame elements with polynomial coefficients,
/// e.g. `x*e1 - 2*e2`.
fn combination(l: &Line, text: &str, col: usize, chart: &Chart, frame: &[String]) -> Result<Section> {
    let ext = chart.extend(frame).map_err(|e| lift(l.no, e))?;
    let p = poly(l, text, col, &ext)?;
    let m = chart.dim();
    let mut rest = p.clone();
    let mut coeffs = Vec::with_capacity(frame.len());
    for j in 0..frame.len() {
        let cj = p.coefficient_of_power(m + j, 1);
        let back = cj
            .reexpress(chart)
            .map_err(|_| parse_err(l.no, col, format!("`{text}` is not linear in the frame")))?;
        rest -= &(&cj * &Polynomial::coordinate(&ext, m + j));
        coeffs.push(back);
    }
    if !rest.is_zero() {
        return Err(parse_err(
            l.no,
            col,
            format!("`{text}` is not a linear combination of the frame"),
        ));
    }
    Section::new(chart, coeffs).map_err(|e| lift(l.no, e))
}

struct Body<'a> {
    block: &'a RawBlock,
}

impl<'a> Body<'a> {
    fn single(&self, key: &str) -> Result<Option<&'a Line>> {
        let mut found = self.block.body.iter().filter(|l| l.key == key);
        let first = found.next();
        if let Some(dup) = found.next() {
            return Err(parse_err(dup.no, dup.key_col, format!("duplicate `{key}` line")));
        }
        Ok(first)
    }

    fn required(&self, key: &str) -> Result<&'a Line> {
        self.single(key)?.ok_or_else(|| DocError::Resolve {
            line: self.block.line,
            message: format!("{} block `{}` needs a `{key}` line", self.block.kind, self.block.name),
        })
    }

    fn all(&self, key: &'a str) -> impl Iterator<Item = &'a Line> + 'a {
        self.block.body.iter().filter(move |l| l.key == key)
    }
}

impl SpecDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let mut doc = SpecDocument::default();
        for block in lex(text)? {
            if doc.get(&block.name).is_some() {
                return Err(DocError::Resolve {
                    line: block.line,
                    message: format!("duplicate block name `{}`", block.name),
                });
            }
            let object = doc.build(&block)?;
            doc.entries.push(Entry {
                kind: block.kind,
                name: block.name.clone(),
                line: block.line,
                object,
            });
        }
        Ok(doc)
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn get(&self, name: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.name == name)
    }

    fn reference(&self, l: &Line, name: &str, kinds: &[Kind]) -> Result<&Entry> {
        match self.get(name) {
            Some(e) if kinds.contains(&e.kind) => Ok(e),
            Some(e) => Err(DocError::Resolve {
                line: l.no,
                message: format!("`{name}` is a {} block, expected {}", e.kind, join_kinds(kinds)),
            }),
            None => Err(DocError::Resolve {
                line: l.no,
                message: format!("unknown block `{name}`"),
            }),
        }
    }

    fn build(&self, block: &RawBlock) -> Result<Object> {
        let body = Body { block };
        match block.kind {
            Kind::Algebroid => self.algebroid(&body),
            Kind::Connection => self.connection(&body),
            Kind::Vb => self.vb(&body),
            Kind::Cochain => self.cochain(&body),
            Kind::Triple => self.triple(&body),
            Kind::ImSection => self.imsection(&body),
        }
    }

    fn algebroid(&self, body: &Body) -> Result<Object> {
        let coords = match body.single("base")? {
            Some(l) => ident_list(l)?,
            None => Vec::new(),
        };
        let chart = Chart::new(coords);
        let frame = ident_list(body.required("frame")?)?;
        let mut anchor = vec![PolyVector::zero(&chart); frame.len()];
        let mut seen = vec![false; frame.len()];
        for l in body.all("anchor") {
            let (lhs, rhs, col) = assignment(l)?;
            let i = frame_index(l, lhs, &frame)?;
            if std::mem::replace(&mut seen[i], true) {
                return Err(parse_err(l.no, l.key_col, format!("duplicate anchor for `{lhs}`")));
            }
            let comps = components(l, rhs, col, &chart, chart.dim())?;
            anchor[i] = PolyVector::new(&chart, comps).map_err(|e| lift(l.no, e))?;
        }
        let mut brackets: Vec<((usize, usize), Section)> = Vec::new();
        for l in body.all("bracket") {
            let (lhs, rhs, col) = assignment(l)?;
            let idx = tuple(l, lhs, &frame)?;
            if idx.len() != 2 {
                return Err(parse_err(l.no, l.col, "a bracket takes two frame elements"));
            }
            let s = combination(l, rhs, col, &chart, &frame)?;
            let (key, s) = if idx[0] <= idx[1] {
                ((idx[0], idx[1]), s)
            } else {
                ((idx[1], idx[0]), s.neg())
            };
            if brackets.iter().any(|(k, _)| *k == key) {
                return Err(parse_err(l.no, l.key_col, format!("duplicate bracket {lhs}")));
            }
            brackets.push((key, s));
        }
        let a = FrameAlgebroid::new(&chart, frame, anchor, brackets).map_err(|e| lift(body.block.line, e))?;
        Ok(Object::Algebroid(Arc::new(a)))
    }

    fn connection(&self, body: &Body) -> Result<Object> {
        let base = body.required("base")?;
        let Object::Algebroid(a) = &self.reference(base, &base.rest, &[Kind::Algebroid])?.object else {
            unreachable!("kind checked")
        };
        let names = ident_list(body.required("frame")?)?;
        let n = names.len();
        let chart = a.chart();
        let mut gammas = vec![PolyMatrix::zero(chart, n, n); a.rank()];
        let mut seen = vec![false; a.rank()];
        for l in body.all("christoffel") {
            let (lhs, rhs, col) = assignment(l)?;
            let i = frame_index(l, lhs, a.frame_names())?;
            if std::mem::replace(&mut seen[i], true) {
                return Err(parse_err(l.no, l.key_col, format!("duplicate christoffel for `{lhs}`")));
            }
            gammas[i] = matrix(l, rhs, col, chart, n, n)?;
        }
        Connection::new(a.clone(), names, gammas)
            .map(Object::Connection)
            .map_err(|e| lift(body.block.line, e))
    }

    fn vb(&self, body: &Body) -> Result<Object> {
        let l = body.required("base")?;
        let (kind, name, _) = split_word(&l.rest, l.col);
        let built = match kind {
            "trivial-core" | "full-core" | "gauge" => {
                let Object::Connection(conn) = &self.reference(l, name, &[Kind::Connection])?.object else {
                    unreachable!("kind checked")
                };
                match kind {
                    "trivial-core" => build_trivial_core_unchecked(conn),
                    "full-core" => build_full_core_unchecked(conn),
                    _ => gauge_vb_unchecked(conn),
                }
            }
            "tangent" => {
                let Object::Algebroid(a) = &self.reference(l, name, &[Kind::Algebroid])?.object else {
                    unreachable!("kind checked")
                };
                build_tangent_unchecked(a)
            }
            _ => {
                return Err(parse_err(
                    l.no,
                    l.col,
                    format!("expected trivial-core, full-core, tangent or gauge, found `{kind}`"),
                ))
            }
        };
        built.map(Object::Vb).map_err(|e| lift(l.no, e))
    }

    fn cochain(&self, body: &Body) -> Result<Object> {
        let base = body.required("base")?;
        let parent = match &self.reference(base, &base.rest, &[Kind::Algebroid, Kind::Vb])?.object {
            Object::Algebroid(a) => a.clone(),
            Object::Vb(w) => w.total().clone(),
            _ => unreachable!("kind checked"),
        };
        let dl = body.required("degree")?;
        let degree: usize = dl
            .rest
            .parse()
            .map_err(|_| parse_err(dl.no, dl.col, format!("expected a degree, found `{}`", dl.rest)))?;
        let chart = parent.chart();
        let frame = parent.frame_names();
        let mut values = Vec::new();
        for l in body.all("value") {
            let (lhs, rhs, col) = assignment(l)?;
            let idx = tuple(l, lhs, frame)?;
            if idx.len() != degree {
                return Err(parse_err(
                    l.no,
                    l.col,
                    format!("a degree-{degree} value takes {degree} arguments"),
                ));
            }
            values.push((idx, combination(l, rhs, col, chart, frame)?));
        }
        let mut symbols = Vec::new();
        for l in body.all("symbol") {
            let (lhs, rhs, col) = assignment(l)?;
            let idx = tuple(l, lhs, frame)?;
            if degree == 0 || idx.len() != degree - 1 {
                return Err(parse_err(
                    l.no,
                    l.col,
                    format!("a degree-{degree} cochain has no symbol on this tuple"),
                ));
            }
            let comps = components(l, rhs, col, chart, chart.dim())?;
            symbols.push((idx, PolyVector::new(chart, comps).map_err(|e| lift(l.no, e))?));
        }
        let cochain = DefCochain::new(parent, degree, values, symbols).map_err(|e| lift(body.block.line, e))?;
        Ok(Object::Cochain {
            base: base.rest.clone(),
            cochain,
        })
    }

    fn triple(&self, body: &Body) -> Result<Object> {
        let base = body.required("base")?;
        let Object::Vb(w) = &self.reference(base, &base.rest, &[Kind::Vb])?.object else {
            unreachable!("kind checked")
        };
        let bc = w.base_chart();
        let ranks = [w.fat_rank(), w.side_rank(), w.core_rank()];
        let mut mats: Vec<PolyMatrix> = ranks.iter().map(|&r| PolyMatrix::zero(bc, r, r)).collect();
        let mut syms = vec![PolyVector::zero(bc); 3];
        for l in body.all("value") {
            let (i, rhs, col) = triple_part(l)?;
            mats[i] = matrix(l, rhs, col, bc, ranks[i], ranks[i])?;
        }
        for l in body.all("symbol") {
            let (i, rhs, col) = triple_part(l)?;
            let comps = components(l, rhs, col, bc, bc.dim())?;
            syms[i] = PolyVector::new(bc, comps).map_err(|e| lift(l.no, e))?;
        }
        let mut parts = syms.into_iter().zip(mats).map(|(s, m)| BundleDerivation::new(s, m));
        let mut next = || parts.next().expect("three parts").map_err(|e| lift(body.block.line, e));
        let (fat, side, core) = (next()?, next()?, next()?);
        let triple = IMTriple::new(w, fat, side, core).map_err(|e| lift(body.block.line, e))?;
        Ok(Object::Triple {
            vb: base.rest.clone(),
            triple,
        })
    }

    fn imsection(&self, body: &Body) -> Result<Object> {
        let base = body.required("base")?;
        let Object::Connection(conn) = &self.reference(base, &base.rest, &[Kind::Connection])?.object else {
            unreachable!("kind checked")
        };
        let a = conn.algebroid();
        let chart = a.chart();
        let mut x = PolyVector::zero(chart);
        let mut u = PolyMatrix::zero(chart, a.rank(), a.rank());
        let mut v = PolyMatrix::zero(chart, conn.rank(), conn.rank());
        if let Some(l) = body.single("X")? {
            let (_, rhs, col) = assignment(l)?;
            x = PolyVector::new(chart, components(l, rhs, col, chart, chart.dim())?).map_err(|e| lift(l.no, e))?;
        }
        if let Some(l) = body.single("U")? {
            let (_, rhs, col) = assignment(l)?;
            u = matrix(l, rhs, col, chart, a.rank(), a.rank())?;
        }
        if let Some(l) = body.single("V")? {
            let (_, rhs, col) = assignment(l)?;
            v = matrix(l, rhs, col, chart, conn.rank(), conn.rank())?;
        }
        let coords = IMSectionCoords::new(conn, x, u, v).map_err(|e| lift(body.block.line, e))?;
        Ok(Object::ImSection {
            connection: base.rest.clone(),
            coords,
        })
    }
}

fn triple_part(l: &Line) -> Result<(usize, &str, usize)> {
    let (word, _, _) = split_word(&l.rest, l.col);
    let i = match word {
        "fat" => 0,
        "side" => 1,
        "core" => 2,
        _ => {
            return Err(parse_err(
                l.no,
                l.col,
                format!("expected fat, side or core, found `{word}`"),
            ))
        }
    };
    let (_, rhs, col) = assignment(l)?;
    Ok((i, rhs, col))
}

fn join_kinds(kinds: &[Kind]) -> String {
    kinds.iter().map(Kind::to_string).collect::<Vec<_>>().join(" or ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use vbalg::fixtures;

    #[test]
    fn parses_aff1_line() {
        let doc = SpecDocument::parse(
            "algebroid a  # the aff(1) action\n  base x\n  frame e1, e2\n  anchor e1 = -x\n  anchor e2 = 1\n  bracket [e1, e2] = e2\nend\n",
        )
        .unwrap();
        let Object::Algebroid(a) = &doc.get("a").unwrap().object else {
            panic!()
        };
        assert_eq!(**a, *fixtures::aff1_line());
    }

    #[test]
    fn reversed_bracket_is_negated() {
        let doc = SpecDocument::parse("algebroid a\n frame e1, e2\n bracket [e2, e1] = -e2\nend\n").unwrap();
        let Object::Algebroid(a) = &doc.get("a").unwrap().object else {
            panic!()
        };
        assert_eq!(**a, *fixtures::aff1());
    }

    #[test]
    fn connection_and_vb() {
        let text = "algebroid tm\n base x\n frame e1\n anchor e1 = 1\nend\n\
                    connection g\n base tm\n frame f1\n christoffel e1 = x\nend\n\
                    vb w\n base trivial-core g\nend\n";
        let doc = SpecDocument::parse(text).unwrap();
        let Object::Connection(c) = &doc.get("g").unwrap().object else {
            panic!()
        };
        assert_eq!(*c, fixtures::tm_connection_x());
        let Object::Vb(w) = &doc.get("w").unwrap().object else {
            panic!()
        };
        assert_eq!(w.total(), fixtures::tc_tm_x().total());
    }

    #[test]
    fn cochain_with_coefficients() {
        let text =
            "algebroid a\n base x\n frame e1, e2\n anchor e1 = -x\n anchor e2 = 1\n bracket [e1, e2] = e2\nend\n\
                    cochain c\n base a\n degree 1\n value [e1] = x*e1 + (1/2)*e2\n symbol [] = x^2\nend\n";
        let doc = SpecDocument::parse(text).unwrap();
        let Object::Cochain { cochain, .. } = &doc.get("c").unwrap().object else {
            panic!()
        };
        let ch = cochain.parent().chart();
        let x = Polynomial::var(ch, "x").unwrap();
        assert_eq!(cochain.value_on_frame(&[0]).coeff(0), &x);
        assert_eq!(cochain.value_on_frame(&[0]).coeff(1).to_string(), "1/2");
        assert_eq!(cochain.symbol_on_frame(&[]).component(0), &(&x * &x));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = SpecDocument::parse("algebroid a\n base x\n frame e1\n anchor e1 = x +* 1\nend\n").unwrap_err();
        match err {
            DocError::Parse { line, column, .. } => assert_eq!((line, column), (4, 17)),
            e => panic!("{e}"),
        }
        let err = SpecDocument::parse("algebroid a\n base x\n frame e1\n anchor e1 = y\nend\n").unwrap_err();
        assert!(
            matches!(
                err,
                DocError::Parse {
                    line: 4,
                    column: 14,
                    ..
                }
            ),
            "{err}"
        );
    }

    #[test]
    fn structural_errors() {
        let cases = [
            "algebroid a\n frame e1\n",
            "algebra a\nend\n",
            "algebroid a\n frame e1\n colour e1 = 1\nend\n",
            "algebroid a\n frame e1, e2\n bracket [e1, e2] = e1*e2\nend\n",
            "algebroid a\n frame e1, e2\n bracket [e1, e3] = e1\nend\n",
        ];
        for text in cases {
            assert!(
                matches!(SpecDocument::parse(text), Err(DocError::Parse { .. })),
                "{text}"
            );
        }
        let resolve = [
            "connection c\n base nothing\n frame f1\nend\n",
            "algebroid a\n frame e1\nend\nvb w\n base trivial-core a\nend\n",
            "algebroid a\n frame e1\nend\nalgebroid a\n frame e1\nend\n",
        ];
        for text in resolve {
            assert!(
                matches!(SpecDocument::parse(text), Err(DocError::Resolve { .. })),
                "{text}"
            );
        }
    }

    #[test]
    fn matrices_and_imsections() {
        let text = "algebroid tm\n base x\n frame e1\n anchor e1 = 1\nend\n\
                    connection g\n base tm\n frame f1, f2\n christoffel e1 = [0, 1; x, 0]\nend\n\
                    imsection s\n base g\n X = 1\n V = 1, 0; 0, 1\nend\n";
        let doc = SpecDocument::parse(text).unwrap();
        let Object::ImSection { coords, .. } = &doc.get("s").unwrap().object else {
            panic!()
        };
        assert_eq!(coords.v().to_string(), "[1, 0; 0, 1]");
        assert!(coords.u().is_zero());
    }
}
