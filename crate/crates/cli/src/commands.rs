use std::path::Path;

use thiserror::Error;
use vbalg::algebroid::{BundleDerivation, Section};
use vbalg::defcomplex::DefCochain;
use vbalg::im::{check_im_triple, im_section_pde_check, triple_of_linear, IMTriple};
use vbalg::symexpr::{PolyMatrix, PolyVector, Polynomial};
use vbalg::Check;

use crate::doc::{DocError, Entry, Kind, Object, SpecDocument};
use crate::report::Report;

/// Failures that stop a command before any check runs; all map to exit
/// code 2.
#[derive(Debug, Error)]
pub enum CmdError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Doc(#[from] DocError),
    #[error("no block named `{0}`")]
    UnknownTarget(String),
    #[error("`{name}` is a block of kind {kind}; {expected}")]
    WrongKind { name: String, kind: Kind, expected: String },
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error(transparent)]
    Core(#[from] vbalg::Error),
}

impl CmdError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub degree: usize,
    pub poly: u32,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { degree: 4, poly: 16 }
    }
}

pub fn load(path: &Path, caps: Caps) -> Result<SpecDocument, CmdError> {
    let text = std::fs::read_to_string(path).map_err(|source| CmdError::Io {
        path: path.display().to_string(),
        source,
    })?;
    load_str(&text, caps)
}

/// Parses a document and enforces the polynomial degree cap on every block.
pub fn load_str(text: &str, caps: Caps) -> Result<SpecDocument, CmdError> {
    let doc = SpecDocument::parse(text)?;
    for e in doc.entries() {
        let d = object_degree(&e.object);
        if d > caps.poly {
            return Err(DocError::Resolve {
                line: e.line,
                message: vbalg::Error::PolyDegreeCap {
                    degree: d,
                    cap: caps.poly,
                }
                .to_string(),
            }
            .into());
        }
    }
    Ok(doc)
}

fn max_degree<'a>(ps: impl IntoIterator<Item = &'a Polynomial>) -> u32 {
    ps.into_iter().filter_map(Polynomial::total_degree).max().unwrap_or(0)
}

fn vector_degree(v: &PolyVector) -> u32 {
    max_degree(v.components())
}

fn matrix_degree(m: &PolyMatrix) -> u32 {
    max_degree(m.entries())
}

fn section_degree(s: &Section) -> u32 {
    max_degree(s.coeffs())
}

fn derivation_degree(d: &BundleDerivation) -> u32 {
    vector_degree(d.symbol()).max(matrix_degree(d.matrix()))
}

fn object_degree(o: &Object) -> u32 {
    match o {
        Object::Algebroid(a) => {
            let r = a.rank();
            let anchors = a.anchor_fields().iter().map(vector_degree);
            let brackets = (0..r)
                .flat_map(|i| (0..r).map(move |j| (i, j)))
                .map(|(i, j)| section_degree(a.frame_bracket(i, j)));
            anchors.chain(brackets).max().unwrap_or(0)
        }
        Object::Connection(c) => (0..c.algebroid().rank())
            .map(|al| matrix_degree(c.christoffel(al)))
            .max()
            .unwrap_or(0),
        Object::Vb(w) => object_degree(&Object::Algebroid(w.total().clone())),
        Object::Cochain { cochain, .. } => cochain.max_poly_degree(),
        Object::Triple { triple, .. } => [triple.fat(), triple.side(), triple.core()]
            .into_iter()
            .map(derivation_degree)
            .max()
            .unwrap_or(0),
        Object::ImSection { coords, .. } => vector_degree(coords.x())
            .max(matrix_degree(coords.u()))
            .max(matrix_degree(coords.v())),
    }
}

fn checks_or_error(name: &str, r: vbalg::Result<Vec<Check>>) -> Vec<Check> {
    r.unwrap_or_else(|e| vec![Check::error(name, e.to_string())])
}

/// Structural checks of every algebroid, connection and VB block.
pub fn validate(doc: &SpecDocument) -> Report {
    let mut report = Report::default();
    for e in doc.entries() {
        match &e.object {
            Object::Algebroid(a) => report.extend(&e.name, &a.validate()),
            Object::Connection(c) => report.push(&e.name, &c.check_flatness()),
            Object::Vb(w) => report.extend(&e.name, &w.validate()),
            Object::Cochain { .. } | Object::Triple { .. } | Object::ImSection { .. } => {}
        }
    }
    report
}

fn lookup<'a>(doc: &'a SpecDocument, name: &str) -> Result<&'a Entry, CmdError> {
    doc.get(name).ok_or_else(|| CmdError::UnknownTarget(name.to_string()))
}

fn within_cap(c: &DefCochain, caps: Caps) -> Result<(), CmdError> {
    let degree = c.max_poly_degree();
    if degree > caps.poly {
        return Err(vbalg::Error::PolyDegreeCap { degree, cap: caps.poly }.into());
    }
    Ok(())
}

/// The differential of a cochain block as a table, optionally followed by
/// the `d²=0` check.
pub fn diff(doc: &SpecDocument, name: &str, check_d2: bool, caps: Caps) -> Result<Report, CmdError> {
    let e = lookup(doc, name)?;
    let Object::Cochain { base, cochain } = &e.object else {
        return Err(CmdError::WrongKind {
            name: name.to_string(),
            kind: e.kind,
            expected: "diff takes a cochain".into(),
        });
    };
    let d = cochain.differential_with_cap(caps.degree)?;
    within_cap(&d, caps)?;
    let mut report = Report::default();
    report.text.push(format!("d {name} on {base}"));
    report.text.extend(d.table().to_string().lines().map(str::to_string));
    if check_d2 {
        let dd = d.differential_with_cap(caps.degree)?;
        let check = match first_entry(&dd) {
            None => Check::pass("d²=0"),
            Some((loc, res)) => Check::fail("d²=0", loc, res),
        };
        report.text.push(format!("d²=0: {}", check.status));
        report.push(name, &check);
    }
    Ok(report)
}

/// The first nonzero frame value or symbol of a cochain.
pub fn first_entry(c: &DefCochain) -> Option<(String, String)> {
    let a = c.parent();
    if let Some((idx, s)) = c.values().iter().next() {
        return Some((a.tuple_name(idx), s.display(a.frame_names()).to_string()));
    }
    c.symbols()
        .iter()
        .next()
        .map(|(idx, x)| (format!("symbol {}", a.tuple_name(idx)), x.to_string()))
}

/// IM conditions on a triple, the coordinate system on an IM-section
/// candidate, or the derivation conditions on a 1-cochain.
pub fn check_im(doc: &SpecDocument, name: &str) -> Result<Report, CmdError> {
    let e = lookup(doc, name)?;
    let mut report = Report::default();
    match &e.object {
        Object::Triple { vb, triple } => {
            let w = vb_of(doc, vb);
            report.extend(name, &checks_or_error("im_triple", check_im_triple(w, triple)));
        }
        Object::ImSection { connection, coords } => {
            let Object::Connection(conn) = &lookup(doc, connection)?.object else {
                unreachable!("resolved at parse time")
            };
            report.extend(name, &checks_or_error("pde", im_section_pde_check(conn, coords)));
        }
        Object::Cochain { base, cochain } if cochain.degree() == 1 => {
            if let Object::Vb(w) = &lookup(doc, base)?.object {
                let lin = w
                    .classify_cochain_linearity(cochain)
                    .unwrap_or_else(|e| Check::error("linear", e.to_string()));
                report.push(name, &lin);
                if lin.passed() {
                    let checks = triple_of_linear(w, cochain).and_then(|t: IMTriple| check_im_triple(w, &t));
                    report.extend(name, &checks_or_error("im_triple", checks));
                }
            } else {
                report.push(name, &cochain.is_algebroid_derivation());
                let cocycle = match cochain.differential().map(|d| first_entry(&d)) {
                    Ok(None) => Check::pass("cocycle"),
                    Ok(Some((loc, res))) => Check::fail("cocycle", loc, res),
                    Err(e) => Check::error("cocycle", e.to_string()),
                };
                report.push(name, &cocycle);
            }
        }
        _ => {
            return Err(CmdError::WrongKind {
                name: name.to_string(),
                kind: e.kind,
                expected: "check-im takes a triple, an imsection or a degree-1 cochain".into(),
            })
        }
    }
    Ok(report)
}

fn vb_of<'a>(doc: &'a SpecDocument, name: &str) -> &'a vbalg::vb::SplitVB {
    match doc.get(name).map(|e| &e.object) {
        Some(Object::Vb(w)) => w,
        _ => unreachable!("resolved at parse time"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const AFF1: &str = "algebroid aff1\n frame e1, e2\n bracket [e1, e2] = e2\nend\n";

    #[test]
    fn diff_of_a_section() {
        let doc = load_str(
            &format!("{AFF1}cochain eps1\n base aff1\n degree 0\n value [] = e1\nend\n"),
            Caps::default(),
        )
        .unwrap();
        let r = diff(&doc, "eps1", true, Caps::default()).unwrap();
        assert!(r.text.contains(&"value [e2] = e2".to_string()), "{:?}", r.text);
        assert!(r.text.contains(&"d²=0: pass".to_string()));
        assert!(r.all_passed());
    }

    #[test]
    fn diff_of_identity() {
        let text = format!("{AFF1}cochain id\n base aff1\n degree 1\n value [e1] = e1\n value [e2] = e2\nend\n");
        let doc = load_str(&text, Caps::default()).unwrap();
        let r = diff(&doc, "id", false, Caps::default()).unwrap();
        assert!(r.text.contains(&"value [e1, e2] = e2".to_string()), "{:?}", r.text);
        let r = check_im(&doc, "id").unwrap();
        assert!(!r.all_passed());
    }

    #[test]
    fn caps() {
        let text = format!("{AFF1}cochain c\n base aff1\n degree 3\nend\n");
        let doc = load_str(&text, Caps::default()).unwrap();
        let caps = Caps { degree: 3, poly: 16 };
        assert!(matches!(
            diff(&doc, "c", false, caps),
            Err(CmdError::Core(vbalg::Error::DegreeCap { .. }))
        ));
        let text = "algebroid a\n base x\n frame e1\n anchor e1 = x^3\nend\n";
        assert!(load_str(text, Caps { degree: 4, poly: 2 }).is_err());
        assert!(load_str(text, Caps { degree: 4, poly: 3 }).is_ok());
    }

    #[test]
    fn wrong_targets() {
        let doc = load_str(AFF1, Caps::default()).unwrap();
        assert!(matches!(
            diff(&doc, "aff1", false, Caps::default()),
            Err(CmdError::WrongKind { .. })
        ));
        assert!(matches!(check_im(&doc, "nothing"), Err(CmdError::UnknownTarget(_))));
    }
}
