//! The property battery run by `vbalg suite` over the built-in fixtures.

use std::sync::Arc;

use rand::Rng;
use vbalg::algebroid::{BundleDerivation, Connection, FrameAlgebroid, Section};
use vbalg::defcomplex::DefCochain;
use vbalg::fixtures;
use vbalg::im::{
    check_decomposition, check_im_triple, compose_linear, decompose_linear, decomposition_differential,
    horizontal_from_triple, internal_triple, round_trip_check, theorem_equivalence_suite, IMTriple,
};
use vbalg::random::{self, Rng8};
use vbalg::report::all_passed;
use vbalg::symexpr::{PolyMatrix, Polynomial};
use vbalg::vb::{build_full_core_unchecked, build_trivial_core_unchecked, gauge_vb_unchecked, SplitVB};
use vbalg::Check;

use crate::commands::{first_entry, Caps, CmdError};
use crate::report::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixtureKind {
    Algebroid,
    Connection,
    Vb,
    Broken,
}

impl FixtureKind {
    pub fn label(self) -> &'static str {
        match self {
            FixtureKind::Algebroid => "algebroid",
            FixtureKind::Connection => "connection",
            FixtureKind::Vb => "vb",
            FixtureKind::Broken => "broken",
        }
    }
}

enum Fixture {
    Algebroid(Arc<FrameAlgebroid>),
    Connection(Connection),
    Vb(SplitVB),
    /// A deliberately defective presentation and the checks expected to
    /// catch it.
    Broken(Vec<Check>, &'static [&'static str]),
}

impl Fixture {
    fn kind(&self) -> FixtureKind {
        match self {
            Fixture::Algebroid(_) => FixtureKind::Algebroid,
            Fixture::Connection(_) => FixtureKind::Connection,
            Fixture::Vb(_) => FixtureKind::Vb,
            Fixture::Broken(..) => FixtureKind::Broken,
        }
    }
}

fn broken() -> Vec<(String, Fixture)> {
    let nonflat = fixtures::abelian_nonflat();
    let unchecked = |r: vbalg::Result<SplitVB>| r.expect("shapes").total().validate();
    let mut flat_and_jacobi = vec![nonflat.check_flatness()];
    flat_and_jacobi.extend(unchecked(build_trivial_core_unchecked(&nonflat)));
    let out = vec![
        (
            "broken-jacobi",
            Fixture::Broken(fixtures::broken_jacobi().validate(), &["jacobi"]),
        ),
        (
            "broken-anchor",
            Fixture::Broken(fixtures::broken_anchor().validate(), &["anchor_compat"]),
        ),
        (
            "broken-flatness",
            Fixture::Broken(flat_and_jacobi, &["flatness", "jacobi"]),
        ),
        (
            "broken-full-core",
            Fixture::Broken(unchecked(build_full_core_unchecked(&nonflat)), &["jacobi"]),
        ),
        (
            "broken-gauge",
            Fixture::Broken(unchecked(gauge_vb_unchecked(&nonflat)), &["jacobi"]),
        ),
        (
            "broken-core-core",
            Fixture::Broken(fixtures::broken_core_core_vb().validate(), &["bracket_core_core"]),
        ),
        (
            "broken-anchor-vb",
            Fixture::Broken(fixtures::broken_anchor_vb().validate(), &["anchor_linear"]),
        ),
    ];
    out.into_iter().map(|(n, f)| (n.to_string(), f)).collect()
}

fn all_fixtures() -> Vec<(String, Fixture)> {
    let mut out: Vec<(String, Fixture)> = Vec::new();
    out.extend(
        fixtures::algebroids()
            .into_iter()
            .map(|(n, a)| (n.to_string(), Fixture::Algebroid(a))),
    );
    out.extend(
        fixtures::connections()
            .into_iter()
            .map(|(n, c)| (format!("conn-{n}"), Fixture::Connection(c))),
    );
    out.extend(
        fixtures::vbs()
            .into_iter()
            .map(|(n, w)| (n.to_string(), Fixture::Vb(w))),
    );
    out.extend(broken());
    out
}

/// Names and kinds of the built-in fixtures, in suite order.
pub fn fixture_names() -> Vec<(String, FixtureKind)> {
    all_fixtures().into_iter().map(|(n, f)| (n, f.kind())).collect()
}

/// Runs the battery on every fixture, or on the one named by `only`.
pub fn run(seed: u64, only: Option<&str>, caps: Caps) -> Result<Report, CmdError> {
    let selected: Vec<(String, Fixture)> = all_fixtures()
        .into_iter()
        .filter(|(n, _)| only.is_none_or(|o| o == n))
        .collect();
    if selected.is_empty() {
        return Err(CmdError::UnknownFixture(only.unwrap_or_default().to_string()));
    }
    let mut report = Report::default();
    for (i, (name, f)) in selected.iter().enumerate() {
        let s = seed.wrapping_add(1000 * i as u64);
        let checks = match f {
            Fixture::Algebroid(a) => algebroid_checks(a, s, caps),
            Fixture::Connection(c) => connection_checks(c, s),
            Fixture::Vb(w) => vb_checks(w, s, caps),
            Fixture::Broken(checks, expected) => vec![detects_defect(checks, expected)],
        };
        report.extend(name, &checks);
    }
    Ok(report)
}

fn error(name: &str, e: impl std::fmt::Display) -> Check {
    Check::error(name, e.to_string())
}

fn detects_defect(checks: &[Check], expected: &[&str]) -> Check {
    let missed = expected
        .iter()
        .find(|name| !checks.iter().any(|c| c.name == **name && !c.passed()));
    match missed {
        None => Check::pass("detects_defect"),
        Some(name) => Check::fail("detects_defect", *name, "defect not reported"),
    }
}

fn algebroid_checks(a: &Arc<FrameAlgebroid>, seed: u64, caps: Caps) -> Vec<Check> {
    let mut out = a.validate();
    out.push(d_squared(a, seed, 30, caps));
    out.push(cocycle_equivalence(a, seed + 1, 50, caps));
    out
}

/// `d(d c) = 0` on random cochains of degree 0, 1, 2 with coefficients of
/// degree at most 3.
pub fn d_squared(a: &Arc<FrameAlgebroid>, seed: u64, count: usize, caps: Caps) -> Check {
    let name = "d_squared";
    let mut rng = random::rng(seed);
    for i in 0..count {
        let c = random::cochain(&mut rng, a, i % 3, 3);
        let dd = c
            .differential_with_cap(caps.degree)
            .and_then(|d| d.differential_with_cap(caps.degree));
        match dd {
            Ok(dd) => {
                if let Some((loc, res)) = first_entry(&dd) {
                    return Check::fail(name, format!("cochain #{i} {loc}"), res);
                }
            }
            Err(e) => return error(name, e),
        }
    }
    Check::pass(name)
}

/// A zero-symbol 1-cochain with constant random matrix.
fn constant_cochain(rng: &mut Rng8, a: &Arc<FrameAlgebroid>) -> DefCochain {
    let c = a.chart();
    let r = a.rank();
    let mut m = PolyMatrix::zero(c, r, r);
    for i in 0..r {
        for j in 0..r {
            if rng.gen_bool(0.5) {
                m.set(i, j, Polynomial::constant(c, random::coefficient(rng)));
            }
        }
    }
    let d = BundleDerivation::endomorphism(m).expect("square");
    DefCochain::from_derivation(a.clone(), &d).expect("shapes")
}

/// Candidate 1-cochains: the internal derivations of the frame, then a
/// seeded mix of internal derivations of random sections, random
/// 1-cochains, constant matrices and perturbed internal derivations.
pub fn cocycle_candidates(a: &Arc<FrameAlgebroid>, seed: u64, count: usize) -> Vec<(String, DefCochain)> {
    let mut rng = random::rng(seed);
    let internal = |s| {
        DefCochain::from_section(a.clone(), s)
            .and_then(|c| c.differential())
            .expect("degree 0")
    };
    let mut out: Vec<(String, DefCochain)> = (0..a.rank())
        .map(|al| {
            (
                format!("internal {}", a.frame_names()[al]),
                internal(a.frame_section(al)),
            )
        })
        .collect();
    let mut i = 0;
    while out.len() < count {
        let (label, c) = match i % 4 {
            0 => ("internal", internal(random::section(&mut rng, a, 2))),
            1 => ("random", random::cochain(&mut rng, a, 1, 2)),
            2 => ("constant", constant_cochain(&mut rng, a)),
            _ => {
                let base = internal(random::section(&mut rng, a, 2));
                let bump = random::cochain(&mut rng, a, 1, 1);
                ("perturbed", base.add(&bump).expect("same parent"))
            }
        };
        out.push((format!("{label} #{}", out.len()), c));
        i += 1;
    }
    out
}

/// `c` is an algebroid derivation iff `d c = 0`, on [`cocycle_candidates`];
/// internal derivations must be cocycles.
pub fn cocycle_equivalence(a: &Arc<FrameAlgebroid>, seed: u64, count: usize, caps: Caps) -> Check {
    let name = "cocycle_equivalence";
    for (label, c) in cocycle_candidates(a, seed, count) {
        let der = c.is_algebroid_derivation().passed();
        let cocycle = match c.differential_with_cap(caps.degree) {
            Ok(d) => d.is_zero(),
            Err(e) => return error(name, e),
        };
        if der != cocycle || (label.starts_with("internal") && !der) {
            return Check::fail(name, label, format!("derivation={der} cocycle={cocycle}"));
        }
    }
    Check::pass(name)
}

fn connection_checks(c: &Connection, seed: u64) -> Vec<Check> {
    let flat = c.check_flatness();
    let jacobi = match build_trivial_core_unchecked(c) {
        Ok(w) => {
            let j = w.total().check_jacobi();
            if j.passed() == flat.passed() {
                Check::pass("jacobi_iff_flat")
            } else {
                Check::fail(
                    "jacobi_iff_flat",
                    "trivial core",
                    format!("flat={} jacobi={}", flat.status, j.status),
                )
            }
        }
        Err(e) => error("jacobi_iff_flat", e),
    };
    let equivalence = im_equivalence(c, seed, 100);
    vec![flat, jacobi, equivalence]
}

/// The three IM verdicts agree on every equivalence-suite candidate.
pub fn im_equivalence(c: &Connection, seed: u64, count: usize) -> Check {
    let name = "im_equivalence";
    match theorem_equivalence_suite(c, seed, count) {
        Ok(report) => match report.disagreements().first() {
            None => Check::pass(name),
            Some((cand, v)) => Check::fail(name, cand.label.clone(), v.to_string()),
        },
        Err(e) => error(name, e),
    }
}

fn vb_checks(w: &SplitVB, seed: u64, caps: Caps) -> Vec<Check> {
    let mut out = w.validate();
    out.push(euler_eigenvalues(w));
    out.push(linearity_routes(w, seed, 100));
    out.push(linear_clauses(w, seed + 1, 10, caps));
    out.push(im_round_trip(w, seed + 2, 25));
    out.push(decomposition(w, seed + 3, 4, caps));
    out
}

/// The Euler derivation is `0` on linear generators and `-1` on cores.
pub fn euler_eigenvalues(w: &SplitVB) -> Check {
    let eu = w.euler_derivation();
    let t = w.total();
    Check::first_failure("euler_eigenvalues", 0..t.rank(), |i| {
        let e = t.frame_section(i);
        let got = eu.apply(e.coeffs());
        let want = if w.is_core_generator(i) {
            e.neg()
        } else {
            t.zero_section()
        };
        if got == want.coeffs() {
            return None;
        }
        let s = Section::new(t.chart(), got).expect("total chart");
        let shown = s.display(t.frame_names()).to_string();
        Some((t.frame_names()[i].clone(), shown))
    })
}

/// Random cochains on the total algebroid: linear ones, arbitrary ones and
/// linear ones with one coefficient bumped by a fiber monomial.
fn linearity_candidates(w: &SplitVB, rng: &mut Rng8, count: usize) -> Vec<DefCochain> {
    let t = w.total();
    let tc = w.total_chart();
    (0..count)
        .map(|i| {
            let k = i % 3;
            match (i / 3) % 3 {
                0 => random::linear_cochain(rng, w, k, 1),
                1 => random::cochain(rng, t, k, 1),
                _ => {
                    let c = random::linear_cochain(rng, w, k, 1);
                    let idx: Vec<usize> = (0..k).collect();
                    if t.rank() < k.max(1) || tc.dim() == 0 {
                        return c;
                    }
                    let var = rng.gen_range(0..tc.dim());
                    let al = rng.gen_range(0..t.rank());
                    let p = Polynomial::coordinate(tc, var).pow(rng.gen_range(0..3));
                    let bump = t.frame_section(al).mul_poly(&p);
                    let extra = DefCochain::new(t.clone(), k, [(idx, bump)], []).expect("shapes");
                    c.add(&extra).expect("same parent")
                }
            }
        })
        .collect()
}

/// The Euler-bracket classification agrees with direct inspection.
pub fn linearity_routes(w: &SplitVB, seed: u64, count: usize) -> Check {
    let name = "linearity_routes";
    let mut rng = random::rng(seed);
    for (i, c) in linearity_candidates(w, &mut rng, count).into_iter().enumerate() {
        let (euler, direct) = match (w.classify_cochain_linearity(&c), w.inspect_linearity(&c)) {
            (Ok(a), Ok(b)) => (a.passed(), b.passed()),
            (Err(e), _) | (_, Err(e)) => return error(name, e),
        };
        if euler != direct {
            return Check::fail(
                name,
                format!("cochain #{i}"),
                format!("euler={euler} inspection={direct}"),
            );
        }
    }
    Check::pass(name)
}

/// Differentials of fat 0- and 1-cochains satisfy the linear shape clauses.
pub fn linear_clauses(w: &SplitVB, seed: u64, count: usize, caps: Caps) -> Check {
    let name = "linear_clauses";
    let mut rng = random::rng(seed);
    for i in 0..count {
        let k = i % 2;
        let c = if k == 0 {
            let s = w.lift_fat(&random::fat_section(&mut rng, w, 2));
            DefCochain::from_section(w.total().clone(), s).expect("total section")
        } else {
            random::linear_cochain(&mut rng, w, 1, 2)
        };
        let checks = c
            .differential_with_cap(caps.degree)
            .and_then(|d| w.corollary_c_check(&d));
        match checks {
            Ok(checks) => {
                if let Some(bad) = checks.iter().find(|c| !c.passed()) {
                    let wit = bad.witness.clone().expect("failures carry witnesses");
                    return Check::fail(
                        name,
                        format!("degree {k} #{i} {} {}", bad.name, wit.location),
                        wit.residual,
                    );
                }
            }
            Err(e) => return error(name, e),
        }
    }
    Check::pass(name)
}

fn nonzero(rng: &mut Rng8, w: &SplitVB) -> Polynomial {
    loop {
        let p = random::polynomial(rng, w.base_chart(), 1, 2);
        if !p.is_zero() {
            return p;
        }
    }
}

/// Changes one symbol component or matrix entry of one part of `t`.
fn perturb_triple(rng: &mut Rng8, w: &SplitVB, t: &IMTriple) -> IMTriple {
    let mut parts = [t.fat().clone(), t.side().clone(), t.core().clone()];
    let live: Vec<usize> = (0..3)
        .filter(|&i| parts[i].rank() > 0 || w.base_chart().dim() > 0)
        .collect();
    let which = live[rng.gen_range(0..live.len())];
    let d = &parts[which];
    let (mut x, mut m) = (d.symbol().clone(), d.matrix().clone());
    let m_dim = x.chart().dim();
    let slots = m_dim + m.rows() * m.cols();
    let k = rng.gen_range(0..slots);
    let p = nonzero(rng, w);
    if k < m_dim {
        x.set_component(k, x.component(k) + &p);
    } else {
        let (i, j) = ((k - m_dim) / m.cols(), (k - m_dim) % m.cols());
        m.set(i, j, m.get(i, j) + &p);
    }
    parts[which] = BundleDerivation::new(x, m).expect("square");
    let [fat, side, core] = parts;
    IMTriple::new(w, fat, side, core).expect("shapes unchanged")
}

/// `check_im_triple` passes iff the reconstructed derivation is linear, an
/// algebroid derivation and restricts to the triple; on passing triples
/// [`horizontal_from_triple`] succeeds. Draws internal and perturbed
/// internal triples until `min_each` of each verdict have been seen.
pub fn im_round_trip(w: &SplitVB, seed: u64, min_each: usize) -> Check {
    let name = "im_round_trip";
    let mut rng = random::rng(seed);
    let (mut passing, mut failing) = (0, 0);
    let mut i = 0;
    while (passing < min_each || failing < min_each) && i < 20 * min_each {
        let internal = random::fat_section(&mut rng, w, 2);
        let t = match internal_triple(w, &internal) {
            Ok(t) if passing < min_each && (i % 2 == 0 || failing >= min_each) => t,
            Ok(t) => perturb_triple(&mut rng, w, &t),
            Err(e) => return error(name, e),
        };
        i += 1;
        let (checks, round) = match (check_im_triple(w, &t), round_trip_check(w, &t)) {
            (Ok(c), Ok(r)) => (all_passed(&c), r.passed()),
            (Err(e), _) | (_, Err(e)) => return error(name, e),
        };
        if checks != round {
            return Check::fail(
                name,
                format!("candidate #{i}"),
                format!("triple={checks} reconstruction={round}"),
            );
        }
        if checks {
            let h = horizontal_from_triple(w, &t).and_then(|h| w.classify_cochain_linearity(&h).map(|l| (h, l)));
            match h {
                Ok((h, lin)) if lin.passed() && h.is_algebroid_derivation().passed() => {}
                Ok(_) => {
                    return Check::fail(
                        name,
                        format!("candidate #{i}"),
                        "reconstruction is not a linear derivation",
                    )
                }
                Err(e) => return error(name, e),
            }
            passing += 1;
        } else {
            failing += 1;
        }
    }
    if passing < min_each || failing < min_each {
        return Check::fail(name, "counts", format!("{passing} passing, {failing} failing"));
    }
    Check::pass(name)
}

/// On random linear cochains of degree 0, 1, 2: decompose and compose are
/// inverse, the decomposition invariants hold, and the transported
/// differential matches the differential of the decomposition.
pub fn decomposition(w: &SplitVB, seed: u64, per_degree: usize, caps: Caps) -> Check {
    let name = "decomposition";
    let mut rng = random::rng(seed);
    for k in 0..=2 {
        for i in 0..per_degree {
            let c = random::linear_cochain(&mut rng, w, k, 1);
            let at = format!("degree {k} #{i}");
            let result = (|| -> vbalg::Result<Option<(String, String)>> {
                let dec = decompose_linear(w, &c)?;
                if let Some(bad) = check_decomposition(w, &dec)?.into_iter().find(|c| !c.passed()) {
                    let wit = bad.witness.expect("failures carry witnesses");
                    return Ok(Some((format!("{} {}", bad.name, wit.location), wit.residual)));
                }
                let back = compose_linear(w, &dec)?;
                if back != c {
                    let diff = back.sub(&c)?;
                    return Ok(first_entry(&diff).map(|(l, r)| (format!("compose {l}"), r)));
                }
                let d = c.differential_with_cap(caps.degree)?;
                let transported = decomposition_differential(w, &dec)?;
                if decompose_linear(w, &d)? != transported {
                    let diff = compose_linear(w, &transported)?.sub(&d)?;
                    return Ok(Some(
                        first_entry(&diff).map_or(("differential".into(), "decompositions differ".into()), |(l, r)| {
                            (format!("differential {l}"), r)
                        }),
                    ));
                }
                Ok(None)
            })();
            match result {
                Ok(None) => {}
                Ok(Some((loc, res))) => return Check::fail(name, format!("{at} {loc}"), res),
                Err(e) => return error(name, format!("{at}: {e}")),
            }
        }
    }
    Check::pass(name)
}
