use std::fmt;

use crate::algebroid::{Connection, Section};
use crate::defcomplex::DefCochain;
use crate::error::{Error, Result};
use crate::random::{self, Rng8};
use crate::report::all_passed;
use crate::symexpr::{PolyMatrix, PolyVector, Polynomial};
use crate::vb::{build_trivial_core, SplitVB};

use super::trivial_core::{im_section_pde_check, trivial_core_im_check, trivial_core_triple, IMSectionCoords};
use super::{adjoint, round_trip_check};

/// A labelled candidate IM section.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub label: String,
    pub coords: IMSectionCoords,
}

/// The three independent IM verdicts: the coordinate PDE system, the
/// derivation conditions on `(δ_A, δ_E)`, and reconstruction of a linear
/// algebroid derivation of the total space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Verdicts {
    pub pde: bool,
    pub conditions: bool,
    pub reconstruction: bool,
}

impl Verdicts {
    pub fn agree(&self) -> bool {
        self.pde == self.conditions && self.conditions == self.reconstruction
    }
}

impl fmt::Display for Verdicts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |b: bool| if b { "pass" } else { "fail" };
        write!(
            f,
            "pde={} conditions={} reconstruction={}",
            s(self.pde),
            s(self.conditions),
            s(self.reconstruction)
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub results: Vec<(Candidate, Verdicts)>,
}

impl EquivalenceReport {
    pub fn disagreements(&self) -> Vec<&(Candidate, Verdicts)> {
        self.results.iter().filter(|(_, v)| !v.agree()).collect()
    }

    pub fn all_agree(&self) -> bool {
        self.results.iter().all(|(_, v)| v.agree())
    }

    /// Number of candidates on which all three verdicts pass.
    pub fn passing(&self) -> usize {
        self.results
            .iter()
            .filter(|(_, v)| v.pde && v.conditions && v.reconstruction)
            .count()
    }
}

fn internal_coords(conn: &Connection, s: &Section) -> IMSectionCoords {
    let da = adjoint(conn.algebroid(), s);
    let de = conn.derivation(s);
    IMSectionCoords::from_pair(conn, &da, &de).expect("internal pair shares its symbol")
}

fn scalar(conn: &Connection, rng: &mut Rng8) -> PolyMatrix {
    PolyMatrix::scalar(conn.algebroid().chart(), conn.rank(), &random::coefficient(rng))
}

fn nonzero_polynomial(rng: &mut Rng8, conn: &Connection) -> Polynomial {
    let c = conn.algebroid().chart();
    loop {
        let p = random::polynomial(rng, c, 2, 2);
        if !p.is_zero() {
            return p;
        }
    }
}

/// Changes one entry of `X`, `U` or `V` by a nonzero polynomial.
fn perturb(conn: &Connection, rng: &mut Rng8, s: &IMSectionCoords) -> IMSectionCoords {
    use rand::Rng;
    let (mut x, mut u, mut v) = (s.x().clone(), s.u().clone(), s.v().clone());
    let p = nonzero_polynomial(rng, conn);
    let (m, r, n) = (x.chart().dim(), u.rows(), v.rows());
    let slots = m + r * r + n * n;
    let k = rng.gen_range(0..slots);
    if k < m {
        x.set_component(k, x.component(k) + &p);
    } else if k < m + r * r {
        let (i, j) = ((k - m) / r, (k - m) % r);
        u.set(i, j, u.get(i, j) + &p);
    } else {
        let k = k - m - r * r;
        let (i, j) = (k / n, k % n);
        v.set(i, j, v.get(i, j) + &p);
    }
    IMSectionCoords::new(conn, x, u, v).expect("shapes unchanged")
}

/// A deterministic family of `count` candidates: internal pairs of frame
/// elements, then a seeded mix of internal pairs of random sections,
/// internal pairs plus scalars, random data, perturbed internal pairs and
/// random `V` with `X = U = 0`. Coefficients have degree at most 2.
pub fn equivalence_candidates(conn: &Connection, seed: u64, count: usize) -> Vec<Candidate> {
    let a = conn.algebroid();
    let c = a.chart();
    let (r, n) = (a.rank(), conn.rank());
    let mut rng = random::rng(seed);
    let mut out: Vec<Candidate> = Vec::new();
    for al in 0..r {
        out.push(Candidate {
            label: format!("internal {}", a.frame_names()[al]),
            coords: internal_coords(conn, &a.frame_section(al)),
        });
    }
    out.push(Candidate {
        label: "zero".into(),
        coords: IMSectionCoords::zero(conn),
    });
    let mut i = 0;
    while out.len() < count {
        let (label, coords) = match i % 6 {
            0 => ("internal", internal_coords(conn, &random::section(&mut rng, a, 2))),
            1 => {
                let s = internal_coords(conn, &random::section(&mut rng, a, 2));
                let v = s.v().add(&scalar(conn, &mut rng));
                (
                    "internal+scalar",
                    IMSectionCoords::new(conn, s.x().clone(), s.u().clone(), v).expect("shapes"),
                )
            }
            2 => {
                let x = random::vector_field(&mut rng, c, 2);
                let u = random::matrix(&mut rng, c, r, 2);
                let v = random::matrix(&mut rng, c, n, 2);
                ("random", IMSectionCoords::new(conn, x, u, v).expect("shapes"))
            }
            3 => {
                let s = internal_coords(conn, &random::section(&mut rng, a, 2));
                ("perturbed", perturb(conn, &mut rng, &s))
            }
            4 => {
                let v = random::matrix(&mut rng, c, n, 2);
                let coords = IMSectionCoords::new(conn, PolyVector::zero(c), PolyMatrix::zero(c, r, r), v);
                ("random-v", coords.expect("shapes"))
            }
            _ => (
                "scalar",
                IMSectionCoords::new(
                    conn,
                    PolyVector::zero(c),
                    PolyMatrix::zero(c, r, r),
                    scalar(conn, &mut rng),
                )
                .expect("shapes"),
            ),
        };
        out.push(Candidate {
            label: format!("{label} #{}", out.len()),
            coords,
        });
        i += 1;
    }
    out
}

fn verdicts(conn: &Connection, w: &SplitVB, s: &IMSectionCoords) -> Result<Verdicts> {
    let pde = all_passed(&im_section_pde_check(conn, s)?);
    let (da, de) = s.to_pair();
    let cochain = DefCochain::from_derivation(conn.algebroid().clone(), &da)?;
    let conditions = match trivial_core_im_check(conn, &cochain, &de) {
        Ok(checks) => all_passed(&checks),
        Err(Error::NotDerivation(_)) => false,
        Err(e) => return Err(e),
    };
    let triple = trivial_core_triple(w, &da, &de)?;
    let reconstruction = round_trip_check(w, &triple)?.passed();
    Ok(Verdicts {
        pde,
        conditions,
        reconstruction,
    })
}

/// Runs the three IM verdicts on [`equivalence_candidates`] for the
/// trivial-core VB-algebroid of a flat connection.
pub fn theorem_equivalence_suite(conn: &Connection, seed: u64, count: usize) -> Result<EquivalenceReport> {
    let w = build_trivial_core(conn)?;
    let results = equivalence_candidates(conn, seed, count)
        .into_iter()
        .map(|cand| {
            let v = verdicts(conn, &w, &cand.coords)?;
            Ok((cand, v))
        })
        .collect::<Result<_>>()?;
    Ok(EquivalenceReport { results })
}
