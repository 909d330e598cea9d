//! Infinitesimal multiplicative (IM) derivations of VB-algebroids: internal
//! derivations, the triple characterization and its reconstruction, the
//! decomposition of linear cochains, the trivial-core specialization and
//! its coordinate PDE form.

mod decompose;
mod suite;
mod table;
mod trivial_core;

use crate::algebroid::{BundleDerivation, FrameAlgebroid, Section};
use crate::defcomplex::DefCochain;
use crate::error::{Error, Result};
use crate::report::Check;
use crate::symexpr::PolyMatrix;
use crate::vb::SplitVB;

pub use decompose::{
    check_decomposition, compose_linear, decompose_linear, decomposition_differential, LinearDecomposition,
};
pub use suite::{equivalence_candidates, theorem_equivalence_suite, Candidate, EquivalenceReport, Verdicts};
pub use table::{AltTable, TableValue};
pub use trivial_core::{im_section_pde_check, trivial_core_im_check, trivial_core_triple, IMSectionCoords};

/// Derivations `(δ_Â, δ_E, δ_C)` of the fat algebroid, the side bundle and
/// the core of a VB-algebroid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IMTriple {
    fat: BundleDerivation,
    side: BundleDerivation,
    core: BundleDerivation,
}

impl IMTriple {
    pub fn new(w: &SplitVB, fat: BundleDerivation, side: BundleDerivation, core: BundleDerivation) -> Result<Self> {
        let bc = w.base_chart();
        for (what, d, rank) in [
            ("fat", &fat, w.fat_rank()),
            ("side", &side, w.side_rank()),
            ("core", &core, w.core_rank()),
        ] {
            if d.chart() != bc {
                return Err(Error::ChartMismatch {
                    left: bc.to_string(),
                    right: d.chart().to_string(),
                });
            }
            if d.rank() != rank {
                return Err(Error::Shape(format!(
                    "{what} derivation has rank {}, expected {rank}",
                    d.rank()
                )));
            }
        }
        Ok(IMTriple { fat, side, core })
    }

    pub fn zero(w: &SplitVB) -> Self {
        let bc = w.base_chart();
        IMTriple {
            fat: BundleDerivation::zero(bc, w.fat_rank()),
            side: BundleDerivation::zero(bc, w.side_rank()),
            core: BundleDerivation::zero(bc, w.core_rank()),
        }
    }

    pub fn fat(&self) -> &BundleDerivation {
        &self.fat
    }

    pub fn side(&self) -> &BundleDerivation {
        &self.side
    }

    pub fn core(&self) -> &BundleDerivation {
        &self.core
    }
}

/// `[a, -]` as a derivation of the algebroid's bundle.
pub(crate) fn adjoint(a: &FrameAlgebroid, s: &Section) -> BundleDerivation {
    let r = a.rank();
    let mut m = PolyMatrix::zero(a.chart(), r, r);
    for j in 0..r {
        for (i, p) in a.bracket(s, &a.frame_section(j)).into_coeffs().into_iter().enumerate() {
            m.set(i, j, p);
        }
    }
    BundleDerivation::new(a.anchor(s), m).expect("square")
}

/// `δ_C ∘ Φ - Φ ∘ δ_E` for `Φ ∈ Hom(E, C)` given as a `k×n` matrix.
pub(crate) fn hom_bracket(core: &BundleDerivation, phi: &PolyMatrix, side: &BundleDerivation) -> PolyMatrix {
    phi.derive(core.symbol())
        .add(&core.matrix().mul(phi))
        .sub(&phi.mul(side.matrix()))
}

/// The internal derivation `[ã, -]` of the total algebroid, for a fat
/// section `ã`.
pub fn internal_derivation(w: &SplitVB, s: &Section) -> Result<DefCochain> {
    w.fat_algebroid()?.check_section(s)?;
    DefCochain::from_section(w.total().clone(), w.lift_fat(s))?.differential()
}

/// `([ã, -], ψ^s_ã, ψ^c_ã)`.
pub fn internal_triple(w: &SplitVB, s: &Section) -> Result<IMTriple> {
    let fat = w.fat_algebroid()?;
    fat.check_section(s)?;
    IMTriple::new(w, adjoint(&fat, s), w.side_derivation(s)?, w.core_derivation(s)?)
}

fn derivation_residual(lhs: &BundleDerivation, rhs: &BundleDerivation) -> Option<String> {
    let d = lhs.sub(rhs);
    (!d.is_zero()).then(|| d.to_string())
}

/// The conditions characterizing IM triples, each checked on frames:
/// `sigma`, `hom`, `core_anchor`, `side_representation`,
/// `core_representation`, `fat_derivation`.
pub fn check_im_triple(w: &SplitVB, t: &IMTriple) -> Result<Vec<Check>> {
    IMTriple::new(w, t.fat.clone(), t.side.clone(), t.core.clone())?;
    let fat = w.fat()?;
    let fa = fat.algebroid();
    let names = fa.frame_names();
    let size = fa.rank();
    let mut out = Vec::new();

    let (sf, ss, sc) = (t.fat.symbol(), t.side.symbol(), t.core.symbol());
    out.push(if sf == ss && sf == sc {
        Check::pass("sigma")
    } else {
        Check::fail(
            "sigma",
            "symbols",
            format!("symbol mismatch: fat {sf}, side {ss}, core {sc}"),
        )
    });

    let column = |j: usize| Section::new(fa.chart(), t.fat.matrix().column(j)).expect("base chart");
    out.push(Check::first_failure("hom", fat.base_rank()..size, |h| {
        let phi = fat.hom_part(&fa.frame_section(h));
        let expected = fat.hom_section(&hom_bracket(&t.core, &phi, &t.side));
        let res = column(h).sub(&expected);
        (!res.is_zero()).then(|| (names[h].clone(), res.display(names).to_string()))
    }));

    let alpha = w.core_anchor()?;
    let res = hom_bracket(&t.side, &alpha, &t.core);
    out.push(if res.is_zero() {
        Check::pass("core_anchor")
    } else {
        Check::fail("core_anchor", "alpha", res.to_string())
    });

    out.push(Check::first_failure("side_representation", 0..size, |j| {
        let e = fa.frame_section(j);
        let lhs = t.side.commutator(&w.side_derivation(&e).expect("fat frame"));
        let rhs = w.side_derivation(&column(j)).expect("fat section");
        derivation_residual(&lhs, &rhs).map(|r| (names[j].clone(), r))
    }));
    out.push(Check::first_failure("core_representation", 0..size, |j| {
        let e = fa.frame_section(j);
        let lhs = t.core.commutator(&w.core_derivation(&e).expect("fat frame"));
        let rhs = w.core_derivation(&column(j)).expect("fat section");
        derivation_residual(&lhs, &rhs).map(|r| (names[j].clone(), r))
    }));

    let mut d = DefCochain::from_derivation(fa.clone(), &t.fat)?.is_algebroid_derivation();
    d.name = "fat_derivation".into();
    out.push(d);
    Ok(out)
}

/// The derivation of the total algebroid acting by `δ_Â` on linear
/// generators and `δ_C` on core generators, with symbol the linear vector
/// field of `δ_E`. No conditions are checked.
pub fn horizontal_unchecked(w: &SplitVB, t: &IMTriple) -> Result<DefCochain> {
    IMTriple::new(w, t.fat.clone(), t.side.clone(), t.core.clone())?;
    let bc = w.base_chart();
    let r = w.base_rank();
    let mut values = Vec::new();
    for al in 0..r {
        let s = Section::new(bc, t.fat.matrix().column(al))?;
        values.push((vec![al], w.lift_fat(&s)));
    }
    for b in 0..w.core_rank() {
        values.push((vec![w.core_index(b)], w.core_section(&t.core.matrix().column(b))));
    }
    let symbols = [(vec![], w.derivation_field(&t.side))];
    DefCochain::new(w.total().clone(), 1, values, symbols)
}

/// [`horizontal_unchecked`] after [`check_im_triple`] passes.
pub fn horizontal_from_triple(w: &SplitVB, t: &IMTriple) -> Result<DefCochain> {
    for c in check_im_triple(w, t)? {
        if let Some(wit) = c.witness {
            return Err(Error::TripleCheck(format!(
                "{} at {}: {}",
                c.name, wit.location, wit.residual
            )));
        }
    }
    horizontal_unchecked(w, t)
}

/// The triple `(c_Â, c_E, c_C)` of a linear 1-cochain.
pub fn triple_of_linear(w: &SplitVB, c: &DefCochain) -> Result<IMTriple> {
    if c.degree() != 1 {
        return Err(Error::Shape(format!(
            "expected a 1-cochain, found degree {}",
            c.degree()
        )));
    }
    let dec = decompose_linear(w, c)?;
    let fat = dec.fat().as_derivation().expect("degree 1");
    let side = dec.side().expect("degree 1").get(&[]);
    let core = dec.core().expect("degree 1").get(&[]);
    IMTriple::new(w, fat, side, core)
}

/// Reconstruction verdict: the unchecked horizontal derivation of `t` is a
/// linear algebroid derivation whose triple is `t` again.
pub fn round_trip_check(w: &SplitVB, t: &IMTriple) -> Result<Check> {
    let name = "round_trip";
    let h = horizontal_unchecked(w, t)?;
    let lin = w.classify_cochain_linearity(&h)?;
    if let Some(wit) = lin.witness {
        return Ok(Check::fail(name, format!("linearity {}", wit.location), wit.residual));
    }
    let der = h.is_algebroid_derivation();
    if let Some(wit) = der.witness {
        return Ok(Check::fail(name, format!("derivation {}", wit.location), wit.residual));
    }
    let back = triple_of_linear(w, &h)?;
    if back != *t {
        let res = back.fat.sub(&t.fat);
        return Ok(Check::fail(name, "restriction", format!("fat part differs by {res}")));
    }
    Ok(Check::pass(name))
}
