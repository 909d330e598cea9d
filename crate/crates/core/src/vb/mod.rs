//! Split VB-algebroid presentations over the total space of a vector bundle.
//!
//! The total algebroid `W → E` lives on the chart `(x, v)`, where `v` are
//! fiber coordinates on `E` (dual to its frame). Its frame consists of the
//! `r` linear generators `ã_α` followed by the `k` core generators `ĉ_B`.

mod construct;
mod fat;
mod linear;

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::algebroid::{BundleDerivation, FrameAlgebroid, Section};
use crate::defcomplex::DefCochain;
use crate::error::{Error, Result};
use crate::report::Check;
use crate::symexpr::{Chart, PolyMatrix, PolyVector, Polynomial};

pub use construct::{
    build_full_core, build_full_core_unchecked, build_tangent, build_tangent_unchecked, build_trivial_core,
    build_trivial_core_unchecked, gauge_vb, gauge_vb_unchecked,
};
pub use fat::FatAlgebroid;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VbKind {
    TrivialCore,
    FullCore,
    Tangent,
    Gauge,
    Custom,
}

impl fmt::Display for VbKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VbKind::TrivialCore => "trivial_core",
            VbKind::FullCore => "full_core",
            VbKind::Tangent => "tangent",
            VbKind::Gauge => "gauge",
            VbKind::Custom => "custom",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SplitVB {
    kind: VbKind,
    base: Arc<FrameAlgebroid>,
    side_names: Vec<String>,
    core_names: Vec<String>,
    total: Arc<FrameAlgebroid>,
    fat: OnceLock<FatAlgebroid>,
}

impl SplitVB {
    /// Wraps a total algebroid whose chart extends the base chart by the
    /// fiber coordinates and whose frame lists the linear generators first.
    /// Nothing beyond shapes is checked; see [`SplitVB::validate_vb_axioms`].
    pub fn from_parts<S: Into<String>, T: Into<String>>(
        kind: VbKind,
        base: Arc<FrameAlgebroid>,
        side_names: Vec<S>,
        core_names: Vec<T>,
        total: Arc<FrameAlgebroid>,
    ) -> Result<Self> {
        let side_names: Vec<String> = side_names.into_iter().map(Into::into).collect();
        let core_names: Vec<String> = core_names.into_iter().map(Into::into).collect();
        let m = base.dim();
        let tc = total.chart();
        if tc.dim() != m + side_names.len() || tc.names()[..m] != base.chart().names()[..] {
            return Err(Error::Shape(format!(
                "total chart ({tc}) must extend the base chart ({}) by {} fiber coordinates",
                base.chart(),
                side_names.len()
            )));
        }
        if total.rank() != base.rank() + core_names.len() {
            return Err(Error::Shape(format!(
                "total rank {} must be {} linear plus {} core generators",
                total.rank(),
                base.rank(),
                core_names.len()
            )));
        }
        Ok(SplitVB {
            kind,
            base,
            side_names,
            core_names,
            total,
            fat: OnceLock::new(),
        })
    }

    pub fn kind(&self) -> VbKind {
        self.kind
    }

    pub fn base(&self) -> &Arc<FrameAlgebroid> {
        &self.base
    }

    pub fn total(&self) -> &Arc<FrameAlgebroid> {
        &self.total
    }

    pub fn base_chart(&self) -> &Chart {
        self.base.chart()
    }

    pub fn total_chart(&self) -> &Chart {
        self.total.chart()
    }

    /// Rank `r` of the base algebroid.
    pub fn base_rank(&self) -> usize {
        self.base.rank()
    }

    /// Rank `n` of the side bundle `E`.
    pub fn side_rank(&self) -> usize {
        self.side_names.len()
    }

    /// Rank `k` of the core `C`.
    pub fn core_rank(&self) -> usize {
        self.core_names.len()
    }

    pub fn side_names(&self) -> &[String] {
        &self.side_names
    }

    pub fn core_names(&self) -> &[String] {
        &self.core_names
    }

    pub fn fiber_names(&self) -> &[String] {
        &self.total_chart().names()[self.base.dim()..]
    }

    pub(crate) fn fiber_vars(&self) -> Vec<usize> {
        let m = self.base.dim();
        (m..m + self.side_rank()).collect()
    }

    pub(crate) fn fiber_coordinate(&self, a: usize) -> Polynomial {
        Polynomial::coordinate(self.total_chart(), self.base.dim() + a)
    }

    /// Index of the core generator `ĉ_B` in the total frame.
    pub fn core_index(&self, b: usize) -> usize {
        self.base_rank() + b
    }

    pub fn is_core_generator(&self, idx: usize) -> bool {
        idx >= self.base_rank()
    }

    pub(crate) fn lift_poly(&self, p: &Polynomial) -> Polynomial {
        p.reexpress(self.total_chart())
            .expect("base coordinates belong to the total chart")
    }

    pub(crate) fn to_base(&self, p: &Polynomial, what: &str) -> Result<Polynomial> {
        p.reexpress(self.base_chart())
            .map_err(|_| Error::NotLinear(format!("{what} depends on fiber coordinates: {p}")))
    }

    fn degree_in_fiber_is(&self, p: &Polynomial, d: u32) -> bool {
        p.is_homogeneous_in(&self.fiber_vars(), d)
    }

    /// `∂/∂x` components fiber-free and `∂/∂v` components fiber-linear.
    pub fn is_linear_vector_field(&self, x: &PolyVector) -> bool {
        let m = self.base.dim();
        x.components().iter().enumerate().all(|(i, c)| {
            if i < m {
                self.degree_in_fiber_is(c, 0)
            } else {
                self.degree_in_fiber_is(c, 1)
            }
        })
    }

    /// Vertical with fiber-free components, i.e. the vertical lift of a
    /// section of `E`.
    pub fn is_vertical_lift(&self, x: &PolyVector) -> bool {
        let m = self.base.dim();
        x.components().iter().enumerate().all(|(i, c)| {
            if i < m {
                c.is_zero()
            } else {
                self.degree_in_fiber_is(c, 0)
            }
        })
    }

    /// The linear vector field of a derivation `(X, V)` of `E`:
    /// `X - V^A_B v^B ∂/∂v^A`.
    pub fn derivation_field(&self, d: &BundleDerivation) -> PolyVector {
        linear_field(self.total_chart(), self.base.dim(), d)
    }

    /// Inverse of [`SplitVB::derivation_field`].
    pub fn field_derivation(&self, x: &PolyVector) -> Result<BundleDerivation> {
        if !self.is_linear_vector_field(x) {
            return Err(Error::NotLinear(format!("vector field {x} is not linear")));
        }
        let m = self.base.dim();
        let n = self.side_rank();
        let bc = self.base_chart();
        let comps = (0..m)
            .map(|i| self.to_base(x.component(i), "symbol"))
            .collect::<Result<Vec<_>>>()?;
        let symbol = PolyVector::new(bc, comps)?;
        let mut matrix = PolyMatrix::zero(bc, n, n);
        for a in 0..n {
            let comp = x.component(m + a);
            for b in 0..n {
                let coeff = comp.coefficient_of_power(m + b, 1);
                matrix.set(a, b, -self.to_base(&coeff, "linear part")?);
            }
        }
        BundleDerivation::new(symbol, matrix)
    }

    /// `e^V = e^A ∂/∂v^A`.
    pub fn vertical_lift(&self, e: &[Polynomial]) -> PolyVector {
        let m = self.base.dim();
        let mut out = PolyVector::zero(self.total_chart());
        for (a, p) in e.iter().enumerate() {
            out.set_component(m + a, self.lift_poly(p));
        }
        out
    }

    pub fn vertical_section(&self, x: &PolyVector) -> Result<Vec<Polynomial>> {
        if !self.is_vertical_lift(x) {
            return Err(Error::NotLinear(format!("vector field {x} is not a vertical lift")));
        }
        let m = self.base.dim();
        (0..self.side_rank())
            .map(|a| self.to_base(x.component(m + a), "vertical lift"))
            .collect()
    }

    /// Linear generators with fiber-free coefficients, core generators
    /// with fiber-linear coefficients.
    pub fn is_linear_section(&self, s: &Section) -> bool {
        s.coeffs().iter().enumerate().all(|(i, c)| {
            if self.is_core_generator(i) {
                self.degree_in_fiber_is(c, 1)
            } else {
                self.degree_in_fiber_is(c, 0)
            }
        })
    }

    /// Only core generators, with fiber-free coefficients.
    pub fn is_core_section(&self, s: &Section) -> bool {
        s.coeffs().iter().enumerate().all(|(i, c)| {
            if self.is_core_generator(i) {
                self.degree_in_fiber_is(c, 0)
            } else {
                c.is_zero()
            }
        })
    }

    /// `χ̂ = χ^B ĉ_B` for a section `χ` of `C`.
    pub fn core_section(&self, chi: &[Polynomial]) -> Section {
        let mut s = self.total.zero_section();
        for (b, p) in chi.iter().enumerate() {
            s = s.add(
                &self
                    .total
                    .frame_section(self.core_index(b))
                    .mul_poly(&self.lift_poly(p)),
            );
        }
        s
    }

    pub fn core_part(&self, s: &Section) -> Result<Vec<Polynomial>> {
        if !self.is_core_section(s) {
            return Err(Error::NotLinear(format!(
                "{} is not a core section",
                s.display(self.total.frame_names())
            )));
        }
        (0..self.core_rank())
            .map(|b| self.to_base(s.coeff(self.core_index(b)), "core section"))
            .collect()
    }

    /// Pulls a section of `A` back to `Σ a^α ã_α`.
    pub fn lift_base_section(&self, a: &Section) -> Section {
        let mut coeffs: Vec<Polynomial> = a.coeffs().iter().map(|p| self.lift_poly(p)).collect();
        coeffs.extend((0..self.core_rank()).map(|_| Polynomial::zero(self.total_chart())));
        Section::new(self.total_chart(), coeffs).expect("total chart")
    }

    /// Euler derivation of `W → E`: symbol `v^A ∂/∂v^A`, zero on linear
    /// generators and `-1` on core generators.
    pub fn euler_derivation(&self) -> BundleDerivation {
        let tc = self.total_chart();
        let m = self.base.dim();
        let mut symbol = PolyVector::zero(tc);
        for a in 0..self.side_rank() {
            symbol.set_component(m + a, self.fiber_coordinate(a));
        }
        let size = self.total.rank();
        let mut matrix = PolyMatrix::zero(tc, size, size);
        for b in 0..self.core_rank() {
            let i = self.core_index(b);
            matrix.set(i, i, Polynomial::from_int(tc, -1));
        }
        BundleDerivation::new(symbol, matrix).expect("square")
    }

    fn pair_name(&self, i: usize, j: usize) -> String {
        self.total.tuple_name(&[i, j])
    }

    /// Anchor shapes and the linearity conditions on brackets, plus the
    /// requirement that linear generators cover the base algebroid.
    pub fn validate_vb_axioms(&self) -> Vec<Check> {
        let t = &self.total;
        let names = t.frame_names();
        let r = self.base_rank();
        let size = t.rank();
        let m = self.base.dim();
        let linear: Vec<usize> = (0..r).collect();
        let core: Vec<usize> = (r..size).collect();
        let mut out = Vec::new();
        out.push(Check::first_failure("anchor_linear", linear.iter().copied(), |i| {
            let x = t.anchor_field(i);
            (!self.is_linear_vector_field(x)).then(|| (names[i].clone(), format!("anchor not linear: {x}")))
        }));
        out.push(Check::first_failure(
            "anchor_core_vertical",
            core.iter().copied(),
            |i| {
                let x = t.anchor_field(i);
                (!self.is_vertical_lift(x)).then(|| (names[i].clone(), format!("anchor not a vertical lift: {x}")))
            },
        ));
        let ll = linear
            .iter()
            .flat_map(|&i| linear.iter().filter(move |&&j| j > i).map(move |&j| (i, j)));
        out.push(Check::first_failure("bracket_linear_linear", ll, |(i, j)| {
            let s = t.frame_bracket(i, j);
            (!self.is_linear_section(s)).then(|| (self.pair_name(i, j), s.display(names).to_string()))
        }));
        let lc = linear.iter().flat_map(|&i| core.iter().map(move |&j| (i, j)));
        out.push(Check::first_failure("bracket_linear_core", lc, |(i, j)| {
            let s = t.frame_bracket(i, j);
            (!self.is_core_section(s)).then(|| (self.pair_name(i, j), s.display(names).to_string()))
        }));
        let cc = core
            .iter()
            .flat_map(|&i| core.iter().filter(move |&&j| j > i).map(move |&j| (i, j)));
        out.push(Check::first_failure("bracket_core_core", cc, |(i, j)| {
            let s = t.frame_bracket(i, j);
            (!s.is_zero()).then(|| (self.pair_name(i, j), s.display(names).to_string()))
        }));
        out.push(Check::first_failure("covers_anchor", 0..r, |i| {
            let x = t.anchor_field(i);
            let rho = self.base.anchor_field(i);
            let bad = (0..m).find(|&j| x.component(j) != &self.lift_poly(rho.component(j)));
            bad.map(|j| {
                (
                    names[i].clone(),
                    format!(
                        "d/d{} component {} covers {}",
                        self.base_chart().names()[j],
                        x.component(j),
                        rho.component(j)
                    ),
                )
            })
        }));
        let ll = (0..r).flat_map(|i| (i + 1..r).map(move |j| (i, j)));
        out.push(Check::first_failure("covers_bracket", ll, |(i, j)| {
            let s = t.frame_bracket(i, j);
            let c = self.base.frame_bracket(i, j);
            let bad = (0..r).any(|al| s.coeff(al) != &self.lift_poly(c.coeff(al)));
            bad.then(|| (self.pair_name(i, j), s.display(names).to_string()))
        }));
        out
    }

    /// Jacobi and anchor compatibility of the total algebroid followed by
    /// the VB axioms.
    pub fn validate(&self) -> Vec<Check> {
        let mut out = self.total.validate();
        out.extend(self.validate_vb_axioms());
        out
    }

    pub(crate) fn require_axioms(&self) -> Result<()> {
        for c in self.validate_vb_axioms() {
            if let Some(w) = c.witness {
                return Err(Error::VbAxioms(format!("{} at {}: {}", c.name, w.location, w.residual)));
            }
        }
        Ok(())
    }

    pub(crate) fn check_parent(&self, c: &DefCochain) -> Result<()> {
        if Arc::ptr_eq(c.parent(), &self.total) || **c.parent() == *self.total {
            Ok(())
        } else {
            Err(Error::ParentMismatch)
        }
    }
}

pub(crate) fn linear_field(total: &Chart, m: usize, d: &BundleDerivation) -> PolyVector {
    let n = d.rank();
    let lift = |p: &Polynomial| p.reexpress(total).expect("base chart embeds");
    let mut out = d.symbol().reexpress(total).expect("base field lifts");
    for a in 0..n {
        let mut comp = Polynomial::zero(total);
        for b in 0..n {
            let vab = d.matrix().get(a, b);
            if !vab.is_zero() {
                comp -= &(&lift(vab) * &Polynomial::coordinate(total, m + b));
            }
        }
        out.set_component(m + a, comp);
    }
    out
}

#[cfg(test)]
mod tests;
