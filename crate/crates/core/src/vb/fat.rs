use std::sync::Arc;

use crate::algebroid::{BundleDerivation, FrameAlgebroid, Section};
use crate::error::{Error, Result};
use crate::report::Check;
use crate::symexpr::{PolyMatrix, PolyVector, Polynomial};

use super::SplitVB;

/// The algebroid `Â` of linear sections of `W → E`, presented over the base
/// chart with frame `ã_α` followed by `Φ_AB = v^A ĉ_B`, indexed
/// `r + A·k + B`.
#[derive(Clone, Debug)]
pub struct FatAlgebroid {
    algebroid: Arc<FrameAlgebroid>,
    r: usize,
    n: usize,
    k: usize,
}

impl FatAlgebroid {
    pub fn algebroid(&self) -> &Arc<FrameAlgebroid> {
        &self.algebroid
    }

    pub fn rank(&self) -> usize {
        self.algebroid.rank()
    }

    pub fn base_rank(&self) -> usize {
        self.r
    }

    /// Frame index of `Φ_AB`.
    pub fn hom_index(&self, a: usize, b: usize) -> usize {
        self.r + a * self.k + b
    }

    pub fn is_hom_generator(&self, idx: usize) -> bool {
        idx >= self.r
    }

    /// `π : Â → A`, dropping the `Hom(E, C)` part.
    pub fn projection(&self, s: &Section) -> Section {
        Section::new(self.algebroid.chart(), s.coeffs()[..self.r].to_vec()).expect("same chart")
    }

    /// The fat section of `φ ∈ Hom(E, C)`, given as a `k×n` matrix.
    pub fn hom_section(&self, phi: &PolyMatrix) -> Section {
        let c = self.algebroid.chart();
        let mut coeffs = vec![Polynomial::zero(c); self.rank()];
        for a in 0..self.n {
            for b in 0..self.k {
                coeffs[self.hom_index(a, b)] = phi.get(b, a).clone();
            }
        }
        Section::new(c, coeffs).expect("same chart")
    }

    /// The `Hom(E, C)` part of a fat section as a `k×n` matrix.
    pub fn hom_part(&self, s: &Section) -> PolyMatrix {
        let mut out = PolyMatrix::zero(self.algebroid.chart(), self.k, self.n);
        for a in 0..self.n {
            for b in 0..self.k {
                out.set(b, a, s.coeff(self.hom_index(a, b)).clone());
            }
        }
        out
    }

    /// Exactness of `0 → Hom(E,C) → Â → A → 0` on frames: the `Hom(E,C)`
    /// generators have zero anchor and bracket into `Hom(E,C)` among
    /// themselves.
    pub fn check_exactness(&self) -> Check {
        let a = &self.algebroid;
        let names = a.frame_names();
        let homs: Vec<usize> = (self.r..self.rank()).collect();
        let anchor = Check::first_failure("exactness", homs.iter().copied(), |i| {
            let x = a.anchor_field(i);
            (!x.is_zero()).then(|| (names[i].clone(), format!("anchor {x}")))
        });
        if !anchor.passed() {
            return anchor;
        }
        let pairs = homs.iter().flat_map(|&i| homs.iter().map(move |&j| (i, j)));
        Check::first_failure("exactness", pairs, |(i, j)| {
            let s = a.frame_bracket(i, j);
            let leak = (0..self.r).any(|al| !s.coeff(al).is_zero());
            leak.then(|| (a.tuple_name(&[i, j]), s.display(names).to_string()))
        })
    }
}

impl SplitVB {
    /// `Σ s^α ã_α + Σ s^{AB} v^A ĉ_B` on the total chart.
    pub fn lift_fat(&self, s: &Section) -> Section {
        let r = self.base_rank();
        let k = self.core_rank();
        let mut coeffs: Vec<Polynomial> = s.coeffs()[..r].iter().map(|p| self.lift_poly(p)).collect();
        for b in 0..k {
            let mut acc = Polynomial::zero(self.total_chart());
            for a in 0..self.side_rank() {
                let f = &s.coeffs()[r + a * k + b];
                if !f.is_zero() {
                    acc += &(&self.lift_poly(f) * &self.fiber_coordinate(a));
                }
            }
            coeffs.push(acc);
        }
        Section::new(self.total_chart(), coeffs).expect("total chart")
    }

    /// Inverse of [`SplitVB::lift_fat`] on linear sections.
    pub fn project_fat(&self, s: &Section) -> Result<Section> {
        if !self.is_linear_section(s) {
            return Err(Error::NotLinear(format!(
                "{} is not a linear section",
                s.display(self.total.frame_names())
            )));
        }
        let r = self.base_rank();
        let k = self.core_rank();
        let n = self.side_rank();
        let m = self.base.dim();
        let bc = self.base_chart();
        let mut coeffs = Vec::with_capacity(r + n * k);
        for al in 0..r {
            coeffs.push(self.to_base(s.coeff(al), "linear coefficient")?);
        }
        let mut hom = vec![Polynomial::zero(bc); n * k];
        for b in 0..k {
            let c = s.coeff(r + b);
            for a in 0..n {
                hom[a * k + b] = self.to_base(&c.coefficient_of_power(m + a, 1), "core coefficient")?;
            }
        }
        coeffs.extend(hom);
        Section::new(bc, coeffs)
    }

    pub fn fat_rank(&self) -> usize {
        self.base_rank() + self.side_rank() * self.core_rank()
    }

    /// The fat algebroid, with brackets restricted from the total algebroid.
    pub fn fat(&self) -> Result<FatAlgebroid> {
        if let Some(f) = self.fat.get() {
            return Ok(f.clone());
        }
        self.require_axioms()?;
        let bc = self.base_chart();
        let r = self.base_rank();
        let k = self.core_rank();
        let n = self.side_rank();
        let size = self.fat_rank();
        let mut names: Vec<String> = self.total.frame_names()[..r].to_vec();
        for a in 0..n {
            for b in 0..k {
                names.push(format!(
                    "phi_{}_{}",
                    self.fiber_names()[a],
                    self.total.frame_names()[r + b]
                ));
            }
        }
        let mut anchor: Vec<PolyVector> = self.base.anchor_fields().to_vec();
        anchor.extend((r..size).map(|_| PolyVector::zero(bc)));
        let frame: Vec<Section> = (0..size).map(|i| self.lift_fat(&Section::frame(bc, size, i))).collect();
        let mut brackets = Vec::new();
        for i in 0..size {
            for j in i + 1..size {
                let s = self.total.bracket(&frame[i], &frame[j]);
                if !s.is_zero() {
                    brackets.push(((i, j), self.project_fat(&s)?));
                }
            }
        }
        let algebroid = Arc::new(FrameAlgebroid::new(bc, names, anchor, brackets)?);
        let fat = FatAlgebroid { algebroid, r, n, k };
        Ok(self.fat.get_or_init(|| fat).clone())
    }

    pub fn fat_algebroid(&self) -> Result<Arc<FrameAlgebroid>> {
        Ok(self.fat()?.algebroid)
    }

    fn check_fat_section(&self, s: &Section) -> Result<()> {
        if s.rank() != self.fat_rank() || s.chart() != self.base_chart() {
            return Err(Error::Shape(format!(
                "expected a section of the fat algebroid (rank {})",
                self.fat_rank()
            )));
        }
        Ok(())
    }

    /// `ψ^s_ã`: the derivation of `E` whose linear vector field is `ρ̃(ã)`.
    pub fn side_derivation(&self, s: &Section) -> Result<BundleDerivation> {
        self.check_fat_section(s)?;
        self.field_derivation(&self.total.anchor(&self.lift_fat(s)))
    }

    /// `ψ^c_ã`, read off from `[ã, ĉ_B]`.
    pub fn core_derivation(&self, s: &Section) -> Result<BundleDerivation> {
        self.check_fat_section(s)?;
        let k = self.core_rank();
        let bc = self.base_chart();
        let lifted = self.lift_fat(s);
        let symbol = {
            let x = self.total.anchor(&lifted);
            let comps = (0..self.base.dim())
                .map(|i| self.to_base(x.component(i), "symbol"))
                .collect::<Result<Vec<_>>>()?;
            PolyVector::new(bc, comps)?
        };
        let mut matrix = PolyMatrix::zero(bc, k, k);
        for d in 0..k {
            let br = self
                .total
                .bracket(&lifted, &self.total.frame_section(self.core_index(d)));
            for (b, p) in self.core_part(&br)?.into_iter().enumerate() {
                matrix.set(b, d, p);
            }
        }
        BundleDerivation::new(symbol, matrix)
    }

    pub fn side_representation(&self, s: &Section, e: &[Polynomial]) -> Result<Vec<Polynomial>> {
        if self.side_rank() == 0 {
            return Err(Error::NoSideBundle);
        }
        self.side_derivation(s)?.try_apply(e)
    }

    pub fn core_representation(&self, s: &Section, chi: &[Polynomial]) -> Result<Vec<Polynomial>> {
        if self.core_rank() == 0 {
            return Err(Error::NoCore);
        }
        self.core_derivation(s)?.try_apply(chi)
    }

    /// `α : C → E` as an `n×k` matrix, from `ρ̃(ĉ_B) = (α ĉ_B)^V`.
    pub fn core_anchor(&self) -> Result<PolyMatrix> {
        let n = self.side_rank();
        let k = self.core_rank();
        let mut out = PolyMatrix::zero(self.base_chart(), n, k);
        for b in 0..k {
            let col = self.vertical_section(self.total.anchor_field(self.core_index(b)))?;
            for (a, p) in col.into_iter().enumerate() {
                out.set(a, b, p);
            }
        }
        Ok(out)
    }
}
