use std::sync::Arc;

use crate::error::{Error, Result};
use crate::symexpr::{Chart, PolyMatrix, PolyVector};

use super::{BundleDerivation, FrameAlgebroid, Section};

/// The gauge algebroid `der E` of a trivialized rank-`n` bundle, with frame
/// `D_i = (∂_i, 0)` followed by `N_AB = (0, E_AB)` (unit matrix at row `A`,
/// column `B`), ordered row-major.
#[derive(Clone, Debug)]
pub struct GaugeAlgebroid {
    algebroid: Arc<FrameAlgebroid>,
    n: usize,
}

impl GaugeAlgebroid {
    pub fn algebroid(&self) -> &Arc<FrameAlgebroid> {
        &self.algebroid
    }

    pub fn bundle_rank(&self) -> usize {
        self.n
    }

    pub fn chart(&self) -> &Chart {
        self.algebroid.chart()
    }

    /// Frame index of `N_AB`.
    pub fn endo_index(&self, a: usize, b: usize) -> usize {
        self.chart().dim() + a * self.n + b
    }

    pub fn frame_derivation(&self, idx: usize) -> BundleDerivation {
        frame_derivation(self.chart(), self.n, idx)
    }

    pub fn to_section(&self, d: &BundleDerivation) -> Result<Section> {
        if d.rank() != self.n || d.chart() != self.chart() {
            return Err(Error::Shape("derivation does not act on this bundle".into()));
        }
        Ok(decompose(self.chart(), d))
    }

    pub fn to_derivation(&self, s: &Section) -> Result<BundleDerivation> {
        self.algebroid.check_section(s)?;
        let m = self.chart().dim();
        let mut symbol = PolyVector::zero(self.chart());
        for i in 0..m {
            symbol.set_component(i, s.coeff(i).clone());
        }
        let mut matrix = PolyMatrix::zero(self.chart(), self.n, self.n);
        for a in 0..self.n {
            for b in 0..self.n {
                matrix.set(a, b, s.coeff(self.endo_index(a, b)).clone());
            }
        }
        BundleDerivation::new(symbol, matrix)
    }
}

fn frame_derivation(chart: &Chart, n: usize, idx: usize) -> BundleDerivation {
    let m = chart.dim();
    if idx < m {
        BundleDerivation::new(PolyVector::coordinate(chart, idx), PolyMatrix::zero(chart, n, n)).expect("shapes agree")
    } else {
        let k = idx - m;
        BundleDerivation::endomorphism(PolyMatrix::unit(chart, n, n, k / n, k % n)).expect("shapes agree")
    }
}

fn decompose(chart: &Chart, d: &BundleDerivation) -> Section {
    let mut coeffs: Vec<_> = d.symbol().components().to_vec();
    coeffs.extend(d.matrix().entries().iter().cloned());
    Section::new(chart, coeffs).expect("same chart")
}

/// Builds `der E` for a rank-`n` bundle over `chart`.
pub fn gauge_algebroid(chart: &Chart, n: usize) -> GaugeAlgebroid {
    let m = chart.dim();
    let r = m + n * n;
    let mut names: Vec<String> = chart.names().iter().map(|x| format!("d_{x}")).collect();
    for a in 1..=n {
        for b in 1..=n {
            names.push(format!("n{a}_{b}"));
        }
    }
    let frame: Vec<BundleDerivation> = (0..r).map(|i| frame_derivation(chart, n, i)).collect();
    let anchor = frame.iter().map(|d| d.symbol().clone()).collect();
    let mut brackets = Vec::new();
    for b in 0..r {
        for c in b + 1..r {
            let s = decompose(chart, &frame[b].commutator(&frame[c]));
            if !s.is_zero() {
                brackets.push(((b, c), s));
            }
        }
    }
    let algebroid = FrameAlgebroid::new(chart, names, anchor, brackets).expect("well-formed gauge algebroid");
    GaugeAlgebroid {
        algebroid: Arc::new(algebroid),
        n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_over_line() {
        let c = Chart::new(["x"]);
        let g = gauge_algebroid(&c, 1);
        let a = g.algebroid();
        assert_eq!(a.rank(), 2);
        assert!(a.frame_bracket(0, 1).is_zero());
        assert_eq!(a.anchor_field(0), &PolyVector::coordinate(&c, 0));
        assert!(a.anchor_field(1).is_zero());
    }

    #[test]
    fn matches_gl2_over_point() {
        let c = Chart::point();
        let g = gauge_algebroid(&c, 2);
        let a = g.algebroid();
        // [E_ab, E_cd] = δ_bc E_ad - δ_da E_cb
        for (i, j) in (0..4).flat_map(|i| (0..4).map(move |j| (i, j))) {
            let (ai, bi, ci, di) = (i / 2, i % 2, j / 2, j % 2);
            let mut expect = Section::zero(&c, 4);
            if bi == ci {
                expect = expect.add(&Section::frame(&c, 4, ai * 2 + di));
            }
            if di == ai {
                expect = expect.sub(&Section::frame(&c, 4, ci * 2 + bi));
            }
            assert_eq!(a.frame_bracket(i, j), &expect, "pair ({i}, {j})");
        }
        assert!(a.is_valid());
    }

    #[test]
    fn gauge_algebroids_are_valid() {
        for m in 0..=2 {
            let names: Vec<String> = (0..m).map(|i| format!("x{i}")).collect();
            let c = Chart::new(names);
            for n in 1..=3 {
                assert!(gauge_algebroid(&c, n).algebroid().is_valid(), "m={m} n={n}");
            }
        }
    }
}
