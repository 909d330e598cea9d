//! Lie algebroids presented by structure functions on a frame.

mod connection;
mod derivation;
mod gauge;

use std::fmt;

use crate::error::{Error, Result};
use crate::report::Check;
use crate::symexpr::{Chart, PolyVector, Polynomial, Rational};

pub use connection::Connection;
pub use derivation::BundleDerivation;
pub use gauge::{gauge_algebroid, GaugeAlgebroid};

/// A section `Σ a^α ε_α` of a frame algebroid.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Section {
    chart: Chart,
    coeffs: Vec<Polynomial>,
}

impl Section {
    pub fn new(chart: &Chart, coeffs: Vec<Polynomial>) -> Result<Self> {
        for c in &coeffs {
            if c.chart() != chart {
                return Err(Error::ChartMismatch {
                    left: chart.to_string(),
                    right: c.chart().to_string(),
                });
            }
        }
        Ok(Section {
            chart: chart.clone(),
            coeffs,
        })
    }

    pub fn zero(chart: &Chart, rank: usize) -> Self {
        Section {
            chart: chart.clone(),
            coeffs: vec![Polynomial::zero(chart); rank],
        }
    }

    /// The frame element `ε_α`.
    pub fn frame(chart: &Chart, rank: usize, alpha: usize) -> Self {
        let mut s = Self::zero(chart, rank);
        s.coeffs[alpha] = Polynomial::one(chart);
        s
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Polynomial] {
        &self.coeffs
    }

    pub fn coeff(&self, alpha: usize) -> &Polynomial {
        &self.coeffs[alpha]
    }

    pub fn into_coeffs(self) -> Vec<Polynomial> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Polynomial::is_zero)
    }

    pub fn add(&self, other: &Section) -> Section {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Section) -> Section {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn neg(&self) -> Section {
        self.map(|a| -a)
    }

    pub fn scale(&self, c: &Rational) -> Section {
        self.map(|a| a.scale(c))
    }

    pub fn mul_poly(&self, f: &Polynomial) -> Section {
        self.map(|a| a * f)
    }

    pub fn map(&self, f: impl Fn(&Polynomial) -> Polynomial) -> Section {
        Section {
            chart: self.chart.clone(),
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    fn zip_with(&self, other: &Section, f: impl Fn(&Polynomial, &Polynomial) -> Polynomial) -> Section {
        assert_eq!(self.rank(), other.rank(), "sections of different rank");
        Section {
            chart: self.chart.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn reexpress(&self, target: &Chart) -> Result<Section> {
        Ok(Section {
            chart: target.clone(),
            coeffs: self.coeffs.iter().map(|c| c.reexpress(target)).collect::<Result<_>>()?,
        })
    }

    /// Prints the section against the given frame names.
    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        NamedCombination {
            coeffs: &self.coeffs,
            names,
        }
    }
}

/// Formats `Σ c_i name_i`, shared by sections and bundle sections.
pub(crate) struct NamedCombination<'a> {
    pub(crate) coeffs: &'a [Polynomial],
    pub(crate) names: &'a [String],
}

impl fmt::Display for NamedCombination<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one = Rational::from_integer(1.into());
        let mut first = true;
        for (c, name) in self.coeffs.iter().zip(self.names) {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match c.constant_value() {
                Some(v) if v == one => write!(f, "{name}")?,
                Some(v) if v == -one.clone() => write!(f, "-{name}")?,
                _ => write!(f, "({c})*{name}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// A Lie algebroid of rank `r` over a chart of dimension `m`, given by the
/// anchor fields `ρ(ε_α)` and structure functions `[ε_β, ε_γ] = c^α_βγ ε_α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameAlgebroid {
    chart: Chart,
    frame: Vec<String>,
    anchor: Vec<PolyVector>,
    /// Full antisymmetric table of frame brackets.
    brackets: Vec<Vec<Section>>,
}

impl FrameAlgebroid {
    /// Builds a presentation from the anchor fields and the brackets
    /// `[ε_β, ε_γ]` for `β < γ`; unlisted pairs bracket to zero.
    pub fn new<S: Into<String>>(
        chart: &Chart,
        frame: Vec<S>,
        anchor: Vec<PolyVector>,
        brackets: impl IntoIterator<Item = ((usize, usize), Section)>,
    ) -> Result<Self> {
        let frame: Vec<String> = frame.into_iter().map(Into::into).collect();
        let r = frame.len();
        for (i, name) in frame.iter().enumerate() {
            if frame[..i].contains(name) {
                return Err(Error::InvalidAlgebroid(format!("duplicate frame name `{name}`")));
            }
        }
        if anchor.len() != r {
            return Err(Error::Shape(format!(
                "expected {r} anchor fields, found {}",
                anchor.len()
            )));
        }
        for a in &anchor {
            if a.chart() != chart {
                return Err(Error::ChartMismatch {
                    left: chart.to_string(),
                    right: a.chart().to_string(),
                });
            }
        }
        let mut table = vec![vec![Section::zero(chart, r); r]; r];
        for ((b, c), s) in brackets {
            if b >= r || c >= r {
                return Err(Error::Shape(format!("bracket index ({b}, {c}) out of range")));
            }
            if s.rank() != r || s.chart() != chart {
                return Err(Error::Shape(format!(
                    "bracket [{}, {}] is not a section of this algebroid",
                    frame[b], frame[c]
                )));
            }
            if b == c {
                if !s.is_zero() {
                    return Err(Error::InvalidAlgebroid(format!("[{0}, {0}] must vanish", frame[b])));
                }
                continue;
            }
            table[c][b] = s.neg();
            table[b][c] = s;
        }
        Ok(FrameAlgebroid {
            chart: chart.clone(),
            frame,
            anchor,
            brackets: table,
        })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    pub fn rank(&self) -> usize {
        self.frame.len()
    }

    pub fn frame_names(&self) -> &[String] {
        &self.frame
    }

    pub fn frame_index(&self, name: &str) -> Option<usize> {
        self.frame.iter().position(|n| n == name)
    }

    pub fn anchor_field(&self, alpha: usize) -> &PolyVector {
        &self.anchor[alpha]
    }

    pub fn anchor_fields(&self) -> &[PolyVector] {
        &self.anchor
    }

    /// `[ε_β, ε_γ]`.
    pub fn frame_bracket(&self, beta: usize, gamma: usize) -> &Section {
        &self.brackets[beta][gamma]
    }

    /// `c^α_βγ`.
    pub fn structure(&self, alpha: usize, beta: usize, gamma: usize) -> &Polynomial {
        self.brackets[beta][gamma].coeff(alpha)
    }

    pub fn frame_section(&self, alpha: usize) -> Section {
        Section::frame(&self.chart, self.rank(), alpha)
    }

    pub fn zero_section(&self) -> Section {
        Section::zero(&self.chart, self.rank())
    }

    pub fn section(&self, coeffs: Vec<Polynomial>) -> Result<Section> {
        if coeffs.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                found: coeffs.len(),
            });
        }
        Section::new(&self.chart, coeffs)
    }

    pub(crate) fn check_section(&self, s: &Section) -> Result<()> {
        if s.rank() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                found: s.rank(),
            });
        }
        if s.chart() != &self.chart {
            return Err(Error::ChartMismatch {
                left: self.chart.to_string(),
                right: s.chart().to_string(),
            });
        }
        Ok(())
    }

    /// `ρ(a) = Σ a^α ρ(ε_α)`.
    pub fn anchor(&self, a: &Section) -> PolyVector {
        let mut out = PolyVector::zero(&self.chart);
        for (c, rho) in a.coeffs().iter().zip(&self.anchor) {
            if !c.is_zero() {
                out = out.add(&rho.mul_poly(c));
            }
        }
        out
    }

    /// Bracket of arbitrary sections:
    /// `[a,b]^α = ρ(a)(b^α) - ρ(b)(a^α) + c^α_βγ a^β b^γ`.
    pub fn try_bracket(&self, a: &Section, b: &Section) -> Result<Section> {
        self.check_section(a)?;
        self.check_section(b)?;
        Ok(self.bracket(a, b))
    }

    pub fn bracket(&self, a: &Section, b: &Section) -> Section {
        let ra = self.anchor(a);
        let rb = self.anchor(b);
        let mut out: Vec<Polynomial> = (0..self.rank())
            .map(|al| ra.apply(b.coeff(al)) - rb.apply(a.coeff(al)))
            .collect();
        for (be, ab) in a.coeffs().iter().enumerate() {
            if ab.is_zero() {
                continue;
            }
            for (ga, bg) in b.coeffs().iter().enumerate() {
                if be == ga || bg.is_zero() {
                    continue;
                }
                let f = ab * bg;
                for (al, c) in self.brackets[be][ga].coeffs().iter().enumerate() {
                    if !c.is_zero() {
                        out[al] += &(c * &f);
                    }
                }
            }
        }
        Section {
            chart: self.chart.clone(),
            coeffs: out,
        }
    }

    pub fn jacobiator(&self, a: &Section, b: &Section, c: &Section) -> Section {
        self.bracket(&self.bracket(a, b), c)
            .add(&self.bracket(&self.bracket(b, c), a))
            .add(&self.bracket(&self.bracket(c, a), b))
    }

    pub fn tuple_name(&self, idx: &[usize]) -> String {
        let names: Vec<&str> = idx.iter().map(|&i| self.frame[i].as_str()).collect();
        format!("({})", names.join(", "))
    }

    /// Jacobi identity for sections: on every frame triple, and on the
    /// triples `(x^i ε_1, ε_β, ε_γ)`, whose Jacobiator picks up
    /// `(ρ[ε_β, ε_γ] - [ρ ε_β, ρ ε_γ])(x^i) ε_1`.
    pub fn check_jacobi(&self) -> Check {
        let r = self.rank();
        let triples = (0..r).flat_map(|a| (a + 1..r).flat_map(move |b| (b + 1..r).map(move |c| (a, b, c))));
        let frame = Check::first_failure("jacobi", triples, |(a, b, c)| {
            let j = self.jacobiator(&self.frame_section(a), &self.frame_section(b), &self.frame_section(c));
            (!j.is_zero()).then(|| (self.tuple_name(&[a, b, c]), j.display(&self.frame).to_string()))
        });
        if !frame.passed() || r == 0 {
            return frame;
        }
        let m = self.dim();
        let weighted = (0..m).flat_map(|i| (0..r).flat_map(move |b| (b + 1..r).map(move |c| (i, b, c))));
        Check::first_failure("jacobi", weighted, |(i, b, c)| {
            let x = Polynomial::coordinate(&self.chart, i);
            let j = self.jacobiator(
                &self.frame_section(0).mul_poly(&x),
                &self.frame_section(b),
                &self.frame_section(c),
            );
            (!j.is_zero()).then(|| {
                let loc = format!(
                    "({}*{}, {}, {})",
                    self.chart.names()[i],
                    self.frame[0],
                    self.frame[b],
                    self.frame[c]
                );
                (loc, j.display(&self.frame).to_string())
            })
        })
    }

    /// `ρ([ε_α, ε_β]) = [ρ(ε_α), ρ(ε_β)]` on every frame pair.
    pub fn check_anchor_compat(&self) -> Check {
        let r = self.rank();
        let pairs = (0..r).flat_map(|a| (a + 1..r).map(move |b| (a, b)));
        Check::first_failure("anchor_compat", pairs, |(a, b)| {
            let lhs = self.anchor(&self.brackets[a][b]);
            let rhs = self.anchor[a].commutator(&self.anchor[b]);
            let res = lhs.sub(&rhs);
            (!res.is_zero()).then(|| (self.tuple_name(&[a, b]), res.to_string()))
        })
    }

    pub fn validate(&self) -> Vec<Check> {
        vec![self.check_jacobi(), self.check_anchor_compat()]
    }

    pub fn is_valid(&self) -> bool {
        self.validate().iter().all(Check::passed)
    }
}
