//! Seeded generators of random polynomial data for property checks.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::algebroid::{BundleDerivation, FrameAlgebroid, Section};
use crate::defcomplex::perm::increasing_tuples;
use crate::defcomplex::DefCochain;
use crate::symexpr::{ratio, Chart, PolyMatrix, PolyVector, Polynomial, Rational};
use crate::vb::SplitVB;

pub use rand::SeedableRng;

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

const COEFFS: [(i64, i64); 8] = [(1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (-1, 3), (3, 1), (-3, 2)];

pub fn coefficient(rng: &mut Rng8) -> Rational {
    let (n, d) = *COEFFS.choose(rng).expect("nonempty");
    ratio(n, d)
}

/// Exponent vectors of total degree at most `max_degree` in the chosen
/// coordinates (all others zero).
fn monomials(dim: usize, vars: &[usize], max_degree: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0; dim]];
    for _ in 0..max_degree {
        let mut next = Vec::new();
        for m in &out {
            for &v in vars {
                let mut e = m.clone();
                e[v] += 1;
                next.push(e);
            }
        }
        out.extend(next);
        out.sort();
        out.dedup();
    }
    out
}

/// A random polynomial with at most `terms` terms of total degree at most
/// `max_degree`; zero with probability `1/(terms+1)`-ish.
pub fn polynomial(rng: &mut Rng8, chart: &Chart, max_degree: u32, terms: usize) -> Polynomial {
    let vars: Vec<usize> = (0..chart.dim()).collect();
    polynomial_in(rng, chart, &vars, max_degree, terms)
}

/// Like [`polynomial`], using only the coordinates in `vars`.
pub fn polynomial_in(rng: &mut Rng8, chart: &Chart, vars: &[usize], max_degree: u32, terms: usize) -> Polynomial {
    let pool = monomials(chart.dim(), vars, max_degree);
    let count = rng.gen_range(0..=terms);
    let picked = (0..count).map(|_| (pool.choose(rng).expect("nonempty").clone(), coefficient(rng)));
    Polynomial::from_terms(chart, picked.collect::<Vec<_>>()).expect("exponents fit the chart")
}

/// A polynomial homogeneous of degree `d` in `fiber` and of degree at most
/// `max_base` in `base`.
pub fn polynomial_bihomogeneous(
    rng: &mut Rng8,
    chart: &Chart,
    base: &[usize],
    max_base: u32,
    fiber: &[usize],
    d: u32,
    terms: usize,
) -> Polynomial {
    let mut out = Polynomial::zero(chart);
    if fiber.is_empty() && d > 0 {
        return out;
    }
    for _ in 0..rng.gen_range(0..=terms) {
        let mut e = vec![0u32; chart.dim()];
        for _ in 0..d {
            e[*fiber.choose(rng).expect("nonempty")] += 1;
        }
        if !base.is_empty() {
            for _ in 0..rng.gen_range(0..=max_base) {
                e[*base.choose(rng).expect("nonempty")] += 1;
            }
        }
        out += &Polynomial::from_terms(chart, [(e, coefficient(rng))]).expect("fits");
    }
    out
}

pub fn section(rng: &mut Rng8, a: &FrameAlgebroid, max_degree: u32) -> Section {
    let coeffs = (0..a.rank())
        .map(|_| polynomial(rng, a.chart(), max_degree, 2))
        .collect();
    a.section(coeffs).expect("rank matches")
}

pub fn vector_field(rng: &mut Rng8, chart: &Chart, max_degree: u32) -> PolyVector {
    let comps = (0..chart.dim())
        .map(|_| polynomial(rng, chart, max_degree, 2))
        .collect();
    PolyVector::new(chart, comps).expect("dimension matches")
}

pub fn matrix(rng: &mut Rng8, chart: &Chart, n: usize, max_degree: u32) -> PolyMatrix {
    let rows = (0..n)
        .map(|_| (0..n).map(|_| polynomial(rng, chart, max_degree, 2)).collect())
        .collect();
    PolyMatrix::from_rows(chart, rows).expect("square")
}

pub fn derivation(rng: &mut Rng8, chart: &Chart, n: usize, max_degree: u32) -> BundleDerivation {
    BundleDerivation::new(vector_field(rng, chart, max_degree), matrix(rng, chart, n, max_degree))
        .expect("shapes agree")
}

/// A random degree-`k` cochain with coefficients of degree at most `max_degree`.
pub fn cochain(rng: &mut Rng8, parent: &Arc<FrameAlgebroid>, k: usize, max_degree: u32) -> DefCochain {
    let r = parent.rank();
    let values: Vec<_> = increasing_tuples(r, k)
        .into_iter()
        .map(|idx| (idx, section(rng, parent, max_degree)))
        .collect();
    let symbols: Vec<_> = if k == 0 {
        Vec::new()
    } else {
        increasing_tuples(r, k - 1)
            .into_iter()
            .map(|idx| (idx, vector_field(rng, parent.chart(), max_degree)))
            .collect()
    };
    DefCochain::new(parent.clone(), k, values, symbols).expect("well-formed random cochain")
}

/// A random section of the fat algebroid of `w`.
pub fn fat_section(rng: &mut Rng8, w: &SplitVB, max_degree: u32) -> Section {
    let c = w.base_chart();
    let coeffs = (0..w.fat_rank()).map(|_| polynomial(rng, c, max_degree, 2)).collect();
    Section::new(c, coeffs).expect("base chart")
}

/// A random linear cochain on the total algebroid of `w`: lifted fat
/// sections on linear tuples, core sections on tuples with one core slot,
/// linear vector fields and vertical lifts as symbols.
pub fn linear_cochain(rng: &mut Rng8, w: &SplitVB, k: usize, max_degree: u32) -> DefCochain {
    let total = w.total();
    let bc = w.base_chart();
    let cores = |idx: &[usize]| idx.iter().filter(|&&i| w.is_core_generator(i)).count();
    let mut values = Vec::new();
    for idx in increasing_tuples(total.rank(), k) {
        let s = match cores(&idx) {
            0 => w.lift_fat(&fat_section(rng, w, max_degree)),
            1 => {
                let chi: Vec<Polynomial> = (0..w.core_rank()).map(|_| polynomial(rng, bc, max_degree, 2)).collect();
                w.core_section(&chi)
            }
            _ => continue,
        };
        values.push((idx, s));
    }
    let mut symbols = Vec::new();
    if k >= 1 {
        for idx in increasing_tuples(total.rank(), k - 1) {
            let x = match cores(&idx) {
                0 => w.derivation_field(&derivation(rng, bc, w.side_rank(), max_degree)),
                1 => {
                    let e: Vec<Polynomial> = (0..w.side_rank()).map(|_| polynomial(rng, bc, max_degree, 2)).collect();
                    w.vertical_lift(&e)
                }
                _ => continue,
            };
            symbols.push((idx, x));
        }
    }
    DefCochain::new(total.clone(), k, values, symbols).expect("well-formed random cochain")
}
