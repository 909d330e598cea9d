use std::sync::Arc;

use crate::algebroid::{gauge_algebroid, BundleDerivation, Connection, FrameAlgebroid, GaugeAlgebroid, Section};
use crate::error::{Error, Result};
use crate::symexpr::{Chart, PolyMatrix, PolyVector, Polynomial};

use super::{linear_field, SplitVB, VbKind};

fn require_valid(a: &FrameAlgebroid) -> Result<()> {
    for c in a.validate() {
        if let Some(w) = c.witness {
            return Err(Error::InvalidAlgebroid(format!(
                "{} at {}: {}",
                c.name, w.location, w.residual
            )));
        }
    }
    Ok(())
}

fn extend_chart(base: &Chart, fiber: &[String]) -> Result<Chart> {
    base.extend(fiber)
}

/// Pads a base section with zeros for `extra` trailing generators and
/// moves it to the total chart.
fn pad(s: &Section, total: &Chart, extra: usize) -> Section {
    let mut coeffs: Vec<Polynomial> = s
        .coeffs()
        .iter()
        .map(|p| p.reexpress(total).expect("base chart embeds"))
        .collect();
    coeffs.extend((0..extra).map(|_| Polynomial::zero(total)));
    Section::new(total, coeffs).expect("total chart")
}

/// The action algebroid of a flat `A`-connection on `E`, presented over
/// `E` with core zero.
pub fn build_trivial_core(conn: &Connection) -> Result<SplitVB> {
    require_valid(conn.algebroid())?;
    conn.require_flat()?;
    build_trivial_core_unchecked(conn)
}

/// [`build_trivial_core`] without the validity and flatness preconditions.
pub fn build_trivial_core_unchecked(conn: &Connection) -> Result<SplitVB> {
    let a = conn.algebroid();
    let n = conn.rank();
    let fiber: Vec<String> = (1..=n).map(|i| format!("v{i}")).collect();
    let tc = extend_chart(a.chart(), &fiber)?;
    let r = a.rank();
    let m = a.dim();
    let anchor = (0..r)
        .map(|al| linear_field(&tc, m, &conn.frame_derivation(al)))
        .collect();
    let brackets = pairs(r).map(|(b, c)| ((b, c), pad(a.frame_bracket(b, c), &tc, 0)));
    let total = FrameAlgebroid::new(&tc, a.frame_names().to_vec(), anchor, brackets)?;
    SplitVB::from_parts(
        VbKind::TrivialCore,
        a.clone(),
        conn.names().to_vec(),
        Vec::<String>::new(),
        Arc::new(total),
    )
}

fn pairs(r: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..r).flat_map(move |b| (b + 1..r).map(move |c| (b, c)))
}

fn hat(name: &str) -> String {
    format!("hat_{name}")
}

/// The semidirect product `A ⋉ C` for a flat `A`-connection on `C`,
/// presented over `M` (side bundle zero).
pub fn build_full_core(conn: &Connection) -> Result<SplitVB> {
    require_valid(conn.algebroid())?;
    conn.require_flat()?;
    build_full_core_unchecked(conn)
}

/// [`build_full_core`] without the validity and flatness preconditions.
pub fn build_full_core_unchecked(conn: &Connection) -> Result<SplitVB> {
    let a = conn.algebroid();
    let c = a.chart();
    let r = a.rank();
    let k = conn.rank();
    let mut names: Vec<String> = a.frame_names().to_vec();
    names.extend(conn.names().iter().map(|s| hat(s)));
    let mut anchor: Vec<PolyVector> = a.anchor_fields().to_vec();
    anchor.extend((0..k).map(|_| PolyVector::zero(c)));
    let mut brackets: Vec<((usize, usize), Section)> = pairs(r)
        .map(|(b, g)| ((b, g), pad(a.frame_bracket(b, g), c, k)))
        .collect();
    for al in 0..r {
        let gamma = conn.christoffel(al);
        for b in 0..k {
            let mut coeffs = vec![Polynomial::zero(c); r];
            coeffs.extend(gamma.column(b));
            brackets.push(((al, r + b), Section::new(c, coeffs)?));
        }
    }
    let total = FrameAlgebroid::new(c, names, anchor, brackets)?;
    SplitVB::from_parts(
        VbKind::FullCore,
        a.clone(),
        Vec::<String>::new(),
        conn.names().to_vec(),
        Arc::new(total),
    )
}

/// Brackets shared by the tangent and gauge prolongations:
/// `[dε_β, dε_γ] = c^α dε_α + ℓ(c^α) ε̂_α`, `[dε_β, ε̂_γ] = c^α ε̂_α`,
/// `[ε̂, ε̂] = 0`, where `ℓ(f) = dot_x^j ∂_j f` and the first `m` fiber
/// coordinates are `dot_x`.
fn prolongation(
    a: &Arc<FrameAlgebroid>,
    kind: VbKind,
    tc: Chart,
    side: Vec<String>,
    anchor: Vec<PolyVector>,
) -> Result<SplitVB> {
    let m = a.dim();
    let r = a.rank();
    let lift = |p: &Polynomial| p.reexpress(&tc).expect("base chart embeds");
    let ell = |f: &Polynomial| tangent_lift(&tc, m, f);
    let mut names: Vec<String> = a.frame_names().iter().map(|e| format!("d{e}")).collect();
    names.extend(a.frame_names().iter().map(|e| hat(e)));
    let mut brackets = Vec::new();
    for (b, g) in pairs(r) {
        let s = a.frame_bracket(b, g);
        let mut coeffs: Vec<Polynomial> = s.coeffs().iter().map(lift).collect();
        coeffs.extend(s.coeffs().iter().map(ell));
        brackets.push(((b, g), Section::new(&tc, coeffs)?));
    }
    for b in 0..r {
        for g in 0..r {
            if b == g {
                continue;
            }
            let s = a.frame_bracket(b, g);
            let mut coeffs = vec![Polynomial::zero(&tc); r];
            coeffs.extend(s.coeffs().iter().map(lift));
            brackets.push(((b, r + g), Section::new(&tc, coeffs)?));
        }
    }
    let total = FrameAlgebroid::new(&tc, names, anchor, brackets)?;
    SplitVB::from_parts(kind, a.clone(), side, a.frame_names().to_vec(), Arc::new(total))
}

/// `ℓ(f) = dot_x^j ∂_j f` on a total chart whose fiber starts with `dot_x`.
pub(crate) fn tangent_lift(tc: &Chart, m: usize, f: &Polynomial) -> Polynomial {
    let mut out = Polynomial::zero(tc);
    for j in 0..m {
        let d = f.partial(j);
        if !d.is_zero() {
            out += &(&Polynomial::coordinate(tc, m + j) * &d.reexpress(tc).expect("base chart embeds"));
        }
    }
    out
}

/// The tangent prolongation `TA → TM` over the chart `(x, dot_x)`, with
/// linear generators `dε_α` and core generators `ε̂_α`.
pub fn build_tangent(a: &Arc<FrameAlgebroid>) -> Result<SplitVB> {
    require_valid(a)?;
    build_tangent_unchecked(a)
}

/// [`build_tangent`] without the validity precondition.
pub fn build_tangent_unchecked(a: &Arc<FrameAlgebroid>) -> Result<SplitVB> {
    let bc = a.chart();
    let m = a.dim();
    let r = a.rank();
    let fiber: Vec<String> = bc.names().iter().map(|x| format!("dot_{x}")).collect();
    let tc = extend_chart(bc, &fiber)?;
    let lift = |p: &Polynomial| p.reexpress(&tc).expect("base chart embeds");
    let mut anchor = Vec::with_capacity(2 * r);
    for al in 0..r {
        let rho = a.anchor_field(al);
        let mut x = PolyVector::zero(&tc);
        for i in 0..m {
            x.set_component(i, lift(rho.component(i)));
            x.set_component(m + i, tangent_lift(&tc, m, rho.component(i)));
        }
        anchor.push(x);
    }
    for al in 0..r {
        let rho = a.anchor_field(al);
        let mut x = PolyVector::zero(&tc);
        for i in 0..m {
            x.set_component(m + i, lift(rho.component(i)));
        }
        anchor.push(x);
    }
    let side: Vec<String> = bc.names().iter().map(|x| format!("d_{x}")).collect();
    prolongation(a, VbKind::Tangent, tc, side, anchor)
}

/// The VB-algebroid `(der E_A, der E; A, M)` of a flat `A`-connection on
/// `E`. The side bundle `der E` carries the gauge frame `D_i, N_AB` with
/// fiber coordinates `dot_x^i, v<A>_<B>`; the core is `A`.
pub fn gauge_vb(conn: &Connection) -> Result<SplitVB> {
    require_valid(conn.algebroid())?;
    conn.require_flat()?;
    gauge_vb_unchecked(conn)
}

/// [`gauge_vb`] without the validity and flatness preconditions.
pub fn gauge_vb_unchecked(conn: &Connection) -> Result<SplitVB> {
    let a = conn.algebroid();
    let bc = a.chart();
    let m = a.dim();
    let n = conn.rank();
    let r = a.rank();
    let g = gauge_algebroid(bc, n);
    let mut fiber: Vec<String> = bc.names().iter().map(|x| format!("dot_{x}")).collect();
    for p in 1..=n {
        for q in 1..=n {
            fiber.push(format!("v{p}_{q}"));
        }
    }
    let tc = extend_chart(bc, &fiber)?;
    let side = g.algebroid().frame_names().to_vec();
    let size = g.algebroid().rank();
    let mut anchor = Vec::with_capacity(2 * r);
    for al in 0..r {
        anchor.push(linear_field(&tc, m, &commutator_action(&g, &conn.frame_derivation(al))));
    }
    for al in 0..r {
        let s = g.to_section(&conn.frame_derivation(al))?;
        let mut x = PolyVector::zero(&tc);
        for f in 0..size {
            x.set_component(m + f, s.coeff(f).reexpress(&tc)?);
        }
        anchor.push(x);
    }
    prolongation(a, VbKind::Gauge, tc, side, anchor)
}

/// `Δ ↦ [D, Δ]` as a derivation of the gauge algebroid bundle.
pub(crate) fn commutator_action(g: &GaugeAlgebroid, d: &BundleDerivation) -> BundleDerivation {
    let size = g.algebroid().rank();
    let mut matrix = PolyMatrix::zero(g.chart(), size, size);
    for f in 0..size {
        let col = g
            .to_section(&d.commutator(&g.frame_derivation(f)))
            .expect("same bundle");
        for (h, p) in col.into_coeffs().into_iter().enumerate() {
            matrix.set(h, f, p);
        }
    }
    BundleDerivation::new(d.symbol().clone(), matrix).expect("square")
}
