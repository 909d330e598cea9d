//! The shipped library of small algebroids, connections and VB-algebroids.

use std::sync::Arc;

use crate::algebroid::{Connection, FrameAlgebroid, Section};
use crate::symexpr::{rat, Chart, PolyMatrix, PolyVector, Polynomial};
use crate::vb::{build_full_core, build_tangent, build_trivial_core, gauge_vb, SplitVB, VbKind};

fn frame_names(r: usize) -> Vec<String> {
    (1..=r).map(|i| format!("e{i}")).collect()
}

/// Structure constants over a point, given as `(α, β, γ, c^α_βγ)` with `β < γ`.
pub fn lie_algebra(r: usize, constants: &[(usize, usize, usize, i64)]) -> FrameAlgebroid {
    let c = Chart::point();
    let mut brackets = std::collections::BTreeMap::new();
    for &(al, be, ga, v) in constants {
        let s: &mut Section = brackets.entry((be, ga)).or_insert_with(|| Section::zero(&c, r));
        *s = s.add(&Section::frame(&c, r, al).scale(&rat(v)));
    }
    FrameAlgebroid::new(&c, frame_names(r), vec![PolyVector::zero(&c); r], brackets).expect("valid constants")
}

pub fn abelian(r: usize) -> Arc<FrameAlgebroid> {
    Arc::new(lie_algebra(r, &[]))
}

/// `aff(1)`: `[e1, e2] = e2` over a point.
pub fn aff1() -> Arc<FrameAlgebroid> {
    Arc::new(lie_algebra(2, &[(1, 0, 1, 1)]))
}

/// `so(3)` with `[e_i, e_j] = ε_ijk e_k`.
pub fn so3() -> Arc<FrameAlgebroid> {
    Arc::new(lie_algebra(3, &[(2, 0, 1, 1), (0, 1, 2, 1), (1, 0, 2, -1)]))
}

/// The tangent algebroid of a chart, frame `∂_i`.
pub fn tangent_bundle(chart: &Chart) -> FrameAlgebroid {
    let m = chart.dim();
    let anchor = (0..m).map(|i| PolyVector::coordinate(chart, i)).collect();
    FrameAlgebroid::new(chart, frame_names(m), anchor, std::iter::empty()).expect("valid")
}

/// `TM` over the line `(x)`.
pub fn tm() -> Arc<FrameAlgebroid> {
    Arc::new(tangent_bundle(&Chart::new(["x"])))
}

/// `TM` over the plane `(x, y)`.
pub fn tm2() -> Arc<FrameAlgebroid> {
    Arc::new(tangent_bundle(&Chart::new(["x", "y"])))
}

/// The action algebroid of `aff(1)` on the line: `ρ(e1) = -x ∂x`,
/// `ρ(e2) = ∂x`, `[e1, e2] = e2`.
pub fn aff1_line() -> Arc<FrameAlgebroid> {
    let c = Chart::new(["x"]);
    let x = Polynomial::var(&c, "x").expect("chart has x");
    let anchor = vec![
        PolyVector::new(&c, vec![-x]).expect("dim 1"),
        PolyVector::coordinate(&c, 0),
    ];
    let brackets = [((0, 1), Section::frame(&c, 2, 1))];
    Arc::new(FrameAlgebroid::new(&c, frame_names(2), anchor, brackets).expect("valid"))
}

/// A rank-3 algebra violating Jacobi: `[e1, e2] = e1`, `[e2, e3] = e2`.
pub fn broken_jacobi() -> Arc<FrameAlgebroid> {
    Arc::new(lie_algebra(3, &[(0, 0, 1, 1), (1, 1, 2, 1)]))
}

/// Anchor not a morphism: `ρ(e1) = ∂x`, `ρ(e2) = x ∂x`, all brackets zero.
pub fn broken_anchor() -> Arc<FrameAlgebroid> {
    let c = Chart::new(["x"]);
    let x = Polynomial::var(&c, "x").expect("chart has x");
    let anchor = vec![
        PolyVector::coordinate(&c, 0),
        PolyVector::new(&c, vec![x]).expect("dim 1"),
    ];
    Arc::new(FrameAlgebroid::new(&c, frame_names(2), anchor, std::iter::empty()).expect("shapes"))
}

fn scalar_connection(a: &Arc<FrameAlgebroid>, gammas: Vec<Polynomial>) -> Connection {
    let c = a.chart();
    let mats = gammas
        .into_iter()
        .map(|g| PolyMatrix::from_rows(c, vec![vec![g]]).expect("1x1"))
        .collect();
    Connection::new(a.clone(), vec!["f1"], mats).expect("shapes")
}

/// Rank-1 connection on `TM` over `(x)` with `Γ = 0`.
pub fn tm_connection_zero() -> Connection {
    let a = tm();
    let z = Polynomial::zero(a.chart());
    scalar_connection(&a, vec![z])
}

/// Rank-1 connection on `TM` over `(x)` with `Γ = x`.
pub fn tm_connection_x() -> Connection {
    let a = tm();
    let x = Polynomial::var(a.chart(), "x").expect("chart has x");
    scalar_connection(&a, vec![x])
}

/// Rank-1 flat connection of the `aff(1)` line action: `Γ_{e1} = -x`, `Γ_{e2} = 1`.
pub fn aff1_line_connection() -> Connection {
    let a = aff1_line();
    let x = Polynomial::var(a.chart(), "x").expect("chart has x");
    scalar_connection(&a, vec![-x, Polynomial::one(a.chart())])
}

/// Rank-1 representation of `aff(1)`: `∇_{e1} = 1`, `∇_{e2} = 0`.
pub fn aff1_character() -> Connection {
    let a = aff1();
    let c = a.chart();
    scalar_connection(&a, vec![Polynomial::one(c), Polynomial::zero(c)])
}

/// Non-flat rank-2 action of the abelian rank-2 algebra:
/// `V1 = [[0,1],[0,0]]`, `V2 = [[0,0],[1,0]]`.
pub fn abelian_nonflat() -> Connection {
    let a = abelian(2);
    let c = a.chart();
    let p = |v: i64| Polynomial::from_int(c, v);
    let v1 = PolyMatrix::from_rows(c, vec![vec![p(0), p(1)], vec![p(0), p(0)]]).expect("2x2");
    let v2 = PolyMatrix::from_rows(c, vec![vec![p(0), p(0)], vec![p(1), p(0)]]).expect("2x2");
    Connection::new(a.clone(), vec!["f1", "f2"], vec![v1, v2]).expect("shapes")
}

/// Named algebroid fixtures.
pub fn algebroids() -> Vec<(&'static str, Arc<FrameAlgebroid>)> {
    vec![
        ("abelian1", abelian(1)),
        ("abelian2", abelian(2)),
        ("aff1", aff1()),
        ("so3", so3()),
        ("tm", tm()),
        ("tm2", tm2()),
        ("aff1-line", aff1_line()),
    ]
}

/// Named flat connections.
pub fn connections() -> Vec<(&'static str, Connection)> {
    vec![
        ("tm-0", tm_connection_zero()),
        ("tm-x", tm_connection_x()),
        ("aff1-line", aff1_line_connection()),
        ("aff1-char", aff1_character()),
    ]
}

pub fn tc_tm_0() -> SplitVB {
    build_trivial_core(&tm_connection_zero()).expect("flat")
}

pub fn tc_tm_x() -> SplitVB {
    build_trivial_core(&tm_connection_x()).expect("flat")
}

pub fn tc_aff1_line() -> SplitVB {
    build_trivial_core(&aff1_line_connection()).expect("flat")
}

/// `aff(1) ⋉ R` for the character `∇_{e1} = 1`.
pub fn fc_aff1() -> SplitVB {
    build_full_core(&aff1_character()).expect("flat")
}

pub fn tangent_aff1() -> SplitVB {
    build_tangent(&aff1()).expect("valid")
}

pub fn tangent_tm() -> SplitVB {
    build_tangent(&tm()).expect("valid")
}

pub fn tangent_aff1_line() -> SplitVB {
    build_tangent(&aff1_line()).expect("valid")
}

/// `(der E_A, der E; A, M)` for `TM` over `(x)` acting on a line bundle with `Γ = 0`.
pub fn gauge_tm() -> SplitVB {
    gauge_vb(&tm_connection_zero()).expect("flat")
}

/// As [`gauge_tm`] with `Γ = x`.
pub fn gauge_tm_x() -> SplitVB {
    gauge_vb(&tm_connection_x()).expect("flat")
}

/// Gauge VB-algebroid of the `aff(1)` line action.
pub fn gauge_aff1_line() -> SplitVB {
    gauge_vb(&aff1_line_connection()).expect("flat")
}

/// Named gauge VB-algebroid fixtures.
pub fn gauge_vbs() -> Vec<(&'static str, SplitVB)> {
    vec![
        ("gauge-tm", gauge_tm()),
        ("gauge-tm-x", gauge_tm_x()),
        ("gauge-aff1-line", gauge_aff1_line()),
    ]
}

/// Named VB-algebroid fixtures with trivial core.
pub fn trivial_core_vbs() -> Vec<(&'static str, SplitVB)> {
    vec![
        ("tc-tm-0", tc_tm_0()),
        ("tc-tm-x", tc_tm_x()),
        ("tc-aff1-line", tc_aff1_line()),
    ]
}

/// Named VB-algebroid fixtures.
pub fn vbs() -> Vec<(&'static str, SplitVB)> {
    let mut out = trivial_core_vbs();
    out.extend([
        ("fc-aff1", fc_aff1()),
        ("tangent-aff1", tangent_aff1()),
        ("tangent-tm", tangent_tm()),
        ("tangent-aff1-line", tangent_aff1_line()),
    ]);
    out.extend(gauge_vbs());
    out
}

/// A valid algebroid over a point violating `[core, core] = 0`: linear
/// `e1`, cores `hat_f1`, `hat_f2` with `[hat_f1, hat_f2] = hat_f1`.
pub fn broken_core_core_vb() -> SplitVB {
    let total = lie_algebra(3, &[(1, 1, 2, 1)]);
    let names = ["e1", "hat_f1", "hat_f2"];
    let total = FrameAlgebroid::new(
        total.chart(),
        names.to_vec(),
        total.anchor_fields().to_vec(),
        [((1, 2), total.frame_bracket(1, 2).clone())],
    )
    .expect("valid");
    SplitVB::from_parts(
        VbKind::Custom,
        abelian(1),
        Vec::<String>::new(),
        vec!["f1", "f2"],
        Arc::new(total),
    )
    .expect("shapes")
}

/// Rank-1 presentation over the line bundle on `(x)` whose anchor
/// `∂x + v^2 ∂v` is not linear.
pub fn broken_anchor_vb() -> SplitVB {
    let c = Chart::new(["x", "v1"]);
    let v = Polynomial::var(&c, "v1").expect("chart has v1");
    let anchor = PolyVector::new(&c, vec![Polynomial::one(&c), v.pow(2)]).expect("dim 2");
    let total = FrameAlgebroid::new(&c, vec!["e1"], vec![anchor], std::iter::empty()).expect("valid");
    SplitVB::from_parts(VbKind::Custom, tm(), vec!["f1"], Vec::<String>::new(), Arc::new(total)).expect("shapes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_are_valid() {
        for (name, a) in algebroids() {
            assert!(a.is_valid(), "{name}");
        }
        for (name, c) in connections() {
            assert!(c.check_flatness().passed(), "{name}");
        }
    }

    #[test]
    fn broken_fixtures_fail() {
        assert!(!broken_jacobi().check_jacobi().passed());
        assert!(broken_jacobi().check_anchor_compat().passed());
        assert!(!broken_anchor().check_anchor_compat().passed());
        assert!(!abelian_nonflat().check_flatness().passed());
    }
}
