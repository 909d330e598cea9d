use super::*;
use crate::algebroid::Connection;
use crate::fixtures;
use crate::random;
use crate::report::all_passed;
use crate::symexpr::rat;

fn var(c: &Chart, name: &str) -> Polynomial {
    Polynomial::var(c, name).unwrap()
}

#[test]
fn trivial_core_anchor_reads_christoffel() {
    let w = fixtures::tc_tm_x();
    let c = w.total_chart();
    let (x, v) = (var(c, "x"), var(c, "v1"));
    // ∂x - x v ∂v
    let expected = PolyVector::new(c, vec![Polynomial::one(c), -(&x * &v)]).unwrap();
    assert_eq!(w.total().anchor_field(0), &expected);
    assert!(all_passed(&w.validate()));
    let w0 = fixtures::tc_tm_0();
    assert_eq!(w0.total().anchor_field(0), &PolyVector::coordinate(w0.total_chart(), 0));
}

#[test]
fn every_fixture_passes_validation() {
    for (name, w) in fixtures::vbs() {
        for check in w.validate() {
            assert!(check.passed(), "{name}: {check}");
        }
        let fat = w.fat().unwrap();
        assert!(fat.algebroid().is_valid(), "{name}");
        assert!(fat.check_exactness().passed(), "{name}");
    }
}

#[test]
fn non_flat_action_breaks_jacobi() {
    let conn = fixtures::abelian_nonflat();
    assert!(matches!(build_trivial_core(&conn), Err(Error::NotFlat(_))));
    let w = build_trivial_core_unchecked(&conn).unwrap();
    assert!(!w.total().check_jacobi().passed());
    assert!(w.validate_vb_axioms().iter().all(Check::passed));
    for (name, conn) in fixtures::connections() {
        let w = build_trivial_core_unchecked(&conn).unwrap();
        assert!(w.total().check_jacobi().passed(), "{name}");
    }
}

#[test]
fn full_core_brackets() {
    let w = fixtures::fc_aff1();
    let t = w.total();
    assert_eq!(t.frame_names(), ["e1", "e2", "hat_f1"]);
    assert_eq!(t.frame_bracket(0, 2), &t.frame_section(2));
    assert!(t.frame_bracket(1, 2).is_zero());
    let abelian = build_full_core(&Connection::trivial(fixtures::abelian(2), 2)).unwrap();
    let r = abelian.total().rank();
    for i in 0..r {
        for j in 0..r {
            assert!(abelian.total().frame_bracket(i, j).is_zero());
        }
    }
    assert!(matches!(
        build_full_core(&fixtures::abelian_nonflat()),
        Err(Error::NotFlat(_))
    ));
}

#[test]
fn tangent_brackets() {
    let w = fixtures::tangent_aff1();
    let t = w.total();
    assert_eq!(t.frame_names(), ["de1", "de2", "hat_e1", "hat_e2"]);
    assert_eq!(t.frame_bracket(0, 3), &t.frame_section(3));
    assert_eq!(t.frame_bracket(0, 1), &t.frame_section(1));
    assert!(t.frame_bracket(2, 3).is_zero());
}

#[test]
fn tangent_on_sections_with_functions() {
    // [d(f a), d(g b)] = d[f a, g b] and [d(f a), (g b)^] = ([f a, g b])^
    let w = fixtures::tangent_aff1_line();
    let a = w.base();
    let t = w.total();
    let tc = w.total_chart();
    let m = a.dim();
    let r = a.rank();
    let ell = |f: &Polynomial| {
        let mut out = Polynomial::zero(tc);
        for j in 0..m {
            out += &(&Polynomial::coordinate(tc, m + j) * &w.lift_poly(&f.partial(j)));
        }
        out
    };
    let d = |s: &Section| {
        let mut coeffs: Vec<Polynomial> = s.coeffs().iter().map(|p| w.lift_poly(p)).collect();
        coeffs.extend(s.coeffs().iter().map(ell));
        Section::new(tc, coeffs).unwrap()
    };
    let hat = |s: &Section| {
        let mut coeffs = vec![Polynomial::zero(tc); r];
        coeffs.extend(s.coeffs().iter().map(|p| w.lift_poly(p)));
        Section::new(tc, coeffs).unwrap()
    };
    let mut rng = random::rng(8);
    for _ in 0..5 {
        let s1 = random::section(&mut rng, a, 2);
        let s2 = random::section(&mut rng, a, 2);
        assert_eq!(t.bracket(&d(&s1), &d(&s2)), d(&a.bracket(&s1, &s2)));
        assert_eq!(t.bracket(&d(&s1), &hat(&s2)), hat(&a.bracket(&s1, &s2)));
        assert!(t.bracket(&hat(&s1), &hat(&s2)).is_zero());
    }
}

#[test]
fn tangent_of_tm_core_anchor_is_identity() {
    let w = fixtures::tangent_tm();
    let alpha = w.core_anchor().unwrap();
    assert_eq!(alpha, PolyMatrix::identity(w.base_chart(), 1));
    assert_eq!(fixtures::tc_tm_x().core_anchor().unwrap().cols(), 0);
    assert_eq!(fixtures::fc_aff1().core_anchor().unwrap().rows(), 0);
}

#[test]
fn fat_algebroid_of_trivial_and_full_core_is_the_base() {
    for w in [fixtures::tc_aff1_line(), fixtures::fc_aff1()] {
        let fat = w.fat_algebroid().unwrap();
        assert_eq!(fat.rank(), w.base_rank());
        for i in 0..fat.rank() {
            assert_eq!(fat.anchor_field(i), w.base().anchor_field(i));
            for j in 0..fat.rank() {
                assert_eq!(fat.frame_bracket(i, j), w.base().frame_bracket(i, j));
            }
        }
    }
}

#[test]
fn fat_ranks() {
    assert_eq!(fixtures::tangent_aff1().fat_rank(), 2);
    assert_eq!(fixtures::tangent_aff1_line().fat_rank(), 4);
    assert_eq!(fixtures::tangent_tm().fat_rank(), 2);
}

#[test]
fn lift_and_project_are_inverse() {
    let mut rng = random::rng(4);
    for (name, w) in fixtures::vbs() {
        let s = random::fat_section(&mut rng, &w, 2);
        let lifted = w.lift_fat(&s);
        assert!(w.is_linear_section(&lifted), "{name}");
        assert_eq!(w.project_fat(&lifted).unwrap(), s, "{name}");
    }
}

#[test]
fn side_representation_of_action_is_the_connection() {
    for (name, conn) in fixtures::connections() {
        let w = build_trivial_core(&conn).unwrap();
        let fat = w.fat().unwrap();
        for al in 0..w.base_rank() {
            let e = fat.algebroid().frame_section(al);
            assert_eq!(w.side_derivation(&e).unwrap(), conn.frame_derivation(al), "{name}");
        }
        let e = fat.algebroid().frame_section(0);
        assert!(matches!(w.core_representation(&e, &[]), Err(Error::NoCore)));
    }
}

#[test]
fn core_representation_of_semidirect_product_is_the_connection() {
    let conn = fixtures::aff1_character();
    let w = build_full_core(&conn).unwrap();
    let fat = w.fat().unwrap();
    for al in 0..2 {
        let e = fat.algebroid().frame_section(al);
        assert_eq!(w.core_derivation(&e).unwrap(), conn.frame_derivation(al));
        let zero = vec![Polynomial::zero(w.base_chart())];
        assert!(w.core_representation(&e, &zero).unwrap()[0].is_zero());
    }
    let e = fat.algebroid().frame_section(0);
    assert!(matches!(w.side_representation(&e, &[]), Err(Error::NoSideBundle)));
}

#[test]
fn representations_are_flat_and_intertwined_by_the_core_anchor() {
    for (name, w) in fixtures::vbs() {
        let fat = w.fat().unwrap();
        let fa = fat.algebroid();
        let size = fa.rank();
        let alpha = w.core_anchor().unwrap();
        for i in 0..size {
            let ei = fa.frame_section(i);
            let (si, ci) = (w.side_derivation(&ei).unwrap(), w.core_derivation(&ei).unwrap());
            for j in i + 1..size {
                let ej = fa.frame_section(j);
                let br = fa.bracket(&ei, &ej);
                let sj = w.side_derivation(&ej).unwrap();
                let cj = w.core_derivation(&ej).unwrap();
                assert_eq!(si.commutator(&sj), w.side_derivation(&br).unwrap(), "{name} side");
                assert_eq!(ci.commutator(&cj), w.core_derivation(&br).unwrap(), "{name} core");
            }
            // ψ^s(α χ) = α ψ^c(χ) on the core frame
            for b in 0..w.core_rank() {
                let chi: Vec<Polynomial> = (0..w.core_rank())
                    .map(|d| Polynomial::from_int(w.base_chart(), (d == b) as i64))
                    .collect();
                let lhs = si.apply(&alpha.mul_vec(&chi));
                let rhs = alpha.mul_vec(&ci.apply(&chi));
                assert_eq!(lhs, rhs, "{name}");
            }
        }
    }
}

#[test]
fn euler_derivation_values() {
    let w = fixtures::tangent_aff1_line();
    let eu = w.euler_derivation();
    let t = w.total();
    let apply = |s: &Section| Section::new(w.total_chart(), eu.apply(s.coeffs())).unwrap();
    assert!(apply(&t.frame_section(0)).is_zero());
    assert_eq!(apply(&t.frame_section(2)), t.frame_section(2).neg());
    let v = var(w.total_chart(), "dot_x");
    let s = t.frame_section(1).mul_poly(&v);
    assert_eq!(apply(&s), s);
}

#[test]
fn core_section_is_not_linear() {
    let w = fixtures::tangent_aff1();
    let t = w.total();
    let c = DefCochain::from_section(t.clone(), t.frame_section(2)).unwrap();
    let check = w.classify_cochain_linearity(&c).unwrap();
    assert!(!check.passed());
    assert_eq!(check.witness.unwrap().residual, "-hat_e1");
    assert!(!w.inspect_linearity(&c).unwrap().passed());
    let lin = DefCochain::from_section(t.clone(), t.frame_section(0)).unwrap();
    assert!(w.classify_cochain_linearity(&lin).unwrap().passed());
}

#[test]
fn random_linear_cochains_are_linear_by_both_routes() {
    let mut rng = random::rng(31);
    for (name, w) in fixtures::vbs() {
        for k in 0..=2 {
            let c = random::linear_cochain(&mut rng, &w, k, 1);
            assert!(w.classify_cochain_linearity(&c).unwrap().passed(), "{name} {k}");
            assert!(w.inspect_linearity(&c).unwrap().passed(), "{name} {k}");
        }
    }
}

#[test]
fn euler_and_inspection_agree_on_random_cochains() {
    let mut rng = random::rng(32);
    for (name, w) in fixtures::vbs() {
        for k in 0..=2 {
            for _ in 0..4 {
                let c = random::cochain(&mut rng, w.total(), k, 1);
                let euler = w.classify_cochain_linearity(&c).unwrap().passed();
                let direct = w.inspect_linearity(&c).unwrap().passed();
                assert_eq!(euler, direct, "{name} {k}");
            }
        }
    }
}

#[test]
fn differentials_of_linear_cochains_satisfy_the_clauses() {
    let mut rng = random::rng(33);
    for (name, w) in fixtures::vbs() {
        for k in 0..=1 {
            let c = random::linear_cochain(&mut rng, &w, k, 1);
            let d = c.differential().unwrap();
            assert!(w.classify_cochain_linearity(&d).unwrap().passed(), "{name} {k}");
            for check in w.corollary_c_check(&d).unwrap() {
                assert!(check.passed(), "{name} {k}: {check}");
            }
        }
    }
}

#[test]
fn perturbed_core_symbol_fails() {
    let w = fixtures::tangent_aff1_line();
    let t = w.total();
    let tc = w.total_chart();
    let x = PolyVector::coordinate(tc, 0);
    let c = DefCochain::new(t.clone(), 2, std::iter::empty(), [(vec![2], x)]).unwrap();
    let checks = w.corollary_c_check(&c).unwrap();
    let bad: Vec<&str> = checks.iter().filter(|c| !c.passed()).map(|c| c.name.as_str()).collect();
    assert_eq!(bad, ["core_symbol"]);
}

#[test]
fn broken_presentations_are_named() {
    let w = fixtures::broken_core_core_vb();
    assert!(w.total().is_valid());
    let failed: Vec<Check> = w.validate_vb_axioms().into_iter().filter(|c| !c.passed()).collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0].name, "bracket_core_core");
    assert_eq!(failed[0].witness.as_ref().unwrap().location, "(hat_f1, hat_f2)");
    assert!(matches!(w.fat(), Err(Error::VbAxioms(_))));

    let w = fixtures::broken_anchor_vb();
    let failed: Vec<Check> = w.validate_vb_axioms().into_iter().filter(|c| !c.passed()).collect();
    assert_eq!(failed[0].name, "anchor_linear");
    assert!(failed[0]
        .witness
        .as_ref()
        .unwrap()
        .residual
        .contains("anchor not linear"));
}

#[test]
fn derivation_field_round_trip() {
    let mut rng = random::rng(12);
    let w = fixtures::tc_aff1_line();
    let d = random::derivation(&mut rng, w.base_chart(), 1, 2);
    assert_eq!(w.field_derivation(&w.derivation_field(&d)).unwrap(), d);
    let s = w.vertical_lift(&[Polynomial::from_int(w.base_chart(), 3)]);
    assert_eq!(w.vertical_section(&s).unwrap()[0].constant_value(), Some(rat(3)));
}

fn gauge_connections() -> Vec<Connection> {
    vec![
        fixtures::tm_connection_zero(),
        fixtures::tm_connection_x(),
        fixtures::aff1_line_connection(),
    ]
}

#[test]
fn gauge_anchor_matches_coordinate_formula() {
    // Y_α = ρ^i ∂_i + dot_x^j ∂_j ρ^i ∂/∂dot_x^i
    //       + (dot_x^i ∂_i Γ^A_B + (v Γ - Γ v)^A_B) ∂/∂v^A_B,
    // core ε̂_β ↦ ρ^i_β ∂/∂dot_x^i + Γ_β^A_B ∂/∂v^A_B
    for conn in gauge_connections() {
        let w = gauge_vb(&conn).unwrap();
        let a = conn.algebroid();
        let tc = w.total_chart();
        let m = a.dim();
        let n = conn.rank();
        let r = a.rank();
        let lift = |p: &Polynomial| p.reexpress(tc).unwrap();
        let dot = |j: usize| Polynomial::coordinate(tc, m + j);
        let v = |p: usize, q: usize| Polynomial::coordinate(tc, 2 * m + p * n + q);
        for al in 0..r {
            let rho = a.anchor_field(al);
            let gam = conn.christoffel(al);
            let mut y = PolyVector::zero(tc);
            let mut core = PolyVector::zero(tc);
            for i in 0..m {
                y.set_component(i, lift(rho.component(i)));
                let mut c = Polynomial::zero(tc);
                for j in 0..m {
                    c += &(&dot(j) * &lift(&rho.component(i).partial(j)));
                }
                y.set_component(m + i, c);
                core.set_component(m + i, lift(rho.component(i)));
            }
            for p in 0..n {
                for q in 0..n {
                    let mut c = Polynomial::zero(tc);
                    for i in 0..m {
                        c += &(&dot(i) * &lift(&gam.get(p, q).partial(i)));
                    }
                    for s in 0..n {
                        c += &(&v(p, s) * &lift(gam.get(s, q)));
                        c -= &(&lift(gam.get(p, s)) * &v(s, q));
                    }
                    y.set_component(2 * m + p * n + q, c);
                    core.set_component(2 * m + p * n + q, lift(gam.get(p, q)));
                }
            }
            assert_eq!(w.total().anchor_field(al), &y);
            assert_eq!(w.total().anchor_field(r + al), &core);
        }
    }
}

#[test]
fn gauge_vb_on_sections_with_functions() {
    // total lift 𝔡(f a) = f 𝔡a + ℓ(f) â; anchors Y_a and V_a; bracket table
    let mut rng = random::rng(41);
    for conn in gauge_connections() {
        let w = gauge_vb(&conn).unwrap();
        let a = conn.algebroid().clone();
        let t = w.total();
        let tc = w.total_chart();
        let m = a.dim();
        let r = a.rank();
        let g = crate::algebroid::gauge_algebroid(a.chart(), conn.rank());
        let total_lift = |s: &Section| {
            let mut coeffs: Vec<Polynomial> = s.coeffs().iter().map(|p| w.lift_poly(p)).collect();
            coeffs.extend(s.coeffs().iter().map(|p| construct::tangent_lift(tc, m, p)));
            Section::new(tc, coeffs).unwrap()
        };
        let hat = |s: &Section| {
            let mut coeffs = vec![Polynomial::zero(tc); r];
            coeffs.extend(s.coeffs().iter().map(|p| w.lift_poly(p)));
            Section::new(tc, coeffs).unwrap()
        };
        for _ in 0..4 {
            let s1 = random::section(&mut rng, &a, 2);
            let s2 = random::section(&mut rng, &a, 2);
            let nabla = conn.derivation(&s1);
            // Y_a from Δ ↦ [∇_a, Δ] on the gauge frame
            let mut mat = PolyMatrix::zero(a.chart(), g.algebroid().rank(), g.algebroid().rank());
            for f in 0..g.algebroid().rank() {
                let col = g.to_section(&nabla.commutator(&g.frame_derivation(f))).unwrap();
                for (h, p) in col.coeffs().iter().enumerate() {
                    mat.set(h, f, p.clone());
                }
            }
            let ya = w.derivation_field(&BundleDerivation::new(nabla.symbol().clone(), mat).unwrap());
            assert_eq!(t.anchor(&total_lift(&s1)), ya);
            let va = w.vertical_lift(g.to_section(&nabla).unwrap().coeffs());
            assert_eq!(t.anchor(&hat(&s1)), va);
            let br = a.bracket(&s1, &s2);
            assert_eq!(t.bracket(&total_lift(&s1), &total_lift(&s2)), total_lift(&br));
            assert_eq!(t.bracket(&total_lift(&s1), &hat(&s2)), hat(&br));
            assert!(t.bracket(&hat(&s1), &hat(&s2)).is_zero());
        }
    }
}

#[test]
fn gauge_vb_shape() {
    // (m, n, r) = (1, 1, 1) for the TM fixtures and (1, 1, 2) for aff1-line
    for (name, w, side, fat) in [
        ("gauge-tm", fixtures::gauge_tm(), 2, 1 + 2),
        ("gauge-tm-x", fixtures::gauge_tm_x(), 2, 1 + 2),
        ("gauge-aff1-line", fixtures::gauge_aff1_line(), 2, 2 + 2 * 2),
    ] {
        assert_eq!(w.side_rank(), side, "{name}");
        assert_eq!(w.core_rank(), w.base_rank(), "{name}");
        assert_eq!(w.fat_rank(), fat, "{name}");
        assert!(w.fat_algebroid().unwrap().is_valid(), "{name}");
    }
    let w = fixtures::gauge_tm();
    assert_eq!(w.fiber_names(), ["dot_x", "v1_1"]);
    assert_eq!(w.side_names(), ["d_x", "n1_1"]);
}

#[test]
fn gauge_vb_requires_flatness() {
    let conn = fixtures::abelian_nonflat();
    assert!(matches!(gauge_vb(&conn), Err(Error::NotFlat(_))));
    let w = gauge_vb_unchecked(&conn).unwrap();
    assert!(!w.total().check_jacobi().passed());
}
