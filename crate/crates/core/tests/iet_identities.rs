use ay_core::iet::{build_f_g, build_h_g, half_swap};
use ay_core::numfield::{NFElem, NumberField};

#[test]
fn f_g_is_bijective_with_stable_piece_count() {
    for g in 2..=12 {
        let t = build_f_g(g).unwrap();
        assert!(t.is_bijection(), "g={g}");
        let total = t
            .piece_lengths()
            .iter()
            .fold(NFElem::zero(t.field()), |a, b| &a + b);
        assert_eq!(total, NFElem::one(t.field()));
        println!("g={g} pieces={}", t.pieces.len());
        assert_eq!(t.pieces.len(), 2 * g as usize + 1, "g={g}");
    }
}

#[test]
fn inverse_and_r_conjugacy() {
    for g in 3..=8 {
        let f = NumberField::get(g).unwrap();
        let t = build_f_g(g).unwrap();
        let inv = t.inverse().unwrap();
        let id = ay_core::iet::IntervalExchange::identity(NFElem::one(&f));
        assert!(t.compose(&inv).unwrap().equal(&id));
        let r = half_swap(&f);
        let rfr = r.compose(&t.compose(&r).unwrap()).unwrap();
        assert!(rfr.equal(&inv), "g={g}");
    }
}

#[test]
fn renormalization() {
    for g in 3..=8 {
        let f = NumberField::get(g).unwrap();
        let t = build_f_g(g).unwrap();
        let tilde = t.first_return(&NFElem::alpha(&f)).unwrap();
        let h = build_h_g(g).unwrap();
        let back = tilde.conjugate(&h.inverse().unwrap()).unwrap();
        assert!(back.equal(&t), "g={g}");
    }
}

#[test]
fn golden_case_splits_into_two_invariant_arcs() {
    let t = build_f_g(2).unwrap();
    let comps = t.invariant_components().unwrap();
    for c in &comps {
        println!("{:?}", c.iter().map(|(a, b)| (a.to_f64(), b.to_f64())).collect::<Vec<_>>());
    }
    assert_eq!(comps.len(), 2);
}
