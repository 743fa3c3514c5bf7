//! The orbit census and the classical ideal-arithmetic oracle compute the
//! same class-group two-torsion through entirely different machinery; they
//! must agree on every monic maximal field they both cover.

use monocubic::cubic::BinaryCubicForm;
use monocubic::enumerate::{enumerate_window, EnumWindow, SignFilter};
use monocubic::oracle::cl2_oracle;
use monocubic::orbits::{class_reps_qn, orbit_census};
use monocubic::padic::is_maximal;

fn monic_maximal_fields(x: u64, max_abs_disc: i128) -> Vec<BinaryCubicForm> {
    let mut out = Vec::new();
    let w = EnumWindow::new(1, x, SignFilter::Both);
    enumerate_window(&w, |f| {
        if f.is_generic() && f.disc().abs() <= max_abs_disc && is_maximal(&f) == Ok(true) {
            out.push(f);
        }
    });
    out
}

#[test]
fn two_torsion_counts_agree_on_small_discriminants() {
    let classes = class_reps_qn(1).unwrap();
    let fields = monic_maximal_fields(6_000, 1_200);
    assert!(fields.len() >= 40, "window too small: {}", fields.len());
    let mut checked = 0;
    for f in &fields {
        let census = orbit_census(f, &classes).unwrap();
        let oracle = cl2_oracle(f).unwrap();
        assert_eq!(
            (census.cl2, census.cl2_plus),
            (oracle.cl2, oracle.cl2_plus),
            "disagreement at f = {f:?}, disc {}",
            f.disc()
        );
        checked += 1;
    }
    assert!(checked >= 40);
}
