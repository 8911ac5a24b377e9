use gaussinv::scenarios::{self, Evaluation, Grid, Scenario};

fn grid() -> (Grid, Grid) {
    (Grid::new(0.0, 5.0, 0.25).unwrap(), Grid::new(0.0, 1.0, 0.05).unwrap())
}

#[test]
fn twin_beam_closed_form_matches_pipeline() {
    let (bp, t) = grid();
    for &b in bp.values() {
        for &x in t.values() {
            let c = scenarios::twin_beam_at_bs(b, x).unwrap();
            let s = scenarios::twin_beam_at_bs_simulated(b, x).unwrap();
            for (u, v) in c.values().iter().zip(s.values()) {
                assert!((u - v).abs() <= 1e-10 * u.abs().max(1.0), "B_p={b} T={x}: {u} vs {v}");
            }
            assert!((s.gni - 2.0 * b).abs() <= 1e-10 * b.max(1.0));
        }
    }
}

#[test]
fn three_mode_closed_form_matches_pipeline() {
    let (bp, t) = grid();
    for &b in bp.values() {
        for &x in t.values() {
            let c = scenarios::three_mode_scheme_closed_form(b, x).unwrap();
            let s = scenarios::three_mode_scheme(b, x).unwrap();
            for (u, v) in c.values().iter().zip(s.values()) {
                assert!((u - v).abs() <= 1e-9 * u.abs().max(1.0), "B_p={b} T={x}: {u} vs {v}");
            }
            assert_eq!(c.ei_pair[0], c.ei_pair[1]);
            assert!((s.ei_pair[0] - s.ei_pair[1]).abs() <= 1e-9 * s.ei_pair[0].abs().max(1.0));
        }
    }
}

#[test]
fn transmissivity_mirror_symmetry() {
    let (bp, t) = grid();
    for &b in bp.values() {
        for &x in t.values() {
            let pairs = [
                (
                    scenarios::twin_beam_at_bs(b, x).unwrap().values(),
                    scenarios::twin_beam_at_bs(b, 1.0 - x).unwrap().values(),
                ),
                (
                    scenarios::three_mode_scheme_closed_form(b, x).unwrap().values(),
                    scenarios::three_mode_scheme_closed_form(b, 1.0 - x).unwrap().values(),
                ),
            ];
            for (a, m) in pairs {
                for (u, v) in a.iter().zip(&m) {
                    assert!((u - v).abs() <= 1e-12 * u.abs().max(1.0), "B_p={b} T={x}");
                }
            }
        }
    }
}

#[test]
fn nonclassicality_window_edges() {
    for bp in [0.5, 1.0, 3.0, 8.0] {
        let w = scenarios::nonclassicality_window_halfwidth(bp);
        for edge in [0.5 - w, 0.5 + w] {
            let at = scenarios::twin_beam_at_bs_simulated(bp, edge).unwrap();
            assert!(at.lni1.abs() <= 1e-10 * bp.max(1.0), "B_p={bp}: {}", at.lni1);
        }
        assert!(scenarios::twin_beam_at_bs(bp, 0.5).unwrap().lni1 > 0.0);
        assert!(scenarios::twin_beam_at_bs(bp, 0.5 - w - 1e-3).unwrap().lni1 < 0.0);
        assert!(scenarios::twin_beam_at_bs(bp, 0.5 + w + 1e-3).unwrap().lni1 < 0.0);
    }
}

#[test]
fn asboth_estimate_is_four_times_ei23() {
    let (bp, t) = grid();
    let mut checked = 0;
    for &b in bp.values() {
        for &x in t.values() {
            let r = scenarios::three_mode_scheme(b, x).unwrap();
            if r.ei_pair[2].abs() > 1e-8 {
                assert!((r.asboth_estimate / r.ei_pair[2] - 4.0).abs() <= 1e-9);
                checked += 1;
            }
        }
    }
    assert!(checked > 100);
}

#[test]
fn default_sweep_has_full_grid() {
    let (bp, t) = grid();
    for scenario in [Scenario::TwinBeamBs, Scenario::ThreeMode] {
        let table = scenarios::sweep(scenario, &bp, &t, Evaluation::Pipeline).unwrap();
        assert_eq!(table.rows.len(), 441);
        let gni_col = scenario.fields().iter().position(|f| f.starts_with("GNI")).unwrap();
        for row in &table.rows {
            assert!((row.values[gni_col] - 2.0 * row.bp).abs() <= 1e-9 * row.bp.max(1.0));
        }
        let csv = table.to_csv_string(false).unwrap();
        assert_eq!(csv.lines().count(), 442);
    }
}
