use ctlab_core::atlas::*;
use proptest::prelude::*;

fn pos(v: f64) -> f64 {
    v.max(0.0)
}

/// The theorem displays written out literally, independent of the piece tables.
fn displayed(alpha: f64, g: f64, m: f64) -> (f64, &'static str) {
    let a = alpha;
    if m == 2.0 {
        if a >= 0.5 {
            return ((0.5 * pos(1.0 - 1.0 / g)).min(0.25), "T1");
        }
        if a <= 0.25 {
            return (pos(0.5 - a / g).min(0.5 - a), "T2");
        }
        let s = if g < 2.0 * a {
            0.0
        } else if g < 1.0 {
            0.5 - a / g
        } else if g < 1.0 / (2.0 * a) {
            0.5 - a
        } else if g < 2.0 {
            0.5 * (1.0 - 1.0 / g)
        } else {
            0.25
        };
        return (s, "T3");
    }
    if m < 1.0 {
        if a <= 0.5 {
            return ((0.5 * (1.0 - m * a)).min(0.5 * pos(1.0 - m * a / g)), "T4.1");
        }
        let lit = ((2.0 - m) / 4.0 + m * (1.0 - 2.0 * a) / (4.0 * g)).min(0.5 * pos(1.0 - m * a / g));
        return (pos(lit), "T4.2");
    }
    if m == 1.0 {
        return (0.5 * pos(1.0 - a / g), "T4.3");
    }
    if a <= 1.0 / (2.0 * m) {
        return ((0.5 * (1.0 - m * a)).min(0.5 * pos(1.0 - m * a / g)), "T4.4");
    }
    if a >= 1.0 / m {
        return ((0.25f64).min(m / 4.0 * pos(1.0 - 1.0 / g)), "T4.7");
    }
    if a < 0.5 {
        let s = if g < m * a {
            0.0
        } else if g < 1.0 {
            0.5 - m * a / (2.0 * g)
        } else if g < m / (m - 2.0 + 2.0 * m * a) {
            (1.0 - m * a) / 2.0
        } else if g < m / (m - 1.0) {
            m / 4.0 * (1.0 - 1.0 / g)
        } else {
            0.25
        };
        return (s, "T4.5");
    }
    let s = if g < m * a {
        0.0
    } else if g < 1.0 {
        0.5 - m * a / (2.0 * g)
    } else if g < m * (1.0 - a) / (m - 1.0) {
        (2.0 - m) / 4.0 + m * (1.0 - 2.0 * a) / (4.0 * g)
    } else if g < m / (m - 1.0) {
        m / 4.0 * (1.0 - 1.0 / g)
    } else {
        0.25
    };
    (s, "T4.6")
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64)).collect()
}

fn sample_am() -> Vec<(f64, f64)> {
    let mut v = Vec::new();
    for &a in &log_grid(1e-3, 1.0, 50) {
        for &m in &log_grid(1e-2, 4.0, 50) {
            v.push((a, m));
        }
    }
    // rational edges of the hypotheses
    for &m in &[0.5, 1.0, 1.5, 2.0, 3.0] {
        for &a in &[0.25, 0.5, 1.0 / m, 0.5 / m, 1.0] {
            if a <= 1.0 {
                v.push((a, m));
            }
        }
    }
    v
}

#[test]
fn every_hypothesis_is_covered_exactly_once() {
    let reg = theorems();
    for (a, m) in sample_am() {
        let n = reg.iter().filter(|t| t.covers(a, m)).count();
        assert_eq!(n, 1, "α={a}, m={m}");
        assert!(route(a, m).is_ok());
    }
}

#[test]
fn agrees_with_the_displayed_formulas() {
    let gammas = log_grid(1e-2, 50.0, 97);
    for (a, m) in sample_am() {
        for &g in &gammas {
            let e = exponent(&ExponentQuery::new(a, g, m).unwrap()).unwrap();
            let (s, label) = displayed(a, g, m);
            assert_eq!(e.theorem, label, "α={a} γ={g} m={m}");
            assert!((e.s - s).abs() < 1e-12, "α={a} γ={g} m={m}: {} vs {s}", e.s);
            assert!((-1e-15..=0.5).contains(&e.s));
        }
    }
}

#[test]
fn continuous_at_every_breakpoint() {
    for (a, m) in sample_am() {
        let c = continuity_check(a, m).unwrap();
        assert!(c.pass, "α={a} m={m}: {:?}", c.entries);
    }
}

#[test]
fn nondecreasing_in_gamma() {
    let gammas = log_grid(1e-3, 1e3, 301);
    for (a, m) in sample_am() {
        let mut prev = -1.0;
        for &g in &gammas {
            let s = exponent(&ExponentQuery::new(a, g, m).unwrap()).unwrap().s;
            assert!(s >= prev - 1e-14, "α={a} m={m} γ={g}");
            prev = s;
        }
    }
}

#[test]
fn limits_in_gamma() {
    for (a, m) in sample_am() {
        let small = exponent(&ExponentQuery::new(a, 1e-9, m).unwrap()).unwrap();
        assert_eq!(small.s, 0.0, "α={a} m={m}");
        let big = exponent(&ExponentQuery::new(a, 1e12, m).unwrap()).unwrap();
        let cap = match big.theorem.as_str() {
            "T1" | "T3" | "T4.5" | "T4.6" | "T4.7" => 0.25,
            "T2" => 0.5 - a,
            "T4.1" | "T4.4" => 0.5 * (1.0 - m * a),
            "T4.2" => (2.0 - m) / 4.0,
            "T4.3" => 0.5,
            other => panic!("{other}"),
        };
        assert!((big.s - cap).abs() < 1e-10, "α={a} m={m}: {} vs {cap}", big.s);
    }
}

#[test]
fn fractional_family_at_m_two_matches_the_quadratic_theorem() {
    let t44 = theorems().get("T4.4").unwrap();
    for &a in &log_grid(1e-3, 0.25, 40) {
        for &g in &log_grid(1e-2, 10.0, 60) {
            for m in [2.0, 2.0 - 1e-12, 2.0 + 1e-12] {
                let (s44, _) = eval_pieces(&t44.pieces(a, m), &g);
                let s2 = exponent(&ExponentQuery::new(a, g, 2.0).unwrap()).unwrap().s;
                assert!((s44 - s2).abs() < 1e-9, "α={a} γ={g} m={m}");
            }
        }
    }
}

#[test]
fn exact_path_agrees_with_floats() {
    for (a, g, m) in [("1/3", "6/5", "2"), ("3/5", "11/10", "3/2"), ("1/7", "1/3", "5/2"), ("9/10", "4", "1/2")] {
        let (ra, rg, rm) = (parse_rational(a).unwrap(), parse_rational(g).unwrap(), parse_rational(m).unwrap());
        let e = exponent_exact(&ra, &rg, &rm).unwrap();
        let f = exponent(&ExponentQuery::new(ra.to_f64(), rg.to_f64(), rm.to_f64()).unwrap()).unwrap();
        assert_eq!(e.theorem, f.theorem);
        assert!((e.s.to_f64() - f.s).abs() < 1e-15);
    }
}

proptest! {
    #[test]
    fn exact_and_float_regimes_agree_off_boundaries(
        an in 1i64..=100, m_num in 1i64..=80, gn in 1i64..=400,
    ) {
        let a = parse_rational(&format!("{an}/100")).unwrap();
        let m = parse_rational(&format!("{m_num}/20")).unwrap();
        let g = parse_rational(&format!("{gn}/40")).unwrap();
        let e = exponent_exact(&a, &g, &m).unwrap();
        let f = exponent(&ExponentQuery::new(a.to_f64(), g.to_f64(), m.to_f64()).unwrap()).unwrap();
        prop_assert_eq!(&e.theorem, &f.theorem);
        // floats may land on either side of a boundary, but s is continuous
        prop_assert!((e.s.to_f64() - f.s).abs() < 1e-12);
    }
}
