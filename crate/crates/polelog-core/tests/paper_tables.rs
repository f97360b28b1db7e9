//! Full spectral-table reproductions on the three reference polynomials,
//! with every cell hardcoded, plus structural invariants of the pages.

use polelog_core::derham::{gamma_coeffs, mu_nu};
use polelog_core::poly::Poly;
use polelog_core::spectral::{ss_pages, Mode, SpectralTable, SsOptions};

fn quartic_nd() -> Poly {
    // x⁴ + y³z + z³w + xyzw
    Poly::homogeneous(
        4,
        &[
            (1, &[4, 0, 0, 0]),
            (1, &[0, 3, 1, 0]),
            (1, &[0, 0, 3, 1]),
            (1, &[1, 1, 1, 1]),
        ],
    )
    .unwrap()
}

fn table(f: &Poly, k_max: usize, r_max: usize, mode: Mode) -> SpectralTable {
    ss_pages(
        f,
        &SsOptions {
            k_max: Some(k_max),
            r_max,
            mode,
            ..Default::default()
        },
    )
    .unwrap()
}

struct Rows {
    from: usize,
    gamma: Vec<usize>,
    mu: Vec<usize>,
    mu2: Vec<usize>,
    mu3: Option<Vec<usize>>,
    nu: Vec<usize>,
    nu2: Vec<usize>,
    nu3: Option<Vec<usize>>,
}

fn check_rows(t: &SpectralTable, rows: &Rows) {
    let gamma = t.gamma.as_ref().expect("unweighted input has gamma");
    for (i, k) in (rows.from..rows.from + rows.gamma.len()).enumerate() {
        assert_eq!(gamma[k] as usize, rows.gamma[i], "gamma at k={k}");
        assert_eq!(t.mu(1, k), rows.mu[i], "mu at k={k}");
        assert_eq!(t.mu(2, k), rows.mu2[i], "mu2 at k={k}");
        if let Some(mu3) = &rows.mu3 {
            assert_eq!(t.mu(3, k), mu3[i], "mu3 at k={k}");
        }
        assert_eq!(t.nu(1, k), rows.nu[i], "nu at k={k}");
        assert_eq!(t.nu(2, k), rows.nu2[i], "nu2 at k={k}");
        if let Some(nu3) = &rows.nu3 {
            assert_eq!(t.nu(3, k), nu3[i], "nu3 at k={k}");
        }
    }
}

#[test]
fn remark_24_first_table_exact() {
    let f = quartic_nd();
    let start = std::time::Instant::now();
    let t = table(&f, 12, 3, Mode::Exact);
    eprintln!("first table exact: {:?}", start.elapsed());
    check_rows(
        &t,
        &Rows {
            from: 4,
            gamma: vec![1, 4, 10, 16, 19, 16, 10, 4, 1],
            mu: vec![1, 4, 10, 16, 19, 17, 13, 13, 13],
            mu2: vec![1, 4, 8, 8, 7, 4, 1, 1, 1],
            mu3: Some(vec![1, 4, 7, 7, 6, 3, 0, 0, 0]),
            nu: vec![0, 0, 0, 0, 0, 1, 3, 9, 12],
            nu2: vec![0, 0, 0, 0, 0, 1, 1, 1, 0],
            nu3: Some(vec![0, 0, 0, 0, 0, 1, 1, 1, 0]),
        },
    );
    // everything below the support is zero
    for k in 0..4 {
        assert_eq!(t.mu(1, k), 0);
        assert_eq!(t.nu(1, k), 0);
    }
}

#[test]
fn remark_25_table_multiprime() {
    // x⁵ + y⁴w + z⁴w
    let f = Poly::homogeneous(
        4,
        &[(1, &[5, 0, 0, 0]), (1, &[0, 4, 0, 1]), (1, &[0, 0, 4, 1])],
    )
    .unwrap();
    let t = table(&f, 16, 2, Mode::MultiPrime(3));
    check_rows(
        &t,
        &Rows {
            from: 4,
            gamma: vec![1, 4, 10, 20, 31, 40, 44, 40, 31, 20, 10, 4, 1],
            mu: vec![1, 4, 10, 20, 31, 41, 48, 51, 52, 52, 52, 52, 52],
            mu2: vec![0, 0, 3, 3, 3, 3, 0, 0, 0, 0, 0, 0, 0],
            mu3: None,
            nu: vec![0, 0, 0, 0, 0, 1, 4, 11, 21, 32, 42, 48, 51],
            nu2: vec![0, 0, 0, 0, 0, 0, 0, 4, 4, 4, 4, 0, 0],
            nu3: None,
        },
    );
}

#[test]
fn page_monotonicity_and_euler_identity() {
    let f = quartic_nd();
    let t = table(&f, 12, 3, Mode::Exact);
    let gamma = gamma_coeffs(4, 4);
    for k in 0..=12usize {
        for r in 1..3 {
            assert!(t.mu(r + 1, k) <= t.mu(r, k), "mu drop at r={r} k={k}");
            assert!(t.nu(r + 1, k) <= t.nu(r, k), "nu drop at r={r} k={k}");
        }
        // Euler identity μ_k = ν_k + γ_k and agreement with mu_nu
        let (mu, nu) = mu_nu(&f, k as i64).unwrap();
        assert_eq!(t.mu(1, k), mu);
        assert_eq!(t.nu(1, k), nu);
        let g = gamma.get(k).copied().unwrap_or(0) as usize;
        assert_eq!(mu, nu + g, "Euler identity at k={k}");
    }
}

#[test]
fn rank_of_dr_independent_of_variable_order() {
    // relabeling the variables permutes every basis; all page dimensions must
    // be unchanged
    let f = quartic_nd();
    // x↔w, y↔z applied to the exponents
    let g = Poly::homogeneous(
        4,
        &[
            (1, &[0, 0, 0, 4]),
            (1, &[0, 1, 3, 0]),
            (1, &[1, 3, 0, 0]),
            (1, &[1, 1, 1, 1]),
        ],
    )
    .unwrap();
    let tf = table(&f, 8, 3, Mode::Exact);
    let tg = table(&g, 8, 3, Mode::Exact);
    assert_eq!(tf.pages, tg.pages);
}

#[test]
fn witnesses_are_honest_cycles() {
    use polelog_core::derham::{basis_forms, wedge_df_matrix};
    use polelog_core::sparse::SparseVec;

    let f = quartic_nd();
    let t = table(&f, 11, 2, Mode::Exact);
    let ws = t.witnesses.as_ref().unwrap();
    // ν^(2)_9 = ν^(2)_10 = ν^(2)_11 = 1
    assert_eq!(ws.len(), 3);
    for w in ws {
        // rebuild the coefficient vector over the basis of Ω³_{k−e}
        let basis = basis_forms(&f.weights, 3, w.k as i64 - 4);
        let mut entries = Vec::new();
        for (label, c) in &w.coeffs {
            let idx = basis
                .items
                .iter()
                .position(|(exps, iset)| {
                    let mut parts = Vec::new();
                    for (i, &p) in exps.iter().enumerate() {
                        match p {
                            0 => {}
                            1 => parts.push(f.vars[i].clone()),
                            _ => parts.push(format!("{}^{}", f.vars[i], p)),
                        }
                    }
                    for &i in iset {
                        parts.push(format!("d{}", f.vars[i]));
                    }
                    &parts.join("*") == label
                })
                .expect("label resolves to a basis form");
            entries.push((idx, c.clone()));
        }
        let v = SparseVec::from_entries(entries);
        let s = wedge_df_matrix(&f, 3, w.k as i64 - 4);
        assert!(s.apply(&v).is_zero(), "witness at k={} is a cycle", w.k);
    }
}
