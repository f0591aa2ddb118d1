//! Acceptance suite: runs every exit criterion end to end and prints one
//! pass/fail line per criterion. Run with `--nocapture` to see the lines
//! even when everything passes:
//!
//! ```text
//! cargo test -p lab --test acceptance -- --nocapture
//! ```

use std::time::Instant;

use anyhow::ensure;
use greedylab::bounds::{table_1, table_2, table_3, TableEntry};
use greedylab::weights::WeightDist;
use greedylab::graph::named_graph;
use greedylab::greedy::{monte_carlo, Mode};
use lab::commands::{tree_probability_data, variance_scaling_data};
use lab::oracle::exact_expected_greedy_is_fraction;
use lab::verify;

fn check(
    results: &mut Vec<(u8, bool)>,
    id: u8,
    name: &str,
    budget_secs: Option<f64>,
    body: impl FnOnce() -> anyhow::Result<(bool, String)>,
) {
    let start = Instant::now();
    let (mut passed, mut detail) = match body() {
        Ok(outcome) => outcome,
        Err(e) => (false, format!("error: {e:#}")),
    };
    let elapsed = start.elapsed().as_secs_f64();
    if let Some(budget) = budget_secs {
        if elapsed > budget {
            passed = false;
            detail = format!("{detail}; runtime {elapsed:.2} s exceeded the {budget} s budget");
        }
    }
    println!(
        "criterion {id} {name}: {} ({elapsed:.2} s) {detail}",
        if passed { "PASS" } else { "FAIL" }
    );
    results.push((id, passed));
}

fn worst_abs_diff(cells: &[TableEntry]) -> f64 {
    cells
        .iter()
        .filter_map(|c| c.diff)
        .map(f64::abs)
        .fold(0.0, f64::max)
}

#[test]
fn acceptance() {
    let mut results = Vec::new();

    check(&mut results, 1, "independent_set_table", Some(1.0), || {
        let cells: Vec<TableEntry> = table_1()
            .into_iter()
            .filter(|c| c.source == "computed")
            .collect();
        ensure!(cells.len() == 15, "expected 15 computed cells, got {}", cells.len());
        let worst = worst_abs_diff(&cells);
        Ok((
            worst <= 1e-3,
            format!("15 cells, worst |computed - published| = {worst:.2e}"),
        ))
    });

    check(&mut results, 2, "matching_table", Some(1.0), || {
        let cells = table_2();
        ensure!(
            cells.iter().all(|c| c.source == "computed"),
            "every non-empty cell should be computed"
        );
        let worst = worst_abs_diff(&cells);
        let flagged: Vec<&TableEntry> = cells.iter().filter(|c| c.flagged).collect();
        let flag_ok = flagged.len() == 1 && flagged[0].r == 3 && flagged[0].g == Some(25);
        Ok((
            worst <= 1e-3 && flag_ok,
            format!(
                "{} cells, worst |computed - published| = {worst:.2e}, \
                 rounding-discrepancy flag on (r=3, g=25) only = {flag_ok}",
                cells.len()
            ),
        ))
    });

    check(&mut results, 3, "weighted_limits_table", Some(5.0), || {
        let cells = table_3()?;
        let refs: [(usize, f64, f64); 4] = [
            (3, 0.5966, 0.7841),
            (4, 0.5493, 0.8826),
            (5, 0.5119, 0.9643),
            (10, 0.3967, 1.242),
        ];
        let mut worst = 0.0f64;
        for (r, is_ref, m_ref) in refs {
            for (column, reference) in [("greedy_mwis", is_ref), ("greedy_mwm", m_ref)] {
                let cell = cells
                    .iter()
                    .find(|c| c.r == r && c.column == column)
                    .ok_or_else(|| anyhow::anyhow!("missing cell {column} for r = {r}"))?;
                worst = worst.max((cell.value - reference).abs());
            }
        }
        Ok((
            worst <= 1e-3,
            format!("8 weighted limits, worst |computed - published| = {worst:.2e}"),
        ))
    });

    check(&mut results, 4, "pgf_convergence", Some(30.0), || {
        let c = verify::convergence_check();
        Ok((c.passed, c.detail))
    });

    check(&mut results, 5, "bonus_greedy_equivalence", None, || {
        let c = verify::bonus_equivalence_check(2_000);
        Ok((c.passed, c.detail))
    });

    check(&mut results, 6, "selection_locality", None, || {
        let c = verify::locality_check(500);
        Ok((c.passed, c.detail))
    });

    check(&mut results, 7, "tree_root_probability", Some(60.0), || {
        let mut ok = true;
        let mut parts = Vec::new();
        let shallow = tree_probability_data(3, 1, 1_000_000, 1)?;
        let head = shallow
            .estimates
            .iter()
            .find(|e| e.statistic == "p_root_selected")
            .ok_or_else(|| anyhow::anyhow!("missing root-selection estimate"))?;
        ensure!(
            (head.analytic - 0.25).abs() < 1e-9,
            "analytic d=1 root probability {} is not 1/4",
            head.analytic
        );
        ok &= head.z.abs() <= 4.0;
        parts.push(format!("d=1 p={:.5} z={:+.2}", head.empirical, head.z));
        for (d, seed) in [(4usize, 2u64), (6, 3)] {
            let data = tree_probability_data(3, d, 300_000, seed)?;
            let e = data
                .estimates
                .iter()
                .find(|e| e.statistic == "p_root_selected")
                .ok_or_else(|| anyhow::anyhow!("missing root-selection estimate"))?;
            ok &= e.z.abs() <= 4.0;
            parts.push(format!(
                "d={d} p={:.5} analytic={:.5} z={:+.2}",
                e.empirical, e.analytic, e.z
            ));
        }
        Ok((ok, parts.join("; ")))
    });

    check(&mut results, 8, "small_graph_oracle", None, || {
        let g = named_graph("petersen")?;
        let exact = exact_expected_greedy_is_fraction(&g)?;
        let dist = WeightDist::uniform(0.0, 1.0)?;
        let stats = monte_carlo(&g, Mode::IndependentSet, dist, 1_000_000, 8)?;
        let z = (stats.mean_size_frac - exact) / stats.se_size_frac;
        Ok((
            z.abs() <= 4.0,
            format!(
                "mean = {:.6} vs exact = {:.6}, z = {z:+.2} at 1e6 trials",
                stats.mean_size_frac, exact
            ),
        ))
    });

    check(&mut results, 9, "containment_tail", None, || {
        let c = verify::containment_tail_check();
        Ok((c.passed, c.detail))
    });

    check(&mut results, 10, "variance_scaling", None, || {
        let dist = WeightDist::uniform(0.0, 1.0)?;
        let rows = variance_scaling_data(3, &[100, 200, 400, 800], 2_000, dist, 10)?;
        let caps_ok = rows.iter().all(|r| r.within_caps);
        let mut ratios_ok = true;
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for pair in rows.windows(2) {
            let ratio = pair[1].n_var_size / pair[0].n_var_size;
            lo = lo.min(ratio);
            hi = hi.max(ratio);
            ratios_ok &= (1.0 / 3.0..=3.0).contains(&ratio);
        }
        let values: Vec<String> = rows
            .iter()
            .map(|r| format!("{}:{:.3}", r.n, r.n_var_size))
            .collect();
        Ok((
            caps_ok && ratios_ok,
            format!(
                "n*Var(size frac) = [{}], consecutive ratios in [{lo:.2}, {hi:.2}], \
                 caps respected = {caps_ok}",
                values.join(", ")
            ),
        ))
    });

    let failed: Vec<u8> = results
        .iter()
        .filter(|(_, passed)| !passed)
        .map(|(id, _)| *id)
        .collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
