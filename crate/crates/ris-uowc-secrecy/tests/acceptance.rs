//! Acceptance gate: one test per criterion, each printing a single
//! pass/fail line (run with `--nocapture` to see the lines for passing
//! criteria). Tolerances and runtime budgets are stated inline.

use ris_uowc_secrecy::channel::{
    cdf_snr_uowc, cdf_snr_uowc_meijer, ris_coefficients, uowc_coefficients, Detection,
    RisLinkSpec, UowcLinkSpec,
};
use ris_uowc_secrecy::mc::{dkw_bound, ecdf_sup_distance, sample_ris_snr, sample_uowc_snr};
use ris_uowc_secrecy::metrics::{
    sop_exact_quadrature, sop_lower_quadrature, spsc_quadrature, Method, SecrecyQuery,
};
use ris_uowc_secrecy::specfun::{
    beta_ac, gamma_fn, meijer_g, regularized_lower_gamma, MeijerGSpec, QuadraturePolicy,
};
use ris_uowc_secrecy::sweep::{figure_preset, run_sweep, MetricKind};
use ris_uowc_secrecy::water::WaterTable;
use std::time::Instant;

fn report(criterion: &str, started: Instant, budget_s: f64, outcome: Result<(), String>) {
    let elapsed = started.elapsed().as_secs_f64();
    match outcome {
        Ok(()) if elapsed <= budget_s => {
            println!("{criterion}: PASS ({elapsed:.1} s, budget {budget_s:.0} s)");
        }
        Ok(()) => {
            println!("{criterion}: FAIL (over budget: {elapsed:.1} s > {budget_s:.0} s)");
            panic!("{criterion} exceeded its runtime budget");
        }
        Err(why) => {
            println!("{criterion}: FAIL ({why})");
            panic!("{criterion}: {why}");
        }
    }
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Criterion 1: Meijer-G elementary reductions to <= 1e-8 relative error on
/// 50 log-spaced points each, and B(3/2, -1/2) = -pi to 1e-12.
#[test]
fn criterion_1_special_function_identities() {
    let t = Instant::now();
    let outcome = (|| -> Result<(), String> {
        let exp_spec = MeijerGSpec::new(1, 0, vec![], vec![0.0]).map_err(|e| e.to_string())?;
        let rat_spec =
            MeijerGSpec::new(1, 1, vec![0.0], vec![0.0]).map_err(|e| e.to_string())?;
        let a = 2.5;
        let inc_spec =
            MeijerGSpec::new(1, 1, vec![1.0], vec![a, 0.0]).map_err(|e| e.to_string())?;
        let ga = gamma_fn(a).map_err(|e| e.to_string())?;
        for x in log_grid(1e-3, 15.0, 50) {
            let cases = [
                ("exp", meijer_g(&exp_spec, x), (-x).exp()),
                ("rational", meijer_g(&rat_spec, x), 1.0 / (1.0 + x)),
                (
                    "incomplete-gamma",
                    meijer_g(&inc_spec, x),
                    ga * regularized_lower_gamma(a, x).map_err(|e| e.to_string())?,
                ),
            ];
            for (name, got, want) in cases {
                let got = got.map_err(|e| e.to_string())?;
                let rel = (got - want).abs() / want.abs().max(1e-300);
                if rel > 1e-8 {
                    return Err(format!("{name} reduction off by {rel:.2e} at x = {x:.3e}"));
                }
            }
        }
        let b = beta_ac(1.5, -0.5).map_err(|e| e.to_string())?;
        if (b + std::f64::consts::PI).abs() > 1e-12 {
            return Err(format!("B(3/2,-1/2) = {b}, expected -pi"));
        }
        Ok(())
    })();
    report("criterion 1 (special-function identities)", t, 10.0, outcome);
}

/// Criterion 2: optical-SNR sampler vs model CDF passes DKW at 99%
/// confidence with 1e6 samples for 5 parameter sets spanning both detection
/// modes and both exponent values; Meijer-G and incomplete-gamma CDF routes
/// agree to 1e-8 relative.
#[test]
fn criterion_2_distribution_fidelity() {
    let t = Instant::now();
    let outcome = (|| -> Result<(), String> {
        let sets = [
            (0.25, 0.40, 1.2, 1.1, 1.0, Detection::Heterodyne, 10.0),
            (0.45, 0.55, 1.0, 1.2, 2.0, Detection::Heterodyne, 3.0),
            (0.20, 0.35, 1.5, 1.1, 1.0, Detection::ImDd, 10.0),
            (0.50, 0.60, 0.9, 1.3, 2.0, Detection::ImDd, 1.0),
            (0.30, 0.50, 1.1, 1.0, 2.0, Detection::Heterodyne, 31.6),
        ];
        let n = 1_000_000usize;
        let band = dkw_bound(n as u64, 0.01);
        for (i, (lambda, sigma, p, q, r, detection, avg_snr)) in sets.into_iter().enumerate() {
            let spec = UowcLinkSpec {
                lambda,
                sigma,
                p,
                q,
                r,
                detection,
                avg_snr,
                imdd_scale_override: None,
                water: None,
            };
            let c = uowc_coefficients(&spec).map_err(|e| e.to_string())?;
            let mut samples =
                sample_uowc_snr(&spec, n, 1000 + i as u64).map_err(|e| e.to_string())?;
            let d = ecdf_sup_distance(&mut samples, |x| cdf_snr_uowc(&c, x).unwrap_or(f64::NAN));
            if d > band {
                return Err(format!("set {i}: DKW sup distance {d:.3e} > {band:.3e}"));
            }
            for x in log_grid(1e-2, 50.0, 20) {
                let e = cdf_snr_uowc(&c, x).map_err(|e| e.to_string())?;
                let g = cdf_snr_uowc_meijer(&c, x).map_err(|e| e.to_string())?;
                let rel = (e - g).abs() / e.abs().max(1e-300);
                if rel > 1e-8 {
                    return Err(format!("set {i}: CDF routes differ by {rel:.2e} at x={x:.2e}"));
                }
            }
        }
        Ok(())
    })();
    report("criterion 2 (distribution fidelity, DKW 99%)", t, 60.0, outcome);
}

/// Criterion 3: moment matching. The fitted amplitude law has mean (a+1)b
/// and variance (a+1)b^2; both must land within 3 / 5 standard errors of the
/// physical element-sum sample moments for 10 seeded-random specs at 1e6
/// samples.
#[test]
fn criterion_3_moment_matching() {
    let t = Instant::now();
    let outcome = (|| -> Result<(), String> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(33);
        let n = 1_000_000usize;
        for case in 0..10 {
            let spec = RisLinkSpec {
                m_hop1: rng.gen_range(0.6..3.0),
                m_hop2: rng.gen_range(0.6..3.0),
                omega_hop1: rng.gen_range(0.5..2.0),
                omega_hop2: rng.gen_range(0.5..2.0),
                elements: rng.gen_range(1..=3),
                avg_snr: 1.0,
            };
            let c = ris_coefficients(&spec).map_err(|e| e.to_string())?;
            let snr = sample_ris_snr(&spec, n, 100 + case, None).map_err(|e| e.to_string())?;
            // avg_snr = 1, so sqrt recovers the amplitude-law variable.
            let z: Vec<f64> = snr.iter().map(|g| g.sqrt()).collect();
            let nf = n as f64;
            let mean: f64 = z.iter().sum::<f64>() / nf;
            let var: f64 = z.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (nf - 1.0);
            let m4: f64 = z.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / nf;
            let se_mean = (var / nf).sqrt();
            let se_var = ((m4 - var * var) / nf).sqrt();
            let want_mean = (c.a + 1.0) * c.b;
            let want_var = (c.a + 1.0) * c.b * c.b;
            if (mean - want_mean).abs() > 3.0 * se_mean {
                return Err(format!(
                    "case {case}: mean {mean:.6} vs (a+1)b = {want_mean:.6} (> 3 se = {:.1e})",
                    3.0 * se_mean
                ));
            }
            if (var - want_var).abs() > 5.0 * se_var {
                return Err(format!(
                    "case {case}: variance {var:.6} vs (a+1)b^2 = {want_var:.6} (> 5 se = {:.1e})",
                    5.0 * se_var
                ));
            }
        }
        Ok(())
    })();
    report("criterion 3 (moment matching, 10 random specs)", t, 60.0, outcome);
}

/// Criterion 4 (core cross-validation): three preset configurations at 5
/// axis points each; quadrature ASC / SOP_E / SOP_L / SPSC agree with
/// fitted-law Monte-Carlo within 3 stderr at 1e6 samples, and the closed
/// lower-bound SOP agrees with quadrature within 1e-3 absolute wherever its
/// convergence flag is true.
#[test]
fn criterion_4_metric_cross_validation() {
    let t = Instant::now();
    let outcome = (|| -> Result<(), String> {
        let table = WaterTable::load_default().map_err(|e| e.to_string())?;
        for name in ["fig2", "fig3", "fig5"] {
            let mut cfg = figure_preset(name).map_err(|e| e.to_string())?;
            cfg.axis.points = 5;
            cfg.metrics = vec![
                MetricKind::Asc,
                MetricKind::SopExact,
                MetricKind::SopLower,
                MetricKind::Spsc,
            ];
            cfg.methods = vec![Method::Closed, Method::Quadrature, Method::MonteCarlo];
            cfg.mc_samples = 1_000_000;
            cfg.mc_sampling = ris_uowc_secrecy::mc::SamplingModel::Fitted;
            cfg.allow_placeholder_water = true;
            cfg.seed = 90_210;
            let sweep = run_sweep(&cfg, &table).map_err(|e| e.to_string())?;
            for row in &sweep.rows {
                for metric in &cfg.metrics {
                    let cell = |m: Method| {
                        row.cells
                            .iter()
                            .find(|c| c.metric == *metric && c.method == m)
                            .and_then(|c| c.estimate)
                    };
                    let quad = cell(Method::Quadrature).ok_or_else(|| {
                        format!("{name}/{}/{}: quadrature failed", row.family, metric.name())
                    })?;
                    let mc = cell(Method::MonteCarlo).ok_or_else(|| {
                        format!("{name}/{}/{}: mc failed", row.family, metric.name())
                    })?;
                    let se = mc.std_error.unwrap_or(f64::INFINITY);
                    let dev = (quad.value - mc.value).abs();
                    // The 1e-6 floor covers degenerate points where every
                    // sample is identical (stderr exactly zero) while the
                    // quadrature value sits at cancellation-noise scale,
                    // e.g. SPSC = 1 - SOP with SOP ~ 1.
                    if dev > 3.0 * se + 1e-6 {
                        return Err(format!(
                            "{name}/{}/{} at {:.1} dB: |quad - mc| = {dev:.3e} > 3 se = {:.3e}",
                            row.family,
                            metric.name(),
                            row.axis_db.unwrap_or(f64::NAN),
                            3.0 * se
                        ));
                    }
                    if *metric == MetricKind::SopLower {
                        if let Some(closed) = cell(Method::Closed) {
                            if closed.converged && (closed.value - quad.value).abs() > 1e-3 {
                                return Err(format!(
                                    "{name}/{}/sop_lower at {:.1} dB: closed {:.6e} vs quad {:.6e}",
                                    row.family,
                                    row.axis_db.unwrap_or(f64::NAN),
                                    closed.value,
                                    quad.value
                                ));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    })();
    report("criterion 4 (closed vs quadrature vs MC cross-validation)", t, 300.0, outcome);
}

/// Criterion 5: identities and orderings, exhaustively asserted. SPSC +
/// SOP_E(0) = 1 within 1e-9; SOP_L <= SOP_E pointwise; SOP_E nondecreasing
/// in the target rate on the rate-family grid.
#[test]
fn criterion_5_identities_and_orderings() {
    let t = Instant::now();
    let outcome = (|| -> Result<(), String> {
        let policy = QuadraturePolicy::default();
        let table = WaterTable::load_default().map_err(|e| e.to_string())?;
        let cfg = figure_preset("fig12").map_err(|e| e.to_string())?;
        let grid = cfg.axis.grid();
        let mut rates: Vec<f64> = vec![0.0];
        for fam in &cfg.families {
            if let Some(v) = fam.set.get("epsilon0_bits").and_then(|v| v.as_float()) {
                rates.push(v);
            }
        }
        for &axis_db in &grid {
            let mut template = cfg.scenario.clone();
            ris_uowc_secrecy::sweep::apply_numeric(&mut template, &cfg.axis.parameter, axis_db)
                .map_err(|e| e.to_string())?;
            let r = template.resolve(&table).map_err(|e| e.to_string())?;
            let rc = ris_coefficients(&r.relay).map_err(|e| e.to_string())?;
            let ec = ris_coefficients(&r.eve).map_err(|e| e.to_string())?;
            let uc = uowc_coefficients(&r.uowc).map_err(|e| e.to_string())?;

            let spsc = spsc_quadrature(&rc, &uc, &ec, &policy).map_err(|e| e.to_string())?;
            let zero = SecrecyQuery { epsilon0_bits: 0.0, ..SecrecyQuery::default() };
            let sop0 = sop_exact_quadrature(&rc, &uc, &ec, &zero, &policy)
                .map_err(|e| e.to_string())?;
            let defect = (spsc.value + sop0.value - 1.0).abs();
            if defect > 1e-9 {
                return Err(format!("SPSC + SOP_E(0) - 1 = {defect:.2e} at {axis_db} dB"));
            }

            let mut prev = -1.0f64;
            for &eps in &rates {
                let q = SecrecyQuery { epsilon0_bits: eps, ..SecrecyQuery::default() };
                let exact = sop_exact_quadrature(&rc, &uc, &ec, &q, &policy)
                    .map_err(|e| e.to_string())?;
                let lower = sop_lower_quadrature(&rc, &uc, &ec, &q, &policy)
                    .map_err(|e| e.to_string())?;
                // At eps0 = 0 the two integrands coincide exactly, so the
                // comparison is a tie up to quadrature round-off.
                if lower.value > exact.value + 1e-12 {
                    return Err(format!(
                        "SOP_L {:.6e} > SOP_E {:.6e} at eps0={eps}, {axis_db} dB",
                        lower.value, exact.value
                    ));
                }
                if exact.value < prev {
                    return Err(format!(
                        "SOP_E decreased in eps0 at eps0={eps}, {axis_db} dB"
                    ));
                }
                prev = exact.value;
            }
        }
        Ok(())
    })();
    report("criterion 5 (identities and orderings, zero tolerance)", t, 120.0, outcome);
}

/// Criterion 6 (conditional): with an authoritative turbulence table, the
/// lower-bound SOP at a relay SNR of 20 dB under the thermal-gradient
/// configuration reproduces 0.09076 / 0.20344 / 0.23833 within 2% relative.
/// Skipped (reported, not failed) while the bundled table holds placeholder
/// fits.
#[test]
fn criterion_6_reference_value_reproduction() {
    let t = Instant::now();
    let table = match WaterTable::load_default() {
        Ok(t) => t,
        Err(e) => {
            report("criterion 6 (reference values)", t, 60.0, Err(e.to_string()));
            return;
        }
    };
    if !table.authoritative {
        println!(
            "criterion 6 (reference values): SKIPPED (water-condition table is not \
             authoritative; supply the transcribed turbulence fits via UOWC_WATER_TABLE)"
        );
        return;
    }
    let outcome = (|| -> Result<(), String> {
        let policy = QuadraturePolicy::default();
        let cfg = figure_preset("fig8").map_err(|e| e.to_string())?;
        let expected = [
            ("h2.4_l0.05", 0.09076),
            ("h4.7_l0.05", 0.20344),
            ("h4.7_l0.10", 0.23833),
        ];
        for (label, want) in expected {
            let fam = cfg
                .families
                .iter()
                .find(|f| f.label == label)
                .ok_or_else(|| format!("family {label} missing"))?;
            let mut template = cfg.scenario.clone();
            for (path, value) in &fam.set {
                ris_uowc_secrecy::sweep::apply_value(&mut template, path, value)
                    .map_err(|e| e.to_string())?;
            }
            ris_uowc_secrecy::sweep::apply_numeric(&mut template, &cfg.axis.parameter, 20.0)
                .map_err(|e| e.to_string())?;
            let r = template.resolve(&table).map_err(|e| e.to_string())?;
            let rc = ris_coefficients(&r.relay).map_err(|e| e.to_string())?;
            let ec = ris_coefficients(&r.eve).map_err(|e| e.to_string())?;
            let uc = uowc_coefficients(&r.uowc).map_err(|e| e.to_string())?;
            let q = SecrecyQuery { epsilon0_bits: r.epsilon0_bits, ..SecrecyQuery::default() };
            let got = sop_lower_quadrature(&rc, &uc, &ec, &q, &policy)
                .map_err(|e| e.to_string())?
                .value;
            let rel = (got - want).abs() / want;
            if rel > 0.02 {
                return Err(format!(
                    "{label}: SOP_L = {got:.5} vs {want:.5} ({:.1}% off)",
                    100.0 * rel
                ));
            }
        }
        Ok(())
    })();
    report("criterion 6 (reference values)", t, 60.0, outcome);
}

/// Criterion 7: qualitative orderings on 5-point relay-SNR grids:
/// fresh-water SOP_L <= salty-water SOP_L at matched bubble level, and
/// heterodyne SOP_L <= IM/DD SOP_L at matched configurations.
#[test]
fn criterion_7_qualitative_orderings() {
    let t = Instant::now();
    let outcome = (|| -> Result<(), String> {
        let policy = QuadraturePolicy::default();
        let table = WaterTable::load_default().map_err(|e| e.to_string())?;
        let query = SecrecyQuery { epsilon0_bits: 0.01, ..SecrecyQuery::default() };
        let grid_db = [0.0, 5.0, 10.0, 15.0, 20.0];
        let base = RisLinkSpec {
            m_hop1: 2.0,
            m_hop2: 2.0,
            omega_hop1: 1.0,
            omega_hop2: 1.0,
            elements: 2,
            avg_snr: 1.0,
        };
        let eve = ris_coefficients(&base).map_err(|e| e.to_string())?;
        let sop_l = |label: &str, detection: Detection, snr_db: f64| -> Result<f64, String> {
            let rec = table.lookup(label).map_err(|e| e.to_string())?;
            let uowc = UowcLinkSpec {
                lambda: rec.lambda,
                sigma: rec.sigma,
                p: rec.p,
                q: rec.q,
                r: rec.r,
                detection,
                avg_snr: 100.0,
                imdd_scale_override: None,
                water: Some(rec.condition()),
            };
            let relay = RisLinkSpec {
                avg_snr: ris_uowc_secrecy::sweep::db_to_linear(snr_db),
                ..base
            };
            let rc = ris_coefficients(&relay).map_err(|e| e.to_string())?;
            let uc = uowc_coefficients(&uowc).map_err(|e| e.to_string())?;
            Ok(sop_lower_quadrature(&rc, &uc, &eve, &query, &policy)
                .map_err(|e| e.to_string())?
                .value)
        };
        for h in ["h2.4", "h4.7"] {
            for &db in &grid_db {
                let fresh = sop_l(&format!("uniform_fresh_{h}"), Detection::Heterodyne, db)?;
                let salty = sop_l(&format!("uniform_salty_{h}"), Detection::Heterodyne, db)?;
                if fresh > salty {
                    return Err(format!(
                        "fresh SOP_L {fresh:.5} > salty {salty:.5} at {h}, {db} dB"
                    ));
                }
                let hd = sop_l(&format!("uniform_fresh_{h}"), Detection::Heterodyne, db)?;
                let imdd = sop_l(&format!("uniform_fresh_{h}"), Detection::ImDd, db)?;
                if hd > imdd {
                    return Err(format!(
                        "heterodyne SOP_L {hd:.5} > IM/DD {imdd:.5} at {h}, {db} dB"
                    ));
                }
            }
        }
        Ok(())
    })();
    report("criterion 7 (qualitative orderings)", t, 120.0, outcome);
}
