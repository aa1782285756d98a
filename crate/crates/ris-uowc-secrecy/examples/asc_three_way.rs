//! Average secrecy capacity on all three routes: the analytical series, the
//! defining integral by adaptive quadrature, and the Monte-Carlo oracle.
//!
//! The analytical route continues divergent term integrals via the beta
//! function and resums an alternating outer series; in double precision that
//! resummation only settles when the eavesdropper SNR is high, so the
//! estimate carries an explicit convergence flag. Quadrature and simulation
//! are reliable everywhere.

use ris_uowc_secrecy::channel::{
    ris_coefficients, uowc_coefficients, Detection, RisLinkSpec, UowcLinkSpec,
};
use ris_uowc_secrecy::mc::{estimate_metrics, SamplingModel, Scenario, ScenarioConfig};
use ris_uowc_secrecy::metrics::{asc_closed, asc_quadrature, SecrecyQuery};
use ris_uowc_secrecy::specfun::QuadraturePolicy;

fn main() -> ris_uowc_secrecy::Result<()> {
    let policy = QuadraturePolicy::default();
    println!("gamma_r  gamma_e   closed (flag)        quadrature       mc +- stderr");
    for (gr, gu, ge) in [(100.0, 1.0, 25.0), (50.0, 2.0, 25.0), (30.0, 1.0, 10.0), (5.0, 5.0, 0.5)]
    {
        let relay = RisLinkSpec {
            m_hop1: 2.0,
            m_hop2: 2.0,
            omega_hop1: 1.0,
            omega_hop2: 1.0,
            elements: 2,
            avg_snr: gr,
        };
        let eve = RisLinkSpec { avg_snr: ge, ..relay };
        let uowc = UowcLinkSpec {
            lambda: 0.25,
            sigma: 0.4,
            p: 1.2,
            q: 1.1,
            r: 1.0,
            detection: Detection::Heterodyne,
            avg_snr: gu,
            imdd_scale_override: None,
            water: None,
        };
        let rc = ris_coefficients(&relay)?;
        let ec = ris_coefficients(&eve)?;
        let uc = uowc_coefficients(&uowc)?;
        let query = SecrecyQuery::default();

        let closed = asc_closed(&rc, &uc, &ec, &query)?;
        let quad = asc_quadrature(&rc, &uc, &ec, &policy)?;
        let mc = estimate_metrics(&ScenarioConfig {
            relay_link: relay,
            eve_link: eve,
            uowc_link: uowc,
            scenario: Scenario::I,
            epsilon0_bits: 0.0,
            samples: 200_000,
            seed: 9,
            sampling: SamplingModel::Fitted,
        })?;
        let closed_txt = if closed.converged {
            format!("{:.6e} (ok)  ", closed.value)
        } else {
            "   diverged (flagged)".to_string()
        };
        println!(
            "{gr:>7}  {ge:>7}   {closed_txt}   {:.6e}   {:.6e} +- {:.1e}",
            quad.value,
            mc.asc_nats.value,
            mc.asc_nats.std_error.unwrap_or(f64::NAN)
        );
    }
    println!("\n(values in nats; mc uses the fitted SNR laws, matching the analytical model)");
    Ok(())
}
