//! Secrecy outage probability (exact and lower bound) and the probability of
//! strictly positive secrecy capacity as functions of the target rate.
//!
//! Demonstrates the bound ordering SOP_L <= SOP_E, monotonicity in the
//! target rate, and the identity SPSC = 1 - SOP at zero rate.

use ris_uowc_secrecy::channel::{
    ris_coefficients, uowc_coefficients, Detection, RisLinkSpec, UowcLinkSpec,
};
use ris_uowc_secrecy::metrics::{
    sop_exact_quadrature, sop_exact_series, sop_lower_closed, sop_lower_quadrature,
    spsc_quadrature, SecrecyQuery,
};
use ris_uowc_secrecy::specfun::QuadraturePolicy;

fn main() -> ris_uowc_secrecy::Result<()> {
    let relay = RisLinkSpec {
        m_hop1: 2.0,
        m_hop2: 2.0,
        omega_hop1: 1.0,
        omega_hop2: 1.0,
        elements: 2,
        avg_snr: 31.6,
    };
    let eve = RisLinkSpec { avg_snr: 1.0, ..relay };
    let uowc = UowcLinkSpec {
        lambda: 0.21,
        sigma: 0.4,
        p: 1.4,
        q: 1.12,
        r: 2.0,
        detection: Detection::Heterodyne,
        avg_snr: 31.6,
        imdd_scale_override: None,
        water: None,
    };
    let rc = ris_coefficients(&relay)?;
    let ec = ris_coefficients(&eve)?;
    let uc = uowc_coefficients(&uowc)?;
    let policy = QuadraturePolicy::default();

    println!("eps0(bits)   SOP_L(closed)  SOP_L(quad)    SOP_E(quad)    SOP_E(series, experimental)");
    for eps in [0.0, 0.1, 0.5, 1.0, 2.0] {
        let query = SecrecyQuery { epsilon0_bits: eps, ..SecrecyQuery::default() };
        let lower_c = sop_lower_closed(&rc, &uc, &ec, &query)?;
        let lower_q = sop_lower_quadrature(&rc, &uc, &ec, &query, &policy)?;
        let exact_q = sop_exact_quadrature(&rc, &uc, &ec, &query, &policy)?;
        // The exact-SOP series rebuilds an unpublished combination
        // coefficient, so it is opt-in and always reports its deviation
        // from the quadrature reference.
        let exact_s = sop_exact_series(&rc, &uc, &ec, &query, true, &policy)?;
        println!(
            "{eps:>9.2}   {:.6e}   {:.6e}   {:.6e}   {:.6e} (dev {:.1e})",
            lower_c.value, lower_q.value, exact_q.value, exact_s.series.value, exact_s.deviation
        );
        assert!(lower_q.value <= exact_q.value + 1e-9, "bound ordering violated");
    }

    let spsc = spsc_quadrature(&rc, &uc, &ec, &policy)?;
    let zero = SecrecyQuery { epsilon0_bits: 0.0, ..SecrecyQuery::default() };
    let sop0 = sop_exact_quadrature(&rc, &uc, &ec, &zero, &policy)?;
    println!(
        "\nSPSC = {:.10}, 1 - SOP(0) = {:.10}, |identity defect| = {:.2e}",
        spsc.value,
        1.0 - sop0.value,
        (spsc.value - (1.0 - sop0.value)).abs()
    );
    Ok(())
}
