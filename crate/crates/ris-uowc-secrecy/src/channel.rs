//! Link parametrization and SNR distributions for the three links:
//! the RIS-aided RF hop to the relay, the RIS-aided RF hop to the
//! eavesdropper, and the underwater optical hop to the user.
//!
//! The cascaded RIS channel sum S * alpha * beta is moment-matched to a
//! Gamma-type amplitude law with shape offset `a` and scale `b`; squaring and
//! scaling by the average SNR gives the closed-form SNR density
//! K1 * gamma^K2 * exp(-K3 * sqrt(gamma)). The underwater link follows the
//! mixture exponential / generalized-Gamma irradiance model with detection
//! mode s mapping irradiance to SNR as gamma = eta_s * I^s.

use crate::error::{Error, Result};
use crate::specfun::gamma::{gamma, ln_gamma, regularized_lower_gamma};
use crate::specfun::meijer::{meijer_g, MeijerGSpec};
use serde::{Deserialize, Serialize};

/// Water salinity tag for the mEGG parameter records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Salinity {
    Fresh,
    Salty,
}

/// Nakagami-m dual-hop RIS link parameters.
///
/// `omega` is the mean power E[alpha^2] (second moment), the standard
/// Nakagami-m convention.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RisLinkSpec {
    pub m_hop1: f64,
    pub m_hop2: f64,
    pub omega_hop1: f64,
    pub omega_hop2: f64,
    /// Number of reflecting elements S.
    pub elements: u32,
    /// Linear-scale average SNR of the cascaded link.
    pub avg_snr: f64,
}

impl RisLinkSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, m) in [("m_hop1", self.m_hop1), ("m_hop2", self.m_hop2)] {
            if !(m >= 0.5) {
                return Err(Error::Domain(format!("{name} must be >= 0.5, got {m}")));
            }
        }
        for (name, w) in [("omega_hop1", self.omega_hop1), ("omega_hop2", self.omega_hop2)] {
            if !(w > 0.0) {
                return Err(Error::Domain(format!("{name} must be > 0, got {w}")));
            }
        }
        if self.elements == 0 {
            return Err(Error::Domain("elements must be >= 1".into()));
        }
        if !(self.avg_snr > 0.0) {
            return Err(Error::Domain(format!("avg_snr must be > 0, got {}", self.avg_snr)));
        }
        Ok(())
    }

    /// Mean amplitude E[alpha] of one Nakagami-m hop factor.
    pub fn hop_mean(m: f64, omega: f64) -> Result<f64> {
        Ok((ln_gamma(m + 0.5)? - ln_gamma(m)?).exp() * (omega / m).sqrt())
    }
}

/// Moment-matching constants for a RIS link SNR law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RisCoefficients {
    pub a: f64,
    pub b: f64,
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    /// log Gamma(a + 1), cached for the series coefficients.
    pub ln_gamma_a1: f64,
    pub avg_snr: f64,
}

/// Derive the moment-matching constants from a link spec.
pub fn ris_coefficients(spec: &RisLinkSpec) -> Result<RisCoefficients> {
    spec.validate()?;
    let (m1, m2) = (spec.m_hop1, spec.m_hop2);
    let (w1, w2) = (spec.omega_hop1, spec.omega_hop2);
    let s = spec.elements as f64;
    let g1 = gamma(m1)?;
    let g2 = gamma(m2)?;
    let g1h = gamma(m1 + 0.5)?;
    let g2h = gamma(m2 + 0.5)?;
    let num = m1 * m2 * g1 * g1 * g2 * g2;
    let denom = num - g1h * g1h * g2h * g2h;
    if denom <= 0.0 {
        return Err(Error::DegenerateMoments(format!(
            "moment denominator {denom} <= 0 for m1={m1}, m2={m2}"
        )));
    }
    let a = s * num / denom - s - 1.0;
    let b = denom / ((m1 / w1).sqrt() * g1 * g1h * (m2 / w2).sqrt() * g2 * g2h);
    if a + 1.0 <= 0.0 {
        return Err(Error::DegenerateMoments(format!("a + 1 = {} <= 0", a + 1.0)));
    }
    let ln_gamma_a1 = ln_gamma(a + 1.0)?;
    let k3 = (1.0 / spec.avg_snr).sqrt() / b;
    // Normalized prefactor of gamma^K2 exp(-K3 sqrt(gamma)); equals
    // K3^{a+1} / (2 Gamma(a+1)).
    let k1 = ((a + 1.0) * k3.ln() - ln_gamma_a1).exp() / 2.0;
    Ok(RisCoefficients { a, b, k1, k2: (a - 1.0) / 2.0, k3, ln_gamma_a1, avg_snr: spec.avg_snr })
}

impl RisCoefficients {
    /// Series CDF coefficient K4(n) for the exponent upsilon(n) = a + n + 1.
    pub fn k4(&self, n: u32) -> f64 {
        let ups = self.upsilon(n);
        let mut ln_fact = 0.0;
        for j in 1..=n {
            ln_fact += (j as f64).ln();
        }
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        sign * (ups * self.k3.ln() - ln_fact - ups.ln() - self.ln_gamma_a1).exp()
    }

    pub fn upsilon(&self, n: u32) -> f64 {
        self.a + n as f64 + 1.0
    }
}

/// PDF of the RIS link SNR.
pub fn pdf_snr_ris(c: &RisCoefficients, snr: f64) -> Result<f64> {
    if !(snr > 0.0) {
        return Err(Error::Domain(format!("pdf_snr_ris requires gamma > 0, got {snr}")));
    }
    Ok(c.k1 * snr.powf(c.k2) * (-c.k3 * snr.sqrt()).exp())
}

/// CDF of the RIS link SNR via the regularized lower incomplete gamma.
pub fn cdf_snr_ris(c: &RisCoefficients, snr: f64) -> Result<f64> {
    if snr < 0.0 {
        return Err(Error::Domain(format!("cdf_snr_ris requires gamma >= 0, got {snr}")));
    }
    if snr == 0.0 {
        return Ok(0.0);
    }
    regularized_lower_gamma(c.a + 1.0, c.k3 * snr.sqrt())
}

/// Truncated-series evaluation of the RIS CDF with compensated accumulation.
#[derive(Debug, Clone, Copy)]
pub struct SeriesCdf {
    pub value: f64,
    pub terms_used: u32,
    pub last_term: f64,
    pub converged: bool,
}

pub fn cdf_snr_ris_series(c: &RisCoefficients, snr: f64, max_terms: u32) -> Result<SeriesCdf> {
    if snr < 0.0 {
        return Err(Error::Domain(format!("series CDF requires gamma >= 0, got {snr}")));
    }
    if max_terms < 1 {
        return Err(Error::Domain("series truncation must be >= 1".into()));
    }
    if snr == 0.0 {
        return Ok(SeriesCdf { value: 0.0, terms_used: 0, last_term: 0.0, converged: true });
    }
    let mut sum = 0.0;
    let mut comp = 0.0;
    let mut last = f64::INFINITY;
    for n in 0..max_terms {
        let term = c.k4(n) * snr.powf(c.upsilon(n) / 2.0);
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        last = term;
        if term.abs() < 1e-12 * sum.abs().max(1e-300) {
            return Ok(SeriesCdf { value: sum, terms_used: n + 1, last_term: term, converged: true });
        }
    }
    Ok(SeriesCdf { value: sum, terms_used: max_terms, last_term: last, converged: false })
}

/// Detection mode of the optical receiver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Detection {
    /// Heterodyne (s = 1).
    Heterodyne,
    /// Intensity modulation / direct detection (s = 2).
    ImDd,
}

impl Detection {
    pub fn s(&self) -> f64 {
        match self {
            Detection::Heterodyne => 1.0,
            Detection::ImDd => 2.0,
        }
    }
}

/// Descriptive water-condition metadata attached to a UOWC link.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaterCondition {
    pub label: String,
    /// Air-bubble level, litres per minute.
    pub h_lpm: f64,
    /// Temperature gradient, degrees C per cm (0 for thermally uniform).
    pub l_degc_per_cm: f64,
    pub salinity: Salinity,
}

/// Underwater optical link parameters (mixture exponential generalized Gamma).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UowcLinkSpec {
    /// Mixture weight of the exponential branch, in (0, 1).
    pub lambda: f64,
    /// Exponential branch parameter.
    pub sigma: f64,
    /// Generalized-Gamma shape.
    pub p: f64,
    /// Generalized-Gamma scale.
    pub q: f64,
    /// Generalized-Gamma exponent.
    pub r: f64,
    pub detection: Detection,
    /// Linear-scale average SNR of the optical link.
    pub avg_snr: f64,
    /// The scale symbol entering the IM/DD electrical-SNR normalization is
    /// undefined in the source analysis; it defaults to `q` and can be
    /// overridden here.
    pub imdd_scale_override: Option<f64>,
    pub water: Option<WaterCondition>,
}

impl UowcLinkSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda < 1.0) {
            return Err(Error::Domain(format!("lambda must lie in (0,1), got {}", self.lambda)));
        }
        for (name, v) in [
            ("sigma", self.sigma),
            ("p", self.p),
            ("q", self.q),
            ("r", self.r),
            ("avg_snr", self.avg_snr),
        ] {
            if !(v > 0.0) {
                return Err(Error::Domain(format!("{name} must be > 0, got {v}")));
            }
        }
        Ok(())
    }

    /// Mean irradiance E[I] of the mixture.
    pub fn mean_irradiance(&self) -> Result<f64> {
        let gg = (ln_gamma(self.p + 1.0 / self.r)? - ln_gamma(self.p)?).exp();
        Ok(self.lambda * self.sigma + (1.0 - self.lambda) * self.q * gg)
    }

    /// Second moment E[I^2] of the mixture.
    pub fn second_moment_irradiance(&self) -> Result<f64> {
        let scale = self.imdd_scale_override.unwrap_or(self.q);
        let gg = (ln_gamma(self.p + 2.0 / self.r)? - ln_gamma(self.p)?).exp();
        Ok(2.0 * self.lambda * self.sigma * self.sigma
            + scale * scale * (1.0 - self.lambda) * gg)
    }
}

/// Derived per-branch constants of the mEGG SNR law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UowcBranch {
    pub psi: f64,
    pub lambda_exp: f64,
    pub chi: f64,
    pub upsilon: f64,
    pub zeta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UowcCoefficients {
    pub eta_s: f64,
    pub s: f64,
    pub branches: [UowcBranch; 2],
    /// Mixture weight, kept for the elementary CDF route.
    pub mix: f64,
    /// Generalized-Gamma shape, kept for the elementary CDF route.
    pub gg_shape: f64,
}

/// Derive the per-branch constants from a link spec.
pub fn uowc_coefficients(spec: &UowcLinkSpec) -> Result<UowcCoefficients> {
    spec.validate()?;
    let s = spec.detection.s();
    let eta_s = match spec.detection {
        Detection::Heterodyne => spec.avg_snr,
        Detection::ImDd => spec.avg_snr / spec.second_moment_irradiance()?,
    };
    let gp = gamma(spec.p)?;
    let b1 = UowcBranch {
        psi: 1.0 / (spec.sigma * eta_s.powf(1.0 / s)),
        lambda_exp: 1.0 / s,
        chi: 1.0,
        upsilon: spec.lambda / s,
        zeta: spec.lambda,
    };
    let b2 = UowcBranch {
        psi: 1.0 / (spec.q.powf(spec.r) * eta_s.powf(spec.r / s)),
        lambda_exp: spec.r / s,
        chi: spec.p,
        upsilon: spec.r * (1.0 - spec.lambda) / (s * gp),
        zeta: (1.0 - spec.lambda) / gp,
    };
    Ok(UowcCoefficients { eta_s, s, branches: [b1, b2], mix: spec.lambda, gg_shape: spec.p })
}

/// PDF of the UOWC SNR via the elementary reduction of the G-kernel.
pub fn pdf_snr_uowc(c: &UowcCoefficients, snr: f64) -> Result<f64> {
    if !(snr > 0.0) {
        return Err(Error::Domain(format!("pdf_snr_uowc requires gamma > 0, got {snr}")));
    }
    let mut f = 0.0;
    for br in &c.branches {
        let t = br.psi * snr.powf(br.lambda_exp);
        f += br.upsilon / snr * t.powf(br.chi) * (-t).exp();
    }
    Ok(f)
}

/// PDF of the UOWC SNR through the Meijer-G kernel (cross-validation path).
pub fn pdf_snr_uowc_meijer(c: &UowcCoefficients, snr: f64) -> Result<f64> {
    if !(snr > 0.0) {
        return Err(Error::Domain(format!("pdf requires gamma > 0, got {snr}")));
    }
    let mut f = 0.0;
    for br in &c.branches {
        let spec = MeijerGSpec::new(1, 0, vec![], vec![br.chi])?;
        let t = br.psi * snr.powf(br.lambda_exp);
        f += br.upsilon / snr * meijer_g(&spec, t)?;
    }
    Ok(f)
}

/// CDF of the UOWC SNR; closed incomplete-gamma route.
pub fn cdf_snr_uowc(c: &UowcCoefficients, snr: f64) -> Result<f64> {
    if snr < 0.0 {
        return Err(Error::Domain(format!("cdf_snr_uowc requires gamma >= 0, got {snr}")));
    }
    if snr == 0.0 {
        return Ok(0.0);
    }
    let t1 = c.branches[0].psi * snr.powf(c.branches[0].lambda_exp);
    let t2 = c.branches[1].psi * snr.powf(c.branches[1].lambda_exp);
    Ok(c.mix * (1.0 - (-t1).exp())
        + (1.0 - c.mix) * regularized_lower_gamma(c.gg_shape, t2)?)
}

/// CDF of the UOWC SNR through the Meijer-G kernel (cross-validation path).
pub fn cdf_snr_uowc_meijer(c: &UowcCoefficients, snr: f64) -> Result<f64> {
    if snr < 0.0 {
        return Err(Error::Domain(format!("cdf requires gamma >= 0, got {snr}")));
    }
    if snr == 0.0 {
        return Ok(0.0);
    }
    let mut f = 0.0;
    for br in &c.branches {
        let spec = MeijerGSpec::new(1, 1, vec![1.0], vec![br.chi, 0.0])?;
        let t = br.psi * snr.powf(br.lambda_exp);
        f += br.zeta * meijer_g(&spec, t)?;
    }
    Ok(f)
}

/// Dual-hop equivalent-SNR CDF under the min approximation:
/// F_eq = F_R + F_U - F_R F_U.
pub fn cdf_snr_equivalent(ris: &RisCoefficients, uowc: &UowcCoefficients, snr: f64) -> Result<f64> {
    let fr = cdf_snr_ris(ris, snr)?;
    let fu = cdf_snr_uowc(uowc, snr)?;
    Ok(fr + fu - fr * fu)
}
