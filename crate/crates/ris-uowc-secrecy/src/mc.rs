//! Ground-truth Monte-Carlo simulator.
//!
//! Samples the physical channel model directly: phase-aligned element sums
//! of Nakagami-m amplitude products for the two RF hops, and mixture
//! exponential / generalized-Gamma irradiance for the optical hop. A second
//! sampling model draws from the fitted (moment-matched) SNR distributions
//! instead, so that discrepancies between the two isolate the
//! moment-matching approximation error from formula bugs.
//!
//! All streams are ChaCha-based with explicit seeds and an explicit stream
//! index per purpose; identical (config, seed) inputs give bit-identical
//! outputs regardless of call order.

use crate::channel::{ris_coefficients, uowc_coefficients, RisLinkSpec, UowcLinkSpec};
use crate::error::{Error, Result};
use crate::metrics::MetricEstimate;
use rand::distributions::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Exp, Gamma};

/// Eavesdropping coupling between the relay and eavesdropper RF paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Scenario {
    /// Separate surfaces: independent first-hop fades.
    I,
    /// Shared surface: the first-hop fades are common to both receivers.
    II,
}

/// Which distribution family the sampler draws from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplingModel {
    /// Element-sum channel physics (exact for the optical hop, exact sums for RF).
    Physical,
    /// The moment-matched SNR laws used by the closed forms.
    Fitted,
}

/// Full simulation scenario.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ScenarioConfig {
    pub relay_link: RisLinkSpec,
    pub eve_link: RisLinkSpec,
    pub uowc_link: UowcLinkSpec,
    pub scenario: Scenario,
    /// Target secrecy rate in bits per channel use.
    pub epsilon0_bits: f64,
    pub samples: u64,
    pub seed: u64,
    pub sampling: SamplingModel,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        self.relay_link.validate()?;
        self.eve_link.validate()?;
        self.uowc_link.validate()?;
        if self.epsilon0_bits < 0.0 {
            return Err(Error::Domain("epsilon0 must be >= 0".into()));
        }
        if self.samples < 1 {
            return Err(Error::Domain("sample count must be >= 1".into()));
        }
        if self.scenario == Scenario::II {
            let (r, e) = (&self.relay_link, &self.eve_link);
            if r.elements != e.elements || r.m_hop1 != e.m_hop1 || r.omega_hop1 != e.omega_hop1 {
                return Err(Error::Domain(
                    "scenario II requires S1 = S2 and identical first-hop (m, omega)".into(),
                ));
            }
        }
        Ok(())
    }
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Draw n Nakagami-m amplitudes: alpha = sqrt(G), G ~ Gamma(m, omega/m).
pub fn sample_nakagami(m: f64, omega: f64, n: usize, seed: u64) -> Result<Vec<f64>> {
    if !(m >= 0.5) || !(omega > 0.0) {
        return Err(Error::Domain(format!("nakagami requires m >= 0.5, omega > 0 (m={m}, omega={omega})")));
    }
    let mut rng = stream_rng(seed, 0);
    let g = Gamma::new(m, omega / m).map_err(|e| Error::Domain(e.to_string()))?;
    Ok((0..n).map(|_| g.sample(&mut rng).sqrt()).collect())
}

fn nakagami_dist(m: f64, omega: f64) -> Result<Gamma<f64>> {
    Gamma::new(m, omega / m).map_err(|e| Error::Domain(e.to_string()))
}

/// Draw one physical RIS SNR sample: gamma = (sum_i alpha_i beta_i)^2 avg_snr.
fn ris_snr_once<R: Rng>(
    hop1: &Gamma<f64>,
    hop2: &Gamma<f64>,
    elements: u32,
    avg_snr: f64,
    rng1: &mut R,
    rng2: &mut R,
) -> f64 {
    let mut sum = 0.0;
    for _ in 0..elements {
        sum += hop1.sample(rng1).sqrt() * hop2.sample(rng2).sqrt();
    }
    sum * sum * avg_snr
}

/// Physical RIS SNR samples. When `shared_first_hop` is given, those
/// amplitude draws replace the first-hop fades (scenario-II coupling); the
/// handle must contain `n * S` amplitudes in element-major order.
pub fn sample_ris_snr(
    spec: &RisLinkSpec,
    n: usize,
    seed: u64,
    shared_first_hop: Option<&[f64]>,
) -> Result<Vec<f64>> {
    spec.validate()?;
    let hop2 = nakagami_dist(spec.m_hop2, spec.omega_hop2)?;
    let mut rng2 = stream_rng(seed, 2);
    match shared_first_hop {
        Some(handle) => {
            if handle.len() != n * spec.elements as usize {
                return Err(Error::HandleMismatch(format!(
                    "expected {} first-hop amplitudes, got {}",
                    n * spec.elements as usize,
                    handle.len()
                )));
            }
            let mut out = Vec::with_capacity(n);
            for k in 0..n {
                let mut sum = 0.0;
                for e in 0..spec.elements as usize {
                    sum += handle[k * spec.elements as usize + e] * hop2.sample(&mut rng2).sqrt();
                }
                out.push(sum * sum * spec.avg_snr);
            }
            Ok(out)
        }
        None => {
            let hop1 = nakagami_dist(spec.m_hop1, spec.omega_hop1)?;
            let mut rng1 = stream_rng(seed, 1);
            Ok((0..n)
                .map(|_| ris_snr_once(&hop1, &hop2, spec.elements, spec.avg_snr, &mut rng1, &mut rng2))
                .collect())
        }
    }
}

fn uowc_snr_once<R: Rng>(spec: &UowcLinkSpec, eta_s: f64, exp: &Exp<f64>, gg: &Gamma<f64>, rng: &mut R) -> f64 {
    let s = spec.detection.s();
    let irradiance = if rng.gen::<f64>() < spec.lambda {
        exp.sample(rng)
    } else {
        spec.q * gg.sample(rng).powf(1.0 / spec.r)
    };
    eta_s * irradiance.powf(s)
}

/// Optical SNR samples: gamma = eta_s * I^s with I from the mEGG mixture.
pub fn sample_uowc_snr(spec: &UowcLinkSpec, n: usize, seed: u64) -> Result<Vec<f64>> {
    spec.validate()?;
    let eta_s = uowc_coefficients(spec)?.eta_s;
    let exp = Exp::new(1.0 / spec.sigma).map_err(|e| Error::Domain(e.to_string()))?;
    let gg = Gamma::new(spec.p, 1.0).map_err(|e| Error::Domain(e.to_string()))?;
    let mut rng = stream_rng(seed, 3);
    Ok((0..n).map(|_| uowc_snr_once(spec, eta_s, &exp, &gg, &mut rng)).collect())
}

/// All four secrecy metrics estimated from one scenario.
#[derive(Debug, Clone)]
pub struct McMetrics {
    pub asc_nats: MetricEstimate,
    pub sop_exact: MetricEstimate,
    pub sop_lower: MetricEstimate,
    pub spsc: MetricEstimate,
    /// Same four metrics with the exact harmonic equivalent SNR
    /// gamma_R gamma_U / (gamma_R + gamma_U + 1) instead of min.
    pub harmonic_sop_exact: f64,
    pub harmonic_sop_lower: f64,
    /// Mean absolute difference between the min and harmonic equivalent SNRs.
    pub min_vs_harmonic_gap: f64,
}

const BATCHES: usize = 50;

struct BatchAccumulator {
    sums: [f64; BATCHES],
    counts: [u64; BATCHES],
}

impl BatchAccumulator {
    fn new() -> Self {
        Self { sums: [0.0; BATCHES], counts: [0; BATCHES] }
    }

    fn push(&mut self, batch: usize, v: f64) {
        self.sums[batch] += v;
        self.counts[batch] += 1;
    }

    /// (mean, batch-means standard error)
    fn finish(&self) -> (f64, f64) {
        let total: f64 = self.sums.iter().sum();
        let n: u64 = self.counts.iter().sum();
        let mean = total / n as f64;
        let mut var = 0.0;
        let mut used = 0usize;
        for b in 0..BATCHES {
            if self.counts[b] > 0 {
                let bm = self.sums[b] / self.counts[b] as f64;
                var += (bm - mean) * (bm - mean);
                used += 1;
            }
        }
        if used < 2 {
            return (mean, f64::INFINITY);
        }
        let se = (var / (used as f64 - 1.0)).sqrt() / (used as f64).sqrt();
        (mean, se)
    }
}

/// Estimate ASC, exact SOP, lower-bound SOP, and SPSC by simulation.
pub fn estimate_metrics(config: &ScenarioConfig) -> Result<McMetrics> {
    config.validate()?;
    let phi = (2f64).powf(config.epsilon0_bits);
    let n = config.samples as usize;

    let mut asc = BatchAccumulator::new();
    let mut sop_e = BatchAccumulator::new();
    let mut sop_l = BatchAccumulator::new();
    let mut spsc = BatchAccumulator::new();
    let mut h_sop_e = 0.0f64;
    let mut h_sop_l = 0.0f64;
    let mut gap = 0.0f64;

    // Distinct deterministic streams per physical source.
    let mut rng_r1 = stream_rng(config.seed, 1);
    let mut rng_r2 = stream_rng(config.seed, 2);
    let mut rng_e1 = stream_rng(config.seed, 4);
    let mut rng_e2 = stream_rng(config.seed, 5);
    let mut rng_u = stream_rng(config.seed, 3);
    let mut rng_fit = stream_rng(config.seed, 6);

    enum Sampler {
        Physical {
            relay_h1: Gamma<f64>,
            relay_h2: Gamma<f64>,
            eve_h1: Gamma<f64>,
            eve_h2: Gamma<f64>,
        },
        Fitted {
            relay: Gamma<f64>,
            relay_scale: f64,
            eve: Gamma<f64>,
            eve_scale: f64,
        },
    }

    let sampler = match config.sampling {
        SamplingModel::Physical => Sampler::Physical {
            relay_h1: nakagami_dist(config.relay_link.m_hop1, config.relay_link.omega_hop1)?,
            relay_h2: nakagami_dist(config.relay_link.m_hop2, config.relay_link.omega_hop2)?,
            eve_h1: nakagami_dist(config.eve_link.m_hop1, config.eve_link.omega_hop1)?,
            eve_h2: nakagami_dist(config.eve_link.m_hop2, config.eve_link.omega_hop2)?,
        },
        SamplingModel::Fitted => {
            let cr = ris_coefficients(&config.relay_link)?;
            let ce = ris_coefficients(&config.eve_link)?;
            Sampler::Fitted {
                relay: Gamma::new(cr.a + 1.0, cr.b).map_err(|e| Error::Domain(e.to_string()))?,
                relay_scale: config.relay_link.avg_snr,
                eve: Gamma::new(ce.a + 1.0, ce.b).map_err(|e| Error::Domain(e.to_string()))?,
                eve_scale: config.eve_link.avg_snr,
            }
        }
    };

    let eta_s = uowc_coefficients(&config.uowc_link)?.eta_s;
    let u_exp = Exp::new(1.0 / config.uowc_link.sigma).map_err(|e| Error::Domain(e.to_string()))?;
    let u_gg = Gamma::new(config.uowc_link.p, 1.0).map_err(|e| Error::Domain(e.to_string()))?;

    let s_relay = config.relay_link.elements;

    for k in 0..n {
        let batch = k * BATCHES / n;
        let (g_r, g_e) = match &sampler {
            Sampler::Physical { relay_h1, relay_h2, eve_h1, eve_h2 } => {
                match config.scenario {
                    Scenario::I => (
                        ris_snr_once(relay_h1, relay_h2, s_relay, config.relay_link.avg_snr, &mut rng_r1, &mut rng_r2),
                        ris_snr_once(eve_h1, eve_h2, config.eve_link.elements, config.eve_link.avg_snr, &mut rng_e1, &mut rng_e2),
                    ),
                    Scenario::II => {
                        // Shared first-hop fades: both receivers see the same
                        // alpha draws, with independent second hops.
                        let mut sum_r = 0.0;
                        let mut sum_e = 0.0;
                        for _ in 0..s_relay {
                            let alpha = relay_h1.sample(&mut rng_r1).sqrt();
                            sum_r += alpha * relay_h2.sample(&mut rng_r2).sqrt();
                            sum_e += alpha * eve_h2.sample(&mut rng_e2).sqrt();
                        }
                        (
                            sum_r * sum_r * config.relay_link.avg_snr,
                            sum_e * sum_e * config.eve_link.avg_snr,
                        )
                    }
                }
            }
            Sampler::Fitted { relay, relay_scale, eve, eve_scale } => {
                let zr = relay.sample(&mut rng_fit);
                let ze = eve.sample(&mut rng_fit);
                (zr * zr * relay_scale, ze * ze * eve_scale)
            }
        };
        let g_u = uowc_snr_once(&config.uowc_link, eta_s, &u_exp, &u_gg, &mut rng_u);

        let g_eq = g_r.min(g_u);
        let g_harm = g_r * g_u / (g_r + g_u + 1.0);
        gap += g_eq - g_harm;

        let cs = (1.0 + g_eq).ln() - (1.0 + g_e).ln();
        asc.push(batch, cs.max(0.0));
        let outage_exact = g_eq <= phi * g_e + phi - 1.0;
        sop_e.push(batch, outage_exact as u64 as f64);
        sop_l.push(batch, (g_eq <= phi * g_e) as u64 as f64);
        spsc.push(batch, (cs > 0.0) as u64 as f64);
        h_sop_e += (g_harm <= phi * g_e + phi - 1.0) as u64 as f64;
        h_sop_l += (g_harm <= phi * g_e) as u64 as f64;
    }

    let wrap = |acc: &BatchAccumulator| {
        let (mean, se) = acc.finish();
        MetricEstimate::monte_carlo(mean, se, config.samples)
    };
    Ok(McMetrics {
        asc_nats: wrap(&asc),
        sop_exact: wrap(&sop_e),
        sop_lower: wrap(&sop_l),
        spsc: wrap(&spsc),
        harmonic_sop_exact: h_sop_e / n as f64,
        harmonic_sop_lower: h_sop_l / n as f64,
        min_vs_harmonic_gap: gap / n as f64,
    })
}

/// Convenience: empirical CDF sup-distance against a model CDF, for
/// Dvoretzky-Kiefer-Wolfowitz style fidelity checks.
pub fn ecdf_sup_distance<F: Fn(f64) -> f64>(samples: &mut [f64], model_cdf: F) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    let mut sup: f64 = 0.0;
    for (i, &x) in samples.iter().enumerate() {
        let f = model_cdf(x);
        sup = sup.max((f - i as f64 / n).abs());
        sup = sup.max((f - (i as f64 + 1.0) / n).abs());
    }
    sup
}

/// One-sided DKW band half-width at confidence level (1 - alpha).
pub fn dkw_bound(n: u64, alpha: f64) -> f64 {
    ((2.0 / alpha).ln() / (2.0 * n as f64)).sqrt()
}
