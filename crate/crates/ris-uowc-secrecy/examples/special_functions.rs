//! The Meijer G-function evaluator against its elementary reductions, plus
//! the analytically-continued beta function and an adaptive quadrature
//! sanity check.

use ris_uowc_secrecy::specfun::{
    beta_ac, integrate_semi_infinite, meijer_g, regularized_lower_gamma, MeijerGSpec,
    QuadraturePolicy,
};

fn main() -> ris_uowc_secrecy::Result<()> {
    // G^{1,0}_{0,1}[x | -; 0] = e^{-x}
    let exp_spec = MeijerGSpec::new(1, 0, vec![], vec![0.0])?;
    // G^{1,1}_{1,1}[x | 1; 1] = x / (1 + x)
    let rational_spec = MeijerGSpec::new(1, 1, vec![1.0], vec![1.0])?;
    // G^{1,1}_{1,2}[x | 1; a, 0] = Gamma(a) P(a, x)  (regularized lower
    // incomplete gamma times Gamma(a))
    let a = 2.7;
    let inc_spec = MeijerGSpec::new(1, 1, vec![1.0], vec![a, 0.0])?;
    let ga = ris_uowc_secrecy::specfun::gamma_fn(a)?;

    println!("x        |G - e^-x|      |G - x/(1+x)|   |G - Gamma(a)P(a,x)|");
    for &x in &[0.01, 0.1, 1.0, 3.0, 10.0] {
        let e1 = (meijer_g(&exp_spec, x)? - (-x).exp()).abs();
        let e2 = (meijer_g(&rational_spec, x)? - x / (1.0 + x)).abs();
        let e3 = (meijer_g(&inc_spec, x)? - ga * regularized_lower_gamma(a, x)?).abs();
        println!("{x:<8} {e1:.3e}       {e2:.3e}       {e3:.3e}");
    }

    // Analytic continuation of the beta function outside the convergent
    // region: B(3/2, -1/2) = -pi.
    let b = beta_ac(1.5, -0.5)?;
    println!("\nB(3/2, -1/2) = {b:.15}  (expected {:.15})", -std::f64::consts::PI);

    // Adaptive semi-infinite quadrature: integral of x e^{-x} dx = 1.
    let policy = QuadraturePolicy::default();
    let q = integrate_semi_infinite(|x| x * (-x).exp(), &policy)?;
    println!(
        "integral_0^inf x e^-x dx = {:.15} (error estimate {:.2e})",
        q.value, q.error
    );
    Ok(())
}
