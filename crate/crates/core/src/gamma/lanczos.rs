//! Classical Γ on the complex plane (Lanczos, `g = 7`, 9 terms).

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Result};

const G: f64 = 7.0;
const P: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// `ln Γ(z)` for `Re z ≥ 1/2` (principal branch of the Lanczos form).
fn ln_gamma_right(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut x = Complex64::new(P[0], 0.0);
    for (i, p) in P.iter().enumerate().skip(1) {
        x += p / (z + i as f64);
    }
    let t = z + G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

/// `ln Γ(z)` up to a multiple of `2πi`; reflection for `Re z < 1/2`.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if is_pole(z) {
        return domain(format!("Γ has a pole at z = {}", z.re));
    }
    if z.re >= 0.5 {
        return Ok(ln_gamma_right(z));
    }
    // Γ(z) = π / (sin(πz) Γ(1 - z))
    let s = (PI * z).sin();
    Ok(PI.ln() - s.ln() - ln_gamma_right(1.0 - z))
}

pub fn gamma_classical(z: Complex64) -> Result<Complex64> {
    if is_pole(z) {
        return domain(format!("Γ has a pole at z = {}", z.re));
    }
    if z.re >= 0.5 {
        return Ok(ln_gamma_right(z).exp());
    }
    Ok(PI / ((PI * z).sin() * ln_gamma_right(1.0 - z).exp()))
}
