use num_complex::Complex64;

/// Below this modulus `φ₁` is evaluated from its Taylor polynomial.
pub const PHI1_SERIES_RADIUS: f64 = 1e-6;

/// `e^z - 1` without cancellation for small `|z|`.
pub fn expm1_complex(z: Complex64) -> Complex64 {
    let (s, c) = z.im.sin_cos();
    let half = (0.5 * z.im).sin();
    // e^x cos y - 1 = expm1(x) cos y - 2 sin²(y/2)
    let re = z.re.exp_m1() * c - 2.0 * half * half;
    let im = z.re.exp() * s;
    Complex64::new(re, im)
}

/// `φ₁(z) = (e^z - 1) / z`, with `φ₁(0) = 1`.
pub fn phi1(z: Complex64) -> Complex64 {
    if z.norm() < PHI1_SERIES_RADIUS {
        // 1 + z/2 + z²/6 + z³/24
        Complex64::new(1.0, 0.0) + z * (0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0)))
    } else {
        expm1_complex(z) / z
    }
}
