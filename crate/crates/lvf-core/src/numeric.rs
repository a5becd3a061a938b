//! Floating-point oracles. Everything approximate lives here: quadrature,
//! the matrix exponential, and complex evaluation of Laurent polynomials.
//! The exact calculi never call into this module; tests and float-mode
//! checks compare exact results against these independently coded routes.

/// Composite Simpson rule for `∫_a^b f` with `n` subintervals (rounded up
/// to even). `n ≥ 2`.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = if n < 2 {
        2
    } else if n % 2 == 1 {
        n + 1
    } else {
        n
    };
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + h * k as f64);
    }
    sum * h / 3.0
}

/// Dense f64 matrix helpers for the exponential oracle.
#[derive(Debug, Clone)]
pub struct FMatrix {
    pub n: usize,
    pub data: Vec<f64>,
}

impl FMatrix {
    pub fn zeros(n: usize) -> Self {
        FMatrix { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = FMatrix::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = FMatrix::zeros(n);
        for r in 0..n {
            for c in 0..n {
                m.data[r * n + c] = f(r, c);
            }
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.n + c] = v;
    }

    pub fn mul(&self, rhs: &FMatrix) -> FMatrix {
        let n = self.n;
        let mut out = FMatrix::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a == 0.0 {
                    continue;
                }
                for c in 0..n {
                    out.data[r * n + c] += a * rhs.data[k * n + c];
                }
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> FMatrix {
        FMatrix { n: self.n, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn add(&self, rhs: &FMatrix) -> FMatrix {
        FMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }

    fn inf_norm(&self) -> f64 {
        (0..self.n)
            .map(|r| (0..self.n).map(|c| self.get(r, c).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Row-vector product `v · self`.
    pub fn vec_mat(&self, v: &[f64]) -> Vec<f64> {
        let n = self.n;
        (0..n).map(|c| (0..n).map(|r| v[r] * self.data[r * n + c]).sum()).collect()
    }
}

/// Matrix exponential by scaling and squaring with a degree-12 Taylor
/// polynomial on the scaled matrix.
pub fn expm(a: &FMatrix) -> FMatrix {
    let norm = a.inf_norm();
    let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = a.scale(1.0 / f64::powi(2.0, s as i32));
    // Horner evaluation of Σ_{k≤12} X^k / k!
    let mut acc = FMatrix::identity(a.n);
    for k in (1..=12u32).rev() {
        acc = scaled.mul(&acc).scale(1.0 / k as f64);
        for i in 0..a.n {
            acc.data[i * a.n + i] += 1.0;
        }
    }
    let mut result = acc;
    for _ in 0..s {
        result = result.mul(&result);
    }
    result
}

/// Exponential applied to a row vector by direct series summation,
/// independent of `expm`: `v · e^A = Σ_k (v·A^k)/k!`, terms added until
/// they fall below 1e-300 or 400 terms are reached.
pub fn exp_vec_series(v: &[f64], a: &FMatrix) -> Vec<f64> {
    let mut term = v.to_vec();
    let mut sum = v.to_vec();
    for k in 1..400 {
        term = a.vec_mat(&term);
        for x in term.iter_mut() {
            *x /= k as f64;
        }
        let mag: f64 = term.iter().map(|x| x.abs()).sum();
        for (s, t) in sum.iter_mut().zip(&term) {
            *s += t;
        }
        if mag < 1e-300 {
            break;
        }
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_integrates_polynomials_exactly() {
        // Simpson is exact through cubics.
        let v = simpson(|x| x * x * x - 2.0 * x + 1.0, 0.0, 2.0, 2);
        assert!((v - (4.0 - 4.0 + 2.0)).abs() < 1e-12);
    }

    #[test]
    fn simpson_sine_orthogonality() {
        let v = simpson(|x| (2.0 * x).sin() * (3.0 * x).sin(), 0.0, 2.0 * std::f64::consts::PI, 4096);
        assert!(v.abs() < 1e-12);
        let w = simpson(|x| (3.0 * x).sin().powi(2), 0.0, 2.0 * std::f64::consts::PI, 4096);
        assert!((w - std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn expm_diagonal() {
        let a = FMatrix::from_fn(2, |r, c| if r == c { (r + 1) as f64 } else { 0.0 });
        let e = expm(&a);
        assert!((e.get(0, 0) - 1f64.exp()).abs() < 1e-12);
        assert!((e.get(1, 1) - 2f64.exp()).abs() < 1e-12);
        assert!(e.get(0, 1).abs() < 1e-14);
    }

    #[test]
    fn expm_rotation_block() {
        // exp of [[0, t], [-t, 0]] is the rotation by t.
        let t = 0.7;
        let a = FMatrix::from_fn(2, |r, c| match (r, c) {
            (0, 1) => t,
            (1, 0) => -t,
            _ => 0.0,
        });
        let e = expm(&a);
        assert!((e.get(0, 0) - t.cos()).abs() < 1e-12);
        assert!((e.get(0, 1) - t.sin()).abs() < 1e-12);
    }

    #[test]
    fn series_route_matches_expm() {
        let a = FMatrix::from_fn(3, |r, c| ((r * 3 + c) as f64) / 7.0 - 0.4);
        let e = expm(&a);
        let v = [1.0, -0.5, 0.25];
        let via_expm = e.vec_mat(&v);
        let via_series = exp_vec_series(&v, &a);
        for (x, y) in via_expm.iter().zip(&via_series) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}
