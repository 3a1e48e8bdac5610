//! Truncated Taylor series in one variable: enough arithmetic to get exact
//! high-order derivatives of bump-type weights.

#[derive(Clone, Debug, PartialEq)]
pub struct Jet(pub Vec<f64>);

impl Jet {
    /// x0 + s, truncated at order `k`.
    pub fn variable(x0: f64, k: usize) -> Self {
        let mut c = vec![0.0; k + 1];
        c[0] = x0;
        if k >= 1 {
            c[1] = 1.0;
        }
        Jet(c)
    }

    pub fn order(&self) -> usize {
        self.0.len() - 1
    }

    pub fn affine(&self, a: f64, b: f64) -> Self {
        let mut c: Vec<f64> = self.0.iter().map(|v| a * v).collect();
        c[0] += b;
        Jet(c)
    }

    pub fn mul(&self, o: &Jet) -> Self {
        let k = self.order();
        let mut c = vec![0.0; k + 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().take(k + 1 - i).enumerate() {
                c[i + j] += a * b;
            }
        }
        Jet(c)
    }

    pub fn recip(&self) -> Self {
        let a = &self.0;
        let mut b = vec![0.0; a.len()];
        b[0] = 1.0 / a[0];
        for n in 1..a.len() {
            let s: f64 = (1..=n).map(|k| a[k] * b[n - k]).sum();
            b[n] = -s * b[0];
        }
        Jet(b)
    }

    pub fn exp(&self) -> Self {
        let a = &self.0;
        let mut b = vec![0.0; a.len()];
        b[0] = a[0].exp();
        for n in 1..a.len() {
            let s: f64 = (1..=n).map(|k| k as f64 * a[k] * b[n - k]).sum();
            b[n] = s / n as f64;
        }
        Jet(b)
    }

    pub fn sqrt(&self) -> Self {
        let a = &self.0;
        let mut b = vec![0.0; a.len()];
        b[0] = a[0].sqrt();
        for n in 1..a.len() {
            let s: f64 = (1..n).map(|k| b[k] * b[n - k]).sum();
            b[n] = (a[n] - s) / (2.0 * b[0]);
        }
        Jet(b)
    }

    /// x^alpha for a jet x = x0 + s (x0 > 0, the variable itself).
    pub fn power_of_variable(x0: f64, alpha: f64, k: usize) -> Self {
        let mut c = vec![0.0; k + 1];
        c[0] = x0.powf(alpha);
        for j in 1..=k {
            c[j] = c[j - 1] * (alpha - (j - 1) as f64) / (j as f64 * x0);
        }
        Jet(c)
    }

    /// j-th derivative: j! times the j-th coefficient.
    pub fn derivative(&self, j: usize) -> f64 {
        self.0[j] * (1..=j).fold(1.0, |acc, i| acc * i as f64)
    }
}

/// Taylor jet of the canonical bump on (a, b) at y.
pub fn bump_jet(y: f64, a: f64, b: f64, k: usize) -> Jet {
    let t0 = (2.0 * y - a - b) / (b - a);
    if t0.abs() >= 1.0 {
        return Jet(vec![0.0; k + 1]);
    }
    let t = Jet::variable(y, k).affine(2.0 / (b - a), -(a + b) / (b - a));
    let mut d = t.mul(&t);
    d.0[0] -= 1.0;
    let mut e = d.recip();
    e.0[0] += 1.0;
    e.exp()
}
