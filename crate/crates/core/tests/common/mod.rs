//! Test-only numerical oracles, independent of the library's code paths.
#![allow(dead_code)]

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson(fa: f64, fm: f64, fb: f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(fa, flm, fm, a, m);
        let right = simpson(fm, frm, fb, m, b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
            + recurse(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    recurse(f, a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, 50)
}

/// `P(-1 <= X <= 1)` for `X ~ N(mean, std²)` by quadrature of the density.
pub fn band_probability_quadrature(mean: f64, std: f64) -> f64 {
    let pdf = move |x: f64| {
        let z = (x - mean) / std;
        (-0.5 * z * z).exp() / (std * (2.0 * std::f64::consts::PI).sqrt())
    };
    integrate(&pdf, -1.0, 1.0, 1e-13)
}

/// Upper tail of the F distribution by quadrature of the unnormalized
/// density, normalized numerically.
pub fn f_tail_quadrature(f: f64, d1: f64, d2: f64) -> f64 {
    let kernel = move |x: f64| {
        if x <= 0.0 {
            return 0.0;
        }
        ((d1 / 2.0 - 1.0) * x.ln() - (d1 + d2) / 2.0 * (1.0 + d1 * x / d2).ln()).exp()
    };
    let hi = 400.0;
    let total = integrate(&kernel, 0.0, f, 1e-14) + integrate(&kernel, f, hi, 1e-14);
    integrate(&kernel, f, hi, 1e-14) / total
}

/// Direct two-pass mean and sample std.
pub fn batch_mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
pub fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| a[i][k] * x[k]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    x
}

/// Prints one acceptance line and fails the test when `ok` is false.
/// Writes to the raw stderr handle so the line shows up without `--nocapture`.
pub fn verdict(id: &str, name: &str, ok: bool, detail: &str) {
    use std::io::Write;
    let line = format!("criterion {id} [{}] {name}: {detail}\n", if ok { "PASS" } else { "FAIL" });
    let _ = std::io::stderr().lock().write_all(line.as_bytes());
    assert!(ok, "criterion {id} failed: {detail}");
}
