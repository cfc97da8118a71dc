use finitegap::curve::*;
use finitegap::dubrovin::*;
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 { Complex64::new(re, im) }

fn main() {
    for (label, pts) in [
        ("genus1", vec![c(-2.0,0.0), c(-1.0,0.0), c(1.0,0.0), c(2.0,0.0)]),
        ("genus2", vec![c(-3.0,0.0), c(-2.0,0.0), c(-0.5,0.0), c(0.5,0.0), c(2.0,0.0), c(3.0,0.0)]),
    ] {
        let spec = CurveSpec::new(pts).unwrap();
        let pd = period_matrices(&spec, &Tolerances::default()).unwrap();
        let n = pd.genus();
        let mu: Vec<SurfacePoint> = (0..=n).map(|k| {
            SurfacePoint::new(c(0.25 + 0.08*k as f64, 0.45 + 0.1*k as f64), if k%2==0 {1} else {-1})
        }).collect();
        let nu: Vec<SurfacePoint> = (0..=n).map(|k| {
            SurfacePoint::new(c(-0.2 - 0.07*k as f64, 0.55 - 0.15*k as f64), if k%2==0 {-1} else {1})
        }).collect();
        let s0 = EllipticState::new(mu, nu);
        let samples: Vec<f64> = (0..=20).map(|i| i as f64 * 0.05).collect();

        // x-flow
        let traj = integrate_flow(&s0, &pd, FlowKind::X, None, &samples, &FlowOptions::default()).unwrap();
        let mut rho1s: Vec<Vec<Complex64>> = Vec::new();
        let mut rho2s: Vec<Vec<Complex64>> = Vec::new();
        for sm in &traj.samples {
            let (r1, r2) = abel_jacobi_coords(&sm.state, &pd).unwrap();
            rho1s.push(r1); rho2s.push(r2);
        }
        unwrap_lattice_jumps(&mut rho1s, &pd);
        unwrap_lattice_jumps(&mut rho2s, &pd);
        let cn = pd.c_column(n as i64);
        for j in 0..n {
            let (slope, resid) = fit_line(&samples, &rho1s.iter().map(|r| r[j]).collect::<Vec<_>>());
            let expect = cn[j] * 2.0;
            println!("{label} x-flow rho1[{j}]: slope {slope:.10} expect {expect:.10} |diff| {:.2e} resid {resid:.2e}", (slope-expect).norm());
            let (slope2, resid2) = fit_line(&samples, &rho2s.iter().map(|r| r[j]).collect::<Vec<_>>());
            println!("{label} x-flow rho2[{j}]: slope {slope2:.10} expect {:.10} |diff| {:.2e} resid {resid2:.2e}", -expect, (slope2+expect).norm());
        }

        // t-flows m = 1, 2
        for m in 1..=2usize {
            let fs = FlowSpec::for_curve(m, &pd).unwrap();
            let traj = integrate_flow(&s0, &pd, FlowKind::T, Some(&fs), &samples, &FlowOptions::default()).unwrap();
            let mut rho1s: Vec<Vec<Complex64>> = Vec::new();
            for sm in &traj.samples {
                let (r1, _) = abel_jacobi_coords(&sm.state, &pd).unwrap();
                rho1s.push(r1);
            }
            unwrap_lattice_jumps(&mut rho1s, &pd);
            for j in 0..n {
                let (slope, resid) = fit_line(&samples, &rho1s.iter().map(|r| r[j]).collect::<Vec<_>>());
                // expected 2 Σ_{l=0}^m β_{l−1} C_{j, n−m+l}
                let mut expect = Complex64::new(0.0, 0.0);
                for l in 0..=m {
                    let col = pd.c_column(n as i64 - m as i64 + l as i64);
                    expect += fs.betas[l] * col[j] * 2.0;
                }
                println!("{label} t{m}-flow rho1[{j}]: slope {slope:.10} expect {expect:.10} |diff| {:.2e} resid {resid:.2e}", (slope-expect).norm());
            }
        }
    }
}

fn fit_line(x: &[f64], y: &[Complex64]) -> (Complex64, f64) {
    let nf = x.len() as f64;
    let sx: f64 = x.iter().sum();
    let sxx: f64 = x.iter().map(|a| a*a).sum();
    let sy: Complex64 = y.iter().sum();
    let sxy: Complex64 = x.iter().zip(y).map(|(a, b)| b * *a).sum();
    let det = nf*sxx - sx*sx;
    let slope = (sxy * nf - sy * sx) / det;
    let icept = (sy * sxx - sxy * sx) / det;
    let resid = x.iter().zip(y).map(|(a, b)| (b - (icept + slope * *a)).norm_sqr()).sum::<f64>().sqrt();
    (slope, resid)
}
