use crate::Vec3;

/// Fourth-order central first derivative of `f` along axis `k`.
fn d1<F: Fn(Vec3) -> Vec3>(f: &F, x: Vec3, k: usize, h: f64) -> Vec3 {
    let mut e = Vec3::zeros();
    e[k] = h;
    (f(x - 2.0 * e) - 8.0 * f(x - e) + 8.0 * f(x + e) - f(x + 2.0 * e)) / (12.0 * h)
}

/// Fourth-order finite-difference residual of the Navier operator
/// `μΔu + μ/(1−2ν) ∇div u` applied to a displacement field.
pub fn navier_residual<F: Fn(Vec3) -> Vec3>(u: &F, x: Vec3, mu: f64, nu: f64, h: f64) -> Vec3 {
    let mut hess = [[Vec3::zeros(); 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            let g = |p: Vec3| d1(u, p, b, h);
            hess[a][b] = d1(&g, x, a, h);
        }
    }
    let lap = hess[0][0] + hess[1][1] + hess[2][2];
    // (∇ div u)_i = Σ_j ∂_i ∂_j u_j
    let grad_div = Vec3::from_fn(|i, _| (0..3).map(|j| hess[i][j][j]).sum());
    mu * lap + mu / (1.0 - 2.0 * nu) * grad_div
}
