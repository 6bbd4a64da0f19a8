//! Scratch probe of the k = 0 energy scan and its exponential fit.

use std::time::Instant;

use spa_core::atomref::fit_exponential;
use spa_core::constants::ELECTRON_MASS_EV;
use spa_core::scan::{linspace, sigma_max_scan, Scenario};

fn main() {
    let t0 = Instant::now();
    let scenario = Scenario::si110_default().unwrap();
    let energies = linspace(50.0, 100.0, 6);

    let rows = sigma_max_scan(&scenario, &energies, &[0.0], &[1], 0.0).unwrap();
    for r in &rows {
        println!(
            "E = {:>5.1} MeV  theta_max = {:.5} rad  dsigma_max = {:.6e} barn/sr  \
             pop_limit = {}  n_bands = {}",
            r.e_par_mev,
            r.theta_max_rad,
            r.dsigma_max_barn_sr,
            r.population_limit,
            r.n_subbarrier_bands
        );
    }

    let points: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| (r.e_par_mev * 1e6 / ELECTRON_MASS_EV, r.dsigma_max_barn_sr))
        .collect();
    match fit_exponential(&points) {
        Ok(fit) => println!(
            "fit: sigma0 = {:.4e} barn/sr, eta = {:.5}, max_rel_error = {:.4}",
            fit.sigma0, fit.eta, fit.max_relative_error
        ),
        Err(e) => println!("fit failed: {e}"),
    }

    // Theta_max spread across entry angles and bands at 60 MeV.
    let ks = [0.0, 0.25, 0.5, 0.75];
    let bands = [1usize, 2, 3];
    let rows = sigma_max_scan(&scenario, &[60.0], &ks, &bands, 0.0).unwrap();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for r in &rows {
        println!(
            "k = {:.2} band = {}  theta_max = {:.6} rad  dsigma = {:.3e}  pop_limit = {}",
            r.k_fraction, r.band, r.theta_max_rad, r.dsigma_max_barn_sr, r.population_limit
        );
        lo = lo.min(r.theta_max_rad);
        hi = hi.max(r.theta_max_rad);
    }
    println!("theta_max spread = {:.3e} rad", hi - lo);
    println!("total {:?}", t0.elapsed());
}
