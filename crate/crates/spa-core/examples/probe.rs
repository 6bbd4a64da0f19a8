//! Scratch probe of the pipeline magnitudes (not part of the test suite).

use std::time::Instant;

use spa_core::bands::{self, populations};
use spa_core::scan::Scenario;
use spa_core::xsection::{self, PositronBeam};

fn main() {
    let t0 = Instant::now();
    let scenario = Scenario::si110_default().unwrap();
    println!("scenario built in {:?}", t0.elapsed());
    println!(
        "V_max = {:.4} eV, V_0 = {:.4} eV",
        scenario.potential.well_depth(),
        scenario.potential.coeff(0)
    );
    let d = scenario.potential.period();
    println!("V(d/2) = {:.4} eV", scenario.potential.value(d / 2.0));

    for e_mev in [50.0, 60.0, 70.0, 80.0, 90.0, 100.0] {
        let beam = PositronBeam::new(e_mev, 0.0).unwrap();
        let bs = scenario.solve(&beam).unwrap();
        let n = bands::count_subbarrier_bands(&bs);
        let theta_c = scenario.critical_angle(beam.gamma).unwrap();
        println!(
            "E = {e_mev} MeV  gamma = {:.2}  theta_C = {:.4} mrad  subbarrier bands = {n}",
            beam.gamma,
            theta_c * 1e3
        );
        if (e_mev - 60.0).abs() < 1e-9 {
            for band in 0..n.min(16) {
                let e0 = bs.state(band, 0).energy;
                println!("  band {band}: E_perp(k=0) = {e0:.3} eV");
            }
        }
    }

    // The acceptance point: 60 MeV, theta = 0.5 theta_C, band 1.
    let beam60 = {
        let mut b = PositronBeam::new(60.0, 0.0).unwrap();
        let theta_c = scenario.critical_angle(b.gamma).unwrap();
        b.entry_angle = 0.5 * theta_c;
        b
    };
    let bs = scenario.solve(&beam60).unwrap();
    let pops = populations(&bs, beam60.entry_angle, beam60.gamma).unwrap();
    println!(
        "matched subband = {}, matched m = {}, total population = {:.4}, band1 pop = {:.3e}",
        pops.matched_subband,
        pops.matched_m,
        pops.total(),
        pops.band_total(1)
    );

    let t1 = Instant::now();
    let peak = xsection::find_theta_max(
        &beam60,
        &bs,
        &scenario.orbital,
        &pops,
        1,
        0.0,
        scenario.binding_ev,
    )
    .unwrap();
    println!(
        "band 1: Theta_max = {:.5} rad ({:.3} deg), dsigma_max = {:.4e} barn/sr, \
         boundary = {}, pop-limit = {} [{:?}]",
        peak.theta_max,
        peak.theta_max.to_degrees(),
        peak.dsigma_max,
        peak.boundary_warning,
        peak.population_limit,
        t1.elapsed()
    );

    for band in [0usize, 2, 5, 8, 10] {
        let t2 = Instant::now();
        let peak = xsection::find_theta_max(
            &beam60,
            &bs,
            &scenario.orbital,
            &pops,
            band,
            0.0,
            scenario.binding_ev,
        )
        .unwrap();
        println!(
            "band {band}: Theta_max = {:.3} deg, dsigma_max = {:.4e} barn/sr [{:?}]",
            peak.theta_max.to_degrees(),
            peak.dsigma_max,
            t2.elapsed()
        );
    }
}
