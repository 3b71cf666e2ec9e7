use std::sync::Arc;
use cqms_core::poincare::{build_orbit_grid, section_norm, Density, FourVector, Section};
use num_complex::Complex64;

fn main() {
    let sampler: Arc<dyn Fn(&FourVector) -> nalgebra::Vector2<Complex64> + Send + Sync> =
        Arc::new(|p: &FourVector| {
            let r = p.spatial_norm_sq().sqrt();
            let ct = p.0[3] / r;
            let amp = (-(r - 1.2) * (r - 1.2)).exp() * (1.0 + 0.5 * ct * ct);
            nalgebra::Vector2::new(Complex64::new(amp, 0.0), Complex64::new(0.3 * amp, -0.1 * amp))
        });
    for (nr, na) in [(4usize, 8usize), (8, 16), (16, 32), (32, 64)] {
        let g = Arc::new(build_orbit_grid(nr, na, 0.5, 2.0, Density::Paper).unwrap());
        let phi = Section::new(g, sampler.clone());
        println!("{}x{}: norm = {:.10}", nr, na, section_norm(&phi));
    }
    for (nr, na) in [(4usize, 8usize), (8, 16), (16, 32)] {
        let g = Arc::new(build_orbit_grid(nr, na, 0.5, 2.0, Density::Paper).unwrap());
        let phi = Section::constant_unit(g);
        println!("const {}x{}: norm = {:.10}", nr, na, section_norm(&phi));
    }
}
