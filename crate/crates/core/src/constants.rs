//! Physical constants used across the crate, in one place.

/// Hartree energy in electron volts (CODATA 2018).
pub const HARTREE_EV: f64 = 27.211386;

/// Proton mass in units of the electron mass (CODATA 2018).
pub const PROTON_MASS_AU: f64 = 1836.15267;

/// Bohr radius in centimeters (CODATA 2018).
pub const BOHR_RADIUS_CM: f64 = 0.529177211e-8;

/// Squared Bohr radius in units of 1e-16 cm^2, i.e. a0^2 = 0.280028561e-16 cm^2.
/// Cross sections in atomic units multiply by this to land in the
/// conventional 1e-16 cm^2 scale used by the experimental tables.
pub const BOHR_AREA_1E16_CM2: f64 = 0.280028561;

/// Convert a lab-frame proton kinetic energy in keV to the collision
/// velocity in atomic units: v = sqrt(2 E / M_p) with E in Hartree.
pub fn velocity_from_energy(energy_kev: f64) -> f64 {
    assert!(energy_kev > 0.0, "collision energy must be positive");
    let e_hartree = energy_kev * 1000.0 / HARTREE_EV;
    (2.0 * e_hartree / PROTON_MASS_AU).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn velocity_at_one_kev() {
        assert!((velocity_from_energy(1.0) - 0.20007).abs() < 1e-5);
    }

    #[test]
    fn velocity_at_25_kev() {
        assert!((velocity_from_energy(25.0) - 1.00035).abs() < 1e-5);
    }

    #[test]
    fn unit_velocity_energy() {
        // A proton moving at 1 a.u. of velocity carries about 24.98 keV.
        assert!((velocity_from_energy(24.98) - 1.0).abs() < 1e-3);
    }
}
