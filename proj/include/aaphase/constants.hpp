#pragma once

#include <cmath>
#include <numbers>

// Unit system used throughout: hbar = 1, lengths in micrometers (um), times in
// microseconds (us).  Energies and angular frequencies are then both measured
// in rad/us.  Everything below is derived at compile time from SI primaries so
// no pre-multiplied magic numbers appear in the code.

namespace aa::units {

inline constexpr double pi = std::numbers::pi;

// --- SI primaries ---------------------------------------------------------
inline constexpr double planck_h_si = 6.62607015e-34;        // J s (exact)
inline constexpr double hbar_si = planck_h_si / (2.0 * pi);  // J s
inline constexpr double boltzmann_si = 1.380649e-23;         // J/K (exact)
inline constexpr double atomic_mass_si = 1.66053906660e-27;  // kg
inline constexpr double rb87_mass_u = 86.909180531;          // u
inline constexpr double rb87_mass_si = rb87_mass_u * atomic_mass_si;  // kg

// --- conversions into the internal system ---------------------------------
// Energy E [J] -> E/hbar [rad/s] -> rad/us.
inline constexpr double joule_to_radus = 1.0e-6 / hbar_si;

// Temperature-as-energy: k_B * (T in mK) expressed in rad/us.
inline constexpr double mK_to_radus = boltzmann_si * 1.0e-3 * joule_to_radus;

// Mass enters the dynamics only through p^2/2m with p in (hbar/um) units:
// m_internal = m_SI * um^2 / (hbar * us) so that r' = p/m_internal is um/us.
inline constexpr double kg_to_internal = 1.0e-12 / (hbar_si * 1.0e-6);
inline constexpr double rb87_mass_internal = rb87_mass_si * kg_to_internal;

// Dipole-dipole coefficient quoted as C3/h in GHz um^3; internally we need
// C3/hbar in rad/us um^3, i.e. multiply by 2*pi*1e3.
inline constexpr double GHzum3_to_internal = 2.0 * pi * 1.0e3;

// --- convenience -----------------------------------------------------------
// Harmonic frequency (rad/us) at the bottom of a Gaussian trap of the given
// depth (mK) and waist (um): omega = sqrt(2 * depth / (m * sigma^2)).
inline double trap_frequency(double depth_mK, double sigma_um) {
  return std::sqrt(2.0 * depth_mK * mK_to_radus /
                   (rb87_mass_internal * sigma_um * sigma_um));
}

inline constexpr double deg_per_rad = 180.0 / pi;
inline constexpr double rad_per_deg = pi / 180.0;

}  // namespace aa::units
