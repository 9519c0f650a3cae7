#pragma once

// CODATA 2018 values, SI units.
namespace casimir::constants {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double hbar = 1.054571817e-34;         // J s
inline constexpr double c = 299792458.0;                // m/s
inline constexpr double k_B = 1.380649e-23;             // J/K
inline constexpr double e_charge = 1.602176634e-19;     // C
inline constexpr double epsilon0 = 8.8541878128e-12;    // F/m
inline constexpr double atomic_mass = 1.66053906660e-27; // kg
inline constexpr double zeta3 = 1.2020569031595942854;  // Apery's constant

inline constexpr double piconewton = 1e-12;
inline constexpr double nanometre = 1e-9;
inline constexpr double micrometre = 1e-6;

/// Angular frequency [rad/s] of a photon with energy `ev` electron-volts.
constexpr double ev_to_rad_per_s(double ev) { return ev * e_charge / hbar; }
constexpr double rad_per_s_to_ev(double omega) { return omega * hbar / e_charge; }

}  // namespace casimir::constants
