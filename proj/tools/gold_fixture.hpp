#pragma once

#include <array>

#include "casimir/constants.hpp"
#include "casimir/optical_data.hpp"

// Recipe for data/gold_synthetic.csv: Drude intraband part plus two broad
// interband oscillators, roughly the shape of gold's eps'' above 2.5 eV.
namespace casimir::fixture {

inline constexpr DrudeParameters kGoldDrude{1.37e16, 4.06e13};

inline constexpr std::array<LorentzOscillator, 2> kGoldOscillators{{
    {1.5, 4.5e15, 1.5e15},
    {2.0, 1.2e16, 6e15},
}};

inline SyntheticGrid gold_grid() { return {constants::ev_to_rad_per_s(0.1), 1e17, 20}; }

inline OpticalDataset gold_synthetic() {
  return generate_synthetic_dataset(kGoldDrude, kGoldOscillators, gold_grid(), "synthetic-gold");
}

}  // namespace casimir::fixture
