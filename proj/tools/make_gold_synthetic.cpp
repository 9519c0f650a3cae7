// Regenerates the bundled synthetic gold eps'' table.
//   make_gold_synthetic [output.csv]   (stdout when omitted)

#include <fstream>
#include <iostream>

#include "casimir/optical_data.hpp"
#include "gold_fixture.hpp"

int main(int argc, char** argv) {
  const auto ds = casimir::fixture::gold_synthetic();
  if (argc > 1) {
    std::ofstream out(argv[1]);
    if (!out) {
      std::cerr << "cannot write " << argv[1] << '\n';
      return 2;
    }
    casimir::write_dataset(out, ds, casimir::FrequencyUnit::rad_per_s, "synthetic-gold");
    return 0;
  }
  casimir::write_dataset(std::cout, ds, casimir::FrequencyUnit::rad_per_s, "synthetic-gold");
  return 0;
}
