// alwb — algorithmic-logic workbench
// SPDX-License-Identifier: MIT
//
// Regenerates proofs/axiom_catalog.alproof from the shipped demonstration
// instances. Usage: make_axiom_catalog <output-path>

#include <fstream>
#include <iostream>

#include "alwb/proof.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_axiom_catalog <output-path>\n";
    return 2;
  }
  std::ofstream out(argv[1]);
  if (!out.good()) {
    std::cerr << "cannot open " << argv[1] << " for writing\n";
    return 1;
  }
  int n = 0;
  for (const auto& [id, f] : alwb::axiom_demo_instances()) {
    if (n) out << "\n";
    out << "step a" << ++n << ":\n";
    out << "formula: " << alwb::print(f) << "\n";
    out << "by: axiom " << id << "\n";
  }
  std::cout << "wrote " << n << " steps to " << argv[1] << "\n";
  return 0;
}
