#pragma once

#include <cstdint>

#include "qgalloy/assembly.hpp"

namespace qgalloy {

// Seeded random fixtures shared by the counting and spectral-shift suites.
// Graph shapes cycle through chains, stars, loops and substitution chains;
// conditions mix the assemblable kinds; potentials are signed piecewise
// constants with ||W|| <= 4.

struct CountingFixture {
  MetricGraph graph;
  ConditionFamily family;
  PotentialField field;
  double h = 0.0;
  double probe_lambda = 0.0;

  std::set<EdgeId> all_edges() const {
    std::set<EdgeId> out;
    for (const auto& e : graph.edges()) out.insert(e.id);
    return out;
  }
};

CountingFixture random_counting_fixture(std::uint64_t seed, int index);

struct SsfFixture {
  MetricGraph graph;
  std::set<EdgeId> lambda_set;  // used by the decoupling suite
  ConditionFamily family;
  PotentialField w1;
  PotentialField w2;
  double h = 0.0;
  std::vector<double> grid;     // capped at lambda_max(h)/4
};

SsfFixture random_ssf_fixture(std::uint64_t seed, int index, bool for_decoupling);

}  // namespace qgalloy
