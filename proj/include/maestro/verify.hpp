#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>

#include "maestro/shortest_path.hpp"

namespace maestro {

// Exhaustive start->target path enumeration with the same exact-cost,
// lexicographic tie-breaking contract as dijkstra(). Shares no code with the
// Dijkstra implementation; used as its independent cross-check. Returns
// nullopt when no complete path exists.
std::optional<PathResult> enumerate_shortest_path(const ServiceGraph& g);

// Random layered catalog: 1..5 sensors/filters/controllers/actuators, 1..3
// models with distinct complexity levels, integer attributes in [1, 20],
// filters/controllers requiring a model with probability 1/2.
Catalog make_random_catalog(std::mt19937_64& rng);

struct VerifyOptions {
  std::uint32_t count = 1000;
  std::uint64_t seed = 1;
};

struct VerifyReport {
  std::uint32_t checked = 0;
  std::uint32_t mismatches = 0;
  std::string first_mismatch;  // serialized catalog + details, when nonzero
  std::string summary() const;
};

// Test-only hook: perturbs the Dijkstra result before comparison so the
// harness can prove the cross-check actually detects faults.
using PathFault = std::function<void(std::optional<PathResult>&)>;

// Cross-checks dijkstra against enumerate_shortest_path (total cost compared
// exactly, node sequences compared for equality) over seeded random catalogs.
VerifyReport run_path_verification(const VerifyOptions& options,
                                   const PathFault& fault = nullptr);

}  // namespace maestro
