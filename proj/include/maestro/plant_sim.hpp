#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "maestro/control_services.hpp"
#include "maestro/orchestrator.hpp"
#include "maestro/plant.hpp"

namespace maestro {

// Gaussian noise via Box-Muller on mt19937_64 so that traces are reproducible
// for a fixed seed (std::normal_distribution is implementation-defined).
class GaussianNoise {
 public:
  explicit GaussianNoise(std::uint64_t seed) : engine_(seed) {}
  double sample(double stddev);

 private:
  std::mt19937_64 engine_;
};

struct ReferencePoint {
  double time = 0.0;
  double value = 0.0;
};

struct TimedEvent {
  double time = 0.0;
  OrchestrationEvent event;
};

struct SimScenario {
  double duration = 0.0;  // seconds
  double ts = 0.1;
  std::uint64_t seed = 0;
  std::optional<CostWeights> weights;      // prologue weights, if any
  std::vector<ReferencePoint> reference;   // piecewise-constant h3 targets
  std::vector<TimedEvent> events;          // strictly increasing times
  PlantParams plant;
  std::optional<PlantState> initial_state; // default: equilibrium at ref(0)

  double reference_at(double t) const;
  void validate() const;
};

struct TraceRecord {
  double t = 0.0;
  PlantState truth;
  double y = 0.0;
  std::array<std::optional<double>, 3> x_hat;  // by label h1,h2,h3
  double u = 0.0;
  std::uint64_t epoch = 0;
  std::uint64_t step_us = 0;  // measured wall clock, nondeterministic
};

struct EpochRecord {
  double t = 0.0;
  std::uint64_t epoch = 0;
  std::vector<std::string> path;
  double total_cost = 0.0;
  bool stale = false;
  std::string note;
};

struct SimResult {
  std::vector<TraceRecord> trace;
  std::vector<EpochRecord> history;
};

// Closed loop sensor -> filter -> controller -> actuator -> plant, with
// scenario events dispatched to the orchestrator between steps. Architecture
// swaps keep the plant state; the estimator is re-seeded from the previous
// estimate projected onto the new model's labels (missing labels start at the
// operating point) with the covariance reset to its prior.
SimResult run_scenario(const SimScenario& scenario, const Catalog& catalog,
                       const CostWeights& weights);

// CSV schema: t,h1,h2,h3,y,xhat1,xhat2,xhat3,u,epoch,step_us. Absent estimate
// components are left empty. step_us is written as 0 unless with_timings is
// set, keeping the default output byte-stable across reruns.
std::string trace_to_csv(const std::vector<TraceRecord>& trace,
                         bool with_timings = false);

std::string history_to_text(const std::vector<EpochRecord>& history);

}  // namespace maestro
