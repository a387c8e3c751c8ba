// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one PASS/FAIL line each. Exit code = number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "maestro/catalog_io.hpp"
#include "maestro/control_services.hpp"
#include "maestro/orchestrator.hpp"
#include "maestro/plant_sim.hpp"
#include "maestro/verify.hpp"

using namespace maestro;

namespace {

const std::string kDataDir = MAESTRO_DATA_DIR;

struct Harness {
  int failures = 0;
  int index = 0;

  void run(const std::string& label, double time_budget_s,
           const std::function<void()>& body) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    std::string error;
    try {
      body();
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (error.empty() && time_budget_s > 0.0 && elapsed > time_budget_s)
      error = "runtime " + std::to_string(elapsed) + "s exceeds " +
              std::to_string(time_budget_s) + "s";
    if (error.empty()) {
      std::printf("PASS criterion %d: %s (%.2fs)\n", index, label.c_str(), elapsed);
    } else {
      std::printf("FAIL criterion %d: %s: %s\n", index, label.c_str(), error.c_str());
      ++failures;
    }
  }
};

void require(bool condition, const std::string& message) {
  if (!condition) throw std::runtime_error(message);
}

template <typename T>
void require_eq(const T& actual, const T& expected, const std::string& what) {
  if (!(actual == expected)) throw std::runtime_error(what + " mismatch");
}

bool is_acyclic(const ServiceGraph& g) {  // Kahn's algorithm
  const int n = static_cast<int>(g.nodes().size());
  std::vector<int> indegree(n, 0);
  for (const auto& e : g.edges()) ++indegree[e.to];
  std::vector<int> queue;
  for (int i = 0; i < n; ++i)
    if (indegree[i] == 0) queue.push_back(i);
  int seen = 0;
  while (!queue.empty()) {
    int u = queue.back();
    queue.pop_back();
    ++seen;
    for (int ei : g.out_edges(u))
      if (--indegree[g.edges()[ei].to] == 0) queue.push_back(g.edges()[ei].to);
  }
  return seen == n;
}

}  // namespace

int main() {
  Harness harness;
  const Catalog full = parse_catalog(read_file(kDataDir + "/table1.cat"));
  const Catalog no_mpc = parse_catalog(read_file(kDataDir + "/table1_no_mpc.cat"));

  harness.run(
      "scenario 1: Kalman+medium (cost 625) with PID at alpha=1, beta=100", 1.0,
      [&] {
        Architecture arch = orchestrate(no_mpc, {1.0, 100.0});
        require_eq(arch.path.nodes,
                   std::vector<std::string>{"start", "tank-sensor",
                                            "kalman+model-medium", "pid",
                                            "tank-pump", "target"},
                   "selected path");
        ServiceGraph g = create_service_graph(no_mpc, {1.0, 100.0});
        require(g.find_node("kalman+model-medium")->node_cost == 625.0,
                "Kalman+medium node cost must be exactly 625");
      });

  harness.run(
      "scenario 2: runtime MPC addition selects MPC+medium (525), "
      "MPC+high (200) excluded, total 2854",
      1.0, [&] {
        Orchestrator orch(no_mpc, {1.0, 100.0});
        orch.initialize();
        EventOutcome outcome =
            orch.handle_event(ServiceAdded{*full.find("mpc")});
        require(outcome.architecture.has_value(),
                "adding the MPC must produce a new architecture");
        const Architecture& arch = *outcome.architecture;
        require(std::count(arch.path.nodes.begin(), arch.path.nodes.end(),
                           "mpc+model-medium") == 1,
                "MPC+medium must be selected");
        require(arch.path.total_cost == 2854.0, "total path cost must be 2854");

        ServiceGraph g = create_service_graph(orch.catalog(), orch.weights());
        require(g.find_node("mpc+model-medium")->node_cost == 525.0,
                "MPC+medium node cost must be exactly 525");
        require(g.find_node("mpc+model-high")->node_cost == 200.0,
                "MPC+high node cost must be exactly 200");
        require(!g.has_edge("kalman+model-medium", "mpc+model-high"),
                "edge Kalman+medium -> MPC+high must not exist");
      });

  harness.run(
      "scenario 3: alpha=1000, beta=20 selects converter (cost 1220) and PID",
      1.0, [&] {
        Architecture arch = orchestrate(full, {1000.0, 20.0});
        const auto& nodes = arch.path.nodes;
        require(std::count(nodes.begin(), nodes.end(), "converter") == 1,
                "converter must be on the path");
        require(std::count(nodes.begin(), nodes.end(), "pid") == 1,
                "PID must be on the path");
        ServiceGraph g = create_service_graph(full, {1000.0, 20.0});
        require(g.find_node("converter")->node_cost == 1220.0,
                "converter node cost must be exactly 1220");
      });

  harness.run("graph shape: 12 nodes, 20 edges, acyclic and layered", 1.0, [&] {
    ServiceGraph g = create_service_graph(full, {1.0, 100.0});
    require(g.nodes().size() == 12, "node count must be 12");
    require(g.edges().size() == 20, "edge count must be 20");
    require(is_acyclic(g), "graph must be acyclic");
    for (const auto& e : g.edges())
      require(layer_of(g.node(e.to).kind) == layer_of(g.node(e.from).kind) + 1,
              "every edge must cross to the next layer");
  });

  harness.run(
      "oracle equivalence: Dijkstra == exhaustive enumeration on 1000 random "
      "catalogs (exact)",
      30.0, [&] {
        VerifyReport report = run_path_verification({1000, 20240101});
        require(report.checked == 1000, "must check 1000 catalogs");
        require(report.mismatches == 0, report.first_mismatch);
      });

  harness.run(
      "orchestrator properties: idempotence, determinism, dominated insertion "
      "(200+ seeded cases each)",
      0.0, [&] {
        std::mt19937_64 rng(606);
        int idempotence_cases = 0;
        for (int i = 0; i < 500 && idempotence_cases < 200; ++i) {
          Catalog catalog = make_random_catalog(rng);
          Orchestrator orch(catalog, {3.0, 2.0});
          try {
            orch.initialize();
          } catch (const Error&) {
            continue;
          }
          ++idempotence_cases;
          const auto before = orch.current()->path.nodes;

          // dominated insertion: strictly worse than anything in the catalog
          EventOutcome dominated = orch.handle_event(ServiceAdded{[&] {
            ServiceDescriptor s;
            s.id = "zzz-dominated";
            s.kind = ServiceKind::sensor;
            s.attrs = {1000.0, 1000.0};
            s.ports = default_ports(s.kind, false);
            return s;
          }()});
          require(!dominated.architecture.has_value(),
                  "dominated insertion must not replace the architecture");
          require(orch.epoch() == 1, "dominated insertion must not bump the epoch");
          require(orch.current()->path.nodes == before,
                  "dominated insertion must leave the path unchanged");

          // idempotent update: rewriting a service with identical values
          EventOutcome same =
              orch.handle_event(ServiceUpdated{orch.catalog().services().front()});
          require(!same.architecture.has_value(),
                  "identity update must not produce a new architecture");
          require(orch.epoch() == 1, "identity update must not bump the epoch");
        }
        require(idempotence_cases >= 200, "not enough solvable random catalogs");

        // determinism: replaying an event sequence gives the same architecture
        for (int i = 0; i < 200; ++i) {
          const std::uint64_t seed = 7000 + i;
          auto replay = [&]() {
            std::mt19937_64 gen(seed);
            Catalog catalog = make_random_catalog(gen);
            Orchestrator orch(catalog, {3.0, 2.0});
            try {
              orch.initialize();
            } catch (const Error&) {
              return std::pair<std::vector<std::string>, std::uint64_t>{{}, 0};
            }
            ServiceDescriptor extra;
            extra.id = "extra-sensor";
            extra.kind = ServiceKind::sensor;
            extra.attrs = {static_cast<double>(1 + gen() % 20),
                           static_cast<double>(1 + gen() % 20)};
            extra.ports = default_ports(extra.kind, false);
            orch.handle_event(ServiceAdded{extra});
            orch.handle_event(WeightsChanged{
                {static_cast<double>(1 + gen() % 50), static_cast<double>(1 + gen() % 50)}});
            orch.handle_event(ServiceRemoved{"extra-sensor"});
            return std::make_pair(orch.current()->path.nodes, orch.epoch());
          };
          auto a = replay();
          auto b = replay();
          require(a == b, "event replay must reproduce the final architecture");
        }
      });

  harness.run(
      "numerics: KF covariance PSD over 3000 steps (1e-9), MPC KKT vs finite "
      "differences on 100 random states (1e-5), scalar closed form (1e-8)",
      0.0, [&] {
        PlantParams plant;
        const ThreeTankModels models = build_models(plant, 0.1);

        // Kalman covariance over a long randomized run
        {
          const LTIModel& model = models.medium;
          EstimatorState est;
          est.x_hat = model.x_op;
          est.P = 1e-3 * Eigen::MatrixXd::Identity(model.dim(), model.dim());
          std::mt19937_64 gen(42);
          auto uniform = [&] { return (gen() >> 11) * 0x1p-53; };
          for (int k = 0; k < 3000; ++k) {
            est = kf_step(est, model, plant.u_max * uniform(),
                          0.25 + 0.1 * uniform(), {1e-5, 1e-4});
            require((est.P - est.P.transpose()).cwiseAbs().maxCoeff() <= 1e-9,
                    "covariance symmetry violated");
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(est.P);
            require(eig.eigenvalues().minCoeff() >= -1e-9,
                    "covariance lost positive semidefiniteness");
          }
        }

        // MPC KKT residual against finite differences of the forward-simulated
        // objective
        {
          const LTIModel& model = models.medium;
          MpcConfig cfg;
          cfg.horizon = 10;
          cfg.q = 1.0;
          cfg.r_u = 50.0;
          cfg.u_max = plant.u_max;
          cfg.h_max = plant.h_max;
          std::mt19937_64 gen(1234);
          auto uniform = [&] { return (gen() >> 11) * 0x1p-53; };
          for (int trial = 0; trial < 100; ++trial) {
            Eigen::VectorXd x(2);
            x << 0.05 + 0.5 * uniform(), 0.05 + 0.5 * uniform();
            const double ref = 0.1 + 0.4 * uniform();
            MpcResult result = mpc_step(model, x, ref, cfg);
            require(result.kkt_residual <= cfg.tol,
                    "solver KKT residual above tolerance");
            Eigen::VectorXd fd(cfg.horizon);
            const double h = 1e-6;
            for (int i = 0; i < cfg.horizon; ++i) {
              Eigen::VectorXd up = result.sequence, down = result.sequence;
              up(i) += h;
              down(i) -= h;
              fd(i) = (mpc_objective(model, x, ref, cfg, up) -
                       mpc_objective(model, x, ref, cfg, down)) /
                      (2.0 * h);
            }
            require(mpc_kkt_residual(cfg, result.sequence, fd) <= 1e-5,
                    "finite-difference KKT residual above 1e-5");
          }
        }

        // scalar closed form
        {
          LTIModel scalar;
          scalar.state_labels = {"h3"};
          scalar.A = Eigen::MatrixXd::Constant(1, 1, 0.9);
          scalar.B = Eigen::VectorXd::Constant(1, 0.5);
          scalar.x_op = Eigen::VectorXd::Zero(1);
          scalar.ts = 1.0;
          MpcConfig cfg;
          cfg.horizon = 1;
          cfg.q = 2.0;
          cfg.r_u = 0.3;
          cfg.u_max = 1e6;
          cfg.h_max = 1e9;
          const double x0 = 0.2, ref = 0.5;
          MpcResult result = mpc_step(scalar, Eigen::VectorXd::Constant(1, x0), ref, cfg);
          const double expected =
              cfg.q * 0.5 * (ref - 0.9 * x0) / (cfg.q * 0.25 + cfg.r_u);
          require(std::fabs(result.u - expected) <= 1e-8,
                  "scalar MPC deviates from the closed form");
        }
      });

  harness.run(
      "closed loop: scenario-2 run tracks the reference within 5% over the "
      "final 20%, h3 <= h_max, byte-identical rerun",
      0.0, [&] {
        SimScenario scenario = parse_scenario(read_file(kDataDir + "/scenario2.scn"));
        require(scenario.weights.has_value(), "scenario-2 must carry weights");
        SimResult run = run_scenario(scenario, no_mpc, *scenario.weights);
        require(run.history.size() == 2, "scenario-2 must produce two epochs");
        require(run.trace.size() == 3000, "expected 3000 steps");

        for (const auto& rec : run.trace) {
          require(rec.truth.h3 <= scenario.plant.h_max + 1e-12,
                  "h3 exceeded the tank height");
          if (rec.t >= 0.8 * scenario.duration) {
            const double ref = scenario.reference_at(rec.t);
            require(std::fabs(rec.truth.h3 - ref) <= 0.05 * ref,
                    "tracking error above 5% at t=" + std::to_string(rec.t));
          }
        }

        SimResult rerun = run_scenario(scenario, no_mpc, *scenario.weights);
        require(trace_to_csv(run.trace) == trace_to_csv(rerun.trace),
                "trace must be byte-identical across reruns");
        require(history_to_text(run.history) == history_to_text(rerun.history),
                "history must be byte-identical across reruns");
      });

  if (harness.failures == 0)
    std::printf("all %d acceptance criteria passed\n", harness.index);
  else
    std::printf("%d of %d acceptance criteria failed\n", harness.failures,
                harness.index);
  return harness.failures;
}
