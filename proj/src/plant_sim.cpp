#include "maestro/plant_sim.hpp"

#include <chrono>
#include <cmath>

#include "maestro/format.hpp"

namespace maestro {

double GaussianNoise::sample(double stddev) {
  if (stddev == 0.0) return 0.0;
  // Box-Muller; one pair of draws per sample keeps the stream reproducible.
  const double scale = 1.0 / 9007199254740992.0;  // 2^-53
  double u1 = ((engine_() >> 11) + 1.0) * scale;  // (0, 1]
  double u2 = (engine_() >> 11) * scale;          // [0, 1)
  return stddev * std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
}

double SimScenario::reference_at(double t) const {
  double value = reference.empty() ? 0.0 : reference.front().value;
  for (const auto& p : reference) {
    if (p.time <= t) value = p.value;
    else break;
  }
  return value;
}

void SimScenario::validate() const {
  if (!(duration >= 0.0)) throw ContractError("scenario: duration must be >= 0");
  if (!(ts > 0.0)) throw ContractError("scenario: ts must be > 0");
  plant.validate();
  if (reference.empty())
    throw ContractError("scenario: at least one reference point is required");
  if (reference.front().time != 0.0)
    throw ContractError("scenario: the first reference point must be at t=0");
  for (std::size_t i = 0; i + 1 < reference.size(); ++i)
    if (!(reference[i].time < reference[i + 1].time))
      throw ContractError("scenario: reference times must be strictly increasing");
  for (const auto& p : reference)
    if (!(p.value >= 0.0) || !(p.value < plant.h_max))
      throw ContractError("scenario: reference levels must lie in [0, h_max)");
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (events[i].time < 0.0 || events[i].time > duration)
      throw ContractError("scenario: event time outside [0, duration]");
    if (i > 0 && !(events[i - 1].time < events[i].time))
      throw ContractError("scenario: event times must be strictly increasing");
  }
}

namespace {

double param_or(const ServiceDescriptor& s, const std::string& key, double fallback) {
  auto it = s.params.find(key);
  return it == s.params.end() ? fallback : it->second;
}

int label_slot(const std::string& label) {
  if (label == "h1") return 0;
  if (label == "h2") return 1;
  return 2;
}

// The live control loop instantiated from an Architecture. Behaviors are
// bound by (kind, requires_model): model-free filter = converter, grouped
// filter = Kalman, model-free controller = PID, grouped controller = MPC.
struct RuntimeLoop {
  double sensor_noise_std = 0.0;

  bool kalman = false;
  LTIModel filter_model;
  NoiseConfig kf_noise;
  double kf_prior = 1e-3;
  EstimatorState est;

  bool mpc = false;
  LTIModel ctrl_model;
  MpcConfig mpc_cfg;
  PidGains pid_gains;
  PidState pid_state;
};

const ServiceDescriptor& descriptor_for(const Catalog& catalog, const std::string& id) {
  const ServiceDescriptor* s = catalog.find(id);
  if (!s) throw ContractError("run_scenario: service '" + id + "' vanished from the catalog");
  return *s;
}

ComplexityLevel model_level(const Catalog& catalog, const std::string& model_id) {
  const ServiceDescriptor& m = descriptor_for(catalog, model_id);
  if (!m.complexity)
    throw ContractError("run_scenario: service '" + model_id + "' is not a model");
  return m.complexity->level;
}

RuntimeLoop instantiate(const Architecture& arch, const Catalog& catalog,
                        const ThreeTankModels& models, const SimScenario& scenario,
                        const std::array<std::optional<double>, 3>& previous_estimate) {
  RuntimeLoop loop;
  for (const auto& id : arch.path.nodes) {
    if (id == ServiceGraph::kStartId || id == ServiceGraph::kTargetId) continue;
    const auto plus = id.find('+');
    const std::string base_id = plus == std::string::npos ? id : id.substr(0, plus);
    const ServiceDescriptor& base = descriptor_for(catalog, base_id);
    switch (base.kind) {
      case ServiceKind::sensor:
        loop.sensor_noise_std = param_or(base, "noise_std", 0.0);
        break;
      case ServiceKind::filter: {
        loop.kalman = base.requires_model;
        if (loop.kalman) {
          loop.filter_model =
              models.by_level(model_level(catalog, id.substr(plus + 1)));
          loop.kf_noise.q_process = param_or(base, "q_process", NoiseConfig{}.q_process);
          loop.kf_noise.r_meas = param_or(base, "r_meas", NoiseConfig{}.r_meas);
          loop.kf_prior = param_or(base, "p0", 1e-3);
          const int n = loop.filter_model.dim();
          loop.est.x_hat = loop.filter_model.x_op;
          for (int i = 0; i < n; ++i) {
            const auto& prev =
                previous_estimate[label_slot(loop.filter_model.state_labels[i])];
            if (prev) loop.est.x_hat(i) = *prev;
          }
          loop.est.P = loop.kf_prior * Eigen::MatrixXd::Identity(n, n);
        }
        break;
      }
      case ServiceKind::controller: {
        loop.mpc = base.requires_model;
        if (loop.mpc) {
          loop.ctrl_model =
              models.by_level(model_level(catalog, id.substr(plus + 1)));
          MpcConfig cfg;
          cfg.horizon = static_cast<int>(param_or(base, "horizon", cfg.horizon));
          cfg.q = param_or(base, "q", cfg.q);
          cfg.r_u = param_or(base, "r_u", cfg.r_u);
          cfg.level_penalty = param_or(base, "level_penalty", cfg.level_penalty);
          cfg.tol = param_or(base, "tol", cfg.tol);
          cfg.max_iterations =
              static_cast<int>(param_or(base, "max_iter", cfg.max_iterations));
          cfg.u_max = scenario.plant.u_max;
          cfg.h_max = scenario.plant.h_max;
          loop.mpc_cfg = cfg;
        } else {
          loop.pid_gains.kp = param_or(base, "kp", 0.0);
          loop.pid_gains.ki = param_or(base, "ki", 0.0);
          loop.pid_gains.kd = param_or(base, "kd", 0.0);
          loop.pid_state = PidState{};
        }
        break;
      }
      default:
        break;
    }
  }
  return loop;
}

}  // namespace

SimResult run_scenario(const SimScenario& scenario, const Catalog& catalog,
                       const CostWeights& weights) {
  scenario.validate();
  const ThreeTankModels models = build_models(scenario.plant, scenario.ts);

  Orchestrator orch(catalog, weights);
  const Architecture* arch = &orch.initialize();

  SimResult result;
  result.history.push_back(
      {0.0, arch->epoch, arch->path.nodes, arch->path.total_cost, false, ""});

  std::array<std::optional<double>, 3> estimate{};  // by label h1,h2,h3
  RuntimeLoop loop = instantiate(*arch, orch.catalog(), models, scenario, estimate);

  const Equilibrium eq0 = equilibrium_for(scenario.plant, scenario.reference_at(0.0));
  PlantState state = scenario.initial_state.value_or(eq0.levels);
  double u_prev = eq0.u;

  GaussianNoise noise(scenario.seed);
  const long steps = std::lround(scenario.duration / scenario.ts);
  std::size_t next_event = 0;

  auto dispatch_due = [&](double until) {
    while (next_event < scenario.events.size() &&
           scenario.events[next_event].time <= until + 1e-9) {
      const TimedEvent& ev = scenario.events[next_event++];
      try {
        EventOutcome outcome = orch.handle_event(ev.event);
        if (outcome.architecture) {
          arch = &*orch.current();
          loop = instantiate(*arch, orch.catalog(), models, scenario, estimate);
          result.history.push_back({ev.time, arch->epoch, arch->path.nodes,
                                    arch->path.total_cost, false, ""});
        } else if (outcome.stale) {
          result.history.push_back({ev.time, orch.epoch(), arch->path.nodes,
                                    arch->path.total_cost, true, outcome.message});
        }
      } catch (const EventError& e) {
        result.history.push_back({ev.time, orch.epoch(), arch->path.nodes,
                                  arch->path.total_cost, orch.stale(), e.what()});
      }
    }
  };

  result.trace.reserve(static_cast<std::size_t>(steps));
  for (long k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * scenario.ts;
    dispatch_due(t);

    const auto tick = std::chrono::steady_clock::now();

    const double y = state.h3 + noise.sample(loop.sensor_noise_std);

    if (loop.kalman) {
      loop.est = kf_step(loop.est, loop.filter_model, u_prev, y, loop.kf_noise);
      estimate = {};
      for (int i = 0; i < loop.filter_model.dim(); ++i)
        estimate[label_slot(loop.filter_model.state_labels[i])] = loop.est.x_hat(i);
    } else {
      estimate = {};
      estimate[2] = converter_step(y);
    }

    const double ref = scenario.reference_at(t);
    double u_cmd = 0.0;
    if (loop.mpc) {
      Eigen::VectorXd x(loop.ctrl_model.dim());
      for (int i = 0; i < loop.ctrl_model.dim(); ++i) {
        const auto& v = estimate[label_slot(loop.ctrl_model.state_labels[i])];
        x(i) = v ? *v : loop.ctrl_model.x_op(i);
      }
      u_cmd = mpc_step(loop.ctrl_model, x, ref, loop.mpc_cfg).u;
    } else {
      auto [next_state, u] = pid_step(loop.pid_state, ref, estimate[2].value_or(y),
                                      loop.pid_gains, scenario.ts, scenario.plant.u_max);
      loop.pid_state = next_state;
      u_cmd = u;
    }

    const double u = std::clamp(u_cmd, 0.0, scenario.plant.u_max);  // actuator

    const auto tock = std::chrono::steady_clock::now();

    TraceRecord rec;
    rec.t = t;
    rec.truth = state;
    rec.y = y;
    rec.x_hat = estimate;
    rec.u = u;
    rec.epoch = orch.epoch();
    rec.step_us = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::microseconds>(tock - tick).count());
    result.trace.push_back(rec);

    state = plant_step(state, u, scenario.plant, scenario.ts);
    u_prev = u;
  }
  dispatch_due(scenario.duration);

  return result;
}

std::string trace_to_csv(const std::vector<TraceRecord>& trace, bool with_timings) {
  std::string out = "t,h1,h2,h3,y,xhat1,xhat2,xhat3,u,epoch,step_us\n";
  for (const auto& r : trace) {
    out += format_number(r.t);
    out += ',' + format_number(r.truth.h1);
    out += ',' + format_number(r.truth.h2);
    out += ',' + format_number(r.truth.h3);
    out += ',' + format_number(r.y);
    for (const auto& component : r.x_hat) {
      out += ',';
      if (component) out += format_number(*component);
    }
    out += ',' + format_number(r.u);
    out += ',' + std::to_string(r.epoch);
    out += ',' + std::to_string(with_timings ? r.step_us : 0);
    out += '\n';
  }
  return out;
}

std::string history_to_text(const std::vector<EpochRecord>& history) {
  std::string out;
  for (const auto& h : history) {
    out += "t=" + format_number(h.t);
    if (h.stale || !h.note.empty()) {
      out += " epoch=" + std::to_string(h.epoch) +
             (h.stale ? " status=stale" : " status=rejected") + " note=" + h.note;
    } else {
      out += " epoch=" + std::to_string(h.epoch) +
             " total=" + format_number(h.total_cost) +
             " path=" + join(h.path, " -> ");
    }
    out += '\n';
  }
  return out;
}

}  // namespace maestro
