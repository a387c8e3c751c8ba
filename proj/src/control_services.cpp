#include "maestro/control_services.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

namespace maestro {

const LTIModel& ThreeTankModels::by_level(ComplexityLevel level) const {
  switch (level) {
    case ComplexityLevel::low: return low;
    case ComplexityLevel::medium: return medium;
    case ComplexityLevel::high: return high;
  }
  return low;
}

namespace {

// exp([[Ac, Bc], [0, 0]] * ts) = [[Ad, Bd], [0, I]]
void discretize(const Eigen::MatrixXd& ac, const Eigen::VectorXd& bc, double ts,
                Eigen::MatrixXd& ad, Eigen::VectorXd& bd) {
  const int n = static_cast<int>(ac.rows());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n + 1, n + 1);
  m.topLeftCorner(n, n) = ac;
  m.topRightCorner(n, 1) = bc;
  Eigen::MatrixXd e = (m * ts).exp();
  ad = e.topLeftCorner(n, n);
  bd = e.topRightCorner(n, 1);
}

}  // namespace

ThreeTankModels build_models(const PlantParams& p, double ts) {
  p.validate();
  if (!(ts > 0.0)) throw ContractError("build_models: ts must be > 0");
  if (!(p.c3 > 0.0))
    throw ContractError("build_models: outlet coefficient c3 must be > 0");

  const Equilibrium eq = equilibrium_for(p, p.op_level);
  const double d12 = eq.levels.h1 - eq.levels.h2;
  const double d23 = eq.levels.h2 - eq.levels.h3;
  if (!(d12 > 0.0) || !(d23 > 0.0))
    throw ContractError("build_models: degenerate operating point");

  // Flow sensitivities dq/d(head) at the operating point.
  const double k12 = p.c12 * std::sqrt(2.0 * p.g) / (2.0 * std::sqrt(d12));
  const double k23 = p.c23 * std::sqrt(2.0 * p.g) / (2.0 * std::sqrt(d23));
  const double k3 = p.c3 * std::sqrt(2.0 * p.g) / (2.0 * std::sqrt(eq.levels.h3));

  ThreeTankModels models;

  {
    Eigen::MatrixXd ac(3, 3);
    ac << -k12 / p.a1, k12 / p.a1, 0.0,
           k12 / p.a2, -(k12 + k23) / p.a2, k23 / p.a2,
           0.0, k23 / p.a3, -(k23 + k3) / p.a3;
    Eigen::VectorXd bc(3);
    bc << 1.0 / p.a1, 0.0, 0.0;
    LTIModel& m = models.high;
    m.state_labels = {"h1", "h2", "h3"};
    discretize(ac, bc, ts, m.A, m.B);
    m.A_cont = ac;
    m.B_cont = bc;
    m.x_op = Eigen::Vector3d(eq.levels.h1, eq.levels.h2, eq.levels.h3);
    m.u_op = eq.u;
    m.ts = ts;
  }
  {
    // Tank-1 stage folded into the input: the pump flow feeds tank 2.
    Eigen::MatrixXd ac(2, 2);
    ac << -k23 / p.a2, k23 / p.a2,
           k23 / p.a3, -(k23 + k3) / p.a3;
    Eigen::VectorXd bc(2);
    bc << 1.0 / p.a2, 0.0;
    LTIModel& m = models.medium;
    m.state_labels = {"h2", "h3"};
    discretize(ac, bc, ts, m.A, m.B);
    m.A_cont = ac;
    m.B_cont = bc;
    m.x_op = Eigen::Vector2d(eq.levels.h2, eq.levels.h3);
    m.u_op = eq.u;
    m.ts = ts;
  }
  {
    Eigen::MatrixXd ac(1, 1);
    ac << -k3 / p.a3;
    Eigen::VectorXd bc(1);
    bc << 1.0 / p.a3;
    LTIModel& m = models.low;
    m.state_labels = {"h3"};
    discretize(ac, bc, ts, m.A, m.B);
    m.A_cont = ac;
    m.B_cont = bc;
    m.x_op = Eigen::VectorXd::Constant(1, eq.levels.h3);
    m.u_op = eq.u;
    m.ts = ts;
  }
  return models;
}

EstimatorState kf_step(const EstimatorState& est, const LTIModel& model,
                       double u_prev, double y_meas, const NoiseConfig& noise) {
  const int n = model.dim();
  if (est.x_hat.size() != n || est.P.rows() != n || est.P.cols() != n)
    throw ContractError("kf_step: estimator dimensions do not match the model");
  if (!(noise.r_meas > 0.0) || noise.q_process < 0.0)
    throw ContractError("kf_step: r_meas must be > 0 and q_process >= 0");

  Eigen::MatrixXd p_in = 0.5 * (est.P + est.P.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(p_in);
  if (eig.eigenvalues().minCoeff() < -1e-9)
    throw ContractError("kf_step: input covariance is not positive semidefinite");

  const Eigen::MatrixXd q = noise.q_process * Eigen::MatrixXd::Identity(n, n);
  const double r = noise.r_meas;

  // Predict in deviation coordinates.
  Eigen::VectorXd dx = est.x_hat - model.x_op;
  dx = model.A * dx + model.B * (u_prev - model.u_op);
  Eigen::MatrixXd p = model.A * p_in * model.A.transpose() + q;

  // Update with the h3 measurement.
  Eigen::RowVectorXd h = Eigen::RowVectorXd::Zero(n);
  h(model.output_index()) = 1.0;
  const double y_op = model.x_op(model.output_index());
  const double innovation = (y_meas - y_op) - h.dot(dx);
  const double s = (h * p * h.transpose())(0) + r;
  const Eigen::VectorXd k = p * h.transpose() / s;

  dx += k * innovation;
  const Eigen::MatrixXd ikh = Eigen::MatrixXd::Identity(n, n) - k * h;
  p = ikh * p * ikh.transpose() + k * r * k.transpose();  // Joseph form
  p = 0.5 * (p + p.transpose());

  EstimatorState out;
  out.x_hat = model.x_op + dx;
  out.P = std::move(p);
  return out;
}

std::pair<PidState, double> pid_step(const PidState& state, double ref, double y,
                                     const PidGains& gains, double ts,
                                     double u_max) {
  if (!(ts > 0.0)) throw ContractError("pid_step: ts must be > 0");
  const double e = ref - y;
  const double derivative = state.has_prev ? (e - state.prev_error) / ts : 0.0;
  const double integral_candidate = state.integral + e * ts;
  const double raw =
      gains.kp * e + gains.ki * integral_candidate + gains.kd * derivative;

  PidState next = state;
  next.prev_error = e;
  next.has_prev = true;
  double u = raw;
  if (raw < 0.0 || raw > u_max) {
    u = std::clamp(raw, 0.0, u_max);  // integrator frozen while clamped
  } else {
    next.integral = integral_candidate;
  }
  return {next, u};
}

// ---- MPC -------------------------------------------------------------------

namespace {

struct CondensedQp {
  Eigen::MatrixXd g;        // response of h3_k to du_j (N x N, lower triangular)
  Eigen::VectorXd ref_err;  // h3 free response minus ref, per step
  Eigen::VectorXd ceil_err; // h3 free response minus h_max, per step
  double lo = 0.0;          // du bounds
  double hi = 0.0;
};

CondensedQp condense(const LTIModel& model, const Eigen::VectorXd& x_hat_abs,
                     double ref, const MpcConfig& cfg) {
  const int horizon = cfg.horizon;
  CondensedQp qp;
  qp.g = Eigen::MatrixXd::Zero(horizon, horizon);
  qp.ref_err = Eigen::VectorXd::Zero(horizon);
  qp.ceil_err = Eigen::VectorXd::Zero(horizon);
  qp.lo = 0.0 - model.u_op;
  qp.hi = cfg.u_max - model.u_op;

  const int out = model.output_index();
  Eigen::VectorXd free_state = x_hat_abs - model.x_op;
  Eigen::MatrixXd impulse = model.B;  // A^i B columns, built incrementally
  const double h3_op = model.x_op(out);
  std::vector<double> response(horizon);  // C A^i B
  for (int i = 0; i < horizon; ++i) {
    if (i > 0) impulse = model.A * impulse;
    response[i] = impulse(out);
  }
  for (int k = 1; k <= horizon; ++k) {
    free_state = model.A * free_state;
    const double h3_free = h3_op + free_state(out);
    qp.ref_err(k - 1) = h3_free - ref;
    qp.ceil_err(k - 1) = h3_free - cfg.h_max;
    for (int j = 0; j < k; ++j) qp.g(k - 1, j) = response[k - 1 - j];
  }
  return qp;
}

Eigen::VectorXd qp_gradient(const CondensedQp& qp, const MpcConfig& cfg,
                            const Eigen::VectorXd& du) {
  const Eigen::VectorXd gu = qp.g * du;
  Eigen::VectorXd grad = 2.0 * cfg.q * qp.g.transpose() * (qp.ref_err + gu) +
                         2.0 * cfg.r_u * du;
  const Eigen::VectorXd overflow =
      (qp.ceil_err + gu).cwiseMax(0.0);
  if (overflow.maxCoeff() > 0.0)
    grad += 2.0 * cfg.level_penalty * qp.g.transpose() * overflow;
  return grad;
}

}  // namespace

double mpc_kkt_residual(const MpcConfig& cfg, const Eigen::VectorXd& u_abs_sequence,
                        const Eigen::VectorXd& gradient) {
  double res = 0.0;
  for (int i = 0; i < u_abs_sequence.size(); ++i) {
    const double u = u_abs_sequence(i);
    const double g = gradient(i);
    double v;
    if (u <= 0.0)
      v = std::max(0.0, -g);
    else if (u >= cfg.u_max)
      v = std::max(0.0, g);
    else
      v = std::fabs(g);
    res = std::max(res, v);
  }
  return res;
}

double mpc_objective(const LTIModel& model, const Eigen::VectorXd& x_hat_abs,
                     double ref, const MpcConfig& cfg,
                     const Eigen::VectorXd& u_abs_sequence) {
  if (u_abs_sequence.size() != cfg.horizon)
    throw ContractError("mpc_objective: sequence length must equal the horizon");
  const int out = model.output_index();
  Eigen::VectorXd dx = x_hat_abs - model.x_op;
  double cost = 0.0;
  for (int k = 0; k < cfg.horizon; ++k) {
    const double du = u_abs_sequence(k) - model.u_op;
    dx = model.A * dx + model.B * du;
    const double h3 = model.x_op(out) + dx(out);
    const double err = h3 - ref;
    cost += cfg.q * err * err + cfg.r_u * du * du;
    const double over = h3 - cfg.h_max;
    if (over > 0.0) cost += cfg.level_penalty * over * over;
  }
  return cost;
}

MpcResult mpc_step(const LTIModel& model, const Eigen::VectorXd& x_hat_abs,
                   double ref, const MpcConfig& cfg) {
  if (x_hat_abs.size() != model.dim())
    throw ContractError("mpc_step: state estimate dimension does not match the model");
  if (cfg.horizon < 1) throw ContractError("mpc_step: horizon must be >= 1");
  if (!(cfg.u_max > 0.0)) throw ContractError("mpc_step: u_max must be > 0");

  const CondensedQp qp = condense(model, x_hat_abs, ref, cfg);
  if (qp.hi < qp.lo)
    throw ContractError("mpc_step: operating-point input exceeds u_max");
  const int horizon = cfg.horizon;

  MpcResult result;

  // Feasibility probe: is the ceiling violated even with zero inflow?
  {
    const Eigen::VectorXd du_min = Eigen::VectorXd::Constant(horizon, qp.lo);
    if ((qp.ceil_err + qp.g * du_min).maxCoeff() > 0.0) result.soft_fallback = true;
  }

  Eigen::VectorXd du = Eigen::VectorXd::Zero(horizon);
  du = du.cwiseMax(qp.lo).cwiseMin(qp.hi);

  auto objective = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd u_abs = v.array() + model.u_op;
    return mpc_objective(model, x_hat_abs, ref, cfg, u_abs);
  };
  auto residual = [&](const Eigen::VectorXd& v, const Eigen::VectorXd& grad) {
    Eigen::VectorXd u_abs = v.array() + model.u_op;
    return mpc_kkt_residual(cfg, u_abs, grad);
  };

  // Projected Newton: fix the bound and penalty activity pattern, solve the
  // free subspace exactly, line-search along the projected arc. Falls back
  // to a projected gradient step when the Newton direction fails to improve.
  const Eigen::MatrixXd gtg = qp.g.transpose() * qp.g;
  const double lipschitz =
      2.0 * (cfg.q + cfg.level_penalty) * gtg.operatorNorm() + 2.0 * cfg.r_u;
  double f_current = objective(du);
  int iter = 0;
  for (; iter < cfg.max_iterations; ++iter) {
    const Eigen::VectorXd grad = qp_gradient(qp, cfg, du);
    if (residual(du, grad) <= cfg.tol) break;

    std::vector<int> free_set;
    for (int i = 0; i < horizon; ++i) {
      const bool pinned_low = du(i) <= qp.lo && grad(i) > 0.0;
      const bool pinned_high = du(i) >= qp.hi && grad(i) < 0.0;
      if (!pinned_low && !pinned_high) free_set.push_back(i);
    }

    bool improved = false;
    if (!free_set.empty()) {
      const int nf = static_cast<int>(free_set.size());
      const Eigen::VectorXd overflow = (qp.ceil_err + qp.g * du).cwiseMax(0.0);
      Eigen::MatrixXd hess(nf, nf);
      for (int a = 0; a < nf; ++a)
        for (int b = 0; b < nf; ++b) {
          double v = 2.0 * cfg.q * gtg(free_set[a], free_set[b]);
          if (a == b) v += 2.0 * cfg.r_u;
          hess(a, b) = v;
        }
      for (int k = 0; k < horizon; ++k) {
        if (overflow(k) <= 0.0) continue;
        for (int a = 0; a < nf; ++a)
          for (int b = 0; b < nf; ++b)
            hess(a, b) += 2.0 * cfg.level_penalty * qp.g(k, free_set[a]) *
                          qp.g(k, free_set[b]);
      }
      Eigen::VectorXd grad_free(nf);
      for (int a = 0; a < nf; ++a) grad_free(a) = grad(free_set[a]);
      const Eigen::VectorXd step = hess.ldlt().solve(grad_free);
      for (double alpha = 1.0; alpha > 1e-8; alpha *= 0.5) {
        Eigen::VectorXd candidate = du;
        for (int a = 0; a < nf; ++a) candidate(free_set[a]) -= alpha * step(a);
        candidate = candidate.cwiseMax(qp.lo).cwiseMin(qp.hi);
        const double f_new = objective(candidate);
        if (f_new < f_current) {
          du = std::move(candidate);
          f_current = f_new;
          improved = true;
          break;
        }
      }
    }
    if (!improved) {
      // Projected gradient with backtracking from 1/L.
      bool moved = false;
      for (double step = 1.0 / lipschitz; step > 1e-30; step *= 0.5) {
        Eigen::VectorXd candidate =
            (du - step * grad).cwiseMax(qp.lo).cwiseMin(qp.hi);
        if ((candidate - du).cwiseAbs().maxCoeff() == 0.0) break;
        const double f_new = objective(candidate);
        if (f_new < f_current) {
          du = std::move(candidate);
          f_current = f_new;
          moved = true;
          break;
        }
      }
      if (!moved) break;  // stationary up to floating point
    }
  }

  result.iterations = iter;
  result.sequence = du.array() + model.u_op;
  result.kkt_residual = residual(du, qp_gradient(qp, cfg, du));
  result.u = result.sequence(0);
  return result;
}

}  // namespace maestro
