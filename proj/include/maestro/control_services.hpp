#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "maestro/plant.hpp"
#include "maestro/service_model.hpp"

namespace maestro {

// Discrete-time LTI model x[k+1] = A x[k] + B u[k] in deviation coordinates
// around (x_op, u_op). State labels are an ordered subset of {h1,h2,h3} with
// h3 last; lower-complexity label sets are suffixes of higher ones.
struct LTIModel {
  std::vector<std::string> state_labels;
  Eigen::MatrixXd A;
  Eigen::VectorXd B;
  Eigen::MatrixXd A_cont;  // continuous-time linearization the pair above
  Eigen::VectorXd B_cont;  // was discretized from (empty for raw models)
  Eigen::VectorXd x_op;    // absolute operating-point values per labeled state
  double u_op = 0.0;
  double ts = 0.0;

  int dim() const { return static_cast<int>(A.rows()); }
  // Index of the measured state (h3, always the last label).
  int output_index() const { return dim() - 1; }
};

struct ThreeTankModels {
  LTIModel low;     // [h3]
  LTIModel medium;  // [h2, h3]
  LTIModel high;    // [h1, h2, h3]

  const LTIModel& by_level(ComplexityLevel level) const;
};

// Linearizes the three-tank dynamics at the equilibrium for p.op_level and
// discretizes exactly at ts. The medium model folds the tank-1 stage into
// the input channel; the low model drives tank 3 directly.
ThreeTankModels build_models(const PlantParams& p, double ts);

// ---- Kalman filter ---------------------------------------------------------

struct EstimatorState {
  Eigen::VectorXd x_hat;  // absolute levels for the model's labels
  Eigen::MatrixXd P;      // covariance, symmetric PSD
};

struct NoiseConfig {
  double q_process = 1e-4;  // Q = q_process * I
  double r_meas = 1e-3;     // scalar measurement variance
};

// One predict/update cycle with H selecting the model's measured state.
// Throws ContractError on dimension mismatch or a non-PSD input covariance.
// The returned covariance is symmetric PSD (Joseph-form update).
EstimatorState kf_step(const EstimatorState& est, const LTIModel& model,
                       double u_prev, double y_meas, const NoiseConfig& noise);

// ---- Converter filter ------------------------------------------------------

// Forwards the measurement unchanged as a dimension-1 state estimate.
inline double converter_step(double y_meas) { return y_meas; }

// ---- PID -------------------------------------------------------------------

struct PidGains {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
};

struct PidState {
  double integral = 0.0;
  double prev_error = 0.0;
  bool has_prev = false;
};

// u = clamp(kp*e + ki*integral + kd*de/dt, 0, u_max). The integrator is
// frozen whenever the unclamped output leaves [0, u_max] (anti-windup).
std::pair<PidState, double> pid_step(const PidState& state, double ref, double y,
                                     const PidGains& gains, double ts,
                                     double u_max);

// ---- MPC -------------------------------------------------------------------

struct MpcConfig {
  int horizon = 10;
  double q = 1.0;            // tracking weight on (h3 - ref)^2
  double r_u = 1.0;          // effort weight on the input deviation
  double u_max = 3.0e-4;     // absolute input bounds [0, u_max]
  double h_max = 0.6;        // level ceiling, enforced as a stiff penalty
  double level_penalty = 1e6;
  double tol = 1e-6;         // KKT residual target
  int max_iterations = 20000;
};

struct MpcResult {
  double u = 0.0;             // first input of the optimized sequence
  Eigen::VectorXd sequence;   // full horizon of absolute inputs
  double kkt_residual = 0.0;
  int iterations = 0;
  // Set when the h_max constraint cannot be met even with zero inflow; the
  // soft-penalty solution is returned in that case.
  bool soft_fallback = false;
};

// Minimizes sum_k q*(h3_k - ref)^2 + r_u*du_k^2 over the horizon subject to
// the model dynamics and 0 <= u <= u_max, with h3 <= h_max as a stiff
// quadratic penalty. du is the input deviation from the model's operating
// point. Box-constrained QP solved by projected gradient descent with an
// active-set polish; the KKT residual contract is cfg.tol.
MpcResult mpc_step(const LTIModel& model, const Eigen::VectorXd& x_hat_abs,
                   double ref, const MpcConfig& cfg);

// Objective evaluated by direct forward simulation of the model (independent
// of the condensed form the solver uses); exposed for gradient checks.
double mpc_objective(const LTIModel& model, const Eigen::VectorXd& x_hat_abs,
                     double ref, const MpcConfig& cfg,
                     const Eigen::VectorXd& u_abs_sequence);

// Max KKT violation of `u_abs_sequence` for the same problem given an
// objective gradient (analytic or finite-difference).
double mpc_kkt_residual(const MpcConfig& cfg, const Eigen::VectorXd& u_abs_sequence,
                        const Eigen::VectorXd& gradient);

}  // namespace maestro
