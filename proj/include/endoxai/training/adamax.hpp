#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "endoxai/core/error.hpp"
#include "endoxai/model/param.hpp"

namespace endoxai::training {

struct AdamaxConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-7;

  void validate() const {
    if (beta1 <= 0.0 || beta1 >= 1.0 || beta2 <= 0.0 || beta2 >= 1.0)
      throw ConfigError("adamax betas must be in (0, 1)");
    if (epsilon <= 0.0) throw ConfigError("adamax epsilon must be > 0");
  }
};

// Adamax: first moment m with bias correction, infinity-norm second moment u.
//   m_t = b1 m_{t-1} + (1-b1) g_t
//   u_t = max(b2 u_{t-1}, |g_t|)          (elementwise)
//   theta_t = theta_{t-1} - eta/(1-b1^t) * m_t / (u_t + eps)
class Adamax {
 public:
  explicit Adamax(AdamaxConfig config = {}) : config_(config) { config_.validate(); }

  const AdamaxConfig& config() const { return config_; }
  std::uint64_t t() const { return t_; }

  std::size_t slot_count() const { return slots_.size(); }
  const std::vector<double>& first_moment(std::size_t slot) const { return slots_[slot].m; }
  const std::vector<double>& inf_norm(std::size_t slot) const { return slots_[slot].u; }

  /// One update over all parameters; advances t by exactly 1.
  void step(const std::vector<model::TensorRef>& params, double learning_rate) {
    if (learning_rate <= 0.0) throw ContractError("learning_rate must be > 0");
    bind(params);
    t_ += 1;
    const double correction = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
    const double scale = learning_rate / correction;
    for (std::size_t s = 0; s < params.size(); ++s) {
      const model::TensorRef& p = params[s];
      Slot& slot = slots_[s];
      for (std::size_t i = 0; i < p.size; ++i) {
        const double g = p.grad[i];
        if (!std::isfinite(g))
          throw NumericError("non-finite gradient in " + p.name +
                             " at step " + std::to_string(t_));
        slot.m[i] = config_.beta1 * slot.m[i] + (1.0 - config_.beta1) * g;
        slot.u[i] = std::max(config_.beta2 * slot.u[i], std::fabs(g));
        p.data[i] -= scale * slot.m[i] / (slot.u[i] + config_.epsilon);
      }
    }
  }

  void reset() {
    t_ = 0;
    slots_.clear();
    names_.clear();
  }

 private:
  struct Slot {
    std::vector<double> m, u;
  };

  void bind(const std::vector<model::TensorRef>& params) {
    if (slots_.empty()) {
      for (const auto& p : params) {
        slots_.push_back({std::vector<double>(p.size, 0.0), std::vector<double>(p.size, 0.0)});
        names_.push_back(p.name);
      }
      return;
    }
    if (params.size() != slots_.size())
      throw ContractError("adamax: parameter list changed between steps");
    for (std::size_t s = 0; s < params.size(); ++s)
      if (params[s].name != names_[s] || params[s].size != slots_[s].m.size())
        throw ContractError("adamax: parameter " + params[s].name +
                            " does not match optimizer state");
  }

  AdamaxConfig config_;
  std::uint64_t t_ = 0;
  std::vector<Slot> slots_;
  std::vector<std::string> names_;
};

}  // namespace endoxai::training
