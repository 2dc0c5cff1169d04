#include "dipiir/consensus.hpp"

#include "dipiir/error.hpp"

#include <cmath>
#include <future>
#include <iomanip>
#include <ostream>

namespace dipiir {

CEConfig::CEConfig(const CEParams& params) : p_(params) {
  const auto& mu = p_.mu;
  for (double w : {mu.sensor, mu.data, mu.image})
    if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError("CEConfig: agent weights must be finite and >= 0");
  if (std::abs(mu.sensor + mu.data + mu.image - 1.0) > 1e-12)
    throw ConfigError("CEConfig: agent weights must sum to 1");
  if (!(p_.rho > 0.0 && p_.rho < 1.0)) throw ConfigError("CEConfig: rho must lie in (0, 1)");
  if (p_.max_ce_iters < 1) throw ConfigError("CEConfig: max_ce_iters must be >= 1");
  if (!(p_.residual_tol >= 0.0)) throw ConfigError("CEConfig: residual_tol must be >= 0");
  for (double l : {p_.lambda_s, p_.lambda_d, p_.lambda_i})
    if (!(l > 0.0) || !std::isfinite(l)) throw ConfigError("CEConfig: proximal strengths must be positive");
}

void write_trace_csv(std::ostream& os, const ConvergenceTrace& trace) {
  os << "iter,mann_residual,gap_s,gap_d,gap_i,psnr\n";
  const auto old_flags = os.flags();
  const auto old_prec = os.precision();
  os << std::setprecision(17);
  for (const auto& r : trace.records) {
    os << r.iter << ',' << r.mann_residual << ',' << r.gap_s << ',' << r.gap_d << ',' << r.gap_i << ',';
    if (r.psnr) os << *r.psnr;
    os << '\n';
  }
  os.flags(old_flags);
  os.precision(old_prec);
}

AugmentedState weighted_average(const StackedState& s, const CEConfig& cfg) {
  s.require_consistent();
  const auto& mu = cfg.mu();
  Vec v = mu.sensor * s[Role::Sensor].values() + mu.data * s[Role::Data].values() +
          mu.image * s[Role::Image].values();
  return AugmentedState(s.parts[0].image_len(), std::move(v));
}

StackedState apply_G(const StackedState& s, const CEConfig& cfg) {
  return StackedState::replicate(weighted_average(s, cfg));
}

StackedState reflect_G(const StackedState& s, const CEConfig& cfg) {
  const AugmentedState avg = weighted_average(s, cfg);
  StackedState out = s;
  for (auto& p : out.parts) p.values() = 2.0 * avg.values() - p.values();
  return out;
}

StackedState apply_F(const StackedState& s, const AgentSet& agents, bool concurrent) {
  s.require_consistent();
  StackedState out = s;
  if (concurrent) {
    std::array<std::future<AugmentedState>, 3> pending;
    for (Role r : kRoles) {
      const auto& agent = agents[r];
      if (!agent) continue;
      pending[static_cast<std::size_t>(r)] =
          std::async(std::launch::async, [&agent, &s, r] { return (*agent)(s[r]); });
    }
    for (Role r : kRoles) {
      auto& f = pending[static_cast<std::size_t>(r)];
      if (f.valid()) out[r] = f.get();
    }
    return out;
  }
  for (Role r : kRoles)
    if (const auto& agent = agents[r]) out[r] = (*agent)(s[r]);
  return out;
}

namespace {

AgentSet active_agents(const AgentSet& agents, const CEConfig& cfg) {
  AgentSet out = agents;
  if (cfg.mu().sensor == 0.0) out.sensor.reset();
  if (cfg.mu().data == 0.0) out.data.reset();
  if (cfg.mu().image == 0.0) out.image.reset();
  return out;
}

StackedState mann_step_active(const StackedState& s, const AgentSet& active, const CEConfig& cfg) {
  const StackedState v = reflect_G(s, cfg);
  const StackedState fv = apply_F(v, active, cfg.params().concurrent_agents);
  const double rho = cfg.rho();
  StackedState out = s;
  for (Role r : kRoles) {
    const Vec z = 2.0 * fv[r].values() - v[r].values();
    out[r].values() = (1.0 - rho) * s[r].values() + rho * z;
  }
  return out;
}

// For a fixed point w of (2F - I)(2G - I) the CE point is u = (2G - I) w, at
// which F(u) = G(w); the gaps measure how far each F_j(u_j) is from <w>.
ConsensusGaps gaps_active(const StackedState& s, const AgentSet& active, const CEConfig& cfg) {
  const AugmentedState avg = weighted_average(s, cfg);
  const StackedState fs = apply_F(reflect_G(s, cfg), active, cfg.params().concurrent_agents);
  return ConsensusGaps{(fs[Role::Sensor].values() - avg.values()).norm(),
                       (fs[Role::Data].values() - avg.values()).norm(),
                       (fs[Role::Image].values() - avg.values()).norm()};
}

}  // namespace

StackedState mann_step(const StackedState& s, const AgentSet& agents, const CEConfig& cfg) {
  return mann_step_active(s, active_agents(agents, cfg), cfg);
}

ConsensusGaps consensus_gap(const StackedState& s, const AgentSet& agents, const CEConfig& cfg) {
  return gaps_active(s, active_agents(agents, cfg), cfg);
}

CEResult run_dipiir(const StackedState& init, const AgentSet& agents, const CEConfig& cfg,
                    const TraceScorer& scorer) {
  init.require_consistent();
  for (const auto& p : init.parts)
    if (!p.values().allFinite()) throw NumericError("run_dipiir: non-finite initial state");

  const AgentSet active = active_agents(agents, cfg);
  const auto& mu = cfg.mu();
  CEResult result;
  StackedState s = init;
  for (int k = 1; k <= cfg.params().max_ce_iters; ++k) {
    StackedState next = mann_step_active(s, active, cfg);
    for (const auto& p : next.parts)
      if (!p.values().allFinite())
        throw NumericError("run_dipiir: non-finite iterate at CE iteration " + std::to_string(k));

    TraceRecord rec;
    rec.iter = k;
    double step_sq = 0.0;
    double base_sq = 0.0;
    double weighted_sq = 0.0;
    for (Role r : kRoles) {
      const double d = (next[r].values() - s[r].values()).squaredNorm();
      step_sq += d;
      weighted_sq += mu[r] * d;
      base_sq += s[r].values().squaredNorm();
    }
    rec.mann_residual = base_sq > 0.0 ? std::sqrt(step_sq / base_sq) : std::sqrt(step_sq);
    rec.weighted_step = std::sqrt(weighted_sq);
    if (cfg.params().record_gaps) {
      const ConsensusGaps g = gaps_active(next, active, cfg);
      rec.gap_s = g.sensor;
      rec.gap_d = g.data;
      rec.gap_i = g.image;
    }
    if (scorer) rec.psnr = scorer(weighted_average(next, cfg));
    result.trace.records.push_back(rec);

    s = std::move(next);
    if (rec.mann_residual < cfg.params().residual_tol) break;
  }
  result.solution = weighted_average(s, cfg);
  result.final_state = std::move(s);
  return result;
}

}  // namespace dipiir
