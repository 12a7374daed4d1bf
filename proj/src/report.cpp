#include "report.hpp"

#include <sstream>

namespace nehari {

using nlohmann::json;

json to_json(const Thresholds& th) {
  json j;
  j["lambda1"] = th.lambda1;
  j["lambda_tilde1"] = th.lambda_tilde1;
  if (th.lambda_bar1)
    j["lambda_bar1"] = *th.lambda_bar1;
  else
    j["lambda_bar1"] = nullptr;
  j["Lambda"] = th.Lambda;
  j["S_ell"] = th.S_ell;
  j["S_lstar"] = th.S_lstar;
  j["S_q"] = th.S_q;
  j["poincare_ratio"] = th.poincare_ratio;
  j["probe_seed"] = th.probe_seed;
  j["probe_count"] = th.probe_count;
  return j;
}

namespace {

json check_json(const ConditionCheck& c) {
  json j;
  j["passed"] = c.passed;
  if (!c.passed) {
    j["violating_t"] = c.violating_t;
    j["detail"] = c.detail;
  }
  return j;
}

}  // namespace

json to_json(const ConditionReport& rep) {
  json j;
  j["phi1"] = check_json(rep.phi1);
  j["phi2"] = check_json(rep.phi2);
  j["phi3"] = check_json(rep.phi3);
  j["dimension"] = check_json(rep.dimension);
  j["indices"] = {{"ell", rep.indices.ell},
                  {"m", rep.indices.m},
                  {"provenance", rep.indices_exact ? "exact" : "sampled"}};
  j["all_passed"] = rep.all_passed();
  return j;
}

json to_json(const BranchPoint& bp) {
  json j;
  j["t"] = bp.t;
  j["branch"] = branch_name(bp.branch);
  j["gamma1_residual"] = bp.gamma1_residual;
  j["gamma2_value"] = bp.gamma2_value;
  j["energy"] = bp.energy;
  return j;
}

json to_json(const BranchResult& br, bool include_trace) {
  json j;
  j["point"] = to_json(br.point);
  j["converged"] = br.converged;
  j["free_gradient_residual"] = br.free_gradient_residual;
  j["lagrange_mu_hat"] = br.lagrange_mu_hat;
  j["iterations"] = br.iterations;
  j["restart_index"] = br.restart_index;
  j["sobolev_norm"] = br.sobolev;
  j["gradient_luxemburg_norm"] = br.gradient_luxemburg;
  j["sign_consistent"] = br.sign_consistent;
  j["abs_energy_mismatch"] = br.abs_energy_mismatch;
  if (include_trace) {
    json t = json::array();
    for (const auto& e : br.trace)
      t.push_back({{"iter", e.iter}, {"J", e.energy}, {"residual", e.residual}, {"t", e.t}});
    j["trace"] = std::move(t);
  }
  return j;
}

json to_json(const SolveResult& sr) {
  json j;
  j["lambda"] = sr.lambda_used;
  j["thresholds"] = to_json(sr.thresholds);
  if (sr.plus)
    j["plus"] = to_json(*sr.plus);
  else
    j["plus"] = {{"error", sr.plus_error}};
  if (sr.minus)
    j["minus"] = to_json(*sr.minus);
  else
    j["minus"] = {{"error", sr.minus_error}};
  return j;
}

json to_json(const SweepRow& row) {
  json j;
  j["lambda"] = row.lambda;
  j["plus_ok"] = row.plus_ok;
  j["minus_ok"] = row.minus_ok;
  j["plus_energy"] = row.plus_energy;
  j["minus_energy"] = row.minus_energy;
  j["plus_norm"] = row.plus_norm;
  j["plus_grad_norm"] = row.plus_grad_norm;
  j["plus_residual"] = row.plus_residual;
  j["minus_residual"] = row.minus_residual;
  j["bound_lhs"] = row.bound_lhs;
  j["bound_rhs"] = row.bound_rhs;
  j["bound_ok"] = row.bound_ok;
  if (!row.error.empty()) j["error"] = row.error;
  return j;
}

json to_json(const SweepResult& sw) {
  json j;
  j["thresholds"] = to_json(sw.thresholds);
  j["decay_constant"] = sw.decay_constant;
  json rows = json::array();
  for (const auto& r : sw.rows) rows.push_back(to_json(r));
  j["rows"] = std::move(rows);
  return j;
}

json to_json(const ProjectionResult& pr) {
  json j;
  j["case"] = fibering_case_name(pr.kind);
  if (pr.t_max > 0.0) {
    j["t_max"] = pr.t_max;
    j["m_at_max"] = pr.m_at_max;
  }
  json pts = json::array();
  for (const auto& p : pr.points) pts.push_back(to_json(p));
  j["points"] = std::move(pts);
  return j;
}

std::string trace_jsonl(const BranchResult& br, Branch branch) {
  std::ostringstream out;
  for (const auto& e : br.trace) {
    json j;
    j["iter"] = e.iter;
    j["J"] = e.energy;
    j["residual"] = e.residual;
    j["t"] = e.t;
    j["branch"] = branch_name(branch);
    out << j.dump() << '\n';
  }
  return out.str();
}

}  // namespace nehari
