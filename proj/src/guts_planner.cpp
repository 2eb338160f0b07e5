#include "mrsearch/guts_planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "mrsearch/error.hpp"

namespace mrsearch {

namespace {

// Diagonal of Gamma^-1 + X^T W X, shared by every candidate.
Eigen::VectorXd prior_precision(const CellEvidence& past, const Eigen::VectorXd& responsibilities) {
  if (past.precision.size() != responsibilities.size())
    throw Error(ErrorCode::NumericalFailure, "evidence and responsibilities differ in length");
  return responsibilities.cwiseInverse() + past.precision;
}

// Writes beta_hat for one candidate into `out`.
void estimate_into(const CellEvidence& past, const Eigen::VectorXd& base_precision,
                   const CandidateAction& cand, const Eigen::VectorXd& sample,
                   Eigen::VectorXd& out, Eigen::VectorXd& plan_prec, Eigen::VectorXd& plan_num) {
  const Eigen::Index m = base_precision.size();
  for (const auto& row : cand.planned_rows) {
    if (row.cell < 0 || row.cell >= m) throw Error(ErrorCode::InvalidCell, "planned row outside grid");
    plan_prec[row.cell] += row.confidence;
    plan_num[row.cell] += row.confidence * sample[row.cell];
  }
  for (Eigen::Index k = 0; k < m; ++k) {
    const double u = base_precision[k] + plan_prec[k];
    if (u == 0.0) throw Error(ErrorCode::NumericalFailure, "zero diagonal in U");
    out[k] = (past.weighted_obs[k] + plan_num[k]) / u;
  }
  for (const auto& row : cand.planned_rows) {
    plan_prec[row.cell] = 0.0;
    plan_num[row.cell] = 0.0;
  }
}

LossBreakdown loss_for(const CellEvidence& past, const Eigen::VectorXd& base_precision,
                       const CandidateAction& cand, std::size_t id, const Eigen::VectorXd& sample,
                       double lambda, Eigen::VectorXd& hat, Eigen::VectorXd& plan_prec,
                       Eigen::VectorXd& plan_num) {
  estimate_into(past, base_precision, cand, sample, hat, plan_prec, plan_num);
  auto loss = evaluate_loss(sample, hat, lambda);
  loss.candidate_id = id;
  return loss;
}

void check_lengths(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::NumericalFailure, "vector lengths differ");
}

}  // namespace

Eigen::VectorXd hypothetical_estimate(const CellEvidence& past, const CandidateAction& candidate,
                                      const Eigen::VectorXd& beta_sample,
                                      const Eigen::VectorXd& responsibilities) {
  check_lengths(beta_sample, responsibilities);
  const Eigen::VectorXd base = prior_precision(past, responsibilities);
  const Eigen::Index m = base.size();
  Eigen::VectorXd out(m), pp = Eigen::VectorXd::Zero(m), pn = Eigen::VectorXd::Zero(m);
  estimate_into(past, base, candidate, beta_sample, out, pp, pn);
  return out;
}

Eigen::VectorXd hypothetical_estimate(const SensingDataset& dataset, const CandidateAction& candidate,
                                      const Eigen::VectorXd& beta_sample,
                                      const Eigen::VectorXd& responsibilities) {
  const auto past = accumulate_evidence(dataset, static_cast<int>(responsibilities.size()));
  return hypothetical_estimate(past, candidate, beta_sample, responsibilities);
}

int indicator(const Eigen::VectorXd& beta_sample, const Eigen::VectorXd& beta_hat) {
  check_lengths(beta_sample, beta_hat);
  if (beta_sample.size() == 0) return 0;
  const double half_hat = beta_hat.maxCoeff() / 2.0;
  const double half_sample = beta_sample.maxCoeff() / 2.0;
  for (Eigen::Index k = 0; k < beta_hat.size(); ++k)
    if ((beta_hat[k] > half_hat) != (beta_sample[k] > half_sample)) return 1;
  return 0;
}

LossBreakdown evaluate_loss(const Eigen::VectorXd& beta_sample, const Eigen::VectorXd& beta_hat,
                            double lambda) {
  check_lengths(beta_sample, beta_hat);
  LossBreakdown out;
  double sq = 0.0;
  for (Eigen::Index k = 0; k < beta_hat.size(); ++k) {
    const double r = beta_sample[k] - beta_hat[k];
    sq += r * r;
  }
  out.l2_term = std::sqrt(sq);
  out.indicator_term = indicator(beta_sample, beta_hat);
  out.lambda = lambda;
  out.total = out.l2_term + lambda * out.indicator_term;
  return out;
}

std::vector<LossBreakdown> evaluate_candidates_serial(const CellEvidence& past,
                                                      std::span<const CandidateAction> candidates,
                                                      const Eigen::VectorXd& beta_sample,
                                                      const Eigen::VectorXd& responsibilities,
                                                      double lambda) {
  check_lengths(beta_sample, responsibilities);
  const Eigen::VectorXd base = prior_precision(past, responsibilities);
  const Eigen::Index m = base.size();
  Eigen::VectorXd hat(m), pp = Eigen::VectorXd::Zero(m), pn = Eigen::VectorXd::Zero(m);
  std::vector<LossBreakdown> out(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i)
    out[i] = loss_for(past, base, candidates[i], i, beta_sample, lambda, hat, pp, pn);
  return out;
}

std::vector<LossBreakdown> evaluate_candidates(const CellEvidence& past,
                                               std::span<const CandidateAction> candidates,
                                               const Eigen::VectorXd& beta_sample,
                                               const Eigen::VectorXd& responsibilities,
                                               double lambda) {
  check_lengths(beta_sample, responsibilities);
  const Eigen::VectorXd base = prior_precision(past, responsibilities);
  const Eigen::Index m = base.size();
  const auto n = static_cast<std::ptrdiff_t>(candidates.size());
  std::vector<LossBreakdown> out(candidates.size());
  bool failed = false;
  Error first_error(ErrorCode::NumericalFailure, "");

#pragma omp parallel
  {
    Eigen::VectorXd hat(m), pp = Eigen::VectorXd::Zero(m), pn = Eigen::VectorXd::Zero(m);
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      try {
        const auto id = static_cast<std::size_t>(i);
        out[id] = loss_for(past, base, candidates[id], id, beta_sample, lambda, hat, pp, pn);
      } catch (const Error& e) {
#pragma omp critical
        {
          if (!failed) first_error = e;
          failed = true;
        }
      }
    }
  }
  if (failed) throw first_error;
  return out;
}

std::size_t pick_min_loss(std::span<const LossBreakdown> losses, Rng& rng) {
  if (losses.empty()) throw Error(ErrorCode::NoCandidates, "no losses to minimize");
  double best = std::numeric_limits<double>::infinity();
  for (const auto& l : losses) best = std::min(best, l.total);
  const double slack = 1e-12 * std::max(1.0, std::abs(best));
  std::vector<std::size_t> ties;
  for (std::size_t i = 0; i < losses.size(); ++i)
    if (losses[i].total <= best + slack) ties.push_back(i);
  if (ties.size() == 1) return ties.front();
  std::uniform_int_distribution<std::size_t> pick(0, ties.size() - 1);
  return ties[pick(rng)];
}

PlanResult select_action_with_sample(const CellEvidence& past, const ZoneMap& map,
                                     Point2 robot_position, const Eigen::VectorXd& beta_sample,
                                     const Eigen::VectorXd& responsibilities, Rng& rng,
                                     const GutsConfig& cfg) {
  auto candidates = enumerate_candidates(map, robot_position, cfg.c_plan);
  if (candidates.empty()) throw Error(ErrorCode::NoCandidates, "zone has no center-in cells");
  const auto losses = evaluate_candidates(past, candidates, beta_sample, responsibilities, cfg.lambda);
  const std::size_t best = pick_min_loss(losses, rng);
  return {std::move(candidates[best]), losses[best]};
}

PlanResult select_action(const CellEvidence& past, const ZoneMap& map, Point2 robot_position,
                         const BeliefPosterior& posterior, Rng& rng, const GutsConfig& cfg) {
  const Eigen::VectorXd sample = sample_posterior(posterior, rng);
  return select_action_with_sample(past, map, robot_position, sample, posterior.responsibilities, rng, cfg);
}

PlanResult select_action(const SensingDataset& dataset, const ZoneMap& map, Point2 robot_position,
                         const Eigen::VectorXd& responsibilities, Rng& rng, const GutsConfig& cfg) {
  const auto past = accumulate_evidence(dataset, map.grid().num_cells());
  const auto posterior = e_step(past, responsibilities);
  return select_action(past, map, robot_position, posterior, rng, cfg);
}

}  // namespace mrsearch
