#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mrsearch/action_model.hpp"
#include "mrsearch/belief.hpp"
#include "mrsearch/random.hpp"

namespace mrsearch {

struct LossBreakdown {
  double l2_term = 0.0;
  int indicator_term = 0;
  double lambda = 0.0;
  double total = 0.0;
  std::size_t candidate_id = 0;
};

struct GutsConfig {
  double lambda = 0.01;
  double c_plan = 1.0;
  EmConfig em{};
};

/// Expected estimate after executing `candidate` if the world were
/// `beta_sample`:  beta_hat = S (X^T W y + X_plan^T W_plan X_plan beta_sample)
/// with S the inverted diagonal of Gamma^-1 + X^T W X + X_plan^T W_plan X_plan.
Eigen::VectorXd hypothetical_estimate(const CellEvidence& past, const CandidateAction& candidate,
                                      const Eigen::VectorXd& beta_sample,
                                      const Eigen::VectorXd& responsibilities);
Eigen::VectorXd hypothetical_estimate(const SensingDataset& dataset,
                                      const CandidateAction& candidate,
                                      const Eigen::VectorXd& beta_sample,
                                      const Eigen::VectorXd& responsibilities);

/// 0 when the half-max thresholded supports of both vectors agree, else 1.
int indicator(const Eigen::VectorXd& beta_sample, const Eigen::VectorXd& beta_hat);

LossBreakdown evaluate_loss(const Eigen::VectorXd& beta_sample, const Eigen::VectorXd& beta_hat,
                            double lambda);

/// Loss of every candidate against one posterior sample. The serial version
/// is the reference; the default one splits candidates across OpenMP threads
/// and must return bit-identical results.
std::vector<LossBreakdown> evaluate_candidates_serial(const CellEvidence& past,
                                                      std::span<const CandidateAction> candidates,
                                                      const Eigen::VectorXd& beta_sample,
                                                      const Eigen::VectorXd& responsibilities,
                                                      double lambda);
std::vector<LossBreakdown> evaluate_candidates(const CellEvidence& past,
                                               std::span<const CandidateAction> candidates,
                                               const Eigen::VectorXd& beta_sample,
                                               const Eigen::VectorXd& responsibilities,
                                               double lambda);

/// Index of the minimum-total loss; equal losses are resolved by a uniform
/// draw from `rng` (no draw is made when the minimum is unique).
std::size_t pick_min_loss(std::span<const LossBreakdown> losses, Rng& rng);

struct PlanResult {
  CandidateAction action;
  LossBreakdown loss;
};

/// Thompson step with a given sample. Throws NoCandidates for an empty zone.
PlanResult select_action_with_sample(const CellEvidence& past, const ZoneMap& map,
                                     Point2 robot_position, const Eigen::VectorXd& beta_sample,
                                     const Eigen::VectorXd& responsibilities, Rng& rng,
                                     const GutsConfig& cfg);

/// Thompson step from a posterior: draw one sample, then minimize the loss.
PlanResult select_action(const CellEvidence& past, const ZoneMap& map, Point2 robot_position,
                         const BeliefPosterior& posterior, Rng& rng, const GutsConfig& cfg);

/// Thompson step from raw data and fixed responsibilities.
PlanResult select_action(const SensingDataset& dataset, const ZoneMap& map,
                         Point2 robot_position, const Eigen::VectorXd& responsibilities, Rng& rng,
                         const GutsConfig& cfg);

}  // namespace mrsearch
