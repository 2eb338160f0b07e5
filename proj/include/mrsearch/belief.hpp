#pragma once

#include <vector>

#include <Eigen/Dense>

#include "mrsearch/grid.hpp"
#include "mrsearch/random.hpp"

namespace mrsearch {

enum class RecordKind { SelfPosition, SelfDetection, PeerPosition, PeerGoalCell, PeerDetection };

const char* to_string(RecordKind kind);

/// One one-hot sensing row: the observation `y` applies to `cell` with
/// precision `confidence` (the observation variance is 1/confidence).
struct SensingRecord {
  int cell = 0;
  double y = 0.0;
  double confidence = 1.0;
  int source_robot = 0;
  RecordKind kind = RecordKind::SelfPosition;

  friend bool operator==(const SensingRecord&, const SensingRecord&) = default;
};

/// Append-only, timestamp-ordered list of sensing rows.
class SensingDataset {
 public:
  void append(const SensingRecord& r) { records_.push_back(r); }
  const std::vector<SensingRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  friend bool operator==(const SensingDataset&, const SensingDataset&) = default;

 private:
  std::vector<SensingRecord> records_;
};

/// Per-cell sufficient statistics of a one-hot dataset: the diagonal of
/// X^T W X (summed confidences) and X^T W y (confidence-weighted observations).
struct CellEvidence {
  Eigen::VectorXd precision;
  Eigen::VectorXd weighted_obs;
};

/// Throws NonPositiveConfidence for c <= 0 and InvalidCell for out-of-grid rows.
CellEvidence accumulate_evidence(const SensingDataset& dataset, int num_cells);

struct EmConfig {
  int max_iters = 100;
  double tol = 1e-6;
  double a = 0.1;
  double b = 1.0;
  double initial_gamma = 1.0;
};

/// Gaussian posterior N(mean, covariance) over the flattened grid together with
/// the responsibilities (prior variances) that produced it.
struct BeliefPosterior {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  Eigen::VectorXd responsibilities;
};

/// V = (Gamma^-1 + X^T W X)^-1, mu = V X^T W y for fixed responsibilities.
BeliefPosterior e_step(const CellEvidence& evidence, const Eigen::VectorXd& responsibilities);

/// Alternates e_step and gamma_update until max |delta gamma| < tol or
/// max_iters E-steps have run. The returned responsibilities are the ones the
/// returned mean/covariance were computed with.
BeliefPosterior em_posterior(const SensingDataset& dataset, const GridSpec& grid,
                             const EmConfig& cfg = {});
BeliefPosterior em_posterior(const CellEvidence& evidence, const EmConfig& cfg = {});

/// gamma_m = (V_mm + mu_m^2 + 2b) / (1 + 2a)
Eigen::VectorXd gamma_update(const BeliefPosterior& posterior, double a, double b);

/// Draws mean + L z with L the Cholesky factor of the covariance. Escalates a
/// diagonal jitter 1e-12, 1e-10, 1e-8 before giving up with NumericalFailure.
Eigen::VectorXd sample_posterior(const BeliefPosterior& posterior, Rng& rng);

/// Cholesky factor with the jitter ladder applied; exposed for tests.
Eigen::MatrixXd jittered_cholesky(const Eigen::MatrixXd& covariance);

}  // namespace mrsearch
