#include "mrsearch/belief.hpp"

#include <array>
#include <cmath>
#include <random>
#include <string>

#include "mrsearch/error.hpp"

namespace mrsearch {

namespace {

constexpr std::array<double, 4> kJitterLadder{0.0, 1e-12, 1e-10, 1e-8};

bool is_diagonal(const Eigen::MatrixXd& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (i != j && m(i, j) != 0.0) return false;
  return true;
}

}  // namespace

const char* to_string(RecordKind kind) {
  switch (kind) {
    case RecordKind::SelfPosition: return "self_position";
    case RecordKind::SelfDetection: return "self_detection";
    case RecordKind::PeerPosition: return "peer_position";
    case RecordKind::PeerGoalCell: return "peer_goal_cell";
    case RecordKind::PeerDetection: return "peer_detection";
  }
  return "unknown";
}

CellEvidence accumulate_evidence(const SensingDataset& dataset, int num_cells) {
  CellEvidence ev{Eigen::VectorXd::Zero(num_cells), Eigen::VectorXd::Zero(num_cells)};
  for (const auto& r : dataset.records()) {
    if (!(r.confidence > 0.0))
      throw Error(ErrorCode::NonPositiveConfidence,
                  "record for cell " + std::to_string(r.cell) + " has confidence " +
                      std::to_string(r.confidence));
    if (r.cell < 0 || r.cell >= num_cells)
      throw Error(ErrorCode::InvalidCell, "cell " + std::to_string(r.cell) + " outside grid");
    ev.precision[r.cell] += r.confidence;
    ev.weighted_obs[r.cell] += r.confidence * r.y;
  }
  return ev;
}

BeliefPosterior e_step(const CellEvidence& evidence, const Eigen::VectorXd& responsibilities) {
  const Eigen::Index m = responsibilities.size();
  if (evidence.precision.size() != m)
    throw Error(ErrorCode::NumericalFailure, "evidence and responsibilities differ in length");

  // One-hot rows make X^T W X diagonal, so the precision matrix is diagonal too.
  Eigen::VectorXd var(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const double gamma = responsibilities[k];
    if (!(gamma > 0.0))
      throw Error(ErrorCode::NumericalFailure, "responsibility " + std::to_string(k) + " not positive");
    const double base = 1.0 / gamma + evidence.precision[k];
    bool ok = false;
    for (double jitter : kJitterLadder) {
      const double p = base + jitter;
      if (p > 0.0 && std::isfinite(1.0 / p)) {
        var[k] = 1.0 / p;
        ok = true;
        break;
      }
    }
    if (!ok) throw Error(ErrorCode::NumericalFailure, "precision not invertible at cell " + std::to_string(k));
  }

  BeliefPosterior post;
  post.mean = var.cwiseProduct(evidence.weighted_obs);
  post.covariance = var.asDiagonal();
  post.responsibilities = responsibilities;
  return post;
}

Eigen::VectorXd gamma_update(const BeliefPosterior& posterior, double a, double b) {
  const double denom = 1.0 + 2.0 * a;
  if (denom == 0.0) throw Error(ErrorCode::NumericalFailure, "1 + 2a is zero");
  return (posterior.covariance.diagonal().array() + posterior.mean.array().square() + 2.0 * b) / denom;
}

BeliefPosterior em_posterior(const SensingDataset& dataset, const GridSpec& grid, const EmConfig& cfg) {
  return em_posterior(accumulate_evidence(dataset, grid.num_cells()), cfg);
}

BeliefPosterior em_posterior(const CellEvidence& evidence, const EmConfig& cfg) {
  if (cfg.max_iters < 1) throw Error(ErrorCode::InvalidConfig, "em.max_iters must be >= 1");
  Eigen::VectorXd gamma = Eigen::VectorXd::Constant(evidence.precision.size(), cfg.initial_gamma);

  BeliefPosterior post = e_step(evidence, gamma);
  for (int it = 1; it < cfg.max_iters; ++it) {
    Eigen::VectorXd next = gamma_update(post, cfg.a, cfg.b);
    const double change = (next - gamma).cwiseAbs().maxCoeff();
    gamma = std::move(next);
    post = e_step(evidence, gamma);
    if (change < cfg.tol) break;
  }
  return post;
}

Eigen::MatrixXd jittered_cholesky(const Eigen::MatrixXd& covariance) {
  const Eigen::Index m = covariance.rows();
  if (is_diagonal(covariance)) {
    for (double jitter : kJitterLadder) {
      const Eigen::VectorXd d = covariance.diagonal().array() + jitter;
      if ((d.array() > 0.0).all()) return Eigen::MatrixXd(d.cwiseSqrt().asDiagonal());
    }
    throw Error(ErrorCode::NumericalFailure, "covariance diagonal not positive after jitter");
  }
  const Eigen::MatrixXd sym = 0.5 * (covariance + covariance.transpose());
  for (double jitter : kJitterLadder) {
    Eigen::LLT<Eigen::MatrixXd> llt(sym + jitter * Eigen::MatrixXd::Identity(m, m));
    if (llt.info() == Eigen::Success) return llt.matrixL();
  }
  throw Error(ErrorCode::NumericalFailure, "Cholesky failed after jitter 1e-8");
}

Eigen::VectorXd sample_posterior(const BeliefPosterior& posterior, Rng& rng) {
  const Eigen::MatrixXd chol = jittered_cholesky(posterior.covariance);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd z(posterior.mean.size());
  for (Eigen::Index k = 0; k < z.size(); ++k) z[k] = normal(rng);
  if (is_diagonal(chol)) return posterior.mean + chol.diagonal().cwiseProduct(z);
  return posterior.mean + chol.triangularView<Eigen::Lower>() * z;
}

}  // namespace mrsearch
