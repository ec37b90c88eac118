// association.hpp: detection-to-prediction bipartite matching

#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "immortal/geometry.hpp"

namespace immortal
{

enum class SimilarityMetric
{
  IoU3D,
  GIoU3D,
};

/// Default gate for a metric: 0.1 for IoU, -0.5 for GIoU.
double default_gate(SimilarityMetric metric);

struct AssocConfig
{
  SimilarityMetric metric = SimilarityMetric::IoU3D;
  double gate = 0.1;

  void validate() const;
};

using IndexPair = std::pair<std::size_t, std::size_t>;

struct AssociationResult
{
  std::vector<IndexPair> matched;  ///< (detection index, tracklet index), sorted by detection
  std::vector<std::size_t> unmatched_detections;
  std::vector<std::size_t> unmatched_tracklets;
};

double similarity(const Box3D& a, const Box3D& b, SimilarityMetric metric);

/// p x q matrix of metric(dets[i], preds[j]).
Eigen::MatrixXd similarity_matrix(const std::vector<Box3D>& dets, const std::vector<Box3D>& preds,
                                  const AssocConfig& cfg);

/// Monotone map from similarity to assignment cost: 1 - s for IoU, 1 - (s + 1) / 2 for GIoU.
double similarity_to_cost(double s, SimilarityMetric metric);

/**
 * @brief Minimum-cost assignment on a rectangular matrix (Kuhn-Munkres with
 * potentials, O(k^2 n) for k = min(rows, cols), n = max(rows, cols)).
 *
 * Returns min(rows, cols) (row, col) pairs sorted by row, the same optimum as
 * padding the matrix to square with a constant sentinel.
 */
std::vector<IndexPair> hungarian(const Eigen::MatrixXd& cost);

/// Hungarian on the cost transform, then drop pairs whose similarity is below the gate.
AssociationResult associate(const std::vector<Box3D>& dets, const std::vector<Box3D>& preds,
                            const AssocConfig& cfg);

/// Same, starting from a precomputed similarity matrix. With IoU, rows and
/// columns with no overlap at all are interchangeable; only as many of them as
/// could be assigned are handed to the solver.
AssociationResult associate_from_similarity(const Eigen::MatrixXd& sim, const AssocConfig& cfg);

}  // namespace immortal
