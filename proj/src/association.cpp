#include "immortal/association.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace immortal
{

double default_gate(SimilarityMetric metric)
{
  return metric == SimilarityMetric::IoU3D ? 0.1 : -0.5;
}

void AssocConfig::validate() const
{
  const double lo = metric == SimilarityMetric::IoU3D ? 0.0 : -1.0;
  if (!std::isfinite(gate) || gate < lo || gate > 1.0) {
    throw std::invalid_argument("AssocConfig: gate outside the metric's range");
  }
}

double similarity(const Box3D& a, const Box3D& b, SimilarityMetric metric)
{
  return metric == SimilarityMetric::IoU3D ? iou3d(a, b) : giou3d(a, b);
}

Eigen::MatrixXd similarity_matrix(const std::vector<Box3D>& dets, const std::vector<Box3D>& preds,
                                  const AssocConfig& cfg)
{
  Eigen::MatrixXd m(dets.size(), preds.size());
  for (std::size_t i = 0; i < dets.size(); ++i) {
    for (std::size_t j = 0; j < preds.size(); ++j) {
      m(i, j) = similarity(dets[i], preds[j], cfg.metric);
    }
  }
  return m;
}

double similarity_to_cost(double s, SimilarityMetric metric)
{
  return metric == SimilarityMetric::IoU3D ? 1.0 - s : 1.0 - (s + 1.0) / 2.0;
}

std::vector<IndexPair> hungarian(const Eigen::MatrixXd& cost)
{
  if (cost.rows() == 0 || cost.cols() == 0) {
    return {};
  }
  if (!cost.allFinite()) {
    throw std::invalid_argument("hungarian: cost matrix has non-finite entries");
  }
  if (cost.rows() > cost.cols()) {
    auto pairs = hungarian(cost.transpose());
    for (auto& [r, c] : pairs) {
      std::swap(r, c);
    }
    std::sort(pairs.begin(), pairs.end());
    return pairs;
  }

  // rows <= cols. Padding the matrix to square with constant rows would not
  // change which real pairs are optimal, so the padding rows are skipped and
  // the solver runs in O(rows^2 * cols).
  const auto n = static_cast<std::size_t>(cost.rows());
  const auto m = static_cast<std::size_t>(cost.cols());
  auto at = [&](std::size_t i, std::size_t j) {
    return cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  };

  // 1-based potentials formulation; column 0 is a virtual source.
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0), minv(m + 1);
  std::vector<std::size_t> match_col(m + 1, 0), way(m + 1, 0);
  std::vector<char> used(m + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    match_col[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match_col[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) {
          continue;
        }
        const double cur = at(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[match_col[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match_col[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match_col[j0] = match_col[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<IndexPair> out;
  out.reserve(n);
  for (std::size_t j = 1; j <= m; ++j) {
    if (match_col[j] != 0) {
      out.emplace_back(match_col[j] - 1, j - 1);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace
{

// Indices to keep along one axis: every line with some overlap, plus at most
// `spare` lines with none. Lines with no overlap (IoU exactly 0) all carry the
// worst possible cost and are interchangeable, so `spare` = size of the other
// axis is enough to preserve the optimum.
std::vector<std::size_t> keep_lines(const Eigen::MatrixXd& sim, bool columns, std::size_t spare)
{
  const Eigen::Index count = columns ? sim.cols() : sim.rows();
  std::vector<std::size_t> keep;
  std::size_t empty_kept = 0;
  for (Eigen::Index k = 0; k < count; ++k) {
    const bool any = columns ? (sim.col(k).array() > 0.0).any() : (sim.row(k).array() > 0.0).any();
    if (any || empty_kept < spare) {
      keep.push_back(static_cast<std::size_t>(k));
      empty_kept += any ? 0 : 1;
    }
  }
  return keep;
}

}  // namespace

AssociationResult associate_from_similarity(const Eigen::MatrixXd& sim, const AssocConfig& cfg)
{
  const auto p = static_cast<std::size_t>(sim.rows());
  const auto q = static_cast<std::size_t>(sim.cols());

  std::vector<std::size_t> rows(p), cols(q);
  std::iota(rows.begin(), rows.end(), 0);
  std::iota(cols.begin(), cols.end(), 0);
  if (cfg.metric == SimilarityMetric::IoU3D) {
    rows = keep_lines(sim, false, q);
    cols = keep_lines(sim, true, p);
  }
  Eigen::MatrixXd cost(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      cost(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = similarity_to_cost(
          sim(static_cast<Eigen::Index>(rows[r]), static_cast<Eigen::Index>(cols[c])), cfg.metric);
    }
  }

  std::vector<bool> det_used(p, false), trk_used(q, false);
  AssociationResult result;
  for (const auto& [r, c] : hungarian(cost)) {
    const std::size_t i = rows[r];
    const std::size_t j = cols[c];
    if (sim(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) < cfg.gate) {
      continue;
    }
    result.matched.emplace_back(i, j);
    det_used[i] = true;
    trk_used[j] = true;
  }
  for (std::size_t i = 0; i < p; ++i) {
    if (!det_used[i]) {
      result.unmatched_detections.push_back(i);
    }
  }
  for (std::size_t j = 0; j < q; ++j) {
    if (!trk_used[j]) {
      result.unmatched_tracklets.push_back(j);
    }
  }
  return result;
}

AssociationResult associate(const std::vector<Box3D>& dets, const std::vector<Box3D>& preds,
                            const AssocConfig& cfg)
{
  return associate_from_similarity(similarity_matrix(dets, preds, cfg), cfg);
}

}  // namespace immortal
