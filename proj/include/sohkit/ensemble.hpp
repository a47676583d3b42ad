#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace sohkit::ensemble {

struct FeatureMatrix {
  std::vector<std::string> feature_names;
  std::vector<double> values;  // row-major, n_rows x n_features
  std::vector<double> target;
  std::size_t n_rows = 0;
  std::size_t n_features = 0;

  double at(std::size_t row, std::size_t col) const {
    return values[row * n_features + col];
  }
  std::span<const double> row(std::size_t r) const {
    return {values.data() + r * n_features, n_features};
  }
  void add_row(std::span<const double> x, double y);
};

// Flattened binary tree. Internal nodes route x[feature] <= threshold to
// `left`; leaves have feature == -1 and predict `value` (the mean of their
// training region). Per-node training SSE and sample counts are retained for
// cost-complexity pruning.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;
  std::size_t n_samples = 0;
  double sse = 0.0;
};

struct RegressionTree {
  std::vector<TreeNode> nodes;  // node 0 is the root
  std::size_t n_features = 0;
  double alpha = 0.0;  // pruning parameter this tree was pruned at

  bool empty() const { return nodes.empty(); }
  std::size_t n_leaves() const;
  double predict_row(std::span<const double> x) const;
};

struct CartParams {
  int max_depth = -1;        // -1: grow to pure regions
  std::size_t min_leaf = 1;  // minimum samples on each side of a split
};

// Two candidate split costs within this relative tolerance are treated as
// tied and resolved by lowest feature index, then lowest threshold.
inline constexpr double kSplitCostTol = 1e-9;

RegressionTree fit_cart(const FeatureMatrix& data, const CartParams& params = {});

// Weakest-link cost-complexity pruning at complexity alpha >= 0; alpha == 0
// returns the tree unchanged, alpha == +inf collapses it to the root.
RegressionTree prune(const RegressionTree& tree, double alpha);

enum class EnsembleKind { bagging, random_forest, gbm };

struct BaggingParams {
  std::size_t n_trees = 100;
  std::uint64_t seed = 0;
  bool bootstrap = true;
  int feature_subsample = 0;  // >0: features sampled per split (random forest)
  CartParams tree;
};

struct GbmParams {
  std::size_t n_stages = 200;
  double learning_rate = 0.1;
  int max_depth = 3;
  std::size_t min_leaf = 1;
  std::uint64_t seed = 0;
};

struct Ensemble {
  EnsembleKind kind = EnsembleKind::bagging;
  std::vector<RegressionTree> trees;
  std::uint64_t seed = 0;
  bool bootstrap = true;
  int feature_subsample = 0;
  double learning_rate = 0.0;  // gbm only
  double base = 0.0;           // gbm stage-0 constant
  std::size_t n_features = 0;

  double predict_row(std::span<const double> x) const;
};

// Trees are fitted in parallel from per-tree derived seeds; the result is
// identical to sequential execution for any thread count.
Ensemble fit_bagging(const FeatureMatrix& data, const BaggingParams& params);
Ensemble fit_gbm(const FeatureMatrix& data, const GbmParams& params);

std::vector<double> predict(const RegressionTree& tree,
                            const FeatureMatrix& rows);
std::vector<double> predict(const Ensemble& model, const FeatureMatrix& rows);

// Normalized impurity-decrease importance; flags the all-leaves case (no
// splits anywhere) in which all scores are zero.
std::vector<double> feature_importance(const Ensemble& model,
                                       bool* no_splits = nullptr);

// Pearson correlations; constant columns get zero off-diagonals and a flag.
std::vector<std::vector<double>> correlation_matrix(
    const FeatureMatrix& data, std::vector<bool>* constant_flags = nullptr);

nlohmann::json to_json(const Ensemble& model);
Ensemble ensemble_from_json(const nlohmann::json& j);

}  // namespace sohkit::ensemble
