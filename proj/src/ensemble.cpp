#include "sohkit/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <nlohmann/json.hpp>

#include "sohkit/error.hpp"
#include "sohkit/parallel.hpp"
#include "sohkit/rng.hpp"

namespace sohkit::ensemble {

void FeatureMatrix::add_row(std::span<const double> x, double y) {
  if (n_features == 0) n_features = x.size();
  if (x.size() != n_features)
    raise(Errc::width_mismatch, "row width does not match feature count");
  values.insert(values.end(), x.begin(), x.end());
  target.push_back(y);
  ++n_rows;
}

std::size_t RegressionTree::n_leaves() const {
  std::size_t c = 0;
  for (const auto& n : nodes)
    if (n.feature < 0) ++c;
  return c;
}

double RegressionTree::predict_row(std::span<const double> x) const {
  int at = 0;
  while (nodes[at].feature >= 0) {
    const TreeNode& n = nodes[at];
    at = (x[n.feature] <= n.threshold) ? n.left : n.right;
  }
  return nodes[at].value;
}

double Ensemble::predict_row(std::span<const double> x) const {
  if (kind == EnsembleKind::gbm) {
    double acc = base;
    for (const auto& t : trees) acc += learning_rate * t.predict_row(x);
    return acc;
  }
  double acc = 0.0;
  for (const auto& t : trees) acc += t.predict_row(x);
  return acc / static_cast<double>(trees.size());
}

namespace {

struct SplitChoice {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double cost = 0.0;
};

struct Builder {
  const FeatureMatrix& data;
  const std::vector<double>& y;  // targets the tree is fitted to
  CartParams params;
  int feature_subsample = 0;
  rng::Xoshiro256* rng = nullptr;
  std::vector<TreeNode> nodes;

  // candidate features for one node (random-forest subsampling draws from
  // the tree RNG in DFS order, keeping fits schedule-independent)
  std::vector<int> candidate_features() {
    const int p = static_cast<int>(data.n_features);
    std::vector<int> feats(p);
    std::iota(feats.begin(), feats.end(), 0);
    if (feature_subsample > 0 && feature_subsample < p && rng) {
      for (int i = 0; i < feature_subsample; ++i) {
        const int j = i + static_cast<int>(rng->below(p - i));
        std::swap(feats[i], feats[j]);
      }
      feats.resize(feature_subsample);
      std::sort(feats.begin(), feats.end());
    }
    return feats;
  }

  SplitChoice best_split(const std::vector<std::size_t>& idx, double node_mean,
                         double node_sse) {
    const std::size_t n = idx.size();
    const double tol = kSplitCostTol * (1.0 + node_sse);
    SplitChoice best;
    std::vector<std::pair<double, double>> xy(n);  // (feature value, y - mean)
    for (int j : candidate_features()) {
      for (std::size_t i = 0; i < n; ++i)
        xy[i] = {data.at(idx[i], j), y[idx[i]] - node_mean};
      std::sort(xy.begin(), xy.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      double s1 = 0.0, s2 = 0.0;
      double total1 = 0.0, total2 = 0.0;
      for (const auto& [xv, yv] : xy) {
        total1 += yv;
        total2 += yv * yv;
      }
      for (std::size_t i = 0; i + 1 < n; ++i) {
        s1 += xy[i].second;
        s2 += xy[i].second * xy[i].second;
        const std::size_t nl = i + 1, nr = n - nl;
        if (nl < params.min_leaf || nr < params.min_leaf) continue;
        const double a = xy[i].first, b = xy[i + 1].first;
        if (!(a < b)) continue;  // no boundary between equal values
        const double sse_l = s2 - s1 * s1 / static_cast<double>(nl);
        const double sse_r = (total2 - s2) - (total1 - s1) * (total1 - s1) /
                                                 static_cast<double>(nr);
        const double cost = sse_l + sse_r;
        if (!best.found || cost < best.cost - tol) {
          double mid = a + (b - a) / 2.0;
          if (!(mid < b)) mid = a;  // adjacent doubles: keep routing exact
          best.found = true;
          best.feature = j;
          best.threshold = mid;
          best.cost = cost;
        }
      }
    }
    if (best.found && !(best.cost < node_sse - tol)) best.found = false;
    return best;
  }

  int build(std::vector<std::size_t> idx, int depth) {
    const std::size_t n = idx.size();
    double sum = 0.0;
    for (std::size_t i : idx) sum += y[i];
    const double mean = sum / static_cast<double>(n);
    double sse = 0.0;
    double ymin = y[idx[0]], ymax = y[idx[0]];
    for (std::size_t i : idx) {
      sse += (y[i] - mean) * (y[i] - mean);
      ymin = std::min(ymin, y[i]);
      ymax = std::max(ymax, y[i]);
    }

    const int node_id = static_cast<int>(nodes.size());
    nodes.emplace_back();
    nodes[node_id].n_samples = n;
    nodes[node_id].sse = sse;
    nodes[node_id].value = (ymin == ymax) ? ymin : mean;

    const bool depth_capped = params.max_depth >= 0 && depth >= params.max_depth;
    if (n < 2 * params.min_leaf || ymin == ymax || depth_capped)
      return node_id;

    SplitChoice split = best_split(idx, mean, sse);
    if (!split.found) return node_id;

    std::vector<std::size_t> left, right;
    left.reserve(n);
    right.reserve(n);
    for (std::size_t i : idx) {
      if (data.at(i, split.feature) <= split.threshold)
        left.push_back(i);
      else
        right.push_back(i);
    }
    idx.clear();
    idx.shrink_to_fit();
    nodes[node_id].feature = split.feature;
    nodes[node_id].threshold = split.threshold;
    const int l = build(std::move(left), depth + 1);
    nodes[node_id].left = l;
    const int r = build(std::move(right), depth + 1);
    nodes[node_id].right = r;
    return node_id;
  }
};

RegressionTree fit_tree_on(const FeatureMatrix& data,
                           const std::vector<double>& targets,
                           const std::vector<std::size_t>& idx,
                           const CartParams& params, int feature_subsample,
                           rng::Xoshiro256* rng) {
  Builder b{data, targets, params, feature_subsample, rng, {}};
  std::vector<std::size_t> indices = idx;
  b.build(std::move(indices), 0);
  RegressionTree tree;
  tree.nodes = std::move(b.nodes);
  tree.n_features = data.n_features;
  return tree;
}

}  // namespace

RegressionTree fit_cart(const FeatureMatrix& data, const CartParams& params) {
  if (data.n_rows == 0) raise(Errc::empty_data, "no rows to fit");
  std::vector<std::size_t> idx(data.n_rows);
  std::iota(idx.begin(), idx.end(), 0);
  return fit_tree_on(data, data.target, idx, params, 0, nullptr);
}

namespace {

struct SubtreeStats {
  std::size_t leaves = 0;
  double leaf_sse = 0.0;
};

SubtreeStats subtree_stats(const std::vector<TreeNode>& nodes, int at) {
  const TreeNode& n = nodes[at];
  if (n.feature < 0) return {1, n.sse};
  SubtreeStats l = subtree_stats(nodes, n.left);
  SubtreeStats r = subtree_stats(nodes, n.right);
  return {l.leaves + r.leaves, l.leaf_sse + r.leaf_sse};
}

int copy_reachable(const std::vector<TreeNode>& src, int at,
                   std::vector<TreeNode>& dst) {
  const int id = static_cast<int>(dst.size());
  dst.push_back(src[at]);
  if (src[at].feature >= 0) {
    const int l = copy_reachable(src, src[at].left, dst);
    dst[id].left = l;
    const int r = copy_reachable(src, src[at].right, dst);
    dst[id].right = r;
  }
  return id;
}

}  // namespace

RegressionTree prune(const RegressionTree& tree, double alpha) {
  if (tree.empty()) return tree;
  std::vector<TreeNode> nodes = tree.nodes;
  // weakest-link: repeatedly collapse the internal node with the smallest
  // per-node alpha* = (sse - subtree leaf sse) / (leaves - 1)
  while (true) {
    int weakest = -1;
    double weakest_g = std::numeric_limits<double>::infinity();
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
      if (nodes[i].feature < 0) continue;
      SubtreeStats st = subtree_stats(nodes, i);
      const double g = (nodes[i].sse - st.leaf_sse) /
                       static_cast<double>(st.leaves - 1);
      if (g < weakest_g || (g == weakest_g && i > weakest)) {
        weakest_g = g;
        weakest = i;
      }
    }
    if (weakest < 0 || weakest_g > alpha) break;
    nodes[weakest].feature = -1;
    nodes[weakest].left = nodes[weakest].right = -1;
  }
  RegressionTree out;
  out.n_features = tree.n_features;
  out.alpha = alpha;
  copy_reachable(nodes, 0, out.nodes);
  return out;
}

Ensemble fit_bagging(const FeatureMatrix& data, const BaggingParams& params) {
  if (data.n_rows < 2) raise(Errc::empty_data, "need at least 2 rows");
  if (params.n_trees == 0) raise(Errc::invalid_config, "n_trees must be >= 1");
  Ensemble model;
  model.kind = params.feature_subsample > 0 ? EnsembleKind::random_forest
                                            : EnsembleKind::bagging;
  model.seed = params.seed;
  model.bootstrap = params.bootstrap;
  model.feature_subsample = params.feature_subsample;
  model.n_features = data.n_features;
  model.trees.resize(params.n_trees);
  const std::size_t n = data.n_rows;
  par::for_each_index(
      static_cast<std::int64_t>(params.n_trees), [&](std::int64_t t) {
        rng::Xoshiro256 gen(rng::derive_seed(params.seed,
                                             static_cast<std::uint64_t>(t)));
        std::vector<std::size_t> idx(n);
        if (params.bootstrap) {
          for (std::size_t i = 0; i < n; ++i)
            idx[i] = static_cast<std::size_t>(gen.below(n));
        } else {
          std::iota(idx.begin(), idx.end(), 0);
        }
        model.trees[t] = fit_tree_on(data, data.target, idx, params.tree,
                                     params.feature_subsample, &gen);
      });
  return model;
}

Ensemble fit_gbm(const FeatureMatrix& data, const GbmParams& params) {
  if (data.n_rows < 2) raise(Errc::empty_data, "need at least 2 rows");
  if (params.n_stages == 0) raise(Errc::invalid_config, "n_stages must be >= 1");
  Ensemble model;
  model.kind = EnsembleKind::gbm;
  model.seed = params.seed;
  model.learning_rate = params.learning_rate;
  model.n_features = data.n_features;
  double base = 0.0;
  for (double v : data.target) base += v;
  base /= static_cast<double>(data.n_rows);
  model.base = base;

  std::vector<std::size_t> idx(data.n_rows);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<double> residual(data.n_rows);
  for (std::size_t i = 0; i < data.n_rows; ++i)
    residual[i] = data.target[i] - base;

  CartParams tp;
  tp.max_depth = params.max_depth;
  tp.min_leaf = params.min_leaf;
  model.trees.reserve(params.n_stages);
  for (std::size_t s = 0; s < params.n_stages; ++s) {
    RegressionTree tree = fit_tree_on(data, residual, idx, tp, 0, nullptr);
    for (std::size_t i = 0; i < data.n_rows; ++i)
      residual[i] -= params.learning_rate * tree.predict_row(data.row(i));
    model.trees.push_back(std::move(tree));
  }
  return model;
}

std::vector<double> predict(const RegressionTree& tree,
                            const FeatureMatrix& rows) {
  if (rows.n_features != tree.n_features)
    raise(Errc::width_mismatch, "row width differs from training width");
  std::vector<double> out(rows.n_rows);
  for (std::size_t i = 0; i < rows.n_rows; ++i)
    out[i] = tree.predict_row(rows.row(i));
  return out;
}

std::vector<double> predict(const Ensemble& model, const FeatureMatrix& rows) {
  if (rows.n_features != model.n_features)
    raise(Errc::width_mismatch, "row width differs from training width");
  std::vector<double> out(rows.n_rows);
  for (std::size_t i = 0; i < rows.n_rows; ++i)
    out[i] = model.predict_row(rows.row(i));
  return out;
}

std::vector<double> feature_importance(const Ensemble& model,
                                       bool* no_splits) {
  std::vector<double> gain(model.n_features, 0.0);
  for (const auto& tree : model.trees) {
    for (const auto& n : tree.nodes) {
      if (n.feature < 0) continue;
      const double child_sse =
          tree.nodes[n.left].sse + tree.nodes[n.right].sse;
      gain[n.feature] += std::max(0.0, n.sse - child_sse);
    }
  }
  double total = 0.0;
  for (double g : gain) total += g;
  if (no_splits) *no_splits = (total <= 0.0);
  if (total <= 0.0) return gain;  // all zeros, flagged
  for (double& g : gain) g /= total;
  return gain;
}

std::vector<std::vector<double>> correlation_matrix(
    const FeatureMatrix& data, std::vector<bool>* constant_flags) {
  const std::size_t p = data.n_features;
  const std::size_t n = data.n_rows;
  std::vector<double> mean(p, 0.0), sd(p, 0.0);
  std::vector<bool> constant(p, false);
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = 0; i < n; ++i) mean[j] += data.at(i, j);
    mean[j] /= static_cast<double>(n);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = data.at(i, j) - mean[j];
      s += d * d;
    }
    sd[j] = std::sqrt(s);
    constant[j] = sd[j] <= 1e-12 * (std::fabs(mean[j]) + 1.0);
  }
  std::vector<std::vector<double>> r(p, std::vector<double>(p, 0.0));
  for (std::size_t a = 0; a < p; ++a) {
    r[a][a] = 1.0;
    for (std::size_t b = a + 1; b < p; ++b) {
      if (constant[a] || constant[b]) continue;  // leave 0, flagged
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        s += (data.at(i, a) - mean[a]) * (data.at(i, b) - mean[b]);
      r[a][b] = r[b][a] = s / (sd[a] * sd[b]);
    }
  }
  if (constant_flags) *constant_flags = constant;
  return r;
}

namespace {

nlohmann::json tree_to_json(const RegressionTree& t) {
  nlohmann::json j;
  std::vector<int> feature, left, right;
  std::vector<double> threshold, value, sse;
  std::vector<std::size_t> n_samples;
  for (const auto& n : t.nodes) {
    feature.push_back(n.feature);
    threshold.push_back(n.threshold);
    left.push_back(n.left);
    right.push_back(n.right);
    value.push_back(n.value);
    sse.push_back(n.sse);
    n_samples.push_back(n.n_samples);
  }
  j["feature"] = feature;
  j["threshold"] = threshold;
  j["left"] = left;
  j["right"] = right;
  j["value"] = value;
  j["sse"] = sse;
  j["n"] = n_samples;
  j["alpha"] = t.alpha;
  return j;
}

RegressionTree tree_from_json(const nlohmann::json& j, std::size_t n_features) {
  RegressionTree t;
  t.n_features = n_features;
  t.alpha = j["alpha"];
  const auto& feature = j["feature"];
  const std::size_t n = feature.size();
  t.nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    t.nodes[i].feature = j["feature"][i];
    t.nodes[i].threshold = j["threshold"][i];
    t.nodes[i].left = j["left"][i];
    t.nodes[i].right = j["right"][i];
    t.nodes[i].value = j["value"][i];
    t.nodes[i].sse = j["sse"][i];
    t.nodes[i].n_samples = j["n"][i];
  }
  return t;
}

}  // namespace

nlohmann::json to_json(const Ensemble& model) {
  nlohmann::json j;
  j["format"] = "sohkit-ensemble-v1";
  switch (model.kind) {
    case EnsembleKind::bagging: j["kind"] = "bagging"; break;
    case EnsembleKind::random_forest: j["kind"] = "random_forest"; break;
    case EnsembleKind::gbm: j["kind"] = "gbm"; break;
  }
  j["seed"] = model.seed;
  j["bootstrap"] = model.bootstrap;
  j["feature_subsample"] = model.feature_subsample;
  j["learning_rate"] = model.learning_rate;
  j["base"] = model.base;
  j["n_features"] = model.n_features;
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& t : model.trees) trees.push_back(tree_to_json(t));
  j["trees"] = std::move(trees);
  return j;
}

Ensemble ensemble_from_json(const nlohmann::json& j) {
  if (!j.contains("format") || j["format"] != "sohkit-ensemble-v1")
    raise(Errc::bad_config, "not a sohkit ensemble document");
  Ensemble m;
  const std::string kind = j["kind"];
  if (kind == "bagging") m.kind = EnsembleKind::bagging;
  else if (kind == "random_forest") m.kind = EnsembleKind::random_forest;
  else if (kind == "gbm") m.kind = EnsembleKind::gbm;
  else raise(Errc::bad_config, "unknown ensemble kind: " + kind);
  m.seed = j["seed"];
  m.bootstrap = j["bootstrap"];
  m.feature_subsample = j["feature_subsample"];
  m.learning_rate = j["learning_rate"];
  m.base = j["base"];
  m.n_features = j["n_features"];
  for (const auto& tj : j["trees"])
    m.trees.push_back(tree_from_json(tj, m.n_features));
  return m;
}

}  // namespace sohkit::ensemble
