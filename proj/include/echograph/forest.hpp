#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "echograph/error.hpp"
#include "echograph/format.hpp"
#include "echograph/parallel.hpp"
#include "echograph/random.hpp"

namespace echograph::forest {

/// Row-major dense feature matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    Matrix select_rows(const std::vector<std::size_t>& rows) const {
        Matrix m(rows.size(), cols_);
        for (std::size_t i = 0; i < rows.size(); ++i)
            std::copy_n(data_.begin() + static_cast<std::ptrdiff_t>(rows[i] * cols_), cols_,
                        m.data_.begin() + static_cast<std::ptrdiff_t>(i * cols_));
        return m;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

/// One CART tree in flat arrays. feature[i] < 0 marks a leaf.
struct Tree {
    std::vector<std::int32_t> feature;
    std::vector<double> threshold;
    std::vector<std::int32_t> left, right;
    std::vector<double> class_frequency; // node-major, n_classes per node

    std::size_t node_count() const { return feature.size(); }

    std::size_t leaf_for(std::span<const double> x) const {
        std::size_t node = 0;
        while (feature[node] >= 0)
            node = static_cast<std::size_t>(x[static_cast<std::size_t>(feature[node])] <= threshold[node] ? left[node]
                                                                                                          : right[node]);
        return node;
    }
};

struct ForestOptions {
    std::size_t n_trees = 200;
    std::size_t max_depth = 0;          // 0 = unlimited
    std::size_t features_per_split = 0; // 0 = floor(sqrt(feature count)), at least 1
    std::size_t min_samples_split = 2;
    std::uint64_t seed = 1;
    unsigned threads = 1;
};

namespace detail {

inline double gini(const std::vector<double>& counts, double total) {
    if (total <= 0) return 0.0;
    double s = 0.0;
    for (double c : counts) s += (c / total) * (c / total);
    return 1.0 - s;
}

struct Split {
    bool found = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    double impurity = 0.0; // weighted child impurity
};

class TreeGrower {
public:
    TreeGrower(const Matrix& x, const std::vector<int>& y, std::size_t n_classes, const ForestOptions& opt,
               std::size_t mtry, Rng rng)
        : x_(x), y_(y), n_classes_(n_classes), opt_(opt), mtry_(mtry), rng_(rng) {
        feature_order_.resize(x.cols());
        std::iota(feature_order_.begin(), feature_order_.end(), 0);
    }

    Tree grow(std::vector<std::size_t> samples) {
        struct Pending {
            std::size_t node;
            std::vector<std::size_t> samples;
            std::size_t depth;
        };
        Tree tree;
        std::vector<Pending> stack;
        stack.push_back({new_node(tree), std::move(samples), 0});
        while (!stack.empty()) {
            Pending job = std::move(stack.back());
            stack.pop_back();
            std::vector<double> counts(n_classes_, 0.0);
            for (auto s : job.samples) counts[static_cast<std::size_t>(y_[s])] += 1.0;
            const double total = static_cast<double>(job.samples.size());
            for (std::size_t c = 0; c < n_classes_; ++c)
                tree.class_frequency[job.node * n_classes_ + c] = counts[c] / total;

            const bool pure = std::count_if(counts.begin(), counts.end(), [](double c) { return c > 0; }) <= 1;
            const bool depth_limited = opt_.max_depth != 0 && job.depth >= opt_.max_depth;
            if (pure || depth_limited || job.samples.size() < opt_.min_samples_split) continue;

            const Split split = best_split(job.samples, counts);
            if (!split.found) continue;

            std::vector<std::size_t> left, right;
            for (auto s : job.samples) (x_(s, split.feature) <= split.threshold ? left : right).push_back(s);
            const auto l = new_node(tree);
            const auto r = new_node(tree);
            tree.feature[job.node] = static_cast<std::int32_t>(split.feature);
            tree.threshold[job.node] = split.threshold;
            tree.left[job.node] = static_cast<std::int32_t>(l);
            tree.right[job.node] = static_cast<std::int32_t>(r);
            stack.push_back({r, std::move(right), job.depth + 1});
            stack.push_back({l, std::move(left), job.depth + 1});
        }
        return tree;
    }

private:
    std::size_t new_node(Tree& t) const {
        t.feature.push_back(-1);
        t.threshold.push_back(0.0);
        t.left.push_back(-1);
        t.right.push_back(-1);
        t.class_frequency.resize(t.class_frequency.size() + n_classes_, 0.0);
        return t.feature.size() - 1;
    }

    /// Visits features in random order until mtry non-constant ones have
    /// been scored (more are visited when the first ones are constant).
    Split best_split(const std::vector<std::size_t>& samples, const std::vector<double>& counts) {
        Split best;
        const double parent = gini(counts, static_cast<double>(samples.size()));
        best.impurity = parent;
        std::size_t scored = 0;
        const std::size_t p = feature_order_.size();
        std::vector<std::pair<double, int>> column(samples.size());
        for (std::size_t i = 0; i < p && scored < mtry_; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng_.below(p - i));
            std::swap(feature_order_[i], feature_order_[j]);
            const std::size_t f = feature_order_[i];
            for (std::size_t k = 0; k < samples.size(); ++k) column[k] = {x_(samples[k], f), y_[samples[k]]};
            std::sort(column.begin(), column.end());
            if (column.front().first == column.back().first) continue;
            ++scored;
            std::vector<double> left(n_classes_, 0.0);
            const double n = static_cast<double>(column.size());
            for (std::size_t k = 0; k + 1 < column.size(); ++k) {
                left[static_cast<std::size_t>(column[k].second)] += 1.0;
                if (column[k].first == column[k + 1].first) continue;
                const double nl = static_cast<double>(k + 1);
                const double nr = n - nl;
                double gl = 1.0, gr = 1.0;
                for (std::size_t c = 0; c < n_classes_; ++c) {
                    const double lc = left[c], rc = counts[c] - left[c];
                    gl -= (lc / nl) * (lc / nl);
                    gr -= (rc / nr) * (rc / nr);
                }
                const double impurity = (nl * gl + nr * gr) / n;
                if (!best.found || impurity < best.impurity) {
                    best.found = true;
                    best.feature = f;
                    best.impurity = impurity;
                    best.threshold = column[k].first + (column[k + 1].first - column[k].first) / 2.0;
                    // Midpoint may round up to the right value for adjacent doubles.
                    if (!(best.threshold < column[k + 1].first)) best.threshold = column[k].first;
                }
            }
        }
        return best;
    }

    const Matrix& x_;
    const std::vector<int>& y_;
    std::size_t n_classes_;
    const ForestOptions& opt_;
    std::size_t mtry_;
    Rng rng_;
    std::vector<std::size_t> feature_order_;
};

} // namespace detail

/// Random forest of Gini CART trees, each grown on a bootstrap resample
/// with a random feature subset per split. Trees are independent: tree t
/// uses the stream (seed, "tree", t), so results do not depend on threads.
class RandomForest {
public:
    RandomForest() = default;

    void fit(const Matrix& x, const std::vector<int>& y, const ForestOptions& opt = {}) {
        if (x.rows() == 0 || x.rows() != y.size()) throw ValidationError("forest: empty data or label mismatch");
        if (opt.n_trees == 0) throw ValidationError("forest: n_trees must be >= 1");
        n_features_ = x.cols();
        n_classes_ = 0;
        for (int label : y) {
            if (label < 0) throw ValidationError("forest: labels must be non-negative");
            n_classes_ = std::max(n_classes_, static_cast<std::size_t>(label) + 1);
        }
        n_classes_ = std::max<std::size_t>(n_classes_, 2);
        std::size_t mtry = opt.features_per_split;
        if (mtry == 0) mtry = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n_features_))));
        mtry = std::clamp<std::size_t>(mtry, 1, std::max<std::size_t>(n_features_, 1));

        trees_.assign(opt.n_trees, Tree{});
        parallel_for(opt.n_trees, opt.threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t t = begin; t < end; ++t) {
                Rng rng(opt.seed, "tree", t);
                std::vector<std::size_t> bootstrap(x.rows());
                for (auto& s : bootstrap) s = static_cast<std::size_t>(rng.below(x.rows()));
                detail::TreeGrower grower(x, y, n_classes_, opt, mtry, rng);
                trees_[t] = grower.grow(std::move(bootstrap));
            }
        });
    }

    /// Mean of the leaf class frequencies over all trees.
    std::vector<double> predict_proba(std::span<const double> x) const {
        std::vector<double> p(n_classes_, 0.0);
        for (const auto& t : trees_) {
            const auto leaf = t.leaf_for(x);
            for (std::size_t c = 0; c < n_classes_; ++c) p[c] += t.class_frequency[leaf * n_classes_ + c];
        }
        for (auto& v : p) v /= static_cast<double>(trees_.size());
        return p;
    }

    /// Class with the largest mean leaf frequency; ties go to the lower class.
    int predict(std::span<const double> x) const {
        const auto p = predict_proba(x);
        return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
    }

    std::vector<int> predict(const Matrix& x) const {
        std::vector<int> out(x.rows());
        for (std::size_t r = 0; r < x.rows(); ++r) out[r] = predict(x.row(r));
        return out;
    }

    const std::vector<Tree>& trees() const { return trees_; }
    std::size_t feature_count() const { return n_features_; }
    std::size_t class_count() const { return n_classes_; }

    void assign(std::vector<Tree> trees, std::size_t n_features, std::size_t n_classes) {
        for (const auto& t : trees) validate_tree(t, n_features, n_classes);
        trees_ = std::move(trees);
        n_features_ = n_features;
        n_classes_ = n_classes;
    }

private:
    static void validate_tree(const Tree& t, std::size_t n_features, std::size_t n_classes) {
        const auto n = t.node_count();
        if (n == 0 || t.threshold.size() != n || t.left.size() != n || t.right.size() != n ||
            t.class_frequency.size() != n * n_classes)
            throw ValidationError("forest: inconsistent tree arrays");
        for (std::size_t i = 0; i < n; ++i) {
            if (t.feature[i] < 0) continue;
            if (static_cast<std::size_t>(t.feature[i]) >= n_features) throw ValidationError("forest: bad feature index");
            for (auto child : {t.left[i], t.right[i]})
                if (child <= static_cast<std::int32_t>(i) || static_cast<std::size_t>(child) >= n)
                    throw ValidationError("forest: bad child index");
        }
    }

    std::vector<Tree> trees_;
    std::size_t n_features_ = 0;
    std::size_t n_classes_ = 2;
};

inline double accuracy(const std::vector<int>& predicted, const std::vector<int>& truth) {
    if (predicted.size() != truth.size() || truth.empty()) throw ValidationError("accuracy: size mismatch");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i];
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

} // namespace echograph::forest
