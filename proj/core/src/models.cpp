#include "lisible/models.hpp"

#include "lisible/error.hpp"
#include "lisible/rng.hpp"
#include "lisible/text.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace lisible {

std::string_view to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::ridge: return "ridge";
        case ModelKind::linear_svc: return "linear_svc";
        case ModelKind::random_forest: return "random_forest";
        case ModelKind::mlp: return "mlp";
    }
    return "?";
}

ModelKind parse_model_kind(std::string_view name) {
    if (name == "ridge") return ModelKind::ridge;
    if (name == "linear_svc" || name == "svc") return ModelKind::linear_svc;
    if (name == "random_forest" || name == "forest") return ModelKind::random_forest;
    if (name == "mlp") return ModelKind::mlp;
    throw ParameterError("unknown model kind '" + std::string(name) + "' (expected ridge, svc, forest or mlp)");
}

namespace {

std::string column_name(Eigen::Index j, Eigen::Index cols) {
    if (cols == static_cast<Eigen::Index>(kFeatureCount)) return std::string(feature_name(static_cast<std::size_t>(j)));
    return "feature " + std::to_string(j);
}

double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

void check_training_data(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    if (x.rows() != y.size()) throw ValidationError("feature rows and labels differ in length");
    if (x.rows() < 2 || x.cols() < 1) throw ValidationError("training needs at least 2 items and 1 feature");
    bool pos = false;
    bool neg = false;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (y[i] == 1.0) {
            pos = true;
        } else if (y[i] == 0.0) {
            neg = true;
        } else {
            throw ValidationError("labels must be 0 or 1");
        }
    }
    if (!pos || !neg) throw ValidationError("training data must contain both labels");
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            if (!std::isfinite(x(i, j))) {
                throw ValidationError("non-finite value for " + column_name(j, x.cols()) + " in row " + std::to_string(i));
            }
        }
    }
}

TrainingStats base_stats(const Eigen::VectorXd& y) {
    TrainingStats s;
    s.n_train = static_cast<std::size_t>(y.size());
    s.n_simple = static_cast<std::size_t>((y.array() == 1.0).count());
    s.n_complex = s.n_train - s.n_simple;
    return s;
}

Standardizer identity_standardizer(Eigen::Index d) {
    return {Eigen::VectorXd::Zero(d), Eigen::VectorXd::Ones(d)};
}

/// Platt scaling with the Newton method and prior-corrected targets.
Calibration fit_platt(const Eigen::VectorXd& margins, const Eigen::VectorXd& y) {
    const auto n = margins.size();
    const double prior1 = (y.array() == 1.0).count();
    const double prior0 = static_cast<double>(n) - prior1;
    const double hi = (prior1 + 1.0) / (prior1 + 2.0);
    const double lo = 1.0 / (prior0 + 2.0);
    Eigen::VectorXd t(n);
    for (Eigen::Index i = 0; i < n; ++i) t[i] = y[i] == 1.0 ? hi : lo;

    // Minimizes the cross-entropy of p = 1 / (1 + exp(A f + B)).
    double a = 0.0;
    double b = std::log((prior0 + 1.0) / (prior1 + 1.0));
    auto objective = [&](double aa, double bb) {
        double f = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double z = margins[i] * aa + bb;
            f += z >= 0 ? t[i] * z + std::log1p(std::exp(-z)) : (t[i] - 1.0) * z + std::log1p(std::exp(z));
        }
        return f;
    };
    double fval = objective(a, b);
    constexpr double kSigma = 1e-12;
    for (int iter = 0; iter < 100; ++iter) {
        double h11 = kSigma, h22 = kSigma, h21 = 0.0, g1 = 0.0, g2 = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double z = margins[i] * a + b;
            double p = 0.0;
            double q = 0.0;
            if (z >= 0) {
                p = std::exp(-z) / (1.0 + std::exp(-z));
                q = 1.0 / (1.0 + std::exp(-z));
            } else {
                p = 1.0 / (1.0 + std::exp(z));
                q = std::exp(z) / (1.0 + std::exp(z));
            }
            const double d2 = p * q;
            h11 += margins[i] * margins[i] * d2;
            h22 += d2;
            h21 += margins[i] * d2;
            const double d1 = t[i] - p;
            g1 += margins[i] * d1;
            g2 += d1;
        }
        if (std::abs(g1) < 1e-5 && std::abs(g2) < 1e-5) break;
        const double det = h11 * h22 - h21 * h21;
        const double da = -(h22 * g1 - h21 * g2) / det;
        const double db = -(-h21 * g1 + h11 * g2) / det;
        const double gd = g1 * da + g2 * db;
        double step = 1.0;
        while (step >= 1e-10) {
            const double na = a + step * da;
            const double nb = b + step * db;
            const double nf = objective(na, nb);
            if (nf < fval + 1e-4 * step * gd) {
                a = na;
                b = nb;
                fval = nf;
                break;
            }
            step /= 2.0;
        }
        if (step < 1e-10) break;
    }
    return {-a, -b};
}

struct TreeGrower {
    const Eigen::MatrixXd& x;
    const Eigen::VectorXd& y;
    const ForestParams& params;
    Rng rng;
    std::size_t mtry;
    std::vector<TreeNode> nodes;

    static double gini(double pos, double n) {
        if (n <= 0) return 0.0;
        const double p = pos / n;
        return 1.0 - p * p - (1.0 - p) * (1.0 - p);
    }

    int build(std::vector<std::size_t> rows, std::size_t depth) {
        const auto n = static_cast<double>(rows.size());
        double pos = 0.0;
        for (std::size_t r : rows) pos += y[static_cast<Eigen::Index>(r)];
        const int index = static_cast<int>(nodes.size());
        TreeNode leaf;
        leaf.value = pos / n;
        leaf.samples = rows.size();
        nodes.push_back(leaf);
        if (pos == 0.0 || pos == n || rows.size() < params.min_samples_split ||
            (params.max_depth && depth >= *params.max_depth)) {
            return index;
        }

        const auto d = static_cast<std::size_t>(x.cols());
        std::vector<std::size_t> order(d);
        std::iota(order.begin(), order.end(), 0);
        rng.shuffle(std::span(order));

        const double parent = gini(pos, n);
        bool found = false;
        int best_feature = -1;
        double best_threshold = 0.0;
        double best_impurity = 0.0;
        std::vector<std::pair<double, double>> column(rows.size());
        for (std::size_t k = 0; k < d && (k < mtry || !found); ++k) {
            const auto f = static_cast<Eigen::Index>(order[k]);
            for (std::size_t i = 0; i < rows.size(); ++i) {
                const auto r = static_cast<Eigen::Index>(rows[i]);
                column[i] = {x(r, f), y[r]};
            }
            std::sort(column.begin(), column.end());
            double left_pos = 0.0;
            for (std::size_t j = 0; j + 1 < column.size(); ++j) {
                left_pos += column[j].second;
                if (!(column[j].first < column[j + 1].first)) continue;
                const double nl = static_cast<double>(j + 1);
                const double nr = n - nl;
                const double impurity = (nl * gini(left_pos, nl) + nr * gini(pos - left_pos, nr)) / n;
                if (!found || impurity < best_impurity) {
                    found = true;
                    best_feature = static_cast<int>(f);
                    best_impurity = impurity;
                    const double lo = column[j].first;
                    const double hi = column[j + 1].first;
                    double mid = lo + (hi - lo) / 2.0;
                    if (!(mid < hi)) mid = lo;
                    best_threshold = mid;
                }
            }
        }
        if (!found || !(best_impurity < parent - 1e-12)) return index;

        std::vector<std::size_t> left_rows;
        std::vector<std::size_t> right_rows;
        for (std::size_t r : rows) {
            (x(static_cast<Eigen::Index>(r), best_feature) <= best_threshold ? left_rows : right_rows).push_back(r);
        }
        rows.clear();
        rows.shrink_to_fit();
        const int left = build(std::move(left_rows), depth + 1);
        const int right = build(std::move(right_rows), depth + 1);
        TreeNode& node = nodes[static_cast<std::size_t>(index)];
        node.feature = best_feature;
        node.threshold = best_threshold;
        node.left = left;
        node.right = right;
        return index;
    }
};

}  // namespace

Standardizer Standardizer::fit(const Eigen::MatrixXd& x, std::vector<std::string>* warnings) {
    Standardizer s;
    const auto n = static_cast<double>(x.rows());
    s.mean = x.colwise().mean().transpose();
    s.scale.resize(x.cols());
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        const double var = (x.col(j).array() - s.mean[j]).square().sum() / n;
        const double sd = std::sqrt(var);
        if (sd < 1e-12) {
            s.scale[j] = 1.0;
            if (warnings) warnings->push_back("zero variance for " + column_name(j, x.cols()) + ": scale set to 1");
        } else {
            s.scale[j] = sd;
        }
    }
    return s;
}

Eigen::VectorXd Standardizer::apply(const Eigen::VectorXd& row) const {
    return ((row - mean).array() / scale.array()).matrix();
}

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& x) const {
    Eigen::MatrixXd z = x;
    for (Eigen::Index j = 0; j < x.cols(); ++j) z.col(j) = ((x.col(j).array() - mean[j]) / scale[j]).matrix();
    return z;
}

double DecisionTree::predict(const Eigen::VectorXd& x) const {
    std::size_t i = 0;
    while (!nodes[i].is_leaf()) {
        const TreeNode& n = nodes[i];
        i = static_cast<std::size_t>(x[n.feature] <= n.threshold ? n.left : n.right);
    }
    return nodes[i].value;
}

std::size_t DecisionTree::depth() const {
    if (nodes.empty()) return 0;
    std::size_t best = 0;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
    while (!stack.empty()) {
        auto [i, d] = stack.back();
        stack.pop_back();
        best = std::max(best, d);
        if (!nodes[i].is_leaf()) {
            stack.emplace_back(static_cast<std::size_t>(nodes[i].left), d + 1);
            stack.emplace_back(static_cast<std::size_t>(nodes[i].right), d + 1);
        }
    }
    return best;
}

double MlpWeights::logit(const Eigen::VectorXd& x) const {
    const Eigen::VectorXd hidden = (w1 * x + b1).cwiseMax(0.0);
    return w2.dot(hidden) + b2;
}

double MlpWeights::predict(const Eigen::VectorXd& x) const { return sigmoid(logit(x)); }

MlpWeights mlp_initialize(std::size_t inputs, std::size_t hidden, std::uint64_t seed) {
    if (inputs == 0 || hidden == 0) throw ParameterError("network layers must have at least one unit");
    Rng rng(seed);
    MlpWeights net;
    const auto h = static_cast<Eigen::Index>(hidden);
    const auto d = static_cast<Eigen::Index>(inputs);
    const double l1 = std::sqrt(6.0 / static_cast<double>(inputs + hidden));
    const double l2 = std::sqrt(6.0 / static_cast<double>(hidden + 1));
    net.w1.resize(h, d);
    for (Eigen::Index i = 0; i < h; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) net.w1(i, j) = rng.uniform(-l1, l1);
    }
    net.b1 = Eigen::VectorXd::Zero(h);
    net.w2.resize(h);
    for (Eigen::Index i = 0; i < h; ++i) net.w2[i] = rng.uniform(-l2, l2);
    net.b2 = 0.0;
    return net;
}

MlpGradient mlp_loss_and_gradient(const MlpWeights& net, const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
    const auto n = static_cast<double>(x.rows());
    const Eigen::MatrixXd pre = (x * net.w1.transpose()).rowwise() + net.b1.transpose();
    const Eigen::MatrixXd act = pre.cwiseMax(0.0);
    const Eigen::VectorXd z = (act * net.w2).array() + net.b2;

    MlpGradient g;
    Eigen::VectorXd dz(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        g.loss += softplus(z[i]) - y[i] * z[i];
        dz[i] = (sigmoid(z[i]) - y[i]) / n;
    }
    g.loss /= n;
    g.w2 = act.transpose() * dz;
    g.b2 = dz.sum();
    Eigen::MatrixXd dpre = dz * net.w2.transpose();
    dpre = dpre.array() * (pre.array() > 0.0).cast<double>();
    g.w1 = dpre.transpose() * x;
    g.b1 = dpre.colwise().sum().transpose();
    return g;
}

double ScoringModel::raw_output(const Eigen::VectorXd& z) const {
    switch (kind) {
        case ModelKind::ridge:
        case ModelKind::linear_svc: return weights.dot(z) + intercept;
        case ModelKind::random_forest: {
            if (trees.empty()) throw ValidationError("forest has no trees");
            double sum = 0.0;
            for (const auto& t : trees) sum += t.predict(z);
            return sum / static_cast<double>(trees.size());
        }
        case ModelKind::mlp: return mlp.logit(z);
    }
    return 0.0;
}

ScoringModel train_ridge(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const RidgeParams& params) {
    if (!(params.lambda > 0.0) || !std::isfinite(params.lambda)) {
        throw ParameterError("ridge lambda must be > 0, got " + text::format_double(params.lambda));
    }
    check_training_data(x, y);
    ScoringModel m;
    m.kind = ModelKind::ridge;
    m.hyperparameters = {{"lambda", params.lambda}};
    m.stats = base_stats(y);
    m.standardizer = Standardizer::fit(x, &m.stats.warnings);
    const Eigen::MatrixXd z = m.standardizer.apply(x);
    const double ybar = y.mean();
    const auto d = z.cols();
    const Eigen::MatrixXd a = z.transpose() * z + params.lambda * Eigen::MatrixXd::Identity(d, d);
    const Eigen::VectorXd rhs = z.transpose() * (y.array() - ybar).matrix();
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success) throw Error("ridge system is not positive definite");
    m.weights = llt.solve(rhs);
    m.intercept = ybar;
    const Eigen::VectorXd resid = (z * m.weights).array() + ybar - y.array();
    m.stats.final_loss = resid.squaredNorm() / static_cast<double>(y.size());
    return m;
}

ScoringModel train_linear_svc(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const SvcParams& params,
                              std::uint64_t seed) {
    if (!(params.c > 0.0) || !std::isfinite(params.c)) throw ParameterError("svc C must be > 0");
    if (params.epochs == 0) throw ParameterError("svc epochs must be >= 1");
    check_training_data(x, y);
    ScoringModel m;
    m.kind = ModelKind::linear_svc;
    m.seed = seed;
    m.hyperparameters = {{"c", params.c}, {"epochs", static_cast<double>(params.epochs)}};
    m.stats = base_stats(y);
    m.standardizer = Standardizer::fit(x, &m.stats.warnings);
    const Eigen::MatrixXd z = m.standardizer.apply(x);
    const auto n = z.rows();
    const auto d = z.cols();
    Eigen::VectorXd sign = 2.0 * y.array() - 1.0;

    // The bias is an extra weight on a constant input, regularized like the rest.
    Eigen::VectorXd w = Eigen::VectorXd::Zero(d + 1);
    const double lambda = 1.0 / (params.c * static_cast<double>(n));
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    double t = 0.0;
    double objective = 0.0;
    for (std::size_t epoch = 1; epoch <= params.epochs; ++epoch) {
        rng.shuffle(std::span(order));
        for (Eigen::Index i : order) {
            t += 1.0;
            const double eta = 1.0 / (lambda * t);
            const double score = sign[i] * (z.row(i).dot(w.head(d)) + w[d]);
            w *= 1.0 - eta * lambda;
            if (score < 1.0) {
                w.head(d) += eta * sign[i] * z.row(i).transpose();
                w[d] += eta * sign[i];
            }
        }
        const Eigen::VectorXd margins = (z * w.head(d)).array() + w[d];
        const double hinge = (1.0 - sign.array() * margins.array()).max(0.0).mean();
        objective = 0.5 * lambda * w.squaredNorm() + hinge;
        if (!std::isfinite(objective)) {
            throw DivergenceError("svc loss became non-finite at epoch " + std::to_string(epoch), epoch);
        }
    }
    m.weights = w.head(d);
    m.intercept = w[d];
    m.stats.epochs_run = params.epochs;
    m.stats.final_loss = objective;
    const Eigen::VectorXd margins = (z * m.weights).array() + m.intercept;
    m.calibration = fit_platt(margins, y);
    return m;
}

std::vector<std::size_t> bootstrap_indices(std::size_t n, std::uint64_t tree_seed) {
    Rng rng(tree_seed);
    std::vector<std::size_t> rows(n);
    for (auto& r : rows) r = static_cast<std::size_t>(rng.below(n));
    return rows;
}

DecisionTree grow_tree(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const std::vector<std::size_t>& rows,
                       const ForestParams& params, std::uint64_t tree_seed) {
    if (rows.empty()) throw ValidationError("cannot grow a tree on zero rows");
    const auto d = static_cast<std::size_t>(x.cols());
    std::size_t mtry = params.mtry.value_or(static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d)))));
    mtry = std::clamp<std::size_t>(mtry, 1, d);
    TreeGrower grower{x, y, params, Rng(Rng::derive(tree_seed, 1)), mtry, {}};
    grower.build(rows, 0);
    return DecisionTree{std::move(grower.nodes)};
}

ScoringModel train_random_forest(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const ForestParams& params,
                                 std::uint64_t seed) {
    if (params.n_trees < 1) throw ParameterError("n_trees must be >= 1");
    if (params.mtry && *params.mtry == 0) throw ParameterError("mtry must be >= 1");
    if (params.min_samples_split < 2) throw ParameterError("min_samples_split must be >= 2");
    check_training_data(x, y);
    ScoringModel m;
    m.kind = ModelKind::random_forest;
    m.seed = seed;
    m.hyperparameters = {{"n_trees", static_cast<double>(params.n_trees)},
                         {"bootstrap", params.bootstrap ? 1.0 : 0.0},
                         {"min_samples_split", static_cast<double>(params.min_samples_split)}};
    if (params.max_depth) m.hyperparameters["max_depth"] = static_cast<double>(*params.max_depth);
    if (params.mtry) m.hyperparameters["mtry"] = static_cast<double>(*params.mtry);
    m.stats = base_stats(y);
    // Splits are invariant to per-feature affine maps, so trees see raw values.
    m.standardizer = identity_standardizer(x.cols());
    const auto n = static_cast<std::size_t>(x.rows());
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    m.trees.reserve(params.n_trees);
    for (std::size_t t = 0; t < params.n_trees; ++t) {
        const std::uint64_t tree_seed = Rng::derive(seed, t);
        const auto rows = params.bootstrap ? bootstrap_indices(n, tree_seed) : all;
        m.trees.push_back(grow_tree(x, y, rows, params, tree_seed));
    }
    double correct = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        correct += ((m.raw_output(x.row(i).transpose()) >= 0.5) == (y[i] == 1.0)) ? 1.0 : 0.0;
    }
    m.stats.final_loss = 1.0 - correct / static_cast<double>(n);
    return m;
}

ScoringModel train_mlp(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const MlpParams& params,
                       std::uint64_t seed, const Eigen::MatrixXd* valid_x, const Eigen::VectorXd* valid_y) {
    if (params.hidden < 1) throw ParameterError("hidden must be >= 1");
    if (!(params.lr > 0.0) || !std::isfinite(params.lr)) throw ParameterError("learning rate must be > 0");
    if (params.patience < 1) throw ParameterError("patience must be >= 1");
    check_training_data(x, y);
    if ((valid_x == nullptr) != (valid_y == nullptr)) throw ParameterError("validation features and labels go together");
    ScoringModel m;
    m.kind = ModelKind::mlp;
    m.seed = seed;
    m.hyperparameters = {{"hidden", static_cast<double>(params.hidden)},
                         {"lr", params.lr},
                         {"epochs", static_cast<double>(params.epochs)},
                         {"patience", static_cast<double>(params.patience)}};
    m.stats = base_stats(y);
    m.standardizer = Standardizer::fit(x, &m.stats.warnings);
    const Eigen::MatrixXd z = m.standardizer.apply(x);
    Eigen::MatrixXd vz;
    if (valid_x) {
        if (valid_x->cols() != x.cols() || valid_x->rows() != valid_y->size() || valid_x->rows() == 0) {
            throw ValidationError("validation set shape does not match training set");
        }
        vz = m.standardizer.apply(*valid_x);
    }

    MlpWeights net = mlp_initialize(static_cast<std::size_t>(x.cols()), params.hidden, seed);
    MlpWeights best = net;
    double best_valid = valid_x ? mlp_loss_and_gradient(net, vz, *valid_y).loss : 0.0;
    std::size_t stale = 0;
    std::size_t epochs = 0;
    for (std::size_t epoch = 1; epoch <= params.epochs; ++epoch) {
        const MlpGradient g = mlp_loss_and_gradient(net, z, y);
        if (!std::isfinite(g.loss)) {
            throw DivergenceError("mlp loss became non-finite at epoch " + std::to_string(epoch), epoch);
        }
        net.w1 -= params.lr * g.w1;
        net.b1 -= params.lr * g.b1;
        net.w2 -= params.lr * g.w2;
        net.b2 -= params.lr * g.b2;
        epochs = epoch;
        if (valid_x) {
            const double v = mlp_loss_and_gradient(net, vz, *valid_y).loss;
            if (!std::isfinite(v)) {
                throw DivergenceError("mlp validation loss became non-finite at epoch " + std::to_string(epoch), epoch);
            }
            if (v < best_valid) {
                best_valid = v;
                best = net;
                stale = 0;
            } else if (++stale >= params.patience) {
                break;
            }
        }
    }
    if (valid_x) net = best;
    m.mlp = std::move(net);
    m.stats.epochs_run = epochs;
    m.stats.final_loss = mlp_loss_and_gradient(m.mlp, z, y).loss;
    return m;
}

Eigen::MatrixXd feature_matrix(const LabeledDataset& ds) {
    Eigen::MatrixXd x(static_cast<Eigen::Index>(ds.size()), static_cast<Eigen::Index>(kFeatureCount));
    for (std::size_t i = 0; i < ds.size(); ++i) {
        for (std::size_t j = 0; j < kFeatureCount; ++j) {
            x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = ds.items[i].features[j];
        }
    }
    return x;
}

Eigen::VectorXd label_vector(const LabeledDataset& ds) {
    Eigen::VectorXd y(static_cast<Eigen::Index>(ds.size()));
    for (std::size_t i = 0; i < ds.size(); ++i) {
        y[static_cast<Eigen::Index>(i)] = ds.items[i].label == Label::simple ? 1.0 : 0.0;
    }
    return y;
}

ScoringModel train_ridge(const LabeledDataset& train, const RidgeParams& params) {
    return train_ridge(feature_matrix(train), label_vector(train), params);
}

ScoringModel train_linear_svc(const LabeledDataset& train, const SvcParams& params, std::uint64_t seed) {
    return train_linear_svc(feature_matrix(train), label_vector(train), params, seed);
}

ScoringModel train_random_forest(const LabeledDataset& train, const ForestParams& params, std::uint64_t seed) {
    return train_random_forest(feature_matrix(train), label_vector(train), params, seed);
}

ScoringModel train_mlp(const LabeledDataset& train, const MlpParams& params, std::uint64_t seed,
                       const LabeledDataset* valid) {
    if (!valid) return train_mlp(feature_matrix(train), label_vector(train), params, seed);
    const Eigen::MatrixXd vx = feature_matrix(*valid);
    const Eigen::VectorXd vy = label_vector(*valid);
    return train_mlp(feature_matrix(train), label_vector(train), params, seed, &vx, &vy);
}

double predict_proba(const ScoringModel& model, const Eigen::VectorXd& features) {
    if (features.size() != static_cast<Eigen::Index>(model.n_features())) {
        throw ValidationError("model expects " + std::to_string(model.n_features()) + " features, got " +
                              std::to_string(features.size()));
    }
    for (Eigen::Index j = 0; j < features.size(); ++j) {
        if (!std::isfinite(features[j])) {
            throw ValidationError("non-finite value for " + column_name(j, features.size()));
        }
    }
    const double raw = model.raw_output(model.standardizer.apply(features));
    switch (model.kind) {
        case ModelKind::ridge: return std::clamp(raw, 0.0, 1.0);
        case ModelKind::linear_svc: {
            const Calibration c = model.calibration.value_or(Calibration{});
            return sigmoid(c.a * raw + c.b);
        }
        case ModelKind::random_forest: return raw;
        case ModelKind::mlp: return sigmoid(raw);
    }
    return raw;
}

double predict_proba(const ScoringModel& model, const FeatureVector& features) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(kFeatureCount));
    for (std::size_t j = 0; j < kFeatureCount; ++j) v[static_cast<Eigen::Index>(j)] = features[j];
    return predict_proba(model, v);
}

ComprehensionScore comprehension_score(const ScoringModel& model, const Document& doc, const Lexicons& lexicons) {
    auto report = extract_features(doc, lexicons);
    return {100.0 * predict_proba(model, report.features), std::move(report.warnings)};
}

double validation_accuracy(const ScoringModel& model, const LabeledDataset& valid) {
    if (valid.items.empty()) throw ValidationError("validation set is empty");
    std::size_t correct = 0;
    for (const auto& item : valid.items) {
        const bool simple = predict_proba(model, item.features) >= 0.5;
        if (simple == (item.label == Label::simple)) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(valid.items.size());
}

}  // namespace lisible
