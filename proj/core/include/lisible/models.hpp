#pragma once

#include "lisible/corpus.hpp"
#include "lisible/indicators.hpp"
#include "lisible/ingest.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lisible {

enum class ModelKind { ridge, linear_svc, random_forest, mlp };

std::string_view to_string(ModelKind kind);
/// Accepts the canonical names and the CLI shorthands "svc" and "forest".
ModelKind parse_model_kind(std::string_view name);

/// Per-column affine map to zero mean and unit population variance.
struct Standardizer {
    Eigen::VectorXd mean;
    Eigen::VectorXd scale;

    /// Columns whose standard deviation is below 1e-12 get scale 1; their
    /// names (or indices) are reported through `warnings`.
    static Standardizer fit(const Eigen::MatrixXd& x, std::vector<std::string>* warnings = nullptr);
    Eigen::VectorXd apply(const Eigen::VectorXd& row) const;
    Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;
};

struct RidgeParams {
    double lambda = 1.0;
};

struct SvcParams {
    double c = 1.0;
    std::size_t epochs = 100;
};

struct ForestParams {
    std::size_t n_trees = 100;
    std::optional<std::size_t> max_depth;
    /// Candidate features per split; ceil(sqrt(d)) when unset.
    std::optional<std::size_t> mtry;
    bool bootstrap = true;
    std::size_t min_samples_split = 2;
};

struct MlpParams {
    std::size_t hidden = 32;
    double lr = 0.01;
    std::size_t epochs = 200;
    std::size_t patience = 20;
};

/// Platt sigmoid: p = 1 / (1 + exp(-(a * margin + b))).
struct Calibration {
    double a = 1.0;
    double b = 0.0;
};

struct TreeNode {
    /// -1 marks a leaf.
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    /// Fraction of class-1 samples that reached the node.
    double value = 0.0;
    std::size_t samples = 0;

    bool is_leaf() const { return feature < 0; }
    bool operator==(const TreeNode&) const = default;
};

/// CART tree stored as a flat node array; node 0 is the root. Samples go
/// left when x[feature] <= threshold.
struct DecisionTree {
    std::vector<TreeNode> nodes;

    double predict(const Eigen::VectorXd& x) const;
    std::size_t depth() const;
    bool operator==(const DecisionTree&) const = default;
};

struct MlpWeights {
    Eigen::MatrixXd w1;  ///< hidden x inputs
    Eigen::VectorXd b1;
    Eigen::VectorXd w2;  ///< hidden
    double b2 = 0.0;

    /// Pre-sigmoid output.
    double logit(const Eigen::VectorXd& x) const;
    double predict(const Eigen::VectorXd& x) const;
};

struct MlpGradient {
    double loss = 0.0;
    Eigen::MatrixXd w1;
    Eigen::VectorXd b1;
    Eigen::VectorXd w2;
    double b2 = 0.0;
};

/// Mean binary cross-entropy and its gradient on a batch.
MlpGradient mlp_loss_and_gradient(const MlpWeights& net, const Eigen::MatrixXd& x, const Eigen::VectorXd& y);
/// Glorot-uniform weights, zero biases.
MlpWeights mlp_initialize(std::size_t inputs, std::size_t hidden, std::uint64_t seed);

struct TrainingStats {
    std::size_t n_train = 0;
    std::size_t n_simple = 0;
    std::size_t n_complex = 0;
    std::size_t epochs_run = 0;
    double final_loss = 0.0;
    std::vector<std::string> warnings;
};

struct ScoringModel {
    ModelKind kind = ModelKind::ridge;
    std::uint64_t seed = 0;
    /// Hyperparameters by name, as given to the trainer.
    std::map<std::string, double> hyperparameters;
    Standardizer standardizer;

    // ridge and linear_svc
    Eigen::VectorXd weights;
    double intercept = 0.0;
    std::optional<Calibration> calibration;
    // random_forest
    std::vector<DecisionTree> trees;
    // mlp
    MlpWeights mlp;

    TrainingStats stats;
    /// Lexicons for featurizing raw documents, when embedded at training time.
    std::optional<Lexicons> lexicons;

    std::size_t n_features() const { return static_cast<std::size_t>(standardizer.mean.size()); }
    /// Uncalibrated head output on a standardized row.
    double raw_output(const Eigen::VectorXd& standardized) const;
};

// Matrix-level trainers: rows are samples, y holds 1 (simple) or 0 (complex).
ScoringModel train_ridge(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const RidgeParams& params = {});
ScoringModel train_linear_svc(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const SvcParams& params,
                              std::uint64_t seed);
ScoringModel train_random_forest(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const ForestParams& params,
                                 std::uint64_t seed);
/// With a validation set, stops after `patience` epochs without validation
/// improvement and keeps the best weights.
ScoringModel train_mlp(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const MlpParams& params,
                       std::uint64_t seed, const Eigen::MatrixXd* valid_x = nullptr,
                       const Eigen::VectorXd* valid_y = nullptr);

// Dataset-level trainers.
ScoringModel train_ridge(const LabeledDataset& train, const RidgeParams& params = {});
ScoringModel train_linear_svc(const LabeledDataset& train, const SvcParams& params, std::uint64_t seed);
ScoringModel train_random_forest(const LabeledDataset& train, const ForestParams& params, std::uint64_t seed);
ScoringModel train_mlp(const LabeledDataset& train, const MlpParams& params, std::uint64_t seed,
                       const LabeledDataset* valid = nullptr);

/// Building blocks of the forest, exposed for oracle checks.
std::vector<std::size_t> bootstrap_indices(std::size_t n, std::uint64_t tree_seed);
DecisionTree grow_tree(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const std::vector<std::size_t>& rows,
                       const ForestParams& params, std::uint64_t tree_seed);

Eigen::MatrixXd feature_matrix(const LabeledDataset& ds);
Eigen::VectorXd label_vector(const LabeledDataset& ds);

/// Probability that the text is simple. Throws ValidationError naming the
/// first non-finite feature.
double predict_proba(const ScoringModel& model, const Eigen::VectorXd& features);
double predict_proba(const ScoringModel& model, const FeatureVector& features);

struct ComprehensionScore {
    double score = 0.0;  ///< in [0, 100]
    std::vector<std::string> warnings;
};

ComprehensionScore comprehension_score(const ScoringModel& model, const Document& doc, const Lexicons& lexicons);

/// Fraction of items where (p >= 0.5) agrees with label simple.
double validation_accuracy(const ScoringModel& model, const LabeledDataset& valid);

/// Versioned text container: a header line carrying the format version and
/// the SHA-256 of the JSON body that follows.
std::string serialize_model(const ScoringModel& model);
ScoringModel deserialize_model(std::string_view data);
void save_model(const std::filesystem::path& path, const ScoringModel& model);
ScoringModel load_model(const std::filesystem::path& path);

}  // namespace lisible
