#ifndef ARRAYAUDIT_SIGNATURE_HPP
#define ARRAYAUDIT_SIGNATURE_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core.hpp"

/**
 * @file signature.hpp
 *
 * @brief Deterministic stand-in for a signature pipeline: gene selection by
 * two-sample t, a one-component metagene, a probit link and ROC analysis.
 *
 * Class 1 is "Sensitive" throughout; binary label vectors hold 0 or 1.
 */

namespace arrayaudit::signature {

/**
 * Top-k features by |pooled two-sample t| between the Sensitive and
 * Resistant samples of `m` (other labels are ignored). Ties go to the lower
 * row index. Direction is UpInSensitive when the Sensitive mean is larger.
 *
 * Throws `Error` when k is out of range or either group has fewer than two
 * samples.
 */
SignatureList select_top_genes(const LabeledMatrix& m, std::size_t k);

/** |t| for every feature of `m`, in row order, as used by `select_top_genes()`. */
std::vector<double> abs_t_statistics(const LabeledMatrix& m);

struct MetageneOptions {
    double tolerance = 1e-10;
    int max_iterations = 10000;
    /** Leading eigenvalues closer than this (relative) are reported as ambiguous. */
    double ambiguity_tolerance = 1e-6;
};

/**
 * Leading singular direction of a row-centred signature submatrix.
 *
 * `loadings` is the unit-norm gene direction u, with its largest-magnitude
 * entry positive (first such entry on ties). A sample's score is the
 * projection of its centred profile onto u, i.e. sigma * v for the leading
 * right singular vector v.
 */
struct MetageneModel {
    std::vector<std::string> feature_ids;
    std::vector<double> row_means;
    std::vector<double> loadings;
    double singular_value = 0;
    int iterations = 0;
    double residual = 0;
    /** Ratio of the second to the first eigenvalue of the Gram matrix. */
    double eigen_gap_ratio = 0;
    /** True when the leading direction is not unique. */
    bool ambiguous = false;
};

/**
 * Power iteration on the smaller of the two Gram matrices. Requires at
 * least 2 rows and 2 columns with no missing values. Throws
 * `ConvergenceError` when the iteration cap is hit and
 * `DegenerateDataError` when every row is constant.
 */
MetageneModel fit_metagene(const LabeledMatrix& sub, const MetageneOptions& opts = {});

/** Scores for the samples of `m`, whose rows must include the model's features. */
std::vector<double> project(const MetageneModel& model, const LabeledMatrix& m);

struct MetageneScores {
    std::vector<double> scores;
    MetageneModel model;
};

MetageneScores metagene_scores(const LabeledMatrix& sub, const MetageneOptions& opts = {});

struct ProbitModel {
    double intercept = 0;
    double slope = 0;
    bool converged = false;
    int n_iter = 0;
    /** Set when the classes are perfectly separated by score; the MLE does not exist. */
    bool separated = false;
    std::optional<double> separating_threshold;
};

/** Log-likelihood of P(y = 1) = Phi(intercept + slope * score). */
double probit_log_likelihood(double intercept, double slope, std::span<const double> scores,
                             std::span<const int> labels);

/** Gradient of `probit_log_likelihood()` with respect to (intercept, slope). */
std::array<double, 2> probit_gradient(double intercept, double slope, std::span<const double> scores,
                                      std::span<const int> labels);

/**
 * Maximum-likelihood probit fit by Newton's method with step halving.
 * Converged when the largest coefficient change is below 1e-8; at most 100
 * iterations. Perfect separation is detected up front and returned with
 * `converged = false`. Throws `Error` when only one class is present.
 */
ProbitModel fit_probit(std::span<const double> scores, std::span<const int> labels);

/** Phi(intercept + slope * s). Throws `Error` for an unconverged model unless `force`. */
std::vector<double> predict_prob(const ProbitModel& model, std::span<const double> scores, bool force = false);

struct RocPoint {
    double fpr = 0;
    double tpr = 0;
};

/** (0,0), one point per distinct score from high to low, ending at (1,1). */
std::vector<RocPoint> roc_curve(std::span<const double> scores, std::span<const int> labels);

/**
 * AUC as an exact fraction: twice the number of concordant
 * (positive, negative) pairs plus the number of tied pairs, over twice the
 * number of pairs.
 */
struct AucFraction {
    std::uint64_t numerator = 0;
    std::uint64_t denominator = 1;
};

AucFraction auc_fraction(std::span<const double> scores, std::span<const int> labels);

/** Trapezoidal area under `roc_curve()`; tied pairs count 1/2. */
double auc(std::span<const double> scores, std::span<const int> labels);

}  // namespace arrayaudit::signature

#endif
