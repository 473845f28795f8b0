#include "arrayaudit/signature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "arrayaudit/stats.hpp"

namespace arrayaudit::signature {

namespace {

struct Groups {
    std::vector<std::size_t> sensitive;
    std::vector<std::size_t> resistant;
};

Groups split_groups(const LabeledMatrix& m) {
    Groups g;
    for (std::size_t c = 0; c < m.n_samples(); ++c) {
        auto label = m.label_of(m.sample_ids[c]);
        if (label == GroupLabel::Sensitive) {
            g.sensitive.push_back(c);
        } else if (label == GroupLabel::Resistant) {
            g.resistant.push_back(c);
        }
    }
    if (g.sensitive.size() < 2 || g.resistant.size() < 2) {
        throw Error("gene selection needs at least 2 Sensitive and 2 Resistant samples (found " +
                    std::to_string(g.sensitive.size()) + " and " + std::to_string(g.resistant.size()) + ")");
    }
    return g;
}

std::vector<double> signed_t(const LabeledMatrix& m, const Groups& g) {
    std::vector<double> out(m.n_features());
    std::vector<double> a(g.sensitive.size()), b(g.resistant.size());
    for (std::size_t r = 0; r < m.n_features(); ++r) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            a[i] = m.at(r, g.sensitive[i]);
        }
        for (std::size_t i = 0; i < b.size(); ++i) {
            b[i] = m.at(r, g.resistant[i]);
        }
        out[r] = stats::pooled_t(a, b);
    }
    return out;
}

double norm2(const std::vector<double>& x) {
    return std::sqrt(stats::dot(x, x));
}

void normalize(std::vector<double>& x) {
    const double n = norm2(x);
    for (auto& v : x) {
        v /= n;
    }
}

std::vector<double> multiply(const std::vector<double>& g, std::size_t n, const std::vector<double>& x) {
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = stats::dot(std::span<const double>(g.data() + i * n, n), x);
    }
    return out;
}

struct PowerResult {
    std::vector<double> vector;
    double value = 0;
    int iterations = 0;
    double residual = 0;
    bool converged = false;
};

// Power iteration on a symmetric positive semi-definite n x n matrix.
PowerResult power_iterate(const std::vector<double>& g, std::size_t n, double tol, int max_iter) {
    PowerResult res;
    // Deterministic, non-symmetric start so it is not orthogonal to the
    // leading eigenvector for structured inputs.
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = 1.0 + 0.5 * std::sin(static_cast<double>(i) + 1.0);
    }
    normalize(v);

    for (int it = 1; it <= max_iter; ++it) {
        auto w = multiply(g, n, v);
        const double nw = norm2(w);
        res.iterations = it;
        if (!(nw > 0)) {
            res.vector = v;
            res.value = 0;
            res.converged = true;
            return res;
        }
        double delta = 0;
        for (std::size_t i = 0; i < n; ++i) {
            w[i] /= nw;
            delta += (w[i] - v[i]) * (w[i] - v[i]);
        }
        v = std::move(w);
        if (std::sqrt(delta) < tol) {
            res.converged = true;
            break;
        }
    }

    auto gv = multiply(g, n, v);
    res.value = stats::dot(v, gv);
    double r = 0;
    for (std::size_t i = 0; i < n; ++i) {
        r += (gv[i] - res.value * v[i]) * (gv[i] - res.value * v[i]);
    }
    res.residual = res.value > 0 ? std::sqrt(r) / res.value : 0.0;
    res.vector = std::move(v);
    return res;
}

}  // namespace

std::vector<double> abs_t_statistics(const LabeledMatrix& m) {
    auto t = signed_t(m, split_groups(m));
    for (auto& v : t) {
        v = std::abs(v);
    }
    return t;
}

SignatureList select_top_genes(const LabeledMatrix& m, std::size_t k) {
    if (k < 1 || k > m.n_features()) {
        throw Error("k must be between 1 and the number of features (" + std::to_string(m.n_features()) + ")");
    }
    auto t = signed_t(m, split_groups(m));

    // NaN (all values missing in a group) sorts last.
    auto key = [&](std::size_t r) { return std::isnan(t[r]) ? -1.0 : std::abs(t[r]); };
    std::vector<std::size_t> order(m.n_features());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key(a) > key(b); });

    SignatureList sig;
    for (std::size_t i = 0; i < k; ++i) {
        const auto r = order[i];
        sig.feature_ids.push_back(m.feature_ids[r]);
        if (!std::isnan(t[r]) && t[r] != 0) {
            sig.directions.emplace_back(m.feature_ids[r], t[r] > 0 ? Direction::UpInSensitive : Direction::UpInResistant);
        }
    }
    return sig;
}

MetageneModel fit_metagene(const LabeledMatrix& sub, const MetageneOptions& opts) {
    const std::size_t nr = sub.n_features(), nc = sub.n_samples();
    if (nr < 2 || nc < 2) {
        throw Error("metagene needs at least 2 rows and 2 columns");
    }
    if (sub.has_missing()) {
        throw Error("metagene does not accept missing values");
    }

    MetageneModel model;
    model.feature_ids = sub.feature_ids;
    model.row_means.resize(nr);
    std::vector<double> x(sub.values);
    for (std::size_t r = 0; r < nr; ++r) {
        model.row_means[r] = stats::moments(sub.row(r)).mean;
        for (std::size_t c = 0; c < nc; ++c) {
            x[r * nc + c] -= model.row_means[r];
        }
    }

    // Gram matrix over the smaller dimension.
    const bool sample_space = nc <= nr;
    const std::size_t n = sample_space ? nc : nr;
    std::vector<double> gram(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            double s = 0;
            if (sample_space) {
                for (std::size_t r = 0; r < nr; ++r) {
                    s += x[r * nc + i] * x[r * nc + j];
                }
            } else {
                for (std::size_t c = 0; c < nc; ++c) {
                    s += x[i * nc + c] * x[j * nc + c];
                }
            }
            gram[i * n + j] = gram[j * n + i] = s;
        }
    }

    auto lead = power_iterate(gram, n, opts.tolerance, opts.max_iterations);
    model.iterations = lead.iterations;
    model.residual = lead.residual;
    if (!lead.converged) {
        throw ConvergenceError(lead.iterations, lead.residual,
                               "metagene power iteration did not converge in " + std::to_string(lead.iterations) +
                                   " iterations (residual " + std::to_string(lead.residual) + ")");
    }
    if (!(lead.value > 0)) {
        throw DegenerateDataError(sub.feature_ids.front(), "metagene: every signature row is constant");
    }
    model.singular_value = std::sqrt(lead.value);

    // Second eigenvalue from the deflated matrix, to flag a non-unique lead.
    auto deflated = gram;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            deflated[i * n + j] -= lead.value * lead.vector[i] * lead.vector[j];
        }
    }
    auto second = power_iterate(deflated, n, opts.tolerance, opts.max_iterations);
    model.eigen_gap_ratio = std::max(0.0, second.value) / lead.value;
    model.ambiguous = model.eigen_gap_ratio > 1.0 - opts.ambiguity_tolerance;

    if (sample_space) {
        model.loadings.assign(nr, 0.0);
        for (std::size_t r = 0; r < nr; ++r) {
            model.loadings[r] = stats::dot(std::span<const double>(x.data() + r * nc, nc), lead.vector);
        }
        normalize(model.loadings);
    } else {
        model.loadings = lead.vector;
    }

    std::size_t pivot = 0;
    for (std::size_t r = 1; r < nr; ++r) {
        if (std::abs(model.loadings[r]) > std::abs(model.loadings[pivot])) {
            pivot = r;
        }
    }
    if (model.loadings[pivot] < 0) {
        for (auto& v : model.loadings) {
            v = -v;
        }
    }
    return model;
}

std::vector<double> project(const MetageneModel& model, const LabeledMatrix& m) {
    std::unordered_map<std::string, std::size_t> rows;
    for (std::size_t r = 0; r < m.n_features(); ++r) {
        rows.emplace(m.feature_ids[r], r);
    }
    std::vector<double> scores(m.n_samples(), 0.0);
    for (std::size_t k = 0; k < model.feature_ids.size(); ++k) {
        auto it = rows.find(model.feature_ids[k]);
        if (it == rows.end()) {
            throw Error("project: feature '" + model.feature_ids[k] + "' is missing from the matrix");
        }
        for (std::size_t c = 0; c < m.n_samples(); ++c) {
            const double v = m.at(it->second, c);
            if (is_missing(v)) {
                throw Error("project: missing value for feature '" + model.feature_ids[k] + "'");
            }
            scores[c] += model.loadings[k] * (v - model.row_means[k]);
        }
    }
    return scores;
}

MetageneScores metagene_scores(const LabeledMatrix& sub, const MetageneOptions& opts) {
    MetageneScores out;
    out.model = fit_metagene(sub, opts);
    out.scores = project(out.model, sub);
    return out;
}

namespace {

void check_binary(std::span<const double> scores, std::span<const int> labels, std::size_t& positives,
                  std::size_t& negatives) {
    if (scores.size() != labels.size()) {
        throw Error("scores and labels differ in length");
    }
    positives = negatives = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == 1) {
            ++positives;
        } else if (labels[i] == 0) {
            ++negatives;
        } else {
            throw Error("labels must be 0 or 1");
        }
        if (std::isnan(scores[i])) {
            throw Error("scores must not be missing");
        }
    }
    if (positives == 0 || negatives == 0) {
        throw Error("both classes must be present");
    }
}

}  // namespace

double probit_log_likelihood(double intercept, double slope, std::span<const double> scores,
                             std::span<const int> labels) {
    double ll = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const double eta = intercept + slope * scores[i];
        ll += labels[i] == 1 ? stats::log_normal_cdf(eta) : stats::log_normal_cdf(-eta);
    }
    return ll;
}

std::array<double, 2> probit_gradient(double intercept, double slope, std::span<const double> scores,
                                      std::span<const int> labels) {
    std::array<double, 2> g{0.0, 0.0};
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const double eta = intercept + slope * scores[i];
        const double lambda = labels[i] == 1 ? stats::inverse_mills(eta) : -stats::inverse_mills(-eta);
        g[0] += lambda;
        g[1] += lambda * scores[i];
    }
    return g;
}

ProbitModel fit_probit(std::span<const double> scores, std::span<const int> labels) {
    std::size_t positives = 0, negatives = 0;
    check_binary(scores, labels, positives, negatives);

    double min1 = std::numeric_limits<double>::infinity(), max1 = -min1;
    double min0 = min1, max0 = -min1;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels[i] == 1) {
            min1 = std::min(min1, scores[i]);
            max1 = std::max(max1, scores[i]);
        } else {
            min0 = std::min(min0, scores[i]);
            max0 = std::max(max0, scores[i]);
        }
    }

    ProbitModel model;
    if (max0 < min1) {
        model.separated = true;
        model.separating_threshold = 0.5 * (max0 + min1);
        return model;
    }
    if (max1 < min0) {
        model.separated = true;
        model.separating_threshold = 0.5 * (max1 + min0);
        return model;
    }
    if (std::min(min0, min1) == std::max(max0, max1)) {
        throw DegenerateDataError("scores", "probit: all scores are equal, the slope is not identifiable");
    }

    constexpr int kMaxIter = 100;
    constexpr double kTol = 1e-8;
    double a = 0, b = 0;
    double ll = probit_log_likelihood(a, b, scores, labels);
    for (int it = 1; it <= kMaxIter; ++it) {
        double g0 = 0, g1 = 0, h00 = 0, h01 = 0, h11 = 0;
        for (std::size_t i = 0; i < scores.size(); ++i) {
            const double x = scores[i];
            const double eta = a + b * x;
            double lambda, w;
            if (labels[i] == 1) {
                lambda = stats::inverse_mills(eta);
                w = lambda * (lambda + eta);
            } else {
                lambda = -stats::inverse_mills(-eta);
                w = lambda * (lambda + eta);
            }
            g0 += lambda;
            g1 += lambda * x;
            h00 += w;
            h01 += w * x;
            h11 += w * x * x;
        }
        const double det = h00 * h11 - h01 * h01;
        if (!(det > 0)) {
            model.n_iter = it;
            break;
        }
        double da = (h11 * g0 - h01 * g1) / det;
        double db = (h00 * g1 - h01 * g0) / det;

        double next_ll = probit_log_likelihood(a + da, b + db, scores, labels);
        int halvings = 0;
        while (!(next_ll >= ll) && halvings < 50) {
            da *= 0.5;
            db *= 0.5;
            next_ll = probit_log_likelihood(a + da, b + db, scores, labels);
            ++halvings;
        }
        a += da;
        b += db;
        ll = next_ll;
        model.n_iter = it;
        if (std::max(std::abs(da), std::abs(db)) < kTol) {
            model.converged = true;
            break;
        }
    }
    model.intercept = a;
    model.slope = b;
    return model;
}

std::vector<double> predict_prob(const ProbitModel& model, std::span<const double> scores, bool force) {
    if (!model.converged && !force) {
        throw Error("predict_prob: model did not converge" +
                    std::string(model.separated ? " (perfect separation)" : ""));
    }
    std::vector<double> out(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        out[i] = stats::normal_cdf(model.intercept + model.slope * scores[i]);
    }
    return out;
}

namespace {

struct TieGroup {
    std::uint64_t positives = 0;
    std::uint64_t negatives = 0;
};

// Tie groups of the scores, from the highest score down.
std::vector<TieGroup> tie_groups(std::span<const double> scores, std::span<const int> labels) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    std::vector<TieGroup> groups;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i == 0 || scores[order[i]] != scores[order[i - 1]]) {
            groups.emplace_back();
        }
        (labels[order[i]] == 1 ? groups.back().positives : groups.back().negatives) += 1;
    }
    return groups;
}

}  // namespace

std::vector<RocPoint> roc_curve(std::span<const double> scores, std::span<const int> labels) {
    std::size_t positives = 0, negatives = 0;
    check_binary(scores, labels, positives, negatives);
    std::vector<RocPoint> out{{0.0, 0.0}};
    std::uint64_t tp = 0, fp = 0;
    for (const auto& g : tie_groups(scores, labels)) {
        tp += g.positives;
        fp += g.negatives;
        out.push_back({static_cast<double>(fp) / static_cast<double>(negatives),
                       static_cast<double>(tp) / static_cast<double>(positives)});
    }
    return out;
}

AucFraction auc_fraction(std::span<const double> scores, std::span<const int> labels) {
    std::size_t positives = 0, negatives = 0;
    check_binary(scores, labels, positives, negatives);
    AucFraction f;
    f.denominator = 2 * static_cast<std::uint64_t>(positives) * negatives;
    std::uint64_t tp = 0;
    for (const auto& g : tie_groups(scores, labels)) {
        // Each negative here loses to every earlier positive and ties with this group's positives.
        f.numerator += g.negatives * (2 * tp + g.positives);
        tp += g.positives;
    }
    return f;
}

double auc(std::span<const double> scores, std::span<const int> labels) {
    auto f = auc_fraction(scores, labels);
    return static_cast<double>(f.numerator) / static_cast<double>(f.denominator);
}

}  // namespace arrayaudit::signature
