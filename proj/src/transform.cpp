#include "arrayaudit/transform.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "arrayaudit/stats.hpp"

namespace arrayaudit::transform {

namespace {

constexpr double kTieTolerance = 1e-12;

std::string_view base_name(Base b) {
    switch (b) {
        case Base::E: return "e";
        case Base::Two: return "2";
        case Base::Ten: return "10";
    }
    return "e";
}

std::optional<Base> parse_base(std::string_view s) {
    for (auto b : {Base::E, Base::Two, Base::Ten}) {
        if (s == base_name(b)) {
            return b;
        }
    }
    return std::nullopt;
}

double log_base(Base b, double x) {
    switch (b) {
        case Base::E: return std::log(x);
        case Base::Two: return std::log2(x);
        case Base::Ten: return std::log10(x);
    }
    return std::log(x);
}

double exp_base(Base b, double x) {
    switch (b) {
        case Base::E: return std::exp(x);
        case Base::Two: return std::exp2(x);
        case Base::Ten: return std::pow(10.0, x);
    }
    return std::exp(x);
}

}  // namespace

int TransformPipeline::step_count() const {
    return static_cast<int>(log.has_value()) + static_cast<int>(zscore.has_value()) +
           static_cast<int>(exp.has_value()) + static_cast<int>(round_digits.has_value());
}

TransformPipeline parse_pipeline(std::string_view spec) {
    TransformPipeline p;
    if (spec.empty() || spec == "identity") {
        return p;
    }
    int last_slot = -1;
    while (true) {
        auto bar = spec.find('|');
        auto step = spec.substr(0, bar);
        auto colon = step.find(':');
        if (colon == std::string_view::npos) {
            throw Error("pipeline step '" + std::string(step) + "' needs a parameter, e.g. log:e");
        }
        auto kind = step.substr(0, colon), arg = step.substr(colon + 1);

        int slot = 0;
        if (kind == "log" || kind == "exp") {
            auto b = parse_base(arg);
            if (!b) {
                throw Error("unknown base '" + std::string(arg) + "' (expected e, 2 or 10)");
            }
            slot = kind == "log" ? 0 : 2;
            (slot == 0 ? p.log : p.exp) = *b;
        } else if (kind == "zscore") {
            slot = 1;
            if (arg == "n-1") {
                p.zscore = Denominator::NMinusOne;
            } else if (arg == "n") {
                p.zscore = Denominator::N;
            } else {
                throw Error("unknown z-score denominator '" + std::string(arg) + "' (expected n-1 or n)");
            }
        } else if (kind == "round") {
            slot = 3;
            if (arg.size() != 1 || arg[0] < '0' || arg[0] > '9') {
                throw Error("round digits must be a single digit, got '" + std::string(arg) + "'");
            }
            p.round_digits = arg[0] - '0';
        } else {
            throw Error("unknown pipeline step '" + std::string(kind) + "'");
        }
        if (slot <= last_slot) {
            throw Error("pipeline steps must appear once each, in the order log, zscore, exp, round");
        }
        last_slot = slot;

        if (bar == std::string_view::npos) {
            break;
        }
        spec.remove_prefix(bar + 1);
    }
    return p;
}

std::string to_string(const TransformPipeline& p) {
    std::string out;
    auto add = [&](const std::string& s) {
        if (!out.empty()) {
            out += '|';
        }
        out += s;
    };
    if (p.log) {
        add("log:" + std::string(base_name(*p.log)));
    }
    if (p.zscore) {
        add(*p.zscore == Denominator::NMinusOne ? "zscore:n-1" : "zscore:n");
    }
    if (p.exp) {
        add("exp:" + std::string(base_name(*p.exp)));
    }
    if (p.round_digits) {
        add("round:" + std::to_string(*p.round_digits));
    }
    return out.empty() ? "identity" : out;
}

LabeledMatrix apply_pipeline(const LabeledMatrix& m, const TransformPipeline& p) {
    LabeledMatrix out = m;
    const double scale = p.round_digits ? std::pow(10.0, *p.round_digits) : 1.0;

    for (std::size_t r = 0; r < out.n_features(); ++r) {
        auto row = out.row(r);
        if (p.log) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (is_missing(row[c])) {
                    continue;
                }
                if (!(row[c] > 0)) {
                    throw DegenerateDataError(m.feature_ids[r] + "/" + m.sample_ids[c],
                                              "log of non-positive value at feature '" + m.feature_ids[r] +
                                                  "', sample '" + m.sample_ids[c] + "'");
                }
                row[c] = log_base(*p.log, row[c]);
            }
        }
        if (p.zscore) {
            auto mom = stats::moments(row);
            const double denom = static_cast<double>(mom.n) - (*p.zscore == Denominator::NMinusOne ? 1.0 : 0.0);
            if (!(denom > 0) || !(mom.sum_sq > 0)) {
                throw DegenerateDataError(m.feature_ids[r],
                                          "zero-variance row '" + m.feature_ids[r] + "' cannot be z-scored");
            }
            const double sd = std::sqrt(mom.sum_sq / denom);
            for (auto& v : row) {
                if (!is_missing(v)) {
                    v = (v - mom.mean) / sd;
                }
            }
        }
        if (p.exp) {
            for (auto& v : row) {
                if (!is_missing(v)) {
                    v = exp_base(*p.exp, v);
                }
            }
        }
        if (p.round_digits) {
            for (auto& v : row) {
                if (!is_missing(v)) {
                    v = std::round(v * scale) / scale;
                }
            }
        }
    }
    return out;
}

std::vector<TransformPipeline> default_candidates() {
    std::vector<TransformPipeline> out;
    for (auto b : {Base::E, Base::Two, Base::Ten}) {
        for (auto d : {Denominator::NMinusOne, Denominator::N}) {
            for (bool rounded : {false, true}) {
                TransformPipeline p;
                p.log = b;
                p.zscore = d;
                p.exp = b;
                if (rounded) {
                    p.round_digits = 2;
                }
                out.push_back(p);
            }
        }
    }
    return out;
}

namespace {

double mean_row_correlation(const LabeledMatrix& a, const LabeledMatrix& b) {
    double total = 0;
    std::size_t n = 0;
    for (std::size_t r = 0; r < a.n_features(); ++r) {
        double c = stats::pearson(a.row(r), b.row(r));
        if (!std::isnan(c)) {
            total += c;
            ++n;
        }
    }
    return n ? total / static_cast<double>(n) : std::numeric_limits<double>::quiet_NaN();
}

double max_abs_deviation(const LabeledMatrix& a, const LabeledMatrix& b) {
    double out = 0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        if (!is_missing(a.values[i]) && !is_missing(b.values[i])) {
            out = std::max(out, std::abs(a.values[i] - b.values[i]));
        }
    }
    return out;
}

}  // namespace

PipelineFit infer_pipeline(const LabeledMatrix& query, const LabeledMatrix& reference,
                           const std::vector<TransformPipeline>& candidates) {
    if (candidates.empty()) {
        throw Error("infer_pipeline: empty candidate list");
    }
    if (query.n_features() != reference.n_features() || query.n_samples() != reference.n_samples()) {
        throw Error("infer_pipeline: query is " + std::to_string(query.n_features()) + "x" +
                    std::to_string(query.n_samples()) + " but reference is " +
                    std::to_string(reference.n_features()) + "x" + std::to_string(reference.n_samples()));
    }

    PipelineFit result;
    result.candidate_fits.assign(candidates.size(), std::numeric_limits<double>::quiet_NaN());
    std::optional<std::size_t> best;
    LabeledMatrix best_output;

    for (std::size_t i = 0; i < candidates.size(); ++i) {
        LabeledMatrix transformed;
        try {
            transformed = apply_pipeline(reference, candidates[i]);
        } catch (const DegenerateDataError&) {
            continue;
        }
        const double fit = mean_row_correlation(query, transformed);
        result.candidate_fits[i] = fit;
        if (std::isnan(fit)) {
            continue;
        }

        bool better = false;
        if (!best) {
            better = true;
        } else {
            const double current = result.candidate_fits[*best];
            if (fit > current + kTieTolerance) {
                better = true;
            } else if (std::abs(fit - current) <= kTieTolerance &&
                       candidates[i].step_count() < candidates[*best].step_count()) {
                better = true;
            }
        }
        if (better) {
            best = i;
            best_output = std::move(transformed);
        }
    }

    if (!best) {
        throw Error("infer_pipeline: no candidate could be applied to the reference");
    }
    result.best = candidates[*best];
    result.best_index = *best;
    result.fit = result.candidate_fits[*best];
    result.residual = max_abs_deviation(query, best_output);
    return result;
}

}  // namespace arrayaudit::transform
