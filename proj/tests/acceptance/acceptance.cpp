// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
//   acceptance <corpus_dir> <cli_path> <work_dir>

#include <sys/wait.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "arrayaudit/audit.hpp"
#include "arrayaudit/dupscan.hpp"
#include "arrayaudit/groupsearch.hpp"
#include "arrayaudit/ingest.hpp"
#include "arrayaudit/integrity.hpp"
#include "arrayaudit/matchscan.hpp"
#include "arrayaudit/report.hpp"
#include "arrayaudit/signature.hpp"
#include "arrayaudit/synth.hpp"
#include "arrayaudit/transform.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace arrayaudit;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (pass) {
                detail.str("");
            }
            pass = false;
            detail << what << "; ";
        }
    }
};

fs::path g_corpus, g_cli, g_work;

// ---------------------------------------------------------------- 1
void duplicates(Outcome& o) {
    for (std::uint64_t seed : {1, 2, 3, 17, 2007}) {
        const auto fix = synth::doxorubicin_test_set(seed);
        const auto& m = fix.matrix;
        const auto comps = dupscan::find_duplicate_columns(m);
        o.require(m.n_samples() == 122, "seed " + std::to_string(seed) + ": not 122 columns");
        o.require(comps.n_distinct == 84, "seed " + std::to_string(seed) + ": n_distinct " +
                                              std::to_string(comps.n_distinct));
        const auto lc = dupscan::classify_duplicate_labels(comps, m.labels);
        const std::set<std::string> pinned{m.sample_ids[31], m.sample_ids[65], m.sample_ids[88], m.sample_ids[116]};
        bool found = false;
        for (const auto& c : lc.inconsistent) {
            const std::set<std::string> members(c.members.begin(), c.members.end());
            found |= members == pinned && c.labels.at(GroupLabel::Sensitive) == 1 &&
                     c.labels.at(GroupLabel::Resistant) == 3;
        }
        o.require(!lc.inconsistent.empty() && found, "seed " + std::to_string(seed) + ": S/R/R/R component missing");
    }
    if (o.pass) {
        o.detail << "84 distinct of 122 and the S/R/R/R quad at columns 32,66,89,117 on 5 seeds";
    }
}

// ---------------------------------------------------------------- 2
void roster(Outcome& o) {
    const auto fix = synth::doxorubicin_roster(1);
    const auto d = dupscan::roster_duplicates(fix.roster);
    o.require(fix.roster.entries.size() == 95, "roster has " + std::to_string(fix.roster.entries.size()) + " rows");
    o.require(d.n_distinct == 80 && d.duplicated_ids.size() == 15 && d.inconsistent_ids.size() == 6,
              "roster_duplicates = (" + std::to_string(d.n_distinct) + ", " + std::to_string(d.duplicated_ids.size()) +
                  ", " + std::to_string(d.inconsistent_ids.size()) + ")");
    const auto t = dupscan::cross_tabulate(dupscan::collapse_roster(fix.roster), dupscan::collapse_roster(fix.reference));
    using dupscan::Call;
    const std::vector<Call> rows{Call::Sensitive, Call::Resistant, Call::Both};
    const std::vector<Call> cols{Call::Sensitive, Call::Intermediate, Call::Resistant};
    const std::vector<std::vector<std::size_t>> expected{{13, 0, 0}, {29, 10, 22}, {6, 0, 0}};
    o.require(t.row_levels == rows && t.col_levels == cols, "unexpected table levels");
    if (t.row_levels == rows && t.col_levels == cols) {
        o.require(t.counts == expected, "cell counts differ");
        o.require(t.col_margins == std::vector<std::size_t>{48, 10, 22} && t.total == 80, "margins differ");
    }
    if (o.pass) {
        o.detail << "(80, 15, 6); table S 13/0/0, R 29/10/22, Both 6/0/0";
    }
}

// ---------------------------------------------------------------- 3
void pipeline_recovery(Outcome& o) {
    const auto grid = transform::default_candidates();
    std::size_t n_ok = 0;
    double worst_exact = 0, worst_rounded = 1;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        synth::Rng rng(1000 + i);
        const auto ref = synth::random_matrix(rng, 200, 20);
        const auto query = transform::apply_pipeline(ref, grid[i]);
        const auto fit = transform::infer_pipeline(query, ref, grid);
        const bool rounded = grid[i].round_digits.has_value();
        bool ok = fit.best == grid[i];
        if (rounded) {
            ok &= fit.fit >= 0.999;
            worst_rounded = std::min(worst_rounded, fit.fit);
        } else {
            ok &= std::abs(fit.fit - 1.0) <= 1e-12;
            worst_exact = std::max(worst_exact, std::abs(fit.fit - 1.0));
        }
        o.require(ok, to_string(grid[i]) + " -> " + to_string(fit.best) + " fit " + std::to_string(fit.fit));
        n_ok += ok;
    }
    if (o.pass) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%zu/%zu pipelines recovered; max |fit-1| %.1e unrounded, min fit %.6f with round",
                      n_ok, grid.size(), worst_exact, worst_rounded);
        o.detail << buf;
    }
}

// ---------------------------------------------------------------- 4
void row_identification(Outcome& o) {
    synth::Rng rng(4);
    const auto ref = synth::random_matrix(rng, 1000, 22);
    const auto p = transform::parse_pipeline("log:2|zscore:n-1|exp:2");
    const auto transformed = transform::apply_pipeline(ref, p);
    std::vector<std::size_t> perm(ref.n_features());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    LabeledMatrix query;
    query.sample_ids = ref.sample_ids;
    for (std::size_t i = 0; i < perm.size(); ++i) {
        query.feature_ids.push_back("q" + std::to_string(i));
        const auto r = transformed.row(perm[i]);
        query.values.insert(query.values.end(), r.begin(), r.end());
    }
    // Pipeline inferred on the aligned pair, then the shuffled rows matched blind.
    const auto fit = transform::infer_pipeline(transformed, ref, transform::default_candidates());
    o.require(fit.best == p, "inferred pipeline " + to_string(fit.best));
    const auto r = matchscan::match_rows(query, transform::apply_pipeline(ref, fit.best), 0.999);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < perm.size(); ++i) {
        correct += r.mapping[i] && *r.mapping[i] == perm[i];
    }
    o.require(correct == 1000 && r.stats.ambiguous == 0,
              std::to_string(correct) + "/1000 correct, " + std::to_string(r.stats.ambiguous) + " ambiguous");
    if (o.pass) {
        o.detail << "1000/1000 rows matched to their source, 0 ambiguous, pipeline " << to_string(fit.best);
    }
}

// ---------------------------------------------------------------- 5
void offsets(Outcome& o) {
    std::size_t trials = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        for (int k = -3; k <= 3; ++k) {
            const auto fix = synth::planted_offset(seed, k);
            const auto r = matchscan::detect_offset(fix.reported, fix.annotation, fix.generated, 3);
            o.require(r.best_shift == k,
                      "seed " + std::to_string(seed) + " shift " + std::to_string(k) + " -> " + std::to_string(r.best_shift));
            ++trials;
        }
    }
    const auto cis = synth::cisplatin_signature(5);
    const auto r = matchscan::detect_offset(cis.reported, cis.annotation, cis.generated, 3);
    const auto absent = matchscan::check_platform_membership(cis.reported, cis.annotation);
    const std::set<std::string> outliers(r.outliers.begin(), r.outliers.end());
    o.require(r.best_shift == 1 && r.overlap_at_best == 41 && cis.reported.size() == 45,
              "cisplatin shift " + std::to_string(r.best_shift) + " overlap " + std::to_string(r.overlap_at_best));
    o.require(outliers == std::set<std::string>(cis.outliers.begin(), cis.outliers.end()) && outliers.size() == 4,
              "cisplatin outliers differ");
    o.require(std::set<std::string>(absent.begin(), absent.end()) ==
                      std::set<std::string>{"228131_at", "231971_at"},
              "platform-absent ids differ");
    if (o.pass) {
        o.detail << trials << "/" << trials << " planted shifts recovered; cisplatin overlap 41/45, 4 outliers, 2 absent";
    }
}

// ---------------------------------------------------------------- 6
void group_search(Outcome& o) {
    std::size_t runs = 0, recovered = 0;
    for (std::size_t n_lines : {20, 24, 30}) {
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            const auto fix = synth::planted_panel(seed * 100 + n_lines, n_lines);
            synth::Rng rng(seed);
            for (int errors = 0; errors <= 2; ++errors) {
                auto start = fix.planted;
                std::vector<std::size_t> idx(n_lines);
                std::iota(idx.begin(), idx.end(), 0);
                std::shuffle(idx.begin(), idx.end(), rng);
                for (int e = 0; e < errors; ++e) {
                    auto& s = start[idx[e]];
                    const int shift = 1 + static_cast<int>(rng() % 2);
                    s = static_cast<groupsearch::LineState>((static_cast<int>(s) + shift) % 3);
                }
                const auto r = groupsearch::steepest_ascent(start, fix.panel, fix.target, fix.k);
                ++runs;
                const bool ok = r.final_assignment == fix.planted;
                recovered += ok;
                o.require(ok, "N=" + std::to_string(n_lines) + " seed " + std::to_string(seed) + " errors " +
                                  std::to_string(errors) + ": final score " + std::to_string(r.final_score) + "/" +
                                  std::to_string(fix.k));
                std::size_t prev = r.start_score;
                for (const auto& m : r.trajectory) {
                    o.require(m.score > prev, "trajectory not strictly increasing");
                    prev = m.score;
                }
                for (auto n : r.neighbors_per_step) {
                    o.require(n == 2 * n_lines, "neighbour count " + std::to_string(n) + " != 2N");
                }
            }
        }
    }
    if (o.pass) {
        o.detail << recovered << "/" << runs << " planted assignments recovered from <=2-error starts (N=20,24,30); "
                 << "trajectories strictly increasing; 2N neighbours per step";
    }
}

// ---------------------------------------------------------------- 7
double brute_auc(const std::vector<double>& s, const std::vector<int>& y) {
    double num = 0, den = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (y[i] == 1 && y[j] == 0) {
                den += 1;
                num += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
            }
        }
    }
    return num / den;
}

void numeric_kernels(Outcome& o) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> z;
    std::uniform_real_distribution<double> u(-1, 1);

    // Probit gradient against central differences.
    double worst_grad = 0;
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 20 + rng() % 40;
        std::vector<double> s(n);
        std::vector<int> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = z(rng);
            y[i] = static_cast<int>(rng() % 2);
        }
        const double a = u(rng), b = 2 * u(rng);
        const auto g = signature::probit_gradient(a, b, s, y);
        const double h = 1e-6;
        const double fa = (signature::probit_log_likelihood(a + h, b, s, y) -
                           signature::probit_log_likelihood(a - h, b, s, y)) / (2 * h);
        const double fb = (signature::probit_log_likelihood(a, b + h, s, y) -
                           signature::probit_log_likelihood(a, b - h, s, y)) / (2 * h);
        const double rel = std::hypot(g[0] - fa, g[1] - fb) / std::max(1.0, std::hypot(fa, fb));
        worst_grad = std::max(worst_grad, rel);
    }
    o.require(worst_grad <= 1e-5, "probit gradient rel. error " + std::to_string(worst_grad));

    // Metagene scores against a dense eigensolve of the gene-gene Gram matrix.
    double worst_meta = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        synth::Rng r(seed);
        const std::size_t nf = 5 + seed * 3, ns = 8 + (seed * 7) % 30;
        auto m = synth::random_matrix(r, nf, ns);
        // A shared factor so the leading direction is well separated.
        std::vector<double> factor(ns);
        for (auto& f : factor) f = z(r);
        for (std::size_t i = 0; i < nf; ++i) {
            const double w = z(r);
            for (std::size_t j = 0; j < ns; ++j) m.at(i, j) = std::log(m.at(i, j)) + 3 * w * factor[j];
        }
        const auto got = signature::metagene_scores(m);
        Eigen::MatrixXd x(nf, ns);
        for (std::size_t i = 0; i < nf; ++i) {
            double mean = 0;
            for (std::size_t j = 0; j < ns; ++j) mean += m.at(i, j);
            mean /= static_cast<double>(ns);
            for (std::size_t j = 0; j < ns; ++j) x(i, j) = m.at(i, j) - mean;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x * x.transpose());
        Eigen::VectorXd uvec = es.eigenvectors().col(nf - 1);
        Eigen::Index imax = 0;
        for (Eigen::Index i = 1; i < uvec.size(); ++i) {
            if (std::abs(uvec(i)) > std::abs(uvec(imax)) + 1e-12) imax = i;
        }
        if (uvec(imax) < 0) uvec = -uvec;
        const Eigen::VectorXd scores = x.transpose() * uvec;
        for (std::size_t j = 0; j < ns; ++j) {
            worst_meta = std::max(worst_meta, std::abs(scores(static_cast<Eigen::Index>(j)) - got.scores[j]) /
                                                  std::max(1.0, std::abs(scores(static_cast<Eigen::Index>(j)))));
        }
    }
    o.require(worst_meta <= 1e-8, "metagene scores differ by " + std::to_string(worst_meta));

    // AUC against pair concordance, and label inversion.
    double worst_auc = 0;
    bool inversion_exact = true;
    for (int t = 0; t < 500; ++t) {
        const std::size_t n = 2 + rng() % 60;
        std::vector<double> s(n);
        std::vector<int> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = (t % 2) ? std::round(3 * z(rng)) : z(rng);  // half the instances have ties
            y[i] = static_cast<int>(rng() % 2);
        }
        y[0] = 1;
        y[1] = 0;
        worst_auc = std::max(worst_auc, std::abs(signature::auc(s, y) - brute_auc(s, y)));
        std::vector<int> inv(n);
        for (std::size_t i = 0; i < n; ++i) inv[i] = 1 - y[i];
        const auto f = signature::auc_fraction(s, y), g = signature::auc_fraction(s, inv);
        inversion_exact &= f.denominator == g.denominator && f.numerator + g.numerator == f.denominator;
    }
    o.require(worst_auc <= 1e-12, "AUC differs from pair concordance by " + std::to_string(worst_auc));
    o.require(inversion_exact, "AUC(inverted) != 1 - AUC");
    if (o.pass) {
        char buf[200];
        std::snprintf(buf, sizeof buf, "gradient rel. err %.1e; metagene err %.1e; AUC err %.1e over 500; inversion exact",
                      worst_grad, worst_meta, worst_auc);
        o.detail << buf;
    }
}

// ---------------------------------------------------------------- 8
void combination_rules(Outcome& o) {
    using integrity::CombinationRule;
    const auto tfac = integrity::combine_probabilities({{"T", .5}, {"F", .5}, {"A", .5}, {"C", .5}},
                                                       CombinationRule::SumMinusProduct);
    o.require(tfac.raw == 1.9375, "TFAC raw " + std::to_string(tfac.raw));
    const auto tet = integrity::combine_probabilities({{"E", .3}, {"T", .8}}, CombinationRule::Max);
    o.require(tet.score == 0.8, "TET " + std::to_string(tet.score));
    const auto fec = integrity::combine_probabilities({{"F", .2}, {"E", .4}, {"C", .6}}, CombinationRule::AffineMean);
    o.require(std::abs(fec.score - 0.5) < 1e-15, "FEC " + std::to_string(fec.score));
    const auto clip = integrity::combine_probabilities({{"F", 1}, {"E", 1}, {"C", 1}}, CombinationRule::AffineMean);
    o.require(clip.raw == 1.625 && clip.score == 1.0, "FEC clip " + std::to_string(clip.raw) + " -> " +
                                                           std::to_string(clip.score));
    std::vector<std::map<std::string, double>> batch{
        {{"T", .1}, {"F", .2}, {"A", .3}, {"C", .4}},
        {{"T", .9}, {"F", .8}, {"A", .7}, {"C", .6}},
        {{"T", .5}, {"F", .5}, {"A", .5}, {"C", .5}}};
    const auto norm = integrity::combine_batch(batch, CombinationRule::SumMinusProduct);
    o.require(norm[0].score == 0.0 && norm[1].score == 1.0 && norm[2].score > 0 && norm[2].score < 1,
              "TFAC batch endpoints");
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0, 1);
    bool bounded = true;
    for (int t = 0; t < 10000; ++t) {
        const auto s = integrity::combine_probabilities({{"F", u(rng)}, {"E", u(rng)}, {"C", u(rng)}},
                                                        CombinationRule::AffineMean);
        bounded &= s.score >= 0 && s.score <= 1;
    }
    o.require(bounded, "AffineMean left [0,1]");
    if (o.pass) {
        o.detail << "TFAC 1.9375, TET max, FEC 0.5, clip 1.625 -> 1, batch 0..1, 10^4 AffineMean draws in [0,1]";
    }
}

// ---------------------------------------------------------------- 9
void confounding(Outcome& o) {
    auto included = [](const std::vector<SampleMeta>& all) {
        std::vector<SampleMeta> out;
        for (const auto& m : all) {
            if (m.included) out.push_back(m);
        }
        return out;
    };
    auto analyse = [](const std::vector<SampleMeta>& metas) {
        const auto b = integrity::infer_batches(metas);
        std::vector<std::string> groups, arms;
        for (std::size_t i = 0; i < metas.size(); ++i) {
            groups.push_back("batch" + std::to_string(b[i]));
            arms.push_back(metas[i].treatment_arm);
        }
        return std::pair{*std::max_element(b.begin(), b.end()), integrity::test_confounding(groups, arms)};
    };
    const auto [n_batches, r] = analyse(included(synth::fec_tet_meta(41)));
    o.require(n_batches == 3, std::to_string(n_batches) + " batches");
    o.require(r.perfect && std::abs(r.cramers_v - 1.0) < 1e-12, "FEC/TET not perfect, V " + std::to_string(r.cramers_v));
    double worst = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto [nb, rb] = analyse(synth::balanced_meta(seed, 200));
        o.require(!rb.perfect && rb.cramers_v < 0.15, "balanced seed " + std::to_string(seed) + " V " +
                                                           std::to_string(rb.cramers_v));
        o.require(nb == 3, "balanced seed " + std::to_string(seed) + ": " + std::to_string(nb) + " batches");
        worst = std::max(worst, rb.cramers_v);
    }
    if (o.pass) {
        o.detail << "FEC/TET: 3 batches, perfect, V = 1; balanced n=200 x 20 seeds: max V " << worst;
    }
}

// ---------------------------------------------------------------- 10
std::size_t scan_misfits(const integrity::LabeledValues& v) {
    std::vector<double> all = v.sensitive;
    all.insert(all.end(), v.resistant.begin(), v.resistant.end());
    std::vector<double> cuts{-INFINITY, INFINITY};
    for (double a : all) cuts.push_back(a);  // "value >= a means Sensitive"
    std::size_t best = SIZE_MAX;
    for (double t : cuts) {
        std::size_t mis = 0;
        for (double s : v.sensitive) mis += !(s >= t);
        for (double r : v.resistant) mis += r >= t;
        best = std::min(best, mis);
    }
    return best;
}

void dose_response(Outcome& o) {
    std::mt19937_64 rng(10);
    std::normal_distribution<double> z;
    std::size_t agree = 0;
    for (int t = 0; t < 1000; ++t) {
        integrity::LabeledValues v;
        const std::size_t ns = 1 + rng() % 15, nr = 1 + rng() % 15;
        const double shift = 2 * z(rng);
        const bool coarse = t % 3 == 0;
        for (std::size_t i = 0; i < ns; ++i) v.sensitive.push_back(coarse ? std::round(z(rng) + shift) : z(rng) + shift);
        for (std::size_t i = 0; i < nr; ++i) v.resistant.push_back(coarse ? std::round(z(rng)) : z(rng));
        const auto r = integrity::check_separation(v);
        const auto expected = scan_misfits(v);
        agree += r.misfit_count == expected && r.overlap == (expected > 0);
    }
    o.require(agree == 1000, std::to_string(agree) + "/1000 separation results agree");
    const auto pem = synth::pemetrexed_dose(3, true);
    LabelMap labels;
    for (const auto& e : pem.labels.entries) labels[e.sample_id] = e.label;
    const auto rev = integrity::check_reversal(integrity::gather(pem.records, labels, pem.drug, Measure::GI50));
    o.require(rev.reversed, "pemetrexed fixture not flagged (AUC " + std::to_string(rev.auc) + ")");
    const auto flat = integrity::check_flat_response(
        integrity::gather_all(synth::flat_dose(3), "cyclophosphamide", Measure::GI50));
    o.require(flat.flat, "flat fixture not flagged (IQR " + std::to_string(flat.iqr) + ")");
    if (o.pass) {
        o.detail << "1000/1000 separation scans agree; LABEL_REVERSAL at AUC " << rev.auc << "; FLAT_RESPONSE at IQR "
                 << flat.iqr;
    }
}

// ---------------------------------------------------------------- 11
int run_cli(const std::string& args) {
    const std::string cmd = "\"" + g_cli.string() + "\" " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void end_to_end(Outcome& o) {
    fs::create_directories(g_work);
    const auto out1 = g_work / "corrupted_1.json", out2 = g_work / "corrupted_2.json";
    const auto manifest = g_corpus / "corrupted" / "manifest.json";
    const int rc1 = run_cli("report run --quiet --manifest \"" + manifest.string() + "\" --out \"" + out1.string() + "\"");
    const int rc2 = run_cli("report run --quiet --manifest \"" + manifest.string() + "\" --out \"" + out2.string() + "\"");
    o.require(rc1 == 2 && rc2 == 2, "corrupted corpus exit " + std::to_string(rc1));
    std::string a, b;
    try {
        a = ingest::read_file(out1.string());
        b = ingest::read_file(out2.string());
    } catch (const Error& e) {
        o.require(false, e.what());
        return;
    }
    o.require(!a.empty() && a == b, "reports differ between runs");
    const auto problems = report::validate_report_json(a);
    o.require(problems.empty(), "report invalid: " + (problems.empty() ? std::string() : problems.front()));
    std::set<std::string> codes;
    const auto doc = nlohmann::json::parse(a);
    for (const auto& f : doc["findings"]) codes.insert(f["code"].get<std::string>());
    for (const char* need : {"DUP_INCONSISTENT_LABELS", "OFFSET_DETECTED", "SENTINEL_VIOLATION", "CONFOUND_PERFECT",
                             "REUSED_ARTIFACT", "LABELING_FLIP"}) {
        o.require(codes.count(need) == 1, std::string("missing ") + need);
    }
    const auto clean_out = g_work / "clean.json";
    const int rc_clean = run_cli("report run --quiet --manifest \"" + (g_corpus / "clean" / "manifest.json").string() +
                                 "\" --out \"" + clean_out.string() + "\"");
    o.require(rc_clean == 0, "clean corpus exit " + std::to_string(rc_clean));
    if (o.pass) {
        o.detail << "corrupted: exit 2, " << codes.size() << " distinct codes, valid, byte-identical reruns; clean: exit 0";
    }
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 4) {
        std::cerr << "usage: acceptance <corpus_dir> <cli_path> <work_dir>\n";
        return 2;
    }
    g_corpus = argv[1];
    g_cli = argv[2];
    g_work = argv[3];

    const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
        {"duplicate columns on the 122-column fixture", duplicates},
        {"roster duplicates and paired-labeling table", roster},
        {"pipeline recovery over the default grid", pipeline_recovery},
        {"row identification, 1000x22", row_identification},
        {"offset recovery", offsets},
        {"steepest-ascent group search", group_search},
        {"numeric kernels", numeric_kernels},
        {"combination rules", combination_rules},
        {"confounding", confounding},
        {"dose-response checks", dose_response},
        {"end-to-end report run", end_to_end},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            criteria[i].second(o);
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        failed += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " [" << (i + 1) << "] " << criteria[i].first << ": "
                  << o.detail.str() << std::endl;
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
    return failed ? 1 : 0;
}
