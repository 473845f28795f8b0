#ifndef ARRAYAUDIT_SYNTH_HPP
#define ARRAYAUDIT_SYNTH_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "core.hpp"
#include "dupscan.hpp"
#include "groupsearch.hpp"

/**
 * @file synth.hpp
 *
 * @brief Seeded generators for planted-structure datasets.
 *
 * Each generator plants one known defect (or its absence) so detectors can be
 * checked against the ground truth. Output is a pure function of the seed
 * for a given standard library.
 */

namespace arrayaudit::synth {

using Rng = std::mt19937_64;

/** The 60 lines of the public cell-line panel, in panel order. */
const std::vector<std::string>& panel_lines();

/** Features x samples of independent log-normal intensities (log mean `mu`, log sd `sigma`). */
LabeledMatrix random_matrix(Rng& rng, std::size_t n_features, std::size_t n_samples, double mu = 6.0,
                            double sigma = 1.0, const std::string& feature_prefix = "g",
                            const std::string& sample_prefix = "s");

struct DuplicateFixture {
    LabeledMatrix matrix;
    /** Planted groups (column indices, ascending), including singletons. */
    std::vector<std::vector<std::size_t>> groups;
};

/**
 * Columns drawn from `multiplicities` (copies -> number of distinct samples),
 * placed in random order. Copies differ from their source by multiplicative
 * noise of relative size `copy_noise`, so they correlate above 0.9999 without
 * being bitwise equal. No labels.
 */
DuplicateFixture planted_duplicates(std::uint64_t seed, std::size_t n_features,
                                    const std::map<std::size_t, std::size_t>& multiplicities,
                                    double copy_noise = 1e-5);

/**
 * 122-column test set with multiplicities {1:60, 2:14, 3:6, 4:4}, 99 columns
 * labeled Resistant and 23 Sensitive. Columns 32, 66, 89 and 117 (1-based)
 * hold one sample labeled Sensitive, Resistant, Resistant, Resistant; one
 * further pair and one triple are also labeled inconsistently.
 */
DuplicateFixture doxorubicin_test_set(std::uint64_t seed, std::size_t n_features = 200);

/** Same shape and label census, every column distinct. */
LabeledMatrix distinct_test_set(std::uint64_t seed, std::size_t n_features = 200);

struct RosterFixture {
    /** 95 entries over 80 ids; 15 ids listed twice, 6 of them both ways. */
    LabelRoster roster;
    /** Three-way calls (Sensitive/Intermediate/Resistant) for the 80 ids. */
    LabelRoster reference;
};

/**
 * Cross-tabulating `collapse_roster(roster)` against `collapse_roster(reference)`
 * gives rows Sensitive (13,0,0), Resistant (29,10,22), Both (6,0,0). The
 * first 20 roster rows are fixed; the rest are shuffled by `seed`.
 */
RosterFixture doxorubicin_roster(std::uint64_t seed = 1);

/** 80 ids, each once, labels matching `reference`. */
RosterFixture clean_roster(std::uint64_t seed = 1);

/**
 * 22-line training panel (features x lines). 10 lines labeled Resistant and
 * 12 Sensitive; with `reversed` the drug-resistant line NCI/ADR-RES sits in
 * the Sensitive group, otherwise the groups are swapped back.
 */
LabeledMatrix training_panel(std::uint64_t seed, bool reversed, std::size_t n_features = 200);

struct OffsetFixture {
    AnnotationIndex annotation;
    SignatureList reported;
    SignatureList generated;
    /** Reported ids with no counterpart at the planted shift. */
    std::vector<std::string> outliers;
    /** Reported ids not on the platform. */
    std::vector<std::string> absent;
    int shift = 0;
};

/**
 * Annotation of `n_annotation` ids and a generated list of `n_signature` ids;
 * the reported list is the generated one displaced by `-shift` rows, with a
 * fraction `contamination` of entries replaced by ids foreign to the
 * platform. `detect_offset(reported, annotation, generated, .)` should find
 * `shift`.
 */
OffsetFixture planted_offset(std::uint64_t seed, int shift, std::size_t n_annotation = 2000,
                             std::size_t n_signature = 45, double contamination = 0.1);

/**
 * Platform of 22385 probe-style ids (200000_at ... 222384_at). 45 reported
 * ids: 41 sit one row before their generated counterpart, 203719_at and
 * 210158_at are on the platform but match nothing, 228131_at and 231971_at
 * are not on the platform. With `offset = false` the reported list equals
 * the generated one.
 */
OffsetFixture cisplatin_signature(std::uint64_t seed, bool offset = true);

/**
 * Samples x `features`: expression on the platform of `fix` for the listed
 * feature ids (row order as given), log-normal values.
 */
LabeledMatrix expression_for(std::uint64_t seed, const std::vector<std::string>& features, std::size_t n_samples,
                             const std::string& sample_prefix = "p");

/** Copy of `m` with values rounded to `digits` decimals. */
LabeledMatrix rounded(const LabeledMatrix& m, int digits);

/**
 * Temozolomide-style signature: 20 genes with directions; RRAGD, SFN and
 * SLC43A3 are listed in both directions when `conflicting`.
 */
SignatureList direction_signature(bool conflicting);

struct PanelFixture {
    LabeledMatrix panel;
    groupsearch::Assignment planted;
    SignatureList target;
    std::size_t k = 0;
};

/**
 * Panel of `n_lines` lines (a third Sensitive, a third Resistant, the rest
 * Unused) over `n_genes` genes; `n_core` genes differ between the groups by
 * `effect` standard deviations and Unused lines sit midway. The target is
 * the default generator's top-`k` list for the planted assignment, so it is
 * reproduced exactly only there.
 */
PanelFixture planted_panel(std::uint64_t seed, std::size_t n_lines, double effect = 4.0, std::size_t n_genes = 2000,
                           std::size_t n_core = 10, std::size_t k = 45);

/**
 * Trial metadata: FEC patients run in two blocks (months apart) on one
 * scanner, TET patients in a third block on another. A few excluded arrays
 * are interleaved. With `confounded = false` both arms appear in every block.
 */
std::vector<SampleMeta> fec_tet_meta(std::uint64_t seed, bool confounded = true);

/**
 * `n` samples in `n_batches` time blocks with two arms assigned by blocked
 * randomization inside each block.
 */
std::vector<SampleMeta> balanced_meta(std::uint64_t seed, std::size_t n = 200, std::size_t n_batches = 3);

/**
 * Features x samples with `block_sizes.size()` planted blocks; samples in one
 * block share a latent profile (within-block correlation ~0.95), different
 * blocks are independent.
 */
LabeledMatrix block_matrix(std::uint64_t seed, const std::vector<std::size_t>& block_sizes,
                           std::size_t n_features = 300);

struct DoseFixture {
    std::vector<SensitivityRecord> records;
    /** Cell-line group labels for `drug`. */
    LabelRoster labels;
    std::string drug;
};

/**
 * GI50 values across the 60-line panel, bimodal two units apart. 10 lines
 * labeled Sensitive and 8 Resistant; with `reversed` the Sensitive ones are
 * drawn from the less potent mode.
 */
DoseFixture pemetrexed_dose(std::uint64_t seed, bool reversed);

/** GI50 within +-0.05 of a constant across the panel (prodrug-like). */
std::vector<SensitivityRecord> flat_dose(std::uint64_t seed, const std::string& drug = "cyclophosphamide");

/** Broad GI50 spread across the panel (sd 0.8). */
std::vector<SensitivityRecord> spread_dose(std::uint64_t seed, const std::string& drug);

/**
 * Twelve labeling sources over seven drugs. With `flips`, every drug that
 * has more than one source has at least one line called Sensitive by one
 * source and Resistant by another; otherwise the sources agree.
 */
std::vector<dupscan::LabelingSource> multi_source_labelings(std::uint64_t seed, bool flips);

/** Roster form of one labeling source (source id in each entry). */
LabelRoster to_roster(const dupscan::LabelingSource& source);

}  // namespace arrayaudit::synth

#endif
