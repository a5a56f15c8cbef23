#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hwd/backbone.hpp"
#include "hwd/imaging.hpp"
#include "hwd/metrics.hpp"

namespace hwd {

// Per-writer reference/candidate halves over item indices.
struct SplitPlan {
  std::uint64_t seed = 0;
  std::vector<std::string> writers;  // sorted
  std::vector<std::vector<std::size_t>> reference;
  std::vector<std::vector<std::size_t>> candidate;
  std::vector<std::string> warnings;
};

// labels[i] is the writer of item i. Each writer's items are shuffled from
// the seed; the reference half takes ceil(n/2). Writers with < 2 items are
// excluded with a warning; none eligible throws ContractError.
SplitPlan build_split(const std::vector<std::string>& labels, std::uint64_t seed);

struct PairDistributions {
  std::vector<double> genuine;
  std::vector<double> impostor;
};

// Distance between two sets of items (lower = more alike).
using SetScorer = std::function<double(const std::vector<std::size_t>& real, const std::vector<std::size_t>& gen)>;

// Genuine: reference vs candidate of the same writer. Impostor: reference of
// m vs candidates of up to `impostors_per_writer` other writers, drawn without
// replacement (negative = min(M-1, 10)).
PairDistributions pair_scores(const SplitPlan& split, const SetScorer& score, int impostors_per_writer, std::uint64_t seed);

// Scorer over extracted bags indexed like the split's items.
SetScorer bag_scorer(const std::vector<FeatureBag>& bags, ScoreKind kind, ScoreOptions options = {});

// Shared-range equal-width histograms, sum of bin-wise minima, in [0, 1].
double overlap_coefficient(const PairDistributions& d, int bins = 50);
// Threshold sweep over the sorted union of scores; FAR = impostors < t,
// FRR = genuine >= t; midpoint at the smallest t minimizing |FAR - FRR|.
double eer(const PairDistributions& d);

// Nearest-rank percentile, p in (0, 100].
double percentile_nearest_rank(std::vector<double> values, double p);

struct StabilityRow {
  std::string candidate;
  int size = 0;
  double mean = 0.0, p25 = 0.0, p75 = 0.0;
  std::vector<double> values;
};

struct StabilityTable {
  std::vector<StabilityRow> rows;
  std::vector<std::string> warnings;
};

struct NamedBagSet {
  std::string name;
  std::vector<FeatureBag> bags;
};

// For every (candidate, size) cell, `runs` seeded subsets of `size` candidate
// images are scored against the full reference.
StabilityTable stability_sweep(const std::vector<FeatureBag>& reference, const std::vector<NamedBagSet>& candidates,
                               const std::vector<int>& sizes, int runs, ScoreKind kind, const ScoreOptions& options,
                               std::uint64_t seed);

enum class Alteration { Shear, Erode, Dilate };
std::string to_string(Alteration a);
Alteration alteration_from_string(const std::string& name);
TextImage apply_alteration(const TextImage& image, Alteration a, double level);

// A (portion, distance) pairing such as whole/euclidean or begin/frechet.
struct Pipeline {
  std::string name;
  Portion portion = Portion::Whole;
  ScoreKind kind = ScoreKind::HWD;
  ScoreOptions options;
};
Pipeline make_pipeline(Portion portion, ScoreKind kind, const ScoreOptions& options = {});
std::string to_string(Portion p);
Portion portion_from_string(const std::string& name);  // whole|begin

struct AlterationRow {
  double level = 0.0;
  std::vector<double> scores;  // one per pipeline
};

// Score of the unaltered set against the set altered at each level.
std::vector<AlterationRow> alteration_sweep(const std::vector<TextImage>& images, Alteration alteration,
                                            const std::vector<double>& levels, const Backbone& backbone,
                                            const std::vector<Pipeline>& pipelines);

struct TimingEntry {
  std::string pipeline;
  double representation_seconds = 0.0;
  double distance_seconds = 0.0;
};

// Extraction time over all images, and the distance step between the first
// and second half of the extracted bags.
std::vector<TimingEntry> timing_report(const std::vector<TextImage>& images, const Backbone& backbone,
                                       const std::vector<Pipeline>& pipelines);
// Wall time of score_sets alone.
double distance_step_seconds(ScoreKind kind, const BagRefs& real, const BagRefs& gen, const ScoreOptions& options = {});

}  // namespace hwd
