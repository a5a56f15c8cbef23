#include "hwd/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <numeric>

#include "hwd/errors.hpp"
#include "hwd/rng.hpp"

namespace hwd {
namespace {

template <class T>
void shuffle_with(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng() % i]);
}

// Runs body(i) for i in [0, n) in parallel and rethrows the first failure.
template <class F>
void parallel_for(std::size_t n, F&& body) {
  std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(n); ++k) {
    try {
      body(static_cast<std::size_t>(k));
    } catch (...) {
      errors[static_cast<std::size_t>(k)] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

SplitPlan build_split(const std::vector<std::string>& labels, std::uint64_t seed) {
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) groups[labels[i]].push_back(i);
  SplitPlan plan;
  plan.seed = seed;
  for (auto& [writer, items] : groups) {
    if (items.size() < 2) {
      plan.warnings.push_back("writer '" + writer + "' has fewer than 2 images; excluded");
      continue;
    }
    Rng rng = make_rng(seed, {hash_string(writer)});
    shuffle_with(items, rng);
    const std::size_t half = (items.size() + 1) / 2;
    plan.writers.push_back(writer);
    plan.reference.emplace_back(items.begin(), items.begin() + static_cast<std::ptrdiff_t>(half));
    plan.candidate.emplace_back(items.begin() + static_cast<std::ptrdiff_t>(half), items.end());
  }
  if (plan.writers.empty()) throw ContractError("build_split: no writer has at least 2 images");
  return plan;
}

PairDistributions pair_scores(const SplitPlan& split, const SetScorer& score, int impostors_per_writer, std::uint64_t seed) {
  const std::size_t m = split.writers.size();
  if (m < 2) throw ContractError("pair_scores: need at least 2 writers for impostor pairs");
  const std::size_t k = impostors_per_writer < 0 ? std::min<std::size_t>(m - 1, 10)
                                                 : std::min<std::size_t>(m - 1, static_cast<std::size_t>(impostors_per_writer));
  std::vector<std::pair<std::size_t, std::size_t>> tasks;
  for (std::size_t w = 0; w < m; ++w) tasks.emplace_back(w, w);
  for (std::size_t w = 0; w < m; ++w) {
    std::vector<std::size_t> others;
    for (std::size_t o = 0; o < m; ++o)
      if (o != w) others.push_back(o);
    Rng rng = make_rng(seed, {0x1A9u, static_cast<std::uint64_t>(w)});
    shuffle_with(others, rng);
    for (std::size_t j = 0; j < k; ++j) tasks.emplace_back(w, others[j]);
  }
  std::vector<double> values(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t i) {
    values[i] = score(split.reference[tasks[i].first], split.candidate[tasks[i].second]);
  });
  PairDistributions d;
  d.genuine.assign(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(m));
  d.impostor.assign(values.begin() + static_cast<std::ptrdiff_t>(m), values.end());
  return d;
}

SetScorer bag_scorer(const std::vector<FeatureBag>& bags, ScoreKind kind, ScoreOptions options) {
  return [&bags, kind, options](const std::vector<std::size_t>& real, const std::vector<std::size_t>& gen) {
    BagRefs r, g;
    for (std::size_t i : real) r.push_back(&bags.at(i));
    for (std::size_t i : gen) g.push_back(&bags.at(i));
    return score_sets(kind, r, g, options);
  };
}

double overlap_coefficient(const PairDistributions& d, int bins) {
  if (bins < 2) throw ContractError("overlap_coefficient: bins must be >= 2");
  if (d.genuine.empty() || d.impostor.empty()) throw ContractError("overlap_coefficient: empty distribution");
  double lo = d.genuine.front(), hi = lo;
  for (const auto* v : {&d.genuine, &d.impostor})
    for (double x : *v) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  if (hi == lo) return 1.0;  // both are the same constant
  auto hist = [&](const std::vector<double>& v) {
    std::vector<double> h(static_cast<std::size_t>(bins), 0.0);
    for (double x : v) {
      const int b = std::min(bins - 1, static_cast<int>((x - lo) / (hi - lo) * bins));
      h[static_cast<std::size_t>(b)] += 1.0;
    }
    for (double& c : h) c /= static_cast<double>(v.size());
    return h;
  };
  const auto p = hist(d.genuine), q = hist(d.impostor);
  double s = 0.0;
  for (std::size_t b = 0; b < p.size(); ++b) s += std::min(p[b], q[b]);
  return std::clamp(s, 0.0, 1.0);
}

double eer(const PairDistributions& d) {
  if (d.genuine.empty() || d.impostor.empty()) throw ContractError("eer: empty distribution");
  std::vector<double> gen = d.genuine, imp = d.impostor;
  std::sort(gen.begin(), gen.end());
  std::sort(imp.begin(), imp.end());
  std::vector<double> thresholds = gen;
  thresholds.insert(thresholds.end(), imp.begin(), imp.end());
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  const double ng = static_cast<double>(gen.size()), ni = static_cast<double>(imp.size());
  double best_gap = 2.0, best = 0.5;
  for (double t : thresholds) {
    const double far = static_cast<double>(std::lower_bound(imp.begin(), imp.end(), t) - imp.begin()) / ni;
    const double frr = static_cast<double>(gen.end() - std::lower_bound(gen.begin(), gen.end(), t)) / ng;
    const double gap = std::abs(far - frr);
    if (gap < best_gap) {
      best_gap = gap;
      best = 0.5 * (far + frr);
    }
  }
  return std::min(best, 0.5);
}

double percentile_nearest_rank(std::vector<double> values, double p) {
  if (values.empty()) throw ContractError("percentile: empty input");
  if (!(p > 0.0 && p <= 100.0)) throw ContractError("percentile: p must be in (0, 100]");
  std::sort(values.begin(), values.end());
  const auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(values.size())));
  return values[std::clamp<std::size_t>(rank, 1, values.size()) - 1];
}

StabilityTable stability_sweep(const std::vector<FeatureBag>& reference, const std::vector<NamedBagSet>& candidates,
                               const std::vector<int>& sizes, int runs, ScoreKind kind, const ScoreOptions& options,
                               std::uint64_t seed) {
  if (runs < 2) throw ContractError("stability_sweep: runs must be >= 2");
  if (reference.empty()) throw ContractError("stability_sweep: empty reference set");
  const BagRefs ref = refs(reference);

  struct Cell {
    std::size_t cand;
    int size;
  };
  StabilityTable table;
  std::vector<Cell> cells;
  for (std::size_t c = 0; c < candidates.size(); ++c)
    for (int n : sizes) {
      if (n < 1 || static_cast<std::size_t>(n) > candidates[c].bags.size()) {
        table.warnings.push_back("size " + std::to_string(n) + " skipped for '" + candidates[c].name + "' (" +
                                 std::to_string(candidates[c].bags.size()) + " images)");
        continue;
      }
      cells.push_back({c, n});
    }

  const std::size_t r = static_cast<std::size_t>(runs);
  std::vector<double> values(cells.size() * r);
  parallel_for(values.size(), [&](std::size_t t) {
    const Cell& cell = cells[t / r];
    const auto& bags = candidates[cell.cand].bags;
    Rng rng = make_rng(seed, {static_cast<std::uint64_t>(cell.cand), static_cast<std::uint64_t>(cell.size), t % r});
    std::vector<std::size_t> idx(bags.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < static_cast<std::size_t>(cell.size); ++i)
      std::swap(idx[i], idx[i + rng() % (idx.size() - i)]);
    BagRefs sub;
    for (std::size_t i = 0; i < static_cast<std::size_t>(cell.size); ++i) sub.push_back(&bags[idx[i]]);
    values[t] = score_sets(kind, ref, sub, options);
  });

  for (std::size_t i = 0; i < cells.size(); ++i) {
    StabilityRow row;
    row.candidate = candidates[cells[i].cand].name;
    row.size = cells[i].size;
    row.values.assign(values.begin() + static_cast<std::ptrdiff_t>(i * r), values.begin() + static_cast<std::ptrdiff_t>((i + 1) * r));
    double s = 0.0;
    for (double v : row.values) s += v;
    row.mean = s / static_cast<double>(r);
    row.p25 = percentile_nearest_rank(row.values, 25.0);
    row.p75 = percentile_nearest_rank(row.values, 75.0);
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string to_string(Alteration a) {
  switch (a) {
    case Alteration::Shear: return "shear";
    case Alteration::Erode: return "erode";
    case Alteration::Dilate: return "dilate";
  }
  return "unknown";
}

Alteration alteration_from_string(const std::string& name) {
  if (name == "shear") return Alteration::Shear;
  if (name == "erode") return Alteration::Erode;
  if (name == "dilate") return Alteration::Dilate;
  throw ContractError("unknown alteration '" + name + "'");
}

TextImage apply_alteration(const TextImage& image, Alteration a, double level) {
  if (a == Alteration::Shear) return shear(image, level);
  const double it = std::round(level);
  if (it != level) throw ContractError(to_string(a) + ": level must be an integer iteration count");
  return a == Alteration::Erode ? erode(image, static_cast<int>(it)) : dilate(image, static_cast<int>(it));
}

std::string to_string(Portion p) { return p == Portion::Whole ? "whole" : "begin"; }

Portion portion_from_string(const std::string& name) {
  if (name == "whole") return Portion::Whole;
  if (name == "begin" || name == "beginning") return Portion::Beginning;
  throw ContractError("unknown portion '" + name + "'");
}

Pipeline make_pipeline(Portion portion, ScoreKind kind, const ScoreOptions& options) {
  return {to_string(portion) + "/" + to_string(kind), portion, kind, options};
}

std::vector<AlterationRow> alteration_sweep(const std::vector<TextImage>& images, Alteration alteration,
                                            const std::vector<double>& levels, const Backbone& backbone,
                                            const std::vector<Pipeline>& pipelines) {
  if (std::find(levels.begin(), levels.end(), 0.0) == levels.end())
    throw ContractError("alteration_sweep: levels must include 0");
  if (images.empty()) throw ContractError("alteration_sweep: no images");
  std::map<Portion, std::vector<FeatureBag>> base;
  for (const Pipeline& p : pipelines)
    if (!base.count(p.portion)) base[p.portion] = extract_bags(images, backbone, p.portion).bags;

  std::vector<AlterationRow> rows;
  for (double level : levels) {
    std::vector<TextImage> altered(images.size());
    parallel_for(images.size(), [&](std::size_t i) { altered[i] = apply_alteration(images[i], alteration, level); });
    std::map<Portion, std::vector<FeatureBag>> bags;
    AlterationRow row;
    row.level = level;
    for (const Pipeline& p : pipelines) {
      if (!bags.count(p.portion)) bags[p.portion] = extract_bags(altered, backbone, p.portion).bags;
      row.scores.push_back(score_sets(p.kind, refs(base.at(p.portion)), refs(bags.at(p.portion)), p.options));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

double distance_step_seconds(ScoreKind kind, const BagRefs& real, const BagRefs& gen, const ScoreOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  volatile double sink = score_sets(kind, real, gen, options);
  (void)sink;
  return seconds_since(t0);
}

std::vector<TimingEntry> timing_report(const std::vector<TextImage>& images, const Backbone& backbone,
                                       const std::vector<Pipeline>& pipelines) {
  if (images.size() < 4) throw ContractError("timing_report: need at least 4 images");
  std::vector<TimingEntry> out;
  for (const Pipeline& p : pipelines) {
    TimingEntry e;
    e.pipeline = p.name;
    const auto t0 = std::chrono::steady_clock::now();
    const Extraction ex = extract_bags(images, backbone, p.portion);
    e.representation_seconds = seconds_since(t0);
    const BagRefs all = refs(ex.bags);
    const std::size_t half = all.size() / 2;
    const BagRefs a(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(half));
    const BagRefs b(all.begin() + static_cast<std::ptrdiff_t>(half), all.end());
    e.distance_seconds = distance_step_seconds(p.kind, a, b, p.options);
    out.push_back(e);
  }
  return out;
}

}  // namespace hwd
