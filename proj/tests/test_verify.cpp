#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "hwd/backbone.hpp"
#include "hwd/corpus.hpp"
#include "hwd/errors.hpp"
#include "hwd/verify.hpp"

using namespace hwd;

namespace {

std::vector<FeatureBag> gaussian_bags(const std::string& writer, int n, int dim, double shift, std::mt19937_64& g) {
  std::normal_distribution<float> nd;
  std::vector<FeatureBag> out;
  for (int i = 0; i < n; ++i) {
    FeatureBag b{writer + "/" + std::to_string(i), writer, dim, std::vector<float>(static_cast<std::size_t>(dim) * 2)};
    for (auto& v : b.data) v = nd(g) + static_cast<float>(shift);
    out.push_back(std::move(b));
  }
  return out;
}

std::vector<TextImage> word_images(int n) {
  std::vector<TextImage> out;
  for (int i = 0; i < n; ++i) {
    Rng r = make_rng(21, {static_cast<std::uint64_t>(i)});
    TextImage im = render_word(i % 2 ? "inkwell" : "margin", procedural_style(0, 4), r);
    im.writer_id = "w";
    out.push_back(std::move(im));
  }
  return out;
}

}  // namespace

TEST_CASE("build_split halves each writer deterministically") {
  const std::vector<std::string> labels = {"a", "b", "a", "a", "b", "b", "a", "b", "b", "c"};
  const SplitPlan s = build_split(labels, 3);
  REQUIRE(s.writers == std::vector<std::string>{"a", "b"});
  CHECK(s.reference[0].size() == 2);
  CHECK(s.candidate[0].size() == 2);
  CHECK(s.reference[1].size() == 3);
  CHECK(s.candidate[1].size() == 2);
  CHECK(s.warnings.size() == 1);
  std::set<std::size_t> seen;
  for (std::size_t w = 0; w < 2; ++w) {
    for (auto i : s.reference[w]) CHECK(labels[i] == s.writers[w]);
    for (auto i : s.candidate[w]) CHECK(labels[i] == s.writers[w]);
    seen.insert(s.reference[w].begin(), s.reference[w].end());
    seen.insert(s.candidate[w].begin(), s.candidate[w].end());
  }
  CHECK(seen.size() == 9);
  const SplitPlan again = build_split(labels, 3);
  CHECK(again.reference == s.reference);
  CHECK(again.candidate == s.candidate);
  CHECK_THROWS_AS(build_split({"a", "b"}, 1), ContractError);
}

TEST_CASE("pair_scores: genuine and impostor counts") {
  std::vector<std::string> labels;
  for (int w = 0; w < 5; ++w)
    for (int i = 0; i < 4; ++i) labels.push_back(std::to_string(w));
  const SplitPlan s = build_split(labels, 1);
  const SetScorer same = [&](const std::vector<std::size_t>& r, const std::vector<std::size_t>& c) {
    return labels[r[0]] == labels[c[0]] ? 0.0 : 1.0;
  };
  const PairDistributions all = pair_scores(s, same, -1, 2);
  CHECK(all.genuine.size() == 5);
  CHECK(all.impostor.size() == 20);
  for (double v : all.genuine) CHECK(v == 0.0);
  for (double v : all.impostor) CHECK(v == 1.0);
  CHECK(pair_scores(s, same, 2, 2).impostor.size() == 10);
  CHECK(pair_scores(s, same, 2, 2).impostor == pair_scores(s, same, 2, 2).impostor);
  CHECK(eer(all) == 0.0);
  CHECK(overlap_coefficient(all) == 0.0);
}

TEST_CASE("bag_scorer over real bags separates shifted writers") {
  std::mt19937_64 g(4);
  std::vector<FeatureBag> bags;
  std::vector<std::string> labels;
  for (int w = 0; w < 4; ++w)
    for (auto& b : gaussian_bags(std::to_string(w), 6, 8, 3.0 * w, g)) {
      labels.push_back(b.writer_id);
      bags.push_back(std::move(b));
    }
  const SplitPlan s = build_split(labels, 5);
  const PairDistributions d = pair_scores(s, bag_scorer(bags, ScoreKind::HWD), -1, 5);
  CHECK(*std::max_element(d.genuine.begin(), d.genuine.end()) < *std::min_element(d.impostor.begin(), d.impostor.end()));
  CHECK(eer(d) == 0.0);
}

TEST_CASE("overlap_coefficient: identity, symmetry and affine invariance") {
  std::mt19937_64 g(6);
  std::normal_distribution<double> nd;
  PairDistributions d;
  for (int i = 0; i < 500; ++i) d.genuine.push_back(nd(g));
  for (int i = 0; i < 400; ++i) d.impostor.push_back(nd(g) + 1.0);
  CHECK(overlap_coefficient({d.genuine, d.genuine}) == doctest::Approx(1.0));
  CHECK(overlap_coefficient({{0, 0.1, 0.2}, {5, 5.1}}) == 0.0);
  const double o = overlap_coefficient(d);
  CHECK(overlap_coefficient({d.impostor, d.genuine}) == doctest::Approx(o).epsilon(1e-12));
  PairDistributions t = d;
  for (auto* v : {&t.genuine, &t.impostor})
    for (double& x : *v) x = 3.0 * x + 7.0;
  CHECK(overlap_coefficient(t) == doctest::Approx(o).epsilon(1e-9));
  CHECK(o > 0.3);
  CHECK(o < 0.9);
  CHECK_THROWS_AS(overlap_coefficient(d, 1), ContractError);
  CHECK_THROWS_AS(overlap_coefficient({{}, {1.0}}), ContractError);
}

TEST_CASE("eer: separated, identical, constant and inverted distributions") {
  CHECK(eer({{0, 1, 2}, {3, 4, 5}}) == 0.0);
  std::mt19937_64 g(7);
  std::normal_distribution<double> nd;
  PairDistributions d;
  for (int i = 0; i < 4000; ++i) d.genuine.push_back(nd(g));
  for (int i = 0; i < 4000; ++i) d.impostor.push_back(nd(g));
  CHECK(eer(d) == doctest::Approx(0.5).epsilon(0.05));
  CHECK(eer({{2, 2, 2}, {2, 2}}) == doctest::Approx(0.5));
  CHECK(eer({{3, 4, 5}, {0, 1, 2}}) == doctest::Approx(0.5));
}

TEST_CASE("percentile_nearest_rank") {
  const std::vector<double> v = {15, 20, 35, 40, 50};
  CHECK(percentile_nearest_rank(v, 5) == 15);
  CHECK(percentile_nearest_rank(v, 30) == 20);
  CHECK(percentile_nearest_rank(v, 40) == 20);
  CHECK(percentile_nearest_rank(v, 50) == 35);
  CHECK(percentile_nearest_rank(v, 100) == 50);
  CHECK(percentile_nearest_rank({9, 3}, 25) == 3);
  CHECK(percentile_nearest_rank({9, 3}, 75) == 9);
  CHECK_THROWS_AS(percentile_nearest_rank({}, 50), ContractError);
  CHECK_THROWS_AS(percentile_nearest_rank(v, 0), ContractError);
}

TEST_CASE("stability_sweep: cells, self comparison and skipped sizes") {
  std::mt19937_64 g(8);
  const auto ref = gaussian_bags("r", 30, 4, 0.0, g);
  const auto other = gaussian_bags("o", 30, 4, 1.0, g);
  const StabilityTable t = stability_sweep(ref, {{"self", ref}, {"other", other}}, {5, 30, 40}, 4, ScoreKind::HWD, {}, 9);
  REQUIRE(t.rows.size() == 4);
  CHECK(t.warnings.size() == 2);
  const StabilityRow& full_self = t.rows[1];
  CHECK(full_self.candidate == "self");
  CHECK(full_self.size == 30);
  CHECK(full_self.mean <= 1e-9);
  CHECK(full_self.p75 - full_self.p25 <= 1e-9);
  CHECK(t.rows[0].p75 > t.rows[0].p25);
  CHECK(t.rows[3].mean > t.rows[1].mean);
  for (const auto& row : t.rows) {
    CHECK(row.values.size() == 4);
    CHECK(row.p25 <= row.p75);
  }
  const StabilityTable again = stability_sweep(ref, {{"self", ref}, {"other", other}}, {5, 30, 40}, 4, ScoreKind::HWD, {}, 9);
  CHECK(again.rows[0].values == t.rows[0].values);
  CHECK_THROWS_AS(stability_sweep(ref, {{"self", ref}}, {5}, 1, ScoreKind::HWD, {}, 9), ContractError);
}

TEST_CASE("alterations: names, levels and contracts") {
  for (Alteration a : {Alteration::Shear, Alteration::Erode, Alteration::Dilate})
    CHECK(alteration_from_string(to_string(a)) == a);
  CHECK_THROWS_AS(alteration_from_string("blur"), ContractError);
  CHECK(portion_from_string("whole") == Portion::Whole);
  CHECK(portion_from_string("begin") == Portion::Beginning);
  CHECK_THROWS_AS(portion_from_string("end"), ContractError);
  const TextImage im = word_images(1)[0];
  CHECK(apply_alteration(im, Alteration::Dilate, 0).pixels == im.pixels);
  CHECK(apply_alteration(im, Alteration::Shear, 0.3).width > im.width);
  CHECK_THROWS_AS(apply_alteration(im, Alteration::Erode, 1.5), ContractError);
}

TEST_CASE("alteration_sweep scores level 0 as zero and grows with shear") {
  const ArchitectureSpec spec = spec_by_name("tinynet", 0);
  const Backbone net(spec, init_he_uniform(spec, 3));
  const auto images = word_images(6);
  const std::vector<Pipeline> pipes = {make_pipeline(Portion::Whole, ScoreKind::HWD)};
  const auto rows = alteration_sweep(images, Alteration::Shear, {0.0, 0.5}, net, pipes);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].scores[0] == 0.0);
  CHECK(rows[1].scores[0] > 0.0);
  CHECK_THROWS_AS(alteration_sweep(images, Alteration::Shear, {0.5}, net, pipes), ContractError);
}

TEST_CASE("timing_report lists every pipeline") {
  const ArchitectureSpec spec = spec_by_name("tinynet", 0);
  const Backbone net(spec, init_he_uniform(spec, 3));
  const std::vector<Pipeline> pipes = {make_pipeline(Portion::Whole, ScoreKind::HWD),
                                       make_pipeline(Portion::Beginning, ScoreKind::Frechet)};
  const auto t = timing_report(word_images(6), net, pipes);
  REQUIRE(t.size() == 2);
  CHECK(t[0].pipeline == pipes[0].name);
  for (const auto& e : t) {
    CHECK(e.representation_seconds >= 0.0);
    CHECK(e.distance_seconds >= 0.0);
  }
  CHECK_THROWS_AS(timing_report(word_images(3), net, pipes), ContractError);
}
