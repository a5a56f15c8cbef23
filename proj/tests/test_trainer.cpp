#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "hwd/backbone.hpp"
#include "hwd/corpus.hpp"
#include "hwd/errors.hpp"
#include "hwd/imaging.hpp"
#include "hwd/trainer.hpp"
#include "hwd/weights.hpp"

using namespace hwd;
namespace fs = std::filesystem;

namespace {

// Class 0: dark square on white. Class 1: uniform noise.
std::vector<LabeledImage> toy_set(int per_class, std::uint64_t seed) {
  std::mt19937_64 g(seed);
  std::uniform_int_distribution<int> px(0, 255), pos(2, 30);
  std::vector<LabeledImage> out;
  for (int i = 0; i < per_class; ++i) {
    TextImage square(32, 48, 255);
    const int x0 = pos(g), y0 = pos(g) % 16;
    for (int y = y0; y < y0 + 14; ++y)
      for (int x = x0; x < x0 + 14; ++x) square.at(y, x) = 0;
    out.push_back({prepare(square, Portion::Whole).tensor, 0});
    TextImage noise(32, 48);
    for (auto& p : noise.pixels) p = static_cast<std::uint8_t>(px(g));
    out.push_back({prepare(noise, Portion::Whole).tensor, 1});
  }
  return out;
}

Hyper toy_hyper(int epochs, double lr) {
  Hyper h;
  h.epochs = epochs;
  h.batch_size = 4;
  h.lr = lr;
  h.momentum = 0.9;
  h.seed = 11;
  return h;
}

}  // namespace

TEST_CASE("train_on separates a two-class toy problem") {
  const auto train = toy_set(12, 1), val = toy_set(4, 2);
  std::vector<EpochRecord> seen;
  const TrainResult r = train_on(tinynet_spec(2), train, val, toy_hyper(3, 0.01), [&](const EpochRecord& e) { seen.push_back(e); });
  REQUIRE(seen.size() == 3);
  CHECK(r.history.size() == 3);
  CHECK(seen[2].epoch == 3);
  CHECK(r.best_val_accuracy == doctest::Approx(1.0));
  CHECK(r.history.back().train_loss < r.history.front().train_loss);
  const Backbone best(r.spec, r.best);
  CHECK(evaluate(best, val) == doctest::Approx(r.best_val_accuracy));
  CHECK(r.history[static_cast<std::size_t>(r.best_epoch - 1)].val_accuracy == r.best_val_accuracy);
}

TEST_CASE("train_on is deterministic and lr 0 leaves the initial weights") {
  const auto train = toy_set(6, 3), val = toy_set(2, 4);
  const TrainResult a = train_on(tinynet_spec(2), train, val, toy_hyper(2, 0.01));
  const TrainResult b = train_on(tinynet_spec(2), train, val, toy_hyper(2, 0.01));
  CHECK(a.best == b.best);
  CHECK(a.history[1].train_loss == b.history[1].train_loss);
  const TrainResult z = train_on(tinynet_spec(2), train, val, toy_hyper(2, 0.0));
  CHECK(z.best == init_he_uniform(tinynet_spec(2), 11));
  CHECK(z.history[0].train_loss == z.history[1].train_loss);
}

TEST_CASE("train_on and evaluate contracts") {
  const auto train = toy_set(2, 5);
  CHECK_THROWS_AS(train_on(tinynet_spec(2), {}, {}, toy_hyper(1, 0.01)), ContractError);
  Hyper bad = toy_hyper(0, 0.01);
  CHECK_THROWS_AS(train_on(tinynet_spec(2), train, {}, bad), ContractError);
  const Backbone net(tinynet_spec(2), init_he_uniform(tinynet_spec(2), 1));
  CHECK_THROWS_AS(evaluate(net, {}), ContractError);
  std::vector<LabeledImage> wrong = train;
  wrong[0].label = 5;
  CHECK_THROWS_AS(evaluate(net, wrong), ContractError);
  Hyper diverge = toy_hyper(3, 1e30);
  CHECK_THROWS_AS(train_on(tinynet_spec(2), train, {}, diverge), NumericalError);
}

TEST_CASE("random weights classify a balanced set near chance") {
  const auto val = toy_set(40, 6);
  const Backbone net(tinynet_spec(2), init_he_uniform(tinynet_spec(2), 9));
  const double acc = evaluate(net, val);
  CHECK(acc >= 0.0);
  CHECK(acc <= 1.0);
  CHECK(class_count(val) == 2);
}

TEST_CASE("train from a generated corpus writes weights and history") {
  const fs::path dir = fs::temp_directory_path() / "hwd_unit" / "train";
  fs::remove_all(dir);
  CorpusConfig cc;
  cc.num_styles = 2;
  cc.words_per_style = 10;
  cc.seed = 3;
  cc.out_dir = dir / "corpus";
  generate_corpus(cc);

  TrainConfig tc;
  tc.hyper = toy_hyper(1, 0.01);
  tc.manifest = cc.out_dir / "train.tsv";
  tc.val_manifest = cc.out_dir / "val.tsv";
  tc.out_weights = dir / "w.hwdw";
  tc.history_json = dir / "history.json";
  const TrainResult r = train(tc);
  REQUIRE(fs::exists(tc.out_weights));
  CHECK(fs::exists(tc.history_json));
  CHECK(detect_arch(tc.out_weights) == "tinynet");
  CHECK(load_weights(r.spec, tc.out_weights) == r.best);
  const double again = evaluate(tc.out_weights, "tinynet", read_manifest(tc.val_manifest));
  CHECK(again == doctest::Approx(r.best_val_accuracy));
  CHECK(history_json(r.history).find("val_accuracy") != std::string::npos);

  std::ofstream(dir / "bad.tsv") << "#hwdkit-manifest v1 seed=0\nimages/x.pgm\tfoo\tword\n";
  TrainConfig bad = tc;
  bad.manifest = dir / "bad.tsv";
  CHECK_THROWS(train(bad));
}
