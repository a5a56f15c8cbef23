#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hwd/corpus.hpp"
#include "hwd/errors.hpp"
#include "hwd/manifest.hpp"
#include "hwd/metrics.hpp"
#include "hwd/parallel.hpp"
#include "hwd/report.hpp"
#include "hwd/trainer.hpp"
#include "hwd/verify.hpp"
#include "hwd/weights.hpp"

namespace {

using namespace hwd;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string weights;
  std::string arch = "auto";
  bool invert_ink = false;
  std::uint64_t seed = 0;
  std::string report;
};

void emit(const Json& j, const std::string& path) {
  const std::string text = j.dump(2) + "\n";
  if (path.empty() || path == "-")
    std::cout << text;
  else
    write_text(path, text);
}

Backbone open_backbone(const Common& c) {
  if (c.weights.empty()) throw UsageError("--weights is required");
  const std::string arch = c.arch == "auto" ? detect_arch(c.weights) : c.arch;
  return load_backbone(arch, c.weights);
}

std::vector<TextImage> images_of(const std::string& manifest, bool invert) {
  return load_images(read_manifest(manifest), invert);
}

Pipeline parse_pipeline(const std::string& s, std::uint64_t seed) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) throw UsageError("pipeline must look like portion/distance, got '" + s + "'");
  try {
    ScoreOptions o;
    o.seed = seed;
    return make_pipeline(portion_from_string(s.substr(0, slash)), score_kind_from_string(s.substr(slash + 1)), o);
  } catch (const ContractError& e) {
    throw UsageError(e.what());
  }
}

std::vector<Pipeline> parse_pipelines(const std::vector<std::string>& names, std::uint64_t seed) {
  std::vector<Pipeline> out;
  for (const auto& n : names) out.push_back(parse_pipeline(n, seed));
  return out;
}

// Hamming needs the global real-feature centre.
void set_center(Pipeline& p, const std::vector<FeatureBag>& real) {
  if (p.kind == ScoreKind::Hamming && !real.empty()) p.options.hamming_center = writer_mean(std::span<const FeatureBag>(real)).mean;
}

Json common_json(const Common& c, const std::string& arch) {
  return {{"weights", c.weights}, {"backbone", arch}, {"invert_ink", c.invert_ink}, {"seed", c.seed}};
}

void add_common(CLI::App* sub, Common& c, bool needs_weights) {
  if (needs_weights) {
    sub->add_option("--weights", c.weights, "Weight file (HWDW)")->required();
    sub->add_option("--arch", c.arch, "tinynet|vgg16|auto")->check(CLI::IsMember({"auto", "tinynet", "vgg16"}));
  }
  sub->add_flag("--invert-ink", c.invert_ink, "Invert images at ingestion (light ink on dark)");
  sub->add_option("--seed", c.seed, "Random seed");
  sub->add_option("--report,-o", c.report, "Report path (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hwdkit: handwriting distance toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (default HWDKIT_THREADS or all cores)")->check(CLI::NonNegativeNumber);

  Common c;

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a synthetic style corpus");
  CorpusConfig gc;
  std::string gen_out, word_file;
  std::vector<std::string> fonts;
  bool no_distort = false;
  gen->add_option("--out", gen_out, "Output directory")->required();
  gen->add_option("--styles", gc.num_styles, "Number of styles")->check(CLI::PositiveNumber);
  gen->add_option("--words", gc.words_per_style, "Images per style")->check(CLI::PositiveNumber);
  gen->add_option("--font", fonts, "TrueType files for the first styles");
  gen->add_option("--word-list", word_file, "One word per line (default bundled list)");
  gen->add_option("--val-fraction", gc.val_fraction, "Validation share per class")->check(CLI::Range(0.0, 0.99));
  gen->add_flag("--no-distort", no_distort, "Disable geometric/color distortions");
  add_common(gen, c, false);

  // train
  auto* tr = app.add_subcommand("train", "Train a backbone to classify styles");
  TrainConfig tc;
  std::string tr_manifest, tr_val, tr_out, tr_history;
  tr->add_option("--manifest", tr_manifest, "Training manifest")->required();
  tr->add_option("--val", tr_val, "Validation manifest (default: last 10% per class)");
  tr->add_option("--arch", tc.arch, "tinynet|vgg16")->check(CLI::IsMember({"tinynet", "vgg16"}));
  tr->add_option("--epochs", tc.hyper.epochs)->check(CLI::PositiveNumber);
  tr->add_option("--batch", tc.hyper.batch_size)->check(CLI::PositiveNumber);
  tr->add_option("--lr", tc.hyper.lr)->check(CLI::NonNegativeNumber);
  tr->add_option("--momentum", tc.hyper.momentum)->check(CLI::Range(0.0, 0.999999));
  tr->add_option("--out", tr_out, "Output weight file")->required();
  tr->add_option("--history", tr_history, "history.json path");
  add_common(tr, c, false);

  // score
  auto* sc = app.add_subcommand("score", "Score generated images against real ones per writer");
  std::string real_m, gen_m, portion = "whole", distance = "euclidean";
  std::optional<int> per_writer_min;
  ScoreOptions so;
  sc->add_option("--real", real_m, "Real manifest")->required();
  sc->add_option("--gen", gen_m, "Generated manifest")->required();
  sc->add_option("--portion", portion, "whole|begin")->check(CLI::IsMember({"whole", "begin"}));
  sc->add_option("--distance", distance, "euclidean|frechet|kid|mahalanobis|hamming")
      ->check(CLI::IsMember({"euclidean", "frechet", "kid", "mahalanobis", "hamming"}));
  sc->add_option("--per-writer-min", per_writer_min, "Minimum images per writer and side")->check(CLI::PositiveNumber);
  sc->add_option("--kid-subset-size", so.kid_subset_size)->check(CLI::Range(2, 1 << 20));
  sc->add_option("--kid-subsets", so.kid_subsets)->check(CLI::PositiveNumber);
  add_common(sc, c, true);

  // verify
  auto* ve = app.add_subcommand("verify", "Same/different writer separability (Overlap, EER)");
  std::string ve_manifest, ve_scores;
  std::vector<std::string> ve_pipes{"whole/euclidean", "begin/frechet"};
  int impostors = -1, bins = 50;
  ve->add_option("--manifest", ve_manifest, "Manifest with writer labels")->required();
  ve->add_option("--pipeline", ve_pipes, "portion/distance, repeatable");
  ve->add_option("--impostors", impostors, "Impostor pairs per writer (default min(M-1,10))");
  ve->add_option("--bins", bins, "Overlap histogram bins")->check(CLI::Range(2, 100000));
  ve->add_option("--scores", ve_scores, "Also write raw score distributions (JSON)");
  add_common(ve, c, true);

  // stability
  auto* st = app.add_subcommand("stability", "Score stability versus candidate sample size");
  std::string st_ref, st_csv, st_pipe = "whole/euclidean";
  std::vector<std::string> st_cands;
  std::vector<int> sizes{10, 25, 50, 100, 200, 500};
  int runs = 10;
  st->add_option("--reference", st_ref, "Reference manifest")->required();
  st->add_option("--candidate", st_cands, "name=manifest, repeatable (default: the reference itself)");
  st->add_option("--sizes", sizes, "Candidate subset sizes")->delimiter(',');
  st->add_option("--runs", runs, "Runs per cell")->check(CLI::Range(2, 100000));
  st->add_option("--pipeline", st_pipe, "portion/distance");
  st->add_option("--csv", st_csv, "CSV output path");
  add_common(st, c, true);

  // perturb
  auto* pe = app.add_subcommand("perturb", "Sensitivity to shear, erosion or dilation");
  std::string pe_manifest, alteration = "shear", pe_csv, dump_dir;
  std::vector<double> levels;
  std::vector<std::string> pe_pipes{"whole/euclidean", "begin/frechet"};
  pe->add_option("--manifest", pe_manifest, "Manifest")->required();
  pe->add_option("--alteration", alteration)->check(CLI::IsMember({"shear", "erode", "dilate"}));
  pe->add_option("--levels", levels, "Alteration levels (must include 0)")->delimiter(',');
  pe->add_option("--pipeline", pe_pipes, "portion/distance, repeatable");
  pe->add_option("--csv", pe_csv, "CSV output path");
  pe->add_option("--dump-dir", dump_dir, "Write altered images (PGM) here");
  add_common(pe, c, true);

  // time
  auto* ti = app.add_subcommand("time", "Representation vs distance wall-clock split");
  std::string ti_manifest;
  std::vector<std::string> ti_pipes{"whole/euclidean", "begin/frechet"};
  ti->add_option("--manifest", ti_manifest, "Manifest")->required();
  ti->add_option("--pipeline", ti_pipes, "portion/distance, repeatable");
  add_common(ti, c, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const int env = threads_from_env();
    set_threads(threads > 0 ? threads : env);

    if (*gen) {
      gc.out_dir = gen_out;
      gc.seed = c.seed;
      for (const auto& f : fonts) gc.fonts.emplace_back(f);
      if (!word_file.empty()) {
        std::ifstream in(word_file);
        if (!in) throw IoError("cannot open word list " + word_file);
        for (std::string w; std::getline(in, w);) {
          if (!w.empty() && w.back() == '\r') w.pop_back();
          if (!w.empty()) gc.word_list.push_back(w);
        }
      }
      if (no_distort) gc.distortion = DistortMagnitudes::none();
      if (gc.num_styles < 2) throw UsageError("--styles must be >= 2");
      const Corpus corpus = generate_corpus(gc);
      Json j;
      j["command"] = "gen";
      j["config"] = {{"out", gen_out}, {"styles", gc.num_styles}, {"words", gc.words_per_style}, {"seed", c.seed},
                     {"fonts", fonts}, {"word_list", word_file}, {"val_fraction", gc.val_fraction}, {"distort", !no_distort}};
      j["entries"] = corpus.manifest.size();
      j["train_entries"] = corpus.train.size();
      j["val_entries"] = corpus.val.size();
      j["manifest"] = (std::filesystem::path(gen_out) / "manifest.tsv").string();
      emit(j, c.report);
      return 0;
    }

    if (*tr) {
      tc.manifest = tr_manifest;
      tc.val_manifest = tr_val;
      tc.out_weights = tr_out;
      tc.history_json = tr_history;
      tc.invert_ink = c.invert_ink;
      tc.hyper.seed = c.seed;
      const TrainResult r = train(tc, [](const EpochRecord& e) {
        std::fprintf(stderr, "epoch %d  loss %.6f  val_acc %.4f\n", e.epoch, e.train_loss, e.val_accuracy);
      });
      Json hist = Json::parse(history_json(r.history));
      Json j;
      j["command"] = "train";
      j["config"] = {{"manifest", tr_manifest}, {"val", tr_val}, {"arch", tc.arch}, {"epochs", tc.hyper.epochs},
                     {"batch", tc.hyper.batch_size}, {"lr", tc.hyper.lr}, {"momentum", tc.hyper.momentum},
                     {"seed", c.seed}, {"out", tr_out}, {"invert_ink", c.invert_ink}};
      j["num_classes"] = r.spec.num_classes;
      j["best_epoch"] = r.best_epoch;
      j["best_val_accuracy"] = r.best_val_accuracy;
      j["history"] = hist;
      emit(j, c.report);
      return 0;
    }

    if (*sc) {
      const ScoreKind kind = score_kind_from_string(distance);
      const bool needs_two = kind == ScoreKind::Frechet || kind == ScoreKind::KID || kind == ScoreKind::Mahalanobis;
      if (needs_two && per_writer_min && *per_writer_min < 2)
        throw UsageError("--distance " + distance + " needs at least 2 images per writer; conflicts with --per-writer-min " +
                         std::to_string(*per_writer_min));
      const int min_images = per_writer_min.value_or(needs_two ? 2 : 1);
      const Backbone net = open_backbone(c);
      const Portion p = portion_from_string(portion);
      const Extraction real = extract_bags(images_of(real_m, c.invert_ink), net, p);
      const Extraction gen_x = extract_bags(images_of(gen_m, c.invert_ink), net, p);
      so.seed = c.seed;
      if (kind == ScoreKind::Hamming) so.hamming_center = writer_mean(std::span<const FeatureBag>(real.bags)).mean;
      ScoreReport r = score_dataset(kind, real.bags, gen_x.bags, so, min_images);
      for (const auto& w : real.warnings) r.warnings.push_back("real " + w.image_id + ": " + w.message);
      for (const auto& w : gen_x.warnings) r.warnings.push_back("gen " + w.image_id + ": " + w.message);
      Json j;
      j["command"] = "score";
      j["config"] = common_json(c, net.spec().name);
      j["config"]["real"] = real_m;
      j["config"]["gen"] = gen_m;
      j["config"]["per_writer_min"] = min_images;
      j["config"]["kid_subset_size"] = so.kid_subset_size;
      j["config"]["kid_subsets"] = so.kid_subsets;
      j["backbone"] = net.spec().name;
      j["portion"] = to_string(p);
      j["distance"] = distance;
      j["D"] = net.spec().feature_dim;
      j["hamming_rule"] = "sign around the global mean of real features";
      const Json body = to_json(r);
      for (const auto& [k, v] : body.items()) j[k] = v;
      emit(j, c.report);
      return 0;
    }

    if (*ve) {
      const Backbone net = open_backbone(c);
      const Manifest m = read_manifest(ve_manifest);
      const std::vector<TextImage> images = load_images(m, c.invert_ink);
      std::vector<std::string> labels;
      for (const auto& e : m.entries) labels.push_back(e.label);
      const SplitPlan split = build_split(labels, c.seed);
      Json results = Json::array(), dists = Json::object();
      for (Pipeline& pipe : parse_pipelines(ve_pipes, c.seed)) {
        const Extraction ex = extract_bags(images, net, pipe.portion);
        if (ex.bags.size() != images.size()) throw ContractError("verify: some images were too narrow for the backbone");
        set_center(pipe, ex.bags);
        const PairDistributions d = pair_scores(split, bag_scorer(ex.bags, pipe.kind, pipe.options), impostors, c.seed);
        const double ovl = overlap_coefficient(d, bins);
        results.push_back({{"pipeline", pipe.name}, {"overlap", ovl}, {"overlap_percent", 100.0 * ovl},
                           {"eer", eer(d)}, {"eer_percent", 100.0 * eer(d)}, {"genuine_pairs", d.genuine.size()},
                           {"impostor_pairs", d.impostor.size()}});
        dists[pipe.name] = to_json(d);
      }
      Json j;
      j["command"] = "verify";
      j["config"] = common_json(c, net.spec().name);
      j["config"]["manifest"] = ve_manifest;
      j["config"]["pipelines"] = ve_pipes;
      j["config"]["impostors"] = impostors;
      j["config"]["bins"] = bins;
      j["writers"] = split.writers.size();
      j["results"] = results;
      j["warnings"] = split.warnings;
      if (!ve_scores.empty()) write_text(ve_scores, dists.dump(2) + "\n");
      emit(j, c.report);
      return 0;
    }

    if (*st) {
      const Backbone net = open_backbone(c);
      Pipeline pipe = parse_pipeline(st_pipe, c.seed);
      const std::vector<FeatureBag> ref = extract_bags(images_of(st_ref, c.invert_ink), net, pipe.portion).bags;
      set_center(pipe, ref);
      std::vector<NamedBagSet> cands;
      if (st_cands.empty()) cands.push_back({"self", ref});
      for (const auto& spec : st_cands) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("--candidate must be name=manifest, got '" + spec + "'");
        cands.push_back({spec.substr(0, eq), extract_bags(images_of(spec.substr(eq + 1), c.invert_ink), net, pipe.portion).bags});
      }
      const StabilityTable t = stability_sweep(ref, cands, sizes, runs, pipe.kind, pipe.options, c.seed);
      Json j;
      j["command"] = "stability";
      j["config"] = common_json(c, net.spec().name);
      j["config"]["reference"] = st_ref;
      j["config"]["candidates"] = st_cands;
      j["config"]["sizes"] = sizes;
      j["config"]["runs"] = runs;
      j["config"]["pipeline"] = pipe.name;
      j["reference_images"] = ref.size();
      const Json body = to_json(t);
      for (const auto& [k, v] : body.items()) j[k] = v;
      if (!st_csv.empty()) write_text(st_csv, stability_csv(t));
      emit(j, c.report);
      return 0;
    }

    if (*pe) {
      const Alteration a = alteration_from_string(alteration);
      if (levels.empty())
        levels = a == Alteration::Shear ? std::vector<double>{0, 0.15, 0.3, 0.45, 0.6} : std::vector<double>{0, 1, 2, 3, 4};
      const Backbone net = open_backbone(c);
      const std::vector<TextImage> images = images_of(pe_manifest, c.invert_ink);
      std::vector<Pipeline> pipes = parse_pipelines(pe_pipes, c.seed);
      for (Pipeline& p : pipes)
        if (p.kind == ScoreKind::Hamming) set_center(p, extract_bags(images, net, p.portion).bags);
      std::vector<AlterationRow> rows;
      try {
        rows = alteration_sweep(images, a, levels, net, pipes);
      } catch (const ContractError& e) {
        throw UsageError(e.what());
      }
      if (!dump_dir.empty()) {
        std::filesystem::create_directories(dump_dir);
        for (double level : levels)
          for (std::size_t i = 0; i < images.size(); ++i) {
            char name[96];
            std::snprintf(name, sizeof name, "%s_%g_%05zu.pgm", alteration.c_str(), level, i);
            write_pgm(apply_alteration(images[i], a, level), std::filesystem::path(dump_dir) / name);
          }
      }
      Json table = Json::array();
      for (const auto& r : rows) {
        Json s = Json::object();
        for (std::size_t i = 0; i < pipes.size(); ++i) s[pipes[i].name] = r.scores[i];
        table.push_back({{"level", r.level}, {"scores", s}});
      }
      Json j;
      j["command"] = "perturb";
      j["config"] = common_json(c, net.spec().name);
      j["config"]["manifest"] = pe_manifest;
      j["config"]["alteration"] = alteration;
      j["config"]["levels"] = levels;
      j["config"]["pipelines"] = pe_pipes;
      j["rows"] = table;
      if (!pe_csv.empty()) write_text(pe_csv, alteration_csv(rows, pipes));
      emit(j, c.report);
      return 0;
    }

    if (*ti) {
      const Backbone net = open_backbone(c);
      const std::vector<TextImage> images = images_of(ti_manifest, c.invert_ink);
      std::vector<Pipeline> pipes = parse_pipelines(ti_pipes, c.seed);
      Json rows = Json::array();
      for (const auto& e : timing_report(images, net, pipes))
        rows.push_back({{"pipeline", e.pipeline}, {"representation_seconds", e.representation_seconds},
                        {"distance_seconds", e.distance_seconds}});
      Json j;
      j["command"] = "time";
      j["config"] = common_json(c, net.spec().name);
      j["config"]["manifest"] = ti_manifest;
      j["config"]["pipelines"] = ti_pipes;
      j["images"] = images.size();
      j["timing"] = rows;
      emit(j, c.report);
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
