#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hwd/backbone.hpp"
#include "hwd/imaging.hpp"

namespace hwd {

// Ordered feature vectors of one image, row-major [count, dim].
struct FeatureBag {
  std::string image_id;
  std::string writer_id;
  int dim = 0;
  std::vector<float> data;

  int count() const noexcept { return dim > 0 ? static_cast<int>(data.size() / static_cast<std::size_t>(dim)) : 0; }
  std::span<const float> vector(int j) const {
    return {data.data() + static_cast<std::size_t>(j) * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
  }
};

using BagRefs = std::vector<const FeatureBag*>;
BagRefs refs(std::span<const FeatureBag> bags);

struct ExtractionWarning {
  std::string image_id;
  std::string message;
};

struct Extraction {
  std::vector<FeatureBag> bags;  // input order, skipped images omitted
  std::vector<ExtractionWarning> warnings;
};

// Whole: one vector per feature-tap column. Beginning: the pooled vector of
// the 32x32 begin crop. Images are processed in parallel.
Extraction extract_bags(const std::vector<TextImage>& images, const Backbone& backbone, Portion portion);
FeatureBag extract_bag(const TextImage& image, const Backbone& backbone, Portion portion);

struct WriterMean {
  std::string writer_id;
  std::vector<double> mean;
  std::size_t total_vectors = 0;
  std::size_t image_count = 0;
};

// Mean over every vector of every bag, so wider images weigh more.
WriterMean writer_mean(const BagRefs& bags, const std::string& writer_id = {});
WriterMean writer_mean(std::span<const FeatureBag> bags, const std::string& writer_id = {});

double hwd_writer(const WriterMean& real, const WriterMean& gen);

struct GaussianStats {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;  // 1/(n-1), symmetrized
  std::size_t sample_count = 0;
};

// Rows of `vectors` are samples.
GaussianStats gaussian_fit(const Eigen::MatrixXd& vectors);
GaussianStats gaussian_fit(const BagRefs& bags);
Eigen::MatrixXd stack_vectors(const BagRefs& bags);

inline constexpr double kFrechetEps = 1e-6;
// |mu_a - mu_b|^2 + tr(A) + tr(B) - 2 sum sqrt(max(eig((A+eps I)(B+eps I)), 0))
// with A, B shrunk by eps I; clamped at 0.
double frechet_distance(const GaussianStats& a, const GaussianStats& b, double eps = kFrechetEps);

// Unbiased MMD^2, kernel (x.y/D + 1)^3, averaged over seeded subsets. A
// subset as large as its set is the whole set in order.
double kid(const Eigen::MatrixXd& real, const Eigen::MatrixXd& gen, int subset_size, int num_subsets, std::uint64_t seed);
// Single unbiased estimate on equal-size sets (cross term excludes i == j).
double mmd2_unbiased(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);

inline constexpr double kMahalanobisEps = 1e-6;
// sqrt(d^T (S + eps mean(diag S) I)^-1 d), d = real - gen.
double mahalanobis_hwd(const WriterMean& real, const GaussianStats& real_stats, const WriterMean& gen,
                       double eps = kMahalanobisEps);
// Fraction of dimensions whose sign around `center` differs.
double hamming_hwd(const WriterMean& real, const WriterMean& gen, std::span<const double> center);

enum class ScoreKind { HWD, Frechet, KID, Mahalanobis, Hamming };
std::string to_string(ScoreKind kind);
ScoreKind score_kind_from_string(const std::string& name);  // euclidean|hwd|frechet|kid|mahalanobis|hamming

struct ScoreOptions {
  double frechet_eps = kFrechetEps;
  double mahalanobis_eps = kMahalanobisEps;
  int kid_subset_size = 100;
  int kid_subsets = 10;
  std::uint64_t seed = 0;
  std::vector<double> hamming_center;  // empty = mean of the real vectors
};

// Set-level distance between a real and a generated bag set (lower = closer).
double score_sets(ScoreKind kind, const BagRefs& real, const BagRefs& gen, const ScoreOptions& options = {});

struct ScoreReport {
  ScoreKind kind = ScoreKind::HWD;
  std::map<std::string, double> per_writer;
  double aggregate = 0.0;
  std::map<std::string, std::string> config;
  std::map<std::string, std::size_t> counts;
  std::vector<std::string> warnings;
};

// Per-writer HWD and their unweighted mean.
ScoreReport hwd_dataset(const std::vector<std::pair<WriterMean, WriterMean>>& pairs);

// Groups bags by writer and scores every writer present on both sides.
// Writers present on one side only, or with fewer than min_images images,
// become warnings. Throws when no writer remains.
ScoreReport score_dataset(ScoreKind kind, std::span<const FeatureBag> real, std::span<const FeatureBag> gen,
                          const ScoreOptions& options = {}, int min_images = 1);

}  // namespace hwd
