#include "hwd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>

#include "hwd/errors.hpp"
#include "hwd/rng.hpp"

namespace hwd {
namespace {

void check_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw ContractError(std::string(what) + ": dimension mismatch " + std::to_string(a) + " vs " + std::to_string(b));
}

}  // namespace

WriterMean writer_mean(const BagRefs& bags, const std::string& writer_id) {
  if (bags.empty()) throw ContractError("writer_mean: no feature bags");
  const int d = bags.front()->dim;
  WriterMean m;
  m.writer_id = writer_id.empty() ? bags.front()->writer_id : writer_id;
  m.mean.assign(static_cast<std::size_t>(d), 0.0);
  for (const FeatureBag* b : bags) {
    if (b->dim != d) throw ContractError("writer_mean: bags of different dimension");
    for (int j = 0; j < b->count(); ++j) {
      const auto v = b->vector(j);
      for (int c = 0; c < d; ++c) m.mean[static_cast<std::size_t>(c)] += v[static_cast<std::size_t>(c)];
    }
    m.total_vectors += static_cast<std::size_t>(b->count());
  }
  if (m.total_vectors == 0) throw ContractError("writer_mean: bags hold no vectors");
  for (double& x : m.mean) x /= static_cast<double>(m.total_vectors);
  m.image_count = bags.size();
  return m;
}

WriterMean writer_mean(std::span<const FeatureBag> bags, const std::string& writer_id) {
  return writer_mean(refs(bags), writer_id);
}

double hwd_writer(const WriterMean& real, const WriterMean& gen) {
  check_dim(real.mean.size(), gen.mean.size(), "hwd_writer");
  double s = 0.0;
  for (std::size_t i = 0; i < real.mean.size(); ++i) {
    const double d = real.mean[i] - gen.mean[i];
    s += d * d;
  }
  return std::sqrt(s);
}

Eigen::MatrixXd stack_vectors(const BagRefs& bags) {
  if (bags.empty()) throw ContractError("stack_vectors: no feature bags");
  const int d = bags.front()->dim;
  Eigen::Index rows = 0;
  for (const FeatureBag* b : bags) {
    if (b->dim != d) throw ContractError("stack_vectors: bags of different dimension");
    rows += b->count();
  }
  Eigen::MatrixXd x(rows, d);
  Eigen::Index r = 0;
  for (const FeatureBag* b : bags)
    for (int j = 0; j < b->count(); ++j, ++r) {
      const auto v = b->vector(j);
      for (int c = 0; c < d; ++c) x(r, c) = v[static_cast<std::size_t>(c)];
    }
  return x;
}

GaussianStats gaussian_fit(const Eigen::MatrixXd& x) {
  if (x.rows() < 2) throw ContractError("gaussian_fit: need at least 2 vectors, got " + std::to_string(x.rows()));
  GaussianStats g;
  g.sample_count = static_cast<std::size_t>(x.rows());
  g.mean = x.colwise().mean().transpose();
  const Eigen::MatrixXd centered = x.rowwise() - g.mean.transpose();
  const Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(x.rows() - 1);
  g.cov = 0.5 * (cov + cov.transpose());
  return g;
}

GaussianStats gaussian_fit(const BagRefs& bags) { return gaussian_fit(stack_vectors(bags)); }

double frechet_distance(const GaussianStats& a, const GaussianStats& b, double eps) {
  check_dim(static_cast<std::size_t>(a.mean.size()), static_cast<std::size_t>(b.mean.size()), "frechet_distance");
  const Eigen::Index d = a.mean.size();
  const Eigen::MatrixXd sa = a.cov + eps * Eigen::MatrixXd::Identity(d, d);
  const Eigen::MatrixXd sb = b.cov + eps * Eigen::MatrixXd::Identity(d, d);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ea(sa);
  if (ea.info() != Eigen::Success)
    throw NumericalError("frechet_distance: eigen-decomposition of the first covariance did not converge (trace " +
                         std::to_string(sa.trace()) + ")");
  const Eigen::VectorXd root = ea.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd sqrt_a = ea.eigenvectors() * root.asDiagonal() * ea.eigenvectors().transpose();
  // sqrt(A) B sqrt(A) is symmetric and shares its spectrum with A B.
  Eigen::MatrixXd m = sqrt_a * sb * sqrt_a;
  m = 0.5 * (m + m.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> em(m, Eigen::EigenvaluesOnly);
  if (em.info() != Eigen::Success) {
    const Eigen::VectorXd& l = ea.eigenvalues();
    throw NumericalError("frechet_distance: eigen-decomposition of the covariance product did not converge "
                         "(first covariance eigenvalues in [" + std::to_string(l.minCoeff()) + ", " +
                         std::to_string(l.maxCoeff()) + "])");
  }
  double root_trace = 0.0;
  for (Eigen::Index i = 0; i < em.eigenvalues().size(); ++i) root_trace += std::sqrt(std::max(em.eigenvalues()(i), 0.0));
  const double dist = (a.mean - b.mean).squaredNorm() + sa.trace() + sb.trace() - 2.0 * root_trace;
  if (!std::isfinite(dist)) throw NumericalError("frechet_distance: non-finite result");
  return std::max(dist, 0.0);
}

namespace {

double poly_kernel(const Eigen::MatrixXd& x, Eigen::Index i, const Eigen::MatrixXd& y, Eigen::Index j) {
  const double t = x.row(i).dot(y.row(j)) / static_cast<double>(x.cols()) + 1.0;
  return t * t * t;
}

double off_diagonal_sum(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < y.rows(); ++j)
      if (i != j) s += poly_kernel(x, i, y, j);
  return s;
}

}  // namespace

double mmd2_unbiased(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  check_dim(static_cast<std::size_t>(x.cols()), static_cast<std::size_t>(y.cols()), "kid");
  const double mx = static_cast<double>(x.rows()), my = static_cast<double>(y.rows());
  if (x.rows() < 2 || y.rows() < 2) throw ContractError("kid: subsets need at least 2 vectors");
  const double kxx = off_diagonal_sum(x, x) / (mx * (mx - 1.0));
  const double kyy = off_diagonal_sum(y, y) / (my * (my - 1.0));
  double kxy;
  if (x.rows() == y.rows()) {
    kxy = off_diagonal_sum(x, y) / (mx * (mx - 1.0));
  } else {
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i)
      for (Eigen::Index j = 0; j < y.rows(); ++j) s += poly_kernel(x, i, y, j);
    kxy = s / (mx * my);
  }
  return kxx + kyy - 2.0 * kxy;
}

double kid(const Eigen::MatrixXd& real, const Eigen::MatrixXd& gen, int subset_size, int num_subsets, std::uint64_t seed) {
  if (subset_size < 2) throw ContractError("kid: subset_size must be >= 2");
  if (num_subsets < 1) throw ContractError("kid: num_subsets must be >= 1");
  if (real.rows() < subset_size || gen.rows() < subset_size)
    throw ContractError("kid: sets of " + std::to_string(real.rows()) + " and " + std::to_string(gen.rows()) +
                        " vectors are smaller than subset_size " + std::to_string(subset_size));
  auto subset = [&](const Eigen::MatrixXd& m, Rng& rng) {
    if (m.rows() == subset_size) return m;
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(m.rows()));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    for (int i = 0; i < subset_size; ++i) {
      const auto j = i + static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(m.rows() - i));
      std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
    Eigen::MatrixXd out(subset_size, m.cols());
    for (int i = 0; i < subset_size; ++i) out.row(i) = m.row(idx[static_cast<std::size_t>(i)]);
    return out;
  };
  double total = 0.0;
  for (int s = 0; s < num_subsets; ++s) {
    Rng rng = make_rng(seed, {static_cast<std::uint64_t>(s)});
    const Eigen::MatrixXd x = subset(real, rng);
    const Eigen::MatrixXd y = subset(gen, rng);
    total += mmd2_unbiased(x, y);
  }
  return total / num_subsets;
}

double mahalanobis_hwd(const WriterMean& real, const GaussianStats& stats, const WriterMean& gen, double eps) {
  check_dim(real.mean.size(), gen.mean.size(), "mahalanobis_hwd");
  check_dim(real.mean.size(), static_cast<std::size_t>(stats.cov.rows()), "mahalanobis_hwd");
  const Eigen::Index d = stats.cov.rows();
  const double scale = stats.cov.diagonal().mean();
  const double shrink = eps * (scale > 0.0 ? scale : 1.0);
  const Eigen::MatrixXd s = stats.cov + shrink * Eigen::MatrixXd::Identity(d, d);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(s);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
    throw NumericalError("mahalanobis_hwd: covariance is singular beyond shrinkage " + std::to_string(shrink));
  Eigen::VectorXd diff(d);
  for (Eigen::Index i = 0; i < d; ++i) diff(i) = real.mean[static_cast<std::size_t>(i)] - gen.mean[static_cast<std::size_t>(i)];
  const double q = diff.dot(ldlt.solve(diff));
  if (!std::isfinite(q)) throw NumericalError("mahalanobis_hwd: non-finite quadratic form");
  return std::sqrt(std::max(q, 0.0));
}

double hamming_hwd(const WriterMean& real, const WriterMean& gen, std::span<const double> center) {
  check_dim(real.mean.size(), gen.mean.size(), "hamming_hwd");
  check_dim(real.mean.size(), center.size(), "hamming_hwd");
  std::size_t differ = 0;
  for (std::size_t i = 0; i < center.size(); ++i)
    differ += (real.mean[i] > center[i]) != (gen.mean[i] > center[i]);
  return static_cast<double>(differ) / static_cast<double>(center.size());
}

std::string to_string(ScoreKind kind) {
  switch (kind) {
    case ScoreKind::HWD: return "euclidean";
    case ScoreKind::Frechet: return "frechet";
    case ScoreKind::KID: return "kid";
    case ScoreKind::Mahalanobis: return "mahalanobis";
    case ScoreKind::Hamming: return "hamming";
  }
  return "unknown";
}

ScoreKind score_kind_from_string(const std::string& name) {
  if (name == "euclidean" || name == "hwd") return ScoreKind::HWD;
  if (name == "frechet") return ScoreKind::Frechet;
  if (name == "kid") return ScoreKind::KID;
  if (name == "mahalanobis") return ScoreKind::Mahalanobis;
  if (name == "hamming") return ScoreKind::Hamming;
  throw ContractError("unknown distance '" + name + "'");
}

double score_sets(ScoreKind kind, const BagRefs& real, const BagRefs& gen, const ScoreOptions& o) {
  switch (kind) {
    case ScoreKind::HWD:
      return hwd_writer(writer_mean(real), writer_mean(gen));
    case ScoreKind::Frechet:
      return frechet_distance(gaussian_fit(real), gaussian_fit(gen), o.frechet_eps);
    case ScoreKind::KID: {
      const Eigen::MatrixXd x = stack_vectors(real), y = stack_vectors(gen);
      const auto m = std::min<Eigen::Index>({static_cast<Eigen::Index>(o.kid_subset_size), x.rows(), y.rows()});
      return kid(x, y, static_cast<int>(m), o.kid_subsets, o.seed);
    }
    case ScoreKind::Mahalanobis:
      return mahalanobis_hwd(writer_mean(real), gaussian_fit(real), writer_mean(gen), o.mahalanobis_eps);
    case ScoreKind::Hamming: {
      const WriterMean rm = writer_mean(real);
      return hamming_hwd(rm, writer_mean(gen), o.hamming_center.empty() ? std::span<const double>(rm.mean)
                                                                         : std::span<const double>(o.hamming_center));
    }
  }
  throw ContractError("score_sets: unknown score kind");
}

ScoreReport hwd_dataset(const std::vector<std::pair<WriterMean, WriterMean>>& pairs) {
  if (pairs.empty()) throw ContractError("hwd_dataset: need at least one writer");
  ScoreReport r;
  r.kind = ScoreKind::HWD;
  std::size_t real_vectors = 0, gen_vectors = 0;
  for (const auto& [real, gen] : pairs) {
    if (real.writer_id != gen.writer_id)
      throw ContractError("hwd_dataset: writer mismatch '" + real.writer_id + "' vs '" + gen.writer_id + "'");
    if (!r.per_writer.emplace(real.writer_id, hwd_writer(real, gen)).second)
      throw ContractError("hwd_dataset: duplicate writer '" + real.writer_id + "'");
    real_vectors += real.total_vectors;
    gen_vectors += gen.total_vectors;
  }
  double sum = 0.0;
  for (const auto& [w, v] : r.per_writer) sum += v;
  r.aggregate = sum / static_cast<double>(r.per_writer.size());
  r.counts = {{"writers", r.per_writer.size()}, {"real_vectors", real_vectors}, {"gen_vectors", gen_vectors}};
  return r;
}

ScoreReport score_dataset(ScoreKind kind, std::span<const FeatureBag> real, std::span<const FeatureBag> gen,
                          const ScoreOptions& options, int min_images) {
  std::map<std::string, BagRefs> by_real, by_gen;
  for (const FeatureBag& b : real) by_real[b.writer_id].push_back(&b);
  for (const FeatureBag& b : gen) by_gen[b.writer_id].push_back(&b);

  ScoreReport r;
  r.kind = kind;
  std::vector<std::string> writers;
  for (const auto& [w, bags] : by_real) {
    auto it = by_gen.find(w);
    if (it == by_gen.end()) {
      r.warnings.push_back("writer '" + w + "' has no generated images; skipped");
    } else if (static_cast<int>(bags.size()) < min_images || static_cast<int>(it->second.size()) < min_images) {
      r.warnings.push_back("writer '" + w + "' has fewer than " + std::to_string(min_images) + " images on a side; skipped");
    } else {
      writers.push_back(w);
    }
  }
  for (const auto& [w, bags] : by_gen)
    if (!by_real.count(w)) r.warnings.push_back("writer '" + w + "' has no real images; skipped");
  if (writers.empty()) throw ContractError("score_dataset: no writer is present on both sides");

  std::vector<double> values(writers.size());
  std::vector<std::exception_ptr> errors(writers.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(writers.size()); ++k) {
    const std::size_t i = static_cast<std::size_t>(k);
    try {
      values[i] = score_sets(kind, by_real.at(writers[i]), by_gen.at(writers[i]), options);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  double sum = 0.0;
  std::size_t rv = 0, gv = 0, ri = 0, gi = 0;
  for (std::size_t i = 0; i < writers.size(); ++i) {
    r.per_writer[writers[i]] = values[i];
    sum += values[i];
    for (const FeatureBag* b : by_real.at(writers[i])) rv += static_cast<std::size_t>(b->count());
    for (const FeatureBag* b : by_gen.at(writers[i])) gv += static_cast<std::size_t>(b->count());
    ri += by_real.at(writers[i]).size();
    gi += by_gen.at(writers[i]).size();
  }
  r.aggregate = sum / static_cast<double>(writers.size());
  r.counts = {{"writers", writers.size()}, {"real_images", ri}, {"gen_images", gi}, {"real_vectors", rv}, {"gen_vectors", gv}};
  return r;
}

}  // namespace hwd
