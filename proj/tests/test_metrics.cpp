#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "hwd/backbone.hpp"
#include "hwd/corpus.hpp"
#include "hwd/errors.hpp"
#include "hwd/metrics.hpp"
#include "hwd/parallel.hpp"
#include "oracles.hpp"

using namespace hwd;

namespace {

FeatureBag bag(const std::string& writer, int dim, std::vector<float> data, const std::string& id = "") {
  return {id.empty() ? writer + std::to_string(data.size()) : id, writer, dim, std::move(data)};
}

std::vector<FeatureBag> random_bags(const std::string& writer, int n, int dim, std::mt19937_64& g, double shift = 0.0) {
  std::normal_distribution<float> nd;
  std::vector<FeatureBag> out;
  for (int i = 0; i < n; ++i) {
    std::vector<float> d(static_cast<std::size_t>(dim) * (1 + i % 3));
    for (auto& v : d) v = nd(g) + static_cast<float>(shift);
    out.push_back(bag(writer, dim, std::move(d), writer + "/" + std::to_string(i)));
  }
  return out;
}

Eigen::MatrixXd random_matrix(int n, int d, std::mt19937_64& g) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXd m(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = nd(g);
  return m;
}

}  // namespace

TEST_CASE("writer_mean weighs every vector equally") {
  const std::vector<FeatureBag> bags = {bag("w", 2, {1, 2}), bag("w", 2, {4, 8, 4, 8})};
  const WriterMean m = writer_mean(bags, "w");
  CHECK(m.mean[0] == doctest::Approx(3.0));
  CHECK(m.mean[1] == doctest::Approx(6.0));
  CHECK(m.total_vectors == 3);
  CHECK(m.image_count == 2);
  CHECK_THROWS_AS(writer_mean(std::vector<FeatureBag>{}), ContractError);
  CHECK_THROWS_AS(writer_mean(std::vector<FeatureBag>{bag("w", 2, {1, 2}), bag("w", 3, {1, 2, 3})}), ContractError);
}

TEST_CASE("hwd_writer is the Euclidean distance of the means") {
  const WriterMean a{"a", {1, 0}, 1, 1}, b{"b", {0, 1}, 1, 1};
  CHECK(hwd_writer(a, b) == doctest::Approx(std::sqrt(2.0)));
  CHECK(hwd_writer(a, a) == 0.0);
  std::mt19937_64 g(3);
  std::normal_distribution<double> nd;
  WriterMean x{"x", std::vector<double>(64), 1, 1}, y{"y", std::vector<double>(64), 1, 1};
  double sq = 0;
  for (int i = 0; i < 64; ++i) {
    x.mean[i] = nd(g);
    y.mean[i] = nd(g);
    sq += (x.mean[i] - y.mean[i]) * (x.mean[i] - y.mean[i]);
  }
  CHECK(hwd_writer(x, y) == doctest::Approx(std::sqrt(sq)).epsilon(1e-12));
  CHECK(hwd_writer(x, y) == hwd_writer(y, x));
  const WriterMean short_mean{"s", {1}, 1, 1};
  CHECK_THROWS_AS(hwd_writer(a, short_mean), ContractError);
}

TEST_CASE("hwd_dataset averages writers without weighting") {
  const WriterMean z{"p", {0}, 1, 1}, one{"p", {1}, 1, 1}, three{"q", {3}, 9, 9}, zq{"q", {0}, 1, 1};
  const ScoreReport r = hwd_dataset({{z, one}, {zq, three}});
  CHECK(r.per_writer.at("p") == doctest::Approx(1.0));
  CHECK(r.per_writer.at("q") == doctest::Approx(3.0));
  CHECK(r.aggregate == doctest::Approx(2.0));
  CHECK(hwd_dataset({{zq, three}, {z, one}}).aggregate == r.aggregate);
}

TEST_CASE("gaussian_fit matches a two-pass oracle") {
  Eigen::MatrixXd two(2, 3);
  two.row(0) << 1, 2, 3;
  two.row(1) << -1, -2, -3;
  const GaussianStats s = gaussian_fit(two);
  Eigen::Vector3d v(1, 2, 3);
  CHECK((s.cov - 2.0 * v * v.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(s.mean.norm() < 1e-12);
  Eigen::MatrixXd same(5, 3);
  for (int i = 0; i < 5; ++i) same.row(i) << 4, 5, 6;
  CHECK(gaussian_fit(same).cov.cwiseAbs().maxCoeff() < 1e-12);
  std::mt19937_64 g(4);
  const Eigen::MatrixXd x = random_matrix(40, 7, g);
  const GaussianStats r = gaussian_fit(x);
  CHECK((r.cov - oracle::covariance(x)).cwiseAbs().maxCoeff() < 1e-6);
  CHECK((r.mean - x.colwise().mean().transpose()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(r.sample_count == 40);
  CHECK_THROWS_AS(gaussian_fit(Eigen::MatrixXd(1, 3)), ContractError);
}

TEST_CASE("gaussian_fit over bags stacks every vector") {
  const std::vector<FeatureBag> bags = {bag("w", 2, {0, 0, 2, 2}), bag("w", 2, {4, 4})};
  const GaussianStats s = gaussian_fit(refs(bags));
  CHECK(s.sample_count == 3);
  CHECK(s.mean(0) == doctest::Approx(2.0));
  CHECK(s.cov(0, 1) == doctest::Approx(4.0));
  CHECK(stack_vectors(refs(bags)).rows() == 3);
}

TEST_CASE("frechet_distance: self, mean shift and symmetry") {
  std::mt19937_64 g(5);
  const GaussianStats a = gaussian_fit(random_matrix(60, 5, g));
  GaussianStats b = a;
  CHECK(frechet_distance(a, a) <= 1e-6 * (1 + a.cov.trace()));
  b.mean.array() += 1.0;
  CHECK(frechet_distance(a, b) == doctest::Approx(5.0).epsilon(1e-5));
  const GaussianStats c = gaussian_fit(random_matrix(60, 5, g));
  CHECK(frechet_distance(a, c) == doctest::Approx(frechet_distance(c, a)).epsilon(1e-8));
  CHECK(frechet_distance(a, c) > 0.0);
}

TEST_CASE("kid: oracle agreement, self value and determinism") {
  std::mt19937_64 g(6);
  const Eigen::MatrixXd x = random_matrix(12, 8, g), y = random_matrix(12, 8, g);
  CHECK(mmd2_unbiased(x, y) == doctest::Approx(oracle::mmd_oracle(x, y)).epsilon(1e-12));
  CHECK(std::abs(kid(x, x, 12, 3, 1)) <= 1e-6);
  const Eigen::MatrixXd big = random_matrix(80, 8, g), other = random_matrix(70, 8, g);
  CHECK(kid(big, other, 20, 5, 9) == kid(big, other, 20, 5, 9));
  CHECK(kid(big, other, 20, 5, 9) != kid(big, other, 20, 5, 10));
  Eigen::MatrixXd shifted = other.array() + 2.0;
  CHECK(kid(big, shifted, 20, 5, 9) > kid(big, other, 20, 5, 9));
  CHECK_THROWS_AS(kid(big, other, 1, 5, 9), ContractError);
}

TEST_CASE("mahalanobis_hwd reduces to Euclidean under identity covariance") {
  GaussianStats id;
  id.mean = Eigen::VectorXd::Zero(3);
  id.cov = Eigen::MatrixXd::Identity(3, 3);
  id.sample_count = 10;
  const WriterMean a{"a", {1, 2, 3}, 1, 1}, b{"b", {0, 0, 1}, 1, 1};
  CHECK(mahalanobis_hwd(a, id, b, 0.0) == doctest::Approx(hwd_writer(a, b)).epsilon(1e-12));
  CHECK(mahalanobis_hwd(a, id, a) == 0.0);
  GaussianStats scaled = id;
  scaled.cov *= 4.0;
  CHECK(mahalanobis_hwd(a, scaled, b, 0.0) == doctest::Approx(hwd_writer(a, b) / 2.0).epsilon(1e-12));
}

TEST_CASE("hamming_hwd counts sign flips around the center") {
  const WriterMean a{"a", {1, -1, 2, -2}, 1, 1}, b{"b", {1, 1, -2, -2}, 1, 1};
  const std::vector<double> center(4, 0.0);
  CHECK(hamming_hwd(a, b, center) == doctest::Approx(0.5));
  CHECK(hamming_hwd(a, a, center) == 0.0);
  const std::vector<double> moved = {5, 5, 5, 5};
  CHECK(hamming_hwd(a, b, moved) == 0.0);
}

TEST_CASE("score kind names round-trip") {
  for (ScoreKind k : {ScoreKind::HWD, ScoreKind::Frechet, ScoreKind::KID, ScoreKind::Mahalanobis, ScoreKind::Hamming})
    CHECK(score_kind_from_string(to_string(k)) == k);
  CHECK(score_kind_from_string("euclidean") == ScoreKind::HWD);
  CHECK_THROWS_AS(score_kind_from_string("cosine"), ContractError);
}

TEST_CASE("score_sets: identical sets score zero for the mean-based distances") {
  std::mt19937_64 g(7);
  const auto bags = random_bags("w", 10, 6, g);
  const BagRefs r = refs(bags);
  CHECK(score_sets(ScoreKind::HWD, r, r) == 0.0);
  CHECK(score_sets(ScoreKind::Mahalanobis, r, r) == 0.0);
  CHECK(score_sets(ScoreKind::Hamming, r, r) == 0.0);
  CHECK(score_sets(ScoreKind::Frechet, r, r) <= 1e-6);
  const auto far = random_bags("w", 10, 6, g, 3.0);
  CHECK(score_sets(ScoreKind::HWD, r, refs(far)) > 5.0);
}

TEST_CASE("score_dataset groups by writer and warns about unmatched writers") {
  std::mt19937_64 g(8);
  std::vector<FeatureBag> real = random_bags("a", 4, 5, g), gen = random_bags("a", 3, 5, g, 1.0);
  auto rb = random_bags("b", 2, 5, g), gb = random_bags("b", 2, 5, g);
  real.insert(real.end(), rb.begin(), rb.end());
  gen.insert(gen.end(), gb.begin(), gb.end());
  auto only_real = random_bags("c", 2, 5, g);
  real.insert(real.end(), only_real.begin(), only_real.end());
  auto thin = random_bags("d", 1, 5, g);
  real.insert(real.end(), thin.begin(), thin.end());
  gen.insert(gen.end(), thin.begin(), thin.end());

  const ScoreReport r = score_dataset(ScoreKind::HWD, real, gen, {}, 2);
  CHECK(r.per_writer.size() == 2);
  CHECK(r.per_writer.count("a") == 1);
  CHECK(r.aggregate == doctest::Approx((r.per_writer.at("a") + r.per_writer.at("b")) / 2.0));
  CHECK(r.warnings.size() == 2);
  CHECK_THROWS(score_dataset(ScoreKind::HWD, only_real, gb));
}

TEST_CASE("extract_bag: one vector per feature column, one for the begin crop") {
  const ArchitectureSpec spec = vgg16_32_spec();
  const Backbone net(spec, init_he_uniform(spec, 1));
  TextImage im(32, 64, 200);
  im.writer_id = "w";
  const FeatureBag whole = extract_bag(im, net, Portion::Whole);
  CHECK(whole.dim == 512);
  CHECK(whole.count() == 2);
  CHECK(whole.writer_id == "w");
  CHECK(extract_bag(im, net, Portion::Beginning).count() == 1);
  TextImage tall(64, 320, 200);
  CHECK(extract_bag(tall, net, Portion::Whole).count() == 5);
}

TEST_CASE("extract_bags keeps input order and is thread-count invariant") {
  const ArchitectureSpec spec = spec_by_name("tinynet", 0);
  const Backbone net(spec, init_he_uniform(spec, 2));
  std::vector<TextImage> images;
  for (int i = 0; i < 6; ++i) {
    Rng r = make_rng(3, {static_cast<std::uint64_t>(i)});
    TextImage im = render_word("sample", procedural_style(i % 2, 5 + i % 2), r);
    im.writer_id = std::to_string(i % 2);
    im.source = "img" + std::to_string(i);
    images.push_back(std::move(im));
  }
  set_threads(1);
  const Extraction one = extract_bags(images, net, Portion::Whole);
  set_threads(3);
  const Extraction three = extract_bags(images, net, Portion::Whole);
  set_threads(0);
  REQUIRE(one.bags.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(one.bags[i].data == three.bags[i].data);
    CHECK(one.bags[i].writer_id == images[i].writer_id);
  }
}
