#include "hwd/report.hpp"

#include <cstdio>
#include <fstream>

#include "hwd/errors.hpp"

namespace hwd {
namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Json to_json(const ScoreReport& r) {
  Json j;
  j["score_kind"] = r.kind == ScoreKind::HWD ? "HWD" : to_string(r.kind);
  for (const auto& [k, v] : r.config) j[k] = v;
  Json per = Json::object();
  for (const auto& [w, v] : r.per_writer) per[w] = v;
  j["per_writer"] = per;
  j["aggregate"] = r.aggregate;
  Json counts = Json::object();
  for (const auto& [k, v] : r.counts) counts[k] = v;
  j["counts"] = counts;
  j["warnings"] = r.warnings;
  return j;
}

Json to_json(const StabilityTable& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows)
    rows.push_back({{"candidate", r.candidate}, {"size", r.size}, {"mean", r.mean}, {"p25", r.p25}, {"p75", r.p75}, {"runs", r.values}});
  return {{"rows", rows}, {"warnings", t.warnings}};
}

Json to_json(const PairDistributions& d) { return {{"genuine", d.genuine}, {"impostor", d.impostor}}; }

std::string stability_csv(const StabilityTable& t) {
  std::string s = "size,name,mean,p25,p75\n";
  for (const auto& r : t.rows)
    s += std::to_string(r.size) + "," + r.candidate + "," + num(r.mean) + "," + num(r.p25) + "," + num(r.p75) + "\n";
  return s;
}

std::string alteration_csv(const std::vector<AlterationRow>& rows, const std::vector<Pipeline>& pipelines) {
  std::string s = "level,name,mean,p25,p75\n";
  for (const auto& r : rows)
    for (std::size_t i = 0; i < pipelines.size(); ++i) {
      const std::string v = num(r.scores.at(i));
      s += num(r.level) + "," + pipelines[i].name + "," + v + "," + v + "," + v + "\n";
    }
  return s;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace hwd
