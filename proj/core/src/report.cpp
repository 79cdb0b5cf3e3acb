#include <cmath>
#include <fstream>

#include <json.hpp>

#include "harmonica/pipeline.hpp"

namespace harmonica::pipeline {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

ordered_json number(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

ordered_json heaps_json(const heaps::HeapsFit& f) {
  return {{"alpha", f.alpha},   {"alpha_stderr", f.alpha_stderr}, {"log10K", f.log10K}, {"rho", f.rho},
          {"sigma_y", f.sigma_y}, {"sigma_c", f.sigma_c},         {"n", f.n_points},  {"excluded", f.excluded}};
}

ordered_json pmf_json(const heaps::LogBinnedPMF& pmf) {
  ordered_json bins = ordered_json::array();
  for (std::size_t i = 0; i < pmf.densities.size(); ++i) {
    bins.push_back({{"lo", pmf.bin_edges[i]},
                    {"hi", pmf.bin_edges[i + 1]},
                    {"center", pmf.center(i)},
                    {"count", pmf.counts[i]},
                    {"density", pmf.densities[i]}});
  }
  return {{"samples", pmf.sample_count}, {"bins", bins}};
}

std::string pmf_tsv(const heaps::LogBinnedPMF& pmf) {
  std::string out = "bin_lo\tbin_hi\tcenter\tcount\tdensity\n";
  for (std::size_t i = 0; i < pmf.densities.size(); ++i) {
    out += format_double(pmf.bin_edges[i]) + '\t' + format_double(pmf.bin_edges[i + 1]) + '\t' +
           format_double(pmf.center(i)) + '\t' + std::to_string(pmf.counts[i]) + '\t' +
           format_double(pmf.densities[i]) + '\n';
  }
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
}

std::string tsv_label(std::string s) {
  for (auto& c : s) {
    if (c == '\t' || c == '\n') c = ' ';
  }
  return s;
}

}  // namespace

std::string format_report_json(const AnalysisResult& res, const RunConfig& config) {
  ordered_json report;
  report["config"] = {{"unit_beats", config.unit_beats.str()},
                      {"threshold", config.threshold},
                      {"transpose", config.transpose},
                      {"drop_percussion", config.drop_percussion},
                      {"level", std::string(to_string(res.level))}};

  std::uint64_t tokens = 0;
  std::size_t pieces = 0;
  corpus::FrequencyTable all;
  for (const auto& ds : res.datasets) {
    tokens += ds.table.tokens();
    pieces += ds.pieces;
    all.merge(ds.table);
  }
  report["corpus"] = {{"datasets", res.datasets.size()}, {"pieces", pieces}, {"L", tokens}, {"V", all.types()}};

  report["heaps"] = res.heaps ? heaps_json(*res.heaps) : ordered_json(nullptr);
  if (!res.heaps) report["heaps_error"] = res.heaps_error;

  ordered_json trends = ordered_json::object();
  for (const auto& [name, t] : res.trends) {
    trends[name] = {{"slope_per_century", t.slope_per_century},
                    {"slope_stderr_per_century", t.slope_stderr_per_century},
                    {"intercept", t.intercept},
                    {"rho", t.rho},
                    {"n", t.n_points}};
  }
  for (const auto& [name, err] : res.trend_errors) trends[name] = {{"error", err}};
  report["trends"] = trends;

  ordered_json corr = ordered_json::object();
  for (const auto& m : res.correlations) {
    ordered_json values = ordered_json::array();
    ordered_json degenerate = ordered_json::array();
    for (std::size_t i = 0; i < m.values.size(); ++i) {
      values.push_back(m.values[i]);
      ordered_json flags = ordered_json::array();
      for (bool b : m.degenerate[i]) flags.push_back(b);
      degenerate.push_back(flags);
    }
    corr[std::string(heaps::to_string(m.method))] = {
        {"labels", m.labels}, {"n", m.n_rows}, {"values", values}, {"degenerate", degenerate}};
  }
  report["correlations"] = corr;
  if (!res.correlation_error.empty()) report["correlation_error"] = res.correlation_error;

  report["pmf"] = {{"L", res.pmf_length ? pmf_json(*res.pmf_length) : ordered_json(nullptr)},
                   {"V", res.pmf_types ? pmf_json(*res.pmf_types) : ordered_json(nullptr)}};
  if (res.tail) {
    report["tail_fit"] = {{"exponent", res.tail->exponent},
                          {"exponent_stderr", res.tail->exponent_stderr},
                          {"xmin", res.tail->xmin},
                          {"n_tail", res.tail->n_tail},
                          {"ks_stat", res.tail->ks_stat}};
  } else {
    report["tail_fit"] = nullptr;
    report["tail_fit_error"] = res.tail_error;
  }

  ordered_json top = ordered_json::array();
  for (const auto& [word, count] : res.top_codewords) {
    std::string chord;
    for (int pc = 0; pc < chroma::kPitchClasses; ++pc) {
      if (word.has(pc)) chord += key::pitch_class_name(pc);
    }
    top.push_back({{"codeword", word.bits()}, {"pitch_classes", chord}, {"count", count}});
  }
  report["top_codewords"] = top;

  ordered_json rows = ordered_json::array();
  for (const auto& r : res.rows) {
    rows.push_back({{"composer", r.composer},
                    {"year", r.year},
                    {"pieces", r.pieces},
                    {"L", r.tokens},
                    {"V", r.types},
                    {"ttr", number(r.ttr)},
                    {"guiraud", number(r.guiraud)},
                    {"herdan", number(r.herdan)},
                    {"entropy_bits", number(r.entropy_bits)},
                    {"mean_filling", number(r.mean_filling)},
                    {"richness", r.richness ? number(*r.richness) : ordered_json(nullptr)}});
  }
  report["metrics"] = rows;
  return report.dump(2) + "\n";
}

void write_analysis(const AnalysisResult& res, const RunConfig& config, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  write_text(out_dir / "metrics.csv", vocab::format_metrics_csv(res.rows));
  write_text(out_dir / "aggregate.csv", corpus::format_aggregate_csv(res.datasets));
  write_text(out_dir / "report.json", format_report_json(res, config));

  std::string scatter = "label\tlog10_L\tlog10_V\trichness\n";
  std::string by_year = "label\tyear\trichness\tentropy_bits\tmean_filling\n";
  for (const auto& r : res.rows) {
    const std::string richness = r.richness ? format_double(*r.richness) : "";
    if (r.tokens > 0 && r.types > 0) {
      scatter += tsv_label(r.composer) + '\t' + format_double(std::log10(static_cast<double>(r.tokens))) + '\t' +
                 format_double(std::log10(static_cast<double>(r.types))) + '\t' + richness + '\n';
    }
    by_year += tsv_label(r.composer) + '\t' + format_double(r.year) + '\t' + richness + '\t' +
               (std::isfinite(r.entropy_bits) ? format_double(r.entropy_bits) : "") + '\t' +
               (std::isfinite(r.mean_filling) ? format_double(r.mean_filling) : "") + '\n';
  }
  write_text(out_dir / "heaps_scatter.tsv", scatter);
  write_text(out_dir / "richness_vs_year.tsv", by_year);
  if (res.pmf_length) write_text(out_dir / "pmf_L.tsv", pmf_tsv(*res.pmf_length));
  if (res.pmf_types) write_text(out_dir / "pmf_V.tsv", pmf_tsv(*res.pmf_types));
}

}  // namespace harmonica::pipeline
