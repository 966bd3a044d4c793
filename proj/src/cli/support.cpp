#include "cli/support.hpp"

#include <thread>

#include "oinfo/csv.hpp"
#include "oinfo/error.hpp"

namespace oinfo::cli {

char GlobalOptions::delimiter_char() const {
  if (delimiter == "tab" || delimiter == "\\t") return '\t';
  if (delimiter.size() != 1) throw Error(ErrorCode::InvalidConfig, "delimiter must be one character or 'tab'");
  return delimiter.front();
}

LogBase GlobalOptions::base_or(LogBase fallback) const {
  if (log_base.empty()) return fallback;
  return log_base == "bits" ? LogBase::Bits : LogBase::Nats;
}

std::size_t GlobalOptions::resolved_workers() const {
  if (workers > 0) return workers;
  return std::max(1u, std::thread::hardware_concurrency());
}

Json MatrixSource::to_json() const {
  Json j;
  if (!cov.empty()) {
    j["cov"] = cov;
  } else {
    j["timeseries"] = timeseries;
    j["aggregate"] = aggregate;
    j["zscore_runs"] = !no_zscore_runs;
  }
  j["shrinkage"] = shrinkage;
  j["jitter"] = jitter;
  return j;
}

LoadedMatrix load_matrix(const MatrixSource& source, char delimiter) {
  const csv::Options opts{.delimiter = delimiter};
  const data::ShrinkageConfig shrink(source.shrinkage, source.jitter);
  data::CorrelationEstimate estimate;
  if (!source.cov.empty()) {
    estimate = data::as_correlation(data::load_matrix_csv(source.cov, opts));
  } else {
    std::vector<data::TimeSeriesPanel> panels;
    for (const auto& path : source.timeseries) panels.push_back(data::load_timeseries(path, opts));
    data::AggregationOptions agg;
    if (source.aggregate == "mean")
      agg.mode = data::Aggregation::MeanOfRuns;
    else if (source.aggregate != "concat")
      throw Error(ErrorCode::InvalidConfig, "aggregate must be 'concat' or 'mean'");
    agg.zscore_runs = !source.no_zscore_runs;
    estimate = data::correlation_from_panels(panels, agg);
  }
  auto result = data::validate_or_repair(estimate, shrink);
  return {std::move(result.matrix), result.repaired};
}

std::string provenance_comment(const Json& header) {
  std::string out;
  for (const auto& [key, value] : header.items()) {
    if (key == "type") continue;
    out += "# " + key + ": " + (value.is_string() ? value.get<std::string>() : value.dump()) + "\n";
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  csv::write_atomically(path, contents);
}

void write_jsonl(const std::filesystem::path& path, const Json& header, const std::vector<Json>& lines) {
  write_text(path, io::to_jsonl(header, lines));
}

Progress::Progress(std::ostream& err, std::string label, bool enabled)
    : err_(err), label_(std::move(label)), enabled_(enabled) {}

ProgressFn Progress::callback() {
  if (!enabled_) return {};
  return [this](std::size_t done, std::size_t total) {
    const std::size_t decile = total == 0 ? 10 : done * 10 / total;
    std::lock_guard lock(mutex_);
    if (decile <= last_decile_ && done != total) return;
    if (done == total && last_decile_ == 11) return;
    last_decile_ = done == total ? 11 : decile;
    err_ << label_ << ": " << done << "/" << total << '\n';
  };
}

Execution make_execution(const Context& ctx, Progress& progress) {
  return {ctx.globals.resolved_workers(), progress.callback()};
}

}  // namespace oinfo::cli
