#pragma once

// Plumbing shared by the subcommands: input loading, output files with
// provenance comments, and progress on standard error.

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <ostream>
#include <string>
#include <vector>

#include "oinfo/correlation_matrix.hpp"
#include "oinfo/data_model.hpp"
#include "oinfo/parallel.hpp"
#include "oinfo/records_io.hpp"
#include "oinfo/units.hpp"

namespace oinfo::cli {

using io::Json;

struct GlobalOptions {
  std::string log_base;  // empty: the command's natural unit
  std::size_t workers = 1;
  std::uint64_t seed = 0;
  bool print_config = false;
  bool quiet = false;
  std::string delimiter = ",";

  char delimiter_char() const;
  LogBase base_or(LogBase fallback) const;
  std::size_t resolved_workers() const;
};

/// Where the system under study comes from: a matrix file, or time series
/// aggregated into one.
struct MatrixSource {
  std::string cov;
  std::vector<std::string> timeseries;
  std::string aggregate = "concat";
  bool no_zscore_runs = false;
  double shrinkage = 0.0;
  double jitter = 0.0;

  bool present() const { return !cov.empty() || !timeseries.empty(); }
  Json to_json() const;
};

struct LoadedMatrix {
  CorrelationMatrix matrix;
  bool repaired = false;
};

LoadedMatrix load_matrix(const MatrixSource& source, char delimiter);

struct Context {
  GlobalOptions globals;
  std::ostream& out;
  std::ostream& err;
};

/// "# key: value" lines carrying the generating command's header.
std::string provenance_comment(const Json& header);

void write_text(const std::filesystem::path& path, const std::string& contents);
void write_jsonl(const std::filesystem::path& path, const Json& header, const std::vector<Json>& lines);

/// Emits "<label>: done/total" to the error stream at every tenth of the
/// work. Safe to call from several workers.
class Progress {
 public:
  Progress(std::ostream& err, std::string label, bool enabled);
  ProgressFn callback();

 private:
  std::ostream& err_;
  std::string label_;
  bool enabled_;
  std::mutex mutex_;
  std::size_t last_decile_ = 0;
};

Execution make_execution(const Context& ctx, Progress& progress);

}  // namespace oinfo::cli
