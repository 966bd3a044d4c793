#include "cli/commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>

#include "cli/support.hpp"
#include "oinfo/analytics.hpp"
#include "oinfo/combinatorics.hpp"
#include "oinfo/csv.hpp"
#include "oinfo/discrete_info.hpp"
#include "oinfo/error.hpp"
#include "oinfo/gaussian_info.hpp"
#include "oinfo/records_io.hpp"
#include "oinfo/rng.hpp"
#include "oinfo/subset_search.hpp"

namespace oinfo::cli {

namespace {

namespace fs = std::filesystem;

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    std::string item(text.substr(start, end - start));
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(std::move(item));
    start = end + 1;
  }
  return out;
}

std::string fmt(double v) { return csv::format_double(v); }

Json subset_json(const Subset& s) { return Json(s.indices()); }

void require_matrix(const MatrixSource& src) {
  if (!src.present()) throw Error(ErrorCode::InvalidConfig, "one of --cov or --timeseries is required");
}

void add_matrix_options(CLI::App* sub, MatrixSource& src) {
  auto* cov = sub->add_option("--cov", src.cov, "Correlation or covariance matrix CSV (N x N, optional header)");
  auto* ts = sub->add_option("--timeseries", src.timeseries,
                             "Time-series CSV files (rows = frames, columns = nodes), aggregated into one matrix");
  cov->excludes(ts);
  sub->add_option("--aggregate", src.aggregate, "How runs are combined: concat or mean")
      ->check(CLI::IsMember({"concat", "mean"}))
      ->capture_default_str();
  sub->add_flag("--no-zscore-runs", src.no_zscore_runs, "Do not z-score each run before concatenating");
  sub->add_option("--shrinkage", src.shrinkage, "Shrinkage toward identity applied if the matrix is not PD")
      ->capture_default_str();
  sub->add_option("--jitter", src.jitter, "Diagonal jitter added together with shrinkage")->capture_default_str();
}

Json base_config(std::string_view command, const GlobalOptions& g, LogBase base) {
  Json j;
  j["command"] = command;
  j["units"] = unit_name(base);
  j["seed"] = g.seed;
  j["delimiter"] = g.delimiter;
  return j;
}

// The output directory is left out so that identical campaigns written to
// different places produce identical files.
Json matrix_header(std::string_view command, const GlobalOptions& g, Json config, LogBase base,
                   const LoadedMatrix& loaded) {
  config.erase("out_dir");
  Json h = io::make_header(command, g.seed, config, base);
  h["n_nodes"] = loaded.matrix.dim();
  h["matrix_repaired"] = loaded.repaired;
  h["node_names"] = data::node_names_or_indices(loaded.matrix);
  return h;
}

class Command {
 public:
  explicit Command(CLI::App* sub) : sub_(sub) {}
  virtual ~Command() = default;
  Command(const Command&) = delete;
  Command& operator=(const Command&) = delete;

  bool selected() const { return sub_->parsed(); }
  virtual Json config(const GlobalOptions& g) const = 0;
  virtual void execute(Context& ctx) const = 0;

 protected:
  CLI::App* sub_;
};

// ---------------------------------------------------------------- measures

class MeasuresCommand final : public Command {
 public:
  explicit MeasuresCommand(CLI::App& app)
      : Command(app.add_subcommand("measures", "Information measures of one subset, as JSON on stdout")) {
    add_matrix_options(sub_, src_);
    sub_->add_option("--subset", subset_, "Node indices, e.g. 0,1,2 or 0-4")->required();
    sub_->add_option("--measures", measures_,
                     "Comma-separated measures (default: all defined for the subset size)");
    sub_->add_flag("--also-coinfo", also_coinfo_, "Also report the co-information (3-node subsets only)");
  }

  Json config(const GlobalOptions& g) const override {
    Json j = base_config("measures", g, g.base_or(LogBase::Nats));
    j["input"] = src_.to_json();
    j["subset"] = subset_;
    j["measures"] = measures_.empty() ? Json("default") : Json(split_list(measures_));
    j["also_coinfo"] = also_coinfo_;
    return j;
  }

  void execute(Context& ctx) const override {
    require_matrix(src_);
    const LogBase base = ctx.globals.base_or(LogBase::Nats);
    const auto loaded = load_matrix(src_, ctx.globals.delimiter_char());
    const Subset subset = Subset::parse(subset_);
    subset.check_bounds(loaded.matrix.dim());

    std::vector<search::Measure> wanted;
    if (measures_.empty()) {
      using M = search::Measure;
      wanted = {M::JointEntropy, M::TotalCorrelation};
      if (subset.size() >= 2)
        for (M m : {M::DualTotalCorrelation, M::SInformation, M::DescriptionComplexity}) wanted.push_back(m);
      if (subset.size() >= 3)
        for (M m : {M::OInformation, M::NormalizedO}) wanted.push_back(m);
    } else {
      for (const auto& name : split_list(measures_)) wanted.push_back(search::parse_measure(name));
    }

    Json j;
    j["command"] = "measures";
    j["units"] = unit_name(base);
    j["subset"] = subset_json(subset);
    j["k"] = subset.size();
    for (auto m : wanted)
      j[std::string(search::to_string(m))] = from_nats(search::evaluate(loaded.matrix, subset, m), base);
    if (also_coinfo_) j["co_information"] = from_nats(gaussian::co_information_3(loaded.matrix, subset), base);
    j["matrix_repaired"] = loaded.repaired;
    ctx.out << j.dump(2) << '\n';
  }

 private:
  MatrixSource src_;
  std::string subset_;
  std::string measures_;
  bool also_coinfo_ = false;
};

// ------------------------------------------------------------------ sample

class SampleCommand final : public Command {
 public:
  explicit SampleCommand(CLI::App& app)
      : Command(app.add_subcommand("sample", "Random k-subsets with full measure reports")) {
    add_matrix_options(sub_, src_);
    sub_->add_option("--k", k_, "Subset size")->required();
    sub_->add_option("--n", n_, "Number of samples")->required();
    sub_->add_option("--out-dir", out_dir_, "Output directory")->required();
    sub_->add_option("--filter", filter_, "Records written to the JSON Lines file: all, negative or positive")
        ->check(CLI::IsMember({"all", "negative", "positive"}))
        ->capture_default_str();
    sub_->add_option("--labels", labels_, "Node,system CSV for system-stratified sampling");
    sub_->add_option("--systems", systems_, "Number of distinct systems every subset must touch");
  }

  Json config(const GlobalOptions& g) const override {
    Json j = base_config("sample", g, g.base_or(LogBase::Nats));
    j["input"] = src_.to_json();
    j["k"] = k_;
    j["n_samples"] = n_;
    j["filter"] = filter_;
    j["out_dir"] = out_dir_;
    if (!labels_.empty()) j["labels"] = labels_;
    if (systems_ > 0) j["systems"] = systems_;
    return j;
  }

  void execute(Context& ctx) const override {
    require_matrix(src_);
    if (n_ < 1) throw Error(ErrorCode::InvalidConfig, "--n must be at least 1");
    if (labels_.empty() != (systems_ == 0))
      throw Error(ErrorCode::InvalidConfig, "--labels and --systems must be given together");
    const LogBase base = ctx.globals.base_or(LogBase::Nats);
    const char delim = ctx.globals.delimiter_char();
    const auto loaded = load_matrix(src_, delim);
    const auto& m = loaded.matrix;

    Progress progress(ctx.err, "sample", !ctx.globals.quiet);
    const auto exec = make_execution(ctx, progress);
    std::vector<search::SampleRecord> records;
    if (labels_.empty()) {
      records = search::sample_random_subsets(m, k_, n_, ctx.globals.seed, exec);
    } else {
      const auto labels = data::load_labels(labels_, data::node_names_or_indices(m), delim);
      records = search::sample_stratified_by_systems(m, labels, k_, n_, systems_, ctx.globals.seed, exec);
    }

    const Json header = matrix_header("sample", ctx.globals, config(ctx.globals), base, loaded);
    std::vector<Json> lines;
    for (const auto& r : records) {
      const double omega = r.measures.o_information;
      if (filter_ == "negative" && !(omega < 0.0)) continue;
      if (filter_ == "positive" && !(omega > 0.0)) continue;
      lines.push_back(io::sample_record_to_json(r, base));
    }
    const fs::path dir(out_dir_);
    write_jsonl(dir / "samples.jsonl", header, lines);

    const auto frac = search::fraction_negative(records, m.dim());
    double sum = 0.0, lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& r : records) {
      sum += r.measures.o_information;
      lo = std::min(lo, r.measures.o_information);
      hi = std::max(hi, r.measures.o_information);
    }
    const double mean = sum / static_cast<double>(records.size());
    std::string csv_text = provenance_comment(header);
    csv_text +=
        "k,n_samples,negatives,fraction_negative,standard_error,mean_o_information,min_o_information,"
        "max_o_information,population,extrapolated_count,units\n";
    csv_text += std::to_string(k_) + "," + std::to_string(frac.total) + "," + std::to_string(frac.negatives) + "," +
                fmt(frac.fraction) + "," + fmt(frac.standard_error) + "," + fmt(from_nats(mean, base)) + "," +
                fmt(from_nats(lo, base)) + "," + fmt(from_nats(hi, base)) + "," + frac.population.str() + "," +
                frac.extrapolated_count.str() + "," + std::string(unit_name(base)) + "\n";
    write_text(dir / "sample_summary.csv", csv_text);

    Json summary;
    summary["command"] = "sample";
    summary["units"] = unit_name(base);
    summary["k"] = k_;
    summary["n_samples"] = frac.total;
    summary["negatives"] = frac.negatives;
    summary["fraction_negative"] = frac.fraction;
    summary["standard_error"] = frac.standard_error;
    summary["mean_o_information"] = from_nats(mean, base);
    summary["population"] = frac.population.str();
    summary["extrapolated_count"] = frac.extrapolated_count.str();
    summary["records_written"] = lines.size();
    ctx.out << summary.dump(2) << '\n';
  }

 private:
  MatrixSource src_;
  std::size_t k_ = 0;
  std::size_t n_ = 0;
  std::string out_dir_;
  std::string filter_ = "all";
  std::string labels_;
  std::size_t systems_ = 0;
};

// ------------------------------------------------------------------ anneal

std::vector<std::size_t> parse_k_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw Error(ErrorCode::InvalidConfig, "--k-range expects a:b");
  auto to_size = [&](std::string_view part) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || ptr != part.data() + part.size() || part.empty())
      throw Error(ErrorCode::InvalidConfig, "bad --k-range '" + text + "'");
    return v;
  };
  const std::size_t a = to_size(std::string_view(text).substr(0, colon));
  const std::size_t b = to_size(std::string_view(text).substr(colon + 1));
  if (a > b) throw Error(ErrorCode::InvalidConfig, "--k-range start exceeds end");
  std::vector<std::size_t> sizes;
  for (std::size_t k = a; k <= b; ++k) sizes.push_back(k);
  return sizes;
}

class AnnealCommand final : public Command {
 public:
  explicit AnnealCommand(CLI::App& app)
      : Command(app.add_subcommand("anneal", "Simulated annealing for extremal subsets")) {
    add_matrix_options(sub_, src_);
    auto* k = sub_->add_option("--k", k_, "Subset size");
    auto* range = sub_->add_option("--k-range", k_range_, "Inclusive range of subset sizes, e.g. 3:15");
    k->excludes(range);
    sub_->add_option("--runs", runs_, "Independent runs per subset size")->capture_default_str();
    sub_->add_option("--steps", cfg_.steps, "Proposals per run")->capture_default_str();
    sub_->add_option("--t0", cfg_.t0, "Initial temperature")->capture_default_str();
    sub_->add_option("--t-exp", cfg_.t_exp, "Per-step temperature decay factor in (0, 1)")->capture_default_str();
    sub_->add_option("--flip-probs", flip_probs_, "Relative frequencies of 1, 2 and 3 node swaps")
        ->capture_default_str();
    sub_->add_option("--objective", objective_, "Measure to optimize")->capture_default_str();
    sub_->add_flag("--maximize", maximize_, "Maximize the objective instead of minimizing it");
    sub_->add_flag("--trajectory", cfg_.record_trajectory, "Record (step, value, temperature) for every step");
    sub_->add_option("--out-dir", out_dir_, "Output directory")->required();
  }

  Json config(const GlobalOptions& g) const override {
    Json j = base_config("anneal", g, g.base_or(LogBase::Nats));
    j["input"] = src_.to_json();
    j["subset_sizes"] = sizes();
    j["runs"] = runs_;
    j["steps"] = cfg_.steps;
    j["t0"] = cfg_.t0;
    j["t_exp"] = cfg_.t_exp;
    j["flip_probs"] = flip_probs_;
    j["objective"] = search::to_string(search::parse_measure(objective_));
    j["direction"] = maximize_ ? "maximize" : "minimize";
    j["trajectory"] = cfg_.record_trajectory;
    j["out_dir"] = out_dir_;
    return j;
  }

  void execute(Context& ctx) const override {
    require_matrix(src_);
    if (runs_ < 1) throw Error(ErrorCode::InvalidConfig, "--runs must be at least 1");
    const LogBase base = ctx.globals.base_or(LogBase::Nats);
    const auto loaded = load_matrix(src_, ctx.globals.delimiter_char());
    const auto ks = sizes();

    search::AnnealConfig tmpl = cfg_;
    tmpl.seed = ctx.globals.seed;
    tmpl.subset_size = ks.front();
    tmpl.objective = {search::parse_measure(objective_),
                      maximize_ ? search::Direction::Maximize : search::Direction::Minimize};
    const auto probs = split_list(flip_probs_);
    if (probs.size() != 3) throw Error(ErrorCode::InvalidConfig, "--flip-probs needs three values");
    for (std::size_t i = 0; i < 3; ++i) tmpl.flip_probs[i] = csv::parse_double(probs[i], 0, i + 1);
    tmpl.validate();

    Progress progress(ctx.err, "anneal", !ctx.globals.quiet);
    const auto sweep = search::anneal_sweep(loaded.matrix, ks, runs_, tmpl, make_execution(ctx, progress));

    const Json header = matrix_header("anneal", ctx.globals, config(ctx.globals), base, loaded);
    std::vector<Json> lines;
    std::string csv_text = provenance_comment(header);
    csv_text += "k,runs,mean_best,min_best,max_best,best_overall,unique_best_subsets,objective,direction,units\n";
    Json per_k = Json::array();
    for (const auto& level : sweep) {
      double lo = std::numeric_limits<double>::infinity(), hi = -lo;
      for (std::size_t r = 0; r < level.runs.size(); ++r) {
        Json line = io::anneal_run_to_json(level.runs[r], base);
        line["run_index"] = r;
        lines.push_back(std::move(line));
        lo = std::min(lo, level.runs[r].best_value);
        hi = std::max(hi, level.runs[r].best_value);
      }
      csv_text += std::to_string(level.subset_size) + "," + std::to_string(level.runs.size()) + "," +
                  fmt(from_nats(level.mean_best, base)) + "," + fmt(from_nats(lo, base)) + "," +
                  fmt(from_nats(hi, base)) + "," + fmt(from_nats(level.best_overall, base)) + "," +
                  std::to_string(level.unique_best_subsets) + "," +
                  std::string(search::to_string(tmpl.objective.measure)) + "," +
                  (maximize_ ? "maximize" : "minimize") + "," + std::string(unit_name(base)) + "\n";
      per_k.push_back({{"k", level.subset_size},
                       {"mean_best", from_nats(level.mean_best, base)},
                       {"best_overall", from_nats(level.best_overall, base)},
                       {"unique_best_subsets", level.unique_best_subsets}});
    }
    const fs::path dir(out_dir_);
    write_jsonl(dir / "anneal_runs.jsonl", header, lines);
    write_text(dir / "anneal_summary.csv", csv_text);
    ctx.out << Json{{"command", "anneal"}, {"units", unit_name(base)}, {"levels", per_k}}.dump(2) << '\n';
  }

 private:
  std::vector<std::size_t> sizes() const {
    if (!k_range_.empty()) return parse_k_range(k_range_);
    if (k_ == 0) throw Error(ErrorCode::InvalidConfig, "one of --k or --k-range is required");
    return {k_};
  }

  MatrixSource src_;
  std::size_t k_ = 0;
  std::string k_range_;
  std::size_t runs_ = 1;
  search::AnnealConfig cfg_;
  std::string flip_probs_ = "0.68,0.27,0.04";
  std::string objective_ = "o_information";
  bool maximize_ = false;
  std::string out_dir_;
};

// --------------------------------------------------------------------- tse

class TseCommand final : public Command {
 public:
  explicit TseCommand(CLI::App& app) : Command(app.add_subcommand("tse", "TSE complexity of one subset")) {
    add_matrix_options(sub_, src_);
    sub_->add_option("--subset", subset_, "Node indices, e.g. 0-7")->required();
    sub_->add_option("--mode", mode_, "exact or sampled")
        ->check(CLI::IsMember({"exact", "sampled"}))
        ->capture_default_str();
    sub_->add_option("--samples-per-scale", samples_, "Subsets drawn per scale in sampled mode");
    sub_->add_option("--exact-limit", exact_limit_, "Largest subset enumerated exactly")->capture_default_str();
  }

  Json config(const GlobalOptions& g) const override {
    Json j = base_config("tse", g, g.base_or(LogBase::Nats));
    j["input"] = src_.to_json();
    j["subset"] = subset_;
    j["mode"] = mode_;
    j["samples_per_scale"] = samples_;
    j["exact_limit"] = exact_limit_;
    return j;
  }

  void execute(Context& ctx) const override {
    require_matrix(src_);
    const LogBase base = ctx.globals.base_or(LogBase::Nats);
    const auto loaded = load_matrix(src_, ctx.globals.delimiter_char());
    const Subset subset = Subset::parse(subset_);
    subset.check_bounds(loaded.matrix.dim());
    gaussian::TseOptions opts;
    opts.mode = mode_ == "exact" ? gaussian::TseMode::Exact : gaussian::TseMode::Sampled;
    opts.samples_per_scale = samples_;
    opts.seed = ctx.globals.seed;
    opts.exact_limit = exact_limit_;
    const auto result = gaussian::tse_complexity(loaded.matrix, subset, opts);

    Json j;
    j["command"] = "tse";
    j["units"] = unit_name(base);
    j["subset"] = subset_json(subset);
    j["k"] = subset.size();
    j["mode"] = mode_;
    j["tse"] = from_nats(result.value, base);
    Json deficits = Json::array();
    for (double d : result.per_scale_deficit) deficits.push_back(from_nats(d, base));
    j["per_scale_deficit"] = deficits;
    if (opts.mode == gaussian::TseMode::Sampled) {
      j["samples_per_scale"] = result.samples_per_scale;
    } else {
      j["bipartition_form"] = from_nats(gaussian::tse_bipartition_form(loaded.matrix, subset, exact_limit_), base);
    }
    j["s_information"] =
        subset.size() >= 2 ? Json(from_nats(gaussian::s_information(loaded.matrix, subset), base)) : Json(nullptr);
    ctx.out << j.dump(2) << '\n';
  }

 private:
  MatrixSource src_;
  std::string subset_;
  std::string mode_ = "exact";
  std::size_t samples_ = 0;
  std::size_t exact_limit_ = gaussian::kDefaultExactLimit;
};

// ----------------------------------------------------------------- analyze

struct LoadedRecords {
  Json header;
  std::vector<Subset> subsets;
  std::vector<std::size_t> ids;  // position of each subset in the record stream
  std::vector<bool> qualifies;
};

class AnalyzeCommand final : public Command {
 public:
  explicit AnalyzeCommand(CLI::App& app)
      : Command(app.add_subcommand("analyze", "Participation, FC, overlap and enrichment analyses of records")) {
    sub_->add_option("--records", records_, "JSON Lines file written by sample or anneal")->required();
    add_matrix_options(sub_, src_);
    sub_->add_option("--labels", labels_, "Node,system CSV");
    sub_->add_option("--analyses", analyses_,
                     "Comma-separated subset of participation,fc,jaccard,enrichment (default: all that the "
                     "inputs allow)");
    sub_->add_option("--filter", filter_, "Which records qualify: negative (O < 0) or all")
        ->check(CLI::IsMember({"negative", "all"}))
        ->capture_default_str();
    sub_->add_option("--out-dir", out_dir_, "Output directory")->required();
    sub_->add_option("--jaccard-sample", jaccard_sample_, "Largest number of subsets in the Jaccard matrix")
        ->capture_default_str();
    sub_->add_option("--max-scatter-rows", max_scatter_rows_, "Cap on rows in the pair scatter export")
        ->capture_default_str();
  }

  Json config(const GlobalOptions& g) const override {
    Json j = base_config("analyze", g, g.base_or(LogBase::Nats));
    j["records"] = records_;
    if (src_.present()) j["input"] = src_.to_json();
    if (!labels_.empty()) j["labels"] = labels_;
    j["analyses"] = selected_analyses();
    j["filter"] = filter_;
    j["out_dir"] = out_dir_;
    j["jaccard_sample"] = jaccard_sample_;
    j["max_scatter_rows"] = max_scatter_rows_;
    return j;
  }

  void execute(Context& ctx) const override {
    const char delim = ctx.globals.delimiter_char();
    const auto wanted = selected_analyses();
    auto wants = [&](std::string_view a) { return std::find(wanted.begin(), wanted.end(), a) != wanted.end(); };
    if (wants("fc") && !src_.present()) throw Error(ErrorCode::InvalidConfig, "the fc analysis needs --cov");
    if (wants("enrichment") && labels_.empty())
      throw Error(ErrorCode::InvalidConfig, "the enrichment analysis needs --labels");

    std::optional<LoadedMatrix> loaded;
    if (src_.present()) loaded = load_matrix(src_, delim);
    const auto recs = read_records(loaded ? &loaded->matrix : nullptr);
    const std::size_t n = node_count(recs, loaded ? &loaded->matrix : nullptr);
    for (const auto& s : recs.subsets) s.check_bounds(n);

    std::vector<Subset> qualifying;
    std::vector<std::size_t> qualifying_ids;
    for (std::size_t i = 0; i < recs.subsets.size(); ++i)
      if (recs.qualifies[i]) {
        qualifying.push_back(recs.subsets[i]);
        qualifying_ids.push_back(recs.ids[i]);
      }
    if (qualifying.empty())
      throw Error(ErrorCode::EmptyAfterFilter, "no record passes the '" + filter_ + "' filter");

    Json analysis_cfg = config(ctx.globals);
    std::string comment = "# source: " + recs.header.dump() + "\n# analysis_config: " + analysis_cfg.dump() + "\n";
    const fs::path dir(out_dir_);
    Json summary;
    summary["type"] = "analysis";
    summary["source"] = recs.header;
    summary["config"] = analysis_cfg;
    summary["records"] = recs.subsets.size();
    summary["qualifying"] = qualifying.size();

    const auto table = analytics::participation(qualifying, n);
    std::vector<std::string> names;
    if (loaded)
      names = data::node_names_or_indices(loaded->matrix);
    else if (recs.header.contains("node_names") && recs.header["node_names"].size() == n)
      names = recs.header["node_names"].get<std::vector<std::string>>();
    else
      for (std::size_t i = 0; i < n; ++i) names.push_back(std::to_string(i));

    if (wants("participation")) {
      std::string text = comment + "node,name,count,share\n";
      for (std::size_t i = 0; i < n; ++i)
        text += std::to_string(i) + "," + names[i] + "," + std::to_string(table.node_counts[i]) + "," +
                fmt(static_cast<double>(table.node_counts[i]) / static_cast<double>(table.total_qualifying)) + "\n";
      write_text(dir / "participation.csv", text);
    }
    if (wants("fc")) {
      const auto fc = analytics::participation_vs_fc(table, loaded->matrix, max_scatter_rows_, ctx.globals.seed);
      std::string text = comment + "i,j,abs_fc,participation\n";
      for (const auto& row : fc.scatter)
        text += std::to_string(row.i) + "," + std::to_string(row.j) + "," + fmt(row.abs_fc) + "," +
                std::to_string(row.participation) + "\n";
      write_text(dir / "pair_fc_scatter.csv", text);
      summary["participation_vs_fc"] = {{"spearman_rho", fc.rho},
                                        {"pair_count", fc.pair_count},
                                        {"scatter_rows", fc.scatter.size()}};
    }
    if (wants("jaccard")) {
      std::vector<std::size_t> pick(qualifying.size());
      std::iota(pick.begin(), pick.end(), std::size_t{0});
      if (pick.size() > jaccard_sample_) {
        Rng rng(derive_seed(ctx.globals.seed, 0x4a414343, 0));
        pick = rng.sample_without_replacement(qualifying.size(), jaccard_sample_);
        std::sort(pick.begin(), pick.end());
      }
      std::vector<Subset> chosen;
      for (auto p : pick) chosen.push_back(qualifying[p]);
      const auto jm = analytics::jaccard_matrix(chosen);
      std::string text = comment + "record";
      for (auto p : pick) text += "," + std::to_string(qualifying_ids[p]);
      text += "\n";
      for (Eigen::Index r = 0; r < jm.rows(); ++r) {
        text += std::to_string(qualifying_ids[pick[static_cast<std::size_t>(r)]]);
        for (Eigen::Index c = 0; c < jm.cols(); ++c) text += "," + fmt(jm(r, c));
        text += "\n";
      }
      write_text(dir / "jaccard.csv", text);
      summary["jaccard"] = {{"subsets", chosen.size()}};
    }
    if (wants("enrichment")) {
      const auto labels = data::load_labels(labels_, names, delim);
      std::map<std::size_t, std::vector<Subset>> by_size;
      for (const auto& s : qualifying) by_size[s.size()].push_back(s);
      std::vector<analytics::SystemEnrichment> per_size;
      std::string by_size_text = comment + "k,system,size,ratio,qualifying\n";
      for (const auto& [k, subs] : by_size) {
        per_size.push_back(analytics::system_enrichment(analytics::participation(subs, n), labels));
        const auto& e = per_size.back();
        for (std::size_t s = 0; s < e.systems.size(); ++s)
          by_size_text += std::to_string(k) + "," + e.systems[s] + "," + std::to_string(e.sizes[s]) + "," +
                          fmt(e.ratio[s]) + "," + std::to_string(subs.size()) + "\n";
      }
      const auto avg = analytics::average_enrichment(per_size);
      std::string text = comment + "system,size,ratio\n";
      Json ratios = Json::object();
      for (std::size_t s = 0; s < avg.systems.size(); ++s) {
        text += avg.systems[s] + "," + std::to_string(avg.sizes[s]) + "," + fmt(avg.ratio[s]) + "\n";
        ratios[avg.systems[s]] = avg.ratio[s];
      }
      write_text(dir / "enrichment.csv", text);
      write_text(dir / "enrichment_by_size.csv", by_size_text);
      summary["enrichment"] = {{"sizes_averaged", by_size.size()}, {"ratio", ratios}};
    }
    write_text(dir / "analysis_summary.json", summary.dump(2) + "\n");
    ctx.out << summary.dump(2) << '\n';
  }

 private:
  std::vector<std::string> selected_analyses() const {
    if (!analyses_.empty()) {
      auto list = split_list(analyses_);
      for (const auto& a : list)
        if (a != "participation" && a != "fc" && a != "jaccard" && a != "enrichment")
          throw Error(ErrorCode::InvalidConfig, "unknown analysis '" + a + "'");
      return list;
    }
    std::vector<std::string> list{"participation", "jaccard"};
    if (src_.present()) list.push_back("fc");
    if (!labels_.empty()) list.push_back("enrichment");
    return list;
  }

  LoadedRecords read_records(const CorrelationMatrix* cov) const {
    const auto stream = io::read_jsonl(records_);
    LoadedRecords out;
    out.header = stream.header.is_null() ? Json::object() : stream.header;
    for (std::size_t i = 0; i < stream.lines.size(); ++i) {
      const auto& line = stream.lines[i];
      const auto type = io::record_type(line);
      if (type == "sample") {
        const auto rec = io::sample_record_from_json(line);
        out.subsets.push_back(rec.subset());
        out.qualifies.push_back(filter_ == "all" || rec.measures.o_information < 0.0);
      } else if (type == "anneal_run") {
        Subset s(line.at("best_subset").get<std::vector<std::size_t>>());
        bool ok = filter_ == "all";
        if (!ok) {
          if (line.value("objective", std::string()) == "o_information") {
            ok = line.at("best_value").get<double>() < 0.0;
          } else {
            if (cov == nullptr)
              throw Error(ErrorCode::InvalidConfig, "filtering non-O-information runs by sign needs --cov");
            ok = gaussian::o_information(*cov, s) < 0.0;
          }
        }
        out.subsets.push_back(std::move(s));
        out.qualifies.push_back(ok);
      } else {
        throw Error(ErrorCode::ParseError, "record " + std::to_string(i + 1) + " has unsupported type '" +
                                               std::string(type) + "'");
      }
      out.ids.push_back(i);
    }
    if (out.subsets.empty()) throw Error(ErrorCode::EmptyInput, "no records in '" + records_ + "'");
    return out;
  }

  static std::size_t node_count(const LoadedRecords& recs, const CorrelationMatrix* cov) {
    if (cov != nullptr) {
      if (recs.header.contains("n_nodes") && recs.header["n_nodes"].get<std::size_t>() != cov->dim())
        throw Error(ErrorCode::ShapeMismatch, "records were generated on " +
                                                  recs.header["n_nodes"].dump() + " nodes, matrix has " +
                                                  std::to_string(cov->dim()));
      return cov->dim();
    }
    if (recs.header.contains("n_nodes")) return recs.header["n_nodes"].get<std::size_t>();
    std::size_t n = 0;
    for (const auto& s : recs.subsets) n = std::max(n, s.indices().back() + 1);
    return n;
  }

  std::string records_;
  MatrixSource src_;
  std::string labels_;
  std::string analyses_;
  std::string filter_ = "negative";
  std::string out_dir_;
  std::size_t jaccard_sample_ = 1000;
  std::size_t max_scatter_rows_ = analytics::kMaxScatterRows;
};

// ---------------------------------------------------------------- discrete

class DiscreteCommand final : public Command {
 public:
  explicit DiscreteCommand(CLI::App& app)
      : Command(app.add_subcommand("discrete", "Plug-in measures of a finite joint distribution")) {
    auto* joint = sub_->add_option("--joint", joint_, "CSV rows of x_1,...,x_N,p");
    auto* xr = sub_->add_flag("--xor", xor_, "Use the built-in XOR gate distribution");
    joint->excludes(xr);
    sub_->add_option("--pair", pair_, "Two variables i,j for (conditional) mutual information");
    sub_->add_option("--given", given_, "Conditioning variables for --pair");
  }

  Json config(const GlobalOptions& g) const override {
    Json j = base_config("discrete", g, g.base_or(LogBase::Bits));
    j["joint"] = xor_ ? Json("xor") : Json(joint_);
    if (!pair_.empty()) j["pair"] = pair_;
    if (!given_.empty()) j["given"] = given_;
    return j;
  }

  void execute(Context& ctx) const override {
    if (!xor_ && joint_.empty()) throw Error(ErrorCode::InvalidConfig, "one of --joint or --xor is required");
    const LogBase base = ctx.globals.base_or(LogBase::Bits);
    const auto joint = xor_ ? discrete::xor_joint() : discrete::DiscreteJoint::load_csv(joint_, ctx.globals.delimiter_char());
    auto conv = [&](double bits) { return from_bits(bits, base); };
    Json j;
    j["command"] = "discrete";
    j["units"] = unit_name(base);
    j["arity"] = joint.arity();
    j["alphabet_sizes"] = joint.alphabet_sizes();
    j["entropy"] = conv(discrete::entropy(joint));
    if (joint.arity() >= 2) {
      j["total_correlation"] = conv(discrete::total_correlation(joint));
      j["dual_total_correlation"] = conv(discrete::dual_total_correlation(joint));
      j["description_complexity"] = conv(discrete::description_complexity(joint));
    }
    if (joint.arity() >= 3) {
      j["o_information"] = conv(discrete::o_information(joint));
      j["normalized_o"] = conv(discrete::normalized_o_information(joint));
    }
    if (!pair_.empty()) {
      const auto pair = split_list(pair_);
      if (pair.size() != 2) throw Error(ErrorCode::InvalidConfig, "--pair needs exactly two indices");
      const auto i = static_cast<std::size_t>(csv::parse_double(pair[0], 0, 1));
      const auto k = static_cast<std::size_t>(csv::parse_double(pair[1], 0, 2));
      std::vector<std::size_t> given;
      if (!given_.empty()) {
        const Subset parsed = Subset::parse(given_);
        given.assign(parsed.begin(), parsed.end());
      }
      j[given.empty() ? "mutual_information" : "conditional_mutual_information"] =
          conv(discrete::conditional_mutual_information(joint, i, k, given));
    } else if (!given_.empty()) {
      throw Error(ErrorCode::InvalidConfig, "--given requires --pair");
    }
    ctx.out << j.dump(2) << '\n';
  }

 private:
  std::string joint_;
  bool xor_ = false;
  std::string pair_;
  std::string given_;
};

// --------------------------------------------------------------- correlate

class CorrelateCommand final : public Command {
 public:
  explicit CorrelateCommand(CLI::App& app)
      : Command(app.add_subcommand("correlate", "Aggregate time series into a correlation matrix CSV")) {
    sub_->add_option("--timeseries", src_.timeseries, "Time-series CSV files, one per run")->required();
    sub_->add_option("--aggregate", src_.aggregate, "How runs are combined: concat or mean")
        ->check(CLI::IsMember({"concat", "mean"}))
        ->capture_default_str();
    sub_->add_flag("--no-zscore-runs", src_.no_zscore_runs, "Do not z-score each run before concatenating");
    sub_->add_option("--shrinkage", src_.shrinkage, "Shrinkage toward identity applied if the matrix is not PD")
        ->capture_default_str();
    sub_->add_option("--jitter", src_.jitter, "Diagonal jitter added together with shrinkage")
        ->capture_default_str();
    sub_->add_option("--out", out_, "Matrix CSV to write")->required();
  }

  Json config(const GlobalOptions& g) const override {
    Json j = base_config("correlate", g, LogBase::Nats);
    j.erase("units");
    j["input"] = src_.to_json();
    j["out"] = out_;
    return j;
  }

  void execute(Context& ctx) const override {
    const auto loaded = load_matrix(src_, ctx.globals.delimiter_char());
    const auto names = data::node_names_or_indices(loaded.matrix);
    write_text(out_, data::matrix_to_csv(loaded.matrix.values(), names));
    ctx.out << Json{{"command", "correlate"},
                    {"n_nodes", loaded.matrix.dim()},
                    {"runs", src_.timeseries.size()},
                    {"repaired", loaded.repaired},
                    {"out", out_}}
                   .dump(2)
            << '\n';
  }

 private:
  MatrixSource src_;
  std::string out_;
};

// ------------------------------------------------------------- extrapolate

/// Parses "0.0041", "41/10000" or "3" into an exact fraction.
std::pair<BigInt, BigInt> parse_fraction(const std::string& text) {
  auto digits_only = [](std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const auto num = text.substr(0, slash), den = text.substr(slash + 1);
    if (!digits_only(num) || !digits_only(den))
      throw Error(ErrorCode::InvalidConfig, "bad fraction '" + text + "'");
    auto decimal = [](std::string d) {
      d.erase(0, std::min(d.find_first_not_of('0'), d.size() - 1));
      return BigInt(d);
    };
    if (decimal(den) == 0) throw Error(ErrorCode::InvalidConfig, "bad fraction '" + text + "'");
    return {decimal(num), decimal(den)};
  }
  const auto dot = text.find('.');
  const std::string whole = text.substr(0, dot);
  const std::string frac = dot == std::string::npos ? "" : text.substr(dot + 1);
  if ((!whole.empty() && !digits_only(whole)) || (!frac.empty() && !digits_only(frac)) || whole.size() + frac.size() == 0)
    throw Error(ErrorCode::InvalidConfig, "bad fraction '" + text + "'");
  BigInt den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  // A leading zero would make cpp_int read the digits as octal.
  std::string digits = whole + frac;
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
  return {BigInt(digits), den};
}

class ExtrapolateCommand final : public Command {
 public:
  explicit ExtrapolateCommand(CLI::App& app)
      : Command(app.add_subcommand("extrapolate", "Number of k-subsets implied by a sampled fraction")) {
    sub_->add_option("--nodes", n_, "System size N")->required();
    sub_->add_option("--k", k_, "Subset size")->required();
    sub_->add_option("--fraction", fraction_, "Fraction as a decimal (0.0041) or ratio (41/10000)")->required();
  }

  Json config(const GlobalOptions& g) const override {
    Json j = base_config("extrapolate", g, LogBase::Nats);
    j.erase("units");
    j["nodes"] = n_;
    j["k"] = k_;
    j["fraction"] = fraction_;
    return j;
  }

  void execute(Context& ctx) const override {
    if (k_ > n_) throw Error(ErrorCode::SubsetTooLarge, "k exceeds the number of nodes");
    const auto [num, den] = parse_fraction(fraction_);
    const BigInt count = search::extrapolate_count(n_, k_, num, den);
    std::ostringstream sci;
    sci.precision(4);
    sci << std::scientific << count.convert_to<double>();
    ctx.out << Json{{"command", "extrapolate"},
                    {"nodes", n_},
                    {"k", k_},
                    {"fraction", fraction_},
                    {"population", binomial(n_, k_).str()},
                    {"count", count.str()},
                    {"count_scientific", sci.str()}}
                   .dump(2)
            << '\n';
  }

 private:
  std::uint64_t n_ = 0;
  std::uint64_t k_ = 0;
  std::string fraction_;
};

int exit_code_for(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Numerical:
      return kExitNumerical;
    case ErrorCategory::Usage:
      return kExitUsage;
    case ErrorCategory::Data:
      return kExitData;
  }
  return kExitData;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Higher-order information measures and subset search for Gaussian systems", "oinfo"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--log-base", g.log_base, "Output units: nats or bits (default: nats, bits for discrete)")
      ->check(CLI::IsMember({"nats", "bits"}));
  app.add_option("--workers", g.workers, "Worker threads; 0 uses every core")
      ->envname("OINFO_WORKERS")
      ->capture_default_str();
  app.add_option("--seed", g.seed, "Master seed")->envname("OINFO_SEED")->capture_default_str();
  app.add_flag("--print-config", g.print_config, "Print the resolved configuration as JSON and exit");
  app.add_flag("--quiet,-q", g.quiet, "No progress messages");
  app.add_option("--delimiter", g.delimiter, "Field delimiter of input CSV files ('tab' for tabs)")
      ->capture_default_str();

  std::vector<std::unique_ptr<Command>> commands;
  commands.push_back(std::make_unique<MeasuresCommand>(app));
  commands.push_back(std::make_unique<SampleCommand>(app));
  commands.push_back(std::make_unique<AnnealCommand>(app));
  commands.push_back(std::make_unique<TseCommand>(app));
  commands.push_back(std::make_unique<AnalyzeCommand>(app));
  commands.push_back(std::make_unique<DiscreteCommand>(app));
  commands.push_back(std::make_unique<CorrelateCommand>(app));
  commands.push_back(std::make_unique<ExtrapolateCommand>(app));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  Context ctx{g, out, err};
  try {
    for (const auto& cmd : commands) {
      if (!cmd->selected()) continue;
      if (g.print_config) {
        Json cfg = cmd->config(g);
        cfg["execution"] = {{"workers", g.resolved_workers()}, {"quiet", g.quiet}};
        out << cfg.dump(2) << '\n';
        return kExitOk;
      }
      cmd->execute(ctx);
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.category());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const io::Json::exception& e) {
    err << "error: malformed record: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace oinfo::cli
