#include "oinfo/records_io.hpp"

#include <fstream>
#include <numbers>

#include "oinfo/error.hpp"

namespace oinfo::io {

namespace {

Json subset_to_json(const Subset& s) {
  Json a = Json::array();
  for (std::size_t i : s) a.push_back(i);
  return a;
}

LogBase parse_units(const Json& j) {
  const auto units = j.value("units", std::string("nats"));
  if (units == "nats") return LogBase::Nats;
  if (units == "bits") return LogBase::Bits;
  throw Error(ErrorCode::ParseError, "unknown units '" + units + "'");
}

}  // namespace

Json measure_report_to_json(const gaussian::MeasureReport& r, LogBase base) {
  Json j;
  j["subset"] = subset_to_json(r.subset);
  j["k"] = r.subset.size();
  j["units"] = unit_name(base);
  j["joint_entropy"] = from_nats(r.joint_entropy, base);
  j["total_correlation"] = from_nats(r.total_correlation, base);
  j["dual_total_correlation"] = from_nats(r.dual_total_correlation, base);
  j["o_information"] = from_nats(r.o_information, base);
  j["s_information"] = from_nats(r.s_information, base);
  j["description_complexity"] = from_nats(r.description_complexity, base);
  j["normalized_o"] = from_nats(r.normalized_o, base);
  return j;
}

Json sample_record_to_json(const search::SampleRecord& record, LogBase base) {
  Json j;
  j["type"] = "sample";
  j["sample_index"] = record.sample_index;
  j["seed"] = record.seed;
  const Json measures = measure_report_to_json(record.measures, base);
  for (const auto& [key, value] : measures.items()) j[key] = value;
  return j;
}

search::SampleRecord sample_record_from_json(const Json& j) {
  try {
    const LogBase base = parse_units(j);
    const double to_nats = base == LogBase::Bits ? std::numbers::ln2 : 1.0;
    auto value = [&](const char* key) { return j.at(key).get<double>() * to_nats; };
    gaussian::MeasureReport r{.subset = Subset(j.at("subset").get<std::vector<std::size_t>>())};
    r.joint_entropy = value("joint_entropy");
    r.total_correlation = value("total_correlation");
    r.dual_total_correlation = value("dual_total_correlation");
    r.o_information = value("o_information");
    r.s_information = value("s_information");
    r.description_complexity = value("description_complexity");
    r.normalized_o = value("normalized_o");
    return {j.at("sample_index").get<std::size_t>(), j.at("seed").get<std::uint64_t>(), std::move(r)};
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed sample record: ") + e.what());
  }
}

Json anneal_config_to_json(const search::AnnealConfig& c) {
  Json j;
  j["subset_size"] = c.subset_size;
  j["steps"] = c.steps;
  j["t0"] = c.t0;
  j["t_exp"] = c.t_exp;
  j["flip_probs"] = c.flip_probs;
  j["objective"] = search::to_string(c.objective.measure);
  j["direction"] = c.objective.direction == search::Direction::Minimize ? "minimize" : "maximize";
  j["seed"] = c.seed;
  return j;
}

Json anneal_run_to_json(const search::AnnealRun& run, LogBase base) {
  Json j;
  j["type"] = "anneal_run";
  j["subset_size"] = run.config.subset_size;
  j["seed"] = run.config.seed;
  j["objective"] = search::to_string(run.config.objective.measure);
  j["units"] = unit_name(base);
  j["best_subset"] = subset_to_json(run.best_subset);
  j["best_value"] = from_nats(run.best_value, base);
  j["best_step"] = run.best_step;
  j["accepted_moves"] = run.accepted_moves;
  j["singular_proposals"] = run.singular_proposals;
  if (!run.trajectory.empty()) {
    Json t = Json::array();
    for (const auto& p : run.trajectory) t.push_back({p.step, from_nats(p.current_value, base), p.temperature});
    j["trajectory"] = std::move(t);
  }
  return j;
}

Json make_header(std::string_view command, std::uint64_t master_seed, const Json& config, LogBase base) {
  Json h;
  h["type"] = "header";
  h["command"] = command;
  h["master_seed"] = master_seed;
  h["units"] = unit_name(base);
  h["config"] = config;
  return h;
}

std::string to_jsonl(const Json& header, const std::vector<Json>& lines) {
  std::string out = header.dump();
  out += '\n';
  for (const auto& l : lines) {
    out += l.dump();
    out += '\n';
  }
  return out;
}

RecordStream read_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  RecordStream stream;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::exception& e) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": " + e.what());
    }
    if (record_type(j) == "header" && stream.lines.empty() && stream.header.is_null())
      stream.header = std::move(j);
    else
      stream.lines.push_back(std::move(j));
  }
  return stream;
}

std::string_view record_type(const Json& line) {
  if (!line.is_object()) return "";
  auto it = line.find("type");
  if (it == line.end() || !it->is_string()) return "";
  return it->get_ref<const std::string&>();
}

}  // namespace oinfo::io
