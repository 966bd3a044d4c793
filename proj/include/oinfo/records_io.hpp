#pragma once

// JSON Lines encoding of sampling and annealing results. A stream starts
// with one header object ("type": "header") carrying the master seed and the
// resolved configuration; every later line is one record.

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "oinfo/subset_search.hpp"
#include "oinfo/units.hpp"

namespace oinfo::io {

using Json = nlohmann::ordered_json;

Json measure_report_to_json(const gaussian::MeasureReport& report, LogBase base);
Json sample_record_to_json(const search::SampleRecord& record, LogBase base);
Json anneal_config_to_json(const search::AnnealConfig& config);
Json anneal_run_to_json(const search::AnnealRun& run, LogBase base);

/// Inverse of sample_record_to_json; values are converted back to nats.
search::SampleRecord sample_record_from_json(const Json& line);

Json make_header(std::string_view command, std::uint64_t master_seed, const Json& config, LogBase base);

/// Header line followed by one compact JSON object per line.
std::string to_jsonl(const Json& header, const std::vector<Json>& lines);

struct RecordStream {
  Json header;
  std::vector<Json> lines;
};

/// Reads a JSON Lines file; a leading header object is split off.
RecordStream read_jsonl(const std::filesystem::path& path);

std::string_view record_type(const Json& line);

}  // namespace oinfo::io
