#pragma once

// File formats of the curve engine:
//   record CSV      header `displacement_mm,force_N`, one sample per row
//   record sidecar  JSON {diameter_mm, height_mm, axis, pattern, label[, end_condition]}
//   properties      JSON written by `analyze`, read back by `aggregate`
//   aggregate CSV   one row per configuration, mean and std per property

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "rpet/curve.hpp"

namespace rpet {

std::vector<ForceSample> parse_record_csv(std::string_view text);
std::string format_record_csv(const RawTestRecord& record);

/// Fills geometry, config, label and end condition of `record`.
void apply_sidecar(std::string_view json_text, RawTestRecord& record);
std::string format_sidecar(const RawTestRecord& record);

RawTestRecord read_record(const std::filesystem::path& csv, const std::filesystem::path& sidecar);
void write_record(const RawTestRecord& record, const std::filesystem::path& csv,
                  const std::filesystem::path& sidecar);

/// Sidecar path conventionally paired with a record CSV (same stem, .json).
std::filesystem::path default_sidecar(const std::filesystem::path& csv);

using Provenance = std::map<std::string, std::string>;

struct PropertiesFile {
    std::string label;
    PrintConfig config;
    CompressionProperties properties;
};

std::string format_properties_json(const RawTestRecord& record, const ExtractionResult& result,
                                   const Provenance& provenance);
PropertiesFile parse_properties_json(std::string_view text);

struct ConfigAggregate {
    PrintConfig config;
    AggregateStats stats;
};

/// Groups by canonical configuration, ordered as enumerate_configs().
std::vector<ConfigAggregate> aggregate_by_config(const std::vector<PropertiesFile>& files);

std::string format_aggregate_csv(const std::vector<ConfigAggregate>& rows);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace rpet
