// Artifact serialization: JSON field/series formats, CSV tables, run manifests.
#pragma once

#include <json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "polylab/field.hpp"
#include "polylab/series.hpp"

namespace polylab {

inline constexpr const char* kSchema = "polylab/1";
inline constexpr const char* kVersion = "0.1.0";

nlohmann::json field_to_json(const Field& f);
Field field_from_json(const nlohmann::json& j);

nlohmann::json series_to_json(const IntSeries& s);
nlohmann::json series_to_json(const RealSeries& s);

// CSV of f(n e_1) for n = 0..limit, with a header row.
std::string axis_slice_csv(const Field& f, int limit);

std::uint64_t fnv1a64(const std::string& bytes);
std::string digest_hex(const std::string& bytes);

struct RunManifest {
    std::string subcommand;
    std::map<std::string, std::string> params;
    std::string version = kVersion;
    int threads = 0;
    double wall_ms = 0;
    std::map<std::string, std::string> output_digests; // filename -> fnv64

    nlohmann::json to_json() const;
};

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

} // namespace polylab
