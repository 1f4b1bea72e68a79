#ifndef RASIM_REPORT_HPP
#define RASIM_REPORT_HPP

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "rasim/engine.hpp"

namespace rasim {

inline constexpr const char* kToolVersion = "0.1.0";

// Fixed records.csv schema; columns mirror StepRecord field order. Floats
// are serialized with 9 significant digits.
std::string records_csv_header();
void write_records_csv(std::ostream& out, std::span<const StepRecord> records);

std::string compare_csv_header();
void write_compare_csv(std::ostream& out, const CompareResult& result);

void write_detections_csv(std::ostream& out, const std::vector<DetectionRecord>& log);
void write_tracks_csv(std::ostream& out, const std::vector<TrackRecord>& log);

std::string summary_text(const Summary& summary);
std::string compare_summary_text(const CompareResult& result);

// Self-contained SVG: received power versus user azimuth, one polyline per
// antenna mode.
void write_compare_svg(std::ostream& out, const CompareResult& result);

// FNV-1a 64-bit content hash used for the manifest and determinism checks.
std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t fnv1a64_file(const std::filesystem::path& path);

// Writes the run manifest (JSON) listing every emitted file with its
// checksum. Call last, after all other outputs exist.
void write_manifest(const std::filesystem::path& out_dir, const std::string& config_path,
                    std::uint64_t seed, const std::string& started_at,
                    const std::vector<std::string>& files);

std::string current_timestamp_utc();

}  // namespace rasim

#endif  // RASIM_REPORT_HPP
