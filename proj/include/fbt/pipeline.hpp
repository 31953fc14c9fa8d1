#pragma once

#include <cstdint>
#include <string>

#include "fbt/slicer.hpp"

namespace fbt {

/// Floor for the external-sort memory cap.
inline constexpr uint64_t kSortMemFloor = 16ull << 20;

/// Everything a stage command needs. Commands ignore the fields they do
/// not use.
struct RunConfig {
    std::string input;
    std::string out_dir;
    std::string plan_path;
    Granularity granularity = Granularity::Domain;
    PathStyle style = PathStyle::Dots;
    bool strict = true;
    bool gzip_out = false;
    int workers = 1;
    uint64_t sort_mem = 256ull << 20;
    uint64_t seed = 1;
    uint64_t total_triples = 1'000'000;
    std::string preset = "freebase";   // generate: built-in spec shape
    std::string spec_path;           // generate: explicit spec JSON
    std::string domain;              // schema: target domain key
    std::string classification_path;  // stats: grouping override
};

/// Stage hand-off record: one slicing run plus where its files live.
struct ManifestDoc {
    std::string mode;       // domain | predicate | identifiers
    std::string input;
    std::string slice_dir;  // relative to the manifest's directory
    std::string dir;        // directory of the manifest file, set on read
    SliceRunResult run;
};

void write_manifest(const SliceRunResult& run, const std::string& mode,
                    const std::string& input, const std::string& slice_dir,
                    const std::string& path);
ManifestDoc read_manifest(const std::string& path);

/// Absolute path of a slice listed in a manifest.
std::string slice_file_path(const ManifestDoc& doc, const SliceManifest& m);

/// Picks lenient parsing automatically when the input is already in the
/// normalized three-column form (which carries no trailing full stop).
ParseOptions sniff_parse_options(const std::string& input, bool strict);

// Stage commands. Each writes its artifacts under config.out_dir and
// throws IoError / ContractError / PrerequisiteError on failure.
void cmd_prepare(const RunConfig& config);
void cmd_slice(const RunConfig& config);
void cmd_stats(const RunConfig& config);
void cmd_dedup(const RunConfig& config);
void cmd_schema(const RunConfig& config);
void cmd_generate(const RunConfig& config);
void cmd_report(const RunConfig& config);

}  // namespace fbt
