#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fbt/ntparse.hpp"

namespace fbt {

struct PredicateEntry {
    ResourceKind kind = ResourceKind::SchemaPath;
    uint64_t count = 0;
};

struct PredicateHistogram {
    std::map<std::string, PredicateEntry> entries;  // predicate value -> entry
    uint64_t total = 0;  // always equals the sum of entry counts

    Resource resource_for(const std::string& value) const;
};

struct HistogramOptions {
    ParseOptions parse;
    // Spill-to-disk kicks in past this many distinct predicates.
    size_t max_in_memory = 1u << 20;
    std::string tmp_dir;
};

PredicateHistogram enumerate_predicates(TripleStream& stream,
                                        const HistogramOptions& opts = {});
PredicateHistogram enumerate_predicates(const std::string& path,
                                        const HistogramOptions& opts = {});

enum class Granularity { Domain, Predicate };

enum class SelectorKind { Domain, Predicate, Residual };

struct SliceSpec {
    SelectorKind kind = SelectorKind::Domain;
    std::string selector;
    uint64_t expected_count = 0;
};

// Extraction order: strictly non-increasing expected_count, ties broken
// lexicographically. The first matching spec claims a triple.
struct SlicePlan {
    Granularity granularity = Granularity::Domain;
    std::vector<SliceSpec> specs;
};

SlicePlan build_slice_plan(const PredicateHistogram& h, Granularity granularity);

// Editable two-column TSV (selector, expected_count). Selector kind is
// inferred on load: paths and IRIs are exact predicates, bare keys are
// domains.
void write_plan_tsv(const SlicePlan& plan, const std::string& path);
SlicePlan read_plan_tsv(const std::string& path);

struct SliceManifest {
    SelectorKind kind = SelectorKind::Domain;
    std::string selector;
    std::string file;  // relative to the sink directory
    uint64_t triple_count = 0;
    uint64_t byte_count = 0;
    std::string checksum;   // fnv1a-64 of the slice file bytes, hex
    std::string predicate;  // exact predicate, set for identifier slices
};

struct SliceOptions {
    ParseOptions parse;
    int workers = 1;
    size_t open_file_cap = 128;  // LRU-cycled output handles
    PathStyle style = PathStyle::Dots;
};

struct SliceRunResult {
    std::vector<SliceManifest> manifests;  // plan order, residual last
    StreamCounters counters;
    SlicePlan plan;

    const SliceManifest* find(std::string_view selector) const;
    uint64_t slice_total() const;  // across all manifests, residual included
};

// One pass over the input, every ok triple lands in exactly one slice file
// (first matching plan spec, else the residual). Slices are written as
// normalized TSV. Output is byte-identical for a given input and plan,
// regardless of worker count.
SliceRunResult slice_stream(const std::string& input, const SlicePlan& plan,
                            const std::string& sink_dir, const SliceOptions& opts = {});

// The five topic-identity slices (name, type, key, description, alias) plus
// the mandatory residual.
SliceRunResult extract_identifier_slices(const std::string& input,
                                         const std::string& sink_dir,
                                         const SliceOptions& opts = {});

}  // namespace fbt
