#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fbt/extsort.hpp"
#include "fbt/ntparse.hpp"

namespace fbt {

enum class DuplicateKind { OwlLabel, OwlType, ReverseInstance };

std::string_view duplicate_kind_name(DuplicateKind k);

struct DuplicateReport {
    DuplicateKind kind = DuplicateKind::OwlLabel;
    uint64_t duplicate_count = 0;   // distinct (subject, object) pairs in both slices
    uint64_t base_slice_count = 0;
    uint64_t mirror_slice_count = 0;
};

/// One notable_for mediator: the link triple plus the attributes hanging
/// off the /g. node.
struct MediatorGroup {
    std::string subject;   // /m. value; empty for orphan groups
    std::string mediator;  // /g. value
    std::vector<std::pair<std::string, std::string>> display_names;  // (lang, text)
    std::string object_path;
    std::string predicate_path;
    std::string notable_object_path;
    uint64_t triple_count = 0;
    bool complete = false;  // link present and notable_object known
    bool orphan = false;    // attributes without an inbound link
};

struct CompactionCounts {
    uint64_t input_triples = 0;        // members of complete groups
    uint64_t output_triples = 0;       // one direct triple per complete group
    uint64_t passthrough_groups = 0;
    uint64_t passthrough_triples = 0;
    uint64_t discrepancies = 0;  // object and notable_object both set but unequal
    double fraction_retained = 0.0;
};

struct TrimReport {
    double owl_fraction = 0.0;
    double reverse_fraction = 0.0;
    double mediator_fraction = 0.0;
    double compacted_fraction = 0.0;
    double total_trim_fraction = 0.0;  // owl + reverse + (mediator - compacted)
};

/// Counts (subject, object) pairs present in both slices via an external
/// sort-merge join. `base_slice` holds the Freebase predicate (name for
/// OwlLabel, type for OwlType), `mirror_slice` the W3C counterpart; any
/// other predicate in either slice is a contract error.
DuplicateReport detect_owl_duplicates(const std::string& base_slice,
                                      const std::string& mirror_slice, DuplicateKind kind,
                                      const ExtSortConfig& sort = {});

/// Counts (s, t) facts stated both as (s, /type.object.type, t) and
/// (t, /type.type.instance, s).
DuplicateReport detect_reverse_pairs(const std::string& type_slice,
                                     const std::string& instance_slice,
                                     const ExtSortConfig& sort = {});

/// Two passes: first the notable_for links, then the /common.notable_for.*
/// attributes keyed by mediator. Unlinked attribute clusters come back as
/// orphan groups; nothing here is an error.
std::vector<MediatorGroup> collect_mediator_groups(const std::vector<std::string>& slices);
std::vector<MediatorGroup> collect_mediator_groups(const std::string& slice);

/// One direct (subject, notable_for, notable_object) triple per complete
/// group; incomplete groups pass through untouched and are counted.
std::pair<std::vector<Triple>, CompactionCounts> compact_notable_for(
    const std::vector<MediatorGroup>& groups);

/// Rebuilds a group's member triples (for pass-through output).
std::vector<Triple> group_triples(const MediatorGroup& g);

/// Fractions over the grand total; the composition identity
/// total = owl + reverse + (mediator - compacted) holds exactly.
TrimReport trim_summary(const std::vector<DuplicateReport>& reports,
                        uint64_t mediator_triples, uint64_t compacted_triples,
                        uint64_t total_triples);

}  // namespace fbt
