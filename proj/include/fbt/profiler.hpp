#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fbt/extsort.hpp"
#include "fbt/ntparse.hpp"
#include "fbt/schema.hpp"
#include "fbt/slicer.hpp"

namespace fbt {

/// One row of the per-domain statistics table.
struct DomainStatsRow {
    std::string name;       // display form of the selector
    std::string selector;   // domain key or predicate path
    uint64_t triple_count = 0;
    double percent_of_all = 0.0;
    PredicateGroup group = PredicateGroup::Unknown;
    double percent_of_group = 0.0;
};

struct PositionCardinality {
    uint64_t unique_subjects = 0;
    uint64_t unique_predicates = 0;
    uint64_t unique_objects = 0;
};

struct TopicEstimate {
    uint64_t topics = 0;  // mid_subjects + gid_subjects
    uint64_t mid_subjects = 0;
    uint64_t gid_subjects = 0;
    uint64_t other_subjects = 0;
};

/// Builds the statistics table from slice manifests. One row per slice,
/// grouped Implementation → Owl → SubjectMatter → Unknown, descending count
/// within each group, ties broken by selector. Percentages are derived from
/// the counts at render time and never stored independently.
std::vector<DomainStatsRow> domain_stats(
    const std::vector<SliceManifest>& manifests,
    const ClassificationTable& table = ClassificationTable::standard());

/// Sum of the k largest percent_of_all values.
double top_coverage(const std::vector<DomainStatsRow>& rows, size_t k);

/// Exact distinct counts per position via external sort; bounded memory.
PositionCardinality unique_position_counts(const std::string& slice_path,
                                           const ExtSortConfig& sort = {});

/// Counts distinct Mid and Gid subjects of a name slice. Every triple must
/// carry the /type.object.name predicate; anything else is a contract error.
TopicEstimate estimate_topics(const std::string& name_slice_path,
                              const ExtSortConfig& sort = {});

}  // namespace fbt
