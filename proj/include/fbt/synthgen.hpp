#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace fbt {

/// Full recipe for one synthetic dump. Counts are planted exactly, so a
/// given spec always yields the same byte stream.
struct GeneratorSpec {
    uint64_t seed = 1;
    uint64_t total_triples = 0;
    // subject-matter remainder, fractions summing to 1
    std::vector<std::pair<std::string, double>> domain_mix;
    // keyed by predicate path; unknown keys are rejected
    std::map<std::string, double> identifier_rates;
    double owl_mirror_rate = 0.0;    // share of name/type triples mirrored
    double reverse_pair_rate = 0.0;  // share of type triples with an instance twin
    uint64_t mediator_group_count = 0;
    std::vector<std::string> languages = {"en"};
    double malformed_rate = 0.0;
    uint64_t entity_pool = 1000;  // distinct /m. subjects to draw from
    uint64_t type_pool = 20;      // distinct type paths for type objects
};

/// Throws ContractError when rates fall outside [0,1], the domain mix does
/// not sum to 1, or a planted count cannot fit its pool.
void validate_spec(const GeneratorSpec& spec);

/// Rates shaped like the published dump-wide proportions.
GeneratorSpec freebase_preset(uint64_t seed, uint64_t total_triples);

/// Everything the generator planted, exact by construction.
struct GroundTruth {
    uint64_t total_lines = 0;
    uint64_t ok_lines = 0;
    uint64_t malformed_lines = 0;
    std::map<std::string, uint64_t> predicate_counts;
    std::map<std::string, uint64_t> domain_counts;   // domain_of aggregation
    std::map<std::string, uint64_t> identifier_counts;
    uint64_t topic_count = 0;
    uint64_t owl_label_duplicates = 0;
    uint64_t owl_type_duplicates = 0;
    uint64_t reverse_pairs = 0;
    uint64_t mediator_groups = 0;
    uint64_t mediator_triples = 0;
    uint64_t compacted_triples = 0;
    std::map<std::string, std::vector<std::string>> schema;  // domain -> properties
};

/// Emits the dump (gzip when the sink path ends in .gz) and returns the
/// planted composition. Same spec, same bytes.
GroundTruth generate_dump(const GeneratorSpec& spec, const std::string& sink_path);

void write_generator_spec(const GeneratorSpec& spec, const std::string& path);
GeneratorSpec read_generator_spec(const std::string& path);
void write_ground_truth(const GroundTruth& truth, const std::string& path);
GroundTruth read_ground_truth(const std::string& path);

}  // namespace fbt
