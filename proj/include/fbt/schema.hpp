#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fbt/ntparse.hpp"

namespace fbt {

// The fixed predicate registry. Every predicate constant used elsewhere in
// the toolkit resolves through these names.
namespace known {
inline constexpr std::string_view name = "/type.object.name";
inline constexpr std::string_view type = "/type.object.type";
inline constexpr std::string_view key = "/type.object.key";
inline constexpr std::string_view description = "/common.topic.description";
inline constexpr std::string_view alias = "/common.topic.alias";
inline constexpr std::string_view instance = "/type.type.instance";
inline constexpr std::string_view notable_for = "/common.topic.notable_for";
inline constexpr std::string_view notable_display_name = "/common.notable_for.display_name";
inline constexpr std::string_view notable_object = "/common.notable_for.object";
inline constexpr std::string_view notable_predicate = "/common.notable_for.predicate";
inline constexpr std::string_view notable_notable_object = "/common.notable_for.notable_object";
inline constexpr std::string_view owl_label = "http://www.w3.org/2000/01/rdf-schema#label";
inline constexpr std::string_view owl_type = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

// name/type/key/description/alias, in that order.
std::vector<std::string_view> identifier_predicates();
}  // namespace known

enum class PathDepth { Domain, Type, Property };

// Decomposed /domain[.type[.property]] identifier.
struct SchemaPath {
    std::string domain;
    std::string type;      // empty below Type depth
    std::string property;  // empty below Property depth
    PathDepth depth = PathDepth::Domain;
    bool compound_tail = false;  // more than three segments, kept whole

    std::string render() const;
    bool operator==(const SchemaPath&) const = default;
};

// Throws ContractError for Mid/Gid input (not a schema path).
SchemaPath parse_schema_path(const Resource& r);
SchemaPath parse_schema_path(std::string_view dots_path);

enum class PredicateGroup { Implementation, Owl, SubjectMatter, KeyNamespace, Unknown };

struct PredicateClass {
    PredicateGroup group = PredicateGroup::Unknown;
    // Implementation/SubjectMatter: the domain key. Owl: the kind
    // (type, label, domain, range, inverseOf). Empty otherwise.
    std::string detail;

    bool operator==(const PredicateClass&) const = default;
};

std::string_view group_name(PredicateGroup g);

// Domain-to-group table. The default carries the standard grouping: eleven
// implementation domains, five OWL predicate kinds, everything else subject
// matter. Loadable from a plain-text config to override.
class ClassificationTable {
public:
    static ClassificationTable standard();
    // Config format: "group<TAB>domain" per line, '#' comments. Groups:
    // implementation | owl | subject_matter.
    static ClassificationTable load(const std::string& path);

    bool is_implementation_domain(std::string_view domain) const;
    const std::vector<std::string>& implementation_domains() const { return implementation_; }

private:
    std::vector<std::string> implementation_;
};

// Total over all Resources; never fails.
PredicateClass classify_predicate(const Resource& p, const ClassificationTable& table);
PredicateClass classify_predicate(const Resource& p);

inline constexpr std::string_view kUnknownDomain = "__unknown__";

// Grouping key for slicing and stats: first path segment for Freebase
// paths, "rdf-schema#label"-style tail for W3C IRIs, a stable sentinel
// otherwise.
std::string domain_of(const Resource& p);

// Stats grouping: KeyNamespace rows count toward the implementation group.
PredicateGroup stats_group(PredicateGroup g);

}  // namespace fbt
