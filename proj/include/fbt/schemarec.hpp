#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fbt/schema.hpp"

namespace fbt {

/// Mid binding plus localized names and descriptions for one schema path.
/// The *_via_* flags record which lookup key produced the value.
struct SchemaMetadata {
    std::vector<std::string> mids;  // more than one means a conflicting binding
    std::vector<std::pair<std::string, std::string>> names;         // (lang, text)
    std::vector<std::pair<std::string, std::string>> descriptions;  // (lang, text)
    bool name_via_path = false;
    bool name_via_mid = false;
    bool desc_via_path = false;
    bool desc_via_mid = false;
};

struct SchemaType {
    SchemaPath path;
    SchemaMetadata meta;
};

struct SchemaProperty {
    SchemaPath path;
    SchemaMetadata meta;
};

struct DomainSchema {
    std::string domain;
    std::vector<SchemaType> types;
    std::vector<SchemaProperty> properties;
    uint64_t source_triple_count = 0;
    bool empty_input = false;
};

struct SchemaSources {
    std::string domain_slice;
    std::string name_slice;
    std::string desc_slice;
    std::string type_slice;
    std::string target_domain;  // taken from the slice when empty
};

/// Distinct one-segment-back prefixes, sorted by rendered path. Inputs
/// must be Property depth.
std::vector<SchemaPath> infer_types_from_properties(const std::vector<SchemaPath>& props);

/// Properties are the distinct predicates of the domain slice; types come
/// from the backward hop plus /type.object.type objects inside the domain;
/// metadata is resolved against the identifier slices.
DomainSchema reconstruct_schema(const SchemaSources& sources);

/// Fills in mids, names, and descriptions for every type and property.
/// Both path-keyed and mid-keyed lookups are tried; flags record the route.
void resolve_schema_metadata(DomainSchema& schema, const SchemaSources& sources);

/// Listing-style text rendering of the reconstructed schema.
std::string render_schema_text(const DomainSchema& schema);

}  // namespace fbt
