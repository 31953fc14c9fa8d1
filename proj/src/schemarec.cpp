#include "fbt/schemarec.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "fbt/errors.hpp"
#include "fbt/ntparse.hpp"

namespace fbt {

namespace {

constexpr std::string_view kTypeObjectPrefix = "/type.object.";

TripleStream open_lenient(const std::string& path) {
    ParseOptions opts;
    opts.strict = false;
    return open_triple_stream(path, opts);
}

std::string backward_hop(const SchemaPath& p) {
    std::string r = p.render();
    size_t dot = r.rfind('.');
    return r.substr(0, dot);
}

void add_pair(std::vector<std::pair<std::string, std::string>>& list, std::string lang,
              std::string text) {
    auto entry = std::make_pair(std::move(lang), std::move(text));
    if (std::find(list.begin(), list.end(), entry) == list.end()) {
        list.push_back(std::move(entry));
    }
}

std::vector<std::string> distinct_paths(const SchemaSources& s) {
    std::vector<std::string> out;
    for (const std::string* p : {&s.domain_slice, &s.name_slice, &s.desc_slice, &s.type_slice}) {
        if (!p->empty() && std::find(out.begin(), out.end(), *p) == out.end()) {
            out.push_back(*p);
        }
    }
    return out;
}

}  // namespace

std::vector<SchemaPath> infer_types_from_properties(const std::vector<SchemaPath>& props) {
    std::set<std::string> hops;
    for (const auto& p : props) {
        if (p.depth != PathDepth::Property) {
            throw ContractError("backward hop needs a property path, got " + p.render());
        }
        hops.insert(backward_hop(p));
    }
    std::vector<SchemaPath> out;
    for (const auto& h : hops) out.push_back(parse_schema_path(h));
    return out;
}

DomainSchema reconstruct_schema(const SchemaSources& sources) {
    DomainSchema schema;
    schema.domain = sources.target_domain;

    std::set<std::string> prop_paths;
    uint64_t count = 0;
    {
        TripleStream stream = open_lenient(sources.domain_slice);
        while (auto out = stream.next()) {
            if (!out->ok()) continue;
            const Triple& t = *out->triple;
            count++;
            if (t.predicate.kind != ResourceKind::SchemaPath) continue;
            SchemaPath sp = parse_schema_path(t.predicate);
            if (schema.domain.empty()) schema.domain = sp.domain;
            if (sp.domain != schema.domain) {
                throw ContractError("domain slice mixes " + schema.domain + " with " +
                                    sp.domain + " at line " + std::to_string(out->line_no));
            }
            prop_paths.insert(sp.render());
        }
    }
    schema.source_triple_count = count;
    if (count == 0) {
        schema.empty_input = true;
        return schema;
    }

    std::vector<SchemaPath> hop_input;
    for (const auto& r : prop_paths) {
        SchemaPath sp = parse_schema_path(r);
        if (sp.depth == PathDepth::Property) hop_input.push_back(sp);
        schema.properties.push_back({std::move(sp), {}});
    }

    std::set<std::string> type_paths;
    for (const auto& t : infer_types_from_properties(hop_input)) {
        type_paths.insert(t.render());
    }
    if (!sources.type_slice.empty()) {
        TripleStream stream = open_lenient(sources.type_slice);
        while (auto out = stream.next()) {
            if (!out->ok()) continue;
            const Triple& t = *out->triple;
            if (t.predicate.value != known::type) continue;
            if (!is_resource(t.object)) continue;
            const Resource& o = as_resource(t.object);
            if (o.kind != ResourceKind::SchemaPath) continue;
            SchemaPath sp = parse_schema_path(o);
            if (sp.domain == schema.domain) type_paths.insert(sp.render());
        }
    }
    for (const auto& r : type_paths) schema.types.push_back({parse_schema_path(r), {}});

    resolve_schema_metadata(schema, sources);
    return schema;
}

void resolve_schema_metadata(DomainSchema& schema, const SchemaSources& sources) {
    std::unordered_map<std::string, SchemaMetadata*> by_path;
    for (auto& t : schema.types) by_path[t.path.render()] = &t.meta;
    for (auto& p : schema.properties) by_path[p.path.render()] = &p.meta;
    if (by_path.empty()) return;

    // pass 1: path-keyed metadata and mid bindings, across every source
    for (const auto& slice : distinct_paths(sources)) {
        TripleStream stream = open_lenient(slice);
        while (auto out = stream.next()) {
            if (!out->ok()) continue;
            const Triple& t = *out->triple;
            auto it = by_path.find(resource_to_string(t.subject, PathStyle::Dots));
            if (it == by_path.end()) continue;
            SchemaMetadata& meta = *it->second;
            const std::string& pred = t.predicate.value;
            if (pred == known::name && !is_resource(t.object)) {
                const Literal& l = as_literal(t.object);
                add_pair(meta.names, l.lang, l.lexical);
                meta.name_via_path = true;
            } else if (pred == known::description && !is_resource(t.object)) {
                const Literal& l = as_literal(t.object);
                add_pair(meta.descriptions, l.lang, l.lexical);
                meta.desc_via_path = true;
            } else if (pred.starts_with(kTypeObjectPrefix) && is_resource(t.object) &&
                       as_resource(t.object).kind == ResourceKind::Mid) {
                const std::string& mid = as_resource(t.object).value;
                if (std::find(meta.mids.begin(), meta.mids.end(), mid) == meta.mids.end()) {
                    meta.mids.push_back(mid);
                }
            }
        }
    }

    std::unordered_map<std::string, std::vector<SchemaMetadata*>> by_mid;
    for (auto& [path, meta] : by_path) {
        for (const auto& mid : meta->mids) by_mid[mid].push_back(meta);
    }
    if (by_mid.empty()) return;

    // pass 2: mid-keyed names and descriptions
    std::vector<std::string> metadata_slices;
    for (const std::string* p : {&sources.name_slice, &sources.desc_slice}) {
        if (!p->empty() &&
            std::find(metadata_slices.begin(), metadata_slices.end(), *p) ==
                metadata_slices.end()) {
            metadata_slices.push_back(*p);
        }
    }
    for (const auto& slice : metadata_slices) {
        TripleStream stream = open_lenient(slice);
        while (auto out = stream.next()) {
            if (!out->ok()) continue;
            const Triple& t = *out->triple;
            if (t.subject.kind != ResourceKind::Mid) continue;
            auto it = by_mid.find(t.subject.value);
            if (it == by_mid.end()) continue;
            const std::string& pred = t.predicate.value;
            if (pred == known::name && !is_resource(t.object)) {
                const Literal& l = as_literal(t.object);
                for (SchemaMetadata* meta : it->second) {
                    add_pair(meta->names, l.lang, l.lexical);
                    meta->name_via_mid = true;
                }
            } else if (pred == known::description && !is_resource(t.object)) {
                const Literal& l = as_literal(t.object);
                for (SchemaMetadata* meta : it->second) {
                    add_pair(meta->descriptions, l.lang, l.lexical);
                    meta->desc_via_mid = true;
                }
            }
        }
    }
}

namespace {

void render_metadata(std::string& out, const SchemaMetadata& meta) {
    for (const auto& mid : meta.mids) {
        out += "    mid ";
        out += mid;
        out += '\n';
    }
    for (const auto& [lang, text] : meta.names) {
        out += "    name \"" + text + "\"";
        if (!lang.empty()) out += "@" + lang;
        out += '\n';
    }
    for (const auto& [lang, text] : meta.descriptions) {
        out += "    description \"" + text + "\"";
        if (!lang.empty()) out += "@" + lang;
        out += '\n';
    }
}

}  // namespace

std::string render_schema_text(const DomainSchema& schema) {
    std::string out;
    out += "domain /" + schema.domain + " (" + std::to_string(schema.source_triple_count) +
           " triples)\n";
    if (schema.empty_input) {
        out += "  empty input\n";
        return out;
    }
    for (const auto& t : schema.types) {
        out += "  type " + t.path.render() + '\n';
        render_metadata(out, t.meta);
    }
    for (const auto& p : schema.properties) {
        out += "  property " + p.path.render() + '\n';
        render_metadata(out, p.meta);
    }
    return out;
}

}  // namespace fbt
