#include "fbt/schema.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "fbt/errors.hpp"

namespace fbt {

namespace known {
std::vector<std::string_view> identifier_predicates() {
    return {name, type, key, description, alias};
}
}  // namespace known

namespace {

const std::vector<std::string> kImplementationDomains = {
    "common", "type", "key", "kg", "base", "freebase",
    "dataworld", "topic_server", "user", "pipeline", "kp_lw",
};

bool is_w3c(std::string_view iri) {
    return iri.find("://www.w3.org/") != std::string_view::npos ||
           iri.starts_with("www.w3.org/");
}

// rdf-schema#label style: last path segment plus fragment.
std::string w3c_tail(std::string_view iri) {
    size_t hash = iri.rfind('#');
    std::string_view before = (hash == std::string_view::npos) ? iri : iri.substr(0, hash);
    size_t slash = before.rfind('/');
    std::string_view seg = (slash == std::string_view::npos) ? before : before.substr(slash + 1);
    std::string out(seg);
    if (hash != std::string_view::npos) {
        out += '#';
        out += iri.substr(hash + 1);
    }
    return out;
}

std::string owl_kind(std::string_view iri) {
    size_t hash = iri.rfind('#');
    if (hash == std::string_view::npos || hash + 1 >= iri.size()) return std::string(iri);
    return std::string(iri.substr(hash + 1));
}

}  // namespace

std::string SchemaPath::render() const {
    std::string out = "/" + domain;
    if (!type.empty()) out += "." + type;
    if (!property.empty()) out += "." + property;
    return out;
}

SchemaPath parse_schema_path(const Resource& r) {
    if (r.kind == ResourceKind::Mid || r.kind == ResourceKind::Gid) {
        throw ContractError("not a schema path: " + r.value);
    }
    return parse_schema_path(r.value);
}

SchemaPath parse_schema_path(std::string_view dots_path) {
    std::string_view p = dots_path;
    if (p.starts_with('/')) p.remove_prefix(1);
    if (p.empty()) throw ContractError("empty schema path");
    if (p.starts_with("m.") || p.starts_with("g.")) {
        throw ContractError("not a schema path: " + std::string(dots_path));
    }

    SchemaPath out;
    size_t d1 = p.find('.');
    if (d1 == std::string_view::npos) {
        out.domain = std::string(p);
        out.depth = PathDepth::Domain;
        return out;
    }
    out.domain = std::string(p.substr(0, d1));
    std::string_view rest = p.substr(d1 + 1);
    size_t d2 = rest.find('.');
    if (d2 == std::string_view::npos) {
        out.type = std::string(rest);
        out.depth = PathDepth::Type;
        return out;
    }
    out.type = std::string(rest.substr(0, d2));
    out.property = std::string(rest.substr(d2 + 1));
    out.depth = PathDepth::Property;
    // user/base trees go deeper than three segments; keep the tail whole
    out.compound_tail = out.property.find('.') != std::string::npos;
    return out;
}

std::string_view group_name(PredicateGroup g) {
    switch (g) {
        case PredicateGroup::Implementation: return "implementation";
        case PredicateGroup::Owl: return "owl";
        case PredicateGroup::SubjectMatter: return "subject_matter";
        case PredicateGroup::KeyNamespace: return "key_namespace";
        case PredicateGroup::Unknown: return "unknown";
    }
    return "unknown";
}

ClassificationTable ClassificationTable::standard() {
    ClassificationTable t;
    t.implementation_ = kImplementationDomains;
    return t;
}

ClassificationTable ClassificationTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open classification table " + path);
    ClassificationTable t;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        size_t tab = line.find('\t');
        if (tab == std::string::npos) continue;
        std::string group = line.substr(0, tab);
        std::string domain = line.substr(tab + 1);
        if (group == "implementation") t.implementation_.push_back(domain);
        // owl membership is structural (W3C IRIs); subject_matter is the
        // default for any other Freebase domain. Their lines are accepted
        // so the full table round-trips, but only implementation entries
        // change classification.
    }
    if (t.implementation_.empty()) t.implementation_ = kImplementationDomains;
    return t;
}

bool ClassificationTable::is_implementation_domain(std::string_view domain) const {
    return std::find(implementation_.begin(), implementation_.end(), domain) !=
           implementation_.end();
}

PredicateClass classify_predicate(const Resource& p, const ClassificationTable& table) {
    switch (p.kind) {
        case ResourceKind::Key:
            return {PredicateGroup::KeyNamespace, "key"};
        case ResourceKind::ExternalIri:
            if (is_w3c(p.value)) return {PredicateGroup::Owl, owl_kind(p.value)};
            return {PredicateGroup::Unknown, ""};
        case ResourceKind::Mid:
        case ResourceKind::Gid:
            // mids in predicate position are off-schema; nothing to group by
            return {PredicateGroup::Unknown, ""};
        case ResourceKind::SchemaPath: {
            std::string domain = domain_of(p);
            if (table.is_implementation_domain(domain)) {
                return {PredicateGroup::Implementation, domain};
            }
            return {PredicateGroup::SubjectMatter, domain};
        }
    }
    return {PredicateGroup::Unknown, ""};
}

PredicateClass classify_predicate(const Resource& p) {
    static const ClassificationTable table = ClassificationTable::standard();
    return classify_predicate(p, table);
}

std::string domain_of(const Resource& p) {
    switch (p.kind) {
        case ResourceKind::ExternalIri: {
            if (p.value.empty()) return std::string(kUnknownDomain);
            if (is_w3c(p.value)) return w3c_tail(p.value);
            return std::string(kUnknownDomain);
        }
        case ResourceKind::Key:
            return "key";
        case ResourceKind::Mid:
        case ResourceKind::Gid:
            return std::string(kUnknownDomain);
        case ResourceKind::SchemaPath: {
            std::string_view v = p.value;
            if (v.starts_with('/')) v.remove_prefix(1);
            size_t dot = v.find('.');
            std::string out(dot == std::string_view::npos ? v : v.substr(0, dot));
            return out.empty() ? std::string(kUnknownDomain) : out;
        }
    }
    return std::string(kUnknownDomain);
}

PredicateGroup stats_group(PredicateGroup g) {
    return g == PredicateGroup::KeyNamespace ? PredicateGroup::Implementation : g;
}

}  // namespace fbt
