#include "fbt/ntparse.hpp"

#include <array>
#include <cctype>
#include <cstring>

#include "fbt/errors.hpp"
#include "fbt/gzio.hpp"

namespace fbt {

namespace {

constexpr std::string_view kNsHttp = "http://rdf.freebase.com/ns/";
constexpr std::string_view kNsHttps = "https://rdf.freebase.com/ns/";
constexpr std::string_view kKeyHttp = "http://rdf.freebase.com/key/";
constexpr std::string_view kKeyHttps = "https://rdf.freebase.com/key/";

bool is_ident_tail(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    }
    return true;
}

// s must start with '/'. Slashes after the first become dots, then the
// kind is read off the first segment.
Resource path_resource(std::string s) {
    for (size_t i = 1; i < s.size(); ++i) {
        if (s[i] == '/') s[i] = '.';
    }
    ResourceKind kind = ResourceKind::SchemaPath;
    if (s.starts_with("/m.") && is_ident_tail(std::string_view(s).substr(3))) {
        kind = ResourceKind::Mid;
    } else if (s.starts_with("/g.") && is_ident_tail(std::string_view(s).substr(3))) {
        kind = ResourceKind::Gid;
    } else if (s.starts_with("/key.") && s.size() > 5) {
        kind = ResourceKind::Key;
    }
    return Resource{kind, std::move(s)};
}

bool all_space(std::string_view s) {
    for (char c : s) {
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

struct ElementResult {
    bool ok = false;
    ParseReason reason = ParseReason::None;
    Node node;
    size_t end = 0;  // one past the element within the input view
};

// Scans one element at the start of `field`: a bracketed IRI, a quoted
// literal with optional @lang / ^^<datatype>, or a bare token running to
// the first stop character.
ElementResult scan_element(std::string_view field, bool bare_stops_at_space) {
    ElementResult res;
    if (field.empty()) {
        res.reason = ParseReason::EmptyElement;
        return res;
    }
    // A closing '>' past an element boundary belongs to the next element;
    // treating it as ours would swallow that element (and its separator).
    auto close_before_boundary = [&](size_t from) {
        for (size_t i = from; i < field.size(); ++i) {
            if (field[i] == '>') return i;
            if (field[i] == '\t' || (bare_stops_at_space && field[i] == ' ')) break;
        }
        return std::string_view::npos;
    };
    char c = field.front();
    if (c == '<') {
        size_t close = close_before_boundary(1);
        if (close == std::string_view::npos) {
            res.reason = ParseReason::Brackets;
            return res;
        }
        std::string_view inner = field.substr(1, close - 1);
        if (inner.empty()) {
            res.reason = ParseReason::EmptyElement;
            return res;
        }
        res.ok = true;
        res.node = normalize_iri(inner);
        res.end = close + 1;
        return res;
    }
    if (c == '"') {
        size_t i = 1;
        while (i < field.size() && field[i] != '"') {
            i += (field[i] == '\\') ? 2 : 1;
        }
        if (i >= field.size()) {
            res.reason = ParseReason::Literal;
            return res;
        }
        Literal lit;
        lit.lexical.assign(field.substr(1, i - 1));
        size_t pos = i + 1;
        if (pos < field.size() && field[pos] == '@') {
            size_t start = ++pos;
            while (pos < field.size() &&
                   (std::isalnum(static_cast<unsigned char>(field[pos])) || field[pos] == '-')) {
                ++pos;
            }
            if (pos == start) {
                res.reason = ParseReason::Literal;
                return res;
            }
            lit.lang.assign(field.substr(start, pos - start));
        } else if (pos + 1 < field.size() && field[pos] == '^' && field[pos + 1] == '^') {
            pos += 2;
            if (pos >= field.size() || field[pos] != '<') {
                res.reason = ParseReason::Literal;
                return res;
            }
            size_t close = close_before_boundary(pos + 1);
            if (close == std::string_view::npos) {
                res.reason = ParseReason::Literal;
                return res;
            }
            lit.datatype.assign(field.substr(pos + 1, close - pos - 1));
            pos = close + 1;
        }
        res.ok = true;
        res.node = std::move(lit);
        res.end = pos;
        return res;
    }
    if (c == ' ' || c == '\t') {
        res.reason = ParseReason::Delimiter;
        return res;
    }
    size_t end = 0;
    while (end < field.size() && field[end] != '\t' &&
           !(bare_stops_at_space && field[end] == ' ')) {
        ++end;
    }
    res.ok = true;
    res.node = normalize_iri(field.substr(0, end));
    res.end = end;
    return res;
}

ParseOutcome malformed(uint64_t line_no, ParseReason reason) {
    ParseOutcome out;
    out.status = ParseStatus::Malformed;
    out.reason = reason;
    out.line_no = line_no;
    return out;
}

ParseOutcome finish_triple(uint64_t line_no, Node&& s, Node&& p, Node&& o) {
    if (!is_resource(s) || !is_resource(p)) {
        return malformed(line_no, ParseReason::LiteralPosition);
    }
    ParseOutcome out;
    out.status = ParseStatus::Ok;
    out.line_no = line_no;
    out.triple = Triple{std::get<Resource>(std::move(s)),
                        std::get<Resource>(std::move(p)), std::move(o)};
    return out;
}

ParseOutcome parse_strict(std::string_view raw, uint64_t line_no) {
    // Exact dump shape: elements separated by single tabs, line closed by
    // "\t." (or the looser " ."). Tabs inside literals are escaped in the
    // source, so a plain split is safe.
    std::array<std::string_view, 5> fields;
    size_t nfields = 0;
    size_t start = 0;
    while (true) {
        size_t tab = raw.find('\t', start);
        std::string_view f =
            (tab == std::string_view::npos) ? raw.substr(start) : raw.substr(start, tab - start);
        if (nfields == fields.size()) return malformed(line_no, ParseReason::Delimiter);
        fields[nfields++] = f;
        if (tab == std::string_view::npos) break;
        start = tab + 1;
    }

    bool terminated = false;
    if (nfields == 4) {
        std::string_view last = fields[3];
        while (!last.empty() && last.back() == ' ') last.remove_suffix(1);
        if (last != ".") return malformed(line_no, ParseReason::Delimiter);
        terminated = true;
        nfields = 3;
    } else if (nfields == 3) {
        std::string_view& last = fields[2];
        while (!last.empty() && last.back() == ' ') last.remove_suffix(1);
        if (last.ends_with(" .")) {
            last.remove_suffix(2);
            while (!last.empty() && last.back() == ' ') last.remove_suffix(1);
            terminated = true;
        }
    } else {
        return malformed(line_no, ParseReason::Delimiter);
    }

    std::array<Node, 3> nodes;
    for (size_t i = 0; i < 3; ++i) {
        ElementResult er = scan_element(fields[i], /*bare_stops_at_space=*/false);
        if (!er.ok) return malformed(line_no, er.reason);
        if (er.end != fields[i].size()) {
            return malformed(line_no,
                             is_resource(er.node) ? ParseReason::Delimiter : ParseReason::Literal);
        }
        nodes[i] = std::move(er.node);
    }
    if (!terminated) return malformed(line_no, ParseReason::Terminator);
    return finish_triple(line_no, std::move(nodes[0]), std::move(nodes[1]), std::move(nodes[2]));
}

ParseOutcome parse_lenient(std::string_view raw, uint64_t line_no) {
    size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < raw.size() && (raw[pos] == ' ' || raw[pos] == '\t')) ++pos;
    };
    std::array<Node, 3> nodes;
    for (size_t i = 0; i < 3; ++i) {
        skip_ws();
        if (pos >= raw.size()) return malformed(line_no, ParseReason::Delimiter);
        ElementResult er = scan_element(raw.substr(pos), /*bare_stops_at_space=*/true);
        if (!er.ok) return malformed(line_no, er.reason);
        pos += er.end;
        if (pos < raw.size() && raw[pos] != ' ' && raw[pos] != '\t') {
            return malformed(line_no,
                             is_resource(er.node) ? ParseReason::Delimiter : ParseReason::Literal);
        }
        nodes[i] = std::move(er.node);
    }
    skip_ws();
    if (pos < raw.size() && raw[pos] == '.') {
        ++pos;
        skip_ws();
    }
    if (pos != raw.size()) return malformed(line_no, ParseReason::Delimiter);
    return finish_triple(line_no, std::move(nodes[0]), std::move(nodes[1]), std::move(nodes[2]));
}

std::string denormalize(const Resource& r) {
    switch (r.kind) {
        case ResourceKind::Key:
            // /key.wikipedia.en -> key namespace, tail keeps its dots
            return std::string(kKeyHttp) + r.value.substr(5);
        case ResourceKind::ExternalIri:
            return r.value;
        default:
            return std::string(kNsHttp) + r.value.substr(1);
    }
}

}  // namespace

bool is_resource(const Node& n) { return std::holds_alternative<Resource>(n); }
const Resource& as_resource(const Node& n) { return std::get<Resource>(n); }
const Literal& as_literal(const Node& n) { return std::get<Literal>(n); }

std::string object_key(const Node& n) {
    if (is_resource(n)) return as_resource(n).value;
    return literal_to_string(as_literal(n));
}

std::string_view reason_name(ParseReason r) {
    switch (r) {
        case ParseReason::None: return "none";
        case ParseReason::Blank: return "blank";
        case ParseReason::Comment: return "comment";
        case ParseReason::Delimiter: return "delimiter";
        case ParseReason::Brackets: return "brackets";
        case ParseReason::Literal: return "literal";
        case ParseReason::Terminator: return "terminator";
        case ParseReason::LiteralPosition: return "literal-position";
        case ParseReason::EmptyElement: return "empty-element";
    }
    return "unknown";
}

Resource normalize_iri(std::string_view iri) {
    if (iri.starts_with(kNsHttp) || iri.starts_with(kNsHttps)) {
        std::string_view tail = iri.substr(iri.find("/ns/") + 4);
        if (tail.empty()) return Resource{ResourceKind::ExternalIri, std::string(iri)};
        return path_resource("/" + std::string(tail));
    }
    if (iri.starts_with(kKeyHttp) || iri.starts_with(kKeyHttps)) {
        std::string_view tail = iri.substr(iri.find("/key/") + 5);
        if (tail.empty()) return Resource{ResourceKind::ExternalIri, std::string(iri)};
        return path_resource("/key/" + std::string(tail));
    }
    if (iri.starts_with('/')) {
        return path_resource(std::string(iri));
    }
    return Resource{ResourceKind::ExternalIri, std::string(iri)};
}

ParseOutcome parse_line(std::string_view raw, uint64_t line_no, const ParseOptions& opts) {
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    if (raw.empty() || all_space(raw)) {
        ParseOutcome out;
        out.status = ParseStatus::Skipped;
        out.reason = ParseReason::Blank;
        out.line_no = line_no;
        return out;
    }
    size_t first = raw.find_first_not_of(" \t");
    if (raw[first] == '#') {
        ParseOutcome out;
        out.status = ParseStatus::Skipped;
        out.reason = ParseReason::Comment;
        out.line_no = line_no;
        return out;
    }
    return opts.strict ? parse_strict(raw, line_no) : parse_lenient(raw, line_no);
}

std::string resource_to_string(const Resource& r, PathStyle style) {
    if (style == PathStyle::Dots || r.kind == ResourceKind::ExternalIri) return r.value;
    std::string out = r.value;
    for (char& c : out) {
        if (c == '.') c = '/';
    }
    return out;
}

std::string literal_to_string(const Literal& l) {
    std::string out;
    out.reserve(l.lexical.size() + l.lang.size() + l.datatype.size() + 6);
    out += '"';
    out += l.lexical;
    out += '"';
    if (!l.lang.empty()) {
        out += '@';
        out += l.lang;
    } else if (!l.datatype.empty()) {
        out += "^^<";
        out += l.datatype;
        out += '>';
    }
    return out;
}

std::string serialize_triple(const Triple& t, PathStyle style) {
    std::string out = resource_to_string(t.subject, style);
    out += '\t';
    out += resource_to_string(t.predicate, style);
    out += '\t';
    if (is_resource(t.object)) {
        out += resource_to_string(as_resource(t.object), style);
    } else {
        out += literal_to_string(as_literal(t.object));
    }
    return out;
}

std::string serialize_ntriples(const Triple& t) {
    std::string out = "<" + denormalize(t.subject) + ">\t<" + denormalize(t.predicate) + ">\t";
    if (is_resource(t.object)) {
        out += "<" + denormalize(as_resource(t.object)) + ">";
    } else {
        out += literal_to_string(as_literal(t.object));
    }
    out += "\t.";
    return out;
}

TripleStream::TripleStream(std::unique_ptr<LineSource> src, ParseOptions opts)
    : src_(std::move(src)), opts_(opts) {}

TripleStream::~TripleStream() = default;
TripleStream::TripleStream(TripleStream&&) noexcept = default;
TripleStream& TripleStream::operator=(TripleStream&&) noexcept = default;

std::optional<ParseOutcome> TripleStream::next() {
    auto line = src_->next_line();
    counters_.bytes = src_->byte_offset();
    if (!line) return std::nullopt;
    last_line_ = *line;
    counters_.lines++;
    ParseOutcome out = parse_line(*line, counters_.lines, opts_);
    switch (out.status) {
        case ParseStatus::Ok: counters_.ok++; break;
        case ParseStatus::Skipped: counters_.skipped++; break;
        case ParseStatus::Malformed: counters_.malformed++; break;
    }
    if (out.ok()) {
        const Triple& t = *out.triple;
        bool has_key = t.subject.kind == ResourceKind::Key ||
                       t.predicate.kind == ResourceKind::Key ||
                       (is_resource(t.object) && as_resource(t.object).kind == ResourceKind::Key);
        if (has_key) {
            if (line->find("rdf.freebase.com/key/") != std::string_view::npos) {
                counters_.keys_from_full_iri++;
            } else {
                counters_.keys_from_bare_path++;
            }
        }
    }
    return out;
}

TripleStream open_triple_stream(const std::string& path, ParseOptions opts) {
    return TripleStream(open_line_source(path), opts);
}

}  // namespace fbt
