#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace fbt {

// Dump identifiers after normalization. Values are Dots-canonical paths
// (/m.abc123, /people.person, /key.wikipedia.en); external IRIs keep their
// full form.
enum class ResourceKind { Mid, Gid, SchemaPath, Key, ExternalIri };

struct Resource {
    ResourceKind kind = ResourceKind::ExternalIri;
    std::string value;

    bool operator==(const Resource&) const = default;
    bool operator<(const Resource& o) const { return value < o.value; }
};

// Typed value. lexical keeps the exact bytes between the source quotes;
// escape sequences stay unexpanded so serialization is byte-exact.
struct Literal {
    std::string lexical;
    std::string lang;      // empty when absent
    std::string datatype;  // empty when absent; never set together with lang

    bool operator==(const Literal&) const = default;
};

using Node = std::variant<Resource, Literal>;

struct Triple {
    Resource subject;
    Resource predicate;
    Node object;

    bool operator==(const Triple&) const = default;
};

bool is_resource(const Node& n);
const Resource& as_resource(const Node& n);
const Literal& as_literal(const Node& n);

// Canonical text form of an object node: the resource value, or
// "lexical"@lang / "lexical"^^<datatype>. Used as join key by dedup.
std::string object_key(const Node& n);

enum class ParseStatus { Ok, Skipped, Malformed };

enum class ParseReason {
    None,
    Blank,
    Comment,
    Delimiter,       // wrong element separation / field count
    Brackets,        // '<' without matching '>'
    Literal,         // unterminated quote or junk after a literal
    Terminator,      // missing trailing full stop (strict mode)
    LiteralPosition, // literal in subject or predicate position
    EmptyElement,
};

std::string_view reason_name(ParseReason r);

struct ParseOutcome {
    ParseStatus status = ParseStatus::Malformed;
    ParseReason reason = ParseReason::None;
    uint64_t line_no = 0;
    std::optional<Triple> triple;

    bool ok() const { return status == ParseStatus::Ok; }
};

struct ParseOptions {
    // Strict follows the dump format: single tabs between elements and a
    // required trailing full stop. Lenient accepts whitespace runs and a
    // missing terminator.
    bool strict = true;
};

// One dump line (no trailing newline) -> exactly one outcome. Never throws.
ParseOutcome parse_line(std::string_view raw, uint64_t line_no,
                        const ParseOptions& opts = {});

// Bracket-stripped element content -> normalized Resource. Freebase ns/key
// IRIs become leading-slash Dots paths, bare paths are re-canonicalized,
// anything else passes through as ExternalIri. Idempotent.
Resource normalize_iri(std::string_view iri);

enum class PathStyle { Dots, Slashes };

std::string resource_to_string(const Resource& r, PathStyle style);
std::string literal_to_string(const Literal& l);

// Tab-delimited 3-column line, no terminator. Dots output re-parses to an
// equal triple.
std::string serialize_triple(const Triple& t, PathStyle style = PathStyle::Dots);

// Dump-shaped line: full bracketed IRIs, "\t." terminator.
std::string serialize_ntriples(const Triple& t);

struct StreamCounters {
    uint64_t lines = 0;
    uint64_t ok = 0;
    uint64_t skipped = 0;
    uint64_t malformed = 0;
    uint64_t bytes = 0;
    // Key-namespace provenance: the raw dump may carry keys as full IRIs or
    // as already-shortened paths; both are accepted and tallied.
    uint64_t keys_from_full_iri = 0;
    uint64_t keys_from_bare_path = 0;
};

class LineSource;  // gzio.hpp

// Single-consumer sequence of outcomes over a plain or gzipped byte stream.
// Memory use is bounded by the longest line, not the stream length.
class TripleStream {
public:
    explicit TripleStream(std::unique_ptr<LineSource> src, ParseOptions opts = {});
    ~TripleStream();

    TripleStream(TripleStream&&) noexcept;
    TripleStream& operator=(TripleStream&&) noexcept;

    // nullopt at end of stream. Throws IoError on read failure.
    std::optional<ParseOutcome> next();

    const StreamCounters& counters() const { return counters_; }

    // Raw text of the line the latest next() consumed; valid until the
    // following next() call.
    std::string_view last_line() const { return last_line_; }

private:
    std::unique_ptr<LineSource> src_;
    ParseOptions opts_;
    StreamCounters counters_;
    std::string_view last_line_;
};

TripleStream open_triple_stream(const std::string& path, ParseOptions opts = {});

}  // namespace fbt
