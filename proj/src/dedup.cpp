#include "fbt/dedup.hpp"

#include <unordered_map>

#include "fbt/errors.hpp"
#include "fbt/schema.hpp"

namespace fbt {

namespace {

constexpr std::string_view kNotableAttrPrefix = "/common.notable_for.";

// Injective (a, b) -> record encoding for pair joins.
std::string encode_pair(std::string_view a, std::string_view b) {
    std::string out = std::to_string(a.size());
    out += ':';
    out += a;
    out += b;
    return out;
}

TripleStream open_lenient(const std::string& path) {
    ParseOptions opts;
    opts.strict = false;
    return open_triple_stream(path, opts);
}

void require_predicate(const Triple& t, std::string_view expected, const std::string& slice,
                       uint64_t line_no) {
    if (t.predicate.value != expected) {
        throw ContractError(slice + ":" + std::to_string(line_no) + " carries predicate " +
                            t.predicate.value + "; expected " + std::string(expected));
    }
}

uint64_t load_pairs(const std::string& slice, std::string_view expected_pred, bool swap_key,
                    ExternalSorter& sorter) {
    TripleStream stream = open_lenient(slice);
    uint64_t count = 0;
    while (auto out = stream.next()) {
        if (!out->ok()) continue;
        const Triple& t = *out->triple;
        require_predicate(t, expected_pred, slice, out->line_no);
        std::string s = resource_to_string(t.subject, PathStyle::Dots);
        std::string o = object_key(t.object);
        sorter.add(swap_key ? encode_pair(o, s) : encode_pair(s, o));
        count++;
    }
    return count;
}

}  // namespace

std::string_view duplicate_kind_name(DuplicateKind k) {
    switch (k) {
        case DuplicateKind::OwlLabel: return "owl_label";
        case DuplicateKind::OwlType: return "owl_type";
        case DuplicateKind::ReverseInstance: return "reverse_instance";
    }
    return "unknown";
}

DuplicateReport detect_owl_duplicates(const std::string& base_slice,
                                      const std::string& mirror_slice, DuplicateKind kind,
                                      const ExtSortConfig& sort) {
    if (kind == DuplicateKind::ReverseInstance) {
        throw ContractError("reverse pairs go through detect_reverse_pairs");
    }
    std::string_view base_pred =
        (kind == DuplicateKind::OwlLabel) ? known::name : known::type;
    std::string_view mirror_pred =
        (kind == DuplicateKind::OwlLabel) ? known::owl_label : known::owl_type;

    ExternalSorter base_pairs(sort), mirror_pairs(sort);
    DuplicateReport report;
    report.kind = kind;
    report.base_slice_count = load_pairs(base_slice, base_pred, false, base_pairs);
    report.mirror_slice_count = load_pairs(mirror_slice, mirror_pred, false, mirror_pairs);
    report.duplicate_count = count_common_distinct(base_pairs, mirror_pairs);
    return report;
}

DuplicateReport detect_reverse_pairs(const std::string& type_slice,
                                     const std::string& instance_slice,
                                     const ExtSortConfig& sort) {
    ExternalSorter forward(sort), reverse(sort);
    DuplicateReport report;
    report.kind = DuplicateKind::ReverseInstance;
    report.base_slice_count = load_pairs(type_slice, known::type, false, forward);
    report.mirror_slice_count = load_pairs(instance_slice, known::instance, true, reverse);
    report.duplicate_count = count_common_distinct(forward, reverse);
    return report;
}

std::vector<MediatorGroup> collect_mediator_groups(const std::vector<std::string>& slices) {
    std::vector<MediatorGroup> groups;
    std::unordered_map<std::string, size_t> by_mediator;

    // pass 1: inbound links
    for (const auto& slice : slices) {
        TripleStream stream = open_lenient(slice);
        while (auto out = stream.next()) {
            if (!out->ok()) continue;
            const Triple& t = *out->triple;
            if (t.predicate.value != known::notable_for) continue;
            if (!is_resource(t.object)) continue;
            std::string mediator = as_resource(t.object).value;
            auto [it, fresh] = by_mediator.try_emplace(mediator, groups.size());
            if (fresh) {
                MediatorGroup g;
                g.subject = resource_to_string(t.subject, PathStyle::Dots);
                g.mediator = std::move(mediator);
                g.triple_count = 1;
                groups.push_back(std::move(g));
            } else {
                groups[it->second].triple_count++;
            }
        }
    }

    // pass 2: attributes keyed by mediator subject
    for (const auto& slice : slices) {
        TripleStream stream = open_lenient(slice);
        while (auto out = stream.next()) {
            if (!out->ok()) continue;
            const Triple& t = *out->triple;
            const std::string& p = t.predicate.value;
            if (!p.starts_with(kNotableAttrPrefix)) continue;
            std::string mediator = resource_to_string(t.subject, PathStyle::Dots);
            auto [it, fresh] = by_mediator.try_emplace(mediator, groups.size());
            if (fresh) {
                MediatorGroup g;
                g.mediator = std::move(mediator);
                g.orphan = true;
                groups.push_back(std::move(g));
            }
            MediatorGroup& g = groups[it->second];
            g.triple_count++;
            if (p == known::notable_display_name) {
                if (!is_resource(t.object)) {
                    const Literal& l = as_literal(t.object);
                    g.display_names.emplace_back(l.lang, l.lexical);
                }
            } else if (p == known::notable_object) {
                if (g.object_path.empty()) g.object_path = object_key(t.object);
            } else if (p == known::notable_predicate) {
                if (g.predicate_path.empty()) g.predicate_path = object_key(t.object);
            } else if (p == known::notable_notable_object) {
                if (g.notable_object_path.empty())
                    g.notable_object_path = object_key(t.object);
            }
        }
    }

    for (auto& g : groups) {
        g.complete = !g.orphan && !g.subject.empty() && !g.notable_object_path.empty();
    }
    return groups;
}

std::vector<MediatorGroup> collect_mediator_groups(const std::string& slice) {
    return collect_mediator_groups(std::vector<std::string>{slice});
}

std::pair<std::vector<Triple>, CompactionCounts> compact_notable_for(
    const std::vector<MediatorGroup>& groups) {
    std::vector<Triple> direct;
    CompactionCounts counts;
    for (const auto& g : groups) {
        if (!g.complete) {
            counts.passthrough_groups++;
            counts.passthrough_triples += g.triple_count;
            continue;
        }
        if (!g.object_path.empty() && g.object_path != g.notable_object_path) {
            counts.discrepancies++;
        }
        Triple t;
        t.subject = normalize_iri(g.subject);
        t.predicate = normalize_iri(known::notable_for);
        t.object = normalize_iri(g.notable_object_path);
        direct.push_back(std::move(t));
        counts.input_triples += g.triple_count;
        counts.output_triples++;
    }
    counts.fraction_retained =
        counts.input_triples
            ? static_cast<double>(counts.output_triples) /
                  static_cast<double>(counts.input_triples)
            : 0.0;
    return {std::move(direct), counts};
}

std::vector<Triple> group_triples(const MediatorGroup& g) {
    std::vector<Triple> out;
    Resource mediator = normalize_iri(g.mediator);
    if (!g.subject.empty()) {
        Triple link;
        link.subject = normalize_iri(g.subject);
        link.predicate = normalize_iri(known::notable_for);
        link.object = mediator;
        out.push_back(std::move(link));
    }
    for (const auto& [lang, text] : g.display_names) {
        Triple t;
        t.subject = mediator;
        t.predicate = normalize_iri(known::notable_display_name);
        t.object = Literal{text, lang, ""};
        out.push_back(std::move(t));
    }
    auto path_attr = [&](std::string_view pred, const std::string& value) {
        if (value.empty()) return;
        Triple t;
        t.subject = mediator;
        t.predicate = normalize_iri(pred);
        t.object = normalize_iri(value);
        out.push_back(std::move(t));
    };
    path_attr(known::notable_object, g.object_path);
    path_attr(known::notable_predicate, g.predicate_path);
    path_attr(known::notable_notable_object, g.notable_object_path);
    return out;
}

TrimReport trim_summary(const std::vector<DuplicateReport>& reports, uint64_t mediator_triples,
                        uint64_t compacted_triples, uint64_t total_triples) {
    if (total_triples == 0) throw ContractError("trim summary over an empty corpus");
    uint64_t owl = 0, reverse = 0;
    for (const auto& r : reports) {
        if (r.kind == DuplicateKind::ReverseInstance) {
            reverse += r.mirror_slice_count;
        } else {
            owl += r.mirror_slice_count;
        }
    }
    double total = static_cast<double>(total_triples);
    TrimReport report;
    report.owl_fraction = static_cast<double>(owl) / total;
    report.reverse_fraction = static_cast<double>(reverse) / total;
    report.mediator_fraction = static_cast<double>(mediator_triples) / total;
    report.compacted_fraction = static_cast<double>(compacted_triples) / total;
    report.total_trim_fraction = report.owl_fraction + report.reverse_fraction +
                                 (report.mediator_fraction - report.compacted_fraction);
    return report;
}

}  // namespace fbt
