#include "fbt/profiler.hpp"

#include <algorithm>
#include <cctype>

#include "fbt/errors.hpp"

namespace fbt {

namespace {

PredicateGroup selector_group(const SliceManifest& m, const ClassificationTable& table) {
    if (m.kind == SelectorKind::Residual) return PredicateGroup::Unknown;
    if (m.kind == SelectorKind::Predicate) {
        return stats_group(classify_predicate(normalize_iri(m.selector), table).group);
    }
    const std::string& d = m.selector;
    if (d == kUnknownDomain) return PredicateGroup::Unknown;
    if (d.find('#') != std::string::npos) return PredicateGroup::Owl;
    if (d == "key") return PredicateGroup::Implementation;
    if (table.is_implementation_domain(d)) return PredicateGroup::Implementation;
    return PredicateGroup::SubjectMatter;
}

int group_rank(PredicateGroup g) {
    switch (g) {
        case PredicateGroup::Implementation:
        case PredicateGroup::KeyNamespace: return 0;
        case PredicateGroup::Owl: return 1;
        case PredicateGroup::SubjectMatter: return 2;
        case PredicateGroup::Unknown: return 3;
    }
    return 3;
}

std::string display_name(const std::string& selector) {
    std::string s = selector;
    if (!s.empty() && s.front() == '/') s.erase(0, 1);
    for (char& c : s) {
        if (c == '_') c = ' ';
    }
    if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    return s;
}

}  // namespace

std::vector<DomainStatsRow> domain_stats(const std::vector<SliceManifest>& manifests,
                                         const ClassificationTable& table) {
    std::vector<DomainStatsRow> rows;
    uint64_t total = 0;
    for (const auto& m : manifests) total += m.triple_count;

    for (const auto& m : manifests) {
        DomainStatsRow row;
        row.selector = m.selector;
        row.name = display_name(m.selector);
        row.triple_count = m.triple_count;
        row.group = selector_group(m, table);
        rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end(), [](const DomainStatsRow& a, const DomainStatsRow& b) {
        int ra = group_rank(a.group), rb = group_rank(b.group);
        if (ra != rb) return ra < rb;
        if (a.triple_count != b.triple_count) return a.triple_count > b.triple_count;
        return a.selector < b.selector;
    });

    uint64_t group_total[4] = {0, 0, 0, 0};
    for (const auto& r : rows) group_total[group_rank(r.group)] += r.triple_count;
    for (auto& r : rows) {
        uint64_t gt = group_total[group_rank(r.group)];
        r.percent_of_all = total ? 100.0 * static_cast<double>(r.triple_count) /
                                       static_cast<double>(total)
                                 : 0.0;
        r.percent_of_group = gt ? 100.0 * static_cast<double>(r.triple_count) /
                                      static_cast<double>(gt)
                                : 0.0;
    }
    return rows;
}

double top_coverage(const std::vector<DomainStatsRow>& rows, size_t k) {
    std::vector<double> pct;
    pct.reserve(rows.size());
    for (const auto& r : rows) pct.push_back(r.percent_of_all);
    std::sort(pct.begin(), pct.end(), std::greater<>());
    double sum = 0.0;
    for (size_t i = 0; i < pct.size() && i < k; ++i) sum += pct[i];
    return sum;
}

PositionCardinality unique_position_counts(const std::string& slice_path,
                                           const ExtSortConfig& sort) {
    ParseOptions lenient;
    lenient.strict = false;
    TripleStream stream = open_triple_stream(slice_path, lenient);
    ExternalSorter subjects(sort), predicates(sort), objects(sort);
    while (auto out = stream.next()) {
        if (!out->ok()) continue;
        const Triple& t = *out->triple;
        subjects.add(resource_to_string(t.subject, PathStyle::Dots));
        predicates.add(resource_to_string(t.predicate, PathStyle::Dots));
        objects.add(object_key(t.object));
    }
    PositionCardinality card;
    card.unique_subjects = count_distinct(subjects);
    card.unique_predicates = count_distinct(predicates);
    card.unique_objects = count_distinct(objects);
    return card;
}

TopicEstimate estimate_topics(const std::string& name_slice_path, const ExtSortConfig& sort) {
    ParseOptions lenient;
    lenient.strict = false;
    TripleStream stream = open_triple_stream(name_slice_path, lenient);
    ExternalSorter subjects(sort);
    while (auto out = stream.next()) {
        if (!out->ok()) continue;
        const Triple& t = *out->triple;
        if (t.predicate.value != known::name) {
            throw ContractError("name slice carries predicate " + t.predicate.value +
                                " at line " + std::to_string(out->line_no));
        }
        subjects.add(resource_to_string(t.subject, PathStyle::Dots));
    }
    TopicEstimate est;
    UniqueIterator uniq(subjects.finish());
    while (auto rec = uniq.next()) {
        const std::string_view s = rec->first;
        if (s.starts_with("/m.")) {
            est.mid_subjects++;
        } else if (s.starts_with("/g.")) {
            est.gid_subjects++;
        } else {
            est.other_subjects++;
        }
    }
    est.topics = est.mid_subjects + est.gid_subjects;
    return est;
}

}  // namespace fbt
