#include "fbt/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "fbt/errors.hpp"
#include "fbt/gzio.hpp"
#include "fbt/ntparse.hpp"
#include "fbt/schema.hpp"

namespace fbt {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr uint64_t kIdMask = (1ULL << 40) - 1;
constexpr uint64_t kIdMult = 0x9E3779B97F4A7C15ULL | 1ULL;

std::string base36(uint64_t v) {
    static constexpr char digits[] = "0123456789abcdefghijklmnopqrstuvwxyz";
    if (v == 0) return "0";
    char buf[16];
    int n = 0;
    while (v) {
        buf[n++] = digits[v % 36];
        v /= 36;
    }
    std::string s;
    s.reserve(static_cast<size_t>(n));
    while (n) s += buf[--n];
    return s;
}

// Seed-keyed bijection over the id space, so different seeds give
// different surface ids without any allocation bookkeeping.
struct IdSpace {
    uint64_t seed;

    uint64_t scramble(uint64_t i) const { return (i * kIdMult + seed) & kIdMask; }
    std::string entity(uint64_t i) const { return "/m.0" + base36(scramble(i)); }
    std::string mediator(uint64_t i) const { return "/g.1" + base36(scramble(i)); }
    static std::string type_path(uint64_t k) { return "/typeworld.t" + base36(k); }
};

std::vector<std::string> domain_properties(const std::string& domain) {
    return {"/" + domain + ".alpha.p1", "/" + domain + ".alpha.p2",
            "/" + domain + ".beta.p1", "/" + domain + ".beta.p2",
            "/" + domain + ".gamma.p1"};
}

void check_fraction(double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw ContractError(std::string(what) + " outside [0,1]");
    }
}

struct Allocation {
    uint64_t malformed = 0;
    uint64_t valid = 0;
    uint64_t id[5] = {0, 0, 0, 0, 0};  // name, type, key, desc, akas
    uint64_t owl_label = 0;
    uint64_t owl_type = 0;
    uint64_t reverse = 0;
    uint64_t mediator_triples = 0;
    std::vector<std::pair<std::string, uint64_t>> domains;
};

std::vector<uint64_t> largest_remainder(const std::vector<std::pair<std::string, double>>& mix,
                                        uint64_t n) {
    size_t k = mix.size();
    std::vector<uint64_t> alloc(k, 0);
    std::vector<std::pair<double, size_t>> rem;
    uint64_t assigned = 0;
    for (size_t i = 0; i < k; ++i) {
        double share = static_cast<double>(n) * mix[i].second;
        uint64_t base = static_cast<uint64_t>(share);
        alloc[i] = base;
        assigned += base;
        rem.emplace_back(share - static_cast<double>(base), i);
    }
    std::sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (size_t i = 0; assigned < n; ++i) {
        alloc[rem[i % k].second]++;
        assigned++;
    }
    return alloc;
}

uint64_t rate_count(uint64_t base, double rate) {
    return static_cast<uint64_t>(std::llround(static_cast<double>(base) * rate));
}

Allocation plan_allocation(const GeneratorSpec& spec) {
    check_fraction(spec.malformed_rate, "malformed_rate");
    check_fraction(spec.owl_mirror_rate, "owl_mirror_rate");
    check_fraction(spec.reverse_pair_rate, "reverse_pair_rate");
    if (spec.languages.empty()) throw ContractError("languages must not be empty");
    if (spec.entity_pool == 0 || spec.entity_pool > kIdMask) {
        throw ContractError("entity_pool outside (0, 2^40]");
    }
    if (spec.type_pool == 0) throw ContractError("type_pool must be positive");

    auto ids = known::identifier_predicates();
    for (const auto& [pred, rate] : spec.identifier_rates) {
        check_fraction(rate, "identifier rate");
        if (std::find(ids.begin(), ids.end(), pred) == ids.end()) {
            throw ContractError("unknown identifier predicate " + pred);
        }
    }
    if (!spec.domain_mix.empty()) {
        double sum = 0.0;
        for (const auto& [domain, frac] : spec.domain_mix) {
            check_fraction(frac, "domain mix fraction");
            if (domain.empty()) throw ContractError("empty domain key in mix");
            sum += frac;
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            throw ContractError("domain mix sums to " + std::to_string(sum) + ", not 1");
        }
    }

    Allocation a;
    a.malformed = rate_count(spec.total_triples, spec.malformed_rate);
    a.valid = spec.total_triples - a.malformed;
    for (size_t i = 0; i < ids.size(); ++i) {
        auto it = spec.identifier_rates.find(std::string(ids[i]));
        a.id[i] = (it == spec.identifier_rates.end()) ? 0 : rate_count(a.valid, it->second);
    }
    a.owl_label = rate_count(a.id[0], spec.owl_mirror_rate);
    a.owl_type = rate_count(a.id[1], spec.owl_mirror_rate);
    a.reverse = rate_count(a.id[1], spec.reverse_pair_rate);

    uint64_t langs = spec.languages.size();
    for (uint64_t i = 0; i < spec.mediator_group_count; ++i) {
        a.mediator_triples += 4 + 1 + (i % langs);
    }

    if (a.id[0] > spec.entity_pool * langs) {
        throw ContractError("name count exceeds entity_pool x languages");
    }
    if (a.id[1] > spec.entity_pool * spec.type_pool) {
        throw ContractError("type count exceeds entity_pool x type_pool");
    }

    uint64_t used = a.owl_label + a.owl_type + a.reverse + a.mediator_triples;
    for (uint64_t c : a.id) used += c;
    if (used > a.valid) {
        throw ContractError("spec infeasible: planted categories need " +
                            std::to_string(used) + " of " + std::to_string(a.valid) +
                            " valid lines");
    }
    uint64_t remaining = a.valid - used;
    if (remaining > 0 && spec.domain_mix.empty()) {
        throw ContractError("domain mix empty but " + std::to_string(remaining) +
                            " triples unallocated");
    }
    std::vector<uint64_t> alloc = largest_remainder(spec.domain_mix, remaining);
    for (size_t i = 0; i < spec.domain_mix.size(); ++i) {
        a.domains.emplace_back(spec.domain_mix[i].first, alloc[i]);
    }
    return a;
}

enum class Cat { Name, Type, Key, Desc, Akas, OwlLabel, OwlType, Reverse, Mediator, Domain,
                 Malformed };

struct Slot {
    Cat cat;
    size_t domain_index = 0;  // Cat::Domain only
    uint64_t planned = 0;
    uint64_t emitted = 0;
};

std::string malformed_line(uint64_t j) {
    std::string b = base36(j);
    switch (j % 4) {
        case 0:
            return "<http://rdf.freebase.com/ns/m.broken" + b +
                   "> <http://rdf.freebase.com/ns/type.object.name>";
        case 1:
            return "<http://rdf.freebase.com/ns/m.broken" + b +
                   "\t<http://rdf.freebase.com/ns/type.object.type>\t"
                   "<http://rdf.freebase.com/ns/typeworld.t0>\t.";
        case 2:
            return "/m.broken" + b + "\t/type.object.name\t\"unterminated value\t.";
        default:
            return "\"stray\"\t/type.object.name\t/m.broken" + b + "\t.";
    }
}

class Emitter {
public:
    Emitter(const GeneratorSpec& spec, const Allocation& alloc, LineSink& sink,
            GroundTruth& truth)
        : spec_(spec), alloc_(alloc), sink_(sink), truth_(truth), ids_{spec.seed} {}

    void emit(Slot& slot) {
        uint64_t j = slot.emitted;
        switch (slot.cat) {
            case Cat::Name: triple(name_triple(j)); break;
            case Cat::Type: triple(type_triple(j)); break;
            case Cat::Key: triple(key_triple(j)); break;
            case Cat::Desc: triple(desc_triple(j)); break;
            case Cat::Akas: triple(akas_triple(j)); break;
            case Cat::OwlLabel: triple(owl_label_triple(j)); break;
            case Cat::OwlType: triple(owl_type_triple(j)); break;
            case Cat::Reverse: triple(reverse_triple(j)); break;
            case Cat::Mediator: triple(next_mediator_triple()); break;
            case Cat::Domain: triple(domain_triple(slot.domain_index, j)); break;
            case Cat::Malformed:
                sink_.write_line(malformed_line(j));
                truth_.malformed_lines++;
                break;
        }
        slot.emitted++;
        truth_.total_lines++;
    }

private:
    void triple(const Triple& t) {
        sink_.write_line(serialize_ntriples(t));
        truth_.ok_lines++;
        truth_.predicate_counts[t.predicate.value]++;
        truth_.domain_counts[domain_of(t.predicate)]++;
    }

    Triple make(const std::string& s, std::string_view p, Node o) const {
        Triple t;
        t.subject = normalize_iri(s);
        t.predicate = normalize_iri(p);
        t.object = std::move(o);
        return t;
    }

    std::pair<std::string, std::string> name_value(uint64_t j) const {
        uint64_t subject = j % spec_.entity_pool;
        const std::string& lang = spec_.languages[j / spec_.entity_pool];
        return {ids_.entity(subject),
                "Entity " + base36(ids_.scramble(subject)) + " " + lang};
    }

    Triple name_triple(uint64_t j) const {
        auto [subject, text] = name_value(j);
        const std::string& lang = spec_.languages[j / spec_.entity_pool];
        return make(subject, known::name, Literal{text, lang, ""});
    }

    Triple owl_label_triple(uint64_t j) const {
        auto [subject, text] = name_value(j);
        const std::string& lang = spec_.languages[j / spec_.entity_pool];
        return make(subject, known::owl_label, Literal{text, lang, ""});
    }

    Triple type_triple(uint64_t j) const {
        std::string s = ids_.entity(j % spec_.entity_pool);
        std::string t = IdSpace::type_path(j / spec_.entity_pool);
        return make(s, known::type, normalize_iri(t));
    }

    Triple owl_type_triple(uint64_t j) const {
        std::string s = ids_.entity(j % spec_.entity_pool);
        std::string t = IdSpace::type_path(j / spec_.entity_pool);
        return make(s, known::owl_type, normalize_iri(t));
    }

    Triple reverse_triple(uint64_t j) const {
        std::string s = ids_.entity(j % spec_.entity_pool);
        std::string t = IdSpace::type_path(j / spec_.entity_pool);
        return make(t, known::instance, normalize_iri(s));
    }

    Triple key_triple(uint64_t j) const {
        std::string s = ids_.entity(j % spec_.entity_pool);
        return make(s, known::key, Literal{"/wikipedia/en/k" + base36(j), "", ""});
    }

    Triple desc_triple(uint64_t j) const {
        std::string s = ids_.entity(j % spec_.entity_pool);
        const std::string& lang = spec_.languages[j % spec_.languages.size()];
        return make(s, known::description, Literal{"About entity " + base36(j), lang, ""});
    }

    Triple akas_triple(uint64_t j) const {
        std::string s = ids_.entity(j % spec_.entity_pool);
        const std::string& lang = spec_.languages[j % spec_.languages.size()];
        return make(s, known::alias, Literal{"Alias " + base36(j), lang, ""});
    }

    // Groups stream out member by member: link, display names, object,
    // predicate, notable_object.
    Triple next_mediator_triple() {
        uint64_t i = med_group_;
        uint64_t langs = spec_.languages.size();
        uint64_t display = 1 + (i % langs);
        uint64_t size = 4 + display;
        uint64_t k = med_member_;

        std::string mediator = ids_.mediator(i);
        Triple t;
        if (k == 0) {
            t = make(ids_.entity(i % spec_.entity_pool), known::notable_for,
                     normalize_iri(mediator));
        } else if (k <= display) {
            const std::string& lang = spec_.languages[k - 1];
            t = make(mediator, known::notable_display_name,
                     Literal{"Notable " + base36(i) + " " + lang, lang, ""});
        } else if (k == display + 1) {
            t = make(mediator, known::notable_object,
                     normalize_iri(IdSpace::type_path(i % spec_.type_pool)));
        } else if (k == display + 2) {
            t = make(mediator, known::notable_predicate, normalize_iri(known::type));
        } else {
            t = make(mediator, known::notable_notable_object,
                     normalize_iri(IdSpace::type_path(i % spec_.type_pool)));
        }
        med_member_++;
        if (med_member_ == size) {
            med_member_ = 0;
            med_group_++;
        }
        return t;
    }

    Triple domain_triple(size_t domain_index, uint64_t j) const {
        const std::string& domain = alloc_.domains[domain_index].first;
        std::vector<std::string> props = domain_properties(domain);
        const std::string& pred = props[j % props.size()];
        std::string s = ids_.entity(j % spec_.entity_pool);
        if (j % 3 == 0) {
            return make(s, pred, normalize_iri(ids_.entity((j + 7) % spec_.entity_pool)));
        }
        return make(s, pred, Literal{"v" + base36(j), "", ""});
    }

    const GeneratorSpec& spec_;
    const Allocation& alloc_;
    LineSink& sink_;
    GroundTruth& truth_;
    IdSpace ids_;
    uint64_t med_group_ = 0;
    uint64_t med_member_ = 0;
};

}  // namespace

void validate_spec(const GeneratorSpec& spec) { plan_allocation(spec); }

GeneratorSpec freebase_preset(uint64_t seed, uint64_t total_triples) {
    GeneratorSpec s;
    s.seed = seed;
    s.total_triples = total_triples;
    s.identifier_rates = {
        {std::string(known::name), 0.0232209},
        {std::string(known::type), 0.0850665},
        {std::string(known::key), 0.0468205},
        {std::string(known::description), 0.0065390},
        {std::string(known::alias), 0.0014729},
    };
    s.owl_mirror_rate = 0.999995;
    s.reverse_pair_rate = 0.9997579;
    s.languages = {"en", "fr", "de"};
    s.malformed_rate = 0.001;
    s.entity_pool = std::max<uint64_t>(1000, total_triples / 20);
    s.type_pool = 50;
    // average group carries 6 triples at three languages
    s.mediator_group_count =
        static_cast<uint64_t>(std::llround(static_cast<double>(total_triples) * 0.409077 / 6.0));
    s.domain_mix = {
        {"music", 0.601}, {"film", 0.081},    {"book", 0.075},   {"medicine", 0.062},
        {"biology", 0.057}, {"people", 0.049}, {"location", 0.041}, {"sports", 0.034},
    };
    return s;
}

GroundTruth generate_dump(const GeneratorSpec& spec, const std::string& sink_path) {
    Allocation alloc = plan_allocation(spec);

    std::vector<Slot> slots;
    slots.push_back({Cat::Name, 0, alloc.id[0], 0});
    slots.push_back({Cat::Type, 0, alloc.id[1], 0});
    slots.push_back({Cat::Key, 0, alloc.id[2], 0});
    slots.push_back({Cat::Desc, 0, alloc.id[3], 0});
    slots.push_back({Cat::Akas, 0, alloc.id[4], 0});
    slots.push_back({Cat::OwlLabel, 0, alloc.owl_label, 0});
    slots.push_back({Cat::OwlType, 0, alloc.owl_type, 0});
    slots.push_back({Cat::Reverse, 0, alloc.reverse, 0});
    slots.push_back({Cat::Mediator, 0, alloc.mediator_triples, 0});
    for (size_t i = 0; i < alloc.domains.size(); ++i) {
        slots.push_back({Cat::Domain, i, alloc.domains[i].second, 0});
    }
    slots.push_back({Cat::Malformed, 0, alloc.malformed, 0});

    GroundTruth truth;
    bool gzip = sink_path.ends_with(".gz");
    auto sink = open_line_sink(sink_path, gzip);
    Emitter emitter(spec, alloc, *sink, truth);

    // proportional interleave: always the slot with the smallest
    // (emitted+1)/planned ratio, ties to the earlier slot
    uint64_t left = spec.total_triples;
    while (left) {
        size_t best = slots.size();
        for (size_t i = 0; i < slots.size(); ++i) {
            const Slot& s = slots[i];
            if (s.emitted >= s.planned) continue;
            if (best == slots.size()) {
                best = i;
                continue;
            }
            const Slot& b = slots[best];
            if ((s.emitted + 1) * b.planned < (b.emitted + 1) * s.planned) best = i;
        }
        if (best == slots.size()) break;
        emitter.emit(slots[best]);
        left--;
    }
    sink->close();

    if (truth.total_lines != spec.total_triples) {
        throw ContractError("generator emitted " + std::to_string(truth.total_lines) +
                            " of " + std::to_string(spec.total_triples) + " lines");
    }

    truth.topic_count = std::min<uint64_t>(alloc.id[0], spec.entity_pool);
    truth.owl_label_duplicates = alloc.owl_label;
    truth.owl_type_duplicates = alloc.owl_type;
    truth.reverse_pairs = alloc.reverse;
    truth.mediator_groups = spec.mediator_group_count;
    truth.mediator_triples = alloc.mediator_triples;
    truth.compacted_triples = spec.mediator_group_count;
    auto ids = known::identifier_predicates();
    for (size_t i = 0; i < ids.size(); ++i) {
        std::string pred{ids[i]};
        auto it = truth.predicate_counts.find(pred);
        truth.identifier_counts[pred] =
            (it == truth.predicate_counts.end()) ? 0 : it->second;
    }
    for (const auto& [domain, count] : alloc.domains) {
        std::vector<std::string> props = domain_properties(domain);
        uint64_t distinct = std::min<uint64_t>(props.size(), count);
        props.resize(distinct);
        if (!props.empty()) truth.schema[domain] = std::move(props);
    }
    return truth;
}

// ---------------------------------------------------------------------------
// JSON round trips

namespace {

constexpr const char* kSchemaVersion = "1";

void dump_json(const ordered_json& j, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << j.dump(2) << '\n';
    if (!out.flush()) throw IoError("write failed for " + path);
}

ordered_json load_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ContractError("bad JSON in " + path + ": " + e.what());
    }
    return j;
}

}  // namespace

void write_generator_spec(const GeneratorSpec& spec, const std::string& path) {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["seed"] = spec.seed;
    j["total_triples"] = spec.total_triples;
    ordered_json mix = ordered_json::array();
    for (const auto& [domain, frac] : spec.domain_mix) mix.push_back({domain, frac});
    j["domain_mix"] = std::move(mix);
    j["identifier_rates"] = spec.identifier_rates;
    j["owl_mirror_rate"] = spec.owl_mirror_rate;
    j["reverse_pair_rate"] = spec.reverse_pair_rate;
    j["mediator_group_count"] = spec.mediator_group_count;
    j["languages"] = spec.languages;
    j["malformed_rate"] = spec.malformed_rate;
    j["entity_pool"] = spec.entity_pool;
    j["type_pool"] = spec.type_pool;
    dump_json(j, path);
}

GeneratorSpec read_generator_spec(const std::string& path) {
    ordered_json j = load_json(path);
    GeneratorSpec spec;
    spec.seed = j.value("seed", spec.seed);
    spec.total_triples = j.value("total_triples", spec.total_triples);
    if (j.contains("domain_mix")) {
        spec.domain_mix.clear();
        for (const auto& e : j["domain_mix"]) {
            spec.domain_mix.emplace_back(e.at(0).get<std::string>(), e.at(1).get<double>());
        }
    }
    if (j.contains("identifier_rates")) {
        spec.identifier_rates =
            j["identifier_rates"].get<std::map<std::string, double>>();
    }
    spec.owl_mirror_rate = j.value("owl_mirror_rate", spec.owl_mirror_rate);
    spec.reverse_pair_rate = j.value("reverse_pair_rate", spec.reverse_pair_rate);
    spec.mediator_group_count = j.value("mediator_group_count", spec.mediator_group_count);
    if (j.contains("languages")) {
        spec.languages = j["languages"].get<std::vector<std::string>>();
    }
    spec.malformed_rate = j.value("malformed_rate", spec.malformed_rate);
    spec.entity_pool = j.value("entity_pool", spec.entity_pool);
    spec.type_pool = j.value("type_pool", spec.type_pool);
    return spec;
}

void write_ground_truth(const GroundTruth& truth, const std::string& path) {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["total_lines"] = truth.total_lines;
    j["ok_lines"] = truth.ok_lines;
    j["malformed_lines"] = truth.malformed_lines;
    j["predicate_counts"] = truth.predicate_counts;
    j["domain_counts"] = truth.domain_counts;
    j["identifier_counts"] = truth.identifier_counts;
    j["topic_count"] = truth.topic_count;
    j["owl_label_duplicates"] = truth.owl_label_duplicates;
    j["owl_type_duplicates"] = truth.owl_type_duplicates;
    j["reverse_pairs"] = truth.reverse_pairs;
    j["mediator_groups"] = truth.mediator_groups;
    j["mediator_triples"] = truth.mediator_triples;
    j["compacted_triples"] = truth.compacted_triples;
    j["schema"] = truth.schema;
    dump_json(j, path);
}

GroundTruth read_ground_truth(const std::string& path) {
    ordered_json j = load_json(path);
    GroundTruth t;
    t.total_lines = j.value("total_lines", 0ULL);
    t.ok_lines = j.value("ok_lines", 0ULL);
    t.malformed_lines = j.value("malformed_lines", 0ULL);
    if (j.contains("predicate_counts")) {
        t.predicate_counts = j["predicate_counts"].get<std::map<std::string, uint64_t>>();
    }
    if (j.contains("domain_counts")) {
        t.domain_counts = j["domain_counts"].get<std::map<std::string, uint64_t>>();
    }
    if (j.contains("identifier_counts")) {
        t.identifier_counts = j["identifier_counts"].get<std::map<std::string, uint64_t>>();
    }
    t.topic_count = j.value("topic_count", 0ULL);
    t.owl_label_duplicates = j.value("owl_label_duplicates", 0ULL);
    t.owl_type_duplicates = j.value("owl_type_duplicates", 0ULL);
    t.reverse_pairs = j.value("reverse_pairs", 0ULL);
    t.mediator_groups = j.value("mediator_groups", 0ULL);
    t.mediator_triples = j.value("mediator_triples", 0ULL);
    t.compacted_triples = j.value("compacted_triples", 0ULL);
    if (j.contains("schema")) {
        t.schema = j["schema"].get<std::map<std::string, std::vector<std::string>>>();
    }
    return t;
}

}  // namespace fbt
