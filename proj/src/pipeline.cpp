#include "fbt/pipeline.hpp"

#include <unistd.h>

#include <chrono>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "fbt/dedup.hpp"
#include "fbt/errors.hpp"
#include "fbt/gzio.hpp"
#include "fbt/profiler.hpp"
#include "fbt/schema.hpp"
#include "fbt/schemarec.hpp"
#include "fbt/synthgen.hpp"
#include "fbt/util.hpp"

namespace fs = std::filesystem;

namespace fbt {

namespace {

using ordered_json = nlohmann::ordered_json;

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

std::string_view kind_name(SelectorKind k) {
    switch (k) {
        case SelectorKind::Domain: return "domain";
        case SelectorKind::Predicate: return "predicate";
        case SelectorKind::Residual: return "residual";
    }
    return "residual";
}

SelectorKind kind_from(std::string_view name) {
    if (name == "domain") return SelectorKind::Domain;
    if (name == "predicate") return SelectorKind::Predicate;
    if (name == "residual") return SelectorKind::Residual;
    throw ContractError("unknown selector kind " + std::string(name));
}

ordered_json counters_json(const StreamCounters& c) {
    ordered_json j;
    j["lines"] = c.lines;
    j["ok"] = c.ok;
    j["skipped"] = c.skipped;
    j["malformed"] = c.malformed;
    j["bytes"] = c.bytes;
    j["keys_from_full_iri"] = c.keys_from_full_iri;
    j["keys_from_bare_path"] = c.keys_from_bare_path;
    return j;
}

StreamCounters counters_from(const ordered_json& j) {
    StreamCounters c;
    c.lines = j.value("lines", 0ULL);
    c.ok = j.value("ok", 0ULL);
    c.skipped = j.value("skipped", 0ULL);
    c.malformed = j.value("malformed", 0ULL);
    c.bytes = j.value("bytes", 0ULL);
    c.keys_from_full_iri = j.value("keys_from_full_iri", 0ULL);
    c.keys_from_bare_path = j.value("keys_from_bare_path", 0ULL);
    return c;
}

void require(bool ok, const std::string& message) {
    if (!ok) throw ContractError(message);
}

void check_common(const RunConfig& config) {
    require(config.workers >= 1, "workers must be at least 1");
    require(config.sort_mem >= kSortMemFloor,
            "sort memory cap below the " + format_bytes(kSortMemFloor) + " floor");
    require(!config.out_dir.empty(), "output directory required");
}

std::string out_path(const RunConfig& config, std::string_view name) {
    return (fs::path(config.out_dir) / name).string();
}

ExtSortConfig sort_config(const RunConfig& config) {
    ExtSortConfig c;
    c.memory_cap = config.sort_mem;
    c.tmp_dir = out_path(config, "tmp");
    fs::create_directories(c.tmp_dir);
    return c;
}

ManifestDoc load_manifest_or_prereq(const RunConfig& config, std::string_view name) {
    std::string path = out_path(config, name);
    if (!fs::exists(path)) {
        throw PrerequisiteError("missing " + path + "; run the slice stage first");
    }
    return read_manifest(path);
}

// Appends lines to one file while tracking count, bytes, and checksum.
class CountingWriter {
public:
    explicit CountingWriter(const std::string& path) : path_(path) {
        f_ = fopen(path.c_str(), "wb");
        if (!f_) throw IoError("cannot create " + path);
    }
    ~CountingWriter() {
        if (f_) fclose(f_);
    }

    void write_line(std::string_view line) {
        if (fwrite(line.data(), 1, line.size(), f_) != line.size() || fputc('\n', f_) == EOF) {
            throw IoError("write failed for " + path_);
        }
        fnv_ = fnv1a64(line, fnv_);
        fnv_ = fnv1a64("\n", fnv_);
        bytes_ += line.size() + 1;
        lines_++;
    }

    void close() {
        if (!f_) return;
        FILE* f = f_;
        f_ = nullptr;
        if (fclose(f) != 0) throw IoError("close failed for " + path_);
    }

    uint64_t lines() const { return lines_; }
    uint64_t bytes() const { return bytes_; }
    std::string checksum() const { return to_hex(fnv_); }

private:
    std::string path_;
    FILE* f_ = nullptr;
    uint64_t lines_ = 0;
    uint64_t bytes_ = 0;
    uint64_t fnv_ = kFnvOffset;
};

ordered_json output_entry(const CountingWriter& w, std::string_view file) {
    ordered_json j;
    j["file"] = std::string(file);
    j["triple_count"] = w.lines();
    j["byte_count"] = w.bytes();
    j["checksum"] = w.checksum();
    return j;
}

// Throttled stderr reporting; stays quiet when stderr is not a terminal.
class Progress {
public:
    Progress(std::string_view stage, uint64_t total_bytes)
        : stage_(stage), total_bytes_(total_bytes), active_(isatty(2) != 0),
          start_(std::chrono::steady_clock::now()) {}

    void tick(uint64_t lines, uint64_t bytes) {
        if (!active_ || (lines & 0x3FFFFF) != 0) return;
        using namespace std::chrono;
        double secs = duration_cast<duration<double>>(steady_clock::now() - start_).count();
        if (secs <= 0.0) return;
        double rate = static_cast<double>(bytes) / secs;
        std::string eta;
        if (total_bytes_ > bytes && rate > 0) {
            eta = ", eta " +
                  std::to_string(
                      static_cast<uint64_t>(static_cast<double>(total_bytes_ - bytes) / rate)) +
                  "s";
        }
        fprintf(stderr, "\r%s: %s, %s/s%s   ", stage_.c_str(), format_bytes(bytes).c_str(),
                format_bytes(static_cast<uint64_t>(rate)).c_str(), eta.c_str());
    }

    void done(uint64_t lines) {
        if (!active_) return;
        fprintf(stderr, "\r%s: %llu lines done            \n", stage_.c_str(),
                static_cast<unsigned long long>(lines));
    }

private:
    std::string stage_;
    uint64_t total_bytes_;
    bool active_;
    std::chrono::steady_clock::time_point start_;
};

std::string escape_prefix(std::string_view raw) {
    std::string_view cut = raw.substr(0, 120);
    std::string out;
    out.reserve(cut.size());
    for (char c : cut) {
        switch (c) {
            case '\t': out += "\\t"; break;
            case '\\': out += "\\\\"; break;
            case '\r': out += "\\r"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// manifests

void write_manifest(const SliceRunResult& run, const std::string& mode,
                    const std::string& input, const std::string& slice_dir,
                    const std::string& path) {
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["mode"] = mode;
    j["input"] = input;
    j["slice_dir"] = slice_dir;
    j["counters"] = counters_json(run.counters);
    ordered_json plan = ordered_json::array();
    for (const auto& spec : run.plan.specs) {
        ordered_json e;
        e["selector"] = spec.selector;
        e["kind"] = kind_name(spec.kind);
        e["expected_count"] = spec.expected_count;
        plan.push_back(std::move(e));
    }
    j["plan"] = std::move(plan);
    ordered_json slices = ordered_json::array();
    for (const auto& m : run.manifests) {
        ordered_json e;
        e["selector"] = m.selector;
        e["kind"] = kind_name(m.kind);
        e["file"] = m.file;
        e["triple_count"] = m.triple_count;
        e["byte_count"] = m.byte_count;
        e["checksum"] = m.checksum;
        if (!m.predicate.empty()) e["predicate"] = m.predicate;
        slices.push_back(std::move(e));
    }
    j["slices"] = std::move(slices);
    dump_json(j, path);
}

ManifestDoc read_manifest(const std::string& path) {
    ordered_json j = load_json(path);
    ManifestDoc doc;
    doc.mode = j.value("mode", "");
    doc.input = j.value("input", "");
    doc.slice_dir = j.value("slice_dir", "");
    doc.dir = fs::path(path).parent_path().string();
    if (j.contains("counters")) doc.run.counters = counters_from(j["counters"]);
    doc.run.plan.granularity =
        (doc.mode == "domain") ? Granularity::Domain : Granularity::Predicate;
    if (j.contains("plan")) {
        for (const auto& e : j["plan"]) {
            SliceSpec spec;
            spec.selector = e.value("selector", "");
            spec.kind = kind_from(e.value("kind", "domain"));
            spec.expected_count = e.value("expected_count", 0ULL);
            doc.run.plan.specs.push_back(std::move(spec));
        }
    }
    if (j.contains("slices")) {
        for (const auto& e : j["slices"]) {
            SliceManifest m;
            m.selector = e.value("selector", "");
            m.kind = kind_from(e.value("kind", "residual"));
            m.file = e.value("file", "");
            m.triple_count = e.value("triple_count", 0ULL);
            m.byte_count = e.value("byte_count", 0ULL);
            m.checksum = e.value("checksum", "");
            m.predicate = e.value("predicate", "");
            doc.run.manifests.push_back(std::move(m));
        }
    }
    return doc;
}

std::string slice_file_path(const ManifestDoc& doc, const SliceManifest& m) {
    fs::path p = doc.dir;
    if (!doc.slice_dir.empty()) p /= doc.slice_dir;
    p /= m.file;
    return p.string();
}

ParseOptions sniff_parse_options(const std::string& input, bool strict) {
    ParseOptions configured;
    configured.strict = strict;
    if (!strict) return configured;
    auto src = open_line_source(input);
    for (int i = 0; i < 64; ++i) {
        auto line = src->next_line();
        if (!line) break;
        ParseOutcome probe = parse_line(*line, 1, configured);
        if (probe.status == ParseStatus::Skipped) continue;
        if (probe.status == ParseStatus::Ok) return configured;
        // normalized three-column output has no trailing full stop; fall
        // back to lenient when that is the only obstacle
        ParseOptions lenient;
        lenient.strict = false;
        if (probe.reason == ParseReason::Terminator &&
            parse_line(*line, 1, lenient).status == ParseStatus::Ok) {
            return lenient;
        }
        return configured;
    }
    return configured;
}

// ---------------------------------------------------------------------------
// stages

void cmd_prepare(const RunConfig& config) {
    check_common(config);
    require(!config.input.empty(), "prepare needs an input file");
    fs::create_directories(config.out_dir);

    ParseOptions opts = sniff_parse_options(config.input, config.strict);
    TripleStream stream = open_triple_stream(config.input, opts);

    std::string out_name = config.gzip_out ? "normalized.tsv.gz" : "normalized.tsv";
    std::string out_file = out_path(config, out_name);
    auto sink = open_line_sink(out_file, config.gzip_out);

    std::string malformed_file = out_path(config, "malformed.tsv");
    std::ofstream malformed(malformed_file, std::ios::binary);
    if (!malformed) throw IoError("cannot write " + malformed_file);

    uint64_t input_size = fs::exists(config.input) ? fs::file_size(config.input) : 0;
    Progress progress("prepare", input_size);
    uint64_t written = 0;
    while (auto out = stream.next()) {
        if (out->ok()) {
            sink->write_line(serialize_triple(*out->triple, config.style));
            written++;
        } else if (out->status == ParseStatus::Malformed) {
            malformed << out->line_no << '\t' << reason_name(out->reason) << '\t'
                      << escape_prefix(stream.last_line()) << '\n';
        }
        progress.tick(stream.counters().lines, stream.counters().bytes);
    }
    sink->close();
    if (!malformed.flush()) throw IoError("write failed for " + malformed_file);
    malformed.close();

    const StreamCounters& c = stream.counters();
    progress.done(c.lines);
    require(written == c.ok, "normalized line count " + std::to_string(written) +
                                 " diverges from ok count " + std::to_string(c.ok));

    uint64_t output_size = fs::file_size(out_file);
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["input"] = config.input;
    j["output"] = out_name;
    j["parse_mode"] = opts.strict ? "strict" : "lenient";
    j["style"] = (config.style == PathStyle::Dots) ? "dots" : "slashes";
    j["counters"] = counters_json(c);
    j["input_bytes"] = input_size;
    j["output_bytes"] = output_size;
    j["reduction_ratio"] = input_size
                               ? static_cast<double>(output_size) / static_cast<double>(input_size)
                               : 0.0;
    j["malformed_report"] = "malformed.tsv";
    dump_json(j, out_path(config, "prepare.json"));
}

void cmd_slice(const RunConfig& config) {
    check_common(config);
    require(!config.input.empty(), "slice needs an input file");
    fs::create_directories(config.out_dir);

    ParseOptions opts = sniff_parse_options(config.input, config.strict);

    SlicePlan plan;
    if (!config.plan_path.empty()) {
        plan = read_plan_tsv(config.plan_path);
    } else {
        HistogramOptions hist_opts;
        hist_opts.parse = opts;
        hist_opts.tmp_dir = out_path(config, "tmp");
        fs::create_directories(hist_opts.tmp_dir);
        PredicateHistogram hist = enumerate_predicates(config.input, hist_opts);
        plan = build_slice_plan(hist, config.granularity);
    }
    write_plan_tsv(plan, out_path(config, "plan.tsv"));

    SliceOptions slice_opts;
    slice_opts.parse = opts;
    slice_opts.workers = config.workers;
    slice_opts.style = config.style;

    SliceRunResult run = slice_stream(config.input, plan, out_path(config, "slices"), slice_opts);
    require(run.slice_total() == run.counters.ok,
            "slice totals diverge from parsed triple count");
    write_manifest(run, plan.granularity == Granularity::Domain ? "domain" : "predicate",
                   config.input, "slices", out_path(config, "manifest.json"));

    SliceRunResult ids =
        extract_identifier_slices(config.input, out_path(config, "identifiers"), slice_opts);
    require(ids.slice_total() == ids.counters.ok,
            "identifier slice totals diverge from parsed triple count");
    write_manifest(ids, "identifiers", config.input, "identifiers",
                   out_path(config, "manifest_identifiers.json"));
}

void cmd_stats(const RunConfig& config) {
    check_common(config);
    ManifestDoc main = load_manifest_or_prereq(config, "manifest.json");
    ManifestDoc ids = load_manifest_or_prereq(config, "manifest_identifiers.json");

    ClassificationTable table = config.classification_path.empty()
                                    ? ClassificationTable::standard()
                                    : ClassificationTable::load(config.classification_path);
    std::vector<DomainStatsRow> rows = domain_stats(main.run.manifests, table);

    // table rendering
    std::string tsv_path = out_path(config, "stats.tsv");
    {
        std::ofstream tsv(tsv_path, std::ios::binary);
        if (!tsv) throw IoError("cannot write " + tsv_path);
        tsv << "No.\tName\tDomain\tGroup\tTriples\tTotal %\tGroup %\n";
        size_t no = 1;
        for (const auto& r : rows) {
            tsv << no++ << '\t' << r.name << '\t' << r.selector << '\t'
                << group_name(r.group) << '\t' << r.triple_count << '\t'
                << format_percent(r.percent_of_all) << '\t'
                << format_percent(r.percent_of_group) << '\n';
        }
        if (!tsv.flush()) throw IoError("write failed for " + tsv_path);
    }

    uint64_t id_total = 0;
    ordered_json id_counts;
    const SliceManifest* name_slice = nullptr;
    for (const auto& m : ids.run.manifests) {
        if (m.kind == SelectorKind::Residual) continue;
        id_counts[m.selector] = m.triple_count;
        id_total += m.triple_count;
        if (m.selector == known::name) name_slice = &m;
    }
    require(name_slice != nullptr, "identifier manifest lacks the name slice");

    ExtSortConfig sort = sort_config(config);
    std::string name_path = slice_file_path(ids, *name_slice);
    TopicEstimate topics = estimate_topics(name_path, sort);
    PositionCardinality name_card = unique_position_counts(name_path, sort);

    uint64_t ok_total = main.run.counters.ok;
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["input"] = main.input;
    j["totals"] = counters_json(main.run.counters);
    ordered_json jrows = ordered_json::array();
    size_t no = 1;
    for (const auto& r : rows) {
        ordered_json e;
        e["no"] = no++;
        e["name"] = r.name;
        e["selector"] = r.selector;
        e["group"] = std::string(group_name(r.group));
        e["triples"] = r.triple_count;
        e["percent_of_all"] = r.percent_of_all;
        e["percent_of_group"] = r.percent_of_group;
        jrows.push_back(std::move(e));
    }
    j["rows"] = std::move(jrows);
    j["domain_count"] = rows.size();
    ordered_json jid;
    jid["counts"] = std::move(id_counts);
    jid["total"] = id_total;
    jid["percent_of_all"] =
        ok_total ? 100.0 * static_cast<double>(id_total) / static_cast<double>(ok_total) : 0.0;
    j["identifiers"] = std::move(jid);
    ordered_json jtopics;
    jtopics["estimate"] = topics.topics;
    jtopics["mid_subjects"] = topics.mid_subjects;
    jtopics["gid_subjects"] = topics.gid_subjects;
    jtopics["other_subjects"] = topics.other_subjects;
    j["topics"] = std::move(jtopics);
    ordered_json jcard;
    jcard["unique_subjects"] = name_card.unique_subjects;
    jcard["unique_predicates"] = name_card.unique_predicates;
    jcard["unique_objects"] = name_card.unique_objects;
    j["name_position_cardinality"] = std::move(jcard);
    j["top10_coverage_percent"] = top_coverage(rows, 10);
    dump_json(j, out_path(config, "stats.json"));
}

void cmd_dedup(const RunConfig& config) {
    check_common(config);
    std::string input = config.input;
    if (input.empty()) {
        std::string manifest_path = out_path(config, "manifest.json");
        if (fs::exists(manifest_path)) input = read_manifest(manifest_path).input;
    }
    if (input.empty()) {
        throw PrerequisiteError("dedup needs --input or an existing manifest; "
                                "run the slice stage first");
    }
    fs::create_directories(config.out_dir);
    ParseOptions opts = sniff_parse_options(input, config.strict);

    // pure per-predicate slices for the joins
    SlicePlan plan;
    plan.granularity = Granularity::Predicate;
    for (std::string_view pred :
         {known::name, known::type, known::owl_label, known::owl_type, known::instance,
          known::notable_for, known::notable_display_name, known::notable_object,
          known::notable_predicate, known::notable_notable_object}) {
        plan.specs.push_back({SelectorKind::Predicate, std::string(pred), 0});
    }
    SliceOptions slice_opts;
    slice_opts.parse = opts;
    slice_opts.workers = config.workers;
    slice_opts.style = PathStyle::Dots;
    SliceRunResult run = slice_stream(input, plan, out_path(config, "dedup_slices"), slice_opts);
    write_manifest(run, "predicate", input, "dedup_slices",
                   out_path(config, "manifest_dedup_slices.json"));

    ManifestDoc doc;
    doc.dir = config.out_dir;
    doc.slice_dir = "dedup_slices";
    auto slice_of = [&](std::string_view selector) {
        const SliceManifest* m = run.find(selector);
        require(m != nullptr, "dedup slice missing for " + std::string(selector));
        return slice_file_path(doc, *m);
    };

    ExtSortConfig sort = sort_config(config);
    std::vector<DuplicateReport> reports;
    reports.push_back(detect_owl_duplicates(slice_of(known::name), slice_of(known::owl_label),
                                            DuplicateKind::OwlLabel, sort));
    reports.push_back(detect_owl_duplicates(slice_of(known::type), slice_of(known::owl_type),
                                            DuplicateKind::OwlType, sort));
    reports.push_back(
        detect_reverse_pairs(slice_of(known::type), slice_of(known::instance), sort));

    std::vector<MediatorGroup> groups = collect_mediator_groups(
        {slice_of(known::notable_for), slice_of(known::notable_display_name),
         slice_of(known::notable_object), slice_of(known::notable_predicate),
         slice_of(known::notable_notable_object)});
    auto [direct, compaction] = compact_notable_for(groups);

    uint64_t mediator_triples = 0, complete = 0, orphans = 0;
    for (const auto& g : groups) {
        mediator_triples += g.triple_count;
        if (g.complete) complete++;
        if (g.orphan) orphans++;
    }

    CountingWriter compact_out(out_path(config, "compact.tsv"));
    for (const auto& t : direct) compact_out.write_line(serialize_triple(t, PathStyle::Dots));
    compact_out.close();
    CountingWriter pass_out(out_path(config, "passthrough.tsv"));
    for (const auto& g : groups) {
        if (g.complete) continue;
        for (const auto& t : group_triples(g)) {
            pass_out.write_line(serialize_triple(t, PathStyle::Dots));
        }
    }
    pass_out.close();

    uint64_t total = run.counters.ok;
    TrimReport trim = trim_summary(reports, mediator_triples, compaction.output_triples, total);

    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["input"] = input;
    j["total_ok_triples"] = total;
    ordered_json jdup = ordered_json::array();
    for (const auto& r : reports) {
        ordered_json e;
        e["kind"] = std::string(duplicate_kind_name(r.kind));
        e["duplicate_count"] = r.duplicate_count;
        e["base_slice_count"] = r.base_slice_count;
        e["mirror_slice_count"] = r.mirror_slice_count;
        jdup.push_back(std::move(e));
    }
    j["duplicates"] = std::move(jdup);
    ordered_json jmed;
    jmed["groups"] = groups.size();
    jmed["complete_groups"] = complete;
    jmed["orphan_groups"] = orphans;
    jmed["member_triples"] = mediator_triples;
    ordered_json jcomp;
    jcomp["input_triples"] = compaction.input_triples;
    jcomp["output_triples"] = compaction.output_triples;
    jcomp["passthrough_groups"] = compaction.passthrough_groups;
    jcomp["passthrough_triples"] = compaction.passthrough_triples;
    jcomp["discrepancies"] = compaction.discrepancies;
    jcomp["fraction_retained"] = compaction.fraction_retained;
    jmed["compaction"] = std::move(jcomp);
    j["mediator"] = std::move(jmed);
    ordered_json jout;
    jout["compact"] = output_entry(compact_out, "compact.tsv");
    jout["passthrough"] = output_entry(pass_out, "passthrough.tsv");
    j["outputs"] = std::move(jout);
    dump_json(j, out_path(config, "dedup.json"));

    uint64_t owl_mirror = reports[0].mirror_slice_count + reports[1].mirror_slice_count;
    ordered_json jt;
    jt["schema_version"] = kSchemaVersion;
    jt["total_triples"] = total;
    ordered_json jc;
    jc["owl_mirror"] = owl_mirror;
    jc["reverse_instance"] = reports[2].mirror_slice_count;
    jc["mediator"] = mediator_triples;
    jc["compacted"] = compaction.output_triples;
    jt["counts"] = std::move(jc);
    ordered_json jf;
    jf["owl"] = trim.owl_fraction;
    jf["reverse"] = trim.reverse_fraction;
    jf["mediator"] = trim.mediator_fraction;
    jf["compacted"] = trim.compacted_fraction;
    jf["total_trim"] = trim.total_trim_fraction;
    jt["fractions"] = std::move(jf);
    ordered_json jp;
    jp["owl"] = format_percent(trim.owl_fraction * 100.0);
    jp["reverse"] = format_percent(trim.reverse_fraction * 100.0);
    jp["mediator"] = format_percent(trim.mediator_fraction * 100.0);
    jp["compacted"] = format_percent(trim.compacted_fraction * 100.0);
    jp["total_trim"] = format_percent(trim.total_trim_fraction * 100.0);
    jt["percents"] = std::move(jp);
    jt["identity"] = "total_trim = owl + reverse + (mediator - compacted)";
    dump_json(jt, out_path(config, "trim.json"));
}

namespace {

ordered_json metadata_json(const SchemaMetadata& meta) {
    ordered_json j;
    j["mids"] = meta.mids;
    ordered_json names = ordered_json::array();
    for (const auto& [lang, text] : meta.names) names.push_back({lang, text});
    j["names"] = std::move(names);
    ordered_json descs = ordered_json::array();
    for (const auto& [lang, text] : meta.descriptions) descs.push_back({lang, text});
    j["descriptions"] = std::move(descs);
    j["name_via_path"] = meta.name_via_path;
    j["name_via_mid"] = meta.name_via_mid;
    j["desc_via_path"] = meta.desc_via_path;
    j["desc_via_mid"] = meta.desc_via_mid;
    return j;
}

}  // namespace

void cmd_schema(const RunConfig& config) {
    check_common(config);
    require(!config.domain.empty(), "schema needs a target domain");
    ManifestDoc main = load_manifest_or_prereq(config, "manifest.json");
    ManifestDoc ids = load_manifest_or_prereq(config, "manifest_identifiers.json");
    require(main.mode == "domain", "schema needs domain-granularity slices");

    const SliceManifest* domain_slice = main.run.find(config.domain);
    if (domain_slice == nullptr) {
        throw PrerequisiteError("no slice for domain " + config.domain +
                                "; re-run the slice stage over input that contains it");
    }
    auto id_slice = [&](std::string_view selector) {
        const SliceManifest* m = ids.run.find(selector);
        require(m != nullptr, "identifier manifest lacks " + std::string(selector));
        return slice_file_path(ids, *m);
    };

    SchemaSources sources;
    sources.domain_slice = slice_file_path(main, *domain_slice);
    sources.name_slice = id_slice(known::name);
    sources.desc_slice = id_slice(known::description);
    sources.type_slice = id_slice(known::type);
    sources.target_domain = config.domain;

    DomainSchema schema = reconstruct_schema(sources);

    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["domain"] = schema.domain;
    j["source_triple_count"] = schema.source_triple_count;
    j["empty_input"] = schema.empty_input;
    ordered_json jtypes = ordered_json::array();
    for (const auto& t : schema.types) {
        ordered_json e;
        e["path"] = t.path.render();
        e["metadata"] = metadata_json(t.meta);
        jtypes.push_back(std::move(e));
    }
    j["types"] = std::move(jtypes);
    ordered_json jprops = ordered_json::array();
    for (const auto& p : schema.properties) {
        ordered_json e;
        e["path"] = p.path.render();
        e["metadata"] = metadata_json(p.meta);
        jprops.push_back(std::move(e));
    }
    j["properties"] = std::move(jprops);
    dump_json(j, out_path(config, "schema_" + config.domain + ".json"));

    std::string txt_path = out_path(config, "schema_" + config.domain + ".txt");
    std::ofstream txt(txt_path, std::ios::binary);
    if (!txt) throw IoError("cannot write " + txt_path);
    txt << render_schema_text(schema);
    if (!txt.flush()) throw IoError("write failed for " + txt_path);
}

void cmd_generate(const RunConfig& config) {
    check_common(config);
    fs::create_directories(config.out_dir);
    GeneratorSpec spec;
    if (!config.spec_path.empty()) {
        spec = read_generator_spec(config.spec_path);
    } else if (config.preset == "freebase" || config.preset.empty()) {
        spec = freebase_preset(config.seed, config.total_triples);
    } else {
        throw ContractError("unknown generator preset " + config.preset);
    }
    std::string dump_name = config.gzip_out ? "dump.nt.gz" : "dump.nt";
    GroundTruth truth = generate_dump(spec, out_path(config, dump_name));
    write_generator_spec(spec, out_path(config, "generator_spec.json"));
    write_ground_truth(truth, out_path(config, "ground_truth.json"));
}

void cmd_report(const RunConfig& config) {
    check_common(config);
    ordered_json j;
    j["schema_version"] = kSchemaVersion;
    std::string text;
    bool any = false;

    auto attach = [&](const char* name, const char* key) {
        std::string path = out_path(config, name);
        if (!fs::exists(path)) return;
        j[key] = load_json(path);
        any = true;
    };
    attach("prepare.json", "prepare");
    attach("manifest.json", "slices");
    attach("manifest_identifiers.json", "identifiers");
    attach("stats.json", "stats");
    attach("dedup.json", "dedup");
    attach("trim.json", "trim");
    if (!any) {
        throw PrerequisiteError("nothing to report in " + config.out_dir +
                                "; run the pipeline stages first");
    }

    if (j.contains("prepare")) {
        const auto& p = j["prepare"];
        text += "prepare: " + std::to_string(p["counters"].value("ok", 0ULL)) + " triples, " +
                std::to_string(p["counters"].value("malformed", 0ULL)) + " malformed\n";
    }
    if (j.contains("slices")) {
        text += "slices: " + std::to_string(j["slices"]["slices"].size()) + " files\n";
    }
    if (j.contains("stats")) {
        text += "domains: " + std::to_string(j["stats"].value("domain_count", 0ULL)) +
                ", topics: " + std::to_string(j["stats"]["topics"].value("estimate", 0ULL)) +
                "\n";
    }
    if (j.contains("trim")) {
        text += "trim: " + j["trim"]["percents"].value("total_trim", std::string("0")) +
                "% of triples removable\n";
    }
    dump_json(j, out_path(config, "report.json"));
    std::string txt_path = out_path(config, "report.txt");
    std::ofstream txt(txt_path, std::ios::binary);
    if (!txt) throw IoError("cannot write " + txt_path);
    txt << text;
    if (!txt.flush()) throw IoError("write failed for " + txt_path);
}

}  // namespace fbt
