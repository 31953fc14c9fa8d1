#include "fbt/slicer.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <list>
#include <optional>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "fbt/errors.hpp"
#include "fbt/extsort.hpp"
#include "fbt/gzio.hpp"
#include "fbt/schema.hpp"
#include "fbt/util.hpp"

namespace fs = std::filesystem;

namespace fbt {

namespace {

constexpr std::string_view kResidualSelector = "__residual__";
constexpr size_t kMinChunkBytes = 1 << 20;

// ---------------------------------------------------------------------------
// histogram

void merge_spill_record(PredicateHistogram& h, std::string_view rec) {
    size_t t1 = rec.find('\t');
    size_t t2 = rec.rfind('\t');
    if (t1 == std::string_view::npos || t2 == t1) return;
    std::string value(rec.substr(0, t1));
    int kind = rec[t1 + 1] - '0';
    uint64_t count = std::stoull(std::string(rec.substr(t2 + 1)));
    auto& e = h.entries[value];
    e.kind = static_cast<ResourceKind>(kind);
    e.count += count;
}

}  // namespace

Resource PredicateHistogram::resource_for(const std::string& value) const {
    auto it = entries.find(value);
    if (it == entries.end()) throw ContractError("predicate not in histogram: " + value);
    return Resource{it->second.kind, value};
}

PredicateHistogram enumerate_predicates(TripleStream& stream, const HistogramOptions& opts) {
    PredicateHistogram h;
    std::unordered_map<std::string, PredicateEntry> live;
    std::optional<ExternalSorter> spill;

    auto flush_live = [&] {
        if (!spill) {
            ExtSortConfig cfg;
            cfg.tmp_dir = opts.tmp_dir;
            spill.emplace(cfg);
        }
        for (auto& [value, e] : live) {
            spill->add(value + '\t' + static_cast<char>('0' + static_cast<int>(e.kind)) + '\t' +
                       std::to_string(e.count));
        }
        live.clear();
    };

    while (auto out = stream.next()) {
        if (!out->ok()) continue;
        const Resource& p = out->triple->predicate;
        auto& e = live[p.value];
        e.kind = p.kind;
        e.count++;
        h.total++;
        if (live.size() > opts.max_in_memory) flush_live();
    }

    if (!spill) {
        h.entries.insert(live.begin(), live.end());
        return h;
    }
    flush_live();
    auto it = spill->finish();
    while (auto rec = it.next()) merge_spill_record(h, *rec);
    return h;
}

PredicateHistogram enumerate_predicates(const std::string& path, const HistogramOptions& opts) {
    TripleStream stream = open_triple_stream(path, opts.parse);
    return enumerate_predicates(stream, opts);
}

SlicePlan build_slice_plan(const PredicateHistogram& h, Granularity granularity) {
    SlicePlan plan;
    plan.granularity = granularity;
    if (granularity == Granularity::Predicate) {
        for (const auto& [value, e] : h.entries) {
            plan.specs.push_back({SelectorKind::Predicate, value, e.count});
        }
    } else {
        std::map<std::string, uint64_t> by_domain;
        for (const auto& [value, e] : h.entries) {
            by_domain[domain_of(Resource{e.kind, value})] += e.count;
        }
        for (const auto& [domain, count] : by_domain) {
            plan.specs.push_back({SelectorKind::Domain, domain, count});
        }
    }
    std::stable_sort(plan.specs.begin(), plan.specs.end(),
                     [](const SliceSpec& a, const SliceSpec& b) {
                         if (a.expected_count != b.expected_count)
                             return a.expected_count > b.expected_count;
                         return a.selector < b.selector;
                     });
    return plan;
}

void write_plan_tsv(const SlicePlan& plan, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write plan " + path);
    for (const auto& spec : plan.specs) {
        out << spec.selector << '\t' << spec.expected_count << '\n';
    }
    if (!out.flush()) throw IoError("plan write failed for " + path);
}

SlicePlan read_plan_tsv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read plan " + path);
    SlicePlan plan;
    plan.granularity = Granularity::Domain;
    std::unordered_set<std::string> seen;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        size_t tab = line.find('\t');
        std::string selector = (tab == std::string::npos) ? line : line.substr(0, tab);
        uint64_t expected = 0;
        if (tab != std::string::npos) {
            try {
                expected = std::stoull(line.substr(tab + 1));
            } catch (const std::exception&) {
                throw ContractError("bad count in plan line: " + line);
            }
        }
        if (!seen.insert(selector).second) {
            throw ContractError("duplicate selector in plan: " + selector);
        }
        bool exact = selector.starts_with('/') || selector.find("://") != std::string::npos;
        if (exact) plan.granularity = Granularity::Predicate;
        plan.specs.push_back(
            {exact ? SelectorKind::Predicate : SelectorKind::Domain, selector, expected});
    }
    return plan;
}

// ---------------------------------------------------------------------------
// slicing

namespace {

// Lines whose first byte falls in [begin, end) of a plain file.
class RangeLineSource final : public LineSource {
public:
    RangeLineSource(const std::string& path, uint64_t begin, uint64_t end)
        : end_(end) {
        f_ = fopen(path.c_str(), "rb");
        if (!f_) throw IoError("cannot open " + path);
        buf_.resize(1 << 20);
        if (begin > 0) {
            // step back one byte: if it is not a newline, the line covering
            // `begin` started earlier and belongs to the previous chunk
            if (fseeko(f_, static_cast<off_t>(begin - 1), SEEK_SET) != 0)
                throw IoError("seek failed in " + path);
            int c = fgetc(f_);
            offset_ = begin;
            if (c != '\n' && c != EOF) skip_partial_ = true;
        }
    }

    ~RangeLineSource() override {
        if (f_) fclose(f_);
    }

    std::optional<std::string_view> next_line() override {
        if (skip_partial_) {
            skip_partial_ = false;
            if (!raw_line()) return std::nullopt;
        }
        if (line_start_ >= end_) return std::nullopt;
        return raw_line();
    }

    uint64_t byte_offset() const override { return offset_; }
    bool compressed() const override { return false; }

private:
    std::optional<std::string_view> raw_line() {
        line_start_ = offset_ - (len_ - pos_);
        if (line_start_ >= end_) return std::nullopt;
        spill_.clear();
        while (true) {
            if (pos_ == len_) {
                size_t n = fread(buf_.data(), 1, buf_.size(), f_);
                if (n == 0) {
                    if (ferror(f_)) throw IoError("read error at byte " + std::to_string(offset_));
                    break;
                }
                pos_ = 0;
                len_ = n;
                offset_ += n;
            }
            const char* start = buf_.data() + pos_;
            const char* nl = static_cast<const char*>(memchr(start, '\n', len_ - pos_));
            if (nl) {
                size_t n = static_cast<size_t>(nl - start);
                pos_ += n + 1;
                if (spill_.empty()) return std::string_view(start, n);
                spill_.append(start, n);
                return std::string_view(spill_);
            }
            spill_.append(start, len_ - pos_);
            pos_ = len_;
        }
        if (!spill_.empty()) return std::string_view(spill_);
        return std::nullopt;
    }

    FILE* f_ = nullptr;
    uint64_t end_;
    std::vector<char> buf_;
    size_t pos_ = 0, len_ = 0;
    uint64_t offset_ = 0;      // bytes consumed from file
    uint64_t line_start_ = 0;  // offset of the line about to be returned
    std::string spill_;
    bool skip_partial_ = false;
};

struct MatchIndex {
    std::unordered_map<std::string, size_t> exact;
    std::unordered_map<std::string, size_t> by_domain;
    size_t residual;

    explicit MatchIndex(const SlicePlan& plan) : residual(plan.specs.size()) {
        for (size_t i = 0; i < plan.specs.size(); ++i) {
            const SliceSpec& s = plan.specs[i];
            if (s.kind == SelectorKind::Predicate) {
                exact.emplace(s.selector, i);
            } else {
                by_domain.emplace(s.selector, i);
            }
        }
    }

    size_t match(const Resource& pred) const {
        size_t best = residual;
        if (!exact.empty()) {
            auto it = exact.find(pred.value);
            if (it != exact.end()) best = it->second;
        }
        if (!by_domain.empty()) {
            auto it = by_domain.find(domain_of(pred));
            if (it != by_domain.end() && it->second < best) best = it->second;
        }
        return best;
    }
};

struct SinkStat {
    uint64_t lines = 0;
    uint64_t bytes = 0;
    uint64_t fnv = kFnvOffset;
};

// Fixed set of output files with an LRU cap on simultaneously open handles.
class SinkSet {
public:
    SinkSet(std::vector<std::string> paths, size_t cap)
        : paths_(std::move(paths)), cap_(std::max<size_t>(cap, 2)) {
        slots_.resize(paths_.size());
    }

    ~SinkSet() {
        for (auto& s : slots_) {
            if (s.f) fclose(s.f);
        }
    }

    void write_line(size_t idx, std::string_view line) {
        Slot& s = slots_[idx];
        if (!s.f) open_slot(idx);
        touch(idx);
        if (fwrite(line.data(), 1, line.size(), s.f) != line.size() ||
            fputc('\n', s.f) == EOF) {
            throw IoError("write failed for " + paths_[idx]);
        }
        s.stat.fnv = fnv1a64(line, s.stat.fnv);
        s.stat.fnv = fnv1a64("\n", s.stat.fnv);
        s.stat.bytes += line.size() + 1;
        s.stat.lines++;
    }

    // Creates still-untouched files so every slice exists on disk.
    void finalize() {
        for (size_t i = 0; i < slots_.size(); ++i) {
            if (!slots_[i].created) open_slot(i);
            close_slot(i);
        }
    }

    const SinkStat& stat(size_t idx) const { return slots_[idx].stat; }

private:
    struct Slot {
        FILE* f = nullptr;
        bool created = false;
        SinkStat stat;
        std::list<size_t>::iterator lru_it;
    };

    void open_slot(size_t idx) {
        Slot& s = slots_[idx];
        if (open_count_ >= cap_) {
            close_slot(lru_.back());
        }
        s.f = fopen(paths_[idx].c_str(), s.created ? "ab" : "wb");
        if (!s.f) throw IoError("cannot open slice file " + paths_[idx]);
        s.created = true;
        lru_.push_front(idx);
        s.lru_it = lru_.begin();
        open_count_++;
    }

    void close_slot(size_t idx) {
        Slot& s = slots_[idx];
        if (!s.f) return;
        if (fclose(s.f) != 0) {
            s.f = nullptr;
            throw IoError("close failed for " + paths_[idx]);
        }
        s.f = nullptr;
        lru_.erase(s.lru_it);
        open_count_--;
    }

    void touch(size_t idx) {
        lru_.erase(slots_[idx].lru_it);
        lru_.push_front(idx);
        slots_[idx].lru_it = lru_.begin();
    }

    std::vector<std::string> paths_;
    size_t cap_;
    std::vector<Slot> slots_;
    std::list<size_t> lru_;
    size_t open_count_ = 0;
};

std::string sanitize_selector(std::string_view selector) {
    std::string out;
    out.reserve(selector.size());
    std::string_view s = selector;
    if (s.starts_with('/')) s.remove_prefix(1);
    for (char c : s) {
        bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' ||
                    c == '-';
        out += keep ? c : '_';
    }
    if (out.size() > 100) out.resize(100);
    if (out.empty()) out = "slice";
    return out;
}

// Selector sanitization must stay injective; collisions get a suffix.
std::vector<std::string> slice_file_names(const SlicePlan& plan,
                                          const std::vector<std::string>& overrides) {
    std::vector<std::string> names;
    std::unordered_set<std::string> used;
    for (size_t i = 0; i < plan.specs.size(); ++i) {
        std::string base = (i < overrides.size() && !overrides[i].empty())
                               ? overrides[i]
                               : sanitize_selector(plan.specs[i].selector) + ".tsv";
        std::string name = base;
        int n = 2;
        while (!used.insert(name).second) {
            name = base + "." + std::to_string(n++);
        }
        names.push_back(name);
    }
    std::string res{kResidualSelector};
    res += ".tsv";
    while (!used.insert(res).second) res += ".r";
    names.push_back(res);
    return names;
}

struct ChunkOutcome {
    std::vector<SinkStat> stats;
    StreamCounters counters;
};

ChunkOutcome run_chunk(const std::string& input, uint64_t begin, uint64_t end,
                       const MatchIndex& index, const std::vector<std::string>& part_paths,
                       const SliceOptions& opts) {
    std::unique_ptr<LineSource> src;
    if (begin == 0 && end == UINT64_MAX) {
        src = open_line_source(input);
    } else {
        src = std::make_unique<RangeLineSource>(input, begin, end);
    }
    TripleStream stream(std::move(src), opts.parse);
    size_t cap = std::max<size_t>(8, opts.open_file_cap);
    SinkSet sinks(part_paths, cap);
    while (auto out = stream.next()) {
        if (!out->ok()) continue;
        size_t idx = index.match(out->triple->predicate);
        sinks.write_line(idx, serialize_triple(*out->triple, opts.style));
    }
    sinks.finalize();
    ChunkOutcome result;
    result.counters = stream.counters();
    result.stats.reserve(part_paths.size());
    for (size_t i = 0; i < part_paths.size(); ++i) result.stats.push_back(sinks.stat(i));
    return result;
}

void accumulate_counters(StreamCounters& into, const StreamCounters& from) {
    into.lines += from.lines;
    into.ok += from.ok;
    into.skipped += from.skipped;
    into.malformed += from.malformed;
    into.bytes += from.bytes;
    into.keys_from_full_iri += from.keys_from_full_iri;
    into.keys_from_bare_path += from.keys_from_bare_path;
}

}  // namespace

const SliceManifest* SliceRunResult::find(std::string_view selector) const {
    for (const auto& m : manifests) {
        if (m.selector == selector) return &m;
    }
    return nullptr;
}

uint64_t SliceRunResult::slice_total() const {
    uint64_t total = 0;
    for (const auto& m : manifests) total += m.triple_count;
    return total;
}

namespace {

SliceRunResult run_slices(const std::string& input, const SlicePlan& plan,
                          const std::string& sink_dir, const SliceOptions& opts,
                          const std::vector<std::string>& name_overrides) {
    fs::create_directories(sink_dir);
    std::vector<std::string> names = slice_file_names(plan, name_overrides);
    const size_t nslices = names.size();

    // chunk layout: gzip input and small files run as a single chunk
    std::vector<std::pair<uint64_t, uint64_t>> chunks;
    int workers = std::max(1, opts.workers);
    if (workers > 1 && !file_is_gzip(input)) {
        uint64_t size = fs::file_size(input);
        if (size >= kMinChunkBytes * static_cast<uint64_t>(workers)) {
            uint64_t per = size / static_cast<uint64_t>(workers);
            for (int i = 0; i < workers; ++i) {
                uint64_t b = per * static_cast<uint64_t>(i);
                uint64_t e = (i == workers - 1) ? size : per * static_cast<uint64_t>(i + 1);
                chunks.emplace_back(b, e);
            }
        }
    }
    if (chunks.empty()) chunks.emplace_back(0, UINT64_MAX);

    MatchIndex index(plan);

    fs::path parts_root = fs::path(sink_dir) / ".parts";
    std::vector<std::vector<std::string>> part_paths(chunks.size());
    for (size_t c = 0; c < chunks.size(); ++c) {
        fs::path dir = (chunks.size() == 1) ? fs::path(sink_dir) : parts_root / std::to_string(c);
        fs::create_directories(dir);
        for (const auto& n : names) part_paths[c].push_back((dir / n).string());
    }

    std::vector<ChunkOutcome> outcomes(chunks.size());
    if (chunks.size() == 1) {
        outcomes[0] = run_chunk(input, chunks[0].first, chunks[0].second, index, part_paths[0],
                                opts);
    } else {
        std::vector<std::thread> threads;
        std::vector<std::exception_ptr> errors(chunks.size());
        size_t per_worker_cap = std::max<size_t>(8, opts.open_file_cap / chunks.size());
        for (size_t c = 0; c < chunks.size(); ++c) {
            threads.emplace_back([&, c] {
                try {
                    SliceOptions chunk_opts = opts;
                    chunk_opts.open_file_cap = per_worker_cap;
                    outcomes[c] = run_chunk(input, chunks[c].first, chunks[c].second, index,
                                            part_paths[c], chunk_opts);
                } catch (...) {
                    errors[c] = std::current_exception();
                }
            });
        }
        for (auto& t : threads) t.join();
        for (auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    SliceRunResult result;
    result.plan = plan;
    for (const auto& oc : outcomes) accumulate_counters(result.counters, oc.counters);

    // merge parts (chunk order preserves input order within each slice)
    std::vector<SinkStat> finals(nslices);
    if (chunks.size() == 1) {
        finals = outcomes[0].stats;
    } else {
        std::vector<char> buf(1 << 20);
        for (size_t i = 0; i < nslices; ++i) {
            fs::path final_path = fs::path(sink_dir) / names[i];
            FILE* out = fopen(final_path.string().c_str(), "wb");
            if (!out) throw IoError("cannot create " + final_path.string());
            SinkStat st;
            for (size_t c = 0; c < chunks.size(); ++c) {
                FILE* in = fopen(part_paths[c][i].c_str(), "rb");
                if (!in) continue;
                size_t n;
                while ((n = fread(buf.data(), 1, buf.size(), in)) > 0) {
                    if (fwrite(buf.data(), 1, n, out) != n) {
                        fclose(in);
                        fclose(out);
                        throw IoError("merge write failed for " + final_path.string());
                    }
                    st.fnv = fnv1a64(std::string_view(buf.data(), n), st.fnv);
                    st.bytes += n;
                }
                fclose(in);
                st.lines += outcomes[c].stats[i].lines;
            }
            if (fclose(out) != 0) throw IoError("close failed for " + final_path.string());
            finals[i] = st;
        }
        std::error_code ec;
        fs::remove_all(parts_root, ec);
    }

    for (size_t i = 0; i < nslices; ++i) {
        SliceManifest m;
        if (i < plan.specs.size()) {
            m.kind = plan.specs[i].kind;
            m.selector = plan.specs[i].selector;
            if (m.kind == SelectorKind::Predicate) m.predicate = m.selector;
        } else {
            m.kind = SelectorKind::Residual;
            m.selector = std::string(kResidualSelector);
        }
        m.file = names[i];
        m.triple_count = finals[i].lines;
        m.byte_count = finals[i].bytes;
        m.checksum = to_hex(finals[i].fnv);
        result.manifests.push_back(std::move(m));
    }
    return result;
}

}  // namespace

SliceRunResult slice_stream(const std::string& input, const SlicePlan& plan,
                            const std::string& sink_dir, const SliceOptions& opts) {
    return run_slices(input, plan, sink_dir, opts, {});
}

SliceRunResult extract_identifier_slices(const std::string& input, const std::string& sink_dir,
                                         const SliceOptions& opts) {
    SlicePlan plan;
    plan.granularity = Granularity::Predicate;
    for (auto pred : known::identifier_predicates()) {
        plan.specs.push_back({SelectorKind::Predicate, std::string(pred), 0});
    }
    return run_slices(input, plan, sink_dir, opts,
                      {"name.tsv", "type.tsv", "keys.tsv", "desc.tsv", "akas.tsv"});
}

}  // namespace fbt
