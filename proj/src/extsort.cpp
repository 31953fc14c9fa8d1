#include "fbt/extsort.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <queue>

#include "fbt/errors.hpp"

namespace fs = std::filesystem;

namespace fbt {

namespace {

std::string unique_tmp_name(const std::string& dir) {
    static std::atomic<uint64_t> counter{0};
    fs::path base = dir.empty() ? fs::temp_directory_path() : fs::path(dir);
    std::error_code ec;
    fs::create_directories(base, ec);
    return (base / ("fbt_sort_" + std::to_string(::getpid()) + "_" +
                    std::to_string(counter.fetch_add(1)) + ".run"))
        .string();
}

class RunReader {
public:
    explicit RunReader(const std::string& path) : in_(path, std::ios::binary) {
        if (!in_) throw IoError("cannot open sort run " + path);
        advance();
    }

    bool valid() const { return valid_; }
    const std::string& current() const { return line_; }

    void advance() { valid_ = static_cast<bool>(std::getline(in_, line_)); }

private:
    std::ifstream in_;
    std::string line_;
    bool valid_ = false;
};

void write_run(const std::string& path, const std::vector<std::string>& sorted,
               uint64_t records_so_far) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot create sort run " + path);
    for (const auto& rec : sorted) {
        out.write(rec.data(), static_cast<std::streamsize>(rec.size()));
        out.put('\n');
        if (!out) {
            throw IoError("spill failed writing " + path + " (after " +
                          std::to_string(records_so_far) + " records; disk full?)");
        }
    }
    out.flush();
    if (!out) throw IoError("spill flush failed for " + path);
}

}  // namespace

struct ExternalSorter::Iterator::Impl {
    // In-memory mode
    std::vector<std::string> sorted;
    size_t index = 0;
    bool in_memory = false;

    // Merge mode
    std::vector<std::unique_ptr<RunReader>> readers;
    struct Cmp {
        const std::vector<std::unique_ptr<RunReader>>* readers;
        bool operator()(size_t a, size_t b) const {
            // min-heap; ties by run index for a stable, deterministic order
            const std::string& la = (*readers)[a]->current();
            const std::string& lb = (*readers)[b]->current();
            if (la != lb) return la > lb;
            return a > b;
        }
    };
    std::priority_queue<size_t, std::vector<size_t>, Cmp> heap{Cmp{nullptr}};
    long pending = -1;  // run to advance before the next pop
    std::vector<std::string> owned_run_paths;

    ~Impl() {
        std::error_code ec;
        for (const auto& p : owned_run_paths) fs::remove(p, ec);
    }

    std::optional<std::string_view> next() {
        if (in_memory) {
            if (index >= sorted.size()) return std::nullopt;
            return std::string_view(sorted[index++]);
        }
        if (pending >= 0) {
            readers[static_cast<size_t>(pending)]->advance();
            if (readers[static_cast<size_t>(pending)]->valid()) {
                heap.push(static_cast<size_t>(pending));
            }
            pending = -1;
        }
        if (heap.empty()) return std::nullopt;
        size_t r = heap.top();
        heap.pop();
        pending = static_cast<long>(r);
        return std::string_view(readers[r]->current());
    }
};

ExternalSorter::Iterator::Iterator(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
ExternalSorter::Iterator::~Iterator() = default;
ExternalSorter::Iterator::Iterator(Iterator&&) noexcept = default;
ExternalSorter::Iterator& ExternalSorter::Iterator::operator=(Iterator&&) noexcept = default;

std::optional<std::string_view> ExternalSorter::Iterator::next() { return impl_->next(); }

ExternalSorter::ExternalSorter(ExtSortConfig cfg) : cfg_(cfg) {
    tmp_base_ = cfg_.tmp_dir;
}

ExternalSorter::~ExternalSorter() {
    std::error_code ec;
    for (const auto& p : runs_) fs::remove(p, ec);
}

ExternalSorter::ExternalSorter(ExternalSorter&&) noexcept = default;
ExternalSorter& ExternalSorter::operator=(ExternalSorter&&) noexcept = default;

void ExternalSorter::add(std::string_view record) {
    buffer_.emplace_back(record);
    buffered_bytes_ += record.size() + 32;  // rough per-record overhead
    records_++;
    if (buffered_bytes_ >= cfg_.memory_cap) spill();
}

void ExternalSorter::spill() {
    if (buffer_.empty()) return;
    std::sort(buffer_.begin(), buffer_.end());
    std::string path = unique_tmp_name(tmp_base_);
    write_run(path, buffer_, records_);
    runs_.push_back(std::move(path));
    buffer_.clear();
    buffer_.shrink_to_fit();
    buffered_bytes_ = 0;
}

ExternalSorter::Iterator ExternalSorter::finish() {
    auto impl = std::make_unique<Iterator::Impl>();
    if (runs_.empty()) {
        std::sort(buffer_.begin(), buffer_.end());
        impl->in_memory = true;
        impl->sorted = std::move(buffer_);
        buffer_.clear();
        return Iterator(std::move(impl));
    }
    spill();

    // Reduce fan-in with intermediate merge passes when needed.
    while (runs_.size() > cfg_.max_fanin) {
        std::vector<std::string> next_runs;
        for (size_t i = 0; i < runs_.size(); i += cfg_.max_fanin) {
            size_t end = std::min(i + cfg_.max_fanin, runs_.size());
            if (end - i == 1) {
                next_runs.push_back(runs_[i]);
                continue;
            }
            auto sub = std::make_unique<Iterator::Impl>();
            for (size_t j = i; j < end; ++j) {
                sub->readers.push_back(std::make_unique<RunReader>(runs_[j]));
            }
            sub->heap = decltype(sub->heap)(Iterator::Impl::Cmp{&sub->readers});
            for (size_t j = 0; j < sub->readers.size(); ++j) {
                if (sub->readers[j]->valid()) sub->heap.push(j);
            }
            std::string merged = unique_tmp_name(tmp_base_);
            std::ofstream out(merged, std::ios::binary);
            if (!out) throw IoError("cannot create merge run " + merged);
            while (auto rec = sub->next()) {
                out.write(rec->data(), static_cast<std::streamsize>(rec->size()));
                out.put('\n');
            }
            out.flush();
            if (!out) throw IoError("merge pass write failed for " + merged);
            std::error_code ec;
            for (size_t j = i; j < end; ++j) fs::remove(runs_[j], ec);
            next_runs.push_back(std::move(merged));
        }
        runs_ = std::move(next_runs);
    }

    for (const auto& p : runs_) {
        impl->readers.push_back(std::make_unique<RunReader>(p));
    }
    impl->heap = decltype(impl->heap)(Iterator::Impl::Cmp{&impl->readers});
    for (size_t j = 0; j < impl->readers.size(); ++j) {
        if (impl->readers[j]->valid()) impl->heap.push(j);
    }
    impl->owned_run_paths = std::move(runs_);
    runs_.clear();
    return Iterator(std::move(impl));
}

std::optional<std::pair<std::string_view, uint64_t>> UniqueIterator::next() {
    if (done_) return std::nullopt;
    if (!primed_) {
        auto first = it_.next();
        if (!first) {
            done_ = true;
            return std::nullopt;
        }
        current_.assign(*first);
        primed_ = true;
    }
    uint64_t count = 1;
    while (true) {
        auto rec = it_.next();
        if (!rec) {
            done_ = true;
            return std::make_pair(std::string_view(current_), count);
        }
        if (*rec == current_) {
            count++;
            continue;
        }
        std::string result = std::move(current_);
        current_.assign(*rec);
        result_hold_ = std::move(result);
        return std::make_pair(std::string_view(result_hold_), count);
    }
}

uint64_t count_distinct(ExternalSorter& sorter) {
    UniqueIterator it(sorter.finish());
    uint64_t n = 0;
    while (it.next()) n++;
    return n;
}

uint64_t count_common_distinct(ExternalSorter& a, ExternalSorter& b) {
    UniqueIterator ia(a.finish());
    UniqueIterator ib(b.finish());
    auto ra = ia.next();
    auto rb = ib.next();
    uint64_t common = 0;
    while (ra && rb) {
        int cmp = ra->first.compare(rb->first);
        if (cmp == 0) {
            common++;
            ra = ia.next();
            rb = ib.next();
        } else if (cmp < 0) {
            ra = ia.next();
        } else {
            rb = ib.next();
        }
    }
    return common;
}

}  // namespace fbt
