#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fbt {

struct ExtSortConfig {
    uint64_t memory_cap = 64ull << 20;  // buffered bytes before a spill
    std::string tmp_dir;                // empty: system temp dir
    size_t max_fanin = 64;              // merge width per pass
};

// Disk-backed bytewise sort of newline-free records. Records are buffered
// up to memory_cap, spilled as sorted runs, and k-way merged on read-out.
class ExternalSorter {
public:
    explicit ExternalSorter(ExtSortConfig cfg = {});
    ~ExternalSorter();

    ExternalSorter(ExternalSorter&&) noexcept;
    ExternalSorter& operator=(ExternalSorter&&) noexcept;

    void add(std::string_view record);

    class Iterator {
    public:
        ~Iterator();
        Iterator(Iterator&&) noexcept;
        Iterator& operator=(Iterator&&) noexcept;

        // View valid until the next call.
        std::optional<std::string_view> next();

    private:
        friend class ExternalSorter;
        struct Impl;
        explicit Iterator(std::unique_ptr<Impl> impl);
        std::unique_ptr<Impl> impl_;
    };

    // No further add() calls afterwards.
    Iterator finish();

    uint64_t record_count() const { return records_; }
    size_t run_count() const { return runs_.size(); }

private:
    void spill();

    ExtSortConfig cfg_;
    std::vector<std::string> buffer_;
    uint64_t buffered_bytes_ = 0;
    uint64_t records_ = 0;
    std::vector<std::string> runs_;
    std::string tmp_base_;
};

// Collapses equal adjacent records of a sorted iterator.
class UniqueIterator {
public:
    explicit UniqueIterator(ExternalSorter::Iterator it) : it_(std::move(it)) {}

    // Second element is the multiplicity of the record.
    std::optional<std::pair<std::string_view, uint64_t>> next();

private:
    ExternalSorter::Iterator it_;
    std::string current_;
    std::string result_hold_;
    bool primed_ = false;
    bool done_ = false;
};

uint64_t count_distinct(ExternalSorter& sorter);

// |A ∩ B| over the distinct record sets of both sorters.
uint64_t count_common_distinct(ExternalSorter& a, ExternalSorter& b);

}  // namespace fbt
