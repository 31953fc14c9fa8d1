#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace fbt {

// Reads \n-terminated lines from a plain or gzip-compressed file. Gzip is
// detected by the 1f 8b magic bytes, never by extension.
class LineSource {
public:
    virtual ~LineSource() = default;

    // The returned view is valid until the next call. nullopt at EOF.
    // A final line without trailing newline is still yielded.
    virtual std::optional<std::string_view> next_line() = 0;

    virtual uint64_t byte_offset() const = 0;
    virtual bool compressed() const = 0;
};

std::unique_ptr<LineSource> open_line_source(const std::string& path);

bool file_is_gzip(const std::string& path);

// Line-oriented writer, optionally gzip-compressing. Compression settings
// are fixed so identical content always produces identical bytes.
class LineSink {
public:
    virtual ~LineSink() = default;
    virtual void write(std::string_view data) = 0;
    virtual void write_line(std::string_view line) = 0;
    virtual void close() = 0;  // flushes; throws IoError on failure
    virtual uint64_t bytes_written() const = 0;
};

std::unique_ptr<LineSink> open_line_sink(const std::string& path, bool gzip);

}  // namespace fbt
