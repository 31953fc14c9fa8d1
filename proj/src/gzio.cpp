#include "fbt/gzio.hpp"

#include <zlib.h>

#include <cstdio>
#include <cstring>
#include <vector>

#include "fbt/errors.hpp"

namespace fbt {

namespace {

constexpr size_t kReadChunk = 1 << 20;

class GzLineSource final : public LineSource {
public:
    explicit GzLineSource(const std::string& path) : path_(path) {
        compressed_ = file_is_gzip(path);
        file_ = gzopen(path.c_str(), "rb");
        if (!file_) throw IoError("cannot open " + path);
        gzbuffer(file_, 256 * 1024);
        buf_.resize(kReadChunk);
    }

    ~GzLineSource() override {
        if (file_) gzclose(file_);
    }

    std::optional<std::string_view> next_line() override {
        line_.clear();
        while (true) {
            if (pos_ == len_) {
                if (!fill()) break;
            }
            const char* start = buf_.data() + pos_;
            const char* nl = static_cast<const char*>(memchr(start, '\n', len_ - pos_));
            if (nl) {
                size_t n = static_cast<size_t>(nl - start);
                if (line_.empty()) {
                    pos_ += n + 1;
                    return std::string_view(start, n);
                }
                line_.append(start, n);
                pos_ += n + 1;
                return std::string_view(line_);
            }
            line_.append(start, len_ - pos_);
            pos_ = len_;
        }
        if (!line_.empty()) {
            pending_eof_ = true;
            return std::string_view(line_);
        }
        return std::nullopt;
    }

    uint64_t byte_offset() const override { return offset_; }
    bool compressed() const override { return compressed_; }

private:
    bool fill() {
        if (pending_eof_) return false;
        int n = gzread(file_, buf_.data(), static_cast<unsigned>(buf_.size()));
        if (n < 0) {
            int errnum = 0;
            const char* msg = gzerror(file_, &errnum);
            throw IoError(path_ + ": read error at byte " + std::to_string(offset_) +
                          ": " + (msg ? msg : "unknown"));
        }
        if (n == 0) return false;
        pos_ = 0;
        len_ = static_cast<size_t>(n);
        offset_ += static_cast<uint64_t>(n);
        return true;
    }

    std::string path_;
    gzFile file_ = nullptr;
    std::vector<char> buf_;
    size_t pos_ = 0, len_ = 0;
    uint64_t offset_ = 0;
    std::string line_;  // spill for lines crossing chunk boundaries
    bool compressed_ = false;
    bool pending_eof_ = false;
};

class PlainSink final : public LineSink {
public:
    explicit PlainSink(const std::string& path) : path_(path) {
        f_ = fopen(path.c_str(), "wb");
        if (!f_) throw IoError("cannot open " + path + " for writing");
        setvbuf(f_, nullptr, _IOFBF, 1 << 20);
    }

    ~PlainSink() override {
        if (f_) fclose(f_);
    }

    void write(std::string_view data) override {
        if (fwrite(data.data(), 1, data.size(), f_) != data.size())
            throw IoError("short write to " + path_);
        bytes_ += data.size();
    }

    void write_line(std::string_view line) override {
        write(line);
        write("\n");
    }

    void close() override {
        if (!f_) return;
        if (fclose(f_) != 0) {
            f_ = nullptr;
            throw IoError("close failed for " + path_);
        }
        f_ = nullptr;
    }

    uint64_t bytes_written() const override { return bytes_; }

private:
    std::string path_;
    FILE* f_ = nullptr;
    uint64_t bytes_ = 0;
};

class GzSink final : public LineSink {
public:
    explicit GzSink(const std::string& path) : path_(path) {
        // "wb6" pins the compression level; determinism requires it.
        f_ = gzopen(path.c_str(), "wb6");
        if (!f_) throw IoError("cannot open " + path + " for writing");
        gzbuffer(f_, 256 * 1024);
    }

    ~GzSink() override {
        if (f_) gzclose(f_);
    }

    void write(std::string_view data) override {
        if (data.empty()) return;
        if (gzwrite(f_, data.data(), static_cast<unsigned>(data.size())) <= 0)
            throw IoError("gzwrite failed for " + path_);
        bytes_ += data.size();
    }

    void write_line(std::string_view line) override {
        write(line);
        write("\n");
    }

    void close() override {
        if (!f_) return;
        int rc = gzclose(f_);
        f_ = nullptr;
        if (rc != Z_OK) throw IoError("gzclose failed for " + path_);
    }

    uint64_t bytes_written() const override { return bytes_; }

private:
    std::string path_;
    gzFile f_ = nullptr;
    uint64_t bytes_ = 0;  // uncompressed payload size
};

}  // namespace

bool file_is_gzip(const std::string& path) {
    FILE* f = fopen(path.c_str(), "rb");
    if (!f) throw IoError("cannot open " + path);
    unsigned char magic[2] = {0, 0};
    size_t n = fread(magic, 1, 2, f);
    fclose(f);
    return n == 2 && magic[0] == 0x1f && magic[1] == 0x8b;
}

std::unique_ptr<LineSource> open_line_source(const std::string& path) {
    return std::make_unique<GzLineSource>(path);
}

std::unique_ptr<LineSink> open_line_sink(const std::string& path, bool gzip) {
    if (gzip) return std::make_unique<GzSink>(path);
    return std::make_unique<PlainSink>(path);
}

}  // namespace fbt
