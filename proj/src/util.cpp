#include "fbt/util.hpp"

#include <cinttypes>
#include <cstdio>

namespace fbt {

std::string to_hex(uint64_t v) {
    char buf[17];
    snprintf(buf, sizeof(buf), "%016" PRIx64, v);
    return std::string(buf);
}

std::string format_percent(double pct) {
    char buf[32];
    snprintf(buf, sizeof(buf), "%.3f", pct);
    return std::string(buf);
}

std::string format_bytes(uint64_t bytes) {
    static constexpr const char* units[] = {"B", "KiB", "MiB", "GiB", "TiB"};
    double v = static_cast<double>(bytes);
    size_t u = 0;
    while (v >= 1024.0 && u + 1 < sizeof(units) / sizeof(units[0])) {
        v /= 1024.0;
        ++u;
    }
    char buf[32];
    if (u == 0) {
        snprintf(buf, sizeof(buf), "%" PRIu64 " B", bytes);
    } else {
        snprintf(buf, sizeof(buf), "%.1f %s", v, units[u]);
    }
    return std::string(buf);
}

}  // namespace fbt
