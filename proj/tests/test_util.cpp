#include <doctest.h>

#include "fbt/util.hpp"

using namespace fbt;

TEST_SUITE("util") {

TEST_CASE("to_hex pads to sixteen digits") {
    CHECK(to_hex(0) == "0000000000000000");
    CHECK(to_hex(0xdeadbeefull) == "00000000deadbeef");
    CHECK(to_hex(~0ull) == "ffffffffffffffff");
}

TEST_CASE("fnv1a64 matches reference vectors") {
    CHECK(fnv1a64("") == kFnvOffset);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("fnv1a64 chains incrementally") {
    uint64_t whole = fnv1a64("hello world");
    uint64_t chained = fnv1a64(" world", fnv1a64("hello"));
    CHECK(whole == chained);
}

TEST_CASE("format_percent keeps three decimals") {
    CHECK(format_percent(45.658) == "45.658");
    CHECK(format_percent(100.0) == "100.000");
    CHECK(format_percent(0.0004) == "0.000");
    CHECK(format_percent(16.3116) == "16.312");
    CHECK(format_percent(16.3114) == "16.311");
}

TEST_CASE("format_bytes picks a readable unit") {
    CHECK(format_bytes(512) == "512 B");
    CHECK(format_bytes(2048) == "2.0 KiB");
    CHECK(format_bytes(5ull << 20) == "5.0 MiB");
    CHECK(format_bytes(3ull << 30) == "3.0 GiB");
}

}
