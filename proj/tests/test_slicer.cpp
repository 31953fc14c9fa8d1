#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "fbt/errors.hpp"
#include "fbt/gzio.hpp"
#include "fbt/schema.hpp"
#include "fbt/slicer.hpp"
#include "fbt/util.hpp"
#include "test_helpers.hpp"

using namespace fbt;

namespace {

ParseOptions lenient() { return ParseOptions{false}; }

SliceOptions lenient_slices(int workers = 1) {
    SliceOptions opts;
    opts.parse.strict = false;
    opts.workers = workers;
    return opts;
}

// Normalized TSV rows over a handful of domains; deterministic per seed.
std::string synth_rows(uint64_t seed, size_t n) {
    std::mt19937_64 rng(seed);
    const std::vector<std::string> preds = {
        "/music.album.artist", "/music.album.genre", "/film.film.directed_by",
        "/people.person.parents", "/type.object.name", "/key.wikipedia.en",
        "http://www.w3.org/2000/01/rdf-schema#label",
    };
    std::string out;
    for (size_t i = 0; i < n; ++i) {
        out += "/m.0" + std::to_string(rng() % 5000);
        out += '\t';
        out += preds[rng() % preds.size()];
        out += '\t';
        if (rng() % 2) {
            out += "/m.0" + std::to_string(rng() % 5000);
        } else {
            out += "\"v" + std::to_string(rng() % 100) + "\"@en";
        }
        out += '\n';
    }
    return out;
}

std::map<std::string, uint64_t> count_by_predicate(const std::string& text) {
    std::map<std::string, uint64_t> counts;
    for (const auto& line : fbt::test::split_lines(text)) {
        if (line.empty()) continue;
        ParseOutcome out = parse_line(line, 1, lenient());
        if (out.ok()) counts[out.triple->predicate.value]++;
    }
    return counts;
}

std::vector<std::string> sorted_lines(const std::string& text) {
    auto lines = fbt::test::split_lines(text);
    std::erase(lines, "");
    std::sort(lines.begin(), lines.end());
    return lines;
}

}  // namespace

TEST_SUITE("slicer") {

TEST_CASE("histogram counts every predicate of every ok triple") {
    test::TempDir dir;
    std::string input = dir.file("in.tsv");
    test::write_file(input,
                     "/m.01\t/music.album.artist\t/m.02\n"
                     "/m.01\t/music.album.artist\t/m.03\n"
                     "/m.01\t/type.object.name\t\"x\"@en\n"
                     "broken line\n");
    HistogramOptions opts;
    opts.parse.strict = false;
    PredicateHistogram h = enumerate_predicates(input, opts);
    CHECK(h.total == 3);
    CHECK(h.entries.at("/music.album.artist").count == 2);
    CHECK(h.entries.at("/type.object.name").count == 1);
    CHECK(h.resource_for("/music.album.artist").kind == ResourceKind::SchemaPath);
    CHECK_THROWS_AS(h.resource_for("/absent.pred"), ContractError);
}

TEST_CASE("histogram spill path agrees with the in-memory path") {
    test::TempDir dir;
    std::string input = dir.file("in.tsv");
    test::write_file(input, synth_rows(3, 4000));
    HistogramOptions mem;
    mem.parse.strict = false;
    HistogramOptions spill = mem;
    spill.max_in_memory = 2;
    spill.tmp_dir = dir.path().string();
    PredicateHistogram a = enumerate_predicates(input, mem);
    PredicateHistogram b = enumerate_predicates(input, spill);
    CHECK(a.total == b.total);
    REQUIRE(a.entries.size() == b.entries.size());
    for (const auto& [value, entry] : a.entries) {
        CHECK(b.entries.at(value).count == entry.count);
        CHECK(b.entries.at(value).kind == entry.kind);
    }
    CHECK(count_by_predicate(test::read_file(input)) ==
          std::map<std::string, uint64_t>{[&] {
              std::map<std::string, uint64_t> m;
              for (const auto& [value, entry] : a.entries) m[value] = entry.count;
              return m;
          }()});
}

TEST_CASE("plans order slices by falling count, ties by selector") {
    PredicateHistogram h;
    h.entries["/music.album.artist"] = {ResourceKind::SchemaPath, 10};
    h.entries["/music.album.genre"] = {ResourceKind::SchemaPath, 5};
    h.entries["/film.film.genre"] = {ResourceKind::SchemaPath, 15};
    h.entries["/book.book.author"] = {ResourceKind::SchemaPath, 15};
    h.total = 45;

    SlicePlan domains = build_slice_plan(h, Granularity::Domain);
    REQUIRE(domains.specs.size() == 3);
    CHECK(domains.specs[0].selector == "book");
    CHECK(domains.specs[1].selector == "film");
    CHECK(domains.specs[2].selector == "music");
    CHECK(domains.specs[2].expected_count == 15);

    SlicePlan preds = build_slice_plan(h, Granularity::Predicate);
    REQUIRE(preds.specs.size() == 4);
    CHECK(preds.specs[0].selector == "/book.book.author");
    CHECK(preds.specs[1].selector == "/film.film.genre");
    CHECK(preds.specs[0].kind == SelectorKind::Predicate);
}

TEST_CASE("plan tsv round-trips and keeps the user's order") {
    test::TempDir dir;
    SlicePlan plan;
    plan.granularity = Granularity::Domain;
    plan.specs.push_back({SelectorKind::Domain, "music", 10});
    plan.specs.push_back({SelectorKind::Predicate, "/type.object.name", 4});
    plan.specs.push_back({SelectorKind::Predicate,
                          "http://www.w3.org/2000/01/rdf-schema#label", 2});
    std::string path = dir.file("plan.tsv");
    write_plan_tsv(plan, path);
    SlicePlan back = read_plan_tsv(path);
    REQUIRE(back.specs.size() == 3);
    for (size_t i = 0; i < 3; ++i) {
        CHECK(back.specs[i].selector == plan.specs[i].selector);
        CHECK(back.specs[i].kind == plan.specs[i].kind);
        CHECK(back.specs[i].expected_count == plan.specs[i].expected_count);
    }
}

TEST_CASE("plan tsv accepts comments and rejects duplicates and bad counts") {
    test::TempDir dir;
    std::string path = dir.file("plan.tsv");
    test::write_file(path, "# comment\n\nmusic\t5\nfilm\t3\n");
    SlicePlan plan = read_plan_tsv(path);
    REQUIRE(plan.specs.size() == 2);
    CHECK(plan.specs[0].selector == "music");
    CHECK(plan.specs[0].kind == SelectorKind::Domain);

    test::write_file(path, "music\t5\nmusic\t3\n");
    CHECK_THROWS_AS(read_plan_tsv(path), ContractError);
    test::write_file(path, "music\tnot_a_number\n");
    CHECK_THROWS_AS(read_plan_tsv(path), ContractError);
}

TEST_CASE("slicing partitions the input exactly, residual included") {
    test::TempDir dir;
    std::string input = dir.file("in.tsv");
    std::string text = synth_rows(5, 3000);
    test::write_file(input, text);

    SlicePlan plan;
    plan.granularity = Granularity::Domain;
    plan.specs.push_back({SelectorKind::Domain, "music", 0});
    plan.specs.push_back({SelectorKind::Domain, "film", 0});
    plan.specs.push_back({SelectorKind::Predicate, "/type.object.name", 0});

    std::string sink = dir.file("slices");
    SliceRunResult run = slice_stream(input, plan, sink, lenient_slices());

    REQUIRE(run.manifests.size() == 4);
    CHECK(run.manifests.back().kind == SelectorKind::Residual);
    CHECK(run.manifests.back().selector == "__residual__");
    CHECK(run.slice_total() == run.counters.ok);

    // concatenation of all slices equals the input as a multiset
    std::string all;
    for (const auto& m : run.manifests) all += test::read_file(sink + "/" + m.file);
    CHECK(sorted_lines(all) == sorted_lines(text));

    // each slice holds exactly its own predicates
    auto music = count_by_predicate(test::read_file(sink + "/" + run.find("music")->file));
    CHECK(!music.empty());
    for (const auto& [pred, n] : music) CHECK(domain_of(normalize_iri(pred)) == "music");
}

TEST_CASE("first matching plan entry claims the triple") {
    test::TempDir dir;
    std::string input = dir.file("in.tsv");
    test::write_file(input, "/m.01\t/music.album.artist\t/m.02\n");

    SlicePlan exact_first;
    exact_first.specs.push_back({SelectorKind::Predicate, "/music.album.artist", 0});
    exact_first.specs.push_back({SelectorKind::Domain, "music", 0});
    SliceRunResult a = slice_stream(input, exact_first, dir.file("a"), lenient_slices());
    CHECK(a.find("/music.album.artist")->triple_count == 1);
    CHECK(a.find("music")->triple_count == 0);

    SlicePlan domain_first;
    domain_first.specs.push_back({SelectorKind::Domain, "music", 0});
    domain_first.specs.push_back({SelectorKind::Predicate, "/music.album.artist", 0});
    SliceRunResult b = slice_stream(input, domain_first, dir.file("b"), lenient_slices());
    CHECK(b.find("music")->triple_count == 1);
    CHECK(b.find("/music.album.artist")->triple_count == 0);
}

TEST_CASE("worker count does not change a single byte of output") {
    test::TempDir dir;
    std::string input = dir.file("in.tsv");
    std::string text;
    while (text.size() < (5u << 20)) text += synth_rows(text.size() + 1, 20000);
    test::write_file(input, text);

    SlicePlan plan;
    plan.specs.push_back({SelectorKind::Domain, "music", 0});
    plan.specs.push_back({SelectorKind::Domain, "film", 0});
    plan.specs.push_back({SelectorKind::Domain, "people", 0});

    SliceRunResult one = slice_stream(input, plan, dir.file("w1"), lenient_slices(1));
    SliceRunResult four = slice_stream(input, plan, dir.file("w4"), lenient_slices(4));

    REQUIRE(one.manifests.size() == four.manifests.size());
    for (size_t i = 0; i < one.manifests.size(); ++i) {
        CHECK(one.manifests[i].file == four.manifests[i].file);
        CHECK(one.manifests[i].triple_count == four.manifests[i].triple_count);
        CHECK(one.manifests[i].byte_count == four.manifests[i].byte_count);
        CHECK(one.manifests[i].checksum == four.manifests[i].checksum);
        CHECK(test::read_file(dir.file("w1") + "/" + one.manifests[i].file) ==
              test::read_file(dir.file("w4") + "/" + four.manifests[i].file));
    }
    CHECK(four.counters.ok == one.counters.ok);
}

TEST_CASE("gzip input slices identically to its plain twin") {
    test::TempDir dir;
    std::string text = synth_rows(9, 2000);
    std::string plain = dir.file("in.tsv");
    test::write_file(plain, text);
    std::string gz = dir.file("in.tsv.gz");
    {
        auto sink = open_line_sink(gz, true);
        for (const auto& line : test::split_lines(text)) {
            if (!line.empty()) sink->write_line(line);
        }
        sink->close();
    }
    SlicePlan plan;
    plan.specs.push_back({SelectorKind::Domain, "music", 0});
    SliceRunResult a = slice_stream(plain, plan, dir.file("a"), lenient_slices(4));
    SliceRunResult b = slice_stream(gz, plan, dir.file("b"), lenient_slices(4));
    REQUIRE(a.manifests.size() == b.manifests.size());
    for (size_t i = 0; i < a.manifests.size(); ++i) {
        CHECK(a.manifests[i].checksum == b.manifests[i].checksum);
        CHECK(a.manifests[i].triple_count == b.manifests[i].triple_count);
    }
}

TEST_CASE("manifest checksums match the file bytes") {
    test::TempDir dir;
    std::string input = dir.file("in.tsv");
    test::write_file(input, synth_rows(21, 500));
    SlicePlan plan;
    plan.specs.push_back({SelectorKind::Domain, "music", 0});
    SliceRunResult run = slice_stream(input, plan, dir.file("s"), lenient_slices());
    for (const auto& m : run.manifests) {
        std::string bytes = test::read_file(dir.file("s") + "/" + m.file);
        CHECK(m.checksum == to_hex(fnv1a64(bytes)));
        CHECK(m.byte_count == bytes.size());
    }
}

TEST_CASE("a tiny open-file cap still produces correct slices") {
    test::TempDir dir;
    std::string input = dir.file("in.tsv");
    std::string text = synth_rows(33, 3000);
    test::write_file(input, text);
    SlicePlan plan;
    for (const char* d : {"music", "film", "people", "type", "key"}) {
        plan.specs.push_back({SelectorKind::Domain, d, 0});
    }
    SliceOptions opts = lenient_slices();
    opts.open_file_cap = 2;
    SliceRunResult run = slice_stream(input, plan, dir.file("s"), opts);
    CHECK(run.slice_total() == run.counters.ok);
    std::string all;
    for (const auto& m : run.manifests) all += test::read_file(dir.file("s") + "/" + m.file);
    CHECK(sorted_lines(all) == sorted_lines(text));
}

TEST_CASE("planned slices exist even when nothing matches") {
    test::TempDir dir;
    std::string input = dir.file("in.tsv");
    test::write_file(input, "/m.01\t/music.album.artist\t/m.02\n");
    SlicePlan plan;
    plan.specs.push_back({SelectorKind::Domain, "aviation", 0});
    SliceRunResult run = slice_stream(input, plan, dir.file("s"), lenient_slices());
    const SliceManifest* m = run.find("aviation");
    REQUIRE(m != nullptr);
    CHECK(m->triple_count == 0);
    CHECK(test::read_file(dir.file("s") + "/" + m->file).empty());
    CHECK(m->checksum == to_hex(kFnvOffset));
}

TEST_CASE("slice file names are sanitized and deduplicated") {
    test::TempDir dir;
    std::string input = dir.file("in.tsv");
    test::write_file(input, "/m.01\t/music.album.artist\t/m.02\n");
    SlicePlan plan;
    plan.specs.push_back({SelectorKind::Predicate,
                          "http://www.w3.org/2000/01/rdf-schema#label", 0});
    plan.specs.push_back({SelectorKind::Domain, "rdf-schema#label", 0});
    SliceRunResult run = slice_stream(input, plan, dir.file("s"), lenient_slices());
    REQUIRE(run.manifests.size() == 3);
    CHECK(run.manifests[0].file != run.manifests[1].file);
    for (const auto& m : run.manifests) {
        CHECK(m.file.find('#') == std::string::npos);
        CHECK(m.file.find(':') == std::string::npos);
        CHECK(m.file.find('/') == std::string::npos);
    }
}

TEST_CASE("identifier extraction yields the five fixed slices plus residual") {
    test::TempDir dir;
    std::string input = dir.file("in.tsv");
    test::write_file(input,
                     "/m.01\t/type.object.name\t\"A\"@en\n"
                     "/m.01\t/type.object.type\t/music.artist\n"
                     "/m.01\t/type.object.key\t\"/wikipedia/en/A\"\n"
                     "/m.01\t/common.topic.description\t\"About A\"@en\n"
                     "/m.01\t/common.topic.alias\t\"Ay\"@en\n"
                     "/m.01\t/music.album.artist\t/m.02\n"
                     "/m.02\t/type.object.name\t\"B\"@en\n");
    SliceRunResult run = extract_identifier_slices(input, dir.file("ids"), lenient_slices());
    REQUIRE(run.manifests.size() == 6);
    CHECK(run.find("/type.object.name")->file == "name.tsv");
    CHECK(run.find("/type.object.name")->triple_count == 2);
    CHECK(run.find("/type.object.name")->predicate == "/type.object.name");
    CHECK(run.find("/type.object.type")->file == "type.tsv");
    CHECK(run.find("/type.object.key")->file == "keys.tsv");
    CHECK(run.find("/common.topic.description")->file == "desc.tsv");
    CHECK(run.find("/common.topic.alias")->file == "akas.tsv");
    CHECK(run.manifests.back().triple_count == 1);

    auto name_preds = count_by_predicate(test::read_file(dir.file("ids") + "/name.tsv"));
    CHECK(name_preds.size() == 1);
    CHECK(name_preds.begin()->first == "/type.object.name");
}

}
