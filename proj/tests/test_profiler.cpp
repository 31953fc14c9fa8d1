#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "fbt/errors.hpp"
#include "fbt/profiler.hpp"
#include "test_helpers.hpp"

using namespace fbt;

namespace {

SliceManifest domain_manifest(const std::string& selector, uint64_t count) {
    SliceManifest m;
    m.kind = SelectorKind::Domain;
    m.selector = selector;
    m.file = selector + ".tsv";
    m.triple_count = count;
    return m;
}

ExtSortConfig sort_in(const test::TempDir& dir) {
    ExtSortConfig cfg;
    cfg.tmp_dir = dir.path().string();
    return cfg;
}

}  // namespace

TEST_SUITE("profiler") {

TEST_CASE("stats rows group, order, and percent correctly") {
    std::vector<SliceManifest> manifests = {
        domain_manifest("music", 50),
        domain_manifest("film", 30),
        domain_manifest("common", 20),
    };
    auto rows = domain_stats(manifests);
    REQUIRE(rows.size() == 3);

    CHECK(rows[0].selector == "common");
    CHECK(rows[0].group == PredicateGroup::Implementation);
    CHECK(rows[0].name == "Common");
    CHECK(rows[0].percent_of_all == doctest::Approx(20.0));
    CHECK(rows[0].percent_of_group == doctest::Approx(100.0));

    CHECK(rows[1].selector == "music");
    CHECK(rows[1].group == PredicateGroup::SubjectMatter);
    CHECK(rows[1].percent_of_all == doctest::Approx(50.0));
    CHECK(rows[1].percent_of_group == doctest::Approx(62.5));

    CHECK(rows[2].selector == "film");
    CHECK(rows[2].percent_of_group == doctest::Approx(37.5));
}

TEST_CASE("owl and residual slices land in their own groups") {
    SliceManifest owl = domain_manifest("rdf-schema#label", 10);
    SliceManifest residual;
    residual.kind = SelectorKind::Residual;
    residual.selector = "__residual__";
    residual.triple_count = 5;
    SliceManifest key = domain_manifest("key", 10);

    auto rows = domain_stats({owl, residual, key});
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].selector == "key");
    CHECK(rows[0].group == PredicateGroup::Implementation);
    CHECK(rows[1].selector == "rdf-schema#label");
    CHECK(rows[1].group == PredicateGroup::Owl);
    CHECK(rows[2].selector == "__residual__");
    CHECK(rows[2].group == PredicateGroup::Unknown);
}

TEST_CASE("predicate slices classify through the predicate table") {
    SliceManifest m;
    m.kind = SelectorKind::Predicate;
    m.selector = "/music.album.artist";
    m.triple_count = 4;
    SliceManifest n;
    n.kind = SelectorKind::Predicate;
    n.selector = "/type.object.name";
    n.triple_count = 6;
    auto rows = domain_stats({m, n});
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].selector == "/type.object.name");
    CHECK(rows[0].group == PredicateGroup::Implementation);
    CHECK(rows[1].group == PredicateGroup::SubjectMatter);
}

TEST_CASE("display names read like headings") {
    auto rows = domain_stats({domain_manifest("american_football", 1)});
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].name == "American football");
}

TEST_CASE("top_coverage sums the k largest shares") {
    std::vector<SliceManifest> manifests;
    for (uint64_t c : {40, 30, 20, 10}) {
        manifests.push_back(domain_manifest("d" + std::to_string(c), c));
    }
    auto rows = domain_stats(manifests);
    CHECK(top_coverage(rows, 2) == doctest::Approx(70.0));
    CHECK(top_coverage(rows, 10) == doctest::Approx(100.0));
    CHECK(top_coverage(rows, 0) == doctest::Approx(0.0));
}

TEST_CASE("unique position counts match set oracles") {
    test::TempDir dir;
    std::mt19937_64 rng(23);
    std::string text;
    std::set<std::string> subjects, predicates, objects;
    for (int i = 0; i < 4000; ++i) {
        std::string s = "/m.0" + std::to_string(rng() % 800);
        std::string p = (rng() % 2) ? "/music.album.artist" : "/music.album.genre";
        std::string o = (rng() % 2) ? "/m.0" + std::to_string(rng() % 800)
                                    : "\"v" + std::to_string(rng() % 50) + "\"@en";
        text += s + "\t" + p + "\t" + o + "\n";
        subjects.insert(s);
        predicates.insert(p);
        objects.insert(o);
    }
    std::string slice = dir.file("slice.tsv");
    test::write_file(slice, text);
    PositionCardinality card = unique_position_counts(slice, sort_in(dir));
    CHECK(card.unique_subjects == subjects.size());
    CHECK(card.unique_predicates == predicates.size());
    CHECK(card.unique_objects == objects.size());
}

TEST_CASE("topic estimate counts distinct mid and gid subjects") {
    test::TempDir dir;
    std::string slice = dir.file("name.tsv");
    test::write_file(slice,
                     "/m.01\t/type.object.name\t\"A\"@en\n"
                     "/m.01\t/type.object.name\t\"A\"@fr\n"
                     "/m.02\t/type.object.name\t\"B\"@en\n"
                     "/g.11x\t/type.object.name\t\"C\"@en\n"
                     "/music.genre\t/type.object.name\t\"Genre\"@en\n");
    TopicEstimate est = estimate_topics(slice, sort_in(dir));
    CHECK(est.mid_subjects == 2);
    CHECK(est.gid_subjects == 1);
    CHECK(est.other_subjects == 1);
    CHECK(est.topics == 3);
}

TEST_CASE("topic estimate rejects a slice with foreign predicates") {
    test::TempDir dir;
    std::string slice = dir.file("bad.tsv");
    test::write_file(slice,
                     "/m.01\t/type.object.name\t\"A\"@en\n"
                     "/m.01\t/type.object.type\t/music.artist\n");
    CHECK_THROWS_AS(estimate_topics(slice, sort_in(dir)), ContractError);
}

TEST_CASE("empty manifests produce no rows and zero coverage") {
    auto rows = domain_stats({});
    CHECK(rows.empty());
    CHECK(top_coverage(rows, 10) == doctest::Approx(0.0));
}

}
