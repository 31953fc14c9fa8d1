#include <doctest.h>

#include "fbt/errors.hpp"
#include "fbt/schema.hpp"
#include "test_helpers.hpp"

using namespace fbt;

TEST_SUITE("schema") {

TEST_CASE("identifier predicates come in a fixed order") {
    auto ids = known::identifier_predicates();
    REQUIRE(ids.size() == 5);
    CHECK(ids[0] == known::name);
    CHECK(ids[1] == known::type);
    CHECK(ids[2] == known::key);
    CHECK(ids[3] == known::description);
    CHECK(ids[4] == known::alias);
}

TEST_CASE("schema paths decompose by depth") {
    SchemaPath d = parse_schema_path("/music");
    CHECK(d.depth == PathDepth::Domain);
    CHECK(d.domain == "music");
    CHECK(d.render() == "/music");

    SchemaPath t = parse_schema_path("/music.album");
    CHECK(t.depth == PathDepth::Type);
    CHECK(t.type == "album");
    CHECK(t.render() == "/music.album");

    SchemaPath p = parse_schema_path("/music.album.artist");
    CHECK(p.depth == PathDepth::Property);
    CHECK(p.property == "artist");
    CHECK(!p.compound_tail);
    CHECK(p.render() == "/music.album.artist");
}

TEST_CASE("deep user trees keep their tail whole") {
    SchemaPath p = parse_schema_path("/user.alice.default_domain.topic.note");
    CHECK(p.depth == PathDepth::Property);
    CHECK(p.domain == "user");
    CHECK(p.type == "alice");
    CHECK(p.property == "default_domain.topic.note");
    CHECK(p.compound_tail);
    CHECK(p.render() == "/user.alice.default_domain.topic.note");
}

TEST_CASE("mids and gids are rejected as schema paths") {
    CHECK_THROWS_AS(parse_schema_path("/m.0chgzm"), ContractError);
    CHECK_THROWS_AS(parse_schema_path(Resource{ResourceKind::Gid, "/g.11x"}), ContractError);
    CHECK_THROWS_AS(parse_schema_path(""), ContractError);
}

TEST_CASE("classification routes predicates into the standard groups") {
    auto cls = [](std::string_view path) {
        return classify_predicate(normalize_iri(path));
    };
    CHECK(cls("/type.object.name").group == PredicateGroup::Implementation);
    CHECK(cls("/common.topic.description").group == PredicateGroup::Implementation);
    CHECK(cls("/music.album.artist") == PredicateClass{PredicateGroup::SubjectMatter, "music"});
    CHECK(cls("/key.wikipedia.en").group == PredicateGroup::KeyNamespace);
    CHECK(cls(known::owl_label) == PredicateClass{PredicateGroup::Owl, "label"});
    CHECK(cls(known::owl_type) == PredicateClass{PredicateGroup::Owl, "type"});
    CHECK(cls("http://example.org/custom").group == PredicateGroup::Unknown);
    CHECK(classify_predicate(Resource{ResourceKind::Mid, "/m.01"}).group ==
          PredicateGroup::Unknown);
}

TEST_CASE("key namespace folds into implementation for stats") {
    CHECK(stats_group(PredicateGroup::KeyNamespace) == PredicateGroup::Implementation);
    CHECK(stats_group(PredicateGroup::SubjectMatter) == PredicateGroup::SubjectMatter);
    CHECK(stats_group(PredicateGroup::Owl) == PredicateGroup::Owl);
}

TEST_CASE("domain_of reads the first segment or the w3c tail") {
    CHECK(domain_of(normalize_iri("/music.album.artist")) == "music");
    CHECK(domain_of(normalize_iri("/type.object.name")) == "type");
    CHECK(domain_of(normalize_iri("/key.en.x")) == "key");
    CHECK(domain_of(normalize_iri(known::owl_label)) == "rdf-schema#label");
    CHECK(domain_of(normalize_iri(known::owl_type)) == "22-rdf-syntax-ns#type");
    CHECK(domain_of(normalize_iri("http://example.org/other")) == kUnknownDomain);
    CHECK(domain_of(Resource{ResourceKind::Mid, "/m.01"}) == kUnknownDomain);
}

TEST_CASE("classification table loads overrides and keeps a fallback") {
    test::TempDir dir;
    std::string path = dir.file("groups.tsv");
    test::write_file(path,
                     "# override\n"
                     "implementation\tcommon\n"
                     "implementation\tmeasurement_unit\n"
                     "subject_matter\tmusic\n");
    ClassificationTable t = ClassificationTable::load(path);
    CHECK(t.is_implementation_domain("measurement_unit"));
    CHECK(t.is_implementation_domain("common"));
    CHECK(!t.is_implementation_domain("music"));
    CHECK(classify_predicate(normalize_iri("/measurement_unit.dated_integer.number"), t).group ==
          PredicateGroup::Implementation);

    std::string empty = dir.file("empty.tsv");
    test::write_file(empty, "# nothing\n");
    ClassificationTable fallback = ClassificationTable::load(empty);
    CHECK(fallback.is_implementation_domain("type"));
    CHECK(fallback.implementation_domains().size() == 11);
}

TEST_CASE("standard table carries eleven implementation domains") {
    ClassificationTable t = ClassificationTable::standard();
    CHECK(t.implementation_domains().size() == 11);
    for (const char* d : {"common", "type", "key", "kg", "base", "freebase", "dataworld",
                          "topic_server", "user", "pipeline", "kp_lw"}) {
        CHECK(t.is_implementation_domain(d));
    }
    CHECK(!t.is_implementation_domain("music"));
}

}
