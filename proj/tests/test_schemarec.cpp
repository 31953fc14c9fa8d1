#include <doctest.h>

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "fbt/errors.hpp"
#include "fbt/schemarec.hpp"
#include "test_helpers.hpp"

using namespace fbt;

namespace {

std::vector<SchemaPath> paths(const std::vector<std::string>& rendered) {
    std::vector<SchemaPath> out;
    for (const auto& r : rendered) out.push_back(parse_schema_path(r));
    return out;
}

std::vector<std::string> rendered(const std::vector<SchemaPath>& ps) {
    std::vector<std::string> out;
    for (const auto& p : ps) out.push_back(p.render());
    return out;
}

}  // namespace

TEST_SUITE("schemarec") {

TEST_CASE("backward hop strips the last segment and dedupes") {
    auto types = infer_types_from_properties(paths({
        "/bicycles.bicycle_model.manufacturer",
        "/bicycles.bicycle_model.speeds",
        "/bicycles.bicycle_model.bicycle_type",
        "/bicycles.bicycle_manufacturer.bicycle_models",
        "/bicycles.bicycle_type.bicycle_models_of_this_type",
    }));
    CHECK(rendered(types) == std::vector<std::string>{
                                 "/bicycles.bicycle_manufacturer",
                                 "/bicycles.bicycle_model",
                                 "/bicycles.bicycle_type",
                             });
}

TEST_CASE("backward hop needs property depth") {
    CHECK(infer_types_from_properties({}).empty());
    CHECK_THROWS_AS(infer_types_from_properties(paths({"/bicycles.bicycle_model"})),
                    ContractError);
}

TEST_CASE("deep property tails hop to their type prefix") {
    auto types = infer_types_from_properties(paths({"/user.alice.default_domain.topic.note"}));
    REQUIRE(types.size() == 1);
    CHECK(types[0].render() == "/user.alice.default_domain.topic");
}

TEST_CASE("reconstruction finds properties, hop types, and declared types") {
    test::TempDir dir;
    std::string domain = dir.file("bikes.tsv");
    test::write_file(domain,
                     "/m.01\t/bikes.model.maker\t/m.02\n"
                     "/m.01\t/bikes.model.year\t\"1990\"\n"
                     "/m.03\t/bikes.maker.models\t/m.01\n"
                     "/m.01\t/bikes.model.maker\t/m.04\n");
    std::string types = dir.file("type.tsv");
    test::write_file(types,
                     "/m.01\t/type.object.type\t/bikes.collection\n"
                     "/m.09\t/type.object.type\t/aviation.aircraft\n");

    SchemaSources sources;
    sources.domain_slice = domain;
    sources.type_slice = types;
    sources.target_domain = "bikes";

    DomainSchema schema = reconstruct_schema(sources);
    CHECK(schema.domain == "bikes");
    CHECK(schema.source_triple_count == 4);
    CHECK(!schema.empty_input);
    std::vector<std::string> props;
    for (const auto& p : schema.properties) props.push_back(p.path.render());
    CHECK(props == std::vector<std::string>{"/bikes.maker.models", "/bikes.model.maker",
                                            "/bikes.model.year"});
    std::vector<std::string> tys;
    for (const auto& t : schema.types) tys.push_back(t.path.render());
    CHECK(tys == std::vector<std::string>{"/bikes.collection", "/bikes.maker",
                                          "/bikes.model"});
}

TEST_CASE("empty domain slice flags empty input instead of failing") {
    test::TempDir dir;
    std::string domain = dir.file("empty.tsv");
    test::write_file(domain, "");
    SchemaSources sources;
    sources.domain_slice = domain;
    sources.target_domain = "ghost";
    DomainSchema schema = reconstruct_schema(sources);
    CHECK(schema.empty_input);
    CHECK(schema.types.empty());
    CHECK(schema.properties.empty());
    CHECK(render_schema_text(schema).find("empty input") != std::string::npos);
}

TEST_CASE("a mixed-domain slice is rejected with the offending line") {
    test::TempDir dir;
    std::string domain = dir.file("mixed.tsv");
    test::write_file(domain,
                     "/m.01\t/bikes.model.maker\t/m.02\n"
                     "/m.01\t/aviation.aircraft.engine\t/m.05\n");
    SchemaSources sources;
    sources.domain_slice = domain;
    CHECK_THROWS_WITH_AS(reconstruct_schema(sources),
                         doctest::Contains("line 2"), ContractError);
}

TEST_CASE("the target domain defaults to the slice's first predicate") {
    test::TempDir dir;
    std::string domain = dir.file("bikes.tsv");
    test::write_file(domain, "/m.01\t/bikes.model.maker\t/m.02\n");
    SchemaSources sources;
    sources.domain_slice = domain;
    DomainSchema schema = reconstruct_schema(sources);
    CHECK(schema.domain == "bikes");
}

TEST_CASE("metadata resolves through both the path and the mid") {
    test::TempDir dir;
    std::string domain = dir.file("bikes.tsv");
    test::write_file(domain, "/m.01\t/bikes.model.kind\t/m.02\n");
    std::string names = dir.file("name.tsv");
    test::write_file(names,
                     "/bikes.model.kind\t/type.object.name\t\"Bike kind\"@en\n"
                     "/m.77\t/type.object.name\t\"Model\"@en\n");
    std::string descs = dir.file("desc.tsv");
    test::write_file(descs,
                     "/m.55\t/common.topic.description\t\"What kind of bike\"@en\n");
    std::string types = dir.file("type.tsv");
    test::write_file(types,
                     "/bikes.model.kind\t/type.object.type\t/m.55\n"
                     "/bikes.model\t/type.object.type\t/m.77\n");

    SchemaSources sources;
    sources.domain_slice = domain;
    sources.name_slice = names;
    sources.desc_slice = descs;
    sources.type_slice = types;
    DomainSchema schema = reconstruct_schema(sources);

    REQUIRE(schema.properties.size() == 1);
    const SchemaMetadata& prop = schema.properties[0].meta;
    CHECK(prop.mids == std::vector<std::string>{"/m.55"});
    REQUIRE(prop.names.size() == 1);
    CHECK(prop.names[0] == std::pair<std::string, std::string>{"en", "Bike kind"});
    CHECK(prop.name_via_path);
    CHECK(!prop.name_via_mid);
    REQUIRE(prop.descriptions.size() == 1);
    CHECK(prop.descriptions[0].second == "What kind of bike");
    CHECK(prop.desc_via_mid);
    CHECK(!prop.desc_via_path);

    REQUIRE(schema.types.size() == 1);
    const SchemaMetadata& type_meta = schema.types[0].meta;
    CHECK(type_meta.mids == std::vector<std::string>{"/m.77"});
    REQUIRE(type_meta.names.size() == 1);
    CHECK(type_meta.names[0].second == "Model");
    CHECK(type_meta.name_via_mid);
    CHECK(!type_meta.name_via_path);
}

TEST_CASE("conflicting mid bindings are all kept") {
    test::TempDir dir;
    std::string domain = dir.file("bikes.tsv");
    test::write_file(domain, "/m.01\t/bikes.model.kind\t/m.02\n");
    std::string types = dir.file("type.tsv");
    test::write_file(types,
                     "/bikes.model.kind\t/type.object.type\t/m.55\n"
                     "/bikes.model.kind\t/type.object.type\t/m.56\n"
                     "/bikes.model.kind\t/type.object.type\t/m.55\n");
    SchemaSources sources;
    sources.domain_slice = domain;
    sources.type_slice = types;
    DomainSchema schema = reconstruct_schema(sources);
    REQUIRE(schema.properties.size() == 1);
    CHECK(schema.properties[0].meta.mids ==
          std::vector<std::string>{"/m.55", "/m.56"});
}

TEST_CASE("paths without metadata stay valid and unannotated") {
    test::TempDir dir;
    std::string domain = dir.file("bikes.tsv");
    test::write_file(domain, "/m.01\t/bikes.model.kind\t/m.02\n");
    SchemaSources sources;
    sources.domain_slice = domain;
    DomainSchema schema = reconstruct_schema(sources);
    REQUIRE(schema.properties.size() == 1);
    CHECK(schema.properties[0].meta.mids.empty());
    CHECK(schema.properties[0].meta.names.empty());
    CHECK(!schema.properties[0].meta.name_via_path);
}

TEST_CASE("reconstruction does not depend on line order") {
    test::TempDir dir;
    std::vector<std::string> lines = {
        "/m.01\t/bikes.model.maker\t/m.02",
        "/m.01\t/bikes.model.year\t\"1990\"",
        "/m.03\t/bikes.maker.models\t/m.01",
        "/m.05\t/bikes.model.maker\t/m.06",
    };
    auto schema_of = [&](const std::vector<std::string>& ordered) {
        std::string text;
        for (const auto& l : ordered) text += l + "\n";
        std::string path = dir.file("slice.tsv");
        test::write_file(path, text);
        SchemaSources sources;
        sources.domain_slice = path;
        return render_schema_text(reconstruct_schema(sources));
    };
    std::string base = schema_of(lines);
    std::mt19937_64 rng(41);
    for (int i = 0; i < 5; ++i) {
        std::shuffle(lines.begin(), lines.end(), rng);
        CHECK(schema_of(lines) == base);
    }
}

TEST_CASE("text rendering lists types before properties with metadata") {
    test::TempDir dir;
    std::string domain = dir.file("bikes.tsv");
    test::write_file(domain, "/m.01\t/bikes.model.kind\t/m.02\n");
    std::string names = dir.file("name.tsv");
    test::write_file(names, "/bikes.model.kind\t/type.object.name\t\"Bike kind\"@en\n");
    SchemaSources sources;
    sources.domain_slice = domain;
    sources.name_slice = names;
    DomainSchema schema = reconstruct_schema(sources);
    std::string text = render_schema_text(schema);
    CHECK(text.find("domain /bikes (1 triples)") != std::string::npos);
    CHECK(text.find("  type /bikes.model") != std::string::npos);
    CHECK(text.find("  property /bikes.model.kind") != std::string::npos);
    CHECK(text.find("    name \"Bike kind\"@en") != std::string::npos);
    CHECK(text.find("type /bikes.model") < text.find("property /bikes.model.kind"));
}

}
