#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "fbt/errors.hpp"
#include "fbt/pipeline.hpp"

namespace {

// Exit codes: 0 success, 2 usage, 3 I/O failure, 4 contract violation,
// 5 missing prerequisite stage.
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitContract = 4;
constexpr int kExitPrerequisite = 5;

struct Cli {
    fbt::RunConfig config;
    std::string granularity = "domain";
    std::string style = "dots";
};

void add_out(CLI::App* cmd, Cli& cli) {
    cmd->add_option("-o,--out", cli.config.out_dir, "output directory")
        ->required()
        ->envname("FBT_OUT");
}

void add_input(CLI::App* cmd, Cli& cli, bool required) {
    auto* opt = cmd->add_option("-i,--input", cli.config.input,
                                "input dump (.nt, .nt.gz) or normalized TSV")
                    ->envname("FBT_INPUT");
    if (required) opt->required();
}

void add_parse_mode(CLI::App* cmd, Cli& cli) {
    cmd->add_flag("--strict,!--lenient", cli.config.strict,
                  "require tab-delimited lines with a trailing full stop");
    cmd->add_option("--style", cli.style, "path rendering in outputs")
        ->check(CLI::IsMember({"dots", "slashes"}))
        ->envname("FBT_STYLE");
}

void add_workers(CLI::App* cmd, Cli& cli) {
    cmd->add_option("-j,--workers", cli.config.workers, "parallel slice workers")
        ->check(CLI::PositiveNumber)
        ->envname("FBT_WORKERS");
}

void add_sort_mem(CLI::App* cmd, Cli& cli) {
    cmd->add_option("--sort-mem", cli.config.sort_mem,
                    "memory cap for external sorting (bytes, suffixes ok)")
        ->transform(CLI::AsSizeValue(false))
        ->envname("FBT_SORT_MEM");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"streaming toolkit for Freebase-style RDF triple dumps"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "fbt 1.0.0");
    Cli cli;

    CLI::App* prepare = app.add_subcommand(
        "prepare", "normalize a dump into three-column TSV, reporting malformed lines");
    add_input(prepare, cli, true);
    add_out(prepare, cli);
    add_parse_mode(prepare, cli);
    prepare->add_flag("--gzip", cli.config.gzip_out, "gzip the normalized output");

    CLI::App* slice = app.add_subcommand(
        "slice", "partition a dump into per-domain or per-predicate slices");
    add_input(slice, cli, true);
    add_out(slice, cli);
    add_parse_mode(slice, cli);
    add_workers(slice, cli);
    add_sort_mem(slice, cli);
    slice->add_option("--plan", cli.config.plan_path, "slice plan TSV; built when absent")
        ->envname("FBT_PLAN");
    slice->add_option("--granularity", cli.granularity, "slice selector granularity")
        ->check(CLI::IsMember({"domain", "predicate"}))
        ->envname("FBT_GRANULARITY");

    CLI::App* stats = app.add_subcommand(
        "stats", "per-domain profile, identifier share, and topic estimate");
    add_out(stats, cli);
    add_sort_mem(stats, cli);
    stats->add_option("--classification", cli.config.classification_path,
                      "domain grouping override (group<TAB>domain lines)")
        ->envname("FBT_CLASSIFICATION");

    CLI::App* dedup = app.add_subcommand(
        "dedup", "detect mirrored and reverse duplicates, compact mediator groups");
    add_input(dedup, cli, false);
    add_out(dedup, cli);
    add_parse_mode(dedup, cli);
    add_workers(dedup, cli);
    add_sort_mem(dedup, cli);

    CLI::App* schema = app.add_subcommand(
        "schema", "reconstruct a domain's types, properties, and metadata from slices");
    add_out(schema, cli);
    schema->add_option("--domain", cli.config.domain, "target domain key")
        ->required()
        ->envname("FBT_DOMAIN");

    CLI::App* generate = app.add_subcommand(
        "generate", "emit a synthetic dump with a machine-readable ground truth");
    add_out(generate, cli);
    generate->add_option("--seed", cli.config.seed, "generator seed")->envname("FBT_SEED");
    generate->add_option("--total", cli.config.total_triples, "total lines to emit")
        ->envname("FBT_TOTAL");
    generate->add_option("--preset", cli.config.preset, "built-in spec shape")
        ->envname("FBT_PRESET");
    generate->add_option("--spec", cli.config.spec_path, "explicit generator spec JSON")
        ->envname("FBT_SPEC");
    generate->add_flag("--gzip", cli.config.gzip_out, "gzip the dump");

    CLI::App* report = app.add_subcommand(
        "report", "merge the stage artifacts in an output directory into one report");
    add_out(report, cli);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    cli.config.granularity = (cli.granularity == "predicate") ? fbt::Granularity::Predicate
                                                              : fbt::Granularity::Domain;
    cli.config.style =
        (cli.style == "slashes") ? fbt::PathStyle::Slashes : fbt::PathStyle::Dots;

    try {
        if (prepare->parsed()) fbt::cmd_prepare(cli.config);
        if (slice->parsed()) fbt::cmd_slice(cli.config);
        if (stats->parsed()) fbt::cmd_stats(cli.config);
        if (dedup->parsed()) fbt::cmd_dedup(cli.config);
        if (schema->parsed()) fbt::cmd_schema(cli.config);
        if (generate->parsed()) fbt::cmd_generate(cli.config);
        if (report->parsed()) fbt::cmd_report(cli.config);
    } catch (const fbt::PrerequisiteError& e) {
        fprintf(stderr, "error: %s\n", e.what());
        return kExitPrerequisite;
    } catch (const fbt::ContractError& e) {
        fprintf(stderr, "error: %s\n", e.what());
        return kExitContract;
    } catch (const fbt::IoError& e) {
        fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    }
    return 0;
}
