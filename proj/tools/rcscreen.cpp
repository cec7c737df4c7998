// rcscreen: batch front end wiring ingest -> prestige -> solve -> score ->
// report into reproducible runs. Every subcommand writes its CSV/JSONL
// outputs plus run_manifest.json under --out.

#include <CLI11.hpp>

#include <string>

#include "rc/pipeline.hpp"

namespace {

void add_entity_inputs(CLI::App* cmd, rc::PipelineOptions& o, bool required = true) {
    auto* journals = cmd->add_option("--journals", o.journals, "Journals JSON Lines file");
    auto* works = cmd->add_option("--works", o.works, "Works JSON Lines file");
    auto* edges = cmd->add_option("--edges", o.edges, "Citation edges JSON Lines file");
    auto* institutions =
        cmd->add_option("--institutions", o.institutions, "Institutions JSON Lines file");
    if (required) {
        journals->required();
        works->required();
        edges->required();
        institutions->required();
    }
}

void add_graph_options(CLI::App* cmd, rc::PipelineOptions& o) {
    cmd->add_option("--census-year", o.census_year,
                    "Publication year that defines census works (default: all in-set works)");
    cmd->add_option("--exogenous-default-f", o.exogenous_default_f,
                    "f assigned to edges citing from outside the journal set")
        ->check(CLI::Range(0, 1));
}

void add_solver_options(CLI::App* cmd, rc::PipelineOptions& o) {
    cmd->add_option("--use-institutional-prestige", o.solver.use_institutional_prestige,
                    "Apply institutional prestige factors (true|false)");
    cmd->add_option_function<std::string>(
           "--exogenous",
           [&o](const std::string& value) {
               o.solver.exogenous_mode = value == "include" ? rc::ExogenousMode::include
                                                            : rc::ExogenousMode::exclude;
           },
           "Citations from exogenous journals: include or exclude")
        ->check(CLI::IsMember({"include", "exclude"}));
    cmd->add_option_function<std::string>(
           "--affiliation-combine",
           [&o](const std::string& value) {
               o.solver.affiliation_combine = value == "max" ? rc::AffiliationCombine::max
                                                             : rc::AffiliationCombine::mean;
           },
           "Combine multi-affiliation prestige by mean or max")
        ->check(CLI::IsMember({"mean", "max"}));
    cmd->add_option("--scale-min", o.solver.scale_min, "Lower score bound");
    cmd->add_option("--scale-max", o.solver.scale_max, "Upper score bound");
    cmd->add_option("--tolerance", o.solver.tolerance, "Mean-score convergence threshold");
    cmd->add_option("--max-iterations", o.solver.max_iterations, "Iteration cap");
}

void add_prestige_inputs(CLI::App* cmd, rc::PipelineOptions& o) {
    cmd->add_option("--rankings", o.rankings, "Ranking CSV files (rank,institution_id)");
    cmd->add_option("--prestige", o.prestige_csv, "Precomputed prestige CSV")
        ->excludes("--rankings");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reputable-citation scoring and screening for citation networks"};
    app.set_version_flag("--version", rc::kToolVersion);
    app.set_config("--config", "", "Key=value config file; subcommand options go in [sections]");
    app.require_subcommand(1);

    rc::PipelineOptions o;

    auto* ingest = app.add_subcommand("ingest", "Validate and normalize entity files");
    add_entity_inputs(ingest, o);
    add_graph_options(ingest, o);

    auto* fetch = app.add_subcommand("fetch", "Pull works from an OpenAlex-style endpoint");
    fetch->add_option("--journal-ids", o.fetch.journal_external_ids,
                      "Source ids of the journal set");
    fetch->add_option("--fetch-census-year", o.fetch.census_year, "Census publication year");
    fetch->add_option("--rate-limit", o.fetch.rate_limit, "Requests per second")
        ->check(CLI::PositiveNumber);
    fetch->add_option("--page-size", o.fetch.page_size, "Results per page")
        ->check(CLI::Range(1, 200));
    fetch->add_option("--cursor", o.fetch.page_cursor, "Continuation token to resume from");
    fetch->add_option("--mailto", o.fetch.mailto, "Contact email for the polite pool");
    fetch->add_option("--base-url", o.fetch.base_url, "API base URL")
        ->envname("RCSCREEN_OPENALEX_BASE_URL");

    auto* prestige = app.add_subcommand("prestige", "Aggregate ranking deciles into p^I");
    prestige->add_option("--rankings", o.rankings, "Ranking CSV files")->required();
    prestige->add_option("--institutions", o.institutions, "Institution universe (JSON Lines)")
        ->required();

    auto* solve = app.add_subcommand("solve", "Iterate journal prestige to the fixed point");
    add_entity_inputs(solve, o);
    add_graph_options(solve, o);
    add_solver_options(solve, o);
    add_prestige_inputs(solve, o);

    auto* score = app.add_subcommand("score", "Solve, then compute per-author RC scores");
    add_entity_inputs(score, o);
    add_graph_options(score, o);
    add_solver_options(score, o);
    add_prestige_inputs(score, o);
    score->add_option("--include-self-citations", o.scoring.include_self_citations,
                      "Count citations from the scored author's own works (true|false)");
    score->add_option("--labels", o.labels_csv, "Author sample labels CSV (author_id,label)");

    auto* segment = app.add_subcommand("segment", "Split a scored author list into RC tiers");
    segment->add_option("--authors", o.authors_csv, "authors.csv from the score step")
        ->required();
    segment->add_option("--labels", o.labels_csv, "Author sample labels CSV");

    auto* report = app.add_subcommand("report", "Summary, share, component and test tables");
    add_entity_inputs(report, o);
    add_graph_options(report, o);
    report->add_option("--authors", o.authors_csv, "authors.csv from the score step")
        ->required();
    report->add_option("--labels", o.labels_csv, "Author sample labels CSV");
    report->add_option("--scores", o.scores_csv, "journal_scores.csv from the solve step");
    report->add_option("--indicators", o.indicators_csv,
                       "Per-journal indicator columns to correlate against RC");

    auto* synth = app.add_subcommand("synth", "Generate a planted synthetic citation network");
    synth->add_option("--seed", o.synth.seed, "Generator seed");
    synth->add_option("--journal-count", o.synth.journal_count, "Number of in-set journals");
    synth->add_option("--works-per-journal", o.synth.works_per_journal, "Census works per journal");
    synth->add_option("--author-pool", o.synth.author_pool, "Total authors");
    synth->add_option("--institution-pool", o.synth.institution_pool, "Total institutions");
    synth->add_option("--prestige-profile", o.synth.prestige_profile,
                      "Fraction of high-prestige institutions")
        ->check(CLI::Range(0.0, 1.0));
    synth->add_option("--elite-size", o.synth.honest_elite_size, "Honest elite authors");
    synth->add_option("--cartel-size", o.synth.cartel_size, "Cartel authors");
    synth->add_option("--cartel-citation-boost", o.synth.cartel_citation_boost,
                      "Citations each cartel work receives from co-cartel works");
    synth->add_option("--base-citation-rate", o.synth.base_citation_rate,
                      "Mean organic citations issued per work");
    synth->add_option("--ranking-sources", o.synth.ranking_source_count,
                      "Number of synthetic ranking sources");
    synth->add_option("--synth-census-year", o.synth.census_year, "Census year to stamp");

    for (auto* cmd : {ingest, fetch, prestige, solve, score, segment, report, synth})
        cmd->add_option("--out", o.out_dir, "Output directory")->required();

    CLI11_PARSE(app, argc, argv);

    if (ingest->parsed()) return rc::run_ingest(o);
    if (fetch->parsed()) return rc::run_fetch(o);
    if (prestige->parsed()) return rc::run_prestige(o);
    if (solve->parsed()) return rc::run_solve(o);
    if (score->parsed()) return rc::run_score(o);
    if (segment->parsed()) return rc::run_segment(o);
    if (report->parsed()) return rc::run_report(o);
    if (synth->parsed()) return rc::run_synth(o);
    return 1;
}
