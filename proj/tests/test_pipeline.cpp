#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include <json.hpp>

#include "rc/csv.hpp"
#include "rc/ingest.hpp"
#include "rc/pipeline.hpp"

#include "fixtures.hpp"

using namespace rc;

namespace {

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& name)
        : path(std::filesystem::temp_directory_path() / name) {
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

// Small synthetic inputs on disk, ready for the file-driven subcommands.
struct DiskFixture {
    TempDir dir;
    PipelineOptions options;

    explicit DiskFixture(const std::string& name, std::uint64_t seed = 33)
        : dir("rc_pipe_" + name) {
        auto u = fixtures::converging_universe(seed, {}, 8, 60, 0, 10);
        write_journals_jsonl(u.journals, dir.path / "journals.jsonl");
        write_works_jsonl(u.works, dir.path / "works.jsonl");
        write_edges_jsonl(u.edges, dir.path / "edges.jsonl");
        write_institutions_jsonl(u.institutions, dir.path / "institutions.jsonl");
        options.journals = (dir.path / "journals.jsonl").string();
        options.works = (dir.path / "works.jsonl").string();
        options.edges = (dir.path / "edges.jsonl").string();
        options.institutions = (dir.path / "institutions.jsonl").string();
        options.census_year = 2020;
        options.out_dir = (dir.path / "out").string();
    }
};

nlohmann::json manifest_of(const std::filesystem::path& out_dir) {
    return nlohmann::json::parse(slurp(out_dir / "run_manifest.json"));
}

} // namespace

TEST_CASE("ingest validates, normalizes, and writes a complete manifest") {
    DiskFixture f("ingest");
    CHECK(run_ingest(f.options) == 0);

    auto manifest = manifest_of(f.options.out_dir);
    CHECK(manifest["status"] == "ok");
    CHECK(manifest["subcommand"] == "ingest");
    CHECK(manifest["inputs"].size() == 4);
    for (const auto& input : manifest["inputs"])
        CHECK(input["digest"].get<std::string>().starts_with("fnv1a64:"));
    // Every output file exists and is referenced.
    CHECK(manifest["outputs"].size() == 4);
    for (const auto& output : manifest["outputs"])
        CHECK(std::filesystem::exists(output.get<std::string>()));
}

TEST_CASE("failures still write a manifest tagged with the stage") {
    DiskFixture f("fail");
    f.options.works = "/nonexistent/works.jsonl";
    CHECK(run_ingest(f.options) == 1);
    auto manifest = manifest_of(f.options.out_dir);
    CHECK(manifest["status"] == "error");
    CHECK(manifest["error_stage"] == "init");

    SUBCASE("a build-stage failure is tagged as such") {
        DiskFixture g("fail2");
        // Corrupt the edges file with a dangling reference.
        std::ofstream out(std::filesystem::path(g.options.edges), std::ios::app);
        out << R"({"citing_work_id":"W0","cited_work_id":"W99999"})" << "\n";
        out.close();
        CHECK(run_ingest(g.options) == 1);
        auto m = manifest_of(g.options.out_dir);
        CHECK(m["status"] == "error");
        CHECK(m["error_stage"] == "build");
        CHECK(m["error"].get<std::string>().find("W99999") != std::string::npos);
    }
}

TEST_CASE("solve writes scores, trace, and converged weights") {
    DiskFixture f("solve");
    CHECK(run_solve(f.options) == 0);
    auto dir = std::filesystem::path(f.options.out_dir);

    auto scores = csv::read_file(dir / "journal_scores.csv");
    CHECK(scores.header == std::vector<std::string>{"journal_id", "rc_score", "iterations"});
    CHECK(!scores.rows.empty());

    auto trace = csv::read_file(dir / "trace.csv");
    CHECK(trace.header == std::vector<std::string>{"iteration", "mean_score", "max_delta"});
    CHECK(trace.rows.size() == std::stoul(scores.rows[0][2]));

    auto weights = csv::read_file(dir / "converged_weights.csv");
    CHECK(weights.header ==
          std::vector<std::string>{"citing_work_id", "cited_work_id", "weight"});
}

TEST_CASE("score produces a parseable author table with tiers") {
    DiskFixture f("score");
    CHECK(run_score(f.options) == 0);
    auto authors = read_authors_csv(std::filesystem::path(f.options.out_dir) / "authors.csv");
    CHECK(authors.size() >= 3);
    for (const auto& a : authors) CHECK(a.work_count >= 1);
}

TEST_CASE("segment splits a 300-author table into 100/100/100") {
    TempDir dir("rc_pipe_segment");
    auto authors_path = dir.path / "authors.csv";
    {
        csv::Writer out(authors_path);
        out.row({"author_id", "label", "R_a", "L_a", "citations_per_paper", "rc", "attenuated",
                 "tier"});
        for (int i = 0; i < 300; ++i) {
            char id[16];
            std::snprintf(id, sizeof(id), "A%05d", i);
            out.row({id, i % 2 ? "hc" : "control", "1", "1", "1",
                     csv::format_double(1000.0 - i), "false", "0"});
        }
    }
    PipelineOptions options;
    options.authors_csv = authors_path.string();
    options.out_dir = (dir.path / "out").string();
    CHECK(run_segment(options) == 0);

    auto tiers = csv::read_file(dir.path / "out" / "tiers.csv");
    CHECK(tiers.rows.size() == 300);
    std::array<int, 3> counts{};
    for (const auto& row : tiers.rows) ++counts[static_cast<std::size_t>(std::stoi(row[3]) - 1)];
    CHECK(counts == std::array<int, 3>{100, 100, 100});

    auto tier_counts = csv::read_file(dir.path / "out" / "tier_counts.csv");
    CHECK(tier_counts.rows.size() == 2); // hc + control
}

TEST_CASE("synth runs are reproducible byte for byte") {
    TempDir dir("rc_pipe_synth");
    PipelineOptions options;
    options.synth.seed = 7;
    options.synth.journal_count = 30;
    options.synth.works_per_journal = 8;
    options.synth.author_pool = 80;
    options.synth.institution_pool = 40;
    options.synth.honest_elite_size = 5;
    options.synth.cartel_size = 5;
    options.synth.cartel_citation_boost = 4;
    options.synth.base_citation_rate = 2.0;

    options.out_dir = (dir.path / "a").string();
    CHECK(run_synth(options) == 0);
    options.out_dir = (dir.path / "b").string();
    CHECK(run_synth(options) == 0);

    for (const auto& entry : std::filesystem::directory_iterator(dir.path / "a")) {
        auto name = entry.path().filename().string();
        if (name == "run_manifest.json") continue; // timestamps differ
        CHECK(slurp(entry.path()) == slurp(dir.path / "b" / name));
    }
}

TEST_CASE("prestige subcommand aggregates ranking files") {
    TempDir dir("rc_pipe_prestige");
    std::vector<InstitutionRecord> insts;
    for (int i = 1; i <= 10; ++i) insts.push_back(fixtures::inst("I" + std::to_string(i)));
    write_institutions_jsonl(insts, dir.path / "institutions.jsonl");
    {
        csv::Writer out(dir.path / "r1.csv");
        out.row({"rank", "institution_id"});
        for (int r = 1; r <= 10; ++r) out.row({std::to_string(r), "I" + std::to_string(r)});
    }
    PipelineOptions options;
    options.institutions = (dir.path / "institutions.jsonl").string();
    options.rankings = {(dir.path / "r1.csv").string()};
    options.out_dir = (dir.path / "out").string();
    CHECK(run_prestige(options) == 0);

    auto table = read_prestige_csv(dir.path / "out" / "prestige.csv");
    CHECK(table.at("I1") == doctest::Approx(2.0)); // 1.0 floor + top decile
    CHECK(table.at("I10") == doctest::Approx(1.1));
}

TEST_CASE("report emits the table bundle") {
    DiskFixture f("report");
    CHECK(run_score(f.options) == 0);
    auto out = std::filesystem::path(f.options.out_dir);

    // Labels: alternate two sample names over scored authors.
    auto scored = read_authors_csv(out / "authors.csv");
    auto labels_path = f.dir.path / "labels.csv";
    {
        csv::Writer labels(labels_path);
        labels.row({"author_id", "label"});
        for (std::size_t i = 0; i < scored.size(); ++i)
            labels.row({scored[i].author_id, i % 2 ? "hc" : "control"});
    }

    PipelineOptions options = f.options;
    options.authors_csv = (out / "authors.csv").string();
    options.labels_csv = labels_path.string();
    options.out_dir = (f.dir.path / "report").string();
    CHECK(run_report(options) == 0);

    for (const char* name : {"summary.csv", "journal_shares.csv", "institution_shares.csv",
                             "country_shares.csv", "components.csv", "fig3_authors.csv",
                             "stat_tests.csv"})
        CHECK(std::filesystem::exists(std::filesystem::path(options.out_dir) / name));

    auto fig3 = csv::read_file(std::filesystem::path(options.out_dir) / "fig3_authors.csv");
    CHECK(fig3.rows.size() == scored.size());

    auto summary = csv::read_file(std::filesystem::path(options.out_dir) / "summary.csv");
    CHECK(summary.rows.size() == 2);

    SUBCASE("indicator columns feed fig1 and the spearman rows") {
        auto indicators_path = f.dir.path / "indicators.csv";
        auto scores_path = out / "journal_scores.csv";
        CHECK(run_solve(f.options) == 0); // writes journal_scores.csv next to authors.csv
        auto journal_scores = csv::read_file(scores_path);
        {
            csv::Writer ind(indicators_path);
            ind.row({"journal_id", "ais"});
            for (const auto& row : journal_scores.rows)
                ind.row({row[0], row[1]}); // a perfectly correlated indicator
        }
        options.scores_csv = scores_path.string();
        options.indicators_csv = indicators_path.string();
        options.out_dir = (f.dir.path / "report2").string();
        CHECK(run_report(options) == 0);
        CHECK(std::filesystem::exists(std::filesystem::path(options.out_dir) /
                                      "fig1_journals.csv"));
        auto stats = csv::read_file(std::filesystem::path(options.out_dir) / "stat_tests.csv");
        bool saw_spearman = false;
        for (const auto& row : stats.rows) {
            if (row[0] == "spearman_rc_vs_ais") {
                saw_spearman = true;
                CHECK(std::stod(row[3]) == doctest::Approx(1.0));
            }
        }
        CHECK(saw_spearman);
    }
}
