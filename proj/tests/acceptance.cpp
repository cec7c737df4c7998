// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// fails. Heavier than the unit suites; budgeted for a commodity desktop.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "rc/analytics.hpp"
#include "rc/csv.hpp"
#include "rc/ingest.hpp"
#include "rc/pipeline.hpp"
#include "rc/prestige.hpp"
#include "rc/scoring.hpp"
#include "rc/solver.hpp"
#include "rc/synth.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace rc;

namespace {

// Pinned on the first successful reference run (20 seeds, 2026-08): every
// cartel member came out attenuated. The aggregate fraction is the
// regression baseline thereafter.
constexpr double kPinnedCartelAttenuatedFraction = 1.0;

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Check {
    Outcome& outcome;

    void require(bool condition, const std::string& what) {
        if (!condition) {
            outcome.pass = false;
            if (!outcome.detail.empty()) outcome.detail += "; ";
            outcome.detail += "FAILED: " + what;
        }
    }
};

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v) { return csv::format_double(v); }

// Shared bound check for criterion 3, fed by the runs of criteria 1 and 2.
struct BoundAudit {
    std::uint64_t iterations_checked = 0;
    std::uint64_t violations = 0;

    void inspect(const std::vector<std::vector<double>>& history, const SolverConfig& config) {
        for (const auto& scores : history) {
            ++iterations_checked;
            double lo = scores[0], hi = scores[0];
            for (double v : scores) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            if (lo == hi) {
                double mid = 0.5 * (config.scale_min + config.scale_max);
                if (std::abs(lo - mid) > 1e-12) ++violations;
            } else if (std::abs(lo - config.scale_min) > 1e-12 ||
                       std::abs(hi - config.scale_max) > 1e-12) {
                ++violations;
            }
        }
    }
};

BoundAudit g_bounds;

SynthConfig reference_config(std::uint64_t seed) {
    SynthConfig c;
    c.seed = seed;
    c.journal_count = 200;
    c.works_per_journal = 50;
    c.author_pool = 1200;
    c.institution_pool = 300;
    c.prestige_profile = 0.2;
    c.honest_elite_size = 30;
    c.cartel_size = 30;
    c.cartel_citation_boost = 20;
    c.base_citation_rate = 4.0;
    return c;
}

PrestigeTable prestige_from_rankings(const SynthOutput& net) {
    std::vector<std::string> universe;
    universe.reserve(net.institutions.size());
    for (const auto& inst : net.institutions) universe.push_back(inst.id);
    return institution_prestige(net.rankings, universe);
}

const std::vector<SolverConfig>& variant_matrix() {
    static const std::vector<SolverConfig> variants = [] {
        std::vector<SolverConfig> v(4);
        v[0].use_institutional_prestige = true;
        v[0].exogenous_mode = ExogenousMode::exclude; // reference
        v[1].use_institutional_prestige = true;
        v[1].exogenous_mode = ExogenousMode::include;
        v[2].use_institutional_prestige = false;
        v[2].exogenous_mode = ExogenousMode::exclude;
        v[3].use_institutional_prestige = false;
        v[3].exogenous_mode = ExogenousMode::include; // Fig.-1 configuration
        return v;
    }();
    return variants;
}

// --- 1. Convergence fidelity ------------------------------------------------

Outcome convergence_fidelity() {
    Outcome outcome;
    Check check{outcome};

    SynthConfig config = reference_config(2026);
    config.journal_count = 500;
    config.works_per_journal = 50;
    config.author_pool = 3000;
    config.institution_pool = 600;
    config.base_citation_rate = 10.0;

    auto net = generate_network(config);
    GraphOptions options;
    options.census_year = config.census_year;
    auto graph = build_graph(net.institutions, net.journals, net.works, net.edges, options);
    auto prestige = prestige_from_rankings(net);

    check.require(graph.in_set_journal_count() == 500, "expected 500 in-set journals");
    check.require(graph.works().size() == 25000, "expected 25000 works");
    check.require(graph.edges().size() >= 200000 && graph.edges().size() <= 320000,
                  "expected ~250k edges, got " + std::to_string(graph.edges().size()));

    SolverConfig solver_config; // default 1e-4 mean-delta tolerance
    solver_config.record_history = true;
    auto start = std::chrono::steady_clock::now();
    auto result = solve(graph, prestige, solver_config);
    double seconds = elapsed_seconds(start);

    g_bounds.inspect(result.scores.history, solver_config);

    check.require(result.scores.iteration_count <= 60,
                  "took " + std::to_string(result.scores.iteration_count) + " iterations");
    check.require(result.scores.final_delta < 1e-4, "final delta not under 1e-4");
    check.require(seconds < 60.0, "took " + fmt(seconds) + " s");

    outcome.detail = std::to_string(graph.edges().size()) + " edges, " +
                     std::to_string(result.scores.iteration_count) + " iterations, " +
                     fmt(seconds) + " s" + (outcome.detail.empty() ? "" : "; " + outcome.detail);
    return outcome;
}

// --- 2. Oracle equivalence --------------------------------------------------

Outcome oracle_equivalence() {
    Outcome outcome;
    Check check{outcome};

    int graphs = 0;
    std::uint64_t iterations_compared = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 0; graphs < 100; ++seed) {
        auto u = fixtures::random_universe(seed, 20, 200);
        if (u.edges.empty()) continue;
        ++graphs;
        auto graph = build_graph(u.institutions, u.journals, u.works, u.edges, u.options);

        for (auto config : variant_matrix()) {
            // Undamped iterations can 2-cycle on random toy graphs; the
            // per-iteration comparison covers those runs through the history
            // the convergence error carries.
            config.record_history = true;
            config.max_iterations = 80;
            std::vector<std::vector<double>> history;
            try {
                history = solve(graph, u.prestige, config).scores.history;
            } catch (const ConvergenceError& e) {
                history = e.history();
            }
            auto expected = oracle::dense_solve(u.institutions, u.journals, u.works, u.edges,
                                                u.options, u.prestige, config);
            g_bounds.inspect(history, config);

            // Both implementations use the same stop rule; disparities can
            // only come from sub-tolerance rounding right at the threshold,
            // and the per-iteration comparison below is the actual check.
            auto diff = history.size() > expected.iterations.size()
                            ? history.size() - expected.iterations.size()
                            : expected.iterations.size() - history.size();
            check.require(diff <= 5, "iteration counts diverge at seed " + std::to_string(seed));
            if (!outcome.pass) return outcome;

            const std::size_t shared = std::min(history.size(), expected.iterations.size());
            for (std::size_t k = 0; k < shared; ++k) {
                std::size_t slot = 0;
                for (Index j : graph.in_set_journals()) {
                    double mine = history[k][slot++];
                    double theirs = expected.iterations[k].at(graph.journals()[j].id);
                    worst = std::max(worst, std::abs(mine - theirs));
                }
            }
            iterations_compared += shared;
        }
    }
    check.require(worst <= 1e-9, "worst per-iteration deviation " + fmt(worst));
    check.require(iterations_compared >= 400, "too few iterations compared");
    outcome.detail = std::to_string(graphs) + " graphs x 4 variants, " +
                     std::to_string(iterations_compared) + " iterations, worst deviation " +
                     fmt(worst) + (outcome.detail.empty() ? "" : "; " + outcome.detail);
    return outcome;
}

// --- 3. Exact bounds ---------------------------------------------------------

Outcome exact_bounds() {
    Outcome outcome;
    Check check{outcome};
    check.require(g_bounds.iterations_checked > 0, "no iterations audited");
    check.require(g_bounds.violations == 0,
                  std::to_string(g_bounds.violations) + " endpoint violations");
    outcome.detail = std::to_string(g_bounds.iterations_checked) +
                     " iterations audited across criteria 1-2" +
                     (outcome.detail.empty() ? "" : "; " + outcome.detail);
    return outcome;
}

// --- 4. Prestige arithmetic --------------------------------------------------

Outcome prestige_arithmetic() {
    Outcome outcome;
    Check check{outcome};

    std::mt19937_64 rng(4242);
    const int universe_size = 200;
    std::vector<std::string> universe;
    for (int i = 0; i < universe_size; ++i) universe.push_back("I" + std::to_string(i));

    for (int trial = 0; trial < 50; ++trial) {
        std::vector<RankingSourceFile> sources;
        for (int s = 0; s < 7; ++s) {
            auto shuffled = universe;
            std::shuffle(shuffled.begin(), shuffled.end(), rng);
            // At least 10 entries so rank 1 really is in the top decile.
            std::size_t listed =
                10 + std::uniform_int_distribution<std::size_t>(0, universe_size - 12)(rng);
            RankingSourceFile source{"s" + std::to_string(s), {}};
            // "I0" pinned to rank 1 everywhere; "I1" never listed.
            source.entries.push_back({1, "I0"});
            std::uint32_t rank = 2;
            for (const auto& id : shuffled) {
                if (id == "I0" || id == "I1") continue;
                if (source.entries.size() >= listed + 1) break;
                source.entries.push_back({rank++, id});
            }
            sources.push_back(std::move(source));
        }
        auto table = institution_prestige(sources, universe);
        for (const auto& [id, score] : table.scores) {
            check.require(score >= 1.0 && score <= 8.0 + 1e-12,
                          "prestige out of [1, 8]: " + fmt(score));
            if (!outcome.pass) return outcome;
        }
        check.require(table.at("I0") == 8.0, "all-top-decile institution must score exactly 8.0");
        check.require(table.at("I1") == 1.0, "unlisted institution must score exactly 1.0");
        if (!outcome.pass) return outcome;
    }
    outcome.detail = "50 random 7-source tables over 200 institutions";
    return outcome;
}

// --- 5. Scale invariance -----------------------------------------------------

Outcome scale_invariance() {
    Outcome outcome;
    Check check{outcome};

    SynthConfig config = reference_config(99);
    config.journal_count = 100;
    config.works_per_journal = 20;
    config.author_pool = 400;
    config.institution_pool = 150;

    auto net = generate_network(config);
    GraphOptions options;
    options.census_year = config.census_year;
    auto graph = build_graph(net.institutions, net.journals, net.works, net.edges, options);
    auto prestige = prestige_from_rankings(net);

    double worst = 0.0;
    for (auto solver_config : variant_matrix()) {
        auto base = solve(graph, prestige, solver_config);
        auto base_scores = score_all_authors(graph, base.weights);
        auto base_tiers = segment_tiers(base_scores);

        for (double c : {0.1, 3.0, 10.0}) {
            PrestigeTable scaled = prestige;
            for (auto& [id, v] : scaled.scores) v *= c;
            auto result = solve(graph, scaled, solver_config);
            check.require(result.scores.iteration_count == base.scores.iteration_count,
                          "iteration counts changed under scaling");
            for (Index j : graph.in_set_journals())
                worst = std::max(worst,
                                 std::abs(result.scores.at(j) - base.scores.at(j)));

            auto scores = score_all_authors(graph, result.weights);
            auto tiers = segment_tiers(scores);
            check.require(tiers.authors == base_tiers.authors && tiers.tier == base_tiers.tier,
                          "tier assignment changed under scaling");
            if (!outcome.pass) return outcome;
        }
    }
    check.require(worst <= 1e-12, "worst score deviation " + fmt(worst));
    outcome.detail = "4 variants x c in {0.1, 3, 10}, worst deviation " + fmt(worst) +
                     (outcome.detail.empty() ? "" : "; " + outcome.detail);
    return outcome;
}

// --- 6. Screening power ------------------------------------------------------

Outcome screening_power() {
    Outcome outcome;
    Check check{outcome};

    const int seeds = 20;
    double bottom_tier = 0, attenuated = 0, elite_top = 0, top_decile = 0;
    double cite_ratio = 0;
    for (int seed = 1; seed <= seeds; ++seed) {
        auto net = generate_network(reference_config(static_cast<std::uint64_t>(seed)));
        GraphOptions options;
        options.census_year = 2020;
        auto graph = build_graph(net.institutions, net.journals, net.works, net.edges, options);
        auto prestige = prestige_from_rankings(net);
        auto solved = solve(graph, prestige, {}); // reference variant
        auto scores = score_all_authors(graph, solved.weights);
        auto report = ground_truth_separation(scores, net.truth);

        bottom_tier += report.cartel_bottom_tier_fraction;
        attenuated += report.cartel_attenuated_fraction;
        elite_top += report.elite_top_tier_fraction;
        top_decile += report.cartel_top_citation_decile_fraction;
        cite_ratio += report.cartel_mean_citations /
                      std::max(1.0, report.baseline_mean_citations);
    }
    bottom_tier /= seeds;
    attenuated /= seeds;
    elite_top /= seeds;
    top_decile /= seeds;
    cite_ratio /= seeds;

    check.require(top_decile >= 0.9, "cartel top-citation-decile fraction " + fmt(top_decile));
    check.require(bottom_tier >= 0.9, "cartel bottom-tier fraction " + fmt(bottom_tier));
    check.require(attenuated >= 0.9, "cartel attenuated fraction " + fmt(attenuated));
    check.require(elite_top >= 0.9, "elite top-tier fraction " + fmt(elite_top));
    if (kPinnedCartelAttenuatedFraction >= 0.0)
        check.require(std::abs(attenuated - kPinnedCartelAttenuatedFraction) < 1e-9,
                      "regression: attenuated fraction moved from pinned " +
                          fmt(kPinnedCartelAttenuatedFraction) + " to " + fmt(attenuated));

    std::ostringstream detail;
    detail << seeds << " seeds: cartel top-decile " << fmt(top_decile) << ", bottom-tier "
           << fmt(bottom_tier) << ", attenuated " << fmt(attenuated) << ", elite top-tier "
           << fmt(elite_top) << ", raw-citation ratio " << fmt(cite_ratio);
    if (kPinnedCartelAttenuatedFraction < 0.0) detail << " [baseline pending first pin]";
    if (!outcome.detail.empty()) detail << "; " << outcome.detail;
    outcome.detail = detail.str();
    return outcome;
}

// --- 7. Statistics verification ----------------------------------------------

Outcome statistics_verification() {
    Outcome outcome;
    Check check{outcome};

    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> real(-5, 5);
    double worst_rho = 0, worst_d = 0;
    int spearman_runs = 0;

    for (int trial = 0; trial < 1000; ++trial) {
        std::size_t n = 2 + rng() % 30;
        std::vector<double> x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = std::round(real(rng)); // integer grid forces ties
            y[i] = std::round(real(rng));
        }
        auto constant = [](const std::vector<double>& v) {
            return std::all_of(v.begin(), v.end(), [&](double e) { return e == v[0]; });
        };
        if (!constant(x) && !constant(y)) {
            ++spearman_runs;
            worst_rho = std::max(worst_rho,
                                 std::abs(spearman(x, y) - oracle::brute_spearman(x, y)));
        }

        std::size_t m = 1 + rng() % 30;
        std::vector<double> b(m);
        for (auto& v : b) v = std::round(real(rng));
        worst_d = std::max(worst_d,
                           std::abs(ks_two_sample(x, b).d - oracle::brute_ks_d(x, b)));

        if (trial % 50 == 0) {
            check.require(ks_two_sample(x, x).d == 0.0, "KS D must be 0 on identical samples");
            std::vector<double> inc(n), dec(n);
            for (std::size_t i = 0; i < n; ++i) {
                inc[i] = static_cast<double>(i);
                dec[i] = static_cast<double>(n - i);
            }
            check.require(std::abs(spearman(inc, inc) - 1.0) < 1e-12, "monotone pair must give 1");
            check.require(std::abs(spearman(inc, dec) + 1.0) < 1e-12,
                          "antitone pair must give -1");
            if (!outcome.pass) return outcome;
        }
    }
    check.require(spearman_runs >= 900, "not enough non-degenerate spearman samples");
    check.require(worst_rho <= 1e-10, "worst spearman deviation " + fmt(worst_rho));
    check.require(worst_d <= 1e-10, "worst KS deviation " + fmt(worst_d));
    outcome.detail = "1000 samples, worst spearman dev " + fmt(worst_rho) + ", worst KS dev " +
                     fmt(worst_d) + (outcome.detail.empty() ? "" : "; " + outcome.detail);
    return outcome;
}

// --- 8. Determinism ----------------------------------------------------------

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

Outcome determinism() {
    Outcome outcome;
    Check check{outcome};

    auto root = std::filesystem::temp_directory_path() / "rc_acceptance_determinism";
    std::filesystem::remove_all(root);

    auto run_all = [&](const std::filesystem::path& base) {
        PipelineOptions o;
        o.synth = reference_config(7);
        o.synth.journal_count = 60;
        o.synth.works_per_journal = 10;
        o.synth.author_pool = 300;
        o.synth.institution_pool = 100;
        o.synth.honest_elite_size = 10;
        o.synth.cartel_size = 10;
        o.synth.cartel_citation_boost = 8;
        o.out_dir = (base / "synth").string();
        if (run_synth(o) != 0) return false;

        o.journals = (base / "synth" / "journals.jsonl").string();
        o.works = (base / "synth" / "works.jsonl").string();
        o.edges = (base / "synth" / "edges.jsonl").string();
        o.institutions = (base / "synth" / "institutions.jsonl").string();
        o.census_year = 2020;
        for (std::uint32_t s = 1; s <= o.synth.ranking_source_count; ++s)
            o.rankings.push_back((base / "synth" / ("synth_rank_" + std::to_string(s) + ".csv"))
                                     .string());
        o.out_dir = (base / "solve").string();
        if (run_solve(o) != 0) return false;

        o.labels_csv = (base / "synth" / "truth.csv").string();
        o.out_dir = (base / "score").string();
        if (run_score(o) != 0) return false;

        o.authors_csv = (base / "score" / "authors.csv").string();
        o.scores_csv = (base / "solve" / "journal_scores.csv").string();
        o.out_dir = (base / "report").string();
        return run_report(o) == 0;
    };

    check.require(run_all(root / "a"), "first pipeline run failed");
    check.require(run_all(root / "b"), "second pipeline run failed");
    if (!outcome.pass) return outcome;

    std::size_t compared = 0;
    for (auto& entry : std::filesystem::recursive_directory_iterator(root / "a")) {
        if (!entry.is_regular_file()) continue;
        if (entry.path().filename() == "run_manifest.json") continue; // timestamps differ
        auto relative = std::filesystem::relative(entry.path(), root / "a");
        ++compared;
        if (slurp(entry.path()) != slurp(root / "b" / relative)) {
            check.require(false, "outputs differ: " + relative.string());
            break;
        }
    }
    check.require(compared >= 10, "too few outputs compared");
    std::filesystem::remove_all(root);
    outcome.detail = std::to_string(compared) + " output files byte-identical" +
                     (outcome.detail.empty() ? "" : "; " + outcome.detail);
    return outcome;
}

} // namespace

int main() {
    struct Criterion {
        int number;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "convergence fidelity", convergence_fidelity},
        {2, "oracle equivalence", oracle_equivalence},
        {3, "exact bounds", exact_bounds},
        {4, "prestige arithmetic", prestige_arithmetic},
        {5, "scale invariance", scale_invariance},
        {6, "screening power", screening_power},
        {7, "statistics verification", statistics_verification},
        {8, "determinism", determinism},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        Outcome outcome;
        try {
            outcome = criterion.run();
        } catch (const std::exception& e) {
            outcome.pass = false;
            outcome.detail = std::string("exception: ") + e.what();
        }
        if (!outcome.pass) ++failures;
        std::printf("[%s] %d. %s: %s\n", outcome.pass ? "PASS" : "FAIL", criterion.number,
                    criterion.name, outcome.detail.c_str());
        std::fflush(stdout);
    }
    if (failures) std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
