#include "rc/pipeline.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <set>

#include <json.hpp>

#include "rc/analytics.hpp"
#include "rc/csv.hpp"
#include "rc/error.hpp"
#include "rc/ingest.hpp"
#include "rc/prestige.hpp"

namespace rc {

namespace {

using json = nlohmann::ordered_json;

double parse_double_field(const std::string& s, const std::filesystem::path& path,
                          std::size_t lineno) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError(path.string(), lineno, "expected a number, got '" + s + "'");
    return v;
}

std::uint64_t parse_count_field(const std::string& s, const std::filesystem::path& path,
                                std::size_t lineno) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw ParseError(path.string(), lineno, "expected a count, got '" + s + "'");
    return v;
}

std::string iso_timestamp() {
    std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buf;
}

// Collects the run manifest and guarantees it is written exactly once, even
// when a stage fails.
class Manifest {
public:
    Manifest(std::string subcommand, const std::filesystem::path& out_dir) : out_dir_(out_dir) {
        std::filesystem::create_directories(out_dir_);
        doc_["tool"] = kToolName;
        doc_["version"] = kToolVersion;
        doc_["subcommand"] = std::move(subcommand);
        doc_["started_at"] = iso_timestamp();
        doc_["status"] = "running";
        doc_["config"] = json::object();
        doc_["inputs"] = json::array();
        doc_["outputs"] = json::array();
        doc_["timings_ms"] = json::object();
    }

    void config(json snapshot) { doc_["config"] = std::move(snapshot); }

    void input(const std::filesystem::path& path) {
        auto digest = csv::file_digest(path); // may throw; keep it out of the initializer
        doc_["inputs"].push_back({{"path", path.string()}, {"digest", std::move(digest)}});
    }

    void output(const std::filesystem::path& path) {
        doc_["outputs"].push_back(path.string());
    }

    template <typename F>
    auto stage(const std::string& name, F&& body) {
        current_ = name;
        auto start = std::chrono::steady_clock::now();
        if constexpr (std::is_void_v<decltype(body())>) {
            body();
            record(name, start);
        } else {
            auto result = body();
            record(name, start);
            return result;
        }
    }

    void note(const std::string& key, json value) { doc_[key] = std::move(value); }

    int ok() {
        doc_["status"] = "ok";
        write();
        return 0;
    }

    int fail(const std::string& what) {
        doc_["status"] = "error";
        doc_["error_stage"] = current_;
        doc_["error"] = what;
        write();
        return 1;
    }

private:
    void record(const std::string& name, std::chrono::steady_clock::time_point start) {
        auto elapsed = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - start)
                           .count();
        doc_["timings_ms"][name] = elapsed;
    }

    void write() {
        std::ofstream out(out_dir_ / "run_manifest.json", std::ios::binary);
        out << doc_.dump(2) << '\n';
    }

    json doc_;
    std::filesystem::path out_dir_;
    std::string current_ = "init";
};

json solver_config_json(const SolverConfig& c) {
    return {{"use_institutional_prestige", c.use_institutional_prestige},
            {"exogenous", c.exogenous_mode == ExogenousMode::include ? "include" : "exclude"},
            {"affiliation_combine",
             c.affiliation_combine == AffiliationCombine::mean ? "mean" : "max"},
            {"scale_min", c.scale_min},
            {"scale_max", c.scale_max},
            {"tolerance", c.tolerance},
            {"max_iterations", c.max_iterations}};
}

json graph_options_json(const PipelineOptions& o) {
    json j{{"exogenous_default_f", o.exogenous_default_f}};
    if (o.census_year) j["census_year"] = *o.census_year;
    return j;
}

GraphOptions graph_options(const PipelineOptions& o) {
    return {o.census_year, o.exogenous_default_f};
}

CitationGraph load_graph(const PipelineOptions& o, Manifest& m) {
    for (const auto& path : {o.journals, o.works, o.edges, o.institutions})
        if (path.empty())
            throw ValidationError("missing input: --journals, --works, --edges and "
                                  "--institutions are all required");
    m.input(o.journals);
    m.input(o.works);
    m.input(o.edges);
    m.input(o.institutions);
    auto records = m.stage("parse", [&] {
        return parse_entity_files(o.journals, o.works, o.edges, o.institutions);
    });
    return m.stage("build", [&] {
        return build_graph(std::move(records.institutions), std::move(records.journals),
                           std::move(records.works), std::move(records.edges), graph_options(o));
    });
}

PrestigeTable load_prestige(const PipelineOptions& o, Manifest& m, const CitationGraph& graph) {
    if (!o.prestige_csv.empty()) {
        m.input(o.prestige_csv);
        return read_prestige_csv(o.prestige_csv);
    }
    if (!o.rankings.empty()) {
        std::vector<RankingSourceFile> sources;
        for (const auto& path : o.rankings) {
            m.input(path);
            sources.push_back(parse_ranking_file(path));
        }
        std::vector<std::string> universe;
        universe.reserve(graph.institutions().size());
        for (const auto& inst : graph.institutions()) universe.push_back(inst.id);
        return institution_prestige(sources, universe);
    }
    // No prestige inputs: every institution sits at the floor.
    PrestigeTable table;
    for (const auto& inst : graph.institutions()) table.scores.emplace(inst.id, 1.0);
    return table;
}

std::string bool_str(bool v) { return v ? "true" : "false"; }

} // namespace

void write_journal_scores_csv(const CitationGraph& graph, const JournalScores& scores,
                              const std::filesystem::path& path) {
    csv::Writer out(path);
    out.row({"journal_id", "rc_score", "iterations"});
    for (Index j : graph.in_set_journals())
        out.row({graph.journals()[j].id, csv::format_double(scores.scores[j]),
                 std::to_string(scores.iteration_count)});
}

void write_trace_csv(const JournalScores& scores, const std::filesystem::path& path) {
    csv::Writer out(path);
    out.row({"iteration", "mean_score", "max_delta"});
    for (std::size_t i = 0; i < scores.trace.size(); ++i)
        out.row({std::to_string(i + 1), csv::format_double(scores.trace[i]),
                 csv::format_double(scores.max_delta_trace[i])});
}

void write_converged_weights_csv(const CitationGraph& graph, const ConvergedWeights& weights,
                                 const std::filesystem::path& path) {
    csv::Writer out(path);
    out.row({"citing_work_id", "cited_work_id", "weight"});
    for (Index e = 0; e < graph.edges().size(); ++e) {
        if (!weights.scored(e)) continue;
        out.row({graph.edges()[e].citing_work_id, graph.edges()[e].cited_work_id,
                 csv::format_double(weights.at(e))});
    }
}

void write_authors_csv(const std::vector<AuthorScore>& scores, const TierAssignment* tiers,
                       const std::map<std::string, std::string>& labels,
                       const std::filesystem::path& path) {
    std::map<std::string, int> tier_of;
    if (tiers)
        for (std::size_t i = 0; i < tiers->authors.size(); ++i)
            tier_of[tiers->authors[i]] = tiers->tier[i];

    csv::Writer out(path);
    out.row({"author_id", "label", "R_a", "L_a", "citations_per_paper", "rc", "attenuated",
             "tier"});
    for (const auto& s : scores) {
        auto label = labels.find(s.author_id);
        auto tier = tier_of.find(s.author_id);
        out.row({s.author_id, label == labels.end() ? "" : label->second,
                 std::to_string(s.work_count), std::to_string(s.citation_count),
                 csv::format_double(s.citations_per_paper), csv::format_double(s.rc),
                 bool_str(s.attenuated), tier == tier_of.end() ? "0" : std::to_string(tier->second)});
    }
}

std::map<std::string, std::string> read_labels_csv(const std::filesystem::path& path) {
    auto table = csv::read_file(path);
    if (table.header.size() < 2 || table.header[0] != "author_id" || table.header[1] != "label")
        throw ParseError(path.string(), 1, "expected header author_id,label");
    std::map<std::string, std::string> labels;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        if (table.rows[i].size() < 2)
            throw ParseError(path.string(), table.row_lines[i], "expected 2 fields");
        labels[table.rows[i][0]] = table.rows[i][1];
    }
    return labels;
}

std::vector<AuthorScore> read_authors_csv(const std::filesystem::path& path,
                                          std::map<std::string, std::string>* labels) {
    auto table = csv::read_file(path);
    const std::vector<std::string> expected{"author_id", "label",      "R_a",
                                            "L_a",       "citations_per_paper", "rc",
                                            "attenuated", "tier"};
    if (table.header != expected)
        throw ParseError(path.string(), 1,
                         "expected header author_id,label,R_a,L_a,citations_per_paper,rc,"
                         "attenuated,tier");
    std::vector<AuthorScore> scores;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        const std::size_t lineno = table.row_lines[i];
        if (row.size() != 8) throw ParseError(path.string(), lineno, "expected 8 fields");
        AuthorScore s;
        s.author_id = row[0];
        s.work_count = static_cast<std::uint32_t>(parse_count_field(row[2], path, lineno));
        s.citation_count = parse_count_field(row[3], path, lineno);
        s.citations_per_paper = parse_double_field(row[4], path, lineno);
        s.rc = parse_double_field(row[5], path, lineno);
        s.attenuated = row[6] == "true";
        if (labels && !row[1].empty()) (*labels)[row[0]] = row[1];
        scores.push_back(std::move(s));
    }
    return scores;
}

int run_ingest(const PipelineOptions& o) {
    Manifest m("ingest", o.out_dir);
    try {
        m.config(graph_options_json(o));
        CitationGraph graph = load_graph(o, m);
        m.stage("write", [&] { dump_graph(graph, o.out_dir); });
        for (const char* name : {"journals.jsonl", "works.jsonl", "edges.jsonl",
                                 "institutions.jsonl"})
            m.output(std::filesystem::path(o.out_dir) / name);
        m.note("counts", json{{"institutions", graph.institutions().size()},
                              {"journals", graph.journals().size()},
                              {"works", graph.works().size()},
                              {"edges", graph.edges().size()},
                              {"authors", graph.author_ids().size()}});
        return m.ok();
    } catch (const std::exception& e) {
        std::cerr << "ingest: " << e.what() << '\n';
        return m.fail(e.what());
    }
}

int run_fetch(const PipelineOptions& o) {
    Manifest m("fetch", o.out_dir);
    try {
        m.config(json{{"base_url", o.fetch.base_url},
                      {"census_year", o.fetch.census_year},
                      {"journal_ids", o.fetch.journal_external_ids},
                      {"rate_limit", o.fetch.rate_limit},
                      {"page_size", o.fetch.page_size}});
        FetchResult result = m.stage("fetch", [&] { return fetch_openalex_works(o.fetch); });
        m.stage("write", [&] {
            std::filesystem::path dir(o.out_dir);
            write_journals_jsonl(result.records.journals, dir / "journals.jsonl");
            write_works_jsonl(result.records.works, dir / "works.jsonl");
            write_edges_jsonl(result.records.edges, dir / "edges.jsonl");
            write_institutions_jsonl(result.records.institutions, dir / "institutions.jsonl");
        });
        for (const char* name : {"journals.jsonl", "works.jsonl", "edges.jsonl",
                                 "institutions.jsonl"})
            m.output(std::filesystem::path(o.out_dir) / name);
        m.note("fetch_stats", json{{"pages", result.pages_fetched},
                                   {"works_seen", result.works_seen},
                                   {"dropped_no_journal", result.dropped_no_journal},
                                   {"malformed_skipped", result.malformed_skipped},
                                   {"out_of_universe_refs", result.out_of_universe_refs},
                                   {"retries", result.retries}});
        return m.ok();
    } catch (const std::exception& e) {
        std::cerr << "fetch: " << e.what() << '\n';
        return m.fail(e.what());
    }
}

int run_prestige(const PipelineOptions& o) {
    Manifest m("prestige", o.out_dir);
    try {
        if (o.rankings.empty()) throw ValidationError("missing input: --rankings");
        if (o.institutions.empty()) throw ValidationError("missing input: --institutions");
        m.config(json{{"rankings", o.rankings}});
        m.input(o.institutions);
        auto universe_records = m.stage("parse", [&] {
            return parse_institutions_jsonl(o.institutions);
        });
        std::vector<RankingSourceFile> sources;
        for (const auto& path : o.rankings) {
            m.input(path);
            sources.push_back(parse_ranking_file(path));
        }
        auto table = m.stage("aggregate", [&] {
            std::vector<std::string> universe;
            universe.reserve(universe_records.size());
            for (const auto& inst : universe_records) universe.push_back(inst.id);
            return institution_prestige(sources, universe);
        });
        auto out_path = std::filesystem::path(o.out_dir) / "prestige.csv";
        m.stage("write", [&] { write_prestige_csv(table, out_path); });
        m.output(out_path);
        return m.ok();
    } catch (const std::exception& e) {
        std::cerr << "prestige: " << e.what() << '\n';
        return m.fail(e.what());
    }
}

int run_solve(const PipelineOptions& o) {
    Manifest m("solve", o.out_dir);
    try {
        json config = solver_config_json(o.solver);
        config["graph"] = graph_options_json(o);
        m.config(config);
        CitationGraph graph = load_graph(o, m);
        PrestigeTable prestige = load_prestige(o, m, graph);
        if (o.solver.exogenous_mode == ExogenousMode::include &&
            graph.in_set_journal_count() == graph.journals().size())
            std::cerr << "solve: warning: exogenous citations included but no exogenous "
                         "journals present\n";
        SolveResult result = m.stage("solve", [&] { return solve(graph, prestige, o.solver); });
        std::filesystem::path dir(o.out_dir);
        m.stage("write", [&] {
            write_journal_scores_csv(graph, result.scores, dir / "journal_scores.csv");
            write_trace_csv(result.scores, dir / "trace.csv");
            write_converged_weights_csv(graph, result.weights, dir / "converged_weights.csv");
        });
        m.output(dir / "journal_scores.csv");
        m.output(dir / "trace.csv");
        m.output(dir / "converged_weights.csv");
        m.note("iterations", json(result.scores.iteration_count));
        return m.ok();
    } catch (const std::exception& e) {
        std::cerr << "solve: " << e.what() << '\n';
        return m.fail(e.what());
    }
}

int run_score(const PipelineOptions& o) {
    Manifest m("score", o.out_dir);
    try {
        json config = solver_config_json(o.solver);
        config["graph"] = graph_options_json(o);
        config["include_self_citations"] = o.scoring.include_self_citations;
        m.config(config);
        CitationGraph graph = load_graph(o, m);
        PrestigeTable prestige = load_prestige(o, m, graph);
        std::map<std::string, std::string> labels;
        if (!o.labels_csv.empty()) {
            m.input(o.labels_csv);
            labels = read_labels_csv(o.labels_csv);
        }
        SolveResult solved = m.stage("solve", [&] { return solve(graph, prestige, o.solver); });
        auto scores = m.stage("score", [&] {
            return score_all_authors(graph, solved.weights, o.scoring);
        });
        std::optional<TierAssignment> tiers;
        if (scores.size() >= 3) tiers = segment_tiers(scores, labels);
        auto out_path = std::filesystem::path(o.out_dir) / "authors.csv";
        m.stage("write", [&] {
            write_authors_csv(scores, tiers ? &*tiers : nullptr, labels, out_path);
        });
        m.output(out_path);
        m.note("authors_scored", json(scores.size()));
        return m.ok();
    } catch (const std::exception& e) {
        std::cerr << "score: " << e.what() << '\n';
        return m.fail(e.what());
    }
}

int run_segment(const PipelineOptions& o) {
    Manifest m("segment", o.out_dir);
    try {
        if (o.authors_csv.empty()) throw ValidationError("missing input: --authors");
        m.config(json::object());
        m.input(o.authors_csv);
        std::map<std::string, std::string> labels;
        auto scores = m.stage("parse", [&] { return read_authors_csv(o.authors_csv, &labels); });
        if (!o.labels_csv.empty()) {
            m.input(o.labels_csv);
            for (const auto& [author, label] : read_labels_csv(o.labels_csv))
                labels[author] = label; // explicit labels override the column
        }
        auto tiers = m.stage("segment", [&] { return segment_tiers(scores, labels); });

        std::filesystem::path dir(o.out_dir);
        m.stage("write", [&] {
            std::map<std::string, const AuthorScore*> by_id;
            for (const auto& s : scores) by_id[s.author_id] = &s;
            csv::Writer rows(dir / "tiers.csv");
            rows.row({"author_id", "label", "rc", "tier"});
            for (std::size_t i = 0; i < tiers.authors.size(); ++i) {
                auto label = labels.find(tiers.authors[i]);
                rows.row({tiers.authors[i], label == labels.end() ? "" : label->second,
                          csv::format_double(by_id[tiers.authors[i]]->rc),
                          std::to_string(tiers.tier[i])});
            }
            csv::Writer counts(dir / "tier_counts.csv");
            counts.row({"label", "tier_1", "tier_2", "tier_3"});
            for (const auto& [label, per_tier] : tiers.label_counts)
                counts.row({label, std::to_string(per_tier[0]), std::to_string(per_tier[1]),
                            std::to_string(per_tier[2])});
        });
        m.output(dir / "tiers.csv");
        m.output(dir / "tier_counts.csv");
        return m.ok();
    } catch (const std::exception& e) {
        std::cerr << "segment: " << e.what() << '\n';
        return m.fail(e.what());
    }
}

int run_report(const PipelineOptions& o) {
    Manifest m("report", o.out_dir);
    try {
        if (o.authors_csv.empty()) throw ValidationError("missing input: --authors");
        m.config(json::object());
        CitationGraph graph = load_graph(o, m);
        m.input(o.authors_csv);
        std::map<std::string, std::string> labels;
        auto author_scores =
            m.stage("parse", [&] { return read_authors_csv(o.authors_csv, &labels); });
        if (!o.labels_csv.empty()) {
            m.input(o.labels_csv);
            for (const auto& [author, label] : read_labels_csv(o.labels_csv))
                labels[author] = label;
        }

        // Samples = label groups; rc lookup for component statistics.
        std::vector<std::pair<std::string, std::set<std::string>>> samples;
        {
            std::map<std::string, std::set<std::string>> grouped;
            for (const auto& [author, label] : labels)
                if (!label.empty()) grouped[label].insert(author);
            samples.assign(grouped.begin(), grouped.end());
        }
        std::map<std::string, double> rc_of;
        std::map<std::string, double> cites_of;
        for (const auto& s : author_scores) {
            rc_of[s.author_id] = s.rc;
            cites_of[s.author_id] = static_cast<double>(s.citation_count);
        }

        std::filesystem::path dir(o.out_dir);
        m.stage("tables", [&] {
            auto reports = summary_and_share_tables(graph, samples);
            csv::Writer summary(dir / "summary.csv");
            summary.row({"label", "articles", "journals", "coauthors", "institutions",
                         "mean_citations", "mean_authors", "mean_institutions", "mean_countries",
                         "mean_pages", "mean_references", "works_without_country",
                         "works_without_pages", "works_without_references"});
            for (const auto& r : reports) {
                const auto& s = r.summary;
                summary.row({s.label, std::to_string(s.articles), std::to_string(s.journals),
                             std::to_string(s.coauthors), std::to_string(s.institutions),
                             csv::format_double(s.mean_citations),
                             csv::format_double(s.mean_authors),
                             csv::format_double(s.mean_institutions),
                             csv::format_double(s.mean_countries),
                             csv::format_double(s.mean_pages),
                             csv::format_double(s.mean_references),
                             std::to_string(s.works_without_country),
                             std::to_string(s.works_without_pages),
                             std::to_string(s.works_without_references)});
            }
            auto write_shares = [&](const char* name,
                                    std::vector<ShareEntry> SampleReport::*field) {
                csv::Writer out(dir / name);
                out.row({"label", "key", "works", "share"});
                for (const auto& r : reports)
                    for (const auto& entry : r.*field)
                        out.row({r.summary.label, entry.key, std::to_string(entry.works),
                                 csv::format_double(entry.share)});
            };
            write_shares("journal_shares.csv", &SampleReport::journal_shares);
            write_shares("institution_shares.csv", &SampleReport::institution_shares);
            write_shares("country_shares.csv", &SampleReport::country_shares);
        });
        m.output(dir / "summary.csv");
        m.output(dir / "journal_shares.csv");
        m.output(dir / "institution_shares.csv");
        m.output(dir / "country_shares.csv");

        m.stage("components", [&] {
            csv::Writer out(dir / "components.csv");
            out.row({"label", "component", "size", "rc_mean", "rc_sd", "members"});
            for (const auto& [label, members] : samples) {
                auto net = coauthorship_components(graph, members, &rc_of);
                for (std::size_t c = 0; c < net.components.size(); ++c) {
                    const auto& component = net.components[c];
                    std::string joined;
                    for (const auto& id : component.members) {
                        if (!joined.empty()) joined += ';';
                        joined += id;
                    }
                    out.row({label, std::to_string(c + 1),
                             std::to_string(component.members.size()),
                             component.has_scores ? csv::format_double(component.rc_mean) : "",
                             component.has_scores ? csv::format_double(component.rc_sd) : "",
                             joined});
                }
            }
        });
        m.output(dir / "components.csv");

        m.stage("figures", [&] {
            // Fig.-3 analogue: per-author raw citations vs rc.
            csv::Writer fig3(dir / "fig3_authors.csv");
            fig3.row({"author_id", "label", "citations", "rc"});
            for (const auto& s : author_scores) {
                auto label = labels.find(s.author_id);
                fig3.row({s.author_id, label == labels.end() ? "" : label->second,
                          std::to_string(s.citation_count), csv::format_double(s.rc)});
            }
        });
        m.output(dir / "fig3_authors.csv");

        // Statistical tests between samples, plus indicator correlations when
        // per-journal columns are supplied alongside solved scores.
        m.stage("stats", [&] {
            csv::Writer stats(dir / "stat_tests.csv");
            stats.row({"test", "a", "b", "statistic", "p_or_n"});
            for (std::size_t i = 0; i < samples.size(); ++i) {
                for (std::size_t j = i + 1; j < samples.size(); ++j) {
                    auto collect = [&](const std::set<std::string>& members,
                                       const std::map<std::string, double>& values) {
                        std::vector<double> v;
                        for (const auto& id : members) {
                            auto it = values.find(id);
                            if (it != values.end()) v.push_back(it->second);
                        }
                        return v;
                    };
                    auto rc_a = collect(samples[i].second, rc_of);
                    auto rc_b = collect(samples[j].second, rc_of);
                    if (!rc_a.empty() && !rc_b.empty()) {
                        auto ks = ks_two_sample(rc_a, rc_b);
                        stats.row({"ks_rc", samples[i].first, samples[j].first,
                                   csv::format_double(ks.d), csv::format_double(ks.p)});
                    }
                    auto cites_a = collect(samples[i].second, cites_of);
                    auto cites_b = collect(samples[j].second, cites_of);
                    if (!cites_a.empty() && !cites_b.empty()) {
                        auto ks = ks_two_sample(cites_a, cites_b);
                        stats.row({"ks_citations", samples[i].first, samples[j].first,
                                   csv::format_double(ks.d), csv::format_double(ks.p)});
                    }
                }
            }

            if (!o.scores_csv.empty()) {
                auto score_table = csv::read_file(o.scores_csv);
                std::map<std::string, double> rc_score;
                for (std::size_t i = 0; i < score_table.rows.size(); ++i)
                    rc_score[score_table.rows[i][0]] = parse_double_field(
                        score_table.rows[i][1], o.scores_csv, score_table.row_lines[i]);

                csv::Writer fig1(dir / "fig1_journals.csv");
                std::vector<std::string> header{"journal_id", "rc_score"};
                csv::Table indicators;
                if (!o.indicators_csv.empty()) {
                    indicators = csv::read_file(o.indicators_csv);
                    for (std::size_t c = 1; c < indicators.header.size(); ++c)
                        header.push_back(indicators.header[c]);
                }
                fig1.row(header);
                std::map<std::string, std::vector<std::string>> indicator_rows;
                for (const auto& row : indicators.rows) indicator_rows[row[0]] = row;
                std::vector<std::vector<double>> columns(header.size() - 2);
                std::vector<std::vector<double>> rc_paired(header.size() - 2);
                for (const auto& [journal, rc] : rc_score) {
                    std::vector<std::string> row{journal, csv::format_double(rc)};
                    auto it = indicator_rows.find(journal);
                    for (std::size_t c = 2; c < header.size(); ++c) {
                        std::string cell;
                        if (it != indicator_rows.end() && c - 1 < it->second.size())
                            cell = it->second[c - 1];
                        row.push_back(cell);
                        if (!cell.empty()) {
                            double value = 0;
                            auto [ptr, ec] =
                                std::from_chars(cell.data(), cell.data() + cell.size(), value);
                            if (ec == std::errc{} && ptr == cell.data() + cell.size()) {
                                columns[c - 2].push_back(value);
                                rc_paired[c - 2].push_back(rc);
                            }
                        }
                    }
                    fig1.row(row);
                }
                m.output(dir / "fig1_journals.csv");
                for (std::size_t c = 0; c + 2 < header.size(); ++c) {
                    if (columns[c].size() < 2) continue;
                    try {
                        double rho = spearman(rc_paired[c], columns[c]);
                        stats.row({"spearman_rc_vs_" + header[c + 2], "journals", "",
                                   csv::format_double(rho), std::to_string(columns[c].size())});
                    } catch (const ValidationError& e) {
                        std::cerr << "report: spearman skipped for " << header[c + 2] << ": "
                                  << e.what() << '\n';
                    }
                }
            }
        });
        m.output(dir / "stat_tests.csv");
        return m.ok();
    } catch (const std::exception& e) {
        std::cerr << "report: " << e.what() << '\n';
        return m.fail(e.what());
    }
}

int run_synth(const PipelineOptions& o) {
    Manifest m("synth", o.out_dir);
    try {
        m.config(json{{"seed", o.synth.seed},
                      {"journal_count", o.synth.journal_count},
                      {"works_per_journal", o.synth.works_per_journal},
                      {"author_pool", o.synth.author_pool},
                      {"institution_pool", o.synth.institution_pool},
                      {"prestige_profile", o.synth.prestige_profile},
                      {"honest_elite_size", o.synth.honest_elite_size},
                      {"cartel_size", o.synth.cartel_size},
                      {"cartel_citation_boost", o.synth.cartel_citation_boost},
                      {"base_citation_rate", o.synth.base_citation_rate},
                      {"ranking_source_count", o.synth.ranking_source_count},
                      {"census_year", o.synth.census_year}});
        SynthOutput net = m.stage("generate", [&] { return generate_network(o.synth); });
        std::filesystem::path dir(o.out_dir);
        m.stage("write", [&] {
            write_journals_jsonl(net.journals, dir / "journals.jsonl");
            write_works_jsonl(net.works, dir / "works.jsonl");
            write_edges_jsonl(net.edges, dir / "edges.jsonl");
            write_institutions_jsonl(net.institutions, dir / "institutions.jsonl");
            for (const auto& source : net.rankings)
                write_ranking_csv(source, dir / (source.source_name + ".csv"));
            csv::Writer truth(dir / "truth.csv");
            truth.row({"author_id", "label"});
            for (const auto& [id, role] : net.truth.roles) truth.row({id, role_name(role)});
        });
        for (const char* name : {"journals.jsonl", "works.jsonl", "edges.jsonl",
                                 "institutions.jsonl", "truth.csv"})
            m.output(dir / name);
        for (const auto& source : net.rankings) m.output(dir / (source.source_name + ".csv"));
        m.note("counts", json{{"works", net.works.size()}, {"edges", net.edges.size()}});
        return m.ok();
    } catch (const std::exception& e) {
        std::cerr << "synth: " << e.what() << '\n';
        return m.fail(e.what());
    }
}

} // namespace rc
