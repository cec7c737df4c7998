#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rc/openalex.hpp"
#include "rc/scoring.hpp"
#include "rc/solver.hpp"
#include "rc/synth.hpp"

namespace rc {

inline constexpr const char* kToolName = "rcscreen";
inline constexpr const char* kToolVersion = "0.1.0";

// Everything a subcommand can consume; the CLI fills the relevant subset.
struct PipelineOptions {
    std::string journals, works, edges, institutions;
    std::vector<std::string> rankings;
    std::string prestige_csv;   // precomputed table, alternative to rankings
    std::string authors_csv;    // segment/report input
    std::string scores_csv;     // journal scores, for report
    std::string labels_csv;     // author_id,label
    std::string indicators_csv; // per-journal indicator columns, for report
    std::optional<int> census_year;
    int exogenous_default_f = 1;
    SolverConfig solver;
    ScoringOptions scoring;
    SynthConfig synth;
    FetchSpec fetch;
    std::string out_dir;
};

// Subcommand runners. Each writes its outputs plus run_manifest.json under
// out_dir and returns a process exit status; the manifest is written even on
// failure, tagged with the failing stage.
int run_ingest(const PipelineOptions& options);
int run_fetch(const PipelineOptions& options);
int run_prestige(const PipelineOptions& options);
int run_solve(const PipelineOptions& options);
int run_score(const PipelineOptions& options);
int run_segment(const PipelineOptions& options);
int run_report(const PipelineOptions& options);
int run_synth(const PipelineOptions& options);

// Shared output writers (also used by tests).
void write_journal_scores_csv(const CitationGraph& graph, const JournalScores& scores,
                              const std::filesystem::path& path);
void write_trace_csv(const JournalScores& scores, const std::filesystem::path& path);
void write_converged_weights_csv(const CitationGraph& graph, const ConvergedWeights& weights,
                                 const std::filesystem::path& path);
void write_authors_csv(const std::vector<AuthorScore>& scores, const TierAssignment* tiers,
                       const std::map<std::string, std::string>& labels,
                       const std::filesystem::path& path);

std::map<std::string, std::string> read_labels_csv(const std::filesystem::path& path);
// When `labels` is given, non-empty label-column values are collected there.
std::vector<AuthorScore> read_authors_csv(const std::filesystem::path& path,
                                          std::map<std::string, std::string>* labels = nullptr);

} // namespace rc
