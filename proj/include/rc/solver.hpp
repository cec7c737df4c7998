#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rc/model.hpp"
#include "rc/prestige.hpp"

namespace rc {

enum class ExogenousMode { include, exclude };
enum class AffiliationCombine { mean, max };

// Variant switches and numeric knobs for the prestige recursion. Defaults
// give the reference model: institutional prestige on, exogenous citations
// excluded.
struct SolverConfig {
    bool use_institutional_prestige = true;
    ExogenousMode exogenous_mode = ExogenousMode::exclude;
    AffiliationCombine affiliation_combine = AffiliationCombine::mean;
    double scale_min = 0.05;
    double scale_max = 10.0;
    double tolerance = 1e-4;
    std::uint32_t max_iterations = 1000;
    bool record_history = false; // keep every iteration's in-set score vector

    void validate() const; // 0 < scale_min < scale_max, tolerance > 0, max_iterations >= 1

    bool operator==(const SolverConfig&) const = default;
};

// Converged journal scores plus the iteration trace. scores is indexed by
// journal; exogenous journals hold NaN and are not part of the score map.
struct JournalScores {
    std::vector<double> scores;
    std::uint32_t iteration_count = 0;
    std::vector<double> trace;           // mean rescaled score after each iteration
    std::vector<double> max_delta_trace; // max per-journal move, reported only
    double final_delta = 0.0;            // |mean(k) - mean(k-1)| at the stop
    std::vector<std::vector<double>> history; // per-iteration in-set scores, when recorded

    double at(Index journal) const { return scores[journal]; }
};

// Per-edge converged citation weights, Eq.-1 form evaluated at the fixed
// point. Only edges whose cited work is in some census set carry a weight.
struct ConvergedWeights {
    std::vector<double> weights;          // by edge index; 0 where gated off by f
    std::vector<std::uint8_t> in_domain;  // cited work is a census work
    SolverConfig config;

    double at(Index edge) const { return weights[edge]; }
    bool scored(Index edge) const { return in_domain[edge] != 0; }
};

struct SolveResult {
    JournalScores scores;
    ConvergedWeights weights;
};

// The {0,1} citation gate under this config: 1 for in-set citing journals,
// the edge's stored f for exogenous citing journals in include mode, 0 in
// exclude mode.
int effective_f(const CitationGraph& graph, Index edge, const SolverConfig& config);

// Combined prestige of the citing work's affiliations (mean or max), 1.0
// when the work has no resolvable affiliation or institutional prestige is
// switched off.
double institutional_factor(const CitationGraph& graph, Index work,
                            const PrestigeTable& prestige, const SolverConfig& config);

// Weight of one citation at the current journal scores: institutional factor
// times the citing journal's score for in-set citers, 1.0 for exogenous
// citers, gated by f. The cited journal must be in the set.
double citation_weight(const CitationGraph& graph, Index edge, const PrestigeTable& prestige,
                       std::span<const double> journal_scores, const SolverConfig& config);

// Pre-rescale update for one journal: the f-gated weight sum over all
// incoming citations to its census works, divided by N_j.
double journal_update(const CitationGraph& graph, Index journal, const PrestigeTable& prestige,
                      std::span<const double> journal_scores, const SolverConfig& config);

// Affine map sending min -> scale_min and max -> scale_max. A constant
// vector maps to the midpoint. Rejects non-finite input.
std::vector<double> rescale(std::vector<double> raw, const SolverConfig& config);

// Iterates update-then-rescale from unit scores until the mean journal score
// moves less than config.tolerance between consecutive iterations. Returns
// converged scores, the trace, and per-edge converged weights. Throws
// ConvergenceError (carrying delta and trace) if max_iterations is exceeded.
SolveResult solve(const CitationGraph& graph, const PrestigeTable& prestige,
                  const SolverConfig& config = {});

} // namespace rc
