#include "rc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <execution>
#include <limits>
#include <numeric>

#include "rc/error.hpp"

namespace rc {

void SolverConfig::validate() const {
    if (!(scale_min > 0.0) || !(scale_min < scale_max))
        throw ValidationError("solver config requires 0 < scale_min < scale_max");
    if (!(tolerance > 0.0)) throw ValidationError("solver config requires tolerance > 0");
    if (max_iterations < 1) throw ValidationError("solver config requires max_iterations >= 1");
}

int effective_f(const CitationGraph& graph, Index edge, const SolverConfig& config) {
    if (graph.edge_citing_in_set(edge)) return 1;
    return config.exogenous_mode == ExogenousMode::include ? graph.edge_f(edge) : 0;
}

double institutional_factor(const CitationGraph& graph, Index work,
                            const PrestigeTable& prestige, const SolverConfig& config) {
    if (!config.use_institutional_prestige) return 1.0;
    auto affiliations = graph.work_institutions(work);
    if (affiliations.empty()) return 1.0; // missing metadata stays neutral
    if (config.affiliation_combine == AffiliationCombine::max) {
        double best = 0.0;
        for (Index inst : affiliations)
            best = std::max(best, prestige.at(graph.institutions()[inst].id));
        return best;
    }
    double sum = 0.0;
    for (Index inst : affiliations) sum += prestige.at(graph.institutions()[inst].id);
    return sum / static_cast<double>(affiliations.size());
}

double citation_weight(const CitationGraph& graph, Index edge, const PrestigeTable& prestige,
                       std::span<const double> journal_scores, const SolverConfig& config) {
    Index cited_journal = graph.work_journal(graph.edge_cited(edge));
    if (!graph.journals()[cited_journal].in_set)
        throw ValidationError("citation weight requested for an edge citing exogenous journal '" +
                              graph.journals()[cited_journal].id + "'");
    int f = effective_f(graph, edge, config);
    if (f == 0) return 0.0;
    if (!graph.edge_citing_in_set(edge)) return 1.0; // exogenous citers carry no adjustment
    Index citing_work = graph.edge_citing(edge);
    Index citing_journal = graph.work_journal(citing_work);
    return institutional_factor(graph, citing_work, prestige, config) *
           journal_scores[citing_journal];
}

double journal_update(const CitationGraph& graph, Index journal, const PrestigeTable& prestige,
                      std::span<const double> journal_scores, const SolverConfig& config) {
    const auto& record = graph.journals()[journal];
    if (!record.in_set)
        throw ValidationError("journal_update requested for exogenous journal '" + record.id + "'");
    if (record.census_paper_count == 0)
        throw ValidationError("journal '" + record.id + "' has no census papers");
    double sum = 0.0;
    for (Index e : graph.incoming_edges(journal))
        sum += citation_weight(graph, e, prestige, journal_scores, config);
    return sum / static_cast<double>(record.census_paper_count);
}

std::vector<double> rescale(std::vector<double> raw, const SolverConfig& config) {
    if (raw.empty()) throw ValidationError("rescale requires a non-empty score vector");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (double v : raw) {
        if (!std::isfinite(v)) throw ValidationError("rescale rejects non-finite scores");
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (lo == hi) {
        std::fill(raw.begin(), raw.end(), 0.5 * (config.scale_min + config.scale_max));
        return raw;
    }
    const double span = config.scale_max - config.scale_min;
    for (double& v : raw) v = config.scale_min + span * (v - lo) / (hi - lo);
    return raw;
}

namespace {

// Precomputed per-edge pieces that never change across iterations: the
// institutional factor of in-set citers, the fixed 1.0 of exogenous citers,
// and the f gate. Summation stays in ascending edge order inside each
// journal, so results are independent of the parallel schedule.
struct EdgeKernel {
    std::vector<double> factor;      // by edge; already f-gated (0 when gated off)
    std::vector<Index> citing_journal; // kNoIndex for exogenous citers
};

EdgeKernel precompute_kernel(const CitationGraph& graph, const PrestigeTable& prestige,
                             const SolverConfig& config) {
    const Index edge_count = static_cast<Index>(graph.edges().size());
    const Index work_count = static_cast<Index>(graph.works().size());
    std::vector<double> work_factor(work_count, -1.0); // lazily filled
    EdgeKernel kernel;
    kernel.factor.resize(edge_count);
    kernel.citing_journal.resize(edge_count);
    for (Index e = 0; e < edge_count; ++e) {
        int f = effective_f(graph, e, config);
        if (f == 0) {
            kernel.factor[e] = 0.0;
            kernel.citing_journal[e] = kNoIndex;
            continue;
        }
        if (!graph.edge_citing_in_set(e)) {
            kernel.factor[e] = 1.0;
            kernel.citing_journal[e] = kNoIndex;
            continue;
        }
        Index citing = graph.edge_citing(e);
        if (work_factor[citing] < 0.0)
            work_factor[citing] = institutional_factor(graph, citing, prestige, config);
        kernel.factor[e] = work_factor[citing];
        kernel.citing_journal[e] = graph.work_journal(citing);
    }
    return kernel;
}

} // namespace

SolveResult solve(const CitationGraph& graph, const PrestigeTable& prestige,
                  const SolverConfig& config) {
    config.validate();
    auto in_set = graph.in_set_journals();
    if (in_set.empty()) throw ValidationError("solve requires at least one in-set journal");

    const Index journal_count = static_cast<Index>(graph.journals().size());
    const EdgeKernel kernel = precompute_kernel(graph, prestige, config);

    std::vector<double> scores(journal_count, std::numeric_limits<double>::quiet_NaN());
    for (Index j : in_set) scores[j] = 1.0;

    JournalScores result;
    double prev_mean = 1.0; // mean of the unit initial scores
    std::vector<double> raw(in_set.size());
    bool converged = false;

    for (std::uint32_t iteration = 1; iteration <= config.max_iterations; ++iteration) {
        std::transform(std::execution::par, in_set.begin(), in_set.end(), raw.begin(),
                       [&](Index j) {
                           double sum = 0.0;
                           for (Index e : graph.incoming_edges(j)) {
                               double factor = kernel.factor[e];
                               Index citing = kernel.citing_journal[e];
                               sum += citing == kNoIndex ? factor : factor * scores[citing];
                           }
                           return sum / static_cast<double>(
                                            graph.journals()[j].census_paper_count);
                       });
        std::vector<double> scaled = rescale(raw, config);

        double mean = 0.0, max_delta = 0.0;
        for (std::size_t i = 0; i < in_set.size(); ++i) {
            max_delta = std::max(max_delta, std::abs(scaled[i] - scores[in_set[i]]));
            scores[in_set[i]] = scaled[i];
            mean += scaled[i];
        }
        mean /= static_cast<double>(in_set.size());

        result.trace.push_back(mean);
        result.max_delta_trace.push_back(max_delta);
        if (config.record_history) result.history.push_back(scaled);
        result.iteration_count = iteration;
        result.final_delta = std::abs(mean - prev_mean);
        if (result.final_delta < config.tolerance) {
            converged = true;
            break;
        }
        prev_mean = mean;
    }
    if (!converged)
        throw ConvergenceError(result.iteration_count, result.final_delta, result.trace,
                               std::move(result.history));

    result.scores = std::move(scores);

    // Converged per-edge weights, Eq.-1 form at the fixed point.
    ConvergedWeights weights;
    weights.config = config;
    const Index edge_count = static_cast<Index>(graph.edges().size());
    weights.weights.assign(edge_count, 0.0);
    weights.in_domain.assign(edge_count, 0);
    for (Index e = 0; e < edge_count; ++e) {
        if (!graph.is_census_work(graph.edge_cited(e))) continue;
        weights.in_domain[e] = 1;
        double factor = kernel.factor[e];
        Index citing = kernel.citing_journal[e];
        weights.weights[e] = citing == kNoIndex ? factor : factor * result.scores[citing];
    }
    return {std::move(result), std::move(weights)};
}

} // namespace rc
