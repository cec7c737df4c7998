#include "rc/scoring.hpp"

#include <algorithm>

#include "rc/error.hpp"

namespace rc {

namespace {

bool work_lists_author(const CitationGraph& graph, Index work, Index author) {
    auto authors = graph.work_authors(work);
    return std::find(authors.begin(), authors.end(), author) != authors.end();
}

} // namespace

AuthorScore author_rc(const CitationGraph& graph, Index author,
                      const ConvergedWeights& weights, const ScoringOptions& options) {
    auto census_works = graph.census_works_of_author(author);
    if (census_works.empty())
        throw ValidationError("author '" + graph.author_ids()[author] +
                              "' has no census works to score");

    AuthorScore score;
    score.author_id = graph.author_ids()[author];
    score.work_count = static_cast<std::uint32_t>(census_works.size());

    double weight_sum = 0.0;
    for (Index work : census_works) {
        for (Index e : graph.incoming_edges_of_work(work)) {
            if (!options.include_self_citations &&
                work_lists_author(graph, graph.edge_citing(e), author))
                continue;
            weight_sum += weights.at(e);
            score.citation_count += effective_f(graph, e, weights.config);
        }
    }
    score.rc = weight_sum / static_cast<double>(score.work_count);
    score.citations_per_paper =
        static_cast<double>(score.citation_count) / static_cast<double>(score.work_count);
    score.attenuated = attenuation_flag(score);
    return score;
}

std::vector<AuthorScore> score_all_authors(const CitationGraph& graph,
                                           const ConvergedWeights& weights,
                                           const ScoringOptions& options) {
    std::vector<AuthorScore> scores;
    const Index author_count = static_cast<Index>(graph.author_ids().size());
    for (Index a = 0; a < author_count; ++a) {
        if (graph.census_works_of_author(a).empty()) continue;
        scores.push_back(author_rc(graph, a, weights, options));
    }
    return scores;
}

bool attenuation_flag(const AuthorScore& score) {
    return score.citations_per_paper > score.rc;
}

int TierAssignment::tier_of(const std::string& author_id) const {
    for (std::size_t i = 0; i < authors.size(); ++i)
        if (authors[i] == author_id) return tier[i];
    return 0;
}

TierAssignment segment_tiers(const std::vector<AuthorScore>& scores,
                             const std::map<std::string, std::string>& labels) {
    if (scores.size() < 3)
        throw ValidationError("tier segmentation requires at least 3 authors, got " +
                              std::to_string(scores.size()));

    std::vector<const AuthorScore*> order;
    order.reserve(scores.size());
    for (const auto& s : scores) order.push_back(&s);
    std::sort(order.begin(), order.end(), [](const AuthorScore* a, const AuthorScore* b) {
        if (a->rc != b->rc) return a->rc > b->rc;
        return a->author_id < b->author_id;
    });

    // Sizes as equal as possible, earlier tiers take the remainder.
    const std::size_t n = order.size();
    std::array<std::size_t, 3> sizes{n / 3, n / 3, n / 3};
    for (std::size_t i = 0; i < n % 3; ++i) ++sizes[i];

    TierAssignment assignment;
    assignment.authors.reserve(n);
    assignment.tier.reserve(n);
    std::size_t pos = 0;
    for (int t = 0; t < 3; ++t) {
        for (std::size_t k = 0; k < sizes[t]; ++k, ++pos) {
            assignment.authors.push_back(order[pos]->author_id);
            assignment.tier.push_back(t + 1);
            auto label_it = labels.find(order[pos]->author_id);
            if (label_it != labels.end())
                ++assignment.label_counts[label_it->second][static_cast<std::size_t>(t)];
        }
    }
    return assignment;
}

} // namespace rc
