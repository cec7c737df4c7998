#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rc/model.hpp"
#include "rc/solver.hpp"

namespace rc {

struct ScoringOptions {
    // When false, citations from works that share the scored author are
    // dropped from both the weight sum and the raw count.
    bool include_self_citations = true;
};

struct AuthorScore {
    std::string author_id;
    std::uint32_t work_count = 0;     // R_a: census works in in-set journals
    std::uint64_t citation_count = 0; // L_a: f-gated citations to those works
    double rc = 0.0;
    double citations_per_paper = 0.0;
    bool attenuated = false;
};

// Per-author reputable citation influence: the mean over the author's census
// works of the converged weights of their incoming citations, under the same
// f regime the solver used. Throws for authors with no census works.
AuthorScore author_rc(const CitationGraph& graph, Index author,
                      const ConvergedWeights& weights, const ScoringOptions& options = {});

// Scores every author with at least one census work, ordered by author id.
std::vector<AuthorScore> score_all_authors(const CitationGraph& graph,
                                           const ConvergedWeights& weights,
                                           const ScoringOptions& options = {});

// True iff raw citations per paper strictly exceed the rc score.
bool attenuation_flag(const AuthorScore& score);

// Three contiguous tiers over the rc-descending author list (ties broken by
// ascending author id); earlier tiers take the extra members when the count
// is not divisible by three.
struct TierAssignment {
    std::vector<std::string> authors;                            // rc descending
    std::vector<int> tier;                                       // 1..3, parallel to authors
    std::map<std::string, std::array<std::uint32_t, 3>> label_counts;

    int tier_of(const std::string& author_id) const;
};

TierAssignment segment_tiers(const std::vector<AuthorScore>& scores,
                             const std::map<std::string, std::string>& labels = {});

} // namespace rc
