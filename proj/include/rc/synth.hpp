#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rc/ingest_types.hpp"
#include "rc/model.hpp"
#include "rc/scoring.hpp"

namespace rc {

// Deterministic planted-structure generator: honest elites whose works are
// cited by high-prestige-affiliated works, a citation cartel that cites
// itself from low-prestige venues, and a preferential-attachment baseline.
struct SynthConfig {
    std::uint64_t seed = 1;
    std::uint32_t journal_count = 200;
    std::uint32_t works_per_journal = 50;
    std::uint32_t author_pool = 1200;
    std::uint32_t institution_pool = 300;
    double prestige_profile = 0.2; // fraction of high-prestige institutions
    std::uint32_t honest_elite_size = 30;
    std::uint32_t cartel_size = 30;
    std::uint32_t cartel_citation_boost = 20; // citations received per cartel work
    double base_citation_rate = 6.0;          // mean organic citations issued per work
    std::uint32_t ranking_source_count = 7;
    int census_year = 2020;

    void validate() const;

    bool operator==(const SynthConfig&) const = default;
};

enum class AuthorRole { baseline, elite, cartel };

const char* role_name(AuthorRole role);

struct GroundTruth {
    std::map<std::string, AuthorRole> roles; // every generated author
};

struct SynthOutput {
    std::vector<InstitutionRecord> institutions;
    std::vector<JournalRecord> journals;
    std::vector<WorkRecord> works;
    std::vector<CitationEdge> edges;
    std::vector<RankingSourceFile> rankings;
    GroundTruth truth;
};

// Pure function of the config; identical configs give identical outputs.
SynthOutput generate_network(const SynthConfig& config);

// Tier-by-role evidence table plus the screening fractions the planted
// ground truth lets us measure directly.
struct SeparationReport {
    // [tier-1..3][baseline, elite, cartel]
    std::array<std::array<std::uint32_t, 3>, 3> tier_role_counts{};
    double cartel_bottom_tier_fraction = 0.0;
    double cartel_attenuated_fraction = 0.0;
    double elite_top_tier_fraction = 0.0;
    double cartel_top_citation_decile_fraction = 0.0;
    double cartel_mean_citations = 0.0;
    double baseline_mean_citations = 0.0;
};

// Requires every labeled author to be scored.
SeparationReport ground_truth_separation(const std::vector<AuthorScore>& scores,
                                         const GroundTruth& truth);

} // namespace rc
