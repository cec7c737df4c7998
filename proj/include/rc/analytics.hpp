#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "rc/model.hpp"

namespace rc {

// Spearman rank correlation with average ranks for ties. Rejects length
// mismatches, fewer than two pairs, and all-constant vectors (undefined).
double spearman(std::span<const double> x, std::span<const double> y);

struct KsResult {
    double d = 0.0; // sup |F_a - F_b|
    double p = 1.0; // asymptotic two-sample approximation
};

// Two-sample Kolmogorov-Smirnov statistic over the empirical CDFs, with the
// asymptotic p approximation (effective sample size n*m/(n+m)). Rejects
// empty samples.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

// ---------------------------------------------------------------------------
// Co-authorship structure of an author sample.
// ---------------------------------------------------------------------------

struct CoauthorEdge {
    std::string a, b;          // a < b
    std::uint32_t weight = 0;  // number of shared in-set works
};

struct CoauthorComponent {
    std::vector<std::string> members; // sorted by id
    double rc_mean = 0.0;
    double rc_sd = 0.0;
    bool has_scores = false;
};

struct CoauthorNetwork {
    std::vector<std::string> vertices;       // the sample, sorted
    std::vector<CoauthorEdge> edges;
    std::vector<CoauthorComponent> components; // size descending, then smallest member id
};

// Induced co-authorship graph over sample members only; components are
// maximal connected sets and singletons are kept. When rc scores are given,
// each component reports mean and population s.d. of its members' rc.
CoauthorNetwork coauthorship_components(const CitationGraph& graph,
                                        const std::set<std::string>& sample,
                                        const std::map<std::string, double>* rc_scores = nullptr);

// ---------------------------------------------------------------------------
// Per-sample summary and share tables.
// ---------------------------------------------------------------------------

struct SampleSummary {
    std::string label;
    std::uint64_t articles = 0;     // distinct in-set works with >= 1 sample author
    std::uint64_t journals = 0;     // distinct journals over those works
    std::uint64_t coauthors = 0;    // distinct authors over those works
    std::uint64_t institutions = 0; // distinct institutions over those works
    double mean_citations = 0.0;
    double mean_authors = 0.0;
    double mean_institutions = 0.0;
    double mean_countries = 0.0;
    double mean_pages = 0.0;
    double mean_references = 0.0;
    std::uint64_t works_without_country = 0;   // excluded from the country mean
    std::uint64_t works_without_pages = 0;     // excluded from the pages mean
    std::uint64_t works_without_references = 0;
};

struct ShareEntry {
    std::string key;
    std::uint64_t works = 0;
    double share = 0.0; // fraction of the sample's works touching this key
};

struct SampleReport {
    SampleSummary summary;
    std::vector<ShareEntry> journal_shares;     // share descending, ties by key
    std::vector<ShareEntry> institution_shares;
    std::vector<ShareEntry> country_shares;
};

// A work belongs to a sample when at least one of its authors is in it;
// works in several samples count in each.
std::vector<SampleReport> summary_and_share_tables(
    const CitationGraph& graph,
    const std::vector<std::pair<std::string, std::set<std::string>>>& samples);

} // namespace rc
