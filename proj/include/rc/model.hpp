#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace rc {

// ---------------------------------------------------------------------------
// Raw entity records. Ids are opaque strings; build_graph checks referential
// integrity and freezes everything into an indexed CitationGraph.
// ---------------------------------------------------------------------------

struct InstitutionRecord {
    std::string id;
    std::string name;
    std::optional<std::string> country; // ISO 3166 alpha-2

    bool operator==(const InstitutionRecord&) const = default;
};

struct JournalRecord {
    std::string id;
    std::string title;
    bool in_set = true;                  // member of the journal set vs. exogenous venue
    std::uint32_t census_paper_count = 0; // N_j: works published in the census year

    bool operator==(const JournalRecord&) const = default;
};

struct WorkRecord {
    std::string id;
    std::string journal_id;
    int year = 0;
    std::vector<std::string> author_ids;
    std::vector<std::string> institution_ids; // may be empty
    std::optional<std::uint32_t> page_count;
    std::optional<std::uint32_t> reference_count;

    bool operator==(const WorkRecord&) const = default;
};

struct CitationEdge {
    std::string citing_work_id;
    std::string cited_work_id;
    int f = 1; // {0,1}; always 1 when the citing work's journal is in the set

    bool operator==(const CitationEdge&) const = default;
};

struct GraphOptions {
    // When set, a work is a census work iff its journal is in the set and its
    // year matches. When unset, every in-set work counts as census.
    std::optional<int> census_year;
    // f assigned at build time to edges whose citing journal is exogenous.
    int exogenous_default_f = 1;

    bool operator==(const GraphOptions&) const = default;
};

using Index = std::uint32_t;
inline constexpr Index kNoIndex = static_cast<Index>(-1);

// ---------------------------------------------------------------------------
// CitationGraph: frozen after build, safe for arbitrary concurrent readers.
//
// All entity vectors are sorted by id, so dense indices are canonical for a
// given input set regardless of input ordering. Edges are deduplicated on the
// (citing, cited) pair and sorted the same way.
// ---------------------------------------------------------------------------
class CitationGraph {
public:
    const std::vector<InstitutionRecord>& institutions() const { return institutions_; }
    const std::vector<JournalRecord>& journals() const { return journals_; }
    const std::vector<WorkRecord>& works() const { return works_; }
    const std::vector<CitationEdge>& edges() const { return edges_; }
    const std::vector<std::string>& author_ids() const { return author_ids_; }
    const GraphOptions& options() const { return options_; }

    // id -> dense index; kNoIndex when unknown
    Index institution_index(std::string_view id) const { return lookup(institution_by_id_, id); }
    Index journal_index(std::string_view id) const { return lookup(journal_by_id_, id); }
    Index work_index(std::string_view id) const { return lookup(work_by_id_, id); }
    Index author_index(std::string_view id) const { return lookup(author_by_id_, id); }

    Index work_journal(Index work) const { return work_journal_[work]; }
    std::span<const Index> work_authors(Index work) const;
    std::span<const Index> work_institutions(Index work) const;
    bool is_census_work(Index work) const { return census_flag_[work] != 0; }
    std::uint32_t incoming_count(Index work) const { return incoming_count_[work]; }

    Index edge_citing(Index e) const { return edge_citing_[e]; }
    Index edge_cited(Index e) const { return edge_cited_[e]; }
    int edge_f(Index e) const { return edges_[e].f; }
    bool edge_citing_in_set(Index e) const { return journals_[work_journal_[edge_citing_[e]]].in_set; }

    std::span<const Index> census_works_of_journal(Index journal) const;
    std::span<const Index> census_works_of_author(Index author) const;

    // Edges whose cited work belongs to this journal's census set, ascending
    // edge index. Same-journal citations included.
    std::span<const Index> incoming_edges(Index journal) const;

    // Edges whose cited work belongs to this work (census or not).
    std::span<const Index> incoming_edges_of_work(Index work) const;

    std::size_t in_set_journal_count() const { return in_set_journals_.size(); }
    std::span<const Index> in_set_journals() const { return in_set_journals_; }

private:
    friend CitationGraph build_graph(std::vector<InstitutionRecord>, std::vector<JournalRecord>,
                                     std::vector<WorkRecord>, std::vector<CitationEdge>,
                                     const GraphOptions&);

    static Index lookup(const std::unordered_map<std::string, Index>& map, std::string_view id);

    GraphOptions options_;
    std::vector<InstitutionRecord> institutions_;
    std::vector<JournalRecord> journals_;
    std::vector<WorkRecord> works_;
    std::vector<CitationEdge> edges_;
    std::vector<std::string> author_ids_;

    std::unordered_map<std::string, Index> institution_by_id_;
    std::unordered_map<std::string, Index> journal_by_id_;
    std::unordered_map<std::string, Index> work_by_id_;
    std::unordered_map<std::string, Index> author_by_id_;

    std::vector<Index> work_journal_;
    std::vector<std::uint8_t> census_flag_;
    std::vector<std::uint32_t> incoming_count_;

    // CSR layouts
    std::vector<Index> work_author_flat_, work_author_off_;
    std::vector<Index> work_inst_flat_, work_inst_off_;
    std::vector<Index> journal_census_flat_, journal_census_off_;
    std::vector<Index> author_census_flat_, author_census_off_;
    std::vector<Index> journal_incoming_flat_, journal_incoming_off_;
    std::vector<Index> work_incoming_flat_, work_incoming_off_;

    std::vector<Index> edge_citing_, edge_cited_;
    std::vector<Index> in_set_journals_;
};

// Validates and freezes the citation universe.
//
// Duplicate (citing, cited) pairs collapse to one edge. Edge f is set to 1
// when the citing journal is in the set and to options.exogenous_default_f
// otherwise. Throws ValidationError on dangling references (naming the
// offending id), in-set journals with census_paper_count = 0, self-citing
// edges, duplicate entity ids, and works with no authors.
CitationGraph build_graph(std::vector<InstitutionRecord> institutions,
                          std::vector<JournalRecord> journals,
                          std::vector<WorkRecord> works,
                          std::vector<CitationEdge> edges,
                          const GraphOptions& options = {});

// Every citation into journal_id's census works, as (edge, citing work)
// pairs. Throws on unknown or exogenous journal ids.
struct IncomingCitation {
    Index edge;
    Index citing_work;
};
std::vector<IncomingCitation> incoming_citations(const CitationGraph& graph,
                                                 std::string_view journal_id);

} // namespace rc
