#include "rc/model.hpp"

#include <algorithm>
#include <unordered_set>

#include "rc/error.hpp"

namespace rc {

namespace {

// Sorts records by id and rejects duplicates.
template <typename Record>
void sort_unique_by_id(std::vector<Record>& records, const char* kind) {
    std::sort(records.begin(), records.end(),
              [](const Record& a, const Record& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < records.size(); ++i) {
        if (records[i].id == records[i - 1].id)
            throw ValidationError(std::string("duplicate ") + kind + " id '" + records[i].id + "'");
    }
}

template <typename Record>
std::unordered_map<std::string, Index> index_by_id(const std::vector<Record>& records) {
    std::unordered_map<std::string, Index> map;
    map.reserve(records.size());
    for (Index i = 0; i < records.size(); ++i) map.emplace(records[i].id, i);
    return map;
}

// Deduplicates preserving first-occurrence order.
void dedup_preserve_order(std::vector<std::string>& ids) {
    std::unordered_set<std::string> seen;
    std::vector<std::string> out;
    out.reserve(ids.size());
    for (auto& id : ids) {
        if (seen.insert(id).second) out.push_back(std::move(id));
    }
    ids = std::move(out);
}

// Builds a CSR layout from (bucket, value) pairs already grouped by walking
// values in emission order. counts[b] must hold the bucket sizes.
struct CsrBuilder {
    std::vector<Index> flat;
    std::vector<Index> offsets;
    std::vector<Index> cursor;

    explicit CsrBuilder(const std::vector<std::uint32_t>& counts) {
        offsets.resize(counts.size() + 1, 0);
        for (std::size_t i = 0; i < counts.size(); ++i) offsets[i + 1] = offsets[i] + counts[i];
        flat.resize(offsets.back());
        cursor.assign(offsets.begin(), offsets.end() - 1);
    }

    void push(Index bucket, Index value) { flat[cursor[bucket]++] = value; }
};

} // namespace

Index CitationGraph::lookup(const std::unordered_map<std::string, Index>& map, std::string_view id) {
    auto it = map.find(std::string(id));
    return it == map.end() ? kNoIndex : it->second;
}

std::span<const Index> CitationGraph::work_authors(Index work) const {
    return {work_author_flat_.data() + work_author_off_[work],
            work_author_flat_.data() + work_author_off_[work + 1]};
}

std::span<const Index> CitationGraph::work_institutions(Index work) const {
    return {work_inst_flat_.data() + work_inst_off_[work],
            work_inst_flat_.data() + work_inst_off_[work + 1]};
}

std::span<const Index> CitationGraph::census_works_of_journal(Index journal) const {
    return {journal_census_flat_.data() + journal_census_off_[journal],
            journal_census_flat_.data() + journal_census_off_[journal + 1]};
}

std::span<const Index> CitationGraph::census_works_of_author(Index author) const {
    return {author_census_flat_.data() + author_census_off_[author],
            author_census_flat_.data() + author_census_off_[author + 1]};
}

std::span<const Index> CitationGraph::incoming_edges(Index journal) const {
    return {journal_incoming_flat_.data() + journal_incoming_off_[journal],
            journal_incoming_flat_.data() + journal_incoming_off_[journal + 1]};
}

std::span<const Index> CitationGraph::incoming_edges_of_work(Index work) const {
    return {work_incoming_flat_.data() + work_incoming_off_[work],
            work_incoming_flat_.data() + work_incoming_off_[work + 1]};
}

CitationGraph build_graph(std::vector<InstitutionRecord> institutions,
                          std::vector<JournalRecord> journals,
                          std::vector<WorkRecord> works,
                          std::vector<CitationEdge> edges,
                          const GraphOptions& options) {
    CitationGraph g;
    g.options_ = options;

    sort_unique_by_id(institutions, "institution");
    for (const auto& inst : institutions) {
        if (inst.name.empty())
            throw ValidationError("institution '" + inst.id + "' has an empty name");
    }
    sort_unique_by_id(journals, "journal");
    for (const auto& j : journals) {
        if (j.in_set && j.census_paper_count == 0)
            throw ValidationError("in-set journal '" + j.id + "' has census_paper_count = 0");
    }
    sort_unique_by_id(works, "work");

    g.institutions_ = std::move(institutions);
    g.journals_ = std::move(journals);
    g.works_ = std::move(works);
    g.institution_by_id_ = index_by_id(g.institutions_);
    g.journal_by_id_ = index_by_id(g.journals_);
    g.work_by_id_ = index_by_id(g.works_);

    // Resolve work references; intern the author universe.
    const Index work_count = static_cast<Index>(g.works_.size());
    g.work_journal_.resize(work_count);
    for (Index w = 0; w < work_count; ++w) {
        auto& work = g.works_[w];
        auto jt = g.journal_by_id_.find(work.journal_id);
        if (jt == g.journal_by_id_.end())
            throw ValidationError("work '" + work.id + "' references unknown journal id '" +
                                  work.journal_id + "'");
        g.work_journal_[w] = jt->second;
        dedup_preserve_order(work.author_ids);
        if (work.author_ids.empty())
            throw ValidationError("work '" + work.id + "' has no authors");
        dedup_preserve_order(work.institution_ids);
        for (const auto& inst_id : work.institution_ids) {
            if (!g.institution_by_id_.count(inst_id))
                throw ValidationError("work '" + work.id + "' references unknown institution id '" +
                                      inst_id + "'");
        }
        for (const auto& author_id : work.author_ids) g.author_by_id_.emplace(author_id, 0);
    }
    g.author_ids_.reserve(g.author_by_id_.size());
    for (const auto& [id, _] : g.author_by_id_) g.author_ids_.push_back(id);
    std::sort(g.author_ids_.begin(), g.author_ids_.end());
    for (Index a = 0; a < g.author_ids_.size(); ++a) g.author_by_id_[g.author_ids_[a]] = a;

    // Work -> author / institution CSR.
    {
        std::vector<std::uint32_t> author_counts(work_count), inst_counts(work_count);
        for (Index w = 0; w < work_count; ++w) {
            author_counts[w] = static_cast<std::uint32_t>(g.works_[w].author_ids.size());
            inst_counts[w] = static_cast<std::uint32_t>(g.works_[w].institution_ids.size());
        }
        CsrBuilder authors(author_counts), insts(inst_counts);
        for (Index w = 0; w < work_count; ++w) {
            for (const auto& id : g.works_[w].author_ids) authors.push(w, g.author_by_id_[id]);
            for (const auto& id : g.works_[w].institution_ids)
                insts.push(w, g.institution_by_id_[id]);
        }
        g.work_author_flat_ = std::move(authors.flat);
        g.work_author_off_ = std::move(authors.offsets);
        g.work_inst_flat_ = std::move(insts.flat);
        g.work_inst_off_ = std::move(insts.offsets);
    }

    // Census flags.
    g.census_flag_.resize(work_count, 0);
    for (Index w = 0; w < work_count; ++w) {
        const auto& journal = g.journals_[g.work_journal_[w]];
        bool census = journal.in_set &&
                      (!options.census_year || g.works_[w].year == *options.census_year);
        g.census_flag_[w] = census ? 1 : 0;
    }

    // Validate, normalize, and deduplicate edges.
    struct ResolvedEdge {
        Index citing, cited;
    };
    std::vector<ResolvedEdge> resolved;
    resolved.reserve(edges.size());
    for (const auto& e : edges) {
        auto citing = g.work_by_id_.find(e.citing_work_id);
        if (citing == g.work_by_id_.end())
            throw ValidationError("citation references unknown work id '" + e.citing_work_id + "'");
        auto cited = g.work_by_id_.find(e.cited_work_id);
        if (cited == g.work_by_id_.end())
            throw ValidationError("citation references unknown work id '" + e.cited_work_id + "'");
        if (citing->second == cited->second)
            throw ValidationError("self-citing edge rejected: work '" + e.citing_work_id +
                                  "' cites itself");
        resolved.push_back({citing->second, cited->second});
    }
    std::sort(resolved.begin(), resolved.end(), [](const ResolvedEdge& a, const ResolvedEdge& b) {
        return a.citing != b.citing ? a.citing < b.citing : a.cited < b.cited;
    });
    resolved.erase(std::unique(resolved.begin(), resolved.end(),
                               [](const ResolvedEdge& a, const ResolvedEdge& b) {
                                   return a.citing == b.citing && a.cited == b.cited;
                               }),
                   resolved.end());

    const Index edge_count = static_cast<Index>(resolved.size());
    g.edges_.reserve(edge_count);
    g.edge_citing_.resize(edge_count);
    g.edge_cited_.resize(edge_count);
    for (Index e = 0; e < edge_count; ++e) {
        g.edge_citing_[e] = resolved[e].citing;
        g.edge_cited_[e] = resolved[e].cited;
        bool citing_in_set = g.journals_[g.work_journal_[resolved[e].citing]].in_set;
        int f = citing_in_set ? 1 : options.exogenous_default_f;
        g.edges_.push_back({g.works_[resolved[e].citing].id, g.works_[resolved[e].cited].id, f});
    }

    // Remaining indexes: census works per journal/author, incoming edges per
    // journal (census-cited only) and per work (all), raw in-degrees.
    {
        const Index journal_count = static_cast<Index>(g.journals_.size());
        const Index author_count = static_cast<Index>(g.author_ids_.size());
        std::vector<std::uint32_t> jc(journal_count, 0), ac(author_count, 0);
        for (Index w = 0; w < work_count; ++w) {
            if (!g.census_flag_[w]) continue;
            ++jc[g.work_journal_[w]];
            for (Index a : g.work_authors(w)) ++ac[a];
        }
        CsrBuilder jcensus(jc), acensus(ac);
        for (Index w = 0; w < work_count; ++w) {
            if (!g.census_flag_[w]) continue;
            jcensus.push(g.work_journal_[w], w);
            for (Index a : g.work_authors(w)) acensus.push(a, w);
        }
        g.journal_census_flat_ = std::move(jcensus.flat);
        g.journal_census_off_ = std::move(jcensus.offsets);
        g.author_census_flat_ = std::move(acensus.flat);
        g.author_census_off_ = std::move(acensus.offsets);

        std::vector<std::uint32_t> jin(journal_count, 0), win(work_count, 0);
        g.incoming_count_.assign(work_count, 0);
        for (Index e = 0; e < edge_count; ++e) {
            Index cited = g.edge_cited_[e];
            ++g.incoming_count_[cited];
            ++win[cited];
            if (g.census_flag_[cited]) ++jin[g.work_journal_[cited]];
        }
        CsrBuilder jincoming(jin), wincoming(win);
        for (Index e = 0; e < edge_count; ++e) {
            Index cited = g.edge_cited_[e];
            wincoming.push(cited, e);
            if (g.census_flag_[cited]) jincoming.push(g.work_journal_[cited], e);
        }
        g.journal_incoming_flat_ = std::move(jincoming.flat);
        g.journal_incoming_off_ = std::move(jincoming.offsets);
        g.work_incoming_flat_ = std::move(wincoming.flat);
        g.work_incoming_off_ = std::move(wincoming.offsets);

        for (Index j = 0; j < journal_count; ++j)
            if (g.journals_[j].in_set) g.in_set_journals_.push_back(j);
    }

    return g;
}

std::vector<IncomingCitation> incoming_citations(const CitationGraph& graph,
                                                 std::string_view journal_id) {
    Index j = graph.journal_index(journal_id);
    if (j == kNoIndex)
        throw ValidationError("unknown journal id '" + std::string(journal_id) + "'");
    if (!graph.journals()[j].in_set)
        throw ValidationError("journal '" + std::string(journal_id) +
                              "' is exogenous; incoming citations are defined for the journal set");
    std::vector<IncomingCitation> result;
    auto edges = graph.incoming_edges(j);
    result.reserve(edges.size());
    for (Index e : edges) result.push_back({e, graph.edge_citing(e)});
    return result;
}

} // namespace rc
