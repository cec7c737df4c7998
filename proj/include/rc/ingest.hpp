#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rc/ingest_types.hpp"
#include "rc/model.hpp"

namespace rc {

struct RawRecords {
    std::vector<InstitutionRecord> institutions;
    std::vector<JournalRecord> journals;
    std::vector<WorkRecord> works;
    std::vector<CitationEdge> edges;
};

// CSV with header rank,institution_id. Ranks must be strictly increasing
// and institutions unique within the source. The source name is the file
// stem. Empty files (no data rows) are rejected.
RankingSourceFile parse_ranking_file(const std::filesystem::path& path);

// JSON Lines parsers, one record per line, field names as in model.hpp.
// Unknown extra fields are ignored; missing required fields and malformed
// lines raise ParseError with file and line number.
std::vector<InstitutionRecord> parse_institutions_jsonl(const std::filesystem::path& path);
std::vector<JournalRecord> parse_journals_jsonl(const std::filesystem::path& path);
std::vector<WorkRecord> parse_works_jsonl(const std::filesystem::path& path);
std::vector<CitationEdge> parse_edges_jsonl(const std::filesystem::path& path);

RawRecords parse_entity_files(const std::filesystem::path& journals_path,
                              const std::filesystem::path& works_path,
                              const std::filesystem::path& edges_path,
                              const std::filesystem::path& institutions_path);

// Serialized dump: one JSON Lines file per entity kind, records ordered by
// id. Writing a built graph and re-parsing reproduces it exactly.
void write_institutions_jsonl(const std::vector<InstitutionRecord>& records,
                              const std::filesystem::path& path);
void write_journals_jsonl(const std::vector<JournalRecord>& records,
                          const std::filesystem::path& path);
void write_works_jsonl(const std::vector<WorkRecord>& records,
                       const std::filesystem::path& path);
void write_edges_jsonl(const std::vector<CitationEdge>& records,
                       const std::filesystem::path& path);

// Writes journals.jsonl, works.jsonl, edges.jsonl, institutions.jsonl under dir.
void dump_graph(const CitationGraph& graph, const std::filesystem::path& dir);

// Ranking CSV writer (header rank,institution_id), used by synth and tests.
void write_ranking_csv(const RankingSourceFile& source, const std::filesystem::path& path);

} // namespace rc
