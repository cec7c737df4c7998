#include "rc/ingest.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <unordered_set>

#include <json.hpp>

#include "rc/csv.hpp"
#include "rc/error.hpp"

namespace rc {

namespace {

using json = nlohmann::ordered_json;

// Runs `handle` on each parsed JSON line, rethrowing with file:line context.
void for_each_jsonl(const std::filesystem::path& path,
                    const std::function<void(const json&, std::size_t)>& handle) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path.string(), 0, "cannot open file");
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        json record;
        try {
            record = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError(path.string(), lineno, std::string("malformed JSON: ") + e.what());
        }
        try {
            handle(record, lineno);
        } catch (const json::exception& e) {
            throw ParseError(path.string(), lineno, e.what());
        }
    }
}

template <typename T>
T required(const json& record, const char* field, const std::filesystem::path& path,
           std::size_t lineno) {
    auto it = record.find(field);
    if (it == record.end())
        throw ParseError(path.string(), lineno,
                         std::string("missing required field '") + field + "'");
    return it->template get<T>();
}

} // namespace

RankingSourceFile parse_ranking_file(const std::filesystem::path& path) {
    auto table = csv::read_file(path);
    if (table.header != std::vector<std::string>{"rank", "institution_id"})
        throw ParseError(path.string(), 1, "expected header rank,institution_id");
    if (table.rows.empty()) throw ParseError(path.string(), 1, "ranking file has no entries");

    RankingSourceFile source;
    source.source_name = path.stem().string();
    std::unordered_set<std::string> seen;
    std::uint32_t previous = 0;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        const std::size_t lineno = table.row_lines[i];
        if (row.size() != 2) throw ParseError(path.string(), lineno, "expected 2 fields");
        std::uint32_t rank = 0;
        auto [ptr, ec] = std::from_chars(row[0].data(), row[0].data() + row[0].size(), rank);
        if (ec != std::errc{} || ptr != row[0].data() + row[0].size() || rank == 0)
            throw ParseError(path.string(), lineno, "non-numeric rank '" + row[0] + "'");
        if (rank <= previous)
            throw ParseError(path.string(), lineno,
                             "ranks must be strictly increasing (got " + row[0] + " after " +
                                 std::to_string(previous) + ")");
        if (!seen.insert(row[1]).second)
            throw ParseError(path.string(), lineno,
                             "institution '" + row[1] + "' listed more than once");
        source.entries.push_back({rank, row[1]});
        previous = rank;
    }
    return source;
}

std::vector<InstitutionRecord> parse_institutions_jsonl(const std::filesystem::path& path) {
    std::vector<InstitutionRecord> records;
    for_each_jsonl(path, [&](const json& j, std::size_t lineno) {
        InstitutionRecord r;
        r.id = required<std::string>(j, "id", path, lineno);
        r.name = required<std::string>(j, "name", path, lineno);
        if (j.contains("country") && !j["country"].is_null())
            r.country = j["country"].get<std::string>();
        records.push_back(std::move(r));
    });
    return records;
}

std::vector<JournalRecord> parse_journals_jsonl(const std::filesystem::path& path) {
    std::vector<JournalRecord> records;
    for_each_jsonl(path, [&](const json& j, std::size_t lineno) {
        JournalRecord r;
        r.id = required<std::string>(j, "id", path, lineno);
        r.title = required<std::string>(j, "title", path, lineno);
        r.in_set = required<bool>(j, "in_set", path, lineno);
        r.census_paper_count = required<std::uint32_t>(j, "census_paper_count", path, lineno);
        records.push_back(std::move(r));
    });
    return records;
}

std::vector<WorkRecord> parse_works_jsonl(const std::filesystem::path& path) {
    std::vector<WorkRecord> records;
    for_each_jsonl(path, [&](const json& j, std::size_t lineno) {
        WorkRecord r;
        r.id = required<std::string>(j, "id", path, lineno);
        r.journal_id = required<std::string>(j, "journal_id", path, lineno);
        r.year = required<int>(j, "year", path, lineno);
        r.author_ids = required<std::vector<std::string>>(j, "author_ids", path, lineno);
        if (j.contains("institution_ids"))
            r.institution_ids = j["institution_ids"].get<std::vector<std::string>>();
        if (j.contains("page_count") && !j["page_count"].is_null())
            r.page_count = j["page_count"].get<std::uint32_t>();
        if (j.contains("reference_count") && !j["reference_count"].is_null())
            r.reference_count = j["reference_count"].get<std::uint32_t>();
        records.push_back(std::move(r));
    });
    return records;
}

std::vector<CitationEdge> parse_edges_jsonl(const std::filesystem::path& path) {
    std::vector<CitationEdge> records;
    for_each_jsonl(path, [&](const json& j, std::size_t lineno) {
        CitationEdge r;
        r.citing_work_id = required<std::string>(j, "citing_work_id", path, lineno);
        r.cited_work_id = required<std::string>(j, "cited_work_id", path, lineno);
        if (j.contains("f")) {
            r.f = j["f"].get<int>();
            if (r.f != 0 && r.f != 1)
                throw ParseError(path.string(), lineno, "f must be 0 or 1");
        }
        records.push_back(std::move(r));
    });
    return records;
}

RawRecords parse_entity_files(const std::filesystem::path& journals_path,
                              const std::filesystem::path& works_path,
                              const std::filesystem::path& edges_path,
                              const std::filesystem::path& institutions_path) {
    RawRecords records;
    records.journals = parse_journals_jsonl(journals_path);
    records.works = parse_works_jsonl(works_path);
    records.edges = parse_edges_jsonl(edges_path);
    records.institutions = parse_institutions_jsonl(institutions_path);
    return records;
}

namespace {

void write_lines(const std::filesystem::path& path, const std::vector<json>& lines) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open for writing: " + path.string());
    for (const auto& line : lines) out << line.dump() << '\n';
    if (!out) throw Error("write failed: " + path.string());
}

} // namespace

void write_institutions_jsonl(const std::vector<InstitutionRecord>& records,
                              const std::filesystem::path& path) {
    std::vector<json> lines;
    lines.reserve(records.size());
    for (const auto& r : records) {
        json j{{"id", r.id}, {"name", r.name}};
        if (r.country) j["country"] = *r.country;
        lines.push_back(std::move(j));
    }
    write_lines(path, lines);
}

void write_journals_jsonl(const std::vector<JournalRecord>& records,
                          const std::filesystem::path& path) {
    std::vector<json> lines;
    lines.reserve(records.size());
    for (const auto& r : records)
        lines.push_back({{"id", r.id},
                         {"title", r.title},
                         {"in_set", r.in_set},
                         {"census_paper_count", r.census_paper_count}});
    write_lines(path, lines);
}

void write_works_jsonl(const std::vector<WorkRecord>& records,
                       const std::filesystem::path& path) {
    std::vector<json> lines;
    lines.reserve(records.size());
    for (const auto& r : records) {
        json j{{"id", r.id},
               {"journal_id", r.journal_id},
               {"year", r.year},
               {"author_ids", r.author_ids},
               {"institution_ids", r.institution_ids}};
        if (r.page_count) j["page_count"] = *r.page_count;
        if (r.reference_count) j["reference_count"] = *r.reference_count;
        lines.push_back(std::move(j));
    }
    write_lines(path, lines);
}

void write_edges_jsonl(const std::vector<CitationEdge>& records,
                       const std::filesystem::path& path) {
    std::vector<json> lines;
    lines.reserve(records.size());
    for (const auto& r : records)
        lines.push_back(
            {{"citing_work_id", r.citing_work_id}, {"cited_work_id", r.cited_work_id}, {"f", r.f}});
    write_lines(path, lines);
}

void dump_graph(const CitationGraph& graph, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_journals_jsonl(graph.journals(), dir / "journals.jsonl");
    write_works_jsonl(graph.works(), dir / "works.jsonl");
    write_edges_jsonl(graph.edges(), dir / "edges.jsonl");
    write_institutions_jsonl(graph.institutions(), dir / "institutions.jsonl");
}

void write_ranking_csv(const RankingSourceFile& source, const std::filesystem::path& path) {
    csv::Writer out(path);
    out.row({"rank", "institution_id"});
    for (const auto& entry : source.entries)
        out.row({std::to_string(entry.rank), entry.institution_id});
}

} // namespace rc
