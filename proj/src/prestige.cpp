#include "rc/prestige.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <unordered_set>

#include "rc/csv.hpp"
#include "rc/error.hpp"

namespace rc {

std::map<std::string, double> decile_values(const RankingSourceFile& source) {
    if (source.entries.empty())
        throw ValidationError("ranking source '" + source.source_name + "' has no entries");
    const double n = static_cast<double>(source.entries.size());
    std::map<std::string, double> values;
    for (const auto& entry : source.entries) {
        auto decile = static_cast<long>(std::ceil(10.0 * entry.rank / n));
        decile = std::clamp(decile, 1l, 10l);
        values[entry.institution_id] = 1.0 - 0.1 * static_cast<double>(decile - 1);
    }
    return values;
}

PrestigeTable institution_prestige(const std::vector<RankingSourceFile>& sources,
                                   const std::vector<std::string>& universe) {
    if (sources.empty()) throw ValidationError("institution_prestige requires at least one source");
    std::unordered_set<std::string_view> known(universe.begin(), universe.end());

    // Decile values are gathered and summed in sorted order per institution,
    // so the table is bit-identical under any reordering of the sources.
    std::map<std::string, std::vector<double>> gathered;
    for (const auto& source : sources) {
        for (const auto& [id, value] : decile_values(source)) {
            if (!known.count(id))
                throw ValidationError("ranking source '" + source.source_name +
                                      "' references institution '" + id +
                                      "' outside the universe");
            gathered[id].push_back(value);
        }
    }

    PrestigeTable table;
    table.source_count = static_cast<std::uint32_t>(sources.size());
    for (const auto& id : universe) table.scores.emplace(id, 1.0);
    for (auto& [id, values] : gathered) {
        std::sort(values.begin(), values.end());
        double score = 1.0;
        for (double v : values) score += v;
        table.scores[id] = score;
    }
    return table;
}

void write_prestige_csv(const PrestigeTable& table, const std::filesystem::path& path) {
    csv::Writer out(path);
    out.row({"institution_id", "prestige"});
    for (const auto& [id, score] : table.scores) out.row({id, csv::format_double(score)});
}

PrestigeTable read_prestige_csv(const std::filesystem::path& path) {
    auto data = csv::read_file(path);
    if (data.header != std::vector<std::string>{"institution_id", "prestige"})
        throw ParseError(path.string(), 1, "expected header institution_id,prestige");
    PrestigeTable table;
    for (std::size_t i = 0; i < data.rows.size(); ++i) {
        const auto& row = data.rows[i];
        if (row.size() != 2)
            throw ParseError(path.string(), data.row_lines[i], "expected 2 fields");
        double value = 0;
        auto [ptr, ec] = std::from_chars(row[1].data(), row[1].data() + row[1].size(), value);
        if (ec != std::errc{} || ptr != row[1].data() + row[1].size())
            throw ParseError(path.string(), data.row_lines[i],
                             "non-numeric prestige '" + row[1] + "'");
        if (!table.scores.emplace(row[0], value).second)
            throw ParseError(path.string(), data.row_lines[i],
                             "duplicate institution '" + row[0] + "'");
    }
    return table;
}

} // namespace rc
