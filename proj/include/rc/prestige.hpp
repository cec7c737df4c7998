#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "rc/ingest_types.hpp"

namespace rc {

// Fixed exogenous institutional prestige p^I: a 1.0 floor plus one decile
// value per ranking source that lists the institution.
struct PrestigeTable {
    std::map<std::string, double> scores; // institution_id -> prestige, >= 1.0
    std::uint32_t source_count = 0;

    // Unknown institutions take the floor value; missing metadata is
    // neutral, never fatal.
    double at(const std::string& institution_id) const {
        auto it = scores.find(institution_id);
        return it == scores.end() ? 1.0 : it->second;
    }
};

// Decile value per listed institution: rank r of n entries falls in decile
// ceil(10*r/n) and receives 1.0 down to 0.1. Rank positions are taken as
// given; positions beyond n (gapped files) clamp to the bottom decile.
std::map<std::string, double> decile_values(const RankingSourceFile& source);

// Aggregates decile values over all sources on top of the 1.0 floor.
// Every id in `universe` gets an entry; sources naming an institution
// outside the universe are rejected.
PrestigeTable institution_prestige(const std::vector<RankingSourceFile>& sources,
                                   const std::vector<std::string>& universe);

// CSV export/import: header institution_id,prestige; rows sorted by id.
void write_prestige_csv(const PrestigeTable& table, const std::filesystem::path& path);
PrestigeTable read_prestige_csv(const std::filesystem::path& path);

} // namespace rc
