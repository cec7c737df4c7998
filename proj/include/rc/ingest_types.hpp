#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rc {

// One institutional ranking source. Ranks are strictly increasing as read
// from the file; gaps are legal and kept as given.
struct RankingEntry {
    std::uint32_t rank = 0;
    std::string institution_id;

    bool operator==(const RankingEntry&) const = default;
};

struct RankingSourceFile {
    std::string source_name;
    std::vector<RankingEntry> entries;

    bool operator==(const RankingSourceFile&) const = default;
};

} // namespace rc
