#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rc/ingest.hpp"

namespace rc {

// One cursor-paged pull of works from an OpenAlex-compatible endpoint.
// base_url is configurable so tests can point at a local mock server.
struct FetchSpec {
    std::vector<std::string> journal_external_ids; // source ids defining the journal set
    int census_year = 2020;
    std::string page_cursor = "*"; // opaque continuation token
    double rate_limit = 10.0;      // requests per second
    std::string base_url = "https://api.openalex.org";
    int page_size = 200;
    int max_retries = 5;
    std::string mailto; // optional politeness contact

    void validate() const; // census_year in [1900, current year], rate_limit > 0
};

struct FetchResult {
    RawRecords records;
    std::uint64_t pages_fetched = 0;
    std::uint64_t works_seen = 0;
    std::uint64_t dropped_no_journal = 0;    // upstream records without a source mapping
    std::uint64_t malformed_skipped = 0;     // unparseable result entries
    std::uint64_t out_of_universe_refs = 0;  // references to works outside the pull
    std::uint64_t retries = 0;
};

// Pages through /works with cursor pagination until exhaustion, mapping
// upstream records onto the model schema. Requests are serialized and paced
// to the configured rate; HTTP 429 honors Retry-After, transport failures
// retry with backoff up to max_retries before raising.
FetchResult fetch_openalex_works(const FetchSpec& spec);

} // namespace rc
