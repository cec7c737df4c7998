#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "rc/openalex.hpp"

#include <chrono>
#include <ctime>
#include <map>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "rc/error.hpp"

namespace rc {

namespace {

using json = nlohmann::json;

int current_year() {
    std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    return utc.tm_year + 1900;
}

std::string percent_encode(std::string_view value) {
    static const char* hex = "0123456789ABCDEF";
    std::string out;
    out.reserve(value.size());
    for (unsigned char c : value) {
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~' || c == '*') {
            out += static_cast<char>(c);
        } else {
            out += '%';
            out += hex[c >> 4];
            out += hex[c & 0xF];
        }
    }
    return out;
}

// "https://openalex.org/W123" -> "W123"; already-short ids pass through.
std::string short_id(const std::string& url) {
    auto pos = url.rfind('/');
    return pos == std::string::npos ? url : url.substr(pos + 1);
}

std::optional<long> parse_long(const std::string& s) {
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    long v = std::strtol(s.c_str(), &end, 10);
    if (end != s.c_str() + s.size()) return std::nullopt;
    return v;
}

// Paces request starts to the configured rate and retries transport and
// throttling failures with bounded backoff.
class PacedClient {
public:
    PacedClient(const FetchSpec& spec)
        : client_(spec.base_url), min_interval_(1.0 / spec.rate_limit), max_retries_(spec.max_retries) {
        client_.set_connection_timeout(30);
        client_.set_read_timeout(60);
        client_.set_follow_location(true);
    }

    std::uint64_t retries() const { return retries_; }

    json get_json(const std::string& path) {
        int attempt = 0;
        for (;;) {
            pace();
            auto res = client_.Get(path);
            if (res && res->status == 200) {
                try {
                    return json::parse(res->body);
                } catch (const json::exception& e) {
                    throw Error(std::string("malformed JSON response: ") + e.what());
                }
            }
            if (++attempt > max_retries_)
                throw Error("request failed after " + std::to_string(max_retries_) +
                            " retries: " + path +
                            (res ? " (HTTP " + std::to_string(res->status) + ")"
                                 : " (transport error)"));
            ++retries_;
            double delay = 0.25 * static_cast<double>(1 << std::min(attempt, 6));
            if (res && res->status == 429) {
                if (auto ra = parse_long(res->get_header_value("Retry-After")))
                    delay = static_cast<double>(*ra);
            } else if (res && res->status < 500 && res->status != 429) {
                throw Error("HTTP " + std::to_string(res->status) + " for " + path);
            }
            std::this_thread::sleep_for(std::chrono::duration<double>(delay));
        }
    }

private:
    void pace() {
        auto now = std::chrono::steady_clock::now();
        if (last_request_.time_since_epoch().count() != 0) {
            auto next = last_request_ + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                            std::chrono::duration<double>(min_interval_));
            if (next > now) {
                std::this_thread::sleep_until(next);
                now = next;
            }
        }
        last_request_ = now;
    }

    httplib::Client client_;
    double min_interval_;
    int max_retries_;
    std::uint64_t retries_ = 0;
    std::chrono::steady_clock::time_point last_request_{};
};

} // namespace

void FetchSpec::validate() const {
    if (census_year < 1900 || census_year > current_year())
        throw ValidationError("census_year must lie in [1900, current year]");
    if (!(rate_limit > 0.0)) throw ValidationError("rate_limit must be > 0");
    if (page_size < 1) throw ValidationError("page_size must be >= 1");
}

FetchResult fetch_openalex_works(const FetchSpec& spec) {
    spec.validate();
    PacedClient client(spec);
    FetchResult result;

    std::string filter = "publication_year:>" + std::to_string(spec.census_year - 1);
    if (!spec.journal_external_ids.empty()) {
        filter += ",primary_location.source.id:";
        for (std::size_t i = 0; i < spec.journal_external_ids.size(); ++i) {
            if (i) filter += "|";
            filter += spec.journal_external_ids[i];
        }
    }
    const std::string base_query = "/works?filter=" + percent_encode(filter) +
                                   "&per-page=" + std::to_string(spec.page_size) +
                                   (spec.mailto.empty() ? "" : "&mailto=" + percent_encode(spec.mailto));

    struct FetchedWork {
        WorkRecord record;
        std::vector<std::string> referenced;
    };
    std::vector<FetchedWork> fetched;
    std::unordered_set<std::string> seen_work_ids;
    std::map<std::string, std::string> journal_titles;             // id -> title
    std::map<std::string, InstitutionRecord> institutions;         // id -> record

    std::string cursor = spec.page_cursor.empty() ? "*" : spec.page_cursor;
    while (!cursor.empty()) {
        json page = client.get_json(base_query + "&cursor=" + percent_encode(cursor));
        ++result.pages_fetched;

        const auto results = page.find("results");
        if (results == page.end() || !results->is_array() || results->empty()) break;
        for (const auto& item : *results) {
            ++result.works_seen;
            try {
                std::string id = short_id(item.at("id").get<std::string>());
                if (!seen_work_ids.insert(id).second) continue;

                const auto& location = item.at("primary_location");
                if (!location.contains("source") || location["source"].is_null() ||
                    !location["source"].contains("id")) {
                    ++result.dropped_no_journal; // dirty feeds: drop and count
                    continue;
                }
                FetchedWork work;
                work.record.id = std::move(id);
                work.record.journal_id = short_id(location["source"]["id"].get<std::string>());
                journal_titles.emplace(work.record.journal_id,
                                       location["source"].value("display_name", std::string{}));
                work.record.year = item.at("publication_year").get<int>();

                if (item.contains("authorships")) {
                    for (const auto& authorship : item["authorships"]) {
                        if (authorship.contains("author") && authorship["author"].contains("id"))
                            work.record.author_ids.push_back(
                                short_id(authorship["author"]["id"].get<std::string>()));
                        if (!authorship.contains("institutions")) continue;
                        for (const auto& inst : authorship["institutions"]) {
                            if (!inst.contains("id")) continue;
                            InstitutionRecord record;
                            record.id = short_id(inst["id"].get<std::string>());
                            record.name = inst.value("display_name", record.id);
                            if (inst.contains("country_code") && !inst["country_code"].is_null())
                                record.country = inst["country_code"].get<std::string>();
                            work.record.institution_ids.push_back(record.id);
                            institutions.emplace(record.id, std::move(record));
                        }
                    }
                }
                if (work.record.author_ids.empty()) {
                    ++result.malformed_skipped; // the model requires authored works
                    continue;
                }
                if (item.contains("biblio") && item["biblio"].is_object()) {
                    auto first = parse_long(item["biblio"].value("first_page", std::string{}));
                    auto last = parse_long(item["biblio"].value("last_page", std::string{}));
                    if (first && last && *last >= *first)
                        work.record.page_count = static_cast<std::uint32_t>(*last - *first + 1);
                }
                if (item.contains("referenced_works_count"))
                    work.record.reference_count = item["referenced_works_count"].get<std::uint32_t>();
                if (item.contains("referenced_works"))
                    for (const auto& ref : item["referenced_works"])
                        work.referenced.push_back(short_id(ref.get<std::string>()));
                fetched.push_back(std::move(work));
            } catch (const json::exception&) {
                ++result.malformed_skipped;
            }
        }

        cursor.clear();
        if (const auto meta = page.find("meta"); meta != page.end()) {
            const auto next = meta->find("next_cursor");
            if (next != meta->end() && next->is_string()) cursor = next->get<std::string>();
        }
    }
    result.retries = client.retries();

    // Assemble model inputs. Journals without census-year works cannot be
    // ranked, so they enter as exogenous venues.
    std::map<std::string, std::uint32_t> census_counts;
    for (const auto& work : fetched)
        if (work.record.year == spec.census_year) ++census_counts[work.record.journal_id];
    for (const auto& [id, title] : journal_titles) {
        auto it = census_counts.find(id);
        JournalRecord journal;
        journal.id = id;
        journal.title = title;
        journal.in_set = it != census_counts.end();
        journal.census_paper_count = journal.in_set ? it->second : 0;
        result.records.journals.push_back(std::move(journal));
    }
    for (auto& [id, record] : institutions) result.records.institutions.push_back(std::move(record));
    std::unordered_set<std::string> emitted;
    for (const auto& work : fetched) emitted.insert(work.record.id);
    for (auto& work : fetched) {
        for (const auto& ref : work.referenced) {
            if (ref == work.record.id) continue;
            if (emitted.count(ref)) {
                result.records.edges.push_back({work.record.id, ref, 1});
            } else {
                ++result.out_of_universe_refs;
            }
        }
        result.records.works.push_back(std::move(work.record));
    }
    return result;
}

} // namespace rc
