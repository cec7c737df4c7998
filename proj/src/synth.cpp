#include "rc/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

#include "rc/error.hpp"

namespace rc {

namespace {

constexpr const char* kCountries[] = {"US", "GB", "DE", "FR", "CN", "JP",
                                      "ES", "IT", "AU", "CA", "KR", "BR"};

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t hash = 1469598103934665603ull;
    for (unsigned char c : s) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    return hash;
}

// One independent pseudo-random stream per entity class, split by a fixed
// label so adding a class never perturbs existing draws.
std::mt19937_64 stream(std::uint64_t seed, std::string_view label) {
    std::seed_seq seq{seed, fnv1a(label)};
    return std::mt19937_64(seq);
}

std::string padded_id(char prefix, std::uint32_t n, int width) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%c%0*u", prefix, width, n);
    return buf;
}

struct Plan {
    std::uint32_t high_institutions = 0;
    std::uint32_t obscure_institutions = 0; // unranked tail hosting the cartel
    std::uint32_t elite_journals = 0;
    std::uint32_t cartel_journals = 0;
    std::uint32_t baseline_journals = 0;
    std::uint32_t baseline_authors = 0;
};

Plan make_plan(const SynthConfig& c) {
    Plan p;
    p.high_institutions = static_cast<std::uint32_t>(
        std::lround(c.prestige_profile * static_cast<double>(c.institution_pool)));
    p.high_institutions = std::min(p.high_institutions, c.institution_pool);
    p.obscure_institutions =
        std::min(c.institution_pool - p.high_institutions, std::max(1u, c.institution_pool / 6));
    p.elite_journals = c.honest_elite_size > 0 ? std::max(1u, c.journal_count / 10) : 0;
    p.cartel_journals = c.cartel_size > 0 ? std::max(1u, c.journal_count / 20) : 0;
    if (p.elite_journals + p.cartel_journals >= c.journal_count)
        throw ValidationError("synth config infeasible: not enough journals for all classes");
    p.baseline_journals = c.journal_count - p.elite_journals - p.cartel_journals;
    p.baseline_authors = c.author_pool - c.honest_elite_size - c.cartel_size;
    return p;
}

} // namespace

void SynthConfig::validate() const {
    if (journal_count == 0 || works_per_journal == 0)
        throw ValidationError("synth config requires journals and works per journal");
    if (author_pool == 0 || institution_pool == 0)
        throw ValidationError("synth config requires non-empty author and institution pools");
    if (prestige_profile < 0.0 || prestige_profile > 1.0)
        throw ValidationError("prestige_profile must lie in [0, 1]");
    if (base_citation_rate < 0.0) throw ValidationError("base_citation_rate must be >= 0");
    if (ranking_source_count == 0) throw ValidationError("at least one ranking source required");
    if (static_cast<std::uint64_t>(honest_elite_size) + cartel_size > author_pool)
        throw ValidationError("synth config infeasible: cartel_size + honest_elite_size (" +
                              std::to_string(honest_elite_size + cartel_size) +
                              ") exceeds author_pool (" + std::to_string(author_pool) + ")");

    const Plan plan = make_plan(*this);
    const std::uint64_t wpj = works_per_journal;
    if (honest_elite_size > plan.elite_journals * wpj)
        throw ValidationError("synth config infeasible: more elites than elite-journal works");
    if (cartel_size > 0) {
        const std::uint64_t cartel_works = plan.cartel_journals * wpj;
        if (cartel_size > cartel_works)
            throw ValidationError("synth config infeasible: more cartel members than cartel works");
        if (cartel_citation_boost > cartel_works - 1)
            throw ValidationError(
                "synth config infeasible: cartel_citation_boost exceeds co-cartel work count");
    }
    if (plan.baseline_authors == 0)
        throw ValidationError("synth config infeasible: author pool leaves no baseline authors");
    if (plan.baseline_authors > plan.baseline_journals * wpj)
        throw ValidationError("synth config infeasible: more baseline authors than baseline works");
}

const char* role_name(AuthorRole role) {
    switch (role) {
        case AuthorRole::elite: return "elite";
        case AuthorRole::cartel: return "cartel";
        default: return "baseline";
    }
}

SynthOutput generate_network(const SynthConfig& config) {
    config.validate();
    const Plan plan = make_plan(config);
    SynthOutput out;

    const int inst_width = static_cast<int>(std::to_string(config.institution_pool).size());
    const int journal_width = static_cast<int>(std::to_string(config.journal_count).size());
    const int author_width = static_cast<int>(std::to_string(config.author_pool).size());
    const std::uint64_t total_works =
        static_cast<std::uint64_t>(config.journal_count) * config.works_per_journal;
    const int work_width = static_cast<int>(std::to_string(total_works).size());

    // Institutions: the first plan.high_institutions are high-prestige and an
    // obscure tail stays effectively unranked (it hosts the cartel). Latent
    // quality drives the noisy per-source rankings below.
    auto inst_rng = stream(config.seed, "institutions");
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> quality(config.institution_pool);
    const std::uint32_t obscure_first = config.institution_pool - plan.obscure_institutions;
    for (std::uint32_t i = 0; i < config.institution_pool; ++i) {
        if (i < plan.high_institutions)
            quality[i] = 0.75 + 0.25 * unit(inst_rng);
        else if (i >= obscure_first)
            quality[i] = 0.02 * unit(inst_rng);
        else
            quality[i] = 0.1 + 0.35 * unit(inst_rng);
        InstitutionRecord record;
        record.id = padded_id('I', i + 1, inst_width);
        record.name = "Institution " + std::to_string(i + 1);
        if ((i + 1) % 17 != 0) // a few lack country metadata
            record.country = kCountries[i % (sizeof(kCountries) / sizeof(kCountries[0]))];
        out.institutions.push_back(std::move(record));
    }

    // Ranking sources: noisy orderings of latent quality with varying
    // coverage, so top institutions land in top deciles of most sources and
    // the tail stays unlisted (floor prestige).
    auto rank_rng = stream(config.seed, "rankings");
    std::normal_distribution<double> noise(0.0, 0.08);
    for (std::uint32_t s = 0; s < config.ranking_source_count; ++s) {
        std::vector<std::pair<double, std::uint32_t>> scored;
        scored.reserve(config.institution_pool);
        for (std::uint32_t i = 0; i < config.institution_pool; ++i)
            scored.emplace_back(quality[i] + noise(rank_rng), i);
        std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        double coverage = config.ranking_source_count == 1
                              ? 0.5
                              : 0.3 + 0.45 * static_cast<double>(s) /
                                          static_cast<double>(config.ranking_source_count - 1);
        auto listed = static_cast<std::uint32_t>(
            std::max<double>(1.0, coverage * static_cast<double>(config.institution_pool)));
        RankingSourceFile source;
        source.source_name = "synth_rank_" + std::to_string(s + 1);
        for (std::uint32_t r = 0; r < listed; ++r)
            source.entries.push_back({r + 1, out.institutions[scored[r].second].id});
        out.rankings.push_back(std::move(source));
    }

    // Journals: [elite | cartel | baseline] id ranges. Every journal carries
    // a latent quality that drives both how attractive its works are to
    // organic citers and how prestigious its authors' hosts tend to be; the
    // spread anchors the score distribution at the fixed point. Cartel
    // journals attract no organic citations at all.
    auto journal_rng = stream(config.seed, "journals");
    std::vector<double> journal_quality(config.journal_count);
    auto journal_class = [&](std::uint32_t j) -> AuthorRole {
        if (j < plan.elite_journals) return AuthorRole::elite;
        if (j < plan.elite_journals + plan.cartel_journals) return AuthorRole::cartel;
        return AuthorRole::baseline;
    };
    for (std::uint32_t j = 0; j < config.journal_count; ++j) {
        switch (journal_class(j)) {
            case AuthorRole::elite: journal_quality[j] = 0.9 + 0.1 * unit(journal_rng); break;
            case AuthorRole::cartel: journal_quality[j] = 0.0; break;
            default: {
                // Even ladder over (0.15, 0.85] with a little jitter.
                double step = plan.baseline_journals > 1
                                  ? static_cast<double>(j - plan.elite_journals -
                                                        plan.cartel_journals) /
                                        static_cast<double>(plan.baseline_journals - 1)
                                  : 1.0;
                journal_quality[j] =
                    std::clamp(0.15 + 0.7 * step + 0.05 * (unit(journal_rng) - 0.5), 0.05, 1.0);
            }
        }
        JournalRecord record;
        record.id = padded_id('J', j + 1, journal_width);
        record.title = "Journal " + std::to_string(j + 1);
        record.in_set = true;
        record.census_paper_count = config.works_per_journal;
        out.journals.push_back(std::move(record));
    }

    // Authors: [elite | cartel | baseline] id ranges.
    std::vector<std::string> author_id(config.author_pool);
    for (std::uint32_t a = 0; a < config.author_pool; ++a) {
        author_id[a] = padded_id('A', a + 1, author_width);
        AuthorRole role = a < config.honest_elite_size ? AuthorRole::elite
                          : a < config.honest_elite_size + config.cartel_size
                              ? AuthorRole::cartel
                              : AuthorRole::baseline;
        out.truth.roles.emplace(author_id[a], role);
    }
    const std::uint32_t elite0 = 0;
    const std::uint32_t cartel0 = config.honest_elite_size;
    const std::uint32_t baseline0 = config.honest_elite_size + config.cartel_size;

    auto work_rng = stream(config.seed, "works");
    auto pick = [&](std::mt19937_64& rng, std::uint32_t lo, std::uint32_t n) {
        return lo + static_cast<std::uint32_t>(
                        std::uniform_int_distribution<std::uint32_t>(0, n - 1)(rng));
    };

    std::vector<std::vector<Index>> work_insts; // institution indices per work
    std::vector<std::uint32_t> elite_work_indices, cartel_work_indices, organic_work_indices;
    std::uint32_t elite_seen = 0, cartel_seen = 0, baseline_seen = 0;

    for (std::uint32_t j = 0; j < config.journal_count; ++j) {
        const AuthorRole cls = journal_class(j);
        for (std::uint32_t k = 0; k < config.works_per_journal; ++k) {
            const auto w = static_cast<std::uint32_t>(out.works.size());
            WorkRecord record;
            record.id = padded_id('W', w + 1, work_width);
            record.journal_id = out.journals[j].id;
            record.year = config.census_year;
            record.page_count = 4 + static_cast<std::uint32_t>(
                                        std::uniform_int_distribution<int>(0, 36)(work_rng));
            record.reference_count = 10 + static_cast<std::uint32_t>(
                                              std::uniform_int_distribution<int>(0, 50)(work_rng));

            std::vector<std::uint32_t> authors;
            std::vector<Index> insts;
            auto add_inst = [&](bool high) {
                if (plan.high_institutions == 0) high = false;
                if (plan.high_institutions == config.institution_pool) high = true;
                std::uint32_t i = high ? pick(work_rng, 0, plan.high_institutions)
                                       : pick(work_rng, plan.high_institutions,
                                              config.institution_pool - plan.high_institutions);
                if (std::find(insts.begin(), insts.end(), i) == insts.end()) insts.push_back(i);
            };
            // Prestigious hosts concentrate in good journals.
            const double p_high = 0.1 + 0.8 * journal_quality[j];

            if (cls == AuthorRole::elite) {
                // Deal each elite one guaranteed slot first, then mix.
                bool elite_authored;
                if (elite_seen < config.honest_elite_size) {
                    authors.push_back(elite0 + elite_seen++);
                    elite_authored = true;
                } else {
                    elite_authored = unit(work_rng) < 0.3;
                    if (elite_authored)
                        authors.push_back(pick(work_rng, elite0, config.honest_elite_size));
                }
                if (elite_authored) {
                    if (unit(work_rng) < 0.4)
                        authors.push_back(pick(work_rng, elite0, config.honest_elite_size));
                    if (unit(work_rng) < 0.3 && plan.baseline_authors > 0)
                        authors.push_back(pick(work_rng, baseline0, plan.baseline_authors));
                } else {
                    int n = 1 + std::uniform_int_distribution<int>(0, 2)(work_rng);
                    for (int i = 0; i < n; ++i)
                        authors.push_back(pick(work_rng, baseline0, plan.baseline_authors));
                }
                add_inst(unit(work_rng) < p_high);
                if (unit(work_rng) < 0.5) add_inst(unit(work_rng) < p_high);
                elite_work_indices.push_back(w);
                organic_work_indices.push_back(w);
            } else if (cls == AuthorRole::cartel) {
                if (cartel_seen < config.cartel_size) authors.push_back(cartel0 + cartel_seen++);
                int extra = 2 + std::uniform_int_distribution<int>(0, 2)(work_rng);
                while (static_cast<int>(authors.size()) < extra)
                    authors.push_back(pick(work_rng, cartel0, config.cartel_size));
                // Cartel works sit at the unranked tail of the host pool.
                std::uint32_t tail_first = config.institution_pool - plan.obscure_institutions;
                insts.push_back(pick(work_rng, tail_first, plan.obscure_institutions));
                if (unit(work_rng) < 0.5) {
                    std::uint32_t i = pick(work_rng, tail_first, plan.obscure_institutions);
                    if (std::find(insts.begin(), insts.end(), i) == insts.end())
                        insts.push_back(i);
                }
                cartel_work_indices.push_back(w);
            } else {
                if (baseline_seen < plan.baseline_authors) {
                    authors.push_back(baseline0 + baseline_seen++);
                } else {
                    authors.push_back(pick(work_rng, baseline0, plan.baseline_authors));
                }
                int n = std::uniform_int_distribution<int>(0, 2)(work_rng);
                for (int i = 0; i < n; ++i)
                    authors.push_back(pick(work_rng, baseline0, plan.baseline_authors));
                add_inst(unit(work_rng) < p_high);
                if (unit(work_rng) < 0.5) add_inst(unit(work_rng) < p_high);
                organic_work_indices.push_back(w);
            }

            std::sort(authors.begin(), authors.end());
            authors.erase(std::unique(authors.begin(), authors.end()), authors.end());
            for (std::uint32_t a : authors) record.author_ids.push_back(author_id[a]);
            for (Index i : insts) record.institution_ids.push_back(out.institutions[i].id);
            work_insts.push_back(std::move(insts));
            out.works.push_back(std::move(record));
        }
    }

    // Organic citations: targets drawn from quality-weighted urns with one
    // extra ball per citation received (preferential attachment on the raw
    // count). High-prestige-affiliated citers favor works in elite journals,
    // which is what injects the exogenous prior downstream.
    auto cite_rng = stream(config.seed, "citations");
    auto is_high_affiliated = [&](std::uint32_t w) {
        for (Index i : work_insts[w])
            if (i < plan.high_institutions) return true;
        return false;
    };
    std::vector<std::uint32_t> urn_all, urn_elite;
    for (std::uint32_t w : organic_work_indices) {
        auto balls =
            1 + static_cast<int>(std::lround(9.0 * journal_quality[w / config.works_per_journal]));
        bool elite_target = journal_class(w / config.works_per_journal) == AuthorRole::elite;
        for (int b = 0; b < balls; ++b) {
            urn_all.push_back(w);
            if (elite_target) urn_elite.push_back(w);
        }
    }
    std::unordered_set<std::uint64_t> cited_pairs;
    auto emit_edge = [&](std::uint32_t citing, std::uint32_t cited) {
        out.edges.push_back({out.works[citing].id, out.works[cited].id, 1});
    };

    if (config.base_citation_rate > 0.0 && !urn_all.empty()) {
        std::poisson_distribution<int> citation_count(config.base_citation_rate);
        for (std::uint32_t citing : organic_work_indices) {
            const bool prefers_elite = !urn_elite.empty() && is_high_affiliated(citing);
            int wanted = citation_count(cite_rng);
            for (int c = 0; c < wanted; ++c) {
                std::uint32_t target = kNoIndex;
                for (int attempt = 0; attempt < 8; ++attempt) {
                    auto& urn = (prefers_elite && unit(cite_rng) < 0.75) ? urn_elite : urn_all;
                    std::uint32_t candidate =
                        urn[std::uniform_int_distribution<std::size_t>(0, urn.size() - 1)(cite_rng)];
                    if (candidate == citing) continue;
                    std::uint64_t key = (static_cast<std::uint64_t>(citing) << 32) | candidate;
                    if (!cited_pairs.insert(key).second) continue;
                    target = candidate;
                    break;
                }
                if (target == kNoIndex) continue;
                emit_edge(citing, target);
                urn_all.push_back(target); // works are journal-major: journal = w / wpj
                if (journal_class(target / config.works_per_journal) == AuthorRole::elite)
                    urn_elite.push_back(target);
            }
        }
    }

    // Cartel citations: each cartel work receives exactly
    // cartel_citation_boost citations from distinct co-cartel works.
    if (!cartel_work_indices.empty() && config.cartel_citation_boost > 0) {
        auto cartel_rng = stream(config.seed, "cartel");
        for (std::uint32_t cited : cartel_work_indices) {
            // Partial Fisher-Yates over co-cartel works.
            std::vector<std::uint32_t> pool;
            pool.reserve(cartel_work_indices.size() - 1);
            for (std::uint32_t c : cartel_work_indices)
                if (c != cited) pool.push_back(c);
            for (std::uint32_t i = 0; i < config.cartel_citation_boost; ++i) {
                auto j = static_cast<std::uint32_t>(std::uniform_int_distribution<std::size_t>(
                    i, pool.size() - 1)(cartel_rng));
                std::swap(pool[i], pool[j]);
                emit_edge(pool[i], cited);
            }
        }
    }

    return out;
}

SeparationReport ground_truth_separation(const std::vector<AuthorScore>& scores,
                                         const GroundTruth& truth) {
    std::map<std::string, std::string> labels;
    for (const auto& [id, role] : truth.roles) labels.emplace(id, role_name(role));

    std::unordered_set<std::string_view> scored;
    for (const auto& s : scores) scored.insert(s.author_id);
    for (const auto& [id, role] : truth.roles)
        if (!scored.count(id))
            throw ValidationError("labeled author '" + id + "' has no score");

    TierAssignment tiers = segment_tiers(scores, labels);

    SeparationReport report;
    auto role_slot = [](AuthorRole role) -> std::size_t {
        return role == AuthorRole::baseline ? 0 : role == AuthorRole::elite ? 1 : 2;
    };
    std::array<std::uint32_t, 3> role_totals{};
    for (std::size_t i = 0; i < tiers.authors.size(); ++i) {
        auto it = truth.roles.find(tiers.authors[i]);
        if (it == truth.roles.end()) continue;
        ++report.tier_role_counts[static_cast<std::size_t>(tiers.tier[i] - 1)][role_slot(it->second)];
        ++role_totals[role_slot(it->second)];
    }

    // Citation-count decile membership and attenuation, per role.
    std::vector<const AuthorScore*> by_citations;
    by_citations.reserve(scores.size());
    for (const auto& s : scores) by_citations.push_back(&s);
    std::sort(by_citations.begin(), by_citations.end(),
              [](const AuthorScore* a, const AuthorScore* b) {
                  if (a->citation_count != b->citation_count)
                      return a->citation_count > b->citation_count;
                  return a->author_id < b->author_id;
              });
    const std::size_t decile =
        (by_citations.size() + 9) / 10; // top raw-citation decile size (ceil)
    std::uint32_t cartel_top_decile = 0, cartel_attenuated = 0;
    double cartel_cites = 0, baseline_cites = 0;
    std::uint32_t baseline_n = 0;
    for (std::size_t i = 0; i < by_citations.size(); ++i) {
        auto it = truth.roles.find(by_citations[i]->author_id);
        if (it == truth.roles.end()) continue;
        if (it->second == AuthorRole::cartel) {
            if (i < decile) ++cartel_top_decile;
            if (by_citations[i]->attenuated) ++cartel_attenuated;
            cartel_cites += static_cast<double>(by_citations[i]->citation_count);
        } else if (it->second == AuthorRole::baseline) {
            baseline_cites += static_cast<double>(by_citations[i]->citation_count);
            ++baseline_n;
        }
    }

    const double cartel_n = role_totals[2], elite_n = role_totals[1];
    if (cartel_n > 0) {
        report.cartel_bottom_tier_fraction = report.tier_role_counts[2][2] / cartel_n;
        report.cartel_attenuated_fraction = cartel_attenuated / cartel_n;
        report.cartel_top_citation_decile_fraction = cartel_top_decile / cartel_n;
        report.cartel_mean_citations = cartel_cites / cartel_n;
    }
    if (elite_n > 0) report.elite_top_tier_fraction = report.tier_role_counts[0][1] / elite_n;
    if (baseline_n > 0)
        report.baseline_mean_citations = baseline_cites / static_cast<double>(baseline_n);
    return report;
}

} // namespace rc
