#include "rc/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "rc/error.hpp"

namespace rc {

namespace {

// Average ranks (1-based), ties share the mean of their positions.
std::vector<double> average_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        double rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

// Asymptotic Kolmogorov survival function Q(lambda) = 2 sum (-1)^{j-1} exp(-2 j^2 lambda^2).
double kolmogorov_q(double lambda) {
    if (lambda < 1e-9) return 1.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 100; ++j) {
        double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += sign * term;
        if (term < 1e-16) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

struct DisjointSet {
    std::vector<std::size_t> parent;

    explicit DisjointSet(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }

    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

} // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw ValidationError("spearman requires equal-length vectors (" +
                              std::to_string(x.size()) + " vs " + std::to_string(y.size()) + ")");
    if (x.size() < 2) throw ValidationError("spearman requires at least 2 pairs");
    auto constant = [](std::span<const double> v) {
        return std::all_of(v.begin(), v.end(), [&](double e) { return e == v[0]; });
    };
    if (constant(x) || constant(y))
        throw ValidationError("spearman is undefined for an all-constant vector");
    auto rx = average_ranks(x);
    auto ry = average_ranks(y);
    return pearson(rx, ry);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw ValidationError("ks_two_sample requires non-empty samples");
    std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());

    // Sweep the merged order, tracking the CDF gap after each distinct value.
    double d = 0.0;
    std::size_t ia = 0, ib = 0;
    const double na = static_cast<double>(sa.size()), nb = static_cast<double>(sb.size());
    while (ia < sa.size() && ib < sb.size()) {
        double v = std::min(sa[ia], sb[ib]);
        while (ia < sa.size() && sa[ia] == v) ++ia;
        while (ib < sb.size() && sb[ib] == v) ++ib;
        d = std::max(d, std::abs(static_cast<double>(ia) / na - static_cast<double>(ib) / nb));
    }
    d = std::max(d, std::abs(1.0 - static_cast<double>(ib) / nb));
    d = std::max(d, std::abs(static_cast<double>(ia) / na - 1.0));

    const double n_eff = na * nb / (na + nb);
    KsResult result;
    result.d = d;
    result.p = kolmogorov_q(std::sqrt(n_eff) * d);
    return result;
}

CoauthorNetwork coauthorship_components(const CitationGraph& graph,
                                        const std::set<std::string>& sample,
                                        const std::map<std::string, double>* rc_scores) {
    if (sample.empty()) throw ValidationError("coauthorship sample must be non-empty");

    CoauthorNetwork net;
    net.vertices.assign(sample.begin(), sample.end());
    std::unordered_map<std::string_view, std::size_t> vertex_of;
    for (std::size_t i = 0; i < net.vertices.size(); ++i) vertex_of.emplace(net.vertices[i], i);

    // Count shared in-set works per sample pair.
    std::map<std::pair<std::size_t, std::size_t>, std::uint32_t> pair_weight;
    const Index work_count = static_cast<Index>(graph.works().size());
    std::vector<std::size_t> members;
    for (Index w = 0; w < work_count; ++w) {
        if (!graph.journals()[graph.work_journal(w)].in_set) continue;
        members.clear();
        for (Index a : graph.work_authors(w)) {
            auto it = vertex_of.find(graph.author_ids()[a]);
            if (it != vertex_of.end()) members.push_back(it->second);
        }
        std::sort(members.begin(), members.end());
        for (std::size_t i = 0; i < members.size(); ++i)
            for (std::size_t j = i + 1; j < members.size(); ++j)
                ++pair_weight[{members[i], members[j]}];
    }

    DisjointSet components(net.vertices.size());
    for (const auto& [pair, weight] : pair_weight) {
        net.edges.push_back({net.vertices[pair.first], net.vertices[pair.second], weight});
        components.unite(pair.first, pair.second);
    }

    std::map<std::size_t, std::vector<std::string>> by_root;
    for (std::size_t i = 0; i < net.vertices.size(); ++i)
        by_root[components.find(i)].push_back(net.vertices[i]);

    for (auto& [root, group] : by_root) {
        CoauthorComponent component;
        component.members = std::move(group); // already sorted: vertices ascend
        if (rc_scores) {
            double sum = 0.0, count = 0.0;
            for (const auto& id : component.members) {
                auto it = rc_scores->find(id);
                if (it != rc_scores->end()) {
                    sum += it->second;
                    count += 1.0;
                }
            }
            if (count > 0) {
                component.has_scores = true;
                component.rc_mean = sum / count;
                double ss = 0.0;
                for (const auto& id : component.members) {
                    auto it = rc_scores->find(id);
                    if (it != rc_scores->end())
                        ss += (it->second - component.rc_mean) * (it->second - component.rc_mean);
                }
                component.rc_sd = std::sqrt(ss / count);
            }
        }
        net.components.push_back(std::move(component));
    }
    std::sort(net.components.begin(), net.components.end(),
              [](const CoauthorComponent& a, const CoauthorComponent& b) {
                  if (a.members.size() != b.members.size())
                      return a.members.size() > b.members.size();
                  return a.members.front() < b.members.front();
              });
    return net;
}

std::vector<SampleReport> summary_and_share_tables(
    const CitationGraph& graph,
    const std::vector<std::pair<std::string, std::set<std::string>>>& samples) {
    std::vector<SampleReport> reports;
    reports.reserve(samples.size());

    const Index work_count = static_cast<Index>(graph.works().size());
    for (const auto& [label, members] : samples) {
        SampleReport report;
        report.summary.label = label;

        std::set<Index> journals, authors, institutions;
        std::map<std::string, std::uint64_t> journal_works, institution_works, country_works;
        std::uint64_t articles = 0;
        double citations = 0, author_count = 0, inst_count = 0;
        double countries = 0, pages = 0, references = 0;
        std::uint64_t country_works_n = 0, pages_n = 0, refs_n = 0;

        for (Index w = 0; w < work_count; ++w) {
            if (!graph.journals()[graph.work_journal(w)].in_set) continue;
            bool in_sample = false;
            for (Index a : graph.work_authors(w)) {
                if (members.count(graph.author_ids()[a])) {
                    in_sample = true;
                    break;
                }
            }
            if (!in_sample) continue;

            ++articles;
            journals.insert(graph.work_journal(w));
            ++journal_works[graph.journals()[graph.work_journal(w)].id];
            for (Index a : graph.work_authors(w)) authors.insert(a);
            std::set<std::string> work_countries;
            for (Index inst : graph.work_institutions(w)) {
                institutions.insert(inst);
                ++institution_works[graph.institutions()[inst].id];
                if (graph.institutions()[inst].country)
                    work_countries.insert(*graph.institutions()[inst].country);
            }
            for (const auto& c : work_countries) ++country_works[c];

            citations += graph.incoming_count(w);
            author_count += static_cast<double>(graph.work_authors(w).size());
            inst_count += static_cast<double>(graph.work_institutions(w).size());
            if (!work_countries.empty()) {
                countries += static_cast<double>(work_countries.size());
                ++country_works_n;
            } else {
                ++report.summary.works_without_country;
            }
            const auto& record = graph.works()[w];
            if (record.page_count) {
                pages += *record.page_count;
                ++pages_n;
            } else {
                ++report.summary.works_without_pages;
            }
            if (record.reference_count) {
                references += *record.reference_count;
                ++refs_n;
            } else {
                ++report.summary.works_without_references;
            }
        }

        auto& s = report.summary;
        s.articles = articles;
        s.journals = journals.size();
        s.coauthors = authors.size();
        s.institutions = institutions.size();
        if (articles > 0) {
            s.mean_citations = citations / static_cast<double>(articles);
            s.mean_authors = author_count / static_cast<double>(articles);
            s.mean_institutions = inst_count / static_cast<double>(articles);
        }
        if (country_works_n > 0) s.mean_countries = countries / static_cast<double>(country_works_n);
        if (pages_n > 0) s.mean_pages = pages / static_cast<double>(pages_n);
        if (refs_n > 0) s.mean_references = references / static_cast<double>(refs_n);

        auto ranked = [articles](const std::map<std::string, std::uint64_t>& counts) {
            std::vector<ShareEntry> entries;
            entries.reserve(counts.size());
            for (const auto& [key, n] : counts)
                entries.push_back(
                    {key, n, articles ? static_cast<double>(n) / static_cast<double>(articles) : 0.0});
            std::sort(entries.begin(), entries.end(), [](const ShareEntry& a, const ShareEntry& b) {
                if (a.works != b.works) return a.works > b.works;
                return a.key < b.key;
            });
            return entries;
        };
        report.journal_shares = ranked(journal_works);
        report.institution_shares = ranked(institution_works);
        report.country_shares = ranked(country_works);
        reports.push_back(std::move(report));
    }
    return reports;
}

} // namespace rc
