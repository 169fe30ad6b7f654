#include "ssnpsa/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>
#include <sstream>

namespace ssnpsa {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

std::vector<std::uint64_t> naive_sa(std::string_view text) {
    if (text.empty()) raise(errc::invalid_argument, "text is empty");
    if (text.size() > oracle_text_limit)
        raise(errc::oracle_limit, "text of " + std::to_string(text.size()) + " characters exceeds the oracle limit of " +
                                      std::to_string(oracle_text_limit));
    std::vector<std::uint64_t> sa(text.size());
    std::iota(sa.begin(), sa.end(), 1);
    std::sort(sa.begin(), sa.end(), [&](std::uint64_t a, std::uint64_t b) {
        return text.substr(a - 1) < text.substr(b - 1);
    });
    return sa;
}

std::uint64_t naive_count(std::string_view text, std::string_view pattern) {
    return naive_locate(text, pattern).size();
}

std::vector<std::uint64_t> naive_locate(std::string_view text, std::string_view pattern) {
    if (pattern.empty()) raise(errc::empty_pattern, "pattern is empty");
    std::vector<std::uint64_t> positions;
    if (pattern.size() > text.size()) return positions;
    for (std::uint64_t p = 0; p + pattern.size() <= text.size(); ++p)
        if (text.compare(p, pattern.size(), pattern) == 0) positions.push_back(p + 1);
    return positions;
}

std::string compare_report::to_string() const {
    std::ostringstream out;
    out << (ok ? "equivalent" : "DIVERGENT") << ": " << ranks_checked << " ranks, " << patterns_checked << " patterns";
    if (!ok) out << "; " << divergence;
    out << "; sigma steps mean " << mean_sigma_steps << " max " << max_sigma_steps;
    out << "; build " << build_seconds << " s, oracle " << oracle_seconds << " s, sweep " << sweep_seconds << " s";
    return out.str();
}

compare_report full_compare(const compressed_sa& csa, const compare_options& options) {
    compare_report report;
    const virtual_text& vt = csa.text();

    auto t0 = std::chrono::steady_clock::now();
    const std::string text = vt.expand();
    std::vector<std::uint64_t> expected = naive_sa(text);
    report.oracle_seconds = seconds_since(t0);

    auto t1 = std::chrono::steady_clock::now();
    std::uint64_t total_steps = 0;
    for (std::uint64_t rank = 1; rank <= expected.size(); ++rank) {
        access_trace trace;
        std::uint64_t got = 0;
        try {
            got = csa.sa_access(rank, trace);
        } catch (const error& e) {
            report.divergence = "sa_access(" + std::to_string(rank) + ") raised " + e.what();
            report.sweep_seconds = seconds_since(t1);
            return report;
        }
        total_steps += trace.sigma_steps;
        report.max_sigma_steps = std::max(report.max_sigma_steps, trace.sigma_steps);
        if (got != expected[rank - 1]) {
            report.divergence = "sa_access(" + std::to_string(rank) + ") = " + std::to_string(got) + ", oracle says " +
                                std::to_string(expected[rank - 1]);
            report.sweep_seconds = seconds_since(t1);
            return report;
        }
        ++report.ranks_checked;
    }
    report.mean_sigma_steps = expected.empty() ? 0 : static_cast<double>(total_steps) / static_cast<double>(expected.size());

    // Sampled pattern checks: half cut from stored words, half random over
    // the alphabet (usually absent).
    std::mt19937_64 rng(options.seed);
    const std::string& alphabet = vt.schema().alphabet();
    for (std::uint64_t i = 0; i < options.pattern_samples; ++i) {
        std::string pattern;
        std::uint64_t max_len = std::min<std::uint64_t>(vt.n(), 16);
        std::uint64_t len = 1 + rng() % max_len;
        if (i % 2 == 0) {
            std::uint64_t row = 1 + rng() % vt.m();
            std::string w = vt.word(row);
            std::uint64_t at = rng() % (w.size() - len + 1);
            pattern = w.substr(at, len);
        } else {
            for (std::uint64_t t = 0; t < len; ++t) pattern += alphabet[rng() % alphabet.size()];
        }
        std::vector<std::uint64_t> expected_pos = naive_locate(text, pattern);
        std::uint64_t got_count = 0;
        std::vector<std::uint64_t> got_pos;
        try {
            got_count = csa.count(pattern);
            got_pos = csa.locate(pattern);
        } catch (const error& e) {
            report.divergence = "pattern '" + pattern + "' raised " + e.what();
            report.sweep_seconds = seconds_since(t1);
            return report;
        }
        if (got_count != expected_pos.size() || got_pos != expected_pos) {
            report.divergence = "pattern '" + pattern + "': index found " + std::to_string(got_count) +
                                " occurrence(s), scan found " + std::to_string(expected_pos.size());
            report.sweep_seconds = seconds_since(t1);
            return report;
        }
        ++report.patterns_checked;
    }
    report.sweep_seconds = seconds_since(t1);
    report.ok = true;
    return report;
}

compare_report full_compare(const virtual_text& vt, const build_config& config, const compare_options& options) {
    auto t0 = std::chrono::steady_clock::now();
    compressed_sa csa = compressed_sa::build(vt, config);
    double build_seconds = seconds_since(t0);
    compare_report report = full_compare(csa, options);
    report.build_seconds = build_seconds;
    return report;
}

}  // namespace ssnpsa
