#include "ssnpsa/model.hpp"

#include <algorithm>
#include <charconv>
#include <random>
#include <sstream>

namespace ssnpsa {

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) {
            if (start < text.size()) lines.push_back(text.substr(start));
            break;
        }
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        start = end + 1;
    }
    return lines;
}

bool is_blank(std::string_view line) {
    return line.find_first_not_of(" \t") == std::string_view::npos;
}

std::uint64_t parse_u64(std::string_view token, std::string_view what) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size())
        raise(errc::malformed_input, "cannot parse " + std::string(what) + " from '" + std::string(token) + "'");
    return value;
}

std::vector<std::string_view> split_tokens(std::string_view line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
        if (j > i) tokens.push_back(line.substr(i, j - i));
        i = j;
    }
    return tokens;
}

// All occurrence positions (1-based, overlapping) of needle in haystack.
std::vector<std::uint32_t> occurrences(std::string_view haystack, std::string_view needle) {
    std::vector<std::uint32_t> out;
    std::size_t from = 0;
    while (true) {
        std::size_t at = haystack.find(needle, from);
        if (at == std::string_view::npos) break;
        out.push_back(static_cast<std::uint32_t>(at + 1));
        from = at + 1;
    }
    return out;
}

void check_word_alphas(const ssnp_schema& schema, std::string_view word, std::uint64_t word_index,
                       validation_report& report) {
    for (std::uint32_t i = 1; i <= schema.alpha_count(); ++i) {
        std::vector<std::uint32_t> occ = occurrences(word, schema.alpha(i));
        if (occ.size() == 1 && occ[0] == schema.alpha_column(i)) continue;
        report.ok = false;
        report.violations.push_back({word_index, i, std::move(occ)});
    }
}

std::string realize_assignment(const ssnp_schema& schema, std::uint64_t assignment) {
    std::string word = schema.reference();
    for (std::uint32_t j = 1; j <= schema.k(); ++j) {
        const snp_site& site = schema.sites()[j - 1];
        word[site.column - 1] = ((assignment >> (j - 1)) & 1) ? site.high : site.low;
    }
    return word;
}

}  // namespace

ssnp_schema ssnp_schema::create(std::uint32_t n, std::string alphabet, std::vector<snp_site> sites,
                                std::string reference, char placeholder) {
    if (n < 1) raise(errc::malformed_input, "word length must be at least 1");
    if (alphabet.empty()) raise(errc::malformed_input, "alphabet is empty");
    for (std::size_t i = 0; i < alphabet.size(); ++i) {
        if (alphabet[i] <= sentinel_char)
            raise(errc::malformed_input, "alphabet character must collate above the sentinel");
        if (alphabet[i] == placeholder) raise(errc::malformed_input, "alphabet contains the placeholder character");
        if (i > 0 && alphabet[i - 1] >= alphabet[i])
            raise(errc::malformed_input, "alphabet characters must be strictly increasing");
    }
    if (reference.size() != n) raise(errc::malformed_input, "reference length does not match n");

    std::uint32_t k = static_cast<std::uint32_t>(sites.size());
    for (std::uint32_t j = 0; j < k; ++j) {
        const snp_site& s = sites[j];
        if (s.column < 2 || s.column > n - 1)
            raise(errc::site_placement_violation, "site column " + std::to_string(s.column) + " outside [2, n-1]");
        if (j > 0 && s.column < sites[j - 1].column + 2)
            raise(errc::site_placement_violation, "site columns " + std::to_string(sites[j - 1].column) + " and " +
                                                      std::to_string(s.column) + " closer than 2");
        if (alphabet.find(s.low) == std::string::npos || alphabet.find(s.high) == std::string::npos)
            raise(errc::malformed_input, "allele character not in alphabet");
        if (s.low >= s.high) raise(errc::malformed_input, "alleles must be distinct with low < high");
    }

    ssnp_schema schema;
    schema.n_ = n;
    schema.alphabet_ = std::move(alphabet);
    schema.sites_ = std::move(sites);
    schema.reference_ = std::move(reference);
    schema.placeholder_ = placeholder;

    schema.site_at_.assign(n + 2, 0);
    schema.next_site_.assign(n + 2, 0);
    for (std::uint32_t j = 1; j <= k; ++j) schema.site_at_[schema.sites_[j - 1].column] = j;
    for (std::uint32_t col = n + 1; col >= 1; --col) {
        std::uint32_t here = schema.site_at_[col];
        std::uint32_t after = col < n + 1 ? schema.next_site_[col + 1] : 0;
        schema.next_site_[col] = here != 0 ? here : after;
    }

    for (std::uint32_t col = 1; col <= n; ++col) {
        bool at_site = schema.site_at_[col] != 0;
        char c = schema.reference_[col - 1];
        if (at_site && c != placeholder)
            raise(errc::malformed_input, "reference must hold the placeholder at site column " + std::to_string(col));
        if (!at_site && schema.alphabet_.find(c) == std::string::npos)
            raise(errc::malformed_input, "reference character at column " + std::to_string(col) + " not in alphabet");
    }

    std::uint32_t start = 1;
    for (std::uint32_t j = 1; j <= k + 1; ++j) {
        std::uint32_t end = j <= k ? schema.sites_[j - 1].column : n + 1;  // exclusive
        schema.alphas_.push_back(schema.reference_.substr(start - 1, end - start));
        schema.alpha_columns_.push_back(start);
        if (schema.alphas_.back().empty()) raise(errc::site_placement_violation, "empty inter-site substring");
        start = end + 1;
    }
    return schema;
}

genotype_matrix::genotype_matrix(std::uint64_t m, std::uint32_t k) : m_(m), k_(k) {
    bits_.assign((m * k + 63) / 64, 0);
}

genotype_matrix genotype_matrix::from_rows(const std::vector<std::vector<bool>>& rows, std::uint32_t k) {
    genotype_matrix mat(rows.size(), k);
    for (std::uint64_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != k) raise(errc::length_mismatch, "matrix row width does not match k");
        for (std::uint32_t j = 0; j < k; ++j)
            if (rows[r][j]) mat.set_bit(r + 1, j + 1, true);
    }
    return mat;
}

std::uint64_t genotype_matrix::index(std::uint64_t row, std::uint32_t site) const {
    if (row < 1 || row > m_ || site < 1 || site > k_) raise(errc::index_out_of_range, "matrix cell out of range");
    return (row - 1) * k_ + (site - 1);
}

bool genotype_matrix::bit(std::uint64_t row, std::uint32_t site) const {
    std::uint64_t i = index(row, site);
    return (bits_[i / 64] >> (i % 64)) & 1;
}

void genotype_matrix::set_bit(std::uint64_t row, std::uint32_t site, bool value) {
    std::uint64_t i = index(row, site);
    if (value)
        bits_[i / 64] |= 1ULL << (i % 64);
    else
        bits_[i / 64] &= ~(1ULL << (i % 64));
}

virtual_text::virtual_text(ssnp_schema schema, genotype_matrix matrix)
    : schema_(std::move(schema)), matrix_(std::move(matrix)) {
    if (schema_.k() != matrix_.k()) raise(errc::length_mismatch, "matrix width does not match schema site count");
}

std::uint64_t virtual_text::pos_of(std::uint64_t row, std::uint32_t col) const {
    if (row < 1 || row > m() || col < 1 || col > n() + 1) raise(errc::index_out_of_range, "(row, col) out of range");
    return (row - 1) * (n() + 1) + col;
}

std::pair<std::uint64_t, std::uint32_t> virtual_text::row_col_of(std::uint64_t pos) const {
    if (pos < 1 || pos > size()) raise(errc::index_out_of_range, "text position out of range");
    std::uint64_t row = (pos - 1) / (n() + 1) + 1;
    std::uint32_t col = static_cast<std::uint32_t>(pos - (row - 1) * (n() + 1));
    return {row, col};
}

char virtual_text::char_at(std::uint64_t pos) const {
    auto [row, col] = row_col_of(pos);
    if (col == n() + 1) return sentinel_char;
    std::uint32_t j = schema_.site_at(col);
    if (j != 0) {
        const snp_site& site = schema_.sites()[j - 1];
        return matrix_.bit(row, j) ? site.high : site.low;
    }
    return schema_.reference()[col - 1];
}

std::string virtual_text::word(std::uint64_t row) const {
    if (row < 1 || row > m()) raise(errc::index_out_of_range, "word index out of range");
    std::string w = schema_.reference();
    for (std::uint32_t j = 1; j <= k(); ++j) {
        const snp_site& site = schema_.sites()[j - 1];
        w[site.column - 1] = matrix_.bit(row, j) ? site.high : site.low;
    }
    return w;
}

std::string virtual_text::expand() const {
    std::string d;
    d.reserve(size());
    for (std::uint64_t r = 1; r <= m(); ++r) {
        d += word(r);
        d += sentinel_char;
    }
    return d;
}

std::string validation_report::to_string() const {
    if (ok) return "ok";
    std::ostringstream out;
    for (const validation_violation& v : violations) {
        out << "word " << v.word << ": alpha " << v.alpha_index << " occurs " << v.positions.size() << " time(s) at";
        for (std::uint32_t p : v.positions) out << ' ' << p;
        out << '\n';
    }
    return out.str();
}

validation_report validate(const virtual_text& vt) {
    validation_report report;
    for (std::uint64_t r = 1; r <= vt.m(); ++r) check_word_alphas(vt.schema(), vt.word(r), r, report);
    return report;
}

validation_report language_check_exhaustive(const ssnp_schema& schema, std::uint32_t max_k) {
    if (schema.k() > max_k || schema.k() >= 64)
        raise(errc::too_many_sites, "k = " + std::to_string(schema.k()) + " exceeds exhaustive-check limit " +
                                        std::to_string(std::min(max_k, 63u)));
    validation_report report;
    for (std::uint64_t assignment = 0; assignment < (1ULL << schema.k()); ++assignment)
        check_word_alphas(schema, realize_assignment(schema, assignment), assignment, report);
    return report;
}

std::pair<ssnp_schema, genotype_matrix> generate(const gen_params& params) {
    std::string alphabet = params.alphabet;
    std::sort(alphabet.begin(), alphabet.end());
    alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());
    if (alphabet.size() < 2) raise(errc::invalid_argument, "generator needs an alphabet of at least 2 characters");
    if (params.min_gap < 2) raise(errc::invalid_argument, "min_gap must be at least 2");
    if (params.n < params.k * (params.min_gap + 1) + 2)
        raise(errc::invalid_argument, "n too small for k sites with the requested spacing");

    const std::uint32_t n = params.n, k = params.k;
    const std::uint64_t sigma = alphabet.size();
    std::mt19937_64 rng(params.seed);

    for (std::uint32_t attempt = 0; attempt <= params.max_retries; ++attempt) {
        // Partition the n - k fixed characters into k + 1 inter-site runs,
        // interior runs at least min_gap - 1 long, with randomized extra so
        // short runs (which invite duplicate substrings) are avoided. The
        // outer runs only need length 1 structurally but get boosted toward
        // the interior minimum when the budget allows.
        std::vector<std::uint64_t> alpha_len(k + 1, 1);
        for (std::uint32_t i = 1; i + 1 <= k; ++i) alpha_len[i] = params.min_gap - 1;
        std::uint64_t used = 0;
        for (std::uint64_t len : alpha_len) used += len;
        std::uint64_t slack = (n - k) - used;
        if (k >= 1) {
            std::uint64_t boost = std::min<std::uint64_t>(params.min_gap - 2, slack / 2);
            alpha_len[0] += boost;
            alpha_len[k] += boost;
            slack -= 2 * boost;
        }
        std::vector<std::uint64_t> weights(k + 1);
        std::uint64_t total_weight = 0;
        for (std::uint64_t& w : weights) {
            w = rng() % 1000 + 1;
            total_weight += w;
        }
        std::uint64_t given = 0;
        for (std::uint32_t i = 0; i <= k; ++i) {
            std::uint64_t extra = slack * weights[i] / total_weight;
            alpha_len[i] += extra;
            given += extra;
        }
        alpha_len[0] += slack - given;

        std::vector<snp_site> sites(k);
        std::uint32_t col = 0;
        for (std::uint32_t j = 0; j < k; ++j) {
            col += static_cast<std::uint32_t>(alpha_len[j]) + 1;
            sites[j].column = col;
            std::uint64_t a = rng() % sigma;
            std::uint64_t b = rng() % (sigma - 1);
            if (b >= a) ++b;
            sites[j].low = alphabet[std::min(a, b)];
            sites[j].high = alphabet[std::max(a, b)];
        }

        std::string reference(n, '?');
        for (std::uint32_t c = 1; c <= n; ++c) {
            bool at_site = false;
            for (const snp_site& s : sites)
                if (s.column == c) at_site = true;
            if (!at_site) reference[c - 1] = alphabet[rng() % sigma];
        }

        genotype_matrix matrix(params.m, k);
        for (std::uint64_t r = 1; r <= params.m; ++r)
            for (std::uint32_t j = 1; j <= k; ++j) matrix.set_bit(r, j, rng() & 1);

        ssnp_schema schema = ssnp_schema::create(n, alphabet, sites, reference);
        virtual_text vt(schema, matrix);
        if (validate(vt).ok) return {std::move(schema), std::move(matrix)};
    }
    raise(errc::generation_failed, "could not sample a valid instance in " + std::to_string(params.max_retries + 1) +
                                       " attempts; increase n, min_gap or the alphabet");
}

ssnp_schema parse_schema(std::string_view text, char placeholder) {
    std::vector<std::string_view> lines;
    for (std::string_view line : split_lines(text)) {
        if (is_blank(line) || line.front() == '#') continue;
        lines.push_back(line);
    }
    if (lines.size() < 3) raise(errc::malformed_input, "schema file needs header, dimensions and reference lines");
    if (lines[0] != "SSNP 1") raise(errc::malformed_input, "schema file must start with 'SSNP 1'");

    std::uint64_t n = 0, k = 0;
    std::string alphabet;
    bool have_n = false, have_k = false, have_alphabet = false;
    for (std::string_view token : split_tokens(lines[1])) {
        if (token.starts_with("n=")) {
            n = parse_u64(token.substr(2), "n");
            have_n = true;
        } else if (token.starts_with("k=")) {
            k = parse_u64(token.substr(2), "k");
            have_k = true;
        } else if (token.starts_with("alphabet=")) {
            alphabet = std::string(token.substr(9));
            have_alphabet = true;
        } else {
            raise(errc::malformed_input, "unknown token '" + std::string(token) + "' in dimensions line");
        }
    }
    if (!have_n || !have_k || !have_alphabet) raise(errc::malformed_input, "dimensions line must set n=, k= and alphabet=");

    if (!lines[2].starts_with("ref=")) raise(errc::malformed_input, "third line must be ref=<reference>");
    std::string reference(lines[2].substr(4));

    if (lines.size() != 3 + k) raise(errc::malformed_input, "expected exactly k site lines");
    std::vector<snp_site> sites;
    for (std::uint64_t j = 0; j < k; ++j) {
        std::vector<std::string_view> tokens = split_tokens(lines[3 + j]);
        if (tokens.size() != 4 || tokens[0] != "site" || tokens[2].size() != 1 || tokens[3].size() != 1)
            raise(errc::malformed_input, "site line must be 'site <col> <low> <high>'");
        snp_site site;
        site.column = static_cast<std::uint32_t>(parse_u64(tokens[1], "site column"));
        site.low = tokens[2][0];
        site.high = tokens[3][0];
        sites.push_back(site);
    }
    return ssnp_schema::create(static_cast<std::uint32_t>(n), std::move(alphabet), std::move(sites), std::move(reference),
                               placeholder);
}

std::string serialize_schema(const ssnp_schema& schema) {
    std::ostringstream out;
    out << "SSNP 1\n";
    out << "n=" << schema.n() << " k=" << schema.k() << " alphabet=" << schema.alphabet() << '\n';
    out << "ref=" << schema.reference() << '\n';
    for (const snp_site& s : schema.sites()) out << "site " << s.column << ' ' << s.low << ' ' << s.high << '\n';
    return out.str();
}

genotype_matrix parse_matrix(std::string_view text, const ssnp_schema& schema, std::optional<std::uint64_t> forced_rows) {
    const std::uint32_t k = schema.k();
    std::vector<std::vector<bool>> rows;
    for (std::string_view line : split_lines(text)) {
        if (is_blank(line)) continue;
        if (line.front() == '#') continue;
        if (line.size() != k) raise(errc::malformed_input, "matrix row has " + std::to_string(line.size()) +
                                                               " characters, expected k = " + std::to_string(k));
        std::vector<bool> row(k);
        for (std::uint32_t j = 0; j < k; ++j) {
            if (line[j] != '0' && line[j] != '1') raise(errc::malformed_input, "matrix rows must be over {0,1}");
            row[j] = line[j] == '1';
        }
        rows.push_back(std::move(row));
    }
    if (k == 0) {
        // Rows are invisible in the file; the caller must say how many.
        return genotype_matrix(forced_rows.value_or(0), 0);
    }
    if (forced_rows && *forced_rows != rows.size())
        raise(errc::malformed_input, "matrix file has " + std::to_string(rows.size()) + " rows, --rows says " +
                                         std::to_string(*forced_rows));
    return genotype_matrix::from_rows(rows, k);
}

std::string serialize_matrix(const genotype_matrix& matrix) {
    std::string out;
    for (std::uint64_t r = 1; r <= matrix.m(); ++r) {
        for (std::uint32_t j = 1; j <= matrix.k(); ++j) out += matrix.bit(r, j) ? '1' : '0';
        out += '\n';
    }
    return out;
}

std::vector<std::string> read_alignment(std::string_view text) {
    std::vector<std::string_view> lines = split_lines(text);
    std::size_t first = 0;
    while (first < lines.size() && is_blank(lines[first])) ++first;
    bool fasta = first < lines.size() && lines[first].front() == '>';

    std::vector<std::string> words;
    if (fasta) {
        bool in_record = false;
        for (std::size_t i = first; i < lines.size(); ++i) {
            std::string_view line = lines[i];
            if (is_blank(line)) continue;
            if (line.front() == '>') {
                words.emplace_back();
                in_record = true;
            } else {
                if (!in_record) raise(errc::malformed_input, "FASTA sequence data before first '>' header");
                words.back() += std::string(line);
            }
        }
    } else {
        for (std::string_view line : lines)
            if (!is_blank(line)) words.emplace_back(line);
    }
    return words;
}

std::pair<ssnp_schema, genotype_matrix> infer_from_alignment(std::span<const std::string> words, char placeholder) {
    if (words.empty()) raise(errc::malformed_input, "alignment has no sequences");
    const std::size_t n = words[0].size();
    if (n == 0) raise(errc::malformed_input, "alignment sequences are empty");
    for (const std::string& w : words)
        if (w.size() != n)
            raise(errc::length_mismatch, "sequences have different lengths (" + std::to_string(n) + " vs " +
                                             std::to_string(w.size()) + ")");

    std::string alphabet;
    for (const std::string& w : words)
        for (char c : w) {
            if (c <= sentinel_char) raise(errc::malformed_input, std::string("sequence character '") + c +
                                                                     "' collates at or below the sentinel");
            if (c == placeholder) raise(errc::malformed_input, "sequence contains the placeholder character");
            if (alphabet.find(c) == std::string::npos) alphabet += c;
        }
    std::sort(alphabet.begin(), alphabet.end());

    std::string reference(n, placeholder);
    std::vector<snp_site> sites;
    for (std::size_t col = 1; col <= n; ++col) {
        char lo = 0, hi = 0;
        for (const std::string& w : words) {
            char c = w[col - 1];
            if (lo == 0) {
                lo = hi = c;
            } else if (c != lo && c != hi) {
                if (lo != hi)
                    raise(errc::too_many_alleles_in_column,
                          "column " + std::to_string(col) + " has more than two distinct characters");
                if (c < lo)
                    lo = c;
                else
                    hi = c;
            }
        }
        if (lo == hi) {
            reference[col - 1] = lo;
        } else {
            snp_site site;
            site.column = static_cast<std::uint32_t>(col);
            site.low = lo;
            site.high = hi;
            sites.push_back(site);
        }
    }

    std::uint32_t k = static_cast<std::uint32_t>(sites.size());
    ssnp_schema schema = ssnp_schema::create(static_cast<std::uint32_t>(n), std::move(alphabet), std::move(sites),
                                             std::move(reference), placeholder);

    genotype_matrix matrix(words.size(), k);
    for (std::uint64_t r = 1; r <= words.size(); ++r)
        for (std::uint32_t j = 1; j <= k; ++j)
            matrix.set_bit(r, j, words[r - 1][schema.sites()[j - 1].column - 1] == schema.sites()[j - 1].high);

    virtual_text vt(schema, matrix);
    validation_report report = validate(vt);
    if (!report.ok) raise(errc::uniqueness_violation, "alignment violates substring uniqueness:\n" + report.to_string());
    return {std::move(schema), std::move(matrix)};
}

}  // namespace ssnpsa
