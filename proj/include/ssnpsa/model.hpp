#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ssnpsa/errors.hpp"

namespace ssnpsa {

// The database model: m words of length n over a common alphabet, identical
// except at k SNP sites where each word carries one of two alleles. Words are
// concatenated with a sentinel into a virtual text of length N = m*(n+1)
// that is never required to be materialized for queries.

constexpr char sentinel_char = '#';

struct snp_site {
    std::uint32_t column = 0;  // 1-based column in [2, n-1]
    char low = 0;              // allele selected by matrix bit 0
    char high = 0;             // allele selected by matrix bit 1; low < high
};

class ssnp_schema {
public:
    ssnp_schema() = default;

    // Validates the structural invariants: alphabet strictly increasing and
    // collating above the sentinel, sites strictly increasing with gaps >= 2
    // inside [2, n-1], alleles distinct alphabet characters with low < high,
    // reference holding the placeholder exactly at site columns.
    static ssnp_schema create(std::uint32_t n, std::string alphabet, std::vector<snp_site> sites,
                              std::string reference, char placeholder = '?');

    std::uint32_t n() const noexcept { return n_; }
    std::uint32_t k() const noexcept { return static_cast<std::uint32_t>(sites_.size()); }
    const std::string& alphabet() const noexcept { return alphabet_; }
    const std::vector<snp_site>& sites() const noexcept { return sites_; }
    const std::string& reference() const noexcept { return reference_; }
    char placeholder() const noexcept { return placeholder_; }

    std::uint32_t site_column(std::uint32_t j) const { return sites_.at(j - 1).column; }

    // Site index whose column equals col, or 0 if col is not a site column.
    std::uint32_t site_at(std::uint32_t col) const { return site_at_.at(col); }

    // Smallest site index j with column >= col, or 0 if none (col is past
    // the last site). col may be n+1 (the sentinel column).
    std::uint32_t first_site_at_or_after(std::uint32_t col) const { return next_site_.at(col); }

    // Fixed inter-site substrings: alpha(1) precedes site 1, alpha(k+1)
    // follows site k. All are non-empty by the placement invariants.
    const std::string& alpha(std::uint32_t i) const { return alphas_.at(i - 1); }
    std::uint32_t alpha_count() const noexcept { return static_cast<std::uint32_t>(alphas_.size()); }

    // 1-based column where alpha(i) starts.
    std::uint32_t alpha_column(std::uint32_t i) const { return alpha_columns_.at(i - 1); }

    bool contains(char c) const noexcept { return alphabet_.find(c) != std::string::npos; }

    bool operator==(const ssnp_schema& other) const {
        return n_ == other.n_ && alphabet_ == other.alphabet_ && reference_ == other.reference_ && placeholder_ == other.placeholder_ &&
               sites_.size() == other.sites_.size() &&
               std::equal(sites_.begin(), sites_.end(), other.sites_.begin(), [](const snp_site& a, const snp_site& b) {
                   return a.column == b.column && a.low == b.low && a.high == b.high;
               });
    }

private:
    std::uint32_t n_ = 0;
    std::string alphabet_;
    std::vector<snp_site> sites_;
    std::string reference_;
    char placeholder_ = '?';
    std::vector<std::string> alphas_;
    std::vector<std::uint32_t> alpha_columns_;
    std::vector<std::uint32_t> site_at_;    // column -> site index or 0
    std::vector<std::uint32_t> next_site_;  // column -> first site at or after, or 0
};

// m x k allele selections, bit 0 = low allele, bit 1 = high allele.
class genotype_matrix {
public:
    genotype_matrix() = default;
    genotype_matrix(std::uint64_t m, std::uint32_t k);

    static genotype_matrix from_rows(const std::vector<std::vector<bool>>& rows, std::uint32_t k);

    std::uint64_t m() const noexcept { return m_; }
    std::uint32_t k() const noexcept { return k_; }

    bool bit(std::uint64_t row, std::uint32_t site) const;
    void set_bit(std::uint64_t row, std::uint32_t site, bool value);

    bool operator==(const genotype_matrix& other) const { return m_ == other.m_ && k_ == other.k_ && bits_ == other.bits_; }

private:
    std::uint64_t index(std::uint64_t row, std::uint32_t site) const;

    std::uint64_t m_ = 0;
    std::uint32_t k_ = 0;
    std::vector<std::uint64_t> bits_;  // row-major
};

// Schema + matrix viewed as the concatenated text w_1 # w_2 # ... w_m #.
class virtual_text {
public:
    virtual_text() = default;
    virtual_text(ssnp_schema schema, genotype_matrix matrix);

    const ssnp_schema& schema() const noexcept { return schema_; }
    const genotype_matrix& matrix() const noexcept { return matrix_; }

    std::uint64_t m() const noexcept { return matrix_.m(); }
    std::uint32_t n() const noexcept { return schema_.n(); }
    std::uint32_t k() const noexcept { return schema_.k(); }
    std::uint64_t size() const noexcept { return matrix_.m() * (schema_.n() + 1); }

    // Linear position of (row, col); col n+1 is the sentinel column.
    std::uint64_t pos_of(std::uint64_t row, std::uint32_t col) const;
    std::pair<std::uint64_t, std::uint32_t> row_col_of(std::uint64_t pos) const;

    char char_at(std::uint64_t pos) const;

    std::string word(std::uint64_t row) const;
    std::string expand() const;

private:
    ssnp_schema schema_;
    genotype_matrix matrix_;
};

struct validation_violation {
    std::uint64_t word = 0;         // 1-based stored-word index (or enumeration index)
    std::uint32_t alpha_index = 0;  // 1-based
    std::vector<std::uint32_t> positions;  // all occurrence positions within the word
};

struct validation_report {
    bool ok = true;
    std::vector<validation_violation> violations;
    std::string to_string() const;
};

// Checks that every fixed inter-site substring occurs exactly once in every
// stored word. This is the precondition the index construction relies on.
validation_report validate(const virtual_text& vt);

// Same check quantified over all 2^k allele assignments of the schema.
// Violation word indices are the assignment values (bit j-1 of the value =
// allele of site j).
validation_report language_check_exhaustive(const ssnp_schema& schema, std::uint32_t max_k = 16);

struct gen_params {
    std::uint32_t n = 0;
    std::uint32_t k = 0;
    std::uint64_t m = 0;
    std::string alphabet;
    std::uint32_t min_gap = 2;
    std::uint64_t seed = 0;
    std::uint32_t max_retries = 64;
};

// Random instance that passes validate; deterministic in params.seed.
std::pair<ssnp_schema, genotype_matrix> generate(const gen_params& params);

// Line-oriented schema file.
ssnp_schema parse_schema(std::string_view text, char placeholder = '?');
std::string serialize_schema(const ssnp_schema& schema);

// Matrix file: m lines of k bits. For k = 0 the row count cannot be seen in
// the file, so it must be forced explicitly.
genotype_matrix parse_matrix(std::string_view text, const ssnp_schema& schema,
                             std::optional<std::uint64_t> forced_rows = std::nullopt);
std::string serialize_matrix(const genotype_matrix& matrix);

// One sequence per line, or FASTA when the first non-blank line starts '>'.
std::vector<std::string> read_alignment(std::string_view text);

// Schema discovery from equal-length sequences: polymorphic columns become
// SNP sites; the result's realization reproduces the input words exactly.
std::pair<ssnp_schema, genotype_matrix> infer_from_alignment(std::span<const std::string> words, char placeholder = '?');

}  // namespace ssnpsa
