#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "ssnpsa/bitvector.hpp"
#include "ssnpsa/model.hpp"
#include "ssnpsa/packed_label_string.hpp"

namespace ssnpsa {

// Compressed suffix array for an SSNP database.
//
// Every text position is classified by (column, allele side at the next SNP
// site); each class occupies one contiguous interval of suffix-array ranks
// (a block) and its members appear in the same relative order as the same
// rows do at the next site column. Suffix-array values are therefore stored
// explicitly only at anchor columns (every g-th SNP site plus the sentinel
// column); all other blocks resolve to an anchor through a chain of
// two-run permutations, one bitvector of length m per site, and subtract a
// column delta. Runs of non-anchor sites are additionally packed into one
// label string per run, giving a constant-time hop from a run's first site
// to its anchor.

constexpr std::uint32_t terminal_site = 0;  // pseudo site id of the sentinel column

enum class block_side : std::uint8_t { low = 0, high = 1, all = 2 };

struct block_meta {
    std::uint32_t column = 0;              // 1-based column of the block's positions
    std::uint32_t site = terminal_site;    // first SNP site at or after column, 0 = none
    block_side side = block_side::all;
    std::uint32_t side_offset = 0;         // start of this side within the site's row order
};

struct anchor {
    std::uint32_t site = terminal_site;    // 0 = sentinel column
    std::vector<std::uint64_t> positions;  // suffix starts at the anchor column, in rank order
};

struct packed_group {
    std::uint32_t first_site = 0;
    std::uint32_t width = 0;               // run length p; labels are p-bit integers
    packed_label_string labels;            // indexed by the downstream anchor order
};

struct access_trace {
    std::uint64_t sigma_steps = 0;
};

struct space_report {
    std::uint64_t n = 0, k = 0, m = 0, g = 0, text_length = 0;

    std::uint64_t directory_payload_bits = 0;   // starts bitvector payload (= N)
    std::uint64_t directory_overhead_bits = 0;  // its rank/select directories
    std::uint64_t meta_entries = 0;
    std::uint64_t meta_bits_per_entry = 0;      // column + site + side + side offset widths
    std::uint64_t anchor_ints = 0;              // m * number of anchors
    std::uint64_t anchor_int_bits = 0;          // ceil(log2 N) per integer
    std::uint64_t anchor_stored_bits = 0;       // 64 per integer as serialized
    std::uint64_t chain_payload_bits = 0;       // k * m
    std::uint64_t chain_overhead_bits = 0;
    std::uint64_t group_payload_bits = 0;       // sum of m * p over groups
    std::uint64_t group_overhead_bits = 0;
    std::uint64_t schema_bits = 0;
    std::uint64_t matrix_bits = 0;

    std::uint64_t directory_bits() const { return directory_payload_bits + directory_overhead_bits; }
    std::uint64_t meta_bits() const { return meta_entries * meta_bits_per_entry; }
    std::uint64_t anchor_payload_bits() const { return anchor_ints * anchor_int_bits; }
    std::uint64_t chain_bits() const { return chain_payload_bits + chain_overhead_bits; }
    std::uint64_t group_bits() const { return group_payload_bits + group_overhead_bits; }
    std::uint64_t total_bits() const {
        return directory_bits() + meta_bits() + anchor_payload_bits() + chain_bits() + group_bits() + schema_bits +
               matrix_bits;
    }
    std::uint64_t plain_sa_bits() const;  // N * ceil(log2 N) baseline
};

struct build_config {
    // Sites per anchor interval; unset selects round(sqrt(log2 n)).
    std::optional<std::uint64_t> stride;
};

class compressed_sa {
public:
    compressed_sa() = default;

    // Requires validate(vt).ok and m >= 1. Construction materializes the
    // expanded text and a standard suffix array, then distills the block
    // directory, permutation chain, anchors and packed groups; the two-run
    // and block-contiguity properties are re-checked along the way and a
    // violation (possible only if validation was skipped) raises
    // errc::ssnp_violation.
    static compressed_sa build(const virtual_text& vt, const build_config& config = {});

    const virtual_text& text() const noexcept { return vt_; }
    std::uint64_t size() const noexcept { return vt_.size(); }  // N
    std::uint64_t stride() const noexcept { return g_; }

    // Suffix-array value at the given rank, 1 <= rank <= N.
    std::uint64_t sa_access(std::uint64_t rank) const;
    std::uint64_t sa_access(std::uint64_t rank, access_trace& trace) const;

    // One permutation hop: rank within site j's row order -> rank within the
    // next order downstream (site j+1, or the sentinel order for j = k).
    std::uint64_t sigma_step(std::uint32_t site, std::uint64_t site_rank) const;

    // Hops from site j to the first anchor at or after it. Returns the
    // anchor's site id (terminal_site for the sentinel column) and the rank
    // within that anchor's order. Walks at most g - 1 sigma steps; a query
    // starting at a packed group's first site short-circuits through the
    // group's label string instead.
    std::pair<std::uint32_t, std::uint64_t> chain_eval(std::uint32_t site, std::uint64_t site_rank) const;
    std::pair<std::uint32_t, std::uint64_t> chain_eval(std::uint32_t site, std::uint64_t site_rank, access_trace& trace) const;

    // Group composition evaluated in one label-string lookup. Equals the
    // fold of sigma_step over the group's sites.
    std::uint64_t packed_forward(std::uint32_t group_id, std::uint64_t rank_at_first_site) const;
    std::uint64_t packed_forward_from_site(std::uint32_t site, std::uint64_t rank_at_first_site) const;
    std::uint64_t packed_inverse(std::uint32_t group_id, std::uint64_t anchor_rank) const;

    // Pattern search by suffix-array binary search; positions are sorted.
    std::uint64_t count(std::string_view pattern) const;
    std::vector<std::uint64_t> locate(std::string_view pattern) const;

    space_report space() const;

    void save(std::ostream& out) const;
    static compressed_sa load(std::istream& in);

    // Structure accessors (stats, tests, serialization).
    const bit_vector& block_starts() const noexcept { return starts_; }
    const std::vector<block_meta>& blocks() const noexcept { return meta_; }
    const bit_vector& chain_bits(std::uint32_t site) const { return chain_.at(site - 1); }
    std::uint64_t chain_zeros(std::uint32_t site) const { return zeros_.at(site - 1); }
    const std::vector<anchor>& anchors() const noexcept { return anchors_; }
    const std::vector<packed_group>& groups() const noexcept { return groups_; }
    bool is_anchor_site(std::uint32_t site) const;
    std::uint32_t anchor_column(std::uint32_t anchor_site) const;

private:
    std::uint64_t resolve(const block_meta& meta, std::uint64_t offset, access_trace* trace) const;
    std::pair<std::uint32_t, std::uint64_t> chain_eval_impl(std::uint32_t site, std::uint64_t site_rank, access_trace* trace) const;
    const anchor& anchor_for(std::uint32_t anchor_site) const;
    int compare_suffix(std::uint64_t pos, std::string_view pattern) const;
    void rebuild_lookups();

    virtual_text vt_;
    std::uint64_t g_ = 1;

    bit_vector starts_;                  // length N, 1 at the first rank of each block
    std::vector<block_meta> meta_;       // per block, in rank order
    std::vector<bit_vector> chain_;      // chain_[j-1] = B_j, length m, downstream order
    std::vector<std::uint64_t> zeros_;   // zeros_[j-1] = number of 0 bits in B_j
    std::vector<anchor> anchors_;        // site anchors ascending, then the terminal anchor
    std::vector<packed_group> groups_;

    std::vector<std::uint32_t> anchor_index_;  // site id -> index into anchors_ (terminal at [0])
    std::vector<std::int32_t> group_at_site_;  // site -> group id if it starts one, else -1
};

}  // namespace ssnpsa
