#include "ssnpsa/index.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "ssnpsa/suffix_sort.hpp"

namespace ssnpsa {

namespace {

std::uint64_t ceil_log2(std::uint64_t v) {
    if (v <= 2) return 1;
    return std::bit_width(v - 1);
}

std::uint64_t width_for_max(std::uint64_t max_value) {
    return std::max<std::uint64_t>(1, std::bit_width(max_value));
}

std::uint64_t auto_stride(std::uint32_t n) {
    double v = std::sqrt(std::log2(static_cast<double>(n)));
    return std::max<std::int64_t>(1, std::llround(v));
}

}  // namespace

std::uint64_t space_report::plain_sa_bits() const { return text_length * ceil_log2(text_length); }

compressed_sa compressed_sa::build(const virtual_text& vt, const build_config& config) {
    const std::uint64_t m = vt.m();
    const std::uint32_t n = vt.n();
    const std::uint32_t k = vt.k();
    if (m == 0) raise(errc::empty_database, "cannot index an empty database");

    compressed_sa csa;
    csa.vt_ = vt;
    csa.g_ = config.stride.value_or(auto_stride(n));
    if (csa.g_ < 1) raise(errc::invalid_argument, "stride must be at least 1");
    if (std::min<std::uint64_t>(csa.g_ - 1, k) > packed_label_string::max_width)
        raise(errc::invalid_argument, "stride produces permutation groups wider than 63 sites");

    const std::string text = vt.expand();
    const std::uint64_t N = text.size();
    std::vector<std::uint32_t> sa = suffix_sort(text);

    std::vector<std::uint32_t> isa(N + 1, 0);
    for (std::uint64_t i = 0; i < N; ++i) isa[sa[i]] = static_cast<std::uint32_t>(i + 1);

    // Terminal order: the sentinel suffixes occupy ranks 1..m.
    std::vector<std::uint64_t> terminal_rows(m);
    {
        anchor term;
        term.site = terminal_site;
        term.positions.resize(m);
        for (std::uint64_t i = 0; i < m; ++i) {
            std::uint64_t pos = sa[i];
            auto [row, col] = vt.row_col_of(pos);
            if (col != n + 1) raise(errc::ssnp_violation, "sentinel suffixes do not occupy the first m ranks");
            term.positions[i] = pos;
            terminal_rows[i] = row;
        }
        csa.anchors_.push_back(std::move(term));
    }

    // Row order of every SNP-site column, from the suffix array.
    std::vector<std::vector<std::uint64_t>> site_rows(k + 1);
    for (std::uint32_t j = 1; j <= k; ++j) {
        std::vector<std::uint64_t>& rows = site_rows[j];
        rows.resize(m);
        std::iota(rows.begin(), rows.end(), 1);
        std::uint32_t col = vt.schema().site_column(j);
        std::sort(rows.begin(), rows.end(), [&](std::uint64_t a, std::uint64_t b) {
            return isa[vt.pos_of(a, col)] < isa[vt.pos_of(b, col)];
        });
    }

    // Permutation chain: B_j holds site-j allele bits in downstream order.
    // Verify the two-run shape: site-j order must equal the downstream
    // order's bit-0 rows followed by its bit-1 rows.
    csa.chain_.resize(k);
    csa.zeros_.resize(k);
    for (std::uint32_t j = k; j >= 1; --j) {
        const std::vector<std::uint64_t>& downstream = j == k ? terminal_rows : site_rows[j + 1];
        std::vector<bool> bits(m);
        std::vector<std::uint64_t> predicted;
        predicted.reserve(m);
        for (std::uint64_t i = 0; i < m; ++i) {
            bits[i] = vt.matrix().bit(downstream[i], j);
            if (!bits[i]) predicted.push_back(downstream[i]);
        }
        std::uint64_t zeros = predicted.size();
        for (std::uint64_t i = 0; i < m; ++i)
            if (bits[i]) predicted.push_back(downstream[i]);
        if (predicted != site_rows[j])
            raise(errc::ssnp_violation, "site order is not a two-run shuffle of its downstream order at site " +
                                            std::to_string(j));
        csa.chain_[j - 1] = bit_vector(bits);
        csa.zeros_[j - 1] = zeros;
    }

    // Block directory: walk the suffix array, classify each position by
    // (column, allele side at the first site at or after it), and record a
    // block at every key change. Keys must be rank-contiguous.
    {
        std::vector<std::uint64_t> start_positions;
        std::vector<bool> seen((static_cast<std::uint64_t>(n) + 2) * 4, false);
        std::uint64_t prev_key = ~0ULL;
        for (std::uint64_t rank = 1; rank <= N; ++rank) {
            auto [row, col] = vt.row_col_of(sa[rank - 1]);
            std::uint32_t j = vt.schema().first_site_at_or_after(col);
            block_side side = block_side::all;
            if (j != 0) side = vt.matrix().bit(row, j) ? block_side::high : block_side::low;
            std::uint64_t key = static_cast<std::uint64_t>(col) * 4 + static_cast<std::uint64_t>(side);
            if (key == prev_key) continue;
            if (seen[key])
                raise(errc::ssnp_violation, "positions of column " + std::to_string(col) +
                                                " do not occupy a contiguous rank interval");
            seen[key] = true;
            prev_key = key;
            start_positions.push_back(rank);
            block_meta meta;
            meta.column = col;
            meta.site = j;
            meta.side = side;
            meta.side_offset = side == block_side::high ? static_cast<std::uint32_t>(csa.zeros_[j - 1]) : 0;
            csa.meta_.push_back(meta);
        }
        csa.starts_ = bit_vector::from_ones(N, start_positions);
    }

    // Explicit anchors every g-th site.
    for (std::uint32_t j = static_cast<std::uint32_t>(csa.g_); j <= k; j += static_cast<std::uint32_t>(csa.g_)) {
        anchor a;
        a.site = j;
        a.positions.resize(m);
        std::uint32_t col = vt.schema().site_column(j);
        for (std::uint64_t i = 0; i < m; ++i) a.positions[i] = vt.pos_of(site_rows[j][i], col);
        csa.anchors_.push_back(std::move(a));
    }
    std::sort(csa.anchors_.begin() + 1, csa.anchors_.end(), [](const anchor& a, const anchor& b) { return a.site < b.site; });

    // Packed groups: one label string per maximal run of non-anchor sites,
    // indexed by the run's downstream anchor order, site bits MSB-first.
    for (std::uint32_t j = 1; j <= k; ++j) {
        if (j % csa.g_ == 0) continue;
        std::uint32_t first = j;
        while (j + 1 <= k && (j + 1) % csa.g_ != 0) ++j;
        std::uint32_t p = j - first + 1;
        const std::vector<std::uint64_t>& downstream = j == k ? terminal_rows : site_rows[j + 1];
        std::vector<std::uint64_t> labels(m);
        for (std::uint64_t i = 0; i < m; ++i) {
            std::uint64_t value = 0;
            for (std::uint32_t t = 0; t < p; ++t)
                value = (value << 1) | static_cast<std::uint64_t>(vt.matrix().bit(downstream[i], first + t));
            labels[i] = value;
        }
        packed_group group;
        group.first_site = first;
        group.width = p;
        group.labels = packed_label_string(labels, p);
        csa.groups_.push_back(std::move(group));
    }

    csa.rebuild_lookups();
    return csa;
}

void compressed_sa::rebuild_lookups() {
    const std::uint32_t k = vt_.k();
    anchor_index_.assign(k + 1, 0);
    for (std::uint32_t i = 0; i < anchors_.size(); ++i) anchor_index_[anchors_[i].site] = i;
    group_at_site_.assign(k + 1, -1);
    for (std::uint32_t gid = 0; gid < groups_.size(); ++gid) group_at_site_[groups_[gid].first_site] = static_cast<std::int32_t>(gid);
}

bool compressed_sa::is_anchor_site(std::uint32_t site) const {
    return site >= 1 && site <= vt_.k() && site % g_ == 0;
}

std::uint32_t compressed_sa::anchor_column(std::uint32_t anchor_site) const {
    if (anchor_site == terminal_site) return vt_.n() + 1;
    return vt_.schema().site_column(anchor_site);
}

const anchor& compressed_sa::anchor_for(std::uint32_t anchor_site) const {
    return anchors_[anchor_index_.at(anchor_site)];
}

std::uint64_t compressed_sa::sigma_step(std::uint32_t site, std::uint64_t site_rank) const {
    if (site < 1 || site > vt_.k()) raise(errc::index_out_of_range, "site out of range");
    if (site_rank < 1 || site_rank > vt_.m()) raise(errc::index_out_of_range, "site rank out of range");
    const bit_vector& b = chain_[site - 1];
    std::uint64_t n0 = zeros_[site - 1];
    return site_rank <= n0 ? b.select(site_rank, false) : b.select(site_rank - n0, true);
}

std::pair<std::uint32_t, std::uint64_t> compressed_sa::chain_eval_impl(std::uint32_t site, std::uint64_t site_rank,
                                                                       access_trace* trace) const {
    const std::uint32_t k = vt_.k();
    if (site < 1 || site > k) raise(errc::index_out_of_range, "site out of range");
    if (site_rank < 1 || site_rank > vt_.m()) raise(errc::index_out_of_range, "site rank out of range");

    std::uint32_t j = site;
    std::uint64_t q = site_rank;
    if (!is_anchor_site(j)) {
        std::int32_t gid = group_at_site_[j];
        if (gid >= 0) {
            // Group-boundary fast path: one lookup instead of p hops.
            const packed_group& group = groups_[static_cast<std::uint32_t>(gid)];
            q = group.labels.forward(q);
            j = group.first_site + group.width;
        } else {
            while (j <= k && !is_anchor_site(j)) {
                q = sigma_step(j, q);
                if (trace) ++trace->sigma_steps;
                ++j;
            }
        }
    }
    if (j > k) return {terminal_site, q};
    return {j, q};
}

std::pair<std::uint32_t, std::uint64_t> compressed_sa::chain_eval(std::uint32_t site, std::uint64_t site_rank) const {
    return chain_eval_impl(site, site_rank, nullptr);
}

std::pair<std::uint32_t, std::uint64_t> compressed_sa::chain_eval(std::uint32_t site, std::uint64_t site_rank,
                                                                  access_trace& trace) const {
    return chain_eval_impl(site, site_rank, &trace);
}

std::uint64_t compressed_sa::packed_forward(std::uint32_t group_id, std::uint64_t rank_at_first_site) const {
    if (group_id >= groups_.size()) raise(errc::index_out_of_range, "group id out of range");
    return groups_[group_id].labels.forward(rank_at_first_site);
}

std::uint64_t compressed_sa::packed_forward_from_site(std::uint32_t site, std::uint64_t rank_at_first_site) const {
    if (site < 1 || site > vt_.k()) raise(errc::index_out_of_range, "site out of range");
    std::int32_t gid = group_at_site_[site];
    if (gid < 0) raise(errc::not_group_start, "site " + std::to_string(site) + " does not start a packed group");
    return packed_forward(static_cast<std::uint32_t>(gid), rank_at_first_site);
}

std::uint64_t compressed_sa::packed_inverse(std::uint32_t group_id, std::uint64_t anchor_rank) const {
    if (group_id >= groups_.size()) raise(errc::index_out_of_range, "group id out of range");
    return groups_[group_id].labels.inverse(anchor_rank);
}

std::uint64_t compressed_sa::resolve(const block_meta& meta, std::uint64_t offset, access_trace* trace) const {
    if (meta.site == terminal_site) {
        std::uint64_t anchor_rank = meta.side_offset + offset + 1;
        return anchor_for(terminal_site).positions[anchor_rank - 1] - (vt_.n() + 1 - meta.column);
    }
    std::uint64_t site_rank = meta.side_offset + offset + 1;
    auto [anchor_site, anchor_rank] = chain_eval_impl(meta.site, site_rank, trace);
    return anchor_for(anchor_site).positions[anchor_rank - 1] - (anchor_column(anchor_site) - meta.column);
}

std::uint64_t compressed_sa::sa_access(std::uint64_t rank, access_trace& trace) const {
    if (rank < 1 || rank > size()) raise(errc::index_out_of_range, "suffix-array rank out of range");
    std::uint64_t block_id = starts_.rank(rank, true);
    std::uint64_t start = starts_.select(block_id, true);
    return resolve(meta_[block_id - 1], rank - start, &trace);
}

std::uint64_t compressed_sa::sa_access(std::uint64_t rank) const {
    if (rank < 1 || rank > size()) raise(errc::index_out_of_range, "suffix-array rank out of range");
    std::uint64_t block_id = starts_.rank(rank, true);
    std::uint64_t start = starts_.select(block_id, true);
    return resolve(meta_[block_id - 1], rank - start, nullptr);
}

int compressed_sa::compare_suffix(std::uint64_t pos, std::string_view pattern) const {
    const std::uint64_t N = size();
    for (std::size_t t = 0; t < pattern.size(); ++t) {
        if (pos + t > N) return -1;  // suffix is a proper prefix of the pattern
        char c = vt_.char_at(pos + t);
        if (c != pattern[t]) return c < pattern[t] ? -1 : 1;
    }
    return 0;
}

std::uint64_t compressed_sa::count(std::string_view pattern) const {
    if (pattern.empty()) raise(errc::empty_pattern, "pattern is empty");
    for (char c : pattern)
        if (c == sentinel_char) raise(errc::invalid_pattern_character, "pattern contains the sentinel");

    const std::uint64_t N = size();
    std::uint64_t lo = 1, hi = N + 1;
    while (lo < hi) {
        std::uint64_t mid = lo + (hi - lo) / 2;
        if (compare_suffix(sa_access(mid), pattern) < 0) lo = mid + 1; else hi = mid;
    }
    std::uint64_t first = lo;
    hi = N + 1;
    while (lo < hi) {
        std::uint64_t mid = lo + (hi - lo) / 2;
        if (compare_suffix(sa_access(mid), pattern) <= 0) lo = mid + 1; else hi = mid;
    }
    return lo - first;
}

std::vector<std::uint64_t> compressed_sa::locate(std::string_view pattern) const {
    if (pattern.empty()) raise(errc::empty_pattern, "pattern is empty");
    for (char c : pattern)
        if (c == sentinel_char) raise(errc::invalid_pattern_character, "pattern contains the sentinel");

    const std::uint64_t N = size();
    std::uint64_t lo = 1, hi = N + 1;
    while (lo < hi) {
        std::uint64_t mid = lo + (hi - lo) / 2;
        if (compare_suffix(sa_access(mid), pattern) < 0) lo = mid + 1; else hi = mid;
    }
    std::uint64_t first = lo;
    hi = N + 1;
    while (lo < hi) {
        std::uint64_t mid = lo + (hi - lo) / 2;
        if (compare_suffix(sa_access(mid), pattern) <= 0) lo = mid + 1; else hi = mid;
    }
    std::vector<std::uint64_t> positions;
    positions.reserve(lo - first);
    for (std::uint64_t r = first; r < lo; ++r) positions.push_back(sa_access(r));
    std::sort(positions.begin(), positions.end());
    return positions;
}

space_report compressed_sa::space() const {
    space_report r;
    r.n = vt_.n();
    r.k = vt_.k();
    r.m = vt_.m();
    r.g = g_;
    r.text_length = size();

    r.directory_payload_bits = starts_.payload_bits();
    r.directory_overhead_bits = starts_.overhead_bits();
    r.meta_entries = meta_.size();
    r.meta_bits_per_entry = width_for_max(vt_.n() + 1) + width_for_max(vt_.k()) + 2 + width_for_max(vt_.m());
    r.anchor_ints = vt_.m() * anchors_.size();
    r.anchor_int_bits = ceil_log2(size());
    r.anchor_stored_bits = 64 * r.anchor_ints;
    r.chain_payload_bits = static_cast<std::uint64_t>(vt_.k()) * vt_.m();
    for (const bit_vector& b : chain_) r.chain_overhead_bits += b.overhead_bits();
    for (const packed_group& group : groups_) {
        r.group_payload_bits += group.labels.payload_bits();
        r.group_overhead_bits += group.labels.overhead_bits();
    }
    r.schema_bits = serialize_schema(vt_.schema()).size() * 8;
    r.matrix_bits = vt_.m() * vt_.k();
    return r;
}

}  // namespace ssnpsa
