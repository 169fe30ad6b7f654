#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "ssnpsa/errors.hpp"

namespace ssnpsa {

// Sequence of fixed-width integer labels in [0, 2^p) supporting access,
// partial rank and select, 1-based like the rest of the library.
//
// Labels are bit-packed; queries go through a flat occurrence array sorted
// by (label, position), segmented per distinct label. partial_rank(i) is the
// rank of position i among equal labels up to and including i. forward(q)
// maps a rank in the label-sorted order back to a position; it is the closed
// form of "find the label class containing q, then select within it".
class packed_label_string {
public:
    static constexpr std::uint32_t max_width = 63;

    packed_label_string() = default;

    packed_label_string(std::span<const std::uint64_t> labels, std::uint32_t width) : width_(width), size_(labels.size()) {
        if (width < 1 || width > max_width) raise(errc::invalid_argument, "label width must be in [1, 63]");
        std::uint64_t limit = 1ULL << width;
        bits_.assign((size_ * width + 63) / 64, 0);
        for (std::uint64_t i = 0; i < size_; ++i) {
            if (labels[i] >= limit) raise(errc::label_out_of_range, "label does not fit in width");
            store(i, labels[i]);
        }

        occ_.resize(size_);
        for (std::uint64_t i = 0; i < size_; ++i) occ_[i] = i + 1;
        std::stable_sort(occ_.begin(), occ_.end(), [&](std::uint64_t a, std::uint64_t b) { return load(a - 1) < load(b - 1); });

        distinct_.clear();
        bounds_.clear();
        bounds_.push_back(0);
        for (std::uint64_t i = 0; i < size_; ++i) {
            std::uint64_t l = load(occ_[i] - 1);
            if (distinct_.empty() || distinct_.back() != l) {
                distinct_.push_back(l);
                bounds_.push_back(i);
            }
            bounds_.back() = i + 1;
        }
    }

    std::uint64_t size() const noexcept { return size_; }
    std::uint32_t width() const noexcept { return width_; }

    std::uint64_t access(std::uint64_t i) const {
        check_index(i);
        return load(i - 1);
    }

    // Position of the j-th occurrence of `label`.
    std::uint64_t select(std::uint64_t label, std::uint64_t j) const {
        if (width_ == 0 || label >= (1ULL << width_)) raise(errc::label_out_of_range, "label does not fit in width");
        std::uint64_t d = distinct_index(label);
        if (d == distinct_.size() || distinct_[d] != label || j < 1 || j > bounds_[d + 1] - bounds_[d])
            raise(errc::ordinal_out_of_range, "select ordinal exceeds label count");
        return occ_[bounds_[d] + j - 1];
    }

    // Occurrences of labels[i] at positions <= i, inclusive.
    std::uint64_t partial_rank(std::uint64_t i) const {
        check_index(i);
        std::uint64_t d = distinct_index(load(i - 1));
        auto first = occ_.begin() + static_cast<std::ptrdiff_t>(bounds_[d]);
        auto last = occ_.begin() + static_cast<std::ptrdiff_t>(bounds_[d + 1]);
        auto it = std::lower_bound(first, last, i);
        return static_cast<std::uint64_t>(it - first) + 1;
    }

    // C[label] = number of entries with value < label, for label in [0, 2^p].
    std::uint64_t cumulative_below(std::uint64_t label) const {
        std::uint64_t d = distinct_index(label);
        return bounds_[d];
    }

    // Materialized C[0..2^p]; intended for small widths.
    std::vector<std::uint64_t> cumulative_counts() const {
        if (width_ > 20) raise(errc::invalid_argument, "cumulative table too large to materialize");
        std::vector<std::uint64_t> c((1ULL << width_) + 1, 0);
        for (std::uint64_t l = 0; l <= (1ULL << width_); ++l) c[l] = cumulative_below(l);
        return c;
    }

    // q-th entry of the label-sorted order: the position i with
    // C[labels[i]] + partial_rank(i) = q.
    std::uint64_t forward(std::uint64_t q) const {
        if (q < 1 || q > size_) raise(errc::index_out_of_range, "rank out of range");
        return occ_[q - 1];
    }

    // Inverse of forward.
    std::uint64_t inverse(std::uint64_t i) const {
        check_index(i);
        return cumulative_below(load(i - 1)) + partial_rank(i);
    }

    const std::vector<std::uint64_t>& label_limbs() const noexcept { return bits_; }

    std::uint64_t payload_bits() const noexcept { return size_ * width_; }

    std::uint64_t overhead_bits() const noexcept {
        return 64 * occ_.size() + 64 * distinct_.size() + 64 * bounds_.size();
    }

private:
    void check_index(std::uint64_t i) const {
        if (i < 1 || i > size_) raise(errc::index_out_of_range, "label index out of range");
    }

    std::uint64_t distinct_index(std::uint64_t label) const {
        return static_cast<std::uint64_t>(std::lower_bound(distinct_.begin(), distinct_.end(), label) - distinct_.begin());
    }

    void store(std::uint64_t i, std::uint64_t value) {
        std::uint64_t bit = i * width_;
        std::uint64_t limb = bit / 64, off = bit % 64;
        bits_[limb] |= value << off;
        if (off + width_ > 64) bits_[limb + 1] |= value >> (64 - off);
    }

    std::uint64_t load(std::uint64_t i) const {
        std::uint64_t bit = i * width_;
        std::uint64_t limb = bit / 64, off = bit % 64;
        std::uint64_t v = bits_[limb] >> off;
        if (off + width_ > 64) v |= bits_[limb + 1] << (64 - off);
        return v & ((1ULL << width_) - 1);
    }

    std::uint32_t width_ = 0;
    std::uint64_t size_ = 0;
    std::vector<std::uint64_t> bits_;      // packed labels, LSB-first
    std::vector<std::uint64_t> occ_;       // positions sorted by (label, position)
    std::vector<std::uint64_t> distinct_;  // sorted distinct labels
    std::vector<std::uint64_t> bounds_;    // occ_ segment boundaries per distinct label
};

}  // namespace ssnpsa
