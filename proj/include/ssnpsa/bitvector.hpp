#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "ssnpsa/errors.hpp"

namespace ssnpsa {

// Immutable bit sequence with constant-time access/rank/select.
//
// Positions are 1-based and rank takes an inclusive prefix length, matching
// suffix-array convention: rank(i, b) counts occurrences of b in positions
// 1..i, and select(j, b) returns the position of the j-th occurrence of b.
//
// Layout: 64-bit limbs plus a two-level rank directory (one u64 cumulative
// count per 4096-bit superblock, one u16 relative count per limb). Select is
// a binary search over superblocks followed by a popcount scan, which is
// amortized constant over the query mixes used here. Directories are an
// o(n) overhead on top of the n payload bits; space_bound_bits() gives the
// asserted envelope (1.5*n + 4096 bits).
class bit_vector {
public:
    static constexpr std::uint64_t bits_per_limb = 64;
    static constexpr std::uint64_t limbs_per_super = 64;
    static constexpr std::uint64_t bits_per_super = bits_per_limb * limbs_per_super;

    bit_vector() = default;

    explicit bit_vector(const std::vector<bool>& bits) : n_bits_(bits.size()) {
        limbs_.assign((n_bits_ + bits_per_limb - 1) / bits_per_limb, 0);
        for (std::uint64_t i = 0; i < n_bits_; ++i) {
            if (bits[i]) limbs_[i / bits_per_limb] |= 1ULL << (i % bits_per_limb);
        }
        build_directories();
    }

    // Builds a vector of n zeros with ones at the given 1-based positions.
    static bit_vector from_ones(std::uint64_t n, std::span<const std::uint64_t> one_positions) {
        bit_vector bv;
        bv.n_bits_ = n;
        bv.limbs_.assign((n + bits_per_limb - 1) / bits_per_limb, 0);
        for (std::uint64_t p : one_positions) {
            if (p < 1 || p > n) raise(errc::index_out_of_range, "bit position out of range");
            bv.limbs_[(p - 1) / bits_per_limb] |= 1ULL << ((p - 1) % bits_per_limb);
        }
        bv.build_directories();
        return bv;
    }

    // Adopts a raw limb payload (used when deserializing; directories are
    // rebuilt, never stored).
    static bit_vector from_limbs(std::vector<std::uint64_t> limbs, std::uint64_t n_bits) {
        if (limbs.size() != (n_bits + bits_per_limb - 1) / bits_per_limb)
            raise(errc::malformed_input, "limb count does not match bit length");
        bit_vector bv;
        bv.n_bits_ = n_bits;
        bv.limbs_ = std::move(limbs);
        if (n_bits % bits_per_limb != 0 && !bv.limbs_.empty()) {
            // Tail bits beyond the logical length must be zero.
            std::uint64_t tail = bv.limbs_.back() >> (n_bits % bits_per_limb);
            if (tail != 0) raise(errc::malformed_input, "nonzero padding bits in bit payload");
        }
        bv.build_directories();
        return bv;
    }

    std::uint64_t size() const noexcept { return n_bits_; }

    bool access(std::uint64_t i) const {
        if (i < 1 || i > n_bits_) raise(errc::index_out_of_range, "bitvector access out of range");
        return (limbs_[(i - 1) / bits_per_limb] >> ((i - 1) % bits_per_limb)) & 1;
    }

    // Number of positions in 1..i holding `bit`; rank(0, b) = 0.
    std::uint64_t rank(std::uint64_t i, bool bit) const {
        if (i > n_bits_) raise(errc::index_out_of_range, "rank prefix exceeds length");
        std::uint64_t ones = rank1_prefix(i);
        return bit ? ones : i - ones;
    }

    // Position of the j-th occurrence of `bit`, 1 <= j <= rank(size, bit).
    std::uint64_t select(std::uint64_t j, bool bit) const {
        std::uint64_t total = bit ? ones_ : n_bits_ - ones_;
        if (j < 1 || j > total) raise(errc::ordinal_out_of_range, "select ordinal out of range");

        // Superblock holding the j-th occurrence.
        std::uint64_t lo = 0, hi = super_.size();
        while (lo + 1 < hi) {
            std::uint64_t mid = (lo + hi) / 2;
            std::uint64_t before = bit ? super_[mid] : mid * bits_per_super - super_[mid];
            if (before < j) lo = mid; else hi = mid;
        }
        std::uint64_t seen = bit ? super_[lo] : lo * bits_per_super - super_[lo];
        std::uint64_t limb = lo * limbs_per_super;
        for (;; ++limb) {
            std::uint64_t word = limbs_[limb];
            std::uint64_t cnt = std::popcount(bit ? word : ~word);
            if (seen + cnt >= j) break;
            seen += cnt;
        }
        std::uint64_t word = bit ? limbs_[limb] : ~limbs_[limb];
        std::uint64_t need = j - seen;
        for (std::uint64_t b = 0;; ++b) {
            if ((word >> b) & 1) {
                if (--need == 0) return limb * bits_per_limb + b + 1;
            }
        }
    }

    std::uint64_t ones() const noexcept { return ones_; }
    std::uint64_t zeros() const noexcept { return n_bits_ - ones_; }

    const std::vector<std::uint64_t>& limbs() const noexcept { return limbs_; }

    std::uint64_t payload_bits() const noexcept { return n_bits_; }

    std::uint64_t overhead_bits() const noexcept {
        return 64 * super_.size() + 16 * sub_.size();
    }

    // Envelope asserted by the space accounting: payload + directories stay
    // within 1.5*n + 4096 bits.
    static std::uint64_t space_bound_bits(std::uint64_t n) { return n + n / 2 + 4096; }

    bool operator==(const bit_vector& other) const {
        return n_bits_ == other.n_bits_ && limbs_ == other.limbs_;
    }

private:
    std::uint64_t rank1_prefix(std::uint64_t i) const {
        if (i == 0) return 0;
        std::uint64_t limb = (i - 1) / bits_per_limb;
        std::uint64_t within = i - limb * bits_per_limb;  // 1..64
        std::uint64_t r = super_[limb / limbs_per_super] + sub_[limb];
        std::uint64_t mask = within == 64 ? ~0ULL : (1ULL << within) - 1;
        return r + std::popcount(limbs_[limb] & mask);
    }

    void build_directories() {
        std::uint64_t n_limbs = limbs_.size();
        super_.assign(n_limbs / limbs_per_super + 1, 0);
        sub_.assign(n_limbs, 0);
        std::uint64_t total = 0, in_super = 0;
        for (std::uint64_t l = 0; l < n_limbs; ++l) {
            if (l % limbs_per_super == 0) {
                super_[l / limbs_per_super] = total;
                in_super = 0;
            }
            sub_[l] = static_cast<std::uint16_t>(in_super);
            std::uint64_t cnt = std::popcount(limbs_[l]);
            in_super += cnt;
            total += cnt;
        }
        if (n_limbs % limbs_per_super == 0) super_[n_limbs / limbs_per_super] = total;
        ones_ = total;
    }

    std::uint64_t n_bits_ = 0;
    std::uint64_t ones_ = 0;
    std::vector<std::uint64_t> limbs_;
    std::vector<std::uint64_t> super_;  // cumulative ones per superblock
    std::vector<std::uint16_t> sub_;    // ones before each limb within its superblock
};

}  // namespace ssnpsa
