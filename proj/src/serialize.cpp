#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "ssnpsa/crc32c.hpp"
#include "ssnpsa/index.hpp"

namespace ssnpsa {

// Index file layout (all integers little-endian):
//   magic "SSNPSA01", u32 version
//   u64 n, k, m, g
//   u64 schema text length, schema text (the schema file format)
//   matrix bits, row-major, padded to a whole byte
//   starts bitvector: u64 bit length, 64-bit limbs
//   block meta: u64 count, then u32 column, u32 site, u8 side, u32 side offset each
//   chain: k bitvectors, each u64 bit length plus limbs
//   anchors: u64 count, then u32 site id and m u64 positions each
//   groups: u64 count, then u32 first site, u32 width, m*width label bits padded to a byte
//   u32 CRC-32C of everything above
// Rank/select directories are rebuilt on load, never stored.

namespace {

constexpr char magic[8] = {'S', 'S', 'N', 'P', 'S', 'A', '0', '1'};
constexpr std::uint32_t format_version = 1;

class writer {
public:
    void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
    void bytes(const void* data, std::size_t size) {
        buf_.append(static_cast<const char*>(data), size);
    }
    void bit_payload(const bit_vector& bv) {
        u64(bv.size());
        for (std::uint64_t limb : bv.limbs()) u64(limb);
    }
    const std::string& data() const { return buf_; }

private:
    std::string buf_;
};

class reader {
public:
    reader(const char* data, std::size_t size) : data_(data), size_(size) {}

    std::uint8_t u8() { return static_cast<std::uint8_t>(take(1)[0]); }
    std::uint32_t u32() {
        const char* p = take(4);
        std::uint32_t v = 0;
        for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(p[i]);
        return v;
    }
    std::uint64_t u64() {
        const char* p = take(8);
        std::uint64_t v = 0;
        for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(p[i]);
        return v;
    }
    std::string str(std::uint64_t size) { return std::string(take(size), size); }
    bit_vector bits() {
        std::uint64_t n_bits = u64();
        std::uint64_t n_limbs = (n_bits + 63) / 64;
        std::vector<std::uint64_t> limbs(n_limbs);
        for (std::uint64_t& limb : limbs) limb = u64();
        return bit_vector::from_limbs(std::move(limbs), n_bits);
    }
    std::size_t remaining() const { return size_ - at_; }

private:
    const char* take(std::uint64_t size) {
        if (size > size_ - at_) raise(errc::truncated, "index file ends inside a field");
        const char* p = data_ + at_;
        at_ += size;
        return p;
    }

    const char* data_;
    std::size_t size_;
    std::size_t at_ = 0;
};

}  // namespace

void compressed_sa::save(std::ostream& out) const {
    const std::uint64_t m = vt_.m();
    writer w;
    w.bytes(magic, 8);
    w.u32(format_version);
    w.u64(vt_.n());
    w.u64(vt_.k());
    w.u64(m);
    w.u64(g_);

    std::string schema_text = serialize_schema(vt_.schema());
    w.u64(schema_text.size());
    w.bytes(schema_text.data(), schema_text.size());

    {
        std::uint64_t bits = m * vt_.k();
        std::string packed((bits + 7) / 8, '\0');
        std::uint64_t bit = 0;
        for (std::uint64_t r = 1; r <= m; ++r)
            for (std::uint32_t j = 1; j <= vt_.k(); ++j, ++bit)
                if (vt_.matrix().bit(r, j)) packed[bit / 8] |= static_cast<char>(1 << (bit % 8));
        w.bytes(packed.data(), packed.size());
    }

    w.bit_payload(starts_);

    w.u64(meta_.size());
    for (const block_meta& b : meta_) {
        w.u32(b.column);
        w.u32(b.site);
        w.u8(static_cast<std::uint8_t>(b.side));
        w.u32(b.side_offset);
    }

    for (const bit_vector& b : chain_) w.bit_payload(b);

    w.u64(anchors_.size());
    for (const anchor& a : anchors_) {
        w.u32(a.site);
        for (std::uint64_t p : a.positions) w.u64(p);
    }

    w.u64(groups_.size());
    for (const packed_group& group : groups_) {
        w.u32(group.first_site);
        w.u32(group.width);
        std::uint64_t bits = m * group.width;
        std::string packed((bits + 7) / 8, '\0');
        const std::vector<std::uint64_t>& limbs = group.labels.label_limbs();
        for (std::uint64_t bit = 0; bit < bits; ++bit)
            if ((limbs[bit / 64] >> (bit % 64)) & 1) packed[bit / 8] |= static_cast<char>(1 << (bit % 8));
        w.bytes(packed.data(), packed.size());
    }

    std::uint32_t crc = crc32c(w.data().data(), w.data().size());
    out.write(w.data().data(), static_cast<std::streamsize>(w.data().size()));
    char trailer[4];
    for (int i = 0; i < 4; ++i) trailer[i] = static_cast<char>((crc >> (8 * i)) & 0xFF);
    out.write(trailer, 4);
    if (!out) raise(errc::io_failure, "write failed while saving index");
}

compressed_sa compressed_sa::load(std::istream& in) {
    std::string blob((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) raise(errc::io_failure, "read failed while loading index");
    if (blob.size() < 12) raise(errc::truncated, "index file shorter than header and trailer");

    // Whole-file integrity first: any byte flip, including inside the magic
    // or the trailer itself, surfaces as a checksum mismatch.
    std::uint32_t stored = 0;
    for (int i = 3; i >= 0; --i) stored = (stored << 8) | static_cast<unsigned char>(blob[blob.size() - 4 + i]);
    std::uint32_t computed = crc32c(blob.data(), blob.size() - 4);
    if (stored != computed) raise(errc::checksum_mismatch, "index file is corrupted");

    reader r(blob.data(), blob.size() - 4);
    if (std::memcmp(r.str(8).data(), magic, 8) != 0) raise(errc::bad_magic, "not an index file");
    std::uint32_t version = r.u32();
    if (version != format_version)
        raise(errc::version_mismatch, "index format version " + std::to_string(version) + ", expected " +
                                          std::to_string(format_version));

    std::uint64_t n = r.u64();
    std::uint64_t k = r.u64();
    std::uint64_t m = r.u64();
    std::uint64_t g = r.u64();

    std::uint64_t schema_len = r.u64();
    ssnp_schema schema = parse_schema(r.str(schema_len));
    if (schema.n() != n || schema.k() != k) raise(errc::malformed_input, "schema section disagrees with header");

    genotype_matrix matrix(m, static_cast<std::uint32_t>(k));
    {
        std::string packed = r.str((m * k + 7) / 8);
        std::uint64_t bit = 0;
        for (std::uint64_t row = 1; row <= m; ++row)
            for (std::uint32_t j = 1; j <= k; ++j, ++bit)
                matrix.set_bit(row, j, (packed[bit / 8] >> (bit % 8)) & 1);
    }

    compressed_sa csa;
    csa.vt_ = virtual_text(std::move(schema), std::move(matrix));
    csa.g_ = g;

    csa.starts_ = r.bits();
    if (csa.starts_.size() != csa.vt_.size()) raise(errc::malformed_input, "block bitvector length disagrees with header");

    std::uint64_t block_count = r.u64();
    if (block_count != csa.starts_.ones()) raise(errc::malformed_input, "block count disagrees with bitvector");
    csa.meta_.resize(block_count);
    for (block_meta& b : csa.meta_) {
        b.column = r.u32();
        b.site = r.u32();
        std::uint8_t side = r.u8();
        if (side > 2) raise(errc::malformed_input, "invalid block side");
        b.side = static_cast<block_side>(side);
        b.side_offset = r.u32();
    }

    csa.chain_.resize(k);
    csa.zeros_.resize(k);
    for (std::uint64_t j = 0; j < k; ++j) {
        csa.chain_[j] = r.bits();
        if (csa.chain_[j].size() != m) raise(errc::malformed_input, "chain bitvector length disagrees with m");
        csa.zeros_[j] = csa.chain_[j].zeros();
    }

    std::uint64_t anchor_count = r.u64();
    csa.anchors_.resize(anchor_count);
    for (anchor& a : csa.anchors_) {
        a.site = r.u32();
        if (a.site > k) raise(errc::malformed_input, "anchor site out of range");
        a.positions.resize(m);
        for (std::uint64_t& p : a.positions) p = r.u64();
    }
    if (anchor_count == 0 || csa.anchors_[0].site != terminal_site)
        raise(errc::malformed_input, "missing terminal anchor");

    std::uint64_t group_count = r.u64();
    csa.groups_.resize(group_count);
    for (packed_group& group : csa.groups_) {
        group.first_site = r.u32();
        group.width = r.u32();
        if (group.first_site < 1 || group.first_site > k || group.width < 1 ||
            group.width > packed_label_string::max_width)
            raise(errc::malformed_input, "invalid packed group header");
        std::uint64_t bits = m * group.width;
        std::string packed = r.str((bits + 7) / 8);
        std::vector<std::uint64_t> labels(m, 0);
        for (std::uint64_t bit = 0; bit < bits; ++bit)
            if ((packed[bit / 8] >> (bit % 8)) & 1) labels[bit / group.width] |= 1ULL << (bit % group.width);
        group.labels = packed_label_string(labels, group.width);
    }

    if (r.remaining() != 0) raise(errc::malformed_input, "trailing bytes after index payload");
    csa.rebuild_lookups();
    return csa;
}

}  // namespace ssnpsa
