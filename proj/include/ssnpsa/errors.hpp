#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace ssnpsa {

// Error taxonomy shared by every module. The CLI maps these onto exit
// codes: file-level problems exit 1, domain problems exit 2.
enum class errc {
    index_out_of_range,
    ordinal_out_of_range,
    label_out_of_range,
    too_many_sites,
    generation_failed,
    malformed_input,
    length_mismatch,
    too_many_alleles_in_column,
    site_placement_violation,
    uniqueness_violation,
    empty_database,
    ssnp_violation,
    invalid_pattern_character,
    empty_pattern,
    not_group_start,
    bad_magic,
    version_mismatch,
    checksum_mismatch,
    truncated,
    io_failure,
    invalid_argument,
    oracle_limit,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::index_out_of_range: return "IndexOutOfRange";
        case errc::ordinal_out_of_range: return "OrdinalOutOfRange";
        case errc::label_out_of_range: return "LabelOutOfRange";
        case errc::too_many_sites: return "TooManySites";
        case errc::generation_failed: return "GenerationFailed";
        case errc::malformed_input: return "MalformedInput";
        case errc::length_mismatch: return "LengthMismatch";
        case errc::too_many_alleles_in_column: return "TooManyAllelesInColumn";
        case errc::site_placement_violation: return "SitePlacementViolation";
        case errc::uniqueness_violation: return "UniquenessViolation";
        case errc::empty_database: return "EmptyDatabase";
        case errc::ssnp_violation: return "SsnpViolation";
        case errc::invalid_pattern_character: return "InvalidPatternCharacter";
        case errc::empty_pattern: return "EmptyPattern";
        case errc::not_group_start: return "NotGroupStart";
        case errc::bad_magic: return "BadMagic";
        case errc::version_mismatch: return "VersionMismatch";
        case errc::checksum_mismatch: return "ChecksumMismatch";
        case errc::truncated: return "Truncated";
        case errc::io_failure: return "IoFailure";
        case errc::invalid_argument: return "InvalidArgument";
        case errc::oracle_limit: return "OracleLimit";
    }
    return "UnknownError";
}

class error : public std::runtime_error {
public:
    error(errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& message) {
    throw error(code, message);
}

}  // namespace ssnpsa
