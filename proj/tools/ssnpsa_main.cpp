#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ssnpsa/index.hpp"
#include "ssnpsa/model.hpp"
#include "ssnpsa/oracle.hpp"

namespace {

using ssnpsa::errc;

enum class log_level { quiet = 0, info = 1, debug = 2 };

log_level current_log_level() {
    static log_level level = [] {
        const char* env = std::getenv("SSNPSA_LOG");
        if (env == nullptr) return log_level::info;
        std::string v(env);
        if (v == "quiet") return log_level::quiet;
        if (v == "debug") return log_level::debug;
        return log_level::info;
    }();
    return level;
}

void log_info(const std::string& message) {
    if (current_log_level() >= log_level::info) std::cerr << message << '\n';
}

void log_debug(const std::string& message) {
    if (current_log_level() >= log_level::debug) std::cerr << message << '\n';
}

std::uint64_t parse_rank(const std::string& text) {
    std::uint64_t value = 0;
    std::size_t used = 0;
    try {
        value = std::stoull(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || text.empty()) ssnpsa::raise(errc::invalid_argument, "rank '" + text + "' is not a number");
    return value;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) ssnpsa::raise(errc::io_failure, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) ssnpsa::raise(errc::io_failure, "cannot read " + path);
    return buf.str();
}

void write_file(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) ssnpsa::raise(errc::io_failure, "cannot open " + path + " for writing");
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) ssnpsa::raise(errc::io_failure, "cannot write " + path);
}

ssnpsa::compressed_sa load_index(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) ssnpsa::raise(errc::io_failure, "cannot open " + path);
    return ssnpsa::compressed_sa::load(in);
}

std::optional<std::uint64_t> parse_stride(const std::string& text) {
    if (text.empty() || text == "auto") return std::nullopt;
    try {
        return std::stoull(text);
    } catch (const std::exception&) {
        ssnpsa::raise(errc::invalid_argument, "--stride must be a positive integer or 'auto'");
    }
}

// Instance ingestion shared by `build` and `verify`.
struct instance_args {
    std::string schema_path, matrix_path, align_path;
    std::uint64_t rows = 0;
    bool rows_set = false;
};

ssnpsa::virtual_text load_instance(const instance_args& args) {
    if (!args.align_path.empty()) {
        std::vector<std::string> words = ssnpsa::read_alignment(read_file(args.align_path));
        auto [schema, matrix] = ssnpsa::infer_from_alignment(words);
        return {std::move(schema), std::move(matrix)};
    }
    if (args.schema_path.empty() || args.matrix_path.empty())
        ssnpsa::raise(errc::invalid_argument, "need both --schema and --matrix (or --align)");
    ssnpsa::ssnp_schema schema = ssnpsa::parse_schema(read_file(args.schema_path));
    std::optional<std::uint64_t> forced_rows;
    if (args.rows_set) forced_rows = args.rows;
    ssnpsa::genotype_matrix matrix = ssnpsa::parse_matrix(read_file(args.matrix_path), schema, forced_rows);
    return {std::move(schema), std::move(matrix)};
}

int cmd_build(const instance_args& inst, const std::string& out_path, const std::string& stride) {
    ssnpsa::virtual_text vt = load_instance(inst);
    ssnpsa::validation_report report = ssnpsa::validate(vt);
    if (!report.ok) {
        std::cerr << "validation failed:\n" << report.to_string();
        return 2;
    }
    ssnpsa::build_config config;
    config.stride = parse_stride(stride);

    log_info("building index over " + std::to_string(vt.size()) + " text positions");
    auto t0 = std::chrono::steady_clock::now();
    ssnpsa::compressed_sa csa = ssnpsa::compressed_sa::build(vt, config);
    double build_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::ostringstream blob;
    csa.save(blob);
    write_file(out_path, blob.str());

    std::cout << "n\t" << vt.n() << "\n"
              << "k\t" << vt.k() << "\n"
              << "m\t" << vt.m() << "\n"
              << "g\t" << csa.stride() << "\n"
              << "bytes\t" << blob.str().size() << "\n"
              << "build_seconds\t" << build_seconds << "\n";
    return 0;
}

int cmd_query(const std::string& index_path, const std::string& rank_arg, const std::string& range_arg) {
    ssnpsa::compressed_sa csa = load_index(index_path);
    std::uint64_t lo = 0, hi = 0;
    if (!rank_arg.empty()) {
        lo = hi = parse_rank(rank_arg);
    } else {
        std::size_t colon = range_arg.find(':');
        if (colon == std::string::npos) ssnpsa::raise(errc::invalid_argument, "--range must be a:b");
        lo = parse_rank(range_arg.substr(0, colon));
        hi = parse_rank(range_arg.substr(colon + 1));
        if (lo > hi) ssnpsa::raise(errc::invalid_argument, "--range bounds out of order");
    }
    for (std::uint64_t rank = lo; rank <= hi; ++rank)
        std::cout << rank << '\t' << csa.sa_access(rank) << '\n';
    return 0;
}

int cmd_locate(const std::string& index_path, const std::string& pattern, bool count_only) {
    ssnpsa::compressed_sa csa = load_index(index_path);
    if (count_only) {
        std::cout << csa.count(pattern) << '\n';
    } else {
        for (std::uint64_t p : csa.locate(pattern)) std::cout << p << '\n';
    }
    return 0;
}

int cmd_stats(const std::string& index_path, bool as_json) {
    ssnpsa::compressed_sa csa = load_index(index_path);
    ssnpsa::space_report r = csa.space();
    if (as_json) {
        nlohmann::json j{
            {"n", r.n},
            {"k", r.k},
            {"m", r.m},
            {"g", r.g},
            {"text_length", r.text_length},
            {"directory_bits", r.directory_bits()},
            {"meta_entries", r.meta_entries},
            {"anchor_ints", r.anchor_ints},
            {"chain_bits", r.chain_bits()},
            {"group_bits", r.group_bits()},
            {"total_bits", r.total_bits()},
            {"plain_sa_bits", r.plain_sa_bits()},
            {"detail",
             {{"directory_payload_bits", r.directory_payload_bits},
              {"directory_overhead_bits", r.directory_overhead_bits},
              {"meta_bits", r.meta_bits()},
              {"meta_bits_per_entry", r.meta_bits_per_entry},
              {"anchor_int_bits", r.anchor_int_bits},
              {"anchor_payload_bits", r.anchor_payload_bits()},
              {"anchor_stored_bits", r.anchor_stored_bits},
              {"chain_payload_bits", r.chain_payload_bits},
              {"chain_overhead_bits", r.chain_overhead_bits},
              {"group_payload_bits", r.group_payload_bits},
              {"group_overhead_bits", r.group_overhead_bits},
              {"schema_bits", r.schema_bits},
              {"matrix_bits", r.matrix_bits}}},
        };
        std::cout << j.dump() << '\n';
    } else {
        std::cout << "n\t" << r.n << "\nk\t" << r.k << "\nm\t" << r.m << "\ng\t" << r.g << "\n"
                  << "text_length\t" << r.text_length << "\n"
                  << "directory_bits\t" << r.directory_bits() << "\n"
                  << "meta_entries\t" << r.meta_entries << "\n"
                  << "anchor_ints\t" << r.anchor_ints << "\n"
                  << "chain_bits\t" << r.chain_bits() << "\n"
                  << "group_bits\t" << r.group_bits() << "\n"
                  << "total_bits\t" << r.total_bits() << "\n"
                  << "plain_sa_bits\t" << r.plain_sa_bits() << "\n";
    }
    return 0;
}

int cmd_gen(std::uint64_t n, std::uint64_t k, std::uint64_t m, const std::string& sigma, std::uint64_t min_gap,
            std::uint64_t seed, std::uint64_t max_retries, const std::string& out_prefix) {
    ssnpsa::gen_params params;
    params.n = static_cast<std::uint32_t>(n);
    params.k = static_cast<std::uint32_t>(k);
    params.m = m;
    params.alphabet = sigma;
    params.min_gap = static_cast<std::uint32_t>(min_gap);
    params.seed = seed;
    params.max_retries = static_cast<std::uint32_t>(max_retries);
    auto [schema, matrix] = ssnpsa::generate(params);
    std::string schema_path = out_prefix + ".schema";
    std::string matrix_path = out_prefix + ".matrix";
    write_file(schema_path, ssnpsa::serialize_schema(schema));
    write_file(matrix_path, ssnpsa::serialize_matrix(matrix));
    std::cout << "schema\t" << schema_path << "\nmatrix\t" << matrix_path << "\n";
    return 0;
}

int cmd_verify(const std::string& index_path, const instance_args& inst, std::uint64_t patterns,
               const std::string& stride, std::uint64_t seed) {
    ssnpsa::compare_options options;
    options.pattern_samples = patterns;
    options.seed = seed;

    ssnpsa::compare_report report;
    if (!index_path.empty()) {
        ssnpsa::compressed_sa csa = load_index(index_path);
        log_debug("index loaded, sweeping " + std::to_string(csa.size()) + " ranks");
        report = ssnpsa::full_compare(csa, options);
    } else {
        ssnpsa::virtual_text vt = load_instance(inst);
        ssnpsa::validation_report validation = ssnpsa::validate(vt);
        if (!validation.ok) {
            std::cerr << "validation failed:\n" << validation.to_string();
            return 2;
        }
        ssnpsa::build_config config;
        config.stride = parse_stride(stride);
        report = ssnpsa::full_compare(vt, config, options);
    }
    std::cout << report.to_string() << '\n';
    return report.ok ? 0 : 2;
}

int run(int argc, char** argv) {
    CLI::App app{"Compressed suffix array for SNP-only sequence collections"};
    app.require_subcommand(1);

    // build
    auto* build = app.add_subcommand("build", "Build an index from a schema+matrix pair or an alignment");
    instance_args build_inst;
    std::string build_out, build_stride = "auto";
    build->add_option("--schema", build_inst.schema_path, "Schema file");
    build->add_option("--matrix", build_inst.matrix_path, "Genotype matrix file");
    auto* build_rows = build->add_option("--rows", build_inst.rows, "Row count (needed for k=0 matrices)");
    build->add_option("--align", build_inst.align_path, "Alignment file (plain lines or FASTA)");
    build->add_option("--out", build_out, "Output index file")->required();
    build->add_option("--stride", build_stride, "Sites per anchor interval, or 'auto'");

    // query
    auto* query = app.add_subcommand("query", "Print suffix-array values");
    std::string query_index, query_rank, query_range;
    query->add_option("index", query_index, "Index file")->required();
    query->add_option("--rank", query_rank, "Single rank");
    query->add_option("--range", query_range, "Inclusive rank range a:b");

    // locate
    auto* locate = app.add_subcommand("locate", "Find a pattern");
    std::string locate_index, locate_pattern;
    bool locate_count_only = false;
    locate->add_option("index", locate_index, "Index file")->required();
    locate->add_option("--pattern", locate_pattern, "Pattern over the alphabet")->required();
    locate->add_flag("--count-only", locate_count_only, "Print only the occurrence count");

    // stats
    auto* stats = app.add_subcommand("stats", "Print the space breakdown");
    std::string stats_index;
    bool stats_json = false;
    stats->add_option("index", stats_index, "Index file")->required();
    stats->add_flag("--json", stats_json, "JSON output");

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a random valid instance");
    std::uint64_t gen_n = 0, gen_k = 0, gen_m = 0, gen_min_gap = 2, gen_seed = 0, gen_retries = 64;
    std::string gen_sigma, gen_prefix;
    gen->add_option("--n", gen_n, "Word length")->required();
    gen->add_option("--k", gen_k, "SNP site count")->required();
    gen->add_option("--m", gen_m, "Number of words")->required();
    gen->add_option("--sigma", gen_sigma, "Alphabet characters")->required();
    gen->add_option("--min-gap", gen_min_gap, "Minimum distance between site columns");
    gen->add_option("--seed", gen_seed, "RNG seed");
    gen->add_option("--max-retries", gen_retries, "Resampling attempts");
    gen->add_option("--out-prefix", gen_prefix, "Writes <prefix>.schema and <prefix>.matrix")->required();

    // verify
    auto* verify = app.add_subcommand("verify", "Check an index or instance against the brute-force oracle");
    std::string verify_index, verify_stride = "auto";
    instance_args verify_inst;
    std::uint64_t verify_patterns = 20, verify_seed = 0x5eed;
    verify->add_option("index", verify_index, "Index file");
    verify->add_option("--schema", verify_inst.schema_path, "Schema file");
    verify->add_option("--matrix", verify_inst.matrix_path, "Genotype matrix file");
    auto* verify_rows = verify->add_option("--rows", verify_inst.rows, "Row count (needed for k=0 matrices)");
    verify->add_option("--align", verify_inst.align_path, "Alignment file");
    verify->add_option("--patterns", verify_patterns, "Number of sampled patterns");
    verify->add_option("--stride", verify_stride, "Stride when building from files");
    verify->add_option("--seed", verify_seed, "Pattern sampling seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    build_inst.rows_set = build_rows->count() > 0;
    verify_inst.rows_set = verify_rows->count() > 0;

    if (build->parsed()) {
        bool from_align = !build_inst.align_path.empty();
        bool from_files = !build_inst.schema_path.empty() && !build_inst.matrix_path.empty();
        if (from_align == from_files)
            ssnpsa::raise(errc::invalid_argument, "build needs either --schema and --matrix, or --align");
        return cmd_build(build_inst, build_out, build_stride);
    }
    if (query->parsed()) {
        if (query_rank.empty() == query_range.empty())
            ssnpsa::raise(errc::invalid_argument, "query needs exactly one of --rank or --range");
        return cmd_query(query_index, query_rank, query_range);
    }
    if (locate->parsed()) return cmd_locate(locate_index, locate_pattern, locate_count_only);
    if (stats->parsed()) return cmd_stats(stats_index, stats_json);
    if (gen->parsed()) return cmd_gen(gen_n, gen_k, gen_m, gen_sigma, gen_min_gap, gen_seed, gen_retries, gen_prefix);
    if (verify->parsed()) {
        bool have_index = !verify_index.empty();
        bool have_files = !verify_inst.schema_path.empty() || !verify_inst.align_path.empty();
        if (have_index == have_files)
            ssnpsa::raise(errc::invalid_argument, "verify needs an index file or --schema/--matrix or --align");
        return cmd_verify(verify_index, verify_inst, verify_patterns, verify_stride, verify_seed);
    }
    return 2;
}

int exit_code_for(errc code) {
    switch (code) {
        case errc::io_failure:
        case errc::bad_magic:
        case errc::version_mismatch:
        case errc::checksum_mismatch:
        case errc::truncated:
            return 1;
        default:
            return 2;
    }
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ssnpsa::error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
