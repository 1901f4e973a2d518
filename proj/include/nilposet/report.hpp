#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nilposet/group.hpp"
#include "nilposet/homology.hpp"

namespace nilposet {

inline constexpr const char* kArtifactVersion = "0.1.0";

enum class CheckStatus { Pass, Fail, SampledPass };
std::string to_string(CheckStatus s);

/// One verification line of a report: stable name, pass/fail/sampled-pass,
/// free-form detail and an optional witness rendering.
struct ReportCheck {
    std::string name;
    CheckStatus status = CheckStatus::Pass;
    std::string detail;
    std::string witness;
};

struct HomologySummary {
    int degree = 0;
    long long betti = 0;
    long long reduced_betti = 0;
    std::vector<long long> torsion;
    std::vector<long long> mod_factors;  // when a modulus was requested
};

struct VerificationReport {
    std::string version = kArtifactVersion;
    std::string preset;
    std::string claim;  // human-readable statement being verified
    std::uint64_t seed = 0;
    std::uint64_t budget = 0;
    long long coefficient_modulus = 0;

    struct {
        std::string name;
        std::string backend;
        long long order = 0;
    } group;

    std::optional<long long> family_members;
    std::optional<long long> family_maximal;
    std::vector<long long> chain_counts;
    std::optional<long long> chi_enumerated;
    std::optional<long long> chi_weighted;
    std::vector<HomologySummary> homology;
    std::vector<ReportCheck> checks;
    std::vector<std::string> notes;
    double wall_seconds = 0;

    bool all_passed() const;  // no Fail entries
    std::string to_json() const;
    std::string to_table() const;
    static VerificationReport from_json(const std::string& text);
};

struct RunOptions {
    std::uint64_t budget = 500'000'000;
    std::uint64_t seed = 12345;
    int q = 2;
    int max_dim = 3;
    long long coefficients = 0;
    std::optional<std::filesystem::path> export_dir;
    std::optional<std::filesystem::path> group_spec;
};

const std::vector<std::string>& preset_names();

// Runs a named verification preset. Throws std::invalid_argument for an
// unknown name; resource problems surface as std::runtime_error.
VerificationReport run_preset(const std::string& name, const RunOptions& opt = {});

// Generic pipeline for a group-spec file: build, battery, nil-q family,
// coset poset, homology, report.
VerificationReport run_group_spec(const std::filesystem::path& file, const RunOptions& opt);

// Writes boundary matrices of a complex as d1.smat, d2.smat, ... in dir.
void export_boundaries(const ChainComplex& cc, const std::filesystem::path& dir);

}  // namespace nilposet
