#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "emitcorr/correlations.hpp"
#include "emitcorr/couplings.hpp"
#include "emitcorr/dynamics.hpp"

namespace emitcorr {

/// Flat `section.key = value` text. Blank lines and `#` comments are
/// ignored; duplicate keys are an error.
class KeyValueConfig {
public:
    static KeyValueConfig parse(std::string_view text);
    static KeyValueConfig load(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    bool has_prefix(std::string_view prefix) const;

    std::string text(const std::string& key) const;
    /// Accepts plain numbers and multiples of pi: `pi`, `0.5*pi`, `pi/2`, `-pi`.
    double number(const std::string& key) const;
    std::optional<double> maybe_number(const std::string& key) const;
    std::size_t count(const std::string& key) const;
    std::vector<double> numbers(const std::string& key) const;
    bool flag(const std::string& key) const;

    /// Throws ConfigParse naming the first key that was never read.
    void reject_unused() const;

private:
    std::map<std::string, std::string> values_;
    std::map<std::string, int> lines_;
    mutable std::map<std::string, bool> used_;
};

double parse_number(std::string_view token);

namespace initial {
struct Alpha {
    AlphaState state;
};
struct DoublyExcited {};
struct Ground {};
struct BellDiagonal {
    double h1, h2, h3;
};
struct Explicit {
    Matrix4c matrix;
};
} // namespace initial

using InitialState =
    std::variant<initial::Alpha, initial::DoublyExcited, initial::Ground, initial::BellDiagonal, initial::Explicit>;

DensityMatrix prepare(const InitialState& s);

enum class ScanAxis { alpha, distance, laser_amplitude };

const char* to_string(ScanAxis axis);

struct ScanSpec {
    ScanAxis axis = ScanAxis::alpha;
    double from = 0.0;
    double to = 1.0;
    std::size_t steps = 2;

    std::vector<double> values() const;
};

struct Scenario {
    InitialState initial = initial::Ground{};
    /// Coefficients; when `geometry` is set, V, gamma and both Gamma_i come from it.
    SystemParams params;
    std::optional<EmitterGeometry> geometry;
    double t_final = 10.0;
    std::size_t sample_count = 201;
    std::optional<ScanSpec> scan;
    bool project = false;

    /// Throws InvalidArgument on inconsistent fields.
    void validate() const;
    /// Params with geometry-derived couplings applied.
    SystemParams effective_params() const;
};

Scenario parse_scenario(const KeyValueConfig& cfg);
Scenario load_scenario(const std::string& path);

EmitterGeometry parse_geometry(const KeyValueConfig& cfg);

struct OutputTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    /// Comma-separated, LF line endings, 15 significant digits.
    void write_csv(std::ostream& os) const;
    std::string to_csv() const;
};

OutputTable correlation_table(const std::vector<CorrelationRecord>& records);

/// Single trajectory; any scan section is ignored.
OutputTable run_scenario(const Scenario& s, unsigned threads = 1);

/// Rows ordered by scan index then time index, with the scanned value as the
/// first column. Throws InvalidArgument if the scenario has no scan.
OutputTable run_scan(const Scenario& s, unsigned threads = 1);

/// `key = value` lines with z, V, gamma and, below 0.05 lambda0, the
/// near-field limits.
std::string format_couplings(const EmitterGeometry& g);

} // namespace emitcorr
