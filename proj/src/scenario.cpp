#include "emitcorr/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "emitcorr/parallel.hpp"

namespace emitcorr {

namespace {

std::string_view trim(std::string_view s) {
    const char* ws = " \t\r";
    std::size_t b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    std::size_t e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorKind::ConfigParse, msg); }

double plain_number(std::string_view tok) {
    tok = trim(tok);
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size() || tok.empty())
        config_error("not a number: '" + std::string(tok) + "'");
    return v;
}

// Items are separated by commas, or by whitespace when no comma is present.
std::vector<std::string_view> split_list(std::string_view s) {
    std::vector<std::string_view> out;
    const char* seps = s.find(',') != std::string_view::npos ? "," : " \t";
    while (true) {
        std::size_t cut = s.find_first_of(seps);
        std::string_view item = trim(s.substr(0, cut));
        if (!item.empty() || *seps == ',') out.push_back(item);
        if (cut == std::string_view::npos) break;
        s.remove_prefix(cut + 1);
    }
    return out;
}

std::string format_value(double v) {
    if (v == 0.0) v = 0.0;  // drop the sign of -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

} // namespace

double parse_number(std::string_view token) {
    std::string_view t = trim(token);
    double sign = 1.0;
    if (!t.empty() && t.front() == '-') {
        sign = -1.0;
        t = trim(t.substr(1));
    }
    constexpr double pi = std::numbers::pi;
    if (t == "pi") return sign * pi;
    if (t.starts_with("pi/")) return sign * pi / plain_number(t.substr(3));
    if (t.ends_with("*pi")) return sign * plain_number(t.substr(0, t.size() - 3)) * pi;
    return sign * plain_number(t);
}

KeyValueConfig KeyValueConfig::parse(std::string_view text) {
    KeyValueConfig cfg;
    int line_no = 0;
    while (!text.empty()) {
        std::size_t nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (std::size_t hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            config_error("line " + std::to_string(line_no) + ": expected 'key = value'");
        std::string key(trim(line.substr(0, eq)));
        std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) config_error("line " + std::to_string(line_no) + ": empty key");
        if (cfg.values_.count(key))
            config_error("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        cfg.values_[key] = value;
        cfg.lines_[key] = line_no;
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) config_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

bool KeyValueConfig::has_prefix(std::string_view prefix) const {
    auto it = values_.lower_bound(std::string(prefix));
    return it != values_.end() && std::string_view(it->first).starts_with(prefix);
}

std::string KeyValueConfig::text(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) config_error("missing key '" + key + "'");
    used_[key] = true;
    return it->second;
}

double KeyValueConfig::number(const std::string& key) const {
    std::string v = text(key);
    try {
        return parse_number(v);
    } catch (const Error& e) {
        config_error("key '" + key + "' (line " + std::to_string(lines_.at(key)) + "): " + e.what());
    }
}

std::optional<double> KeyValueConfig::maybe_number(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return number(key);
}

std::size_t KeyValueConfig::count(const std::string& key) const {
    double v = number(key);
    if (!(v >= 0.0) || v != std::floor(v) || v > 1e9)
        config_error("key '" + key + "' must be a non-negative integer");
    return static_cast<std::size_t>(v);
}

std::vector<double> KeyValueConfig::numbers(const std::string& key) const {
    std::vector<double> out;
    const std::string value = text(key);
    for (std::string_view tok : split_list(value)) {
        try {
            out.push_back(parse_number(tok));
        } catch (const Error& e) {
            config_error("key '" + key + "': " + e.what());
        }
    }
    return out;
}

bool KeyValueConfig::flag(const std::string& key) const {
    std::string v = text(key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    config_error("key '" + key + "' must be true or false");
}

void KeyValueConfig::reject_unused() const {
    for (const auto& [key, value] : values_)
        if (!used_.count(key))
            config_error("unknown key '" + key + "' (line " + std::to_string(lines_.at(key)) + ")");
}

DensityMatrix prepare(const InitialState& s) {
    struct Visitor {
        DensityMatrix operator()(const initial::Alpha& a) const { return a.state.density(); }
        DensityMatrix operator()(const initial::DoublyExcited&) const { return DensityMatrix::basis(3); }
        DensityMatrix operator()(const initial::Ground&) const { return DensityMatrix::basis(0); }
        DensityMatrix operator()(const initial::BellDiagonal& b) const {
            return build_bell_diagonal(b.h1, b.h2, b.h3);
        }
        DensityMatrix operator()(const initial::Explicit& e) const { return DensityMatrix(e.matrix); }
    };
    return std::visit(Visitor{}, s);
}

const char* to_string(ScanAxis axis) {
    switch (axis) {
    case ScanAxis::alpha: return "alpha";
    case ScanAxis::distance: return "r12_over_lambda0";
    case ScanAxis::laser_amplitude: return "ell";
    }
    return "scan";
}

std::vector<double> ScanSpec::values() const {
    if (steps == 0) throw Error(ErrorKind::InvalidArgument, "scan needs at least one step");
    if (steps == 1) return {from};
    std::vector<double> v(steps);
    for (std::size_t k = 0; k < steps; ++k)
        v[k] = from + (to - from) * static_cast<double>(k) / static_cast<double>(steps - 1);
    v.back() = to;
    return v;
}

void Scenario::validate() const {
    if (!(t_final > 0.0) || !std::isfinite(t_final))
        throw Error(ErrorKind::InvalidArgument, "time.t_final must be positive");
    if (sample_count < 2) throw Error(ErrorKind::InvalidArgument, "time.samples must be >= 2");
    if (geometry) geometry->validate();
    effective_params().validate();
    if (scan) {
        if (scan->steps == 0) throw Error(ErrorKind::InvalidArgument, "scan.steps must be >= 1");
        if (!(scan->from <= scan->to) || (scan->steps > 1 && !(scan->from < scan->to)))
            throw Error(ErrorKind::InvalidArgument, "scan range must be non-empty and ordered");
        if (scan->axis == ScanAxis::alpha) {
            if (!std::holds_alternative<initial::Alpha>(initial))
                throw Error(ErrorKind::InvalidArgument, "alpha scan needs an alpha_state initial state");
            if (scan->from < 0.0 || scan->to > 1.0)
                throw Error(ErrorKind::InvalidArgument, "alpha scan range must lie in [0, 1]");
        }
        if (scan->axis == ScanAxis::distance) {
            if (!geometry) throw Error(ErrorKind::InvalidArgument, "distance scan needs a geometry section");
            if (!(scan->from > 0.0))
                throw Error(ErrorKind::InvalidArgument, "distance scan must start above zero");
        }
    }
}

SystemParams Scenario::effective_params() const {
    SystemParams p = params;
    if (geometry) {
        CouplingSet c = couplings(*geometry);
        p.V = c.V;
        p.gamma = c.gamma;
        p.Gamma1 = geometry->Gamma1;
        p.Gamma2 = geometry->Gamma2;
    }
    return p;
}

namespace {

Eigen::Vector3d vector3(const KeyValueConfig& cfg, const std::string& key) {
    std::vector<double> v = cfg.numbers(key);
    if (v.size() != 3) config_error("key '" + key + "' needs three components");
    return {v[0], v[1], v[2]};
}

EmitterGeometry read_geometry(const KeyValueConfig& cfg) {
    EmitterGeometry g;
    if (cfg.has("geometry.mu1")) g.mu1_hat = vector3(cfg, "geometry.mu1");
    if (cfg.has("geometry.mu2")) g.mu2_hat = vector3(cfg, "geometry.mu2");
    if (cfg.has("geometry.r12_hat")) g.r12_hat = vector3(cfg, "geometry.r12_hat");
    g.r12_over_lambda0 = cfg.number("geometry.r12");
    g.n = cfg.maybe_number("geometry.n").value_or(1.0);
    g.Gamma1 = cfg.maybe_number("geometry.Gamma1").value_or(1.0);
    g.Gamma2 = cfg.maybe_number("geometry.Gamma2").value_or(1.0);
    return g;
}

InitialState read_initial(const KeyValueConfig& cfg) {
    std::string kind = cfg.text("initial.kind");
    if (kind == "alpha_state") {
        AlphaState a;
        a.alpha = cfg.number("initial.alpha");
        a.phi = cfg.maybe_number("initial.phi").value_or(0.0);
        a.validate();
        return initial::Alpha{a};
    }
    if (kind == "doubly_excited") return initial::DoublyExcited{};
    if (kind == "ground") return initial::Ground{};
    if (kind == "bell_diagonal") {
        std::vector<double> h = cfg.numbers("initial.h");
        if (h.size() != 3) config_error("initial.h needs three coefficients");
        build_bell_diagonal(h[0], h[1], h[2]);  // validate early
        return initial::BellDiagonal{h[0], h[1], h[2]};
    }
    if (kind == "matrix") {
        std::vector<double> re = cfg.numbers("initial.real");
        std::vector<double> im = cfg.has("initial.imag") ? cfg.numbers("initial.imag")
                                                         : std::vector<double>(16, 0.0);
        if (re.size() != 16 || im.size() != 16)
            config_error("initial.real and initial.imag need 16 row-major entries");
        Matrix4c m;
        for (int k = 0; k < 16; ++k) m(k / 4, k % 4) = cplx(re[k], im[k]);
        DensityMatrix{m};  // validate early
        return initial::Explicit{m};
    }
    config_error("unknown initial.kind '" + kind +
                 "' (alpha_state, doubly_excited, ground, bell_diagonal, matrix)");
}

} // namespace

EmitterGeometry parse_geometry(const KeyValueConfig& cfg) {
    EmitterGeometry g = read_geometry(cfg);
    cfg.reject_unused();
    g.validate();
    return g;
}

Scenario parse_scenario(const KeyValueConfig& cfg) {
    Scenario s;
    s.initial = read_initial(cfg);

    if (cfg.has_prefix("geometry.")) {
        for (const char* k : {"params.V", "params.gamma", "params.Gamma1", "params.Gamma2"})
            if (cfg.has(k))
                config_error(std::string(k) + " conflicts with the geometry section, which sets it");
        s.geometry = read_geometry(cfg);
    } else {
        s.params.V = cfg.maybe_number("params.V").value_or(0.0);
        s.params.gamma = cfg.maybe_number("params.gamma").value_or(0.0);
        s.params.Gamma1 = cfg.maybe_number("params.Gamma1").value_or(1.0);
        s.params.Gamma2 = cfg.maybe_number("params.Gamma2").value_or(1.0);
    }
    s.params.delta_minus = cfg.maybe_number("params.delta_minus").value_or(0.0);
    s.params.delta_plus = cfg.maybe_number("params.delta_plus").value_or(0.0);
    if (cfg.has("params.ell")) {
        if (cfg.has("params.ell1") || cfg.has("params.ell2"))
            config_error("params.ell sets both drives; do not combine with params.ell1/ell2");
        s.params.ell1 = s.params.ell2 = cfg.number("params.ell");
    } else {
        s.params.ell1 = cfg.maybe_number("params.ell1").value_or(0.0);
        s.params.ell2 = cfg.maybe_number("params.ell2").value_or(0.0);
    }

    s.t_final = cfg.number("time.t_final");
    s.sample_count = cfg.has("time.samples") ? cfg.count("time.samples") : 201;

    if (cfg.has_prefix("scan.")) {
        ScanSpec scan;
        std::string axis = cfg.text("scan.axis");
        if (axis == "alpha") {
            scan.axis = ScanAxis::alpha;
            scan.from = 0.0;
            scan.to = 1.0;
        } else if (axis == "distance") {
            scan.axis = ScanAxis::distance;
            scan.from = 0.1;
            scan.to = 0.4;
        } else if (axis == "laser_amplitude") {
            scan.axis = ScanAxis::laser_amplitude;
            scan.from = 0.0;
            scan.to = 10.0;
        } else {
            config_error("unknown scan.axis '" + axis + "' (alpha, distance, laser_amplitude)");
        }
        scan.from = cfg.maybe_number("scan.from").value_or(scan.from);
        scan.to = cfg.maybe_number("scan.to").value_or(scan.to);
        scan.steps = cfg.has("scan.steps") ? cfg.count("scan.steps") : 11;
        s.scan = scan;
    }
    if (cfg.has("output.project")) s.project = cfg.flag("output.project");

    cfg.reject_unused();
    s.validate();
    return s;
}

Scenario load_scenario(const std::string& path) { return parse_scenario(KeyValueConfig::load(path)); }

void OutputTable::write_csv(std::ostream& os) const {
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << '\n';
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw Error(ErrorKind::InvalidArgument, "output row width does not match header");
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_value(row[i]);
        os << '\n';
    }
}

std::string OutputTable::to_csv() const {
    std::ostringstream os;
    write_csv(os);
    return os.str();
}

namespace {
const std::vector<std::string> record_columns{"t", "MI", "CC", "QD", "C", "EoF", "theta_m", "phi_m"};

std::vector<double> record_row(const CorrelationRecord& r) {
    return {r.t, r.MI, r.CC, r.QD, r.C, r.EoF, r.argmax_basis.theta_m, r.argmax_basis.phi_m};
}

std::vector<CorrelationRecord> run_records(const Scenario& s, unsigned threads) {
    PropagationOptions opts;
    opts.project = s.project;
    EvolutionResult ev = propagate(prepare(s.initial), s.effective_params(), s.t_final, s.sample_count, opts);
    return correlation_records(ev, threads);
}

Scenario at_scan_point(const Scenario& base, ScanAxis axis, double value) {
    Scenario s = base;
    s.scan.reset();
    switch (axis) {
    case ScanAxis::alpha: std::get<initial::Alpha>(s.initial).state.alpha = value; break;
    case ScanAxis::distance: s.geometry->r12_over_lambda0 = value; break;
    case ScanAxis::laser_amplitude: s.params.ell1 = s.params.ell2 = value; break;
    }
    return s;
}
} // namespace

OutputTable correlation_table(const std::vector<CorrelationRecord>& records) {
    OutputTable t;
    t.header = record_columns;
    t.rows.reserve(records.size());
    for (const auto& r : records) t.rows.push_back(record_row(r));
    return t;
}

OutputTable run_scenario(const Scenario& s, unsigned threads) {
    s.validate();
    return correlation_table(run_records(s, threads));
}

OutputTable run_scan(const Scenario& s, unsigned threads) {
    s.validate();
    if (!s.scan) throw Error(ErrorKind::InvalidArgument, "scenario has no scan section");
    const std::vector<double> values = s.scan->values();
    std::vector<std::vector<CorrelationRecord>> blocks(values.size());
    parallel_for(values.size(), threads, [&](std::size_t k) {
        try {
            blocks[k] = run_records(at_scan_point(s, s.scan->axis, values[k]), 1);
        } catch (const PropagationError& e) {
            std::ostringstream os;
            os << "scan point " << k << " (" << to_string(s.scan->axis) << " = " << values[k]
               << "), output row " << k * s.sample_count + e.sample() << ": " << e.what();
            throw PropagationError(k * s.sample_count + e.sample(), os.str());
        }
    });

    OutputTable t;
    t.header.push_back(to_string(s.scan->axis));
    t.header.insert(t.header.end(), record_columns.begin(), record_columns.end());
    for (std::size_t k = 0; k < values.size(); ++k)
        for (const auto& r : blocks[k]) {
            std::vector<double> row{values[k]};
            std::vector<double> rest = record_row(r);
            row.insert(row.end(), rest.begin(), rest.end());
            t.rows.push_back(std::move(row));
        }
    return t;
}

std::string format_couplings(const EmitterGeometry& g) {
    g.validate();
    std::ostringstream os;
    os << "z = " << format_value(g.z()) << '\n';
    os << "V = " << format_value(coupling_strength(g)) << '\n';
    os << "gamma = " << format_value(collective_decay(g)) << '\n';
    if (g.r12_over_lambda0 < small_separation_max) {
        CouplingSet lim = small_separation_limit(g);
        os << "V_limit = " << format_value(lim.V) << '\n';
        os << "gamma_limit = " << format_value(lim.gamma) << '\n';
    }
    return os.str();
}

unsigned default_thread_count() {
    if (const char* env = std::getenv("EC_THREADS")) {
        try {
            double v = plain_number(env);
            if (v >= 1.0 && v == std::floor(v)) return static_cast<unsigned>(std::min(v, 1024.0));
        } catch (const Error&) {
        }
        return 1;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

} // namespace emitcorr
