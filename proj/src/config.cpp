#include "wqload/config.hpp"

#include <algorithm>
#include <charconv>
#include <initializer_list>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "wqload/error.hpp"

namespace wqload {

namespace {

[[noreturn]] void config_error(std::size_t line, const std::string& msg)
{
    throw Error("config", "config-error", (line > 0 ? "line " + std::to_string(line) + ": " : "") + msg);
}

std::string_view trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Entry
{
    std::string value;
    std::size_t line;
};

struct RawSection
{
    std::size_t line = 0;
    std::map<std::string, Entry> keys;
};

// Consumes keys of one section, rejecting anything left over.
class SectionReader
{
public:
    SectionReader(std::string name, RawSection raw) : name_(std::move(name)), raw_(std::move(raw)) {}

    std::optional<Entry> take(const std::string& key)
    {
        auto it = raw_.keys.find(key);
        if (it == raw_.keys.end())
            return std::nullopt;
        Entry e = it->second;
        raw_.keys.erase(it);
        return e;
    }

    std::optional<double> number(const std::string& key)
    {
        auto e = take(key);
        if (!e)
            return std::nullopt;
        double v = 0.0;
        const char* first = e->value.data();
        const char* last = first + e->value.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last || !std::isfinite(v))
            config_error(e->line, "key '" + key + "' expects a number, got '" + e->value + "'");
        return v;
    }

    std::optional<long long> integer(const std::string& key)
    {
        auto e = take(key);
        if (!e)
            return std::nullopt;
        long long v = 0;
        const char* first = e->value.data();
        const char* last = first + e->value.size();
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last)
            config_error(e->line, "key '" + key + "' expects an integer, got '" + e->value + "'");
        return v;
    }

    std::vector<double> list(const std::string& key)
    {
        std::vector<double> out;
        auto e = take(key);
        if (!e)
            return out;
        std::string_view rest = e->value;
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const std::string_view item = trim(rest.substr(0, comma));
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
            if (item.empty() || ec != std::errc() || ptr != item.data() + item.size())
                config_error(e->line, "key '" + key + "' expects a comma-separated list of numbers");
            out.push_back(v);
            if (comma == std::string_view::npos)
                break;
            rest = rest.substr(comma + 1);
        }
        return out;
    }

    double required(const std::string& key)
    {
        auto v = number(key);
        if (!v)
            config_error(raw_.line, "section [" + name_ + "] is missing key '" + key + "'");
        return *v;
    }

    // Unknown keys are reported before missing ones.
    void allow(std::initializer_list<const char*> keys) const
    {
        for (const auto& [k, e] : raw_.keys) {
            if (std::find_if(keys.begin(), keys.end(), [&](const char* a) { return k == a; }) == keys.end())
                config_error(e.line, "unknown key '" + k + "' in section [" + name_ + "]");
        }
    }

    void finish() const
    {
        if (!raw_.keys.empty()) {
            const auto& [k, e] = *raw_.keys.begin();
            config_error(e.line, "unknown key '" + k + "' in section [" + name_ + "]");
        }
    }

    std::size_t line() const { return raw_.line; }

private:
    std::string name_;
    RawSection raw_;
};

std::string fmt(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

QubitSection read_qubit(SectionReader r)
{
    QubitSection q;
    r.allow({"label", "gamma_r_mhz", "gamma_phi_mhz", "omega_10_ghz", "k_coupling_rad_s_sqrt_w", "z0_ohm", "e_c_mhz",
             "e_j_ghz"});
    if (auto e = r.take("label"))
        q.label = e->value;
    q.gamma_r_mhz = r.required("gamma_r_mhz");
    q.gamma_phi_mhz = r.required("gamma_phi_mhz");
    q.omega_10_ghz = r.required("omega_10_ghz");
    q.k_coupling_rad_s_sqrt_w = r.number("k_coupling_rad_s_sqrt_w");
    q.z0_ohm = r.number("z0_ohm").value_or(50.0);
    q.e_c_mhz = r.number("e_c_mhz");
    q.e_j_ghz = r.number("e_j_ghz");
    r.finish();
    return q;
}

PulseSection read_pulse(SectionReader r)
{
    PulseSection p;
    r.allow({"shape", "tau_ns", "t_start_us", "t_off_us", "peak_dbm", "target_n", "phase_m", "phase_theta_deg"});
    if (auto e = r.take("shape")) {
        p.shape = e->value;
        try {
            parse_shape(p.shape);
        } catch (const Error&) {
            config_error(e->line, "unknown pulse shape '" + p.shape + "'");
        }
    }
    p.tau_ns = r.required("tau_ns");
    p.t_start_us = r.number("t_start_us").value_or(0.0);
    p.t_off_us = r.required("t_off_us");
    p.peak_dbm = r.number("peak_dbm");
    p.target_n = r.number("target_n");
    if (p.peak_dbm.has_value() == p.target_n.has_value())
        config_error(r.line(), "section [pulse] needs exactly one of 'peak_dbm' and 'target_n'");
    if (auto m = r.integer("phase_m")) {
        if (*m < 0)
            config_error(r.line(), "phase_m must be >= 0");
        p.phase_m = static_cast<int>(*m);
    }
    p.phase_theta_deg = r.number("phase_theta_deg");
    r.finish();
    return p;
}

SimulationSection read_simulation(SectionReader r)
{
    SimulationSection s;
    r.allow({"dt_ns", "post_window_us", "detuning_mhz"});
    s.dt_ns = r.number("dt_ns");
    s.post_window_us = r.number("post_window_us");
    s.detuning_mhz = r.number("detuning_mhz").value_or(0.0);
    r.finish();
    return s;
}

NoiseSection read_noise(SectionReader r)
{
    NoiseSection n;
    r.allow({"v_n_nv", "seed", "bin_ns", "gain_db"});
    n.v_n_nv = r.number("v_n_nv").value_or(0.0);
    if (auto s = r.integer("seed")) {
        if (*s < 0)
            config_error(r.line(), "seed must be >= 0");
        n.seed = static_cast<std::uint64_t>(*s);
    }
    n.bin_ns = r.number("bin_ns");
    n.gain_db = r.number("gain_db").value_or(0.0);
    r.finish();
    return n;
}

SweepSection read_sweep(SectionReader r)
{
    static const std::set<std::string> params{"tau", "n", "m", "theta"};
    static const std::set<std::string> models{"pipeline", "analytic_coherent", "fock"};
    SweepSection s;
    r.allow({"parameter", "values", "start", "stop", "count", "spacing", "model"});
    auto p = r.take("parameter");
    if (!p)
        config_error(r.line(), "section [sweep] is missing key 'parameter'");
    if (!params.count(p->value))
        config_error(p->line, "unknown sweep parameter '" + p->value + "' (expected tau, n, m or theta)");
    s.parameter = p->value;
    s.values = r.list("values");
    s.start = r.number("start");
    s.stop = r.number("stop");
    if (auto c = r.integer("count"))
        s.count = static_cast<int>(*c);
    if (auto sp = r.take("spacing")) {
        if (sp->value != "lin" && sp->value != "log")
            config_error(sp->line, "spacing must be 'lin' or 'log'");
        s.spacing = sp->value;
    }
    if (auto m = r.take("model")) {
        if (!models.count(m->value))
            config_error(m->line, "unknown sweep model '" + m->value + "'");
        s.model = m->value;
    }
    const bool range = s.start || s.stop || s.count;
    if (range && !(s.start && s.stop && s.count))
        config_error(r.line(), "a sweep range needs start, stop and count");
    if (range && !s.values.empty())
        config_error(r.line(), "give either 'values' or a start/stop/count range");
    if (s.model != "pipeline" && s.parameter != "tau")
        config_error(r.line(), "analytic sweep models only support parameter = tau");
    r.finish();
    return s;
}

} // namespace

std::vector<double> SweepSection::expand() const
{
    if (!values.empty())
        return values;
    if (!count || *count < 1)
        throw Error("config", "empty-sweep", "sweep has no values");
    std::vector<double> out;
    const int n = *count;
    for (int i = 0; i < n; ++i) {
        const double f = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
        if (spacing == "log")
            out.push_back(*start * std::pow(*stop / *start, f));
        else
            out.push_back(*start + f * (*stop - *start));
    }
    return out;
}

ExperimentConfig parse_config(std::string_view text)
{
    static const std::set<std::string> known{"qubit", "pulse", "simulation", "noise", "sweep"};
    std::map<std::string, RawSection> sections;
    RawSection* current = nullptr;
    std::size_t line_no = 0;
    std::string_view rest = text;
    while (!rest.empty() || line_no == 0) {
        const auto nl = rest.find('\n');
        const std::string_view raw = rest.substr(0, nl);
        rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#' || line.front() == ';') {
            if (rest.empty())
                break;
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']')
                config_error(line_no, "malformed section header");
            const std::string name(trim(line.substr(1, line.size() - 2)));
            if (!known.count(name))
                config_error(line_no, "unknown section [" + name + "]");
            if (sections.count(name))
                config_error(line_no, "duplicate section [" + name + "]");
            current = &sections[name];
            current->line = line_no;
        } else {
            const auto eq = line.find('=');
            if (eq == std::string_view::npos)
                config_error(line_no, "expected 'key = value'");
            if (!current)
                config_error(line_no, "key outside of any section");
            const std::string key(trim(line.substr(0, eq)));
            const std::string value(trim(line.substr(eq + 1)));
            if (key.empty())
                config_error(line_no, "empty key");
            if (current->keys.count(key))
                config_error(line_no, "duplicate key '" + key + "'");
            current->keys[key] = {value, line_no};
        }
        if (rest.empty())
            break;
    }

    ExperimentConfig cfg;
    for (auto& [name, raw] : sections) {
        SectionReader r(name, std::move(raw));
        if (name == "qubit")
            cfg.qubit = read_qubit(std::move(r));
        else if (name == "pulse")
            cfg.pulse = read_pulse(std::move(r));
        else if (name == "simulation")
            cfg.simulation = read_simulation(std::move(r));
        else if (name == "noise")
            cfg.noise = read_noise(std::move(r));
        else
            cfg.sweep = read_sweep(std::move(r));
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("config", "config-error", "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& cfg)
{
    std::ostringstream os;
    auto kv = [&](const char* k, const std::string& v) { os << k << " = " << v << '\n'; };
    auto num = [&](const char* k, double v) { kv(k, fmt(v)); };
    auto opt = [&](const char* k, const std::optional<double>& v) {
        if (v)
            num(k, *v);
    };
    if (cfg.qubit) {
        const auto& q = *cfg.qubit;
        os << "[qubit]\n";
        if (!q.label.empty())
            kv("label", q.label);
        num("gamma_r_mhz", q.gamma_r_mhz);
        num("gamma_phi_mhz", q.gamma_phi_mhz);
        num("omega_10_ghz", q.omega_10_ghz);
        opt("k_coupling_rad_s_sqrt_w", q.k_coupling_rad_s_sqrt_w);
        num("z0_ohm", q.z0_ohm);
        opt("e_c_mhz", q.e_c_mhz);
        opt("e_j_ghz", q.e_j_ghz);
    }
    if (cfg.pulse) {
        const auto& p = *cfg.pulse;
        os << "\n[pulse]\n";
        kv("shape", p.shape);
        num("tau_ns", p.tau_ns);
        num("t_start_us", p.t_start_us);
        num("t_off_us", p.t_off_us);
        opt("peak_dbm", p.peak_dbm);
        opt("target_n", p.target_n);
        if (p.phase_m)
            kv("phase_m", std::to_string(*p.phase_m));
        opt("phase_theta_deg", p.phase_theta_deg);
    }
    if (cfg.simulation) {
        const auto& s = *cfg.simulation;
        os << "\n[simulation]\n";
        opt("dt_ns", s.dt_ns);
        opt("post_window_us", s.post_window_us);
        num("detuning_mhz", s.detuning_mhz);
    }
    if (cfg.noise) {
        const auto& n = *cfg.noise;
        os << "\n[noise]\n";
        num("v_n_nv", n.v_n_nv);
        kv("seed", std::to_string(n.seed));
        opt("bin_ns", n.bin_ns);
        num("gain_db", n.gain_db);
    }
    if (cfg.sweep) {
        const auto& s = *cfg.sweep;
        os << "\n[sweep]\n";
        kv("parameter", s.parameter);
        if (!s.values.empty()) {
            std::string joined;
            for (std::size_t i = 0; i < s.values.size(); ++i)
                joined += (i ? ", " : "") + fmt(s.values[i]);
            kv("values", joined);
        }
        opt("start", s.start);
        opt("stop", s.stop);
        if (s.count)
            kv("count", std::to_string(*s.count));
        kv("spacing", s.spacing);
        kv("model", s.model);
    }
    return os.str();
}

std::uint64_t config_hash(const ExperimentConfig& cfg)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : serialize_config(cfg)) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

double dbm_to_watts(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }
double watts_to_dbm(double watts) { return 10.0 * std::log10(watts / 1e-3); }

QubitParams to_qubit(const QubitSection& q)
{
    return QubitParams(q.gamma_r_mhz * 1e6, q.gamma_phi_mhz * 1e6, q.omega_10_ghz * 1e9, RateUnit::Cyclic,
                       q.k_coupling_rad_s_sqrt_w, q.z0_ohm, q.label);
}

std::optional<TransmonEnergies> to_transmon(const QubitSection& q)
{
    if (q.e_c_mhz && q.e_j_ghz)
        return TransmonEnergies(*q.e_c_mhz * 1e6, *q.e_j_ghz * 1e9);
    return std::nullopt;
}

PulseSpec to_pulse(const PulseSection& s, const QubitParams& p)
{
    PulseSpec spec;
    spec.shape = parse_shape(s.shape);
    spec.tau = s.tau_ns * 1e-9;
    spec.t_start = s.t_start_us * 1e-6;
    spec.t_off = s.t_off_us * 1e-6;
    if (s.peak_dbm)
        spec.amplitude = std::sqrt(2.0 * p.z0() * dbm_to_watts(*s.peak_dbm));
    spec.target_n = s.target_n;
    if (s.phase_m && *s.phase_m > 0)
        spec.phase = PhaseSegments{*s.phase_m, s.phase_theta_deg.value_or(180.0) * std::numbers::pi / 180.0};
    spec.validate();
    return spec;
}

NoiseModel to_noise(const NoiseSection& n)
{
    NoiseModel m;
    m.v_n = n.v_n_nv * 1e-9;
    m.seed = n.seed;
    if (n.bin_ns)
        m.bin = *n.bin_ns * 1e-9;
    m.gain_db = n.gain_db;
    m.validate();
    return m;
}

Scenario to_scenario(const ExperimentConfig& cfg)
{
    if (!cfg.qubit)
        throw Error("config", "config-error", "missing section [qubit]");
    if (!cfg.pulse)
        throw Error("config", "config-error", "missing section [pulse]");
    const QubitParams q = to_qubit(*cfg.qubit);
    Scenario s{q, to_pulse(*cfg.pulse, q), std::nullopt, std::nullopt, 0.0, std::nullopt};
    if (cfg.simulation) {
        if (cfg.simulation->dt_ns)
            s.dt = *cfg.simulation->dt_ns * 1e-9;
        if (cfg.simulation->post_window_us)
            s.post_window = *cfg.simulation->post_window_us * 1e-6;
        s.detuning = kTwoPi * cfg.simulation->detuning_mhz * 1e6;
    }
    if (cfg.noise)
        s.noise = to_noise(*cfg.noise);
    return s;
}

} // namespace wqload
