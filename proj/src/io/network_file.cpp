#include "gridcert/io.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "gridcert/error.hpp"
#include "gridcert/toml_lite.hpp"

namespace gridcert {

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorKind::ValidationError, msg); }

class Reader {
public:
    Reader(const toml::Table& t, std::string where) : t_(t), where_(std::move(where)) {}

    double number(const std::string& key) {
        auto v = opt_number(key);
        if (!v) invalid(where_ + ": missing '" + key + "'");
        return *v;
    }
    std::optional<double> opt_number(const std::string& key) {
        seen_.insert(key);
        auto it = t_.values.find(key);
        if (it == t_.values.end()) return std::nullopt;
        if (!it->second.is_number()) invalid(where_ + ": '" + key + "' must be a number");
        const double d = std::get<double>(it->second.data);
        if (!std::isfinite(d)) invalid(where_ + ": '" + key + "' must be finite");
        return d;
    }
    std::string string(const std::string& key) {
        auto v = opt_string(key);
        if (!v) invalid(where_ + ": missing '" + key + "'");
        return *v;
    }
    std::optional<std::string> opt_string(const std::string& key) {
        seen_.insert(key);
        auto it = t_.values.find(key);
        if (it == t_.values.end()) return std::nullopt;
        if (!it->second.is_string()) invalid(where_ + ": '" + key + "' must be a string");
        return std::get<std::string>(it->second.data);
    }
    std::optional<int> opt_int(const std::string& key) {
        seen_.insert(key);
        auto it = t_.values.find(key);
        if (it == t_.values.end()) return std::nullopt;
        if (!it->second.is_number() || !it->second.integer) invalid(where_ + ": '" + key + "' must be an integer");
        return static_cast<int>(std::get<double>(it->second.data));
    }
    void allow_table(const std::string& key) { seen_.insert(key); }
    void finish() const {
        for (const auto& [k, v] : t_.values) {
            if (!seen_.count(k)) invalid(where_ + ": unknown key '" + k + "'");
        }
        for (const auto& [k, v] : t_.tables) {
            if (!seen_.count(k)) invalid(where_ + ": unknown table '" + k + "'");
        }
        for (const auto& [k, v] : t_.arrays) {
            if (!seen_.count(k)) invalid(where_ + ": unknown table array '" + k + "'");
        }
    }

private:
    const toml::Table& t_;
    std::string where_;
    std::set<std::string> seen_;
};

BusSpec read_bus(const toml::Table& t, std::size_t index, double omega0) {
    Reader r(t, "bus #" + std::to_string(index + 1));
    BusSpec b;
    b.id = r.string("id");
    if (b.id.empty()) invalid("bus #" + std::to_string(index + 1) + ": empty id");
    const std::string where = "bus '" + b.id + "'";
    const std::string kind = r.string("kind");

    auto xi_machine = [&]() -> double {
        r.allow_table("damper");
        const auto direct = r.opt_number("xi_sm");
        auto it = t.tables.find("damper");
        if (it != t.tables.end()) {
            if (direct) invalid(where + ": give either xi_sm or a damper table, not both");
            Reader d(*it->second, where + " damper");
            DamperCircuitParams p;
            p.L_Dd = d.number("L_Dd");
            p.R_Dd = d.number("R_Dd");
            p.L_ad_sub = d.number("L_ad_sub");
            p.L_aq_sub = d.number("L_aq_sub");
            p.omega_base = omega0;
            d.finish();
            try {
                const XiSM xi = damper_coefficient(p);
                b.damper = xi;
                return xi.seconds;
            } catch (const Error& e) {
                invalid(where + ": " + e.what());
            }
        }
        return direct.value_or(0.0);
    };

    try {
        if (kind == "sg" || kind == "sc") {
            MachineParams m;
            m.omega0 = omega0;
            m.is_condenser = kind == "sc";
            m.H = r.number("H");
            if (!m.is_condenser) {
                m.T_G = r.number("T_G");
                m.k_g = r.number("k_g");
                if (!(m.T_G > 0.0)) invalid(where + ": T_G must be > 0");
            }
            m.xi_sm = xi_machine();
            m.validate();
            b.device = m;
        } else if (kind == "droop" || kind == "pd") {
            ConverterParams c;
            c.omega0 = omega0;
            c.m_p = r.number("m_p");
            c.T_p = r.number("T_p");
            c.xi_c = kind == "pd" ? r.number("xi_c") : 0.0;
            c.validate();
            b.device = c;
        } else if (kind != "passive") {
            invalid(where + ": unknown kind '" + kind + "' (expected sg, sc, droop, pd or passive)");
        }
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::ValidationError) throw;
        invalid(where + ": " + e.what());
    }
    r.finish();
    return b;
}

LineParams read_line(const toml::Table& t, std::size_t index) {
    const std::string where = "line #" + std::to_string(index + 1);
    Reader r(t, where);
    LineParams l;
    l.from = r.string("from");
    l.to = r.string("to");
    l.r_pu = r.number("r_pu");
    const auto x = r.opt_number("x_pu");
    const auto lp = r.opt_number("l_pu");
    if (x && lp) invalid(where + ": give either x_pu or l_pu, not both");
    if (!x && !lp) invalid(where + ": missing 'x_pu' or 'l_pu'");
    // per-unit reactance at w0 equals per-unit inductance
    l.l_pu = x ? *x : *lp;
    r.finish();
    if (!(l.l_pu > 0.0)) invalid(where + ": inductance must be > 0");
    if (l.r_pu < 0.0) invalid(where + ": r_pu must be >= 0");
    if (l.from == l.to) invalid(where + ": endpoints must differ");
    return l;
}

}  // namespace

NetworkFile parse_network(const std::string& text, std::optional<double> rho_floor_override) {
    const toml::Table root = toml::parse(text);
    NetworkFile f;
    Reader top(root, "file");
    const auto ver = top.opt_int("format_version");
    if (!ver) invalid("file: missing 'format_version'");
    if (*ver != 1) invalid("file: unsupported format_version " + std::to_string(*ver));
    f.format_version = *ver;
    f.name = top.opt_string("name").value_or("");
    top.allow_table("system");
    top.allow_table("bus");
    top.allow_table("line");
    top.allow_table("certify");
    top.finish();

    auto sys = root.tables.find("system");
    if (sys == root.tables.end()) invalid("file: missing [system] table");
    {
        Reader r(*sys->second, "[system]");
        const double hz = r.number("nominal_frequency_hz");
        if (!(hz > 0.0)) invalid("[system]: nominal_frequency_hz must be > 0");
        f.spec.omega0 = 2.0 * std::numbers::pi * hz;
        f.spec.base_mva = r.opt_number("base_mva").value_or(100.0);
        f.spec.base_kv = r.opt_number("base_kv").value_or(0.0);
        r.finish();
    }

    if (auto c = root.tables.find("certify"); c != root.tables.end()) {
        Reader r(*c->second, "[certify]");
        f.certify.delta_hz = r.opt_number("delta_hz");
        f.certify.omega1_hz = r.opt_number("omega1_hz");
        f.certify.omega2_hz = r.opt_number("omega2_hz");
        f.certify.grid_lo_hz = r.opt_number("grid_lo_hz");
        f.certify.grid_hi_hz = r.opt_number("grid_hi_hz");
        f.certify.grid_n = r.opt_int("grid_n");
        f.certify.rho_floor = r.opt_number("rho_floor");
        r.finish();
    }
    f.spec.rho_floor = rho_floor_override ? *rho_floor_override : f.certify.rho_floor.value_or(0.0);
    if (f.spec.rho_floor < 0.0) invalid("rho_floor must be >= 0");

    auto buses = root.arrays.find("bus");
    if (buses == root.arrays.end() || buses->second.empty()) invalid("file: no [[bus]] entries");
    std::set<std::string> ids;
    for (std::size_t i = 0; i < buses->second.size(); ++i) {
        BusSpec b = read_bus(*buses->second[i], i, f.spec.omega0);
        if (!ids.insert(b.id).second) invalid("duplicate bus id '" + b.id + "'");
        f.spec.buses.push_back(std::move(b));
    }
    if (auto lines = root.arrays.find("line"); lines != root.arrays.end()) {
        for (std::size_t i = 0; i < lines->second.size(); ++i) {
            LineParams l = read_line(*lines->second[i], i);
            if (!ids.count(l.from) || !ids.count(l.to)) {
                invalid("line #" + std::to_string(i + 1) + ": unknown bus '" + (ids.count(l.from) ? l.to : l.from) + "'");
            }
            f.spec.lines.push_back(std::move(l));
        }
    }

    bool dynamic = false;
    for (const auto& b : f.spec.buses) dynamic = dynamic || b.device.has_value();
    if (!dynamic) invalid("network has no dynamic (non-passive) bus");
    try {
        (void)build_laplacian(f.spec);
        if (!f.spec.lines.empty()) (void)rho_range(f.spec);
    } catch (const Error& e) {
        invalid(e.what());
    }
    if (f.spec.lines.empty() && f.spec.buses.size() > 1) invalid("network with several buses has no lines");
    return f;
}

NetworkFile load_network(const std::filesystem::path& path, std::optional<double> rho_floor_override) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_network(ss.str(), rho_floor_override);
}

void apply_overrides(const CertifyOverrides& o, CertificationConfig& cfg) {
    const double two_pi = 2.0 * std::numbers::pi;
    if (o.delta_hz) cfg.delta = two_pi * *o.delta_hz;
    if (o.omega1_hz) cfg.omega1 = two_pi * *o.omega1_hz;
    if (o.omega2_hz) cfg.omega2 = two_pi * *o.omega2_hz;
    if (o.grid_lo_hz) cfg.omega_lo = two_pi * *o.grid_lo_hz;
    if (o.grid_hi_hz) cfg.omega_hi = two_pi * *o.grid_hi_hz;
    if (o.grid_n) cfg.grid_points = *o.grid_n;
}

}  // namespace gridcert
