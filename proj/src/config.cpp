#include "rbsim/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <toml.hpp>

namespace rbsim {

namespace {

class Reader {
  public:
    explicit Reader(std::string origin) : origin_(std::move(origin)) {}

    [[noreturn]] void fail(const std::string& key, const std::string& what) const {
        throw ConfigError(origin_ + ": " + key + ": " + what);
    }

    double number(const toml::node& node, const std::string& key) const {
        if (auto v = node.value_exact<double>()) {
            return *v;
        }
        if (auto v = node.value_exact<std::int64_t>()) {
            return static_cast<double>(*v);
        }
        if (auto s = node.value_exact<std::string>(); s && (*s == "inf" || *s == "infinity")) {
            return std::numeric_limits<double>::infinity();
        }
        fail(key, "expected a number");
    }

    std::int64_t integer(const toml::node& node, const std::string& key) const {
        if (auto v = node.value_exact<std::int64_t>()) {
            return *v;
        }
        fail(key, "expected an integer");
    }

    bool boolean(const toml::node& node, const std::string& key) const {
        if (auto v = node.value_exact<bool>()) {
            return *v;
        }
        fail(key, "expected true or false");
    }

    std::string string(const toml::node& node, const std::string& key) const {
        if (auto v = node.value_exact<std::string>()) {
            return *v;
        }
        fail(key, "expected a string");
    }

    std::optional<double> step(const toml::node& node, const std::string& key) const {
        if (auto s = node.value_exact<std::string>()) {
            if (*s == "auto") {
                return std::nullopt;
            }
            fail(key, "expected a positive number or \"auto\"");
        }
        return number(node, key);
    }

    const toml::array& array(const toml::node& node, const std::string& key) const {
        if (const auto* a = node.as_array()) {
            if (a->empty()) {
                fail(key, "sweep axis must not be empty");
            }
            return *a;
        }
        fail(key, "expected an array");
    }

  private:
    std::string origin_;
};

void read_ic(const Reader& rd, const toml::table& table, ICSpec& ic,
             const std::filesystem::path& base_dir) {
    for (const auto& [k, node] : table) {
        const std::string key = "ic." + std::string(k.str());
        const std::string_view name = k.str();
        if (name == "kind") {
            const std::string kind = rd.string(node, key);
            if (kind == "taylor_green") {
                ic.kind = ICSpec::Kind::taylor_green;
            } else if (kind == "random_band") {
                ic.kind = ICSpec::Kind::random_band;
            } else if (kind == "file") {
                ic.kind = ICSpec::Kind::file;
            } else {
                rd.fail(key, "unknown kind '" + kind + "' (taylor_green, random_band, file)");
            }
        } else if (name == "amplitude") {
            ic.amplitude = rd.number(node, key);
        } else if (name == "theta_amplitude") {
            ic.theta_amplitude = rd.number(node, key);
        } else if (name == "k_lo") {
            ic.k_lo = rd.number(node, key);
        } else if (name == "k_hi") {
            ic.k_hi = rd.number(node, key);
        } else if (name == "file") {
            std::filesystem::path p = rd.string(node, key);
            if (p.is_relative() && !base_dir.empty()) {
                p = base_dir / p;
            }
            ic.file = p.lexically_normal().string();
        } else {
            rd.fail(key, "unknown key");
        }
    }
}

void read_physics(const Reader& rd, const toml::table& table, PhysicsToggles& phys) {
    for (const auto& [k, node] : table) {
        const std::string key = "physics." + std::string(k.str());
        const std::string_view name = k.str();
        if (name == "advection") {
            phys.advection = rd.boolean(node, key);
        } else if (name == "buoyancy") {
            phys.buoyancy = rd.boolean(node, key);
        } else if (name == "source") {
            phys.source = rd.boolean(node, key);
        } else if (name == "dissipation") {
            phys.dissipation = rd.boolean(node, key);
        } else {
            rd.fail(key, "unknown key");
        }
    }
}

void read_sweep(const Reader& rd, const toml::table& table, SweepAxes& sweep) {
    for (const auto& [k, node] : table) {
        const std::string key = "sweep." + std::string(k.str());
        const std::string_view name = k.str();
        const toml::array& values = rd.array(node, key);
        for (const toml::node& v : values) {
            if (name == "symbol") {
                sweep.symbol.push_back(rd.string(v, key));
            } else if (name == "n") {
                sweep.n.push_back(static_cast<int>(rd.integer(v, key)));
            } else if (name == "dt") {
                sweep.dt.push_back(rd.step(v, key));
            } else if (name == "amplitude") {
                sweep.amplitude.push_back(rd.number(v, key));
            } else {
                rd.fail(key, "unknown sweep axis (symbol, n, dt, amplitude)");
            }
        }
    }
}

std::string num(double v) {
    if (std::isinf(v)) {
        return "\"inf\"";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s = buf;
    if (s.find_first_of(".eEn") == std::string::npos) {
        s += ".0";
    }
    return s;
}

std::string quoted(const std::string& s) {
    std::ostringstream out;
    out << toml::value<std::string>(s);
    return out.str();
}

}  // namespace

const char* ic_kind_name(ICSpec::Kind kind) {
    switch (kind) {
        case ICSpec::Kind::random_band:
            return "random_band";
        case ICSpec::Kind::file:
            return "file";
        case ICSpec::Kind::taylor_green:
        default:
            return "taylor_green";
    }
}

ConfigFile parse_config_text(const std::string& text, const std::filesystem::path& base_dir,
                             const std::string& origin) {
    toml::table root;
    try {
        root = toml::parse(text, origin);
    } catch (const toml::parse_error& e) {
        std::ostringstream msg;
        msg << origin << ":" << e.source().begin.line << ":" << e.source().begin.column << ": "
            << e.description();
        throw ConfigError(msg.str());
    }
    const Reader rd(origin);
    ConfigFile out;
    SolverConfig& c = out.solver;
    for (const auto& [k, node] : root) {
        const std::string key(k.str());
        if (key == "n") {
            c.n = static_cast<int>(rd.integer(node, key));
        } else if (key == "box_length") {
            c.box_length = rd.number(node, key);
        } else if (key == "symbol") {
            c.symbol = rd.string(node, key);
        } else if (key == "dt") {
            c.dt = rd.step(node, key);
        } else if (key == "cfl") {
            c.cfl = rd.number(node, key);
        } else if (key == "dt_max") {
            c.dt_max = rd.number(node, key);
        } else if (key == "t_end") {
            c.t_end = rd.number(node, key);
        } else if (key == "record_every") {
            c.record_every = static_cast<int>(rd.integer(node, key));
        } else if (key == "seed") {
            const std::int64_t s = rd.integer(node, key);
            if (s < 0) {
                rd.fail(key, "must be >= 0");
            }
            c.seed = static_cast<std::uint64_t>(s);
        } else if (key == "dealias") {
            c.dealias = rd.boolean(node, key);
        } else if (key == "hs") {
            c.hs = rd.number(node, key);
        } else if (key == "checkpoint_every") {
            c.checkpoint_every = static_cast<int>(rd.integer(node, key));
        } else if (key == "transport_p") {
            c.transport_p = rd.number(node, key);
        } else if (key == "ic" && node.is_table()) {
            read_ic(rd, *node.as_table(), c.ic, base_dir);
        } else if (key == "physics" && node.is_table()) {
            read_physics(rd, *node.as_table(), c.physics);
        } else if (key == "sweep" && node.is_table()) {
            read_sweep(rd, *node.as_table(), out.sweep);
        } else {
            rd.fail(key, "unknown key");
        }
    }
    try {
        c.validate();
        (void)SymbolG::parse(c.symbol);
    } catch (const ConfigError& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    return out;
}

ConfigFile parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path.parent_path(), path.string());
}

std::string to_toml(const SolverConfig& c) {
    std::ostringstream out;
    out << "n = " << c.n << '\n'
        << "box_length = " << num(c.box_length) << '\n'
        << "symbol = " << quoted(c.symbol) << '\n'
        << "dt = " << (c.dt ? num(*c.dt) : "\"auto\"") << '\n'
        << "cfl = " << num(c.cfl) << '\n'
        << "dt_max = " << num(c.dt_max) << '\n'
        << "t_end = " << num(c.t_end) << '\n'
        << "record_every = " << c.record_every << '\n'
        << "seed = " << c.seed << '\n'
        << "dealias = " << (c.dealias ? "true" : "false") << '\n'
        << "hs = " << num(c.hs) << '\n'
        << "checkpoint_every = " << c.checkpoint_every << '\n'
        << "transport_p = " << num(c.transport_p) << '\n'
        << "\n[ic]\n"
        << "kind = \"" << ic_kind_name(c.ic.kind) << "\"\n"
        << "amplitude = " << num(c.ic.amplitude) << '\n'
        << "theta_amplitude = " << num(c.ic.theta_amplitude) << '\n'
        << "k_lo = " << num(c.ic.k_lo) << '\n'
        << "k_hi = " << num(c.ic.k_hi) << '\n';
    if (!c.ic.file.empty()) {
        out << "file = " << quoted(c.ic.file) << '\n';
    }
    out << "\n[physics]\n"
        << "advection = " << (c.physics.advection ? "true" : "false") << '\n'
        << "buoyancy = " << (c.physics.buoyancy ? "true" : "false") << '\n'
        << "source = " << (c.physics.source ? "true" : "false") << '\n'
        << "dissipation = " << (c.physics.dissipation ? "true" : "false") << '\n';
    return out.str();
}

std::vector<SolverConfig> expand_sweep(const ConfigFile& config) {
    const SolverConfig& base = config.solver;
    const SweepAxes& ax = config.sweep;
    const std::vector<std::string> symbols = ax.symbol.empty() ? std::vector{base.symbol} : ax.symbol;
    const std::vector<int> ns = ax.n.empty() ? std::vector{base.n} : ax.n;
    const std::vector<std::optional<double>> dts = ax.dt.empty() ? std::vector{base.dt} : ax.dt;
    const std::vector<double> amps = ax.amplitude.empty() ? std::vector{base.ic.amplitude} : ax.amplitude;
    std::vector<SolverConfig> out;
    for (const auto& s : symbols) {
        for (int n : ns) {
            for (const auto& dt : dts) {
                for (double a : amps) {
                    SolverConfig c = base;
                    c.symbol = s;
                    c.n = n;
                    c.dt = dt;
                    c.ic.amplitude = a;
                    c.validate();
                    (void)SymbolG::parse(c.symbol);
                    out.push_back(std::move(c));
                }
            }
        }
    }
    return out;
}

}  // namespace rbsim
