#include "rbsim/checkpoint.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace rbsim {

namespace {

std::map<std::string, std::string> header_fields(const std::string& line) {
    std::map<std::string, std::string> out;
    std::istringstream in(line.substr(1));
    std::string token;
    while (in >> token) {
        const auto eq = token.find('=');
        if (eq != std::string::npos) {
            out[token.substr(0, eq)] = token.substr(eq + 1);
        }
    }
    return out;
}

}  // namespace

void write_checkpoint(const std::filesystem::path& path, const Grid2D& grid,
                      const SolverState& state, const std::string& symbol_spec) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) {
            throw Error("cannot write checkpoint " + tmp.string());
        }
        char buf[256];
        out << "# rbsim-checkpoint version=" << checkpoint_version << "\n";
        std::snprintf(buf, sizeof buf, "# n=%d box_length=%.17g t=%.17g symbol=", grid.n(),
                      grid.box_length(), state.t);
        out << buf << symbol_spec << "\n";
        out << "m1,m2,omega_re,omega_im,theta_re,theta_im\n";
        for (int b = 0; b < grid.n(); ++b) {
            for (int a = 0; a < grid.n(); ++a) {
                const auto w = state.omega(a, b);
                const auto th = state.theta(a, b);
                std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g,%.17g\n", grid.mode(a),
                              grid.mode(b), w.real(), w.imag(), th.real(), th.imag());
                out << buf;
            }
        }
        if (!out) {
            throw Error("error while writing checkpoint " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

Checkpoint read_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open checkpoint " + path.string());
    }
    std::string line;
    if (!std::getline(in, line) || line.rfind("# rbsim-checkpoint", 0) != 0) {
        throw Error(path.string() + ": not an rbsim checkpoint");
    }
    if (header_fields(line)["version"] != std::to_string(checkpoint_version)) {
        throw Error(path.string() + ": unsupported checkpoint version");
    }
    if (!std::getline(in, line) || line.empty() || line[0] != '#') {
        throw Error(path.string() + ": missing grid header");
    }
    auto fields = header_fields(line);
    Checkpoint ck;
    try {
        ck.n = std::stoi(fields.at("n"));
        ck.box_length = std::stod(fields.at("box_length"));
        ck.t = std::stod(fields.at("t"));
        ck.symbol = fields.at("symbol");
    } catch (const std::exception&) {
        throw Error(path.string() + ": malformed grid header");
    }
    const Grid2D grid(ck.n, ck.box_length);
    std::getline(in, line);  // column names
    ck.state.omega = SpectralField::Zero(ck.n, ck.n);
    ck.state.theta = SpectralField::Zero(ck.n, ck.n);
    ck.state.t = ck.t;
    long rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        int m1 = 0, m2 = 0;
        double wr = 0, wi = 0, tr = 0, ti = 0;
        if (std::sscanf(line.c_str(), "%d,%d,%lf,%lf,%lf,%lf", &m1, &m2, &wr, &wi, &tr, &ti) != 6) {
            throw Error(path.string() + ": malformed row '" + line + "'");
        }
        if (m1 < -ck.n / 2 || m1 >= ck.n / 2 || m2 < -ck.n / 2 || m2 >= ck.n / 2) {
            throw Error(path.string() + ": mode out of range in row '" + line + "'");
        }
        ck.state.omega(grid.index(m1), grid.index(m2)) = {wr, wi};
        ck.state.theta(grid.index(m1), grid.index(m2)) = {tr, ti};
        ++rows;
    }
    if (rows != static_cast<long>(ck.n) * ck.n) {
        throw Error(path.string() + ": expected " + std::to_string(ck.n * ck.n) + " rows, found " +
                    std::to_string(rows));
    }
    return ck;
}

}  // namespace rbsim
