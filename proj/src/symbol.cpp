#include "rbsim/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

namespace rbsim {

namespace {

constexpr double e = std::numbers::e;

double parse_number(const std::string& text, const std::string& context) {
    try {
        size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) {
            throw std::invalid_argument(text);
        }
        return v;
    } catch (const std::exception&) {
        throw ConfigError("cannot parse number '" + text + "' in " + context);
    }
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(b, last - b + 1);
}

}  // namespace

SymbolG SymbolG::constant(double c0) {
    if (!(c0 > 0.0) || !std::isfinite(c0)) {
        throw ConfigError("constant symbol requires c0 > 0");
    }
    return SymbolG(SymbolFamily::constant, c0);
}

SymbolG SymbolG::log(double mu1) {
    if (!(mu1 > 0.0) || !std::isfinite(mu1)) {
        throw ConfigError("log symbol requires mu1 > 0");
    }
    return SymbolG(SymbolFamily::log, mu1);
}

SymbolG SymbolG::loglog(double mu2) {
    if (!(mu2 > 0.0) || !std::isfinite(mu2)) {
        throw ConfigError("loglog symbol requires mu2 > 0");
    }
    return SymbolG(SymbolFamily::loglog, mu2);
}

SymbolG SymbolG::tabulated(std::vector<double> r, std::vector<double> g, std::string source) {
    if (r.size() != g.size() || r.size() < 2) {
        throw ConfigError("tabulated symbol needs at least two (r, g) rows");
    }
    for (size_t i = 0; i < r.size(); ++i) {
        if (!std::isfinite(r[i]) || !std::isfinite(g[i]) || r[i] < 0.0) {
            throw ConfigError("tabulated symbol: invalid row " + std::to_string(i));
        }
        if (i > 0 && !(r[i] > r[i - 1])) {
            throw ConfigError("tabulated symbol: r must be strictly increasing");
        }
    }
    SymbolG out(SymbolFamily::tabulated, 0.0);
    out.source_ = std::move(source);
    // natural cubic spline: solve the tridiagonal system for second derivatives
    const size_t n = r.size();
    std::vector<double> m(n, 0.0), c(n, 0.0), d(n, 0.0);
    for (size_t i = 1; i + 1 < n; ++i) {
        const double h0 = r[i] - r[i - 1];
        const double h1 = r[i + 1] - r[i];
        const double diag = 2.0 * (h0 + h1);
        const double rhs = 6.0 * ((g[i + 1] - g[i]) / h1 - (g[i] - g[i - 1]) / h0);
        const double denom = diag - h0 * c[i - 1];
        c[i] = h1 / denom;
        d[i] = (rhs - h0 * d[i - 1]) / denom;
    }
    for (size_t i = n - 1; i-- > 1;) {
        m[i] = d[i] - c[i] * m[i + 1];
    }
    out.r_ = std::move(r);
    out.g_ = std::move(g);
    out.m_ = std::move(m);
    return out;
}

SymbolG SymbolG::from_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open symbol table " + path.string());
    }
    std::vector<double> r, g;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) {
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                              ": expected two comma-separated columns");
        }
        const std::string a = trim(line.substr(0, comma));
        const std::string b = trim(line.substr(comma + 1));
        if (r.empty() && g.empty() && !a.empty() && std::isalpha(static_cast<unsigned char>(a[0]))) {
            continue;  // header
        }
        const std::string where = path.string() + ":" + std::to_string(line_no);
        r.push_back(parse_number(a, where));
        g.push_back(parse_number(b, where));
    }
    return tabulated(std::move(r), std::move(g), path.string());
}

SymbolG SymbolG::parse(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string family = trim(spec.substr(0, colon));
    const std::string rest = colon == std::string::npos ? "" : trim(spec.substr(colon + 1));
    auto param = [&](const std::string& key, double fallback) {
        if (rest.empty()) {
            return fallback;
        }
        const auto eq = rest.find('=');
        if (eq == std::string::npos || trim(rest.substr(0, eq)) != key) {
            throw ConfigError("symbol '" + spec + "': expected parameter " + key + "=<value>");
        }
        return parse_number(trim(rest.substr(eq + 1)), "symbol '" + spec + "'");
    };
    if (family == "constant") {
        return constant(param("c0", 1.0));
    }
    if (family == "log") {
        return log(param("mu1", 1.0));
    }
    if (family == "loglog") {
        return loglog(param("mu2", 1.0));
    }
    if (family == "tabulated") {
        if (rest.empty()) {
            throw ConfigError("tabulated symbol needs a CSV path: tabulated:<file>");
        }
        return from_csv(rest);
    }
    throw ConfigError("unknown symbol family '" + family +
                      "' (expected constant, log, loglog or tabulated)");
}

double SymbolG::spline(double r, int derivative) const {
    if (r <= r_.front() || r >= r_.back()) {
        if (derivative > 0) {
            return 0.0;
        }
        return r <= r_.front() ? g_.front() : g_.back();
    }
    const auto it = std::upper_bound(r_.begin(), r_.end(), r);
    const size_t i = static_cast<size_t>(it - r_.begin()) - 1;
    const double h = r_[i + 1] - r_[i];
    const double a = (r_[i + 1] - r) / h;
    const double b = (r - r_[i]) / h;
    switch (derivative) {
        case 0:
            return a * g_[i] + b * g_[i + 1] +
                   ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
        case 1:
            return (g_[i + 1] - g_[i]) / h - (3.0 * a * a - 1.0) * h * m_[i] / 6.0 +
                   (3.0 * b * b - 1.0) * h * m_[i + 1] / 6.0;
        default:
            return a * m_[i] + b * m_[i + 1];
    }
}

double SymbolG::operator()(double r) const {
    switch (family_) {
        case SymbolFamily::constant:
            return param_;
        case SymbolFamily::log:
            return std::pow(std::log(e + r), param_);
        case SymbolFamily::loglog:
            return std::log(e + r) * std::pow(std::log(e * e + std::log1p(r)), param_);
        case SymbolFamily::tabulated:
            return spline(r, 0);
    }
    return 0.0;
}

double SymbolG::d1(double r) const {
    switch (family_) {
        case SymbolFamily::constant:
            return 0.0;
        case SymbolFamily::log: {
            const double l = std::log(e + r);
            return param_ * std::pow(l, param_ - 1.0) / (e + r);
        }
        case SymbolFamily::loglog: {
            const double a = std::log(e + r);
            const double dd = e * e + std::log1p(r);
            const double b = std::log(dd);
            const double da = 1.0 / (e + r);
            const double db = 1.0 / (dd * (1.0 + r));
            return da * std::pow(b, param_) + a * param_ * std::pow(b, param_ - 1.0) * db;
        }
        case SymbolFamily::tabulated: {
            const double h = r > 0.0 ? 1e-4 * r : 1e-4;
            if (r - h < 0.0) {
                return (spline(r + h, 0) - spline(r, 0)) / h;
            }
            return (spline(r + h, 0) - spline(r - h, 0)) / (2.0 * h);
        }
    }
    return 0.0;
}

double SymbolG::d2(double r) const {
    switch (family_) {
        case SymbolFamily::constant:
            return 0.0;
        case SymbolFamily::log: {
            const double l = std::log(e + r);
            const double s = (e + r) * (e + r);
            return (param_ * (param_ - 1.0) * std::pow(l, param_ - 2.0) -
                    param_ * std::pow(l, param_ - 1.0)) /
                   s;
        }
        case SymbolFamily::loglog: {
            const double mu = param_;
            const double a = std::log(e + r);
            const double dd = e * e + std::log1p(r);
            const double b = std::log(dd);
            const double da = 1.0 / (e + r);
            const double dda = -da * da;
            const double db = 1.0 / (dd * (1.0 + r));
            const double ddb = -(1.0 + dd) / (dd * dd * (1.0 + r) * (1.0 + r));
            const double bm = std::pow(b, mu);
            const double dbm = mu * std::pow(b, mu - 1.0) * db;
            const double ddbm = mu * (mu - 1.0) * std::pow(b, mu - 2.0) * db * db +
                                mu * std::pow(b, mu - 1.0) * ddb;
            return dda * bm + 2.0 * da * dbm + a * ddbm;
        }
        case SymbolFamily::tabulated: {
            const double h = r > 0.0 ? 1e-4 * r : 1e-4;
            const double lo = std::max(0.0, r - h);
            const double hi = lo + 2.0 * h;
            const double mid = lo + h;
            return (spline(hi, 0) - 2.0 * spline(mid, 0) + spline(lo, 0)) / (h * h);
        }
    }
    return 0.0;
}

double SymbolG::lower_bound() const {
    return family_ == SymbolFamily::constant ? param_ : (*this)(0.0);
}

std::string SymbolG::spec() const {
    std::ostringstream out;
    out.precision(17);
    switch (family_) {
        case SymbolFamily::constant:
            out << "constant:c0=" << param_;
            break;
        case SymbolFamily::log:
            out << "log:mu1=" << param_;
            break;
        case SymbolFamily::loglog:
            out << "loglog:mu2=" << param_;
            break;
        case SymbolFamily::tabulated:
            out << "tabulated:" << source_;
            break;
    }
    return out.str();
}

SymbolReport validate_symbol(const SymbolG& g, double k_max, const std::vector<double>& sigma_grid) {
    if (!(k_max > 1e-2)) {
        throw Error("validate_symbol: k_max must exceed 1e-2");
    }
    for (double s : sigma_grid) {
        if (!(s > 0.0 && s <= 1.0)) {
            throw Error("validate_symbol: sigma values must lie in (0, 1]");
        }
    }
    SymbolReport report;
    std::vector<double>& lattice = report.lattice;
    lattice.push_back(0.0);
    constexpr int log_points = 600;
    const double lo = std::log(1e-2);
    const double hi = std::log(k_max);
    for (int i = 0; i < log_points; ++i) {
        lattice.push_back(std::exp(lo + (hi - lo) * i / (log_points - 1)));
    }
    for (int k = 1; k <= std::min(k_max, 256.0); ++k) {
        lattice.push_back(k);
    }
    std::sort(lattice.begin(), lattice.end());
    lattice.erase(std::unique(lattice.begin(), lattice.end()), lattice.end());

    std::vector<double> values(lattice.size());
    std::transform(lattice.begin(), lattice.end(), values.begin(), [&](double r) { return g(r); });

    // (a)
    auto& a = report.condition_a;
    a.c0 = g.lower_bound();
    a.min_g = *std::min_element(values.begin(), values.end());
    a.monotone = true;
    for (size_t i = 1; i < values.size(); ++i) {
        if (values[i] < values[i - 1] * (1.0 - 1e-14)) {
            a.monotone = false;
        }
    }
    a.pass = a.c0 > 0.0 && a.min_g >= a.c0 * (1.0 - 1e-14) && a.monotone;

    // (b)
    auto& b = report.condition_b;
    bool finite = true;
    for (double r : lattice) {
        if (r == 0.0) {
            continue;
        }
        const double gr = g(r);
        const double c1 = std::abs(r * g.d1(r)) / gr;
        const double c2 = std::abs(r * r * g.d2(r)) / gr;
        if (!std::isfinite(c1) || !std::isfinite(c2)) {
            finite = false;
            continue;
        }
        b.c_first = std::max(b.c_first, c1);
        b.c_second = std::max(b.c_second, c2);
    }
    b.pass = finite;

    // (c)
    auto& c = report.condition_c;
    c.tail_lo = k_max / 4.0;
    c.tail_hi = k_max;
    std::vector<double> tail;
    for (double r : lattice) {
        if (r >= c.tail_lo && r <= c.tail_hi) {
            tail.push_back(r);
        }
    }
    c.max_tail_slope = -std::numeric_limits<double>::infinity();
    for (size_t i = 1; i < tail.size(); ++i) {
        const double slope =
            (std::log(g(tail[i])) - std::log(g(tail[i - 1]))) / (std::log(tail[i]) - std::log(tail[i - 1]));
        c.max_tail_slope = std::max(c.max_tail_slope, slope);
    }
    c.pass = tail.size() >= 2;
    for (double sigma : sigma_grid) {
        bool decreasing = tail.size() >= 2;
        for (size_t i = 1; i < tail.size(); ++i) {
            const double prev = g(tail[i - 1]) / std::pow(tail[i - 1], sigma);
            const double next = g(tail[i]) / std::pow(tail[i], sigma);
            if (!(next < prev)) {
                decreasing = false;
            }
        }
        c.sigma.push_back(sigma);
        c.decreasing.push_back(decreasing);
        c.pass = c.pass && decreasing;
    }
    return report;
}

}  // namespace rbsim
