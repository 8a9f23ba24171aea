#include "rbsim/littlewood_paley.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "rbsim/spectral.hpp"

namespace rbsim {

namespace {

double bump(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) {
        return {};
    }
    return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

double parse_index(const std::string& value, const std::string& text) {
    if (value == "inf" || value == "infinity") {
        return std::numeric_limits<double>::infinity();
    }
    try {
        size_t used = 0;
        const double v = std::stod(value, &used);
        if (used == value.size()) {
            return v;
        }
    } catch (const std::exception&) {
    }
    throw ConfigError("Besov spec '" + text + "': cannot parse '" + value + "'");
}

}  // namespace

double lp_chi(double r) {
    if (r <= 1.0) {
        return 1.0;
    }
    if (r >= 4.0 / 3.0) {
        return 0.0;
    }
    const double t = 3.0 * (r - 1.0);
    const double a = bump(t);
    const double b = bump(1.0 - t);
    return b / (a + b);
}

double lp_phi(double r) { return lp_chi(0.5 * r) - lp_chi(r); }

DyadicPartition::DyadicPartition(const Grid2D& grid) : grid_(grid) {
    j_max_ = static_cast<int>(std::floor(std::log2(grid.n() / 3.0)));
    if (j_max_ < 2) {
        throw Error("dyadic partition needs j_max >= 2; n=" + std::to_string(grid.n()) +
                    " gives " + std::to_string(j_max_));
    }
    const RealField& k = grid.kmag();
    weights_.push_back(k.unaryExpr([](double r) { return lp_chi(r); }));
    for (int j = 0; j <= j_max_; ++j) {
        const double scale = std::ldexp(1.0, -j);
        weights_.push_back(k.unaryExpr([scale](double r) { return lp_phi(scale * r); }));
    }
}

void DyadicPartition::check_block(int j) const {
    if (j < -1 || j > j_max_) {
        throw Error("Littlewood-Paley block " + std::to_string(j) + " outside [-1, " +
                    std::to_string(j_max_) + "]");
    }
}

const RealField& DyadicPartition::weights(int j) const {
    check_block(j);
    return weights_[static_cast<size_t>(j + 1)];
}

SpectralField DyadicPartition::delta(const SpectralField& f, int j) const {
    return weights(j) * f;
}

SpectralField DyadicPartition::low_pass(const SpectralField& f, int j) const {
    if (j < 0 || j > j_max_ + 1) {
        throw Error("S_j: j=" + std::to_string(j) + " outside [0, " + std::to_string(j_max_ + 1) +
                    "]");
    }
    RealField w = RealField::Zero(grid_.n(), grid_.n());
    for (int k = -1; k <= j - 1; ++k) {
        w += weights(k);
    }
    return w * f;
}

double DyadicPartition::partition_defect() const {
    RealField total = RealField::Zero(grid_.n(), grid_.n());
    for (const auto& w : weights_) {
        total += w;
    }
    return ((total - 1.0).abs() * grid_.dealias_mask()).maxCoeff();
}

SpectralField delta_j(const DyadicPartition& partition, const SpectralField& f, int j) {
    return partition.delta(f, j);
}

SpectralField s_j(const DyadicPartition& partition, const SpectralField& f, int j) {
    return partition.low_pass(f, j);
}

double BesovWeight::operator()(int j) const {
    if (power == 0.0 || !g) {
        return 1.0;
    }
    return std::pow((*g)(std::ldexp(1.0, j)), power);
}

BesovNormSpec BesovNormSpec::parse(const std::string& text, const std::optional<SymbolG>& g) {
    std::string body = trim(text);
    if (body.rfind("B:", 0) == 0) {
        body = body.substr(2);
    }
    BesovNormSpec spec;
    std::stringstream stream(body);
    std::string item;
    while (std::getline(stream, item, ',')) {
        item = trim(item);
        if (item.empty()) {
            continue;
        }
        if (item == "hom") {
            spec.homogeneous = true;
            continue;
        }
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("Besov spec '" + text + "': expected key=value, got '" + item + "'");
        }
        const std::string key = trim(item.substr(0, eq));
        const std::string value = trim(item.substr(eq + 1));
        if (key == "s") {
            spec.s = parse_index(value, text);
        } else if (key == "p") {
            spec.p = parse_index(value, text);
        } else if (key == "q") {
            spec.q = parse_index(value, text);
        } else if (key == "w") {
            if (value == "none") {
                spec.weight = {};
            } else if (value == "g") {
                spec.weight = {g, 1.0};
            } else if (value.rfind("g^", 0) == 0) {
                spec.weight = {g, parse_index(value.substr(2), text)};
            } else {
                throw ConfigError("Besov spec '" + text + "': unknown weight '" + value + "'");
            }
            if (spec.weight.power != 0.0 && !g) {
                throw ConfigError("Besov spec '" + text + "': weighted norm needs a symbol g");
            }
        } else {
            throw ConfigError("Besov spec '" + text + "': unknown key '" + key + "'");
        }
    }
    if (!(spec.p >= 1.0) || !(spec.q >= 1.0)) {
        throw ConfigError("Besov spec '" + text + "': p and q must be >= 1");
    }
    return spec;
}

std::vector<double> block_norms(const DyadicPartition& partition, const SpectralField& f,
                                double p) {
    const Grid2D& grid = partition.grid();
    std::vector<double> out;
    for (int j = -1; j <= partition.j_max(); ++j) {
        out.push_back(lp_norm(grid, real_inverse(grid, partition.delta(f, j)), p));
    }
    return out;
}

double besov_norm(const DyadicPartition& partition, const SpectralField& f,
                  const BesovNormSpec& spec) {
    if (!(spec.p >= 1.0) || !(spec.q >= 1.0)) {
        throw Error("besov_norm: p and q must be >= 1");
    }
    SpectralField field = f;
    if (spec.homogeneous) {
        field(0, 0) = 0.0;
    }
    const std::vector<double> blocks = block_norms(partition, field, spec.p);
    double acc = 0.0;
    for (int j = -1; j <= partition.j_max(); ++j) {
        const double term =
            std::pow(2.0, j * spec.s) * spec.weight(j) * blocks[static_cast<size_t>(j + 1)];
        if (std::isinf(spec.q)) {
            acc = std::max(acc, term);
        } else {
            acc += std::pow(term, spec.q);
        }
    }
    return std::isinf(spec.q) ? acc : std::pow(acc, 1.0 / spec.q);
}

BonyParts bony_decompose(const DyadicPartition& partition, const SpectralField& u,
                         const SpectralField& v) {
    const Grid2D& grid = partition.grid();
    const int blocks = partition.j_max() + 2;
    std::vector<RealField> ub, vb;
    for (int j = -1; j <= partition.j_max(); ++j) {
        ub.push_back(real_inverse(grid, partition.delta(u, j)));
        vb.push_back(real_inverse(grid, partition.delta(v, j)));
    }
    const RealField zero = RealField::Zero(grid.n(), grid.n());
    RealField low_high = zero, high_low = zero, remainder = zero;
    RealField u_low = zero, v_low = zero;  // S_{j-1} at block j
    for (int b = 0; b < blocks; ++b) {
        // block index j = b - 1; S_{j-1} sums blocks up to j-2, i.e. b-2
        if (b >= 2) {
            u_low += ub[static_cast<size_t>(b - 2)];
            v_low += vb[static_cast<size_t>(b - 2)];
        }
        low_high += u_low * vb[static_cast<size_t>(b)];
        high_low += v_low * ub[static_cast<size_t>(b)];
        RealField tilde = vb[static_cast<size_t>(b)];
        if (b > 0) {
            tilde += vb[static_cast<size_t>(b - 1)];
        }
        if (b + 1 < blocks) {
            tilde += vb[static_cast<size_t>(b + 1)];
        }
        remainder += ub[static_cast<size_t>(b)] * tilde;
    }
    return {dealias(grid, forward(grid, low_high)), dealias(grid, forward(grid, high_low)),
            dealias(grid, forward(grid, remainder))};
}

}  // namespace rbsim
