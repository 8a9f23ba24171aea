#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rbsim/types.hpp"

namespace rbsim {

enum class SymbolFamily { constant, log, loglog, tabulated };

/// Radial dissipation weight g(r), r >= 0. The dissipation operator has
/// symbol |k| / g(|k|).
///
///   constant:  g = c0
///   log:       g = ln(e + r)^mu1
///   loglog:    g = ln(e + r) * ln(e^2 + ln(1 + r))^mu2
///   tabulated: natural cubic spline through (r_i, g_i), held constant
///              outside the table
class SymbolG {
  public:
    static SymbolG constant(double c0);
    static SymbolG log(double mu1);
    static SymbolG loglog(double mu2);
    static SymbolG tabulated(std::vector<double> r, std::vector<double> g,
                             std::string source = "inline");
    /// Two-column CSV (r, g), optional header line, '#' comments.
    static SymbolG from_csv(const std::filesystem::path& path);
    /// Parses "constant:c0=1", "log:mu1=1", "loglog:mu2=0.5", "tabulated:path.csv".
    static SymbolG parse(const std::string& spec);

    double operator()(double r) const;
    /// First and second radial derivatives. Analytic for built-in families,
    /// central differences with step 1e-4 r for tabulated symbols.
    double d1(double r) const;
    double d2(double r) const;

    SymbolFamily family() const { return family_; }
    double parameter() const { return param_; }
    /// Lower bound C0 claimed by the family: g(0) for built-ins.
    double lower_bound() const;
    /// Canonical spec string, accepted by parse().
    std::string spec() const;

    /// Dissipation rate |k| / g(|k|) applied elementwise.
    template <typename Derived>
    auto rate(const Eigen::ArrayBase<Derived>& k) const {
        return k.derived().unaryExpr([this](double r) { return r / (*this)(r); });
    }

  private:
    SymbolG(SymbolFamily family, double param) : family_(family), param_(param) {}

    double spline(double r, int derivative) const;

    SymbolFamily family_;
    double param_ = 0.0;
    std::string source_;
    std::vector<double> r_, g_, m_;  // knots, values, second derivatives
};

struct ConditionA {
    bool pass = false;
    double min_g = 0.0;
    double c0 = 0.0;
    bool monotone = false;
};

struct ConditionB {
    bool pass = false;
    /// sup over sample points of |r g'| / g and |r^2 g''| / g.
    double c_first = 0.0;
    double c_second = 0.0;
    double constant() const { return std::max(c_first, c_second); }
};

struct ConditionC {
    bool pass = false;
    /// Per sigma: whether g(r)/r^sigma decreases strictly over the tail.
    std::vector<double> sigma;
    std::vector<bool> decreasing;
    /// Largest local log-slope d ln g / d ln r observed on the tail.
    double max_tail_slope = 0.0;
    double tail_lo = 0.0;
    double tail_hi = 0.0;
};

struct SymbolReport {
    ConditionA condition_a;
    ConditionB condition_b;
    ConditionC condition_c;
    std::vector<double> lattice;
    bool all_pass() const {
        return condition_a.pass && condition_b.pass && condition_c.pass;
    }
};

/// Checks the admissibility conditions on a deterministic sample lattice
/// {0} + log-spaced points in [1e-2, k_max] + the integers up to min(k_max, 256).
/// Condition (c) is a finite proxy: strict decrease of g/r^sigma on
/// [k_max/4, k_max].
SymbolReport validate_symbol(const SymbolG& g, double k_max,
                             const std::vector<double>& sigma_grid = {0.25, 0.5, 0.75, 1.0});

}  // namespace rbsim
